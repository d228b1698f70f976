"""Pointwise losses and candidate cost functions kept in a 3-term basis.

A :class:`CostFn` is the accumulated cost of a candidate's last segment as a
function of the segment parameter ``mu``:

* quadratic: ``a*mu**2 + b*mu + c``  (``a`` counts the observations)
* poisson:   ``a*mu - b*log(mu) + c`` (``a`` counts observations, ``b`` sums them)

Adding one observation is coefficient addition, so a candidate's cost never
has to be rebuilt from prefix sums.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateCostError, InputError
from .intervals import Interval, make_interval

#: Lower edge of the poisson domain when the data contain zeros (log diverges at 0).
POISSON_EPS = 1e-10

_NEWTON_MAX_ITER = 200
_DBL_EPS = 2.220446049250313e-16


class LossKind(str, enum.Enum):
    QUADRATIC = "quadratic"
    POISSON = "poisson"

    @classmethod
    def coerce(cls, value: "LossKind | str") -> "LossKind":
        try:
            return cls(value)
        except ValueError:
            raise InputError(f"unknown loss {value!r}; expected one of "
                             f"{[k.value for k in cls]}") from None


@dataclass(frozen=True, slots=True)
class CostFn:
    """Coefficients of a candidate cost in the basis of its loss kind."""

    kind: LossKind
    a: float
    b: float
    c: float

    # poisson names for the same slots
    @property
    def s(self) -> float:
        return self.a

    @property
    def w(self) -> float:
        return self.b

    @classmethod
    def constant(cls, kind: LossKind, value: float) -> "CostFn":
        return cls(LossKind.coerce(kind), 0.0, 0.0, float(value))

    def __call__(self, mu: float) -> float:
        if self.kind is LossKind.QUADRATIC:
            return self.a * mu * mu + self.b * mu + self.c
        return self.a * mu - self.b * math.log(mu) + self.c

    def __add__(self, other: "CostFn") -> "CostFn":
        return add(self, other)


def point_cost(loss: LossKind | str, y: float) -> CostFn:
    """Cost of a single observation ``y`` as a function of ``mu``."""
    loss = LossKind.coerce(loss)
    y = float(y)
    if not math.isfinite(y):
        raise InputError(f"observation must be finite, got {y!r}")
    if loss is LossKind.QUADRATIC:
        return CostFn(loss, 1.0, -2.0 * y, y * y)
    if y < 0:
        raise InputError(f"poisson loss needs non-negative observations, got {y!r}")
    return CostFn(loss, 1.0, y, 0.0)


def add(f: CostFn, g: CostFn) -> CostFn:
    if f.kind is not g.kind:
        raise InputError(f"cannot add {f.kind.value} and {g.kind.value} costs")
    return CostFn(f.kind, f.a + g.a, f.b + g.b, f.c + g.c)


def minimum(f: CostFn, domain: Optional[Interval] = None) -> tuple[float, float]:
    """Return ``(argmin, value)``.

    With a ``domain`` the argmin is clipped to it and the cost is evaluated
    at the clipped point.  A poisson cost with no log-weight (``b == 0``) is
    minimised at the left domain edge and needs a domain.
    """
    if f.kind is LossKind.QUADRATIC:
        if f.a <= 0.0:
            raise DegenerateCostError(f"quadratic cost without curvature: {f}")
        x = -f.b / (2.0 * f.a)
        if domain is not None and (x < domain.lo or x > domain.hi):
            x = min(max(x, domain.lo), domain.hi)
            return x, f.a * x * x + f.b * x + f.c
        return x, f.c - f.b * f.b / (4.0 * f.a)
    if f.a <= 0.0 or f.b < 0.0:
        raise DegenerateCostError(f"poisson cost without a finite minimum: {f}")
    if f.b == 0.0:
        if domain is None:
            raise DegenerateCostError("poisson cost with zero log-weight needs a domain")
        return domain.lo, f.a * domain.lo + f.c
    x = f.b / f.a
    if domain is not None and (x < domain.lo or x > domain.hi):
        x = min(max(x, domain.lo), domain.hi)
        return x, f.a * x - f.b * math.log(x) + f.c
    return x, f.b - f.b * math.log(x) + f.c


def _quadratic_roots(a: float, b: float, cc: float) -> Optional[tuple[float, float]]:
    # roots of a*x^2 + b*x + cc; larger-magnitude root first, the other from the product
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    q = -0.5 * (b + sq) if b >= 0.0 else -0.5 * (b - sq)
    if q == 0.0:
        return 0.0, 0.0
    r1 = q / a
    r2 = cc / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def _poisson_root(a: float, b: float, cc: float, inside: float, outside: float) -> float:
    """Root of ``a*x - b*log(x) + cc`` between ``inside`` (g <= 0) and ``outside`` (g > 0).

    Newton steps started from the outer end, falling back to bisection
    whenever a step leaves the bracket.
    """
    x_in, x_out = inside, outside
    x = outside
    for _ in range(_NEWTON_MAX_ITER):
        g = a * x - b * math.log(x) + cc
        if g > 0.0:
            x_out = x
        else:
            x_in = x
        dg = a - b / x
        lo_b = x_in if x_in < x_out else x_out
        hi_b = x_out if x_in < x_out else x_in
        xn = x - g / dg if dg != 0.0 else lo_b
        if not (lo_b < xn < hi_b):
            xn = 0.5 * (lo_b + hi_b)
        # relative only: near the 1e-10 domain floor the slope is ~b/x, so an
        # absolute tolerance would leave large residuals
        tol = 4.0 * _DBL_EPS * abs(xn)
        if abs(xn - x) <= tol or hi_b - lo_b <= tol:
            return xn
        x = xn
    return x


def level_set_residual(f: CostFn, kappa: float, lo: float, hi: float
                       ) -> Optional[tuple[float, float, float]]:
    """Level set ``{mu in [lo, hi] : f(mu) <= kappa}`` plus the worst root residual.

    Returns ``(left, right, residual)`` or ``None`` when the set is empty.
    ``residual`` is ``|f(e) - kappa| / max(1, |kappa|)`` maximised over the
    endpoints that are genuine roots (domain-clipped ends are skipped).
    """
    a, b, c = f.a, f.b, f.c
    scale = abs(kappa) if abs(kappa) > 1.0 else 1.0
    resid = 0.0
    if f.kind is LossKind.QUADRATIC:
        if a <= 0.0:
            raise DegenerateCostError(f"level set of a non-convex quadratic: {f}")
        roots = _quadratic_roots(a, b, c - kappa)
        if roots is None:
            return None
        left, right = roots
        if left > hi or right < lo:
            return None
        if left < lo:
            left = lo
        else:
            r = abs(a * left * left + b * left + c - kappa) / scale
            resid = r if r > resid else resid
        if right > hi:
            right = hi
        else:
            r = abs(a * right * right + b * right + c - kappa) / scale
            resid = r if r > resid else resid
        return left, right, resid

    if a <= 0.0 or b < 0.0:
        raise DegenerateCostError(f"level set of a degenerate poisson cost: {f}")
    cc = c - kappa
    if b == 0.0:
        # linear and increasing in mu
        if a * lo + cc > 0.0:
            return None
        right = -cc / a
        if right >= hi:
            right = hi
        else:
            r = abs(a * right + c - kappa) / scale
            resid = r if r > resid else resid
        return lo, right, resid
    m = b / a
    if m < lo:
        m = lo
    elif m > hi:
        m = hi
    if a * m - b * math.log(m) + cc > 0.0:
        return None
    if a * lo - b * math.log(lo) + cc <= 0.0:
        left = lo
    else:
        left = _poisson_root(a, b, cc, m, lo)
        r = abs(a * left - b * math.log(left) + cc) / scale
        resid = r if r > resid else resid
    if a * hi - b * math.log(hi) + cc <= 0.0:
        right = hi
    else:
        right = _poisson_root(a, b, cc, m, hi)
        r = abs(a * right - b * math.log(right) + cc) / scale
        resid = r if r > resid else resid
    return left, right, resid


def level_set(f: CostFn, kappa: float, domain: Interval) -> Optional[Interval]:
    """Closed interval ``{mu in domain : f(mu) <= kappa}``, or ``None`` if empty."""
    domain = make_interval(*domain)
    out = level_set_residual(f, float(kappa), domain.lo, domain.hi)
    if out is None:
        return None
    return Interval(out[0], out[1])


def validate_signal(y, loss: LossKind | str = LossKind.QUADRATIC) -> np.ndarray:
    """Return ``y`` as a contiguous float64 vector, rejecting bad input."""
    loss = LossKind.coerce(loss)
    arr = np.ascontiguousarray(y, dtype=np.float64)
    if arr.ndim != 1:
        raise InputError(f"signal must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InputError("signal is empty")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise InputError(f"non-finite observation at position {bad[0] + 1}")
    if loss is LossKind.POISSON and arr.min() < 0:
        first = int(np.flatnonzero(arr < 0)[0]) + 1
        raise InputError(f"poisson loss needs non-negative data (position {first})")
    return arr


def default_domain(y: np.ndarray, loss: LossKind | str) -> Interval:
    """Parameter range ``D`` tracked by the pruned algorithm.

    ``[min y, max y]`` for quadratic loss.  For poisson the lower edge is
    raised to :data:`POISSON_EPS` when it would otherwise be zero.
    """
    loss = LossKind.coerce(loss)
    lo, hi = float(np.min(y)), float(np.max(y))
    if loss is LossKind.POISSON:
        lo = max(lo, POISSON_EPS)
        hi = max(hi, lo)
    return Interval(lo, hi)
