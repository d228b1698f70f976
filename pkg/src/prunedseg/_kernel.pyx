# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled inner loops for the pruned DP and the grid heuristic.

Every arithmetic step mirrors the pure-Python path in ``pruned.py`` /
``losses.py`` (same operations, same order), so both backends produce
bit-identical tables on IEEE-754 hardware without FMA contraction.
Loss codes: 0 = quadratic, 1 = poisson.
"""

from libc.math cimport sqrt, log, fabs, INFINITY
from libc.stdint cimport int64_t
from libcpp.vector cimport vector

import numpy as np

cdef double DBL_EPS = 2.220446049250313e-16
cdef int NEWTON_MAX_ITER = 200


cdef inline double poisson_root(double a, double b, double cc,
                                double inside, double outside) noexcept nogil:
    cdef double x_in = inside
    cdef double x_out = outside
    cdef double x = outside
    cdef double g, dg, lo_b, hi_b, xn, tol
    cdef int it
    for it in range(NEWTON_MAX_ITER):
        g = a * x - b * log(x) + cc
        if g > 0.0:
            x_out = x
        else:
            x_in = x
        dg = a - b / x
        if x_in < x_out:
            lo_b = x_in
            hi_b = x_out
        else:
            lo_b = x_out
            hi_b = x_in
        if dg != 0.0:
            xn = x - g / dg
        else:
            xn = lo_b
        if not (lo_b < xn and xn < hi_b):
            xn = 0.5 * (lo_b + hi_b)
        tol = 4.0 * DBL_EPS * fabs(xn)
        if fabs(xn - x) <= tol or hi_b - lo_b <= tol:
            return xn
        x = xn
    return x


cdef inline bint level_set(int loss, double a, double b, double c, double kappa,
                           double lo, double hi, double* left, double* right,
                           double* resid) noexcept nogil:
    cdef double scale = fabs(kappa)
    cdef double cc, disc, sq, q, r1, r2, m, r
    if scale < 1.0:
        scale = 1.0
    resid[0] = 0.0
    if loss == 0:
        cc = c - kappa
        disc = b * b - 4.0 * a * cc
        if disc < 0.0:
            return False
        sq = sqrt(disc)
        if b >= 0.0:
            q = -0.5 * (b + sq)
        else:
            q = -0.5 * (b - sq)
        if q == 0.0:
            r1 = 0.0
            r2 = 0.0
        else:
            r1 = q / a
            r2 = cc / q
            if r1 > r2:
                r1, r2 = r2, r1
        if r1 > hi or r2 < lo:
            return False
        if r1 < lo:
            r1 = lo
        else:
            r = fabs(a * r1 * r1 + b * r1 + c - kappa) / scale
            if r > resid[0]:
                resid[0] = r
        if r2 > hi:
            r2 = hi
        else:
            r = fabs(a * r2 * r2 + b * r2 + c - kappa) / scale
            if r > resid[0]:
                resid[0] = r
        left[0] = r1
        right[0] = r2
        return True

    cc = c - kappa
    if b == 0.0:
        if a * lo + cc > 0.0:
            return False
        r2 = -cc / a
        if r2 >= hi:
            r2 = hi
        else:
            r = fabs(a * r2 + c - kappa) / scale
            if r > resid[0]:
                resid[0] = r
        left[0] = lo
        right[0] = r2
        return True
    m = b / a
    if m < lo:
        m = lo
    elif m > hi:
        m = hi
    if a * m - b * log(m) + cc > 0.0:
        return False
    if a * lo - b * log(lo) + cc <= 0.0:
        r1 = lo
    else:
        r1 = poisson_root(a, b, cc, m, lo)
        r = fabs(a * r1 - b * log(r1) + cc) / scale
        if r > resid[0]:
            resid[0] = r
    if a * hi - b * log(hi) + cc <= 0.0:
        r2 = hi
    else:
        r2 = poisson_root(a, b, cc, m, hi)
        r = fabs(a * r2 - b * log(r2) + cc) / scale
        if r > resid[0]:
            resid[0] = r
    left[0] = r1
    right[0] = r2
    return True


cdef inline double cost_min(int loss, double a, double b, double c,
                            double lo, double hi) noexcept nogil:
    cdef double x
    if loss == 0:
        x = -b / (2.0 * a)
        if x < lo or x > hi:
            if x < lo:
                x = lo
            if x > hi:
                x = hi
            return a * x * x + b * x + c
        return c - b * b / (4.0 * a)
    if b == 0.0:
        return a * lo + c
    x = b / a
    if x < lo or x > hi:
        if x < lo:
            x = lo
        if x > hi:
            x = hi
        return a * x - b * log(x) + c
    return b - b * log(x) + c


cdef inline void intersect_into(vector[double]& s, vector[double]& tmp,
                                double lo, double hi) noexcept nogil:
    cdef size_t i
    cdef double a, b
    tmp.clear()
    i = 0
    while i < s.size():
        a = s[i]
        b = s[i + 1]
        i += 2
        if b < lo:
            continue
        if a > hi:
            break
        tmp.push_back(a if a > lo else lo)
        tmp.push_back(b if b < hi else hi)
    s.swap(tmp)


cdef inline void subtract_into(vector[double]& s, vector[double]& tmp,
                               double lo, double hi) noexcept nogil:
    cdef size_t i
    cdef double a, b
    tmp.clear()
    i = 0
    while i < s.size():
        a = s[i]
        b = s[i + 1]
        i += 2
        if b < lo or a > hi:
            tmp.push_back(a)
            tmp.push_back(b)
            continue
        if a < lo:
            tmp.push_back(a)
            tmp.push_back(lo)
        if hi < b:
            tmp.push_back(hi)
            tmp.push_back(b)
    s.swap(tmp)


def pruned_rows(const double[::1] y, int loss, double dlo, double dhi,
                double[:, ::1] cost, int64_t[:, ::1] bp, bint trace):
    """Fill rows 2..K of ``cost``/``bp`` in place; row 1 must already be set.

    Returns ``(stats, trace_arrays)``; ``trace_arrays`` is ``None`` unless
    ``trace`` is true.
    """
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t K = cost.shape[0] - 1
    cdef Py_ssize_t k, t, i, j, m
    cdef vector[int64_t] last
    cdef vector[double] ca, cb, cc
    cdef vector[vector[double]] sets
    cdef vector[double] newset, tmp
    cdef double kappa, L, R, res, yt, pa, pb, pc, v, best
    cdef int64_t bestl, npruned, nint, ncand
    cdef bint ok
    cdef int64_t steps = 0, updates = 0, sum_cand = 0, max_cand = 0
    cdef int64_t max_int = 0, violations = 0, fallbacks = 0
    cdef double maxres = 0.0
    cdef vector[int64_t] tr_k, tr_t, tr_c, tr_i, tr_p, tr_pruned

    with nogil:
        for k in range(2, K + 1):
            last.clear()
            ca.clear()
            cb.clear()
            cc.clear()
            sets.clear()
            for t in range(k, n + 1):
                kappa = cost[k - 1, t - 1]
                newset.clear()
                newset.push_back(dlo)
                newset.push_back(dhi)
                m = <Py_ssize_t>last.size()
                updates += m
                npruned = 0
                j = 0
                for i in range(m):
                    ok = level_set(loss, ca[i], cb[i], cc[i], kappa, dlo, dhi,
                                   &L, &R, &res)
                    if ok:
                        if res > maxres:
                            maxres = res
                        intersect_into(sets[i], tmp, L, R)
                        subtract_into(newset, tmp, L, R)
                    if not ok or sets[i].size() == 0:
                        npruned += 1
                        if trace:
                            tr_pruned.push_back(last[i])
                        continue
                    if j != i:
                        last[j] = last[i]
                        ca[j] = ca[i]
                        cb[j] = cb[i]
                        cc[j] = cc[i]
                        sets[j].swap(sets[i])
                    j += 1
                last.resize(j)
                ca.resize(j)
                cb.resize(j)
                cc.resize(j)
                sets.resize(j)
                if newset.size() > 0 or j == 0:
                    if newset.size() == 0:
                        # numerical guard: never leave the candidate list empty
                        fallbacks += 1
                        newset.push_back(dlo)
                        newset.push_back(dhi)
                    last.push_back(t - 1)
                    ca.push_back(0.0)
                    cb.push_back(0.0)
                    cc.push_back(kappa)
                    sets.push_back(newset)

                yt = y[t - 1]
                if loss == 0:
                    pa = 1.0
                    pb = -2.0 * yt
                    pc = yt * yt
                else:
                    pa = 1.0
                    pb = yt
                    pc = 0.0
                best = INFINITY
                bestl = -1
                nint = 0
                ncand = <int64_t>last.size()
                for i in range(ncand):
                    ca[i] = ca[i] + pa
                    cb[i] = cb[i] + pb
                    cc[i] = cc[i] + pc
                    v = cost_min(loss, ca[i], cb[i], cc[i], dlo, dhi)
                    if v < best:
                        best = v
                        bestl = last[i]
                    nint += <int64_t>(sets[i].size() // 2)
                cost[k, t] = best
                bp[k, t] = bestl

                steps += 1
                sum_cand += ncand
                if ncand > max_cand:
                    max_cand = ncand
                if nint > max_int:
                    max_int = nint
                if nint > 2 * ncand - 1:
                    violations += 1
                if trace:
                    tr_k.push_back(k)
                    tr_t.push_back(t)
                    tr_c.push_back(ncand)
                    tr_i.push_back(nint)
                    tr_p.push_back(npruned)

    stats = dict(
        steps=steps,
        candidate_updates=updates,
        sum_candidates=sum_cand,
        max_candidates=max_cand,
        max_intervals=max_int,
        bound_violations=violations,
        max_root_residual=maxres,
        fallbacks=fallbacks,
    )
    if not trace:
        return stats, None
    arrays = dict(
        k=np.asarray(<int64_t[:tr_k.size()]>tr_k.data()).copy() if tr_k.size() else np.zeros(0, np.int64),
        t=np.asarray(<int64_t[:tr_t.size()]>tr_t.data()).copy() if tr_t.size() else np.zeros(0, np.int64),
        candidates=np.asarray(<int64_t[:tr_c.size()]>tr_c.data()).copy() if tr_c.size() else np.zeros(0, np.int64),
        intervals=np.asarray(<int64_t[:tr_i.size()]>tr_i.data()).copy() if tr_i.size() else np.zeros(0, np.int64),
        pruned=np.asarray(<int64_t[:tr_p.size()]>tr_p.data()).copy() if tr_p.size() else np.zeros(0, np.int64),
        pruned_indices=np.asarray(<int64_t[:tr_pruned.size()]>tr_pruned.data()).copy() if tr_pruned.size() else np.zeros(0, np.int64),
    )
    return stats, arrays


def grid_rows(const double[::1] y, int loss, const double[::1] grid,
              const double[:, ::1] exact, Py_ssize_t k_max):
    """Finite-grid recursion for every k; see ``grid.grid_heuristic``."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t P = grid.shape[0]
    cdef Py_ssize_t k, t, t0, p
    cdef double[::1] H = np.empty(P)
    cdef int64_t[::1] lastcp = np.empty(P, dtype=np.int64)
    out_cost = np.full(k_max + 1, np.inf)
    out_last = np.full(k_max + 1, -1, dtype=np.int64)
    out_mu = np.full(k_max + 1, np.nan)
    cdef double[::1] oc = out_cost
    cdef int64_t[::1] ol = out_last
    cdef double[::1] om = out_mu
    cdef double mu, d, cprev, best
    cdef Py_ssize_t bestp
    with nogil:
        for k in range(1, k_max + 1):
            for p in range(P):
                mu = grid[p]
                if k == 1:
                    H[p] = 0.0
                    lastcp[p] = 0
                    t0 = 1
                else:
                    H[p] = exact[k - 1, k - 1]
                    lastcp[p] = k - 1
                    t0 = k
                # first observation of the last segment
                if loss == 0:
                    d = y[t0 - 1] - mu
                    H[p] = H[p] + d * d
                else:
                    H[p] = H[p] + (mu - y[t0 - 1] * log(mu))
                for t in range(t0 + 1, n + 1):
                    if k > 1:
                        cprev = exact[k - 1, t - 1]
                        if cprev < H[p]:
                            H[p] = cprev
                            lastcp[p] = t - 1
                    if loss == 0:
                        d = y[t - 1] - mu
                        H[p] = H[p] + d * d
                    else:
                        H[p] = H[p] + (mu - y[t - 1] * log(mu))
            best = INFINITY
            bestp = 0
            for p in range(P):
                if H[p] < best:
                    best = H[p]
                    bestp = p
            oc[k] = best
            ol[k] = lastcp[bestp]
            om[k] = grid[bestp]
    return out_cost, out_last, out_mu
