# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled twins of the pure scoring and search kernels.

Candidate orderings, tie rules, and random-stream consumption mirror the
pure module exactly, so a given seed follows the same search trajectory
on either backend.  Scores may differ from the pure backend at the level
of floating-point summation order only.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp

cnp.import_array()

TRACE_CAP = 1000


cdef class _Compiled:
    """Typed view of a compiled instance for tight loops."""

    cdef Py_ssize_t k, l, n_pairs
    cdef double const_term, a_pred, a_cons, a_gen, max_dist
    cdef bint has_pairwise, has_pred, has_cons, has_gen
    cdef double[:, ::1] sep
    cdef double[:, ::1] dist
    cdef cnp.intp_t[::1] pair_a
    cdef cnp.intp_t[::1] pair_b
    cdef signed char[:, ::1] sim_sign
    cdef cnp.intp_t[::1] shapes
    cdef double[::1] ybuf

    cdef double score(self, cnp.intp_t* perm):
        cdef Py_ssize_t t, u, p, r, total_pairs, distinct
        cdef double total, s_sep, dmin, dv
        cdef long long conc
        cdef signed char s
        cdef cnp.intp_t sh
        cdef bint dup
        total = self.const_term
        s_sep = 0.0
        for t in range(self.k):
            s_sep += self.sep[t, perm[t]]
        total += s_sep
        if self.has_pairwise:
            dmin = INFINITY
            for p in range(self.n_pairs):
                dv = self.dist[perm[self.pair_a[p]], perm[self.pair_b[p]]]
                if dv < dmin:
                    dmin = dv
                self.ybuf[p] = 1.0 - dv
            if self.has_pred:
                total += self.a_pred * (dmin / self.max_dist)
            if self.has_cons:
                conc = 0
                for p in range(self.n_pairs - 1):
                    for r in range(p + 1, self.n_pairs):
                        if self.ybuf[p] > self.ybuf[r]:
                            s = 1
                        elif self.ybuf[p] < self.ybuf[r]:
                            s = -1
                        else:
                            s = 0
                        conc += self.sim_sign[p, r] * s
                total_pairs = self.n_pairs * (self.n_pairs - 1) // 2
                total += self.a_cons * ((<double>conc) / total_pairs + 1.0) / 2.0
        if self.has_gen:
            distinct = 0
            for t in range(self.k):
                sh = self.shapes[perm[t]]
                dup = False
                for u in range(t):
                    if self.shapes[perm[u]] == sh:
                        dup = True
                        break
                if not dup:
                    distinct += 1
            total += self.a_gen * (1.0 - (<double>distinct) / self.k)
        return total


cdef _Compiled _compile(object inst):
    if inst.extra is not None:
        raise ValueError(
            "custom non-separable criteria require the pure backend"
        )
    cdef _Compiled c = _Compiled.__new__(_Compiled)
    c.k = inst.k
    c.l = inst.l
    c.const_term = getattr(inst, "const")
    c.a_pred = inst.alpha_pred
    c.a_cons = inst.alpha_cons
    c.a_gen = inst.alpha_gen
    c.max_dist = inst.max_dist
    c.has_pred = c.a_pred != 0.0
    c.has_cons = c.a_cons != 0.0
    c.has_gen = c.a_gen != 0.0
    c.has_pairwise = c.has_pred or c.has_cons
    c.sep = np.ascontiguousarray(inst.sep, dtype=np.float64)
    if c.has_pairwise:
        c.dist = inst.dist
        c.pair_a = inst.pair_a
        c.pair_b = inst.pair_b
        c.n_pairs = c.pair_a.shape[0]
    else:
        c.dist = np.zeros((1, 1), dtype=np.float64)
        c.pair_a = np.zeros(1, dtype=np.intp)
        c.pair_b = np.zeros(1, dtype=np.intp)
        c.n_pairs = 0
    if c.has_cons:
        c.sim_sign = inst.sim_sign
    else:
        c.sim_sign = np.zeros((1, 1), dtype=np.int8)
    if c.has_gen:
        c.shapes = inst.shapes
    else:
        c.shapes = np.zeros(1, dtype=np.intp)
    c.ybuf = np.zeros(max(1, c.n_pairs), dtype=np.float64)
    return c


def score_batch(inst, perms):
    """Internal q̂ of each permutation row; see the pure twin."""
    cdef _Compiled c = _compile(inst)
    cdef cnp.intp_t[:, ::1] pv = np.ascontiguousarray(perms, dtype=np.intp)
    cdef Py_ssize_t m = pv.shape[0]
    cdef Py_ssize_t i
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    if pv.shape[1] == 0:
        out.fill(c.const_term)
        return out
    for i in range(m):
        ov[i] = c.score(&pv[i, 0])
    return out


def score_one(inst, perm) -> float:
    cdef _Compiled c = _compile(inst)
    cdef cnp.intp_t[::1] pv = np.ascontiguousarray(perm, dtype=np.intp)
    if pv.shape[0] == 0:
        return c.const_term
    return c.score(&pv[0])


def brute_force(inst, double tol, chunk=None):
    """Exhaustive lexicographic scan; see the pure twin for the contract."""
    cdef _Compiled c = _compile(inst)
    cdef Py_ssize_t k = c.k, l = c.l
    cdef double q
    if k == 0:
        q = c.const_term
        return np.zeros(0, dtype=np.intp), q, 1, [(1, q), (1, q)]
    cdef cnp.intp_t[::1] choice = np.zeros(k, dtype=np.intp)
    cdef cnp.intp_t[::1] cursor = np.full(k, -1, dtype=np.intp)
    cdef unsigned char[::1] used = np.zeros(l, dtype=np.uint8)
    cdef double best = -INFINITY
    cdef double threshold, found_q
    cdef long long seen = 0
    cdef Py_ssize_t depth = 0
    cdef cnp.intp_t g
    trace = []
    while depth >= 0:
        g = cursor[depth]
        if g >= 0:
            used[g] = 0
        g += 1
        while g < l and used[g]:
            g += 1
        if g == l:
            cursor[depth] = -1
            depth -= 1
            continue
        cursor[depth] = g
        used[g] = 1
        choice[depth] = g
        if depth == k - 1:
            seen += 1
            q = c.score(&choice[0])
            if q > best:
                if len(trace) < TRACE_CAP:
                    trace.append((seen, q))
                best = q
        else:
            depth += 1
    # second pass: first candidate within tolerance of the maximum
    threshold = best - tol
    cursor[:] = -1
    used[:] = 0
    depth = 0
    found = None
    found_q = best
    while depth >= 0:
        g = cursor[depth]
        if g >= 0:
            used[g] = 0
        g += 1
        while g < l and used[g]:
            g += 1
        if g == l:
            cursor[depth] = -1
            depth -= 1
            continue
        cursor[depth] = g
        used[g] = 1
        choice[depth] = g
        if depth == k - 1:
            q = c.score(&choice[0])
            if q >= threshold:
                found = np.asarray(choice).copy()
                found_q = q
                break
        else:
            depth += 1
    trace.append((int(seen), best))
    return found, found_q, int(seen), trace


def steepest_ascent(inst, start, max_steps, double tol):
    """Best improving move until none improves; see the pure twin."""
    cdef _Compiled c = _compile(inst)
    cdef Py_ssize_t k = c.k, l = c.l
    cdef Py_ssize_t limit = max_steps
    cdef cnp.intp_t[::1] perm = np.array(start, dtype=np.intp)
    cdef unsigned char[::1] used = np.zeros(l, dtype=np.uint8)
    cdef Py_ssize_t t, t1, t2, steps
    cdef cnp.intp_t g, old, tmp
    cdef double cur, q, move_q
    cdef int move_kind
    cdef Py_ssize_t move_a
    cdef cnp.intp_t move_b
    cdef bint have
    for t in range(k):
        used[perm[t]] = 1
    cur = c.score(&perm[0])
    steps = 0
    samples = [(0, cur)]
    while steps < limit:
        move_q = -INFINITY
        have = False
        move_kind = 0
        move_a = 0
        move_b = 0
        for t in range(k):
            old = perm[t]
            for g in range(l):
                if used[g]:
                    continue
                perm[t] = g
                q = c.score(&perm[0])
                if q > move_q:
                    move_q = q
                    move_kind = 0
                    move_a = t
                    move_b = g
                    have = True
            perm[t] = old
        for t1 in range(k - 1):
            for t2 in range(t1 + 1, k):
                tmp = perm[t1]
                perm[t1] = perm[t2]
                perm[t2] = tmp
                q = c.score(&perm[0])
                if q > move_q:
                    move_q = q
                    move_kind = 1
                    move_a = t1
                    move_b = t2
                    have = True
                tmp = perm[t1]
                perm[t1] = perm[t2]
                perm[t2] = tmp
        if not have:
            break
        if not move_q > cur + tol:
            break
        if move_kind == 0:
            used[perm[move_a]] = 0
            used[move_b] = 1
            perm[move_a] = move_b
        else:
            tmp = perm[move_a]
            perm[move_a] = perm[move_b]
            perm[move_b] = tmp
        cur = move_q
        steps += 1
        if len(samples) < TRACE_CAP:
            samples.append((steps, cur))
    return np.asarray(perm), cur, int(steps), samples


def anneal_run(
    inst,
    start,
    double t0,
    double cooling,
    kinds,
    task_sel,
    alt_swap,
    alt_re,
    accept_u,
):
    """Metropolis walk consuming pre-drawn streams; see the pure twin."""
    cdef _Compiled c = _compile(inst)
    cdef Py_ssize_t k = c.k, l = c.l
    cdef unsigned char[::1] kv = np.ascontiguousarray(kinds, dtype=np.uint8)
    cdef cnp.intp_t[::1] ts = np.ascontiguousarray(task_sel, dtype=np.intp)
    cdef cnp.intp_t[::1] asw = np.ascontiguousarray(alt_swap, dtype=np.intp)
    cdef cnp.intp_t[::1] are = np.ascontiguousarray(alt_re, dtype=np.intp)
    cdef double[::1] au = np.ascontiguousarray(accept_u, dtype=np.float64)
    cdef cnp.intp_t[::1] perm = np.array(start, dtype=np.intp)
    cdef unsigned char[::1] mark = np.zeros(l, dtype=np.uint8)
    cdef Py_ssize_t i, t, t2, j, n = kv.shape[0]
    cdef cnp.intp_t old, tmp
    cdef double cur, q, dq, temperature
    cdef double best_q
    for i in range(k):
        mark[perm[i]] = 1
    unused_arr = np.nonzero(np.asarray(mark) == 0)[0].astype(np.intp)
    cdef cnp.intp_t[::1] unused = unused_arr
    cur = c.score(&perm[0])
    best = np.asarray(perm).copy()
    cdef cnp.intp_t[::1] bv = best
    best_q = cur
    samples = [(0, cur)]
    temperature = t0
    for i in range(n):
        t = ts[i]
        if kv[i] == 0:
            j = are[i]
            old = perm[t]
            perm[t] = unused[j]
            q = c.score(&perm[0])
            dq = q - cur
            if dq >= 0.0 or (temperature > 0.0 and au[i] < exp(dq / temperature)):
                cur = q
                unused[j] = old
            else:
                perm[t] = old
        else:
            t2 = (t + 1 + asw[i]) % k
            tmp = perm[t]
            perm[t] = perm[t2]
            perm[t2] = tmp
            q = c.score(&perm[0])
            dq = q - cur
            if dq >= 0.0 or (temperature > 0.0 and au[i] < exp(dq / temperature)):
                cur = q
            else:
                tmp = perm[t]
                perm[t] = perm[t2]
                perm[t2] = tmp
        if cur > best_q:
            best_q = cur
            for j in range(k):
                bv[j] = perm[j]
            if len(samples) < TRACE_CAP:
                samples.append((i + 1, best_q))
        temperature *= cooling
    return best, best_q, samples
