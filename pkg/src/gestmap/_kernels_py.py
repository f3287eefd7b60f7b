"""Pure-Python scoring and search kernels over compiled instances.

A compiled instance (see the optimizer module) reduces a scoring context to
flat arrays: a per-pair benefit matrix for the separable criteria, a gesture
distance matrix with task-pair similarity signs for the pairwise criteria,
and shape codes for generalizability.  A candidate mapping is a permutation
vector ``perm`` with ``perm[t]`` the gesture index of task ``t``.

The compiled backend mirrors every loop here: candidate orderings, tie
rules, and random-number consumption are identical, so a given seed yields
the same search trajectory on either backend.
"""

import itertools
import math

import numpy as np

# cap on recorded improvement samples per search, to bound trace memory
TRACE_CAP = 1000


def score_batch(inst, perms: np.ndarray) -> np.ndarray:
    """Internal q̂ of each permutation row, identical to the aggregate the
    criteria module reports up to summation order."""
    perms = np.ascontiguousarray(perms, dtype=np.intp)
    m, k = perms.shape
    out = np.full(m, inst.const, dtype=np.float64)
    if k:
        out += inst.sep[np.arange(k)[None, :], perms].sum(axis=1)
    if inst.alpha_pred != 0.0 or inst.alpha_cons != 0.0:
        d = inst.dist[perms[:, inst.pair_a], perms[:, inst.pair_b]]
        if inst.alpha_pred != 0.0:
            out += inst.alpha_pred * (d.min(axis=1) / inst.max_dist)
        if inst.alpha_cons != 0.0:
            closeness = 1.0 - d
            pair_count = closeness.shape[1]
            concordance = np.zeros(m, dtype=np.int64)
            for p in range(pair_count - 1):
                col = closeness[:, p : p + 1]
                rest = closeness[:, p + 1 :]
                sy = (col > rest).astype(np.int64) - (col < rest).astype(np.int64)
                sx = inst.sim_sign[p, p + 1 :].astype(np.int64)
                concordance += (sx[None, :] * sy).sum(axis=1)
            total_pairs = pair_count * (pair_count - 1) // 2
            out += inst.alpha_cons * (concordance / total_pairs + 1.0) / 2.0
    if inst.alpha_gen != 0.0:
        shapes = np.sort(inst.shapes[perms], axis=1)
        distinct = 1 + (shapes[:, 1:] != shapes[:, :-1]).sum(axis=1)
        out += inst.alpha_gen * (1.0 - distinct / k)
    if inst.extra is not None:
        for i in range(m):
            out[i] += inst.extra(perms[i])
    return out


def score_one(inst, perm: np.ndarray) -> float:
    return float(score_batch(inst, np.asarray(perm, dtype=np.intp)[None, :])[0])


def _perm_blocks(l: int, k: int, chunk: int):
    source = itertools.permutations(range(l), k)
    while True:
        block = list(itertools.islice(source, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def brute_force(inst, tol: float, chunk: int = 131072):
    """Exhaustive scan of all injective mappings in lexicographic order.

    Returns (perm, score, count, trace).  Among all candidates scoring
    within ``tol`` of the maximum, the lexicographically smallest
    permutation is returned; the trace lists strict improvements as
    (candidate ordinal, score) plus a final (count, best) entry.
    """
    best = -math.inf
    trace = []
    seen = 0
    for block in _perm_blocks(inst.l, inst.k, chunk):
        scores = score_batch(inst, block)
        if len(trace) < TRACE_CAP:
            running = np.maximum.accumulate(np.concatenate(([best], scores)))[:-1]
            for i in np.nonzero(scores > running)[0]:
                if len(trace) >= TRACE_CAP:
                    break
                trace.append((seen + int(i) + 1, float(scores[i])))
        block_max = float(scores.max())
        if block_max > best:
            best = block_max
        seen += len(block)
    threshold = best - tol
    found = None
    found_q = best
    for block in _perm_blocks(inst.l, inst.k, chunk):
        scores = score_batch(inst, block)
        hits = np.nonzero(scores >= threshold)[0]
        if hits.size:
            j = int(hits[0])
            found = block[j].copy()
            found_q = float(scores[j])
            break
    trace.append((seen, best))
    return found, found_q, seen, trace


def _neighbors(perm: np.ndarray, l: int, k: int):
    """All single-move neighbors in canonical order: reassignments (task
    ascending, unused gesture ascending), then swaps (pairs row-major)."""
    used = np.zeros(l, dtype=bool)
    used[perm] = True
    unused = np.nonzero(~used)[0]
    parts = []
    if unused.size:
        count = k * unused.size
        block = np.repeat(perm[None, :], count, axis=0)
        block[np.arange(count), np.repeat(np.arange(k), unused.size)] = np.tile(unused, k)
        parts.append(block)
    if k >= 2:
        t1, t2 = np.triu_indices(k, 1)
        block = np.repeat(perm[None, :], t1.size, axis=0)
        rows = np.arange(t1.size)
        block[rows, t1] = perm[t2]
        block[rows, t2] = perm[t1]
        parts.append(block)
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else np.concatenate(parts, axis=0)


def steepest_ascent(inst, start: np.ndarray, max_steps: int, tol: float):
    """Repeatedly apply the best improving move; first move wins ties.

    Returns (perm, score, steps, samples) with samples the accepted-move
    (step, score) pairs.
    """
    perm = np.array(start, dtype=np.intp)
    cur = score_one(inst, perm)
    steps = 0
    samples = [(0, cur)]
    while steps < max_steps:
        candidates = _neighbors(perm, inst.l, inst.k)
        if candidates is None:
            break
        scores = score_batch(inst, candidates)
        j = int(np.argmax(scores))
        if not scores[j] > cur + tol:
            break
        perm = candidates[j].copy()
        cur = float(scores[j])
        steps += 1
        if len(samples) < TRACE_CAP:
            samples.append((steps, cur))
    return perm, cur, steps, samples


def anneal_run(
    inst,
    start: np.ndarray,
    t0: float,
    cooling: float,
    kinds: np.ndarray,
    task_sel: np.ndarray,
    alt_swap: np.ndarray,
    alt_re: np.ndarray,
    accept_u: np.ndarray,
):
    """One annealing run consuming pre-drawn random streams.

    Move kinds: 0 reassigns task ``task_sel[i]`` to the unused gesture at
    slot ``alt_re[i]``, 1 swaps it with task ``(task_sel[i]+1+alt_swap[i])
    mod k``.  A move is accepted when not worsening, else with Metropolis
    probability exp(Δ/T) under geometric cooling.  Returns the best-seen
    (perm, score, samples).
    """
    l, k = inst.l, inst.k
    perm = np.array(start, dtype=np.intp)
    used = np.zeros(l, dtype=bool)
    used[perm] = True
    unused = np.nonzero(~used)[0].astype(np.intp)
    cur = score_one(inst, perm)
    best = perm.copy()
    best_q = cur
    samples = [(0, cur)]
    temperature = t0
    for i in range(len(kinds)):
        t = int(task_sel[i])
        if kinds[i] == 0:
            j = int(alt_re[i])
            old = perm[t]
            perm[t] = unused[j]
            q = score_one(inst, perm)
            dq = q - cur
            if dq >= 0.0 or (temperature > 0.0 and accept_u[i] < math.exp(dq / temperature)):
                cur = q
                unused[j] = old
            else:
                perm[t] = old
        else:
            t2 = (t + 1 + int(alt_swap[i])) % k
            perm[t], perm[t2] = perm[t2], perm[t]
            q = score_one(inst, perm)
            dq = q - cur
            if dq >= 0.0 or (temperature > 0.0 and accept_u[i] < math.exp(dq / temperature)):
                cur = q
            else:
                perm[t], perm[t2] = perm[t2], perm[t]
        if cur > best_q:
            best_q = cur
            best = perm.copy()
            if len(samples) < TRACE_CAP:
                samples.append((i + 1, best_q))
        temperature *= cooling
    return best, best_q, samples
