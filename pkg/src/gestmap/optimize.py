"""Solvers searching the space of injective task-to-gesture mappings.

Four strategies maximize the weighted quality q̂:

* ``brute_force_optimal`` scans every injective mapping (guarded by the
  permutation count) and is the oracle the others are judged against.
* ``assignment_exact`` solves the separable case exactly as a maximum
  weight assignment over the per-pair benefit matrix.
* ``local_search`` runs steepest-ascent hill climbing with restarts.
* ``anneal`` runs simulated annealing with Metropolis acceptance and
  geometric cooling.

All solvers are deterministic given a seed, break score ties (within the
1e-9 tolerance) toward the lexicographically smallest gesture-index
vector, and return an OptimizationResult whose report comes from the
criteria module's scorer.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from ._jsonio import read_json, require, write_json
from .catalog import TaskCatalog, task_similarity
from .criteria import (
    CriterionContext,
    QualityReport,
    WeightVector,
    default_criteria,
    overall_quality,
    separable_term_matrix,
)
from .errors import (
    AmbiguousReferenceError,
    GuardExceededError,
    InfeasibleError,
    MissingContextError,
    NonSeparableError,
    ParseError,
)
from .vocabulary import Vocabulary

TOLERANCE = 1e-9

DEFAULT_GUARD = 10_000_000

ALGORITHMS = ("brute-force", "assignment-exact", "local-search", "anneal")

# beyond this k·l the assignment solver skips the lexicographic
# tie-refinement pass (the assignment itself stays exact)
_LEX_REFINE_LIMIT = 65536


@dataclass(frozen=True)
class Mapping:
    """Injective assignment of tasks to gesture indices.

    ``pairs`` holds (task reference, gesture index) tuples in a stable
    order; references are bare task ids or qualified ``activity:id``
    strings resolved against the catalog being scored.
    """

    pairs: tuple = ()

    def __post_init__(self):
        raw = self.pairs
        if isinstance(raw, dict):
            raw = raw.items()
        object.__setattr__(
            self, "pairs", tuple((str(ref), int(index)) for ref, index in raw)
        )

    def items(self):
        return self.pairs

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def get(self, ref: str) -> int:
        for key, index in self.pairs:
            if key == ref:
                return index
        raise KeyError(f"no entry for task '{ref}'")

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_dict(cls, data: dict) -> "Mapping":
        return cls(tuple(data.items()))


@dataclass(frozen=True)
class MappingViolation:
    """One way a mapping fails verification."""

    kind: str
    detail: str


def verify_mapping(mapping, tasks: TaskCatalog, vocab: Vocabulary) -> list:
    """All violations of totality, injectivity, and reference validity;
    an empty list means the mapping is valid for (tasks, vocab)."""
    entries = mapping.items() if hasattr(mapping, "items") else dict(mapping).items()
    violations = []
    resolved = {}
    assignments = []
    for ref, index in entries:
        try:
            task = tasks.get(str(ref))
        except AmbiguousReferenceError as exc:
            violations.append(MappingViolation("ambiguous-task", str(exc)))
            continue
        except KeyError:
            violations.append(
                MappingViolation("unknown-task", f"no task '{ref}' in catalog")
            )
            continue
        if task.qualified_id in resolved:
            violations.append(
                MappingViolation("duplicate-task", f"task '{ref}' assigned more than once")
            )
            continue
        resolved[task.qualified_id] = ref
        if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
            violations.append(
                MappingViolation(
                    "bad-reference", f"gesture reference for task '{ref}' is not an integer"
                )
            )
            continue
        if not 0 <= int(index) < len(vocab):
            violations.append(
                MappingViolation(
                    "unknown-gesture",
                    f"gesture index {int(index)} out of range for task '{ref}'",
                )
            )
            continue
        assignments.append((task, int(index)))
    for task in tasks:
        if task.qualified_id not in resolved:
            violations.append(
                MappingViolation("missing-task", f"no gesture for task '{tasks.key_for(task)}'")
            )
    by_gesture = {}
    for task, index in assignments:
        by_gesture.setdefault(index, []).append(task)
    for index, claimants in sorted(by_gesture.items()):
        if len(claimants) > 1:
            ids = ", ".join(f"'{tasks.key_for(t)}'" for t in claimants)
            violations.append(
                MappingViolation(
                    "collision", f"gesture {index} assigned to tasks {ids}"
                )
            )
    return violations


@dataclass(frozen=True)
class SolverConfig:
    """Search parameters; temperature and cooling apply to anneal only."""

    algorithm: str = "local-search"
    seed: int = 0
    max_iterations: int = 1000
    restarts: int = 0
    initial_temperature: float = 0.1
    cooling_rate: float = 0.999
    brute_force_guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{self.algorithm}'")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if not self.initial_temperature >= 0:
            raise ValueError("initial_temperature must be >= 0")
        if not 0.0 < self.cooling_rate < 1.0:
            raise ValueError("cooling_rate must lie in (0, 1)")
        if self.brute_force_guard < 1:
            raise ValueError("brute_force_guard must be >= 1")

    @classmethod
    def from_dict(cls, data: dict, locus: str = "solver") -> "SolverConfig":
        known = {
            "algorithm": str,
            "seed": int,
            "max_iterations": int,
            "restarts": int,
            "initial_temperature": (int, float),
            "cooling_rate": (int, float),
            "brute_force_guard": int,
        }
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                raise ParseError(f"unknown field '{key}'", locus=locus)
            if isinstance(value, bool) or not isinstance(value, known[key]):
                raise ParseError(f"field '{key}' has the wrong type", locus=locus)
            kwargs[key] = value
        try:
            return cls(**kwargs)
        except ValueError as exc:
            raise ParseError(str(exc), locus=locus) from None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "max_iterations": self.max_iterations,
            "restarts": self.restarts,
            "initial_temperature": self.initial_temperature,
            "cooling_rate": self.cooling_rate,
            "brute_force_guard": self.brute_force_guard,
        }


@dataclass(frozen=True)
class OptimizationResult:
    """A solver's mapping with its quality report and run statistics.

    ``trace`` samples (iteration, best-q̂) pairs as the search improves;
    ``optimality`` is "proven-optimal" only for the exhaustive and
    assignment solvers.
    """

    mapping: Mapping
    report: QualityReport
    iterations_used: int
    trace: tuple | None
    optimality: str


@dataclass
class CompiledInstance:
    """Flat numeric view of (context, weights, criteria) for the kernels.

    ``sep[t, i]`` carries the full weighted separable contribution of
    assigning task t to gesture i; ``const`` the mapping-independent part.
    The alpha fields are the scaled weights of the three pairwise criteria,
    zero when inactive or degenerate.  ``extra`` is a Python callback for
    custom non-separable criteria, which forces the pure backend.
    """

    k: int
    l: int
    sep: np.ndarray
    const: float
    alpha_pred: float
    alpha_cons: float
    alpha_gen: float
    dist: np.ndarray | None
    max_dist: float
    pair_a: np.ndarray | None
    pair_b: np.ndarray | None
    sim_sign: np.ndarray | None
    shapes: np.ndarray | None
    extra: Callable | None


def _effective_context(tasks, vocab, ctx):
    if ctx is not None and ctx.catalog is tasks and ctx.vocabulary is vocab:
        return ctx
    table = ctx.familiarity_table if ctx is not None else {}
    return CriterionContext(tasks, vocab, table)


def _active_tuple(active):
    criteria = tuple(default_criteria() if active is None else active)
    labels = [c.label for c in criteria]
    if len(set(labels)) != len(labels):
        raise ValueError("active criteria have duplicate labels")
    return criteria


def mapping_from_perm(catalog: TaskCatalog, perm, keys=None) -> Mapping:
    if keys is None:
        keys = catalog.task_keys()
    return Mapping(tuple((key, int(g)) for key, g in zip(keys, perm)))


def compile_instance(
    ctx: CriterionContext,
    weights: WeightVector,
    active=None,
    normalize_by_weight_sum: bool = False,
) -> CompiledInstance:
    """Reduce a scoring problem to the arrays the search kernels consume."""
    criteria_list = _active_tuple(active)
    alphas = weights.alphas_for(criteria_list)
    k, l = len(ctx.catalog), len(ctx.vocabulary)
    denom = float(sum(alphas)) if normalize_by_weight_sum else float(len(criteria_list))
    sep = np.zeros((k, l), dtype=np.float64)
    const = 0.0
    a_pred = a_cons = a_gen = 0.0
    extras = []
    if denom > 0.0:
        for criterion, alpha in zip(criteria_list, alphas):
            scaled = alpha / denom
            if criterion.kind == "custom" and not criterion.fn_separable:
                if criterion.fn is None:
                    raise MissingContextError(
                        f"custom criterion '{criterion.label}' has no scoring function"
                    )
                if scaled != 0.0:
                    extras.append((scaled, criterion.fn))
                continue
            if scaled == 0.0:
                continue
            if criterion.separable:
                shape, payload = separable_term_matrix(criterion, ctx)
                if shape == "constant":
                    const += scaled * payload
                else:
                    sep += (scaled / k) * payload
            elif criterion.kind == "predictability":
                if k < 2 or ctx.vocabulary.max_pairwise_distance() <= 0.0:
                    const += scaled
                else:
                    a_pred += scaled
            elif criterion.kind == "consistency":
                if k < 3:
                    const += scaled
                else:
                    a_cons += scaled
            else:  # generalizability
                if k == 0:
                    const += scaled
                else:
                    a_gen += scaled
    dist = None
    pair_a = pair_b = sim_sign = None
    if a_pred != 0.0 or a_cons != 0.0:
        dist = np.ascontiguousarray(ctx.vocabulary.distance_matrix(), dtype=np.float64)
        pa, pb = np.triu_indices(k, 1)
        pair_a = np.ascontiguousarray(pa, dtype=np.intp)
        pair_b = np.ascontiguousarray(pb, dtype=np.intp)
    max_dist = ctx.vocabulary.max_pairwise_distance() if a_pred != 0.0 else 0.0
    if a_cons != 0.0:
        tasks = list(ctx.catalog)
        sims = np.array(
            [task_similarity(tasks[a], tasks[b]) for a, b in zip(pair_a, pair_b)],
            dtype=np.float64,
        )
        greater = sims[:, None] > sims[None, :]
        lesser = sims[:, None] < sims[None, :]
        sim_sign = greater.astype(np.int8) - lesser.astype(np.int8)
    shapes = None
    if a_gen != 0.0:
        shapes = np.ascontiguousarray(ctx.vocabulary.shape_codes(), dtype=np.intp)
    extra = None
    if extras:
        keys = ctx.catalog.task_keys()
        catalog = ctx.catalog

        def extra(perm):
            mapping = mapping_from_perm(catalog, perm, keys)
            total = 0.0
            for scaled, fn in extras:
                total += scaled * float(fn(mapping, ctx))
            return total

    return CompiledInstance(
        k=k,
        l=l,
        sep=np.ascontiguousarray(sep),
        const=const,
        alpha_pred=a_pred,
        alpha_cons=a_cons,
        alpha_gen=a_gen,
        dist=dist,
        max_dist=max_dist,
        pair_a=pair_a,
        pair_b=pair_b,
        sim_sign=np.ascontiguousarray(sim_sign) if sim_sign is not None else None,
        shapes=shapes,
        extra=extra,
    )


def _empty_result(ctx, w, active, normalize, optimality, iterations, trace):
    mapping = Mapping(())
    report = overall_quality(mapping, w, ctx, active, normalize)
    return OptimizationResult(
        mapping=mapping,
        report=report,
        iterations_used=iterations,
        trace=trace,
        optimality=optimality,
    )


def _check_feasible(k: int, l: int):
    if l < k:
        raise InfeasibleError(
            f"infeasible: {k} tasks cannot map injectively into {l} gestures"
        )


def brute_force_optimal(
    tasks: TaskCatalog,
    vocab: Vocabulary,
    w: WeightVector,
    ctx: CriterionContext | None = None,
    active=None,
    *,
    guard: int = DEFAULT_GUARD,
    normalize_by_weight_sum: bool = False,
    backend: str | None = None,
) -> OptimizationResult:
    """Exhaustively provably-optimal mapping, guarded by l!/(l-k)!.

    Ties within the tolerance resolve to the lexicographically smallest
    gesture-index vector.  ``iterations_used`` and the final trace entry
    report the number of mappings enumerated.
    """
    ctx = _effective_context(tasks, vocab, ctx)
    active_t = _active_tuple(active)
    k, l = len(tasks), len(vocab)
    _check_feasible(k, l)
    count = math.perm(l, k)
    if count > guard:
        raise GuardExceededError(count, guard)
    if k == 0:
        return _empty_result(
            ctx, w, active_t, normalize_by_weight_sum, "proven-optimal", 1, ((1, None),)
        )
    inst = compile_instance(ctx, w, active_t, normalize_by_weight_sum)
    kern = kernels.backend_for(inst, backend)
    perm, _, seen, trace = kern.brute_force(inst, TOLERANCE)
    mapping = mapping_from_perm(tasks, perm)
    report = overall_quality(mapping, w, ctx, active_t, normalize_by_weight_sum)
    return OptimizationResult(
        mapping=mapping,
        report=report,
        iterations_used=seen,
        trace=tuple(trace),
        optimality="proven-optimal",
    )


def _lex_refined_columns(benefit: np.ndarray, base_value: float) -> tuple:
    """Lexicographically smallest optimal column choice, task by task.

    Returns (columns, sub-assignment solve count)."""
    k, l = benefit.shape
    free = list(range(l))
    chosen = []
    fixed_value = 0.0
    solves = 0
    for t in range(k):
        pick = None
        fallback = None
        fallback_value = -math.inf
        for slot, g in enumerate(free):
            value = fixed_value + benefit[t, g]
            if t + 1 < k:
                rest = [x for x in free if x != g]
                sub = benefit[t + 1 :, rest]
                rows, cols = linear_sum_assignment(sub, maximize=True)
                solves += 1
                value += float(sub[rows, cols].sum())
            if value >= base_value - TOLERANCE:
                pick = slot
                break
            if value > fallback_value:
                fallback_value = value
                fallback = slot
        if pick is None:
            pick = fallback
        g = free.pop(pick)
        chosen.append(g)
        fixed_value += benefit[t, g]
    return chosen, solves


def assignment_exact(
    tasks: TaskCatalog,
    vocab: Vocabulary,
    w: WeightVector,
    ctx: CriterionContext | None = None,
    active=None,
    *,
    normalize_by_weight_sum: bool = False,
) -> OptimizationResult:
    """Exact solver for the separable case via maximum-weight assignment.

    Every active criterion must be separable; the benefit matrix holds the
    weighted per-pair terms and a rectangular assignment solver maximizes
    their sum.  A refinement pass then selects the lexicographically
    smallest optimal assignment (skipped above a k·l size cap, where the
    result is still optimal but tie order is solver-defined).
    """
    ctx = _effective_context(tasks, vocab, ctx)
    active_t = _active_tuple(active)
    for criterion in active_t:
        if not criterion.separable:
            raise NonSeparableError(
                f"criterion '{criterion.label}' is not separable; "
                "use brute-force, local-search, or anneal"
            )
    k, l = len(tasks), len(vocab)
    _check_feasible(k, l)
    if k == 0:
        return _empty_result(
            ctx, w, active_t, normalize_by_weight_sum, "proven-optimal", 1, None
        )
    inst = compile_instance(ctx, w, active_t, normalize_by_weight_sum)
    benefit = inst.sep
    rows, cols = linear_sum_assignment(benefit, maximize=True)
    base_value = float(benefit[rows, cols].sum())
    solves = 1
    if k * l <= _LEX_REFINE_LIMIT:
        chosen, sub_solves = _lex_refined_columns(benefit, base_value)
        solves += sub_solves
        perm = np.array(chosen, dtype=np.intp)
    else:
        order = np.argsort(rows)
        perm = np.array(cols[order], dtype=np.intp)
    mapping = mapping_from_perm(tasks, perm)
    report = overall_quality(mapping, w, ctx, active_t, normalize_by_weight_sum)
    return OptimizationResult(
        mapping=mapping,
        report=report,
        iterations_used=solves,
        trace=None,
        optimality="proven-optimal",
    )


def _random_injection(rng, l: int, k: int) -> np.ndarray:
    return rng.permutation(l)[:k].astype(np.intp)


def _merge_run(trace, counter, samples, running_best):
    for step, value in samples:
        if value > running_best:
            running_best = value
            if len(trace) < 10000:
                trace.append((counter + step, value))
    return running_best


def _select_best(results):
    """Best (score, perm) across runs; ties within tolerance go to the
    lexicographically smallest permutation."""
    top = max(q for q, _ in results)
    candidates = [(q, perm) for q, perm in results if q >= top - TOLERANCE]
    best_q, best_perm = candidates[0]
    for q, perm in candidates[1:]:
        if tuple(perm) < tuple(best_perm):
            best_q, best_perm = q, perm
    return best_q, best_perm


def local_search(
    tasks: TaskCatalog,
    vocab: Vocabulary,
    w: WeightVector,
    ctx: CriterionContext | None = None,
    active=None,
    config: SolverConfig | None = None,
    *,
    normalize_by_weight_sum: bool = False,
    backend: str | None = None,
) -> OptimizationResult:
    """Steepest-ascent hill climbing from seeded random starts.

    Moves reassign one task to an unused gesture or swap two tasks'
    gestures; the best improving move is applied until none improves or
    ``max_iterations`` accepted moves are reached.  ``restarts`` adds
    further independent runs; the best run wins.
    """
    if config is None:
        config = SolverConfig(algorithm="local-search")
    ctx = _effective_context(tasks, vocab, ctx)
    active_t = _active_tuple(active)
    k, l = len(tasks), len(vocab)
    _check_feasible(k, l)
    if k == 0:
        return _empty_result(
            ctx, w, active_t, normalize_by_weight_sum, "heuristic", 0, ((0, None),)
        )
    inst = compile_instance(ctx, w, active_t, normalize_by_weight_sum)
    kern = kernels.backend_for(inst, backend)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    results = []
    trace = []
    running_best = -math.inf
    counter = 0
    total_steps = 0
    for _ in range(config.restarts + 1):
        start = _random_injection(rng, l, k)
        perm, q, steps, samples = kern.steepest_ascent(
            inst, start, config.max_iterations, TOLERANCE
        )
        running_best = _merge_run(trace, counter, samples, running_best)
        counter += steps
        total_steps += steps
        results.append((q, np.array(perm)))
    _, best_perm = _select_best(results)
    mapping = mapping_from_perm(tasks, best_perm)
    report = overall_quality(mapping, w, ctx, active_t, normalize_by_weight_sum)
    return OptimizationResult(
        mapping=mapping,
        report=report,
        iterations_used=total_steps,
        trace=tuple(trace),
        optimality="heuristic",
    )


def anneal(
    tasks: TaskCatalog,
    vocab: Vocabulary,
    w: WeightVector,
    ctx: CriterionContext | None = None,
    active=None,
    config: SolverConfig | None = None,
    *,
    normalize_by_weight_sum: bool = False,
    backend: str | None = None,
) -> OptimizationResult:
    """Simulated annealing over the same move set as local search.

    Each run performs ``max_iterations`` proposed moves with Metropolis
    acceptance at geometrically cooling temperature, tracking the best
    mapping seen; the best across runs wins.
    """
    if config is None:
        config = SolverConfig(algorithm="anneal")
    ctx = _effective_context(tasks, vocab, ctx)
    active_t = _active_tuple(active)
    k, l = len(tasks), len(vocab)
    _check_feasible(k, l)
    if k == 0:
        return _empty_result(
            ctx, w, active_t, normalize_by_weight_sum, "heuristic", 0, ((0, None),)
        )
    inst = compile_instance(ctx, w, active_t, normalize_by_weight_sum)
    kern = kernels.backend_for(inst, backend)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    iters = config.max_iterations
    results = []
    trace = []
    running_best = -math.inf
    counter = 0
    total_iters = 0
    for _ in range(config.restarts + 1):
        start = _random_injection(rng, l, k)
        kinds = rng.integers(0, 2, size=iters, dtype=np.uint8)
        task_sel = rng.integers(0, k, size=iters).astype(np.intp)
        alt_swap = rng.integers(0, max(1, k - 1), size=iters).astype(np.intp)
        alt_re = rng.integers(0, max(1, l - k), size=iters).astype(np.intp)
        accept_u = rng.random(size=iters)
        if l == k and k < 2:
            q = kern.score_one(inst, start)
            results.append((q, start.copy()))
            running_best = _merge_run(trace, counter, [(0, q)], running_best)
            continue
        if l == k:
            kinds[:] = 1
        elif k < 2:
            kinds[:] = 0
        best, q, samples = kern.anneal_run(
            inst,
            start,
            config.initial_temperature,
            config.cooling_rate,
            kinds,
            task_sel,
            alt_swap,
            alt_re,
            accept_u,
        )
        running_best = _merge_run(trace, counter, samples, running_best)
        counter += iters
        total_iters += iters
        results.append((q, np.array(best)))
    _, best_perm = _select_best(results)
    mapping = mapping_from_perm(tasks, best_perm)
    report = overall_quality(mapping, w, ctx, active_t, normalize_by_weight_sum)
    return OptimizationResult(
        mapping=mapping,
        report=report,
        iterations_used=total_iters,
        trace=tuple(trace),
        optimality="heuristic",
    )


def solve(
    tasks: TaskCatalog,
    vocab: Vocabulary,
    w: WeightVector,
    ctx: CriterionContext | None = None,
    active=None,
    config: SolverConfig | None = None,
    *,
    normalize_by_weight_sum: bool = False,
    backend: str | None = None,
) -> OptimizationResult:
    """Dispatch to the solver named by ``config.algorithm``."""
    if config is None:
        config = SolverConfig()
    if config.algorithm == "brute-force":
        return brute_force_optimal(
            tasks,
            vocab,
            w,
            ctx,
            active,
            guard=config.brute_force_guard,
            normalize_by_weight_sum=normalize_by_weight_sum,
            backend=backend,
        )
    if config.algorithm == "assignment-exact":
        return assignment_exact(
            tasks, vocab, w, ctx, active, normalize_by_weight_sum=normalize_by_weight_sum
        )
    if config.algorithm == "local-search":
        return local_search(
            tasks,
            vocab,
            w,
            ctx,
            active,
            config,
            normalize_by_weight_sum=normalize_by_weight_sum,
            backend=backend,
        )
    return anneal(
        tasks,
        vocab,
        w,
        ctx,
        active,
        config,
        normalize_by_weight_sum=normalize_by_weight_sum,
        backend=backend,
    )


# ---------------------------------------------------------------------------
# serialization

def load_mapping(source, vocab: Vocabulary) -> Mapping:
    """Read a mapping file: a list of {task, gesture_fingerprint} rows.

    Fingerprints resolve against ``vocab``; an unknown fingerprint is a
    parse error.  Task references are validated later by verify_mapping.
    """
    data = read_json(source)
    if not isinstance(data, list):
        raise ParseError("mapping file must be a list", locus="mapping")
    pairs = []
    for i, row in enumerate(data):
        locus = f"mapping[{i}]"
        ref = require(row, "task", str, locus)
        fingerprint = require(row, "gesture_fingerprint", str, locus)
        try:
            index = vocab.index_by_fingerprint(fingerprint)
        except KeyError:
            raise ParseError(
                f"no gesture with fingerprint '{fingerprint}'",
                locus=f"{locus}.gesture_fingerprint",
            ) from None
        pairs.append((ref, index))
    return Mapping(tuple(pairs))


def save_mapping(mapping: Mapping, vocab: Vocabulary, target) -> None:
    """Write ``mapping`` with gesture fingerprints rather than indices."""
    fingerprints = vocab.fingerprints()
    rows = [
        {"task": ref, "gesture_fingerprint": fingerprints[index]}
        for ref, index in mapping.items()
    ]
    write_json(rows, target)
