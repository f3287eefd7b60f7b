"""Design criteria and the weighted quality function over mappings.

Eight standard criteria judge a task-to-gesture mapping: predictability,
consistency, familiarity, generalizability, viscosity, recoverability,
directness, and continuity.  Each yields a score in [0, 1]; the overall
quality is the weighted normalized sum q̂ = (Σ αᵢ·qᵢ)/n over the active
criteria, with weights αᵢ in [0, 1].

Five criteria are separable: their score is a mean of terms that depend on
one (task, gesture) pair at a time, which exact assignment solvers exploit.
The other three couple pairs of assignments and stay non-separable.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from ._jsonio import read_json, require, write_json
from .catalog import Task, TaskCatalog, task_similarity
from .errors import (
    EmptyCriteriaError,
    MissingContextError,
    ParseError,
    WeightError,
)
from .vocabulary import Gesture, Vocabulary, gesture_distance, gesture_effort

CRITERION_KINDS = (
    "predictability",
    "consistency",
    "familiarity",
    "generalizability",
    "viscosity",
    "recoverability",
    "directness",
    "continuity",
    "custom",
)

SEPARABLE_KINDS = frozenset(
    {"familiarity", "directness", "continuity", "recoverability", "viscosity"}
)

# object kinds that make a task "object-affecting" for the directness criterion
DIRECT_OBJECT_KINDS = frozenset({"node", "edge", "subgraph", "label"})

# familiarity of a (task, gesture) pair with no table entry
DEFAULT_FAMILIARITY = 0.5


@dataclass(frozen=True)
class Criterion:
    """One scoring criterion, standard or custom.

    A custom criterion supplies its own scoring function: a separable one
    maps (task, gesture, context) to [0, 1] and is averaged over the
    assigned pairs; a non-separable one maps (mapping, context) to [0, 1]
    directly.
    """

    kind: str
    name: str | None = None
    fn: Callable | None = None
    fn_separable: bool = False

    def __post_init__(self):
        if self.kind not in CRITERION_KINDS:
            raise ValueError(f"unknown criterion kind '{self.kind}'")
        if self.kind == "custom" and not self.name:
            raise ValueError("a custom criterion needs a name")
        if self.kind != "custom" and self.fn is not None:
            raise ValueError("only custom criteria carry a scoring function")

    @property
    def label(self) -> str:
        return self.name or self.kind

    @property
    def separable(self) -> bool:
        if self.kind == "custom":
            return self.fn_separable
        return self.kind in SEPARABLE_KINDS

    @classmethod
    def standard(cls, kind: str) -> "Criterion":
        if kind not in CRITERION_KINDS or kind == "custom":
            raise ValueError(f"not a standard criterion kind: '{kind}'")
        return cls(kind=kind)

    @classmethod
    def custom(cls, name: str, fn: Callable, separable: bool = False) -> "Criterion":
        return cls(kind="custom", name=name, fn=fn, fn_separable=separable)


def default_criteria() -> tuple:
    """All eight standard criteria in canonical order."""
    return tuple(Criterion.standard(kind) for kind in CRITERION_KINDS[:-1])


@dataclass(frozen=True)
class WeightVector:
    """Per-criterion weights αᵢ, each in [0, 1], keyed by criterion label."""

    weights: dict

    def __post_init__(self):
        object.__setattr__(self, "weights", dict(self.weights))
        for name, value in self.weights.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"weight for '{name}' must be a number")
            if not 0.0 <= float(value) <= 1.0:
                raise ValueError(f"weight for '{name}' must lie in [0, 1]")

    @classmethod
    def uniform(cls, criteria) -> "WeightVector":
        return cls({c.label: 1.0 for c in criteria})

    def alphas_for(self, criteria) -> list:
        """Weights aligned with ``criteria``; the weight domain must equal
        the active criterion set exactly."""
        labels = [c.label for c in criteria]
        missing = [name for name in labels if name not in self.weights]
        if missing:
            raise WeightError(f"no weight for criterion '{missing[0]}'")
        extra = sorted(set(self.weights) - set(labels))
        if extra:
            raise WeightError(f"weight for inactive criterion '{extra[0]}'")
        return [float(self.weights[name]) for name in labels]


@dataclass(frozen=True)
class CriterionContext:
    """Everything scoring needs besides the mapping itself.

    ``familiarity_table`` maps (task reference, gesture fingerprint) to a score
    in [0, 1]; task references may be bare ids or qualified ``activity:id``
    strings.  Contexts are immutable; scoring is pure.
    """

    catalog: TaskCatalog
    vocabulary: Vocabulary
    familiarity_table: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "familiarity_table", dict(self.familiarity_table))

    def familiarity_score(self, task: Task, gesture: Gesture) -> float:
        fp = gesture.fingerprint
        hit = self.familiarity_table.get((task.qualified_id, fp))
        if hit is None:
            hit = self.familiarity_table.get((task.id, fp))
        return DEFAULT_FAMILIARITY if hit is None else hit


def resolve_mapping(mapping, ctx: CriterionContext) -> list:
    """Assigned (task, gesture, gesture_index) triples in catalog order.

    Raises ValueError if the mapping is not a total injective assignment of
    the context's catalog into its vocabulary; ``verify_mapping`` in the
    optimizer module reports the individual violations instead.
    """
    pairs = mapping.items() if hasattr(mapping, "items") else dict(mapping).items()
    by_task = {}
    for ref, index in pairs:
        task = ctx.catalog.get(ref)
        if task.qualified_id in by_task:
            raise ValueError(f"mapping assigns task '{ref}' twice")
        by_task[task.qualified_id] = index
    out = []
    used = set()
    for task in ctx.catalog:
        if task.qualified_id not in by_task:
            raise ValueError(f"mapping is not total: no gesture for task '{task.id}'")
        index = by_task.pop(task.qualified_id)
        if not isinstance(index, (int, np.integer)) or isinstance(index, bool):
            raise ValueError(f"gesture reference for task '{task.id}' must be an integer")
        if not 0 <= index < len(ctx.vocabulary):
            raise ValueError(f"gesture index {index} out of range for task '{task.id}'")
        if index in used:
            raise ValueError(f"mapping is not injective: gesture {index} reused")
        used.add(index)
        out.append((task, ctx.vocabulary[int(index)], int(index)))
    return out


# ---------------------------------------------------------------------------
# separable criteria
#
# Each separable criterion either collapses to a constant (when no task
# qualifies) or decomposes into per-pair terms whose mean over the assigned
# pairs is the score.  The term form is what assignment solvers consume.

def separable_profile(criterion: Criterion, ctx: CriterionContext):
    """(``"constant"``, value) or (``"pair"``, term_fn) for a separable
    criterion; term_fn maps (task, gesture) to its per-pair term."""
    if not criterion.separable:
        raise ValueError(f"criterion '{criterion.label}' is not separable")
    k = len(ctx.catalog)
    if k == 0:
        return "constant", 1.0
    kind = criterion.kind
    if kind == "custom":
        if criterion.fn is None:
            raise MissingContextError(
                f"custom criterion '{criterion.label}' has no scoring function"
            )
        fn = criterion.fn
        return "pair", lambda task, gesture: float(fn(task, gesture, ctx))
    if kind == "familiarity":
        return "pair", ctx.familiarity_score
    if kind == "viscosity":
        total = sum(t.frequency_weight for t in ctx.catalog)
        if total == 0:
            return "constant", 1.0
        factor = {t.qualified_id: k * t.frequency_weight / total for t in ctx.catalog}
        return "pair", lambda task, gesture: factor[task.qualified_id] * (
            1.0 - gesture_effort(gesture)
        )
    if kind == "recoverability":
        mutating = sum(1 for t in ctx.catalog if t.mutating)
        if mutating == 0:
            return "constant", 1.0
        inverses = ctx.vocabulary.inverse_indices()
        index_of = ctx.vocabulary.index_of
        scale = k / mutating
        return "pair", lambda task, gesture: (
            scale if task.mutating and inverses[index_of(gesture)] >= 0 else 0.0
        )
    if kind == "directness":
        qualifying = sum(1 for t in ctx.catalog if t.object_scope & DIRECT_OBJECT_KINDS)
        if qualifying == 0:
            return "constant", 1.0
        scale = k / qualifying
        return "pair", lambda task, gesture: (
            scale
            if task.object_scope & DIRECT_OBJECT_KINDS and gesture.object_relation.kind != "none"
            else 0.0
        )
    if kind == "continuity":
        return "pair", lambda task, gesture: (
            1.0
            if task.mode.frequency == "varying-all" or task.mode.mode == gesture.mode_class
            else 0.0
        )
    raise ValueError(f"unhandled separable kind '{kind}'")


def separable_term_matrix(criterion: Criterion, ctx: CriterionContext):
    """(``"constant"``, value) or (``"matrix"``, k×l array of per-pair terms)."""
    shape, payload = separable_profile(criterion, ctx)
    if shape == "constant":
        return shape, payload
    k, l = len(ctx.catalog), len(ctx.vocabulary)
    kind = criterion.kind
    if kind == "viscosity":
        total = sum(t.frequency_weight for t in ctx.catalog)
        factors = np.array(
            [k * t.frequency_weight / total for t in ctx.catalog], dtype=np.float64
        )
        return "matrix", factors[:, None] * (1.0 - ctx.vocabulary.effort_vector())[None, :]
    if kind == "recoverability":
        mutating = np.array([t.mutating for t in ctx.catalog], dtype=np.float64)
        has_inverse = (ctx.vocabulary.inverse_indices() >= 0).astype(np.float64)
        scale = k / float(mutating.sum())
        return "matrix", scale * mutating[:, None] * has_inverse[None, :]
    if kind == "directness":
        qualifies = np.array(
            [bool(t.object_scope & DIRECT_OBJECT_KINDS) for t in ctx.catalog],
            dtype=np.float64,
        )
        bound = np.array(
            [g.object_relation.kind != "none" for g in ctx.vocabulary], dtype=np.float64
        )
        scale = k / float(qualifies.sum())
        return "matrix", scale * qualifies[:, None] * bound[None, :]
    if kind == "continuity":
        modes = np.array(
            [
                [
                    t.mode.frequency == "varying-all" or t.mode.mode == g.mode_class
                    for g in ctx.vocabulary
                ]
                for t in ctx.catalog
            ],
            dtype=np.float64,
        )
        return "matrix", modes
    # familiarity and custom separable criteria go through the pair function
    matrix = np.empty((k, l), dtype=np.float64)
    for i, task in enumerate(ctx.catalog):
        for j, gesture in enumerate(ctx.vocabulary):
            matrix[i, j] = payload(task, gesture)
    return "matrix", matrix


def _mean_of_terms(term_fn, assigned) -> float:
    total = 0.0
    for task, gesture, _ in assigned:
        total += term_fn(task, gesture)
    return total / len(assigned)


# ---------------------------------------------------------------------------
# non-separable criteria

def _score_predictability(assigned, ctx: CriterionContext) -> float:
    if len(assigned) < 2:
        return 1.0
    max_dist = ctx.vocabulary.max_pairwise_distance()
    if max_dist <= 0.0:
        return 1.0
    lowest = min(
        gesture_distance(a[1], b[1]) for a, b in combinations(assigned, 2)
    )
    return lowest / max_dist


def _score_consistency(assigned, ctx: CriterionContext) -> float:
    # rank concordance between task similarity and gesture closeness,
    # Kendall tau over all unordered pairs of assigned task pairs
    if len(assigned) < 3:
        return 1.0
    sims = []
    closeness = []
    for (ta, ga, _), (tb, gb, _) in combinations(assigned, 2):
        sims.append(task_similarity(ta, tb))
        closeness.append(1.0 - gesture_distance(ga, gb))
    count = len(sims)
    concordant_minus_discordant = 0
    for p in range(count):
        for q in range(p + 1, count):
            sx = (sims[p] > sims[q]) - (sims[p] < sims[q])
            sy = (closeness[p] > closeness[q]) - (closeness[p] < closeness[q])
            concordant_minus_discordant += sx * sy
    tau = concordant_minus_discordant / (count * (count - 1) // 2)
    return (tau + 1.0) / 2.0


def _score_generalizability(assigned, ctx: CriterionContext) -> float:
    if not assigned:
        return 1.0
    shapes = {gesture.shape_key() for _, gesture, _ in assigned}
    return 1.0 - len(shapes) / len(assigned)


def score_criterion(mapping, criterion: Criterion, ctx: CriterionContext) -> float:
    """Score of one criterion for a total injective mapping, in [0, 1]."""
    assigned = resolve_mapping(mapping, ctx)
    kind = criterion.kind
    if kind == "custom" and not criterion.fn_separable:
        if criterion.fn is None:
            raise MissingContextError(
                f"custom criterion '{criterion.label}' has no scoring function"
            )
        return float(criterion.fn(mapping, ctx))
    if criterion.separable:
        if not assigned:
            return 1.0
        kind_shape, payload = separable_profile(criterion, ctx)
        if kind_shape == "constant":
            return payload
        if kind == "viscosity":
            # literal form of the definition; equals the term mean up to rounding
            total = sum(t.frequency_weight for t in ctx.catalog)
            burden = sum(
                t.frequency_weight * gesture_effort(g) for t, g, _ in assigned
            )
            return 1.0 - burden / total
        if kind == "recoverability":
            mutating = [(t, g) for t, g, _ in assigned if t.mutating]
            inverses = ctx.vocabulary.inverse_indices()
            undoable = sum(
                1 for _, g in mutating if inverses[ctx.vocabulary.index_of(g)] >= 0
            )
            return undoable / len(mutating)
        if kind == "directness":
            qualifying = [
                (t, g) for t, g, _ in assigned if t.object_scope & DIRECT_OBJECT_KINDS
            ]
            bound = sum(1 for _, g in qualifying if g.object_relation.kind != "none")
            return bound / len(qualifying)
        return _mean_of_terms(payload, assigned)
    if kind == "predictability":
        return _score_predictability(assigned, ctx)
    if kind == "consistency":
        return _score_consistency(assigned, ctx)
    if kind == "generalizability":
        return _score_generalizability(assigned, ctx)
    raise ValueError(f"unhandled criterion kind '{kind}'")


# ---------------------------------------------------------------------------
# aggregation

@dataclass(frozen=True)
class QualityReport:
    """Per-criterion scores and the aggregate q̂ of one mapping."""

    aggregate: float
    scores: tuple
    weights: tuple
    normalization: str = "count"

    @property
    def n(self) -> int:
        return len(self.scores)

    @property
    def per_criterion(self) -> dict:
        return dict(self.scores)

    def score_of(self, label: str) -> float:
        for name, value in self.scores:
            if name == label:
                return value
        raise KeyError(f"no criterion '{label}' in report")

    def to_dict(self) -> dict:
        return {
            "aggregate": self.aggregate,
            "n": self.n,
            "normalization": self.normalization,
            "per_criterion": {name: value for name, value in self.scores},
            "weights": {name: value for name, value in self.weights},
        }


def overall_quality(
    mapping,
    w: WeightVector,
    ctx: CriterionContext,
    active=None,
    normalize_by_weight_sum: bool = False,
) -> QualityReport:
    """Weighted normalized quality q̂ = (Σ αᵢ·qᵢ)/n of a mapping.

    The divisor is the criterion count n, following the quality formula
    exactly; pass ``normalize_by_weight_sum=True`` to divide by Σ αᵢ
    instead (an all-zero weight vector then scores 0).
    """
    criteria = tuple(default_criteria() if active is None else active)
    if not criteria:
        raise EmptyCriteriaError("at least one active criterion is required")
    labels = [c.label for c in criteria]
    if len(set(labels)) != len(labels):
        raise ValueError("active criteria have duplicate labels")
    alphas = w.alphas_for(criteria)
    scores = [score_criterion(mapping, c, ctx) for c in criteria]
    weighted = 0.0
    for alpha, score in zip(alphas, scores):
        weighted += alpha * score
    if normalize_by_weight_sum:
        alpha_total = sum(alphas)
        aggregate = weighted / alpha_total if alpha_total > 0 else 0.0
        normalization = "weight-sum"
    else:
        aggregate = weighted / len(criteria)
        normalization = "count"
    return QualityReport(
        aggregate=aggregate,
        scores=tuple(zip(labels, scores)),
        weights=tuple(zip(labels, alphas)),
        normalization=normalization,
    )


# ---------------------------------------------------------------------------
# serialization

def load_weights(source) -> WeightVector:
    """Read a weight vector from a JSON path or stream."""
    data = read_json(source)
    table = require(data, "weights", dict, "weights")
    for name, value in table.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError("must be a number", locus=f"weights.{name}")
        if not 0.0 <= float(value) <= 1.0:
            raise ParseError("must lie in [0, 1]", locus=f"weights.{name}")
    return WeightVector({name: float(value) for name, value in table.items()})


def save_weights(weights: WeightVector, target) -> None:
    write_json({"weights": dict(weights.weights)}, target)


def load_familiarity(source) -> dict:
    """Read a familiarity table: a list of {task, gesture_fingerprint, score}."""
    data = read_json(source)
    if not isinstance(data, list):
        raise ParseError("familiarity table must be a list", locus="familiarity")
    table = {}
    for i, row in enumerate(data):
        locus = f"familiarity[{i}]"
        task = require(row, "task", str, locus)
        fingerprint = require(row, "gesture_fingerprint", str, locus)
        score = require(row, "score", (int, float), locus)
        if isinstance(score, bool) or not 0.0 <= float(score) <= 1.0:
            raise ParseError("field 'score' must be a number in [0, 1]", locus=locus)
        key = (task, fingerprint)
        if key in table:
            raise ParseError(f"duplicate entry for ('{task}', '{fingerprint}')", locus=locus)
        table[key] = float(score)
    return table


def save_familiarity(table: dict, target) -> None:
    rows = [
        {"task": task, "gesture_fingerprint": fingerprint, "score": score}
        for (task, fingerprint), score in sorted(table.items())
    ]
    write_json(rows, target)
