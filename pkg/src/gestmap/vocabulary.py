"""Gesture vocabularies generated from declared degrees of freedom.

A vocabulary spec lists the dimensions an input technology offers (e.g.
continuity of contact, duration, nature of motion for touch; form, material,
or single actions for tangibles) together with implication constraints that
rule out combinations the hardware or the human hand cannot produce.  A
gesture fixes one value per applicable dimension, an object relation tying
the gesture to a target on the canvas (started on a node, crossed a label,
...), and a device multiplicity (contact points, hands, users).

Enumerating a spec yields every legal gesture in a deterministic order,
which makes gesture indices stable and lets mappings refer to gestures by
canonical fingerprint strings.
"""

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._jsonio import read_json, require, write_json
from .errors import ParseError

MODALITIES = ("touch", "pen", "tangible")

OBJECT_RELATION_KINDS = ("none", "started-on", "crossed", "ended-on", "enclosed")

MODE_CLASSES = ("stepped", "continuous", "composite")

# multiplicity slots addressable from constraints alongside dimension names
PSEUDO_SLOTS = ("points", "hands", "users")

# dimensions whose values define the base movement shape of a gesture,
# used when judging whether two gestures reuse the same motion
SHAPE_DIMENSIONS = ("continuity", "nature-of-motion", "linearity")

# value pairs swapped when forming the inverse of a gesture; values not
# listed here (and dimensions not listed) are their own inverse
_INVERSE_VALUES = {
    ("movement-relation", "divergent"): "convergent",
    ("movement-relation", "convergent"): "divergent",
    ("single-action", "place"): "lift",
    ("single-action", "lift"): "place",
}

# single actions performed as one discrete step; the remaining actions
# (translate, rotate, tilt, shake) unfold continuously
_STEPPED_ACTIONS = ("place", "lift", "flip")


@dataclass(frozen=True)
class Dimension:
    """One degree of freedom with its discrete value set."""

    name: str
    values: tuple
    modalities: frozenset

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "modalities", frozenset(self.modalities))
        if not self.name:
            raise ValueError("dimension name must be non-empty")
        if self.name in PSEUDO_SLOTS:
            raise ValueError(f"dimension name '{self.name}' is reserved")
        if not self.values:
            raise ValueError(f"dimension '{self.name}': values must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"dimension '{self.name}': duplicate values")
        if not self.modalities:
            raise ValueError(f"dimension '{self.name}': modalities must be non-empty")
        unknown = self.modalities - set(MODALITIES)
        if unknown:
            raise ValueError(f"dimension '{self.name}': unknown modalities {sorted(unknown)}")


@dataclass(frozen=True)
class ObjectRelation:
    """How a gesture relates to an object on the canvas.

    Kind ``none`` means the gesture addresses no particular object and
    carries no target class; every other kind requires one.
    """

    kind: str
    target_class: str | None = None

    def __post_init__(self):
        if self.kind not in OBJECT_RELATION_KINDS:
            raise ValueError(f"unknown object relation kind '{self.kind}'")
        if self.kind == "none" and self.target_class is not None:
            raise ValueError("relation 'none' carries no target class")
        if self.kind != "none" and not self.target_class:
            raise ValueError(f"relation '{self.kind}' requires a target class")

    def __str__(self):
        if self.kind == "none":
            return "none"
        return f"{self.kind}@{self.target_class}"


@dataclass(frozen=True)
class DeviceMultiplicity:
    """Contact points, hands, and users performing the gesture."""

    points: int = 1
    hands: int = 1
    users: int = 1

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if self.hands not in (1, 2):
            raise ValueError("hands must be 1 or 2")
        if self.users < 1:
            raise ValueError("users must be >= 1")
        if self.hands == 2 and self.points < 2:
            raise ValueError("two hands imply at least two contact points")

    def __str__(self):
        return f"p{self.points}h{self.hands}u{self.users}"


@dataclass(frozen=True)
class ConstraintAtom:
    """One slot/value condition; the slot is a dimension name or a
    multiplicity slot (points, hands, users)."""

    slot: str
    value: object

    def __post_init__(self):
        if not self.slot:
            raise ValueError("constraint slot must be non-empty")
        if self.slot in PSEUDO_SLOTS:
            if not isinstance(self.value, int) or isinstance(self.value, bool):
                raise ValueError(f"constraint on '{self.slot}' needs an integer value")
        elif not isinstance(self.value, str):
            raise ValueError(f"constraint on dimension '{self.slot}' needs a string value")


@dataclass(frozen=True)
class Constraint:
    """Implication ruling out combinations: if ``condition`` holds, the
    ``requirement`` must hold too.  A missing condition applies always."""

    condition: ConstraintAtom | None
    requirement: ConstraintAtom

    def satisfied_by(self, assignment: dict, multiplicity: DeviceMultiplicity) -> bool:
        def slot_value(atom):
            if atom.slot in PSEUDO_SLOTS:
                return getattr(multiplicity, atom.slot)
            return assignment.get(atom.slot)

        if self.condition is not None and slot_value(self.condition) != self.condition.value:
            return True
        return slot_value(self.requirement) == self.requirement.value


@dataclass(frozen=True)
class VocabularySpec:
    """Dimensions plus constraints describing one or more modalities."""

    dimensions: tuple
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise ValueError("duplicate dimension names in spec")

    def dimensions_for(self, modality: str) -> tuple:
        return tuple(d for d in self.dimensions if modality in d.modalities)

    def modalities(self) -> tuple:
        present = set()
        for d in self.dimensions:
            present |= d.modalities
        return tuple(m for m in MODALITIES if m in present)


def derive_mode_class(modality: str, assignment: dict, multiplicity: DeviceMultiplicity) -> str:
    """Interaction mode class a gesture operates in, derived from its parts.

    Multi-user gestures and chained sequences are composite; otherwise the
    continuity dimension decides, and for tangibles the single action does.
    """
    if multiplicity.users > 1:
        return "composite"
    sequence = assignment.get("sequence")
    if sequence is not None and sequence not in ("single", "none"):
        return "composite"
    continuity = assignment.get("continuity")
    if continuity == "discrete":
        return "stepped"
    if continuity == "continuous":
        return "continuous"
    action = assignment.get("single-action")
    if action is not None:
        return "stepped" if action in _STEPPED_ACTIONS else "continuous"
    return "stepped"


@dataclass(frozen=True)
class Gesture:
    """One concrete gesture: a value per dimension, an object relation,
    and a device multiplicity.  The mode class is always derived."""

    modality: str
    assignment: tuple
    object_relation: ObjectRelation
    multiplicity: DeviceMultiplicity
    mode_class: str = field(init=False)

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality '{self.modality}'")
        pairs = self.assignment
        if isinstance(pairs, dict):
            pairs = pairs.items()
        pairs = tuple(sorted((str(k), str(v)) for k, v in pairs))
        names = [k for k, _ in pairs]
        if len(set(names)) != len(names):
            raise ValueError("duplicate dimension in gesture assignment")
        object.__setattr__(self, "assignment", pairs)
        object.__setattr__(
            self, "mode_class", derive_mode_class(self.modality, dict(pairs), self.multiplicity)
        )

    def value(self, dimension: str, default=None):
        for name, value in self.assignment:
            if name == dimension:
                return value
        return default

    @property
    def assignment_dict(self) -> dict:
        return dict(self.assignment)

    @property
    def fingerprint(self) -> str:
        """Canonical one-line identity, stable across runs and processes."""
        dims = ",".join(f"{k}={v}" for k, v in self.assignment)
        return f"{self.modality}|{dims}|{self.object_relation}|{self.multiplicity}"

    def shape_key(self) -> tuple:
        return tuple(self.value(d) for d in SHAPE_DIMENSIONS)


def gesture_effort(gesture: Gesture) -> float:
    """Physical effort of performing the gesture once, in [0, 1].

    Summed in tenths: extra contact points beyond the first (two tenths
    each, at most two counted), bimanual and multi-user coordination (two
    tenths each), mode class (two tenths composite, one continuous), and
    direction changes in the movement path (two tenths).
    """
    tenths = 2 * min(gesture.multiplicity.points - 1, 2)
    if gesture.multiplicity.hands == 2:
        tenths += 2
    if gesture.multiplicity.users >= 2:
        tenths += 2
    if gesture.mode_class == "composite":
        tenths += 2
    elif gesture.mode_class == "continuous":
        tenths += 1
    if gesture.value("linearity") == "direction-changes":
        tenths += 2
    return min(tenths, 10) / 10.0


def gesture_distance(a: Gesture, b: Gesture) -> float:
    """Fraction of differing slots between two gestures, in [0, 1].

    Compared slots are the modality, each dimension present in both
    assignments, the object relation kind, the contact point count, and the
    hand count.  Dimensions present in only one gesture, the relation's
    target class, and the user count do not enter the comparison.
    """
    da, db = dict(a.assignment), dict(b.assignment)
    shared = [name for name in da if name in db]
    slots = 4 + len(shared)
    mismatches = 0
    if a.modality != b.modality:
        mismatches += 1
    if a.object_relation.kind != b.object_relation.kind:
        mismatches += 1
    if a.multiplicity.points != b.multiplicity.points:
        mismatches += 1
    if a.multiplicity.hands != b.multiplicity.hands:
        mismatches += 1
    for name in shared:
        if da[name] != db[name]:
            mismatches += 1
    return mismatches / slots


def _inverse_assignment(assignment: tuple) -> tuple:
    return tuple(
        (name, _INVERSE_VALUES.get((name, value), value)) for name, value in assignment
    )


@dataclass(frozen=True)
class Violation:
    """One way a gesture fails its spec."""

    kind: str
    detail: str


def validate_gesture(gesture: Gesture, spec: VocabularySpec) -> list:
    """All ways ``gesture`` violates ``spec``; an empty list means valid."""
    violations = []
    dims = spec.dimensions_for(gesture.modality)
    if not dims:
        violations.append(
            Violation("modality", f"spec declares no dimensions for '{gesture.modality}'")
        )
    assignment = gesture.assignment_dict
    by_name = {d.name: d for d in dims}
    for d in dims:
        if d.name not in assignment:
            violations.append(Violation("missing-dimension", f"no value for '{d.name}'"))
        elif assignment[d.name] not in d.values:
            violations.append(
                Violation(
                    "unknown-value",
                    f"'{assignment[d.name]}' is not a value of dimension '{d.name}'",
                )
            )
    for name in assignment:
        if name not in by_name:
            violations.append(
                Violation("unknown-dimension", f"dimension '{name}' not in spec")
            )
    for constraint in spec.constraints:
        if not constraint.satisfied_by(assignment, gesture.multiplicity):
            req = constraint.requirement
            violations.append(
                Violation("constraint", f"requires {req.slot}={req.value}")
            )
    return violations


class Vocabulary:
    """Ordered, duplicate-free collection of gestures.

    ``constrained_to_empty`` is set when an enumeration produced candidate
    combinations but the constraints rejected every one of them, which
    almost always signals a mistyped constraint.  Instances are treated as
    immutable; derived arrays (efforts, distances, fingerprints) are cached.
    """

    def __init__(self, gestures, constrained_to_empty: bool = False):
        self._gestures = tuple(gestures)
        self.constrained_to_empty = bool(constrained_to_empty)
        index = {}
        for i, g in enumerate(self._gestures):
            if g in index:
                raise ValueError(f"duplicate gesture: {g.fingerprint}")
            index[g] = i
        self._index = index
        self._cache = {}

    def __len__(self) -> int:
        return len(self._gestures)

    def __iter__(self) -> Iterator[Gesture]:
        return iter(self._gestures)

    def __getitem__(self, i: int) -> Gesture:
        return self._gestures[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._gestures == other._gestures

    def __repr__(self):
        return f"Vocabulary({len(self._gestures)} gestures)"

    @property
    def gestures(self) -> tuple:
        return self._gestures

    def index_of(self, gesture: Gesture) -> int:
        try:
            return self._index[gesture]
        except KeyError:
            raise KeyError(f"gesture not in vocabulary: {gesture.fingerprint}") from None

    def fingerprints(self) -> tuple:
        if "fingerprints" not in self._cache:
            self._cache["fingerprints"] = tuple(g.fingerprint for g in self._gestures)
        return self._cache["fingerprints"]

    def index_by_fingerprint(self, fingerprint: str) -> int:
        if "fp_index" not in self._cache:
            self._cache["fp_index"] = {fp: i for i, fp in enumerate(self.fingerprints())}
        try:
            return self._cache["fp_index"][fingerprint]
        except KeyError:
            raise KeyError(f"no gesture with fingerprint '{fingerprint}'") from None

    def effort_vector(self) -> np.ndarray:
        if "effort" not in self._cache:
            self._cache["effort"] = np.array(
                [gesture_effort(g) for g in self._gestures], dtype=np.float64
            )
        return self._cache["effort"]

    def inverse_indices(self) -> np.ndarray:
        """Index of each gesture's inverse within the vocabulary, -1 if absent."""
        if "inverse" not in self._cache:
            out = np.empty(len(self._gestures), dtype=np.intp)
            for i, g in enumerate(self._gestures):
                twin = Gesture(
                    modality=g.modality,
                    assignment=_inverse_assignment(g.assignment),
                    object_relation=g.object_relation,
                    multiplicity=g.multiplicity,
                )
                out[i] = self._index.get(twin, -1)
            self._cache["inverse"] = out
        return self._cache["inverse"]

    def shape_codes(self) -> np.ndarray:
        """Integer code of each gesture's base movement shape."""
        if "shapes" not in self._cache:
            codes = {}
            out = np.empty(len(self._gestures), dtype=np.intp)
            for i, g in enumerate(self._gestures):
                key = g.shape_key()
                out[i] = codes.setdefault(key, len(codes))
            self._cache["shapes"] = out
        return self._cache["shapes"]

    def _feature_codes(self):
        """Integer feature matrix driving the vectorized distance blocks."""
        if "features" not in self._cache:
            l = len(self._gestures)
            mod = np.array([MODALITIES.index(g.modality) for g in self._gestures], dtype=np.int16)
            kind = np.array(
                [OBJECT_RELATION_KINDS.index(g.object_relation.kind) for g in self._gestures],
                dtype=np.int16,
            )
            points = np.array([g.multiplicity.points for g in self._gestures], dtype=np.int16)
            hands = np.array([g.multiplicity.hands for g in self._gestures], dtype=np.int16)
            names = []
            for g in self._gestures:
                for name, _ in g.assignment:
                    if name not in names:
                        names.append(name)
            dims = np.full((l, len(names)), -1, dtype=np.int16)
            value_codes = {name: {} for name in names}
            for i, g in enumerate(self._gestures):
                for name, value in g.assignment:
                    table = value_codes[name]
                    dims[i, names.index(name)] = table.setdefault(value, len(table))
            self._cache["features"] = (mod, kind, points, hands, dims)
        return self._cache["features"]

    def _distance_block(self, rows: slice):
        mod, kind, points, hands, dims = self._feature_codes()
        mismatches = (mod[rows, None] != mod[None, :]).astype(np.int16)
        mismatches += kind[rows, None] != kind[None, :]
        mismatches += points[rows, None] != points[None, :]
        mismatches += hands[rows, None] != hands[None, :]
        slots = np.full(mismatches.shape, 4, dtype=np.int16)
        for j in range(dims.shape[1]):
            col = dims[:, j]
            present = (col[rows, None] >= 0) & (col[None, :] >= 0)
            slots += present
            mismatches += present & (col[rows, None] != col[None, :])
        return mismatches / slots

    def distance_matrix(self, max_size: int = 4096) -> np.ndarray:
        """Full pairwise distance matrix; refuses vocabularies above
        ``max_size`` gestures to keep memory bounded."""
        if "dist" not in self._cache:
            l = len(self._gestures)
            if l > max_size:
                raise ValueError(
                    f"distance matrix for {l} gestures exceeds the {max_size} gesture cap"
                )
            self._cache["dist"] = self._distance_block(slice(0, l))
        return self._cache["dist"]

    def max_pairwise_distance(self) -> float:
        """Largest pairwise distance, computed blockwise without holding
        the full matrix."""
        if "maxdist" not in self._cache:
            l = len(self._gestures)
            best = 0.0
            step = 512
            for start in range(0, l, step):
                block = self._distance_block(slice(start, min(start + step, l)))
                if block.size:
                    best = max(best, float(block.max()))
            self._cache["maxdist"] = best
        return self._cache["maxdist"]


def gesture_inverse(gesture: Gesture, vocabulary: Vocabulary):
    """The gesture undoing ``gesture`` (e.g. place vs lift, diverge vs
    converge), or None when the vocabulary does not contain it."""
    i = vocabulary.index_of(gesture)
    j = vocabulary.inverse_indices()[i]
    return vocabulary[j] if j >= 0 else None


def enumerate_vocabulary(spec: VocabularySpec, object_relations, multiplicities) -> Vocabulary:
    """Every legal gesture for ``spec`` over the given object relations and
    multiplicities, in deterministic order.

    Modalities are visited in canonical order; within a modality the
    dimension-value combinations unfold lexicographically over the spec's
    dimension order, then object relations and multiplicities in the order
    given.  Combinations violating any constraint are skipped.  A warning
    is emitted if constraints reject every candidate.
    """
    relations = tuple(dict.fromkeys(object_relations))
    mults = tuple(dict.fromkeys(multiplicities))
    gestures = []
    candidates = 0
    for modality in MODALITIES:
        dims = spec.dimensions_for(modality)
        if not dims:
            continue
        names = [d.name for d in dims]
        for combo in itertools.product(*(d.values for d in dims)):
            assignment = dict(zip(names, combo))
            for relation in relations:
                for mult in mults:
                    candidates += 1
                    if all(c.satisfied_by(assignment, mult) for c in spec.constraints):
                        gestures.append(
                            Gesture(
                                modality=modality,
                                assignment=assignment,
                                object_relation=relation,
                                multiplicity=mult,
                            )
                        )
    constrained_to_empty = candidates > 0 and not gestures
    if constrained_to_empty:
        warnings.warn(
            "constraints rejected every candidate gesture; the vocabulary is empty",
            stacklevel=2,
        )
    return Vocabulary(gestures, constrained_to_empty)


# ---------------------------------------------------------------------------
# built-in specs
#
# The movement dimensions apply to touch and pen input; the tangible
# dimensions describe physical objects placed on the surface.  Values a
# device cannot vary (e.g. movement relation with a single contact point)
# are forced to a baseline by constraints rather than dropped, so gestures
# across multiplicities stay comparable slot by slot.

def _movement_dimensions(modality: str) -> tuple:
    tag = frozenset((modality,))
    return (
        Dimension("continuity", ("discrete", "continuous"), tag),
        Dimension("duration", ("short", "long"), tag),
        Dimension("nature-of-motion", ("physical", "symbolic"), tag),
        Dimension("linearity", ("straight", "direction-changes"), tag),
        Dimension("movement-relation", ("parallel", "divergent", "convergent"), tag),
    )


def _movement_constraints() -> tuple:
    return (
        # a discrete contact has no path to bend
        Constraint(ConstraintAtom("continuity", "discrete"), ConstraintAtom("linearity", "straight")),
        # relations between movements need at least two contact points
        Constraint(ConstraintAtom("points", 1), ConstraintAtom("movement-relation", "parallel")),
    )


def _tangible_dimensions() -> tuple:
    tag = frozenset(("tangible",))
    return (
        Dimension("form", ("thin-bendable", "thick-rigid"), tag),
        Dimension("material", ("wood", "plastic", "acrylic"), tag),
        Dimension("role", ("function", "parameter", "data"), tag),
        Dimension(
            "single-action",
            ("place", "lift", "translate", "rotate", "tilt", "flip", "shake"),
            tag,
        ),
        Dimension("tangible-type-relation", ("same-type", "different-type"), tag),
        Dimension("tangible-coupling", ("decoupled", "coupled"), tag),
        Dimension("sequence", ("single", "multi"), tag),
    )


def _tangible_constraints() -> tuple:
    return (
        # relations between tangibles need at least two of them on the surface
        Constraint(ConstraintAtom("points", 1), ConstraintAtom("tangible-type-relation", "same-type")),
        Constraint(ConstraintAtom("points", 1), ConstraintAtom("tangible-coupling", "decoupled")),
    )


def builtin_spec(modality: str) -> VocabularySpec:
    """Built-in vocabulary spec for ``touch``, ``pen``, or ``tangible``."""
    if modality == "touch":
        return VocabularySpec(_movement_dimensions("touch"), _movement_constraints())
    if modality == "pen":
        constraints = _movement_constraints() + (
            # a single pen offers exactly one contact point
            Constraint(None, ConstraintAtom("points", 1)),
        )
        return VocabularySpec(_movement_dimensions("pen"), constraints)
    if modality == "tangible":
        return VocabularySpec(_tangible_dimensions(), _tangible_constraints())
    raise ValueError(f"unknown modality '{modality}' (expected one of {MODALITIES})")


def default_object_relations() -> tuple:
    """Default object relations: unbound, or tied to a node by the four
    spatial relations."""
    return (
        ObjectRelation("none"),
        ObjectRelation("started-on", "node"),
        ObjectRelation("crossed", "node"),
        ObjectRelation("ended-on", "node"),
        ObjectRelation("enclosed", "node"),
    )


def default_multiplicities(modality: str) -> tuple:
    """Default device multiplicities per modality."""
    if modality == "pen":
        return (DeviceMultiplicity(1, 1, 1),)
    return (
        DeviceMultiplicity(1, 1, 1),
        DeviceMultiplicity(2, 1, 1),
        DeviceMultiplicity(2, 2, 1),
        DeviceMultiplicity(2, 2, 2),
    )


@dataclass(frozen=True)
class SpecDocument:
    """A vocabulary spec bundled with the object relations and
    multiplicities to enumerate it over."""

    spec: VocabularySpec
    object_relations: tuple
    multiplicities: tuple

    def enumerate(self) -> Vocabulary:
        return enumerate_vocabulary(self.spec, self.object_relations, self.multiplicities)


def builtin_document(modality: str) -> SpecDocument:
    return SpecDocument(
        spec=builtin_spec(modality),
        object_relations=default_object_relations(),
        multiplicities=default_multiplicities(modality),
    )


# ---------------------------------------------------------------------------
# serialization

def _atom_from_dict(data, locus: str) -> ConstraintAtom:
    slot = require(data, "dimension", str, locus)
    value = require(data, "value", None, locus)
    try:
        return ConstraintAtom(slot, value)
    except ValueError as exc:
        raise ParseError(str(exc), locus=locus) from None


def spec_document_from_dict(data) -> SpecDocument:
    dim_rows = require(data, "dimensions", list, "spec")
    dimensions = []
    for i, row in enumerate(dim_rows):
        locus = f"dimensions[{i}]"
        name = require(row, "name", str, locus)
        values = require(row, "values", list, locus)
        modalities = require(row, "modalities", list, locus)
        try:
            dimensions.append(Dimension(name, tuple(values), frozenset(modalities)))
        except ValueError as exc:
            raise ParseError(str(exc), locus=locus) from None
    constraints = []
    for i, row in enumerate(data.get("constraints", [])):
        locus = f"constraints[{i}]"
        then = require(row, "then", dict, locus)
        condition = row.get("if")
        atom_if = None
        if condition is not None:
            if not isinstance(condition, dict):
                raise ParseError("field 'if' must be an object or null", locus=locus)
            atom_if = _atom_from_dict(condition, f"{locus}.if")
        constraints.append(Constraint(atom_if, _atom_from_dict(then, f"{locus}.then")))
    try:
        spec = VocabularySpec(tuple(dimensions), tuple(constraints))
    except ValueError as exc:
        raise ParseError(str(exc), locus="spec") from None

    relations = []
    if "object_relations" in data:
        for i, row in enumerate(data["object_relations"]):
            locus = f"object_relations[{i}]"
            kind = require(row, "kind", str, locus)
            target = row.get("target_class")
            try:
                relations.append(ObjectRelation(kind, target))
            except ValueError as exc:
                raise ParseError(str(exc), locus=locus) from None
    else:
        relations = [ObjectRelation("none", None)]

    mults = []
    if "multiplicities" in data:
        for i, row in enumerate(data["multiplicities"]):
            locus = f"multiplicities[{i}]"
            try:
                mults.append(
                    DeviceMultiplicity(
                        points=require(row, "points", int, locus),
                        hands=require(row, "hands", int, locus),
                        users=require(row, "users", int, locus),
                    )
                )
            except ValueError as exc:
                raise ParseError(str(exc), locus=locus) from None
    else:
        mults = [DeviceMultiplicity(1, 1, 1)]
    return SpecDocument(spec, tuple(relations), tuple(mults))


def spec_document_to_dict(document: SpecDocument) -> dict:
    dims = [
        {"name": d.name, "values": list(d.values), "modalities": sorted(d.modalities)}
        for d in document.spec.dimensions
    ]
    constraints = []
    for c in document.spec.constraints:
        row = {"then": {"dimension": c.requirement.slot, "value": c.requirement.value}}
        row["if"] = (
            None
            if c.condition is None
            else {"dimension": c.condition.slot, "value": c.condition.value}
        )
        constraints.append(row)
    relations = []
    for r in document.object_relations:
        row = {"kind": r.kind}
        if r.target_class is not None:
            row["target_class"] = r.target_class
        relations.append(row)
    mults = [
        {"points": m.points, "hands": m.hands, "users": m.users}
        for m in document.multiplicities
    ]
    return {
        "dimensions": dims,
        "constraints": constraints,
        "object_relations": relations,
        "multiplicities": mults,
    }


def load_spec(source) -> SpecDocument:
    """Read a vocabulary spec document from a JSON path or stream."""
    return spec_document_from_dict(read_json(source))


def save_spec(document: SpecDocument, target) -> None:
    """Write ``document`` as deterministic JSON to a path or stream."""
    write_json(spec_document_to_dict(document), target)
