"""Shipped demo data: a small catalog, a mixed-modality vocabulary spec,
a hand-designed sample mapping, and two compact search fixtures.

The demo mapping pairs six tasks with six hand-encoded gestures (tap a
node, shake the canvas, sketch the intended layout, cross out a label,
stamp a node with a tangible, select then flip a tangible) so scoring and
reporting have concrete, regenerable inputs.  The two search fixtures are
small enough for the exhaustive solver and are used to cross-check the
heuristic solvers.
"""

from pathlib import Path

from .catalog import InteractionModeTag, Task, TaskCatalog, TaskCategory
from .criteria import (
    WeightVector,
    default_criteria,
    save_familiarity,
    save_weights,
)
from .optimize import Mapping, SolverConfig
from ._jsonio import write_json
from .catalog import save_catalog
from .vocabulary import (
    Constraint,
    ConstraintAtom,
    DeviceMultiplicity,
    Dimension,
    Gesture,
    ObjectRelation,
    SpecDocument,
    Vocabulary,
    VocabularySpec,
    save_spec,
)


def _task(activity, id_, name, category, frequency, mode, scope, mutating, weight=1.0):
    return Task(
        id=id_,
        name=name,
        category=TaskCategory(activity, category),
        mode=InteractionModeTag(frequency, mode),
        object_scope=frozenset(scope),
        mutating=mutating,
        frequency_weight=weight,
    )


def demo_catalog() -> TaskCatalog:
    """Six tasks spanning selection, view control, layout, labeling, and
    two mutating edits, with uneven usage frequencies."""
    return TaskCatalog(
        (
            _task("exploration", "select-node", "Select node", "select",
                  "mostly", "stepped", ("node",), False, 3.0),
            _task("exploration", "center-view", "Center view", "explore",
                  "always", "stepped", ("view",), False, 1.5),
            _task("exploration", "apply-layout", "Apply graph layout", "reconfigure",
                  "always", "stepped", ("document",), False, 0.5),
            _task("exploration", "hide-labels", "Hide labels", "connect",
                  "always", "stepped", ("label",), False, 1.0),
            _task("editing", "duplicate-node", "Duplicate node", "insert",
                  "always", "stepped", ("node",), True, 1.0),
            _task("editing", "delete-subgraph", "Delete subgraph", "delete",
                  "always", "stepped", ("subgraph",), True, 0.5),
        )
    )


def demo_document() -> SpecDocument:
    """Mixed-modality spec: movement dimensions for touch and pen plus a
    restricted tangible block, 288 gestures total."""
    movement = ("touch", "pen")
    dimensions = (
        Dimension("continuity", ("discrete", "continuous"), movement),
        Dimension("duration", ("short", "long"), movement),
        Dimension("nature-of-motion", ("physical", "symbolic"), movement),
        Dimension("linearity", ("straight", "direction-changes"), movement),
        Dimension("form", ("thick-rigid",), ("tangible",)),
        Dimension("material", ("plastic", "acrylic"), ("tangible",)),
        Dimension("role", ("function",), ("tangible",)),
        Dimension("single-action", ("place", "lift", "flip"), ("tangible",)),
        Dimension("tangible-type-relation", ("same-type",), ("tangible",)),
        Dimension("tangible-coupling", ("decoupled",), ("tangible",)),
        Dimension("sequence", ("single", "multi"), ("tangible",)),
    )
    constraints = (
        # a discrete contact cannot trace a path with direction changes
        Constraint(
            ConstraintAtom("continuity", "discrete"),
            ConstraintAtom("linearity", "straight"),
        ),
    )
    relations = (
        ObjectRelation("none", None),
        ObjectRelation("started-on", "node"),
        ObjectRelation("crossed", "label"),
        ObjectRelation("crossed", "subgraph"),
    )
    multiplicities = (
        DeviceMultiplicity(1, 1, 1),
        DeviceMultiplicity(2, 1, 1),
    )
    return SpecDocument(
        spec=VocabularySpec(dimensions, constraints),
        object_relations=relations,
        multiplicities=multiplicities,
    )


def demo_vocabulary() -> Vocabulary:
    return demo_document().enumerate()


def demo_gestures() -> dict:
    """The six hand-encoded gestures of the sample mapping, by name.

    All six are members of the demo vocabulary.
    """
    return {
        # brief single touch on the node itself
        "tap-node": Gesture(
            modality="touch",
            assignment=(
                ("continuity", "discrete"),
                ("duration", "short"),
                ("nature-of-motion", "physical"),
                ("linearity", "straight"),
            ),
            object_relation=ObjectRelation("started-on", "node"),
            multiplicity=DeviceMultiplicity(1, 1, 1),
        ),
        # several fingers moving back and forth anywhere on the canvas
        "shake-canvas": Gesture(
            modality="touch",
            assignment=(
                ("continuity", "continuous"),
                ("duration", "short"),
                ("nature-of-motion", "physical"),
                ("linearity", "direction-changes"),
            ),
            object_relation=ObjectRelation("none", None),
            multiplicity=DeviceMultiplicity(2, 1, 1),
        ),
        # pen sketch of the intended layout in a free corner
        "sketch-layout": Gesture(
            modality="pen",
            assignment=(
                ("continuity", "continuous"),
                ("duration", "long"),
                ("nature-of-motion", "symbolic"),
                ("linearity", "direction-changes"),
            ),
            object_relation=ObjectRelation("none", None),
            multiplicity=DeviceMultiplicity(1, 1, 1),
        ),
        # repeated pen strokes through a representative label
        "cross-out-label": Gesture(
            modality="pen",
            assignment=(
                ("continuity", "continuous"),
                ("duration", "long"),
                ("nature-of-motion", "symbolic"),
                ("linearity", "direction-changes"),
            ),
            object_relation=ObjectRelation("crossed", "label"),
            multiplicity=DeviceMultiplicity(1, 1, 1),
        ),
        # place a second tangible on the source node, then set it down elsewhere
        "stamp-node": Gesture(
            modality="tangible",
            assignment=(
                ("form", "thick-rigid"),
                ("material", "acrylic"),
                ("role", "function"),
                ("single-action", "place"),
                ("tangible-type-relation", "same-type"),
                ("tangible-coupling", "decoupled"),
                ("sequence", "multi"),
            ),
            object_relation=ObjectRelation("started-on", "node"),
            multiplicity=DeviceMultiplicity(2, 1, 1),
        ),
        # drag a tangible across the subgraph, then flip it over
        "select-then-flip": Gesture(
            modality="tangible",
            assignment=(
                ("form", "thick-rigid"),
                ("material", "plastic"),
                ("role", "function"),
                ("single-action", "flip"),
                ("tangible-type-relation", "same-type"),
                ("tangible-coupling", "decoupled"),
                ("sequence", "multi"),
            ),
            object_relation=ObjectRelation("crossed", "subgraph"),
            multiplicity=DeviceMultiplicity(1, 1, 1),
        ),
    }


_DEMO_PAIRS = (
    ("select-node", "tap-node"),
    ("center-view", "shake-canvas"),
    ("apply-layout", "sketch-layout"),
    ("hide-labels", "cross-out-label"),
    ("duplicate-node", "stamp-node"),
    ("delete-subgraph", "select-then-flip"),
)


def demo_mapping_rows() -> list:
    """Sample mapping in file form: task reference plus fingerprint."""
    gestures = demo_gestures()
    return [
        {"task": task, "gesture_fingerprint": gestures[name].fingerprint}
        for task, name in _DEMO_PAIRS
    ]


def demo_mapping(vocab: Vocabulary | None = None) -> Mapping:
    """Sample mapping resolved to indices in the demo vocabulary."""
    if vocab is None:
        vocab = demo_vocabulary()
    gestures = demo_gestures()
    return Mapping(
        tuple(
            (task, vocab.index_by_fingerprint(gestures[name].fingerprint))
            for task, name in _DEMO_PAIRS
        )
    )


def demo_weights() -> WeightVector:
    return WeightVector.uniform(default_criteria())


def demo_familiarity() -> dict:
    """Familiarity scores for the well-established demo pairs; everything
    else falls back to the 0.5 default."""
    gestures = demo_gestures()
    return {
        ("select-node", gestures["tap-node"].fingerprint): 0.9,
        ("center-view", gestures["shake-canvas"].fingerprint): 0.7,
        ("hide-labels", gestures["cross-out-label"].fingerprint): 0.8,
    }


def demo_solver_config() -> SolverConfig:
    return SolverConfig(
        algorithm="local-search",
        seed=7,
        max_iterations=400,
        restarts=8,
    )


# ---------------------------------------------------------------------------
# compact search fixtures

def search_fixture_a():
    """Four tasks against six explicit touch gestures.

    Small enough for the exhaustive solver; exercises frequencies, a
    mutating task, a gesture without an undo twin, and mixed scopes.
    """
    catalog = TaskCatalog(
        (
            _task("exploration", "select-node", "Select node", "select",
                  "mostly", "stepped", ("node",), False, 3.0),
            _task("exploration", "deselect-node", "Deselect node", "select",
                  "always", "stepped", ("node",), False, 2.0),
            _task("exploration", "pan-view", "Pan view", "explore",
                  "mostly", "continuous", ("view",), False, 2.5),
            _task("editing", "delete-node", "Delete node", "delete",
                  "always", "stepped", ("node",), True, 1.0),
        )
    )
    p1 = DeviceMultiplicity(1, 1, 1)
    p2 = DeviceMultiplicity(2, 1, 1)
    on_node = ObjectRelation("started-on", "node")
    free = ObjectRelation("none", None)

    def movement(continuity, linearity, relation, obj, mult):
        return Gesture(
            modality="touch",
            assignment=(
                ("continuity", continuity),
                ("linearity", linearity),
                ("movement-relation", relation),
            ),
            object_relation=obj,
            multiplicity=mult,
        )

    # divergent has no convergent twin here, so one gesture is not undoable
    vocabulary = Vocabulary(
        (
            movement("discrete", "straight", "parallel", on_node, p1),
            movement("discrete", "straight", "parallel", free, p1),
            movement("continuous", "straight", "parallel", on_node, p1),
            movement("continuous", "straight", "divergent", free, p2),
            movement("continuous", "direction-changes", "parallel", on_node, p1),
            movement("continuous", "direction-changes", "parallel", free, p2),
        )
    )
    return catalog, vocabulary


def search_fixture_b():
    """Five tasks against eight enumerated gestures covering all three
    interaction mode classes."""
    catalog = TaskCatalog(
        (
            _task("exploration", "select-edge", "Select edge", "select",
                  "mostly", "stepped", ("edge",), False, 2.0),
            _task("exploration", "deselect-edge", "Deselect edge", "select",
                  "always", "stepped", ("edge",), False, 1.5),
            _task("exploration", "pan-view", "Pan view", "explore",
                  "mostly", "continuous", ("view",), False, 2.5),
            _task("editing", "insert-edge", "Insert edge", "insert",
                  "always", "composite", ("edge",), True, 1.0),
            _task("editing", "delete-edge", "Delete edge", "delete",
                  "always", "stepped", ("edge",), True, 1.0),
        )
    )
    document = SpecDocument(
        spec=VocabularySpec(
            (
                Dimension("continuity", ("discrete", "continuous"), ("touch",)),
                Dimension("sequence", ("single", "multi"), ("touch",)),
            ),
            (),
        ),
        object_relations=(
            ObjectRelation("none", None),
            ObjectRelation("crossed", "edge"),
        ),
        multiplicities=(DeviceMultiplicity(1, 1, 1),),
    )
    return catalog, document.enumerate()


# ---------------------------------------------------------------------------
# file output

FIXTURE_FILES = (
    "demo-catalog.json",
    "demo-spec.json",
    "demo-mapping.json",
    "demo-weights.json",
    "demo-familiarity.json",
    "demo-config.json",
)


def write_fixture_files(directory) -> list:
    """Write the demo catalog, spec, mapping, weights, familiarity table,
    and a ready-to-run config into ``directory``; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [directory / name for name in FIXTURE_FILES]
    save_catalog(demo_catalog(), paths[0])
    save_spec(demo_document(), paths[1])
    write_json(demo_mapping_rows(), paths[2])
    save_weights(demo_weights(), paths[3])
    save_familiarity(demo_familiarity(), paths[4])
    config = {
        "catalog": "demo-catalog.json",
        "spec": "demo-spec.json",
        "weights": "demo-weights.json",
        "familiarity": "demo-familiarity.json",
        "activity": None,
        "criteria": [c.label for c in default_criteria()],
        "solver": demo_solver_config().to_dict(),
        "format": "table",
    }
    write_json(config, paths[5])
    return paths
