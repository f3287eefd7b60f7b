"""Task catalogs for graph exploration and graph editing.

A task is a basic interaction a user performs on a node-link diagram, such
as selecting a node or deleting a subgraph.  Tasks are grouped by activity
(exploration or editing) and by category within the activity, and each task
carries an interaction-mode tag describing how it is typically operated:
stepped (discrete), continuous, or composite, together with how often that
mode applies (always, mostly, or varying across all modes).

The two built-in catalogs cover 23 exploration and 23 editing tasks.  A
handful of ids (``pan-view``, ``zoom-view``, ``select-node``, ...) appear in
both catalogs with different tags; task identity is therefore the pair
(activity, id), and lookups accept either a bare id (when unambiguous) or a
qualified ``activity:id`` reference.
"""

from dataclasses import dataclass, field, replace
from typing import Iterator

from ._jsonio import read_json, require, write_json
from .errors import (
    AmbiguousReferenceError,
    DuplicateIdError,
    ParseError,
    UnknownCategoryError,
)

ACTIVITIES = ("exploration", "editing", "both")

EXPLORATION_CATEGORIES = (
    "select",
    "explore",
    "reconfigure",
    "encode",
    "abstract-elaborate",
    "filter",
    "connect",
)

EDITING_CATEGORIES = (
    "create",
    "insert",
    "delete",
    "update",
    "navigate",
    "select",
    "miscellaneous",
)

OBJECT_KINDS = (
    "node",
    "edge",
    "subgraph",
    "label",
    "attribute",
    "group",
    "view",
    "document",
)

MODE_CLASSES = ("stepped", "continuous", "composite")

# how often the tagged mode applies; "varying-all" means the task is operated
# in all three modes depending on context, so no single mode is tagged
FREQUENCIES = ("always", "mostly", "varying-all")


@dataclass(frozen=True)
class TaskCategory:
    """A named task group within one activity."""

    activity: str
    name: str

    def __post_init__(self):
        if self.activity not in ("exploration", "editing"):
            raise ValueError(f"unknown activity '{self.activity}'")
        allowed = (
            EXPLORATION_CATEGORIES if self.activity == "exploration" else EDITING_CATEGORIES
        )
        if self.name not in allowed:
            raise ValueError(f"unknown {self.activity} category '{self.name}'")


@dataclass(frozen=True)
class InteractionModeTag:
    """Dominant interaction mode of a task and how often it applies."""

    frequency: str
    mode: str | None = None

    def __post_init__(self):
        if self.frequency not in FREQUENCIES:
            raise ValueError(f"unknown mode frequency '{self.frequency}'")
        if self.frequency == "varying-all":
            if self.mode is not None:
                raise ValueError("a varying-all tag carries no single mode")
        else:
            if self.mode not in MODE_CLASSES:
                raise ValueError(f"unknown interaction mode '{self.mode}'")


@dataclass(frozen=True)
class Task:
    """One basic interaction task.

    ``object_scope`` lists the kinds of objects the task acts on and
    ``mutating`` says whether it changes the underlying graph data rather
    than only the view.  ``frequency_weight`` is a relative usage weight
    used by frequency-sensitive criteria; it defaults to 1.
    """

    id: str
    name: str
    category: TaskCategory
    mode: InteractionModeTag
    object_scope: frozenset = field(default_factory=frozenset)
    mutating: bool = False
    frequency_weight: float = 1.0

    def __post_init__(self):
        if not self.id:
            raise ValueError("task id must be non-empty")
        scope = frozenset(self.object_scope)
        object.__setattr__(self, "object_scope", scope)
        if not scope:
            raise ValueError(f"task '{self.id}': object_scope must be non-empty")
        unknown = scope - set(OBJECT_KINDS)
        if unknown:
            raise ValueError(f"task '{self.id}': unknown object kinds {sorted(unknown)}")
        if not self.frequency_weight >= 0:
            raise ValueError(f"task '{self.id}': frequency_weight must be >= 0")

    @property
    def activity(self) -> str:
        return self.category.activity

    @property
    def qualified_id(self) -> str:
        return f"{self.activity}:{self.id}"


def task_similarity(a: Task, b: Task) -> float:
    """Agreement between two tasks over five features, in [0, 1].

    The features are activity, category name, object scope, mutating flag,
    and tagged interaction mode; each contributes 1/5.  Object scopes agree
    by their Jaccard overlap, the other features by equality.  Varying-all
    tags compare equal to each other and to no single mode.
    """
    parts = 0.0
    parts += 1.0 if a.activity == b.activity else 0.0
    parts += 1.0 if a.category.name == b.category.name else 0.0
    union = a.object_scope | b.object_scope
    if union:
        parts += len(a.object_scope & b.object_scope) / len(union)
    else:
        parts += 1.0
    parts += 1.0 if a.mutating == b.mutating else 0.0
    parts += 1.0 if a.mode.mode == b.mode.mode else 0.0
    return parts / 5.0


@dataclass(frozen=True)
class TaskFilter:
    """Declarative task predicate; unset fields match everything.

    ``object_scope`` matches tasks whose scope overlaps the given set.
    ``mode`` matches the tagged interaction mode (``None`` in a task tag,
    i.e. varying-all, only matches when the filter leaves mode unset).
    """

    activity: str | None = None
    category: str | None = None
    mode: str | None = None
    object_scope: frozenset | None = None

    def matches(self, task: Task) -> bool:
        if self.activity is not None and task.activity != self.activity:
            return False
        if self.category is not None and task.category.name != self.category:
            return False
        if self.mode is not None and task.mode.mode != self.mode:
            return False
        if self.object_scope is not None and not (task.object_scope & self.object_scope):
            return False
        return True


@dataclass(frozen=True)
class TaskCatalog:
    """An ordered, duplicate-free collection of tasks.

    Duplicate ids are rejected within one activity; the same id may appear
    once per activity (the built-in exploration and editing catalogs share
    several ids).
    """

    tasks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        seen = set()
        for task in self.tasks:
            key = (task.activity, task.id)
            if key in seen:
                raise DuplicateIdError(
                    f"duplicate task id '{task.id}' in activity '{task.activity}'"
                )
            seen.add(key)

    def __iter__(self) -> Iterator[Task]:
        return iter(self.tasks)

    def __len__(self) -> int:
        return len(self.tasks)

    def get(self, ref: str) -> Task:
        """Look up a task by bare id or qualified ``activity:id`` reference.

        A bare id that exists in more than one activity raises
        AmbiguousReferenceError; an unknown reference raises KeyError.
        """
        if ":" in ref:
            activity, _, bare = ref.partition(":")
            for task in self.tasks:
                if task.activity == activity and task.id == bare:
                    return task
            raise KeyError(f"no task '{ref}' in catalog")
        hits = [task for task in self.tasks if task.id == ref]
        if not hits:
            raise KeyError(f"no task '{ref}' in catalog")
        if len(hits) > 1:
            activities = ", ".join(sorted(t.qualified_id for t in hits))
            raise AmbiguousReferenceError(
                f"task id '{ref}' is ambiguous ({activities}); use an activity:id reference"
            )
        return hits[0]

    def key_for(self, task: Task) -> str:
        """Shortest unambiguous reference for ``task`` within this catalog."""
        if sum(1 for t in self.tasks if t.id == task.id) > 1:
            return task.qualified_id
        return task.id

    def task_keys(self) -> list:
        return [self.key_for(t) for t in self.tasks]


def filter_tasks(catalog: TaskCatalog, task_filter: TaskFilter) -> TaskCatalog:
    """Subset of ``catalog`` matching the filter, original order preserved."""
    return TaskCatalog(tuple(t for t in catalog if task_filter.matches(t)))


def with_frequency_weights(catalog: TaskCatalog, weights: dict) -> TaskCatalog:
    """Copy of ``catalog`` with frequency weights overridden by task reference."""
    resolved = {}
    for ref, value in weights.items():
        task = catalog.get(ref)
        resolved[(task.activity, task.id)] = float(value)
    tasks = tuple(
        replace(t, frequency_weight=resolved.get((t.activity, t.id), t.frequency_weight))
        for t in catalog
    )
    return TaskCatalog(tasks)


# ---------------------------------------------------------------------------
# built-in catalogs
#
# One row per task: (id, name, category, frequency, mode, scope, mutating).

_EXPLORATION_ROWS = (
    ("select-node", "Select node", "select", "mostly", "stepped", ("node",), False),
    ("deselect-node", "Deselect node", "select", "always", "stepped", ("node",), False),
    ("select-multiple-nodes", "Select multiple nodes", "select", "varying-all", None, ("node",), False),
    ("deselect-multiple-nodes", "Deselect multiple nodes", "select", "always", "stepped", ("node",), False),
    ("temporary-select-node", "Temporarily select node", "select", "varying-all", None, ("node",), False),
    ("temporary-select-edge", "Temporarily select edge", "select", "varying-all", None, ("edge",), False),
    ("pan-view", "Pan view", "explore", "mostly", "continuous", ("view",), False),
    ("center-view", "Center view", "explore", "always", "stepped", ("view",), False),
    ("rotate-view", "Rotate view", "explore", "mostly", "composite", ("view",), False),
    ("zoom-view", "Zoom view", "explore", "mostly", "continuous", ("view",), False),
    ("move-selected-nodes", "Move selected nodes", "reconfigure", "mostly", "composite", ("node",), False),
    ("adjust-graph-layout", "Adjust graph layout", "reconfigure", "always", "stepped", ("document",), False),
    ("change-node-size", "Change node size", "encode", "mostly", "stepped", ("node",), False),
    ("change-label-size", "Change label size", "encode", "mostly", "stepped", ("label",), False),
    ("change-node-edge-mapping", "Change node or edge mapping", "encode", "mostly", "stepped", ("node", "edge"), False),
    ("color-node-edge", "Color node or edge", "encode", "always", "stepped", ("node", "edge"), False),
    ("expand-node", "Expand node", "abstract-elaborate", "always", "stepped", ("node",), False),
    ("collapse-node", "Collapse node", "abstract-elaborate", "always", "stepped", ("node",), False),
    ("apply-node-edge-filter", "Apply node or edge filter", "filter", "varying-all", None, ("node", "edge"), False),
    ("show-labels", "Show labels", "connect", "always", "stepped", ("label",), False),
    ("hide-labels", "Hide labels", "connect", "always", "stepped", ("label",), False),
    ("show-node-edge-attributes", "Show node or edge attributes", "connect", "always", "stepped", ("attribute",), False),
    ("show-metrics-statistics", "Show metrics or statistics", "connect", "always", "stepped", ("document",), False),
)

_EDITING_ROWS = (
    ("create-empty-document", "Create empty document", "create", "always", "stepped", ("document",), True),
    ("insert-node-edge", "Insert node or edge", "insert", "mostly", "composite", ("node", "edge"), True),
    ("insert-copied-node-edge-subgraph", "Insert copied node, edge, or subgraph", "insert", "always", "stepped", ("node", "edge", "subgraph"), True),
    ("duplicate-node-edge-subgraph", "Duplicate node, edge, or subgraph", "insert", "always", "stepped", ("node", "edge", "subgraph"), True),
    ("add-node-edge-attribute-label", "Add node or edge attribute or label", "insert", "always", "stepped", ("attribute", "label"), True),
    ("add-group", "Add group", "insert", "always", "stepped", ("group",), True),
    ("delete-node-edge-subgraph", "Delete node, edge, or subgraph", "delete", "always", "stepped", ("node", "edge", "subgraph"), True),
    ("remove-group", "Remove group", "delete", "always", "stepped", ("group",), True),
    ("update-node-edge-attribute", "Update node or edge attribute", "update", "always", "stepped", ("attribute",), True),
    ("update-node-edge-label", "Update node or edge label", "update", "always", "stepped", ("label",), True),
    ("pan-view", "Pan view", "navigate", "always", "continuous", ("view",), False),
    ("zoom-view", "Zoom view", "navigate", "mostly", "stepped", ("view",), False),
    ("select-node", "Select node", "select", "mostly", "stepped", ("node",), False),
    ("deselect-node", "Deselect node", "select", "always", "stepped", ("node",), False),
    ("select-edge", "Select edge", "select", "mostly", "stepped", ("edge",), False),
    ("deselect-edge", "Deselect edge", "select", "always", "stepped", ("edge",), False),
    ("select-multiple-nodes", "Select multiple nodes", "select", "varying-all", None, ("node",), False),
    ("deselect-multiple-nodes", "Deselect multiple nodes", "select", "always", "stepped", ("node",), False),
    ("select-multiple-edges", "Select multiple edges", "select", "varying-all", None, ("edge",), False),
    ("deselect-multiple-edges", "Deselect multiple edges", "select", "always", "stepped", ("edge",), False),
    ("copy-node-edge-subgraph", "Copy node, edge, or subgraph", "miscellaneous", "always", "stepped", ("node", "edge", "subgraph"), False),
    ("cut-node-subgraph", "Cut node or subgraph", "miscellaneous", "always", "stepped", ("node", "subgraph"), True),
    ("change-edge-path", "Change edge path", "miscellaneous", "always", "composite", ("edge",), True),
)


def _build(activity: str, rows) -> tuple:
    tasks = []
    for task_id, name, category, frequency, mode, scope, mutating in rows:
        tasks.append(
            Task(
                id=task_id,
                name=name,
                category=TaskCategory(activity, category),
                mode=InteractionModeTag(frequency, mode),
                object_scope=frozenset(scope),
                mutating=mutating,
            )
        )
    return tuple(tasks)


def builtin_catalog(activity: str = "both") -> TaskCatalog:
    """Built-in task catalog for ``exploration``, ``editing``, or ``both``."""
    if activity not in ACTIVITIES:
        raise ValueError(f"unknown activity '{activity}' (expected one of {ACTIVITIES})")
    tasks = ()
    if activity in ("exploration", "both"):
        tasks += _build("exploration", _EXPLORATION_ROWS)
    if activity in ("editing", "both"):
        tasks += _build("editing", _EDITING_ROWS)
    return TaskCatalog(tasks)


# ---------------------------------------------------------------------------
# serialization

def _task_from_dict(data, locus: str) -> Task:
    task_id = require(data, "id", str, locus)
    name = require(data, "name", str, locus)
    activity = require(data, "activity", str, locus)
    category = require(data, "category", str, locus)
    mode_data = require(data, "mode", dict, locus)
    frequency = require(mode_data, "frequency", str, f"{locus}.mode")
    mode = mode_data.get("mode")
    if mode is not None and not isinstance(mode, str):
        raise ParseError("field 'mode' must be str or null", locus=f"{locus}.mode")
    scope = require(data, "object_scope", list, locus)
    mutating = require(data, "mutating", bool, locus)
    weight = data.get("frequency_weight", 1.0)
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        raise ParseError("field 'frequency_weight' must be a number", locus=locus)
    try:
        cat = TaskCategory(activity, category)
    except ValueError as exc:
        raise UnknownCategoryError(str(exc), locus=f"{locus}.category") from None
    try:
        return Task(
            id=task_id,
            name=name,
            category=cat,
            mode=InteractionModeTag(frequency, mode),
            object_scope=frozenset(scope),
            mutating=mutating,
            frequency_weight=float(weight),
        )
    except ValueError as exc:
        raise ParseError(str(exc), locus=locus) from None


def catalog_from_dict(data) -> TaskCatalog:
    rows = require(data, "tasks", list, "catalog")
    tasks = []
    for i, entry in enumerate(rows):
        tasks.append(_task_from_dict(entry, f"tasks[{i}]"))
    return TaskCatalog(tuple(tasks))


def catalog_to_dict(catalog: TaskCatalog) -> dict:
    rows = []
    for task in catalog:
        mode = {"frequency": task.mode.frequency}
        if task.mode.mode is not None:
            mode["mode"] = task.mode.mode
        row = {
            "id": task.id,
            "name": task.name,
            "activity": task.activity,
            "category": task.category.name,
            "mode": mode,
            "object_scope": sorted(task.object_scope),
            "mutating": task.mutating,
        }
        if task.frequency_weight != 1.0:
            row["frequency_weight"] = task.frequency_weight
        rows.append(row)
    return {"tasks": rows}


def load_catalog(source) -> TaskCatalog:
    """Read a task catalog from a JSON path or stream."""
    return catalog_from_dict(read_json(source))


def save_catalog(catalog: TaskCatalog, target) -> None:
    """Write ``catalog`` as deterministic JSON to a path or stream."""
    write_json(catalog_to_dict(catalog), target)
