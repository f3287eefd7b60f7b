"""Model interaction tasks, enumerate gesture vocabularies, and search
for high-quality injective task-to-gesture mappings.

The package splits into five parts: ``catalog`` (tasks and their
categories), ``vocabulary`` (degrees of freedom and gesture enumeration),
``criteria`` (the eight design criteria and the weighted quality q̂),
``optimize`` (exact and heuristic solvers), and ``cli`` (the command-line
front end).  ``fixtures`` ships a small demo data set.
"""

from .catalog import (
    InteractionModeTag,
    Task,
    TaskCatalog,
    TaskCategory,
    TaskFilter,
    builtin_catalog,
    filter_tasks,
    load_catalog,
    save_catalog,
    task_similarity,
)
from .criteria import (
    Criterion,
    CriterionContext,
    QualityReport,
    WeightVector,
    default_criteria,
    overall_quality,
    score_criterion,
)
from .errors import (
    AmbiguousReferenceError,
    DuplicateIdError,
    EmptyCriteriaError,
    GestmapError,
    GuardExceededError,
    InfeasibleError,
    MissingContextError,
    NonSeparableError,
    ParseError,
    UnknownCategoryError,
    WeightError,
)
from .optimize import (
    Mapping,
    MappingViolation,
    OptimizationResult,
    SolverConfig,
    anneal,
    assignment_exact,
    brute_force_optimal,
    load_mapping,
    local_search,
    save_mapping,
    solve,
    verify_mapping,
)
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
    builtin_document,
    builtin_spec,
    enumerate_vocabulary,
    gesture_distance,
    gesture_effort,
    gesture_inverse,
    load_spec,
    save_spec,
    validate_gesture,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousReferenceError",
    "Constraint",
    "ConstraintAtom",
    "Criterion",
    "CriterionContext",
    "DeviceMultiplicity",
    "Dimension",
    "DuplicateIdError",
    "EmptyCriteriaError",
    "GestmapError",
    "Gesture",
    "GuardExceededError",
    "InfeasibleError",
    "InteractionModeTag",
    "Mapping",
    "MappingViolation",
    "MissingContextError",
    "NonSeparableError",
    "ObjectRelation",
    "OptimizationResult",
    "ParseError",
    "QualityReport",
    "SolverConfig",
    "SpecDocument",
    "Task",
    "TaskCatalog",
    "TaskCategory",
    "TaskFilter",
    "UnknownCategoryError",
    "Vocabulary",
    "VocabularySpec",
    "WeightError",
    "WeightVector",
    "anneal",
    "assignment_exact",
    "brute_force_optimal",
    "builtin_catalog",
    "builtin_document",
    "builtin_spec",
    "default_criteria",
    "enumerate_vocabulary",
    "filter_tasks",
    "gesture_distance",
    "gesture_effort",
    "gesture_inverse",
    "load_catalog",
    "load_mapping",
    "load_spec",
    "local_search",
    "overall_quality",
    "save_catalog",
    "save_mapping",
    "save_spec",
    "score_criterion",
    "solve",
    "task_similarity",
    "validate_gesture",
    "verify_mapping",
]
