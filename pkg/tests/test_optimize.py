"""Solvers: exhaustive, assignment, hill climbing, annealing; verification."""

import io
import json
import math

import numpy as np
import pytest

from gestmap.catalog import TaskCatalog, builtin_catalog
from gestmap.criteria import (
    Criterion,
    CriterionContext,
    WeightVector,
    default_criteria,
    overall_quality,
)
from gestmap.errors import (
    GuardExceededError,
    InfeasibleError,
    NonSeparableError,
    ParseError,
)
from gestmap.fixtures import (
    demo_catalog,
    demo_vocabulary,
    search_fixture_a,
    search_fixture_b,
)
from gestmap.optimize import (
    Mapping,
    SolverConfig,
    anneal,
    assignment_exact,
    brute_force_optimal,
    compile_instance,
    load_mapping,
    local_search,
    mapping_from_perm,
    save_mapping,
    solve,
    verify_mapping,
)

import oracles

FIXTURE_A_BEST = 0.6541666666666667
FIXTURE_A_PERM = (0, 1, 3, 2)
FIXTURE_B_BEST = 0.7085937499999999
FIXTURE_B_PERM = (0, 1, 4, 7, 3)

SEPARABLE_ACTIVE = tuple(c for c in default_criteria() if c.separable)


def _uniform():
    return WeightVector.uniform(default_criteria())


def _kinds(violations):
    return sorted(v.kind for v in violations)


def test_mapping_container():
    m = Mapping((("select-node", 0), ("pan-view", np.intp(3))))
    assert m.pairs == (("select-node", 0), ("pan-view", 3))
    assert m.items() == m.pairs
    assert m.as_dict() == {"select-node": 0, "pan-view": 3}
    assert m.get("pan-view") == 3
    with pytest.raises(KeyError):
        m.get("zoom-view")
    assert len(m) == 2
    assert Mapping.from_dict({"a": 1}) == Mapping((("a", 1),))
    assert Mapping({"a": 1}) == Mapping((("a", 1),))


def test_verify_mapping_accepts_valid():
    catalog, vocabulary = search_fixture_a()
    mapping = mapping_from_perm(catalog, (0, 1, 2, 3))
    assert verify_mapping(mapping, catalog, vocabulary) == []


def test_verify_mapping_reports_each_violation():
    catalog, vocabulary = search_fixture_a()
    keys = catalog.task_keys()

    unknown = Mapping(tuple(zip(keys, range(4))) + (("warp-view", 4),))
    assert "unknown-task" in _kinds(verify_mapping(unknown, catalog, vocabulary))

    doubled = Mapping(tuple(zip(keys, range(4))) + ((keys[0], 5),))
    assert "duplicate-task" in _kinds(verify_mapping(doubled, catalog, vocabulary))

    out_of_range = Mapping(tuple(zip(keys, (0, 1, 2, 99))))
    assert "unknown-gesture" in _kinds(verify_mapping(out_of_range, catalog, vocabulary))

    raw = {keys[0]: "zero", keys[1]: 1, keys[2]: 2, keys[3]: 3}
    assert "bad-reference" in _kinds(verify_mapping(raw, catalog, vocabulary))

    partial = Mapping(tuple(zip(keys[:2], (0, 1))))
    kinds = _kinds(verify_mapping(partial, catalog, vocabulary))
    assert kinds.count("missing-task") == 2


def test_verify_mapping_collision_names_both_tasks():
    catalog, vocabulary = search_fixture_a()
    keys = catalog.task_keys()
    collided = Mapping(tuple(zip(keys, (2, 2, 0, 1))))
    violations = verify_mapping(collided, catalog, vocabulary)
    assert _kinds(violations) == ["collision"]
    detail = violations[0].detail
    assert detail == f"gesture 2 assigned to tasks '{keys[0]}', '{keys[1]}'"


def test_verify_mapping_flags_ambiguous_reference():
    catalog = builtin_catalog("both")
    vocabulary = search_fixture_a()[1]
    # pan-view exists in both activities, so the bare id is ambiguous
    violations = verify_mapping({"pan-view": 0}, catalog, vocabulary)
    assert "ambiguous-task" in _kinds(violations)


def test_solver_config_validation():
    config = SolverConfig()
    assert config.algorithm == "local-search"
    for bad in (
        {"algorithm": "gradient-descent"},
        {"max_iterations": 0},
        {"restarts": -1},
        {"initial_temperature": -0.5},
        {"cooling_rate": 0.0},
        {"cooling_rate": 1.0},
        {"brute_force_guard": 0},
    ):
        with pytest.raises(ValueError):
            SolverConfig(**bad)
    # zero temperature is a legal quench
    assert SolverConfig(initial_temperature=0.0).initial_temperature == 0.0


def test_solver_config_from_dict():
    config = SolverConfig.from_dict(
        {"algorithm": "anneal", "seed": 9, "initial_temperature": 1, "cooling_rate": 0.9}
    )
    assert config.algorithm == "anneal"
    assert config.seed == 9
    assert config.initial_temperature == 1
    with pytest.raises(ParseError):
        SolverConfig.from_dict({"algorithm": "anneal", "temperature": 1.0})
    with pytest.raises(ParseError):
        SolverConfig.from_dict({"seed": "nine"})
    with pytest.raises(ParseError):
        SolverConfig.from_dict({"seed": True})
    with pytest.raises(ParseError):
        SolverConfig.from_dict({"cooling_rate": 2.0})
    assert SolverConfig.from_dict(SolverConfig().to_dict()) == SolverConfig()


def test_brute_force_fixture_a_golden():
    catalog, vocabulary = search_fixture_a()
    result = brute_force_optimal(catalog, vocabulary, _uniform())
    assert result.optimality == "proven-optimal"
    assert result.report.aggregate == pytest.approx(FIXTURE_A_BEST, abs=1e-12)
    perm = tuple(index for _, index in result.mapping.items())
    assert perm == FIXTURE_A_PERM
    assert result.iterations_used == math.perm(6, 4) == 360
    assert result.trace[-1] == (360, pytest.approx(FIXTURE_A_BEST))


def test_brute_force_fixture_b_golden():
    catalog, vocabulary = search_fixture_b()
    result = brute_force_optimal(catalog, vocabulary, _uniform())
    assert result.report.aggregate == pytest.approx(FIXTURE_B_BEST, abs=1e-12)
    perm = tuple(index for _, index in result.mapping.items())
    assert perm == FIXTURE_B_PERM
    assert result.iterations_used == math.perm(8, 5) == 6720


def test_brute_force_matches_exhaustive_oracle():
    catalog, vocabulary = search_fixture_a()
    weights = _uniform()
    result = brute_force_optimal(catalog, vocabulary, weights)
    perm, score, count = oracles.best_mapping(catalog, vocabulary, dict(weights.weights))
    assert tuple(index for _, index in result.mapping.items()) == perm
    assert result.report.aggregate == pytest.approx(score, abs=1e-12)
    assert result.iterations_used == count


def test_brute_force_trace_is_strictly_improving():
    catalog, vocabulary = search_fixture_a()
    result = brute_force_optimal(catalog, vocabulary, _uniform())
    body = result.trace[:-1]
    values = [value for _, value in body]
    assert values == sorted(values)
    assert all(b > a for a, b in zip(values, values[1:]))
    iterations = [step for step, _ in body]
    assert all(b > a for a, b in zip(iterations, iterations[1:]))


def test_brute_force_single_task_is_argmax():
    catalog, vocabulary = search_fixture_a()
    single = TaskCatalog(tuple(catalog)[:1])
    weights = _uniform()
    result = brute_force_optimal(single, vocabulary, weights)
    scores = [
        overall_quality(
            mapping_from_perm(single, (g,)), weights, CriterionContext(single, vocabulary)
        ).aggregate
        for g in range(len(vocabulary))
    ]
    assert result.report.aggregate == pytest.approx(max(scores), abs=1e-12)
    chosen = result.mapping.items()[0][1]
    assert scores[chosen] == pytest.approx(max(scores), abs=1e-12)


def test_brute_force_empty_catalog():
    _, vocabulary = search_fixture_a()
    result = brute_force_optimal(TaskCatalog(()), vocabulary, _uniform())
    assert len(result.mapping) == 0
    assert result.optimality == "proven-optimal"
    assert result.iterations_used == 1


def test_brute_force_guard():
    catalog, vocabulary = search_fixture_b()
    with pytest.raises(GuardExceededError) as err:
        brute_force_optimal(catalog, vocabulary, _uniform(), guard=100)
    assert err.value.count == 6720
    assert err.value.guard == 100
    assert "6720" in str(err.value)


def test_infeasible_names_both_cardinalities():
    catalog, _ = search_fixture_a()
    tiny = search_fixture_a()[1]
    small = type(tiny)(tuple(tiny)[:2])
    with pytest.raises(InfeasibleError) as err:
        brute_force_optimal(catalog, small, _uniform())
    assert "4" in str(err.value) and "2" in str(err.value)
    with pytest.raises(InfeasibleError):
        local_search(catalog, small, _uniform())
    with pytest.raises(InfeasibleError):
        anneal(catalog, small, _uniform())
    with pytest.raises(InfeasibleError):
        assignment_exact(catalog, small, _uniform(), active=SEPARABLE_ACTIVE[:1])


def _separable_weights(rng=None):
    values = rng.random(len(SEPARABLE_ACTIVE)) if rng is not None else None
    return WeightVector(
        {
            c.label: (1.0 if values is None else round(float(values[i]), 3))
            for i, c in enumerate(SEPARABLE_ACTIVE)
        }
    )


def test_assignment_exact_matches_brute_force_on_fixture():
    catalog, vocabulary = search_fixture_a()
    weights = _separable_weights()
    exact = assignment_exact(catalog, vocabulary, weights, active=SEPARABLE_ACTIVE)
    brute = brute_force_optimal(catalog, vocabulary, weights, active=SEPARABLE_ACTIVE)
    assert exact.report.aggregate == pytest.approx(brute.report.aggregate, abs=1e-9)
    assert exact.mapping == brute.mapping
    assert exact.optimality == "proven-optimal"
    assert exact.iterations_used >= 1


def test_assignment_exact_random_instances():
    catalog, vocabulary = search_fixture_a()
    rng = np.random.default_rng(20240818)
    for _ in range(10):
        weights = _separable_weights(rng)
        exact = assignment_exact(catalog, vocabulary, weights, active=SEPARABLE_ACTIVE)
        brute = brute_force_optimal(catalog, vocabulary, weights, active=SEPARABLE_ACTIVE)
        assert exact.report.aggregate == pytest.approx(brute.report.aggregate, abs=1e-9)
        assert exact.mapping == brute.mapping


def test_assignment_exact_two_by_two_antidiagonal():
    catalog, vocabulary = search_fixture_a()
    two = TaskCatalog(tuple(catalog)[:2])
    pair = type(vocabulary)(tuple(vocabulary)[:2])
    keys = two.task_keys()
    table = {
        (keys[0], pair[0].fingerprint): 0.6,
        (keys[0], pair[1].fingerprint): 0.5,
        (keys[1], pair[0].fingerprint): 0.5,
        (keys[1], pair[1].fingerprint): 0.0,
    }
    ctx = CriterionContext(two, pair, table)
    active = (Criterion.standard("familiarity"),)
    weights = WeightVector({"familiarity": 1.0})
    result = assignment_exact(two, pair, weights, ctx, active)
    # greedy would take 0.6 + 0.0; the assignment solver takes 0.5 + 0.5
    assert [index for _, index in result.mapping.items()] == [1, 0]
    assert result.report.aggregate == pytest.approx(0.5)


def test_assignment_exact_rejects_non_separable():
    catalog, vocabulary = search_fixture_a()
    with pytest.raises(NonSeparableError) as err:
        assignment_exact(catalog, vocabulary, _uniform())
    assert "predictability" in str(err.value)


def test_local_search_reaches_fixture_optima():
    weights = _uniform()
    config = SolverConfig(algorithm="local-search", seed=3, max_iterations=500, restarts=19)
    for fixture, best in (
        (search_fixture_a, FIXTURE_A_BEST),
        (search_fixture_b, FIXTURE_B_BEST),
    ):
        catalog, vocabulary = fixture()
        result = local_search(catalog, vocabulary, weights, config=config)
        assert result.optimality == "heuristic"
        assert result.report.aggregate == pytest.approx(best, abs=1e-9)


def test_local_search_trace_improves_and_is_deterministic():
    catalog, vocabulary = search_fixture_a()
    config = SolverConfig(seed=11, max_iterations=200, restarts=4)
    first = local_search(catalog, vocabulary, _uniform(), config=config)
    second = local_search(catalog, vocabulary, _uniform(), config=config)
    assert first.mapping == second.mapping
    assert first.trace == second.trace
    assert first.iterations_used == second.iterations_used
    values = [value for _, value in first.trace]
    assert all(b > a for a, b in zip(values, values[1:]))
    # every accepted move strictly improved, so the last trace value is final
    assert values[-1] == pytest.approx(first.report.aggregate, abs=1e-12)


def test_local_search_accepts_only_improving_moves():
    catalog, vocabulary = search_fixture_a()
    weights = _uniform()
    ctx = CriterionContext(catalog, vocabulary)
    config = SolverConfig(seed=5, max_iterations=100, restarts=0)
    result = local_search(catalog, vocabulary, weights, ctx, config=config)
    # rescoring the returned mapping reproduces the reported aggregate
    check = overall_quality(result.mapping, weights, ctx)
    assert check.aggregate == pytest.approx(result.report.aggregate, abs=1e-12)


def test_anneal_deterministic_and_reaches_optimum():
    catalog, vocabulary = search_fixture_a()
    config = SolverConfig(
        algorithm="anneal",
        seed=1,
        max_iterations=3000,
        restarts=1,
        initial_temperature=0.15,
        cooling_rate=0.997,
    )
    first = anneal(catalog, vocabulary, _uniform(), config=config)
    second = anneal(catalog, vocabulary, _uniform(), config=config)
    assert first.mapping == second.mapping
    assert first.trace == second.trace
    assert first.report.aggregate == pytest.approx(FIXTURE_A_BEST, abs=1e-9)
    assert first.iterations_used == 6000


def test_anneal_zero_temperature_quench():
    catalog, vocabulary = search_fixture_a()
    config = SolverConfig(
        algorithm="anneal",
        seed=2,
        max_iterations=400,
        initial_temperature=0.0,
        cooling_rate=0.9,
    )
    result = anneal(catalog, vocabulary, _uniform(), config=config)
    values = [value for _, value in result.trace]
    # with no thermal acceptance the best trace still never decreases
    assert values == sorted(values)
    ctx = CriterionContext(catalog, vocabulary)
    check = overall_quality(result.mapping, _uniform(), ctx)
    assert check.aggregate == pytest.approx(result.report.aggregate, abs=1e-12)


def test_solve_dispatches_by_algorithm():
    catalog, vocabulary = search_fixture_a()
    weights = _uniform()
    brute = solve(catalog, vocabulary, weights, config=SolverConfig(algorithm="brute-force"))
    assert brute.optimality == "proven-optimal"
    assert brute.report.aggregate == pytest.approx(FIXTURE_A_BEST, abs=1e-12)
    heur = solve(
        catalog,
        vocabulary,
        weights,
        config=SolverConfig(algorithm="local-search", seed=3, restarts=19),
    )
    assert heur.optimality == "heuristic"
    ann = solve(
        catalog,
        vocabulary,
        weights,
        config=SolverConfig(algorithm="anneal", seed=1, max_iterations=500),
    )
    assert ann.optimality == "heuristic"
    exact = solve(
        catalog,
        vocabulary,
        WeightVector.uniform(SEPARABLE_ACTIVE),
        active=SEPARABLE_ACTIVE,
        config=SolverConfig(algorithm="assignment-exact"),
    )
    assert exact.optimality == "proven-optimal"
    default = solve(catalog, vocabulary, weights)
    assert default.optimality == "heuristic"


def test_compile_instance_shapes():
    catalog, vocabulary = search_fixture_a()
    ctx = CriterionContext(catalog, vocabulary)
    inst = compile_instance(ctx, _uniform())
    assert (inst.k, inst.l) == (4, 6)
    assert inst.sep.shape == (4, 6)
    assert inst.dist.shape == (6, 6)
    assert inst.alpha_pred > 0 and inst.alpha_cons > 0 and inst.alpha_gen > 0
    assert inst.extra is None
    # separable-only active set compiles no pairwise machinery
    sep_only = compile_instance(
        ctx, WeightVector.uniform(SEPARABLE_ACTIVE), SEPARABLE_ACTIVE
    )
    assert sep_only.alpha_pred == sep_only.alpha_cons == sep_only.alpha_gen == 0.0
    assert sep_only.dist is None and sep_only.pair_a is None


def test_mapping_round_trip_through_fingerprints():
    catalog, vocabulary = search_fixture_a()
    mapping = mapping_from_perm(catalog, FIXTURE_A_PERM)
    buf = io.StringIO()
    save_mapping(mapping, vocabulary, buf)
    buf.seek(0)
    assert load_mapping(buf, vocabulary) == mapping


def test_load_mapping_errors():
    _, vocabulary = search_fixture_a()
    with pytest.raises(ParseError):
        load_mapping(io.StringIO(json.dumps({"task": "a"})), vocabulary)
    rows = [{"task": "select-node", "gesture_fingerprint": "bogus"}]
    with pytest.raises(ParseError) as err:
        load_mapping(io.StringIO(json.dumps(rows)), vocabulary)
    assert "bogus" in str(err.value)
    with pytest.raises(ParseError):
        load_mapping(io.StringIO(json.dumps([{"task": "a"}])), vocabulary)


def test_demo_optimization_beats_hand_mapping():
    from gestmap.fixtures import demo_familiarity, demo_mapping, demo_solver_config

    catalog = demo_catalog()
    vocabulary = demo_vocabulary()
    ctx = CriterionContext(catalog, vocabulary, demo_familiarity())
    weights = _uniform()
    hand = overall_quality(demo_mapping(), weights, ctx).aggregate
    result = solve(catalog, vocabulary, weights, ctx, config=demo_solver_config())
    assert result.report.aggregate > hand
