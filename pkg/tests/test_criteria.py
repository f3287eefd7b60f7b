"""Criterion scores, weights, and the aggregate quality of mappings."""

import io
import json

import numpy as np
import pytest

from gestmap.catalog import Task, TaskCatalog, TaskCategory, InteractionModeTag
from gestmap.criteria import (
    Criterion,
    CriterionContext,
    QualityReport,
    WeightVector,
    default_criteria,
    load_familiarity,
    load_weights,
    overall_quality,
    resolve_mapping,
    save_familiarity,
    save_weights,
    score_criterion,
    separable_term_matrix,
)
from gestmap.errors import (
    EmptyCriteriaError,
    MissingContextError,
    ParseError,
    WeightError,
)
from gestmap.fixtures import (
    demo_catalog,
    demo_familiarity,
    demo_mapping,
    demo_vocabulary,
    demo_weights,
    search_fixture_a,
)
from gestmap.vocabulary import DeviceMultiplicity, Gesture, ObjectRelation, Vocabulary

import oracles

CANONICAL = (
    "predictability",
    "consistency",
    "familiarity",
    "generalizability",
    "viscosity",
    "recoverability",
    "directness",
    "continuity",
)

SEPARABLE = {"familiarity", "viscosity", "recoverability", "directness", "continuity"}

DEMO_GOLDEN = {
    "predictability": 0.14285714285714285,
    "consistency": 0.5380952380952381,
    "familiarity": 0.65,
    "generalizability": 0.33333333333333337,
    "viscosity": 0.7733333333333333,
    "recoverability": 1.0,
    "directness": 1.0,
    "continuity": 0.16666666666666666,
}
DEMO_AGGREGATE = 0.5755357142857144


def _demo_ctx():
    return CriterionContext(demo_catalog(), demo_vocabulary(), demo_familiarity())


def _constant_criterion(name, value):
    return Criterion.custom(name, lambda mapping, ctx, v=value: v)


def test_default_criteria_order_and_separability():
    criteria = default_criteria()
    assert tuple(c.label for c in criteria) == CANONICAL
    for c in criteria:
        assert c.separable == (c.label in SEPARABLE)


def test_criterion_validation():
    with pytest.raises(ValueError):
        Criterion(kind="legibility")
    with pytest.raises(ValueError):
        Criterion(kind="custom")  # custom needs a name
    with pytest.raises(ValueError):
        Criterion(kind="viscosity", fn=lambda *a: 1.0)
    with pytest.raises(ValueError):
        Criterion.standard("custom")
    c = Criterion.custom("effortless", lambda t, g, ctx: 1.0, separable=True)
    assert c.separable and c.label == "effortless"


def test_weight_vector_strict_domain():
    criteria = default_criteria()
    w = WeightVector.uniform(criteria)
    assert w.alphas_for(criteria) == [1.0] * 8
    missing = WeightVector({c.label: 1.0 for c in criteria[:-1]})
    with pytest.raises(WeightError):
        missing.alphas_for(criteria)
    extra = WeightVector(dict(w.weights, legibility=0.5))
    with pytest.raises(WeightError):
        extra.alphas_for(criteria)
    with pytest.raises(ValueError):
        WeightVector({"predictability": 1.5})
    with pytest.raises(ValueError):
        WeightVector({"predictability": -0.1})
    with pytest.raises(ValueError):
        WeightVector({"predictability": True})


def test_demo_report_golden():
    report = overall_quality(demo_mapping(), demo_weights(), _demo_ctx())
    assert report.aggregate == pytest.approx(DEMO_AGGREGATE, abs=1e-12)
    assert report.n == 8
    for label, expected in DEMO_GOLDEN.items():
        assert report.score_of(label) == pytest.approx(expected, abs=1e-12), label
    assert report.normalization == "count"
    with pytest.raises(KeyError):
        report.score_of("legibility")


def test_demo_report_matches_oracle():
    ctx = _demo_ctx()
    mapping = demo_mapping()
    for criterion in default_criteria():
        got = score_criterion(mapping, criterion, ctx)
        pairs = list(mapping.items())
        expected = oracles.criterion_score(
            criterion.label,
            [(ctx.catalog.get(r), ctx.vocabulary[i]) for r, i in pairs],
            ctx.vocabulary,
            ctx.familiarity_table,
        )
        assert got == pytest.approx(expected, abs=1e-12), criterion.label


def test_random_mappings_match_oracle():
    catalog, vocabulary = search_fixture_a()
    ctx = CriterionContext(catalog, vocabulary)
    weights = WeightVector.uniform(default_criteria())
    refs = [catalog.key_for(t) for t in catalog]
    rng = np.random.default_rng(20240817)
    for _ in range(25):
        perm = rng.permutation(len(vocabulary))[: len(catalog)]
        mapping = dict(zip(refs, (int(i) for i in perm)))
        report = overall_quality(mapping, weights, ctx)
        expected = oracles.overall(
            list(mapping.items()), catalog, vocabulary, dict(weights.weights)
        )
        assert report.aggregate == pytest.approx(expected, abs=1e-12)


def test_aggregate_is_weighted_mean_over_count():
    ctx = _demo_ctx()
    mapping = demo_mapping()
    # two constant criteria at 0.5 and 1.0 with unit weights average to 0.75
    active = (_constant_criterion("half", 0.5), _constant_criterion("full", 1.0))
    w = WeightVector({"half": 1.0, "full": 1.0})
    report = overall_quality(mapping, w, ctx, active=active)
    assert report.aggregate == pytest.approx(0.75, abs=1e-15)
    # all scores and weights at one aggregate to exactly one
    ones = tuple(_constant_criterion(f"c{i}", 1.0) for i in range(5))
    w1 = WeightVector({c.label: 1.0 for c in ones})
    assert overall_quality(mapping, w1, ctx, active=ones).aggregate == 1.0
    # zero weights zero the aggregate under count normalization too
    w0 = WeightVector({c.label: 0.0 for c in ones})
    assert overall_quality(mapping, w0, ctx, active=ones).aggregate == 0.0


def test_zero_weight_criterion_does_not_affect_aggregate():
    ctx = _demo_ctx()
    mapping = demo_mapping()
    active = default_criteria()
    base = {c.label: 1.0 for c in active}
    with_zero = overall_quality(
        mapping, WeightVector(dict(base, consistency=0.0)), ctx, active=active
    )
    without = overall_quality(
        mapping, WeightVector(base), ctx, active=active
    )
    alpha_gap = without.score_of("consistency") / len(active)
    assert with_zero.aggregate == pytest.approx(without.aggregate - alpha_gap, abs=1e-12)


def test_weight_sum_normalization_switch():
    ctx = _demo_ctx()
    mapping = demo_mapping()
    active = (_constant_criterion("a", 1.0), _constant_criterion("b", 1.0))
    w = WeightVector({"a": 0.5, "b": 1.0})
    by_count = overall_quality(mapping, w, ctx, active=active)
    assert by_count.aggregate == pytest.approx(0.75)
    by_sum = overall_quality(mapping, w, ctx, active=active, normalize_by_weight_sum=True)
    assert by_sum.aggregate == pytest.approx(1.0)
    assert by_sum.normalization == "weight-sum"
    # an all-zero weight vector scores zero instead of dividing by zero
    w0 = WeightVector({"a": 0.0, "b": 0.0})
    zero = overall_quality(mapping, w0, ctx, active=active, normalize_by_weight_sum=True)
    assert zero.aggregate == 0.0


def test_empty_and_duplicate_criteria_rejected():
    ctx = _demo_ctx()
    with pytest.raises(EmptyCriteriaError):
        overall_quality(demo_mapping(), WeightVector({}), ctx, active=())
    twice = (Criterion.standard("viscosity"), Criterion.standard("viscosity"))
    with pytest.raises(ValueError):
        overall_quality(
            demo_mapping(), WeightVector({"viscosity": 1.0}), ctx, active=twice
        )


def test_term_matrix_agrees_with_direct_scores():
    catalog, vocabulary = search_fixture_a()
    ctx = CriterionContext(catalog, vocabulary, {})
    refs = [catalog.key_for(t) for t in catalog]
    rng = np.random.default_rng(7)
    separable = [c for c in default_criteria() if c.separable]
    for _ in range(10):
        perm = rng.permutation(len(vocabulary))[: len(catalog)]
        mapping = dict(zip(refs, (int(i) for i in perm)))
        for criterion in separable:
            shape, payload = separable_term_matrix(criterion, ctx)
            assert shape == "matrix"
            mean = float(np.mean([payload[i, j] for i, j in enumerate(perm)]))
            direct = score_criterion(mapping, criterion, ctx)
            assert mean == pytest.approx(direct, abs=1e-12), criterion.label


def test_term_matrix_rejects_non_separable():
    ctx = _demo_ctx()
    with pytest.raises(ValueError):
        separable_term_matrix(Criterion.standard("consistency"), ctx)


def test_degenerate_criteria_collapse_to_one():
    # no mutating task: recoverability is constant 1; no object-scoped
    # task: directness is constant 1
    tasks = TaskCatalog(
        (
            Task(
                id="pan",
                name="Pan",
                category=TaskCategory("exploration", "explore"),
                mode=InteractionModeTag("always", "continuous"),
                object_scope=frozenset({"view"}),
                mutating=False,
            ),
        )
    )
    gestures = Vocabulary(
        (
            Gesture(
                "touch",
                {"continuity": "continuous"},
                ObjectRelation("none", None),
                DeviceMultiplicity(1, 1, 1),
            ),
        )
    )
    ctx = CriterionContext(tasks, gestures)
    mapping = {"pan": 0}
    assert score_criterion(mapping, Criterion.standard("recoverability"), ctx) == 1.0
    assert score_criterion(mapping, Criterion.standard("directness"), ctx) == 1.0
    shape, value = separable_term_matrix(Criterion.standard("recoverability"), ctx)
    assert (shape, value) == ("constant", 1.0)


def test_small_mappings_score_trivially_high():
    # below the pair/triple thresholds the non-separable criteria return 1
    catalog, vocabulary = search_fixture_a()
    one = TaskCatalog(tuple(catalog)[:1])
    ctx = CriterionContext(one, vocabulary)
    mapping = {tuple(one)[0].id: 0}
    assert score_criterion(mapping, Criterion.standard("predictability"), ctx) == 1.0
    assert score_criterion(mapping, Criterion.standard("consistency"), ctx) == 1.0


def test_familiarity_key_precedence():
    catalog, vocabulary = search_fixture_a()
    g0 = vocabulary[0]
    table = {
        ("select-node", g0.fingerprint): 0.2,
        ("exploration:select-node", g0.fingerprint): 0.9,
    }
    ctx = CriterionContext(catalog, vocabulary, table)
    task = catalog.get("select-node")
    # the qualified entry wins over the bare id
    assert ctx.familiarity_score(task, g0) == 0.9
    assert ctx.familiarity_score(task, vocabulary[1]) == 0.5


def test_resolve_mapping_rejects_broken_mappings():
    catalog, vocabulary = search_fixture_a()
    ctx = CriterionContext(catalog, vocabulary)
    refs = [catalog.key_for(t) for t in catalog]
    good = dict(zip(refs, range(len(refs))))
    assert len(resolve_mapping(good, ctx)) == len(refs)
    with pytest.raises(ValueError):
        resolve_mapping(dict(good, **{refs[0]: 1}), ctx)  # gesture 1 reused
    partial = dict(good)
    del partial[refs[0]]
    with pytest.raises(ValueError):
        resolve_mapping(partial, ctx)
    with pytest.raises(ValueError):
        resolve_mapping(dict(good, **{refs[0]: 99}), ctx)
    with pytest.raises(ValueError):
        resolve_mapping(dict(good, **{refs[0]: "zero"}), ctx)


def test_custom_criteria():
    catalog, vocabulary = search_fixture_a()
    ctx = CriterionContext(catalog, vocabulary)
    refs = [catalog.key_for(t) for t in catalog]
    mapping = dict(zip(refs, range(len(refs))))

    effort_free = Criterion.custom(
        "effort-free",
        lambda task, gesture, c: 1.0 - (gesture.multiplicity.points - 1) * 0.5,
        separable=True,
    )
    score = score_criterion(mapping, effort_free, ctx)
    points = [vocabulary[i].multiplicity.points for i in mapping.values()]
    assert score == pytest.approx(
        sum(1.0 - (p - 1) * 0.5 for p in points) / len(points)
    )

    whole = Criterion.custom("flat", lambda m, c: 0.25)
    assert score_criterion(mapping, whole, ctx) == 0.25

    broken = Criterion(kind="custom", name="no-fn")
    with pytest.raises(MissingContextError):
        score_criterion(mapping, broken, ctx)


def test_report_serialization():
    report = overall_quality(demo_mapping(), demo_weights(), _demo_ctx())
    data = report.to_dict()
    assert data["aggregate"] == report.aggregate
    assert data["n"] == 8
    assert set(data["per_criterion"]) == set(CANONICAL)
    assert data["weights"]["viscosity"] == 1.0
    rebuilt = QualityReport(
        aggregate=data["aggregate"],
        scores=tuple(sorted(data["per_criterion"].items())),
        weights=tuple(sorted(data["weights"].items())),
        normalization=data["normalization"],
    )
    assert rebuilt.score_of("familiarity") == report.score_of("familiarity")


def test_weights_round_trip_and_errors():
    w = WeightVector({"viscosity": 0.25, "directness": 1.0})
    buf = io.StringIO()
    save_weights(w, buf)
    buf.seek(0)
    assert load_weights(buf).weights == w.weights
    with pytest.raises(ParseError):
        load_weights(io.StringIO(json.dumps({"weights": {"viscosity": 2.0}})))
    with pytest.raises(ParseError):
        load_weights(io.StringIO(json.dumps({"weights": {"viscosity": "high"}})))
    with pytest.raises(ParseError):
        load_weights(io.StringIO(json.dumps({})))


def test_familiarity_round_trip_and_errors():
    table = {("select-node", "fp-a"): 0.9, ("pan-view", "fp-b"): 0.4}
    buf = io.StringIO()
    save_familiarity(table, buf)
    buf.seek(0)
    assert load_familiarity(buf) == table
    rows = [
        {"task": "a", "gesture_fingerprint": "f", "score": 0.5},
        {"task": "a", "gesture_fingerprint": "f", "score": 0.6},
    ]
    with pytest.raises(ParseError) as err:
        load_familiarity(io.StringIO(json.dumps(rows)))
    assert "duplicate" in str(err.value)
    with pytest.raises(ParseError):
        load_familiarity(
            io.StringIO(json.dumps([{"task": "a", "gesture_fingerprint": "f", "score": 1.5}]))
        )
    with pytest.raises(ParseError):
        load_familiarity(io.StringIO(json.dumps({"not": "a list"})))
