import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexsteer.analysis import (
    MONOGAMY_TYPES,
    TABLE2,
    Axis,
    CollectiveSpec,
    MonogamyInstance,
    SweepSpec,
    all_pentapartite_collective_specs,
    collective_check,
    collective_region_scan,
    find_threshold,
    monogamy_eval,
    monogamy_region_scan,
    pass_intervals,
    sweep,
)
from hexsteer.config import Tolerances
from hexsteer.errors import AmbiguousThresholdError, InvalidParameterError
from hexsteer.model import VACUUM, CouplingStrengths, covariance
from hexsteer.steering import Bipartition, steerability

from .conftest import strengths

FIG2B = CouplingStrengths(0.0, 1.2, 2.0, 0.3)
G1_AXIS = Axis("g1", 0.0, 4.0, 81)


def spec_for(*partitions, axis=G1_AXIS, fixed=FIG2B):
    return SweepSpec(axis, fixed, partitions)


def test_axis_parse_and_validation():
    axis = Axis.parse("g3:0:6:201")
    assert (axis.name, axis.start, axis.stop, axis.steps) == ("g3", 0.0, 6.0, 201)
    assert axis.values()[1] == pytest.approx(0.03)
    for text in ("g4:0:1:3", "g1:1:0:3", "g1:0:1:1", "g1:0:1", "g1:a:1:3", "g1:-1:1:3"):
        with pytest.raises(InvalidParameterError):
            Axis.parse(text)


def test_sweep_needs_partitions():
    with pytest.raises(InvalidParameterError):
        SweepSpec(G1_AXIS, FIG2B, ())


def test_sweep_first_point_vacuum():
    rows = sweep(spec_for(Bipartition.of(1, 2), fixed=VACUUM, axis=Axis("g1", 0, 1, 3)))
    assert rows[0].reports[0].a_to_b == 0.0 and rows[0].reports[0].b_to_a == 0.0


def test_sweep_1_3_vanishes():
    rows = sweep(spec_for(Bipartition.of(1, 3)))
    by_x = {round(r.value, 6): r.reports[0] for r in rows}
    assert by_x[1.0].a_to_b > 0
    assert all(r.reports[0].a_to_b == 0.0 for r in rows if r.value >= 1.65)


def test_sweep_in_time_grows_from_zero():
    rows = sweep(spec_for(Bipartition.of(1, 3), axis=Axis("t", 0.0, 0.05, 6),
                          fixed=CouplingStrengths(1.0, 1.2, 2.0)))
    values = [r.reports[0].a_to_b for r in rows]
    assert values[0] == 0.0
    assert all(b > a for a, b in zip(values, values[1:]))


def test_sweep_rows_are_ordered_and_deterministic():
    spec = spec_for(Bipartition.of(1, 2), Bipartition.of(5, 4))
    a, b = sweep(spec), sweep(spec)
    assert [r.value for r in a] == list(G1_AXIS.values())
    assert [[(x.a_to_b, x.b_to_a) for x in r.reports] for r in a] == \
        [[(x.a_to_b, x.b_to_a) for x in r.reports] for r in b]


# crossings of the model, located by bisection to 1e-4
@pytest.mark.parametrize("partition,predicate,quantity,expected", [
    ("1,3", "vanishes", "any", 1.5716308593750001),
    ("4,5", "symmetry_crossing", "any", 1.2),
    ("1,2", "appears", "a_to_b", 2.5821777343749996),
])
def test_thresholds(partition, predicate, quantity, expected):
    a, b = partition.split(",")
    p = Bipartition.of(a, b)
    x = find_threshold(spec_for(p), p, predicate, quantity)
    assert x == pytest.approx(expected, abs=2e-4)


@pytest.mark.parametrize("partition,predicate,quantity", [
    (("1", "3"), "vanishes", "any"),
    (("1", "2"), "appears", "a_to_b"),
    (("1", "2"), "appears", "b_to_a"),
    (("4", "5"), "vanishes", "a_to_b"),
])
def test_threshold_brackets_the_flip(partition, predicate, quantity):
    p = Bipartition.of(*partition)
    spec = spec_for(p)
    x = find_threshold(spec, p, predicate, quantity)
    pick = {"a_to_b": lambda r: r.a_to_b, "b_to_a": lambda r: r.b_to_a,
            "any": lambda r: max(r.a_to_b, r.b_to_a)}[quantity]

    def on(v):
        row = sweep(SweepSpec(Axis("g1", v, v + 1e-9, 2), spec.fixed, (p,)))[0]
        return pick(row.reports[0]) > 1e-9

    assert on(x - 1e-4) != on(x + 1e-4)


def test_threshold_direction_mismatch():
    p = Bipartition.of(1, 2)
    with pytest.raises(AmbiguousThresholdError) as info:
        find_threshold(spec_for(p), p, "vanishes", "a_to_b")
    assert len(info.value.brackets) == 1


def test_threshold_without_crossing():
    p = Bipartition.of(1, 2)
    with pytest.raises(AmbiguousThresholdError) as info:
        find_threshold(spec_for(p, axis=Axis("g1", 0.0, 1.0, 11)), p, "appears", "a_to_b")
    assert info.value.brackets == []


def test_threshold_unknown_predicate():
    p = Bipartition.of(1, 2)
    with pytest.raises(InvalidParameterError):
        find_threshold(spec_for(p), p, "grows")


def test_collective_spec_validation():
    for steered, steering in ((1, (1, 2)), (7, (1, 2)), (1, (2,)), (1, ())):
        with pytest.raises(InvalidParameterError):
            CollectiveSpec(steered, steering)
    spec = CollectiveSpec(1, (2, 4, 5, 6))
    assert spec.label == "2456->1"
    assert [p.label for p in spec.subsets()] == ["245->1", "246->1", "256->1", "456->1"]


def test_collective_vacuum_fails():
    assert not collective_check(covariance(VACUUM), CollectiveSpec(1, (2, 4, 5, 6))).passed


@pytest.mark.parametrize("g,steered,steering,value", [
    ((1.0, 3.2, 4.5), 1, (2, 4, 5, 6), 0.4043173892678781),
    ((4.0, 2.0, 2.7), 2, (3, 4, 5, 6), 0.18273609903179142),
    ((1.5, 4.0, 2.9), 4, (2, 3, 5, 6), 0.30508029463149994),
])
def test_collective_examples(g, steered, steering, value):
    r = collective_check(covariance(CouplingStrengths(*g, 0.3)), CollectiveSpec(steered, steering))
    assert r.passed
    assert r.value == pytest.approx(value, abs=1e-10)
    assert len(r.witnesses) == 4 and all(w == 0.0 for w in r.witnesses.values())


@settings(max_examples=40, deadline=None)
@given(strengths(max_g=6.0, max_t=0.3), st.sampled_from([s for pair in all_pentapartite_collective_specs()
                                                         for s in pair]))
def test_collective_never_passes_with_a_steering_witness(c, spec):
    tol = Tolerances()
    r = collective_check(covariance(c), spec, tol)
    if any(w > tol.eps_region for w in r.witnesses.values()):
        assert not r.passed


@settings(max_examples=20, deadline=None)
@given(strengths(max_g=6.0, max_t=0.3))
def test_mirror_collective_specs_agree(c):
    sigma = covariance(c)
    for spec, mirror in all_pentapartite_collective_specs():
        a, b = collective_check(sigma, spec), collective_check(sigma, mirror)
        assert a.passed == b.passed
        assert a.value == pytest.approx(b.value, abs=1e-10)


def test_collective_line_scan_matches_pointwise():
    spec = CollectiveSpec(2, (3, 4, 5, 6))
    fixed = CouplingStrengths(4.0, 2.0, 0.0)
    axis = Axis("g3", 2.0, 3.4, 15)
    grid = collective_region_scan(spec, fixed, axis)
    for x, v, ok in zip(axis.values(), grid.values, grid.passed):
        r = collective_check(covariance(fixed.with_value("g3", x)), spec)
        assert ok == r.passed
        assert v == pytest.approx(r.value if r.passed else 0.0, abs=1e-10)


def test_collective_region_vacuum_is_empty():
    grid = collective_region_scan(CollectiveSpec(1, (2, 4, 5, 6)), VACUUM,
                                  Axis("g1", 0, 1, 5), Axis("g2", 0, 1, 4))
    assert grid.values.shape == (4, 5)
    assert not grid.passed.any()


def test_region_scan_is_deterministic_and_cellwise():
    spec = CollectiveSpec(4, (2, 3, 5, 6))
    fixed = CouplingStrengths(1.5, 4.0, 0.0)
    ax, ay = Axis("g3", 0, 6, 31), Axis("g2", 0, 6, 21)
    a = collective_region_scan(spec, fixed, ax, ay)
    b = collective_region_scan(spec, fixed, ax, ay)
    np.testing.assert_array_equal(a.values, b.values)
    row = collective_region_scan(spec, fixed.with_value("g2", ay.values()[7]), ax)
    np.testing.assert_allclose(row.values, a.values[7], atol=1e-12)


def test_region_scan_rejects_duplicate_axes():
    with pytest.raises(InvalidParameterError):
        collective_region_scan(CollectiveSpec(1, (2, 4, 5, 6)), VACUUM, Axis("g1", 0, 1, 3), Axis("g1", 0, 1, 3))


def test_pass_intervals():
    xs = np.arange(8.0)
    passed = np.array([0, 1, 1, 0, 0, 1, 1, 1], dtype=bool)
    assert pass_intervals(xs, passed) == [(1.0, 2.0), (5.0, 7.0)]
    assert pass_intervals(xs, np.zeros(8, dtype=bool)) == []


def test_monogamy_instance_validation():
    with pytest.raises(InvalidParameterError):
        MonogamyInstance((1,), ((2,),))
    with pytest.raises(InvalidParameterError):
        MonogamyInstance((1,), ((1,), (2,)))
    assert TABLE2["IVa"][0].label == "234|1/5/6"


@pytest.mark.parametrize("type_tag", MONOGAMY_TYPES)
def test_monogamy_vacuum_satisfied(type_tag):
    sigma = covariance(VACUUM)
    for inst in TABLE2[type_tag]:
        r = monogamy_eval(sigma, type_tag, inst)
        assert r.satisfied and r.residual == 0.0


def test_monogamy_type_iiia_onto_5(fig3a):
    r = monogamy_eval(fig3a, "IIIa", TABLE2["IIIa"][0])
    assert r.instance.anchor == (5,)
    assert [k for k, _ in r.lhs] == ["234->5"]
    assert [k for k, _ in r.rhs] == ["2->5", "3->5", "4->5"]
    assert r.residual == pytest.approx(r.lhs[0][1] - sum(v for _, v in r.rhs), abs=1e-15)
    assert r.residual >= 0


def test_monogamy_type_i_is_exclusive(fig3a):
    r = monogamy_eval(fig3a, "I", TABLE2["I"][0])
    positive = [k for k, v in r.lhs if v > 1e-9]
    assert positive == ["3->1"]
    assert r.satisfied


def test_monogamy_type_i_flags_two_steering_parties():
    # custom instance where two parties steer the anchor
    sigma = covariance(CouplingStrengths(1.0, 1.2, 2.0))
    inst = MonogamyInstance((1,), ((2,), (3,), (4,)))
    values = {p: steerability(sigma, Bipartition.of(p, 1)) for p in (2, 3, 4)}
    r = monogamy_eval(sigma, "I", inst)
    assert r.satisfied == (sum(v > 1e-9 for v in values.values()) <= 1)


@settings(max_examples=30, deadline=None)
@given(strengths(max_g=4.0, max_t=0.3))
def test_type_iii_residuals_non_negative(c):
    sigma = covariance(c)
    for t in ("IIIa", "IIIb"):
        for inst in TABLE2[t]:
            assert monogamy_eval(sigma, t, inst).residual >= -1e-9


def test_monogamy_region_scan_matches_pointwise():
    inst = TABLE2["IVa"][0]
    fixed = CouplingStrengths(1.2, 0.0, 0.0)
    ax, ay = Axis("g2", 0, 4, 5), Axis("g3", 0, 4, 4)
    grid = monogamy_region_scan("IVa", inst, fixed, ax, ay)
    for j, y in enumerate(ay.values()):
        for i, x in enumerate(ax.values()):
            r = monogamy_eval(covariance(CouplingStrengths(1.2, x, y)), "IVa", inst)
            assert grid.values[j, i] == pytest.approx(r.residual, abs=1e-10)


def test_monogamy_region_scan_vacuum_is_zero():
    grid = monogamy_region_scan("IVb", TABLE2["IVb"][0], VACUUM, Axis("t", 0, 1, 3))
    assert not grid.values.any()


def test_monogamy_region_scan_only_for_type_iv():
    with pytest.raises(InvalidParameterError):
        monogamy_region_scan("IIIa", TABLE2["IIIa"][0], VACUUM, Axis("g1", 0, 1, 3))
