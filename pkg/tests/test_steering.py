import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexsteer.errors import InvalidParameterError, PhysicalityError
from hexsteer.model import (
    CONJUGATE_MODES,
    MODE_SYMMETRY,
    MODES,
    PROBE_MODES,
    VACUUM,
    CouplingStrengths,
    CovarianceMatrix,
    covariance,
    reorder,
)
from hexsteer.steering import (
    Bipartition,
    classify,
    group_partitions,
    parse_modes,
    reduced_cm,
    schur_complement,
    steerability,
    steerability_blocks,
    steering_matrix,
    steering_report,
    symplectic_eigenvalues,
)

from .conftest import block_inverse_steering, random_points, random_spd, strengths

SYMMETRY_PAIRS = [
    ("1", "2", "3", "5"),
    ("1", "4", "3", "6"),
    ("5", "4", "2", "6"),
    ("34", "5", "16", "2"),
    ("23", "6", "15", "4"),
    ("24", "1", "56", "3"),
    ("23", "1", "15", "3"),
    ("34", "1", "16", "3"),
    ("234", "1", "156", "3"),
    ("234", "5", "156", "2"),
    ("234", "6", "156", "4"),
]


def tmsv(r):
    return covariance(CouplingStrengths(1.0, 0.0, 0.0, r))


@pytest.mark.parametrize("text,expected", [("2,3,4", (2, 3, 4)), ("234", (2, 3, 4)), (5, (5,)), ([1, 6], (1, 6))])
def test_parse_modes(text, expected):
    assert parse_modes(text) == expected


@pytest.mark.parametrize("a,b", [("", "1"), ("1", "1"), ("12", "2"), ("7", "1"), ("11", "2"), ("0", "3")])
def test_bad_bipartitions(a, b):
    with pytest.raises(InvalidParameterError):
        Bipartition.of(a, b)


def test_bipartition_label_and_reverse():
    p = Bipartition.of("234", 1)
    assert p.label == "234->1"
    assert p.reversed() == Bipartition.of(1, "234")
    assert p.relabeled(MODE_SYMMETRY).label == "516->3"


def test_reduced_cm_trivial():
    eye = CovarianceMatrix(np.eye(12))
    np.testing.assert_array_equal(reduced_cm(eye, (1, 2)).sigma, np.eye(4))
    s = covariance(CouplingStrengths(1, 1, 1))
    np.testing.assert_array_equal(reduced_cm(s, MODES).sigma, s.sigma)


def test_reduced_cm_tmsv():
    r = 0.4
    np.testing.assert_allclose(reduced_cm(tmsv(r), [1]).sigma, math.cosh(2 * r) * np.eye(2), atol=1e-12)


def test_reduced_cm_keeps_requested_order(fig3a):
    sub = reduced_cm(fig3a, (4, 1))
    assert sub.modes == (4, 1)
    assert sub.sigma[0, 1] == fig3a.sigma[3, 0]


def test_reduced_cm_invalid_index(fig3a):
    with pytest.raises(InvalidParameterError):
        reduced_cm(fig3a, (1, 7))


def test_schur_uncorrelated_returns_b():
    s = CovarianceMatrix(np.diag([2.0, 3.0, 4.0, 5.0]), modes=(1, 2))
    np.testing.assert_array_equal(schur_complement(s, [1]).sigma, np.diag([3.0, 5.0]))


def test_schur_tmsv():
    r = 0.35
    out = schur_complement(reduced_cm(tmsv(r), (1, 2)), [1])
    np.testing.assert_allclose(out.sigma, np.eye(2) / math.cosh(2 * r), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_schur_matches_block_inverse(seed):
    rng = np.random.default_rng(seed)
    s = random_spd(rng, 8)
    cm = CovarianceMatrix(s, modes=(1, 2, 3, 4))
    out = schur_complement(cm, (1, 3))
    ib = cm.quadrature_indices([1, 3])
    oracle = np.linalg.inv(np.linalg.inv(s)[np.ix_(ib, ib)])
    np.testing.assert_allclose(out.sigma, oracle, atol=1e-9)


def test_schur_rejects_unphysical_block():
    s = np.eye(4)
    s[0, 0] = -1.0
    with pytest.raises(PhysicalityError):
        schur_complement(CovarianceMatrix(s, modes=(1, 2)), [1])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_symplectic_eigenvalues_vacuum(k):
    np.testing.assert_allclose(symplectic_eigenvalues(CovarianceMatrix(np.eye(2 * k), modes=tuple(range(1, k + 1)))),
                               np.ones(k))


def test_symplectic_eigenvalues_scalar():
    for c in (0.4, 1.0, 2.5):
        m = CovarianceMatrix(c * np.eye(2), modes=(1,))
        assert symplectic_eigenvalues(m, "structured")[0] == pytest.approx(c)
        assert symplectic_eigenvalues(m, "generic")[0] == pytest.approx(c)


def test_symplectic_eigenvalues_need_spd():
    with pytest.raises(PhysicalityError):
        symplectic_eigenvalues(CovarianceMatrix(-np.eye(2), modes=(1,)))


@settings(max_examples=40, deadline=None)
@given(strengths(), st.sampled_from([(1,), (2, 3), (1, 5, 6), (2, 3, 4, 5)]))
def test_structured_and_generic_eigenvalues_agree(c, modes):
    sub = reduced_cm(covariance(c), modes)
    structured = symplectic_eigenvalues(sub, "structured")
    generic = symplectic_eigenvalues(reorder(sub, "interleaved"), "generic")
    np.testing.assert_allclose(structured, generic, atol=1e-9 * max(1.0, structured.max()))


def test_tmsv_steering_value():
    s = tmsv(0.3)
    assert steerability(s, Bipartition.of(1, 2)) == pytest.approx(math.log(math.cosh(0.6)), abs=1e-12)
    assert steerability(s, Bipartition.of(2, 1)) == pytest.approx(0.17014, abs=1e-5)


def test_vacuum_steers_nothing():
    s = covariance(VACUUM)
    for p in group_partitions(2):
        assert steerability(s, p) == 0.0
    assert steering_report(s, Bipartition.of(1, 2)).direction == "none"


# reference values from the block-inverse / generic-eigenvalue route on scipy's expm
FROZEN = [
    ((1.0, 1.2, 2.0), "1", "3", 0.2030270004930137),
    ((1.0, 1.2, 2.0), "5", "4", 0.35662277341295223),
    ((1.0, 1.2, 2.0), "234", "1", 0.5140181220274904),
    ((1.0, 1.2, 2.0), "1", "234", 0.2139149436975174),
    ((1.0, 1.2, 2.0), "234", "156", 2.0876153162484727),
    ((3.5, 1.2, 2.0), "1", "2", 0.23423178413683002),
    ((3.5, 1.2, 2.0), "2", "1", 0.06379868510331399),
    ((3.5, 1.2, 2.0), "5", "4", 0.08202247121904899),
    ((3.5, 1.2, 2.0), "234", "156", 3.7762458396209686),
    ((1.0, 2.0, 1.2), "234", "1", 0.6248653229683825),
    ((1.0, 2.0, 1.2), "1", "234", 0.46179166917989206),
]


@pytest.mark.parametrize("g,a,b,expected", FROZEN)
def test_frozen_steering_values(g, a, b, expected):
    s = covariance(CouplingStrengths(*g, 0.3))
    assert steerability(s, Bipartition.of(a, b)) == pytest.approx(expected, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(strengths(), st.sampled_from(group_partitions(2) + group_partitions(3)))
def test_matches_block_inverse_route(c, p):
    s = covariance(c)
    assert steerability(s, p) == pytest.approx(block_inverse_steering(s, p.a, p.b), abs=1e-8)


def test_one_way_report():
    r = steering_report(covariance(CouplingStrengths(3, 1.2, 2)), Bipartition.of(1, 2))
    assert r.direction == "one_way_a_to_b"
    assert r.asymmetry > 0


def test_symmetric_two_way_report(fig3a):
    r = steering_report(fig3a, Bipartition.of(1, 3))
    assert r.direction == "two_way"
    assert abs(r.asymmetry) < 1e-9


def test_classify():
    assert classify(0.0, 0.0) == "none"
    assert classify(1e-10, 1e-10) == "none"
    assert classify(0.1, 0.0) == "one_way_a_to_b"
    assert classify(0.0, 0.1) == "one_way_b_to_a"
    assert classify(0.1, 0.2) == "two_way"


def test_fig3a_identity(fig3a):
    assert steerability(fig3a, Bipartition.of(1, 2)) == pytest.approx(
        steerability(fig3a, Bipartition.of(3, 5)), abs=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_symmetry_identities(seed):
    for c in random_points(5, seed):
        s = covariance(c)
        for a1, b1, a2, b2 in SYMMETRY_PAIRS:
            for p, q in ((Bipartition.of(a1, b1), Bipartition.of(a2, b2)),
                         (Bipartition.of(b1, a1), Bipartition.of(b2, a2))):
                assert steerability(s, p) == pytest.approx(steerability(s, q), abs=1e-10)


def test_symmetry_pairs_are_images_under_relabeling():
    for a1, b1, a2, b2 in SYMMETRY_PAIRS:
        image = Bipartition.of(a1, b1).relabeled(MODE_SYMMETRY)
        target = Bipartition.of(a2, b2)
        assert set(image.a) == set(target.a) and set(image.b) == set(target.b)


@settings(max_examples=40, deadline=None)
@given(strengths(), st.data())
def test_enlarging_steering_party_never_decreases(c, data):
    s = covariance(c)
    b = data.draw(st.sampled_from(MODES))
    rest = [m for m in MODES if m != b]
    a = data.draw(st.lists(st.sampled_from(rest), min_size=1, max_size=3, unique=True))
    k = data.draw(st.sampled_from([m for m in rest if m not in a]))
    small = steerability(s, Bipartition(tuple(a), (b,)))
    big = steerability(s, Bipartition(tuple(a) + (k,), (b,)))
    assert big >= small - 1e-9


def test_matrix_vacuum_is_zero():
    table = steering_matrix(covariance(VACUUM))
    assert table.values.shape == (6, 6)
    assert not table.values.any()


def test_matrix_only_between_probe_and_conjugate(fig3a):
    table = steering_matrix(fig3a)
    for i in MODES:
        for j in MODES:
            across = (i in PROBE_MODES) != (j in PROBE_MODES)
            if not across:
                assert table.get(i, j) == 0.0
    assert any(table.get(i, j) > 0 for i in PROBE_MODES for j in CONJUGATE_MODES)


@settings(max_examples=20, deadline=None)
@given(strengths())
def test_matrix_relabeling_invariance(c):
    table = steering_matrix(covariance(c))
    for i in MODES:
        for j in MODES:
            assert table.get(i, j) == pytest.approx(table.get(MODE_SYMMETRY[i], MODE_SYMMETRY[j]), abs=1e-10)


def test_group_table(fig3a):
    table = steering_matrix(fig3a, group_partitions(3))
    assert table.get("234", 1) == pytest.approx(0.5140181220274904, abs=1e-10)
    assert table.evaluated.sum() == 2 * 20 * 3
    assert not table.is_single_mode


def test_group_partitions_range():
    with pytest.raises(InvalidParameterError):
        group_partitions(6)
    assert len(group_partitions(1)) == 30


def test_blocks_match_scalar_path():
    pts = random_points(6, 11)
    sx = np.stack([covariance(c).x_block() for c in pts])
    sy = np.stack([covariance(c).y_block() for c in pts])
    for a, b in [((1,), (2,)), ((2, 3), (6,)), ((2, 3, 4), (1, 5, 6)), ((1, 5, 6), (2,))]:
        p = Bipartition(a, b)
        got = steerability_blocks(sx, sy, p)
        want = [steerability(covariance(c), p) for c in pts]
        np.testing.assert_allclose(got, want, atol=1e-10)

