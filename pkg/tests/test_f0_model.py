import pytest

from f0sullivan.f0_model import (F0Error, NotRegular, build_f0, describe, hilbert_series, normalize,
                                 verify_f0_cohomology)
from f0sullivan.graded_poly import parse
from f0sullivan.ideal import quotient_dimension


def test_build_examples():
    m = build_f0([2, 2], ["x1^2", "x2^2"])
    assert [m.sig[y].degree for y in m.y_names] == [3, 3]
    M = build_f0([2, 4], ["x1^2", "x2^2 + x1^2*x2"])
    assert [M.sig[y].degree for y in M.y_names] == [3, 7]
    assert M.regularity.regular


def test_non_regular_rejected_with_witness():
    with pytest.raises(NotRegular) as info:
        build_f0([2, 2, 2, 2], ["x1*x2", "x1*x3", "x4^2", "x3^2"])
    cert = info.value.certificate
    assert cert.witness_index == 2 and cert.witness == parse(cert.witness.sig, "x2")


@pytest.mark.parametrize("degs,P", [
    ([3, 2], ["x1^2", "x2^2"]),
    ([2, 2], ["x1^2 + x2", "x2^2"]),
    ([2, 2], ["x1^2", "x2^2 + y"]),
    ([2], ["x1^2", "x1^3"]),
    ([], []),
])
def test_build_rejects_bad_input(degs, P):
    with pytest.raises((F0Error, ValueError)):
        build_f0(degs, P)


def test_normalize_examples():
    m = build_f0([4, 2], ["x1^2", "x2^2"])
    assert m.x_degrees == [2, 4]
    assert m.renaming == {"x2": "x1", "x1": "x2"}
    assert [str(p) for p in m.P] == ["x1^2", "x2^2"]
    same = build_f0([2, 4], ["x1^2", "x2^2 + x1^2*x2"])
    again = normalize(same)
    assert again.P == same.P and again.x_degrees == same.x_degrees
    # P out of order with x in order: only the P's move
    m = build_f0([2, 4], ["x2^2 + x1^2*x2", "x1^2"])
    assert m.x_degrees == [2, 4] and m.P_degrees == [4, 8]
    un = build_f0([2, 4], ["x2^2 + x1^2*x2", "x1^2"], normalized=False)
    assert un.P_degrees == [8, 4] and not un.is_normalized()
    assert normalize(un).P_degrees == [4, 8]


def test_normalization_is_stable_on_ties():
    m = build_f0([2, 2, 2], ["x3^2", "x1^2", "x2^2"])
    assert [str(p) for p in m.P] == ["x3^2", "x1^2", "x2^2"]


def test_hilbert_series():
    assert hilbert_series([2, 2], [4, 4], 6) == [1, 0, 2, 0, 1, 0, 0]
    assert hilbert_series([2, 4], [4, 8], 8) == [1, 0, 1, 0, 1, 0, 1, 0, 0]


@pytest.mark.parametrize("degs,P,d_max,even", [
    ([2, 2], ["x1^2", "x2^2"], 8, {0: 1, 2: 2, 4: 1}),
    ([2, 4], ["x1^2", "x2^2 + x1^2*x2"], 12, {0: 1, 2: 1, 4: 1, 6: 1}),
])
def test_cohomology_matches_quotient(degs, P, d_max, even):
    m = build_f0(degs, P)
    rep = verify_f0_cohomology(m, d_max)
    assert rep.ok
    assert {d: v for d, v in rep.dims.items() if v} == even
    assert all(rep.dims[d] == 0 for d in rep.dims if d % 2)
    assert sum(rep.dims.values()) == quotient_dimension(list(m.P))
    assert m.top_degree == max(even)


@pytest.mark.parametrize("degs,P", [
    ([2, 2, 2], ["x1^2", "x2^2 - x1*x3", "x3^3"]),
    ([2, 2], ["x1*x2", "x1^2 + x2^2"]),
    ([2, 4, 6], ["x1^2", "x2^2", "x3^2 + x1^2*x2^2"]),
])
def test_total_dimension_equals_quotient_dimension(degs, P):
    m = build_f0(degs, P)
    rep = verify_f0_cohomology(m, m.top_degree + 2)
    assert rep.ok
    assert sum(rep.dims.values()) == quotient_dimension(list(m.P))


def test_describe_lines():
    m = build_f0([2], ["x1^2"])
    assert describe(m) == ["generator x1 degree 2 even", "generator y1 degree 3 odd", "d y1 = x1^2"]


def test_negative_degree_bound():
    with pytest.raises(F0Error):
        verify_f0_cohomology(build_f0([2], ["x1^2"]), -1)
