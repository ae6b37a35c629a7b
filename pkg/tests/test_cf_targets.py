"""Coefficient-stream targets: parity with exact surds, basis changes, and
the honest-refusal paths when a finite scan cannot settle a question."""

import itertools

import pytest

from toric_ends import (
    Alternating,
    CFTarget,
    EndDescription,
    FareyPath,
    Periodic,
    QuadraticTarget,
    SignData,
    Slope,
    TorusRecord,
    classify,
    decompose,
    equivalent,
    extension_obstruction,
    farey_sequence,
    invariant_from_signs,
    parse_slope,
    quadratic_cf_target,
)
from toric_ends.ends import Unknown, basis_change
from toric_ends.errors import ToricEndError, UndecidableAtHorizonError
from toric_ends.farey import CFStream, GL2Z

P, N = 1, -1
MINUS_SQRT2 = QuadraticTarget.of(0, -1, 1, 2)


def S(text):
    return parse_slope(text)


def sqrt2_stream():
    def gen():
        yield 1
        while True:
            yield 2
    return CFStream(gen())


def test_stream_validation():
    with pytest.raises(ToricEndError):
        CFStream(iter([1, 2, 3])).coefficient(5)
    with pytest.raises(ToricEndError):
        CFStream(itertools.cycle([1, 0])).coefficient(1)


def test_stream_comparisons():
    s = sqrt2_stream()  # sqrt(2)
    assert s.cmp_fraction(1, 1) > 0
    assert s.cmp_fraction(3, 2) < 0
    assert s.cmp_fraction(141421356, 100000000) > 0
    assert s.cmp_fraction(141421357, 100000000) < 0


def test_stream_mobius_floor_matches_surd():
    rt2 = QuadraticTarget.of(0, 1, 1, 2).value  # sqrt(2)
    for m in (GL2Z(1, 0, 0, 1), GL2Z(2, 1, 1, 1), GL2Z(0, -1, 1, 0), GL2Z(-3, 2, 1, -1)):
        assert sqrt2_stream().mobius_floor(m) == rt2.mobius(m).floor()


def test_stream_mobius_emits_image_cf():
    # image of sqrt(2) under x -> (x + 1)/x is (2 + sqrt(2))/2
    image = sqrt2_stream().mobius(GL2Z(1, 1, 1, 0))
    expected = QuadraticTarget.of(2, 1, 2, 2).value
    exact = expected.cf_coefficients()
    for i in range(12):
        assert image.coefficient(i) == next(exact)


def test_classify_cf_target_matches_quadratic_twin():
    cf = quadratic_cf_target(MINUS_SQRT2.value)
    e_cf = EndDescription(TorusRecord(S("-1"), 1), cf, SignData((P,), Alternating()))
    e_quad = EndDescription(TorusRecord(S("-1"), 1), MINUS_SQRT2, SignData((P,), Alternating()))
    a, b = classify(e_cf), classify(e_quad)
    assert a.invariant.counts == b.invariant.counts
    assert [a.invariant.f(i) for i in range(1, 8)] == [b.invariant.f(i) for i in range(1, 8)]


def test_classify_cf_target_with_basis_change():
    boundary = S("2/3")
    m = basis_change(boundary)
    # pull the target back so the normalized picture walks toward -sqrt(2)
    pulled = MINUS_SQRT2.transform(m.inverse())
    e_quad = EndDescription(TorusRecord(boundary, 1), pulled, SignData((), Alternating()))
    e_cf = EndDescription(TorusRecord(boundary, 1),
                          quadratic_cf_target(pulled.value),
                          SignData((), Alternating()))
    a, b = classify(e_quad), classify(e_cf)
    assert [a.invariant.f(i) for i in range(1, 7)] == [1] * 6
    assert [b.invariant.f(i) for i in range(1, 7)] == [1] * 6


def test_cf_equivalence_decides_when_prefix_differs():
    cf = quadratic_cf_target(MINUS_SQRT2.value)
    d = decompose(FareyPath(S("-1"), cf))
    a = invariant_from_signs(d, SignData((P, P), Alternating()))
    b = invariant_from_signs(d, SignData((N, N), Alternating()))
    assert equivalent(a, b) is False


def test_cf_equivalence_identical_rules_decide_true():
    cf = quadratic_cf_target(MINUS_SQRT2.value)
    d = decompose(FareyPath(S("-1"), cf))
    a = invariant_from_signs(d, SignData((), Periodic((P, N))))
    b = invariant_from_signs(d, SignData((), Periodic((P, N))))
    assert equivalent(a, b) is True


def test_cf_equivalence_undecidable_at_horizon():
    # (+,-) vs (-,+) have equal counts on every even-slice block; with a
    # stream target there is no periodicity certificate, so the scan must
    # refuse rather than guess
    cf = quadratic_cf_target(MINUS_SQRT2.value)
    d = decompose(FareyPath(S("-1"), cf))
    a = invariant_from_signs(d, SignData((), Periodic((P, N))))
    b = invariant_from_signs(d, SignData((), Periodic((N, P))))
    with pytest.raises(UndecidableAtHorizonError):
        equivalent(a, b, horizon=12)


def test_cf_obstruction_reports_unknown():
    cf = quadratic_cf_target(MINUS_SQRT2.value)
    e = EndDescription(TorusRecord(S("-1"), 1), cf, SignData((), Periodic((P, N))))
    result = extension_obstruction(classify(e), horizon=16)
    assert isinstance(result, Unknown)
    assert result.horizon == 16


def test_cf_path_agrees_with_quadratic_far_out():
    cf = quadratic_cf_target(QuadraticTarget.of(-3, 1, 4, 13).value)
    a = farey_sequence(S("-1"), QuadraticTarget.of(-3, 1, 4, 13), 40).prefix(40)
    b = farey_sequence(S("-1"), cf, 40).prefix(40)
    assert a == b
