from fractions import Fraction as F

import pytest

from rencontres.identities import (
    CHECKERS,
    RangeSpec,
    identity_d1_difference,
    identity_deutsch_elizalde,
    identity_prototype,
    identity_row_sum,
    identity_thm1,
    identity_thm1_general,
    identity_thm2,
    identity_thm2_general,
    identity_weighted_rencontres,
    run_all,
)
from rencontres.sequences import ConsistencyError, SequenceCache, derangement_two_term as D


def at(checker, n, r=None):
    spec = RangeSpec(n, n, (r,) if r is not None else (0,))
    (rep,) = [x for x in checker(spec) if x.r == r]
    return rep


@pytest.mark.parametrize(
    "checker, n, r, lhs, rhs",
    [
        (identity_row_sum, 0, None, 1, 1),
        (identity_row_sum, 4, None, 24, 9 + 8 + 6 + 0 + 1),
        (identity_row_sum, 10, None, 3628800, 3628800),
        (identity_deutsch_elizalde, 2, None, 1, 1),
        (identity_deutsch_elizalde, 4, None, 9, 1 * 6 * 1 + 2 * 4 * 0 + 3 * 1 * 1),
        (identity_deutsch_elizalde, 7, None, 1854, 1854),
        (identity_weighted_rencontres, 2, None, 1, 1),
        (identity_weighted_rencontres, 4, None, 9, 1 * 6 + 2 * 0 + 3 * 1),
        (identity_weighted_rencontres, 6, None, 265, 265),
        (identity_prototype, 4, None, 24 + 12 * 1 + 4 * 2 + 1 * 9, F(265, 5)),
        (identity_prototype, 2, None, 2 + 1, F(9, 3)),
        (identity_prototype, 5, None, 120 + 60 + 20 * 2 + 5 * 9 + 44, F(1854, 6)),
        (identity_thm1, 1, None, 1, F(2, 2)),
        (identity_thm1, 2, None, F(3, 2), F(9, 6)),
        (identity_thm1, 4, None, 1 + F(1, 2) + F(2, 6) + F(9, 24), F(265, 120)),
        (identity_thm2, 1, None, 1 - 3, -2),
        (identity_thm2, 2, None, 1 - 3 + 11, 9),
        (identity_thm2, 3, None, 9 - 53, -44),
        (identity_thm1_general, 2, 0, F(3, 2), F(3, 2)),
        (identity_thm1_general, 1, 1, 1, F(8, 8)),
        (identity_thm1_general, 1, 2, 1, F(20, 20)),
        (identity_thm2_general, 1, 0, -2, -2),
        (identity_thm2_general, 1, 1, 1 - F(45, 15), -F(8, 4)),
        (identity_thm2_general, 2, 1, 1 - 3 + F(264, 24), F(45, 5)),
        (identity_d1_difference, 1, None, -1, -1),
        (identity_d1_difference, 4, None, 1, 1),
        (identity_d1_difference, 7, None, 1854 - 7 * 265, -1),
    ],
)
def test_examples(checker, n, r, lhs, rhs):
    rep = at(checker, n, r)
    assert (rep.n, rep.r) == (n, r)
    assert rep.lhs == lhs and rep.rhs == rhs
    assert rep.holds
    assert isinstance(rep.lhs, F) and isinstance(rep.rhs, F)


def test_worked_example_is_53():
    assert 24 + 12 * D(2) + 4 * D(3) + D(4) == 53 == D(6) // 5


def test_thm2_proof_sum_from_zero():
    # Starting the sum at k = 0 contributes D_3/2 = (D_2 + D_1) = 1, the leading "1 +".
    assert F(D(3), 2) == D(2) + D(1) == 1
    for n in range(1, 30):
        proof_form = sum(F((-1) ** k * D(k + 3), k + 2) for k in range(0, n + 1))
        assert proof_form == at(identity_thm2, n).lhs == (-1) ** n * D(n + 2)


def test_clamping_and_notices():
    notices = []
    reps = identity_thm1(RangeSpec(0, 3), notices=notices)
    assert [r.n for r in reps] == [1, 2, 3]
    assert notices == ["thm1: n_min raised from 0 to 1"]


def test_range_below_minimum_yields_no_reports():
    notices = []
    assert identity_prototype(RangeSpec(1, 1), notices=notices) == []
    assert notices


def test_general_reports_in_ascending_order():
    reps = identity_thm1_general(RangeSpec(1, 3, (2, 0, 1)))
    assert [(r.n, r.r) for r in reps] == [(n, r) for n in (1, 2, 3) for r in (0, 1, 2)]


def test_range_spec_validation():
    with pytest.raises(ValueError):
        RangeSpec(5, 4)
    with pytest.raises(ValueError):
        RangeSpec(0, 4, (-1,))


def test_all_hold_to_200():
    summary = run_all(RangeSpec(0, 200))
    assert summary.failed == 0
    ids = {r.identity_id for r in summary.reports}
    assert ids == set(CHECKERS) and len(ids) == 9


def test_run_all_small_range():
    summary = run_all(RangeSpec(1, 1))
    assert summary.failed == 0
    assert len(summary.notices) == 3  # the three identities starting at n = 2


def test_reduction_r0():
    spec = RangeSpec(1, 60, (0,))
    for general, plain in [(identity_thm1_general, identity_thm1), (identity_thm2_general, identity_thm2)]:
        g = [(x.n, x.lhs, x.rhs, x.holds) for x in general(spec)]
        p = [(x.n, x.lhs, x.rhs, x.holds) for x in plain(spec)]
        assert g == p


def test_report_json():
    rep = at(identity_thm1, 2)
    assert rep.to_json() == (
        '{"identity_id": "thm1", "n": 2, "r": null, "lhs": "3/2", "rhs": "3/2", "holds": true}'
    )


@pytest.mark.parametrize("n", range(2, 41))
@pytest.mark.parametrize("delta", [1, -1])
def test_mutation_sensitivity(n, delta):
    c = SequenceCache()
    c.tamper(n, delta)
    summary = run_all(RangeSpec(0, n), c)
    assert summary.failed >= 1
    assert all(rep.lhs != rep.rhs for rep in summary.failures)


def test_integrality_strict_mode_raises_on_corrupt_terms():
    c = SequenceCache()
    c.tamper(10, 1)  # D_10 / 9 is no longer an integer
    with pytest.raises(ConsistencyError):
        identity_thm2(RangeSpec(1, 8), c, strict=True)
    reps = identity_thm2(RangeSpec(1, 8), c, strict=False)
    assert not all(r.holds for r in reps)


def test_run_all_unknown_identity():
    with pytest.raises(KeyError):
        run_all(RangeSpec(1, 2), identities=["nope"])
