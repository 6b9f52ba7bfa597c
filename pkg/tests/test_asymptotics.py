import json
from fractions import Fraction

import pytest

from rllseq.asymptotics import Target, convergence_report, fit_log_correction, max_scaled_gap
from rllseq.constraints import make_runset, naturals
from rllseq.errors import BadParameters, CapacityOutOfRange, EmptySeries

HALF = Fraction(1, 2)


def test_total_of_naturals_has_no_correction():
    rep = fit_log_correction(naturals(), ("total",), [64, 128, 256, 512, 1024])
    assert rep.fitted_log_coefficient == pytest.approx(0, abs=1e-9)
    assert rep.max_residual < 1e-9


def test_wr_coefficient_naturals():
    rep = fit_log_correction(naturals(), ("wr", HALF, HALF), [100, 200, 400, 800])
    assert -1.25 <= rep.fitted_log_coefficient <= -0.75


def test_runs_coefficient_golden():
    rep = fit_log_correction(make_runset([1, 2]), ("r", Fraction(18, 25)), [100, 200, 400, 800])
    assert -0.75 <= rep.fitted_log_coefficient <= -0.25


def test_edge_coefficient_is_half():
    # rho = 2 omega / lmin: every one-run has length 1
    rep = fit_log_correction(make_runset([1, 2, 3]), ("wr", Fraction(2, 5), Fraction(4, 5)), [100, 200, 400, 800])
    assert -0.75 <= rep.fitted_log_coefficient <= -0.25


def test_two_sets_value_regression():
    from rllseq.capacity import capacity_two_sets
    from rllseq.counting import count_two_sets
    import math

    L0, L1 = make_runset([1, 2]), make_runset([2, 3])
    omega, rho = Fraction(3, 5), Fraction(1, 2)
    sigma = capacity_two_sets(L0, L1, (float(omega), float(rho))).sigma
    ns = [100, 200, 400, 800]
    y = [math.log2(count_two_sets(L0, L1, n, int(omega * n), int(rho * n))) - n * sigma for n in ns]
    # log correction stays far below the linear term
    slopes = [(b - a) / (math.log2(nb) - math.log2(na)) for a, b, na, nb in zip(y, y[1:], ns, ns[1:])]
    assert all(-1.3 < s < -0.7 for s in slopes)


def test_fit_is_stable_when_dropping_smallest_point():
    ns = [100, 200, 400, 800]
    for L, target in ((naturals(), ("wr", HALF, HALF)), (make_runset([1, 2]), ("w", HALF))):
        full = fit_log_correction(L, target, ns)
        part = fit_log_correction(L, target, ns[1:], strict=False)
        assert abs(full.fitted_log_coefficient - part.fitted_log_coefficient) <= 0.05


def test_fit_errors():
    with pytest.raises(EmptySeries):
        fit_log_correction(naturals(), ("total",), [])
    with pytest.raises(BadParameters):
        fit_log_correction(naturals(), ("wr", Fraction(1, 3), HALF), [100, 200, 400, 800])
    with pytest.raises(BadParameters):
        fit_log_correction(naturals(), ("total",), [100, 200, 400])
    with pytest.raises(CapacityOutOfRange):
        fit_log_correction(make_runset([2, 3]), ("wr", Fraction(9, 10), HALF), [100, 200, 400, 800])
    with pytest.raises(CapacityOutOfRange):
        fit_log_correction(make_runset([2, 3]), ("w", Fraction(9, 10)), [100, 200, 400, 800])


def test_target_parsing():
    assert Target.parse(("r", 0.72)).rho == Fraction(18, 25)
    assert str(Target.parse(("wr", "1/2", "3/4"))) == "wr(1/2,3/4)"
    with pytest.raises(BadParameters):
        Target.parse(("wr", 0.5))


def test_report_exports():
    rep = fit_log_correction(naturals(), ("w", HALF), [64, 128, 256, 512])
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,log_count,n_term,residual" and len(lines) == 5
    blob = rep.to_json()
    assert json.loads(json.dumps(blob)) == blob
    resid = [lc - nt - rep.fitted_log_coefficient * __import__("math").log2(n) - rep.fitted_constant
             for n, lc, nt in rep.points]
    assert max(abs(r) for r in resid) == pytest.approx(rep.max_residual, abs=1e-9)


def test_convergence_report():
    rows = convergence_report(naturals(), [10, 100, 1000])
    assert all(gap == 0 for _, _, gap in rows)
    (row,) = convergence_report(make_runset([1, 2]), [512])
    assert row[2] <= 0.01
    rows = convergence_report(make_runset([2, 3]), range(50, 801, 50))
    # gap * n stays bounded: the late half is no larger than the early half
    early = max(n * g for n, _, g in rows[:8])
    late = max(n * g for n, _, g in rows[8:])
    assert late <= early + 1e-6
    assert max_scaled_gap(rows) < 2
