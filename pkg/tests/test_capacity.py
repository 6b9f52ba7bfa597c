import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rllseq.capacity import (
    binary_entropy as H,
    capacity_manhattan,
    capacity_r,
    capacity_sec,
    capacity_total,
    capacity_two_sets,
    capacity_w,
    capacity_wr,
    optimal_distributions,
    rho_star_omega,
    sec_optimum,
    solve_lambda,
)
from rllseq.constraints import RegionLocation, classify, make_runset, naturals, power_sums, runs_range_at
from rllseq.counting import count_sec
from rllseq.errors import OutOfRange

GOLDEN = (math.sqrt(5) - 1) / 2


def nat_wr(omega, rho):
    return (1 - omega) * H(rho / (2 * (1 - omega))) + omega * H(rho / (2 * omega))


def test_solve_lambda_examples():
    assert solve_lambda(naturals()) == pytest.approx(0.5, abs=1e-15)
    assert solve_lambda(make_runset([1, 2])) == pytest.approx(GOLDEN, abs=1e-13)
    assert solve_lambda(naturals(1)) == pytest.approx(GOLDEN, abs=1e-13)


def test_golden_capacity_matches_counts():
    from rllseq.counting import count_total

    L = make_runset([1, 2])
    rate = math.log2(count_total(L, 4000)) / 4000
    assert rate == pytest.approx(-math.log2(GOLDEN), abs=1e-3)


def test_capacity_wr_naturals_closed_form():
    res = capacity_wr(naturals(), (0.3, 0.4))
    assert res.region is RegionLocation.INTERIOR
    assert res.sigma == pytest.approx(nat_wr(0.3, 0.4), abs=1e-12)
    assert res.alpha == pytest.approx(1 - 0.4 / 1.4, abs=1e-12)
    assert res.beta == pytest.approx(1 - 0.4 / 0.6, abs=1e-12)
    assert res.log_term_coefficient == -1


def test_capacity_wr_region_dispatch():
    L = make_runset([1, 2])
    assert capacity_wr(L, (0.5, 1.0)).sigma == 0
    assert capacity_wr(L, (0.5, 1.0)).log_term_coefficient == 0
    out = capacity_wr(make_runset([2, 3]), (0.9, 0.5))
    assert out.sigma == -math.inf and out.to_json()["sigma"] == "-inf"
    edge = capacity_wr(L, (0.4, 0.8))
    assert edge.region is RegionLocation.EDGE_UPPER_LEFT
    assert edge.log_term_coefficient == -0.5


def test_capacity_wr_interior_residuals_and_gamma():
    L = make_runset([1, 2, 5])
    omega, rho = 0.45, 0.5
    res = capacity_wr(L, (omega, rho))
    for x, mean in ((res.alpha, 2 * (1 - omega) / rho), (res.beta, 2 * omega / rho)):
        ps = power_sums(L, x)
        assert abs(ps.A1 - mean * ps.A) <= 1e-12 * ps.A1
    assert power_sums(L, res.alpha).A * power_sums(L, res.beta).A * res.gamma**2 == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("spec", ["1,2", "1,2,3", "2,3,4"])
def test_edge_formula_is_limit_of_interior(spec):
    L = make_runset(spec)
    omega = 0.45
    rho_edge = 2 * omega / L.lmin
    edge = capacity_wr(L, (omega, rho_edge)).sigma
    near = capacity_wr(L, (omega, rho_edge - 1e-7)).sigma
    assert near == pytest.approx(edge, abs=1e-5)


def test_edge_distribution_is_degenerate():
    L = make_runset([1, 2, 3])
    d0, d1 = optimal_distributions(L, omega=0.4, rho=0.8)
    assert d1.atom == 1 and d1.entropy() == 0 and d1.pmf(1) == 1.0
    assert d0.atom is None


def test_capacity_w_examples():
    res = capacity_w(naturals(), 0.3)
    assert res.sigma == pytest.approx(H(0.3), abs=1e-12)
    assert res.alpha == pytest.approx(0.7, abs=1e-10)
    assert res.beta == pytest.approx(0.3, abs=1e-10)
    L = make_runset([1, 2])
    assert capacity_w(L, 0.5).sigma == pytest.approx(-math.log2(GOLDEN), abs=1e-12)
    # independent grid maximization over rho
    lo, hi = runs_range_at(L, 0.45)
    grid = max(capacity_wr(L, (0.45, lo + (hi - lo) * i / 2000)).sigma for i in range(1, 2000))
    best = capacity_w(L, 0.45).sigma
    assert grid <= best + 1e-12
    assert best == pytest.approx(grid, abs=1e-6)


def test_capacity_w_endpoints_and_range():
    L = make_runset([1, 2])
    assert capacity_w(L, 1 / 3).sigma == 0
    with pytest.raises(OutOfRange):
        capacity_w(L, 0.2)


def test_capacity_r_examples():
    res = capacity_r(naturals(), 0.3)
    assert res.sigma == pytest.approx(H(0.3), abs=1e-12)
    assert res.alpha == pytest.approx(0.7, abs=1e-12)
    for d in (1, 2, 4):
        rho = 0.6 / (d + 1)
        assert capacity_r(naturals(d), rho).sigma == pytest.approx((1 - d * rho) * H(rho / (1 - d * rho)), abs=1e-12)
    L = make_runset([2, 5])
    assert capacity_r(L, 0.5).sigma == 0 and capacity_r(L, 0.2).sigma == 0
    with pytest.raises(OutOfRange):
        capacity_r(L, 0.6)


def test_two_sets_reduce_to_single_set():
    for spec in ("interval:1:inf", "1,2,3"):
        L = make_runset(spec)
        p = (0.47, 0.55)
        assert capacity_two_sets(L, L, p).sigma == pytest.approx(capacity_wr(L, p).sigma, abs=1e-12)
    assert capacity_two_sets(naturals(), naturals(), (0.3, 0.4)).sigma == pytest.approx(nat_wr(0.3, 0.4), abs=1e-12)
    with pytest.raises(OutOfRange):
        capacity_two_sets(make_runset([1, 2]), make_runset([2, 3]), (0.5, 0.9))


def test_rho_star_omega():
    assert rho_star_omega(naturals(), 0.5) == pytest.approx(0.5, abs=1e-12)
    for spec in ("1,2", "2,3", "1,3,7"):
        L = make_runset(spec)
        lam = solve_lambda(L)
        assert rho_star_omega(L, 0.5) == pytest.approx(1 / power_sums(L, lam).A1, abs=1e-12)
    # golden-section maximization of capacity_wr over rho
    assert rho_star_omega(make_runset([1, 2]), 0.4) == pytest.approx(0.7151083470638806, abs=1e-6)


@pytest.mark.parametrize("spec", ["1,2", "2,3", "interval:1:inf", "interval:2:5"])
@pytest.mark.parametrize("omega", [0.42, 0.5, 0.55])
def test_rho_star_attains_weight_capacity(spec, omega):
    L = make_runset(spec)
    rho = rho_star_omega(L, omega)
    assert capacity_wr(L, (omega, rho)).sigma == pytest.approx(capacity_w(L, omega).sigma, abs=1e-10)


def test_sec_examples():
    for lb in (1, 2, 5):
        for omega in (0.1, 0.5, 0.77):
            assert capacity_sec(lb, 0, omega).sigma == pytest.approx(H(omega), abs=1e-12)
    omega_star, top = sec_optimum(2, 1)
    assert omega_star == pytest.approx(2 / 3, abs=1e-15)
    assert top == pytest.approx(0.5 * math.log2(3), abs=1e-15)
    assert capacity_sec(2, 1, omega_star).sigma == pytest.approx(top, abs=1e-12)
    assert capacity_sec(2, 1, 1.0).sigma == 0
    with pytest.raises(OutOfRange):
        capacity_sec(2, 1, 0.4)


@pytest.mark.parametrize("lb, wb", [(2, 1), (3, 1), (4, 2)])
def test_sec_lower_endpoint_is_continuous_limit(lb, wb):
    # at omega = wb/lb every block has weight exactly wb
    blocks = 5
    assert count_sec(lb, wb, lb * blocks, wb * blocks) == math.comb(lb, wb) ** blocks
    lo = wb / lb
    at = capacity_sec(lb, wb, lo).sigma
    assert at == pytest.approx(math.log2(math.comb(lb, wb)) / lb, abs=1e-15)
    assert capacity_sec(lb, wb, lo + 1e-7).sigma == pytest.approx(at, abs=1e-5)


def test_manhattan_examples():
    for omega in (0.1, 0.35, 0.5, 0.9):
        assert capacity_manhattan(2, omega).sigma == pytest.approx(H(omega), abs=1e-12)
    for q in range(2, 9):
        assert capacity_manhattan(q, (q - 1) / 2).sigma == pytest.approx(math.log2(q), abs=1e-12)
    res = capacity_manhattan(3, 1.0)
    assert res.alpha == pytest.approx(1.0, abs=1e-12)
    assert capacity_manhattan(4, 0).sigma == 0 and capacity_manhattan(4, 3).sigma == 0


def test_optimal_distributions():
    (p,) = optimal_distributions(naturals())
    assert all(p.pmf(ell) == pytest.approx(2.0**-ell, rel=1e-14) for ell in range(1, 30))
    d0, d1 = optimal_distributions(naturals(), omega=0.3, rho=0.4)
    assert d0.mean == pytest.approx(2 * 0.7 / 0.4) and d1.mean == pytest.approx(2 * 0.3 / 0.4)
    for d in (d0, d1):
        # geometric law on {1, 2, ...} with the requested mean
        q = 1 - 1 / d.mean
        assert d.pmf(3) == pytest.approx((1 - q) * q**2, rel=1e-12)
    (r,) = optimal_distributions(make_runset([1, 2, 3]), rho=0.5)
    assert sum(ell * r.pmf(ell) for ell in (1, 2, 3)) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("spec", ["1,2", "1,2,3", "2,3,5", "interval:1:inf", "interval:2:inf"])
def test_run_distribution_invariants(spec):
    L = make_runset(spec)
    for dist in optimal_distributions(L, omega=0.48, rho=0.6 / L.lmin):
        total = sum(dist.pmf(ell) for ell in L.upto(4000))
        mean = sum(ell * dist.pmf(ell) for ell in L.upto(4000))
        assert total == pytest.approx(1, abs=1e-12)
        assert mean == pytest.approx(dist.mean, abs=1e-10)
        assert math.isfinite(dist.entropy())


def test_entropy_rate_identity_weight_only():
    L = make_runset([1, 2, 4])
    res = capacity_w(L, 0.4)
    d0, d1 = res.dist0, res.dist1
    rate = (d0.entropy() + d1.entropy()) / (d0.mean + d1.mean)
    assert rate == pytest.approx(res.sigma, abs=1e-10)


runsets = st.sampled_from(["interval:1:inf", "1,2", "2,3", "1,3", "interval:2:5", "1,2,6"])


@given(runsets, st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_symmetry_in_weight(spec, u, v):
    L = make_runset(spec)
    lo, hi = runs_range_at(L, u)
    assume(hi - lo > 1e-6)
    rho = lo + v * (hi - lo)
    a = capacity_wr(L, (u, rho))
    b = capacity_wr(L, (1 - u, rho))
    if a.sigma == -math.inf:
        assert b.sigma == -math.inf
    else:
        assert a.sigma == pytest.approx(b.sigma, abs=1e-12)


@given(runsets, st.floats(0.02, 0.98), st.floats(0.02, 0.98))
def test_decomposition_identity(spec, u, v):
    L = make_runset(spec)
    lo, hi = runs_range_at(L, u)
    assume(hi - lo > 1e-3)
    rho = lo + v * (hi - lo)
    assume(classify(L, (u, rho)) is RegionLocation.INTERIOR)
    lhs = capacity_wr(L, (u, rho)).sigma
    rhs = (1 - u) * capacity_r(L, rho / (2 * (1 - u))).sigma + u * capacity_r(L, rho / (2 * u)).sigma
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(st.sampled_from(["interval:1:inf", "1,2,3", "interval:1:4"]), st.integers(1, 2),
       st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_shift_identity(spec, s, u, v):
    L = make_runset(spec)
    Ls = L.shift(s)
    lo, hi = runs_range_at(Ls, u)
    assume(hi - lo > 1e-3)
    rho = lo + v * (hi - lo)
    assume(classify(Ls, (u, rho)) is RegionLocation.INTERIOR)
    lhs = capacity_wr(Ls, (u, rho)).sigma
    inner = ((u - s * rho / 2) / (1 - s * rho), rho / (1 - s * rho))
    assert lhs == pytest.approx((1 - s * rho) * capacity_wr(L, inner).sigma, abs=1e-9)
