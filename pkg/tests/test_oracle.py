import numpy as np
import pytest

import bivortex as bv
from bivortex.oracle import (
    RadialProblem, solve_radial, radial_flux, tail_slope, interp_profile,
)
from conftest import CM, CM_DECOUPLED, ORACLE_FROZEN


def test_radial_problem_validation():
    with pytest.raises(ValueError):
        RadialProblem(cm=CM, n1=1, n2=0, R=0.0)
    with pytest.raises(ValueError):
        RadialProblem(cm=CM, n1=1, n2=0, R=14.0, nodes=999)


def test_empty_counts_converge_immediately():
    sol = solve_radial(RadialProblem(cm=CM, n1=0, n2=0, R=10.0, nodes=1001))
    assert sol.converged and sol.iterations == 0
    assert np.all(sol.u1 == 0.0) and np.all(sol.u2 == 0.0)
    assert radial_flux(sol) == (0.0, 0.0)


def test_decoupled_profile_frozen(oracle_decoupled):
    sol = oracle_decoupled.sol
    assert sol.iterations <= 15 and sol.residual_sup < 1e-10
    t1, t2 = radial_flux(sol)
    # quantized integral: within 0.5% of -pi (truncation tail only)
    assert abs(t1 + np.pi) < 0.005 * np.pi
    assert t1 == pytest.approx(ORACLE_FROZEN["decoupled_flux1"], rel=1e-6)
    assert t2 == 0.0
    assert np.all(sol.u2 == 0.0)  # species 2 never sourced
    assert np.isneginf(sol.u1[0])  # genuine log singularity at the zero
    s = tail_slope(sol, 1, 6.0, 10.0)
    assert s == pytest.approx(ORACLE_FROZEN["decoupled_slope"], rel=1e-6)


def test_coupled_profile_frozen(oracle_coupled):
    sol = oracle_coupled.sol
    assert sol.iterations <= 15 and sol.residual_sup < 1e-10
    t1, t2 = radial_flux(sol)
    assert abs(t1 + np.pi) < 0.005 * np.pi
    assert abs(t2 + np.pi) < 0.005 * np.pi
    assert t1 == pytest.approx(ORACLE_FROZEN["coupled_flux"][0], rel=1e-6)
    assert t2 == pytest.approx(ORACLE_FROZEN["coupled_flux"][1], rel=1e-6)
    s1 = tail_slope(sol, 1, 6.0, 10.0)
    s2 = tail_slope(sol, 2, 6.0, 10.0)
    assert s1 == pytest.approx(ORACLE_FROZEN["coupled_slope"], rel=1e-6)
    assert s2 == pytest.approx(s1, rel=1e-3)  # both species share the rate
    # slope of ln(u1^2 + u2^2), the quantity the 2D decay fit uses
    mask = (sol.r >= 6.0) & (sol.r <= 10.0)
    sq = np.polyfit(sol.r[mask],
                    np.log(sol.u1[mask] ** 2 + sol.u2[mask] ** 2), 1)
    assert -sq[0] == pytest.approx(ORACLE_FROZEN["coupled_squared_slope"],
                                   rel=1e-6)


@pytest.mark.parametrize("fixture_name,lam1", [
    ("oracle_decoupled", 4.0),
    ("oracle_coupled", 1.5278640450004204),
])
def test_tail_slope_matches_linearized_rate(fixture_name, lam1, request):
    # the linearization of the radial system at zero has decay constant
    # sqrt(lambda1 / 2); modified-Bessel asymptotics add the slowly
    # varying 1/(2r) correction to a finite-window log-slope fit
    sol = request.getfixturevalue(fixture_name).sol
    measured = tail_slope(sol, 1, 7.0, 10.5)
    predicted = np.sqrt(lam1 / 2.0) + 1.0 / (2.0 * 8.75)
    assert measured == pytest.approx(predicted, rel=0.02)


def test_sign_symmetry():
    # swapping zeros for poles negates the profile exactly
    pos = solve_radial(RadialProblem(cm=CM, n1=1, n2=0, R=10.0, nodes=1201))
    neg = solve_radial(RadialProblem(cm=CM, n1=-1, n2=0, R=10.0, nodes=1201))
    assert pos.converged and neg.converged
    assert np.allclose(neg.u1[1:], -pos.u1[1:], atol=1e-8)
    assert np.allclose(neg.u2, -pos.u2, atol=1e-8)
    assert np.isposinf(neg.u1[0])


def test_interp_profile(oracle_coupled):
    sol = oracle_coupled.sol
    # at mesh radii the interpolant reproduces the solution
    idx = [50, 400, 1200]
    u1, u2 = interp_profile(sol, sol.r[idx])
    assert np.allclose(u1, sol.u1[idx], atol=1e-12)
    assert np.allclose(u2, sol.u2[idx], atol=1e-12)
    # off-mesh values stay between neighbors away from the core
    rmid = 0.5 * (sol.r[800] + sol.r[801])
    u1m, _ = interp_profile(sol, np.array([rmid]))
    lo, hi = sorted((sol.u1[800], sol.u1[801]))
    assert lo <= u1m[0] <= hi


def test_tail_slope_window_guard(oracle_coupled):
    with pytest.raises(ValueError, match="window"):
        tail_slope(oracle_coupled.sol, 1, 9.999, 10.0)
