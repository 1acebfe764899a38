import json
import math

import numpy as np
import pytest

import cvxbound as cb


def test_entropy_log_concave_bracket():
    r = cb.tight_bounds(cb.Functional.entropy(), cb.ConvexityFamily.log_concave(), 1, 1.0)
    assert r.lower == pytest.approx(0.0, abs=1e-15)
    assert r.upper == pytest.approx(1.0, abs=1e-15)
    assert r.evidence() == cb.Evidence.Proved


def test_renyi_entropy_bracket():
    r = cb.tight_bounds(cb.Functional.renyi(2.0), cb.ConvexityFamily.beta_concave(4.0), 1, 1.0)
    lo, hi = cb.renyi_entropy_bracket(r, 2.0)
    assert lo == pytest.approx(0.0, abs=1e-14)
    assert hi == pytest.approx(math.log(7.0 / 3.0), rel=1e-13)


def test_quadrature_path_matches_closed_form():
    phi = cb.Functional.truncation(0.3)
    psi = cb.ConvexityFamily.beta_concave(6.5)
    q = cb.tight_bounds(phi, psi, 2, 1.0, force_quadrature=True)
    c = cb.closed_form_bounds(phi, psi, 2, 1.0)
    assert q.provenance == "quadrature"
    assert q.upper == pytest.approx(c.upper, rel=1e-8)


def test_invalid_input_raises():
    with pytest.raises(cb.NonIntegrable):
        cb.tight_bounds(cb.Functional.entropy(), cb.ConvexityFamily.beta_concave(2.0), 2, 1.0)
    with pytest.raises(cb.InvalidArgument):
        cb.Functional.renyi(1.0)


def test_oracle_on_extremal_density():
    f = cb.extremal_linear(cb.ConvexityFamily.log_concave(), 1, 1.0)
    assert f([0.0]) == 1.0
    e = cb.differential_entropy(f)
    assert e.method == "quadrature"
    assert e.value == pytest.approx(1.0, abs=1e-8)
    mc = cb.differential_entropy(f, method="monte-carlo", samples=20000, seed=3, workers=2)
    again = cb.differential_entropy(f, method="monte-carlo", samples=20000, seed=3, workers=2)
    assert mc.value == again.value
    assert abs(mc.value - 1.0) < 5 * mc.std_error


def test_counterexample_beats_constant():
    phi = cb.Functional.entropy()
    psi = cb.ConvexityFamily.log_concave()
    r = cb.tight_bounds(phi, psi, 1, 1.0)
    f = cb.counterexample_density(phi, psi, 1, 1.0, r.upper - 0.05, "i")
    assert cb.integrate_functional(f, phi).value > r.upper - 0.01


def test_quadratic_density_accepts_numpy():
    f = cb.quadratic_density(cb.ConvexityFamily.log_concave(), np.eye(2), np.zeros(2), 0.0)
    assert f.dimension == 2
    assert f([0.0, 0.0]) == pytest.approx(1.0 / math.pi, rel=1e-12)


def test_discrete_submodule():
    assert cb.dist.poisson_cdf(1.0, 0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert cb.dist.binomial_cdf(4, 0.5, 1) == pytest.approx(5.0 / 16.0, rel=1e-14)


def test_common_information_bracket():
    cov = np.array([[1.0, 0.5], [0.5, 1.0]])
    b = cb.common_info_bracket(cb.gaussian(cov))
    assert b.i_d == pytest.approx(-0.5 * math.log(0.75), abs=1e-9)
    assert b.mode == "beta-to-infinity heuristic"
    t = cb.common_info_bracket(cb.multivariate_t(6.0, cov))
    assert t.g_upper - t.g_lower == cb.common_info_gap(2)
    with pytest.raises(cb.InvalidArgument):
        cb.common_info_bracket(cb.multivariate_t(4.0, cov))


def test_run_cli_in_process():
    code, out, err = cb.run_cli(["bounds", "--functional", "truncation", "--t", "0.25",
                                 "--family", "beta-concave", "--beta", "2"])
    assert code == 0, err
    doc = json.loads(out)
    assert doc["results"][0]["upper"] == pytest.approx(0.75, abs=1e-14)
    code, _, _ = cb.run_cli(["bounds", "--bogus"])
    assert code == 2
