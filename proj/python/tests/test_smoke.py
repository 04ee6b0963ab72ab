import math

import pytest

import frachs


def test_params_exponents():
    p = frachs.Params(2, 1.5)
    assert p.two_star == pytest.approx(8.0)
    assert p.q == pytest.approx(4.5)
    with pytest.raises(ValueError):
        frachs.Params(2, 1.0)


def test_involution():
    w = [0.3, -0.2, 0.1]
    back = frachs.map_T(frachs.map_T(w))
    assert max(abs(a - b) for a, b in zip(w, back)) < 1e-12
    x = frachs.map_T(w)
    assert frachs.eta(w) * frachs.eta(x) == pytest.approx(1.0, abs=1e-12)


def test_closed_forms():
    assert frachs.cp_min(2.0) == pytest.approx(1.0, abs=1e-12)
    assert frachs.sphere_area(3) == pytest.approx(4 * math.pi)
    p = frachs.Params(3, 1.5)
    assert frachs.tail_t_integral(p) == pytest.approx(2 / 2.5 - 1 / 4.5, rel=1e-10)
    assert frachs.shell_integral(0.5, p) == pytest.approx(frachs.shell_integral_radial(0.5, p), rel=1e-10)
    assert frachs.hardy_constant_ground_state(frachs.Params(2, 1.5)) == pytest.approx(0.72492, rel=1e-4)


def test_exact_checks_pass():
    checks = frachs.run_checks("exact")
    assert checks and all(c["passed"] for c in checks)
    with pytest.raises(ValueError):
        frachs.run_checks("nope")


def test_cli_report():
    code, report, _ = frachs.cli("verify", "--suite", "exact")
    assert code == 0
    assert report["status"] == "pass"
    assert report["config"]["seed"] == 12345
    code, _, err = frachs.cli("verify", "--alpha", "1")
    assert code == 2
    assert "alpha" in err
