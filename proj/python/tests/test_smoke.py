import math

import pytest

import uamo


def test_params_and_coefficients():
    p = uamo.ModelParams(0.6, 0.8, uamo.golden(), 0.13)
    assert p.lambda1p == pytest.approx(0.8)
    alpha, rho = uamo.verblunsky(p, 3)
    assert abs(alpha) ** 2 + abs(rho) ** 2 == pytest.approx(1.0)


def test_spectrum_on_circle():
    p = uamo.ModelParams(0.5, 0.9, uamo.golden(), 0.13)
    phases = uamo.spectrum(p, 64)
    assert len(phases) == 64
    assert phases == sorted(phases)


def test_lyapunov_closed_form():
    p = uamo.ModelParams(0.6, 0.8, uamo.golden(), 0.13)
    L = uamo.lyapunov_closed_form(p)
    assert L == pytest.approx(math.log(0.8 * 1.8 / (0.6 * 1.6)))
    mean, _ = uamo.lyapunov_estimate(p, "szego2", complex(0, 1), 5000)
    assert abs(mean - L) < 0.03


def test_determinant_routes_agree():
    p = uamo.ModelParams(0.5, 0.9, uamo.golden(), 0.3)
    z = complex(math.cos(1.0), math.sin(1.0))
    lu = uamo.box_determinant(p, 1, 20, z, "lu")
    tr = uamo.box_determinant(p, 1, 20, z, "sze1")
    assert lu[0] == pytest.approx(tr[0], abs=1e-10)
    assert tr[3] == "sze1"


def test_scheme_and_cf():
    a, q = uamo.continued_fraction(uamo.golden(), 10)
    assert q[:6] == [1, 1, 2, 3, 5, 8]
    s = uamo.localization_scheme(1000, uamo.golden(), 0.01)
    assert (s["q_n"], s["q_m"], s["h"]) == (17711, 144, 286)


def test_eigenpair_and_fit():
    p = uamo.ModelParams(0.6, 0.8, uamo.golden(), 0.13)
    e = uamo.eigenpair(p, 800, uamo.central_eigenphase(p, 400))
    assert e.residual < 1e-9
    slope, r2 = uamo.decay_rate_fit(e)
    assert slope < -0.1


def test_run_cli_command():
    text = uamo.run(["evolve", "--T", "0", "--N", "200"])
    assert "config.command=evolve" in text
    with pytest.raises(ValueError):
        uamo.run(["evolve", "--l1", "3"])
