import math

import numpy as np
import pytest

import monolab


def test_dirac_scattering_matches_closed_form():
    s = monolab.scatter(monolab.dirac_model(3), 0.5, -0.5, 0.5)
    assert s.shape == (1, 1)
    assert abs(s[0, 0] - 0.015625) / 0.015625 < 1e-6


def test_higgs_field_of_dirac_model():
    phi = monolab.dirac_model(1).higgs(3.0, 4j)
    assert abs(phi[0, 0] - 0.1j) < 1e-14


def test_classification_of_counterexample_and_dirac_sum():
    radii = monolab.default_radii()
    assert monolab.classify_dirac(monolab.counterexample_model(), radii, 32)["verdict"] == "not_dirac"
    s = monolab.direct_sum([monolab.dirac_model(2), monolab.dirac_model(-1)])
    c = monolab.classify_dirac(s, radii, 32)
    assert c["verdict"] == "dirac"
    assert c["phi_fit"]["exponent"] == pytest.approx(-1.0, abs=1e-6)


def test_charges_survive_unitary_mixing():
    c, s = math.cos(0.6), math.sin(0.6)
    u = np.array([[c, -s], [s, c]], dtype=complex)
    mixed = monolab.constant_gauge(monolab.direct_sum([monolab.dirac_model(2), monolab.dirac_model(-1)]), u)
    assert monolab.extract_charges(mixed, n_samples=16)["charges"] == [-1, 2]
    assert monolab.scattering_pole_orders(mixed)["charges"] == [-1, 2]


def test_counterexample_fails_condition_d_on_dual_side():
    d = monolab.condition_d(monolab.counterexample_model())
    assert not d["passes"]
    assert all(s["growth"] == "superpolynomial_growth" for s in d["dual_sections"])


def test_twist_by_harmonic_function_stays_a_monopole():
    tw = monolab.metric_twist(monolab.dirac_model(1), [("x", 1.0)])
    assert monolab.bogomolny_residual(tw, 0.6, 0.8)["total"] < 1e-6
    broken = monolab.metric_twist(monolab.dirac_model(1), [("x^2", 1.0)])
    assert monolab.bogomolny_residual(broken, 0.6, 0.8)["total"] > 1e-2


def test_run_is_deterministic_and_reports_config_errors():
    cfg = '{"model": {"type": "dirac_sum", "charges": [1]}, "suite": "classify", "n_sphere": 16}'
    a, status = monolab.run(cfg, jobs=1)
    b, _ = monolab.run(cfg, jobs=4)
    assert status == 0
    assert a == b
    assert "suite,model,quantity,R_or_point,value,aux1,aux2,config_hash" in a
    with pytest.raises(monolab.ConfigError):
        monolab.run('{"model": {"type": "dirac_sum", "charges": [0.5]}}')
