import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entanglab.entropy import bound
from entanglab.errors import DomainError
from entanglab.model import ModelParams
from entanglab.physics import (
    CODATA_2018,
    CONSTANTS_ENV_VAR,
    ELECTRON_MASS,
    ELECTRON_VOLT,
    ConstantsFileError,
    PhysicalConstants,
    build_scenario,
    holographic_report,
    load_constants,
    scenario_from_gamma,
)


def electron(R=1.0, x0=1.0):
    return build_scenario(ELECTRON_MASS, 13.6 * ELECTRON_VOLT, R, x0)


def test_planck_consistency():
    k = CODATA_2018
    assert k.l_P * k.m_P * k.c == pytest.approx(k.hbar, rel=1e-12)


def test_electron_values_three_figures():
    s = electron()
    assert f"{s.kappa:.3g}" == "1.89e+10"
    assert f"{s.gamma:.3g}" == "3.05e-25"
    assert f"{s.eta:.3g}" == "9.89e-51"
    assert s.lam == pytest.approx(s.kappa)


def test_electron_is_stronger_than_holographic():
    rep = holographic_report(electron())
    assert rep["stronger_than_holographic"] is True
    assert rep["identity_ok"]
    assert rep["kernel_computable"] is False


positive = st.floats(1e-3, 1e3)


@settings(max_examples=100, deadline=None)
@given(m=positive, e=positive, r=positive, x0=st.floats(0.01, 1.0))
def test_eta_identity(m, e, r, x0):
    s = build_scenario(m * ELECTRON_MASS, e * ELECTRON_VOLT, r, x0)
    assert s.eta == pytest.approx(s.eta_physical, rel=1e-12)
    assert holographic_report(s)["eta_identity_residual"] <= 1e-12


@settings(max_examples=50, deadline=None)
@given(m=positive, e=positive, r=positive, x0=st.floats(0.01, 1.0))
def test_area_law_identity(m, e, r, x0):
    s = build_scenario(m * ELECTRON_MASS, e * ELECTRON_VOLT, r, x0)
    rep = holographic_report(s)
    assert rep["identity_ok"]
    assert s.lam**2 / 3 == pytest.approx(x0**2 * rep["S_area_law_bound"], rel=1e-10)


def test_x0_halves_lambda():
    assert electron(x0=0.5).lam == pytest.approx(electron().lam / 2, rel=1e-15)


def test_unit_gamma_scenario():
    s = scenario_from_gamma(1.0, 1.0)
    assert s.gamma == pytest.approx(1.0, rel=1e-12)
    assert s.lam == pytest.approx(1.0, rel=1e-12)
    rep = holographic_report(s)
    assert rep["S_area_law_bound"] == pytest.approx(1 / 3, rel=1e-12)
    assert rep["S_holographic"] == pytest.approx(math.pi, rel=1e-12)
    assert rep["ratio"] == pytest.approx(1 / (3 * math.pi), rel=1e-12)


def test_gamma_mode_lambda():
    assert scenario_from_gamma(1.0, 10.0).lam == pytest.approx(10.0, rel=1e-12)


@pytest.mark.parametrize("alpha", [1e-3, 0.5, 7.0, 1e4])
def test_kappa_depends_on_product(alpha):
    m, e = ELECTRON_MASS, 13.6 * ELECTRON_VOLT
    a = build_scenario(m, e, 1.0)
    b = build_scenario(alpha * m, e / alpha, 1.0)
    assert b.kappa == pytest.approx(a.kappa, rel=1e-14)
    assert build_scenario(alpha * m, e, 1.0).kappa != pytest.approx(a.kappa)


def test_round_trip_through_leading_bound():
    s = build_scenario(ELECTRON_MASS, 1e-9 * ELECTRON_VOLT, 1e-6)
    leading = bound("leading", ModelParams(s.lam)).value
    assert leading == pytest.approx(holographic_report(s)["S_area_law_bound"], rel=1e-10)


@pytest.mark.parametrize("kw", [dict(m=0.0), dict(E_abs=-1.0), dict(R=math.inf), dict(x0=1.5)])
def test_invalid_scenarios(kw):
    args = dict(m=1.0, E_abs=1.0, R=1.0, x0=1.0) | kw
    with pytest.raises(DomainError):
        build_scenario(**args)


def test_constants_file(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text("# doubled hbar\nhbar = 2.109143634e-34\n\nc=299792458 # exact\n")
    k = load_constants(f)
    assert k.hbar == 2.109143634e-34 and k.G == CODATA_2018.G
    assert k.l_P * k.m_P * k.c == pytest.approx(k.hbar, rel=1e-12)


@pytest.mark.parametrize(
    "body,line",
    [("hbar=1e-34\nG 6.6e-11\n", 2), ("c=3e8\n\nmass=1\n", 3), ("hbar=abc\n", 1), ("G=-1\n", 1)],
)
def test_constants_file_errors_carry_line(tmp_path, body, line):
    f = tmp_path / "bad.txt"
    f.write_text(body)
    with pytest.raises(ConstantsFileError) as exc:
        load_constants(f)
    assert exc.value.lineno == line
    assert f":{line}:" in str(exc.value)


def test_constants_env_var(tmp_path, monkeypatch):
    f = tmp_path / "k.txt"
    f.write_text("G=1e-10\n")
    monkeypatch.setenv(CONSTANTS_ENV_VAR, str(f))
    assert load_constants().G == 1e-10
    monkeypatch.delenv(CONSTANTS_ENV_VAR)
    assert load_constants() == CODATA_2018 == PhysicalConstants()
