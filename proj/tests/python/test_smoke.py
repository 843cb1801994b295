import json
import math

import pytest

import ses_thermo as st


def two_level():
    return st.build_finite([(0.0, 1.0), (1.0, 1.0)], "twolevel")


def test_negative_temperature_inversion():
    b = st.beta_of_energy(two_level(), 0.75)
    assert b == pytest.approx(-math.log(3.0), rel=1e-12)


def test_oscillator_matches_closed_form():
    osc = st.build_oscillator(1.0, max_temperature=1.0)
    t = st.thermal_properties(osc, 1.0)
    assert t["E"] == pytest.approx(0.5 + 1.0 / math.expm1(1.0), rel=1e-9)
    assert not osc.bounded


def test_state_availability():
    s = st.State(two_level(), [0.25, 0.75])
    assert s.energy == pytest.approx(0.75)
    assert s.adiabatic_availability() == pytest.approx(0.5)
    assert s.ergotropy() == pytest.approx(0.5)
    assert s.available_energy(1.0) >= s.adiabatic_availability()


def test_domain_errors_raise():
    with pytest.raises(st.SesError, match="EnergyOutOfRange"):
        st.beta_of_energy(two_level(), 2.0)
    with pytest.raises(st.SesError):
        st.State(two_level(), [0.5, 0.6])


def test_bounds_and_partitioning():
    assert st.transfer_bounds(400.0, 300.0, 12.0) == (0.03, 0.04, True)
    s_irr, w = st.ideal_gas_partitioning(2, 2, 1.0)
    assert s_irr == pytest.approx(2 * math.log(2.0))
    assert w == pytest.approx(3 * (2 ** (2 / 3) - 1))


def test_spectrum_json_round_trip():
    spec = st.Spectrum.from_json(two_level().to_json())
    assert spec.levels == [(0.0, 1.0), (1.0, 1.0)]
    assert json.loads(spec.to_json())["label"] == "twolevel"


def test_cli_and_verify_are_deterministic():
    code, out, err = st.run_cli(["interact", "bounds", "--ta", "400", "--tb", "300", "--de", "12"])
    assert code == 0 and out.splitlines()[-1] == "0.03,0.04,true"
    assert st.verify(7, ["states"]) == st.verify(7, ["states"])
    passed, failed, _ = st.verify(7, ["states"])
    assert failed == 0 and passed > 0
