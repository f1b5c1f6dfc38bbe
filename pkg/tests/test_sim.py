import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from sfclab.controllers import (
    ControllerState,
    LacParams,
    NacParams,
    SfcParams,
    gain,
    step_discrete,
    steady_state_velocity,
)
from sfclab.errors import ConfigError, DivergenceError, DomainError, NotFoundError
from sfclab.signals import Composite, ImpulseProfile, Recorded, Sine, Step, impact_profile
from sfclab.sim import (
    TRACE_COLUMNS,
    HumanModel,
    SimConfig,
    band_energy,
    bode_to_csv,
    dc_gain,
    measure_gain,
    numeric_bandwidth,
    numeric_bode,
    numeric_time_constant,
    run,
    run_coupled,
    settle_time,
    sweep_config,
    write_atomic,
)
from sfclab.stability import coupled_q, detect_oscillation, worst_case_amplitude

UNIT_LAC = LacParams(m_a=1, mu_a=1)
UNIT_CUBIC = SfcParams(m=1, mu=1, n=3)
SMALL_GRID = np.logspace(-1, 1.5, 12)


def reference_loop(p, forces, dt):
    """Pure-Python Euler loop through step_discrete."""
    s = ControllerState()
    v = [0.0]
    for f in forces[1:]:
        s = step_discrete(p, s, float(f), dt)
        v.append(s.v)
    return np.array(v)


controllers = st.one_of(
    st.builds(SfcParams, m=st.floats(0.5, 2), mu=st.floats(1, 50), n=st.floats(1, 5), g=st.floats(0.1, 1)),
    st.builds(LacParams, m_a=st.floats(0.5, 2), mu_a=st.floats(1, 50), g_a=st.floats(0.1, 1)),
    st.builds(
        NacParams,
        m_n=st.floats(0.5, 2),
        mu_n=st.floats(1, 20),
        alpha_n=st.floats(0.1, 30),
        sigma_n=st.floats(1, 30),
        g_n=st.floats(0.1, 1),
    ),
)


def safe_dt(p, f_max):
    from sfclab.stability import stable_dt_limit

    return 0.25 * stable_dt_limit(p, f_max)


class TestRun:
    def test_zero_input(self, fixed):
        for p in (fixed["sfc"], fixed["lac"], fixed["nac"]):
            tr = run(SimConfig(p, Step(0.0), 0.002, 0.5))
            assert not np.any(tr.as_array()[:, 1:])

    def test_fixed_sfc_step(self, fixed):
        tr = run(SimConfig(fixed["sfc"], Step(5.0), fixed["dt"], 1.0))
        assert tr.v_output[-1] == pytest.approx(0.0490, abs=1e-3)
        assert len(tr) == 501 and tr.time[-1] == pytest.approx(1.0)

    def test_impulse_profile_lac(self, fixed):
        tr = run(SimConfig(fixed["lac"], impact_profile(), fixed["dt"], 2.0))
        assert tr.v_output.max() == pytest.approx(0.5, abs=0.01)

    @given(p=controllers, amp=st.floats(-20, 20), data=st.data())
    @settings(max_examples=40)
    def test_kernel_matches_step_discrete(self, p, amp, data):
        dt = safe_dt(p, abs(amp) + 1)
        t_on = data.draw(st.floats(0, 50 * dt))
        cfg = SimConfig(p, Step(amp, t_on=t_on), dt, 200 * dt)
        tr = run(cfg)
        ref = reference_loop(p, tr.f_ext, dt)
        np.testing.assert_allclose(tr.v_internal, ref, rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(tr.v_output, gain(p) * ref, rtol=1e-12, atol=1e-15)

    @given(
        m=st.floats(0.2, 5),
        mu=st.floats(0.5, 50),
        g=st.floats(0.05, 2),
        samples=st.lists(st.floats(-50, 50), min_size=2, max_size=40),
        v0=st.floats(-1, 1),
    )
    @settings(max_examples=20)
    def test_unit_exponent_is_bit_identical_to_linear(self, m, mu, g, samples, v0):
        dt = 0.5 * m / mu
        sig = Recorded(tuple(samples), dt)
        a = run(SimConfig(SfcParams(m=m, mu=mu, n=1.0, g=g), sig, dt, 60 * dt, ControllerState(v=v0)))
        b = run(SimConfig(LacParams(m_a=m, mu_a=mu, g_a=g), sig, dt, 60 * dt, ControllerState(v=v0)))
        assert a.to_csv() == b.to_csv()

    def test_deterministic(self, fixed):
        cfg = SimConfig(fixed["nac"], impact_profile(), fixed["dt"], 2.0)
        assert run(cfg).to_csv() == run(cfg).to_csv()

    def test_csv_header(self, fixed):
        text = run(SimConfig(fixed["sfc"], Step(1.0), 0.002, 0.01)).to_csv()
        assert text.splitlines()[0] == ",".join(TRACE_COLUMNS)
        assert len(text.splitlines()) == 1 + 6

    def test_divergence_raises(self, fixed):
        with pytest.raises(DivergenceError) as info:
            run(SimConfig(fixed["sfc"], Step(50.0), 0.05, 5.0))
        assert info.value.step > 0

    @pytest.mark.parametrize("dt, duration", [(0.0, 1.0), (0.01, -1.0), (float("nan"), 1.0)])
    def test_bad_config(self, fixed, dt, duration):
        with pytest.raises((ConfigError, DomainError)):
            SimConfig(fixed["sfc"], Step(1.0), dt, duration)

    def test_initial_state_carried(self):
        tr = run(SimConfig(UNIT_LAC, Step(0.0), 0.01, 1.0, ControllerState(v=1.0, x=2.0)))
        assert tr.v_internal[0] == 1.0 and tr.position[0] == 2.0
        assert tr.v_internal[-1] == pytest.approx(0.99**100)


class TestEnergy:
    @given(p=controllers, amp=st.floats(-20, 20))
    @settings(max_examples=30)
    def test_ledger_closes_to_first_order(self, p, amp):
        dt = safe_dt(p, abs(amp) + 1)
        coarse = run(SimConfig(p, Sine(amp if amp else 1.0, 3.0), dt, 400 * dt))
        fine = run(SimConfig(p, Sine(amp if amp else 1.0, 3.0), dt / 2, 400 * dt))
        assert coarse.storage[-1] - coarse.storage[0] <= coarse.work_in[-1] + coarse.energy_defect() + 1e-12
        assert np.all(np.diff(coarse.dissipated) >= 0)
        if coarse.energy_defect() > 1e-9:
            assert fine.energy_defect() < 0.75 * coarse.energy_defect()

    def test_free_decay_dissipates(self):
        tr = run(SimConfig(UNIT_CUBIC, Step(0.0), 0.01, 5.0, ControllerState(v=1.0)))
        assert tr.work_in[-1] == 0.0
        assert tr.storage[-1] < tr.storage[0]
        assert tr.dissipated[-1] == pytest.approx(tr.storage[0] - tr.storage[-1], rel=0.05)


class TestCoupled:
    def test_zero_intent(self, fixed):
        cfg = SimConfig(fixed["sfc"], Step(0.0), 0.002, 1.0)
        tr = run_coupled(cfg, HumanModel(m_h=1.0, b_h=10.0))
        assert not np.any(tr.as_array()[:, 1:])

    def test_steady_state_against_root_finder(self, fixed):
        p = fixed["sfc"]
        cfg = SimConfig(p, Step(5.0), 0.002, 3.0)
        tr = run_coupled(cfg, HumanModel(m_h=1.0, b_h=10.0))
        # internal v*: 5 - b_h g v* = mu v*^n
        v_star = brentq(lambda v: 5.0 - 10.0 * p.g * v - p.mu * v**p.n, 0.0, 1.0, xtol=1e-15)
        assert tr.v_internal[-1] == pytest.approx(v_star, rel=1e-6)
        assert tr.f_human[-1] == pytest.approx(10.0 * p.g * v_star, rel=1e-6)

    def test_inside_coupled_bound_no_oscillation(self, fixed):
        p = fixed["sfc"]
        assert coupled_q(p, worst_case_amplitude(p, 60.0), 0.002) < 1
        tr = run_coupled(SimConfig(p, impact_profile(), 0.002, 3.0), HumanModel(m_h=1.0, b_h=10.0))
        assert not detect_oscillation(tr.accel, tr.v_internal, worst_case_amplitude(p, 60.0)).oscillatory

    def test_intent_signal_used(self, fixed):
        cfg = SimConfig(fixed["lac"], Step(0.0), 0.002, 2.0)
        tr = run_coupled(cfg, HumanModel(m_h=1.0, b_h=10.0, f_intent=Step(5.0)))
        assert tr.v_output[-1] > 0


@pytest.fixture(scope="module")
def stratified():
    return numeric_bode(UNIT_CUBIC, [1.0, 10.0], SMALL_GRID)


class TestFrequencyResponse:
    def test_linear_first_order(self):
        gm = measure_gain(sweep_config(UNIT_LAC, 1.0, 1.0))
        assert gm.gain == pytest.approx(1 / math.sqrt(2), rel=0.01)
        assert math.degrees(gm.phase) == pytest.approx(-45.0, abs=1.0)

    @pytest.mark.parametrize("A", [1.0, 10.0])
    def test_quasi_static_fundamental(self, A):
        # fundamental of the quasi-static response (A sin / mu)^(1/n)
        def integrand(th):
            s = math.sin(th)
            return math.copysign(abs(A * s) ** (1 / 3), s) * s

        expected = quad(integrand, 0, 2 * math.pi, limit=200)[0] / math.pi
        gm = measure_gain(sweep_config(UNIT_CUBIC, A, 0.01))
        assert gm.B == pytest.approx(expected, rel=5e-3)

    def test_quasi_static_gain_exceeds_constant_force_gain(self):
        # a sine spends time at low force where the cubic damper is soft
        gm = measure_gain(sweep_config(UNIT_CUBIC, 1.0, 0.01))
        assert gm.gain > dc_gain(UNIT_CUBIC, 1.0)

    def test_short_config_rejected(self):
        with pytest.raises(ConfigError):
            measure_gain(SimConfig(UNIT_LAC, Sine(1.0, 1.0), 0.01, 10.0))
        with pytest.raises(ConfigError):
            measure_gain(SimConfig(UNIT_LAC, Step(1.0), 0.01, 100.0))

    def test_stratification(self, stratified):
        low, high = stratified
        low_db, high_db = np.array(low.gains_db), np.array(high.gains_db)
        # strictly ordered while damping matters; both curves meet the 1/(m w)
        # inertia asymptote at high frequency, where only round-off separates them
        separated = np.array(low.omegas) < numeric_bandwidth(high)
        assert np.all(high_db[separated] < low_db[separated] - 1.0)
        assert np.all(high_db < low_db + 0.01)

    def test_linear_curves_coincide(self):
        curves = numeric_bode(LacParams(m_a=1, mu_a=17), [1.0, 10.0, 100.0], SMALL_GRID)
        for c in curves[1:]:
            np.testing.assert_allclose(c.gains_db, curves[0].gains_db, atol=0.1)

    def test_nac_separation_bounded(self):
        p = NacParams(m_n=1, mu_n=15.5, alpha_n=25, sigma_n=20)
        low, high = numeric_bode(p, [1.0, 100.0], SMALL_GRID)
        gap = np.array(low.gains_db) - np.array(high.gains_db)
        assert np.all(gap > 0)
        assert np.all(gap <= 20 * math.log10(40.5 / 15.5) + 0.1)

    def test_linear_bandwidth(self):
        (curve,) = numeric_bode(UNIT_LAC, [1.0], np.logspace(-2, 1, 61))
        assert numeric_bandwidth(curve) == pytest.approx(1.0, rel=0.02)

    def test_bandwidth_increases_with_amplitude(self, stratified):
        low, high = stratified
        assert numeric_bandwidth(high) > numeric_bandwidth(low)

    def test_no_crossing(self):
        (curve,) = numeric_bode(UNIT_LAC, [1.0], [0.01, 0.02, 0.05])
        with pytest.raises(NotFoundError):
            numeric_bandwidth(curve)

    def test_bode_csv(self, stratified):
        lines = bode_to_csv(stratified).splitlines()
        assert lines[0] == "amplitude,omega,gain_db,phase_deg"
        assert len(lines) == 1 + 2 * SMALL_GRID.size

    def test_bad_grid(self):
        with pytest.raises(DomainError):
            numeric_bode(UNIT_LAC, [1.0], [1.0, 0.5])


class TestTimeDomainMetrics:
    @pytest.mark.parametrize("A", [0.5, 5.0, 50.0])
    def test_linear_time_constant(self, A):
        p = LacParams(m_a=1, mu_a=17)
        tr = run(SimConfig(p, Step(A), 1e-5, 1.0))
        assert numeric_time_constant(tr) == pytest.approx(1 / 17, rel=1e-3)

    def test_unsettled(self):
        tr = run(SimConfig(LacParams(m_a=1, mu_a=1), Step(1.0), 0.01, 1.0))
        with pytest.raises(NotFoundError):
            numeric_time_constant(tr)

    def test_settle_after_pulse(self, fixed):
        times = {}
        for k in ("sfc", "nac", "lac"):
            p = fixed[k]
            tr = run(SimConfig(p, impact_profile(), fixed["dt"], 3.0))
            times[k] = settle_time(tr, 1.0, steady_state_velocity(p, 5.0))
        assert times["sfc"] < times["nac"] < times["lac"]


class TestBandEnergy:
    dt = 1e-3
    t = np.arange(4096) * 1e-3

    def test_concentrated(self):
        x = np.sin(2 * math.pi * 10 * self.t)
        w0 = 2 * math.pi * 10
        assert band_energy(x, self.dt, (0.8 * w0, 1.2 * w0)) >= 0.95
        assert band_energy(x, self.dt, (0, 0.5 * w0)) <= 0.05

    def test_zero_signal(self):
        assert band_energy(np.zeros(64), self.dt, (0, 10)) == 0.0

    @pytest.mark.parametrize("band", [(5, 5), (5, 1), (-1, 2)])
    def test_bad_band(self, band):
        with pytest.raises(DomainError):
            band_energy(np.ones(64), self.dt, band)

    def test_sfc_smoother_than_linear(self, fixed):
        dt = fixed["dt"]
        frac = {}
        for k in ("sfc", "lac"):
            tr = run(SimConfig(fixed[k], impact_profile(), dt, 3.0))
            frac[k] = band_energy(tr.v_output, dt, (2 * math.pi, math.pi / dt))
        assert frac["sfc"] < frac["lac"]


class TestSignals:
    def test_impulse_profile(self):
        sig = impact_profile()
        f = sig.sample(np.array([0.0, 0.59, 0.6, 0.99, 1.0]))
        np.testing.assert_array_equal(f, [5, 5, 50, 50, 5])
        assert sig.peak == 50

    def test_recorded_zero_order_hold(self):
        sig = Recorded((1.0, 2.0, 3.0), 0.1)
        np.testing.assert_array_equal(sig.sample(np.array([0.0, 0.05, 0.1, 0.25, 10.0])), [1, 1, 2, 3, 3])

    def test_composite(self):
        sig = Composite((Step(1.0), Sine(2.0, 1.0)))
        assert sig.sample(np.array([math.pi / 2]))[0] == pytest.approx(3.0)

    def test_bad_profile(self):
        with pytest.raises(ConfigError):
            ImpulseProfile(5, 50, 1.0, 0.5)


def test_write_atomic(tmp_path):
    target = tmp_path / "out.csv"
    write_atomic(target, "a,b\n1,2\n")
    assert target.read_text() == "a,b\n1,2\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]
