"""Samplers: stable-draw law, CIR discretization, stream layout, determinism."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvol.simulation import (
    SimScenario,
    SimOutput,
    _kahan_add,
    sample_stable_increments,
    simulate_cir,
    simulate_levy_const,
    simulate_sv_path,
    split_seed,
)
from charvol.estimators import realized_vol
from charvol.theory import jump_bias_cf


# ----------------------------------------------------------------------
# stable increments
# ----------------------------------------------------------------------


def test_stable_cf_across_beta():
    # empirical CF of N draws vs exp(-|u|^beta); 4/sqrt(N) leaves ~1 sigma
    # of slack over the binding 3/sqrt(N) acceptance bound
    n = 100_000
    tol = 4.0 / math.sqrt(n)
    for i, beta in enumerate((1.0, 1.25, 1.5, 1.75, 2.0)):
        z = sample_stable_increments(beta, n, 1.0, seed=100 + i)
        for u in (0.5, 1.0, 2.0):
            ecf = float(np.mean(np.cos(u * z)))
            assert abs(ecf - math.exp(-abs(u) ** beta)) < tol, (beta, u)


def test_stable_cf_time_scaling():
    # over a step dt the CF is exp(-dt |u|^beta)
    n, dt, beta = 100_000, 0.25, 1.5
    z = sample_stable_increments(beta, n, dt, seed=7)
    for u in (1.0, 2.0):
        ecf = float(np.mean(np.cos(u * z)))
        assert abs(ecf - math.exp(-dt * abs(u) ** beta)) < 4.0 / math.sqrt(n)


def test_stable_gaussian_endpoint():
    # beta=2 draws are Normal(0, 2 dt)
    n, dt = 100_000, 0.01
    z = sample_stable_increments(2.0, n, dt, seed=3)
    assert float(np.var(z)) == pytest.approx(2.0 * dt, rel=0.05)
    assert abs(float(np.mean(z))) < 5.0 * math.sqrt(2.0 * dt / n)


def test_stable_cauchy_endpoint():
    # beta=1 draws are Cauchy with scale dt: median 0, IQR 2 dt
    n, dt = 100_000, 0.5
    z = sample_stable_increments(1.0, n, dt, seed=5)
    q1, q2, q3 = np.quantile(z, [0.25, 0.5, 0.75])
    assert abs(q2) < 5.0 * math.pi * dt / (2.0 * math.sqrt(n))
    assert q3 - q1 == pytest.approx(2.0 * dt, rel=0.05)


def test_stable_determinism_and_generator_passthrough():
    a = sample_stable_increments(1.5, 100, 0.1, seed=42)
    b = sample_stable_increments(1.5, 100, 0.1, seed=42)
    assert np.array_equal(a, b)
    c = sample_stable_increments(1.5, 100, 0.1, np.random.default_rng(42))
    assert np.array_equal(a, c)
    # a shared generator advances between calls
    rng = np.random.default_rng(42)
    d = sample_stable_increments(1.5, 100, 0.1, rng)
    e = sample_stable_increments(1.5, 100, 0.1, rng)
    assert not np.array_equal(d, e)


def test_stable_domain_errors():
    with pytest.raises(ValueError):
        sample_stable_increments(0.0, 10, 0.1, 0)
    with pytest.raises(ValueError):
        sample_stable_increments(2.1, 10, 0.1, 0)
    with pytest.raises(ValueError):
        sample_stable_increments(1.5, 0, 0.1, 0)
    with pytest.raises(ValueError):
        sample_stable_increments(1.5, 10, 0.0, 0)


# ----------------------------------------------------------------------
# scenario container
# ----------------------------------------------------------------------


def test_scenario_dict_round_trip():
    sc = SimScenario(delta=1.0 / 2400, days=132, beta=1.75, eta=2.0, seed=9)
    assert SimScenario.from_dict(sc.to_dict()) == sc
    # ints arriving as JSON floats are coerced
    d = sc.to_dict()
    d["days"] = 132.0
    assert SimScenario.from_dict(d) == sc
    with pytest.raises(ValueError, match="unknown scenario fields"):
        SimScenario.from_dict({**sc.to_dict(), "typo": 1})


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(delta=0.3),  # 1/delta not an integer
        dict(delta=0.0),
        dict(delta=1.0),
        dict(days=0),
        dict(beta=1.0),
        dict(beta=2.0),
        dict(eta=-0.1),
        dict(c0=0.0),
        dict(cir_kappa=-1.0),
        dict(substeps=0),
        dict(seed=-1),
        dict(seed=2**64),
    ],
)
def test_scenario_validation(kwargs):
    base = dict(delta=0.125, days=2, beta=1.5, eta=1.0)
    base.update(kwargs)
    with pytest.raises(ValueError):
        SimScenario(**base)


def test_scenario_feller_warning():
    with pytest.warns(UserWarning, match="Feller"):
        SimScenario(delta=0.125, days=1, beta=1.5, eta=0.0, cir_kappa=0.01,
                    cir_sigma=1.0)


def test_sim_output_freezes_and_checks():
    path = simulate_sv_path(SimScenario(delta=0.125, days=1, beta=1.5, eta=0.0)).path
    with pytest.raises(ValueError):
        SimOutput(path=path, true_iv=np.array([-0.5]))
    out = SimOutput(path=path, true_iv=np.array([1.0]))
    with pytest.raises(ValueError):
        out.true_iv[0] = 2.0


def test_split_seed():
    assert split_seed(7, 3) == split_seed(7, 3)
    seeds = {split_seed(7, r) for r in range(100)}
    assert len(seeds) == 100
    assert all(0 <= s < 2**64 for s in seeds)
    with pytest.raises(ValueError):
        split_seed(7, -1)


# ----------------------------------------------------------------------
# CIR variance path
# ----------------------------------------------------------------------


def test_cir_matches_ode_when_noiseless():
    sc = SimScenario(delta=0.01, days=2, beta=1.5, eta=0.0, c0=1.0,
                     cir_kappa=0.5, cir_theta=2.0, cir_sigma=0.0, substeps=10)
    c = simulate_cir(sc)
    dt = sc.delta / sc.substeps
    t = dt * np.arange(c.size)
    exact = 2.0 + (1.0 - 2.0) * np.exp(-0.5 * t)
    assert c.size == 2 * 100 * 10 + 1
    assert float(np.max(np.abs(c - exact))) < 1e-3


def test_cir_stationary_mean():
    # Euler preserves the linear-drift mean exactly, so a long time
    # average must sit at cir_theta
    sc = SimScenario(delta=0.5, days=20_000, beta=1.5, eta=0.0, c0=1.3,
                     cir_kappa=0.5, cir_theta=1.3, cir_sigma=0.5, substeps=1,
                     seed=12)
    c = simulate_cir(sc)
    assert float(np.mean(c)) == pytest.approx(1.3, rel=0.02)


def test_cir_equals_sv_spot_record():
    sc = SimScenario(delta=0.125, days=3, beta=1.5, eta=2.0, cir_sigma=0.15, seed=4)
    out = simulate_sv_path(sc, record_spot=True)
    assert np.array_equal(simulate_cir(sc), out.true_spot)


def test_streams_are_disjoint():
    # jump parameters draw from their own stream: the variance record
    # cannot move when beta or eta change
    base = dict(delta=0.125, days=2, eta=2.0, seed=31)
    spot_a = simulate_sv_path(SimScenario(beta=1.25, **base), record_spot=True).true_spot
    spot_b = simulate_sv_path(SimScenario(beta=1.9, **base), record_spot=True).true_spot
    spot_c = simulate_sv_path(
        SimScenario(beta=1.25, **{**base, "eta": 0.0}), record_spot=True
    ).true_spot
    assert np.array_equal(spot_a, spot_b)
    assert np.array_equal(spot_a, spot_c)


# ----------------------------------------------------------------------
# stochastic-volatility paths
# ----------------------------------------------------------------------


def test_sv_path_shapes_and_zero_start():
    sc = SimScenario(delta=1.0 / 48, days=3, beta=1.5, eta=1.0, seed=2)
    out = simulate_sv_path(sc)
    assert out.path.values[0] == 0.0
    assert out.path.values.shape == (3 * 48 + 1,)
    assert out.path.delta == sc.delta
    assert out.true_iv.shape == (3,)
    assert np.all(out.true_iv >= 0.0)
    assert out.true_spot is None


def test_sv_path_determinism():
    sc = SimScenario(delta=1.0 / 48, days=2, beta=1.75, eta=2.0, seed=77)
    a = simulate_sv_path(sc)
    b = simulate_sv_path(sc)
    assert np.array_equal(a.path.values, b.path.values)
    assert np.array_equal(a.true_iv, b.true_iv)


def test_sv_path_constant_variance_brownian():
    # cir_sigma=0 with c0=theta freezes c at c0: the day is a Brownian
    # path with variance c0 and the recorded truth is exact
    delta = 1.0 / 2400
    sc = SimScenario(delta=delta, days=1, beta=1.5, eta=0.0, c0=0.7,
                     cir_theta=0.7, cir_sigma=0.0, seed=15)
    out = simulate_sv_path(sc)
    assert out.true_iv[0] == pytest.approx(0.7, rel=1e-12)
    rv = realized_vol(out.path, 1.0)
    assert abs(rv - 0.7) < 0.7 * 3.0 * math.sqrt(2.0 * delta)
    assert float(np.max(np.abs(np.diff(out.path.values)))) < 6.0 * math.sqrt(
        0.7 * delta
    )


def test_sv_path_jumps_inflate_rv():
    sc = SimScenario(delta=1.0 / 2400, days=1, beta=1.75, eta=2.0, seed=8)
    out = simulate_sv_path(sc)
    assert realized_vol(out.path, 1.0) > 2.0 * float(out.true_iv[0])


def test_sv_substeps_change_only_refinement():
    # same scenario at substeps 1 vs 10: different discretizations of one
    # model, so levels agree loosely but not bitwise
    base = dict(delta=1.0 / 480, days=1, beta=1.5, eta=0.0, seed=3)
    iv1 = simulate_sv_path(SimScenario(substeps=1, **base)).true_iv[0]
    iv10 = simulate_sv_path(SimScenario(substeps=10, **base)).true_iv[0]
    assert iv1 != iv10
    assert iv1 == pytest.approx(iv10, rel=0.05)


# ----------------------------------------------------------------------
# constant-coefficient model
# ----------------------------------------------------------------------


def test_levy_const_gamma_zero_is_brownian():
    out = simulate_levy_const(2.0, 0.0, 1.5, 1.0 / 4800, 4800, seed=6)
    assert out.true_iv.shape == (1,)
    assert out.true_iv[0] == 4.0
    rv = realized_vol(out.path, 1.0)
    assert abs(rv - 4.0) < 4.0 * 3.0 * math.sqrt(2.0 / 4800)


def test_levy_const_partial_day_truth():
    assert np.allclose(
        simulate_levy_const(1.0, 0.5, 1.5, 1.0 / 4800, 2400, 0).true_iv, [0.5]
    )
    assert np.allclose(
        simulate_levy_const(1.0, 0.5, 1.5, 1.0 / 4800, 7200, 0).true_iv, [1.0, 0.5]
    )
    assert np.allclose(
        simulate_levy_const(3.0, 0.5, 1.5, 1.0 / 4800, 4800, 0).true_iv, [9.0]
    )


def test_levy_const_validation():
    with pytest.raises(ValueError):
        simulate_levy_const(1.0, 0.5, 2.0, 0.01, 10, 0)
    with pytest.raises(ValueError):
        simulate_levy_const(-1.0, 0.5, 1.5, 0.01, 10, 0)
    with pytest.raises(ValueError):
        simulate_levy_const(1.0, 0.5, 1.5, 0.0, 10, 0)
    with pytest.raises(ValueError):
        simulate_levy_const(1.0, 0.5, 1.5, 0.01, 0, 0)


def test_levy_const_log_cf_identity():
    # for this model the per-increment log CF is available in closed
    # form: -(2/u^2) log E cos(u dX / sqrt(delta))
    #     = sigma^2 + 2 gamma^beta u^(beta-2) delta^(1-beta/2),
    # which is exactly the frozen-u jump bias added to the variance
    sigma, gamma, beta, delta, n = 1.0, 0.5, 1.5, 1.0 / 4800, 200_000
    out = simulate_levy_const(sigma, gamma, beta, delta, n, seed=19)
    z = np.diff(out.path.values) / math.sqrt(delta)
    for u in (0.5, 1.0):
        cos_terms = np.cos(u * z)
        ecf = float(np.mean(cos_terms))
        est = -(2.0 / u**2) * math.log(ecf)
        want = sigma**2 + jump_bias_cf(gamma, beta, u, delta, 1.0).symmetrized
        # delta-method standard error of the log transform
        se = float(np.std(cos_terms)) / (ecf * math.sqrt(n)) * 2.0 / u**2
        assert abs(est - want) < 4.0 * se, u


# ----------------------------------------------------------------------
# compensated summation
# ----------------------------------------------------------------------


@given(
    st.lists(
        st.floats(min_value=-1e8, max_value=1e8, allow_nan=False, width=64),
        min_size=1,
        max_size=200,
    )
)
@settings(max_examples=100, deadline=None)
def test_kahan_add_tracks_fsum(xs):
    acc = comp = 0.0
    for x in xs:
        acc, comp = _kahan_add(acc, comp, x)
    exact = math.fsum(xs)
    assert abs(acc - exact) <= 4.4e-16 * sum(abs(x) for x in xs)
