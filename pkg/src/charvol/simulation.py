"""Samplers for the test models: stable jumps, CIR volatility, and both
stochastic-volatility and constant-coefficient paths with stable jumps.

The stochastic-volatility model is

    dc_t = cir_kappa (cir_theta - c_t) dt + cir_sigma sqrt(c_t) dW'_t
    X_t  = X_0 + int_0^t sqrt(c_s) dW_s + eta Y_t

with Y a symmetric beta-stable process, CF standardization
E exp(iu Y_t) = exp(-t |u|^beta). Time is measured in days; one day
holds 1/delta observation increments, each refined into `substeps`
internal Euler steps.

Determinism contract: a scenario's seed spawns three disjoint
sub-streams, one each for W, W' and Y, consumed day by day in a fixed
order and granularity. Changing the jump parameters therefore never
perturbs the volatility path, and replications built with split_seed
are independent of the order in which they run.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields

import numpy as np

from .core import SampledPath

__all__ = [
    "SimScenario",
    "SimOutput",
    "split_seed",
    "sample_stable_increments",
    "simulate_cir",
    "simulate_sv_path",
    "simulate_levy_const",
]


@dataclass(frozen=True)
class SimScenario:
    """Full specification of one stochastic-volatility-plus-jumps simulation."""

    delta: float
    days: int
    beta: float
    eta: float
    c0: float = 1.0
    cir_kappa: float = 0.03
    cir_theta: float = 1.0
    cir_sigma: float = 0.15
    substeps: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        per_day = 1.0 / self.delta
        if abs(per_day - round(per_day)) > 1e-6:
            raise ValueError("1/delta must be an integer number of observations per day")
        if not (isinstance(self.days, int) and self.days >= 1):
            raise ValueError("days must be a positive integer")
        if not 1.0 < self.beta < 2.0:
            raise ValueError("beta must lie in (1, 2)")
        if not self.eta >= 0:
            raise ValueError("eta must be nonnegative")
        if not self.c0 > 0:
            raise ValueError("c0 must be positive")
        if self.cir_kappa < 0 or self.cir_theta < 0 or self.cir_sigma < 0:
            raise ValueError("CIR parameters must be nonnegative")
        if not (isinstance(self.substeps, int) and self.substeps >= 1):
            raise ValueError("substeps must be a positive integer")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit nonnegative integer")
        if self.cir_sigma**2 > 2.0 * self.cir_kappa * self.cir_theta:
            warnings.warn(
                "vol-of-vol violates the Feller condition; the variance path "
                "will hit zero (full-truncation Euler handles this)",
                stacklevel=2,
            )

    @property
    def obs_per_day(self) -> int:
        return round(1.0 / self.delta)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "SimScenario":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        kwargs = dict(d)
        for key in ("days", "substeps", "seed"):
            if key in kwargs:
                kwargs[key] = int(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class SimOutput:
    """A simulated path, the true daily integrated variance, optional spot record."""

    path: SampledPath
    true_iv: np.ndarray
    true_spot: np.ndarray | None = None

    def __post_init__(self):
        iv = np.asarray(self.true_iv, dtype=float)
        if np.any(iv < 0):
            raise ValueError("true_iv entries must be nonnegative")
        iv = iv.copy()
        iv.flags.writeable = False
        object.__setattr__(self, "true_iv", iv)
        if self.true_spot is not None:
            sp = np.asarray(self.true_spot, dtype=float).copy()
            sp.flags.writeable = False
            object.__setattr__(self, "true_spot", sp)


def split_seed(seed: int, r: int) -> int:
    """Derived seed for replication r; independent of replication order."""
    if r < 0:
        raise ValueError("replication index must be nonnegative")
    return int(np.random.SeedSequence([seed, r]).generate_state(1, np.uint64)[0])


def _cms_standard(u: np.ndarray, e: np.ndarray, beta: float) -> np.ndarray:
    """Symmetric stable draw with CF exp(-|u|^beta) from uniform/exponential pairs.

    Chambers-Mallows-Stuck transform; the single formula covers the
    Cauchy (beta=1, reduces to tan u) and Gaussian (beta=2, reduces to
    2 sqrt(e) sin u) endpoints without special cases.
    """
    return (np.sin(beta * u) / np.cos(u) ** (1.0 / beta)) * (
        np.cos(u - beta * u) / e
    ) ** ((1.0 - beta) / beta)


def _stream_generators(seed: int) -> tuple[np.random.Generator, ...]:
    # fixed spawn order: W drives X, W' drives c, Y drives jumps
    ss_w, ss_wp, ss_y = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(ss_w),
        np.random.default_rng(ss_wp),
        np.random.default_rng(ss_y),
    )


def sample_stable_increments(beta: float, n: int, dt: float, seed) -> np.ndarray:
    """n i.i.d. increments of a symmetric beta-stable process over steps dt.

    CF of each draw is exp(-dt |u|^beta); beta=2 gives Normal(0, 2 dt)
    and beta=1 a Cauchy with scale dt. seed may be an integer or an
    already constructed numpy Generator.
    """
    if not 0.0 < beta <= 2.0:
        raise ValueError("beta must lie in (0, 2]")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError("n must be a positive integer")
    if not dt > 0:
        raise ValueError("dt must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n)
    e = rng.standard_exponential(n)
    return dt ** (1.0 / beta) * _cms_standard(u, e, beta)


def _kahan_add(acc, comp, term):
    """One compensated-summation step; returns updated (acc, comp)."""
    y = term - comp
    t = acc + y
    comp = (t - acc) - y
    return t, comp


def _sv_batch(
    scenario: SimScenario,
    seeds: list[int],
    want_x: bool = True,
    record_spot: bool = False,
):
    """Simulate a batch of independent paths of one scenario.

    Returns (values, true_iv, spot): values has shape (R, n_obs+1) or is
    None when want_x is False; true_iv is (R, days); spot is the raw
    fine-grid variance (R, days*obs_per_day*substeps + 1) or None.

    Each replication r consumes, per day and in this order, from its
    three private streams: substeps*obs_per_day normals for W', the same
    for W, then that many uniforms and exponentials for Y (the W and Y
    draws are skipped entirely when unused; streams are disjoint, so
    skipping one never shifts another). The variance recursion is
    vectorized across the batch with elementwise-exact operations only,
    so results never depend on how replications are batched. Fine-grid
    increments are folded into observation increments by compensated
    summation.
    """
    m = scenario.obs_per_day
    s = scenario.substeps
    spd = m * s
    days = scenario.days
    delta = scenario.delta
    dt = delta / s
    sdt = math.sqrt(dt)
    n_reps = len(seeds)
    use_jumps = want_x and scenario.eta > 0
    jump_scale = scenario.eta * dt ** (1.0 / scenario.beta)

    gens = [_stream_generators(sd) for sd in seeds]
    c = np.full(n_reps, float(scenario.c0))
    incs = np.empty((n_reps, days * m)) if want_x else None
    true_iv = np.empty((n_reps, days))
    spot = None
    if record_spot:
        spot = np.empty((n_reps, days * spd + 1))
        spot[:, 0] = c

    wp = np.empty((spd, n_reps))
    w = np.empty((spd, n_reps)) if want_x else None
    jmp = np.empty((spd, n_reps)) if use_jumps else None

    for d in range(days):
        for r, (gen_w, gen_wp, gen_y) in enumerate(gens):
            wp[:, r] = gen_wp.standard_normal(spd)
            if want_x:
                w[:, r] = gen_w.standard_normal(spd)
            if use_jumps:
                uu = gen_y.uniform(-np.pi / 2.0, np.pi / 2.0, spd)
                ee = gen_y.standard_exponential(spd)
                jmp[:, r] = jump_scale * _cms_standard(uu, ee, scenario.beta)

        prev_cp = np.maximum(c, 0.0)
        iv_day = np.zeros(n_reps)
        k = 0
        for i in range(m):
            acc = np.zeros(n_reps)
            comp = np.zeros(n_reps)
            for _ in range(s):
                sq = np.sqrt(prev_cp)
                if want_x:
                    term = sq * (sdt * w[k])
                    if use_jumps:
                        term = term + jmp[k]
                    acc, comp = _kahan_add(acc, comp, term)
                c = (
                    c
                    + scenario.cir_kappa * (scenario.cir_theta - prev_cp) * dt
                    + scenario.cir_sigma * sq * (sdt * wp[k])
                )
                cp = np.maximum(c, 0.0)
                iv_day = iv_day + 0.5 * dt * (prev_cp + cp)
                if record_spot:
                    spot[:, d * spd + k + 1] = c
                prev_cp = cp
                k += 1
            if want_x:
                incs[:, d * m + i] = acc
        true_iv[:, d] = iv_day

    values = None
    if want_x:
        values = np.empty((n_reps, days * m + 1))
        values[:, 0] = 0.0
        np.cumsum(incs, axis=1, out=values[:, 1:])
    return values, true_iv, spot


def simulate_cir(scenario: SimScenario) -> np.ndarray:
    """Raw variance path on the fine grid (days*obs_per_day*substeps + 1 points).

    Full-truncation Euler: the drift and diffusion read max(c, 0) but the
    recorded state is the unclipped c, which may dip below zero when the
    Feller condition fails. Consumes only the W' stream of the scenario
    seed, so the result matches the variance path inside simulate_sv_path
    bit for bit.
    """
    _, _, spot = _sv_batch(scenario, [scenario.seed], want_x=False, record_spot=True)
    return spot[0]


def simulate_sv_path(scenario: SimScenario, record_spot: bool = False) -> SimOutput:
    """One path of the stochastic-volatility-plus-stable-jumps model.

    Observation increments are sqrt(c)-weighted Brownian steps plus eta
    times stable increments, built on the refined grid and aggregated to
    the observation spacing; true_iv holds the daily trapezoid of
    max(c, 0) on the fine grid.
    """
    values, true_iv, spot = _sv_batch(
        scenario, [scenario.seed], want_x=True, record_spot=record_spot
    )
    path = SampledPath(values=values[0], delta=scenario.delta)
    return SimOutput(
        path=path,
        true_iv=true_iv[0],
        true_spot=spot[0] if record_spot else None,
    )


def simulate_levy_const(
    sigma: float, gamma: float, beta: float, delta: float, n: int, seed: int
) -> SimOutput:
    """Constant-coefficient model: increments sigma*sqrt(delta)*Z + gamma*(stable).

    true_iv is sigma**2 per day (the trailing entry is prorated when n
    increments do not fill a whole number of days). Used to validate the
    jump-bias formulas, where the estimator's gap from sigma**2 has a
    known closed form.
    """
    if not 1.0 < beta < 2.0:
        raise ValueError("beta must lie in (1, 2)")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError("n must be a positive integer")
    gen_w, _, gen_y = _stream_generators(seed)
    x = sigma * math.sqrt(delta) * gen_w.standard_normal(n)
    if gamma != 0.0:
        x = x + gamma * sample_stable_increments(beta, n, delta, gen_y)
    values = np.empty(n + 1)
    values[0] = 0.0
    np.cumsum(x, out=values[1:])
    path = SampledPath(values=values, delta=delta)

    total_t = n * delta
    full_days = int(math.floor(total_t + 1e-9))
    iv = [sigma**2] * full_days
    rem = total_t - full_days
    if rem > 1e-9 or full_days == 0:
        iv.append(sigma**2 * rem)
    return SimOutput(path=path, true_iv=np.array(iv))
