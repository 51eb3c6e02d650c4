"""Quantity-of-interest oracles for the benchmark experiments.

Three models: randomly generated expansions with seeded evaluation noise,
a damped cubic-stiffness oscillator under free vibration, and an
equivalent-circuit lithium-ion battery whose remaining useful life is the
time until the terminal voltage first drops below a cut-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .orthopoly import BasisSpec, eval_basis_matrix


class HorizonExceededError(RuntimeError):
    """Terminal voltage never crossed the cut-off within the horizon."""

    def __init__(self, horizon: float):
        self.horizon = horizon
        super().__init__(f"no cut-off crossing within {horizon} s")


# ---------------------------------------------------------------------------
# Manufactured expansions


@dataclass(frozen=True)
class ManufacturedModel:
    """Exact expansion with standard-normal coefficients and evaluation noise.

    noise_mode "relative" draws per-evaluation noise with standard deviation
    noise_rel * |u|; "absolute" uses standard deviation noise_rel outright,
    which against coefficients of norm sqrt(P) is small compared to the
    signal and is what the recovery benchmark expects.
    """

    coefficients: np.ndarray
    noise_rel: float = 0.03
    seed: int = 0
    noise_mode: str = "relative"


def manufactured_model(
    spec: BasisSpec,
    seed: int,
    noise_rel: float = 0.03,
    noise_mode: str = "relative",
) -> ManufacturedModel:
    if noise_mode not in ("relative", "absolute"):
        raise ValueError(f"unknown noise mode {noise_mode!r}")
    rng = np.random.default_rng(seed)
    return ManufacturedModel(rng.standard_normal(spec.n_terms), noise_rel, seed, noise_mode)


def manufactured_eval(
    model: ManufacturedModel,
    spec: BasisSpec,
    points,
    noise_seed: int | None = None,
) -> np.ndarray:
    """Model values at the points; noisy when a noise seed is given."""
    psi = eval_basis_matrix(spec, points)
    u = psi @ model.coefficients
    if noise_seed is not None and model.noise_rel > 0.0:
        eta = np.random.default_rng(noise_seed).standard_normal(u.shape)
        if model.noise_mode == "absolute":
            u = u + model.noise_rel * eta
        else:
            u = u * (1.0 + model.noise_rel * eta)
    return u


# ---------------------------------------------------------------------------
# Duffing oscillator


def duffing_frequencies(xi) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frequency, damping, and cubic-stiffness parameters from [-1,1]^3."""
    arr = np.asarray(xi, dtype=float)
    pts = arr.reshape(1, -1) if arr.ndim == 1 else arr
    w1 = 2.0 * math.pi * (1.0 + 0.2 * pts[:, 0])
    w2 = 0.05 * (1.0 + 0.05 * pts[:, 1])
    w3 = -0.5 * (1.0 + 0.5 * pts[:, 2])
    return w1, w2, w3


def duffing_trajectory(points, times, dt: float = 1e-3) -> np.ndarray:
    """Displacement histories u(xi, t) for a batch of inputs.

    Classical fourth-order integration of the two-state form with unit
    initial displacement and zero initial velocity.  Returns an array of
    shape (n_points, len(times)); times must be nondecreasing.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0) or np.any(np.diff(times) < 0.0):
        raise ValueError("times must be nonnegative and nondecreasing")
    w1, w2, w3 = duffing_frequencies(points)
    n = w1.shape[0]
    u = np.ones(n)
    v = np.zeros(n)
    two_zw = 2.0 * w1 * w2
    w1sq = w1 * w1

    def accel(u_, v_):
        return -two_zw * v_ - w1sq * (u_ + w3 * u_**3)

    out = np.empty((n, times.size))
    t_now = 0.0
    for j, t_target in enumerate(times):
        span = t_target - t_now
        if span > 1e-14:
            steps = max(1, int(round(span / dt)))
            h = span / steps
            for _ in range(steps):
                k1v = accel(u, v)
                u2 = u + 0.5 * h * v
                v2 = v + 0.5 * h * k1v
                k2v = accel(u2, v2)
                u3 = u + 0.5 * h * v2
                v3 = v + 0.5 * h * k2v
                k3v = accel(u3, v3)
                u4 = u + h * v3
                v4 = v + h * k3v
                k4v = accel(u4, v4)
                u = u + h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
                v = v + h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            t_now = t_target
        out[:, j] = u
    return out


def duffing_solve(xi, t: float, dt: float = 1e-3) -> float:
    """Displacement at time t for one input point."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return float(duffing_trajectory(np.asarray(xi, dtype=float).reshape(1, 3), [t], dt)[0, 0])


# ---------------------------------------------------------------------------
# Battery equivalent circuit


@dataclass(frozen=True)
class BatteryParams:
    """Equivalent-circuit cell constants."""

    r_sp0: float = 0.0272
    r_sp1: float = 1.087e-16
    r_sp2: float = 34.64
    r_s: float = 0.0067
    r_p: float = 1.0e4
    c_b0: float = 19.8
    c_b1: float = 1745.0
    c_b2: float = -1.5
    c_b3: float = -200.2
    c_s: float = 115.28
    c_sp: float = 316.69
    q_max: float = 31100.0
    c_max: float = 30807.0
    v_cutoff: float = 16.0


@dataclass(frozen=True)
class RULResult:
    """End-of-life time, remaining useful life, optional voltage history."""

    end_of_life: float
    rul: float
    trajectory: np.ndarray | None = None


@dataclass(frozen=True)
class BatteryModel:
    """Battery oracle: 7 standardized inputs -> remaining useful life.

    Inputs are (current; three charge-state perturbations; three process
    noise levels).  The first coordinate lives on [-1, 1] and maps affinely
    to the unit interval before scaling to current_range; the rest are
    standard normal.  States perturb the nominal trajectory multiplicatively
    by state_cov except where the nominal is zero, where the spread is the
    absolute state_sigma.  Process noise is constant per realization.
    """

    params: BatteryParams = field(default_factory=BatteryParams)
    current_range: tuple[float, float] = (0.0, 1.0)
    state_cov: float = 0.1
    state_sigma: float = 0.1
    process_sigmas: tuple[float, float, float] = (math.sqrt(0.1), 1.0e-2, 1.0e-3)
    nominal_current_quantile: float = 0.4
    dt: float = 0.01
    horizon: float = 1.0e5

    def soc(self, q_b):
        p = self.params
        return 1.0 - (p.q_max - q_b) / p.c_max

    def r_sp(self, soc):
        p = self.params
        return p.r_sp0 + p.r_sp1 * np.exp(p.r_sp2 * (1.0 - soc))

    def c_b(self, soc):
        p = self.params
        return p.c_b0 + soc * (p.c_b1 + soc * (p.c_b2 + soc * p.c_b3))

    def terminal_voltage(self, q):
        """V = V_b - V_sp - V_s for states q of shape (..., 3)."""
        p = self.params
        q = np.asarray(q, dtype=float)
        soc = self.soc(q[..., 0])
        v_b = q[..., 0] / self.c_b(soc)
        v_sp = q[..., 1] / p.c_sp
        v_s = q[..., 2] / p.c_s
        return v_b - v_sp - v_s

    def _rhs(self, q, current, noise):
        # q and the result are (3, n) with contiguous state rows.
        p = self.params
        q_b, q_sp, q_s = q
        soc = 1.0 - (p.q_max - q_b) / p.c_max
        v_b = q_b / (p.c_b0 + soc * (p.c_b1 + soc * (p.c_b2 + soc * p.c_b3)))
        v_sp = q_sp * (1.0 / p.c_sp)
        v_s = q_s * (1.0 / p.c_s)
        i_b = (v_b - v_sp - v_s) * (1.0 / p.r_p) + current
        r_sp = p.r_sp0 + p.r_sp1 * np.exp(p.r_sp2 * (1.0 - soc))
        return np.stack(
            [
                noise[0] - i_b,
                noise[1] + i_b - v_sp / r_sp,
                noise[2] + i_b - v_s * (1.0 / p.r_s),
            ]
        )

    def _rk4_step(self, q, current, noise, h):
        k1 = self._rhs(q, current, noise)
        k2 = self._rhs(q + (0.5 * h) * k1, current, noise)
        k3 = self._rhs(q + (0.5 * h) * k2, current, noise)
        k4 = self._rhs(q + h * k3, current, noise)
        return q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _voltage_cols(self, q):
        # Terminal voltage for states in (3, n) layout.
        p = self.params
        soc = 1.0 - (p.q_max - q[0]) / p.c_max
        v_b = q[0] / (p.c_b0 + soc * (p.c_b1 + soc * (p.c_b2 + soc * p.c_b3)))
        return v_b - q[1] * (1.0 / p.c_sp) - q[2] * (1.0 / p.c_s)

    def nominal_current(self) -> float:
        lo, hi = self.current_range
        return lo + (hi - lo) * self.nominal_current_quantile

    def nominal_state(self, t_p: float, dt: float | None = None) -> np.ndarray:
        """Noise-free charge states at t_p from full charge at mean current."""
        if t_p < 0.0:
            raise ValueError("prediction time must be nonnegative")
        h = self.dt if dt is None else dt
        q = np.array([[self.params.q_max], [0.0], [0.0]])
        zero = np.zeros((3, 1))
        current = np.array([self.nominal_current()])
        if t_p > 0.0:
            steps = max(1, int(round(t_p / h)))
            hh = t_p / steps
            for _ in range(steps):
                q = self._rk4_step(q, current, zero, hh)
        return q[:, 0]

    def input_map(self, xi_std, nominal: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Standardized inputs -> (current, initial states, process noise)."""
        arr = np.asarray(xi_std, dtype=float)
        pts = arr.reshape(1, -1) if arr.ndim == 1 else arr
        if pts.shape[1] != 7:
            raise ValueError("battery inputs have dimension 7")
        lo, hi = self.current_range
        current = lo + (hi - lo) * (pts[:, 0] + 1.0) / 2.0
        q0 = np.empty((pts.shape[0], 3))
        for k in range(3):
            if nominal[k] != 0.0:
                q0[:, k] = nominal[k] * (1.0 + self.state_cov * pts[:, 1 + k])
            else:
                q0[:, k] = self.state_sigma * pts[:, 1 + k]
        noise = pts[:, 4:7] * np.asarray(self.process_sigmas)
        return current, q0, noise

    def rul_batch(self, points, t_p: float, dt: float | None = None) -> np.ndarray:
        """Remaining useful life for a batch of standardized inputs."""
        h = self.dt if dt is None else dt
        if h <= 0.0:
            raise ValueError("dt must be positive")
        nominal = self.nominal_state(t_p, dt=h)
        current, q0, noise0 = self.input_map(points, nominal)
        q = np.ascontiguousarray(q0.T)
        noise = np.ascontiguousarray(noise0.T)
        n = q.shape[1]
        cutoff = self.params.v_cutoff
        eol = np.full(n, np.nan)
        v_prev = self._voltage_cols(q)
        already = v_prev < cutoff
        eol[already] = t_p
        active = ~already
        t = t_p
        while active.any():
            if t - t_p > self.horizon:
                raise HorizonExceededError(self.horizon)
            q = self._rk4_step(q, current, noise, h)
            v_next = self._voltage_cols(q)
            crossed = active & (v_next < cutoff)
            if crossed.any():
                frac = (v_prev[crossed] - cutoff) / (v_prev[crossed] - v_next[crossed])
                eol[crossed] = t + frac * h
                active &= ~crossed
            v_prev = v_next
            t += h
        return eol - t_p

    def rul(self, xi_std, t_p: float, dt: float | None = None, record: bool = False) -> RULResult:
        """Remaining useful life of one realization.

        With record=True the returned trajectory holds (time, voltage) rows
        sampled at the integrator step.
        """
        h = self.dt if dt is None else dt
        if h <= 0.0:
            raise ValueError("dt must be positive")
        nominal = self.nominal_state(t_p, dt=h)
        current, q0, noise0 = self.input_map(
            np.asarray(xi_std, dtype=float).reshape(1, 7), nominal
        )
        q = np.ascontiguousarray(q0.T)
        noise = np.ascontiguousarray(noise0.T)
        cutoff = self.params.v_cutoff
        t = t_p
        v_prev = float(self._voltage_cols(q)[0])
        history = [(t, v_prev)] if record else None
        if v_prev < cutoff:
            traj = np.asarray(history) if record else None
            return RULResult(end_of_life=t_p, rul=0.0, trajectory=traj)
        while True:
            if t - t_p > self.horizon:
                raise HorizonExceededError(self.horizon)
            q = self._rk4_step(q, current, noise, h)
            v_next = float(self._voltage_cols(q)[0])
            t += h
            if record:
                history.append((t, v_next))
            if v_next < cutoff:
                frac = (v_prev - cutoff) / (v_prev - v_next)
                eol = t - h + frac * h
                traj = np.asarray(history) if record else None
                return RULResult(end_of_life=eol, rul=eol - t_p, trajectory=traj)
            v_prev = v_next


def battery_input_map(
    xi_std,
    nominal: np.ndarray,
    model: BatteryModel | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Map standardized inputs to physical (current, states, process noise)."""
    return (model or BatteryModel()).input_map(xi_std, nominal)


def battery_rul(
    xi_std,
    t_p: float,
    dt: float | None = None,
    model: BatteryModel | None = None,
) -> RULResult:
    """Remaining useful life of one standardized realization."""
    return (model or BatteryModel()).rul(xi_std, t_p, dt=dt)


def battery_model_with(overrides: dict | None = None, **kwargs) -> BatteryModel:
    """BatteryModel with selected fields replaced; circuit constants intact."""
    model = BatteryModel(**kwargs) if kwargs else BatteryModel()
    if overrides:
        model = replace(model, **overrides)
    return model
