"""Benchmark harness: the three experiments behind the CLI.

Each experiment draws training samples under several strategies, fits the
expansion coefficients by weighted least squares, and scores the surrogate
against a cached validation set.  Per-row seeds derive from the master seed
through a 64-bit mix of the row key, so reruns and worker counts never
change the output.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import __version__
from .design import default_candidate_count, greedy_design, hybrid_design
from .models import (
    BatteryModel,
    battery_model_with,
    duffing_trajectory,
    manufactured_eval,
    manufactured_model,
)
from .orthopoly import BasisSpec, eval_basis_matrix, hermite, hermite_basis, jacobi, legendre_basis
from .sampling import (
    SampleSet,
    draw_samples,
    sample_standard,
)
from .solver import fit, validation_error

_MASK = (1 << 64) - 1

EXPERIMENTS = ("recovery", "duffing", "battery")

STRATEGY_LABELS = (
    "standard",
    "lhs",
    "coh-opt",
    "asymptotic",
    "qmc",
    "rand-quad",
    "D-coh-opt",
    "A-coh-opt",
    "E-coh-opt",
    "D-opt",
)

_PLAIN_STRATEGY = {
    "standard": "standard",
    "lhs": "lhs",
    "coh-opt": "coherence_optimal",
    "asymptotic": "asymptotic",
    "qmc": "halton_qmc",
    "rand-quad": "randomized_quadrature",
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def mix64(state: int) -> int:
    """splitmix64 finalizer over one 64-bit state."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def derive_seed(master: int, *tokens) -> int:
    """Fold tokens (ints or strings) into the master seed, one mix per token."""
    state = master & _MASK
    for tok in tokens:
        if isinstance(tok, (int, np.integer)):
            v = int(tok) & _MASK
        else:
            digest = hashlib.blake2b(str(tok).encode(), digest_size=8).digest()
            v = int.from_bytes(digest, "little")
        state = mix64(state ^ v)
    return state


@dataclass
class ExperimentConfig:
    experiment: str = "recovery"
    family: str = "legendre"
    d: int = 2
    p: int = 15
    strategies: list = field(default_factory=lambda: ["standard", "lhs", "coh-opt", "D-coh-opt"])
    n_over_p: list = field(default_factory=lambda: [1.25, 1.5, 2.0, 3.0, 5.0, 10.0])
    n_values: list = field(default_factory=list)
    nc_rule: str = "4N"
    replications: int = 60
    n_validation: int = 10000
    seed: int = 2024
    workers: int = 1
    noise_rel: float = 0.03
    noise_mode: str = "absolute"
    recovery_threshold: float = 0.02
    # Oscillator settings
    times: list = field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0])
    duffing_dt: float = 1e-3
    p_sweep: list = field(default_factory=list)
    p_sweep_ratio: float = 20.0
    # Battery settings
    p_values: list = field(default_factory=lambda: [2, 3])
    tp_values: list = field(default_factory=lambda: [0.0, 200.0, 400.0, 600.0])
    battery_dt: float = 0.5
    current_low: float = 0.0
    current_high: float = 20.0
    state_cov: float = 0.1
    state_sigma: float = 0.1
    process_sigmas: list = field(default_factory=lambda: [math.sqrt(0.1), 1e-2, 1e-3])
    horizon: float = 2.0e4
    beta_alpha: float = 21.2
    beta_beta: float = 31.8
    pdf_export: bool = False
    pdf_strategy: str = "D-coh-opt"
    pdf_p: int = 3
    pdf_samples: int = 20000
    pdf_bins: int = 60

    def echo(self) -> dict:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if isinstance(val, list):
                out[f.name] = ", ".join(str(v) for v in val)
            else:
                out[f.name] = str(val)
        return out


_LIST_FIELDS = {
    "strategies": str,
    "n_over_p": float,
    "n_values": int,
    "times": float,
    "p_sweep": int,
    "p_values": int,
    "tp_values": float,
    "process_sigmas": float,
}

_BOOL_FIELDS = {"pdf_export"}


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse the flat key = value format with comma-separated lists."""
    cfg = ExperimentConfig()
    known = {f.name: f.type for f in fields(cfg)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            setattr(cfg, key, _convert(key, value, getattr(cfg, key)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    validate_config(cfg)
    return cfg


def _convert(key: str, value: str, current):
    if key in _LIST_FIELDS:
        conv = _LIST_FIELDS[key]
        items = [v.strip() for v in value.split(",") if v.strip()]
        return [conv(v) for v in items]
    if key in _BOOL_FIELDS:
        low = value.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"expected boolean, got {value!r}")
    if isinstance(current, bool):
        raise ValueError("unreachable")
    if isinstance(current, int):
        return int(value)
    if isinstance(current, float):
        return float(value)
    return value


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    if cfg.family not in ("legendre", "hermite"):
        raise ConfigError(f"unknown family {cfg.family!r}")
    for s in cfg.strategies:
        if s not in STRATEGY_LABELS:
            raise ConfigError(f"unknown strategy {s!r}")
    if cfg.replications < 1:
        raise ConfigError("replications must be at least 1")
    if cfg.nc_rule not in ("4N", "1.5PlogP"):
        raise ConfigError(f"unknown candidate rule {cfg.nc_rule!r}")
    if any(v <= 0 for v in cfg.n_over_p) or any(v <= 0 for v in cfg.n_values):
        raise ConfigError("sample sizes must be positive")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    if cfg.noise_mode not in ("relative", "absolute"):
        raise ConfigError(f"unknown noise mode {cfg.noise_mode!r}")


@dataclass
class ResultTable:
    columns: list
    rows: list
    config_echo: dict
    timings: list = field(default_factory=list)

    @property
    def n_errors(self) -> int:
        err_col = self.columns.index("error")
        return sum(1 for row in self.rows if row[err_col])

    def write_csv(self, path_or_buf) -> None:
        if hasattr(path_or_buf, "write"):
            self._write(path_or_buf)
        else:
            with open(path_or_buf, "w", encoding="utf-8") as fh:
                self._write(fh)

    def _write(self, fh) -> None:
        fh.write(f"# version = pcls {__version__}\n")
        for key in sorted(self.config_echo):
            fh.write(f"# {key} = {self.config_echo[key]}\n")
        fh.write(",".join(self.columns) + "\n")
        for row in self.rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")

    def write_timings_csv(self, path_or_buf) -> None:
        """Wall-clock seconds per work unit; separate so result files stay
        byte-identical across reruns."""
        rows = self.timings
        if hasattr(path_or_buf, "write"):
            _write_timings(rows, path_or_buf)
        else:
            with open(path_or_buf, "w", encoding="utf-8") as fh:
                _write_timings(rows, fh)

    def write_aggregate_csv(self, path_or_buf) -> None:
        """Mean and standard deviation of the error column per group."""
        if hasattr(path_or_buf, "write"):
            self._write_aggregate(path_or_buf)
        else:
            with open(path_or_buf, "w", encoding="utf-8") as fh:
                self._write_aggregate(fh)

    def _write_aggregate(self, fh) -> None:
        cols = self.columns
        rep_i = cols.index("replicate")
        err_i = cols.index("error")
        val_i = cols.index("value")
        key_cols = [i for i in range(len(cols)) if i not in (rep_i, err_i, val_i)
                    and cols[i] not in ("recovered", "delta_hat", "cond")]
        groups: dict = {}
        order: list = []
        for row in self.rows:
            if row[err_i]:
                continue
            key = tuple(row[i] for i in key_cols)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(float(row[val_i]))
        header = [cols[i] for i in key_cols] + ["mean", "std", "count"]
        fh.write(",".join(header) + "\n")
        for key in order:
            vals = np.asarray(groups[key])
            cells = [_cell(v) for v in key]
            cells += [repr(float(vals.mean())), repr(float(vals.std(ddof=0))), str(vals.size)]
            fh.write(",".join(cells) + "\n")


def _write_timings(rows, fh) -> None:
    fh.write("unit,seconds\n")
    for unit, seconds in rows:
        fh.write(f"{unit},{seconds:.3f}\n")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def make_basis(cfg: ExperimentConfig, p: int | None = None) -> BasisSpec:
    p_eff = cfg.p if p is None else p
    if cfg.experiment == "battery":
        fams = [jacobi(cfg.beta_beta - 1.0, cfg.beta_alpha - 1.0)] + [hermite()] * 6
        return BasisSpec.total_degree(fams, p_eff)
    if cfg.family == "legendre":
        return legendre_basis(cfg.d, p_eff)
    return hermite_basis(cfg.d, p_eff)


def make_battery_model(cfg: ExperimentConfig) -> BatteryModel:
    return battery_model_with(
        dict(
            current_range=(cfg.current_low, cfg.current_high),
            state_cov=cfg.state_cov,
            state_sigma=cfg.state_sigma,
            process_sigmas=tuple(cfg.process_sigmas),
            nominal_current_quantile=cfg.beta_alpha / (cfg.beta_alpha + cfg.beta_beta),
            dt=cfg.battery_dt,
            horizon=cfg.horizon,
        )
    )


def candidate_count(cfg: ExperimentConfig, n: int, n_terms: int) -> int:
    if cfg.nc_rule == "4N":
        return 4 * n
    return max(default_candidate_count(n_terms), n)


def training_samples(
    spec: BasisSpec, strategy: str, n: int, seed: int, n_c: int
) -> SampleSet:
    """Draw one training sample set under a harness strategy label."""
    if strategy in _PLAIN_STRATEGY:
        return draw_samples(spec, _PLAIN_STRATEGY[strategy], n, seed)
    if strategy in ("D-coh-opt", "A-coh-opt", "E-coh-opt"):
        chosen, _ = hybrid_design(spec, n, n_c, strategy[0], seed)
        return chosen
    if strategy == "D-opt":
        candidates = sample_standard(spec, n_c, seed)
        psi_c = eval_basis_matrix(spec, candidates.points)
        state = greedy_design(psi_c, n, "D")
        rows = np.asarray(state.selected_rows)
        return SampleSet(
            points=candidates.points[rows].copy(),
            weights=np.ones(n),
            strategy="D_optimal_standard_candidates",
            seed=seed,
            metadata={"n_candidates": n_c},
        )
    raise ConfigError(f"unknown strategy {strategy!r}")


def _n_grid(cfg: ExperimentConfig, n_terms: int) -> list[int]:
    if cfg.n_values:
        return [int(v) for v in cfg.n_values]
    return [max(n_terms, int(round(r * n_terms))) for r in cfg.n_over_p]


# ---------------------------------------------------------------------------
# Recovery experiment

_WORKER_CTX: dict = {}


def _init_worker(ctx: dict) -> None:
    _WORKER_CTX.update(ctx)


def run_recovery(cfg: ExperimentConfig) -> ResultTable:
    """Reconstruction probability of randomly generated expansions."""
    if cfg.experiment != "recovery":
        raise ConfigError("config experiment must be 'recovery'")
    spec = make_basis(cfg)
    val_seed = derive_seed(cfg.seed, "recovery", "validation")
    val_points = spec.sample_input(np.random.default_rng(val_seed), cfg.n_validation)
    n_grid = _n_grid(cfg, spec.n_terms)
    units = [(strategy, n) for strategy in cfg.strategies for n in n_grid]
    ctx = {"cfg": cfg, "val_points": val_points}
    results = _run_units(cfg, units, _recovery_unit, ctx)
    columns = [
        "strategy", "N", "replicate", "value", "recovered", "delta_hat", "cond", "error",
    ]
    rows, timings = _collect(units, results)
    return ResultTable(columns, rows, cfg.echo(), timings)


def _recovery_unit(unit) -> tuple[list, float]:
    strategy, n = unit
    cfg: ExperimentConfig = _WORKER_CTX["cfg"]
    val_points = _WORKER_CTX["val_points"]
    spec = make_basis(cfg)
    psi_val = eval_basis_matrix(spec, val_points)
    n_c = candidate_count(cfg, n, spec.n_terms)
    t0 = time.perf_counter()
    rows = []
    for rep in range(cfg.replications):
        model_seed = derive_seed(cfg.seed, "recovery", "model", rep)
        model = manufactured_model(spec, model_seed, cfg.noise_rel, cfg.noise_mode)
        train_seed = derive_seed(cfg.seed, "recovery", strategy, n, rep, "train")
        noise_seed = derive_seed(cfg.seed, "recovery", strategy, n, rep, "noise")
        try:
            ss = training_samples(spec, strategy, n, train_seed, n_c)
            u = manufactured_eval(model, spec, ss.points, noise_seed)
            res = fit(eval_basis_matrix(spec, ss.points), ss.weights, u)
            u_val = psi_val @ model.coefficients
            rel = validation_error(res.coefficients, psi_val, u_val)
            rows.append(
                (strategy, n, rep, rel, rel <= cfg.recovery_threshold,
                 res.stability.dist_identity, res.stability.cond, "")
            )
        except Exception as exc:  # per-row failure, run continues
            rows.append((strategy, n, rep, None, False, None, None, _errmsg(exc)))
    return rows, time.perf_counter() - t0


# ---------------------------------------------------------------------------
# Oscillator experiment


def run_duffing(cfg: ExperimentConfig) -> ResultTable:
    """Relative displacement error of the oscillator surrogate over time."""
    if cfg.experiment != "duffing":
        raise ConfigError("config experiment must be 'duffing'")
    if cfg.family != "legendre":
        raise ConfigError("the oscillator uses uniform inputs")
    times = sorted(cfg.times)
    base_spec = make_basis(cfg)
    val_seed = derive_seed(cfg.seed, "duffing", "validation")
    val_points = base_spec.sample_input(np.random.default_rng(val_seed), cfg.n_validation)
    val_traj = duffing_trajectory(val_points, times, cfg.duffing_dt)

    units = [(strategy, cfg.p, n) for strategy in cfg.strategies
             for n in _n_grid(cfg, base_spec.n_terms)]
    for p_alt in cfg.p_sweep:
        spec_alt = make_basis(cfg, p=p_alt)
        units.append(("standard", p_alt, int(round(cfg.p_sweep_ratio * spec_alt.n_terms))))

    ctx = {"cfg": cfg, "val_points": val_points, "val_traj": val_traj, "times": times}
    results = _run_units(cfg, units, _duffing_unit, ctx)
    columns = [
        "strategy", "p", "N", "t", "replicate", "value", "delta_hat", "cond", "error",
    ]
    rows, timings = _collect(units, results)
    return ResultTable(columns, rows, cfg.echo(), timings)


def _duffing_unit(unit) -> tuple[list, float]:
    strategy, p, n = unit
    cfg: ExperimentConfig = _WORKER_CTX["cfg"]
    val_points = _WORKER_CTX["val_points"]
    val_traj = _WORKER_CTX["val_traj"]
    times = _WORKER_CTX["times"]
    spec = make_basis(cfg, p=p)
    psi_val = eval_basis_matrix(spec, val_points)
    n_c = candidate_count(cfg, n, spec.n_terms)
    t0 = time.perf_counter()

    samples = []
    errors: dict[int, str] = {}
    for rep in range(cfg.replications):
        seed = derive_seed(cfg.seed, "duffing", strategy, p, n, rep, "train")
        try:
            samples.append(training_samples(spec, strategy, n, seed, n_c))
        except Exception as exc:
            samples.append(None)
            errors[rep] = _errmsg(exc)

    # One batched integration over every replicate's training points.
    stacked = [s.points for s in samples if s is not None]
    if stacked:
        all_traj = duffing_trajectory(np.vstack(stacked), times, cfg.duffing_dt)
    rows = []
    offset = 0
    for rep in range(cfg.replications):
        ss = samples[rep]
        if ss is None:
            for t in times:
                rows.append((strategy, p, n, t, rep, None, None, None, errors[rep]))
            continue
        traj = all_traj[offset : offset + n]
        offset += n
        try:
            psi = eval_basis_matrix(spec, ss.points)
            for j, t in enumerate(times):
                res = fit(psi, ss.weights, traj[:, j])
                rel = validation_error(res.coefficients, psi_val, val_traj[:, j])
                rows.append(
                    (strategy, p, n, t, rep, rel,
                     res.stability.dist_identity, res.stability.cond, "")
                )
        except Exception as exc:
            for t in times:
                rows.append((strategy, p, n, t, rep, None, None, None, _errmsg(exc)))
    return rows, time.perf_counter() - t0


# ---------------------------------------------------------------------------
# Battery experiment


def run_battery(cfg: ExperimentConfig) -> ResultTable:
    """Relative error in the remaining-useful-life surrogate."""
    if cfg.experiment != "battery":
        raise ConfigError("config experiment must be 'battery'")
    model = make_battery_model(cfg)
    val_seed = derive_seed(cfg.seed, "battery", "validation")
    spec0 = make_basis(cfg, p=1)
    val_points = spec0.sample_input(np.random.default_rng(val_seed), cfg.n_validation)
    val_ruls = {
        t_p: model.rul_batch(val_points, t_p) for t_p in cfg.tp_values
    }
    units = [
        (strategy, p, t_p)
        for strategy in cfg.strategies
        for p in cfg.p_values
        for t_p in cfg.tp_values
    ]
    ctx = {"cfg": cfg, "val_points": val_points, "val_ruls": val_ruls}
    results = _run_units(cfg, units, _battery_unit, ctx)
    columns = [
        "strategy", "p", "t_p", "N", "replicate", "value", "delta_hat", "cond", "error",
    ]
    rows, timings = _collect(units, results)
    table = ResultTable(columns, rows, cfg.echo(), timings)
    if cfg.pdf_export:
        table.pdf_overlay = battery_pdf_overlay(cfg)  # type: ignore[attr-defined]
    return table


def _battery_unit(unit) -> tuple[list, float]:
    strategy, p, t_p = unit
    cfg: ExperimentConfig = _WORKER_CTX["cfg"]
    val_points = _WORKER_CTX["val_points"]
    val_ruls = _WORKER_CTX["val_ruls"][t_p]
    model = make_battery_model(cfg)
    spec = make_basis(cfg, p=p)
    n = spec.n_terms + 1
    psi_val = eval_basis_matrix(spec, val_points)
    n_c = candidate_count(cfg, n, spec.n_terms)
    t0 = time.perf_counter()

    samples = []
    errors: dict[int, str] = {}
    for rep in range(cfg.replications):
        seed = derive_seed(cfg.seed, "battery", strategy, p, t_p, rep, "train")
        try:
            samples.append(training_samples(spec, strategy, n, seed, n_c))
        except Exception as exc:
            samples.append(None)
            errors[rep] = _errmsg(exc)

    stacked = [s.points for s in samples if s is not None]
    all_ruls = model.rul_batch(np.vstack(stacked), t_p) if stacked else None
    rows = []
    offset = 0
    for rep in range(cfg.replications):
        ss = samples[rep]
        if ss is None:
            rows.append((strategy, p, t_p, n, rep, None, None, None, errors[rep]))
            continue
        u = all_ruls[offset : offset + n]
        offset += n
        try:
            res = fit(eval_basis_matrix(spec, ss.points), ss.weights, u)
            if np.linalg.norm(val_ruls) == 0.0:
                rel = float(np.linalg.norm(val_ruls - psi_val @ res.coefficients))
            else:
                rel = validation_error(res.coefficients, psi_val, val_ruls)
            rows.append(
                (strategy, p, t_p, n, rep, rel,
                 res.stability.dist_identity, res.stability.cond, "")
            )
        except Exception as exc:
            rows.append((strategy, p, t_p, n, rep, None, None, None, _errmsg(exc)))
    return rows, time.perf_counter() - t0


def battery_pdf_overlay(cfg: ExperimentConfig):
    """Histogram overlay of surrogate-sampled versus direct-simulation RUL.

    Returns (columns, rows) for CSV emission: one row per (t_p, bin).
    """
    model = make_battery_model(cfg)
    spec = make_basis(cfg, p=cfg.pdf_p)
    n = spec.n_terms + 1
    n_c = candidate_count(cfg, n, spec.n_terms)
    rows = []
    for t_p in cfg.tp_values:
        seed = derive_seed(cfg.seed, "battery", "pdf", cfg.pdf_strategy, cfg.pdf_p, t_p)
        ss = training_samples(spec, cfg.pdf_strategy, n, seed, n_c)
        u = model.rul_batch(ss.points, t_p)
        res = fit(eval_basis_matrix(spec, ss.points), ss.weights, u)
        mc_seed = derive_seed(cfg.seed, "battery", "pdf", "mc", t_p)
        pts = spec.sample_input(np.random.default_rng(mc_seed), cfg.pdf_samples)
        surrogate = eval_basis_matrix(spec, pts) @ res.coefficients
        mc_seed2 = derive_seed(cfg.seed, "battery", "pdf", "mc-direct", t_p)
        pts2 = spec.sample_input(np.random.default_rng(mc_seed2), cfg.pdf_samples)
        direct = model.rul_batch(pts2, t_p)
        lo = min(float(surrogate.min()), float(direct.min()))
        hi = max(float(surrogate.max()), float(direct.max()))
        edges = np.linspace(lo, hi, cfg.pdf_bins + 1)
        dens_s, _ = np.histogram(surrogate, bins=edges, density=True)
        dens_d, _ = np.histogram(direct, bins=edges, density=True)
        for b in range(cfg.pdf_bins):
            rows.append((t_p, edges[b], edges[b + 1], dens_s[b], dens_d[b]))
    columns = ["t_p", "bin_left", "bin_right", "density_surrogate", "density_direct"]
    return columns, rows


def write_pdf_overlay_csv(overlay, path_or_buf) -> None:
    columns, rows = overlay
    if hasattr(path_or_buf, "write"):
        fh = path_or_buf
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(float(v)) for v in row) + "\n")
    else:
        with open(path_or_buf, "w", encoding="utf-8") as fh:
            write_pdf_overlay_csv(overlay, fh)


# ---------------------------------------------------------------------------
# Unit scheduling


def _run_units(cfg: ExperimentConfig, units, fn, ctx) -> list:
    if cfg.workers <= 1 or len(units) <= 1:
        _init_worker(ctx)
        try:
            return [fn(u) for u in units]
        finally:
            _WORKER_CTX.clear()
    with ProcessPoolExecutor(
        max_workers=cfg.workers, initializer=_init_worker, initargs=(ctx,)
    ) as pool:
        return list(pool.map(fn, units))


def _collect(units, results) -> tuple[list, list]:
    rows: list = []
    timings: list = []
    for unit, (unit_rows, seconds) in zip(units, results):
        rows.extend(unit_rows)
        timings.append(("/".join(str(u) for u in unit), seconds))
    return rows, timings


def _errmsg(exc: Exception) -> str:
    text = f"{type(exc).__name__}: {exc}"
    return text.replace("\n", " ").replace(",", ";")


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    if cfg.experiment == "recovery":
        return run_recovery(cfg)
    if cfg.experiment == "duffing":
        return run_duffing(cfg)
    return run_battery(cfg)
