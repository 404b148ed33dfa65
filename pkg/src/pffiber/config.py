"""Run configuration: a single JSON file drives every subcommand.

All defaults are embedded here and dumped by ``pffiber print-config``, so a
figure or table is reproducible from one file.  The desk-scale default is the
24-mode grid (2 radial shells x 6 antipodal directions x 2 polarizations) at
total photon number <= 1; ``small_params`` is a 4-mode, N_max = 2 companion
used by the heavier property suites.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .modes import ModelParams


class ConfigError(ValueError):
    """Raised for unreadable or inconsistent run configurations."""


@dataclass(frozen=True)
class Tolerances:
    """Pinned numerical tolerances of the verification suite."""

    free_oracle: float = 1e-10
    clifford: float = 1e-10
    pauli_identity_rel: float = 1e-12
    sqrt_crossval: float = 1e-8
    hermiticity_rel: float = 1e-12
    theta_comm: float = 1e-12
    sandwich: float = 1e-9
    eig_residual: float = 1e-9
    cluster_rel: float = 1e-8
    parity: float = 1e-10
    psd_clamp: float = 1e-10
    property_suite: float = 1e-10
    pairing: float = 1e-8
    delta_free: float = 1e-10


@dataclass(frozen=True)
class VerifySettings:
    """Coupling ladder and randomized-draw settings of the verify suite."""

    e_values: tuple = (0.0, 0.05, 0.1)
    n_random_draws: int = 20
    n_sqrt_draws: int = 10
    n_property_vectors: int = 1000
    n_monotone_trials: int = 1000
    monotone_dim: int = 12
    e_star: float = 0.3
    e_max_random: float = 0.3
    seed: int = 2026
    break_symmetry: bool = False


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    small_params: ModelParams
    P_max: float = 2.0
    n_P: int = 11
    P_list: tuple | None = None  # explicit momenta override the radial ladder
    tasks: tuple = ("spectrum", "bounds", "kramers")
    tolerances: Tolerances = field(default_factory=Tolerances)
    verify: VerifySettings = field(default_factory=VerifySettings)
    convergence_ladder: tuple = ((0, 2), (1, 2), (2, 2))
    cache_path: str | None = None
    out_dir: str = "out"
    threads: int = 0  # 0 = use available cores

    def momenta(self) -> list:
        """The P sweep: explicit list, or a radial ladder along u = (1,0,0)."""
        if self.P_list is not None:
            return [np.asarray(p, dtype=float) for p in self.P_list]
        mags = np.linspace(0.0, self.P_max, self.n_P)
        return [np.array([m, 0.0, 0.0]) for m in mags]


def default_config() -> RunConfig:
    return RunConfig(
        params=ModelParams(
            e=0.1, gamma=0.5, M=1.0, m_ph=0.5, Lambda=1.0,
            n_shells=2, n_dirs=6, N_max=1,
        ),
        small_params=ModelParams(
            e=0.1, gamma=0.5, M=1.0, m_ph=0.5, Lambda=1.0,
            n_shells=1, n_dirs=2, N_max=2,
        ),
    )


def config_to_dict(cfg: RunConfig) -> dict:
    out = asdict(cfg)
    if out["P_list"] is not None:
        out["P_list"] = [list(p) for p in out["P_list"]]
    out["tasks"] = list(out["tasks"])
    out["convergence_ladder"] = [list(r) for r in out["convergence_ladder"]]
    out["verify"]["e_values"] = list(out["verify"]["e_values"])
    return out


def config_from_dict(data: dict) -> RunConfig:
    base = config_to_dict(default_config())
    unknown = set(data) - set(base)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {**base, **data}
    for key in ("params", "small_params", "tolerances", "verify"):
        if key in data:
            sub = base[key].copy()
            bad = set(data[key]) - set(sub)
            if bad:
                raise ConfigError(f"unknown keys in '{key}': {sorted(bad)}")
            sub.update(data[key])
            merged[key] = sub
    try:
        params = ModelParams(**merged["params"])
        small = ModelParams(**merged["small_params"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc
    return RunConfig(
        params=params,
        small_params=small,
        P_max=float(merged["P_max"]),
        n_P=int(merged["n_P"]),
        P_list=None
        if merged["P_list"] is None
        else tuple(tuple(float(x) for x in p) for p in merged["P_list"]),
        tasks=tuple(merged["tasks"]),
        tolerances=Tolerances(**merged["tolerances"]),
        verify=VerifySettings(
            **{
                **merged["verify"],
                "e_values": tuple(merged["verify"]["e_values"]),
            }
        ),
        convergence_ladder=tuple(tuple(r) for r in merged["convergence_ladder"]),
        cache_path=merged["cache_path"],
        out_dir=merged["out_dir"],
        threads=int(merged["threads"]),
    )


def load_config(path: str) -> RunConfig:
    """Parse a JSON config file; errors carry line/column diagnostics."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return config_from_dict(data)


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)
