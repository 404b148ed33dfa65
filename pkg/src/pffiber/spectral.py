"""Low-lying spectra, degeneracy clusters, and the one-photon gap function.

The ground energy E(P) is the bottom of the spectrum of the fiber
Hamiltonian; E1(P) is the first level strictly above the ground cluster; the
gap function is

    Delta(P) = min over trial k of  E(P - k) + omega(k) - E(P),

approximated on a finite trial set that always contains k = 0 (so
Delta(P) <= omega(0) = m_ph exactly) and the grid wavevectors.

Eigensolves are dense up to ``dense_dim_limit``; above that a Krylov solver
is used for the lowest part of the spectrum, with the dense path as the
reference on overlapping sizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .hamiltonian import FiberModel, _as_model, build_H
from .modes import ModelParams, dispersion

DENSE_DIM_LIMIT = 6000
DEFAULT_CLUSTER_TOL = 1e-8
P_QUANTUM = 1e-12


class EigensolverError(RuntimeError):
    """Raised when an eigensolve fails or violates its residual contract."""


def low_spectrum(h: np.ndarray, m: int, residual_tol: float = 1e-9):
    """m smallest eigenvalues with orthonormal eigenvectors.

    Residuals ||H v - lambda v|| are checked against
    ``residual_tol * ||H||``.
    """
    dim = h.shape[0]
    if not 1 <= m <= dim:
        raise ValueError(f"requested {m} eigenpairs of a dimension-{dim} matrix")
    try:
        vals, vecs = scipy.linalg.eigh(h, subset_by_index=[0, m - 1])
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise EigensolverError(f"dense eigensolver failed: {exc}") from exc
    scale = float(np.linalg.norm(h, ord=2)) if dim else 0.0
    res = np.linalg.norm(h @ vecs - vecs * vals[None, :], axis=0)
    if np.any(res > residual_tol * max(scale, 1e-300)):
        raise EigensolverError(
            f"eigenpair residual {res.max():.3e} exceeds {residual_tol:.1e} * ||H||"
        )
    return vals, vecs


def low_spectrum_iterative(h: np.ndarray, m: int):
    """Krylov path for dimensions beyond the dense limit."""
    if m >= h.shape[0]:  # eigsh needs k < dim; tiny blocks solve densely
        return low_spectrum(h, min(m, h.shape[0]))
    vals, vecs = scipy.sparse.linalg.eigsh(h, k=m, which="SA")
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


def cluster_degeneracy(eigenvalues, scale_tol: float = DEFAULT_CLUSTER_TOL):
    """Greedy clustering of an ascending eigenvalue list.

    Consecutive values within ``scale_tol * max(1, |value|)`` join a cluster;
    returns a list of (cluster mean, multiplicity).
    """
    vals = np.asarray(eigenvalues, dtype=float)
    if np.any(np.diff(vals) < 0):
        raise ValueError("eigenvalues must be ascending")
    clusters = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > scale_tol * max(
            1.0, abs(vals[i])
        ):
            chunk = vals[start:i]
            clusters.append((float(chunk.mean()), len(chunk)))
            start = i
    return clusters


def _quantize_P(P) -> tuple:
    return tuple(int(round(x / P_QUANTUM)) for x in np.asarray(P, dtype=float))


def params_fingerprint(params: ModelParams) -> str:
    """Stable, lossless string key for a parameter set (17 significant digits)."""
    from dataclasses import asdict as _asdict

    items = sorted(_asdict(params).items())
    return ";".join(
        f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}" for k, v in items
    )


class EnergyCache:
    """Map (params fingerprint, quantized P) -> (E, E1, multiplicity).

    Values are deterministic functions of the key, so last-writer-wins races
    between sweep workers are benign.  Optionally persisted to a JSON file;
    floats round-trip losslessly (repr serialization), so a cache hit equals
    recomputation bit for bit at a fixed build.
    """

    def __init__(self, path=None):
        self._data = {}
        self.path = path
        self.hits = 0
        self.misses = 0
        if path is not None:
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    raw = json.load(fh)
                self._data = {
                    tuple(json.loads(k)): tuple(v) for k, v in raw.items()
                }
            except (FileNotFoundError, json.JSONDecodeError):
                self._data = {}

    @staticmethod
    def key(params: ModelParams, P) -> tuple:
        return (params_fingerprint(params),) + _quantize_P(P)

    def get(self, key):
        got = self._data.get(key)
        if got is not None:
            self.hits += 1
        return got

    def put(self, key, value):
        self.misses += 1
        self._data[key] = value

    def save(self):
        if self.path is None:
            return
        raw = {json.dumps(list(k)): list(v) for k, v in self._data.items()}
        with open(self.path, "w", encoding="utf-8") as fh:
            json.dump(raw, fh)


def ground_data(
    P,
    params_or_model,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    cache: EnergyCache | None = None,
    dense_dim_limit: int = DENSE_DIM_LIMIT,
):
    """(E, E1, ground multiplicity) of the fiber Hamiltonian at momentum P.

    E is the smallest eigenvalue; the multiplicity comes from greedy
    clustering at ``cluster_tol``; E1 is the smallest eigenvalue strictly
    above the ground cluster (None if the truncation holds no second level).
    """
    model = _as_model(params_or_model)
    key = None
    if cache is not None:
        key = EnergyCache.key(model.params, P)
        hit = cache.get(key)
        if hit is not None:
            return hit
    h = build_H(P, model)
    dim = h.shape[0]
    if dim <= dense_dim_limit:
        vals = scipy.linalg.eigvalsh(h)
    else:
        m = min(dim, 16)
        while True:
            vals, _ = low_spectrum_iterative(h, m)
            done = cluster_degeneracy(vals, cluster_tol)
            if len(done) > 1 or m == dim:
                break
            m = min(dim, 2 * m)
            if m > 256:
                raise EigensolverError(
                    "no distinct level found within the eigencount cap"
                )
    clusters = cluster_degeneracy(vals, cluster_tol)
    e0 = float(vals[0])
    mult = clusters[0][1]
    e1 = float(vals[mult]) if len(vals) > mult else None
    out = (e0, e1, mult)
    if cache is not None:
        cache.put(key, out)
    return out


def default_trial_set(model: FiberModel):
    """{0} united with the grid wavevectors (one entry per k-point)."""
    ks = [np.zeros(3)]
    seen = set()
    for row in model.table.k:
        key = tuple(row)
        if key not in seen:
            seen.add(key)
            ks.append(np.array(row))
    return ks


def delta_gap(
    P,
    params_or_model,
    trial_k_set=None,
    cache: EnergyCache | None = None,
) -> float:
    """min over trial k of E(P-k) + omega(k) - E(P).

    Monotone under trial-set enlargement; the k = 0 member makes
    Delta(P) <= m_ph exact.
    """
    model = _as_model(params_or_model)
    P = np.asarray(P, dtype=float)
    if trial_k_set is None:
        trial_k_set = default_trial_set(model)
    e_p, _, _ = ground_data(P, model, cache=cache)
    best = np.inf
    for k in trial_k_set:
        k = np.asarray(k, dtype=float)
        e_shift, _, _ = ground_data(P - k, model, cache=cache)
        best = min(best, e_shift + float(dispersion(k, model.params.m_ph)) - e_p)
    return float(best)


def free_delta_gap(P, params: ModelParams, trial_k_set) -> float:
    """Closed-form e = 0 evaluation of the gap over the same trial set."""
    P = np.asarray(P, dtype=float)
    g, M, m_ph = params.gamma, params.M, params.m_ph
    e_p = g * np.sqrt(P @ P + M * M)
    best = np.inf
    for k in trial_k_set:
        k = np.asarray(k, dtype=float)
        val = (
            g * np.sqrt((P - k) @ (P - k) + M * M)
            + float(dispersion(k, m_ph))
            - e_p
        )
        best = min(best, val)
    return float(best)


@dataclass
class SpectrumReport:
    """Per-momentum spectral summary serialized by the sweep drivers."""

    P: tuple
    E: float
    E1: float | None
    ground_multiplicity: int
    delta: float
    sigma_minus: float | None = None
    eigencount_below_sigma: int | None = None
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def convergence_study(P, params: ModelParams, ladder):
    """E(P) along a refinement ladder of (N_max, n_shells) rungs.

    Returns a list of dicts with the rung spec, dimension, energy, and the
    difference to the previous rung.  Reported as a trend; truncated E(P) is
    not proven monotone under refinement.
    """
    rows = []
    prev = None
    for n_max, n_shells in ladder:
        rung = params.replace(N_max=n_max, n_shells=n_shells)
        model = _as_model(rung)
        e0, _, _ = ground_data(P, model)
        rows.append(
            {
                "N_max": n_max,
                "n_shells": n_shells,
                "dim": 2 * model.dim,
                "E": e0,
                "diff_prev": None if prev is None else e0 - prev,
            }
        )
        prev = e0
    return rows
