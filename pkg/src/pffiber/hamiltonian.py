"""Assembly of the fiber Hamiltonians on (spin space) x (truncated Fock space).

Central objects, all dense matrices:

- v_j(P)   = P_j - dGamma(k_j) + A(0)_j            (Fock space, real symmetric)
- T(P)     = (sigma . v)^2                          (C^2 tensor Fock)
- D(P)     = alpha . v + M beta                     (C^4 tensor Fock)
- H(P)     = gamma sqrt(T(P) + M^2) + H_f           (C^2 tensor Fock)
- H_SL(P)  = gamma sqrt(sum_j v_j^2 + M^2) + H_f    (spinless, Fock space)
- H_0(P)   = gamma sqrt((P - P_f)^2 + M^2) + H_f    (free, diagonal)

Kronecker convention: spin index slow, Fock index fast, i.e.
``np.kron(spin_matrix, fock_matrix)``.

The matrix square root has two independent implementations: the spectral
reference ``op_sqrt_eig`` and the resolvent-integral quadrature
``op_sqrt_quad`` evaluating (1/pi) int_0^inf dt t^{-1/2} a^2 / (t + a^2)
via the substitution t = scale * s / (1 - s), s = sin^2(theta), which maps the
integral onto a smooth integrand on [0, pi/2] handled by doubled
Gauss-Legendre panels.

All builders are pure; matrices are freshly allocated per call, so sharing
across threads is safe.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    FockBasis,
    dgamma_diag,
    enumerate_basis,
    field_sum,
    hermitize,
    require_hermitian,
)
from .modes import (
    CouplingNorms,
    FormFactorTable,
    ModelParams,
    ModeSet,
    build_mode_set,
    coupling_norms,
    form_factors,
)

SIGMA = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)

# standard Dirac representation: alpha_j = offdiag(sigma_j, sigma_j),
# beta = diag(1, 1, -1, -1)
ALPHA = np.zeros((3, 4, 4), dtype=complex)
for _j in range(3):
    ALPHA[_j, :2, 2:] = SIGMA[_j]
    ALPHA[_j, 2:, :2] = SIGMA[_j]
BETA = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)

ID2 = np.eye(2)

DEFAULT_PSD_TOL = 1e-10


class NotPositiveSemidefiniteError(ValueError):
    """Raised when a matrix fed to a square root is negative beyond tolerance."""


class QuadratureNotConverged(RuntimeError):
    """Raised when the resolvent-integral square root stalls above tolerance."""


@dataclass(frozen=True, eq=False)
class FiberModel:
    """Cached per-parameter assembly: mode set, couplings, field operators."""

    params: ModelParams
    modes: ModeSet
    table: FormFactorTable
    norms: CouplingNorms
    basis: FockBasis
    A: tuple  # three real symmetric Fock matrices
    B: tuple  # three Hermitian Fock matrices with purely imaginary entries
    pf: np.ndarray  # (dim, 3) field-momentum diagonals
    hf: np.ndarray  # (dim,) field-energy diagonal

    @property
    def dim(self) -> int:
        return self.basis.dim

    def nf(self) -> np.ndarray:
        """Total-number diagonal."""
        return self.basis.totals().astype(float)


@functools.lru_cache(maxsize=64)
def build_model(params: ModelParams) -> FiberModel:
    """Assemble and cache the parameter-dependent operator ingredients."""
    modes = build_mode_set(params)
    table = form_factors(modes, params)
    basis = enumerate_basis(modes.n_modes, params.N_max)
    A = build_A0(basis, table)
    B = build_B0(basis, table)
    pf = np.column_stack([dgamma_diag(basis, table.k[:, j]) for j in range(3)])
    hf = dgamma_diag(basis, table.omega)
    return FiberModel(
        params=params,
        modes=modes,
        table=table,
        norms=coupling_norms(table),
        basis=basis,
        A=tuple(A),
        B=tuple(B),
        pf=pf,
        hf=hf,
    )


def build_A0(basis: FockBasis, table: FormFactorTable):
    """Quantized vector potential at the origin, one matrix per component.

    Real symmetric because the form factors are real.
    """
    return [field_sum(basis, table.f[:, j]) for j in range(3)]


def build_B0(basis: FockBasis, table: FormFactorTable):
    """Magnetic field at the origin: mode m contributes i (k_m ^ eps_m) g_m a_m + h.c.

    Hermitian with purely imaginary entries in the occupation basis, so
    entrywise conjugation flips its sign.
    """
    curl = np.cross(table.k, table.f)
    return [field_sum(basis, -1.0j * curl[:, j]) for j in range(3)]


def build_v(P, model: FiberModel):
    """v_j = P_j - dGamma(k_j) + A(0)_j, three real symmetric matrices."""
    P = np.asarray(P, dtype=float)
    eye = np.eye(model.dim)
    return [
        P[j] * eye - np.diag(model.pf[:, j]) + model.A[j] for j in range(3)
    ]


def spin_curl(v):
    """i (v ^ v)_j from matrix commutators of the components of v."""
    out = []
    for j in range(3):
        l, m = (j + 1) % 3, (j + 2) % 3
        out.append(1.0j * (v[l] @ v[m] - v[m] @ v[l]))
    return out


def build_T(P, model: FiberModel, mode: str = "direct") -> np.ndarray:
    """(sigma . v)^2 on C^2 tensor Fock.

    ``direct`` squares the assembled spinor operator; ``expanded`` uses the
    Pauli identity (sigma.v)^2 = v.v + i sigma.(v ^ v) with the commutators
    evaluated as matrix products.  The two agree to rounding error; the
    physical identification i (v ^ v) = e B(0) holds exactly only below the
    truncation edge (see :func:`spin_curl_mismatch`).
    """
    v = build_v(P, model)
    if mode == "direct":
        s = sum(np.kron(SIGMA[j], v[j]) for j in range(3))
        return s @ s
    if mode == "expanded":
        v2 = sum(vj @ vj for vj in v)
        w = spin_curl(v)
        return np.kron(ID2, v2) + sum(np.kron(SIGMA[j], w[j]) for j in range(3))
    raise ValueError(f"unknown T mode {mode!r}; use 'direct' or 'expanded'")


def spin_curl_mismatch(P, model: FiberModel):
    """Deviation of i (v ^ v)_j from the mode-sum field B(0)_j.

    Returns (sub_block_residual, full_residual): the first restricts rows and
    columns to total number <= N_max - 1, where the identity is exact; the
    second includes the top sector, where compressed products leave an
    O(coupling^2) remainder.
    """
    w = spin_curl(build_v(P, model))
    keep = model.basis.totals() <= model.basis.n_max - 1
    sub = 0.0
    full = 0.0
    for j in range(3):
        diff = w[j] - model.B[j]
        full = max(full, float(np.max(np.abs(diff))))
        if keep.any():
            sub = max(sub, float(np.max(np.abs(diff[np.ix_(keep, keep)]))))
    return sub, full


def build_D(P, model: FiberModel) -> np.ndarray:
    """Dirac operator alpha.(P - P_f + A(0)) + M beta on C^4 tensor Fock."""
    v = build_v(P, model)
    d = sum(np.kron(ALPHA[j], v[j]) for j in range(3))
    d += model.params.M * np.kron(BETA, np.eye(model.dim))
    return d


def op_sqrt_eig(h: np.ndarray, tol_psd: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root via spectral decomposition (reference path).

    Eigenvalues in [-tol_psd * scale, 0) are clamped to zero; anything below
    raises ``NotPositiveSemidefiniteError``.
    """
    require_hermitian(h, what="op_sqrt_eig input")
    w, u = np.linalg.eigh(h)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    if w[0] < -tol_psd * scale:
        raise NotPositiveSemidefiniteError(
            f"minimum eigenvalue {w[0]:.3e} below -{tol_psd:.1e} * {scale:.3e}"
        )
    root = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
    return hermitize(root)


def _sqrt_quad_nodes(h: np.ndarray, scale: float, n: int) -> np.ndarray:
    x, wts = np.polynomial.legendre.leggauss(n)
    theta = 0.25 * math.pi * (x + 1.0)
    out = np.zeros_like(h)
    eye = np.eye(h.shape[0])
    for th, wt in zip(theta, wts):
        t = scale * math.tan(th) ** 2
        out += wt / math.cos(th) ** 2 * np.linalg.solve(t * eye + h, h)
    return (2.0 * math.sqrt(scale) / math.pi) * (0.25 * math.pi) * out


def op_sqrt_quad(
    h: np.ndarray,
    tol: float = 1e-8,
    scale: float | None = None,
    max_nodes: int = 4096,
) -> np.ndarray:
    """Square root from the resolvent-integral formula, quadrature-evaluated.

    ``scale`` sets the substitution t = scale * s/(1-s); it should sit inside
    the spectrum (the strictly positive floor M^2 in all uses here).  Node
    counts double until successive estimates differ by less than ``tol``.
    """
    require_hermitian(h, what="op_sqrt_quad input")
    if scale is None:
        scale = max(float(np.trace(h).real) / h.shape[0], 1e-30)
    n = 16
    prev = _sqrt_quad_nodes(h, scale, n)
    while n <= max_nodes:
        n *= 2
        cur = _sqrt_quad_nodes(h, scale, n)
        err = float(np.max(np.abs(cur - prev)))
        if err < 0.5 * tol:
            return hermitize(cur)
        prev = cur
    raise QuadratureNotConverged(
        f"square-root quadrature stalled at error {err:.3e} > {tol:.1e} "
        f"with {n} nodes"
    )


def _as_model(params_or_model) -> FiberModel:
    if isinstance(params_or_model, FiberModel):
        return params_or_model
    return build_model(params_or_model)


def hf_spinor(model: FiberModel, spin_dim: int = 2) -> np.ndarray:
    """Field energy tensored with the spin identity."""
    return np.kron(np.eye(spin_dim), np.diag(model.hf))


def build_H(P, params_or_model) -> np.ndarray:
    """Fiber Hamiltonian gamma sqrt(T(P) + M^2) + H_f on C^2 tensor Fock."""
    model = _as_model(params_or_model)
    p = model.params
    t = build_T(P, model, mode="direct")
    root = op_sqrt_eig(t + p.M**2 * np.eye(2 * model.dim))
    return hermitize(p.gamma * root + hf_spinor(model))


def build_H_SL(P, params_or_model) -> np.ndarray:
    """Spinless Hamiltonian gamma sqrt(sum v_j^2 + M^2) + H_f on Fock space."""
    model = _as_model(params_or_model)
    p = model.params
    v = build_v(P, model)
    v2 = sum(vj @ vj for vj in v)
    root = op_sqrt_eig(v2 + p.M**2 * np.eye(model.dim))
    return hermitize(p.gamma * root + np.diag(model.hf))


def h0_diag(P, model: FiberModel) -> np.ndarray:
    """Diagonal of the free fiber Hamiltonian on the Fock factor."""
    P = np.asarray(P, dtype=float)
    rel = P[None, :] - model.pf
    kin = np.sqrt(np.sum(rel * rel, axis=1) + model.params.M**2)
    return model.params.gamma * kin + model.hf


def build_H0(P, params_or_model) -> np.ndarray:
    """Free fiber Hamiltonian gamma sqrt((P - P_f)^2 + M^2) + H_f, diagonal."""
    model = _as_model(params_or_model)
    return np.kron(ID2, np.diag(h0_diag(P, model)))


def interaction_norm(P, params_or_model) -> float:
    """Operator norm of (|D(P)| - |D_0(P)|) (H_0(P) + 1)^{-1}.

    Evaluated on the C^2 block (the C^4 Dirac operator is block-diagonal with
    two copies of the same operator, so the norm agrees).
    """
    model = _as_model(params_or_model)
    p = model.params
    P = np.asarray(P, dtype=float)
    t = build_T(P, model, mode="direct")
    absd = op_sqrt_eig(t + p.M**2 * np.eye(2 * model.dim))
    rel = P[None, :] - model.pf
    absd0 = np.sqrt(np.sum(rel * rel, axis=1) + p.M**2)
    h0 = np.kron(np.ones(2), p.gamma * absd0 + model.hf)
    hi = absd - np.kron(ID2, np.diag(absd0))
    return float(np.linalg.norm(hi / (h0[None, :] + 1.0), ord=2))


def lipschitz_ratio(P, k, params_or_model) -> float:
    """|| (|D(P-k)| - |D(P)|) (H(P) + 1)^{-1} || / |k|."""
    model = _as_model(params_or_model)
    p = model.params
    P = np.asarray(P, dtype=float)
    k = np.asarray(k, dtype=float)
    eye = np.eye(2 * model.dim)
    root_at = lambda q: op_sqrt_eig(build_T(q, model) + p.M**2 * eye)
    h = p.gamma * root_at(P) + hf_spinor(model)
    diff = root_at(P - k) - root_at(P)
    resolvent = np.linalg.inv(h + eye)
    return float(np.linalg.norm(diff @ resolvent, ord=2)) / float(
        np.linalg.norm(k)
    )
