"""Explicitly diagonalizable comparison operators and energy inequalities.

The fiber Hamiltonian is sandwiched between two operators that are diagonal
in the occupation basis,

    L_-(P) <= H(|P| u) <= L_+(P),        u = (1, 0, 0),

with

    L_-(P) = gamma sqrt(P^2 + M^2) + (1 - gamma - eC1) H_f - eC2,
    L_+(P) = gamma [ (|P| u - P_f)^2 + 2 |P| (H_f + n_half)
                     + 4 (H_f + 1) P_f^2 + n_one^2 + n_one^2 (H_f + 1)
                     + H_f + n_kin^2 + M^2 ]^{1/2} + H_f.

The explicit constants replay the lower-bound proof with the quadratic-form
coupling estimates, keeping the kinetic prefactor gamma on every step:

    eC1 = eC2 = gamma * ( n_half_along_u  +  (3 pi / M) * n_curl ).

Both parts erode H_f and shift the bottom; they vanish linearly in e.  The
sandwich itself is re-verified by eigensolves; the constants feed the
min-max counting (at most two eigenvalues below Sigma_-(P)) and the
closed-form corollary envelope for E(P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import FiberModel, _as_model, build_H, op_sqrt_eig
from .spectral import EnergyCache, delta_gap, ground_data

SANDWICH_TOL = 1e-9
U_DIRECTION = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class BoundConstants:
    """Measured constants entering L_-, Sigma_- and the corollary envelope.

    e_c1 / e_c2: H_f erosion and constant offset of the lower comparison
    operator (equal by construction).  e_c3 and e2_c4 parametrize the upper
    corollary E(P) <= gamma sqrt((|P| + eC3)^2 + M^2 + e^2 C4).
    """

    gamma: float
    M: float
    m_ph: float
    e_c1: float
    e_c2: float
    e_c3: float
    e2_c4: float

    def sigma_minus(self, P) -> float:
        """Bottom of the continuous part of spec(L_-(P))."""
        p2 = float(np.dot(P, P))
        return (
            self.gamma * math.sqrt(p2 + self.M**2)
            + (1.0 - self.gamma - self.e_c1) * self.m_ph
            - self.e_c2
        )

    def lower_envelope(self, P) -> float:
        """Corollary lower bound: gamma sqrt(P^2 + M^2) - eC2."""
        p2 = float(np.dot(P, P))
        return self.gamma * math.sqrt(p2 + self.M**2) - self.e_c2

    def upper_envelope(self, P) -> float:
        """Corollary upper bound: gamma sqrt((|P| + eC3)^2 + M^2 + e^2 C4)."""
        absp = float(np.linalg.norm(P))
        return self.gamma * math.sqrt(
            (absp + self.e_c3) ** 2 + self.M**2 + self.e2_c4
        )


def bound_constants(params_or_model) -> BoundConstants:
    """Assemble the explicit constants from the discrete coupling norms."""
    model = _as_model(params_or_model)
    p, n = model.params, model.norms
    e_c = p.gamma * (n.n_half_comp[0] + (3.0 * math.pi / p.M) * n.n_curl)
    return BoundConstants(
        gamma=p.gamma,
        M=p.M,
        m_ph=p.m_ph,
        e_c1=e_c,
        e_c2=e_c,
        e_c3=n.n_half,
        e2_c4=2.0 * n.n_one**2 + n.n_kin**2,
    )


def build_L_minus(P, params_or_model, consts: BoundConstants | None = None):
    """Diagonal of L_-(P) on the Fock factor (spin-trivial)."""
    model = _as_model(params_or_model)
    if consts is None:
        consts = bound_constants(model)
    p = model.params
    if p.gamma >= 1.0:
        raise ValueError("the lower comparison operator requires gamma < 1")
    p2 = float(np.dot(P, P))
    base = p.gamma * math.sqrt(p2 + p.M**2)
    return base + (1.0 - p.gamma - consts.e_c1) * model.hf - consts.e_c2


def build_L_plus(P, params_or_model, consts: BoundConstants | None = None):
    """Diagonal of L_+(P) on the Fock factor.

    All constituents are functions of the occupation diagonals, so they
    commute and the entrywise formula is the full operator.
    """
    model = _as_model(params_or_model)
    p, n = model.params, model.norms
    absp = float(np.linalg.norm(P))
    rel = absp * U_DIRECTION[None, :] - model.pf
    hf = model.hf
    pf2 = np.sum(model.pf * model.pf, axis=1)
    radicand = (
        np.sum(rel * rel, axis=1)
        + 2.0 * absp * (hf + n.n_half)
        + 4.0 * (hf + 1.0) * pf2
        + n.n_one**2
        + n.n_one**2 * (hf + 1.0)
        + hf
        + n.n_kin**2
        + p.M**2
    )
    if np.any(radicand < 0.0):  # impossible by construction
        raise ValueError("negative radicand in the upper comparison operator")
    return p.gamma * np.sqrt(radicand) + hf


def check_op_leq(a: np.ndarray, b: np.ndarray, tol: float = SANDWICH_TOL):
    """Whether A <= B as quadratic forms: (holds, min eig of B - A).

    ``holds`` is true when the minimum eigenvalue of B - A stays above
    ``-tol * max(||A||, ||B||)``.
    """
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    min_eig = float(np.linalg.eigvalsh(b - a)[0])
    scale = max(
        float(np.linalg.norm(a, ord=2)), float(np.linalg.norm(b, ord=2)), 1e-300
    )
    return min_eig >= -tol * scale, min_eig


def count_below(h, threshold: float) -> int:
    """Number of eigenvalues strictly below the threshold."""
    h = np.asarray(h)
    vals = np.linalg.eigvalsh(h) if h.ndim == 2 else np.sort(h)
    return int(np.searchsorted(vals, threshold, side="left"))


def sandwich_margins(P, params_or_model, consts: BoundConstants | None = None):
    """min eig(H(|P|u) - L_-) and min eig(L_+ - H(|P|u)), with the scale.

    The Hamiltonian is evaluated at |P| u as in the comparison statements;
    rotation covariance of E(P) is probed separately.
    """
    model = _as_model(params_or_model)
    if consts is None:
        consts = bound_constants(model)
    absp = float(np.linalg.norm(P))
    h = build_H(absp * U_DIRECTION, model)
    lm = np.kron(np.ones(2), build_L_minus(P, model, consts))
    lp = np.kron(np.ones(2), build_L_plus(P, model, consts))
    lower = float(np.linalg.eigvalsh(h - np.diag(lm))[0])
    upper = float(np.linalg.eigvalsh(np.diag(lp) - h)[0])
    scale = float(np.linalg.norm(h, ord=2))
    return lower, upper, scale


def corollary_energy_bounds(P, params_or_model, consts: BoundConstants | None = None):
    """Closed-form envelope (lower, upper) for E(P)."""
    model = _as_model(params_or_model)
    if consts is None:
        consts = bound_constants(model)
    return consts.lower_envelope(P), consts.upper_envelope(P)


@dataclass
class GapReport:
    """Margins of the uniform-gap inequalities at one momentum."""

    P: tuple
    E: float
    E1: float | None
    delta: float
    sigma_minus: float
    upper_envelope: float
    count_below_sigma: int
    # Delta(P) >= (1 - gamma) m_ph - [eC2 + (upper envelope - gamma sqrt(P^2+M^2))]
    delta_margin: float
    # E1 - E >= Sigma_-(P) - upper envelope (the min-max chain)
    chain_margin: float
    # E1 - E >= (1 - eC1 - gamma) m_ph - eC2 (explicit-constant form)
    direct_margin: float
    envelope_ok: bool


def theorem_gap_report(
    P,
    params_or_model,
    consts: BoundConstants | None = None,
    cache: EnergyCache | None = None,
) -> GapReport:
    """Evaluate the gap inequalities with measured constants at one P."""
    model = _as_model(params_or_model)
    p = model.params
    if consts is None:
        consts = bound_constants(model)
    P = np.asarray(P, dtype=float)
    e0, e1, _ = ground_data(P, model, cache=cache)
    delta = delta_gap(P, model, cache=cache)
    sigma = consts.sigma_minus(P)
    upper = consts.upper_envelope(P)
    lower = consts.lower_envelope(P)
    free = p.gamma * math.sqrt(float(P @ P) + p.M**2)
    h = build_H(P, model)
    cnt = count_below(h, sigma)
    gap = math.inf if e1 is None else e1 - e0
    return GapReport(
        P=tuple(P),
        E=e0,
        E1=e1,
        delta=delta,
        sigma_minus=sigma,
        upper_envelope=upper,
        count_below_sigma=cnt,
        delta_margin=delta - ((1.0 - p.gamma) * p.m_ph - (consts.e_c2 + upper - free)),
        chain_margin=gap - (sigma - upper),
        direct_margin=gap - ((1.0 - consts.e_c1 - p.gamma) * p.m_ph - consts.e_c2),
        envelope_ok=lower - SANDWICH_TOL <= e0 <= upper + SANDWICH_TOL,
    )


def taylor_remainder_min_eig(P, params_or_model) -> float:
    """min eig of the second-order rest term of the square-root expansion.

    With X = P_f1 - A(0)_1 and f(s) = sqrt(s^2 + M^2), the operator
    f(|P| - X) - f(|P|) - f'(|P|) (-X) is positive by convexity of f; this
    evaluates its smallest eigenvalue directly.
    """
    model = _as_model(params_or_model)
    p = model.params
    absp = float(np.linalg.norm(P))
    x = np.diag(model.pf[:, 0]) - model.A[0]
    arg = absp * np.eye(model.dim) - x
    val = math.sqrt(absp**2 + p.M**2)
    rest = (
        op_sqrt_eig(arg @ arg + p.M**2 * np.eye(model.dim))
        - val * np.eye(model.dim)
        - (absp / val) * (-x)
    )
    return float(np.linalg.eigvalsh(rest)[0])


def sqrt_monotone_test(dim: int = 12, trials: int = 1000, rng_seed: int = 0):
    """Property test of operator monotonicity of the square root.

    Draws Hermitian PSD S and T = S + W^dagger W and checks
    min eig(sqrt(T) - sqrt(S)) >= -1e-10 ||sqrt(T)||.  Returns
    (all_passed, worst_margin) with the margin normalized by ||sqrt(T)||.
    """
    if dim > 32:
        raise ValueError("property suite is desk-scale: dim <= 32")
    rng = np.random.default_rng(rng_seed)
    worst = math.inf
    for _ in range(trials):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        s = g.conj().T @ g
        w = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        t = s + w.conj().T @ w
        rt = op_sqrt_eig(t)
        diff = rt - op_sqrt_eig(s)
        margin = float(np.linalg.eigvalsh(diff)[0]) / float(
            np.linalg.norm(rt, ord=2)
        )
        worst = min(worst, margin)
    return worst >= -1e-10, worst
