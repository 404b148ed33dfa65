"""Photon-mode discretization inside the ultraviolet ball.

The quantized vector potential is sampled on a finite mode set: a product of
Gauss-Legendre radial shells on ``[k_min, Lambda]`` and an antipodally
symmetric set of directions, with two polarizations per wavevector.  The
quadrature weight of a k-point is ``w = w_radial * r^2 * w_direction`` so that
summing over k-points approximates ``int_{|k|<=Lambda} dk``.  Both
polarization modes at the same k carry that k-point weight.

UNITS: hbar = c = 1 throughout; momenta and masses share energy units.

CONVENTIONS:
- dispersion  omega(k) = sqrt(|k|^2 + m_ph^2)
- polarization dreibein: eps1 = normalize(z_hat x k), eps2 = k_hat x eps1,
  so that (eps1, eps2, k_hat) is right-handed.  Near the poles
  (|z_hat x k| < 1e-9 |k|) the convention is eps1 = x_hat, eps2 = k_hat x x_hat.
- discrete coupling: f_m = e * sqrt(w_m) * eps_m / sqrt(2 (2 pi)^3 omega_m),
  i.e. the quadrature weight is absorbed into the coefficient so the discrete
  annihilators satisfy unit commutators (below the truncation edge).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI_CUBED = (2.0 * math.pi) ** 3

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


class GridSpecError(ValueError):
    """Raised for empty or unsupported mode-grid specifications."""


@dataclass(frozen=True)
class ModelParams:
    """Physical and truncation parameters of the fiber model.

    Parameters
    ----------
    e : float
        Coupling strength, >= 0.
    gamma : float
        Kinetic prefactor in (0, 1].  The uniform-gap statements additionally
        need gamma < 1 and m_ph > 0; that is flagged by
        :meth:`gap_hypotheses_met`, not enforced here.
    M : float
        Charge mass, > 0.
    m_ph : float
        Photon mass (infrared regulator), >= 0.
    Lambda : float
        Ultraviolet cutoff on |k|, finite and > 0.
    n_shells : int
        Number of Gauss-Legendre radial nodes on [k_min, Lambda].
    n_dirs : int
        Size of the antipodally symmetric direction set (2, 6, 8 or 12).
    N_max : int
        Total photon-number cutoff of the Fock truncation, >= 0.
    k_min : float
        Inner radius of the radial quadrature, > 0 (keeps k = 0 out of the
        grid, where the dreibein is undefined).
    envelope_width : float
        Optional smooth cutoff taper as a fraction of Lambda; 0 disables it
        and leaves the sharp cutoff realized by grid membership.
    """

    e: float
    gamma: float
    M: float
    m_ph: float
    Lambda: float
    n_shells: int = 2
    n_dirs: int = 6
    N_max: int = 1
    k_min: float = 1e-6
    envelope_width: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.e < 0.0:
            raise ValueError(f"coupling e must be >= 0, got {self.e}")
        if self.M <= 0.0:
            raise ValueError(f"mass M must be > 0, got {self.M}")
        if self.m_ph < 0.0:
            raise ValueError(f"photon mass must be >= 0, got {self.m_ph}")
        if not (0.0 < self.Lambda < math.inf):
            raise ValueError(f"Lambda must be finite and > 0, got {self.Lambda}")
        if self.n_shells < 1 or self.n_dirs < 1:
            raise GridSpecError(
                f"empty grid spec: n_shells={self.n_shells}, n_dirs={self.n_dirs}"
            )
        if self.N_max < 0:
            raise ValueError(f"N_max must be >= 0, got {self.N_max}")
        if not 0.0 < self.k_min < self.Lambda:
            raise ValueError("k_min must lie strictly between 0 and Lambda")
        if not 0.0 <= self.envelope_width < 1.0:
            raise ValueError("envelope_width must lie in [0, 1)")

    def gap_hypotheses_met(self) -> bool:
        """Whether the hypotheses of the uniform-gap statements hold."""
        return self.gamma < 1.0 and self.m_ph > 0.0

    def replace(self, **changes) -> "ModelParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class Mode:
    """A single discrete photon mode (k-point plus polarization index)."""

    k: tuple
    lam: int
    eps: tuple
    weight: float


@dataclass(frozen=True)
class ModeSet:
    """Finite photon-mode list with array views of its columns.

    ``weight[m]`` is the quadrature weight of the k-point carrying mode ``m``;
    the two polarization modes at the same k share it, so the weights summed
    over unique k-points (``kpoint_weight_sum``) approximate the ball volume.
    """

    modes: tuple
    k: np.ndarray = field(repr=False, compare=False, default=None)
    lam: np.ndarray = field(repr=False, compare=False, default=None)
    eps: np.ndarray = field(repr=False, compare=False, default=None)
    weight: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "k", np.array([m.k for m in self.modes]))
        object.__setattr__(self, "lam", np.array([m.lam for m in self.modes]))
        object.__setattr__(self, "eps", np.array([m.eps for m in self.modes]))
        object.__setattr__(
            self, "weight", np.array([m.weight for m in self.modes])
        )
        for arr in (self.k, self.eps, self.weight):
            arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def kpoint_weight_sum(self) -> float:
        """Sum of quadrature weights over unique k-points (lambda = 1 rows)."""
        return float(self.weight[self.lam == 1].sum())

    def to_csv(self, path) -> None:
        """Dump the mode list for inspection (one row per mode)."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("k_x,k_y,k_z,lambda,eps_x,eps_y,eps_z,weight\n")
            for m in self.modes:
                row = (*m.k, m.lam, *m.eps, m.weight)
                fh.write(
                    ",".join(
                        f"{v:.17g}" if isinstance(v, float) else str(v)
                        for v in row
                    )
                    + "\n"
                )


def dispersion(k, m_ph: float):
    """omega(k) = sqrt(|k|^2 + m_ph^2); accepts a 3-vector or (n, 3) array."""
    k = np.asarray(k, dtype=float)
    k2 = np.sum(k * k, axis=-1)
    return np.sqrt(k2 + m_ph * m_ph)


def dreibein(k):
    """Real orthonormal right-handed pair (eps1, eps2) perpendicular to k.

    Raises ``ValueError`` at k = 0, where no transverse frame exists.
    """
    k = np.asarray(k, dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0.0:
        raise ValueError("dreibein is undefined at k = 0")
    khat = k / norm
    axis = np.array([0.0, 0.0, 1.0])
    c = np.cross(axis, k)
    cnorm = np.linalg.norm(c)
    if cnorm < 1e-9 * norm:
        # pole convention: k parallel to z picks eps1 along x
        eps1 = np.array([1.0, 0.0, 0.0])
    else:
        eps1 = c / cnorm
    eps2 = np.cross(khat, eps1)
    return eps1, eps2


def direction_set(n_dirs: int):
    """Antipodally symmetric unit directions with weights summing to 4 pi.

    Supported families: 2 (+-z), 6 (octahedron vertices), 8 (cube
    diagonals), 12 (icosahedron vertices).  Each family is a symmetric orbit,
    so uniform weights are used and closure under u -> -u is exact.
    """
    if n_dirs == 2:
        dirs = [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    elif n_dirs == 6:
        dirs = []
        for j in range(3):
            for s in (1.0, -1.0):
                u = [0.0, 0.0, 0.0]
                u[j] = s
                dirs.append(tuple(u))
    elif n_dirs == 8:
        r = 1.0 / math.sqrt(3.0)
        dirs = [
            (sx * r, sy * r, sz * r)
            for sx in (1.0, -1.0)
            for sy in (1.0, -1.0)
            for sz in (1.0, -1.0)
        ]
    elif n_dirs == 12:
        r = 1.0 / math.sqrt(1.0 + _GOLDEN**2)
        dirs = []
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                dirs.append((0.0, s1 * r, s2 * _GOLDEN * r))
                dirs.append((s1 * r, s2 * _GOLDEN * r, 0.0))
                dirs.append((s1 * _GOLDEN * r, 0.0, s2 * r))
    else:
        raise GridSpecError(
            f"unsupported direction count {n_dirs}; choose one of 2, 6, 8, 12"
        )
    weights = np.full(len(dirs), 4.0 * math.pi / len(dirs))
    return np.array(dirs), weights


def radial_rule(n_shells: int, k_min: float, Lambda: float):
    """Gauss-Legendre nodes/weights on [k_min, Lambda]."""
    x, w = np.polynomial.legendre.leggauss(n_shells)
    half = 0.5 * (Lambda - k_min)
    mid = 0.5 * (Lambda + k_min)
    return mid + half * x, half * w


def build_mode_set(params: ModelParams) -> ModeSet:
    """Discretize the ball |k| <= Lambda into photon modes.

    The result is deterministic in ``params``, closed under k -> -k with
    equal weights, and every |k| lies in [k_min, Lambda].
    """
    radii, rad_w = radial_rule(params.n_shells, params.k_min, params.Lambda)
    dirs, dir_w = direction_set(params.n_dirs)
    modes = []
    for r, wr in zip(radii, rad_w):
        for u, wd in zip(dirs, dir_w):
            kvec = r * u
            eps1, eps2 = dreibein(kvec)
            w = wr * r * r * wd
            modes.append(Mode(tuple(kvec), 1, tuple(eps1), w))
            modes.append(Mode(tuple(kvec), 2, tuple(eps2), w))
    return ModeSet(tuple(modes))


def _envelope(r: np.ndarray, params: ModelParams) -> np.ndarray:
    """Smooth cutoff taper on [((1-w)Lambda, Lambda]; identically 1 if w = 0."""
    if params.envelope_width == 0.0:
        return np.ones_like(r)
    r0 = (1.0 - params.envelope_width) * params.Lambda
    span = params.envelope_width * params.Lambda
    t = np.clip((r - r0) / span, 0.0, 1.0)
    return np.cos(0.5 * math.pi * t) ** 2


@dataclass(frozen=True, eq=False)
class FormFactorTable:
    """Per-mode coupling coefficients of the discrete vector potential.

    ``f[m]`` is the real 3-vector coefficient of the annihilator of mode m,
    ``f[m] = g[m] * eps[m]`` with scalar prefactor
    ``g[m] = e sqrt(w_m) / sqrt(2 (2 pi)^3 omega_m)`` (times the optional
    smooth envelope).  All entries scale linearly in e.
    """

    f: np.ndarray
    g: np.ndarray
    omega: np.ndarray
    k: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        for arr in (self.f, self.g, self.omega, self.k, self.weight):
            arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return self.f.shape[0]


def form_factors(modes: ModeSet, params: ModelParams) -> FormFactorTable:
    """Evaluate the mode couplings f_m and dispersions omega_m."""
    omega = dispersion(modes.k, params.m_ph)
    r = np.linalg.norm(modes.k, axis=1)
    g = params.e * np.sqrt(modes.weight) / np.sqrt(2.0 * TWO_PI_CUBED * omega)
    g = g * _envelope(r, params)
    f = g[:, None] * modes.eps
    return FormFactorTable(f=f, g=g, omega=omega, k=modes.k.copy(), weight=modes.weight.copy())


@dataclass(frozen=True, eq=False)
class CouplingNorms:
    """Discrete l2 norms of weighted form factors used by the energy bounds.

    n_half  = || omega^{-1/2} |f| ||
    n_one   = || (1 + omega^{-1/2}) |f| ||
    n_kin   = || |k|^{1/2} |f| ||
    n_curl  = || (1 + omega^{-1/2}) |k| |f| ||

    The ``*_comp`` arrays hold the same norms computed from a single
    Cartesian component of f (index 0 is the component along u = (1,0,0)).
    """

    n_half: float
    n_one: float
    n_kin: float
    n_curl: float
    n_half_comp: np.ndarray
    n_one_comp: np.ndarray
    n_kin_comp: np.ndarray


def coupling_norms(table: FormFactorTable) -> CouplingNorms:
    """Norms over the discrete mode set; all scale linearly in e."""
    f2 = np.sum(table.f**2, axis=1)
    fc2 = table.f**2
    om = table.omega
    absk = np.linalg.norm(table.k, axis=1)
    one_fac = (1.0 + om ** (-0.5)) ** 2
    return CouplingNorms(
        n_half=math.sqrt(float(np.sum(f2 / om))),
        n_one=math.sqrt(float(np.sum(one_fac * f2))),
        n_kin=math.sqrt(float(np.sum(absk * f2))),
        n_curl=math.sqrt(float(np.sum(one_fac * absk**2 * f2))),
        n_half_comp=np.sqrt(np.sum(fc2 / om[:, None], axis=0)),
        n_one_comp=np.sqrt(np.sum(one_fac[:, None] * fc2, axis=0)),
        n_kin_comp=np.sqrt(np.sum(absk[:, None] * fc2, axis=0)),
    )


def ball_volume(Lambda: float, k_min: float = 0.0) -> float:
    """Volume of the radial shell [k_min, Lambda] (quadrature reference)."""
    return 4.0 / 3.0 * math.pi * (Lambda**3 - k_min**3)


def n_half_closed_form(e: float, Lambda: float, m_ph: float) -> float:
    """Continuum value of n_half^2: radial integral of 1/omega^2 over the ball.

    For m_ph = 0 the integrand is 1/k^2 and the integral is just Lambda.
    """
    if m_ph == 0.0:
        radial = Lambda
    else:
        radial = Lambda - m_ph * math.atan(Lambda / m_ph)
    return e**2 / TWO_PI_CUBED * 4.0 * math.pi * radial
