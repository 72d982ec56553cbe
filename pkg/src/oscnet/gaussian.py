"""Zero-mean Gaussian states of quadratic oscillator Hamiltonians.

Conventions: hbar = k_B = 1, so the vacuum has symplectic eigenvalue 1/2 and
entropies are returned in nats unless ``bits=True``. A state is described by
its covariance blocks

.. math::
    \\sigma_{xx} = \\langle x x^T \\rangle, \\quad
    \\sigma_{pp} = \\langle p p^T \\rangle, \\quad
    \\sigma_{xp} = \\tfrac12 \\langle \\{x, p^T\\} \\rangle .

Hamiltonians have the form ``H = 1/2 p^T M^-1 p + 1/2 x^T V x`` with diagonal
mass matrix ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidModeSet,
    NonPositiveFactor,
    NonPositivePotential,
    UnphysicalState,
)

__all__ = [
    "QuadraticHamiltonian",
    "GaussianState",
    "SymplecticSpectrum",
    "ground_state",
    "thermal_state",
    "reduce",
    "symplectic_spectrum",
    "entropy",
    "mutual_information",
    "partial_transpose",
    "log_negativity",
    "local_scaling",
    "canonical_transform",
    "mode_entropy",
]

#: relative eigenvalue floor below which a potential counts as singular
POSITIVITY_RTOL = 1e-12
#: deviation below 1/2 tolerated before a state is declared unphysical
UNCERTAINTY_ATOL = 1e-6
#: allowed mismatch between the two members of a +-i nu eigenvalue pair
PAIRING_ATOL = 1e-8


def _as_matrix(a, n: int | None = None, name: str = "matrix") -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise DimensionMismatch(f"{name} must be {n}x{n}, got {a.shape}")
    a.setflags(write=False)
    return a


def _check_symmetric(a: np.ndarray, name: str, rtol: float = 1e-12) -> None:
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > rtol * scale:
        raise DimensionMismatch(f"{name} is not symmetric")


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """``H = 1/2 p^T M^-1 p + 1/2 x^T V x`` for ``n_modes`` oscillators."""

    potential: np.ndarray
    masses: np.ndarray = field(default=None)

    def __post_init__(self):
        v = _as_matrix(self.potential, name="potential")
        _check_symmetric(v, "potential")
        n = v.shape[0]
        if self.masses is None:
            m = np.ones(n)
        else:
            m = np.array(self.masses, dtype=float).reshape(-1)
        if m.shape != (n,):
            raise DimensionMismatch(f"expected {n} masses, got {m.shape[0]}")
        if np.any(m <= 0):
            raise NonPositivePotential("masses must be strictly positive")
        m.setflags(write=False)
        object.__setattr__(self, "potential", v)
        object.__setattr__(self, "masses", m)

    @property
    def n_modes(self) -> int:
        return self.potential.shape[0]

    def mass_weighted_potential(self) -> np.ndarray:
        """``M^-1/2 V M^-1/2``."""
        w = 1.0 / np.sqrt(self.masses)
        return w[:, None] * self.potential * w[None, :]

    def normal_modes(self) -> tuple[np.ndarray, np.ndarray]:
        """Squared frequencies and orthonormal eigenvectors of the
        mass-weighted potential.

        Raises :class:`NonPositivePotential` when the smallest eigenvalue is not
        above ``1e-12`` times the largest.
        """
        w2, u = np.linalg.eigh(self.mass_weighted_potential())
        top = w2[-1]
        if top <= 0 or w2[0] <= POSITIVITY_RTOL * top:
            raise NonPositivePotential(
                f"potential is not positive definite (smallest eigenvalue {w2[0]:.3e})"
            )
        return w2, u


@dataclass(frozen=True)
class GaussianState:
    """Covariance blocks of a zero-mean Gaussian state.

    Only shapes and symmetry are validated on construction; physicality is a
    property (:attr:`is_physical`) because partially transposed states are
    expected to violate it.
    """

    sigma_xx: np.ndarray
    sigma_pp: np.ndarray
    sigma_xp: np.ndarray = field(default=None)

    def __post_init__(self):
        xx = _as_matrix(self.sigma_xx, name="sigma_xx")
        n = xx.shape[0]
        pp = _as_matrix(self.sigma_pp, n, name="sigma_pp")
        if self.sigma_xp is None:
            xp = np.zeros((n, n))
            xp.setflags(write=False)
        else:
            xp = _as_matrix(self.sigma_xp, n, name="sigma_xp")
        _check_symmetric(xx, "sigma_xx", 1e-10)
        _check_symmetric(pp, "sigma_pp", 1e-10)
        object.__setattr__(self, "sigma_xx", xx)
        object.__setattr__(self, "sigma_pp", pp)
        object.__setattr__(self, "sigma_xp", xp)

    @property
    def n_modes(self) -> int:
        return self.sigma_xx.shape[0]

    @property
    def has_xp(self) -> bool:
        return bool(np.any(self.sigma_xp != 0.0))

    def covariance(self) -> np.ndarray:
        """Full ``2n x 2n`` covariance in ``(x_1..x_n, p_1..p_n)`` order."""
        return np.block([[self.sigma_xx, self.sigma_xp], [self.sigma_xp.T, self.sigma_pp]])

    @property
    def is_physical(self) -> bool:
        return bool(symplectic_spectrum(self).values[0] >= 0.5 - 1e-9)

    @property
    def is_pure(self) -> bool:
        return bool(np.all(np.abs(symplectic_spectrum(self).values - 0.5) < 1e-9))

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        eye = 0.5 * np.eye(n_modes)
        return cls(eye, eye)


@dataclass(frozen=True)
class SymplecticSpectrum:
    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).reshape(-1))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def is_pure(self) -> bool:
        return bool(np.all(np.abs(self.values - 0.5) < 1e-9))


def _mode_weighted(h: QuadraticHamiltonian, xfactor: np.ndarray, pfactor: np.ndarray):
    # ``xfactor``/``pfactor`` are functions of the normal-mode frequencies
    _, u = h.normal_modes()
    sxx = (u * xfactor) @ u.T
    spp = (u * pfactor) @ u.T
    w = 1.0 / np.sqrt(h.masses)
    sxx = w[:, None] * sxx * w[None, :]
    spp = (1.0 / w)[:, None] * spp * (1.0 / w)[None, :]
    return GaussianState(_sym(sxx), _sym(spp))


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def ground_state(h: QuadraticHamiltonian) -> GaussianState:
    """Ground state of ``h``.

    In mass-weighted coordinates ``sigma_xx = V'^{-1/2}/2`` and
    ``sigma_pp = V'^{1/2}/2``, evaluated through the eigendecomposition of
    ``V'``.
    """
    w2, _ = h.normal_modes()
    omega = np.sqrt(w2)
    return _mode_weighted(h, 0.5 / omega, 0.5 * omega)


def _coth_occupation(omega: np.ndarray, temperature: float) -> np.ndarray:
    if temperature == 0:
        return np.ones_like(omega)
    with np.errstate(over="ignore"):
        return 1.0 / np.tanh(omega / (2.0 * temperature))


def thermal_state(h: QuadraticHamiltonian, temperature: float) -> GaussianState:
    """Gibbs state ``exp(-H/T)/Z`` of ``h`` (``k_B = 1``).

    ``T = 0`` returns the ground state exactly.
    """
    temperature = float(temperature)
    if not temperature >= 0:
        raise ValueError(f"temperature must be nonnegative, got {temperature}")
    w2, _ = h.normal_modes()
    omega = np.sqrt(w2)
    coth = _coth_occupation(omega, temperature)
    return _mode_weighted(h, 0.5 * coth / omega, 0.5 * coth * omega)


def _mode_indices(modes: Iterable[int], n: int, proper: bool = False) -> np.ndarray:
    idx = np.array(list(modes), dtype=int).reshape(-1)
    if idx.size == 0:
        raise InvalidModeSet("mode set is empty")
    if np.any(idx < 0) or np.any(idx >= n):
        raise InvalidModeSet(f"mode indices out of range for {n} modes: {idx.tolist()}")
    if len(np.unique(idx)) != idx.size:
        raise InvalidModeSet(f"duplicate mode indices: {idx.tolist()}")
    if proper and idx.size == n:
        raise InvalidModeSet("subset must be a proper subset of the modes")
    return idx


def complement(modes: Iterable[int], n: int) -> np.ndarray:
    idx = _mode_indices(modes, n)
    return np.setdiff1d(np.arange(n), idx)


def reduce(s: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal state on ``modes`` (in the given order)."""
    idx = _mode_indices(modes, s.n_modes)
    sel = np.ix_(idx, idx)
    return GaussianState(s.sigma_xx[sel], s.sigma_pp[sel], s.sigma_xp[sel])


def _spectrum_fast(xx: np.ndarray, pp: np.ndarray) -> np.ndarray:
    # eig(xx pp) = eig(L^T pp L) for xx = L L^T, which is symmetric
    try:
        lower = np.linalg.cholesky(xx)
    except np.linalg.LinAlgError as exc:
        raise UnphysicalState("sigma_xx is not positive definite") from exc
    ev = np.linalg.eigvalsh(lower.T @ pp @ lower)
    return np.sqrt(np.clip(ev, 0.0, None))


def _spectrum_general(s: GaussianState) -> np.ndarray:
    n = s.n_modes
    omega = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    moduli = np.sort(np.abs(np.linalg.eigvals(omega @ s.covariance())))
    first, second = moduli[0::2], moduli[1::2]
    scale = np.maximum(1.0, second)
    if np.any(np.abs(first - second) > PAIRING_ATOL * scale):
        raise UnphysicalState("eigenvalues of Omega*sigma do not pair up as +-i nu")
    return 0.5 * (first + second)


def symplectic_spectrum(s: GaussianState, method: str = "auto") -> SymplecticSpectrum:
    """Symplectic eigenvalues of ``s``.

    ``method`` is ``"general"`` (moduli of the eigenvalues of ``Omega sigma``,
    paired), ``"fast"`` (``sqrt(eig(sigma_xx sigma_pp))``, only valid when
    ``sigma_xp = 0``) or ``"auto"``.
    """
    if method not in ("auto", "fast", "general"):
        raise ValueError(f"unknown method {method!r}")
    if method == "fast" and s.has_xp:
        raise DimensionMismatch("fast path requires sigma_xp = 0")
    if method == "general" or (method == "auto" and s.has_xp):
        return SymplecticSpectrum(_spectrum_general(s))
    return SymplecticSpectrum(_spectrum_fast(s.sigma_xx, s.sigma_pp))


def mode_entropy(nu) -> np.ndarray:
    """Entropy ``(nu+1/2)ln(nu+1/2) - (nu-1/2)ln(nu-1/2)`` of a thermal mode."""
    nu = np.asarray(nu, dtype=float)
    plus = nu + 0.5
    minus = np.clip(nu - 0.5, 0.0, None)
    small = minus < 1e-12
    safe = np.where(small, 1.0, minus)
    return plus * np.log(plus) - np.where(small, 0.0, minus * np.log(safe))


def entropy(s: GaussianState, bits: bool = False) -> float:
    """Von Neumann entropy in nats (or bits)."""
    nu = symplectic_spectrum(s).values
    if nu[0] < 0.5 - UNCERTAINTY_ATOL:
        raise UnphysicalState(f"symplectic eigenvalue {nu[0]:.6g} below 1/2")
    total = float(np.sum(mode_entropy(nu)))
    return total / np.log(2.0) if bits else total


def mutual_information(s: GaussianState, subset: Sequence[int], bits: bool = False) -> float:
    """``I(A|A^c) = S_A + S_{A^c} - S_total``."""
    idx = _mode_indices(subset, s.n_modes, proper=True)
    rest = complement(idx, s.n_modes)
    return (
        entropy(reduce(s, idx), bits)
        + entropy(reduce(s, rest), bits)
        - entropy(s, bits)
    )


def partial_transpose(s: GaussianState, subset: Sequence[int]) -> GaussianState:
    """Flip the sign of the momenta of the modes in ``subset``.

    Passing every mode is allowed; it is a global time reversal and leaves the
    spectrum unchanged.
    """
    idx = _mode_indices(subset, s.n_modes)
    sign = np.ones(s.n_modes)
    sign[idx] = -1.0
    return GaussianState(
        s.sigma_xx,
        sign[:, None] * s.sigma_pp * sign[None, :],
        s.sigma_xp * sign[None, :],
    )


def log_negativity(s: GaussianState, subset: Sequence[int]) -> float:
    """Logarithmic negativity (nats) of the bipartition ``subset | rest``."""
    idx = _mode_indices(subset, s.n_modes, proper=True)
    nu = symplectic_spectrum(partial_transpose(s, idx)).values
    return float(np.sum(np.clip(-np.log(2.0 * nu), 0.0, None)))


def local_scaling(s: GaussianState, factors) -> GaussianState:
    """Apply ``x_i -> f_i x_i``, ``p_i -> p_i / f_i``."""
    f = np.asarray(factors, dtype=float).reshape(-1)
    if f.shape != (s.n_modes,):
        raise DimensionMismatch(f"expected {s.n_modes} factors, got {f.size}")
    if np.any(f <= 0):
        raise NonPositiveFactor("scaling factors must be strictly positive")
    g = 1.0 / f
    return GaussianState(
        f[:, None] * s.sigma_xx * f[None, :],
        g[:, None] * s.sigma_pp * g[None, :],
        f[:, None] * s.sigma_xp * g[None, :],
    )


def canonical_transform(s: GaussianState, a: np.ndarray) -> GaussianState:
    """Covariance after the point transformation ``X = A x``, ``P = A^-T p``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (s.n_modes, s.n_modes):
        raise DimensionMismatch(f"transform must be {s.n_modes}x{s.n_modes}")
    a_inv = np.linalg.inv(a)
    return GaussianState(
        _sym(a @ s.sigma_xx @ a.T),
        _sym(a_inv.T @ s.sigma_pp @ a_inv),
        a @ s.sigma_xp @ a_inv,
    )
