"""Two macroscopic objects made of ``N`` oscillators each.

Object ``a`` (modes ``0..N-1``) and object ``b`` (modes ``N..2N-1``) have
identical constituents of mass ``M`` and on-site frequency ``Omega``, an
internal coupling matrix ``K`` (``1/2 x^T K x`` per object, with
``K @ ones = 0`` so that it only depends on coordinate differences) and a
bilinear inter-object coupling ``x_a^T G x_b``.

Collective coordinates are ``X = T x`` and ``P = T^-T p`` with the first row of
``T`` equal to ``(1/N, ..., 1/N)``, so ``X_1`` is the centre of mass (COM) and
``P_1`` the total momentum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import (
    InvalidParameter,
    NoEntanglementAtZeroT,
    PatternMismatch,
)
from .gaussian import (
    GaussianState,
    QuadraticHamiltonian,
    canonical_transform,
    log_negativity,
    partial_transpose,
    reduce,
    symplectic_spectrum,
    thermal_state,
)

PATTERN_ATOL = 1e-12


@dataclass(frozen=True)
class ComTransform:
    matrix: np.ndarray
    masses: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def com_transform(n: int, mass: float = 1.0) -> ComTransform:
    """COM row plus a Householder completion.

    The Householder reflection ``H`` that maps ``e_1`` to ``ones/sqrt(N)`` has
    orthonormal columns ``2..N`` spanning the complement of the uniform
    vector; they become rows ``2..N`` of ``T``. Masses follow from requiring a
    diagonal kinetic term: ``M_i = M / (T T^T)_ii``.
    """
    if n < 1:
        raise InvalidParameter("N must be >= 1")
    uniform = np.full(n, 1.0 / np.sqrt(n))
    w = -uniform
    w[0] += 1.0
    norm2 = w @ w
    h = np.eye(n) if norm2 < 1e-30 else np.eye(n) - 2.0 * np.outer(w, w) / norm2
    t = h.T.copy()
    t[0] = 1.0 / n
    masses = np.full(n, float(mass))
    masses[0] = n * mass
    t.setflags(write=False)
    masses.setflags(write=False)
    return ComTransform(t, masses)


@dataclass(frozen=True)
class TwoObjectModel:
    n: int
    coupling: np.ndarray
    mass: float = 1.0
    omega: float = 1.0
    internal: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("N must be >= 1")
        if not (self.mass > 0 and self.omega > 0):
            raise InvalidParameter("mass and omega must be positive")
        g = np.array(self.coupling, dtype=float).reshape(self.n, self.n)
        k = np.zeros((self.n, self.n)) if self.internal is None else np.array(self.internal, dtype=float)
        if k.shape != (self.n, self.n):
            raise InvalidParameter(f"internal coupling must be {self.n}x{self.n}")
        if np.max(np.abs(k - k.T), initial=0.0) > 1e-12 * max(1.0, np.abs(k).max(initial=0.0)):
            raise InvalidParameter("internal coupling must be symmetric")
        if np.max(np.abs(k.sum(axis=1)), initial=0.0) > 1e-12 * max(1.0, np.abs(k).max(initial=0.0)):
            raise InvalidParameter("internal coupling must annihilate the uniform vector")
        g.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "coupling", g)
        object.__setattr__(self, "internal", k)

    @classmethod
    def pairwise(cls, n: int, g0: float, **kw) -> "TwoObjectModel":
        return cls(n, g0 * np.eye(n), **kw)

    @classmethod
    def one_to_all(cls, n: int, g0: float, **kw) -> "TwoObjectModel":
        return cls(n, np.full((n, n), float(g0)), **kw)

    @property
    def pattern(self) -> str:
        """``"pairwise"``, ``"one-to-all"`` or ``"general"``; N=1 counts as pairwise."""
        g = self.coupling
        g0 = g[0, 0]
        if np.all(np.abs(g - g0 * np.eye(self.n)) <= PATTERN_ATOL):
            return "pairwise"
        if np.all(np.abs(g - g0) <= PATTERN_ATOL):
            return "one-to-all"
        return "general"

    @property
    def g0(self) -> float:
        return float(self.coupling[0, 0])

    def on_site(self) -> np.ndarray:
        return self.mass * self.omega**2 * np.eye(self.n) + self.internal


def uniform_kernel(n: int, strength: float) -> np.ndarray:
    """All-to-all internal coupling ``strength * sum_{i<j} (x_i - x_j)^2``."""
    return 2.0 * strength * (n * np.eye(n) - np.ones((n, n)))


def build_hamiltonian(m: TwoObjectModel) -> QuadraticHamiltonian:
    """``2N``-mode Hamiltonian; raises NonPositivePotential when unstable."""
    block = m.on_site()
    v = np.block([[block, m.coupling], [m.coupling.T, block]])
    h = QuadraticHamiltonian(v, np.full(2 * m.n, m.mass))
    h.normal_modes()
    return h


def collective_map(n: int) -> np.ndarray:
    """``blockdiag(T, T)``: positions of both objects to collective coordinates."""
    t = com_transform(n).matrix
    return block_diag(t, t)


def collective_symplectic(n: int) -> np.ndarray:
    """Phase-space matrix of the collective map in ``(x, p)`` ordering."""
    a = collective_map(n)
    return block_diag(a, np.linalg.inv(a).T)


def transformed_interaction(m: TwoObjectModel) -> np.ndarray:
    """``G_hat = T^-T G T^-1`` so that ``H_I = X_a^T G_hat X_b``."""
    t_inv = com_transform(m.n).inverse
    return t_inv.T @ m.coupling @ t_inv


def transformed_potential(m: TwoObjectModel) -> np.ndarray:
    """Full ``2N x 2N`` potential in collective coordinates."""
    a_inv = np.linalg.inv(collective_map(m.n))
    block = m.on_site()
    v = np.block([[block, m.coupling], [m.coupling.T, block]])
    return a_inv.T @ v @ a_inv


def collective_state(m: TwoObjectModel, temperature: float = 0.0) -> GaussianState:
    """Gibbs state of the full system expressed in collective coordinates."""
    full = thermal_state(build_hamiltonian(m), temperature)
    return canonical_transform(full, collective_map(m.n))


def com_state(m: TwoObjectModel, temperature: float = 0.0) -> GaussianState:
    """Two-mode reduced state of the two COM coordinates."""
    return reduce(collective_state(m, temperature), [0, m.n])


def com_effective_hamiltonian(m: TwoObjectModel) -> QuadraticHamiltonian:
    """Two-mode COM Hamiltonian after rescaling ``X_1 -> sqrt(N) X_1``.

    Masses become ``M`` again and the coupling becomes ``N G0``. Only valid for
    the one-to-all pattern, where the COM pair decouples from the relative
    coordinates.
    """
    if m.pattern != "one-to-all" and m.n != 1:
        raise PatternMismatch("effective COM Hamiltonian requires the one-to-all pattern")
    k = m.mass * m.omega**2
    g = m.n * m.g0
    h = QuadraticHamiltonian([[k, g], [g, k]], [m.mass, m.mass])
    h.normal_modes()
    return h


def com_scaling_factors(m: TwoObjectModel) -> np.ndarray:
    """Local factors that map :func:`com_state` onto the effective two-mode state."""
    s = np.sqrt(com_transform(m.n, m.mass).masses[0] / m.mass)
    return np.array([s, s])


def com_negativity(m: TwoObjectModel, temperature: float = 0.0) -> float:
    return log_negativity(com_state(m, temperature), [1])


def pair_state(m: TwoObjectModel, index: int, temperature: float = 0.0) -> GaussianState:
    if not 0 <= index < m.n:
        raise InvalidParameter(f"pair index {index} out of range for N={m.n}")
    return reduce(collective_state(m, temperature), [index, m.n + index])


def pair_negativity(m: TwoObjectModel, index: int, temperature: float = 0.0) -> float:
    """Negativity between collective mode ``index`` of object a and of object b."""
    if m.pattern != "pairwise":
        raise PatternMismatch("pair negativity requires the pairwise pattern")
    return log_negativity(pair_state(m, index, temperature), [1])


def _ppt_margin(m: TwoObjectModel, index: int, temperature: float) -> float:
    # smallest partially transposed symplectic eigenvalue minus 1/2; < 0 means entangled
    state = pair_state(m, index, temperature)
    return float(symplectic_spectrum(partial_transpose(state, [1])).values[0] - 0.5)


def critical_temperature(
    m: TwoObjectModel, tol: float = 1e-6, index: int = 0, max_doublings: int = 200
) -> float:
    """Temperature above which the pair ``index`` (COM by default) is separable.

    The bracket starts at ``T = Omega`` and doubles until the pair is PPT, then
    bisection runs until the bracket is below ``tol`` relative width.
    """
    if tol <= 0:
        raise InvalidParameter("tol must be positive")
    if _ppt_margin(m, index, 0.0) >= -1e-12:
        raise NoEntanglementAtZeroT("the pair is not entangled at T = 0")
    lo, hi = 0.0, float(m.omega)
    for _ in range(max_doublings):
        if _ppt_margin(m, index, hi) >= 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise InvalidParameter("could not bracket the critical temperature")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if _ppt_margin(m, index, mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
