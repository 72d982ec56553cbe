"""Brute-force number-basis reference for small quadratic Hamiltonians.

This module does not use any covariance formula from :mod:`oscnet.gaussian`.
Each mode ``i`` is expanded in the Fock basis of its own uncoupled oscillator
(mass ``m_i``, frequency ``sqrt(V_ii / m_i)``), so the diagonal part of the
Hamiltonian is exact and truncation only affects the couplings
``V_ij x_i x_j``. The truncated Hamiltonian is then diagonalized directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as sla

from .errors import InvalidModeSet, NonPositivePotential, TooManyModes
from .gaussian import QuadraticHamiltonian

MAX_MODES = 3
MIN_CUTOFF = 10
DEFAULT_CUTOFF = 40
# above this Hilbert-space size thermal states are not attempted
MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class TruncatedState:
    """A pure (``amplitudes``) or mixed (``density``) state on ``cutoff**n``."""

    cutoff: int
    n_modes: int
    amplitudes: np.ndarray | None = None
    density: np.ndarray | None = None
    energy: float | None = None

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None

    def density_matrix(self) -> np.ndarray:
        if self.density is not None:
            return self.density
        psi = self.amplitudes
        return np.outer(psi, psi.conj())

    def tensor(self) -> np.ndarray:
        """Amplitudes as an ``n``-index tensor (pure states only)."""
        return self.amplitudes.reshape((self.cutoff,) * self.n_modes)


def _ladder(d: int) -> sparse.csr_matrix:
    return sparse.diags(np.sqrt(np.arange(1, d)), 1, format="csr")


def _embed(op, site: int, n: int, d: int):
    ops = [sparse.identity(d, format="csr")] * n
    ops[site] = op
    return _fold(lambda a, b: sparse.kron(a, b, format="csr"), ops)


def _check(h: QuadraticHamiltonian, cutoff: int) -> None:
    if h.n_modes > MAX_MODES:
        raise TooManyModes(f"oracle supports at most {MAX_MODES} modes, got {h.n_modes}")
    if cutoff < MIN_CUTOFF:
        raise ValueError(f"cutoff must be >= {MIN_CUTOFF}")
    if np.any(np.diag(h.potential) <= 0):
        raise NonPositivePotential("oracle needs positive on-site potentials")


def number_basis_hamiltonian(h: QuadraticHamiltonian, cutoff: int) -> sparse.csr_matrix:
    _check(h, cutoff)
    n, d = h.n_modes, cutoff
    a = _ladder(d)
    number = sparse.diags(np.arange(d, dtype=float), format="csr")
    freq = np.sqrt(np.diag(h.potential) / h.masses)
    ham = sparse.csr_matrix((d**n, d**n))
    xs = []
    for i in range(n):
        ham = ham + freq[i] * _embed(number + 0.5 * sparse.identity(d), i, n, d)
        # x = (a + a^dag) / sqrt(2 m w)
        xs.append(_embed((a + a.T) / np.sqrt(2.0 * h.masses[i] * freq[i]), i, n, d))
    for i in range(n):
        for j in range(i + 1, n):
            if h.potential[i, j] != 0.0:
                ham = ham + h.potential[i, j] * (xs[i] @ xs[j])
    return ham.tocsr()


def oracle_ground_state(h: QuadraticHamiltonian, cutoff: int = DEFAULT_CUTOFF) -> TruncatedState:
    ham = number_basis_hamiltonian(h, cutoff)
    dim = ham.shape[0]
    if dim <= MAX_DENSE_DIM:
        evals, evecs = np.linalg.eigh(ham.toarray())
    else:
        evals, evecs = sla.eigsh(ham, k=1, which="SA", tol=1e-13, maxiter=100000)
    k = int(np.argmin(evals))
    psi = np.real(evecs[:, k])
    psi = psi / np.linalg.norm(psi)
    return TruncatedState(cutoff, h.n_modes, amplitudes=psi, energy=float(evals[k]))


def oracle_thermal_state(
    h: QuadraticHamiltonian, temperature: float, cutoff: int = DEFAULT_CUTOFF
) -> TruncatedState:
    ham = number_basis_hamiltonian(h, cutoff)
    if ham.shape[0] > MAX_DENSE_DIM:
        raise TooManyModes(
            f"thermal oracle limited to dimension {MAX_DENSE_DIM}; lower the cutoff"
        )
    if temperature == 0:
        return oracle_ground_state(h, cutoff)
    evals, evecs = np.linalg.eigh(ham.toarray())
    weights = np.exp(-(evals - evals[0]) / temperature)
    weights /= weights.sum()
    rho = (evecs * weights) @ evecs.T
    rho /= np.trace(rho)
    energy = float(np.dot(weights, evals))
    return TruncatedState(cutoff, h.n_modes, density=0.5 * (rho + rho.T), energy=energy)


def _split(state: TruncatedState, modes) -> tuple[list[int], list[int]]:
    modes = sorted(set(int(m) for m in modes))
    if not modes or modes[0] < 0 or modes[-1] >= state.n_modes or len(modes) == state.n_modes:
        raise InvalidModeSet(f"invalid subsystem {modes}")
    rest = [m for m in range(state.n_modes) if m not in modes]
    return modes, rest


def reduced_density(state: TruncatedState, modes) -> np.ndarray:
    """Partial trace onto ``modes``."""
    keep, rest = _split(state, modes)
    d, n = state.cutoff, state.n_modes
    if state.is_pure:
        t = np.transpose(state.tensor(), keep + rest).reshape(d ** len(keep), -1)
        return t @ t.conj().T
    rho = state.density.reshape((d,) * (2 * n))
    order = keep + rest + [n + m for m in keep] + [n + m for m in rest]
    rho = np.transpose(rho, order).reshape(d ** len(keep), d ** len(rest), d ** len(keep), d ** len(rest))
    return np.einsum("ajbj->ab", rho)


def _vn_entropy(eigenvalues: np.ndarray) -> float:
    p = eigenvalues[eigenvalues > 1e-16]
    return float(-np.sum(p * np.log(p)))


def oracle_entropy(state: TruncatedState, modes=None) -> float:
    """Von Neumann entropy (nats) of the whole state or of a subsystem."""
    if modes is None or len(set(modes)) == state.n_modes:
        if state.is_pure:
            return 0.0
        return _vn_entropy(np.linalg.eigvalsh(state.density))
    return _vn_entropy(np.linalg.eigvalsh(reduced_density(state, modes)))


def oracle_log_negativity(state: TruncatedState, modes) -> float:
    """``ln ||rho^{T_B}||_1`` for the subsystem ``modes``.

    Mixed states use the explicit partial transpose of the density matrix.
    For pure states the trace norm equals ``(sum_k sqrt(lambda_k))^2`` over the
    Schmidt coefficients, which avoids building ``rho`` for three modes.
    """
    keep, rest = _split(state, modes)
    d, n = state.cutoff, state.n_modes
    if state.is_pure:
        t = np.transpose(state.tensor(), keep + rest).reshape(d ** len(keep), -1)
        schmidt = np.linalg.svd(t, compute_uv=False)
        return float(2.0 * np.log(np.sum(schmidt)))
    return float(np.log(1.0 + 2.0 * _negativity_mixed(state.density, keep, d, n)))


def _negativity_mixed(rho: np.ndarray, subsystem, d: int, n: int) -> float:
    tensor = rho.reshape((d,) * (2 * n))
    axes = list(range(2 * n))
    for m in subsystem:
        axes[m], axes[n + m] = axes[n + m], axes[m]
    pt = np.transpose(tensor, axes).reshape(d**n, d**n)
    ev = np.linalg.eigvalsh(0.5 * (pt + pt.T))
    return float(-np.sum(ev[ev < 0]))


def pure_state_log_negativity_via_density(state: TruncatedState, modes) -> float:
    """Density-matrix partial transpose applied to a pure state (small cutoffs)."""
    keep, _ = _split(state, modes)
    neg = _negativity_mixed(state.density_matrix(), keep, state.cutoff, state.n_modes)
    return float(np.log(1.0 + 2.0 * neg))
