"""Gaussian states and symplectic operations in phase space.

Conventions used throughout the package:

* quadratures ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))``,
  so the vacuum has variance 1/2 in each quadrature;
* phase-space vectors are ordered ``(x1, p1, x2, p2, ...)``;
* the symplectic form is block diagonal with blocks ``[[0, 1], [-1, 0]]``;
* a complex amplitude ``alpha`` shifts ``(x, p)`` by
  ``(sqrt(2) Re alpha, sqrt(2) Im alpha)``;
* entropies and mutual informations are in bits unless ``base`` is given.

Modes are indexed from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
SYMPLECTIC_TOL = 1e-9


class UnphysicalStateError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


def symplectic_form(num_modes: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form for ``num_modes`` modes."""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _symplectic_spectrum(cov: np.ndarray) -> np.ndarray:
    n = cov.shape[0] // 2
    # eigenvalues of Omega @ cov come in pairs +-i nu
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cov)))
    return moduli[::2]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an n-mode bosonic Gaussian state.

    Construction validates symmetry of ``cov`` and the physicality
    condition (all symplectic eigenvalues at least 1/2).
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(self.mean).reshape(-1)
        cov = _frozen(self.cov)
        if mean.size == 0 or mean.size % 2:
            raise ValueError("mean must have even, nonzero length 2n")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"cov has shape {cov.shape}, expected {(mean.size, mean.size)}"
            )
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise ValueError("moments must be finite")
        asym = np.max(np.abs(cov - cov.T))
        if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValueError(f"covariance matrix not symmetric (max asymmetry {asym:.3g})")
        nu = _symplectic_spectrum(cov)
        if nu[0] < 0.5 - PHYSICALITY_TOL:
            raise UnphysicalStateError(
                f"smallest symplectic eigenvalue {nu[0]:.12g} is below 1/2"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def num_modes(self) -> int:
        return self.mean.size // 2

    def __repr__(self):
        return f"GaussianState(num_modes={self.num_modes}, mean={self.mean.tolist()})"


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Affine phase-space map ``v -> matrix @ v + displacement``."""

    matrix: np.ndarray
    displacement: np.ndarray | None = None

    def __post_init__(self):
        S = _frozen(self.matrix)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise ValueError("symplectic matrix must be square with even size")
        d = np.zeros(S.shape[0]) if self.displacement is None else self.displacement
        d = _frozen(d).reshape(-1)
        if d.size != S.shape[0]:
            raise ValueError("displacement length does not match matrix size")
        omega = symplectic_form(S.shape[0] // 2)
        err = np.max(np.abs(S @ omega @ S.T - omega))
        if err > SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic (residual {err:.3g})")
        object.__setattr__(self, "matrix", S)
        object.__setattr__(self, "displacement", d)

    @property
    def num_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        """Composition: ``(a @ b)`` applies ``b`` first, then ``a``."""
        if not isinstance(other, SymplecticOp):
            return NotImplemented
        if other.num_modes != self.num_modes:
            raise ValueError("cannot compose operations on different mode counts")
        return SymplecticOp(
            self.matrix @ other.matrix,
            self.matrix @ other.displacement + self.displacement,
        )

    def inverse(self) -> "SymplecticOp":
        S_inv = np.linalg.inv(self.matrix)
        return SymplecticOp(S_inv, -S_inv @ self.displacement)


def _quad_indices(modes: Iterable[int]) -> list[int]:
    idx = []
    for m in modes:
        idx.extend((2 * m, 2 * m + 1))
    return idx


def embed(op: SymplecticOp, modes: Sequence[int], num_modes: int) -> SymplecticOp:
    """Lift a local operation acting on ``modes`` into a ``num_modes`` system."""
    modes = list(modes)
    if len(modes) != op.num_modes:
        raise ValueError(f"operation acts on {op.num_modes} modes, got {len(modes)} targets")
    if len(set(modes)) != len(modes) or min(modes) < 0 or max(modes) >= num_modes:
        raise ValueError(f"invalid target modes {modes} for a {num_modes}-mode system")
    idx = _quad_indices(modes)
    S = np.eye(2 * num_modes)
    S[np.ix_(idx, idx)] = op.matrix
    d = np.zeros(2 * num_modes)
    d[idx] = op.displacement
    return SymplecticOp(S, d)


def _placed(op: SymplecticOp, modes: Sequence[int], num_modes: int | None) -> SymplecticOp:
    modes = list(modes)
    if num_modes is None:
        num_modes = max(modes) + 1
    if num_modes == op.num_modes and modes == list(range(num_modes)):
        return op
    return embed(op, modes, num_modes)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def vacuum(n: int) -> GaussianState:
    if n < 1:
        raise ValueError("vacuum needs at least one mode")
    return GaussianState(np.zeros(2 * n), 0.5 * np.eye(2 * n))


def coherent(alpha: complex) -> GaussianState:
    alpha = complex(alpha)
    mean = math.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return GaussianState(mean, 0.5 * np.eye(2))


def thermal(n_photons: float) -> GaussianState:
    """Single-mode thermal state with ``n_photons`` mean occupation."""
    if n_photons < 0:
        raise ValueError("mean photon number must be nonnegative")
    return GaussianState(np.zeros(2), (n_photons + 0.5) * np.eye(2))


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum ``exp[r(a^dag b^dag - a b)]|00>``.

    Each mode has quadrature variance ``cosh(2r)/2``; the x quadratures are
    correlated and the p quadratures anticorrelated with magnitude
    ``sinh(2r)/2``.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative; swap modes instead")
    c = math.cosh(2 * r) / 2
    s = math.sinh(2 * r) / 2
    cov = np.array(
        [
            [c, 0, s, 0],
            [0, c, 0, -s],
            [s, 0, c, 0],
            [0, -s, 0, c],
        ]
    )
    return GaussianState(np.zeros(4), cov)


def tensor(*states: GaussianState) -> GaussianState:
    """Product state of the given states, modes concatenated in order."""
    if not states:
        raise ValueError("need at least one state")
    mean = np.concatenate([s.mean for s in states])
    cov = np.zeros((mean.size, mean.size))
    k = 0
    for s in states:
        m = s.mean.size
        cov[k : k + m, k : k + m] = s.cov
        k += m
    return GaussianState(mean, cov)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def identity(num_modes: int) -> SymplecticOp:
    return SymplecticOp(np.eye(2 * num_modes))


def displacement(alpha: complex, mode: int = 0, num_modes: int | None = None) -> SymplecticOp:
    alpha = complex(alpha)
    local = SymplecticOp(np.eye(2), math.sqrt(2.0) * np.array([alpha.real, alpha.imag]))
    return _placed(local, [mode], num_modes)


def phase_rotation(phi: float, mode: int = 0, num_modes: int | None = None) -> SymplecticOp:
    """Phase shift ``a -> a e^{-i phi}``."""
    c, s = math.cos(phi), math.sin(phi)
    return _placed(SymplecticOp(np.array([[c, s], [-s, c]])), [mode], num_modes)


def one_mode_squeezer(R: float, mode: int = 0, num_modes: int | None = None) -> SymplecticOp:
    """Single-mode squeezer ``diag(e^-R, e^R)``.

    Positive ``R`` suppresses x noise (vacuum x variance becomes
    ``e^{-2R}/2``); negative ``R`` suppresses p noise.
    """
    return _placed(SymplecticOp(np.diag([math.exp(-R), math.exp(R)])), [mode], num_modes)


def beam_splitter(
    theta: float, modes: tuple[int, int] = (0, 1), num_modes: int | None = None
) -> SymplecticOp:
    """Phase-free beam splitter with transmissivity ``cos(theta)**2``.

    Mode amplitudes transform as ``a_i -> cos(theta) a_i - sin(theta) a_j``
    and ``a_j -> sin(theta) a_i + cos(theta) a_j``; x and p pairs are mixed
    identically. ``theta`` must lie in ``[-pi/2, pi/2]``; negative angles
    give the inverse element.
    """
    if not -math.pi / 2 <= theta <= math.pi / 2:
        raise ValueError(f"mixing angle {theta} outside [-pi/2, pi/2]")
    c, s = math.cos(theta), math.sin(theta)
    local = np.kron(np.array([[c, -s], [s, c]]), np.eye(2))
    return _placed(SymplecticOp(local), list(modes), num_modes)


def two_mode_squeezer(
    r: float, modes: tuple[int, int] = (0, 1), num_modes: int | None = None
) -> SymplecticOp:
    """Unitary ``exp[r(a^dag b^dag - a b)]`` as a phase-space map."""
    c, s = math.cosh(r), math.sinh(r)
    S = np.array(
        [
            [c, 0, s, 0],
            [0, c, 0, -s],
            [s, 0, c, 0],
            [0, -s, 0, c],
        ]
    )
    return _placed(SymplecticOp(S), list(modes), num_modes)


def qnd_triple_gate(
    modes: tuple[int, int, int] = (0, 1, 2), num_modes: int | None = None
) -> SymplecticOp:
    """Heisenberg action of ``exp[-i(x1 p3 - p2 x3)]`` on modes (1, 2, 3).

    Integrating the flow generated by ``x1 p3 - p2 x3`` for unit time gives::

        x1 -> x1                    p1 -> p1 - p3 - p2/2
        x2 -> x2 - x3 - x1/2        p2 -> p2
        x3 -> x3 + x1               p3 -> p3 + p2

    so the output of the third mode carries ``(x3 + x1, p3 + p2)``.
    """
    S = np.array(
        [
            # x1   p1   x2   p2   x3   p3
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, -0.5, 0.0, -1.0],
            [-0.5, 0.0, 1.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 1.0],
        ]
    )
    return _placed(SymplecticOp(S), list(modes), num_modes)


def apply(op: SymplecticOp, state: GaussianState) -> GaussianState:
    """Evolve ``state`` under ``op``: mean -> S mean + d, cov -> S cov S^T."""
    if op.num_modes != state.num_modes:
        raise ValueError(
            f"operation acts on {op.num_modes} modes but state has {state.num_modes}"
        )
    S = op.matrix
    cov = S @ state.cov @ S.T
    return GaussianState(S @ state.mean + op.displacement, 0.5 * (cov + cov.T))


def partial_trace(state: GaussianState, keep: Iterable[int]) -> GaussianState:
    """Reduced state on the modes in ``keep`` (kept in the given order)."""
    keep = list(keep)
    if not keep:
        raise ValueError("must keep at least one mode")
    if len(set(keep)) != len(keep) or min(keep) < 0 or max(keep) >= state.num_modes:
        raise ValueError(f"invalid mode subset {keep} for {state.num_modes} modes")
    idx = _quad_indices(keep)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


def mean_photons(state: GaussianState, mode: int = 0) -> float:
    if not 0 <= mode < state.num_modes:
        raise ValueError(f"mode {mode} out of range")
    i, j = 2 * mode, 2 * mode + 1
    second = state.cov[i, i] + state.cov[j, j] + state.mean[i] ** 2 + state.mean[j] ** 2
    return float((second - 1.0) / 2.0)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """Symplectic eigenvalues of the covariance matrix, ascending."""
    return _symplectic_spectrum(state.cov)


def g_function(n: float, base: float = 2.0) -> float:
    """Entropy of a thermal state with mean photon number ``n``.

    ``g(n) = (1 + n) log(1 + n) - n log n`` with ``g(0) = 0``, evaluated as
    ``log(1 + n) + n log(1 + 1/n)`` to avoid cancellation at large ``n``.
    """
    if n < 0:
        raise ValueError("mean photon number must be nonnegative")
    if n == 0:
        return 0.0
    if n < 1.0:
        nats = math.log1p(n) + n * (math.log1p(n) - math.log(n))
    else:
        nats = math.log1p(n) + n * math.log1p(1.0 / n)
    return nats / math.log(base)


def entropy(state: GaussianState, base: float = 2.0) -> float:
    """Von Neumann entropy, summed over symplectic eigenvalues."""
    total = 0.0
    for nu in symplectic_eigenvalues(state):
        excess = nu - 0.5
        # rounding noise of the eigen-solver on pure modes
        if excess < 1e-12:
            continue
        total += g_function(excess, base)
    return total


def gaussian_mutual_information(signal_cov, transfer, noise_cov, base: float = 2.0) -> float:
    """Mutual information of the linear channel ``y = T s + noise``.

    With Gaussian signal covariance ``signal_cov`` and independent Gaussian
    noise this is ``1/2 log det(T Ss T^T + Sn) / det(Sn)``.
    """
    Ss = np.atleast_2d(np.asarray(signal_cov, dtype=float))
    T = np.atleast_2d(np.asarray(transfer, dtype=float))
    Sn = np.atleast_2d(np.asarray(noise_cov, dtype=float))
    k, m = Ss.shape[0], Sn.shape[0]
    if Ss.shape != (k, k) or Sn.shape != (m, m) or T.shape != (m, k):
        raise ValueError(
            f"incompatible shapes: signal {Ss.shape}, transfer {T.shape}, noise {Sn.shape}"
        )
    sign_n, logdet_n = np.linalg.slogdet(Sn)
    if sign_n <= 0 or not np.isfinite(logdet_n):
        raise ValueError("noise covariance must be positive definite")
    sign_y, logdet_y = np.linalg.slogdet(T @ Ss @ T.T + Sn)
    if sign_y <= 0:
        raise ValueError("output covariance is not positive definite")
    return float(0.5 * (logdet_y - logdet_n) / math.log(base))
