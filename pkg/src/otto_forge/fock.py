"""Truncated-Fock-space brute-force oracle for Gaussian-state energetics.

Everything here deliberately avoids the closed forms of
:mod:`otto_forge.gaussian`: states are built as explicit matrices by
exponentiating truncated squeeze/displacement generators, and work content is
extracted spectrally, by pairing density-matrix eigenvalues (sorted
descending) with oscillator levels (sorted ascending). The analytic and
spectral routes validate each other; neither is allowed to call into the
other's formulas.

One numerical subtlety governs the guards: the exponential of a truncated
skew-Hermitian generator is exactly unitary at any cutoff, so the trace of
the built matrix stays near one even when the cutoff is far too small - the
mass that should leak past the cutoff is reflected back instead. The raw
trace deficit therefore only measures the thermal diagonal's tail, and the
guards additionally inspect the occupation mass parked on the top Fock
levels (the reflected mass lands there), which does detect an unresolved
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CutoffSearchFailed, CutoffTooSmall, DensityNotPositive
from .gaussian import GaussianModeState

DEFAULT_TAIL_TOL = 1e-9
HARD_CUTOFF_CAP = 4096

# Round-off policy for spectra: eigenvalues in [-1e-10, 0) are clipped to 0,
# anything lower means the truncation itself is broken.
_EIGENVALUE_FLOOR = -1e-10
_HERMITICITY_TOL = 1e-12
_ENTROPY_FLOOR = 1e-15


def annihilation(dim: int) -> np.ndarray:
    """Annihilation operator truncated to the lowest dim Fock levels."""
    a = np.zeros((dim, dim))
    if dim > 1:
        k = np.arange(1, dim)
        a[k - 1, k] = np.sqrt(k)
    return a


def thermal_probabilities(n_th: float, dim: int) -> np.ndarray:
    """Geometric Fock-level populations n^k / (n+1)^(k+1), truncated to dim."""
    if n_th == 0.0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    q = n_th / (n_th + 1.0)
    return q ** np.arange(dim) / (n_th + 1.0)


@dataclass(frozen=True)
class FockDensity:
    """Hermitian positive-semidefinite matrix on a truncated Fock basis.

    trace_deficit is 1 - trace (the diagonal tail mass lost to truncation);
    edge_mass is the occupation found on the top levels of the truncated
    basis, which bounds the mass the truncated unitaries failed to resolve.
    """

    matrix: np.ndarray
    trace_deficit: float
    edge_mass: float = 0.0

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian to 1e-12")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def tail_bound(self) -> float:
        """Estimate of the total unresolved mass beyond this cutoff."""
        return max(self.trace_deficit, self.edge_mass)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum in ascending order, clipped to [0, 1] after round-off checks."""
        ev = np.linalg.eigvalsh(self.matrix)
        if ev[0] < _EIGENVALUE_FLOOR:
            raise DensityNotPositive(
                f"eigenvalue {ev[0]:.3e} below the {_EIGENVALUE_FLOOR:.0e} round-off floor"
            )
        return np.clip(ev, 0.0, 1.0)

    def populations(self) -> np.ndarray:
        """Diagonal occupation probabilities."""
        return np.real(np.diagonal(self.matrix))

    def mean_occupation(self) -> float:
        return float(self.populations() @ np.arange(self.dim))

    def mean_energy(self, omega: float) -> float:
        """Tr(rho H) for H = omega (a^dag a + 1/2) truncated to this basis."""
        return float(self.populations() @ (omega * (np.arange(self.dim) + 0.5)))


def _tridiagonal_skew_expm(subdiag: np.ndarray, real_result: bool) -> np.ndarray:
    """Exponential of the skew-Hermitian tridiagonal generator G.

    G has zero diagonal, G[k+1, k] = g_k and G[k, k+1] = -conj(g_k). A
    unit-modulus diagonal conjugation strips the phases of g, making iG
    similar to the real symmetric tridiagonal matrix with off-diagonal |g|,
    whose eigendecomposition reconstructs expm(G) with two dense matmuls
    (much cheaper than a Pade evaluation of the full matrix).
    """
    g = np.asarray(subdiag, dtype=complex)
    n = g.shape[0] + 1
    if n == 1:
        return np.ones((1, 1))
    lam, vecs = eigh_tridiagonal(np.zeros(n), np.abs(g))
    cos_part = (vecs * np.cos(lam)) @ vecs.T
    sin_part = (vecs * np.sin(lam)) @ vecs.T
    # d_k = exp(i p_k) with p_0 = 0, p_{k+1} = p_k - (arg g_k + pi/2), so that
    # T = D (iG) D^dag is real; then expm(G)[j, k] = exp(i(p_k - p_j)) exp(-iT)[j, k]
    p = np.concatenate(([0.0], -np.cumsum(np.angle(g) + 0.5 * np.pi)))
    chi = p[None, :] - p[:, None]
    result = np.exp(1j * chi) * (cos_part - 1j * sin_part)
    return result.real if real_result else result


def _squeeze_exponential(r: float, phase: float, dim: int, real_result: bool) -> np.ndarray:
    """expm of (conj(xi) a^2 - xi a^dag^2)/2, xi = r e^{i phase}.

    The generator moves quanta in pairs, so it splits into even- and
    odd-parity blocks that are tridiagonal in the packed level index.
    """
    xi = r * complex(math.cos(phase), math.sin(phase))
    dtype = float if real_result else complex
    result = np.zeros((dim, dim), dtype=dtype)
    for offset in (0, 1):
        levels = np.arange(offset, dim, 2)
        if levels.size == 0:
            continue
        low = levels[:-1].astype(float)
        subdiag = -0.5 * xi * np.sqrt((low + 1.0) * (low + 2.0))
        block = _tridiagonal_skew_expm(subdiag, real_result)
        result[np.ix_(levels, levels)] = block
    return result


def _displacement_exponential(alpha: complex, dim: int, real_result: bool) -> np.ndarray:
    """expm of alpha a^dag - conj(alpha) a, tridiagonal in the level index."""
    k = np.arange(1, dim, dtype=float)
    return _tridiagonal_skew_expm(alpha * np.sqrt(k), real_result)


def _edge_mass(populations: np.ndarray) -> float:
    """Occupation parked on the top levels (level 0 never counts as edge)."""
    dim = populations.shape[0]
    window = max(4, dim // 16)
    lo = max(1, dim - window)
    if lo >= dim:
        return 0.0
    return float(np.sum(populations[lo:]))


def build_fock_density(
    state: GaussianModeState, cutoff: int, tail_tol: float = DEFAULT_TAIL_TOL
) -> FockDensity:
    """Construct D(alpha) S(r) rho_th S^dag D^dag on the lowest `cutoff` levels.

    The squeeze and displacement are exponentials of truncated generators
    (computed numerically, not from closed-form matrix elements), applied to
    the truncated geometric thermal diagonal. Raises CutoffTooSmall when the
    tail bound (trace deficit or edge occupation) exceeds tail_tol.
    """
    cutoff = int(cutoff)
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol must be in (0, 1), got {tail_tol!r}")

    p = thermal_probabilities(state.n_th, cutoff)

    # Phases force the complex path; centred real states stay in float64,
    # which roughly halves the cost and keeps eigvalsh real-symmetric.
    real_case = state.squeeze_phase == 0.0 and state.alpha.imag == 0.0

    dressing = None
    if state.r > 0.0:
        dressing = _squeeze_exponential(state.r, state.squeeze_phase, cutoff, real_case)
    if state.alpha != 0j:
        displacement = _displacement_exponential(state.alpha, cutoff, real_case)
        dressing = displacement if dressing is None else displacement @ dressing

    if dressing is None:
        rho = np.diag(p)
    else:
        rho = (dressing * p) @ dressing.conj().T
        rho = 0.5 * (rho + rho.conj().T)

    deficit = 1.0 - float(np.trace(rho).real)
    edge = _edge_mass(np.real(np.diagonal(rho)))
    if max(deficit, edge) > tail_tol:
        raise CutoffTooSmall(
            f"cutoff {cutoff} leaves tail mass {max(deficit, edge):.3e} "
            f"(trace deficit {deficit:.3e}, edge occupation {edge:.3e}) "
            f"above the tolerance {tail_tol:.3e}"
        )
    return FockDensity(matrix=rho, trace_deficit=deficit, edge_mass=edge)


def ergotropy_of_density(density: FockDensity, omega: float) -> float:
    """Spectral ergotropy Tr(rho H) - sum_k p_(k) omega (k + 1/2).

    p_(k) are the eigenvalues of rho sorted descending; pairing them with
    ascending oscillator levels realises the minimum over unitaries.
    """
    levels = omega * (np.arange(density.dim) + 0.5)
    passive = float(density.eigenvalues[::-1] @ levels)
    return density.mean_energy(omega) - passive


def ergotropy_fock(
    state: GaussianModeState,
    omega: float,
    cutoff: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """Brute-force ergotropy of the state on a truncated Fock basis."""
    return ergotropy_of_density(build_fock_density(state, cutoff, tail_tol), omega)


def entropy_fock(density: FockDensity) -> float:
    """Von Neumann entropy -sum p ln p over eigenvalues above 1e-15."""
    ev = density.eigenvalues
    ev = ev[ev >= _ENTROPY_FLOOR]
    return float(-(ev @ np.log(ev)))


def recommended_cutoff_guess(state: GaussianModeState) -> int:
    """Seed for the cutoff search, several times the bulk occupation extent."""
    spread = (2.0 * state.n_th + 1.0) * math.exp(2.0 * state.r) / 2.0
    return math.ceil(8.0 * (spread + abs(state.alpha) ** 2) + 16.0)


def choose_cutoff(
    state: GaussianModeState,
    tail_tol: float,
    hard_cap: int = HARD_CUTOFF_CAP,
) -> int:
    """Smallest cutoff whose density passes the tail guard at tail_tol.

    Seeds the search at :func:`recommended_cutoff_guess`, doubles upward
    until the guard passes (raising CutoffSearchFailed past hard_cap), then
    bisects downward. The tail bound is monotone in the cutoff up to edge
    effects of bumpy occupation distributions, so the result may sit a few
    levels above the true minimum in pathological cases.
    """
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol must be in (0, 1), got {tail_tol!r}")

    def passes(cutoff: int) -> bool:
        try:
            build_fock_density(state, cutoff, tail_tol)
        except CutoffTooSmall:
            return False
        return True

    guess = min(recommended_cutoff_guess(state), hard_cap)
    if passes(guess):
        lo, hi = 0, guess  # invariant: hi passes, lo fails (0 = no basis)
    else:
        lo, hi = guess, None
        cutoff = guess
        while cutoff < hard_cap:
            cutoff = min(2 * cutoff, hard_cap)
            if passes(cutoff):
                hi = cutoff
                break
            lo = cutoff
        if hi is None:
            raise CutoffSearchFailed(
                f"no cutoff up to {hard_cap} reaches tail tolerance {tail_tol:.3e} "
                f"for state {state}"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi
