"""Brute-force truncated photon-number-basis engine.

Everything here is exact up to the truncation: states are dense complex
vectors/matrices over |0>, ..., |dim-1>, unitaries are built by matrix
exponentials (padded and cropped for single-mode operators, blockwise over
total-photon-number sectors for the beamsplitter), and detector outcomes use
the Kelley-Kleiner POVM diag((1-eta)^n).  This engine is the independent
oracle for every result of :mod:`catscamp.phasespace`.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .phasespace import NegligibleEventError, DEFAULT_PROB_FLOOR

__all__ = [
    "TruncationError",
    "FockVector",
    "FockDensity",
    "TwoModeFock",
    "annihilator",
    "vacuum_vector",
    "squeeze_operator",
    "squeeze_fock",
    "displacement_operator",
    "beamsplitter_fock",
    "ladder",
    "noclick_weights",
    "condition_fock",
    "fidelity_fock",
    "chi_from_fock",
    "hermite_functions",
    "position_distribution",
    "DEFAULT_DIM",
    "DIM_LADDER",
    "DEFAULT_TAIL_TOL",
    "TAIL_MARGIN",
]

DEFAULT_DIM = 40
DIM_LADDER = (40, 60, 80, 100)
DEFAULT_TAIL_TOL = 1e-10
TAIL_MARGIN = 5
OPERATOR_PAD = 20


class TruncationError(Exception):
    """A state does not fit the photon-number truncation in use."""

    def __init__(self, message, suggested_dim=None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockVector:
    """Pure state over number states |0>, ..., |dim-1>."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amps must be a nonempty 1-d array")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / n)

    def tail_mass(self, margin: int = TAIL_MARGIN) -> float:
        """Population in the top ``margin`` number states; small when the
        truncation is adequate."""
        return float(np.sum(np.abs(self.amps[max(0, self.dim - margin):]) ** 2))

    def check_tail(self, tol: float = DEFAULT_TAIL_TOL, margin: int = TAIL_MARGIN):
        tail = self.tail_mass(margin)
        if tail > tol:
            raise TruncationError(
                f"tail mass {tail:.3e} above {tol:.1e} at dim {self.dim}; "
                f"increase the truncation",
                suggested_dim=2 * self.dim,
            )
        return self


@dataclass(frozen=True)
class FockDensity:
    """Mixed state as a dense dim x dim matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True)
class TwoModeFock:
    """Two-mode state over the product number basis |n1, n2>.

    Pure states carry ``amps`` of shape (d1, d2); mixed states carry
    ``density`` of shape (d1, d2, d1, d2) with ket indices first.  Exactly
    one of the two is set.
    """

    amps: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if (self.amps is None) == (self.density is None):
            raise ValueError("provide exactly one of amps or density")
        if self.amps is not None:
            a = np.asarray(self.amps, dtype=complex)
            if a.ndim != 2:
                raise ValueError("amps must be 2-d (one axis per mode)")
            object.__setattr__(self, "amps", _frozen(a))
        else:
            d = np.asarray(self.density, dtype=complex)
            if d.ndim != 4 or d.shape[:2] != d.shape[2:]:
                raise ValueError("density must have shape (d1, d2, d1, d2)")
            object.__setattr__(self, "density", _frozen(d))

    @property
    def pure(self) -> bool:
        return self.amps is not None

    @property
    def dims(self):
        return self.amps.shape if self.pure else self.density.shape[:2]

    def norm(self) -> float:
        if self.pure:
            return float(np.linalg.norm(self.amps))
        return float(np.einsum("jnjn->", self.density).real)


def vacuum_vector(dim: int) -> FockVector:
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    return FockVector(amps)


def annihilator(dim: int) -> np.ndarray:
    """Truncated annihilation matrix, a[n-1, n] = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


@functools.lru_cache(maxsize=64)
def squeeze_operator(s: float, dim: int, pad: int = OPERATOR_PAD) -> np.ndarray:
    """Single-mode squeezer exp(s/2 (a^2 - a^dag^2)), cropped to dim x dim.

    Built by dense matrix exponential at dim + pad so the crop is accurate
    for states supported well inside the truncation.  Real s; positive s
    shrinks the y quadrature of the characteristic function.
    """
    big = dim + pad
    a = annihilator(big)
    gen = 0.5 * s * (a @ a - a.conj().T @ a.conj().T)
    return expm(gen)[:dim, :dim]


def squeeze_fock(state: FockVector, s: float, pad: int = OPERATOR_PAD,
                 check_tail: bool = True, tail_tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    """Apply the squeezing operator to a pure state.

    Raises :class:`TruncationError` if the result's tail mass shows the
    truncation is too small for this squeezing.
    """
    if abs(s) > 2.0:
        raise ValueError("|s| <= 2 is the supported squeezing range")
    out = FockVector(squeeze_operator(float(s), state.dim, pad) @ state.amps)
    if check_tail:
        out.check_tail(tail_tol)
    return out


def displacement_operator(xi: complex, dim: int, pad: int = OPERATOR_PAD) -> np.ndarray:
    """D(xi) = exp(xi a^dag - xi^* a), cropped to dim x dim."""
    big = dim + pad
    a = annihilator(big)
    return expm(xi * a.conj().T - np.conj(xi) * a)[:dim, :dim]


def ladder(state: FockVector, which: str):
    """Apply a bare ladder operator; returns (unnormalized vector, norm).

    ``which`` is ``"annihilate"`` or ``"create"``.  Annihilating the vacuum
    returns the zero vector with norm 0.  The norm is what event
    probabilities are built from, so no renormalization happens here.
    """
    n = np.arange(state.dim, dtype=float)
    if which == "annihilate":
        out = np.zeros_like(state.amps)
        out[:-1] = np.sqrt(n[1:]) * state.amps[1:]
    elif which == "create":
        out = np.zeros_like(state.amps)
        out[1:] = np.sqrt(n[1:]) * state.amps[:-1]
    else:
        raise ValueError("which must be 'annihilate' or 'create'")
    vec = FockVector(out)
    return vec, vec.norm()


# ---------------------------------------------------------------------------
# beamsplitter
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def _beamsplitter_blocks(t: float, r: float, dim: int):
    """Unitary blocks of the mode mixer, one per total photon number.

    The generator theta (b^dag a - a^dag b) with theta = atan2(r, t) sends
    |alpha, beta> to |t alpha - r beta, t beta + r alpha> and conserves the
    total photon number, so the unitary is exponentiated sector by sector.
    Sectors clipped by the truncation use the restricted generator, which is
    still antisymmetric: each block stays exactly unitary.
    """
    theta = float(np.arctan2(r, t))
    blocks = []
    for total in range(2 * dim - 1):
        lo = max(0, total - dim + 1)
        hi = min(total, dim - 1)
        m = np.arange(lo, hi + 1)
        size = m.size
        gen = np.zeros((size, size))
        for idx, mm in enumerate(m):
            # b^dag a : |m, total-m> -> sqrt(m (total-m+1)) |m-1, total-m+1>
            if mm - 1 >= lo:
                gen[idx - 1, idx] += np.sqrt(mm * (total - mm + 1))
            # -a^dag b : |m, total-m> -> -sqrt((m+1)(total-m)) |m+1, total-m-1>
            if mm + 1 <= hi:
                gen[idx + 1, idx] -= np.sqrt((mm + 1) * (total - mm))
        blocks.append((m, expm(theta * gen).astype(complex)))
    return tuple(blocks)


def _apply_blocks(amps: np.ndarray, blocks) -> np.ndarray:
    out = np.zeros_like(amps)
    for total, (m, block) in enumerate(blocks):
        out[m, total - m] = block @ amps[m, total - m]
    return out


def beamsplitter_fock(state: TwoModeFock, t: float, r: float) -> TwoModeFock:
    """Apply the two-mode beamsplitter unitary (pure or mixed state)."""
    if abs(t * t + r * r - 1.0) > 1e-12:
        raise ValueError(f"(t, r) = ({t}, {r}) is not unitary: t^2 + r^2 != 1")
    d1, d2 = state.dims
    if d1 != d2:
        raise ValueError("beamsplitter requires equal mode dimensions")
    blocks = _beamsplitter_blocks(float(t), float(r), d1)
    if state.pure:
        return TwoModeFock(amps=_apply_blocks(state.amps, blocks))
    # U rho U^dag: blocks on the ket pair, conjugate blocks on the bra pair
    rho = state.density.reshape(d1, d2, d1 * d2)
    rho = np.stack([_apply_blocks(rho[:, :, k], blocks) for k in range(d1 * d2)], axis=2)
    rho = rho.reshape(d1, d2, d1, d2).transpose(2, 3, 0, 1).conj()
    rho = rho.reshape(d1, d2, d1 * d2)
    rho = np.stack([_apply_blocks(rho[:, :, k], blocks) for k in range(d1 * d2)], axis=2)
    rho = rho.reshape(d1, d2, d1, d2).transpose(2, 3, 0, 1).conj()
    return TwoModeFock(density=rho)


# ---------------------------------------------------------------------------
# detection, fidelity, characteristic function
# ---------------------------------------------------------------------------

def noclick_weights(eta: float, dim: int) -> np.ndarray:
    """Kelley-Kleiner no-click POVM diagonal (1-eta)^n."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    return (1.0 - eta) ** np.arange(dim, dtype=float)


def condition_fock(
    state: TwoModeFock,
    mode: int,
    eta: float,
    outcome: str,
    prob_floor: float = DEFAULT_PROB_FLOOR,
):
    """Geiger-mode detection on one mode of a two-mode state.

    Returns ``(FockDensity, probability)`` on the kept mode; the density is
    renormalized.  ``outcome`` is ``"no_click"`` or ``"click"``.
    """
    if mode not in (0, 1):
        raise ValueError("mode must be 0 or 1")
    w = noclick_weights(eta, state.dims[mode])
    if outcome == "click":
        w = 1.0 - w
    elif outcome != "no_click":
        raise ValueError("outcome must be 'no_click' or 'click'")
    if state.pure:
        amps = state.amps if mode == 1 else state.amps.T  # measured axis last
        rho = np.einsum("jn,n,kn->jk", amps, w, amps.conj())
    elif mode == 1:
        rho = np.einsum("jnkn,n->jk", state.density, w)
    else:
        rho = np.einsum("njnk,n->jk", state.density, w)
    prob = float(np.trace(rho).real)
    if prob < prob_floor:
        raise NegligibleEventError(
            f"outcome '{outcome}' probability {prob:.3e} below floor {prob_floor:.1e}"
        )
    return FockDensity(rho / prob), prob


def fidelity_fock(pure, rho) -> float:
    """<psi| rho |psi> for a pure state against a pure or mixed state."""
    psi = pure.amps
    if isinstance(rho, FockVector):
        d = min(psi.size, rho.amps.size)
        return float(np.abs(np.vdot(psi[:d], rho.amps[:d])) ** 2)
    mat = rho.matrix
    d = min(psi.size, mat.shape[0])
    val = np.vdot(psi[:d], mat[:d, :d] @ psi[:d])
    return float(val.real)


def chi_from_fock(state, xi) -> complex:
    """Symmetric-order characteristic function Tr[rho D(xi)].

    ``state`` may be a FockVector, FockDensity or TwoModeFock; for two modes
    pass ``xi`` as a pair.  Emits a warning when |xi| probes beyond the
    region the truncation can support.
    """
    if isinstance(state, TwoModeFock):
        xi1, xi2 = xi
        d1, d2 = state.dims
        _truncation_probe_warning(max(abs(xi1), abs(xi2)), min(d1, d2))
        disp1 = displacement_operator(complex(xi1), d1)
        disp2 = displacement_operator(complex(xi2), d2)
        if state.pure:
            moved = disp1 @ state.amps @ disp2.T
            return complex(np.vdot(state.amps, moved))
        return complex(np.einsum("jnkm,kj,mn->", state.density, disp1, disp2))
    if isinstance(state, FockVector):
        _truncation_probe_warning(abs(xi), state.dim)
        disp = displacement_operator(complex(xi), state.dim)
        return complex(np.vdot(state.amps, disp @ state.amps))
    if isinstance(state, FockDensity):
        _truncation_probe_warning(abs(xi), state.dim)
        disp = displacement_operator(complex(xi), state.dim)
        return complex(np.trace(state.matrix @ disp))
    raise TypeError(f"unsupported state type {type(state)!r}")


def _truncation_probe_warning(radius: float, dim: int):
    if radius > 0.5 * np.sqrt(dim):
        warnings.warn(
            f"|xi| = {radius:.3g} probes beyond the reliable radius "
            f"sqrt(dim)/2 = {0.5 * np.sqrt(dim):.3g}",
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# position distribution (for Wigner marginal cross-checks)
# ---------------------------------------------------------------------------

def hermite_functions(n_max: int, q: np.ndarray) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions phi_n(q), n = 0..n_max-1.

    Convention a = (q + i p)/sqrt(2): phi_0 = pi^-1/4 exp(-q^2/2) and the
    stable three-term recurrence upward in n.  Returns shape (n_max, len(q)).
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.zeros((n_max, q.size))
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * q * q)
    if n_max > 1:
        out[1] = np.sqrt(2.0) * q * out[0]
    for n in range(2, n_max):
        out[n] = np.sqrt(2.0 / n) * q * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


def position_distribution(state, q: np.ndarray) -> np.ndarray:
    """P(q) of a single-mode state in the a = (q + i p)/sqrt(2) convention."""
    if isinstance(state, FockVector):
        phi = hermite_functions(state.dim, q)
        psi_q = state.amps @ phi
        return np.abs(psi_q) ** 2
    if isinstance(state, FockDensity):
        phi = hermite_functions(state.dim, q)
        return np.einsum("nq,nm,mq->q", phi, state.matrix, phi).real
    raise TypeError(f"unsupported state type {type(state)!r}")
