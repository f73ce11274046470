"""State constructors and closed-form scalars for the amplifier.

Every state used by the device exists in both representations: as a Gaussian
sum of characteristic-function terms (:mod:`catscamp.phasespace`) and as a
truncated number-basis vector (:mod:`catscamp.fock`).  Coherent amplitudes
and squeezing parameters are real throughout; the constructors reject
complex input.

The closed-form expressions at the bottom (channel parameters, overlaps, a
no-click probability) are scalar cross-checks.  Two of them are reference
forms carried over verbatim from the derivation notes and are known not to
match the engines everywhere (each fails an elementary limit, see their
docstrings); they are audited and reported, never load-bearing.  See
:mod:`catscamp.audit`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .fock import FockVector
from .phasespace import GaussianSumState, GaussianTerm, substitute_linear

__all__ = [
    "EVEN",
    "ODD",
    "PARITIES",
    "opposite_parity",
    "parity_sign",
    "CatSpec",
    "SqueezeSpec",
    "ChannelParams",
    "squeezing_db",
    "vacuum_chi",
    "coherent_chi",
    "squeezed_vacuum_chi",
    "squeezed_coherent_chi",
    "cat_chi",
    "squeeze_chi",
    "coherent_fock",
    "cat_fock",
    "squeezed_vacuum_fock",
    "squeezed_vacuum_amps_direct",
    "squeezed_coherent_fock",
    "make_state",
    "cat_squeezed_overlap",
    "optimal_squeezing",
    "comparison_channel_params",
    "noclick_prob_closed_form",
    "subtracted_squeezed_cat_overlap",
    "subtracted_cat_overlap_reference",
    "DEFAULT_ALPHA_MAX",
    "DEFAULT_SQUEEZE_MAX",
]

EVEN = "even"
ODD = "odd"
PARITIES = (EVEN, ODD)

DEFAULT_ALPHA_MAX = 2.0
DEFAULT_SQUEEZE_MAX = 1.5


def parity_sign(parity: str) -> int:
    if parity == EVEN:
        return +1
    if parity == ODD:
        return -1
    raise ValueError(f"parity must be '{EVEN}' or '{ODD}', got {parity!r}")


def opposite_parity(parity: str) -> str:
    return ODD if parity_sign(parity) > 0 else EVEN


def _real_scalar(value, name: str) -> float:
    """Coerce to float; complex amplitudes are rejected at the type level."""
    if isinstance(value, complex) or (
        isinstance(value, np.generic) and np.iscomplexobj(value)
    ):
        raise TypeError(f"{name} must be real; complex values are unsupported")
    return float(value)


@dataclass(frozen=True)
class CatSpec:
    """Cat state parameters: real amplitude plus an even/odd parity tag.

    The normalization constants are N_pm^2 = 1/(2 +- 2 exp(-2 alpha^2));
    the odd cat is undefined at alpha = 0 where its norm diverges.
    """

    alpha: float
    parity: str

    def __post_init__(self):
        alpha = _real_scalar(self.alpha, "alpha")
        parity_sign(self.parity)
        if self.parity == ODD and alpha <= 0.0:
            raise ValueError("odd cat requires alpha > 0 (norm diverges at 0)")
        if alpha < 0.0:
            raise ValueError("alpha must be nonnegative")
        object.__setattr__(self, "alpha", alpha)

    def norm_squared(self) -> float:
        """N_pm^2, computed cancellation-free near alpha = 0."""
        if self.parity == EVEN:
            return 1.0 / (2.0 + 2.0 * math.exp(-2.0 * self.alpha**2))
        return 1.0 / (-2.0 * math.expm1(-2.0 * self.alpha**2))


@dataclass(frozen=True)
class SqueezeSpec:
    """Signed squeezing parameter with its dB readout."""

    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", _real_scalar(self.s, "s"))

    @property
    def s_db(self) -> float:
        return squeezing_db(self.s)


def squeezing_db(s: float) -> float:
    """dB convention -10 log10(exp(2s)); negative s reads as positive dB."""
    return -20.0 * s / math.log(10.0)


@dataclass(frozen=True)
class ChannelParams:
    """Effective squeezing and amplitude after the comparison stage.

    ``noclick_prob`` carries the reference closed form, which is known to
    be unreliable (it evaluates to 1 at s = 0 for any amplitude,
    contradicting the direct calculation); ``noclick_prob_reliable`` stays
    False and the engines are the source of truth for probabilities.
    """

    s_prime: float
    alpha_prime: float
    noclick_prob: float
    noclick_prob_reliable: bool = False


# ---------------------------------------------------------------------------
# characteristic-function constructors
# ---------------------------------------------------------------------------

def vacuum_chi(n_modes: int = 1) -> GaussianSumState:
    """chi = exp(-sum |xi_j|^2 / 2)."""
    d = 2 * n_modes
    term = GaussianTerm(n_modes, 1.0, np.eye(d), np.zeros(d))
    return GaussianSumState(n_modes, (term,), "vacuum")


def coherent_chi(alpha: float) -> GaussianSumState:
    """chi(xi) = exp(xi alpha - xi^* alpha - |xi|^2/2) for real alpha."""
    alpha = _real_scalar(alpha, "alpha")
    term = GaussianTerm(1, 1.0, np.eye(2), np.array([0.0, 2.0j * alpha]))
    return GaussianSumState(1, (term,), f"coherent({alpha:g})")


def squeezed_vacuum_chi(s: float) -> GaussianSumState:
    """chi(xi) = exp(-(x^2 e^{2s} + y^2 e^{-2s})/2), xi = x + i y."""
    s = _real_scalar(s, "s")
    quad = np.diag([math.exp(2.0 * s), math.exp(-2.0 * s)])
    term = GaussianTerm(1, 1.0, quad, np.zeros(2))
    return GaussianSumState(1, (term,), f"squeezed_vacuum({s:g})")


def squeezed_coherent_chi(s: float, alpha: float) -> GaussianSumState:
    """Squeeze-then-displacement-ordered state S(s)|alpha> for real alpha.

    chi(xi) = exp(-(x^2 e^{2s} + y^2 e^{-2s})/2 + 2 i alpha e^{-s} y): the
    squeezer rescales the coherent state's linear coefficient along with the
    quadratic form.
    """
    s = _real_scalar(s, "s")
    alpha = _real_scalar(alpha, "alpha")
    quad = np.diag([math.exp(2.0 * s), math.exp(-2.0 * s)])
    lin = np.array([0.0, 2.0j * alpha * math.exp(-s)])
    term = GaussianTerm(1, 1.0, quad, lin)
    return GaussianSumState(1, (term,), f"squeezed_coherent(s={s:g},a={alpha:g})")


def cat_chi(alpha: float, parity: str) -> GaussianSumState:
    """Four-Gaussian characteristic function of an even/odd cat state.

    Two displaced-vacuum terms with imaginary linear parts (the |+a>, |-a>
    populations) plus two real-linear interference terms weighted by
    +-exp(-2 alpha^2).
    """
    spec = CatSpec(alpha, parity)
    a = spec.alpha
    sign = parity_sign(parity)
    norm2 = spec.norm_squared()
    eye = np.eye(2)
    cross = norm2 * sign * math.exp(-2.0 * a * a)
    terms = (
        GaussianTerm(1, norm2, eye, np.array([0.0, 2.0j * a])),
        GaussianTerm(1, norm2, eye, np.array([0.0, -2.0j * a])),
        GaussianTerm(1, cross, eye, np.array([-2.0 * a, 0.0])),
        GaussianTerm(1, cross, eye, np.array([2.0 * a, 0.0])),
    )
    return GaussianSumState(1, terms, f"cat({a:g},{parity})")


def squeeze_chi(state: GaussianSumState, s: float) -> GaussianSumState:
    """Apply the squeezer to a single-mode Gaussian sum.

    In the characteristic picture S(s) rescales the arguments,
    chi'(x, y) = chi(x e^s, y e^{-s}); term count is unchanged.
    """
    if state.n_modes != 1:
        raise ValueError("squeeze_chi acts on single-mode states")
    s = _real_scalar(s, "s")
    lmap = np.diag([math.exp(s), math.exp(-s)])
    out = substitute_linear(state, lmap)
    return GaussianSumState(1, out.terms, f"squeeze({s:g})[{state.label}]")


# ---------------------------------------------------------------------------
# number-basis constructors
# ---------------------------------------------------------------------------

def coherent_fock(alpha: float, dim: int = fock.DEFAULT_DIM) -> FockVector:
    """amps[n] = exp(-alpha^2/2) alpha^n / sqrt(n!), stable in log space."""
    alpha = _real_scalar(alpha, "alpha")
    amps = np.zeros(dim, dtype=complex)
    amps[0] = math.exp(-0.5 * alpha * alpha)
    if alpha != 0.0:
        n = np.arange(1, dim, dtype=float)
        log_mag = n * math.log(abs(alpha)) - 0.5 * np.cumsum(np.log(n))
        signs = np.ones(dim - 1) if alpha > 0 else (-1.0) ** n
        amps[1:] = signs * np.exp(-0.5 * alpha * alpha + log_mag)
    return FockVector(amps)


def cat_fock(alpha: float, parity: str, dim: int = fock.DEFAULT_DIM) -> FockVector:
    """Cat state amplitudes with exact zeros on the forbidden parity."""
    spec = CatSpec(alpha, parity)
    base = coherent_fock(spec.alpha, dim).amps
    n = np.arange(dim)
    keep = (n % 2 == 0) if parity == EVEN else (n % 2 == 1)
    amps = np.where(keep, 2.0 * base, 0.0)
    amps = amps * math.sqrt(spec.norm_squared())
    return FockVector(amps)


def squeezed_vacuum_fock(
    s: float, dim: int = fock.DEFAULT_DIM, check_tail: bool = True
) -> FockVector:
    return fock.squeeze_fock(fock.vacuum_vector(dim), _real_scalar(s, "s"),
                             check_tail=check_tail)


def squeezed_vacuum_amps_direct(s: float, dim: int) -> np.ndarray:
    """Series amplitudes sqrt((2m)!)/m! (-tanh(s)/2)^m sqrt(sech s).

    Independent of the matrix-exponential route; used to pin the squeezer
    convention.
    """
    amps = np.zeros(dim, dtype=complex)
    half_tanh = -0.5 * math.tanh(s)
    amps[0] = 1.0
    for m in range(1, (dim + 1) // 2):
        if half_tanh == 0.0:
            break
        log_mag = 0.5 * math.lgamma(2 * m + 1) - math.lgamma(m + 1)
        amps[2 * m] = (math.copysign(1.0, half_tanh) ** m) * math.exp(
            log_mag + m * math.log(abs(half_tanh))
        )
    amps *= math.sqrt(1.0 / math.cosh(s))
    return amps


def squeezed_coherent_fock(
    s: float, alpha: float, dim: int = fock.DEFAULT_DIM, check_tail: bool = True
) -> FockVector:
    """S(s)|alpha> in the number basis (squeeze after displacement)."""
    return fock.squeeze_fock(coherent_fock(alpha, dim), _real_scalar(s, "s"),
                             check_tail=check_tail)


_CHI_BUILDERS = {
    "coherent": lambda p: coherent_chi(p["alpha"]),
    "cat": lambda p: cat_chi(p["alpha"], p["parity"]),
    "squeezed_vacuum": lambda p: squeezed_vacuum_chi(p["s"]),
    "squeezed_coherent": lambda p: squeezed_coherent_chi(p["s"], p["alpha"]),
}

_FOCK_BUILDERS = {
    "coherent": lambda p, d: coherent_fock(p["alpha"], d),
    "cat": lambda p, d: cat_fock(p["alpha"], p["parity"], d),
    "squeezed_vacuum": lambda p, d: squeezed_vacuum_fock(p["s"], d),
    "squeezed_coherent": lambda p, d: squeezed_coherent_fock(p["s"], p["alpha"], d),
}


def make_state(
    kind: str,
    rep: str,
    alpha: float | None = None,
    s: float | None = None,
    parity: str | None = None,
    dim: int = fock.DEFAULT_DIM,
    alpha_max: float = DEFAULT_ALPHA_MAX,
    squeeze_max: float = DEFAULT_SQUEEZE_MAX,
):
    """Build any library state in either representation.

    ``rep`` is ``"chi"`` (Gaussian sum) or ``"fock"`` (number basis, at
    truncation ``dim``).  Default guardrails alpha <= 2 and |s| <= 1.5 keep
    the parameters inside the engines' validated range; pass larger bounds
    to override.
    """
    if kind not in _CHI_BUILDERS:
        raise ValueError(f"unknown state kind {kind!r}")
    params = {}
    if alpha is not None:
        alpha = _real_scalar(alpha, "alpha")
        if abs(alpha) > alpha_max:
            raise ValueError(f"alpha = {alpha} outside guardrail {alpha_max}")
        params["alpha"] = alpha
    if s is not None:
        s = _real_scalar(s, "s")
        if abs(s) > squeeze_max:
            raise ValueError(f"s = {s} outside guardrail {squeeze_max}")
        params["s"] = s
    if parity is not None:
        params["parity"] = parity
    if rep == "chi":
        return _CHI_BUILDERS[kind](params)
    if rep == "fock":
        return _FOCK_BUILDERS[kind](params, dim)
    raise ValueError(f"rep must be 'chi' or 'fock', got {rep!r}")


# ---------------------------------------------------------------------------
# closed-form scalars
# ---------------------------------------------------------------------------

def cat_squeezed_overlap(alpha: float, s: float) -> float:
    """|<even cat(alpha) | squeezed vacuum(s)>|^2 for real alpha.

    exp(-alpha^2 tanh s) / (cosh s cosh alpha^2); equals sech(alpha^2) at
    s = 0 (vacuum guess).
    """
    alpha = _real_scalar(alpha, "alpha")
    s = _real_scalar(s, "s")
    return math.exp(-alpha * alpha * math.tanh(s)) / (
        math.cosh(s) * math.cosh(alpha * alpha)
    )


def optimal_squeezing(alpha: float) -> SqueezeSpec:
    """The squeezing maximizing the even-cat overlap: s = -asinh(2 alpha^2)/2."""
    alpha = _real_scalar(alpha, "alpha")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return SqueezeSpec(-0.5 * math.asinh(2.0 * alpha * alpha))


def comparison_channel_params(alpha: float, s: float, r1: float) -> ChannelParams:
    """Squeezed-coherent parameters of the no-click comparison output.

    s' = ln sqrt((cosh s + (1-r1^2) sinh s)/(cosh s - (1-r1^2) sinh s)) and
    alpha' = r1 alpha cosh s / sqrt(cosh^2 s - (1-r1^2)^2 sinh^2 s).  The
    limits r1 -> 1 and r1 -> 0 give (0, alpha) and (s, 0).  The attached
    no-click probability is the reference closed form with its reliability
    flag down; use the engines for real probabilities.
    """
    alpha = _real_scalar(alpha, "alpha")
    s = _real_scalar(s, "s")
    if not 0.0 < r1 <= 1.0:
        raise ValueError(f"r1 must lie in (0, 1], got {r1}")
    u = 1.0 - r1 * r1
    ch, sh = math.cosh(s), math.sinh(s)
    s_prime = 0.5 * math.log((ch + u * sh) / (ch - u * sh))
    alpha_prime = r1 * alpha * ch / math.sqrt(ch * ch - u * u * sh * sh)
    return ChannelParams(
        s_prime=s_prime,
        alpha_prime=alpha_prime,
        noclick_prob=noclick_prob_closed_form(alpha, s, r1),
        noclick_prob_reliable=False,
    )


def noclick_prob_closed_form(alpha: float, s: float, r1: float) -> float:
    """Reference closed form for the stage-1 no-click probability (real alpha).

    Known defect: at s = 0 this evaluates to 1 for any alpha, while the
    direct calculation gives exp(-t1^2 alpha^2) because the vacuum guess
    leaks light into the detector arm.  Kept for the audit report; never
    used for pipeline numbers.
    """
    alpha = _real_scalar(alpha, "alpha")
    s = _real_scalar(s, "s")
    sh = math.sinh(s)
    u = 1.0 - r1 * r1
    den_plus = math.exp(-s) + r1 * r1 * sh
    den_minus = math.exp(s) - r1 * r1 * sh
    prefactor = math.sqrt(1.0 / (den_plus * den_minus))
    exponent = -math.exp(s) * u * sh * alpha * alpha / den_minus
    return prefactor * math.exp(exponent)


def subtracted_squeezed_cat_overlap(
    alpha: float,
    parity: str,
    s: float,
    beta: float,
    dim: int | None = None,
) -> float:
    """Fidelity of a photon-subtracted squeezed cat with an ideal cat.

    F = |<cat(beta, opposite parity)| a S(s) |cat(alpha, parity)>|^2 after
    normalizing the subtracted state, evaluated in the number basis (the
    authoritative route; the reference closed form lives in
    :func:`subtracted_cat_overlap_reference` and is audited against this).
    """
    CatSpec(beta, opposite_parity(parity))  # rejects beta = 0 odd targets
    if dim is None:
        dim = _auto_dim_for(alpha=max(abs(alpha), abs(beta)), s=s)
    squeezed = fock.squeeze_fock(cat_fock(alpha, parity, dim), s, check_tail=False)
    subtracted, norm = fock.ladder(squeezed, "annihilate")
    if norm == 0.0:
        raise ValueError("photon subtraction annihilated the state")
    target = cat_fock(beta, opposite_parity(parity), dim)
    return float(np.abs(np.vdot(target.amps, subtracted.amps / norm)) ** 2)


def subtracted_cat_overlap_reference(
    alpha: float, parity: str, s: float, beta: float
) -> float:
    """Reference closed form for the same overlap, kept verbatim.

    The upper signs are taken for even input, lower for odd.  The form
    fails its own s = 0, beta = alpha sanity limit (where exact photon
    subtraction should give fidelity 1), so it is reported by the audit,
    not patched and not used by the pipeline.
    """
    alpha = _real_scalar(alpha, "alpha")
    beta = _real_scalar(beta, "beta")
    sign = parity_sign(parity)
    ch, sh, th = math.cosh(s), math.sinh(s), math.tanh(s)
    sech = 1.0 / ch
    gamma = alpha * ch - alpha * sh
    term1 = (
        2.0
        * math.sqrt(sech)
        * math.exp(-((beta - gamma) ** 2) / 2.0 - th * (beta - gamma) ** 2 / 2.0)
        * (gamma - (beta - gamma) * th)
    )
    term2 = (
        2.0
        * math.sqrt(sech)
        * math.exp(-((beta + gamma) ** 2) / 2.0 - th * (beta + gamma) ** 2 / 2.0)
        * (sign * gamma + sign * (beta + gamma) * th)
    )
    norm_factor = (2.0 - sign * 2.0 * math.exp(-2.0 * beta * beta)) * (
        2.0 * alpha * alpha
        * (1.0 - sign * math.exp(-2.0 * alpha * alpha))
        * (ch * ch + sh * sh)
        + (2.0 + sign * 2.0 * math.exp(-2.0 * alpha * alpha))
        * (sh * sh - 2.0 * ch * sh * alpha * alpha)
    )
    if norm_factor <= 0.0:
        return float("nan")
    value = (term1 + term2) / math.sqrt(norm_factor)
    return value * value


def _auto_dim_for(alpha: float, s: float) -> int:
    """Smallest ladder truncation whose tail passes for these parameters."""
    for dim in fock.DIM_LADDER:
        try:
            squeezed_vacuum_fock(s, dim)
            cands = [cat_fock(alpha, EVEN, dim)]
            if alpha > 0:
                cands.append(cat_fock(alpha, ODD, dim))
            for c in cands:
                c.check_tail()
        except fock.TruncationError:
            continue
        return dim
    return fock.DIM_LADDER[-1]
