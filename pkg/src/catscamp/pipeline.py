"""The two-stage amplifier protocol, end to end, in both engines.

Stage 1 (comparison): the input state and a squeezed-vacuum guess meet on a
beamsplitter; a Geiger-mode detector watches the difference arm and the
output is kept only when it stays dark.  Stage 2 (subtraction): the kept
mode passes a highly transmitting beamsplitter whose weak reflected arm
must click.  A successful run subtracts a photon, so the ideal target is
always the opposite-parity cat; the optimal target size beta* is found by a
bracketed golden-section search of the output fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import fock, states
from .fock import FockDensity, TwoModeFock
from .optimize import BracketError, golden_section_max
from .phasespace import (
    CLICK,
    NO_CLICK,
    DetectorPOVMChi,
    GaussianSumState,
    NegligibleEventError,
    condition,
    overlap,
    substitute_beamsplitter,
    tensor,
    wigner,
)
from .states import (
    EVEN,
    cat_chi,
    cat_fock,
    coherent_chi,
    coherent_fock,
    opposite_parity,
    optimal_squeezing,
    squeezed_vacuum_chi,
    squeezed_vacuum_fock,
    vacuum_chi,
)

__all__ = [
    "PipelineConfig",
    "EngineRecord",
    "PipelineResult",
    "CoherentScampResult",
    "run_parity_swap",
    "optimize_gain",
    "fidelity_vs_ideal",
    "run_coherent_scamp",
    "ideal_gain_curve",
    "IdealGainRow",
    "wigner_report",
    "WignerReport",
    "HALF", "T2_95", "T2_99",
    "AGREE_TOL",
]

HALF = math.sqrt(0.5)
T2_95 = math.sqrt(0.95)
T2_99 = math.sqrt(0.99)
AGREE_TOL = 1e-6

_ENGINES = ("chi", "fock", "both")


@dataclass(frozen=True)
class PipelineConfig:
    """Full parameterization of one amplifier run.

    ``squeezing`` is either a float or ``"auto"`` for the overlap-optimal
    value; the stage-1 splitter defaults to 50:50 and the stage-2 splitter
    to t2 = sqrt(0.95).  ``truncation`` pins the number-basis dimension of
    the fock engine (``None`` selects the smallest adequate ladder rung).
    """

    alpha: float
    parity: str = EVEN
    squeezing: float | str = "auto"
    t1: float = HALF
    t2: float = T2_95
    eta1: float = 1.0
    eta2: float = 1.0
    engine: str = "chi"
    truncation: int | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        states.parity_sign(self.parity)
        if isinstance(self.squeezing, str) and self.squeezing != "auto":
            raise ValueError("squeezing must be a number or 'auto'")
        for name in ("t1", "t2"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0 + 1e-12:
                raise ValueError(f"{name} must lie in (0, 1], got {val}")
        for name in ("eta1", "eta2"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {val}")
        if self.engine not in _ENGINES:
            raise ValueError(f"engine must be one of {_ENGINES}, got {self.engine!r}")
        if self.truncation is not None and self.truncation < 8:
            raise ValueError("truncation must be at least 8")

    @property
    def r1(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.t1 * self.t1))

    @property
    def r2(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.t2 * self.t2))

    def squeezing_value(self) -> float:
        if self.squeezing == "auto":
            return optimal_squeezing(self.alpha).s
        return float(self.squeezing)

    @property
    def target_parity(self) -> str:
        """Photon subtraction swaps parity: the ideal output is the opposite cat."""
        return opposite_parity(self.parity)


@dataclass(frozen=True)
class EngineRecord:
    """Stagewise numbers from one engine."""

    p_noclick_stage1: float
    p_click_stage2: float
    beta_star: float | None = None
    fidelity_star: float | None = None

    @property
    def p_success(self) -> float:
        return self.p_noclick_stage1 * self.p_click_stage2


@dataclass(frozen=True)
class PipelineResult:
    """Output of one amplifier run (per engine where applicable)."""

    config: PipelineConfig
    squeezing_s: float
    p_noclick_stage1: float
    p_click_stage2: float
    beta_star: float | None
    fidelity_star: float | None
    output_chi: GaussianSumState | None = None
    output_fock: FockDensity | None = None
    fock_dim: int | None = None
    records: dict = field(default_factory=dict)
    engines_agree: bool | None = None
    agreement_max_diff: float | None = None

    @property
    def p_success(self) -> float:
        return self.p_noclick_stage1 * self.p_click_stage2

    @property
    def gain_amp(self) -> float | None:
        if self.beta_star is None:
            return None
        return self.beta_star / self.config.alpha

    @property
    def gain_intensity(self) -> float | None:
        g = self.gain_amp
        return None if g is None else g * g

    def to_record(self) -> dict:
        """Flat key/value record with a deterministic field order."""
        cfg = self.config
        rec = {
            "engine": cfg.engine,
            "alpha": cfg.alpha,
            "parity": cfg.parity,
            "squeezing_s": self.squeezing_s,
            "squeezing_db": states.squeezing_db(self.squeezing_s),
            "t1": cfg.t1,
            "t2": cfg.t2,
            "eta1": cfg.eta1,
            "eta2": cfg.eta2,
            "target_parity": cfg.target_parity,
            "p_noclick_stage1": self.p_noclick_stage1,
            "p_click_stage2": self.p_click_stage2,
            "p_success": self.p_success,
            "beta_star": self.beta_star,
            "fidelity_star": self.fidelity_star,
            "gain_amp": self.gain_amp,
            "gain_intensity": self.gain_intensity,
            "fock_dim": self.fock_dim,
            "engines_agree": self.engines_agree,
            "agreement_max_diff": self.agreement_max_diff,
        }
        return rec


# ---------------------------------------------------------------------------
# engine internals
# ---------------------------------------------------------------------------

def _chi_stages(input_state: GaussianSumState, s: float, cfg: PipelineConfig):
    """Run comparison + subtraction in the Gaussian-sum engine."""
    joint = tensor(input_state, squeezed_vacuum_chi(s))
    joint = substitute_beamsplitter(joint, 0, 1, cfg.t1, cfg.r1)
    kept, p1 = condition(joint, 0, DetectorPOVMChi(cfg.eta1, NO_CLICK))
    staged = tensor(kept, vacuum_chi())
    staged = substitute_beamsplitter(staged, 0, 1, cfg.t2, cfg.r2)
    out, p2 = condition(staged, 1, DetectorPOVMChi(cfg.eta2, CLICK))
    return out, p1, p2


def _pick_dim(cfg: PipelineConfig, s: float) -> int:
    """Smallest ladder truncation whose input states pass the tail check.

    The squeezed-vacuum guess dominates the requirement; raises
    :class:`fock.TruncationError` when even the top rung fails.
    """
    if cfg.truncation is not None:
        return cfg.truncation
    last_exc = None
    for dim in fock.DIM_LADDER:
        try:
            squeezed_vacuum_fock(s, dim)
            cat_fock(cfg.alpha, cfg.parity, dim).check_tail()
        except fock.TruncationError as exc:
            last_exc = exc
            continue
        return dim
    raise fock.TruncationError(
        f"no ladder truncation up to {fock.DIM_LADDER[-1]} fits alpha={cfg.alpha}, "
        f"s={s}: {last_exc}",
        suggested_dim=2 * fock.DIM_LADDER[-1],
    )


def _fock_stages(input_vec, s: float, cfg: PipelineConfig, dim: int):
    """Run comparison + subtraction in the number-basis engine.

    Stage 1 conditions the pure joint state into a single-mode density;
    stage 2 pushes its eigenvector ensemble through the subtraction splitter
    so the expensive two-mode objects stay vectors.
    """
    guess = squeezed_vacuum_fock(s, dim, check_tail=cfg.truncation is None)
    joint = TwoModeFock(np.outer(input_vec.amps, guess.amps))
    joint = fock.beamsplitter_fock(joint, cfg.t1, cfg.r1)
    rho1, p1 = fock.condition_fock(joint, 0, cfg.eta1, NO_CLICK)

    evals, evecs = np.linalg.eigh(rho1.matrix)
    keep = evals > max(1e-14, 1e-14 * float(evals.max()))
    click_w = 1.0 - fock.noclick_weights(cfg.eta2, dim)
    rho_out = np.zeros((dim, dim), dtype=complex)
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    for lam, vec in zip(evals[keep], evecs[:, keep].T):
        two = fock.beamsplitter_fock(TwoModeFock(np.outer(vec, vac)), cfg.t2, cfg.r2)
        amps = two.amps  # kept mode first, detector arm second
        rho_out += lam * np.einsum("jn,n,kn->jk", amps, click_w, amps.conj())
    p2 = float(np.trace(rho_out).real)
    if p2 < 1e-12:
        raise fock.NegligibleEventError(
            f"stage-2 click probability {p2:.3e} below floor"
        )
    return FockDensity(rho_out / p2), p1, p2


def _beta_bracket(alpha: float):
    return max(0.5 * alpha, 1e-3), 3.0 * alpha + 0.5


def _optimize_beta(fid, alpha: float, tol: float = 1e-6):
    """Search the target size on [max(alpha/2, guard), 3 alpha + 1/2].

    The lower edge guards the beta > 0 domain of odd targets.  For
    degenerate inputs the fidelity keeps rising toward beta = 0 (the target
    degenerates to a single photon); the guard-constrained maximum is
    returned in that case.  A maximum at the upper edge is a genuine
    bracketing failure and propagates with the coarse scan attached.
    """
    lo, hi = _beta_bracket(alpha)
    try:
        return golden_section_max(fid, lo, hi, tol=tol)
    except BracketError as exc:
        if exc.scan_f is not None and int(np.argmax(exc.scan_f)) == 0:
            return float(lo), float(fid(lo))
        raise


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def run_parity_swap(cfg: PipelineConfig, optimize: bool = True) -> PipelineResult:
    """Run the cat-state amplifier for one configuration.

    With ``optimize=True`` the result carries the ideal-target size beta*
    (argmax of the fidelity against the opposite-parity cat) and the
    fidelity there.  With ``engine="both"`` the two engines run
    independently and the result's ``engines_agree`` flag compares all
    stage probabilities, beta* and the optimal fidelity at 1e-6.
    """
    s = cfg.squeezing_value()
    records: dict = {}
    out_chi = out_fock = None
    dim = None

    if cfg.engine in ("chi", "both"):
        out_chi, p1, p2 = _chi_stages(cat_chi(cfg.alpha, cfg.parity), s, cfg)
        beta = fstar = None
        if optimize:
            beta, fstar = _optimize_beta(
                lambda b: overlap(cat_chi(b, cfg.target_parity), out_chi), cfg.alpha
            )
        records["chi"] = EngineRecord(p1, p2, beta, fstar)

    if cfg.engine in ("fock", "both"):
        dim = _pick_dim(cfg, s)
        out_fock, p1, p2 = _fock_stages(cat_fock(cfg.alpha, cfg.parity, dim), s, cfg, dim)
        beta = fstar = None
        if optimize:
            beta, fstar = _optimize_beta(
                lambda b: fock.fidelity_fock(cat_fock(b, cfg.target_parity, dim), out_fock),
                cfg.alpha,
            )
        records["fock"] = EngineRecord(p1, p2, beta, fstar)

    primary = records["chi"] if "chi" in records else records["fock"]
    agree = max_diff = None
    if cfg.engine == "both":
        a, b = records["chi"], records["fock"]
        diffs = [
            abs(a.p_noclick_stage1 - b.p_noclick_stage1),
            abs(a.p_click_stage2 - b.p_click_stage2),
        ]
        if optimize:
            diffs += [abs(a.beta_star - b.beta_star), abs(a.fidelity_star - b.fidelity_star)]
        max_diff = float(max(diffs))
        agree = max_diff <= AGREE_TOL

    return PipelineResult(
        config=cfg,
        squeezing_s=s,
        p_noclick_stage1=primary.p_noclick_stage1,
        p_click_stage2=primary.p_click_stage2,
        beta_star=primary.beta_star,
        fidelity_star=primary.fidelity_star,
        output_chi=out_chi,
        output_fock=out_fock,
        fock_dim=dim,
        records=records,
        engines_agree=agree,
        agreement_max_diff=max_diff,
    )


def optimize_gain(cfg: PipelineConfig, target_parity: str | None = None):
    """(beta*, fidelity*) for the fidelity-optimal ideal target size.

    ``target_parity`` defaults to the opposite of the input parity (the
    physical target); same-parity comparison is available for diagnostics.
    """
    result = run_parity_swap(cfg, optimize=False)
    parity = cfg.target_parity if target_parity is None else target_parity
    if result.output_chi is not None:
        fid = lambda b: overlap(cat_chi(b, parity), result.output_chi)
    else:
        dim = result.fock_dim
        fid = lambda b: fock.fidelity_fock(cat_fock(b, parity, dim), result.output_fock)
    return _optimize_beta(fid, cfg.alpha)


def fidelity_vs_ideal(result: PipelineResult, beta: float, parity: str | None = None) -> float:
    """Fidelity of the run's output with an ideal cat of chosen size.

    Uses the Gaussian-sum output when available, otherwise the number-basis
    density.  ``parity`` defaults to the swap target.
    """
    parity = result.config.target_parity if parity is None else parity
    if result.output_chi is not None:
        return overlap(cat_chi(beta, parity), result.output_chi)
    if result.output_fock is not None:
        return fock.fidelity_fock(cat_fock(beta, parity, result.fock_dim), result.output_fock)
    raise ValueError("result carries no output state")


# ---------------------------------------------------------------------------
# coherent-state baseline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoherentScampResult:
    p_noclick_stage1: float
    p_click_stage2: float
    fidelity_nominal: float
    nominal_amplitude: float
    output_chi: GaussianSumState | None = None
    output_fock: FockDensity | None = None

    @property
    def p_success(self) -> float:
        return self.p_noclick_stage1 * self.p_click_stage2


def run_coherent_scamp(alpha: float, guess_sign: int, cfg: PipelineConfig) -> CoherentScampResult:
    """The coherent-state comparison amplifier (the device's ancestor).

    The guess amplitude is guess_sign * t1 alpha / r1; a correct guess nulls
    the comparison arm exactly, so the dark detector keeps probability 1 and
    the surviving mode is the amplified state |alpha / r1>.  Fidelity is
    reported against that nominal output.

    A wrong guess at 50:50 leaves exact vacuum after the comparison, so the
    subtraction detector can never fire; that case returns
    p_click_stage2 = 0 with no output state rather than raising.
    """
    if guess_sign not in (+1, -1):
        raise ValueError("guess_sign must be +1 or -1")
    if cfg.r1 == 0.0:
        raise ValueError("stage-1 splitter must have nonzero reflectivity")
    beta = guess_sign * cfg.t1 * alpha / cfg.r1
    nominal = alpha / cfg.r1

    p1 = p2 = fid = None
    out_chi = None
    if cfg.engine in ("chi", "both"):
        joint = tensor(coherent_chi(alpha), coherent_chi(beta))
        joint = substitute_beamsplitter(joint, 0, 1, cfg.t1, cfg.r1)
        kept, p1 = condition(joint, 0, DetectorPOVMChi(cfg.eta1, NO_CLICK))
        staged = tensor(kept, vacuum_chi())
        staged = substitute_beamsplitter(staged, 0, 1, cfg.t2, cfg.r2)
        try:
            out_chi, p2 = condition(staged, 1, DetectorPOVMChi(cfg.eta2, CLICK))
            fid = overlap(coherent_chi(nominal), out_chi)
        except NegligibleEventError:
            p2, fid = 0.0, float("nan")
        if cfg.engine == "chi":
            return CoherentScampResult(p1, p2, fid, nominal, output_chi=out_chi)

    dim = cfg.truncation or fock.DEFAULT_DIM
    try:
        out_fock, p1f, p2f = _fock_stages_coherent(alpha, beta, cfg, dim)
        fid_f = fock.fidelity_fock(coherent_fock(nominal, dim), out_fock)
    except NegligibleEventError:
        out_fock, p2f, fid_f = None, 0.0, float("nan")
        if p1 is None:
            joint = TwoModeFock(
                np.outer(coherent_fock(alpha, dim).amps, coherent_fock(beta, dim).amps)
            )
            joint = fock.beamsplitter_fock(joint, cfg.t1, cfg.r1)
            _, p1f = fock.condition_fock(joint, 0, cfg.eta1, NO_CLICK)
        else:
            p1f = p1
    if cfg.engine == "fock":
        return CoherentScampResult(p1f, p2f, fid_f, nominal, output_fock=out_fock)
    return CoherentScampResult(p1, p2, fid, nominal, output_chi=out_chi, output_fock=out_fock)


def _fock_stages_coherent(alpha: float, beta: float, cfg: PipelineConfig, dim: int):
    joint = TwoModeFock(np.outer(coherent_fock(alpha, dim).amps, coherent_fock(beta, dim).amps))
    joint = fock.beamsplitter_fock(joint, cfg.t1, cfg.r1)
    rho1, p1 = fock.condition_fock(joint, 0, cfg.eta1, NO_CLICK)
    evals, evecs = np.linalg.eigh(rho1.matrix)
    keep = evals > 1e-14
    click_w = 1.0 - fock.noclick_weights(cfg.eta2, dim)
    rho_out = np.zeros((dim, dim), dtype=complex)
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    for lam, vec in zip(evals[keep], evecs[:, keep].T):
        two = fock.beamsplitter_fock(TwoModeFock(np.outer(vec, vac)), cfg.t2, cfg.r2)
        rho_out += lam * np.einsum("jn,n,kn->jk", two.amps, click_w, two.amps.conj())
    p2 = float(np.trace(rho_out).real)
    if p2 < 1e-12:
        raise NegligibleEventError(f"stage-2 click probability {p2:.3e} below floor")
    return FockDensity(rho_out / p2), p1, p2


# ---------------------------------------------------------------------------
# ideal-gain construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealGainRow:
    alpha: float
    s_opt: float
    s_prime: float
    alpha_prime: float
    beta_star: float
    overlap_star: float
    pipeline_gain: float | None = None

    @property
    def gain_amp(self) -> float:
        return self.beta_star / self.alpha

    @property
    def gain_intensity(self) -> float:
        return self.gain_amp**2


def ideal_gain_curve(alphas, r1: float = HALF, compare_t2: float | None = None):
    """Gain of exact photon subtraction from the squeezed comparison output.

    For each input size: optimal squeezing, the comparison-channel
    parameters (s', alpha'), then the target size maximizing the fidelity
    of a|subtracted squeezed even cat(alpha', s')> with an odd cat.  With
    ``compare_t2`` the full pipeline (eta = 1) runs side by side and its
    gain lands in ``pipeline_gain``.
    """
    rows = []
    for alpha in np.atleast_1d(np.asarray(alphas, dtype=float)):
        s = optimal_squeezing(alpha).s
        chan = states.comparison_channel_params(alpha, s, r1)
        fid = lambda b: states.subtracted_squeezed_cat_overlap(
            chan.alpha_prime, EVEN, chan.s_prime, b
        )
        beta, fstar = golden_section_max(fid, *_beta_bracket(alpha), tol=1e-6)
        pipeline_gain = None
        if compare_t2 is not None:
            res = run_parity_swap(
                PipelineConfig(alpha=alpha, parity=EVEN, t1=math.sqrt(1 - r1 * r1),
                               t2=compare_t2, engine="chi")
            )
            pipeline_gain = res.gain_amp
        rows.append(
            IdealGainRow(float(alpha), s, chan.s_prime, chan.alpha_prime,
                         beta, fstar, pipeline_gain)
        )
    return rows


# ---------------------------------------------------------------------------
# Wigner report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerReport:
    q: np.ndarray
    p: np.ndarray
    w_output: np.ndarray
    w_ideal: np.ndarray
    beta_star: float
    min_output: float
    min_ideal: float

    @property
    def min_ratio(self) -> float:
        return self.min_output / self.min_ideal


def wigner_report(cfg: PipelineConfig, q, p) -> WignerReport:
    """Wigner maps of the amplifier output and its beta*-sized ideal cat.

    Runs the Gaussian-sum engine (the output is single mode either way) and
    returns both fields with their minima; the minimum ratio is the
    negativity comparison quoted for the device.
    """
    chi_cfg = replace(cfg, engine="chi")
    result = run_parity_swap(chi_cfg)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    w_out = wigner(result.output_chi, q, p)
    ideal = cat_chi(result.beta_star, cfg.target_parity)
    w_ideal = wigner(ideal, q, p)
    return WignerReport(
        q=q,
        p=p,
        w_output=w_out,
        w_ideal=w_ideal,
        beta_star=result.beta_star,
        min_output=float(w_out.min()),
        min_ideal=float(w_ideal.min()),
    )
