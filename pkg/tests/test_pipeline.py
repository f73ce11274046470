"""Amplifier pipeline: protocols, optimization, gain curves, Wigner report."""

import math

import numpy as np
import pytest

from catscamp.optimize import BracketError, golden_section_max
from catscamp.pipeline import (
    T2_95,
    T2_99,
    PipelineConfig,
    fidelity_vs_ideal,
    ideal_gain_curve,
    optimize_gain,
    run_coherent_scamp,
    run_parity_swap,
    wigner_report,
)


class TestGoldenSection:
    def test_finds_quadratic_maximum(self):
        x, f = golden_section_max(lambda x: 1.0 - (x - 0.37) ** 2, 0.0, 1.0)
        assert x == pytest.approx(0.37, abs=1e-7)
        assert f == pytest.approx(1.0, abs=1e-12)

    def test_boundary_maximum_raises_with_scan(self):
        with pytest.raises(BracketError) as info:
            golden_section_max(lambda x: x, 0.0, 1.0)
        assert info.value.scan_x is not None
        assert info.value.scan_f is not None

    def test_flat_maximum_is_deterministic(self):
        calls = []

        def f(x):
            calls.append(x)
            return 1.0 - 1e-3 * (x - 0.5) ** 2

        x1, _ = golden_section_max(f, 0.0, 1.0)
        x2, _ = golden_section_max(lambda x: f(x) + 3e-11 * x, 0.0, 1.0)
        assert abs(x1 - x2) < 1e-6  # tiny perturbation cannot move the argmax


class TestConfig:
    def test_defaults(self):
        cfg = PipelineConfig(alpha=1.0)
        assert cfg.t1 == pytest.approx(math.sqrt(0.5))
        assert cfg.t2 == pytest.approx(math.sqrt(0.95))
        assert cfg.target_parity == "odd"
        assert cfg.squeezing_value() == pytest.approx(-0.5 * math.asinh(2.0))

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            (dict(alpha=1.0, eta1=1.3), "eta1"),
            (dict(alpha=1.0, eta2=0.0), "eta2"),
            (dict(alpha=1.0, t2=1.2), "t2"),
            (dict(alpha=-0.5), "alpha"),
            (dict(alpha=1.0, engine="magic"), "engine"),
            (dict(alpha=1.0, squeezing="lots"), "squeezing"),
        ],
    )
    def test_invalid_field_named_in_error(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            PipelineConfig(**kwargs)

    def test_success_probability_is_stage_product(self):
        res = run_parity_swap(PipelineConfig(alpha=0.8, engine="chi"), optimize=False)
        assert res.p_success == pytest.approx(
            res.p_noclick_stage1 * res.p_click_stage2, abs=1e-15
        )


class TestParitySwap:
    def test_engines_agree_flag(self):
        res = run_parity_swap(
            PipelineConfig(alpha=1.0, parity="even", eta1=0.8, eta2=0.8, engine="both")
        )
        assert res.engines_agree is True
        assert res.agreement_max_diff < 1e-6
        assert set(res.records) == {"chi", "fock"}

    def test_output_parity_is_swapped(self):
        res = run_parity_swap(
            PipelineConfig(alpha=1.0, parity="even", t2=T2_99, engine="fock"),
            optimize=False,
        )
        pops = res.output_fock.populations()
        odd_fraction = pops[1::2].sum() / pops.sum()
        assert odd_fraction > 0.98

    def test_output_density_invariants(self):
        res = run_parity_swap(
            PipelineConfig(alpha=1.0, parity="odd", eta1=0.8, eta2=0.8, engine="fock"),
            optimize=False,
        )
        rho = res.output_fock
        assert rho.hermiticity_defect() < 1e-10
        assert rho.trace() == pytest.approx(1.0, abs=1e-10)
        assert rho.min_eigenvalue() > -1e-9

    def test_term_count_stays_bounded(self):
        # cat (4 terms) -> splitter -> dark herald -> splitter -> click
        # herald doubles once: the output never needs more than 16 terms
        res = run_parity_swap(
            PipelineConfig(alpha=1.2, parity="odd", eta1=0.7, eta2=0.9, engine="chi"),
            optimize=False,
        )
        assert res.output_chi.n_terms <= 16

    def test_small_input_amplifies_with_near_unit_fidelity(self):
        res = run_parity_swap(PipelineConfig(alpha=0.05, parity="even", t2=T2_99))
        assert res.fidelity_star > 0.99

    def test_record_layout(self):
        res = run_parity_swap(PipelineConfig(alpha=0.7, engine="chi"))
        rec = res.to_record()
        keys = list(rec.keys())
        assert keys[:3] == ["engine", "alpha", "parity"]
        assert rec["p_success"] == pytest.approx(res.p_success)
        assert rec["gain_intensity"] == pytest.approx(res.gain_amp**2)

    def test_optimize_gain_same_parity_diagnostic(self):
        cfg = PipelineConfig(alpha=1.0, parity="even", engine="chi")
        beta_opp, f_opp = optimize_gain(cfg)
        beta_same, f_same = optimize_gain(cfg, target_parity="even")
        assert f_opp > f_same  # the output really is parity swapped

    def test_tiny_alpha_keeps_interior_maximum(self):
        res = run_parity_swap(PipelineConfig(alpha=0.02, parity="even", t2=T2_99))
        assert res.beta_star > 0.0
        assert np.isfinite(res.fidelity_star)

    def test_fidelity_vs_ideal_matches_optimum(self):
        res = run_parity_swap(PipelineConfig(alpha=1.0, parity="odd", eta1=0.8, eta2=0.8))
        at_star = fidelity_vs_ideal(res, res.beta_star)
        assert at_star == pytest.approx(res.fidelity_star, abs=1e-9)
        assert fidelity_vs_ideal(res, res.beta_star + 0.3) < at_star


class TestCoherentBaseline:
    def test_correct_guess_keeps_detector_dark(self):
        cfg = PipelineConfig(alpha=1.0, t2=T2_99, engine="both")
        res = run_coherent_scamp(1.0, +1, cfg)
        assert res.p_noclick_stage1 == pytest.approx(1.0, abs=1e-10)
        assert res.fidelity_nominal >= 0.999
        assert res.nominal_amplitude == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_wrong_guess_leak_probability(self):
        # leak amplitude 2 t1 alpha, so P(dark) = exp(-4 t1^2 alpha^2) = e^-2
        cfg = PipelineConfig(alpha=1.0, t2=T2_99, engine="chi")
        res = run_coherent_scamp(1.0, -1, cfg)
        assert res.p_noclick_stage1 == pytest.approx(math.exp(-2.0), abs=1e-10)
        # at 50:50 the wrong-guess survivor is exact vacuum: no click possible
        assert res.p_click_stage2 == 0.0

    def test_wrong_guess_fock_engine_agrees(self):
        cfg = PipelineConfig(alpha=1.0, t2=T2_99, engine="fock")
        res = run_coherent_scamp(1.0, -1, cfg)
        assert res.p_noclick_stage1 == pytest.approx(math.exp(-2.0), abs=1e-8)

    def test_imbalanced_splitter_wrong_guess_survivor(self):
        t1 = math.sqrt(0.8)
        cfg = PipelineConfig(alpha=1.0, t1=t1, t2=T2_99, engine="chi")
        res = run_coherent_scamp(1.0, -1, cfg)
        r1 = math.sqrt(0.2)
        leak = 2.0 * t1 * 1.0
        assert res.p_noclick_stage1 == pytest.approx(math.exp(-(leak**2)), abs=1e-10)
        assert res.p_click_stage2 > 0.0  # survivor is not vacuum off 50:50


class TestIdealGainCurve:
    def test_frozen_oracle_values(self):
        # frozen from the number-basis maximization (12 significant digits
        # reproduced by both engines); the small-alpha end sits slightly
        # above a 10% band around sqrt(2), the rest inside it
        rows = ideal_gain_curve([0.5, 1.0, 1.5])
        ratios = [row.gain_amp / math.sqrt(2.0) for row in rows]
        assert ratios[0] == pytest.approx(1.1063, abs=2e-3)
        assert ratios[1] == pytest.approx(1.0386, abs=2e-3)
        assert ratios[2] == pytest.approx(1.0034, abs=2e-3)
        assert all(abs(r - 1.0) < 0.10 for r in ratios[1:])

    def test_channel_limits_in_rows(self):
        row = ideal_gain_curve([0.8])[0]
        assert row.s_opt == pytest.approx(-0.5 * math.asinh(2 * 0.64), abs=1e-12)
        assert 0.0 < row.alpha_prime < 0.8
        assert row.overlap_star > 0.9

    def test_pipeline_comparison_differs_marginally(self):
        rows = ideal_gain_curve([0.5, 1.0, 1.5], compare_t2=T2_99)
        for row in rows:
            assert row.pipeline_gain is not None
            assert abs(row.gain_amp - row.pipeline_gain) < 0.05


class TestWignerReport:
    def test_report_minima_and_ideal_signs(self):
        q = np.arange(-4.0, 4.0001, 0.1)
        rep = wigner_report(
            PipelineConfig(alpha=1.0, parity="even", t2=T2_95, eta1=0.8, eta2=0.8),
            q, q,
        )
        assert rep.min_ideal < 0.0  # odd ideal cat is negative at the origin
        assert rep.min_output < 0.0
        assert rep.w_output.shape == (q.size, q.size)
        assert 0.0 < rep.min_ratio < 2.0

    def test_eta_does_not_move_the_gain(self):
        stars = [
            run_parity_swap(
                PipelineConfig(alpha=1.0, parity="even", t2=T2_99, eta1=eta, eta2=eta,
                               engine="chi")
            ).beta_star
            for eta in (0.6, 0.8, 1.0)
        ]
        assert max(stars) - min(stars) <= 2e-3
