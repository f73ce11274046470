"""Number-basis oracle: operators, detection, characteristic function."""

import math

import numpy as np
import pytest

from catscamp import fock
from catscamp.fock import (
    FockVector,
    TwoModeFock,
    TruncationError,
    beamsplitter_fock,
    chi_from_fock,
    condition_fock,
    fidelity_fock,
    ladder,
    squeeze_fock,
    vacuum_vector,
)
from catscamp.states import (
    cat_fock,
    coherent_fock,
    squeezed_vacuum_amps_direct,
    squeezed_vacuum_fock,
)

HALF = math.sqrt(0.5)


class TestBeamsplitter:
    def test_single_photon_splits_with_plus_r_on_second_arm(self):
        amps = np.zeros((5, 5), dtype=complex)
        amps[1, 0] = 1.0
        out = beamsplitter_fock(TwoModeFock(amps), HALF, HALF)
        assert out.amps[1, 0] == pytest.approx(HALF, abs=1e-12)
        assert out.amps[0, 1] == pytest.approx(HALF, abs=1e-12)

    @pytest.mark.parametrize("alpha,beta", [(0.9, -0.4), (1.5, 1.2), (0.3, 0.0)])
    def test_coherent_pair_convention(self, alpha, beta):
        t, r = math.sqrt(0.7), math.sqrt(0.3)
        dim = 40
        joint = TwoModeFock(np.outer(coherent_fock(alpha, dim).amps,
                                     coherent_fock(beta, dim).amps))
        out = beamsplitter_fock(joint, t, r)
        expect = np.outer(coherent_fock(t * alpha - r * beta, dim).amps,
                          coherent_fock(t * beta + r * alpha, dim).amps)
        assert np.abs(np.vdot(expect, out.amps)) ** 2 == pytest.approx(1.0, abs=1e-8)

    def test_norm_preserved(self):
        dim = 50
        joint = TwoModeFock(np.outer(cat_fock(1.2, "odd", dim).amps,
                                     squeezed_vacuum_fock(-0.9, dim, check_tail=False).amps))
        out = beamsplitter_fock(joint, math.sqrt(0.95), math.sqrt(0.05))
        assert out.norm() == pytest.approx(joint.norm(), abs=1e-10)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            beamsplitter_fock(TwoModeFock(np.zeros((4, 5), dtype=complex)), HALF, HALF)


class TestSqueeze:
    def test_vacuum_gives_direct_series(self):
        # independent oracle: sqrt((2m)!)/m! (-tanh s / 2)^m sqrt(sech s)
        for s in (-0.7218177375894052, 0.5):
            built = squeeze_fock(vacuum_vector(60), s, check_tail=False)
            series = squeezed_vacuum_amps_direct(s, 60)
            assert np.max(np.abs(built.amps - series)) < 1e-10

    def test_heavy_squeezing_needs_more_padding(self):
        # slow number-basis convergence at |s| > 1: the default pad is not
        # enough for 1e-10 agreement, a wider exponentiation window is
        built = squeeze_fock(vacuum_vector(60), -1.2, pad=100, check_tail=False)
        series = squeezed_vacuum_amps_direct(-1.2, 60)
        assert np.max(np.abs(built.amps - series)) < 1e-10

    def test_zero_squeezing_is_identity(self):
        state = cat_fock(1.0, "even", 40)
        out = squeeze_fock(state, 0.0)
        assert np.max(np.abs(out.amps - state.amps)) < 1e-14

    def test_squeeze_then_unsqueeze_roundtrips(self):
        state = cat_fock(1.0, "even", 60)
        out = squeeze_fock(squeeze_fock(state, 0.6, check_tail=False), -0.6,
                           check_tail=False)
        fid = np.abs(np.vdot(state.amps, out.amps)) ** 2
        assert fid == pytest.approx(1.0, abs=1e-9)

    def test_tail_failure_raises_truncation_error(self):
        with pytest.raises(TruncationError):
            squeeze_fock(vacuum_vector(20), -1.2)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            squeeze_fock(vacuum_vector(40), 2.5)


class TestLadder:
    def test_annihilation_swaps_cat_parity(self):
        even = cat_fock(1.0, "even", 50)
        lowered, norm = ladder(even, "annihilate")
        odd = cat_fock(1.0, "odd", 50)
        assert norm > 0
        fid = np.abs(np.vdot(odd.amps, lowered.amps / norm)) ** 2
        assert fid == pytest.approx(1.0, abs=1e-12)

    def test_annihilating_vacuum_gives_zero(self):
        out, norm = ladder(vacuum_vector(10), "annihilate")
        assert norm == 0.0
        assert np.all(out.amps == 0)

    def test_subtraction_from_squeezed_cat_commutes_as_bogoliubov_pair(self):
        # a S(s) = S(s) (cosh s a - sinh s a^dag)
        s = -0.7218177375894052
        dim = 80
        cat = cat_fock(1.0, "even", dim)
        lhs, norm = ladder(squeeze_fock(cat, s, check_tail=False), "annihilate")
        low, _ = ladder(cat, "annihilate")
        high, _ = ladder(cat, "create")
        rhs = squeeze_fock(
            FockVector(math.cosh(s) * low.amps - math.sinh(s) * high.amps),
            s, check_tail=False,
        )
        fid = np.abs(np.vdot(lhs.amps / norm, rhs.amps / np.linalg.norm(rhs.amps))) ** 2
        assert fid == pytest.approx(1.0, abs=1e-9)


class TestMixedTwoMode:
    def _mixture(self, dim=30):
        a1 = np.outer(cat_fock(0.8, "even", dim).amps,
                      squeezed_vacuum_fock(-0.4, dim).amps)
        a2 = np.outer(cat_fock(0.8, "odd", dim).amps,
                      squeezed_vacuum_fock(-0.4, dim).amps)
        rho = 0.6 * np.einsum("jn,km->jnkm", a1, a1.conj()) \
            + 0.4 * np.einsum("jn,km->jnkm", a2, a2.conj())
        return a1, a2, rho

    def test_constructor_needs_exactly_one_form(self):
        with pytest.raises(ValueError):
            TwoModeFock()
        with pytest.raises(ValueError):
            TwoModeFock(amps=np.zeros((3, 3)), density=np.zeros((3, 3, 3, 3)))

    def test_density_beamsplitter_equals_ensemble(self):
        a1, a2, rho = self._mixture()
        out = beamsplitter_fock(TwoModeFock(density=rho), HALF, HALF)
        o1 = beamsplitter_fock(TwoModeFock(a1), HALF, HALF).amps
        o2 = beamsplitter_fock(TwoModeFock(a2), HALF, HALF).amps
        expect = 0.6 * np.einsum("jn,km->jnkm", o1, o1.conj()) \
            + 0.4 * np.einsum("jn,km->jnkm", o2, o2.conj())
        assert np.max(np.abs(out.density - expect)) < 1e-12
        assert out.norm() == pytest.approx(1.0, abs=1e-10)

    def test_density_conditioning_equals_ensemble(self):
        a1, a2, rho = self._mixture()
        mixed, p_mixed = condition_fock(TwoModeFock(density=rho), 0, 0.8, "no_click")
        r1, p1 = condition_fock(TwoModeFock(a1), 0, 0.8, "no_click")
        r2, p2 = condition_fock(TwoModeFock(a2), 0, 0.8, "no_click")
        p_ens = 0.6 * p1 + 0.4 * p2
        ensemble = (0.6 * p1 * r1.matrix + 0.4 * p2 * r2.matrix) / p_ens
        assert p_mixed == pytest.approx(p_ens, abs=1e-12)
        assert np.max(np.abs(mixed.matrix - ensemble)) < 1e-12

    def test_density_chi_is_mixture_of_pure_chis(self):
        a1, a2, rho = self._mixture()
        xi = (0.3 + 0.1j, -0.2 + 0.4j)
        val = chi_from_fock(TwoModeFock(density=rho), xi)
        v1 = chi_from_fock(TwoModeFock(a1), xi)
        v2 = chi_from_fock(TwoModeFock(a2), xi)
        assert abs(val - (0.6 * v1 + 0.4 * v2)) < 1e-12


class TestConditioning:
    @pytest.mark.parametrize("eta", [0.4, 0.8, 1.0])
    def test_vacuum_pair_stays_dark(self, eta):
        amps = np.zeros((6, 6), dtype=complex)
        amps[0, 0] = 1.0
        _, prob = condition_fock(TwoModeFock(amps), 1, eta, "no_click")
        assert prob == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("eta", [0.3, 0.8, 1.0])
    def test_single_photon_click_probability_is_eta(self, eta):
        amps = np.zeros((6, 6), dtype=complex)
        amps[0, 1] = 1.0
        rho, prob = condition_fock(TwoModeFock(amps), 1, eta, "click")
        assert prob == pytest.approx(eta, abs=1e-12)
        assert rho.matrix[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_stage_probability_matches_analytic_engine(self):
        from catscamp.phasespace import DetectorPOVMChi, NO_CLICK, condition, tensor, substitute_beamsplitter
        from catscamp.states import cat_chi, squeezed_vacuum_chi

        s = -0.7218177375894052
        dim = 60
        joint = TwoModeFock(np.outer(cat_fock(1.0, "odd", dim).amps,
                                     squeezed_vacuum_fock(s, dim).amps))
        joint = beamsplitter_fock(joint, HALF, HALF)
        _, p_fock = condition_fock(joint, 0, 1.0, "no_click")
        chi_joint = substitute_beamsplitter(
            tensor(cat_chi(1.0, "odd"), squeezed_vacuum_chi(s)), 0, 1, HALF, HALF
        )
        _, p_chi = condition(chi_joint, 0, DetectorPOVMChi(1.0, NO_CLICK))
        assert p_fock == pytest.approx(p_chi, abs=1e-8)


class TestFidelity:
    def test_self_fidelity(self):
        state = cat_fock(1.2, "odd", 40)
        assert fidelity_fock(state, state) == pytest.approx(1.0, abs=1e-12)

    def test_opposite_parities_are_orthogonal(self):
        even = cat_fock(1.0, "even", 40)
        odd = cat_fock(1.0, "odd", 40)
        assert fidelity_fock(even, odd) == 0.0


class TestChiFromFock:
    def test_vacuum(self):
        xi = 0.4 - 0.3j
        val = chi_from_fock(vacuum_vector(30), xi)
        assert val == pytest.approx(math.exp(-0.5 * abs(xi) ** 2), abs=1e-10)

    def test_coherent_closed_form(self):
        alpha, xi = 0.9, 0.5 + 0.2j
        val = chi_from_fock(coherent_fock(alpha, 40), xi)
        expect = np.exp(xi * alpha - np.conj(xi) * alpha - 0.5 * abs(xi) ** 2)
        assert abs(val - expect) < 1e-10

    def test_cat_matches_four_gaussian_sum(self):
        # independent oracle: the four-term sum written out by hand
        alpha = 1.0
        rng = np.random.default_rng(29)
        pts = rng.normal(scale=1.0, size=(20, 2))
        xi = pts[:, 0] + 1j * pts[:, 1]
        norm2 = 1.0 / (2.0 + 2.0 * math.exp(-2.0 * alpha * alpha))
        direct = norm2 * (
            np.exp(xi * alpha - np.conj(xi) * alpha - 0.5 * np.abs(xi) ** 2)
            + np.exp(-xi * alpha + np.conj(xi) * alpha - 0.5 * np.abs(xi) ** 2)
            + np.exp(-xi * alpha - np.conj(xi) * alpha - 2 * alpha**2 - 0.5 * np.abs(xi) ** 2)
            + np.exp(xi * alpha + np.conj(xi) * alpha - 2 * alpha**2 - 0.5 * np.abs(xi) ** 2)
        )
        state = cat_fock(alpha, "even", 50)
        numeric = np.array([chi_from_fock(state, z) for z in xi])
        assert np.max(np.abs(numeric - direct)) < 1e-8

    def test_probe_radius_warning(self):
        with pytest.warns(UserWarning, match="reliable radius"):
            chi_from_fock(vacuum_vector(16), 4.0 + 0.0j)


class TestTruncationControl:
    def test_tail_mass_small_for_adequate_dim(self):
        assert coherent_fock(1.0, 40).tail_mass() < 1e-12

    def test_cropped_state_fails_tail_check(self):
        heavy = squeezed_vacuum_fock(-1.3, 40, check_tail=False)
        with pytest.raises(TruncationError):
            heavy.check_tail()

    def test_pipeline_dim_ladder_escalates(self):
        from catscamp.pipeline import PipelineConfig, _pick_dim

        cfg = PipelineConfig(alpha=1.0, parity="even", engine="fock")
        assert _pick_dim(cfg, -0.7218177375894052) == 60
        cfg_small = PipelineConfig(alpha=0.3, parity="even", engine="fock")
        assert _pick_dim(cfg_small, -0.0891) == 40
