import numpy as np
import pytest

from nestqed import (
    DisorderSpec,
    PositionSet,
    SeedSpec,
    SweepConfig,
    dimer_seed,
    find_resonances,
    golden_section,
    nest,
    periodic_seed,
    resonance_spacings,
    run_disorder_ensemble,
    run_scaling_study,
    run_sweep,
    verify_block_equivalence,
)

PHI_A = 0.2 * np.pi


def nested_dimer_cfg(start=0.0, stop=1.5 * np.pi, points=76, phi_a=PHI_A):
    return SweepConfig(
        seeds=(SeedSpec("dimer", phi_a), SeedSpec("dimer", 0.0)),
        swept=1,
        start=start,
        stop=stop,
        points=points,
    )


class TestSweepConfig:
    def test_grid_and_geometry(self):
        cfg = nested_dimer_cfg(points=4, stop=3.0)
        assert np.allclose(cfg.grid(), [0, 1, 2, 3])
        arr = cfg.geometry_at(2.0)
        assert np.allclose(arr.composite.positions, sorted([0, PHI_A, 2.0, PHI_A + 2.0]))

    def test_degenerate_grid_rejected(self):
        with pytest.raises(ValueError):
            nested_dimer_cfg(start=1.0, stop=1.0)
        with pytest.raises(ValueError):
            nested_dimer_cfg(points=1)

    def test_explicit_seed_cannot_be_swept(self):
        with pytest.raises(ValueError):
            SweepConfig(
                seeds=(SeedSpec("explicit", positions=(0.0, 1.0)),),
                swept=0, start=0.0, stop=1.0, points=5,
            )


class TestRunSweep:
    def test_overlap_dips(self):
        # 76 points over [0, 1.5pi] put d_B = 0 and d_B = d_A exactly on-grid
        res = run_sweep(nested_dimer_cfg())
        on_zero = res.darkest_decay[0]
        on_da = res.darkest_decay[10]
        assert abs(res.values[10] - PHI_A) < 1e-12
        assert on_zero < 1e-10 and on_da < 1e-10
        # away from the dips regime II sits at the uncoupled dark decay scale
        assert res.darkest_decay[40] > 1e-3

    def test_regime_labels(self):
        res = run_sweep(nested_dimer_cfg())
        assert res.regime_boundary == pytest.approx(PHI_A)
        assert np.array_equal(res.overlapping, res.values < PHI_A)

    def test_profiles_recorded_at_requested_values(self):
        res = run_sweep(nested_dimer_cfg(points=31), profile_at=(0.0, 2.0))
        assert len(res.profiles) == 2
        for g, profile in res.profiles.items():
            assert profile.shape == (4, 4)
            assert np.allclose(profile.sum(axis=1), 1.0)
            assert res.positions[g].shape == (4,)
            assert set(res.copy_indices[g]) <= {0, 1}

    def test_threads_match_serial(self):
        cfg = nested_dimer_cfg(points=20)
        serial = run_sweep(cfg)
        threaded = run_sweep(cfg, threads=4)
        assert np.array_equal(serial.darkest_decay, threaded.darkest_decay)
        assert np.array_equal(serial.eigenvalues, threaded.eigenvalues)

    def test_error_carries_grid_value(self, monkeypatch):
        from nestqed import experiments

        def boom(cfg, value):
            raise ValueError("synthetic failure")

        monkeypatch.setattr(experiments, "_sweep_point", boom)
        with pytest.raises(RuntimeError, match="grid value"):
            run_sweep(nested_dimer_cfg(points=3))

    def test_bright_pair_structure_in_regime_two(self):
        # five-site subwavelength chain nested in a dimer: the two
        # superradiant modes carry almost all the decay across regime II
        d = 0.2
        cfg = SweepConfig(
            seeds=(SeedSpec("periodic", d, count=5), SeedSpec("dimer", 0.0)),
            swept=1, start=4 * d + 0.1, stop=1.5 * np.pi, points=40,
        )
        res = run_sweep(cfg)
        for g in range(res.values.size):
            decays = np.sort(-res.eigenvalues[g].imag)[::-1]
            n_bright = int(np.sum(decays > 1.0))
            assert 1 <= n_bright <= 2
            assert decays[2] < 0.5
            assert decays[0] + decays[1] > 0.9 * 10.0

    def test_darkest_decay_continuity(self):
        res = run_sweep(nested_dimer_cfg(stop=4 * np.pi, points=1000))
        assert np.max(np.abs(np.diff(res.darkest_decay))) < 0.05


class TestDisorderEnsemble:
    def test_zero_disorder_equals_clean_sweep(self):
        cfg = nested_dimer_cfg(points=9, stop=3.0)
        clean = run_sweep(cfg)
        stats = run_disorder_ensemble(cfg, DisorderSpec(0.0, seed=1, samples=4))
        assert np.array_equal(stats.mean, clean.darkest_decay)
        assert np.all(stats.stderr == 0.0)

    def test_determinism_and_bounds(self):
        cfg = nested_dimer_cfg(points=5, stop=3.0)
        spec = DisorderSpec(0.1 * PHI_A, seed=77, samples=12)
        a = run_disorder_ensemble(cfg, spec)
        b = run_disorder_ensemble(cfg, spec)
        assert np.array_equal(a.mean, b.mean)
        assert np.all(a.minimum <= a.mean) and np.all(a.mean <= a.maximum)

    def test_threads_match_serial(self):
        cfg = nested_dimer_cfg(points=5, stop=3.0)
        spec = DisorderSpec(0.05, seed=3, samples=6)
        serial = run_disorder_ensemble(cfg, spec)
        threaded = run_disorder_ensemble(cfg, spec, threads=3)
        assert np.array_equal(serial.mean, threaded.mean)

    def test_grid_points_get_independent_draws(self):
        # two grid points with identical geometry: without per-point
        # subseeds their ensembles would coincide sample by sample
        cfg = SweepConfig(
            seeds=(SeedSpec("dimer", PHI_A), SeedSpec("dimer", 0.0)),
            swept=0, start=PHI_A, stop=PHI_A + 1e-15, points=2,
        )
        spec = DisorderSpec(0.1, seed=5, samples=8)
        stats = run_disorder_ensemble(cfg, spec)
        assert stats.mean[0] != stats.mean[1]

    def test_monotone_in_disorder_strength_at_bic(self):
        bic = PHI_A + np.pi
        cfg = nested_dimer_cfg(start=bic - 1e-3, stop=bic + 1e-3, points=3)
        means, errs = [], []
        for frac in (0.0, 0.1, 0.5, 1.0):
            stats = run_disorder_ensemble(
                cfg, DisorderSpec(frac * PHI_A, seed=2024, samples=60)
            )
            means.append(stats.mean[1])
            errs.append(stats.stderr[1])
        for lo, hi in zip(range(3), range(1, 4)):
            assert means[hi] >= means[lo] - 2 * (errs[lo] + errs[hi])


class TestResonances:
    def test_monotone_curve_has_none(self):
        cfg = SweepConfig(
            seeds=(SeedSpec("periodic", 0.4 * np.pi, count=3),),
            swept=0, start=0.1, stop=1.2, points=30,
        )
        res = run_sweep(cfg)
        assert find_resonances(res) == []

    def test_needs_three_points(self):
        res = run_sweep(nested_dimer_cfg(points=2, stop=1.0))
        with pytest.raises(ValueError):
            find_resonances(res)

    def test_nested_dimer_bic_period(self):
        res = run_sweep(nested_dimer_cfg(stop=4 * np.pi, points=600))
        found = find_resonances(res, refine_tol=1e-6)
        regime2 = [r for r in found if r.location > PHI_A + 0.1]
        assert len(regime2) == 3
        locs = np.array([r.location for r in regime2])
        assert np.allclose(locs, PHI_A + np.pi * np.arange(1, 4), atol=2e-3)
        for r in regime2:
            assert r.decay < 1e-10
            assert r.refined
            # refined minimum does not exceed its bracketing grid points
            assert r.decay <= res.darkest_decay[r.grid_index - 1]
            assert r.decay <= res.darkest_decay[r.grid_index + 1]
        spacings = resonance_spacings(regime2)
        assert np.allclose(spacings, np.pi, atol=2e-3)

    def test_doubly_nested_split_resonances(self):
        phi_c = 0.02 * np.pi
        cfg = SweepConfig(
            seeds=(
                SeedSpec("dimer", PHI_A),
                SeedSpec("dimer", 0.0),
                SeedSpec("dimer", phi_c),
            ),
            swept=1, start=0.01, stop=1.0, points=400,
        )
        res = run_sweep(cfg)
        found = find_resonances(res, refine_tol=1e-7)
        locs = np.array([r.location for r in found if r.decay < 1e-8])
        assert np.any(np.abs(locs - phi_c) < 2e-3)
        window = (locs >= PHI_A - phi_c - 2e-3) & (locs <= PHI_A + phi_c + 2e-3)
        assert np.sum(window) >= 2

    def test_golden_section_parabola(self):
        x, fx, width, ok = golden_section(lambda x: (x - 1.3) ** 2 + 0.5, 0.0, 3.0, 1e-9)
        assert ok
        assert x == pytest.approx(1.3, abs=1e-8)
        assert fx == pytest.approx(0.5, abs=1e-12)
        assert width <= 1e-9


class TestRegimeTwoInsensitivity:
    def test_dark_pair_insensitive_for_deep_subwavelength_seed(self):
        # deeply subwavelength inner dimer: the two dark eigenvalues stay
        # put while the copy separation varies away from resonances
        phi_a = 0.02
        pairs = []
        for b in np.linspace(0.5, 2.5, 21):
            arr = nest([dimer_seed(phi_a), dimer_seed(b)])
            from nestqed import build_dense, eigendecompose

            dec = eigendecompose(build_dense(arr))
            pairs.append(np.sort_complex(dec.eigenvalues[:2]))
        pairs = np.array(pairs)
        drift = np.max(np.abs(pairs - pairs.mean(axis=0)))
        assert drift < 1e-3


class TestScaling:
    def test_inverse_cube_and_rank_squared(self):
        res = run_scaling_study(0.4 * np.pi, [10, 20, 40, 80])
        assert -3.5 < res.size_exponent < -2.5
        assert 1.6 < res.rank_exponent < 2.4
        assert res.rank_size == 80

    def test_rank_size_override(self):
        res = run_scaling_study(0.4 * np.pi, [10, 20], rank_size=40, rank_count=5)
        assert res.rank_size == 40
        assert res.rank_decays.shape == (5,)

    def test_single_size_rejected(self):
        with pytest.raises(ValueError):
            run_scaling_study(0.4 * np.pi, [40])

    def test_small_or_wide_arrays_rejected(self):
        with pytest.raises(ValueError):
            run_scaling_study(0.4 * np.pi, [2, 10])
        with pytest.raises(ValueError):
            run_scaling_study(2 * np.pi, [10, 20])


class TestBlockEquivalence:
    def test_random_nestings(self):
        rng = np.random.default_rng(31)
        for _ in range(6):
            a = np.concatenate([[0.0], rng.uniform(0.1, 2.0, rng.integers(1, 5))])
            b = np.concatenate([[0.0], rng.uniform(0.1, 5.0, rng.integers(1, 4))])
            arr = nest([PositionSet(a), PositionSet(b)])
            report = verify_block_equivalence(arr)
            assert report.dense_vs_blocks <= 1e-12
            assert report.dense_vs_eigenbasis <= 1e-12
            assert report.eigenvalue_deviation <= 1e-12
            assert not report.eigenbasis_skipped

    def test_periodic_nesting(self):
        arr = nest([periodic_seed(5, 0.2), dimer_seed(2.0)])
        report = verify_block_equivalence(arr)
        assert report.dense_vs_blocks <= 1e-12
        assert report.dense_vs_eigenbasis <= 1e-12

    def test_quasi_null_skips_eigenbasis_route(self, monkeypatch):
        from dataclasses import replace
        from nestqed import experiments

        arr = nest([dimer_seed(0.3), dimer_seed(2.0)])
        real = experiments.eigendecompose

        def flagged(h):
            dec = real(h)
            if h.matrix.shape[0] == 2:
                return replace(dec, quasi_null=np.array([True, False]))
            return dec

        monkeypatch.setattr(experiments, "eigendecompose", flagged)
        report = verify_block_equivalence(arr)
        assert report.eigenbasis_skipped
        assert report.dense_vs_eigenbasis is None
        assert report.dense_vs_blocks <= 1e-12

    def test_wrong_depth(self):
        with pytest.raises(ValueError):
            verify_block_equivalence(nest([dimer_seed(1.0)]))
