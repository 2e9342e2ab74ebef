import math

import numpy as np
import pytest

from wegnerlab.errors import DistributionError
from wegnerlab.hamiltonian import InteractionSpec
from wegnerlab.lattice import Cube, Site
from wegnerlab.randomfield import DistributionSpec, sample_field
from wegnerlab.spectral import Spectrum
from wegnerlab.wegner import (
    EventQuery,
    IntervalUnion,
    WegnerParams,
    decay_fit,
    delta0,
    fatten,
    fixed_energy_event,
    h_star,
    mc_estimate,
    perturbation_check,
    two_volume_event,
    variable_energy_event,
    wilson_interval,
)

BERNOULLI = DistributionSpec.bernoulli(0.5, 0.0, 1.0)


def spectrum_of(*values):
    return Spectrum(eigenvalues=np.asarray(sorted(values), dtype=float), dim=len(values))


def test_wegner_params_validation():
    WegnerParams(beta=0.5, sigma=1.0, L0=3, q=2.0)
    with pytest.raises(ValueError):
        WegnerParams(beta=1.0, sigma=1.0, L0=3, q=2.0)
    with pytest.raises(ValueError):
        WegnerParams(beta=0.5, sigma=0.0, L0=3, q=2.0)
    with pytest.raises(ValueError):
        WegnerParams(beta=0.5, sigma=1.0, L0=3, q=2.0, interval=(1.0, 0.0))


def test_fatten_disjoint():
    u = fatten(spectrum_of(0.0, 10.0), 1.0)
    assert u.intervals == ((-1.0, 1.0), (9.0, 11.0))


def test_fatten_merges_touching():
    u = fatten(spectrum_of(0.0, 1.0), 0.5)
    assert u.intervals == ((-0.5, 1.5),)


def test_fatten_singleton():
    u = fatten(spectrum_of(3.0), 0.25)
    assert u.intervals == ((2.75, 3.25),)


def test_fatten_total_length_bound():
    rng = np.random.default_rng(5)
    for _ in range(50):
        ev = np.sort(rng.uniform(0, 10, int(rng.integers(1, 9))))
        spec = Spectrum(eigenvalues=ev, dim=ev.size)
        eps = float(rng.uniform(0.01, 2.0))
        u = fatten(spec, eps)
        assert u.total_length() <= 2 * eps * ev.size + 1e-12
        gaps = [b[0] - a[1] for a, b in zip(u.intervals, u.intervals[1:])]
        assert all(g > 0 for g in gaps)


def test_interval_union_intersect():
    a = IntervalUnion(intervals=((0.0, 2.0), (5.0, 6.0)))
    b = IntervalUnion(intervals=((1.0, 5.5),))
    assert a.intersect(b).intervals == ((1.0, 2.0), (5.0, 5.5))
    assert a.intersect(IntervalUnion(intervals=())).is_empty


def test_fixed_event_boundary_inclusive():
    spec = spectrum_of(1.0, 3.0)
    assert not fixed_energy_event(spec, 2.0, 0.5)
    assert fixed_energy_event(spec, 2.0, 1.0)


def test_fixed_event_matches_fatten_membership():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        ev = np.sort(rng.integers(0, 1281, int(rng.integers(1, 10))) / 64.0)
        spec = Spectrum(eigenvalues=ev, dim=ev.size)
        eps = [0.25, 0.125, 0.0625][int(rng.integers(0, 3))]
        energy = float(rng.integers(0, 1281)) / 64.0
        assert fixed_energy_event(spec, energy, eps) == fatten(spec, eps).contains(energy)


def test_variable_event_examples():
    assert not variable_energy_event(spectrum_of(5.0), (0.0, 1.0), 0.5)
    assert variable_energy_event(spectrum_of(5.0), (0.0, 1.0), 4.0)  # boundary


def test_two_volume_examples():
    assert not two_volume_event(spectrum_of(0.0), spectrum_of(10.0), (0.0, 10.0), 1.0)
    assert two_volume_event(spectrum_of(4.0), spectrum_of(6.0), (0.0, 10.0), 1.0)


def test_event_monotone_in_eps():
    rng = np.random.default_rng(31)
    for _ in range(200):
        ev1 = np.sort(rng.uniform(0, 10, 5))
        ev2 = np.sort(rng.uniform(0, 10, 4))
        sx, sy = Spectrum(ev1, 5), Spectrum(ev2, 4)
        e1, e2 = sorted(rng.uniform(0.01, 2.0, 2))
        window = tuple(sorted(rng.uniform(0, 10, 2)))
        energy = float(rng.uniform(0, 10))
        if fixed_energy_event(sx, energy, e1):
            assert fixed_energy_event(sx, energy, e2)
        if variable_energy_event(sx, window, e1):
            assert variable_energy_event(sx, window, e2)
        if two_volume_event(sx, sy, window, e1):
            assert two_volume_event(sx, sy, window, e2)


def test_degenerate_interval_equals_fixed():
    rng = np.random.default_rng(41)
    for _ in range(300):
        ev = np.sort(rng.uniform(0, 10, 6))
        spec = Spectrum(ev, 6)
        energy = float(rng.uniform(0, 10))
        eps = float(rng.uniform(0.01, 1.0))
        assert variable_energy_event(spec, (energy, energy), eps) == fixed_energy_event(
            spec, energy, eps
        )


def test_two_volume_with_equal_spectra_reduces_to_variable():
    rng = np.random.default_rng(43)
    for _ in range(300):
        ev = np.sort(rng.uniform(0, 10, 6))
        spec = Spectrum(ev, 6)
        window = tuple(sorted(rng.uniform(0, 10, 2)))
        eps = float(rng.uniform(0.01, 1.0))
        assert two_volume_event(spec, spec, window, eps) == variable_energy_event(
            spec, window, eps
        )


def test_two_volume_symmetry():
    rng = np.random.default_rng(47)
    for _ in range(300):
        sx = Spectrum(np.sort(rng.uniform(0, 10, 5)), 5)
        sy = Spectrum(np.sort(rng.uniform(0, 10, 3)), 3)
        window = tuple(sorted(rng.uniform(0, 10, 2)))
        eps = float(rng.uniform(0.01, 1.0))
        assert two_volume_event(sx, sy, window, eps) == two_volume_event(
            sy, sx, window, eps
        )


def test_h_star_arithmetic():
    assert h_star(0.5, math.log(2.0), 1, 0.5) == pytest.approx(0.5, rel=1e-12)
    assert h_star(0.0, 1.0, 8, 0.5) == math.inf
    assert h_star(2.0, 1.0, 8, 0.5) == pytest.approx(h_star(1.0, 1.0, 8, 0.5) / 2.0)


def test_delta0_arithmetic():
    assert delta0(1.0, 1, 0.5) == pytest.approx(0.5 * math.exp(-1.0), rel=1e-12)
    values = [delta0(1.0, L0, 0.5) for L0 in (1, 2, 4, 9)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert delta0(1e-9, 1, 0.5) == pytest.approx(0.5, abs=1e-8)


def _perturbation_setup():
    cube = Cube(Site(2, 1, (0, 0)), 3)
    field = sample_field(BERNOULLI, cube.field_region(), 99, 0)
    inter = InteractionSpec.pair_contact(0, 1.0)
    return cube, field, inter


def test_perturbation_check_h_zero():
    cube, field, inter = _perturbation_setup()
    result = perturbation_check(cube, field, inter, 0.0, 3.7, 1.0, 0.5, 3)
    assert result.ok and not result.skipped


def test_perturbation_check_scalar_case():
    # 1x1 cube: dist(E, spec(H_h)) = |a + h u - E| >= |a - E| - |h||u|
    cube = Cube(Site(2, 1, (0, 0)), 0)
    field = sample_field(BERNOULLI, cube.field_region(), 7, 0)
    inter = InteractionSpec.pair_contact(0, 1.0)
    bound = h_star(1.0, 1.0, 3, 0.5)
    for k, energy in enumerate(np.linspace(0.0, 8.0, 33)):
        result = perturbation_check(
            cube, field, inter, 0.9 * bound, float(energy), 1.0, 0.5, 3
        )
        assert result.skipped or result.ok, (k, result)


def test_perturbation_check_requires_weak_coupling():
    cube, field, inter = _perturbation_setup()
    bound = h_star(1.0, 1.0, 3, 0.5)
    with pytest.raises(ValueError, match="h_star"):
        perturbation_check(cube, field, inter, 1.1 * bound, 2.0, 1.0, 0.5, 3)


def test_wilson_interval_zero_successes():
    lo, hi = wilson_interval(0, 10**4)
    assert lo == 0.0
    assert hi == pytest.approx(1.96**2 / (10**4 + 1.96**2), rel=1e-12)
    assert hi < 4e-4


def test_wilson_interval_contains_p_hat():
    for successes, trials in [(0, 10), (3, 17), (17, 17), (500, 1000)]:
        lo, hi = wilson_interval(successes, trials)
        assert 0.0 <= lo <= successes / trials <= hi <= 1.0


def _query(eps, energy, trials_kind="fixed", L=2):
    return EventQuery(
        kind=trials_kind,
        n=1,
        d=1,
        L=L,
        distribution=BERNOULLI,
        interaction=InteractionSpec.none(),
        h=0.0,
        eps=eps,
        energy=energy,
    )


def test_mc_estimate_always_false():
    # energy far below the spectrum with a tiny eps: no successes
    result = mc_estimate(_query(1e-8, -50.0), trials=200, seed=1)
    assert result.successes == 0
    assert result.p_hat == 0.0
    assert result.ci95[0] == 0.0
    assert result.ci95[1] == pytest.approx(1.96**2 / (200 + 1.96**2), rel=1e-12)


def test_mc_estimate_always_true():
    # eps beyond the spectral diameter plus the offset of E from the center
    result = mc_estimate(_query(100.0, 2.0), trials=100, seed=1)
    assert result.successes == 100
    assert result.p_hat == 1.0


def test_mc_estimate_worker_invariance():
    query = _query(math.exp(-math.sqrt(8.0)), 2.0, L=8)
    a = mc_estimate(query, trials=300, seed=4, workers=1)
    b = mc_estimate(query, trials=300, seed=4, workers=3)
    assert a == b
    assert 0 < a.successes < 300


def test_mc_estimate_rejects_invalid_config_before_sampling():
    bad = EventQuery(
        kind="fixed",
        n=1,
        d=1,
        L=2,
        distribution=DistributionSpec.bernoulli(1.0),
        interaction=InteractionSpec.none(),
        h=0.0,
        eps=0.1,
        energy=2.0,
    )
    with pytest.raises(DistributionError, match="single-point support"):
        mc_estimate(bad, trials=10, seed=0)
    with pytest.raises(DistributionError, match="needs an interval"):
        mc_estimate(
            EventQuery(
                kind="variable",
                n=1,
                d=1,
                L=2,
                distribution=BERNOULLI,
                interaction=InteractionSpec.none(),
                h=0.0,
                eps=0.1,
            ),
            trials=10,
            seed=0,
        )


def test_two_volume_query_uses_disjoint_default_offset():
    query = EventQuery(
        kind="two_volume",
        n=2,
        d=1,
        L=2,
        distribution=BERNOULLI,
        interaction=InteractionSpec.none(),
        h=0.0,
        eps=math.exp(-math.sqrt(2.0)),
        window=(0.3 - 0.1, 0.3 + 0.1),
    )
    result = mc_estimate(query, trials=50, seed=3)
    assert result.trials == 50


def _mc(successes, trials):
    from wegnerlab.wegner import MCResult

    return MCResult(
        trials=trials,
        successes=successes,
        p_hat=successes / trials,
        ci95=wilson_interval(successes, trials),
    )


def test_decay_fit_exact_exponential():
    from wegnerlab.wegner import MCResult

    beta = 0.5
    points = [
        (
            L,
            MCResult(
                trials=1,
                successes=0,
                p_hat=math.exp(-2.0 * L**beta),
                ci95=(0.0, 1.0),
            ),
        )
        for L in (4, 9, 16, 25)
    ]
    fit = decay_fit(points, beta=beta, q=2.0)
    assert fit.alpha_hat == pytest.approx(2.0, abs=1e-10)


def test_decay_fit_single_positive_point():
    fit = decay_fit([(8, _mc(0, 100)), (16, _mc(3, 100))], beta=0.5, q=2.0)
    assert fit.alpha_hat is None
    assert len(fit.passes_polynomial) == 2


def test_decay_fit_zero_successes_polynomial_check():
    points = [(L, _mc(0, 10**4)) for L in (8, 16, 32)]
    fit = decay_fit(points, beta=0.5, q=2.0)
    assert fit.alpha_hat is None
    assert all(ok for _, ok in fit.passes_polynomial)
    # Wilson upper ~3.8e-4 stays below 32^-2 ~ 9.8e-4
    assert wilson_interval(0, 10**4)[1] < 32.0**-2


def test_decay_fit_needs_two_points():
    with pytest.raises(ValueError):
        decay_fit([(8, _mc(1, 10))], beta=0.5, q=1.0)


def test_decay_fit_q4_thresholds():
    points = [(L, _mc(0, 10**4)) for L in (2, 3)]
    fit = decay_fit(points, beta=0.5, q=4.0)
    assert all(ok for _, ok in fit.passes_polynomial)
