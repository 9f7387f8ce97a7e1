import math

import numpy as np
import pytest
from scipy import integrate, stats

from threshdist import distributions as fd
from threshdist import simulate as mc
from threshdist import special as sf

ETA8 = mc.default_eta(8)
M4 = fd.VarianceMode.unknown_sigma(4)


def spec8(theta, xi=1.0, alpha=None):
    return fd.ComponentSpec(n=8, xi=xi, theta=theta, sigma=1.0, eta=ETA8, alpha=alpha)


class TestComponentSpec:
    def test_default_alpha_is_root_n_over_xi(self):
        s = fd.ComponentSpec(n=9, xi=2.0, theta=0.0, sigma=1.0, eta=0.1)
        assert s.alpha == 1.5

    def test_validation(self):
        with pytest.raises(ValueError):
            fd.ComponentSpec(n=0, xi=1.0, theta=0.0, sigma=1.0, eta=0.1)
        for field, bad in [("xi", -1.0), ("sigma", 0.0), ("eta", 0.0)]:
            kw = dict(n=4, xi=1.0, theta=0.0, sigma=1.0, eta=0.5)
            kw[field] = bad
            with pytest.raises(ValueError):
                fd.ComponentSpec(**kw)
        with pytest.raises(ValueError):
            fd.VarianceMode.unknown_sigma(0)

    def test_atom_location_never_negative_zero(self):
        s = spec8(0.0)
        assert math.copysign(1.0, s.atom_location) == 1.0


class TestDeletionProbability:
    def test_default_rule_gives_095_known(self):
        assert abs(fd.deletion_probability(spec8(0.0)) - 0.95) <= 1e-12

    def test_unknown_variance_is_central_t_mass(self):
        val = fd.deletion_probability(spec8(0.0), M4)
        b = math.sqrt(8) * ETA8
        oracle = stats.t.cdf(b, 4) - stats.t.cdf(-b, 4)
        assert abs(val - oracle) <= 1e-8

    def test_zero_interval_limit(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=0.0, sigma=1.0, eta=1e-300)
        assert fd.deletion_probability(s) <= 1e-12

    def test_known_example(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=1.0, sigma=1.0, eta=0.5)
        oracle = float(sf.normal_cdf(-1.0) - sf.normal_cdf(-3.0))
        assert abs(fd.deletion_probability(s) - oracle) <= 1e-14
        assert abs(oracle - 0.15730535589982697) <= 1e-14

    def test_same_for_all_kinds(self):
        # the deletion event is the same for all three estimators: the
        # mixture atom weight never depends on the kind
        for mode in (fd.KNOWN, M4):
            weights = {fd.as_mixture(kind, mode, spec8(1.5)).atom_weight
                       for kind in fd.KINDS}
            assert len(weights) == 1

    def test_monte_carlo_cross_check(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=1.0, sigma=1.0, eta=0.5)
        reps = 200_000
        vals = mc.sample_component(fd.HARD, fd.KNOWN, s, reps, seed=101)
        p = fd.deletion_probability(s)
        se = math.sqrt(p * (1 - p) / reps)
        assert abs(np.mean(vals == 0.0) - p) <= 4.0 * se


class TestCdf:
    def test_total_mass_conventions(self):
        for kind in fd.KINDS:
            for mode in (fd.KNOWN, M4):
                assert fd.cdf(kind, mode, spec8(1.5), math.inf) == 1.0
                assert fd.cdf(kind, mode, spec8(1.5), -math.inf) == 0.0

    def test_soft_known_first_branch(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=3.0, sigma=1.0, eta=0.5)
        assert abs(fd.cdf(fd.SOFT, fd.KNOWN, s, 0.0) - float(sf.normal_cdf(1.0))) <= 1e-14

    def test_hard_known_plateau(self):
        # theta = 0: constant value on the whole band [0, sqrt(n) eta]
        s = fd.ComponentSpec(n=4, xi=1.0, theta=0.0, sigma=1.0, eta=0.5)
        plateau = float(sf.normal_cdf(1.0))
        for x in np.linspace(0.0, 1.0, 9):
            assert abs(fd.cdf(fd.HARD, fd.KNOWN, s, float(x)) - plateau) <= 1e-14

    def test_hard_known_plateau_monte_carlo(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=0.0, sigma=1.0, eta=0.5)
        reps = 1_000_000
        vals = mc.sample_component(fd.HARD, fd.KNOWN, s, reps, seed=7)
        scaled = s.alpha * vals
        emp = np.mean(scaled <= 0.5)
        plateau = float(sf.normal_cdf(1.0))
        assert abs(emp - plateau) <= 4.0 * math.sqrt(plateau * (1 - plateau) / reps)

    @pytest.mark.parametrize("kind", fd.KINDS)
    @pytest.mark.parametrize("mode", [fd.KNOWN, M4], ids=["known", "m4"])
    def test_monotone_right_continuous(self, kind, mode):
        s = spec8(1.5)
        grid = np.linspace(-7.0, 7.0, 141)
        vals = [fd.cdf(kind, mode, s, float(x)) for x in grid]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        a = s.atom_location
        eps = 1e-9
        right = fd.cdf(kind, mode, s, a + eps)
        at = fd.cdf(kind, mode, s, a)
        assert abs(right - at) <= 1e-6  # continuity from the right

    @pytest.mark.parametrize("kind", fd.KINDS)
    @pytest.mark.parametrize("mode", [fd.KNOWN, M4], ids=["known", "m4"])
    def test_jump_equals_deletion_probability(self, kind, mode):
        for theta in (0.0, 1.5, 3.0):
            mix = fd.as_mixture(kind, mode, spec8(theta))
            a = mix.atom_location
            jump = mix.cdf(a) - mix.cdf(a - 1e-9)
            assert abs(jump - mix.atom_weight) <= 1e-8

    def test_smoothing_identity(self):
        # unknown-variance cdf = rho-average of known-variance cdfs
        for kind in fd.KINDS:
            s = spec8(1.5)
            for x in np.linspace(-5.0, 5.0, 21):
                lhs = fd.cdf(kind, M4, s, float(x))

                def averaged(t, x=float(x)):
                    st_ = fd.ComponentSpec(8, 1.0, 1.5, 1.0, t * ETA8, alpha=s.alpha)
                    return fd.cdf(kind, fd.KNOWN, st_, x)

                bp = [abs(s.offset(float(x))) / (s.xi * s.eta)] if kind == fd.HARD else None
                rhs = sf.integrate_rho(4, averaged, breakpoints=bp)
                assert abs(lhs - rhs) <= 1e-7

    def test_soft_unknown_equals_t_closed_form_and_quadrature(self):
        s = spec8(1.5)
        b = math.sqrt(8) * ETA8
        for x in np.linspace(-5.0, 5.0, 41):
            val = fd.cdf(fd.SOFT, M4, s, float(x))
            v = s.standardized(float(x))
            sign = 1.0 if s.offset(float(x)) >= 0.0 else -1.0
            closed = stats.nct.cdf(sign * b, 4, -v)
            quad = sf.integrate_rho(4, lambda t: float(sf.normal_cdf(v + sign * t * b)))
            assert abs(val - closed) <= 1e-8
            assert abs(val - quad) <= 1e-8


class TestDensity:
    def test_vanishes_in_tails(self):
        for kind in fd.KINDS:
            for mode in (fd.KNOWN, M4):
                assert fd.ac_density(kind, mode, spec8(1.5), 40.0) <= 1e-12
                assert fd.ac_density(kind, mode, spec8(1.5), -40.0) <= 1e-12

    def test_hard_known_excised_band_is_zero(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=0.0, sigma=1.0, eta=0.5)
        b = math.sqrt(4) * 0.5
        for x in np.linspace(-b + 1e-6, b - 1e-6, 11):
            assert fd.ac_density(fd.HARD, fd.KNOWN, s, float(x)) == 0.0
        assert fd.ac_density(fd.HARD, fd.KNOWN, s, b + 1e-6) > 0.0

    @pytest.mark.parametrize("kind", fd.KINDS)
    @pytest.mark.parametrize("mode", [fd.KNOWN, M4], ids=["known", "m4"])
    def test_mixture_normalization(self, kind, mode):
        mix = fd.as_mixture(kind, mode, spec8(1.5))
        val, _ = integrate.quad(mix.ac_density, -40.0, 40.0, limit=400,
                                points=[mix.atom_location, -6.0, 6.0])
        assert abs(mix.atom_weight + val - 1.0) <= 1e-8

    @pytest.mark.parametrize("kind", fd.KINDS)
    @pytest.mark.parametrize("mode", [fd.KNOWN, M4], ids=["known", "m4"])
    def test_sign_symmetry(self, kind, mode):
        pos, neg = spec8(1.5), spec8(-1.5)
        assert abs(fd.deletion_probability(pos, mode)
                   - fd.deletion_probability(neg, mode)) <= 1e-12
        for x in np.linspace(-4.0, 4.0, 17):
            assert abs(fd.ac_density(kind, mode, pos, float(x))
                       - fd.ac_density(kind, mode, neg, float(-x))) <= 1e-9

    @pytest.mark.parametrize("kind", fd.KINDS)
    @pytest.mark.parametrize("mode", [fd.KNOWN, M4], ids=["known", "m4"])
    def test_density_is_cdf_derivative(self, kind, mode):
        # central-difference oracle, keeping clear of the atom and of the
        # hard estimator's excision boundaries where the cdf is kinked
        s = spec8(1.5)
        band = s.alpha * (s.sigma * s.xi * s.eta)
        h = 1e-5
        for x in (-3.3, -1.7, 0.9, 2.1):
            if abs(x - s.atom_location) < 0.2:
                continue
            if kind == fd.HARD and mode.known and \
                    abs(abs(x - s.atom_location) - band) < 0.2:
                continue
            num = (fd.cdf(kind, mode, s, x + h) - fd.cdf(kind, mode, s, x - h)) / (2 * h)
            assert abs(num - fd.ac_density(kind, mode, s, x)) <= 1e-5, (kind, x)

    def test_cdf_is_integral_of_density_plus_atom(self):
        for kind in fd.KINDS:
            for mode in (fd.KNOWN, M4):
                mix = fd.as_mixture(kind, mode, spec8(1.5))
                for x in (-2.0, 0.3, 1.8):
                    val, _ = integrate.quad(
                        mix.ac_density, -40.0, x, limit=400,
                        points=[p for p in (mix.atom_location,) if p < x])
                    jump = mix.atom_weight if x >= mix.atom_location else 0.0
                    assert abs(mix.cdf(x) - (val + jump)) <= 1e-7


class TestArbitraryScaling:
    @pytest.mark.parametrize("kind", fd.KINDS)
    def test_monte_carlo_agreement_at_generic_alpha(self, kind):
        # the scaling factor is caller-chosen; check a non-preset value
        spec = fd.ComponentSpec(n=11, xi=1.3, theta=0.8, sigma=0.7, eta=0.46,
                                alpha=2.17)
        reps = 100_000
        for mode in (fd.KNOWN, fd.VarianceMode.unknown_sigma(6)):
            vals = mc.sample_component(kind, mode, spec, reps, seed=808)
            scaled = spec.alpha * (vals - spec.theta) / spec.sigma
            mix = fd.as_mixture(kind, mode, spec)
            emp = mc.empirical_mixed_cdf(scaled, spec.atom_location)
            grid = mc.default_ks_grid(scaled, spec.atom_location, 401)
            assert mc.ks_distance(emp, mix, grid) <= 1.36 / math.sqrt(reps) * 2.5
            w = mix.atom_weight
            se = math.sqrt(w * (1.0 - w) / reps)
            assert abs(np.mean(vals == 0.0) - w) <= 4.0 * se


class TestExtremeRegimes:
    @pytest.mark.parametrize("kw", [
        dict(n=10 ** 6, xi=1.0, theta=50.0, sigma=1.0, eta=1e-6),
        dict(n=4, xi=100.0, theta=0.001, sigma=0.01, eta=5.0),
        dict(n=8, xi=1.0, theta=0.0, sigma=1.0, eta=100.0),
        dict(n=8, xi=1.0, theta=1e-12, sigma=1.0, eta=1e-12),
    ])
    def test_evaluators_stay_valid(self, kw):
        spec = fd.ComponentSpec(**kw)
        for kind in fd.KINDS:
            for mode in (fd.KNOWN, M4):
                w = fd.deletion_probability(spec, mode)
                assert 0.0 <= w <= 1.0
                vals = [fd.cdf(kind, mode, spec, x) for x in (-1e6, -3.0, 0.0, 2.5, 1e6)]
                assert all(0.0 <= v <= 1.0 for v in vals)
                assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
                for x in (-2.0, 0.37, 4.4):
                    d = fd.ac_density(kind, mode, spec, x)
                    assert d >= 0.0 and math.isfinite(d)


class TestZBounds:
    def test_degenerate_root(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=-1.0, sigma=1.0, eta=0.5, alpha=1.0)
        z1, z2 = fd.z_bounds(s, 1.0, 0.0)  # offset = 0 and y = 0
        assert z1 == z2

    def test_ordering(self):
        rng = np.random.default_rng(0)
        s = spec8(0.7)
        for _ in range(100):
            x = float(rng.normal(scale=3.0))
            y = float(rng.uniform(0.0, 2.0))
            z1, z2 = fd.z_bounds(s, x, y)
            assert z1 <= z2

    def test_worked_example(self):
        s = fd.ComponentSpec(n=4, xi=1.0, theta=1.0, sigma=1.0, eta=0.5, alpha=2.0)
        z1, z2 = fd.z_bounds(s, 2.0, 0.5)
        assert abs(z1 + 2.23606797749979) <= 1e-12
        assert abs(z2 - 2.23606797749979) <= 1e-12


class TestAsMixture:
    def test_atom_location_zero_for_null_theta(self):
        assert fd.as_mixture(fd.SOFT, fd.KNOWN, spec8(0.0)).atom_location == 0.0

    def test_atom_weight_is_deletion_probability(self):
        for kind in fd.KINDS:
            mix = fd.as_mixture(kind, M4, spec8(3.0))
            assert mix.atom_weight == fd.deletion_probability(spec8(3.0), M4)

    def test_soft_known_atom_weight_monte_carlo(self):
        s = fd.ComponentSpec(n=8, xi=1.0, theta=1.5, sigma=1.0,
                             eta=1.95996 / math.sqrt(8), alpha=math.sqrt(8))
        mix = fd.as_mixture(fd.SOFT, fd.KNOWN, s)
        reps = 1_000_000
        vals = mc.sample_component(fd.SOFT, fd.KNOWN, s, reps, seed=55)
        w = mix.atom_weight
        se = math.sqrt(w * (1 - w) / reps)
        assert abs(np.mean(vals == 0.0) - w) <= 3.0 * se
