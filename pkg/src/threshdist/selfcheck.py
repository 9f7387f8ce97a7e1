"""Invariant suites runnable from the command line.

Each check returns silently on success and raises AssertionError with a
diagnostic message on failure.  ``run(names)`` executes a subset (default
all) and reports one PASS/FAIL line per check.
"""

from __future__ import annotations

import math
import traceback

import numpy as np
from scipy import integrate

from . import special as sf
from . import distributions as fd
from . import limits as lm
from . import estimators as est
from . import simulate as mc

_CHECKS: dict[str, callable] = {}


def _check(fn):
    _CHECKS[fn.__name__] = fn
    return fn


# ---------------------------------------------------------------- specfun

@_check
def rho_normalization():
    for m in range(1, 65):
        total = sf.integrate_rho(m, lambda s: 1.0)
        assert abs(total - 1.0) <= 1e-10, f"m={m}: integral {total}"


@_check
def noncentral_t_identity():
    # integral of Phi(a + b*s) rho_m(s) ds equals the t cdf at b with
    # non-centrality -a
    for m in (1, 2, 4, 16, 64):
        for a in (-2.0, -0.5, 0.0, 1.0, 3.0):
            for b in (-2.0, 0.0, 0.7, 2.5):
                lhs = sf.integrate_rho(m, lambda s: float(sf.normal_cdf(a + b * s)))
                rhs = sf.noncentral_t_cdf(m, -a, b)
                assert abs(lhs - rhs) <= 1e-8, f"(m,a,b)=({m},{a},{b}): {lhs} vs {rhs}"


@_check
def rho_gaussian_l1_limit():
    # the rescaled rho density approaches the standard normal in L1
    def l1(m):
        def f(t):
            scale = 1.0 / math.sqrt(2.0 * m)
            return abs(scale * float(sf.rho_density(m, scale * t + 1.0)) - float(sf.normal_pdf(t)))
        val, _ = integrate.quad(f, -60.0, 60.0, limit=400,
                                points=[-math.sqrt(2.0 * m)] if 2.0 * m <= 3600 else None)
        return val

    dists = [l1(m) for m in (4, 16, 64, 256)]
    assert all(b < a for a, b in zip(dists, dists[1:])), f"not decreasing: {dists}"
    assert dists[-1] <= 0.05, f"L1 distance at m=256 is {dists[-1]}"


@_check
def special_monotonicity():
    xs = np.linspace(-8.0, 8.0, 161)
    phi_vals = sf.normal_cdf(xs)
    assert np.all(np.diff(phi_vals) >= 0.0)
    tails = [sf.chi_square_tail(5, float(x)) for x in np.linspace(0.0, 40.0, 81)]
    assert all(b <= a for a, b in zip(tails, tails[1:]))
    tvals = [sf.noncentral_t_cdf(4, 1.0, float(x)) for x in np.linspace(-8.0, 8.0, 81)]
    assert all(b >= a for a, b in zip(tvals, tvals[1:]))


# ------------------------------------------------------------- finite_dist

def _specs():
    eta = mc.default_eta(8)
    return [fd.ComponentSpec(8, 1.0, th, 1.0, eta) for th in (0.0, 1.5, 3.0)]


@_check
def smoothing_identity():
    # unknown-variance cdf equals the known-variance cdf averaged over the
    # law of sigmahat/sigma
    m = 4
    mode = fd.VarianceMode.unknown_sigma(m)
    grid = np.linspace(-6.0, 6.0, 121)
    for kind in fd.KINDS:
        for spec in _specs():
            worst = 0.0
            for x in grid:
                lhs = fd.cdf(kind, mode, spec, float(x))

                def averaged(s, x=float(x)):
                    spec_s = fd.ComponentSpec(spec.n, spec.xi, spec.theta, spec.sigma,
                                              s * spec.eta, alpha=spec.alpha)
                    return fd.cdf(kind, fd.KNOWN, spec_s, x)

                bp = None
                if kind == fd.HARD:
                    bp = [abs(spec.offset(float(x))) / (spec.xi * spec.eta)]
                rhs = sf.integrate_rho(m, averaged, breakpoints=bp)
                worst = max(worst, abs(lhs - rhs))
            assert worst <= 1e-7, f"{kind}, theta={spec.theta}: max error {worst}"


@_check
def sign_symmetry():
    # the law at (theta, x) mirrors the law at (-theta, -x)
    eta = mc.default_eta(8)
    for kind in fd.KINDS:
        for mode in (fd.KNOWN, fd.VarianceMode.unknown_sigma(4)):
            for th in (0.7, 2.0):
                pos = fd.ComponentSpec(8, 1.0, th, 1.0, eta)
                neg = fd.ComponentSpec(8, 1.0, -th, 1.0, eta)
                dw = abs(fd.deletion_probability(pos, mode) - fd.deletion_probability(neg, mode))
                assert dw <= 1e-12, f"{kind} atom weight asymmetry {dw}"
                for x in np.linspace(-5.0, 5.0, 41):
                    a = fd.ac_density(kind, mode, pos, float(x))
                    b = fd.ac_density(kind, mode, neg, float(-x))
                    assert abs(a - b) <= 1e-9, f"{kind} density asymmetry at {x}: {a} vs {b}"


@_check
def cdf_jump_matches_deletion_probability():
    for kind in fd.KINDS:
        for mode in (fd.KNOWN, fd.VarianceMode.unknown_sigma(4)):
            for spec in _specs():
                mix = fd.as_mixture(kind, mode, spec)
                a = mix.atom_location
                jump = mix.cdf(a) - mix.cdf(a - 1e-9)
                assert abs(jump - mix.atom_weight) <= 1e-8, \
                    f"{kind}: jump {jump} vs weight {mix.atom_weight}"


@_check
def soft_unknown_closed_form_vs_quadrature():
    m = 4
    mode = fd.VarianceMode.unknown_sigma(m)
    for spec in _specs():
        b = spec.root_n * spec.eta
        for x in np.linspace(-6.0, 6.0, 61):
            closed = fd.cdf(fd.SOFT, mode, spec, float(x))
            v = spec.standardized(float(x))
            sign = 1.0 if spec.offset(float(x)) >= 0.0 else -1.0
            quad = sf.integrate_rho(m, lambda s: float(sf.normal_cdf(v + sign * s * b)))
            assert abs(closed - quad) <= 1e-8, f"x={x}: {closed} vs {quad}"


@_check
def adaptive_cdf_consistent_with_density():
    mode = fd.VarianceMode.unknown_sigma(4)
    for spec in _specs():
        mix = fd.as_mixture(fd.ADAPTIVE, fd.KNOWN, spec)
        mixu = fd.as_mixture(fd.ADAPTIVE, mode, spec)
        for mixture in (mix, mixu):
            for x in (-2.0, -0.5, 1.0, 2.5):
                num, _ = integrate.quad(mixture.ac_density, -40.0, x, limit=300,
                                        points=[p for p in (mixture.atom_location,) if p < x])
                jump = mixture.atom_weight if x >= mixture.atom_location else 0.0
                assert abs(mixture.cdf(x) - (num + jump)) <= 1e-7, \
                    f"x={x}: cdf {mixture.cdf(x)} vs integral {num + jump}"


@_check
def cdf_monotone():
    grid = np.linspace(-8.0, 8.0, 161)
    for kind in fd.KINDS:
        for mode in (fd.KNOWN, fd.VarianceMode.unknown_sigma(4)):
            for spec in _specs():
                vals = [fd.cdf(kind, mode, spec, float(x)) for x in grid]
                diffs = np.diff(vals)
                assert np.all(diffs >= -1e-12), f"{kind} not monotone"


# -------------------------------------------------------------- asymptotics

@_check
def limit_weight_coherence():
    inf = math.inf
    cases = [
        ("known", lm.RegimeParams(e=1.0, nu=0.4)),
        ("known", lm.RegimeParams(e=2.5, nu=-1.0)),
        ("unknown", lm.RegimeParams(e=1.0, nu=0.4, dof=4)),
        ("unknown", lm.RegimeParams(e=2.5, nu=-1.0, dof=7)),
        ("unknown", lm.RegimeParams(e=inf, zeta=0.8, dof=4)),
        ("unknown", lm.RegimeParams(e=inf, zeta=1.0, dof=inf, d=0.0, r=0.3)),
        ("unknown", lm.RegimeParams(e=inf, zeta=1.0, dof=inf, d=1.5, r=0.3)),
        ("unknown", lm.RegimeParams(e=inf, zeta=1.0, dof=inf, d=inf, r_prime=-0.7)),
    ]
    for mode, params in cases:
        for kind in fd.KINDS:
            family = lm.limit_distribution(kind, mode, params)
            if family.atom_location is None or isinstance(family, lm.PointMass):
                # a total-collapse pointmass merges kept and deleted mass;
                # only families whose atom is the deletion outcome qualify
                continue
            sel = lm.limit_selection_probability(params, mode)
            assert abs(family.atom_weight - sel) <= 1e-10, \
                f"{kind}/{mode}: weight {family.atom_weight} vs selection {sel}"


@_check
def smoothed_families_reduce_to_normal_at_e0():
    grid = np.linspace(-5.0, 5.0, 101)
    for family in (lm.HardSmoothed(1.0, 0.0, 4), lm.SoftSmoothed(1.0, 0.0, 4),
                   lm.AdaptiveSmoothed(1.0, 0.0, 4)):
        for x in grid:
            assert abs(family.cdf(float(x)) - float(sf.normal_cdf(float(x)))) <= 1e-8


@_check
def finite_sample_attains_conservative_limit():
    # along theta_n = nu*sigma*xi/sqrt(n), eta_n = e/sqrt(n), the scaled cdf
    # equals its limit; check the sup distance at n = 10**4
    nu, e = 1.0, 1.959964
    limits = {
        fd.HARD: lm.ExcisedNormal(nu, e),
        fd.SOFT: lm.SoftShiftNormal(nu, e),
        fd.ADAPTIVE: lm.AdaptiveKnown(nu, e),
    }
    n = 10_000
    spec = fd.ComponentSpec(n, 1.0, nu / math.sqrt(n), 1.0, e / math.sqrt(n))
    grid = np.linspace(-6.0, 6.0, 241)
    for kind, family in limits.items():
        worst = max(abs(fd.cdf(kind, fd.KNOWN, spec, float(x)) - family.cdf(float(x)))
                    for x in grid)
        assert worst <= 0.01, f"{kind}: sup distance {worst}"


@_check
def tv_distance_decreases():
    eta_rule = lambda n: n ** -0.25
    for kind in fd.KINDS:
        dists = []
        for n in (20, 80, 320, 1280):
            spec = fd.ComponentSpec(n, 1.0, 0.0, 1.0, eta_rule(n))
            known = fd.as_mixture(kind, fd.KNOWN, spec)
            unknown = fd.as_mixture(kind, fd.VarianceMode.unknown_sigma(n // 2), spec)
            b = math.sqrt(n) * spec.eta
            dists.append(lm.tv_distance(known, unknown, window=(-b - 9.0, b + 9.0),
                                        breakpoints=(-b, 0.0, b)))
        assert all(y < x for x, y in zip(dists, dists[1:])), f"{kind}: {dists}"


@_check
def soft_chi_fold_normalization():
    for zeta in (-1.5, -0.5, 0.5, 2.0):
        for m in (2, 4, 9):
            fam = lm.SoftChiFold(zeta, m)
            val, _ = integrate.quad(fam.ac_density, -12.0, 12.0, limit=300,
                                    points=[0.0, -zeta])
            assert abs(fam.atom_weight + val - 1.0) <= 1e-8, (zeta, m)


@_check
def adaptive_chi_cdf_jump():
    for zeta in (-1.2, -0.5, 0.5, 1.0, 2.0):
        for m in (2, 4, 9):
            fam = lm.AdaptiveChiCdf(zeta, m)
            loc = fam.atom_location
            jump = fam.cdf(loc) - fam.cdf(loc - 1e-12 * max(1.0, abs(loc)))
            assert abs(jump - fam.atom_weight) <= 1e-8, (zeta, m, jump)


# --------------------------------------------------------------- estimators

@_check
def ordering_chains():
    rng = np.random.default_rng(3)
    for _ in range(200):
        ls = float(rng.normal(scale=3.0))
        t = float(rng.uniform(0.01, 2.0))
        s = est.threshold_estimate(fd.SOFT, ls, t, 1.0, 1.0)
        a = est.threshold_estimate(fd.ADAPTIVE, ls, t, 1.0, 1.0)
        h = est.threshold_estimate(fd.HARD, ls, t, 1.0, 1.0)
        if ls >= 0:
            assert 0.0 <= s <= a <= h <= ls
        else:
            assert ls <= h <= a <= s <= 0.0


@_check
def feasible_equals_infeasible_at_true_sigma():
    # responses built so that the residual variance estimate is exactly
    # sigma^2; then the feasible and infeasible estimators coincide
    sigma = 1.3
    theta = np.array([3.0, 1.5, 0.0, 0.0])
    X = est.make_design(est.DesignSpec("I", 8, 4, rho=0.3))
    q, _ = np.linalg.qr(X, mode="complete")
    resid_dir = q[:, 4]                      # orthogonal to the columns of X
    Y = X @ theta + sigma * 2.0 * resid_dir  # ||resid||^2 = (n-k) sigma^2
    data = est.RegressionData(X, Y)
    ls, s2 = est.least_squares(data)
    assert abs(math.sqrt(s2) - sigma) <= 1e-12
    xi = est.xi_values(X)
    for kind in fd.KINDS:
        feasible = est.threshold_estimate(kind, ls, math.sqrt(s2), xi, 0.5)
        infeasible = est.threshold_estimate(kind, ls, sigma, xi, 0.5)
        assert np.max(np.abs(feasible - infeasible)) <= 1e-12, kind


@_check
def column_scaling_equivariance():
    rng = np.random.default_rng(5)
    n, k = 12, 4
    Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    X = Q * rng.uniform(0.5, 2.0, k)
    Y = rng.standard_normal(n)
    eta = 0.4
    c = -2.3
    j = 1
    Xs = X.copy()
    Xs[:, j] *= c

    ls, s2 = est.least_squares(est.RegressionData(X, Y))
    lss, s2s = est.least_squares(est.RegressionData(Xs, Y))
    sig, sigs = math.sqrt(s2), math.sqrt(s2s)
    xi, xis = est.xi_values(X), est.xi_values(Xs)
    for kind in fd.KINDS:
        base = est.threshold_estimate(kind, ls, sig, xi, eta)
        scaled = est.threshold_estimate(kind, lss, sigs, xis, eta)
        expect = base.copy()
        expect[j] /= c
        assert np.max(np.abs(scaled - expect)) <= 1e-8, kind

    # lasso: design-adapted penalty rules; adaptive lasso: design-independent
    # penalties (its least-squares denominator absorbs the column scale)
    combos = [(est.lasso, "eta_xi_inverse"), (est.lasso, "eta_psi"),
              (est.adaptive_lasso, "constant")]
    for solver, rule in combos:
        cfg = est.LassoConfig(rule, eta)
        base = solver(est.RegressionData(X, Y), cfg, sig)
        scaled = solver(est.RegressionData(Xs, Y), cfg, sigs)
        assert np.max(np.abs(X @ base - Xs @ scaled)) <= 1e-8, (rule, solver.__name__)
        expect = base.copy()
        expect[j] /= c
        assert np.max(np.abs(scaled - expect)) <= 1e-8, (rule, solver.__name__)


@_check
def lasso_diagonal_closed_forms():
    rng = np.random.default_rng(6)
    for _ in range(25):
        n = int(rng.integers(6, 16))
        k = int(rng.integers(2, min(6, n)))
        Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
        X = Q * rng.uniform(0.4, 2.5, k)
        Y = rng.standard_normal(n)
        data = est.RegressionData(X, Y)
        ls, s2 = est.least_squares(data)
        if np.any(ls == 0.0):
            continue
        sig = math.sqrt(s2)
        etap = rng.uniform(0.05, 0.8, k)
        xi = est.xi_values(X)
        sol = est.lasso(data, est.LassoConfig.per_component(etap), sig)
        closed = np.sign(ls) * np.maximum(np.abs(ls) - sig * etap * xi ** 2, 0.0)
        assert np.max(np.abs(sol - closed)) <= 1e-10
        sol_a = est.adaptive_lasso(data, est.LassoConfig.per_component(etap), sig)
        closed_a = ls * np.maximum(1.0 - sig ** 2 * etap ** 2 * xi ** 2 / ls ** 2, 0.0)
        assert np.max(np.abs(sol_a - closed_a)) <= 1e-10


# ---------------------------------------------------------------- mc harness

def _variant_ks(kind, feasible, reps, seed):
    cfg = mc.SimConfig(design=est.DesignSpec("I", 8, 4, rho=0.0),
                       theta=(3.0, 1.5, 0.0, 0.0), sigma=1.0,
                       estimator=kind, feasible=feasible, reps=reps, seed=seed)
    res = mc.run_study(cfg)
    out = []
    for i in range(4):
        mix = res.overlay[i]
        emp = mc.empirical_mixed_cdf(res.scaled_samples[:, i], mix.atom_location)
        grid = mc.default_ks_grid(res.scaled_samples[:, i], mix.atom_location)
        out.append((mc.ks_distance(emp, mix, grid), res.zero_proportion[i],
                    mix.atom_weight))
    return out


@_check
def monte_carlo_matches_analytic_law():
    reps = 100_000
    seed = 2024
    for kind in fd.KINDS:
        for feasible in (False, True):
            for ks, zp, weight in _variant_ks(kind, feasible, reps, seed):
                assert ks <= 0.01, f"{kind} feasible={feasible}: KS {ks}"
                se = math.sqrt(max(weight * (1.0 - weight), 1e-12) / reps)
                assert abs(zp - weight) <= max(3.0 * se, 2.0 / reps), \
                    f"{kind} feasible={feasible}: zero prop {zp} vs weight {weight}"
            seed += 1


@_check
def consistent_tuning_two_point_localization():
    # hard thresholding, known sigma, zeta = 0.5: under 1/(xi*eta) scaling
    # the sampled mass piles up near -zeta and 0 with the catalogued split
    n, reps, seed = 10_000, 100_000, 99
    eta = 2.0 * n ** -0.25
    zeta = 0.5
    spec = fd.ComponentSpec(n, 1.0, zeta * eta, 1.0, eta,
                            alpha=fd.inverse_xi_eta(1.0, eta))
    vals = mc.sample_component(fd.HARD, fd.KNOWN, spec, reps, seed)
    scaled = spec.alpha * (vals - spec.theta) / spec.sigma
    near = (np.abs(scaled + zeta) <= 0.05) | (np.abs(scaled) <= 0.05)
    assert near.mean() >= 0.99, f"only {near.mean()} of mass localized"
    params = lm.RegimeParams(e=math.inf, zeta=zeta)
    w = lm.limit_selection_probability(params, "known")
    frac_at_minus_zeta = np.mean(vals == 0.0)
    se = math.sqrt(w * (1.0 - w) / reps)
    assert abs(frac_at_minus_zeta - w) <= max(3.0 * se, 2.0 / reps), \
        (frac_at_minus_zeta, w)


@_check
def oracle_scaling_normal_limit():
    # fixed nonzero coefficient, consistent tuning with n^{1/4}*eta -> 0:
    # under sqrt(n)/xi scaling both hard and adaptive look standard normal
    n, reps, seed = 10_000, 100_000, 7
    eta = n ** -0.45
    spec = fd.ComponentSpec(n, 1.0, 1.0, 1.0, eta)
    phi = lm.StdNormal()
    for kind in (fd.HARD, fd.ADAPTIVE):
        vals = mc.sample_component(kind, fd.KNOWN, spec, reps, seed)
        scaled = math.sqrt(n) * (vals - spec.theta)
        emp = mc.empirical_mixed_cdf(scaled, 0.0)
        grid = np.quantile(scaled, np.linspace(0.001, 0.999, 501))
        ks = max(abs(emp(float(x)) - phi.cdf(float(x))) for x in grid)
        assert ks <= 0.02, f"{kind}: KS {ks}"


@_check
def empirical_cdf_against_normal_draws():
    gen = np.random.Generator(np.random.Philox(key=np.array([123, 0], dtype=np.uint64)))
    draws = gen.standard_normal(100_000)
    emp = mc.empirical_mixed_cdf(draws, 0.0)
    grid = np.linspace(-4.0, 4.0, 321)
    ks = max(abs(emp(float(x)) - float(sf.normal_cdf(float(x)))) for x in grid)
    assert ks <= 1.36 / math.sqrt(draws.size) * 1.5, ks


@_check
def study_replications_order_independent():
    cfg = mc.SimConfig(design=est.DesignSpec("II", 8, 4, c=0.2),
                       theta=(3.0, 1.5, 0.0, 0.0), sigma=1.0, estimator="hard",
                       feasible=True, reps=500, seed=31)
    res = mc.run_study(cfg)
    # reassemble the noise in shuffled order: identical per-replication draws
    order = np.random.default_rng(0).permutation(cfg.reps)
    noise = np.empty((cfg.reps, 8))
    for r in order:
        noise[r] = mc.replication_noise(cfg.seed, int(r), 8)
    direct = np.stack([mc.replication_noise(cfg.seed, r, 8) for r in range(cfg.reps)])
    assert np.array_equal(noise, direct)
    res2 = mc.run_study(cfg)
    assert np.array_equal(res.scaled_samples, res2.scaled_samples)


def run(names=None, stream=None) -> int:
    """Run the named checks (default: all).  Returns the number of failures."""
    import sys
    stream = stream or sys.stdout
    selected = names or list(_CHECKS)
    failures = 0
    for name in selected:
        if name not in _CHECKS:
            print(f"{name}: UNKNOWN CHECK", file=stream)
            failures += 1
            continue
        try:
            _CHECKS[name]()
        except Exception as exc:  # noqa: BLE001 - report any failure
            failures += 1
            print(f"{name}: FAIL ({exc})", file=stream)
            traceback.print_exc(limit=1, file=stream)
        else:
            print(f"{name}: PASS", file=stream)
    return failures
