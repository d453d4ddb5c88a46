use approx::assert_relative_eq;
use gmml_core::gmml::{correlation_power, ff_gmml_density, ff_power_joint_moment};
use gmml_core::models::{
    anti_identity_coupling, bivariate_ml_density, build_figure_config, build_orderstat_bivariate,
    conditional_exceedance, identity_coupling, is_doubly_stochastic, log_correlation, mixture_marginal_density,
    orderstat_eigenbasis, orderstat_feed_forward, orderstat_ff_gmml, pearson_with_se, uniform_coupling, FigureName,
    OrderStatConfig, Statistic,
};
use gmml_core::phasetype::{ff_joint_fractional_moment, mph_laplace};
use gmml_core::sampling::{sample_batch, MphSampler, RngState, SampleBatch};
use gmml_core::{ml_real, Error, MLParams};

mod common;

fn ml_density(alpha: f64, rate: f64, x: f64) -> f64 {
    rate * x.powf(alpha - 1.0) * ml_real(MLParams::new(alpha, alpha).unwrap(), -rate * x.powf(alpha)).unwrap()
}

#[test]
fn couplings() {
    for m in [1, 2, 5, 20] {
        for p in [identity_coupling(m), anti_identity_coupling(m), uniform_coupling(m)] {
            assert!(is_doubly_stochastic(&p));
            for i in 0..m {
                assert_relative_eq!(p.row(i).sum(), 1.0, max_relative = 1e-14);
                assert_relative_eq!(p.column(i).sum(), 1.0, max_relative = 1e-14);
            }
        }
    }
    let mut bad = identity_coupling(3);
    bad[(0, 1)] = 0.5;
    assert!(matches!(OrderStatConfig::new(3, 1.0, 1.0, bad), Err(Error::Model(_))));
}

#[test]
fn backbone_marginals_and_independence() {
    let cfg = OrderStatConfig::new(1, 2.0, 3.0, identity_coupling(1)).unwrap();
    let rep = build_orderstat_bivariate(&cfg).unwrap();
    for &(u1, u2) in &[(0.5, 0.5), (1.0, 3.0), (4.0, 0.1)] {
        assert_relative_eq!(mph_laplace(&rep, &[u1, u2]).unwrap(), 2.0 / (2.0 + u1) * 3.0 / (3.0 + u2), max_relative = 1e-12);
    }
    let cfg = OrderStatConfig::new(3, 1.5, 0.7, uniform_coupling(3)).unwrap();
    let rep = build_orderstat_bivariate(&cfg).unwrap();
    for &(u1, u2) in &[(0.2, 0.4), (1.0, 1.0), (2.5, 0.3), (0.1, 5.0), (7.0, 7.0)] {
        assert_relative_eq!(mph_laplace(&rep, &[u1, u2]).unwrap(), 1.5 / (1.5 + u1) * 0.7 / (0.7 + u2), max_relative = 1e-12);
    }
    for p in [identity_coupling(6), anti_identity_coupling(6)] {
        let rep = build_orderstat_bivariate(&OrderStatConfig::new(6, 1.5, 0.7, p).unwrap()).unwrap();
        for &u in &[0.3, 2.0] {
            assert_relative_eq!(mph_laplace(&rep, &[u, 0.0]).unwrap(), 1.5 / (1.5 + u), max_relative = 1e-12);
            assert_relative_eq!(mph_laplace(&rep, &[0.0, u]).unwrap(), 0.7 / (0.7 + u), max_relative = 1e-12);
        }
    }
}

fn backbone_correlation(cfg: &OrderStatConfig) -> f64 {
    let ff = orderstat_feed_forward(cfg).unwrap();
    let m = |t: [f64; 2]| ff_joint_fractional_moment(&ff, &t).unwrap();
    let (m1, m2) = (m([1.0, 0.0]), m([0.0, 1.0]));
    let v1 = m([2.0, 0.0]) - m1 * m1;
    let v2 = m([0.0, 2.0]) - m2 * m2;
    (m([1.0, 1.0]) - m1 * m2) / (v1 * v2).sqrt()
}

#[test]
fn backbone_correlation_range() {
    let lower = 1.0 - std::f64::consts::PI.powi(2) / 6.0;
    let id = OrderStatConfig::new(20, 1.0, 1.0, identity_coupling(20)).unwrap();
    let anti = OrderStatConfig::new(20, 1.0, 1.0, anti_identity_coupling(20)).unwrap();
    let (ri, ra) = (backbone_correlation(&id), backbone_correlation(&anti));
    assert!(ri < lower + 0.05 && ri > lower, "{ri}");
    assert!(ra > 0.8 && ra < 1.0, "{ra}");
    // the positive end approaches 1 only slowly in m
    let big = OrderStatConfig::new(100, 1.0, 1.0, anti_identity_coupling(100)).unwrap();
    assert!(backbone_correlation(&big) > ra);

    for (cfg, want) in [(id, ri), (anti, ra)] {
        let rep = build_orderstat_bivariate(&cfg).unwrap();
        let b = sample_batch(&MphSampler::new(&rep), 1_000_000, RngState::new(21)).unwrap();
        let (rho, se) = pearson_with_se(&b.column(0), &b.column(1)).unwrap();
        assert!((rho - want).abs() <= 3.0 * se, "{rho} ± {se} vs {want}");
    }
}

#[test]
fn eigenbasis() {
    let cfg = OrderStatConfig::new(2, 1.0, 1.0, identity_coupling(2)).unwrap();
    let b = orderstat_eigenbasis(&cfg);
    assert_eq!(b.v.column(0).as_slice(), &[1.0, 1.0]);
    assert_eq!(b.v.column(1).as_slice(), &[1.0, 0.0]);
    for m in [4, 9] {
        let cfg = OrderStatConfig::new(m, 1.3, 0.4, identity_coupling(m)).unwrap();
        let b = orderstat_eigenbasis(&cfg);
        let (s, st) = (cfg.s(), cfg.s_tilde());
        for k in 1..=m {
            let kf = k as f64;
            let (v, w) = (b.v.column(k - 1), b.w.column(k - 1));
            assert!((&s * v + v * (kf * 1.3)).amax() < 1e-12);
            assert!((&st * w + w * (kf * 0.4)).amax() < 1e-10 * w.amax());
            // recursions v_{i+1} = (1 - (k-1)/(m-i)) v_i and w_{i+1} = (1 - k/i) w_i
            for i in 1..m {
                let fv = 1.0 - (kf - 1.0) / (m - i) as f64;
                assert!((v[i] - fv * v[i - 1]).abs() <= 1e-14 * v[i - 1].abs().max(1.0));
                let fw = 1.0 - kf / i as f64;
                assert!((w[i] - fw * w[i - 1]).abs() <= 1e-12 * w[i - 1].abs().max(1.0));
            }
        }
    }
}

#[test]
fn lifted_density_small_m() {
    let cfg = OrderStatConfig::new(1, 2.0, 3.0, identity_coupling(1)).unwrap();
    for &(x1, x2) in &[(0.3, 0.5), (1.0, 2.0)] {
        let want = ml_density(0.6, 2.0, x1) * ml_density(0.8, 3.0, x2);
        assert_relative_eq!(bivariate_ml_density(&cfg, (0.6, 0.8), (x1, x2)).unwrap(), want, max_relative = 1e-12);
    }
    for m in 2..=4 {
        for p in [identity_coupling(m), anti_identity_coupling(m)] {
            let cfg = OrderStatConfig::new(m, 1.0, 2.0, p).unwrap();
            let ff = orderstat_ff_gmml(&cfg, (0.6, 0.7)).unwrap();
            for &(x1, x2) in &[(0.2, 0.3), (1.0, 1.0), (3.0, 0.5)] {
                let a = bivariate_ml_density(&cfg, (0.6, 0.7), (x1, x2)).unwrap();
                let b = ff_gmml_density(&ff, &[x1, x2]).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }
}

/// At `m = 20` the eigen-sums cancel terms near 1e10, so agreement is limited to about 1e-8.
#[test]
fn lifted_density_m20_against_generic_path() {
    let grid = [0.1, 0.4, 1.0, 2.5, 6.0];
    for p in [identity_coupling(20), anti_identity_coupling(20)] {
        let cfg = OrderStatConfig::new(20, 1.0, 2.0, p).unwrap();
        let ff = orderstat_ff_gmml(&cfg, (0.6, 0.7)).unwrap();
        for &x1 in &grid {
            for &x2 in &grid {
                let a = bivariate_ml_density(&cfg, (0.6, 0.7), (x1, x2)).unwrap();
                let b = ff_gmml_density(&ff, &[x1, x2]).unwrap();
                assert!((a - b).abs() <= 1e-7 * b.abs(), "({x1}, {x2}): {a} vs {b}");
            }
        }
    }
}

#[test]
fn lifted_density_marginal() {
    let cfg = OrderStatConfig::new(20, 1.0, 2.0, identity_coupling(20)).unwrap();
    let a2 = 0.7;
    // slowest rate of S̃ is μ = 2, fastest 20μ
    let lo = (1e-14 / 40.0f64).powf(1.0 / a2);
    let hi = (1e5 / 2.0f64).powf(1.0 / a2);
    for &x in &[0.1, 0.5, 1.0, 3.0, 10.0] {
        let f = |y: f64| bivariate_ml_density(&cfg, (0.6, a2), (x, y)).unwrap();
        let body = common::integrate_log(f, lo, hi, 1e-9);
        let q = body + (lo * f(lo) + hi * f(hi)) / a2;
        assert_relative_eq!(q, ml_density(0.6, 1.0, x), max_relative = 1e-3);
    }
}

#[test]
fn figure_bundles() {
    let f1 = build_figure_config(FigureName::Fig1).unwrap();
    assert_eq!(f1.expected.statistic, Statistic::LogCorrelation);
    assert_eq!(f1.expected.value, -0.53);
    assert_eq!(f1.orderstat.as_ref().unwrap().m, 20);
    let f3 = build_figure_config(FigureName::Fig3).unwrap();
    assert_eq!((f3.expected.statistic, f3.expected.value), (Statistic::Pearson, 0.35));
    for b in f3.nu.betas(&f3.ff.alphas) {
        assert_relative_eq!(b, 3.0, max_relative = 1e-14);
    }
    let f4 = build_figure_config(FigureName::Fig4).unwrap();
    assert_eq!(f4.expected.value, -0.32);
    assert!("fig5".parse::<FigureName>().is_err());
    assert_eq!("fig2".parse::<FigureName>().unwrap(), FigureName::Fig2);
}

#[test]
fn mixture_marginals() {
    for name in [FigureName::Fig3, FigureName::Fig4] {
        for (i, (a, pre)) in [(0.6, 5.0 / 3.0), (0.7, 10.0 / 7.0)].into_iter().enumerate() {
            for &x in &[0.2, 0.8, 1.5] {
                // (β/α)(1/3) x² Σ λ_j E_{α,α}(-λ_j x³)
                let sum: f64 = [10.0, 1.0, 0.1].iter().map(|&l| l * ml_real(MLParams::new(a, a).unwrap(), -l * x * x * x).unwrap()).sum();
                assert_relative_eq!(mixture_marginal_density(name, i, x).unwrap(), pre * x * x * sum, max_relative = 1e-12);
            }
            let mass = common::integrate_log(|x| mixture_marginal_density(name, i, x).unwrap(), 1e-8, 1e7, 1e-10);
            assert!((mass - 1.0).abs() < 1e-4, "{name} coordinate {i}: {mass}");
        }
    }
    // the x³ variant does not normalize
    let f = |x: f64| 5.0 / 3.0 * x.powi(3) * [10.0, 1.0, 0.1].iter().map(|&l| l * ml_real(MLParams::new(0.6, 0.6).unwrap(), -l * x * x * x).unwrap()).sum::<f64>();
    let wrong = common::integrate_log(f, 1e-8, 1e7, 1e-9);
    assert!((wrong - 1.0).abs() > 0.1, "{wrong}");
    assert!(mixture_marginal_density(FigureName::Fig1, 0, 1.0).is_err());
}

fn batch_of(rows: Vec<[f64; 2]>) -> SampleBatch {
    SampleBatch {
        columns: 2,
        rows: rows.len(),
        data: rows.into_iter().flatten().collect(),
        seed: 0,
        fingerprint: 0,
    }
}

#[test]
fn log_correlation_examples() {
    let mut rng = common::rng(30);
    use rand::RngExt;
    let co: Vec<[f64; 2]> = (0..1000).map(|_| {
        let x: f64 = rng.random::<f64>() + 0.01;
        [x, x]
    }).collect();
    assert_relative_eq!(log_correlation(&batch_of(co)).unwrap(), 1.0, max_relative = 1e-12);
    let ind: Vec<[f64; 2]> = (0..100_000).map(|_| [rng.random::<f64>() + 1e-9, rng.random::<f64>() + 1e-9]).collect();
    assert!(log_correlation(&batch_of(ind)).unwrap().abs() < 0.01);
    assert!(matches!(log_correlation(&batch_of(vec![[1.0, 0.0], [2.0, 1.0]])), Err(Error::Domain(_))));
}

#[test]
fn figure_log_correlations() {
    for (name, seed) in [(FigureName::Fig1, 1), (FigureName::Fig2, 2)] {
        let fig = build_figure_config(name).unwrap();
        let b = sample_batch(&fig.sampler().unwrap(), fig.sample_size, RngState::new(seed)).unwrap();
        let r = log_correlation(&b).unwrap();
        assert!((r - fig.expected.value).abs() <= fig.expected.tolerance, "{name}: {r}");
    }
}

#[test]
fn power_figure_correlations() {
    for (name, seed) in [(FigureName::Fig3, 3), (FigureName::Fig4, 4)] {
        let fig = build_figure_config(name).unwrap();
        let rho = fig.analytic_correlation().unwrap().unwrap();
        assert!((rho - fig.expected.value).abs() <= fig.expected.tolerance, "{name}: {rho}");
        assert_eq!(rho, correlation_power(&fig.ff, &fig.nu).unwrap());
        let b = sample_batch(&fig.sampler().unwrap(), 100_000, RngState::new(seed)).unwrap();
        let (mc, se) = pearson_with_se(&b.column(0), &b.column(1)).unwrap();
        assert!((mc - rho).abs() <= 3.0 * se, "{name}: {mc} ± {se} vs {rho}");
    }
}

#[test]
fn power_figure_cross_moment() {
    let fig = build_figure_config(FigureName::Fig3).unwrap();
    let want = ff_power_joint_moment(&fig.ff, &fig.nu, &[1.0, 1.0]).unwrap();
    let b = sample_batch(&fig.sampler().unwrap(), 100_000, RngState::new(5)).unwrap();
    let prod: Vec<f64> = (0..b.rows).map(|i| b.row(i)[0] * b.row(i)[1]).collect();
    let (m, se) = common::mean_se(&prod);
    assert!((m - want).abs() <= 3.0 * se, "{m} ± {se} vs {want}");
}

#[test]
fn figure1_tail_independence() {
    let fig = build_figure_config(FigureName::Fig1).unwrap();
    let b = sample_batch(&fig.sampler().unwrap(), 1_000_000, RngState::new(6)).unwrap();
    let e = conditional_exceedance(&b, 0.99);
    assert!(e < 0.15, "{e}");
}
