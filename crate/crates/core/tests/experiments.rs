use geodesic_clt::coding_graph::{build_free_group_graph, enumerate_cycles, CodingGraph};
use geodesic_clt::experiments::{
    bounded_defect, estimate_l_sigma, gromov_decay, holder_decay, ks_statistic, mean_variance, normal_cdf,
    run_clt, tau_residual, tv_pushforward, with_threads, CltOptions, ExperimentError, SamplerKind,
    StatisticKind,
};
use geodesic_clt::hyperbolic::{pair_of_pants_rep, FuchsianRep, HPoint};
use geodesic_clt::parry_markov::{ParryChain, SeededRng};
use rand_distr::{Distribution, Exp1, StandardNormal};

fn setup() -> (CodingGraph, FuchsianRep) {
    (
        build_free_group_graph(2).unwrap(),
        pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i()).unwrap(),
    )
}

#[test]
fn normal_cdf_reference_values() {
    // Φ at a few points, to 7 digits.
    for (x, phi) in [(0.0, 0.5), (1.0, 0.8413447), (-1.96, 0.0249979), (3.0, 0.9986501)] {
        assert!((normal_cdf(x) - phi).abs() < 2e-7, "{x}");
    }
}

#[test]
fn ks_detects_normality() {
    let mut rng = SeededRng::new(3, 0);
    let normal: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    assert!(ks_statistic(&normal).unwrap() < 0.006);
    let (mean, var) = mean_variance(&normal);
    assert!(mean.abs() < 0.01 && (var - 1.0).abs() < 0.02);
    // Standardized exponential: skewed, far from N(0, 1).
    let exp: Vec<f64> = (0..10_000).map(|_| Exp1.sample(&mut rng)).map(|x: f64| x - 1.0).collect();
    assert!(ks_statistic(&exp).unwrap() > 0.05);
    assert!(ks_statistic(&[]).is_err());
}

#[test]
fn clt_at_length_one_is_degenerate() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let run = run_clt(&rep, &g, &chain, &CltOptions::new(1, 1000, 4)).unwrap();
    let mut distinct: Vec<f64> = run.values.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    assert!(distinct.len() <= 2);
    assert!(run.report.ks_statistic > 0.2);
}

#[test]
fn clt_rejects_bad_arguments() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    assert!(matches!(
        run_clt(&rep, &g, &chain, &CltOptions::new(10, 99, 0)),
        Err(ExperimentError::InvalidArgument(_))
    ));
    assert!(run_clt(&rep, &g, &chain, &CltOptions::new(0, 500, 0)).is_err());
    let markov_primitive = CltOptions::new(10, 500, 0).sampler(SamplerKind::Markov).primitive_only(true);
    assert!(run_clt(&rep, &g, &chain, &markov_primitive).is_err());
    // A rank-3 graph needs a third generator.
    let g3 = build_free_group_graph(3).unwrap();
    let chain3 = ParryChain::new(&g3).unwrap();
    assert!(run_clt(&rep, &g3, &chain3, &CltOptions::new(10, 500, 0)).is_err());
    assert!(gromov_decay(&rep, &g, &[0.5], &[20, 10], 100, 0).is_err());
    assert!(gromov_decay(&rep, &g, &[-1.0], &[10], 100, 0).is_err());
}

#[test]
fn clt_report_is_self_consistent() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let run = run_clt(&rep, &g, &chain, &CltOptions::new(60, 4000, 8)).unwrap();
    let r = &run.report;
    assert_eq!(r.sample_count, 4000);
    assert!((r.l_hat - r.mean / 60.0).abs() < 1e-12);
    assert!((r.sigma_hat - (r.variance / 60.0).sqrt()).abs() < 1e-12);
    let (m, v) = mean_variance(&run.normalized);
    assert!(m.abs() < 1e-10 && (v - 1.0).abs() < 1e-10);
    assert!((ks_statistic(&run.normalized).unwrap() - r.ks_statistic).abs() < 1e-15);
}

#[test]
fn drift_is_bounded_by_generator_displacement() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let opts = CltOptions::new(1, 2000, 6).statistic(StatisticKind::Displacement);
    let est = estimate_l_sigma(&rep, &g, &chain, &[40, 80], &opts).unwrap();
    for row in &est.rows {
        assert!(row.l_hat <= est.max_generator_displacement + 1e-12);
        assert!(row.sigma_hat > 0.0);
    }
    assert!(est.l_relative_spread.unwrap() < 0.05);
}

#[test]
fn displacement_and_translation_length_share_a_drift() {
    // d(z, gz) − τ(g) is bounded, so both statistics give the same L.
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let samples = 20_000;
    let base = CltOptions::new(200, samples, 10);
    let tau = run_clt(&rep, &g, &chain, &base.clone()).unwrap().report;
    let disp = run_clt(&rep, &g, &chain, &base.statistic(StatisticKind::Displacement)).unwrap().report;
    let se = tau.sigma_hat / (samples as f64 * 200.0).sqrt();
    assert!((tau.l_hat - disp.l_hat).abs() < 3.0 * se + 0.01, "{} vs {}", tau.l_hat, disp.l_hat);
}

#[test]
fn markov_sampler_has_the_same_drift() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let uniform = run_clt(&rep, &g, &chain, &CltOptions::new(150, 10_000, 12)).unwrap().report;
    let markov = run_clt(&rep, &g, &chain, &CltOptions::new(150, 10_000, 12).sampler(SamplerKind::Markov))
        .unwrap()
        .report;
    assert!((uniform.l_hat - markov.l_hat).abs() < 0.05, "{} vs {}", uniform.l_hat, markov.l_hat);
}

#[test]
fn primitive_filter_only_keeps_primitive_cycles() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let run = run_clt(&rep, &g, &chain, &CltOptions::new(4, 500, 1).primitive_only(true)).unwrap();
    // Non-primitive length-4 classes (a⁴, (ab)², …) have τ an integer multiple
    // of a shorter τ; primitive ones never equal 4·τ(a) = 8.
    assert!(run.values.iter().all(|t| (t - 8.0).abs() > 1e-6));
}

#[test]
fn decay_is_antitone_in_epsilon_and_vanishes_for_large_epsilon() {
    let (g, rep) = setup();
    let report = gromov_decay(&rep, &g, &[0.05, 0.2, 1000.0], &[10, 30], 2000, 2).unwrap();
    for n in [10, 30] {
        let fr: Vec<f64> = report.rows.iter().filter(|r| r.n == n).map(|r| r.exceed_fraction).collect();
        assert!(fr.windows(2).all(|w| w[1] <= w[0]), "{fr:?}");
        assert_eq!(fr[2], 0.0);
    }
    assert_eq!(report.rows_for(1000.0).len(), 2);
}

#[test]
fn tv_at_prime_length_counts_classes() {
    let g = build_free_group_graph(2).unwrap();
    let row = tv_pushforward(&g, 7, 1_000_000).unwrap();
    let cycles = enumerate_cycles(&g, 7).unwrap().len();
    assert_eq!(row.cycles as usize, cycles);
    // Prime n: four powers a⁷, A⁷, b⁷, B⁷ plus (Tr − 4)/7 primitive classes.
    assert_eq!(row.classes as usize, 4 + (cycles - 4) / 7);
    assert!(tv_pushforward(&g, 12, 1000).is_err());
}

#[test]
fn diagnostics_behave() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let tau = tau_residual(&rep, &g, &[10, 40], 500, 3).unwrap();
    assert!(tau.rows.iter().all(|r| r.max_residual >= r.mean_residual && r.mean_residual >= 0.0));
    let holder = holder_decay(&rep, &chain, 12, 200, 20, 3).unwrap();
    assert!(holder.log_slope < 0.0);
    assert!(holder_decay(&rep, &chain, 1, 200, 20, 3).is_err());
    let defect = bounded_defect(&rep, &chain, 100, &[20, 50, 80], 200, 3).unwrap();
    let maxima: Vec<f64> = defect.rows.iter().map(|r| r.max_product).collect();
    assert!(maxima.iter().all(|&m| m < 3.0), "{maxima:?}");
    assert!(bounded_defect(&rep, &chain, 50, &[60], 10, 3).is_err());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let (g, rep) = setup();
    let chain = ParryChain::new(&g).unwrap();
    let opts = CltOptions::new(50, 5000, 77).statistic(StatisticKind::Displacement);
    let a = with_threads(Some(1), || run_clt(&rep, &g, &chain, &opts).unwrap().values).unwrap();
    let b = with_threads(Some(5), || run_clt(&rep, &g, &chain, &opts).unwrap().values).unwrap();
    assert_eq!(a, b);
}
