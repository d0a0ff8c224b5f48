//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.
//!
//! `cargo test -p mpr-core --test acceptance` runs everything; trailing
//! numbers (`-- 1 9 11`) select criteria. The Davis-Kahan check covers the
//! instances solved by criteria 6 to 8, so it needs them selected too.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use mpr_core::estimator::{
    estimate_moments_gaussian, estimate_moments_subgaussian, monte_carlo_moments_gaussian,
    population_covariance_gaussian, population_covariance_subgaussian, reweighted_covariance,
    MomentMode,
};
use mpr_core::harness::{
    fit_log_log, median, run_sweep, ExperimentConfig, OutputPaths, SignalFamily, SweepResult,
    SweepSolver,
};
use mpr_core::linalg::{project_l1_ball, project_psd_trace1};
use mpr_core::model::{
    admissible, generate, make_signal, Distribution, LinkFunction, Sign, SignalKind, SignalSpec,
};
use mpr_core::rng::stream_rng;
use mpr_core::solver::{
    estimate_gaussian_width, recover_from_covariance, solve_k_pca, solve_sparse_pca, SdpConfig,
    Segment, Singleton, SparseSpectrahedron,
};
use mpr_core::SymMatrix;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

// ---------------------------------------------------------------- 1

fn projections() -> Outcome {
    let mut rng = stream_rng(101, 0);
    let mut worst_psd = 0.0f64;
    let mut worst_l1 = 0.0f64;
    let mut worst_vi = f64::MIN;
    for _ in 0..200 {
        let a = random_symmetric(&mut rng, 3, 1.0);
        let p = project_psd_trace1(&a).unwrap();
        worst_psd = worst_psd.max(p.frobenius_distance(&reference_psd_trace1(&a)));
        let r = rng.random_range(0.2..3.0);
        let q = project_l1_ball(&a, r).unwrap();
        worst_l1 = worst_l1.max(q.frobenius_distance(&reference_l1_ball(&a, r)));
        // Variational inequality ⟨A − P(A), Y − P(A)⟩ ≤ 0 against random feasible Y.
        for _ in 0..5 {
            let y = random_spectrahedron_point(&mut rng, 3);
            worst_vi = worst_vi.max((&a - &p).dot(&(&y - &p)));
            let mut z = random_symmetric(&mut rng, 3, 1.0);
            z = z.scaled(r * rng.random::<f64>() / z.l1_norm());
            worst_vi = worst_vi.max((&a - &q).dot(&(&z - &q)));
        }
    }
    // Hand-derived KKT solutions.
    let hand = [
        (project_psd_trace1(&SymMatrix::from_diag(&[2.0, 0.0, -1.0])).unwrap(), SymMatrix::from_diag(&[1.0, 0.0, 0.0])),
        (project_psd_trace1(&SymMatrix::from_diag(&[0.9, 0.9, -0.8])).unwrap(), SymMatrix::from_diag(&[0.5, 0.5, 0.0])),
        (
            project_l1_ball(&SymMatrix::from_rows(&[vec![0.8, 0.4], vec![0.4, 0.8]]).unwrap(), 2.0).unwrap(),
            SymMatrix::from_rows(&[vec![0.7, 0.3], vec![0.3, 0.7]]).unwrap(),
        ),
    ];
    let worst_hand = hand.iter().map(|(a, b)| a.frobenius_distance(b)).fold(0.0, f64::max);

    let mut worst_idem = 0.0f64;
    let mut worst_expand = f64::MIN;
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let a = random_symmetric(&mut rng, n, 2.0);
        let b = random_symmetric(&mut rng, n, 2.0);
        let r = rng.random_range(1.0..=n as f64);
        let (pa, pb) = (project_psd_trace1(&a).unwrap(), project_psd_trace1(&b).unwrap());
        let (qa, qb) = (project_l1_ball(&a, r).unwrap(), project_l1_ball(&b, r).unwrap());
        worst_idem = worst_idem
            .max(project_psd_trace1(&pa).unwrap().frobenius_distance(&pa))
            .max(project_l1_ball(&qa, r).unwrap().frobenius_distance(&qa));
        let d = a.frobenius_distance(&b);
        worst_expand = worst_expand
            .max(pa.frobenius_distance(&pb) - d)
            .max(qa.frobenius_distance(&qb) - d);
    }
    let pass = worst_psd <= 1e-3
        && worst_l1 <= 1e-3
        && worst_hand <= 1e-3
        && worst_vi <= 1e-9
        && worst_idem <= 1e-10
        && worst_expand <= 1e-10;
    Outcome::new(
        pass,
        format!(
            "oracle gap psd {worst_psd:.1e} l1 {worst_l1:.1e} hand {worst_hand:.1e}, VI {worst_vi:.1e}, \
             idempotence {worst_idem:.1e}, expansion {worst_expand:.1e}"
        ),
    )
}

// ---------------------------------------------------------------- 2

fn sdp_vs_eigenvector() -> Outcome {
    let mut rng = stream_rng(202, 0);
    let mut worst = 0.0f64;
    let mut solved = 0;
    while solved < 50 {
        let n = rng.random_range(2..=10);
        let a = random_symmetric(&mut rng, n, 1.0);
        let (v, _, gap) = reference_top_eigen(&a);
        if gap < 0.1 {
            continue;
        }
        let s = n as f64 + rng.random_range(0.0..2.0);
        let x = solve_sparse_pca(&a, &SdpConfig::new(s)).unwrap().x_hat_matrix;
        worst = worst.max(x.frobenius_distance(&SymMatrix::outer(&v)));
        solved += 1;
    }
    Outcome::new(worst <= 1e-4, format!("worst ‖X̂ − v₁v₁ᵀ‖_F = {worst:.2e} over 50 instances"))
}

// ---------------------------------------------------------------- 3

fn population_oracle() -> Outcome {
    let mut rng = stream_rng(303, 0);
    let mut worst_err = 0.0f64;
    for (n, s) in [(8, 1), (8, 2), (16, 3), (16, 4), (32, 4), (32, 5), (64, 4), (10, 10)] {
        for seed in 0..3 {
            let x = make_signal(&SignalSpec { dim: n, kind: SignalKind::RandomAdmissible { sparsity: s } }, seed)
                .unwrap();
            let sigma = population_covariance_gaussian(&x, 2.0);
            let r = recover_from_covariance(&sigma, &SdpConfig::new(s as f64), Some(&x)).unwrap();
            worst_err = worst_err.max(r.error_up_to_sign.unwrap());
        }
    }

    // Curvature on the Gaussian form and on the Rademacher s = 3 form.
    let x = admissible(12, &[1, 5, 9], &[Sign::Plus, Sign::Minus, Sign::Plus]).unwrap();
    let rad = estimate_moments_subgaussian(&LinkFunction::Quadratic, &Distribution::Rademacher, 3, MomentMode::Enumeration, 0)
        .unwrap();
    let forms = [
        (2.0, population_covariance_gaussian(&x, 2.0)),
        (rad.mu, population_covariance_subgaussian(&x, rad.mu, rad.sigma.unwrap(), 3).unwrap()),
    ];
    let xx = x.outer();
    let mut worst_slack = f64::MAX;
    for (mu, sigma) in &forms {
        for k in 0..100 {
            let feasible = if k % 2 == 0 {
                random_spectrahedron_point(&mut rng, 12)
            } else {
                random_sparse_feasible(&mut rng, 12, 3.0)
            };
            let d = &xx - &feasible;
            let slack = sigma.dot(&d) - 0.5 * mu * d.frobenius_norm().powi(2);
            worst_slack = worst_slack.min(slack);
        }
    }
    Outcome::new(
        worst_err <= 1e-3 && worst_slack >= -1e-9,
        format!("worst error {worst_err:.2e}; min curvature slack {worst_slack:.2e}"),
    )
}

// ---------------------------------------------------------------- 4

fn moment_oracles() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, note: String| {
        pass &= ok;
        notes.push(note);
    };

    let q = LinkFunction::Quadratic;
    let exact = estimate_moments_gaussian(&q, 1_000_000, 1).unwrap().mu;
    check(exact == 2.0, format!("μ(t²) analytic {exact}"));
    let mc = monte_carlo_moments_gaussian(&q, 1_000_000, 1).unwrap();
    check(
        (mc.mu - 2.0).abs() <= 3.0 * mc.mu_stderr(),
        format!("MC {:.4}±{:.4}", mc.mu, mc.mu_stderr()),
    );
    let abs = LinkFunction::AbsValue;
    let target = (2.0 / PI).sqrt();
    let a_exact = estimate_moments_gaussian(&abs, 1_000_000, 2).unwrap().mu;
    let a_mc = monte_carlo_moments_gaussian(&abs, 1_000_000, 2).unwrap();
    check(
        (a_exact - target).abs() <= 1e-15 && (a_mc.mu - target).abs() <= 3.0 * a_mc.mu_stderr(),
        format!("μ(|t|) MC {:.4}±{:.4}", a_mc.mu, a_mc.mu_stderr()),
    );

    let rad = Distribution::Rademacher;
    for (s, mu, sigma) in [(2, 1.0, -1.0), (3, 4.0 / 3.0, -4.0 / 3.0)] {
        let r = estimate_moments_subgaussian(&q, &rad, s, MomentMode::Enumeration, 0).unwrap();
        let got_sigma = r.sigma.unwrap();
        check(
            (r.mu - mu).abs() <= 1e-12 && (got_sigma - sigma).abs() <= 1e-12,
            format!("s={s}: ({:.6}, {:.6})", r.mu, got_sigma),
        );
    }

    let links = [
        LinkFunction::Quadratic,
        LinkFunction::AbsValue,
        LinkFunction::one_bit(),
        LinkFunction::custom("quartic", |t| t.powi(4), 0.0, true),
        LinkFunction::custom("cos", f64::cos, 0.0, false),
    ];
    let mut worst = 0.0f64;
    for link in &links {
        for s in 2..=4 {
            let r = estimate_moments_subgaussian(link, &rad, s, MomentMode::Enumeration, 0).unwrap();
            let (mu_ref, sigma_ref) = rademacher_moments_by_signs(|t| link.deterministic(t), s);
            worst = worst
                .max((r.sigma.unwrap() + r.mu).abs())
                .max((r.mu - mu_ref).abs())
                .max((r.sigma.unwrap() - sigma_ref).abs());
        }
    }
    check(worst <= 1e-12, format!("σ = −μ over 5 links × s∈{{2,3,4}}: worst {worst:.1e}"));
    Outcome::new(pass, notes.join("; "))
}

// ---------------------------------------------------------------- 5

fn concentration() -> Outcome {
    let dev = |m: usize| -> f64 {
        let errs: Vec<f64> = (0..20u64)
            .map(|seed| {
                let x = make_signal(&SignalSpec { dim: 16, kind: SignalKind::RandomAdmissible { sparsity: 4 } }, seed)
                    .unwrap();
                let data = generate(&x, &Distribution::Gaussian, &LinkFunction::Quadratic, m, 5000 + seed).unwrap();
                (&reweighted_covariance(&data) - &population_covariance_gaussian(&x, 2.0)).max_abs()
            })
            .collect();
        median(&errs)
    };
    let (small, large) = (dev(10_000), dev(40_000));
    let ratio = small / large;
    Outcome::new(
        (1.6..=2.6).contains(&ratio),
        format!("median ‖Σ̂ − Σ‖_∞: {small:.4} → {large:.4}, ratio {ratio:.3}"),
    )
}

// ---------------------------------------------------------------- 6–8

fn sweep(
    n: usize,
    s: usize,
    m: &[usize],
    dist: Distribution,
    link: LinkFunction,
    base_seed: u64,
) -> SweepResult {
    let cfg = ExperimentConfig {
        n: vec![n],
        s: vec![s],
        m: m.to_vec(),
        distribution: dist,
        link,
        signal: SignalFamily::RandomAdmissible,
        trials: 20,
        base_seed,
        solver: SweepSolver::default(),
        output: OutputPaths::default(),
    };
    let result = run_sweep(&cfg).unwrap();
    for row in &result.rows {
        if let Some(f) = &row.failure {
            eprintln!("trial failure n={} m={} trial={}: {f}", row.n, row.m, row.trial);
        }
    }
    result
}

fn medians(result: &SweepResult) -> Vec<f64> {
    result.cell_errors().iter().map(|(_, e)| median(e)).collect()
}

fn all_trials_ok(result: &SweepResult) -> bool {
    result.rows.iter().all(|r| r.summary.is_some())
}

fn gaussian_decay(solved: &mut Vec<SweepResult>) -> Outcome {
    let coarse = sweep(64, 4, &[250, 1000, 4000], Distribution::Gaussian, LinkFunction::Quadratic, 61);
    let fine = sweep(64, 4, &[500, 2000, 8000, 32000], Distribution::Gaussian, LinkFunction::Quadratic, 62);
    let mc = medians(&coarse);
    let mf = medians(&fine);
    let decreasing = mc.windows(2).all(|w| w[1] < w[0]);
    let ms: Vec<f64> = [500.0, 2000.0, 8000.0, 32000.0].to_vec();
    let slope = fit_log_log(&ms, &mf).map(|(b, _)| b).unwrap_or(f64::NAN);
    let pass = decreasing && (-0.6..=-0.15).contains(&slope) && all_trials_ok(&coarse) && all_trials_ok(&fine);
    let detail = format!(
        "medians {:.4?} (m = 250, 1000, 4000); slope {slope:.3} from medians {:.4?}",
        mc, mf
    );
    solved.push(coarse);
    solved.push(fine);
    Outcome::new(pass, detail)
}

fn rademacher_decay(solved: &mut Vec<SweepResult>) -> Outcome {
    let r = sweep(32, 4, &[500, 8000], Distribution::Rademacher, LinkFunction::Quadratic, 71);
    let m = medians(&r);
    let pass = m[1] < 0.6 * m[0] && all_trials_ok(&r);
    let detail = format!("median {:.4} at m=500, {:.4} at m=8000 (ratio {:.3})", m[0], m[1], m[1] / m[0]);
    solved.push(r);
    Outcome::new(pass, detail)
}

fn misspecified_links(solved: &mut Vec<SweepResult>) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (k, link) in [LinkFunction::AbsValue, LinkFunction::one_bit()].into_iter().enumerate() {
        let tag = link.tag();
        let r = sweep(32, 3, &[1000, 16000], Distribution::Gaussian, link, 81 + k as u64);
        let m = medians(&r);
        pass &= m[1] <= m[0] && all_trials_ok(&r);
        notes.push(format!("{tag}: {:.4} → {:.4}", m[0], m[1]));
        solved.push(r);
    }
    Outcome::new(pass, notes.join("; "))
}

// ---------------------------------------------------------------- 9

fn algorithm_equivalence() -> Outcome {
    let mut rng = stream_rng(909, 0);
    let mut worst = 0.0f64;
    for k in 0..20u64 {
        let (sigma, s) = if k % 2 == 0 {
            let s = rng.random_range(1..=3);
            let x = make_signal(&SignalSpec { dim: 8, kind: SignalKind::RandomAdmissible { sparsity: s } }, k).unwrap();
            let data = generate(&x, &Distribution::Gaussian, &LinkFunction::Quadratic, 300, 900 + k).unwrap();
            (reweighted_covariance(&data), s as f64)
        } else {
            (random_symmetric(&mut rng, 8, 1.0), rng.random_range(1.0..4.0))
        };
        let cfg = SdpConfig::new(s);
        let admm = solve_sparse_pca(&sigma, &cfg).unwrap();
        let oracle = SparseSpectrahedron::new(s).unwrap();
        let pg = solve_k_pca(&sigma, &oracle, &cfg).unwrap();
        worst = worst.max(admm.x_hat_matrix.frobenius_distance(&pg.x_hat_matrix));
    }
    Outcome::new(worst <= 5e-4, format!("worst ‖X̂_ADMM − X̂_PG‖_F = {worst:.2e} over 20 instances"))
}

// ---------------------------------------------------------------- 10

fn davis_kahan(solved: &[SweepResult]) -> Outcome {
    let mut count = 0;
    let mut worst = f64::MIN;
    let mut violations = 0;
    for r in solved {
        for row in &r.rows {
            if let Some(t) = &row.summary {
                let excess = t.error_up_to_sign.powi(2) - 2.0 * t.frobenius_error.powi(2);
                worst = worst.max(excess);
                if excess > 1e-9 {
                    violations += 1;
                }
                count += 1;
            }
        }
    }
    Outcome::new(
        violations == 0 && count > 0,
        format!("{count} instances, {violations} violations, max err² − 2‖ΔX‖_F² = {worst:.2e}"),
    )
}

// ---------------------------------------------------------------- 11

fn gaussian_width() -> Outcome {
    let cfg = SdpConfig::new(3.0);
    let p = SymMatrix::from_diag(&[1.0, 0.0, 0.0]);
    let q = SymMatrix::from_diag(&[0.0, 1.0, 0.0]);
    let single = estimate_gaussian_width(&Singleton(p.clone()), &p, 1000, 11, &cfg).unwrap();
    let seg = estimate_gaussian_width(&Segment::new(p.clone(), q.clone()).unwrap(), &p, 100_000, 12, &cfg).unwrap();

    // With X₀ = P the supremum is max(0, ⟨G, Q − P⟩) and ⟨G, Q − P⟩ ~ N(0, ‖Q − P‖_F²),
    // so the width is ‖Q − P‖_F/√(2π).
    let target = q.frobenius_distance(&p) / (2.0 * PI).sqrt();
    // Direct simulation of the same expectation, without the solver.
    let mut rng = stream_rng(1111, 0);
    let direct: Vec<f64> = (0..100_000)
        .map(|_| {
            let g = random_symmetric_gaussian(&mut rng, 3);
            (&q - &p).dot(&g).max(0.0)
        })
        .collect();
    let k = direct.len() as f64;
    let d_mean = direct.iter().sum::<f64>() / k;
    let d_se = (direct.iter().map(|v| (v - d_mean).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt();

    let pass = single.mean == 0.0
        && (seg.mean - target).abs() <= 3.0 * seg.stderr
        && (seg.mean - d_mean).abs() <= 3.0 * (seg.stderr.powi(2) + d_se.powi(2)).sqrt();
    Outcome::new(
        pass,
        format!(
            "singleton {}; segment {:.4} ± {:.4} vs ‖Q−P‖_F/√(2π) = {target:.4}, direct simulation {d_mean:.4} ± {d_se:.4}",
            single.mean, seg.mean, seg.stderr
        ),
    )
}

fn main() -> ExitCode {
    let mut solved = Vec::new();
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut Vec<SweepResult>) -> Outcome>)> = vec![
        ("projection correctness", Box::new(|_| projections())),
        ("SDP vs top eigenvector", Box::new(|_| sdp_vs_eigenvector())),
        ("population-oracle exactness", Box::new(|_| population_oracle())),
        ("moment oracles", Box::new(|_| moment_oracles())),
        ("concentration direction", Box::new(|_| concentration())),
        ("Gaussian error decay", Box::new(gaussian_decay)),
        ("Rademacher error decay", Box::new(rademacher_decay)),
        ("misspecified links", Box::new(misspecified_links)),
        ("k-PCA vs sparse PCA", Box::new(|_| algorithm_equivalence())),
        ("Davis-Kahan bound", Box::new(|s: &mut Vec<SweepResult>| davis_kahan(s))),
        ("Gaussian width", Box::new(|_| gaussian_width())),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(k + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = run(&mut solved);
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!(
            "[{verdict}] {:>2}. {name} ({:.1}s): {}",
            k + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
