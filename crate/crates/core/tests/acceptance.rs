//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p genhilbert-core --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use genhilbert::dirichlet::{v_map, AlphaRange, CoeffSeq, SpaceParams};
use genhilbert::measure::{moment_decay_exponent, MeasureSpec};
use genhilbert::operator::{
    boundedness_experiment, build_conjugated, build_raw, compactness_experiment, doubling_dims,
    hankel_apply, kernel_constant, kernel_inequality_test, lower_bound_chain, op_norm,
    schur_constant, BoundednessOptions, BoundednessReport, BoundednessVerdict, CompactnessOptions,
    CompactnessVerdict, LinearMap, PowerOptions,
};
use genhilbert::specfun::{gamma_ratio, log_gamma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn reference() -> SpaceParams {
    SpaceParams::new(1.0, 2.0, 2.0).unwrap()
}

fn closed_above(a: f64, b: f64, g: f64) -> SpaceParams {
    SpaceParams::with_range(a, b, g, AlphaRange::ClosedAbove).unwrap()
}

fn c1_gamma_ratio_asymptotic() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for g in [1.0, 1.5, 2.0, 3.0] {
        let gamma_g = log_gamma(g).unwrap().exp();
        for i in 0..=60 {
            let n = (1e5 * 10f64.powf(i as f64 / 60.0)).round() as u64;
            let r = gamma_ratio(n, g).unwrap() * gamma_g / (n as f64 + 1.0).powf(g - 1.0);
            worst = worst.max((r - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-3 && elapsed < Duration::from_secs(1),
        format!("max |ratio·Γ(γ)/(n+1)^(γ-1) - 1| = {worst:.3e} (< 1e-3), {elapsed:.2?} (< 1 s)"),
    )
}

const TRIPLES: [(f64, f64, f64); 5] = [
    (2.0, 2.0, 2.0),
    (1.0, 2.0, 2.0),
    (1.0, 3.0, 2.0),
    (0.5, 2.5, 3.0),
    (1.5, 3.5, 2.5),
];

fn c2_kernel_inequality() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (a, b, g) in TRIPLES {
        let r = kernel_inequality_test(&closed_above(a, b, g), 200, 512, 42).unwrap();
        worst = worst.max(r.max_ratio);
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1.0 + 1e-9 && elapsed < Duration::from_secs(30),
        format!("max ratio over 5 triples x 200 trials = {worst:.6} (<= 1 + 1e-9), {elapsed:.2?} (< 30 s)"),
    )
}

fn c3_schur_cross_check() -> Outcome {
    let exact = [Some(1.0), Some(2.0), Some(PI), None, None];
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for ((a, b, g), want) in TRIPLES.into_iter().zip(exact) {
        let p = closed_above(a, b, g);
        let k = kernel_constant(&p, 20).unwrap();
        worst = worst.max(k.max_relative_error());
        if let Some(v) = want {
            let schur = schur_constant(&p).unwrap();
            exact_ok &= ((schur - v) / v).abs() < 1e-12 && ((k.x_integral - v) / v).abs() < 1e-6;
        }
    }
    outcome(
        worst < 1e-6 && exact_ok,
        format!("max relative quadrature error vs B(γ-β/2, α/2) = {worst:.2e} (< 1e-6); exact values 1, 2, π reproduced: {exact_ok}"),
    )
}

fn boundedness_runs() -> Vec<(f64, BoundednessReport, Duration)> {
    let opts = BoundednessOptions {
        dims: doubling_dims(64, 4096),
        ..Default::default()
    };
    [1.5, 2.0, 1.0]
        .into_iter()
        .map(|c| {
            let start = Instant::now();
            let r = boundedness_experiment(&MeasureSpec::power_density(c), &reference(), &opts).unwrap();
            (c, r, start.elapsed())
        })
        .collect()
}

fn c4_boundedness(runs: &[(f64, BoundednessReport, Duration)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut total = Duration::ZERO;
    for (c, r, t) in runs {
        let want = if *c < 1.5 {
            BoundednessVerdict::Unbounded
        } else {
            BoundednessVerdict::Bounded
        };
        pass &= r.verdict == want;
        total += *t;
        let last = r.growth.last().unwrap().per_doubling;
        parts.push(format!("c={c}: {:?} (last growth {:.2}%/doubling)", r.verdict, 100.0 * last));
    }
    pass &= total < Duration::from_secs(300);
    outcome(pass, format!("{}; {total:.1?} (< 5 min)", parts.join(", ")))
}

fn c5_upper_bound(runs: &[(f64, BoundednessReport, Duration)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, r, _) in runs.iter().filter(|(_, r, _)| r.verdict == BoundednessVerdict::Bounded) {
        let ok = r.largest_norm() <= 1.05 * r.upper_bound_proxy;
        pass &= ok;
        parts.push(format!(
            "c={c}: ‖S_4096‖ = {:.4} vs 1.05 × {:.4} × {:.4}",
            r.largest_norm(),
            r.schur_constant,
            r.moment_sup
        ));
    }
    pass &= !parts.is_empty();
    outcome(pass, parts.join(", "))
}

fn c6_lower_bound_chain() -> Outcome {
    let p = reference();
    let rec = lower_bound_chain(&MeasureSpec::power_density(p.s), &p, &[0.9, 0.99, 0.999]).unwrap();
    let ratios: Vec<f64> = rec.iter().map(|r| r.ratio).collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        lo > 0.0 && hi / lo <= 4.0,
        format!("ratios {ratios:.4?}, spread {:.4} (<= 4)", hi / lo),
    )
}

fn c7_compactness() -> Outcome {
    let p = reference();
    let dim = 2048;
    let start = Instant::now();
    let opts = CompactnessOptions::new(dim);
    let vanishing = compactness_experiment(&MeasureSpec::power_density(p.s + 0.5), &p, &opts).unwrap();
    let boundary = compactness_experiment(&MeasureSpec::power_density(p.s), &p, &opts).unwrap();
    let elapsed = start.elapsed();
    let below_by_quarter = vanishing
        .relative_tails()
        .iter()
        .any(|&(m, r)| m <= dim / 4 && r < 0.1);
    let pass = vanishing.verdict == CompactnessVerdict::CompactConsistent
        && below_by_quarter
        && boundary.verdict == CompactnessVerdict::NotCompactConsistent
        && boundary.relative_tails().iter().all(|&(_, r)| r > 0.5)
        && elapsed < Duration::from_secs(300);
    let fmt = |v: &[(usize, f64)]| {
        v.iter()
            .map(|(m, r)| format!("{m}:{r:.3}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    outcome(
        pass,
        format!(
            "c=s+0.5 {:?} [{}]; c=s {:?} [{}]; {elapsed:.1?}",
            vanishing.verdict,
            fmt(&vanishing.relative_tails()),
            boundary.verdict,
            fmt(&boundary.relative_tails())
        ),
    )
}

fn c8_hilbert_matrix() -> Outcome {
    let op = build_raw(&MeasureSpec::lebesgue(), 1.0, 4096).unwrap();
    let e = op_norm(&op.entries, PowerOptions::default());
    outcome(
        e.converged && e.value >= PI - 0.15 && e.value <= PI,
        format!(
            "‖Hilbert_4096‖ = {:.6} (converged {}, {} iterations), required [{:.4}, {:.4}]",
            e.value,
            e.converged,
            e.iterations,
            PI - 0.15,
            PI
        ),
    )
}

fn c9_moment_decay() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for c in [1.0, 1.5, 2.0] {
        let est = moment_decay_exponent(&MeasureSpec::power_density(c), 100, 100_000).unwrap();
        pass &= (est.slope + c).abs() <= 0.05;
        parts.push(format!("c={c}: slope {:.4}", est.slope));
    }
    outcome(pass, parts.join(", "))
}

fn c10_conjugation_identity() -> Outcome {
    let p = reference();
    let spec = MeasureSpec::power_density(p.s);
    let n = 64;
    let s = build_conjugated(&spec, &p, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f = CoeffSeq::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let lhs = v_map(&hankel_apply(&spec, p.gamma, &f, n).unwrap(), p.beta);
        let rhs = s.entries.apply(v_map(&f, p.alpha).coeffs());
        for (a, b) in lhs.coeffs().iter().zip(&rhs) {
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst < 1e-10, format!("max |V_β H f - S V_α f| = {worst:.2e} (< 1e-10)"))
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("C1 gamma-ratio asymptotic", c1_gamma_ratio_asymptotic()),
        ("C2 kernel l2 inequality", c2_kernel_inequality()),
        ("C3 Schur constant cross-check", c3_schur_cross_check()),
    ];
    let runs = boundedness_runs();
    results.push(("C4 boundedness dichotomy", c4_boundedness(&runs)));
    results.push(("C5 upper-bound consistency", c5_upper_bound(&runs)));
    drop(runs);
    results.push(("C6 lower-bound chain", c6_lower_bound_chain()));
    results.push(("C7 compactness dichotomy", c7_compactness()));
    results.push(("C8 Hilbert matrix anchor", c8_hilbert_matrix()));
    results.push(("C9 moment decay regression", c9_moment_decay()));
    results.push(("C10 conjugation identity", c10_conjugation_identity()));

    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
