//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use mufkit::constructions::{
    circulant_from_polar, mu_to_identity_and_fourier, mub_prime, qubit_family_pair, real_fiducial_family_d3,
    unbiased_partner, wh_orbit, QubitFamilyParams,
};
use mufkit::frames::Frame;
use mufkit::muf::{certify_muf_system, cross_overlaps, eigen_inner_products_sqr, eigen_line_overlaps};
use mufkit::sic::{
    companion_circulants, extract_params, fiducial_from_params, free_parameter_count, is_fiducial, qubit_fiducial,
    real_obstruction_value, search_fiducial, SearchConfig, SearchResult,
};
use mufkit::uncertainty::{
    autocorrelation_check, basis_probabilities, clifford_conjugator, conjugation_residual, mub_balanced_check,
    uncertainty_certificate, zauner_eigenvectors, zauner_operator, zauner_triplet,
};
use mufkit::{ComplexVector, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn tol(eps: f64) -> Tolerance {
    Tolerance::new(eps).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn frame(vs: Vec<ComplexVector>) -> Frame {
    Frame::new(vs, "", Tolerance::default()).unwrap()
}

fn mub_construction() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2, 3, 5, 7] {
        let r = certify_muf_system(&mub_prime(d).map_err(|e| e.to_string())?, tol(1e-10)).map_err(|e| e.to_string())?;
        ensure(r.certified && (r.overlap - 1.0 / d as f64).abs() <= 1e-10, || {
            format!("d={d}: overlap {} deviation {:e}", r.overlap, r.max_deviation)
        })?;
        worst = worst.max(r.max_deviation);
    }
    Ok(format!("d in {{2,3,5,7}}, max deviation {worst:.2e}"))
}

fn qubit_family() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    while draws < 1000 {
        let theta = rng.random_range(0.05..1.5);
        let alpha = rng.random_range(0.1..3.0);
        let beta = rng.random_range(0.1..3.0);
        let t = -1.0 / (f64::sin(alpha) * f64::sin(beta) * f64::tan(2.0 * theta));
        let eta = t.atan().rem_euclid(PI) / 2.0;
        let p = QubitFamilyParams { theta, eta, alpha, beta };
        if !p.is_generic() || (2.0 * theta).cos().abs() < 1e-3 {
            continue;
        }
        draws += 1;
        let (m1, m2, valid, c) = qubit_family_pair(&p);
        ensure(valid, || format!("draw {p:?} rejected"))?;
        let r = certify_muf_system(&[frame(m1.columns()), frame(m2.columns())], tol(1e-9)).unwrap();
        ensure(r.certified, || format!("draw {p:?} not unbiased"))?;
        worst = worst.max((r.overlap - c).abs());
    }
    ensure(worst <= 1e-9, || format!("overlap formula error {worst:e}"))?;

    let mub = QubitFamilyParams {
        theta: PI / 8.0,
        eta: 3.0 * PI / 8.0,
        alpha: PI / 2.0,
        beta: PI / 2.0,
    };
    let gap = (1.0 / 3f64.sqrt()).acos();
    let (theta, eta): (f64, f64) = (0.2, 0.2 - gap);
    let alpha = (-1.0 / ((2.0 * theta).tan() * (2.0 * eta).tan())).sqrt().asin();
    let sic = QubitFamilyParams {
        theta,
        eta,
        alpha,
        beta: alpha,
    };
    for (p, expected) in [(mub, 0.5), (sic, 1.0 / 3.0)] {
        let (m1, m2, valid, c) = qubit_family_pair(&p);
        let f = (frame(m1.columns()), frame(m2.columns()));
        let measured: Vec<f64> = cross_overlaps(&f.0, &f.1).unwrap().into_iter().flatten().collect();
        ensure(
            valid && (c - expected).abs() < 1e-9 && measured.iter().all(|v| (v - expected).abs() < 1e-9),
            || format!("marked point {p:?}: c = {c}"),
        )?;
    }
    Ok(format!("1000 draws, max |c_measured - c_formula| {worst:.2e}; MUB and SIC points reproduced"))
}

fn d3_family() -> Outcome {
    let lo = FRAC_1_SQRT_2;
    let hi = (2.0f64 / 3.0).sqrt();
    let mut worst: f64 = 0.0;
    for i in 1..=5 {
        let r0 = lo + (hi - lo) * i as f64 / 6.0;
        let orbit = wh_orbit(&real_fiducial_family_d3(r0).unwrap(), Tolerance::default()).unwrap();
        let vs = orbit.vectors();
        ensure(vs.len() == 9, || "orbit size".into())?;
        let mut pairs = 0;
        for a in 0..9 {
            for b in (a + 1)..9 {
                worst = worst.max((vs[a].overlap(&vs[b]) - 0.25).abs());
                pairs += 1;
            }
        }
        ensure(pairs == 36, || "pair count".into())?;
    }
    ensure(worst <= 1e-10, || format!("max overlap error {worst:e}"))?;
    Ok(format!("5 values of r0, 36 pairs each, max error {worst:.2e}"))
}

fn even_obstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for d in [2, 4, 6, 8, 10, 12] {
        for _ in 0..1000 {
            let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let phi = ComplexVector::from_real(&v).unwrap().normalized().unwrap();
            worst = worst.max(real_obstruction_value(&phi, Tolerance::default()).unwrap());
        }
    }
    ensure(worst <= 1e-20, || format!("max value {worst:e}"))?;
    Ok(format!("6000 real vectors, max |<phi|X^(d/2)Z|phi>|^2 = {worst:.2e}"))
}

struct Found {
    dim: usize,
    result: SearchResult,
}

fn round_trip(found: &[Found]) -> Outcome {
    let mut states = vec![qubit_fiducial(), real_fiducial_family_d3(0.74).unwrap(), real_fiducial_family_d3(0.8).unwrap()];
    states.extend(found.iter().filter(|f| f.dim <= 3).map(|f| f.result.fiducial.clone()));
    let t = tol(1e-9);
    let mut worst: f64 = 0.0;
    for phi in &states {
        let d = phi.dim();
        let p = extract_params(phi, t).map_err(|e| e.to_string())?;
        ensure(p.free_count() == free_parameter_count(d) && p.free_count() == (d - 1) / 2 + d - 1, || {
            format!("d={d}: {} free parameters", p.free_count())
        })?;
        let back = fiducial_from_params(&p, t).map_err(|e| e.to_string())?;
        let r = is_fiducial(&back, t).unwrap();
        ensure(r.is_fiducial, || format!("d={d}: rebuilt error {:e}", r.max_overlap_error))?;
        worst = worst.max(r.max_overlap_error);
    }
    Ok(format!("{} fiducials in d in {{2,3}}, max rebuilt error {worst:.2e}", states.len()))
}

fn search(found: &mut Vec<Found>) -> Outcome {
    let mut summary = Vec::new();
    for d in [2, 3, 4, 5] {
        let mut config = SearchConfig::new(d, 1);
        config.restarts = 200;
        let start = Instant::now();
        let r = search_fiducial(&config).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(60), || format!("d={d} took {elapsed:?}"))?;
        ensure(r.residual < 1e-9, || format!("d={d}: residual {:e}", r.residual))?;
        let again = search_fiducial(&config).map_err(|e| e.to_string())?;
        ensure(again == r, || format!("d={d}: rerun differs"))?;
        summary.push(format!("d={d} {:.1e} in {:.2}s", r.residual, elapsed.as_secs_f64()));
        found.push(Found { dim: d, result: r });
    }
    Ok(summary.join(", "))
}

fn saturation(found: &[Found]) -> Outcome {
    let mut summary = Vec::new();
    for f in found.iter().filter(|f| [2, 3, 5].contains(&f.dim)) {
        let d = f.dim;
        let phi = &f.result.fiducial;
        let mubs = mub_prime(d).unwrap();
        let r = uncertainty_certificate(phi, &mubs, tol(1e-8)).map_err(|e| e.to_string())?;
        ensure(r.saturated, || format!("d={d}: sum {} bound {}", r.entropy_sum, r.bound))?;
        for b in &mubs[..2] {
            let c = autocorrelation_check(phi, b, tol(1e-9)).unwrap();
            ensure(c.pass, || format!("d={d} {}: deviation {:e}", b.label(), c.max_deviation))?;
        }
        summary.push(format!("d={d} |sum-bound| {:.1e}", (r.entropy_sum - r.bound).abs()));
    }
    ensure(summary.len() == 3, || "missing search results".into())?;
    Ok(summary.join(", "))
}

fn eigen_lines() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut scaling = String::new();
    for r0 in [0.72, 0.76, 0.8] {
        let ms = companion_circulants(&real_fiducial_family_d3(r0).unwrap()).unwrap();
        let lines = eigen_line_overlaps(&ms);
        let raw = eigen_inner_products_sqr(&ms);
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    worst = worst.max((lines[j][k] - 0.25).abs());
                }
            }
        }
        let (c, d) = (0.25, 3.0);
        scaling = format!(
            "unnormalized |<l_j|l_k>|^2 = {:.6} vs c*d = {:.4}, c*d^2 = {:.4}",
            raw[0][1],
            c * d,
            c * d * d
        );
        ensure((raw[0][1] - c * d * d).abs() < 1e-9, || scaling.clone())?;
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("normalized overlap 1/4 within {worst:.2e}; {scaling} (scales as c*d^2)"))
}

fn partners() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for d in [2, 3, 4, 5] {
        let ws = mu_to_identity_and_fourier(d).unwrap();
        for _ in 0..200 {
            let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..1.8)).collect();
            let s = (d as f64 / raw.iter().map(|r| r * r).sum::<f64>()).sqrt();
            let moduli: Vec<f64> = raw.iter().map(|r| r * s).collect();
            let phases: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let m = circulant_from_polar(&moduli, &phases).unwrap();
            let w = &ws[rng.random_range(0..ws.len())];
            let (p, spec) = unbiased_partner(&m, w, Tolerance::default()).map_err(|e| e.to_string())?;
            let expected = 1.0 / moduli.iter().map(|r| r.powi(-2)).sum::<f64>();
            let r = certify_muf_system(&[frame(m.columns()), frame(p.columns())], tol(1e-9)).unwrap();
            ensure(r.certified && r.bounds_ok == Some(true), || format!("d={d}: {r:?}"))?;
            ensure((spec.derived_overlap - expected).abs() < 1e-12, || "derived overlap".into())?;
            worst = worst.max((r.overlap - expected).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("overlap error {worst:e}"))?;
    Ok(format!("800 pairs certified, max |c - 1/sum r^-2| {worst:.2e}, frame bounds consistent"))
}

fn zauner() -> Outcome {
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    for d in 2..=9 {
        let z = zauner_operator(d).unwrap();
        ensure(z.is_unitary(tol(1e-10)), || format!("d={d}: not unitary"))?;
        let triplet = zauner_triplet(d, Tolerance::default()).unwrap();
        let r = certify_muf_system(&triplet, tol(1e-9)).unwrap();
        ensure(r.certified && (r.overlap - 1.0 / d as f64).abs() < 1e-9, || {
            format!("d={d}: triplet overlap {}", r.overlap)
        })?;
        for (_, v) in zauner_eigenvectors(d).unwrap() {
            let dists: Vec<Vec<f64>> = triplet
                .iter()
                .map(|b| sorted(basis_probabilities(&v, b, Tolerance::default()).unwrap()))
                .collect();
            for p in &dists[1..] {
                let diff = p.iter().zip(&dists[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                ensure(diff <= 1e-9, || format!("d={d}: distributions differ by {diff:e}"))?;
            }
        }
    }
    let mubs = mub_prime(2).unwrap();
    for (_, v) in zauner_eigenvectors(2).unwrap() {
        ensure(mub_balanced_check(&v, &mubs, tol(1e-9)).unwrap(), || "d=2 eigenvector not MUB-balanced".into())?;
    }
    Ok("d=2..9 unitary, triplet unbiased with overlap 1/d, eigenvector distributions identical; d=2 MUB-balanced".into())
}

fn clifford() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in [2, 3, 5, 7, 11] {
        for k in 1..d {
            let u = clifford_conjugator(d, k, tol(1e-9)).map_err(|e| format!("d={d} k={k}: {e}"))?;
            worst = worst.max(conjugation_residual(&u, d, k).unwrap());
            count += 1;
        }
    }
    ensure(worst <= 1e-9, || format!("residual {worst:e}"))?;
    Ok(format!("{count} conjugators, max residual {worst:.2e}"))
}

fn report(n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(l)) if elapsed >= l => Err(format!("took {:.3}s, limit {:?}", elapsed.as_secs_f64(), l)),
        (o, _) => o,
    };
    let (tag, detail) = match &outcome {
        Ok(m) => ("PASS", m),
        Err(m) => ("FAIL", m),
    };
    println!("criterion {n:>2} {tag} [{:.3}s] {name}: {detail}", elapsed.as_secs_f64());
    outcome.is_ok()
}

fn main() {
    let secs = Duration::from_secs;
    let mut found = Vec::new();
    let results = [
        report(1, "MUB construction", Some(secs(1)), mub_construction),
        report(2, "qubit family", Some(secs(5)), qubit_family),
        report(3, "d=3 real family", Some(secs(1)), d3_family),
        report(4, "even-dimension obstruction", Some(secs(5)), even_obstruction),
        // search runs before the criteria that consume its output
        report(6, "fiducial search", None, || search(&mut found)),
        report(5, "parameterization round trip", None, || round_trip(&found)),
        report(7, "uncertainty saturation", None, || saturation(&found)),
        report(8, "eigen-line correspondence", None, eigen_lines),
        report(9, "partner construction", None, partners),
        report(10, "Zauner certificates", None, zauner),
        report(11, "Clifford conjugation", None, clifford),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
