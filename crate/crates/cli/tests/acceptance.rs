//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.
//! Exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use xyep::asymptotics::convergence_report;
use xyep::ed::exact_diagonalization;
use xyep::ep::{find_eps, trivial_points, verify_ep, Ring, VerifyLevel};
use xyep::fermion::{assemble_spectrum, quasi_energies_matrix};
use xyep::matching::spectra_match;
use xyep::pt::{on_axis_eps, pt_spectrum_check, SpectrumRoute, DEFAULT_AXIS_TOL};
use xyep::quasimomentum::crosscheck_routes;
use xyep::topology::{winding_number, PhaseStatus, BOUNDARY_BAND};
use xyep::{ModelParams, C64};
use xyep_cli::dto::EpsResult;
use xyep_cli::output::Envelope;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass_if(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn xyep_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_xyep"))
        .args(args)
        .env_remove("XYEP_THREADS")
        .output()
        .expect("run xyep");
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// Every element of `want` has a distinct partner in `got` within `tol`.
fn same_set(got: &[C64], want: &[C64], tol: f64) -> bool {
    if got.len() != want.len() {
        return false;
    }
    let mut used = vec![false; got.len()];
    want.iter().all(|w| {
        match (0..got.len()).find(|&i| !used[i] && (got[i] - w).norm() <= tol) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        }
    })
}

fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn annulus_sample(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn golden_values() -> Outcome {
    let start = Instant::now();
    let (code, stdout) = xyep_bin(&["eps", "--L", "4"]);
    let elapsed = start.elapsed();
    if code != 0 {
        return pass_if(false, format!("exit code {code}"));
    }
    let env: Envelope<Value, EpsResult> = match serde_json::from_slice(&stdout) {
        Ok(e) => e,
        Err(e) => return pass_if(false, format!("unparsable output: {e}")),
    };
    let got: Vec<C64> = env.result.records.iter().map(|r| r.lambda.into()).collect();
    let want = [0.5, -0.5, 2.0, -2.0].map(|v| C64::new(0.0, v));
    let worst = got
        .iter()
        .map(|g| want.iter().map(|w| (g - w).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    pass_if(
        same_set(&got, &want, 1e-8) && elapsed < Duration::from_secs(1),
        format!("{} records, worst distance {worst:.1e}, {elapsed:.2?}", got.len()),
    )
}

fn census() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for size in (4..=16).step_by(2) {
        let recs = match find_eps(size) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("L={size}: {e}"));
                continue;
            }
        };
        let lambdas: Vec<C64> = recs.iter().map(|r| r.lambda_ep).collect();
        let inner = recs.iter().filter(|r| r.ring == Ring::Inner && r.lambda_ep.norm() < 1.0).count();
        let outer = recs.iter().filter(|r| r.ring == Ring::Outer && r.lambda_ep.norm() > 1.0).count();
        let inv: Vec<C64> = lambdas.iter().map(|l| l.inv()).collect();
        let conj: Vec<C64> = lambdas.iter().map(|l| l.conj()).collect();
        if recs.len() != 2 * size - 4 || inner != size - 2 || outer != size - 2 {
            problems.push(format!("L={size}: {} records, {inner} inner, {outer} outer", recs.len()));
        }
        if !same_set(&lambdas, &inv, 1e-8) || !same_set(&lambdas, &conj, 1e-8) {
            problems.push(format!("L={size}: not closed under 1/λ or conjugation"));
        }
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(30);
    pass_if(ok, format!("L=4..16, {elapsed:.2?} {}", problems.join("; ")))
}

fn golden_ep_character() -> Outcome {
    let lambda = C64::new(0.0, 2.0);
    let p = ModelParams::new(4, lambda).unwrap();
    let ed = exact_diagonalization(&p).unwrap();
    let s15 = 15f64.sqrt();
    let contains = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, s15), C64::new(0.0, -s15)]
        .iter()
        .all(|w| ed.energies().iter().any(|e| (e - w).norm() < 1e-8));
    let v = verify_ep(lambda, 4, 1e-6, VerifyLevel::Hamiltonian).unwrap();
    let h = v.hamiltonian.as_ref().unwrap();
    pass_if(
        contains && h.lr_overlap < 1e-6,
        format!(
            "±1, ±√15 i present: {contains}; overlap {:.1e}; {} coalescing pairs",
            h.lr_overlap, h.coalescing_pairs
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for size in [2usize, 4, 6, 8] {
        for _ in 0..20 {
            let p = ModelParams::new(size, disk_sample(&mut rng, 3.0)).unwrap();
            let ff = assemble_spectrum(&quasi_energies_matrix(&p).unwrap()).unwrap();
            let ed = exact_diagonalization(&p).unwrap();
            let r = spectra_match(&ff, &ed, 1e-8).unwrap();
            worst = worst.max(r.worst_distance);
            failures += usize::from(!r.matched);
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("80 cases, {failures} failed, worst {worst:.1e}, {elapsed:.2?}"),
    )
}

fn route_crosscheck() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for size in [4usize, 6, 8] {
        for _ in 0..10 {
            let lambda = disk_sample(&mut rng, 3.0);
            match crosscheck_routes(&ModelParams::new(size, lambda).unwrap(), 1e-8) {
                Ok(r) => {
                    worst = worst.max(r.distance);
                    if !r.passed {
                        failures.push(format!("L={size} λ={lambda:.3}"));
                    }
                }
                Err(e) => failures.push(format!("L={size} λ={lambda:.3}: {e}")),
            }
        }
    }
    pass_if(
        failures.is_empty(),
        format!("30 cases, worst {worst:.1e} {}", failures.join("; ")),
    )
}

fn trivial_points_not_eps() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for size in [4usize, 6] {
        for t in trivial_points(size).unwrap() {
            ok &= t.k_degenerate(1e-12) && t.lr_overlap > 0.1;
            lines.push(format!("λ={:+.4} overlap {:.3}", t.lambda.re, t.lr_overlap));
        }
    }
    pass_if(ok, format!("k-degenerate at all 8 points; {}", lines.join(", ")))
}

fn ring_convergence() -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = [8usize, 16, 32].iter().map(|&l| convergence_report(l).unwrap()).collect();
    let monotone = reports.windows(2).all(|w| {
        w[1].inner_max_dev < w[0].inner_max_dev && w[1].outer_max_dev < w[0].outer_max_dev
    });
    let two_sided = reports.iter().all(|r| r.two_sided);
    let devs: Vec<String> = reports
        .iter()
        .map(|r| format!("L={} {:.4}/{:.4}", r.size, r.inner_max_dev, r.outer_max_dev))
        .collect();
    let elapsed = start.elapsed();
    pass_if(
        monotone && two_sided && elapsed < Duration::from_secs(300),
        format!("inner/outer {}, {elapsed:.2?}", devs.join(", ")),
    )
}

fn pt_axis() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for size in [4usize, 6, 8] {
        for li in [0.3, 0.7, 1.5, 2.5] {
            for route in [SpectrumRoute::QuasiEnergy, SpectrumRoute::ExactDiag] {
                let r = pt_spectrum_check(size, li, 1e-9, route).unwrap();
                worst = worst.max(r.conjugation_defect());
                ok &= r.passed();
            }
        }
    }
    let counts: Vec<(usize, usize)> = [4usize, 8, 12, 6, 10]
        .iter()
        .map(|&l| (l, on_axis_eps(l, DEFAULT_AXIS_TOL).unwrap().len()))
        .collect();
    ok &= counts.iter().all(|&(l, n)| n == if l % 4 == 0 { 4 } else { 0 });
    let listed: Vec<String> = counts.iter().map(|(l, n)| format!("L={l}:{n}")).collect();
    pass_if(ok, format!("worst defect {worst:.1e}; on-axis {}", listed.join(" ")))
}

fn phase_diagram() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..200 {
        let inside = winding_number(annulus_sample(&mut rng, 0.1, 0.95), 256).unwrap();
        let outside = winding_number(annulus_sample(&mut rng, 1.05, 3.0), 256).unwrap();
        bad += usize::from(inside.winding != Some(1)) + usize::from(outside.winding != Some(-1));
    }
    // boundary flags appear inside the band and nowhere else
    let mut flag_errors = 0;
    for i in 0..400 {
        let radius = 1.0 - 4e-3 + 8e-3 * i as f64 / 399.0;
        let s = winding_number(C64::from_polar(radius, 0.37 * i as f64), 256).unwrap();
        let in_band = (radius - 1.0).abs() <= BOUNDARY_BAND;
        flag_errors += usize::from((s.status == PhaseStatus::Boundary) != in_band);
    }
    let elapsed = start.elapsed();
    pass_if(
        bad == 0 && flag_errors == 0 && elapsed < Duration::from_secs(60),
        format!("{bad} wrong windings of 400, {flag_errors} misplaced boundary flags, {elapsed:.2?}"),
    )
}

fn determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["quasi", "--L", "6", "--lambda", "0.3,0.4"],
        &["quasi", "--L", "6", "--lambda", "0.3,0.4", "--route", "momentum", "--format", "csv"],
        &["spectrum", "--L", "4", "--lambda", "0,2", "--compare-ed"],
        &["spectrum", "--L", "4", "--lambda", "0,2", "--format", "svg"],
        &["eps", "--L", "8"],
        &["eps", "--L", "8", "--format", "csv"],
        &["rings", "--L", "8,16"],
        &["gap", "--L", "4", "--res", "21"],
        &["gap", "--L", "4", "--res", "21", "--format", "svg"],
        &["pt", "--L", "6", "--sweep", "0.1:3:8"],
        &["pt", "--L", "4", "--sweep", "0.1:3:8", "--ed", "--format", "csv"],
        &["phase", "--res", "21"],
        &["phase", "--res", "21", "--format", "svg"],
        &["verify", "--L", "6", "--hamiltonian"],
        &["verify", "--L", "4", "--lambda", "0,1.9", "--format", "csv"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let (c1, a) = xyep_bin(args);
        let (c2, b) = xyep_bin(args);
        let mut threaded = args.to_vec();
        threaded.extend(["--threads", "1"]);
        let (c3, c) = xyep_bin(&threaded);
        if c1 != 0 || c2 != 0 || c3 != 0 || a != b || a != c || a.is_empty() {
            differing.push(args.join(" "));
        }
    }
    pass_if(
        differing.is_empty(),
        format!("{} configurations, 3 runs each {}", runs.len(), differing.join("; ")),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("L=4 golden EP values", golden_values),
        ("EP census L=4..16", census),
        ("EP character at λ=2i, L=4", golden_ep_character),
        ("free fermion vs exact diagonalization", oracle_equivalence),
        ("quasi-momentum vs matrix route", route_crosscheck),
        ("trivial points are not EPs", trivial_points_not_eps),
        ("ring convergence L=8,16,32", ring_convergence),
        ("PT axis", pt_axis),
        ("phase diagram", phase_diagram),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
