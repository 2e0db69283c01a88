//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs as a plain binary so the lines are always printed.

use std::time::Instant;

use arstat::run;
use arstat_core::algebra::verify_triple_relations_with_margin;
use arstat_core::coherent::{
    coherent_amplitudes, eigenstate_residuals, overlap, overlap_kernel, CoherentFamily,
    CoherentPoint, Truncation,
};
use arstat_core::fock::enumerate_basis;
use arstat_core::{Sector, SectorParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Every report produced by one pass over the suite, in order.
#[derive(Default)]
struct Suite {
    reports: Vec<String>,
    threads: usize,
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Suite {
    /// Runs the CLI with JSON output; returns the parsed report and exit code.
    fn cli(&mut self, args: &[String]) -> (i32, Value) {
        let mut full = vec![
            "arstat".to_string(),
            "--threads".into(),
            self.threads.to_string(),
        ];
        full.extend(args.iter().cloned());
        let out = run(&full);
        let report = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
        self.reports.push(format!(
            "{} => {}\n{}{}",
            args.join(" "),
            out.code,
            out.stdout,
            out.stderr
        ));
        (out.code, report)
    }
}

fn args(text: &str) -> Vec<String> {
    text.split_whitespace().map(String::from).collect()
}

fn max_residual(report: &Value) -> f64 {
    report["checks"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| c["residual"].as_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max)
        })
        .unwrap_or(f64::INFINITY)
}

fn criterion_1(s: &mut Suite) -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for r in 1..=3 {
        for k in 1..=6 {
            for cmd in ["verify-algebra", "verify-heisenberg"] {
                let (code, rep) = s.cli(&args(&format!(
                    "--sector fermionic --modes {r} --k {k} --tol 1e-10 {cmd}"
                )));
                ok &= code == 0;
                worst = worst.max(max_residual(&rep));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        pass: ok && secs < 10.0,
        detail: format!("max residual {worst:.3e}, {secs:.2} s"),
    }
}

fn criterion_2(s: &mut Suite) -> Verdict {
    let mut ok = true;
    let mut worst_masked: f64 = 0.0;
    let mut least_unmasked = f64::INFINITY;
    for r in 1..=2 {
        for k in 2..=4u32 {
            let (code, rep) = s.cli(&args(&format!(
                "--sector bosonic --modes {r} --k {k} --cutoff 8 --tol 1e-10 verify-algebra"
            )));
            ok &= code == 0;
            worst_masked = worst_masked.max(
                rep["checks"][0]["residual"]
                    .as_f64()
                    .unwrap_or(f64::INFINITY),
            );
            let params = SectorParams::unit_energies(r, Sector::Bosonic, k).unwrap();
            let basis = enumerate_basis(&params, 8).unwrap();
            let unmasked = verify_triple_relations_with_margin(&basis, 1e-10, 0).unwrap();
            ok &= !unmasked.pass;
            least_unmasked = least_unmasked.min(unmasked.residual);
        }
    }
    Verdict {
        pass: ok,
        detail: format!("masked max {worst_masked:.3e}, unmasked min {least_unmasked:.3e}"),
    }
}

fn criterion_3(_: &mut Suite) -> Verdict {
    let binomial = |n: u64, k: u64| (1..=k).fold(1u64, |acc, j| acc * (n + 1 - j) / j);
    let mut cases = 0;
    let mut ok = true;
    for r in 1..=4usize {
        for k in 1..=8u32 {
            let basis = enumerate_basis(
                &SectorParams::unit_energies(r, Sector::Fermionic, k).unwrap(),
                0,
            )
            .unwrap();
            ok &= basis.len() as u64 == binomial(u64::from(k) - 1 + r as u64, r as u64);
            cases += 1;
        }
    }
    Verdict {
        pass: ok,
        detail: format!("{cases} (r, k) pairs"),
    }
}

fn criterion_4(s: &mut Suite) -> Verdict {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for r in 1..=3 {
        for k in 1..=6 {
            let (code, rep) = s.cli(&args(&format!(
                "--modes {r} --k {k} --tol 1e-12 verify-bargmann --kind fermionic"
            )));
            ok &= code == 0;
            worst = worst.max(max_residual(&rep));
        }
        for k in 2..=4 {
            for kind in ["I", "II"] {
                let (code, rep) = s.cli(&args(&format!(
                    "--modes {r} --k {k} --cutoff 8 --tol 1e-12 verify-bargmann --kind {kind}"
                )));
                ok &= code == 0;
                worst = worst.max(max_residual(&rep));
            }
        }
    }
    Verdict {
        pass: ok,
        detail: format!("max residual {worst:.3e}"),
    }
}

fn random_coords(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<Complex64> {
    (0..r)
        .map(|_| {
            Complex64::from_polar(
                radius * rng.random::<f64>(),
                std::f64::consts::TAU * rng.random::<f64>(),
            )
        })
        .collect()
}

fn criterion_5(s: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut worst_cp: f64 = 0.0;
    for r in 1..=3usize {
        for k in 1..=8u32 {
            for _ in 0..20 {
                let z = random_coords(&mut rng, r, 2.0);
                let point: Vec<String> = z
                    .iter()
                    .map(|c| format!("{:e}{:+e}i", c.re, c.im))
                    .collect();
                let (code, rep) = s.cli(&args(&format!(
                    "--modes {r} --k {k} --tol 1e-12 coherent --family cpr --point {}",
                    point.join(",")
                )));
                ok &= code == 0;
                worst_cp =
                    worst_cp.max((rep["data"]["norm_check"].as_f64().unwrap_or(0.0) - 1.0).abs());
            }
        }
    }
    ok &= worst_cp < 1e-12;
    let mut worst_kp: f64 = 0.0;
    for r in 1..=2usize {
        for k in 2..=4u32 {
            let params = SectorParams::unit_energies(r, Sector::Bosonic, k).unwrap();
            for _ in 0..10 {
                let radius = (0.8 / r as f64).sqrt();
                let a = CoherentPoint::new(
                    CoherentFamily::KlauderPerelomov,
                    random_coords(&mut rng, r, radius),
                )
                .unwrap();
                let b = CoherentPoint::new(
                    CoherentFamily::KlauderPerelomov,
                    random_coords(&mut rng, r, radius),
                )
                .unwrap();
                let auto = Truncation::Auto { tail_tol: 1e-10 };
                let cutoff = coherent_amplitudes(&params, &a, auto)
                    .unwrap()
                    .cutoff()
                    .max(coherent_amplitudes(&params, &b, auto).unwrap().cutoff());
                let sa = coherent_amplitudes(&params, &a, Truncation::Fixed(cutoff)).unwrap();
                let sb = coherent_amplitudes(&params, &b, Truncation::Fixed(cutoff)).unwrap();
                // truncated sum of C_n^2 |z^n|^2 against (1 - |z|^2)^-k
                let norm_gap = (1.0 - sa.raw_norm_sq).abs();
                let overlap_gap =
                    (overlap(&sa, &sb).unwrap() - overlap_kernel(&params, &a, &b).unwrap()).norm();
                worst_kp = worst_kp.max(norm_gap).max(overlap_gap);
            }
        }
    }
    ok &= worst_kp < 1e-8;
    Verdict {
        pass: ok,
        detail: format!("CP^r norm error {worst_cp:.3e}, KP kernel error {worst_kp:.3e}"),
    }
}

fn criterion_6(s: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for r in 1..=2usize {
        for k in 2..=4u32 {
            let params = SectorParams::unit_energies(r, Sector::Bosonic, k).unwrap();
            for _ in 0..5 {
                let w: Vec<Complex64> = (0..r)
                    .map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .map(|c| if c.norm() > 1.0 { c / c.norm() } else { c } * 1.5)
                    .collect();
                let text: Vec<String> = w
                    .iter()
                    .map(|c| format!("{:e}{:+e}i", c.re, c.im))
                    .collect();
                let (code, rep) = s.cli(&args(&format!(
                    "--modes {r} --k {k} --tol 1e-10 verify-eigenstate --point {}",
                    text.join(",")
                )));
                ok &= code == 0;
                worst = worst.max(max_residual(&rep));
                let point = CoherentPoint::new(CoherentFamily::GazeauKlauder, w).unwrap();
                let boundary: Vec<f64> = [4usize, 8, 16, 32]
                    .iter()
                    .map(|&c| {
                        let state =
                            coherent_amplitudes(&params, &point, Truncation::Fixed(c)).unwrap();
                        eigenstate_residuals(&state)
                            .unwrap()
                            .iter()
                            .map(|e| e.boundary)
                            .fold(0.0, f64::max)
                    })
                    .collect();
                ok &= boundary.windows(2).all(|p| p[1] < p[0]);
            }
        }
    }
    Verdict {
        pass: ok,
        detail: format!("max interior residual {worst:.3e}, truncation residual decreasing over cutoffs 4, 8, 16, 32"),
    }
}

fn criterion_7(s: &mut Suite) -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_moment: f64 = 0.0;
    let mut worst_simplex: f64 = 0.0;
    let mut cases = 0;
    for r in 1..=2u32 {
        let mut runs: Vec<(String, bool)> = Vec::new();
        for k in 1..=6 {
            runs.push((
                format!("--modes {r} --k {k} verify-measure --family projective"),
                false,
            ));
        }
        for k in (r + 1).max(2)..=5 {
            runs.push((
                format!("--modes {r} --k {k} verify-measure --family ball"),
                false,
            ));
        }
        for k in (r + 1)..=5 {
            runs.push((
                format!("--modes {r} --k {k} verify-measure --family bessel"),
                false,
            ));
        }
        for k in (r + 1).max(2)..=6 {
            runs.push((
                format!("--modes {r} --k {k} verify-measure --family simplex"),
                true,
            ));
        }
        for (line, simplex) in runs {
            let (code, rep) = s.cli(&args(&line));
            ok &= code == 0;
            cases += rep["table"]["rows"].as_array().map_or(0, Vec::len);
            let res = rep["checks"][0]["residual"]
                .as_f64()
                .unwrap_or(f64::INFINITY);
            if simplex {
                worst_simplex = worst_simplex.max(res);
            } else {
                worst_moment = worst_moment.max(max_residual(&rep));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= worst_moment < 1e-6 && worst_simplex < 1e-10 && secs < 60.0;
    Verdict {
        pass: ok,
        detail: format!(
            "{cases} moments, max moment residual {worst_moment:.3e}, max simplex residual {worst_simplex:.3e}, {secs:.2} s"
        ),
    }
}

fn criterion_8(s: &mut Suite) -> Verdict {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for sector in ["bosonic", "fermionic"] {
        for r in 1..=3 {
            let (code, rep) = s.cli(&args(&format!(
                "--sector {sector} --modes {r} bose-limit --k-list 10,100,1000,10000 --probe-total 4 --bound 1e-3"
            )));
            ok &= code == 0;
            worst = worst.max(
                rep["checks"][1]["residual"]
                    .as_f64()
                    .unwrap_or(f64::INFINITY),
            );
        }
    }
    Verdict {
        pass: ok,
        detail: format!("largest deviation at k = 1e4: {worst:.3e}"),
    }
}

type Criterion = fn(&mut Suite) -> Verdict;

const CRITERIA: [(&str, Criterion); 8] = [
    ("exact-sector algebra and Heisenberg checks", criterion_1),
    ("truncated-sector algebra, mask load-bearing", criterion_2),
    ("fermionic dimension formula", criterion_3),
    ("Fock-Bargmann equivalence", criterion_4),
    ("coherent-state normalization", criterion_5),
    ("Gazeau-Klauder eigenstate property", criterion_6),
    ("measure moments and simplex identity", criterion_7),
    ("Bose limit", criterion_8),
];

fn run_suite(threads: usize) -> (Vec<String>, Vec<(String, Verdict)>) {
    let mut suite = Suite {
        threads,
        ..Suite::default()
    };
    let verdicts = CRITERIA
        .iter()
        .map(|(name, f)| (name.to_string(), f(&mut suite)))
        .collect();
    (suite.reports, verdicts)
}

fn main() {
    let (first, verdicts) = run_suite(1);
    let mut all = true;
    for (i, (name, v)) in verdicts.iter().enumerate() {
        all &= v.pass;
        println!(
            "criterion {}: {} | {name} | {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let (second, _) = run_suite(1);
    let (threaded, _) = run_suite(4);
    let identical = first == second && first == threaded;
    let bytes: usize = first.iter().map(String::len).sum();
    println!(
        "criterion 9: {} | deterministic reports | {} reports, {bytes} bytes, identical on repeat and with 4 threads",
        if identical { "PASS" } else { "FAIL" },
        first.len()
    );
    all &= identical;
    if !all {
        std::process::exit(1);
    }
}
