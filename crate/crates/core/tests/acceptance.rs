//! Acceptance criteria. Every test prints one `criterion N: PASS|FAIL` line.
//!
//! Run with `cargo test -p hypercomplex-ifs --test acceptance -- --nocapture`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercomplex_ifs::cli_io::parse_scene;
use hypercomplex_ifs::clifford::{quaternion_unit_product, AlgebraKind, CliffordNumber, Paravector};
use hypercomplex_ifs::hmodule::{directed_grid, hausdorff, hausdorff_bruteforce, HVector, PointSet};
use hypercomplex_ifs::ifs::{
    attractor_chaos, attractor_deterministic, chaos_tolerance, hutchinson_image, lipschitz_exact,
    real_affine_map, realify, scaled_diagonal_map, Hifs, MapDesc, SandwichComponent, SandwichTerm,
};
use hypercomplex_ifs::trajectory::{
    backward_attractor_points, backward_attractor_sets, backward_points_tolerance,
    summability_report, Schedule, Verdict,
};

/// Keeps the timed criteria from competing for cores.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, n: u32, title: &str, start: Instant, budget: Option<Duration>) {
        let mut failures = self.failures;
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > b {
                failures.push(format!("runtime {elapsed:.2?} exceeds {b:?}"));
            }
        }
        if failures.is_empty() {
            println!("criterion {n}: PASS  {title} ({elapsed:.2?})");
        } else {
            println!("criterion {n}: FAIL  {title} ({elapsed:.2?})");
            for f in &failures {
                println!("    - {f}");
            }
            panic!("criterion {n} failed: {}", failures.join("; "));
        }
    }
}

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn quat() -> AlgebraKind {
    AlgebraKind::quaternion()
}

fn q() -> Paravector {
    Paravector::new(quat(), vec![0.3, -0.1, 0.4, -0.2]).unwrap()
}

fn q2_hat() -> Paravector {
    let s = (10.0f64 / 3.0).sqrt();
    q().scale(s)
}

fn fig1_left() -> Hifs {
    let s3 = 3f64.sqrt() / 4.0;
    Hifs::new(vec![
        real_affine_map(&[&[0.5, 0.0], &[0.0, 0.5]], &[0.0, 0.0]).unwrap(),
        real_affine_map(&[&[0.5, 0.0], &[0.0, 0.5]], &[0.5, 0.0]).unwrap(),
        real_affine_map(&[&[0.5, 0.0], &[0.0, 0.75]], &[0.25, s3]).unwrap(),
    ])
    .unwrap()
}

#[test]
fn criterion_01_quaternion_table() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    // e_i e_j = -δ_ij + ε_ijk e_k for i, j ≥ 1, e_0 the identity
    let levi = |i: usize, j: usize, k: usize| -> f64 {
        let p = [i, j, k];
        if p.iter().any(|&x| x == 0) || i == j || j == k || i == k {
            return 0.0;
        }
        if [[1, 2, 3], [2, 3, 1], [3, 1, 2]].contains(&p) {
            1.0
        } else {
            -1.0
        }
    };
    for i in 0..4 {
        for j in 0..4 {
            let mut expect = [0.0; 4];
            if i == 0 {
                expect[j] = 1.0;
            } else if j == 0 {
                expect[i] = 1.0;
            } else if i == j {
                expect[0] = -1.0;
            } else {
                for (k, e) in expect.iter_mut().enumerate().skip(1) {
                    *e = levi(i, j, k);
                }
            }
            let (sign, slot) = quaternion_unit_product(i, j);
            let mut table = [0.0; 4];
            table[slot] = sign;
            let via_mul = CliffordNumber::generator(quat(), i)
                .mul(&CliffordNumber::generator(quat(), j))
                .unwrap();
            out.check(table == expect, format!("table e{i}e{j} = {table:?}, expected {expect:?}"));
            out.check(via_mul.coeffs() == expect, format!("product e{i}e{j} = {:?}", via_mul.coeffs()));
        }
    }
    out.finish(1, "quaternion multiplication table", start, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_02_norm_of_q() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let n = q().norm();
    out.check((n - 0.3f64.sqrt()).abs() <= 1e-12, format!("|q| = {n}"));
    out.finish(2, "|q| = sqrt(0.3)", start, None);
}

#[test]
fn criterion_03_exact_lipschitz() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();

    let diag = scaled_diagonal_map(&q(), HVector::zero(quat(), 2)).unwrap();
    let l = lipschitz_exact(&realify(&diag).unwrap()).unwrap();
    out.check((l - 0.3f64.sqrt()).abs() <= 1e-9, format!("Lip diag(q, q) = {l}"));

    let sandwich = MapDesc::sandwich(vec![SandwichComponent {
        terms: vec![SandwichTerm {
            left: q2_hat().scale(0.7),
            source: 0,
            right: q2_hat(),
        }],
        translation: Paravector::zero(quat()),
    }])
    .unwrap();
    let l = lipschitz_exact(&realify(&sandwich).unwrap()).unwrap();
    out.check((l - 0.7).abs() <= 1e-9, format!("Lip sandwich = {l}"));

    let n = q2_hat().norm();
    out.check((n - 1.0).abs() <= 1e-12, format!("|q2_hat| = {n}"));
    out.finish(3, "exact Lipschitz constants", start, Some(Duration::from_secs(1)));
}

fn random_number(rng: &mut ChaCha8Rng, alg: AlgebraKind) -> CliffordNumber {
    let c = (0..alg.blade_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    CliffordNumber::from_coeffs(alg, c).unwrap()
}

fn random_paravector(rng: &mut ChaCha8Rng, alg: AlgebraKind) -> Paravector {
    let c = (0..alg.paravector_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Paravector::new(alg, c).unwrap()
}

fn max_diff(a: &CliffordNumber, b: &CliffordNumber) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_04_clifford_properties() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let tol = 1e-12;

    for n in 0..=5 {
        let alg = AlgebraKind::clifford(n).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let ei = CliffordNumber::generator(alg, i);
                let ej = CliffordNumber::generator(alg, j);
                let s = ei.mul(&ej).unwrap().add(&ej.mul(&ei).unwrap()).unwrap();
                let expect = CliffordNumber::scalar(alg, if i == j { -2.0 } else { 0.0 });
                out.check(s == expect, format!("Cl({n}): e{i}e{j} + e{j}e{i} = {:?}", s.coeffs()));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 120;
    for case in 0..cases {
        let n = case % 6;
        let alg = AlgebraKind::clifford(n).unwrap();
        let (a, b, c) = (
            random_number(&mut rng, alg),
            random_number(&mut rng, alg),
            random_number(&mut rng, alg),
        );
        let ab = a.mul(&b).unwrap();
        let lhs = ab.conj();
        let rhs = b.conj().mul(&a.conj()).unwrap();
        out.check(max_diff(&lhs, &rhs) <= tol, format!("conj anti-automorphism, Cl({n}) case {case}"));

        let left = ab.mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        out.check(max_diff(&left, &right) <= tol, format!("associativity, Cl({n}) case {case}"));

        let p = random_paravector(&mut rng, alg);
        let pp = p.mul(&p.conj()).unwrap();
        let expect = CliffordNumber::scalar(alg, p.norm_sqr());
        out.check(max_diff(&pp, &expect) <= tol, format!("p p̄ = |p|², Cl({n}) case {case}"));

        let (x, y) = (random_paravector(&mut rng, quat()), random_paravector(&mut rng, quat()));
        let xy = x.mul(&y).unwrap().cnorm();
        out.check((xy - x.norm() * y.norm()).abs() <= tol, format!("|xy| = |x||y|, case {case}"));
    }
    out.finish(4, "Clifford property suite", start, Some(Duration::from_secs(10)));
}

fn random_set(rng: &mut ChaCha8Rng, dim: usize, len: usize) -> PointSet {
    let spread: f64 = rng.gen_range(0.1..3.0);
    let shift: f64 = rng.gen_range(-1.0..1.0);
    let data = (0..dim * len).map(|_| shift + spread * rng.gen_range(-1.0..1.0)).collect();
    PointSet::new(dim, data).unwrap()
}

#[test]
fn criterion_05_hausdorff_oracle() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..100 {
        let dim = if case % 2 == 0 { 2 } else { 8 };
        let (na, nb) = (rng.gen_range(1..=500), rng.gen_range(1..=500));
        let a = random_set(&mut rng, dim, na);
        let b = random_set(&mut rng, dim, nb);
        let cell = 10f64.powf(rng.gen_range(-2.0..0.5));
        let fast = hausdorff(&a, &b, cell).unwrap();
        let slow = hausdorff_bruteforce(&a, &b).unwrap();
        out.check(
            (fast - slow).abs() <= 1e-12,
            format!("case {case}: grid {fast} vs brute force {slow}"),
        );
    }
    out.finish(5, "grid Hausdorff equals brute force", start, Some(Duration::from_secs(30)));
}

#[test]
fn criterion_06_fig1_left() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let ifs = fig1_left();
    let (eps, cell) = (1e-3, 2e-3);
    let h = ifs.contraction_factor().unwrap();
    out.check((h - 0.75).abs() < 1e-9, format!("h = {h}"));

    let f0 = PointSet::singleton(&[0.0, 0.0]);
    let (f, report) = attractor_deterministic(&ifs, &f0, eps, cell, 1000).unwrap();
    let limit = 2.0 * (eps + cell * 2f64.sqrt() / (2.0 * 0.25));
    let image = hutchinson_image(&ifs, &f).unwrap();
    let d = hausdorff(&f, &image, cell).unwrap();
    out.check(d <= limit, format!("d(F, 𝓕(F)) = {d} > {limit}"));
    out.check(report.residual <= report.bound, "residual exceeds certified bound");

    let g0 = PointSet::new(2, vec![1.0, 1.0, -0.5, 2.0, 0.3, 0.0]).unwrap();
    let (g, other) = attractor_deterministic(&ifs, &g0, eps, cell, 1000).unwrap();
    let d = hausdorff(&f, &g, cell).unwrap();
    let two_bounds = 2.0 * report.bound.max(other.bound);
    out.check(d <= two_bounds, format!("initial sets disagree by {d} > {two_bounds}"));

    let chaos = attractor_chaos(&ifs, 100_000, 40, 6).unwrap();
    let d = hausdorff(&f, &chaos, cell).unwrap();
    out.check(d <= 0.02, format!("chaos vs deterministic {d} > 0.02"));
    out.finish(6, "Sierpinski-type system, both engines", start, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_07_example1() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let cfg = parse_scene(&std::fs::read_to_string(scene("example1.json")).unwrap()).unwrap();
    let schedule = cfg.schedule().unwrap();
    let ifs = schedule.lookup(1);
    out.check(ifs.dim() == 8, format!("D = {}", ifs.dim()));

    let ball = ifs.invariant_ball().unwrap();
    let s = 0.3f64.sqrt();
    let m = 0.875f64.sqrt();
    out.check((ball.s - s).abs() <= 1e-9, format!("s = {}", ball.s));
    out.check((ball.m - m).abs() <= 1e-9, format!("M = {}", ball.m));
    out.check((ball.r - m / (1.0 - s)).abs() <= 1e-9, format!("r = {}", ball.r));

    let origin = PointSet::singleton(&[0.0; 8]);
    match attractor_deterministic(ifs, &origin, 0.01, 0.01, 1000) {
        Ok((_, report)) => out.check(
            report.residual <= report.bound,
            format!("residual {} > bound {}", report.residual, report.bound),
        ),
        Err(e) => out.check(false, format!("engine failed: {e}")),
    }
    out.finish(7, "quaternionic example, D = 8", start, Some(Duration::from_secs(120)));
}

#[test]
fn criterion_08_example2() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let cfg = parse_scene(&std::fs::read_to_string(scene("example2.json")).unwrap()).unwrap();
    let schedule = cfg.schedule().unwrap();

    let summary = summability_report(&schedule, 50).unwrap();
    let rho = 0.75f64.powi(5) * 0.7f64.powi(5);
    out.check(summary.verdict == Verdict::Convergent, format!("verdict {:?}", summary.verdict));
    let got = summary.period_product.unwrap();
    out.check((got - rho).abs() <= 1e-12, format!("block product {got}, expected {rho}"));

    let ball = schedule.invariant_ball().unwrap();
    out.check((ball.r - 7.0).abs() <= 1e-9, format!("r = {}", ball.r));

    let f0 = PointSet::singleton(&[0.0; 4]);
    let cell = 5e-3;
    let (s40, r40) = backward_attractor_sets(&schedule, &f0, 40, cell).unwrap();
    let (s50, r50) = backward_attractor_sets(&schedule, &f0, 50, cell).unwrap();
    let d = hausdorff(&s40, &s50, cell).unwrap();
    out.check(d <= r40.tail_bound, format!("depth 40 vs 50: {d} > {}", r40.tail_bound));
    for r in [&r40, &r50] {
        out.check(
            r.max_norm <= 1.01 * 7.0,
            format!("depth {}: intermediate norm {}", r.depth, r.max_norm),
        );
    }
    out.finish(8, "block-periodic backward trajectory", start, Some(Duration::from_secs(120)));
}

#[test]
fn criterion_09_stationary_reduction() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let ifs = fig1_left();
    let h = ifs.contraction_factor().unwrap();
    let r = ifs.invariant_ball().unwrap().r;
    let schedule = Schedule::stationary("gasket", ifs.clone());
    let cell = 2e-3;

    let f0 = PointSet::singleton(&[0.0, 0.0]);
    let (forward, fr) = attractor_deterministic(&ifs, &f0, 1e-3, cell, 1000).unwrap();
    let (backward, br) = backward_attractor_sets(&schedule, &f0, 60, cell).unwrap();
    let d = hausdorff(&forward, &backward, cell).unwrap();
    let combined = fr.bound + br.tail_bound;
    out.check(d <= combined, format!("set engines differ by {d} > {combined}"));

    let (depth, samples, seed) = (41, 20_000, 11);
    let points = backward_attractor_points(&schedule, depth, samples, seed).unwrap();
    let chaos = attractor_chaos(&ifs, samples, depth - 1, seed).unwrap();
    let tol_points = backward_points_tolerance(&schedule, depth).unwrap();
    let tol_chaos = chaos_tolerance(h, r, depth - 1);
    let d = hausdorff(&points, &chaos, cell).unwrap();
    out.check(
        d <= tol_points + tol_chaos,
        format!("point engines differ by {d} > {}", tol_points + tol_chaos),
    );
    let worst = directed_grid(&points.with_grid(cell).unwrap(), &forward.with_grid(cell).unwrap())
        .unwrap();
    out.check(
        worst <= tol_points + fr.bound,
        format!("backward point {worst} away from the attractor"),
    );
    out.finish(9, "stationary schedule matches forward engines", start, Some(Duration::from_secs(60)));
}

fn render(dir: &Path, threads: usize) -> Vec<(String, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_hcifs"))
        .arg("render")
        .arg(scene("example1.json"))
        .args(["--seed", "42", "--threads", &threads.to_string(), "--out-dir"])
        .arg(dir)
        .output()
        .expect("binary runs");
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("pgm" | "csv")))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_10_determinism() {
    let _g = serial();
    let start = Instant::now();
    let mut out = Outcome::new();
    let tmp = tempfile::tempdir().unwrap();
    let runs: Vec<_> = [(1, "a"), (8, "b"), (1, "c"), (8, "d")]
        .iter()
        .map(|&(t, name)| render(&tmp.path().join(name), t))
        .collect();
    out.check(runs[0].len() == 3, format!("{} outputs instead of 3", runs[0].len()));
    for (i, run) in runs.iter().enumerate().skip(1) {
        out.check(run == &runs[0], format!("run {i} differs from run 0"));
    }
    out.finish(10, "byte-identical renders across thread counts", start, None);
}
