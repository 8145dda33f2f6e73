//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use frustra::bounds::{analyze_ground, report_from_spectra, ExcitedAnalyzer, Spectra};
use frustra::entanglement::standard_states::{ghz, w};
use frustra::entanglement::{
    brute_force_geometric_measure, geometric_measure_alternating, geometric_measure_bipartite, Bipartition,
    EntanglementOptions, PureState,
};
use frustra::hamiltonian::{ising2, split, SplitPolicy, Splitting, TermRole};
use frustra::linalg::{svd, ComplexMatrix, NormKind};
use frustra::perturbation::{check_theorem, random_hermitian_instance, sharpness_witness};
use frustra::random::{
    random_bipartite_dense_model, random_complex_matrix, random_two_site_model, random_unit_vector,
    random_weakly_coupled_model,
};
use frustra::saturation::saturation_sweep;
use frustra::suites::trial_rng;
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if let Some(f) = failures.first() {
        detail = format!("{detail}; {} failure(s), first: {f}", failures.len());
    }
    Outcome { ok: failures.is_empty(), detail }
}

fn g_grid() -> Vec<f64> {
    (0..200).map(|i| 0.01 + (5.0 - 0.01) * i as f64 / 199.0).collect()
}

// closed forms for H = −g(X₁ + X₂) − Z₁Z₂, worked out by hand
fn gse(g: f64) -> f64 {
    0.5 - g / (1.0 + 4.0 * g * g).sqrt()
}

fn fb(g: f64) -> f64 {
    (1.0 + 2.0 * g - (1.0 + 4.0 * g * g).sqrt()) / (2.0 * g)
}

fn fb2(g: f64) -> f64 {
    0.5 - ((1.0 + 4.0 * g * g).sqrt() - (1.0 + g * g).sqrt()) / (2.0 * g)
}

fn symmetric(g: f64) -> Splitting {
    split(&ising2(g), &SplitPolicy::ByLocalityDegree).unwrap()
}

fn single_site(g: f64) -> Splitting {
    let roles = vec![TermRole::Local, TermRole::Interaction, TermRole::Interaction];
    split(&ising2(g), &SplitPolicy::Explicit(roles)).unwrap()
}

fn opts() -> EntanglementOptions {
    EntanglementOptions::default()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let (mut worst_e, mut worst_b) = (0.0f64, 0.0f64);
    for g in g_grid() {
        let r = analyze_ground(&symmetric(g), &opts()).unwrap();
        let de = (r.entanglement - gse(g)).abs();
        let db = r.ef_bound.map(|b| (b - fb(g)).abs()).unwrap_or(f64::INFINITY);
        worst_e = worst_e.max(de);
        worst_b = worst_b.max(db);
        if de > 1e-8 || db > 1e-8 {
            fails.push(format!("g = {g}: |dE| = {de:e}, |dbound| = {db:e}"));
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(2) {
        fails.push(format!("runtime {t:?}"));
    }
    outcome(&fails, format!("max |dE| = {worst_e:.1e}, max |dbound| = {worst_b:.1e}, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for g in g_grid() {
        let a = analyze_ground(&single_site(g), &opts()).unwrap().ef_bound.unwrap();
        let s = analyze_ground(&symmetric(g), &opts()).unwrap().ef_bound.unwrap();
        let d = (a - fb2(g)).abs();
        worst = worst.max(d);
        if d > 1e-8 {
            fails.push(format!("g = {g}: |dbound| = {d:e}"));
        }
        if a > s {
            fails.push(format!("g = {g}: single-site {a} above symmetric {s}"));
        }
    }
    outcome(&fails, format!("max |dbound| = {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for g in g_grid() {
        let r = analyze_ground(&symmetric(g), &opts()).unwrap();
        let lhs = r.ef_bound.unwrap() - 2.0 * r.entanglement - (r.expect_h_i - r.e0_i) / r.delta_e_ent;
        worst = worst.max(lhs.abs());
        if lhs.abs() > 1e-9 {
            fails.push(format!("g = {g}: residual {lhs:e}"));
        }
    }
    outcome(&fails, format!("max residual = {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut checked = 0;
    for t in 0..1000u64 {
        let d = if t < 500 { 2 } else { 3 };
        let mut rng = trial_rng(4, t);
        let m = random_two_site_model(&mut rng, d);
        let r = analyze_ground(&split(&m, &SplitPolicy::ByLocalityDegree).unwrap(), &opts()).unwrap();
        let tol = 1e-9 * r.scale;
        if r.e_f < -tol {
            fails.push(format!("trial {t}: E_f = {}", r.e_f));
        }
        if r.e_f > r.e_i_tot + tol {
            fails.push(format!("trial {t}: E_f above E^I_tot"));
        }
        if r.delta_e_ent > 1e-6 {
            checked += 1;
            let ef = r.e_f / r.delta_e_ent;
            let ratio = r.e_i_tot / r.delta_e_ent;
            if r.entanglement > ef + 1e-6 || r.entanglement > ratio + 1e-6 {
                fails.push(format!("trial {t}: E = {} vs {ef}, {ratio}", r.entanglement));
            }
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(30) {
        fails.push(format!("runtime {t:?}"));
    }
    outcome(&fails, format!("1000 models, {checked} with bounds defined, {t:.2?}"))
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    let mut decayed = 0;
    let mut relative = Vec::new();
    for t in 0..50u64 {
        let mut rng = trial_rng(5, t);
        let m = random_bipartite_dense_model(&mut rng, 2 + (t as usize) % 2);
        let sweep = saturation_sweep(&m, &[1e-1, 1e-2, 1e-3], &opts()).unwrap();
        let ex: Vec<f64> = sweep.records.iter().map(|r| r.excess).collect();
        if ex.iter().any(|&e| !(e > 0.0)) {
            fails.push(format!("instance {t}: excess {ex:?}"));
        }
        if ex[2] <= 0.3 * ex[1] {
            decayed += 1;
        }
        let e = sweep.records[2].entanglement;
        if e >= 0.05 {
            relative.push(ex[2] / e);
        }
    }
    relative.sort_by(f64::total_cmp);
    let median = if relative.is_empty() {
        0.0
    } else if relative.len() % 2 == 1 {
        relative[relative.len() / 2]
    } else {
        0.5 * (relative[relative.len() / 2 - 1] + relative[relative.len() / 2])
    };
    let frac = decayed as f64 / 50.0;
    if frac < 0.9 {
        fails.push(format!("decay fraction {frac}"));
    }
    if median > 0.05 {
        fails.push(format!("median relative excess {median}"));
    }
    outcome(
        &fails,
        format!("decay fraction {frac:.2}, median excess/E {median:.2e} over {} instances", relative.len()),
    )
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let mut worst = f64::INFINITY;
    for t in 0..500usize {
        let dim = [4, 8, 16][t % 3];
        let c_norm = [0.01, 0.1, 1.0][(t / 3) % 3];
        let mut rng = trial_rng(6, t as u64);
        let inst = random_hermitian_instance(&mut rng, dim, c_norm).unwrap();
        let r = check_theorem(&inst).unwrap();
        worst = worst.min(r.op_ineq_margin / r.scale);
        if r.op_ineq_margin < -1e-8 * r.scale {
            fails.push(format!("trial {t}: margin {:e}", r.op_ineq_margin));
        }
        if !r.dominance_ok {
            fails.push(format!("trial {t}: singular dominance"));
        }
        for kind in NormKind::ALL {
            let c = r.norm_chain.iter().find(|c| c.kind == kind).unwrap();
            if c.projector_overlap > c.restricted + 1e-9 || c.restricted > c.full + 1e-9 {
                fails.push(format!("trial {t}: {kind:?} chain {c:?}"));
            }
        }
    }
    let wit = sharpness_witness(1e-3).unwrap();
    if wit.ratio < 0.99 {
        fails.push(format!("sharpness ratio {}", wit.ratio));
    }
    // lower eigenvector of [[0, ε], [ε, 1]] is ∝ (1, a/ε) with a = (1 − √(1 + 4ε²))/2
    let eps: f64 = 1e-3;
    let a = (1.0 - (1.0 + 4.0 * eps * eps).sqrt()) / 2.0;
    let by_hand = (a / eps).abs() / (1.0 + (a / eps).powi(2)).sqrt() * (1.0 - a) / eps;
    if (wit.ratio - by_hand).abs() > 1e-9 {
        fails.push(format!("sharpness ratio {} vs {by_hand}", wit.ratio));
    }
    outcome(&fails, format!("worst margin/scale {worst:.1e}, sharpness ratio {:.6}", wit.ratio))
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let s = symmetric(2.0);
    let r = ExcitedAnalyzer::new(&s).unwrap().analyze(0, &opts()).unwrap();
    let b29 = r.bound_29.unwrap_or(f64::NAN);
    if !((b29 - 1.0 / 9.0).abs() <= 1e-12) {
        fails.push(format!("ising2 bound_29 = {b29}"));
    }
    let e = 0.5 - 2.0 / 17f64.sqrt();
    if !((r.entanglement - e).abs() <= 1e-8) {
        fails.push(format!("ising2 E = {}", r.entanglement));
    }
    if !(r.entanglement <= b29) {
        fails.push("ising2 E above bound_29".into());
    }
    let mut checked = 0;
    for t in 0..100u64 {
        let mut rng = trial_rng(7, t);
        let m = random_weakly_coupled_model(&mut rng, 3);
        let s = split(&m, &SplitPolicy::ByLocalityDegree).unwrap();
        let an = ExcitedAnalyzer::new(&s).unwrap();
        let sp = an.spectra();
        let min_gap = sp.local.gaps.iter().copied().fold(f64::INFINITY, f64::min);
        if min_gap < 10.0 * sp.eig_i.spectral_radius() {
            fails.push(format!("instance {t}: not weakly coupled"));
        }
        for j in 0..8 {
            let r = an.analyze(j, &opts()).unwrap();
            if let (true, Some(b)) = (r.precondition_met, r.bound_29) {
                checked += 1;
                if r.entanglement > b + 1e-6 {
                    fails.push(format!("instance {t}, j = {j}: {} > {b}", r.entanglement));
                }
            }
            if let (Some(b29), Some(b30)) = (r.bound_29, r.bound_30) {
                if b30 < b29 {
                    fails.push(format!("instance {t}, j = {j}: bound_30 {b30} < bound_29 {b29}"));
                }
            }
        }
    }
    outcome(&fails, format!("bound_29 = {b29:.15}, {checked} eigenstates checked"))
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    let mut worst2 = 0.0f64;
    for t in 0..200u64 {
        let mut rng = trial_rng(8, t);
        let psi = PureState::new(vec![2, 2], random_unit_vector(&mut rng, 4)).unwrap();
        let exact = geometric_measure_bipartite(&psi, &Bipartition::first_vs_rest(2).unwrap()).unwrap();
        let alt = geometric_measure_alternating(&psi, &psi.singleton_parties(), &opts()).unwrap();
        let d = (alt.value - exact.value).abs();
        worst2 = worst2.max(d);
        if d > 1e-6 {
            fails.push(format!("2-qubit {t}: {d:e}"));
        }
    }
    let mut worst3 = 0.0f64;
    for t in 0..50u64 {
        let mut rng = trial_rng(88, t);
        let psi = PureState::new(vec![2, 2, 2], random_unit_vector(&mut rng, 8)).unwrap();
        let oracle = brute_force_geometric_measure(&psi, 5).unwrap();
        let alt = geometric_measure_alternating(&psi, &psi.singleton_parties(), &opts()).unwrap();
        let d = (alt.value - oracle.value).abs();
        worst3 = worst3.max(d);
        if d > 1e-3 {
            fails.push(format!("3-qubit {t}: {d:e}"));
        }
    }
    let g = geometric_measure_alternating(&ghz(3), &ghz(3).singleton_parties(), &opts()).unwrap().value;
    if (g - 0.5).abs() > 1e-6 {
        fails.push(format!("GHZ3 = {g}"));
    }
    let wv = geometric_measure_alternating(&w(3), &w(3).singleton_parties(), &opts()).unwrap().value;
    if (wv - 5.0 / 9.0).abs() > 1e-4 {
        fails.push(format!("W3 = {wv}"));
    }
    outcome(&fails, format!("max dev 2-qubit {worst2:.1e}, 3-qubit {worst3:.1e}, GHZ3 {g:.9}, W3 {wv:.9}"))
}

fn norms(m: &ComplexMatrix) -> (f64, f64, f64) {
    let s = svd(m).unwrap().singular_values;
    let op = s.iter().copied().fold(0.0, f64::max);
    let hs = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tr = s.iter().sum();
    (op, hs, tr)
}

fn criterion_9() -> Outcome {
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for t in 0..200u64 {
        let mut rng = trial_rng(9, t);
        let n = rng.random_range(2..=16);
        let m = random_complex_matrix(&mut rng, n, n);
        let (op, hs, tr) = norms(&m);
        let slack = 1e-12 * tr;
        if op > hs + slack || hs > tr + slack {
            fails.push(format!("matrix {t}: {op} {hs} {tr}"));
        }
        // ‖a b†‖ = ‖a‖‖b‖ in all three norms
        let a: Vec<_> = (0..n).map(|_| m[(0, rng.random_range(0..n))]).collect();
        let b = random_unit_vector(&mut rng, n);
        let dyad = ComplexMatrix::outer(&a, &b);
        let expected = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let (op, hs, tr) = norms(&dyad);
        for x in [op, hs, tr] {
            let d = (x - expected).abs() / expected.max(1.0);
            worst = worst.max(d);
            if d > 1e-12 {
                fails.push(format!("dyad {t}: {x} vs {expected}"));
            }
        }
    }
    outcome(&fails, format!("max rank-1 deviation {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_frustra"))
        .args(["analyze", "--model", "triangle", "--param", "J=1"])
        .output()
        .expect("binary runs");
    let mut fails = Vec::new();
    if out.status.code() != Some(0) {
        fails.push(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    if v["degenerate_ground"] != serde_json::Value::Bool(true) {
        fails.push("degenerate_ground is not true".into());
    }
    if !v["ef_bound"].is_null() || v.get("ef_bound").is_none() {
        fails.push(format!("ef_bound = {}", v["ef_bound"]));
    }
    if v["bound_note"] != "delta_e_ent = 0" {
        fails.push(format!("bound_note = {}", v["bound_note"]));
    }
    outcome(&fails, format!("exit {:?}, bound_note {}", out.status.code(), v["bound_note"]))
}

fn main() {
    // the grid criteria also run through the report path directly
    let s = symmetric(1.0);
    let sp = Spectra::new(&s).unwrap();
    assert!(report_from_spectra(&s, &sp, &opts()).is_ok());

    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Ising entanglement and bound vs closed forms", criterion_1),
        ("single-site splitting bound", criterion_2),
        ("bound-excess identity", criterion_3),
        ("random two-site bound properties", criterion_4),
        ("Schmidt-splitting saturation", criterion_5),
        ("eigenspace perturbation theorem", criterion_6),
        ("excited-state bounds", criterion_7),
        ("geometric-measure oracles", criterion_8),
        ("norm ordering", criterion_9),
        ("degenerate triangle through the CLI", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
