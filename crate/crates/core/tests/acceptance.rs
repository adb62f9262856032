//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criterion 1 compares every printed cell of the reference summary table
//! at +/-2e-5.  A block of upper-tail cells and the k=10 bounds-at-the-mean
//! cells are not reproducible from the exact formulas (two independent
//! implementations of this pipeline agree with each other to ~1e-6 and
//! disagree with those reference cells by 5e-5..6e-3; the reference values
//! appear to carry grid-discretization error).  The comparison is asserted
//! faithfully rather than loosened, so that test documents the discrepancy
//! and fails honestly; every other criterion passes.

use cliquedist::cliques::{
    self, b1, b2, b_prime_1, b_prime_2, cdf_bounds, cdf_curve, simplified_bound, table_stats,
    v_profile, CliqueInstance,
};
use cliquedist::montecarlo::{self, Target};
use cliquedist::numerics::PrecisionConfig;
use cliquedist::subgraphs::{self, GraphSpec};
use cliquedist::weights::{pair_prob_closed_ln, pair_prob_quadrature_ln, WeightModel};

fn uniform(n: u64, k: u32) -> CliqueInstance {
    CliqueInstance::new(n, k, WeightModel::Uniform01).unwrap()
}

fn verdict(id: u32, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {id} ({name}): PASS");
    } else {
        println!("criterion {id} ({name}): FAIL");
        for f in failures {
            println!("  {f}");
        }
        panic!(
            "criterion {id} ({name}) failed on {} check(s):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

/// Reference table rows: (k, n, 0.05, mu_hat, LB, UB, 0.95 or ---, max gap).
const TABLE: [(u32, u64, f64, f64, f64, f64, Option<f64>, f64); 10] = [
    (3, 100, 0.04862, 0.02949, 0.44556, 0.55215, None, 0.41804),
    (3, 1_000, 0.04986, 0.00295, 0.50278, 0.51387, None, 0.11282),
    (
        3,
        10_000,
        0.04999,
        0.00029,
        0.50871,
        0.50983,
        Some(0.96326),
        0.02310,
    ),
    (
        3,
        100_000,
        0.05,
        0.00003,
        0.50931,
        0.50942,
        Some(0.95124),
        0.00403,
    ),
    (4, 100, 0.04470, 0.21895, 0.31442, 0.58856, None, 0.66515),
    (4, 1_000, 0.04947, 0.04717, 0.45684, 0.48193, None, 0.19120),
    (
        4,
        10_000,
        0.04995,
        0.01016,
        0.47005,
        0.47236,
        Some(0.98093),
        0.03674,
    ),
    (
        4,
        100_000,
        0.05,
        0.00219,
        0.47127,
        0.47149,
        Some(0.95236),
        0.00594,
    ),
    (
        10,
        3_000_000,
        0.04998,
        0.88550,
        0.43948,
        0.43978,
        Some(0.95220),
        0.00409,
    ),
    (
        10,
        10_000_000,
        0.05,
        0.67763,
        0.44100,
        0.44109,
        Some(0.95077),
        0.00131,
    ),
];

const TABLE_TOL: f64 = 2e-5;

#[test]
fn criterion_01_table_reproduction() {
    let mut failures = Vec::new();
    for &(k, n, c005, mu, lb, ub, c095, gap) in &TABLE {
        let start = std::time::Instant::now();
        let row = table_stats(&uniform(n, k)).unwrap();
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() > 60.0 {
            failures.push(format!("({k},{n}): took {elapsed:?}, budget 60 s"));
        }
        fn cell(failures: &mut Vec<String>, k: u32, n: u64, name: &str, got: f64, want: f64) {
            if (got - want).abs() > TABLE_TOL {
                failures.push(format!(
                    "({k},{n}) {name}: computed {got:.5} vs reference {want:.5} (|diff| = {:.1e})",
                    (got - want).abs()
                ));
            }
        }
        cell(&mut failures, k, n, "0.05", row.col_005, c005);
        cell(&mut failures, k, n, "mu_hat", row.mu_hat, mu);
        cell(&mut failures, k, n, "LB", row.lb_at_mu, lb);
        cell(&mut failures, k, n, "UB", row.ub_at_mu, ub);
        match (row.col_095, c095) {
            (None, None) => {}
            (Some(got), Some(want)) => cell(&mut failures, k, n, "0.95", got, want),
            (got, want) => failures.push(format!(
                "({k},{n}) 0.95 presence mismatch: computed {got:?} vs reference {want:?}"
            )),
        }
        cell(&mut failures, k, n, "max_gap", row.max_gap, gap);
    }
    verdict(1, "table reproduction at +/-2e-5", &failures);
}

#[test]
fn criterion_02_spot_values() {
    let mut failures = Vec::new();
    let k10 = GraphSpec::clique(10, true).unwrap();
    let checks = [(100_000u64, 1.8856f64, 5e-5f64), (1_000_000, 1.13036, 5e-5)];
    for (n, want, tol) in checks {
        let got = subgraphs::asymptotic_mean(&k10, n).unwrap();
        if (got - want).abs() > tol {
            failures.push(format!(
                "mu_hat(10, {n}) = {got:.6} vs {want} (tol {tol:.0e})"
            ));
        }
    }
    let report = cdf_bounds(&uniform(1_000_000, 10), 1.0);
    if (report.upper - 0.00231).abs() > 1e-5 {
        failures.push(format!(
            "F+(1) at (10, 1e6) = {:.6} vs 0.00231 (tol 1e-5)",
            report.upper
        ));
    }
    verdict(2, "spot values for k = 10", &failures);
}

fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[test]
fn criterion_03_brute_force_error_terms() {
    let mut failures = Vec::new();
    for n in [5u32, 6, 7] {
        let sets = subsets(n, 3);
        for w in [0.1f64, 0.3, 0.5, 1.0] {
            // Exhaustive double sums over ordered dependent triangle pairs.
            let p = w.powi(3) / 6.0;
            let pair = w.powi(5) / 20.0;
            let (mut want_b1, mut want_b2) = (0.0, 0.0);
            for a in &sets {
                for b in &sets {
                    if a.iter().filter(|v| b.contains(v)).count() < 2 {
                        continue;
                    }
                    want_b1 += p * p;
                    if a != b {
                        want_b2 += pair;
                    }
                }
            }
            let inst = uniform(n as u64, 3);
            let got_b1 = b1(&inst, w).to_real();
            let got_b2 = b2(&inst, w).unwrap().to_real();
            if ((got_b1 - want_b1) / want_b1).abs() > 1e-12 {
                failures.push(format!("b1(n={n}, w={w}): {got_b1:e} vs {want_b1:e}"));
            }
            if ((got_b2 - want_b2) / want_b2).abs() > 1e-12 {
                failures.push(format!("b2(n={n}, w={w}): {got_b2:e} vs {want_b2:e}"));
            }
        }
    }
    verdict(3, "brute-force b1/b2 equivalence", &failures);
}

#[test]
fn criterion_04_quadrature_closed_form_equivalence() {
    let mut failures = Vec::new();
    let cfg = PrecisionConfig::default();
    let mut pairs = std::collections::BTreeSet::new();
    for k in 3u32..=10 {
        let m = k * (k - 1) / 2;
        for ell in 2..k {
            let a = ell * (ell - 1) / 2;
            pairs.insert((a, m - a));
        }
    }
    for &(a, b) in &pairs {
        for i in 1..=10 {
            let w = i as f64 / 10.0;
            let closed = pair_prob_closed_ln(a, b, w).unwrap();
            let quad = pair_prob_quadrature_ln(WeightModel::Uniform01, a, b, w, &cfg).unwrap();
            // ln-scale difference below 1e-10 is a relative difference
            // below 1e-10 in linear scale.
            if (closed - quad).abs() > 1e-10 {
                failures.push(format!(
                    "(a={a}, b={b}, w={w}): ln closed {closed} vs ln quadrature {quad}"
                ));
            }
        }
    }
    verdict(4, "pair-probability quadrature vs closed form", &failures);
}

#[test]
fn criterion_05_general_vs_clique_and_census() {
    let mut failures = Vec::new();
    let cfg = PrecisionConfig::default();
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
    for k in [3u32, 4, 5] {
        let g = GraphSpec::clique(k, false).unwrap();
        for n in [50u64, 100] {
            for w in [0.01f64, 0.05, 0.2] {
                let clique_report = cdf_bounds(&uniform(n, k), w);
                let general =
                    subgraphs::general_bounds(&g, n, w, WeightModel::Uniform01, &cfg, false)
                        .unwrap();
                for (name, a, b) in [
                    (
                        "lambda",
                        clique_report.lambda.to_real(),
                        general.lambda.to_real(),
                    ),
                    ("b1", clique_report.b1.to_real(), general.b1.to_real()),
                    ("b2", clique_report.b2.to_real(), general.b2.to_real()),
                    ("lower", clique_report.lower, general.lower),
                    ("upper", clique_report.upper, general.upper),
                ] {
                    if rel(a, b) > 1e-12 {
                        failures.push(format!(
                            "K{k} n={n} w={w} {name}: clique {a:e} vs general {b:e}"
                        ));
                    }
                }
            }
        }
    }

    // Census totals at n = v + 2 against exhaustive enumeration of ordered
    // dependent pairs.
    for name in ["K3", "K4", "P3", "P4", "C4"] {
        let g = GraphSpec::parse(name, false).unwrap();
        let n = g.vertex_count() + 2;
        let want = exhaustive_dependent_pairs(&g, n);
        let census = subgraphs::overlap_census(&g, false).unwrap();
        let got: u64 = census
            .iter()
            .map(|c| {
                use num_traits::ToPrimitive;
                c.count_at(n as u64).to_u64().unwrap()
            })
            .sum();
        if got != want {
            failures.push(format!("census total for {name} at n={n}: {got} vs {want}"));
        }
    }
    verdict(
        5,
        "general-H engine vs clique engine + census totals",
        &failures,
    );
}

/// All ordered pairs of distinct copies of H in K_n sharing >= 1 edge.
fn exhaustive_dependent_pairs(g: &GraphSpec, n: u32) -> u64 {
    // Enumerate copies as distinct edge sets via all vertex subsets and all
    // coset-representative patterns - rebuilt here independently of the
    // census internals.
    let v = g.vertex_count();
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut arr: Vec<u32> = (0..v).collect();
    permutations(&mut arr, 0, &mut perms);
    let mut copies: Vec<Vec<(u32, u32)>> = Vec::new();
    for s in subsets(n, v) {
        let mut seen: Vec<Vec<(u32, u32)>> = Vec::new();
        for p in &perms {
            let mut edges: Vec<(u32, u32)> = g
                .edges()
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (s[p[a as usize] as usize], s[p[b as usize] as usize]);
                    (x.min(y), x.max(y))
                })
                .collect();
            edges.sort_unstable();
            if !seen.contains(&edges) {
                seen.push(edges);
            }
        }
        copies.extend(seen);
    }
    let mut count = 0u64;
    for (i, a) in copies.iter().enumerate() {
        for (j, b) in copies.iter().enumerate() {
            if i != j && a.iter().any(|e| b.contains(e)) {
                count += 1;
            }
        }
    }
    count
}

fn permutations(arr: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
    if i == arr.len() {
        out.push(arr.clone());
        return;
    }
    for j in i..arr.len() {
        arr.swap(i, j);
        permutations(arr, i + 1, out);
        arr.swap(i, j);
    }
}

fn envelope_experiment(model: WeightModel, failures: &mut Vec<String>, label: &str) {
    let trials = 20_000u64;
    let emp = montecarlo::run_trials(100, Target::Clique(3), model, trials, 42).unwrap();
    let w_hi = emp.samples.last().unwrap().min(model.closed_form_max());
    let grid: Vec<f64> = (1..=200).map(|i| w_hi * i as f64 / 200.0).collect();
    let inst = CliqueInstance::new(100, 3, model).unwrap();
    let curve = cdf_curve(&inst, &grid).unwrap();
    let report = montecarlo::envelope_check(&emp, &curve, 1e-3);
    if (report.epsilon - 0.01378).abs() > 1e-5 {
        failures.push(format!(
            "{label}: DKW half-width {:.6} differs from 0.01378",
            report.epsilon
        ));
    }
    if !report.pass {
        failures.push(format!(
            "{label}: empirical CDF escapes the envelope by {:.4e} at w = {:.4e}",
            report.worst_margin, report.worst_w
        ));
    }
}

#[test]
fn criterion_06_monte_carlo_envelope() {
    let mut failures = Vec::new();
    envelope_experiment(WeightModel::Uniform01, &mut failures, "uniform");
    envelope_experiment(
        WeightModel::Exponential { rate: 1.0 },
        &mut failures,
        "exponential",
    );
    verdict(6, "Monte-Carlo envelope containment", &failures);
}

#[test]
fn criterion_07_mean_convergence() {
    let mut failures = Vec::new();
    let emp = montecarlo::run_trials(
        2000,
        Target::Clique(3),
        WeightModel::Uniform01,
        2000,
        20_240_810,
    )
    .unwrap();
    let mu = subgraphs::asymptotic_mean(&GraphSpec::clique(3, false).unwrap(), 2000).unwrap();
    let report = montecarlo::mean_check(&emp, mu);
    if !(0.95..=1.05).contains(&report.ratio) {
        failures.push(format!(
            "sample-mean ratio {:.4} outside [0.95, 1.05]",
            report.ratio
        ));
    }
    if report.sigmas > 3.0 {
        failures.push(format!(
            "sample mean {:.6e} is {:.2} standard errors from mu_hat {:.6e}",
            report.sample_mean, report.sigmas, report.mu_hat
        ));
    }
    verdict(7, "mean convergence at (k=3, n=2000)", &failures);
}

#[test]
fn criterion_08_envelope_inequalities() {
    let mut failures = Vec::new();
    for k in 3u32..=12 {
        for n in [100u64, 1_000, 10_000, 1_000_000] {
            let inst = uniform(n, k);
            let cap = (-2.0 / k as f64 * (n as f64).ln())
                .exp()
                .min((-((k as f64 - 1.0) / (k as f64 - 2.0))).exp());
            for frac in [0.5f64, 0.9, 1.0] {
                let w = cap * frac;
                // argmax of v_ell at ell = k - 1.
                let profile = v_profile(&inst, w);
                let argmax = profile
                    .iter()
                    .filter_map(|e| e.v.map(|v| (e.ell, v)))
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap()
                    .0;
                if argmax != k - 1 {
                    failures.push(format!(
                        "argmax v_ell = {argmax} != k-1 at k={k} n={n} w={w:e}"
                    ));
                }
                // b1 <= b'1 < b'2 / 7.
                let lhs = b1(&inst, w);
                let mid = b_prime_1(&inst, w);
                let rhs = b_prime_2(&inst, w);
                if lhs > mid {
                    failures.push(format!("b1 > b'1 at k={k} n={n} w={w:e}"));
                }
                if mid.ln_abs() >= rhs.ln_abs() - 7f64.ln() {
                    failures.push(format!("b'1 >= b'2/7 at k={k} n={n} w={w:e}"));
                }
                // The summation-free bound dominates the exact error terms.
                let z = inst.z_of_w(w);
                let envelope = simplified_bound(&inst, z).unwrap();
                let exact = (b1(&inst, w) + b2(&inst, w).unwrap()).to_real();
                if exact > envelope {
                    failures.push(format!(
                        "b1+b2 = {exact:e} exceeds the simplified bound {envelope:e} \
                         at k={k} n={n} w={w:e}"
                    ));
                }
            }
        }
    }
    verdict(
        8,
        "overlap-envelope inequalities across the sweep",
        &failures,
    );
}

#[test]
fn criterion_09_structure_values() {
    let mut failures = Vec::new();
    let mut check = |cond: bool, msg: &str| {
        if !cond {
            failures.push(msg.to_string());
        }
    };
    let p3 = GraphSpec::parse("P3", false).unwrap();
    check(p3.automorphism_count() == 2, "aut(P3) != 2");
    let k4 = GraphSpec::parse("K4", false).unwrap();
    check(k4.automorphism_count() == 24, "aut(K4) != 24");
    let k3 = GraphSpec::parse("K3", false).unwrap();
    check(
        k3.overlap_density() == Some(num_rational::Ratio::new(5, 4)),
        "d'(K3) != 5/4",
    );
    check(
        k4.overlap_density() == Some(num_rational::Ratio::new(9, 5)),
        "d'(K4) != 9/5",
    );
    for k in [3u64, 4, 5, 6] {
        let g = GraphSpec::clique(k as u32, false).unwrap();
        let want = num_rational::Ratio::new((k - 1) * (k + 2), 2 * (k + 1));
        check(
            g.overlap_density() == Some(want),
            &format!("d'(K{k}) != (k-1)(k+2)/(2(k+1))"),
        );
        check(
            g.is_strictly_balanced(),
            &format!("K{k} not strictly balanced"),
        );
    }
    let paw = GraphSpec::parse("0 1 1 2 2 0 0 3", false).unwrap();
    check(
        !paw.is_strictly_balanced(),
        "paw reported strictly balanced",
    );
    let c6 = GraphSpec::parse("C6", false).unwrap();
    check(c6.is_strictly_balanced(), "C6 not strictly balanced");
    verdict(9, "structural values", &failures);
}

#[test]
fn criterion_10_asymptotic_consistency_and_curves() {
    let mut failures = Vec::new();
    // |exp(-lambda) - exp(-lambda')| <= 1e-3 for k=3, n=1e4, z in [0.5, 5].
    let inst = uniform(10_000, 3);
    let k3 = GraphSpec::parse("K3", false).unwrap();
    for i in 0..=45 {
        let z = 0.5 + i as f64 * 0.1;
        let exact = (-cliques::lambda(&inst, inst.w_of_z(z)).to_real()).exp();
        let asym = subgraphs::asymptotic_point(&k3, 10_000, z)
            .unwrap()
            .survival;
        if (exact - asym).abs() > 1e-3 {
            failures.push(format!(
                "z={z}: |exp(-lambda) - exp(-lambda')| = {:.2e}",
                (exact - asym).abs()
            ));
        }
    }

    // Curve files for (3,100) and (3,1000): the rows at w = mu_hat must
    // agree with the table's LB/UB columns.
    let dir = std::env::temp_dir().join("cliquedist_acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    for n in [100u64, 1000] {
        let inst = uniform(n, 3);
        let mu = subgraphs::asymptotic_mean(&k3, n).unwrap();
        let w_max = (3.0 * mu).min(1.0);
        let mut grid: Vec<f64> = (1..=300).map(|i| w_max * i as f64 / 300.0).collect();
        if !grid.contains(&mu) {
            grid.push(mu);
            grid.sort_by(f64::total_cmp);
        }
        let curve = cdf_curve(&inst, &grid).unwrap();
        let mut text = String::from("w,w_over_mu,lower,upper\n");
        for r in &curve {
            text.push_str(&format!(
                "{:.6e},{:.6e},{:.5e},{:.5e}\n",
                r.w,
                r.w / mu,
                r.lower,
                r.upper
            ));
        }
        let path = dir.join(format!("curve_k3_n{n}.csv"));
        std::fs::write(&path, &text).unwrap();

        let row = table_stats(&inst).unwrap();
        let at_mu = curve
            .iter()
            .find(|r| r.w == mu)
            .expect("mu_hat lies on the grid");
        if (at_mu.lower - row.lb_at_mu).abs() > 1e-9 {
            failures.push(format!(
                "curve lower at mu ({}) differs from table LB ({}) for n={n}",
                at_mu.lower, row.lb_at_mu
            ));
        }
        if (at_mu.upper - row.ub_at_mu).abs() > 1e-9 {
            failures.push(format!(
                "curve upper at mu ({}) differs from table UB ({}) for n={n}",
                at_mu.upper, row.ub_at_mu
            ));
        }
    }
    verdict(10, "asymptotic consistency and curve emission", &failures);
}
