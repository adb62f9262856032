//! Classification of ordered dependent copy pairs by overlap shape, with
//! exact counts as polynomials in the host order n, and the explicit bounds
//! for general H assembled from that census.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{check_guard, count_common, for_each_overlap_pattern, GraphSpec, MAX_CENSUS_VERTICES};
use crate::cliques::{assemble_report, BoundReport};
use crate::error::Result;
use crate::numerics::{log_sum_exp, PrecisionConfig, SignedLogReal};
use crate::weights::{
    conv_ln_cdf, pair_prob_ln, pair_prob_needs_quadrature, ConvolutionSpec, WeightModel,
};

/// One overlap class of ordered dependent pairs (alpha, beta), beta != alpha:
/// `ell` shared vertices and `shared_edges >= 1` shared edges.  The number
/// of ordered pairs in the class is
/// `coeff_num * n(n-1)...(n - falling_order + 1) / coeff_den`,
/// a single falling-factorial term (the division is always exact).
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapClass {
    pub ell: u32,
    pub shared_edges: u32,
    pub unique_edges_alpha: u32,
    pub unique_edges_beta: u32,
    pub falling_order: u32,
    pub coeff_num: BigUint,
    pub coeff_den: BigUint,
}

impl OverlapClass {
    /// Exact ordered-pair count at host order n.
    pub fn count_at(&self, n: u64) -> BigUint {
        let mut ff = BigUint::one();
        for i in 0..self.falling_order as u64 {
            ff *= BigUint::from(n - i);
        }
        let total = &self.coeff_num * ff;
        debug_assert!((&total % &self.coeff_den).is_zero());
        total / &self.coeff_den
    }

    /// ln of the ordered-pair count (finite for any n that fits the class).
    pub fn ln_count_at(&self, n: u64) -> f64 {
        let c = self.count_at(n);
        if c.is_zero() {
            f64::NEG_INFINITY
        } else {
            ln_biguint(&c)
        }
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    if let Some(v) = x.to_f64().filter(|v| v.is_finite()) {
        v.ln()
    } else {
        let shift = x.bits() - 64;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// CSV export of a census: one class per row with the falling-factorial
/// coefficient as an exact fraction.
pub fn census_csv(census: &[OverlapClass]) -> String {
    let mut out = String::from(
        "ell,shared_edges,unique_edges_alpha,unique_edges_beta,falling_order,coeff_num,coeff_den\n",
    );
    for c in census {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.ell,
            c.shared_edges,
            c.unique_edges_alpha,
            c.unique_edges_beta,
            c.falling_order,
            c.coeff_num,
            c.coeff_den
        ));
    }
    out
}

/// Complete classification of ordered dependent pairs by (ell, shared
/// edges).  Classes are sorted by (ell, shared_edges); copies on the same
/// vertex set with a different embedding appear as ell = v classes.
pub fn overlap_census(g: &GraphSpec, force: bool) -> Result<Vec<OverlapClass>> {
    check_guard(
        "census vertices",
        g.vertex_count(),
        MAX_CENSUS_VERTICES,
        force,
    )?;
    let v = g.vertex_count();
    let m = g.edge_count();
    let edges = g.edges().to_vec();
    // pattern_counts[(ell, a)] = number of (shared-subset, injection) shapes.
    let mut pattern_counts: std::collections::BTreeMap<(u32, u32), u64> =
        std::collections::BTreeMap::new();
    for_each_overlap_pattern(v, &edges, |shared_vertices, image| {
        let a = count_common(&edges, image);
        if a == 0 || image == edges.as_slice() {
            return; // independent of alpha, or alpha itself
        }
        *pattern_counts.entry((shared_vertices, a)).or_insert(0) += 1;
    });
    let aut = BigUint::from(g.automorphism_count());
    let den = &aut * &aut;
    Ok(pattern_counts
        .into_iter()
        .map(|((ell, a), count)| OverlapClass {
            ell,
            shared_edges: a,
            unique_edges_alpha: m - a,
            unique_edges_beta: m - a,
            falling_order: 2 * v - ell,
            coeff_num: BigUint::from(count),
            coeff_den: den.clone(),
        })
        .collect())
}

/// Explicit CDF bounds for a general H from the overlap census:
/// lambda and b1/b2 assembled exactly as in the clique engine, with the
/// census supplying the pair counts and overlap shapes.
pub fn general_bounds(
    g: &GraphSpec,
    n: u64,
    w: f64,
    model: WeightModel,
    cfg: &PrecisionConfig,
    force: bool,
) -> Result<BoundReport> {
    let census = overlap_census(g, force)?;
    general_bounds_with_census(g, &census, n, w, model, cfg)
}

/// Same as `general_bounds` but reusing a precomputed census (grid sweeps).
pub fn general_bounds_with_census(
    g: &GraphSpec,
    census: &[OverlapClass],
    n: u64,
    w: f64,
    model: WeightModel,
    cfg: &PrecisionConfig,
) -> Result<BoundReport> {
    let m = g.edge_count();
    let ln_p = conv_ln_cdf(ConvolutionSpec::new(model, m), w, cfg);
    let ln_copies = super::ln_copy_count(g, n);
    let lambda = SignedLogReal::from_ln(ln_copies + ln_p);

    // b1: all dependent ordered pairs plus the diagonal (beta = alpha).
    let mut b1_terms: Vec<f64> = census
        .iter()
        .map(|c| c.ln_count_at(n) + 2.0 * ln_p)
        .collect();
    b1_terms.push(ln_copies + 2.0 * ln_p);
    let b1 = SignedLogReal::from_ln(log_sum_exp(&b1_terms));

    let mut quadrature_used = false;
    let mut b2_terms = Vec::with_capacity(census.len());
    let mut b2_failure = None;
    for class in census {
        quadrature_used |= pair_prob_needs_quadrature(model, w);
        match pair_prob_ln(model, class.shared_edges, class.unique_edges_beta, w, cfg) {
            Ok(ln_pair) => b2_terms.push(class.ln_count_at(n) + ln_pair),
            Err(e) => {
                b2_failure = Some(e);
                break;
            }
        }
    }
    let b2 = match b2_failure {
        None => Ok(SignedLogReal::from_ln(log_sum_exp(&b2_terms))),
        Some(e) => Err(e),
    };

    let z = w * ((g.vertex_count() as f64 / m as f64) * (n as f64).ln()).exp();
    Ok(assemble_report(
        w,
        z,
        ln_p.exp(),
        lambda,
        b1,
        b2,
        matches!(model, WeightModel::Uniform01 if w <= 1.0),
        quadrature_used,
        false,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgraphs::distinct_edge_patterns;

    /// Exhaustive oracle: enumerate all copies of H in K_n as edge sets and
    /// classify every ordered dependent pair by (ell, shared edges).
    fn exhaustive_pairs(g: &GraphSpec, n: u32) -> std::collections::BTreeMap<(u32, u32), u64> {
        let patterns = distinct_edge_patterns(g);
        let v = g.vertex_count();
        // All copies: choose a vertex subset, relabel each pattern onto it.
        let mut copies: Vec<Vec<(u32, u32)>> = Vec::new();
        let subsets = subsets_of_size(n, v);
        for s in &subsets {
            for pat in &patterns {
                let mut edges: Vec<(u32, u32)> = pat
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (s[a as usize], s[b as usize]);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                edges.sort_unstable();
                copies.push(edges);
            }
        }
        let vertex_set = |edges: &[(u32, u32)]| -> Vec<u32> {
            let mut vs: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let mut out = std::collections::BTreeMap::new();
        for (i, a) in copies.iter().enumerate() {
            let va = vertex_set(a);
            for (j, b) in copies.iter().enumerate() {
                if i == j {
                    continue;
                }
                let shared_edges = a.iter().filter(|e| b.contains(e)).count() as u32;
                if shared_edges == 0 {
                    continue;
                }
                let vb = vertex_set(b);
                let ell = va.iter().filter(|x| vb.contains(x)).count() as u32;
                *out.entry((ell, shared_edges)).or_insert(0u64) += 1;
            }
        }
        out
    }

    fn subsets_of_size(n: u32, k: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k as usize);
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
    fn triangle_census_single_class() {
        let k3 = GraphSpec::parse("K3", false).unwrap();
        let census = overlap_census(&k3, false).unwrap();
        assert_eq!(census.len(), 1);
        let c = &census[0];
        assert_eq!((c.ell, c.shared_edges), (2, 1));
        assert_eq!(c.unique_edges_beta, 2);
        // C(n,3) * 3(n-3) ordered pairs.
        for n in [4u64, 6, 10, 100] {
            let expect = n * (n - 1) * (n - 2) / 6 * 3 * (n - 3);
            assert_eq!(c.count_at(n), BigUint::from(expect));
        }
    }

    #[test]
    fn census_matches_exhaustive_enumeration() {
        for name in ["K3", "K4", "P3", "P4", "C4"] {
            let g = GraphSpec::parse(name, false).unwrap();
            let n = g.vertex_count() + 2;
            let oracle = exhaustive_pairs(&g, n);
            let census = overlap_census(&g, false).unwrap();
            let mut got = std::collections::BTreeMap::new();
            for c in &census {
                let count = c.count_at(n as u64).to_u64().unwrap();
                if count > 0 {
                    *got.entry((c.ell, c.shared_edges)).or_insert(0u64) += count;
                }
            }
            assert_eq!(got, oracle, "{name} census vs exhaustive at n={n}");
        }
    }

    /// For cliques the per-ell census totals must reproduce
    /// C(n,k) * u_ell = C(n,k) * C(k,ell) C(n-k, k-ell).
    #[test]
    fn clique_census_reproduces_shared_vertex_counts() {
        for k in [3u32, 4, 5] {
            let g = GraphSpec::clique(k, false).unwrap();
            let census = overlap_census(&g, false).unwrap();
            for c in &census {
                // Cliques have one class per ell.
                assert_eq!(c.shared_edges, c.ell * (c.ell - 1) / 2);
            }
            for n in [k as u64 + 3, 50] {
                for c in &census {
                    let ell = c.ell as u64;
                    let expect = binom(n, k as u64)
                        * binom(k as u64, ell)
                        * binom(n - k as u64, k as u64 - ell);
                    assert_eq!(c.count_at(n), BigUint::from(expect), "k={k} ell={ell}");
                }
            }
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u64 = 1;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    /// Brute-force oracle for the pair error term of the 4-cycle at n = 8:
    /// sum pair probabilities over every ordered dependent pair of copies.
    #[test]
    fn c4_b2_matches_exhaustive_double_sum() {
        use crate::numerics::PrecisionConfig;
        use crate::weights::{pair_prob_closed, WeightModel};
        let c4 = GraphSpec::parse("C4", false).unwrap();
        let (n, w) = (8u32, 0.2f64);
        let patterns = distinct_edge_patterns(&c4);
        let mut copies: Vec<Vec<(u32, u32)>> = Vec::new();
        for s in subsets_of_size(n, 4) {
            for pat in &patterns {
                let mut edges: Vec<(u32, u32)> = pat
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (s[a as usize], s[b as usize]);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                edges.sort_unstable();
                copies.push(edges);
            }
        }
        let m = c4.edge_count();
        let mut want = 0.0f64;
        for (i, a) in copies.iter().enumerate() {
            for (j, b) in copies.iter().enumerate() {
                if i == j {
                    continue;
                }
                let shared = a.iter().filter(|e| b.contains(e)).count() as u32;
                if shared >= 1 {
                    want += pair_prob_closed(shared, m - shared, w).unwrap();
                }
            }
        }
        let got = general_bounds(
            &c4,
            n as u64,
            w,
            WeightModel::Uniform01,
            &PrecisionConfig::default(),
            false,
        )
        .unwrap()
        .b2
        .to_real();
        assert!(
            ((got - want) / want).abs() <= 1e-12,
            "b2 {got:e} vs exhaustive {want:e}"
        );
    }

    /// The worked dependence example for the 2-path: of the three copies on
    /// an adjacent vertex triple, exactly two share an edge with a fixed
    /// copy, and the third is independent.
    #[test]
    fn p3_dependence_classification() {
        let alpha = vec![(9u32, 11u32), (11, 15)]; // path 9-11-15
        let triple = [11u32, 15, 18];
        let p3 = GraphSpec::parse("P3", false).unwrap();
        let copies: Vec<Vec<(u32, u32)>> = distinct_edge_patterns(&p3)
            .iter()
            .map(|pat| {
                let mut edges: Vec<(u32, u32)> = pat
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (triple[a as usize], triple[b as usize]);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                edges.sort_unstable();
                edges
            })
            .collect();
        assert_eq!(copies.len(), 3);
        let dependent = copies
            .iter()
            .filter(|beta| beta.iter().any(|e| alpha.contains(e)))
            .count();
        assert_eq!(dependent, 2, "path 15-18-11 shares no edge with 9-11-15");
    }

    #[test]
    fn census_guard() {
        let k8 = GraphSpec::clique(8, false).unwrap();
        assert!(overlap_census(&k8, false).is_err());
    }

    #[test]
    fn census_csv_round_trips_the_triangle() {
        let k3 = GraphSpec::parse("K3", false).unwrap();
        let census = overlap_census(&k3, false).unwrap();
        let csv = census_csv(&census);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "ell,shared_edges,unique_edges_alpha,unique_edges_beta,falling_order,coeff_num,coeff_den"
        );
        assert_eq!(lines.next().unwrap(), "2,1,2,2,4,18,36");
        assert!(lines.next().is_none());
    }

    #[test]
    fn path_census_includes_same_vertex_set_classes() {
        // Two different 2-paths on one triangle of vertices share one edge:
        // the ell = v classes the bound must not drop.
        let p3 = GraphSpec::parse("P3", false).unwrap();
        let census = overlap_census(&p3, false).unwrap();
        assert!(census.iter().any(|c| c.ell == 3 && c.shared_edges == 1));
        // Every class shares at least one edge.
        assert!(census.iter().all(|c| c.shared_edges >= 1));
    }
}
