//! Fixed subgraphs H: parsing, automorphism counting, density and strict
//! balance, the overlap density d', asymptotic CDF/mean, and the expected
//! copy count for general H.

mod census;

pub use census::{
    census_csv, general_bounds, general_bounds_with_census, overlap_census, OverlapClass,
};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, ln_gamma, log_binomial, PrecisionConfig, SignedLogReal};
use crate::weights::{conv_ln_cdf, ConvolutionSpec, WeightModel};

/// Default guard on the order of a parsed graph.
pub const MAX_PARSE_VERTICES: u32 = 10;
/// Default guard for the overlap-density pair enumeration.
pub const MAX_OVERLAP_VERTICES: u32 = 8;
/// Default guard for the full overlap census.
pub const MAX_CENSUS_VERTICES: u32 = 7;

pub(crate) fn check_guard(what: &'static str, actual: u32, limit: u32, force: bool) -> Result<()> {
    if actual > limit && !force {
        return Err(Error::Guard {
            what,
            limit: limit as u64,
            actual: actual as u64,
        });
    }
    Ok(())
}

/// A small simple graph with the derived quantities the bound machinery
/// needs.  Vertices are 0..v-1 and every vertex has degree >= 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    v: u32,
    edges: Vec<(u32, u32)>,
    density: Ratio<u64>,
    aut_count: u64,
    strictly_balanced: bool,
    /// Minimum density over unions of two distinct overlapping copies;
    /// computed eagerly when v is within the enumeration guard.
    overlap_density: Option<Ratio<u64>>,
}

impl GraphSpec {
    /// Build and canonicalize from an explicit edge list.
    pub fn new(v: u32, edges: &[(u32, u32)], force: bool) -> Result<Self> {
        check_guard("graph vertices", v, MAX_PARSE_VERTICES, force)?;
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if a >= v || b >= v {
                return Err(Error::GraphSyntax(format!(
                    "edge {a}-{b} references a vertex >= {v}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        for pair in canon.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateEdge(pair[0].0, pair[0].1));
            }
        }
        if v < 2 {
            return Err(Error::GraphSyntax(format!(
                "a graph needs at least 2 vertices, got {v}"
            )));
        }
        let mut degree = vec![0u32; v as usize];
        for &(a, b) in &canon {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        if let Some(iso) = degree.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex(iso as u32));
        }
        let m = canon.len() as u32;
        let aut_count = count_automorphisms_impl(v, &canon);
        let strictly_balanced = strictly_balanced_impl(v, &canon);
        let overlap_density = if v <= MAX_OVERLAP_VERTICES {
            Some(overlap_density_impl(v, &canon))
        } else {
            None
        };
        Ok(Self {
            v,
            edges: canon,
            density: Ratio::new(m as u64, v as u64),
            aut_count,
            strictly_balanced,
            overlap_density,
        })
    }

    /// Parse an edge list ("u v" pairs, 0-based) or a preset `K<k>`, `C<v>`,
    /// `P<v>`.
    pub fn parse(text: &str, force: bool) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::GraphSyntax("empty graph text".into()));
        }
        if let Some(preset) = Self::try_preset(t, force)? {
            return Ok(preset);
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if !tokens.len().is_multiple_of(2) {
            return Err(Error::GraphSyntax(format!(
                "odd number of vertex tokens ({})",
                tokens.len()
            )));
        }
        let mut edges = Vec::with_capacity(tokens.len() / 2);
        let mut max_v = 0;
        for pair in tokens.chunks(2) {
            let a: u32 = pair[0]
                .parse()
                .map_err(|_| Error::GraphSyntax(format!("bad vertex token {:?}", pair[0])))?;
            let b: u32 = pair[1]
                .parse()
                .map_err(|_| Error::GraphSyntax(format!("bad vertex token {:?}", pair[1])))?;
            max_v = max_v.max(a).max(b);
            edges.push((a, b));
        }
        Self::new(max_v + 1, &edges, force)
    }

    fn try_preset(t: &str, force: bool) -> Result<Option<Self>> {
        let (kind, rest) = match t.split_at_checked(1) {
            Some(split) => split,
            None => return Ok(None),
        };
        if !matches!(kind, "K" | "C" | "P") || rest.is_empty() {
            return Ok(None);
        }
        let Ok(size) = rest.parse::<u32>() else {
            return Ok(None);
        };
        let g = match kind {
            "K" => Self::clique(size, force)?,
            "C" => Self::cycle(size, force)?,
            _ => Self::path(size, force)?,
        };
        Ok(Some(g))
    }

    /// Complete graph on k vertices.
    pub fn clique(k: u32, force: bool) -> Result<Self> {
        if k < 2 {
            return Err(Error::GraphSyntax(format!(
                "K{k} is not a graph with edges"
            )));
        }
        let mut edges = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((i, j));
            }
        }
        Self::new(k, &edges, force)
    }

    /// Cycle on v vertices.
    pub fn cycle(v: u32, force: bool) -> Result<Self> {
        if v < 3 {
            return Err(Error::GraphSyntax(format!(
                "C{v} needs at least 3 vertices"
            )));
        }
        let edges: Vec<_> = (0..v).map(|i| (i, (i + 1) % v)).collect();
        Self::new(v, &edges, force)
    }

    /// Path with v vertices (v - 1 edges).
    pub fn path(v: u32, force: bool) -> Result<Self> {
        if v < 2 {
            return Err(Error::GraphSyntax(format!(
                "P{v} needs at least 2 vertices"
            )));
        }
        let edges: Vec<_> = (0..v - 1).map(|i| (i, i + 1)).collect();
        Self::new(v, &edges, force)
    }

    pub fn vertex_count(&self) -> u32 {
        self.v
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Density m/v as an exact rational.
    pub fn density(&self) -> Ratio<u64> {
        self.density
    }

    pub fn automorphism_count(&self) -> u64 {
        self.aut_count
    }

    pub fn is_strictly_balanced(&self) -> bool {
        self.strictly_balanced
    }

    /// d': minimum density over unions of two distinct overlapping copies.
    /// `None` when v exceeded the construction-time enumeration guard.
    pub fn overlap_density(&self) -> Option<Ratio<u64>> {
        self.overlap_density
    }

    /// Number of labeled copies per vertex set, v!/aut.
    pub fn copies_per_vertex_set(&self) -> u64 {
        factorial_u64(self.v as u64) / self.aut_count
    }

    /// True when this is the complete graph on its vertices.
    pub fn is_clique(&self) -> bool {
        self.edges.len() as u32 == self.v * (self.v - 1) / 2
    }
}

fn factorial_u64(n: u64) -> u64 {
    (2..=n).product::<u64>().max(1)
}

/// Exact automorphism count by backtracking over degree-compatible vertex
/// bijections.
pub fn count_automorphisms(g: &GraphSpec) -> u64 {
    count_automorphisms_impl(g.v, &g.edges)
}

fn count_automorphisms_impl(v: u32, edges: &[(u32, u32)]) -> u64 {
    let n = v as usize;
    let mut adj = vec![0u16; n];
    for &(a, b) in edges {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    let degree: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn descend(
        level: usize,
        n: usize,
        adj: &[u16],
        degree: &[u32],
        perm: &mut [usize],
        used: &mut [bool],
    ) -> u64 {
        if level == n {
            return 1;
        }
        let mut count = 0;
        for cand in 0..n {
            if used[cand] || degree[cand] != degree[level] {
                continue;
            }
            let consistent = (0..level).all(|prev| {
                let had_edge = adj[level] & (1 << prev) != 0;
                let has_edge = adj[perm[prev]] & (1 << cand) != 0;
                had_edge == has_edge
            });
            if consistent {
                perm[level] = cand;
                used[cand] = true;
                count += descend(level + 1, n, adj, degree, perm, used);
                used[cand] = false;
            }
        }
        count
    }
    descend(0, n, &adj, &degree, &mut perm, &mut used)
}

/// Strict balance: every strict subgraph has strictly smaller density.
///
/// Reduced to induced subgraphs on proper vertex subsets: for a fixed vertex
/// set the induced subgraph maximizes density, and dropping edges on the
/// full vertex set can only lower it, so those cases need no enumeration.
/// The unit tests compare against a raw scan over all strict subgraphs.
pub fn is_strictly_balanced(g: &GraphSpec) -> bool {
    g.strictly_balanced
}

fn strictly_balanced_impl(v: u32, edges: &[(u32, u32)]) -> bool {
    let d = Ratio::new(edges.len() as u64, v as u64);
    for subset in 1u32..(1 << v) - 1 {
        let size = subset.count_ones();
        if size < 2 {
            continue;
        }
        let induced = edges
            .iter()
            .filter(|&&(a, b)| subset & (1 << a) != 0 && subset & (1 << b) != 0)
            .count() as u64;
        if Ratio::new(induced, size as u64) >= d {
            return false;
        }
    }
    true
}

/// d'(H): minimum density of the union of two distinct overlapping labeled
/// copies.  Enumerates the second copy's embedding with the first copy fixed
/// canonically; fresh vertices are interchangeable so one canonical
/// assignment per overlap pattern suffices.
pub fn overlap_density(g: &GraphSpec, force: bool) -> Result<Ratio<u64>> {
    check_guard("overlap-density vertices", g.v, MAX_OVERLAP_VERTICES, force)?;
    Ok(overlap_density_impl(g.v, &g.edges))
}

/// Visit every overlap pattern of a second copy against the canonical first
/// copy: `phi` maps H-vertices either into 0..v (shared side) or to fresh
/// labels v, v+1, ...; the callback receives (shared vertex count, image
/// edge set as sorted pairs).
pub(crate) fn for_each_overlap_pattern(
    v: u32,
    edges: &[(u32, u32)],
    mut visit: impl FnMut(u32, &[(u32, u32)]),
) {
    let n = v as usize;
    // phi[i] = image of H-vertex i, in 0..2v.
    let mut phi = vec![usize::MAX; n];
    let mut used_base = vec![false; n];
    let mut image = Vec::with_capacity(edges.len());

    fn descend(
        i: usize,
        n: usize,
        fresh_next: usize,
        shared: u32,
        phi: &mut [usize],
        used_base: &mut [bool],
        edges: &[(u32, u32)],
        image: &mut Vec<(u32, u32)>,
        visit: &mut impl FnMut(u32, &[(u32, u32)]),
    ) {
        if i == n {
            image.clear();
            for &(a, b) in edges {
                let (x, y) = (phi[a as usize] as u32, phi[b as usize] as u32);
                image.push((x.min(y), x.max(y)));
            }
            image.sort_unstable();
            visit(shared, image);
            return;
        }
        // Map vertex i onto a base vertex...
        for cand in 0..n {
            if !used_base[cand] {
                used_base[cand] = true;
                phi[i] = cand;
                descend(
                    i + 1,
                    n,
                    fresh_next,
                    shared + 1,
                    phi,
                    used_base,
                    edges,
                    image,
                    visit,
                );
                used_base[cand] = false;
            }
        }
        // ... or onto the next fresh label (fresh labels are symmetric, so
        // assigning them in vertex order loses nothing).
        phi[i] = n + fresh_next;
        descend(
            i + 1,
            n,
            fresh_next + 1,
            shared,
            phi,
            used_base,
            edges,
            image,
            visit,
        );
        phi[i] = usize::MAX;
    }

    descend(
        0,
        n,
        0,
        0,
        &mut phi,
        &mut used_base,
        edges,
        &mut image,
        &mut visit,
    );
}

fn overlap_density_impl(v: u32, edges: &[(u32, u32)]) -> Ratio<u64> {
    let m = edges.len();
    let mut best: Option<Ratio<u64>> = None;
    for_each_overlap_pattern(v, edges, |shared_vertices, image| {
        let shared_edges = count_common(edges, image);
        // Dependent pair: at least one shared edge; distinct as indices:
        // identical edge image would be the same copy.
        if shared_edges == 0 || image == edges {
            return;
        }
        let union_vertices = (2 * v - shared_vertices) as u64;
        let union_edges = (2 * m - shared_edges as usize) as u64;
        let den = Ratio::new(union_edges, union_vertices);
        best = Some(match best {
            Some(b) if b <= den => b,
            _ => den,
        });
    });
    best.expect("every graph with an edge has overlapping copy pairs")
}

pub(crate) fn count_common(sorted_a: &[(u32, u32)], sorted_b: &[(u32, u32)]) -> u32 {
    let mut i = 0;
    let mut j = 0;
    let mut common = 0;
    while i < sorted_a.len() && j < sorted_b.len() {
        match sorted_a[i].cmp(&sorted_b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common
}

/// Expected number of copies of H with weight <= w:
/// `lambda = C(n, v) * (v!/aut) * P(sum of m edges <= w)`.
pub fn lambda_general(
    g: &GraphSpec,
    n: u64,
    w: f64,
    model: WeightModel,
    cfg: &PrecisionConfig,
) -> Result<SignedLogReal> {
    if n < g.v as u64 {
        return Err(Error::Domain(format!(
            "host order n={n} is smaller than v={}",
            g.v
        )));
    }
    if w < 0.0 {
        return Err(Error::Domain(format!("lambda requires w >= 0, got {w}")));
    }
    if w > model.closed_form_max() {
        return Err(Error::Domain(format!(
            "lambda_general requires w <= {} for {model}, got {w}",
            model.closed_form_max()
        )));
    }
    Ok(lambda_general_unchecked(g, n, w, model, cfg))
}

pub(crate) fn lambda_general_unchecked(
    g: &GraphSpec,
    n: u64,
    w: f64,
    model: WeightModel,
    cfg: &PrecisionConfig,
) -> SignedLogReal {
    let ln_copies = ln_copy_count(g, n);
    let ln_p = conv_ln_cdf(ConvolutionSpec::new(model, g.edge_count()), w, cfg);
    SignedLogReal::from_ln(ln_copies + ln_p)
}

/// ln of the number of copies of H in K_n: C(n, v) * v!/aut.
pub(crate) fn ln_copy_count(g: &GraphSpec, n: u64) -> f64 {
    log_binomial(n, g.v as u64).expect("n >= v checked by callers")
        + (g.copies_per_vertex_set() as f64).ln()
}

/// One point of the asymptotic law for strictly balanced H.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct AsymptoticPoint {
    /// Scaled weight z.
    pub z: f64,
    /// Corresponding raw weight w = z * n^(-1/d).
    pub w: f64,
    /// Poisson surrogate mean z^m / (m! * aut).
    pub lambda_prime: f64,
    /// P(W >= w) estimate exp(-lambda').
    pub survival: f64,
    /// P(W < w) estimate 1 - exp(-lambda').
    pub cdf: f64,
}

/// Asymptotic survival/CDF at scaled weight z: `exp(-z^m / (m! aut))`.
pub fn asymptotic_point(g: &GraphSpec, n: u64, z: f64) -> Result<AsymptoticPoint> {
    require_strictly_balanced(g)?;
    if z < 0.0 {
        return Err(Error::Domain(format!("z must be nonnegative, got {z}")));
    }
    let m = g.edge_count() as f64;
    let ln_lambda = if z == 0.0 {
        f64::NEG_INFINITY
    } else {
        m * z.ln() - ln_gamma(m + 1.0) - (g.aut_count as f64).ln()
    };
    let lambda_prime = ln_lambda.exp();
    let survival = (-lambda_prime).exp();
    Ok(AsymptoticPoint {
        z,
        w: z * scale_factor(g, n),
        lambda_prime,
        survival,
        cdf: -(-lambda_prime).exp_m1(),
    })
}

/// n^(-1/d) with d = m/v, evaluated in logs.
pub fn scale_factor(g: &GraphSpec, n: u64) -> f64 {
    (-(g.v as f64) / g.edge_count() as f64 * (n as f64).ln()).exp()
}

/// Asymptotic mean of the minimum copy weight:
/// `n^(-1/d) * (m! * aut)^(1/m) / m * Gamma(1/m)`.
pub fn asymptotic_mean(g: &GraphSpec, n: u64) -> Result<f64> {
    require_strictly_balanced(g)?;
    let m = g.edge_count() as f64;
    let ln_const =
        (ln_gamma(m + 1.0) + (g.aut_count as f64).ln()) / m - m.ln() + gamma_fn(1.0 / m)?.ln();
    Ok(scale_factor(g, n) * ln_const.exp())
}

fn require_strictly_balanced(g: &GraphSpec) -> Result<()> {
    if !g.strictly_balanced {
        return Err(Error::Hypothesis(
            "the asymptotic law requires a strictly balanced graph".into(),
        ));
    }
    Ok(())
}

/// Distinct labeled copies of H on the fixed vertex set 0..v-1, one edge
/// pattern per automorphism coset.  Used by the exact subgraph solver and
/// the census oracles.
pub(crate) fn distinct_edge_patterns(g: &GraphSpec) -> Vec<Vec<(u32, u32)>> {
    let v = g.v as usize;
    let mut perm: Vec<u32> = (0..v as u32).collect();
    let mut patterns: Vec<Vec<(u32, u32)>> = Vec::new();
    permute(&mut perm, 0, &mut |p| {
        let mut image: Vec<(u32, u32)> = g
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (p[a as usize], p[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        image.sort_unstable();
        if !patterns.contains(&image) {
            patterns.push(image);
        }
    });
    patterns.sort();
    patterns
}

fn permute(arr: &mut [u32], i: usize, visit: &mut impl FnMut(&[u32])) {
    if i == arr.len() {
        visit(arr);
        return;
    }
    for j in i..arr.len() {
        arr.swap(i, j);
        permute(arr, i + 1, visit);
        arr.swap(i, j);
    }
}
