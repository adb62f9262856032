//! Exact minimum-weight clique and subgraph search on sampled weight
//! matrices.  Built for the Monte-Carlo validation scale, not for large
//! combinatorial benchmarks.

use crate::error::{Error, Result};
use crate::subgraphs::GraphSpec;

/// Guard on the host order for the generic subgraph solver.
pub const MAX_SUBGRAPH_HOST: usize = 60;

/// Symmetric nonnegative edge weights on the complete graph K_n.
#[derive(Clone, Debug)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
    /// Provenance of the sample that produced this matrix.
    pub seed: u64,
}

impl WeightMatrix {
    /// Build from a generator called once per unordered pair i < j.
    pub fn from_fn(n: usize, seed: u64, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut wm = Self {
            n,
            w: vec![0.0; n * n],
            seed,
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let x = f(i, j);
                if !(x >= 0.0 && x.is_finite()) {
                    return Err(Error::Domain(format!(
                        "edge weight w({i},{j}) = {x} is not a finite nonnegative value"
                    )));
                }
                wm.w[i * n + j] = x;
                wm.w[j * n + i] = x;
            }
        }
        Ok(wm)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// Upper-triangle CSV dump (row, col, weight).
    pub fn to_upper_triangle_csv(&self) -> String {
        let mut out = String::from("i,j,weight\n");
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push_str(&format!("{i},{j},{:.17e}\n", self.get(i, j)));
            }
        }
        out
    }
}

/// An exact optimum together with its witness.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SolveResult {
    /// Minimum total weight, recomputed from the matrix over `vertices`.
    pub weight: f64,
    /// Sorted vertex set attaining it (lexicographically smallest on ties).
    pub vertices: Vec<u32>,
    pub nodes_explored: u64,
}

/// Exact minimum-weight k-clique by branch and bound (dedicated scan path
/// for triangles).
pub fn min_weight_clique(wm: &WeightMatrix, k: u32) -> Result<SolveResult> {
    let n = wm.order();
    if k < 3 {
        return Err(Error::Domain(format!("clique size must be >= 3, got {k}")));
    }
    if (k as usize) > n {
        return Err(Error::Domain(format!(
            "clique size k={k} exceeds host order n={n}"
        )));
    }
    let mut result = if k == 3 {
        min_triangle(wm)
    } else {
        branch_and_bound(wm, k as usize)
    };
    // Recompute the weight from the matrix: the invariant callers rely on.
    result.weight = clique_weight(wm, &result.vertices);
    Ok(result)
}

fn clique_weight(wm: &WeightMatrix, vertices: &[u32]) -> f64 {
    let mut total = 0.0;
    for (idx, &a) in vertices.iter().enumerate() {
        for &b in &vertices[idx + 1..] {
            total += wm.get(a as usize, b as usize);
        }
    }
    total
}

/// Triangle fast path: edges in ascending weight order; every triangle is
/// inspected through its first processed edge, and an edge at least as heavy
/// as the incumbent total cannot start a strictly better triangle.  Ties are
/// kept alive (`>` not `>=`) so the lexicographic tie-break stays exact on
/// constructed instances.
fn min_triangle(wm: &WeightMatrix) -> SolveResult {
    let n = wm.order();
    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((wm.get(i, j), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = f64::INFINITY;
    let mut best_set: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    for &(wij, i, j) in &edges {
        if wij > best {
            break;
        }
        for x in 0..n as u32 {
            if x == i || x == j {
                continue;
            }
            nodes += 1;
            let total = wij + wm.get(i as usize, x as usize) + wm.get(j as usize, x as usize);
            let mut set = [i, j, x];
            set.sort_unstable();
            if total < best || (total == best && set.as_slice() < best_set.as_slice()) {
                best = total;
                best_set = set.to_vec();
            }
        }
    }
    SolveResult {
        weight: best,
        vertices: best_set,
        nodes_explored: nodes,
    }
}

/// Depth-first branch and bound over vertices sorted by ascending minimum
/// incident weight.  The bound adds (edges still needed) times the global
/// minimum edge weight, which is admissible; pruning is strict so ties
/// survive to the lexicographic comparison.
fn branch_and_bound(wm: &WeightMatrix, k: usize) -> SolveResult {
    let n = wm.order();
    let mut min_incident = vec![f64::INFINITY; n];
    let mut min_edge = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                min_incident[i] = min_incident[i].min(wm.get(i, j));
            }
        }
        min_edge = min_edge.min(min_incident[i]);
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        min_incident[a as usize]
            .partial_cmp(&min_incident[b as usize])
            .unwrap()
            .then(a.cmp(&b))
    });

    struct State<'a> {
        wm: &'a WeightMatrix,
        order: Vec<u32>,
        k: usize,
        min_edge: f64,
        best: f64,
        best_set: Vec<u32>,
        clique: Vec<u32>,
        nodes: u64,
    }

    fn descend(s: &mut State, pos: usize, partial: f64) {
        s.nodes += 1;
        if s.clique.len() == s.k {
            let mut set = s.clique.clone();
            set.sort_unstable();
            if partial < s.best || (partial == s.best && set < s.best_set) {
                s.best = partial;
                s.best_set = set;
            }
            return;
        }
        let remaining = s.k - s.clique.len();
        for idx in pos..=s.order.len().saturating_sub(remaining) {
            let v = s.order[idx];
            let add: f64 = s
                .clique
                .iter()
                .map(|&u| s.wm.get(u as usize, v as usize))
                .sum();
            let new_partial = partial + add;
            // Edges still to be added once v joins: all pairs among the
            // remaining - 1 future vertices plus their links to the clique.
            let future = remaining - 1;
            let edges_needed =
                future * future.saturating_sub(1) / 2 + future * (s.clique.len() + 1);
            let bound = new_partial + edges_needed as f64 * s.min_edge;
            if bound > s.best {
                continue;
            }
            s.clique.push(v);
            descend(s, idx + 1, new_partial);
            s.clique.pop();
        }
    }

    let mut state = State {
        wm,
        order,
        k,
        min_edge,
        best: f64::INFINITY,
        best_set: Vec::new(),
        clique: Vec::new(),
        nodes: 0,
    };
    descend(&mut state, 0, 0.0);
    SolveResult {
        weight: state.best,
        vertices: state.best_set,
        nodes_explored: state.nodes,
    }
}

/// Exact minimum-weight copy of an arbitrary pattern graph: enumerate vertex
/// subsets and, on each, one labeled copy per automorphism coset.
pub fn min_weight_subgraph(wm: &WeightMatrix, g: &GraphSpec, force: bool) -> Result<SolveResult> {
    let n = wm.order();
    let v = g.vertex_count() as usize;
    if v > n {
        return Err(Error::Domain(format!(
            "pattern order {v} exceeds host order {n}"
        )));
    }
    if n > MAX_SUBGRAPH_HOST && !force {
        return Err(Error::Guard {
            what: "subgraph host order",
            limit: MAX_SUBGRAPH_HOST as u64,
            actual: n as u64,
        });
    }
    let patterns = crate::subgraphs::distinct_edge_patterns(g);
    let mut best = f64::INFINITY;
    let mut best_set: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    let mut subset: Vec<u32> = Vec::with_capacity(v);
    fn rec(
        start: u32,
        n: u32,
        v: usize,
        wm: &WeightMatrix,
        patterns: &[Vec<(u32, u32)>],
        subset: &mut Vec<u32>,
        best: &mut f64,
        best_set: &mut Vec<u32>,
        nodes: &mut u64,
    ) {
        if subset.len() == v {
            for pat in patterns {
                *nodes += 1;
                let total: f64 = pat
                    .iter()
                    .map(|&(a, b)| wm.get(subset[a as usize] as usize, subset[b as usize] as usize))
                    .sum();
                if total < *best || (total == *best && subset.as_slice() < best_set.as_slice()) {
                    *best = total;
                    *best_set = subset.clone();
                }
            }
            return;
        }
        for x in start..n {
            subset.push(x);
            rec(x + 1, n, v, wm, patterns, subset, best, best_set, nodes);
            subset.pop();
        }
    }
    rec(
        0,
        n as u32,
        v,
        wm,
        &patterns,
        &mut subset,
        &mut best,
        &mut best_set,
        &mut nodes,
    );
    // The reported weight is the best over patterns on the winning vertex
    // set; recompute it for the invariant.
    let weight = patterns
        .iter()
        .map(|pat| {
            pat.iter()
                .map(|&(a, b)| wm.get(best_set[a as usize] as usize, best_set[b as usize] as usize))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(SolveResult {
        weight,
        vertices: best_set,
        nodes_explored: nodes,
    })
}
