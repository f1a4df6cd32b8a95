//! Randomized and enumerative cross-checks for the exact decision
//! procedures: ε-net density oracles on the circle and torus, brute-force
//! periodicity groups, and a definition-level minimality oracle.
//!
//! These guard the translation from dynamics to graph combinatorics; every
//! exact verdict in the library is testable against one of them.

use crate::angle::{AngleVector, ExactAngle};
use crate::graph::{enumerate_points, Graph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Parameters for the ε-net oracles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetParams {
    /// Coverage radius on the circle/torus.
    pub epsilon: f64,
    /// Sample budget for integer combinations of the generators.
    pub samples: usize,
    /// Tolerance for matching a sample to a predicted coset.
    pub coset_tolerance: f64,
}

impl Default for NetParams {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            samples: 10_000,
            coset_tolerance: 1e-9,
        }
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Whether the sample set is an ε-net of the circle: the largest circular
/// gap between consecutive samples is at most 2ε.
pub fn circle_cover_check(samples: &[f64], params: &NetParams) -> bool {
    if samples.is_empty() {
        return false;
    }
    let mut sorted: Vec<f64> = samples.iter().map(|v| v.rem_euclid(1.0)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap: f64 = 0.0;
    for w in sorted.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap = max_gap.max(1.0 - sorted.last().unwrap() + sorted.first().unwrap());
    max_gap <= 2.0 * params.epsilon
}

/// Integer-combination samples of circle generators, up to the budget.
pub fn circle_samples(gens: &[ExactAngle], params: &NetParams) -> Vec<f64> {
    let approx: Vec<f64> = gens.iter().map(ExactAngle::approx).collect();
    if approx.is_empty() {
        return vec![0.0];
    }
    let mut out = Vec::new();
    // Coefficient box sized to the budget.
    let per_axis = ((params.samples as f64).powf(1.0 / approx.len() as f64) / 2.0).floor() as i64;
    let bound = per_axis.max(1);
    let mut coeffs = vec![-bound; approx.len()];
    loop {
        let v: f64 = coeffs
            .iter()
            .zip(&approx)
            .map(|(&c, &g)| c as f64 * g)
            .sum::<f64>()
            .rem_euclid(1.0);
        out.push(v);
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] <= bound {
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// ε-net verdict for the subgroup of the circle generated by `gens`.
pub fn circle_net_dense(gens: &[ExactAngle], params: &NetParams) -> bool {
    circle_cover_check(&circle_samples(gens, params), params)
}

/// All sampled subgroup elements must lie within the tolerance of one of the
/// predicted cosets.
pub fn samples_in_cosets(samples: &[f64], cosets: &[f64], tolerance: f64) -> bool {
    samples
        .iter()
        .all(|s| cosets.iter().any(|c| circle_dist(*s, *c) <= tolerance))
}

/// Integer-combination samples on the torus.
pub fn torus_samples(gens: &[AngleVector], dim: usize, params: &NetParams) -> Vec<Vec<f64>> {
    if gens.is_empty() {
        return vec![vec![0.0; dim]];
    }
    let approx: Vec<Vec<f64>> = gens
        .iter()
        .map(|g| g.0.iter().map(ExactAngle::approx).collect())
        .collect();
    let per_axis = ((params.samples as f64).powf(1.0 / gens.len() as f64) / 2.0).floor() as i64;
    let bound = per_axis.max(1);
    let mut out = Vec::new();
    let mut coeffs = vec![-bound; gens.len()];
    loop {
        let mut v = vec![0.0; dim];
        for (c, g) in coeffs.iter().zip(&approx) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += *c as f64 * gi;
            }
        }
        for vi in &mut v {
            *vi = vi.rem_euclid(1.0);
        }
        out.push(v);
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] <= bound {
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Grid-occupancy ε-net check on the `dim`-torus: every cell of an ε-grid
/// contains a sample.
pub fn torus_cover_check(samples: &[Vec<f64>], dim: usize, params: &NetParams) -> bool {
    if dim == 0 {
        return !samples.is_empty();
    }
    let cells_per_axis = (1.0 / params.epsilon).ceil() as usize;
    let total = cells_per_axis.pow(dim as u32);
    let mut hit = vec![false; total];
    let mut count = 0usize;
    for s in samples {
        let mut idx = 0usize;
        for v in s.iter().take(dim) {
            let c = ((v.rem_euclid(1.0)) * cells_per_axis as f64).floor() as usize;
            idx = idx * cells_per_axis + c.min(cells_per_axis - 1);
        }
        if !hit[idx] {
            hit[idx] = true;
            count += 1;
            if count == total {
                return true;
            }
        }
    }
    false
}

pub fn torus_net_dense(gens: &[AngleVector], dim: usize, params: &NetParams) -> bool {
    torus_cover_check(&torus_samples(gens, dim, params), dim, params)
}

/// Brute-force periodicity displacements of a rank-1 graph system, by the
/// pointwise definition: `p` qualifies iff every enumerated eventually
/// periodic point `x` satisfies `T^{n+p} x = T^n x` for some `n`.
pub fn brute_force_p_t(graph: &Graph, point_bound: usize, p_max: i64) -> BTreeSet<i64> {
    let points = enumerate_points(graph, point_bound, point_bound);
    let mut out = BTreeSet::new();
    'next_p: for p in -p_max..=p_max {
        for x in &points {
            let start = 0.max(-p) as usize;
            let horizon = x.prefix().len() + x.period() + p.unsigned_abs() as usize + 1;
            let ok = (start..=start + horizon)
                .any(|n| x.shift((n as i64 + p) as usize) == x.shift(n));
            if !ok {
                continue 'next_p;
            }
        }
        out.insert(p);
    }
    out
}

/// Definition-level minimality oracle: for every enumerated point `x` and
/// every cylinder word of length at most `depth`, the orbit of `x` enters
/// the cylinder, i.e. the cylinder's origin vertex is reachable from some
/// vertex visited by `x`.
pub fn minimality_oracle(graph: &Graph, point_bound: usize, depth: usize) -> bool {
    let points = enumerate_points(graph, point_bound, point_bound);
    // Distinct origins of words up to the requested depth: every vertex
    // carries the empty word, and longer words only repeat vertices, so the
    // origin set is all vertices for any depth.
    let _ = depth;
    let origins: Vec<usize> = (0..graph.vertex_count()).collect();
    for x in &points {
        let mut visited = BTreeSet::new();
        for n in 0..=(x.prefix().len() + x.period()) {
            visited.insert(graph.edge(x.edge_at(n)).terminus);
        }
        let mut reach = BTreeSet::new();
        for &v in &visited {
            reach.extend(graph.reachable_from(v));
        }
        for &v in &origins {
            if !reach.contains(&v) {
                return false;
            }
        }
    }
    true
}
