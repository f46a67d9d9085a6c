//! Finite-power Shannon-capacity probes.
//!
//! The capacity of a graph is `lim_r α(G^⊠r)^(1/r)` over strong powers; no
//! finite computation reaches the limit, but every computed power gives a
//! valid lower estimate because `α` is supermultiplicative under the strong
//! product. This module builds the powers, computes exact independence
//! numbers via the complement clique search, and reports the best finite
//! root. Witness colorings connect in through [`color_class`]: a color class
//! of a valid `(k+1, ..., k+1)` witness has clique number at most `k`, and
//! its complement's independence number is what the capacity machinery sees.

use thiserror::Error;

use crate::coloring::{ColoringError, EdgeColoring};
use crate::graph::Graph;

/// Powers stop here by default: exact independence search beyond a few
/// thousand vertices stops being interactive.
pub const VERTEX_BUDGET: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error("power {r} has {vertices} vertices, over the budget of {budget}")]
    BudgetExceeded { r: usize, vertices: usize, budget: usize },
    #[error("power count must be at least 1")]
    ZeroPower,
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// The subgraph of one color of an edge coloring, on the same vertex set.
pub fn color_class(c: &EdgeColoring, color: u16) -> Result<Graph, CapacityError> {
    Ok(c.class_graph(color)?)
}

/// Strong product: `(u1, v1) ~ (u2, v2)` iff each coordinate is equal or
/// adjacent and the pairs differ. Vertex `(u, v)` gets index `u * h.n() + v`.
pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    let (gn, hn) = (g.n(), h.n());
    let mut out = Graph::empty(gn * hn);
    for u1 in 0..gn {
        for v1 in 0..hn {
            let a = u1 * hn + v1;
            for u2 in u1..gn {
                let u_ok = u1 == u2 || g.has_edge(u1, u2);
                if !u_ok {
                    continue;
                }
                for v2 in 0..hn {
                    let b = u2 * hn + v2;
                    if b <= a {
                        continue;
                    }
                    if v1 == v2 || h.has_edge(v1, v2) {
                        out.add_edge(a, b);
                    }
                }
            }
        }
    }
    out
}

/// Exact independence number; alias for the graph-side search so capacity
/// callers need only this module.
pub fn independence_number(g: &Graph) -> usize {
    g.independence_number()
}

/// One computed strong power.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PowerRow {
    pub r: usize,
    pub vertices: usize,
    pub alpha: usize,
    /// `alpha^(1/r)`.
    pub root: f64,
}

/// Result of [`capacity_lower`]: every computed power plus the best root.
#[derive(Clone, PartialEq, Debug)]
pub struct CapacityEstimate {
    pub rows: Vec<PowerRow>,
    pub best_r: usize,
    /// `max_r α(G^⊠r)^(1/r)`; a lower bound on the Shannon capacity.
    pub best_root: f64,
}

/// Compute `α(G^⊠r)^(1/r)` for `r = 1..=r_max` and return the maximum.
/// Errors without computing anything when the largest power would exceed
/// [`VERTEX_BUDGET`] vertices, so partial output never masquerades as the
/// requested estimate.
pub fn capacity_lower(g: &Graph, r_max: usize) -> Result<CapacityEstimate, CapacityError> {
    if r_max == 0 {
        return Err(CapacityError::ZeroPower);
    }
    let final_size = g.n().checked_pow(r_max as u32);
    match final_size {
        Some(v) if v <= VERTEX_BUDGET => {}
        _ => {
            return Err(CapacityError::BudgetExceeded {
                r: r_max,
                vertices: final_size.unwrap_or(usize::MAX),
                budget: VERTEX_BUDGET,
            })
        }
    }
    let mut rows = Vec::with_capacity(r_max);
    let mut power = g.clone();
    for r in 1..=r_max {
        if r > 1 {
            power = strong_product(&power, g);
        }
        let alpha = power.independence_number();
        let root = (alpha as f64).powf(1.0 / r as f64);
        rows.push(PowerRow { r, vertices: power.n(), alpha, root });
    }
    let best = rows
        .iter()
        .max_by(|a, b| a.root.total_cmp(&b.root))
        .expect("r_max >= 1");
    Ok(CapacityEstimate { rows: rows.clone(), best_r: best.r, best_root: best.root })
}
