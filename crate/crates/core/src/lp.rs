//! Fractional matchings and covers by exact rational simplex.
//!
//! The fractional matching LP `max sum f(e)` subject to `sum_{e ∋ v} f(e) <= 1`
//! is solved once with Bland's rule; the optimal fractional cover is read off
//! the final tableau as the dual solution. Both are re-checked for
//! feasibility without looking at the tableau.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::GenericHypergraph;
use crate::rational::{self, one, zero, Rational};
use crate::solvers::{covering_number, matching_number, Cover, Matching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("objectives differ ({matching} vs {cover}); not a certified optimal pair")]
    UnequalObjectives { matching: String, cover: String },
    #[error("weights have length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("infeasible {0}")]
    Infeasible(String),
    #[error("chain nu <= nu* = tau* <= tau violated: {0}")]
    ChainViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FractionalKind {
    Matching,
    Cover,
}

/// Weights per edge (matching) or per vertex (cover).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalSolution {
    pub kind: FractionalKind,
    #[serde(serialize_with = "rational::vec::serialize")]
    pub weights: Vec<Rational>,
    #[serde(serialize_with = "rational::serialize")]
    pub objective: Rational,
}

impl FractionalSolution {
    fn new(kind: FractionalKind, weights: Vec<Rational>) -> Self {
        let objective = weights.iter().fold(zero(), |acc, w| acc + w);
        FractionalSolution {
            kind,
            weights,
            objective,
        }
    }

    /// Check the defining constraints directly against the hypergraph.
    pub fn check_feasible(&self, h: &GenericHypergraph) -> Result<(), LpError> {
        let expected = match self.kind {
            FractionalKind::Matching => h.num_edges(),
            FractionalKind::Cover => h.num_vertices(),
        };
        if self.weights.len() != expected {
            return Err(LpError::WrongLength {
                got: self.weights.len(),
                expected,
            });
        }
        if let Some(i) = self.weights.iter().position(|w| w.is_negative()) {
            return Err(LpError::Infeasible(format!("negative weight at {i}")));
        }
        let total = self.weights.iter().fold(zero(), |acc, w| acc + w);
        if total != self.objective {
            return Err(LpError::Infeasible(
                "objective is not the weight sum".into(),
            ));
        }
        match self.kind {
            FractionalKind::Matching => {
                for v in 0..h.num_vertices() {
                    let load = vertex_load(h, &self.weights, v);
                    if load > one() {
                        return Err(LpError::Infeasible(format!(
                            "matching overloads vertex {v} ({})",
                            rational::format(&load)
                        )));
                    }
                }
            }
            FractionalKind::Cover => {
                for (e, edge) in h.edges().iter().enumerate() {
                    let mass = edge.iter().fold(zero(), |acc, &v| acc + &self.weights[v]);
                    if mass < one() {
                        return Err(LpError::Infeasible(format!(
                            "cover gives edge {e} only {}",
                            rational::format(&mass)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn vertex_load(h: &GenericHypergraph, f: &[Rational], v: usize) -> Rational {
    h.incident_edges(v)
        .iter()
        .fold(zero(), |acc, &e| acc + &f[e])
}

/// Optimal fractional matching and cover from a single solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalPair {
    pub matching: FractionalSolution,
    pub cover: FractionalSolution,
}

pub fn solve_fractional(h: &GenericHypergraph) -> FractionalPair {
    let (rows, row_vertex) = constraint_rows(h);
    let (primal, dual) = simplex_packing(h.num_edges(), &rows);
    let mut g = vec![zero(); h.num_vertices()];
    for (i, y) in dual.into_iter().enumerate() {
        g[row_vertex[i]] = y;
    }
    let pair = FractionalPair {
        matching: FractionalSolution::new(FractionalKind::Matching, primal),
        cover: FractionalSolution::new(FractionalKind::Cover, g),
    };
    debug_assert!(pair.matching.check_feasible(h).is_ok());
    debug_assert!(pair.cover.check_feasible(h).is_ok());
    pair
}

pub fn fractional_matching(h: &GenericHypergraph) -> FractionalSolution {
    solve_fractional(h).matching
}

pub fn fractional_cover(h: &GenericHypergraph) -> FractionalSolution {
    solve_fractional(h).cover
}

/// Vertex rows of the packing LP, dropping rows implied by others: a
/// degree-one vertex is redundant next to a higher-degree vertex of its
/// edge, and duplicate rows are kept once.
fn constraint_rows(h: &GenericHypergraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut row_vertex = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 0..h.num_vertices() {
        let inc = h.incident_edges(v);
        let keep = match inc {
            [] => false,
            [e] => h.edges()[*e]
                .iter()
                .all(|&u| h.incident_edges(u).len() == 1),
            _ => true,
        };
        if keep && seen.insert(inc.to_vec()) {
            rows.push(inc.to_vec());
            row_vertex.push(v);
        }
    }
    (rows, row_vertex)
}

/// `max 1·x` s.t. for each row `sum_{j in row} x_j <= 1`, `x >= 0`.
/// Returns the primal optimum and the dual values per row.
fn simplex_packing(num_vars: usize, rows: &[Vec<usize>]) -> (Vec<Rational>, Vec<Rational>) {
    let m = rows.len();
    let n = num_vars + m;
    // tableau[i] = [coefficients..., rhs]
    let mut tableau: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t = vec![zero(); n + 1];
            for &j in row {
                t[j] = one();
            }
            t[num_vars + i] = one();
            t[n] = one();
            t
        })
        .collect();
    // reduced costs c_j - z_j
    let mut reduced: Vec<Rational> = (0..n)
        .map(|j| if j < num_vars { one() } else { zero() })
        .collect();
    let mut basis: Vec<usize> = (num_vars..n).collect();

    // Bland's rule: lowest-index improving column, lowest-index leaving basic variable.
    while let Some(col) = (0..n).find(|&j| reduced[j].is_positive()) {
        let mut pivot: Option<(usize, Rational)> = None;
        for i in 0..m {
            let a = &tableau[i][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &tableau[i][n] / a;
            let better = match &pivot {
                None => true,
                Some((p, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*p]),
            };
            if better {
                pivot = Some((i, ratio));
            }
        }
        let (row, _) = pivot.expect("packing LP is bounded");
        let inv = one() / &tableau[row][col];
        for x in tableau[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = tableau[row].clone();
        for (i, t) in tableau.iter_mut().enumerate() {
            if i == row || t[col].is_zero() {
                continue;
            }
            let factor = t[col].clone();
            for (x, p) in t.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        let factor = reduced[col].clone();
        for (x, p) in reduced.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
        basis[row] = col;
    }

    let mut primal = vec![zero(); num_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < num_vars {
            primal[b] = tableau[i][n].clone();
        }
    }
    let dual = (0..m).map(|i| -reduced[num_vars + i].clone()).collect();
    (primal, dual)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSlackness {
    pub vertex: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub cover_weight: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub matching_load: Rational,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSlackness {
    pub edge: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub matching_weight: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub cover_mass: Rational,
    pub tight: bool,
}

/// Complementary slackness on both sides of an optimal pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlacknessReport {
    /// Every vertex with positive cover weight.
    pub vertices: Vec<VertexSlackness>,
    /// Every edge with positive matching weight.
    pub edges: Vec<EdgeSlackness>,
}

impl SlacknessReport {
    pub fn violations(&self) -> usize {
        self.vertices.iter().filter(|v| !v.saturated).count()
            + self.edges.iter().filter(|e| !e.tight).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

pub fn verify_slackness(
    h: &GenericHypergraph,
    f: &FractionalSolution,
    g: &FractionalSolution,
) -> Result<SlacknessReport, LpError> {
    f.check_feasible(h)?;
    g.check_feasible(h)?;
    if f.objective != g.objective {
        return Err(LpError::UnequalObjectives {
            matching: rational::format(&f.objective),
            cover: rational::format(&g.objective),
        });
    }
    let vertices = (0..h.num_vertices())
        .filter(|&v| g.weights[v].is_positive())
        .map(|v| {
            let load = vertex_load(h, &f.weights, v);
            VertexSlackness {
                vertex: v,
                cover_weight: g.weights[v].clone(),
                saturated: load == one(),
                matching_load: load,
            }
        })
        .collect();
    let edges = (0..h.num_edges())
        .filter(|&e| f.weights[e].is_positive())
        .map(|e| {
            let mass = h.edges()[e]
                .iter()
                .fold(zero(), |acc, &v| acc + &g.weights[v]);
            EdgeSlackness {
                edge: e,
                matching_weight: f.weights[e].clone(),
                tight: mass == one(),
                cover_mass: mass,
            }
        })
        .collect();
    Ok(SlacknessReport { vertices, edges })
}

/// `nu <= nu* = tau* <= tau`, each with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub matching: Matching,
    pub fractional: FractionalPair,
    pub cover: Cover,
    pub slackness: SlacknessReport,
}

impl ChainReport {
    pub fn nu(&self) -> usize {
        self.matching.size()
    }

    pub fn nu_star(&self) -> &Rational {
        &self.fractional.matching.objective
    }

    pub fn tau_star(&self) -> &Rational {
        &self.fractional.cover.objective
    }

    pub fn tau(&self) -> usize {
        self.cover.size()
    }
}

pub fn chain_report(h: &GenericHypergraph) -> Result<ChainReport, LpError> {
    let matching = matching_number(h);
    let cover = covering_number(h);
    chain_report_from(h, matching, cover)
}

/// Like [`chain_report`] with integral optima computed elsewhere.
pub fn chain_report_from(
    h: &GenericHypergraph,
    matching: Matching,
    cover: Cover,
) -> Result<ChainReport, LpError> {
    let fractional = solve_fractional(h);
    let slackness = verify_slackness(h, &fractional.matching, &fractional.cover)?;
    let report = ChainReport {
        matching,
        fractional,
        cover,
        slackness,
    };
    let nu = rational::int(report.nu() as i64);
    let tau = rational::int(report.tau() as i64);
    if !(nu <= *report.nu_star()
        && report.nu_star() == report.tau_star()
        && *report.tau_star() <= tau)
    {
        return Err(LpError::ChainViolated(format!(
            "nu={} nu*={} tau*={} tau={}",
            report.nu(),
            rational::format(report.nu_star()),
            rational::format(report.tau_star()),
            report.tau()
        )));
    }
    if !report.slackness.holds() {
        return Err(LpError::ChainViolated(
            "complementary slackness fails".into(),
        ));
    }
    Ok(report)
}
