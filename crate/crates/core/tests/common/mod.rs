//! Exhaustive oracles, independent of the library's search code.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seghyper::hypergraph::GenericHypergraph;
use seghyper::rational::Rational;

fn hits_all(g: &GenericHypergraph, mask: u32) -> bool {
    g.edges()
        .iter()
        .all(|e| e.iter().any(|&v| mask >> v & 1 == 1))
}

pub fn brute_tau(g: &GenericHypergraph) -> usize {
    assert!(g.num_vertices() <= 20);
    (0u32..1 << g.num_vertices())
        .filter(|&m| hits_all(g, m))
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn brute_nu(g: &GenericHypergraph) -> usize {
    let m = g.num_edges();
    assert!(m <= 20);
    let mut best = 0;
    for mask in 0u32..1 << m {
        let mut used = 0u64;
        let mut ok = true;
        for e in 0..m {
            if mask >> e & 1 == 1 {
                for &v in &g.edges()[e] {
                    ok &= used >> v & 1 == 0;
                    used |= 1 << v;
                }
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

fn proper(g: &GenericHypergraph, colors: &[usize]) -> bool {
    g.edges()
        .iter()
        .all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
}

/// Least k with a proper coloring, trying every coloring in
/// restricted-growth form.
pub fn brute_chi(g: &GenericHypergraph) -> usize {
    let n = g.num_vertices();
    if g.num_edges() == 0 {
        return 1;
    }
    for k in 1..=n {
        let mut colors = vec![0usize; n];
        if rgs_search(g, &mut colors, 0, 0, k) {
            return k;
        }
    }
    unreachable!("n colors always suffice without singleton edges")
}

fn rgs_search(
    g: &GenericHypergraph,
    colors: &mut Vec<usize>,
    i: usize,
    used: usize,
    k: usize,
) -> bool {
    if i == colors.len() {
        return proper(g, colors);
    }
    for c in 0..k.min(used + 1) {
        colors[i] = c;
        if rgs_search(g, colors, i + 1, used.max(c + 1), k) {
            return true;
        }
    }
    false
}

/// Solve a square system exactly; None when singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Optimal value of `max sum x_e` s.t. `sum_{e ∋ v} x_e <= 1`, `x >= 0`, by
/// checking every basic solution.
pub fn lp_vertex_oracle(g: &GenericHypergraph) -> Rational {
    let m = g.num_edges();
    if m == 0 {
        return Rational::zero();
    }
    // constraint rows a·x <= b: vertex rows (deduplicated), then -x_e <= 0
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for v in 0..g.num_vertices() {
        let inc = g.incident_edges(v).to_vec();
        if !inc.is_empty() && seen.insert(inc.clone()) {
            let mut a = vec![Rational::zero(); m];
            for e in inc {
                a[e] = Rational::one();
            }
            rows.push((a, Rational::one()));
        }
    }
    for e in 0..m {
        let mut a = vec![Rational::zero(); m];
        a[e] = -Rational::one();
        rows.push((a, Rational::zero()));
    }
    let mut subsets = Vec::new();
    combinations(rows.len(), m, 0, &mut Vec::new(), &mut subsets);
    let mut best: Option<Rational> = None;
    for s in subsets {
        let a = s.iter().map(|&i| rows[i].0.clone()).collect();
        let b = s.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve(a, b) else { continue };
        let feasible = rows.iter().all(|(a, b)| {
            let lhs: Rational = a.iter().zip(&x).map(|(p, q)| p * q).sum();
            lhs <= *b
        });
        if feasible && x.iter().all(|v| !v.is_negative()) {
            let obj: Rational = x.iter().sum();
            if best.as_ref().is_none_or(|b| obj > *b) {
                best = Some(obj);
            }
        }
    }
    best.expect("x = 0 is a basic feasible solution")
}

/// Random hypergraph with `n <= max_n` vertices and up to `max_m` distinct
/// edges of size 2 to 4.
pub fn random_generic(seed: u64, max_n: usize, max_m: usize) -> GenericHypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_n);
    let m = rng.gen_range(1..=max_m);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for _ in 0..20 * m {
        if edges.len() == m {
            break;
        }
        let size = rng.gen_range(2..=4.min(n));
        let mut e: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    GenericHypergraph::unlabeled(n, edges).unwrap()
}
