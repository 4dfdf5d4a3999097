//! Degree-bounded left kernels by plain linear algebra.
//!
//! For an `r × m` operator `A` and a bound `B`, the left multipliers
//! `c = (c_1..c_r)` with `deg c_i ≤ B` and `c·A = 0` form a finite
//! dimensional vector space. Writing every `c_i` in the monomial basis turns
//! `c·A = 0` into a sparse homogeneous linear system over `Q`, solved here
//! by Gauss–Jordan elimination. Nothing in this file uses Gröbner bases.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use parametrix::diffop::OperatorMatrix;
use parametrix::exact_poly::{Monomial, Polynomial, Rational};
use parametrix::groebner::ModuleVector;

type SparseRow = BTreeMap<usize, Rational>;

/// Basis of `{c : deg c_i ≤ bound, c·A = 0}`, as module vectors of rank
/// `A.nrows()`.
pub fn left_kernel(a: &OperatorMatrix, bound: u32) -> Vec<ModuleVector> {
    let n = a.nvars();
    let r = a.nrows();
    let monos = Monomial::all_up_to_degree(n, bound);
    // unknown index = i * monos.len() + t  ↔  coefficient of monos[t] in c_i
    let nunk = r * monos.len();
    // equation key = (column, monomial of the product)
    let mut eqs: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for i in 0..r {
        for (t, mu) in monos.iter().enumerate() {
            let u = i * monos.len() + t;
            for k in 0..a.ncols() {
                for (nu, c) in a.entry(i, k).terms() {
                    let row = eqs.entry((k, mu.mul(nu))).or_default();
                    let e = row.entry(u).or_insert_with(Rational::zero);
                    *e += c;
                    if e.is_zero() {
                        row.remove(&u);
                    }
                }
            }
        }
    }
    let rows: Vec<SparseRow> = eqs.into_values().filter(|r| !r.is_empty()).collect();
    let basis = nullspace(rows, nunk);
    basis
        .into_iter()
        .map(|v| {
            let mut comps = vec![Polynomial::zero(n); r];
            for (u, c) in v {
                comps[u / monos.len()].add_term(monos[u % monos.len()], c);
            }
            ModuleVector::new(n, comps)
        })
        .collect()
}

fn axpy(target: &mut SparseRow, factor: &Rational, src: &SparseRow) {
    for (j, v) in src {
        let e = target.entry(*j).or_insert_with(Rational::zero);
        *e -= factor * v;
        if e.is_zero() {
            target.remove(j);
        }
    }
}

/// Nullspace of a sparse matrix with `ncols` columns via reduced row
/// echelon form.
pub fn nullspace(rows: Vec<SparseRow>, ncols: usize) -> Vec<SparseRow> {
    // pivot column -> normalized row (pivot coefficient 1)
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        loop {
            let hit = row.keys().find(|j| pivots.contains_key(j)).copied();
            match hit {
                Some(j) => {
                    let f = row[&j].clone();
                    axpy(&mut row, &f, &pivots[&j]);
                }
                None => break,
            }
        }
        let Some((&p, lead)) = row.iter().next() else { continue };
        let inv = Rational::one() / lead;
        for v in row.values_mut() {
            *v *= &inv;
        }
        // keep the echelon fully reduced
        for other in pivots.values_mut() {
            if let Some(f) = other.get(&p).cloned() {
                axpy(other, &f, &row);
            }
        }
        pivots.insert(p, row);
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|j| !pivots.contains_key(j)) {
        let mut v = SparseRow::new();
        v.insert(free, Rational::one());
        for (&p, row) in &pivots {
            if let Some(c) = row.get(&free) {
                v.insert(p, -c.clone());
            }
        }
        out.push(v);
    }
    out
}

/// Dimension of the degree-`≤ bound` part of the module generated by
/// `gens`: the rank of `{μ·row_i : deg(μ) + deg(row_i) ≤ bound}`.
pub fn bounded_span_rank(gens: &[ModuleVector], bound: u32) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let n = first.nvars();
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let d = g.degree();
        if d > bound {
            continue;
        }
        for mu in Monomial::all_up_to_degree(n, bound - d) {
            let mut row = SparseRow::new();
            for (k, p) in g.components().iter().enumerate() {
                for (nu, c) in p.terms() {
                    let len = index.len();
                    let col = *index.entry((k, mu.mul(nu))).or_insert(len);
                    row.insert(col, c.clone());
                }
            }
            rows.push(row);
        }
    }
    rank(rows)
}

/// Rank of a sparse matrix.
pub fn rank(rows: Vec<SparseRow>) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        while let Some(j) = row.keys().find(|j| pivots.contains_key(j)).copied() {
            let f = row[&j].clone() / &pivots[&j][&j];
            axpy(&mut row, &f, &pivots[&j]);
        }
        if let Some(&p) = row.keys().next() {
            pivots.insert(p, row);
        }
    }
    pivots.len()
}
