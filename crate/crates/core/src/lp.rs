//! Dense two-phase simplex with Bland's rule.
//!
//! Exact over [`Rational`](crate::Rational); over floats the same pivots run
//! with [`Field::tolerance`] as the zero threshold and are only meant for
//! small, well-scaled problems.

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

impl<F> LpResult<F> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpResult::Infeasible)
    }
}

struct Tableau<F> {
    /// `rows[i]` has `ncols` coefficients followed by the right-hand side.
    rows: Vec<Vec<F>>,
    /// Reduced costs followed by minus the objective value.
    obj: Vec<F>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<F: Field> Tableau<F> {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let k = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - k.clone() * pv.clone();
                }
            }
        }
        if !self.obj[col].is_zero() {
            let k = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - k.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = col;
    }

    /// Run Bland's rule over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let tol = F::tolerance();
            let Some(col) = (0..allowed).find(|&j| self.obj[j] < -tol.clone()) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col] > tol {
                    let ratio = row[rhs].clone() / row[col].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

/// Minimize `c·x` subject to `A x = b`, `x >= 0`.
pub fn minimize_standard<F: Field>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpResult<F> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|r| r.len() == n), "row length");

    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ar, bi)) in a.iter().zip(b).enumerate() {
        let neg = *bi < F::zero();
        let mut row: Vec<F> = ar.iter().map(|v| if neg { -v.clone() } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
        row.push(if neg { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    // phase one: minimize the sum of artificials
    let mut obj = vec![F::zero(); ncols + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[ncols] = obj[ncols].clone() - row[ncols].clone();
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        ncols,
    };
    t.optimize(n);
    if t.obj[ncols].abs() > F::tolerance() {
        return LpResult::Infeasible;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| t.rows[r][j].abs() > F::tolerance()) {
                Some(col) => {
                    t.pivot(r, col);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }
    // phase two
    let mut obj = vec![F::zero(); ncols + 1];
    obj[..n].clone_from_slice(c);
    for (row, &bcol) in t.rows.iter().zip(&t.basis) {
        let cb = c[bcol].clone();
        if cb.is_zero() {
            continue;
        }
        for (v, rv) in obj.iter_mut().zip(row) {
            *v = v.clone() - cb.clone() * rv.clone();
        }
    }
    t.obj = obj;
    if !t.optimize(n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![F::zero(); n];
    for (row, &bcol) in t.rows.iter().zip(&t.basis) {
        x[bcol] = row[ncols].clone();
    }
    let value = -t.obj[ncols].clone();
    LpResult::Optimal { x, value }
}

/// Maximize `c·x` subject to `A x <= b`, `x >= 0`.
pub fn maximize_leq<F: Field>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpResult<F> {
    let m = a.len();
    let n = c.len();
    let std_a: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let mut cost: Vec<F> = c.iter().map(|v| -v.clone()).collect();
    cost.extend((0..m).map(|_| F::zero()));
    match minimize_standard(&std_a, b, &cost) {
        LpResult::Optimal { mut x, value } => {
            x.truncate(n);
            LpResult::Optimal { x, value: -value }
        }
        other => other,
    }
}

/// Whether `A x = b`, `x >= 0` has a solution; returns one if so.
pub fn feasible_point<F: Field>(a: &[Vec<F>], b: &[F], n: usize) -> Option<Vec<F>> {
    let c = vec![F::zero(); n];
    match minimize_standard(a, b, &c) {
        LpResult::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
