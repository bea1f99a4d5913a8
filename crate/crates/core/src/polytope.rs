//! Half-space polyhedra over the rate variables with numeric right-hand
//! sides, obtained by binding the term symbols of a symbolic system.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::lp::{maximize_leq, LpResult};
use crate::scalar::{rational_json, snap, Field, Probability, Rational};
use crate::symfm::{eliminate_rows, Combo, Ineq, LinearSystem, RateVar, VarMask};
use crate::terms::{TermSymbol, TermVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("term `{0}` has no value in the binding")]
    MissingSymbol(TermSymbol),
    #[error("term `{0}` is bound to a negative value")]
    NegativeValue(TermSymbol),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimensionMismatch(Vec<RateVar>, Vec<RateVar>),
    #[error("operation needs a 2-D polytope, got {0} dimensions")]
    NotTwoDimensional(usize),
}

/// Exact values for the term symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding([Option<Rational>; TermSymbol::COUNT]);

impl Default for Binding {
    fn default() -> Self {
        Binding(std::array::from_fn(|_| None))
    }
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every symbol bound to zero.
    pub fn zeros() -> Self {
        Binding(std::array::from_fn(|_| Some(Rational::zero())))
    }

    pub fn set(&mut self, t: TermSymbol, v: Rational) -> Result<(), PolyError> {
        if v.is_negative() {
            return Err(PolyError::NegativeValue(t));
        }
        self.0[t.index()] = Some(v);
        Ok(())
    }

    pub fn get(&self, t: TermSymbol) -> Option<&Rational> {
        self.0[t.index()].as_ref()
    }

    pub fn from_map(m: &BTreeMap<TermSymbol, Rational>) -> Result<Self, PolyError> {
        let mut b = Self::new();
        for (t, v) in m {
            b.set(*t, v.clone())?;
        }
        Ok(b)
    }

    /// Snap a term vector onto the grid of multiples of `2^-48`.
    ///
    /// Per receiver the seven base terms are differences of the nested
    /// informations `h(S) = I(Y; S | Q)` for `S ⊆ {U, W, V}`; those are
    /// snapped and made monotone in `S`, and the terms re-derived from them,
    /// so every chain-rule equality among the terms holds exactly and every
    /// base term is nonnegative. `B, C, F` are the exact sums of their parts.
    pub fn from_terms<P: Probability>(tv: &TermVector<P>) -> Self {
        let mut b = Binding::zeros();
        for side in [1u8, 2] {
            let t = |c| tv.get(TermSymbol::base(c, side)).to_f64().unwrap_or(0.0);
            let g = t('g');
            // subsets as bitmasks over U=1, W=2, V=4
            let mut h: [Rational; 8] = std::array::from_fn(|_| Rational::zero());
            h[7] = snap(g);
            h[6] = snap(g - t('a'));
            h[5] = snap(g - t('b'));
            h[3] = snap(g - t('c'));
            h[4] = snap(g - t('d'));
            h[2] = snap(g - t('e'));
            h[1] = snap(g - t('f'));
            for s in [3usize, 5, 6, 7] {
                for sub in 1..s {
                    if sub & s == sub && h[sub] > h[s] {
                        h[s] = h[sub].clone();
                    }
                }
            }
            let top = h[7].clone();
            for (c, s) in [('a', 6), ('b', 5), ('c', 3), ('d', 4), ('e', 2), ('f', 1), ('g', 0)] {
                b.0[TermSymbol::base(c, side).index()] = Some(&top - &h[s]);
            }
        }
        for rho in [TermSymbol::Rho1, TermSymbol::Rho2] {
            b.0[rho.index()] = Some(snap(tv.get(rho).to_f64().unwrap_or(0.0)));
        }
        for t in TermSymbol::ALL {
            if let Some((base, rho)) = t.decomposition() {
                let v = b.get(base).unwrap() + b.get(rho).unwrap();
                b.0[t.index()] = Some(v);
            }
        }
        b
    }

    pub fn eval(&self, c: &Combo) -> Result<Rational, PolyError> {
        let mut acc = c.constant().clone();
        for (t, k) in c.terms() {
            acc += k * self.get(t).ok_or(PolyError::MissingSymbol(t))?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for t in TermSymbol::ALL {
            if let Some(v) = self.get(t) {
                m.insert(t.name().to_string(), rational_json(v));
            }
        }
        Value::Object(m)
    }
}

/// `{x >= 0 : lhs · x <= rhs for every row}` over the variables in `dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly<F> {
    dims: VarMask,
    rows: Vec<Ineq<F, F>>,
}

/// 2-D vertex list, counterclockwise from the lexicographically smallest.
pub type VertexList2<F> = Vec<[F; 2]>;

impl<F: Field> HPoly<F> {
    pub fn new(dims: VarMask, rows: Vec<Ineq<F, F>>) -> Self {
        let mut out: Vec<Ineq<F, F>> = Vec::with_capacity(rows.len());
        for r in rows {
            if r.is_pure() && r.rhs >= F::zero() {
                continue;
            }
            let c = r.canonical();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        HPoly { dims, rows: out }
    }

    pub fn dims(&self) -> VarMask {
        self.dims
    }

    pub fn rows(&self) -> &[Ineq<F, F>] {
        &self.rows
    }

    fn dim_list(&self) -> Vec<RateVar> {
        self.dims.iter().collect()
    }

    /// Whether `x` (indexed like `dims`) satisfies every row and is nonnegative.
    pub fn contains_point(&self, x: &[F]) -> bool {
        self.contains_point_eps(x, &F::zero())
    }

    fn contains_point_eps(&self, x: &[F], eps: &F) -> bool {
        let dims = self.dim_list();
        x.iter().all(|v| *v >= F::zero())
            && self.rows.iter().all(|r| {
                let lhs = dims
                    .iter()
                    .zip(x)
                    .fold(F::zero(), |acc, (d, v)| acc + r.coef(*d).clone() * v.clone());
                lhs <= r.rhs.clone() + eps.clone()
            })
    }

    fn lp_rows(&self) -> Option<(Vec<Vec<F>>, Vec<F>)> {
        let dims = self.dim_list();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for r in &self.rows {
            if r.is_pure() {
                if r.rhs < F::zero() {
                    return None;
                }
                continue;
            }
            a.push(dims.iter().map(|d| r.coef(*d).clone()).collect());
            b.push(r.rhs.clone());
        }
        Some((a, b))
    }

    /// Maximize `c · x`; `Ok(None)` when empty.
    pub fn maximize(&self, c: &[F]) -> Result<Option<(F, Vec<F>)>, PolyError> {
        let Some((a, b)) = self.lp_rows() else {
            return Ok(None);
        };
        match maximize_leq(&a, &b, c) {
            LpResult::Optimal { x, value } => Ok(Some((value, x))),
            LpResult::Infeasible => Ok(None),
            LpResult::Unbounded => Err(PolyError::Unbounded),
        }
    }

    pub fn is_empty(&self) -> bool {
        let zero = vec![F::zero(); self.dims.len()];
        !matches!(self.maximize(&zero), Ok(Some(_)))
    }

    /// Fourier–Motzkin projection that removes `v` (which is nonnegative).
    pub fn eliminate(&self, v: RateVar) -> HPoly<F> {
        let rows = eliminate_rows(&self.rows, v, self.dims.contains(v));
        let mut dims = self.dims;
        dims.remove(v);
        HPoly::new(dims, rows)
    }

    pub fn eliminate_all(&self, vars: &[RateVar]) -> HPoly<F> {
        vars.iter().fold(self.clone(), |p, v| p.eliminate(*v))
    }

    fn check_bounded(&self) -> Result<bool, PolyError> {
        let n = self.dims.len();
        for i in 0..n {
            let mut c = vec![F::zero(); n];
            c[i] = F::one();
            if self.maximize(&c)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact vertices of a bounded 2-D polytope; empty when infeasible.
    pub fn vertices2(&self) -> Result<VertexList2<F>, PolyError> {
        let dims = self.dim_list();
        if dims.len() != 2 {
            return Err(PolyError::NotTwoDimensional(dims.len()));
        }
        if !self.check_bounded()? {
            return Ok(Vec::new());
        }
        let mut lines: Vec<([F; 2], F)> = self
            .rows
            .iter()
            .filter(|r| !r.is_pure())
            .map(|r| ([r.coef(dims[0]).clone(), r.coef(dims[1]).clone()], r.rhs.clone()))
            .collect();
        lines.push(([-F::one(), F::zero()], F::zero()));
        lines.push(([F::zero(), -F::one()], F::zero()));
        let mut pts: Vec<[F; 2]> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let ([a, b], e) = &lines[i];
                let ([c, d], f) = &lines[j];
                let det = a.clone() * d.clone() - b.clone() * c.clone();
                if det.is_zero() {
                    continue;
                }
                let x = (e.clone() * d.clone() - b.clone() * f.clone()) / det.clone();
                let y = (a.clone() * f.clone() - e.clone() * c.clone()) / det;
                let p = [x, y];
                if self.contains_point(&p) && !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        Ok(convex_hull(pts))
    }

    /// Shoelace area of a 2-D polytope; zero when empty.
    pub fn area2(&self) -> Result<F, PolyError> {
        let v = self.vertices2()?;
        let n = v.len();
        if n < 3 {
            return Ok(F::zero());
        }
        let mut twice = F::zero();
        for i in 0..n {
            let p = &v[i];
            let q = &v[(i + 1) % n];
            twice = twice + p[0].clone() * q[1].clone() - q[0].clone() * p[1].clone();
        }
        Ok(twice / (F::one() + F::one()))
    }

    /// `inner ⊆ outer` after relaxing every row of `outer` by `eps`.
    pub fn contains(&self, inner: &HPoly<F>, eps: &F) -> Result<bool, PolyError> {
        if self.dims != inner.dims {
            return Err(PolyError::DimensionMismatch(self.dim_list(), inner.dim_list()));
        }
        let dims = self.dim_list();
        if dims.len() == 2 {
            let v = inner.vertices2()?;
            return Ok(v.iter().all(|p| self.contains_point_eps(p, eps)));
        }
        if inner.is_empty() {
            return Ok(true);
        }
        for r in &self.rows {
            if r.is_pure() {
                if r.rhs.clone() + eps.clone() < F::zero() {
                    return Ok(false);
                }
                continue;
            }
            let c: Vec<F> = dims.iter().map(|d| r.coef(*d).clone()).collect();
            match inner.maximize(&c) {
                Ok(Some((m, _))) => {
                    if m > r.rhs.clone() + eps.clone() {
                        return Ok(false);
                    }
                }
                Ok(None) => return Ok(true),
                Err(PolyError::Unbounded) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        Ok(true)
    }

    pub fn equal(&self, other: &HPoly<F>, eps: &F) -> Result<bool, PolyError> {
        Ok(self.contains(other, eps)? && other.contains(self, eps)?)
    }
}

/// Counterclockwise hull starting at the lexicographically smallest point;
/// collinear points are dropped.
fn convex_hull<F: Field>(mut pts: Vec<[F; 2]>) -> Vec<[F; 2]> {
    pts.sort_by(|p, q| {
        p[0].partial_cmp(&q[0])
            .unwrap()
            .then_with(|| p[1].partial_cmp(&q[1]).unwrap())
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[F; 2], a: &[F; 2], b: &[F; 2]| {
        (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
            - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
    };
    let mut hull: Vec<[F; 2]> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= F::zero() {
            hull.pop();
        }
        hull.push(p.clone());
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= F::zero() {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull.pop();
    hull
}

/// Evaluate every right-hand side of `system` under `b`.
pub fn bind(system: &LinearSystem, b: &Binding) -> Result<HPoly<Rational>, PolyError> {
    let rows = system
        .rows()
        .iter()
        .map(|r| Ok(Ineq { lhs: r.lhs.clone(), rhs: b.eval(&r.rhs)? }))
        .collect::<Result<Vec<_>, PolyError>>()?;
    Ok(HPoly::new(system.vars(), rows))
}

/// Convert an exact polytope to floats.
pub fn to_f64(p: &HPoly<Rational>) -> HPoly<f64> {
    let c = crate::scalar::to_f64;
    HPoly::new(
        p.dims(),
        p.rows()
            .iter()
            .map(|r| Ineq {
                lhs: std::array::from_fn(|i| c(&r.lhs[i])),
                rhs: c(&r.rhs),
            })
            .collect(),
    )
}
