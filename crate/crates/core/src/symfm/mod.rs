//! Linear inequality systems over the rate variables with symbolic
//! right-hand sides, Fourier–Motzkin elimination and proof-based
//! redundancy pruning.

mod axioms;
mod elim;
mod json;
mod prune;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{rational_string, Field, Rational};
use crate::terms::TermSymbol;

pub use axioms::{axiom_set, Axiom, AxiomFamily, AxiomSetId};
pub use elim::{eliminate_rows, fm_eliminate, substitute_rate_sums};
pub use json::{system_from_json, system_to_json};
pub use prune::{
    derive_region, prune_redundant, prune_with_report, Certificate, Derivation, PruneStage,
    SystemId,
};

/// Rate variables, in row-coefficient order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RateVar {
    S1,
    T1,
    S2,
    T2,
    R1,
    R2,
}

impl RateVar {
    pub const ALL: [RateVar; 6] = [
        RateVar::S1,
        RateVar::T1,
        RateVar::S2,
        RateVar::T2,
        RateVar::R1,
        RateVar::R2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RateVar::S1 => "S1",
            RateVar::T1 => "T1",
            RateVar::S2 => "S2",
            RateVar::T2 => "T2",
            RateVar::R1 => "R1",
            RateVar::R2 => "R2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for RateVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of rate variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarMask(u8);

impl VarMask {
    pub const EMPTY: VarMask = VarMask(0);
    pub const QUADRUPLE: VarMask = VarMask(0b1111);
    pub const PAIR: VarMask = VarMask(0b110000);

    pub fn of(vars: &[RateVar]) -> Self {
        let mut m = VarMask::EMPTY;
        for &v in vars {
            m.insert(v);
        }
        m
    }

    pub fn contains(self, v: RateVar) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn insert(&mut self, v: RateVar) {
        self.0 |= 1 << v.index();
    }

    pub fn remove(&mut self, v: RateVar) {
        self.0 &= !(1 << v.index());
    }

    pub fn union(self, o: VarMask) -> VarMask {
        VarMask(self.0 | o.0)
    }

    pub fn is_subset(self, o: VarMask) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = RateVar> {
        RateVar::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// Right-hand side of a row: anything that can be scaled and added.
pub trait Rhs<F>: Clone + PartialEq + fmt::Debug {
    fn zero_rhs() -> Self;
    fn is_zero_rhs(&self) -> bool;
    fn scale_by(&self, k: &F) -> Self;
    fn plus_rhs(&self, other: &Self) -> Self;
    /// All scalar coefficients, for normalization.
    fn coefficients(&self) -> Vec<F>;
}

impl<F: Field> Rhs<F> for F {
    fn zero_rhs() -> Self {
        F::zero()
    }
    fn is_zero_rhs(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale_by(&self, k: &F) -> Self {
        self.clone() * k.clone()
    }
    fn plus_rhs(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn coefficients(&self) -> Vec<F> {
        vec![self.clone()]
    }
}

/// Exact linear combination of term symbols plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Combo {
    terms: BTreeMap<TermSymbol, Rational>,
    constant: Rational,
}

impl Combo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(t: TermSymbol) -> Self {
        Self::new().with(t, Rational::one())
    }

    /// Sum of the given symbols, each with coefficient one.
    pub fn sum(ts: &[TermSymbol]) -> Self {
        let mut c = Self::new();
        for &t in ts {
            c.add_term(t, Rational::one());
        }
        c
    }

    pub fn constant_only(k: Rational) -> Self {
        Combo {
            terms: BTreeMap::new(),
            constant: k,
        }
    }

    pub fn add_constant(mut self, k: Rational) -> Self {
        self.constant += k;
        self
    }

    pub fn with(mut self, t: TermSymbol, k: Rational) -> Self {
        self.add_term(t, k);
        self
    }

    pub fn add_term(&mut self, t: TermSymbol, k: Rational) {
        let e = self.terms.entry(t).or_insert_with(<Rational as Zero>::zero);
        *e += k;
        if Zero::is_zero(e) {
            self.terms.remove(&t);
        }
    }

    pub fn coef(&self, t: TermSymbol) -> Rational {
        self.terms.get(&t).cloned().unwrap_or_else(<Rational as Zero>::zero)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (TermSymbol, &Rational)> {
        self.terms.iter().map(|(t, k)| (*t, k))
    }

    pub fn symbols(&self) -> impl Iterator<Item = TermSymbol> + '_ {
        self.terms.keys().copied()
    }

    pub fn sub(&self, other: &Combo) -> Combo {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Replace each symbol by a combo (symbols not in `map` are kept).
    pub fn substitute(&self, map: &BTreeMap<TermSymbol, Combo>) -> Combo {
        let mut out = Combo::constant_only(self.constant.clone());
        for (t, k) in &self.terms {
            match map.get(t) {
                Some(c) => out = out.add(&c.scale(k)),
                None => out.add_term(*t, k.clone()),
            }
        }
        out
    }

    /// Evaluate under an assignment; `None` if a symbol is unassigned.
    pub fn eval_with<F: Field>(&self, value: impl Fn(TermSymbol) -> Option<F>, conv: impl Fn(&Rational) -> F) -> Option<F> {
        let mut acc = conv(&self.constant);
        for (t, k) in &self.terms {
            acc = acc + conv(k) * value(*t)?;
        }
        Some(acc)
    }
}

impl Rhs<Rational> for Combo {
    fn zero_rhs() -> Self {
        Combo::new()
    }
    fn is_zero_rhs(&self) -> bool {
        self.is_zero()
    }
    fn scale_by(&self, k: &Rational) -> Self {
        self.scale(k)
    }
    fn plus_rhs(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn coefficients(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.terms.values().cloned().collect();
        v.push(self.constant.clone());
        v
    }
}

impl Combo {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && Zero::is_zero(&self.constant)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if Zero::is_zero(k) {
            return Combo::new();
        }
        Combo {
            terms: self.terms.iter().map(|(t, v)| (*t, v * k)).collect(),
            constant: &self.constant * k,
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, k) in &other.terms {
            out.add_term(*t, k.clone());
        }
        out.constant += &other.constant;
        out
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = self
            .terms
            .iter()
            .map(|(t, k)| (k.is_negative(), coef_prefix(&k.abs(), t.name())))
            .collect();
        if !Zero::is_zero(&self.constant) || parts.is_empty() {
            parts.push((self.constant.is_negative(), rational_string(&self.constant.abs())));
        }
        write_signed(f, &parts)
    }
}

fn coef_prefix(k: &Rational, name: &str) -> String {
    if k.is_one() {
        name.to_string()
    } else {
        format!("{}{}", rational_string(k), name)
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, parts: &[(bool, String)]) -> fmt::Result {
    for (i, (neg, s)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => write!(f, "-{s}")?,
            (0, false) => write!(f, "{s}")?,
            (_, true) => write!(f, " - {s}")?,
            (_, false) => write!(f, " + {s}")?,
        }
    }
    Ok(())
}

/// `lhs · rates <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ineq<F, R> {
    pub lhs: [F; 6],
    pub rhs: R,
}

/// Symbolic inequality with exact coefficients.
pub type Inequality = Ineq<Rational, Combo>;

impl<F: Field, R: Rhs<F>> Ineq<F, R> {
    pub fn new(lhs: &[(RateVar, F)], rhs: R) -> Self {
        let mut row: [F; 6] = std::array::from_fn(|_| F::zero());
        for (v, k) in lhs {
            row[v.index()] = row[v.index()].clone() + k.clone();
        }
        Ineq { lhs: row, rhs }
    }

    /// `-v <= 0`.
    pub fn nonneg(v: RateVar) -> Self {
        Self::new(&[(v, -F::one())], R::zero_rhs())
    }

    pub fn coef(&self, v: RateVar) -> &F {
        &self.lhs[v.index()]
    }

    pub fn vars(&self) -> VarMask {
        let mut m = VarMask::EMPTY;
        for v in RateVar::ALL {
            if !self.lhs[v.index()].is_zero() {
                m.insert(v);
            }
        }
        m
    }

    /// No rate variable appears: a fact about the terms alone.
    pub fn is_pure(&self) -> bool {
        self.lhs.iter().all(|k| k.is_zero())
    }

    pub fn scaled(&self, k: &F) -> Self {
        Ineq {
            lhs: std::array::from_fn(|i| self.lhs[i].clone() * k.clone()),
            rhs: self.rhs.scale_by(k),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Ineq {
            lhs: std::array::from_fn(|i| self.lhs[i].clone() + other.lhs[i].clone()),
            rhs: self.rhs.plus_rhs(&other.rhs),
        }
    }

    /// Positive rescaling to the canonical representative.
    pub fn canonical(&self) -> Self {
        let coefs: Vec<F> = if self.is_pure() {
            self.rhs.coefficients()
        } else {
            let mut v = self.lhs.to_vec();
            if is_exact::<F>() {
                v.extend(self.rhs.coefficients());
            }
            v
        };
        let k = F::row_factor(&coefs);
        if k == F::one() {
            self.clone()
        } else {
            self.scaled(&k)
        }
    }

    /// Whether the two rows are the same up to positive scaling.
    pub fn same_as(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

fn is_exact<F: Field>() -> bool {
    std::any::TypeId::of::<F>() == std::any::TypeId::of::<Rational>()
}

impl Inequality {
    /// Substitute symbols in the right-hand side.
    pub fn substitute(&self, map: &BTreeMap<TermSymbol, Combo>) -> Inequality {
        Ineq {
            lhs: self.lhs.clone(),
            rhs: self.rhs.substitute(map),
        }
    }

    fn order_key(&self) -> (usize, Vec<Rational>) {
        let nnz = self.lhs.iter().filter(|k| !Zero::is_zero(*k)).count();
        // rows on R1 before rows on R2, larger coefficients first
        let mut key: Vec<Rational> = [RateVar::R1, RateVar::R2, RateVar::S1, RateVar::T1, RateVar::S2, RateVar::T2]
            .iter()
            .map(|v| -self.lhs[v.index()].clone())
            .collect();
        key.insert(0, self.lhs.iter().map(|k| k.abs()).sum());
        (nnz, key)
    }
}

impl Eq for Inequality {}

impl PartialOrd for Inequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Inequality {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ap, bp) = (self.is_pure(), other.is_pure());
        ap.cmp(&bp)
            .then_with(|| self.order_key().cmp(&other.order_key()))
            .then_with(|| self.rhs.cmp(&other.rhs))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(bool, String)> = [RateVar::R1, RateVar::R2, RateVar::S1, RateVar::T1, RateVar::S2, RateVar::T2]
            .iter()
            .filter(|v| !Zero::is_zero(&self.lhs[v.index()]))
            .map(|v| {
                let k = &self.lhs[v.index()];
                (k.is_negative(), coef_prefix(&k.abs(), v.name()))
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write_signed(f, &parts)?;
        }
        write!(f, " <= {}", self.rhs)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymError {
    #[error("system already contains R variables")]
    AlreadySubstituted,
    #[error("systems are over different rate variables ({0:?} vs {1:?})")]
    VariableMismatch(Vec<RateVar>, Vec<RateVar>),
    #[error("invalid system JSON: {0}")]
    Json(String),
    #[error("unknown system id `{0}`")]
    UnknownSystem(String),
    #[error("unknown axiom set `{0}`")]
    UnknownAxioms(String),
}

/// Inequalities, implicit nonnegativity of some rate variables, and the
/// term facts that are assumed to hold.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    rows: Vec<Inequality>,
    nonneg: VarMask,
    axioms: Vec<Axiom>,
}

impl LinearSystem {
    /// Canonicalizes, sorts and deduplicates `rows`.
    pub fn new(rows: Vec<Inequality>, nonneg: VarMask) -> Self {
        let mut s = LinearSystem {
            rows,
            nonneg,
            axioms: Vec::new(),
        };
        s.normalize();
        s
    }

    pub fn with_axioms(mut self, axioms: Vec<Axiom>) -> Self {
        self.axioms = axioms;
        self
    }

    fn normalize(&mut self) {
        let mut rows: Vec<Inequality> = self
            .rows
            .drain(..)
            .map(|r| r.canonical())
            .filter(|r| !(r.is_pure() && r.rhs.is_zero()))
            .collect();
        rows.sort();
        rows.dedup();
        self.rows = rows;
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nonneg(&self) -> VarMask {
        self.nonneg
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Variables with a nonzero coefficient somewhere, plus the
    /// nonnegative ones.
    pub fn vars(&self) -> VarMask {
        self.rows.iter().fold(self.nonneg, |m, r| m.union(r.vars()))
    }

    pub fn symbols(&self) -> Vec<TermSymbol> {
        let mut s: Vec<TermSymbol> = self.rows.iter().flat_map(|r| r.rhs.symbols()).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn contains_row(&self, row: &Inequality) -> bool {
        self.rows.binary_search(&row.canonical()).is_ok()
    }

    /// Rows that mention at least one rate variable.
    pub fn rate_rows(&self) -> impl Iterator<Item = &Inequality> {
        self.rows.iter().filter(|r| !r.is_pure())
    }

    pub fn substitute_symbols(&self, map: &BTreeMap<TermSymbol, Combo>) -> LinearSystem {
        LinearSystem::new(self.rows.iter().map(|r| r.substitute(map)).collect(), self.nonneg)
            .with_axioms(self.axioms.clone())
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Outcome of [`system_equal`].
#[derive(Clone, Debug, PartialEq)]
pub struct SystemDiff {
    pub only_left: Vec<Inequality>,
    pub only_right: Vec<Inequality>,
}

impl SystemDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

/// Compare canonical row sets. Both systems must be over the same rate
/// variables.
pub fn system_equal(a: &LinearSystem, b: &LinearSystem) -> Result<(bool, SystemDiff), SymError> {
    let (va, vb) = (a.vars(), b.vars());
    if va != vb {
        return Err(SymError::VariableMismatch(va.iter().collect(), vb.iter().collect()));
    }
    let only_left: Vec<_> = a.rows.iter().filter(|r| !b.contains_row(r)).cloned().collect();
    let only_right: Vec<_> = b.rows.iter().filter(|r| !a.contains_row(r)).cloned().collect();
    let diff = SystemDiff { only_left, only_right };
    Ok((diff.is_empty(), diff))
}
