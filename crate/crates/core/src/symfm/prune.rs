use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{
    axiom_set, fm_eliminate, substitute_rate_sums, Axiom, AxiomFamily, AxiomSetId, Inequality, LinearSystem,
    RateVar, SymError,
};
use crate::lp::{minimize_standard, LpResult};
use crate::regions::{build_system, hk_quadruple_without_cross_bounds, RegionId};
use crate::scalar::Rational;
use crate::terms::TermSymbol;

/// Proof that `row` is implied: `lhs(row) <= sum rows` coefficientwise on
/// the nonnegative variables, and the right-hand side dominates the
/// combined right-hand sides modulo the listed axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub row: Inequality,
    pub rows_used: Vec<(Rational, Inequality)>,
    pub nonneg_used: Vec<(Rational, RateVar)>,
    pub axioms_used: Vec<(Rational, String)>,
}

/// Try to prove `target` from `others`, the nonnegativity of `nonneg`
/// variables, the axioms and nonnegativity of every term.
fn certify(target: &Inequality, others: &[&Inequality], system: &LinearSystem, axioms: &[Axiom]) -> Option<Certificate> {
    let vars: Vec<RateVar> = system.vars().iter().collect();
    let mut syms: Vec<TermSymbol> = others
        .iter()
        .flat_map(|r| r.rhs.symbols())
        .chain(target.rhs.symbols())
        .chain(axioms.iter().flat_map(|a| a.fact.symbols()))
        .collect();
    syms.sort();
    syms.dedup();
    let nv = vars.len();
    let m = nv + syms.len() + 1;
    let row_of_sym = |t: TermSymbol| nv + syms.binary_search(&t).unwrap();
    let const_row = m - 1;

    let mut cols: Vec<Vec<Rational>> = Vec::new();
    for r in others {
        let mut col = vec![Rational::zero(); m];
        for (i, v) in vars.iter().enumerate() {
            col[i] = r.coef(*v).clone();
        }
        for (t, k) in r.rhs.terms() {
            col[row_of_sym(t)] = k.clone();
        }
        col[const_row] = r.rhs.constant().clone();
        cols.push(col);
    }
    let nonneg: Vec<RateVar> = vars.iter().copied().filter(|v| system.nonneg().contains(*v)).collect();
    for v in &nonneg {
        let mut col = vec![Rational::zero(); m];
        col[vars.iter().position(|x| x == v).unwrap()] = -Rational::one();
        cols.push(col);
    }
    for a in axioms {
        let mut col = vec![Rational::zero(); m];
        for (t, k) in a.fact.terms() {
            col[row_of_sym(t)] = k.clone();
        }
        col[const_row] = a.fact.constant().clone();
        cols.push(col);
    }
    for i in nv..m {
        let mut col = vec![Rational::zero(); m];
        col[i] = Rational::one();
        cols.push(col);
    }

    let mut b = vec![Rational::zero(); m];
    for (i, v) in vars.iter().enumerate() {
        b[i] = target.coef(*v).clone();
    }
    for (t, k) in target.rhs.terms() {
        b[row_of_sym(t)] = k.clone();
    }
    b[const_row] = target.rhs.constant().clone();

    let n = cols.len();
    let a: Vec<Vec<Rational>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let x = match minimize_standard(&a, &b, &vec![Rational::zero(); n]) {
        LpResult::Optimal { x, .. } => x,
        _ => return None,
    };
    let mut k = 0;
    let mut take = |len: usize| {
        let s = &x[k..k + len];
        k += len;
        s.to_vec()
    };
    let lam = take(others.len());
    let nu = take(nonneg.len());
    let mu = take(axioms.len());
    Some(Certificate {
        row: target.clone(),
        rows_used: lam
            .into_iter()
            .zip(others)
            .filter(|(l, _)| l.is_positive())
            .map(|(l, r)| (l, (*r).clone()))
            .collect(),
        nonneg_used: nu
            .into_iter()
            .zip(nonneg)
            .filter(|(l, _)| l.is_positive())
            .collect(),
        axioms_used: mu
            .into_iter()
            .zip(axioms)
            .filter(|(l, _)| l.is_positive())
            .map(|(l, a)| (l, a.name.clone()))
            .collect(),
    })
}

/// Remove rows implied by the rest, in canonical order, and return the
/// proofs of each removal.
pub fn prune_with_report(system: &LinearSystem, axioms: &[Axiom]) -> (LinearSystem, Vec<Certificate>) {
    let mut keep: Vec<bool> = vec![true; system.len()];
    let mut certs = Vec::new();
    for (qi, q) in system.rows().iter().enumerate() {
        let others: Vec<&Inequality> = system
            .rows()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != qi && keep[*j])
            .map(|(_, r)| r)
            .collect();
        if let Some(c) = certify(q, &others, system, axioms) {
            keep[qi] = false;
            certs.push(c);
        }
    }
    let rows = system
        .rows()
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(r, _)| r.clone())
        .collect();
    (LinearSystem::new(rows, system.nonneg()).with_axioms(axioms.to_vec()), certs)
}

pub fn prune_redundant(system: &LinearSystem, axioms: &[Axiom]) -> LinearSystem {
    prune_with_report(system, axioms).0
}

/// The bundled quadruple systems that can be projected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemId {
    Hk,
    HkModified,
    Cmg,
    Hod,
}

impl SystemId {
    pub const ALL: [SystemId; 4] = [SystemId::Hk, SystemId::HkModified, SystemId::Cmg, SystemId::Hod];

    pub fn tag(self) -> &'static str {
        match self {
            SystemId::Hk => "hk",
            SystemId::HkModified => "hk-mod",
            SystemId::Cmg => "cmg",
            SystemId::Hod => "hod",
        }
    }

    /// The quadruple system the derivation starts from.
    pub fn start(self) -> LinearSystem {
        match self {
            SystemId::Hk => build_system(RegionId::HkQ),
            SystemId::HkModified => hk_quadruple_without_cross_bounds(),
            SystemId::Cmg => build_system(RegionId::CmgQ),
            SystemId::Hod => build_system(RegionId::HodQ),
        }
    }

    /// The bundled (R1,R2) system the derivation should arrive at.
    pub fn target(self) -> RegionId {
        match self {
            SystemId::Hk => RegionId::HkR,
            SystemId::HkModified => RegionId::HkRModified,
            SystemId::Cmg => RegionId::CmgR,
            SystemId::Hod => RegionId::HodR,
        }
    }
}

impl FromStr for SystemId {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| SymError::UnknownSystem(s.to_string()))
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PruneStage {
    pub label: &'static str,
    pub axioms: Vec<Axiom>,
    pub result: LinearSystem,
    pub removed: Vec<Certificate>,
}

/// Every intermediate of a projection to (R1,R2).
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub system: SystemId,
    pub axiom_set: AxiomSetId,
    pub start: LinearSystem,
    pub substituted: LinearSystem,
    pub eliminated: LinearSystem,
    /// First without the cross-term facts, then with the whole set.
    pub stages: Vec<PruneStage>,
}

impl Derivation {
    pub fn result(&self) -> &LinearSystem {
        &self.stages.last().expect("at least one stage").result
    }
}

/// Substitute `S_i = R_i - T_i`, eliminate `T1` then `T2`, prune.
pub fn derive_region(system: SystemId, axioms: AxiomSetId) -> Derivation {
    let start = system.start();
    let substituted = substitute_rate_sums(&start).expect("bundled quadruple systems are over S/T");
    let eliminated = fm_eliminate(&fm_eliminate(&substituted, RateVar::T1), RateVar::T2);
    let all = axiom_set(axioms);
    let partial: Vec<Axiom> = all.iter().filter(|a| a.family != AxiomFamily::CrossTerm).cloned().collect();
    let (first, removed1) = prune_with_report(&eliminated, &partial);
    let (second, removed2) = prune_with_report(&first, &all);
    Derivation {
        system,
        axiom_set: axioms,
        start,
        substituted,
        eliminated,
        stages: vec![
            PruneStage {
                label: "without-cross-term",
                axioms: partial,
                result: first,
                removed: removed1,
            },
            PruneStage {
                label: "full",
                axioms: all,
                result: second,
                removed: removed2,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::symfm::{Combo, VarMask};
    use TermSymbol::*;

    #[test]
    fn duplicate_up_to_axiom_removed() {
        // a1 <= d1 makes the second row redundant
        let s = LinearSystem::new(
            vec![
                Inequality::new(&[(RateVar::R1, int(1))], Combo::term(A1)),
                Inequality::new(&[(RateVar::R1, int(1))], Combo::term(D1)),
            ],
            VarMask::PAIR,
        );
        let (p, certs) = prune_with_report(&s, &axiom_set(AxiomSetId::Chain));
        assert_eq!(p.len(), 1);
        assert_eq!(p.rows()[0].rhs, Combo::term(A1));
        assert_eq!(certs[0].axioms_used, vec![(int(1), "a1 <= d1".to_string())]);
    }

    #[test]
    fn pure_facts_and_weaker_sums() {
        let s = LinearSystem::new(
            vec![
                Inequality::new(&[(RateVar::R1, int(1))], Combo::term(D1)),
                Inequality::new(&[(RateVar::R2, int(1))], Combo::term(D2)),
                Inequality::new(&[(RateVar::R1, int(1)), (RateVar::R2, int(1))], Combo::sum(&[D1, D2])),
                Inequality::new(&[], Combo::term(G1)),
            ],
            VarMask::PAIR,
        );
        let p = prune_redundant(&s, &[]);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn parse_ids() {
        assert_eq!("hk-mod".parse::<SystemId>().unwrap(), SystemId::HkModified);
        assert!("xx".parse::<SystemId>().is_err());
    }
}
