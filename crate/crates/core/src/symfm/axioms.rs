use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{Combo, SymError};
use crate::terms::TermSymbol;

/// Which kind of information fact an axiom encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomFamily {
    /// Conditioning on more of the auxiliaries never lowers the information.
    Monotone,
    /// `B = b + rho`, `C = c + rho`, `F = f + rho`.
    Identity,
    /// Two-variable chain-rule comparisons, corrected by `rho` where the
    /// auxiliaries may be dependent.
    Exchange,
    /// `c + g <= e + f (+ rho)`: the comparison the region's two weighted
    /// sum-rate bounds hinge on.
    CrossTerm,
    /// `rho <= 0`, i.e. the auxiliaries of a sender are independent.
    Independence,
}

/// A named term fact `fact >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom {
    pub name: String,
    pub family: AxiomFamily,
    #[serde(serialize_with = "ser_combo")]
    pub fact: Combo,
}

fn ser_combo<S: serde::Serializer>(c: &Combo, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{c} >= 0"))
}

impl Axiom {
    fn le(family: AxiomFamily, lo: &[TermSymbol], hi: &[TermSymbol]) -> Axiom {
        let fact = Combo::sum(hi).sub(&Combo::sum(lo));
        let show = |ts: &[TermSymbol]| {
            if ts.is_empty() {
                "0".to_string()
            } else {
                ts.iter().map(|t| t.name()).collect::<Vec<_>>().join("+")
            }
        };
        Axiom {
            name: format!("{} <= {}", show(lo), show(hi)),
            family,
            fact,
        }
    }
}

/// Named axiom sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomSetId {
    /// Facts valid for every admissible input distribution.
    Chain,
    /// `Chain` plus independence of each sender's auxiliaries.
    HkIndep,
}

impl AxiomSetId {
    pub fn tag(self) -> &'static str {
        match self {
            AxiomSetId::Chain => "chain",
            AxiomSetId::HkIndep => "hk-indep",
        }
    }
}

impl FromStr for AxiomSetId {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        match s {
            "chain" => Ok(AxiomSetId::Chain),
            "hk-indep" => Ok(AxiomSetId::HkIndep),
            _ => Err(SymError::UnknownAxioms(s.to_string())),
        }
    }
}

impl fmt::Display for AxiomSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn axiom_set(id: AxiomSetId) -> Vec<Axiom> {
    use AxiomFamily::*;
    let mut out = Vec::new();
    for side in [1u8, 2] {
        let t = |c| TermSymbol::base(c, side);
        let (a, b, c, d, e, f, g) = (t('a'), t('b'), t('c'), t('d'), t('e'), t('f'), t('g'));
        let (big_b, big_c, big_f, rho) = if side == 1 {
            (TermSymbol::BigB1, TermSymbol::BigC1, TermSymbol::BigF1, TermSymbol::Rho1)
        } else {
            (TermSymbol::BigB2, TermSymbol::BigC2, TermSymbol::BigF2, TermSymbol::Rho2)
        };
        for (lo, hi) in [(f, g), (e, g), (d, g), (c, f), (b, f), (c, e), (a, e), (b, d), (a, d)] {
            out.push(Axiom::le(Monotone, &[lo], &[hi]));
        }
        for (big, small) in [(big_b, b), (big_c, c), (big_f, f)] {
            out.push(Axiom::le(Identity, &[big], &[small, rho]));
            out.push(Axiom::le(Identity, &[small, rho], &[big]));
        }
        out.push(Axiom::le(Exchange, &[b, g], &[d, f]));
        out.push(Axiom::le(Exchange, &[e], &[a, c]));
        out.push(Axiom::le(Exchange, &[a, g], &[d, e]));
        out.push(Axiom::le(Exchange, &[f], &[b, c]));
        out.push(Axiom::le(Exchange, &[d], &[a, b, rho]));
        out.push(Axiom::le(CrossTerm, &[c, g], &[e, f, rho]));
        if id == AxiomSetId::HkIndep {
            out.push(Axiom::le(Independence, &[rho], &[]));
            out.push(Axiom::le(CrossTerm, &[c, g], &[e, f]));
        }
    }
    debug_assert!(out.iter().all(|a| !a.fact.is_zero()));
    out
}
