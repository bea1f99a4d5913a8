//! The bundled rate-region systems, written out as data, and their
//! evaluation on a distribution.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dist::{build_joint, DistError, FactorSpec, Form, JointDist};
use crate::polytope::{bind, Binding, HPoly, PolyError};
use crate::scalar::{int, Rational};
use crate::symfm::{Combo, Inequality, LinearSystem, RateVar, VarMask};
use crate::terms::{eval_terms, TermSymbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    /// Independent-auxiliary quadruple region.
    HkQ,
    /// Its (R1,R2) description.
    HkR,
    /// (R1,R2) region when cross-decoding errors are tolerated.
    HkRModified,
    /// Superposition quadruple region without private auxiliaries.
    CmgQ,
    CmgR,
    /// Seven-row (R1,R2) description shared by both families.
    CompactR,
    /// Correlated-auxiliary quadruple region.
    HodQ,
    HodR,
}

impl RegionId {
    pub const ALL: [RegionId; 8] = [
        RegionId::HkQ,
        RegionId::HkR,
        RegionId::HkRModified,
        RegionId::CmgQ,
        RegionId::CmgR,
        RegionId::CompactR,
        RegionId::HodQ,
        RegionId::HodR,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RegionId::HkQ => "hk-q",
            RegionId::HkR => "hk",
            RegionId::HkRModified => "hk-mod",
            RegionId::CmgQ => "cmg-q",
            RegionId::CmgR => "cmg",
            RegionId::CompactR => "compact",
            RegionId::HodQ => "hod-q",
            RegionId::HodR => "hod",
        }
    }

    pub fn is_quadruple(self) -> bool {
        matches!(self, RegionId::HkQ | RegionId::CmgQ | RegionId::HodQ)
    }

    /// Spec forms the region may be evaluated on.
    pub fn accepts(self, form: Form) -> bool {
        match self {
            RegionId::HkQ | RegionId::HkR | RegionId::HkRModified => form == Form::Hk2,
            RegionId::CmgQ | RegionId::CmgR => form == Form::Cmg9,
            RegionId::CompactR => matches!(form, Form::Hk2 | Form::Cmg9),
            RegionId::HodQ | RegionId::HodR => matches!(form, Form::Hod16 | Form::Hk2 | Form::General1),
        }
    }
}

impl FromStr for RegionId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        RegionId::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| format!("unknown region `{s}`"))
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

fn row(lhs: &[(RateVar, i64)], rhs: &[TermSymbol]) -> Inequality {
    let l: Vec<(RateVar, Rational)> = lhs.iter().map(|(v, k)| (*v, int(*k))).collect();
    Inequality::new(&l, Combo::sum(rhs))
}

/// Quadruple rows for one receiver. `own`/`cross`/`both` are the bounds on
/// `T_i`, `T_j` and `T_i + T_j`; `None` drops the row.
fn quadruple_side(
    side: u8,
    own: Option<TermSymbol>,
    cross: Option<TermSymbol>,
    both: Option<TermSymbol>,
) -> Vec<Inequality> {
    use RateVar::*;
    let t = |c| TermSymbol::base(c, side);
    let (s, ti, tj) = if side == 1 { (S1, T1, T2) } else { (S2, T2, T1) };
    let mut rows = vec![row(&[(s, 1)], &[t('a')])];
    if let Some(b) = own {
        rows.push(row(&[(ti, 1)], &[b]));
    }
    if let Some(c) = cross {
        rows.push(row(&[(tj, 1)], &[c]));
    }
    rows.push(row(&[(s, 1), (ti, 1)], &[t('d')]));
    rows.push(row(&[(s, 1), (tj, 1)], &[t('e')]));
    if let Some(f) = both {
        rows.push(row(&[(ti, 1), (tj, 1)], &[f]));
    }
    rows.push(row(&[(s, 1), (ti, 1), (tj, 1)], &[t('g')]));
    rows
}

/// Golden rows with stable labels, in the order they are usually listed.
pub fn labeled_rows(id: RegionId) -> Vec<(String, Inequality)> {
    use RateVar::*;
    use TermSymbol::*;
    let rows: Vec<Inequality> = match id {
        RegionId::HkQ => [1u8, 2]
            .iter()
            .flat_map(|&i| {
                let t = |c| TermSymbol::base(c, i);
                quadruple_side(i, Some(t('b')), Some(t('c')), Some(t('f')))
            })
            .collect(),
        RegionId::HodQ => {
            let mut r = quadruple_side(1, Some(BigB1), Some(BigC1), Some(BigF1));
            r.extend(quadruple_side(2, Some(BigB2), Some(BigC2), Some(BigF2)));
            r
        }
        RegionId::CmgQ => {
            let mut r = quadruple_side(1, None, None, None);
            r.extend(quadruple_side(2, None, None, None));
            r
        }
        RegionId::HkR => vec![
            row(&[(R1, 1)], &[D1]),
            row(&[(R1, 1)], &[A1, C2]),
            row(&[(R2, 1)], &[D2]),
            row(&[(R2, 1)], &[A2, C1]),
            row(&[(R1, 1), (R2, 1)], &[A1, G2]),
            row(&[(R1, 1), (R2, 1)], &[A2, G1]),
            row(&[(R1, 1), (R2, 1)], &[E1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, G1, E2]),
            row(&[(R1, 1), (R2, 2)], &[A2, G2, E1]),
        ],
        RegionId::HkRModified => vec![
            row(&[(R1, 1)], &[D1]),
            row(&[(R1, 1)], &[A1, E2]),
            row(&[(R1, 1)], &[A1, F2]),
            row(&[(R2, 1)], &[D2]),
            row(&[(R2, 1)], &[A2, E1]),
            row(&[(R2, 1)], &[A2, F1]),
            row(&[(R1, 1), (R2, 1)], &[A2, G1]),
            row(&[(R1, 1), (R2, 1)], &[A1, G2]),
            row(&[(R1, 1), (R2, 1)], &[E1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, G1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, A1, E2, F2]),
            row(&[(R1, 1), (R2, 2)], &[A2, G2, E1]),
            row(&[(R1, 1), (R2, 2)], &[A2, A2, E1, F1]),
        ],
        RegionId::CmgR => vec![
            row(&[(R1, 1)], &[D1]),
            row(&[(R1, 1)], &[A1, E2]),
            row(&[(R2, 1)], &[D2]),
            row(&[(R2, 1)], &[A2, E1]),
            row(&[(R1, 1), (R2, 1)], &[A1, G2]),
            row(&[(R1, 1), (R2, 1)], &[A2, G1]),
            row(&[(R1, 1), (R2, 1)], &[E1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, G1, E2]),
            row(&[(R1, 1), (R2, 2)], &[A2, G2, E1]),
        ],
        RegionId::CompactR => vec![
            row(&[(R1, 1)], &[D1]),
            row(&[(R2, 1)], &[D2]),
            row(&[(R1, 1), (R2, 1)], &[A1, G2]),
            row(&[(R1, 1), (R2, 1)], &[A2, G1]),
            row(&[(R1, 1), (R2, 1)], &[E1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, G1, E2]),
            row(&[(R1, 1), (R2, 2)], &[A2, G2, E1]),
        ],
        RegionId::HodR => vec![
            row(&[(R1, 1)], &[D1]),
            row(&[(R1, 1)], &[A1, BigC2]),
            row(&[(R1, 1)], &[A1, E2]),
            row(&[(R2, 1)], &[D2]),
            row(&[(R2, 1)], &[A2, BigC1]),
            row(&[(R2, 1)], &[A2, E1]),
            row(&[(R1, 1), (R2, 1)], &[A2, G1]),
            row(&[(R1, 1), (R2, 1)], &[A1, G2]),
            row(&[(R1, 1), (R2, 1)], &[E1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, G1, E2]),
            row(&[(R1, 2), (R2, 1)], &[A1, A1, E2, BigF2]),
            row(&[(R1, 1), (R2, 2)], &[A2, G2, E1]),
            row(&[(R1, 1), (R2, 2)], &[A2, A2, E1, BigF1]),
        ],
    };
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| (format!("{}/{}", id.tag(), i + 1), r))
        .collect()
}

/// Label of `row` within region `id`, if it is one of its golden rows.
pub fn label_of(id: RegionId, row: &Inequality) -> Option<String> {
    let c = row.canonical();
    labeled_rows(id).into_iter().find(|(_, r)| r.canonical() == c).map(|(l, _)| l)
}

fn nonneg_of(id: RegionId) -> VarMask {
    if id.is_quadruple() {
        VarMask::QUADRUPLE
    } else {
        VarMask::PAIR
    }
}

/// The golden system for `id`.
pub fn build_system(id: RegionId) -> LinearSystem {
    LinearSystem::new(labeled_rows(id).into_iter().map(|(_, r)| r).collect(), nonneg_of(id))
}

/// `(R1,R2)` golden HK rows plus the two weighted-sum rows that are implied
/// under independent auxiliaries.
pub fn hk_r_extended() -> LinearSystem {
    use RateVar::*;
    use TermSymbol::*;
    let mut rows: Vec<Inequality> = build_system(RegionId::HkR).rows().to_vec();
    rows.push(row(&[(R1, 2), (R2, 1)], &[A1, A1, E2, F2]));
    rows.push(row(&[(R1, 1), (R2, 2)], &[A2, A2, E1, F1]));
    LinearSystem::new(rows, VarMask::PAIR)
}

/// The independent-auxiliary quadruple system without the bounds on the
/// other sender's common rate at each receiver.
pub fn hk_quadruple_without_cross_bounds() -> LinearSystem {
    let mut rows = quadruple_side(1, Some(TermSymbol::B1), None, Some(TermSymbol::F1));
    rows.extend(quadruple_side(2, Some(TermSymbol::B2), None, Some(TermSymbol::F2)));
    LinearSystem::new(rows, VarMask::QUADRUPLE)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("region `{region}` cannot be evaluated on a {form} spec{hint}")]
    FormMismatch {
        region: RegionId,
        form: Form,
        hint: &'static str,
    },
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Terms of `spec`'s joint, snapped.
pub fn binding_for(spec: &FactorSpec) -> Result<Binding, DistError> {
    let joint: JointDist<f64> = build_joint(spec)?;
    Ok(Binding::from_terms(&eval_terms(&joint)))
}

pub fn check_form(spec: &FactorSpec, id: RegionId) -> Result<(), RegionError> {
    if id.accepts(spec.form) {
        return Ok(());
    }
    let hint = if matches!(spec.form, Form::Hod16 | Form::General1) {
        "; use the independence projection to obtain an hk2 spec"
    } else {
        ""
    };
    Err(RegionError::FormMismatch {
        region: id,
        form: spec.form,
        hint,
    })
}

/// Bound polytope of region `id` for the distribution `spec`.
pub fn region_for(spec: &FactorSpec, id: RegionId) -> Result<HPoly<Rational>, RegionError> {
    check_form(spec, id)?;
    let b = binding_for(spec)?;
    Ok(bind(&build_system(id), &b)?)
}
