//! Named information terms of the rate regions.
//!
//! For receiver `i` with own private/common auxiliaries `U_i, W_i` and the
//! other sender's common auxiliary `W_j`, every term is a conditional mutual
//! information with the output `Y_i`, all conditioned on `Q`:
//!
//! | term | value |
//! |------|-------|
//! | `a_i` | I(Y_i; U_i \| W_i W_j Q) |
//! | `b_i` | I(Y_i; W_i \| U_i W_j Q) |
//! | `c_i` | I(Y_i; W_j \| U_i W_i Q) |
//! | `d_i` | I(Y_i; U_i W_i \| W_j Q) |
//! | `e_i` | I(Y_i; U_i W_j \| W_i Q) |
//! | `f_i` | I(Y_i; W_i W_j \| U_i Q) |
//! | `g_i` | I(Y_i; U_i W_i W_j \| Q) |
//! | `rho_i` | I(U_i; W_i \| Q) |
//!
//! and the correlated-auxiliary terms `B_i = b_i + rho_i`,
//! `C_i = c_i + rho_i`, `F_i = f_i + rho_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dist::{build_joint, DistError, FactorSpec, Form, JointDist, VarSet, VariableId};
use crate::scalar::Probability;
use VariableId::*;

/// One of the 22 term symbols, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermSymbol {
    A1,
    B1,
    C1,
    D1,
    E1,
    F1,
    G1,
    A2,
    B2,
    C2,
    D2,
    E2,
    F2,
    G2,
    BigB1,
    BigC1,
    BigF1,
    BigB2,
    BigC2,
    BigF2,
    Rho1,
    Rho2,
}

impl TermSymbol {
    pub const COUNT: usize = 22;

    pub const ALL: [TermSymbol; 22] = {
        use TermSymbol::*;
        [
            A1, B1, C1, D1, E1, F1, G1, A2, B2, C2, D2, E2, F2, G2, BigB1, BigC1, BigF1, BigB2,
            BigC2, BigF2, Rho1, Rho2,
        ]
    };

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        use TermSymbol::*;
        match self {
            A1 => "a1",
            B1 => "b1",
            C1 => "c1",
            D1 => "d1",
            E1 => "e1",
            F1 => "f1",
            G1 => "g1",
            A2 => "a2",
            B2 => "b2",
            C2 => "c2",
            D2 => "d2",
            E2 => "e2",
            F2 => "f2",
            G2 => "g2",
            BigB1 => "B1",
            BigC1 => "C1",
            BigF1 => "F1",
            BigB2 => "B2",
            BigC2 => "C2",
            BigF2 => "F2",
            Rho1 => "rho1",
            Rho2 => "rho2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Receiver side (1 or 2) the term belongs to.
    pub fn side(self) -> u8 {
        use TermSymbol::*;
        match self {
            A1 | B1 | C1 | D1 | E1 | F1 | G1 | BigB1 | BigC1 | BigF1 | Rho1 => 1,
            _ => 2,
        }
    }

    /// For the correlated-auxiliary terms, the base term and the correlation
    /// term they are the sum of.
    pub fn decomposition(self) -> Option<(TermSymbol, TermSymbol)> {
        use TermSymbol::*;
        match self {
            BigB1 => Some((B1, Rho1)),
            BigC1 => Some((C1, Rho1)),
            BigF1 => Some((F1, Rho1)),
            BigB2 => Some((B2, Rho2)),
            BigC2 => Some((C2, Rho2)),
            BigF2 => Some((F2, Rho2)),
            _ => None,
        }
    }

    /// Base term `letter` (one of `abcdefg`) on `side`.
    pub fn base(letter: char, side: u8) -> TermSymbol {
        let off = "abcdefg".find(letter).expect("letter in a..g");
        Self::ALL[(side as usize - 1) * 7 + off]
    }
}

impl fmt::Display for TermSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for TermSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for TermSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TermSymbol::from_name(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown term `{s}`")))
    }
}

/// Values of all 22 terms, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TermVector<P>([P; TermSymbol::COUNT]);

impl<P: Probability> TermVector<P> {
    pub fn zeros() -> Self {
        TermVector([P::zero(); TermSymbol::COUNT])
    }

    pub fn get(&self, t: TermSymbol) -> P {
        self.0[t.index()]
    }

    pub fn set(&mut self, t: TermSymbol, v: P) {
        self.0[t.index()] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermSymbol, P)> + '_ {
        TermSymbol::ALL.into_iter().map(move |t| (t, self.get(t)))
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.iter()
            .map(|(t, v)| (t.name().to_string(), v.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Largest violation of the structural identities and chain-rule
    /// orderings; zero for an exactly consistent vector.
    pub fn identity_defect(&self) -> P {
        let mut worst = P::zero();
        let mut upd = |x: P| {
            if x > worst {
                worst = x;
            }
        };
        for t in TermSymbol::ALL {
            upd(-self.get(t));
            if let Some((base, rho)) = t.decomposition() {
                upd((self.get(t) - self.get(base) - self.get(rho)).abs());
            }
        }
        for side in [1u8, 2] {
            let g = |c| self.get(TermSymbol::base(c, side));
            for (lo, hi) in [
                ('a', 'd'),
                ('d', 'g'),
                ('b', 'd'),
                ('c', 'f'),
                ('f', 'g'),
                ('a', 'e'),
                ('e', 'g'),
                ('b', 'f'),
                ('c', 'e'),
            ] {
                upd(g(lo) - g(hi));
            }
        }
        worst
    }
}

impl<P: Probability> Serialize for TermVector<P> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TermVector<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, f64>::deserialize(d)?;
        let mut tv = TermVector::<f64>::zeros();
        for (k, v) in &m {
            let t = TermSymbol::from_name(k)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown term `{k}`")))?;
            tv.set(t, *v);
        }
        for t in TermSymbol::ALL {
            if !m.contains_key(t.name()) {
                return Err(serde::de::Error::custom(format!("missing term `{t}`")));
            }
        }
        Ok(tv)
    }
}

/// Per-receiver roles: (output, private, own common, other common).
fn roles(side: u8) -> (VariableId, VariableId, VariableId, VariableId) {
    if side == 1 {
        (Y1, U1, W1, W2)
    } else {
        (Y2, U2, W2, W1)
    }
}

/// Evaluate all 22 terms from the full joint.
pub fn eval_terms<P: Probability>(joint: &JointDist<P>) -> TermVector<P> {
    let mut tv = TermVector::zeros();
    for side in [1u8, 2] {
        let (y, u, w, v) = roles(side);
        let local = joint
            .tensor()
            .reduce(VarSet::of(&[Q, y, u, w, v]));
        let mi = |a: &[VariableId], c: &[VariableId]| {
            let mut cond = VarSet::of(c);
            cond.insert(Q);
            crate::dist::cmi_local(&local, VarSet::of(&[y]), VarSet::of(a), cond)
        };
        let vals = [
            mi(&[u], &[w, v]),
            mi(&[w], &[u, v]),
            mi(&[v], &[u, w]),
            mi(&[u, w], &[v]),
            mi(&[u, v], &[w]),
            mi(&[w, v], &[u]),
            mi(&[u, w, v], &[]),
        ];
        for (k, val) in vals.into_iter().enumerate() {
            tv.set(TermSymbol::base("abcdefg".as_bytes()[k] as char, side), val);
        }
        let rho = crate::dist::cmi_local(&local, VarSet::of(&[u]), VarSet::of(&[w]), VarSet::of(&[Q]));
        let (big_b, big_c, big_f, rho_sym) = if side == 1 {
            (TermSymbol::BigB1, TermSymbol::BigC1, TermSymbol::BigF1, TermSymbol::Rho1)
        } else {
            (TermSymbol::BigB2, TermSymbol::BigC2, TermSymbol::BigF2, TermSymbol::Rho2)
        };
        tv.set(rho_sym, rho);
        tv.set(big_b, tv.get(TermSymbol::base('b', side)) + rho);
        tv.set(big_c, tv.get(TermSymbol::base('c', side)) + rho);
        tv.set(big_f, tv.get(TermSymbol::base('f', side)) + rho);
    }
    tv
}

/// Build the joint of `spec` in `f64` and evaluate its terms.
pub fn eval_spec_terms(spec: &FactorSpec) -> Result<TermVector<f64>, DistError> {
    Ok(eval_terms(&build_joint::<f64>(spec)?))
}

/// One row of [`cmg_identity_report`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub term: String,
    /// The term computed through the private auxiliary axis.
    pub via_aux: f64,
    /// The same quantity written with the channel input.
    pub via_input: f64,
    pub abs_diff: f64,
}

/// For a `cmg9` spec, compare each of `a_i, d_i, e_i, g_i` against its
/// expression in terms of the channel input `X_i`.
pub fn cmg_identity_report(spec: &FactorSpec) -> Result<Vec<IdentityRow>, DistError> {
    if spec.form != Form::Cmg9 {
        return Err(DistError::WrongForm {
            expected: "cmg9".into(),
            found: spec.form,
        });
    }
    let joint: JointDist<f64> = build_joint(spec)?;
    let t = joint.tensor();
    let mut rows = Vec::with_capacity(8);
    for side in [1u8, 2] {
        let (y, u, w, v) = roles(side);
        let x = if side == 1 { X1 } else { X2 };
        let mi = |a: &[VariableId], c: &[VariableId]| {
            let mut cond = VarSet::of(c);
            cond.insert(Q);
            t.cond_mutual_info(VarSet::of(&[y]), VarSet::of(a), cond)
        };
        let pairs = [
            ('a', mi(&[u], &[w, v])?, mi(&[x], &[w, v])?),
            ('d', mi(&[u, w], &[v])?, mi(&[x], &[v])?),
            ('e', mi(&[u, v], &[w])?, mi(&[x, v], &[w])?),
            ('g', mi(&[u, w, v], &[])?, mi(&[x, v], &[])?),
        ];
        for (letter, via_aux, via_input) in pairs {
            rows.push(IdentityRow {
                term: TermSymbol::base(letter, side).name().to_string(),
                via_aux,
                via_input,
                abs_diff: (via_aux - via_input).abs(),
            });
        }
    }
    Ok(rows)
}
