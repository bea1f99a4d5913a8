use num_traits::{One, Zero};

use super::{Combo, Ineq, Inequality, LinearSystem, RateVar, Rhs, SymError, VarMask};
use crate::scalar::{Field, Rational};

/// One Fourier–Motzkin step on raw rows. When `nonneg` is set, `v >= 0`
/// is used as an extra lower bound. The result is canonicalized and
/// deduplicated in first-occurrence order; rows reading `0 <= 0` are dropped.
pub fn eliminate_rows<F, R>(rows: &[Ineq<F, R>], v: RateVar, nonneg: bool) -> Vec<Ineq<F, R>>
where
    F: Field,
    R: Rhs<F>,
{
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out: Vec<Ineq<F, R>> = Vec::new();
    for r in rows {
        let k = r.coef(v);
        if *k > F::zero() {
            upper.push(r.clone());
        } else if *k < F::zero() {
            lower.push(r.clone());
        } else {
            out.push(r.clone());
        }
    }
    if nonneg {
        lower.push(Ineq::nonneg(v));
    }
    for u in &upper {
        let cu = u.coef(v).clone();
        for l in &lower {
            let cl = -l.coef(v).clone();
            let mut row = u.scaled(&cl).plus(&l.scaled(&cu));
            row.lhs[v.index()] = F::zero();
            out.push(row);
        }
    }
    let mut dedup: Vec<Ineq<F, R>> = Vec::with_capacity(out.len());
    for r in out {
        if r.is_pure() && r.rhs.is_zero_rhs() {
            continue;
        }
        let c = r.canonical();
        if !dedup.contains(&c) {
            dedup.push(c);
        }
    }
    dedup
}

/// Eliminate `v` from a symbolic system.
pub fn fm_eliminate(system: &LinearSystem, v: RateVar) -> LinearSystem {
    let rows = eliminate_rows(system.rows(), v, system.nonneg().contains(v));
    let mut nonneg = system.nonneg();
    nonneg.remove(v);
    LinearSystem::new(rows, nonneg).with_axioms(system.axioms().to_vec())
}

/// Replace `S_i` by `R_i - T_i`, adding `T_i <= R_i` and nonnegativity of
/// `R_i, T_i`.
pub fn substitute_rate_sums(system: &LinearSystem) -> Result<LinearSystem, SymError> {
    if system.vars().contains(RateVar::R1) || system.vars().contains(RateVar::R2) {
        return Err(SymError::AlreadySubstituted);
    }
    let mut rows: Vec<Inequality> = system
        .rows()
        .iter()
        .map(|r| {
            let mut lhs = r.lhs.clone();
            for (s, t, rr) in [
                (RateVar::S1, RateVar::T1, RateVar::R1),
                (RateVar::S2, RateVar::T2, RateVar::R2),
            ] {
                let k = std::mem::replace(&mut lhs[s.index()], <Rational as Zero>::zero());
                lhs[rr.index()] += &k;
                lhs[t.index()] -= &k;
            }
            Ineq { lhs, rhs: r.rhs.clone() }
        })
        .collect();
    rows.push(Inequality::new(
        &[(RateVar::T1, Rational::one()), (RateVar::R1, -Rational::one())],
        Combo::new(),
    ));
    rows.push(Inequality::new(
        &[(RateVar::T2, Rational::one()), (RateVar::R2, -Rational::one())],
        Combo::new(),
    ));
    let nonneg = VarMask::of(&[RateVar::T1, RateVar::T2, RateVar::R1, RateVar::R2]);
    Ok(LinearSystem::new(rows, nonneg).with_axioms(system.axioms().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::terms::TermSymbol::*;

    #[test]
    fn one_pair_each() {
        // {x <= a, y - x <= b, x >= 0}, eliminate x
        let x = RateVar::T1;
        let y = RateVar::R1;
        let s = LinearSystem::new(
            vec![
                Inequality::new(&[(x, int(1))], Combo::term(A1)),
                Inequality::new(&[(y, int(1)), (x, int(-1))], Combo::term(B1)),
            ],
            VarMask::of(&[x]),
        );
        let e = fm_eliminate(&s, x);
        let want = LinearSystem::new(
            vec![
                Inequality::new(&[(y, int(1))], Combo::sum(&[A1, B1])),
                Inequality::new(&[], Combo::term(A1)),
            ],
            VarMask::EMPTY,
        );
        assert_eq!(e, want);
    }

    #[test]
    fn absent_variable_is_noop() {
        let s = LinearSystem::new(
            vec![Inequality::new(&[(RateVar::R1, int(1))], Combo::term(D1))],
            VarMask::PAIR,
        );
        assert_eq!(fm_eliminate(&s, RateVar::T2), s);
    }

    #[test]
    fn substitution() {
        let s = LinearSystem::new(
            vec![
                Inequality::new(&[(RateVar::S1, int(1))], Combo::term(A1)),
                Inequality::new(&[(RateVar::S1, int(1)), (RateVar::T1, int(1))], Combo::term(D1)),
            ],
            VarMask::QUADRUPLE,
        );
        let t = substitute_rate_sums(&s).unwrap();
        assert!(t.contains_row(&Inequality::new(
            &[(RateVar::R1, int(1)), (RateVar::T1, int(-1))],
            Combo::term(A1)
        )));
        assert!(t.contains_row(&Inequality::new(&[(RateVar::R1, int(1))], Combo::term(D1))));
        assert!(t.contains_row(&Inequality::new(
            &[(RateVar::T2, int(1)), (RateVar::R2, int(-1))],
            Combo::new()
        )));
        assert_eq!(t.len(), 4);
        assert_eq!(substitute_rate_sums(&t), Err(SymError::AlreadySubstituted));
    }
}
