//! Library results against independently coded reference computations.

use std::collections::BTreeSet;

use icregion::dist::{build_joint, cond_mutual_info, AlphabetSpec, FactorSpec, Form, JointDist, VarSet, VariableId};
use icregion::polytope::HPoly;
use icregion::regions::{region_for, RegionId};
use icregion::sampler::sample_nth;
use icregion::scalar::{to_f64, Rational};
use icregion::symfm::RateVar;
use icregion::terms::{eval_terms, TermSymbol};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use VariableId::*;

const MUTUAL_INFO_02: f64 = 0.2780719051126377;

fn binary() -> AlphabetSpec {
    AlphabetSpec::uniform(2).unwrap()
}

/// Joint tensor by explicit nested loops over all nine variables.
fn naive_joint(s: &FactorSpec) -> Vec<f64> {
    let a = |v: VariableId| s.alphabets.get(v);
    let mut out = Vec::new();
    for q in 0..a(Q) {
        for u1 in 0..a(U1) {
            for w1 in 0..a(W1) {
                for u2 in 0..a(U2) {
                    for w2 in 0..a(W2) {
                        for x1 in 0..a(X1) {
                            for x2 in 0..a(X2) {
                                for y1 in 0..a(Y1) {
                                    for y2 in 0..a(Y2) {
                                        let pu1 = match s.form {
                                            Form::Hk2 => s.u1.at(&[q, u1]),
                                            _ => s.u1.at(&[q, w1, u1]),
                                        };
                                        let pu2 = match s.form {
                                            Form::Hk2 => s.u2.at(&[q, u2]),
                                            _ => s.u2.at(&[q, w2, u2]),
                                        };
                                        let px1 = match &s.x1 {
                                            Some(t) => t.at(&[q, u1, w1, x1]),
                                            None => f64::from(u8::from(u1 == x1)),
                                        };
                                        let px2 = match &s.x2 {
                                            Some(t) => t.at(&[q, u2, w2, x2]),
                                            None => f64::from(u8::from(u2 == x2)),
                                        };
                                        out.push(
                                            s.q.at(&[q])
                                                * s.w1.at(&[q, w1])
                                                * pu1
                                                * s.w2.at(&[q, w2])
                                                * pu2
                                                * px1
                                                * px2
                                                * s.channel.at(&[x1, x2, y1, y2]),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn index(sizes: &[usize; 9], mut flat: usize) -> [usize; 9] {
    let mut idx = [0; 9];
    for k in (0..9).rev() {
        idx[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    idx
}

fn entropy(p: &[f64], sizes: &[usize; 9], keep: &[VariableId]) -> f64 {
    let mut m = std::collections::HashMap::<Vec<usize>, f64>::new();
    for (i, &v) in p.iter().enumerate() {
        let idx = index(sizes, i);
        let key: Vec<usize> = keep.iter().map(|k| idx[k.index()]).collect();
        *m.entry(key).or_default() += v;
    }
    m.values().filter(|v| **v > 0.0).map(|v| -v * v.log2()).sum()
}

fn cmi(p: &[f64], sizes: &[usize; 9], a: &[VariableId], b: &[VariableId], c: &[VariableId]) -> f64 {
    let cat = |x: &[VariableId], y: &[VariableId]| -> Vec<VariableId> { x.iter().chain(y).copied().collect() };
    entropy(p, sizes, &cat(a, c)) + entropy(p, sizes, &cat(b, c))
        - entropy(p, sizes, &cat(&cat(a, b), c))
        - entropy(p, sizes, c)
}

fn term_oracle(p: &[f64], sizes: &[usize; 9], t: TermSymbol) -> f64 {
    let side = t.side();
    let (y, u, w, v) = if side == 1 { (Y1, U1, W1, W2) } else { (Y2, U2, W2, W1) };
    let rho = cmi(p, sizes, &[u], &[w], &[Q]);
    let name = t.name();
    let letter = name.chars().next().unwrap();
    match letter {
        'a' => cmi(p, sizes, &[y], &[u], &[w, v, Q]),
        'b' => cmi(p, sizes, &[y], &[w], &[u, v, Q]),
        'c' => cmi(p, sizes, &[y], &[v], &[u, w, Q]),
        'd' => cmi(p, sizes, &[y], &[u, w], &[v, Q]),
        'e' => cmi(p, sizes, &[y], &[u, v], &[w, Q]),
        'f' => cmi(p, sizes, &[y], &[w, v], &[u, Q]),
        'g' => cmi(p, sizes, &[y], &[u, w, v], &[Q]),
        'B' => cmi(p, sizes, &[y], &[w], &[u, v, Q]) + rho,
        'C' => cmi(p, sizes, &[y], &[v], &[u, w, Q]) + rho,
        'F' => cmi(p, sizes, &[y], &[w, v], &[u, Q]) + rho,
        'r' => rho,
        _ => unreachable!("{name}"),
    }
}

#[test]
fn joint_matches_nested_loops() {
    for form in [Form::Hk2, Form::Hod16, Form::Cmg9] {
        for i in 0..5 {
            let s = sample_nth(binary(), form, 11, i);
            let j: JointDist<f64> = build_joint(&s).unwrap();
            let naive = naive_joint(&s);
            let sizes = s.alphabets.sizes();
            for (k, p) in naive.iter().enumerate() {
                assert!((j.at(index(&sizes, k)) - p).abs() < 1e-15, "{form} sample {i} entry {k}");
            }
        }
    }
}

#[test]
fn frozen_mutual_information() {
    let mut sizes = [1; 9];
    sizes[X1.index()] = 2;
    sizes[Y1.index()] = 2;
    let a = AlphabetSpec::new(sizes).unwrap();
    // axes X1 before Y1; rows are x, columns y
    let j = JointDist::from_tensor(a, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
    let v = cond_mutual_info(&j, VarSet::of(&[X1]), VarSet::of(&[Y1]), VarSet::of(&[])).unwrap();
    assert!((v - MUTUAL_INFO_02).abs() < 1e-12, "{v}");
    let h = icregion::dist::entropy(&j, VarSet::of(&[X1])).unwrap();
    assert!((h - 1.0).abs() < 1e-15);
}

#[test]
fn terms_match_entropy_oracle() {
    for form in [Form::Hk2, Form::Hod16, Form::Cmg9] {
        for i in 0..8 {
            let s = sample_nth(binary(), form, 23, i);
            let tv = eval_terms(&build_joint::<f64>(&s).unwrap());
            let p = naive_joint(&s);
            let sizes = s.alphabets.sizes();
            for t in TermSymbol::ALL {
                let want = term_oracle(&p, &sizes, t);
                assert!(
                    (tv.get(t) - want).abs() < 1e-10,
                    "{form} #{i} {}: {} vs {want}",
                    t.name(),
                    tv.get(t)
                );
            }
        }
    }
}

#[test]
fn mixed_alphabet_terms_match_oracle() {
    let mut a = binary();
    a.set(Q, 1);
    a.set(U1, 3);
    a.set(W2, 3);
    a.set(Y2, 3);
    let s = sample_nth(a, Form::Hod16, 5, 0);
    let tv = eval_terms(&build_joint::<f64>(&s).unwrap());
    let p = naive_joint(&s);
    for t in TermSymbol::ALL {
        assert!((tv.get(t) - term_oracle(&p, &s.alphabets.sizes(), t)).abs() < 1e-10);
    }
}

/// Every feasible pairwise intersection of the boundary lines, axes
/// included; in the plane each one is an extreme point.
fn brute_vertices(p: &HPoly<Rational>) -> BTreeSet<(Rational, Rational)> {
    let zero = Rational::zero;
    let one = || Rational::from_integer(1.into());
    let mut lines: Vec<(Rational, Rational, Rational)> = p
        .rows()
        .iter()
        .filter(|r| !r.is_pure())
        .map(|r| (r.coef(RateVar::R1).clone(), r.coef(RateVar::R2).clone(), r.rhs.clone()))
        .collect();
    lines.push((-one(), zero(), zero()));
    lines.push((zero(), -one(), zero()));
    let mut out = BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b, c) = &lines[i];
            let (d, e, f) = &lines[j];
            let det = a.clone() * e.clone() - b.clone() * d.clone();
            if det.is_zero() {
                continue;
            }
            let x = (c.clone() * e.clone() - b.clone() * f.clone()) / det.clone();
            let y = (a.clone() * f.clone() - c.clone() * d.clone()) / det;
            let feasible = lines
                .iter()
                .all(|(p, q, r)| p.clone() * x.clone() + q.clone() * y.clone() <= *r);
            if feasible {
                out.insert((x, y));
            }
        }
    }
    out
}

fn golden_cases() -> Vec<(RegionId, Form)> {
    vec![
        (RegionId::HkR, Form::Hk2),
        (RegionId::HkRModified, Form::Hk2),
        (RegionId::CompactR, Form::Hk2),
        (RegionId::HodR, Form::Hk2),
        (RegionId::CmgR, Form::Cmg9),
        (RegionId::CompactR, Form::Cmg9),
        (RegionId::HodR, Form::Hod16),
    ]
}

#[test]
fn vertices_match_pairwise_oracle() {
    for (id, form) in golden_cases() {
        for i in 0..20 {
            let s = sample_nth(binary(), form, 31, i);
            let p = region_for(&s, id).unwrap();
            let got: BTreeSet<(Rational, Rational)> =
                p.vertices2().unwrap().into_iter().map(|[x, y]| (x, y)).collect();
            assert_eq!(got, brute_vertices(&p), "{id} on {form} #{i}");
        }
    }
}

#[test]
fn degenerate_region_is_origin() {
    let s = FactorSpec::degenerate(Form::Hk2);
    let p = region_for(&s, RegionId::HkR).unwrap();
    let v = p.vertices2().unwrap();
    assert_eq!(v.len(), 1);
    assert!(v[0].iter().all(Zero::is_zero));
    assert!(p.area2().unwrap().is_zero());
}

#[test]
fn area_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..5 {
        let s = sample_nth(binary(), Form::Hod16, 41, i);
        let p = region_for(&s, RegionId::HodR).unwrap();
        let v = p.vertices2().unwrap();
        let xmax = v.iter().map(|q| to_f64(&q[0])).fold(0.0, f64::max);
        let ymax = v.iter().map(|q| to_f64(&q[1])).fold(0.0, f64::max);
        let pf = icregion::polytope::to_f64(&p);
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| pf.contains_point(&[rng.gen::<f64>() * xmax, rng.gen::<f64>() * ymax]))
            .count();
        let mc = xmax * ymax * hits as f64 / n as f64;
        let exact = to_f64(&p.area2().unwrap());
        // binomial standard error is well below 1% of the box here
        assert!((mc - exact).abs() < 0.01 * xmax * ymax, "#{i}: {mc} vs {exact}");
        assert!(!p.area2().unwrap().is_negative());
    }
}
