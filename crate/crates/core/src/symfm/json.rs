use serde_json::{json, Map, Value};

use super::{Combo, Inequality, LinearSystem, RateVar, SymError, VarMask};
use crate::scalar::{rational_from_json, rational_json, Rational};
use crate::terms::TermSymbol;

/// Key under which a constant right-hand-side term is written.
pub const CONSTANT_KEY: &str = "const";

fn row_json(r: &Inequality) -> Value {
    let mut lhs = Map::new();
    for v in RateVar::ALL {
        let k = r.coef(v);
        if !num_traits::Zero::is_zero(k) {
            lhs.insert(v.name().to_string(), rational_json(k));
        }
    }
    let mut rhs = Map::new();
    for (t, k) in r.rhs.terms() {
        rhs.insert(t.name().to_string(), rational_json(k));
    }
    if !num_traits::Zero::is_zero(r.rhs.constant()) {
        rhs.insert(CONSTANT_KEY.to_string(), rational_json(r.rhs.constant()));
    }
    json!({ "lhs": lhs, "rhs": rhs, "text": r.to_string() })
}

pub fn system_to_json(s: &LinearSystem) -> Value {
    json!({
        "variables": s.vars().iter().map(|v| v.name()).collect::<Vec<_>>(),
        "nonnegative": s.nonneg().iter().map(|v| v.name()).collect::<Vec<_>>(),
        "inequalities": s.rows().iter().map(row_json).collect::<Vec<_>>(),
    })
}

fn coef(v: &Value, ctx: &str) -> Result<Rational, SymError> {
    rational_from_json(v).ok_or_else(|| SymError::Json(format!("{ctx}: bad coefficient {v}")))
}

fn parse_row(v: &Value, i: usize) -> Result<Inequality, SymError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SymError::Json(format!("inequality {i} is not an object")))?;
    let mut lhs = Vec::new();
    if let Some(l) = obj.get("lhs") {
        let l = l
            .as_object()
            .ok_or_else(|| SymError::Json(format!("inequality {i}: lhs is not an object")))?;
        for (k, c) in l {
            let var = RateVar::from_name(k)
                .ok_or_else(|| SymError::Json(format!("inequality {i}: unknown rate variable `{k}`")))?;
            lhs.push((var, coef(c, &format!("inequality {i}"))?));
        }
    }
    let mut rhs = Combo::new();
    if let Some(r) = obj.get("rhs") {
        let r = r
            .as_object()
            .ok_or_else(|| SymError::Json(format!("inequality {i}: rhs is not an object")))?;
        for (k, c) in r {
            let c = coef(c, &format!("inequality {i}"))?;
            if k == CONSTANT_KEY {
                rhs = rhs.add_constant(c);
            } else {
                let t = TermSymbol::from_name(k)
                    .ok_or_else(|| SymError::Json(format!("inequality {i}: unknown term `{k}`")))?;
                rhs.add_term(t, c);
            }
        }
    }
    for key in obj.keys() {
        if !matches!(key.as_str(), "lhs" | "rhs" | "text") {
            return Err(SymError::Json(format!("inequality {i}: unknown key `{key}`")));
        }
    }
    Ok(Inequality::new(&lhs, rhs))
}

/// Read a system. `nonnegative` defaults to every variable that appears.
pub fn system_from_json(v: &Value) -> Result<LinearSystem, SymError> {
    let rows = v
        .get("inequalities")
        .and_then(Value::as_array)
        .ok_or_else(|| SymError::Json("missing `inequalities` array".into()))?;
    let rows: Vec<Inequality> = rows.iter().enumerate().map(|(i, r)| parse_row(r, i)).collect::<Result<_, _>>()?;
    let nonneg = match v.get("nonnegative") {
        Some(Value::Array(a)) => {
            let mut m = VarMask::EMPTY;
            for x in a {
                let name = x.as_str().unwrap_or_default();
                m.insert(
                    RateVar::from_name(name)
                        .ok_or_else(|| SymError::Json(format!("unknown rate variable `{x}`")))?,
                );
            }
            m
        }
        Some(_) => return Err(SymError::Json("`nonnegative` must be an array".into())),
        None => rows.iter().fold(VarMask::EMPTY, |m, r| m.union(r.vars())),
    };
    Ok(LinearSystem::new(rows, nonneg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use TermSymbol::*;

    #[test]
    fn roundtrip() {
        let s = LinearSystem::new(
            vec![
                Inequality::new(&[(RateVar::R1, int(2)), (RateVar::R2, int(1))], Combo::sum(&[A1, G1, E2])),
                Inequality::new(&[(RateVar::R1, int(1))], Combo::term(D1).add_constant(rat(1, 2))),
            ],
            VarMask::PAIR,
        );
        let v = system_to_json(&s);
        assert_eq!(v["inequalities"][1]["lhs"], json!({"R1": 2, "R2": 1}));
        assert_eq!(v["inequalities"][1]["rhs"], json!({"a1": 1, "g1": 1, "e2": 1}));
        assert_eq!(system_from_json(&v).unwrap(), s);
    }

    #[test]
    fn rejects_unknown_names() {
        let v = json!({"inequalities": [{"lhs": {"X": 1}, "rhs": {}}]});
        assert!(system_from_json(&v).is_err());
        let v = json!({"inequalities": [{"lhs": {"R1": 1}, "rhs": {"zz": 1}}]});
        assert!(system_from_json(&v).is_err());
    }
}
