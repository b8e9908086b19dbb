//! JSON documents for exact results. Rationals are strings `"p/q"`, field
//! elements `a + b√r` are objects `{"a", "b", "r"}`. Keys are emitted in
//! sorted order, so equal inputs give byte-identical documents.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{FockVector, NormalOrderedOp, SectorMatrix};
use crate::partition::{partitions, Partition};
use crate::quad::{parse_rational, rational_string, QuadNum};
use crate::solver::{DualityReport, EigenResult};
use crate::sympoly::{JackReport, SymPoly};

pub fn scalar_json(x: &QuadNum) -> Value {
    json!({
        "a": rational_string(x.rational_part()),
        "b": rational_string(x.radical_part()),
        "r": x.radicand().to_string(),
    })
}

pub fn scalar_from_json(v: &Value) -> Result<QuadNum> {
    let field = |k: &str| -> Result<BigRational> {
        let s = v.get(k).and_then(Value::as_str).ok_or_else(|| Error::InvalidInput(format!("scalar lacks {k:?}")))?;
        parse_rational(s)
    };
    let (a, b, r) = (field("a")?, field("b")?, field("r")?);
    if b.is_zero() {
        return Ok(QuadNum::rational(a));
    }
    let root = QuadNum::sqrt_of(&r)?;
    Ok(QuadNum::rational(a) + QuadNum::rational(b) * root)
}

fn parts_json(p: &Partition) -> Value {
    json!(p.parts())
}

/// Splits `x = re + c·ν`.
fn split_by_nu(x: &QuadNum, nu: &QuadNum) -> Result<(BigRational, BigRational)> {
    if x.is_rational() {
        return Ok((x.rational_part().clone(), BigRational::zero()));
    }
    if nu.is_rational() || nu.radicand() != x.radicand() || !nu.rational_part().is_zero() {
        return Err(Error::InvalidInput(format!("{x} is not of the form a + bν for ν = {nu}")));
    }
    Ok((x.rational_part().clone(), x.radical_part() / nu.radical_part()))
}

/// `{"charge", "level", "basis", "entries": [{"state", "re", "nu_coeff"}]}`
/// for a vector supported in one sector.
pub fn fock_json(v: &FockVector<QuadNum>, charge: i64, level: u32, nu: &QuadNum) -> Result<Value> {
    let basis: Vec<Value> = partitions(level).iter().map(parts_json).collect();
    let mut entries = Vec::with_capacity(v.len());
    for (state, c) in v.iter() {
        if state.charge != charge || state.level() != level {
            return Err(Error::OutsideSector { charge, level });
        }
        let (re, nc) = split_by_nu(c, nu)?;
        entries.push(json!({
            "state": parts_json(&state.parts),
            "re": rational_string(&re),
            "nu_coeff": rational_string(&nc),
        }));
    }
    Ok(json!({ "charge": charge, "level": level, "basis": basis, "entries": entries }))
}

pub fn sector_matrix_json(m: &SectorMatrix<QuadNum>) -> Value {
    let rows: Vec<Value> = m.entries.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect();
    json!({
        "charge": m.charge,
        "level": m.level,
        "basis": m.basis.iter().map(parts_json).collect::<Vec<_>>(),
        "matrix": rows,
    })
}

/// Normal-ordered monomials of `op` with at most `max_level` on either side.
pub fn operator_json(op: &NormalOrderedOp<QuadNum>, max_level: u32) -> Value {
    let terms: Vec<Value> = op
        .monomials_up_to(max_level)
        .iter()
        .map(|m| {
            json!({
                "coeff": scalar_json(&m.coeff),
                "creations": parts_json(&m.creations),
                "qPower": m.q_power,
                "annihilations": parts_json(&m.annihilations),
            })
        })
        .collect();
    Value::Array(terms)
}

pub fn eigen_json(res: &EigenResult<QuadNum>) -> Result<Value> {
    let nu2 = &res.nu * &res.nu;
    let nu2 = nu2.to_rational().expect("ν² is rational");
    let alpha: Vec<Value> = res
        .alpha
        .iter()
        .map(|(mu, a)| {
            let terms: Vec<Value> = mu.terms().into_iter().map(|(j, l, k)| json!([j, l, k])).collect();
            json!({ "mu": terms, "value": scalar_json(a) })
        })
        .collect();
    let level = res.n.total().max(0) as u32;
    Ok(json!({
        "nu2": rational_string(&nu2),
        "nu": res.nu.to_string(),
        "n": res.n.entries(),
        "E": res.energy.to_string(),
        "alpha": alpha,
        "psi": fock_json(&res.psi, res.size() as i64, level, &res.nu)?,
        "certified": res.certified,
    }))
}

pub fn sympoly_json(p: &SymPoly<QuadNum>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(l, c)| json!({ "partition": parts_json(l), "coeff": scalar_json(c) }))
        .collect();
    json!({ "N": p.vars(), "degree": p.degree(), "terms": terms })
}

pub fn jack_json(nu2: &BigRational, r: &JackReport<QuadNum>) -> Value {
    json!({
        "nu2": rational_string(nu2),
        "lambda": parts_json(&r.lambda),
        "N": r.vars,
        "matches": r.matches(),
        "ratio": r.ratio.as_ref().map(|x| x.to_string()),
        "poly": sympoly_json(&r.poly),
        "jack": sympoly_json(&r.jack),
    })
}

pub fn duality_json(r: &DualityReport<QuadNum>) -> Value {
    json!({
        "nu": r.nu.to_string(),
        "n": r.n.entries(),
        "is_eigen": r.is_eigen,
        "E_found": r.e_found.as_ref().map(|x| x.to_string()),
        "E_formula": r.e_formula.to_string(),
        "matches": r.matches,
        "E_derived": r.e_derived.to_string(),
        "derived_matches": r.derived_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sector_matrix;
    use crate::solver::build_eigenvector;
    use crate::vertex::MomentumVector;
    use crate::wcharges::{make_operator, ChargeKind};
    use num_traits::One;

    fn sqrt2() -> QuadNum {
        QuadNum::sqrt_of(&BigRational::from_integer(2.into())).unwrap()
    }

    #[test]
    fn scalar_round_trip() {
        for x in [QuadNum::ratio(-3, 7), sqrt2() * QuadNum::ratio(5, 3) + QuadNum::one(), QuadNum::zero()] {
            assert_eq!(scalar_from_json(&scalar_json(&x)).unwrap(), x);
        }
        assert_eq!(scalar_json(&QuadNum::ratio(1, 2)), json!({"a": "1/2", "b": "0", "r": "0"}));
    }

    #[test]
    fn eigen_document() {
        let res = build_eigenvector(&sqrt2(), &MomentumVector::new(vec![1, 1])).unwrap();
        let doc = eigen_json(&res).unwrap();
        assert_eq!(doc["E"], json!("20"));
        assert_eq!(doc["nu2"], json!("2"));
        assert_eq!(doc["certified"], json!(true));
        assert_eq!(doc["alpha"].as_array().unwrap().len(), 2);
        assert_eq!(doc["alpha"][1]["mu"], json!([[1, 2, 1]]));
        assert_eq!(doc["psi"]["charge"], json!(2));
        // Ψ = η(1,1) + (2/3)η(2,0) lies in ℚ·1 ⊕ ℚ·ν
        for e in doc["psi"]["entries"].as_array().unwrap() {
            assert!(e["re"].is_string() && e["nu_coeff"].is_string());
        }
        assert_eq!(serde_json::to_string(&doc).unwrap(), serde_json::to_string(&eigen_json(&res).unwrap()).unwrap());
    }

    #[test]
    fn matrix_and_operator_documents() {
        let w3 = make_operator::<QuadNum>(ChargeKind::W3, None).unwrap();
        let m = sector_matrix(&w3, 1, 2).unwrap();
        let doc = sector_matrix_json(&m);
        assert_eq!(doc["matrix"][0][0]["a"], json!("17/4"));
        let ops = operator_json(&make_operator::<QuadNum>(ChargeKind::C, None).unwrap(), 2);
        assert!(ops.as_array().unwrap().iter().all(|t| t["creations"] == t["annihilations"]));
    }

    #[test]
    fn foreign_field_rejected() {
        let v = FockVector::vacuum(1).scale(&QuadNum::sqrt_of(&BigRational::from_integer(3.into())).unwrap());
        assert!(fock_json(&v, 1, 0, &sqrt2()).is_err());
        assert!(fock_json(&FockVector::vacuum(1), 2, 0, &sqrt2()).is_err());
    }
}
