//! JSON literals and check reports.
//!
//! Everything the CLI reads or writes as JSON lives here: derivation and
//! 2-local-map literals (rationals as strings in lowest terms, elements in
//! their canonical text form) and the uniform checker report
//! `{check, status, probes, counterexamples, witnesses}` with fixed key
//! order.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgebraId, Element};
use crate::derivations::{DerivationSpace, LeibnizReport, ThinDerivation, W22Derivation};
use crate::rational::{parse_rational, Rational};
use crate::two_local::{
    AdditivityCounterexample, HomogeneityReport, OmegaParams, ThinTwoLocalMap, TwoLocalReport,
    WitnessOutcome, WitnessParams,
};

/// Derivation literal: `{"kind":"w22","inner":...,"outer":...}` or
/// `{"kind":"thin","alpha":[...],"beta":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DerivationLiteral {
    W22 { inner: String, outer: String },
    Thin { alpha: Vec<String>, beta: Vec<String> },
}

fn rationals_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn strings_to_rationals(v: &[String], what: &str) -> Result<Vec<Rational>, String> {
    v.iter()
        .map(|s| parse_rational(s).map_err(|e| format!("bad {what} entry {s:?}: {e}")))
        .collect()
}

impl From<&W22Derivation> for DerivationLiteral {
    fn from(d: &W22Derivation) -> Self {
        DerivationLiteral::W22 { inner: d.inner.to_string(), outer: d.outer_coeff.to_string() }
    }
}

impl From<&ThinDerivation> for DerivationLiteral {
    fn from(d: &ThinDerivation) -> Self {
        DerivationLiteral::Thin {
            alpha: rationals_to_strings(&d.alpha),
            beta: rationals_to_strings(&d.beta),
        }
    }
}

impl From<&WitnessParams> for DerivationLiteral {
    fn from(w: &WitnessParams) -> Self {
        match w {
            WitnessParams::W22(d) => d.into(),
            WitnessParams::Thin(d) => d.into(),
        }
    }
}

impl DerivationLiteral {
    pub fn to_derivation(&self) -> Result<WitnessParams, String> {
        match self {
            DerivationLiteral::W22 { inner, outer } => {
                let inner = Element::parse(AlgebraId::W22, inner)
                    .map_err(|e| format!("bad inner element: {e}"))?;
                let outer = parse_rational(outer).map_err(|e| format!("bad outer: {e}"))?;
                Ok(WitnessParams::W22(W22Derivation::new(inner, outer)))
            }
            DerivationLiteral::Thin { alpha, beta } => Ok(WitnessParams::Thin(ThinDerivation::new(
                strings_to_rationals(alpha, "alpha")?,
                strings_to_rationals(beta, "beta")?,
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaLiteral {
    pub theta: Vec<String>,
    pub lambda: String,
    pub q: i64,
}

impl From<&OmegaParams> for OmegaLiteral {
    fn from(p: &OmegaParams) -> Self {
        OmegaLiteral {
            theta: rationals_to_strings(&p.theta),
            lambda: p.lambda.to_string(),
            q: p.q,
        }
    }
}

impl OmegaLiteral {
    pub fn to_params(&self) -> Result<OmegaParams, String> {
        if self.q <= 2 {
            return Err(format!("omega index q must exceed 2, got {}", self.q));
        }
        Ok(OmegaParams::new(
            strings_to_rationals(&self.theta, "theta")?,
            parse_rational(&self.lambda).map_err(|e| format!("bad lambda: {e}"))?,
            self.q,
        ))
    }
}

/// Two-local map literal: `{"delta": <thin derivation>, "omega": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLocalMapLiteral {
    pub delta: DerivationLiteral,
    pub omega: OmegaLiteral,
}

impl From<&ThinTwoLocalMap> for TwoLocalMapLiteral {
    fn from(m: &ThinTwoLocalMap) -> Self {
        TwoLocalMapLiteral { delta: (&m.delta).into(), omega: (&m.omega).into() }
    }
}

impl TwoLocalMapLiteral {
    pub fn to_map(&self) -> Result<ThinTwoLocalMap, String> {
        let delta = match self.delta.to_derivation()? {
            WitnessParams::Thin(d) => d,
            WitnessParams::W22(_) => return Err("delta must be a thin derivation".into()),
        };
        Ok(ThinTwoLocalMap::new(delta, self.omega.to_params()?))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub input: Value,
    pub lhs: String,
    pub rhs: String,
}

/// The uniform checker report. Field order is the serialized key order.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: String,
    pub probes: Vec<Value>,
    pub counterexamples: Vec<Counterexample>,
    pub witnesses: Vec<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    fn status_str(pass: bool) -> String {
        if pass { "pass" } else { "fail" }.to_string()
    }
}

pub fn two_local_check_report(report: &TwoLocalReport) -> CheckReport {
    let mut counterexamples = Vec::new();
    let mut witnesses = Vec::new();
    for pair in &report.pairs {
        match &pair.witness {
            Some(w) => witnesses.push(json!({
                "x": pair.x.to_string(),
                "y": pair.y.to_string(),
                "witness": DerivationLiteral::from(w),
            })),
            None => counterexamples.push(Counterexample {
                input: json!([pair.x.to_string(), pair.y.to_string()]),
                lhs: pair.vx.to_string(),
                rhs: pair.vy.to_string(),
            }),
        }
    }
    CheckReport {
        check: "is_two_local_on_set".into(),
        status: CheckReport::status_str(report.pass()),
        probes: report
            .pairs
            .iter()
            .map(|p| json!([p.x.to_string(), p.y.to_string()]))
            .collect(),
        counterexamples,
        witnesses,
    }
}

pub fn homogeneity_check_report(
    report: &HomogeneityReport,
    samples: &[(Rational, Element)],
) -> CheckReport {
    CheckReport {
        check: "check_homogeneity".into(),
        status: CheckReport::status_str(report.pass()),
        probes: samples
            .iter()
            .map(|(k, x)| json!([k.to_string(), x.to_string()]))
            .collect(),
        counterexamples: report
            .violations
            .iter()
            .map(|v| Counterexample {
                input: json!([v.k.to_string(), v.x.to_string()]),
                lhs: v.lhs.to_string(),
                rhs: v.rhs.to_string(),
            })
            .collect(),
        witnesses: Vec::new(),
    }
}

pub fn additivity_check_report(
    counterexamples: &[AdditivityCounterexample],
    samples: &[(Element, Element)],
) -> CheckReport {
    CheckReport {
        check: "check_additivity".into(),
        status: CheckReport::status_str(counterexamples.is_empty()),
        probes: samples
            .iter()
            .map(|(x, y)| json!([x.to_string(), y.to_string()]))
            .collect(),
        counterexamples: counterexamples
            .iter()
            .map(|c| Counterexample {
                input: json!([c.x.to_string(), c.y.to_string()]),
                lhs: c.lhs.to_string(),
                rhs: c.rhs.to_string(),
            })
            .collect(),
        witnesses: Vec::new(),
    }
}

pub fn leibniz_check_report(report: &LeibnizReport) -> CheckReport {
    CheckReport {
        check: "leibniz_check".into(),
        status: CheckReport::status_str(report.pass()),
        probes: report
            .probes
            .iter()
            .map(|p| json!([p.x.to_string(), p.y.to_string()]))
            .collect(),
        counterexamples: report
            .violations()
            .map(|p| Counterexample {
                input: json!([p.x.to_string(), p.y.to_string()]),
                lhs: p.residual.to_string(),
                rhs: "0".into(),
            })
            .collect(),
        witnesses: Vec::new(),
    }
}

/// Summary of a windowed derivation-space computation.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationSpaceReport {
    pub algebra: String,
    pub window: i64,
    pub nullspace_dim: usize,
    pub interior_dim: usize,
    pub interior_inner_dim: usize,
    pub interior_outer_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_matches_d: Option<bool>,
}

impl From<&DerivationSpace> for DerivationSpaceReport {
    fn from(s: &DerivationSpace) -> Self {
        DerivationSpaceReport {
            algebra: s.algebra.to_string(),
            window: s.window,
            nullspace_dim: s.basis.len(),
            interior_dim: s.restricted_dim,
            interior_inner_dim: s.inner_dim,
            interior_outer_dim: s.outer_dim,
            outer_matches_d: s.outer_matches_d,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DerivationLiteral>,
}

impl From<&WitnessOutcome> for WitnessReport {
    fn from(outcome: &WitnessOutcome) -> Self {
        match outcome.found() {
            Some(w) => WitnessReport { status: "found".into(), witness: Some(w.into()) },
            None => WitnessReport { status: "infeasible".into(), witness: None },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BasisSymbol;
    use crate::rational::{frac, rat};

    #[test]
    fn derivation_literal_round_trip() {
        let d = W22Derivation::new(
            Element::term(frac(1, 2), BasisSymbol::L(1)),
            rat(-3),
        );
        let lit = DerivationLiteral::from(&d);
        let json = serde_json::to_string(&lit).unwrap();
        assert_eq!(json, r#"{"kind":"w22","inner":"1/2*L[1]","outer":"-3"}"#);
        let back: DerivationLiteral = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_derivation().unwrap(), WitnessParams::W22(d));

        let t = ThinDerivation::new(vec![rat(0), rat(-1)], vec![rat(2)]);
        let lit = DerivationLiteral::from(&t);
        let json = serde_json::to_string(&lit).unwrap();
        assert_eq!(json, r#"{"kind":"thin","alpha":["0","-1"],"beta":["2"]}"#);
        let back: DerivationLiteral = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_derivation().unwrap(), WitnessParams::Thin(t));
    }

    #[test]
    fn two_local_literal_round_trip() {
        let m = ThinTwoLocalMap::new(
            ThinDerivation::zero(),
            OmegaParams::new(vec![rat(1), rat(1)], rat(2), 3),
        );
        let lit = TwoLocalMapLiteral::from(&m);
        let json = serde_json::to_string(&lit).unwrap();
        assert_eq!(
            json,
            r#"{"delta":{"kind":"thin","alpha":[],"beta":[]},"omega":{"theta":["1","1"],"lambda":"2","q":3}}"#
        );
        let back: TwoLocalMapLiteral = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_map().unwrap(), m);
    }

    #[test]
    fn literal_rejects_bad_q() {
        let lit = OmegaLiteral { theta: vec![], lambda: "0".into(), q: 2 };
        assert!(lit.to_params().is_err());
    }

    #[test]
    fn check_report_key_order_is_fixed() {
        let report = CheckReport {
            check: "check_homogeneity".into(),
            status: "pass".into(),
            probes: vec![],
            counterexamples: vec![],
            witnesses: vec![],
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"check":"check_homogeneity","status":"pass","probes":[],"counterexamples":[],"witnesses":[]}"#
        );
    }
}
