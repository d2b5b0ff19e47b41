//! Named S-matrix and defect families, config loading, and full validation.

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::defect::{DefectFamily, DefectPair};
use crate::error::{CoreError, Result};
use crate::matrix::CMatrix;
use crate::momentum::{Momentum, MomentumGrid};
use crate::residuals::{residual_bybe, residual_defect, residual_mixed, residual_unitarity, residual_ybe, MixedKind};
use crate::scalar::parse_rational64;
use crate::smatrix::{SMatrixFamily, SMatrixFn};

/// Optional numeric parameters shared by all family constructors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub g: Option<Rational64>,
    pub c: Option<Rational64>,
    pub s: Option<Rational64>,
    pub eta: Option<Rational64>,
    pub x: Option<Rational64>,
    pub y: Option<Rational64>,
    pub flip: bool,
}

fn need(v: Option<Rational64>, what: &str, family: &str) -> Result<Rational64> {
    v.ok_or_else(|| CoreError::InvalidParameter(format!("family `{family}` needs parameter `{what}`")))
}

pub fn smatrix_family(name: &str, params: &FamilyParams) -> Result<SMatrixFamily> {
    let g = || need(params.g, "g", name);
    Ok(match name {
        "identity" => SMatrixFamily::Identity,
        "permutation" => SMatrixFamily::Permutation,
        "rational" => SMatrixFamily::Rational { g: g()? },
        "rational_conjugate_denominator" => SMatrixFamily::RationalConjugateDenominator { g: g()? },
        "rational_flipped" => SMatrixFamily::RationalFlipped { g: g()? },
        other => return Err(CoreError::UnknownFamily(other.to_string())),
    })
}

pub fn defect_family(name: &str, params: &FamilyParams) -> Result<DefectFamily> {
    Ok(match name {
        "free" => DefectFamily::Free,
        "mirror" => DefectFamily::Mirror { flip: params.flip },
        "anticommuting" => DefectFamily::Anticommuting { c: need(params.c, "c", name)?, s: need(params.s, "s", name)? },
        "scalar_contact" => DefectFamily::ScalarContact { eta: need(params.eta, "eta", name)? },
        "scalar_phase" => DefectFamily::ScalarPhase {
            c: need(params.c, "c", name)?,
            s: need(params.s, "s", name)?,
            x: need(params.x, "x", name)?,
            y: need(params.y, "y", name)?,
        },
        "tampered" => DefectFamily::Tampered,
        other => return Err(CoreError::UnknownFamily(other.to_string())),
    })
}

pub fn catalog_smatrix(name: &str, params: &FamilyParams, n: usize) -> Result<SMatrixFn> {
    SMatrixFn::new(smatrix_family(name, params)?, n)
}

pub fn catalog_defect(name: &str, params: &FamilyParams, n: usize, grid: &MomentumGrid) -> Result<DefectPair> {
    DefectPair::new(defect_family(name, params)?, n, grid)
}

/// A fully parameterised choice of dimension, grid, S and (R, T).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogSpec {
    pub n: usize,
    pub grid: MomentumGrid,
    pub smatrix: SMatrixFamily,
    pub defect: DefectFamily,
}

impl CatalogSpec {
    pub fn new(n: usize, grid: MomentumGrid, smatrix: SMatrixFamily, defect: DefectFamily) -> Self {
        CatalogSpec { n, grid, smatrix, defect }
    }

    pub fn smatrix_fn(&self) -> Result<SMatrixFn> {
        SMatrixFn::new(self.smatrix, self.n)
    }

    pub fn defect_pair(&self) -> Result<DefectPair> {
        DefectPair::new(self.defect, self.n, &self.grid)
    }

    /// Canonical JSON form; identical specs give identical documents.
    pub fn to_json(&self) -> Value {
        let mut s = json!({ "family": self.smatrix.name() });
        if let Some(g) = self.smatrix.coupling() {
            s["g"] = json!(g.to_string());
        }
        let mut d = json!({ "family": self.defect.name() });
        match self.defect {
            DefectFamily::Mirror { flip } => d["flip"] = json!(flip),
            DefectFamily::Anticommuting { c, s: sv } => {
                d["c"] = json!(c.to_string());
                d["s"] = json!(sv.to_string());
            }
            DefectFamily::ScalarContact { eta } => d["eta"] = json!(eta.to_string()),
            DefectFamily::ScalarPhase { c, s: sv, x, y } => {
                d["c"] = json!(c.to_string());
                d["s"] = json!(sv.to_string());
                d["x"] = json!(x.to_string());
                d["y"] = json!(y.to_string());
            }
            _ => {}
        }
        let grid: Vec<String> = self.grid.points().iter().map(|k| k.to_string()).collect();
        json!({ "N": self.n, "grid": grid, "smatrix": s, "defect": d, "symmetric": self.grid.is_symmetric() })
    }
}

fn parse_err(message: impl Into<String>) -> CoreError {
    CoreError::Parse { line: 0, column: 0, message: message.into() }
}

fn rational_value(v: &Value, field: &str) -> Result<Rational64> {
    match v {
        Value::String(s) => parse_rational64(s),
        Value::Number(num) if num.is_i64() => Ok(Rational64::from_integer(num.as_i64().unwrap_or_default())),
        Value::Number(num) => Err(CoreError::InvalidRational(num.to_string())),
        _ => Err(parse_err(format!("`{field}` must be a rational string or integer"))),
    }
}

fn params_of(obj: &serde_json::Map<String, Value>) -> Result<FamilyParams> {
    let get = |k: &str| obj.get(k).map(|v| rational_value(v, k)).transpose();
    let flip = match obj.get("flip") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(parse_err("`flip` must be a boolean")),
    };
    Ok(FamilyParams { g: get("g")?, c: get("c")?, s: get("s")?, eta: get("eta")?, x: get("x")?, y: get("y")?, flip })
}

fn family_section(doc: &serde_json::Map<String, Value>, key: &str, default: &str) -> Result<(String, FamilyParams)> {
    match doc.get(key) {
        None => Ok((default.to_string(), FamilyParams::default())),
        Some(Value::Object(obj)) => {
            let name = match obj.get("family") {
                Some(Value::String(s)) => s.clone(),
                None => default.to_string(),
                Some(_) => return Err(parse_err(format!("`{key}.family` must be a string"))),
            };
            Ok((name, params_of(obj)?))
        }
        Some(_) => Err(parse_err(format!("`{key}` must be an object"))),
    }
}

/// Parses the JSON config document. `N` defaults to 2, the S-matrix to
/// `identity` and the defect to `free`. The grid may list positive momenta
/// only (negatives are added) or a listing closed under negation;
/// `"waive_grid": true` accepts an asymmetric grid for negative controls.
pub fn load_spec(text: &str) -> Result<CatalogSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CoreError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| parse_err("config must be a JSON object"))?;
    let n = match obj.get("N") {
        None => 2,
        Some(Value::Number(v)) => {
            v.as_u64().filter(|&v| v >= 1).ok_or_else(|| parse_err("`N` must be a positive integer"))? as usize
        }
        Some(_) => return Err(parse_err("`N` must be a positive integer")),
    };
    let listing = match obj.get("grid") {
        Some(Value::Array(items)) => items.iter().map(|v| rational_value(v, "grid")).collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(parse_err("`grid` must be an array")),
        None => return Err(parse_err("missing `grid`")),
    };
    let waive = matches!(obj.get("waive_grid"), Some(Value::Bool(true)));
    let grid = if waive { MomentumGrid::waived(&listing)? } else { MomentumGrid::from_listing(&listing)? };
    let (sname, sparams) = family_section(obj, "smatrix", "identity")?;
    let (dname, dparams) = family_section(obj, "defect", "free")?;
    let spec = CatalogSpec::new(n, grid, smatrix_family(&sname, &sparams)?, defect_family(&dname, &dparams)?);
    spec.smatrix_fn()?;
    spec.defect_pair()?;
    Ok(spec)
}

/// A failing residual with the momenta at which it was observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualWitness {
    pub momenta: Vec<Momentum>,
    pub residual: CMatrix,
}

impl ResidualWitness {
    pub fn nonzero_entries(&self) -> usize {
        self.residual.nonzero_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualCheck {
    pub name: &'static str,
    pub evaluated: usize,
    pub failures: usize,
    /// Failure with the most nonzero entries; first such in grid order.
    pub worst: Option<ResidualWitness>,
}

impl ResidualCheck {
    fn new(name: &'static str) -> Self {
        ResidualCheck { name, evaluated: 0, failures: 0, worst: None }
    }

    fn record(&mut self, momenta: Vec<Momentum>, residual: CMatrix) {
        self.evaluated += 1;
        if residual.is_zero() {
            return;
        }
        self.failures += 1;
        let nz = residual.nonzero_count();
        if self.worst.as_ref().is_none_or(|w| w.nonzero_entries() < nz) {
            self.worst = Some(ResidualWitness { momenta, residual });
        }
    }

    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub checks: Vec<ResidualCheck>,
}

impl DefectReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(ResidualCheck::pass)
    }

    pub fn check(&self, name: &str) -> Option<&ResidualCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when hermiticity, completeness, anticommutation and the boundary
    /// YBE all hold, i.e. the hypotheses of the mixed-equation consequence.
    pub fn defect_hypotheses_hold(&self) -> bool {
        ["hermiticity", "completeness", "anticommutation", "bybe"]
            .iter()
            .all(|n| self.check(n).is_some_and(ResidualCheck::pass))
    }

    pub fn mixed_equations_hold(&self) -> bool {
        ["tybe", "rtybe"].iter().all(|n| self.check(n).is_some_and(ResidualCheck::pass))
    }
}

/// S-matrix residuals only: YBE over all triples, unitarity over all pairs.
pub fn validate_smatrix(s: &SMatrixFn, grid: &MomentumGrid) -> Vec<ResidualCheck> {
    let mut ybe = ResidualCheck::new("ybe");
    for (a, b, c) in grid.triples() {
        ybe.record(vec![a, b, c], residual_ybe(s, a, b, c));
    }
    let mut unit = ResidualCheck::new("unitarity");
    for (a, b) in grid.pairs() {
        unit.record(vec![a, b], residual_unitarity(s, a, b));
    }
    vec![ybe, unit]
}

/// Defect residuals at every point and pair of the grid.
pub fn validate_defect(s: &SMatrixFn, d: &DefectPair, grid: &MomentumGrid) -> Vec<ResidualCheck> {
    let mut herm = ResidualCheck::new("hermiticity");
    let mut comp = ResidualCheck::new("completeness");
    let mut anti = ResidualCheck::new("anticommutation");
    for &k in grid.points() {
        let r = residual_defect(d, k);
        herm.record(vec![k], r.reflection_hermiticity);
        herm.record(vec![k], r.transmission_hermiticity);
        comp.record(vec![k], r.completeness);
        anti.record(vec![k], r.anticommutation);
    }
    let mut bybe = ResidualCheck::new("bybe");
    let mut tybe = ResidualCheck::new("tybe");
    let mut rtybe = ResidualCheck::new("rtybe");
    for (a, b) in grid.pairs() {
        bybe.record(vec![a, b], residual_bybe(s, d, a, b));
        tybe.record(vec![a, b], residual_mixed(s, d, a, b, MixedKind::Transmission));
        rtybe.record(vec![a, b], residual_mixed(s, d, a, b, MixedKind::ReflectionTransmission));
    }
    vec![herm, comp, anti, bybe, tybe, rtybe]
}

/// Runs every numeric residual; passes iff all are exactly zero.
pub fn validate_pair(spec: &CatalogSpec) -> Result<DefectReport> {
    let s = spec.smatrix_fn()?;
    let d = spec.defect_pair()?;
    let mut checks = validate_smatrix(&s, &spec.grid);
    checks.extend(validate_defect(&s, &d, &spec.grid));
    Ok(DefectReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn load_minimal_and_full_documents() {
        let spec = load_spec(r#"{"grid": ["1", "2"]}"#).unwrap();
        assert_eq!(spec.n, 2);
        assert_eq!(spec.smatrix, SMatrixFamily::Identity);
        assert_eq!(spec.grid.len(), 4);
        let spec = load_spec(
            r#"{"N": 2, "grid": ["5", "9"], "smatrix": {"family": "rational", "g": "1"},
                "defect": {"family": "anticommuting", "c": "3/5", "s": "4/5"}}"#,
        )
        .unwrap();
        assert_eq!(spec.defect, DefectFamily::Anticommuting { c: q(3, 5), s: q(4, 5) });
    }

    #[test]
    fn load_rejects_bad_documents() {
        assert!(matches!(load_spec(r#"{"grid": ["0.1"]}"#), Err(CoreError::InvalidRational(_))));
        assert!(matches!(load_spec(r#"{"grid": [0.5]}"#), Err(CoreError::InvalidRational(_))));
        assert!(matches!(
            load_spec(r#"{"grid": ["1"], "smatrix": {"family": "nope"}}"#),
            Err(CoreError::UnknownFamily(_))
        ));
        let err = load_spec("{\n  \"grid\": [1,\n }").unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 3, .. }), "{err:?}");
        assert!(load_spec(r#"{"grid": ["1", "-2"]}"#).is_err());
        assert!(load_spec(r#"{"grid": ["1", "-2"], "waive_grid": true}"#).is_ok());
    }

    #[test]
    fn validated_examples() {
        let good = CatalogSpec::new(
            2,
            MomentumGrid::ints(&[5, 9]),
            SMatrixFamily::Rational { g: q(1, 1) },
            DefectFamily::ScalarContact { eta: q(12, 1) },
        );
        assert!(validate_pair(&good).unwrap().pass());
        let bad = CatalogSpec { defect: DefectFamily::Tampered, ..good.clone() };
        let rep = validate_pair(&bad).unwrap();
        assert!(!rep.pass());
        let comp = rep.check("completeness").unwrap();
        assert_eq!(comp.failures, 4);
        assert!(comp.worst.is_some());
    }

    #[test]
    fn anticommuting_pair_needs_identity_smatrix() {
        let grid = MomentumGrid::ints(&[1, 2]);
        let d = DefectFamily::Anticommuting { c: q(3, 5), s: q(4, 5) };
        let with_identity = CatalogSpec::new(2, grid.clone(), SMatrixFamily::Identity, d);
        assert!(validate_pair(&with_identity).unwrap().pass());
        let with_swap = validate_pair(&CatalogSpec::new(2, grid, SMatrixFamily::Permutation, d)).unwrap();
        assert!(with_swap.defect_hypotheses_hold());
        assert!(!with_swap.check("rtybe").unwrap().pass());
    }
}
