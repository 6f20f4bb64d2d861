//! Named numerical checks, the level-set geometry of `f_{a,b}` and the
//! aggregated [`VerificationReport`].
//!
//! Every check draws `samples` seeded unit points of `p` plus three
//! structured points (`e1`, `(e1+e2)/√2` and the `H_{ε1}` direction) and
//! reports the worst absolute and relative error it saw. Checks are
//! independent; [`full_suite`] runs them on the rayon pool and collects the
//! results in registry order.

mod checks;
mod geometry;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::Rational;
use crate::moment::{muenzner_coefficients, WeightedNormParams};
use crate::roots::{compute_roots, maximal_abelian, RestrictedRootSystem};
use crate::symspace::HermitianPair;

pub use checks::coefficient_identities_exact;
pub use geometry::{cluster_eigenvalues, principal_curvatures, sphere_range, CurvatureSpectrum, CLUSTER_GAP};

pub const SCHEMA_VERSION: u32 = 1;

macro_rules! registry {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum CheckId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl CheckId {
            /// Registry order.
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(Error::UnknownCheck(s.to_string())),
                }
            }
        }
    };
}

registry! {
    ZNorm => "Z_NORM",
    TraceId => "TRACE_ID",
    MuBracket => "MU_BRACKET",
    FClosedForm => "F_CLOSED_FORM",
    GradFormula => "GRAD_FORMULA",
    GradsqFormula => "GRADSQ_FORMULA",
    LapFormula => "LAP_FORMULA",
    RootType => "ROOT_TYPE",
    K2eps => "K2EPS",
    ZPosition => "Z_POSITION",
    ZComponents => "Z_COMPONENTS",
    HepsNorm => "HEPS_NORM",
    DimN => "DIM_N",
    JmuId => "JMU_ID",
    GradsqRank2 => "GRADSQ_RANK2",
    LapRank2 => "LAP_RANK2",
    MunznerA => "MUNZNER_A",
    MunznerB => "MUNZNER_B",
    KInvariance => "K_INVARIANCE",
    CoeffIdentities => "COEFF_IDENTITIES",
    SphereRange => "SPHERE_RANGE",
    PrincipalCurvatures => "PRINCIPAL_CURVATURES",
}

/// Which error field a check is judged by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Abs,
    Rel,
}

impl CheckId {
    pub fn default_tolerance(self) -> f64 {
        use CheckId::*;
        match self {
            ZNorm | ZPosition | ZComponents | GradsqFormula | LapFormula | JmuId | GradsqRank2 | LapRank2 => 1e-9,
            TraceId | MuBracket | FClosedForm | K2eps => 1e-10,
            GradFormula | SphereRange | PrincipalCurvatures => 1e-6,
            HepsNorm | MunznerA | MunznerB | KInvariance => 1e-8,
            RootType | DimN | CoeffIdentities => 0.0,
        }
    }

    pub fn error_kind(self) -> ErrorKind {
        use CheckId::*;
        match self {
            TraceId | FClosedForm | GradFormula | GradsqFormula | LapFormula | GradsqRank2 | LapRank2 | HepsNorm
            | KInvariance => ErrorKind::Rel,
            _ => ErrorKind::Abs,
        }
    }

    pub fn needs_roots(self) -> bool {
        use CheckId::*;
        !matches!(self, ZNorm | TraceId | MuBracket | FClosedForm | GradFormula | GradsqFormula | LapFormula)
    }

    fn index(self) -> usize {
        CheckId::ALL.iter().position(|&c| c == self).expect("registered")
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_pass() { "pass" } else { "fail" })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    #[serde(rename = "id")]
    pub check_id: String,
    pub status: Status,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl CheckResult {
    /// Builds a result whose status follows from `kind` and `tolerance`.
    pub fn judged(
        id: CheckId,
        kind: ErrorKind,
        errors: (f64, f64),
        tolerance: f64,
        samples: usize,
        seed: u64,
    ) -> Self {
        let (abs, rel) = errors;
        let applicable = match kind {
            ErrorKind::Abs => abs,
            ErrorKind::Rel => rel,
        };
        Self {
            check_id: id.as_str().to_string(),
            status: Status::from_bool(applicable <= tolerance),
            max_abs_error: abs,
            max_rel_error: rel,
            tolerance,
            samples,
            seed,
            millis: 0,
            details: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

/// Sampling and tolerance settings shared by all checks.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<CheckId, f64>,
    /// Replaces the weights derived from the multiplicities.
    pub params: Option<WeightedNormParams>,
    /// `None` runs the whole registry.
    pub checks: Option<Vec<CheckId>>,
    pub curvature_samples: usize,
    pub levels: Vec<f64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 42,
            tolerances: BTreeMap::new(),
            params: None,
            checks: None,
            curvature_samples: 10,
            levels: vec![-0.5, 0.0, 0.5],
        }
    }
}

impl CheckConfig {
    pub fn tolerance(&self, id: CheckId) -> f64 {
        self.tolerances.get(&id).copied().unwrap_or_else(|| id.default_tolerance())
    }

    /// Seed of an individual check, derived from the run seed and the registry index.
    pub fn check_seed(&self, id: CheckId) -> u64 {
        splitmix(self.seed ^ splitmix(id.index() as u64 + 1))
    }

    /// The configured weights, or the Münzner weights of `rrs`.
    pub fn weights(&self, rrs: Option<&RestrictedRootSystem>) -> Result<WeightedNormParams> {
        match (self.params, rrs) {
            (Some(p), _) => Ok(p),
            (None, Some(r)) => Ok(muenzner_coefficients(r.m1, r.m2)?.params()),
            (None, None) => Err(Error::MissingRoots("weights need the multiplicities".into())),
        }
    }

    fn selected(&self) -> Vec<CheckId> {
        match &self.checks {
            None => CheckId::ALL.to_vec(),
            Some(list) => CheckId::ALL.iter().copied().filter(|c| list.contains(c)).collect(),
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Runs one registry check.
pub fn run_check(
    id: CheckId,
    pair: &HermitianPair,
    rrs: Option<&RestrictedRootSystem>,
    config: &CheckConfig,
) -> Result<CheckResult> {
    if id.needs_roots() && rrs.is_none() {
        return Err(Error::MissingRoots(format!("{id} needs the restricted root system")));
    }
    let start = Instant::now();
    let mut result = checks::dispatch(id, pair, rrs, config)?;
    result.millis = start.elapsed().as_millis() as u64;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        Self { num: *r.numer(), den: *r.denom() }
    }
}

impl Fraction {
    fn from_f64(x: f64) -> Self {
        match Rational::approximate_float(x) {
            Some(r) => r.into(),
            None => Self { num: x.round() as i64, den: 1 },
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: Option<usize>,
    pub N: usize,
    pub m1: usize,
    pub m2: usize,
    pub a: Fraction,
    pub b: Fraction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub family: String,
    pub params: ReportParams,
    pub checks: Vec<CheckResult>,
    pub overall: Status,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall.is_pass()
    }

    pub fn check(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == id.as_str())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// A copy with every timing field zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r
    }
}

/// Computes the restricted roots of `pair` from a seeded maximal abelian subspace.
pub fn roots_for(pair: &HermitianPair, seed: u64) -> Result<RestrictedRootSystem> {
    compute_roots(pair, &maximal_abelian(pair, seed)?)
}

/// Roots, every selected check, and the report.
pub fn full_suite(pair: &HermitianPair, config: &CheckConfig) -> Result<VerificationReport> {
    let rrs = roots_for(pair, config.seed)?;
    full_suite_with_roots(pair, &rrs, config)
}

pub fn full_suite_with_roots(
    pair: &HermitianPair,
    rrs: &RestrictedRootSystem,
    config: &CheckConfig,
) -> Result<VerificationReport> {
    let ids = config.selected();
    let results: Vec<Result<CheckResult>> =
        ids.par_iter().map(|&id| run_check(id, pair, Some(rrs), config)).collect();
    let checks = results.into_iter().collect::<Result<Vec<_>>>()?;
    let weights = config.weights(Some(rrs))?;
    let exact = muenzner_coefficients(rrs.m1, rrs.m2)?;
    let (a, b) = match config.params {
        None => (exact.a.into(), exact.b.into()),
        Some(p) => (Fraction::from_f64(p.a), Fraction::from_f64(p.b)),
    };
    debug_assert!((a.value() - weights.a).abs() < 1e-9);
    let overall = Status::from_bool(checks.iter().all(CheckResult::passed));
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        family: pair.family().to_string(),
        params: ReportParams { n: pair.family().n(), N: pair.N(), m1: rrs.m1, m2: rrs.m2, a, b },
        checks,
        overall,
    })
}
