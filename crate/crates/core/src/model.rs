//! The backend contract shared by every concrete category model, plus the
//! backend-spec grammar used to construct one.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Budget, HallError, Result};
use crate::ff::FieldSpec;
use crate::graded::{GradedModel, GradedObject, GradedVariant};
use crate::linrep::{QuiverSpec, Rep};
use crate::quiver::QuiverModel;

/// Backend-specific canonical representative of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassPayload {
    Rep(Rep),
    Graded(GradedObject),
}

#[derive(Debug)]
struct ClassData {
    label: String,
    name: String,
    payload: ClassPayload,
}

/// An isomorphism class of objects. Equality, hashing and ordering go
/// through the content-addressed label.
#[derive(Clone)]
pub struct IsoClass(Arc<ClassData>);

impl IsoClass {
    pub fn new(label: String, name: String, payload: ClassPayload) -> Self {
        IsoClass(Arc::new(ClassData {
            label,
            name,
            payload,
        }))
    }

    /// Stable `backend:params:payload` identifier.
    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Short human-readable name such as `S1^2+M11` or `k{0}+k{1}`.
    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn payload(&self) -> &ClassPayload {
        &self.0.payload
    }

    pub fn is_zero(&self) -> bool {
        self.0.name == "0"
    }
}

impl PartialEq for IsoClass {
    fn eq(&self, other: &Self) -> bool {
        self.0.label == other.0.label
    }
}

impl Eq for IsoClass {}

impl Hash for IsoClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.label.hash(state)
    }
}

impl PartialOrd for IsoClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IsoClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.label.cmp(&other.0.label)
    }
}

impl fmt::Debug for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ModelCapabilities {
    pub right_hom_finite: bool,
    pub left_hom_finite: bool,
    pub has_neg_ext: bool,
    pub exact_case: bool,
    pub triangulated_case: bool,
}

/// Which construction of negative extensions is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NegVariant {
    I,
    II,
}

/// Size limits for test-universe enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UniverseBound {
    /// Total dimension cap (quiver) or, alone, the per-degree cap (graded).
    pub max_dim: Option<usize>,
    pub per_degree: Option<usize>,
}

impl UniverseBound {
    pub fn max_dim(n: usize) -> Self {
        UniverseBound {
            max_dim: Some(n),
            per_degree: None,
        }
    }

    pub fn per_degree(n: usize) -> Self {
        UniverseBound {
            max_dim: None,
            per_degree: Some(n),
        }
    }
}

/// The counting interface every category model provides. All methods are
/// pure: backends may memoise, but concurrent callers see identical values.
pub trait Model: Send + Sync {
    /// Normalised backend spec, e.g. `quiver:A2@2`.
    fn backend_id(&self) -> String;
    fn field(&self) -> FieldSpec;
    fn capabilities(&self) -> ModelCapabilities;
    fn budget(&self) -> Budget;

    fn zero(&self) -> IsoClass;
    fn classes_up_to(&self, bound: &UniverseBound) -> Result<Vec<IsoClass>>;
    /// Resolves a class from its name or label.
    fn parse_class(&self, text: &str) -> Result<IsoClass>;
    /// Human description of the universe selected by `bound`.
    fn describe_bound(&self, bound: &UniverseBound) -> String;
    /// Whether `x` lies inside the universe selected by `bound`.
    fn within_bound(&self, x: &IsoClass, bound: &UniverseBound) -> bool;

    /// Image in the Grothendieck group.
    fn grothendieck(&self, x: &IsoClass) -> Result<Vec<i64>>;
    fn hom_dim(&self, x: &IsoClass, y: &IsoClass) -> Result<usize>;
    /// `[dim E^1(X,Y), dim E^2(X,Y), ...]`; every later group vanishes.
    fn ext_dims(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>>;
    /// `[dim E^{-1}_d(X,Y), dim E^{-2}_d(X,Y), ...]`; every later group vanishes.
    fn neg_ext_dims(&self, variant: NegVariant, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>>;
    fn aut_order(&self, x: &IsoClass) -> Result<BigUint>;
    fn dsum(&self, x: &IsoClass, y: &IsoClass) -> Result<IsoClass>;
    /// Krull–Schmidt decomposition into indecomposables.
    fn decompose(&self, x: &IsoClass) -> Result<Vec<IsoClass>>;
    /// Every class that can occur as the middle term of a conflation `X -> L -> Y`.
    fn middle_candidates(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<IsoClass>>;

    /// `|(X,L)_Y|`: inflations `X -> L` with cone isomorphic to `Y`.
    fn inflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint>;
    /// `|_X(L,Y)|`: deflations `L -> Y` with cocone isomorphic to `X`.
    fn deflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint>;
    /// `|E(Y,X)_L|`: extensions of `Y` by `X` realised with middle term `L`.
    fn extension_count(&self, y: &IsoClass, x: &IsoClass, l: &IsoClass) -> Result<BigUint>;

    fn ext_dim(&self, i: usize, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        if i == 0 {
            return Err(HallError::Invalid("ext_dim needs i >= 1".into()));
        }
        Ok(self.ext_dims(x, y)?.get(i - 1).copied().unwrap_or(0))
    }

    fn neg_ext_dim(&self, variant: NegVariant, i: usize, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        if i == 0 {
            return Err(HallError::Invalid("neg_ext_dim needs i >= 1".into()));
        }
        Ok(self.neg_ext_dims(variant, x, y)?.get(i - 1).copied().unwrap_or(0))
    }

    fn end_order(&self, x: &IsoClass) -> Result<BigUint> {
        Ok(BigUint::from(self.field().p()).pow(self.hom_dim(x, x)? as u32))
    }
}

/// Parsed form of the backend grammar:
/// `quiver:<A1|A2|A3|file=PATH>@p`, `graded:@p,window=lo..hi`,
/// `interval:@p,window=lo..hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    Quiver { name: QuiverName, p: u32 },
    Graded { p: u32, lo: i32, hi: i32 },
    Interval { p: u32, lo: i32, hi: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuiverName {
    A(usize),
    File(String),
}

fn parse_p(s: &str) -> Result<u32> {
    let p: u32 = s
        .trim()
        .parse()
        .map_err(|_| HallError::Parse(format!("bad field size {s:?}")))?;
    FieldSpec::new(p).map_err(|e| HallError::Parse(e.to_string()))?;
    Ok(p)
}

fn parse_window(rest: &str) -> Result<(u32, i32, i32)> {
    let rest = rest
        .strip_prefix('@')
        .ok_or_else(|| HallError::Parse(format!("expected `@p,window=lo..hi`, got {rest:?}")))?;
    let (p, window) = rest
        .split_once(',')
        .ok_or_else(|| HallError::Parse("missing `,window=lo..hi`".into()))?;
    let window = window
        .trim()
        .strip_prefix("window=")
        .ok_or_else(|| HallError::Parse(format!("expected `window=lo..hi`, got {window:?}")))?;
    let (lo, hi) = window
        .split_once("..")
        .ok_or_else(|| HallError::Parse(format!("bad window {window:?}")))?;
    let parse_i = |s: &str| -> Result<i32> {
        s.trim()
            .parse()
            .map_err(|_| HallError::Parse(format!("bad window bound {s:?}")))
    };
    let (lo, hi) = (parse_i(lo)?, parse_i(hi)?);
    if lo > hi {
        return Err(HallError::Parse(format!("empty window {lo}..{hi}")));
    }
    if hi - lo > 16 {
        return Err(HallError::Parse(format!("window {lo}..{hi} is wider than 17 degrees")));
    }
    Ok((parse_p(p)?, lo, hi))
}

impl FromStr for BackendSpec {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("quiver:") {
            let (name, p) = rest
                .rsplit_once('@')
                .ok_or_else(|| HallError::Parse(format!("missing `@p` in {s:?}")))?;
            let name = match name {
                "A1" => QuiverName::A(1),
                "A2" => QuiverName::A(2),
                "A3" => QuiverName::A(3),
                other => match other.strip_prefix("file=") {
                    Some(path) if !path.is_empty() => QuiverName::File(path.to_string()),
                    _ => {
                        return Err(HallError::Parse(format!(
                            "unknown quiver {other:?}; expected A1, A2, A3 or file=<path>"
                        )))
                    }
                },
            };
            Ok(BackendSpec::Quiver {
                name,
                p: parse_p(p)?,
            })
        } else if let Some(rest) = s.strip_prefix("graded:") {
            let (p, lo, hi) = parse_window(rest)?;
            Ok(BackendSpec::Graded { p, lo, hi })
        } else if let Some(rest) = s.strip_prefix("interval:") {
            let (p, lo, hi) = parse_window(rest)?;
            Ok(BackendSpec::Interval { p, lo, hi })
        } else {
            Err(HallError::Parse(format!(
                "unknown backend {s:?}; expected quiver:, graded: or interval:"
            )))
        }
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::Quiver {
                name: QuiverName::A(n),
                p,
            } => write!(f, "quiver:A{n}@{p}"),
            BackendSpec::Quiver {
                name: QuiverName::File(path),
                p,
            } => write!(f, "quiver:file={path}@{p}"),
            BackendSpec::Graded { p, lo, hi } => write!(f, "graded:@{p},window={lo}..{hi}"),
            BackendSpec::Interval { p, lo, hi } => write!(f, "interval:@{p},window={lo}..{hi}"),
        }
    }
}

/// A constructed backend. Generic code uses it through [`Model`]; the
/// oracle and the suites also reach the concrete models.
pub enum Backend {
    Quiver(QuiverModel),
    Graded(GradedModel),
}

impl Backend {
    pub fn build(spec: &BackendSpec, budget: Budget) -> Result<Self> {
        match spec {
            BackendSpec::Quiver { name, p } => {
                let field = FieldSpec::new(*p)?;
                let (label, quiver) = match name {
                    QuiverName::A(n) => (format!("A{n}"), QuiverSpec::linear_a(*n)),
                    QuiverName::File(path) => {
                        let text = std::fs::read_to_string(path).map_err(|e| {
                            HallError::Invalid(format!("cannot read quiver file {path}: {e}"))
                        })?;
                        let q = QuiverSpec::parse(&text)?;
                        (QuiverModel::structural_name(&q), q)
                    }
                };
                Ok(Backend::Quiver(QuiverModel::new(
                    field,
                    quiver,
                    label,
                    spec.to_string(),
                    budget,
                )))
            }
            BackendSpec::Graded { p, lo, hi } => Ok(Backend::Graded(GradedModel::new(
                FieldSpec::new(*p)?,
                (*lo, *hi),
                GradedVariant::Triangulated,
                budget,
            ))),
            BackendSpec::Interval { p, lo, hi } => Ok(Backend::Graded(GradedModel::new(
                FieldSpec::new(*p)?,
                (*lo, *hi),
                GradedVariant::Interval,
                budget,
            ))),
        }
    }

    pub fn from_spec_str(spec: &str, budget: Budget) -> Result<Self> {
        Self::build(&spec.parse()?, budget)
    }

    pub fn model(&self) -> &dyn Model {
        match self {
            Backend::Quiver(m) => m,
            Backend::Graded(m) => m,
        }
    }

    /// Default universe bound when none is given.
    pub fn default_bound(&self) -> UniverseBound {
        match self {
            Backend::Quiver(m) if m.field().p() == 2 => UniverseBound::max_dim(4),
            Backend::Quiver(_) => UniverseBound::max_dim(3),
            Backend::Graded(_) => UniverseBound::per_degree(1),
        }
    }
}
