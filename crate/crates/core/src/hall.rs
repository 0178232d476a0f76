//! Normalising factors, structure constants and the two Hall products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::model::{IsoClass, Model, NegVariant};

/// Renders an exact rational as `num/den`, or `num` when integral.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || HallError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn q_pow(q: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, e.unsigned_abs() as usize).recip()
    }
}

fn ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

/// `Σ_{i>0} (-1)^i dims[i-1]`.
fn alternating(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { -(d as i64) } else { d as i64 })
        .sum()
}

fn require_right(m: &dyn Model) -> Result<()> {
    if m.capabilities().right_hom_finite {
        Ok(())
    } else {
        Err(HallError::Capability(format!("{} is not right locally homologically finite", m.backend_id())))
    }
}

fn require_left(m: &dyn Model) -> Result<()> {
    let caps = m.capabilities();
    if caps.left_hom_finite && caps.has_neg_ext {
        Ok(())
    } else {
        Err(HallError::Capability(format!(
            "{} has no finite negative extension groups",
            m.backend_id()
        )))
    }
}

/// `{X,Y}' = q^{Σ_{i>0} (-1)^i dim E^i(X,Y)}`.
pub fn braces_pos(m: &dyn Model, x: &IsoClass, y: &IsoClass) -> Result<BigRational> {
    require_right(m)?;
    Ok(q_pow(m.field().p(), alternating(&m.ext_dims(x, y)?)))
}

/// `[X,Y] = 1 / ({X,Y}' |Hom(X,Y)|)`.
pub fn bracket(m: &dyn Model, x: &IsoClass, y: &IsoClass) -> Result<BigRational> {
    let hom = q_pow(m.field().p(), m.hom_dim(x, y)? as i64);
    Ok((braces_pos(m, x, y)? * hom).recip())
}

/// `{X,Y}_d = q^{Σ_{i>0} (-1)^i dim E_d^{-i}(X,Y)}`.
pub fn braces_neg(m: &dyn Model, variant: NegVariant, x: &IsoClass, y: &IsoClass) -> Result<BigRational> {
    require_left(m)?;
    Ok(q_pow(m.field().p(), alternating(&m.neg_ext_dims(variant, x, y)?)))
}

/// Correction factor relating the two forms of the G constants.
pub fn hbar(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<BigRational> {
    use NegVariant::{I, II};
    let b = |v, a: &IsoClass, c: &IsoClass| braces_neg(m, v, a, c);
    Ok(b(II, y, x)? / b(I, y, x)? * b(I, y, l)? / b(II, y, l)? * b(I, l, x)? / b(II, l, x)? * b(II, l, l)?
        / b(I, l, l)?)
}

/// Euler form `Σ_{i∈Z} (-1)^i dim E^i(X,Y)`.
pub fn euler(m: &dyn Model, x: &IsoClass, y: &IsoClass) -> Result<i64> {
    require_left(m)?;
    require_right(m)?;
    let neg = m.neg_ext_dims(NegVariant::I, x, y)?;
    Ok(m.hom_dim(x, y)? as i64 + alternating(&m.ext_dims(x, y)?) + alternating(&neg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProductKind {
    /// Normalised by the positive extension groups.
    F,
    /// Normalised by the negative extension groups.
    G,
    /// `q^{-<X,Y>}` times the G product.
    Twisted,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::F => "F",
            ProductKind::G => "G",
            ProductKind::Twisted => "twisted",
        })
    }
}

impl std::str::FromStr for ProductKind {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(ProductKind::F),
            "G" | "g" => Ok(ProductKind::G),
            "twisted" | "T" | "t" => Ok(ProductKind::Twisted),
            _ => Err(HallError::Parse(format!("unknown product type {s:?}; expected F, G or twisted"))),
        }
    }
}

/// A structure constant together with both of its defining forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantRecord {
    pub kind: ProductKind,
    pub x: IsoClass,
    pub y: IsoClass,
    pub l: IsoClass,
    pub value: BigRational,
    /// Built from deflations `L -> Y` with cocone `X`.
    pub deflation_form: BigRational,
    /// Built from inflations `X -> L` with cone `Y`.
    pub inflation_form: BigRational,
}

fn same_class_in_k0(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<bool> {
    let (gx, gy, gl) = (m.grothendieck(x)?, m.grothendieck(y)?, m.grothendieck(l)?);
    Ok(gx.iter().zip(&gy).map(|(a, b)| a + b).eq(gl.iter().copied()))
}

/// Both forms of `F_{XY}^L`, without asserting that they agree.
pub fn f_forms(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<(BigRational, BigRational)> {
    require_right(m)?;
    if !same_class_in_k0(m, x, y, l)? {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    let defl = ratio(&m.deflation_count(x, l, y)?, &m.aut_order(y)?) * bracket(m, l, y)? / bracket(m, y, y)?;
    let infl = ratio(&m.inflation_count(x, l, y)?, &m.aut_order(x)?) * bracket(m, x, l)? / bracket(m, x, x)?;
    Ok((defl, infl))
}

/// Both forms of `G_{XY}^L`; the deflation form carries the correction factor.
pub fn g_forms(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<(BigRational, BigRational)> {
    require_left(m)?;
    if !same_class_in_k0(m, x, y, l)? {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    use NegVariant::{I, II};
    let defl = ratio(&m.deflation_count(x, l, y)?, &m.aut_order(y)?) * braces_neg(m, I, l, y)?
        / braces_neg(m, I, y, y)?
        * hbar(m, x, y, l)?;
    let infl = ratio(&m.inflation_count(x, l, y)?, &m.aut_order(x)?) * braces_neg(m, II, x, l)?
        / braces_neg(m, II, x, x)?;
    Ok((defl, infl))
}

fn record(
    kind: ProductKind,
    identity: &str,
    (x, y, l): (&IsoClass, &IsoClass, &IsoClass),
    (defl, infl): (BigRational, BigRational),
) -> Result<ConstantRecord> {
    if defl != infl {
        return Err(HallError::IdentityMismatch {
            identity: identity.into(),
            operands: format!("X={x}, Y={y}, L={l}"),
            lhs: rational_string(&defl),
            rhs: rational_string(&infl),
        });
    }
    Ok(ConstantRecord {
        kind,
        x: x.clone(),
        y: y.clone(),
        l: l.clone(),
        value: defl.clone(),
        deflation_form: defl,
        inflation_form: infl,
    })
}

pub const F_TWO_FORMS: &str = "F constant: deflation form = inflation form";
pub const G_TWO_FORMS: &str = "G constant: deflation form with correction factor = inflation form";

pub fn f_const(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<ConstantRecord> {
    record(ProductKind::F, F_TWO_FORMS, (x, y, l), f_forms(m, x, y, l)?)
}

pub fn g_const(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<ConstantRecord> {
    record(ProductKind::G, G_TWO_FORMS, (x, y, l), g_forms(m, x, y, l)?)
}

/// `q^{-<X,Y>} G_{XY}^L`, which must equal `F_{XY}^L`.
pub fn twisted_const(m: &dyn Model, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<ConstantRecord> {
    let mut r = g_const(m, x, y, l)?;
    let t = q_pow(m.field().p(), -euler(m, x, y)?);
    r.kind = ProductKind::Twisted;
    r.value *= &t;
    r.deflation_form *= &t;
    r.inflation_form *= t;
    Ok(r)
}

pub fn constant(m: &dyn Model, kind: ProductKind, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<ConstantRecord> {
    match kind {
        ProductKind::F => f_const(m, x, y, l),
        ProductKind::G => g_const(m, x, y, l),
        ProductKind::Twisted => twisted_const(m, x, y, l),
    }
}

/// A finitely supported linear combination of basis elements `u_[X]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HallElement {
    terms: BTreeMap<IsoClass, BigRational>,
}

impl HallElement {
    pub fn basis(x: &IsoClass) -> Self {
        let mut e = HallElement::default();
        e.add_term(x.clone(), BigRational::one());
        e
    }

    pub fn add_term(&mut self, x: IsoClass, c: BigRational) {
        let entry = self.terms.entry(x).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> HallElement {
        if c.is_zero() {
            return HallElement::default();
        }
        HallElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsoClass, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: &IsoClass) -> BigRational {
        self.terms.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `{name: "num/den"}`, keyed by class name.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, v)| (k.name().to_string(), serde_json::Value::String(rational_string(v))))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for HallElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("({})*u[{}]", rational_string(v), k.name()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub type Structure = Arc<Vec<(IsoClass, BigRational)>>;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    kind: ProductKind,
    x: String,
    y: String,
    terms: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    backend: String,
    entries: Vec<CacheEntry>,
}

/// Hall products over one model, memoising the structure constants of
/// each basis pair.
pub struct HallAlgebra<'a> {
    model: &'a dyn Model,
    cache: RwLock<HashMap<(ProductKind, IsoClass, IsoClass), Structure>>,
}

impl<'a> HallAlgebra<'a> {
    pub fn new(model: &'a dyn Model) -> Self {
        HallAlgebra {
            model,
            cache: RwLock::default(),
        }
    }

    pub fn model(&self) -> &'a dyn Model {
        self.model
    }

    /// Nonzero `(L, c_{XY}^L)` in candidate order.
    pub fn structure(&self, kind: ProductKind, x: &IsoClass, y: &IsoClass) -> Result<Structure> {
        let key = (kind, x.clone(), y.clone());
        if let Some(s) = self.cache.read().expect("cache lock poisoned").get(&key) {
            return Ok(s.clone());
        }
        let candidates = self.model.middle_candidates(x, y)?;
        let values: Vec<Result<Option<(IsoClass, BigRational)>>> = candidates
            .par_iter()
            .map(|l| {
                let r = constant(self.model, kind, x, y, l)?;
                Ok((!r.value.is_zero()).then(|| (l.clone(), r.value)))
            })
            .collect();
        let mut terms = Vec::new();
        for v in values {
            if let Some(t) = v? {
                terms.push(t);
            }
        }
        let s = Arc::new(terms);
        Ok(self
            .cache
            .write()
            .expect("cache lock poisoned")
            .entry(key)
            .or_insert(s)
            .clone())
    }

    pub fn mul_basis(&self, kind: ProductKind, x: &IsoClass, y: &IsoClass) -> Result<HallElement> {
        let mut out = HallElement::default();
        for (l, c) in self.structure(kind, x, y)?.iter() {
            out.add_term(l.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, kind: ProductKind, a: &HallElement, b: &HallElement) -> Result<HallElement> {
        let mut out = HallElement::default();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let c = cx * cy;
                for (l, s) in self.structure(kind, x, y)?.iter() {
                    out.add_term(l.clone(), &c * s);
                }
            }
        }
        Ok(out)
    }

    /// Writes every cached structure to `path` as JSON.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let cache = self.cache.read().expect("cache lock poisoned");
        let mut entries: Vec<CacheEntry> = cache
            .iter()
            .map(|((kind, x, y), s)| CacheEntry {
                kind: *kind,
                x: x.label().to_string(),
                y: y.label().to_string(),
                terms: s
                    .iter()
                    .map(|(l, c)| (l.label().to_string(), rational_string(c)))
                    .collect(),
            })
            .collect();
        entries.sort_by(|a, b| (a.kind, &a.x, &a.y).cmp(&(b.kind, &b.x, &b.y)));
        let file = CacheFile {
            backend: self.model.backend_id(),
            entries,
        };
        let text = serde_json::to_string_pretty(&file).map_err(|e| HallError::Invalid(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| HallError::Invalid(format!("cannot write {}: {e}", path.display())))
    }

    /// Loads structures saved by [`HallAlgebra::save_cache`] for the same backend.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HallError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let file: CacheFile =
            serde_json::from_str(&text).map_err(|e| HallError::Parse(format!("constant cache: {e}")))?;
        if file.backend != self.model.backend_id() {
            return Err(HallError::Invalid(format!(
                "constant cache belongs to {}, not {}",
                file.backend,
                self.model.backend_id()
            )));
        }
        let mut cache = self.cache.write().expect("cache lock poisoned");
        let n = file.entries.len();
        for e in file.entries {
            let x = self.model.parse_class(&e.x)?;
            let y = self.model.parse_class(&e.y)?;
            let terms = e
                .terms
                .iter()
                .map(|(l, c)| Ok((self.model.parse_class(l)?, parse_rational(c)?)))
                .collect::<Result<Vec<_>>>()?;
            cache.insert((e.kind, x, y), Arc::new(terms));
        }
        Ok(n)
    }
}
