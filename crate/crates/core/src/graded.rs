//! Graded F_p-vector spaces viewed as complexes with zero differential.
//!
//! Morphisms are classified by their degreewise rank profile, so every
//! count is a sum over profiles of products of rank-matrix counts. The
//! shift convention is `(X[j])_n = x_{n+j}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Budget, HallError, Result};
use crate::ff::{count_rank_matrices, gl_order, FieldSpec};
use crate::linrep::{QuiverSpec, Rep};
use crate::model::{ClassPayload, IsoClass, Model, ModelCapabilities, NegVariant, UniverseBound};

/// Finitely supported dimension vector indexed by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedObject {
    dims: BTreeMap<i32, usize>,
}

impl GradedObject {
    pub fn new(entries: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut dims = BTreeMap::new();
        for (n, d) in entries {
            if d > 0 {
                *dims.entry(n).or_insert(0) += d;
            }
        }
        GradedObject { dims }
    }

    /// Object with `dims[i]` in degree `lo + i`.
    pub fn from_window(lo: i32, dims: &[usize]) -> Self {
        Self::new(dims.iter().enumerate().map(|(i, &d)| (lo + i as i32, d)))
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(&n, &d)| (n, d))
    }

    /// Smallest and largest occupied degree.
    pub fn support(&self) -> Option<(i32, i32)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// `X[j]`, with `(X[j])_n = x_{n+j}`.
    pub fn shift(&self, j: i32) -> Self {
        Self::new(self.degrees().map(|(n, d)| (n - j, d)))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::new(self.degrees().chain(other.degrees()))
    }

    /// Euler characteristic `Σ (-1)^n x_n`.
    pub fn chi(&self) -> i64 {
        self.degrees()
            .map(|(n, d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn within(&self, lo: i32, hi: i32) -> bool {
        self.support().is_none_or(|(a, b)| a >= lo && b <= hi)
    }

    pub fn window_dims(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|n| self.dim(n)).collect()
    }
}

impl fmt::Display for GradedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .degrees()
            .map(|(n, d)| if d == 1 { format!("k{{{n}}}") } else { format!("k{{{n}}}^{d}") })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// Degreewise ranks of a morphism.
pub type RankProfile = BTreeMap<i32, usize>;

/// Every profile with `r_n <= caps[n]`.
fn profiles(caps: &BTreeMap<i32, usize>) -> Vec<RankProfile> {
    let mut out = vec![RankProfile::new()];
    for (&n, &cap) in caps {
        if cap == 0 {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=cap).map(move |r| {
                    let mut q = p.clone();
                    if r > 0 {
                        q.insert(n, r);
                    }
                    q
                })
            })
            .collect();
    }
    out
}

fn rank(r: &RankProfile, n: i32) -> usize {
    r.get(&n).copied().unwrap_or(0)
}

/// Cone of `f: X -> Y` with rank profile `r`:
/// `c_n = (y_n - r_n) + (x_{n+1} - r_{n+1})`.
pub fn cone_class(x: &GradedObject, y: &GradedObject, r: &RankProfile) -> GradedObject {
    let mut degrees: Vec<i32> = y.dims.keys().copied().collect();
    degrees.extend(x.dims.keys().map(|n| n - 1));
    GradedObject::new(
        degrees
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|n| (n, (y.dim(n) - rank(r, n)) + (x.dim(n + 1) - rank(r, n + 1)))),
    )
}

fn min_caps(a: &GradedObject, b: &GradedObject, offset: i32) -> BTreeMap<i32, usize> {
    a.degrees()
        .map(|(n, d)| (n, d.min(b.dim(n + offset))))
        .filter(|&(_, c)| c > 0)
        .collect()
}

/// Number of morphisms `X -> L` whose cone is `Y`.
pub fn morphisms_with_cone(q: u64, x: &GradedObject, l: &GradedObject, y: &GradedObject) -> BigUint {
    let mut total = BigUint::zero();
    for r in profiles(&min_caps(x, l, 0)) {
        if cone_class(x, l, &r) == *y {
            total += x
                .degrees()
                .map(|(n, d)| count_rank_matrices(l.dim(n), d, rank(&r, n), q))
                .product::<BigUint>();
        }
    }
    total
}

/// Number of morphisms `L -> Y` whose cocone `Cone(g)[-1]` is `X`.
pub fn morphisms_with_cocone(q: u64, x: &GradedObject, l: &GradedObject, y: &GradedObject) -> BigUint {
    let mut total = BigUint::zero();
    for r in profiles(&min_caps(l, y, 0)) {
        if cone_class(l, y, &r).shift(-1) == *x {
            total += l
                .degrees()
                .map(|(n, d)| count_rank_matrices(y.dim(n), d, rank(&r, n), q))
                .product::<BigUint>();
        }
    }
    total
}

/// Number of `delta: Y -> X[1]` whose cocone is `L`; the middle term has
/// `m_n = (x_n - s_{n-1}) + (y_n - s_n)` for `s_n = rank(Y_n -> X_{n+1})`.
pub fn extensions_with_middle(q: u64, y: &GradedObject, x: &GradedObject, l: &GradedObject) -> BigUint {
    let mut total = BigUint::zero();
    for s in profiles(&min_caps(y, x, 1)) {
        if extension_middle(x, y, &s) == *l {
            total += y
                .degrees()
                .map(|(n, d)| count_rank_matrices(x.dim(n + 1), d, rank(&s, n), q))
                .product::<BigUint>();
        }
    }
    total
}

pub fn extension_middle(x: &GradedObject, y: &GradedObject, s: &RankProfile) -> GradedObject {
    let degrees: std::collections::BTreeSet<i32> = x.dims.keys().chain(y.dims.keys()).copied().collect();
    GradedObject::new(
        degrees
            .into_iter()
            .map(|n| (n, (x.dim(n) - rank(s, n - 1)) + (y.dim(n) - rank(s, n)))),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradedVariant {
    /// All graded spaces; the window only bounds enumeration.
    Triangulated,
    /// The extension-closed subcategory of spaces supported in the window.
    Interval,
}

pub struct GradedModel {
    field: FieldSpec,
    window: (i32, i32),
    variant: GradedVariant,
    budget: Budget,
}

impl GradedModel {
    pub fn new(field: FieldSpec, window: (i32, i32), variant: GradedVariant, budget: Budget) -> Self {
        GradedModel {
            field,
            window,
            variant,
            budget,
        }
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn variant(&self) -> GradedVariant {
        self.variant
    }

    fn q(&self) -> u64 {
        self.field.p() as u64
    }

    fn prefix(&self) -> &'static str {
        match self.variant {
            GradedVariant::Triangulated => "graded",
            GradedVariant::Interval => "interval",
        }
    }

    pub fn object<'a>(&self, c: &'a IsoClass) -> Result<&'a GradedObject> {
        match c.payload() {
            ClassPayload::Graded(g) if c.label().starts_with(&format!("{}@", self.prefix())) => Ok(g),
            _ => Err(HallError::Invalid(format!(
                "{} is not a class of {}",
                c.label(),
                self.backend_id()
            ))),
        }
    }

    /// Class of an object supported in the window.
    pub fn class_of(&self, g: &GradedObject) -> Result<IsoClass> {
        let (lo, hi) = self.window;
        if !g.within(lo, hi) {
            return Err(HallError::Invalid(format!("{g} lies outside the window {lo}..{hi}")));
        }
        let dims: Vec<String> = g.window_dims(lo, hi).iter().map(|d| d.to_string()).collect();
        let label = format!(
            "{}@{}:w={lo}..{hi}:[{}]",
            self.prefix(),
            self.field.p(),
            dims.join(",")
        );
        Ok(IsoClass::new(label, g.to_string(), ClassPayload::Graded(g.clone())))
    }

    /// The quiver with one vertex per window degree; graded morphisms
    /// between window objects are exactly its representation morphisms.
    pub fn degree_quiver(&self) -> QuiverSpec {
        QuiverSpec::discrete((self.window.1 - self.window.0 + 1) as usize)
    }

    pub fn to_rep(&self, g: &GradedObject) -> Rep {
        let (lo, hi) = self.window;
        let dims = g.window_dims(lo, hi);
        Rep::zero_maps(self.field, &self.degree_quiver(), dims)
    }

    pub fn from_rep(&self, r: &Rep) -> Result<IsoClass> {
        self.class_of(&GradedObject::from_window(self.window.0, &r.dims))
    }

    fn caps(&self, bound: &UniverseBound) -> (usize, Option<usize>) {
        match (bound.per_degree, bound.max_dim) {
            (Some(p), total) => (p, total),
            (None, Some(m)) => (m, None),
            (None, None) => (1, None),
        }
    }

    fn parse_term(&self, term: &str) -> Result<GradedObject> {
        let bad = || HallError::Parse(format!("bad graded term {term:?}"));
        let (base, mult) = match term.split_once('^') {
            Some((b, m)) => (b, m.trim().parse::<usize>().map_err(|_| bad())?),
            None => (term, 1),
        };
        let deg = base
            .trim()
            .strip_prefix("k{")
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(bad)?
            .trim()
            .parse::<i32>()
            .map_err(|_| bad())?;
        Ok(GradedObject::new([(deg, mult)]))
    }
}

impl Model for GradedModel {
    fn backend_id(&self) -> String {
        format!("{}:@{},window={}..{}", self.prefix(), self.field.p(), self.window.0, self.window.1)
    }

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn capabilities(&self) -> ModelCapabilities {
        let tri = self.variant == GradedVariant::Triangulated;
        ModelCapabilities {
            right_hom_finite: true,
            left_hom_finite: tri,
            has_neg_ext: tri,
            exact_case: false,
            triangulated_case: tri,
        }
    }

    fn budget(&self) -> Budget {
        self.budget
    }

    fn zero(&self) -> IsoClass {
        self.class_of(&GradedObject::default()).expect("zero lies in every window")
    }

    fn classes_up_to(&self, bound: &UniverseBound) -> Result<Vec<IsoClass>> {
        let (lo, hi) = self.window;
        let (cap, total) = self.caps(bound);
        let width = (hi - lo + 1) as u32;
        self.budget
            .check("graded universe", &BigUint::from(cap as u64 + 1).pow(width))?;
        let mut vecs: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in lo..=hi {
            vecs = vecs
                .into_iter()
                .flat_map(|v| {
                    (0..=cap).map(move |d| {
                        let mut w = v.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        if let Some(t) = total {
            vecs.retain(|v| v.iter().sum::<usize>() <= t);
        }
        vecs.sort_by_key(|v| (v.iter().sum::<usize>(), std::cmp::Reverse(v.clone())));
        vecs.iter()
            .map(|v| self.class_of(&GradedObject::from_window(lo, v)))
            .collect()
    }

    fn parse_class(&self, text: &str) -> Result<IsoClass> {
        let text = text.trim();
        let (lo, hi) = self.window;
        if let Some(rest) = text.strip_prefix(&format!("{}@", self.prefix())) {
            let expected = format!("{}:w={lo}..{hi}:", self.field.p());
            let dims = rest
                .strip_prefix(&expected)
                .ok_or_else(|| HallError::Parse(format!("label {text:?} belongs to another backend")))?;
            return self.parse_class(dims);
        }
        if text.starts_with("graded@") || text.starts_with("interval@") {
            return Err(HallError::Parse(format!("label {text:?} belongs to another backend")));
        }
        let obj = if let Some(inner) = text.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| HallError::Parse(format!("unterminated dimension list {text:?}")))?;
            let dims: Vec<usize> = inner
                .split(',')
                .map(|d| d.trim().parse().map_err(|_| HallError::Parse(format!("bad dimension {d:?}"))))
                .collect::<Result<_>>()?;
            if dims.len() != (hi - lo + 1) as usize {
                return Err(HallError::Parse(format!(
                    "dimension list {text:?} does not cover the window {lo}..{hi}"
                )));
            }
            GradedObject::from_window(lo, &dims)
        } else if text == "0" {
            GradedObject::default()
        } else {
            let mut acc = GradedObject::default();
            for term in text.split('+') {
                acc = acc.sum(&self.parse_term(term)?);
            }
            acc
        };
        self.class_of(&obj)
            .map_err(|_| HallError::Parse(format!("{text:?} lies outside the window {lo}..{hi}")))
    }

    fn describe_bound(&self, bound: &UniverseBound) -> String {
        let (cap, total) = self.caps(bound);
        let (lo, hi) = self.window;
        match total {
            Some(t) => format!("window {lo}..{hi}, dim per degree <= {cap}, total dim <= {t}"),
            None => format!("window {lo}..{hi}, dim per degree <= {cap}"),
        }
    }

    fn within_bound(&self, x: &IsoClass, bound: &UniverseBound) -> bool {
        let (cap, total) = self.caps(bound);
        self.object(x).is_ok_and(|g| {
            g.within(self.window.0, self.window.1)
                && g.degrees().all(|(_, d)| d <= cap)
                && total.is_none_or(|t| g.total() <= t)
        })
    }

    fn grothendieck(&self, x: &IsoClass) -> Result<Vec<i64>> {
        Ok(vec![self.object(x)?.chi()])
    }

    fn hom_dim(&self, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        let (gx, gy) = (self.object(x)?, self.object(y)?);
        Ok(gx.degrees().map(|(n, d)| d * gy.dim(n)).sum())
    }

    fn ext_dims(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        let (gx, gy) = (self.object(x)?, self.object(y)?);
        let (Some((xlo, _)), Some((_, yhi))) = (gx.support(), gy.support()) else {
            return Ok(Vec::new());
        };
        let mut out: Vec<usize> = (1..=(yhi - xlo).max(0))
            .map(|i| gx.degrees().map(|(n, d)| d * gy.dim(n + i)).sum())
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        Ok(out)
    }

    fn neg_ext_dims(&self, _variant: NegVariant, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        if self.variant == GradedVariant::Interval {
            return Err(HallError::Capability(
                "the interval backend has no negative extension groups".into(),
            ));
        }
        let (gx, gy) = (self.object(x)?, self.object(y)?);
        let (Some((_, xhi)), Some((ylo, _))) = (gx.support(), gy.support()) else {
            return Ok(Vec::new());
        };
        let mut out: Vec<usize> = (1..=(xhi - ylo).max(0))
            .map(|i| gx.degrees().map(|(n, d)| d * gy.dim(n - i)).sum())
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        Ok(out)
    }

    fn aut_order(&self, x: &IsoClass) -> Result<BigUint> {
        Ok(self
            .object(x)?
            .degrees()
            .map(|(_, d)| gl_order(d, self.q()))
            .product())
    }

    fn dsum(&self, x: &IsoClass, y: &IsoClass) -> Result<IsoClass> {
        self.class_of(&self.object(x)?.sum(self.object(y)?))
    }

    fn decompose(&self, x: &IsoClass) -> Result<Vec<IsoClass>> {
        let mut out = Vec::new();
        for (n, d) in self.object(x)?.degrees() {
            let k = self.class_of(&GradedObject::new([(n, 1)]))?;
            out.extend(std::iter::repeat_n(k, d));
        }
        Ok(out)
    }

    fn middle_candidates(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<IsoClass>> {
        let (gx, gy) = (self.object(x)?, self.object(y)?);
        let (lo, hi) = self.window;
        let chi = gx.chi() + gy.chi();
        let caps: Vec<usize> = (lo..=hi).map(|n| gx.dim(n) + gy.dim(n)).collect();
        let count: BigUint = caps.iter().map(|&c| BigUint::from(c as u64 + 1)).product();
        self.budget.check("middle-term candidates", &count)?;
        let mut vecs: Vec<Vec<usize>> = vec![Vec::new()];
        for &c in &caps {
            vecs = vecs
                .into_iter()
                .flat_map(|v| {
                    (0..=c).map(move |d| {
                        let mut w = v.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        vecs.into_iter()
            .map(|v| GradedObject::from_window(lo, &v))
            .filter(|g| g.chi() == chi)
            .map(|g| self.class_of(&g))
            .collect()
    }

    fn inflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        Ok(morphisms_with_cone(self.q(), self.object(x)?, self.object(l)?, self.object(y)?))
    }

    fn deflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        Ok(morphisms_with_cocone(self.q(), self.object(x)?, self.object(l)?, self.object(y)?))
    }

    fn extension_count(&self, y: &IsoClass, x: &IsoClass, l: &IsoClass) -> Result<BigUint> {
        Ok(extensions_with_middle(self.q(), self.object(y)?, self.object(x)?, self.object(l)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Backend;
    use num_traits::One;

    fn model(spec: &str) -> GradedModel {
        match Backend::from_spec_str(spec, Budget::default()).unwrap() {
            Backend::Graded(m) => m,
            _ => unreachable!(),
        }
    }

    fn k(n: i32) -> GradedObject {
        GradedObject::new([(n, 1)])
    }

    #[test]
    fn cone_conventions() {
        let full: RankProfile = [(0, 1)].into_iter().collect();
        assert_eq!(cone_class(&k(0), &k(0), &full), GradedObject::default());
        assert_eq!(cone_class(&k(1), &GradedObject::default(), &RankProfile::new()), k(0));
        let zero = cone_class(&k(0), &k(0), &RankProfile::new());
        assert_eq!(zero, k(0).sum(&k(-1)));
        assert_eq!(zero, k(0).sum(&k(0).shift(1)));
    }

    #[test]
    fn homs_and_exts() {
        let m = model("graded:@2,window=-2..3");
        let c = |s: &str| m.parse_class(s).unwrap();
        assert_eq!(m.hom_dim(&c("k{0}"), &c("k{0}")).unwrap(), 1);
        assert_eq!(m.ext_dim(1, &c("k{0}"), &c("k{1}")).unwrap(), 1);
        assert_eq!(m.neg_ext_dim(NegVariant::I, 2, &c("k{2}"), &c("k{0}")).unwrap(), 1);
        assert_eq!(m.ext_dims(&c("k{0}"), &c("k{2}")).unwrap(), vec![0, 1]);
        let x = c("k{0}^2+k{1}");
        let y = c("k{1}+k{3}");
        for i in 1..5 {
            let shifted = m.class_of(&m.object(&y).unwrap().shift(i)).ok();
            if let Some(s) = shifted {
                assert_eq!(m.ext_dim(i as usize, &x, &y).unwrap(), m.hom_dim(&x, &s).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        for p in [2u32, 3] {
            let m = model(&format!("graded:@{p},window=-1..2"));
            let q = BigUint::from(p);
            let c = |s: &str| m.parse_class(s).unwrap();
            let z = m.zero();
            assert_eq!(m.inflation_count(&c("k{1}"), &z, &c("k{0}")).unwrap(), BigUint::one());
            assert_eq!(m.inflation_count(&c("k{0}"), &c("k{0}"), &z).unwrap(), &q - 1u32);
            assert_eq!(
                m.inflation_count(&c("k{0}"), &c("k{0}^2"), &c("k{0}")).unwrap(),
                &q * &q - 1u32
            );
            assert_eq!(m.extension_count(&c("k{0}"), &c("k{1}"), &z).unwrap(), &q - 1u32);
            assert_eq!(
                m.extension_count(&c("k{0}"), &c("k{1}"), &c("k{0}+k{1}")).unwrap(),
                BigUint::one()
            );
            assert_eq!(m.aut_order(&c("k{0}")).unwrap(), &q - 1u32);
            assert_eq!(m.aut_order(&z).unwrap(), BigUint::one());
        }
        let m = model("graded:@2,window=0..0");
        assert_eq!(m.aut_order(&m.parse_class("[2]").unwrap()).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn every_morphism_has_one_cone() {
        let m = model("graded:@2,window=0..2");
        let universe = m.classes_up_to(&UniverseBound::per_degree(2)).unwrap();
        for x in &universe {
            for l in &universe {
                let (gx, gl) = (m.object(x).unwrap(), m.object(l).unwrap());
                let mut total = BigUint::zero();
                let mut cones = std::collections::BTreeSet::new();
                for r in profiles(&min_caps(gx, gl, 0)) {
                    cones.insert(cone_class(gx, gl, &r));
                }
                for y in cones {
                    total += morphisms_with_cone(2, gx, gl, &y);
                }
                assert_eq!(total, BigUint::from(2u32).pow(m.hom_dim(x, l).unwrap() as u32));
            }
        }
    }

    #[test]
    fn split_extension_is_unique() {
        let m = model("graded:@3,window=0..2");
        let universe = m.classes_up_to(&UniverseBound::per_degree(1)).unwrap();
        for x in &universe {
            for y in &universe {
                let split = m.dsum(x, y).unwrap();
                assert_eq!(m.extension_count(y, x, &split).unwrap(), BigUint::one());
            }
        }
    }

    #[test]
    fn universe_sizes_and_names() {
        let m = model("graded:@2,window=0..1");
        let names: Vec<String> = m
            .classes_up_to(&UniverseBound::max_dim(1))
            .unwrap()
            .iter()
            .map(|c| c.name().to_string())
            .collect();
        assert_eq!(names, ["0", "k{0}", "k{1}", "k{0}+k{1}"]);
        let c = m.parse_class("[2,1]").unwrap();
        assert_eq!(c.name(), "k{0}^2+k{1}");
        assert_eq!(m.parse_class(c.label()).unwrap(), c);
        let parts: Vec<String> = m.decompose(&c).unwrap().iter().map(|c| c.name().to_string()).collect();
        assert_eq!(parts, ["k{0}", "k{0}", "k{1}"]);
        assert!(matches!(m.parse_class("k{5}"), Err(HallError::Parse(_))));
    }

    #[test]
    fn interval_window_zero_matches_a1() {
        let g = model("interval:@3,window=0..0");
        let q = match Backend::from_spec_str("quiver:A1@3", Budget::default()).unwrap() {
            Backend::Quiver(m) => m,
            _ => unreachable!(),
        };
        let gu = g.classes_up_to(&UniverseBound::per_degree(3)).unwrap();
        let qu = q.classes_up_to(&UniverseBound::max_dim(3)).unwrap();
        let gm: &dyn Model = &g;
        let qm: &dyn Model = &q;
        let dim = |m: &dyn Model, c: &IsoClass| m.grothendieck(c).unwrap()[0];
        for x in 0..gu.len() {
            for l in 0..gu.len() {
                for y in 0..gu.len() {
                    let (a, b, c) = (&gu[x], &gu[l], &gu[y]);
                    let find = |t: &IsoClass| qu.iter().find(|u| dim(qm, u) == dim(gm, t)).unwrap();
                    let (qa, qb, qc) = (find(a), find(b), find(c));
                    assert_eq!(gm.inflation_count(a, b, c).unwrap(), qm.inflation_count(qa, qb, qc).unwrap());
                    assert_eq!(gm.deflation_count(a, b, c).unwrap(), qm.deflation_count(qa, qb, qc).unwrap());
                    assert_eq!(gm.extension_count(c, a, b).unwrap(), qm.extension_count(qc, qa, qb).unwrap());
                    assert_eq!(gm.aut_order(a).unwrap(), qm.aut_order(qa).unwrap());
                }
            }
        }
        assert!(matches!(
            gm.neg_ext_dims(NegVariant::I, &gu[1], &gu[1]),
            Err(HallError::Capability(_))
        ));
    }
}
