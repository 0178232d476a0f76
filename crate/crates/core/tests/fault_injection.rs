//! A model with one corrupted count must trip the identity checks.

use exthall::hall::{f_const, f_forms, twisted_const};
use exthall::{
    Backend, Budget, FieldSpec, HallAlgebra, HallError, HallElement, IsoClass, Model, ModelCapabilities, NegVariant,
    ProductKind, Result, UniverseBound,
};
use num_bigint::BigUint;

/// Delegates everything, but adds one to `|(X,L)_Y|` for a single triple.
struct Skewed<'a> {
    inner: &'a dyn Model,
    target: (IsoClass, IsoClass, IsoClass),
}

impl Model for Skewed<'_> {
    fn backend_id(&self) -> String {
        self.inner.backend_id()
    }
    fn field(&self) -> FieldSpec {
        self.inner.field()
    }
    fn capabilities(&self) -> ModelCapabilities {
        self.inner.capabilities()
    }
    fn budget(&self) -> Budget {
        self.inner.budget()
    }
    fn zero(&self) -> IsoClass {
        self.inner.zero()
    }
    fn classes_up_to(&self, bound: &UniverseBound) -> Result<Vec<IsoClass>> {
        self.inner.classes_up_to(bound)
    }
    fn parse_class(&self, text: &str) -> Result<IsoClass> {
        self.inner.parse_class(text)
    }
    fn describe_bound(&self, bound: &UniverseBound) -> String {
        self.inner.describe_bound(bound)
    }
    fn within_bound(&self, x: &IsoClass, bound: &UniverseBound) -> bool {
        self.inner.within_bound(x, bound)
    }
    fn grothendieck(&self, x: &IsoClass) -> Result<Vec<i64>> {
        self.inner.grothendieck(x)
    }
    fn hom_dim(&self, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        self.inner.hom_dim(x, y)
    }
    fn ext_dims(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        self.inner.ext_dims(x, y)
    }
    fn neg_ext_dims(&self, v: NegVariant, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        self.inner.neg_ext_dims(v, x, y)
    }
    fn aut_order(&self, x: &IsoClass) -> Result<BigUint> {
        self.inner.aut_order(x)
    }
    fn dsum(&self, x: &IsoClass, y: &IsoClass) -> Result<IsoClass> {
        self.inner.dsum(x, y)
    }
    fn decompose(&self, x: &IsoClass) -> Result<Vec<IsoClass>> {
        self.inner.decompose(x)
    }
    fn middle_candidates(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<IsoClass>> {
        self.inner.middle_candidates(x, y)
    }
    fn inflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        let n = self.inner.inflation_count(x, l, y)?;
        if (x, l, y) == (&self.target.0, &self.target.1, &self.target.2) {
            Ok(n + 1u32)
        } else {
            Ok(n)
        }
    }
    fn deflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        self.inner.deflation_count(x, l, y)
    }
    fn extension_count(&self, y: &IsoClass, x: &IsoClass, l: &IsoClass) -> Result<BigUint> {
        self.inner.extension_count(y, x, l)
    }
}

fn skewed<'a>(backend: &'a Backend, x: &str, l: &str, y: &str) -> Skewed<'a> {
    let m = backend.model();
    let c = |s: &str| m.parse_class(s).unwrap();
    Skewed {
        inner: m,
        target: (c(x), c(l), c(y)),
    }
}

#[test]
fn corrupted_inflation_count_breaks_two_form_agreement() {
    let b = Backend::from_spec_str("quiver:A2@2", Budget::default()).unwrap();
    let m = skewed(&b, "S2", "M11", "S1");
    let c = |s: &str| m.parse_class(s).unwrap();
    let (d, i) = f_forms(&m, &c("S2"), &c("S1"), &c("M11")).unwrap();
    assert_ne!(d, i);
    assert!(matches!(
        f_const(&m, &c("S2"), &c("S1"), &c("M11")),
        Err(HallError::IdentityMismatch { .. })
    ));
    // Untouched triples still agree.
    assert!(f_const(&m, &c("S1"), &c("S2"), &c("S1+S2")).is_ok());
}

#[test]
fn corrupted_count_surfaces_in_products() {
    let b = Backend::from_spec_str("graded:@2,window=0..1", Budget::default()).unwrap();
    let m = skewed(&b, "k{1}", "0", "k{0}");
    let c = |s: &str| m.parse_class(s).unwrap();
    assert!(matches!(
        twisted_const(&m, &c("k{1}"), &c("k{0}"), &c("0")),
        Err(HallError::IdentityMismatch { .. })
    ));
    let alg = HallAlgebra::new(&m);
    let r = alg.mul(ProductKind::G, &HallElement::basis(&c("k{1}")), &HallElement::basis(&c("k{0}")));
    assert!(matches!(r, Err(HallError::IdentityMismatch { .. })));
}
