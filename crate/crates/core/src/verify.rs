//! Identity suites: each checks one family of exact equalities over a
//! universe of classes and reports every mismatch with its operands.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HallError, Result};
use crate::graded::{self, GradedVariant};
use crate::hall::{self, braces_neg, braces_pos, bracket, rational_string, HallAlgebra, HallElement, ProductKind};
use crate::model::{Backend, IsoClass, Model, NegVariant, UniverseBound};
use crate::oracle::{closed_im_sizes, Oracle, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    Main2,
    Prop36,
    Prop37,
    Lemma31,
    Lemma33,
    AssocF,
    AssocG,
    ExactCor,
    Toen,
    Twist,
    EulerDescent,
    OracleEq,
    Hbar,
}

impl SuiteName {
    pub const ALL: [SuiteName; 13] = [
        SuiteName::Main2,
        SuiteName::Prop36,
        SuiteName::Prop37,
        SuiteName::Lemma31,
        SuiteName::Lemma33,
        SuiteName::AssocF,
        SuiteName::AssocG,
        SuiteName::ExactCor,
        SuiteName::Toen,
        SuiteName::Twist,
        SuiteName::EulerDescent,
        SuiteName::OracleEq,
        SuiteName::Hbar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Main2 => "main2",
            SuiteName::Prop36 => "prop36",
            SuiteName::Prop37 => "prop37",
            SuiteName::Lemma31 => "lemma31",
            SuiteName::Lemma33 => "lemma33",
            SuiteName::AssocF => "assoc-F",
            SuiteName::AssocG => "assoc-G",
            SuiteName::ExactCor => "exact-cor",
            SuiteName::Toen => "toen",
            SuiteName::Twist => "twist",
            SuiteName::EulerDescent => "euler-descent",
            SuiteName::OracleEq => "oracle-eq",
            SuiteName::Hbar => "hbar",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = SuiteName::ALL.iter().map(|n| n.as_str()).collect();
                HallError::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub bound: UniverseBound,
    pub seed: u64,
    /// Witnesses drawn by the sampling suites.
    pub samples: usize,
    pub timing: bool,
}

impl SuiteConfig {
    pub fn new(bound: UniverseBound) -> Self {
        SuiteConfig {
            bound,
            seed: 0,
            samples: 24,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub operands: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub cite: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub backend: String,
    pub universe: String,
    pub cases: u64,
    pub seed: u64,
    pub failures: Vec<Failure>,
    pub wall_ms: Option<u64>,
    pub version: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }

    /// One row per failure: `suite,operands,lhs,rhs,cite`.
    pub fn to_csv(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        let mut out = String::from("suite,operands,lhs,rhs,cite\n");
        for f in &self.failures {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.suite,
                quote(&f.operands.join("; ")),
                quote(&f.lhs),
                quote(&f.rhs),
                quote(&f.cite)
            ));
        }
        out
    }
}

pub mod cite {
    pub const F_TWO_FORMS: &str = crate::hall::F_TWO_FORMS;
    pub const G_TWO_FORMS: &str = crate::hall::G_TWO_FORMS;
    pub const ORBIT_SUM_DEFLATION: &str =
        "orbit sum over Aut L x Aut Y of |End _gY|/|Aut _gY| {Y,L}' = [X,L]/[L,L] |(X,L)_Y|/|Aut L| = {Y,X}'/[Y,Y] |E(Y,X)_L|/|Aut Y|";
    pub const ORBIT_SUM_INFLATION: &str =
        "orbit sum over Aut X x Aut L of |End X_f|/|Aut X_f| {L,X}' = [L,Y]/[L,L] |_X(L,Y)|/|Aut L| = {Y,X}'/[X,X] |E(Y,X)_L|/|Aut X|";
    pub const IMAGE_SIZES: &str = "image sizes of Hom(g,L), Hom(Y,g), Hom(L,f), Hom(f,X) from brackets and braces";
    pub const STABILIZERS: &str = "stabiliser orders |Im(g,L)| |Aut L_g|/|End L_g| and |Im(Y,g)| |Aut _gY|/|End _gY|";
    pub const ASSOC_F: &str = "associativity of the F product";
    pub const ASSOC_G: &str = "associativity of the G product";
    pub const EXACT_CASE: &str = "|W|/(|Aut X| |Aut Y|) = |_X(L,Y)|/|Aut Y| = |(X,L)_Y|/|Aut X| in the exact case";
    pub const TOEN: &str = "cone-counting formula |(L,Y)_X[1]|/|Aut Y| {L,Y}/{Y,Y} = |(X,L)_Y|/|Aut X| {X,L}/{X,X}";
    pub const TWIST: &str = "F product = q^-<X,Y> times G product";
    pub const EULER_DESCENT: &str = "Euler form is additive over conflations";
    pub const EXTENSION_ORBITS: &str = "extension count = number of Aut L orbits on conflations";
    pub const INFLATIONS: &str = "inflation count = brute-force filtering of monomorphisms by cokernel";
    pub const DEFLATIONS: &str = "deflation count = brute-force filtering of epimorphisms by kernel";
    pub const CONE_COUNTS: &str = "closed-form cone counts = brute-force matrix filtering";
    pub const HOM_AUT: &str = "Hom dimension and Aut order = brute-force matrix filtering";
    pub const HBAR: &str = "correction factor built from the eight negative braces equals 1";
}

fn rat(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn names(cs: &[&IsoClass]) -> Vec<String> {
    let tags = ["X", "Y", "L", "Z", "T"];
    cs.iter().enumerate().map(|(i, c)| format!("{}={}", tags[i.min(4)], c.name())).collect()
}

fn failure(operands: Vec<String>, lhs: impl Into<String>, rhs: impl Into<String>, cite: &str) -> Failure {
    Failure {
        operands,
        lhs: lhs.into(),
        rhs: rhs.into(),
        cite: cite.into(),
    }
}

/// Equal chain `a = b = c`; one failure per broken link.
fn chain(operands: &[String], values: &[BigRational], cite: &str) -> Vec<Failure> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(i, w)| {
            let mut ops = operands.to_vec();
            ops.push(format!("link={}", i + 1));
            failure(ops, rational_string(&w[0]), rational_string(&w[1]), cite)
        })
        .collect()
}

/// Turns an identity mismatch raised inside a product into a failure.
fn product_or_failure(r: Result<HallElement>, operands: &[String]) -> Result<std::result::Result<HallElement, Failure>> {
    match r {
        Ok(e) => Ok(Ok(e)),
        Err(HallError::IdentityMismatch {
            identity,
            operands: inner,
            lhs,
            rhs,
        }) => {
            let mut ops = operands.to_vec();
            ops.push(inner);
            Ok(Err(failure(ops, lhs, rhs, &identity)))
        }
        Err(e) => Err(e),
    }
}

fn element_json(e: &HallElement) -> String {
    e.to_json().to_string()
}

fn total_dim(m: &dyn Model, x: &IsoClass) -> Result<i64> {
    Ok(m.grothendieck(x)?.iter().sum())
}

struct Ctx<'a> {
    backend: &'a Backend,
    m: &'a dyn Model,
    cfg: &'a SuiteConfig,
    universe: Vec<IsoClass>,
}

type Outcome = Result<(u64, Vec<Failure>)>;

/// Runs `check` on every case in parallel, keeping the case order.
fn run_cases<T: Sync>(cases: &[T], check: impl Fn(&T) -> Result<Vec<Failure>> + Sync + Send) -> Outcome {
    let per: Vec<Vec<Failure>> = cases.par_iter().map(check).collect::<Result<_>>()?;
    Ok((cases.len() as u64, per.into_iter().flatten().collect()))
}

impl Ctx<'_> {
    fn triples(&self) -> Vec<(IsoClass, IsoClass, IsoClass)> {
        let u = &self.universe;
        let mut out = Vec::with_capacity(u.len().pow(3));
        for x in u {
            for y in u {
                for l in u {
                    out.push((x.clone(), y.clone(), l.clone()));
                }
            }
        }
        out
    }

    /// Triples with `L` in the universe whose dimension vectors add up.
    fn additive_triples(&self) -> Result<Vec<(IsoClass, IsoClass, IsoClass)>> {
        let mut out = Vec::new();
        for (x, y, l) in self.triples() {
            let (gx, gy, gl) = (self.m.grothendieck(&x)?, self.m.grothendieck(&y)?, self.m.grothendieck(&l)?);
            if gx.iter().zip(&gy).map(|(a, b)| a + b).eq(gl.iter().copied()) {
                out.push((x, y, l));
            }
        }
        Ok(out)
    }

    fn pairs(&self) -> Vec<(IsoClass, IsoClass)> {
        let u = &self.universe;
        u.iter().flat_map(|x| u.iter().map(move |y| (x.clone(), y.clone()))).collect()
    }

    /// Triples whose products stay inside the universe: on quiver
    /// backends the summed dimension respects the bound.
    fn closed_triples(&self) -> Result<Vec<(IsoClass, IsoClass, IsoClass)>> {
        let cap = match (self.backend, self.cfg.bound.max_dim) {
            (Backend::Quiver(_), Some(n)) => Some(n as i64),
            _ => None,
        };
        let mut out = Vec::new();
        for (x, y, z) in self.triples() {
            if let Some(n) = cap {
                if total_dim(self.m, &x)? + total_dim(self.m, &y)? + total_dim(self.m, &z)? > n {
                    continue;
                }
            }
            out.push((x, y, z));
        }
        Ok(out)
    }

    fn require_quiver(&self, suite: SuiteName) -> Result<()> {
        match self.backend {
            Backend::Quiver(_) => Ok(()),
            Backend::Graded(_) => Err(HallError::Capability(format!(
                "suite {suite} enumerates conflation sets and runs on quiver backends only"
            ))),
        }
    }

    fn main2(&self) -> Outcome {
        run_cases(&self.triples(), |(x, y, l)| {
            let (d, i) = hall::f_forms(self.m, x, y, l)?;
            Ok(chain(&names(&[x, y, l]), &[d, i], cite::F_TWO_FORMS))
        })
    }

    fn prop36(&self, oracle: &Oracle) -> Outcome {
        self.require_quiver(SuiteName::Prop36)?;
        let m = self.m;
        run_cases(&self.additive_triples()?, |(x, y, l)| {
            let mut sum = BigRational::zero();
            for (_, g) in oracle.orbit_reps_aut_l_aut_y(x, y, l)? {
                let c = oracle.radical_decompose(&g, l, y)?;
                sum += rat(m.end_order(&c)?) / rat(m.aut_order(&c)?) * braces_pos(m, y, l)?;
            }
            let via_inflations =
                bracket(m, x, l)? / bracket(m, l, l)? * rat(m.inflation_count(x, l, y)?) / rat(m.aut_order(l)?);
            let via_extensions =
                braces_pos(m, y, x)? / bracket(m, y, y)? * rat(m.extension_count(y, x, l)?) / rat(m.aut_order(y)?);
            Ok(chain(&names(&[x, y, l]), &[sum, via_inflations, via_extensions], cite::ORBIT_SUM_DEFLATION))
        })
    }

    fn prop37(&self, oracle: &Oracle) -> Outcome {
        self.require_quiver(SuiteName::Prop37)?;
        let m = self.m;
        run_cases(&self.additive_triples()?, |(x, y, l)| {
            let mut sum = BigRational::zero();
            for (f, _) in oracle.orbit_reps_aut_x_aut_l(x, y, l)? {
                let c = oracle.radical_decompose(&f, x, l)?;
                sum += rat(m.end_order(&c)?) / rat(m.aut_order(&c)?) * braces_pos(m, l, x)?;
            }
            let via_deflations =
                bracket(m, l, y)? / bracket(m, l, l)? * rat(m.deflation_count(x, l, y)?) / rat(m.aut_order(l)?);
            let via_extensions =
                braces_pos(m, y, x)? / bracket(m, x, x)? * rat(m.extension_count(y, x, l)?) / rat(m.aut_order(x)?);
            Ok(chain(&names(&[x, y, l]), &[sum, via_deflations, via_extensions], cite::ORBIT_SUM_INFLATION))
        })
    }

    fn witnesses(&self, oracle: &Oracle, at_least: usize) -> Result<Vec<Witness>> {
        oracle.sample_witnesses(&self.universe, self.cfg.samples.max(at_least), self.cfg.seed)
    }

    fn witness_operands(w: &Witness, k: usize) -> Vec<String> {
        let mut ops = names(&[&w.x, &w.y, &w.l]);
        ops.push(format!("witness={k}"));
        ops.push(format!("f={:?}", w.f.flat()));
        ops.push(format!("g={:?}", w.g.flat()));
        ops
    }

    fn lemma31(&self, oracle: &Oracle) -> Outcome {
        let ws: Vec<(usize, Witness)> = self.witnesses(oracle, 0)?.into_iter().enumerate().collect();
        run_cases(&ws, |(k, w)| {
            let brute = oracle.brute_im_sizes(w)?;
            let closed = closed_im_sizes(self.m, w)?;
            let mut out = Vec::new();
            for (tag, b, c) in [
                ("Im Hom(g,L)", &brute.g_l, &closed.g_l),
                ("Im Hom(Y,g)", &brute.y_g, &closed.y_g),
                ("Im Hom(L,f)", &brute.l_f, &closed.l_f),
                ("Im Hom(f,X)", &brute.f_x, &closed.f_x),
            ] {
                if b != c {
                    let mut ops = Self::witness_operands(w, *k);
                    ops.push(tag.into());
                    out.push(failure(ops, rational_string(b), rational_string(c), cite::IMAGE_SIZES));
                }
            }
            Ok(out)
        })
    }

    fn lemma33(&self, oracle: &Oracle) -> Outcome {
        let ws: Vec<(usize, Witness)> = self.witnesses(oracle, 0)?.into_iter().enumerate().collect();
        run_cases(&ws, |(k, w)| {
            let (bl, by) = oracle.brute_stabilizers(w)?;
            let (cl, cy) = oracle.closed_stabilizers(w)?;
            let mut out = Vec::new();
            for (tag, b, c) in [("G_L", rat(bl), cl), ("G_Y", rat(by), cy)] {
                if b != c {
                    let mut ops = Self::witness_operands(w, *k);
                    ops.push(tag.into());
                    out.push(failure(ops, rational_string(&b), rational_string(&c), cite::STABILIZERS));
                }
            }
            Ok(out)
        })
    }

    fn assoc(&self, kind: ProductKind) -> Outcome {
        let cite = if kind == ProductKind::F { cite::ASSOC_F } else { cite::ASSOC_G };
        let algebra = HallAlgebra::new(self.m);
        run_cases(&self.closed_triples()?, |(x, y, z)| {
            let ops = names(&[x, y, z]);
            let (ux, uy, uz) = (HallElement::basis(x), HallElement::basis(y), HallElement::basis(z));
            let left = match product_or_failure(algebra.mul(kind, &ux, &uy), &ops)? {
                Ok(xy) => product_or_failure(algebra.mul(kind, &xy, &uz), &ops)?,
                Err(f) => Err(f),
            };
            let right = match product_or_failure(algebra.mul(kind, &uy, &uz), &ops)? {
                Ok(yz) => product_or_failure(algebra.mul(kind, &ux, &yz), &ops)?,
                Err(f) => Err(f),
            };
            Ok(match (left, right) {
                (Ok(a), Ok(b)) if a == b => Vec::new(),
                (Ok(a), Ok(b)) => vec![failure(ops, element_json(&a), element_json(&b), cite)],
                (a, b) => a.err().into_iter().chain(b.err()).collect(),
            })
        })
    }

    fn exact_cor(&self, oracle: &Oracle) -> Outcome {
        self.require_quiver(SuiteName::ExactCor)?;
        let m = self.m;
        run_cases(&self.additive_triples()?, |(x, y, l)| {
            let (ax, ay) = (rat(m.aut_order(x)?), rat(m.aut_order(y)?));
            let w = rat(oracle.brute_w_count(x, y, l)?) / (&ax * &ay);
            let defl = rat(m.deflation_count(x, l, y)?) / ay;
            let infl = rat(m.inflation_count(x, l, y)?) / ax;
            Ok(chain(&names(&[x, y, l]), &[w, defl, infl], cite::EXACT_CASE))
        })
    }

    fn toen(&self) -> Outcome {
        let g = match self.backend {
            Backend::Graded(g) if g.variant() == GradedVariant::Triangulated => g,
            _ => {
                return Err(HallError::Capability(
                    "the cone-counting formula needs the triangulated graded backend".into(),
                ))
            }
        };
        let m = self.m;
        let q = m.field().p() as u64;
        let mut cases = Vec::new();
        for (x, y) in self.pairs() {
            for l in m.middle_candidates(&x, &y)? {
                cases.push((x.clone(), y.clone(), l));
            }
        }
        run_cases(&cases, |(x, y, l)| {
            let (xo, yo, lo) = (g.object(x)?, g.object(y)?, g.object(l)?);
            let lhs = rat(graded::morphisms_with_cone(q, lo, yo, &xo.shift(1))) / rat(m.aut_order(y)?)
                * braces_neg(m, NegVariant::I, l, y)?
                / braces_neg(m, NegVariant::I, y, y)?;
            let rhs = rat(graded::morphisms_with_cone(q, xo, lo, yo)) / rat(m.aut_order(x)?)
                * braces_neg(m, NegVariant::I, x, l)?
                / braces_neg(m, NegVariant::I, x, x)?;
            let mut out = chain(&names(&[x, y, l]), &[lhs.clone(), rhs], cite::TOEN);
            let (d, i) = hall::g_forms(m, x, y, l)?;
            out.extend(chain(&names(&[x, y, l]), &[lhs, d, i], cite::G_TWO_FORMS));
            Ok(out)
        })
    }

    fn twist(&self) -> Outcome {
        let algebra = HallAlgebra::new(self.m);
        run_cases(&self.pairs(), |(x, y)| {
            let ops = names(&[x, y]);
            let f = product_or_failure(algebra.mul_basis(ProductKind::F, x, y), &ops)?;
            let t = product_or_failure(algebra.mul_basis(ProductKind::Twisted, x, y), &ops)?;
            Ok(match (f, t) {
                (Ok(a), Ok(b)) if a == b => Vec::new(),
                (Ok(a), Ok(b)) => vec![failure(ops, element_json(&a), element_json(&b), cite::TWIST)],
                (a, b) => a.err().into_iter().chain(b.err()).collect(),
            })
        })
    }

    fn euler_descent(&self, oracle: &Oracle) -> Outcome {
        let m = self.m;
        let ws = self.witnesses(oracle, 50)?;
        let mut cases = Vec::new();
        for (k, w) in ws.iter().enumerate() {
            for t in &self.universe {
                cases.push((k, w, t.clone()));
            }
        }
        run_cases(&cases, |(k, w, t)| {
            let mut ops = names(&[&w.x, &w.y, &w.l]);
            ops.push(format!("T={}", t.name()));
            ops.push(format!("witness={k}"));
            let mut out = Vec::new();
            let right = (hall::euler(m, &w.l, t)?, hall::euler(m, &w.x, t)? + hall::euler(m, &w.y, t)?);
            let left = (hall::euler(m, t, &w.l)?, hall::euler(m, t, &w.x)? + hall::euler(m, t, &w.y)?);
            for (side, (a, b)) in [("<L,T>", right), ("<T,L>", left)] {
                if a != b {
                    let mut o = ops.clone();
                    o.push(side.into());
                    out.push(failure(o, a.to_string(), b.to_string(), cite::EULER_DESCENT));
                }
            }
            Ok(out)
        })
    }

    fn oracle_eq(&self, oracle: &Oracle) -> Outcome {
        let m = self.m;
        let homs = run_cases(&self.pairs(), |(x, y)| {
            let mut out = Vec::new();
            let (b, c) = (oracle.brute_hom_dim(x, y)?, m.hom_dim(x, y)?);
            if b != c {
                out.push(failure(names(&[x, y]), b.to_string(), c.to_string(), cite::HOM_AUT));
            }
            if x == y {
                let (b, c) = (oracle.brute_aut_order(x)?, m.aut_order(x)?);
                if b != c {
                    out.push(failure(names(&[x]), b.to_string(), c.to_string(), cite::HOM_AUT));
                }
            }
            Ok(out)
        })?;
        let counts = match self.backend {
            Backend::Quiver(_) => run_cases(&self.additive_triples()?, |(x, y, l)| {
                let ops = names(&[x, y, l]);
                let mut out = chain(
                    &ops,
                    &[rat(oracle.orbit_count_aut_l(x, y, l)?), rat(m.extension_count(y, x, l)?)],
                    cite::EXTENSION_ORBITS,
                );
                out.extend(chain(
                    &ops,
                    &[rat(oracle.brute_inflation_count(x, l, y)?), rat(m.inflation_count(x, l, y)?)],
                    cite::INFLATIONS,
                ));
                out.extend(chain(
                    &ops,
                    &[rat(oracle.brute_deflation_count(x, l, y)?), rat(m.deflation_count(x, l, y)?)],
                    cite::DEFLATIONS,
                ));
                Ok(out)
            })?,
            Backend::Graded(_) => self.graded_cone_counts(oracle)?,
        };
        Ok((homs.0 + counts.0, homs.1.into_iter().chain(counts.1).collect()))
    }

    /// Brute cone, cocone and middle-term histograms against the closed forms,
    /// over every third term the histograms or the universe mention.
    fn graded_cone_counts(&self, oracle: &Oracle) -> Outcome {
        let m = self.m;
        let q = m.field().p() as u64;
        let Backend::Graded(g) = self.backend else {
            unreachable!("graded only")
        };
        let pairs = self.pairs();
        let per: Vec<(u64, Vec<Failure>)> = pairs
            .par_iter()
            .map(|(a, b)| -> Outcome {
                let (ao, bo) = (g.object(a)?.clone(), g.object(b)?.clone());
                let universe: BTreeSet<_> = self.universe.iter().map(|c| g.object(c).cloned()).collect::<Result<_>>()?;
                let mut cases = 0u64;
                let mut out = Vec::new();
                let mut compare = |hist: std::collections::BTreeMap<graded::GradedObject, BigUint>,
                                   closed: &dyn Fn(&graded::GradedObject) -> BigUint,
                                   ops: &dyn Fn(&graded::GradedObject) -> Vec<String>| {
                    let keys: BTreeSet<_> = hist.keys().cloned().chain(universe.iter().cloned()).collect();
                    for k in keys {
                        cases += 1;
                        let brute = hist.get(&k).cloned().unwrap_or_default();
                        let c = closed(&k);
                        if brute != c {
                            out.push(failure(ops(&k), brute.to_string(), c.to_string(), cite::CONE_COUNTS));
                        }
                    }
                };
                // a = X, b = L: cones of X -> L.
                compare(
                    oracle.cone_histogram(a, b)?,
                    &|y| graded::morphisms_with_cone(q, &ao, &bo, y),
                    &|y| vec![format!("X={ao}"), format!("L={bo}"), format!("Y={y}"), "cones".into()],
                );
                // a = L, b = Y: cocones of L -> Y.
                compare(
                    oracle.cocone_histogram(a, b)?,
                    &|x| graded::morphisms_with_cocone(q, x, &ao, &bo),
                    &|x| vec![format!("X={x}"), format!("L={ao}"), format!("Y={bo}"), "cocones".into()],
                );
                // a = Y, b = X: middle terms of Y -> X[1].
                compare(
                    oracle.extension_histogram(a, b)?,
                    &|l| graded::extensions_with_middle(q, &ao, &bo, l),
                    &|l| vec![format!("X={bo}"), format!("Y={ao}"), format!("L={l}"), "extensions".into()],
                );
                Ok((cases, out))
            })
            .collect::<Result<_>>()?;
        Ok(per.into_iter().fold((0, Vec::new()), |(n, mut fs), (k, f)| {
            fs.extend(f);
            (n + k, fs)
        }))
    }

    fn hbar(&self) -> Outcome {
        let m = self.m;
        let mut cases = Vec::new();
        for (x, y) in self.pairs() {
            for l in m.middle_candidates(&x, &y)? {
                cases.push((x.clone(), y.clone(), l));
            }
        }
        run_cases(&cases, |(x, y, l)| {
            let h = hall::hbar(m, x, y, l)?;
            Ok(chain(&names(&[x, y, l]), &[h, BigRational::one()], cite::HBAR))
        })
    }
}

/// Runs one suite over the universe selected by `cfg.bound`.
pub fn run_suite(backend: &Backend, suite: SuiteName, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let m = backend.model();
    let ctx = Ctx {
        backend,
        m,
        cfg,
        universe: m.classes_up_to(&cfg.bound)?,
    };
    let oracle = Oracle::new(backend);
    let (cases, failures) = match suite {
        SuiteName::Main2 => ctx.main2(),
        SuiteName::Prop36 => ctx.prop36(&oracle),
        SuiteName::Prop37 => ctx.prop37(&oracle),
        SuiteName::Lemma31 => ctx.lemma31(&oracle),
        SuiteName::Lemma33 => ctx.lemma33(&oracle),
        SuiteName::AssocF => ctx.assoc(ProductKind::F),
        SuiteName::AssocG => ctx.assoc(ProductKind::G),
        SuiteName::ExactCor => ctx.exact_cor(&oracle),
        SuiteName::Toen => ctx.toen(),
        SuiteName::Twist => ctx.twist(),
        SuiteName::EulerDescent => ctx.euler_descent(&oracle),
        SuiteName::OracleEq => ctx.oracle_eq(&oracle),
        SuiteName::Hbar => ctx.hbar(),
    }?;
    Ok(VerificationReport {
        suite: suite.as_str().into(),
        backend: m.backend_id(),
        universe: m.describe_bound(&cfg.bound),
        cases,
        seed: cfg.seed,
        failures,
        wall_ms: cfg.timing.then(|| start.elapsed().as_millis() as u64),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Budget;

    fn run(spec: &str, suite: &str, bound: UniverseBound) -> VerificationReport {
        let b = Backend::from_spec_str(spec, Budget::default()).unwrap();
        let mut cfg = SuiteConfig::new(bound);
        cfg.samples = 6;
        run_suite(&b, suite.parse().unwrap(), &cfg).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!("lemma99".parse::<SuiteName>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for suite in ["main2", "prop36", "prop37", "lemma31", "lemma33", "assoc-F", "assoc-G", "exact-cor", "twist", "oracle-eq", "hbar"] {
            let r = run("quiver:A1@2", suite, UniverseBound::max_dim(2));
            assert!(r.passed(), "{suite}: {:?}", r.failures);
            assert!(r.cases > 0, "{suite}");
        }
        for suite in ["main2", "lemma31", "lemma33", "assoc-G", "toen", "twist", "oracle-eq", "hbar"] {
            let r = run("graded:@2,window=0..1", suite, UniverseBound::per_degree(1));
            assert!(r.passed(), "{suite}: {:?}", r.failures);
        }
    }

    #[test]
    fn quiver_only_suites_refuse_graded() {
        let b = Backend::from_spec_str("graded:@2,window=0..1", Budget::default()).unwrap();
        let cfg = SuiteConfig::new(UniverseBound::per_degree(1));
        assert!(matches!(run_suite(&b, SuiteName::Prop36, &cfg), Err(HallError::Capability(_))));
        let q = Backend::from_spec_str("quiver:A1@2", Budget::default()).unwrap();
        assert!(matches!(run_suite(&q, SuiteName::Toen, &cfg), Err(HallError::Capability(_))));
    }

    #[test]
    fn singleton_universe_is_trivial() {
        let r = run("quiver:A1@2", "assoc-F", UniverseBound::max_dim(0));
        assert_eq!(r.cases, 1);
        assert!(r.passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run("quiver:A2@2", "lemma33", UniverseBound::max_dim(2)).to_json();
        let b = run("quiver:A2@2", "lemma33", UniverseBound::max_dim(2)).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"wall_ms\": null"));
    }
}
