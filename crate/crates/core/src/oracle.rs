//! Brute-force ground truth: every counted set is enumerated literally
//! from matrices, independently of the closed forms in the backends.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, HallError, Result};
use crate::ff::{FFMatrix, FieldSpec};
use crate::graded::{GradedModel, GradedObject};
use crate::hall::{braces_pos, bracket};
use crate::linrep::{self, Morphism, QuiverSpec, Rep};
use crate::model::{Backend, IsoClass, Model};

/// A conflation `X -f-> L -g-> Y`, with the connecting map `Y -> X[1]`
/// degreewise (`delta[i]: Y_i -> X_{i+1}`) on the graded backend.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x: IsoClass,
    pub l: IsoClass,
    pub y: IsoClass,
    pub f: Morphism,
    pub g: Morphism,
    pub delta: Option<Vec<FFMatrix>>,
}

/// Sizes of the images of `Hom(g,L)`, `Hom(Y,g)`, `Hom(L,f)` and `Hom(f,X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImSizes {
    pub g_l: BigRational,
    pub y_g: BigRational,
    pub l_f: BigRational,
    pub f_x: BigRational,
}

type AutList = Arc<Vec<(Morphism, Morphism)>>;

pub struct Oracle<'a> {
    backend: &'a Backend,
    field: FieldSpec,
    quiver: QuiverSpec,
    budget: Budget,
    auts: RwLock<HashMap<IsoClass, AutList>>,
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

fn rat(n: BigUint) -> BigRational {
    BigRational::from_integer(n.into())
}

fn key(f: &Morphism, g: &Morphism) -> Vec<u32> {
    let mut k = f.flat();
    k.extend(g.flat());
    k
}

impl<'a> Oracle<'a> {
    pub fn new(backend: &'a Backend) -> Self {
        let (field, quiver, budget) = match backend {
            Backend::Quiver(m) => (m.field(), m.quiver().clone(), m.budget()),
            Backend::Graded(m) => (m.field(), m.degree_quiver(), m.budget()),
        };
        Oracle {
            backend,
            field,
            quiver,
            budget,
            auts: RwLock::default(),
        }
    }

    pub fn model(&self) -> &'a dyn Model {
        self.backend.model()
    }

    fn graded(&self) -> Option<&'a GradedModel> {
        match self.backend {
            Backend::Graded(m) => Some(m),
            Backend::Quiver(_) => None,
        }
    }

    pub fn rep(&self, c: &IsoClass) -> Result<Rep> {
        match self.backend {
            Backend::Quiver(m) => m.rep(c).cloned(),
            Backend::Graded(m) => Ok(m.to_rep(m.object(c)?)),
        }
    }

    pub fn class_of(&self, r: &Rep) -> Result<IsoClass> {
        match self.backend {
            Backend::Quiver(m) => m.canonical(r),
            Backend::Graded(m) => m.from_rep(r),
        }
    }

    pub fn morphisms(&self, a: &Rep, b: &Rep) -> Result<Vec<Morphism>> {
        linrep::all_morphisms(self.field, &self.quiver, a, b, &self.budget)
    }

    fn intertwines(&self, phi: &Morphism, a: &Rep, b: &Rep) -> bool {
        self.quiver
            .arrows()
            .iter()
            .enumerate()
            .all(|(k, &(s, t))| phi.comps[t].mul(&a.maps[k]) == b.maps[k].mul(&phi.comps[s]))
    }

    /// Every tuple of vertex matrices `A_v -> B_v`, intertwining or not.
    fn all_matrix_tuples(&self, a: &Rep, b: &Rep) -> Result<Vec<Morphism>> {
        let entries: usize = a.dims.iter().zip(&b.dims).map(|(x, y)| x * y).sum();
        self.budget.check_pow("matrix tuples", self.field.p() as u64, entries)?;
        let p = self.field.p();
        let mut digits = vec![0u32; entries];
        let mut out = Vec::new();
        loop {
            out.push(Morphism::from_flat(self.field, a, b, &digits));
            let Some(i) = digits.iter().position(|&d| d + 1 < p) else {
                break;
            };
            digits[i] += 1;
            digits[..i].iter_mut().for_each(|d| *d = 0);
        }
        Ok(out)
    }

    /// `dim Hom(X,Y)` by filtering every matrix tuple.
    pub fn brute_hom_dim(&self, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        let (a, b) = (self.rep(x)?, self.rep(y)?);
        let n = self
            .all_matrix_tuples(&a, &b)?
            .iter()
            .filter(|phi| self.intertwines(phi, &a, &b))
            .count();
        let p = self.field.p() as usize;
        let mut d = 0;
        let mut m = n;
        while m > 1 {
            assert_eq!(m % p, 0, "homomorphism count {n} is not a power of {p}");
            m /= p;
            d += 1;
        }
        Ok(d)
    }

    /// `|Aut X|` by filtering every matrix tuple.
    pub fn brute_aut_order(&self, x: &IsoClass) -> Result<BigUint> {
        let a = self.rep(x)?;
        Ok(big(
            self.all_matrix_tuples(&a, &a)?
                .iter()
                .filter(|phi| phi.is_iso() && self.intertwines(phi, &a, &a))
                .count(),
        ))
    }

    pub fn aut(&self, c: &IsoClass) -> Result<AutList> {
        if let Some(a) = self.auts.read().expect("cache lock poisoned").get(c) {
            return Ok(a.clone());
        }
        let r = self.rep(c)?;
        let list = Arc::new(linrep::aut_group(self.field, &self.quiver, &r, &self.budget)?);
        Ok(self
            .auts
            .write()
            .expect("cache lock poisoned")
            .entry(c.clone())
            .or_insert(list)
            .clone())
    }

    /// The conflations `(f, g)` with end terms `X`, `Y` and middle term `L`.
    pub fn w_set(&self, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<Vec<(Morphism, Morphism)>> {
        self.quiver_only("conflation enumeration")?;
        let (xr, yr, lr) = (self.rep(x)?, self.rep(y)?, self.rep(l)?);
        if xr.dims.iter().zip(&yr.dims).map(|(a, b)| a + b).ne(lr.dims.iter().copied()) {
            return Ok(Vec::new());
        }
        let fs: Vec<Morphism> = self.morphisms(&xr, &lr)?.into_iter().filter(|f| f.is_mono()).collect();
        let gs: Vec<Morphism> = self.morphisms(&lr, &yr)?.into_iter().filter(|g| g.is_epi()).collect();
        self.budget.check("conflation pairs", &(big(fs.len()) * big(gs.len())))?;
        let mut out = Vec::new();
        for f in &fs {
            for g in &gs {
                if g.compose(f).is_zero() {
                    out.push((f.clone(), g.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn brute_w_count(&self, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<BigUint> {
        Ok(big(self.w_set(x, y, l)?.len()))
    }

    /// Monomorphisms `X -> L` whose cokernel is isomorphic to `Y`.
    pub fn brute_inflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        self.quiver_only("inflation filtering")?;
        let (xr, lr) = (self.rep(x)?, self.rep(l)?);
        let mut n = 0usize;
        for f in self.morphisms(&xr, &lr)? {
            if f.is_mono() && self.class_of(&linrep::cokernel(&self.quiver, &lr, &f))? == *y {
                n += 1;
            }
        }
        Ok(big(n))
    }

    /// Epimorphisms `L -> Y` whose kernel is isomorphic to `X`.
    pub fn brute_deflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        self.quiver_only("deflation filtering")?;
        let (lr, yr) = (self.rep(l)?, self.rep(y)?);
        let mut n = 0usize;
        for g in self.morphisms(&lr, &yr)? {
            if g.is_epi() && self.class_of(&linrep::kernel(&self.quiver, &lr, &g))? == *x {
                n += 1;
            }
        }
        Ok(big(n))
    }

    fn quiver_only(&self, what: &str) -> Result<()> {
        match self.graded() {
            Some(_) => Err(HallError::Capability(format!("{what} is only implemented on quiver backends"))),
            None => Ok(()),
        }
    }

    fn index(w: &[(Morphism, Morphism)]) -> HashMap<Vec<u32>, usize> {
        w.iter().enumerate().map(|(i, (f, g))| (key(f, g), i)).collect()
    }

    /// Number of `Aut L`-orbits on the conflations, `(f, g) ~ (lf, gl^-1)`.
    pub fn orbit_count_aut_l(&self, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<BigUint> {
        let w = self.w_set(x, y, l)?;
        let index = Self::index(&w);
        let aut_l = self.aut(l)?;
        let mut seen = vec![false; w.len()];
        let mut orbits = 0usize;
        for i in 0..w.len() {
            if seen[i] {
                continue;
            }
            orbits += 1;
            let (f, g) = &w[i];
            for (a, ainv) in aut_l.iter() {
                let j = index[&key(&a.compose(f), &g.compose(ainv))];
                seen[j] = true;
            }
        }
        Ok(big(orbits))
    }

    /// Representatives of the orbits under `Aut L × Aut Y`.
    pub fn orbit_reps_aut_l_aut_y(&self, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<Vec<(Morphism, Morphism)>> {
        let aut_y = self.aut(y)?;
        self.orbit_reps(x, y, l, |f, g, out| {
            for (b, _) in aut_y.iter() {
                out.push((f.clone(), b.compose(g)));
            }
        })
    }

    /// Representatives of the orbits under `Aut X × Aut L`.
    pub fn orbit_reps_aut_x_aut_l(&self, x: &IsoClass, y: &IsoClass, l: &IsoClass) -> Result<Vec<(Morphism, Morphism)>> {
        let aut_x = self.aut(x)?;
        self.orbit_reps(x, y, l, |f, g, out| {
            for (_, binv) in aut_x.iter() {
                out.push((f.compose(binv), g.clone()));
            }
        })
    }

    fn orbit_reps(
        &self,
        x: &IsoClass,
        y: &IsoClass,
        l: &IsoClass,
        other: impl Fn(&Morphism, &Morphism, &mut Vec<(Morphism, Morphism)>),
    ) -> Result<Vec<(Morphism, Morphism)>> {
        let w = self.w_set(x, y, l)?;
        let index = Self::index(&w);
        let aut_l = self.aut(l)?;
        let mut seen = vec![false; w.len()];
        let mut reps = Vec::new();
        for i in 0..w.len() {
            if seen[i] {
                continue;
            }
            reps.push(w[i].clone());
            let (f, g) = &w[i];
            let mut layer = HashSet::new();
            for (a, ainv) in aut_l.iter() {
                layer.insert(index[&key(&a.compose(f), &g.compose(ainv))]);
            }
            let mut moved = Vec::new();
            for j in layer {
                let (f1, g1) = &w[j];
                moved.clear();
                other(f1, g1, &mut moved);
                for (f2, g2) in &moved {
                    seen[index[&key(f2, g2)]] = true;
                }
            }
        }
        Ok(reps)
    }

    /// The largest summand `C` of `src` through which `h: src -> dst`
    /// restricts to an isomorphism `r h s: C -> C`.
    pub fn radical_decompose(&self, h: &Morphism, src: &IsoClass, dst: &IsoClass) -> Result<IsoClass> {
        let m = self.model();
        let (sr, dr) = (self.rep(src)?, self.rep(dst)?);
        let mut grouped: Vec<(IsoClass, usize)> = Vec::new();
        for part in m.decompose(src)? {
            match grouped.iter_mut().find(|(c, _)| *c == part) {
                Some((_, k)) => *k += 1,
                None => grouped.push((part, 1)),
            }
        }
        let mut candidates: Vec<IsoClass> = vec![m.zero()];
        for (part, mult) in &grouped {
            let mut next = Vec::new();
            for c in &candidates {
                let mut acc = c.clone();
                next.push(acc.clone());
                for _ in 0..*mult {
                    acc = m.dsum(&acc, part)?;
                    next.push(acc.clone());
                }
            }
            candidates = next;
        }
        let mut sized: Vec<(usize, IsoClass, Rep)> = Vec::new();
        for c in candidates {
            let cr = self.rep(&c)?;
            if cr.dims.iter().zip(&dr.dims).all(|(a, b)| a <= b) {
                sized.push((cr.total_dim(), c, cr));
            }
        }
        sized.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        for (dim, c, cr) in sized {
            if dim == 0 {
                return Ok(c);
            }
            let through: Vec<Morphism> = self
                .morphisms(&cr, &sr)?
                .into_iter()
                .filter(|s| s.is_mono())
                .map(|s| h.compose(&s))
                .collect();
            let onto: Vec<Morphism> = self.morphisms(&dr, &cr)?.into_iter().filter(|r| r.is_epi()).collect();
            if onto.iter().any(|r| through.iter().any(|hs| r.compose(hs).is_iso())) {
                return Ok(c);
            }
        }
        Ok(m.zero())
    }

    /// Krull–Schmidt decomposition, checked to reassemble to `x`.
    pub fn decompose(&self, x: &IsoClass) -> Result<Vec<IsoClass>> {
        let m = self.model();
        let parts = m.decompose(x)?;
        let mut acc = m.zero();
        for p in &parts {
            acc = m.dsum(&acc, p)?;
        }
        if acc != *x {
            return Err(HallError::Invalid(format!("summands of {x} reassemble to {acc}")));
        }
        Ok(parts)
    }

    pub fn brute_im_sizes(&self, w: &Witness) -> Result<ImSizes> {
        let (xr, yr, lr) = (self.rep(&w.x)?, self.rep(&w.y)?, self.rep(&w.l)?);
        let image = |maps: Vec<Morphism>, post: &dyn Fn(&Morphism) -> Morphism| -> BigRational {
            let set: HashSet<Vec<u32>> = maps.iter().map(|m| post(m).flat()).collect();
            rat(big(set.len()))
        };
        let hom_yl = self.morphisms(&yr, &lr)?;
        let hom_lx = self.morphisms(&lr, &xr)?;
        Ok(ImSizes {
            g_l: image(hom_yl.clone(), &|phi| phi.compose(&w.g)),
            y_g: image(hom_yl, &|phi| w.g.compose(phi)),
            l_f: image(hom_lx.clone(), &|psi| w.f.compose(psi)),
            f_x: image(hom_lx, &|psi| psi.compose(&w.f)),
        })
    }

    /// Stabilisers `(|G_L|, |G_Y|)` of a witness, straight from their definitions.
    pub fn brute_stabilizers(&self, w: &Witness) -> Result<(BigUint, BigUint)> {
        let aut_l = self.aut(&w.l)?;
        let aut_y = self.aut(&w.y)?;
        let fixes_delta = |b: &Morphism| match &w.delta {
            None => true,
            Some(d) => d.iter().zip(&b.comps).all(|(di, bi)| di.mul(bi) == *di),
        };
        let mut g_l = 0usize;
        let mut g_y: HashSet<Vec<u32>> = HashSet::new();
        for (a, ainv) in aut_l.iter() {
            if a.compose(&w.f) != w.f {
                continue;
            }
            let moved = w.g.compose(ainv);
            let mut hit = false;
            for (b, _) in aut_y.iter() {
                if b.compose(&w.g) == moved && fixes_delta(b) {
                    hit = true;
                    g_y.insert(b.flat());
                }
            }
            if hit {
                g_l += 1;
            }
        }
        Ok((big(g_l), big(g_y.len())))
    }

    /// Stabiliser orders predicted from the image sizes and the radical
    /// decomposition of `g`.
    pub fn closed_stabilizers(&self, w: &Witness) -> Result<(BigRational, BigRational)> {
        let m = self.model();
        let c = self.radical_decompose(&w.g, &w.l, &w.y)?;
        let ratio = rat(m.aut_order(&c)?) / rat(m.end_order(&c)?);
        let im = closed_im_sizes(m, w)?;
        Ok((im.g_l * &ratio, im.y_g * ratio))
    }

    /// Seeded sample of conflations with nonzero end terms where possible.
    pub fn sample_witnesses(&self, universe: &[IsoClass], count: usize, seed: u64) -> Result<Vec<Witness>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self.backend {
            Backend::Quiver(_) => self.sample_quiver(universe, count, &mut rng),
            Backend::Graded(g) => self.sample_graded(g, universe, count, &mut rng),
        }
    }

    fn sample_quiver(&self, universe: &[IsoClass], count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Witness>> {
        let m = self.model();
        let in_universe: HashSet<&IsoClass> = universe.iter().collect();
        let mut triples = Vec::new();
        let mut trivial = Vec::new();
        for x in universe {
            for y in universe {
                for l in m.middle_candidates(x, y)? {
                    if in_universe.contains(&l) && !m.extension_count(y, x, &l)?.is_zero() {
                        if x.is_zero() || y.is_zero() {
                            trivial.push((x.clone(), y.clone(), l));
                        } else {
                            triples.push((x.clone(), y.clone(), l));
                        }
                    }
                }
            }
        }
        if triples.is_empty() {
            triples = trivial;
        }
        if triples.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (x, y, l) = &triples[rng.random_range(0..triples.len())];
            let w = self.w_set(x, y, l)?;
            let (f, g) = w[rng.random_range(0..w.len())].clone();
            out.push(Witness {
                x: x.clone(),
                l: l.clone(),
                y: y.clone(),
                f,
                g,
                delta: None,
            });
        }
        Ok(out)
    }

    fn sample_graded(
        &self,
        model: &GradedModel,
        universe: &[IsoClass],
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Witness>> {
        let nonzero: Vec<&IsoClass> = universe.iter().filter(|c| !c.is_zero()).collect();
        if nonzero.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > 1000 * count.max(1) {
                return Err(HallError::Invalid("could not sample graded triangles inside the window".into()));
            }
            let x = nonzero[rng.random_range(0..nonzero.len())];
            let l = universe[rng.random_range(0..universe.len())].clone();
            let (xr, lr) = (self.rep(x)?, self.rep(&l)?);
            let f = Morphism {
                comps: xr
                    .dims
                    .iter()
                    .zip(&lr.dims)
                    .map(|(&a, &b)| {
                        let data = (0..a * b).map(|_| rng.random_range(0..self.field.p())).collect();
                        FFMatrix::from_vec(self.field, b, a, data)
                    })
                    .collect(),
            };
            // Third terms outside the universe are resampled.
            if let Some(w) = graded_triangle(model, x, &l, f)? {
                if universe.contains(&w.y) {
                    out.push(w);
                }
            }
        }
        Ok(out)
    }

    /// Histogram of the cones of every morphism `X -> L`, computed from
    /// the cone complex `X^{n+1} ⊕ L^n`.
    pub fn cone_histogram(&self, x: &IsoClass, l: &IsoClass) -> Result<BTreeMap<GradedObject, BigUint>> {
        let g = self.graded_only()?;
        let (xr, lr) = (self.rep(x)?, self.rep(l)?);
        let mut h = BTreeMap::new();
        for f in self.morphisms(&xr, &lr)? {
            let c = cone_cohomology(self.field, g.window().0, &xr.dims, &lr.dims, &f.comps);
            *h.entry(c).or_insert_with(BigUint::zero) += 1u32;
        }
        Ok(h)
    }

    /// Histogram of the cocones `Cone(g)[-1]` of every morphism `L -> Y`.
    pub fn cocone_histogram(&self, l: &IsoClass, y: &IsoClass) -> Result<BTreeMap<GradedObject, BigUint>> {
        let g = self.graded_only()?;
        let (lr, yr) = (self.rep(l)?, self.rep(y)?);
        let mut h = BTreeMap::new();
        for m in self.morphisms(&lr, &yr)? {
            let c = cone_cohomology(self.field, g.window().0, &lr.dims, &yr.dims, &m.comps).shift(-1);
            *h.entry(c).or_insert_with(BigUint::zero) += 1u32;
        }
        Ok(h)
    }

    /// Histogram of the middle terms over every `delta: Y -> X[1]`; the
    /// middle term is the complex `X^n ⊕ Y^n` with differential `delta`.
    pub fn extension_histogram(&self, y: &IsoClass, x: &IsoClass) -> Result<BTreeMap<GradedObject, BigUint>> {
        let g = self.graded_only()?;
        let (xr, yr) = (self.rep(x)?, self.rep(y)?);
        let w = xr.dims.len();
        let shapes: Vec<(usize, usize)> = (0..w)
            .map(|i| (if i + 1 < w { xr.dims[i + 1] } else { 0 }, yr.dims[i]))
            .collect();
        let entries: usize = shapes.iter().map(|(a, b)| a * b).sum();
        self.budget.check_pow("connecting maps", self.field.p() as u64, entries)?;
        let mut digits = vec![0u32; entries];
        let mut h = BTreeMap::new();
        loop {
            let mut offset = 0;
            let delta: Vec<FFMatrix> = shapes
                .iter()
                .map(|&(r, c)| {
                    let m = FFMatrix::from_vec(self.field, r, c, digits[offset..offset + r * c].to_vec());
                    offset += r * c;
                    m
                })
                .collect();
            let chain: BTreeMap<i32, usize> =
                (0..w).map(|i| (g.window().0 + i as i32, xr.dims[i] + yr.dims[i])).collect();
            let diffs: BTreeMap<i32, FFMatrix> = (0..w)
                .map(|i| {
                    let (rows, cols) = (chain_dim(&chain, g.window().0 + i as i32 + 1), chain[&(g.window().0 + i as i32)]);
                    let mut d = FFMatrix::zeros(self.field, rows, cols);
                    let d_i = &delta[i];
                    // Y^n sits after X^n in the source; X^{n+1} leads the target.
                    for r in 0..d_i.rows() {
                        for c in 0..d_i.cols() {
                            d.set(r, xr.dims[i] + c, d_i.get(r, c));
                        }
                    }
                    (g.window().0 + i as i32, d)
                })
                .collect();
            *h.entry(cohomology(&chain, &diffs)).or_insert_with(BigUint::zero) += 1u32;
            let Some(i) = digits.iter().position(|&d| d + 1 < self.field.p()) else {
                break;
            };
            digits[i] += 1;
            digits[..i].iter_mut().for_each(|d| *d = 0);
        }
        Ok(h)
    }

    fn graded_only(&self) -> Result<&'a GradedModel> {
        self.graded()
            .ok_or_else(|| HallError::Capability("complex histograms need a graded backend".into()))
    }
}

fn chain_dim(chain: &BTreeMap<i32, usize>, n: i32) -> usize {
    chain.get(&n).copied().unwrap_or(0)
}

/// `H^n = dim C^n - rank d^n - rank d^{n-1}`.
fn cohomology(chain: &BTreeMap<i32, usize>, diffs: &BTreeMap<i32, FFMatrix>) -> GradedObject {
    let rank = |n: i32| diffs.get(&n).map_or(0, |d| d.rank());
    GradedObject::new(chain.iter().map(|(&n, &d)| (n, d - rank(n) - rank(n - 1))))
}

/// Cohomology of `Cone(h)^n = A^{n+1} ⊕ B^n`, `d^n = [[0, 0], [h^{n+1}, 0]]`,
/// for `h: A -> B` given on window indices starting at degree `lo`.
fn cone_cohomology(field: FieldSpec, lo: i32, a: &[usize], b: &[usize], h: &[FFMatrix]) -> GradedObject {
    let at = |v: &[usize], n: i32| -> usize {
        let i = n - lo;
        if i >= 0 && (i as usize) < v.len() {
            v[i as usize]
        } else {
            0
        }
    };
    let hi = lo + a.len() as i32 - 1;
    let chain: BTreeMap<i32, usize> = (lo - 1..=hi).map(|n| (n, at(a, n + 1) + at(b, n))).collect();
    let diffs: BTreeMap<i32, FFMatrix> = (lo - 1..=hi)
        .map(|n| {
            let (rows, cols) = (chain_dim(&chain, n + 1), chain[&n]);
            let mut d = FFMatrix::zeros(field, rows, cols);
            let i = n + 1 - lo;
            if i >= 0 && (i as usize) < h.len() {
                let hn = &h[i as usize];
                let row0 = at(a, n + 2);
                for r in 0..hn.rows() {
                    for c in 0..hn.cols() {
                        d.set(row0 + r, c, hn.get(r, c));
                    }
                }
            }
            (n, d)
        })
        .collect();
    cohomology(&chain, &diffs)
}

/// Completes `f: X -> L` to the triangle `X -> L -> coker f ⊕ (ker f)[1] -> X[1]`;
/// `None` when the third term leaves the window.
pub fn graded_triangle(model: &GradedModel, x: &IsoClass, l: &IsoClass, f: Morphism) -> Result<Option<Witness>> {
    let field = model.field();
    let w = f.comps.len();
    let kernels: Vec<FFMatrix> = f.comps.iter().map(|m| m.kernel_matrix()).collect();
    if kernels.first().is_some_and(|k| k.cols() > 0) {
        return Ok(None);
    }
    let quotients: Vec<FFMatrix> = f
        .comps
        .iter()
        .map(|m| {
            let (_, pivots) = m.rref();
            let mut basis = FFMatrix::zeros(field, m.rows(), pivots.len());
            for (j, &c) in pivots.iter().enumerate() {
                for r in 0..m.rows() {
                    basis.set(r, j, m.get(r, c));
                }
            }
            linrep::quotient_map(&basis).0
        })
        .collect();
    let kernel_next = |i: usize| -> usize { if i + 1 < w { kernels[i + 1].cols() } else { 0 } };
    let y_dims: Vec<usize> = (0..w).map(|i| quotients[i].rows() + kernel_next(i)).collect();
    let x_dims: Vec<usize> = f.comps.iter().map(|m| m.cols()).collect();
    let mut g = Vec::with_capacity(w);
    let mut delta = Vec::with_capacity(w);
    for i in 0..w {
        let q = &quotients[i];
        let mut gi = FFMatrix::zeros(field, y_dims[i], q.cols());
        for r in 0..q.rows() {
            for c in 0..q.cols() {
                gi.set(r, c, q.get(r, c));
            }
        }
        g.push(gi);
        let next_x = if i + 1 < w { x_dims[i + 1] } else { 0 };
        let mut di = FFMatrix::zeros(field, next_x, y_dims[i]);
        if i + 1 < w {
            let k = &kernels[i + 1];
            for r in 0..k.rows() {
                for c in 0..k.cols() {
                    di.set(r, q.rows() + c, k.get(r, c));
                }
            }
        }
        delta.push(di);
    }
    let y = model.class_of(&GradedObject::from_window(model.window().0, &y_dims))?;
    Ok(Some(Witness {
        x: x.clone(),
        l: l.clone(),
        y,
        f,
        g: Morphism { comps: g },
        delta: Some(delta),
    }))
}

/// Image sizes predicted from homs and positive extension groups.
pub fn closed_im_sizes(m: &dyn Model, w: &Witness) -> Result<ImSizes> {
    let (x, y, l) = (&w.x, &w.y, &w.l);
    Ok(ImSizes {
        g_l: bracket(m, x, l)? / (bracket(m, l, l)? * braces_pos(m, y, l)?),
        y_g: braces_pos(m, y, x)? / (braces_pos(m, y, l)? * bracket(m, y, y)?),
        l_f: bracket(m, l, y)? / (bracket(m, l, l)? * braces_pos(m, l, x)?),
        f_x: braces_pos(m, y, x)? / (braces_pos(m, l, x)? * bracket(m, x, x)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UniverseBound;

    fn backend(spec: &str) -> Backend {
        Backend::from_spec_str(spec, Budget::default()).unwrap()
    }

    #[test]
    fn w_counts_on_a1() {
        let b = backend("quiver:A1@2");
        let o = Oracle::new(&b);
        let m = b.model();
        let c = |s: &str| m.parse_class(s).unwrap();
        // 3 injections k -> k^2, each with 1 surjection onto the quotient.
        assert_eq!(o.brute_w_count(&c("k"), &c("k"), &c("k2")).unwrap(), BigUint::from(3u32));
        assert_eq!(o.brute_w_count(&m.zero(), &c("k2"), &c("k2")).unwrap(), BigUint::from(6u32));
        assert_eq!(o.brute_w_count(&c("k"), &c("k"), &m.zero()).unwrap(), BigUint::zero());
        assert_eq!(o.orbit_count_aut_l(&c("k"), &c("k"), &c("k2")).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn brute_homs_and_auts_match_linear_algebra() {
        for spec in ["quiver:A2@2", "quiver:A3@2", "graded:@2,window=0..1"] {
            let b = backend(spec);
            let o = Oracle::new(&b);
            let m = b.model();
            let bound = match &b {
                Backend::Quiver(_) => UniverseBound::max_dim(3),
                Backend::Graded(_) => UniverseBound::per_degree(2),
            };
            let u = m.classes_up_to(&bound).unwrap();
            for x in &u {
                assert_eq!(o.brute_aut_order(x).unwrap(), m.aut_order(x).unwrap(), "{spec} Aut {x}");
                for y in &u {
                    assert_eq!(o.brute_hom_dim(x, y).unwrap(), m.hom_dim(x, y).unwrap(), "{spec} Hom({x},{y})");
                }
            }
        }
    }

    #[test]
    fn extensions_of_simples() {
        let b = backend("quiver:A2@2");
        let o = Oracle::new(&b);
        let m = b.model();
        let c = |s: &str| m.parse_class(s).unwrap();
        assert_eq!(o.orbit_count_aut_l(&c("S2"), &c("S1"), &c("M11")).unwrap(), BigUint::from(1u32));
        assert_eq!(o.orbit_count_aut_l(&c("S2"), &c("S1"), &c("S1+S2")).unwrap(), BigUint::from(1u32));
        assert_eq!(o.orbit_count_aut_l(&c("S1"), &c("S2"), &c("M11")).unwrap(), BigUint::zero());
    }

    #[test]
    fn decompositions() {
        let b = backend("quiver:A2@2");
        let o = Oracle::new(&b);
        let m = b.model();
        let names = |s: &str| -> Vec<String> {
            o.decompose(&m.parse_class(s).unwrap()).unwrap().iter().map(|c| c.name().to_string()).collect()
        };
        assert_eq!(names("S1+S2"), ["S1", "S2"]);
        assert_eq!(names("M11"), ["M11"]);
        let g = backend("graded:@2,window=0..1");
        let o = Oracle::new(&g);
        let parts: Vec<String> = o
            .decompose(&g.model().parse_class("[2,1]").unwrap())
            .unwrap()
            .iter()
            .map(|c| c.name().to_string())
            .collect();
        assert_eq!(parts, ["k{0}", "k{0}", "k{1}"]);
    }

    #[test]
    fn radical_parts_of_extreme_maps() {
        let b = backend("quiver:A1@3");
        let o = Oracle::new(&b);
        let m = b.model();
        let k2 = m.parse_class("k2").unwrap();
        let r = o.rep(&k2).unwrap();
        let id = Morphism::identity(m.field(), &r);
        assert_eq!(o.radical_decompose(&id, &k2, &k2).unwrap(), k2);
        let zero = Morphism::zero(m.field(), &r, &r);
        assert_eq!(o.radical_decompose(&zero, &k2, &k2).unwrap(), m.zero());

        let g = backend("graded:@2,window=0..1");
        let o = Oracle::new(&g);
        let m = g.model();
        let l = m.parse_class("[2,1]").unwrap();
        let y = m.parse_class("[1,1]").unwrap();
        let (lr, yr) = (o.rep(&l).unwrap(), o.rep(&y).unwrap());
        let h = o
            .morphisms(&lr, &yr)
            .unwrap()
            .into_iter()
            .find(|h| h.ranks() == vec![1, 0])
            .unwrap();
        assert_eq!(o.radical_decompose(&h, &l, &y).unwrap(), m.parse_class("k{0}").unwrap());
    }

    #[test]
    fn graded_triangles_are_exact() {
        let b = backend("graded:@3,window=0..2");
        let o = Oracle::new(&b);
        let u = b.model().classes_up_to(&UniverseBound::per_degree(2)).unwrap();
        for w in o.sample_witnesses(&u, 30, 7).unwrap() {
            assert!(w.g.compose(&w.f).is_zero());
            let delta = w.delta.as_ref().unwrap();
            for (i, d) in delta.iter().enumerate() {
                assert!(d.mul(&w.g.comps[i]).is_zero());
                if i + 1 < w.f.comps.len() {
                    assert!(w.f.comps[i + 1].mul(d).is_zero());
                }
            }
        }
    }

    #[test]
    fn cone_histograms_cover_every_morphism() {
        let b = backend("graded:@2,window=0..1");
        let o = Oracle::new(&b);
        let m = b.model();
        let x = m.parse_class("[1,1]").unwrap();
        let l = m.parse_class("[1,1]").unwrap();
        let h = o.cone_histogram(&x, &l).unwrap();
        let total: BigUint = h.values().sum();
        assert_eq!(total, BigUint::from(4u32));
        assert_eq!(h[&GradedObject::default()], BigUint::from(1u32));
    }
}
