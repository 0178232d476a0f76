//! Finite-dimensional representations of an acyclic quiver over F_p.
//!
//! Isomorphism classes are found by partitioning each dimension stratum of
//! raw representations into orbits of the base-change group.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Budget, HallError, Result};
use crate::ff::{gl_order, FFMatrix, FieldSpec};
use crate::linrep::{self, Morphism, QuiverSpec, Rep};
use crate::model::{ClassPayload, IsoClass, Model, ModelCapabilities, NegVariant, UniverseBound};

/// Orbit partition of one dimension stratum.
struct Stratum {
    orbit_of: Vec<u32>,
    canon: Vec<u64>,
    /// A splitting `(dims of A, orbit of A, orbit of B)` for decomposable orbits.
    split: Vec<Option<(Vec<usize>, u32, u32)>>,
    indec_rank: Vec<Option<u32>>,
    indec_total: u32,
}

type Histogram = Arc<HashMap<IsoClass, BigUint>>;
/// Subrepresentations of a fixed `L` by `(class of U, class of L/U)`.
type Census = Arc<HashMap<(IsoClass, IsoClass), BigUint>>;

pub struct QuiverModel {
    field: FieldSpec,
    quiver: QuiverSpec,
    name: String,
    spec: String,
    budget: Budget,
    strata: RwLock<HashMap<Vec<usize>, Arc<Stratum>>>,
    unit_degrees: RwLock<HashMap<(Vec<usize>, u32), u32>>,
    auts: RwLock<HashMap<IsoClass, BigUint>>,
    censuses: RwLock<HashMap<(IsoClass, Vec<usize>), Census>>,
    extensions: RwLock<HashMap<(IsoClass, IsoClass), Histogram>>,
}

fn dims_key(d: &[usize]) -> (usize, Reverse<Vec<usize>>) {
    (d.iter().sum(), Reverse(d.to_vec()))
}

fn read_cache<K: std::hash::Hash + Eq, V: Clone>(lock: &RwLock<HashMap<K, V>>, key: &K) -> Option<V> {
    lock.read().expect("cache lock poisoned").get(key).cloned()
}

fn write_cache<K: std::hash::Hash + Eq, V: Clone>(lock: &RwLock<HashMap<K, V>>, key: K, value: V) -> V {
    lock.write()
        .expect("cache lock poisoned")
        .entry(key)
        .or_insert(value)
        .clone()
}

impl QuiverModel {
    pub fn new(field: FieldSpec, quiver: QuiverSpec, name: String, spec: String, budget: Budget) -> Self {
        QuiverModel {
            field,
            quiver,
            name,
            spec,
            budget,
            strata: RwLock::default(),
            unit_degrees: RwLock::default(),
            auts: RwLock::default(),
            censuses: RwLock::default(),
            extensions: RwLock::default(),
        }
    }

    /// Name used in labels for a quiver read from a file, e.g. `Q3[1>2,3>2]`.
    pub fn structural_name(q: &QuiverSpec) -> String {
        let arrows: Vec<String> = q
            .arrows()
            .iter()
            .map(|(s, t)| format!("{}>{}", s + 1, t + 1))
            .collect();
        format!("Q{}[{}]", q.vertices(), arrows.join(","))
    }

    pub fn quiver(&self) -> &QuiverSpec {
        &self.quiver
    }

    pub fn rep<'a>(&self, c: &'a IsoClass) -> Result<&'a Rep> {
        match c.payload() {
            ClassPayload::Rep(r) if r.dims.len() == self.quiver.vertices() => Ok(r),
            _ => Err(HallError::Invalid(format!("{} is not a class of {}", c.label(), self.spec))),
        }
    }

    fn encode(&self, rep: &Rep) -> u64 {
        let p = self.field.p() as u64;
        rep.maps
            .iter()
            .flat_map(|m| m.entries().iter())
            .fold(0u64, |acc, &e| acc * p + e as u64)
    }

    fn decode(&self, dims: &[usize], mut idx: u64) -> Rep {
        let p = self.field.p() as u64;
        let e = self.quiver.arrow_entries(dims);
        let mut digits = vec![0u32; e];
        for d in digits.iter_mut().rev() {
            *d = (idx % p) as u32;
            idx /= p;
        }
        let mut offset = 0;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let n = dims[t] * dims[s];
                let m = FFMatrix::from_vec(self.field, dims[t], dims[s], digits[offset..offset + n].to_vec());
                offset += n;
                m
            })
            .collect();
        Rep {
            dims: dims.to_vec(),
            maps,
        }
    }

    /// Generators of `prod_v GL(dims[v])` as `(vertex, g, g^-1)`.
    fn generators(&self, dims: &[usize]) -> Vec<(usize, FFMatrix, FFMatrix)> {
        let f = self.field;
        let omega = f.primitive_root();
        let mut gens = Vec::new();
        for (v, &d) in dims.iter().enumerate() {
            if d == 0 {
                continue;
            }
            if omega != 1 {
                let mut g = FFMatrix::identity(f, d);
                let mut gi = FFMatrix::identity(f, d);
                g.set(0, 0, omega);
                gi.set(0, 0, f.inv(omega));
                gens.push((v, g, gi));
            }
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let mut g = FFMatrix::identity(f, d);
                        let mut gi = FFMatrix::identity(f, d);
                        g.set(i, j, 1);
                        gi.set(i, j, f.neg(1));
                        gens.push((v, g, gi));
                    }
                }
            }
        }
        gens
    }

    fn act(&self, v: usize, g: &FFMatrix, gi: &FFMatrix, rep: &Rep) -> Rep {
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&rep.maps)
            .map(|(&(s, t), m)| {
                if t == v {
                    g.mul(m)
                } else if s == v {
                    m.mul(gi)
                } else {
                    m.clone()
                }
            })
            .collect();
        Rep {
            dims: rep.dims.clone(),
            maps,
        }
    }

    fn stratum(&self, dims: &[usize]) -> Result<Arc<Stratum>> {
        if let Some(s) = read_cache(&self.strata, &dims.to_vec()) {
            return Ok(s);
        }
        let built = Arc::new(self.build_stratum(dims)?);
        Ok(write_cache(&self.strata, dims.to_vec(), built))
    }

    fn build_stratum(&self, dims: &[usize]) -> Result<Stratum> {
        let p = self.field.p() as u64;
        let e = self.quiver.arrow_entries(dims);
        self.budget.check_pow("representation stratum", p, e)?;
        let n = p.pow(e as u32) as usize;
        let gens = self.generators(dims);
        let mut orbit_of = vec![u32::MAX; n];
        let mut canon = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = canon.len() as u32;
            canon.push(start as u64);
            orbit_of[start] = id;
            queue.push_back(start as u64);
            while let Some(i) = queue.pop_front() {
                let rep = self.decode(dims, i);
                for (v, g, gi) in &gens {
                    let j = self.encode(&self.act(*v, g, gi, &rep));
                    if orbit_of[j as usize] == u32::MAX {
                        orbit_of[j as usize] = id;
                        queue.push_back(j);
                    }
                }
            }
        }

        let mut split = vec![None; canon.len()];
        if dims.iter().any(|&d| d > 0) {
            for d1 in sub_dims(dims) {
                let d2: Vec<usize> = dims.iter().zip(&d1).map(|(a, b)| a - b).collect();
                if d1 < d2 || d2.iter().all(|&d| d == 0) {
                    continue;
                }
                let (s1, s2) = (self.stratum(&d1)?, self.stratum(&d2)?);
                for (a, &ca) in s1.canon.iter().enumerate() {
                    let ra = self.decode(&d1, ca);
                    for (b, &cb) in s2.canon.iter().enumerate() {
                        let sum = ra.direct_sum(&self.decode(&d2, cb));
                        let o = orbit_of[self.encode(&sum) as usize] as usize;
                        if split[o].is_none() {
                            split[o] = Some((d1.clone(), a as u32, b as u32));
                        }
                    }
                }
            }
        }
        let nonzero = dims.iter().any(|&d| d > 0);
        let mut indec_total = 0;
        let indec_rank = split
            .iter()
            .map(|s| {
                if nonzero && s.is_none() {
                    indec_total += 1;
                    Some(indec_total - 1)
                } else {
                    None
                }
            })
            .collect();
        Ok(Stratum {
            orbit_of,
            canon,
            split,
            indec_rank,
            indec_total,
        })
    }

    /// Indecomposable summands as `(dims, orbit)`, with multiplicity.
    fn parts(&self, dims: &[usize], orbit: u32) -> Result<Vec<(Vec<usize>, u32)>> {
        let st = self.stratum(dims)?;
        match &st.split[orbit as usize] {
            None if dims.iter().all(|&d| d == 0) => Ok(Vec::new()),
            None => Ok(vec![(dims.to_vec(), orbit)]),
            Some((d1, a, b)) => {
                let d2: Vec<usize> = dims.iter().zip(d1).map(|(x, y)| x - y).collect();
                let mut out = self.parts(d1, *a)?;
                out.extend(self.parts(&d2, *b)?);
                out.sort_by_key(|x| (dims_key(&x.0), x.1));
                Ok(out)
            }
        }
    }

    fn indecomposable_name(&self, dims: &[usize], orbit: u32) -> Result<String> {
        let nonzero: Vec<usize> = (0..dims.len()).filter(|&v| dims[v] > 0).collect();
        if nonzero.len() == 1 && dims[nonzero[0]] == 1 {
            return Ok(if self.quiver.vertices() == 1 {
                "k".to_string()
            } else {
                format!("S{}", nonzero[0] + 1)
            });
        }
        let st = self.stratum(dims)?;
        let body = if dims.iter().all(|&d| d < 10) {
            dims.iter().map(|d| d.to_string()).collect::<String>()
        } else {
            let ds: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            format!("[{}]", ds.join(","))
        };
        let rank = st.indec_rank[orbit as usize]
            .ok_or_else(|| HallError::Invalid("not an indecomposable".into()))?;
        Ok(if st.indec_total > 1 {
            format!("M{body}#{}", rank + 1)
        } else {
            format!("M{body}")
        })
    }

    fn class_name(&self, dims: &[usize], orbit: u32) -> Result<String> {
        let parts = self.parts(dims, orbit)?;
        if parts.is_empty() {
            return Ok("0".into());
        }
        let mut grouped: Vec<((Vec<usize>, u32), usize)> = Vec::new();
        for p in parts {
            match grouped.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => grouped.push((p, 1)),
            }
        }
        let mut terms = Vec::new();
        for ((d, o), m) in grouped {
            let n = self.indecomposable_name(&d, o)?;
            terms.push(with_multiplicity(&n, m));
        }
        Ok(terms.join("+"))
    }

    fn label_of(&self, rep: &Rep) -> String {
        let dims: Vec<String> = rep.dims.iter().map(|d| d.to_string()).collect();
        let maps: Vec<String> = rep
            .maps
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|r| m.row(r).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .collect();
        format!(
            "quiver@{}:{}:[{}]:{}",
            self.field.p(),
            self.name,
            dims.join(","),
            maps.join("|")
        )
    }

    fn class_at(&self, dims: &[usize], orbit: u32) -> Result<IsoClass> {
        let st = self.stratum(dims)?;
        let rep = self.decode(dims, st.canon[orbit as usize]);
        Ok(IsoClass::new(
            self.label_of(&rep),
            self.class_name(dims, orbit)?,
            ClassPayload::Rep(rep),
        ))
    }

    /// Class of an arbitrary representation of this quiver.
    pub fn canonical(&self, rep: &Rep) -> Result<IsoClass> {
        let arrows = self.quiver.arrows();
        if rep.dims.len() != self.quiver.vertices()
            || rep.maps.len() != arrows.len()
            || arrows
                .iter()
                .zip(&rep.maps)
                .any(|(&(s, t), m)| m.rows() != rep.dims[t] || m.cols() != rep.dims[s])
        {
            return Err(HallError::Invalid("representation shape does not match the quiver".into()));
        }
        let st = self.stratum(&rep.dims)?;
        let orbit = st.orbit_of[self.encode(rep) as usize];
        self.class_at(&rep.dims, orbit)
    }

    /// Every class with the given dimension vector.
    pub fn classes_with_dims(&self, dims: &[usize]) -> Result<Vec<IsoClass>> {
        let st = self.stratum(dims)?;
        (0..st.canon.len() as u32).map(|o| self.class_at(dims, o)).collect()
    }

    fn default_max_dim(&self) -> usize {
        if self.field.p() == 2 {
            4
        } else {
            3
        }
    }

    fn unit_degree(&self, dims: &[usize], orbit: u32) -> Result<u32> {
        let key = (dims.to_vec(), orbit);
        if let Some(e) = read_cache(&self.unit_degrees, &key) {
            return Ok(e);
        }
        let class = self.class_at(dims, orbit)?;
        let rep = self.rep(&class)?;
        let h = linrep::hom_dim(self.field, &self.quiver, rep, rep) as u32;
        let units = linrep::count_automorphisms(self.field, &self.quiver, rep, &self.budget)?;
        let q = BigUint::from(self.field.p());
        let nonunits = q.pow(h) - units;
        let e = (1..=h)
            .find(|&e| q.pow(h - e) == nonunits)
            .ok_or_else(|| HallError::Invalid(format!("endomorphism ring of {} is not local", class.name())))?;
        Ok(write_cache(&self.unit_degrees, key, e))
    }

    fn parse_label(&self, text: &str) -> Result<IsoClass> {
        let bad = || HallError::Parse(format!("malformed quiver label {text:?}"));
        let mut it = text.splitn(4, ':');
        let (head, name, dims, maps) = (
            it.next().ok_or_else(bad)?,
            it.next().ok_or_else(bad)?,
            it.next().ok_or_else(bad)?,
            it.next().ok_or_else(bad)?,
        );
        if head != format!("quiver@{}", self.field.p()) || name != self.name {
            return Err(HallError::Parse(format!("label {text:?} belongs to another backend")));
        }
        let dims: Vec<usize> = parse_list(dims).ok_or_else(bad)?;
        if dims.len() != self.quiver.vertices() {
            return Err(bad());
        }
        let arrows = self.quiver.arrows();
        let map_texts: Vec<&str> = if arrows.is_empty() { Vec::new() } else { maps.split('|').collect() };
        if map_texts.len() != arrows.len() {
            return Err(bad());
        }
        let mut mats = Vec::new();
        for (&(s, t), mt) in arrows.iter().zip(map_texts) {
            let mut data = Vec::new();
            if dims[t] * dims[s] > 0 {
                let rows: Vec<&str> = mt.split(';').collect();
                if rows.len() != dims[t] {
                    return Err(bad());
                }
                for r in rows {
                    let vals: Vec<u32> = r
                        .split(',')
                        .map(|v| v.trim().parse::<u32>().ok().filter(|&x| x < self.field.p()))
                        .collect::<Option<_>>()
                        .ok_or_else(bad)?;
                    if vals.len() != dims[s] {
                        return Err(bad());
                    }
                    data.extend(vals);
                }
            } else if mt.chars().any(|c| c != ';') {
                return Err(bad());
            }
            mats.push(FFMatrix::from_vec(self.field, dims[t], dims[s], data));
        }
        self.canonical(&Rep { dims, maps: mats })
    }

    fn parse_indecomposable(&self, base: &str) -> Result<IsoClass> {
        let n = self.quiver.vertices();
        let unit = |v: usize| -> Result<IsoClass> {
            let mut dims = vec![0; n];
            dims[v] = 1;
            self.classes_with_dims(&dims)?
                .into_iter()
                .next()
                .ok_or_else(|| HallError::Invalid("empty stratum".into()))
        };
        if base == "k" && n == 1 {
            return unit(0);
        }
        if let Some(v) = base.strip_prefix('S') {
            return match v.parse::<usize>() {
                Ok(v) if v >= 1 && v <= n => unit(v - 1),
                _ => Err(HallError::Parse(format!("no simple {base:?} on this quiver"))),
            };
        }
        let body = base
            .strip_prefix('M')
            .ok_or_else(|| HallError::Parse(format!("unknown class name {base:?}")))?;
        let (dims_text, which) = match body.split_once('#') {
            Some((d, w)) => (
                d,
                Some(w.parse::<usize>().map_err(|_| HallError::Parse(format!("bad index in {base:?}")))?),
            ),
            None => (body, None),
        };
        let dims: Vec<usize> = if dims_text.starts_with('[') {
            parse_list(dims_text)
        } else {
            dims_text.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        }
        .filter(|d: &Vec<usize>| d.len() == n)
        .ok_or_else(|| HallError::Parse(format!("bad dimension vector in {base:?}")))?;
        let st = self.stratum(&dims)?;
        let indecs: Vec<u32> = (0..st.canon.len() as u32)
            .filter(|&o| st.indec_rank[o as usize].is_some())
            .collect();
        let orbit = match (which, indecs.len()) {
            (None, 1) => indecs[0],
            (None, 0) => return Err(HallError::Parse(format!("no indecomposable {base:?}"))),
            (None, _) => return Err(HallError::Parse(format!("{base:?} is ambiguous; add #j"))),
            (Some(j), len) if j >= 1 && j <= len => indecs[j - 1],
            _ => return Err(HallError::Parse(format!("no indecomposable {base:?}"))),
        };
        self.class_at(&dims, orbit)
    }

    fn histogram(
        &self,
        cache: &RwLock<HashMap<(IsoClass, IsoClass), Histogram>>,
        key: (IsoClass, IsoClass),
        build: impl FnOnce() -> Result<HashMap<IsoClass, BigUint>>,
    ) -> Result<Histogram> {
        if let Some(h) = read_cache(cache, &key) {
            return Ok(h);
        }
        let h = Arc::new(build()?);
        Ok(write_cache(cache, key, h))
    }

    /// Number of subrepresentations `U` of `L` with `U ≅ X` and `L/U ≅ Y`.
    fn subobjects(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        if self.dims_add(x, y)? != self.rep(l)?.dims {
            return Ok(BigUint::zero());
        }
        let dims = self.rep(x)?.dims.clone();
        let key = (l.clone(), dims);
        let census = match read_cache(&self.censuses, &key) {
            Some(c) => c,
            None => {
                let mut h: HashMap<(IsoClass, IsoClass), BigUint> = HashMap::new();
                linrep::for_each_subrepresentation(self.field, &self.quiver, self.rep(l)?, &key.1, &self.budget, |u, q| {
                    *h.entry((self.canonical(&u)?, self.canonical(&q)?)).or_default() += 1u32;
                    Ok(())
                })?;
                write_cache(&self.censuses, key, Arc::new(h))
            }
        };
        Ok(census.get(&(x.clone(), y.clone())).cloned().unwrap_or_default())
    }

    fn dims_add(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        let (rx, ry) = (self.rep(x)?, self.rep(y)?);
        Ok(rx.dims.iter().zip(&ry.dims).map(|(a, b)| a + b).collect())
    }
}

fn with_multiplicity(name: &str, m: usize) -> String {
    if m == 1 {
        name.to_string()
    } else if name.ends_with(|c: char| c.is_ascii_alphabetic()) {
        format!("{name}{m}")
    } else {
        format!("{name}^{m}")
    }
}

fn parse_list(text: &str) -> Option<Vec<usize>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|v| v.trim().parse().ok()).collect()
}

/// Nonzero dimension vectors `d1 <= dims` componentwise, `d1 != dims`.
fn sub_dims(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=d).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0) && v.as_slice() != dims);
    out
}

/// Dimension vectors with total at most `max`.
fn dims_up_to(vertices: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..vertices {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let used: usize = v.iter().sum();
                (0..=max - used).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|d| dims_key(d));
    out
}

impl Model for QuiverModel {
    fn backend_id(&self) -> String {
        self.spec.clone()
    }

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn capabilities(&self) -> ModelCapabilities {
        ModelCapabilities {
            right_hom_finite: true,
            left_hom_finite: true,
            has_neg_ext: true,
            exact_case: true,
            triangulated_case: false,
        }
    }

    fn budget(&self) -> Budget {
        self.budget
    }

    fn zero(&self) -> IsoClass {
        self.class_at(&vec![0; self.quiver.vertices()], 0)
            .expect("the zero stratum is always within budget")
    }

    fn classes_up_to(&self, bound: &UniverseBound) -> Result<Vec<IsoClass>> {
        let max = bound.max_dim.unwrap_or_else(|| self.default_max_dim());
        let mut out = Vec::new();
        for dims in dims_up_to(self.quiver.vertices(), max) {
            out.extend(self.classes_with_dims(&dims)?);
        }
        Ok(out)
    }

    fn parse_class(&self, text: &str) -> Result<IsoClass> {
        let text = text.trim();
        if text.starts_with("quiver@") {
            return self.parse_label(text);
        }
        let mut acc = self.zero();
        if text == "0" {
            return Ok(acc);
        }
        for term in text.split('+') {
            let term = term.trim();
            let (base, mult) = match term.split_once('^') {
                Some((b, m)) => (
                    b,
                    m.parse::<usize>()
                        .map_err(|_| HallError::Parse(format!("bad multiplicity in {term:?}")))?,
                ),
                None => match term.strip_prefix('k') {
                    Some(m) if !m.is_empty() && m.chars().all(|c| c.is_ascii_digit()) => {
                        ("k", m.parse::<usize>().map_err(|_| HallError::Parse(term.into()))?)
                    }
                    _ => (term, 1),
                },
            };
            let ind = self.parse_indecomposable(base)?;
            for _ in 0..mult {
                acc = self.dsum(&acc, &ind)?;
            }
        }
        Ok(acc)
    }

    fn describe_bound(&self, bound: &UniverseBound) -> String {
        format!("total dim <= {}", bound.max_dim.unwrap_or_else(|| self.default_max_dim()))
    }

    fn within_bound(&self, x: &IsoClass, bound: &UniverseBound) -> bool {
        let max = bound.max_dim.unwrap_or_else(|| self.default_max_dim());
        self.rep(x).map(|r| r.total_dim() <= max).unwrap_or(false)
    }

    fn grothendieck(&self, x: &IsoClass) -> Result<Vec<i64>> {
        Ok(self.rep(x)?.dims.iter().map(|&d| d as i64).collect())
    }

    fn hom_dim(&self, x: &IsoClass, y: &IsoClass) -> Result<usize> {
        Ok(linrep::hom_dim(self.field, &self.quiver, self.rep(x)?, self.rep(y)?))
    }

    fn ext_dims(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        let (rx, ry) = (self.rep(x)?, self.rep(y)?);
        let ext1 = self.hom_dim(x, y)? as i64 - self.quiver.ringel_form(&rx.dims, &ry.dims);
        assert!(ext1 >= 0, "negative Ext^1 dimension");
        Ok(if ext1 == 0 { Vec::new() } else { vec![ext1 as usize] })
    }

    fn neg_ext_dims(&self, _variant: NegVariant, x: &IsoClass, y: &IsoClass) -> Result<Vec<usize>> {
        self.rep(x)?;
        self.rep(y)?;
        Ok(Vec::new())
    }

    fn aut_order(&self, x: &IsoClass) -> Result<BigUint> {
        if let Some(a) = read_cache(&self.auts, x) {
            return Ok(a);
        }
        let rep = self.rep(x)?;
        let st = self.stratum(&rep.dims)?;
        let orbit = st.orbit_of[self.encode(rep) as usize];
        let mut mult: BTreeMap<(Vec<usize>, u32), usize> = BTreeMap::new();
        for part in self.parts(&rep.dims, orbit)? {
            *mult.entry(part).or_default() += 1;
        }
        let q = self.field.p() as u64;
        let mut semisimple_dim = 0usize;
        let mut order = BigUint::one();
        for ((dims, o), m) in mult {
            let e = self.unit_degree(&dims, o)?;
            semisimple_dim += m * m * e as usize;
            order *= gl_order(m, q.pow(e));
        }
        let h = self.hom_dim(x, x)?;
        order *= BigUint::from(q).pow((h - semisimple_dim) as u32);
        Ok(write_cache(&self.auts, x.clone(), order))
    }

    fn dsum(&self, x: &IsoClass, y: &IsoClass) -> Result<IsoClass> {
        self.canonical(&self.rep(x)?.direct_sum(self.rep(y)?))
    }

    fn decompose(&self, x: &IsoClass) -> Result<Vec<IsoClass>> {
        let rep = self.rep(x)?;
        let st = self.stratum(&rep.dims)?;
        let orbit = st.orbit_of[self.encode(rep) as usize];
        self.parts(&rep.dims, orbit)?
            .into_iter()
            .map(|(d, o)| self.class_at(&d, o))
            .collect()
    }

    fn middle_candidates(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<IsoClass>> {
        self.classes_with_dims(&self.dims_add(x, y)?)
    }

    /// Each inflation `X -> L` with cone `Y` is an isomorphism onto a
    /// subrepresentation `U ≅ X` with `L/U ≅ Y`, so the count is
    /// `|Aut X|` times the number of such `U`.
    fn inflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        Ok(self.subobjects(x, l, y)? * self.aut_order(x)?)
    }

    fn deflation_count(&self, x: &IsoClass, l: &IsoClass, y: &IsoClass) -> Result<BigUint> {
        Ok(self.subobjects(x, l, y)? * self.aut_order(y)?)
    }

    /// Counts extension classes through cocycles: each `eta` in
    /// `⊕_a Hom(Y_s, X_t)` glues a middle term, and cohomologous cocycles
    /// differ by the image of `⊕_v Hom(Y_v, X_v)`.
    fn extension_count(&self, y: &IsoClass, x: &IsoClass, l: &IsoClass) -> Result<BigUint> {
        if self.dims_add(x, y)? != self.rep(l)?.dims {
            return Ok(BigUint::zero());
        }
        let hist = self.histogram(&self.extensions, (y.clone(), x.clone()), || {
            let (rx, ry) = (self.rep(x)?, self.rep(y)?);
            let f = self.field;
            let arrows = self.quiver.arrows();
            let cochains: usize = arrows.iter().map(|&(s, t)| rx.dims[t] * ry.dims[s]).sum();
            self.budget.check_pow("extension cocycles", f.p() as u64, cochains)?;
            let mut digits = vec![0u32; cochains];
            let mut raw: HashMap<IsoClass, BigUint> = HashMap::new();
            loop {
                let mut offset = 0;
                let maps = arrows
                    .iter()
                    .enumerate()
                    .map(|(a, &(s, t))| {
                        let (xt, xs, yt, ys) = (rx.dims[t], rx.dims[s], ry.dims[t], ry.dims[s]);
                        let mut m = FFMatrix::zeros(f, xt + yt, xs + ys);
                        for i in 0..xt {
                            for j in 0..xs {
                                m.set(i, j, rx.maps[a].get(i, j));
                            }
                            for j in 0..ys {
                                m.set(i, xs + j, digits[offset + i * ys + j]);
                            }
                        }
                        for i in 0..yt {
                            for j in 0..ys {
                                m.set(xt + i, xs + j, ry.maps[a].get(i, j));
                            }
                        }
                        offset += xt * ys;
                        m
                    })
                    .collect();
                let dims = rx.dims.iter().zip(&ry.dims).map(|(a, b)| a + b).collect();
                let mid = self.canonical(&Rep { dims, maps })?;
                *raw.entry(mid).or_default() += 1u32;
                let Some(i) = digits.iter().position(|&d| d + 1 < f.p()) else {
                    break;
                };
                digits[i] += 1;
                digits[..i].iter_mut().for_each(|d| *d = 0);
            }
            let coboundary_dim: usize = rx.dims.iter().zip(&ry.dims).map(|(a, b)| a * b).sum::<usize>()
                - linrep::hom_dim(f, &self.quiver, ry, rx);
            let scale = BigUint::from(f.p()).pow(coboundary_dim as u32);
            raw.into_iter()
                .map(|(c, n)| {
                    if (&n % &scale).is_zero() {
                        Ok((c, n / &scale))
                    } else {
                        Err(HallError::Invalid(format!(
                            "cocycle count {n} for {} is not a multiple of {scale}",
                            c.name()
                        )))
                    }
                })
                .collect()
        })?;
        Ok(hist.get(l).cloned().unwrap_or_default())
    }
}

impl QuiverModel {
    /// All morphisms between the canonical representatives of two classes.
    pub fn morphisms(&self, x: &IsoClass, y: &IsoClass) -> Result<Vec<Morphism>> {
        linrep::all_morphisms(self.field, &self.quiver, self.rep(x)?, self.rep(y)?, &self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Backend;

    fn model(spec: &str) -> QuiverModel {
        match Backend::from_spec_str(spec, Budget::default()).unwrap() {
            Backend::Quiver(m) => m,
            _ => unreachable!(),
        }
    }

    fn names(m: &QuiverModel, max: usize) -> Vec<String> {
        m.classes_up_to(&UniverseBound::max_dim(max))
            .unwrap()
            .iter()
            .map(|c| c.name().to_string())
            .collect()
    }

    #[test]
    fn a1_classes_are_powers_of_k() {
        let m = model("quiver:A1@2");
        assert_eq!(names(&m, 2), ["0", "k", "k2"]);
    }

    #[test]
    fn a2_has_seven_classes_up_to_dim_two() {
        let m = model("quiver:A2@2");
        let n = names(&m, 2);
        assert_eq!(n.len(), 7, "{n:?}");
        for expected in ["0", "S1", "S2", "M11", "S1^2", "S2^2", "S1+S2"] {
            assert!(n.contains(&expected.to_string()), "{expected} missing from {n:?}");
        }
    }

    #[test]
    fn a3_indecomposables_are_the_six_intervals() {
        let m = model("quiver:A3@3");
        let indec: Vec<String> = m
            .classes_up_to(&UniverseBound::max_dim(3))
            .unwrap()
            .into_iter()
            .filter(|c| m.decompose(c).unwrap().len() == 1)
            .map(|c| c.name().to_string())
            .collect();
        assert_eq!(indec.len(), 6, "{indec:?}");
    }

    #[test]
    fn kronecker_has_p_plus_one_regular_simples() {
        let dir = std::env::temp_dir().join("exthall-kronecker-test.txt");
        std::fs::write(&dir, "2\n1 2\n1 2\n").unwrap();
        let m = model(&format!("quiver:file={}@2", dir.display()));
        let indec = m
            .classes_with_dims(&[1, 1])
            .unwrap()
            .into_iter()
            .filter(|c| m.decompose(c).unwrap().len() == 1)
            .count();
        assert_eq!(indec, 3);
    }

    #[test]
    fn homs_exts_and_automorphisms_on_a2() {
        let m = model("quiver:A2@2");
        let s1 = m.parse_class("S1").unwrap();
        let s2 = m.parse_class("S2").unwrap();
        let p = m.parse_class("M11").unwrap();
        assert_eq!(m.hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(m.ext_dims(&s1, &s2).unwrap(), vec![1]);
        assert_eq!(m.ext_dims(&s2, &s1).unwrap(), Vec::<usize>::new());
        assert_eq!(m.hom_dim(&s2, &p).unwrap(), 1);
        let s1s2 = m.dsum(&s1, &s2).unwrap();
        assert_eq!(s1s2.name(), "S1+S2");
        assert_eq!(m.aut_order(&s1s2).unwrap(), BigUint::from(1u32));
        let s1sq = m.parse_class("S1^2").unwrap();
        assert_eq!(m.aut_order(&s1sq).unwrap(), BigUint::from(6u32));
        let mixed = m.parse_class("S1+M11").unwrap();
        let brute = linrep::count_automorphisms(m.field, &m.quiver, m.rep(&mixed).unwrap(), &m.budget).unwrap();
        assert_eq!(m.aut_order(&mixed).unwrap(), brute);
    }

    #[test]
    fn krull_schmidt_aut_order_matches_brute_force() {
        for spec in ["quiver:A2@2", "quiver:A2@3", "quiver:A3@2"] {
            let m = model(spec);
            for c in m.classes_up_to(&UniverseBound::max_dim(3)).unwrap() {
                let brute = linrep::count_automorphisms(m.field, &m.quiver, m.rep(&c).unwrap(), &m.budget).unwrap();
                assert_eq!(m.aut_order(&c).unwrap(), brute, "{spec} {c}");
            }
        }
    }

    #[test]
    fn counts_for_s1_s2() {
        let m = model("quiver:A2@2");
        let s1 = m.parse_class("S1").unwrap();
        let s2 = m.parse_class("S2").unwrap();
        let p = m.parse_class("M11").unwrap();
        let split = m.parse_class("S1+S2").unwrap();
        assert_eq!(m.extension_count(&s1, &s2, &p).unwrap(), BigUint::from(1u32));
        assert_eq!(m.extension_count(&s1, &s2, &split).unwrap(), BigUint::from(1u32));
        assert_eq!(m.extension_count(&s2, &s1, &p).unwrap(), BigUint::from(0u32));
        assert_eq!(m.inflation_count(&s2, &p, &s1).unwrap(), BigUint::from(1u32));
        assert_eq!(m.deflation_count(&s2, &p, &s1).unwrap(), BigUint::from(1u32));
        assert_eq!(m.inflation_count(&s1, &p, &s2).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn labels_round_trip() {
        let m = model("quiver:A3@3");
        for c in m.classes_up_to(&UniverseBound::max_dim(3)).unwrap() {
            assert_eq!(m.parse_class(c.label()).unwrap(), c);
            assert_eq!(m.parse_class(c.name()).unwrap(), c);
        }
    }

    #[test]
    fn rejects_foreign_names() {
        let m = model("quiver:A2@2");
        assert!(matches!(m.parse_class("S3"), Err(HallError::Parse(_))));
        assert!(matches!(m.parse_class("k"), Err(HallError::Parse(_))));
        assert!(matches!(m.parse_class("quiver@3:A2:[1,0]:"), Err(HallError::Parse(_))));
    }

    #[test]
    fn stratum_budget_is_enforced() {
        let m = QuiverModel::new(
            FieldSpec::new(2).unwrap(),
            QuiverSpec::linear_a(2),
            "A2".into(),
            "quiver:A2@2".into(),
            Budget::new(8),
        );
        assert!(matches!(m.classes_with_dims(&[2, 2]), Err(HallError::Budget { .. })));
    }
}
