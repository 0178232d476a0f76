//! Representations of finite acyclic quivers over `F_p` and their morphisms.
//!
//! Graded vector spaces are handled as representations of the arrowless
//! quiver whose vertices are the degrees, so the oracle code shares one
//! morphism model across backends.

use num_bigint::BigUint;

use crate::error::{Budget, HallError, Result};
use crate::ff::{solve_linear, AffineSolution, FFMatrix, FieldSpec};

/// A finite quiver with vertices `0..vertices` and arrows `(src, dst)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverSpec {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl QuiverSpec {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(HallError::Invalid("a quiver needs at least one vertex".into()));
        }
        if let Some(&(s, t)) = arrows.iter().find(|(s, t)| *s >= vertices || *t >= vertices) {
            return Err(HallError::Invalid(format!(
                "arrow {}->{} leaves the vertex range 1..={vertices}",
                s + 1,
                t + 1
            )));
        }
        let q = QuiverSpec { vertices, arrows };
        if !q.is_acyclic() {
            return Err(HallError::Invalid("quiver has an oriented cycle".into()));
        }
        Ok(q)
    }

    /// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Self {
        QuiverSpec {
            vertices: n,
            arrows: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    /// `n` vertices, no arrows.
    pub fn discrete(n: usize) -> Self {
        QuiverSpec {
            vertices: n,
            arrows: Vec::new(),
        }
    }

    /// Parses the quiver file format: first line the vertex count, then one
    /// `src dst` pair (1-based) per line. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| HallError::Parse("empty quiver file".into()))?;
        let vertices: usize = header
            .parse()
            .map_err(|_| HallError::Parse(format!("bad vertex count {header:?}")))?;
        let mut arrows = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [s, t] = parts.as_slice() else {
                return Err(HallError::Parse(format!("expected `src dst`, got {line:?}")));
            };
            let parse = |x: &str| -> Result<usize> {
                let v: usize = x
                    .parse()
                    .map_err(|_| HallError::Parse(format!("bad vertex {x:?}")))?;
                if v == 0 {
                    return Err(HallError::Parse("vertices are numbered from 1".into()));
                }
                Ok(v - 1)
            };
            arrows.push((parse(s)?, parse(t)?));
        }
        Self::new(vertices, arrows)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen == self.vertices
    }

    /// Ringel form `<d, e> = sum_v d_v e_v - sum_{a: i -> j} d_i e_j`.
    pub fn ringel_form(&self, d: &[usize], e: &[usize]) -> i64 {
        let diag: i64 = d.iter().zip(e).map(|(a, b)| (*a * *b) as i64).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| (d[s] * e[t]) as i64).sum();
        diag - off
    }

    /// Number of entries in the arrow matrices of a representation with these dims.
    pub fn arrow_entries(&self, dims: &[usize]) -> usize {
        self.arrows.iter().map(|&(s, t)| dims[s] * dims[t]).sum()
    }
}

/// A representation: one vector space per vertex, one matrix per arrow
/// (shape `dims[dst] x dims[src]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub maps: Vec<FFMatrix>,
}

impl Rep {
    pub fn zero_maps(field: FieldSpec, quiver: &QuiverSpec, dims: Vec<usize>) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| FFMatrix::zeros(field, dims[t], dims[s]))
            .collect();
        Rep { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        Rep {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(a, b)| a.block_diag(b))
                .collect(),
        }
    }
}

/// A morphism of representations: one matrix per vertex, shape `dst_v x src_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub comps: Vec<FFMatrix>,
}

impl Morphism {
    pub fn identity(field: FieldSpec, rep: &Rep) -> Self {
        Morphism {
            comps: rep.dims.iter().map(|&d| FFMatrix::identity(field, d)).collect(),
        }
    }

    pub fn zero(field: FieldSpec, src: &Rep, dst: &Rep) -> Self {
        Morphism {
            comps: src
                .dims
                .iter()
                .zip(&dst.dims)
                .map(|(&s, &t)| FFMatrix::zeros(field, t, s))
                .collect(),
        }
    }

    /// Rebuilds a morphism from the flattened per-vertex entries.
    pub fn from_flat(field: FieldSpec, src: &Rep, dst: &Rep, flat: &[u32]) -> Self {
        let mut offset = 0;
        let comps = src
            .dims
            .iter()
            .zip(&dst.dims)
            .map(|(&s, &t)| {
                let m = FFMatrix::from_vec(field, t, s, flat[offset..offset + s * t].to_vec());
                offset += s * t;
                m
            })
            .collect();
        Morphism { comps }
    }

    pub fn flat(&self) -> Vec<u32> {
        self.comps.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        Morphism {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.is_invertible())
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn inverse(&self) -> Option<Morphism> {
        self.comps
            .iter()
            .map(|m| m.inverse())
            .collect::<Option<Vec<_>>>()
            .map(|comps| Morphism { comps })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.comps.iter().map(|m| m.rank()).collect()
    }
}

/// Linear solution space of `Hom(X, Y)`, flattened as in [`Morphism::flat`].
pub fn hom_space(field: FieldSpec, quiver: &QuiverSpec, x: &Rep, y: &Rep) -> AffineSolution {
    let mut offsets = Vec::with_capacity(quiver.vertices());
    let mut unknowns = 0;
    for v in 0..quiver.vertices() {
        offsets.push(unknowns);
        unknowns += x.dims[v] * y.dims[v];
    }
    let equations: usize = quiver.arrows().iter().map(|&(s, t)| y.dims[t] * x.dims[s]).sum();
    let mut sys = FFMatrix::zeros(field, equations, unknowns);
    let mut row = 0;
    // For each arrow a: s -> t require phi_t X_a - Y_a phi_s = 0.
    for (a, &(s, t)) in quiver.arrows().iter().enumerate() {
        let (xa, ya) = (&x.maps[a], &y.maps[a]);
        for i in 0..y.dims[t] {
            for j in 0..x.dims[s] {
                for k in 0..x.dims[t] {
                    let col = offsets[t] + i * x.dims[t] + k;
                    let v = field.add(sys.get(row, col), xa.get(k, j));
                    sys.set(row, col, v);
                }
                for k in 0..y.dims[s] {
                    let col = offsets[s] + k * x.dims[s] + j;
                    let v = field.sub(sys.get(row, col), ya.get(i, k));
                    sys.set(row, col, v);
                }
                row += 1;
            }
        }
    }
    solve_linear(&sys, &vec![0; equations])
}

pub fn hom_dim(field: FieldSpec, quiver: &QuiverSpec, x: &Rep, y: &Rep) -> usize {
    hom_space(field, quiver, x, y).nullity()
}

/// Every morphism `X -> Y`, budget permitting.
pub fn all_morphisms(
    field: FieldSpec,
    quiver: &QuiverSpec,
    x: &Rep,
    y: &Rep,
    budget: &Budget,
) -> Result<Vec<Morphism>> {
    let space = hom_space(field, quiver, x, y);
    budget.check("morphism enumeration", &space.count())?;
    Ok(space.iter().map(|flat| Morphism::from_flat(field, x, y, &flat)).collect())
}

/// Automorphisms of `X` paired with their inverses.
pub fn aut_group(
    field: FieldSpec,
    quiver: &QuiverSpec,
    x: &Rep,
    budget: &Budget,
) -> Result<Vec<(Morphism, Morphism)>> {
    let space = hom_space(field, quiver, x, x);
    budget.check("automorphism enumeration", &space.count())?;
    Ok(space
        .iter()
        .filter_map(|flat| {
            let m = Morphism::from_flat(field, x, x, &flat);
            m.inverse().map(|inv| (m, inv))
        })
        .collect())
}

pub fn count_automorphisms(field: FieldSpec, quiver: &QuiverSpec, x: &Rep, budget: &Budget) -> Result<BigUint> {
    Ok(BigUint::from(aut_group(field, quiver, x, budget)?.len()))
}

/// Extends the columns of an injective `l x k` matrix to an invertible
/// `l x l` matrix by appending standard basis vectors.
fn complete_basis(f: &FFMatrix) -> (FFMatrix, Vec<usize>) {
    let field = f.field();
    let (l, k) = (f.rows(), f.cols());
    let mut aug = FFMatrix::zeros(field, l, k + l);
    for r in 0..l {
        for c in 0..k {
            aug.set(r, c, f.get(r, c));
        }
        aug.set(r, k + r, 1);
    }
    let (_, pivots) = aug.rref();
    let extra: Vec<usize> = pivots.iter().filter(|&&c| c >= k).map(|c| c - k).collect();
    let mut full = FFMatrix::zeros(field, l, l);
    for r in 0..l {
        for c in 0..k {
            full.set(r, c, f.get(r, c));
        }
        for (j, &e) in extra.iter().enumerate() {
            if r == e {
                full.set(r, k + j, 1);
            }
        }
    }
    (full, extra)
}

/// For an injective `l x k` matrix `f`, returns a quotient map `Q` onto
/// `coker f` (shape `(l-k) x l`, kernel exactly `im f`) and a section `S`
/// of it (`Q S = 1`).
pub fn quotient_map(f: &FFMatrix) -> (FFMatrix, FFMatrix) {
    let field = f.field();
    let k = f.cols();
    let (full, extra) = complete_basis(f);
    let inv = full.inverse().expect("completed basis is invertible");
    let c = extra.len();
    let mut q = FFMatrix::zeros(field, c, f.rows());
    for r in 0..c {
        for col in 0..f.rows() {
            q.set(r, col, inv.get(k + r, col));
        }
    }
    let mut s = FFMatrix::zeros(field, f.rows(), c);
    for (j, &e) in extra.iter().enumerate() {
        s.set(e, j, 1);
    }
    (q, s)
}

/// Cokernel of an injective morphism `f: X -> L`, with arrow maps induced
/// through a section of each quotient map.
pub fn cokernel(quiver: &QuiverSpec, l: &Rep, f: &Morphism) -> Rep {
    let (quot, sect): (Vec<FFMatrix>, Vec<FFMatrix>) = f.comps.iter().map(quotient_map).unzip();
    let dims = quot.iter().map(|q| q.rows()).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| quot[t].mul(&l.maps[a]).mul(&sect[s]))
        .collect();
    Rep { dims, maps }
}

/// Kernel of `g: L -> Y` as a subrepresentation of `L`.
pub fn kernel(quiver: &QuiverSpec, l: &Rep, g: &Morphism) -> Rep {
    let incl: Vec<FFMatrix> = g.comps.iter().map(|m| m.kernel_matrix()).collect();
    let dims: Vec<usize> = incl.iter().map(|k| k.cols()).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let field = l.maps[a].field();
            let image = l.maps[a].mul(&incl[s]);
            let mut m = FFMatrix::zeros(field, dims[t], dims[s]);
            for c in 0..dims[s] {
                let col: Vec<u32> = (0..image.rows()).map(|r| image.get(r, c)).collect();
                let sol = solve_linear(&incl[t], &col);
                let v = sol.particular.expect("kernel is a subrepresentation");
                for (r, x) in v.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            m
        })
        .collect();
    Rep { dims, maps }
}

/// Every `k`-dimensional subspace of `F^n`, as its `k x n` reduced row
/// echelon basis together with the pivot columns.
pub fn subspaces(field: FieldSpec, n: usize, k: usize) -> Vec<(FFMatrix, Vec<usize>)> {
    fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < k - cur.len() {
                break;
            }
            cur.push(c);
            choose(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(n, k, 0, &mut Vec::new(), &mut pivot_sets);
    let p = field.p();
    let mut out = Vec::new();
    for pivots in pivot_sets {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut m = FFMatrix::zeros(field, k, n);
            for (i, &c) in pivots.iter().enumerate() {
                m.set(i, c, 1);
            }
            for (&(i, c), &d) in free.iter().zip(&digits) {
                m.set(i, c, d);
            }
            out.push((m, pivots.clone()));
            let Some(i) = digits.iter().position(|&d| d + 1 < p) else {
                break;
            };
            digits[i] += 1;
            digits[..i].iter_mut().for_each(|d| *d = 0);
        }
    }
    out
}

/// Splits `v` against an echelon basis: coordinates on the pivots and
/// the residual `v - Σ v[p_i] b_i`.
fn reduce(field: FieldSpec, basis: &FFMatrix, pivots: &[usize], v: &mut [u32]) -> Vec<u32> {
    let coords: Vec<u32> = pivots.iter().map(|&c| v[c]).collect();
    for (i, &a) in coords.iter().enumerate() {
        if a != 0 {
            for (c, x) in v.iter_mut().enumerate() {
                *x = field.sub(*x, field.mul(a, basis.get(i, c)));
            }
        }
    }
    coords
}

/// Calls `visit(U, L/U)` for every subrepresentation `U` of `l` with the
/// given dimension vector; `L/U` uses the non-pivot coordinates.
pub fn for_each_subrepresentation(
    field: FieldSpec,
    quiver: &QuiverSpec,
    l: &Rep,
    dims: &[usize],
    budget: &Budget,
    mut visit: impl FnMut(Rep, Rep) -> Result<()>,
) -> Result<()> {
    if dims.len() != l.dims.len() || dims.iter().zip(&l.dims).any(|(u, n)| u > n) {
        return Ok(());
    }
    let q = field.p() as u64;
    let total = l
        .dims
        .iter()
        .zip(dims)
        .fold(BigUint::from(1u32), |acc, (&n, &k)| acc * crate::ff::gaussian_binomial(n, k, q));
    budget.check("subspace tuples", &total)?;
    let choices: Vec<Vec<(FFMatrix, Vec<usize>)>> =
        l.dims.iter().zip(dims).map(|(&n, &k)| subspaces(field, n, k)).collect();
    let complements: Vec<Vec<Vec<usize>>> = choices
        .iter()
        .zip(&l.dims)
        .map(|(list, &n)| list.iter().map(|(_, piv)| (0..n).filter(|c| !piv.contains(c)).collect()).collect())
        .collect();
    let arrows = quiver.arrows();
    let mut pick = vec![0usize; choices.len()];
    'outer: loop {
        let mut sub_maps = Vec::with_capacity(arrows.len());
        let mut quot_maps = Vec::with_capacity(arrows.len());
        let mut closed = true;
        for (a, &(s, t)) in arrows.iter().enumerate() {
            let (bs, _) = &choices[s][pick[s]];
            let (bt, pt) = &choices[t][pick[t]];
            let mut m = FFMatrix::zeros(field, dims[t], dims[s]);
            for j in 0..dims[s] {
                let mut v = l.maps[a].apply(bs.row(j));
                let coords = reduce(field, bt, pt, &mut v);
                if v.iter().any(|&x| x != 0) {
                    closed = false;
                    break;
                }
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            if !closed {
                break;
            }
            sub_maps.push(m);
            let (cs, ct) = (&complements[s][pick[s]], &complements[t][pick[t]]);
            let mut qm = FFMatrix::zeros(field, ct.len(), cs.len());
            for (j, &e) in cs.iter().enumerate() {
                let mut v: Vec<u32> = (0..l.dims[t]).map(|r| l.maps[a].get(r, e)).collect();
                reduce(field, bt, pt, &mut v);
                for (i, &c) in ct.iter().enumerate() {
                    qm.set(i, j, v[c]);
                }
            }
            quot_maps.push(qm);
        }
        if closed {
            let sub = Rep {
                dims: dims.to_vec(),
                maps: sub_maps,
            };
            let quot = Rep {
                dims: l.dims.iter().zip(dims).map(|(n, k)| n - k).collect(),
                maps: quot_maps,
            };
            visit(sub, quot)?;
        }
        for v in 0..pick.len() {
            pick[v] += 1;
            if pick[v] < choices[v].len() {
                continue 'outer;
            }
            pick[v] = 0;
        }
        return Ok(());
    }
}
