//! Dense linear algebra over prime fields `F_p` and the closed-form counting
//! functions (group orders, rank counts, Gaussian binomials) used by the
//! backends.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{HallError, Result};

/// A prime field `F_p` with `2 <= p <= 97`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=97).contains(&p) || !is_prime(p) {
            return Err(HallError::Invalid(format!(
                "field size {p} is not a prime in 2..=97"
            )));
        }
        Ok(FieldSpec { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let mut result = 1u32;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        let order = self.p - 1;
        let factors: Vec<u32> = (2..=order).filter(|d| order.is_multiple_of(*d) && is_prime(*d)).collect();
        (1..self.p)
            .find(|&g| {
                factors.iter().all(|&f| {
                    let mut acc = 1;
                    for _ in 0..order / f {
                        acc = self.mul(acc, g);
                    }
                    acc != 1
                })
            })
            .expect("F_p^* is cyclic")
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<u32>,
}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl FFMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        FFMatrix {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries; entries are reduced mod p.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        let p = field.p();
        FFMatrix {
            rows,
            cols,
            field,
            data: data.into_iter().map(|v| v % p).collect(),
        }
    }

    pub fn from_rows(field: FieldSpec, rows: &[&[u32]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_vec(field, rows.len(), cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FFMatrix) -> FFMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p();
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.data[k * other.cols + j]) % p;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FFMatrix) -> FFMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        FFMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FFMatrix) -> FFMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        FFMatrix { data, ..*self }
    }

    pub fn scale(&self, s: u32) -> FFMatrix {
        let f = self.field;
        FFMatrix {
            data: self.data.iter().map(|&a| f.mul(a, s % f.p())).collect(),
            ..*self
        }
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &FFMatrix) -> FFMatrix {
        let mut out = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * out.cols + c] = self.get(r, c);
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.data[(self.rows + r) * out.cols + self.cols + c] = other.get(r, c);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (FFMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in 0..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Columns spanning the kernel, packed as a `cols x nullity` matrix.
    pub fn kernel_matrix(&self) -> FFMatrix {
        let basis = self.kernel_basis();
        let mut k = Self::zeros(self.field, self.cols, basis.len());
        for (j, v) in basis.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                k.data[i * basis.len() + j] = x;
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<FFMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = red.get(r, n + c);
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p();
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect()
    }
}

/// Solution set of an inhomogeneous linear system: a particular solution
/// plus a basis of the homogeneous solutions, or nothing when inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub field: FieldSpec,
    pub particular: Option<Vec<u32>>,
    pub basis: Vec<Vec<u32>>,
}

impl AffineSolution {
    pub fn nullity(&self) -> usize {
        self.basis.len()
    }

    pub fn count(&self) -> BigUint {
        match self.particular {
            None => BigUint::from(0u32),
            Some(_) => BigUint::from(self.field.p()).pow(self.basis.len() as u32),
        }
    }

    /// Enumerates every solution. Each step adds one basis vector per
    /// touched odometer digit, so consecutive solutions cost O(len).
    pub fn iter(&self) -> SolutionIter<'_> {
        SolutionIter {
            sol: self,
            digits: vec![0; self.basis.len()],
            current: self.particular.clone(),
            done: self.particular.is_none(),
        }
    }

    /// Particular solution plus `sum coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let mut v = self.particular.clone()?;
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, *y));
            }
        }
        Some(v)
    }
}

pub struct SolutionIter<'a> {
    sol: &'a AffineSolution,
    digits: Vec<u32>,
    current: Option<Vec<u32>>,
    done: bool,
}

impl Iterator for SolutionIter<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone()?;
        let f = self.sol.field;
        let cur = self.current.as_mut().expect("checked above");
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            for (x, y) in cur.iter_mut().zip(&self.sol.basis[i]) {
                *x = f.add(*x, *y);
            }
            self.digits[i] += 1;
            if self.digits[i] < f.p() {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Solves `A v = b`.
pub fn solve_linear(a: &FFMatrix, b: &[u32]) -> AffineSolution {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let f = a.field();
    let mut aug = FFMatrix::zeros(f, a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            aug.set(r, c, a.get(r, c));
        }
        aug.set(r, a.cols(), b[r]);
    }
    let (red, pivots) = aug.rref();
    let basis = a.kernel_basis();
    if pivots.last() == Some(&a.cols()) {
        return AffineSolution {
            field: f,
            particular: None,
            basis,
        };
    }
    let mut particular = vec![0u32; a.cols()];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = red.get(i, a.cols());
    }
    AffineSolution {
        field: f,
        particular: Some(particular),
        basis,
    }
}

/// Solves `X A - B X = C` for an unknown `X` of the given shape; solutions
/// are row-major flattenings of `X`.
pub fn solve_intertwiner(
    a: &FFMatrix,
    b: &FFMatrix,
    c: &FFMatrix,
    shape: (usize, usize),
) -> Result<AffineSolution> {
    let (xr, xc) = shape;
    if a.rows() != xc || b.cols() != xr || c.rows() != xr || c.cols() != a.cols() || b.rows() != xr
    {
        return Err(HallError::Invalid(format!(
            "incompatible shapes: X {xr}x{xc}, A {}x{}, B {}x{}, C {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let f = a.field();
    // Equation (i, j): sum_k X[i,k] A[k,j] - sum_k B[i,k] X[k,j] = C[i,j].
    let unknowns = xr * xc;
    let mut sys = FFMatrix::zeros(f, xr * a.cols(), unknowns);
    for i in 0..xr {
        for j in 0..a.cols() {
            let eq = i * a.cols() + j;
            for k in 0..xc {
                let idx = eq * unknowns + i * xc + k;
                sys.data[idx] = f.add(sys.data[idx], a.get(k, j));
            }
            for k in 0..xr {
                let idx = eq * unknowns + k * xc + j;
                sys.data[idx] = f.sub(sys.data[idx], b.get(i, k));
            }
        }
    }
    Ok(solve_linear(&sys, c.entries()))
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`; `q` may be any prime power.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qn = q.pow(n as u32);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - q.pow(i as u32)))
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Number of `m x n` matrices over `F_q` of rank exactly `r`: choose the
/// column space, then a surjection onto it.
pub fn count_rank_matrices(m: usize, n: usize, r: usize, q: u64) -> BigUint {
    if r > m.min(n) {
        return BigUint::from(0u32);
    }
    let qb = BigUint::from(q);
    let qn = qb.pow(n as u32);
    let surjections = (0..r).fold(BigUint::one(), |acc, i| acc * (&qn - qb.pow(i as u32)));
    gaussian_binomial(m, r, q) * surjections
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    /// Every `rows x cols` matrix over F_p, by brute force.
    fn all_matrices(p: u32, rows: usize, cols: usize) -> Vec<FFMatrix> {
        let n = rows * cols;
        let total = (p as usize).pow(n as u32);
        (0..total)
            .map(|mut idx| {
                let mut data = vec![0; n];
                for slot in data.iter_mut() {
                    *slot = (idx % p as usize) as u32;
                    idx /= p as usize;
                }
                FFMatrix::from_vec(f(p), rows, cols, data)
            })
            .collect()
    }

    /// Brute-force subspace count: collect distinct rref row spaces of all
    /// k x n matrices of rank k.
    fn brute_subspaces(n: usize, k: usize, p: u32) -> usize {
        let mut seen = std::collections::HashSet::new();
        for m in all_matrices(p, k, n) {
            if m.rank() == k {
                seen.insert(m.rref().0);
            }
        }
        seen.len()
    }

    #[test]
    fn rejects_non_primes() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(101).is_err());
        assert!(FieldSpec::new(97).is_ok());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FFMatrix::identity(f(2), 3).rank(), 3);
        assert_eq!(FFMatrix::zeros(f(3), 2, 4).rank(), 0);
        assert_eq!(FFMatrix::from_rows(f(2), &[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = FFMatrix::from_rows(f(5), &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FFMatrix::identity(f(5), 2));
        assert!(FFMatrix::from_rows(f(2), &[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(f(2).primitive_root(), 1);
        assert_eq!(f(3).primitive_root(), 2);
        assert_eq!(f(7).primitive_root(), 3);
    }

    #[test]
    fn gl_order_matches_enumeration() {
        let brute = |n: usize, p: u32| all_matrices(p, n, n).iter().filter(|m| m.is_invertible()).count();
        assert_eq!(gl_order(0, 2), BigUint::from(1u32));
        assert_eq!(gl_order(1, 7), BigUint::from(6u32));
        assert_eq!(brute(2, 2), 6);
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(brute(2, 3), 48);
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn rank_counts_match_enumeration() {
        for p in [2u32, 3] {
            for m in 0..=3usize {
                for n in 0..=3usize {
                    if p == 3 && m * n > 6 {
                        continue;
                    }
                    let mats = all_matrices(p, m, n);
                    let mut total = BigUint::from(0u32);
                    for r in 0..=m.min(n) + 1 {
                        let brute = mats.iter().filter(|x| x.rank() == r).count();
                        let closed = count_rank_matrices(m, n, r, p as u64);
                        assert_eq!(closed, BigUint::from(brute), "m={m} n={n} r={r} p={p}");
                        total += closed;
                    }
                    assert_eq!(total, BigUint::from(p).pow((m * n) as u32));
                }
            }
        }
        assert_eq!(count_rank_matrices(2, 2, 2, 2), BigUint::from(6u32));
        assert_eq!(count_rank_matrices(2, 3, 1, 2), BigUint::from(21u32));
        assert_eq!(count_rank_matrices(3, 2, 0, 5), BigUint::from(1u32));
    }

    #[test]
    fn gaussian_binomial_examples() {
        for q in [2u64, 3, 5] {
            assert_eq!(gaussian_binomial(2, 1, q), BigUint::from(q + 1));
        }
        assert_eq!(brute_subspaces(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(3, 1, 2), BigUint::from(7u32));
        assert_eq!(brute_subspaces(3, 1, 2), 7);
        assert_eq!(brute_subspaces(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 0, 3), BigUint::from(1u32));
        for n in 0..=6 {
            for k in 0..=n {
                assert_eq!(gaussian_binomial(n, k, 2), gaussian_binomial(n, n - k, 2));
            }
        }
    }

    #[test]
    fn intertwiner_identity_case() {
        let id = FFMatrix::identity(f(2), 2);
        let zero = FFMatrix::zeros(f(2), 2, 2);
        let sol = solve_intertwiner(&id, &id, &zero, (2, 2)).unwrap();
        // X I - I X = 0 holds for every X.
        assert_eq!(sol.count(), BigUint::from(16u32));

        let one = FFMatrix::identity(f(2), 1);
        let z1 = FFMatrix::zeros(f(2), 1, 1);
        let sol = solve_intertwiner(&one, &one, &z1, (1, 1)).unwrap();
        assert_eq!(sol.count(), BigUint::from(2u32));
    }

    #[test]
    fn intertwiner_inconsistent_is_empty() {
        // x*1 - 1*x = 1 has no solution.
        let one = FFMatrix::identity(f(3), 1);
        let sol = solve_intertwiner(&one, &one, &one, (1, 1)).unwrap();
        assert_eq!(sol.count(), BigUint::from(0u32));
        assert_eq!(sol.iter().count(), 0);
    }

    #[test]
    fn intertwiner_matches_brute_filter() {
        let fl = f(2);
        let a = FFMatrix::from_rows(fl, &[&[0, 1], &[0, 0]]);
        let b = FFMatrix::from_rows(fl, &[&[1, 1], &[0, 1]]);
        for c in all_matrices(2, 2, 2) {
            let sol = solve_intertwiner(&a, &b, &c, (2, 2)).unwrap();
            let brute: Vec<FFMatrix> = all_matrices(2, 2, 2)
                .into_iter()
                .filter(|x| x.mul(&a).sub(&b.mul(x)) == c)
                .collect();
            assert_eq!(sol.count(), BigUint::from(brute.len()));
            let mut listed: Vec<Vec<u32>> = sol.iter().collect();
            listed.sort();
            let mut expected: Vec<Vec<u32>> = brute.iter().map(|m| m.entries().to_vec()).collect();
            expected.sort();
            assert_eq!(listed, expected);
        }
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let m = FFMatrix::from_rows(f(3), &[&[1, 2, 0, 1], &[2, 1, 0, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 4 - m.rank());
        for v in k {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }
}
