use std::sync::OnceLock;

use exthall::ff::{count_rank_matrices, gaussian_binomial};
use exthall::graded::{morphisms_with_cone, GradedObject};
use exthall::hall::{euler, parse_rational, rational_string, HallAlgebra, HallElement};
use exthall::linrep::{QuiverSpec, Rep};
use exthall::oracle::Oracle;
use exthall::{Backend, Budget, FFMatrix, FieldSpec, IsoClass, Model, ProductKind, UniverseBound};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn field(p: u32) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn matrix(p: u32, rows: usize, cols: usize) -> impl Strategy<Value = FFMatrix> {
    prop::collection::vec(0..p, rows * cols).prop_map(move |d| FFMatrix::from_vec(field(p), rows, cols, d))
}

fn invertible(p: u32, n: usize) -> impl Strategy<Value = FFMatrix> {
    matrix(p, n, n).prop_filter("invertible", |m| m.is_invertible())
}

struct Fixture {
    backend: Backend,
    universe: Vec<IsoClass>,
}

fn fixture(spec: &'static str, bound: UniverseBound, cell: &'static OnceLock<Fixture>) -> &'static Fixture {
    cell.get_or_init(|| {
        let backend = Backend::from_spec_str(spec, Budget::default()).unwrap();
        let universe = backend.model().classes_up_to(&bound).unwrap();
        Fixture { backend, universe }
    })
}

fn a3() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    fixture("quiver:A3@2", UniverseBound::max_dim(3), &CELL)
}

fn a2_3() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    fixture("quiver:A2@3", UniverseBound::max_dim(3), &CELL)
}

fn graded() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    fixture("graded:@2,window=-1..1", UniverseBound::per_degree(2), &CELL)
}

fn fixtures() -> [&'static Fixture; 3] {
    [a3(), a2_3(), graded()]
}

fn pick(f: &Fixture, i: usize) -> &IsoClass {
    &f.universe[i % f.universe.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(3, r, c))) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        for v in m.kernel_basis() {
            prop_assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..5).prop_flat_map(|n| invertible(5, n))) {
        let inv = m.inverse().unwrap();
        let id = FFMatrix::identity(m.field(), m.rows());
        prop_assert_eq!(m.mul(&inv), id.clone());
        prop_assert_eq!(inv.mul(&m), id);
    }

    #[test]
    fn rank_counts_partition_all_matrices(rows in 0usize..5, cols in 0usize..5, p in prop::sample::select(vec![2u64, 3, 5])) {
        let total: BigUint = (0..=rows.min(cols)).map(|r| count_rank_matrices(rows, cols, r, p)).sum();
        prop_assert_eq!(total, BigUint::from(p).pow((rows * cols) as u32));
    }

    #[test]
    fn gaussian_binomials_are_symmetric(n in 0usize..7, k in 0usize..7) {
        prop_assume!(k <= n);
        prop_assert_eq!(gaussian_binomial(n, k, 3), gaussian_binomial(n, n - k, 3));
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(parse_rational(&rational_string(&r)).unwrap(), r);
    }

    /// Canonical labels survive a random change of basis at every vertex.
    #[test]
    fn labels_ignore_base_change(
        idx in 0usize..1000,
        gs in prop::collection::vec((1usize..4).prop_flat_map(|n| invertible(2, n)), 3),
    ) {
        let f = a3();
        let Backend::Quiver(m) = &f.backend else { unreachable!() };
        let c = pick(f, idx);
        let rep = m.rep(c).unwrap();
        let q = QuiverSpec::linear_a(3);
        let mut g: Vec<FFMatrix> = Vec::new();
        for (v, &d) in rep.dims.iter().enumerate() {
            g.push(if gs[v].rows() == d { gs[v].clone() } else { FFMatrix::identity(m.field(), d) });
        }
        let maps = q
            .arrows()
            .iter()
            .zip(&rep.maps)
            .map(|(&(s, t), a)| g[t].mul(a).mul(&g[s].inverse().unwrap()))
            .collect();
        let moved = Rep { dims: rep.dims.clone(), maps };
        prop_assert_eq!(&m.canonical(&moved).unwrap(), c);
    }

    /// Σ_L |E(Y,X)_L| = |E(Y,X)|.
    #[test]
    fn extension_counts_sum_to_the_group(which in 0usize..3, i in 0usize..1000, j in 0usize..1000) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let (x, y) = (pick(f, i), pick(f, j));
        let total: BigUint = m
            .middle_candidates(x, y)
            .unwrap()
            .iter()
            .map(|l| m.extension_count(y, x, l).unwrap())
            .sum();
        let q = BigUint::from(m.field().p());
        prop_assert_eq!(total, q.pow(m.ext_dim(1, y, x).unwrap() as u32));
        let split = m.dsum(x, y).unwrap();
        prop_assert!(!m.extension_count(y, x, &split).unwrap().is_zero());
    }

    #[test]
    fn zero_object_laws(which in 0usize..3, i in 0usize..1000, j in 0usize..1000) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let (l, y) = (pick(f, i), pick(f, j));
        let z = m.zero();
        let expect = if l == y { BigUint::one() } else { BigUint::zero() };
        prop_assert_eq!(m.inflation_count(&z, l, y).unwrap(), expect.clone());
        prop_assert_eq!(m.deflation_count(l, y, &z).unwrap(), expect);
        prop_assert_eq!(m.hom_dim(&z, l).unwrap(), 0);
        prop_assert_eq!(m.hom_dim(l, &z).unwrap(), 0);
    }

    /// `|Aut X|` counts the units of `End X`; it need not divide `|End X|`
    /// (over F_3, `|End k| = 3` and `|Aut k| = 2`).
    #[test]
    fn automorphisms_are_the_units_of_the_endomorphisms(which in 0usize..3, i in 0usize..1000) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let x = pick(f, i);
        let (a, e) = (m.aut_order(x).unwrap(), m.end_order(x).unwrap());
        prop_assert!(a <= e);
        prop_assert_eq!(a, Oracle::new(&f.backend).brute_aut_order(x).unwrap());
    }

    #[test]
    fn direct_sum_is_commutative_and_associative(which in 0usize..3, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let (x, y, z) = (pick(f, i), pick(f, j), pick(f, k));
        let size = |c: &IsoClass| m.grothendieck(c).unwrap().iter().sum::<i64>();
        prop_assume!(size(x) + size(y) + size(z) <= 4);
        prop_assert_eq!(m.dsum(x, y).unwrap(), m.dsum(y, x).unwrap());
        prop_assert_eq!(m.dsum(&m.dsum(x, y).unwrap(), z).unwrap(), m.dsum(x, &m.dsum(y, z).unwrap()).unwrap());
        prop_assert_eq!(&m.dsum(x, &m.zero()).unwrap(), x);
    }

    #[test]
    fn euler_form_is_additive_on_direct_sums(which in 0usize..3, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let (x, y, t) = (pick(f, i), pick(f, j), pick(f, k));
        let s = m.dsum(x, y).unwrap();
        prop_assert_eq!(euler(m, &s, t).unwrap(), euler(m, x, t).unwrap() + euler(m, y, t).unwrap());
        prop_assert_eq!(euler(m, t, &s).unwrap(), euler(m, t, x).unwrap() + euler(m, t, y).unwrap());
    }

    /// Every morphism `X -> L` has exactly one cone.
    #[test]
    fn cone_counts_cover_hom(
        x in prop::collection::vec(0usize..3, 3),
        l in prop::collection::vec(0usize..3, 3),
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let (xo, lo) = (GradedObject::from_window(0, &x), GradedObject::from_window(0, &l));
        let mut cones = std::collections::BTreeSet::new();
        // Cones of X -> L live in degrees -1..2 with c_n <= l_n + x_{n+1}.
        let caps: Vec<usize> = (-1..=2).map(|n| lo.dim(n) + xo.dim(n + 1)).collect();
        let mut cur = vec![0usize; caps.len()];
        loop {
            cones.insert(GradedObject::from_window(-1, &cur));
            let Some(i) = (0..cur.len()).find(|&i| cur[i] < caps[i]) else { break };
            cur[i] += 1;
            cur[..i].iter_mut().for_each(|c| *c = 0);
        }
        let total: BigUint = cones.iter().map(|y| morphisms_with_cone(p, &xo, &lo, y)).sum();
        let hom: usize = x.iter().zip(&l).map(|(a, b)| a * b).sum();
        prop_assert_eq!(total, BigUint::from(p).pow(hom as u32));
    }

    #[test]
    fn zero_is_a_two_sided_unit(which in 0usize..3, i in 0usize..1000, kind in prop::sample::select(vec![ProductKind::F, ProductKind::G, ProductKind::Twisted])) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let x = pick(f, i);
        let alg = HallAlgebra::new(m);
        let ux = HallElement::basis(x);
        let u0 = HallElement::basis(&m.zero());
        prop_assert_eq!(alg.mul(kind, &u0, &ux).unwrap(), ux.clone());
        prop_assert_eq!(alg.mul(kind, &ux, &u0).unwrap(), ux);
    }

    #[test]
    fn products_are_bilinear(which in 0usize..3, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000, a in -5i64..5, b in 1i64..5) {
        let f = fixtures()[which];
        let m = f.backend.model();
        let alg = HallAlgebra::new(m);
        let c = BigRational::new(BigInt::from(a), BigInt::from(b));
        let (ux, uy, uz) = (HallElement::basis(pick(f, i)), HallElement::basis(pick(f, j)), HallElement::basis(pick(f, k)));
        let lhs = alg.mul(ProductKind::F, &ux.scale(&c).add(&uy), &uz).unwrap();
        let rhs = alg
            .mul(ProductKind::F, &ux, &uz)
            .unwrap()
            .scale(&c)
            .add(&alg.mul(ProductKind::F, &uy, &uz).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
