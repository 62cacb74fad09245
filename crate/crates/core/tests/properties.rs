use num_traits::{Signed, Zero};
use proptest::prelude::*;

use hkwall::brill_noether::{curve_class, exists_pencil, BnParams};
use hkwall::exact::{int, Int};
use hkwall::lattice::{divisibility, rank2_isometric, saturate, BinaryForm, IntMatrix, LatticeVector, Sublattice};
use hkwall::mukai::{DivisorClass, Surface, SurfaceContext};
use hkwall::wall::{enumerate_witnesses, primitive_dual_divisor, saturated_t, wall_test, WallInput};

fn gram2(a: i64, h: i64, c: i64) -> IntMatrix {
    IntMatrix::from_i64(&[&[a, h], &[h, c]])
}

fn congruent(g: &IntMatrix, p: &IntMatrix) -> IntMatrix {
    p.transpose().mul(g).unwrap().mul(p).unwrap()
}

/// Unimodular 2x2 matrix from a word in the elementary generators.
fn unimodular(word: &[(u8, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(2);
    for &(kind, x) in word {
        let e = match kind % 3 {
            0 => IntMatrix::from_i64(&[&[1, x], &[0, 1]]),
            1 => IntMatrix::from_i64(&[&[1, 0], &[x, 1]]),
            _ => IntMatrix::from_i64(&[&[0, 1], &[1, 0]]),
        };
        m = m.mul(&e).unwrap();
    }
    m
}

/// Complete isometry search for positive definite forms: the columns of a transform
/// represent `a₂` and `c₂`, which confines them to an explicit box.
fn definite_isometric(g1: &IntMatrix, g2: &IntMatrix) -> bool {
    let v = |m: &IntMatrix, i, j| -> i64 { i64::try_from(&m[(i, j)]).unwrap() };
    let (a, h, c) = (v(g1, 0, 0), v(g1, 0, 1), v(g1, 1, 1));
    let (a2, h2, c2) = (v(g2, 0, 0), v(g2, 0, 1), v(g2, 1, 1));
    let det = a * c - h * h;
    let q = |x: i64, y: i64| a * x * x + 2 * h * x * y + c * y * y;
    let b = |x: (i64, i64), y: (i64, i64)| a * x.0 * y.0 + h * (x.0 * y.1 + x.1 * y.0) + c * x.1 * y.1;
    let reps = |n: i64| {
        // x² ≤ n·c/det, y² ≤ n·a/det
        let rx = ((n * c) as f64 / det as f64).sqrt() as i64 + 1;
        let ry = ((n * a) as f64 / det as f64).sqrt() as i64 + 1;
        let mut out = Vec::new();
        for x in -rx..=rx {
            for y in -ry..=ry {
                if q(x, y) == n {
                    out.push((x, y));
                }
            }
        }
        out
    };
    let xs = reps(a2);
    let ys = reps(c2);
    xs.iter()
        .any(|&x| ys.iter().any(|&y| b(x, y) == h2 && (x.0 * y.1 - x.1 * y.0).abs() == 1))
}

fn mukai_model(p: i64) -> hkwall::lattice::GramLattice {
    hkwall::lattice::GramLattice::from_i64(&[&[0, 0, -1], &[0, 2 * p - 2, 0], &[-1, 0, 0]]).unwrap()
}

/// Grid points whose curve class has negative square.
fn negative_points() -> Vec<BnParams> {
    let mut out = Vec::new();
    for surface in Surface::both() {
        for k in 2..7 {
            for p in 2..30 {
                for delta in 0..=p - 2 * surface.epsilon() {
                    let b = BnParams::from_parts(p, delta, k, surface).unwrap();
                    if exists_pencil(&b) && curve_class(&b).square(b.ctx()).is_negative() {
                        out.push(b);
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn definite_isometry_matches_exhaustive_search(
        a in 1i64..=8, h in -8i64..=8, c in 1i64..=8,
        a2 in 1i64..=8, h2 in -8i64..=8, c2 in 1i64..=8,
    ) {
        prop_assume!(a * c - h * h > 0 && a2 * c2 - h2 * h2 > 0);
        let (g1, g2) = (gram2(a, h, c), gram2(a2, h2, c2));
        prop_assert_eq!(rank2_isometric(&g1, &g2).unwrap(), definite_isometric(&g1, &g2));
    }

    #[test]
    fn congruent_forms_are_isometric(
        a in -8i64..=8, h in -8i64..=8, c in -8i64..=8,
        word in proptest::collection::vec((0u8..3, -3i64..=3), 0..6),
    ) {
        let g = gram2(a, h, c);
        let g2 = congruent(&g, &unimodular(&word));
        prop_assert_eq!(
            BinaryForm::from_gram(&g).unwrap().class_id(),
            BinaryForm::from_gram(&g2).unwrap().class_id()
        );
        if !g.determinant().unwrap().is_zero() {
            prop_assert!(rank2_isometric(&g, &g2).unwrap());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(a in -12i64..=12, h in -12i64..=12, c in -12i64..=12) {
        let f = BinaryForm::from_gram(&gram2(a, h, c)).unwrap().canonical();
        prop_assert_eq!(f.canonical(), f.clone());
        prop_assert_eq!(f.discriminant(), Int::from(4 * (h * h - a * c)));
    }

    #[test]
    fn saturation_is_idempotent(
        p in 2i64..12,
        x in proptest::array::uniform3(-6i64..=6),
        y in proptest::array::uniform3(-6i64..=6),
    ) {
        let l = mukai_model(p);
        let sub = Sublattice::new(l, vec![LatticeVector::from_i64(&x), LatticeVector::from_i64(&y)]);
        prop_assume!(sub.is_ok());
        let sub = sub.unwrap();
        let sat = saturate(&sub).unwrap();
        prop_assert_eq!(sat.saturation_index(), Int::from(1));
        let again = saturate(&sat).unwrap();
        prop_assert_eq!(again.basis(), sat.basis());
        // disc(sub) = index² · disc(sat)
        let idx = sub.saturation_index();
        prop_assert_eq!(sub.gram().determinant().unwrap(), &idx * &idx * sat.gram().determinant().unwrap());
        for b in sub.basis() {
            prop_assert!(sat.coordinates_of(b).is_some());
        }
    }

    #[test]
    fn divisibility_scales(p in 2i64..12, x in proptest::array::uniform3(-9i64..=9), n in 1i64..6) {
        prop_assume!(x.iter().any(|&c| c != 0));
        let l = mukai_model(p);
        let v = LatticeVector::from_i64(&x);
        let d1 = divisibility(&v, &l).unwrap();
        let dn = divisibility(&v.scale(&int(n)), &l).unwrap();
        prop_assert_eq!(dn, d1 * int(n));
    }

    #[test]
    fn divisor_divisibility_scales(p in 2i64..20, k in 2i64..8, eps in 0i64..=1, l in -9i64..=9, e in -9i64..=9, n in 1i64..6) {
        prop_assume!(l != 0 || e != 0);
        let ctx = SurfaceContext::new(Surface::from_epsilon(eps).unwrap(), p, k).unwrap();
        let d = DivisorClass::from_ints(&int(l), &int(e));
        let dn = DivisorClass::from_ints(&int(n * l), &int(n * e));
        prop_assert_eq!(dn.divisibility(&ctx).unwrap(), d.divisibility(&ctx).unwrap() * int(n));
    }

    #[test]
    fn witnesses_follow_basis_changes(
        b in proptest::sample::select(negative_points()),
        word in proptest::collection::vec((0u8..3, -2i64..=2), 0..5),
    ) {
        let ctx = b.ctx();
        let surface = ctx.surface();
        let d = primitive_dual_divisor(&curve_class(&b), ctx).unwrap();
        let t = saturated_t(&d.divisor, ctx).unwrap();
        // New basis f_j = Σ_i P_ij e_i: Gram Pᵀ G P, coordinates P⁻¹ x.
        let pm = unimodular(&word);
        let g2 = congruent(&t.gram, &pm);
        let det = pm.determinant().unwrap();
        let inv = |x: &[Int; 2]| -> [Int; 2] {
            [
                (&pm[(1, 1)] * &x[0] - &pm[(0, 1)] * &x[1]) * &det,
                (-&pm[(1, 0)] * &x[0] + &pm[(0, 0)] * &x[1]) * &det,
            ]
        };
        let v2 = inv(&t.v_coords);
        let w1 = enumerate_witnesses(&t.gram, &t.v_coords, surface).unwrap();
        let w2 = enumerate_witnesses(&g2, &v2, surface).unwrap();
        let mut mapped: Vec<_> = w1.iter().map(|w| (w.branch, w.pairing.clone(), w.square.clone(), inv(&w.coords))).collect();
        let mut other: Vec<_> = w2.iter().map(|w| (w.branch, w.pairing.clone(), w.square.clone(), w.coords.clone())).collect();
        mapped.sort();
        other.sort();
        prop_assert_eq!(mapped, other);
    }

    #[test]
    fn verdict_ignores_sign_and_scale(
        eps in 0i64..=1, k in 2i64..7, p in 2i64..30, l in -8i64..=8, e in -40i64..=40, n in 1i64..4,
    ) {
        prop_assume!(l != 0 || e != 0);
        let ctx = SurfaceContext::new(Surface::from_epsilon(eps).unwrap(), p, k).unwrap();
        let d = DivisorClass::from_ints(&int(l), &int(e));
        let neg = DivisorClass::from_ints(&int(-n * l), &int(-n * e));
        let a = wall_test(&WallInput::Divisor(d), &ctx).unwrap();
        let b = wall_test(&WallInput::Divisor(neg), &ctx).unwrap();
        prop_assert_eq!(a.is_wall, b.is_wall);
        prop_assert_eq!(a.witness_count, b.witness_count);
        prop_assert_eq!(a.primitive.divisibility, b.primitive.divisibility);
    }
}
