//! Integral binary quadratic forms up to GL₂(Z), used to decide isometry of rank-2 lattices.
//!
//! A Gram matrix `[[a, h], [h, c]]` is the form `a·x² + 2h·xy + c·y²`. Every nonzero
//! form is sent to a canonical representative of its GL₂(Z)-class:
//!
//! * definite: the classical reduced form (`|b| ≤ a ≤ c`), with `b ≥ 0` since the
//!   improper map `x ↦ −x` flips the middle coefficient;
//! * indefinite, non-square discriminant: the smallest form on the cycle of
//!   reduced forms of either the form or its improper conjugate;
//! * indefinite, square discriminant `n²`: a form `(0, n, c)` with `0 ≤ c < n`,
//!   minimized over both isotropic lines;
//! * degenerate: `(±g, 0, 0)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::exact::{ext_gcd, is_square, isqrt, Int};

/// `a·x² + b·xy + c·y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl BinaryForm {
    pub fn new(a: Int, b: Int, c: Int) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn from_gram(gram: &IntMatrix) -> Result<Self> {
        if gram.nrows() != 2 || gram.ncols() != 2 {
            return Err(Error::contract("expected a 2x2 Gram matrix"));
        }
        if gram[(0, 1)] != gram[(1, 0)] {
            return Err(Error::contract("Gram matrix must be symmetric"));
        }
        Ok(BinaryForm {
            a: gram[(0, 0)].clone(),
            b: &gram[(0, 1)] * 2,
            c: gram[(1, 1)].clone(),
        })
    }

    /// Gram matrix, if the middle coefficient is even.
    pub fn to_gram(&self) -> Option<IntMatrix> {
        if self.b.is_odd() {
            return None;
        }
        let h: Int = &self.b / 2;
        IntMatrix::from_rows(vec![vec![self.a.clone(), h.clone()], vec![h, self.c.clone()]]).ok()
    }

    /// `b² − 4ac`; for a Gram matrix this is `−4·det`.
    pub fn discriminant(&self) -> Int {
        &self.b * &self.b - Int::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &Int, y: &Int) -> Int {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    fn neg(&self) -> Self {
        BinaryForm::new(-&self.a, -&self.b, -&self.c)
    }

    fn conjugate(&self) -> Self {
        BinaryForm::new(self.a.clone(), -&self.b, self.c.clone())
    }

    /// `f(p·X + q·Y, r·X + s·Y)`.
    pub fn transform(&self, p: &Int, q: &Int, r: &Int, s: &Int) -> Self {
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = Int::from(2) * &self.a * p * q + &self.b * (p * s + q * r) + Int::from(2) * &self.c * r * s;
        BinaryForm::new(a, b, c)
    }

    /// Canonical representative of the GL₂(Z)-class.
    pub fn canonical(&self) -> BinaryForm {
        let d = self.discriminant();
        if d.is_zero() {
            canonical_degenerate(self)
        } else if d.is_negative() {
            if self.a.is_negative() || (self.a.is_zero() && self.c.is_negative()) {
                canonical_definite(&self.neg()).neg()
            } else {
                canonical_definite(self)
            }
        } else if is_square(&d) {
            canonical_split(self, &isqrt(&d))
        } else {
            let f = cycle_min(self, &d);
            let g = cycle_min(&self.conjugate(), &d);
            f.min(g)
        }
    }

    /// Stable textual identifier of the class: the canonical form as a Gram matrix
    /// `[a,h;h,c]` when `b` is even, else `(a,b,c)`.
    pub fn class_id(&self) -> String {
        let f = self.canonical();
        match f.to_gram() {
            Some(_) => {
                let h = &f.b / 2;
                format!("[{},{};{},{}]", f.a, h, h, f.c)
            }
            None => format!("({},{},{})", f.a, f.b, f.c),
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Whether two nondegenerate 2×2 Gram matrices are isometric over Z.
pub fn rank2_isometric(g1: &IntMatrix, g2: &IntMatrix) -> Result<bool> {
    let f1 = BinaryForm::from_gram(g1)?;
    let f2 = BinaryForm::from_gram(g2)?;
    if f1.discriminant().is_zero() || f2.discriminant().is_zero() {
        return Err(Error::domain("isometry test requires nondegenerate Gram matrices"));
    }
    if f1.discriminant() != f2.discriminant() {
        return Ok(false);
    }
    Ok(f1.canonical() == f2.canonical())
}

fn canonical_degenerate(f: &BinaryForm) -> BinaryForm {
    // f = ±g·(αx + βy)² with gcd(α, β) = 1, and αx + βy extends to a basis.
    let g = f.a.gcd(&f.c);
    if g.is_zero() {
        return BinaryForm::new(Int::zero(), Int::zero(), Int::zero());
    }
    let negative = f.a.is_negative() || f.c.is_negative();
    BinaryForm::new(if negative { -g } else { g }, Int::zero(), Int::zero())
}

fn canonical_definite(f: &BinaryForm) -> BinaryForm {
    let mut f = f.clone();
    normalize_definite(&mut f);
    while f.a > f.c || (f.a == f.c && f.b.is_negative()) {
        std::mem::swap(&mut f.a, &mut f.c);
        f.b = -&f.b;
        normalize_definite(&mut f);
    }
    f.b = f.b.abs();
    f
}

/// Moves `b` into `(−a, a]` by `x ↦ x + t·y`.
fn normalize_definite(f: &mut BinaryForm) {
    let two_a = &f.a * 2;
    let shifted = (&f.b + &f.a - Int::one()).mod_floor(&two_a) - &f.a + Int::one();
    let t = (&shifted - &f.b) / &two_a;
    f.c = &f.a * &t * &t + &f.b * &t + &f.c;
    f.b = shifted;
}

fn canonical_split(f: &BinaryForm, n: &Int) -> BinaryForm {
    let mut candidates = Vec::with_capacity(2);
    for (x, y) in isotropic_lines(f, n) {
        // Complete (x, y) to a unimodular matrix [[x, u], [y, w]].
        let (_, s, t) = ext_gcd(&x, &y);
        let (u, w) = (-t, s);
        let mut g = f.transform(&x, &u, &y, &w);
        debug_assert!(g.a.is_zero());
        if g.b.is_negative() {
            g = g.transform(&-Int::one(), &Int::zero(), &Int::zero(), &Int::one());
        }
        g.c = g.c.mod_floor(&g.b);
        candidates.push(g);
    }
    candidates.into_iter().min().expect("a split form has isotropic vectors")
}

/// Primitive generators of the (one or two) isotropic lines of a form with square discriminant n².
fn isotropic_lines(f: &BinaryForm, n: &Int) -> Vec<(Int, Int)> {
    let prim = |x: Int, y: Int| {
        let g = x.gcd(&y);
        (x / &g, y / &g)
    };
    if f.a.is_zero() {
        // f = y·(b·x + c·y): lines y = 0 and b·x + c·y = 0.
        let mut v = vec![(Int::one(), Int::zero())];
        if !f.b.is_zero() {
            v.push(prim(f.c.clone(), -&f.b));
        }
        return v;
    }
    let two_a: Int = &f.a * 2;
    let mut v = vec![prim(-&f.b + n, two_a.clone())];
    if !n.is_zero() {
        v.push(prim(-&f.b - n, two_a));
    }
    v
}

fn cycle_min(f: &BinaryForm, d: &Int) -> BinaryForm {
    let s = isqrt(d);
    let mut g = f.clone();
    let mut guard = 0usize;
    while !is_reduced_indefinite(&g, &s) {
        g = rho(&g, d, &s);
        guard += 1;
        assert!(guard < 100_000, "indefinite reduction did not terminate");
    }
    let start = g.clone();
    let mut best = g.clone();
    loop {
        g = rho(&g, d, &s);
        if g == start {
            break;
        }
        if g < best {
            best = g.clone();
        }
    }
    best
}

/// Reduced: `|√D − 2|a|| < b < √D`, with `s = ⌊√D⌋` and `D` not a square.
fn is_reduced_indefinite(f: &BinaryForm, s: &Int) -> bool {
    let two_a = f.a.abs() * 2;
    f.b <= *s && &f.b + &two_a > *s && &two_a - &f.b <= *s
}

fn rho(f: &BinaryForm, d: &Int, s: &Int) -> BinaryForm {
    // (a, b, c) ↦ normalize(c, −b, a)
    let a = f.c.clone();
    let b = -&f.b;
    let abs_a = a.abs();
    let m = &abs_a * 2;
    let b2 = if abs_a > *s {
        (&b + &abs_a - Int::one()).mod_floor(&m) - &abs_a + Int::one()
    } else {
        s - (s - &b).mod_floor(&m)
    };
    let c2 = (&b2 * &b2 - d) / (&a * 4);
    BinaryForm::new(a, b2, c2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, h: i64, c: i64) -> IntMatrix {
        IntMatrix::from_i64(&[&[a, h], &[h, c]])
    }

    #[test]
    fn isometry_examples() {
        assert!(rank2_isometric(&g(2, 1, -2), &g(-2, 1, 2)).unwrap());
        assert!(!rank2_isometric(&g(-2, 3, 6), &g(-2, 2, 6)).unwrap());
        assert!(rank2_isometric(&g(2, 3, 2), &g(-2, 1, 2)).unwrap());
        assert!(matches!(rank2_isometric(&g(0, 0, 2), &g(0, 0, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn definite_reduction() {
        let f = BinaryForm::new(Int::from(41), Int::from(49), Int::from(16));
        let c = f.canonical();
        assert_eq!(c, BinaryForm::new(Int::from(7), Int::from(1), Int::from(8)));
        let neg = BinaryForm::new(Int::from(-3), Int::from(2), Int::from(-5));
        assert_eq!(neg.canonical(), BinaryForm::new(Int::from(-3), Int::from(-2), Int::from(-5)));
    }

    #[test]
    fn split_forms() {
        // x·y scaled: hyperbolic plane U(3) versus (0, 6, 6)
        let u3 = BinaryForm::from_gram(&g(0, 3, 0)).unwrap();
        assert_eq!(u3.canonical(), BinaryForm::new(Int::zero(), Int::from(6), Int::zero()));
        let f = BinaryForm::from_gram(&g(0, 3, 6)).unwrap();
        assert_eq!(f.canonical(), BinaryForm::new(Int::zero(), Int::from(6), Int::zero()));
        let h = BinaryForm::from_gram(&g(2, 3, 4)).unwrap();
        assert_eq!(h.discriminant(), Int::from(4));
    }

    #[test]
    fn degenerate_canonical() {
        let f = BinaryForm::from_gram(&g(4, 6, 9)).unwrap();
        assert_eq!(f.canonical(), BinaryForm::new(Int::one(), Int::zero(), Int::zero()));
        let f = BinaryForm::from_gram(&g(0, 0, -2)).unwrap();
        assert_eq!(f.canonical(), BinaryForm::new(Int::from(-2), Int::zero(), Int::zero()));
        assert_eq!(BinaryForm::from_gram(&g(0, 0, 0)).unwrap().class_id(), "[0,0;0,0]");
    }

    #[test]
    fn class_id_format() {
        assert_eq!(BinaryForm::from_gram(&g(2, 1, -2)).unwrap().class_id(),
                   BinaryForm::from_gram(&g(-2, 1, 2)).unwrap().class_id());
    }
}
