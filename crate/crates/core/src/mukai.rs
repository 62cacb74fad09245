//! The Picard-rank-one Mukai model.
//!
//! Vectors of `H*(S, Z)` that matter here live in `Z ⊕ Z·L ⊕ Z` and are written
//! `(r, m, s)` for `r·(1,0,0) + m·L + s·(0,0,1)`. The pairing is
//! `m₁m₂(2p−2) − r₁s₂ − s₁r₂`. It is the unique form on this model for which
//! `q(e_k) = −2(k−1+2ε)`, `q(v) = 2k−2+4ε` and `b(v, e_k) = 0`, and the
//! rank-3 model is a saturated sublattice of the full Mukai lattice because `L`
//! is primitive and the `H⁰ ⊕ H⁴` hyperbolic plane is an orthogonal summand.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat_int, Int, Rat};
use crate::lattice::{GramLattice, IntMatrix};

/// Largest absolute value accepted for the integer parameters `p`, `k`, `δ`, ...
/// Keeps the closed-form integer formulas far away from `i128` overflow.
pub const PARAM_LIMIT: i64 = 1_000_000;

/// K3 (`ε = 0`) or abelian (`ε = 1`) surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    K3,
    Abelian,
}

impl Surface {
    pub fn from_epsilon(eps: i64) -> Result<Self> {
        match eps {
            0 => Ok(Surface::K3),
            1 => Ok(Surface::Abelian),
            _ => Err(Error::domain(format!("ε must be 0 (K3) or 1 (abelian), got {eps}"))),
        }
    }

    pub fn epsilon(self) -> i64 {
        match self {
            Surface::K3 => 0,
            Surface::Abelian => 1,
        }
    }

    pub fn both() -> [Surface; 2] {
        [Surface::K3, Surface::Abelian]
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::K3 => "K3",
            Surface::Abelian => "abelian",
        })
    }
}

pub(crate) fn check_param(name: &str, value: i64) -> Result<()> {
    if value.abs() > PARAM_LIMIT {
        return Err(Error::domain(format!("|{name}| = {} exceeds {PARAM_LIMIT}", value.abs())));
    }
    Ok(())
}

/// A polarized surface `(S, L)` of genus `p` together with the number of points `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceContext {
    surface: Surface,
    p: i64,
    k: i64,
}

impl SurfaceContext {
    pub fn new(surface: Surface, p: i64, k: i64) -> Result<Self> {
        check_param("p", p)?;
        check_param("k", k)?;
        if p < 2 {
            return Err(Error::domain(format!("genus must satisfy p ≥ 2, got p = {p}")));
        }
        if k < 2 {
            return Err(Error::domain(format!("k ≥ 2 required, got k = {k}")));
        }
        Ok(SurfaceContext { surface, p, k })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn epsilon(&self) -> i64 {
        self.surface.epsilon()
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// `L² = 2p − 2`.
    pub fn l_square(&self) -> Int {
        int(2 * self.p - 2)
    }

    /// `k − 1 + 2ε`; `q(e_k) = −2·this` and `div(e_k) = 2·this`.
    pub fn t(&self) -> i64 {
        self.k - 1 + 2 * self.epsilon()
    }

    /// `2(k − 1 + 2ε)`, the denominator relating `r_k` and `e_k`.
    pub fn e_divisibility(&self) -> Int {
        int(2 * self.t())
    }

    /// `q(v) = 2k − 2 + 4ε`.
    pub fn v_square(&self) -> Int {
        int(2 * self.t())
    }

    /// Gram matrix of the rank-3 model in the basis `(1,0,0), L, (0,0,1)`.
    pub fn model_lattice(&self) -> GramLattice {
        let mut g = IntMatrix::zeros(3, 3);
        g[(0, 2)] = -Int::one();
        g[(2, 0)] = -Int::one();
        g[(1, 1)] = self.l_square();
        GramLattice::new(g).expect("symmetric")
    }
}

/// `r·(1,0,0) + m·L + s·(0,0,1)` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiTriple {
    pub r: Rat,
    pub m: Rat,
    pub s: Rat,
}

impl MukaiTriple {
    pub fn new(r: Rat, m: Rat, s: Rat) -> Self {
        MukaiTriple { r, m, s }
    }

    pub fn from_ints(r: &Int, m: &Int, s: &Int) -> Self {
        MukaiTriple::new(rat_int(r), rat_int(m), rat_int(s))
    }

    pub fn from_i64(r: i64, m: i64, s: i64) -> Self {
        MukaiTriple::from_ints(&int(r), &int(m), &int(s))
    }

    pub fn is_integral(&self) -> bool {
        self.r.is_integer() && self.m.is_integer() && self.s.is_integer()
    }

    pub fn to_integers(&self) -> Option<[Int; 3]> {
        self.is_integral()
            .then(|| [self.r.to_integer(), self.m.to_integer(), self.s.to_integer()])
    }

    pub fn scale(&self, c: &Rat) -> Self {
        MukaiTriple::new(&self.r * c, &self.m * c, &self.s * c)
    }

    pub fn add(&self, o: &MukaiTriple) -> Self {
        MukaiTriple::new(&self.r + &o.r, &self.m + &o.m, &self.s + &o.s)
    }

    pub fn sub(&self, o: &MukaiTriple) -> Self {
        MukaiTriple::new(&self.r - &o.r, &self.m - &o.m, &self.s - &o.s)
    }
}

impl fmt::Display for MukaiTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.m, self.s)
    }
}

/// A divisor class `l·L + e·e_k` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub l: Rat,
    pub e: Rat,
}

impl DivisorClass {
    pub fn new(l: Rat, e: Rat) -> Self {
        DivisorClass { l, e }
    }

    pub fn from_ints(l: &Int, e: &Int) -> Self {
        DivisorClass::new(rat_int(l), rat_int(e))
    }

    pub fn is_integral(&self) -> bool {
        self.l.is_integer() && self.e.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_zero() && self.e.is_zero()
    }

    /// `q(D) = l²(2p−2) − 2(k−1+2ε)·e²`.
    pub fn square(&self, ctx: &SurfaceContext) -> Rat {
        &self.l * &self.l * rat_int(&ctx.l_square()) - &self.e * &self.e * rat_int(&ctx.e_divisibility())
    }

    /// Divisibility in `H²(X, Z) = H²(S, Z) ⊕ Z·e_k`: `gcd(l, 2(k−1+2ε)·e)`,
    /// using that `H²(S, Z)` is unimodular and `L` primitive in it.
    pub fn divisibility(&self, ctx: &SurfaceContext) -> Result<Int> {
        if !self.is_integral() {
            return Err(Error::domain("divisibility needs an integral divisor class"));
        }
        if self.is_zero() {
            return Err(Error::domain("divisibility of the zero class is undefined"));
        }
        let l = self.l.to_integer();
        let e = self.e.to_integer();
        Ok(l.gcd(&(ctx.e_divisibility() * e)))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·L + {}·e", self.l, self.e)
    }
}

/// A curve class `l·L + r·r_k` in `N₁ = Z·L ⊕ Z·r_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub l: Int,
    pub r: Int,
}

impl CurveClass {
    pub fn new(l: Int, r: Int) -> Self {
        CurveClass { l, r }
    }

    pub fn from_i64(l: i64, r: i64) -> Self {
        CurveClass::new(int(l), int(r))
    }

    pub fn is_zero(&self) -> bool {
        self.l.is_zero() && self.r.is_zero()
    }

    /// The same class as a rational divisor, `r_k = e_k / 2(k−1+2ε)`.
    pub fn to_divisor(&self, ctx: &SurfaceContext) -> DivisorClass {
        DivisorClass::new(rat_int(&self.l), Rat::new(self.r.clone(), ctx.e_divisibility()))
    }

    /// `q(R) = l²(2p−2) − r²/(2(k−1+2ε))`.
    pub fn square(&self, ctx: &SurfaceContext) -> Rat {
        self.to_divisor(ctx).square(ctx)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.r.is_negative() { '-' } else { '+' };
        write!(f, "{}L {} {}r", self.l, sign, self.r.abs())
    }
}

/// Bilinear form of the Mukai model.
pub fn mukai_pairing(a: &MukaiTriple, b: &MukaiTriple, ctx: &SurfaceContext) -> Rat {
    &a.m * &b.m * rat_int(&ctx.l_square()) - &a.r * &b.s - &a.s * &b.r
}

pub fn mukai_square(a: &MukaiTriple, ctx: &SurfaceContext) -> Rat {
    mukai_pairing(a, a, ctx)
}

/// `v = (1, 0, 1 − 2ε − k)`, the Mukai vector of the ideal sheaf of `k + ε` points.
pub fn hilb_vector(ctx: &SurfaceContext) -> MukaiTriple {
    MukaiTriple::from_i64(1, 0, 1 - 2 * ctx.epsilon() - ctx.k())
}

/// Image `(1, 0, k − 1 + 2ε)` of `e_k` in `v^⊥`.
pub fn ek_vector(ctx: &SurfaceContext) -> MukaiTriple {
    MukaiTriple::from_i64(1, 0, ctx.t())
}

/// Linear embedding `Pic ⊗ Q → v^⊥ ⊗ Q`: `L ↦ (0,1,0)`, `e_k ↦ (1, 0, k−1+2ε)`.
pub fn embed_divisor(d: &DivisorClass, ctx: &SurfaceContext) -> MukaiTriple {
    MukaiTriple::new(Rat::zero(), d.l.clone(), Rat::zero()).add(&ek_vector(ctx).scale(&d.e))
}

/// Mukai vector `(2, L, χ + 2(ε−1))` of the Lazarsfeld–Mukai bundle of a
/// `δ`-nodal curve in `|L|` with a `g¹_{k+ε}` on its normalization, and
/// `χ = p − δ − k + 3 − 5ε`.
pub fn lm_mukai_vector(p: i64, delta: i64, k: i64, surface: Surface) -> Result<(MukaiTriple, i64)> {
    for (n, x) in [("p", p), ("δ", delta), ("k", k)] {
        check_param(n, x)?;
    }
    if delta < 0 {
        return Err(Error::domain(format!("δ ≥ 0 required, got δ = {delta}")));
    }
    let eps = surface.epsilon();
    let chi = p - delta - k + 3 - 5 * eps;
    Ok((MukaiTriple::from_i64(2, 1, chi + 2 * (eps - 1)), chi))
}

/// `dim M = 2p − 4χ + 8(1 − ε)` for the moduli space containing the
/// Lazarsfeld–Mukai bundle.
pub fn moduli_dim(p: i64, delta: i64, k: i64, surface: Surface) -> Result<i64> {
    let (_, chi) = lm_mukai_vector(p, delta, k, surface)?;
    let dim = 2 * p - 4 * chi + 8 * (1 - surface.epsilon());
    if dim < 0 {
        return Err(Error::domain(format!(
            "parameters outside moduli regime: dim M = 2p − 4χ + 8(1−ε) = {dim} < 0"
        )));
    }
    Ok(dim)
}
