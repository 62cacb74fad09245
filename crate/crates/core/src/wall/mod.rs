//! Wall-divisor decision procedure on `S^[k]_ε`.
//!
//! A divisor `D` with `q(D) < 0` is a wall divisor exactly when the saturation `T`
//! of `⟨v, D⟩` inside the Mukai lattice contains an `s` with
//!
//! * (i)  `0 ≤ q(s) < b(s,v) ≤ (q(v) + q(s))/2`, or
//! * (ii) `ε = 0`, `q(s) = −2` and `0 ≤ b(s,v) ≤ q(v)/2`.
//!
//! `T` is indefinite, so on each affine line `b(s, v) = n` the form restricts to a
//! downward parabola. Case (i) forces `0 < n < q(v)` and case (ii) `0 ≤ n ≤ q(v)/2`,
//! so the search is a finite family of one-variable quadratic inequalities.

pub mod oracle;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_div, ext_gcd, floor_div, isqrt, Int, Rat};
use crate::lattice::{saturate, IntMatrix, LatticeVector, Sublattice};
use crate::mukai::{
    embed_divisor, hilb_vector, mukai_pairing, CurveClass, DivisorClass, MukaiTriple, Surface,
    SurfaceContext,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `0 ≤ q(s) < b(s,v) ≤ (q(v)+q(s))/2`
    CaseI,
    /// `ε = 0`, `q(s) = −2`, `0 ≤ b(s,v) ≤ q(v)/2`
    CaseII,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::CaseI => "case_i",
            Branch::CaseII => "case_ii",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An element `s ∈ T` satisfying one of the two criteria, in `T`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeWitness {
    pub coords: [Int; 2],
    pub branch: Branch,
    /// `b(s, v)`
    pub pairing: Int,
    /// `q(s)`
    pub square: Int,
}

impl LatticeWitness {
    fn sort_key(&self) -> (Branch, &Int, &Int, &[Int; 2]) {
        (self.branch, &self.pairing, &self.square, &self.coords)
    }
}

impl Ord for LatticeWitness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for LatticeWitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks the criteria for a single vector given `q(s)`, `b(s,v)` and `q(v)`.
pub fn classify(square: &Int, pairing: &Int, v_square: &Int, surface: Surface) -> Option<Branch> {
    let case_i = !square.is_negative()
        && square < pairing
        && Int::from(2) * pairing <= v_square + square;
    if case_i {
        return Some(Branch::CaseI);
    }
    let case_ii = surface == Surface::K3
        && *square == Int::from(-2)
        && !pairing.is_negative()
        && Int::from(2) * pairing <= *v_square;
    case_ii.then_some(Branch::CaseII)
}

/// Primitive integral divisor positively proportional to a class, with bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDual {
    /// Integral and primitive in `Pic = Z·L ⊕ Z·e_k`.
    pub divisor: DivisorClass,
    pub l: Int,
    pub e: Int,
    /// `div(D)` in `H²(X, Z)`.
    pub divisibility: Int,
    /// `input = scale · D` (as rational divisor classes).
    pub scale: Rat,
}

/// The primitive divisor dual to a curve class: `R = m·D/div(D)` where `m` is the
/// gcd of the coefficients of `R` (returned as `scale / div(D)`).
pub fn primitive_dual_divisor(curve: &CurveClass, ctx: &SurfaceContext) -> Result<PrimitiveDual> {
    if curve.is_zero() {
        return Err(Error::domain("the zero curve class has no dual divisor"));
    }
    primitive_divisor(&curve.to_divisor(ctx), ctx)
}

/// Scales a nonzero rational divisor class to the primitive integral class on its ray.
pub fn primitive_divisor(d: &DivisorClass, ctx: &SurfaceContext) -> Result<PrimitiveDual> {
    if d.is_zero() {
        return Err(Error::domain("the zero divisor class has no primitive multiple"));
    }
    let den = d.l.denom().lcm(d.e.denom());
    let l = d.l.numer() * (&den / d.l.denom());
    let e = d.e.numer() * (&den / d.e.denom());
    let g = l.gcd(&e);
    let (l, e) = (l / &g, e / &g);
    let divisor = DivisorClass::from_ints(&l, &e);
    let divisibility = divisor.divisibility(ctx)?;
    let scale = Rat::new(g, den);
    Ok(PrimitiveDual { divisor, l, e, divisibility, scale })
}

/// The saturated lattice `T ⊃ ⟨v, D⟩` in the basis `(w, v)`.
///
/// `w` is normalized so that `0 ≤ b(w, v) ≤ q(v)/2`; this fixes the Gram matrix
/// `[[q(w), b(w,v)], [b(w,v), q(v)]]` uniquely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedLattice {
    pub gram: IntMatrix,
    /// `[w, v]` in Mukai coordinates `(r, m, s)`.
    pub basis: [[Int; 3]; 2],
    /// Coordinates of `v` in `basis`, always `(0, 1)`.
    pub v_coords: [Int; 2],
    /// `[T : ⟨v, D⟩]`.
    pub index: Int,
}

impl SaturatedLattice {
    pub fn discriminant(&self) -> Int {
        self.gram.determinant().expect("2x2")
    }

    /// Ambient Mukai vector of an element given in `T`-coordinates.
    pub fn to_ambient(&self, coords: &[Int; 2]) -> [Int; 3] {
        std::array::from_fn(|i| &coords[0] * &self.basis[0][i] + &coords[1] * &self.basis[1][i])
    }

    pub fn gram_row_major(&self) -> [Int; 4] {
        [
            self.gram[(0, 0)].clone(),
            self.gram[(0, 1)].clone(),
            self.gram[(1, 0)].clone(),
            self.gram[(1, 1)].clone(),
        ]
    }
}

fn triple_ints(t: &MukaiTriple) -> [Int; 3] {
    t.to_integers().expect("integral Mukai vector")
}

fn pair3(a: &[Int; 3], b: &[Int; 3], ctx: &SurfaceContext) -> Int {
    &a[1] * &b[1] * ctx.l_square() - &a[0] * &b[2] - &a[2] * &b[0]
}

/// Saturation of `⟨v, D⟩` for an integral divisor with `q(D) < 0`.
pub fn saturated_t(d: &DivisorClass, ctx: &SurfaceContext) -> Result<SaturatedLattice> {
    if !d.is_integral() {
        return Err(Error::contract("saturated_t expects an integral divisor class"));
    }
    if !d.square(ctx).is_negative() {
        return Err(Error::domain("criterion applies only to negative classes (q(D) < 0)"));
    }
    saturate_with_v(d, ctx)
}

/// Same as [`saturated_t`] without the sign requirement; `D` must not be a multiple of `v`
/// (it never is, since `D ∈ v^⊥` and `q(v) > 0`, unless `D = 0`).
pub fn saturate_with_v(d: &DivisorClass, ctx: &SurfaceContext) -> Result<SaturatedLattice> {
    let v = triple_ints(&hilb_vector(ctx));
    let dv = embed_divisor(d, ctx)
        .to_integers()
        .ok_or_else(|| Error::contract("divisor embeds to a non-integral Mukai vector"))?;
    let sub = Sublattice::new(
        ctx.model_lattice(),
        vec![LatticeVector::new(v.to_vec()), LatticeVector::new(dv.to_vec())],
    )?;
    let index = sub.saturation_index();
    let sat = saturate(&sub)?;
    let h: Vec<[Int; 3]> = sat
        .basis()
        .iter()
        .map(|b| std::array::from_fn(|i| b.coords[i].clone()))
        .collect();
    let vc = sat
        .coordinates_of(&LatticeVector::new(v.to_vec()))
        .expect("v lies in its own saturation");
    // (v, w0) = [[a, b], [−t, s]]·(h₀, h₁) with a·s + b·t = 1.
    let (g, s, t) = ext_gcd(&vc[0], &vc[1]);
    debug_assert!(g.is_one(), "v is primitive in T");
    let comb = |x: &Int, y: &Int| -> [Int; 3] { std::array::from_fn(|i| x * &h[0][i] + y * &h[1][i]) };
    let mut w = comb(&-t, &s);

    let qv = ctx.v_square();
    let n = pair3(&w, &v, ctx);
    let r = n.mod_floor(&qv);
    let flip = Int::from(2) * &r > qv;
    let target = if flip { &qv - &r } else { r };
    if flip {
        w = std::array::from_fn(|i| -&w[i]);
    }
    let current = if flip { -n } else { n };
    let j = (&target - &current) / &qv;
    let w: [Int; 3] = std::array::from_fn(|i| &w[i] + &j * &v[i]);

    let qw = pair3(&w, &w, ctx);
    let bwv = pair3(&w, &v, ctx);
    debug_assert_eq!(bwv, target);
    let gram = IntMatrix::from_rows(vec![vec![qw, bwv.clone()], vec![bwv, qv]])?;
    Ok(SaturatedLattice { gram, basis: [w, v], v_coords: [Int::zero(), Int::one()], index })
}

fn check_t(gram: &IntMatrix, v_coords: &[Int; 2]) -> Result<([Int; 2], Int)> {
    if gram.nrows() != 2 || gram.ncols() != 2 || gram[(0, 1)] != gram[(1, 0)] {
        return Err(Error::contract("T must be given by a symmetric 2x2 Gram matrix"));
    }
    if !gram.determinant()?.is_negative() {
        return Err(Error::domain("T must be nondegenerate of signature (1,1)"));
    }
    let u = [
        &gram[(0, 0)] * &v_coords[0] + &gram[(0, 1)] * &v_coords[1],
        &gram[(1, 0)] * &v_coords[0] + &gram[(1, 1)] * &v_coords[1],
    ];
    let qv = &u[0] * &v_coords[0] + &u[1] * &v_coords[1];
    if !qv.is_positive() {
        return Err(Error::domain("q(v) must be positive"));
    }
    Ok((u, qv))
}

fn form2(gram: &IntMatrix, x: &[Int; 2], y: &[Int; 2]) -> Int {
    &x[0] * (&gram[(0, 0)] * &y[0] + &gram[(0, 1)] * &y[1])
        + &x[1] * (&gram[(1, 0)] * &y[0] + &gram[(1, 1)] * &y[1])
}

/// Integers `t` with `A·t² + 2B·t + C ≥ lo`, for `A < 0`, returned as a closed range.
fn parabola_range(a: &Int, b: &Int, c: &Int, lo: &Int) -> Option<(Int, Int)> {
    // −A·t² − 2B·t − (C − lo) ≤ 0  ⇔  t ∈ [(B − √Δ)/(−A)·(−1)...]; with A' = −A:
    // A'·t² − 2B·t − C' ≤ 0, roots (B ± √(B² + A'·C'))/A'.
    let ap = -a;
    let cp = c - lo;
    let disc = b * b + &ap * &cp;
    if disc.is_negative() {
        return None;
    }
    let root = isqrt(&disc);
    // Widen by one on each side; the caller filters exactly.
    let lo_t = floor_div(&(b - &root - Int::one()), &ap);
    let hi_t = ceil_div(&(b + &root + Int::one()), &ap);
    Some((lo_t, hi_t))
}

/// All `s ∈ T` satisfying (i), plus those satisfying (ii) when `ε = 0`, sorted by
/// `(branch, b(s,v), q(s), coordinates)`.
pub fn enumerate_witnesses(
    gram: &IntMatrix,
    v_coords: &[Int; 2],
    surface: Surface,
) -> Result<Vec<LatticeWitness>> {
    let (u, qv) = check_t(gram, v_coords)?;
    let (g, x0, y0) = ext_gcd(&u[0], &u[1]);
    // Direction of the lines b(s, v) = n; q is negative definite on it.
    let dir = [&u[1] / &g, -(&u[0] / &g)];
    let a = form2(gram, &dir, &dir);
    debug_assert!(a.is_negative());

    let mut out = Vec::new();
    let mut scan_line = |n: &Int, lo: &Int, hi: &Int| {
        if !n.is_multiple_of(&g) {
            return;
        }
        let f = n / &g;
        let base = [&x0 * &f, &y0 * &f];
        let b = form2(gram, &base, &dir);
        let c = form2(gram, &base, &base);
        let Some((t_lo, t_hi)) = parabola_range(&a, &b, &c, lo) else { return };
        let mut t = t_lo;
        while t <= t_hi {
            let q = &a * &t * &t + Int::from(2) * &b * &t + &c;
            if &q >= lo && &q <= hi {
                let coords = [&base[0] + &t * &dir[0], &base[1] + &t * &dir[1]];
                if let Some(branch) = classify(&q, n, &qv, surface) {
                    out.push(LatticeWitness { coords, branch, pairing: n.clone(), square: q });
                }
            }
            t += 1;
        }
    };

    // (i): 0 < n < q(v) and max(0, 2n − q(v)) ≤ q(s) ≤ n − 1.
    let mut n = Int::one();
    while n < qv {
        let lo = (Int::from(2) * &n - &qv).max(Int::zero());
        let hi = &n - Int::one();
        if lo <= hi {
            scan_line(&n, &lo, &hi);
        }
        n += 1;
    }
    // (ii): q(s) = −2 and 0 ≤ 2n ≤ q(v).
    if surface == Surface::K3 {
        let minus_two = Int::from(-2);
        let mut n = Int::zero();
        while Int::from(2) * &n <= qv {
            scan_line(&n, &minus_two, &minus_two);
            n += 1;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A witness together with its ambient Mukai vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub lattice: LatticeWitness,
    pub ambient: [Int; 3],
}

/// Why a verdict is negative without running the lattice search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shortcut {
    /// `q(D) ≥ 0`: wall divisors are negative by definition.
    NonnegativeSquare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallVerdict {
    pub is_wall: bool,
    pub witness: Option<Witness>,
    pub branch: Option<Branch>,
    pub shortcut: Option<Shortcut>,
    /// `None` when `q(D) ≥ 0`.
    pub lattice: Option<SaturatedLattice>,
    pub primitive: PrimitiveDual,
    /// `q` of the primitive divisor.
    pub divisor_square: Rat,
    /// All witnesses found (empty on shortcut).
    pub witness_count: usize,
}

impl WallVerdict {
    pub fn branch_tag(&self) -> &'static str {
        match (self.branch, self.shortcut) {
            (Some(b), _) => b.tag(),
            (None, Some(Shortcut::NonnegativeSquare)) => "nonnegative-square",
            (None, None) => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallInput {
    Curve(CurveClass),
    Divisor(DivisorClass),
}

pub fn wall_test(input: &WallInput, ctx: &SurfaceContext) -> Result<WallVerdict> {
    let primitive = match input {
        WallInput::Curve(c) => primitive_dual_divisor(c, ctx)?,
        WallInput::Divisor(d) => primitive_divisor(d, ctx)?,
    };
    let divisor_square = primitive.divisor.square(ctx);
    if !divisor_square.is_negative() {
        return Ok(WallVerdict {
            is_wall: false,
            witness: None,
            branch: None,
            shortcut: Some(Shortcut::NonnegativeSquare),
            lattice: None,
            primitive,
            divisor_square,
            witness_count: 0,
        });
    }
    let t = saturated_t(&primitive.divisor, ctx)?;
    let all = enumerate_witnesses(&t.gram, &t.v_coords, ctx.surface())?;
    let witness = all.first().map(|w| Witness { ambient: t.to_ambient(&w.coords), lattice: w.clone() });
    Ok(WallVerdict {
        is_wall: witness.is_some(),
        branch: witness.as_ref().map(|w| w.lattice.branch),
        witness,
        shortcut: None,
        lattice: Some(t),
        primitive,
        divisor_square,
        witness_count: all.len(),
    })
}

/// `q(R) ≥ −(k + 3 − 2ε)/2`.
pub fn mbm_bound_check(curve: &CurveClass, ctx: &SurfaceContext) -> bool {
    curve.square(ctx) >= crate::brill_noether::mbm_square_bound(ctx)
}

/// Verifies that a witness's ambient vector pairs as recorded (used by tests and the CLI).
pub fn ambient_check(w: &Witness, ctx: &SurfaceContext) -> bool {
    let v = triple_ints(&hilb_vector(ctx));
    let s = MukaiTriple::from_ints(&w.ambient[0], &w.ambient[1], &w.ambient[2]);
    let vv = MukaiTriple::from_ints(&v[0], &v[1], &v[2]);
    mukai_pairing(&s, &s, ctx) == Rat::from_integer(w.lattice.square.clone())
        && mukai_pairing(&s, &vv, ctx) == Rat::from_integer(w.lattice.pairing.clone())
}
