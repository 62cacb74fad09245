//! Pencils on nodal curves in `|L|` and the rational curves they sweep out in `S^[k]_ε`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::mukai::{check_param, CurveClass, DivisorClass, Surface, SurfaceContext};

/// Brill–Noether number `ρ(g, r, d) = g − (r+1)(g − d + r)`.
pub fn bn_number(g: i64, r: i64, d: i64) -> i128 {
    let (g, r, d) = (g as i128, r as i128, d as i128);
    g - (r + 1) * (g - d + r)
}

/// `(S, L)` of genus `p`, `k`, and a number of nodes `0 ≤ δ ≤ p − 2ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BnParams {
    ctx: SurfaceContext,
    delta: i64,
}

impl BnParams {
    pub fn new(ctx: SurfaceContext, delta: i64) -> Result<Self> {
        check_param("δ", delta)?;
        let eps = ctx.epsilon();
        if delta < 0 || delta > ctx.p() - 2 * eps {
            return Err(Error::domain(format!(
                "0 ≤ δ ≤ p−2ε violated: δ = {delta}, p = {}, ε = {eps}",
                ctx.p()
            )));
        }
        Ok(BnParams { ctx, delta })
    }

    pub fn from_parts(p: i64, delta: i64, k: i64, surface: Surface) -> Result<Self> {
        Self::new(SurfaceContext::new(surface, p, k)?, delta)
    }

    pub fn ctx(&self) -> &SurfaceContext {
        &self.ctx
    }

    pub fn p(&self) -> i64 {
        self.ctx.p()
    }

    pub fn k(&self) -> i64 {
        self.ctx.k()
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn epsilon(&self) -> i64 {
        self.ctx.epsilon()
    }

    /// Geometric genus `g = p − δ` of the nodal curve.
    pub fn geometric_genus(&self) -> i64 {
        self.p() - self.delta
    }

    /// `α = ⌊(p − δ − ε) / 2(k − 1 + 2ε)⌋`.
    pub fn alpha(&self) -> i64 {
        (self.p() - self.delta - self.epsilon()).div_euclid(2 * self.ctx.t())
    }

    /// `β = (2α + 1)(k − 1 + 2ε) − p + δ + ε`.
    pub fn beta(&self) -> i64 {
        (2 * self.alpha() + 1) * self.ctx.t() - self.p() + self.delta + self.epsilon()
    }

    /// `ρ(p, l, (k+ε)l + δ) + ε·l(l+2)`, the l-th term of the pencil existence bound.
    pub fn rho_term(&self, l: i64) -> i128 {
        let eps = self.epsilon();
        let l128 = l as i128;
        bn_number(self.p(), l, (self.k() + eps) * l + self.delta) + (eps as i128) * l128 * (l128 + 2)
    }

    /// Coefficient `p − δ + k − 1 + ε` of `r_k` in the rational-curve class.
    pub fn slope(&self) -> i64 {
        self.p() - self.delta + self.k() - 1 + self.epsilon()
    }
}

/// Nonemptiness of the locus of `δ`-nodal curves in `{L}` whose normalization
/// carries a `g¹_{k+ε}`: `δ ≥ α(p − δ − ε − (k−1+2ε)(α+1))`.
pub fn exists_pencil(params: &BnParams) -> bool {
    let a = params.alpha() as i128;
    let rhs = a
        * ((params.p() - params.delta() - params.epsilon()) as i128 - (params.ctx().t() as i128) * (a + 1));
    params.delta() as i128 >= rhs
}

/// The same criterion as a family of Brill–Noether inequalities, checked for `0 ≤ l ≤ l_max`
/// (default `α + 2`; the terms are minimized at `l = α`).
pub fn exists_pencil_via_rho(params: &BnParams, l_max: Option<i64>) -> Result<bool> {
    let alpha = params.alpha();
    let l_max = l_max.unwrap_or(alpha + 2);
    if l_max < alpha {
        return Err(Error::contract(format!("l_max = {l_max} must be at least α = {alpha}")));
    }
    Ok((0..=l_max).all(|l| params.rho_term(l) >= 0))
}

/// Dimensions `(dim {L}¹_{δ,k+ε}, dim G¹_{k+ε}(C̃))`.
pub fn bn_dims(params: &BnParams) -> Result<(i64, i64)> {
    if !exists_pencil(params) {
        return Err(no_pencil(params));
    }
    let g = params.geometric_genus();
    let bound = 2 * (params.k() - 1 + params.epsilon());
    Ok((g.min(bound), (bound - g).max(0)))
}

fn no_pencil(params: &BnParams) -> Error {
    Error::domain(format!(
        "no δ-nodal curve with a g¹_(k+ε): δ ≥ α(p−δ−ε−(k−1+2ε)(α+1)) fails for (p, δ, k, ε) = ({}, {}, {}, {})",
        params.p(),
        params.delta(),
        params.k(),
        params.epsilon()
    ))
}

/// `R_{p,δ,k} = L − (p − δ + k − 1 + ε)·r_k`.
pub fn curve_class(params: &BnParams) -> CurveClass {
    CurveClass::from_i64(1, -params.slope())
}

/// `D_{p,δ,k} = L − (p − δ + k − 1 + ε)/2(k−1+2ε) · e_k`.
pub fn dual_divisor(params: &BnParams) -> DivisorClass {
    DivisorClass::new(rat(1, 1), rat(-params.slope(), 2 * params.ctx().t()))
}

/// `q(R_{p,δ,k})` in both closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    /// `2(p−1) − (p−δ+k−1+ε)² / 2(k−1+2ε)`.
    pub value: Rat,
    /// `2(ρ + εα(α+2) + ε − 1) − β² / 2(k−1+2ε)` with `ρ = ρ(p, α, (k+ε)α + δ)`.
    pub alternate: Rat,
    pub alpha: i64,
    pub beta: i64,
    pub rho: i128,
    /// `value == −(k+3−2ε)/2`.
    pub minimal: bool,
}

/// Lower bound `−(k + 3 − 2ε)/2` on the square of an extremal primitive curve class.
pub fn mbm_square_bound(ctx: &SurfaceContext) -> Rat {
    rat(-(ctx.k() + 3 - 2 * ctx.epsilon()), 2)
}

pub fn curve_square(params: &BnParams) -> SquareReport {
    let ctx = params.ctx();
    let t2 = 2 * ctx.t();
    let slope = params.slope() as i128;
    let value = rat(2 * (params.p() - 1), 1) - Rat::new((slope * slope).into(), t2.into());

    let alpha = params.alpha();
    let beta = params.beta();
    let eps = params.epsilon() as i128;
    let a = alpha as i128;
    let rho = bn_number(params.p(), alpha, (params.k() + params.epsilon()) * alpha + params.delta());
    let integral_part = 2 * (rho + eps * a * (a + 2) + eps - 1);
    let b = beta as i128;
    let alternate = Rat::from_integer(integral_part.into()) - Rat::new((b * b).into(), t2.into());

    let minimal = value == mbm_square_bound(ctx);
    SquareReport { value, alternate, alpha, beta, rho, minimal }
}

/// Wall-divisor criterion for the dual of `R_{p,δ,k}`: `q(R_{p,δ,k}) < 0`.
/// Only meaningful where the pencil exists.
pub fn is_wall_by_square(params: &BnParams) -> Result<bool> {
    if !exists_pencil(params) {
        return Err(no_pencil(params));
    }
    Ok(curve_square(params).value < Rat::zero())
}

/// The parametric equality case `p = α(α+1)(k−1+2ε) + ε`, `δ = α(α−1)(k−1+2ε)`.
pub fn is_parametric_equality_case(params: &BnParams) -> bool {
    let a = params.alpha();
    let t = params.ctx().t();
    params.p() == a * (a + 1) * t + params.epsilon() && params.delta() == a * (a - 1) * t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bn(p: i64, d: i64, k: i64, eps: i64) -> BnParams {
        BnParams::from_parts(p, d, k, Surface::from_epsilon(eps).unwrap()).unwrap()
    }

    #[test]
    fn pencil_existence_examples() {
        assert_eq!(bn(6, 0, 2, 0).alpha(), 3);
        assert!(!exists_pencil(&bn(6, 0, 2, 0)));
        assert!(exists_pencil(&bn(4, 0, 3, 0)));
        assert!(exists_pencil(&bn(6, 6, 2, 0)));
        assert!(!exists_pencil_via_rho(&bn(6, 0, 2, 0), None).unwrap());
        assert!(exists_pencil_via_rho(&bn(4, 0, 3, 0), None).unwrap());
        assert_eq!(bn(6, 0, 2, 0).rho_term(3), -6);
    }

    #[test]
    fn l_zero_term_is_delta() {
        for d in 0..=10 {
            assert_eq!(bn(12, d, 3, 0).rho_term(0), d as i128);
            assert_eq!(bn(12, d, 3, 1).rho_term(0), d as i128);
        }
    }

    #[test]
    fn l_max_below_alpha_is_rejected() {
        assert!(exists_pencil_via_rho(&bn(6, 0, 2, 0), Some(1)).is_err());
    }

    #[test]
    fn delta_range_is_enforced() {
        assert!(BnParams::from_parts(4, 5, 2, Surface::K3).is_err());
        assert!(BnParams::from_parts(4, 3, 2, Surface::Abelian).is_err());
        assert!(BnParams::from_parts(4, -1, 2, Surface::K3).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(bn_dims(&bn(4, 0, 3, 0)).unwrap(), (4, 0));
        assert_eq!(bn_dims(&bn(2, 0, 2, 0)).unwrap(), (2, 0));
        assert_eq!(bn_dims(&bn(6, 6, 2, 0)).unwrap(), (0, 2));
        assert!(matches!(bn_dims(&bn(6, 0, 2, 0)), Err(Error::Domain(_))));
    }

    #[test]
    fn classes() {
        assert_eq!(curve_class(&bn(2, 0, 2, 0)), CurveClass::from_i64(1, -3));
        assert_eq!(curve_class(&bn(7, 0, 2, 1)), CurveClass::from_i64(1, -9));
        assert_eq!(curve_class(&bn(14, 2, 8, 0)), CurveClass::from_i64(1, -19));
        assert_eq!(dual_divisor(&bn(2, 0, 2, 0)), DivisorClass::new(rat(1, 1), rat(-3, 2)));
        let p = bn(5, 1, 3, 1);
        assert_eq!(curve_class(&p).to_divisor(p.ctx()), dual_divisor(&p));
    }

    #[test]
    fn squares() {
        let s = curve_square(&bn(2, 0, 2, 0));
        assert_eq!(s.value, rat(-5, 2));
        assert_eq!(s.alternate, s.value);
        assert!(s.minimal);
        let s = curve_square(&bn(4, 0, 3, 0));
        assert_eq!((s.value.clone(), s.rho, s.beta), (rat(-3, 1), 0, 2));
        assert_eq!(s.alternate, s.value);
        assert!(s.minimal);
        let s = curve_square(&bn(8, 1, 4, 0));
        assert_eq!(s.value, rat(-8, 3));
        assert_eq!(s.alternate, s.value);
        assert!(!s.minimal);
        assert_eq!(curve_square(&bn(7, 0, 2, 1)).value, rat(-3, 2));
    }

    #[test]
    fn wall_by_square() {
        assert!(is_wall_by_square(&bn(2, 0, 2, 0)).unwrap());
        assert!(!is_wall_by_square(&bn(6, 6, 2, 0)).unwrap());
        assert_eq!(curve_square(&bn(6, 6, 2, 0)).value, rat(19, 2));
        assert!(is_wall_by_square(&bn(4, 0, 3, 0)).unwrap());
        assert!(is_wall_by_square(&bn(6, 0, 2, 0)).is_err());
    }

    #[test]
    fn square_decreases_with_fewer_nodes() {
        for eps in 0..=1 {
            for k in 2..=6 {
                for p in 2..=30 {
                    let admissible: Vec<_> = (0..=p - 2 * eps)
                        .map(|d| bn(p, d, k, eps))
                        .filter(exists_pencil)
                        .collect();
                    if let Some(first) = admissible.first() {
                        let min = curve_square(first).value;
                        assert!(admissible.iter().all(|b| curve_square(b).value >= min));
                    }
                }
            }
        }
    }
}
