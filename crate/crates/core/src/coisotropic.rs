//! Numerical data of the uniruled coisotropic subvarieties of `S^[k]_ε` swept out by
//! the rational curves `R_{p,δ,k}`: codimension, fibre and base dimensions, line class.

use crate::brill_noether::{curve_class, BnParams};
use crate::error::Result;
use crate::exact::Rat;
use crate::mukai::{moduli_dim, CurveClass, Surface, SurfaceContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// `P^r`-bundle over a holomorphic symplectic manifold, from a moduli space of
    /// Lazarsfeld–Mukai bundles.
    ProjectiveBundle,
    /// The same bundles pushed from `S^[k']` to `S^[k]`, indexed by codimension.
    SeveriFamily,
    /// Relative symmetric products over a Severi variety of nodal curves.
    SymmetricProduct,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::ProjectiveBundle => "projective_bundle",
            Construction::SeveriFamily => "severi_family",
            Construction::SymmetricProduct => "symmetric_product",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionParams {
    pub p: i64,
    pub k: i64,
    pub epsilon: i64,
    pub delta: i64,
    /// Number of points of the intermediate Hilbert scheme, when there is one.
    pub k_prime: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubvarietyDescriptor {
    pub source: Construction,
    pub codim: i64,
    pub total_dim: i64,
    pub fiber_dim: i64,
    pub base_dim: i64,
    pub line_class: CurveClass,
    pub line_square: Rat,
    pub params: ConstructionParams,
}

impl SubvarietyDescriptor {
    fn new(
        source: Construction,
        codim: i64,
        base_dim: i64,
        line_coefficient: i64,
        ctx: &SurfaceContext,
        params: ConstructionParams,
    ) -> Self {
        let line_class = CurveClass::from_i64(1, -line_coefficient);
        let line_square = line_class.square(ctx);
        SubvarietyDescriptor {
            source,
            codim,
            total_dim: 2 * ctx.k() - codim,
            fiber_dim: codim,
            base_dim,
            line_class,
            line_square,
            params,
        }
    }

    /// `n` in `L − n·r_k`.
    pub fn line_coefficient(&self) -> i64 {
        -i64::try_from(&self.line_class.r).expect("small coefficient")
    }

    pub fn dimensions_consistent(&self) -> bool {
        self.total_dim == self.fiber_dim + self.base_dim && self.total_dim + self.codim == 2 * self.params.k
    }
}

/// `χ = p − δ − k + 3 − 5ε`.
pub fn euler_characteristic(p: i64, delta: i64, k: i64, surface: Surface) -> i64 {
    p - delta - k + 3 - 5 * surface.epsilon()
}

/// `max{2δ+2, 4ε} ≤ χ ≤ δ + k + 1`.
pub fn projective_bundle_bound_holds(p: i64, delta: i64, k: i64, surface: Surface) -> bool {
    let chi = euler_characteristic(p, delta, k, surface);
    (2 * delta + 2).max(4 * surface.epsilon()) <= chi && chi <= delta + k + 1
}

/// The `P^{χ−2δ−1}`-bundle over a symplectic manifold of dimension `2(k+1+2δ−χ)`,
/// when the bound above holds.
pub fn projective_bundle_descriptor(
    p: i64,
    delta: i64,
    k: i64,
    surface: Surface,
) -> Result<Option<SubvarietyDescriptor>> {
    let params = BnParams::from_parts(p, delta, k, surface)?;
    if !projective_bundle_bound_holds(p, delta, k, surface) {
        return Ok(None);
    }
    let chi = euler_characteristic(p, delta, k, surface);
    let r = chi - 2 * delta - 1;
    let cp = ConstructionParams { p, k, epsilon: surface.epsilon(), delta, k_prime: None };
    Ok(Some(SubvarietyDescriptor::new(
        Construction::ProjectiveBundle,
        r,
        2 * (k + 1 + 2 * delta - chi),
        params.slope(),
        params.ctx(),
        cp,
    )))
}

/// Admissible codimensions `1 ≤ r ≤ min{⌊(4k−10−P)/2⌋, ⌊(P+2)/2⌋}` with `P = p − 5ε`,
/// excluding `(ε, r) = (1, 1)` for `p < 9` and `(1, 2)` for `p < 11`.
pub fn severi_codim_range(p: i64, k: i64, surface: Surface) -> (i64, i64) {
    let eps = surface.epsilon();
    let pp = p - 5 * eps;
    let hi = (4 * k - 10 - pp).div_euclid(2).min((pp + 2).div_euclid(2));
    (1, hi)
}

fn severi_r_allowed(p: i64, r: i64, surface: Surface) -> bool {
    match (surface.epsilon(), r) {
        (1, 1) => p >= 9,
        (1, 2) => p >= 11,
        _ => true,
    }
}

/// `max{0, ⌈(P+2−r−k)/3⌉} ≤ δ ≤ ⌊(P+2−2r)/4⌋`, with `δ ≥ 1` when `ε = 1` and `r ≤ 2`.
pub fn severi_delta_range(p: i64, k: i64, r: i64, surface: Surface) -> (i64, i64) {
    let eps = surface.epsilon();
    let pp = p - 5 * eps;
    let mut lo = 0.max(ceil_div(pp + 2 - r - k, 3));
    if eps == 1 && r <= 2 {
        lo = lo.max(1);
    }
    (lo, (pp + 2 - 2 * r).div_euclid(4))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Codimension-`r` subvarieties obtained from `S^[k']` with `k' = p − 5ε − 3δ + 2 − r`;
/// lines have class `L − [2(p−2δ−2ε) − r + 1]·r_k`.
pub fn severi_family_enumerate(
    p: i64,
    k: i64,
    surface: Surface,
) -> Result<Vec<(i64, i64, SubvarietyDescriptor)>> {
    let ctx = SurfaceContext::new(surface, p, k)?;
    let eps = surface.epsilon();
    let (r_lo, r_hi) = severi_codim_range(p, k, surface);
    let mut out = Vec::new();
    for r in r_lo..=r_hi {
        if !severi_r_allowed(p, r, surface) {
            continue;
        }
        let (d_lo, d_hi) = severi_delta_range(p, k, r, surface);
        for delta in d_lo..=d_hi {
            let k_prime = p - 5 * eps - 3 * delta + 2 - r;
            let cp = ConstructionParams { p, k, epsilon: eps, delta, k_prime: Some(k_prime) };
            let coeff = 2 * (p - 2 * delta - 2 * eps) - r + 1;
            let d = SubvarietyDescriptor::new(Construction::SeveriFamily, r, 2 * k - 2 * r, coeff, &ctx, cp);
            out.push((r, delta, d));
        }
    }
    Ok(out)
}

/// Codimension-`r` subvarieties `W_{r,k'}` for `1 ≤ r ≤ k − ε`, `r + ε ≤ k' ≤ min{k, p + r − ε}`;
/// lines have class `L − [2(k'+ε) − r − 1]·r_k` and the rational quotient has dimension `2(k−r)`.
pub fn symmetric_product_enumerate(
    p: i64,
    k: i64,
    surface: Surface,
) -> Result<Vec<(i64, i64, SubvarietyDescriptor)>> {
    let ctx = SurfaceContext::new(surface, p, k)?;
    let eps = surface.epsilon();
    let mut out = Vec::new();
    for r in 1..=k - eps {
        for k_prime in r + eps..=k.min(p + r - eps) {
            let genus = k_prime - r + eps;
            let cp = ConstructionParams { p, k, epsilon: eps, delta: p - genus, k_prime: Some(k_prime) };
            let coeff = 2 * (k_prime + eps) - r - 1;
            let d = SubvarietyDescriptor::new(Construction::SymmetricProduct, r, 2 * (k - r), coeff, &ctx, cp);
            out.push((r, k_prime, d));
        }
    }
    Ok(out)
}

/// The embedded `P^k` at `p = 2(k−1) + 5ε`, `δ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianPlane {
    pub p: i64,
    pub delta: i64,
    pub descriptor: SubvarietyDescriptor,
    /// Dimension `2ε` of the moduli space of the bundles involved.
    pub moduli_dim: i64,
}

/// Built directly rather than through [`projective_bundle_descriptor`]: for `(k, ε) = (2, 1)`
/// the bound `χ ≥ 4ε` fails there although the plane exists.
pub fn lagrangian_plane_params(k: i64, surface: Surface) -> Result<LagrangianPlane> {
    let eps = surface.epsilon();
    let p = 2 * (k - 1) + 5 * eps;
    let params = BnParams::from_parts(p, 0, k, surface)?;
    let cp = ConstructionParams { p, k, epsilon: eps, delta: 0, k_prime: None };
    let coeff = -i64::try_from(&curve_class(&params).r).expect("small coefficient");
    let descriptor = SubvarietyDescriptor::new(Construction::ProjectiveBundle, k, 0, coeff, params.ctx(), cp);
    Ok(LagrangianPlane { p, delta: 0, descriptor, moduli_dim: moduli_dim(p, 0, k, surface)? })
}
