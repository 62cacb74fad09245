//! Constructive list of the lattices `T = sat⟨v, D_{p,δ,k}⟩` that occur for wall divisors.
//!
//! Every such `T` has a basis `(w, v)` with Gram matrix
//! `[[2δ−2+2ε, p−δ−k+1−3ε], [p−δ−k+1−3ε, 2k−2+4ε]]`. Starting from the seed at
//! `p = 2k−2+5ε, δ = 0`, adding a node moves the top-left entry up by 2 and the
//! off-diagonal down by 1, lowering the genus moves only the off-diagonal.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::Signed;

use crate::brill_noether::{curve_class, exists_pencil, BnParams};
use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::lattice::{BinaryForm, IntMatrix};
use crate::mukai::{hilb_vector, MukaiTriple, Surface, SurfaceContext};
use crate::wall::{saturate_with_v, wall_test, WallInput};

/// A Gram matrix together with the `(p, δ)` it is attached to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeState {
    pub gram: IntMatrix,
    pub p: i64,
    pub delta: i64,
    pub k: i64,
    pub surface: Surface,
}

impl LatticeState {
    pub fn epsilon(&self) -> i64 {
        self.surface.epsilon()
    }

    /// `p ≥ 2`, `0 ≤ δ ≤ p − 2ε` and the pencil existence bound.
    pub fn is_valid(&self) -> bool {
        BnParams::from_parts(self.p, self.delta, self.k, self.surface)
            .map(|b| exists_pencil(&b))
            .unwrap_or(false)
    }
}

fn gram2(a: i64, h: i64, c: i64) -> IntMatrix {
    IntMatrix::from_i64(&[&[a, h], &[h, c]])
}

/// The Gram matrix of `⟨w, v⟩` for given `(p, δ, k, ε)`.
pub fn w_gram(p: i64, delta: i64, k: i64, surface: Surface) -> IntMatrix {
    let eps = surface.epsilon();
    let t = k - 1 + 2 * eps;
    gram2(2 * delta - 2 + 2 * eps, p - delta - k + 1 - 3 * eps, 2 * t)
}

/// `w = (−1, L, ε − (p − δ))`: together with `v` it spans the saturation of `⟨v, D_{p,δ,k}⟩`.
pub fn w_vector(params: &BnParams) -> MukaiTriple {
    MukaiTriple::from_i64(-1, 1, params.epsilon() - params.geometric_genus())
}

/// Seed of the catalog: `p = 2k − 2 + 5ε`, `δ = 0`.
pub fn seed_lattice(k: i64, surface: Surface) -> Result<LatticeState> {
    SurfaceContext::new(surface, 2, k)?;
    let eps = surface.epsilon();
    let p = 2 * k - 2 + 5 * eps;
    Ok(LatticeState { gram: w_gram(p, 0, k, surface), p, delta: 0, k, surface })
}

fn shifted(s: &LatticeState, dp: i64, dd: i64, da: i64, dh: i64) -> LatticeState {
    let mut gram = s.gram.clone();
    gram[(0, 0)] += da;
    gram[(0, 1)] += dh;
    gram[(1, 0)] += dh;
    LatticeState { gram, p: s.p + dp, delta: s.delta + dd, k: s.k, surface: s.surface }
}

/// One more node: `δ → δ + 1`.
pub fn delta_move(s: &LatticeState) -> LatticeState {
    shifted(s, 0, 1, 2, -1)
}

/// Genus one lower: `p → p − 1`.
pub fn genus_move(s: &LatticeState) -> LatticeState {
    shifted(s, -1, 0, 0, -1)
}

/// `k − 1 + 2ε` is a prime power: isometry classes then coincide with monodromy orbits.
pub fn is_prime_power(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            return m == 1;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub state: LatticeState,
    pub class_id: String,
    /// `q(R_{p,δ,k})`.
    pub curve_square: Rat,
    pub is_wall: bool,
    /// Ambient Mukai vector of the first witness.
    pub witness: Option<[Int; 3]>,
    pub verified: bool,
    pub flags: Vec<String>,
    /// All `(p, δ)` in range whose lattice falls in this class, sorted.
    pub realizations: Vec<(i64, i64)>,
    pub prime_power: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogRange {
    pub p_min: i64,
    pub p_max: i64,
    pub delta_max: i64,
}

fn class_id(gram: &IntMatrix) -> String {
    BinaryForm::from_gram(gram).expect("symmetric 2x2").class_id()
}

/// Every valid state reachable from the seed by the two moves. States leaving the
/// valid region are dropped without being expanded.
pub fn reachable_states(k: i64, surface: Surface, range: CatalogRange) -> Result<Vec<LatticeState>> {
    if range.p_min > range.p_max || range.delta_max < 0 {
        return Err(Error::domain(format!(
            "empty catalog range: p ∈ [{}, {}], δ ≤ {}",
            range.p_min, range.p_max, range.delta_max
        )));
    }
    let seed = seed_lattice(k, surface)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    if seed.is_valid() {
        seen.insert((seed.p, seed.delta));
        queue.push_back(seed);
    }
    while let Some(s) = queue.pop_front() {
        for next in [delta_move(&s), genus_move(&s)] {
            if next.delta > range.delta_max || !next.is_valid() || !seen.insert((next.p, next.delta)) {
                continue;
            }
            queue.push_back(next);
        }
        if (range.p_min..=range.p_max).contains(&s.p) {
            out.push(s);
        }
    }
    out.sort_by_key(|s| (s.p, s.delta));
    Ok(out)
}

/// Verifies one state against the wall test and the reconstructed saturation.
pub fn verify_state(state: &LatticeState) -> Result<CatalogEntry> {
    let params = BnParams::from_parts(state.p, state.delta, state.k, state.surface)?;
    let ctx = *params.ctx();
    let curve = curve_class(&params);
    let curve_square = curve.square(&ctx);
    let id = class_id(&state.gram);
    let mut flags = Vec::new();
    let (is_wall, witness, verified) = if curve_square.is_negative() {
        let verdict = wall_test(&WallInput::Curve(curve), &ctx)?;
        let t = verdict.lattice.as_ref().expect("negative square has a lattice");
        let same = crate::lattice::rank2_isometric(&t.gram, &state.gram)?;
        if !same {
            flags.push("reconstructed lattice not isometric".to_string());
        }
        if !verdict.is_wall {
            flags.push("wall test negative".to_string());
        }
        (verdict.is_wall, verdict.witness.map(|w| w.ambient), same && verdict.is_wall)
    } else {
        flags.push("not a wall (square ≥ 0)".to_string());
        (false, None, false)
    };
    Ok(CatalogEntry {
        prime_power: is_prime_power(ctx.t()),
        state: state.clone(),
        class_id: id,
        curve_square,
        is_wall,
        witness,
        verified,
        flags,
        realizations: vec![(state.p, state.delta)],
    })
}

/// Reachable lattices, one entry per isometry class (the first in `(p, δ)` order).
pub fn generate_catalog(k: i64, surface: Surface, range: CatalogRange) -> Result<Vec<CatalogEntry>> {
    let states = reachable_states(k, surface, range)?;
    let mut by_class: BTreeMap<String, usize> = BTreeMap::new();
    let mut out: Vec<CatalogEntry> = Vec::new();
    for s in &states {
        let id = class_id(&s.gram);
        if let Some(&i) = by_class.get(&id) {
            out[i].realizations.push((s.p, s.delta));
            continue;
        }
        by_class.insert(id, out.len());
        out.push(verify_state(s)?);
    }
    Ok(out)
}

/// Finds `(p, δ)` whose lattice `⟨w, v⟩` is isometric to `target`, reading `δ` off the
/// top-left entry and `p` off the off-diagonal (either sign), then re-deriving the
/// saturation from scratch.
pub fn realize_gram(target: &IntMatrix, k: i64, surface: Surface) -> Result<Option<(i64, i64)>> {
    if target.nrows() != 2 || target.ncols() != 2 || target[(0, 1)] != target[(1, 0)] {
        return Err(Error::contract("target must be a symmetric 2x2 Gram matrix"));
    }
    let ctx0 = SurfaceContext::new(surface, 2, k)?;
    let eps = surface.epsilon();
    if target[(1, 1)] != ctx0.v_square() {
        return Err(Error::domain(format!(
            "target[1][1] must equal 2k−2+4ε = {}",
            ctx0.v_square()
        )));
    }
    if !target[(0, 0)].is_even() || !target[(1, 1)].is_even() {
        return Err(Error::domain("target must be even"));
    }
    let to_i64 = |x: &Int| -> Option<i64> { i64::try_from(x).ok() };
    let Some(top) = to_i64(&target[(0, 0)]) else { return Ok(None) };
    let Some(off) = to_i64(&target[(0, 1)]) else { return Ok(None) };
    let delta = (top + 2 - 2 * eps) / 2;
    let want = class_id(target);
    let mut candidates = vec![off];
    if off != 0 {
        candidates.push(-off);
    }
    for b in candidates {
        let p = b + delta + k - 1 + 3 * eps;
        let Ok(params) = BnParams::from_parts(p, delta, k, surface) else { continue };
        if !exists_pencil(&params) {
            continue;
        }
        let ctx = *params.ctx();
        let d = curve_class(&params).to_divisor(&ctx);
        let prim = crate::wall::primitive_divisor(&d, &ctx)?;
        let t = saturate_with_v(&prim.divisor, &ctx)?;
        if class_id(&t.gram) == want {
            return Ok(Some((p, delta)));
        }
    }
    Ok(None)
}

/// Sanity check of the `w` identities for one parameter set: `q(w) = 2δ−2+2ε`,
/// `b(w, v) = g − k + 1 − 3ε`.
pub fn w_identities_hold(params: &BnParams) -> bool {
    let ctx = params.ctx();
    let w = w_vector(params);
    let v = hilb_vector(ctx);
    let eps = params.epsilon();
    let qw = crate::mukai::mukai_square(&w, ctx);
    let bwv = crate::mukai::mukai_pairing(&w, &v, ctx);
    qw == Rat::from_integer(Int::from(2 * params.delta() - 2 + 2 * eps))
        && bwv == Rat::from_integer(Int::from(params.geometric_genus() - params.k() + 1 - 3 * eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let s = seed_lattice(2, Surface::K3).unwrap();
        assert_eq!((s.gram.clone(), s.p, s.delta), (gram2(-2, 1, 2), 2, 0));
        let s = seed_lattice(4, Surface::K3).unwrap();
        assert_eq!((s.gram.clone(), s.p), (gram2(-2, 3, 6), 6));
        let s = seed_lattice(2, Surface::Abelian).unwrap();
        assert_eq!((s.gram.clone(), s.p), (gram2(0, 3, 6), 7));
        assert!(seed_lattice(1, Surface::K3).is_err());
    }

    #[test]
    fn moves() {
        let s = seed_lattice(2, Surface::K3).unwrap();
        let d = delta_move(&s);
        assert_eq!((d.gram.clone(), d.p, d.delta), (gram2(0, 0, 2), 2, 1));
        let s = seed_lattice(4, Surface::K3).unwrap();
        let g = genus_move(&s);
        assert_eq!((g.gram.clone(), g.p), (gram2(-2, 2, 6), 5));
        assert_eq!(delta_move(&genus_move(&s)), genus_move(&delta_move(&s)));
    }

    #[test]
    fn moves_track_the_closed_form() {
        for surface in Surface::both() {
            let s = seed_lattice(3, surface).unwrap();
            let x = genus_move(&delta_move(&delta_move(&s)));
            assert_eq!(x.gram, w_gram(x.p, x.delta, 3, surface));
        }
    }

    #[test]
    fn realize_examples() {
        assert_eq!(realize_gram(&gram2(-2, 1, 2), 2, Surface::K3).unwrap(), Some((2, 0)));
        assert_eq!(realize_gram(&gram2(0, 3, 6), 2, Surface::Abelian).unwrap(), Some((7, 0)));
        assert_eq!(realize_gram(&gram2(-2, 0, 2), 2, Surface::K3).unwrap(), None);
        assert!(matches!(realize_gram(&gram2(-2, 1, 4), 2, Surface::K3), Err(Error::Domain(_))));
        assert!(matches!(realize_gram(&gram2(-1, 1, 2), 2, Surface::K3), Err(Error::Domain(_))));
    }

    #[test]
    fn small_catalog() {
        let range = CatalogRange { p_min: 2, p_max: 2, delta_max: 0 };
        let c = generate_catalog(2, Surface::K3, range).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].state.gram, gram2(-2, 1, 2));
        assert!(c[0].verified && c[0].is_wall);
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<i64> = (1..20).filter(|&n| is_prime_power(n)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    }

    #[test]
    fn w_identities_on_a_grid() {
        for surface in Surface::both() {
            for p in 2..15 {
                for delta in 0..=p - 2 * surface.epsilon() {
                    let b = BnParams::from_parts(p, delta, 3, surface).unwrap();
                    assert!(w_identities_hold(&b));
                }
            }
        }
    }
}
