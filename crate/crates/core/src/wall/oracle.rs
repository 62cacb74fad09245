//! Brute-force witness search over a bounding box, independent of the line solver.
//!
//! Every witness satisfies `M(s) = 2·b(s,v)²/q(v) − q(s) ≤ 2·q(v) + 2`, and `M` is
//! positive definite on an indefinite `T` with `q(v) > 0`. The box below contains the
//! ellipse `M ≤ 2q(v) + 2`, doubled for slack.

use num_traits::{Signed, Zero};

use super::{classify, LatticeWitness};
use crate::error::{Error, Result};
use crate::exact::{floor_div, isqrt, Int};
use crate::lattice::IntMatrix;
use crate::mukai::Surface;

/// Half-widths of the search box in each coordinate.
pub fn box_radius(gram: &IntMatrix, v_coords: &[Int; 2]) -> Result<[Int; 2]> {
    if gram.nrows() != 2 || gram.ncols() != 2 || gram[(0, 1)] != gram[(1, 0)] {
        return Err(Error::contract("T must be given by a symmetric 2x2 Gram matrix"));
    }
    let u = [
        &gram[(0, 0)] * &v_coords[0] + &gram[(0, 1)] * &v_coords[1],
        &gram[(1, 0)] * &v_coords[0] + &gram[(1, 1)] * &v_coords[1],
    ];
    let qv = &u[0] * &v_coords[0] + &u[1] * &v_coords[1];
    if !qv.is_positive() || !gram.determinant()?.is_negative() {
        return Err(Error::domain("T must be indefinite with q(v) > 0"));
    }
    // q(v)·M has Gram 2·u·uᵀ − q(v)·G.
    let m = |i: usize, j: usize| Int::from(2) * &u[i] * &u[j] - &qv * &gram[(i, j)];
    let (m00, m01, m11) = (m(0, 0), m(0, 1), m(1, 1));
    let det = &m00 * &m11 - &m01 * &m01;
    debug_assert!(det.is_positive());
    let bound = &qv * (Int::from(2) * &qv + 2);
    let r0 = isqrt(&floor_div(&(&bound * &m11), &det)) + 1;
    let r1 = isqrt(&floor_div(&(&bound * &m00), &det)) + 1;
    Ok([Int::from(2) * r0, Int::from(2) * r1])
}

/// All witnesses in the box, sorted like [`super::enumerate_witnesses`].
pub fn box_witnesses(gram: &IntMatrix, v_coords: &[Int; 2], surface: Surface) -> Result<Vec<LatticeWitness>> {
    let [r0, r1] = box_radius(gram, v_coords)?;
    let mut out = Vec::new();
    let mut x = -r0.clone();
    while x <= r0 {
        let mut y = -r1.clone();
        while y <= r1 {
            let s = [x.clone(), y.clone()];
            let gs = [
                &gram[(0, 0)] * &s[0] + &gram[(0, 1)] * &s[1],
                &gram[(1, 0)] * &s[0] + &gram[(1, 1)] * &s[1],
            ];
            let q = &gs[0] * &s[0] + &gs[1] * &s[1];
            let b = &gs[0] * &v_coords[0] + &gs[1] * &v_coords[1];
            let qv = {
                let gv0 = &gram[(0, 0)] * &v_coords[0] + &gram[(0, 1)] * &v_coords[1];
                let gv1 = &gram[(1, 0)] * &v_coords[0] + &gram[(1, 1)] * &v_coords[1];
                gv0 * &v_coords[0] + gv1 * &v_coords[1]
            };
            if !(s[0].is_zero() && s[1].is_zero()) {
                if let Some(branch) = classify(&q, &b, &qv, surface) {
                    out.push(LatticeWitness { coords: s, branch, pairing: b, square: q });
                }
            }
            y += 1;
        }
        x += 1;
    }
    out.sort();
    Ok(out)
}
