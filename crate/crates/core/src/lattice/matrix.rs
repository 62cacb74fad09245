//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Conventions: row-style Hermite form (`U·M = H`), pivots positive, entries above
//! a pivot reduced into `[0, pivot)`, zero rows at the bottom. Smith form has a
//! nonnegative diagonal with `d₁ | d₂ | …`, zeros last.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ext_gcd, Int};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::contract("ragged matrix rows"));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::contract("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = -x;
        }
    }

    /// row[dst] -= c * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = c * &self[(src, j)];
            self[(dst, j)] -= t;
        }
    }

    /// col[dst] -= c * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = c * &self[(i, src)];
            self[(i, dst)] -= t;
        }
    }

    /// Rows (i, j) <- (x·ri + y·rj, u·ri + w·rj).
    fn combine_rows(&mut self, i: usize, j: usize, x: &Int, y: &Int, u: &Int, w: &Int) {
        for c in 0..self.cols {
            let ri = self[(i, c)].clone();
            let rj = self[(j, c)].clone();
            self[(i, c)] = x * &ri + y * &rj;
            self[(j, c)] = u * &ri + w * &rj;
        }
    }

    fn combine_cols(&mut self, i: usize, j: usize, x: &Int, y: &Int, u: &Int, w: &Int) {
        for r in 0..self.rows {
            let ci = self[(r, i)].clone();
            let cj = self[(r, j)].clone();
            self[(r, i)] = x * &ci + y * &cj;
            self[(r, j)] = u * &ci + w * &cj;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Row Hermite normal form. Returns `(H, U)` with `U·M = H` and `det U = ±1`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // Fold every entry below into the pivot position with gcd steps.
        for i in pivot_row + 1..m.rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(pivot_row, col)].clone();
            let b = h[(i, col)].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            let nb = -bg;
            h.combine_rows(pivot_row, i, &x, &y, &nb, &ag);
            u.combine_rows(pivot_row, i, &x, &y, &nb, &ag);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&p);
            h.sub_row(i, pivot_row, &q);
            u.sub_row(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form with both transforms and the inverse of the column transform.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: IntMatrix,
    /// Row transform: `left · M · right = diagonal`.
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

impl Smith {
    /// Nonzero invariant factors in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.diagonal.rows.min(self.diagonal.cols);
        (0..n).map(|i| self.diagonal[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
    }
}

pub fn snf(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut rinv = IntMatrix::identity(cols);

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Choose the smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        left.swap_rows(t, pi);
        s.swap_cols(t, pj);
        right.swap_cols(t, pj);
        rinv.swap_rows(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(i, t)].clone();
                if b.is_multiple_of(&a) {
                    let q = &b / &a;
                    s.sub_row(i, t, &q);
                    left.sub_row(i, t, &q);
                    continue;
                }
                let (g, x, y) = ext_gcd(&a, &b);
                let (ag, bg) = (&a / &g, &b / &g);
                let nb = -bg;
                s.combine_rows(t, i, &x, &y, &nb, &ag);
                left.combine_rows(t, i, &x, &y, &nb, &ag);
                changed = true;
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(t, j)].clone();
                if b.is_multiple_of(&a) {
                    // cj -= q·ct; inverse adds q·(row j) to row t of rinv.
                    let q = &b / &a;
                    s.sub_col(j, t, &q);
                    right.sub_col(j, t, &q);
                    let nq = -&q;
                    rinv.sub_row(t, j, &nq);
                    continue;
                }
                let (g, x, y) = ext_gcd(&a, &b);
                let (ag, bg) = (&a / &g, &b / &g);
                let nb = -bg;
                // Columns (t, j) <- (x·ct + y·cj, -b/g·ct + a/g·cj); the inverse acts on rows of rinv.
                s.combine_cols(t, j, &x, &y, &nb, &ag);
                right.combine_cols(t, j, &x, &y, &nb, &ag);
                // Inverse of [[x, -b/g],[y, a/g]] (column action) is [[a/g, b/g],[-y, x]].
                let bg2 = -&nb;
                let ny = -&y;
                rinv.combine_rows(t, j, &ag, &bg2, &ny, &x);
                changed = true;
            }
            if !changed {
                break;
            }
        }

        // Divisibility: if some entry of the remaining block is not a multiple of the pivot,
        // add its row to the pivot row and redo this step.
        let p = s[(t, t)].clone();
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !s[(i, j)].is_multiple_of(&p));
        if let Some((i, _)) = offender {
            let minus_one = -Int::one();
            s.sub_row(t, i, &minus_one);
            left.sub_row(t, i, &minus_one);
            continue;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    Smith { diagonal: s, left, right, right_inverse: rinv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn check_hnf(input: &IntMatrix) -> IntMatrix {
        let (h, u) = hnf(input);
        assert_eq!(u.mul(input).unwrap(), h);
        assert_eq!(u.determinant().unwrap().abs(), Int::one());
        h
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(check_hnf(&IntMatrix::identity(2)), IntMatrix::identity(2));
        assert_eq!(check_hnf(&m(&[&[2, 4], &[1, 3]])), m(&[&[1, 1], &[0, 2]]));
        assert_eq!(check_hnf(&m(&[&[0, 0]])), m(&[&[0, 0]]));
    }

    #[test]
    fn hnf_shape_rules() {
        let h = check_hnf(&m(&[&[3, 5, 7], &[6, 1, 0], &[9, 6, 7]]));
        // third row is dependent: zero row at the bottom
        assert!(h.row(2).iter().all(Zero::is_zero));
        assert!(h[(0, 0)].is_positive());
    }

    fn check_snf(input: &IntMatrix) -> Vec<Int> {
        let s = snf(input);
        let prod = s.left.mul(input).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal);
        assert_eq!(s.right.mul(&s.right_inverse).unwrap(), IntMatrix::identity(input.ncols()));
        assert_eq!(s.left.determinant().unwrap().abs(), Int::one());
        for i in 0..s.diagonal.nrows() {
            for j in 0..s.diagonal.ncols() {
                if i != j {
                    assert!(s.diagonal[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn snf_examples() {
        let ints = |xs: &[i64]| xs.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        assert_eq!(check_snf(&m(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(check_snf(&IntMatrix::identity(2)), ints(&[1, 1]));
        assert_eq!(check_snf(&m(&[&[2, 0], &[0, 2]])), ints(&[2, 2]));
        assert_eq!(check_snf(&m(&[&[1, 0, -1], &[-3, 2, -3]])), ints(&[1, 2]));
        assert_eq!(check_snf(&m(&[&[0, 0], &[0, 0]])), ints(&[]));
        assert_eq!(check_snf(&m(&[&[4, 6, 8], &[6, 9, 12], &[2, 3, 10]])), ints(&[1, 6]));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[1, -2]]).determinant().unwrap(), Int::from(-5));
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant().unwrap(), Int::from(-2));
    }
}
