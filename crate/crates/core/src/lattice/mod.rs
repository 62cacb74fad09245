//! Exact integer lattices given by a Gram matrix.

pub mod binary;
pub mod matrix;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Int;

pub use binary::{rank2_isometric, BinaryForm};
pub use matrix::{hnf, snf, IntMatrix, Smith};

/// A free Z-module with a symmetric integer bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if gram.nrows() != gram.ncols() || gram.nrows() == 0 {
            return Err(Error::contract("Gram matrix must be square and nonempty"));
        }
        if gram != gram.transpose() {
            return Err(Error::contract("Gram matrix must be symmetric"));
        }
        Ok(GramLattice { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Determinant of the Gram matrix.
    pub fn discriminant(&self) -> Int {
        self.gram.determinant().expect("square by construction")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// `gram · x`, i.e. the functional `b(x, ·)` in the dual basis.
    pub fn pair_with_basis(&self, x: &LatticeVector) -> Result<Vec<Int>> {
        self.check_len(x)?;
        Ok((0..self.rank())
            .map(|i| self.gram.row(i).iter().zip(&x.coords).map(|(g, c)| g * c).sum())
            .collect())
    }

    fn check_len(&self, x: &LatticeVector) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(Error::contract(format!(
                "vector of length {} in a lattice of rank {}",
                x.coords.len(),
                self.rank()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coords: Vec<Int>,
}

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector { coords: coords.iter().map(|&c| Int::from(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, n: &Int) -> Self {
        LatticeVector { coords: self.coords.iter().map(|c| c * n).collect() }
    }
}

/// The bilinear form `xᵀ · gram · y`.
pub fn inner(x: &LatticeVector, y: &LatticeVector, lattice: &GramLattice) -> Result<Int> {
    lattice.check_len(y)?;
    let gx = lattice.pair_with_basis(x)?;
    Ok(gx.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
}

/// `q(x) = inner(x, x)`.
pub fn norm(x: &LatticeVector, lattice: &GramLattice) -> Result<Int> {
    inner(x, x, lattice)
}

/// Positive generator of the ideal `b(x, L)`.
pub fn divisibility(x: &LatticeVector, lattice: &GramLattice) -> Result<Int> {
    if x.is_zero() {
        return Err(Error::domain("divisibility of the zero vector is undefined"));
    }
    let g = lattice.pair_with_basis(x)?.iter().fold(Int::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return Err(Error::domain("vector lies in the radical of a degenerate lattice"));
    }
    Ok(g)
}

/// A finitely generated sublattice, recorded by a Q-independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    ambient: GramLattice,
    basis: Vec<LatticeVector>,
}

impl Sublattice {
    pub fn new(ambient: GramLattice, basis: Vec<LatticeVector>) -> Result<Self> {
        for b in &basis {
            ambient.check_len(b)?;
        }
        let sub = Sublattice { ambient, basis };
        if sub.basis_matrix().rank() != sub.basis.len() {
            return Err(Error::contract("sublattice basis vectors are linearly dependent"));
        }
        Ok(sub)
    }

    pub fn ambient(&self) -> &GramLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rows are the basis vectors in ambient coordinates.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.basis.iter().map(|b| b.coords.clone()).collect())
            .unwrap_or_else(|_| IntMatrix::zeros(0, self.ambient.rank()))
    }

    /// Gram matrix of the restricted form in this basis.
    pub fn gram(&self) -> IntMatrix {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = inner(&self.basis[i], &self.basis[j], &self.ambient)
                    .expect("lengths checked on construction");
            }
        }
        g
    }

    /// Index of this sublattice in its saturation: product of the invariant factors.
    pub fn saturation_index(&self) -> Int {
        if self.basis.is_empty() {
            return Int::one();
        }
        snf(&self.basis_matrix()).invariant_factors().iter().product()
    }

    /// Coordinates of `x` in this basis, if `x` lies in the sublattice.
    pub fn coordinates_of(&self, x: &LatticeVector) -> Option<Vec<Int>> {
        // Solve c·B = x through the Smith form: U·B·V = S, so c·U⁻¹·S = x·V.
        let b = self.basis_matrix();
        let smith = snf(&b);
        let xv = IntMatrix::from_rows(vec![x.coords.clone()]).ok()?.mul(&smith.right).ok()?;
        let r = self.rank();
        let mut y = Vec::with_capacity(r);
        for i in 0..xv.ncols() {
            let d = if i < r { smith.diagonal[(i, i)].clone() } else { Int::zero() };
            let xi = &xv[(0, i)];
            if d.is_zero() {
                if !xi.is_zero() {
                    return None;
                }
            } else {
                if !xi.is_multiple_of(&d) {
                    return None;
                }
                y.push(xi / &d);
            }
        }
        // c = y · U
        let yrow = IntMatrix::from_rows(vec![y]).ok()?;
        let c = yrow.mul(&smith.left).ok()?;
        Some(c.row(0).to_vec())
    }
}

/// Saturation `{x ∈ ambient : n·x ∈ span(sub) for some n > 0}`, in row-Hermite basis.
pub fn saturate(sub: &Sublattice) -> Result<Sublattice> {
    let r = sub.rank();
    if r == 0 {
        return Ok(sub.clone());
    }
    let smith = snf(&sub.basis_matrix());
    if smith.invariant_factors().len() != r {
        return Err(Error::contract("sublattice basis vectors are linearly dependent"));
    }
    // B = U⁻¹·S·V⁻¹, so the first r rows of V⁻¹ span the same rational space and
    // extend to a basis of the ambient lattice.
    let rows: Vec<Vec<Int>> = (0..r).map(|i| smith.right_inverse.row(i).to_vec()).collect();
    let (h, _) = hnf(&IntMatrix::from_rows(rows)?);
    let basis = (0..r).map(|i| LatticeVector::new(h.row(i).to_vec())).collect();
    Sublattice::new(sub.ambient.clone(), basis)
}

/// Sign pattern of a nondegenerate form of rank ≤ 2: `(positive, negative)` counts.
pub fn signature_2x2(gram: &IntMatrix) -> Option<(usize, usize)> {
    let det = gram.determinant().ok()?;
    if det.is_zero() {
        return None;
    }
    match gram.nrows() {
        1 => Some(if gram[(0, 0)].is_positive() { (1, 0) } else { (0, 1) }),
        2 if det.is_negative() => Some((1, 1)),
        2 if gram[(0, 0)].is_positive() || gram[(1, 1)].is_positive() => Some((2, 0)),
        2 => Some((0, 2)),
        _ => None,
    }
}
