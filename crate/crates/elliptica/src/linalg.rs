//! Small dense complex matrices acting on tensor products of `C^n`.
//!
//! Basis vectors of `C^n ⊗ C^n` are ordered `(i1, i2) ↦ i1·n + i2`, which for
//! `n = 2` gives `(++, +−, −+, −−)`.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::specfun::C64;

/// Inversion refuses matrices whose 1-norm condition estimate exceeds this.
pub const CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(pub DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn scale(&self, k: C64) -> Self {
        Self(&self.0 * k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    fn one_norm(m: &DMatrix<C64>) -> f64 {
        m.column_iter()
            .map(|col| col.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU inverse with a 1-norm condition guard.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .0
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::IllConditioned {
                condition: f64::INFINITY,
            })?;
        let condition = Self::one_norm(&self.0) * Self::one_norm(&inv);
        if !(condition <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned { condition });
        }
        Ok(Self(inv))
    }

    /// Partial transpose on tensor factor `factor` (1 or 2) of `C^n ⊗ C^n`.
    pub fn partial_transpose(&self, n: usize, factor: u8) -> Self {
        assert_eq!(self.dim(), n * n, "matrix is not on C^n ⊗ C^n");
        Self::from_fn(n * n, |r, c| {
            let (i1, i2) = (r / n, r % n);
            let (j1, j2) = (c / n, c % n);
            match factor {
                1 => self.get(j1 * n + i2, i1 * n + j2),
                2 => self.get(i1 * n + j2, j1 * n + i2),
                _ => panic!("tensor factor must be 1 or 2"),
            }
        })
    }

    /// `P A P` with `P` the flip of the two tensor factors: `A₁₂ ↦ A₂₁`.
    pub fn flip_factors(&self, n: usize) -> Self {
        assert_eq!(self.dim(), n * n, "matrix is not on C^n ⊗ C^n");
        Self::from_fn(n * n, |r, c| {
            let r2 = (r % n) * n + r / n;
            let c2 = (c % n) * n + c / n;
            self.get(r2, c2)
        })
    }

    /// Embed a two-site operator into three sites `{a, b}` ⊂ `{0, 1, 2}`.
    pub fn embed_pair(&self, n: usize, a: usize, b: usize) -> Self {
        assert!(a < 3 && b < 3 && a != b);
        let other = 3 - a - b;
        let d = n * n * n;
        Self::from_fn(d, |r, c| {
            let ri = [r / (n * n), (r / n) % n, r % n];
            let ci = [c / (n * n), (c / n) % n, c % n];
            if ri[other] != ci[other] {
                return C64::new(0.0, 0.0);
            }
            self.get(ri[a] * n + ri[b], ci[a] * n + ci[b])
        })
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let v = self.get(i, j);
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

/// `‖a − b‖_F / ‖b‖_F`, or the absolute defect when `b` vanishes.
pub fn rel_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a.add(&b.scale(C64::new(-1.0, 0.0))).frobenius();
    let scale = b.frobenius();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `|a − b| / |b|`, or `|a − b|` when `b` vanishes.
pub fn rel_scalar(a: C64, b: C64) -> f64 {
    let scale = b.norm();
    if scale > 0.0 {
        (a - b).norm() / scale
    } else {
        (a - b).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_follows_basis_order() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(5.0, 0.0)], vec![c(6.0, 0.0), c(7.0, 0.0)]]);
        let k = a.kron(&b);
        // entry ((i1,i2),(j1,j2)) = a[i1][j1] b[i2][j2]
        assert_eq!(k.get(2, 1), a.get(1, 0) * b.get(0, 1));
        assert_eq!(k.get(3, 2), a.get(1, 1) * b.get(1, 0));
    }

    #[test]
    fn partial_transposes_of_product_state() {
        let a = ComplexMatrix::from_fn(3, |i, j| c(i as f64 + 0.5, j as f64 * 2.0));
        let b = ComplexMatrix::from_fn(3, |i, j| c((i * j) as f64, 1.0 + i as f64));
        let ab = a.kron(&b);
        let at = ComplexMatrix(a.0.transpose());
        let bt = ComplexMatrix(b.0.transpose());
        assert_eq!(ab.partial_transpose(3, 1), at.kron(&b));
        assert_eq!(ab.partial_transpose(3, 2), a.kron(&bt));
        assert_eq!(ab.flip_factors(3), b.kron(&a));
    }

    #[test]
    fn embedding_matches_kron_on_adjacent_sites() {
        let m = ComplexMatrix::from_fn(4, |i, j| c((i * 4 + j) as f64, -(j as f64)));
        let id = ComplexMatrix::identity(2);
        assert_eq!(m.embed_pair(2, 0, 1), m.kron(&id));
        assert_eq!(m.embed_pair(2, 1, 2), id.kron(&m));
    }

    #[test]
    fn inverse_and_condition_guard() {
        let m = ComplexMatrix::from_rows(&[vec![c(2.0, 1.0), c(1.0, 0.0)], vec![c(0.0, 1.0), c(3.0, 0.0)]]);
        let prod = m.mul(&m.inverse().unwrap());
        assert!(rel_residual(&prod, &ComplexMatrix::identity(2)) < 1e-15);
        let singular = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0 + 1e-13, 0.0)]]);
        assert!(matches!(singular.inverse(), Err(Error::IllConditioned { .. })));
    }
}
