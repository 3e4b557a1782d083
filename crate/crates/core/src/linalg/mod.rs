//! Small dense complex linear algebra.
//!
//! Only what the channel model and the Monte Carlo kernel need: a Hermitian
//! matrix type, its eigenvalues (cyclic Jacobi), and a Cholesky-based solver
//! for Hermitian positive definite systems.

mod cholesky;
mod jacobi;

pub use cholesky::{cholesky, hpd_solve, CholeskyFactor};
pub use jacobi::hermitian_eigenvalues;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when checking `m[i][j] == conj(m[j][i])`, relative to
/// `max(1, max |m[i][j]|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Square Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from row-major entries, checking the Hermitian symmetry.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation(
                "dim",
                "matrix dimension must be at least 1",
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::validation(
                "entries",
                format!(
                    "expected {} entries for dim {dim}, got {}",
                    dim * dim,
                    entries.len()
                ),
            ));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::validation(
                "entries",
                "matrix contains NaN or infinite values",
            ));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        for i in 0..dim {
            for j in i..dim {
                let deviation = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if deviation > HERMITIAN_TOL * scale {
                    return Err(Error::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds a real symmetric matrix.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Builds `m` from a closure over `(row, col)` and only reads the upper
    /// triangle; the lower triangle is filled with conjugates so the result is
    /// exactly Hermitian.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation(
                "dim",
                "matrix dimension must be at least 1",
            ));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let d = f(i, i);
            entries[i * dim + i] = Complex64::new(d.re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v.conj();
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_upper_fn(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return Err(Error::validation(
                "rhs",
                format!(
                    "vector length {} does not match matrix dim {}",
                    v.dim(),
                    self.dim
                ),
            ));
        }
        let out = (0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()
            })
            .collect();
        Ok(ComplexVector(out))
    }
}

/// Dense complex vector, length at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation(
                "dim",
                "vector dimension must be at least 1",
            ));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product `self^* other`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianMatrix::from_real(2, &[1.0, 2.0, 3.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { row: 0, col: 1, .. }));

        let c = |re, im| Complex64::new(re, im);
        // off-diagonal pair not conjugate
        let m = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)];
        assert!(HermitianMatrix::new(2, m).is_err());
        // complex diagonal
        let m = vec![c(1.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(HermitianMatrix::new(2, m).is_err());
    }

    #[test]
    fn rejects_empty_and_misshaped() {
        assert!(HermitianMatrix::new(0, vec![]).is_err());
        assert!(HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0]).is_err());
        assert!(ComplexVector::new(vec![]).is_err());
    }

    #[test]
    fn basic_accessors() {
        let m = HermitianMatrix::from_real(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        assert_eq!(m.trace(), 5.0);
        assert!((m.frobenius_norm() - 15f64.sqrt()).abs() < 1e-15);
        let v = ComplexVector::from_real(&[1.0, -1.0]).unwrap();
        let mv = m.mul_vec(&v).unwrap();
        assert_eq!(mv.as_slice()[0].re, 1.0);
        assert_eq!(mv.as_slice()[1].re, -2.0);
    }
}
