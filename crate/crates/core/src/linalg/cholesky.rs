use num_complex::Complex64;

use super::{ComplexVector, HermitianMatrix};
use crate::error::{Error, Result};

/// Lower-triangular factor `L` with `L L^* = m`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    // row-major, upper triangle left at zero
    l: Vec<Complex64>,
}

/// Factorizes a Hermitian positive definite matrix.
pub fn cholesky(m: &HermitianMatrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut diag = m.get(j, j).re;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if diag.is_nan() || diag <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                value: diag,
            });
        }
        let ljj = diag.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(CholeskyFactor { dim: n, l })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.l[row * self.dim + col]
    }

    /// Solves `L L^* x = rhs` in place.
    pub fn solve_in_place(&self, x: &mut [Complex64]) {
        let n = self.dim;
        debug_assert_eq!(x.len(), n);
        // L y = b
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.l[i * n + k] * x[k];
            }
            x[i] = s / self.l[i * n + i].re;
        }
        // L^* x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[k * n + i].conj() * x[k];
            }
            x[i] = s / self.l[i * n + i].re;
        }
    }

    /// Computes `L v`.
    pub fn mul_lower(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..=i).map(|k| self.l[i * n + k] * v[k]).sum())
            .collect()
    }
}

/// Solves `m x = rhs` for Hermitian positive definite `m`.
pub fn hpd_solve(m: &HermitianMatrix, rhs: &ComplexVector) -> Result<ComplexVector> {
    if rhs.dim() != m.dim() {
        return Err(Error::validation(
            "rhs",
            format!(
                "vector length {} does not match matrix dim {}",
                rhs.dim(),
                m.dim()
            ),
        ));
    }
    let factor = cholesky(m)?;
    let mut x = rhs.as_slice().to_vec();
    factor.solve_in_place(&mut x);
    ComplexVector::new(x)
}
