use num_complex::Complex64;

use super::HermitianMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;
const REL_TOL: f64 = 1e-12;

/// Eigenvalues of a Hermitian matrix, in ascending order.
///
/// Cyclic Jacobi: each sweep visits every upper off-diagonal pair and
/// annihilates it with a (phase-corrected) plane rotation. Iteration stops
/// once the off-diagonal Frobenius norm falls below `1e-12 * ||m||_F`.
/// Matrices with no imaginary parts take a purely real path.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let scale = m.frobenius_norm();
    let mut values = if m.is_real() {
        let a: Vec<f64> = m.entries().iter().map(|z| z.re).collect();
        jacobi_real(a, m.dim(), scale)?
    } else {
        jacobi_complex(m.entries().to_vec(), m.dim(), scale)?
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn off_norm_real(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

fn off_norm_complex(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j].norm_sqr();
        }
    }
    s.sqrt()
}

/// Rotation parameters `(t, c, s)` that zero the `(p, q)` entry of the 2x2
/// block `[[app, r], [r, aqq]]`.
#[inline]
fn rotation(app: f64, aqq: f64, r: f64) -> (f64, f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c)
}

fn jacobi_real(mut a: Vec<f64>, n: usize, scale: f64) -> Result<Vec<f64>> {
    let target = REL_TOL * scale;
    let mut residual = off_norm_real(&a, n);
    for _ in 0..MAX_SWEEPS {
        if residual <= target {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (t, c, s) = rotation(a[p * n + p], a[q * n + q], apq);
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
            }
        }
        residual = off_norm_real(&a, n);
    }
    if residual <= target {
        return Ok((0..n).map(|i| a[i * n + i]).collect());
    }
    Err(Error::EigenNoConvergence {
        sweeps: MAX_SWEEPS,
        residual,
    })
}

fn jacobi_complex(mut a: Vec<Complex64>, n: usize, scale: f64) -> Result<Vec<f64>> {
    let target = REL_TOL * scale;
    let mut residual = off_norm_complex(&a, n);
    for _ in 0..MAX_SWEEPS {
        if residual <= target {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Rephase column/row q so that a[p][q] becomes the real value r,
                // then apply an ordinary real rotation.
                let phase = apq / r;
                for k in 0..n {
                    if k != q {
                        a[k * n + q] *= phase.conj();
                        a[q * n + k] = a[k * n + q].conj();
                    }
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let (t, c, s) = rotation(app, aqq, r);
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = akp * c - akq * s;
                    let new_kq = akp * s + akq * c;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp.conj();
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq.conj();
                }
            }
        }
        residual = off_norm_complex(&a, n);
    }
    if residual <= target {
        return Ok((0..n).map(|i| a[i * n + i].re).collect());
    }
    Err(Error::EigenNoConvergence {
        sweeps: MAX_SWEEPS,
        residual,
    })
}
