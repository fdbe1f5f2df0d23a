//! Small helpers for complex dense linear algebra.
//!
//! All matrices here are square and tiny (n = 2..4 in practice), so we use
//! dynamically sized `nalgebra` matrices throughout and lean on its QR,
//! Cholesky and self-adjoint eigendecomposition.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity_c(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Conjugate transpose.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_re(m: &RMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    max_abs(&(m - m.adjoint())) < tol
}

pub fn is_anti_hermitian(m: &CMatrix, tol: f64) -> bool {
    max_abs(&(m + m.adjoint())) < tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - identity_c(n))) < tol
}

/// Eigendecomposition of a Hermitian matrix: returns (eigenvalues, unitary U)
/// with `m = U diag(w) U^H`.
pub fn herm_eigen(m: &CMatrix) -> (RVector, CMatrix) {
    let se = m.clone().symmetric_eigen();
    (se.eigenvalues, se.eigenvectors)
}

/// `exp(m)` for Hermitian `m`, via eigendecomposition.
pub fn exp_hermitian(m: &CMatrix) -> CMatrix {
    let (w, u) = herm_eigen(m);
    let d = CMatrix::from_diagonal(&w.map(|x| c(x.exp())));
    &u * d * u.adjoint()
}

/// `log(p)` for Hermitian positive-definite `p`, via eigendecomposition.
pub fn log_hpd(p: &CMatrix) -> Result<CMatrix> {
    let (w, u) = herm_eigen(p);
    if w.iter().any(|&x| x <= 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let d = CMatrix::from_diagonal(&w.map(|x| c(x.ln())));
    Ok(&u * d * u.adjoint())
}

/// `exp(x)` for anti-Hermitian `x`; the result is unitary.
pub fn exp_anti_hermitian(x: &CMatrix) -> CMatrix {
    // x = i h with h Hermitian, so exp(x) = U diag(exp(i w)) U^H.
    let h = x.map(|z| -I * z);
    let (w, u) = herm_eigen(&h);
    let d = CMatrix::from_diagonal(&w.map(|t| (I * c(t)).exp()));
    &u * d * u.adjoint()
}

/// Principal logarithm of a matrix close to the identity, by the series
/// `log(1 + x) = x - x^2/2 + ...`. Requires `||u - 1|| < 1`; intended for
/// finite-difference charts where the argument is within ~1e-3 of identity.
pub fn log_near_identity(u: &CMatrix) -> Result<CMatrix> {
    let n = u.nrows();
    let x = u - identity_c(n);
    if max_abs(&x) > 0.5 {
        return Err(Error::InvalidArgument(
            "matrix too far from identity for series logarithm".into(),
        ));
    }
    let mut term = x.clone();
    let mut sum = x.clone();
    for k in 2..200 {
        term *= &x;
        let contrib = term.map(|z| z / c(k as f64)) * c(if k % 2 == 0 { -1.0 } else { 1.0 });
        sum += &contrib;
        if max_abs(&contrib) < 1e-18 {
            break;
        }
    }
    Ok(sum)
}

/// Upper-triangular factor `b` with positive real diagonal and `b b^H = p`,
/// for Hermitian positive-definite `p`. Obtained from the standard Cholesky
/// factorization of the anti-diagonally permuted matrix.
pub fn reverse_cholesky(p: &CMatrix) -> Result<CMatrix> {
    let n = p.nrows();
    let j = exchange_matrix(n);
    let flipped = &j * p * &j;
    let chol = flipped.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    // nalgebra's complex Cholesky does not reject indefinite input; a
    // genuine factor of a Hermitian positive-definite matrix has positive
    // real diagonal.
    for i in 0..n {
        let d = l[(i, i)];
        if d.re <= 0.0 || d.re.is_nan() || d.im.abs() > 1e-10 * (1.0 + d.re.abs()) {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let mut b = &j * l * &j;
    // The factor is exactly upper triangular with real diagonal; scrub the
    // rounding noise so downstream triangularity checks are exact.
    for i in 0..n {
        for k in 0..i {
            b[(i, k)] = c(0.0);
        }
        b[(i, i)] = c(b[(i, i)].re);
    }
    Ok(b)
}

fn exchange_matrix(n: usize) -> CMatrix {
    let mut j = CMatrix::zeros(n, n);
    for i in 0..n {
        j[(i, n - 1 - i)] = c(1.0);
    }
    j
}

/// `sinh(x)/x`, series-evaluated near zero.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// `sinh(x)/x - 1`, without cancellation near zero.
pub fn sinhc_m1(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    } else {
        x.sinh() / x - 1.0
    }
}

/// `cosh(x) - 1`, without cancellation near zero.
pub fn cosh_m1(x: f64) -> f64 {
    let s = (x / 2.0).sinh();
    2.0 * s * s
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().max(1e-300).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(ly.iter()) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
