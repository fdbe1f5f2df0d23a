//! Seeded random sampling of group and algebra elements, shared by the
//! verification suites and tests. All draws are deterministic for a fixed
//! generator state.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::grp::{iwasawa_kan, TriangularANElement, UnitaryElement};
use crate::liealg::{BasisData, CoordVector};
use crate::linalg::{c, CMatrix};

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_cmatrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

/// Haar-ish random SU(n) element: QR of a complex Gaussian-like matrix with
/// the determinant phase removed.
pub fn random_su<R: Rng>(rng: &mut R, n: usize) -> UnitaryElement {
    loop {
        let g = random_cmatrix(rng, n);
        let det = g.clone().determinant();
        if det.norm() < 1e-3 {
            continue;
        }
        let sl = g.map(|z| z / det.powf(1.0 / n as f64));
        if let Ok((k, _)) = iwasawa_kan(&sl) {
            return k;
        }
    }
}

/// Random SL(n,C) element, resampled to avoid ill-conditioned draws.
pub fn random_sl<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let g = random_cmatrix(rng, n);
        let det = g.clone().determinant();
        if det.norm() < 1e-2 {
            continue;
        }
        let sl = g.map(|z| z / det.powf(1.0 / n as f64));
        if sl.iter().any(|z| z.norm() > 10.0) {
            continue;
        }
        return sl;
    }
}

/// Random AN element with determinant 1: positive diagonal with log entries
/// summing to zero, moderate upper-triangular part.
pub fn random_an<R: Rng>(rng: &mut R, n: usize) -> TriangularANElement {
    let mut logs: Vec<f64> = (0..n).map(|_| rng.random_range(-0.8..0.8)).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    for l in logs.iter_mut() {
        *l -= mean;
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c(logs[i].exp());
        for j in (i + 1)..n {
            m[(i, j)] = random_complex(rng);
        }
    }
    TriangularANElement::new(m).expect("constructed AN element is valid")
}

/// Random point of k* with norm in `[norm_min, norm_max]`.
pub fn random_kstar<R: Rng>(
    rng: &mut R,
    basis: &BasisData,
    norm_min: f64,
    norm_max: f64,
) -> CoordVector {
    let d = basis.dim();
    loop {
        let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm < 1e-3 {
            continue;
        }
        let target = rng.random_range(norm_min..norm_max);
        return CoordVector::new_kstar(v * (target / norm));
    }
}

/// Random `(lambda, s)` with `|lambda|` in `[norm_min, norm_max]`, `s` in
/// `[s_min, s_max]`, and the product `s |lambda|` capped by `cap` so that
/// the exponentials `e^{s sqrt(2) |lambda|}` stay within f64 working
/// precision for the downstream factorizations.
pub fn random_kstar_s<R: Rng>(
    rng: &mut R,
    basis: &BasisData,
    norm_min: f64,
    norm_max: f64,
    s_min: f64,
    s_max: f64,
    cap: f64,
) -> (CoordVector, f64) {
    loop {
        let lam = random_kstar(rng, basis, norm_min, norm_max);
        let s = rng.random_range(s_min..s_max);
        if s * lam.norm() <= cap {
            return (lam, s);
        }
    }
}

/// Random point of T*K = K x k*.
pub fn random_cotangent<R: Rng>(
    rng: &mut R,
    basis: &BasisData,
    norm_min: f64,
    norm_max: f64,
) -> crate::cotangent::CotangentPoint {
    let k = random_su(rng, basis.n);
    let xi = random_kstar(rng, basis, norm_min, norm_max);
    crate::cotangent::CotangentPoint::new(k, xi).expect("sampled point is valid")
}

/// Random unit-ish direction in k.
pub fn random_k_dir<R: Rng>(rng: &mut R, basis: &BasisData) -> CoordVector {
    let d = basis.dim();
    loop {
        let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        if v.norm() > 1e-3 {
            return CoordVector::new_k(v.normalize());
        }
    }
}
