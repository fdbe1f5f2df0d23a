//! Group-level maps: Iwasawa decompositions of SL(n,C), dressing actions,
//! the anti-involution tau, the diffeomorphism f : AN -> P and its inverse,
//! and the family E_s : k* -> AN with its SU(2) closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liealg::{self, AlgebraElement, BasisData, CoordVector};
use crate::linalg::{self, c, identity_c, CMatrix, I};

const UNITARY_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-8;

/// An element of SU(n).
#[derive(Debug, Clone)]
pub struct UnitaryElement {
    entries: CMatrix,
}

impl UnitaryElement {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !linalg::is_unitary(&entries, UNITARY_TOL) {
            return Err(Error::InvalidArgument("matrix is not unitary".into()));
        }
        let det = entries.clone().determinant();
        if (det - c(1.0)).norm() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "unitary matrix must have det 1, got {det}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: identity_c(n) }
    }

    /// exp of a compact algebra element.
    pub fn exp(x: &AlgebraElement) -> Self {
        Self { entries: linalg::exp_anti_hermitian(x.entries()) }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { entries: &self.entries * &other.entries }
    }

    pub fn inverse(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }
}

/// An element of AN: upper triangular, positive real diagonal, det 1.
#[derive(Debug, Clone)]
pub struct TriangularANElement {
    entries: CMatrix,
}

impl TriangularANElement {
    pub fn new(mut entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        let mut det = 1.0;
        for i in 0..n {
            let d = entries[(i, i)];
            if d.im.abs() > UNITARY_TOL || d.re <= 0.0 {
                return Err(Error::InvalidArgument(
                    "AN element needs positive real diagonal".into(),
                ));
            }
            det *= d.re;
            for j in 0..i {
                if entries[(i, j)].norm() > UNITARY_TOL {
                    return Err(Error::InvalidArgument("AN element must be upper triangular".into()));
                }
                entries[(i, j)] = c(0.0);
            }
            entries[(i, i)] = c(d.re);
        }
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("AN element must have det 1, got {det}")));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: identity_c(n) }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn inverse(&self) -> Self {
        let inv = self
            .entries
            .clone()
            .try_inverse()
            .expect("triangular matrix with positive diagonal is invertible");
        Self { entries: inv }
    }
}

/// Coordinates (a, u, v) of an element of the AN group of SL(2,C):
/// `p = [[a, u + iv], [0, 1/a]]` with `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2ANCoords {
    pub a: f64,
    pub u: f64,
    pub v: f64,
}

impl SU2ANCoords {
    pub fn new(a: f64, u: f64, v: f64) -> Result<Self> {
        if a <= 0.0 {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        Ok(Self { a, u, v })
    }

    pub fn to_matrix(&self) -> TriangularANElement {
        let mut m = identity_c(2);
        m[(0, 0)] = c(self.a);
        m[(0, 1)] = Complex64::new(self.u, self.v);
        m[(1, 1)] = c(1.0 / self.a);
        TriangularANElement { entries: m }
    }

    pub fn from_matrix(b: &TriangularANElement) -> Result<Self> {
        if b.n() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: b.n() });
        }
        let e = b.entries();
        Self::new(e[(0, 0)].re, e[(0, 1)].re, e[(0, 1)].im)
    }
}

/// A Hermitian positive-definite matrix of determinant 1: the image of AN
/// under `f(b) = b tau(b)`.
#[derive(Debug, Clone)]
pub struct HermitianPositiveElement {
    entries: CMatrix,
}

impl HermitianPositiveElement {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !linalg::is_hermitian(&entries, 1e-10) {
            return Err(Error::InvalidArgument("matrix is not Hermitian".into()));
        }
        let (eigenvalues, _) = linalg::herm_eigen(&entries);
        if eigenvalues.iter().any(|&w| w <= 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let det: f64 = eigenvalues.iter().product();
        if (det - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("matrix must have det 1, got {det}")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

/// The anti-holomorphic involution `tau(g) = conj(g)^T`.
pub fn tau(g: &CMatrix) -> CMatrix {
    g.adjoint()
}

fn check_det_one(g: &CMatrix) -> Result<()> {
    let det = g.clone().determinant();
    if det.norm() < 1e-12 {
        return Err(Error::InvalidArgument("matrix is singular".into()));
    }
    if (det - c(1.0)).norm() > DET_TOL {
        return Err(Error::InvalidArgument(format!("matrix must have det 1, got {det}")));
    }
    Ok(())
}

/// Iwasawa decomposition `g = k b` with `k` in SU(n) and `b` in AN,
/// computed by QR with the phases of the R diagonal absorbed into Q.
pub fn iwasawa_kan(g: &CMatrix) -> Result<(UnitaryElement, TriangularANElement)> {
    check_det_one(g)?;
    let n = g.nrows();
    let qr = g.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for i in 0..n {
        let d = r[(i, i)];
        if d.norm() < 1e-14 {
            return Err(Error::InvalidArgument("matrix is singular".into()));
        }
        let phase = d / c(d.norm());
        // scale column i of q by phase, row i of r by conj(phase)
        for row in 0..n {
            q[(row, i)] *= phase;
        }
        for col in 0..n {
            r[(i, col)] *= phase.conj();
        }
    }
    for i in 0..n {
        r[(i, i)] = c(r[(i, i)].re);
        for j in 0..i {
            r[(i, j)] = c(0.0);
        }
    }
    Ok((UnitaryElement { entries: q }, TriangularANElement { entries: r }))
}

/// Iwasawa decomposition `g = b k`, via the reverse Cholesky factorization
/// of `g g^H = b b^H`.
pub fn iwasawa_ank(g: &CMatrix) -> Result<(TriangularANElement, UnitaryElement)> {
    check_det_one(g)?;
    let p = g * g.adjoint();
    let b = linalg::reverse_cholesky(&p)?;
    let binv = b.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let k = &binv * g;
    Ok((TriangularANElement { entries: b }, UnitaryElement { entries: k }))
}

/// Left dressing action of K on AN: the AN factor of `k b`.
pub fn dress_left(k: &UnitaryElement, b: &TriangularANElement) -> Result<TriangularANElement> {
    let g = k.entries() * b.entries();
    Ok(iwasawa_ank(&g)?.0)
}

/// Right dressing action of AN on K: the K factor of `k b`.
pub fn dress_right(k: &UnitaryElement, b: &TriangularANElement) -> Result<UnitaryElement> {
    let g = k.entries() * b.entries();
    Ok(iwasawa_ank(&g)?.1)
}

/// `f(b) = b tau(b)`, a Hermitian positive-definite matrix of determinant 1.
pub fn f_map(b: &TriangularANElement) -> HermitianPositiveElement {
    // Scrub the rounding asymmetry so the product validates as Hermitian.
    let p = b.entries() * tau(b.entries());
    let p = (&p + p.adjoint()) * c(0.5);
    HermitianPositiveElement::new(p).expect("b tau(b) is Hermitian positive with det 1")
}

/// Inverse of `f`: the unique upper-triangular positive-diagonal factor with
/// `b b^H = p`.
pub fn f_inv(p: &CMatrix) -> Result<TriangularANElement> {
    if !linalg::is_hermitian(p, 1e-10) {
        return Err(Error::InvalidArgument("f_inv expects a Hermitian matrix".into()));
    }
    let b = linalg::reverse_cholesky(p)?;
    Ok(TriangularANElement { entries: b })
}

/// The map `E_s(lambda) = f^{-1}(exp(2 s sqrt(-1) phi(lambda)))`.
pub fn e_s(lambda: &CoordVector, s: f64, basis: &BasisData) -> Result<TriangularANElement> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let x = liealg::phi(lambda, basis)?;
    let h = x.entries().map(|z| I * z * c(2.0 * s));
    let p = linalg::exp_hermitian(&h);
    f_inv(&p)
}

/// Inverse of `E_s`, via the Hermitian logarithm of `f(b)`.
pub fn e_s_inv(b: &TriangularANElement, s: f64, basis: &BasisData) -> Result<CoordVector> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let p = f_map(b);
    let l = linalg::log_hpd(p.entries())?;
    // Scrub the rounding noise off the exact symmetries of the log before
    // the compactness validation: the analytic value is Hermitian and
    // traceless, and dividing by small s amplifies the noise.
    let l = liealg::traceless_part(&((&l + l.adjoint()) * c(0.5)));
    let x = l.map(|z| -I * z / c(2.0 * s));
    let el = AlgebraElement::compact(x)
        .map_err(|_| Error::Internal("Hermitian log produced a non-compact element".into()))?;
    liealg::phi_inv(&el, basis)
}

/// Closed form of `E_s` on su(2)*: for `lambda = xi t* + eta1 x* + eta2 y*`,
/// with `Delta = |lambda|` and `w = s Delta / sqrt 2`,
/// `a = (cosh w + xi sinh(w)/Delta)^{-1/2}` and
/// `z = a (i eta1 - eta2) sinh(w)/Delta`.
pub fn es_su2_closed(xi: f64, eta1: f64, eta2: f64, s: f64) -> Result<SU2ANCoords> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let delta = (xi * xi + eta1 * eta1 + eta2 * eta2).sqrt();
    let w = s * delta / 2.0_f64.sqrt();
    // sinh(w)/Delta = s sinhc(w) / sqrt 2, finite as Delta -> 0.
    let sh_over_delta = s * linalg::sinhc(w) / 2.0_f64.sqrt();
    let a = (w.cosh() + xi * sh_over_delta).powf(-0.5);
    let u = -a * eta2 * sh_over_delta;
    let v = a * eta1 * sh_over_delta;
    SU2ANCoords::new(a, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::basis_su_n;
    use crate::sample;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tau_of_unitary_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = sample::random_su(&mut rng, 3);
        let prod = tau(k.entries()) * k.entries();
        assert!(linalg::max_abs(&(prod - identity_c(3))) < 1e-12);
        assert!(linalg::max_abs(&(tau(&identity_c(3)) - identity_c(3))) < 1e-15);
    }

    #[test]
    fn tau_of_an_is_lower_triangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = sample::random_an(&mut rng, 3);
        let t = tau(b.entries());
        for i in 0..3 {
            assert!(t[(i, i)].re > 0.0);
            assert!(t[(i, i)].im.abs() < 1e-14);
            for j in (i + 1)..3 {
                assert!(t[(i, j)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn iwasawa_kan_identity_and_unitary() {
        let id = identity_c(3);
        let (k, b) = iwasawa_kan(&id).unwrap();
        assert!(linalg::max_abs(&(k.entries() - &id)) < 1e-14);
        assert!(linalg::max_abs(&(b.entries() - &id)) < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = sample::random_su(&mut rng, 3);
        let (k, b) = iwasawa_kan(g.entries()).unwrap();
        assert!(linalg::max_abs(&(k.entries() - g.entries())) < 1e-12);
        assert!(linalg::max_abs(&(b.entries() - identity_c(3))) < 1e-12);
    }

    #[test]
    fn iwasawa_kan_of_an_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b0 = sample::random_an(&mut rng, 3);
        let (k, b) = iwasawa_kan(b0.entries()).unwrap();
        assert!(linalg::max_abs(&(k.entries() - identity_c(3))) < 1e-11);
        assert!(linalg::max_abs(&(b.entries() - b0.entries())) < 1e-11);
    }

    #[test]
    fn iwasawa_ank_roundtrip_and_uniqueness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 4] {
            for _ in 0..20 {
                let g = sample::random_sl(&mut rng, n);
                let (b, k) = iwasawa_ank(&g).unwrap();
                let recomposed = b.entries() * k.entries();
                assert!(linalg::max_abs(&(recomposed - &g)) < 1e-11);
                // b b^H = g g^H
                let lhs = b.entries() * b.entries().adjoint();
                let rhs = &g * g.adjoint();
                assert!(linalg::max_abs(&(lhs - rhs)) < 1e-10);
                // idempotency of decompose -> recompose -> decompose
                let g2 = b.entries() * k.entries();
                let (b2, k2) = iwasawa_ank(&g2).unwrap();
                assert!(linalg::max_abs(&(b2.entries() - b.entries())) < 1e-12);
                assert!(linalg::max_abs(&(k2.entries() - k.entries())) < 1e-12);
            }
        }
        // b0 in AN decomposes as (b0, e).
        let b0 = sample::random_an(&mut rng, 3);
        let (b, k) = iwasawa_ank(b0.entries()).unwrap();
        assert!(linalg::max_abs(&(b.entries() - b0.entries())) < 1e-11);
        assert!(linalg::max_abs(&(k.entries() - identity_c(3))) < 1e-11);
    }

    #[test]
    fn iwasawa_rejects_bad_input() {
        let mut g = identity_c(2);
        g[(0, 0)] = c(2.0); // det 2
        assert!(matches!(iwasawa_kan(&g), Err(Error::InvalidArgument(_))));
        assert!(matches!(iwasawa_ank(&g), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn dressing_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let k = sample::random_su(&mut rng, 2);
        let b = sample::random_an(&mut rng, 2);
        let e_k = UnitaryElement::identity(2);
        let e_b = TriangularANElement::identity(2);

        let d = dress_left(&e_k, &b).unwrap();
        assert!(linalg::max_abs(&(d.entries() - b.entries())) < 1e-12);
        let d = dress_left(&k, &e_b).unwrap();
        assert!(linalg::max_abs(&(d.entries() - identity_c(2))) < 1e-12);
        let d = dress_right(&k, &e_b).unwrap();
        assert!(linalg::max_abs(&(d.entries() - k.entries())) < 1e-12);

        // kb = dress_left(k, b) dress_right(k, b)
        let bl = dress_left(&k, &b).unwrap();
        let kr = dress_right(&k, &b).unwrap();
        let lhs = k.entries() * b.entries();
        let rhs = bl.entries() * kr.entries();
        assert!(linalg::max_abs(&(lhs - rhs)) < 1e-11);
    }

    #[test]
    fn dressing_composition_law() {
        // Two-path evaluation: dressing by k2 then k1 agrees with dressing
        // by the product k1 k2, since pr_AN(k1 k2 b) can be computed by
        // first splitting k2 b.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let k1 = sample::random_su(&mut rng, 2);
            let k2 = sample::random_su(&mut rng, 2);
            let b = sample::random_an(&mut rng, 2);
            let lhs = dress_left(&k1.mul(&k2), &b).unwrap();
            let inner_b = dress_left(&k2, &b).unwrap();
            let rhs = dress_left(&k1, &inner_b).unwrap();
            assert!(linalg::max_abs(&(lhs.entries() - rhs.entries())) < 1e-10);
        }
    }

    #[test]
    fn f_map_closed_form_su2() {
        let p = SU2ANCoords::new(0.8, 0.3, -0.5).unwrap();
        let b = p.to_matrix();
        let f = f_map(&b);
        let f = f.entries();
        let z = Complex64::new(0.3, -0.5);
        assert_abs_diff_eq!(f[(0, 0)].re, 0.8 * 0.8 + z.norm_sqr(), epsilon = 1e-14);
        assert!((f[(0, 1)] - z / c(0.8)).norm() < 1e-14);
        assert!((f[(1, 0)] - z.conj() / c(0.8)).norm() < 1e-14);
        assert_abs_diff_eq!(f[(1, 1)].re, 0.8_f64.powi(-2), epsilon = 1e-14);

        let id = TriangularANElement::identity(2);
        assert!(linalg::max_abs(&(f_map(&id).entries() - identity_c(2))) < 1e-15);
    }

    #[test]
    fn f_inv_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let b = sample::random_an(&mut rng, 3);
            let back = f_inv(f_map(&b).entries()).unwrap();
            assert!(linalg::max_abs(&(back.entries() - b.entries())) < 1e-11);
        }
    }

    #[test]
    fn f_inv_rejects_non_pd() {
        let mut m = identity_c(2);
        m[(0, 0)] = c(-1.0);
        assert!(f_inv(&m).is_err());
        assert!(matches!(
            HermitianPositiveElement::new(m),
            Err(Error::NotPositiveDefinite)
        ));
        // Positive-definite but det != 1.
        let m = identity_c(2) * c(2.0);
        assert!(HermitianPositiveElement::new(m).is_err());
    }

    #[test]
    fn es_on_torus_is_diagonal_exponential() {
        let basis = basis_su_n(2).unwrap();
        let xi = 1.3;
        let s = 0.6;
        let lam = CoordVector::kstar_from_slice(&[xi, 0.0, 0.0]);
        let b = e_s(&lam, s, &basis).unwrap();
        let r = s * xi / (2.0 * 2.0_f64.sqrt());
        assert_abs_diff_eq!(b.entries()[(0, 0)].re, (-r).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.entries()[(1, 1)].re, r.exp(), epsilon = 1e-12);
        assert!(b.entries()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn es_zero_is_identity() {
        let basis = basis_su_n(2).unwrap();
        let lam = CoordVector::kstar_from_slice(&[0.0, 0.0, 0.0]);
        let b = e_s(&lam, 0.5, &basis).unwrap();
        assert!(linalg::max_abs(&(b.entries() - identity_c(2))) < 1e-14);
    }

    #[test]
    fn es_rejects_nonpositive_s() {
        let basis = basis_su_n(2).unwrap();
        let lam = CoordVector::kstar_from_slice(&[1.0, 0.0, 0.0]);
        assert!(e_s(&lam, 0.0, &basis).is_err());
        assert!(e_s(&lam, -0.3, &basis).is_err());
    }

    #[test]
    fn es_closed_form_matches_generic() {
        let basis = basis_su_n(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (lam, s) = sample::random_kstar_s(&mut rng, &basis, 0.1, 5.0, 0.05, 2.0, 8.0);
            let b = e_s(&lam, s, &basis).unwrap();
            let closed =
                es_su2_closed(lam.coords[0], lam.coords[1], lam.coords[2], s).unwrap();
            let bc = closed.to_matrix();
            assert!(
                linalg::max_abs(&(b.entries() - bc.entries())) < 1e-10,
                "mismatch at lambda={:?} s={s}",
                lam.coords.as_slice()
            );
        }
    }

    #[test]
    fn es_closed_form_on_torus() {
        let s = 0.5;
        let xi = 2.0;
        let p = es_su2_closed(xi, 0.0, 0.0, s).unwrap();
        assert_abs_diff_eq!(p.a, (-s * xi / (2.0 * 2.0_f64.sqrt())).exp(), epsilon = 1e-13);
        assert_abs_diff_eq!(p.u, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.v, 0.0, epsilon = 1e-15);
        let zero = es_su2_closed(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(zero.a, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn es_inv_roundtrip() {
        let basis = basis_su_n(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let (lam, s) = sample::random_kstar_s(&mut rng, &basis, 0.1, 10.0, 0.05, 2.0, 8.0);
            let b = e_s(&lam, s, &basis).unwrap();
            let back = e_s_inv(&b, s, &basis).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(back.coords[i], lam.coords[i], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn es_equivariance_su2_su3() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3] {
            let basis = basis_su_n(n).unwrap();
            for _ in 0..20 {
                let (lam, s) = sample::random_kstar_s(&mut rng, &basis, 0.1, 5.0, 0.05, 2.0, 4.0);
                let k = sample::random_su(&mut rng, n);
                let adk = liealg::adjoint_matrix_k(k.entries(), &basis).unwrap();
                let coad = CoordVector::new_kstar(&adk * &lam.coords);
                let lhs = e_s(&coad, s, &basis).unwrap();
                let rhs = dress_left(&k, &e_s(&lam, s, &basis).unwrap()).unwrap();
                assert!(
                    linalg::max_abs(&(lhs.entries() - rhs.entries())) < 1e-9,
                    "equivariance failed for n={n}"
                );
            }
        }
    }

    #[test]
    fn es_small_s_linearization_rate() {
        // || E_s(lambda) - (1 + s i phi(lambda) projected) || = O(s^2):
        // log-log slope of the deviation from first order is at least 1.9.
        let basis = basis_su_n(2).unwrap();
        let lam = CoordVector::kstar_from_slice(&[0.9, -0.4, 0.7]);
        let x = liealg::phi(&lam, &basis).unwrap();
        let first_order = liealg::proj_an(
            &AlgebraElement::general(x.entries().map(|z| I * z)).unwrap(),
        );
        let grid = [1e-1, 1e-2, 1e-3, 1e-4];
        let mut devs = Vec::new();
        for &s in &grid {
            let b = e_s(&lam, s, &basis).unwrap();
            let lin = identity_c(2) + first_order.entries() * c(s);
            devs.push(linalg::max_abs(&(b.entries() - lin)));
        }
        let slope = linalg::loglog_slope(&grid, &devs);
        assert!(slope >= 1.9, "slope {slope} below 1.9");
    }
}
