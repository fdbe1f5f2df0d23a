//! The model T*K = K x k* in the left trivialization: the canonical
//! symplectic form, the K x K action with its infinitesimal generators, the
//! moment maps mu_L and mu_R, the differential of mu_L, and the AN-valued
//! moment map Psi_L = E_s o mu_L.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grp::{e_s, TriangularANElement, UnitaryElement};
use crate::liealg::{ad_star, adjoint_matrix_k, BasisData, CoordSpace, CoordVector};
use crate::poisson::FramedSkewMatrix;

/// A point (k, xi) of T*K = K x k*.
#[derive(Debug, Clone)]
pub struct CotangentPoint {
    pub k: UnitaryElement,
    pub xi: CoordVector,
}

impl CotangentPoint {
    pub fn new(k: UnitaryElement, xi: CoordVector) -> Result<Self> {
        if xi.space != CoordSpace::KStar {
            return Err(Error::InvalidArgument("fiber coordinates must be in k*".into()));
        }
        if xi.dim() != k.n() * k.n() - 1 {
            return Err(Error::DimensionMismatch {
                expected: k.n() * k.n() - 1,
                found: xi.dim(),
            });
        }
        Ok(Self { k, xi })
    }

    pub fn n(&self) -> usize {
        self.k.n()
    }

    pub fn digest(&self) -> String {
        format!("(k={:?}, xi={:?})", self.k.entries().as_slice(), self.xi.coords.as_slice())
    }
}

/// A tangent vector at a point of T*K: left-frame coordinates of the
/// K-direction and the vertical k* part.
#[derive(Debug, Clone)]
pub struct TangentAtPoint {
    pub k_dir: CoordVector,
    pub v_dir: CoordVector,
}

pub fn cotangent_frame_labels(basis: &BasisData) -> Vec<String> {
    let mut labels: Vec<String> = basis
        .labels
        .iter()
        .map(|l| format!("{}^L", l.display(basis.n)))
        .collect();
    labels.extend(basis.labels.iter().map(|l| format!("{}*", l.display(basis.n))));
    labels
}

/// The canonical symplectic form at `pt`, as the 2d x 2d matrix
/// `[[C0, I], [-I, 0]]` in the frame (left K-directions, then vertical
/// B*-directions), where `C0[a][b] = <xi, [e_a, e_b]>`. Equivalently
/// `omega((X, eta), (Y, zeta)) = <xi,[X,Y]> - <eta,Y> + <zeta,X>`.
pub fn omega_can_at(pt: &CotangentPoint, basis: &BasisData) -> Result<FramedSkewMatrix> {
    let d = basis.dim();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += pt.xi.coords[k] * basis.structure_constants[a][b][k];
            }
            m[(a, b)] = acc;
        }
        m[(a, d + a)] = 1.0;
        m[(d + a, a)] = -1.0;
    }
    FramedSkewMatrix::new(m, cotangent_frame_labels(basis), pt.digest())
}

/// `mu_L(k, xi) = Ad*_k xi`.
pub fn mu_l(pt: &CotangentPoint, basis: &BasisData) -> Result<CoordVector> {
    let adk = adjoint_matrix_k(pt.k.entries(), basis)?;
    Ok(CoordVector::new_kstar(&adk * &pt.xi.coords))
}

/// `mu_R(k, xi) = -xi`.
pub fn mu_r(pt: &CotangentPoint) -> CoordVector {
    CoordVector::new_kstar(-&pt.xi.coords)
}

/// The AN-valued moment map `Psi_L = E_s o mu_L`.
pub fn psi_l(pt: &CotangentPoint, s: f64, basis: &BasisData) -> Result<TriangularANElement> {
    e_s(&mu_l(pt, basis)?, s, basis)
}

/// The cotangent lift of the K x K action:
/// `L_{k1} R_{k2} (k, xi) = (k1 k k2^{-1}, Ad*_{k2} xi)`.
pub fn act(
    k1: &UnitaryElement,
    k2: &UnitaryElement,
    pt: &CotangentPoint,
    basis: &BasisData,
) -> Result<CotangentPoint> {
    let k = k1.mul(&pt.k).mul(&k2.inverse());
    let adk2 = adjoint_matrix_k(k2.entries(), basis)?;
    CotangentPoint::new(k, CoordVector::new_kstar(&adk2 * &pt.xi.coords))
}

/// Infinitesimal generator of `(X, Y)` under the K x K action, in the left
/// frame: the K part is `Ad_{k^{-1}} X - Y` and the vertical part is
/// `ad*_Y xi`.
pub fn inf_vf(
    x: &CoordVector,
    y: &CoordVector,
    pt: &CotangentPoint,
    basis: &BasisData,
) -> Result<TangentAtPoint> {
    if x.space != CoordSpace::K || y.space != CoordSpace::K {
        return Err(Error::InvalidArgument("generators must be k coordinates".into()));
    }
    let adkinv = adjoint_matrix_k(pt.k.inverse().entries(), basis)?;
    let k_dir = &adkinv * &x.coords - &y.coords;
    let v_dir = ad_star(y, &pt.xi, basis)?;
    Ok(TangentAtPoint { k_dir: CoordVector::new_k(k_dir), v_dir })
}

/// Converts left-frame K-direction coordinates of a tangent vector at `pt`
/// to right-frame coordinates, using `X^L_k = (Ad_k X)^R_k`.
pub fn left_to_right_frame(
    left: &CoordVector,
    pt: &CotangentPoint,
    basis: &BasisData,
) -> Result<CoordVector> {
    let adk = adjoint_matrix_k(pt.k.entries(), basis)?;
    Ok(CoordVector::new_k(&adk * &left.coords))
}

/// `d mu_L` applied to the tangent vector `(X^R_k, eta)` at `pt = (k, xi)`:
/// `ad*_X (Ad*_k xi) + Ad*_k eta`.
pub fn d_mu_l(
    pt: &CotangentPoint,
    x_right: &CoordVector,
    eta: &CoordVector,
    basis: &BasisData,
) -> Result<CoordVector> {
    if x_right.space != CoordSpace::K || eta.space != CoordSpace::KStar {
        return Err(Error::InvalidArgument("d_mu_l expects (k, k*) tangent data".into()));
    }
    let mul = mu_l(pt, basis)?;
    let first = ad_star(x_right, &mul, basis)?;
    let adk = adjoint_matrix_k(pt.k.entries(), basis)?;
    Ok(CoordVector::new_kstar(&first.coords + &adk * &eta.coords))
}

/// Evaluates a framed 2-form matrix on a pair of tangent vectors given in
/// the same frame (K-part then vertical part).
pub fn eval_two_form(m: &FramedSkewMatrix, v: &TangentAtPoint, w: &TangentAtPoint) -> f64 {
    let d = v.k_dir.dim();
    let mut vv = DVector::zeros(2 * d);
    let mut ww = DVector::zeros(2 * d);
    for i in 0..d {
        vv[i] = v.k_dir.coords[i];
        vv[d + i] = v.v_dir.coords[i];
        ww[i] = w.k_dir.coords[i];
        ww[d + i] = w.v_dir.coords[i];
    }
    (vv.transpose() * m.entries() * ww)[(0, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::basis_su_n;
    use crate::sample;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt_at_identity(xi: &[f64]) -> CotangentPoint {
        CotangentPoint::new(UnitaryElement::identity(2), CoordVector::kstar_from_slice(xi))
            .unwrap()
    }

    #[test]
    fn omega_can_blocks_at_zero_fiber() {
        let basis = basis_su_n(2).unwrap();
        let pt = pt_at_identity(&[0.0, 0.0, 0.0]);
        let m = omega_can_at(&pt, &basis).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_abs_diff_eq!(m.entries()[(a, b)], 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(m.entries()[(3 + a, 3 + b)], 0.0, epsilon = 1e-15);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(m.entries()[(a, 3 + b)], expected, epsilon = 1e-15);
                assert_abs_diff_eq!(m.entries()[(3 + a, b)], -expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn omega_can_bracket_block_su2() {
        let basis = basis_su_n(2).unwrap();
        let xi0 = 1.7;
        let pt = pt_at_identity(&[xi0, 0.0, 0.0]);
        let m = omega_can_at(&pt, &basis).unwrap();
        // C0[x][y] = <xi0 t*, [x,y]> = xi0 / sqrt 2; torus rows vanish.
        assert_abs_diff_eq!(m.entries()[(1, 2)], xi0 / 2.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(m.entries()[(0, 1)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.entries()[(0, 2)], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn omega_can_nondegenerate() {
        let basis = basis_su_n(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let pt = sample::random_cotangent(&mut rng, &basis, 0.1, 5.0);
        let det = omega_can_at(&pt, &basis).unwrap().entries().clone().determinant();
        assert!(det.abs() > 1e-10);
    }

    #[test]
    fn moment_maps_at_identity() {
        let basis = basis_su_n(2).unwrap();
        let pt = pt_at_identity(&[0.4, -0.8, 0.2]);
        let ml = mu_l(&pt, &basis).unwrap();
        let mr = mu_r(&pt);
        for i in 0..3 {
            assert_abs_diff_eq!(ml.coords[i], pt.xi.coords[i], epsilon = 1e-14);
            assert_abs_diff_eq!(mr.coords[i], -pt.xi.coords[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn mu_l_equivariance() {
        let basis = basis_su_n(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let pt = sample::random_cotangent(&mut rng, &basis, 0.2, 3.0);
            let k1 = sample::random_su(&mut rng, 2);
            let k2 = sample::random_su(&mut rng, 2);
            let moved = act(&k1, &k2, &pt, &basis).unwrap();
            let lhs = mu_l(&moved, &basis).unwrap();
            let adk1 = adjoint_matrix_k(k1.entries(), &basis).unwrap();
            let rhs = &adk1 * &mu_l(&pt, &basis).unwrap().coords;
            assert!((lhs.coords - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn psi_l_on_torus_point() {
        let basis = basis_su_n(2).unwrap();
        let (xi, s) = (0.9, 0.7);
        let pt = pt_at_identity(&[xi, 0.0, 0.0]);
        let b = psi_l(&pt, s, &basis).unwrap();
        let r = s * xi / (2.0 * 2.0_f64.sqrt());
        assert_abs_diff_eq!(b.entries()[(0, 0)].re, (-r).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.entries()[(1, 1)].re, r.exp(), epsilon = 1e-12);
    }

    #[test]
    fn inf_vf_at_identity() {
        let basis = basis_su_n(2).unwrap();
        let lam = [0.8, -0.3, 0.5];
        let pt = pt_at_identity(&lam);
        let x = CoordVector::k_from_slice(&[0.2, 0.7, -0.4]);
        let zero = CoordVector::k_from_slice(&[0.0, 0.0, 0.0]);

        // Left generator: (X, 0).
        let t = inf_vf(&x, &zero, &pt, &basis).unwrap();
        assert!((&t.k_dir.coords - &x.coords).norm() < 1e-14);
        assert!(t.v_dir.norm() < 1e-14);

        // Right generator: (-X, ad*_X lambda).
        let t = inf_vf(&zero, &x, &pt, &basis).unwrap();
        assert!((&t.k_dir.coords + &x.coords).norm() < 1e-14);
        let expected = ad_star(&x, &pt.xi, &basis).unwrap();
        assert!((&t.v_dir.coords - &expected.coords).norm() < 1e-14);

        // Zero generators give the zero field.
        let t = inf_vf(&zero, &zero, &pt, &basis).unwrap();
        assert!(t.k_dir.norm() + t.v_dir.norm() < 1e-15);
    }

    #[test]
    fn inf_vf_matches_fd_of_act() {
        let basis = basis_su_n(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let h = 1e-5;
        for _ in 0..5 {
            let pt = sample::random_cotangent(&mut rng, &basis, 0.2, 2.0);
            let x = sample::random_k_dir(&mut rng, &basis);
            let y = sample::random_k_dir(&mut rng, &basis);
            let t = inf_vf(&x, &y, &pt, &basis).unwrap();

            // One-parameter flow through act, differentiated centrally.
            let flow = |eps: f64| -> CotangentPoint {
                let k1 = UnitaryElement::exp(
                    &crate::liealg::from_coords_k(&(&x.coords * eps), &basis).unwrap(),
                );
                let k2 = UnitaryElement::exp(
                    &crate::liealg::from_coords_k(&(&y.coords * eps), &basis).unwrap(),
                );
                act(&k1, &k2, &pt, &basis).unwrap()
            };
            let plus = flow(h);
            let minus = flow(-h);
            // K-part in the left frame: k^{-1} dk read through the series log.
            let rel = pt.k.inverse().entries()
                * (plus.k.entries() - minus.k.entries())
                / crate::linalg::c(2.0 * h);
            let kdir_fd = crate::liealg::to_coords_k(
                &crate::liealg::AlgebraElement::compact(crate::liealg::traceless_part(
                    &((&rel - &rel.adjoint()) * crate::linalg::c(0.5)),
                ))
                .unwrap(),
                &basis,
            )
            .unwrap();
            let vdir_fd = (&plus.xi.coords - &minus.xi.coords) / (2.0 * h);
            assert!(
                (&t.k_dir.coords - &kdir_fd.coords).norm() < 1e-6,
                "K-part FD defect {}",
                (&t.k_dir.coords - &kdir_fd.coords).norm()
            );
            assert!((&t.v_dir.coords - vdir_fd).norm() < 1e-6);
        }
    }

    #[test]
    fn d_mu_l_basics_and_fd() {
        let basis = basis_su_n(2).unwrap();
        let lam = [0.6, 0.2, -0.9];
        let pt = pt_at_identity(&lam);
        let zero_k = CoordVector::k_from_slice(&[0.0, 0.0, 0.0]);
        let eta = CoordVector::kstar_from_slice(&[0.3, -0.5, 0.1]);

        // k = e, X = 0: d mu_L = eta.
        let out = d_mu_l(&pt, &zero_k, &eta, &basis).unwrap();
        assert!((&out.coords - &eta.coords).norm() < 1e-14);

        // k = e, eta = 0: d mu_L = ad*_X lambda.
        let x = CoordVector::k_from_slice(&[0.4, -0.2, 0.8]);
        let zero_star = CoordVector::kstar_from_slice(&[0.0, 0.0, 0.0]);
        let out = d_mu_l(&pt, &x, &zero_star, &basis).unwrap();
        let expected = ad_star(&x, &pt.xi, &basis).unwrap();
        assert!((&out.coords - &expected.coords).norm() < 1e-14);

        // Random input at a general point: central differences along the
        // curve (k exp(t Ad_{k^{-1}} X), xi + t eta).
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let h = 1e-5;
        for _ in 0..5 {
            let pt = sample::random_cotangent(&mut rng, &basis, 0.2, 2.0);
            let x = sample::random_k_dir(&mut rng, &basis);
            let eta = sample::random_kstar(&mut rng, &basis, 0.1, 1.0);
            let out = d_mu_l(&pt, &x, &eta, &basis).unwrap();

            let adkinv = adjoint_matrix_k(pt.k.inverse().entries(), &basis).unwrap();
            let left_coords = &adkinv * &x.coords;
            let curve = |eps: f64| -> CoordVector {
                let step = UnitaryElement::exp(
                    &crate::liealg::from_coords_k(&(&left_coords * eps), &basis).unwrap(),
                );
                let k = pt.k.mul(&step);
                let xi = CoordVector::new_kstar(&pt.xi.coords + &eta.coords * eps);
                mu_l(&CotangentPoint::new(k, xi).unwrap(), &basis).unwrap()
            };
            let fd = (&curve(h).coords - &curve(-h).coords) / (2.0 * h);
            assert!((&out.coords - fd).norm() < 1e-6);
        }
    }
}
