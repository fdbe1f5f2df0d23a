//! The delinearized symplectic structure on T*SU(2): the symplectic Poisson
//! structure assembled from its cross-section coefficients, the 2-form
//! obtained from it by block inversion, the extension to arbitrary points by
//! right-invariance, the uniquely determined 2-form Omega^s on su(2)*, and
//! the beta coefficient system.
//!
//! Everything in this module is specific to n = 2, where the codimension-1
//! coadjoint orbits make the delinearization unique. Frames are ordered
//! (t, x, y | t*, x*, y*).
//!
//! The 2-form and the bivector are computed through two deliberately
//! different routes: the bivector by rotating its cross-section coefficients
//! with the r-matrix correction term, the 2-form by block-solving
//! `D pi = -1` over the group identity and transporting by the right action.
//! Their mutual-inverse property at arbitrary points is therefore a real
//! consistency check of the rotation and correction terms, not an identity
//! of one code path.

use nalgebra::{DMatrix, DVector};

use crate::cotangent::CotangentPoint;
use crate::error::{Error, Result};
use crate::grp::{e_s, es_su2_closed, iwasawa_kan, TriangularANElement, UnitaryElement};
use crate::liealg::{
    adjoint_matrix_k, from_coords_k, pairing_s, proj_an, traceless_part, AlgebraElement,
    BasisData, CoordSpace, CoordVector,
};
use crate::linalg::{cosh_m1, max_abs_re, sinhc};
use crate::poisson::FramedSkewMatrix;
use crate::verify::FdConfig;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn check_su2(basis: &BasisData) -> Result<()> {
    if basis.n != 2 {
        return Err(Error::InvalidArgument("delinearization module requires n = 2".into()));
    }
    Ok(())
}

fn delin_frame() -> Vec<String> {
    vec!["t^L".into(), "x^L".into(), "y^L".into(), "t*".into(), "x*".into(), "y*".into()]
}

/// Scalar data entering the su(2) delinearization formulas at a point
/// `lambda = xi t* + eta1 x* + eta2 y*` and parameter `s`.
#[derive(Debug, Clone, Copy)]
pub struct DelinScalars {
    pub xi: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub s: f64,
    /// |lambda|, the positive-chamber coordinate of the coadjoint orbit.
    pub delta: f64,
    pub a: f64,
    pub u: f64,
    pub v: f64,
    /// gamma = (1 - e^{s sqrt 2 Delta}) / (2s); negative for Delta > 0.
    pub gamma: f64,
    /// epsilon = sinh(w) Delta + cosh(w) xi with w = s Delta / sqrt 2.
    pub epsilon: f64,
    /// delta_small = u^2 + v^2 - a^2 + a^{-2}.
    pub delta_small: f64,
    /// epsilon - xi, kept in a cancellation-free form.
    pub eps_minus_xi: f64,
    /// w = s Delta / sqrt 2.
    pub w: f64,
}

impl DelinScalars {
    pub fn compute(xi: f64, eta1: f64, eta2: f64, s: f64) -> Result<Self> {
        if s <= 0.0 {
            return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
        }
        let delta = (xi * xi + eta1 * eta1 + eta2 * eta2).sqrt();
        let coords = es_su2_closed(xi, eta1, eta2, s)?;
        let w = s * delta / SQRT2;
        let gamma = -(s * SQRT2 * delta).exp_m1() / (2.0 * s);
        let epsilon = w.sinh() * delta + w.cosh() * xi;
        let eps_minus_xi = w.sinh() * delta + cosh_m1(w) * xi;
        // delta_small = 2 a^2 epsilon sinh(w)/Delta = sqrt 2 s a^2 epsilon
        // sinhc(w); free of the a^{-2} - a^2 cancellation at small s.
        let a2 = coords.a * coords.a;
        let delta_small = SQRT2 * s * a2 * epsilon * sinhc(w);
        Ok(Self {
            xi,
            eta1,
            eta2,
            s,
            delta,
            a: coords.a,
            u: coords.u,
            v: coords.v,
            gamma,
            epsilon,
            delta_small,
            eps_minus_xi,
            w,
        })
    }
}

/// The decomposition `xi = Ad*_h (lambda_chamber t*)` of a nonzero point of
/// su(2)*, with `h` the geodesic rotation carrying the torus direction onto
/// `xi`.
#[derive(Debug, Clone)]
pub struct DecompKStar {
    pub h: UnitaryElement,
    pub lambda_chamber: f64,
}

pub fn polar_decompose_kstar(xi: &CoordVector, basis: &BasisData) -> Result<DecompKStar> {
    check_su2(basis)?;
    if xi.space != CoordSpace::KStar {
        return Err(Error::InvalidArgument("polar decomposition expects k* coordinates".into()));
    }
    let delta = xi.norm();
    if delta == 0.0 {
        return Err(Error::InvalidArgument(
            "polar decomposition undefined at the origin (orbit not codimension 1)".into(),
        ));
    }
    let nhat = &xi.coords / delta;
    let cos_theta = nhat[0];
    let sin_theta = (nhat[1] * nhat[1] + nhat[2] * nhat[2]).sqrt();
    let h = if sin_theta < 1e-14 {
        if cos_theta > 0.0 {
            UnitaryElement::identity(2)
        } else {
            // Antipode: the fixed rotation exp(sqrt 2 pi x).
            let v = DVector::from_row_slice(&[0.0, SQRT2 * std::f64::consts::PI, 0.0]);
            UnitaryElement::exp(&from_coords_k(&v, basis)?)
        }
    } else {
        let theta = sin_theta.atan2(cos_theta);
        // Rotation axis t x n, normalized; Ad_{exp(V)} rotates by |V|/sqrt 2.
        let axis = DVector::from_row_slice(&[0.0, -nhat[2], nhat[1]]) / sin_theta;
        let v = axis * (SQRT2 * theta);
        UnitaryElement::exp(&from_coords_k(&v, basis)?)
    };
    let adh = adjoint_matrix_k(h.entries(), basis)?;
    let recovered = &adh * DVector::from_row_slice(&[delta, 0.0, 0.0]);
    if (&recovered - &xi.coords).norm() > 1e-11 * (1.0 + delta) {
        return Err(Error::Internal("polar decomposition failed its Ad* check".into()));
    }
    Ok(DecompKStar { h, lambda_chamber: delta })
}

/// Coefficient `pi_{x,y}(e, xi t*) = -1/gamma - sqrt 2 / xi` of the
/// delinearized Poisson structure at a positive-chamber point, with
/// `gamma = (1 - e^{s sqrt 2 xi}) / (2 s)`.
pub fn pi_xy_identity(xi: f64, s: f64) -> Result<f64> {
    if xi <= 0.0 {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let gamma = -(s * SQRT2 * xi).exp_m1() / (2.0 * s);
    Ok(-1.0 / gamma - SQRT2 / xi)
}

/// K x K and fiber x fiber blocks of the delinearized Poisson structure at
/// `(k, xi)`, in the left frame.
fn pi_blocks(
    k: &UnitaryElement,
    xi: &CoordVector,
    s: f64,
    basis: &BasisData,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let decomp = polar_decompose_kstar(xi, basis)?;
    let p = pi_xy_identity(decomp.lambda_chamber, s)?;

    let adh = adjoint_matrix_k(decomp.h.entries(), basis)?;
    let adkinv = adjoint_matrix_k(k.inverse().entries(), basis)?;
    let ux = adh.column(1).into_owned();
    let uy = adh.column(2).into_owned();
    let wx = adkinv.column(1).into_owned();
    let wy = adkinv.column(2).into_owned();
    let wedge = |a: &DVector<f64>, b: &DVector<f64>| a * b.transpose() - b * a.transpose();

    // Rotated cross-section coefficient plus the left-frame r-matrix tail
    // s (Ad_h x ^ Ad_h y  -  Ad_{k^{-1}} x ^ Ad_{k^{-1}} y).
    let kk = wedge(&ux, &uy) * p + wedge(&ux, &uy) * s - wedge(&wx, &wy) * s;

    let mut vv = DMatrix::zeros(3, 3);
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = 0.0;
            for c in 0..3 {
                acc += xi.coords[c] * basis.structure_constants[a][b][c];
            }
            vv[(a, b)] = -acc;
        }
    }
    Ok((kk, vv))
}

/// The symplectic Poisson structure of the delinearized form at a
/// cross-section point `(e, xi t*)`, `xi > 0`, as the 6 x 6 pairing matrix
/// in the frame (t, x, y | t*, x*, y*): the only K x K entry is
/// `pi_{x,y} = -1/gamma - sqrt 2/xi`, the mixed block is the identity, and
/// the fiber block is `-<xi t*, [a, b]>`.
pub fn pi_delin_identity(xi: f64, s: f64) -> Result<FramedSkewMatrix> {
    let p = pi_xy_identity(xi, s)?;
    let mut m = DMatrix::zeros(6, 6);
    m[(1, 2)] = p;
    m[(2, 1)] = -p;
    for i in 0..3 {
        m[(i, 3 + i)] = 1.0;
        m[(3 + i, i)] = -1.0;
    }
    m[(4, 5)] = -xi / SQRT2;
    m[(5, 4)] = xi / SQRT2;
    FramedSkewMatrix::new(m, delin_frame(), format!("(e, {xi} t*), s={s}"))
}

/// The symplectic Poisson structure of the delinearized form at an
/// arbitrary point `(k, xi)` with `xi != 0`: the Ad_h-rotated cross-section
/// coefficient, the identity mixed block, the bracket block, and the
/// r-matrix tail `(Ad_{kh} r_{K,s} - r_{K,s})^R_k` re-expressed in the left
/// frame.
pub fn pi_delin_at(pt: &CotangentPoint, s: f64, basis: &BasisData) -> Result<FramedSkewMatrix> {
    check_su2(basis)?;
    let (kk, vv) = pi_blocks(&pt.k, &pt.xi, s, basis)?;
    let mut m = DMatrix::zeros(6, 6);
    for a in 0..3 {
        for b in 0..3 {
            m[(a, b)] = kk[(a, b)];
            m[(3 + a, 3 + b)] = vv[(a, b)];
        }
        m[(a, 3 + a)] = 1.0;
        m[(3 + a, a)] = -1.0;
    }
    FramedSkewMatrix::new(m, delin_frame(), pt.digest())
}

/// The delinearized 2-form at a cross-section point `(e, lambda)` with
/// `lambda != 0`, in block form [[A, B], [-B^T, C]]. The blocks solve
/// `D pi = -1` against the Poisson structure of `pi_delin_at`:
/// `A = -pi_vv (1 + pi_KK pi_vv)^{-1}`, `B = 1 + A pi_KK`,
/// `C = -B^T pi_KK`. On the positive chamber these reduce to the closed
/// forms `A(x,y) = -gamma`, `B = diag(1, q, q)` with
/// `q = -sqrt 2 gamma / xi`, and `C(x*,y*) = sqrt 2 (q - 1)/xi`.
pub fn delin_identity(lambda: &CoordVector, s: f64) -> Result<FramedSkewMatrix> {
    if lambda.space != CoordSpace::KStar || lambda.dim() != 3 {
        return Err(Error::InvalidArgument("delin_identity expects su(2)* coordinates".into()));
    }
    let basis = crate::liealg::basis_su_n(2)?;
    let e = UnitaryElement::identity(2);
    let (kk, vv) = pi_blocks(&e, lambda, s, &basis)?;
    let id3 = DMatrix::<f64>::identity(3, 3);
    let inv = (&id3 + &kk * &vv)
        .try_inverse()
        .ok_or_else(|| Error::Internal("delinearized Poisson structure is degenerate".into()))?;
    let a_block = -&vv * &inv;
    let b_block = &id3 + &a_block * &kk;
    let c_block = -b_block.transpose() * &kk;

    let mut m = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = a_block[(i, j)];
            m[(i, 3 + j)] = b_block[(i, j)];
            m[(3 + i, j)] = -b_block[(j, i)];
            m[(3 + i, 3 + j)] = c_block[(i, j)];
        }
    }
    let m = 0.5 * (&m - m.transpose());
    FramedSkewMatrix::new(m, delin_frame(), format!("(e, {:?}), s={s}", lambda.coords.as_slice()))
}

/// The delinearized 2-form at an arbitrary point `(k, nu)` with `nu != 0`,
/// obtained from the cross-section value at `(e, Ad*_k nu)` by
/// right-invariance: the left frame at `(k, nu)` maps to the frame at the
/// translated point through `Ad_k` on both the K-directions and the fiber.
pub fn delin_at(pt: &CotangentPoint, s: f64, basis: &BasisData) -> Result<FramedSkewMatrix> {
    check_su2(basis)?;
    if pt.xi.norm() == 0.0 {
        return Err(Error::InvalidArgument("delinearization undefined at nu = 0".into()));
    }
    let adk = adjoint_matrix_k(pt.k.entries(), basis)?;
    let lambda = CoordVector::new_kstar(&adk * &pt.xi.coords);
    let m_id = delin_identity(&lambda, s)?;
    let mut t = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            t[(i, j)] = adk[(i, j)];
            t[(3 + i, 3 + j)] = adk[(i, j)];
        }
    }
    let m = t.transpose() * m_id.entries() * &t;
    let m = 0.5 * (&m - m.transpose());
    FramedSkewMatrix::new(m, delin_frame(), pt.digest())
}

/// The orbit-projection generators: vectors `X_t, X_x, X_y` in k with
/// `Pr^perp_lambda(a*) = ad*_{X_a} lambda`.
pub fn projection_generators(lambda: &CoordVector) -> Result<[DVector<f64>; 3]> {
    let (xi, eta1, eta2) = (lambda.coords[0], lambda.coords[1], lambda.coords[2]);
    let d2 = xi * xi + eta1 * eta1 + eta2 * eta2;
    if d2 == 0.0 {
        return Err(Error::InvalidArgument("projection generators undefined at 0".into()));
    }
    let f = SQRT2 / d2;
    Ok([
        DVector::from_row_slice(&[0.0, f * eta2, -f * eta1]),
        DVector::from_row_slice(&[-f * eta2, 0.0, f * xi]),
        DVector::from_row_slice(&[f * eta1, -f * xi, 0.0]),
    ])
}

/// The (t, t*) entry of the direct cross-section calculus for the
/// delinearized form:
/// `(xi a^2 epsilon + (eta1^2 + eta2^2) sinhc(w)) / Delta^2`.
/// Tends to 1 linearly in s; on the chamber it is identically 1 and agrees
/// with the (t, t*) entry of `delin_identity`.
pub fn b_tt_table(lambda: &CoordVector, s: f64) -> Result<f64> {
    let sc = DelinScalars::compute(lambda.coords[0], lambda.coords[1], lambda.coords[2], s)?;
    if sc.delta == 0.0 {
        return Err(Error::InvalidArgument("undefined at lambda = 0".into()));
    }
    let a2 = sc.a * sc.a;
    Ok((sc.xi * a2 * sc.epsilon + (sc.eta1 * sc.eta1 + sc.eta2 * sc.eta2) * sinhc(sc.w))
        / (sc.delta * sc.delta))
}

/// `Theta^L dE_s_lambda(lambda) = a^2 (epsilon t* + eta1 x* + eta2 y*)`:
/// the left-logarithmic derivative of E_s in the radial direction, as
/// an-coordinates in (t*, x*, y*).
pub fn theta_des_radial(lambda: &CoordVector, s: f64) -> Result<CoordVector> {
    let (xi, eta1, eta2) = (lambda.coords[0], lambda.coords[1], lambda.coords[2]);
    let sc = DelinScalars::compute(xi, eta1, eta2, s)?;
    let a2 = sc.a * sc.a;
    Ok(CoordVector::kstar_from_slice(&[a2 * sc.epsilon, a2 * eta1, a2 * eta2]))
}

/// `<Theta^L d/dh E_s((1+h) lambda), X>_s` by central differences through
/// `e_s`: the radial moment pairing.
pub fn radial_moment_pairing(
    lambda: &CoordVector,
    x: &AlgebraElement,
    s: f64,
    basis: &BasisData,
    fd: &FdConfig,
) -> Result<f64> {
    let b0 = e_s(lambda, s, basis)?;
    let deriv = fd.matrix_derivative(&|h: f64| {
        let shifted = CoordVector::new_kstar(&lambda.coords * (1.0 + h));
        Ok(e_s(&shifted, s, basis)?.entries().clone())
    })?;
    let theta = traceless_part(&(b0.inverse().entries() * deriv));
    let theta_an = proj_an(
        &AlgebraElement::general(theta)
            .map_err(|e| Error::Internal(format!("Maurer-Cartan value: {e}")))?,
    );
    pairing_s(&theta_an, x, s)
}

/// `-<Theta^L d/dh pr_AN(p exp(h Y)), X>_s` by central differences through
/// the Iwasawa projection along the second factor of G = K AN: the orbit
/// moment pairing of the dressing directions. Equals the pairing matrix of
/// `pi_an` at `p` on `(X, Y)`.
pub fn orbit_moment_pairing(
    p: &TriangularANElement,
    x: &AlgebraElement,
    y: &AlgebraElement,
    s: f64,
    fd: &FdConfig,
) -> Result<f64> {
    let pinv = p.inverse();
    let deriv = fd.matrix_derivative(&|h: f64| {
        let flow = crate::linalg::exp_anti_hermitian(&(y.entries() * crate::linalg::c(h)));
        Ok(iwasawa_kan(&(p.entries() * flow))?.1.entries().clone())
    })?;
    let theta = traceless_part(&(pinv.entries() * deriv));
    let theta_an = proj_an(
        &AlgebraElement::general(theta)
            .map_err(|e| Error::Internal(format!("Maurer-Cartan value: {e}")))?,
    );
    Ok(-pairing_s(&theta_an, x, s)?)
}

/// The moment 1-form of the delinearized structure evaluated on a vertical
/// direction `dir` at `lambda != 0`, for the generator `x`: the radial part
/// is differenced through `e_s`, the orbit part through the dressing
/// directions at `p = E_s(lambda)`.
pub fn moment_pairing_vertical(
    lambda: &CoordVector,
    dir: &DVector<f64>,
    x: &AlgebraElement,
    s: f64,
    basis: &BasisData,
    fd: &FdConfig,
) -> Result<f64> {
    let d2 = lambda.norm() * lambda.norm();
    if d2 == 0.0 {
        return Err(Error::InvalidArgument("moment pairing undefined at lambda = 0".into()));
    }
    let gens = projection_generators(lambda)?;
    let radial_coeff = lambda.coords.dot(dir) / d2;
    let mut total = 0.0;
    if radial_coeff != 0.0 {
        total += radial_coeff * radial_moment_pairing(lambda, x, s, basis, fd)?;
    }
    // Orthogonal part: dir - radial is ad*_{X_dir} lambda with
    // X_dir = sum_b (dir_b) X_b.
    let mut x_dir = DVector::zeros(3);
    for b in 0..3 {
        x_dir += &gens[b] * dir[b];
    }
    if x_dir.norm() > 0.0 {
        let p = e_s(lambda, s, basis)?;
        let y = from_coords_k(&x_dir, basis)?;
        total += orbit_moment_pairing(&p, x, &y, s, fd)?;
    }
    Ok(total)
}

/// The 2-form `Omega^s` at a nonzero `lambda`, frame (t*, x*, y*): the
/// unique closed 2-form implementing the delinearization, read off as the
/// fiber block of the block-solved 2-form over the identity.
pub fn omega_s_at(lambda: &CoordVector, s: f64, basis: &BasisData) -> Result<FramedSkewMatrix> {
    check_su2(basis)?;
    if lambda.norm() == 0.0 {
        return Err(Error::InvalidArgument("Omega^s undefined at lambda = 0".into()));
    }
    let d = delin_identity(lambda, s)?;
    let c_block = d.entries().view((3, 3), (3, 3)).into_owned();
    FramedSkewMatrix::new(
        c_block,
        vec!["t*".into(), "x*".into(), "y*".into()],
        format!("lambda={:?}, s={s}", lambda.coords.as_slice()),
    )
}

/// The beta coefficient matrix `beta_{a,b}` at `lambda = xi t*`: the moment
/// 1-form of the delinearization paired against the vertical directions,
/// computed by finite differences and checked against the closed relations
/// `beta_{t,t} = 1`, `beta_{x,x} = beta_{y,y} = 1 + gamma pi_{x,y}`, all
/// other entries zero.
pub fn beta_coeffs(xi: f64, s: f64, basis: &BasisData, fd: &FdConfig) -> Result<DMatrix<f64>> {
    check_su2(basis)?;
    if xi <= 0.0 {
        return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
    }
    let lambda = CoordVector::kstar_from_slice(&[xi, 0.0, 0.0]);
    let mut beta = DMatrix::zeros(3, 3);
    for a in 0..3 {
        for b in 0..3 {
            let mut dir = DVector::zeros(3);
            dir[b] = 1.0;
            beta[(a, b)] =
                moment_pairing_vertical(&lambda, &dir, &basis.elements[a], s, basis, fd)?;
        }
    }
    let gamma = -(s * SQRT2 * xi).exp_m1() / (2.0 * s);
    let diag = 1.0 + gamma * pi_xy_identity(xi, s)?;
    let mut closed = DMatrix::zeros(3, 3);
    closed[(0, 0)] = 1.0;
    closed[(1, 1)] = diag;
    closed[(2, 2)] = diag;
    let defect = max_abs_re(&(&beta - &closed));
    if defect > 1e-7 {
        return Err(Error::Internal(format!(
            "beta system disagrees with closed relations (defect {defect:.3e})"
        )));
    }
    Ok(beta)
}
