//! Poisson-Lie bivectors: the r-matrix of the double, pi_{AN,s} and
//! pi_{K,s} evaluated as framed skew matrices, and the su(2) closed form of
//! pi_AN.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grp::{SU2ANCoords, TriangularANElement, UnitaryElement};
use crate::liealg::{
    adjoint_matrix_double, dual_basis_an, pairing_s, proj_an, AlgebraElement,
    BasisData,
};
use crate::linalg::max_abs_re;

const SKEW_TOL: f64 = 1e-12;

/// A real skew-symmetric matrix representing a bivector or 2-form at a
/// point, together with the ordered frame labels it is expressed in and a
/// textual digest of the base point.
#[derive(Debug, Clone)]
pub struct FramedSkewMatrix {
    entries: DMatrix<f64>,
    frame: Vec<String>,
    base_point: String,
}

impl FramedSkewMatrix {
    pub fn new(entries: DMatrix<f64>, frame: Vec<String>, base_point: String) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                found: entries.nrows(),
            });
        }
        let asym = max_abs_re(&(&entries + entries.transpose()));
        if asym > SKEW_TOL * (1.0 + max_abs_re(&entries)) {
            return Err(Error::Internal(format!(
                "matrix not antisymmetric (defect {asym:.3e})"
            )));
        }
        Ok(Self { entries, frame, base_point })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn frame(&self) -> &[String] {
        &self.frame
    }

    pub fn base_point(&self) -> &str {
        &self.base_point
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Coefficients of an element of Lambda^2 k in the basis `{e_a ^ e_b}`.
#[derive(Debug, Clone)]
pub struct BivectorK2 {
    /// Full antisymmetric coefficient matrix; `coeff(a, b)` with a < b is
    /// the coefficient of `e_a ^ e_b`.
    pub coeffs: DMatrix<f64>,
}

impl BivectorK2 {
    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        self.coeffs[(a, b)]
    }
}

/// The skew-symmetric r-matrix of the double `g = k + an`, expressed in the
/// frame `(B, B*(s))`: coefficient matrix of `(1/2) sum_b b ^ b*`.
#[derive(Debug, Clone)]
pub struct DoubleBivector {
    pub coeffs: DMatrix<f64>,
    pub s: f64,
}

pub fn r_matrix_double(basis: &BasisData, s: f64) -> Result<DoubleBivector> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let d = basis.dim();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        m[(i, d + i)] = 0.5;
        m[(d + i, i)] = -0.5;
    }
    Ok(DoubleBivector { coeffs: m, s })
}

fn frame_labels_left(basis: &BasisData) -> Vec<String> {
    basis.labels.iter().map(|l| format!("{}^L", l.display(basis.n))).collect()
}

fn frame_labels_star(basis: &BasisData) -> Vec<String> {
    basis.labels.iter().map(|l| format!("{}*", l.display(basis.n))).collect()
}

/// The left-translated bivector `(L_{p^{-1}})_* (pi_{AN,s})_p`, assembled as
/// the matrix of pairings against the covectors `<., X>_s` for X in B.
pub fn pi_an(p: &TriangularANElement, s: f64, basis: &BasisData) -> Result<FramedSkewMatrix> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    if p.n() != basis.n {
        return Err(Error::DimensionMismatch { expected: basis.n, found: p.n() });
    }
    let d = basis.dim();
    let duals = dual_basis_an(basis, s)?;
    let pinv = p.inverse();

    // For each b in B: A_b = Pr_an(Ad_{p^-1} b), B_b = Ad_{p^-1} b*.
    // The value on (X, Y) is (1/2) sum_b [ <A_b,X><B_b,Y> - <A_b,Y><B_b,X> ].
    let mut a_coords = Vec::with_capacity(d);
    let mut b_coords = Vec::with_capacity(d);
    for (el, dual) in basis.elements.iter().zip(duals.iter()) {
        let conj_b = pinv.entries() * el.entries() * p.entries();
        let ab = proj_an(&AlgebraElement::general(conj_b).map_err(|e| {
            Error::Internal(format!("Ad_p of a basis element lost tracelessness: {e}"))
        })?);
        let conj_bstar = pinv.entries() * dual.entries() * p.entries();
        let bb = AlgebraElement::an(conj_bstar)
            .map_err(|e| Error::Internal(format!("Ad_p left an: {e}")))?;
        let mut av = nalgebra::DVector::zeros(d);
        let mut bv = nalgebra::DVector::zeros(d);
        for (x, base) in basis.elements.iter().enumerate() {
            av[x] = pairing_s(&ab, base, s)?;
            bv[x] = pairing_s(&bb, base, s)?;
        }
        a_coords.push(av);
        b_coords.push(bv);
    }
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        m += 0.5 * (&a_coords[i] * b_coords[i].transpose()
            - &b_coords[i] * a_coords[i].transpose());
    }
    // Symmetrize away rounding noise before validating.
    let m = 0.5 * (&m - m.transpose());
    FramedSkewMatrix::new(m, frame_labels_star(basis), format!("p={:?}", p.entries().as_slice()))
}

/// Closed form of `pi_an` on su(2)* = AN, frame order (t, x, y):
/// `Pi[x][t] = u/(a s)`, `Pi[y][t] = v/(a s)`,
/// `Pi[x][y] = (u^2 + v^2 - a^2 + a^-2) / (2 s a^2)`.
pub fn pi_an_su2_closed(p: &SU2ANCoords, s: f64) -> Result<FramedSkewMatrix> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let (a, u, v) = (p.a, p.u, p.v);
    let mut m = DMatrix::zeros(3, 3);
    let xt = u / (a * s);
    let yt = v / (a * s);
    let xy = (u * u + v * v - a * a + 1.0 / (a * a)) / (2.0 * s * a * a);
    m[(1, 0)] = xt;
    m[(0, 1)] = -xt;
    m[(2, 0)] = yt;
    m[(0, 2)] = -yt;
    m[(1, 2)] = xy;
    m[(2, 1)] = -xy;
    FramedSkewMatrix::new(
        m,
        vec!["t*".into(), "x*".into(), "y*".into()],
        format!("p=({}, {}, {})", a, u, v),
    )
}

/// The Poisson-Lie bivector `pi_{K,s}(k) = (r_{G,s}^L - r_{G,s}^R)|_K`,
/// expressed in the left-invariant frame. The full double-valued bivector is
/// computed first; its an-components must vanish (tangency to K) and the
/// k x k block is returned.
pub fn pi_k(k: &UnitaryElement, s: f64, basis: &BasisData) -> Result<FramedSkewMatrix> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let d = basis.dim();
    let r = r_matrix_double(basis, s)?.coeffs;
    let t = adjoint_matrix_double(&k.inverse().entries().clone(), basis, s)?;
    let full = &r - &t * &r * t.transpose();
    // Tangency: every row/column touching an an-slot vanishes.
    let mut defect: f64 = 0.0;
    for i in 0..(2 * d) {
        for j in d..(2 * d) {
            defect = defect.max(full[(i, j)].abs());
        }
    }
    if defect > 1e-10 {
        return Err(Error::Internal(format!(
            "pi_K not tangent to K (an-component {defect:.3e})"
        )));
    }
    let kk = full.view((0, 0), (d, d)).into_owned();
    let kk = 0.5 * (&kk - kk.transpose());
    FramedSkewMatrix::new(kk, frame_labels_left(basis), format!("k={:?}", k.entries().as_slice()))
}

/// The r-matrix of K: `s x ^ y` for su(2), and the candidate
/// `s sum_{i<j} x_{i,j} ^ y_{i,j}` for n > 2, validated numerically against
/// `pi_K = r^L - r^R` at 20 seeded points.
pub fn r_matrix_k(basis: &BasisData, s: f64) -> Result<BivectorK2> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let d = basis.dim();
    let mut coeffs = DMatrix::zeros(d, d);
    for (idx, label) in basis.labels.iter().enumerate() {
        if label.symbol == "x" {
            // y_{i,j} immediately follows x_{i,j} in the basis order.
            let y_idx = idx + 1;
            debug_assert_eq!(basis.labels[y_idx].symbol, "y");
            coeffs[(idx, y_idx)] = s;
            coeffs[(y_idx, idx)] = -s;
        }
    }
    let candidate = BivectorK2 { coeffs };

    // Validate pi = r^L - r^R against the double-restriction pi_K.
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
    for _ in 0..20 {
        let k = crate::sample::random_su(&mut rng, basis.n);
        let adk = crate::liealg::adjoint_matrix_k(&k.inverse().entries().clone(), basis)?;
        let from_candidate = &candidate.coeffs - &adk * &candidate.coeffs * adk.transpose();
        let reference = pi_k(&k, s, basis)?;
        let diff = max_abs_re(&(&from_candidate - reference.entries()));
        if diff > 1e-9 {
            return Err(Error::Unsupported(format!(
                "r-matrix candidate fails pi = r^L - r^R validation (defect {diff:.3e})"
            )));
        }
    }
    Ok(candidate)
}
