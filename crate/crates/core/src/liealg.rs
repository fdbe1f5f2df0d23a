//! The Lie algebras su(n), sl(n,C) and an, realized as traceless complex
//! matrices, together with the orthonormal basis of su(n), the s-family of
//! Manin pairings, the dual basis inside an, the k/an projections and the
//! structure constants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I};

const TRACE_TOL: f64 = 1e-12;
const SHAPE_TOL: f64 = 1e-12;

/// Which real form a matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// sl(n,C): traceless, otherwise arbitrary.
    General,
    /// su(n): traceless anti-Hermitian.
    Compact,
    /// an: traceless upper triangular with real diagonal.
    An,
}

/// A traceless n x n complex matrix tagged with the real form it lives in.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    entries: CMatrix,
    kind: AlgebraKind,
}

impl AlgebraElement {
    pub fn general(entries: CMatrix) -> Result<Self> {
        check_trace(&entries)?;
        Ok(Self { entries, kind: AlgebraKind::General })
    }

    pub fn compact(entries: CMatrix) -> Result<Self> {
        check_trace(&entries)?;
        if !crate::linalg::is_anti_hermitian(&entries, SHAPE_TOL) {
            return Err(Error::InvalidArgument("compact element must be anti-Hermitian".into()));
        }
        Ok(Self { entries, kind: AlgebraKind::Compact })
    }

    pub fn an(entries: CMatrix) -> Result<Self> {
        check_trace(&entries)?;
        let n = entries.nrows();
        for i in 0..n {
            if entries[(i, i)].im.abs() > SHAPE_TOL {
                return Err(Error::InvalidArgument("an element must have real diagonal".into()));
            }
            for j in 0..i {
                if entries[(i, j)].norm() > SHAPE_TOL {
                    return Err(Error::InvalidArgument(
                        "an element must be upper triangular".into(),
                    ));
                }
            }
        }
        Ok(Self { entries, kind: AlgebraKind::An })
    }

    pub fn zero(n: usize, kind: AlgebraKind) -> Self {
        Self { entries: CMatrix::zeros(n, n), kind }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { entries: &self.entries * c(t), kind: self.kind }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_n(self, other)?;
        let kind = if self.kind == other.kind { self.kind } else { AlgebraKind::General };
        Ok(Self { entries: &self.entries + &other.entries, kind })
    }

    /// Commutator `[X, Y] = XY - YX`. Both closed real forms are closed
    /// under the bracket; mixed arguments fall back to the general kind.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        check_same_n(self, other)?;
        let m = &self.entries * &other.entries - &other.entries * &self.entries;
        let kind = if self.kind == other.kind { self.kind } else { AlgebraKind::General };
        Ok(Self { entries: m, kind })
    }
}

fn check_trace(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    if m.trace().norm() > TRACE_TOL {
        return Err(Error::InvalidArgument("matrix must be traceless".into()));
    }
    Ok(())
}

fn check_same_n(a: &AlgebraElement, b: &AlgebraElement) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    Ok(())
}

/// Killing form of sl(n,C): `kappa(X, Y) = 2n tr(XY)`.
pub fn killing(x: &AlgebraElement, y: &AlgebraElement) -> Result<Complex64> {
    check_same_n(x, y)?;
    let n = x.n() as f64;
    Ok((x.entries() * y.entries()).trace() * c(2.0 * n))
}

/// The invariant inner product `(X, Y) = -kappa(X, Y)` on su(n).
pub fn inner(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    Ok(-killing(x, y)?.re)
}

/// The Manin pairing `<Z, W>_s = (-1/s) Im kappa(Z, W)` on sl(n,C).
/// Restricted to `s > 0`.
pub fn pairing_s(z: &AlgebraElement, w: &AlgebraElement, s: f64) -> Result<f64> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    Ok(-killing(z, w)?.im / s)
}

/// Removes the trace of a square matrix; used to scrub finite-difference
/// noise off quantities that are traceless analytically.
pub fn traceless_part(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let tr = m.trace() / c(n as f64);
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] -= tr;
    }
    out
}

/// Projection of a traceless matrix onto an along the splitting
/// sl(n,C) = su(n) + an: real part on the diagonal, `z_ij + conj(z_ji)`
/// above the diagonal, zero below.
pub fn proj_an(z: &AlgebraElement) -> AlgebraElement {
    let n = z.n();
    let m = z.entries();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = c(m[(i, i)].re);
        for j in (i + 1)..n {
            out[(i, j)] = m[(i, j)] + m[(j, i)].conj();
        }
    }
    AlgebraElement { entries: out, kind: AlgebraKind::An }
}

/// Projection onto su(n) along the same splitting.
pub fn proj_k(z: &AlgebraElement) -> AlgebraElement {
    let an = proj_an(z);
    AlgebraElement { entries: z.entries() - an.entries(), kind: AlgebraKind::Compact }
}

/// Label of a basis element: symbol "t", "x" or "y" and the root indices
/// (i, j) for the off-torus elements (1-based; (i, 0) for torus elements).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub symbol: String,
    pub i: usize,
    pub j: usize,
}

impl BasisLabel {
    pub fn display(&self, n: usize) -> String {
        if n == 2 {
            self.symbol.clone()
        } else if self.j == 0 {
            format!("{}{}", self.symbol, self.i)
        } else {
            format!("{}({},{})", self.symbol, self.i, self.j)
        }
    }
}

/// The ordered orthonormal basis of su(n), its structure constants, and the
/// dual basis in an at parameter s = 1.
#[derive(Debug, Clone)]
pub struct BasisData {
    pub n: usize,
    /// Orthonormal basis of su(n) under (X,Y) = -kappa(X,Y), ordered
    /// (t_1..t_{n-1}, then x_{i,j}, y_{i,j} in lexicographic (i,j) order);
    /// for n = 2 this is exactly (t, x, y).
    pub elements: Vec<AlgebraElement>,
    /// Dual basis of an at s = 1; the dual basis at parameter s is s times
    /// these matrices.
    pub dual_elements: Vec<AlgebraElement>,
    pub labels: Vec<BasisLabel>,
    /// c[a][b][k] with [e_a, e_b] = sum_k c[a][b][k] e_k.
    pub structure_constants: Vec<Vec<Vec<f64>>>,
}

impl BasisData {
    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    /// Bracket of two coordinate vectors in the k space, via the structure
    /// constants.
    pub fn bracket_coords(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for a in 0..d {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..d {
                if y[b] == 0.0 {
                    continue;
                }
                for k in 0..d {
                    out[k] += x[a] * y[b] * self.structure_constants[a][b][k];
                }
            }
        }
        out
    }

    /// Matrix of `ad_V` on k-coordinates: column b holds the coordinates of
    /// `[V, e_b]`.
    pub fn ad_matrix(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d {
            for a in 0..d {
                if v[a] == 0.0 {
                    continue;
                }
                for k in 0..d {
                    m[(k, b)] += v[a] * self.structure_constants[a][b][k];
                }
            }
        }
        m
    }
}

/// A real coordinate vector of an element of k (in the basis B) or of k*
/// (in the dual basis B*).
#[derive(Debug, Clone, PartialEq)]
pub struct CoordVector {
    pub coords: DVector<f64>,
    pub space: CoordSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordSpace {
    K,
    KStar,
}

impl CoordVector {
    pub fn new_k(coords: DVector<f64>) -> Self {
        Self { coords, space: CoordSpace::K }
    }

    pub fn new_kstar(coords: DVector<f64>) -> Self {
        Self { coords, space: CoordSpace::KStar }
    }

    pub fn kstar_from_slice(v: &[f64]) -> Self {
        Self::new_kstar(DVector::from_row_slice(v))
    }

    pub fn k_from_slice(v: &[f64]) -> Self {
        Self::new_k(DVector::from_row_slice(v))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

/// Builds the orthonormal basis of su(n) inside sl(n,C).
///
/// The off-torus elements are `x_{i,j} = (E_ij - E_ji)/(2 sqrt n)` and
/// `y_{i,j} = sqrt(-1)(E_ij + E_ji)/(2 sqrt n)`; the torus part is the
/// Gram-Schmidt orthonormalization of `sqrt(-1)(E_ii - E_{i+1,i+1})`.
pub fn basis_su_n(n: usize) -> Result<BasisData> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    let mut elements = Vec::new();
    let mut labels = Vec::new();

    // Torus: Gram-Schmidt on i(E_ii - E_{i+1,i+1}) under (X,Y) = -kappa.
    let mut torus_raw = Vec::new();
    for i in 0..(n - 1) {
        let mut m = CMatrix::zeros(n, n);
        m[(i, i)] = I;
        m[(i + 1, i + 1)] = -I;
        torus_raw.push(AlgebraElement { entries: m, kind: AlgebraKind::Compact });
    }
    for (idx, raw) in torus_raw.into_iter().enumerate() {
        let mut v = raw;
        for prev in &elements {
            let coeff = inner(&v, prev)?;
            v = v.add(&prev.scale(-coeff))?;
        }
        let norm = inner(&v, &v)?.sqrt();
        if norm < 1e-14 {
            return Err(Error::Internal("degenerate torus basis".into()));
        }
        elements.push(v.scale(1.0 / norm));
        labels.push(BasisLabel { symbol: "t".into(), i: idx + 1, j: 0 });
    }

    // Root part, lexicographic in (i, j), x before y.
    let scale = 1.0 / (2.0 * (n as f64).sqrt());
    for i in 0..n {
        for j in (i + 1)..n {
            let mut x = CMatrix::zeros(n, n);
            x[(i, j)] = c(scale);
            x[(j, i)] = c(-scale);
            elements.push(AlgebraElement { entries: x, kind: AlgebraKind::Compact });
            labels.push(BasisLabel { symbol: "x".into(), i: i + 1, j: j + 1 });

            let mut y = CMatrix::zeros(n, n);
            y[(i, j)] = I * c(scale);
            y[(j, i)] = I * c(scale);
            elements.push(AlgebraElement { entries: y, kind: AlgebraKind::Compact });
            labels.push(BasisLabel { symbol: "y".into(), i: i + 1, j: j + 1 });
        }
    }

    let d = n * n - 1;
    debug_assert_eq!(elements.len(), d);

    // For n = 2 the required order is (t, x, y), which the construction
    // above already produces.

    // Structure constants from the brackets, read off by orthonormality.
    let mut structure_constants = vec![vec![vec![0.0; d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            let br = elements[a].bracket(&elements[b])?;
            for k in 0..d {
                structure_constants[a][b][k] = inner(&br, &elements[k])?;
            }
        }
    }

    let mut basis = BasisData {
        n,
        elements,
        dual_elements: Vec::new(),
        labels,
        structure_constants,
    };
    basis.dual_elements = dual_basis_an(&basis, 1.0)?;
    Ok(basis)
}

/// The basis of an dual to B under the pairing `< , >_s`, obtained by
/// solving the linear system in the real coordinate chart of an.
pub fn dual_basis_an(basis: &BasisData, s: f64) -> Result<Vec<AlgebraElement>> {
    if s <= 0.0 {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let n = basis.n;
    let d = basis.dim();

    // Real chart of an: traceless real diagonals, then E_ij and i E_ij above
    // the diagonal.
    let mut chart = Vec::with_capacity(d);
    for i in 0..(n - 1) {
        let mut m = CMatrix::zeros(n, n);
        m[(i, i)] = c(1.0);
        m[(i + 1, i + 1)] = c(-1.0);
        chart.push(AlgebraElement { entries: m, kind: AlgebraKind::An });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = CMatrix::zeros(n, n);
            m[(i, j)] = c(1.0);
            chart.push(AlgebraElement { entries: m, kind: AlgebraKind::An });
            let mut m2 = CMatrix::zeros(n, n);
            m2[(i, j)] = I;
            chart.push(AlgebraElement { entries: m2, kind: AlgebraKind::An });
        }
    }
    debug_assert_eq!(chart.len(), d);

    let mut pairings = DMatrix::zeros(d, d);
    for i in 0..d {
        for m in 0..d {
            pairings[(i, m)] = pairing_s(&basis.elements[i], &chart[m], s)?;
        }
    }
    let lu = pairings.lu();
    let mut duals = Vec::with_capacity(d);
    for j in 0..d {
        let mut rhs = DVector::zeros(d);
        rhs[j] = 1.0;
        let coeffs = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("singular pairing system for dual basis".into()))?;
        let mut m = CMatrix::zeros(n, n);
        for (cm, ch) in coeffs.iter().zip(chart.iter()) {
            m += ch.entries() * c(*cm);
        }
        duals.push(AlgebraElement { entries: m, kind: AlgebraKind::An });
    }
    Ok(duals)
}

/// `phi`: the inner-product isomorphism k* -> k, coordinate-wise in the
/// dual bases.
pub fn phi(lambda: &CoordVector, basis: &BasisData) -> Result<AlgebraElement> {
    if lambda.space != CoordSpace::KStar {
        return Err(Error::InvalidArgument("phi expects k* coordinates".into()));
    }
    from_coords_k(&lambda.coords, basis)
}

/// Inverse of `phi`.
pub fn phi_inv(x: &AlgebraElement, basis: &BasisData) -> Result<CoordVector> {
    let v = to_coords_k(x, basis)?;
    Ok(CoordVector::new_kstar(v.coords))
}

/// Coordinates of a compact element in the orthonormal basis.
pub fn to_coords_k(x: &AlgebraElement, basis: &BasisData) -> Result<CoordVector> {
    if x.n() != basis.n {
        return Err(Error::DimensionMismatch { expected: basis.n, found: x.n() });
    }
    let d = basis.dim();
    let mut v = DVector::zeros(d);
    for a in 0..d {
        v[a] = inner(x, &basis.elements[a])?;
    }
    Ok(CoordVector::new_k(v))
}

/// The compact element with the given coordinates.
pub fn from_coords_k(v: &DVector<f64>, basis: &BasisData) -> Result<AlgebraElement> {
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: v.len() });
    }
    let mut m = CMatrix::zeros(basis.n, basis.n);
    for (a, e) in basis.elements.iter().enumerate() {
        m += e.entries() * c(v[a]);
    }
    Ok(AlgebraElement { entries: m, kind: AlgebraKind::Compact })
}

/// Coordinates of an an-element in the dual basis at parameter s.
pub fn an_to_coords(w: &AlgebraElement, basis: &BasisData, s: f64) -> Result<DVector<f64>> {
    let d = basis.dim();
    let mut v = DVector::zeros(d);
    for a in 0..d {
        v[a] = pairing_s(&basis.elements[a], w, s)?;
    }
    Ok(v)
}

/// Coadjoint action generator: `<ad*_X lambda, Y> = -<lambda, [X, Y]>`.
pub fn ad_star(x: &CoordVector, lambda: &CoordVector, basis: &BasisData) -> Result<CoordVector> {
    if x.space != CoordSpace::K || lambda.space != CoordSpace::KStar {
        return Err(Error::InvalidArgument("ad_star expects (k, k*) coordinates".into()));
    }
    let d = basis.dim();
    if x.dim() != d || lambda.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.dim().min(lambda.dim()) });
    }
    let mut out = DVector::zeros(d);
    for b in 0..d {
        let mut acc = 0.0;
        for a in 0..d {
            if x.coords[a] == 0.0 {
                continue;
            }
            for k in 0..d {
                acc += x.coords[a] * lambda.coords[k] * basis.structure_constants[a][b][k];
            }
        }
        out[b] = -acc;
    }
    Ok(CoordVector::new_kstar(out))
}

/// Matrix of `Ad_k` on k in the orthonormal basis (column a holds the
/// coordinates of `k e_a k^{-1}`). For unitary k this is orthogonal, and the
/// same matrix implements the coadjoint action on k*-coordinates.
pub fn adjoint_matrix_k(k: &CMatrix, basis: &BasisData) -> Result<DMatrix<f64>> {
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    let kinv = k.adjoint();
    for a in 0..d {
        let conj = k * basis.elements[a].entries() * &kinv;
        let el = AlgebraElement { entries: conj, kind: AlgebraKind::Compact };
        for b in 0..d {
            m[(b, a)] = inner(&el, &basis.elements[b])?;
        }
    }
    Ok(m)
}

/// Matrix of `Ad_k` on the double g = k + an in the basis (B, B*(s)),
/// for unitary k. The conjugates of the compact basis stay in k exactly,
/// so only the dual columns need the k/an splitting (the an-coordinates
/// carry a 1/s and must not be fed projection noise).
pub fn adjoint_matrix_double(k: &CMatrix, basis: &BasisData, s: f64) -> Result<DMatrix<f64>> {
    let d = basis.dim();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    let kinv = k.adjoint();
    let duals = dual_basis_an(basis, s)?;
    for a in 0..d {
        let conj = k * basis.elements[a].entries() * &kinv;
        let el = AlgebraElement { entries: conj, kind: AlgebraKind::Compact };
        for b in 0..d {
            m[(b, a)] = inner(&el, &basis.elements[b])?;
        }
    }
    for a in 0..d {
        let conj = k * duals[a].entries() * &kinv;
        let g = AlgebraElement { entries: conj, kind: AlgebraKind::General };
        let kpart = proj_k(&g);
        let anpart = proj_an(&g);
        for b in 0..d {
            m[(b, d + a)] = inner(&kpart, &basis.elements[b])?;
            m[(d + b, d + a)] = pairing_s(&basis.elements[b], &anpart, s)?;
        }
    }
    Ok(m)
}
