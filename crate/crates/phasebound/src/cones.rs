//! Realification, the sector rotation map, the weighted inner product and
//! the cone-membership predicates.
//!
//! A complex matrix C splits as C = H + iS with Hermitian H = (C + C*)/2 and
//! S = (C - C*)/(2i). For a sector [alpha, beta] the rotation map sends
//! (H, S) to (-sin(a) H + cos(a) S, sin(b) H - cos(b) S); C lies in the
//! phase-bounded cone exactly when both rotated components are PSD.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Default relative tolerance for PSD and membership tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The pair (alpha, beta) defining the cone C[alpha, beta].
///
/// Widths of exactly 0 or pi reduce to plain PSD problems and are rejected
/// so that every sector owns an invertible rotation map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSector {
    alpha: f64,
    beta: f64,
}

impl PhaseSector {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let width = beta - alpha;
        if !(width > 0.0 && width < std::f64::consts::PI) || !width.is_finite() {
            return Err(Error::DegenerateSector { width });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    /// sin(beta - alpha), the determinant scale of the rotation map.
    pub fn rotation_determinant(&self) -> f64 {
        self.width().sin()
    }

    pub fn contains_angle(&self, phi: f64) -> bool {
        self.alpha <= phi && phi <= self.beta
    }
}

/// Hermitian pair (H, S) with C = H + iS.
#[derive(Debug, Clone, PartialEq)]
pub struct RealifiedPair {
    pub h: ComplexMatrix,
    pub s: ComplexMatrix,
}

/// Rotated pair (M_alpha, M_beta) for an owning sector.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedPair {
    pub m_alpha: ComplexMatrix,
    pub m_beta: ComplexMatrix,
}

/// Split c into its Hermitian pair: h = (c + c*)/2, s = (c - c*)/(2i).
pub fn toeplitz_decompose(c: &ComplexMatrix) -> RealifiedPair {
    let adj = c.adjoint();
    let h = (c + &adj).scale(0.5);
    let s = ((c - &adj) * Complex64::new(0.0, -0.5)).clone_owned();
    RealifiedPair { h, s }
}

/// Reassemble h + i s. Errors when either component drifts from Hermitian
/// beyond the crate-wide 1e-12 relative threshold; smaller asymmetry is
/// symmetrized away.
pub fn complexify(p: &RealifiedPair) -> Result<ComplexMatrix> {
    let h = linalg::require_hermitian(&p.h)?;
    let s = linalg::require_hermitian(&p.s)?;
    Ok(&h + &s * Complex64::new(0.0, 1.0))
}

/// Apply the sector rotation: m_alpha = -sin(a) h + cos(a) s,
/// m_beta = sin(b) h - cos(b) s. Hermitian structure and sparsity patterns
/// are preserved entrywise.
pub fn rotate_pair(p: &RealifiedPair, sector: PhaseSector) -> RotatedPair {
    let (sa, ca) = sector.alpha().sin_cos();
    let (sb, cb) = sector.beta().sin_cos();
    RotatedPair {
        m_alpha: &p.h * Complex64::new(-sa, 0.0) + &p.s * Complex64::new(ca, 0.0),
        m_beta: &p.h * Complex64::new(sb, 0.0) + &p.s * Complex64::new(-cb, 0.0),
    }
}

/// Exact inverse of [rotate_pair]; well-defined because sin(beta - alpha)
/// never vanishes for a valid sector.
pub fn rotate_pair_inverse(r: &RotatedPair, sector: PhaseSector) -> RealifiedPair {
    let (sa, ca) = sector.alpha().sin_cos();
    let (sb, cb) = sector.beta().sin_cos();
    let d = sector.rotation_determinant();
    RealifiedPair {
        h: (&r.m_alpha * Complex64::new(cb / d, 0.0) + &r.m_beta * Complex64::new(ca / d, 0.0)),
        s: (&r.m_alpha * Complex64::new(sb / d, 0.0) + &r.m_beta * Complex64::new(sa / d, 0.0)),
    }
}

/// Rotate the scalar value pair at one matrix position. Used to rotate
/// partial matrices entry by entry.
pub(crate) fn rotate_entry(
    h: Complex64,
    s: Complex64,
    sector: PhaseSector,
) -> (Complex64, Complex64) {
    let (sa, ca) = sector.alpha().sin_cos();
    let (sb, cb) = sector.beta().sin_cos();
    (h * (-sa) + s * ca, h * sb + s * (-cb))
}

/// Recombine PSD-side values into the complex matrix entry:
/// c = (e^{i beta} m_alpha + e^{i alpha} m_beta) / sin(beta - alpha).
pub(crate) fn recombine_entry(
    m_alpha: Complex64,
    m_beta: Complex64,
    sector: PhaseSector,
) -> Complex64 {
    let d = sector.rotation_determinant();
    (linalg::cis(sector.beta()) * m_alpha + linalg::cis(sector.alpha()) * m_beta) / d
}

/// PSD test with a relative tolerance: true iff
/// lambda_min(m) >= -tol * max(1, ||m||). Errors on inputs that are not
/// Hermitian within 1e-12 relative; milder asymmetry is symmetrized first.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let sym = linalg::require_hermitian(m)?;
    Ok(psd_unchecked(&sym, tol))
}

/// PSD test for matrices already known to be Hermitian.
pub(crate) fn psd_unchecked(m: &ComplexMatrix, tol: f64) -> bool {
    let (min, norm) = linalg::lambda_min_and_norm(m);
    min >= -tol * norm.max(1.0)
}

/// PD test for matrices already known to be Hermitian.
pub(crate) fn pd_unchecked(m: &ComplexMatrix, tol: f64) -> bool {
    let (min, norm) = linalg::lambda_min_and_norm(m);
    min > tol * norm.max(1.0)
}

/// Membership of c in the closed cone C[alpha, beta]: both rotated
/// components must be PSD.
pub fn in_phase_cone(c: &ComplexMatrix, sector: PhaseSector, tol: f64) -> bool {
    let r = rotate_pair(&toeplitz_decompose(c), sector);
    psd_unchecked(&r.m_alpha, tol) && psd_unchecked(&r.m_beta, tol)
}

/// Membership of c in the open cone: both rotated components must be
/// positive definite.
pub fn in_strict_phase_cone(c: &ComplexMatrix, sector: PhaseSector, tol: f64) -> bool {
    let r = rotate_pair(&toeplitz_decompose(c), sector);
    pd_unchecked(&r.m_alpha, tol) && pd_unchecked(&r.m_beta, tol)
}

/// Sector-weighted inner product: the trace pairing of the rotated images,
/// summed over both components. The phase-bounded cone is self-dual for this
/// product.
pub fn inner_product(p1: &RealifiedPair, p2: &RealifiedPair, sector: PhaseSector) -> f64 {
    let r1 = rotate_pair(p1, sector);
    let r2 = rotate_pair(p2, sector);
    hermitian_trace_product(&r1.m_alpha, &r2.m_alpha) + hermitian_trace_product(&r1.m_beta, &r2.m_beta)
}

/// tr(a b) for Hermitian a, b, evaluated entrywise.
fn hermitian_trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += (a[(i, j)].conj() * b[(i, j)]).re;
        }
    }
    acc
}
