//! Dense complex kernels shared by the cone, phase and completion routines.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub(crate) const HERMITIAN_REL_TOL: f64 = 1e-12;

pub(crate) fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub(crate) fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// e^{i theta}
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub(crate) fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Relative Hermitian asymmetry ||m - m*|| / max(1, ||m||).
pub(crate) fn hermitian_asymmetry(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(1.0)
}

/// Symmetrize m when its asymmetry is below the crate-wide threshold;
/// otherwise report the offending asymmetry.
pub(crate) fn require_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let asymmetry = hermitian_asymmetry(m);
    if asymmetry > HERMITIAN_REL_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok((m + m.adjoint()).scale(0.5))
}

/// Eigenvalues (ascending) and matching eigenvectors of a Hermitian matrix.
/// The input is trusted to be Hermitian; only its symmetrized part is used.
pub(crate) fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in idx.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

pub(crate) fn lambda_min(m: &ComplexMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.first().copied().unwrap_or(0.0)
}

/// Smallest eigenvalue, largest absolute eigenvalue (the spectral norm of a
/// Hermitian matrix), in one decomposition.
pub(crate) fn lambda_min_and_norm(m: &ComplexMatrix) -> (f64, f64) {
    let (vals, _) = hermitian_eigen(m);
    let min = vals.first().copied().unwrap_or(0.0);
    let max = vals.last().copied().unwrap_or(0.0);
    (min, min.abs().max(max.abs()))
}

pub(crate) fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.iter().copied().fold(0.0, f64::max)
}

/// Numerical rank and an orthonormal range basis, with singular values below
/// rel_tol * sigma_max treated as zero.
pub(crate) fn rank_and_range(m: &ComplexMatrix, rel_tol: f64) -> (usize, ComplexMatrix) {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * smax;
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff && s > 0.0)
        .count();
    (rank, u.columns(0, rank).into_owned())
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub(crate) fn pseudo_inverse(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return ComplexMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = (rel_tol * smax).max(0.0);
    svd.pseudo_inverse(cutoff)
        .expect("pseudo-inverse of a decomposed matrix")
}

/// First `count` left singular vectors (descending singular values).
pub(crate) fn left_singular_basis(m: &ComplexMatrix, count: usize) -> ComplexMatrix {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    u.columns(0, count).into_owned()
}

/// PSD square root via the eigendecomposition. Eigenvalues at or below
/// rel_tol * lambda_max count as zero, so roundoff junk in singular inputs
/// does not leak into the factor.
pub(crate) fn psd_sqrt(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let lam_max = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = rel_tol * lam_max;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        if vals[k] <= cutoff {
            continue;
        }
        let lam = vals[k].sqrt();
        let v = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += v[i] * v[j].conj() * Complex64::new(lam, 0.0);
            }
        }
    }
    out
}

/// Rank of a Hermitian PSD matrix under the relative eigenvalue cutoff used
/// by [psd_sqrt].
pub(crate) fn psd_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let (vals, _) = hermitian_eigen(m);
    let lam_max = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = rel_tol * lam_max;
    vals.iter().filter(|&&l| l > cutoff).count()
}

/// Upper-triangular factor R with h = R* R, for Hermitian PSD h (possibly
/// singular). Built from the orthogonal-triangular factorization of the PSD
/// square root; rows are phase-normalized so that the diagonal of R is real
/// and nonnegative.
pub(crate) fn upper_factor_from_psd(h: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let b = psd_sqrt(h, rel_tol);
    let qr = b.qr();
    let mut r = qr.r();
    let n = r.nrows();
    for i in 0..n {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            let phase = (d.conj() / d.norm()).scale(1.0);
            for j in 0..r.ncols() {
                r[(i, j)] *= phase;
            }
        }
    }
    r
}

/// Lower-triangular factor L with h = L* L, obtained by factoring the
/// index-reversed matrix.
pub(crate) fn lower_factor_from_psd(h: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let flipped = flip(h);
    let r = upper_factor_from_psd(&flipped, rel_tol);
    flip(&r)
}

/// Reverse both row and column order.
pub(crate) fn flip(m: &ComplexMatrix) -> ComplexMatrix {
    let (nr, nc) = m.shape();
    ComplexMatrix::from_fn(nr, nc, |i, j| m[(nr - 1 - i, nc - 1 - j)])
}

/// Extend an orthonormal set of columns to an orthonormal basis of C^n,
/// drawing completion vectors from the standard basis in index order.
pub(crate) fn orthonormal_completion(basis: &ComplexMatrix) -> ComplexMatrix {
    let n = basis.nrows();
    let k = basis.ncols();
    let mut cols: Vec<ComplexVector> = (0..k).map(|j| basis.column(j).into_owned()).collect();
    let mut extra: Vec<ComplexVector> = Vec::new();
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = ComplexVector::zeros(n);
        v[i] = cone();
        // Two rounds of Gram-Schmidt keep the completion orthonormal.
        for _ in 0..2 {
            for c in &cols {
                let coeff = c.dotc(&v);
                v -= c * coeff;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= Complex64::new(norm, 0.0);
            cols.push(v.clone());
            extra.push(v);
        }
    }
    let mut out = ComplexMatrix::zeros(n, extra.len());
    for (j, v) in extra.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Unitary W with r = W l, where l and r are triangular factors (of known
/// common rank) of the same Hermitian PSD matrix. On the range of l the map
/// is forced by the factor identity; the orthogonal complement is linked by
/// lowest-index orthonormal completions.
pub(crate) fn unitary_link(l: &ComplexMatrix, r: &ComplexMatrix, rank: usize) -> ComplexMatrix {
    let n = l.nrows();
    let w0 = r * pseudo_inverse_of_rank(l, rank);
    if rank == n {
        return w0;
    }
    let range_l = left_singular_basis(l, rank);
    let range_r = left_singular_basis(r, rank);
    let bl = orthonormal_completion(&range_l);
    let br = orthonormal_completion(&range_r);
    w0 + br * bl.adjoint()
}

/// Pseudoinverse truncated to exactly the leading `rank` singular values.
pub(crate) fn pseudo_inverse_of_rank(m: &ComplexMatrix, rank: usize) -> ComplexMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd with u requested");
    let v_t = svd.v_t.expect("svd with v requested");
    let mut out = ComplexMatrix::zeros(m.ncols(), m.nrows());
    for k in 0..rank.min(svd.singular_values.len()) {
        let s = svd.singular_values[k];
        if s <= 0.0 {
            break;
        }
        let uk = u.column(k);
        let vk = v_t.row(k).adjoint();
        out += &vk * uk.adjoint() * Complex64::new(1.0 / s, 0.0);
    }
    out
}

/// Solve a x = b by LU with partial pivoting.
pub(crate) fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<ComplexMatrix> {
    a.clone().lu().solve(b)
}

/// Copy of the principal submatrix indexed by 1-based vertex labels.
pub(crate) fn submatrix(m: &ComplexMatrix, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        m[(rows[i] - 1, cols[j] - 1)]
    })
}

pub(crate) fn assign_submatrix(
    m: &mut ComplexMatrix,
    rows: &[usize],
    cols: &[usize],
    block: &ComplexMatrix,
) {
    for (i, &u) in rows.iter().enumerate() {
        for (j, &v) in cols.iter().enumerate() {
            m[(u - 1, v - 1)] = block[(i, j)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn randomish(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()))
    }

    #[test]
    fn hermitian_eigen_sorted_and_reconstructs() {
        let a = randomish(5, 7);
        let h = (&a + a.adjoint()).scale(0.5);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let mut rec = ComplexMatrix::zeros(5, 5);
        for k in 0..5 {
            let v = vecs.column(k).into_owned();
            rec += &v * v.adjoint() * Complex64::new(vals[k], 0.0);
        }
        assert!((rec - h).norm() < 1e-12);
    }

    #[test]
    fn factors_recompose_psd() {
        for seed in [3u64, 11, 29] {
            let a = randomish(4, seed);
            let h = &a * a.adjoint();
            let r = upper_factor_from_psd(&h, 1e-12);
            let l = lower_factor_from_psd(&h, 1e-12);
            assert!((r.adjoint() * &r - &h).norm() < 1e-10 * h.norm());
            assert!((l.adjoint() * &l - &h).norm() < 1e-10 * h.norm());
            // Triangularity.
            for i in 0..4 {
                for j in 0..4 {
                    if i > j {
                        assert!(r[(i, j)].norm() < 1e-12);
                    }
                    if i < j {
                        assert!(l[(i, j)].norm() < 1e-12);
                    }
                }
            }
            let w = unitary_link(&l, &r, 4);
            assert!((&w * w.adjoint() - identity(4)).norm() < 1e-10);
            assert!((&w * &l - &r).norm() < 1e-10 * h.norm().max(1.0));
        }
    }

    #[test]
    fn factors_handle_singular_psd() {
        // Rank-one PSD matrix.
        let v = ComplexVector::from_vec(vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.2),
            Complex64::new(0.0, -1.1),
        ]);
        let h = &v * v.adjoint();
        let r = upper_factor_from_psd(&h, 1e-12);
        let l = lower_factor_from_psd(&h, 1e-12);
        assert_eq!(psd_rank(&h, 1e-12), 1);
        assert!((r.adjoint() * &r - &h).norm() < 1e-10 * h.norm());
        assert!((l.adjoint() * &l - &h).norm() < 1e-10 * h.norm());
        let w = unitary_link(&l, &r, 1);
        assert!((&w * w.adjoint() - identity(3)).norm() < 1e-9);
        assert!((&w * &l - &r).norm() < 1e-9 * h.norm().max(1.0));
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose_identity() {
        let m = submatrix(
            &randomish(4, 17),
            &[1, 2, 3],
            &[1, 2, 3, 4],
        );
        let p = pseudo_inverse(&m, 1e-12);
        assert!((&m * &p * &m - &m).norm() < 1e-10 * m.norm());
    }

    #[test]
    fn orthonormal_completion_is_orthonormal() {
        let a = randomish(5, 23);
        let (_, range) = rank_and_range(&a.columns(0, 2).into_owned(), 1e-12);
        let extra = orthonormal_completion(&range);
        assert_eq!(extra.ncols(), 5 - range.ncols());
        let full = {
            let mut f = ComplexMatrix::zeros(5, 5);
            for j in 0..range.ncols() {
                f.set_column(j, &range.column(j));
            }
            for j in 0..extra.ncols() {
                f.set_column(range.ncols() + j, &extra.column(j));
            }
            f
        };
        assert!((full.adjoint() * &full - identity(5)).norm() < 1e-10);
    }
}
