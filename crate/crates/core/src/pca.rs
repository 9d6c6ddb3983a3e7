//! Thin SVD, principal bases and principal-component removal.
//!
//! Principal directions come from the right singular vectors of the (already
//! centered) data matrix: a Householder QR reduces the tall matrix to a small
//! square triangle, and one-sided Jacobi rotations diagonalize that triangle.
//! The covariance matrix `MᵀM` is never formed.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{dot, norm, Matrix};
use crate::{Error, Result};

/// Singular values below `RANK_TOLERANCE × σ_max` count as numerically zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 80;

/// An orthonormal set of principal directions ordered by decreasing variance.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalBasis {
    components: Matrix,
    variances: Vec<f64>,
    requested: usize,
}

impl PrincipalBasis {
    /// A basis with no components in `dim` dimensions.
    pub fn empty(dim: usize) -> Self {
        Self { components: Matrix::zeros(0, dim), variances: Vec::new(), requested: 0 }
    }

    /// Rebuilds a basis from stored parts. Checks shape, ordering and
    /// orthonormality (within 1e-8).
    pub fn from_parts(components: Matrix, variances: Vec<f64>, requested: usize) -> Result<Self> {
        if components.rows() != variances.len() {
            return Err(Error::Dim { expected: components.rows(), found: variances.len() });
        }
        if variances.iter().any(|v| !(*v >= 0.0) || !v.is_finite())
            || variances.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::InvalidArgument(
                "variances must be finite, non-negative and non-increasing".into(),
            ));
        }
        for i in 0..components.rows() {
            for j in i..components.rows() {
                let d = dot(components.row(i), components.row(j));
                let target = if i == j { 1.0 } else { 0.0 };
                if (d - target).abs() > 1e-8 {
                    return Err(Error::InvalidArgument("components are not orthonormal".into()));
                }
            }
        }
        Ok(Self { components, variances, requested })
    }

    /// Components as rows (`len × dim`).
    pub fn components(&self) -> &Matrix {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[f64] {
        self.components.row(i)
    }

    /// Variance of the data along each component (σ² / n).
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn len(&self) -> usize {
        self.components.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.components.cols()
    }

    /// Number of components that were asked for.
    pub fn requested(&self) -> usize {
        self.requested
    }

    /// True when the data had fewer numerically non-zero directions than
    /// requested.
    pub fn is_rank_deficient(&self) -> bool {
        self.len() < self.requested
    }
}

/// Right singular vectors and singular values of `m`, sorted by decreasing
/// singular value.
#[derive(Debug, Clone)]
pub struct RightSingular {
    /// `min(n, d)` singular values, non-increasing.
    pub values: Vec<f64>,
    /// One right singular vector per row (`min(n, d) × d`).
    pub vectors: Matrix,
}

/// Thin SVD of `m`, right side only.
pub fn right_singular(m: &Matrix) -> Result<RightSingular> {
    let (n, d) = (m.rows(), m.cols());
    if n == 0 || d == 0 {
        return Err(Error::EmptyInput);
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix contains non-finite values".into()));
    }
    let (values, vectors) = if n >= d {
        let (r, _) = householder_qr(m, false);
        // columns of R, stored as rows
        let mut cols = r.transpose();
        let mut v = Matrix::identity(d);
        one_sided_jacobi(&mut cols, &mut v)?;
        (column_norms(&cols), v)
    } else {
        // Mᵀ = Q R  =>  M = Rᵀ Qᵀ, and Rᵀ W = U Σ gives right vectors Q W.
        let (r, q) = householder_qr(&m.transpose(), true);
        let q = q.expect("requested Q");
        // columns of Rᵀ are the rows of R
        let mut cols = r;
        let mut w = Matrix::identity(n);
        one_sided_jacobi(&mut cols, &mut w)?;
        // rows of w are the columns of W; (Q W)ᵀ rows = Q · w_row
        let mut v = Matrix::zeros(n, d);
        for j in 0..n {
            let wj = w.row(j).to_vec();
            for i in 0..d {
                v[(j, i)] = dot(q.row(i), &wj);
            }
        }
        (column_norms(&cols), v)
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vectors = vectors.select_rows(&order);
    for i in 0..sorted_vectors.rows() {
        apply_sign_convention(sorted_vectors.row_mut(i));
    }
    Ok(RightSingular { values: sorted_values, vectors: sorted_vectors })
}

/// Flips `v` so its largest-magnitude coordinate (first one on ties) is
/// positive.
pub fn apply_sign_convention(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn column_norms(cols: &Matrix) -> Vec<f64> {
    cols.iter_rows().map(norm).collect()
}

/// Householder QR of a tall matrix (`rows ≥ cols`). Returns the `cols × cols`
/// upper-triangular factor and, on request, the thin `rows × cols` Q.
fn householder_qr(a: &Matrix, want_q: bool) -> (Matrix, Option<Matrix>) {
    let (n, d) = (a.rows(), a.cols());
    debug_assert!(n >= d);
    let mut work = a.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut w = vec![0.0; d];
    for k in 0..d {
        let mut v: Vec<f64> = (k..n).map(|i| work[(i, k)]).collect();
        let alpha = norm(&v);
        if alpha == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let beta = if v[0] >= 0.0 { -alpha } else { alpha };
        v[0] -= beta;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        // w = vᵀ A[k.., k..], accumulated row by row
        for x in w[k..].iter_mut() {
            *x = 0.0;
        }
        for (off, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let row = &work.row(k + off)[k..];
            for (wj, &aij) in w[k..].iter_mut().zip(row) {
                *wj += vi * aij;
            }
        }
        let scale = 2.0 / vnorm2;
        for (off, &vi) in v.iter().enumerate() {
            let f = scale * vi;
            if f == 0.0 {
                continue;
            }
            let row = &mut work.row_mut(k + off)[k..];
            for (aij, &wj) in row.iter_mut().zip(&w[k..]) {
                *aij -= f * wj;
            }
        }
        // exact values on and below the diagonal
        work[(k, k)] = beta;
        for i in k + 1..n {
            work[(i, k)] = 0.0;
        }
        reflectors.push(v);
    }
    let mut r = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            r[(i, j)] = work[(i, j)];
        }
    }
    let q = want_q.then(|| {
        // Q = H_0 H_1 … H_{d-1} applied to the first d columns of I
        let mut q = Matrix::zeros(n, d);
        for j in 0..d {
            q[(j, j)] = 1.0;
        }
        for k in (0..d).rev() {
            let v = &reflectors[k];
            if v.is_empty() {
                continue;
            }
            let scale = 2.0 / dot(v, v);
            let mut wq = vec![0.0; d];
            for (off, &vi) in v.iter().enumerate() {
                for (wj, &qij) in wq.iter_mut().zip(q.row(k + off)) {
                    *wj += vi * qij;
                }
            }
            for (off, &vi) in v.iter().enumerate() {
                let f = scale * vi;
                for (qij, &wj) in q.row_mut(k + off).iter_mut().zip(&wq) {
                    *qij -= f * wj;
                }
            }
        }
        q
    });
    (r, q)
}

/// Hestenes one-sided Jacobi. `cols` holds the columns of the matrix as rows;
/// on return they are mutually orthogonal and `v` (also column-as-row) holds
/// the accumulated rotations.
fn one_sided_jacobi(cols: &mut Matrix, v: &mut Matrix) -> Result<()> {
    let c = cols.rows();
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = dot(cols.row(p), cols.row(p));
                let beta = dot(cols.row(q), cols.row(q));
                let gamma = dot(cols.row(p), cols.row(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                rotate_rows(cols, p, q, cs, sn);
                rotate_rows(v, p, q, cs, sn);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::Numerics("one-sided Jacobi SVD did not converge"))
}

fn rotate_rows(m: &mut Matrix, p: usize, q: usize, cs: f64, sn: f64) {
    let d = m.cols();
    let data = m.as_mut_slice();
    let (lo, hi) = data.split_at_mut(q * d);
    let rp = &mut lo[p * d..(p + 1) * d];
    let rq = &mut hi[..d];
    for (a, b) in rp.iter_mut().zip(rq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = cs * x - sn * y;
        *b = sn * x + cs * y;
    }
}

/// Top-`m` principal components of an already centered matrix.
///
/// Requires `1 ≤ m ≤ min(n, d)`. Directions whose singular value falls below
/// [`RANK_TOLERANCE`] of the largest are dropped and the basis reports the
/// shortfall through [`PrincipalBasis::is_rank_deficient`].
pub fn principal_components(centered: &Matrix, m: usize) -> Result<PrincipalBasis> {
    let (n, d) = (centered.rows(), centered.cols());
    let max = n.min(d);
    if m == 0 || m > max {
        return Err(Error::Rank { requested: m, max });
    }
    let svd = right_singular(centered)?;
    let largest = svd.values.first().copied().unwrap_or(0.0);
    let kept = svd
        .values
        .iter()
        .take(m)
        .take_while(|&&s| largest > 0.0 && s > RANK_TOLERANCE * largest)
        .count();
    if kept < m {
        log::warn!("numeric rank {kept} is below the {m} requested components");
    }
    let order: Vec<usize> = (0..kept).collect();
    let components = svd.vectors.select_rows(&order);
    let variances = svd.values[..kept].iter().map(|s| s * s / n as f64).collect();
    Ok(PrincipalBasis { components, variances, requested: m })
}

/// A complete orthonormal eigenbasis of `WᵀW` (`d × d`, rows), ordered by
/// decreasing eigenvalue. When `W` has fewer rows than columns the null space
/// is completed deterministically from the standard basis.
pub fn gram_eigenbasis(w: &Matrix) -> Result<Matrix> {
    let d = w.cols();
    let svd = right_singular(w)?;
    if svd.vectors.rows() == d {
        return Ok(svd.vectors);
    }
    let mut basis: Vec<Vec<f64>> = svd.vectors.iter_rows().map(|r| r.to_vec()).collect();
    // squared residual of each e_i against the current span
    let mut residual: Vec<f64> = (0..d)
        .map(|i| 1.0 - basis.iter().map(|b| b[i] * b[i]).sum::<f64>())
        .collect();
    while basis.len() < d {
        let mut pick = 0;
        for i in 1..d {
            if residual[i] > residual[pick] {
                pick = i;
            }
        }
        let mut u = vec![0.0; d];
        u[pick] = 1.0;
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&u, b);
                for (x, y) in u.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let nu = norm(&u);
        if !(nu > 1e-6) {
            return Err(Error::Numerics("null-space completion lost orthogonality"));
        }
        for x in u.iter_mut() {
            *x /= nu;
        }
        apply_sign_convention(&mut u);
        for (r, x) in residual.iter_mut().zip(&u) {
            *r -= x * x;
        }
        residual[pick] = f64::NEG_INFINITY;
        basis.push(u);
    }
    Matrix::from_rows(&basis)
}

/// Projects every row of `m` off the components of `basis`:
/// `w ← w − Σⱼ ⟨w, cⱼ⟩ cⱼ`.
pub fn remove_components(m: &Matrix, basis: &PrincipalBasis) -> Result<Matrix> {
    if basis.dim() != m.cols() {
        return Err(Error::Dim { expected: m.cols(), found: basis.dim() });
    }
    let mut out = m.clone();
    for i in 0..out.rows() {
        remove_from_row(out.row_mut(i), basis);
    }
    Ok(out)
}

/// In-place single-row variant of [`remove_components`]. Dimensions must
/// already match.
pub fn remove_from_row(row: &mut [f64], basis: &PrincipalBasis) {
    for c in basis.components.iter_rows() {
        let coef = dot(row, c);
        for (x, y) in row.iter_mut().zip(c) {
            *x -= coef * y;
        }
    }
}

/// Coordinates of each row of `m` along the components of `basis`
/// (`n × len`).
pub fn project(m: &Matrix, basis: &PrincipalBasis) -> Result<Matrix> {
    if basis.dim() != m.cols() {
        return Err(Error::Dim { expected: m.cols(), found: basis.dim() });
    }
    let mut out = Matrix::zeros(m.rows(), basis.len());
    for i in 0..m.rows() {
        for (j, c) in basis.components.iter_rows().enumerate() {
            out[(i, j)] = dot(m.row(i), c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_orthonormal(m: &Matrix) {
        for i in 0..m.rows() {
            for j in 0..m.rows() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(m.row(i), m.row(j)) - want).abs() < 1e-12, "{i},{j}");
            }
        }
    }

    #[test]
    fn x_axis_cloud() {
        let m = Matrix::from_rows(&[[-2.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        let b = principal_components(&m, 1).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b.component(0)[0] - 1.0).abs() < 1e-15);
        assert!((b.variances()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_keeps_fewer() {
        let m = Matrix::from_rows(&[[-2.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        let b = principal_components(&m, 3).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.is_rank_deficient());
        let zero = Matrix::zeros(4, 3);
        assert!(principal_components(&zero, 2).unwrap().is_empty());
    }

    #[test]
    fn rank_range_checked() {
        let m = Matrix::zeros(2, 5);
        assert_eq!(principal_components(&m, 0), Err(Error::Rank { requested: 0, max: 2 }));
        assert_eq!(principal_components(&m, 3), Err(Error::Rank { requested: 3, max: 2 }));
    }

    #[test]
    fn wide_matrix_svd() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 0.0, -1.0], [0.5, -1.0, 3.0, 0.0]]).unwrap();
        let svd = right_singular(&m).unwrap();
        assert_eq!(svd.vectors.rows(), 2);
        assert_orthonormal(&svd.vectors);
        // ‖M v_j‖ = σ_j
        for j in 0..2 {
            let mv: Vec<f64> = m.iter_rows().map(|r| dot(r, svd.vectors.row(j))).collect();
            assert!((norm(&mv) - svd.values[j]).abs() < 1e-12);
        }
        let full = gram_eigenbasis(&m).unwrap();
        assert_eq!(full.rows(), 4);
        assert_orthonormal(&full);
    }

    #[test]
    fn removal_cases() {
        let mut comps = Matrix::zeros(1, 3);
        comps[(0, 0)] = 1.0;
        let b = PrincipalBasis::from_parts(comps, alloc::vec![1.0], 1).unwrap();
        let m = Matrix::from_rows(&[[3.0, 4.0, 0.0]]).unwrap();
        assert_eq!(remove_components(&m, &b).unwrap().as_slice(), &[0.0, 4.0, 0.0]);
        assert_eq!(remove_components(&m, &PrincipalBasis::empty(3)).unwrap(), m);
        let full = PrincipalBasis::from_parts(Matrix::identity(3), alloc::vec![1.0; 3], 3).unwrap();
        assert!(remove_components(&m, &full).unwrap().frobenius_norm() < 1e-12);
        assert!(remove_components(&Matrix::zeros(1, 2), &b).is_err());
    }

    #[test]
    fn sign_convention() {
        let mut v = [0.1, -0.9, 0.3];
        apply_sign_convention(&mut v);
        assert_eq!(v, [-0.1, 0.9, -0.3]);
    }
}
