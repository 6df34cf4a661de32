//! Dense complex linear algebra used by the spectral pipeline.
//!
//! Eigendecompositions are delegated to nalgebra (Hermitian QR iteration and
//! complex Schur). Everything here works on `DMatrix<Complex64>`.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues (sorted ascending by real, then imaginary part) and a
/// matrix whose columns are matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

pub fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `|M - M^H|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Full eigendecomposition of a square matrix.
///
/// With `hermitian_hint` the matrix is symmetrized first, eigenvalues come
/// back real and eigenvectors orthonormal. The residual `max|MU - UD|` must
/// stay within `tol * max(1, max|M|)`.
pub fn eig_dense(m: &CMatrix, hermitian_hint: bool, tol: f64) -> Result<EigenDecomposition> {
    assert!(m.is_square(), "eig_dense needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        });
    }

    let (values, vectors) = if hermitian_hint {
        let h = (m + m.adjoint()).scale(0.5);
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, SCHUR_MAX_ITER)
            .ok_or(Error::NonConvergence { size: n })?;
        let values: Vec<Complex64> = eig
            .eigenvalues
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        (values, eig.eigenvectors)
    } else {
        let (q, t) = schur(m)?;
        let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
        let z = triangular_eigenvectors(&t);
        (values, q * z)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_complex(&values[a], &values[b]));
    let sorted_values: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);

    let residual = eigen_residual(m, &sorted_values, &sorted_vectors);
    let bound = tol * max_abs(m).max(1.0);
    if residual > bound {
        return Err(Error::EigenResidual {
            residual,
            tol: bound,
        });
    }
    Ok(EigenDecomposition {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Eigenvalues only, via the complex Schur form; sorted like [`eig_dense`].
pub fn eigenvalues_general(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let (_, t) = schur(m)?;
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(cmp_complex);
    Ok(values)
}

/// Complex Schur form `M = Q T Q^H`. Shifted QR can stall on exact Jordan
/// structure (nilpotent companion matrices), so on failure the matrix is
/// rotated by a fixed Householder reflection `P` and the factors of `P M P^H`
/// are mapped back.
fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = m.nrows();
    if let Some(schur) = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER) {
        return Ok(schur.unpack());
    }
    let p = householder(n);
    let rotated = &p * m * &p;
    let schur = Schur::try_new(rotated, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NonConvergence { size: n })?;
    let (q, t) = schur.unpack();
    Ok((&p * q, t))
}

/// Hermitian unitary reflection `I - 2 v v^H` for a fixed generic unit `v`.
fn householder(n: usize) -> CMatrix {
    let v = CVector::from_fn(n, |i, _| {
        Complex64::from_polar(1.0 + 0.37 * i as f64, 0.7 * (i as f64 + 1.0))
    });
    let v = v.unscale(v.norm());
    CMatrix::identity(n, n) - (&v * v.adjoint()).scale(2.0)
}

/// Eigenvectors of an upper-triangular matrix by back substitution,
/// normalized to unit length.
fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let scale = max_abs(t).max(f64::MIN_POSITIVE);
    let mut z = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        z[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in j + 1..=k {
                s += t[(j, l)] * z[(l, k)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < f64::EPSILON * scale {
                denom = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            z[(j, k)] = -s / denom;
        }
        let norm = z.column(k).norm();
        z.column_mut(k).unscale_mut(norm);
    }
    z
}

/// `max |M U - U D|` over all entries.
pub fn eigen_residual(m: &CMatrix, values: &[Complex64], vectors: &CMatrix) -> f64 {
    let mu = m * vectors;
    let mut worst: f64 = 0.0;
    for (c, &lambda) in values.iter().enumerate() {
        for r in 0..m.nrows() {
            worst = worst.max((mu[(r, c)] - vectors[(r, c)] * lambda).norm());
        }
    }
    worst
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count of singular values above `rank_tol * max(1, largest)`.
pub fn numerical_rank(singular_values: &[f64], rank_tol: f64) -> usize {
    let largest = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = rank_tol * largest.max(1.0);
    singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Greedy column-pivoted Gram–Schmidt over `candidates` (column indices of
/// `m`): repeatedly takes the candidate with the largest component orthogonal
/// to the columns already taken. Stops after `limit` picks or when the best
/// remaining component drops to `rel_tol` times the largest column norm.
/// Ties go to the earlier candidate.
pub fn pivoted_column_selection(
    m: &CMatrix,
    candidates: &[usize],
    limit: usize,
    rel_tol: f64,
) -> Vec<usize> {
    let mut residuals: Vec<CVector> = candidates
        .iter()
        .map(|&c| m.column(c).into_owned())
        .collect();
    let scale = residuals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut taken = vec![false; candidates.len()];
    let mut selected = Vec::new();

    while selected.len() < limit {
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in residuals.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let norm = r.norm();
            if best.is_none_or(|(_, b)| norm > b) {
                best = Some((i, norm));
            }
        }
        let Some((pick, norm)) = best else { break };
        if norm <= rel_tol * scale || norm == 0.0 {
            break;
        }
        taken[pick] = true;
        selected.push(candidates[pick]);
        let q = residuals[pick].unscale(norm);
        for (i, r) in residuals.iter_mut().enumerate() {
            if taken[i] {
                continue;
            }
            // two passes keep the projection numerically orthogonal
            for _ in 0..2 {
                let coef = q.dotc(r);
                r.axpy(-coef, &q, Complex64::new(1.0, 0.0));
            }
        }
    }
    selected
}

/// Sorts two multisets by (real, imaginary) and returns the largest
/// distance between paired entries; `None` if the sizes differ.
pub fn sorted_multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(cmp_complex);
    b.sort_by(cmp_complex);
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max),
    )
}

/// Multiset distance robust to reordering among nearly-equal real parts:
/// each element of `a` (in sorted order) is matched to the nearest unused
/// element of `b`. Returns the largest matched distance.
pub fn nearest_multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    a.sort_by(cmp_complex);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// True when `small` is a sub-multiset of `large`, matching greedily within `tol`.
pub fn is_submultiset(small: &[f64], large: &[f64], tol: f64) -> bool {
    let mut small = small.to_vec();
    let mut large = large.to_vec();
    small.sort_by(f64::total_cmp);
    large.sort_by(f64::total_cmp);
    let mut j = 0;
    for x in small {
        while j < large.len() && large[j] < x - tol {
            j += 1;
        }
        if j == large.len() || (large[j] - x).abs() > tol {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(
            rows,
            cols,
            &data
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn nilpotent_companion_converges() {
        let m = real(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let values = eigenvalues_general(&m).unwrap();
        assert!(values.iter().all(|z| z.norm() < 1e-4));
    }

    #[test]
    fn hermitian_two_by_two() {
        let m = real(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let eig = eig_dense(&m, true, 1e-12).unwrap();
        assert!((eig.values[0].re - 1.0).abs() < 1e-14);
        assert!((eig.values[1].re - 3.0).abs() < 1e-14);
        assert!(eig.values.iter().all(|v| v.im == 0.0));
    }

    #[test]
    fn zero_matrix() {
        let m = CMatrix::zeros(3, 3);
        let eig = eig_dense(&m, true, 1e-12).unwrap();
        assert!(eig.values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(singular_values(&eig.vectors).len(), 3);
        assert_eq!(numerical_rank(&singular_values(&eig.vectors), 1e-9), 3);
    }

    #[test]
    fn general_matrix_with_complex_spectrum() {
        // rotation by 90 degrees: eigenvalues -i, i
        let m = real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let eig = eig_dense(&m, false, 1e-12).unwrap();
        assert!((eig.values[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((eig.values[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn general_upper_triangular_vectors() {
        let m = real(3, 3, &[1.0, 2.0, 3.0, 0.0, 4.0, 5.0, 0.0, 0.0, 6.0]);
        let eig = eig_dense(&m, false, 1e-12).unwrap();
        let vals: Vec<f64> = eig.values.iter().map(|v| v.re).collect();
        assert_eq!(vals.len(), 3);
        for (v, e) in vals.iter().zip([1.0, 4.0, 6.0]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_and_selection() {
        let m = real(
            3,
            4,
            &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        );
        assert_eq!(numerical_rank(&singular_values(&m), 1e-9), 2);
        let picked = pivoted_column_selection(&m, &[0, 1, 2, 3], 3, 1e-9);
        assert_eq!(picked, vec![1, 2]);
    }

    #[test]
    fn multiset_helpers() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(
            sorted_multiset_distance(&[c(1.0), c(2.0)], &[c(2.0), c(1.0)]),
            Some(0.0)
        );
        assert_eq!(sorted_multiset_distance(&[c(1.0)], &[]), None);
        assert!(is_submultiset(&[1.0, 3.0], &[0.0, 1.0, 2.0, 3.0], 1e-9));
        assert!(!is_submultiset(&[1.0, 1.0], &[0.0, 1.0, 2.0], 1e-9));
    }
}
