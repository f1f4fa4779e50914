//! Extension of a partial isometry, given on a spanning family, to a unitary.

use num_traits::{One, Zero};

use super::eigen::{hermitian_eigen, hermitian_eigenvalues};
use super::matrix::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Returns a unitary `U` of order `max(p, q)` with `U d_i = r_i` (vectors
/// zero-padded to the common dimension).
///
/// The families must have matching Gram matrices up to `tol`. Both spans are
/// orthonormalized through the eigendecomposition of the averaged Gram
/// matrix; directions whose Gram eigenvalue is below the measured mismatch
/// are treated as null. Orthogonal complements are completed by
/// Gram–Schmidt over the standard basis in index order, so the result is
/// deterministic.
pub fn extend_isometry_to_unitary<T: Real>(
    domain: &[Vec<C<T>>],
    range: &[Vec<C<T>>],
    p: usize,
    q: usize,
    tol: T,
) -> Result<CMatrix<T>> {
    if domain.len() != range.len() {
        return Err(Error::InvalidInput(format!(
            "{} domain vectors but {} range vectors",
            domain.len(),
            range.len()
        )));
    }
    if domain.iter().any(|v| v.len() != p) || range.iter().any(|v| v.len() != q) {
        return Err(Error::InvalidInput(
            "vector length does not match its space".into(),
        ));
    }
    let r = p.max(q);
    let k = domain.len();
    let dmat = CMatrix::from_fn(r, k, |i, j| {
        domain[j].get(i).copied().unwrap_or_else(C::zero)
    });
    let rmat = CMatrix::from_fn(r, k, |i, j| {
        range[j].get(i).copied().unwrap_or_else(C::zero)
    });
    dmat.ensure_finite("domain family")?;
    rmat.ensure_finite("range family")?;

    let gd = dmat.adjoint_mul(&dmat);
    let gr = rmat.adjoint_mul(&rmat);
    let mut worst = (0, 0, T::zero());
    for i in 0..k {
        for j in 0..k {
            let dev = (gd[(i, j)] - gr[(i, j)]).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > tol {
        return Err(Error::NotIsometric {
            i: worst.0,
            j: worst.1,
            deviation: worst.2.as_f64(),
            tol: tol.as_f64(),
        });
    }

    let (e, f) = if k == 0 {
        (CMatrix::zeros(r, 0), CMatrix::zeros(r, 0))
    } else {
        let mismatch =
            hermitian_eigenvalues(&HermitianMatrix::from_upper(&(gd.clone() - gr.clone())))
                .iter()
                .fold(T::zero(), |a, &l| a.max(l.abs()));
        let avg = HermitianMatrix::from_upper(&(gd + gr).scale_real(T::lit(0.5)));
        let eig = hermitian_eigen(&avg);
        let lmax = eig
            .values
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .max(T::zero());
        let floor = T::lit(64.0) * T::epsilon() * lmax * T::from_usize(k).unwrap_or_else(T::one);
        let thr = T::lit(4.0) * mismatch.max(floor).max(T::min_positive_value());
        let kept: Vec<usize> = (0..k).filter(|&i| eig.values[i] > thr).collect();
        let basis = CMatrix::from_fn(k, kept.len(), |i, j| {
            eig.vectors[(i, kept[j])] / eig.values[kept[j]].sqrt()
        });
        (
            polar_orthonormalize(&dmat.matmul(&basis)),
            polar_orthonormalize(&rmat.matmul(&basis)),
        )
    };

    let ec = complete_basis(&e, r);
    let fc = complete_basis(&f, r);
    let u = f.matmul(&e.adjoint()) + fc.matmul(&ec.adjoint());

    let residual = u.unitarity_residual();
    if residual > T::lit(10.0) * tol.max(T::epsilon() * T::lit(64.0)) {
        return Err(Error::NumericalFailure(format!(
            "completed operator is not unitary (residual {:e})",
            residual.as_f64()
        )));
    }
    Ok(u)
}

/// Closest matrix with orthonormal columns, `X (X^*X)^{-1/2}`.
fn polar_orthonormalize<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    let s = x.cols();
    if s == 0 {
        return x.clone();
    }
    let g = HermitianMatrix::from_upper(&x.adjoint_mul(x));
    let eig = hermitian_eigen(&g);
    let inv_sqrt = CMatrix::from_fn(s, s, |i, j| {
        (0..s)
            .map(|l| {
                let w = T::one() / eig.values[l].max(T::min_positive_value()).sqrt();
                eig.vectors[(i, l)] * eig.vectors[(j, l)].conj() * w
            })
            .sum()
    });
    x.matmul(&inv_sqrt)
}

/// Extends orthonormal columns `q` to an orthonormal basis of `C^r` with
/// standard basis vectors taken in index order (two-pass Gram–Schmidt).
pub(crate) fn complete_basis<T: Real>(q: &CMatrix<T>, r: usize) -> CMatrix<T> {
    let mut cols: Vec<Vec<C<T>>> = (0..q.cols()).map(|j| q.col_vec(j)).collect();
    let start = cols.len();
    let accept = T::lit(1e-8);
    for idx in 0..r {
        if cols.len() == r {
            break;
        }
        let mut v = vec![C::zero(); r];
        v[idx] = C::one();
        for _ in 0..2 {
            for c in &cols {
                let proj: C<T> = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nrm > accept {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    let added = &cols[start..];
    CMatrix::from_fn(r, added.len(), |i, j| added[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::operator_norm;
    use crate::random::random_unitary;
    use crate::scalar::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize, n: usize) -> Vec<C<f64>> {
        let mut v = vec![C::zero(); n];
        v[i] = C::one();
        v
    }

    #[test]
    fn empty_family_gives_identity() {
        let u = extend_isometry_to_unitary::<f64>(&[], &[], 2, 2, 1e-9).unwrap();
        assert_eq!(u, CMatrix::identity(2));
    }

    #[test]
    fn basis_vector_mapped_to_other_basis_vector() {
        let u = extend_isometry_to_unitary(&[e(0, 2)], &[e(1, 2)], 2, 2, 1e-9).unwrap();
        let img = u.mul_vec(&e(0, 2));
        assert!((img[0]).norm() < 1e-15 && (img[1] - C::one()).norm() < 1e-15);
        assert!(u.unitarity_residual() < 1e-14);
    }

    #[test]
    fn gram_mismatch_reports_worst_pair() {
        let d = vec![e(0, 2), e(1, 2)];
        let r = vec![e(0, 2), e(0, 2)];
        match extend_isometry_to_unitary(&d, &r, 2, 2, 1e-9) {
            Err(Error::NotIsometric { i, j, .. }) => assert_eq!((i.min(j), i.max(j)), (0, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn random_isometric_family_is_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..100 {
            let n = rng.gen_range(1..7);
            let k = rng.gen_range(0..=n + 2);
            let v = random_unitary::<f64, _>(&mut rng, n);
            let d: Vec<Vec<C<f64>>> = (0..k)
                .map(|_| {
                    (0..n)
                        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            let r: Vec<Vec<C<f64>>> = d.iter().map(|x| v.mul_vec(x)).collect();
            let tol = 1e-9;
            let u = extend_isometry_to_unitary(&d, &r, n, n, tol).unwrap();
            assert!(u.unitarity_residual() <= 10.0 * tol, "trial {trial}");
            assert!((operator_norm(&u).unwrap() - 1.0).abs() < 1e-10);
            for (x, y) in d.iter().zip(&r) {
                let img = u.mul_vec(x);
                let err: f64 = img
                    .iter()
                    .zip(y)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(err <= 10.0 * tol, "trial {trial}: {err}");
            }
        }
    }

    #[test]
    fn unequal_dimensions_are_padded() {
        // C^1 -> C^3
        let d = vec![vec![c64(1.0, 0.0)]];
        let r = vec![vec![c64(0.0, 0.0), c64(0.6, 0.0), c64(0.0, 0.8)]];
        let u = extend_isometry_to_unitary(&d, &r, 1, 3, 1e-12).unwrap();
        assert_eq!(u.rows(), 3);
        let img = u.mul_vec(&e(0, 3));
        assert!((img[1] - c64(0.6, 0.0)).norm() < 1e-14);
        assert!((img[2] - c64(0.0, 0.8)).norm() < 1e-14);
    }
}
