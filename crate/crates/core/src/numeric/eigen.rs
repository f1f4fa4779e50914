//! Hermitian eigenvalue problems by cyclic complex Jacobi rotations.
//!
//! Each rotation is a unitary congruence, so the iterates stay Hermitian and
//! the returned eigenvalues are real. Orders handled here are small (Pick
//! matrices of at most a few dozen rows), where Jacobi is both accurate and
//! fast enough.

use num_traits::Zero;

use super::matrix::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 80;

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

pub fn hermitian_eigen<T: Real>(h: &HermitianMatrix<T>) -> HermitianEigen<T> {
    jacobi(h, true)
}

pub fn hermitian_eigenvalues<T: Real>(h: &HermitianMatrix<T>) -> Vec<T> {
    jacobi(h, false).values
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue<T: Real>(h: &HermitianMatrix<T>) -> Result<T> {
    if h.order() == 0 {
        return Err(Error::InvalidInput("empty Hermitian matrix".into()));
    }
    h.as_matrix().ensure_finite("Hermitian matrix")?;
    Ok(hermitian_eigenvalues(h)[0])
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    m.ensure_finite("matrix")?;
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(T::zero());
    }
    let gram = if m.rows() >= m.cols() {
        m.adjoint_mul(m)
    } else {
        m.matmul(&m.adjoint())
    };
    let vals = hermitian_eigenvalues(&HermitianMatrix::from_upper(&gram));
    Ok(vals
        .last()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::zero())
        .sqrt())
}

fn jacobi<T: Real>(h: &HermitianMatrix<T>, want_vectors: bool) -> HermitianEigen<T> {
    let n = h.order();
    let mut a = h.as_matrix().clone();
    let mut v = if want_vectors {
        CMatrix::identity(n)
    } else {
        CMatrix::zeros(0, 0)
    };
    let eps = T::epsilon();
    let tiny = T::min_positive_value();

    for _ in 0..MAX_SWEEPS {
        let diag: T = (0..n).map(|i| a[(i, i)].re * a[(i, i)].re).sum();
        let off: T = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= eps * eps * (diag + off) || off <= tiny {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, want_vectors);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = if want_vectors {
        CMatrix::from_fn(n, n, |r, c| v[(r, order[c])])
    } else {
        v
    };
    HermitianEigen { values, vectors }
}

fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize, want_vectors: bool) {
    let b = a[(p, q)];
    let r = b.norm();
    if r.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal at working precision.
    let scale = app.abs() + aqq.abs();
    if scale > T::zero() && r <= T::epsilon() * T::epsilon() * scale {
        a[(p, q)] = C::zero();
        a[(q, p)] = C::zero();
        return;
    }
    let phase_conj = (b / r).conj();
    let two = T::one() + T::one();
    let theta = (aqq - app) / (two * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let g00 = C::new(c, T::zero());
    let g01 = C::new(s, T::zero());
    let g10 = phase_conj * (-s);
    let g11 = phase_conj * c;
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    a[(p, p)] = C::new(a[(p, p)].re, T::zero());
    a[(q, q)] = C::new(a[(q, q)].re, T::zero());
    if want_vectors {
        for k in 0..n {
            let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
            v[(k, p)] = vkp * g00 + vkq * g10;
            v[(k, q)] = vkp * g01 + vkq * g11;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c64, cx};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix<f64> {
        CMatrix::from_fn(r, c, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix<f64> {
        HermitianMatrix::from_upper(&random_matrix(rng, n, n))
    }

    #[test]
    fn identity_has_unit_min_eigenvalue() {
        let h = HermitianMatrix::from_upper(&CMatrix::<f64>::identity(4));
        assert_eq!(hermitian_min_eigenvalue(&h).unwrap(), 1.0);
    }

    #[test]
    fn diagonal_min_eigenvalue() {
        let h =
            HermitianMatrix::from_upper(&CMatrix::<f64>::diag(&[c64(1.0, 0.0), c64(-2.0, 0.0)]));
        assert_eq!(hermitian_min_eigenvalue(&h).unwrap(), -2.0);
    }

    #[test]
    fn gram_matrix_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_matrix(&mut rng, 3, 4);
            let m = HermitianMatrix::from_upper(&g.adjoint_mul(&g));
            let lmin = hermitian_min_eigenvalue(&m).unwrap();
            assert!(lmin >= -1e-12, "{lmin}");
            // independent oracle: Rayleigh quotients are never negative
            for _ in 0..10 {
                let v = random_matrix(&mut rng, 4, 1).col_vec(0);
                assert!(m.quadratic_form(&v) >= -1e-12);
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        let h = HermitianMatrix::from_upper(&CMatrix::<f64>::diag(&[c64(f64::NAN, 0.0)]));
        assert!(hermitian_min_eigenvalue(&h).is_err());
    }

    #[test]
    fn eigenpairs_reconstruct_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 12] {
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eigen(&h);
            let lam = CMatrix::diag(&e.values.iter().map(|&l| c64(l, 0.0)).collect::<Vec<_>>());
            let rebuilt = e.vectors.matmul(&lam).matmul(&e.vectors.adjoint());
            assert!((rebuilt - h.as_matrix().clone()).max_abs() < 1e-12);
            assert!(e.vectors.unitarity_residual() < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn min_eigenvalue_bounded_by_rayleigh_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..8);
            let h = random_hermitian(&mut rng, n);
            let lmin = hermitian_min_eigenvalue(&h).unwrap();
            for _ in 0..10 {
                let v = random_matrix(&mut rng, n, 1).col_vec(0);
                let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                assert!(lmin <= h.quadratic_form(&v) / nrm + 1e-9);
            }
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&CMatrix::<f64>::identity(2)).unwrap(), 1.0);
        let m = CMatrix::<f64>::mat2(c64(0.0, 0.0), c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0));
        assert!((operator_norm(&m).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_matches_closed_form_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = random_matrix(&mut rng, 2, 2);
            // eigenvalues of M^*M from the quadratic formula
            let g = m.adjoint_mul(&m);
            let tr = (g[(0, 0)] + g[(1, 1)]).re;
            let det = g.det2().re;
            let lmax = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
            let want = lmax.sqrt();
            let got = operator_norm(&m).unwrap();
            assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let h = HermitianMatrix::from_upper(&CMatrix::<f32>::diag(&[cx(3.0, 0.0), cx(-0.5, 0.0)]));
        assert_eq!(hermitian_min_eigenvalue(&h).unwrap(), -0.5f32);
    }
}
