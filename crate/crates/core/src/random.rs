//! Seeded random generators for planted instances: unitary matrices,
//! contractions, unitary colligations and disc points.

use rand::Rng;

use crate::interp::TetraProblem;
use crate::numeric::{operator_norm, CMatrix};
use crate::pick::{eval_schur, Colligation};
use crate::scalar::{Real, C};
use crate::synthesis::MuProblem;
use crate::tetrablock::TetraPoint;

fn uniform_c<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    C::new(
        T::lit(rng.gen_range(-1.0..1.0)),
        T::lit(rng.gen_range(-1.0..1.0)),
    )
}

/// Matrix with entries uniform in the square `[-1, 1]²`.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| uniform_c(rng))
}

/// Unitary obtained by Gram–Schmidt on a random matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    loop {
        let x = random_matrix::<T, R>(rng, n, n);
        let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = x.col_vec(j);
            for _ in 0..2 {
                for c in &cols {
                    let proj: C<T> = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let nrm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if nrm < T::lit(1e-6) {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
        if ok {
            return CMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Random matrix rescaled to operator norm `norm`.
pub fn random_contraction<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, norm: T) -> CMatrix<T> {
    loop {
        let x = random_matrix::<T, R>(rng, n, n);
        let s = operator_norm(&x).unwrap_or_else(|_| T::zero());
        if s > T::lit(1e-8) {
            return x.scale_real(norm / s);
        }
    }
}

/// Colligation whose block operator is a random unitary of order `dim_h + m`.
pub fn random_colligation<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim_h: usize,
    m: usize,
) -> Colligation<T> {
    let u = random_unitary::<T, R>(rng, dim_h + m);
    Colligation::from_unitary(&u, dim_h).expect("random unitary is a valid colligation")
}

/// Point uniformly distributed in the disc of the given radius.
pub fn random_disc_point<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C<T> {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = std::f64::consts::TAU * rng.gen::<f64>();
    C::new(T::lit(r * th.cos()), T::lit(r * th.sin()))
}

/// `n` disc points of modulus at most `radius`, pairwise at least `sep` apart.
pub fn random_nodes<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    radius: f64,
    sep: f64,
) -> Vec<C<T>> {
    let mut out: Vec<C<T>> = Vec::with_capacity(n);
    while out.len() < n {
        let z = random_disc_point::<T, R>(rng, radius);
        if out.iter().all(|w| (*w - z).norm() >= T::lit(sep)) {
            out.push(z);
        }
    }
    out
}

/// Deterministic sample of `n` points in the disc of radius `radius`
/// (sunflower spiral), used for verification sweeps.
pub fn spiral_points<T: Real>(n: usize, radius: f64) -> Vec<C<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / n as f64).sqrt();
            let th = golden * k as f64;
            C::new(T::lit(r * th.cos()), T::lit(r * th.sin()))
        })
        .collect()
}

/// `n` equally spaced points on the circle of radius `radius`, offset by a
/// half step so they avoid the real axis.
pub fn circle_points<T: Real>(n: usize, radius: f64) -> Vec<C<T>> {
    (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            C::new(T::lit(radius * th.cos()), T::lit(radius * th.sin()))
        })
        .collect()
}

/// Interpolation data sampled from a known solution: the tetra function of
/// a random unitary 2×2 colligation with state dimension `2n`, observed at
/// `n` random nodes of modulus at most 0.8.
///
/// The state dimension makes the planted `(b, c)` (the off-diagonal values
/// of the colligation's own transfer function) give a positive definite
/// Pick matrix for generic draws.
pub fn planted_tetra_problem<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> (TetraProblem<T>, Colligation<T>) {
    let col = random_colligation::<T, R>(rng, 2 * n, 2);
    let nodes = random_nodes::<T, R>(rng, n, 0.8, 0.05);
    let targets = nodes
        .iter()
        .map(|&lam| {
            let f = eval_schur(&col, lam).expect("interior evaluation");
            TetraPoint::new(f[(0, 0)], f[(1, 1)], f.det2())
        })
        .collect();
    let p = TetraProblem::new(nodes, targets).expect("planted nodes are valid");
    (p, col)
}

/// μ-synthesis data sampled from a known solution: values of a random
/// unitary 2×2 colligation (state dimension `2n`) at `n` random nodes, each
/// conjugated by a random diagonal `diag(d_k, 1)` with `|d_k| ∈ [0.5, 2]`.
/// Draws with a vanishing off-diagonal product are rejected.
pub fn planted_mu_problem<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> MuProblem<T> {
    loop {
        let col = random_colligation::<T, R>(rng, 2 * n, 2);
        let nodes = random_nodes::<T, R>(rng, n, 0.8, 0.05);
        let targets: Vec<CMatrix<T>> = nodes
            .iter()
            .map(|&lam| {
                let f = eval_schur(&col, lam).expect("interior evaluation");
                let d = C::from_polar(
                    T::lit(rng.gen_range(0.5..2.0)),
                    T::lit(rng.gen_range(-3.0..3.0)),
                );
                CMatrix::mat2(f[(0, 0)], d * f[(0, 1)], f[(1, 0)] / d, f[(1, 1)])
            })
            .collect();
        if let Ok(p) = MuProblem::new(nodes, targets) {
            return p;
        }
    }
}
