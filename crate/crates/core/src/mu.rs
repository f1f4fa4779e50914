//! The structured singular value `μ_Diag` of a 2×2 matrix.
//!
//! `μ_Diag(A)` is the reciprocal of the smallest `‖X‖` over diagonal `X`
//! with `I − AX` singular. It only depends on `(a11, a22, det A)`: for
//! `c > 0`, `μ_Diag(A) < c` exactly when `(a11/c, a22/c, det A/c²)` lies in
//! the tetrablock, so the value is found by bisection on closed-set
//! membership.

use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::{operator_norm, CMatrix};
use crate::scalar::{Real, C};
use crate::tetrablock::{in_closed_tetrablock, TetraPoint};

/// Entries below this modulus count as zero for the structural `μ = 0` test.
pub const STRUCTURAL_ZERO_TOL: f64 = 1e-14;
/// Lower end of the bisection bracket.
pub const BISECTION_FLOOR: f64 = 1e-12;
/// Iteration cap for the bisection.
pub const MAX_BISECTIONS: usize = 200;
/// `|det(I − AX)|` below which the oracle counts `X` as singular.
pub const ORACLE_SINGULAR_TOL: f64 = 1e-6;

/// A 2×2 matrix whose `μ_Diag` is requested.
#[derive(Clone, Debug, PartialEq)]
pub struct MuQuery<T: Real> {
    a: CMatrix<T>,
}

impl<T: Real> MuQuery<T> {
    pub fn new(a: CMatrix<T>) -> Result<Self> {
        check_2x2(&a)?;
        Ok(Self { a })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.a
    }

    pub fn mu(&self, rel_tol: T) -> Result<T> {
        mu_diag(&self.a, rel_tol)
    }
}

fn check_2x2<T: Real>(a: &CMatrix<T>) -> Result<()> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::InvalidInput(format!(
            "μ_Diag needs a 2×2 matrix, got {}×{}",
            a.rows(),
            a.cols()
        )));
    }
    a.ensure_finite("matrix")
}

/// `(a11, a22, det A)`.
pub fn tetra_coordinates<T: Real>(a: &CMatrix<T>) -> TetraPoint<T> {
    TetraPoint::new(a[(0, 0)], a[(1, 1)], a.det2())
}

fn is_structural_zero<T: Real>(x: &TetraPoint<T>) -> bool {
    let tol = T::lit(STRUCTURAL_ZERO_TOL);
    x.x1.norm() <= tol && x.x2.norm() <= tol && x.x3.norm() <= tol
}

/// `μ_Diag(A)` to relative accuracy `rel_tol ∈ (0, 1e-2]`.
///
/// Returns exactly 0 when `a11`, `a22` and `det A` all vanish. Otherwise the
/// result is the upper end of the final bracket, so
/// `(a11, a22, det A)/μ` always passes the closed membership test.
pub fn mu_diag<T: Real>(a: &CMatrix<T>, rel_tol: T) -> Result<T> {
    check_2x2(a)?;
    if !(rel_tol > T::zero() && rel_tol <= T::lit(1e-2)) {
        return Err(Error::InvalidInput(format!(
            "rel_tol = {} outside (0, 1e-2]",
            rel_tol.as_f64()
        )));
    }
    let x = tetra_coordinates(a);
    if is_structural_zero(&x) {
        return Ok(T::zero());
    }
    let inside = |c: T| in_closed_tetrablock(&x.scaled(c));

    let mut lo = T::lit(BISECTION_FLOOR);
    let mut hi = scaled_norm_bound(a)?.max(lo);
    // hi bounds μ; rounding can still leave the scaled point a hair outside.
    while !inside(hi) {
        hi = hi * T::lit(1.0 + 1e-9) + T::lit(1e-300);
    }
    if inside(lo) {
        return Ok(lo);
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `‖D A D⁻¹‖` for the diagonal `D` balancing `|a12|` against `|a21|`; an
/// upper bound on `μ_Diag(A)` (hence on the bisection bracket) that does not
/// grow under diagonal similarity. When `a12 a21 = 0` the infimum over `D`
/// is `max(|a11|, |a22|)`.
fn scaled_norm_bound<T: Real>(a: &CMatrix<T>) -> Result<T> {
    let (p, q) = (a[(0, 1)].norm(), a[(1, 0)].norm());
    if p == T::zero() || q == T::zero() {
        return Ok(a[(0, 0)].norm().max(a[(1, 1)].norm()));
    }
    let off = (p * q).sqrt();
    let balanced = CMatrix::mat2(
        a[(0, 0)],
        a[(0, 1)] / p * off,
        a[(1, 0)] / q * off,
        a[(1, 1)],
    );
    operator_norm(&balanced)
}

/// Spectral radius of a 2×2 matrix.
fn spectral_radius<T: Real>(a: &CMatrix<T>) -> T {
    let half = T::lit(0.5);
    let tr = a.trace();
    let disc = (tr * tr * half * half - a.det2()).sqrt();
    let m = tr * half;
    (m + disc).norm().max((m - disc).norm())
}

/// `det(I − A diag(z, w)) = 1 − a11 z − a22 w + det A · z w`.
#[inline]
fn singular_poly<T: Real>(x: &TetraPoint<T>, z: C<T>, w: C<T>) -> C<T> {
    C::<T>::one() - x.x1 * z - x.x2 * w + x.x3 * z * w
}

/// Brute-force `μ_Diag` straight from the definition.
///
/// For each `z` on a `grid_n × grid_n` polar grid of `|z| ≤ R` the singular
/// `w` is solved for exactly (and symmetrically with the roles swapped), and
/// the smallest `max(|z|, |w|)` among pairs with `|det(I − AX)| < 1e-6` is
/// kept and polished by a compass search. `R = 2 / ℓ` where `ℓ` is the lower
/// bound `max(ρ(A), |a11|, |a22|) ≤ μ`.
///
/// Every accepted pair is a genuine singular perturbation, so the result
/// never exceeds the true `μ` by more than rounding. Returns 0 when no
/// singular pair is found.
pub fn mu_diag_oracle<T: Real>(a: &CMatrix<T>, grid_n: usize) -> Result<T> {
    check_2x2(a)?;
    if grid_n < 64 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} < 64")));
    }
    let x = tetra_coordinates(a);
    let lower = spectral_radius(a).max(x.x1.norm()).max(x.x2.norm());
    let radius = T::lit(2.0) / lower.max(T::min_positive_value().sqrt());
    if !radius.is_finite() {
        return Ok(T::zero());
    }
    let swapped = TetraPoint::new(x.x2, x.x1, x.x3);
    let best = [&x, &swapped]
        .iter()
        .map(|p| side_min(p, grid_n, radius))
        .fold(T::infinity(), T::min);
    if best.is_finite() && best > T::zero() {
        Ok(T::one() / best)
    } else {
        Ok(T::zero())
    }
}

/// `max(|z|, |w|)` at the singular pair through `z`, or `+∞` when the solve
/// for `w` breaks down or the pair is not singular to tolerance.
fn pair_size<T: Real>(x: &TetraPoint<T>, z: C<T>) -> T {
    let den = x.x2 - x.x3 * z;
    if den.norm() <= T::lit(1e-300) {
        return T::infinity();
    }
    let w = (C::<T>::one() - x.x1 * z) / den;
    // a NaN residual counts as non-singular
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(singular_poly(x, z, w).norm() < T::lit(ORACLE_SINGULAR_TOL)) {
        return T::infinity();
    }
    z.norm().max(w.norm())
}

fn side_min<T: Real>(x: &TetraPoint<T>, grid_n: usize, radius: T) -> T {
    let dr = radius / T::from_usize(grid_n - 1).unwrap();
    let dth = T::TAU() / T::from_usize(grid_n).unwrap();
    let eval = |r: T, th: T| pair_size(x, C::from_polar(r, th));

    const KEEP: usize = 4;
    let mut best: Vec<(T, T, T)> = Vec::with_capacity(KEEP + 1);
    for i in 0..grid_n {
        let r = T::from_usize(i).unwrap() * dr;
        for j in 0..grid_n {
            let th = T::from_usize(j).unwrap() * dth;
            let v = eval(r, th);
            if v.is_finite() && (best.len() < KEEP || v < best[best.len() - 1].0) {
                let pos = best.partition_point(|b| b.0 <= v);
                best.insert(pos, (v, r, th));
                best.truncate(KEEP);
            }
            if i == 0 {
                break;
            }
        }
    }
    best.iter()
        .map(|&(v, r, th)| compass(&eval, v, r, th, dr, dth, radius))
        .fold(T::infinity(), T::min)
}

fn compass<T: Real>(
    eval: &impl Fn(T, T) -> T,
    mut v: T,
    mut r: T,
    mut th: T,
    mut dr: T,
    mut dth: T,
    rmax: T,
) -> T {
    let floor = T::lit(1e-13);
    while dr > floor * rmax || dth > floor {
        let mut moved = false;
        for (sr, st) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let rn = (r + T::lit(sr) * dr).max(T::zero()).min(rmax);
            let tn = th + T::lit(st) * dth;
            let vn = eval(rn, tn);
            if vn < v {
                v = vn;
                r = rn;
                th = tn;
                moved = true;
                break;
            }
        }
        if !moved {
            dr *= T::lit(0.5);
            dth *= T::lit(0.5);
        }
    }
    v
}
