//! Geometry of the tetrablock
//! `E = {x ∈ ℂ³ : 1 − x1 z − x2 w + x3 z w ≠ 0 for all |z|, |w| ≤ 1}`,
//! its closure and its distinguished boundary.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{operator_norm, CMatrix};
use crate::scalar::{is_finite_c, Real, C};

/// Products `x1 x2 − x3` below this modulus count as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-14;
/// Slack toward inclusion for the closed-set inequalities.
pub const INCLUSION_SLACK: f64 = 1e-12;
/// Margin required by the strict (open-set) inequalities.
pub const OPEN_MARGIN: f64 = 1e-12;
/// Threshold separating verdicts in the grid oracle.
pub const GRID_THRESHOLD: f64 = 1e-9;
/// Modulus below which the denominator of Ψ is treated as a pole.
pub const PSI_POLE_TOL: f64 = 1e-14;

/// A point `(x1, x2, x3)` of `ℂ³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetraPoint<T: Real> {
    pub x1: C<T>,
    pub x2: C<T>,
    pub x3: C<T>,
}

impl<T: Real> TetraPoint<T> {
    pub fn new(x1: C<T>, x2: C<T>, x3: C<T>) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn origin() -> Self {
        Self::new(C::zero(), C::zero(), C::zero())
    }

    /// `x1 x2 − x3`.
    #[inline]
    pub fn product_gap(&self) -> C<T> {
        self.x1 * self.x2 - self.x3
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.product_gap().norm() < T::lit(DEGENERATE_TOL)
    }

    pub fn is_finite(&self) -> bool {
        is_finite_c(self.x1) && is_finite_c(self.x2) && is_finite_c(self.x3)
    }

    pub fn as_array(&self) -> [C<T>; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Largest coordinate difference.
    pub fn distance(&self, other: &Self) -> T {
        (self.x1 - other.x1)
            .norm()
            .max((self.x2 - other.x2).norm())
            .max((self.x3 - other.x3).norm())
    }

    /// `(x1/c, x2/c, x3/c²)`.
    pub fn scaled(&self, c: T) -> Self {
        Self::new(self.x1 / c, self.x2 / c, self.x3 / (c * c))
    }
}

/// `Ψ(z, x) = (x3 z − x1)/(x2 z − 1)`.
pub fn psi<T: Real>(z: C<T>, x: &TetraPoint<T>) -> Result<C<T>> {
    let den = x.x2 * z - C::one();
    if den.norm() < T::lit(PSI_POLE_TOL) {
        return Err(Error::Pole {
            modulus: den.norm().as_f64(),
        });
    }
    Ok((x.x3 * z - x.x1) / den)
}

/// `(1 − |x1|²) − |x2 − x̄1 x3| − |x1 x2 − x3|`; non-negative on the closure.
pub fn closed_form_gap<T: Real>(x: &TetraPoint<T>) -> T {
    T::one() - x.x1.norm_sqr() - (x.x2 - x.x1.conj() * x.x3).norm() - x.product_gap().norm()
}

/// The same gap with the roles of `x1` and `x2` exchanged.
pub fn closed_form_gap_alt<T: Real>(x: &TetraPoint<T>) -> T {
    T::one() - x.x2.norm_sqr() - (x.x1 - x.x2.conj() * x.x3).norm() - x.product_gap().norm()
}

/// Membership in the closed tetrablock through
/// `|x2 − x̄1 x3| + |x1 x2 − x3| ≤ 1 − |x1|²`, with `|x2| ≤ 1` added when
/// `x1 x2 = x3`.
pub fn in_closed_tetrablock<T: Real>(x: &TetraPoint<T>) -> bool {
    let slack = T::lit(INCLUSION_SLACK);
    if !x.is_finite() || closed_form_gap(x) < -slack {
        return false;
    }
    !x.is_degenerate() || x.x2.norm() <= T::one() + slack
}

/// Membership in the closed tetrablock through the criterion with `x1` and
/// `x2` exchanged.
pub fn in_closed_tetrablock_alt<T: Real>(x: &TetraPoint<T>) -> bool {
    let slack = T::lit(INCLUSION_SLACK);
    if !x.is_finite() || closed_form_gap_alt(x) < -slack {
        return false;
    }
    !x.is_degenerate() || x.x1.norm() <= T::one() + slack
}

/// Membership in the open tetrablock: the strict form of the closed-set
/// inequality, or on the degenerate set `|x1| < 1` and `|x2| < 1`.
pub fn in_open_tetrablock<T: Real>(x: &TetraPoint<T>) -> bool {
    if !x.is_finite() {
        return false;
    }
    if closed_form_gap(x) > T::lit(OPEN_MARGIN) {
        return true;
    }
    x.is_degenerate() && x.x1.norm() < T::one() && x.x2.norm() < T::one()
}

/// How far `x` lies outside the closed tetrablock (0 inside).
pub fn membership_defect<T: Real>(x: &TetraPoint<T>) -> T {
    let mut d = (-closed_form_gap(x)).max(T::zero());
    if x.is_degenerate() {
        d = d.max(x.x2.norm() - T::one());
    }
    d
}

/// Which set the grid oracle decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `1 − x1 z − x2 w + x3 z w ≠ 0` on the closed bidisc.
    Open,
    /// The same on the open bidisc.
    Closed,
}

/// Exact minimum over `|w| ≤ 1` of `|(1 − x1 z) − (x2 − x3 z) w|`, signed:
/// `|1 − x1 z| − |x2 − x3 z|` is negative exactly when a zero exists with
/// `|w| < 1`.
#[inline]
fn inner_margin<T: Real>(x: &TetraPoint<T>, z: C<T>) -> T {
    (C::<T>::one() - x.x1 * z).norm() - (x.x2 - x.x3 * z).norm()
}

/// Definition-level membership test.
///
/// Scans `z` over a `grid_n × grid_n` polar grid of the closed disc, taking
/// the exact inner minimum over `w`, then refines the best grid cells by a
/// compass search in polar coordinates. The point is in the open set when the
/// minimum exceeds [`GRID_THRESHOLD`], and in the closed set when it is at
/// least `−GRID_THRESHOLD`.
pub fn membership_oracle_grid<T: Real>(
    x: &TetraPoint<T>,
    grid_n: usize,
    region: Region,
) -> Result<bool> {
    if grid_n < 64 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} < 64")));
    }
    if !x.is_finite() {
        return Ok(false);
    }
    let thr = T::lit(GRID_THRESHOLD);
    let fails = |v: T| match region {
        Region::Open => v <= thr,
        Region::Closed => v < -thr,
    };
    Ok(!fails(grid_min_margin(
        x,
        grid_n,
        Some(&fails as &dyn Fn(T) -> bool),
    )))
}

/// Minimum of the inner margin over the closed disc (grid plus refinement).
/// With `stop`, returns early with the first value for which `stop` holds.
pub fn grid_min_margin<T: Real>(
    x: &TetraPoint<T>,
    grid_n: usize,
    stop: Option<&dyn Fn(T) -> bool>,
) -> T {
    let n = grid_n.max(2);
    let dr = T::one() / T::from_usize(n - 1).unwrap();
    let dth = T::TAU() / T::from_usize(n).unwrap();
    let eval = |r: T, th: T| inner_margin(x, C::from_polar(r, th));

    let center = eval(T::zero(), T::zero());
    if stop.is_some_and(|s| s(center)) {
        return center;
    }
    // Candidates kept sorted by value, best first.
    const KEEP: usize = 6;
    let mut best: Vec<(T, T, T)> = vec![(center, T::zero(), T::zero())];
    // outer ring first: most violations show up on the circle
    for i in (1..n).rev() {
        let r = T::from_usize(i).unwrap() * dr;
        for j in 0..n {
            let th = T::from_usize(j).unwrap() * dth;
            let v = eval(r, th);
            if stop.is_some_and(|s| s(v)) {
                return v;
            }
            if best.len() < KEEP || v < best[best.len() - 1].0 {
                let pos = best.partition_point(|b| b.0 <= v);
                best.insert(pos, (v, r, th));
                best.truncate(KEEP);
            }
        }
    }
    let mut overall = best[0].0;
    for &(v0, r0, th0) in &best {
        let v = compass_refine(&eval, v0, r0, th0, dr, dth);
        overall = overall.min(v);
        if stop.is_some_and(|s| s(overall)) {
            break;
        }
    }
    overall
}

fn compass_refine<T: Real>(
    eval: &impl Fn(T, T) -> T,
    mut v: T,
    mut r: T,
    mut th: T,
    mut dr: T,
    mut dth: T,
) -> T {
    let min_step = T::lit(1e-13);
    let clamp = |r: T| r.max(T::zero()).min(T::one());
    while dr > min_step || dth > min_step {
        let mut moved = false;
        for (cr, cth) in [
            (clamp(r + dr), th),
            (clamp(r - dr), th),
            (r, th + dth),
            (r, th - dth),
        ] {
            let cv = eval(cr, cth);
            if cv < v {
                v = cv;
                r = cr;
                th = cth;
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

/// Membership in the distinguished boundary: `x1 = x̄2 x3`, `|x3| = 1`,
/// `|x2| ≤ 1`, each within `tol`.
pub fn in_distinguished_boundary<T: Real>(x: &TetraPoint<T>, tol: T) -> bool {
    x.is_finite()
        && (x.x1 - x.x2.conj() * x.x3).norm() <= tol
        && (x.x3.norm() - T::one()).abs() <= tol
        && x.x2.norm() <= T::one() + tol
}

/// Defect from the distinguished boundary:
/// `max(| |x3| − 1 |, |x1 − x̄2 x3|)`.
pub fn distinguished_boundary_defect<T: Real>(x: &TetraPoint<T>) -> T {
    (x.x3.norm() - T::one())
        .abs()
        .max((x.x1 - x.x2.conj() * x.x3).norm())
}

/// `(a11, a22, det A)` for a 2x2 contraction `A`.
pub fn from_contraction<T: Real>(a: &CMatrix<T>) -> Result<TetraPoint<T>> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::InvalidInput("expected a 2x2 matrix".into()));
    }
    let nrm = operator_norm(a)?;
    if nrm > T::one() + T::lit(1e-12) {
        return Err(Error::ContractViolation(format!(
            "operator norm {} exceeds 1",
            nrm.as_f64()
        )));
    }
    Ok(point_of_matrix(a))
}

/// `(a11, a22, det A)` without the norm check.
pub fn point_of_matrix<T: Real>(a: &CMatrix<T>) -> TetraPoint<T> {
    TetraPoint::new(a[(0, 0)], a[(1, 1)], a.det2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_contraction, random_disc_point};
    use crate::scalar::{c64, cx};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> TetraPoint<f64> {
        TetraPoint::new(c64(a.0, a.1), c64(b.0, b.1), c64(c.0, c.1))
    }

    fn real(a: f64, b: f64, c: f64) -> TetraPoint<f64> {
        pt((a, 0.0), (b, 0.0), (c, 0.0))
    }

    #[test]
    fn psi_examples() {
        let x = pt((0.3, -0.2), (0.5, 0.1), (0.7, 0.0));
        assert_eq!(psi(c64(0.0, 0.0), &x).unwrap(), x.x1);
        // x1 x2 = x3 makes Ψ constant
        let a = c64(0.4, 0.3);
        let b = c64(-0.2, 0.6);
        let deg = TetraPoint::new(a, b, a * b);
        for z in [c64(0.5, 0.0), c64(-0.3, 0.8), c64(0.0, -0.99)] {
            assert!((psi(z, &deg).unwrap() - a).norm() < 1e-15);
        }
        let v = psi(c64(0.5, 0.0), &real(0.2, 0.3, 0.1)).unwrap();
        assert!((v.re - 0.15 / 0.85).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn psi_pole() {
        assert!(matches!(
            psi(c64(1.0, 0.0), &real(0.0, 1.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn closed_membership_examples() {
        assert!(in_closed_tetrablock(&real(0.0, 0.0, 0.0)));
        assert!(in_closed_tetrablock(&real(1.0, 1.0, 1.0)));
        assert!(!in_closed_tetrablock(&real(2.0, 0.0, 0.0)));
        assert!(!in_closed_tetrablock(&real(0.9, 0.9, 0.0)));
        // degenerate branch: x1 x2 = x3 with |x2| > 1 and |x1| = 1
        assert!(!in_closed_tetrablock(&real(1.0, 1.5, 1.5)));
    }

    #[test]
    fn open_membership_examples() {
        assert!(in_open_tetrablock(&real(0.0, 0.0, 0.0)));
        assert!(!in_open_tetrablock(&real(1.0, 1.0, 1.0)));
        let x = real(0.3, 0.4, 0.1);
        assert_eq!(
            in_open_tetrablock(&x),
            membership_oracle_grid(&x, 128, Region::Open).unwrap()
        );
    }

    #[test]
    fn grid_oracle_examples() {
        assert!(membership_oracle_grid(&real(0.0, 0.0, 0.0), 64, Region::Open).unwrap());
        assert!(membership_oracle_grid(&real(0.0, 0.0, 1.0), 64, Region::Closed).unwrap());
        assert!(!membership_oracle_grid(&real(0.0, 0.0, 1.0), 64, Region::Open).unwrap());
        let x = real(0.9, 0.9, 0.0);
        assert_eq!(
            membership_oracle_grid(&x, 128, Region::Closed).unwrap(),
            in_closed_tetrablock(&x)
        );
        assert!(membership_oracle_grid(&real(0.0, 0.0, 0.0), 10, Region::Open).is_err());
    }

    #[test]
    fn distinguished_boundary_examples() {
        assert!(in_distinguished_boundary(&real(1.0, 1.0, 1.0), 1e-12));
        assert!(in_distinguished_boundary(&real(0.0, 0.0, 1.0), 1e-12));
        let x = real(0.5, 0.5, 1.0);
        assert!(in_distinguished_boundary(&x, 1e-12));
        assert!(in_closed_tetrablock(&x));
        assert!(!in_distinguished_boundary(&real(0.0, 0.0, 0.5), 1e-12));
    }

    #[test]
    fn from_contraction_examples() {
        let z = from_contraction(&CMatrix::<f64>::zeros(2, 2)).unwrap();
        assert_eq!(z, TetraPoint::origin());
        let i = from_contraction(&CMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(i, real(1.0, 1.0, 1.0));
        let big = CMatrix::<f64>::identity(2).scale_real(1.1);
        assert!(matches!(
            from_contraction(&big),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn contractions_land_in_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let s = rng.gen_range(0.0..=1.0);
            let a = random_contraction::<f64, _>(&mut rng, 2, s);
            assert!(in_closed_tetrablock(&from_contraction(&a).unwrap()));
        }
    }

    #[test]
    fn distinguished_boundary_inside_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let x2: C<f64> = random_disc_point(&mut rng, 1.0);
            let x3 = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let x = TetraPoint::new(x2.conj() * x3, x2, x3);
            assert!(in_distinguished_boundary(&x, 1e-12));
            assert!(in_closed_tetrablock(&x));
        }
    }

    #[test]
    fn psi_bounded_on_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let zs: Vec<C<f64>> = (0..512)
            .map(|_| random_disc_point(&mut rng, 0.999))
            .collect();
        let mut tested = 0;
        while tested < 200 {
            let s = rng.gen_range(0.0..=1.0);
            let a = random_contraction::<f64, _>(&mut rng, 2, s);
            let x = point_of_matrix(&a);
            if x.is_degenerate() || !in_closed_tetrablock(&x) {
                continue;
            }
            tested += 1;
            for &z in &zs {
                if let Ok(v) = psi(z, &x) {
                    assert!(v.norm() <= 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn single_precision_membership() {
        let x = TetraPoint::<f32>::new(cx(0.2, 0.0), cx(0.1, 0.0), cx(0.0, 0.0));
        assert!(in_closed_tetrablock(&x));
        assert!(in_open_tetrablock(&x));
    }
}
