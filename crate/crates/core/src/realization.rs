//! Analytic maps of the disc into the closed tetrablock and their 2×2
//! Schur-class lifts.
//!
//! A 2×2 Schur function `F` gives the tetra function `(F11, F22, det F)`
//! ([`tetra_from_colligation`]). Conversely every tetra function `x` with
//! `g = x1 x2 − x3 ≢ 0` lifts to the unique `F` with `F11 = x1`, `F22 = x2`,
//! `det F = x3`, `F21` outer and `F21(0) ≥ 0` ([`canonical_lift`]).

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{circle_point, sample_log_modulus, CMatrix, OuterFunction};
use crate::pick::{eval_schur, Colligation};
use crate::random::{circle_points, spiral_points};
use crate::scalar::{Real, C};
use crate::tetrablock::{distinguished_boundary_defect, psi, TetraPoint};

/// Radius used in place of radial limits.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-8;
/// Smallest quadrature size accepted by [`canonical_lift`].
pub const MIN_QUAD: usize = 1024;
/// `|x1 x2 − x3|` below this at every probe selects the diagonal lift.
pub const DEGENERATE_PROBE_TOL: f64 = 1e-13;
/// Number of probes used for the degeneracy test.
pub const DEGENERATE_PROBES: usize = 64;
/// `|1 − F22 z|` below this makes an identity probe inadmissible.
pub const PROBE_DENOMINATOR_TOL: f64 = 1e-10;
/// Agreement between successive quadrature sizes at which refinement stops.
pub const QUAD_STABILITY_TOL: f64 = 1e-6;
/// Quadrature sizes are doubled at most this many times.
const MAX_QUAD_DOUBLINGS: u32 = 4;

/// Scalar analytic evaluator.
pub type ScalarFn<T> = Arc<dyn Fn(C<T>) -> Result<C<T>> + Send + Sync>;

/// An analytic map `λ ↦ x(λ)` from the disc into `ℂ³`.
#[derive(Clone)]
pub enum TetraFunction<T: Real> {
    /// `(F11, F22, det F)` for the transfer function `F` of a 2×2 colligation.
    Rational(Colligation<T>),
    /// Three independent scalar evaluators.
    Evaluators([ScalarFn<T>; 3]),
}

impl<T: Real> fmt::Debug for TetraFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(col) => f.debug_tuple("Rational").field(col).finish(),
            Self::Evaluators(_) => f.write_str("Evaluators(..)"),
        }
    }
}

impl<T: Real> TetraFunction<T> {
    pub fn from_evaluators(
        x1: impl Fn(C<T>) -> Result<C<T>> + Send + Sync + 'static,
        x2: impl Fn(C<T>) -> Result<C<T>> + Send + Sync + 'static,
        x3: impl Fn(C<T>) -> Result<C<T>> + Send + Sync + 'static,
    ) -> Self {
        Self::Evaluators([Arc::new(x1), Arc::new(x2), Arc::new(x3)])
    }

    /// The constant function `x`.
    pub fn constant(x: TetraPoint<T>) -> Self {
        Self::from_evaluators(move |_| Ok(x.x1), move |_| Ok(x.x2), move |_| Ok(x.x3))
    }

    pub fn colligation(&self) -> Option<&Colligation<T>> {
        match self {
            Self::Rational(col) => Some(col),
            Self::Evaluators(_) => None,
        }
    }

    /// `x(λ)` for `|λ| ≤ 1`.
    pub fn eval(&self, lam: C<T>) -> Result<TetraPoint<T>> {
        match self {
            Self::Rational(col) => Ok(point_of_schur_value(&eval_schur(col, lam)?)),
            Self::Evaluators(fs) => {
                if lam.norm() > T::one() + T::lit(1e-12) {
                    return Err(Error::OutOfDomain {
                        modulus: lam.norm().as_f64(),
                        max: 1.0,
                    });
                }
                Ok(TetraPoint::new(fs[0](lam)?, fs[1](lam)?, fs[2](lam)?))
            }
        }
    }
}

fn point_of_schur_value<T: Real>(f: &CMatrix<T>) -> TetraPoint<T> {
    TetraPoint::new(f[(0, 0)], f[(1, 1)], f.det2())
}

/// The tetra function `(F11, F22, det F)` of a 2×2 colligation.
pub fn tetra_from_colligation<T: Real>(col: &Colligation<T>) -> Result<TetraFunction<T>> {
    if col.order() != 2 {
        return Err(Error::InvalidInput(format!(
            "tetra functions need a 2×2 colligation, got order {}",
            col.order()
        )));
    }
    Ok(TetraFunction::Rational(col.clone()))
}

/// `x(λ)`, retrying slightly inside the circle when the boundary value is a
/// pole.
fn eval_on_circle<T: Real>(x: &TetraFunction<T>, zeta: C<T>) -> Result<TetraPoint<T>> {
    match x.eval(zeta) {
        Err(Error::BoundaryPole { .. }) | Err(Error::Pole { .. }) => {
            x.eval(zeta * T::lit(1.0 - 1e-10))
        }
        other => other,
    }
}

/// The 2×2 lift `F` of a tetra function.
#[derive(Clone, Debug)]
pub struct CanonicalLift<T: Real> {
    x: TetraFunction<T>,
    /// `None` on the degenerate branch `x1 x2 ≡ x3`.
    f21: Option<OuterFunction<T>>,
    quad_m: usize,
}

impl<T: Real> CanonicalLift<T> {
    pub fn tetra_function(&self) -> &TetraFunction<T> {
        &self.x
    }

    pub fn is_degenerate(&self) -> bool {
        self.f21.is_none()
    }

    /// Quadrature size actually used.
    pub fn quad_m(&self) -> usize {
        self.quad_m
    }

    /// `F21(λ)`.
    pub fn f21(&self, lam: C<T>) -> C<T> {
        self.f21.as_ref().map_or_else(C::zero, |o| o.eval(lam))
    }

    /// `F(λ)` for `|λ| ≤ 1`.
    pub fn eval(&self, lam: C<T>) -> Result<CMatrix<T>> {
        let x = self.x.eval(lam)?;
        let z = C::zero();
        Ok(match &self.f21 {
            None => CMatrix::mat2(x.x1, z, z, x.x2),
            Some(outer) => {
                let f21 = outer.eval(lam);
                CMatrix::mat2(x.x1, x.product_gap() / f21, f21, x.x2)
            }
        })
    }
}

/// Lifts `x` to the Schur-class `F` with `F11 = x1`, `F22 = x2`,
/// `det F = x3`.
///
/// `F21` is the outer function with boundary modulus `|g|^{1/2}`,
/// `g = x1 x2 − x3`, computed from `quad_m` samples of `log|g|` on the circle
/// (the size is doubled while `F21` still moves by more than `1e-6` at a set
/// of probe points), and `F12 = g / F21`. When `|g| < 1e-13` at 64 probe
/// points the lift is `diag(x1, x2)`.
pub fn canonical_lift<T: Real>(x: &TetraFunction<T>, quad_m: usize) -> Result<CanonicalLift<T>> {
    if quad_m < MIN_QUAD {
        return Err(Error::InvalidInput(format!(
            "quad_m = {quad_m} < {MIN_QUAD}"
        )));
    }
    let degenerate = spiral_points::<T>(DEGENERATE_PROBES, 0.95)
        .into_iter()
        .map(|lam| {
            x.eval(lam)
                .map(|p| p.product_gap().norm() < T::lit(DEGENERATE_PROBE_TOL))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|d| d);
    if degenerate {
        return Ok(CanonicalLift {
            x: x.clone(),
            f21: None,
            quad_m,
        });
    }

    let build = |m: usize| -> Result<OuterFunction<T>> {
        let u = sample_log_modulus(m, T::lit(0.5), |zeta| {
            eval_on_circle(x, zeta).map(|p| p.product_gap())
        })?;
        OuterFunction::from_log_modulus(&u)
    };
    let probes: Vec<C<T>> = circle_points::<T>(16, 0.99)
        .into_iter()
        .chain(std::iter::once(C::zero()))
        .collect();
    let mut m = quad_m;
    let mut outer = build(m)?;
    for _ in 0..MAX_QUAD_DOUBLINGS {
        let finer = build(2 * m)?;
        let moved = probes
            .iter()
            .map(|&p| (finer.eval(p) - outer.eval(p)).norm())
            .fold(T::zero(), T::max);
        m *= 2;
        outer = finer;
        if moved <= T::lit(QUAD_STABILITY_TOL) {
            break;
        }
    }
    Ok(CanonicalLift {
        x: x.clone(),
        f21: Some(outer),
        quad_m: m,
    })
}

/// `γ(λ, z) = (1 − F22(λ) z)^{-1} F21(λ)` and `η(λ, z) = [1; z γ(λ, z)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityWitness<T: Real> {
    pub gamma: C<T>,
    pub eta: [C<T>; 2],
}

impl<T: Real> IdentityWitness<T> {
    /// Witness for `F = F(λ)` at `z`; fails when `1 − F22 z` vanishes.
    pub fn new(f: &CMatrix<T>, z: C<T>) -> Result<Self> {
        let den = C::<T>::one() - f[(1, 1)] * z;
        if den.norm() < T::lit(PROBE_DENOMINATOR_TOL) {
            return Err(Error::Pole {
                modulus: den.norm().as_f64(),
            });
        }
        let gamma = f[(1, 0)] / den;
        Ok(Self {
            gamma,
            eta: [C::one(), z * gamma],
        })
    }
}

/// One probe `(μ, w, λ, z)` of the reproducing identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityProbe<T: Real> {
    pub mu: C<T>,
    pub w: C<T>,
    pub lam: C<T>,
    pub z: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck<T: Real> {
    pub max_residual: T,
    /// Probes dropped because `1 − F22 z` or `1 − F22 w` vanished.
    pub skipped: usize,
}

/// Residual of one probe of
/// `1 − conj(Ψ(w, x(μ))) Ψ(z, x(λ))
///   = (1 − w̄ z) conj(γ(μ, w)) γ(λ, z) + η(μ, w)^* (I − F(μ)^* F(λ)) η(λ, z)`
/// where `x = (F11, F22, det F)`. `None` when the probe is inadmissible.
fn identity_residual<T: Real>(
    f_mu: &CMatrix<T>,
    f_lam: &CMatrix<T>,
    p: &IdentityProbe<T>,
) -> Option<T> {
    let (wit_mu, wit_lam) = match (
        IdentityWitness::new(f_mu, p.w),
        IdentityWitness::new(f_lam, p.z),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return None,
    };
    let x_mu = point_of_schur_value(f_mu);
    let x_lam = point_of_schur_value(f_lam);
    let lhs = C::<T>::one() - psi(p.w, &x_mu).ok()?.conj() * psi(p.z, &x_lam).ok()?;

    let defect = CMatrix::identity(2) - f_mu.adjoint_mul(f_lam);
    let right = defect.mul_vec(&wit_lam.eta);
    let quad = wit_mu.eta[0].conj() * right[0] + wit_mu.eta[1].conj() * right[1];
    let rhs = (C::<T>::one() - p.w.conj() * p.z) * wit_mu.gamma.conj() * wit_lam.gamma + quad;
    Some((lhs - rhs).norm())
}

/// Largest residual of the reproducing identity over `probes`, for the 2×2
/// evaluator `f`.
pub fn verify_identity<T: Real>(
    f: impl Fn(C<T>) -> Result<CMatrix<T>>,
    probes: &[IdentityProbe<T>],
) -> Result<IdentityCheck<T>> {
    let mut worst = T::zero();
    let mut skipped = 0;
    for p in probes {
        let (f_mu, f_lam) = (f(p.mu)?, f(p.lam)?);
        match identity_residual(&f_mu, &f_lam, p) {
            Some(r) => worst = worst.max(r),
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} identity probe(s) skipped: 1 − F22·z vanishes");
    }
    Ok(IdentityCheck {
        max_residual: worst,
        skipped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EInnerCheck<T: Real> {
    pub max_defect: T,
    /// Samples dropped at a resolvent singularity.
    pub skipped: usize,
}

/// Largest distinguished-boundary defect `max(||x3| − 1|, |x1 − x̄2 x3|)` of
/// a rational tetra function over `n_samples` angles at radius `1 − 1e-8`.
pub fn boundary_einner_check<T: Real>(
    x: &TetraFunction<T>,
    n_samples: usize,
) -> Result<EInnerCheck<T>> {
    if x.colligation().is_none() {
        return Err(Error::InvalidInput(
            "boundary E-inner check needs a colligation-backed function".into(),
        ));
    }
    let r = T::lit(BOUNDARY_RADIUS);
    let mut worst = T::zero();
    let mut skipped = 0;
    for j in 0..n_samples {
        match x.eval(circle_point::<T>(j, n_samples) * r) {
            Ok(p) => worst = worst.max(distinguished_boundary_defect(&p)),
            Err(Error::BoundaryPole { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(EInnerCheck {
        max_defect: worst,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::operator_norm;
    use crate::random::{random_colligation, random_disc_point};
    use crate::scalar::c64;
    use crate::tetrablock::in_closed_tetrablock;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn swap() -> CMatrix<f64> {
        CMatrix::mat2(c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0))
    }

    fn random_probes(rng: &mut ChaCha8Rng, n: usize) -> Vec<IdentityProbe<f64>> {
        (0..n)
            .map(|_| IdentityProbe {
                mu: random_disc_point(rng, 0.95),
                w: random_disc_point(rng, 0.95),
                lam: random_disc_point(rng, 0.95),
                z: random_disc_point(rng, 0.95),
            })
            .collect()
    }

    #[test]
    fn zero_function_is_constant_origin() {
        let x = TetraFunction::constant(TetraPoint::<f64>::origin());
        assert_eq!(x.eval(c64(0.3, 0.1)).unwrap(), TetraPoint::origin());
    }

    #[test]
    fn constant_swap_colligation() {
        let col = Colligation::constant(swap()).unwrap();
        let x = tetra_from_colligation(&col).unwrap();
        let p = x.eval(c64(0.4, -0.2)).unwrap();
        assert_eq!(
            p,
            TetraPoint::new(c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0))
        );
        assert!(in_closed_tetrablock(&p));
        assert_eq!(boundary_einner_check(&x, 32).unwrap().max_defect, 0.0);
    }

    #[test]
    fn rejects_wrong_order() {
        let col = Colligation::constant(CMatrix::<f64>::identity(3)).unwrap();
        assert!(tetra_from_colligation(&col).is_err());
    }

    #[test]
    fn random_colligations_land_in_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let col = random_colligation::<f64, _>(&mut rng, 3, 2);
            let x = tetra_from_colligation(&col).unwrap();
            for _ in 0..50 {
                let p = x.eval(random_disc_point(&mut rng, 1.0 - 1e-10)).unwrap();
                assert!(in_closed_tetrablock(&p), "{p:?}");
            }
            assert!(boundary_einner_check(&x, 256).unwrap().max_defect <= 1e-5);
        }
    }

    #[test]
    fn diagonal_identity_function_is_einner() {
        // F(λ) = λ I from the swap on ℂ² ⊕ ℂ²
        let mut u = CMatrix::<f64>::zeros(4, 4);
        u.set_block(0, 2, &CMatrix::identity(2));
        u.set_block(2, 0, &CMatrix::identity(2));
        let col = Colligation::from_unitary(&u, 2).unwrap();
        let x = tetra_from_colligation(&col).unwrap();
        let lam = c64(0.3, 0.4);
        let p = x.eval(lam).unwrap();
        assert!(p.distance(&TetraPoint::new(lam, lam, lam * lam)) < 1e-15);
        assert!(boundary_einner_check(&x, 64).unwrap().max_defect < 1e-7);
    }

    #[test]
    fn degenerate_lift_is_diagonal() {
        let x = TetraFunction::from_evaluators(
            |l: C<f64>| Ok(l * 0.5),
            |l| Ok(l * l * 0.5),
            |l| Ok(l * l * l * 0.25),
        );
        let lift = canonical_lift(&x, 1024).unwrap();
        assert!(lift.is_degenerate());
        let lam = c64(0.2, 0.7);
        let f = lift.eval(lam).unwrap();
        assert_eq!(
            f,
            CMatrix::mat2(lam * 0.5, c64(0.0, 0.0), c64(0.0, 0.0), lam * lam * 0.5)
        );
    }

    #[test]
    fn lift_of_minus_lambda() {
        // g(λ) = λ is inner, so F21 ≡ 1 and F12 = λ.
        let x = TetraFunction::from_evaluators(
            |_| Ok(c64(0.0, 0.0)),
            |_| Ok(c64(0.0, 0.0)),
            |l: C<f64>| Ok(-l),
        );
        let lift = canonical_lift(&x, 4096).unwrap();
        for lam in [c64(0.0, 0.0), c64(0.5, -0.3), c64(0.0, 0.999)] {
            let f = lift.eval(lam).unwrap();
            let want = CMatrix::mat2(c64(0.0, 0.0), lam, c64(1.0, 0.0), c64(0.0, 0.0));
            assert!((f - want).max_abs() < 1e-10);
        }
    }

    #[test]
    fn lift_of_constant() {
        let c = c64(-0.3, 0.4);
        let x = TetraFunction::constant(TetraPoint::new(c64(0.0, 0.0), c64(0.0, 0.0), c));
        let lift = canonical_lift(&x, 1024).unwrap();
        let f = lift.eval(c64(0.1, 0.6)).unwrap();
        let s = c.norm().sqrt();
        assert!((f[(1, 0)] - c64(s, 0.0)).norm() < 1e-12);
        assert!((f[(0, 1)] + c / s).norm() < 1e-12);
        assert!((f.det2() - c).norm() < 1e-12);
        assert!((operator_norm(&f).unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn lift_of_random_colligation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..3 {
            let col = random_colligation::<f64, _>(&mut rng, 2, 2);
            let x = tetra_from_colligation(&col).unwrap();
            let lift = canonical_lift(&x, 4096).unwrap();
            assert!(!lift.is_degenerate());
            let f0 = lift.eval(c64(0.0, 0.0)).unwrap()[(1, 0)];
            assert!(f0.im.abs() < 1e-12 && f0.re >= 0.0);
            for _ in 0..32 {
                let lam = random_disc_point(&mut rng, 0.99);
                let f = lift.eval(lam).unwrap();
                let p = x.eval(lam).unwrap();
                assert!((f[(0, 0)] - p.x1).norm() < 1e-6);
                assert!((f[(1, 1)] - p.x2).norm() < 1e-6);
                assert!((f.det2() - p.x3).norm() < 1e-6);
                assert!(operator_norm(&f).unwrap() <= 1.0 + 1e-6);
            }
            for lam in circle_points::<f64>(64, BOUNDARY_RADIUS) {
                let f = lift.eval(lam).unwrap();
                assert!((f[(0, 1)].norm() - f[(1, 0)].norm()).abs() < 1e-5);
            }
            let check = verify_identity(|l| lift.eval(l), &random_probes(&mut rng, 50)).unwrap();
            assert!(check.max_residual <= 1e-5, "{}", check.max_residual);
        }
    }

    #[test]
    fn identity_for_zero_function() {
        let zero = |_: C<f64>| Ok(CMatrix::zeros(2, 2));
        let z = c64(0.3, 0.2);
        let probe = IdentityProbe {
            mu: z,
            w: z,
            lam: z,
            z,
        };
        let check = verify_identity(zero, &[probe]).unwrap();
        assert_eq!(check.max_residual, 0.0);
    }

    #[test]
    fn identity_for_closed_form_lift() {
        let f = |l: C<f64>| {
            Ok(CMatrix::mat2(
                c64(0.0, 0.0),
                l,
                c64(1.0, 0.0),
                c64(0.0, 0.0),
            ))
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let probes = random_probes(&mut rng, 100);
        // here Ψ(z, x(λ)) = λ z, γ ≡ 1 and I − F(μ)^*F(λ) = diag(0, 1 − μ̄λ)
        for p in &probes {
            let lhs = c64(1.0, 0.0) - (p.mu * p.w).conj() * p.lam * p.z;
            let rhs = (c64(1.0, 0.0) - p.w.conj() * p.z)
                + p.w.conj() * p.z * (c64(1.0, 0.0) - p.mu.conj() * p.lam);
            assert!((lhs - rhs).norm() < 1e-14);
            let x = point_of_schur_value(&f(p.lam).unwrap());
            assert!((psi(p.z, &x).unwrap() - p.lam * p.z).norm() < 1e-14);
            let wit = IdentityWitness::new(&f(p.lam).unwrap(), p.z).unwrap();
            assert_eq!(wit.gamma, c64(1.0, 0.0));
            assert_eq!(wit.eta, [c64(1.0, 0.0), p.z]);
        }
        assert!(verify_identity(f, &probes).unwrap().max_residual <= 1e-8);
    }

    #[test]
    fn inadmissible_probes_are_skipped() {
        let f = |_: C<f64>| {
            Ok(CMatrix::mat2(
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(1.0, 0.0),
            ))
        };
        let one = c64(1.0, 0.0);
        let probe = IdentityProbe {
            mu: one,
            w: one,
            lam: one,
            z: one,
        };
        assert_eq!(verify_identity(f, &[probe]).unwrap().skipped, 1);
    }

    #[test]
    fn quad_size_checked() {
        let x = TetraFunction::constant(TetraPoint::<f64>::origin());
        assert!(canonical_lift(&x, 512).is_err());
        assert!(boundary_einner_check(&x, 16).is_err());
    }
}
