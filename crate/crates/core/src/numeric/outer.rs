//! Outer functions from boundary log-modulus samples.
//!
//! For `u` sampled on the uniform grid `θ_j = 2πj/m`, the outer function is
//! `exp((1/2π) ∫ (e^{iθ}+λ)/(e^{iθ}−λ) u(θ) dθ)`. Interior values use the
//! trapezoidal rule directly ([`outer_eval`]). [`OuterFunction`] holds the
//! discrete Fourier coefficients of `u` and evaluates the same analytic
//! extension as a power series, which stays valid on the unit circle.

use num_traits::Zero;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{creal, Real, C};

/// Default quadrature grid size.
pub const DEFAULT_QUAD: usize = 4096;

/// Largest admissible `|λ|` for trapezoidal evaluation.
pub const MAX_INTERIOR_RADIUS: f64 = 1.0 - 1e-6;

fn check_samples<T: Real>(log_modulus: &[T]) -> Result<()> {
    if log_modulus.is_empty() {
        return Err(Error::InvalidInput("empty log-modulus sample set".into()));
    }
    if log_modulus.iter().any(|u| !u.is_finite()) {
        return Err(Error::InvalidInput("non-finite log-modulus sample".into()));
    }
    Ok(())
}

/// Grid point `e^{2πij/m}`.
#[inline]
pub fn circle_point<T: Real>(j: usize, m: usize) -> C<T> {
    let theta = T::TAU() * T::from_usize(j).unwrap() / T::from_usize(m).unwrap();
    C::from_polar(T::one(), theta)
}

/// Trapezoidal evaluation of the outer function at an interior point.
pub fn outer_eval<T: Real>(log_modulus: &[T], lam: C<T>) -> Result<C<T>> {
    check_samples(log_modulus)?;
    let r = lam.norm();
    if r > T::lit(MAX_INTERIOR_RADIUS) {
        return Err(Error::OutOfDomain {
            modulus: r.as_f64(),
            max: MAX_INTERIOR_RADIUS,
        });
    }
    let m = log_modulus.len();
    let mut acc = C::<T>::zero();
    for (j, &u) in log_modulus.iter().enumerate() {
        let zeta = circle_point::<T>(j, m);
        acc += (zeta + lam) / (zeta - lam) * u;
    }
    Ok((acc / T::from_usize(m).unwrap()).exp())
}

/// Samples `scale · log|g|` on the uniform grid, clipping `|g|` below at
/// `1e-300` so boundary zeros stay finite.
pub fn sample_log_modulus<T: Real>(
    m: usize,
    scale: T,
    mut g: impl FnMut(C<T>) -> Result<C<T>>,
) -> Result<Vec<T>> {
    let floor = T::lit(1e-300).max(T::min_positive_value()).ln();
    (0..m)
        .map(|j| {
            let v = g(circle_point(j, m))?;
            Ok(scale * v.norm().ln().max(floor))
        })
        .collect()
}

/// Outer function stored through the Fourier coefficients of its boundary
/// log-modulus.
#[derive(Clone, Debug)]
pub struct OuterFunction<T: Real> {
    /// `log O(λ) = Σ_k coeffs[k] λ^k`.
    coeffs: Vec<C<T>>,
}

impl<T: Real> OuterFunction<T> {
    pub fn from_log_modulus(log_modulus: &[T]) -> Result<Self> {
        check_samples(log_modulus)?;
        let m = log_modulus.len();
        let mut buf: Vec<C<T>> = log_modulus.iter().map(|&u| creal(u)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv_m = T::one() / T::from_usize(m).unwrap();
        let two = T::lit(2.0);
        let half = m / 2;
        let mut coeffs = Vec::with_capacity(half + 1);
        coeffs.push(creal(buf[0].re * inv_m));
        for c in buf.iter().take(m.div_ceil(2)).skip(1) {
            coeffs.push(*c * (two * inv_m));
        }
        if m.is_multiple_of(2) && m > 1 {
            coeffs.push(buf[half] * inv_m);
        }
        Ok(Self { coeffs })
    }

    /// `log O(λ)`, valid for `|λ| ≤ 1`.
    pub fn log_eval(&self, lam: C<T>) -> C<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, &c| acc * lam + c)
    }

    pub fn eval(&self, lam: C<T>) -> C<T> {
        self.log_eval(lam).exp()
    }

    /// `O(0) = exp(mean of u)`, real and positive.
    pub fn value_at_zero(&self) -> T {
        self.coeffs.first().map_or_else(T::one, |c| c.re.exp())
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C::zero()) || self.coeffs.is_empty()
    }
}

impl<T: Real> Default for OuterFunction<T> {
    fn default() -> Self {
        Self {
            coeffs: vec![C::zero()],
        }
    }
}
