//! Derivative-free minimization by the Nelder–Mead simplex method with
//! dimension-adapted coefficients.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions<T: Real> {
    pub max_iters: usize,
    /// Initial simplex edge along each coordinate.
    pub step: T,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: T,
    /// Stop once every vertex is this close to the best one.
    pub x_tol: T,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            max_iters: 400,
            step: T::lit(0.5),
            f_tol: T::lit(1e-14),
            x_tol: T::lit(1e-10),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum<T: Real> {
    pub x: Vec<T>,
    pub value: T,
    pub iters: usize,
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`.
pub fn nelder_mead<T: Real>(
    f: impl Fn(&[T]) -> T,
    x0: &[T],
    opts: &NelderMeadOptions<T>,
) -> Minimum<T> {
    let n = x0.len();
    let eval = |x: &[T]| {
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: eval(x0),
            iters: 0,
        };
    }
    let nf = T::from_usize(n).unwrap();
    let one = T::one();
    let two = T::lit(2.0);
    let alpha = one;
    let gamma = one + two / nf;
    let rho = T::lit(0.75) - one / (two * nf);
    let sigma = (one - one / nf).max(T::lit(0.5));

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<T>, T)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    let affine = |a: &[T], b: &[T], t: T| -> Vec<T> {
        a.iter().zip(b).map(|(&p, &q)| p + t * (q - p)).collect()
    };

    let mut iters = 0;
    while iters < opts.max_iters {
        order(&mut simplex);
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = if worst.is_finite() {
            worst - best
        } else {
            T::infinity()
        };
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(&a, &b)| (a - b).abs()))
            .fold(T::zero(), T::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            break;
        }
        iters += 1;

        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, &xi) in centroid.iter_mut().zip(x) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= nf;
        }
        let xr = affine(&centroid, &simplex[n].0, -alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = affine(&centroid, &simplex[n].0, -alpha * gamma);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        // outside contraction toward the reflected point, else inside
        let xc = if fr < simplex[n].1 {
            affine(&centroid, &xr, rho)
        } else {
            affine(&centroid, &simplex[n].0, rho)
        };
        let fc = eval(&xc);
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            *x = affine(&x_best, x, sigma);
            *v = eval(x);
        }
    }
    order(&mut simplex);
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iters }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
        let m = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(
            (m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] + 2.0).abs() < 1e-5,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_iters: 5000,
            ..Default::default()
        };
        let m = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!(m.value < 1e-10, "{}", m.value);
    }

    #[test]
    fn tolerates_nan_regions() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 0.3).powi(2)
            }
        };
        let m = nelder_mead(f, &[1.0], &NelderMeadOptions::default());
        assert!((m.x[0] - 0.3).abs() < 1e-5);
    }

    #[test]
    fn zero_dimensional() {
        let m = nelder_mead(|_: &[f64]| 4.0, &[], &NelderMeadOptions::default());
        assert_eq!(m.value, 4.0);
    }
}
