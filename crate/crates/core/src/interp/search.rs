//! Multi-start maximization of the Pick eigenvalue over `(b, c)`.

use std::f64::consts::PI;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::verify::{verify_certificate, BOUNDARY_SAMPLES, MEMBERSHIP_SAMPLES};
use super::{
    necessary_checks, objective, BCParams, Branch, Certificate, SearchConfig, SolvableCertificate,
    TetraProblem, ZERO_PRODUCT_TOL,
};
use crate::error::{Error, Result};
use crate::numeric::{nelder_mead, NelderMeadOptions};
use crate::pick::{solve_np, MatNPData};
use crate::scalar::{Real, C};

/// Successive Nelder–Mead restarts shrink the initial simplex by this factor.
const RESTART_SHRINK: f64 = 0.1;

/// Maps a real parameter vector to `(b, c)` for a fixed branch assignment.
struct Layout<T: Real> {
    products: Vec<C<T>>,
    branches: Vec<Branch>,
}

impl<T: Real> Layout<T> {
    fn dim(&self) -> usize {
        self.branches.iter().filter(|b| **b != Branch::Zero).count() * 2
    }

    fn decode(&self, x: &[T]) -> BCParams<T> {
        let n = self.branches.len();
        let mut b = vec![C::zero(); n];
        let mut c = vec![C::zero(); n];
        let mut it = x.chunks_exact(2);
        for k in 0..n {
            match self.branches[k] {
                Branch::Zero => {}
                Branch::Product => {
                    let v = it.next().expect("layout dimension");
                    let s = C::new(v[0], v[1]).exp();
                    b[k] = s;
                    c[k] = self.products[k] / s;
                }
                Branch::FreeC => {
                    let v = it.next().expect("layout dimension");
                    c[k] = C::new(v[0], v[1]);
                }
                Branch::FreeB => {
                    let v = it.next().expect("layout dimension");
                    b[k] = C::new(v[0], v[1]);
                }
            }
        }
        BCParams {
            b,
            c,
            branches: self.branches.clone(),
        }
    }

    /// Start 0 is balanced (`s = √p`, free entries 0); the others are random
    /// perturbations of it.
    fn start(&self, rng: Option<&mut ChaCha8Rng>) -> Vec<T> {
        let mut x = Vec::with_capacity(self.dim());
        let mut rng = rng;
        for (k, br) in self.branches.iter().enumerate() {
            match br {
                Branch::Zero => {}
                Branch::Product => {
                    let p = self.products[k];
                    let (mut rho, mut theta) = (p.norm().ln() * T::lit(0.5), p.arg() * T::lit(0.5));
                    if let Some(r) = rng.as_deref_mut() {
                        rho += T::lit(r.gen_range(-2.0..2.0));
                        theta = T::lit(r.gen_range(-PI..PI));
                    }
                    x.extend([rho, theta]);
                }
                Branch::FreeB | Branch::FreeC => match rng.as_deref_mut() {
                    Some(r) => x.extend([
                        T::lit(r.gen_range(-0.5..0.5)),
                        T::lit(r.gen_range(-0.5..0.5)),
                    ]),
                    None => x.extend([T::zero(), T::zero()]),
                },
            }
        }
        x
    }
}

/// Every branch assignment, degenerate nodes cycling through
/// `Zero`, `FreeC`, `FreeB` in lexicographic order.
fn branch_assignments<T: Real>(products: &[C<T>]) -> Vec<Vec<Branch>> {
    let degenerate: Vec<usize> = (0..products.len())
        .filter(|&k| products[k].norm() <= T::lit(ZERO_PRODUCT_TOL))
        .collect();
    let choices = [Branch::Zero, Branch::FreeC, Branch::FreeB];
    let total = 3usize.pow(degenerate.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut br = vec![Branch::Product; products.len()];
            for &k in degenerate.iter().rev() {
                br[k] = choices[code % 3];
                code /= 3;
            }
            br
        })
        .collect()
}

struct StartResult<T: Real> {
    value: T,
    x: Vec<T>,
}

fn run_start<T: Real>(
    p: &TetraProblem<T>,
    layout: &Layout<T>,
    x0: Vec<T>,
    max_iters: usize,
) -> StartResult<T> {
    let f = |x: &[T]| objective(p, &layout.decode(x)).map_or(T::infinity(), |v| -v);
    let mut best = StartResult {
        value: f(&x0),
        x: x0,
    };
    let mut step = T::lit(0.5);
    let mut used = 0;
    while used < max_iters {
        let opts = NelderMeadOptions {
            max_iters: max_iters - used,
            step,
            ..Default::default()
        };
        let m = nelder_mead(f, &best.x, &opts);
        used += m.iters.max(1);
        let improved = m.value < best.value - T::lit(1e-15);
        if m.value < best.value {
            best = StartResult {
                value: m.value,
                x: m.x,
            };
        }
        if !improved && step < T::lit(1e-6) {
            break;
        }
        step *= T::lit(RESTART_SHRINK);
    }
    best.value = -best.value;
    best
}

/// Best start for one branch assignment: highest objective, ties to the
/// lowest start index. Independent of scheduling.
fn search_assignment<T: Real>(
    p: &TetraProblem<T>,
    layout: &Layout<T>,
    assignment: usize,
    cfg: &SearchConfig,
) -> (T, BCParams<T>) {
    if layout.dim() == 0 {
        let params = layout.decode(&[]);
        return (objective(p, &params).unwrap_or(T::neg_infinity()), params);
    }
    let results: Vec<StartResult<T>> = (0..=cfg.starts)
        .into_par_iter()
        .map(|i| {
            let x0 = if i == 0 {
                layout.start(None)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(((assignment as u64) << 32) | i as u64);
                layout.start(Some(&mut rng))
            };
            run_start(p, layout, x0, cfg.max_iters)
        })
        .collect();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    (results[best].value, layout.decode(&results[best].x))
}

/// Decides interpolability into `Ē`.
///
/// Infeasible when a necessary check fails. Otherwise each branch assignment
/// is searched from `cfg.starts` seeded random starts plus the balanced start
/// `s_k = √p_k`, stopping at the first assignment whose best Pick eigenvalue
/// is at least `−cfg.tol`. The winning data is interpolated by
/// [`solve_np`] and the result verified from scratch; a failed verification is
/// an error, never a `Solvable` certificate.
pub fn solve_tetra<T: Real>(p: &TetraProblem<T>, cfg: &SearchConfig) -> Result<Certificate<T>> {
    if let Some(reason) = necessary_checks(p)? {
        return Ok(Certificate::Infeasible(reason));
    }
    let tol = T::lit(cfg.tol);
    let products = p.products();
    let mut best_overall = T::neg_infinity();
    let mut found = None;
    let assignments = branch_assignments(&products);
    for (a, branches) in assignments.iter().enumerate() {
        let layout = Layout {
            products: products.clone(),
            branches: branches.clone(),
        };
        let (value, params) = search_assignment(p, &layout, a, cfg);
        best_overall = best_overall.max(value);
        if value >= -tol {
            found = Some((value, params));
            break;
        }
    }
    let Some((min_eig, params)) = found else {
        return Ok(Certificate::Unknown {
            best_objective: best_overall,
            starts_used: (cfg.starts + 1) * assignments.len(),
        });
    };

    let data = MatNPData::new(p.nodes().to_vec(), params.matrices(p))?;
    let colligation = solve_np(&data, tol).map_err(|e| match e {
        Error::NumericalFailure(msg) => Error::NumericalFailure(format!(
            "Pick eigenvalue {:e} found but interpolation failed: {msg}",
            min_eig.as_f64()
        )),
        other => other,
    })?;
    let cert = SolvableCertificate {
        params,
        min_eig,
        colligation,
        report: Default::default(),
    };
    let report = verify_certificate(p, &cert, MEMBERSHIP_SAMPLES, BOUNDARY_SAMPLES, tol)?;
    if !report.passed {
        return Err(Error::NumericalFailure(format!(
            "certificate failed verification: {report}"
        )));
    }
    Ok(Certificate::Solvable(Box::new(SolvableCertificate {
        report,
        ..cert
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{Infeasibility, Status};
    use crate::random::planted_tetra_problem;
    use crate::scalar::c64;
    use crate::tetrablock::TetraPoint;

    fn pt(x1: C<f64>, x2: C<f64>, x3: C<f64>) -> TetraPoint<f64> {
        TetraPoint::new(x1, x2, x3)
    }

    #[test]
    fn branch_enumeration() {
        let prods = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        let all = branch_assignments(&prods);
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![Branch::Product, Branch::Zero, Branch::Zero]);
        assert_eq!(all[1], vec![Branch::Product, Branch::Zero, Branch::FreeC]);
        assert_eq!(all[8], vec![Branch::Product, Branch::FreeB, Branch::FreeB]);
    }

    #[test]
    fn zero_data_is_solved_by_zero_function() {
        let p = TetraProblem::new(
            vec![c64(0.0, 0.0), c64(0.5, 0.0)],
            vec![TetraPoint::origin(); 2],
        )
        .unwrap();
        let cert = solve_tetra(&p, &SearchConfig::default()).unwrap();
        let s = cert.solvable().expect("solvable");
        assert_eq!(s.params.b, vec![c64(0.0, 0.0); 2]);
        assert_eq!(s.params.c, vec![c64(0.0, 0.0); 2]);
        assert!(s.report.max_node_residual < 1e-12);
    }

    #[test]
    fn single_node_points_of_closure_are_solvable() {
        let pts = [
            pt(c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)),
            pt(c64(0.5, 0.1), c64(-0.2, 0.3), c64(0.05, -0.1)),
            pt(c64(0.3, 0.0), c64(0.3, 0.0), c64(0.09, 0.0)),
            pt(c64(0.6, 0.0), c64(0.6, 0.0), c64(1.0, 0.0)),
        ];
        for x in pts {
            assert!(crate::tetrablock::in_closed_tetrablock(&x));
            let p = TetraProblem::new(vec![c64(0.0, 0.0)], vec![x]).unwrap();
            let cert = solve_tetra(&p, &SearchConfig::default()).unwrap();
            assert_eq!(cert.status(), Status::Solvable, "{x:?}");
        }
    }

    #[test]
    fn scalar_pick_family_is_infeasible() {
        let p = TetraProblem::new(
            vec![c64(0.0, 0.0), c64(0.9, 0.0)],
            vec![
                TetraPoint::origin(),
                pt(c64(0.999, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)),
            ],
        )
        .unwrap();
        match solve_tetra(&p, &SearchConfig::default()).unwrap() {
            Certificate::Infeasible(Infeasibility::ScalarPick { coordinate: 1, .. }) => {}
            other => panic!("{:?}", other.status()),
        }
    }

    #[test]
    fn planted_problems_are_solved() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut solved = 0;
        for _ in 0..6 {
            let (p, _) = planted_tetra_problem::<f64, _>(&mut rng, 3);
            let cert = solve_tetra(&p, &SearchConfig::default()).unwrap();
            if let Some(s) = cert.solvable() {
                assert!(s.report.passed);
                solved += 1;
            }
        }
        assert!(solved >= 5, "{solved}/6");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (p, _) = planted_tetra_problem::<f64, _>(&mut rng, 2);
        let cfg = SearchConfig {
            seed: 5,
            ..Default::default()
        };
        let a = solve_tetra(&p, &cfg).unwrap();
        let b = solve_tetra(&p, &cfg).unwrap();
        assert_eq!(a.solvable().unwrap().params, b.solvable().unwrap().params);
    }
}
