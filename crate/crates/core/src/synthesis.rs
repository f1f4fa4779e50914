//! μ-synthesis for 2×2 interpolation data.
//!
//! Find an analytic `F` on the disc with `F(λ_k) = W_k` and
//! `μ_Diag(F(λ)) ≤ 1` everywhere. Since `μ_Diag` only sees
//! `(F11, F22, det F)`, the problem reduces to interpolation into the closed
//! tetrablock. A solution `χ` of that problem has the right diagonal and
//! determinant at the nodes but arbitrary off-diagonal split; the analytic
//! diagonal similarity `diag(e, 1) χ diag(e, 1)^{-1}` with `e = exp(q)`, `q` a
//! Lagrange polynomial, restores `W_k` exactly without changing `μ_Diag`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interp::{solve_tetra, Certificate, SearchConfig, TetraProblem};
use crate::mu::mu_diag;
use crate::numeric::{operator_norm, CMatrix};
use crate::pick::{eval_schur, validate_nodes, Colligation};
use crate::random::{circle_points, spiral_points};
use crate::scalar::{Real, C};
use crate::tetrablock::TetraPoint;

/// Smallest admissible `|w12 w21|`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Smallest admissible `|b_k|` for the rescaling.
pub const RESCALE_TOL: f64 = 1e-12;
/// Node separation below which the Lagrange polynomial is flagged.
pub const CLOSE_NODES: f64 = 1e-4;
/// Bound on `‖F(λ_k) − W_k‖`.
pub const NODE_TOL: f64 = 1e-5;
/// Bound on `μ_Diag(F(λ)) − 1` over the sample grid.
pub const MU_EXCESS_TOL: f64 = 1e-6;
/// Relative accuracy of the μ evaluations in [`verify_mu`].
const VERIFY_REL_TOL: f64 = 1e-9;
/// Radius of the verification sample.
const SAMPLE_RADIUS: f64 = 0.999;
/// Largest node count for which the branch search of the scaling
/// polynomial is exhaustive.
pub const BRANCH_SEARCH_MAX_NODES: usize = 7;
const BRANCH_PROBES: usize = 256;

/// Interpolation data `λ_k ↦ W_k` with `w12ᵏ w21ᵏ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuProblem<T: Real> {
    nodes: Vec<C<T>>,
    targets: Vec<CMatrix<T>>,
}

impl<T: Real> MuProblem<T> {
    pub fn new(nodes: Vec<C<T>>, targets: Vec<CMatrix<T>>) -> Result<Self> {
        validate_nodes(&nodes)?;
        if nodes.len() != targets.len() {
            return Err(Error::InvalidData(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        for (k, w) in targets.iter().enumerate() {
            if w.rows() != 2 || w.cols() != 2 {
                return Err(Error::InvalidData(format!("target {k} is not 2x2")));
            }
            w.ensure_finite("target")?;
            let prod = (w[(0, 1)] * w[(1, 0)]).norm();
            if prod < T::lit(OFF_DIAGONAL_TOL) {
                return Err(Error::HypothesisViolation(format!(
                    "target {k} has w12·w21 = {:e}; off-diagonal entries must not vanish",
                    prod.as_f64()
                )));
            }
        }
        Ok(Self { nodes, targets })
    }

    pub fn nodes(&self) -> &[C<T>] {
        &self.nodes
    }

    pub fn targets(&self) -> &[CMatrix<T>] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Targets `(w11ᵏ, w22ᵏ, det W_k)`.
pub fn reduce_to_tetra<T: Real>(p: &MuProblem<T>) -> Result<TetraProblem<T>> {
    let targets = p
        .targets
        .iter()
        .map(|w| TetraPoint::new(w[(0, 0)], w[(1, 1)], w.det2()))
        .collect();
    TetraProblem::new(p.nodes.clone(), targets)
}

/// `F(λ) = diag(e(λ), 1) χ(λ) diag(e(λ), 1)^{-1}` with `e = exp ∘ q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSchurFunction<T: Real> {
    pub chi: Colligation<T>,
    /// Coefficients of `q`, constant term first.
    pub scale_poly: Vec<C<T>>,
}

impl<T: Real> ScaledSchurFunction<T> {
    pub fn q(&self, lam: C<T>) -> C<T> {
        self.scale_poly
            .iter()
            .rev()
            .fold(C::zero(), |acc, &c| acc * lam + c)
    }

    pub fn eval(&self, lam: C<T>) -> Result<CMatrix<T>> {
        let chi = eval_schur(&self.chi, lam)?;
        let e = self.q(lam).exp();
        Ok(CMatrix::mat2(
            chi[(0, 0)],
            e * chi[(0, 1)],
            chi[(1, 0)] / e,
            chi[(1, 1)],
        ))
    }
}

/// Interpolating polynomial through `q(λ_k) = logs_k + 2πi m_k` with
/// `m_0 = 0` and `m_k ∈ {−1, 0, 1}` chosen to minimise `max |Re q|` on the
/// unit circle, which bounds `e` and `1/e` on the whole disc (`Re q` is
/// harmonic). Ties keep the earliest candidate, starting from the principal
/// branches. Above [`BRANCH_SEARCH_MAX_NODES`] nodes the
/// principal branches are used.
pub fn scale_polynomial<T: Real>(nodes: &[C<T>], logs: &[C<T>]) -> Vec<C<T>> {
    let n = nodes.len();
    if n <= 1 || n > BRANCH_SEARCH_MAX_NODES {
        return lagrange_coefficients(nodes, logs);
    }
    let probes = circle_points::<T>(BRANCH_PROBES, 1.0);
    let size = |q: &[C<T>]| {
        probes
            .iter()
            .map(|&l| {
                q.iter()
                    .rev()
                    .fold(C::zero(), |acc: C<T>, &c| acc * l + c)
                    .re
                    .abs()
            })
            .fold(T::zero(), T::max)
    };
    const SHIFTS: [i32; 3] = [0, -1, 1];
    let tau = C::new(T::zero(), T::TAU());
    let mut best = lagrange_coefficients(nodes, logs);
    let mut best_size = size(&best);
    for code in 1..3usize.pow(n as u32 - 1) {
        let mut digits = code;
        let shifted: Vec<C<T>> = logs
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                if k == 0 {
                    return v;
                }
                let m = SHIFTS[digits % 3];
                digits /= 3;
                v + tau * T::from_i32(m).unwrap()
            })
            .collect();
        let q = lagrange_coefficients(nodes, &shifted);
        let s = size(&q);
        if s < best_size {
            best = q;
            best_size = s;
        }
    }
    best
}

/// Monomial coefficients (constant first) of the polynomial of degree
/// `< n` through `(x_k, y_k)`, via Newton divided differences.
pub fn lagrange_coefficients<T: Real>(xs: &[C<T>], ys: &[C<T>]) -> Vec<C<T>> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    // Horner on the Newton form: p = dd[n-1]; p = p·(x − x_i) + dd[i]
    let mut coeffs = vec![C::zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![C::zero(); n];
        for (d, &c) in coeffs.iter().enumerate().take(n - 1) {
            next[d + 1] += c;
            next[d] -= c * xs[i];
        }
        next[0] += dd[i];
        coeffs = next;
    }
    coeffs
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MuReport<T: Real> {
    pub max_node_residual: T,
    pub max_mu_excess: T,
    pub grid_n: usize,
    /// Smallest pairwise node distance.
    pub min_node_separation: T,
    /// Nodes closer than `1e-4` make the scaling polynomial ill-conditioned.
    pub close_nodes_warning: bool,
    pub passed: bool,
}

/// Node residuals `‖F(λ_k) − W_k‖` and the largest `μ_Diag(F(λ)) − 1` over
/// `grid_n` disc samples.
pub fn verify_mu<T: Real>(
    p: &MuProblem<T>,
    f: &ScaledSchurFunction<T>,
    grid_n: usize,
) -> Result<MuReport<T>> {
    let mut r = MuReport {
        grid_n,
        min_node_separation: T::infinity(),
        max_mu_excess: T::neg_infinity(),
        ..Default::default()
    };
    if f.chi.order() != 2 {
        r.max_node_residual = T::infinity();
        return Ok(r);
    }
    for (&lam, w) in p.nodes.iter().zip(&p.targets) {
        r.max_node_residual = r
            .max_node_residual
            .max(operator_norm(&(f.eval(lam)? - w.clone()))?);
    }
    for (k, a) in p.nodes.iter().enumerate() {
        for b in &p.nodes[k + 1..] {
            r.min_node_separation = r.min_node_separation.min((*a - *b).norm());
        }
    }
    r.close_nodes_warning = r.min_node_separation < T::lit(CLOSE_NODES);
    if r.close_nodes_warning {
        log::warn!(
            "nodes {:e} apart: scaling polynomial may be ill-conditioned",
            r.min_node_separation.as_f64()
        );
    }
    let rel = T::lit(VERIFY_REL_TOL);
    for lam in spiral_points::<T>(grid_n, SAMPLE_RADIUS) {
        let mu = mu_diag(&f.eval(lam)?, rel)?;
        r.max_mu_excess = r.max_mu_excess.max(mu - T::one());
    }
    r.passed = r.max_node_residual <= T::lit(NODE_TOL) && r.max_mu_excess <= T::lit(MU_EXCESS_TOL);
    Ok(r)
}

/// A μ-synthesis interpolant with its verification.
#[derive(Clone, Debug)]
pub struct MuSolution<T: Real> {
    pub function: ScaledSchurFunction<T>,
    pub report: MuReport<T>,
}

/// Outcome of [`solve_mu`]: the certificate of the reduced tetra problem and,
/// when that is solvable, the lifted interpolant.
#[derive(Clone, Debug)]
pub struct MuCertificate<T: Real> {
    pub tetra: Certificate<T>,
    pub solution: Option<MuSolution<T>>,
}

/// Number of disc samples used by [`solve_mu`] to verify its output.
pub const VERIFY_GRID: usize = 200;

/// Solves the μ-synthesis problem through the tetrablock reduction.
///
/// Infeasible and Unknown verdicts of the reduced problem are passed through.
/// On success `q(λ_k) ≡ Log(w12ᵏ / b_k)` modulo `2πi` (see
/// [`scale_polynomial`]) and the scaled function is verified on 200 disc
/// samples; a failed verification is an error.
pub fn solve_mu<T: Real>(p: &MuProblem<T>, cfg: &SearchConfig) -> Result<MuCertificate<T>> {
    let tetra_problem = reduce_to_tetra(p)?;
    let tetra = solve_tetra(&tetra_problem, cfg)?;
    let Some(cert) = tetra.solvable() else {
        return Ok(MuCertificate {
            tetra,
            solution: None,
        });
    };
    let mut logs = Vec::with_capacity(p.len());
    for (node, (w, &b)) in p.targets.iter().zip(&cert.params.b).enumerate() {
        if b.norm() < T::lit(RESCALE_TOL) {
            return Err(Error::RescalingDegenerate {
                node,
                modulus: b.norm().as_f64(),
            });
        }
        logs.push((w[(0, 1)] / b).ln());
    }
    let function = ScaledSchurFunction {
        chi: cert.colligation.clone(),
        scale_poly: scale_polynomial(&p.nodes, &logs),
    };
    let report = verify_mu(p, &function, VERIFY_GRID)?;
    if !report.passed {
        return Err(Error::NumericalFailure(format!(
            "μ interpolant failed verification: node residual {:e}, μ excess {:e}",
            report.max_node_residual.as_f64(),
            report.max_mu_excess.as_f64()
        )));
    }
    Ok(MuCertificate {
        tetra,
        solution: Some(MuSolution { function, report }),
    })
}

impl<T: Real> MuCertificate<T> {
    pub fn status(&self) -> crate::interp::Status {
        self.tetra.status()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{Infeasibility, Status};
    use crate::random::{planted_mu_problem, random_contraction, random_disc_point};
    use crate::scalar::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m2(a: C<f64>, b: C<f64>, c: C<f64>, d: C<f64>) -> CMatrix<f64> {
        CMatrix::mat2(a, b, c, d)
    }

    fn re(x: f64) -> C<f64> {
        c64(x, 0.0)
    }

    #[test]
    fn reduction_examples() {
        let p =
            MuProblem::new(vec![re(0.0)], vec![m2(re(0.0), re(1.0), re(1.0), re(0.0))]).unwrap();
        let t = reduce_to_tetra(&p).unwrap();
        assert_eq!(t.targets()[0], TetraPoint::new(re(0.0), re(0.0), re(-1.0)));
        assert_eq!(t.products()[0], re(1.0));

        let p =
            MuProblem::new(vec![re(0.0)], vec![m2(re(0.5), re(0.1), re(0.2), re(0.5))]).unwrap();
        let t = reduce_to_tetra(&p).unwrap();
        assert!((t.targets()[0].x3 - re(0.23)).norm() < 1e-15);
        assert!((t.products()[0] - re(0.02)).norm() < 1e-15);

        let e = MuProblem::new(vec![re(0.0)], vec![m2(re(0.5), re(0.0), re(0.2), re(0.5))]);
        assert!(matches!(e, Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn lagrange_reproduces_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            let xs: Vec<C<f64>> = (0..n).map(|_| random_disc_point(&mut rng, 0.9)).collect();
            let ys: Vec<C<f64>> = (0..n).map(|_| random_disc_point(&mut rng, 3.0)).collect();
            let f = ScaledSchurFunction {
                chi: Colligation::constant(CMatrix::identity(2)).unwrap(),
                scale_poly: lagrange_coefficients(&xs, &ys),
            };
            assert_eq!(f.scale_poly.len(), n);
            for (x, y) in xs.iter().zip(&ys) {
                assert!((f.q(*x) - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn similarity_keeps_tetra_data_and_mu() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let norm = rng.gen_range(0.1..1.5);
            let chi = random_contraction::<f64, _>(&mut rng, 2, norm);
            let e = c64(rng.gen_range(0.2..3.0), 0.0) * c64(0.0, rng.gen_range(-3.0..3.0)).exp();
            let f = m2(chi[(0, 0)], e * chi[(0, 1)], chi[(1, 0)] / e, chi[(1, 1)]);
            assert!((f.det2() - chi.det2()).norm() < 1e-12);
            let (a, b) = (mu_diag(&chi, 1e-9).unwrap(), mu_diag(&f, 1e-9).unwrap());
            assert!((a - b).abs() <= 1e-9 * a + 1e-9);
        }
    }

    #[test]
    fn swap_target_is_solvable_at_origin() {
        let w = m2(re(0.0), re(1.0), re(1.0), re(0.0));
        let p = MuProblem::new(vec![re(0.0)], vec![w.clone()]).unwrap();
        let cert = solve_mu(&p, &SearchConfig::default()).unwrap();
        let sol = cert.solution.expect("solvable");
        assert!(sol.report.max_node_residual < 1e-9);
        assert!((sol.function.eval(re(0.0)).unwrap() - w).max_abs() < 1e-9);
    }

    #[test]
    fn doubled_swap_is_infeasible() {
        let w = m2(re(0.0), re(2.0), re(2.0), re(0.0));
        assert!((mu_diag(&w, 1e-9).unwrap() - 2.0).abs() < 1e-8);
        let p = MuProblem::new(vec![re(0.0)], vec![w]).unwrap();
        let cert = solve_mu(&p, &SearchConfig::default()).unwrap();
        assert_eq!(cert.status(), Status::Infeasible);
        assert!(matches!(
            cert.tetra,
            Certificate::Infeasible(Infeasibility::TargetOutside { .. })
        ));
        assert!(cert.solution.is_none());
    }

    #[test]
    fn planted_problems_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let p = planted_mu_problem::<f64, _>(&mut rng, 3);
            let cert = solve_mu(&p, &SearchConfig::default()).unwrap();
            let sol = cert.solution.expect("planted problem solvable");
            assert!(sol.report.passed);
            assert!(sol.report.max_mu_excess <= 1e-6);
            let reduced =
                solve_tetra(&reduce_to_tetra(&p).unwrap(), &SearchConfig::default()).unwrap();
            assert_eq!(reduced.status(), Status::Solvable);
        }
    }

    #[test]
    fn corrupted_scale_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = planted_mu_problem::<f64, _>(&mut rng, 2);
        let mut f = solve_mu(&p, &SearchConfig::default())
            .unwrap()
            .solution
            .unwrap()
            .function;
        f.scale_poly[0] += c64(0.5, 0.0);
        let r = verify_mu(&p, &f, 50).unwrap();
        assert!(!r.passed && r.max_node_residual > 1e-3);
    }

    #[test]
    fn close_nodes_warn() {
        let w = m2(re(0.1), re(0.2), re(0.3), re(0.1));
        let p = MuProblem::new(vec![re(0.0), re(5e-5)], vec![w.clone(), w]).unwrap();
        let f = ScaledSchurFunction {
            chi: Colligation::constant(CMatrix::identity(2)).unwrap(),
            scale_poly: vec![re(0.0)],
        };
        assert!(verify_mu(&p, &f, 10).unwrap().close_nodes_warning);
    }

    #[test]
    fn scale_polynomial_matches_exponentials() {
        let nodes = vec![
            c64(-0.27, -0.07),
            c64(-0.73, -0.09),
            c64(-0.21, 0.06),
            c64(-0.02, -0.26),
        ];
        let logs = vec![
            c64(0.51, 2.34),
            c64(-0.36, 0.75),
            c64(0.58, -2.29),
            c64(0.5, 2.36),
        ];
        let q = scale_polynomial(&nodes, &logs);
        let eval = |l: C<f64>| q.iter().rev().fold(c64(0.0, 0.0), |a, &c| a * l + c);
        for (&l, &v) in nodes.iter().zip(&logs) {
            assert!((eval(l).exp() - v.exp()).norm() < 1e-10);
        }
        let principal = lagrange_coefficients(&nodes, &logs);
        let size = |c: &[C<f64>]| {
            circle_points::<f64>(256, 1.0)
                .iter()
                .map(|&l| {
                    c.iter()
                        .rev()
                        .fold(c64(0.0, 0.0), |a, &x| a * l + x)
                        .re
                        .abs()
                })
                .fold(0.0, f64::max)
        };
        assert!(size(&q) < size(&principal));
    }
}
