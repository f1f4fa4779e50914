//! Independent re-verification of solvability certificates.

use std::fmt;

use super::{objective, SolvableCertificate, TetraProblem};
use crate::error::Result;
use crate::pick::UNITARITY_TOL;
use crate::random::spiral_points;
use crate::realization::{boundary_einner_check, tetra_from_colligation};
use crate::scalar::Real;
use crate::tetrablock::membership_defect;

/// Disc samples used for the membership sweep.
pub const MEMBERSHIP_SAMPLES: usize = 200;
/// Near-boundary samples used for the distinguished-boundary sweep.
pub const BOUNDARY_SAMPLES: usize = 128;
/// Radius of the membership sweep.
pub const MEMBERSHIP_RADIUS: f64 = 0.999;

/// Bound on `|b_k c_k − p_k|`.
pub const PRODUCT_TOL: f64 = 1e-12;
/// Bound on `|x(λ_k) − t_k|` (largest coordinate).
pub const NODE_TOL: f64 = 1e-6;
/// Bound on the membership defect inside the disc.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Bound on the distinguished-boundary defect near the circle.
pub const BOUNDARY_TOL: f64 = 1e-5;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport<T: Real> {
    pub max_product_residual: T,
    /// Pick eigenvalue recomputed from the parameters.
    pub min_eig: T,
    pub unitarity_residual: T,
    pub max_node_residual: T,
    pub max_membership_defect: T,
    pub max_boundary_defect: T,
    /// Boundary samples skipped at a resolvent singularity.
    pub boundary_skipped: usize,
    pub passed: bool,
}

impl<T: Real> fmt::Display for VerificationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "product {:e}, min_eig {:e}, unitarity {:e}, node {:e}, membership {:e}, bE {:e}",
            self.max_product_residual.as_f64(),
            self.min_eig.as_f64(),
            self.unitarity_residual.as_f64(),
            self.max_node_residual.as_f64(),
            self.max_membership_defect.as_f64(),
            self.max_boundary_defect.as_f64()
        )
    }
}

/// Recomputes every residual of a solvability certificate from the problem
/// and the emitted colligation alone.
pub fn verify_certificate<T: Real>(
    p: &TetraProblem<T>,
    cert: &SolvableCertificate<T>,
    membership_samples: usize,
    boundary_samples: usize,
    tol: T,
) -> Result<VerificationReport<T>> {
    let mut r = VerificationReport {
        unitarity_residual: cert.colligation.block_operator().unitarity_residual(),
        ..Default::default()
    };
    let shape_ok = cert.params.check_shape(p).is_ok();
    if shape_ok {
        r.max_product_residual = cert.params.product_residual(p);
        r.min_eig = objective(p, &cert.params)?;
    } else {
        r.max_product_residual = T::infinity();
        r.min_eig = T::neg_infinity();
    }

    let Ok(x) = tetra_from_colligation(&cert.colligation) else {
        r.max_node_residual = T::infinity();
        return Ok(r);
    };
    for (&lam, t) in p.nodes().iter().zip(p.targets()) {
        r.max_node_residual = r.max_node_residual.max(x.eval(lam)?.distance(t));
    }
    for lam in spiral_points::<T>(membership_samples, MEMBERSHIP_RADIUS) {
        r.max_membership_defect = r
            .max_membership_defect
            .max(membership_defect(&x.eval(lam)?));
    }
    let e = boundary_einner_check(&x, boundary_samples)?;
    r.max_boundary_defect = e.max_defect;
    r.boundary_skipped = e.skipped;

    r.passed = shape_ok
        && r.max_product_residual <= T::lit(PRODUCT_TOL)
        && r.min_eig >= -tol
        && r.unitarity_residual <= T::lit(UNITARITY_TOL)
        && r.max_node_residual <= T::lit(NODE_TOL)
        && r.max_membership_defect <= T::lit(MEMBERSHIP_TOL)
        && r.max_boundary_defect <= T::lit(BOUNDARY_TOL);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{solve_tetra, SearchConfig};
    use crate::random::planted_tetra_problem;
    use crate::scalar::c64;
    use crate::tetrablock::TetraPoint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_problem_has_zero_residuals() {
        let p = TetraProblem::new(
            vec![c64(0.0, 0.0), c64(0.5, 0.0)],
            vec![TetraPoint::origin(); 2],
        )
        .unwrap();
        let cert = solve_tetra(&p, &SearchConfig::default()).unwrap();
        let r = verify_certificate(&p, cert.solvable().unwrap(), 200, 128, 1e-7).unwrap();
        assert!(r.passed);
        assert!(r.max_node_residual < 1e-12 && r.max_product_residual == 0.0);
    }

    #[test]
    fn corrupted_parameter_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (p, _) = planted_tetra_problem::<f64, _>(&mut rng, 2);
        let cert = solve_tetra(&p, &SearchConfig::default()).unwrap();
        let mut bad = cert.solvable().unwrap().clone();
        assert!(verify_certificate(&p, &bad, 200, 128, 1e-7).unwrap().passed);
        bad.params.b[0] += c64(0.1, 0.0);
        let r = verify_certificate(&p, &bad, 200, 128, 1e-7).unwrap();
        assert!(!r.passed);
        assert!(r.max_product_residual > 1e-3);
    }
}
