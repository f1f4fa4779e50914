//! Interpolation into the closed tetrablock and 2×2 `μ_Diag`-synthesis.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases at the crate root fix `f64`, the precision all documented
//! tolerances assume.
//!
//! ```
//! use tetrasynth::{c64, TetraPoint, TetraProblem, SearchConfig};
//!
//! let p = TetraProblem::new(
//!     vec![c64(0.0, 0.0), c64(0.5, 0.0)],
//!     vec![TetraPoint::origin(), TetraPoint::origin()],
//! ).unwrap();
//! let cert = tetrasynth::solve_tetra(&p, &SearchConfig::default()).unwrap();
//! assert!(cert.solvable().is_some());
//! ```

pub mod cli;
pub mod error;
pub mod interp;
pub mod mu;
pub mod numeric;
pub mod pick;
pub mod random;
pub mod realization;
pub mod scalar;
pub mod synthesis;
pub mod tetrablock;

pub use error::{Error, Result};
pub use interp::{solve_tetra, verify_certificate, SearchConfig, Status};
pub use mu::mu_diag;
pub use pick::{check_solvable, eval_schur, solve_np};
pub use realization::{canonical_lift, tetra_from_colligation};
pub use scalar::{c64, Real};
pub use synthesis::{solve_mu, verify_mu};
pub use tetrablock::{in_closed_tetrablock, in_open_tetrablock};

pub type Complex = scalar::C<f64>;
pub type ComplexMatrix = numeric::CMatrix<f64>;
pub type HermitianMatrix = numeric::HermitianMatrix<f64>;
pub type TetraPoint = tetrablock::TetraPoint<f64>;
pub type Colligation = pick::Colligation<f64>;
pub type MatNPData = pick::MatNPData<f64>;
pub type TetraFunction = realization::TetraFunction<f64>;
pub type CanonicalLift = realization::CanonicalLift<f64>;
pub type TetraProblem = interp::TetraProblem<f64>;
pub type BCParams = interp::BCParams<f64>;
pub type Certificate = interp::Certificate<f64>;
pub type SolvableCertificate = interp::SolvableCertificate<f64>;
pub type VerificationReport = interp::VerificationReport<f64>;
pub type MuProblem = synthesis::MuProblem<f64>;
pub type ScaledSchurFunction = synthesis::ScaledSchurFunction<f64>;
pub type MuCertificate = synthesis::MuCertificate<f64>;
pub type MuReport = synthesis::MuReport<f64>;
