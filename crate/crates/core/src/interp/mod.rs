//! Interpolation from the disc into the closed tetrablock.
//!
//! Data `λ_k ↦ (x1ᵏ, x2ᵏ, x3ᵏ)` is interpolable exactly when some choice of
//! `b_k, c_k` with `b_k c_k = x1ᵏ x2ᵏ − x3ᵏ` makes the 2×2 Nevanlinna–Pick
//! problem `λ_k ↦ [[x1ᵏ, b_k], [c_k, x2ᵏ]]` solvable. The search over
//! `(b, c)` is nonconvex; [`solve_tetra`] maximizes the smallest Pick
//! eigenvalue by multi-start Nelder–Mead and reports `Unknown` when it finds
//! no certificate.

mod search;
mod verify;

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{hermitian_min_eigenvalue, CMatrix};
use crate::pick::{pick_matrix, validate_nodes, Colligation, MatNPData};
use crate::scalar::{Real, C};
use crate::tetrablock::{in_closed_tetrablock, membership_defect, TetraPoint};

pub use search::solve_tetra;
pub use verify::{
    verify_certificate, VerificationReport, BOUNDARY_SAMPLES, MEMBERSHIP_SAMPLES, MEMBERSHIP_TOL,
};

/// Threshold below which a scalar Pick matrix certifies infeasibility.
pub const SCALAR_PICK_TOL: f64 = 1e-7;
/// Products `x1 x2 − x3` at or below this modulus use the zero branches.
pub const ZERO_PRODUCT_TOL: f64 = 1e-12;

/// Interpolation data for a map of the disc into the closed tetrablock.
#[derive(Clone, Debug, PartialEq)]
pub struct TetraProblem<T: Real> {
    nodes: Vec<C<T>>,
    targets: Vec<TetraPoint<T>>,
}

impl<T: Real> TetraProblem<T> {
    pub fn new(nodes: Vec<C<T>>, targets: Vec<TetraPoint<T>>) -> Result<Self> {
        validate_nodes(&nodes)?;
        if nodes.len() != targets.len() {
            return Err(Error::InvalidData(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        if let Some(k) = targets.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidData(format!(
                "target {k} has non-finite entries"
            )));
        }
        Ok(Self { nodes, targets })
    }

    pub fn nodes(&self) -> &[C<T>] {
        &self.nodes
    }

    pub fn targets(&self) -> &[TetraPoint<T>] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `p_k = x1ᵏ x2ᵏ − x3ᵏ`.
    pub fn products(&self) -> Vec<C<T>> {
        self.targets.iter().map(TetraPoint::product_gap).collect()
    }
}

/// How the off-diagonal pair `(b_k, c_k)` of a node is parametrized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `b = s`, `c = p/s` with `p ≠ 0`.
    Product,
    /// `b = c = 0`.
    Zero,
    /// `b = 0`, `c` free.
    FreeC,
    /// `c = 0`, `b` free.
    FreeB,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Self::Product => "product",
            Self::Zero => "zero",
            Self::FreeC => "free_c",
            Self::FreeB => "free_b",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::Product, Self::Zero, Self::FreeC, Self::FreeB]
            .into_iter()
            .find(|b| b.name() == s)
    }
}

/// Off-diagonal entries `b_k`, `c_k` completing each target to a matrix
/// `[[x1ᵏ, b_k], [c_k, x2ᵏ]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BCParams<T: Real> {
    pub b: Vec<C<T>>,
    pub c: Vec<C<T>>,
    pub branches: Vec<Branch>,
}

impl<T: Real> BCParams<T> {
    /// `max_k |b_k c_k − p_k|`.
    pub fn product_residual(&self, p: &TetraProblem<T>) -> T {
        self.b
            .iter()
            .zip(&self.c)
            .zip(p.products())
            .map(|((&b, &c), pk)| (b * c - pk).norm())
            .fold(T::zero(), T::max)
    }

    /// The completed target matrices.
    pub fn matrices(&self, p: &TetraProblem<T>) -> Vec<CMatrix<T>> {
        p.targets
            .iter()
            .zip(self.b.iter().zip(&self.c))
            .map(|(t, (&b, &c))| CMatrix::mat2(t.x1, b, c, t.x2))
            .collect()
    }

    fn check_shape(&self, p: &TetraProblem<T>) -> Result<()> {
        let n = p.len();
        if self.b.len() != n || self.c.len() != n || self.branches.len() != n {
            return Err(Error::InvalidInput(format!(
                "parameters for {} / {} / {} nodes, problem has {n}",
                self.b.len(),
                self.c.len(),
                self.branches.len()
            )));
        }
        Ok(())
    }
}

/// Multi-start search settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iters: 400,
            seed: 0,
            tol: 1e-7,
        }
    }
}

/// A necessary condition violated by the data.
#[derive(Clone, Debug, PartialEq)]
pub enum Infeasibility<T: Real> {
    /// A target lies outside the closed tetrablock.
    TargetOutside { node: usize, defect: T },
    /// The scalar Pick matrix of coordinate `x_coordinate` is not PSD.
    ScalarPick { coordinate: usize, min_eig: T },
}

impl<T: Real> fmt::Display for Infeasibility<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TargetOutside { node, defect } => {
                write!(f, "target {node} not in Ē (defect {:e})", defect.as_f64())
            }
            Self::ScalarPick {
                coordinate,
                min_eig,
            } => write!(
                f,
                "scalar Pick matrix for x{coordinate} has minimum eigenvalue {:e}",
                min_eig.as_f64()
            ),
        }
    }
}

/// Outcome of [`solve_tetra`].
#[derive(Clone, Debug)]
pub enum Certificate<T: Real> {
    Solvable(Box<SolvableCertificate<T>>),
    Infeasible(Infeasibility<T>),
    /// The search found no certificate; nothing is claimed.
    Unknown {
        best_objective: T,
        starts_used: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Solvable,
    Infeasible,
    Unknown,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solvable => "Solvable",
            Self::Infeasible => "Infeasible",
            Self::Unknown => "Unknown",
        }
    }
}

impl<T: Real> Certificate<T> {
    pub fn status(&self) -> Status {
        match self {
            Self::Solvable(_) => Status::Solvable,
            Self::Infeasible(_) => Status::Infeasible,
            Self::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn solvable(&self) -> Option<&SolvableCertificate<T>> {
        match self {
            Self::Solvable(s) => Some(s),
            _ => None,
        }
    }
}

/// Witness of solvability: the parameters, the Pick eigenvalue they attain,
/// the interpolant and its verification.
#[derive(Clone, Debug)]
pub struct SolvableCertificate<T: Real> {
    pub params: BCParams<T>,
    pub min_eig: T,
    pub colligation: Colligation<T>,
    pub report: VerificationReport<T>,
}

fn scalar_pick_min_eig<T: Real>(nodes: &[C<T>], values: impl Iterator<Item = C<T>>) -> Result<T> {
    let targets = values.map(|v| CMatrix::diag(&[v])).collect();
    hermitian_min_eigenvalue(&pick_matrix(&MatNPData::from_validated(
        nodes.to_vec(),
        targets,
    )))
}

type Coordinate<T> = fn(&TetraPoint<T>) -> C<T>;

/// Cheap proofs of infeasibility: a target outside `Ē`, or a coordinate
/// whose scalar Pick matrix has an eigenvalue below `−1e-7`. `None` proves
/// nothing.
pub fn necessary_checks<T: Real>(p: &TetraProblem<T>) -> Result<Option<Infeasibility<T>>> {
    for (node, t) in p.targets.iter().enumerate() {
        if !in_closed_tetrablock(t) {
            return Ok(Some(Infeasibility::TargetOutside {
                node,
                defect: membership_defect(t),
            }));
        }
    }
    let coords: [Coordinate<T>; 3] = [|t| t.x1, |t| t.x2, |t| t.x3];
    for (i, coord) in coords.iter().enumerate() {
        let min_eig = scalar_pick_min_eig(&p.nodes, p.targets.iter().map(coord))?;
        if min_eig < -T::lit(SCALAR_PICK_TOL) {
            return Ok(Some(Infeasibility::ScalarPick {
                coordinate: i + 1,
                min_eig,
            }));
        }
    }
    Ok(None)
}

/// Smallest eigenvalue of the 2n×2n Pick matrix of the completed targets.
pub fn objective<T: Real>(p: &TetraProblem<T>, params: &BCParams<T>) -> Result<T> {
    params.check_shape(p)?;
    let data = MatNPData::from_validated(p.nodes.clone(), params.matrices(p));
    hermitian_min_eigenvalue(&pick_matrix(&data))
}

impl<T: Real> BCParams<T> {
    /// Zero off-diagonals on every node.
    pub fn zeros(n: usize) -> Self {
        Self {
            b: vec![C::zero(); n],
            c: vec![C::zero(); n],
            branches: vec![Branch::Zero; n],
        }
    }
}
