//! Matricial Nevanlinna–Pick problems on the disc: Pick matrices, solvability
//! verdicts and interpolants realized as finite unitary colligations.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{
    extend_isometry_to_unitary, hermitian_eigen, hermitian_min_eigenvalue, CMatrix, HermitianMatrix,
};
use crate::scalar::{Real, C};

/// Default tolerance for positive-semidefiniteness verdicts.
pub const DEFAULT_PSD_TOL: f64 = 1e-7;
/// Unitarity residual every colligation must satisfy.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Interpolation accuracy guaranteed by [`solve_np`].
pub const INTERPOLATION_TOL: f64 = 1e-6;
/// Shrink factor applied to targets whose Pick matrix is nearly singular.
pub const BOUNDARY_SHRINK: f64 = 1e-9;

const MIN_NODE_SEPARATION: f64 = 1e-10;
const MAX_NODE_RADIUS: f64 = 1.0 - 1e-10;

/// Interpolation data `λ_k ↦ W_k` with square targets of a common order.
#[derive(Clone, Debug, PartialEq)]
pub struct MatNPData<T: Real> {
    nodes: Vec<C<T>>,
    targets: Vec<CMatrix<T>>,
}

impl<T: Real> MatNPData<T> {
    pub fn new(nodes: Vec<C<T>>, targets: Vec<CMatrix<T>>) -> Result<Self> {
        validate_nodes(&nodes)?;
        if targets.len() != nodes.len() {
            return Err(Error::InvalidData(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        let m = targets[0].rows();
        if !(1..=2).contains(&m) {
            return Err(Error::InvalidData(format!(
                "target order {m} not in {{1, 2}}"
            )));
        }
        for (k, w) in targets.iter().enumerate() {
            if w.rows() != m || w.cols() != m {
                return Err(Error::InvalidData(format!("target {k} is not {m}x{m}")));
            }
            if !w.is_finite() {
                return Err(Error::InvalidData(format!(
                    "target {k} has non-finite entries"
                )));
            }
        }
        Ok(Self { nodes, targets })
    }

    /// Skips validation; callers guarantee the invariants of [`Self::new`].
    pub(crate) fn from_validated(nodes: Vec<C<T>>, targets: Vec<CMatrix<T>>) -> Self {
        Self { nodes, targets }
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

    /// Order of the target matrices.
    pub fn order(&self) -> usize {
        self.targets[0].rows()
    }

    fn shrunk(&self, factor: T) -> Self {
        Self {
            nodes: self.nodes.clone(),
            targets: self.targets.iter().map(|w| w.scale_real(factor)).collect(),
        }
    }
}

/// Checks `n ≥ 1`, `|λ_k| ≤ 1 − 1e-10` and pairwise separation `≥ 1e-10`.
pub(crate) fn validate_nodes<T: Real>(nodes: &[C<T>]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidData("no interpolation nodes".into()));
    }
    for (k, z) in nodes.iter().enumerate() {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > T::lit(MAX_NODE_RADIUS) {
            return Err(Error::InvalidData(format!(
                "node {k} is not inside the unit disc"
            )));
        }
        for (l, w) in nodes.iter().enumerate().skip(k + 1) {
            if (*z - *w).norm() < T::lit(MIN_NODE_SEPARATION) {
                return Err(Error::InvalidData(format!("nodes {k} and {l} coincide")));
            }
        }
    }
    Ok(())
}

/// Unitary colligation `[A B; C D]` on `ℂ^dimH ⊕ ℂ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Colligation<T: Real> {
    dim_h: usize,
    a: CMatrix<T>,
    b: CMatrix<T>,
    c: CMatrix<T>,
    d: CMatrix<T>,
    unitarity_residual: T,
}

impl<T: Real> Colligation<T> {
    /// Splits a unitary of order `dim_h + m` into blocks.
    pub fn from_unitary(u: &CMatrix<T>, dim_h: usize) -> Result<Self> {
        if !u.is_square() || u.rows() < dim_h || u.rows() == dim_h {
            return Err(Error::InvalidInput(format!(
                "cannot split a {}x{} operator with state dimension {dim_h}",
                u.rows(),
                u.cols()
            )));
        }
        let m = u.rows() - dim_h;
        Self::from_blocks(
            u.block(0, 0, dim_h, dim_h),
            u.block(0, dim_h, dim_h, m),
            u.block(dim_h, 0, m, dim_h),
            u.block(dim_h, dim_h, m, m),
        )
    }

    /// Assembles a colligation, rejecting block operators that are not
    /// unitary within [`UNITARITY_TOL`].
    pub fn from_blocks(a: CMatrix<T>, b: CMatrix<T>, c: CMatrix<T>, d: CMatrix<T>) -> Result<Self> {
        let h = a.rows();
        let m = d.rows();
        if !a.is_square()
            || !d.is_square()
            || b.rows() != h
            || b.cols() != m
            || c.rows() != m
            || c.cols() != h
        {
            return Err(Error::InvalidInput(
                "colligation blocks do not conform".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidInput(
                "colligation with empty output space".into(),
            ));
        }
        for (blk, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D")] {
            blk.ensure_finite(name)?;
        }
        let residual = CMatrix::from_blocks(&a, &b, &c, &d).unitarity_residual();
        if residual > T::lit(UNITARITY_TOL) {
            return Err(Error::ContractViolation(format!(
                "block operator is not unitary (residual {:e})",
                residual.as_f64()
            )));
        }
        Ok(Self {
            dim_h: h,
            a,
            b,
            c,
            d,
            unitarity_residual: residual,
        })
    }

    /// Constant function `D` (empty state space); `D` must be unitary.
    pub fn constant(d: CMatrix<T>) -> Result<Self> {
        let m = d.rows();
        Self::from_blocks(
            CMatrix::zeros(0, 0),
            CMatrix::zeros(0, m),
            CMatrix::zeros(m, 0),
            d,
        )
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    /// Dimension of the input/output space.
    pub fn order(&self) -> usize {
        self.d.rows()
    }

    pub fn a(&self) -> &CMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &CMatrix<T> {
        &self.b
    }

    pub fn c(&self) -> &CMatrix<T> {
        &self.c
    }

    pub fn d(&self) -> &CMatrix<T> {
        &self.d
    }

    pub fn unitarity_residual(&self) -> T {
        self.unitarity_residual
    }

    pub fn block_operator(&self) -> CMatrix<T> {
        CMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d)
    }
}

/// Transfer function `D + C λ (I − λA)^{-1} B`, defined for `|λ| ≤ 1`.
pub fn eval_schur<T: Real>(col: &Colligation<T>, lam: C<T>) -> Result<CMatrix<T>> {
    if lam.norm() > T::one() + T::lit(1e-12) {
        return Err(Error::OutOfDomain {
            modulus: lam.norm().as_f64(),
            max: 1.0,
        });
    }
    if col.dim_h == 0 || lam.is_zero() {
        return Ok(col.d.clone());
    }
    let h = col.dim_h;
    let resolvent = CMatrix::identity(h) - col.a.scale(lam);
    let x = resolvent
        .solve(&col.b, T::lit(1e-13))
        .map_err(|_| Error::BoundaryPole {
            re: lam.re.as_f64(),
            im: lam.im.as_f64(),
        })?;
    Ok(col.d.clone() + col.c.matmul(&x).scale(lam))
}

/// Block Pick matrix `[(I − W_k^* W_ℓ)/(1 − conj(λ_k) λ_ℓ)]`.
pub fn pick_matrix<T: Real>(data: &MatNPData<T>) -> HermitianMatrix<T> {
    let n = data.len();
    let m = data.order();
    let mut p = CMatrix::zeros(n * m, n * m);
    for k in 0..n {
        for l in k..n {
            let wk = &data.targets[k];
            let wl = &data.targets[l];
            let den = C::<T>::one() - data.nodes[k].conj() * data.nodes[l];
            let blk = (CMatrix::identity(m) - wk.adjoint_mul(wl)).scale(den.inv());
            p.set_block(k * m, l * m, &blk);
        }
    }
    HermitianMatrix::from_upper(&p)
}

/// Pick matrix with its smallest eigenvalue and the verdict
/// `solvable ⟺ min_eig ≥ −tol`.
#[derive(Clone, Debug)]
pub struct PickReport<T: Real> {
    pub matrix: HermitianMatrix<T>,
    pub min_eig: T,
    pub solvable: bool,
    pub tol: T,
}

pub fn check_solvable<T: Real>(data: &MatNPData<T>, tol: T) -> Result<PickReport<T>> {
    let matrix = pick_matrix(data);
    let min_eig = hermitian_min_eigenvalue(&matrix)?;
    Ok(PickReport {
        matrix,
        min_eig,
        solvable: min_eig >= -tol,
        tol,
    })
}

/// Constructs a Schur-class interpolant as a unitary colligation.
///
/// The Pick matrix is factored as `P = G^* G` from its eigendecomposition
/// (eigenvalues at roundoff level or below are dropped). With `g_ℓ` the ℓ-th
/// block column of `G`, the vectors `λ_ℓ g_ℓ u ⊕ u` and `g_ℓ u ⊕ W_ℓ u` have
/// equal Gram matrices, so `λ_ℓ g_ℓ u ⊕ u ↦ g_ℓ u ⊕ W_ℓ u` extends to a
/// unitary `[A B; C D]`. Its first block equation gives
/// `g_ℓ = (I − λ_ℓ A)^{-1} B`, and the second then reads
/// `W_ℓ = D + λ_ℓ C (I − λ_ℓ A)^{-1} B`.
///
/// When `P` is nearly singular (smallest eigenvalue below `tol`) the exact
/// rank-truncated factorization is tried first; if its interpolant misses
/// the data, the targets are shrunk by `1 − 1e-9` and the construction is
/// repeated.
pub fn solve_np<T: Real>(data: &MatNPData<T>, tol: T) -> Result<Colligation<T>> {
    let report = check_solvable(data, tol)?;
    if !report.solvable {
        return Err(Error::Infeasible(format!(
            "Pick matrix has minimum eigenvalue {:e}",
            report.min_eig.as_f64()
        )));
    }
    let attempt = |work: &MatNPData<T>, pick: &HermitianMatrix<T>| -> Result<Colligation<T>> {
        let col = lurking_isometry(work, pick, tol)?;
        let worst = interpolation_residual(&col, data)?;
        if worst > T::lit(INTERPOLATION_TOL) {
            return Err(Error::NumericalFailure(format!(
                "interpolant misses the data by {:e}",
                worst.as_f64()
            )));
        }
        Ok(col)
    };
    let exact = attempt(data, &report.matrix);
    if exact.is_ok() || report.min_eig >= tol {
        return exact;
    }
    let shrunk = data.shrunk(T::one() - T::lit(BOUNDARY_SHRINK));
    attempt(&shrunk, &pick_matrix(&shrunk))
}

fn lurking_isometry<T: Real>(
    work: &MatNPData<T>,
    pick: &HermitianMatrix<T>,
    tol: T,
) -> Result<Colligation<T>> {
    let n = work.len();
    let m = work.order();
    let nm = n * m;
    let eig = hermitian_eigen(pick);
    let lmax = eig
        .values
        .last()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::one());
    let drop_below = T::lit(64.0) * T::epsilon() * lmax * T::from_usize(nm).unwrap();
    let kept: Vec<usize> = (0..nm).filter(|&i| eig.values[i] > drop_below).collect();
    let dim_h = kept.len();
    // G = Λ^{1/2} V^*, restricted to the kept eigenpairs.
    let g = CMatrix::from_fn(dim_h, nm, |r, c| {
        let i = kept[r];
        eig.vectors[(c, i)].conj() * eig.values[i].sqrt()
    });

    let dim = dim_h + m;
    let mut domain = Vec::with_capacity(nm);
    let mut range = Vec::with_capacity(nm);
    for (l, (&lam, w)) in work.nodes.iter().zip(&work.targets).enumerate() {
        for j in 0..m {
            let col = l * m + j;
            let mut d = vec![C::zero(); dim];
            let mut r = vec![C::zero(); dim];
            for s in 0..dim_h {
                d[s] = lam * g[(s, col)];
                r[s] = g[(s, col)];
            }
            d[dim_h + j] = C::one();
            for i in 0..m {
                r[dim_h + i] = w[(i, j)];
            }
            domain.push(d);
            range.push(r);
        }
    }
    let iso_tol = T::lit(100.0) * tol;
    let u =
        extend_isometry_to_unitary(&domain, &range, dim, dim, iso_tol).map_err(|e| match e {
            Error::NotIsometric { deviation, .. } => Error::NumericalFailure(format!(
                "lurking isometry Gram mismatch {deviation:e} exceeds {:e}",
                iso_tol.as_f64()
            )),
            other => other,
        })?;
    Colligation::from_unitary(&u, dim_h)
}

/// Largest entry deviation `max_k max_ij |F(λ_k) − W_k|`.
pub fn interpolation_residual<T: Real>(col: &Colligation<T>, data: &MatNPData<T>) -> Result<T> {
    let mut worst = T::zero();
    for (&lam, w) in data.nodes.iter().zip(&data.targets) {
        let f = eval_schur(col, lam)?;
        worst = worst.max((f - w.clone()).max_abs());
    }
    Ok(worst)
}
