//! JSON problem and certificate documents. Complex numbers are `[re, im]`,
//! matrices are arrays of rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{Branch, Infeasibility, VerificationReport};
use crate::numeric::CMatrix;
use crate::pick::Colligation;
use crate::scalar::{c64, C};
use crate::synthesis::MuReport;
use crate::tetrablock::TetraPoint;

pub type Cx = [f64; 2];
pub type Mat = Vec<Vec<Cx>>;

/// Input document, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemFile {
    Membership {
        point: [Cx; 3],
    },
    MuValue {
        matrix: Mat,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rel_tol: Option<f64>,
    },
    TetraInterp {
        nodes: Vec<Cx>,
        targets: Vec<[Cx; 3]>,
    },
    MuSynthesis {
        nodes: Vec<Cx>,
        targets: Vec<Mat>,
    },
    Realize {
        colligation: ColligationJson,
        points: Vec<Cx>,
    },
    Lift {
        colligation: ColligationJson,
        points: Vec<Cx>,
    },
    Verify {
        certificate: Box<CertificateFile>,
    },
}

impl ProblemFile {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Membership { .. } => "membership",
            Self::MuValue { .. } => "mu_value",
            Self::TetraInterp { .. } => "tetra_interp",
            Self::MuSynthesis { .. } => "mu_synthesis",
            Self::Realize { .. } => "realize",
            Self::Lift { .. } => "lift",
            Self::Verify { .. } => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColligationJson {
    #[serde(rename = "dimH")]
    pub dim_h: usize,
    #[serde(rename = "A")]
    pub a: Mat,
    #[serde(rename = "B")]
    pub b: Mat,
    #[serde(rename = "C")]
    pub c: Mat,
    #[serde(rename = "D")]
    pub d: Mat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub status: String,
    pub problem: ProblemFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<ReasonJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportJson>,
    pub meta: Meta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateBody {
    pub b: Vec<Cx>,
    pub c: Vec<Cx>,
    pub branches: Vec<String>,
    pub min_eig: f64,
    pub colligation: ColligationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_poly: Option<Vec<Cx>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReasonJson {
    TargetOutside {
        node: usize,
        defect: f64,
        message: String,
    },
    ScalarPick {
        coordinate: usize,
        min_eig: f64,
        message: String,
    },
}

/// Outcome of an unsuccessful search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchJson {
    #[serde(with = "nullable")]
    pub best_objective: f64,
    pub starts_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub tetra: TetraReportJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuReportJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetraReportJson {
    #[serde(with = "nullable")]
    pub max_product_residual: f64,
    #[serde(with = "nullable")]
    pub min_eig: f64,
    #[serde(with = "nullable")]
    pub unitarity_residual: f64,
    #[serde(with = "nullable")]
    pub max_node_residual: f64,
    #[serde(with = "nullable")]
    pub max_membership_defect: f64,
    #[serde(with = "nullable")]
    pub max_boundary_defect: f64,
    pub boundary_skipped: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuReportJson {
    #[serde(with = "nullable")]
    pub max_node_residual: f64,
    #[serde(with = "nullable")]
    pub max_mu_excess: f64,
    pub grid_n: usize,
    #[serde(with = "nullable")]
    pub min_node_separation: f64,
    pub close_nodes_warning: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub grid: usize,
    pub version: String,
    /// Excluded from determinism comparisons.
    pub wall_time_s: f64,
}

/// Non-finite floats are written as `null` and read back as NaN.
mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

pub fn to_c(x: Cx) -> Result<C<f64>> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(c64(x[0], x[1]))
    } else {
        Err(Error::InvalidInput("non-finite complex entry".into()))
    }
}

pub fn from_c(z: C<f64>) -> Cx {
    [z.re, z.im]
}

pub fn to_cs(xs: &[Cx]) -> Result<Vec<C<f64>>> {
    xs.iter().map(|&x| to_c(x)).collect()
}

pub fn from_cs(zs: &[C<f64>]) -> Vec<Cx> {
    zs.iter().map(|&z| from_c(z)).collect()
}

/// Parses a matrix of the given shape; zero-row matrices are written `[]`.
pub fn to_matrix(m: &Mat, rows: usize, cols: usize, name: &str) -> Result<CMatrix<f64>> {
    let shape_err = || Error::InvalidInput(format!("{name} must be {rows}x{cols}"));
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(shape_err());
    }
    let data = m
        .iter()
        .flatten()
        .map(|&x| to_c(x))
        .collect::<Result<Vec<_>>>()?;
    CMatrix::from_vec(rows, cols, data)
}

pub fn square_matrix(m: &Mat, name: &str) -> Result<CMatrix<f64>> {
    to_matrix(m, m.len(), m.len(), name)
}

pub fn from_matrix(m: &CMatrix<f64>) -> Mat {
    (0..m.rows()).map(|i| from_cs(m.row(i))).collect()
}

pub fn to_point(p: &[Cx; 3]) -> Result<TetraPoint<f64>> {
    Ok(TetraPoint::new(to_c(p[0])?, to_c(p[1])?, to_c(p[2])?))
}

pub fn from_point(p: &TetraPoint<f64>) -> [Cx; 3] {
    [from_c(p.x1), from_c(p.x2), from_c(p.x3)]
}

pub fn to_colligation(j: &ColligationJson) -> Result<Colligation<f64>> {
    let h = j.dim_h;
    let m = j.d.len();
    Colligation::from_blocks(
        to_matrix(&j.a, h, h, "A")?,
        to_matrix(&j.b, h, m, "B")?,
        to_matrix(&j.c, m, h, "C")?,
        to_matrix(&j.d, m, m, "D")?,
    )
}

pub fn from_colligation(col: &Colligation<f64>) -> ColligationJson {
    ColligationJson {
        dim_h: col.dim_h(),
        a: from_matrix(col.a()),
        b: from_matrix(col.b()),
        c: from_matrix(col.c()),
        d: from_matrix(col.d()),
    }
}

pub fn branches_from_names(names: &[String]) -> Result<Vec<Branch>> {
    names
        .iter()
        .map(|s| {
            Branch::from_name(s).ok_or_else(|| Error::InvalidInput(format!("unknown branch {s:?}")))
        })
        .collect()
}

pub fn reason_json(r: &Infeasibility<f64>) -> ReasonJson {
    let message = r.to_string();
    match *r {
        Infeasibility::TargetOutside { node, defect } => ReasonJson::TargetOutside {
            node,
            defect,
            message,
        },
        Infeasibility::ScalarPick {
            coordinate,
            min_eig,
        } => ReasonJson::ScalarPick {
            coordinate,
            min_eig,
            message,
        },
    }
}

pub fn tetra_report_json(r: &VerificationReport<f64>) -> TetraReportJson {
    TetraReportJson {
        max_product_residual: r.max_product_residual,
        min_eig: r.min_eig,
        unitarity_residual: r.unitarity_residual,
        max_node_residual: r.max_node_residual,
        max_membership_defect: r.max_membership_defect,
        max_boundary_defect: r.max_boundary_defect,
        boundary_skipped: r.boundary_skipped,
        passed: r.passed,
    }
}

pub fn mu_report_json(r: &MuReport<f64>) -> MuReportJson {
    MuReportJson {
        max_node_residual: r.max_node_residual,
        max_mu_excess: r.max_mu_excess,
        grid_n: r.grid_n,
        min_node_separation: r.min_node_separation,
        close_nodes_warning: r.close_nodes_warning,
        passed: r.passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_round_trips() {
        let docs = [
            r#"{"kind":"membership","point":[[0.0,0.0],[0.5,-0.25],[0.0,1.0]]}"#,
            r#"{"kind":"mu_value","matrix":[[[0.0,0.0],[2.0,0.0]],[[2.0,0.0],[0.0,0.0]]]}"#,
            r#"{"kind":"tetra_interp","nodes":[[0.0,0.0],[0.5,0.0]],"targets":[[[0.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.1,0.0],[0.0,0.0],[0.0,0.0]]]}"#,
        ];
        for d in docs {
            let p: ProblemFile = serde_json::from_str(d).unwrap();
            assert_eq!(serde_json::to_string(&p).unwrap(), d);
        }
    }

    #[test]
    fn nonfinite_report_values_become_null() {
        let s = SearchJson {
            best_objective: f64::NEG_INFINITY,
            starts_used: 3,
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"best_objective":null,"starts_used":3}"#);
        let back: SearchJson = serde_json::from_str(&text).unwrap();
        assert!(back.best_objective.is_nan());
    }

    #[test]
    fn empty_state_space_colligation() {
        let col = Colligation::constant(CMatrix::identity(2)).unwrap();
        let j = from_colligation(&col);
        assert!(j.a.is_empty() && j.b.is_empty() && j.c == vec![Vec::<Cx>::new(); 2]);
        assert_eq!(to_colligation(&j).unwrap(), col);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let m: Mat = vec![vec![[1.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]];
        assert!(square_matrix(&m, "W").is_err());
    }
}
