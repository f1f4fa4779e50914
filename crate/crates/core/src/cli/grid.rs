//! CSV grids over a rectangle of the complex plane.

use std::io::Write;

use crate::error::{Error, Result};
use crate::mu::mu_diag;
use crate::numeric::CMatrix;
use crate::scalar::{c64, C};
use crate::tetrablock::{in_closed_tetrablock, TetraPoint};

/// Relative tolerance of the μ values in `mu-levels`.
pub const LEVEL_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Rect {
    pub fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.re, self.im] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidInput(format!(
                    "malformed bounds [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Grid points, real part outer, imaginary part inner.
    pub fn points(&self) -> impl Iterator<Item = C<f64>> + '_ {
        let axis = |(lo, hi): (f64, f64), n: usize, k: usize| {
            if n < 2 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        };
        (0..self.nx).flat_map(move |i| {
            (0..self.ny).map(move |j| c64(axis(self.re, self.nx, i), axis(self.im, self.ny, j)))
        })
    }
}

/// Membership verdicts with coordinate `vary` (0, 1 or 2) replaced by the
/// grid point.
pub fn tetra_slice<W: Write>(
    out: W,
    rect: &Rect,
    fixed: TetraPoint<f64>,
    vary: usize,
) -> Result<()> {
    rect.validate()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "verdict"]).map_err(csv_err)?;
    for z in rect.points() {
        let mut coords = fixed.as_array();
        coords[vary] = z;
        let verdict = in_closed_tetrablock(&TetraPoint::new(coords[0], coords[1], coords[2]));
        w.write_record([z.re.to_string(), z.im.to_string(), verdict.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
}

/// `μ_Diag` of `base` with entry `vary = (i, j)` replaced by the grid point.
pub fn mu_levels<W: Write>(
    out: W,
    rect: &Rect,
    base: &CMatrix<f64>,
    vary: (usize, usize),
) -> Result<()> {
    rect.validate()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "value"]).map_err(csv_err)?;
    for z in rect.points() {
        let mut a = base.clone();
        a[vary] = z;
        let v = mu_diag(&a, LEVEL_REL_TOL)?;
        w.write_record([z.re.to_string(), z.im.to_string(), v.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(n: usize) -> Rect {
        Rect {
            re: (-1.0, 1.0),
            im: (-1.0, 1.0),
            nx: n,
            ny: n,
        }
    }

    #[test]
    fn empty_grid_is_header_only() {
        let mut buf = Vec::new();
        tetra_slice(&mut buf, &rect(0), TetraPoint::origin(), 0).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "re,im,verdict\n");
    }

    #[test]
    fn slice_matches_membership() {
        let mut buf = Vec::new();
        tetra_slice(&mut buf, &rect(50), TetraPoint::origin(), 0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 2500);
        for row in rows {
            let f: Vec<&str> = row.split(',').collect();
            let z = c64(f[0].parse().unwrap(), f[1].parse().unwrap());
            let expect = in_closed_tetrablock(&TetraPoint::new(z, c64(0.0, 0.0), c64(0.0, 0.0)));
            assert_eq!(f[2], expect.to_string());
        }
    }

    #[test]
    fn diagonal_levels() {
        let base = CMatrix::diag(&[c64(0.0, 0.0), c64(0.5, 0.0)]);
        let r = Rect {
            re: (-1.0, 1.0),
            im: (0.0, 0.0),
            nx: 21,
            ny: 1,
        };
        let mut buf = Vec::new();
        mu_levels(&mut buf, &r, &base, (0, 0)).unwrap();
        for row in String::from_utf8(buf).unwrap().lines().skip(1) {
            let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
            let expect = f[0].abs().max(0.5);
            assert!((f[2] - expect).abs() <= 1e-6 * expect, "{row}");
        }
    }

    #[test]
    fn inverted_bounds_are_rejected() {
        let mut r = rect(3);
        r.re = (1.0, -1.0);
        assert!(tetra_slice(Vec::new(), &r, TetraPoint::origin(), 0).is_err());
    }
}
