//! Exhaustive checks of the Clifford two- and three-fold twirl identities.

use super::clifford::enumerate_group;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, C64};

const TOLERANCE: f64 = 1e-10;

fn check_dims(n: usize, ms: &[&CMatrix]) -> Result<usize> {
    if n == 0 || n > 2 {
        return Err(Error::EnumerationUnavailable(n));
    }
    let d = 1usize << n;
    for m in ms {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: m.nrows() });
        }
    }
    Ok(d)
}

/// E_U U†|x⟩⟨x|U · Π_m ⟨x|U M U†|x⟩ for fixed outcome x.
fn twirl(n: usize, x: usize, ops: &[&CMatrix]) -> Result<CMatrix> {
    let group = enumerate_group(n)?;
    let d = 1usize << n;
    let mut acc = CMatrix::zeros(d, d);
    for u in group {
        let row = u.row(x);
        let mut weight = C64::new(1.0, 0.0);
        for m in ops {
            // ⟨x|U M U†|x⟩
            weight *= (row * *m * row.adjoint())[(0, 0)];
        }
        let ket = row.adjoint();
        acc += ket * row * weight;
    }
    Ok(acc / C64::new(group.len() as f64, 0.0))
}

/// max_x ‖E_U U†|x⟩⟨x|U⟨x|UAU†|x⟩ − (A + tr(A)·I)/(2ⁿ(2ⁿ+1))‖_max.
pub fn two_fold_deviation(n: usize, a: &CMatrix) -> Result<f64> {
    let d = check_dims(n, &[a])?;
    let df = d as f64;
    let rhs = (a + CMatrix::identity(d, d) * a.trace()) / C64::new(df * (df + 1.0), 0.0);
    let mut worst: f64 = 0.0;
    for x in 0..d {
        worst = worst.max(max_abs(&(twirl(n, x, &[a])? - &rhs)));
    }
    Ok(worst)
}

/// Three-fold analogue, valid for B, C with nonzero trace.
pub fn three_fold_deviation(n: usize, b: &CMatrix, c: &CMatrix) -> Result<f64> {
    let d = check_dims(n, &[b, c])?;
    let df = d as f64;
    let id = CMatrix::identity(d, d);
    let bc = b * c;
    let cb = c * b;
    let rhs = (&id * (bc.trace() + b.trace() * c.trace()) + b * c.trace() + c * b.trace() + bc + cb)
        / C64::new(df * (df + 1.0) * (df + 2.0), 0.0);
    let mut worst: f64 = 0.0;
    for x in 0..d {
        worst = worst.max(max_abs(&(twirl(n, x, &[b, c])? - &rhs)));
    }
    Ok(worst)
}

/// Both identities hold to within 1e-10 for every outcome.
pub fn twirl_identity_check(n: usize, a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<bool> {
    Ok(two_fold_deviation(n, a)? < TOLERANCE && three_fold_deviation(n, b, c)? < TOLERANCE)
}
