//! Real-space grid and its dual frequency lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// A cubic grid of `points_per_axis^dim` points in a cell of volume `cell_volume`.
///
/// Axis index `a ∈ [0, P)` maps to the centered offset `a − ⌊P/2⌋`; for odd `P`
/// the offsets are symmetric about zero. Flat indices are row-major over axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    points_per_axis: usize,
    cell_volume: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points_per_axis: usize, cell_volume: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if points_per_axis < 2 {
            return Err(Error::InvalidGrid(format!("points_per_axis {points_per_axis} < 2")));
        }
        if !(cell_volume.is_finite() && cell_volume > 0.0) {
            return Err(Error::InvalidGrid(format!("cell volume {cell_volume} must be positive")));
        }
        Ok(GridSpec { dim, points_per_axis, cell_volume })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn is_symmetric(&self) -> bool {
        self.points_per_axis % 2 == 1
    }

    /// N = points_per_axis^d.
    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Ω^{1/d}.
    pub fn side_length(&self) -> f64 {
        self.cell_volume.powf(1.0 / self.dim as f64)
    }

    /// δ = Ω^{1/d} / points_per_axis.
    pub fn spacing(&self) -> f64 {
        self.side_length() / self.points_per_axis as f64
    }

    /// ⌈log₂ N⌉.
    pub fn qubits_per_register(&self) -> usize {
        let n = self.total_points();
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }

    fn half(&self) -> i64 {
        (self.points_per_axis / 2) as i64
    }

    /// Centered offset of an axis index.
    pub fn axis_offset(&self, a: usize) -> i64 {
        a as i64 - self.half()
    }

    /// Centered integer offsets of flat index `p` (unused axes are 0).
    pub fn offsets(&self, p: usize) -> [i64; 3] {
        let mut out = [0i64; 3];
        let mut rem = p;
        for axis in (0..self.dim).rev() {
            out[axis] = self.axis_offset(rem % self.points_per_axis);
            rem /= self.points_per_axis;
        }
        out
    }

    /// Flat index of a centered offset tuple, if it lies in the window.
    pub fn index_of(&self, offsets: [i64; 3]) -> Option<usize> {
        let mut p = 0usize;
        for (axis, &o) in offsets.iter().enumerate().take(self.dim) {
            let a = o + self.half();
            if a < 0 || a >= self.points_per_axis as i64 {
                return None;
            }
            let _ = axis;
            p = p * self.points_per_axis + a as usize;
        }
        Some(p)
    }

    /// Index of the point with negated offsets (`None` for the unpaired even-grid edge).
    pub fn mirror(&self, p: usize) -> Option<usize> {
        let o = self.offsets(p);
        self.index_of([-o[0], -o[1], -o[2]])
    }

    /// r_p = offset · Ω^{1/d} / points_per_axis.
    pub fn position(&self, p: usize) -> [f64; 3] {
        let d = self.spacing();
        self.offsets(p).map(|o| o as f64 * d)
    }

    /// k_p = 2π · offset / Ω^{1/d}.
    pub fn frequency(&self, p: usize) -> [f64; 3] {
        let scale = 2.0 * PI / self.side_length();
        self.offsets(p).map(|o| o as f64 * scale)
    }

    /// Unitary centered DFT along one axis: `F[ν, p] = exp(−2πi ν p / P) / √P`.
    pub fn axis_dft(&self) -> CMatrix {
        let n = self.points_per_axis;
        let norm = 1.0 / (n as f64).sqrt();
        CMatrix::from_fn(n, n, |nu, p| {
            let phase = -2.0 * PI * (self.axis_offset(nu) * self.axis_offset(p)) as f64 / n as f64;
            C64::from_polar(norm, phase)
        })
    }

    /// Full N×N centered DFT (Kronecker product over axes).
    pub fn dft(&self) -> CMatrix {
        let f = self.axis_dft();
        let mut full = f.clone();
        for _ in 1..self.dim {
            full = full.kronecker(&f);
        }
        full
    }
}

pub fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
