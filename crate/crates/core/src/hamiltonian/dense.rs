use std::f64::consts::PI;

use super::potential::{CoulombKernel, NuclearConfig, PotentialTable};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::linalg::{expm_hermitian, CMatrix, CVector, C64};
use crate::state::FirstQuantizedState;

/// Largest Hilbert-space dimension for which the dense oracle is built.
const DENSE_LIMIT: usize = 1 << 12;

/// Kinetic matrix from the plane-wave sum T_pq = (1/N) Σ_ν e^{ik_ν·(r_p − r_q)} ‖k_ν‖²/2,
/// written out directly rather than through the DFT factorization.
fn kinetic_by_sum(grid: &GridSpec) -> CMatrix {
    let n = grid.total_points();
    let l = grid.side_length();
    let k: Vec<[f64; 3]> = (0..n)
        .map(|nu| {
            let o = grid.offsets(nu);
            [2.0 * PI * o[0] as f64 / l, 2.0 * PI * o[1] as f64 / l, 2.0 * PI * o[2] as f64 / l]
        })
        .collect();
    let r: Vec<[f64; 3]> = (0..n).map(|p| grid.position(p)).collect();
    CMatrix::from_fn(n, n, |p, q| {
        let mut s = C64::new(0.0, 0.0);
        for kv in &k {
            let phase: f64 = (0..3).map(|a| kv[a] * (r[p][a] - r[q][a])).sum();
            let e: f64 = kv.iter().map(|x| x * x).sum::<f64>() / 2.0;
            s += C64::from_polar(e, phase);
        }
        s / n as f64
    })
}

/// Dense T + U + V on the full 2^{nη}-dimensional register space. Padding states
/// carry no energy; bare-kernel coincident configurations get a zero diagonal.
pub fn dense_hamiltonian(
    grid: &GridSpec,
    eta: usize,
    nuclei: &NuclearConfig,
    kernel: CoulombKernel,
) -> Result<CMatrix> {
    let template = FirstQuantizedState::zeros(grid, eta)?;
    let dim = template.amplitudes().len();
    if dim > DENSE_LIMIT {
        return Err(Error::BruteForceLimitExceeded(format!(
            "dense Hamiltonian of dimension {dim} exceeds {DENSE_LIMIT}"
        )));
    }
    let t = kinetic_by_sum(grid);
    let table = PotentialTable::new(grid, nuclei, kernel)?;
    let n = grid.total_points();
    let mut h = CMatrix::zeros(dim, dim);
    for col in template.physical_indices() {
        let cfg = template.config_of(col);
        h[(col, col)] += C64::new(table.value_regular(&cfg), 0.0);
        for reg in 0..eta {
            let mut row_cfg = cfg.clone();
            for p in 0..n {
                row_cfg[reg] = p;
                let row = template.index_of(&row_cfg);
                h[(row, col)] += t[(p, cfg[reg])];
            }
        }
    }
    Ok(h)
}

/// exp(−iHt)|ψ⟩ by Hermitian eigendecomposition of the dense Hamiltonian.
pub fn exact_evolution(
    state: &FirstQuantizedState,
    time: f64,
    nuclei: &NuclearConfig,
    kernel: CoulombKernel,
) -> Result<FirstQuantizedState> {
    let h = dense_hamiltonian(state.grid(), state.eta(), nuclei, kernel)?;
    let u = expm_hermitian(&h, time);
    let v = CVector::from_column_slice(state.amplitudes());
    FirstQuantizedState::from_amplitudes(state.grid(), state.eta(), (u * v).as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::kinetic_matrix;
    use crate::linalg::{hermiticity_deviation, max_abs};

    #[test]
    fn kinetic_sum_matches_dft_product() {
        for g in
            [GridSpec::new(1, 5, 7.0).unwrap(), GridSpec::new(2, 3, 4.0).unwrap(), GridSpec::new(1, 4, 4.0).unwrap()]
        {
            let a = kinetic_by_sum(&g);
            let b = kinetic_matrix(&g);
            assert!(max_abs(&(a - b)) < 1e-12);
        }
    }

    #[test]
    fn dense_h_is_hermitian() {
        let g = GridSpec::new(1, 4, 4.0).unwrap();
        let h = dense_hamiltonian(&g, 2, &NuclearConfig::empty(), CoulombKernel::Bare).unwrap();
        assert_eq!(h.nrows(), 16);
        assert!(hermiticity_deviation(&h) < 1e-13);
    }
}
