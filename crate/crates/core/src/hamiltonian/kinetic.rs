use crate::grid::GridSpec;
use crate::linalg::{CMatrix, CVector, C64};
use crate::state::FirstQuantizedState;

/// ‖k_p‖²/2 for every frequency index, in the same flat ordering as grid points.
pub fn kinetic_phase_table(grid: &GridSpec) -> Vec<f64> {
    (0..grid.total_points()).map(|p| grid.frequency(p).iter().map(|k| k * k).sum::<f64>() / 2.0).collect()
}

fn conjugate_by_dft(grid: &GridSpec, diag: impl Fn(f64) -> C64) -> CMatrix {
    let f = grid.dft();
    let d = CVector::from_iterator(grid.total_points(), kinetic_phase_table(grid).into_iter().map(diag));
    f.adjoint() * CMatrix::from_diagonal(&d) * f
}

/// Single-register kinetic operator F† diag(‖k‖²/2) F.
pub fn kinetic_matrix(grid: &GridSpec) -> CMatrix {
    conjugate_by_dft(grid, |e| C64::new(e, 0.0))
}

/// Single-register propagator F† diag(exp(−i‖k‖²Δt/2)) F.
pub fn kinetic_propagator(grid: &GridSpec, dt: f64) -> CMatrix {
    conjugate_by_dft(grid, |e| C64::from_polar(1.0, -e * dt))
}

/// exp(−iTΔt) applied register by register.
pub fn apply_kinetic_evolution(state: &FirstQuantizedState, dt: f64) -> FirstQuantizedState {
    let prop = kinetic_propagator(state.grid(), dt);
    let mut out = state.clone();
    for reg in 0..state.eta() {
        out.apply_register_matrix(reg, &prop);
    }
    out
}

/// ⟨ψ|T|ψ⟩ evaluated in the momentum basis of each register.
pub fn kinetic_expectation(state: &FirstQuantizedState) -> f64 {
    let table = kinetic_phase_table(state.grid());
    let f = state.grid().dft();
    let mut total = 0.0;
    for reg in 0..state.eta() {
        let mut momentum = state.clone();
        momentum.apply_register_matrix(reg, &f);
        let n = state.grid().total_points();
        for (idx, z) in momentum.amplitudes().iter().enumerate() {
            let nu = momentum.config_of(idx)[reg];
            if nu < n {
                total += z.norm_sqr() * table[nu];
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermiticity_deviation};
    use std::f64::consts::PI;

    #[test]
    fn phase_table_examples() {
        let g = GridSpec::new(3, 3, 27.0).unwrap();
        let t = kinetic_phase_table(&g);
        let center = g.index_of([0, 0, 0]).unwrap();
        assert_eq!(t[center], 0.0);
        let p = g.index_of([1, 0, 0]).unwrap();
        let expected = (2.0 * PI / 3.0).powi(2) / 2.0;
        assert!((t[p] - expected).abs() < 1e-12);
        assert!((t[p] - 2.19325).abs() < 1e-5);
        for q in 0..27 {
            assert_eq!(t[q], t[g.mirror(q).unwrap()]);
        }
    }

    #[test]
    fn kinetic_matrix_is_hermitian() {
        let g = GridSpec::new(2, 3, 5.0).unwrap();
        assert!(hermiticity_deviation(&kinetic_matrix(&g)) < 1e-12);
    }

    #[test]
    fn zero_step_is_identity_and_plane_wave_is_eigenstate() {
        let g = GridSpec::new(1, 5, 5.0).unwrap();
        let s = FirstQuantizedState::basis(&g, &[2]).unwrap();
        let same = apply_kinetic_evolution(&s, 0.0);
        for (a, b) in same.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
        // Plane wave with offset ν = 1.
        let nu = g.index_of([1, 0, 0]).unwrap();
        let k = g.frequency(nu)[0];
        let wave =
            FirstQuantizedState::from_fn(&g, 1, |cfg| C64::from_polar(1.0 / 5f64.sqrt(), k * g.position(cfg[0])[0]))
                .unwrap();
        let dt = 0.37;
        let evolved = apply_kinetic_evolution(&wave, dt);
        let phase = C64::from_polar(1.0, -k * k * dt / 2.0);
        for (a, b) in evolved.amplitudes().iter().zip(wave.amplitudes()) {
            assert!((a - b * phase).norm() < 1e-13);
        }
        assert!((kinetic_expectation(&wave) - k * k / 2.0).abs() < 1e-12);
    }

    #[test]
    fn dft_round_trip() {
        let g = GridSpec::new(2, 3, 4.0).unwrap();
        let f = g.dft();
        let back = f.adjoint() * &f;
        assert!((back - CMatrix::identity(9, 9)).norm() < 1e-12);
        let _ = c(0.0, 0.0);
    }
}
