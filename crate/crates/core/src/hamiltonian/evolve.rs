use serde::{Deserialize, Serialize};

use super::kinetic::{kinetic_expectation, kinetic_propagator};
use super::potential::{CoulombKernel, NuclearConfig, PotentialTable};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::state::FirstQuantizedState;

/// Amplitudes below this on a configuration where the bare pair kernel diverges are
/// treated as structurally zero (fermionic states never populate such configurations).
const SINGULAR_AMPLITUDE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductFormula {
    LieTrotter,
    Strang,
    Suzuki4,
}

impl ProductFormula {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            1 => Ok(ProductFormula::LieTrotter),
            2 => Ok(ProductFormula::Strang),
            4 => Ok(ProductFormula::Suzuki4),
            _ => Err(Error::InvalidArgument(format!("product-formula order must be 1, 2 or 4, got {order}"))),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            ProductFormula::LieTrotter => 1,
            ProductFormula::Strang => 2,
            ProductFormula::Suzuki4 => 4,
        }
    }

    /// Fragments of one step of length `dt`, in application order.
    fn step(self, dt: f64, out: &mut Vec<Fragment>) {
        match self {
            ProductFormula::LieTrotter => {
                out.push(Fragment::Potential(dt));
                out.push(Fragment::Kinetic(dt));
            }
            ProductFormula::Strang => strang(dt, out),
            ProductFormula::Suzuki4 => {
                let s = 1.0 / (4.0 - 4f64.powf(1.0 / 3.0));
                for w in [s, s, 1.0 - 4.0 * s, s, s] {
                    strang(w * dt, out);
                }
            }
        }
    }
}

fn strang(dt: f64, out: &mut Vec<Fragment>) {
    out.push(Fragment::Potential(dt / 2.0));
    out.push(Fragment::Kinetic(dt));
    out.push(Fragment::Potential(dt / 2.0));
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Fragment {
    Kinetic(f64),
    Potential(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionPlan {
    pub total_time: f64,
    pub steps: usize,
    pub formula: ProductFormula,
}

impl EvolutionPlan {
    pub fn new(total_time: f64, steps: usize, order: u32) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if !total_time.is_finite() {
            return Err(Error::InvalidArgument("total time must be finite".into()));
        }
        Ok(EvolutionPlan { total_time, steps, formula: ProductFormula::from_order(order)? })
    }

    pub fn step_size(&self) -> f64 {
        self.total_time / self.steps as f64
    }

    /// Full fragment sequence with adjacent fragments of the same kind merged.
    fn fragments(&self) -> Vec<Fragment> {
        let mut raw = Vec::new();
        for _ in 0..self.steps {
            self.formula.step(self.step_size(), &mut raw);
        }
        let mut merged: Vec<Fragment> = Vec::with_capacity(raw.len());
        for f in raw {
            match (merged.last_mut(), f) {
                (Some(Fragment::Kinetic(a)), Fragment::Kinetic(b)) => *a += b,
                (Some(Fragment::Potential(a)), Fragment::Potential(b)) => *a += b,
                _ => merged.push(f),
            }
        }
        merged
    }
}

/// Diagonal of U + V over the full amplitude buffer, with singular entries marked.
struct PotentialDiagonal {
    values: Vec<f64>,
    singular: Vec<bool>,
    zero: bool,
}

impl PotentialDiagonal {
    fn new(state: &FirstQuantizedState, nuclei: &NuclearConfig, kernel: CoulombKernel) -> Result<Self> {
        let table = PotentialTable::new(state.grid(), nuclei, kernel)?;
        let len = state.amplitudes().len();
        let mut values = vec![0.0; len];
        let mut singular = vec![false; len];
        for idx in state.physical_indices() {
            let cfg = state.config_of(idx);
            match table.value(&cfg) {
                Ok(v) => values[idx] = v,
                Err(_) => singular[idx] = true,
            }
        }
        let zero = values.iter().all(|&v| v == 0.0) && !singular.iter().any(|&s| s);
        Ok(PotentialDiagonal { values, singular, zero })
    }

    fn check_singular(&self, amps: &[C64]) -> Result<()> {
        for (idx, z) in amps.iter().enumerate() {
            if self.singular[idx] && z.norm() > SINGULAR_AMPLITUDE_TOL {
                return Err(Error::SingularPotential(format!(
                    "amplitude {:.3e} on a configuration with coincident electrons",
                    z.norm()
                )));
            }
        }
        Ok(())
    }

    fn apply(&self, amps: &mut [C64], dt: f64) {
        for ((z, &v), &s) in amps.iter_mut().zip(&self.values).zip(&self.singular) {
            if !s {
                *z *= C64::from_polar(1.0, -v * dt);
            }
        }
    }
}

/// exp(−i(U+V)Δt) as a diagonal phase.
pub fn apply_potential_evolution(
    state: &FirstQuantizedState,
    dt: f64,
    nuclei: &NuclearConfig,
    kernel: CoulombKernel,
) -> Result<FirstQuantizedState> {
    let diag = PotentialDiagonal::new(state, nuclei, kernel)?;
    diag.check_singular(state.amplitudes())?;
    let mut out = state.clone();
    diag.apply(out.amplitudes_mut(), dt);
    Ok(out)
}

/// Reusable split-operator propagator for one (grid, η, nuclei, kernel) setting.
pub struct SplitOperator {
    diag: PotentialDiagonal,
    eta: usize,
    propagators: Vec<(f64, CMatrix)>,
}

impl SplitOperator {
    pub fn new(template: &FirstQuantizedState, nuclei: &NuclearConfig, kernel: CoulombKernel) -> Result<Self> {
        Ok(SplitOperator {
            diag: PotentialDiagonal::new(template, nuclei, kernel)?,
            eta: template.eta(),
            propagators: Vec::new(),
        })
    }

    fn kinetic(&mut self, state: &mut FirstQuantizedState, dt: f64) {
        let pos = match self.propagators.iter().position(|(t, _)| *t == dt) {
            Some(i) => i,
            None => {
                self.propagators.push((dt, kinetic_propagator(state.grid(), dt)));
                self.propagators.len() - 1
            }
        };
        let prop = &self.propagators[pos].1;
        for reg in 0..self.eta {
            state.apply_register_matrix(reg, prop);
        }
    }

    pub fn evolve(&mut self, state: &FirstQuantizedState, plan: &EvolutionPlan) -> Result<FirstQuantizedState> {
        if state.eta() != self.eta || state.amplitudes().len() != self.diag.values.len() {
            return Err(Error::DimensionMismatch { expected: self.diag.values.len(), got: state.amplitudes().len() });
        }
        let mut out = state.clone();
        for frag in plan.fragments() {
            match frag {
                Fragment::Kinetic(dt) => self.kinetic(&mut out, dt),
                Fragment::Potential(_) if self.diag.zero => {}
                Fragment::Potential(dt) => {
                    self.diag.check_singular(out.amplitudes())?;
                    self.diag.apply(out.amplitudes_mut(), dt);
                }
            }
        }
        Ok(out)
    }
}

/// Product-formula approximation to exp(−iHt)|ψ⟩ (nuclear repulsion, a global phase, omitted).
pub fn evolve(
    state: &FirstQuantizedState,
    plan: &EvolutionPlan,
    nuclei: &NuclearConfig,
    kernel: CoulombKernel,
) -> Result<FirstQuantizedState> {
    SplitOperator::new(state, nuclei, kernel)?.evolve(state, plan)
}

/// ⟨T⟩ + ⟨U + V⟩ + nuclear repulsion.
pub fn total_energy(state: &FirstQuantizedState, nuclei: &NuclearConfig, kernel: CoulombKernel) -> Result<f64> {
    let diag = PotentialDiagonal::new(state, nuclei, kernel)?;
    diag.check_singular(state.amplitudes())?;
    let potential: f64 = state.amplitudes().iter().zip(&diag.values).map(|(z, v)| z.norm_sqr() * v).sum();
    Ok(kinetic_expectation(state) + potential + nuclei.repulsion()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::hamiltonian::{apply_kinetic_evolution, Nucleus};
    use crate::linalg::c;

    fn diff(a: &FirstQuantizedState, b: &FirstQuantizedState) -> f64 {
        a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn fragment_merging() {
        let plan = EvolutionPlan::new(1.0, 3, 2).unwrap();
        let f = plan.fragments();
        // V/2 T V T V T V/2
        assert_eq!(f.len(), 7);
        assert_eq!(f[0], Fragment::Potential(1.0 / 6.0));
        assert!(matches!(f[2], Fragment::Potential(x) if (x - 1.0 / 3.0).abs() < 1e-15));
        let total: f64 = f.iter().map(|fr| if let Fragment::Kinetic(t) = fr { *t } else { 0.0 }).sum();
        assert!((total - 1.0).abs() < 1e-14);
        let plan4 = EvolutionPlan::new(1.0, 2, 4).unwrap();
        let total: f64 =
            plan4.fragments().iter().map(|fr| if let Fragment::Potential(t) = fr { *t } else { 0.0 }).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plan_validation() {
        assert!(EvolutionPlan::new(1.0, 0, 2).is_err());
        assert!(EvolutionPlan::new(1.0, 1, 3).is_err());
    }

    #[test]
    fn potential_phase_is_semigroup() {
        let g = GridSpec::new(1, 5, 5.0).unwrap();
        let nuc = NuclearConfig::new(vec![Nucleus { charge: 1, position: [0.3, 0.0, 0.0] }]).unwrap();
        let k = CoulombKernel::Bare;
        let psi = FirstQuantizedState::slater_oracle(
            &[crate::state::OrbitalVector::basis(5, 0), crate::state::OrbitalVector::basis(5, 3)],
            &g,
        )
        .unwrap();
        let a =
            apply_potential_evolution(&apply_potential_evolution(&psi, 0.3, &nuc, k).unwrap(), 0.4, &nuc, k).unwrap();
        let b = apply_potential_evolution(&psi, 0.7, &nuc, k).unwrap();
        assert!(diff(&a, &b) < 1e-12);
        assert!(diff(&apply_potential_evolution(&psi, 0.0, &nuc, k).unwrap(), &psi) == 0.0);
        for (x, y) in a.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((x.norm() - y.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn coincident_amplitude_is_rejected() {
        let g = GridSpec::new(1, 4, 4.0).unwrap();
        let psi = FirstQuantizedState::basis(&g, &[1, 1]).unwrap();
        let none = NuclearConfig::empty();
        assert!(matches!(
            apply_potential_evolution(&psi, 0.1, &none, CoulombKernel::Bare),
            Err(Error::SingularPotential(_))
        ));
        assert!(apply_potential_evolution(&psi, 0.1, &none, CoulombKernel::softened(0.1).unwrap()).is_ok());
    }

    #[test]
    fn free_single_particle_matches_kinetic() {
        let g = GridSpec::new(1, 7, 9.0).unwrap();
        let psi = FirstQuantizedState::from_fn(&g, 1, |cfg| c(1.0 + cfg[0] as f64, 0.5 * cfg[0] as f64)).unwrap();
        let mut psi = psi;
        psi.normalize().unwrap();
        let none = NuclearConfig::empty();
        for (steps, order) in [(1, 1), (3, 2), (5, 4)] {
            let plan = EvolutionPlan::new(0.8, steps, order).unwrap();
            let a = evolve(&psi, &plan, &none, CoulombKernel::Bare).unwrap();
            let b = apply_kinetic_evolution(&psi, 0.8);
            assert!(diff(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn total_energy_of_uniform_state() {
        let g = GridSpec::new(1, 5, 5.0).unwrap();
        let psi = FirstQuantizedState::from_fn(&g, 1, |_| c(1.0 / 5f64.sqrt(), 0.0)).unwrap();
        let e = total_energy(&psi, &NuclearConfig::empty(), CoulombKernel::Bare).unwrap();
        assert!(e.abs() < 1e-12);
    }
}
