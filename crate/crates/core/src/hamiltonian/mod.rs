//! Grid Hamiltonian H = T + U + V + (nuclear repulsion) and split-operator
//! product-formula evolution of first-quantized states.

mod dense;
mod evolve;
mod kinetic;
mod potential;

pub use dense::{dense_hamiltonian, exact_evolution};
pub use evolve::{apply_potential_evolution, evolve, total_energy, EvolutionPlan, ProductFormula, SplitOperator};
pub use kinetic::{
    apply_kinetic_evolution, kinetic_expectation, kinetic_matrix, kinetic_phase_table, kinetic_propagator,
};
pub use potential::{potential_diagonal, CoulombKernel, NuclearConfig, Nucleus, PotentialTable};
