//! Classical shadows with per-register uniform Clifford measurements and the
//! restricted-sum k-RDM estimator.

mod clifford;
mod estimator;
mod sampling;
mod twirl;

pub use clifford::{
    build_unitary, clifford_unitary, enumerate_group, group_order, pauli_matrix, sample_clifford, sample_clifford_id,
    symplectic_count, symplectic_matrix, CliffordElement, CliffordId,
};
pub use estimator::{
    element_statistics, estimate_krdm_element, estimator_coefficient, exhaustive_krdm_element, median_of_means,
    required_samples, required_samples_real, sample_values, sample_values_batch, single_shot_estimate,
    snapshot_term_estimate, variance_bound, ElementStatistics, EstimatorConfig, RestrictedIndexSet,
};
pub use sampling::{collect_shadows, collect_shadows_with, CliffordPolicy, ShadowSample, SAMPLE_BLOCK};
pub use twirl::{three_fold_deviation, twirl_identity_check, two_fold_deviation};
