use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clifford::{clifford_unitary, sample_clifford_id, CliffordId};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::state::FirstQuantizedState;

/// Samples per RNG stream; streams are keyed by block so output does not depend on
/// how many threads collect them.
pub const SAMPLE_BLOCK: usize = 1024;

/// One measurement: a Clifford per register and the joint outcome (one n-bit value per register).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowSample {
    pub qubits: usize,
    pub cliffords: Vec<CliffordId>,
    pub outcomes: Vec<usize>,
}

impl ShadowSample {
    pub fn new(qubits: usize, cliffords: Vec<CliffordId>, outcomes: Vec<usize>) -> Result<Self> {
        if cliffords.len() != outcomes.len() {
            return Err(Error::DimensionMismatch { expected: cliffords.len(), got: outcomes.len() });
        }
        if let Some(&b) = outcomes.iter().find(|&&b| b >= 1 << qubits) {
            return Err(Error::IndexOutOfRange { index: b, limit: 1 << qubits });
        }
        Ok(ShadowSample { qubits, cliffords, outcomes })
    }

    pub fn eta(&self) -> usize {
        self.cliffords.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordPolicy {
    Uniform,
    /// Every register measured in the computational basis (test hook).
    Identity,
}

pub fn collect_shadows(state: &FirstQuantizedState, m: usize, seed: u64) -> Result<Vec<ShadowSample>> {
    collect_shadows_with(state, m, seed, CliffordPolicy::Uniform)
}

pub fn collect_shadows_with(
    state: &FirstQuantizedState,
    m: usize,
    seed: u64,
    policy: CliffordPolicy,
) -> Result<Vec<ShadowSample>> {
    let n = state.qubits_per_register();
    if n == 0 || n > super::clifford::MAX_QUBITS {
        return Err(Error::InvalidArgument(format!("register width {n} outside the supported Clifford range")));
    }
    let eta = state.eta();
    let blocks = m.div_ceil(SAMPLE_BLOCK);
    let per_block: Vec<Vec<ShadowSample>> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = stream(seed, "shadows", blk as u64);
            let count = SAMPLE_BLOCK.min(m - blk * SAMPLE_BLOCK);
            let mut out = Vec::with_capacity(count);
            let mut work = state.clone();
            for _ in 0..count {
                let ids: Vec<CliffordId> = match policy {
                    CliffordPolicy::Uniform => (0..eta).map(|_| sample_clifford_id(n, &mut rng)).collect(),
                    CliffordPolicy::Identity => vec![0; eta],
                };
                work.amplitudes_mut().copy_from_slice(state.amplitudes());
                for (reg, &id) in ids.iter().enumerate() {
                    if id != 0 {
                        work.apply_register_matrix(reg, &clifford_unitary(id, n));
                    }
                }
                let outcomes = work.measure_all(&mut rng);
                out.push(ShadowSample { qubits: n, cliffords: ids, outcomes });
            }
            out
        })
        .collect();
    Ok(per_block.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::linalg::c;

    #[test]
    fn empty_and_deterministic() {
        let g = GridSpec::new(1, 4, 4.0).unwrap();
        let psi = FirstQuantizedState::basis(&g, &[1]).unwrap();
        assert!(collect_shadows(&psi, 0, 1).unwrap().is_empty());
        let a = collect_shadows(&psi, 2500, 7).unwrap();
        let b = collect_shadows(&psi, 2500, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2500);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c1 = pool.install(|| collect_shadows(&psi, 2500, 7).unwrap());
        assert_eq!(a, c1);
    }

    #[test]
    fn identity_policy_follows_born_rule() {
        let g = GridSpec::new(1, 4, 4.0).unwrap();
        let psi = FirstQuantizedState::from_amplitudes(&g, 1, vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.8), c(0.0, 0.0)])
            .unwrap();
        let s = collect_shadows_with(&psi, 20000, 3, CliffordPolicy::Identity).unwrap();
        let hits = s.iter().filter(|x| x.outcomes[0] == 0).count() as f64 / 20000.0;
        let sigma = (0.36f64 * 0.64 / 20000.0).sqrt();
        assert!((hits - 0.36).abs() < 5.0 * sigma);
        assert!(s.iter().all(|x| x.outcomes[0] == 0 || x.outcomes[0] == 2));
    }
}
