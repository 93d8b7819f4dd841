//! Exact reduced-density-matrix elements and the first/second quantization
//! correspondence, evaluated by brute force on dense states.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::perm::{factorial, permutations_with_sign, sort_sign};
use crate::state::FirstQuantizedState;

const ANTISYMMETRY_TOL: f64 = 1e-10;

fn check_orbitals(state: &FirstQuantizedState, labels: &[usize]) -> Result<()> {
    let limit = state.grid().total_points();
    match labels.iter().find(|&&v| v >= limit) {
        Some(&index) => Err(Error::IndexOutOfRange { index, limit }),
        None => Ok(()),
    }
}

/// ⟨ψ| Π_ℓ |i_ℓ⟩⟨j_ℓ|_{x_ℓ} |ψ⟩ with 0-based register indices `x`.
pub fn transition_expectation(state: &FirstQuantizedState, x: &[usize], i: &[usize], j: &[usize]) -> Result<C64> {
    if i.len() != x.len() || j.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: i.len().max(j.len()) });
    }
    for (a, &reg) in x.iter().enumerate() {
        if reg >= state.eta() {
            return Err(Error::IndexOutOfRange { index: reg, limit: state.eta() });
        }
        if x[..a].contains(&reg) {
            return Err(Error::DuplicateRegister(reg));
        }
    }
    check_orbitals(state, i)?;
    check_orbitals(state, j)?;
    let amps = state.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for idx in 0..amps.len() {
        if amps[idx].norm_sqr() == 0.0 {
            continue;
        }
        let mut config = state.config_of(idx);
        if x.iter().zip(j).any(|(&reg, &jl)| config[reg] != jl) {
            continue;
        }
        for (&reg, &il) in x.iter().zip(i) {
            config[reg] = il;
        }
        acc += state.amplitude(&config).conj() * amps[idx];
    }
    Ok(acc)
}

/// k-RDM element ᵏD_{i…}^{j…} = η!/(η−k)! · ⟨ψ| Π_ℓ |i_ℓ⟩⟨j_ℓ|_ℓ |ψ⟩.
///
/// For k = 1 this is ⟨a_i† a_j⟩, so the mean-field matrix P_{μν} equals the element with
/// `i = [ν]`, `j = [μ]`.
pub fn exact_krdm_element(state: &FirstQuantizedState, i: &[usize], j: &[usize]) -> Result<C64> {
    let k = i.len();
    if k > state.eta() {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds eta = {}", state.eta())));
    }
    let deviation = state.antisymmetry_deviation();
    if deviation > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { deviation });
    }
    let coefficient = factorial(state.eta()) / factorial(state.eta() - k);
    let x: Vec<usize> = (0..k).collect();
    Ok(transition_expectation(state, &x, i, j)? * coefficient)
}

/// Full 1-RDM as a dense matrix `D[i][j] = ⟨a_i† a_j⟩`.
pub fn exact_1rdm(state: &FirstQuantizedState) -> Result<crate::linalg::CMatrix> {
    let n = state.grid().total_points();
    let mut d = crate::linalg::CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[(i, j)] = exact_krdm_element(state, &[i], &[j])?;
        }
    }
    Ok(d)
}

/// Occupation-number expansion: sorted configuration (as bitmask) → coefficient
/// of a†_{s_1}⋯a†_{s_η}|0⟩ with s ascending.
type SecondQuantized = BTreeMap<u64, C64>;

fn to_second_quantized(state: &FirstQuantizedState) -> SecondQuantized {
    let scale = factorial(state.eta()).sqrt();
    let mut out = SecondQuantized::new();
    for idx in state.physical_indices() {
        let config = state.config_of(idx);
        if config.windows(2).all(|w| w[0] < w[1]) {
            let z = state.amplitudes()[idx];
            if z.norm() > 0.0 {
                let mask = config.iter().fold(0u64, |m, &p| m | (1 << p));
                out.insert(mask, z * scale);
            }
        }
    }
    out
}

fn from_second_quantized(sq: &SecondQuantized, like: &FirstQuantizedState) -> Result<FirstQuantizedState> {
    let eta = like.eta();
    let scale = 1.0 / factorial(eta).sqrt();
    let perms = permutations_with_sign(eta);
    let mut out = FirstQuantizedState::zeros(like.grid(), eta)?;
    for (&mask, &coef) in sq {
        let sorted: Vec<usize> = (0..64).filter(|b| mask & (1 << b) != 0).collect();
        for (perm, sign) in &perms {
            let config: Vec<usize> = perm.iter().map(|&a| sorted[a]).collect();
            let idx = out.index_of(&config);
            out.amplitudes_mut()[idx] += coef * (sign * scale);
        }
    }
    Ok(out)
}

/// a_p† a_q on an occupation vector with ascending-order sign convention.
fn hop(mask: u64, p: usize, q: usize) -> Option<(u64, f64)> {
    if mask & (1 << q) == 0 {
        return None;
    }
    let below = |m: u64, k: usize| (m & ((1u64 << k) - 1)).count_ones();
    let mut sign = if below(mask, q) % 2 == 0 { 1.0 } else { -1.0 };
    let removed = mask & !(1 << q);
    if removed & (1 << p) != 0 {
        return None;
    }
    if below(removed, p) % 2 == 1 {
        sign = -sign;
    }
    Some((removed | (1 << p), sign))
}

/// Images of the state under Σ_j |p⟩⟨q|_j (first quantization) and under
/// a_p† a_q mapped back from the occupation basis (second quantization).
pub fn first_second_images(
    state: &FirstQuantizedState,
    p: usize,
    q: usize,
) -> Result<(FirstQuantizedState, FirstQuantizedState)> {
    let n = state.grid().total_points();
    if state.eta() > 3 || n > 8 {
        return Err(Error::BruteForceLimitExceeded(format!(
            "equivalence check needs eta <= 3 and N <= 8 (got eta = {}, N = {n})",
            state.eta()
        )));
    }
    check_orbitals(state, &[p, q])?;
    let deviation = state.antisymmetry_deviation();
    if deviation > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { deviation });
    }

    let mut first = FirstQuantizedState::zeros(state.grid(), state.eta())?;
    for idx in 0..state.amplitudes().len() {
        let z = state.amplitudes()[idx];
        if z.norm() == 0.0 {
            continue;
        }
        let config = state.config_of(idx);
        for reg in 0..state.eta() {
            if config[reg] == q {
                let mut moved = config.clone();
                moved[reg] = p;
                let target = first.index_of(&moved);
                first.amplitudes_mut()[target] += z;
            }
        }
    }

    let mut image = SecondQuantized::new();
    for (&mask, &coef) in &to_second_quantized(state) {
        if let Some((m, s)) = hop(mask, p, q) {
            *image.entry(m).or_insert(C64::new(0.0, 0.0)) += coef * s;
        }
    }
    let second = from_second_quantized(&image, state)?;
    Ok((first, second))
}

/// True when both routes agree to 1e−10 in every amplitude.
pub fn first_second_equivalence_check(state: &FirstQuantizedState, p: usize, q: usize) -> Result<bool> {
    let (first, second) = first_second_images(state, p, q)?;
    let deviation = first.amplitudes().iter().zip(second.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(deviation < 1e-10)
}

/// Sign-consistency helper used by tests: sign of sorting a configuration.
pub fn configuration_sign(config: &[usize]) -> f64 {
    sort_sign(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::linalg::{c, random_isometry};
    use crate::state::OrbitalVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(1, n, n as f64).unwrap()
    }

    fn slater(n: usize, occ: &[usize]) -> FirstQuantizedState {
        let orbitals: Vec<_> = occ.iter().map(|&p| OrbitalVector::basis(n, p)).collect();
        FirstQuantizedState::slater_oracle(&orbitals, &grid(n)).unwrap()
    }

    #[test]
    fn transition_examples() {
        let s = slater(4, &[0, 1]);
        assert!((transition_expectation(&s, &[0], &[0], &[0]).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!((transition_expectation(&s, &[0, 1], &[0, 1], &[0, 1]).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!(transition_expectation(&s, &[0], &[3], &[3]).unwrap().norm() < 1e-14);
        assert!(matches!(transition_expectation(&s, &[1, 1], &[0, 1], &[0, 1]), Err(Error::DuplicateRegister(1))));
    }

    #[test]
    fn one_rdm_of_basis_slater() {
        let s = slater(4, &[0, 1]);
        let d = exact_1rdm(&s).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j && i < 2 { 1.0 } else { 0.0 };
                assert!((d[(i, j)] - c(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn two_rdm_element_by_direct_contraction() {
        let s = slater(4, &[0, 1]);
        let v = exact_krdm_element(&s, &[0, 1], &[0, 1]).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        // Exchanged element picks up the fermionic sign.
        let w = exact_krdm_element(&s, &[0, 1], &[1, 0]).unwrap();
        assert!((w + c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn one_rdm_trace_and_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c_occ = random_isometry(5, 3, &mut rng);
        let s = FirstQuantizedState::slater_from_coeffs(&c_occ, &grid(5)).unwrap();
        let d = exact_1rdm(&s).unwrap();
        let trace: C64 = (0..5).map(|i| d[(i, i)]).sum();
        assert!((trace - c(3.0, 0.0)).norm() < 1e-10);
        assert!(crate::linalg::hermiticity_deviation(&d) < 1e-12);
        let (vals, _) = crate::linalg::eigh(&d);
        for v in vals {
            assert!(v > -1e-10 && v < 1.0 + 1e-10);
        }
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let s = FirstQuantizedState::basis(&grid(4), &[0, 1]).unwrap();
        assert!(matches!(exact_krdm_element(&s, &[0], &[0]), Err(Error::NotAntisymmetric { .. })));
    }

    #[test]
    fn equivalence_number_operator() {
        let s = slater(4, &[0, 1]);
        let (first, second) = first_second_images(&s, 0, 0).unwrap();
        assert!((first.overlap(&s) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((second.overlap(&s) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(first_second_equivalence_check(&s, 0, 0).unwrap());
    }

    #[test]
    fn equivalence_hop_gives_new_determinant() {
        let s = slater(4, &[0, 1]);
        let target = slater(4, &[0, 2]);
        let (first, second) = first_second_images(&s, 2, 1).unwrap();
        assert!((first.overlap(&target) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((second.overlap(&target) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn equivalence_unoccupied_source_is_zero() {
        let s = slater(4, &[0, 1]);
        let (first, second) = first_second_images(&s, 2, 3).unwrap();
        assert_eq!(first.norm(), 0.0);
        assert_eq!(second.norm(), 0.0);
    }

    #[test]
    fn equivalence_hop_over_odd_electrons_flips_sign() {
        // a†_3 a_0 on {0,1,2}: passes two electrons on removal side... net sign from ordering.
        let s = slater(4, &[0, 1, 2]);
        assert!(first_second_equivalence_check(&s, 3, 0).unwrap());
        let (first, _) = first_second_images(&s, 3, 0).unwrap();
        let target = slater(4, &[1, 2, 3]);
        // Moving 0 → 3 passes electrons 1 and 2 (even): no sign flip.
        assert!((first.overlap(&target) - c(1.0, 0.0)).norm() < 1e-14);
        let (first, _) = first_second_images(&slater(4, &[0, 1]), 3, 0).unwrap();
        // Moving 0 → 3 passes electron 1 (odd): sign flip.
        assert!((first.overlap(&slater(4, &[1, 3])) + c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn equivalence_limits() {
        let s = slater(9, &[0, 1]);
        assert!(matches!(first_second_images(&s, 0, 1), Err(Error::BruteForceLimitExceeded(_))));
    }
}
