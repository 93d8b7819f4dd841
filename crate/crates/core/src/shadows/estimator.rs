use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clifford::{clifford_unitary, enumerate_group, group_order};
use super::sampling::ShadowSample;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::perm::factorial;
use crate::state::FirstQuantizedState;

/// The k-tuples of registers summed over by the estimator: one register from each of
/// k consecutive blocks of size η′/k, where η′ = k⌊η/k⌋.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedIndexSet {
    pub eta: usize,
    pub k: usize,
    pub eta_prime: usize,
    tuples: Vec<Vec<usize>>,
}

impl RestrictedIndexSet {
    pub fn new(eta: usize, k: usize) -> Result<Self> {
        if k == 0 || k > eta {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= η, got k = {k}, η = {eta}")));
        }
        let block = eta / k;
        let mut tuples = vec![Vec::with_capacity(k)];
        for l in 0..k {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (l * block..(l + 1) * block).map(move |r| {
                        let mut t = t.clone();
                        t.push(r);
                        t
                    })
                })
                .collect();
        }
        Ok(RestrictedIndexSet { eta, k, eta_prime: k * block, tuples })
    }

    /// Same set with registers relabelled through `perm` (a permutation of 0..η).
    pub fn relabelled(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.eta];
        if perm.len() != self.eta || !perm.iter().all(|&p| p < self.eta && !std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("relabelling must be a permutation of the registers".into()));
        }
        let tuples = self.tuples.iter().map(|t| t.iter().map(|&r| perm[r]).collect()).collect();
        Ok(RestrictedIndexSet { tuples, ..self.clone() })
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// k^k η! / (η^k (η−k)!).
pub fn estimator_coefficient(k: usize, eta: usize) -> f64 {
    (k as f64).powi(k as i32) * factorial(eta) / ((eta as f64).powi(k as i32) * factorial(eta - k))
}

/// Normalization applied to the restricted sum: η!/(η−k)! divided by |R_k|. Equal to
/// [`estimator_coefficient`] when k divides η; keeps the estimator unbiased otherwise.
fn sum_normalization(set: &RestrictedIndexSet) -> f64 {
    factorial(set.eta) / (factorial(set.eta - set.k) * set.len() as f64)
}

/// Π_ℓ [(2ⁿ+1)·⟨j_ℓ|U†|b⟩⟨b|U|i_ℓ⟩ − δ_{i_ℓ j_ℓ}] over registers x_ℓ.
pub fn snapshot_term_estimate(sample: &ShadowSample, x: &[usize], i: &[usize], j: &[usize]) -> Result<C64> {
    if x.len() != i.len() || i.len() != j.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: i.len().max(j.len()) });
    }
    let dim = 1usize << sample.qubits;
    let scale = (dim + 1) as f64;
    let mut total = C64::new(1.0, 0.0);
    for ((&reg, &il), &jl) in x.iter().zip(i).zip(j) {
        if reg >= sample.eta() {
            return Err(Error::IndexOutOfRange { index: reg, limit: sample.eta() });
        }
        if let Some(&bad) = [il, jl].iter().find(|&&o| o >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, limit: dim });
        }
        let u = clifford_unitary(sample.cliffords[reg], sample.qubits);
        let b = sample.outcomes[reg];
        let delta = if il == jl { 1.0 } else { 0.0 };
        total *= u[(b, jl)].conj() * u[(b, il)] * scale - delta;
    }
    Ok(total)
}

/// d̂ for one sample.
pub fn single_shot_estimate(sample: &ShadowSample, set: &RestrictedIndexSet, i: &[usize], j: &[usize]) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for x in set.tuples() {
        sum += snapshot_term_estimate(sample, x, i, j)?;
    }
    Ok(sum * sum_normalization(set))
}

/// ⟨b_r|U_r for every register r of one sample.
fn measured_rows(sample: &ShadowSample) -> Vec<Vec<C64>> {
    sample
        .cliffords
        .iter()
        .zip(&sample.outcomes)
        .map(|(&id, &b)| {
            let u = clifford_unitary(id, sample.qubits);
            u.row(b).iter().copied().collect()
        })
        .collect()
}

fn check_element(eta: usize, dim: usize, set: &RestrictedIndexSet, i: &[usize], j: &[usize]) -> Result<()> {
    if i.len() != set.k || j.len() != set.k {
        return Err(Error::DimensionMismatch { expected: set.k, got: i.len().max(j.len()) });
    }
    if set.eta != eta {
        return Err(Error::DimensionMismatch { expected: eta, got: set.eta });
    }
    if let Some(&bad) = i.iter().chain(j).find(|&&o| o >= dim) {
        return Err(Error::IndexOutOfRange { index: bad, limit: dim });
    }
    Ok(())
}

/// d̂ for every sample and every element, as `values[element][sample]`. Each sample's
/// measured rows are computed once and shared across elements.
pub fn sample_values_batch(
    samples: &[ShadowSample],
    k: usize,
    elements: &[(Vec<usize>, Vec<usize>)],
) -> Result<Vec<Vec<C64>>> {
    let Some(first) = samples.first() else {
        return Ok(vec![Vec::new(); elements.len()]);
    };
    let (eta, qubits) = (first.eta(), first.qubits);
    if let Some(s) = samples.iter().find(|s| s.eta() != eta || s.qubits != qubits) {
        return Err(Error::DimensionMismatch { expected: eta, got: s.eta() });
    }
    let set = RestrictedIndexSet::new(eta, k)?;
    let dim = 1usize << qubits;
    for (i, j) in elements {
        check_element(eta, dim, &set, i, j)?;
    }
    let scale = (dim + 1) as f64;
    let norm = sum_normalization(&set);
    let per_sample: Vec<Vec<C64>> = samples
        .par_iter()
        .map(|s| {
            let rows = measured_rows(s);
            elements
                .iter()
                .map(|(i, j)| {
                    let mut sum = C64::new(0.0, 0.0);
                    for x in set.tuples() {
                        let mut term = C64::new(1.0, 0.0);
                        for ((&reg, &il), &jl) in x.iter().zip(i).zip(j) {
                            let row = &rows[reg];
                            let delta = if il == jl { 1.0 } else { 0.0 };
                            term *= row[jl].conj() * row[il] * scale - delta;
                        }
                        sum += term;
                    }
                    sum * norm
                })
                .collect()
        })
        .collect();
    Ok((0..elements.len()).map(|e| per_sample.iter().map(|v| v[e]).collect()).collect())
}

/// Per-element summary of d̂ over the first `groups × group_size` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementStatistics {
    pub group_means: Vec<C64>,
    pub mean: C64,
    /// Unbiased sample variance E|d̂ − mean|².
    pub variance: f64,
}

impl ElementStatistics {
    /// Coordinatewise median of the group means.
    pub fn median_of_means(&self) -> C64 {
        median_of_group_means(&self.group_means)
    }
}

/// Streams d̂ for many elements without materializing per-sample values. Partial sums are
/// taken over fixed blocks and combined in order, so the result does not depend on the
/// thread count.
pub fn element_statistics(
    samples: &[ShadowSample],
    k: usize,
    elements: &[(Vec<usize>, Vec<usize>)],
    groups: usize,
    group_size: usize,
) -> Result<Vec<ElementStatistics>> {
    let needed = groups * group_size;
    if groups == 0 || group_size == 0 || samples.len() < needed {
        return Err(Error::InsufficientSamples { needed: needed.max(1), have: samples.len() });
    }
    let samples = &samples[..needed];
    let (eta, qubits) = (samples[0].eta(), samples[0].qubits);
    if let Some(s) = samples.iter().find(|s| s.eta() != eta || s.qubits != qubits) {
        return Err(Error::DimensionMismatch { expected: eta, got: s.eta() });
    }
    let set = RestrictedIndexSet::new(eta, k)?;
    let dim = 1usize << qubits;
    for (i, j) in elements {
        check_element(eta, dim, &set, i, j)?;
    }
    let scale = (dim + 1) as f64;
    let norm = sum_normalization(&set);

    const BLOCK: usize = 1024;
    let jobs: Vec<(usize, usize, usize)> = (0..groups)
        .flat_map(|g| {
            (0..group_size.div_ceil(BLOCK)).map(move |b| {
                let lo = g * group_size + b * BLOCK;
                (g, lo, (lo + BLOCK).min((g + 1) * group_size))
            })
        })
        .collect();
    let partials: Vec<Vec<(C64, f64)>> = jobs
        .par_iter()
        .map(|&(_, lo, hi)| {
            let mut acc = vec![(C64::new(0.0, 0.0), 0.0); elements.len()];
            for s in &samples[lo..hi] {
                let rows = measured_rows(s);
                for ((i, j), slot) in elements.iter().zip(acc.iter_mut()) {
                    let mut sum = C64::new(0.0, 0.0);
                    for x in set.tuples() {
                        let mut term = C64::new(1.0, 0.0);
                        for ((&reg, &il), &jl) in x.iter().zip(i).zip(j) {
                            let row = &rows[reg];
                            let delta = if il == jl { 1.0 } else { 0.0 };
                            term *= row[jl].conj() * row[il] * scale - delta;
                        }
                        sum += term;
                    }
                    let v = sum * norm;
                    slot.0 += v;
                    slot.1 += v.norm_sqr();
                }
            }
            acc
        })
        .collect();

    let mut group_sums = vec![vec![C64::new(0.0, 0.0); groups]; elements.len()];
    let mut sumsq = vec![0.0; elements.len()];
    for (&(g, _, _), acc) in jobs.iter().zip(&partials) {
        for (e, &(s, q)) in acc.iter().enumerate() {
            group_sums[e][g] += s;
            sumsq[e] += q;
        }
    }
    let n = needed as f64;
    Ok(group_sums
        .into_iter()
        .zip(sumsq)
        .map(|(sums, q)| {
            let total: C64 = sums.iter().sum();
            let mean = total / n;
            let variance = if needed > 1 { ((q - n * mean.norm_sqr()) / (n - 1.0)).max(0.0) } else { 0.0 };
            ElementStatistics { group_means: sums.iter().map(|s| s / group_size as f64).collect(), mean, variance }
        })
        .collect())
}

/// d̂ for every sample, in order.
pub fn sample_values(samples: &[ShadowSample], k: usize, i: &[usize], j: &[usize]) -> Result<Vec<C64>> {
    let mut v = sample_values_batch(samples, k, &[(i.to_vec(), j.to_vec())])?;
    Ok(v.pop().unwrap_or_default())
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Splits `values` into `groups` groups of `group_size` (remainder dropped) and returns the
/// coordinatewise median of the group means.
pub fn median_of_means(values: &[C64], groups: usize, group_size: usize) -> Result<C64> {
    let needed = groups * group_size;
    if groups == 0 || group_size == 0 || values.len() < needed {
        return Err(Error::InsufficientSamples { needed: needed.max(1), have: values.len() });
    }
    let means: Vec<C64> =
        values[..needed].chunks(group_size).map(|g| g.iter().sum::<C64>() / group_size as f64).collect();
    Ok(median_of_group_means(&means))
}

fn median_of_group_means(means: &[C64]) -> C64 {
    let mut re: Vec<f64> = means.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = means.iter().map(|z| z.im).collect();
    C64::new(median(&mut re), median(&mut im))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogConvention {
    Natural,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub groups: usize,
    pub group_size: usize,
    pub log: LogConvention,
}

fn check_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

impl EstimatorConfig {
    /// K = ⌈8 ln(1/δ)⌉.
    pub fn group_count(delta: f64) -> usize {
        (8.0 * (1.0 / delta).ln()).ceil().max(1.0) as usize
    }

    /// K from δ and b = ⌈4·VarBound/ε²⌉.
    pub fn auto(k: usize, eta: usize, epsilon: f64, delta: f64) -> Result<Self> {
        check_eps_delta(epsilon, delta)?;
        let b = (4.0 * variance_bound(k, eta)? / (epsilon * epsilon)).ceil() as usize;
        Ok(EstimatorConfig {
            k,
            epsilon,
            delta,
            groups: Self::group_count(delta),
            group_size: b,
            log: LogConvention::Natural,
        })
    }

    /// K from δ and b = ⌊m/K⌋ for a fixed sample budget m.
    pub fn for_budget(k: usize, epsilon: f64, delta: f64, m: usize) -> Result<Self> {
        check_eps_delta(epsilon, delta)?;
        let groups = Self::group_count(delta);
        if m < groups {
            return Err(Error::InsufficientSamples { needed: groups, have: m });
        }
        Ok(EstimatorConfig { k, epsilon, delta, groups, group_size: m / groups, log: LogConvention::Natural })
    }

    pub fn samples_needed(&self) -> usize {
        self.groups * self.group_size
    }
}

/// Median-of-means estimate of the k-RDM element (i, j).
pub fn estimate_krdm_element(
    samples: &[ShadowSample],
    config: &EstimatorConfig,
    i: &[usize],
    j: &[usize],
) -> Result<C64> {
    if i.len() != config.k || j.len() != config.k {
        return Err(Error::DimensionMismatch { expected: config.k, got: i.len() });
    }
    let needed = config.samples_needed();
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, have: samples.len() });
    }
    let values = sample_values(&samples[..needed], config.k, i, j)?;
    median_of_means(&values, config.groups, config.group_size)
}

/// m = 64e³ ln(N/δ) k (2k+2e)^k η^k / ε², before rounding.
pub fn required_samples_real(n: usize, k: usize, eta: usize, epsilon: f64, delta: f64) -> f64 {
    let kf = k as f64;
    64.0 * E.powi(3) * (n as f64 / delta).ln() * kf * (2.0 * kf + 2.0 * E).powi(k as i32) * (eta as f64).powi(k as i32)
        / (epsilon * epsilon)
}

pub fn required_samples(n: usize, k: usize, eta: usize, epsilon: f64, delta: f64) -> Result<u64> {
    if n == 0 || k == 0 || eta == 0 {
        return Err(Error::InvalidArgument("N, k and η must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1], got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0, 1), got {delta}")));
    }
    Ok(required_samples_real(n, k, eta, epsilon, delta).ceil() as u64)
}

/// Single-shot variance bound e³ η^k (2k+2e)^k, valid for η ≥ 2k.
pub fn variance_bound(k: usize, eta: usize) -> Result<f64> {
    if k == 0 || eta < 2 * k {
        return Err(Error::AssumptionViolated(format!("variance bound needs η >= 2k, got η = {eta}, k = {k}")));
    }
    let kf = k as f64;
    Ok(E.powi(3) * (eta as f64).powi(k as i32) * (2.0 * kf + 2.0 * E).powi(k as i32))
}

/// Exact estimator mean: the average of d̂ over every Clifford tuple and every outcome,
/// weighted by the Born probabilities. Requires an enumerable group (n ≤ 2) and at most
/// 10⁶ Clifford tuples.
pub fn exhaustive_krdm_element(
    state: &FirstQuantizedState,
    set: &RestrictedIndexSet,
    i: &[usize],
    j: &[usize],
) -> Result<C64> {
    let n = state.qubits_per_register();
    let eta = state.eta();
    if set.eta != eta {
        return Err(Error::DimensionMismatch { expected: eta, got: set.eta });
    }
    let group = enumerate_group(n)?;
    let order = group_order(n) as usize;
    let tuples = (order as f64).powi(eta as i32);
    if tuples > 1e6 {
        return Err(Error::EnumerationUnavailable(n));
    }
    let tuples = tuples as usize;
    let mut total = C64::new(0.0, 0.0);
    let mut work = state.clone();
    let mut ids = vec![0u128; eta];
    for t in 0..tuples {
        let mut rest = t;
        for id in ids.iter_mut().rev() {
            *id = (rest % order) as u128;
            rest /= order;
        }
        work.amplitudes_mut().copy_from_slice(state.amplitudes());
        for (reg, &id) in ids.iter().enumerate() {
            work.apply_register_matrix(reg, &group[id as usize]);
        }
        for (idx, amp) in work.amplitudes().iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let sample = ShadowSample { qubits: n, cliffords: ids.clone(), outcomes: work.config_of(idx) };
            total += single_shot_estimate(&sample, set, i, j)? * p;
        }
    }
    Ok(total / tuples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_and_sets() {
        for eta in 1..7 {
            assert!((estimator_coefficient(1, eta) - 1.0).abs() < 1e-14);
        }
        assert!((estimator_coefficient(2, 4) - 3.0).abs() < 1e-14);
        let r = RestrictedIndexSet::new(4, 2).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.tuples(), &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert!((sum_normalization(&r) - 3.0).abs() < 1e-14);
        let r = RestrictedIndexSet::new(5, 2).unwrap();
        assert_eq!((r.eta_prime, r.len()), (4, 4));
    }

    #[test]
    fn snapshot_plug_in() {
        let s = ShadowSample::new(2, vec![0], vec![1]).unwrap();
        assert!((snapshot_term_estimate(&s, &[0], &[1], &[1]).unwrap() - C64::new(4.0, 0.0)).norm() < 1e-14);
        assert!((snapshot_term_estimate(&s, &[0], &[2], &[2]).unwrap() - C64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!(matches!(snapshot_term_estimate(&s, &[0], &[4], &[4]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(snapshot_term_estimate(&s, &[1], &[0], &[0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn batch_matches_single_shot() {
        use crate::rng::stream;
        use crate::shadows::clifford::sample_clifford_id;
        for (n, eta, k) in [(1usize, 2usize, 1usize), (2, 3, 2), (3, 4, 2)] {
            let mut rng = stream(9, "batch-test", n as u64);
            let samples: Vec<ShadowSample> = (0..20)
                .map(|t| {
                    let ids = (0..eta).map(|_| sample_clifford_id(n, &mut rng)).collect();
                    let outs = (0..eta).map(|r| (t + r) % (1 << n)).collect();
                    ShadowSample::new(n, ids, outs).unwrap()
                })
                .collect();
            let set = RestrictedIndexSet::new(eta, k).unwrap();
            let d = 1 << n;
            let elements: Vec<(Vec<usize>, Vec<usize>)> = (0..4)
                .map(|e| ((0..k).map(|l| (e + l) % d).collect(), (0..k).map(|l| (e * 3 + l + 1) % d).collect()))
                .collect();
            let batch = sample_values_batch(&samples, k, &elements).unwrap();
            for (e, (i, j)) in elements.iter().enumerate() {
                for (s, sample) in samples.iter().enumerate() {
                    let single = single_shot_estimate(sample, &set, i, j).unwrap();
                    assert!((batch[e][s] - single).norm() < 1e-12);
                }
            }
            let bad = vec![(vec![d; k], vec![0; k])];
            assert!(matches!(sample_values_batch(&samples, k, &bad), Err(Error::IndexOutOfRange { .. })));
        }
    }

    #[test]
    fn streamed_statistics_match_values() {
        use crate::rng::stream;
        use crate::shadows::clifford::sample_clifford_id;
        let (n, eta) = (2usize, 2usize);
        let mut rng = stream(4, "stats-test", 0);
        let samples: Vec<ShadowSample> = (0..2500)
            .map(|t| {
                let ids = (0..eta).map(|_| sample_clifford_id(n, &mut rng)).collect();
                ShadowSample::new(n, ids, vec![t % 4, (t / 4) % 4]).unwrap()
            })
            .collect();
        let elements = vec![(vec![0], vec![0]), (vec![1], vec![3]), (vec![2], vec![1])];
        let (groups, size) = (3, 800);
        let stats = element_statistics(&samples, 1, &elements, groups, size).unwrap();
        for ((i, j), st) in elements.iter().zip(&stats) {
            let v = sample_values(&samples[..groups * size], 1, i, j).unwrap();
            let mom = median_of_means(&v, groups, size).unwrap();
            assert!((st.median_of_means() - mom).norm() < 1e-10);
            let mean = v.iter().sum::<C64>() / v.len() as f64;
            let var = v.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (v.len() - 1) as f64;
            assert!((st.mean - mean).norm() < 1e-10);
            assert!((st.variance - var).abs() < 1e-8 * var.max(1.0));
        }
        assert!(element_statistics(&samples, 1, &elements, 4, 800).is_err());
    }

    #[test]
    fn sample_count_formula() {
        let m = required_samples(4, 1, 2, 0.1, 0.05).unwrap() as f64;
        let hand = 64.0 * E.powi(3) * 80f64.ln() * (2.0 + 2.0 * E) * 2.0 * 100.0;
        assert!((m / hand - 1.0).abs() < 1e-6);
        assert!((m / 8.38e6 - 1.0).abs() < 5e-4);
        let a = required_samples_real(4, 1, 2, 0.1, 0.05);
        let b = required_samples_real(4, 1, 2, 0.05, 0.05);
        assert!((a / b - 0.25).abs() < 1e-14);
        let c = required_samples_real(4, 1, 4, 0.1, 0.05);
        assert!((c / a - 2.0).abs() < 1e-14);
    }

    #[test]
    fn variance_bound_domain() {
        let v = variance_bound(1, 2).unwrap();
        // e³·2·(2+2e) evaluated independently
        assert!((v - 298.734_747_825_327_6).abs() < 1e-9);
        assert!((variance_bound(1, 8).unwrap() / variance_bound(1, 4).unwrap() - 2.0).abs() < 1e-14);
        assert!(variance_bound(2, 4).is_ok());
        assert!(matches!(variance_bound(2, 3), Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn median_of_means_basics() {
        let v: Vec<C64> = (0..10).map(|x| C64::new(x as f64, -(x as f64))).collect();
        let m = median_of_means(&v, 3, 3).unwrap();
        assert_eq!(m, C64::new(4.0, -4.0));
        let m = median_of_means(&v, 2, 5).unwrap();
        assert_eq!(m, C64::new(4.5, -4.5));
        assert!(matches!(median_of_means(&v, 3, 4), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn config_shapes() {
        let c = EstimatorConfig::auto(1, 2, 0.2, 0.05).unwrap();
        assert_eq!(c.groups, 24);
        assert_eq!(c.group_size, (4.0 * variance_bound(1, 2).unwrap() / 0.04f64).ceil() as usize);
        let c = EstimatorConfig::for_budget(1, 0.2, 0.05, 1000).unwrap();
        assert_eq!((c.groups, c.group_size), (24, 41));
        assert!(EstimatorConfig::for_budget(1, 0.2, 0.05, 10).is_err());
    }
}
