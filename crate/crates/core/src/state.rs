//! Dense first-quantized fermionic wavefunctions.
//!
//! A state of η particles on a grid of N points lives on η registers of
//! n = ⌈log₂N⌉ qubits each. Register 0 is the most significant block of the
//! amplitude index. Register values ≥ N are padding and carry no amplitude.

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::linalg::{unitarity_deviation, vec_norm, CMatrix, C64};
use crate::perm::{factorial, permutations_with_sign};

/// Largest number of physical configurations N^η the dense representation accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 24;

const NORM_TOL: f64 = 1e-12;

/// A unit-norm single-particle orbital over the grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitalVector {
    coeffs: Vec<C64>,
}

impl OrbitalVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&coeffs);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("orbital norm {norm} is not 1")));
        }
        Ok(OrbitalVector { coeffs })
    }

    /// Rescales `coeffs` to unit norm.
    pub fn normalized(coeffs: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&coeffs);
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero orbital".into()));
        }
        Ok(OrbitalVector { coeffs: coeffs.into_iter().map(|z| z / norm).collect() })
    }

    /// The computational-basis orbital e_p.
    pub fn basis(len: usize, p: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); len];
        coeffs[p] = C64::new(1.0, 0.0);
        OrbitalVector { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Splits the columns of an N×η coefficient matrix into orbitals.
    pub fn columns_of(c_occ: &CMatrix) -> Result<Vec<OrbitalVector>> {
        (0..c_occ.ncols()).map(|j| OrbitalVector::new(c_occ.column(j).iter().copied().collect())).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstQuantizedState {
    grid: GridSpec,
    eta: usize,
    qubits: usize,
    amps: Vec<C64>,
}

impl FirstQuantizedState {
    /// All-zero work buffer.
    pub fn zeros(grid: &GridSpec, eta: usize) -> Result<Self> {
        if eta == 0 {
            return Err(Error::InvalidArgument("eta must be at least 1".into()));
        }
        let n_points = grid.total_points() as u128;
        let configs = n_points.checked_pow(eta as u32).unwrap_or(u128::MAX);
        if configs > BRUTE_FORCE_LIMIT {
            return Err(Error::BruteForceLimitExceeded(format!("N^eta = {}^{} exceeds 2^24", n_points, eta)));
        }
        let qubits = grid.qubits_per_register();
        let len = 1usize
            .checked_shl((qubits * eta) as u32)
            .filter(|&l| l <= 1 << 28)
            .ok_or_else(|| Error::BruteForceLimitExceeded(format!("2^(n·eta) = 2^{}", qubits * eta)))?;
        Ok(FirstQuantizedState { grid: grid.clone(), eta, qubits, amps: vec![C64::new(0.0, 0.0); len] })
    }

    /// Computational basis state |p_0, …, p_{η−1}⟩.
    pub fn basis(grid: &GridSpec, config: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(grid, config.len())?;
        let n = grid.total_points();
        if let Some(&bad) = config.iter().find(|&&p| p >= n) {
            return Err(Error::IndexOutOfRange { index: bad, limit: n });
        }
        let idx = s.index_of(config);
        s.amps[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps a raw amplitude vector, enforcing length and zero padding.
    pub fn from_amplitudes(grid: &GridSpec, eta: usize, amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::zeros(grid, eta)?;
        if amps.len() != s.amps.len() {
            return Err(Error::DimensionMismatch { expected: s.amps.len(), got: amps.len() });
        }
        s.amps = amps;
        let n = grid.total_points();
        for idx in 0..s.amps.len() {
            if s.amps[idx].norm() > 0.0 && s.config_of(idx).iter().any(|&p| p >= n) {
                return Err(Error::InvalidArgument(format!("nonzero amplitude on padding index {idx}")));
            }
        }
        Ok(s)
    }

    /// Builds a state from a function of physical configurations.
    pub fn from_fn(grid: &GridSpec, eta: usize, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let mut s = Self::zeros(grid, eta)?;
        let n = grid.total_points();
        for idx in 0..s.amps.len() {
            let config = s.config_of(idx);
            if config.iter().all(|&p| p < n) {
                s.amps[idx] = f(&config);
            }
        }
        Ok(s)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn qubits_per_register(&self) -> usize {
        self.qubits
    }

    pub fn register_dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn index_of(&self, config: &[usize]) -> usize {
        config.iter().fold(0usize, |acc, &p| (acc << self.qubits) | p)
    }

    pub fn config_of(&self, mut idx: usize) -> Vec<usize> {
        let mask = self.register_dim() - 1;
        let mut out = vec![0; self.eta];
        for slot in out.iter_mut().rev() {
            *slot = idx & mask;
            idx >>= self.qubits;
        }
        out
    }

    pub fn amplitude(&self, config: &[usize]) -> C64 {
        self.amps[self.index_of(config)]
    }

    /// Iterator over physical configurations (every register value < N).
    pub fn physical_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.grid.total_points();
        (0..self.amps.len()).filter(move |&idx| self.config_of(idx).iter().all(|&p| p < n))
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        self.amps.iter_mut().for_each(|z| *z /= norm);
        Ok(())
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        crate::linalg::inner(&self.amps, &other.amps)
    }

    /// |⟨a|b⟩|, the equality test up to global phase.
    pub fn fidelity_modulus(&self, other: &Self) -> f64 {
        self.overlap(other).norm()
    }

    /// Maximum violation of ψ(…p…q…) = −ψ(…q…p…) over all register transpositions.
    pub fn antisymmetry_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for idx in 0..self.amps.len() {
            let config = self.config_of(idx);
            for a in 0..self.eta {
                for b in a + 1..self.eta {
                    let mut swapped = config.clone();
                    swapped.swap(a, b);
                    let other = self.amps[self.index_of(&swapped)];
                    worst = worst.max((self.amps[idx] + other).norm());
                }
            }
        }
        worst
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_deviation() <= tol
    }

    /// Projects onto the antisymmetric subspace and renormalizes.
    pub fn antisymmetrize(&self) -> Result<Self> {
        let perms = permutations_with_sign(self.eta);
        let scale = 1.0 / factorial(self.eta);
        let mut out = self.clone();
        let mut permuted = vec![0usize; self.eta];
        for idx in 0..self.amps.len() {
            let config = self.config_of(idx);
            let mut acc = C64::new(0.0, 0.0);
            for (perm, sign) in &perms {
                for (slot, &src) in permuted.iter_mut().zip(perm) {
                    *slot = config[src];
                }
                acc += self.amps[self.index_of(&permuted)] * *sign;
            }
            out.amps[idx] = acc * scale;
        }
        let norm = out.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroProjection { norm });
        }
        out.amps.iter_mut().for_each(|z| *z /= norm);
        Ok(out)
    }

    /// The Slater determinant of `orbitals`: amplitude det[φ_a(p_b)] / √η!.
    pub fn slater_oracle(orbitals: &[OrbitalVector], grid: &GridSpec) -> Result<Self> {
        let eta = orbitals.len();
        let n = grid.total_points();
        if let Some(o) = orbitals.iter().find(|o| o.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: o.len() });
        }
        let mut deviation = 0.0f64;
        for a in 0..eta {
            for b in 0..eta {
                let g = crate::linalg::inner(orbitals[a].coeffs(), orbitals[b].coeffs());
                let target = if a == b { 1.0 } else { 0.0 };
                deviation = deviation.max((g - target).norm());
            }
        }
        if deviation > 1e-8 {
            return Err(Error::NonOrthonormalInput { deviation });
        }
        let scale = 1.0 / factorial(eta).sqrt();
        Self::from_fn(grid, eta, |config| {
            let m = CMatrix::from_fn(eta, eta, |a, b| orbitals[a].coeffs()[config[b]]);
            m.determinant() * scale
        })
    }

    /// Same as [`slater_oracle`](Self::slater_oracle) for an N×η coefficient matrix.
    pub fn slater_from_coeffs(c_occ: &CMatrix, grid: &GridSpec) -> Result<Self> {
        let orbitals: Vec<OrbitalVector> = (0..c_occ.ncols())
            .map(|j| OrbitalVector::normalized(c_occ.column(j).iter().copied().collect()))
            .collect::<Result<_>>()?;
        Self::slater_oracle(&orbitals, grid)
    }

    /// Applies `U` (2^n × 2^n) to register `register` (0-based).
    ///
    /// The result is generally not antisymmetric and may populate padding
    /// values; callers treat it as a work state.
    pub fn apply_register_unitary(&self, register: usize, u: &CMatrix) -> Result<Self> {
        let dim = self.register_dim();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: u.nrows() });
        }
        if register >= self.eta {
            return Err(Error::IndexOutOfRange { index: register, limit: self.eta });
        }
        let deviation = unitarity_deviation(u);
        if deviation > 1e-8 {
            return Err(Error::NonUnitary { deviation });
        }
        let mut out = self.clone();
        out.apply_register_matrix(register, u);
        Ok(out)
    }

    /// In-place `I⊗…⊗M⊗…⊗I` where `M` acts on the first `M.nrows()` values of the register.
    pub(crate) fn apply_register_matrix(&mut self, register: usize, m: &CMatrix) {
        apply_register_matrix(&mut self.amps, self.qubits, self.eta, register, m);
    }

    /// Samples a joint computational-basis outcome from |amplitude|².
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let total: f64 = self.amps.iter().map(|z| z.norm_sqr()).sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (idx, z) in self.amps.iter().enumerate() {
            let p = z.norm_sqr();
            if p > 0.0 {
                last_nonzero = idx;
                acc += p;
                if acc > target {
                    return self.config_of(idx);
                }
            }
        }
        self.config_of(last_nonzero)
    }
}

pub(crate) fn apply_register_matrix(amps: &mut [C64], qubits: usize, eta: usize, register: usize, m: &CMatrix) {
    let reg_dim = 1usize << qubits;
    let dim = m.nrows();
    let stride = 1usize << (qubits * (eta - 1 - register));
    let block = stride * reg_dim;
    let mut gathered = vec![C64::new(0.0, 0.0); dim];
    for outer in (0..amps.len()).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            for (v, slot) in gathered.iter_mut().enumerate() {
                *slot = amps[base + v * stride];
            }
            for r in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    acc += m[(r, col)] * g;
                }
                amps[base + r * stride] = acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_isometry, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(1, n, n as f64).unwrap()
    }

    fn singlet() -> FirstQuantizedState {
        let g = grid(4);
        FirstQuantizedState::slater_oracle(&[OrbitalVector::basis(4, 0), OrbitalVector::basis(4, 1)], &g).unwrap()
    }

    #[test]
    fn antisymmetrize_two_particle_exchange() {
        let g = grid(4);
        let s = FirstQuantizedState::basis(&g, &[0, 1]).unwrap().antisymmetrize().unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(&[0, 1]) - c(r, 0.0)).norm() < 1e-14);
        assert!((s.amplitude(&[1, 0]) - c(-r, 0.0)).norm() < 1e-14);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn antisymmetrize_doubly_occupied_fails() {
        let g = grid(4);
        let err = FirstQuantizedState::basis(&g, &[0, 0]).unwrap().antisymmetrize().unwrap_err();
        assert!(matches!(err, Error::ZeroProjection { .. }));
    }

    #[test]
    fn antisymmetrize_matches_projector_matrix() {
        // Oracle: explicit 16×16 projector (I − SWAP)/2 on two 4-level registers.
        let g = grid(4);
        let mut input = FirstQuantizedState::zeros(&g, 2).unwrap();
        for p in 0..4 {
            for q in p + 1..4 {
                let idx = input.index_of(&[p, q]);
                input.amps[idx] = c(1.0 / 6f64.sqrt(), 0.0);
            }
        }
        let mut proj = CMatrix::zeros(16, 16);
        for p in 0..4 {
            for q in 0..4 {
                let a = p * 4 + q;
                let b = q * 4 + p;
                proj[(a, a)] += c(0.5, 0.0);
                proj[(a, b)] -= c(0.5, 0.0);
            }
        }
        let v = crate::linalg::CVector::from_column_slice(input.amplitudes());
        let w = &proj * v;
        let wn = w.norm();
        let expected: Vec<C64> = w.iter().map(|z| z / wn).collect();
        let got = input.antisymmetrize().unwrap();
        let ov = crate::linalg::inner(&expected, got.amplitudes()).norm();
        assert!((ov - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antisymmetrize_is_idempotent() {
        let g = grid(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut s =
            FirstQuantizedState::from_fn(&g, 3, |_| c(crate::linalg::gauss(&mut rng), crate::linalg::gauss(&mut rng)))
                .unwrap();
        s.normalize().unwrap();
        let once = s.antisymmetrize().unwrap();
        let twice = once.antisymmetrize().unwrap();
        let diff: f64 =
            once.amplitudes().iter().zip(twice.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        assert!(once.is_antisymmetric(1e-12));
    }

    #[test]
    fn slater_basis_orbitals() {
        let s = singlet();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(&[0, 1]).re - r).abs() < 1e-14);
        assert!((s.amplitude(&[1, 0]).re + r).abs() < 1e-14);
        assert!(s.is_antisymmetric(1e-14));
    }

    #[test]
    fn slater_single_particle_is_orbital() {
        let g = grid(4);
        let phi = OrbitalVector::normalized(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5), c(0.3, 0.0)]).unwrap();
        let s = FirstQuantizedState::slater_oracle(std::slice::from_ref(&phi), &g).unwrap();
        for p in 0..4 {
            assert!((s.amplitude(&[p]) - phi.coeffs()[p]).norm() < 1e-14);
        }
    }

    #[test]
    fn slater_rotation_invariance() {
        let g = grid(4);
        let r = 1.0 / 2f64.sqrt();
        let plus = OrbitalVector::new(vec![c(r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let minus = OrbitalVector::new(vec![c(r, 0.0), c(-r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let rotated = FirstQuantizedState::slater_oracle(&[plus, minus], &g).unwrap();
        // Direct 2×2 determinant per amplitude: φ+(p)φ−(q) − φ+(q)φ−(p), over √2.
        let f = |p: usize, q: usize| {
            let a = [r, r, 0.0, 0.0];
            let b = [r, -r, 0.0, 0.0];
            (a[p] * b[q] - a[q] * b[p]) / 2f64.sqrt()
        };
        for p in 0..4 {
            for q in 0..4 {
                assert!((rotated.amplitude(&[p, q]).re - f(p, q)).abs() < 1e-14);
            }
        }
        assert!((rotated.fidelity_modulus(&singlet()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slater_rejects_nonorthonormal() {
        let g = grid(4);
        let a = OrbitalVector::basis(4, 0);
        let err = FirstQuantizedState::slater_oracle(&[a.clone(), a], &g).unwrap_err();
        assert!(matches!(err, Error::NonOrthonormalInput { .. }));
    }

    #[test]
    fn slater_of_random_orbitals_is_antisymmetric_and_normalized() {
        let g = grid(6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c_occ = random_isometry(6, 3, &mut rng);
        let s = FirstQuantizedState::slater_from_coeffs(&c_occ, &g).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(s.is_antisymmetric(1e-12));
        // Antisymmetrizing the ordered-configuration superposition gives the same state.
        let orbitals = OrbitalVector::columns_of(&c_occ).unwrap();
        let ordered = FirstQuantizedState::from_fn(&g, 3, |cfg| {
            if cfg[0] < cfg[1] && cfg[1] < cfg[2] {
                CMatrix::from_fn(3, 3, |a, b| orbitals[a].coeffs()[cfg[b]]).determinant()
            } else {
                c(0.0, 0.0)
            }
        })
        .unwrap();
        let anti = ordered.antisymmetrize().unwrap();
        assert!((anti.fidelity_modulus(&s) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn register_unitary_identity_and_x() {
        let g = grid(4);
        let s = FirstQuantizedState::basis(&g, &[0, 1]).unwrap();
        let id = CMatrix::identity(4, 4);
        assert_eq!(s.apply_register_unitary(0, &id).unwrap(), s);
        // X on the low qubit of register 0 maps |0⟩ → |1⟩.
        let mut x = CMatrix::zeros(4, 4);
        for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            x[(a, b)] = c(1.0, 0.0);
        }
        let t = s.apply_register_unitary(0, &x).unwrap();
        assert!((t.amplitude(&[1, 1]).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn register_unitary_checks() {
        let s = singlet();
        let bad = CMatrix::identity(4, 4) * c(2.0, 0.0);
        assert!(matches!(s.apply_register_unitary(0, &bad), Err(Error::NonUnitary { .. })));
        assert!(matches!(s.apply_register_unitary(5, &CMatrix::identity(4, 4)), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn register_unitary_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = grid(4);
        let mut s =
            FirstQuantizedState::from_fn(&g, 3, |_| c(crate::linalg::gauss(&mut rng), crate::linalg::gauss(&mut rng)))
                .unwrap();
        s.normalize().unwrap();
        let u = random_unitary(4, &mut rng);
        for j in 0..3 {
            let t = s.apply_register_unitary(j, &u).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measure_basis_state_is_deterministic() {
        let g = grid(4);
        let s = FirstQuantizedState::basis(&g, &[2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(s.measure_all(&mut rng), vec![2, 3]);
        }
    }

    #[test]
    fn measure_singlet_frequencies() {
        let s = singlet();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 10_000;
        let hits = (0..draws).filter(|_| s.measure_all(&mut rng) == vec![0, 1]).count();
        let sigma = (draws as f64 * 0.25).sqrt();
        assert!((hits as f64 - draws as f64 * 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn brute_force_limit_refuses() {
        let g = GridSpec::new(3, 5, 1.0).unwrap(); // N = 125
        assert!(matches!(FirstQuantizedState::zeros(&g, 4), Err(Error::BruteForceLimitExceeded(_))));
        assert!(FirstQuantizedState::zeros(&g, 3).is_ok());
    }

    #[test]
    fn padding_is_rejected() {
        let g = grid(3); // n = 2, register dim 4
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[3] = c(1.0, 0.0);
        assert!(FirstQuantizedState::from_amplitudes(&g, 1, amps).is_err());
    }
}
