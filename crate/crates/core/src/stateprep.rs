//! Slater-determinant preparation: a layered Givens network in second quantization,
//! followed by a sliding-window conversion to first quantization and antisymmetrization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::linalg::{eigh, frobenius, CMatrix, CVector, C64};
use crate::meanfield::{mean_field_1rdm, orthonormality_deviation};
use crate::perm::{factorial, permutations_with_sign};
use crate::state::FirstQuantizedState;

const RESIDUAL_TOL: f64 = 1e-9;
const POPULATION_TOL: f64 = 1e-10;

/// Rotation G(θ,φ) on adjacent orbitals (a, a+1):
/// e_a ↦ cos θ e_a + e^{−iφ} sin θ e_{a+1}, e_{a+1} ↦ −e^{iφ} sin θ e_a + cos θ e_{a+1}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivensRotation {
    pub orbital_a: usize,
    pub orbital_b: usize,
    pub theta: f64,
    pub phi: f64,
}

impl GivensRotation {
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), -e * s], [e.conj() * s, C64::new(c, 0.0)]]
    }

    /// Applies the rotation to rows (a, b) of `m`.
    fn apply_rows(&self, m: &mut CMatrix) {
        let g = self.matrix();
        for col in 0..m.ncols() {
            let xa = m[(self.orbital_a, col)];
            let xb = m[(self.orbital_b, col)];
            m[(self.orbital_a, col)] = g[0][0] * xa + g[0][1] * xb;
            m[(self.orbital_b, col)] = g[1][0] * xa + g[1][1] * xb;
        }
    }

    fn apply_rows_adjoint(&self, m: &mut CMatrix) {
        let g = self.matrix();
        for col in 0..m.ncols() {
            let xa = m[(self.orbital_a, col)];
            let xb = m[(self.orbital_b, col)];
            m[(self.orbital_a, col)] = g[0][0].conj() * xa + g[1][0].conj() * xb;
            m[(self.orbital_b, col)] = g[0][1].conj() * xa + g[1][1].conj() * xb;
        }
    }
}

/// Layer q (0-based) acts inside the orbital window [q, q+η]; rotations are stored in
/// the order they are applied when preparing the state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GivensNetwork {
    pub orbitals: usize,
    pub eta: usize,
    pub layers: Vec<Vec<GivensRotation>>,
}

impl GivensNetwork {
    pub fn rotation_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_layer_local(&self) -> bool {
        self.layers.iter().enumerate().all(|(q, layer)| {
            layer.iter().all(|r| r.orbital_a >= q && r.orbital_b == r.orbital_a + 1 && r.orbital_b <= q + self.eta)
        })
    }

    /// Single-particle unitary of the whole network.
    pub fn unitary(&self) -> CMatrix {
        let mut u = CMatrix::identity(self.orbitals, self.orbitals);
        for rot in self.layers.iter().flatten() {
            rot.apply_rows(&mut u);
        }
        u
    }

    /// Network applied to the reference determinant (first η orbitals).
    pub fn occupied_coefficients(&self) -> CMatrix {
        let mut c = CMatrix::identity(self.orbitals, self.eta);
        for rot in self.layers.iter().flatten() {
            rot.apply_rows(&mut c);
        }
        c
    }
}

/// Unit vector orthogonal to the columns of `b` ((η+1)×η), preferring the one closest to e_last.
fn window_null_vector(b: &CMatrix) -> CVector {
    let m = b.nrows();
    let (vals, vecs) = eigh(&(b * b.adjoint()));
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
    let mut u = CVector::zeros(m);
    for &i in order.iter().filter(|&&i| vals[i] < 1e-14) {
        let v = vecs.column(i);
        u += v * v[m - 1].conj();
    }
    let norm = u.norm();
    if norm > 1e-8 {
        u / C64::new(norm, 0.0)
    } else {
        vecs.column(order[0]).into_owned()
    }
}

/// Elimination rotation taking (x_a, x_b) to (0, ·), expressed as the preparation
/// rotation it undoes; `None` when x_a already vanishes.
fn eliminating_rotation(a: usize, xa: C64, xb: C64) -> Option<GivensRotation> {
    if xa.norm() == 0.0 {
        return None;
    }
    let theta = xa.norm().atan2(xb.norm());
    let arg_b = if xb.norm() == 0.0 { 0.0 } else { xb.arg() };
    let phi = xa.arg() - arg_b + std::f64::consts::PI;
    Some(GivensRotation { orbital_a: a, orbital_b: a + 1, theta, phi })
}

/// Layered Givens network whose action on the first η orbitals spans the columns of `c_occ`.
pub fn givens_decompose(c_occ: &CMatrix) -> Result<GivensNetwork> {
    let (n, eta) = (c_occ.nrows(), c_occ.ncols());
    if eta == 0 || eta > n {
        return Err(Error::InvalidArgument(format!("need 1 <= η <= N, got η = {eta}, N = {n}")));
    }
    let deviation = orthonormality_deviation(c_occ);
    if deviation > 1e-8 {
        return Err(Error::NonOrthonormalInput { deviation });
    }
    let mut work = c_occ.clone();
    let mut layers = vec![Vec::new(); n - eta];
    for q in (0..n - eta).rev() {
        let block = work.rows(q, eta + 1).into_owned();
        let mut x = window_null_vector(&block);
        // chain of eliminations pushing x into its last entry
        let mut elim = Vec::new();
        for a in 0..eta {
            if let Some(rot) = eliminating_rotation(a, x[a], x[a + 1]) {
                let g = rot.matrix();
                let (xa, xb) = (x[a], x[a + 1]);
                x[a] = g[0][0].conj() * xa + g[1][0].conj() * xb;
                x[a + 1] = g[0][1].conj() * xa + g[1][1].conj() * xb;
                elim.push(GivensRotation { orbital_a: q + a, orbital_b: q + a + 1, ..rot });
            }
        }
        for rot in &elim {
            rot.apply_rows_adjoint(&mut work);
        }
        let residual = work.row(q + eta).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if residual > RESIDUAL_TOL {
            return Err(Error::DecompositionFailure { residual });
        }
        elim.reverse();
        layers[q] = elim;
    }
    let network = GivensNetwork { orbitals: n, eta, layers };
    let residual = projector_distance(&network.occupied_coefficients(), c_occ);
    if residual > RESIDUAL_TOL {
        return Err(Error::DecompositionFailure { residual });
    }
    Ok(network)
}

/// ‖AA† − BB†‖_F.
pub fn projector_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(mean_field_1rdm(a) - mean_field_1rdm(b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToffoliVariant {
    Basic,
    Improved,
}

/// ⌈log₂ x⌉ for x ≥ 1.
fn ceil_log2(x: usize) -> u64 {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as u64
}

/// Width of the electron counter ξ: ⌈log₂(η+1)⌉.
pub fn counter_qubits(eta: usize) -> u64 {
    ceil_log2(eta + 1)
}

/// Leading-order Toffoli count of the conversion.
pub fn toffoli_count(n: usize, eta: usize, variant: ToffoliVariant) -> Result<u64> {
    if n < 2 || eta < 1 || eta >= n {
        return Err(Error::InvalidArgument(format!("need N >= 2 and 1 <= η < N, got N = {n}, η = {eta}")));
    }
    let (n64, e) = (n as u64, eta as u64);
    let n_eta = counter_qubits(eta);
    Ok(match variant {
        ToffoliVariant::Basic => n64 * (2 * e + n_eta - 3 + e * ceil_log2(n)),
        ToffoliVariant::Improved => n64 * (3 * e + n_eta - 2),
    })
}

/// Order-of-magnitude estimate η log η log N for the antisymmetrization sort (not ledger-checked).
pub fn antisymmetrization_estimate(n: usize, eta: usize) -> f64 {
    let e = eta as f64;
    if eta < 2 {
        return 0.0;
    }
    e * e.log2() * (n as f64).log2()
}

/// Per-primitive Toffoli tallies of the improved conversion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToffoliLedger {
    pub increment: u64,
    pub controlled_unary: u64,
    pub simultaneous_unary: u64,
    pub multi_controlled_not: u64,
}

impl ToffoliLedger {
    pub fn total(&self) -> u64 {
        self.increment + self.controlled_unary + self.simultaneous_unary + self.multi_controlled_not
    }

    /// One conversion step: 3η + n_η − 2 Toffolis.
    pub fn record_step(&mut self, eta: usize) {
        let e = eta as u64;
        self.increment += counter_qubits(eta) - 1;
        self.controlled_unary += e - 1;
        self.simultaneous_unary += e;
        self.multi_controlled_not += e;
    }
}

/// One computational branch of the joint register space: the occupied second-quantized
/// modes still in the window, the counter ξ, and the η first-quantized registers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConversionRegisters {
    pub occupied: Vec<usize>,
    pub xi: usize,
    pub registers: Vec<usize>,
}

impl ConversionRegisters {
    pub fn new(occupied: Vec<usize>, eta: usize) -> Self {
        let mut occupied = occupied;
        occupied.sort_unstable();
        ConversionRegisters { occupied, xi: 0, registers: vec![0; eta] }
    }

    /// Consumes window qubit q: if occupied, writes q into register ξ, increments ξ and
    /// clears the qubit; otherwise nothing changes.
    pub fn conversion_step(&mut self, q: usize) -> Result<()> {
        let Some(pos) = self.occupied.iter().position(|&m| m == q) else {
            return Ok(());
        };
        if self.xi >= self.registers.len() {
            return Err(Error::OrderingViolation { previous: self.registers.last().copied().unwrap_or(0), label: q });
        }
        if self.xi > 0 && self.registers[self.xi - 1] >= q {
            return Err(Error::OrderingViolation { previous: self.registers[self.xi - 1], label: q });
        }
        self.registers[self.xi] = q;
        self.xi += 1;
        self.occupied.remove(pos);
        Ok(())
    }

    /// Adjacent-mode rotation on the occupation pattern; returns the branch images.
    fn rotate(&self, rot: &GivensRotation) -> Vec<(ConversionRegisters, C64)> {
        let has_a = self.occupied.contains(&rot.orbital_a);
        let has_b = self.occupied.contains(&rot.orbital_b);
        if has_a == has_b {
            return vec![(self.clone(), C64::new(1.0, 0.0))];
        }
        let g = rot.matrix();
        let swap = |from: usize, to: usize| {
            let mut r = self.clone();
            for m in r.occupied.iter_mut() {
                if *m == from {
                    *m = to;
                }
            }
            r
        };
        if has_a {
            vec![(self.clone(), g[0][0]), (swap(rot.orbital_a, rot.orbital_b), g[1][0])]
        } else {
            vec![(swap(rot.orbital_b, rot.orbital_a), g[0][1]), (self.clone(), g[1][1])]
        }
    }
}

type JointState = BTreeMap<ConversionRegisters, C64>;

fn apply_rotation(state: JointState, rot: &GivensRotation) -> JointState {
    let mut out = JointState::new();
    for (branch, amp) in state {
        for (img, w) in branch.rotate(rot) {
            *out.entry(img).or_insert(C64::new(0.0, 0.0)) += amp * w;
        }
    }
    out.retain(|_, z| z.norm() > 0.0);
    out
}

fn apply_conversion(state: JointState, q: usize, eta: usize, ledger: &mut ToffoliLedger) -> Result<JointState> {
    let mut out = JointState::new();
    for (mut branch, amp) in state {
        branch.conversion_step(q)?;
        if out.insert(branch, amp).is_some() {
            return Err(Error::NonUnitary { deviation: amp.norm() });
        }
    }
    ledger.record_step(eta);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Preparation {
    pub state: FirstQuantizedState,
    pub network: GivensNetwork,
    pub ledger: ToffoliLedger,
    /// Population left outside the (empty window, ξ = η) subspace before antisymmetrization.
    pub residual_population: f64,
}

/// Prepares the antisymmetric first-quantized Slater determinant of `c_occ`.
pub fn prepare_slater(c_occ: &CMatrix, grid: &GridSpec) -> Result<FirstQuantizedState> {
    Ok(prepare_slater_traced(c_occ, grid)?.state)
}

pub fn prepare_slater_traced(c_occ: &CMatrix, grid: &GridSpec) -> Result<Preparation> {
    let (n, eta) = (c_occ.nrows(), c_occ.ncols());
    if n != grid.total_points() {
        return Err(Error::DimensionMismatch { expected: grid.total_points(), got: n });
    }
    let mut out = FirstQuantizedState::zeros(grid, eta)?;
    let network = givens_decompose(c_occ)?;

    let mut joint = JointState::new();
    joint.insert(ConversionRegisters::new((0..eta).collect(), eta), C64::new(1.0, 0.0));
    let mut ledger = ToffoliLedger::default();
    for q in 0..n {
        if let Some(layer) = network.layers.get(q) {
            for rot in layer {
                joint = apply_rotation(joint, rot);
            }
        }
        joint = apply_conversion(joint, q, eta, &mut ledger)?;
        debug_assert!(joint.keys().all(|b| b.occupied.iter().all(|&m| m > q && m <= q + eta)));
    }

    let residual_population: f64 =
        joint.iter().filter(|(b, _)| !b.occupied.is_empty() || b.xi != eta).map(|(_, z)| z.norm_sqr()).sum();
    if residual_population > POPULATION_TOL {
        return Err(Error::ResidualPopulation { population: residual_population });
    }

    let norm = 1.0 / factorial(eta).sqrt();
    let perms = permutations_with_sign(eta);
    let amps = out.amplitudes_mut();
    let mut config = vec![0; eta];
    let qubits = grid.qubits_per_register();
    for (branch, amp) in joint.iter().filter(|(b, _)| b.occupied.is_empty() && b.xi == eta) {
        for (perm, sign) in &perms {
            for (slot, &src) in config.iter_mut().zip(perm) {
                *slot = branch.registers[src];
            }
            let idx = config.iter().fold(0usize, |acc, &p| (acc << qubits) | p);
            amps[idx] += amp * (sign * norm);
        }
    }
    Ok(Preparation { state: out, network, ledger, residual_population })
}
