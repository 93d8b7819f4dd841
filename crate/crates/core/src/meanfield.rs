//! Real-time time-dependent Hartree–Fock on the grid delta-function basis.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{distance, GridSpec};
use crate::hamiltonian::{kinetic_matrix, CoulombKernel, NuclearConfig, PotentialTable};
use crate::linalg::{eigh, expm_hermitian, frobenius, hermiticity_deviation, CMatrix, C64, I};

const ORTHONORMALITY_TOL: f64 = 1e-8;
const MIDPOINT_MAX_ITER: usize = 20;
const MIDPOINT_TOL: f64 = 1e-10;

/// ‖C†C − 1‖_max.
pub fn orthonormality_deviation(c: &CMatrix) -> f64 {
    let g = c.adjoint() * c;
    let mut dev: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

#[derive(Clone, Debug)]
pub struct OccupiedOrbitals {
    coeffs: CMatrix,
    grid: GridSpec,
}

impl OccupiedOrbitals {
    pub fn new(coeffs: CMatrix, grid: &GridSpec) -> Result<Self> {
        if coeffs.nrows() != grid.total_points() {
            return Err(Error::DimensionMismatch { expected: grid.total_points(), got: coeffs.nrows() });
        }
        if coeffs.ncols() > coeffs.nrows() {
            return Err(Error::InvalidArgument("more occupied orbitals than grid points".into()));
        }
        let deviation = orthonormality_deviation(&coeffs);
        if deviation > ORTHONORMALITY_TOL {
            return Err(Error::NonOrthonormalInput { deviation });
        }
        Ok(OccupiedOrbitals { coeffs, grid: grid.clone() })
    }

    /// The η lowest-|k| plane waves e^{ik·r}/√N (ties broken by grid index).
    pub fn plane_waves(grid: &GridSpec, eta: usize) -> Result<Self> {
        let n = grid.total_points();
        if eta > n {
            return Err(Error::InvalidArgument(format!("η = {eta} exceeds N = {n}")));
        }
        let table = crate::hamiltonian::kinetic_phase_table(grid);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| table[a].total_cmp(&table[b]).then(a.cmp(&b)));
        let norm = 1.0 / (n as f64).sqrt();
        let coeffs = CMatrix::from_fn(n, eta, |p, j| {
            let k = grid.frequency(order[j]);
            let r = grid.position(p);
            C64::from_polar(norm, k[0] * r[0] + k[1] * r[1] + k[2] * r[2])
        });
        OccupiedOrbitals::new(coeffs, grid)
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn eta(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn density_matrix(&self) -> CMatrix {
        mean_field_1rdm(&self.coeffs)
    }
}

/// One-body matrix h and diagonal two-electron kernel v(μ,λ) on a grid.
#[derive(Clone, Debug)]
pub struct GridIntegrals {
    h: CMatrix,
    v: DMatrix<f64>,
    nuclear_repulsion: f64,
}

impl GridIntegrals {
    pub fn new(grid: &GridSpec, nuclei: &NuclearConfig, kernel: CoulombKernel) -> Result<Self> {
        let n = grid.total_points();
        let table = PotentialTable::new(grid, nuclei, kernel)?;
        let mut h = kinetic_matrix(grid);
        for (p, &u) in table.external().iter().enumerate() {
            h[(p, p)] += C64::new(u, 0.0);
        }
        let v = DMatrix::from_fn(n, n, |a, b| {
            if a == b {
                match kernel {
                    CoulombKernel::Bare => 0.0,
                    CoulombKernel::Softened { shift } => 1.0 / shift,
                }
            } else {
                table.pair(a, b).unwrap_or_else(|| 1.0 / distance(&grid.position(a), &grid.position(b)))
            }
        });
        Ok(GridIntegrals { h, v, nuclear_repulsion: nuclei.repulsion()? })
    }

    pub fn from_parts(h: CMatrix, v: DMatrix<f64>) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n || v.nrows() != n || v.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.nrows() });
        }
        let dev = hermiticity_deviation(&h);
        if dev > 1e-10 {
            return Err(Error::InvalidArgument(format!("h is not Hermitian (deviation {dev:.3e})")));
        }
        for a in 0..n {
            for b in 0..n {
                if v[(a, b)] < 0.0 || (v[(a, b)] - v[(b, a)]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument("v must be symmetric and nonnegative".into()));
                }
            }
        }
        Ok(GridIntegrals { h, v, nuclear_repulsion: 0.0 })
    }

    /// Same one-body part with the interaction switched off.
    pub fn without_interaction(&self) -> Self {
        let n = self.h.nrows();
        GridIntegrals { h: self.h.clone(), v: DMatrix::zeros(n, n), nuclear_repulsion: self.nuclear_repulsion }
    }

    pub fn one_body(&self) -> &CMatrix {
        &self.h
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn nuclear_repulsion(&self) -> f64 {
        self.nuclear_repulsion
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }
}

/// P = C C†.
pub fn mean_field_1rdm(c_occ: &CMatrix) -> CMatrix {
    c_occ * c_occ.adjoint()
}

/// F = h + diag(Σ_λ v(μ,λ)P_λλ) − ½ v∘P.
pub fn fock_from_density(p: &CMatrix, ints: &GridIntegrals) -> Result<CMatrix> {
    let n = ints.dim();
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.nrows() });
    }
    let mut f = ints.h.clone();
    for mu in 0..n {
        let coulomb: f64 = (0..n).map(|l| ints.v[(mu, l)] * p[(l, l)].re).sum();
        f[(mu, mu)] += C64::new(coulomb, 0.0);
        for nu in 0..n {
            f[(mu, nu)] -= p[(mu, nu)] * (0.5 * ints.v[(mu, nu)]);
        }
    }
    Ok(f)
}

pub fn build_fock(c_occ: &CMatrix, ints: &GridIntegrals) -> Result<CMatrix> {
    if c_occ.nrows() != ints.dim() {
        return Err(Error::DimensionMismatch { expected: ints.dim(), got: c_occ.nrows() });
    }
    fock_from_density(&mean_field_1rdm(c_occ), ints)
}

/// E = ½ tr[(h + F)P] (electronic part only).
pub fn hf_energy(c_occ: &CMatrix, ints: &GridIntegrals) -> Result<f64> {
    let p = mean_field_1rdm(c_occ);
    let f = fock_from_density(&p, ints)?;
    Ok(0.5 * ((&ints.h + f) * p).trace().re)
}

/// Largest |eigenvalue| of the Hermitian Fock matrix.
pub fn fock_spectral_norm(c_occ: &CMatrix, ints: &GridIntegrals) -> Result<f64> {
    let f = build_fock(c_occ, ints)?;
    Ok(eigh(&f).0.iter().fold(0.0f64, |m, e| m.max(e.abs())))
}

/// Smallest C with ‖F‖_i ≤ C·(η_i^{2/3}/δ_i + 1/δ_i²) over all samples (‖F‖, η, δ).
pub fn envelope_constant(samples: &[(f64, f64, f64)]) -> f64 {
    samples
        .iter()
        .map(|&(norm, eta, delta)| norm / (eta.powf(2.0 / 3.0) / delta + 1.0 / (delta * delta)))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TdhfScheme {
    ExponentialMidpoint,
    Rk4,
}

impl std::str::FromStr for TdhfScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" | "exponential-midpoint" => Ok(TdhfScheme::ExponentialMidpoint),
            "rk4" => Ok(TdhfScheme::Rk4),
            _ => Err(Error::InvalidArgument(format!("unknown TDHF scheme {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TdhfPlan {
    pub total_time: f64,
    pub steps: usize,
    pub scheme: TdhfScheme,
}

impl TdhfPlan {
    pub fn new(total_time: f64, steps: usize, scheme: TdhfScheme) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if !total_time.is_finite() {
            return Err(Error::InvalidArgument("total time must be finite".into()));
        }
        Ok(TdhfPlan { total_time, steps, scheme })
    }

    pub fn step_size(&self) -> f64 {
        self.total_time / self.steps as f64
    }
}

fn midpoint_step(c: &CMatrix, ints: &GridIntegrals, dt: f64) -> Result<CMatrix> {
    let p0 = mean_field_1rdm(c);
    let mut f_mid = fock_from_density(&p0, ints)?;
    let mut residual = f64::INFINITY;
    for _ in 0..MIDPOINT_MAX_ITER {
        let c1 = expm_hermitian(&f_mid, dt) * c;
        let p_mid = (&p0 + mean_field_1rdm(&c1)) * C64::new(0.5, 0.0);
        let f_new = fock_from_density(&p_mid, ints)?;
        residual = frobenius(&(&f_new - &f_mid));
        if residual < MIDPOINT_TOL {
            return Ok(c1);
        }
        f_mid = f_new;
    }
    Err(Error::ConvergenceFailure { iterations: MIDPOINT_MAX_ITER, residual })
}

fn rk4_step(c: &CMatrix, ints: &GridIntegrals, dt: f64) -> Result<CMatrix> {
    let rhs = |x: &CMatrix| -> Result<CMatrix> { Ok(build_fock(x, ints)? * x * (-I)) };
    let h = C64::new(dt, 0.0);
    let half = C64::new(dt / 2.0, 0.0);
    let k1 = rhs(c)?;
    let k2 = rhs(&(c + &k1 * half))?;
    let k3 = rhs(&(c + &k2 * half))?;
    let k4 = rhs(&(c + &k3 * h))?;
    Ok(c + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0))
}

/// One integrator step of i ∂C/∂t = F(C) C.
pub fn tdhf_step(
    orbitals: &OccupiedOrbitals,
    ints: &GridIntegrals,
    dt: f64,
    scheme: TdhfScheme,
) -> Result<OccupiedOrbitals> {
    if orbitals.coeffs.nrows() != ints.dim() {
        return Err(Error::DimensionMismatch { expected: ints.dim(), got: orbitals.coeffs.nrows() });
    }
    let coeffs = match scheme {
        TdhfScheme::ExponentialMidpoint => midpoint_step(&orbitals.coeffs, ints, dt)?,
        TdhfScheme::Rk4 => rk4_step(&orbitals.coeffs, ints, dt)?,
    };
    Ok(OccupiedOrbitals { coeffs, grid: orbitals.grid.clone() })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Observables {
    pub density_diagonal: bool,
    pub fock_norm: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub time: f64,
    pub energy: f64,
    pub density_diagonal: Option<Vec<f64>>,
    pub fock_norm: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TdhfTrajectory {
    pub points: Vec<TrajectoryPoint>,
    pub final_state: OccupiedOrbitals,
}

fn record(
    step: usize,
    time: f64,
    o: &OccupiedOrbitals,
    ints: &GridIntegrals,
    obs: Observables,
) -> Result<TrajectoryPoint> {
    Ok(TrajectoryPoint {
        step,
        time,
        energy: hf_energy(&o.coeffs, ints)?,
        density_diagonal: obs.density_diagonal.then(|| o.density_matrix().diagonal().iter().map(|z| z.re).collect()),
        fock_norm: if obs.fock_norm { Some(fock_spectral_norm(&o.coeffs, ints)?) } else { None },
    })
}

/// Runs the plan, recording energy (and any requested observables) at every step, including step 0.
pub fn evolve_tdhf(
    orbitals: &OccupiedOrbitals,
    ints: &GridIntegrals,
    plan: &TdhfPlan,
    obs: Observables,
) -> Result<TdhfTrajectory> {
    let dt = plan.step_size();
    let mut cur = orbitals.clone();
    let mut points = vec![record(0, 0.0, &cur, ints, obs)?];
    for step in 1..=plan.steps {
        cur = tdhf_step(&cur, ints, dt, plan.scheme)?;
        points.push(record(step, step as f64 * dt, &cur, ints, obs)?);
    }
    Ok(TdhfTrajectory { points, final_state: cur })
}

/// Final orbitals only.
pub fn propagate_tdhf(orbitals: &OccupiedOrbitals, ints: &GridIntegrals, plan: &TdhfPlan) -> Result<OccupiedOrbitals> {
    let dt = plan.step_size();
    let mut cur = orbitals.clone();
    for _ in 0..plan.steps {
        cur = tdhf_step(&cur, ints, dt, plan.scheme)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{kinetic_phase_table, Nucleus};
    use crate::linalg::{max_abs, random_isometry};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (GridSpec, GridIntegrals) {
        let g = GridSpec::new(1, 6, 6.0).unwrap();
        let nuc = NuclearConfig::new(vec![Nucleus { charge: 1, position: [0.5, 0.0, 0.0] }]).unwrap();
        let ints = GridIntegrals::new(&g, &nuc, CoulombKernel::Bare).unwrap();
        (g, ints)
    }

    #[test]
    fn empty_density_gives_h() {
        let (_, ints) = setup();
        let f = build_fock(&CMatrix::zeros(6, 0), &ints).unwrap();
        assert!(max_abs(&(f - ints.one_body())) == 0.0);
        let norm = fock_spectral_norm(&CMatrix::zeros(6, 0), &ints).unwrap();
        let h_norm = eigh(ints.one_body()).0.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        assert!((norm - h_norm).abs() < 1e-12);
    }

    #[test]
    fn constant_kernel_single_electron() {
        let n = 4;
        let h = CMatrix::zeros(n, n);
        let cst = 0.7;
        let ints = GridIntegrals::from_parts(h, DMatrix::from_element(n, n, cst)).unwrap();
        let c = CMatrix::from_fn(n, 1, |p, _| C64::new(if p == 0 { 1.0 } else { 0.0 }, 0.0));
        let f = build_fock(&c, &ints).unwrap();
        for mu in 0..n {
            let expected = if mu == 0 { cst - cst / 2.0 } else { cst };
            assert!((f[(mu, mu)].re - expected).abs() < 1e-15);
        }
        assert!(f.iter().enumerate().all(|(i, z)| i % (n + 1) == 0 || z.norm() == 0.0));
    }

    #[test]
    fn fock_is_hermitian_and_covariant() {
        let (_, ints) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_isometry(6, 2, &mut rng);
        let f = build_fock(&c, &ints).unwrap();
        assert!(hermiticity_deviation(&f) < 1e-10);

        let perm = [3, 0, 5, 1, 4, 2];
        let pm = CMatrix::from_fn(6, 6, |a, b| C64::new(if perm[b] == a { 1.0 } else { 0.0 }, 0.0));
        let h2 = &pm * ints.one_body() * pm.adjoint();
        let v2 = DMatrix::from_fn(6, 6, |a, b| {
            let ia = perm.iter().position(|&x| x == a).unwrap();
            let ib = perm.iter().position(|&x| x == b).unwrap();
            ints.kernel()[(ia, ib)]
        });
        let ints2 = GridIntegrals::from_parts(h2, v2).unwrap();
        let f2 = build_fock(&(&pm * &c), &ints2).unwrap();
        assert!(max_abs(&(f2 - &pm * f * pm.adjoint())) < 1e-12);
    }

    #[test]
    fn noninteracting_matches_exponential() {
        let (g, ints) = setup();
        let free = ints.without_interaction();
        let orb = OccupiedOrbitals::plane_waves(&g, 2).unwrap();
        let plan = TdhfPlan::new(0.6, 30, TdhfScheme::ExponentialMidpoint).unwrap();
        let out = propagate_tdhf(&orb, &free, &plan).unwrap();
        let exact = expm_hermitian(free.one_body(), 0.6) * orb.coeffs();
        assert!(max_abs(&(out.coeffs() - exact)) < 1e-10);
        let out = tdhf_step(&orb, &ints, 0.0, TdhfScheme::ExponentialMidpoint).unwrap();
        assert!(max_abs(&(out.coeffs() - orb.coeffs())) < 1e-12);
    }

    #[test]
    fn free_fock_norm_is_max_kinetic() {
        let g = GridSpec::new(1, 7, 5.0).unwrap();
        let ints = GridIntegrals::new(&g, &NuclearConfig::empty(), CoulombKernel::Bare).unwrap().without_interaction();
        let orb = OccupiedOrbitals::plane_waves(&g, 3).unwrap();
        let max_k = kinetic_phase_table(&g).into_iter().fold(0.0, f64::max);
        assert!((fock_spectral_norm(orb.coeffs(), &ints).unwrap() - max_k).abs() < 1e-10);
    }

    #[test]
    fn density_is_projector() {
        let c = CMatrix::identity(5, 2);
        let p = mean_field_1rdm(&c);
        for i in 0..5 {
            assert_eq!(p[(i, i)].re, if i < 2 { 1.0 } else { 0.0 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_isometry(6, 3, &mut rng);
        let (vals, _) = eigh(&mean_field_1rdm(&c));
        assert!(vals.iter().all(|&e| e.abs() < 1e-10 || (e - 1.0).abs() < 1e-10));
    }

    #[test]
    fn short_trajectory_preserves_structure() {
        let (g, ints) = setup();
        let orb = OccupiedOrbitals::plane_waves(&g, 2).unwrap();
        let plan = TdhfPlan::new(0.2, 20, TdhfScheme::ExponentialMidpoint).unwrap();
        let traj = evolve_tdhf(&orb, &ints, &plan, Observables { density_diagonal: true, fock_norm: false }).unwrap();
        assert_eq!(traj.points.len(), 21);
        let p = traj.final_state.density_matrix();
        assert!((p.trace().re - 2.0).abs() < 1e-10);
        assert!(frobenius(&(&p * &p - &p)) < 1e-10);
        let e0 = traj.points[0].energy;
        assert!(traj.points.iter().all(|pt| (pt.energy - e0).abs() < 1e-6));
        assert!(orthonormality_deviation(traj.final_state.coeffs()) < 1e-10);
    }

    #[test]
    fn rk4_agrees_with_midpoint() {
        let (g, ints) = setup();
        let orb = OccupiedOrbitals::plane_waves(&g, 2).unwrap();
        let a = propagate_tdhf(&orb, &ints, &TdhfPlan::new(0.1, 200, TdhfScheme::Rk4).unwrap()).unwrap();
        let b =
            propagate_tdhf(&orb, &ints, &TdhfPlan::new(0.1, 200, TdhfScheme::ExponentialMidpoint).unwrap()).unwrap();
        assert!(max_abs(&(a.coeffs() - b.coeffs())) < 1e-5);
    }
}
