//! Leading-order cost formulas for classical mean-field and exact quantum dynamics.
//!
//! Sub-polynomial factors such as (Nt/ε)^{o(1)} are reported as exactly 1.

use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostQuery {
    pub n: f64,
    pub eta: f64,
    pub t: f64,
    pub epsilon: f64,
    pub m: Option<f64>,
    pub l: Option<f64>,
    pub lambda: Option<f64>,
    pub c_samp: Option<f64>,
    pub k: Option<u32>,
}

impl CostQuery {
    pub fn new(n: f64, eta: f64, t: f64, epsilon: f64) -> Result<Self> {
        let q = CostQuery { n, eta, t, epsilon, ..Default::default() };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        positive("N", self.n)?;
        positive("η", self.eta)?;
        positive("t", self.t)?;
        positive("ε", self.epsilon)?;
        if self.eta < 1.0 || self.n < self.eta {
            return Err(Error::InvalidArgument(format!("need N >= η >= 1, got N = {}, η = {}", self.n, self.eta)));
        }
        if self.epsilon > 1.0 {
            return Err(Error::InvalidArgument(format!("ε must be <= 1, got {}", self.epsilon)));
        }
        for (name, v) in [("M", self.m), ("L", self.l), ("λ", self.lambda), ("C_samp", self.c_samp)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if self.m.is_some_and(|m| m > self.n) {
            return Err(Error::InvalidArgument("M must not exceed N".into()));
        }
        Ok(())
    }

    /// α with N = η^α (undefined for η = 1).
    pub fn alpha(&self) -> Option<f64> {
        (self.eta > 1.0).then(|| self.n.ln() / self.eta.ln())
    }
}

/// Zero-temperature mean field: N^{4/3}η^{7/3}t + N^{5/3}η^{4/3}t.
pub fn classical_mf_cost(q: &CostQuery) -> f64 {
    let (n, e, t) = (q.n, q.eta, q.t);
    n.powf(4.0 / 3.0) * e.powf(7.0 / 3.0) * t + n.powf(5.0 / 3.0) * e.powf(4.0 / 3.0) * t
}

/// Finite-temperature density-matrix propagation: N^{4/3}M²η^{1/3}t + N^{5/3}M²t/η^{2/3}.
pub fn classical_finite_t_cost(q: &CostQuery) -> Result<f64> {
    let m = q.m.ok_or(Error::MissingM)?;
    let (n, e, t) = (q.n, q.eta, q.t);
    Ok(n.powf(4.0 / 3.0) * m * m * e.powf(1.0 / 3.0) * t + n.powf(5.0 / 3.0) * m * m * t / e.powf(2.0 / 3.0))
}

/// Finite temperature by sampled zero-temperature trajectories: mean-field cost / ε².
pub fn classical_sampled_trajectories_cost(q: &CostQuery) -> f64 {
    classical_mf_cost(q) / (q.epsilon * q.epsilon)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumCost {
    pub algorithm: String,
    pub value: f64,
    pub hypothetical: bool,
}

pub const SECOND_QUANTIZED_TROTTER: &str = "second quantized Trotter";
pub const FIRST_QUANTIZED_TROTTER: &str = "first quantized Trotter";
pub const INTERACTION_PICTURE: &str = "interaction picture";
pub const QUBITIZATION: &str = "qubitization";
pub const FAST_MULTIPOLE: &str = "fast multipole (hypothetical)";

pub fn first_quantized_trotter_cost(q: &CostQuery) -> f64 {
    let (n, e, t) = (q.n, q.eta, q.t);
    n.powf(1.0 / 3.0) * e.powf(7.0 / 3.0) * t + n.powf(2.0 / 3.0) * e.powf(4.0 / 3.0) * t
}

pub fn interaction_picture_cost(q: &CostQuery) -> f64 {
    q.n.powf(1.0 / 3.0) * q.eta.powf(8.0 / 3.0) * q.t
}

pub fn second_quantized_trotter_cost(q: &CostQuery) -> f64 {
    let (n, e, t) = (q.n, q.eta, q.t);
    n.powf(4.0 / 3.0) * e.powf(1.0 / 3.0) * t + n.powf(5.0 / 3.0) * t / e.powf(2.0 / 3.0)
}

pub fn fast_multipole_cost(q: &CostQuery) -> f64 {
    let (n, e, t) = (q.n, q.eta, q.t);
    n.powf(1.0 / 3.0) * e.powf(4.0 / 3.0) * t + n.powf(2.0 / 3.0) * e.powf(1.0 / 3.0) * t
}

pub fn quantum_costs(q: &CostQuery) -> Vec<QuantumCost> {
    let entry =
        |name: &str, value: f64, hypothetical: bool| QuantumCost { algorithm: name.into(), value, hypothetical };
    vec![
        entry(FIRST_QUANTIZED_TROTTER, first_quantized_trotter_cost(q), false),
        entry(INTERACTION_PICTURE, interaction_picture_cost(q), false),
        entry(SECOND_QUANTIZED_TROTTER, second_quantized_trotter_cost(q), false),
        entry(FAST_MULTIPOLE, fast_multipole_cost(q), true),
    ]
}

/// Classical η-exponent β for N = η^α.
pub fn beta_classical(alpha: f64) -> f64 {
    if alpha <= 3.0 {
        (4.0 * alpha + 7.0) / 3.0
    } else {
        (5.0 * alpha + 4.0) / 3.0
    }
}

/// Quantum η-exponent β for N = η^α.
pub fn beta_quantum(alpha: f64) -> f64 {
    if alpha <= 2.0 {
        (4.0 * alpha + 1.0) / 3.0
    } else if alpha <= 3.0 {
        (alpha + 7.0) / 3.0
    } else if alpha <= 4.0 {
        (2.0 * alpha + 4.0) / 3.0
    } else {
        (alpha + 8.0) / 3.0
    }
}

pub fn beta_exponents(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("α must be >= 1, got {alpha}")));
    }
    Ok((beta_classical(alpha), beta_quantum(alpha)))
}

pub fn speedup_exponent(alpha: f64) -> Result<f64> {
    let (c, q) = beta_exponents(alpha)?;
    Ok(c / q)
}

/// Best quantum algorithm in the regime N = η^α.
pub fn optimal_quantum_label(alpha: f64) -> &'static str {
    if alpha <= 2.0 {
        SECOND_QUANTIZED_TROTTER
    } else if alpha <= 3.0 {
        "first quantized Trotter (N^{1/3}η^{7/3} regime)"
    } else if alpha < 4.0 {
        "first quantized Trotter (N^{2/3}η^{4/3} regime)"
    } else if alpha == 4.0 {
        QUBITIZATION
    } else {
        INTERACTION_PICTURE
    }
}

/// Dominant classical mean-field term in the regime N = η^α.
pub fn optimal_classical_term(alpha: f64) -> &'static str {
    if alpha <= 3.0 {
        "N^{4/3}η^{7/3}t"
    } else {
        "N^{5/3}η^{4/3}t"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub alpha: f64,
    pub beta_classical: f64,
    pub beta_quantum: f64,
    pub speedup: f64,
    pub optimal_quantum: String,
    pub optimal_classical_term: String,
}

pub fn regime_row(alpha: f64) -> Result<RegimeRow> {
    let (c, q) = beta_exponents(alpha)?;
    Ok(RegimeRow {
        alpha,
        beta_classical: c,
        beta_quantum: q,
        speedup: c / q,
        optimal_quantum: optimal_quantum_label(alpha).into(),
        optimal_classical_term: optimal_classical_term(alpha).into(),
    })
}

/// Rows for α = lo, lo + step, …, up to hi inclusive (with a 1e-9 tolerance on the end point).
pub fn regime_table(lo: f64, hi: f64, step: f64) -> Result<Vec<RegimeRow>> {
    if !(step > 0.0 && step.is_finite()) || hi < lo {
        return Err(Error::InvalidArgument(format!("invalid α range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| regime_row(lo + i as f64 * step)).collect()
}

/// λ_ν = Σ_{ν ≠ 0} 1/‖ν‖² over the centered integer cube of side `points_per_axis` (odd).
pub fn lambda_nu(points_per_axis: usize) -> Result<f64> {
    if points_per_axis.is_multiple_of(2) || points_per_axis == 0 {
        return Err(Error::InvalidGrid(format!("lattice sum needs an odd side, got {points_per_axis}")));
    }
    let h = (points_per_axis / 2) as i64;
    // accumulate by shell so equal-norm terms are added once
    let mut shells = std::collections::BTreeMap::<i64, u64>::new();
    for x in -h..=h {
        for y in -h..=h {
            for z in -h..=h {
                let s = x * x + y * y + z * z;
                if s > 0 {
                    *shells.entry(s).or_default() += 1;
                }
            }
        }
    }
    Ok(shells.iter().map(|(&s, &c)| c as f64 / s as f64).sum())
}

/// 4πN^{1/3}.
pub fn lambda_nu_bound(total_points: f64) -> f64 {
    4.0 * PI * total_points.cbrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub cell_volume: f64,
    pub eta: usize,
    pub points_per_axis: usize,
    pub charges: Vec<u32>,
    pub p_eq: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaValues {
    pub lambda_nu: f64,
    pub lambda_nu_bound: f64,
    pub lambda_u: f64,
    pub lambda_v: f64,
}

pub fn lambda_params(p: &LambdaParams) -> Result<LambdaValues> {
    if !(p.cell_volume > 0.0) {
        return Err(Error::InvalidArgument("Ω must be positive".into()));
    }
    if !(p.p_eq > 0.0 && p.p_eq <= 1.0) {
        return Err(Error::InvalidArgument("P_eq must lie in (0, 1]".into()));
    }
    let nu = lambda_nu(p.points_per_axis)?;
    let scale = PI * p.cell_volume.cbrt();
    let eta = p.eta as f64;
    let zeta: f64 = p.charges.iter().map(|&z| z as f64).sum();
    Ok(LambdaValues {
        lambda_nu: nu,
        lambda_nu_bound: lambda_nu_bound((p.points_per_axis as f64).powi(3)),
        lambda_u: eta * zeta * nu / scale,
        lambda_v: eta * (eta - 1.0) * nu / (2.0 * scale),
    })
}

fn effective_lambda(p: &LambdaParams) -> Result<f64> {
    if p.eta < 2 {
        return Err(Error::EtaTooSmall(p.eta));
    }
    let l = lambda_params(p)?;
    Ok(l.lambda_u + l.lambda_v / (1.0 - 1.0 / p.eta as f64))
}

/// 𝒩 = 3T(λ_U + λ_V/(1−1/η))/(P_eq ln 2), with the O(1) term dropped.
pub fn interaction_picture_steps(total_time: f64, p: &LambdaParams) -> Result<f64> {
    Ok(3.0 * total_time * effective_lambda(p)? / (p.p_eq * LN_2))
}

/// Qubitization walk steps eT(λ_U + λ_V/(1−1/η))/P_eq.
pub fn qubitization_steps(total_time: f64, p: &LambdaParams) -> Result<f64> {
    Ok(E * total_time * effective_lambda(p)? / p.p_eq)
}

/// Overhead of time evolution over qubitization, 3/(e ln 2).
pub fn interaction_picture_overhead() -> f64 {
    3.0 / (E * LN_2)
}

/// Energy observable norm N^{1/3}η^{5/3} + N^{2/3}η^{1/3}.
pub fn energy_lambda(n: f64, eta: f64) -> f64 {
    n.cbrt() * eta.powf(5.0 / 3.0) + n.powf(2.0 / 3.0) * eta.cbrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCosts {
    pub shadows: Option<f64>,
    pub gradient: Option<f64>,
    pub energy: Option<f64>,
}

/// Measurement rows: shadows k^kη^kL·C/ε², gradient √L·C·λ/ε, energy √L·C·t·λ_E/ε.
/// Rows whose inputs are absent are `None`.
pub fn measurement_costs(q: &CostQuery) -> MeasurementCosts {
    let eps = q.epsilon;
    let shadows = match (q.k, q.l, q.c_samp) {
        (Some(k), Some(l), Some(c)) => {
            let kf = k as f64;
            Some(kf.powf(kf) * q.eta.powf(kf) * l * c / (eps * eps))
        }
        _ => None,
    };
    let gradient = match (q.l, q.c_samp, q.lambda) {
        (Some(l), Some(c), Some(lam)) => Some(l.sqrt() * c * lam / eps),
        _ => None,
    };
    let energy = match (q.l, q.c_samp) {
        (Some(l), Some(c)) => Some(l.sqrt() * c * q.t * energy_lambda(q.n, q.eta) / eps),
        _ => None,
    };
    MeasurementCosts { shadows, gradient, energy }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub query: CostQuery,
    pub alpha: Option<f64>,
    pub classical_mean_field: f64,
    pub classical_finite_t: Option<f64>,
    pub classical_sampled_trajectories: f64,
    pub quantum: Vec<QuantumCost>,
    pub measurement: MeasurementCosts,
    pub regime: Option<String>,
    /// Cheapest non-hypothetical quantum entry.
    pub optimal_quantum: String,
    pub suppressed_factors: String,
}

pub fn cost_report(q: &CostQuery) -> Result<CostReport> {
    q.validate()?;
    let quantum = quantum_costs(q);
    let optimal = quantum
        .iter()
        .filter(|c| !c.hypothetical)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|c| c.algorithm.clone())
        .unwrap_or_default();
    let alpha = q.alpha();
    Ok(CostReport {
        query: q.clone(),
        alpha,
        classical_mean_field: classical_mf_cost(q),
        classical_finite_t: q.m.map(|_| classical_finite_t_cost(q)).transpose()?,
        classical_sampled_trajectories: classical_sampled_trajectories_cost(q),
        quantum,
        measurement: measurement_costs(q),
        regime: alpha.filter(|&a| a >= 1.0).map(|a| optimal_quantum_label(a).to_string()),
        optimal_quantum: optimal,
        suppressed_factors: "(Nt/ε)^{o(1)} and polylog factors set to 1".into(),
    })
}
