//! End-to-end shadow experiment: prepare a Slater determinant, evolve it, collect shadows,
//! estimate RDM elements and compare them with the exact values.

use std::fs;

use fqlab::hamiltonian::{evolve, EvolutionPlan};
use fqlab::linalg::{c, CMatrix, C64};
use fqlab::rdm::exact_krdm_element;
use fqlab::shadows::{collect_shadows, element_statistics, variance_bound};
use fqlab::stateprep::prepare_slater;
use serde::Serialize;

use crate::commands::{element_inputs, estimator_config, required, write_estimates, Outcome};
use crate::error::{CliError, CliResult};
use crate::io::{kernel, load_nuclei, parse_elements, read_coeffs, resolve_grid};
use crate::params::ExperimentParams;

#[derive(Debug, Serialize)]
pub struct ElementReport {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub estimate: [f64; 2],
    pub exact: [f64; 2],
    pub abs_error: f64,
    pub empirical_variance: f64,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub k: usize,
    pub eta: usize,
    pub orbitals: usize,
    pub samples: usize,
    pub groups: usize,
    pub group_size: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub max_abs_error: f64,
    /// Largest single-shot sample variance over the requested elements.
    pub max_empirical_variance: f64,
    /// None when the bound does not apply (η < 2k).
    pub variance_bound: Option<f64>,
    pub within_epsilon: bool,
    pub within_variance_bound: Option<bool>,
    pub pass: bool,
    pub elements: Vec<ElementReport>,
}

pub fn experiment(p: &mut ExperimentParams) -> CliResult<Outcome> {
    let out = required(&p.out, "experiment", "--out")?.to_path_buf();
    let report_path = p.report.get_or_insert_with(|| out.with_extension("report.json")).clone();
    let mut outcome = Outcome::default();

    let coeffs = p.coeffs.as_deref().map(read_coeffs).transpose()?;
    let grid = resolve_grid(&mut p.dim, &mut p.points, &mut p.omega, coeffs.as_ref().map(|m| m.nrows()), 4)?;
    let n = grid.total_points();
    let c_occ = match coeffs {
        Some(m) => {
            if p.eta.is_some_and(|e| e != m.ncols()) {
                return Err(CliError::usage(format!("--eta disagrees with the {} orbitals in --coeffs", m.ncols())));
            }
            outcome.inputs.extend(p.coeffs.clone());
            m
        }
        None => {
            // Identity orbitals: electrons in grid points 0..η.
            let eta = *p.eta.get_or_insert(2);
            if eta == 0 || eta >= n {
                return Err(CliError::usage(format!("--eta must lie in 1..{n}")));
            }
            CMatrix::from_fn(n, eta, |r, col| if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) })
        }
    };
    let eta = c_occ.ncols();
    p.eta = Some(eta);

    let mut state = prepare_slater(&c_occ, &grid)?;
    if p.time != 0.0 {
        let nuclei = load_nuclei(p.nuclei.as_deref(), grid.dim())?;
        outcome.inputs.extend(p.nuclei.clone());
        let plan = EvolutionPlan::new(p.time, p.steps, p.order)?;
        state = evolve(&state, &plan, &nuclei, kernel(p.soften)?)?;
    }

    let (cfg, m) = estimator_config(p.k, eta, p.epsilon, p.delta, &p.samples)?;
    let elements = parse_elements(&p.elements, p.k, n)?;
    outcome.inputs.extend(element_inputs(&p.elements));
    let samples = collect_shadows(&state, m, p.seed)?;
    let stats = element_statistics(&samples, p.k, &elements, cfg.groups, cfg.group_size)?;
    let rows: Vec<(C64, ElementReport)> = elements
        .iter()
        .zip(&stats)
        .map(|((i, j), st)| -> fqlab::Result<_> {
            let est = st.median_of_means();
            let exact = exact_krdm_element(&state, i, j)?;
            let report = ElementReport {
                i: i.clone(),
                j: j.clone(),
                estimate: [est.re, est.im],
                exact: [exact.re, exact.im],
                abs_error: (est - exact).norm(),
                empirical_variance: st.variance,
            };
            Ok((est, report))
        })
        .collect::<fqlab::Result<_>>()?;
    let (estimates, element_reports): (Vec<C64>, Vec<ElementReport>) = rows.into_iter().unzip();

    write_estimates(&out, &elements, &estimates, &cfg)?;
    outcome.outputs.push(out);

    let max_abs_error = element_reports.iter().map(|e| e.abs_error).fold(0.0, f64::max);
    let max_var = element_reports.iter().map(|e| e.empirical_variance).fold(0.0, f64::max);
    let bound = variance_bound(p.k, eta).ok();
    let within_epsilon = max_abs_error <= p.epsilon;
    let within_variance_bound = bound.map(|b| max_var <= b);
    let report = ExperimentReport {
        k: p.k,
        eta,
        orbitals: n,
        samples: m,
        groups: cfg.groups,
        group_size: cfg.group_size,
        epsilon: p.epsilon,
        delta: p.delta,
        max_abs_error,
        max_empirical_variance: max_var,
        variance_bound: bound,
        within_epsilon,
        within_variance_bound,
        pass: within_epsilon && within_variance_bound.unwrap_or(true),
        elements: element_reports,
    };
    fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    outcome.outputs.push(report_path);
    println!(
        "experiment: max |error| = {max_abs_error:.3e} (ε = {}), max variance = {max_var:.3e}, pass = {}",
        p.epsilon, report.pass
    );
    Ok(outcome)
}
