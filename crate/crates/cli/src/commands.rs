//! One function per subcommand. Each takes its resolved parameters mutably so that values
//! discovered at run time (grid taken from a snapshot, η taken from a coefficient file)
//! end up in the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use fqlab::costmodel::{cost_report, regime_table, CostQuery};
use fqlab::hamiltonian::{evolve as split_evolve, total_energy, EvolutionPlan};
use fqlab::linalg::{random_isometry, C64};
use fqlab::meanfield::{evolve_tdhf, GridIntegrals, Observables, OccupiedOrbitals, TdhfPlan, TdhfScheme};
use fqlab::rng::stream;
use fqlab::shadows::{collect_shadows, element_statistics, EstimatorConfig, ShadowSample};
use fqlab::snapshot;
use fqlab::stateprep::{prepare_slater_traced, toffoli_count, ToffoliVariant};
use fqlab::FirstQuantizedState;

use crate::error::{CliError, CliResult};
use crate::io::{
    csv_writer, fmt_f64, join_indices, kernel, load_nuclei, parse_elements, parse_samples, read_coeffs, resolve_grid,
};
use crate::params::{CostParams, EvolveParams, PrepParams, ShadowsParams, TdhfParams};

/// Files a run read and wrote, for the manifest.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

pub(crate) fn required<'a>(v: &'a Option<PathBuf>, cmd: &str, flag: &str) -> CliResult<&'a Path> {
    v.as_deref().ok_or_else(|| CliError::usage(format!("{cmd}: {flag} is required")))
}

fn same_f64(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Takes grid and η from a snapshot, rejecting explicitly requested values that disagree.
fn adopt_snapshot_grid(
    state: &FirstQuantizedState,
    dim: &mut Option<usize>,
    points: &mut Option<usize>,
    omega: &mut Option<f64>,
) -> CliResult<()> {
    let g = state.grid();
    let clash = dim.is_some_and(|d| d != g.dim())
        || points.is_some_and(|p| p != g.points_per_axis())
        || omega.is_some_and(|w| !same_f64(w, g.cell_volume()));
    if clash {
        return Err(CliError::usage(format!(
            "grid flags disagree with the input snapshot (d = {}, P = {}, Ω = {})",
            g.dim(),
            g.points_per_axis(),
            g.cell_volume()
        )));
    }
    *dim = Some(g.dim());
    *points = Some(g.points_per_axis());
    *omega = Some(g.cell_volume());
    Ok(())
}

pub fn evolve(p: &mut EvolveParams) -> CliResult<Outcome> {
    let out = required(&p.out, "evolve", "--out")?.to_path_buf();
    let mut outcome = Outcome::default();
    let state = match &p.input {
        Some(path) => {
            let s = snapshot::load(path)?;
            adopt_snapshot_grid(&s, &mut p.dim, &mut p.points, &mut p.omega)?;
            p.eta = s.eta();
            outcome.inputs.push(path.clone());
            s
        }
        None => {
            // Random Slater determinant drawn from the seed.
            let grid = resolve_grid(&mut p.dim, &mut p.points, &mut p.omega, None, 8)?;
            if p.eta == 0 || p.eta > grid.total_points() {
                return Err(CliError::usage(format!("--eta must lie in 1..={}", grid.total_points())));
            }
            let mut rng = stream(p.seed, "evolve-initial", 0);
            let c = random_isometry(grid.total_points(), p.eta, &mut rng);
            FirstQuantizedState::slater_from_coeffs(&c, &grid)?
        }
    };
    let dim = state.grid().dim();
    let nuclei = load_nuclei(p.nuclei.as_deref(), dim)?;
    outcome.inputs.extend(p.nuclei.clone());
    let kernel = kernel(p.soften)?;
    let plan = EvolutionPlan::new(p.time, p.steps, p.order)?;
    let evolved = split_evolve(&state, &plan, &nuclei, kernel)?;
    snapshot::save(&out, &evolved)?;
    outcome.outputs.push(out);

    if let Some(path) = &p.summary {
        let mut w = csv_writer(path)?;
        w.write_record(["stage", "norm", "energy"])?;
        for (stage, s) in [("initial", &state), ("final", &evolved)] {
            let e = total_energy(s, &nuclei, kernel)?;
            w.write_record([stage.to_string(), fmt_f64(s.norm()), fmt_f64(e)])?;
        }
        w.flush()?;
        outcome.outputs.push(path.clone());
    }
    Ok(outcome)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    RdmDiag,
    FockNorm,
}

fn parse_observables(spec: &str) -> CliResult<Vec<Column>> {
    let mut cols = Vec::new();
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let col = match tok {
            "energy" => continue,
            "rdm-diag" => Column::RdmDiag,
            "fock-norm" => Column::FockNorm,
            other => {
                return Err(CliError::usage(format!(
                    "unknown observable `{other}` (valid: energy, rdm-diag, fock-norm)"
                )))
            }
        };
        if !cols.contains(&col) {
            cols.push(col);
        }
    }
    Ok(cols)
}

pub fn tdhf(p: &mut TdhfParams) -> CliResult<Outcome> {
    let out = required(&p.out, "tdhf", "--out")?.to_path_buf();
    let mut outcome = Outcome::default();
    let coeffs = p.coeffs.as_deref().map(read_coeffs).transpose()?;
    let total = coeffs.as_ref().map(|c| c.nrows());
    let grid = resolve_grid(&mut p.dim, &mut p.points, &mut p.omega, total, 16)?;
    let orbitals = match coeffs {
        Some(c) => {
            if p.eta.is_some_and(|e| e != c.ncols()) {
                return Err(CliError::usage(format!("--eta disagrees with the {} orbitals in --coeffs", c.ncols())));
            }
            p.eta = Some(c.ncols());
            outcome.inputs.extend(p.coeffs.clone());
            OccupiedOrbitals::new(c, &grid)?
        }
        None => OccupiedOrbitals::plane_waves(&grid, *p.eta.get_or_insert(2))?,
    };
    let nuclei = load_nuclei(p.nuclei.as_deref(), grid.dim())?;
    outcome.inputs.extend(p.nuclei.clone());
    let ints = GridIntegrals::new(&grid, &nuclei, kernel(p.soften)?)?;
    let scheme: TdhfScheme = p.scheme.parse()?;
    let columns = parse_observables(&p.observables)?;
    let obs = Observables {
        density_diagonal: columns.contains(&Column::RdmDiag),
        fock_norm: columns.contains(&Column::FockNorm),
    };
    let traj = evolve_tdhf(&orbitals, &ints, &TdhfPlan::new(p.time, p.steps, scheme)?, obs)?;

    let mut w = csv_writer(&out)?;
    let mut header = vec!["step".to_string(), "time".into(), "energy".into()];
    for col in &columns {
        match col {
            Column::RdmDiag => header.extend((0..grid.total_points()).map(|i| format!("rdm_{i}"))),
            Column::FockNorm => header.push("fock_norm".into()),
        }
    }
    w.write_record(&header)?;
    for pt in &traj.points {
        let mut row = vec![pt.step.to_string(), fmt_f64(pt.time), fmt_f64(pt.energy)];
        for col in &columns {
            match col {
                Column::RdmDiag => row.extend(pt.density_diagonal.iter().flatten().copied().map(fmt_f64)),
                Column::FockNorm => row.extend(pt.fock_norm.map(fmt_f64)),
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    outcome.outputs.push(out);
    Ok(outcome)
}

pub fn prep(p: &mut PrepParams) -> CliResult<Outcome> {
    let path = required(&p.coeffs, "prep", "--coeffs")?.to_path_buf();
    let c = read_coeffs(&path)?;
    let grid = resolve_grid(&mut p.dim, &mut p.points, &mut p.omega, Some(c.nrows()), c.nrows())?;
    let mut outcome = Outcome { inputs: vec![path], outputs: Vec::new() };
    let prep = prepare_slater_traced(&c, &grid)?;
    let (n, eta) = (grid.total_points(), c.ncols());
    let improved = toffoli_count(n, eta, ToffoliVariant::Improved)?;
    let basic = toffoli_count(n, eta, ToffoliVariant::Basic)?;

    if let Some(out) = &p.out {
        snapshot::save(out, &prep.state)?;
        outcome.outputs.push(out.clone());
    }
    if let Some(out) = &p.ledger_out {
        let l = &prep.ledger;
        let mut w = csv_writer(out)?;
        w.write_record(["component", "toffolis"])?;
        for (name, v) in [
            ("increment", l.increment),
            ("controlled_unary", l.controlled_unary),
            ("simultaneous_unary", l.simultaneous_unary),
            ("multi_controlled_not", l.multi_controlled_not),
            ("total", l.total()),
            ("formula_improved", improved),
            ("formula_basic", basic),
        ] {
            w.write_record([name.to_string(), v.to_string()])?;
        }
        w.flush()?;
        outcome.outputs.push(out.clone());
    }

    println!("orbitals N = {n}, electrons η = {eta}, Givens rotations = {}", prep.network.rotation_count());
    println!("toffoli ledger = {} (formula {improved}, basic variant {basic})", prep.ledger.total());
    if p.verify {
        let oracle = FirstQuantizedState::slater_from_coeffs(&c, &grid)?;
        let overlap = prep.state.fidelity_modulus(&oracle);
        println!("|<prepared|oracle>| = {overlap:.15}");
        println!("residual population = {:e}", prep.residual_population.abs());
        if (overlap - 1.0).abs() > 1e-9 || prep.ledger.total() != improved {
            return Err(CliError::numerical(format!(
                "verification failed: overlap {overlap}, ledger {} vs formula {improved}",
                prep.ledger.total()
            )));
        }
        println!("verify: ok");
    }
    Ok(outcome)
}

/// Estimator settings from `--samples` (a budget m, or `auto`).
pub(crate) fn estimator_config(
    k: usize,
    eta: usize,
    epsilon: f64,
    delta: f64,
    samples: &str,
) -> CliResult<(EstimatorConfig, usize)> {
    Ok(match parse_samples(samples)? {
        None => {
            let cfg = EstimatorConfig::auto(k, eta, epsilon, delta)?;
            (cfg, cfg.samples_needed())
        }
        Some(m) => (EstimatorConfig::for_budget(k, epsilon, delta, m)?, m),
    })
}

pub(crate) fn write_estimates(
    path: &Path,
    elements: &[(Vec<usize>, Vec<usize>)],
    estimates: &[C64],
    cfg: &EstimatorConfig,
) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["i", "j", "re", "im", "groups", "group_size"])?;
    for ((i, j), z) in elements.iter().zip(estimates) {
        w.write_record([
            join_indices(i),
            join_indices(j),
            fmt_f64(z.re),
            fmt_f64(z.im),
            cfg.groups.to_string(),
            cfg.group_size.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn element_inputs(spec: &str) -> Option<PathBuf> {
    (spec != "all-1rdm").then(|| PathBuf::from(spec))
}

fn write_samples(path: &Path, samples: &[ShadowSample]) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["sample", "qubits", "cliffords", "outcomes"])?;
    for (idx, s) in samples.iter().enumerate() {
        let ids: Vec<String> = s.cliffords.iter().map(u128::to_string).collect();
        let bits: Vec<String> = s.outcomes.iter().map(|b| format!("{b:0width$b}", width = s.qubits)).collect();
        w.write_record([idx.to_string(), s.qubits.to_string(), ids.join(" "), bits.join(" ")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn shadows(p: &mut ShadowsParams) -> CliResult<Outcome> {
    let input = required(&p.input, "shadows", "--in")?.to_path_buf();
    let out = required(&p.out, "shadows", "--out")?.to_path_buf();
    let state = snapshot::load(&input)?;
    let mut outcome = Outcome { inputs: vec![input], outputs: Vec::new() };
    let (cfg, m) = estimator_config(p.k, state.eta(), p.epsilon, p.delta, &p.samples)?;
    let elements = parse_elements(&p.elements, p.k, state.grid().total_points())?;
    outcome.inputs.extend(element_inputs(&p.elements));
    let samples = collect_shadows(&state, m, p.seed)?;
    let stats = element_statistics(&samples, p.k, &elements, cfg.groups, cfg.group_size)?;
    let estimates: Vec<C64> = stats.iter().map(|s| s.median_of_means()).collect();
    write_estimates(&out, &elements, &estimates, &cfg)?;
    outcome.outputs.push(out);
    if let Some(path) = &p.samples_out {
        write_samples(path, &samples)?;
        outcome.outputs.push(path.clone());
    }
    Ok(outcome)
}

fn parse_alpha_range(spec: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::usage(format!("--alpha-range must be lo:hi:step, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    Ok((v[0], v[1], v[2]))
}

/// `N,η,t,ε[,M,L,λ,C,k]`; empty optional fields are skipped.
pub(crate) fn parse_query(spec: &str) -> CliResult<CostQuery> {
    let fields: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = |m: String| CliError::usage(format!("--query `{spec}`: {m}"));
    if fields.len() < 4 || fields.len() > 9 {
        return Err(bad("expected N,η,t,ε[,M,L,λ,C,k]".into()));
    }
    let num = |i: usize| -> CliResult<Option<f64>> {
        match fields.get(i) {
            None | Some(&"") => Ok(None),
            Some(s) => s.parse::<f64>().map(Some).map_err(|e| bad(format!("field {}: {e}", i + 1))),
        }
    };
    let need = |i: usize| num(i)?.ok_or_else(|| bad(format!("field {} is required", i + 1)));
    let mut q = CostQuery::new(need(0)?, need(1)?, need(2)?, need(3)?)?;
    q.m = num(4)?;
    q.l = num(5)?;
    q.lambda = num(6)?;
    q.c_samp = num(7)?;
    q.k = match fields.get(8) {
        None | Some(&"") => None,
        Some(s) => Some(s.parse::<u32>().map_err(|e| bad(format!("field 9: {e}")))?),
    };
    q.validate()?;
    Ok(q)
}

pub fn cost(p: &mut CostParams) -> CliResult<Outcome> {
    if p.alpha_range.is_none() && p.query.is_none() {
        return Err(CliError::usage("cost: give --alpha-range and/or --query"));
    }
    let mut outcome = Outcome::default();
    if let Some(range) = &p.alpha_range {
        let out = required(&p.out, "cost", "--out (with --alpha-range)")?;
        let (lo, hi, step) = parse_alpha_range(range)?;
        let mut w = csv_writer(out)?;
        w.write_record([
            "alpha",
            "beta_classical",
            "beta_quantum",
            "speedup",
            "optimal_quantum",
            "optimal_classical_term",
        ])?;
        for r in regime_table(lo, hi, step)? {
            w.write_record([
                fmt_f64(r.alpha),
                fmt_f64(r.beta_classical),
                fmt_f64(r.beta_quantum),
                fmt_f64(r.speedup),
                r.optimal_quantum,
                r.optimal_classical_term,
            ])?;
        }
        w.flush()?;
        outcome.outputs.push(out.to_path_buf());
    }
    if let Some(spec) = &p.query {
        let report = cost_report(&parse_query(spec)?)?;
        let json = serde_json::to_string_pretty(&report)? + "\n";
        match &p.report {
            Some(path) => {
                fs::write(path, json)?;
                outcome.outputs.push(path.clone());
            }
            None => print!("{json}"),
        }
    }
    Ok(outcome)
}
