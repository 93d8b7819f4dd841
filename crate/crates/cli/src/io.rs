//! File formats shared by the subcommands.

use std::fs;
use std::path::Path;

use fqlab::hamiltonian::{CoulombKernel, NuclearConfig};
use fqlab::linalg::{c, CMatrix};
use fqlab::GridSpec;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn load_nuclei(path: Option<&Path>, dim: usize) -> CliResult<NuclearConfig> {
    match path {
        Some(p) => Ok(NuclearConfig::parse(&read_text(p)?, dim)?),
        None => Ok(NuclearConfig::empty()),
    }
}

pub fn kernel(soften: Option<f64>) -> CliResult<CoulombKernel> {
    Ok(match soften {
        Some(s) => CoulombKernel::softened(s)?,
        None => CoulombKernel::Bare,
    })
}

/// Orbital coefficients: N rows of `re,im` pairs, one pair per orbital. A header row is
/// allowed (detected by a non-numeric first field).
pub fn read_coeffs(path: &Path) -> CliResult<CMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, rec) in reader.records().enumerate() {
        let rec = rec?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if lineno == 0 => continue,
            Err(e) => return Err(CliError::usage(format!("{}: row {}: {e}", path.display(), lineno + 1))),
        }
    }
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 || !width.is_multiple_of(2) {
        return Err(CliError::usage(format!("{}: expected N rows of 2η columns (re, im per orbital)", path.display())));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        return Err(CliError::usage(format!(
            "{}: row {} has {} columns, expected {width}",
            path.display(),
            bad + 1,
            rows[bad].len()
        )));
    }
    Ok(CMatrix::from_fn(rows.len(), width / 2, |r, k| c(rows[r][2 * k], rows[r][2 * k + 1])))
}

/// Fills unset grid fields: d defaults to 1, P to `points` (or the d-th root of `total`
/// when known), Ω to P^d (unit spacing).
pub fn resolve_grid(
    dim: &mut Option<usize>,
    points: &mut Option<usize>,
    omega: &mut Option<f64>,
    total: Option<usize>,
    default_points: usize,
) -> CliResult<GridSpec> {
    let d = *dim.get_or_insert(1);
    if d == 0 || d > 3 {
        return Err(CliError::usage(format!("--dim must be 1, 2 or 3, got {d}")));
    }
    let p = *points.get_or_insert_with(|| match total {
        Some(t) => (t as f64).powf(1.0 / d as f64).round() as usize,
        None => default_points,
    });
    let w = *omega.get_or_insert((p as f64).powi(d as i32));
    let grid = GridSpec::new(d, p, w)?;
    if let Some(t) = total {
        if grid.total_points() != t {
            return Err(CliError::usage(format!(
                "grid has {} points (P = {p}, d = {d}) but the input has {t} rows",
                grid.total_points()
            )));
        }
    }
    Ok(grid)
}

/// Element list: `all-1rdm`, or a file with one `i1 .. ik ; j1 .. jk` line per element
/// (commas or spaces inside a tuple, `#` comments).
pub fn parse_elements(spec: &str, k: usize, orbitals: usize) -> CliResult<Vec<(Vec<usize>, Vec<usize>)>> {
    if spec == "all-1rdm" {
        if k != 1 {
            return Err(CliError::usage(format!("--elements all-1rdm needs --k 1, got k = {k}")));
        }
        return Ok((0..orbitals).flat_map(|i| (0..orbitals).map(move |j| (vec![i], vec![j]))).collect());
    }
    let text = read_text(Path::new(spec))?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| CliError::usage(format!("{spec}: line {}: {m}", lineno + 1));
        let (a, b) = line.split_once(';').ok_or_else(|| err("expected `i-tuple ; j-tuple`".into()))?;
        let tuple = |s: &str| -> CliResult<Vec<usize>> {
            let v: Vec<usize> = s
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| err(format!("{t}: {e}"))))
                .collect::<CliResult<_>>()?;
            if v.len() != k {
                return Err(err(format!("tuple has {} indices, expected k = {k}", v.len())));
            }
            if let Some(&x) = v.iter().find(|&&x| x >= orbitals) {
                return Err(err(format!("index {x} out of range (N = {orbitals})")));
            }
            Ok(v)
        };
        out.push((tuple(a)?, tuple(b)?));
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("{spec}: no elements")));
    }
    Ok(out)
}

/// `m` or `auto`.
pub fn parse_samples(spec: &str) -> CliResult<Option<usize>> {
    if spec == "auto" {
        return Ok(None);
    }
    spec.parse::<usize>()
        .map(Some)
        .map_err(|_| CliError::usage(format!("--samples must be a positive integer or `auto`, got `{spec}`")))
}
