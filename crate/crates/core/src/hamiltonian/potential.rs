use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{distance, GridSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nucleus {
    pub charge: u32,
    /// Cartesian position in the same frame as the grid points (origin at the cell center).
    pub position: [f64; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NuclearConfig {
    pub nuclei: Vec<Nucleus>,
}

impl NuclearConfig {
    pub fn new(nuclei: Vec<Nucleus>) -> Result<Self> {
        for n in &nuclei {
            if n.charge < 1 {
                return Err(Error::InvalidArgument("nuclear charge must be >= 1".into()));
            }
            if n.position.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("nuclear position must be finite".into()));
            }
        }
        Ok(NuclearConfig { nuclei })
    }

    pub fn empty() -> Self {
        NuclearConfig::default()
    }

    pub fn total_charge(&self) -> u32 {
        self.nuclei.iter().map(|n| n.charge).sum()
    }

    /// Σ_{ℓ<κ} ζ_ℓζ_κ / ‖R_ℓ − R_κ‖.
    pub fn repulsion(&self) -> Result<f64> {
        let mut total = 0.0;
        for (a, na) in self.nuclei.iter().enumerate() {
            for nb in &self.nuclei[a + 1..] {
                let r = distance(&na.position, &nb.position);
                if r == 0.0 {
                    return Err(Error::SingularPotential("two nuclei coincide".into()));
                }
                total += (na.charge * nb.charge) as f64 / r;
            }
        }
        Ok(total)
    }

    /// Parses `ζ x [y z]` lines; `#` starts a comment. Missing coordinates are 0.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut nuclei = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != dim + 1 {
                return Err(Error::Format(format!(
                    "line {}: expected charge and {dim} coordinate(s), got {} field(s)",
                    lineno + 1,
                    fields.len()
                )));
            }
            let charge =
                u32::from_str(fields[0]).map_err(|e| Error::Format(format!("line {}: charge: {e}", lineno + 1)))?;
            let mut position = [0.0; 3];
            for (slot, f) in position.iter_mut().zip(&fields[1..]) {
                *slot = f64::from_str(f).map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
            }
            nuclei.push(Nucleus { charge, position });
        }
        NuclearConfig::new(nuclei)
    }
}

/// Coulomb interaction 1/r, optionally softened to 1/(r + s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CoulombKernel {
    Bare,
    Softened { shift: f64 },
}

impl CoulombKernel {
    pub fn softened(shift: f64) -> Result<Self> {
        if !(shift.is_finite() && shift > 0.0) {
            return Err(Error::InvalidArgument(format!("softening shift {shift} must be positive")));
        }
        Ok(CoulombKernel::Softened { shift })
    }

    /// Softening with s = 1/V_max.
    pub fn from_vmax(v_max: f64) -> Result<Self> {
        Self::softened(1.0 / v_max)
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        match *self {
            CoulombKernel::Bare if r == 0.0 => Err(Error::SingularPotential("bare Coulomb at zero distance".into())),
            CoulombKernel::Bare => Ok(1.0 / r),
            CoulombKernel::Softened { shift } => Ok(1.0 / (r + shift)),
        }
    }
}

/// Precomputed one-body external potential and pair interaction on a grid.
#[derive(Clone, Debug)]
pub struct PotentialTable {
    n: usize,
    external: Vec<f64>,
    /// N×N pair kernel; `None` on the diagonal for the bare kernel.
    pair: Vec<Option<f64>>,
}

impl PotentialTable {
    pub fn new(grid: &GridSpec, nuclei: &NuclearConfig, kernel: CoulombKernel) -> Result<Self> {
        let n = grid.total_points();
        let positions: Vec<[f64; 3]> = (0..n).map(|p| grid.position(p)).collect();
        let mut external = vec![0.0; n];
        for (p, r) in positions.iter().enumerate() {
            for nuc in &nuclei.nuclei {
                let d = distance(&nuc.position, r);
                let v = kernel.value(d).map_err(|_| {
                    Error::SingularPotential(format!("nucleus at {:?} coincides with grid point {p}", nuc.position))
                })?;
                external[p] -= nuc.charge as f64 * v;
            }
        }
        let mut pair = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                pair[a * n + b] = kernel.value(distance(&positions[a], &positions[b])).ok();
            }
        }
        Ok(PotentialTable { n, external, pair })
    }

    pub fn external(&self) -> &[f64] {
        &self.external
    }

    /// Kernel value between grid points `a` and `b` (`None` if singular).
    pub fn pair(&self, a: usize, b: usize) -> Option<f64> {
        self.pair[a * self.n + b]
    }

    /// (U + V)(p_1, …, p_η).
    pub fn value(&self, config: &[usize]) -> Result<f64> {
        let mut total: f64 = config.iter().map(|&p| self.external[p]).sum();
        for (a, &pa) in config.iter().enumerate() {
            for &pb in &config[a + 1..] {
                total += self.pair(pa, pb).ok_or_else(|| {
                    Error::SingularPotential(format!("two electrons share grid point {pa} under the bare kernel"))
                })?;
            }
        }
        Ok(total)
    }

    /// Like [`value`](Self::value) but drops singular coincident pairs (used where the
    /// configuration carries no amplitude on fermionic states).
    pub fn value_regular(&self, config: &[usize]) -> f64 {
        let mut total: f64 = config.iter().map(|&p| self.external[p]).sum();
        for (a, &pa) in config.iter().enumerate() {
            for &pb in &config[a + 1..] {
                total += self.pair(pa, pb).unwrap_or(0.0);
            }
        }
        total
    }

    pub fn is_zero(&self, eta: usize) -> bool {
        self.external.iter().all(|&v| v == 0.0) && eta < 2
    }
}

/// Potential energy of a single configuration, evaluated lazily: only the
/// distances this configuration touches are checked for singularities.
pub fn potential_diagonal(
    grid: &GridSpec,
    nuclei: &NuclearConfig,
    kernel: CoulombKernel,
    config: &[usize],
) -> Result<f64> {
    let n = grid.total_points();
    if let Some(&bad) = config.iter().find(|&&p| p >= n) {
        return Err(Error::IndexOutOfRange { index: bad, limit: n });
    }
    let pos: Vec<[f64; 3]> = config.iter().map(|&p| grid.position(p)).collect();
    let mut total = 0.0;
    for r in &pos {
        for nuc in &nuclei.nuclei {
            total -= nuc.charge as f64 * kernel.value(distance(&nuc.position, r))?;
        }
    }
    for (a, ra) in pos.iter().enumerate() {
        for rb in &pos[a + 1..] {
            total += kernel.value(distance(ra, rb))?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = GridSpec::new(1, 7, 7.0).unwrap();
        let none = NuclearConfig::empty();
        for p in 0..7 {
            assert_eq!(potential_diagonal(&g, &none, CoulombKernel::Bare, &[p]).unwrap(), 0.0);
        }
        let delta = g.spacing();
        let v = potential_diagonal(&g, &none, CoulombKernel::Bare, &[3, 4]).unwrap();
        assert!((v - 1.0 / delta).abs() < 1e-14);

        let nuc = NuclearConfig::new(vec![Nucleus { charge: 2, position: [0.0; 3] }]).unwrap();
        let p = g.index_of([3, 0, 0]).unwrap();
        let v = potential_diagonal(&g, &nuc, CoulombKernel::Bare, &[p]).unwrap();
        assert!((v + 2.0 / (3.0 * delta)).abs() < 1e-14);
        // the electron on the nucleus is singular, and so is the full table
        let origin = g.index_of([0, 0, 0]).unwrap();
        assert!(matches!(
            potential_diagonal(&g, &nuc, CoulombKernel::Bare, &[origin]),
            Err(Error::SingularPotential(_))
        ));
        assert!(PotentialTable::new(&g, &nuc, CoulombKernel::Bare).is_err());
    }

    #[test]
    fn off_grid_nucleus_bare() {
        let g = GridSpec::new(1, 7, 7.0).unwrap();
        let nuc = NuclearConfig::new(vec![Nucleus { charge: 2, position: [0.5, 0.0, 0.0] }]).unwrap();
        let p = g.index_of([3, 0, 0]).unwrap();
        let v = potential_diagonal(&g, &nuc, CoulombKernel::Bare, &[p]).unwrap();
        assert!((v + 2.0 / 2.5).abs() < 1e-14);
    }

    #[test]
    fn coincident_electrons_are_singular_for_bare_kernel() {
        let g = GridSpec::new(1, 5, 5.0).unwrap();
        let none = NuclearConfig::empty();
        assert!(potential_diagonal(&g, &none, CoulombKernel::Bare, &[1, 1]).is_err());
        let v = potential_diagonal(&g, &none, CoulombKernel::softened(0.5).unwrap(), &[1, 1]).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn softened_converges_monotonically_to_bare() {
        let k = CoulombKernel::Bare;
        let bare = k.value(1.3).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for s in [1.0, 0.5, 0.1, 0.01, 1e-4, 1e-8] {
            let v = CoulombKernel::softened(s).unwrap().value(1.3).unwrap();
            assert!(v > prev && v < bare);
            prev = v;
        }
        assert!((bare - prev).abs() < 1e-7);
    }

    #[test]
    fn nuclear_repulsion_pair() {
        let nuc = NuclearConfig::new(vec![
            Nucleus { charge: 1, position: [0.0; 3] },
            Nucleus { charge: 1, position: [1.0, 0.0, 0.0] },
        ])
        .unwrap();
        assert!((nuc.repulsion().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_nuclei_file() {
        let cfg = NuclearConfig::parse("# comment\n2 0.5 1 -1\n1 0 0 0 # H\n", 3).unwrap();
        assert_eq!(cfg.nuclei.len(), 2);
        assert_eq!(cfg.nuclei[0].position, [0.5, 1.0, -1.0]);
        assert_eq!(cfg.total_charge(), 3);
        assert!(NuclearConfig::parse("1 0 0", 1).is_err());
        assert!(NuclearConfig::parse("0 1", 1).is_err());
    }
}
