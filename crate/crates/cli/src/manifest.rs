//! Run manifests: everything needed to re-execute a run and check its outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::io::sha256_file;

pub const TOOL: &str = "fqlab";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Fully resolved parameters.
    pub params: Value,
    pub seed: Option<u64>,
    /// Path → SHA-256 (hex).
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn digests(paths: &[PathBuf]) -> CliResult<BTreeMap<String, String>> {
    paths.iter().map(|p| Ok((p.to_string_lossy().into_owned(), sha256_file(p)?))).collect()
}

impl Manifest {
    pub fn build(subcommand: &str, params: Value, inputs: &[PathBuf], outputs: &[PathBuf]) -> CliResult<Self> {
        let seed = params.get("seed").and_then(Value::as_u64);
        Ok(Manifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            params,
            seed,
            inputs: digests(inputs)?,
            outputs: digests(outputs)?,
        })
    }

    /// Writes one copy next to every output file.
    pub fn write_alongside(&self) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        for out in self.outputs.keys() {
            fs::write(manifest_path(Path::new(out)), &text)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let m: Manifest =
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        if m.tool != TOOL {
            return Err(CliError::usage(format!("{}: not an {TOOL} manifest", path.display())));
        }
        Ok(m)
    }

    /// Inputs whose current digest differs from the recorded one.
    pub fn changed_inputs(&self) -> CliResult<Vec<String>> {
        let mut changed = Vec::new();
        for (path, digest) in &self.inputs {
            if &sha256_file(Path::new(path))? != digest {
                changed.push(path.clone());
            }
        }
        Ok(changed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("a.csv");
        fs::write(&out, "x\n1\n").unwrap();
        let m = Manifest::build("cost", serde_json::json!({"seed": 5}), &[], std::slice::from_ref(&out)).unwrap();
        assert_eq!(m.seed, Some(5));
        m.write_alongside().unwrap();
        let back = Manifest::load(&manifest_path(&out)).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.outputs.values().next().unwrap().len(), 64);
    }

    #[test]
    fn sha256_known_vector() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("abc");
        fs::write(&p, "abc").unwrap();
        assert_eq!(sha256_file(&p).unwrap(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
