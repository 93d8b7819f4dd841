//! Binary state snapshots.
//!
//! Layout (all little-endian): magic `FQS1`, `d: u32`, `points_per_axis: u32`,
//! `Ω: f64`, `η: u32`, then 2^{nη} amplitudes as `(re: f64, im: f64)` pairs.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::linalg::C64;
use crate::state::FirstQuantizedState;

pub const MAGIC: &[u8; 4] = b"FQS1";

pub fn write_state<W: Write>(mut w: W, state: &FirstQuantizedState) -> Result<()> {
    let grid = state.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&grid.cell_volume().to_le_bytes())?;
    w.write_all(&(state.eta() as u32).to_le_bytes())?;
    for z in state.amplitudes() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_state<R: Read>(mut r: R) -> Result<FirstQuantizedState> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let dim = read_u32(&mut r)? as usize;
    let points = read_u32(&mut r)? as usize;
    let omega = read_f64(&mut r)?;
    let eta = read_u32(&mut r)? as usize;
    let grid = GridSpec::new(dim, points, omega)?;
    let len = 1usize << (grid.qubits_per_register() * eta);
    let mut amps = Vec::with_capacity(len);
    for _ in 0..len {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        amps.push(C64::new(re, im));
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after amplitudes".into()));
    }
    FirstQuantizedState::from_amplitudes(&grid, eta, amps)
}

pub fn save(path: impl AsRef<Path>, state: &FirstQuantizedState) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_state(std::io::BufWriter::new(file), state)
}

pub fn load(path: impl AsRef<Path>) -> Result<FirstQuantizedState> {
    let file = std::fs::File::open(path)?;
    read_state(std::io::BufReader::new(file))
}
