//! Uniform sampling of n-qubit Clifford unitaries (mod global phase).
//!
//! An element id is `symplectic_index · 4ⁿ + frame`, where the symplectic index selects a
//! 2n×2n binary symplectic matrix through the Koenig–Smolin canonical bijection and the
//! 2n frame bits choose the signs of the Pauli images of X_q (bit 2q) and Z_q (bit 2q+1).

use std::borrow::Cow;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, C64};

pub type CliffordId = u128;

/// Largest register width handled by the dense representation.
pub const MAX_QUBITS: usize = 6;

type BitVec = Vec<u8>;

fn inner(v: &[u8], w: &[u8]) -> u8 {
    let mut t = 0;
    for i in 0..v.len() / 2 {
        t ^= (v[2 * i] & w[2 * i + 1]) ^ (w[2 * i] & v[2 * i + 1]);
    }
    t
}

fn transvection(k: &[u8], v: &[u8]) -> BitVec {
    if inner(k, v) == 1 {
        v.iter().zip(k).map(|(a, b)| a ^ b).collect()
    } else {
        v.to_vec()
    }
}

fn xor(a: &[u8], b: &[u8]) -> BitVec {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn int_to_bits(mut i: u128, len: usize) -> BitVec {
    let mut out = vec![0; len];
    for b in out.iter_mut() {
        *b = (i & 1) as u8;
        i >>= 1;
    }
    out
}

/// Two transvections (h1, h2) with y = Z_{h1} Z_{h2} x, for nonzero x, y.
fn find_transvection(x: &[u8], y: &[u8]) -> (BitVec, BitVec) {
    let len = x.len();
    let zero = vec![0; len];
    if x == y {
        return (zero.clone(), zero);
    }
    if inner(x, y) == 1 {
        return (xor(x, y), zero);
    }
    let mut z = vec![0u8; len];
    for i in 0..len / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) != 0 && (y[ii] | y[ii + 1]) != 0 {
            z[ii] = x[ii] ^ y[ii];
            z[ii + 1] = x[ii + 1] ^ y[ii + 1];
            if z[ii] | z[ii + 1] == 0 {
                z[ii + 1] = 1;
                if x[ii] != x[ii + 1] {
                    z[ii] = 1;
                }
            }
            return (xor(x, &z), xor(y, &z));
        }
    }
    for i in 0..len / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) != 0 && (y[ii] | y[ii + 1]) == 0 {
            if x[ii] == x[ii + 1] {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = x[ii];
                z[ii] = x[ii + 1];
            }
            break;
        }
    }
    for i in 0..len / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) == 0 && (y[ii] | y[ii + 1]) != 0 {
            if y[ii] == y[ii + 1] {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = y[ii];
                z[ii] = y[ii + 1];
            }
            break;
        }
    }
    (xor(x, &z), xor(y, &z))
}

/// |Sp(2n, F₂)| = Π_{j=1..n} 2^{2j−1}(4^j − 1).
pub fn symplectic_count(n: usize) -> u128 {
    (1..=n as u32).map(|j| (1u128 << (2 * j - 1)) * ((1u128 << (2 * j)) - 1)).product()
}

/// Number of n-qubit Cliffords modulo phase.
pub fn group_order(n: usize) -> u128 {
    symplectic_count(n) << (2 * n)
}

/// Rows are the images of the basis vectors (x₀, z₀, x₁, z₁, …).
pub fn symplectic_matrix(index: u128, n: usize) -> Vec<BitVec> {
    let nn = 2 * n;
    let s = (1u128 << nn) - 1;
    let k = index % s + 1;
    let mut i = index / s;
    let f1 = int_to_bits(k, nn);
    let mut e1 = vec![0u8; nn];
    e1[0] = 1;
    let (t0, t1) = find_transvection(&e1, &f1);
    let bits = int_to_bits(i % (1u128 << (nn - 1)), nn - 1);
    let mut eprime = e1.clone();
    eprime[2..nn].copy_from_slice(&bits[1..nn - 1]);
    let h0 = transvection(&t1, &transvection(&t0, &eprime));
    let f1 = if bits[0] == 1 { vec![0; nn] } else { f1 };
    i >>= nn - 1;
    let mut g: Vec<BitVec> = (0..nn).map(|r| (0..nn).map(|c| u8::from(r == c)).collect()).collect();
    if n > 1 {
        let sub = symplectic_matrix(i, n - 1);
        for (r, row) in sub.into_iter().enumerate() {
            g[r + 2][2..].copy_from_slice(&row);
        }
    }
    for row in g.iter_mut() {
        let mut v = transvection(&t0, row);
        v = transvection(&t1, &v);
        v = transvection(&h0, &v);
        *row = transvection(&f1, &v);
    }
    g
}

/// Hermitian Pauli i^{x·z} X^x Z^z; qubit 0 is the most significant.
pub fn pauli_matrix(v: &[u8]) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut out = CMatrix::from_element(1, 1, one);
    for q in 0..v.len() / 2 {
        let single = match (v[2 * q], v[2 * q + 1]) {
            (0, 0) => CMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
            (1, 0) => CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            (0, 1) => CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
            _ => CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
        };
        out = kron(&out, &single);
    }
    out
}

/// Dense unitary for an element id, reconstructed from its Pauli images.
pub fn build_unitary(id: CliffordId, n: usize) -> CMatrix {
    let d = 1usize << n;
    let frame = id % (1u128 << (2 * n));
    let sym = symplectic_matrix(id >> (2 * n), n);
    let sign = |bit: usize| if (frame >> bit) & 1 == 1 { -1.0 } else { 1.0 };
    let x_images: Vec<CMatrix> = (0..n).map(|q| pauli_matrix(&sym[2 * q]) * C64::new(sign(2 * q), 0.0)).collect();
    let z_images: Vec<CMatrix> =
        (0..n).map(|q| pauli_matrix(&sym[2 * q + 1]) * C64::new(sign(2 * q + 1), 0.0)).collect();

    // U|0⟩ spans the joint +1 eigenspace of the Z images
    let mut proj = CMatrix::identity(d, d);
    for s in &z_images {
        proj = (s + CMatrix::identity(d, d)) * C64::new(0.5, 0.0) * proj;
    }
    let (col, norm) =
        (0..d)
            .map(|k| (k, proj.column(k).norm()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 + 1e-12 { cur } else { best });
    let mut v0 = proj.column(col) / C64::new(norm, 0.0);
    let pivot = v0.iter().copied().fold(C64::new(0.0, 0.0), |b, z| if z.norm() > b.norm() + 1e-12 { z } else { b });
    v0 *= pivot.conj() / pivot.norm();

    let mut u = CMatrix::zeros(d, d);
    for x in 0..d {
        let mut v = v0.clone();
        for (q, xq) in x_images.iter().enumerate() {
            if (x >> (n - 1 - q)) & 1 == 1 {
                v = xq * v;
            }
        }
        u.set_column(x, &v);
    }
    u
}

fn table(n: usize) -> Option<&'static [CMatrix]> {
    static TABLES: [OnceLock<Vec<CMatrix>>; 2] = [OnceLock::new(), OnceLock::new()];
    if !(1..=2).contains(&n) {
        return None;
    }
    Some(TABLES[n - 1].get_or_init(|| (0..group_order(n)).map(|id| build_unitary(id, n)).collect()))
}

/// Dense unitary of an element, from the cached table when n ≤ 2.
pub fn clifford_unitary(id: CliffordId, n: usize) -> Cow<'static, CMatrix> {
    match table(n) {
        Some(t) => Cow::Borrowed(&t[id as usize]),
        None => Cow::Owned(build_unitary(id, n)),
    }
}

/// Every element of the group, in id order (n ≤ 2).
pub fn enumerate_group(n: usize) -> Result<&'static [CMatrix]> {
    table(n).ok_or(Error::EnumerationUnavailable(n))
}

/// A sampled Clifford element: its id plus dense unitary.
#[derive(Clone, Debug)]
pub struct CliffordElement {
    pub n: usize,
    pub id: CliffordId,
    pub unitary: CMatrix,
}

pub fn sample_clifford_id<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordId {
    rng.random_range(0..group_order(n))
}

pub fn sample_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CliffordElement> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!("Clifford width must be 1..={MAX_QUBITS}, got {n}")));
    }
    let id = sample_clifford_id(n, rng);
    Ok(CliffordElement { n, id, unitary: clifford_unitary(id, n).into_owned() })
}
