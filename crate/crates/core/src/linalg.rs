//! Small dense linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest absolute entry of `U†U − I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    let n = prod.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for col in 0..prod.ncols() {
            let target = if r == col { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(r, col)] - target).norm());
        }
    }
    worst
}

/// Largest absolute entry of `A − A†`.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..a.nrows() {
        for col in 0..a.ncols() {
            worst = worst.max((a[(r, col)] - a[(col, r)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues are unsorted.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `exp(−i·H·dt)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, dt: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&e| C64::from_polar(1.0, -e * dt)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(h: &CMatrix) -> f64 {
    eigh(h).0.into_iter().fold(0.0, |m, e| m.max(e.abs()))
}

/// max_ij |a_ij|.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix (for tests and sweeps).
pub fn random_unitary<R: rand::Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| c(gauss(rng), gauss(rng)));
    let qr = g.qr();
    let (q, r) = qr.unpack();
    // Fix the phase ambiguity of QR so the distribution is Haar.
    let mut q = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random `rows × cols` matrix with orthonormal columns.
pub fn random_isometry<R: rand::Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let u = random_unitary(rows, rng);
    u.columns(0, cols).into_owned()
}

/// Standard normal sample by Box–Muller.
pub fn gauss<R: rand::Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
