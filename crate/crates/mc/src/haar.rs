//! Haar-distributed unitary and orthogonal matrices via Gaussian QR.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensemble::Group;

pub type CMatrix = DMatrix<Complex64>;

/// `n x n` Gaussian matrix: complex entries of unit variance for the
/// unitary group, real standard entries for the orthogonal group.
pub fn ginibre<R: Rng + ?Sized>(n: usize, group: Group, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| match group {
        Group::Unitary => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        }
        Group::Orthogonal => Complex64::new(rng.sample(StandardNormal), 0.0),
    })
}

/// `Q · diag(r_ii / |r_ii|)` from `M = QR`. Without the phase correction
/// the distribution of `Q` depends on the QR convention and is not Haar.
pub fn orthonormalize(m: CMatrix) -> CMatrix {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for x in q.column_mut(j).iter_mut() {
            *x *= phase;
        }
    }
    q
}

pub fn sample_haar<R: Rng + ?Sized>(n: usize, group: Group, rng: &mut R) -> CMatrix {
    orthonormalize(ginibre(n, group, rng))
}

/// `max |(U U* - I)_{ij}|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}
