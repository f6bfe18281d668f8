//! Small dense complex linear algebra on top of `nalgebra`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn singular_values_desc(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `|| U U* - I ||`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    op_norm(&(u * u.adjoint() - identity(u.nrows())))
}

/// Eigen-decomposition of a unitary matrix: `U = Q diag(eig) Q*` with `Q` unitary.
///
/// The Hermitian and skew parts of a unitary commute, so a Hermitian eigensolver applied
/// to `Re U + c Im U` diagonalizes `U` for all but finitely many `c`. A few values of
/// `c` are tried in turn and the first with a small residual is kept.
pub fn normal_eigen(m: &CMat) -> (CMat, Vec<Complex64>) {
    let n = m.nrows();
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let k = (m - m.adjoint()) * c(0.0, -0.5);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut best: Option<(f64, CMat, Vec<Complex64>)> = None;
    for coef in [0.618_034, -1.376_2, 2.503_9, 0.291_7] {
        let a = &h + &k * c(coef, 0.0);
        let a = (&a + a.adjoint()) * c(0.5, 0.0);
        let q = SymmetricEigen::new(a).eigenvectors;
        let t = q.adjoint() * m * &q;
        let eig: Vec<Complex64> = (0..n).map(|j| t[(j, j)]).collect();
        let off = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| t[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-12 * scale * (n as f64) {
            return (q, eig);
        }
        if best.as_ref().is_none_or(|b| off < b.0) {
            best = Some((off, q, eig));
        }
    }
    let (_, q, eig) = best.expect("at least one attempt");
    (q, eig)
}

/// Eigenphases of a unitary in `(-pi, pi]`.
pub fn eigenphases(u: &CMat) -> Vec<f64> {
    normal_eigen(u).1.iter().map(|z| phase_half_open(z.arg())).collect()
}

/// Map an angle to `(-pi, pi]`.
pub fn phase_half_open(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `exp(X)` for skew-Hermitian `X`, via the Hermitian eigendecomposition of `-iX`.
pub fn expm_skew_hermitian(x: &CMat) -> CMat {
    let h = x * (-I);
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&CVec::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    v * d * v.adjoint()
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Remove the trace: `X - tr(X)/n I`.
pub fn traceless(m: &CMat) -> CMat {
    let n = m.nrows();
    m - identity(n) * (trace(m) / n as f64)
}

/// Block-diagonal assembly.
pub fn direct_sum(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
        off += b.nrows();
    }
    out
}

/// Dimension of the null space of `m` with a relative singular-value threshold.
///
/// Returns `(nullity, straddle_ratio)` where the ratio compares the smallest retained
/// singular value to the largest discarded one (`inf` when nothing is discarded or the
/// discarded values are exactly zero).
pub fn nullity(m: &CMat, threshold: f64) -> (usize, f64) {
    let s = singular_values_desc(m);
    let n_cols = m.ncols();
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    let cut = threshold * scale;
    let rank = s.iter().filter(|&&x| x > cut).count();
    let ratio = straddle_ratio(&s, rank);
    (n_cols - rank, ratio)
}

/// `s[rank-1] / s[rank]` for a descending spectrum; `inf` at the ends.
pub fn straddle_ratio(s: &[f64], rank: usize) -> f64 {
    if rank == 0 || rank >= s.len() {
        return f64::INFINITY;
    }
    let below = s[rank];
    if below == 0.0 {
        f64::INFINITY
    } else {
        s[rank - 1] / below
    }
}

/// Haar-random unitary from a complex Gaussian matrix (QR with phase fix).
pub fn haar_unitary<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    let g = CMat::from_fn(n, n, |_, _| c(normal(), normal()));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<Complex64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() == 0.0 {
                ONE
            } else {
                d / d.norm()
            }
        })
        .collect();
    q * diag(&phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let u = haar_unitary(n, &mut rng);
            assert!(unitarity_residual(&u) < 1e-12);
        }
    }

    #[test]
    fn eigenphases_of_diagonal() {
        let q = Complex64::from_polar(1.0, 0.4);
        let u = diag(&[q, -ONE, ONE]);
        let mut p = eigenphases(&u);
        p.sort_by(f64::total_cmp);
        assert!((p[0] - 0.0).abs() < 1e-12);
        assert!((p[1] - 0.4).abs() < 1e-12);
        assert!((p[2].abs() - PI).abs() < 1e-12);
    }

    #[test]
    fn unitary_eigen_handles_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [2, 5, 8] {
            let v = haar_unitary(n, &mut rng);
            let phases: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(1.0, if j % 2 == 0 { 0.7 } else { -2.1 }))
                .collect();
            let u = &v * diag(&phases) * v.adjoint();
            let (q, eig) = normal_eigen(&u);
            let back = &q * diag(&eig) * q.adjoint();
            assert!(op_norm(&(back - &u)) < 1e-12);
            let w = haar_unitary(n, &mut rng);
            let (q, eig) = normal_eigen(&w);
            assert!(op_norm(&(&q * diag(&eig) * q.adjoint() - &w)) < 1e-12);
            let (_, eig) = normal_eigen(&identity(n));
            assert!(eig.iter().all(|z| (z - ONE).norm() < 1e-15));
        }
    }

    #[test]
    fn exp_of_zero_and_nullity() {
        let z = CMat::zeros(3, 3);
        assert!(op_norm(&(expm_skew_hermitian(&z) - identity(3))) < 1e-14);
        let m = diag(&[ONE, ZERO, c(2.0, 0.0)]);
        assert_eq!(nullity(&m, 1e-8).0, 1);
        assert_eq!(op_norm(&m), 2.0);
    }
}
