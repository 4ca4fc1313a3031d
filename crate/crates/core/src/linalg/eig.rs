//! Hermitian eigendecomposition.
//!
//! The main path reduces the matrix to a real symmetric tridiagonal form with
//! complex Householder reflections, removes the phases of the subdiagonal with
//! a diagonal unitary, and finishes with the implicit QL iteration. A cyclic
//! Jacobi solver is kept alongside as an independent second path for
//! cross-checking results on small operators.

use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector, SubspaceBasis};
use crate::error::{Error, Result};

/// Default absolute tolerance on `max |M[i][j] − conj(M[j][i])|`.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k)
    }

    /// `Q Λ Q†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let scaled = ComplexMatrix::from_fn(n, n, |i, k| q[(i, k)] * self.eigenvalues[k]);
        scaled.matmul(&q.adjoint())
    }

    /// Orthonormal basis of the eigenvectors whose eigenvalue satisfies `keep`.
    pub fn eigenspace(&self, keep: impl Fn(f64) -> bool) -> SubspaceBasis {
        let vectors = self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &lambda)| keep(lambda))
            .map(|(k, _)| self.eigenvector(k))
            .collect();
        SubspaceBasis::from_orthonormal(self.dim(), vectors)
    }
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual, tolerance: tol });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    hermitian_eig_with_tol(m, HERMITIAN_TOL)
}

pub fn hermitian_eig_with_tol(m: &ComplexMatrix, tol: f64) -> Result<EigDecomposition> {
    check_hermitian(m, tol)?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    let (diag, sub) = tridiagonalize(&mut a, Some(&mut q));

    // D†TD is real when d_{i+1} = d_i · t_i / |t_i|
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let t = sub[i];
        off[i] = t.norm();
        phases[i + 1] = if off[i] > 0.0 { phases[i] * (t / off[i]) } else { phases[i] };
    }
    let mut values = diag;
    let mut zt = identity_rows(n);
    tql2(&mut values, &mut off, Some(&mut zt))?;

    // eigenvectors = (Q D) Z, with Z held row-wise as zt
    let qd = ComplexMatrix::from_fn(n, n, |r, k| q[(r, k)] * phases[k]);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let row = qd.row(r);
        for j in 0..n {
            let z = &zt[j * n..(j + 1) * n];
            vectors[(r, j)] = row.iter().zip(z).map(|(a, &b)| a * b).sum();
        }
    }
    Ok(sorted(values, vectors))
}

/// Eigenvalues only, ascending. Skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m, HERMITIAN_TOL)?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    let (mut values, sub) = tridiagonalize(&mut a, None);
    let mut off: Vec<f64> = sub.iter().map(|t| t.norm()).collect();
    off.resize(n, 0.0);
    tql2(&mut values, &mut off, None)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.first().copied().unwrap_or(f64::INFINITY))
}

/// Orthonormal basis of the eigenvectors of a PSD matrix with eigenvalue below
/// `tol`. Fails when some eigenvalue is below `-tol`.
pub fn kernel_basis(m: &ComplexMatrix, tol: f64) -> Result<SubspaceBasis> {
    kernel_basis_with_threshold(m, tol, tol)
}

/// As [`kernel_basis`], with separate thresholds for "counts as zero" and
/// "too negative to be PSD".
pub fn kernel_basis_with_threshold(
    m: &ComplexMatrix,
    zero_threshold: f64,
    negativity_tol: f64,
) -> Result<SubspaceBasis> {
    let eig = hermitian_eig(m)?;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -negativity_tol {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lowest, tolerance: negativity_tol });
        }
    }
    Ok(eig.eigenspace(|lambda| lambda < zero_threshold))
}

/// Independent eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig_jacobi(m: &ComplexMatrix) -> Result<EigDecomposition> {
    const MAX_SWEEPS: usize = 100;
    check_hermitian(m, HERMITIAN_TOL)?;
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for sweep in 0.. {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[(p, q)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let j00 = Complex64::new(c, 0.0);
                let j01 = Complex64::new(s, 0.0);
                let j10 = -phase.conj() * s;
                let j11 = phase.conj() * c;
                for r in 0..n {
                    let (x, y) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = x * j00 + y * j10;
                    a[(r, q)] = x * j01 + y * j11;
                    let (x, y) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = x * j00 + y * j10;
                    v[(r, q)] = x * j01 + y * j11;
                }
                for col in 0..n {
                    let (x, y) = (a[(p, col)], a[(q, col)]);
                    a[(p, col)] = j00.conj() * x + j10.conj() * y;
                    a[(q, col)] = j01.conj() * x + j11.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sorted(values, v))
}

fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> EigDecomposition {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, j| vectors[(r, order[j])]);
    EigDecomposition { eigenvalues, eigenvectors }
}

fn identity_rows(n: usize) -> Vec<f64> {
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    z
}

/// Householder reduction of the Hermitian `a` (overwritten) to tridiagonal
/// form `a_in = Q T Q†`. Returns the real diagonal and the complex
/// subdiagonal `T[i+1][i]`; accumulates `Q` when requested.
fn tridiagonalize(a: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) -> (Vec<f64>, Vec<Complex64>) {
    let n = a.rows();
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let m = n - lo;
        let alpha = (lo..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(lo, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            v[i] = a[(lo + i, k)];
        }
        v[0] += phase * alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // p = τ B v on the trailing block
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let row = &a.row(lo + i)[lo..];
            *pi = row.iter().zip(&v[..m]).map(|(b, x)| b * x).sum::<Complex64>() * tau;
        }
        let kk: Complex64 = v[..m].iter().zip(&p[..m]).map(|(x, y)| x.conj() * y).sum::<Complex64>() * (tau / 2.0);
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        // B ← B − v w† − w v†
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            for j in 0..m {
                a[(lo + i, lo + j)] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        let beta = -phase * alpha;
        a[(lo, k)] = beta;
        a[(k, lo)] = beta.conj();
        for i in lo + 1..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        if let Some(q) = q.as_deref_mut() {
            for r in 0..n {
                let s: Complex64 = q.row(r)[lo..].iter().zip(&v[..m]).map(|(x, y)| x * y).sum::<Complex64>() * tau;
                for j in 0..m {
                    q[(r, lo + j)] -= s * v[j].conj();
                }
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    (diag, sub)
}

/// Implicit QL on the symmetric tridiagonal matrix with diagonal `d` and
/// couplings `e[i]` between `i` and `i+1` (`e[n-1]` ignored). Rotations are
/// applied to the rows of `zt` when given.
fn tql2(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut Vec<f64>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let max_iter = 60 * n.max(1);
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence(max_iter));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = zt.as_deref_mut() {
                        let (head, tail) = z.split_at_mut((i + 1) * n);
                        let zi = &mut head[i * n..];
                        let zi1 = &mut tail[..n];
                        for (x, y) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hh = *y;
                            *y = s * *x + c * hh;
                            *x = c * *x - s * hh;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
