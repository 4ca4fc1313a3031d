//! Eigenspaces of partially transposed maximally entangled projectors.
//!
//! For `ρ₁ = |ψ₁⟩⟨ψ₁|` one has `d·T_A(ρ₁) = SWAP`, so the `−1/d` eigenspace is
//! the antisymmetric subspace (dimension `d(d−1)/2`) and the `+1/d` eigenspace
//! the symmetric one (dimension `d(d+1)/2`). For `ρ_U` built from a unitary,
//! `T_A(ρ_U) = (I⊗U) T_A(ρ₁) (I⊗U†)`, so every member of a family has the
//! same spectrum with rotated eigenspaces.
//!
//! The common negative eigenspace `∩_i V_{−1/d}(T_A(ρ_i))` is computed from
//! the density matrices alone: each `T_A(ρ_i) + I/d` is PSD with kernel
//! exactly `V_{−1/d}(T_A(ρ_i))`, so the kernel of their sum is the
//! intersection. Working from `ρ_i` rather than from the unitaries makes the
//! result independent of whether a family is read as `U_i` or `U_i†`; the
//! unitary form `∩_i (I⊗U_i†) V_{−1/d}(T_A(ρ₁))` describes the same space for
//! states `(I⊗U_i)|ψ₁⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kernel_basis_with_threshold, ComplexMatrix, ComplexVector};
use crate::states::DensityMatrix;

pub use crate::linalg::SubspaceBasis;

/// Default tolerance for deciding that an eigenvalue of the summed operator is zero.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;

fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d >= 2, got {d}")));
    }
    Ok(())
}

/// `(|kl⟩ − |lk⟩)/√2` for `k < l`, in lexicographic `(k, l)` order.
pub fn antisymmetric_basis(d: usize) -> Result<SubspaceBasis> {
    check_dimension(d)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut vectors = Vec::with_capacity(d * (d - 1) / 2);
    for k in 0..d {
        for l in k + 1..d {
            let mut v = ComplexVector::zeros(d * d);
            v[k * d + l] = s;
            v[l * d + k] = -s;
            vectors.push(v);
        }
    }
    Ok(SubspaceBasis::from_orthonormal(d * d, vectors))
}

/// `|kk⟩` and `(|kl⟩ + |lk⟩)/√2` for `k ≤ l`, in lexicographic `(k, l)` order.
pub fn symmetric_basis(d: usize) -> Result<SubspaceBasis> {
    check_dimension(d)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut vectors = Vec::with_capacity(d * (d + 1) / 2);
    for k in 0..d {
        for l in k..d {
            let mut v = ComplexVector::zeros(d * d);
            if k == l {
                v[k * d + k] = Complex64::new(1.0, 0.0);
            } else {
                v[k * d + l] = s;
                v[l * d + k] = s;
            }
            vectors.push(v);
        }
    }
    Ok(SubspaceBasis::from_orthonormal(d * d, vectors))
}

/// Largest deviation of the spectrum of `T_A(ρ)` from `{±1/d}`, measured
/// through `(d·T_A(ρ))² = I`.
pub fn mes_deviation(rho: &DensityMatrix) -> f64 {
    let d = rho.d();
    let scaled = rho.partial_transpose().scale_real(d as f64);
    scaled.matmul(&scaled).max_abs_diff(&ComplexMatrix::identity(d * d)) / d as f64
}

/// Orthonormal basis of the `−1/d` eigenspace of `T_A(ρ)`.
pub fn negative_eigenspace(rho: &DensityMatrix, tol: f64) -> Result<SubspaceBasis> {
    let d = rho.d();
    let target = 1.0 / d as f64;
    let eig = hermitian_eig(&rho.partial_transpose())?;
    let deviation = eig.eigenvalues.iter().map(|&l| (l - target).abs().min((l + target).abs())).fold(0.0, f64::max);
    if deviation > tol {
        return Err(Error::NotMaximallyEntangled { d, deviation });
    }
    let basis = eig.eigenspace(|l| l < 0.0);
    let expected = d * (d - 1) / 2;
    if basis.dim() != expected {
        return Err(Error::NotMaximallyEntangled { d, deviation: target });
    }
    Ok(basis.canonicalized())
}

/// `Σ_i (T_A(ρ_i) + I/d)`; PSD with kernel equal to the common negative eigenspace.
pub fn shifted_sum(rhos: &[DensityMatrix]) -> Result<ComplexMatrix> {
    let first = rhos.first().ok_or_else(|| Error::InvalidDimension("need at least one state".into()))?;
    let d = first.d();
    let n = d * d;
    let mut sum = ComplexMatrix::identity(n).scale_real(rhos.len() as f64 / d as f64);
    for (i, rho) in rhos.iter().enumerate() {
        if rho.d() != d {
            return Err(Error::DimensionMismatch(format!("state {i} has local dimension {}, expected {d}", rho.d())));
        }
        sum = &sum + &rho.partial_transpose();
    }
    Ok(sum)
}

/// Orthonormal basis of `∩_i V_{−1/d}(T_A(ρ_i))`, possibly empty.
///
/// An eigenvalue of the summed operator counts as zero when it is below
/// `tol · (number of states) · (2/d)`. Vectors come back in the canonical
/// order of [`SubspaceBasis::canonicalized`].
pub fn common_negative_eigenspace(rhos: &[DensityMatrix], tol: f64) -> Result<SubspaceBasis> {
    let sum = shifted_sum(rhos)?;
    let d = rhos[0].d();
    for rho in rhos {
        let deviation = mes_deviation(rho);
        if deviation > tol {
            return Err(Error::NotMaximallyEntangled { d, deviation });
        }
    }
    let threshold = tol * rhos.len() as f64 * (2.0 / d as f64);
    Ok(kernel_basis_with_threshold(&sum, threshold, threshold)?.canonicalized())
}
