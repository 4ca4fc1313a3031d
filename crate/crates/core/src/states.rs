//! Maximally entangled states `|ψ_U⟩ = (I ⊗ U)|ψ₁⟩` and their projectors.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Unitarity tolerance for built-in families.
pub const UNITARY_TOL: f64 = 1e-10;

/// Where a family of unitaries came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    CaseEven,
    Case4n1,
    Case4n3,
    D7,
    D11,
    Tensor4n,
    Pauli,
    User,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 8] = [
        FamilyTag::CaseEven,
        FamilyTag::Case4n1,
        FamilyTag::Case4n3,
        FamilyTag::D7,
        FamilyTag::D11,
        FamilyTag::Tensor4n,
        FamilyTag::Pauli,
        FamilyTag::User,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::CaseEven => "case-even",
            FamilyTag::Case4n1 => "case-4n1",
            FamilyTag::Case4n3 => "case-4n3",
            FamilyTag::D7 => "d7",
            FamilyTag::D11 => "d11",
            FamilyTag::Tensor4n => "4n-tensor",
            FamilyTag::Pauli => "pauli",
            FamilyTag::User => "user",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown family tag {s:?}")))
    }
}

/// Which of `(I ⊗ U)|ψ₁⟩` and `(I ⊗ U†)|ψ₁⟩` a unitary defines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    U,
    Dagger,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::U, Convention::Dagger];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::U => "u",
            Convention::Dagger => "dagger",
        }
    }

    pub fn uses_dagger(self) -> bool {
        matches!(self, Convention::Dagger)
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(Convention::U),
            "dagger" => Ok(Convention::Dagger),
            other => Err(Error::Malformed(format!("unknown convention {other:?}"))),
        }
    }
}

/// Ordered family of `d × d` unitaries.
#[derive(Clone, Debug)]
pub struct UnitarySet {
    d: usize,
    unitaries: Vec<ComplexMatrix>,
    family: FamilyTag,
}

impl UnitarySet {
    /// Validates shape and unitarity (at [`UNITARY_TOL`]).
    pub fn new(family: FamilyTag, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(family, unitaries, UNITARY_TOL)
    }

    pub fn with_tolerance(family: FamilyTag, unitaries: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let d = unitaries
            .first()
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::InvalidDimension("a unitary family needs at least one member".into()))?;
        if d < 2 {
            return Err(Error::InvalidDimension(format!("unitaries must be at least 2x2, got {d}x{d}")));
        }
        for (i, u) in unitaries.iter().enumerate() {
            if u.dims() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "member {i} is {}x{}, expected {d}x{d}",
                    u.rows(),
                    u.cols()
                )));
            }
            let residual = u.unitarity_residual();
            if residual.is_nan() || residual > tol {
                return Err(Error::NotUnitary { residual, tolerance: tol });
            }
        }
        Ok(Self { d, unitaries, family })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        self.unitaries.iter().map(ComplexMatrix::unitarity_residual).fold(0.0, f64::max)
    }

    /// First `count` members, keeping the provenance tag.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.len() {
            return Err(Error::CountOutOfRange { requested: count, available: self.len() });
        }
        Ok(Self { d: self.d, unitaries: self.unitaries[..count].to_vec(), family: self.family })
    }

    /// Pure states `(I ⊗ U_i)|ψ₁⟩` (or with `U_i†`).
    pub fn state_vectors(&self, convention: Convention) -> Vec<ComplexVector> {
        let base = canonical_mes(self.d).expect("family dimension is at least 2");
        self.unitaries.iter().map(|u| apply_on_b(u, &base, convention.uses_dagger())).collect()
    }

    /// Density matrices of the family's states.
    pub fn states(&self, convention: Convention) -> Vec<DensityMatrix> {
        self.state_vectors(convention).iter().map(|psi| DensityMatrix::from_unit_vector(self.d, psi)).collect()
    }
}

/// Rank-one projector `|ψ⟩⟨ψ|` on `C^d ⊗ C^d`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    d: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    fn from_unit_vector(d: usize, psi: &ComplexVector) -> Self {
        Self { d, matrix: ComplexMatrix::projector(psi) }
    }

    /// Wraps an arbitrary `d² × d²` operator, checking only the shape.
    pub fn from_matrix(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dims() != (d * d, d * d) {
            return Err(Error::DimensionMismatch(format!("density matrix for d={d} must be {0}x{0}", d * d)));
        }
        Ok(Self { d, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        self.matrix.partial_transpose_a(self.d, self.d).expect("density matrix shape is d² × d²")
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_inner(&self.matrix).map(|z| z.re).unwrap_or(f64::NAN)
    }
}

/// `(1/√d) Σ_i |i i⟩`.
pub fn canonical_mes(d: usize) -> Result<ComplexVector> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("maximally entangled states need d >= 2, got {d}")));
    }
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = ComplexVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    Ok(v)
}

fn apply_on_b(u: &ComplexMatrix, base: &ComplexVector, dagger: bool) -> ComplexVector {
    let d = u.rows();
    let mut out = ComplexVector::zeros(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..d {
                let entry = if dagger { u[(c, b)].conj() } else { u[(b, c)] };
                acc += entry * base[a * d + c];
            }
            out[a * d + b] = acc;
        }
    }
    out
}

/// `(I ⊗ U)|base⟩`, or `(I ⊗ U†)|base⟩` when `use_dagger` is set.
pub fn state_from_unitary(u: &ComplexMatrix, base: &ComplexVector, use_dagger: bool) -> Result<ComplexVector> {
    let d = u.rows();
    if !u.is_square() || base.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but the state has {} amplitudes",
            u.rows(),
            u.cols(),
            base.len()
        )));
    }
    Ok(apply_on_b(u, base, use_dagger))
}

/// `|ψ⟩⟨ψ|` for a unit vector on `C^d ⊗ C^d`.
pub fn density(psi: &ComplexVector) -> Result<DensityMatrix> {
    let n = psi.len();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n || d == 0 {
        return Err(Error::DimensionMismatch(format!("{n} amplitudes is not a d² bipartite state")));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(DensityMatrix::from_unit_vector(d, psi))
}

/// Trace-inner-product Gram summary of a unitary family.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport {
    /// `max_{i≠j} |tr(U_i† U_j)|`.
    pub max_off_diagonal: f64,
    /// `max_i |tr(U_i† U_i) − d|`.
    pub max_diagonal_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn check_mutual_orthogonality(set: &UnitarySet, tol: f64) -> OrthogonalityReport {
    let us = set.unitaries();
    let d = set.d() as f64;
    let mut off = 0.0_f64;
    let mut diag = 0.0_f64;
    for (i, a) in us.iter().enumerate() {
        for (j, b) in us.iter().enumerate().skip(i) {
            let g = a.trace_inner(b).expect("members share a shape");
            if i == j {
                diag = diag.max((g - d).norm());
            } else {
                off = off.max(g.norm());
            }
        }
    }
    OrthogonalityReport {
        max_off_diagonal: off,
        max_diagonal_deviation: diag,
        tolerance: tol,
        passed: off <= tol && diag <= tol,
    }
}
