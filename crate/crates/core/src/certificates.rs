//! Dual certificates for PPT discrimination.
//!
//! Any Hermitian `γ` with `γ ⪰ T_A(ρ_j)` for every state bounds the success
//! probability of every PPT measurement by `tr(γ)/d`; a bound below one shows
//! the states are not perfectly PPT-distinguishable. Two forms are built here:
//!
//! * rank one, `γ = I/d − (2/d)|v⟩⟨v|` for `v` in the common negative
//!   eigenspace, with bound `1 − 2/d²`;
//! * the `d = 7` form `γ̃ = I/7 − (λ/7)|v⟩⟨v| + (μ/7)|w⟩⟨w|`, where `w` is the
//!   normalized component of `v` in the positive eigenspace of the seventh
//!   state's partial transpose.

use std::fmt;

use crate::constructions::{case_d7, d7_vector};
use crate::eigenspaces::{common_negative_eigenspace, negative_eigenspace, DEFAULT_KERNEL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, ComplexMatrix, ComplexVector};
use crate::states::{Convention, DensityMatrix, FamilyTag, UnitarySet};

/// Default tolerance on certificate margins.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-9;
/// A bound only counts as below one when `bound < 1 − DEFAULT_BOUND_TOL`.
pub const DEFAULT_BOUND_TOL: f64 = 1e-12;
/// `(λ, μ)` used for the `d = 7` certificate unless overridden.
pub const D7_DEFAULT_PARAMS: (f64, f64) = (7.0 / 13.0, 0.5);
/// Weight `⟨v|P₋|v⟩` of the `d = 7` vector in the negative eigenspace of the
/// seventh state's partial transpose.
pub const D7_NEGATIVE_WEIGHT: f64 = 0.25;

#[derive(Clone, Debug)]
pub enum CertificateForm {
    /// `γ = I/d`, always feasible, bound exactly one.
    Trivial,
    RankOne {
        v: ComplexVector,
    },
    TwoParameter {
        lambda: f64,
        mu: f64,
        v: ComplexVector,
        w: ComplexVector,
    },
}

impl CertificateForm {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateForm::Trivial => "trivial",
            CertificateForm::RankOne { .. } => "rank-one",
            CertificateForm::TwoParameter { .. } => "d7-two-parameter",
        }
    }
}

/// Candidate dual point `γ` with its objective value `tr(γ)/d`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub d: usize,
    pub gamma: ComplexMatrix,
    pub form: CertificateForm,
    pub bound: f64,
}

impl Certificate {
    fn new(d: usize, gamma: ComplexMatrix, form: CertificateForm) -> Self {
        let bound = gamma.trace().re / d as f64;
        Self { d, gamma, form, bound }
    }

    /// `γ = I/d`.
    pub fn trivial(d: usize) -> Self {
        Self::new(d, ComplexMatrix::identity(d * d).scale_real(1.0 / d as f64), CertificateForm::Trivial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified,
}

impl Verdict {
    pub fn from_margins(margins: &[f64], bound: f64, margin_tol: f64, bound_tol: f64) -> Self {
        if margins.iter().all(|&m| m >= -margin_tol) && bound < 1.0 - bound_tol {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::NotCertified => "not-certified",
        }
    }

    pub fn is_certified(self) -> bool {
        self == Verdict::Certified
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Margins `λ_min(γ − T_A(ρ_j))` in input order plus the resulting verdict.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub margins: Vec<f64>,
    pub bound: f64,
    pub margin_tolerance: f64,
    pub bound_tolerance: f64,
    pub convention: Option<Convention>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `γ = I/d − (2/d)|v⟩⟨v|` for a unit vector `v` on `C^d ⊗ C^d`.
pub fn rank_one_gamma(v: &ComplexVector, d: usize) -> Result<Certificate> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch(format!("vector has {} entries, expected {}", v.len(), d * d)));
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let inv = 1.0 / d as f64;
    let gamma = &ComplexMatrix::identity(d * d).scale_real(inv) - &ComplexMatrix::projector(v).scale_real(2.0 * inv);
    Ok(Certificate::new(d, gamma, CertificateForm::RankOne { v: v.clone() }))
}

fn margins(gamma: &ComplexMatrix, rhos: &[DensityMatrix]) -> Result<Vec<f64>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(rhos.len().max(1));
    if workers <= 1 || gamma.rows() < 64 {
        return rhos.iter().map(|rho| min_eigenvalue(&(gamma - &rho.partial_transpose()))).collect();
    }
    let chunk = rhos.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = rhos
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|rho| min_eigenvalue(&(gamma - &rho.partial_transpose())))
                        .collect::<Result<Vec<f64>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(rhos.len());
        for h in handles {
            out.extend(h.join().expect("margin worker panicked")?);
        }
        Ok(out)
    })
}

/// Checks `γ ⪰ T_A(ρ_j)` for every state.
pub fn verify_certificate(cert: &Certificate, rhos: &[DensityMatrix], tol: f64) -> Result<VerificationReport> {
    if rhos.is_empty() {
        return Err(Error::InvalidDimension("need at least one state to verify against".into()));
    }
    if let Some(rho) = rhos.iter().find(|rho| rho.d() != cert.d) {
        return Err(Error::DimensionMismatch(format!("certificate is for d={} but a state has d={}", cert.d, rho.d())));
    }
    let margins = margins(&cert.gamma, rhos)?;
    let verdict = Verdict::from_margins(&margins, cert.bound, tol, DEFAULT_BOUND_TOL);
    Ok(VerificationReport {
        margins,
        bound: cert.bound,
        margin_tolerance: tol,
        bound_tolerance: DEFAULT_BOUND_TOL,
        convention: None,
        verdict,
    })
}

/// Strict feasibility inequalities for `(λ, μ)` together with `μ < λ`, at the
/// measured weight [`D7_NEGATIVE_WEIGHT`].
pub fn d7_param_check(lambda: f64, mu: f64) -> bool {
    d7_param_check_with_weight(lambda, mu, D7_NEGATIVE_WEIGHT)
}

/// With `v = √a|u⟩ + √(1−a)|w⟩`, `γ̃ ⪰ T_A(ρ₇)` reduces to the 2×2 block
///
/// `[[1 − aλ, −√(a(1−a))λ], [−√(a(1−a))λ, μ − (1−a)λ]] ⪰ 0`,
///
/// checked here strictly.
pub fn d7_param_check_with_weight(lambda: f64, mu: f64, weight: f64) -> bool {
    let a = 1.0 - weight * lambda;
    let det = a * (mu - (1.0 - weight) * lambda) - weight * (1.0 - weight) * lambda * lambda;
    a > 0.0 && det > 0.0 && mu < lambda
}

/// `⟨v|P₋(T_A(ρ₇))|v⟩` for the `d = 7` family under `convention`.
pub fn d7_negative_weight(convention: Convention) -> Result<f64> {
    let rhos = case_d7()?.states(convention);
    Ok(split_against(&d7_vector(), &rhos[6])?.0)
}

/// Splits unit `v` against the eigenspaces of `T_A(ρ)`; returns the weight in
/// the negative eigenspace and the normalized positive component.
fn split_against(v: &ComplexVector, rho: &DensityMatrix) -> Result<(f64, ComplexVector)> {
    let neg = negative_eigenspace(rho, 1e-9)?;
    let mut minus = ComplexVector::zeros(v.len());
    for b in neg.vectors() {
        minus = minus.axpy(b.inner(v), b);
    }
    let weight = minus.norm().powi(2);
    let plus = v.sub(&minus);
    let w = plus
        .normalized()
        .map_err(|_| Error::DecompositionMismatch("vector has no positive-eigenspace component".into()))?;
    Ok((weight, w))
}

fn two_parameter(d: usize, v: &ComplexVector, w: ComplexVector, lambda: f64, mu: f64) -> Certificate {
    let inv = 1.0 / d as f64;
    let gamma = &(&ComplexMatrix::identity(d * d).scale_real(inv)
        - &ComplexMatrix::projector(v).scale_real(lambda * inv))
        + &ComplexMatrix::projector(&w).scale_real(mu * inv);
    Certificate::new(d, gamma, CertificateForm::TwoParameter { lambda, mu, v: v.clone(), w })
}

/// `γ̃` for the `d = 7` family with states `(I ⊗ U_i)|ψ₁⟩`.
pub fn d7_certificate(lambda: f64, mu: f64) -> Result<Certificate> {
    d7_certificate_for(Convention::U, lambda, mu)
}

/// `γ̃` for the `d = 7` family read with the given convention.
pub fn d7_certificate_for(convention: Convention, lambda: f64, mu: f64) -> Result<Certificate> {
    let rhos = case_d7()?.states(convention);
    d7_certificate_from_states(&rhos, lambda, mu)
}

fn d7_certificate_from_states(rhos: &[DensityMatrix], lambda: f64, mu: f64) -> Result<Certificate> {
    if !d7_param_check(lambda, mu) {
        return Err(Error::InvalidParameters { lambda, mu });
    }
    let last = rhos
        .last()
        .filter(|rho| rho.d() == 7)
        .ok_or_else(|| Error::DimensionMismatch("the two-parameter certificate needs the seven d = 7 states".into()))?;
    let v = d7_vector();
    let (weight, w) = split_against(&v, last)?;
    if (weight - D7_NEGATIVE_WEIGHT).abs() > 1e-9 {
        return Err(Error::DecompositionMismatch(format!(
            "negative-eigenspace weight {weight} differs from {D7_NEGATIVE_WEIGHT}"
        )));
    }
    Ok(two_parameter(7, &v, w, lambda, mu))
}

/// Knobs for [`certify_family_with`].
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub conventions: Vec<Convention>,
    pub margin_tol: f64,
    pub kernel_tol: f64,
    pub d7_params: (f64, f64),
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            conventions: Convention::BOTH.to_vec(),
            margin_tol: DEFAULT_MARGIN_TOL,
            kernel_tol: DEFAULT_KERNEL_TOL,
            d7_params: D7_DEFAULT_PARAMS,
        }
    }
}

/// Outcome of the pipeline under one convention.
#[derive(Clone, Debug)]
pub struct ConventionOutcome {
    pub convention: Convention,
    pub intersection_dim: usize,
    pub certificate: Certificate,
    pub report: VerificationReport,
}

/// Outcomes for every requested convention and the index of the best one.
#[derive(Clone, Debug)]
pub struct FamilyCertification {
    pub d: usize,
    pub family: FamilyTag,
    pub outcomes: Vec<ConventionOutcome>,
    pub best: usize,
}

impl FamilyCertification {
    pub fn best(&self) -> &ConventionOutcome {
        &self.outcomes[self.best]
    }

    pub fn verdict(&self) -> Verdict {
        self.best().report.verdict
    }

    pub fn bound(&self) -> f64 {
        self.best().report.bound
    }

    pub fn outcome(&self, convention: Convention) -> Option<&ConventionOutcome> {
        self.outcomes.iter().find(|o| o.convention == convention)
    }
}

/// End-to-end check with default options under both conventions.
pub fn certify_family(set: &UnitarySet, tol: f64) -> Result<FamilyCertification> {
    certify_family_with(set, &CertifyOptions { margin_tol: tol, ..CertifyOptions::default() })
}

/// Builds the states, intersects their negative eigenspaces, turns the first
/// common vector into a rank-one certificate (or, for the `d = 7` family,
/// falls back to the two-parameter form) and verifies it.
pub fn certify_family_with(set: &UnitarySet, options: &CertifyOptions) -> Result<FamilyCertification> {
    if options.conventions.is_empty() {
        return Err(Error::Malformed("no convention requested".into()));
    }
    let d = set.d();
    let mut outcomes = Vec::with_capacity(options.conventions.len());
    for &convention in &options.conventions {
        let rhos = set.states(convention);
        let common = common_negative_eigenspace(&rhos, options.kernel_tol)?;
        let certificate = match common.first() {
            Some(v) => rank_one_gamma(v, d)?,
            None if set.family() == FamilyTag::D7 && d == 7 && rhos.len() == 7 => {
                let (lambda, mu) = options.d7_params;
                match d7_certificate_from_states(&rhos, lambda, mu) {
                    Ok(cert) => cert,
                    Err(Error::InvalidParameters { .. }) => return Err(Error::InvalidParameters { lambda, mu }),
                    Err(_) => Certificate::trivial(d),
                }
            }
            None => Certificate::trivial(d),
        };
        let mut report = verify_certificate(&certificate, &rhos, options.margin_tol)?;
        report.convention = Some(convention);
        outcomes.push(ConventionOutcome { convention, intersection_dim: common.dim(), certificate, report });
    }
    let best = (0..outcomes.len())
        .min_by(|&a, &b| {
            let (ra, rb) = (&outcomes[a].report, &outcomes[b].report);
            rb.verdict.is_certified().cmp(&ra.verdict.is_certified()).then(ra.bound.total_cmp(&rb.bound))
        })
        .expect("at least one outcome");
    Ok(FamilyCertification { d, family: set.family(), outcomes, best })
}
