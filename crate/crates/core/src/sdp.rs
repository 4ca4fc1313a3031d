//! First-order solver for the primal PPT discrimination program
//!
//! ```text
//! maximize   (1/m) Σ_j ⟨P_j, ρ_j⟩
//! subject to Σ_j P_j = I,  P_j ⪰ 0,  T_A(P_j) ⪰ 0
//! ```
//!
//! The iteration is consensus ADMM over three copies of the operators: an
//! affine copy that takes the gradient step on the linear objective followed
//! by the correction `P_j ← P_j − (1/m)(Σ_k P_k − I)`, a copy projected onto
//! the PSD cone and a copy projected onto the PPT set. On exit the affine copy
//! is mixed with `I/m` just enough to make it exactly feasible, so the
//! reported value is attained by a PPT measurement and never exceeds any
//! verified dual bound.
//!
//! Results are estimates. Indistinguishability verdicts come only from
//! certificates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix};
use crate::states::DensityMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Gradient step on the objective; equals `1/(2ρ)` for the ADMM penalty `ρ`.
    pub step_size: f64,
    pub stop_tolerance: f64,
    /// Zero starts from `P_j = I/m`; other values add a deterministic
    /// partition-preserving perturbation to the start.
    pub seed: u64,
    pub checkpoint_every: usize,
}

impl SolverConfig {
    /// Defaults for local dimension `d`: 5000 iterations, step `0.5/d`, tolerance `1e-6`.
    pub fn for_dimension(d: usize) -> Self {
        Self {
            max_iterations: 5000,
            step_size: 0.5 / d.max(1) as f64,
            stop_tolerance: 1e-6,
            seed: 0,
            checkpoint_every: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.step_size.is_nan()
            || self.step_size <= 0.0
            || self.stop_tolerance.is_nan()
            || self.stop_tolerance <= 0.0
        {
            return Err(Error::Malformed("step size and stop tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Feasibility violations of a set of operators, all reported as magnitudes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FeasibilityResiduals {
    /// `‖Σ P_j − I‖_F`.
    pub partition: f64,
    /// `max(0, −min_j λ_min(P_j))`.
    pub psd: f64,
    /// `max(0, −min_j λ_min(T_A(P_j)))`.
    pub ppt: f64,
}

impl FeasibilityResiduals {
    pub fn max(&self) -> f64 {
        self.partition.max(self.psd).max(self.ppt)
    }
}

/// ADMM progress sample. `fixed_point` is `√(‖Δz‖² + ‖Δu‖²)` over the
/// projected copies `z` and scaled duals `u`, which is non-increasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub iteration: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub fixed_point: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub operators: Vec<ComplexMatrix>,
    pub primal_value: f64,
    pub residuals: FeasibilityResiduals,
    pub iterations: usize,
    /// Whether the ADMM stopping test passed before `max_iterations`.
    pub converged: bool,
    pub checkpoints: Vec<Checkpoint>,
}

/// Nearest PSD matrix in Frobenius norm: clip negative eigenvalues to zero.
pub fn project_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let n = eig.dim();
    if eig.eigenvalues.first().is_some_and(|&l| l >= 0.0) {
        return Ok(m.hermitian_part());
    }
    let q = &eig.eigenvectors;
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = kept.iter().map(|&k| q[(i, k)] * q[(j, k)].conj() * eig.eigenvalues[k]).sum::<Complex64>();
        }
    }
    Ok(out.hermitian_part())
}

/// Frobenius projection onto `{M : T_A(M) ⪰ 0}`, i.e. `T_A ∘ project_psd ∘ T_A`.
pub fn project_ppt(m: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<ComplexMatrix> {
    project_psd(&m.partial_transpose_a(d_a, d_b)?)?.partial_transpose_a(d_a, d_b)
}

/// `(1/m) Σ_j Re tr(P_j ρ_j)`.
pub fn primal_objective(operators: &[ComplexMatrix], rhos: &[DensityMatrix]) -> f64 {
    let m = rhos.len() as f64;
    operators.iter().zip(rhos).map(|(p, rho)| p.trace_inner(rho.matrix()).map_or(f64::NAN, |z| z.re)).sum::<f64>() / m
}

/// Partition, PSD and PPT violations of `operators` on `C^d ⊗ C^d`.
pub fn feasibility_residuals(operators: &[ComplexMatrix], d: usize) -> Result<FeasibilityResiduals> {
    let n = d * d;
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut psd = 0.0_f64;
    let mut ppt = 0.0_f64;
    for p in operators {
        sum = &sum + p;
        psd = psd.max(-hermitian_eigenvalues(p)?[0]);
        ppt = ppt.max(-hermitian_eigenvalues(&p.partial_transpose_a(d, d)?)?[0]);
    }
    Ok(FeasibilityResiduals {
        partition: (&sum - &ComplexMatrix::identity(n)).frobenius_norm(),
        psd: psd.max(0.0),
        ppt: ppt.max(0.0),
    })
}

fn sq_dist(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).frobenius_norm().powi(2)).sum()
}

fn project_affine(ops: &mut [ComplexMatrix]) {
    let m = ops.len();
    let n = ops[0].rows();
    let mut excess = ComplexMatrix::identity(n).scale_real(-1.0);
    for p in ops.iter() {
        excess = &excess + p;
    }
    let correction = excess.scale_real(1.0 / m as f64);
    for p in ops.iter_mut() {
        *p = &*p - &correction;
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    g.hermitian_part()
}

/// Approximately solves the primal program for the given states.
pub fn solve_primal(rhos: &[DensityMatrix], config: &SolverConfig) -> Result<SdpSolution> {
    config.validate()?;
    let first = rhos.first().ok_or_else(|| Error::InvalidDimension("need at least one state".into()))?;
    let d = first.d();
    if let Some(rho) = rhos.iter().find(|r| r.d() != d) {
        return Err(Error::DimensionMismatch(format!("states with d={d} and d={}", rho.d())));
    }
    let m = rhos.len();
    let n = d * d;
    let gradient: Vec<ComplexMatrix> =
        rhos.iter().map(|r| r.matrix().scale_real(config.step_size / m as f64)).collect();

    let start = ComplexMatrix::identity(n).scale_real(1.0 / m as f64);
    let mut y = vec![start.clone(); m];
    if config.seed != 0 && m > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut perturb: Vec<ComplexMatrix> = (0..m).map(|_| random_hermitian(n, &mut rng)).collect();
        let mut mean = ComplexMatrix::zeros(n, n);
        for p in &perturb {
            mean = &mean + p;
        }
        let mean = mean.scale_real(1.0 / m as f64);
        for p in perturb.iter_mut() {
            *p = (&*p - &mean).scale_real(0.1 / (m as f64 * n as f64));
        }
        for (yj, p) in y.iter_mut().zip(&perturb) {
            *yj = &*yj + p;
        }
    }
    let mut z = y.clone();
    let mut u = vec![ComplexMatrix::zeros(n, n); m];
    let mut v = vec![ComplexMatrix::zeros(n, n); m];
    let mut x = y.clone();
    let mut checkpoints = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=config.max_iterations {
        iterations = it;
        for j in 0..m {
            let avg = (&(&y[j] - &u[j]) + &(&z[j] - &v[j])).scale_real(0.5);
            x[j] = &avg + &gradient[j];
        }
        project_affine(&mut x);

        let mut y_next = Vec::with_capacity(m);
        let mut z_next = Vec::with_capacity(m);
        for j in 0..m {
            y_next.push(project_psd(&(&x[j] + &u[j]))?);
            z_next.push(project_ppt(&(&x[j] + &v[j]), d, d)?);
        }
        let primal_sq = sq_dist(&x, &y_next) + sq_dist(&x, &z_next);
        let dual_sq = sq_dist(&y, &y_next) + sq_dist(&z, &z_next);
        for j in 0..m {
            u[j] = &u[j] + &(&x[j] - &y_next[j]);
            v[j] = &v[j] + &(&x[j] - &z_next[j]);
        }
        y = y_next;
        z = z_next;

        let sample = Checkpoint {
            iteration: it,
            primal_residual: primal_sq.sqrt(),
            dual_residual: dual_sq.sqrt(),
            fixed_point: (primal_sq + dual_sq).sqrt(),
        };
        let done = sample.primal_residual <= config.stop_tolerance && sample.dual_residual <= config.stop_tolerance;
        if config.checkpoint_every > 0 && (it % config.checkpoint_every == 0 || done) {
            checkpoints.push(sample);
        }
        if done {
            converged = true;
            break;
        }
    }

    let operators = repair(x, d)?;
    let residuals = feasibility_residuals(&operators, d)?;
    let primal_value = primal_objective(&operators, rhos);
    Ok(SdpSolution { operators, primal_value, residuals, iterations, converged, checkpoints })
}

/// Mixes affine-feasible operators with `I/m` until every `P_j` and `T_A(P_j)` is PSD.
fn repair(ops: Vec<ComplexMatrix>, d: usize) -> Result<Vec<ComplexMatrix>> {
    let m = ops.len() as f64;
    let n = d * d;
    let before = feasibility_residuals(&ops, d)?;
    let eps = before.psd.max(before.ppt);
    if eps == 0.0 {
        return Ok(ops);
    }
    // slightly more than the minimal weight mε/(1+mε) so rounding cannot leave a negative eigenvalue
    let t = ((m * eps) / (1.0 + m * eps) * (1.0 + 1e-9) + 1e-15).min(1.0);
    let uniform = ComplexMatrix::identity(n).scale_real(t / m);
    Ok(ops.iter().map(|p| &p.scale_real(1.0 - t) + &uniform).collect())
}
