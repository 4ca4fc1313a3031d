//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use melcert::certificates::{
    d7_certificate, d7_negative_weight, d7_param_check, D7_NEGATIVE_WEIGHT, DEFAULT_MARGIN_TOL,
};
use melcert::constructions::d7_vector;
use melcert::eigenspaces::DEFAULT_KERNEL_TOL;
use melcert::linalg::{hermitian_eig_jacobi, partial_transpose_a};
use melcert::{
    antisymmetric_basis, canonical_mes, case_4n3, case_4n_tensor, case_d11_all, case_d7, case_even, certify_family,
    check_mutual_orthogonality, common_negative_eigenspace, construct_for_dimension, density, generalized_pauli,
    negative_eigenspace, rank_one_gamma, solve_primal, symmetric_basis, verify_certificate, ComplexMatrix, Convention,
    DensityMatrix, SolverConfig, SubspaceBasis, UnitarySet, Verdict,
};
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        if c == (r % d) * d + r / d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn construction_validity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for d in [4, 6, 7, 8, 9, 10, 11, 12, 13, 16] {
        let set = construct_for_dimension(d).map_err(|e| format!("d={d}: {e}"))?;
        ensure(set.len() == d, || format!("d={d}: {} unitaries", set.len()))?;
        ensure(set.max_unitarity_residual() <= 1e-10, || format!("d={d}: unitarity"))?;
        let orth = check_mutual_orthogonality(&set, 1e-10);
        ensure(orth.passed, || format!("d={d}: max |tr(Ui^† Uj)| = {:e}", orth.max_off_diagonal))?;
        worst = worst.max(orth.max_off_diagonal);
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 5.0, || format!("took {elapsed:.2}s"))?;
    Ok(format!("10 dimensions, worst off-diagonal {worst:.1e}, {elapsed:.2}s"))
}

fn eigenspace_dimensions() -> Outcome {
    let mut worst = 0.0_f64;
    for d in 2..=16 {
        let anti = antisymmetric_basis(d).map_err(|e| e.to_string())?;
        let sym = symmetric_basis(d).map_err(|e| e.to_string())?;
        ensure(anti.dim() == d * (d - 1) / 2 && sym.dim() == d * (d + 1) / 2, || format!("d={d}: dimensions"))?;
        let rho = density(&canonical_mes(d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let diff = rho.partial_transpose().scale_real(d as f64).max_abs_diff(&swap(d));
        ensure(diff <= 1e-14, || format!("d={d}: |d·T_A(ρ1) − SWAP| = {diff:e}"))?;
        worst = worst.max(diff);
    }
    Ok(format!("d = 2..16, worst |d·T_A(ρ1) − SWAP| = {worst:.1e}"))
}

fn rank_one_families() -> Vec<UnitarySet> {
    let mut sets: Vec<UnitarySet> =
        [4, 6, 8, 9, 10, 11, 12, 13, 16].iter().map(|&d| construct_for_dimension(d).unwrap()).collect();
    sets.push(case_4n3(3).unwrap());
    sets.push(case_d11_all().unwrap());
    sets.extend((1..=3).map(|n| case_4n_tensor(n).unwrap()));
    sets.extend((2..=4).map(|n| case_even(n, n * n).unwrap()));
    sets
}

fn certificate_bounds() -> Outcome {
    let mut lines = Vec::new();
    for set in rank_one_families() {
        let d = set.d();
        let cert = certify_family(&set, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
        let best = cert.best();
        let label = format!("{} d={d} ({} states)", set.family(), set.len());
        ensure(cert.verdict() == Verdict::Certified, || format!("{label}: not certified"))?;
        ensure(best.report.min_margin() >= -1e-10, || format!("{label}: margin {:e}", best.report.min_margin()))?;
        let closed = 1.0 - 2.0 / (d * d) as f64;
        ensure((cert.bound() - closed).abs() <= 1e-12, || format!("{label}: bound {}", cert.bound()))?;
        lines.push(format!("{}:{d}", set.family()));
    }
    Ok(format!("{} families certified at 1 − 2/d² ({})", lines.len(), lines.join(", ")))
}

fn d7_certificate_check() -> Outcome {
    for c in Convention::BOTH {
        let weight = d7_negative_weight(c).map_err(|e| e.to_string())?;
        ensure((weight - D7_NEGATIVE_WEIGHT).abs() <= 1e-10, || format!("{c}: overlap {weight}"))?;
    }
    let (lambda, mu) = (7.0 / 13.0, 0.5);
    ensure(d7_param_check(lambda, mu), || "parameter inequalities fail".into())?;
    let rhos = case_d7().unwrap().states(Convention::U);
    let cert = d7_certificate(lambda, mu).map_err(|e| e.to_string())?;
    let report = verify_certificate(&cert, &rhos, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
    ensure(report.margins.len() == 7 && report.min_margin() >= -1e-9, || format!("margins {:?}", report.margins))?;
    ensure((report.bound - 1273.0 / 1274.0).abs() <= 1e-12, || format!("bound {}", report.bound))?;
    ensure(report.verdict == Verdict::Certified, || "not certified".into())?;

    let rank_one = rank_one_gamma(&d7_vector(), 7).map_err(|e| e.to_string())?;
    let partial = verify_certificate(&rank_one, &rhos, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
    ensure(partial.margins[..6].iter().all(|&m| m >= -1e-10) && partial.margins[6] < -1e-3, || {
        format!("rank-one margins {:?}", partial.margins)
    })?;
    Ok(format!(
        "overlap ⟨v|P₋|v⟩ = {D7_NEGATIVE_WEIGHT} (exact for this family), min margin {:.1e}, bound {} = 1273/1274",
        report.min_margin(),
        report.bound
    ))
}

fn intersection_dimensions() -> Outcome {
    let mut dims = Vec::new();
    for n in 1..=3 {
        let set = case_4n_tensor(n).unwrap();
        let common =
            common_negative_eigenspace(&set.states(Convention::U), DEFAULT_KERNEL_TOL).map_err(|e| e.to_string())?;
        ensure(common.dim() >= n, || format!("tensor n={n}: dim {}", common.dim()))?;
        dims.push(format!("tensor n={n}: {}", common.dim()));
    }
    for n in 2..=4 {
        let d = 2 * n;
        let set = case_even(n, n * n).unwrap();
        let common =
            common_negative_eigenspace(&set.states(Convention::U), DEFAULT_KERNEL_TOL).map_err(|e| e.to_string())?;
        let v = melcert::constructions::paired_half_vector(d, n);
        let dist = common.distance_to(&v);
        ensure(!common.is_empty() && dist < 1e-8, || format!("case-even n={n}: dim {} dist {dist:e}", common.dim()))?;
        dims.push(format!("case-even n={n}: {}", common.dim()));
    }
    Ok(dims.join(", "))
}

fn weak_duality() -> Outcome {
    let start = Instant::now();
    let set = construct_for_dimension(4).unwrap();
    let sol = solve_primal(&set.states(Convention::U), &SolverConfig::for_dimension(4)).map_err(|e| e.to_string())?;
    let r = sol.residuals.max();
    ensure(sol.converged && r <= 1e-6, || format!("residual {r:e}, converged {}", sol.converged))?;
    ensure(sol.primal_value <= 0.875 + 1e-3, || format!("value {}", sol.primal_value))?;

    let single = vec![density(&canonical_mes(4).unwrap()).unwrap()];
    let one = solve_primal(&single, &SolverConfig::for_dimension(4)).map_err(|e| e.to_string())?;
    ensure(one.primal_value >= 0.999, || format!("single-state value {}", one.primal_value))?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("took {elapsed:.1}s"))?;
    Ok(format!(
        "d=4 value {:.6} ≤ 0.875 + 1e-3 after {} iterations (residual {r:.1e}), single state {:.6}, {elapsed:.2}s",
        sol.primal_value, sol.iterations, one.primal_value
    ))
}

fn negative_control() -> Outcome {
    let set = generalized_pauli(3, 3).unwrap();
    let cert = certify_family(&set, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
    ensure(cert.outcomes.iter().all(|o| o.intersection_dim == 0), || "non-empty intersection".into())?;
    ensure(cert.verdict() == Verdict::NotCertified, || "certified".into())?;
    Ok("{I, Z, Z²} in d=3: empty intersection, not certified".into())
}

/// Intersection of two subspaces as the `+2` eigenspace of `P_A + P_B`.
fn pairwise_intersection(a: &SubspaceBasis, b: &SubspaceBasis) -> SubspaceBasis {
    let sum = &a.projector() + &b.projector();
    hermitian_eig_jacobi(&sum).unwrap().eigenspace(|l| l > 2.0 - 1e-8)
}

fn oracle_cross_checks() -> Outcome {
    let set = construct_for_dimension(4).unwrap();
    let mut worst_distance = 0.0_f64;
    for c in Convention::BOTH {
        let rhos: Vec<DensityMatrix> = set.states(c);
        let by_sum = common_negative_eigenspace(&rhos, DEFAULT_KERNEL_TOL).map_err(|e| e.to_string())?;
        let mut iterated = negative_eigenspace(&rhos[0], 1e-9).map_err(|e| e.to_string())?;
        for rho in &rhos[1..] {
            iterated = pairwise_intersection(&iterated, &negative_eigenspace(rho, 1e-9).map_err(|e| e.to_string())?);
        }
        let dist = by_sum.projector_distance(&iterated);
        ensure(by_sum.dim() == iterated.dim() && dist <= 1e-8, || format!("{c}: distance {dist:e}"))?;
        worst_distance = worst_distance.max(dist);
    }

    let mut worst_margin_gap = 0.0_f64;
    let mut families = rank_one_families();
    families.truncate(4);
    families.push(case_d7().unwrap());
    for set in families {
        let cert = certify_family(&set, DEFAULT_MARGIN_TOL).map_err(|e| e.to_string())?;
        for outcome in &cert.outcomes {
            let rhos = set.states(outcome.convention);
            for (rho, &m) in rhos.iter().zip(&outcome.report.margins) {
                let t = partial_transpose_a(rho.matrix(), set.d(), set.d()).map_err(|e| e.to_string())?;
                let diff = &outcome.certificate.gamma - &t;
                let jacobi = hermitian_eig_jacobi(&diff).map_err(|e| e.to_string())?.eigenvalues[0];
                worst_margin_gap = worst_margin_gap.max((jacobi - m).abs());
            }
        }
    }
    ensure(worst_margin_gap <= 1e-10, || format!("margin disagreement {worst_margin_gap:e}"))?;
    Ok(format!(
        "kernel-of-sum vs pairwise distance {worst_distance:.1e}; margins agree with Jacobi within {worst_margin_gap:.1e}"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("construction validity", construction_validity),
        ("eigenspace dimensions and swap identity", eigenspace_dimensions),
        ("rank-one certificate bounds", certificate_bounds),
        ("d=7 two-parameter certificate", d7_certificate_check),
        ("intersection dimensions", intersection_dimensions),
        ("weak-duality sandwich", weak_duality),
        ("negative control", negative_control),
        ("oracle cross-checks", oracle_cross_checks),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
