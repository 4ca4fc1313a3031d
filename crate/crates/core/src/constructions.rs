//! Explicit unitary families whose maximally entangled states share a common
//! negative eigenvector of the partial transpose.
//!
//! All kets are 0-based; the matrices below are written with 1-based labels
//! in the comments where that matches the usual presentation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::states::{FamilyTag, UnitarySet};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `e^{2πi·power/n}`, reducing the exponent first.
fn root_of_unity(n: usize, power: i64) -> Complex64 {
    let p = power.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * p as f64 / n as f64)
}

fn check_count(count: usize, available: usize) -> Result<()> {
    if count == 0 || count > available {
        return Err(Error::CountOutOfRange { requested: count, available });
    }
    Ok(())
}

/// Member `(k, l)` (0-based) of the `n²` shift-and-phase family on `C^{2n}`:
///
/// `Σ_m w^{(m+k−1)(l−1)} (|k⊕m⟩⟨m| + |n+m⟩⟨n+(k⊕m)|)`
///
/// with `m, k⊕m ∈ {1..n}` 1-based and `w = e^{2πi/n}`. Both halves carry the
/// same phase, so `(I⊗U)|v⟩` stays antisymmetric for
/// `|v⟩ = Σ_m (|m, n+m⟩ − |n+m, m⟩)`.
fn case_even_member(n: usize, k: usize, l: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    let (ni, ki, li) = (n as i64, k as i64, l as i64);
    for m in 1..=ni {
        let shifted = (ki + m - 1).rem_euclid(ni) + 1;
        let phase = root_of_unity(n, (m + ki - 1) * li);
        u[((shifted - 1) as usize, (m - 1) as usize)] = phase;
        u[((ni + m - 1) as usize, (ni + shifted - 1) as usize)] = phase;
    }
    u
}

/// First `count` members of the `n²` orthogonal unitaries on `C^{2n}`, ordered
/// by `k·n + l`. The first member is the identity.
pub fn case_even(n: usize, count: usize) -> Result<UnitarySet> {
    if n == 0 {
        return Err(Error::InvalidDimension("case-even needs n >= 1".into()));
    }
    check_count(count, n * n)?;
    let members =
        (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).take(count).map(|(k, l)| case_even_member(n, k, l)).collect();
    UnitarySet::new(FamilyTag::CaseEven, members)
}

/// Generalized Pauli matrix `X^a Z^b` on `C^d`, where `X|j⟩ = |j+1⟩` and
/// `Z|j⟩ = w^j|j⟩` with `w = e^{2πi/d}`.
pub fn pauli_member(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + a) % d, j)] = root_of_unity(d, (b * j) as i64);
    }
    m
}

/// First `count` of `{X^a Z^b}` in lexicographic `(a, b)` order.
pub fn generalized_pauli(d: usize, count: usize) -> Result<UnitarySet> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("generalized Pauli matrices need d >= 2, got {d}")));
    }
    check_count(count, d * d)?;
    let members =
        (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).take(count).map(|(a, b)| pauli_member(d, a, b)).collect();
    UnitarySet::new(FamilyTag::Pauli, members)
}

fn block_family(tag: FamilyTag, top: &UnitarySet, bottom: &UnitarySet) -> Result<UnitarySet> {
    let members =
        top.unitaries().iter().zip(bottom.unitaries()).map(|(v, w)| ComplexMatrix::block_diagonal(v, w)).collect();
    UnitarySet::new(tag, members)
}

/// `d = 4n+1`: `diag(V_j, W_j)` with `V_j` from the case-even family on
/// `C^{2n+2}` and `W_j` generalized Paulis on `C^{2n−1}`.
pub fn case_4n1(n: usize) -> Result<UnitarySet> {
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            d: 4 * n + 1,
            reason: "the 4n+1 block family needs n >= 2 so that (n+1)^2 >= 4n+1".into(),
        });
    }
    let d = 4 * n + 1;
    block_family(FamilyTag::Case4n1, &case_even(n + 1, d)?, &generalized_pauli(2 * n - 1, d)?)
}

/// `d = 4n+3`: `diag(V_j, W_j)` with `V_j` from the case-even family on
/// `C^{2n+2}` and `W_j` generalized Paulis on `C^{2n+1}`.
pub fn case_4n3(n: usize) -> Result<UnitarySet> {
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            d: 4 * n + 3,
            reason: "the 4n+3 block family needs n >= 3 so that (n+1)^2 >= 4n+3".into(),
        });
    }
    let d = 4 * n + 3;
    block_family(FamilyTag::Case4n3, &case_even(n + 1, d)?, &generalized_pauli(2 * n + 1, d)?)
}

/// The six 4×4 blocks `V_1..V_6` used for `d = 7`; the first four also seed
/// the tensor family.
pub fn d7_top_blocks() -> [ComplexMatrix; 6] {
    [
        ComplexMatrix::identity(4),
        ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
        ]),
        ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
        ]),
        ComplexMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ]),
        ComplexMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ]),
        ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ]),
    ]
}

/// The seventh `d = 7` unitary, a cyclic permutation (1-based: rows 1..7
/// carry their single 1 in columns 6, 7, 1, 2, 3, 4, 5).
pub fn d7_seventh() -> ComplexMatrix {
    let cols = [5, 6, 0, 1, 2, 3, 4];
    let mut u = ComplexMatrix::zeros(7, 7);
    for (row, &col) in cols.iter().enumerate() {
        u[(row, col)] = ONE;
    }
    u
}

/// The seven `d = 7` unitaries: `U_i = diag(V_i, W_i)` for `i ≤ 6` with
/// `W_{i+1} = diag(1, ω^i, ω^{2i})`, `W_{i+4} = diag(1, ω^i, ω^{2i})·S`,
/// `ω = e^{2πi/3}`, followed by the permutation [`d7_seventh`].
pub fn case_d7() -> Result<UnitarySet> {
    let s = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
    let phase = |i: i64| ComplexMatrix::diagonal(&[ONE, root_of_unity(3, i), root_of_unity(3, 2 * i)]);
    let mut w_blocks: Vec<ComplexMatrix> = (0..3).map(phase).collect();
    w_blocks.extend((0..3).map(|i| phase(i).matmul(&s)));
    let mut members: Vec<ComplexMatrix> =
        d7_top_blocks().iter().zip(&w_blocks).map(|(v, w)| ComplexMatrix::block_diagonal(v, w)).collect();
    members.push(d7_seventh());
    UnitarySet::new(FamilyTag::D7, members)
}

/// The twelve 6×6 blocks of the `d = 11` family, `w = e^{2πi/3}`, `i = 1, 2, 3`
/// within each of the four printed groups.
pub fn d11_top_blocks() -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(12);
    type Entry = (usize, usize, f64, i64);
    // (row, col, sign, power of w^i), 0-based; power 0, 1, 2 multiplies by w^{0}, w^{i}, w^{2i}
    let groups: [&[Entry]; 4] = [
        &[(0, 0, 1.0, 0), (1, 1, 1.0, 0), (2, 2, 1.0, 1), (3, 3, 1.0, 1), (4, 4, 1.0, 2), (5, 5, 1.0, 2)],
        &[(2, 1, 1.0, 0), (0, 3, -1.0, 0), (3, 5, -1.0, 1), (4, 2, -1.0, 1), (1, 4, 1.0, 2), (5, 0, -1.0, 2)],
        &[(0, 2, 1.0, 0), (3, 1, 1.0, 0), (4, 0, 1.0, 1), (1, 5, 1.0, 1), (2, 4, 1.0, 2), (5, 3, 1.0, 2)],
        &[(4, 1, 1.0, 0), (0, 5, -1.0, 0), (1, 3, -1.0, 1), (2, 0, -1.0, 1), (3, 4, 1.0, 2), (5, 2, -1.0, 2)],
    ];
    for group in groups {
        for i in 1..=3_i64 {
            let mut v = ComplexMatrix::zeros(6, 6);
            for &(r, c, sign, power) in group {
                v[(r, c)] = root_of_unity(3, power * i) * sign;
            }
            out.push(v);
        }
    }
    out
}

fn d11_family(count: usize) -> Result<UnitarySet> {
    let paulis = generalized_pauli(5, 12)?;
    let members = d11_top_blocks()
        .iter()
        .zip(paulis.unitaries())
        .take(count)
        .map(|(v, w)| ComplexMatrix::block_diagonal(v, w))
        .collect();
    UnitarySet::new(FamilyTag::D11, members)
}

/// The eleven `d = 11` unitaries `diag(V_j, W_j)`, `W_j` the first generalized
/// Paulis on `C^5`.
pub fn case_d11() -> Result<UnitarySet> {
    d11_family(11)
}

/// All twelve `d = 11` unitaries, one more than the dimension.
pub fn case_d11_all() -> Result<UnitarySet> {
    d11_family(12)
}

/// `4n` unitaries `W_i ⊗ V_j` on `C^{4n}`, `W_i = diag(1, w^i, …, w^{(n−1)i})`,
/// `w = e^{2πi/n}`, `V_1..V_4` the first four `d = 7` blocks. Ordered with
/// `V_j` outer and `i` inner: `U_{(j−1)n + i + 1} = W_i ⊗ V_j`.
pub fn case_4n_tensor(n: usize) -> Result<UnitarySet> {
    if n == 0 {
        return Err(Error::InvalidDimension("the tensor family needs n >= 1".into()));
    }
    let blocks = d7_top_blocks();
    let phases: Vec<ComplexMatrix> = (0..n)
        .map(|i| {
            let diag: Vec<Complex64> = (0..n).map(|a| root_of_unity(n, (a * i) as i64)).collect();
            ComplexMatrix::diagonal(&diag)
        })
        .collect();
    let members = blocks[..4].iter().flat_map(|v| phases.iter().map(move |w| w.kron(v))).collect();
    UnitarySet::new(FamilyTag::Tensor4n, members)
}

/// Picks the construction for dimension `d` and returns exactly `d` unitaries.
pub fn construct_for_dimension(d: usize) -> Result<UnitarySet> {
    match d {
        0..=3 => Err(Error::UnsupportedDimension { d, reason: "constructions start at d = 4".into() }),
        5 => Err(Error::UnsupportedDimension {
            d,
            reason: "d=5 external: five PPT-indistinguishable states for d = 5 are given by \
                     Cosentino (2013) and are not constructed here"
                .into(),
        }),
        7 => case_d7(),
        11 => case_d11(),
        d if d % 2 == 0 => case_even(d / 2, d),
        d if d % 4 == 1 => case_4n1((d - 1) / 4),
        d => case_4n3((d - 3) / 4),
    }
}

/// `Σ sign·(|a b⟩ − |b a⟩)` over the given 0-based pairs, normalized.
pub fn antisymmetric_pairing(d: usize, pairs: &[(usize, usize, f64)]) -> ComplexVector {
    let mut v = ComplexVector::zeros(d * d);
    for &(a, b, sign) in pairs {
        v[a * d + b] += Complex64::new(sign, 0.0);
        v[b * d + a] -= Complex64::new(sign, 0.0);
    }
    v.normalized().expect("pairs are non-empty and distinct")
}

/// `Σ_{m=1}^{h} (|m, h+m⟩ − |h+m, m⟩)` on `C^d ⊗ C^d`, normalized; `h = d/2`
/// for the case-even family and `h = n+1` for the odd block families.
pub fn paired_half_vector(d: usize, h: usize) -> ComplexVector {
    let pairs: Vec<(usize, usize, f64)> = (0..h).map(|m| (m, h + m, 1.0)).collect();
    antisymmetric_pairing(d, &pairs)
}

/// `(1/2)(|13⟩ − |31⟩ − |24⟩ + |42⟩)` on `C^7 ⊗ C^7`, the common negative
/// eigenvector of the first six `d = 7` states.
pub fn d7_vector() -> ComplexVector {
    antisymmetric_pairing(7, &[(0, 2, 1.0), (1, 3, -1.0)])
}

/// `(|12⟩ − |21⟩ + |34⟩ − |43⟩ + |56⟩ − |65⟩)/√6` on `C^11 ⊗ C^11`.
pub fn d11_vector() -> ComplexVector {
    antisymmetric_pairing(11, &[(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0)])
}

/// `|4k+1, 4k+3⟩ − |4k+3, 4k+1⟩ + |4k+4, 4k+2⟩ − |4k+2, 4k+4⟩` (1-based),
/// normalized, for `k = 0..n`.
pub fn tensor_vectors(n: usize) -> Vec<ComplexVector> {
    let d = 4 * n;
    (0..n).map(|k| antisymmetric_pairing(d, &[(4 * k, 4 * k + 2, 1.0), (4 * k + 3, 4 * k + 1, 1.0)])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::check_mutual_orthogonality;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_orthogonal(set: &UnitarySet) {
        let report = check_mutual_orthogonality(set, 1e-10);
        assert!(report.passed, "{:?} {:?}", set.family(), report);
        assert!(set.max_unitarity_residual() <= 1e-10);
    }

    #[test]
    fn case_even_starts_with_identity() {
        for n in 1..=4 {
            let set = case_even(n, 1).unwrap();
            assert_eq!(set.unitaries()[0], ComplexMatrix::identity(2 * n));
        }
    }

    #[test]
    fn case_even_n2_matches_listed_matrices() {
        let set = case_even(2, 4).unwrap();
        let u = set.unitaries();
        let alternating = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(u[1].max_abs_diff(&alternating) < 1e-15);
        let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(u[2].max_abs_diff(&ComplexMatrix::block_diagonal(&s, &s.transpose())) < 1e-15);
        // phased variant diag(1, w, w, 1)·U_3 with w = −1
        let phased = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]).matmul(&u[2]);
        assert!(u[3].max_abs_diff(&phased) < 1e-15);
        assert_orthogonal(&set);
    }

    #[test]
    fn case_even_n3_matches_listed_diagonal_and_shift_forms() {
        let n = 3;
        let set = case_even(n, 9).unwrap();
        let u = set.unitaries();
        let w = |p: i64| root_of_unity(n, p);
        // U_2 .. U_n: diag(1, w^j, …, w^{(n−1)j}) on both halves
        for j in 0..n as i64 {
            let half: Vec<Complex64> = (0..n as i64).map(|a| w(a * j)).collect();
            let full: Vec<Complex64> = half.iter().chain(half.iter()).copied().collect();
            assert!(u[j as usize].max_abs_diff(&ComplexMatrix::diagonal(&full)) < 1e-14);
        }
        // U_{n+1} = diag(S, Sᵀ) with S|m⟩ = |m+1⟩
        let shift = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let u_next = ComplexMatrix::block_diagonal(&shift, &shift.transpose());
        assert!(u[n].max_abs_diff(&u_next) < 1e-15);
        // U_{n+1+j} = diag(1, w^j, …, w^{(n−1)j}, w^j, …, w^{(n−1)j}, 1)·U_{n+1}
        for j in 1..n as i64 {
            let mut diag: Vec<Complex64> = (0..n as i64).map(|a| w(a * j)).collect();
            diag.extend((1..=n as i64).map(|a| w(a * j)));
            let expected = ComplexMatrix::diagonal(&diag).matmul(&u_next);
            assert!(u[n + j as usize].max_abs_diff(&expected) < 1e-14);
        }
        assert_orthogonal(&set);
    }

    #[test]
    fn case_even_member_maps_pair_vector_into_antisymmetric_span() {
        for n in 2..=4 {
            let d = 2 * n;
            let v = paired_half_vector(d, n).scale(c((2.0 * n as f64).sqrt(), 0.0));
            for k in 0..n {
                for l in 0..n {
                    let u = case_even_member(n, k, l);
                    let lifted = ComplexMatrix::identity(d).kron(&u).apply(&v);
                    let mut expected = ComplexVector::zeros(d * d);
                    for m in 1..=n {
                        let km = (k + m - 1) % n + 1;
                        let phase = root_of_unity(n, ((m + k - 1) * l) as i64);
                        expected[(km - 1) * d + n + m - 1] += phase;
                        expected[(n + m - 1) * d + km - 1] -= phase;
                    }
                    assert!(lifted.max_abs_diff(&expected) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn case_even_count_bounds() {
        assert!(matches!(case_even(2, 5), Err(Error::CountOutOfRange { .. })));
        assert!(matches!(case_even(2, 0), Err(Error::CountOutOfRange { .. })));
        assert!(case_even(0, 1).is_err());
    }

    #[test]
    fn pauli_family_is_trace_orthogonal_and_cyclic() {
        let set = generalized_pauli(5, 25).unwrap();
        for (i, a) in set.unitaries().iter().enumerate() {
            for (j, b) in set.unitaries().iter().enumerate() {
                let t = a.trace_inner(b).unwrap();
                let expected = if i == j { 5.0 } else { 0.0 };
                assert!((t - expected).norm() < 1e-12);
            }
        }
        let x = pauli_member(5, 1, 0);
        let z = pauli_member(5, 0, 1);
        let mut xp = ComplexMatrix::identity(5);
        let mut zp = ComplexMatrix::identity(5);
        for _ in 0..5 {
            xp = xp.matmul(&x);
            zp = zp.matmul(&z);
        }
        assert!(xp.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
        assert!(zp.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
        assert_eq!(generalized_pauli(4, 1).unwrap().unitaries()[0], ComplexMatrix::identity(4));
        assert!(generalized_pauli(3, 10).is_err());
    }

    #[test]
    fn odd_block_families() {
        let set = case_4n1(2).unwrap();
        assert_eq!((set.d(), set.len()), (9, 9));
        assert_eq!(set.unitaries()[0], ComplexMatrix::identity(9));
        assert_orthogonal(&set);
        let set = case_4n3(3).unwrap();
        assert_eq!((set.d(), set.len()), (15, 15));
        assert_eq!(set.unitaries()[0], ComplexMatrix::identity(15));
        assert_orthogonal(&set);
        assert!(case_4n1(1).is_err());
        assert!(case_4n3(2).is_err());
    }

    #[test]
    fn d7_family() {
        let set = case_d7().unwrap();
        assert_eq!(set.len(), 7);
        assert_eq!(set.unitaries()[0], ComplexMatrix::identity(7));
        let u7 = &set.unitaries()[6];
        for u in &set.unitaries()[..6] {
            assert!(u7.trace_inner(u).unwrap().norm() < 1e-12);
        }
        assert_orthogonal(&set);
    }

    #[test]
    fn d11_family() {
        for v in d11_top_blocks() {
            assert!(v.unitarity_residual() < 1e-12);
        }
        let all = case_d11_all().unwrap();
        assert_eq!(all.len(), 12);
        assert_orthogonal(&all);
        assert_eq!(case_d11().unwrap().len(), 11);
    }

    #[test]
    fn tensor_family() {
        let one = case_4n_tensor(1).unwrap();
        for (u, v) in one.unitaries().iter().zip(&d7_top_blocks()[..4]) {
            assert_eq!(u, v);
        }
        for n in 1..=3 {
            let set = case_4n_tensor(n).unwrap();
            assert_eq!((set.d(), set.len()), (4 * n, 4 * n));
            assert_orthogonal(&set);
        }
        let set = case_4n_tensor(2).unwrap();
        let w1 = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(set.unitaries()[3].max_abs_diff(&w1.kron(&d7_top_blocks()[1])) < 1e-15);
    }

    #[test]
    fn dispatcher() {
        for d in [4, 6, 7, 8, 9, 10, 11, 12, 13, 15, 16] {
            let set = construct_for_dimension(d).unwrap();
            assert_eq!((set.d(), set.len()), (d, d));
        }
        assert_eq!(construct_for_dimension(13).unwrap().family(), FamilyTag::Case4n1);
        assert_eq!(construct_for_dimension(15).unwrap().family(), FamilyTag::Case4n3);
        for d in [0, 1, 2, 3, 5] {
            assert!(matches!(construct_for_dimension(d), Err(Error::UnsupportedDimension { .. })));
        }
        let msg = construct_for_dimension(5).unwrap_err().to_string();
        assert!(msg.contains("d=5 external"), "{msg}");
    }
}
