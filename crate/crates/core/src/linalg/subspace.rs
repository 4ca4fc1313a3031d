use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector};

/// Coordinates with modulus at or below this count as zero when ordering
/// basis vectors.
const COORD_ZERO: f64 = 1e-9;

/// Orthonormal spanning set of a subspace of `C^n`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<ComplexVector>,
}

impl SubspaceBasis {
    /// Wraps vectors the caller guarantees to be orthonormal.
    pub fn from_orthonormal(ambient_dim: usize, vectors: Vec<ComplexVector>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        Self { ambient_dim, vectors }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn first(&self) -> Option<&ComplexVector> {
        self.vectors.first()
    }

    /// Orthogonal projector `Σ |v⟩⟨v|`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let mut p = ComplexMatrix::zeros(n, n);
        for v in &self.vectors {
            for i in 0..n {
                if v[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        p
    }

    /// `max |G − I|` for the Gram matrix `G` of the basis.
    pub fn gram_residual(&self) -> f64 {
        let k = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..k {
            for j in 0..k {
                let g = self.vectors[i].inner(&self.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Distance from `v` to the subspace, `‖v − P v‖`.
    pub fn distance_to(&self, v: &ComplexVector) -> f64 {
        let mut residual = v.clone();
        for b in &self.vectors {
            residual = residual.axpy(-b.inner(v), b);
        }
        residual.norm()
    }

    /// Frobenius distance between the two orthogonal projectors.
    pub fn projector_distance(&self, other: &SubspaceBasis) -> f64 {
        (&self.projector() - &other.projector()).frobenius_norm()
    }

    /// Replaces the basis by a canonical one that depends only on the span:
    /// column-pivoted Gram–Schmidt over `P e_0, P e_1, …`, each vector phased
    /// so its first nonzero coordinate is real and positive, then ordered by
    /// descending modulus of that coordinate and ascending coordinate index.
    pub fn canonicalized(&self) -> SubspaceBasis {
        let k = self.dim();
        if k == 0 {
            return self.clone();
        }
        let n = self.ambient_dim;
        let p = self.projector();
        let mut chosen: Vec<ComplexVector> = Vec::with_capacity(k);
        for j in 0..n {
            if chosen.len() == k {
                break;
            }
            let mut c = p.column(j);
            for _ in 0..2 {
                for b in &chosen {
                    c = c.axpy(-b.inner(&c), b);
                }
            }
            let norm = c.norm();
            if norm > 1e-6 {
                chosen.push(c.scale(Complex64::new(1.0 / norm, 0.0)));
            }
        }
        let mut keyed: Vec<(f64, usize, ComplexVector)> = chosen
            .into_iter()
            .map(|v| {
                let lead = v.iter().position(|z| z.norm() > COORD_ZERO).unwrap_or(0);
                let z = v[lead];
                let v = if z.norm() > 0.0 { v.scale(z.conj() / z.norm()) } else { v };
                (z.norm(), lead, v)
            })
            .collect();
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        SubspaceBasis::from_orthonormal(n, keyed.into_iter().map(|(_, _, v)| v).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_basis_depends_only_on_span() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = SubspaceBasis::from_orthonormal(3, vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)]);
        let rotated = SubspaceBasis::from_orthonormal(
            3,
            vec![
                vec![Complex64::new(s, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, 0.0)].into(),
                vec![Complex64::new(s, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, 0.0)].into(),
            ],
        );
        assert!(a.projector_distance(&rotated) < 1e-14);
        let ca = a.canonicalized();
        let cr = rotated.canonicalized();
        for (x, y) in ca.vectors().iter().zip(cr.vectors()) {
            assert!(x.max_abs_diff(y) < 1e-12);
        }
        assert!(cr.gram_residual() < 1e-12);
    }

    #[test]
    fn distance_to_subspace() {
        let b = SubspaceBasis::from_orthonormal(2, vec![ComplexVector::basis(2, 0)]);
        assert_eq!(b.distance_to(&ComplexVector::basis(2, 0)), 0.0);
        assert_eq!(b.distance_to(&ComplexVector::basis(2, 1)), 1.0);
    }
}
