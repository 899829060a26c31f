//! Spectral projectors, invariant-subspace bases and compressions for a
//! partition of the spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    apply_matrix_polynomial, c64, cluster_eigenvalues, eval_polynomial, reorder_schur,
    solve_sylvester_triangular, two_norm, ComplexMatrix, SpectralData,
};

/// Default link distance for automatic grouping, relative to `||A||`.
pub const AUTO_LINK: f64 = 0.1;

/// Disjoint eigenvalue index sets covering the spectrum. Indices refer to
/// `SpectralData::eigenvalues`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPartition {
    pub groups: Vec<Vec<usize>>,
}

impl SpectralPartition {
    /// Validates that `groups` are nonempty, disjoint, cover `0..spec.len()`
    /// and keep every eigenvalue cluster whole.
    pub fn new(spec: &SpectralData, groups: Vec<Vec<usize>>) -> Result<Self> {
        let n = spec.eigenvalues.len();
        let mut owner = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("group {g} is empty")));
            }
            for &i in members {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} out of range for {n} eigenvalues"
                    )));
                }
                if owner[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} appears in two groups"
                    )));
                }
                owner[i] = g;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "eigenvalue {i} is not covered"
            )));
        }
        for cluster in &spec.clusters {
            if cluster.iter().any(|&i| owner[i] != owner[cluster[0]]) {
                return Err(Error::ClusterSplit(format!(
                    "{:.6}",
                    spec.eigenvalues[cluster[0]]
                )));
            }
        }
        Ok(Self { groups })
    }

    /// Everything in one group.
    pub fn whole(spec: &SpectralData) -> Self {
        Self {
            groups: vec![(0..spec.eigenvalues.len()).collect()],
        }
    }

    /// One group per eigenvalue cluster (singletons for a simple spectrum).
    pub fn finest(spec: &SpectralData) -> Self {
        Self {
            groups: spec.clusters.clone(),
        }
    }

    /// Connected components of the spectrum with link `factor * ||A||`.
    pub fn auto(spec: &SpectralData, factor: f64) -> Self {
        Self {
            groups: cluster_eigenvalues(&spec.eigenvalues, factor * spec.norm_a),
        }
    }

    /// Groups by a predicate on eigenvalues: `true` first, then `false`.
    /// Empty classes are dropped.
    pub fn split_by(spec: &SpectralData, pred: impl Fn(c64) -> bool) -> Result<Self> {
        let (a, b): (Vec<usize>, Vec<usize>) =
            (0..spec.eigenvalues.len()).partition(|&i| pred(spec.eigenvalues[i]));
        let groups = [a, b].into_iter().filter(|g| !g.is_empty()).collect();
        Self::new(spec, groups)
    }
}

/// Projector data for one group.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectorGroup {
    pub indices: Vec<usize>,
    pub eigenvalues: Vec<c64>,
    #[serde(skip)]
    pub p: ComplexMatrix,
    pub norm_p: f64,
    /// Orthonormal basis of the invariant subspace.
    #[serde(skip)]
    pub u: ComplexMatrix,
    /// `U*AU`, upper triangular.
    #[serde(skip)]
    pub compressed: ComplexMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorSet {
    pub groups: Vec<ProjectorGroup>,
}

impl ProjectorSet {
    /// CSV with header `group,size,norm_Pj`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("group,size,norm_Pj\n");
        for (j, g) in self.groups.iter().enumerate() {
            s.push_str(&format!("{},{},{:.17e}\n", j, g.indices.len(), g.norm_p));
        }
        s
    }

    pub fn norms(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.norm_p).collect()
    }
}

/// Projectors from the ordered Schur form: group `j` is moved to the leading
/// block `T11`, `Y` solves `T11 Y - Y T22 = T12`, and
/// `P = Q [[I, Y], [0, 0]] Q*`, so `||P|| = sqrt(1 + ||Y||^2)`.
pub fn build_projectors(
    a: &ComplexMatrix,
    spec: &SpectralData,
    partition: &SpectralPartition,
) -> Result<ProjectorSet> {
    let n = a.require_square()?;
    if spec.eigenvalues.len() != n {
        return Err(Error::Dimension(
            "spectral data does not match the matrix".into(),
        ));
    }
    let checked = SpectralPartition::new(spec, partition.groups.clone())?;
    let mut groups = Vec::with_capacity(checked.groups.len());
    for members in &checked.groups {
        let mut select = vec![false; n];
        for &i in members {
            select[i] = true;
        }
        let mut schur = spec.schur.clone();
        let r = reorder_schur(&mut schur, &select);
        let t11 = schur.t.submatrix(0, r, 0, r);
        let u = schur.q.leading_columns(r);
        let (p, norm_p) = if r == n {
            (ComplexMatrix::identity(n), 1.0)
        } else {
            let t22 = schur.t.submatrix(r, n, r, n);
            let t12 = schur.t.submatrix(0, r, r, n);
            let y = solve_sylvester_triangular(&t11, &t22, &t12)?;
            let block = ComplexMatrix::from_fn(n, n, |i, j| {
                if i < r && j < r {
                    c64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
                } else if i < r {
                    y[(i, j - r)]
                } else {
                    c64::new(0.0, 0.0)
                }
            });
            let p = schur.q.matmul(&block).matmul(&schur.q.adjoint());
            let ny = two_norm(&y);
            (p, (1.0 + ny * ny).sqrt())
        };
        // the whole-spectrum group compresses to A itself
        let compressed = if r == n { a.clone() } else { t11 };
        let u = if r == n {
            ComplexMatrix::identity(n)
        } else {
            u
        };
        groups.push(ProjectorGroup {
            indices: members.clone(),
            eigenvalues: members.iter().map(|&i| spec.eigenvalues[i]).collect(),
            p,
            norm_p,
            u,
            compressed,
        });
    }
    Ok(ProjectorSet { groups })
}

/// `Σ_j ||P_j|| ||p(U_j* A U_j)||` for monomial coefficients `coeffs`.
pub fn theorem_gensp_rhs(pset: &ProjectorSet, coeffs: &[c64]) -> Result<f64> {
    let mut total = 0.0;
    for g in &pset.groups {
        total += g.norm_p * two_norm(&apply_matrix_polynomial(coeffs, &g.compressed)?);
    }
    Ok(total)
}

/// `Σ_j κ(λ_j) |p(λ_j)|`.
pub fn ew_condition_sum(spec: &SpectralData, coeffs: &[c64]) -> Result<f64> {
    if spec.has_repeated() || spec.defective {
        return Err(Error::RepeatedEigenvalues);
    }
    Ok(spec
        .eigenvalues
        .iter()
        .zip(&spec.kappa_lambda)
        .map(|(z, k)| k * eval_polynomial(coeffs, *z).norm())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen_full;

    #[test]
    fn singleton_norm_is_eigenvalue_condition() {
        let a =
            ComplexMatrix::from_real_rows(&[&[1.0, 3.0, 0.5], &[0.0, 2.0, -1.0], &[0.0, 0.0, 4.0]]);
        let spec = eigen_full(&a).unwrap();
        let part = SpectralPartition::finest(&spec);
        let ps = build_projectors(&a, &spec, &part).unwrap();
        let sum = ps
            .groups
            .iter()
            .fold(ComplexMatrix::zeros(3, 3), |acc, g| acc.add(&g.p));
        assert!(sum.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-12);
        for g in &ps.groups {
            let i = g.indices[0];
            assert!((g.norm_p - spec.kappa_lambda[i]).abs() < 1e-8 * spec.kappa_lambda[i]);
            assert!(g.p.matmul(&g.p).sub(&g.p).max_abs() < 1e-10);
        }
    }

    #[test]
    fn whole_group_is_identity() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 3.0], &[0.0, 2.0]]);
        let spec = eigen_full(&a).unwrap();
        let ps = build_projectors(&a, &spec, &SpectralPartition::whole(&spec)).unwrap();
        assert_eq!(ps.groups[0].compressed, a);
        assert_eq!(ps.groups[0].norm_p, 1.0);
    }

    #[test]
    fn invalid_partitions_rejected() {
        let a =
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 3.0]]);
        let spec = eigen_full(&a).unwrap();
        let i1: Vec<usize> = (0..3)
            .filter(|&i| (spec.eigenvalues[i].re - 1.0).abs() < 0.5)
            .collect();
        let i3: Vec<usize> = (0..3)
            .filter(|&i| (spec.eigenvalues[i].re - 3.0).abs() < 0.5)
            .collect();
        assert!(SpectralPartition::new(&spec, vec![i1.clone(), i3.clone()]).is_ok());
        assert!(matches!(
            SpectralPartition::new(&spec, vec![vec![i1[0]], vec![i1[1], i3[0]]]),
            Err(Error::ClusterSplit(_))
        ));
        assert!(matches!(
            SpectralPartition::new(&spec, vec![i1]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            ew_condition_sum(&spec, &[c64::new(1.0, 0.0)]),
            Err(Error::RepeatedEigenvalues)
        ));
    }
}
