use serde::Serialize;

use super::{
    c64, one, schur_decompose, singular_values, two_norm, zero, ComplexMatrix, Schur, TOL_SING,
};
use crate::error::Result;

/// Relative distance under which two eigenvalues form a cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Eigenvalues, unit-norm eigenvectors and their conditioning.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<c64>,
    /// Unit-norm right eigenvectors as columns.
    #[serde(skip)]
    pub right_vectors: ComplexMatrix,
    /// Unit-norm left eigenvectors as columns.
    #[serde(skip)]
    pub left_vectors: ComplexMatrix,
    /// `s_max / s_min` of the right eigenvector matrix as computed.
    pub kappa_v_raw: f64,
    /// Set when the eigenvector matrix is numerically singular.
    pub defective: bool,
    pub kappa_lambda: Vec<f64>,
    /// Groups of eigenvalue indices closer than `CLUSTER_TOL * ||A||`.
    pub clusters: Vec<Vec<usize>>,
    pub norm_a: f64,
    #[serde(skip)]
    pub schur: Schur,
}

impl SpectralData {
    /// `κ(V)`, or `+∞` when the eigenvector matrix is singular.
    pub fn kappa_v(&self) -> f64 {
        if self.defective {
            f64::INFINITY
        } else {
            self.kappa_v_raw
        }
    }

    /// True when some eigenvalue belongs to a cluster of size > 1.
    pub fn has_repeated(&self) -> bool {
        self.clusters.iter().any(|c| c.len() > 1)
    }

    /// Cluster index of every eigenvalue.
    pub fn cluster_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.eigenvalues.len()];
        for (c, members) in self.clusters.iter().enumerate() {
            for &i in members {
                labels[i] = c;
            }
        }
        labels
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn normalize(v: &mut [c64]) {
    let n = super::norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Keeps a partial back-substitution finite: scales `v` down when `lead`
/// grows past `1e100`.
fn rescale(v: &mut [c64], lead: f64) {
    if lead > 1e100 {
        v.iter_mut().for_each(|x| *x /= lead);
    }
}

/// Full eigen-decomposition through the complex Schur form.
pub fn eigen_full(a: &ComplexMatrix) -> Result<SpectralData> {
    let n = a.require_square()?;
    let schur = schur_decompose(a)?;
    let t = &schur.t;
    let eigenvalues = t.diagonal();
    let tnorm = t.frobenius_norm();
    let small = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);

    let mut right_cols = Vec::with_capacity(n);
    let mut left_cols = Vec::with_capacity(n);
    for j in 0..n {
        let lambda = eigenvalues[j];
        // T x = lambda x, x_j = 1, x_i = 0 for i > j
        let mut x = vec![zero(); n];
        x[j] = one();
        for i in (0..j).rev() {
            let mut s = zero();
            for l in i + 1..=j {
                s -= t[(i, l)] * x[l];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = c64::new(small, 0.0);
            }
            x[i] = s / d;
            let lead = x[i].norm();
            rescale(&mut x[i..=j], lead);
        }
        let mut v = schur.q.mul_vec(&x);
        normalize(&mut v);
        right_cols.push(v);

        // y^* T = lambda y^*, y_j = 1, y_i = 0 for i < j
        let mut y = vec![zero(); n];
        y[j] = one();
        for i in j + 1..n {
            let mut s = zero();
            for l in j..i {
                s -= t[(l, i)].conj() * y[l];
            }
            let mut d = (t[(i, i)] - lambda).conj();
            if d.norm() < small {
                d = c64::new(small, 0.0);
            }
            y[i] = s / d;
            let lead = y[i].norm();
            rescale(&mut y[j..=i], lead);
        }
        let mut w = schur.q.mul_vec(&y);
        normalize(&mut w);
        left_cols.push(w);
    }
    let right_vectors = ComplexMatrix::from_columns(n, &right_cols);
    let left_vectors = ComplexMatrix::from_columns(n, &left_cols);

    let kappa_lambda = (0..n)
        .map(|j| {
            let c = super::dot(&left_cols[j], &right_cols[j]).norm();
            if c == 0.0 {
                f64::INFINITY
            } else {
                (1.0 / c).max(1.0)
            }
        })
        .collect();

    if right_cols
        .iter()
        .flatten()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(crate::error::Error::NonConvergence { iterations: 0 });
    }
    let sv = singular_values(&right_vectors);
    let (smax, smin) = (
        sv.first().copied().unwrap_or(1.0),
        sv.last().copied().unwrap_or(1.0),
    );
    let defective = n > 0 && smin < TOL_SING * smax;
    let kappa_v_raw = if n == 0 {
        1.0
    } else if smin == 0.0 {
        f64::INFINITY
    } else {
        (smax / smin).max(1.0)
    };

    let norm_a = two_norm(a);
    let clusters = cluster_eigenvalues(&eigenvalues, CLUSTER_TOL * norm_a.max(f64::MIN_POSITIVE));

    Ok(SpectralData {
        eigenvalues,
        right_vectors,
        left_vectors,
        kappa_v_raw,
        defective,
        kappa_lambda,
        clusters,
        norm_a,
        schur,
    })
}

/// Connected components of eigenvalues linked when closer than `link`.
pub fn cluster_eigenvalues(eigs: &[c64], link: f64) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() < link {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_to_group[r] == usize::MAX {
            root_to_group[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_to_group[r]].push(i);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_matrix_is_perfectly_conditioned() {
        let a = ComplexMatrix::from_diag(&[c64::new(1.0, 0.0), c64::new(-1.0, 0.0)]);
        let s = eigen_full(&a).unwrap();
        assert!((s.kappa_v() - 1.0).abs() < 1e-12);
        assert!(s.kappa_lambda.iter().all(|k| (k - 1.0).abs() < 1e-12));
    }

    #[test]
    fn jordan_block_is_defective() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 10.0], &[0.0, 1.0]]);
        let s = eigen_full(&a).unwrap();
        assert!(s.defective);
        assert!(s.kappa_v().is_infinite());
        assert!(s.has_repeated());
    }

    #[test]
    fn clusters_are_transitive() {
        let e = [
            c64::new(0.0, 0.0),
            c64::new(0.5, 0.0),
            c64::new(1.0, 0.0),
            c64::new(5.0, 0.0),
        ];
        let c = cluster_eigenvalues(&e, 0.6);
        assert_eq!(c, vec![vec![0, 1, 2], vec![3]]);
    }
}
