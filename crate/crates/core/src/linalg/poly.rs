use super::{c64, one, two_norm, zero, ComplexMatrix};
use crate::error::Result;

/// `Σ c_i A^i` by Horner's rule.
pub fn apply_matrix_polynomial(coeffs: &[c64], a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let mut acc = ComplexMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = a.matmul(&acc);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    Ok(acc)
}

/// `Σ c_i z^i` by Horner's rule.
pub fn eval_polynomial(coeffs: &[c64], z: c64) -> c64 {
    coeffs.iter().rev().fold(zero(), |acc, &c| acc * z + c)
}

/// Monomial coefficients of `Π (1 - z/θ_i)`.
pub fn poly_from_roots(roots: &[c64]) -> Vec<c64> {
    let mut c = vec![one()];
    for &r in roots {
        let inv = -one() / r;
        let mut next = vec![zero(); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] += ci * inv;
        }
        c = next;
    }
    c
}

/// Upper-triangular product `Π (I - T/θ_i)` for triangular `t`.
pub fn triangular_product(t: &ComplexMatrix, roots: &[c64]) -> ComplexMatrix {
    let n = t.rows();
    let mut acc = ComplexMatrix::identity(n);
    for &theta in roots {
        let inv = one() / theta;
        // acc <- acc (I - T/θ), exploiting triangularity of both factors
        let mut next = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = acc[(i, j)];
                for l in i..=j {
                    s -= acc[(i, l)] * t[(l, j)] * inv;
                }
                next[(i, j)] = s;
            }
        }
        acc = next;
    }
    acc
}

/// `||Π (I - T/θ_i)||` for triangular `t` (the Schur factor of `A`).
pub fn product_form_norm(t: &ComplexMatrix, roots: &[c64]) -> f64 {
    if roots
        .iter()
        .any(|r| r.norm() == 0.0 || !r.re.is_finite() || !r.im.is_finite())
    {
        return f64::INFINITY;
    }
    two_norm(&triangular_product(t, roots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_minus_z_on_identity_vanishes() {
        let i = ComplexMatrix::identity(3);
        let p = apply_matrix_polynomial(&[one(), -one()], &i).unwrap();
        assert_eq!(p.max_abs(), 0.0);
    }

    #[test]
    fn roots_expand_correctly() {
        let roots = [c64::new(2.0, 0.0), c64::new(0.0, 1.0)];
        let c = poly_from_roots(&roots);
        for &r in &roots {
            assert!(eval_polynomial(&c, r).norm() < 1e-15);
        }
        assert_eq!(c[0], one());
    }

    #[test]
    fn triangular_product_matches_dense() {
        let t = ComplexMatrix::from_real_rows(&[
            &[1.0, 2.0, 0.5],
            &[0.0, 3.0, -1.0],
            &[0.0, 0.0, -2.0],
        ]);
        let roots = [c64::new(1.5, 0.5), c64::new(-0.7, 0.0)];
        let c = poly_from_roots(&roots);
        let dense = apply_matrix_polynomial(&c, &t).unwrap();
        let tri = triangular_product(&t, &roots);
        assert!(dense.sub(&tri).max_abs() < 1e-13);
    }
}
