//! Arnoldi, GMRES with residual history, Ritz and harmonic Ritz values, and
//! two-sided estimates of the worst-case (ideal) GMRES reduction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c64, cluster_eigenvalues, dot, givens, norm2, schur_decompose, singular_values, solve_upper,
    triangular_product, two_norm, ComplexMatrix, Givens, Schur, TOL_SING,
};
use crate::minimax::minimax_on_points;

/// Relative size of `h_{j+1,j}` at which Arnoldi declares a lucky breakdown.
pub const BREAKDOWN_TOL: f64 = 1e-14;

/// `A V_k = V_{k+1} H̃_k` with orthonormal `V`.
#[derive(Debug, Clone, Serialize)]
pub struct ArnoldiDecomposition {
    /// Orthonormal basis; `steps + 1` columns, or `steps` after a breakdown.
    pub v: ComplexMatrix,
    /// `(steps + 1) x steps` upper Hessenberg matrix.
    pub h_tilde: ComplexMatrix,
    /// `h_{j+1,j}` for `j = 1..=steps`, all nonnegative.
    pub subdiag: Vec<f64>,
    /// Step at which `h_{j+1,j}` vanished.
    pub breakdown_step: Option<usize>,
    /// `||r_0||`.
    pub beta: f64,
}

impl ArnoldiDecomposition {
    pub fn steps(&self) -> usize {
        self.h_tilde.cols()
    }

    fn check_step(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.steps() {
            return Err(Error::StepOutOfRange {
                requested: k,
                available: self.steps(),
            });
        }
        Ok(())
    }

    /// Square `H_k`.
    pub fn h_square(&self, k: usize) -> Result<ComplexMatrix> {
        self.check_step(k)?;
        Ok(self.h_tilde.submatrix(0, k, 0, k))
    }

    /// Rectangular `H̃_k`.
    pub fn h_rect(&self, k: usize) -> Result<ComplexMatrix> {
        self.check_step(k)?;
        Ok(self.h_tilde.submatrix(0, k + 1, 0, k))
    }

    /// `h_{k+1,k}`.
    pub fn h_next(&self, k: usize) -> Result<f64> {
        self.check_step(k)?;
        Ok(self.subdiag[k - 1])
    }

    /// `||A V_k - V_{k+1} H̃_k||`, using `V_k H_k` after a breakdown.
    pub fn relation_residual(&self, a: &ComplexMatrix) -> f64 {
        let k = self.steps();
        let vk = self.v.leading_columns(k);
        let lhs = a.matmul(&vk);
        let rhs = if self.v.cols() > k {
            self.v.matmul(&self.h_tilde)
        } else {
            vk.matmul(&self.h_tilde.submatrix(0, k, 0, k))
        };
        two_norm(&lhs.sub(&rhs))
    }
}

fn checked_start(a: &ComplexMatrix, r0: &[c64]) -> Result<(usize, f64)> {
    let n = a.require_square()?;
    if r0.len() != n {
        return Err(Error::Dimension(format!(
            "starting vector has length {}, matrix is {n}x{n}",
            r0.len()
        )));
    }
    let beta = norm2(r0);
    if beta == 0.0 {
        return Err(Error::ZeroInitialVector);
    }
    Ok((n, beta))
}

/// Incremental Arnoldi state shared by `arnoldi` and `gmres`.
struct ArnoldiState<'a> {
    a: &'a ComplexMatrix,
    tol: f64,
    basis: Vec<Vec<c64>>,
    /// Column `j` of `H̃`, length `j + 2`.
    hcols: Vec<Vec<c64>>,
    subdiag: Vec<f64>,
    breakdown: Option<usize>,
}

impl<'a> ArnoldiState<'a> {
    fn new(a: &'a ComplexMatrix, r0: &[c64], beta: f64) -> Self {
        Self {
            a,
            tol: BREAKDOWN_TOL * a.frobenius_norm(),
            basis: vec![r0.iter().map(|x| x / beta).collect()],
            hcols: Vec::new(),
            subdiag: Vec::new(),
            breakdown: None,
        }
    }

    /// Performs step `j + 1`; returns false once broken down.
    fn step(&mut self) -> bool {
        if self.breakdown.is_some() {
            return false;
        }
        let j = self.hcols.len();
        let mut w = self.a.mul_vec(&self.basis[j]);
        let mut h = vec![c64::new(0.0, 0.0); j + 2];
        for _ in 0..2 {
            for (i, v) in self.basis.iter().enumerate() {
                let c = dot(v, &w);
                h[i] += c;
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let hn = norm2(&w);
        if hn <= self.tol {
            self.breakdown = Some(j + 1);
            self.subdiag.push(0.0);
            self.hcols.push(h);
            return true;
        }
        h[j + 1] = c64::new(hn, 0.0);
        self.subdiag.push(hn);
        self.hcols.push(h);
        self.basis.push(w.iter().map(|x| x / hn).collect());
        true
    }

    fn finish(self, beta: f64) -> ArnoldiDecomposition {
        let k = self.hcols.len();
        let n = self.a.rows();
        let mut h_tilde = ComplexMatrix::zeros(k + 1, k);
        for (j, col) in self.hcols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                h_tilde[(i, j)] = *x;
            }
        }
        ArnoldiDecomposition {
            v: ComplexMatrix::from_columns(n, &self.basis),
            h_tilde,
            subdiag: self.subdiag,
            breakdown_step: self.breakdown,
            beta,
        }
    }
}

/// `k` steps of Arnoldi with modified Gram–Schmidt and one full
/// reorthogonalization pass. Stops early on breakdown.
pub fn arnoldi(a: &ComplexMatrix, r0: &[c64], k: usize) -> Result<ArnoldiDecomposition> {
    let (n, beta) = checked_start(a, r0)?;
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds dimension {n}"
        )));
    }
    let mut st = ArnoldiState::new(a, r0, beta);
    for _ in 0..k {
        if !st.step() {
            break;
        }
    }
    Ok(st.finish(beta))
}

/// Eigenvalues of `H_k`.
pub fn ritz_values(dec: &ArnoldiDecomposition, k: usize) -> Result<Vec<c64>> {
    let h = dec.h_square(k)?;
    Ok(schur_decompose(&h)?.eigenvalues())
}

fn harmonic_from_parts(h: &ComplexMatrix, hnext: f64, step: usize) -> Result<Vec<c64>> {
    let k = h.rows();
    if hnext == 0.0 {
        return Ok(schur_decompose(h)?.eigenvalues());
    }
    let sv = singular_values(h);
    let (smax, smin) = (sv[0], sv[k - 1]);
    if smin <= TOL_SING * smax.max(hnext) || smax == 0.0 {
        return Err(Error::SingularHk { step });
    }
    // f = H_k^{-*} e_k
    let hadj = h.adjoint();
    let mut f = vec![c64::new(0.0, 0.0); k];
    // H^* is lower triangular up to a superdiagonal band; use a dense solve
    let mut e = vec![c64::new(0.0, 0.0); k];
    e[k - 1] = c64::new(1.0, 0.0);
    let sol = crate::linalg::solve_least_squares(&hadj, &e)?;
    f.copy_from_slice(&sol);
    let mut m = h.clone();
    for i in 0..k {
        m[(i, k - 1)] += f[i] * hnext * hnext;
    }
    Ok(schur_decompose(&m)?.eigenvalues())
}

/// Eigenvalues of `H_k + h_{k+1,k}^2 f e_k^*` with `f = H_k^{-*} e_k`: the
/// roots of the GMRES residual polynomial at step `k`.
pub fn harmonic_ritz_values(dec: &ArnoldiDecomposition, k: usize) -> Result<Vec<c64>> {
    let h = dec.h_square(k)?;
    harmonic_from_parts(&h, dec.subdiag[k - 1], k)
}

/// GMRES residual history.
#[derive(Debug, Clone, Serialize)]
pub struct GmresHistory {
    /// `||r_k||` for `k = 0, 1, ...`.
    pub residual_norms: Vec<f64>,
    pub iterates_available: bool,
    /// Harmonic Ritz values per step (`[0]` is empty); empty when `H_k` is
    /// singular.
    pub residual_poly_roots: Vec<Vec<c64>>,
    pub converged_at: Option<usize>,
    /// Final iterate when requested.
    #[serde(skip)]
    pub solution: Option<Vec<c64>>,
}

impl GmresHistory {
    pub fn relative_residuals(&self) -> Vec<f64> {
        let r0 = self.residual_norms[0];
        self.residual_norms
            .iter()
            .map(|r| if r0 > 0.0 { r / r0 } else { 0.0 })
            .collect()
    }

    /// Relative residual at step `k`, extended by the final value once the
    /// run has terminated.
    pub fn relative_at(&self, k: usize) -> f64 {
        let rel = self.relative_residuals();
        rel[k.min(rel.len() - 1)]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,residual_norm,relative_residual\n");
        for (k, (r, rel)) in self
            .residual_norms
            .iter()
            .zip(self.relative_residuals())
            .enumerate()
        {
            s.push_str(&format!("{k},{r:.17e},{rel:.17e}\n"));
        }
        s
    }
}

/// Options for `gmres_with`.
#[derive(Debug, Clone)]
pub struct GmresOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    pub maxit: usize,
    /// Form the final iterate.
    pub keep_solution: bool,
    /// Compute harmonic Ritz values at each step.
    pub harmonic: bool,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            maxit: 100,
            keep_solution: false,
            harmonic: true,
        }
    }
}

/// Runs GMRES without failing on the iteration cap.
pub fn gmres_run(
    a: &ComplexMatrix,
    b: &[c64],
    x0: &[c64],
    opts: &GmresOptions,
) -> Result<GmresHistory> {
    let n = a.require_square()?;
    if b.len() != n || x0.len() != n {
        return Err(Error::Dimension(
            "right-hand side or initial guess length".into(),
        ));
    }
    let ax0 = a.mul_vec(x0);
    let r0: Vec<c64> = b.iter().zip(&ax0).map(|(bi, ai)| bi - ai).collect();
    let beta = norm2(&r0);
    let mut hist = GmresHistory {
        residual_norms: vec![beta],
        iterates_available: opts.keep_solution,
        residual_poly_roots: vec![Vec::new()],
        converged_at: None,
        solution: None,
    };
    if beta == 0.0 {
        hist.converged_at = Some(0);
        if opts.keep_solution {
            hist.solution = Some(x0.to_vec());
        }
        return Ok(hist);
    }
    let mut st = ArnoldiState::new(a, &r0, beta);
    let mut rots: Vec<Givens> = Vec::new();
    let mut rcols: Vec<Vec<c64>> = Vec::new();
    let mut g = vec![c64::new(beta, 0.0)];
    let maxit = opts.maxit.min(n);
    for k in 1..=maxit {
        st.step();
        let mut col = st.hcols[k - 1].clone();
        for (i, rot) in rots.iter().enumerate() {
            let (mut x, mut y) = (col[i], col[i + 1]);
            rot.apply_left(&mut x, &mut y);
            col[i] = x;
            col[i + 1] = y;
        }
        let (rot, r) = givens(col[k - 1], col[k]);
        col[k - 1] = r;
        col[k] = c64::new(0.0, 0.0);
        g.push(c64::new(0.0, 0.0));
        let (mut x, mut y) = (g[k - 1], g[k]);
        rot.apply_left(&mut x, &mut y);
        g[k - 1] = x;
        g[k] = y;
        rots.push(rot);
        rcols.push(col);
        let res = g[k].norm();
        hist.residual_norms.push(res);
        if opts.harmonic {
            let roots = st_harmonic(&st, k).unwrap_or_default();
            hist.residual_poly_roots.push(roots);
        } else {
            hist.residual_poly_roots.push(Vec::new());
        }
        let done = res <= opts.tol * beta || st.breakdown.is_some();
        if res <= opts.tol * beta {
            hist.converged_at = Some(k);
        }
        if done {
            break;
        }
    }
    if opts.keep_solution {
        let k = rcols.len();
        let mut r = ComplexMatrix::zeros(k, k);
        for (j, col) in rcols.iter().enumerate() {
            for i in 0..=j {
                r[(i, j)] = col[i];
            }
        }
        let y = solve_upper(&r, &g[..k]).unwrap_or_else(|_| vec![c64::new(0.0, 0.0); k]);
        let mut x = x0.to_vec();
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&st.basis[j]) {
                *xi += yj * vi;
            }
        }
        hist.solution = Some(x);
    }
    Ok(hist)
}

fn st_harmonic(st: &ArnoldiState<'_>, k: usize) -> Result<Vec<c64>> {
    let mut h = ComplexMatrix::zeros(k, k);
    for (j, col) in st.hcols.iter().take(k).enumerate() {
        for i in 0..=(j + 1).min(k - 1) {
            h[(i, j)] = col[i];
        }
    }
    harmonic_from_parts(&h, st.subdiag[k - 1], k)
}

/// GMRES to relative tolerance `tol`; the history is attached to the error
/// when `maxit` is reached first.
pub fn gmres(
    a: &ComplexMatrix,
    b: &[c64],
    x0: &[c64],
    tol: f64,
    maxit: usize,
) -> Result<GmresHistory> {
    let opts = GmresOptions {
        tol,
        maxit,
        keep_solution: true,
        harmonic: true,
    };
    let hist = gmres_run(a, b, x0, &opts)?;
    if hist.converged_at.is_none() {
        // a breakdown below tolerance still counts as convergence above
        let iterations = hist.residual_norms.len() - 1;
        return Err(Error::MaxIterationsReached {
            iterations,
            history: Box::new(hist),
        });
    }
    Ok(hist)
}

/// Relative residuals of `k` GMRES steps from `x0 = 0`, `b = r0`.
pub fn gmres_residual_ratios(
    a: &ComplexMatrix,
    r0: &[c64],
    k: usize,
    harmonic: bool,
) -> Result<GmresHistory> {
    let zeros = vec![c64::new(0.0, 0.0); r0.len()];
    gmres_run(
        a,
        r0,
        &zeros,
        &GmresOptions {
            tol: 0.0,
            maxit: k,
            keep_solution: false,
            harmonic,
        },
    )
}

/// Unit vector with independent standard complex Gaussian entries.
pub fn random_unit_vector(n: usize, rng: &mut impl rand::Rng) -> Vec<c64> {
    loop {
        let v: Vec<c64> = (0..n)
            .map(|_| c64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let nv = norm2(&v);
        if nv > 0.0 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Deterministic RNG for trial `index` of a seeded ensemble.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index))
}

/// Per-degree bracket on `min_{p(0)=1} ||p(A)||`.
#[derive(Debug, Clone, Serialize)]
pub struct Sandwich {
    /// Largest observed `||r_k||/||r_0||` over the random trials.
    pub lower: Vec<f64>,
    /// Smallest `||p(A)||` over the candidate polynomials.
    pub upper: Vec<f64>,
}

/// `||q(T)||` for the candidate `q(z) = Π_c (1 - z/λ_c)^{m_c} · s(z)` where
/// clustered eigenvalues are annihilated to full multiplicity and `s` is the
/// discrete minimax polynomial on the remaining eigenvalues.
fn deflated_candidate_norm(schur: &Schur, k: usize) -> Option<f64> {
    let eigs = schur.eigenvalues();
    let norm = schur.t.frobenius_norm().max(f64::MIN_POSITIVE);
    let clusters = cluster_eigenvalues(&eigs, crate::linalg::CLUSTER_TOL * norm);
    let mut roots = Vec::new();
    let mut rest = Vec::new();
    for c in &clusters {
        let centre = c.iter().map(|&i| eigs[i]).sum::<c64>() / c.len() as f64;
        if c.len() > 1 {
            if centre.norm() == 0.0 {
                return None;
            }
            roots.extend(std::iter::repeat_n(centre, c.len()));
        } else {
            rest.push(eigs[c[0]]);
        }
    }
    if roots.len() > k {
        return None;
    }
    let factor = triangular_product(&schur.t, &roots);
    let m = k - roots.len();
    if rest.is_empty() || m == 0 {
        return Some(two_norm(&factor));
    }
    let s = minimax_on_points(&rest, m).ok()?;
    let sm = s.poly.eval_matrix(&schur.t);
    Some(two_norm(&factor.matmul(&sm)))
}

/// Lower and upper estimates of the ideal GMRES value for `k = 0..=kmax`.
/// Trials run in parallel; each uses its own seeded generator.
pub fn ideal_gmres_sandwich(
    a: &ComplexMatrix,
    kmax: usize,
    trials: usize,
    seed: u64,
) -> Result<Sandwich> {
    let n = a.require_square()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let kmax = kmax.min(n);
    let runs: Vec<GmresHistory> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let r0 = random_unit_vector(n, &mut rng);
            gmres_residual_ratios(a, &r0, kmax, true)
        })
        .collect::<Result<_>>()?;
    let schur = schur_decompose(a)?;
    let eigs = schur.eigenvalues();
    let centroid = eigs.iter().sum::<c64>() / n as f64;

    let bounds: Vec<(f64, f64)> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let lower = runs.iter().map(|h| h.relative_at(k)).fold(0.0, f64::max);
            if k == 0 {
                return (lower, 1.0);
            }
            let mut upper: f64 = 1.0;
            let mut seen: Vec<Vec<c64>> = Vec::new();
            for h in &runs {
                // last available polynomial of degree <= k
                let kk = k.min(h.residual_poly_roots.len() - 1);
                let roots = &h.residual_poly_roots[kk];
                if roots.is_empty() || seen.iter().any(|s| same_roots(s, roots)) {
                    continue;
                }
                seen.push(roots.clone());
                let v = crate::linalg::product_form_norm(&schur.t, roots);
                if v.is_finite() {
                    upper = upper.min(v);
                }
            }
            if centroid.norm() > 0.0 {
                let roots = vec![centroid; k];
                upper = upper.min(crate::linalg::product_form_norm(&schur.t, &roots));
            }
            if let Some(v) = deflated_candidate_norm(&schur, k) {
                upper = upper.min(v);
            }
            (lower, upper)
        })
        .collect();
    // a degree-(k-1) polynomial is also admissible at degree k
    let mut upper: Vec<f64> = bounds.iter().map(|b| b.1).collect();
    for k in 1..upper.len() {
        upper[k] = upper[k].min(upper[k - 1]);
    }
    Ok(Sandwich {
        lower: bounds.iter().map(|b| b.0).collect(),
        upper,
    })
}

fn same_roots(a: &[c64], b: &[c64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).norm() <= 1e-12 * (1.0 + x.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diag(&d.iter().map(|x| c64::new(*x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn eigenvector_start_breaks_down() {
        let a = real_diag(&[1.0, 2.0, 3.0]);
        let e1 = vec![c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0)];
        let dec = arnoldi(&a, &e1, 3).unwrap();
        assert_eq!(dec.breakdown_step, Some(1));
        assert_eq!(dec.steps(), 1);
        assert!((dec.h_tilde[(0, 0)] - c64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(dec.h_tilde[(1, 0)], c64::new(0.0, 0.0));
    }

    #[test]
    fn two_by_two_stagnates_then_converges() {
        let a = real_diag(&[1.0, -1.0]);
        let s = 1.0 / 2f64.sqrt();
        let r0 = vec![c64::new(s, 0.0), c64::new(s, 0.0)];
        let h = gmres_residual_ratios(&a, &r0, 2, true).unwrap();
        let rel = h.relative_residuals();
        assert!((rel[1] - 1.0).abs() < 1e-14);
        assert!(rel[2] <= 1e-14);
        let dec = arnoldi(&a, &r0, 1).unwrap();
        assert!(matches!(
            harmonic_ritz_values(&dec, 1),
            Err(Error::SingularHk { step: 1 })
        ));
    }

    #[test]
    fn scalar_matrix_converges_at_once() {
        let a = ComplexMatrix::identity(4).scale(c64::new(3.0, 1.0));
        let b = vec![c64::new(1.0, -2.0); 4];
        let h = gmres(&a, &b, &vec![c64::new(0.0, 0.0); 4], 1e-12, 10).unwrap();
        assert_eq!(h.converged_at, Some(1));
        let x = h.solution.unwrap();
        let r = a.mul_vec(&x);
        assert!(r.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-13));
    }
}
