//! Constrained polynomial approximation: minimize `max |p(z)|` over finite
//! point sets subject to `p(0) = 1`, plus closed forms for intervals, disks
//! and convex sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{sample_loops, winding_number};
use crate::linalg::{c64, dot, norm2, solve_least_squares, ComplexMatrix};

/// Iteration cap for the reweighting loop.
pub const MAX_LAWSON_ITERATIONS: usize = 500;
/// Stop when consecutive maxima differ by less than this (relative).
pub const CHANGE_TOL: f64 = 1e-10;
/// Stop when the certified gap falls below this fraction of the value.
pub const GAP_TOL: f64 = 1e-3;
/// Stop when the best value improved by less than this over a window.
const STALL_TOL: f64 = 1e-5;
const STALL_WINDOW: usize = 40;

/// Polynomial `p(z) = 1 + (z/s) Σ a_j q_j(z)` where `q_j` is an orthonormal
/// basis on the fitting points built by Arnoldi in `u = (z - c)/r`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstrainedPoly {
    center: c64,
    radius: f64,
    zscale: f64,
    /// Arnoldi recurrence; column `j` holds the coefficients producing `q_{j+1}`.
    hess: Vec<Vec<c64>>,
    q0: c64,
    coef: Vec<c64>,
    /// Explicit roots form `Π (1 - z/θ_i)` used for interpolation.
    roots: Option<Vec<c64>>,
}

impl ConstrainedPoly {
    /// The constant polynomial `p ≡ 1`.
    pub fn one() -> Self {
        Self {
            center: c64::new(0.0, 0.0),
            radius: 1.0,
            zscale: 1.0,
            hess: Vec::new(),
            q0: c64::new(1.0, 0.0),
            coef: Vec::new(),
            roots: None,
        }
    }

    pub fn from_roots(roots: Vec<c64>) -> Self {
        Self {
            roots: Some(roots),
            ..Self::one()
        }
    }

    pub fn degree(&self) -> usize {
        match &self.roots {
            Some(r) => r.len(),
            None => self.coef.len(),
        }
    }

    pub fn eval(&self, z: c64) -> c64 {
        if let Some(roots) = &self.roots {
            return roots
                .iter()
                .fold(c64::new(1.0, 0.0), |acc, r| acc * (1.0 - z / r));
        }
        if self.coef.is_empty() {
            return c64::new(1.0, 0.0);
        }
        let u = (z - self.center) / self.radius;
        let mut qs = Vec::with_capacity(self.coef.len());
        qs.push(self.q0);
        let mut acc = self.coef[0] * self.q0;
        for j in 1..self.coef.len() {
            let h = &self.hess[j - 1];
            let mut v = u * qs[j - 1];
            for (i, hij) in h.iter().take(j).enumerate() {
                v -= hij * qs[i];
            }
            let q = v / h[j];
            acc += self.coef[j] * q;
            qs.push(q);
        }
        1.0 + z / self.zscale * acc
    }

    /// `p(M)` for a square matrix by the same recurrence.
    pub fn eval_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let id = ComplexMatrix::identity(n);
        if let Some(roots) = &self.roots {
            let mut acc = id.clone();
            for r in roots {
                acc = acc.matmul(&id.sub(&m.scale(1.0 / r)));
            }
            return acc;
        }
        if self.coef.is_empty() {
            return id;
        }
        let u = m.shift(self.center).scale(c64::new(1.0 / self.radius, 0.0));
        let mut qs: Vec<ComplexMatrix> = vec![id.scale(self.q0)];
        let mut acc = qs[0].scale(self.coef[0]);
        for j in 1..self.coef.len() {
            let h = &self.hess[j - 1];
            let mut v = u.matmul(&qs[j - 1]);
            for (i, hij) in h.iter().take(j).enumerate() {
                v = v.sub(&qs[i].scale(*hij));
            }
            let q = v.scale(1.0 / h[j]);
            acc = acc.add(&q.scale(self.coef[j]));
            qs.push(q);
        }
        id.add(&m.matmul(&acc).scale(c64::new(1.0 / self.zscale, 0.0)))
    }

    /// Monomial coefficients `c_0 = 1, c_1, ...` (conditioning degrades
    /// for high degree; evaluation should use `eval`).
    pub fn monomial_coeffs(&self) -> Vec<c64> {
        if let Some(roots) = &self.roots {
            return crate::linalg::poly_from_roots(roots);
        }
        let k = self.coef.len();
        if k == 0 {
            return vec![c64::new(1.0, 0.0)];
        }
        // q_j as monomial coefficient vectors in z
        let scale = 1.0 / self.radius;
        let u_times = |p: &[c64]| -> Vec<c64> {
            let mut out = vec![c64::new(0.0, 0.0); p.len() + 1];
            for (i, &c) in p.iter().enumerate() {
                out[i + 1] += c * scale;
                out[i] -= c * self.center * scale;
            }
            out
        };
        let mut qs: Vec<Vec<c64>> = vec![vec![self.q0]];
        for j in 1..k {
            let h = &self.hess[j - 1];
            let mut v = u_times(&qs[j - 1]);
            for (i, hij) in h.iter().take(j).enumerate() {
                for (t, c) in qs[i].iter().enumerate() {
                    v[t] -= hij * c;
                }
            }
            qs.push(v.iter().map(|c| c / h[j]).collect());
        }
        let mut out = vec![c64::new(0.0, 0.0); k + 1];
        out[0] = c64::new(1.0, 0.0);
        for (j, q) in qs.iter().enumerate() {
            for (t, c) in q.iter().enumerate() {
                out[t + 1] += self.coef[j] * c / self.zscale;
            }
        }
        out
    }
}

/// Outcome of one constrained minimax solve.
#[derive(Debug, Clone, Serialize)]
pub struct MinimaxResult {
    /// `max_i |p(z_i)|` for the returned polynomial.
    pub value: f64,
    /// Monomial coefficients with `coeffs[0] = 1`.
    pub coeffs: Vec<c64>,
    pub iterations: usize,
    /// `value` minus a certified lower bound on the optimum (`value` itself
    /// when no certificate is available).
    pub certificate_gap: f64,
    #[serde(skip)]
    pub poly: ConstrainedPoly,
}

/// Orthonormal constrained basis on a point set.
struct Basis {
    poly: ConstrainedPoly,
    /// `phi[i][j] = (z_i/s) q_j(z_i)`.
    phi: ComplexMatrix,
}

fn distinct(points: &[c64]) -> Vec<c64> {
    let scale = points
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut d: Vec<c64> = Vec::new();
    for &p in points {
        if !d.iter().any(|q| (p - q).norm() <= 1e-14 * scale) {
            d.push(p);
        }
    }
    d
}

fn build_basis(points: &[c64], k: usize) -> Basis {
    let n = points.len();
    let center = points.iter().sum::<c64>() / n as f64;
    let radius = points
        .iter()
        .map(|z| (z - center).norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let zscale = points
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let q0 = c64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut qcols: Vec<Vec<c64>> = vec![vec![q0; n]];
    let mut hess = Vec::new();
    let u: Vec<c64> = points.iter().map(|z| (z - center) / radius).collect();
    for j in 1..k {
        let mut v: Vec<c64> = u.iter().zip(&qcols[j - 1]).map(|(a, b)| a * b).collect();
        let mut h = vec![c64::new(0.0, 0.0); j + 1];
        for _ in 0..2 {
            for (i, q) in qcols.iter().enumerate() {
                let c = dot(q, &v);
                h[i] += c;
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
        }
        let nv = norm2(&v);
        if nv <= 1e-13 {
            break;
        }
        h[j] = c64::new(nv, 0.0);
        v.iter_mut().for_each(|x| *x /= nv);
        qcols.push(v);
        hess.push(h);
    }
    let kk = qcols.len().min(k);
    let phi = ComplexMatrix::from_fn(n, kk, |i, j| points[i] / zscale * qcols[j][i]);
    Basis {
        poly: ConstrainedPoly {
            center,
            radius,
            zscale,
            hess,
            q0,
            coef: vec![c64::new(0.0, 0.0); kk],
            roots: None,
        },
        phi,
    }
}

/// A group of sample points sharing one weight in a sum-of-maxima objective.
#[derive(Debug, Clone)]
pub struct PointGroup {
    pub weight: f64,
    pub points: Vec<c64>,
}

/// Result of the sum-of-maxima minimization.
#[derive(Debug, Clone)]
pub struct GroupMinimaxResult {
    /// `Σ_g weight_g max_{z ∈ g} |p(z)|`.
    pub value: f64,
    pub group_maxima: Vec<f64>,
    pub iterations: usize,
    pub certificate_gap: f64,
    pub poly: ConstrainedPoly,
}

fn group_objective(groups: &[PointGroup], offsets: &[usize], e: &[f64]) -> (f64, Vec<f64>) {
    let maxima: Vec<f64> = groups
        .iter()
        .enumerate()
        .map(|(g, _)| {
            e[offsets[g]..offsets[g + 1]]
                .iter()
                .copied()
                .fold(0.0, f64::max)
        })
        .collect();
    let v = groups.iter().zip(&maxima).map(|(g, m)| g.weight * m).sum();
    (v, maxima)
}

/// Minimizes `Σ_g weight_g max_{z ∈ g} |p(z)|` over degree-`k` polynomials
/// with `p(0) = 1` by a group-pooled Lawson reweighting. With one group this
/// is the classical Lawson iteration and carries a certified lower bound.
pub fn minimax_groups(groups: &[PointGroup], k: usize) -> Result<GroupMinimaxResult> {
    minimax_groups_warm(groups, k, None).map(|(r, _)| r)
}

fn minimax_groups_warm(
    groups: &[PointGroup],
    k: usize,
    warm: Option<&[f64]>,
) -> Result<(GroupMinimaxResult, Vec<f64>)> {
    if groups.is_empty() || groups.iter().any(|g| g.points.is_empty()) {
        return Err(Error::InvalidArgument(
            "minimax needs nonempty point groups".into(),
        ));
    }
    if groups
        .iter()
        .any(|g| !(g.weight.is_finite() && g.weight >= 0.0))
    {
        return Err(Error::InvalidArgument(
            "group weights must be finite and nonnegative".into(),
        ));
    }
    let mut offsets = vec![0];
    let mut points = Vec::new();
    for g in groups {
        points.extend_from_slice(&g.points);
        offsets.push(points.len());
    }
    if points
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::InvalidArgument("non-finite sample point".into()));
    }
    let n = points.len();
    let eval_all =
        |p: &ConstrainedPoly| -> Vec<f64> { points.iter().map(|z| p.eval(*z).norm()).collect() };

    let uniform = || vec![1.0; n];
    let one = ConstrainedPoly::one();
    let (v1, m1) = group_objective(groups, &offsets, &vec![1.0; n]);
    let trivial = |iters| GroupMinimaxResult {
        value: v1,
        group_maxima: m1.clone(),
        iterations: iters,
        certificate_gap: if groups.len() == 1 { 0.0 } else { v1 },
        poly: one.clone(),
    };
    if k == 0 {
        return Ok((trivial(0), uniform()));
    }

    let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let nonzero: Vec<c64> = distinct(&points)
        .into_iter()
        .filter(|z| z.norm() > 1e-14 * scale.max(1e-300))
        .collect();
    if nonzero.is_empty() {
        return Ok((trivial(0), uniform()));
    }
    if k >= nonzero.len() {
        let poly = ConstrainedPoly::from_roots(nonzero);
        let e = eval_all(&poly);
        let (value, maxima) = group_objective(groups, &offsets, &e);
        // interpolation of every nonzero point is optimal
        return Ok((
            GroupMinimaxResult {
                value,
                group_maxima: maxima,
                iterations: 0,
                certificate_gap: 0.0,
                poly,
            },
            uniform(),
        ));
    }

    let mut basis = build_basis(&points, k);
    // per-group Lawson distributions
    let mut mu: Vec<f64> = match warm {
        Some(w) if w.len() == n => w.iter().map(|x| 0.5 * x + 0.5).collect(),
        _ => uniform(),
    };
    let normalize = |mu: &mut [f64]| {
        for g in 0..groups.len() {
            let s: f64 = mu[offsets[g]..offsets[g + 1]].iter().sum();
            let len = (offsets[g + 1] - offsets[g]) as f64;
            for x in &mut mu[offsets[g]..offsets[g + 1]] {
                *x = if s > 0.0 { *x / s } else { 1.0 / len };
            }
        }
    };
    normalize(&mut mu);
    let mut group_max: Vec<f64> = m1.clone();

    let mut best = trivial(0);
    let mut best_mu = mu.clone();
    let mut lower: f64 = 0.0;
    let mut prev_value = f64::INFINITY;
    let mut history: Vec<f64> = Vec::new();
    let mut iters = 0;
    let single = groups.len() == 1;
    for it in 1..=MAX_LAWSON_ITERATIONS {
        iters = it;
        let w: Vec<f64> = (0..groups.len())
            .flat_map(|g| {
                let gm = group_max[g].max(1e-300);
                let wg = groups[g].weight;
                mu[offsets[g]..offsets[g + 1]]
                    .iter()
                    .map(move |m| wg * m / gm)
            })
            .collect();
        let wmax = w.iter().copied().fold(0.0, f64::max);
        if wmax == 0.0 {
            break;
        }
        let a = match weighted_fit(&basis.phi, &w, 1e-16 * wmax) {
            Some(a) => a,
            None => break,
        };
        let e: Vec<f64> = (0..n)
            .map(|i| {
                let row = basis.phi.row(i);
                (c64::new(1.0, 0.0) + row.iter().zip(&a).map(|(x, y)| x * y).sum::<c64>()).norm()
            })
            .collect();
        basis.poly.coef = a;
        let (value, maxima) = group_objective(groups, &offsets, &e);
        if single {
            // the fit minimizes Σ mu |p|^2, which is at most optimum^2
            let ls: f64 = mu.iter().zip(&e).map(|(m, x)| m * x * x).sum();
            lower = lower.max((groups[0].weight * ls.sqrt()).min(value));
        }
        if value < best.value {
            best = GroupMinimaxResult {
                value,
                group_maxima: maxima.clone(),
                iterations: it,
                certificate_gap: 0.0,
                poly: basis.poly.clone(),
            };
            best_mu = mu.clone();
        }
        history.push(best.value);
        if single && best.value - lower <= GAP_TOL * best.value {
            break;
        }
        if (value - prev_value).abs() <= CHANGE_TOL * value {
            break;
        }
        if history.len() > STALL_WINDOW {
            let old = history[history.len() - 1 - STALL_WINDOW];
            if old - best.value <= STALL_TOL * best.value {
                break;
            }
        }
        prev_value = value;
        for i in 0..n {
            mu[i] *= e[i];
        }
        normalize(&mut mu);
        group_max = maxima.iter().map(|m| m.max(1e-300)).collect();
        if best.value == 0.0 {
            break;
        }
    }
    best.iterations = iters;
    best.certificate_gap = if single {
        (best.value - lower).max(0.0)
    } else {
        best.value
    };
    Ok((best, best_mu))
}

/// `argmin_a Σ w_i |1 + φ_i a|^2` by the normal equations, falling back to
/// Householder least squares when the Gram matrix is not numerically
/// positive definite. Rows with `w_i <= floor` are dropped.
fn weighted_fit(phi: &ComplexMatrix, w: &[f64], floor: f64) -> Option<Vec<c64>> {
    let kk = phi.cols();
    let active: Vec<usize> = (0..w.len()).filter(|&i| w[i] > floor).collect();
    let mut g = vec![c64::new(0.0, 0.0); kk * kk];
    let mut b = vec![c64::new(0.0, 0.0); kk];
    for &i in &active {
        let row = phi.row(i);
        let wi = w[i];
        for j in 0..kk {
            let cj = row[j].conj() * wi;
            b[j] -= cj;
            for l in j..kk {
                g[j * kk + l] += cj * row[l];
            }
        }
    }
    if let Some(a) = cholesky_solve(&mut g, &mut b, kk) {
        return Some(a);
    }
    let m = ComplexMatrix::from_fn(active.len(), kk, |r, j| {
        phi[(active[r], j)] * w[active[r]].sqrt()
    });
    let rhs: Vec<c64> = active
        .iter()
        .map(|&i| c64::new(-w[i].sqrt(), 0.0))
        .collect();
    solve_least_squares(&m, &rhs).ok()
}

/// Solves `G x = b` for Hermitian `G` given by its upper triangle.
fn cholesky_solve(g: &mut [c64], b: &mut [c64], k: usize) -> Option<Vec<c64>> {
    let dmax = (0..k).map(|j| g[j * k + j].re).fold(0.0, f64::max);
    // upper factor R with G = R* R, stored in place
    for j in 0..k {
        let mut d = g[j * k + j].re;
        for i in 0..j {
            d -= g[i * k + j].norm_sqr();
        }
        if !(d > 1e-13 * dmax) {
            return None;
        }
        let r = d.sqrt();
        g[j * k + j] = c64::new(r, 0.0);
        for l in j + 1..k {
            let mut s = g[j * k + l];
            for i in 0..j {
                s -= g[i * k + j].conj() * g[i * k + l];
            }
            g[j * k + l] = s / r;
        }
    }
    for j in 0..k {
        let mut s = b[j];
        for i in 0..j {
            s -= g[i * k + j].conj() * b[i];
        }
        b[j] = s / g[j * k + j].re;
    }
    for j in (0..k).rev() {
        let mut s = b[j];
        for l in j + 1..k {
            s -= g[j * k + l] * b[l];
        }
        b[j] = s / g[j * k + j].re;
    }
    Some(b.to_vec())
}

/// Minimizes `max_i |p(z_i)|` over degree-`k` polynomials with `p(0) = 1`.
pub fn minimax_on_points(points: &[c64], k: usize) -> Result<MinimaxResult> {
    let r = minimax_groups(
        &[PointGroup {
            weight: 1.0,
            points: points.to_vec(),
        }],
        k,
    )?;
    Ok(to_result(r))
}

fn to_result(r: GroupMinimaxResult) -> MinimaxResult {
    MinimaxResult {
        value: r.value,
        coeffs: r.poly.monomial_coeffs(),
        iterations: r.iterations,
        certificate_gap: r.certificate_gap,
        poly: r.poly,
    }
}

/// Values for every degree `0..=kmax`, warm-starting each degree from the
/// previous weights and keeping the sequence nonincreasing.
pub fn minimax_curve(groups: &[PointGroup], kmax: usize) -> Result<Vec<GroupMinimaxResult>> {
    let mut out: Vec<GroupMinimaxResult> = Vec::with_capacity(kmax + 1);
    let mut warm: Option<Vec<f64>> = None;
    for k in 0..=kmax {
        let (r, mu) = minimax_groups_warm(groups, k, warm.as_deref())?;
        let r = match out.last() {
            Some(prev) if prev.value <= r.value => GroupMinimaxResult {
                iterations: r.iterations,
                ..prev.clone()
            },
            _ => r,
        };
        warm = Some(mu);
        let done = r.value == 0.0;
        out.push(r);
        if done {
            while out.len() <= kmax {
                out.push(out[out.len() - 1].clone());
            }
            break;
        }
    }
    Ok(out)
}

/// Sample count used for set boundaries at degree `k`.
pub fn boundary_sample_count(k: usize) -> usize {
    400.max(20 * k)
}

/// `1/|T_k((b+a)/(b-a))|`, the minimax value on `[a, b]`.
pub fn interval_minimax(a: f64, b: f64, k: usize) -> Result<f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    if lo <= 0.0 && hi >= 0.0 {
        return Err(Error::IntervalContainsOrigin { a, b });
    }
    let (lo, hi) = if hi < 0.0 { (-hi, -lo) } else { (lo, hi) };
    if k == 0 {
        return Ok(1.0);
    }
    if lo == hi {
        return Ok(0.0);
    }
    let rho = interval_rate(lo, hi);
    let rk = rho.powi(k as i32);
    Ok(2.0 * rk / (1.0 + rk * rk))
}

/// `(√(b/a) - 1)/(√(b/a) + 1)` for `0 < a < b`.
pub fn interval_rate(a: f64, b: f64) -> f64 {
    let s = (b / a).sqrt();
    (s - 1.0) / (s + 1.0)
}

/// `(r/|c|)^k`, or 1 when the disk contains the origin.
pub fn disk_minimax(center: c64, radius: f64, k: usize) -> f64 {
    if center.norm() <= radius {
        1.0
    } else {
        (radius / center.norm()).powi(k as i32)
    }
}

/// `2ρ^k/(1 - ρ^k)`.
pub fn convex_faber_bound(rho: f64, k: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "convex bound needs 0 < rho < 1 and k >= 1, got rho = {rho}, k = {k}"
        )));
    }
    let rk = rho.powi(k as i32);
    Ok(2.0 * rk / (1.0 - rk))
}

/// Rate estimate from the slope of `log m_k` between two degrees.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub origin_enclosed: bool,
    pub value_lo: f64,
    pub value_hi: f64,
}

/// `(m_hi/m_lo)^{1/(hi-lo)}` with `m_k` the minimax value on arclength-uniform
/// boundary samples of the closed `loops`. Reports rate 1 when some loop
/// winds around the origin.
pub fn asymptotic_rate_estimate(
    loops: &[Vec<c64>],
    k_lo: usize,
    k_hi: usize,
) -> Result<RateEstimate> {
    if k_hi <= k_lo {
        return Err(Error::InvalidArgument("k_hi must exceed k_lo".into()));
    }
    let zero = c64::new(0.0, 0.0);
    if loops.iter().any(|l| winding_number(l, zero) != 0) {
        return Ok(RateEstimate {
            rate: 1.0,
            origin_enclosed: true,
            value_lo: 1.0,
            value_hi: 1.0,
        });
    }
    let pts = sample_loops(loops, boundary_sample_count(k_hi));
    let lo = minimax_on_points(&pts, k_lo)?.value;
    let hi = minimax_on_points(&pts, k_hi)?.value;
    let rate = if lo > 0.0 && hi > 0.0 {
        (hi / lo).powf(1.0 / (k_hi - k_lo) as f64)
    } else {
        0.0
    };
    Ok(RateEstimate {
        rate,
        origin_enclosed: false,
        value_lo: lo,
        value_hi: hi,
    })
}

/// `min ||diag(c) p(Λ)||_2` over degree-`k` polynomials with `p(0) = 1`.
pub fn weighted_l2_min(eigs: &[c64], c: &[f64], k: usize) -> Result<f64> {
    if eigs.len() != c.len() {
        return Err(Error::Dimension(
            "eigenvalue and weight counts differ".into(),
        ));
    }
    let base = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if k == 0 || eigs.is_empty() {
        return Ok(base);
    }
    let scale = eigs
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let zero_weight: f64 = eigs
        .iter()
        .zip(c)
        .filter(|(z, _)| z.norm() <= 1e-14 * scale)
        .map(|(_, w)| w * w)
        .sum();
    let nonzero = distinct(eigs)
        .into_iter()
        .filter(|z| z.norm() > 1e-14 * scale)
        .count();
    if k >= nonzero {
        return Ok(zero_weight.sqrt());
    }
    let basis = build_basis(eigs, k);
    let kk = basis.phi.cols();
    let m = ComplexMatrix::from_fn(eigs.len(), kk, |i, j| basis.phi[(i, j)] * c[i]);
    let rhs: Vec<c64> = c.iter().map(|w| c64::new(-w, 0.0)).collect();
    let a = solve_least_squares(&m, &rhs)?;
    let resid: Vec<c64> = (0..eigs.len())
        .map(|i| {
            let fit: c64 = (0..kk).map(|j| m[(i, j)] * a[j]).sum();
            fit - rhs[i]
        })
        .collect();
    Ok(norm2(&resid))
}
