//! Reproduction and property suites behind `kscope verify`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::analysis::{compute_bounds, BoundsConfig};
use crate::bounds::{bound_cg, bound_ev, bound_fov, bound_psa_from_contour, BoundKind, C_FOV};
use crate::error::Result;
use crate::gallery::{self, Spacing, Upwind};
use crate::geometry::signed_distance_convex;
use crate::krylov::{
    arnoldi, gmres_residual_ratios, harmonic_ritz_values, ideal_gmres_sandwich, random_unit_vector,
    ritz_values, trial_rng,
};
use crate::linalg::{
    apply_matrix_polynomial, c64, eigen_full, rect_shifted_smin, two_norm, ComplexMatrix,
    ShiftedSmin,
};
use crate::minimax::{asymptotic_rate_estimate, minimax_on_points};
use crate::projectors::{build_projectors, ew_condition_sum, theorem_gensp_rhs, SpectralPartition};
use crate::sets::{
    cg_region, extract_contour, fov_boundary, pseudospectrum_grid, zoomed_contour, GridBox,
    CG_GRID_SIZE, FOV_ANGLES,
};

/// A curve whose geometric decay over `k = 10..30` is below this rate counts
/// as convergent.
pub const CONVERGENT_RATE: f64 = 0.98;

/// Slack of the property inequalities.
pub const PROPERTY_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Fixed-width pass/fail table.
pub fn render_table(checks: &[Check]) -> String {
    let w = checks.iter().map(|c| c.name.len()).max().unwrap_or(4);
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<w$}  {}  {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        ));
    }
    s
}

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

fn ipsen() -> Result<Check> {
    let (delta, n) = (0.5, 32);
    let a = gallery::example_d(delta, n)?.matrix;
    let mut r0 = vec![re(0.0); n];
    r0[n - 1] = re(1.0);
    let hist = gmres_residual_ratios(&a, &r0, 20, false)?;
    let err = (1..=20)
        .map(|k| (hist.relative_at(k) - gallery::ipsen_residual(delta, k)).abs())
        .fold(0.0, f64::max);
    Ok(Check::new(
        "ipsen-exact",
        err <= 1e-10,
        format!("max error {err:.3e}"),
    ))
}

fn jordan_disks() -> Result<Check> {
    let alpha = 10.0;
    let s = ShiftedSmin::new(&gallery::jordan2(alpha)?.matrix)?;
    let mut err: f64 = 0.0;
    for eps in [1e-2, 1e-4] {
        let r = (alpha * eps + eps * eps).sqrt();
        for j in 0..16 {
            let z = re(1.0) + c64::from_polar(r, 2.0 * PI * j as f64 / 16.0);
            err = err.max((s.eval(z) - eps).abs());
        }
    }
    Ok(Check::new(
        "jordan-psa-disks",
        err <= 1e-8,
        format!("max |s_min - eps| {err:.3e}"),
    ))
}

fn fov_radii() -> Result<Vec<Check>> {
    let (delta, n) = (0.5, 32);
    let a = gallery::example_d(delta, n)?.matrix.shift(re(1.0));
    let mu = fov_boundary(&a, FOV_ANGLES)?.numerical_radius;
    let want = delta * (PI / 33.0).cos();
    let f = fov_boundary(&gallery::jordan2(10.0)?.matrix, 512)?;
    let h = disk_hausdorff(&f.outer, re(1.0), 5.0);
    Ok(vec![
        Check::new(
            "fov-radius-example-d",
            (mu - want).abs() <= 1e-8,
            format!("mu = {mu:.15}, expected {want:.15}"),
        ),
        Check::new("fov-disk-jordan", h <= 1e-4, format!("Hausdorff {h:.3e}")),
    ])
}

/// Hausdorff distance between a convex polygon and a disk, as the largest
/// gap between their support functions.
pub fn disk_hausdorff(poly: &[c64], centre: c64, radius: f64) -> f64 {
    (0..8192)
        .map(|j| {
            let dir = c64::from_polar(1.0, -2.0 * PI * j as f64 / 8192.0);
            let h = poly
                .iter()
                .map(|v| ((v - centre) * dir).re)
                .fold(f64::NEG_INFINITY, f64::max);
            (h - radius).abs()
        })
        .fold(0.0, f64::max)
}

fn table_rows() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let kmax = 20;

    let a = gallery::scalar(2.0, 8)?.matrix;
    let rep = compute_bounds(
        &a,
        &BoundsConfig {
            kmax: 4,
            kinds: vec![
                BoundKind::EV,
                BoundKind::EVprime,
                BoundKind::FOV,
                BoundKind::FOVprime,
                BoundKind::CG,
            ],
            trials: 2,
            ..Default::default()
        },
    )?;
    let spec = eigen_full(&a)?;
    let psa = bound_psa_from_contour(
        &zoomed_contour(&a, &spec.eigenvalues[..1], 1e-8, 4e-8, 61)?,
        4,
    )?;
    let worst = rep
        .curves
        .iter()
        .chain(std::iter::once(&psa))
        .filter(|c| c.applicable)
        .map(|c| c.values[1])
        .fold(0.0, f64::max);
    out.push(Check::new(
        "table-scalar",
        worst <= 1e-12,
        format!(
            "max applicable value at k=1: {worst:.3e} (PSA at eps=1e-8: {:.3e})",
            psa.values[1]
        ),
    ));

    let a = gallery::example_e_diag().matrix;
    let spec = eigen_full(&a)?;
    let ev = bound_ev(&spec, 2)?;
    let fov = bound_fov(&fov_boundary(&a, FOV_ANGLES)?, 2, false)?;
    let eps = 1e-8;
    let contour = zoomed_contour(&a, &spec.eigenvalues, eps, 4.0 * eps, 61)?;
    let psa = bound_psa_from_contour(&contour, 2)?;
    out.push(Check::new(
        "table-diag-pm1",
        ev.applicable
            && ev.values[2] <= 1e-12
            && psa.applicable
            && psa.values[2] <= 1e-12
            && !fov.applicable,
        format!(
            "EV(2) = {:.3e}, PSA(eps=1e-8, k=2) = {:.3e}, FOV applicable = {}",
            ev.values[2], psa.values[2], fov.applicable
        ),
    ));

    let (delta, n) = (0.5, 32);
    let a = gallery::example_d(delta, n)?.matrix;
    let spec = eigen_full(&a)?;
    let ev = bound_ev(&spec, kmax)?;
    let fov = bound_fov(&fov_boundary(&a, 1024)?, kmax, false)?;
    let r = delta * (PI / (n as f64 + 1.0)).cos();
    let rel = (1..=kmax)
        .map(|k| (fov.values[k] / (C_FOV * r.powi(k as i32)) - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::new(
        "table-example-d",
        !ev.applicable && fov.applicable && rel <= 1e-3,
        format!(
            "EV applicable = {}, FOV max relative error {rel:.3e}",
            ev.applicable
        ),
    ));

    let a = gallery::integration_matrix(2.5, 64)?.matrix;
    let rep = compute_bounds(
        &a,
        &BoundsConfig {
            kmax: 30,
            kinds: vec![BoundKind::EV, BoundKind::FOV, BoundKind::PSA],
            bbox: Some(GridBox::new(-0.5, 2.5, -1.5, 1.5)?),
            trials: 2,
            ..Default::default()
        },
    )?;
    let ev = rep.curve(BoundKind::EV).map_or(true, |c| c.applicable);
    let fov = rep.curve(BoundKind::FOV).map_or(true, |c| c.applicable);
    let env = rep
        .envelope
        .as_ref()
        .map(|e| e.values[30])
        .unwrap_or(f64::INFINITY);
    out.push(Check::new(
        "table-integration",
        !ev && !fov && env < 1e-6,
        format!("EV applicable = {ev}, FOV applicable = {fov}, envelope(30) = {env:.3e}"),
    ));
    Ok(out)
}

fn example_b() -> Result<Vec<Check>> {
    let (alpha, b) = (10.0, 1.5);
    let e = gallery::example_b(alpha, b, 102, Spacing::Equispaced)?;
    let sw = ideal_gmres_sandwich(&e.matrix, 20, 4, 1)?;
    let excess = (2..=20)
        .map(|k| sw.upper[k] - gallery::example_b_cap(b, k))
        .fold(f64::NEG_INFINITY, f64::max);
    let spec = eigen_full(&e.matrix)?;
    let eps = 0.15;
    let grid = pseudospectrum_grid(
        &e.matrix,
        GridBox::auto(&spec.eigenvalues, spec.norm_a, eps)?,
        100,
        100,
    )?;
    let c = extract_contour(&grid, eps)?;
    Ok(vec![
        Check::new(
            "example-b-cap",
            excess <= 1e-12,
            format!("max upper - cap {excess:.3e}"),
        ),
        Check::new(
            "example-b-origin",
            c.encloses_origin,
            format!("0 in sigma_0.15: {}", c.encloses_origin),
        ),
    ])
}

fn cg_dichotomy() -> Result<Vec<Check>> {
    let region = |a: &ComplexMatrix| -> Result<_> {
        cg_region(a, &fov_boundary(a, FOV_ANGLES)?, CG_GRID_SIZE)
    };
    let a = gallery::cg_pair_matrix(64)?.matrix;
    let pair = region(&a)?;
    let curve = bound_cg(&pair, 30)?;
    let rate = (curve.values[30] / curve.values[10]).powf(0.05);
    let excludes = pair.contour.winding(re(0.0)) == 0;
    let b25 = region(&gallery::integration_matrix(2.5, 64)?.matrix)?;
    let c25 = bound_cg(&b25, 4)?;
    let b2 = region(&gallery::integration_matrix(2.0, 64)?.matrix)?;
    let c2 = bound_cg(&b2, 4)?;
    Ok(vec![
        Check::new(
            "cg-pair",
            excludes && !pair.surrounds_origin() && curve.applicable && rate < CONVERGENT_RATE,
            format!(
                "excludes 0: {excludes}, surrounds: {}, CG(30) = {:.3e}, rate over k = 10..30 {rate:.4}",
                pair.surrounds_origin(),
                curve.values[30]
            ),
        ),
        Check::new(
            "cg-integration",
            b25.surrounds_origin() && !c25.applicable && c2.applicable,
            format!(
                "beta 5/2 surrounds: {}, applicable: {}; beta 2 applicable: {}",
                b25.surrounds_origin(),
                c25.applicable,
                c2.applicable
            ),
        ),
    ])
}

fn supg() -> Result<Vec<Check>> {
    let a = gallery::supg_matrix(13, 0.01, Upwind::Auto)?.matrix;
    let fov = fov_boundary(&a, FOV_ANGLES)?;
    let spec = eigen_full(&a)?;
    let rate = asymptotic_rate_estimate(&[fov.outer.clone()], 10, 30)?.rate;
    Ok(vec![
        Check::new(
            "supg-coercive",
            fov.min_real_part > 0.0,
            format!("min Re W = {:.6e}", fov.min_real_part),
        ),
        Check::new(
            "supg-kappa",
            spec.kappa_v() > 1e15,
            format!(
                "kappa(V) = {:e} (raw {:.3e})",
                spec.kappa_v(),
                spec.kappa_v_raw
            ),
        ),
        Check::new(
            "supg-rate",
            (rate - 0.968).abs() <= 0.02,
            format!("rho = {rate:.5}"),
        ),
    ])
}

fn minimax_oracles() -> Result<Vec<Check>> {
    let circle = |c: c64, r: f64, m: usize| -> Vec<c64> {
        (0..m)
            .map(|j| c + c64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
            .collect()
    };
    let disk = circle(re(2.0), 1.0, 400);
    let mut disk_err: f64 = 0.0;
    let mut p0_err: f64 = 0.0;
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for k in 1..=10 {
        let r = minimax_on_points(&disk, k)?;
        disk_err = disk_err.max((r.value / 0.5f64.powi(k as i32) - 1.0).abs());
        p0_err = p0_err.max((r.poly.eval(re(0.0)) - 1.0).norm());
        monotone &= r.value <= prev * (1.0 + 1e-12);
        prev = r.value;
    }
    let interval: Vec<c64> = (0..400)
        .map(|j| re(1.0 + 3.0 * (PI * j as f64 / 399.0).cos().mul_add(-0.5, 0.5)))
        .collect();
    let mut int_err: f64 = 0.0;
    for k in 1..=10 {
        let v = minimax_on_points(&interval, k)?.value;
        let rho: f64 = 1.0 / 3.0;
        let cheb = 2.0 * rho.powi(k as i32) / (1.0 + rho.powi(2 * k as i32));
        int_err = int_err.max((v / cheb - 1.0).abs());
    }
    let sub: Vec<c64> = disk.iter().step_by(3).copied().collect();
    // the subset optimum is at least its certified lower bound
    let mut inclusion_excess = f64::NEG_INFINITY;
    for k in 1..=6 {
        let small = minimax_on_points(&sub, k)?;
        let big = minimax_on_points(&disk, k)?;
        inclusion_excess = inclusion_excess.max((small.value - small.certificate_gap) - big.value);
    }
    let inclusion = inclusion_excess <= 1e-12;
    let enclosing = (1..=6)
        .map(|k| minimax_on_points(&circle(re(0.3), 1.0, 400), k).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(vec![
        Check::new(
            "minimax-disk",
            disk_err <= 0.01,
            format!("max relative error {disk_err:.3e}"),
        ),
        Check::new(
            "minimax-interval",
            int_err <= 0.01,
            format!("max relative error {int_err:.3e}"),
        ),
        Check::new(
            "minimax-monotone",
            monotone && inclusion,
            format!("in k: {monotone}, in inclusion: {inclusion} (excess {inclusion_excess:.3e})"),
        ),
        Check::new(
            "minimax-normalized",
            p0_err <= 1e-12,
            format!("max |p(0) - 1| {p0_err:.3e}"),
        ),
        Check::new(
            "minimax-origin",
            enclosing >= 1.0 - 1e-8,
            format!("min value {enclosing:.12}"),
        ),
    ])
}

/// Closed-form and figure reproductions.
pub fn paper_suite() -> Result<Vec<Check>> {
    let mut out = vec![ipsen()?, jordan_disks()?];
    out.extend(fov_radii()?);
    out.extend(table_rows()?);
    out.extend(example_b()?);
    out.extend(cg_dichotomy()?);
    out.extend(supg()?);
    out.extend(minimax_oracles()?);
    Ok(out)
}

/// Random complex matrix of dimension 3..=8 with a random nonnormal part.
pub fn random_matrix(rng: &mut impl Rng) -> ComplexMatrix {
    let n = rng.random_range(3..=8);
    let skew: f64 = rng.random_range(0.0..3.0);
    ComplexMatrix::from_fn(n, n, |i, j| {
        let z = c64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        if j > i {
            z * skew
        } else {
            z
        }
    })
}

fn random_coeffs(rng: &mut impl Rng) -> Vec<c64> {
    let deg = rng.random_range(1..=4);
    let mut c = vec![re(1.0)];
    c.extend(
        (0..deg).map(|_| c64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)) * 0.5),
    );
    c
}

fn slack_le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + PROPERTY_SLACK * rhs.abs().max(1.0)
}

struct Tally {
    name: &'static str,
    failures: usize,
    skipped: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: 0,
            skipped: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    /// Records `lhs <= rhs` with slack; `worst` tracks the largest
    /// `lhs - rhs` relative to `max(1, |rhs|)`.
    fn record(&mut self, lhs: f64, rhs: f64) {
        self.worst = self.worst.max((lhs - rhs) / rhs.abs().max(1.0));
        if !slack_le(lhs, rhs) {
            self.failures += 1;
        }
    }

    fn check(self, trials: usize) -> Check {
        Check::new(
            self.name,
            self.failures == 0,
            format!(
                "{trials} trials, {} failures, {} skipped, worst excess {:.3e}",
                self.failures, self.skipped, self.worst
            ),
        )
    }
}

/// Seeded random trials of every inequality the bounds rest on.
pub fn properties_suite(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut ew = Tally::new("ew-sum-bound");
    let mut gensp = Tally::new("projector-sum-bound");
    let mut bf = Tally::new("bauer-fike");
    let mut wdelta = Tally::new("fov-plus-disk");
    let mut mu = Tally::new("numerical-radius");
    let mut nested = Tally::new("arnoldi-inclusions");
    let mut ritz = Tally::new("ritz-certificates");

    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let a = random_matrix(&mut rng);
        let n = a.rows();
        let spec = eigen_full(&a)?;
        let coeffs = random_coeffs(&mut rng);
        let lhs = two_norm(&apply_matrix_polynomial(&coeffs, &a)?);

        match ew_condition_sum(&spec, &coeffs) {
            Ok(rhs) => ew.record(lhs, rhs),
            Err(_) => ew.skipped += 1,
        }
        let median = {
            let mut r: Vec<f64> = spec.eigenvalues.iter().map(|z| z.re).collect();
            r.sort_by(f64::total_cmp);
            r[n / 2]
        };
        match SpectralPartition::split_by(&spec, |z| z.re < median)
            .and_then(|p| build_projectors(&a, &spec, &p))
            .and_then(|ps| theorem_gensp_rhs(&ps, &coeffs))
        {
            Ok(rhs) => gensp.record(lhs, rhs),
            Err(_) => gensp.skipped += 1,
        }

        let fov = fov_boundary(&a, 128)?;
        let eps = spec.norm_a * 10f64.powf(rng.random_range(-3.0..-1.0));
        let bbox = GridBox::auto(&spec.eigenvalues, spec.norm_a, eps)?;
        let grid = pseudospectrum_grid(&a, bbox, 24, 24)?;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                if grid.value(ix, iy) < eps {
                    let z = grid.node(ix, iy);
                    let d = spec
                        .eigenvalues
                        .iter()
                        .map(|l| (z - l).norm())
                        .fold(f64::INFINITY, f64::min);
                    if spec.kappa_v().is_finite() {
                        bf.record(d, eps * spec.kappa_v());
                    }
                    wdelta.record(signed_distance_convex(&fov.outer, z), eps);
                }
            }
        }
        if spec.kappa_v().is_finite() {
            mu.record(
                fov.numerical_radius,
                spec.kappa_v() * spec.spectral_radius(),
            );
        } else {
            mu.skipped += 1;
        }

        let r0 = random_unit_vector(n, &mut rng);
        let steps = rng.random_range(1..n);
        let dec = arnoldi(&a, &r0, steps)?;
        let full = ShiftedSmin::new(&a)?;
        let pts: Vec<c64> = (0..12)
            .map(|_| {
                let w = c64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
                spec.eigenvalues[rng.random_range(0..n)] + w * (0.5 * spec.norm_a)
            })
            .collect();
        let avail = dec.steps();
        for j in 1..=avail {
            let ht = dec.h_rect(j)?;
            let hk = ShiftedSmin::new(&dec.h_square(j)?)?;
            let h = dec.h_next(j)?;
            let next = if j < avail {
                Some(dec.h_rect(j + 1)?)
            } else {
                None
            };
            for &z in &pts {
                let s_rect = rect_shifted_smin(&ht, z);
                nested.record(full.eval(z), s_rect);
                nested.record(s_rect, hk.eval(z) + h);
                if let Some(hn) = &next {
                    nested.record(rect_shifted_smin(hn, z), s_rect);
                }
            }
            let h2 = h * h;
            for theta in ritz_values(&dec, j)? {
                ritz.record(full.eval(theta), h);
            }
            if let Ok(hr) = harmonic_ritz_values(&dec, j) {
                let s = hk.eval(re(0.0));
                for theta in hr {
                    ritz.record(full.eval(theta), h + h2 / s);
                }
            }
        }
    }
    Ok(vec![
        ew.check(trials),
        gensp.check(trials),
        bf.check(trials),
        wdelta.check(trials),
        mu.check(trials),
        nested.check(trials),
        ritz.check(trials),
    ])
}
