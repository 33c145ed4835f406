//! s-wave phase shifts by Numerov integration and an effective-range fit.
//!
//! With ħ = μ = 1 the reduced radial equation is u'' = (2v − k²)u. On the
//! logarithmic grid r = eˣ, u = √r·w it becomes w'' = [r²(2v − k²) + ¼]w.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::potentials::InteractionPotential;

/// Matching radius in units of max(r0, |a_s|).
pub const MATCH_FACTOR: f64 = 25.0;
/// Largest allowed k·r0.
pub const MAX_KR0: f64 = 0.1;
pub const MIN_MOMENTA: usize = 6;

const R_MIN_FACTOR: f64 = 1e-6;
const PHASE_STEP: f64 = 0.05;
const MAX_HALVINGS: usize = 5;
const TAN_TOL: f64 = 1e-9;
/// Accepted change once halving no longer reduces it.
const FLOOR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub k: f64,
    pub delta: f64,
    pub kcot_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringFit {
    pub a_s_fit: f64,
    pub r0_fit: f64,
    /// Coefficient of k⁴ in k·cot δ.
    pub shape: f64,
    pub points: Vec<PhaseShift>,
    /// Log-grid step that passed the halving check.
    pub step: f64,
}

/// Evenly spaced momenta with k·r0 up to `MAX_KR0`.
pub fn default_k_grid(r0: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|i| MAX_KR0 * r0.recip() * i as f64 / count as f64 * 0.999)
        .collect()
}

pub fn verify_scattering(potential: &InteractionPotential, k_grid: &[f64]) -> Result<ScatteringFit> {
    let r0 = potential
        .r0()
        .ok_or_else(|| Error::domain("potential", "contact interaction has no finite range to integrate"))?;
    let p = *potential;
    verify_scattering_fn(move |r| p.evaluate(r).unwrap_or(0.0), r0, potential.a_s(), k_grid)
}

/// Same fit for an arbitrary reduced potential `v` with range `r0`; `a_nominal`
/// only sets the matching radius.
pub fn verify_scattering_fn<F: Fn(f64) -> f64>(v: F, r0: f64, a_nominal: f64, k_grid: &[f64]) -> Result<ScatteringFit> {
    require_positive("r0", r0)?;
    if k_grid.len() < MIN_MOMENTA {
        return Err(Error::domain(
            "k_grid",
            format!("need at least {MIN_MOMENTA} momenta, got {}", k_grid.len()),
        ));
    }
    if let Some(k) = k_grid.iter().find(|&&k| !(k > 0.0 && k * r0 < MAX_KR0)) {
        return Err(Error::domain("k_grid", format!("k = {k} outside 0 < k·r0 < {MAX_KR0}")));
    }
    let r_max = MATCH_FACTOR * r0.max(a_nominal.abs());
    let x0 = (R_MIN_FACTOR * r0).ln();
    let x1 = r_max.ln();

    // step from the largest local phase rate
    let k_max = k_grid.iter().cloned().fold(0.0, f64::max);
    let probe = LogGrid::new(x0, x1, 1e-3, &v);
    let q_max = probe.max_rate(k_max);
    let mut h = (PHASE_STEP / q_max).min(2e-3);

    let mut coarse = LogGrid::new(x0, x1, h, &v).tangents(k_grid);
    let mut accepted = None;
    // (change, tangents, step) of the best halving so far
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for _ in 0..MAX_HALVINGS {
        let fine = LogGrid::new(x0, x1, h / 2.0, &v).tangents(k_grid);
        let worst = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        h /= 2.0;
        if worst < TAN_TOL {
            accepted = Some(fine);
            break;
        }
        match &best {
            // refinement stopped helping: round-off floor
            Some((b, _, _)) if worst > *b => break,
            _ => best = Some((worst, fine.clone(), h)),
        }
        coarse = fine;
    }
    let tans = match (accepted, best) {
        (Some(t), _) => t,
        (None, Some((worst, t, step))) if worst < FLOOR_TOL => {
            log::debug!("tan δ at round-off floor {worst:e}, log step {step:e}");
            h = step;
            t
        }
        _ => {
            return Err(Error::numeric(
                "phase shift",
                format!("tan δ not converged after {MAX_HALVINGS} halvings, final log step {h:e}"),
            ))
        }
    };

    let points: Vec<PhaseShift> = k_grid
        .iter()
        .zip(&tans)
        .map(|(&k, &t)| PhaseShift {
            k,
            delta: t.atan(),
            kcot_delta: k / t,
        })
        .collect();

    if tans.iter().any(|&t| t == 0.0) {
        return Ok(ScatteringFit {
            a_s_fit: 0.0,
            r0_fit: 0.0,
            shape: 0.0,
            points,
            step: h,
        });
    }

    // k cot δ · r0 = c0 + c1 t + c2 t², t = (k r0)²
    let n = points.len();
    let design = DMatrix::from_fn(n, 3, |i, j| (points[i].k * r0).powi(2 * j as i32));
    let rhs = DVector::from_fn(n, |i, _| points[i].kcot_delta * r0);
    let c = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::numeric("effective-range fit", e.to_string()))?;
    Ok(ScatteringFit {
        a_s_fit: -r0 / c[0],
        r0_fit: 2.0 * c[1] * r0,
        shape: c[2] * r0.powi(3),
        points,
        step: h,
    })
}

struct LogGrid {
    x0: f64,
    h: f64,
    r: Vec<f64>,
    v2: Vec<f64>,
}

impl LogGrid {
    fn new<F: Fn(f64) -> f64>(x0: f64, x1: f64, h: f64, v: &F) -> Self {
        let n = ((x1 - x0) / h).ceil() as usize + 1;
        let h = (x1 - x0) / (n - 1) as f64;
        let r: Vec<f64> = (0..n).map(|i| (x0 + h * i as f64).exp()).collect();
        let v2 = r.iter().map(|&r| 2.0 * v(r)).collect();
        LogGrid { x0, h, r, v2 }
    }

    fn max_rate(&self, k: f64) -> f64 {
        self.r
            .iter()
            .zip(&self.v2)
            .map(|(r, v2)| (r * r * (v2 - k * k) + 0.25).abs().sqrt())
            .fold(0.0, f64::max)
    }

    fn tangents(&self, ks: &[f64]) -> Vec<f64> {
        ks.iter().map(|&k| self.tan_delta(k)).collect()
    }

    fn tan_delta(&self, k: f64) -> f64 {
        let n = self.r.len();
        let c = self.h * self.h / 12.0;
        let f = |i: usize| self.r[i] * self.r[i] * (self.v2[i] - k * k) + 0.25;
        let mut w_prev = (0.5 * self.x0).exp();
        let mut w = (0.5 * (self.x0 + self.h)).exp();
        let mut f_prev = f(0);
        let mut f_cur = f(1);
        for i in 1..n - 1 {
            let f_next = f(i + 1);
            let w_next = (2.0 * w * (1.0 + 5.0 * c * f_cur) - w_prev * (1.0 - c * f_prev)) / (1.0 - c * f_next);
            w_prev = w;
            w = w_next;
            f_prev = f_cur;
            f_cur = f_next;
            if w.abs() > 1e200 {
                w *= 1e-200;
                w_prev *= 1e-200;
            }
        }
        let (r1, r2) = (self.r[n - 2], self.r[n - 1]);
        let (u1, u2) = (w_prev * r1.sqrt(), w * r2.sqrt());
        (u1 * (k * r2).sin() - u2 * (k * r1).sin()) / (u2 * (k * r1).cos() - u1 * (k * r2).cos())
    }
}
