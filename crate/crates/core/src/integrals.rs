//! Hubbard interaction coefficients from localized axial modes.
//!
//! All four modes share the transverse ground state, so the six-dimensional
//! integral reduces to
//!
//!   (1/a_ρ²) ∫ρ e^{−ρ²/2a_ρ²} V(√(ρ²+s²)) A(z₁) B(z₂) dρ dz₁ dz₂,  s = z₁ − z₂,
//!
//! with A = f1·f3 and B = f2·f4. Substituting t = √(ρ²+s²) gives
//! U = ∫ds G(s) W(s), where G is the correlation of A and B and
//! W(s) = (1/a_ρ²) ∫_{|s|}^∞ t e^{−(t²−s²)/2a_ρ²} V(t) dt.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dvr::{sinc_interpolate, Grid1D, SingleParticleSolution};
use crate::error::{require_positive, Error, Result};
use crate::potentials::InteractionPotential;
use crate::quadrature::{pairwise_slice, GradedRule};

/// ħ²/μ in oscillator units for two equal-mass atoms.
pub const HBAR2_OVER_MU: f64 = 2.0;

/// Relative change accepted between a quadrature and its doubled version.
pub const CONVERGENCE_TOL: f64 = 1e-6;

const LAGRANGE_POINTS: usize = 8;
const POTENTIAL_FLOOR: f64 = 1e-18;
/// e^{−GAUSS_CUT} ends the transverse integral.
const GAUSS_CUT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Divides every panel width; 2 is the doubled check.
    pub refine: f64,
    /// Sub-grid factor for the axial correlation.
    pub oversample: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            order: 16,
            refine: 1.0,
            oversample: 4,
        }
    }
}

impl QuadratureSettings {
    fn doubled(self) -> Self {
        QuadratureSettings {
            refine: 2.0 * self.refine,
            oversample: 2 * self.oversample,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub grid: Grid1D,
    pub a_rho: f64,
    pub potential: InteractionPotential,
    pub settings: QuadratureSettings,
}

/// J in ω_z, the rest in ħω_z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubbardParameters {
    pub j: f64,
    pub u: f64,
    pub u_i: f64,
    pub i: f64,
    pub k: f64,
    /// On-site value from the right mode; equals `u` for a symmetric well.
    pub u_rr: f64,
    pub provenance: Option<Provenance>,
}

impl HubbardParameters {
    pub fn new(j: f64, u: f64, u_i: f64, i: f64, k: f64) -> Self {
        HubbardParameters {
            j,
            u,
            u_i,
            i,
            k,
            u_rr: u,
            provenance: None,
        }
    }

    /// All energies divided by J.
    pub fn in_units_of_j(&self) -> Self {
        let j = self.j;
        HubbardParameters {
            j: 1.0,
            u: self.u / j,
            u_i: self.u_i / j,
            i: self.i / j,
            k: self.k / j,
            u_rr: self.u_rr / j,
            provenance: self.provenance.clone(),
        }
    }
}

/// Axial products on a sub-grid and their correlation G(s).
struct Correlation {
    ds: f64,
    k0: i64,
    values: Vec<f64>,
}

impl Correlation {
    fn new(grid: &Grid1D, a: (&[f64], &[f64]), b: (&[f64], &[f64]), oversample: usize, reach: f64) -> Self {
        let n_fine = (grid.n_points - 1) * oversample + 1;
        let ds = grid.spacing() / oversample as f64;
        let fine: Vec<f64> = (0..n_fine).map(|i| grid.z_min + ds * i as f64).collect();
        let interp = |f: &[f64]| sinc_interpolate(grid, f, &fine);
        let prod = |x: Vec<f64>, y: Vec<f64>| x.iter().zip(&y).map(|(p, q)| p * q).collect::<Vec<f64>>();
        let av = prod(interp(a.0), interp(a.1));
        let bv = prod(interp(b.0), interp(b.1));
        let kmax = ((reach / ds).ceil() as i64 + LAGRANGE_POINTS as i64).min(n_fine as i64 - 1);
        let values = (-kmax..=kmax)
            .into_par_iter()
            .map(|k| {
                // G(k ds) = Σ_i A_i B_{i−k} ds
                let lo = k.max(0) as usize;
                let hi = (n_fine as i64 + k.min(0)) as usize;
                let terms: Vec<f64> = (lo..hi).map(|i| av[i] * bv[(i as i64 - k) as usize]).collect();
                pairwise_slice(&terms) * ds
            })
            .collect();
        Correlation { ds, k0: -kmax, values }
    }

    fn at(&self, s: f64) -> f64 {
        let u = s / self.ds - self.k0 as f64;
        let n = self.values.len() as i64;
        let half = LAGRANGE_POINTS as i64 / 2;
        let start = (u.floor() as i64 - half + 1).clamp(0, n - LAGRANGE_POINTS as i64);
        let mut sum = 0.0;
        for j in 0..LAGRANGE_POINTS as i64 {
            let mut w = 1.0;
            for m in 0..LAGRANGE_POINTS as i64 {
                if m != j {
                    w *= (u - (start + m) as f64) / ((j - m) as f64);
                }
            }
            sum += w * self.values[(start + j) as usize];
        }
        sum
    }
}

/// Transverse kernel W(s) for the reduced potential.
fn kernel(potential: &InteractionPotential, s: f64, a_rho: f64, r_cut: f64, inner: f64, q: QuadratureSettings) -> f64 {
    let s = s.abs();
    let t_max = (s * s + 2.0 * GAUSS_CUT * a_rho * a_rho).sqrt().min(r_cut);
    if t_max <= s {
        return 0.0;
    }
    let h0 = inner.min(a_rho) / 16.0 / q.refine;
    let rule = GradedRule::new(s, t_max, h0, 2.0, a_rho / q.refine, q.order);
    let two_a2 = 2.0 * a_rho * a_rho;
    rule.integrate(|t| t * (-(t - s) * (t + s) / two_a2).exp() * potential.evaluate(t).unwrap_or(0.0)) / (a_rho * a_rho)
}

struct Pieces {
    value: f64,
    magnitude: f64,
}

fn element_once(
    grid: &Grid1D,
    f: [&[f64]; 4],
    potential: &InteractionPotential,
    a_rho: f64,
    q: QuadratureSettings,
) -> Pieces {
    let r0 = potential.r0().expect("finite range");
    let inner = potential.inner_scale().expect("finite range");
    let extent = grid.z_max - grid.z_min;
    let r_cut = potential.cutoff_radius(POTENTIAL_FLOOR).unwrap_or(extent).min(extent);
    let corr = Correlation::new(grid, (f[0], f[2]), (f[1], f[3]), q.oversample, r_cut);

    let h0 = inner.min(a_rho).min(r0) / 16.0 / q.refine;
    let cap = 0.25 / q.refine;
    let right = GradedRule::new(0.0, r_cut, h0, 2.0, cap, q.order);
    let nodes: Vec<(f64, f64)> = right
        .nodes
        .iter()
        .zip(&right.weights)
        .flat_map(|(&s, &w)| [(-s, w), (s, w)])
        .collect();
    let terms: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(s, w)| {
            let g = corr.at(s);
            let k = kernel(potential, s, a_rho, r_cut, inner, q);
            (w * g * k, (w * g * k).abs())
        })
        .collect();
    let value: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let magnitude: Vec<f64> = terms.iter().map(|t| t.1).collect();
    Pieces {
        value: HBAR2_OVER_MU * pairwise_slice(&value),
        magnitude: HBAR2_OVER_MU * pairwise_slice(&magnitude),
    }
}

fn check_modes(grid: &Grid1D, f: [&[f64]; 4]) -> Result<()> {
    grid.validate()?;
    if f.iter().any(|m| m.len() != grid.n_points) {
        return Err(Error::domain("modes", "mode length does not match the grid"));
    }
    Ok(())
}

/// Interaction element in ħω_z for modes given on `grid` (oscillator units).
/// Repeats the quadrature with every resolution doubled and returns the
/// finer value once the two agree to `CONVERGENCE_TOL`.
pub fn interaction_element(
    grid: &Grid1D,
    f1: &[f64],
    f2: &[f64],
    f3: &[f64],
    f4: &[f64],
    potential: &InteractionPotential,
    a_rho: f64,
) -> Result<f64> {
    interaction_element_with(grid, [f1, f2, f3, f4], potential, a_rho, QuadratureSettings::default())
}

pub fn interaction_element_with(
    grid: &Grid1D,
    f: [&[f64]; 4],
    potential: &InteractionPotential,
    a_rho: f64,
    settings: QuadratureSettings,
) -> Result<f64> {
    check_modes(grid, f)?;
    require_positive("a_rho", a_rho)?;
    if let InteractionPotential::Contact(c) = potential {
        return Ok(contact_element(grid, f, c.a_s, a_rho));
    }
    let mut q = settings;
    let mut last = element_once(grid, f, potential, a_rho, q);
    let mut trace = Vec::new();
    for _ in 0..3 {
        q = q.doubled();
        let next = element_once(grid, f, potential, a_rho, q);
        let diff = (next.value - last.value).abs();
        trace.push(format!("refine {} → {:e} (Δ = {:e})", q.refine, next.value, diff));
        if diff <= CONVERGENCE_TOL * next.value.abs() || diff <= 1e-13 * next.magnitude {
            return Ok(next.value);
        }
        last = next;
    }
    Err(Error::numeric("interaction quadrature", trace.join("; ")))
}

/// Contact closed form (ħ²/μ)(a_s/a_ρ²) ∫ f1 f3 f2 f4 dz.
pub fn contact_element(grid: &Grid1D, f: [&[f64]; 4], a_s: f64, a_rho: f64) -> f64 {
    let corr = Correlation::new(
        grid,
        (f[0], f[2]),
        (f[1], f[3]),
        QuadratureSettings::default().oversample,
        0.0,
    );
    HBAR2_OVER_MU * a_s / (a_rho * a_rho) * corr.at(0.0)
}

/// On-site U for a contact interaction with scattering length `a_s` (in a_z).
#[allow(non_snake_case)]
pub fn contact_onsite_U(sol: &SingleParticleSolution, a_s: f64, a_rho: f64) -> f64 {
    let l = sol.psi_l.as_slice();
    contact_element(&sol.grid, [l, l, l, l], a_s, a_rho)
}

/// U, U_i, I and K for the localized modes of `sol`; a_rho in a_z.
pub fn hubbard_parameters(
    sol: &SingleParticleSolution,
    potential: &InteractionPotential,
    a_rho: f64,
) -> Result<HubbardParameters> {
    hubbard_parameters_with(sol, potential, a_rho, QuadratureSettings::default())
}

pub fn hubbard_parameters_with(
    sol: &SingleParticleSolution,
    potential: &InteractionPotential,
    a_rho: f64,
    settings: QuadratureSettings,
) -> Result<HubbardParameters> {
    let (l, r) = (sol.psi_l.as_slice(), sol.psi_r.as_slice());
    let el = |f: [&[f64]; 4]| interaction_element_with(&sol.grid, f, potential, a_rho, settings);
    Ok(HubbardParameters {
        j: sol.j,
        u: el([l, l, l, l])?,
        u_i: el([l, r, l, r])?,
        i: el([l, l, l, r])?,
        k: el([l, r, r, l])?,
        u_rr: el([r, r, r, r])?,
        provenance: Some(Provenance {
            grid: sol.grid,
            a_rho,
            potential: *potential,
            settings,
        }),
    })
}
