//! s-wave relative motion of two atoms in an isotropic harmonic trap.
//!
//! Lengths are in a_ho = √(ħ/mω) (m the atom mass) and energies in ħω, so
//! the reduced radial equation reads −u'' + (r²/4 + 2v − E)u = 0 with v the
//! reduced potential μV/ħ². The free ground state has E = 3/2.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::potentials::InteractionPotential;

pub const FREE_GROUND: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeMotionProblem {
    /// `None` means no interaction.
    pub potential: Option<InteractionPotential>,
    pub r_max: f64,
    /// Log-grid step for finite range, r-step for the contact case.
    pub step: f64,
    /// States below −threshold·ħ²/(2μr0²) count as deep molecular states.
    pub deep_threshold: f64,
}

impl RelativeMotionProblem {
    pub fn new(potential: Option<InteractionPotential>) -> Self {
        RelativeMotionProblem {
            potential,
            r_max: 16.0,
            step: 1e-3,
            deep_threshold: 1.0,
        }
    }

    /// Potential given in SI lengths, rescaled to a_ho = √(ħ/(mω)).
    pub fn from_si(potential: Option<InteractionPotential>, mass: f64, omega: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("omega", omega)?;
        let a_ho = (crate::units::HBAR / (mass * omega)).sqrt();
        let potential = potential.map(|p| p.rescaled(1.0 / a_ho)).transpose()?;
        Ok(RelativeMotionProblem::new(potential))
    }

    pub fn with_step(self, step: f64) -> Self {
        RelativeMotionProblem { step, ..self }
    }

    fn validate(&self) -> Result<()> {
        require_positive("step", self.step)?;
        require_positive("deep_threshold", self.deep_threshold)?;
        if !(self.r_max >= 10.0 * 2f64.sqrt()) {
            return Err(Error::domain(
                "r_max",
                format!("need r_max ≥ 10√(ħ/μω) = 14.14, got {}", self.r_max),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSolution {
    pub e_rel: f64,
    pub r: Vec<f64>,
    /// Normalised so that ∫u² dr = 1.
    pub u: Vec<f64>,
    /// Grid norm of the discrete residual relative to the norm of u.
    pub residual: f64,
    /// Number of molecular states skipped below the trap state.
    pub n_deep: usize,
    /// u'(0) for the contact case.
    pub slope_at_origin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UDefinition {
    EnergyShift,
    MatrixElement,
}

/// Radial grid plus the coefficient function of the Numerov recurrence.
enum Mesh {
    /// r = eˣ, w = u/√r; w'' = [r²(r²/4 + 2v − E) + ¼] w.
    Log { x0: f64, h: f64, r: Vec<f64>, v2: Vec<f64> },
    /// Uniform r from 0 with u(0) = −a u'(0).
    Uniform { h: f64, r: Vec<f64>, a_s: f64 },
}

impl Mesh {
    fn build(problem: &RelativeMotionProblem) -> Result<Mesh> {
        match problem.potential {
            Some(InteractionPotential::Contact(c)) => {
                let n = (problem.r_max / problem.step).ceil() as usize + 1;
                let h = problem.r_max / (n - 1) as f64;
                Ok(Mesh::Uniform {
                    h,
                    r: (0..n).map(|i| h * i as f64).collect(),
                    a_s: c.a_s,
                })
            }
            other => {
                let r0 = other.and_then(|p| p.inner_scale()).unwrap_or(1.0);
                let x0 = (1e-4 * r0.min(1.0)).ln();
                let x1 = problem.r_max.ln();
                let n = ((x1 - x0) / problem.step).ceil() as usize + 1;
                let h = (x1 - x0) / (n - 1) as f64;
                let r: Vec<f64> = (0..n).map(|i| (x0 + h * i as f64).exp()).collect();
                let v2 = match other {
                    Some(p) => r
                        .iter()
                        .map(|&r| p.evaluate(r).map(|v| 2.0 * v))
                        .collect::<Result<_>>()?,
                    None => vec![0.0; n],
                };
                Ok(Mesh::Log { x0, h, r, v2 })
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            Mesh::Log { r, .. } | Mesh::Uniform { r, .. } => r.len(),
        }
    }

    fn h(&self) -> f64 {
        match self {
            Mesh::Log { h, .. } | Mesh::Uniform { h, .. } => *h,
        }
    }

    fn f(&self, i: usize, e: f64) -> f64 {
        match self {
            Mesh::Log { r, v2, .. } => {
                let r = r[i];
                r * r * (0.25 * r * r + v2[i] - e) + 0.25
            }
            Mesh::Uniform { r, .. } => 0.25 * r[i] * r[i] - e,
        }
    }

    fn start(&self, e: f64) -> (f64, f64) {
        match self {
            Mesh::Log { x0, h, .. } => ((0.5 * x0).exp(), (0.5 * (x0 + h)).exp()),
            Mesh::Uniform { h, a_s, .. } => {
                // Taylor series of u'' = (r²/4 − E)u with u(0) = −a, u'(0) = 1
                let (u0, u1) = (-a_s, 1.0);
                let u2 = -e * u0;
                let u3 = -e * u1;
                let u4 = 0.5 * u0 - e * u2;
                (
                    u0,
                    u0 + h * u1 + h * h / 2.0 * u2 + h.powi(3) / 6.0 * u3 + h.powi(4) / 24.0 * u4,
                )
            }
        }
    }

    /// Outward Numerov solution in the mesh variable.
    fn outward(&self, e: f64) -> Vec<f64> {
        let n = self.len();
        let c = self.h() * self.h() / 12.0;
        let mut w = vec![0.0; n];
        (w[0], w[1]) = self.start(e);
        for i in 1..n - 1 {
            w[i + 1] = (2.0 * w[i] * (1.0 + 5.0 * c * self.f(i, e)) - w[i - 1] * (1.0 - c * self.f(i - 1, e)))
                / (1.0 - c * self.f(i + 1, e));
            if w[i + 1].abs() > 1e250 {
                for x in &mut w[..=i + 1] {
                    *x *= 1e-250;
                }
            }
        }
        w
    }

    fn inward(&self, e: f64, stop: usize) -> Vec<f64> {
        let n = self.len();
        let c = self.h() * self.h() / 12.0;
        let mut w = vec![0.0; n];
        w[n - 1] = 0.0;
        w[n - 2] = 1e-250;
        for i in (stop + 1..n - 1).rev() {
            w[i - 1] = (2.0 * w[i] * (1.0 + 5.0 * c * self.f(i, e)) - w[i + 1] * (1.0 - c * self.f(i + 1, e)))
                / (1.0 - c * self.f(i - 1, e));
            if w[i - 1].abs() > 1e250 {
                for x in &mut w[i - 1..] {
                    *x *= 1e-250;
                }
            }
        }
        w
    }

    /// Sign changes of the outward solution. Integration stops once the
    /// solution grows inside the outer forbidden region, where no further
    /// node can occur; far out at very negative E the recurrence is unstable.
    fn nodes(&self, e: f64) -> usize {
        let n = self.len();
        let f: Vec<f64> = (0..n).map(|i| self.f(i, e)).collect();
        let last_allowed = f.iter().rposition(|&x| x <= 0.0).unwrap_or(0);
        let c = self.h() * self.h() / 12.0;
        let (mut prev, mut cur) = self.start(e);
        let mut count = 0;
        let mut last = if prev != 0.0 { prev } else { cur };
        if cur != 0.0 && last != 0.0 && (cur > 0.0) != (last > 0.0) {
            count += 1;
        }
        if cur != 0.0 {
            last = cur;
        }
        for i in 1..n - 1 {
            let next = (2.0 * cur * (1.0 + 5.0 * c * f[i]) - prev * (1.0 - c * f[i - 1])) / (1.0 - c * f[i + 1]);
            if next != 0.0 {
                if last != 0.0 && (next > 0.0) != (last > 0.0) {
                    count += 1;
                }
                last = next;
            }
            if i > last_allowed && next * cur > 0.0 && next.abs() > cur.abs() {
                break;
            }
            (prev, cur) = (cur, next);
            if cur.abs() > 1e250 {
                prev *= 1e-250;
                cur *= 1e-250;
            }
        }
        count
    }

    /// u from the mesh variable.
    fn to_u(&self, w: &[f64]) -> Vec<f64> {
        match self {
            Mesh::Log { r, .. } => w.iter().zip(r).map(|(w, r)| w * r.sqrt()).collect(),
            Mesh::Uniform { .. } => w.to_vec(),
        }
    }

    /// ∫ f dr by the trapezoid rule in the mesh variable.
    fn integrate(&self, f: &[f64]) -> f64 {
        let h = self.h();
        let g: Vec<f64> = match self {
            Mesh::Log { r, .. } => f.iter().zip(r).map(|(f, r)| f * r).collect(),
            Mesh::Uniform { .. } => f.to_vec(),
        };
        let n = g.len();
        let inner: Vec<f64> = g[1..n - 1].to_vec();
        h * (0.5 * (g[0] + g[n - 1]) + crate::quadrature::pairwise_slice(&inner))
    }
}

/// Molecular states to skip and a lower bracket lying between them and the trap state.
fn deep_count(problem: &RelativeMotionProblem, mesh: &Mesh) -> (usize, f64) {
    match problem.potential {
        // the molecular branch lies below E = 1/2, the trap branch above it
        Some(InteractionPotential::Contact(c)) => (usize::from(c.a_s > 0.0), 0.5),
        Some(p) => {
            let r0 = p.r0().unwrap_or(1.0);
            let cut = -problem.deep_threshold / (r0 * r0);
            (mesh.nodes(cut), cut)
        }
        None => (0, 0.5),
    }
}

/// Lowest trap-like state above any deep molecular states.
pub fn solve_relative_ground(problem: &RelativeMotionProblem) -> Result<PairSolution> {
    problem.validate()?;
    let mesh = Mesh::build(problem)?;
    let (n_deep, e_lo) = deep_count(problem, &mesh);
    if mesh.nodes(e_lo) != n_deep {
        return Err(Error::numeric(
            "pair solver",
            format!(
                "node count {} at lower bracket E = {e_lo} differs from expected {n_deep}",
                mesh.nodes(e_lo)
            ),
        ));
    }
    let mut lo = e_lo;
    let mut hi = FREE_GROUND + 2.0;
    while mesh.nodes(hi) <= n_deep {
        hi += 2.0;
        if hi > 50.0 {
            return Err(Error::numeric(
                "pair solver",
                format!("no trap state in bracket [{e_lo}, {hi}]"),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if mesh.nodes(mid) > n_deep {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let e = 0.5 * (lo + hi);

    // stitch outward and inward solutions at the outer turning point
    let n = mesh.len();
    let r = match &mesh {
        Mesh::Log { r, .. } | Mesh::Uniform { r, .. } => r.clone(),
    };
    let turn = (2.0 * e.max(0.5).sqrt()).min(0.5 * problem.r_max);
    let m = r.partition_point(|&x| x < turn).clamp(2, n - 3);
    let out = mesh.outward(e);
    let inw = mesh.inward(e, m);
    let scale = out[m] / inw[m];
    let w: Vec<f64> = (0..n).map(|i| if i <= m { out[i] } else { inw[i] * scale }).collect();
    let mut u = mesh.to_u(&w);
    let norm = mesh.integrate(&u.iter().map(|x| x * x).collect::<Vec<_>>()).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::numeric("pair solver", "could not normalise the wavefunction"));
    }
    for x in &mut u {
        *x /= norm;
    }
    let w: Vec<f64> = w.iter().map(|x| x / norm).collect();

    // Numerov-form residual of the stitched solution
    let c = mesh.h() * mesh.h() / 12.0;
    let mut res = 0.0;
    let mut size = 0.0;
    for i in 1..n - 1 {
        let lhs = w[i + 1] * (1.0 - c * mesh.f(i + 1, e)) - 2.0 * w[i] * (1.0 + 5.0 * c * mesh.f(i, e))
            + w[i - 1] * (1.0 - c * mesh.f(i - 1, e));
        res += lhs * lhs;
        size += (w[i] * mesh.h() * mesh.h()).powi(2);
    }
    let residual = (res / size.max(f64::MIN_POSITIVE)).sqrt();

    let slope_at_origin = match (&mesh, problem.potential) {
        (Mesh::Uniform { .. }, Some(InteractionPotential::Contact(_))) => Some(1.0 / norm),
        _ => None,
    };
    Ok(PairSolution {
        e_rel: e,
        r,
        u,
        residual,
        n_deep,
        slope_at_origin,
    })
}

/// On-site U in ħω from a solved pair state.
#[allow(non_snake_case)]
pub fn onsite_U_from_pair(solution: &PairSolution, problem: &RelativeMotionProblem, definition: UDefinition) -> f64 {
    match definition {
        UDefinition::EnergyShift => solution.e_rel - FREE_GROUND,
        UDefinition::MatrixElement => match problem.potential {
            None => 0.0,
            // ħ²/2μ = 1: ⟨V⟩ = a u'(0)²
            Some(InteractionPotential::Contact(c)) => c.a_s * solution.slope_at_origin.unwrap_or(0.0).powi(2),
            Some(p) => {
                let n = solution.r.len();
                let f: Vec<f64> = (0..n)
                    .map(|i| 2.0 * p.evaluate(solution.r[i]).unwrap_or(0.0) * solution.u[i] * solution.u[i])
                    .collect();
                // trapezoid on the (log) mesh
                let mut s = Vec::with_capacity(n - 1);
                for i in 0..n - 1 {
                    s.push(0.5 * (f[i] + f[i + 1]) * (solution.r[i + 1] - solution.r[i]));
                }
                crate::quadrature::pairwise_slice(&s)
            }
        },
    }
}
