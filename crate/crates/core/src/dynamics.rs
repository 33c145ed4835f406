//! Time evolution from the same-site and split-site initial states.
//!
//! Times are in the units of the inverse of whatever energy unit the
//! couplings carry (1/J when the couplings are in units of J).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hubbard::{DerivedCouplings, Model};
use crate::qinfo::{self, Site};

pub const DEFAULT_T_MAX: f64 = 100.0;
pub const DEFAULT_STEP: f64 = 0.002;
/// Largest step, as a fraction of the fastest period, accepted by `time_average`.
pub const MAX_STEP_PER_PERIOD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialCondition {
    /// Both particles in the left well.
    SameSite,
    /// One particle per well; for fermions the symmetric (|↑,↓⟩+|↓,↑⟩)/√2.
    Split,
    /// (|↑,↓⟩−|↓,↑⟩)/√2, fermions only. Stationary.
    SplitAntisymmetric,
}

impl InitialCondition {
    pub fn state(self, model: Model) -> Result<Vec<Complex64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v: Vec<f64> = match (model, self) {
            (Model::Fermion, InitialCondition::SameSite) => vec![1.0, 0.0, 0.0, 0.0],
            (Model::Fermion, InitialCondition::Split) => vec![0.0, s, s, 0.0],
            (Model::Fermion, InitialCondition::SplitAntisymmetric) => vec![0.0, s, -s, 0.0],
            (Model::Boson, InitialCondition::SameSite) => vec![1.0, 0.0, 0.0],
            (Model::Boson, InitialCondition::Split) => vec![0.0, 1.0, 0.0],
            (Model::Boson, InitialCondition::SplitAntisymmetric) => {
                return Err(Error::domain(
                    "init",
                    "the antisymmetric split state exists only for fermions",
                ))
            }
        };
        Ok(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSiteState {
    pub model: Model,
    /// c₀…c₃ (fermions) or C₀…C₂ (bosons) in basis order.
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl TwoSiteState {
    pub fn new(model: Model, amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if amplitudes.len() != model.dim() {
            return Err(Error::domain(
                "amplitudes",
                format!("expected {} amplitudes", model.dim()),
            ));
        }
        Ok(TwoSiteState {
            model,
            amplitudes,
            time,
        })
    }

    pub fn from_real(model: Model, amplitudes: &[f64]) -> Result<Self> {
        Self::new(model, amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect(), 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Closed-form amplitudes.
pub fn analytic_evolve(model: Model, init: InitialCondition, c: &DerivedCouplings, t: f64) -> Result<TwoSiteState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain("t", format!("need a finite t ≥ 0, got {t}")));
    }
    let i = Complex64::i();
    let half = 0.5 * c.omega * t;
    // sin(Ωt/2)/Ω, finite as Ω → 0
    let sin_over = if c.omega == 0.0 { 0.5 * t } else { half.sin() / c.omega };
    let bar = (-i * (0.5 * c.u_bar * t)).exp();
    let rot_minus = bar * (half.cos() - i * c.u_minus * sin_over);
    let rot_plus = bar * (half.cos() + i * c.u_minus * sin_over);
    let hop = bar * i * c.j_minus * sin_over;
    let w = (-i * (c.w * t)).exp();
    let r2 = 2f64.sqrt();
    let amplitudes = match (model, init) {
        (Model::Fermion, InitialCondition::SameSite) => {
            vec![
                0.5 * w + 0.5 * rot_minus,
                2.0 * hop,
                2.0 * hop,
                -0.5 * w + 0.5 * rot_minus,
            ]
        }
        (Model::Fermion, InitialCondition::Split) => {
            vec![2.0 * r2 * hop, rot_plus / r2, rot_plus / r2, 2.0 * r2 * hop]
        }
        (Model::Fermion, InitialCondition::SplitAntisymmetric) => {
            // E_d = U_i − K
            let e_d = 0.5 * (c.u_plus - c.u_minus) - c.k;
            let phase = (-i * (e_d * t)).exp() / r2;
            vec![Complex64::new(0.0, 0.0), phase, -phase, Complex64::new(0.0, 0.0)]
        }
        (Model::Boson, InitialCondition::SameSite) => {
            vec![0.5 * w + 0.5 * rot_minus, 2.0 * r2 * hop, -0.5 * w + 0.5 * rot_minus]
        }
        (Model::Boson, InitialCondition::Split) => vec![2.0 * r2 * hop, rot_plus, 2.0 * r2 * hop],
        (Model::Boson, InitialCondition::SplitAntisymmetric) => {
            return Err(Error::domain(
                "init",
                "the antisymmetric split state exists only for fermions",
            ))
        }
    };
    TwoSiteState::new(model, amplitudes, t)
}

fn check_inputs(h: &DMatrix<f64>, psi0: &[Complex64], times: &[f64]) -> Result<()> {
    let n = h.nrows();
    if h.ncols() != n || psi0.len() != n || n == 0 {
        return Err(Error::domain("hamiltonian", "dimension mismatch"));
    }
    let scale = h.amax().max(1.0);
    if (h - h.transpose()).amax() > 1e-14 * scale || h.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("hamiltonian", "must be real symmetric and finite"));
    }
    let norm: f64 = psi0.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::domain("psi0", format!("not normalised: ⟨ψ|ψ⟩ = {norm}")));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("times", "non-finite time"));
    }
    Ok(())
}

/// ψ(t) = V e^{−iΛt} Vᵀ ψ₀ from the dense eigendecomposition.
pub fn numeric_evolve(h: &DMatrix<f64>, psi0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    check_inputs(h, psi0, times)?;
    let eig = SymmetricEigen::new(h.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let coeffs = v.adjoint() * DVector::from_column_slice(psi0);
    Ok(times
        .iter()
        .map(|&t| {
            let phased = DVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(c, &e)| c * Complex64::new(0.0, -e * t).exp()),
            );
            (&v * phased).iter().copied().collect()
        })
        .collect())
}

/// Step-by-step propagation with a truncated Taylor series of e^{−iHΔt}.
/// Independent of the eigendecomposition route; steps satisfy ‖H‖Δt ≤ 1/4.
pub fn taylor_evolve(h: &DMatrix<f64>, psi0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    check_inputs(h, psi0, times)?;
    let norm_h = h
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let hc = h.map(|x| Complex64::new(x, 0.0));
    let mut psi = DVector::from_column_slice(psi0);
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target < now {
            return Err(Error::domain("times", "must be non-decreasing and start at or after 0"));
        }
        let span = target - now;
        let steps = ((span * norm_h / 0.25).ceil() as usize).max(1);
        let dt = span / steps as f64;
        for _ in 0..steps {
            let mut term = psi.clone();
            let mut next = psi.clone();
            let mut converged = false;
            for order in 1..=40 {
                term = (&hc * &term) * Complex64::new(0.0, -dt / order as f64);
                next += &term;
                if term.norm() < 1e-18 * next.norm() {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::numeric(
                    "taylor propagator",
                    format!("series did not converge at Δt = {dt}"),
                ));
            }
            psi = next;
        }
        now = target;
        out.push(psi.iter().copied().collect());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupancy {
    pub rho_s: f64,
    pub rho_d: f64,
}

pub fn occupancy(state: &TwoSiteState) -> Occupancy {
    let p = state.probabilities();
    match state.model {
        Model::Fermion => Occupancy {
            rho_s: p[1] + p[2],
            rho_d: p[0] + p[3],
        },
        Model::Boson => Occupancy {
            rho_s: p[1],
            rho_d: p[0] + p[2],
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingProbabilities {
    pub p_pair: f64,
    pub p_single: f64,
    pub p_none: f64,
}

/// Pair, single and no tunneling after starting with both particles in one
/// well. P_pair carries the K shift of the two slow frequencies; at K = 0 it
/// is the three-frequency form (Ω∓U_−)/4π, Ω/2π.
pub fn tunneling_probabilities(c: &DerivedCouplings, t: f64) -> TunnelingProbabilities {
    let (u, u2) = if c.omega == 0.0 {
        (0.0, 0.0)
    } else {
        (c.u_minus / c.omega, (c.u_minus / c.omega).powi(2))
    };
    let slow = 0.5 * (c.omega - c.u_minus + 4.0 * c.k) * t;
    let fast = 0.5 * (c.omega + c.u_minus - 4.0 * c.k) * t;
    let p_pair = 0.25
        * ((1.5 + 0.5 * u2) - (1.0 + u) * slow.cos() - (1.0 - u) * fast.cos() + 0.5 * (1.0 - u2) * (c.omega * t).cos());
    let sin_over = if c.omega == 0.0 {
        0.5 * t
    } else {
        (0.5 * c.omega * t).sin() / c.omega
    };
    let p_single = 8.0 * c.j_minus * c.j_minus * sin_over * sin_over;
    TunnelingProbabilities {
        p_pair,
        p_single,
        p_none: 1.0 - p_pair - p_single,
    }
}

/// The same probabilities read off the amplitudes of a same-site run.
pub fn tunneling_from_state(state: &TwoSiteState) -> TunnelingProbabilities {
    let p = state.probabilities();
    let last = p.len() - 1;
    TunnelingProbabilities {
        p_pair: p[last],
        p_single: occupancy(state).rho_s,
        p_none: p[0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub rho_s: f64,
    pub rho_d: f64,
    /// Defined for the same-site start only.
    pub tunneling: Option<TunnelingProbabilities>,
    pub s_spatial: f64,
    pub e_rho1: f64,
    pub q_left: f64,
    pub q_right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub model: Model,
    pub init: InitialCondition,
    pub times: Vec<f64>,
    pub states: Vec<TwoSiteState>,
    pub records: Vec<ObservableRecord>,
    /// max(Ω, |J_−|), the fastest angular frequency in the dynamics.
    pub fastest_rate: f64,
}

pub fn observe(state: &TwoSiteState, init: InitialCondition) -> ObservableRecord {
    let occ = occupancy(state);
    ObservableRecord {
        rho_s: occ.rho_s,
        rho_d: occ.rho_d,
        tunneling: (init == InitialCondition::SameSite).then(|| tunneling_from_state(state)),
        s_spatial: qinfo::spatial_entropy(state),
        e_rho1: qinfo::entanglement_measure(state),
        q_left: qinfo::q_parameter(state, Site::Left),
        q_right: qinfo::q_parameter(state, Site::Right),
    }
}

/// Uniform grid 0, dt, …, covering [0, t_max].
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::domain("t_max", format!("must be positive, got {t_max}")));
    }
    if !(dt > 0.0 && dt <= t_max) {
        return Err(Error::domain("dt", format!("must lie in (0, t_max], got {dt}")));
    }
    let n = (t_max / dt).round() as usize;
    if ((n as f64) * dt - t_max).abs() > 1e-9 * t_max {
        return Err(Error::domain(
            "dt",
            format!("t_max = {t_max} is not a multiple of dt = {dt}"),
        ));
    }
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}

/// Closed-form series over the given times.
pub fn evolve_series(
    model: Model,
    init: InitialCondition,
    c: &DerivedCouplings,
    times: &[f64],
) -> Result<ObservableSeries> {
    let states = times
        .iter()
        .map(|&t| analytic_evolve(model, init, c, t))
        .collect::<Result<Vec<_>>>()?;
    let records = states.iter().map(|s| observe(s, init)).collect();
    Ok(ObservableSeries {
        model,
        init,
        times: times.to_vec(),
        states,
        records,
        fastest_rate: c.omega.max(c.j_minus.abs()),
    })
}

fn trapezoid_mean(times: &[f64], values: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..times.len() - 1 {
        s += 0.5 * (values[k] + values[k + 1]) * (times[k + 1] - times[k]);
    }
    s / (times[times.len() - 1] - times[0])
}

/// Trapezoid average over [0, t_max].
pub fn time_average(series: &ObservableSeries, t_max: f64) -> Result<ObservableRecord> {
    let n = series.times.partition_point(|&t| t <= t_max * (1.0 + 1e-12));
    if series.times.first() != Some(&0.0) || n < 2 || (series.times[n - 1] - t_max).abs() > 1e-9 * t_max.max(1.0) {
        return Err(Error::domain(
            "series",
            format!("must start at 0 and reach T_max = {t_max}"),
        ));
    }
    let times = &series.times[..n];
    let max_step = times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if series.fastest_rate > 0.0 {
        let limit = MAX_STEP_PER_PERIOD * 2.0 * std::f64::consts::PI / series.fastest_rate;
        if max_step > limit {
            return Err(Error::numeric(
                "time average",
                format!("step {max_step} under-resolves the fastest period; need ≤ {limit}"),
            ));
        }
    }
    let recs = &series.records[..n];
    let mean = |f: &dyn Fn(&ObservableRecord) -> f64| trapezoid_mean(times, &recs.iter().map(f).collect::<Vec<_>>());
    let tunneling = if recs.iter().all(|r| r.tunneling.is_some()) {
        Some(TunnelingProbabilities {
            p_pair: mean(&|r| r.tunneling.unwrap().p_pair),
            p_single: mean(&|r| r.tunneling.unwrap().p_single),
            p_none: mean(&|r| r.tunneling.unwrap().p_none),
        })
    } else {
        None
    };
    Ok(ObservableRecord {
        rho_s: mean(&|r| r.rho_s),
        rho_d: mean(&|r| r.rho_d),
        tunneling,
        s_spatial: mean(&|r| r.s_spatial),
        e_rho1: mean(&|r| r.e_rho1),
        q_left: mean(&|r| r.q_left),
        q_right: mean(&|r| r.q_right),
    })
}
