//! One table builder per subcommand.

use rayon::prelude::*;
use serde_json::json;
use twosite::dvr::{solve_doublet, Grid1D, SingleParticleSolution};
use twosite::dynamics::{evolve_series, time_average, time_grid, InitialCondition, TwoSiteState};
use twosite::hubbard::{analytic_spectrum, DerivedCouplings, Model};
use twosite::integrals::hubbard_parameters;
use twosite::pairsolver::{onsite_U_from_pair, solve_relative_ground, RelativeMotionProblem, UDefinition};
use twosite::potentials::{ContactInteraction, InteractionPotential};
use twosite::qinfo::{ground_state_fluctuations, spatial_entropy};
use twosite::scattering::{default_k_grid, verify_scattering};
use twosite::units::{trap_from_barrier, DoubleWell, HBAR};

use crate::config::{
    check_unit, resolve_couplings, resolve_trap, time_in_j, Couplings, Dim, PotentialKind, PotentialSection, Quantity,
    ResolvedTrap, RunConfig,
};
use crate::output::Table;
use crate::{Command, Failure};

const DOUBLET_STATES: usize = 2;

pub fn sweep_variables(command: Command) -> &'static [&'static str] {
    match command {
        Command::Trap | Command::Pair => &["V0/hbar_omega_z"],
        Command::Params => &["a_s/a_z", "a_s/nm"],
        Command::Scatter => &[],
        _ => &["U/J"],
    }
}

/// Sweep points, or `None` without a sweep. Checks the variable fits the command.
pub fn sweep_points(command: Command, cfg: &RunConfig) -> Result<Option<Vec<f64>>, Failure> {
    let Some(s) = &cfg.sweep else { return Ok(None) };
    let points = s.points()?;
    let allowed = sweep_variables(command);
    if !allowed.contains(&s.variable.as_str()) {
        return Err(Failure::config(
            "sweep.variable",
            format!(
                "`{}` cannot be swept by `{}`; allowed: {allowed:?}",
                s.variable,
                command.name()
            ),
        ));
    }
    Ok(Some(points))
}

fn trap_of(cfg: &RunConfig) -> Result<Option<ResolvedTrap>, Failure> {
    cfg.trap.as_ref().map(resolve_trap).transpose()
}

fn need_trap(cfg: &RunConfig, command: Command) -> Result<ResolvedTrap, Failure> {
    trap_of(cfg)?.ok_or_else(|| Failure::config("trap", format!("`{}` needs a [trap] section", command.name())))
}

fn need_potential(cfg: &RunConfig, command: Command) -> Result<&PotentialSection, Failure> {
    cfg.potential
        .as_ref()
        .ok_or_else(|| Failure::config("potential", format!("`{}` needs a [potential] section", command.name())))
}

fn need_length<'a>(field: &str, q: &'a Option<Quantity>) -> Result<&'a Quantity, Failure> {
    let q = q.as_ref().ok_or_else(|| Failure::config(field, "missing"))?;
    check_unit(field, q, Dim::Length)?;
    Ok(q)
}

fn model_of(cfg: &RunConfig) -> Model {
    cfg.model.as_ref().and_then(|m| m.statistics).unwrap_or(Model::Fermion)
}

fn init_of(cfg: &RunConfig) -> InitialCondition {
    cfg.dynamics
        .as_ref()
        .and_then(|d| d.init)
        .unwrap_or(InitialCondition::SameSite)
}

fn couplings_of(cfg: &RunConfig) -> Result<Couplings, Failure> {
    let trap = trap_of(cfg)?;
    resolve_couplings(&cfg.model.clone().unwrap_or_default(), trap.as_ref())
}

fn times_of(cfg: &RunConfig) -> Result<(f64, Vec<f64>), Failure> {
    let d = cfg.dynamics.clone().unwrap_or_default();
    let t_max = time_in_j("dynamics.t_max", &d.t_max, twosite::dynamics::DEFAULT_T_MAX)?;
    let dt = time_in_j("dynamics.dt", &d.dt, twosite::dynamics::DEFAULT_STEP)?;
    Ok((t_max, time_grid(t_max, dt)?))
}

/// Validates everything a run needs without doing the expensive work.
pub fn validate(command: Command, cfg: &RunConfig) -> Result<(), Failure> {
    sweep_points(command, cfg)?;
    trap_of(cfg)?;
    match command {
        Command::Trap => {
            need_trap(cfg, command)?;
        }
        Command::Scatter => {
            scatter_lengths(cfg)?;
        }
        Command::Params => {
            need_trap(cfg, command)?;
            params_potential(cfg, &need_trap(cfg, command)?, None)?;
        }
        Command::Pair => {
            pair_potentials(cfg, &need_trap(cfg, command)?)?;
        }
        Command::Spectrum | Command::Fluct => {
            couplings_of(cfg)?;
        }
        Command::Dynamics | Command::Entropy => {
            couplings_of(cfg)?;
            times_of(cfg)?;
            let (model, init) = (model_of(cfg), init_of(cfg));
            init.state(model)?;
        }
    }
    Ok(())
}

pub fn compute(command: Command, cfg: &RunConfig, name: &str) -> Result<Table, Failure> {
    let mut table = match command {
        Command::Trap => trap(cfg),
        Command::Scatter => scatter(cfg),
        Command::Params => params(cfg),
        Command::Pair => pair(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Dynamics => dynamics(cfg),
        Command::Entropy => entropy(cfg),
        Command::Fluct => fluct(cfg),
    }?;
    table.name = name.to_string();
    Ok(table)
}

fn doublet(eta: f64) -> Result<SingleParticleSolution, Failure> {
    let well = DoubleWell::new(eta)?;
    Ok(solve_doublet(&Grid1D::default_for(&well), &well, DOUBLET_STATES)?)
}

fn trap(cfg: &RunConfig) -> Result<Table, Failure> {
    let base = need_trap(cfg, Command::Trap)?;
    let traps: Vec<ResolvedTrap> = match sweep_points(Command::Trap, cfg)? {
        None => vec![base],
        Some(v0s) => v0s
            .iter()
            .map(|&v0| {
                let c = trap_from_barrier(base.config.mass, base.derived.omega_z, v0)?
                    .with_omega_rho(base.config.omega_rho);
                let d = twosite::units::derive_trap(&c)?;
                Ok(ResolvedTrap {
                    config: c,
                    derived: d,
                    eta: c.eta / d.a_z,
                    a_rho: d.a_rho / d.a_z,
                })
            })
            .collect::<Result<_, Failure>>()?,
    };
    let mut t = Table::new(
        "trap",
        &[
            "omega_z_Hz",
            "omega_rho_Hz",
            "eta_over_a_z",
            "V0_over_hbar_omega_z",
            "a_z_nm",
            "a_rho_over_a_z",
            "J_over_hbar_omega_z",
            "J_Hz",
            "J_gap",
            "E_s",
            "E_a",
            "tight_binding",
        ],
    );
    let rows = traps
        .par_iter()
        .map(|tr| {
            let sol = doublet(tr.eta)?;
            let f_z = tr.f_z();
            let v0 = tr.eta * tr.eta / 8.0;
            Ok(vec![
                f_z,
                tr.config.omega_rho / (2.0 * std::f64::consts::PI),
                tr.eta,
                v0,
                tr.derived.a_z * 1e9,
                tr.a_rho,
                sol.j,
                sol.j * f_z,
                sol.j_from_gap(),
                sol.energies[0],
                sol.energies[1],
                if sol.tight_binding { 1.0 } else { 0.0 },
            ])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    if rows.len() == 1 {
        let r = &rows[0];
        t.summary = Some(json!(t
            .columns
            .iter()
            .zip(r)
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect::<serde_json::Map<_, _>>()));
    }
    t.notes.push((
        "energies".into(),
        "hbar_omega_z; tight_binding is 1 when V0 > hbar_omega_z".into(),
    ));
    t.rows = rows;
    Ok(t)
}

/// (a_s, r0, κ, unit label) in a_z when a trap is given, else in the shared input unit.
fn scatter_lengths(cfg: &RunConfig) -> Result<(f64, f64, Option<f64>, &'static str), Failure> {
    let p = need_potential(cfg, Command::Scatter)?;
    if p.kind != PotentialKind::JostKohn {
        return Err(Failure::config(
            "potential.kind",
            "`scatter` needs a jost-kohn potential",
        ));
    }
    let a = need_length("potential.a_s", &p.a_s)?;
    let r0 = need_length("potential.r0", &p.r0)?;
    if let Some(tr) = trap_of(cfg)? {
        let kappa = p.kappa_a_z;
        return Ok((
            tr.length("potential.a_s", a)?,
            tr.length("potential.r0", r0)?,
            kappa,
            "a_z",
        ));
    }
    if a.unit != r0.unit {
        return Err(Failure::config(
            "potential",
            "a_s and r0 use different units; add a [trap] to convert",
        ));
    }
    if a.unit == "nm" && p.kappa_a_z.is_some() && a.value > 0.0 {
        return Err(Failure::config(
            "potential.kappa_a_z",
            "needs a [trap] to convert to nm",
        ));
    }
    let unit = if a.unit == "nm" { "nm" } else { "a_z" };
    Ok((a.value, r0.value, p.kappa_a_z, unit))
}

fn scatter(cfg: &RunConfig) -> Result<Table, Failure> {
    let (a_s, r0, kappa, unit) = scatter_lengths(cfg)?;
    let pot = InteractionPotential::jost_kohn(a_s, r0, kappa)?;
    let fit = verify_scattering(&pot, &default_k_grid(r0, 8))?;
    let mut t = Table::new("scatter", &["k", "delta_k", "kcotdelta"]);
    t.rows = fit.points.iter().map(|p| vec![p.k, p.delta, p.kcot_delta]).collect();
    t.notes.push(("length unit".into(), unit.into()));
    t.notes.push(("a_s_fit".into(), format!("{:.16e}", fit.a_s_fit)));
    t.notes.push(("r0_fit".into(), format!("{:.16e}", fit.r0_fit)));
    t.summary = Some(json!({
        "a_s_fit": fit.a_s_fit,
        "r0_fit": fit.r0_fit,
        "shape": fit.shape,
        "step": fit.step,
        "length_unit": unit,
    }));
    Ok(t)
}

/// Potential for a scattering length `a_s` in a_z; `None` when it vanishes.
fn params_potential(
    cfg: &RunConfig,
    tr: &ResolvedTrap,
    a_s: Option<f64>,
) -> Result<Option<InteractionPotential>, Failure> {
    let p = need_potential(cfg, Command::Params)?;
    let a_s = match a_s {
        Some(a) => a,
        None => match &p.a_s {
            Some(q) => tr.length("potential.a_s", q)?,
            None if cfg.sweep.is_some() => 0.0,
            None => return Err(Failure::config("potential.a_s", "missing")),
        },
    };
    if p.kind == PotentialKind::None || a_s == 0.0 {
        return Ok(None);
    }
    Ok(Some(match p.kind {
        PotentialKind::Contact => InteractionPotential::Contact(ContactInteraction::new(a_s)?),
        _ => {
            let r0 = tr.length("potential.r0", need_length("potential.r0", &p.r0)?)?;
            let kappa = p.kappa_a_z;
            InteractionPotential::jost_kohn(a_s, r0, kappa)?
        }
    }))
}

fn params(cfg: &RunConfig) -> Result<Table, Failure> {
    let tr = need_trap(cfg, Command::Params)?;
    let points = sweep_points(Command::Params, cfg)?;
    let a_values: Vec<Option<f64>> = match (&points, &cfg.sweep) {
        (Some(v), Some(s)) if s.variable == "a_s/nm" => v.iter().map(|a| Some(a * 1e-9 / tr.derived.a_z)).collect(),
        (Some(v), _) => v.iter().map(|&a| Some(a)).collect(),
        (None, _) => vec![None],
    };
    let pots = a_values
        .iter()
        .map(|&a| params_potential(cfg, &tr, a))
        .collect::<Result<Vec<_>, _>>()?;
    let sol = doublet(tr.eta)?;
    let rows = pots
        .par_iter()
        .map(|pot| {
            let (a, p) = match pot {
                None => (
                    0.0,
                    twosite::integrals::HubbardParameters::new(sol.j, 0.0, 0.0, 0.0, 0.0),
                ),
                Some(pot) => (pot.a_s(), hubbard_parameters(&sol, pot, tr.a_rho)?),
            };
            Ok(vec![a, p.j, p.u, p.u_i, p.i, p.k])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut t = Table::new("params", &["a_s", "J", "U", "U_i", "I", "K"]);
    t.notes
        .push(("units".into(), "energies in hbar_omega_z, a_s in a_z".into()));
    if rows.len() == 1 {
        let r = &rows[0];
        t.summary = Some(json!({
            "J": r[1], "U": r[2], "U_i": r[3], "I": r[4], "K": r[5],
            "units": { "energy": "hbar_omega_z", "length": "a_z" },
            "trap": {
                "omega_z_Hz": tr.f_z(),
                "omega_rho_Hz": tr.config.omega_rho / (2.0 * std::f64::consts::PI),
                "eta_over_a_z": tr.eta,
                "a_z_nm": tr.derived.a_z * 1e9,
                "a_rho_over_a_z": tr.a_rho,
            },
            "potential": serde_json::to_value(pots[0]).expect("potential serialises"),
        }));
    }
    t.rows = rows;
    Ok(t)
}

/// Contact, finite range r0 and r0/100, all in SI lengths.
fn pair_potentials(cfg: &RunConfig, tr: &ResolvedTrap) -> Result<[InteractionPotential; 3], Failure> {
    let p = need_potential(cfg, Command::Pair)?;
    if p.kind != PotentialKind::JostKohn {
        return Err(Failure::config(
            "potential.kind",
            "`pair` compares contact with jost-kohn; use kind = \"jost-kohn\"",
        ));
    }
    let a_z = tr.derived.a_z;
    let a_s = tr.length("potential.a_s", need_length("potential.a_s", &p.a_s)?)? * a_z;
    let r0 = tr.length("potential.r0", need_length("potential.r0", &p.r0)?)? * a_z;
    let kappa = p.kappa_a_z.map(|k| k / a_z);
    Ok([
        InteractionPotential::Contact(ContactInteraction::new(a_s)?),
        InteractionPotential::jost_kohn(a_s, r0, kappa)?,
        InteractionPotential::jost_kohn(a_s, r0 / 100.0, kappa)?,
    ])
}

fn pair(cfg: &RunConfig) -> Result<Table, Failure> {
    let tr = need_trap(cfg, Command::Pair)?;
    let pots = pair_potentials(cfg, &tr)?;
    let v0s = sweep_points(Command::Pair, cfg)?.unwrap_or_else(|| vec![tr.eta * tr.eta / 8.0]);
    let (mass, eta) = (tr.config.mass, tr.config.eta);
    let jobs: Vec<(f64, InteractionPotential)> = v0s.iter().flat_map(|&v| pots.iter().map(move |&p| (v, p))).collect();
    let us = jobs
        .par_iter()
        .map(|&(v0, pot)| {
            // V0 = mω²η²/8 = v0·ħω at fixed η
            let omega = 8.0 * v0 * HBAR / (mass * eta * eta);
            let problem = RelativeMotionProblem::from_si(Some(pot), mass, omega)?;
            let sol = solve_relative_ground(&problem)?;
            Ok(onsite_U_from_pair(&sol, &problem, UDefinition::EnergyShift))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut t = Table::new(
        "pair",
        &["V0_over_hbar_omega_z", "U_contact", "U_jk_r0", "U_jk_r0_over_100"],
    );
    t.rows = v0s
        .iter()
        .zip(us.chunks(3))
        .map(|(&v, u)| vec![v, u[0], u[1], u[2]])
        .collect();
    t.notes.push((
        "units".into(),
        "U in hbar_omega_z at each V0, isotropic trap omega_rho = omega_z, eta fixed".into(),
    ));
    t.notes.push(("eta_nm".into(), format!("{:.16e}", eta * 1e9)));
    Ok(t)
}

fn u_points(cfg: &RunConfig, c: &Couplings) -> Result<Vec<f64>, Failure> {
    Ok(sweep_points(Command::Spectrum, cfg)?.unwrap_or_else(|| vec![c.u]))
}

fn spectrum(cfg: &RunConfig) -> Result<Table, Failure> {
    let model = model_of(cfg);
    let c = couplings_of(cfg)?;
    let labels: &[char] = match model {
        Model::Fermion => &['a', 'b', 'c', 'd'],
        Model::Boson => &['a', 'b', 'c'],
    };
    let mut cols = vec!["U_over_J".to_string()];
    cols.extend(labels.iter().map(|l| format!("E_{l}")));
    let rows = u_points(cfg, &c)?
        .par_iter()
        .map(|&u| {
            let s = analytic_spectrum(&c.parameters(u), model)?;
            let mut row = vec![u];
            row.extend(labels.iter().map(|&l| s.energy(l).unwrap_or(f64::NAN)));
            Ok(row)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut t = Table::new("spectrum", &[]);
    t.columns = cols;
    t.rows = rows;
    t.notes.push(("units".into(), "J".into()));
    Ok(t)
}

fn amplitude_columns(model: Model) -> Vec<String> {
    (0..model.dim())
        .flat_map(|k| [format!("re_c{k}"), format!("im_c{k}")])
        .collect()
}

fn dynamics(cfg: &RunConfig) -> Result<Table, Failure> {
    let (model, init) = (model_of(cfg), init_of(cfg));
    let c = couplings_of(cfg)?;
    let (t_max, times) = times_of(cfg)?;
    let mut t = Table::new("dynamics", &[]);
    t.notes.push(("time unit".into(), "1/J".into()));
    match sweep_points(Command::Dynamics, cfg)? {
        None => {
            let s = evolve_series(model, init, &DerivedCouplings::new(&c.parameters(c.u)), &times)?;
            t.columns = ["t_in_1_over_J", "rho_s", "rho_d", "P_pair", "P_single", "P_none"]
                .map(String::from)
                .to_vec();
            t.columns.extend(amplitude_columns(model));
            t.rows = s
                .times
                .iter()
                .zip(&s.records)
                .zip(&s.states)
                .map(|((&time, r), st)| {
                    let p = r
                        .tunneling
                        .map(|p| [p.p_pair, p.p_single, p.p_none])
                        .unwrap_or([f64::NAN; 3]);
                    let mut row = vec![time, r.rho_s, r.rho_d, p[0], p[1], p[2]];
                    row.extend(st.amplitudes.iter().flat_map(|a| [a.re, a.im]));
                    row
                })
                .collect();
        }
        Some(us) => {
            t.columns = ["U_over_J", "P_pair", "P_single", "P_none", "rho_s", "rho_d"]
                .map(String::from)
                .to_vec();
            t.notes.push(("average".into(), format!("trapezoid over [0, {t_max}]")));
            t.rows = us
                .par_iter()
                .map(|&u| {
                    let s = evolve_series(model, init, &DerivedCouplings::new(&c.parameters(u)), &times)?;
                    let a = time_average(&s, t_max)?;
                    let p = a
                        .tunneling
                        .map(|p| [p.p_pair, p.p_single, p.p_none])
                        .unwrap_or([f64::NAN; 3]);
                    Ok(vec![u, p[0], p[1], p[2], a.rho_s, a.rho_d])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
        }
    }
    Ok(t)
}

fn eigen_entropy(u: f64, c: &Couplings, model: Model, label: char) -> Result<f64, Failure> {
    let s = analytic_spectrum(&c.parameters(u), model)?;
    let v = s
        .vector(label)
        .ok_or_else(|| Failure::Numeric(format!("no eigenstate {label}")))?;
    Ok(spatial_entropy(&TwoSiteState::from_real(model, v)?))
}

fn entropy(cfg: &RunConfig) -> Result<Table, Failure> {
    let (model, init) = (model_of(cfg), init_of(cfg));
    let c = couplings_of(cfg)?;
    let mut t = Table::new("entropy", &[]);
    t.notes.push(("entropy unit".into(), "bits".into()));
    match sweep_points(Command::Entropy, cfg)? {
        None => {
            let (_, times) = times_of(cfg)?;
            let d = DerivedCouplings::new(&c.parameters(c.u));
            let main = evolve_series(model, init, &d, &times)?;
            let other_model = match model {
                Model::Fermion => Model::Boson,
                Model::Boson => Model::Fermion,
            };
            // the antisymmetric start has no boson counterpart
            let other = match init.state(other_model) {
                Ok(_) => Some(evolve_series(other_model, init, &d, &times)?),
                Err(_) => None,
            };
            let (fermion, boson) = match model {
                Model::Fermion => (Some(&main), other.as_ref()),
                Model::Boson => (other.as_ref(), Some(&main)),
            };
            let s_of = |s: Option<&twosite::dynamics::ObservableSeries>, k: usize| {
                s.map_or(f64::NAN, |s| s.records[k].s_spatial)
            };
            t.columns = ["t", "S_spatial_F", "S_spatial_B", "E_rho1", "Q_left", "Q_right"]
                .map(String::from)
                .to_vec();
            t.notes.push(("time unit".into(), "1/J".into()));
            t.notes.push(("E_rho1, Q".into(), format!("{model:?}").to_lowercase()));
            t.rows = (0..times.len())
                .map(|k| {
                    let r = &main.records[k];
                    vec![
                        times[k],
                        s_of(fermion, k),
                        s_of(boson, k),
                        r.e_rho1,
                        r.q_left,
                        r.q_right,
                    ]
                })
                .collect();
        }
        Some(us) => {
            t.columns = ["U_over_J", "S_a_F", "S_c_F", "S_a_B", "S_c_B"]
                .map(String::from)
                .to_vec();
            t.rows = us
                .par_iter()
                .map(|&u| {
                    Ok(vec![
                        u,
                        eigen_entropy(u, &c, Model::Fermion, 'a')?,
                        eigen_entropy(u, &c, Model::Fermion, 'c')?,
                        eigen_entropy(u, &c, Model::Boson, 'a')?,
                        eigen_entropy(u, &c, Model::Boson, 'c')?,
                    ])
                })
                .collect::<Result<Vec<_>, Failure>>()?;
        }
    }
    Ok(t)
}

fn fluct(cfg: &RunConfig) -> Result<Table, Failure> {
    let c = couplings_of(cfg)?;
    let mut t = Table::new(
        "fluct",
        &["U_over_J", "dE_phi_F", "dE_phi_B", "dN", "d_SQL_F", "d_SQL_B"],
    );
    t.rows = u_points(cfg, &c)?
        .par_iter()
        .map(|&u| {
            let f = ground_state_fluctuations(&DerivedCouplings::new(&c.parameters(u)), 1.0);
            vec![u, f.de_phi_f, f.de_phi_b, f.dn, f.d_sql_f, f.d_sql_b]
        })
        .collect();
    t.notes.push(("state".into(), "ground state a".into()));
    Ok(t)
}
