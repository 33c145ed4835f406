//! Run configuration: TOML sections, unit whitelist, sweeps and merging.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use twosite::dynamics::{InitialCondition, DEFAULT_STEP, DEFAULT_T_MAX};
use twosite::hubbard::Model;
use twosite::units::{calibrate_trap, derive_trap, TrapConfig, TrapDerived, HBAR, LI6_MASS};

use crate::Failure;

/// Accepted unit keys. "J" means units of the tunneling amplitude J for
/// energies and 1/J for times.
pub const UNITS: [&str; 6] = ["Hz", "rad/s", "nm", "a_z", "hbar_omega_z", "J"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Quantity {
            value,
            unit: unit.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Frequency,
    Length,
    Energy,
    Time,
}

impl Dim {
    fn units(self) -> &'static [&'static str] {
        match self {
            Dim::Frequency => &["Hz", "rad/s"],
            Dim::Length => &["nm", "a_z"],
            Dim::Energy => &["hbar_omega_z", "Hz", "J"],
            Dim::Time => &["J"],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dim::Frequency => "frequency",
            Dim::Length => "length",
            Dim::Energy => "energy",
            Dim::Time => "time",
        }
    }
}

pub fn check_unit(field: &str, q: &Quantity, dim: Dim) -> Result<(), Failure> {
    if !UNITS.contains(&q.unit.as_str()) {
        return Err(Failure::config(
            field,
            format!("unit `{}` is not one of {UNITS:?}", q.unit),
        ));
    }
    if !dim.units().contains(&q.unit.as_str()) {
        return Err(Failure::config(
            field,
            format!(
                "`{}` is not a {} unit; use one of {:?}",
                q.unit,
                dim.name(),
                dim.units()
            ),
        ));
    }
    if !q.value.is_finite() {
        return Err(Failure::config(field, "value is not finite"));
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trap: Option<TrapSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    #[serde(default = "default_species")]
    pub species: String,
    pub omega_z: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_rho: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<Quantity>,
}

fn default_species() -> String {
    "Li6".to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    JostKohn,
    Contact,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub kind: PotentialKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_s: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<Quantity>,
    /// κ·a_z for V₊ (dimensionless).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_a_z: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistics: Option<Model>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Quantity>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<Quantity>,
    #[serde(rename = "U_i", skip_serializing_if = "Option::is_none")]
    pub u_i: Option<Quantity>,
    #[serde(rename = "I", skip_serializing_if = "Option::is_none")]
    pub i: Option<Quantity>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<Quantity>,
    /// U_i = u_i_per_u · U at every sweep point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_i_per_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_per_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_per_u: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<InitialCondition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

/// Sweep variables with their unit suffix.
pub const SWEEP_VARIABLES: [&str; 4] = ["U/J", "a_s/a_z", "a_s/nm", "V0/hbar_omega_z"];

impl SweepSection {
    /// Parses `VAR=start:stop:step`.
    pub fn parse(spec: &str) -> Result<Self, Failure> {
        let bad = || Failure::config("--sweep", format!("expected VAR=start:stop:step, got `{spec}`"));
        let (variable, range) = spec.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        Ok(SweepSection {
            variable: variable.trim().to_string(),
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        })
    }

    /// Points start + k·step up to stop, k = 0, 1, …
    pub fn points(&self) -> Result<Vec<f64>, Failure> {
        if !SWEEP_VARIABLES.contains(&self.variable.as_str()) {
            return Err(Failure::config(
                "sweep.variable",
                format!("`{}` is not one of {SWEEP_VARIABLES:?}", self.variable),
            ));
        }
        let (a, b, h) = (self.start, self.stop, self.step);
        if !(a.is_finite() && b.is_finite() && h.is_finite()) {
            return Err(Failure::config("sweep", "start, stop and step must be finite"));
        }
        if !(h > 0.0) || b < a {
            return Err(Failure::config("sweep", format!("empty sweep range {a}:{b}:{h}")));
        }
        let n = ((b - a) / h * (1.0 + 1e-12)).floor() as usize + 1;
        if n > 1_000_000 {
            return Err(Failure::config("sweep", format!("{n} points is too many")));
        }
        // decimal steps: (n₀ + k)/m is the correctly rounded value of a + k·h
        let m = (1.0 / h).round();
        let n0 = (a * m).round();
        if m >= 1.0 && (1.0 / h - m).abs() < 1e-9 * m && (a * m - n0).abs() < 1e-9 * n0.abs().max(1.0) {
            return Ok((0..n).map(|k| (n0 + k as f64) / m).collect());
        }
        Ok((0..n).map(|k| a + k as f64 * h).collect())
    }
}

/// Trap quantities in SI and oscillator units.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedTrap {
    pub config: TrapConfig,
    pub derived: TrapDerived,
    /// η in a_z.
    pub eta: f64,
    /// a_ρ in a_z.
    pub a_rho: f64,
}

impl ResolvedTrap {
    /// ω_z/2π in Hz.
    pub fn f_z(&self) -> f64 {
        self.derived.omega_z / (2.0 * PI)
    }

    /// A length quantity in a_z.
    pub fn length(&self, field: &str, q: &Quantity) -> Result<f64, Failure> {
        check_unit(field, q, Dim::Length)?;
        Ok(match q.unit.as_str() {
            "nm" => q.value * 1e-9 / self.derived.a_z,
            _ => q.value,
        })
    }
}

fn angular(field: &str, q: &Quantity) -> Result<f64, Failure> {
    check_unit(field, q, Dim::Frequency)?;
    let w = if q.unit == "Hz" { 2.0 * PI * q.value } else { q.value };
    if !(w > 0.0) {
        return Err(Failure::config(field, "must be positive"));
    }
    Ok(w)
}

pub fn resolve_trap(t: &TrapSection) -> Result<ResolvedTrap, Failure> {
    if t.species != "Li6" {
        return Err(Failure::config(
            "trap.species",
            format!("only \"Li6\" is supported, got \"{}\"", t.species),
        ));
    }
    let mass = LI6_MASS;
    let omega_z = angular("trap.omega_z", &t.omega_z)?;
    let omega_rho = match &t.omega_rho {
        Some(q) => angular("trap.omega_rho", q)?,
        None => omega_z,
    };
    let a_z = (HBAR / (mass * omega_z)).sqrt();
    let eta_si = match (&t.eta, &t.v0) {
        (Some(_), Some(_)) => return Err(Failure::config("trap", "give either eta or v0, not both")),
        (None, None) => return Err(Failure::config("trap", "one of eta or v0 is required")),
        (Some(q), None) => {
            check_unit("trap.eta", q, Dim::Length)?;
            match q.unit.as_str() {
                "nm" => q.value * 1e-9,
                _ => q.value * a_z,
            }
        }
        (None, Some(q)) => {
            check_unit("trap.v0", q, Dim::Energy)?;
            let v0 = match q.unit.as_str() {
                "hbar_omega_z" => q.value,
                "Hz" => q.value * 2.0 * PI / omega_z,
                _ => {
                    return Err(Failure::config(
                        "trap.v0",
                        "J units need a model; use hbar_omega_z or Hz",
                    ))
                }
            };
            if !(v0 > 0.0) {
                return Err(Failure::config("trap.v0", "must be positive"));
            }
            (8.0 * v0).sqrt() * a_z
        }
    };
    if !(eta_si > 0.0) {
        return Err(Failure::config("trap.eta", "must be positive"));
    }
    let config = calibrate_trap(mass, eta_si, omega_z)?.with_omega_rho(omega_rho);
    let derived = derive_trap(&config)?;
    Ok(ResolvedTrap {
        config,
        derived,
        eta: eta_si / derived.a_z,
        a_rho: derived.a_rho / derived.a_z,
    })
}

/// Hubbard couplings in units of J, before a sweep value is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub u: f64,
    pub u_i: Ratio,
    pub i: Ratio,
    pub k: Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Fixed(f64),
    PerU(f64),
}

impl Ratio {
    pub fn at(self, u: f64) -> f64 {
        match self {
            Ratio::Fixed(x) => x,
            Ratio::PerU(r) => r * u,
        }
    }
}

impl Couplings {
    pub fn parameters(&self, u: f64) -> twosite::integrals::HubbardParameters {
        twosite::integrals::HubbardParameters::new(1.0, u, self.u_i.at(u), self.i.at(u), self.k.at(u))
    }
}

pub fn resolve_couplings(m: &ModelSection, trap: Option<&ResolvedTrap>) -> Result<Couplings, Failure> {
    // everything goes through Hz unless all energies are already in J
    let to_hz = |field: &str, q: &Quantity| -> Result<Option<f64>, Failure> {
        check_unit(field, q, Dim::Energy)?;
        Ok(match q.unit.as_str() {
            "Hz" => Some(q.value),
            "hbar_omega_z" => match trap {
                Some(t) => Some(q.value * t.f_z()),
                None => return Err(Failure::config(field, "hbar_omega_z needs a [trap] section")),
            },
            _ => None,
        })
    };
    let j_hz = match &m.j {
        Some(q) => {
            let hz = to_hz("model.J", q)?;
            if hz.is_none() && q.value != 1.0 {
                return Err(Failure::config("model.J", "J in units of J must be 1"));
            }
            if let Some(x) = hz {
                if !(x > 0.0) {
                    return Err(Failure::config("model.J", "must be positive"));
                }
            }
            hz
        }
        None => None,
    };
    let in_j = |field: &str, q: &Quantity| -> Result<f64, Failure> {
        match (to_hz(field, q)?, j_hz) {
            (None, _) => Ok(q.value),
            (Some(x), Some(j)) => Ok(x / j),
            (Some(_), None) => Err(Failure::config(
                field,
                "cannot express in units of J: give model.J in Hz or hbar_omega_z",
            )),
        }
    };
    let ratio = |name: &str, fixed: &Option<Quantity>, per_u: Option<f64>| -> Result<Ratio, Failure> {
        match (fixed, per_u) {
            (Some(_), Some(_)) => Err(Failure::config(
                &format!("model.{name}"),
                format!("give either {name} or its ratio to U, not both"),
            )),
            (Some(q), None) => Ok(Ratio::Fixed(in_j(&format!("model.{name}"), q)?)),
            (None, Some(r)) if r.is_finite() => Ok(Ratio::PerU(r)),
            (None, Some(_)) => Err(Failure::config(&format!("model.{name}"), "ratio is not finite")),
            (None, None) => Ok(Ratio::Fixed(0.0)),
        }
    };
    Ok(Couplings {
        u: m.u.as_ref().map(|q| in_j("model.U", q)).transpose()?.unwrap_or(0.0),
        u_i: ratio("U_i", &m.u_i, m.u_i_per_u)?,
        i: ratio("I", &m.i, m.i_per_u)?,
        k: ratio("K", &m.k, m.k_per_u)?,
    })
}

pub fn time_in_j(field: &str, q: &Option<Quantity>, default: f64) -> Result<f64, Failure> {
    match q {
        None => Ok(default),
        Some(q) => {
            check_unit(field, q, Dim::Time)?;
            if !(q.value > 0.0) {
                return Err(Failure::config(field, "must be positive"));
            }
            Ok(q.value)
        }
    }
}

impl RunConfig {
    /// Fills defaults that the header should show explicitly.
    pub fn with_defaults(mut self, command: crate::Command) -> Self {
        use crate::Command::*;
        if matches!(command, Spectrum | Dynamics | Entropy | Fluct) {
            let m = self.model.get_or_insert_with(ModelSection::default);
            m.statistics.get_or_insert(Model::Fermion);
            m.j.get_or_insert(Quantity::new(1.0, "J"));
            m.u.get_or_insert(Quantity::new(0.0, "J"));
        }
        if matches!(command, Dynamics | Entropy) {
            let d = self.dynamics.get_or_insert_with(DynamicsSection::default);
            d.init.get_or_insert(InitialCondition::SameSite);
            d.t_max.get_or_insert(Quantity::new(DEFAULT_T_MAX, "J"));
            d.dt.get_or_insert(Quantity::new(DEFAULT_STEP, "J"));
        }
        let o = self.output.get_or_insert_with(OutputSection::default);
        o.format.get_or_insert(Format::Csv);
        self
    }
}

/// Recursive merge of TOML tables, `over` winning.
pub fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

pub fn parse_table(source: &str, text: &str) -> Result<toml::Table, Failure> {
    text.parse::<toml::Table>()
        .map_err(|e| Failure::config(source, e.to_string()))
}

pub fn from_table(source: &str, table: toml::Table) -> Result<RunConfig, Failure> {
    RunConfig::deserialize(toml::Value::Table(table)).map_err(|e| Failure::config(source, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points() {
        let s = SweepSection::parse("U/J=-20:20:0.1").unwrap();
        let p = s.points().unwrap();
        assert_eq!(p.len(), 401);
        assert_eq!(p[0], -20.0);
        assert_eq!(p[400], 20.0);
        assert_eq!(p[198], -0.2);
        assert_eq!(p[203], 0.3);
        let q = SweepSection::parse("V0/hbar_omega_z=0.25:10:0.25")
            .unwrap()
            .points()
            .unwrap();
        assert_eq!((q.len(), q[39]), (40, 10.0));
        assert!(SweepSection::parse("U/J=1:0:0.1").unwrap().points().is_err());
        assert!(SweepSection::parse("U/J=0:1:0").unwrap().points().is_err());
        assert!(SweepSection::parse("T/J=0:1:0.5").unwrap().points().is_err());
    }

    #[test]
    fn units_are_checked() {
        assert!(check_unit("x", &Quantity::new(1.0, "Hz"), Dim::Frequency).is_ok());
        assert!(check_unit("x", &Quantity::new(1.0, "nm"), Dim::Frequency).is_err());
        assert!(check_unit("x", &Quantity::new(1.0, "kHz"), Dim::Frequency).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let t = parse_table("cfg", "[model]\nU = { value = 1.0, unit = \"J\" }\nfoo = 1\n").unwrap();
        let e = from_table("cfg", t).unwrap_err();
        assert!(e.to_string().contains("foo"), "{e}");
    }

    #[test]
    fn couplings_in_hz() {
        let m = ModelSection {
            j: Some(Quantity::new(150.0, "Hz")),
            u: Some(Quantity::new(1500.0, "Hz")),
            u_i_per_u: Some(0.1),
            ..Default::default()
        };
        let c = resolve_couplings(&m, None).unwrap();
        assert_eq!(c.u, 10.0);
        assert_eq!(c.u_i.at(c.u), 1.0);
        let m = ModelSection {
            u: Some(Quantity::new(1500.0, "Hz")),
            ..Default::default()
        };
        assert!(resolve_couplings(&m, None).is_err());
    }
}
