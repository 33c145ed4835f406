//! Physical constants, trap geometry and the oscillator unit system.
//!
//! Inside the library lengths are measured in `a_z`, energies in `ħω_z` and
//! times in `1/ω_z`. SI quantities only appear in [`TrapConfig`] and at the
//! command-line boundary.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};

/// Reduced Planck constant (CODATA 2018), J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass unit (CODATA 2018), kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Mass of ⁶Li in atomic mass units.
pub const LI6_MASS_AMU: f64 = 6.015_122_887_4;
/// Mass of ⁶Li in kg.
pub const LI6_MASS: f64 = LI6_MASS_AMU * AMU;
pub const NANOMETER: f64 = 1e-9;

/// Shared numerical tolerances.
pub mod tol {
    /// Round trips through [`super::UnitSystem`].
    pub const UNIT_ROUND_TRIP: f64 = 1e-14;
    /// Normalization of amplitude vectors.
    pub const NORM: f64 = 1e-10;
    /// Orthonormality of grid eigenvectors.
    pub const GRID_ORTHO: f64 = 1e-10;
}

/// Trap of the form ½mω_ρ²ρ² + ½λ²(z²−η²)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// kg
    pub mass: f64,
    /// rad/s
    pub omega_rho: f64,
    /// J^(1/2)/m²
    pub lambda: f64,
    /// m
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapDerived {
    /// rad/s
    pub omega_z: f64,
    /// J
    pub v0: f64,
    /// m
    pub a_z: f64,
    /// m
    pub a_rho: f64,
    pub zeta: f64,
}

impl TrapConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        require_positive("omega_rho", self.omega_rho)?;
        require_positive("lambda", self.lambda)?;
        require_positive("eta", self.eta)?;
        Ok(())
    }

    /// Same geometry with a different radial frequency.
    pub fn with_omega_rho(self, omega_rho: f64) -> Self {
        TrapConfig { omega_rho, ..self }
    }
}

/// Derived trap scales with SI ħ.
pub fn derive_trap(config: &TrapConfig) -> Result<TrapDerived> {
    derive_trap_in(config, HBAR)
}

/// Derived trap scales for an arbitrary value of ħ (use 1 for natural units).
pub fn derive_trap_in(config: &TrapConfig, hbar: f64) -> Result<TrapDerived> {
    config.validate()?;
    require_positive("hbar", hbar)?;
    let TrapConfig {
        mass,
        omega_rho,
        lambda,
        eta,
    } = *config;
    let omega_z = 2.0 * lambda * eta / mass.sqrt();
    let v0 = 0.5 * lambda * lambda * eta.powi(4);
    let a_z = (hbar / (mass * omega_z)).sqrt();
    let a_rho = (hbar / (mass * omega_rho)).sqrt();
    let zeta = (omega_z / omega_rho).sqrt();
    Ok(TrapDerived {
        omega_z,
        v0,
        a_z,
        a_rho,
        zeta,
    })
}

/// Chooses λ so that the harmonic frequency at the well minima equals
/// `target_omega_z`. The radial frequency is set equal to the target.
pub fn calibrate_trap(mass: f64, eta: f64, target_omega_z: f64) -> Result<TrapConfig> {
    require_positive("mass", mass)?;
    require_positive("eta", eta)?;
    require_positive("target_omega_z", target_omega_z)?;
    let lambda = target_omega_z * mass.sqrt() / (2.0 * eta);
    Ok(TrapConfig {
        mass,
        omega_rho: target_omega_z,
        lambda,
        eta,
    })
}

/// Trap geometry with ω_z, η and V₀ fixed in SI through the barrier height
/// expressed in ħω_z: η = √(8 V₀/ħω_z) a_z.
pub fn trap_from_barrier(mass: f64, omega_z: f64, v0_over_hbar_omega_z: f64) -> Result<TrapConfig> {
    require_positive("v0", v0_over_hbar_omega_z)?;
    require_positive("omega_z", omega_z)?;
    require_positive("mass", mass)?;
    let a_z = (HBAR / (mass * omega_z)).sqrt();
    let eta = (8.0 * v0_over_hbar_omega_z).sqrt() * a_z;
    calibrate_trap(mass, eta, omega_z)
}

/// Whether the barrier is high enough for the two-mode picture.
pub fn is_tight_binding(derived: &TrapDerived, hbar: f64) -> bool {
    derived.v0 > hbar * derived.omega_z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitMode {
    Si,
    Oscillator,
}

/// Conversion between SI and oscillator units of one trap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// metres per a_z
    pub length: f64,
    /// joules per ħω_z
    pub energy: f64,
    /// seconds per 1/ω_z
    pub time: f64,
}

impl UnitSystem {
    pub fn oscillator(config: &TrapConfig) -> Result<Self> {
        let d = derive_trap(config)?;
        Ok(UnitSystem {
            mode: UnitMode::Oscillator,
            length: d.a_z,
            energy: HBAR * d.omega_z,
            time: 1.0 / d.omega_z,
        })
    }

    pub fn si() -> Self {
        UnitSystem {
            mode: UnitMode::Si,
            length: 1.0,
            energy: 1.0,
            time: 1.0,
        }
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn length_from_si(&self, x: f64) -> f64 {
        x / self.length
    }
    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * self.energy
    }
    pub fn energy_from_si(&self, e: f64) -> f64 {
        e / self.energy
    }
    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time
    }
    pub fn time_from_si(&self, t: f64) -> f64 {
        t / self.time
    }
    /// Energy in ħω_z expressed as an ordinary frequency E/h in Hz.
    pub fn energy_to_hz(&self, e: f64) -> f64 {
        self.energy_to_si(e) / (2.0 * std::f64::consts::PI * HBAR)
    }
}

/// The axial double well in oscillator units: V(z) = (z²−η²)²/(8η²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleWell {
    /// Well position in a_z.
    pub eta: f64,
}

impl DoubleWell {
    pub fn new(eta: f64) -> Result<Self> {
        require_positive("eta", eta)?;
        Ok(DoubleWell { eta })
    }

    pub fn from_trap(config: &TrapConfig) -> Result<Self> {
        let d = derive_trap(config)?;
        DoubleWell::new(config.eta / d.a_z)
    }

    /// Well with barrier height `v0` in ħω_z.
    pub fn from_barrier(v0: f64) -> Result<Self> {
        require_positive("v0", v0)?;
        DoubleWell::new((8.0 * v0).sqrt())
    }

    pub fn v0(&self) -> f64 {
        self.eta * self.eta / 8.0
    }

    pub fn potential(&self, z: f64) -> f64 {
        let d = z * z - self.eta * self.eta;
        d * d / (8.0 * self.eta * self.eta)
    }

    pub fn is_tight_binding(&self) -> bool {
        self.v0() > 1.0
    }
}
