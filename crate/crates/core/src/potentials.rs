//! Jost–Kohn finite-range potentials and the contact stand-in.
//!
//! [`InteractionPotential::evaluate`] returns the reduced potential
//! v(r) = μV(r)/ħ², in inverse length squared. Multiply by ħ²/μ to get an
//! energy; in oscillator units with equal atom masses ħ²/μ = 2.

use serde::{Deserialize, Serialize};

use crate::dd::{self, Dd};
use crate::error::{require_positive, Error, Result};

/// Exponent below which an exponential is treated as exactly zero.
const EXP_FLOOR: f64 = -700.0;

fn dd_exp(arg: Dd) -> Dd {
    if arg.hi() < EXP_FLOOR {
        dd::dd(0.0)
    } else {
        dd::exp(arg)
    }
}

fn alpha_of(a_s: f64, r0: f64) -> f64 {
    (1.0 - 2.0 * r0 / a_s).sqrt()
}

/// Inverse of κ = (1/r₀)(1+α)(1+Λ)/(1−Λ).
pub fn lambda_from_kappa(kappa: f64, a_s: f64, r0: f64) -> Result<f64> {
    require_positive("r0", r0)?;
    if !(kappa * r0 > 0.0) || !kappa.is_finite() {
        return Err(Error::domain("kappa", format!("need κr0 > 0, got {}", kappa * r0)));
    }
    if !(a_s > 2.0 * r0) || !a_s.is_finite() {
        return Err(Error::domain(
            "a_s",
            format!("need a_s > 2 r0, got a_s = {a_s}, r0 = {r0}"),
        ));
    }
    let q = kappa * r0 / (1.0 + alpha_of(a_s, r0));
    Ok((q - 1.0) / (q + 1.0))
}

/// Forward map Λ → κ.
pub fn kappa_from_lambda(lambda: f64, a_s: f64, r0: f64) -> f64 {
    (1.0 + alpha_of(a_s, r0)) * (1.0 + lambda) / ((1.0 - lambda) * r0)
}

/// V₊ for positive scattering length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JostKohnPositive {
    pub a_s: f64,
    pub r0: f64,
    pub lambda: f64,
}

impl JostKohnPositive {
    pub fn new(a_s: f64, r0: f64, lambda: f64) -> Result<Self> {
        require_positive("r0", r0)?;
        if !(a_s > 2.0 * r0) || !a_s.is_finite() {
            return Err(Error::domain(
                "a_s",
                format!("need a_s > 2 r0, got a_s = {a_s}, r0 = {r0}"),
            ));
        }
        if !(lambda > -1.0 && lambda < 1.0) {
            return Err(Error::domain("lambda", format!("need −1 < Λ < 1, got {lambda}")));
        }
        Ok(JostKohnPositive { a_s, r0, lambda })
    }

    pub fn from_kappa(a_s: f64, r0: f64, kappa: f64) -> Result<Self> {
        let lambda = lambda_from_kappa(kappa, a_s, r0)?;
        JostKohnPositive::new(a_s, r0, lambda)
    }

    pub fn alpha(&self) -> f64 {
        alpha_of(self.a_s, self.r0)
    }

    pub fn beta(&self) -> f64 {
        1.0 + self.alpha()
    }

    pub fn kappa(&self) -> f64 {
        kappa_from_lambda(self.lambda, self.a_s, self.r0)
    }

    /// Reduced amplitude μV_JK/ħ² = 4α/r₀².
    pub fn amplitude(&self) -> f64 {
        4.0 * self.alpha() / (self.r0 * self.r0)
    }

    /// Reduced binding energy μE_b/ħ² = −κ²/2.
    pub fn binding_energy(&self) -> f64 {
        -0.5 * self.kappa().powi(2)
    }

    /// Reduced potential at r; numerator and denominator in double-double
    /// since both nearly cancel at small x when Λ → 1.
    pub fn evaluate(&self, r: f64) -> f64 {
        let x = dd::dd(r / self.r0);
        let a = dd::dd(self.alpha());
        let l = dd::dd(self.lambda);
        let one = dd::dd(1.0);
        let b = one + a;
        let two = dd::dd(2.0);

        let e_outer = dd_exp(-two * (one - a) * x);
        if e_outer.hi() == 0.0 {
            return 0.0;
        }
        let e_beta = dd_exp(-two * b * x);
        let e_alpha = dd_exp(-two * a * x);
        let e_two = dd_exp(-two * x);
        let e_four = dd_exp(-dd::dd(4.0) * x);

        let p = one + a * l;
        let s = a + l;
        let l2 = l * l;

        let first = p * s * (one - a) * (one - l2 * e_beta);
        let second = l * b * (p * p * e_alpha - s * s * e_two);
        let num = first * first - second * second;

        let den = p * p * (a + l2 * e_beta) - s * s * (e_outer + a * l2 * e_four);
        let v = dd::to_f64(dd::dd(4.0) * a * e_outer * num / (den * den)) / (self.r0 * self.r0);
        if v.abs() < 1e-300 {
            0.0
        } else {
            v
        }
    }
}

/// V₋ for negative scattering length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JostKohnNegative {
    pub a_s: f64,
    pub r0: f64,
}

impl JostKohnNegative {
    pub fn new(a_s: f64, r0: f64) -> Result<Self> {
        require_positive("r0", r0)?;
        if !(a_s < 0.0) || !a_s.is_finite() {
            return Err(Error::domain("a_s", format!("need a_s < 0, got {a_s}")));
        }
        Ok(JostKohnNegative { a_s, r0 })
    }

    pub fn alpha(&self) -> f64 {
        alpha_of(self.a_s, self.r0)
    }

    pub fn beta(&self) -> f64 {
        1.0 + self.alpha()
    }

    /// Reduced depth at the origin, −4α/r₀².
    pub fn depth(&self) -> f64 {
        -4.0 * self.alpha() / (self.r0 * self.r0)
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        let alpha = self.alpha();
        let beta = 1.0 + alpha;
        let arg = -2.0 * beta * r / self.r0;
        if arg < EXP_FLOOR {
            return 0.0;
        }
        let e = arg.exp();
        let d = alpha + e;
        let v = -4.0 * alpha * beta * beta * e / (d * d * self.r0 * self.r0);
        if v.abs() < 1e-300 {
            0.0
        } else {
            v
        }
    }
}

/// Zero-range pseudo-potential, g = 4πħ²a_s/m. Only used analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactInteraction {
    pub a_s: f64,
}

impl ContactInteraction {
    pub fn new(a_s: f64) -> Result<Self> {
        if !a_s.is_finite() {
            return Err(Error::domain("a_s", "must be finite"));
        }
        Ok(ContactInteraction { a_s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InteractionPotential {
    JostKohnPositive(JostKohnPositive),
    JostKohnNegative(JostKohnNegative),
    Contact(ContactInteraction),
}

impl InteractionPotential {
    /// V₊ or V₋ depending on the sign of a_s.
    pub fn jost_kohn(a_s: f64, r0: f64, kappa: Option<f64>) -> Result<Self> {
        if a_s < 0.0 {
            Ok(InteractionPotential::JostKohnNegative(JostKohnNegative::new(a_s, r0)?))
        } else {
            let kappa = kappa.ok_or_else(|| Error::domain("kappa", "V₊ needs κ or Λ"))?;
            Ok(InteractionPotential::JostKohnPositive(JostKohnPositive::from_kappa(
                a_s, r0, kappa,
            )?))
        }
    }

    pub fn a_s(&self) -> f64 {
        match self {
            InteractionPotential::JostKohnPositive(p) => p.a_s,
            InteractionPotential::JostKohnNegative(p) => p.a_s,
            InteractionPotential::Contact(p) => p.a_s,
        }
    }

    /// Range parameter, `None` for the contact interaction.
    pub fn r0(&self) -> Option<f64> {
        match self {
            InteractionPotential::JostKohnPositive(p) => Some(p.r0),
            InteractionPotential::JostKohnNegative(p) => Some(p.r0),
            InteractionPotential::Contact(_) => None,
        }
    }

    /// Shortest length on which v(r) changes: r0, or 1/κ for V₊ if smaller.
    pub fn inner_scale(&self) -> Option<f64> {
        match self {
            InteractionPotential::JostKohnPositive(p) => Some(p.r0.min(1.0 / p.kappa())),
            InteractionPotential::JostKohnNegative(p) => Some(p.r0),
            InteractionPotential::Contact(_) => None,
        }
    }

    pub fn is_contact(&self) -> bool {
        matches!(self, InteractionPotential::Contact(_))
    }

    /// Reduced potential μV/ħ² at r ≥ 0.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::domain("r", format!("need r ≥ 0, got {r}")));
        }
        match self {
            InteractionPotential::JostKohnPositive(p) => Ok(p.evaluate(r)),
            InteractionPotential::JostKohnNegative(p) => Ok(p.evaluate(r)),
            InteractionPotential::Contact(_) => {
                Err(Error::domain("potential", "contact interaction has no pointwise value"))
            }
        }
    }

    /// Radius beyond which |v| stays below `floor`·|v(0)|, found by doubling.
    pub fn cutoff_radius(&self, floor: f64) -> Option<f64> {
        let r0 = self.r0()?;
        let scale = self.evaluate(0.0).ok()?.abs().max(self.evaluate(r0).ok()?.abs());
        let mut r = r0;
        while r < 1e6 * r0 {
            if self.evaluate(r).ok()?.abs() < floor * scale && self.evaluate(2.0 * r).ok()?.abs() < floor * scale {
                return Some(r);
            }
            r *= 1.25;
        }
        Some(r)
    }

    /// Same potential with all lengths multiplied by `s`.
    pub fn rescaled(&self, s: f64) -> Result<Self> {
        require_positive("scale", s)?;
        Ok(match self {
            InteractionPotential::JostKohnPositive(p) => {
                InteractionPotential::JostKohnPositive(JostKohnPositive::new(p.a_s * s, p.r0 * s, p.lambda)?)
            }
            InteractionPotential::JostKohnNegative(p) => {
                InteractionPotential::JostKohnNegative(JostKohnNegative::new(p.a_s * s, p.r0 * s)?)
            }
            InteractionPotential::Contact(p) => InteractionPotential::Contact(ContactInteraction::new(p.a_s * s)?),
        })
    }
}
