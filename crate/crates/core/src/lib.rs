//! Two-site Fermi- and Bose-Hubbard models built from a pair of atoms in a
//! three-dimensional trap with a double-well axis.

pub mod dd;
pub mod dvr;
pub mod dynamics;
pub mod error;
pub mod hubbard;
pub mod integrals;
pub mod pairsolver;
pub mod potentials;
pub mod qinfo;
pub mod quadrature;
pub mod scattering;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
