//! Two-site Hamiltonians in the Fock bases and their spectra.
//!
//! Fermion basis, in this order: |↑↓,0⟩ = a†_{L↑}a†_{L↓}|vac⟩,
//! |↑,↓⟩ = a†_{L↑}a†_{R↓}|vac⟩, |↓,↑⟩ = a†_{R↑}a†_{L↓}|vac⟩,
//! |0,↑↓⟩ = a†_{R↑}a†_{R↓}|vac⟩. With this sign choice every hopping element
//! of the matrix is −J_−. Boson basis: |2,0⟩, |1,1⟩, |0,2⟩.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::HubbardParameters;

pub const FERMION_BASIS: [&str; 4] = ["|↑↓,0⟩", "|↑,↓⟩", "|↓,↑⟩", "|0,↑↓⟩"];
pub const BOSON_BASIS: [&str; 3] = ["|2,0⟩", "|1,1⟩", "|0,2⟩"];
pub const THREE_BOSON_BASIS: [&str; 4] = ["|3,0⟩", "|2,1⟩", "|1,2⟩", "|0,3⟩"];
pub const THREE_FERMION_BASIS: [&str; 2] = ["|↑↓,↑⟩", "|↑,↑↓⟩"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Fermion,
    Boson,
}

impl Model {
    pub fn dim(self) -> usize {
        match self {
            Model::Fermion => 4,
            Model::Boson => 3,
        }
    }

    pub fn basis(self) -> &'static [&'static str] {
        match self {
            Model::Fermion => &FERMION_BASIS,
            Model::Boson => &BOSON_BASIS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCouplings {
    pub j_minus: f64,
    pub u_bar: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    pub omega: f64,
    pub w: f64,
    pub k: f64,
}

impl DerivedCouplings {
    pub fn new(p: &HubbardParameters) -> Self {
        let j_minus = p.j - p.i;
        let u_minus = p.u - p.u_i;
        DerivedCouplings {
            j_minus,
            u_bar: p.u + p.u_i + 2.0 * p.k,
            u_plus: p.u + p.u_i,
            u_minus,
            omega: u_minus.hypot(4.0 * j_minus),
            w: p.u - p.k,
            k: p.k,
        }
    }

    /// U_− + Ω without cancellation for U_− < 0.
    pub fn x_plus(&self) -> f64 {
        if self.u_minus >= 0.0 {
            self.u_minus + self.omega
        } else {
            16.0 * self.j_minus * self.j_minus / (self.omega - self.u_minus)
        }
    }

    /// U_− − Ω without cancellation for U_− > 0.
    pub fn x_minus(&self) -> f64 {
        if self.u_minus <= 0.0 {
            self.u_minus - self.omega
        } else {
            -16.0 * self.j_minus * self.j_minus / (self.omega + self.u_minus)
        }
    }
}

pub fn h_two_fermion(p: &HubbardParameters) -> Matrix4<f64> {
    let t = -(p.j - p.i);
    Matrix4::new(
        p.u, t, t, p.k, //
        t, p.u_i, p.k, t, //
        t, p.k, p.u_i, t, //
        p.k, t, t, p.u,
    )
}

pub fn h_two_boson(p: &HubbardParameters) -> Matrix3<f64> {
    let t = -2f64.sqrt() * (p.j - p.i);
    Matrix3::new(
        p.u,
        t,
        p.k, //
        t,
        p.u_i + p.k,
        t, //
        p.k,
        t,
        p.u,
    )
}

pub fn h_three_boson(p: &HubbardParameters) -> Matrix4<f64> {
    let j3 = p.j - 2.0 * p.i;
    let s3 = 3f64.sqrt();
    let mid = p.u + 2.0 * p.u_i + 2.0 * p.k;
    Matrix4::new(
        3.0 * p.u,
        -s3 * j3,
        s3 * p.k,
        0.0, //
        -s3 * j3,
        mid,
        -2.0 * j3,
        s3 * p.k, //
        s3 * p.k,
        -2.0 * j3,
        mid,
        -s3 * j3, //
        0.0,
        s3 * p.k,
        -s3 * j3,
        3.0 * p.u,
    )
}

pub fn h_three_fermion(p: &HubbardParameters) -> Matrix2<f64> {
    let d = p.u + p.u_i;
    let t = -p.j + 2.0 * p.i;
    Matrix2::new(d, t, t, d)
}

/// Bell-like spatial states in the fermion basis.
pub fn bell_plus() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 0.0, 1.0) / 2f64.sqrt()
}

pub fn bell_minus() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 0.0, -1.0) / 2f64.sqrt()
}

pub fn bell_zero() -> Vector4<f64> {
    Vector4::new(0.0, 1.0, -1.0, 0.0) / 2f64.sqrt()
}

pub fn bell_one() -> Vector4<f64> {
    Vector4::new(0.0, 1.0, 1.0, 0.0) / 2f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub model: Model,
    /// Labels a, b, c (and d for fermions), matching `energies` and `vectors`.
    pub labels: Vec<char>,
    pub energies: Vec<f64>,
    /// Eigenvectors in basis order.
    pub vectors: Vec<Vec<f64>>,
    /// Set when J_− = 0 and the a/c vectors are basis states.
    pub degenerate: bool,
}

impl SpectrumResult {
    pub fn energy(&self, label: char) -> Option<f64> {
        self.labels.iter().position(|&l| l == label).map(|i| self.energies[i])
    }

    pub fn vector(&self, label: char) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.vectors[i].as_slice())
    }

    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e = self.energies.clone();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Closed-form eigenpairs. The boson vectors follow from the fermion ones by
/// |↑↓,0⟩ → |2,0⟩, |0,↑↓⟩ → |0,2⟩, |1⟩ → |1,1⟩.
pub fn analytic_spectrum(p: &HubbardParameters, model: Model) -> Result<SpectrumResult> {
    for (name, v) in [("J", p.j), ("U", p.u), ("U_i", p.u_i), ("I", p.i), ("K", p.k)] {
        if !v.is_finite() {
            return Err(Error::domain("parameters", format!("{name} is not finite")));
        }
    }
    let c = DerivedCouplings::new(p);
    let e_a = 0.5 * (c.u_bar - c.omega);
    let e_c = 0.5 * (c.u_bar + c.omega);
    let e_b = p.u - p.k;
    let e_d = p.u_i - p.k;

    // (coefficient of |+⟩, coefficient of |1⟩)
    let degenerate = c.j_minus == 0.0;
    let (a, cc) = if degenerate {
        if c.u_minus > 0.0 {
            ((0.0, 1.0), (1.0, 0.0))
        } else {
            ((1.0, 0.0), (0.0, 1.0))
        }
    } else {
        let xa = c.x_plus();
        let xc = c.x_minus();
        let na = (16.0 * c.j_minus * c.j_minus + xa * xa).sqrt();
        let nc = (16.0 * c.j_minus * c.j_minus + xc * xc).sqrt();
        ((4.0 * c.j_minus / na, xa / na), (4.0 * c.j_minus / nc, xc / nc))
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (labels, energies, vectors) = match model {
        Model::Fermion => {
            let pm = |plus: f64, one: f64| vec![plus * s, one * s, one * s, plus * s];
            (
                vec!['a', 'b', 'c', 'd'],
                vec![e_a, e_b, e_c, e_d],
                vec![
                    pm(a.0, a.1),
                    vec![s, 0.0, 0.0, -s],
                    pm(cc.0, cc.1),
                    vec![0.0, s, -s, 0.0],
                ],
            )
        }
        Model::Boson => {
            let pm = |plus: f64, one: f64| vec![plus * s, one, plus * s];
            (
                vec!['a', 'b', 'c'],
                vec![e_a, e_b, e_c],
                vec![pm(a.0, a.1), vec![s, 0.0, -s], pm(cc.0, cc.1)],
            )
        }
    };
    Ok(SpectrumResult {
        model,
        labels,
        energies,
        vectors: vectors.into_iter().map(fix_sign).collect(),
        degenerate,
    })
}

fn fix_sign(mut v: Vec<f64>) -> Vec<f64> {
    let big = v
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-14 { x } else { m });
    if big < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Dense symmetric eigensolve, ascending, largest component of each vector positive.
pub fn numeric_spectrum(h: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(Error::domain("hamiltonian", "matrix must be square and non-empty"));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("hamiltonian", "non-finite entry"));
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| fix_sign(eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    Ok((values, vectors))
}

pub fn hamiltonian(p: &HubbardParameters, model: Model) -> DMatrix<f64> {
    match model {
        Model::Fermion => DMatrix::from_iterator(4, 4, h_two_fermion(p).iter().copied()),
        Model::Boson => DMatrix::from_iterator(3, 3, h_two_boson(p).iter().copied()),
    }
}

/// ‖Hv − Ev‖ for each analytic eigenpair.
pub fn residuals(p: &HubbardParameters, spectrum: &SpectrumResult) -> Vec<f64> {
    let h = hamiltonian(p, spectrum.model);
    spectrum
        .energies
        .iter()
        .zip(&spectrum.vectors)
        .map(|(&e, v)| {
            let v = DVector::from_column_slice(v);
            (&h * &v - v * e).norm()
        })
        .collect()
}
