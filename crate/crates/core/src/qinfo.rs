//! Entanglement entropies, Q parameters and ground-state number/phase
//! fluctuations. Entropies are in bits.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::TwoSiteState;
use crate::hubbard::{DerivedCouplings, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    pub labels: Vec<&'static str>,
    pub matrix: DMatrix<Complex64>,
}

impl ReducedDensityMatrix {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(&self.eigenvalues())
    }
}

/// −Σ p log₂ p with eigenvalues clipped at 0.
pub fn von_neumann_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn diagonal(labels: Vec<&'static str>, d: &[f64]) -> ReducedDensityMatrix {
    let m = DMatrix::from_fn(d.len(), d.len(), |i, j| {
        Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0)
    });
    ReducedDensityMatrix { labels, matrix: m }
}

/// Density matrix of one spatial mode. Particle-number conservation makes it
/// diagonal in the occupation basis.
pub fn spatial_density_matrix(state: &TwoSiteState, site: Site) -> ReducedDensityMatrix {
    let p = state.probabilities();
    match (state.model, site) {
        (Model::Fermion, Site::Left) => diagonal(vec!["empty", "↑", "↓", "↑↓"], &[p[3], p[1], p[2], p[0]]),
        (Model::Fermion, Site::Right) => diagonal(vec!["empty", "↑", "↓", "↑↓"], &[p[0], p[2], p[1], p[3]]),
        (Model::Boson, Site::Left) => diagonal(vec!["0", "1", "2"], &[p[2], p[1], p[0]]),
        (Model::Boson, Site::Right) => diagonal(vec!["0", "1", "2"], &[p[0], p[1], p[2]]),
    }
}

pub fn spatial_entropy(state: &TwoSiteState) -> f64 {
    spatial_density_matrix(state, Site::Left).entropy()
}

/// Two-particle wavefunction ψ(x₁, x₂) = Σ A_pq φ_p(x₁) φ_q(x₂) over
/// single-particle modes. Fermion modes {L↑, L↓, R↑, R↓}; boson modes {L, R}.
pub fn pair_amplitude(state: &TwoSiteState) -> DMatrix<Complex64> {
    let c = &state.amplitudes;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match state.model {
        Model::Fermion => {
            let mut a = DMatrix::zeros(4, 4);
            // a†_p a†_q |vac⟩ = (φ_p φ_q − φ_q φ_p)/√2
            for (k, (p, q)) in [(0, 1), (0, 3), (2, 1), (2, 3)].into_iter().enumerate() {
                a[(p, q)] += c[k] * s;
                a[(q, p)] -= c[k] * s;
            }
            a
        }
        Model::Boson => DMatrix::from_row_slice(2, 2, &[c[0], c[1] * s, c[1] * s, c[2]]),
    }
}

/// ρ₁ = Tr₂ |ψ⟩⟨ψ|.
pub fn single_particle_density_matrix(state: &TwoSiteState) -> ReducedDensityMatrix {
    let a = pair_amplitude(state);
    let labels = match state.model {
        Model::Fermion => vec!["L↑", "L↓", "R↑", "R↓"],
        Model::Boson => vec!["L", "R"],
    };
    ReducedDensityMatrix {
        labels,
        matrix: &a * a.adjoint(),
    }
}

pub fn single_particle_entropy(state: &TwoSiteState) -> f64 {
    single_particle_density_matrix(state).entropy()
}

/// E(ρ₁): S⁽¹⁾ − 1 for fermions, S⁽¹⁾ for spinless bosons.
pub fn entanglement_measure(state: &TwoSiteState) -> f64 {
    let s = single_particle_entropy(state);
    match state.model {
        Model::Fermion => s - 1.0,
        Model::Boson => s,
    }
}

/// Fermions: ⟨N_↓N_↑⟩ − ⟨N_↓⟩⟨N_↑⟩ on the site. Bosons: ⟨N²⟩ − ⟨N⟩² − ⟨N⟩.
pub fn q_parameter(state: &TwoSiteState, site: Site) -> f64 {
    let p = state.probabilities();
    match state.model {
        Model::Fermion => p[0] * p[3] - p[1] * p[2],
        Model::Boson => {
            let (p0, p1) = match site {
                Site::Left => (p[0], p[1]),
                Site::Right => (p[2], p[1]),
            };
            2.0 * p0 - 4.0 * p0 * p0 - p1 * p1 - 4.0 * p0 * p1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationReport {
    pub de_phi_f: f64,
    pub de_phi_b: f64,
    /// Number fluctuation on the scale whose limits are 1/(2√2), 0 and 1/2.
    pub dn: f64,
    /// Standard deviation of Ŵ = N̂_l − N̂_r, 8J/√(16J² + (U_− + Ω)²); equals 4·dn.
    pub d_imbalance: f64,
    pub d_sql_f: f64,
    pub d_sql_b: f64,
    pub mean_w: f64,
    /// The bosonic phase radicand came out negative and was clamped to zero.
    pub clamped: bool,
}

/// Ground-state (|a⟩) fluctuations. `j` is the bare tunneling J, the couplings
/// carry J_− = J − I; the two enter where the closed forms place them.
pub fn ground_state_fluctuations(c: &DerivedCouplings, j: f64) -> FluctuationReport {
    let x = c.x_plus();
    let jm = c.j_minus;
    let d = 16.0 * j * j + x * x;
    let dm = 16.0 * jm * jm + x * x;
    let r2 = 2f64.sqrt();
    let de_phi_f = 2.0 * r2 * j.abs() * (8.0 * j * j + x * x).sqrt() / d;
    let radicand = 1.0 - 32.0 * j * j * (x + r2 * j).powi(2) / (d * d);
    let d_imbalance = 8.0 * j.abs() / d.sqrt();
    FluctuationReport {
        de_phi_f,
        de_phi_b: radicand.max(0.0).sqrt(),
        dn: d_imbalance / 4.0,
        d_imbalance,
        d_sql_f: (16.0 * jm * jm / dm).abs(),
        d_sql_b: (4.0 * r2 * jm * (x - 2.0 * r2 * jm) / dm).abs(),
        mean_w: 0.0,
        clamped: radicand < 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_uniform_distribution() {
        assert_eq!(von_neumann_entropy(&[0.25; 4]), 2.0);
        assert_eq!(von_neumann_entropy(&[1.0, 0.0, -1e-17]), 0.0);
    }

    #[test]
    fn product_states() {
        let s = TwoSiteState::from_real(Model::Boson, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(spatial_entropy(&s), 0.0);
        assert!(single_particle_entropy(&s).abs() < 1e-15);
        assert_eq!(q_parameter(&s, Site::Left), -2.0);
        let f = TwoSiteState::from_real(Model::Fermion, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((single_particle_entropy(&f) - 1.0).abs() < 1e-15);
        assert!(entanglement_measure(&f).abs() < 1e-15);
        assert_eq!(q_parameter(&f, Site::Left), 0.0);
    }
}
