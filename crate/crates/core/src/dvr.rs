//! Sinc-DVR solution of the axial double well.
//!
//! The grid is exactly mirror symmetric, so the Hamiltonian splits into even
//! and odd blocks. The lowest eigenpair of each block is refined in
//! double-double arithmetic; this is what makes tunnelling amplitudes far
//! below f64 resolution of the energies (J ~ 1e-15 ħω_z for V₀ = 10 ħω_z)
//! reproducible.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::units::DoubleWell;

pub const MIN_POINTS: usize = 64;
pub const DEFAULT_POINTS: usize = 513;
/// Spacing above which the grid is flagged as coarse, in a_z.
pub const COARSE_SPACING: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        let g = Grid1D {
            z_min: -half_width,
            z_max: half_width,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::domain("z_max", "must be finite and positive"));
        }
        if self.z_min != -self.z_max {
            return Err(Error::domain("z_min", "grid must be symmetric, z_min = -z_max"));
        }
        if self.n_points < MIN_POINTS {
            return Err(Error::domain("n_points", format!("need at least {MIN_POINTS}")));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n_points - 1) as f64
    }

    /// z_i = (i − c)Δz with c the grid centre; exactly antisymmetric in i.
    pub fn points(&self) -> Vec<f64> {
        let dz = self.spacing();
        let c = (self.n_points - 1) as f64 / 2.0;
        (0..self.n_points).map(|i| (i as f64 - c) * dz).collect()
    }

    /// Same extent with half the spacing.
    pub fn refined(&self) -> Grid1D {
        Grid1D {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    /// Default grid: ±6η, widened until V ≥ 20 ħω_z at the edge and the WKB
    /// decay from the classically allowed region reaches e^{-32}; then
    /// 513 points or more so that Δz ≤ 0.2 a_z.
    pub fn default_for(well: &DoubleWell) -> Grid1D {
        let eta = well.eta;
        let mut half = 6.0 * eta;
        let e_ref = 2.0;
        let step = 0.01;
        let mut z = eta;
        let mut action = 0.0;
        loop {
            let v = well.potential(z);
            if v > e_ref {
                action += (2.0 * (v - e_ref)).sqrt() * step;
            }
            z += step;
            if z >= half && well.potential(z) >= 20.0 && action >= 32.0 {
                break;
            }
        }
        if z > half {
            half = z;
        }
        let mut n = DEFAULT_POINTS;
        while 2.0 * half / (n - 1) as f64 > 0.2 {
            n = 2 * n - 1;
        }
        Grid1D {
            z_min: -half,
            z_max: half,
            n_points: n,
        }
    }
}

/// Colbert–Miller kinetic element with ħ = m = 1.
pub fn kinetic_element(i: usize, j: usize, dz: f64) -> f64 {
    let pref = 1.0 / (2.0 * dz * dz);
    if i == j {
        pref * PI * PI / 3.0
    } else {
        let d = i as f64 - j as f64;
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        pref * sign * 2.0 / (d * d)
    }
}

#[derive(Debug, Clone)]
pub struct DvrHamiltonian {
    pub grid: Grid1D,
    pub matrix: DMatrix<f64>,
    pub warnings: Vec<String>,
}

pub fn build_hamiltonian_1d(grid: &Grid1D, well: &DoubleWell) -> Result<DvrHamiltonian> {
    grid.validate()?;
    let n = grid.n_points;
    let dz = grid.spacing();
    let z = grid.points();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = kinetic_element(i, j, dz);
        }
        m[(j, j)] += well.potential(z[j]);
    }
    let mut warnings = Vec::new();
    if dz > COARSE_SPACING {
        let w = format!("grid spacing {dz:.4} a_z exceeds {COARSE_SPACING} a_z");
        log::warn!("{w}");
        warnings.push(w);
    }
    Ok(DvrHamiltonian {
        grid: *grid,
        matrix: m,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct SingleParticleSolution {
    pub grid: Grid1D,
    pub z: Vec<f64>,
    /// Lowest eigenvalues in ħω_z, ascending.
    pub energies: Vec<f64>,
    /// Grid functions normalised so that Δz Σ ψ² = 1.
    pub psi_s: Vec<f64>,
    pub psi_a: Vec<f64>,
    pub psi_l: Vec<f64>,
    pub psi_r: Vec<f64>,
    /// Tunnelling amplitude from −J = ⟨ψ_l|H|ψ_r⟩, in ω_z.
    pub j: f64,
    /// E_a − E_s in ħω_z.
    pub doublet_gap: f64,
    pub tight_binding: bool,
    pub warnings: Vec<String>,
    pub(crate) coeff_s: Vec<Dd>,
    pub(crate) coeff_a: Vec<Dd>,
}

impl SingleParticleSolution {
    /// Wraps externally supplied symmetric/antisymmetric grid functions.
    /// They are normalised here; energies and J are left empty.
    pub fn from_modes(grid: Grid1D, psi_s: &[f64], psi_a: &[f64]) -> Result<Self> {
        grid.validate()?;
        if psi_s.len() != grid.n_points || psi_a.len() != grid.n_points {
            return Err(Error::domain("psi", "mode length does not match the grid"));
        }
        let dz = grid.spacing();
        let unit = |v: &[f64]| -> Result<Vec<Dd>> {
            let x: Vec<Dd> = v.iter().map(|&f| dd::dd(f * dz.sqrt())).collect();
            let nrm = dd::dot(&x, &x).sqrt();
            if !(nrm.hi() > 0.0) {
                return Err(Error::domain("psi", "zero mode"));
            }
            Ok(x.into_iter().map(|c| c / nrm).collect())
        };
        let cs = unit(psi_s)?;
        let ca = unit(psi_a)?;
        let scale = 1.0 / dz.sqrt();
        let inv_sqrt2 = dd::dd(1.0) / dd::sqrt2();
        Ok(SingleParticleSolution {
            grid,
            z: grid.points(),
            energies: Vec::new(),
            psi_s: cs.iter().map(|v| dd::to_f64(*v) * scale).collect(),
            psi_a: ca.iter().map(|v| dd::to_f64(*v) * scale).collect(),
            psi_l: cs
                .iter()
                .zip(&ca)
                .map(|(s, a)| dd::to_f64((*s + *a) * inv_sqrt2) * scale)
                .collect(),
            psi_r: cs
                .iter()
                .zip(&ca)
                .map(|(s, a)| dd::to_f64((*s - *a) * inv_sqrt2) * scale)
                .collect(),
            j: 0.0,
            doublet_gap: 0.0,
            tight_binding: true,
            warnings: Vec::new(),
            coeff_s: cs,
            coeff_a: ca,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    /// Half the doublet splitting, the second route to J.
    pub fn j_from_gap(&self) -> f64 {
        0.5 * self.doublet_gap
    }

    /// Weight of ψ_l on z < 0 (the centre point counts half).
    pub fn left_weight(&self) -> f64 {
        let dz = self.spacing();
        self.z
            .iter()
            .zip(&self.psi_l)
            .map(|(z, p)| {
                let w = if *z < 0.0 {
                    1.0
                } else if *z == 0.0 {
                    0.5
                } else {
                    0.0
                };
                w * p * p * dz
            })
            .sum()
    }
}

/// Mirror pairs (i, mirror(i)) for the parity blocks.
struct ParityLayout {
    n: usize,
    /// Indices of the right half including the centre for odd n.
    right: Vec<usize>,
    centre: Option<usize>,
}

impl ParityLayout {
    fn new(n: usize) -> Self {
        let half = n / 2;
        let (centre, start) = if n % 2 == 1 { (Some(half), half) } else { (None, half) };
        ParityLayout {
            n,
            right: (start..n).collect(),
            centre,
        }
    }

    fn mirror(&self, i: usize) -> usize {
        self.n - 1 - i
    }

    /// Block matrix on unnormalised symmetric (sign=+1) or antisymmetric
    /// (sign=−1) combinations e_i ± e_mirror(i), restricted and rescaled to
    /// be orthonormal.
    fn block(&self, h: &DMatrix<f64>, sign: f64) -> (DMatrix<f64>, Vec<usize>) {
        let idx: Vec<usize> = self
            .right
            .iter()
            .copied()
            .filter(|&i| !(sign < 0.0 && Some(i) == self.centre))
            .collect();
        let d = idx.len();
        let norm = |i: usize| {
            if Some(i) == self.centre {
                1.0
            } else {
                std::f64::consts::SQRT_2
            }
        };
        let mut b = DMatrix::<f64>::zeros(d, d);
        for (q, &j) in idx.iter().enumerate() {
            for (p, &i) in idx.iter().enumerate() {
                // ⟨b_i|H|b_j⟩ with b_i = (e_i ± e_i')/norm(i)
                let mut v = h[(i, j)];
                if Some(j) != self.centre {
                    v += sign * h[(i, self.mirror(j))];
                }
                if Some(i) != self.centre {
                    v += sign * h[(self.mirror(i), j)];
                    if Some(j) != self.centre {
                        v += h[(self.mirror(i), self.mirror(j))];
                    }
                }
                b[(p, q)] = v / (norm(i) * norm(j));
            }
        }
        (b, idx)
    }

    fn expand(&self, idx: &[usize], block_vec: &[f64], sign: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (p, &i) in idx.iter().enumerate() {
            if Some(i) == self.centre {
                out[i] = block_vec[p];
            } else {
                let c = block_vec[p] / std::f64::consts::SQRT_2;
                out[i] = c;
                out[self.mirror(i)] = sign * c;
            }
        }
        out
    }

    fn restrict(&self, idx: &[usize], full: &[f64], sign: f64) -> Vec<f64> {
        idx.iter()
            .map(|&i| {
                if Some(i) == self.centre {
                    full[i]
                } else {
                    (full[i] + sign * full[self.mirror(i)]) / std::f64::consts::SQRT_2
                }
            })
            .collect()
    }

    fn symmetrize(&self, x: &mut [Dd], sign: f64) {
        let half = dd::dd(0.5);
        for i in self.right.iter().copied() {
            let m = self.mirror(i);
            if m == i {
                if sign < 0.0 {
                    x[i] = dd::dd(0.0);
                }
                continue;
            }
            let avg = (x[i] + x[m] * sign) * half;
            x[i] = avg;
            x[m] = avg * sign;
        }
    }
}

struct RefinedPair {
    energy: Dd,
    coeff: Vec<Dd>,
    block_values: Vec<f64>,
}

fn refine_lowest(h: &DMatrix<f64>, layout: &ParityLayout, sign: f64) -> Result<RefinedPair> {
    let (b, idx) = layout.block(h, sign);
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
    let k0 = order[0];
    let lam0 = eig.eigenvalues[k0];
    let q0: Vec<f64> = eig.eigenvectors.column(k0).iter().copied().collect();
    let full0 = layout.expand(&idx, &q0, sign);
    let mut x: Vec<Dd> = full0.iter().map(|&v| dd::dd(v)).collect();
    let hnorm = h.iter().fold(0.0_f64, |a, v| a.max(v.abs())) * h.nrows() as f64;

    let mut lambda = dd::dd(lam0);
    let mut last_res = f64::INFINITY;
    for _ in 0..10 {
        let nrm = dd::dot(&x, &x).sqrt();
        for v in x.iter_mut() {
            *v /= nrm;
        }
        layout.symmetrize(&mut x, sign);
        let y = dd::sym_matvec(h, &x);
        lambda = dd::dot(&x, &y) / dd::dot(&x, &x);
        let r: Vec<f64> = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| dd::to_f64(*yi - *xi * lambda))
            .collect();
        let res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if res <= 1e-28 * hnorm || res >= 0.5 * last_res {
            last_res = last_res.min(res);
            break;
        }
        last_res = res;
        let rb = layout.restrict(&idx, &r, sign);
        let lam_f = dd::to_f64(lambda);
        let mut delta_b = vec![0.0; idx.len()];
        for &k in order.iter().skip(1) {
            let qk = eig.eigenvectors.column(k);
            let proj: f64 = qk.iter().zip(&rb).map(|(a, b)| a * b).sum();
            let c = -proj / (eig.eigenvalues[k] - lam_f);
            for (d, q) in delta_b.iter_mut().zip(qk.iter()) {
                *d += c * q;
            }
        }
        let delta = layout.expand(&idx, &delta_b, sign);
        for (xi, di) in x.iter_mut().zip(&delta) {
            *xi += *di;
        }
    }
    if !(last_res < 1e-18 * hnorm.max(1.0)) {
        return Err(Error::numeric(
            "dvr eigenpair refinement",
            format!("residual norm {last_res:.3e} did not converge"),
        ));
    }
    let mut vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    vals[0] = dd::to_f64(lambda);
    Ok(RefinedPair {
        energy: lambda,
        coeff: x,
        block_values: vals,
    })
}

/// Lowest `k` eigenvalues and the tunnelling doublet of the double well.
pub fn solve_doublet(grid: &Grid1D, well: &DoubleWell, k: usize) -> Result<SingleParticleSolution> {
    if k < 2 {
        return Err(Error::domain("k", "need at least the two doublet states"));
    }
    let ham = build_hamiltonian_1d(grid, well)?;
    solve_doublet_with(&ham, well, k)
}

pub fn solve_doublet_with(ham: &DvrHamiltonian, well: &DoubleWell, k: usize) -> Result<SingleParticleSolution> {
    let grid = ham.grid;
    let n = grid.n_points;
    let layout = ParityLayout::new(n);
    let even = refine_lowest(&ham.matrix, &layout, 1.0)?;
    let odd = refine_lowest(&ham.matrix, &layout, -1.0)?;

    let mut energies: Vec<f64> = even.block_values.iter().chain(&odd.block_values).copied().collect();
    energies.sort_by(f64::total_cmp);
    energies.truncate(k);

    let mut cs = even.coeff;
    let mut ca = odd.coeff;
    // ψ_s nodeless and positive; ψ_a positive on the left.
    let sum_s: f64 = cs.iter().map(|v| v.hi()).sum();
    if sum_s < 0.0 {
        cs.iter_mut().for_each(|v| *v = -*v);
    }
    let z = grid.points();
    let left_a: f64 = ca.iter().zip(&z).filter(|(_, z)| **z < 0.0).map(|(v, _)| v.hi()).sum();
    if left_a < 0.0 {
        ca.iter_mut().for_each(|v| *v = -*v);
    }

    let dz = grid.spacing();
    let scale = 1.0 / dz.sqrt();
    let inv_sqrt2 = dd::dd(1.0) / dd::sqrt2();
    let psi_s: Vec<f64> = cs.iter().map(|v| dd::to_f64(*v) * scale).collect();
    let psi_a: Vec<f64> = ca.iter().map(|v| dd::to_f64(*v) * scale).collect();
    let psi_l: Vec<f64> = cs
        .iter()
        .zip(&ca)
        .map(|(s, a)| dd::to_f64((*s + *a) * inv_sqrt2) * scale)
        .collect();
    let psi_r: Vec<f64> = cs
        .iter()
        .zip(&ca)
        .map(|(s, a)| dd::to_f64((*s - *a) * inv_sqrt2) * scale)
        .collect();

    let gap = dd::to_f64(odd.energy - even.energy);
    let mut warnings = ham.warnings.clone();
    let tight_binding = well.is_tight_binding();
    if !tight_binding {
        let w = format!(
            "barrier V0 = {:.4} ħω_z is not above ħω_z; two-mode picture not tight-binding",
            well.v0()
        );
        log::warn!("{w}");
        warnings.push(w);
    }
    let mut sol = SingleParticleSolution {
        grid,
        z,
        energies,
        psi_s,
        psi_a,
        psi_l,
        psi_r,
        j: 0.0,
        doublet_gap: gap,
        tight_binding,
        warnings,
        coeff_s: cs,
        coeff_a: ca,
    };
    sol.j = tunneling_matrix_element(&sol, ham)?;
    Ok(sol)
}

/// −J = ⟨ψ_l|H₁|ψ_r⟩, evaluated in double-double.
pub fn tunneling_matrix_element(sol: &SingleParticleSolution, ham: &DvrHamiltonian) -> Result<f64> {
    if ham.grid != sol.grid {
        return Err(Error::domain(
            "hamiltonian",
            "solution and Hamiltonian use different grids",
        ));
    }
    let inv_sqrt2 = dd::dd(1.0) / dd::sqrt2();
    let l: Vec<Dd> = sol
        .coeff_s
        .iter()
        .zip(&sol.coeff_a)
        .map(|(s, a)| (*s + *a) * inv_sqrt2)
        .collect();
    let r: Vec<Dd> = sol
        .coeff_s
        .iter()
        .zip(&sol.coeff_a)
        .map(|(s, a)| (*s - *a) * inv_sqrt2)
        .collect();
    let hr = dd::sym_matvec(&ham.matrix, &r);
    Ok(-dd::to_f64(dd::dot(&l, &hr)))
}

/// Sinc interpolation of grid samples at arbitrary points.
pub fn sinc_interpolate(grid: &Grid1D, samples: &[f64], at: &[f64]) -> Vec<f64> {
    let dz = grid.spacing();
    let z = grid.points();
    at.iter()
        .map(|&x| {
            let mut s = 0.0;
            for (zi, fi) in z.iter().zip(samples) {
                let u = (x - zi) / dz;
                let w = if u.abs() < 1e-12 {
                    1.0
                } else {
                    (PI * u).sin() / (PI * u)
                };
                s += fi * w;
            }
            s
        })
        .collect()
}
