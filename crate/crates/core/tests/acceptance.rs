//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::gamma::gamma;
use twosite::dvr::{sinc_interpolate, solve_doublet, Grid1D, SingleParticleSolution};
use twosite::dynamics::*;
use twosite::hubbard::*;
use twosite::integrals::*;
use twosite::pairsolver::*;
use twosite::potentials::*;
use twosite::qinfo::*;
use twosite::scattering::{default_k_grid, verify_scattering};
use twosite::spectral::power_spectrum;
use twosite::units::DoubleWell;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_params(rng: &mut ChaCha8Rng, bound: f64) -> HubbardParameters {
    let mut x = || rng.random_range(-bound..bound);
    HubbardParameters::new(1.0, x(), x(), x(), x())
}

fn spectrum_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = random_params(&mut rng, 20.0);
        for model in [Model::Fermion, Model::Boson] {
            let h = hamiltonian(&p, model);
            let (numeric, _) = numeric_spectrum(&h).unwrap();
            let analytic = analytic_spectrum(&p, model).unwrap().sorted_energies();
            let scale = h.norm().max(1.0);
            for (a, b) in analytic.iter().zip(&numeric) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-12 && secs < 10.0,
        format!("max |ΔE|/max(1,‖H‖) = {worst:.2e}, {secs:.2} s"),
    )
}

fn dynamics_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let times: Vec<f64> = (0..=400).map(|k| 0.25 * k as f64).collect();
    let (mut worst, mut drift): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let p = random_params(&mut rng, 20.0);
        let c = DerivedCouplings::new(&p);
        for (model, init) in [
            (Model::Fermion, InitialCondition::SameSite),
            (Model::Fermion, InitialCondition::Split),
            (Model::Fermion, InitialCondition::SplitAntisymmetric),
            (Model::Boson, InitialCondition::SameSite),
            (Model::Boson, InitialCondition::Split),
        ] {
            let psi0 = init.state(model).unwrap();
            let numeric = numeric_evolve(&hamiltonian(&p, model), &psi0, &times).unwrap();
            for (t, v) in times.iter().zip(&numeric) {
                let a = analytic_evolve(model, init, &c, *t).unwrap();
                for (x, y) in a.amplitudes.iter().zip(v) {
                    worst = worst.max((x - y).norm());
                }
                let n: f64 = v.iter().map(Complex64::norm_sqr).sum();
                drift = drift.max((n - 1.0).abs()).max((a.norm_sqr() - 1.0).abs());
            }
        }
    }
    outcome(
        worst <= 1e-8 && drift < 1e-12,
        format!("max amplitude error {worst:.2e}, norm drift {drift:.2e}"),
    )
}

fn statistical_coincidence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let c = DerivedCouplings::new(&random_params(&mut rng, 20.0));
        for init in [InitialCondition::SameSite, InitialCondition::Split] {
            for k in 0..=200 {
                let t = 0.5 * k as f64;
                let f = analytic_evolve(Model::Fermion, init, &c, t).unwrap();
                let b = analytic_evolve(Model::Boson, init, &c, t).unwrap();
                let (of, ob) = (occupancy(&f), occupancy(&b));
                let (tf, tb) = (tunneling_from_state(&f), tunneling_from_state(&b));
                for (x, y) in [
                    (of.rho_s, ob.rho_s),
                    (of.rho_d, ob.rho_d),
                    (tf.p_pair, tb.p_pair),
                    (tf.p_single, tb.p_single),
                ] {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("max fermion/boson difference {worst:.2e}"))
}

fn limits_suite() -> Outcome {
    let mut failures = Vec::new();
    let p = HubbardParameters::new(1.0, 100.0, 0.0, 0.0, 0.0);
    let ea = analytic_spectrum(&p, Model::Fermion).unwrap().energy('a').unwrap();
    if (ea / -0.04 - 1.0).abs() >= 0.02 {
        failures.push(format!("E_a = {ea}"));
    }
    let fl = |u: f64| {
        ground_state_fluctuations(
            &DerivedCouplings::new(&HubbardParameters::new(1.0, u, 0.0, 0.0, 0.0)),
            1.0,
        )
    };
    let mut check = |name: &str, got: f64, want: f64, tol: f64| {
        if (got - want).abs() > tol {
            failures.push(format!("{name} = {got:.6} (printed {want})"));
        }
    };
    let up = fl(1e6);
    for (name, got, want) in [
        ("ΔN(+∞)", up.dn, 0.0),
        ("ΔE_φ^F(+∞)", up.de_phi_f, 0.0),
        ("ΔE_φ^B(+∞)", up.de_phi_b, 0.5),
        ("Δ_SQL^F(+∞)", up.d_sql_f, 0.0),
        ("Δ_SQL^B(+∞)", up.d_sql_b, 0.0),
    ] {
        check(name, got, want, 1e-3);
    }
    let down = fl(-1e6);
    for (name, got, want) in [
        ("ΔN(−∞)", down.dn, 0.5),
        ("ΔE_φ^F(−∞)", down.de_phi_f, 0.5),
        ("ΔE_φ^B(−∞)", down.de_phi_b, 0.75),
        ("Δ_SQL^F(−∞)", down.d_sql_f, 1.0),
        ("Δ_SQL^B(−∞)", down.d_sql_b, 1.0),
    ] {
        check(name, got, want, 1e-3);
    }
    let zero = fl(0.0);
    check("ΔN(0)", zero.dn, 1.0 / (2.0 * 2f64.sqrt()), 1e-12);
    check("ΔE_φ^F(0)", zero.de_phi_f, 3f64.sqrt() / 4.0, 1e-12);
    let detail = if failures.is_empty() {
        format!("E_a·U/4J² = {:.4}", ea / -0.04)
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn eigenstate(p: &HubbardParameters, model: Model, label: char) -> TwoSiteState {
    let s = analytic_spectrum(p, model).unwrap();
    TwoSiteState::from_real(model, s.vector(label).unwrap()).unwrap()
}

/// The U grid used by the entropy and Q checks, with the small couplings in
/// the same ratios as the lithium parameter point.
fn entropy_couplings(u: f64) -> DerivedCouplings {
    DerivedCouplings::new(&HubbardParameters::new(1.0, u, u / 600.0, -u / 50.0, u / 600.0))
}

fn entropy_times() -> Vec<f64> {
    (0..=2000).map(|k| 0.01 * k as f64).collect()
}

fn entropy_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_fixed: f64 = 0.0;
    for _ in 0..100 {
        let p = random_params(&mut rng, 20.0);
        for (model, label) in [(Model::Fermion, 'b'), (Model::Fermion, 'd'), (Model::Boson, 'b')] {
            let s = spatial_entropy(&eigenstate(&p, model, label));
            worst_fixed = worst_fixed.max((s - 1.0).abs());
        }
    }
    // exact up to the rounding of (1/√2)²
    if worst_fixed > 4.0 * f64::EPSILON {
        failures.push(format!("|S(|b⟩,|d⟩) − 1| = {worst_fixed:e}"));
    }
    let free = HubbardParameters::new(1.0, 0.0, 0.0, 0.0, 0.0);
    let sf = spatial_entropy(&eigenstate(&free, Model::Fermion, 'a'));
    let sb = spatial_entropy(&eigenstate(&free, Model::Boson, 'a'));
    if (sf - 2.0).abs() > 1e-12 || (sb - 1.5).abs() > 1e-12 {
        failures.push(format!("ground state S = {sf}, {sb}"));
    }
    let mut boson_split_max: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for u in [-10.0, -1.0, 0.0, 1.0, 10.0] {
        let c = entropy_couplings(u);
        for init in [InitialCondition::SameSite, InitialCondition::Split] {
            for &t in &entropy_times() {
                let f = spatial_entropy(&analytic_evolve(Model::Fermion, init, &c, t).unwrap());
                let b = spatial_entropy(&analytic_evolve(Model::Boson, init, &c, t).unwrap());
                min_gap = min_gap.min(f - b);
                if init == InitialCondition::Split {
                    boson_split_max = boson_split_max.max(b);
                    if b < -1e-12 {
                        failures.push(format!("negative boson entropy {b}"));
                    }
                }
            }
        }
    }
    if min_gap < -1e-12 {
        failures.push(format!("S_F − S_B reaches {min_gap}"));
    }
    if boson_split_max > 1.65 {
        failures.push(format!("split boson entropy reaches {boson_split_max}"));
    }
    let detail = if failures.is_empty() {
        format!(
            "|S(|b⟩,|d⟩) − 1| ≤ {worst_fixed:.1e}, min S_F − S_B = {min_gap:.2e}, split boson max {boson_split_max:.4}"
        )
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

/// Boson ladder operators truncated at two quanta per mode, index 3·n_l + n_r.
fn boson_annihilator(left: bool) -> DMatrix<f64> {
    DMatrix::from_fn(9, 9, |row, col| {
        let (nl, nr, ml, mr) = (col / 3, col % 3, row / 3, row % 3);
        match left {
            true if nl > 0 && ml == nl - 1 && mr == nr => (nl as f64).sqrt(),
            false if nr > 0 && mr == nr - 1 && ml == nl => (nr as f64).sqrt(),
            _ => 0.0,
        }
    })
}

/// Jordan–Wigner annihilators for L↑, L↓, R↑, R↓ on 16 states.
fn fermion_annihilator(p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(16, 16, |row, col| {
        if col & (1 << p) == 0 || row != col ^ (1 << p) {
            return 0.0;
        }
        if (col & ((1 << p) - 1)).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

fn expect(op: &DMatrix<f64>, psi: &[Complex64]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..psi.len() {
        for j in 0..psi.len() {
            s += psi[i].conj() * op[(i, j)] * psi[j];
        }
    }
    s.re
}

fn q_suite() -> Outcome {
    let mut failures = Vec::new();
    let times = entropy_times();
    let free = entropy_couplings(0.0);
    let mut qf0: f64 = 0.0;
    let mut qb_range = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in &times {
        qf0 = qf0.max(
            q_parameter(
                &analytic_evolve(Model::Fermion, InitialCondition::SameSite, &free, t).unwrap(),
                Site::Left,
            )
            .abs(),
        );
        let q = q_parameter(
            &analytic_evolve(Model::Boson, InitialCondition::SameSite, &free, t).unwrap(),
            Site::Left,
        );
        qb_range = (qb_range.0.min(q), qb_range.1.max(q));
    }
    if qf0 > 1e-12 {
        failures.push(format!("Q^F at U = 0 reaches {qf0:.2e}"));
    }
    if qb_range.0 < -2.0 - 1e-12 || qb_range.1 > 1e-12 {
        failures.push(format!("Q^B range {qb_range:?}"));
    }

    // operator route
    let (al, ar) = (boson_annihilator(true), boson_annihilator(false));
    let (nl, nr) = (al.transpose() * &al, ar.transpose() * &ar);
    let (ll, rr) = (&nl * &nl - &nl, &nr * &nr - &nr);
    let c: Vec<DMatrix<f64>> = (0..4).map(fermion_annihilator).collect();
    let n: Vec<DMatrix<f64>> = c.iter().map(|a| a.transpose() * a).collect();
    let lud = &n[0] * &n[1];
    let rud = &n[2] * &n[3];
    let mut vac = vec![Complex64::new(0.0, 0.0); 16];
    vac[0] = Complex64::new(1.0, 0.0);
    let fermion_kets: Vec<Vec<f64>> = [(0, 1), (0, 3), (2, 1), (2, 3)]
        .iter()
        .map(|&(p, q)| {
            let m = c[p].transpose() * c[q].transpose();
            (0..16).map(|i| m[(i, 0)]).collect()
        })
        .collect();
    let (mut dual, mut lr): (f64, f64) = (0.0, 0.0);
    for u in [0.0, 1.0, 10.0] {
        let cpl = entropy_couplings(u);
        for init in [InitialCondition::SameSite, InitialCondition::Split] {
            for &t in times.iter().step_by(50) {
                let b = analytic_evolve(Model::Boson, init, &cpl, t).unwrap();
                let mut psi = vec![Complex64::new(0.0, 0.0); 9];
                psi[6] = b.amplitudes[0];
                psi[4] = b.amplitudes[1];
                psi[2] = b.amplitudes[2];
                let ql = expect(&ll, &psi) - expect(&nl, &psi).powi(2);
                let qr = expect(&rr, &psi) - expect(&nr, &psi).powi(2);
                dual = dual
                    .max((ql - q_parameter(&b, Site::Left)).abs())
                    .max((qr - q_parameter(&b, Site::Right)).abs());

                let f = analytic_evolve(Model::Fermion, init, &cpl, t).unwrap();
                let mut psi = vec![Complex64::new(0.0, 0.0); 16];
                for (k, ket) in fermion_kets.iter().enumerate() {
                    for (i, x) in ket.iter().enumerate() {
                        psi[i] += f.amplitudes[k] * *x;
                    }
                }
                let ql = expect(&lud, &psi) - expect(&n[0], &psi) * expect(&n[1], &psi);
                let qr = expect(&rud, &psi) - expect(&n[2], &psi) * expect(&n[3], &psi);
                dual = dual
                    .max((ql - q_parameter(&f, Site::Left)).abs())
                    .max((qr - q_parameter(&f, Site::Right)).abs());
                lr = lr.max((q_parameter(&f, Site::Left) - q_parameter(&f, Site::Right)).abs());
            }
        }
    }
    if dual > 1e-12 {
        failures.push(format!("operator route differs by {dual:.2e}"));
    }
    if lr > 0.0 {
        failures.push(format!("Q^F_l − Q^F_r = {lr:.2e}"));
    }
    let detail = if failures.is_empty() {
        format!(
            "max |Q^F(U=0)| {qf0:.1e}, Q^B ∈ [{:.4}, {:.1e}], dual route {dual:.1e}",
            qb_range.0, qb_range.1
        )
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn scattering_verification() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = vec![(-9.54, 1.66)];
    for _ in 0..20 {
        let r0 = rng.random_range(0.5..5.0);
        pairs.push((-r0 * rng.random_range(0.5..20.0), r0));
    }
    let (mut worst_a, mut worst_r): (f64, f64) = (0.0, 0.0);
    for &(a_s, r0) in &pairs {
        let pot = InteractionPotential::JostKohnNegative(JostKohnNegative::new(a_s, r0).unwrap());
        match verify_scattering(&pot, &default_k_grid(r0, 8)) {
            Ok(fit) => {
                worst_a = worst_a.max((fit.a_s_fit / a_s - 1.0).abs());
                worst_r = worst_r.max((fit.r0_fit / r0 - 1.0).abs());
            }
            Err(e) => return outcome(false, format!("({a_s}, {r0}): {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_a < 0.01 && worst_r < 0.05 && secs < 60.0,
        format!(
            "max a_s error {:.3}%, max r0 error {:.3}%, {secs:.1} s",
            100.0 * worst_a,
            100.0 * worst_r
        ),
    )
}

/// Root of √2 Γ(3/4 − E/2)/Γ(1/4 − E/2) = 1/a on (1/2, 3/2), a < 0.
fn busch_root(a: f64) -> f64 {
    let f = |e: f64| 2f64.sqrt() * gamma(0.75 - e / 2.0) / gamma(0.25 - e / 2.0) - 1.0 / a;
    let (mut lo, mut hi) = (0.5 + 1e-12, 1.5 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn pair_solver_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [-0.5, -0.1, -0.02] {
        let p = RelativeMotionProblem::new(Some(InteractionPotential::Contact(ContactInteraction::new(a).unwrap())));
        worst = worst.max((solve_relative_ground(&p).unwrap().e_rel - busch_root(a)).abs());
    }
    let free = (solve_relative_ground(&RelativeMotionProblem::new(None)).unwrap().e_rel - 1.5).abs();
    outcome(
        worst < 1e-4 && free < 1e-6,
        format!("max |E − E_Busch| {worst:.2e}, |E_free − 3/2| {free:.2e}"),
    )
}

const A_RHO: f64 = 0.1;

fn desk() -> SingleParticleSolution {
    let well = DoubleWell::new(3.5).unwrap();
    solve_doublet(&Grid1D::default_for(&well), &well, 2).unwrap()
}

/// Plain 6D Monte Carlo of ∫|Φ_l(r₁)|²|Φ_l(r₂)|² V dr₁ dr₂ with Gaussian radial
/// modes, sampling z from the interpolated axial density.
fn monte_carlo_onsite(sol: &SingleParticleSolution, pot: &InteractionPotential, samples: usize) -> (f64, f64) {
    let sub = 8;
    let dz = sol.spacing() / sub as f64;
    let fine: Vec<f64> = (0..(sol.grid.n_points - 1) * sub + 1)
        .map(|i| sol.grid.z_min + dz * i as f64)
        .collect();
    let mut cdf = Vec::with_capacity(fine.len());
    let mut acc = 0.0;
    for p in sinc_interpolate(&sol.grid, &sol.psi_l, &fine) {
        acc += p * p;
        cdf.push(acc);
    }
    let sample_z = |u: f64| {
        let target = u * acc;
        let i = cdf.partition_point(|&c| c < target).min(cdf.len() - 1);
        let lo = if i == 0 { 0.0 } else { cdf[i - 1] };
        fine[i] - dz / 2.0 + dz * (target - lo) / (cdf[i] - lo)
    };
    let normal = Normal::new(0.0, A_RHO / 2f64.sqrt()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let dx = normal.sample(&mut rng) - normal.sample(&mut rng);
        let dy = normal.sample(&mut rng) - normal.sample(&mut rng);
        let dz = sample_z(rng.random::<f64>()) - sample_z(rng.random::<f64>());
        let v = HBAR2_OVER_MU * pot.evaluate((dx * dx + dy * dy + dz * dz).sqrt()).unwrap();
        s1 += v;
        s2 += v * v;
    }
    let n = samples as f64;
    let mean = s1 / n;
    (mean, ((s2 / n - mean * mean) / n).sqrt())
}

fn integral_consistency() -> Outcome {
    let mut failures = Vec::new();
    let sol = desk();
    let pot = InteractionPotential::JostKohnNegative(JostKohnNegative::new(-0.05, 0.01).unwrap());
    let p = hubbard_parameters(&sol, &pot, A_RHO).unwrap();
    let (mc, err) = monte_carlo_onsite(&sol, &pot, 4_000_000);
    let sigmas = (p.u - mc).abs() / err;
    if sigmas >= 3.0 {
        failures.push(format!("quadrature {} vs Monte Carlo {mc} ± {err}", p.u));
    }
    if (p.u - p.u_rr).abs() > 1e-8 * p.u.abs() {
        failures.push(format!("U_ll − U_rr = {:e}", p.u - p.u_rr));
    }
    let ratio = [p.u_i, p.i, p.k]
        .iter()
        .map(|x| x.abs() / p.u.abs())
        .fold(0.0, f64::max);
    if ratio > 1e-1 {
        failures.push(format!("off-site/on-site ratio {ratio:.3e}"));
    } else if ratio > 1e-2 {
        println!("    note: off-site/on-site ratio {ratio:.3e} exceeds 1e-2");
    }

    // contact limit on the isotropic pair, r0 = a/1000
    let a = -0.00736;
    let contact = RelativeMotionProblem::new(Some(InteractionPotential::Contact(ContactInteraction::new(a).unwrap())));
    let short = RelativeMotionProblem::new(Some(InteractionPotential::JostKohnNegative(
        JostKohnNegative::new(a, 0.001).unwrap(),
    )));
    let uc = onsite_U_from_pair(
        &solve_relative_ground(&contact).unwrap(),
        &contact,
        UDefinition::EnergyShift,
    );
    let us = onsite_U_from_pair(
        &solve_relative_ground(&short).unwrap(),
        &short,
        UDefinition::EnergyShift,
    );
    if (us / uc - 1.0).abs() >= 0.1 {
        failures.push(format!("U_JK/U_contact = {:.4}", us / uc));
    }
    let detail = if failures.is_empty() {
        format!(
            "MC within {sigmas:.2}σ, max(|U_i|,|I|,|K|)/|U| = {ratio:.2e}, U_JK/U_contact = {:.4}",
            us / uc
        )
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn dvr_routes() -> Outcome {
    let well = DoubleWell::from_barrier(10.0).unwrap();
    let grid = Grid1D::default_for(&well);
    let a = solve_doublet(&grid, &well, 2).unwrap();
    let b = solve_doublet(&grid.refined(), &well, 2).unwrap();
    let rel = (a.j / a.j_from_gap() - 1.0).abs();
    let drift = (0..2)
        .map(|k| (a.energies[k] - b.energies[k]).abs())
        .fold(0.0, f64::max);
    outcome(
        rel < 1e-6 && drift < 1e-8,
        format!("J routes differ by {rel:.2e} relative, grid-doubling drift {drift:.2e}"),
    )
}

fn frequency_content() -> Outcome {
    let times = time_grid(DEFAULT_T_MAX, DEFAULT_STEP).unwrap();
    let spectrum = |u: f64| {
        let c = DerivedCouplings::new(&HubbardParameters::new(1.0, u, 0.0, 0.0, 0.0));
        let p: Vec<f64> = times.iter().map(|&t| tunneling_probabilities(&c, t).p_pair).collect();
        (c, power_spectrum(&p, DEFAULT_STEP).unwrap())
    };
    let (_, free) = spectrum(0.0);
    let free_ok = [1.0 / PI, 2.0 / PI].iter().all(|&f| free.has_peak_near(f, 2, 0.01));
    let (c, strong) = spectrum(10.0);
    let at_u = strong.fraction_near(c.u_minus / (2.0 * PI), 2);
    let top = strong.frequency(strong.peaks(0.0)[0]);
    let strong_ok = at_u > 0.9;
    let detail = format!(
        "U = 0 peaks at J/π, 2J/π: {}; U = 10J power near U_−/2π = {:.2}%, dominant peak at {top:.4} (U_−/2π = {:.4}, (Ω−U_−)/4π = {:.4})",
        if free_ok { "yes" } else { "no" },
        100.0 * at_u,
        c.u_minus / (2.0 * PI),
        (c.omega - c.u_minus) / (4.0 * PI)
    );
    outcome(free_ok && strong_ok, detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 spectrum identity", spectrum_identity),
        ("2 dynamics identity", dynamics_identity),
        ("3 boson-fermion coincidence", statistical_coincidence),
        ("4 limits", limits_suite),
        ("5 entropies", entropy_suite),
        ("6 Q parameters", q_suite),
        ("7 scattering verification", scattering_verification),
        ("8 pair solver oracle", pair_solver_oracle),
        ("9 integral consistency", integral_consistency),
        ("10 DVR", dvr_routes),
        ("11 frequency content", frequency_content),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("criterion 12 (reproducibility) is checked by the command-line acceptance target");
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
