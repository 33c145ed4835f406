//! Built-in runs reproducing the figure data.

use crate::Command;

pub struct PresetRun {
    pub tag: Option<String>,
    pub config: String,
}

pub struct Preset {
    pub name: &'static str,
    pub command: Command,
    pub about: &'static str,
    pub runs: Vec<PresetRun>,
}

pub const NAMES: [&str; 15] = [
    "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig5d", "fig5e", "fig5f", "fig6", "fig7", "fig8", "fig9",
    "fig10", "trap",
];

// ω_z = 2π×1 kHz, ω_ρ = 100 ω_z, η chosen so that J ≈ 150 Hz
const LITHIUM_TRAP: &str = r#"
[trap]
species = "Li6"
omega_z = { value = 1000.0, unit = "Hz" }
omega_rho = { value = 100000.0, unit = "Hz" }
eta = { value = 1.62, unit = "a_z" }
"#;

fn run(tag: Option<String>, config: String) -> PresetRun {
    PresetRun { tag, config }
}

fn single(config: String) -> Vec<PresetRun> {
    vec![run(None, config)]
}

fn model(u: f64, u_i: f64, i: f64, k: f64) -> String {
    format!("[model]\nU = {{ value = {u:?}, unit = \"J\" }}\nu_i_per_u = {u_i:?}\ni_per_u = {i:?}\nk_per_u = {k:?}\n")
}

fn dynamics(init: &str, t_max: f64, dt: f64) -> String {
    format!(
        "[dynamics]\ninit = \"{init}\"\nt_max = {{ value = {t_max:?}, unit = \"J\" }}\ndt = {{ value = {dt:?}, unit = \"J\" }}\n"
    )
}

fn sweep(variable: &str, start: f64, stop: f64, step: f64) -> String {
    format!("[sweep]\nvariable = \"{variable}\"\nstart = {start:?}\nstop = {stop:?}\nstep = {step:?}\n")
}

fn fig5(u: f64, strong: bool) -> Vec<PresetRun> {
    let m = if strong {
        model(u, 0.1, -0.5, 0.1)
    } else {
        model(u, 1.0 / 600.0, -1.0 / 50.0, 1.0 / 600.0)
    };
    single(format!(
        "{m}statistics = \"fermion\"\n{}",
        dynamics("same-site", 100.0, 0.01)
    ))
}

fn inits() -> [(&'static str, &'static str); 2] {
    [("same-site", "same"), ("split", "split")]
}

fn u_tag(u: f64) -> String {
    format!("U{}", u.to_string().replace('.', "p"))
}

pub fn preset(name: &str) -> Option<Preset> {
    let (command, about, runs) = match name {
        "trap" => (
            Command::Trap,
            "lithium double well used by the interaction presets",
            single(LITHIUM_TRAP.to_string()),
        ),
        "fig2" => (
            Command::Pair,
            "on-site U of an isotropic pair versus barrier height, contact and finite range",
            single(format!(
                r#"
[trap]
species = "Li6"
omega_z = {{ value = 1000.0, unit = "Hz" }}
eta = {{ value = 3.0, unit = "a_z" }}

[potential]
kind = "jost-kohn"
a_s = {{ value = -9.54, unit = "nm" }}
r0 = {{ value = 1.66, unit = "nm" }}

{}"#,
                sweep("V0/hbar_omega_z", 0.25, 10.0, 0.25)
            )),
        ),
        "fig3" => {
            let mut runs = Vec::new();
            for (tag, range) in [("pos", (0.1, 1.0)), ("neg", (-1.0, -0.1))] {
                for r0 in [0.005, 0.01, 0.02] {
                    let cfg = format!(
                        "{LITHIUM_TRAP}\n[potential]\nkind = \"jost-kohn\"\nr0 = {{ value = {r0:?}, unit = \"a_z\" }}\nkappa_a_z = 50000.0\n\n{}",
                        sweep("a_s/a_z", range.0, range.1, 0.1)
                    );
                    runs.push(run(Some(format!("{tag}-r0-{r0}")), cfg));
                }
            }
            (
                Command::Params,
                "Hubbard-approximation U, U_i, I, K versus scattering length",
                runs,
            )
        }
        "fig4" => (
            Command::Spectrum,
            "two-particle eigenenergies versus U/J",
            ["fermion", "boson"]
                .iter()
                .map(|m| {
                    run(
                        Some(m.to_string()),
                        format!("[model]\nstatistics = \"{m}\"\n\n{}", sweep("U/J", -20.0, 20.0, 0.1)),
                    )
                })
                .collect(),
        ),
        "fig5a" => (
            Command::Dynamics,
            "pair tunneling, U = 0.1 J, lithium ratios",
            fig5(0.1, false),
        ),
        "fig5b" => (
            Command::Dynamics,
            "pair tunneling, U = J, lithium ratios",
            fig5(1.0, false),
        ),
        "fig5c" => (
            Command::Dynamics,
            "pair tunneling, U = 10 J, lithium ratios",
            fig5(10.0, false),
        ),
        "fig5d" => (
            Command::Dynamics,
            "pair tunneling, U = 0.1 J, large off-site terms",
            fig5(0.1, true),
        ),
        "fig5e" => (
            Command::Dynamics,
            "pair tunneling, U = J, large off-site terms",
            fig5(1.0, true),
        ),
        "fig5f" => (
            Command::Dynamics,
            "pair tunneling, U = 10 J, large off-site terms",
            fig5(10.0, true),
        ),
        "fig6" => (
            Command::Dynamics,
            "time-averaged tunneling probabilities versus U/J",
            single(format!(
                "[model]\nstatistics = \"fermion\"\n\n{}\n{}",
                dynamics("same-site", 100.0, 0.002),
                sweep("U/J", -20.0, 20.0, 0.5)
            )),
        ),
        "fig7" => (
            Command::Entropy,
            "spatial entropy of eigenstates a and c versus U/J",
            single(sweep("U/J", -20.0, 20.0, 0.1)),
        ),
        "fig8" => {
            let mut runs = Vec::new();
            for (init, it) in inits() {
                for u in [0.0, 1.0, 10.0] {
                    let cfg = format!(
                        "{}\n{}",
                        model(u, 1.0 / 600.0, -1.0 / 50.0, 1.0 / 600.0),
                        dynamics(init, 20.0, 0.01)
                    );
                    runs.push(run(Some(format!("{it}-{}", u_tag(u))), cfg));
                }
            }
            (Command::Entropy, "spatial entropy versus time", runs)
        }
        "fig9" => {
            let mut runs = Vec::new();
            for (init, it) in inits() {
                for u in [0.1, 1.0, 10.0] {
                    let cfg = format!("{}\n{}", model(u, 0.0, 0.0, 0.0), dynamics(init, 20.0, 0.01));
                    runs.push(run(Some(format!("{it}-{}", u_tag(u))), cfg));
                }
            }
            (Command::Entropy, "single-particle entanglement versus time", runs)
        }
        "fig10" => {
            let mut runs = Vec::new();
            for stat in ["fermion", "boson"] {
                for (init, it) in inits() {
                    for u in [0.0, 1500.0] {
                        let cfg = format!(
                            "{LITHIUM_TRAP}\n[potential]\nkind = \"jost-kohn\"\na_s = {{ value = 52.9, unit = \"nm\" }}\nr0 = {{ value = 1.66, unit = \"nm\" }}\nkappa_a_z = 50000.0\n\n[model]\nstatistics = \"{stat}\"\nJ = {{ value = 150.0, unit = \"Hz\" }}\nU = {{ value = {u:?}, unit = \"Hz\" }}\n\n{}",
                            dynamics(init, 20.0, 0.01)
                        );
                        runs.push(run(Some(format!("{stat}-{it}-{}", u_tag(u / 150.0))), cfg));
                    }
                }
            }
            (Command::Entropy, "Q parameters versus time", runs)
        }
        _ => return None,
    };
    let name = NAMES.iter().find(|n| **n == name)?;
    Some(Preset {
        name,
        command,
        about,
        runs,
    })
}
