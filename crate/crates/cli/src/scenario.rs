//! Turning a validated scenario into tables.

use std::path::{Path, PathBuf};

use cl_momentum::oracle::{evolve_grid, linf, packet_span, SliceGrid};
use cl_momentum::{
    attenuation, cat_decoherence_function, cat_density, cat_phase, classical_trajectory,
    coherence_length, cross_term_ansatz, detection_ratio, eval_rho, gamma12, joint_density,
    marginal_current, marginal_density, momentum_width, overlap_s, pair_normalization, purity,
    single_packet_ansatz, EnvironmentParams, GaussianPacketSpec, LinearPotential,
    TwoParticleState,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{Mode, Scenario, Subject};
use crate::table::{Cell, Table};
use crate::CliError;

/// Tables and manifest produced by one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub manifest: Value,
    /// Name of the manifest file inside the output directory.
    pub manifest_name: String,
    pub warnings: Vec<String>,
}

impl RunOutput {
    /// Writes every table and the manifest into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut written = Vec::new();
        for t in &self.tables {
            written.push(t.write_to(dir)?);
        }
        let path = dir.join(&self.manifest_name);
        let mut text = serde_json::to_string_pretty(&self.manifest).expect("manifest is plain JSON");
        text.push('\n');
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
        Ok(written)
    }
}

pub(crate) fn env_params(table: Table, env: &EnvironmentParams, pot: &LinearPotential) -> Table {
    table
        .param("gamma", env.gamma())
        .param("kBT", env.kbt())
        .param("m", env.mass())
        .param("hbar", env.hbar())
        .param("D", env.diffusion())
        .param("g", pot.g)
}

fn packet_params(table: Table, prefix: &str, spec: &GaussianPacketSpec) -> Table {
    table
        .param(&format!("{prefix}x0"), spec.x0)
        .param(&format!("{prefix}p0"), spec.p0)
        .param(&format!("{prefix}sigma0"), spec.sigma0)
        .param(&format!("{prefix}eta"), spec.eta)
}

fn pair_params(table: Table, state: &TwoParticleState) -> Table {
    table
        .param("p0", state.phi().p0)
        .param("sigma0", state.phi().sigma0)
        .param("q0", state.chi().p0)
        .param("delta0", state.chi().sigma0)
}

/// Warnings for parameters outside the high-temperature regime of the
/// master equation.
pub fn regime_warnings(env: &EnvironmentParams, packets: &[GaussianPacketSpec]) -> Vec<String> {
    let mut out = Vec::new();
    let hbar = env.hbar();
    if env.gamma() > 0.0 && env.kbt() <= hbar * env.gamma() {
        out.push(format!(
            "kBT = {} is not large compared with hbar*gamma = {}; the master equation assumes high temperature",
            env.kbt(),
            hbar * env.gamma()
        ));
    }
    for spec in packets {
        let threshold = hbar * hbar / (4.0 * env.mass() * spec.sigma0.powi(2) * (1.0 + spec.eta * spec.eta));
        if env.gamma() > 0.0 && env.kbt() < threshold {
            out.push(format!(
                "kBT = {} is below hbar^2/(4 m sigma0^2 (1+eta^2)) = {threshold}; purity initially grows above 1 (low-temperature artifact)",
                env.kbt()
            ));
        }
    }
    out.dedup();
    out
}

fn packets_of(subject: &Subject) -> Vec<GaussianPacketSpec> {
    match subject {
        Subject::Packet(p) => vec![*p],
        Subject::Cat(c) => vec![c.upper(), c.lower()],
        Subject::Pair { states, .. } => vec![*states[0].phi(), *states[0].chi()],
    }
}

fn packet_tables(s: &Scenario, spec: &GaussianPacketSpec) -> Result<Vec<Table>, CliError> {
    let (env, pot) = (&s.env, &s.potential);
    let base = |name, cols: &[&str]| packet_params(env_params(Table::new(name, cols), env, pot), "", spec);
    let mut density = base("density.csv", &["t", "p", "P", "J"]);
    let mut scalars = base("scalars.csv", &["t", "x_t", "p_t", "width", "purity", "coherence_length"]);
    for &t in &s.times {
        for &p in &s.momenta {
            density.push(vec![
                t.into(),
                p.into(),
                marginal_density(t, spec, env, pot, p).into(),
                marginal_current(t, spec, env, pot, p).into(),
            ]);
        }
        let an = single_packet_ansatz(t, spec, env, pot);
        let traj = classical_trajectory(t, spec, env, pot);
        scalars.push(vec![
            t.into(),
            traj.x.into(),
            traj.p.into(),
            momentum_width(t, spec, env).into(),
            purity(&an)?.into(),
            coherence_length(&an)?.into(),
        ]);
    }
    Ok(vec![density, scalars])
}

fn cat_tables(s: &Scenario, cat: &cl_momentum::CatStateSpec) -> Result<Vec<Table>, CliError> {
    let (env, pot) = (&s.env, &s.potential);
    let base = |name: &str, cols: &[&str]| {
        env_params(Table::new(name, cols), env, pot)
            .param("p0", cat.p0)
            .param("sigma0", cat.sigma0)
            .param("eta", cat.eta)
    };
    let upper = cat.upper();
    let mut density = base("density.csv", &["t", "p", "P", "Theta"]);
    let mut deco = base("decoherence.csv", &["t", "Gamma", "attenuation"]);
    for &t in &s.times {
        for &p in &s.momenta {
            density.push(vec![
                t.into(),
                p.into(),
                cat_density(t, cat, env, pot, p).into(),
                cat_phase(t, p, cat.p0, &upper, env, pot).into(),
            ]);
        }
        let g = cat_decoherence_function(t, cat.p0, &upper, env);
        deco.push(vec![t.into(), g.into(), attenuation(g).into()]);
    }
    let mut tables = vec![density, deco];
    if let Some((u, v)) = &s.map {
        let grid = cl_momentum::MapGrid { u: u.clone(), v: v.clone() };
        for (i, &t) in s.times.iter().enumerate() {
            let values = cl_momentum::cat_density_matrix_map(t, cat, env, pot, &grid)?;
            tables.push(map_table(&format!("map_{i:03}.csv"), base, t, &grid, &values));
        }
    }
    Ok(tables)
}

pub(crate) fn map_table<F>(name: &str, base: F, t: f64, grid: &cl_momentum::MapGrid, values: &[f64]) -> Table
where
    F: Fn(&str, &[&str]) -> Table,
{
    let mut table = base(name, &["u", "v", "abs_rho"]).param("t", t);
    for (iv, &v) in grid.v.iter().enumerate() {
        for (iu, &u) in grid.u.iter().enumerate() {
            table.push(vec![u.into(), v.into(), values[iv * grid.u.len() + iu].into()]);
        }
    }
    table
}

fn pair_tables(
    s: &Scenario,
    states: &[TwoParticleState],
    p1: f64,
    window: Option<&cl_momentum::DetectorWindow>,
) -> Result<Vec<Table>, CliError> {
    let (env, pot) = (&s.env, &s.potential);
    let base = |name: &str, cols: &[&str]| pair_params(env_params(Table::new(name, cols), env, pot), &states[0]);
    let mut single = base("single.csv", &["t", "flavor", "p", "P"]);
    let mut joint = base("joint.csv", &["t", "flavor", "p1", "p2", "P"]).param("p1", p1);
    let mut scalars = base("pair.csv", &["t", "flavor", "N", "s", "Gamma12"]);
    let mut detection = window.map(|w| {
        base("detection.csv", &["t", "flavor", "ratio"])
            .param("window_center", w.center)
            .param("window_width", w.width)
    });
    for &t in &s.times {
        for state in states {
            let name = state.flavor().short_name();
            for &p in &s.momenta {
                single.push(vec![
                    t.into(),
                    name.into(),
                    p.into(),
                    cl_momentum::single_particle_density(t, state, env, pot, p).into(),
                ]);
            }
            for &p2 in &s.momenta {
                joint.push(vec![
                    t.into(),
                    name.into(),
                    p1.into(),
                    p2.into(),
                    joint_density(t, state, env, pot, p1, p2).into(),
                ]);
            }
            let g12 = match gamma12(t, state, env) {
                Ok(g) => g,
                // unequal widths: the ratio is p-dependent, report it at the cross-density centre
                Err(_) => cl_momentum::identical::gamma12_profile(t, state, env, pot, &[]).at_centre,
            };
            scalars.push(vec![
                t.into(),
                name.into(),
                pair_normalization(state, env.hbar()).into(),
                overlap_s(state, env.hbar()).into(),
                g12.into(),
            ]);
            if let (Some(table), Some(w)) = (detection.as_mut(), window) {
                table.push(vec![t.into(), name.into(), detection_ratio(t, state, env, pot, w)?.into()]);
            }
        }
    }
    let mut tables = vec![single, joint, scalars];
    tables.extend(detection);
    Ok(tables)
}

type Exact<'a> = Box<dyn Fn(f64, f64, f64) -> Complex64 + Sync + 'a>;

/// Terms evolved by the oracle for the scenario subject.
fn oracle_terms<'a>(s: &'a Scenario) -> Result<Vec<(String, Exact<'a>)>, CliError> {
    let (env, pot) = (&s.env, &s.potential);
    let single = move |spec: GaussianPacketSpec| -> Exact<'a> {
        Box::new(move |t, u, v| eval_rho(&single_packet_ansatz(t, &spec, env, pot), u, v))
    };
    let mut out: Vec<(String, Exact<'a>)> = Vec::new();
    match &s.subject {
        Subject::Packet(p) => out.push(("packet".into(), single(*p))),
        Subject::Cat(c) => {
            let (a, b) = (c.upper(), c.lower());
            cross_term_ansatz(0.0, &a, &b, env, pot)?;
            out.push((
                "cross".into(),
                Box::new(move |t, u, v| eval_rho(&cross_term_ansatz(t, &a, &b, env, pot).unwrap(), u, v)),
            ));
            let cat = *c;
            out.push((
                "cat".into(),
                Box::new(move |t, u, v| cat.superposition().terms(t, env, pot).rho(u, v)),
            ));
        }
        Subject::Pair { states, .. } => {
            let (phi, chi) = (*states[0].phi(), *states[0].chi());
            out.push(("phi".into(), single(phi)));
            out.push(("chi".into(), single(chi)));
            if cross_term_ansatz(0.0, &phi, &chi, env, pot).is_ok() {
                out.push((
                    "phi-chi".into(),
                    Box::new(move |t, u, v| eval_rho(&cross_term_ansatz(t, &phi, &chi, env, pot).unwrap(), u, v)),
                ));
            }
        }
    }
    Ok(out)
}

fn oracle_grid(s: &Scenario) -> Result<SliceGrid, CliError> {
    let t_max = s.times.last().copied().unwrap_or(0.0);
    let (lo, hi) = packet_span(&packets_of(&s.subject), &s.env, &s.potential, t_max, 12.0);
    let mut grid = SliceGrid::covering(lo, hi, 0.0);
    if let Some(n) = s.oracle.n_u {
        grid = SliceGrid::new(grid.u_min, grid.u_max, n, 0.0, grid.dt)?;
    }
    if let Some(dt) = s.oracle.dt {
        grid.dt = dt;
    }
    Ok(grid)
}

fn oracle_tables(s: &Scenario) -> Result<Vec<Table>, CliError> {
    let grid = oracle_grid(s)?;
    let u = grid.u();
    let mut table = env_params(Table::new("oracle_report.csv", &["term", "v", "t", "linf"]), &s.env, &s.potential)
        .param("u_min", grid.u_min)
        .param("u_max", grid.u_max)
        .param("n_u", grid.n_u)
        .param("dt", grid.dt);
    for spec in packets_of(&s.subject) {
        table = packet_params(table, "", &spec);
    }
    for (name, exact) in oracle_terms(s)? {
        let sample = |t: f64| -> Vec<Vec<Complex64>> {
            s.oracle.v.iter().map(|&v| u.iter().map(|&x| exact(t, x, v)).collect()).collect()
        };
        let mut rows = sample(0.0);
        let mut now = 0.0;
        for &t in &s.times {
            rows = evolve_grid(&rows, &s.oracle.v, &grid, &s.env, &s.potential, t - now)?.values;
            now = t;
            let want = sample(t);
            for (iv, &v) in s.oracle.v.iter().enumerate() {
                table.push(vec![
                    Cell::Text(name.clone()),
                    v.into(),
                    t.into(),
                    linf(&rows[iv], &want[iv]).into(),
                ]);
            }
        }
    }
    Ok(vec![table])
}

/// Runs a validated scenario.
pub fn run_scenario(s: &Scenario) -> Result<RunOutput, CliError> {
    let tables = match (s.mode, &s.subject) {
        (Mode::OracleCheck, _) => oracle_tables(s)?,
        (_, Subject::Packet(p)) => packet_tables(s, p)?,
        (_, Subject::Cat(c)) => cat_tables(s, c)?,
        (_, Subject::Pair { states, p1, window }) => pair_tables(s, states, *p1, window.as_ref())?,
    };
    let manifest = json!({
        "tool": "clmom",
        "version": cl_momentum::VERSION,
        "mode": s.mode.name(),
        "scenario": serde_json::to_value(&s.raw).expect("scenario is plain data"),
        "resolved": {
            "gamma": s.env.gamma(),
            "kBT": s.env.kbt(),
            "mass": s.env.mass(),
            "hbar": s.env.hbar(),
            "D": s.env.diffusion(),
            "g": s.potential.g,
            "times": s.times,
            "momenta": s.momenta,
        },
        "files": tables.iter().map(|t| t.name.clone()).collect::<Vec<_>>(),
    });
    Ok(RunOutput {
        tables,
        manifest,
        manifest_name: "manifest.json".into(),
        warnings: regime_warnings(&s.env, &packets_of(&s.subject)),
    })
}
