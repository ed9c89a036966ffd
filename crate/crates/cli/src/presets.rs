//! Parameter sets of the six reference figures, in units with `m = ħ = 1`.

use cl_momentum::quad::linspace;
use cl_momentum::{
    cat_decoherence_function, cat_density_matrix_map, detection_ratio, joint_density, purity,
    single_packet_ansatz, single_particle_density, CatStateSpec, DetectorWindow,
    EnvironmentParams, GaussianPacketSpec, LinearPotential, MapGrid, StatisticsFlavor,
    TwoParticleState,
};
use serde_json::json;

use crate::scenario::{env_params, map_table, RunOutput};
use crate::table::Table;
use crate::CliError;

pub const FIGURE_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

fn env(gamma: f64, kbt: f64) -> EnvironmentParams {
    EnvironmentParams::natural(gamma, kbt).expect("preset parameters are valid")
}

/// Packets with opposite kicks shared by the two-particle figures.
fn kicked_pair(flavor: StatisticsFlavor) -> TwoParticleState {
    TwoParticleState::new(
        GaussianPacketSpec::minimal(-0.3, 2.0).unwrap(),
        GaussianPacketSpec::minimal(0.3, 2.0).unwrap(),
        flavor,
    )
    .expect("preset pair is valid")
}

fn pair_table(name: &str, cols: &[&str], e: &EnvironmentParams) -> Table {
    env_params(Table::new(name, cols), e, &LinearPotential::free())
        .param("p0", -0.3)
        .param("q0", 0.3)
        .param("sigma0", 2.0)
        .param("delta0", 2.0)
}

fn fig1() -> Result<Vec<Table>, CliError> {
    let times = linspace(0.0, 200.0, 401);
    let mut table = Table::new("fig1_purity.csv", &["panel", "gamma", "kBT", "eta", "t", "xi"])
        .param("sigma0", 5.0)
        .param("kBT", 2.0)
        .param("m", 1.0)
        .param("hbar", 1.0);
    let curves = [("gamma", 0.01, 0.0), ("gamma", 0.05, 0.0), ("gamma", 0.2, 0.0)]
        .into_iter()
        .chain([0.0, 1.0, 2.0].map(|eta| ("eta", 0.005, eta)));
    for (panel, gamma, eta) in curves {
        let e = env(gamma, 2.0);
        let spec = GaussianPacketSpec::new(0.0, 0.0, 5.0, eta)?;
        for &t in &times {
            let xi = purity(&single_packet_ansatz(t, &spec, &e, &LinearPotential::free()))?;
            table.push(vec![panel.into(), gamma.into(), 2.0.into(), eta.into(), t.into(), xi.into()]);
        }
    }
    Ok(vec![table])
}

fn fig2() -> Result<Vec<Table>, CliError> {
    let times = linspace(0.0, 100.0, 401);
    let spec = GaussianPacketSpec::minimal(-1.0, 5.0)?;
    let mut table = Table::new("fig2_decoherence.csv", &["panel", "t", "gamma", "kBT", "Gamma"])
        .param("sigma0", 5.0)
        .param("p0", -1.0)
        .param("eta", 0.0)
        .param("m", 1.0)
        .param("hbar", 1.0);
    let curves = [0.005, 0.01, 0.015, 0.05]
        .map(|g| ("kBT", g, 2.0))
        .into_iter()
        .chain([2.0, 3.0, 5.0].map(|k| ("gamma", 0.005, k)));
    for (panel, gamma, kbt) in curves {
        let e = env(gamma, kbt);
        for &t in &times {
            let g = cat_decoherence_function(t, -1.0, &spec, &e);
            table.push(vec![panel.into(), t.into(), gamma.into(), kbt.into(), g.into()]);
        }
    }
    Ok(vec![table])
}

fn fig3() -> Result<Vec<Table>, CliError> {
    let e = env(0.005, 2.0);
    let pot = LinearPotential::free();
    let cat = CatStateSpec::new(1.0, 5.0, 0.0)?;
    let grid = MapGrid::default();
    let base = |name: &str, cols: &[&str]| {
        env_params(Table::new(name, cols), &e, &pot)
            .param("p0", 1.0)
            .param("sigma0", 5.0)
            .param("eta", 0.0)
    };
    [0.0, 2.0, 5.0, 8.0]
        .into_iter()
        .map(|t| {
            let values = cat_density_matrix_map(t, &cat, &e, &pot, &grid)?;
            Ok(map_table(&format!("fig3_map_t{t}.csv"), base, t, &grid, &values))
        })
        .collect()
}

fn fig4() -> Result<Vec<Table>, CliError> {
    let e = env(0.005, 5.0);
    let pot = LinearPotential::free();
    let mut table = pair_table("fig4_joint.csv", &["t", "flavor", "p1", "p2", "P"], &e).param("p1", 0.0);
    for t in [0.0, 1.0, 2.0, 5.0] {
        for flavor in StatisticsFlavor::ALL {
            let state = kicked_pair(flavor);
            for p2 in linspace(-2.0, 2.0, 401) {
                let p = joint_density(t, &state, &e, &pot, 0.0, p2);
                table.push(vec![t.into(), flavor.short_name().into(), 0.0.into(), p2.into(), p.into()]);
            }
        }
    }
    Ok(vec![table])
}

fn fig5() -> Result<Vec<Table>, CliError> {
    let e = env(0.005, 5.0);
    let pot = LinearPotential::free();
    let mut table = pair_table("fig5_single.csv", &["t", "flavor", "p", "P"], &e);
    for t in [0.0, 2.0, 3.0, 10.0] {
        for flavor in StatisticsFlavor::ALL {
            let state = kicked_pair(flavor);
            for p in linspace(-2.0, 2.0, 401) {
                let value = single_particle_density(t, &state, &e, &pot, p);
                table.push(vec![t.into(), flavor.short_name().into(), p.into(), value.into()]);
            }
        }
    }
    Ok(vec![table])
}

fn fig6() -> Result<Vec<Table>, CliError> {
    let e = env(0.005, 5.0);
    let pot = LinearPotential::free();
    let window = DetectorWindow::new(0.0, 2.0)?;
    let bosons = kicked_pair(StatisticsFlavor::BoseEinstein);
    let fermions = kicked_pair(StatisticsFlavor::FermiDirac);
    let mut table = pair_table("fig6_detection.csv", &["t", "p_plus", "p_minus"], &e)
        .param("window_center", 0.0)
        .param("window_width", 2.0);
    for t in linspace(0.0, 50.0, 501) {
        let plus = detection_ratio(t, &bosons, &e, &pot, &window)?;
        let minus = detection_ratio(t, &fermions, &e, &pot, &window)?;
        table.push(vec![t.into(), plus.into(), minus.into()]);
    }
    Ok(vec![table])
}

/// Tables for figure `id` (1 to 6) and their manifest.
pub fn figure_preset(id: u8) -> Result<RunOutput, CliError> {
    let tables = match id {
        1 => fig1(),
        2 => fig2(),
        3 => fig3(),
        4 => fig4(),
        5 => fig5(),
        6 => fig6(),
        _ => {
            return Err(CliError::Validation {
                field: "id".into(),
                reason: format!("no figure preset {id}; expected 1 to 6"),
            })
        }
    }?;
    let manifest = json!({
        "tool": "clmom",
        "version": cl_momentum::VERSION,
        "preset": id,
        "files": tables.iter().map(|t| t.name.clone()).collect::<Vec<_>>(),
        "parameters": tables.iter().map(|t| {
            let params: serde_json::Map<String, serde_json::Value> = t
                .params
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            (t.name.clone(), serde_json::Value::Object(params))
        }).collect::<serde_json::Map<_, _>>(),
    });
    Ok(RunOutput {
        tables,
        manifest,
        manifest_name: format!("fig{id}_manifest.json"),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::ParsedTable;

    #[test]
    fn invalid_id() {
        assert_eq!(figure_preset(0).unwrap_err().exit_code(), 1);
        assert!(figure_preset(7).is_err());
    }

    #[test]
    fn fig1_curves_start_pure() {
        let out = figure_preset(1).unwrap();
        let parsed = ParsedTable::parse(&out.tables[0].render()).unwrap();
        let t = parsed.numbers("t").unwrap();
        let xi = parsed.numbers("xi").unwrap();
        let starts: Vec<f64> = t.iter().zip(&xi).filter(|(t, _)| **t == 0.0).map(|(_, x)| *x).collect();
        assert_eq!(starts.len(), 6);
        assert!(starts.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn fig3_blobs_fade() {
        let out = figure_preset(3).unwrap();
        assert_eq!(out.tables.len(), 4);
        let blob = |i: usize| {
            let p = ParsedTable::parse(&out.tables[i].render()).unwrap();
            let v = p.numbers("v").unwrap();
            let a = p.numbers("abs_rho").unwrap();
            v.iter().zip(&a).filter(|(v, _)| v.abs() > 1.5).map(|(_, a)| *a).fold(0.0, f64::max)
        };
        assert!(blob(3) < 1e-2 * blob(0), "{} vs {}", blob(3), blob(0));
    }

    #[test]
    fn fig6_bunching() {
        let out = figure_preset(6).unwrap();
        let p = ParsedTable::parse(&out.tables[0].render()).unwrap();
        let plus = p.numbers("p_plus").unwrap();
        let minus = p.numbers("p_minus").unwrap();
        assert!(plus[0] > 1.0 && minus[0] < 1.0);
        assert!((plus.last().unwrap() - 1.0).abs() < 0.02);
        assert!((minus.last().unwrap() - 1.0).abs() < 0.02);
    }
}
