//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use cl_momentum::identical::pair_norm_quadrature;
use cl_momentum::oracle::{
    evolve_grid, evolve_slice, linf, quadrature_purity, sample_ansatz, DensityMap, SliceGrid,
};
use cl_momentum::quad::{linspace, GaussLegendre};
use cl_momentum::{
    cat_decoherence_asymptotics, cat_decoherence_function, cat_phase, coherence_length,
    continuity_residual, cross_current_j12, cross_density_p12, cross_term_ansatz,
    detection_ratio, gamma12, joint_density, momentum_width, overlap_s,
    packet_continuity_residual, pair_normalization, purity, single_packet_ansatz, tau,
    CatStateSpec, DetectorWindow, EnvironmentParams, GaussianAnsatz, GaussianPacketSpec,
    LinearPotential, StatisticsFlavor, TwoParticleState,
};
use cl_momentum_cli::table::ParsedTable;
use num_complex::Complex64;

use StatisticsFlavor::{BoseEinstein as Be, FermiDirac as Fd};

type Outcome = (bool, String);

fn env(gamma: f64, kbt: f64) -> EnvironmentParams {
    EnvironmentParams::natural(gamma, kbt).unwrap()
}

fn pair(p0: f64, q0: f64, sigma0: f64, delta0: f64, flavor: StatisticsFlavor) -> TwoParticleState {
    TwoParticleState::new(
        GaussianPacketSpec::minimal(p0, sigma0).unwrap(),
        GaussianPacketSpec::minimal(q0, delta0).unwrap(),
        flavor,
    )
    .unwrap()
}

fn purity_identity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for gamma in [0.005, 0.01, 0.05, 0.2] {
        let e = env(gamma, 2.0);
        for eta in [0.0, 1.0, 2.0] {
            let spec = GaussianPacketSpec::new(0.0, -1.0, 5.0, eta).unwrap();
            for t in linspace(0.0, 200.0, 400) {
                let an = single_packet_ansatz(t, &spec, &e, &LinearPotential::free());
                let xi = purity(&an).unwrap();
                let ratio = coherence_length(&an).unwrap() / momentum_width(t, &spec, &e);
                worst = worst.max(((xi - ratio) / xi).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-12 && secs < 1.0,
        format!("xi = mu/w: max rel err {worst:.2e} (<= 1e-12) over 4800 samples in {secs:.3} s (< 1 s)"),
    )
}

/// Map of `ρ` wide enough for the quadrature to converge.
fn purity_map(an: &GaussianAnsatz) -> DensityMap {
    let c = an.d02() - an.d11().powi(2) / (4.0 * an.d2);
    let v_half = (40.0 / c).sqrt();
    let u_half = (160.0 * an.d2).sqrt();
    let u = linspace(-an.d10() - u_half, -an.d10() + u_half, 401);
    let v = linspace(-v_half, v_half, 401);
    DensityMap::from_ansatz(an, &u, &v)
}

fn purity_quadrature() -> Outcome {
    let start = Instant::now();
    let e = env(0.05, 2.0);
    let mut worst: f64 = 0.0;
    for eta in [0.0, 2.0] {
        let spec = GaussianPacketSpec::new(0.0, -1.0, 5.0, eta).unwrap();
        for t in [0.0, 1.0, 5.0] {
            let an = single_packet_ansatz(t, &spec, &e, &LinearPotential::free());
            let quad = quadrature_purity(&purity_map(&an)).unwrap();
            let closed = purity(&an).unwrap();
            worst = worst.max(((quad - closed) / closed).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-6 && secs < 30.0,
        format!("closed-form purity vs 2-D quadrature: max rel err {worst:.2e} (<= 1e-6) in {secs:.2} s (< 30 s)"),
    )
}

fn decoherence_asymptote() -> Outcome {
    let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
    let e = env(0.005, 2.0);
    let asym = cat_decoherence_asymptotics(-1.0, &spec, &e).unwrap();
    let late = cat_decoherence_function(100.0, -1.0, &spec, &e);
    let t = 1e-7;
    let slope = cat_decoherence_function(t, -1.0, &spec, &e) / t;
    let slope_err = ((slope + 1.0 / asym.tau_d) * asym.tau_d).abs();
    let ok = asym.gamma_inf == -50.0 && (late - asym.gamma_inf).abs() < 0.1 && slope_err < 1e-4;
    (
        ok,
        format!(
            "Gamma_inf = {} (exactly -50), |Gamma(100) - Gamma_inf| = {:.2e} (< 0.1), slope {slope:.6} vs -1/tau_D = {:.6}, rel {slope_err:.1e} (< 1e-4)",
            asym.gamma_inf,
            (late - asym.gamma_inf).abs(),
            -1.0 / asym.tau_d
        ),
    )
}

fn no_fringes() -> Outcome {
    let spec = GaussianPacketSpec::minimal(1.0, 5.0).unwrap();
    let mut max_slope: f64 = 0.0;
    for (gamma, kbt, g) in [(0.005, 2.0, 0.0), (0.2, 10.0, 0.5), (0.0, 0.0, -1.0), (0.05, 0.1, 3.0)] {
        let e = env(gamma, kbt);
        let pot = LinearPotential::new(g).unwrap();
        for t in [0.0, 1.0, 30.0] {
            let p = linspace(-5.0, 5.0, 201);
            let theta: Vec<f64> = p.iter().map(|&p| cat_phase(t, p, 1.0, &spec, &e, &pot)).collect();
            for w in theta.windows(2) {
                max_slope = max_slope.max(((w[1] - w[0]) / (p[1] - p[0])).abs());
            }
        }
    }
    let stretched = GaussianPacketSpec::new(0.0, 1.0, 5.0, 2.0).unwrap();
    let e = env(0.01, 2.0);
    let pot = LinearPotential::new(0.3).unwrap();
    let mut shift_mismatches = 0;
    let mut compared = 0;
    for t in [0.0, 0.7, 9.0, 60.0] {
        let shift = e.mass() * pot.g * tau(t, &e);
        for p in linspace(-3.0, 3.0, 25) {
            let with = cat_phase(t, p, 1.0, &stretched, &e, &pot);
            let without = cat_phase(t, p + shift, 1.0, &stretched, &e, &LinearPotential::free());
            compared += 1;
            if with != without {
                shift_mismatches += 1;
            }
        }
    }
    (
        max_slope == 0.0 && shift_mismatches == 0,
        format!(
            "eta = 0: max |dTheta/dp| = {max_slope:e} (exactly 0); Theta(p, t; g) = Theta(p + mg tau, t; 0) bit-exact at {}/{compared} points",
            compared - shift_mismatches
        ),
    )
}

fn pair_normalisations() -> Outcome {
    let kicked = (pair(-0.3, 0.3, 2.0, 2.0, Be), pair(-0.3, 0.3, 2.0, 2.0, Fd), 0.636, 0.809);
    let still = (pair(0.0, 0.0, 3.0, 0.1, Be), pair(0.0, 0.0, 3.0, 0.1, Fd), 0.68, 0.73);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut worst_norm: f64 = 0.0;
    for (name, (plus, minus, want_plus, want_minus)) in [("kicked", kicked), ("motionless", still)] {
        let np = pair_normalization(&plus, 1.0);
        let nm = pair_normalization(&minus, 1.0);
        ok &= (np - want_plus).abs() <= 0.01 && (nm - want_minus).abs() <= 0.01;
        parts.push(format!("{name} N+ = {np:.4} ({want_plus}), N- = {nm:.4} ({want_minus})"));
        for s in [&plus, &minus] {
            worst_norm = worst_norm.max((pair_norm_quadrature(s, 1.0).unwrap() - 1.0).abs());
        }
    }
    ok &= worst_norm <= 1e-6;
    parts.push(format!("max |quadrature norm - 1| = {worst_norm:.1e} (<= 1e-6)"));
    (ok, parts.join("; "))
}

fn overlap_constancy() -> Outcome {
    let state = pair(-0.3, 0.3, 2.0, 2.0, Be);
    let rule = GaussLegendre::new(32);
    let pot = LinearPotential::free();
    let mut values = Vec::new();
    for gamma in [0.005, 0.05] {
        for kbt in [2.0, 5.0] {
            let e = env(gamma, kbt);
            for t in [0.0, 1.0, 5.0, 20.0] {
                values.push(rule.composite(|p| cross_density_p12(t, &state, &e, &pot, p), -15.0, 15.0, 60));
            }
        }
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (
        hi - lo < 1e-8,
        format!(
            "integral of P21 = {:.12} (s = {:.12}), spread {:.1e} over 16 (t, gamma, kBT) (< 1e-8)",
            hi,
            overlap_s(&state, 1.0),
            hi - lo
        ),
    )
}

fn statistics_signatures() -> Outcome {
    let e = env(0.005, 5.0);
    let pot = LinearPotential::free();
    let window = DetectorWindow::new(0.0, 2.0).unwrap();
    let bosons = pair(-0.3, 0.3, 2.0, 2.0, Be);
    let fermions = bosons.with_flavor(Fd).unwrap();
    let p_plus = |t| detection_ratio(t, &bosons, &e, &pot, &window).unwrap();
    let p_minus = |t| detection_ratio(t, &fermions, &e, &pot, &window).unwrap();
    let (plus0, minus0) = (p_plus(0.0), p_minus(0.0));
    let t_star = (0..100_000)
        .map(|k| 0.01 * k as f64)
        .find(|&t| gamma12(t, &bosons, &e).unwrap() < -0.7);
    let Some(t_star) = t_star else {
        return (false, "Gamma12 never drops below -0.7".into());
    };
    let (plus_s, minus_s) = (p_plus(t_star), p_minus(t_star));

    let grid = linspace(-3.0, 3.0, 121);
    let node = |e: &EnvironmentParams, t: f64| {
        grid.iter()
            .map(|&p| joint_density(t, &fermions, e, &pot, p, p).abs())
            .fold(0.0, f64::max)
    };
    let at_start = node(&e, 0.0);
    let without_bath = [1.0, 5.0, 50.0].map(|t| node(&env(0.0, 0.0), t)).into_iter().fold(0.0, f64::max);
    let diffusive = node(&e, 5.0);

    let ok = plus0 > 1.0
        && 1.0 > minus0
        && (plus_s - 1.0).abs() < 0.02
        && (minus_s - 1.0).abs() < 0.02
        && at_start <= 1e-14
        && without_bath <= 1e-14;
    (
        ok,
        format!(
            "p+(0) = {plus0:.4} > 1 > p-(0) = {minus0:.4}; t* = {t_star:.2}: p+ = {plus_s:.4}, p- = {minus_s:.4} (within 0.02 of 1); \
             FD diagonal max {at_start:.1e} at t = 0 and {without_bath:.1e} with D = 0 (<= 1e-14); \
             at t = 5 with D = 0.05 it is {diffusive:.2e}, filled in by diffusion"
        ),
    )
}

/// Worst L∞ deviation over t ∈ {1, 2, 5} of the evolved slices.
fn oracle_deviation<F>(initial: &[Vec<Complex64>], v: &[f64], grid: &SliceGrid, e: &EnvironmentParams, exact: F) -> f64
where
    F: Fn(f64) -> DensityMap,
{
    let pot = LinearPotential::free();
    let mut state = initial.to_vec();
    let mut now = 0.0;
    let mut worst: f64 = 0.0;
    for t in [1.0, 2.0, 5.0] {
        state = evolve_grid(&state, v, grid, e, &pot, t - now).unwrap().values;
        now = t;
        let want = exact(t);
        for (row, w) in state.iter().zip(&want.values) {
            worst = worst.max(linf(row, w));
        }
    }
    worst
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let pot = LinearPotential::free();
    let grid = SliceGrid::default_for(0.0);
    let u = grid.u();
    let mut worst = Vec::new();

    let mut packets = Vec::new();
    for gamma in [0.005, 0.01, 0.05, 0.2] {
        for eta in [0.0, 1.0, 2.0] {
            packets.push((GaussianPacketSpec::new(0.0, -1.0, 5.0, eta).unwrap(), env(gamma, 2.0)));
        }
    }
    for kbt in [3.0, 5.0] {
        packets.push((GaussianPacketSpec::minimal(-1.0, 5.0).unwrap(), env(0.005, kbt)));
    }
    packets.push((GaussianPacketSpec::minimal(-0.3, 2.0).unwrap(), env(0.005, 5.0)));
    packets.push((GaussianPacketSpec::minimal(0.3, 2.0).unwrap(), env(0.005, 5.0)));
    let v = [0.0, 0.2];
    let mut packet_worst: f64 = 0.0;
    for (spec, e) in &packets {
        let an = |t| single_packet_ansatz(t, spec, e, &pot);
        let init = DensityMap::from_ansatz(&an(0.0), &u, &v).values;
        packet_worst = packet_worst.max(oracle_deviation(&init, &v, &grid, e, |t| DensityMap::from_ansatz(&an(t), &u, &v)));
    }
    worst.push(("packets", packet_worst));

    let cat_v = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let e = env(0.005, 2.0);
    let cat = CatStateSpec::new(1.0, 5.0, 0.0).unwrap();
    let cross = |t| cross_term_ansatz(t, &cat.upper(), &cat.lower(), &e, &pot).unwrap();
    let init = DensityMap::from_ansatz(&cross(0.0), &u, &cat_v).values;
    worst.push(("cross term", oracle_deviation(&init, &cat_v, &grid, &e, |t| DensityMap::from_ansatz(&cross(t), &u, &cat_v))));
    let terms = |t| cat.superposition().terms(t, &e, &pot);
    let init = DensityMap::from_fn(&u, &cat_v, |u, v| terms(0.0).rho(u, v)).values;
    worst.push((
        "cat",
        oracle_deviation(&init, &cat_v, &grid, &e, |t| {
            let tt = terms(t);
            DensityMap::from_fn(&u, &cat_v, |u, v| tt.rho(u, v))
        }),
    ));

    let e = env(0.005, 5.0);
    let state = pair(-0.3, 0.3, 2.0, 2.0, Be);
    let pair_v = [0.0, 0.5];
    let pair_cross = |t| cross_term_ansatz(t, state.phi(), state.chi(), &e, &pot).unwrap();
    let init = DensityMap::from_ansatz(&pair_cross(0.0), &u, &pair_v).values;
    worst.push((
        "pair cross term",
        oracle_deviation(&init, &pair_v, &grid, &e, |t| DensityMap::from_ansatz(&pair_cross(t), &u, &pair_v)),
    ));

    // refinement on a deliberately coarse grid
    let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
    let e = env(0.005, 2.0);
    let coarse = SliceGrid::new(-8.0, 8.0, 1024, 0.2, 1.6e-3).unwrap();
    let errors: Vec<f64> = [coarse, coarse.refined()]
        .iter()
        .map(|g| {
            let start = sample_ansatz(&single_packet_ansatz(0.0, &spec, &e, &pot), g);
            let end = evolve_slice(&start, g, &e, &pot, 2.0).unwrap();
            linf(&end, &sample_ansatz(&single_packet_ansatz(2.0, &spec, &e, &pot), g))
        })
        .collect();
    let ratio = errors[0] / errors[1];
    let secs = start.elapsed().as_secs_f64();

    let max = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    let ok = max <= 1e-4 && (3.5..4.5).contains(&ratio) && secs < 120.0;
    let listed: Vec<String> = worst.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect();
    (
        ok,
        format!(
            "L-inf to t = 5 on the default grid: {} (<= 1e-4); refinement ratio {ratio:.2} (~4); {secs:.1} s (< 120 s)",
            listed.join(", ")
        ),
    )
}

fn continuity() -> Outcome {
    let ratio_of = |f: &dyn Fn(f64, f64) -> f64, dt: f64, dp: f64| f(dt, dp) / f(0.5 * dt, 0.5 * dp);
    let mut ratios = Vec::new();

    let spec = GaussianPacketSpec::minimal(-1.0, 5.0).unwrap();
    let e = env(0.005, 2.0);
    let pot = LinearPotential::free();
    let grid = linspace(-2.0, 0.0, 101);
    let packet = |dt, dp| packet_continuity_residual(1.0, &spec, &e, &pot, &grid, dt, dp).unwrap();
    ratios.push(("P,J", ratio_of(&packet, 4e-3, 4e-2)));
    let reference = packet(1e-4, 1e-3);

    let state = pair(-0.3, 0.3, 2.0, 2.0, Be);
    let swapped = TwoParticleState::new(*state.chi(), *state.phi(), state.flavor()).unwrap();
    let e = env(0.005, 5.0);
    let grid = linspace(-2.5, 2.5, 101);
    let t = 1.0;
    let p11 = |dt, dp| packet_continuity_residual(t, state.phi(), &e, &pot, &grid, dt, dp).unwrap();
    let p22 = |dt, dp| packet_continuity_residual(t, state.chi(), &e, &pot, &grid, dt, dp).unwrap();
    let p12 = |dt, dp| {
        continuity_residual(
            |t, p| cross_density_p12(t, &state, &e, &pot, p).into(),
            |t, p| cross_current_j12(t, &state, &e, &pot, p).into(),
            t,
            &grid,
            dt,
            dp,
        )
        .unwrap()
    };
    let p21 = |dt, dp| {
        continuity_residual(
            |t, p| Complex64::from(cross_density_p12(t, &swapped, &e, &pot, p)).conj(),
            |t, p| Complex64::from(cross_current_j12(t, &swapped, &e, &pot, p)).conj(),
            t,
            &grid,
            dt,
            dp,
        )
        .unwrap()
    };
    ratios.push(("P11", ratio_of(&p11, 1e-3, 1e-2)));
    ratios.push(("P22", ratio_of(&p22, 1e-3, 1e-2)));
    ratios.push(("P12", ratio_of(&p12, 1e-3, 1e-2)));
    ratios.push(("P21", ratio_of(&p21, 1e-3, 1e-2)));

    let ok = ratios.iter().all(|(_, r)| (3.5..4.5).contains(r));
    let listed: Vec<String> = ratios.iter().map(|(n, r)| format!("{n} {r:.3}")).collect();
    (
        ok,
        format!(
            "residual ratio under step halving: {} (~4, second order); residual at t = 1, dt = 1e-4, dp = 1e-3: {reference:.2e}",
            listed.join(", ")
        ),
    )
}

fn figure_regression() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_clmom"))
            .args(["fig", "all", "--out"])
            .arg(dir.path())
            .output()
            .unwrap()
            .status;
        if !status.success() {
            return (false, format!("clmom fig all exited with {status}"));
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let differing: Vec<_> = names
        .iter()
        .filter(|n| std::fs::read(dirs[0].path().join(n)).ok() != std::fs::read(dirs[1].path().join(n)).ok())
        .collect();

    let text = std::fs::read_to_string(dirs[0].path().join("fig2_decoherence.csv")).unwrap();
    let table = ParsedTable::parse(&text).unwrap();
    let panel = table.column("panel").unwrap();
    let gamma = table.column("gamma").unwrap();
    let kbt = table.column("kBT").unwrap();
    let mut curves: Vec<(String, String, String)> = table
        .rows
        .iter()
        .map(|r| (r[panel].clone(), r[gamma].clone(), r[kbt].clone()))
        .collect();
    curves.dedup();
    let t = table.numbers("t").unwrap();
    let values = table.numbers("Gamma").unwrap();
    let finals: Vec<f64> = (0..t.len())
        .filter(|&i| t[i] == 100.0 && table.rows[i][panel] == "kBT")
        .map(|i| values[i])
        .collect();
    let spread = finals.iter().map(|g| (g + 50.0).abs()).fold(0.0, f64::max);
    let ok = differing.is_empty() && curves.len() == 7 && finals.len() == 4 && spread < 0.5;
    (
        ok,
        format!(
            "{} files byte-identical across two runs ({} differ); fig2 has {} curves; kBT = 2 family at t = 100 within {spread:.2e} of -50 (< 0.5)",
            names.len(),
            differing.len(),
            curves.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("purity identity", purity_identity),
        ("purity quadrature", purity_quadrature),
        ("decoherence asymptote", decoherence_asymptote),
        ("no fringes at eta = 0", no_fringes),
        ("pair normalisations", pair_normalisations),
        ("overlap constancy", overlap_constancy),
        ("statistics signatures", statistics_signatures),
        ("oracle equivalence", oracle_equivalence),
        ("continuity", continuity),
        ("figure regression", figure_regression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!("AC{:<2} {} {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
