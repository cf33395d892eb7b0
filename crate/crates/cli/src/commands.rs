//! Command implementations.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use udw_cavity::bec::{excited_population, BECConfig, QuadratureSpec};
use udw_cavity::observables::{averaged_excitation_probability, sweep};
use udw_cavity::series::{fidelity_map, FidelityMode};
use udw_cavity::{
    estimate_cp_from_pav, linspace, observables, proportionality_constant, Error, Observable,
    PhysicsConfig, SpatialProfile, TruncationPolicy, DEFAULT_MODE_CAP,
};

use crate::config::RunConfig;
use crate::failure::{Failure, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_DOMAIN, EXIT_OK};
use crate::output::{emit, emit_report, Column, Emission, Format};

pub struct Ctx<'a> {
    pub run: &'a RunConfig,
    pub cfg: PhysicsConfig,
    pub policy: TruncationPolicy,
    pub outdir: &'a Path,
    pub format: Format,
}

fn exit_for(profiles: &[&SpatialProfile]) -> i32 {
    if profiles.iter().all(|p| p.all_converged()) {
        EXIT_OK
    } else {
        EXIT_CONVERGENCE
    }
}

fn and_flags(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| x && y).collect()
}

pub fn potential(ctx: &Ctx, split: bool) -> Result<i32, Failure> {
    let grid = ctx.run.grid()?;
    let total = sweep(Observable::CasimirPolderEnergy, &grid, &ctx.cfg, &ctx.policy)?;
    let mut columns = vec![
        Column::float("x", grid.clone()),
        Column::float(total.label.clone(), total.values.clone()),
    ];
    let mut converged = total.converged.clone();
    if split {
        let e1 = sweep(Observable::FirstOrderEnergy, &grid, &ctx.cfg, &ctx.policy)?;
        let e2 = sweep(Observable::SecondOrderEnergy, &grid, &ctx.cfg, &ctx.policy)?;
        converged = and_flags(&converged, &and_flags(&e1.converged, &e2.converged));
        columns.push(Column::float(e1.label.clone(), e1.values));
        columns.push(Column::float(e2.label.clone(), e2.values));
    }
    let all = converged.iter().all(|&c| c);
    emit(
        ctx.outdir,
        "potential",
        ctx.format,
        &Emission {
            command: "potential",
            args: json!({ "split": split }),
            config: ctx.run,
            columns,
            converged: Some(converged),
        },
    )?;
    Ok(if all { EXIT_OK } else { EXIT_CONVERGENCE })
}

pub fn excite(ctx: &Ctx, sigma: Option<f64>) -> Result<i32, Failure> {
    let grid = ctx.run.grid()?;
    let obs = match sigma {
        Some(sigma) => Observable::ExcitationProbability { sigma },
        None => Observable::AveragedExcitation,
    };
    let profile = sweep(obs, &grid, &ctx.cfg, &ctx.policy)?;
    let code = exit_for(&[&profile]);
    emit(
        ctx.outdir,
        "excite",
        ctx.format,
        &Emission {
            command: "excite",
            args: json!({ "sigma": sigma }),
            config: ctx.run,
            columns: vec![
                Column::float("x", grid),
                Column::float(profile.label.clone(), profile.values.clone()),
            ],
            converged: Some(profile.converged.clone()),
        },
    )?;
    Ok(code)
}

pub fn force(ctx: &Ctx) -> Result<i32, Failure> {
    let grid = ctx.run.grid()?;
    let interior: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&x| x > 0.0 && x < ctx.cfg.l)
        .collect();
    let dropped = grid.len() - interior.len();
    if dropped > 0 {
        eprintln!(
            "force: dropped {dropped} wall point(s); the force is defined on the open interval (0, L)"
        );
    }
    if interior.is_empty() {
        return Err(Failure::new(
            EXIT_DOMAIN,
            "force: no grid points strictly inside (0, L)",
        ));
    }
    let profile = sweep(Observable::CasimirPolderForce, &interior, &ctx.cfg, &ctx.policy)?;
    let code = exit_for(&[&profile]);
    emit(
        ctx.outdir,
        "force",
        ctx.format,
        &Emission {
            command: "force",
            args: json!({}),
            config: ctx.run,
            columns: vec![
                Column::float("x", interior),
                Column::float(profile.label.clone(), profile.values.clone()),
            ],
            converged: Some(profile.converged.clone()),
        },
    )?;
    Ok(code)
}

pub fn universal(ctx: &Ctx) -> Result<i32, Failure> {
    let grid = ctx.run.grid()?;
    let profile = sweep(Observable::UniversalFunction, &grid, &ctx.cfg, &ctx.policy)?;
    let code = exit_for(&[&profile]);
    emit(
        ctx.outdir,
        "universal",
        ctx.format,
        &Emission {
            command: "universal",
            args: json!({}),
            config: ctx.run,
            columns: vec![
                Column::float("x", grid),
                Column::float(profile.label.clone(), profile.values.clone()),
            ],
            converged: Some(profile.converged.clone()),
        },
    )?;
    Ok(code)
}

#[derive(Serialize)]
struct ProportionalityReport<'a> {
    command: &'a str,
    args: serde_json::Value,
    config: &'a RunConfig,
    constant: f64,
    degenerate: bool,
    grid: Vec<f64>,
    ratio: Vec<f64>,
    deviation: Vec<f64>,
    max_deviation: f64,
    tolerance: f64,
    pass: bool,
    all_converged: bool,
}

pub fn proportionality(ctx: &Ctx, tolerance: f64) -> Result<i32, Failure> {
    let grid = ctx.run.grid()?;
    if grid.iter().any(|&x| x <= 0.0 || x >= ctx.cfg.l) {
        return Err(Failure::new(
            EXIT_DOMAIN,
            "proportionality: grid must lie strictly inside (0, L); the ratio is 0/0 at the walls",
        ));
    }
    let constant = proportionality_constant(&ctx.cfg);
    if constant == 0.0 {
        eprintln!(
            "proportionality: alpha = 1 makes the constant vanish; the check is vacuous"
        );
        let report = ProportionalityReport {
            command: "proportionality",
            args: json!({ "tolerance": tolerance }),
            config: ctx.run,
            constant,
            degenerate: true,
            grid,
            ratio: Vec::new(),
            deviation: Vec::new(),
            max_deviation: 0.0,
            tolerance,
            pass: true,
            all_converged: true,
        };
        emit_report(ctx.outdir, "proportionality", &report)?;
        return Ok(EXIT_OK);
    }

    let ecp = sweep(Observable::CasimirPolderEnergy, &grid, &ctx.cfg, &ctx.policy)?;
    let pav = sweep(Observable::AveragedExcitation, &grid, &ctx.cfg, &ctx.policy)?;
    let ratio: Vec<f64> = ecp
        .values
        .iter()
        .zip(&pav.values)
        .map(|(&e, &p)| e / p)
        .collect();
    let deviation: Vec<f64> = pav
        .values
        .iter()
        .zip(&ecp.values)
        .map(|(&p, &e)| (e / estimate_cp_from_pav(p, &ctx.cfg) - 1.0).abs())
        .collect();
    let max_deviation = deviation.iter().cloned().fold(0.0, f64::max);
    let pass = max_deviation < tolerance;
    let all_converged = ecp.all_converged() && pav.all_converged();
    let report = ProportionalityReport {
        command: "proportionality",
        args: json!({ "tolerance": tolerance }),
        config: ctx.run,
        constant,
        degenerate: false,
        grid,
        ratio,
        deviation,
        max_deviation,
        tolerance,
        pass,
        all_converged,
    };
    emit_report(ctx.outdir, "proportionality", &report)?;
    Ok(if !all_converged {
        EXIT_CONVERGENCE
    } else if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Panel {
    /// Terms of the time-averaged excitation probability.
    Pexc,
    /// Terms of the Casimir-Polder potential (alpha comes from the config).
    Ecp,
}

pub fn fidelity_map_cmd(
    ctx: &Ctx,
    panel: Panel,
    n_max: usize,
    k_max: usize,
    abs_fidelity: bool,
) -> Result<i32, Failure> {
    if n_max < 1 || k_max < 1 {
        return Err(Failure::new(
            EXIT_CONFIG,
            "fidelity-map: --n-max and --k-max must be >= 1",
        ));
    }
    let center = ctx.cfg.l / 2.0;
    let n_axis: Vec<usize> = (1..=n_max).collect();
    let k_axis: Vec<usize> = (1..=k_max).collect();
    let mode = if abs_fidelity {
        FidelityMode::Absolute
    } else {
        FidelityMode::Signed
    };
    let cfg = ctx.cfg;
    let map = match panel {
        Panel::Pexc => fidelity_map(
            |gap, n| observables::pav_term_with_gap(&cfg, center, n, gap),
            &n_axis,
            &k_axis,
            &cfg,
            mode,
        )?,
        Panel::Ecp => fidelity_map(
            |gap, n| observables::cp_term_with_gap(&cfg, center, n, gap),
            &n_axis,
            &k_axis,
            &cfg,
            mode,
        )?,
    };

    // long format: one row per (N, K), N-major
    let cells = n_axis.len() * k_axis.len();
    let mut n_col = Vec::with_capacity(cells);
    let mut k_col = Vec::with_capacity(cells);
    let mut f_col = Vec::with_capacity(cells);
    for (i, &n) in map.n_axis.iter().enumerate() {
        for (j, &k) in map.k_axis.iter().enumerate() {
            n_col.push(n as u64);
            k_col.push(k as u64);
            f_col.push(map.values[i][j]);
        }
    }
    emit(
        ctx.outdir,
        "fidelity_map",
        ctx.format,
        &Emission {
            command: "fidelity-map",
            args: json!({
                "panel": match panel { Panel::Pexc => "pexc", Panel::Ecp => "ecp" },
                "n_max": n_max,
                "k_max": k_max,
                "abs_fidelity": abs_fidelity,
            }),
            config: ctx.run,
            columns: vec![
                Column::int("n", n_col),
                Column::int("k", k_col),
                Column::float("fidelity", f_col),
            ],
            converged: None,
        },
    )?;
    Ok(EXIT_OK)
}

pub fn bec(ctx: &Ctx, radii: &[f64]) -> Result<i32, Failure> {
    let spec = ctx.run.bec()?;
    ctx.run.grid()?; // validates the range; each curve resamples it below
    let grid_spec = ctx.run.grid.expect("grid() checked presence");
    let radii: Vec<f64> = if radii.is_empty() {
        vec![spec.r_tf]
    } else {
        radii.to_vec()
    };
    let quad = QuadratureSpec::default();

    let mut r_col = Vec::new();
    let mut x_col = Vec::new();
    let mut nexc_col = Vec::new();
    let mut pav_col = Vec::new();
    let mut ok_col = Vec::new();
    let mut converged = Vec::new();
    let mut any_support_error = false;

    for &r in &radii {
        let cloud = BECConfig::new(spec.n_atoms, r, ctx.cfg.l / 2.0)?;
        // each curve lives on the admissible centers [R, L - R]; honor the
        // requested range and resolution where they are compatible
        let lo = grid_spec.start.max(r);
        let hi = grid_spec.stop.min(ctx.cfg.l - r);
        if lo >= hi {
            return Err(Failure::new(
                EXIT_DOMAIN,
                format!("bec: no admissible cloud centers for r_tf = {r} within the grid range"),
            ));
        }
        let centers = linspace(lo, hi, grid_spec.points);
        let rows: Vec<(f64, f64, bool, bool)> = centers
            .par_iter()
            .map(|&x0| {
                let reference = averaged_excitation_probability(x0, &ctx.cfg, &ctx.policy)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN);
                match excited_population(x0, &cloud, &ctx.cfg, &ctx.policy, &quad) {
                    Ok(pop) => (pop.value / spec.n_atoms, reference, true, pop.converged),
                    Err(_) => (f64::NAN, reference, false, true),
                }
            })
            .collect();
        for (&x0, (nexc, reference, ok, conv)) in centers.iter().zip(rows) {
            r_col.push(r);
            x_col.push(x0);
            nexc_col.push(nexc);
            pav_col.push(reference);
            ok_col.push(ok);
            converged.push(conv);
            any_support_error |= !ok;
        }
    }

    let all_converged = converged.iter().all(|&c| c);
    emit(
        ctx.outdir,
        "bec",
        ctx.format,
        &Emission {
            command: "bec",
            args: json!({ "r_tf": radii }),
            config: ctx.run,
            columns: vec![
                Column::float("r_tf", r_col),
                Column::float("x0", x_col),
                Column::float("n_exc_over_n", nexc_col),
                Column::float("p_av", pav_col),
                Column::flag("ok", ok_col),
            ],
            converged: Some(converged),
        },
    )?;
    Ok(if any_support_error {
        EXIT_DOMAIN
    } else if !all_converged {
        EXIT_CONVERGENCE
    } else {
        EXIT_OK
    })
}

pub fn oracle(ctx: &Ctx, terms: usize, sigma: Option<f64>) -> Result<i32, Failure> {
    if terms < 1 {
        return Err(Failure::new(EXIT_CONFIG, "oracle: --terms must be >= 1"));
    }
    if terms > DEFAULT_MODE_CAP {
        return Err(Failure::from(Error::ModeCap {
            requested: terms,
            cap: DEFAULT_MODE_CAP,
        }));
    }
    let grid = ctx.run.grid()?;
    let mut observables_list = vec![
        Observable::FirstOrderEnergy,
        Observable::SecondOrderEnergy,
        Observable::CasimirPolderEnergy,
        Observable::AveragedExcitation,
        Observable::UniversalFunction,
        Observable::CasimirPolderForce,
        Observable::LowFreqCasimirPolder,
        Observable::LowFreqAveragedExcitation,
    ];
    if let Some(sigma) = sigma {
        observables_list.push(Observable::ExcitationProbability { sigma });
    }
    let mut columns = vec![Column::float("x", grid.clone())];
    for obs in observables_list {
        let values: Vec<f64> = grid
            .par_iter()
            .map(|&x| obs.evaluate_fixed(x, &ctx.cfg, terms).map_err(|e| e.at(x)))
            .collect::<udw_cavity::Result<_>>()?;
        columns.push(Column::float(obs.label(), values));
    }
    emit(
        ctx.outdir,
        "oracle",
        ctx.format,
        &Emission {
            command: "oracle",
            args: json!({ "terms": terms, "sigma": sigma }),
            config: ctx.run,
            columns,
            converged: None,
        },
    )?;
    Ok(EXIT_OK)
}
