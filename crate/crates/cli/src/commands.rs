use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use qslcv::dynamics::{discretized_bath_oracle, markov_trajectory, solve_amplitude, StepSize};
use qslcv::gaussian::CoherentTrajectory;
use qslcv::io::{
    bound_state_row, fmt_num, qsl_row, write_config_comment, write_trajectory_csv,
    BOUND_STATE_HEADER, QSL_HEADER,
};
use qslcv::qsl::{bound_state_report, bound_state_speed, markov_report, qsl_series, QslReport};
use qslcv::spectrum::{asymptotic_amplitude, find_bound_state, numeric_critical_coupling};
use qslcv::{AmplitudeTrajectory64, Complex64, SpectralParams64};
use rayon::prelude::*;

use crate::config::{Model, RunConfig, Step};
use crate::CliError;

/// Output step used wherever an explicit grid is needed but the step is auto.
const FALLBACK_STEP: f64 = 0.01;

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_table(
    path: Option<&Path>,
    cfg: &RunConfig,
    header: &str,
    rows: &[String],
) -> Result<(), CliError> {
    let mut w = open_out(path)?;
    let io_err = |e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e);
    write_config_comment(&mut w, &cfg.pairs()).map_err(io_err)?;
    writeln!(w, "{header}").map_err(io_err)?;
    for r in rows {
        writeln!(w, "{r}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn params(eta: f64, s: f64, omega_c: f64) -> Result<SpectralParams64, CliError> {
    Ok(SpectralParams64::new(eta, s, omega_c)?)
}

fn solver_step(step: Step) -> StepSize<f64> {
    match step {
        Step::Auto => StepSize::Auto,
        Step::Fixed(h) => StepSize::Fixed(h),
    }
}

fn grid_step(step: Step) -> f64 {
    match step {
        Step::Auto => FALLBACK_STEP,
        Step::Fixed(h) => h,
    }
}

/// Cartesian product of the η, s and ω_c axes in that nesting order.
fn parameter_points(cfg: &RunConfig) -> Vec<(f64, f64, f64)> {
    let axis =
        |sw: &Option<crate::config::Sweep>, v: f64| sw.map_or_else(|| vec![v], |s| s.values());
    let (etas, ss, wcs) = (
        axis(&cfg.eta_sweep, cfg.eta),
        axis(&cfg.s_sweep, cfg.s),
        axis(&cfg.omega_c_sweep, cfg.omega_c),
    );
    let mut out = Vec::with_capacity(etas.len() * ss.len() * wcs.len());
    for &e in &etas {
        for &s in &ss {
            for &w in &wcs {
                out.push((e, s, w));
            }
        }
    }
    out
}

fn horizons(cfg: &RunConfig) -> Vec<f64> {
    cfg.tau_sweep.map_or_else(|| vec![cfg.tau], |s| s.values())
}

fn alpha(cfg: &RunConfig) -> Complex64 {
    Complex64::new(cfg.alpha, 0.0)
}

/// Exact-solver reports at each requested horizon, snapped to the solver grid.
fn exact_reports(
    p: &SpectralParams64,
    cfg: &RunConfig,
    taus: &[f64],
) -> Result<Vec<QslReport<f64>>, CliError> {
    let tau_max = taus.iter().cloned().fold(0.0, f64::max);
    let traj = solve_amplitude(p, tau_max, solver_step(cfg.step))?;
    let ct = CoherentTrajectory::new(alpha(cfg), &traj);
    let h = traj.step();
    let last = traj.len() - 1;
    let grid: Vec<f64> = taus
        .iter()
        .map(|&t| traj.times()[((t / h).round() as usize).clamp(1, last)])
        .collect();
    Ok(qsl_series(&ct, &grid)?)
}

fn nan_report(tau: f64) -> QslReport<f64> {
    QslReport {
        tau,
        ell: f64::NAN,
        l_b: f64::NAN,
        v_bar: f64::NAN,
        ratio: f64::NAN,
        v_bar_w: f64::NAN,
        l_w: f64::NAN,
        ratio_w: f64::NAN,
    }
}

fn model_reports(
    p: &SpectralParams64,
    cfg: &RunConfig,
    taus: &[f64],
) -> Result<Vec<QslReport<f64>>, CliError> {
    match cfg.model {
        Model::Exact => exact_reports(p, cfg, taus),
        Model::Markov => taus
            .iter()
            .map(|&t| Ok(markov_report(p, alpha(cfg), t, cfg.shift)?))
            .collect(),
        Model::BoundState => match find_bound_state(p)? {
            None => Ok(taus.iter().map(|&t| nan_report(t)).collect()),
            Some(b) => taus
                .iter()
                .map(|&t| {
                    Ok(bound_state_report(
                        &b,
                        p,
                        alpha(cfg),
                        t,
                        cfg.branch_cut.into(),
                    )?)
                })
                .collect(),
        },
    }
}

pub fn evolve(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg.eta, cfg.s, cfg.omega_c)?;
    let traj: AmplitudeTrajectory64 =
        if cfg.oracle {
            // Bath modes out to 20 ω_c, enough of them to keep recurrences past τ.
            let omega_max = 20.0 * cfg.omega_c;
            let modes = ((omega_max * cfg.tau / PI).ceil() as usize + 1).max(100);
            discretized_bath_oracle(&p, cfg.tau, modes, omega_max, grid_step(cfg.step))?.trajectory
        } else {
            match cfg.model {
                Model::Exact => solve_amplitude(&p, cfg.tau, solver_step(cfg.step))?,
                Model::Markov => markov_trajectory(&p, cfg.tau, grid_step(cfg.step), cfg.shift)?,
                Model::BoundState => return Err(CliError::Usage(
                    "evolve supports --model exact or markov; use qsl for the bound-state model"
                        .into(),
                )),
            }
        };
    let path = cfg.out.as_deref();
    let mut w = open_out(path)?;
    let io_err = |e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e);
    write_config_comment(&mut w, &cfg.pairs()).map_err(io_err)?;
    write_trajectory_csv(&mut w, &traj).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn boundstate(cfg: &RunConfig) -> Result<(), CliError> {
    let with_cut = cfg.branch_cut != crate::config::Cut::Off;
    let rows: Vec<String> = parameter_points(cfg)
        .par_iter()
        .map(|&(eta, s, wc)| {
            let p = params(eta, s, wc)?;
            let b = find_bound_state(&p)?;
            let mut row = bound_state_row(eta, s, wc, b.as_ref());
            if with_cut {
                let u = asymptotic_amplitude(b.as_ref(), &p, cfg.tau, cfg.branch_cut.into())?;
                row.push_str(&format!(
                    ",{},{},{}",
                    fmt_num(u.re),
                    fmt_num(u.im),
                    fmt_num(u.norm())
                ));
            }
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;
    let header = if with_cut {
        format!("{BOUND_STATE_HEADER},re_u_tau,im_u_tau,abs_u_tau")
    } else {
        BOUND_STATE_HEADER.to_string()
    };
    write_table(cfg.out.as_deref(), cfg, &header, &rows)
}

fn qsl_rows(
    cfg: &RunConfig,
    points: &[(f64, f64, f64)],
    taus: &[f64],
) -> Result<Vec<String>, CliError> {
    let blocks: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(eta, s, wc)| {
            let p = params(eta, s, wc)?;
            Ok(model_reports(&p, cfg, taus)?
                .iter()
                .map(|r| qsl_row(eta, s, wc, cfg.alpha, r))
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    Ok(blocks.concat())
}

pub fn qsl(cfg: &RunConfig) -> Result<(), CliError> {
    let rows = qsl_rows(cfg, &parameter_points(cfg), &horizons(cfg))?;
    write_table(cfg.out.as_deref(), cfg, QSL_HEADER, &rows)
}

pub fn fig1(cfg: &RunConfig) -> Result<(), CliError> {
    let rows = qsl_rows(cfg, &parameter_points(cfg), &horizons(cfg))?;
    write_table(cfg.out.as_deref(), cfg, QSL_HEADER, &rows)
}

/// `<stem>_<suffix>.csv`, dropping a `.csv` extension from the stem.
fn sibling(stem: &Path, suffix: &str) -> PathBuf {
    let base = if stem.extension().is_some_and(|e| e == "csv") {
        stem.with_extension("")
    } else {
        stem.to_path_buf()
    };
    let mut name = base
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(format!("_{suffix}.csv"));
    base.with_file_name(name)
}

/// QSL row at τ plus the limiting speed `|αZE_b|` (NaN without a bound state).
fn fig2_rows(cfg: &RunConfig, points: &[(f64, f64, f64)]) -> Result<Vec<String>, CliError> {
    points
        .par_iter()
        .map(|&(eta, s, wc)| {
            let p = params(eta, s, wc)?;
            let r = exact_reports(&p, cfg, &[cfg.tau])?[0];
            let analytic =
                find_bound_state(&p)?.map_or(f64::NAN, |b| bound_state_speed(&b, cfg.alpha));
            Ok(format!(
                "{},{}",
                qsl_row(eta, s, wc, cfg.alpha, &r),
                fmt_num(analytic)
            ))
        })
        .collect()
}

pub fn fig2(cfg: &RunConfig) -> Result<(), CliError> {
    let header = format!("{QSL_HEADER},v_bar_analytic");
    let etas = cfg
        .eta_sweep
        .expect("fig2 has a default eta sweep")
        .values();
    let wcs = cfg
        .omega_c_sweep
        .expect("fig2 has a default omega_c sweep")
        .values();
    let by_eta: Vec<_> = etas.iter().map(|&e| (e, cfg.s, cfg.omega_c)).collect();
    let by_wc: Vec<_> = wcs.iter().map(|&w| (cfg.eta, cfg.s, w)).collect();
    let (a, b) = (fig2_rows(cfg, &by_eta)?, fig2_rows(cfg, &by_wc)?);
    match &cfg.out {
        Some(stem) => {
            write_table(Some(&sibling(stem, "eta")), cfg, &header, &a)?;
            write_table(Some(&sibling(stem, "omega_c")), cfg, &header, &b)
        }
        None => {
            write_table(None, cfg, &header, &a)?;
            write_table(None, cfg, &header, &b)
        }
    }
}

pub fn fig3(cfg: &RunConfig) -> Result<(), CliError> {
    let etas = cfg
        .eta_sweep
        .map_or_else(|| vec![0.06, 0.12], |s| s.values());
    let taus = horizons(cfg);
    let blocks: Vec<Vec<String>> = etas
        .par_iter()
        .map(|&eta| {
            let p = params(eta, cfg.s, cfg.omega_c)?;
            Ok(exact_reports(&p, cfg, &taus)?
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{}",
                        fmt_num(eta),
                        fmt_num(r.tau),
                        fmt_num(100.0 * r.ratio),
                        fmt_num(100.0 * r.ratio_w)
                    )
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    write_table(
        cfg.out.as_deref(),
        cfg,
        "eta,tau,ratio_pct,ratio_w_pct",
        &blocks.concat(),
    )
}

pub fn threshold(cfg: &RunConfig) -> Result<(), CliError> {
    let ss = cfg.s_sweep.map_or_else(|| vec![cfg.s], |s| s.values());
    let wcs = cfg
        .omega_c_sweep
        .map_or_else(|| vec![cfg.omega_c], |s| s.values());
    let points: Vec<(f64, f64)> = ss
        .iter()
        .flat_map(|&s| wcs.iter().map(move |&w| (s, w)))
        .collect();
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(s, wc)| {
            let numeric = numeric_critical_coupling(s, wc, 1e-10)?;
            let analytic = params(1.0, s, wc)?.critical_coupling();
            let rel = ((numeric - analytic) / analytic).abs();
            Ok([s, wc, numeric, analytic, rel].map(fmt_num).join(","))
        })
        .collect::<Result<_, CliError>>()?;
    write_table(
        cfg.out.as_deref(),
        cfg,
        "s,omega_c,eta_star_numeric,eta_star_analytic,rel_err",
        &rows,
    )
}
