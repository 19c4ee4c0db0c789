//! CSV output. Numbers carry 12 significant digits.

use std::io::Write;

use crate::dynamics::{master_equation_coefficients, AmplitudeTrajectory};
use crate::qsl::QslReport;
use crate::scalar::Real;
use crate::spectrum::BoundState;

pub const TRAJECTORY_HEADER: &str = "t,re_u,im_u,abs_u,re_du,im_du,Omega,gamma";
pub const BOUND_STATE_HEADER: &str = "eta,s,omega_c,exists,E_b,Z";
pub const QSL_HEADER: &str = "eta,s,omega_c,alpha_abs,tau,v_bar,l_b,ratio,v_bar_w,l_w,ratio_w";

/// Scientific notation with 12 significant digits; non-finite values print
/// as `NaN`, `inf`, `-inf`.
pub fn fmt_num<T: Real>(x: T) -> String {
    let x = x.to_f64_lossy();
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// `# key=value key=value …`
pub fn write_config_comment<W: Write>(
    w: &mut W,
    pairs: &[(String, String)],
) -> std::io::Result<()> {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(w, "# {}", body.join(" "))
}

/// Writes `u`, `u̇` and the master-equation coefficients. Rows past the point
/// where `|u|` underflows the coefficient floor carry `NaN` for `Ω` and `γ`,
/// and a comment line says so.
pub fn write_trajectory_csv<T: Real, W: Write>(
    w: &mut W,
    traj: &AmplitudeTrajectory<T>,
) -> std::io::Result<()> {
    let coeffs = master_equation_coefficients(traj);
    if let Some(i) = coeffs.truncated_at {
        writeln!(
            w,
            "# warning: |u| fell below the coefficient floor at t={}; Omega and gamma are NaN from there on",
            fmt_num(traj.times()[i])
        )?;
    }
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for i in 0..traj.len() {
        let (u, du) = (traj.u()[i], traj.du()[i]);
        let (om, ga) = match (coeffs.omega.get(i), coeffs.gamma.get(i)) {
            (Some(&o), Some(&g)) => (fmt_num(o), fmt_num(g)),
            _ => ("NaN".to_string(), "NaN".to_string()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{om},{ga}",
            fmt_num(traj.times()[i]),
            fmt_num(u.re),
            fmt_num(u.im),
            fmt_num(u.norm()),
            fmt_num(du.re),
            fmt_num(du.im),
        )?;
    }
    Ok(())
}

/// One `eta,s,omega_c,exists,E_b,Z` row; absent states print `NaN` values.
pub fn bound_state_row<T: Real>(eta: T, s: T, omega_c: T, b: Option<&BoundState<T>>) -> String {
    let (exists, e, z) = match b {
        Some(b) => ("true", fmt_num(b.energy), fmt_num(b.residue)),
        None => ("false", "NaN".to_string(), "NaN".to_string()),
    };
    format!(
        "{},{},{},{exists},{e},{z}",
        fmt_num(eta),
        fmt_num(s),
        fmt_num(omega_c)
    )
}

/// One row matching [`QSL_HEADER`].
pub fn qsl_row<T: Real>(eta: T, s: T, omega_c: T, alpha_abs: T, r: &QslReport<T>) -> String {
    [
        eta, s, omega_c, alpha_abs, r.tau, r.v_bar, r.l_b, r.ratio, r.v_bar_w, r.l_w, r.ratio_w,
    ]
    .iter()
    .map(|&x| fmt_num(x))
    .collect::<Vec<_>>()
    .join(",")
}
