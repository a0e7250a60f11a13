//! Plot data: GMP against Morse and harmonic wells, or a satellite chain.

use gmp_core::model::morse_energy;
use gmp_core::{BoundState, PhysicalParams};
use serde_json::{json, Value};

use crate::commands::satellite_members;
use crate::output::{num, params_comment, Document, Preferred, Table};
use crate::{CliError, RunConfig};

const PLOT_POINTS: usize = 400;
const STATE_TAIL: f64 = 1e-12;

/// Physical parameters of the run; `(k, b)` input is read with `a = mu = hbar = 1`.
fn physical(cfg: &RunConfig) -> Result<PhysicalParams, CliError> {
    match cfg.params() {
        Some(p) => Ok(*p),
        None => Ok(PhysicalParams::from_model(&cfg.model()?, 1.0, 1.0, 1.0)?),
    }
}

fn points(cfg: &RunConfig) -> Result<usize, CliError> {
    let n = cfg.options.grid_points.unwrap_or(PLOT_POINTS);
    if n < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    Ok(n)
}

/// CSV plot table. Without `--direction`: columns `r, V_GMP, V_Morse,
/// V_harmonic` with the harmonic frequency `hbar omega = eps(1)` taken from
/// the Dunham expansion. With `--direction` (and `--steps`): `x, r` followed by
/// `V_j, psi_j, E_j` for the source (`j = 0`) and each satellite, with the
/// conserved `D b^2 / a^2` in the header.
pub fn emit_plot_data(cfg: &RunConfig) -> Result<Table, CliError> {
    if cfg.direction()?.is_some() {
        satellite_plot(cfg)
    } else {
        potential_plot(cfg)
    }
}

fn potential_plot(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = physical(cfg)?;
    let m = p.reduce()?;
    let n = points(cfg)?;
    let hbar_omega = p.energy_scale() * m.dunham_coefficients(1)[1];
    let omega = hbar_omega / p.hbar;
    let mut t = Table::new(["r", "V_GMP", "V_Morse", "V_harmonic"]);
    t.comment(params_comment(&p));
    t.comment(format!(
        "hbar_omega={} morse_E0={}",
        num(hbar_omega),
        num(morse_energy(&p, 0))
    ));
    t.comment("units: r length; V energy");
    let (r_lo, r_hi) = (p.r_e / 10.0, p.r_e + 8.0 / p.a);
    for i in 0..n {
        let r = r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64;
        let morse = p.depth * (-(p.a * (r - p.r_e))).exp_m1().powi(2);
        let harmonic = 0.5 * p.mu * omega * omega * (r - p.r_e).powi(2);
        t.push(vec![num(r), num(p.potential(r)), num(morse), num(harmonic)]);
    }
    Ok(t)
}

fn satellite_plot(cfg: &RunConfig) -> Result<Table, CliError> {
    let members = satellite_members(cfg)?;
    let n = points(cfg)?;
    let states = members
        .iter()
        .map(|(m, level, _)| BoundState::new(m, *level))
        .collect::<Result<Vec<_>, _>>()?;
    let energies = members
        .iter()
        .map(|(_, level, p)| Ok(p.level(*level)?.energy.unwrap_or(f64::NAN)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let x_max = states
        .iter()
        .map(|s| s.tail_cutoff(STATE_TAIL))
        .fold(0.0, f64::max);
    let a = members[0].2.a;

    let mut header = vec!["x".to_string(), "r".to_string()];
    for j in 0..members.len() {
        header.extend([format!("V_{j}"), format!("psi_{j}"), format!("E_{j}")]);
    }
    let mut t = Table::new(header);
    t.comment(format!(
        "Db2_over_a2={}",
        num(members[0].2.satellite_invariant())
    ));
    for (j, (m, level, p)) in members.iter().enumerate() {
        t.comment(format!(
            "{j}: n={level} k={} b={} {}",
            num(m.k()),
            num(m.b()),
            params_comment(p)
        ));
    }
    t.comment("units: x = a r dimensionless; r length; V, E energy; psi normalized in x");
    for i in 1..=n {
        let x = x_max * i as f64 / n as f64;
        let r = x / a;
        let mut row = vec![num(x), num(r)];
        for ((_, _, p), (s, e)) in members.iter().zip(states.iter().zip(&energies)) {
            row.extend([num(p.potential(r)), num(s.psi(x)?), num(*e)]);
        }
        t.push(row);
    }
    Ok(t)
}

pub(crate) fn plot_document(cfg: &RunConfig) -> Result<Document, CliError> {
    let table = emit_plot_data(cfg)?;
    let json = json!({
        "command": "plot",
        "comments": table.comments,
        "columns": table.header,
        "rows": table
            .rows
            .iter()
            .map(|row| row.iter().map(|c| c.parse::<f64>().map_or(Value::Null, Value::from)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(Document {
        preferred: Preferred::Csv,
        ..Document::new(json, table)
    })
}
