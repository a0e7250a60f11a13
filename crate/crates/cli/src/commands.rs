//! One function per command, each producing a [`Document`].

use std::fs;
use std::path::Path;

use gmp_core::algebra::{
    casimir_check, ladder_coeff, ptp_bound_count, ptp_consistency, ptp_map, satellite_chain,
    satellite_params, satellite_step,
};
use gmp_core::numerics::{fit_levels, franck_condon, FitOptions, ObservedLevel};
use gmp_core::susyqm::{ln_normalization_recursion, partner};
use gmp_core::verify::{self, ladder_grid, ladder_mismatch, walk_drift, Suite};
use gmp_core::wavefunction::ln_normalization;
use gmp_core::{BoundState, Execution, GmpError, GmpModel, LevelRecord, PhysicalParams};
use serde_json::{json, Value};

use crate::output::*;
use crate::{plot, CliError, Command, RunConfig};

const TABLE_POINTS: usize = 400;
const STATE_TAIL: f64 = 1e-12;
const FCF_TOL: f64 = 1e-11;

pub fn dispatch(cfg: &RunConfig) -> Result<Document, CliError> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Wavefunction => wavefunction(cfg),
        Command::Ladder => ladder(cfg),
        Command::Satellite => satellite(cfg),
        Command::Ptp => ptp(cfg),
        Command::Susy => susy(cfg),
        Command::Fcf => fcf(cfg),
        Command::Fit => fit(cfg),
        Command::Verify => verify_cmd(cfg),
        Command::Plot => plot::plot_document(cfg),
    }
}

fn with_units(extra: &[(&'static str, &'static str)], physical: bool) -> Value {
    let mut pairs: Vec<(&str, &str)> = MODEL_UNITS.to_vec();
    if physical {
        pairs.extend(PARAM_UNITS);
    }
    pairs.extend(extra.iter().copied());
    units(&pairs)
}

fn level_records(m: &GmpModel, p: Option<&PhysicalParams>) -> Result<Vec<LevelRecord>, GmpError> {
    match p {
        Some(p) => (0..m.level_count()).map(|n| p.level(n)).collect(),
        None => Ok(m.levels()),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let p = cfg.params();
    let levels = level_records(&m, p)?;
    let json = json!({
        "command": "spectrum",
        "model": model_json(&m),
        "params": params_json(p),
        "levels": levels.iter().map(|r| json!({
            "n": r.n,
            "alpha": r.alpha,
            "beta": r.beta,
            "eps": r.eps,
            "E": r.energy,
        })).collect::<Vec<_>>(),
        "units": with_units(&[("alpha", DIMENSIONLESS), ("beta", DIMENSIONLESS), ("eps", DIMENSIONLESS), ("E", ENERGY)], p.is_some()),
    });
    let mut csv = Table::new(["n", "alpha", "beta", "eps", "E"]);
    csv.comment(model_comment(&m));
    if let Some(p) = p {
        csv.comment(params_comment(p));
    }
    csv.comment("units: alpha, beta, eps dimensionless; E energy");
    for r in &levels {
        csv.push(vec![
            r.n.to_string(),
            num(r.alpha),
            num(r.beta),
            num(r.eps),
            opt_num(r.energy),
        ]);
    }
    Ok(Document::new(json, csv))
}

fn table_points(cfg: &RunConfig) -> Result<usize, CliError> {
    let points = cfg.options.grid_points.unwrap_or(TABLE_POINTS);
    if points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    Ok(points)
}

fn wavefunction(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let p = cfg.params();
    let n = cfg.options.n.unwrap_or(0);
    let s = BoundState::new(&m, n)?;
    let points = table_points(cfg)?;
    let x_max = s.tail_cutoff(STATE_TAIL);
    let energy = p.map(|p| p.level(n)).transpose()?.and_then(|r| r.energy);
    let mut rows = Vec::with_capacity(points);
    for i in 1..=points {
        let x = x_max * i as f64 / points as f64;
        rows.push((x, p.map(|p| x / p.a), s.psi(x)?));
    }
    let json = json!({
        "command": "wavefunction",
        "model": model_json(&m),
        "params": params_json(p),
        "state": {
            "n": n,
            "alpha": s.alpha(),
            "beta": s.beta(),
            "eps": s.eps(),
            "E": energy,
            "ln_N": ln_normalization(&m, n)?,
        },
        "points": rows.iter().map(|(x, r, psi)| json!({"x": x, "r": r, "psi": psi})).collect::<Vec<_>>(),
        "units": with_units(&[
            ("alpha", DIMENSIONLESS), ("beta", DIMENSIONLESS), ("eps", DIMENSIONLESS), ("E", ENERGY),
            ("ln_N", DIMENSIONLESS), ("x", DIMENSIONLESS), ("r", LENGTH), ("psi", "1/sqrt(dimensionless x)"),
        ], p.is_some()),
    });
    let mut csv = Table::new(["x", "r", "psi"]);
    csv.comment(model_comment(&m));
    if let Some(p) = p {
        csv.comment(params_comment(p));
    }
    csv.comment(format!("n={n} eps={} E={}", num(s.eps()), opt_num(energy)));
    csv.comment("units: x = a r dimensionless; r length; psi normalized in x");
    for (x, r, psi) in &rows {
        csv.push(vec![num(*x), opt_num(*r), num(*psi)]);
    }
    Ok(Document::new(json, csv))
}

fn required_direction(cfg: &RunConfig) -> Result<gmp_core::Direction, CliError> {
    cfg.direction()?
        .ok_or_else(|| CliError::Usage("this command needs --direction {g+,g-,m+,m-}".into()))
}

fn ladder(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let n = cfg.options.n.unwrap_or(0);
    let dir = required_direction(cfg)?;
    let s = BoundState::new(&m, n)?;
    let label = s.label();
    let coeff = ladder_coeff(&label, dir)?;
    let casimir = casimir_check(&label).ok();
    // a zero coefficient is the annihilation point: no target state exists
    let step = if coeff == 0.0 {
        None
    } else {
        Some(satellite_step(&m, n, dir)?)
    };
    let mismatch = step
        .as_ref()
        .map(|st| ladder_mismatch(&s, st, &ladder_grid()))
        .transpose()?;
    let target = step.as_ref().map(|st| {
        json!({
            "k": st.target.k,
            "b": st.target.b,
            "n": st.target.n,
            "label": label_json(&st.target.label),
        })
    });
    let json = json!({
        "command": "ladder",
        "model": model_json(&m),
        "direction": dir.to_string(),
        "source": {"n": n, "label": label_json(&label)},
        "coeff": coeff,
        "annihilated": step.is_none(),
        "target": target,
        "casimir": casimir,
        "mismatch": mismatch,
        "units": with_units(&[
            ("m", DIMENSIONLESS), ("g", DIMENSIONLESS), ("coeff", DIMENSIONLESS), ("casimir", DIMENSIONLESS),
            ("mismatch", "relative sup-norm"),
        ], false),
    });
    let mut csv = Table::new([
        "direction",
        "n",
        "coeff",
        "target_k",
        "target_b",
        "target_n",
        "casimir",
        "mismatch",
    ]);
    csv.comment(model_comment(&m));
    csv.push(vec![
        dir.to_string(),
        n.to_string(),
        num(coeff),
        opt_num(step.map(|st| st.target.k)),
        opt_num(step.map(|st| st.target.b)),
        step.map(|st| st.target.n.to_string()).unwrap_or_default(),
        opt_num(casimir),
        opt_num(mismatch),
    ]);
    Ok(Document::new(json, csv))
}

/// One member of a satellite chain, in both parametrizations.
struct Member {
    direction: Option<String>,
    coeff: Option<f64>,
    model: GmpModel,
    n: usize,
    label: gmp_core::AlgebraLabel,
    params: Option<PhysicalParams>,
}

fn chain_members(cfg: &RunConfig) -> Result<Vec<Member>, CliError> {
    let m = cfg.model()?;
    let n = cfg.options.n.unwrap_or(0);
    let dir = required_direction(cfg)?;
    let steps = cfg.options.steps.unwrap_or(1);
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let chain = satellite_chain(&m, n, &vec![dir; steps])?;
    let mut members = vec![Member {
        direction: None,
        coeff: None,
        model: m,
        n,
        label: BoundState::new(&m, n)?.label(),
        params: cfg.params().copied(),
    }];
    for step in &chain {
        let params = members
            .last()
            .and_then(|prev| prev.params)
            .map(|p| satellite_params(&p, step))
            .transpose()?;
        members.push(Member {
            direction: Some(step.direction.to_string()),
            coeff: Some(step.coeff),
            model: step.target_model()?,
            n: step.target.n,
            label: step.target.label,
            params,
        });
    }
    Ok(members)
}

pub(crate) fn satellite_members(
    cfg: &RunConfig,
) -> Result<Vec<(GmpModel, usize, PhysicalParams)>, CliError> {
    let a_default = PhysicalParams::from_model(&cfg.model()?, 1.0, 1.0, 1.0)?;
    let members = chain_members(cfg)?;
    let base = members[0].params.unwrap_or(a_default);
    members
        .into_iter()
        .map(|mem| {
            let p = match mem.params {
                Some(p) => p,
                None => PhysicalParams::from_model(&mem.model, base.a, base.mu, base.hbar)?,
            };
            Ok((mem.model, mem.n, p))
        })
        .collect()
}

fn satellite(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let members = chain_members(cfg)?;
    let n = cfg.options.n.unwrap_or(0);
    let dir = required_direction(cfg)?;
    let walk = satellite_chain(&m, n, &vec![dir; members.len() - 1])?;
    let (kb2_drift, label_drift) = walk_drift(&m, &walk)?;
    let physical = cfg.params().is_some();
    let mut entries = Vec::new();
    let mut csv = Table::new([
        "step",
        "direction",
        "coeff",
        "k",
        "b",
        "l",
        "n",
        "m",
        "g",
        "kb2",
        "eps",
        "D",
        "re",
        "E",
        "Db2_over_a2",
    ]);
    csv.comment(model_comment(&m));
    for (i, mem) in members.iter().enumerate() {
        let eps = mem.model.level(mem.n)?.eps;
        let kb2 = mem.model.k() * mem.model.b().powi(2);
        let energy = mem
            .params
            .map(|p| p.level(mem.n))
            .transpose()?
            .and_then(|r| r.energy);
        entries.push(json!({
            "step": i,
            "direction": mem.direction,
            "coeff": mem.coeff,
            "k": mem.model.k(),
            "b": mem.model.b(),
            "l": mem.model.l(),
            "n": mem.n,
            "label": label_json(&mem.label),
            "kb2": kb2,
            "eps": eps,
            "params": params_json(mem.params.as_ref()),
            "E": energy,
            "Db2_over_a2": mem.params.map(|p| p.satellite_invariant()),
        }));
        csv.push(vec![
            i.to_string(),
            mem.direction.clone().unwrap_or_default(),
            opt_num(mem.coeff),
            num(mem.model.k()),
            num(mem.model.b()),
            num(mem.model.l()),
            mem.n.to_string(),
            num(mem.label.m),
            num(mem.label.g),
            num(kb2),
            num(eps),
            opt_num(mem.params.map(|p| p.depth)),
            opt_num(mem.params.map(|p| p.r_e)),
            opt_num(energy),
            opt_num(mem.params.map(|p| p.satellite_invariant())),
        ]);
    }
    let json = json!({
        "command": "satellite",
        "model": model_json(&m),
        "params": params_json(cfg.params()),
        "chain": entries,
        "conservation": {"invariant_rel_drift": kb2_drift, "label_drift": label_drift},
        "units": with_units(&[
            ("coeff", DIMENSIONLESS), ("m", DIMENSIONLESS), ("g", DIMENSIONLESS), ("kb2", DIMENSIONLESS), ("eps", DIMENSIONLESS),
            ("E", ENERGY), ("step", COUNT), ("Db2_over_a2", "energy*length^2"), ("invariant_rel_drift", DIMENSIONLESS),
            ("label_drift", DIMENSIONLESS),
        ], physical),
    });
    Ok(Document::new(json, csv))
}

fn ptp(cfg: &RunConfig) -> Result<Document, CliError> {
    if let (Some(m1), Some(m2)) = (cfg.options.m1, cfg.options.m2) {
        let count = ptp_bound_count(m1, m2)?;
        let json = json!({
            "command": "ptp",
            "m1_abs": m1,
            "m2_abs": m2,
            "count": count.count,
            "integer_inputs": count.integer_inputs,
            "units": units(&[("m1_abs", DIMENSIONLESS), ("m2_abs", DIMENSIONLESS), ("count", COUNT)]),
        });
        let mut csv = Table::new(["m1_abs", "m2_abs", "count", "integer_inputs"]);
        csv.push(vec![
            num(m1),
            num(m2),
            count.count.to_string(),
            count.integer_inputs.to_string(),
        ]);
        return Ok(Document::new(json, csv));
    }
    if cfg.options.m1.is_some() != cfg.options.m2.is_some() {
        return Err(CliError::Usage(
            "--m1 and --m2 must be given together".into(),
        ));
    }
    let m = cfg.model()?;
    let mut levels = Vec::new();
    let mut csv = Table::new([
        "n",
        "m1_abs",
        "m2_abs",
        "eps_bar",
        "lhs",
        "rhs",
        "count",
        "integer_inputs",
    ]);
    csv.comment(model_comment(&m));
    for n in 0..m.level_count() {
        let img = ptp_map(&m, n)?;
        let (lhs, rhs) = ptp_consistency(&m, n)?;
        let count = ptp_bound_count(img.m1_abs, img.m2_abs)?;
        levels.push(json!({
            "n": n,
            "m1_abs": img.m1_abs,
            "m2_abs": img.m2_abs,
            "eps_bar": img.eps_bar,
            "lhs": lhs,
            "rhs": rhs,
            "count": count.count,
            "integer_inputs": count.integer_inputs,
        }));
        csv.push(vec![
            n.to_string(),
            num(img.m1_abs),
            num(img.m2_abs),
            num(img.eps_bar),
            num(lhs),
            num(rhs),
            count.count.to_string(),
            count.integer_inputs.to_string(),
        ]);
    }
    let json = json!({
        "command": "ptp",
        "model": model_json(&m),
        "levels": levels,
        "units": with_units(&[
            ("m1_abs", DIMENSIONLESS), ("m2_abs", DIMENSIONLESS), ("eps_bar", DIMENSIONLESS),
            ("lhs", DIMENSIONLESS), ("rhs", DIMENSIONLESS), ("count", COUNT),
        ], false),
    });
    Ok(Document::new(json, csv))
}

fn susy(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let p = partner(&m)?;
    let pg = p.as_gmp()?;
    let mut partner_levels = Vec::new();
    for n in 0..pg.level_count() {
        partner_levels.push(json!({
            "n": n,
            "eps": p.eps(n)?,
            "eps_original": m.level(n + 1)?.eps,
        }));
    }
    let mut csv = Table::new(["n", "eps", "eps_partner", "ln_N", "ln_N_recursion"]);
    csv.comment(model_comment(&m));
    csv.comment(format!(
        "partner k'={} b'={} R={} l'={}",
        num(p.k_prime),
        num(p.b_prime),
        num(p.r),
        num(p.l_prime)
    ));
    let mut norms = Vec::new();
    for n in 0..m.level_count() {
        let closed = ln_normalization(&m, n)?;
        let recursion = ln_normalization_recursion(&m, n)?;
        norms.push(json!({"n": n, "ln_N": closed, "ln_N_recursion": recursion}));
        let partner_eps = if n > 0 { Some(p.eps(n - 1)?) } else { None };
        csv.push(vec![
            n.to_string(),
            num(m.level(n)?.eps),
            opt_num(partner_eps),
            num(closed),
            num(recursion),
        ]);
    }
    let json = json!({
        "command": "susy",
        "model": model_json(&m),
        "partner": {"k": p.k_prime, "b": p.b_prime, "R": p.r, "l": p.l_prime},
        "partner_levels": partner_levels,
        "normalization": norms,
        "units": with_units(&[
            ("R", DIMENSIONLESS), ("eps", DIMENSIONLESS), ("eps_original", DIMENSIONLESS),
            ("ln_N", DIMENSIONLESS), ("ln_N_recursion", DIMENSIONLESS),
        ], false),
    });
    Ok(Document::new(json, csv))
}

fn fcf(cfg: &RunConfig) -> Result<Document, CliError> {
    let m = cfg.model()?;
    let o = &cfg.options;
    let n = o.n.unwrap_or(0);
    let tol = o.tol.unwrap_or(FCF_TOL);
    let a = BoundState::new(&m, n)?;
    let b = if cfg.direction()?.is_some() {
        let members = chain_members(cfg)?;
        let last = members.last().expect("chain has a source");
        BoundState::new(&last.model, last.n)?
    } else if let (Some(k2), Some(b2)) = (o.k2, o.b2) {
        BoundState::new(&GmpModel::new(k2, b2)?, o.n2.unwrap_or(n))?
    } else if o.k2.is_some() || o.b2.is_some() {
        return Err(CliError::Usage(
            "--k2 and --b2 must be given together".into(),
        ));
    } else if let Some(n2) = o.n2 {
        BoundState::new(&m, n2)?
    } else {
        return Err(CliError::Usage(
            "fcf needs a second state: --direction [--steps], --k2 --b2 [--n2], or --n2".into(),
        ));
    };
    let fc = franck_condon(&a, &b, tol)?;
    let state = |s: &BoundState| json!({"k": s.model().k(), "b": s.model().b(), "n": s.n(), "eps": s.eps()});
    let json = json!({
        "command": "fcf",
        "state_a": state(&a),
        "state_b": state(&b),
        "overlap": fc.overlap,
        "factor": fc.factor,
        "tol": tol,
        "units": units(&[
            ("k", DIMENSIONLESS), ("b", DIMENSIONLESS), ("n", COUNT), ("eps", DIMENSIONLESS), ("overlap", DIMENSIONLESS),
            ("factor", DIMENSIONLESS), ("tol", DIMENSIONLESS),
        ]),
    });
    let mut csv = Table::new([
        "k_a", "b_a", "n_a", "k_b", "b_b", "n_b", "overlap", "factor",
    ]);
    csv.push(vec![
        num(a.model().k()),
        num(a.model().b()),
        a.n().to_string(),
        num(b.model().k()),
        num(b.model().b()),
        b.n().to_string(),
        num(fc.overlap),
        num(fc.factor),
    ]);
    Ok(Document::new(json, csv))
}

/// Reads `[{n, energy}]`, spectrum JSON output (`levels[].E`), or CSV with an
/// `energy` or `E` column (the second column when there is no header).
pub fn read_levels(path: &Path) -> Result<Vec<ObservedLevel>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| CliError::Usage(format!("{}: {what}", path.display()));
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .peekable();
        // energy column from the header (spectrum output has n,alpha,beta,eps,E); else the second
        let mut col = 1;
        if let Some(head) = lines.next_if(|l| l.starts_with('n')) {
            let names: Vec<&str> = head.split(',').map(str::trim).collect();
            col = names
                .iter()
                .position(|&h| h == "energy")
                .or_else(|| names.iter().position(|&h| h == "E"))
                .unwrap_or(1);
        }
        return lines
            .map(|line| {
                let cells: Vec<&str> = line.split(',').map(str::trim).collect();
                let n = cells
                    .first()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let energy = cells
                    .get(col)
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| bad(line))?;
                Ok(ObservedLevel { n, energy })
            })
            .collect();
    }
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let items = match &doc {
        Value::Array(items) => items,
        Value::Object(obj) => obj
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("expected an array or an object with \"levels\""))?,
        _ => return Err(bad("expected an array or an object with \"levels\"")),
    };
    items
        .iter()
        .map(|item| {
            let n = item
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("level without integer \"n\""))?;
            let energy = item
                .get("energy")
                .or_else(|| item.get("E"))
                .and_then(Value::as_f64)
                .ok_or_else(|| bad("level without numeric \"energy\" or \"E\""))?;
            Ok(ObservedLevel {
                n: n as usize,
                energy,
            })
        })
        .collect()
}

fn fit(cfg: &RunConfig) -> Result<Document, CliError> {
    let Some(guess) = cfg.params().copied() else {
        return Err(CliError::Usage(
            "fit needs an initial guess: --D --a --re [--mu --hbar]".into(),
        ));
    };
    let path = cfg
        .options
        .levels
        .as_deref()
        .ok_or_else(|| CliError::Usage("fit needs --levels FILE".into()))?;
    let observed = read_levels(path)?;
    let mut opts = FitOptions::default();
    if let Some(it) = cfg.options.max_iterations {
        opts.max_iterations = it;
    }
    if let Some(tol) = cfg.options.tol {
        opts.x_tol = tol;
    }
    let result = fit_levels(&observed, &guess, &opts)?;
    let fitted = result.params.reduce()?;
    let mut residuals = Vec::new();
    let mut csv = Table::new(["n", "E_obs", "E_fit"]);
    csv.comment(params_comment(&result.params));
    csv.comment(format!(
        "residual_rms={} n_iterations={} converged={}",
        num(result.residual_rms),
        result.n_iterations,
        result.converged
    ));
    for o in &observed {
        let e_fit = result.params.level(o.n).ok().and_then(|r| r.energy);
        residuals.push(json!({"n": o.n, "E_obs": o.energy, "E_fit": e_fit}));
        csv.push(vec![o.n.to_string(), num(o.energy), opt_num(e_fit)]);
    }
    let json = json!({
        "command": "fit",
        "params": params_json(Some(&result.params)),
        "model": model_json(&fitted),
        "residual_rms": result.residual_rms,
        "n_iterations": result.n_iterations,
        "converged": result.converged,
        "levels": residuals,
        "units": with_units(&[("residual_rms", ENERGY), ("n_iterations", COUNT), ("E_obs", ENERGY), ("E_fit", ENERGY)], true),
    });
    Ok(Document::new(json, csv))
}

fn verify_cmd(cfg: &RunConfig) -> Result<Document, CliError> {
    let suite: Suite = cfg
        .options
        .suite
        .as_deref()
        .unwrap_or("all")
        .parse()
        .map_err(|e: GmpError| CliError::Usage(e.to_string()))?;
    let report = verify::run(suite, Execution::default());
    let mut csv = Table::new(["suite", "name", "measured", "tolerance", "passed"]);
    for c in &report.checks {
        csv.push(vec![
            c.suite.to_string(),
            format!("\"{}\"", c.name.replace('"', "\"\"")),
            num(c.measured),
            num(c.tolerance),
            c.passed.to_string(),
        ]);
    }
    let json = json!({
        "command": "verify",
        "suite": suite.to_string(),
        "passed": report.passed(),
        "checks": report.checks,
        "units": units(&[("measured", DIMENSIONLESS), ("tolerance", DIMENSIONLESS)]),
    });
    Ok(Document {
        text: Some(report.to_string()),
        preferred: Preferred::Text,
        failures: report.failures().count(),
        ..Document::new(json, csv)
    })
}
