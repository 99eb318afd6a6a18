//! The five commands. Each writes its files into a directory and returns
//! an outcome plus the summary table; the caller writes the summary.

use anyhow::{anyhow, bail, Context, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::path::Path;
use wentzell_core::analysis::*;
use wentzell_core::domain::{FieldValues, Mesh};
use wentzell_core::model::{validate_assumptions, AssumptionOutcome, Expr, Scenario};
use wentzell_core::solver::{run, RunStatus, Trajectory};
use wentzell_core::spectral::*;
use wentzell_core::waves::*;

use crate::convert;
use crate::output::{channel_summary, num, write_csv, write_monitors, Table};
use crate::schema::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Success,
    BlowUp,
    VerdictFails,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::BlowUp => 2,
            Outcome::VerdictFails => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::BlowUp => "blow_up",
            Outcome::VerdictFails => "verdict_fails",
        }
    }
}

pub struct Report {
    pub outcome: Outcome,
    pub summary: Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Spectrum,
    Diagnose,
    Waves,
    Sweep,
}

impl Command {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "run" => Command::Run,
            "spectrum" => Command::Spectrum,
            "diagnose" => Command::Diagnose,
            "waves" => Command::Waves,
            "sweep" => Command::Sweep,
            other => bail!("unknown command `{other}` (expected run, spectrum, diagnose, waves or sweep)"),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Spectrum => "spectrum",
            Command::Diagnose => "diagnose",
            Command::Waves => "waves",
            Command::Sweep => "sweep",
        }
    }
}

/// Runs a single (non-sweep) command.
pub fn execute(command: Command, doc: &Document, dir: &Path, seed: u64) -> Result<Report> {
    let mut report = match command {
        Command::Run => run_command(doc, dir)?,
        Command::Spectrum => spectrum_command(doc, dir)?,
        Command::Diagnose => diagnose_command(doc, dir, seed)?,
        Command::Waves => waves_command(doc, dir)?,
        Command::Sweep => bail!("sweep members cannot themselves be sweeps"),
    };
    report.summary.set("command", command.name()).set("outcome", report.outcome.label());
    Ok(report)
}

fn status_table(status: &RunStatus<f64>, final_t: f64) -> (Outcome, Table) {
    let mut t = Table::new();
    t.set("t_end", final_t);
    let outcome = match status {
        RunStatus::Completed => {
            t.set("status", "completed");
            Outcome::Success
        }
        RunStatus::BlowUp { t: tb, norm } => {
            t.set("status", "blow_up").set("blowup_time", *tb).set("blowup_norm", *norm);
            Outcome::BlowUp
        }
        RunStatus::StepFailure { t: tf, reason } => {
            t.set("status", "step_failure").set("failure_time", *tf).set("reason", reason.as_str());
            Outcome::VerdictFails
        }
    };
    (outcome, t)
}

fn assumption_tables(doc: &Document, sc: &Scenario<f64>) -> Result<(bool, Vec<Table>)> {
    if sc.declarations.classes.is_empty() {
        return Ok((true, Vec::new()));
    }
    let (sample_box, count) = convert::sample_box(doc);
    let reports = validate_assumptions(sc, &sample_box, count).context("declarations")?;
    let mut all = true;
    let tables = reports
        .iter()
        .map(|r| {
            let mut t = Table::new();
            t.set("class", format!("{:?}", r.class));
            match &r.outcome {
                AssumptionOutcome::Holds { samples } => {
                    t.set("holds", true).set("samples", *samples as i64);
                }
                AssumptionOutcome::Violated(c) => {
                    all = false;
                    t.set("holds", false).set("term", c.term).floats("state", &c.state);
                    t.set("x", c.x).set("t", c.t).set("lhs", c.lhs).set("rhs", c.rhs);
                }
            }
            t
        })
        .collect();
    Ok((all, tables))
}

fn scenario_table(sc: &Scenario<f64>) -> Table {
    let (delta, gamma) = sc.degiorgi_exponents();
    let partition = sc.partition();
    let ids = |v: &[usize]| v.iter().map(|&i| (i + 1) as i64).collect::<Vec<_>>();
    let mut t = Table::new();
    t.set("fields", sc.field_count() as i64)
        .set("nodes", sc.mesh.node_count() as i64)
        .set("horizon", sc.horizon)
        .set("epsilon", sc.epsilon())
        .set("cfl", sc.solver.cfl)
        .set("snapshot_cadence", sc.solver.cadence(sc.horizon))
        .set("degiorgi_delta", delta)
        .set("degiorgi_gamma", gamma)
        .set("static_fields", ids(&partition.static_fields))
        .set("dynamic_fields", ids(&partition.dynamic_fields));
    t
}

fn write_snapshots(path: &Path, sc: &Scenario<f64>, tr: &Trajectory<f64>) -> Result<()> {
    let mesh = &sc.mesh;
    let mut header: Vec<String> = ["t [time]", "node [index]", "boundary [flag]", "x [length]", "y [length]"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(sc.fields.iter().map(|f| format!("{} [state]", f.name)));
    let mut rows = Vec::new();
    for s in &tr.snapshots {
        for node in 0..mesh.node_count() {
            let [x, y] = mesh.coords()[node];
            let mut row = vec![num(s.t), node.to_string(), "0".into(), num(x), num(y)];
            row.extend(s.fields.iter().map(|f| num(f.bulk[node])));
            rows.push(row);
        }
        for (slot, b) in mesh.boundary().iter().enumerate() {
            let [x, y] = mesh.coords()[b.node];
            let mut row = vec![num(s.t), b.node.to_string(), "1".into(), num(x), num(y)];
            row.extend(s.fields.iter().map(|f| num(f.trace[slot])));
            rows.push(row);
        }
    }
    write_csv(path, &header, &rows)
}

fn run_command(doc: &Document, dir: &Path) -> Result<Report> {
    let sc = convert::scenario(doc)?;
    let (assumptions_hold, assumptions) = assumption_tables(doc, &sc)?;
    let tr = run(&sc);
    write_monitors(&dir.join("monitors.csv"), &tr.monitors)?;
    write_snapshots(&dir.join("snapshots.csv"), &sc, &tr)?;
    let (outcome, status) = status_table(&tr.status, tr.final_state().t);
    let mut summary = Table::new();
    summary
        .child("status", status)
        .child("scenario", scenario_table(&sc))
        .set("steps", tr.monitors.len().saturating_sub(1) as i64)
        .set("snapshots", tr.snapshots.len() as i64)
        .set("assumptions_hold", assumptions_hold)
        .list("assumption", assumptions)
        .list("channel", channel_summary(&tr.monitors));
    Ok(Report { outcome, summary })
}

fn spectrum_command(doc: &Document, dir: &Path) -> Result<Report> {
    let spec = &doc.spectrum;
    let mesh = convert::mesh(doc)?;
    let (systems, index) = match spec.variant {
        VariantDoc::Classic => (vec![assemble_wentzell(&mesh, Variant::Classic)?], 0),
        VariantDoc::Generalized => {
            let sc = convert::scenario(doc)?;
            if spec.field == 0 || spec.field > sc.field_count() {
                bail!("spectrum.field: {} is not a field index", spec.field);
            }
            let systems = (0..sc.field_count())
                .map(|i| assemble_wentzell(&mesh, Variant::Generalized(GeneralizedCoefficients::from_scenario(&sc, i))))
                .collect::<Result<Vec<_>, _>>()?;
            (systems, spec.field - 1)
        }
    };
    let system = &systems[index];
    let options = SolveOptions {
        correction: match spec.correction {
            CorrectionDoc::None => Correction::None,
            CorrectionDoc::Dispersion => Correction::Dispersion,
        },
    };
    let mut summary = Table::new();
    summary
        .set("variant", format!("{:?}", spec.variant).to_lowercase())
        .set("field", spec.field as i64)
        .set("unknowns", system.size() as i64)
        .set("correction", format!("{:?}", spec.correction).to_lowercase());
    let pairs = match solve_spectrum(system, spec.count, options) {
        Ok(p) => p,
        Err(SpectralError::GroundState(reason)) => {
            summary.set("ground_state_holds", false).set("reason", reason);
            return Ok(Report { outcome: Outcome::VerdictFails, summary });
        }
        Err(e) => return Err(anyhow!(e).context("spectrum")),
    };
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .enumerate()
        .map(|(j, p)| vec![(j + 1).to_string(), num(p.value), num(p.residual)])
        .collect();
    write_csv(&dir.join("spectrum.csv"), &["j [index]".into(), "lambda [1/length^2]".into(), "residual [relative]".into()], &rows)?;
    summary.floats("eigenvalues", &pairs.iter().map(|p| p.value).collect::<Vec<_>>());
    if let Some(g) = ground_state(&pairs) {
        summary.set("lambda1", g.lambda1).set("single_signed", g.single_signed).set("ground_state_holds", g.holds());
        if let Some(gap) = g.gap {
            summary.set("gap", gap);
        }
    }
    if spec.variant == VariantDoc::Generalized {
        let l = lambda1_inf(&systems)?;
        summary.set("lambda1_inf", l.value).set("lambda1_inf_field", (l.field + 1) as i64).set("dissipative", l.dissipative);
    }
    if let Some(nu) = spec.nu {
        let method = match spec.index_method {
            IndexMethodDoc::Direct => IndexMethod::Direct,
            IndexMethodDoc::Heuristic => IndexMethod::HeuristicCount,
        };
        let count = instability_index(IndexSource::System(system), nu, spec.bulk_shift, spec.surface_shift, method)?;
        summary
            .set("nu", nu)
            .set("bulk_shift", spec.bulk_shift)
            .set("surface_shift", spec.surface_shift)
            .set("index_method", format!("{:?}", spec.index_method).to_lowercase())
            .set("instability_index", count as i64);
        let zetas = direct_linearized_spectrum(system, nu, spec.bulk_shift, spec.surface_shift)?;
        let rows: Vec<Vec<String>> = zetas.iter().enumerate().map(|(j, &z)| vec![(j + 1).to_string(), num(z)]).collect();
        write_csv(&dir.join("linearized.csv"), &["j [index]".into(), "zeta [1/time]".into()], &rows)?;
    }
    Ok(Report { outcome: Outcome::Success, summary })
}

fn random_state(mesh: &Mesh<f64>, rng: &mut StdRng) -> FieldValues<f64> {
    let degree = rng.gen_range(0..=6usize);
    let coeffs: Vec<(f64, f64)> = (0..=degree).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let extent = mesh.extents()[0];
    let g = |x: f64| -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = std::f64::consts::PI * k as f64 * x / extent;
                a * w.cos() + b * w.sin()
            })
            .sum()
    };
    let bulk = mesh.sample(|x, _| g(x));
    let trace = mesh.sample_boundary(|x, _| g(x));
    FieldValues::new(bulk, trace)
}

fn decay_table(doc: &Document, sc: &Scenario<f64>, tr: &Trajectory<f64>) -> Result<Option<(bool, Table)>> {
    let d = &doc.diagnose;
    let model = match d.decay {
        DecayDoc::None => return Ok(None),
        DecayDoc::Exponential => DecayModel::Exponential,
        DecayDoc::Algebraic | DecayDoc::Auto => {
            let m: Vec<f64> = (0..sc.field_count()).map(|i| sc.declarations.m(i)).collect();
            let p: Vec<f64> = (0..sc.field_count())
                .map(|i| sc.declarations.p.get(i).copied().unwrap_or_else(|| sc.fields[i].diffusion.exponent()))
                .collect();
            match (decay_exponent(&m, &p), d.decay) {
                (Ok(nu), _) => DecayModel::Algebraic { nu },
                (Err(_), DecayDoc::Auto) => DecayModel::Exponential,
                (Err(e), _) => return Err(anyhow!(e).context("diagnose.decay")),
            }
        }
    };
    let channel = d
        .decay_channel
        .clone()
        .unwrap_or_else(|| if sc.monitors.energy.is_some() { "energy".into() } else { "xinf".into() });
    let series = tr.snapshot_monitors().map_err(|e| anyhow!(e))?;
    let values = series
        .channel(&channel)
        .ok_or_else(|| anyhow!("diagnose.decay_channel: no monitor channel `{channel}`"))?;
    let mut t = Table::new();
    t.set("channel", channel.as_str());
    match verify_decay(series.times(), values, model) {
        Ok(fit) => {
            match fit.model {
                DecayModel::Algebraic { nu } => t.set("model", "algebraic").set("nu", nu),
                DecayModel::Exponential => t.set("model", "exponential"),
            };
            t.set("amplitude", fit.amplitude)
                .set("floor", fit.floor)
                .set("rate", fit.rate)
                .set("envelope_constant", fit.envelope_constant)
                .set("fit_points", fit.fit_points as i64)
                .set("holdout_points", fit.holdout_points as i64)
                .set("worst_ratio", fit.worst_ratio)
                .set("holds", fit.holds);
            Ok(Some((fit.holds, t)))
        }
        Err(e) => {
            t.set("holds", false).set("reason", e.to_string());
            Ok(Some((false, t)))
        }
    }
}

fn degiorgi_table(doc: &Document, sc: &Scenario<f64>, tr: &Trajectory<f64>, dir: &Path) -> Result<(bool, Table)> {
    let tau = doc.diagnose.tau.unwrap_or(sc.horizon / 4.0);
    let (delta, gamma) = sc.degiorgi_exponents();
    let mut t = Table::new();
    t.set("tau", tau).set("delta", delta).set("gamma", gamma).set("levels", doc.diagnose.levels as i64);
    match degiorgi_least_level(&tr.snapshots, &sc.mesh, sc.horizon, tau, delta, gamma, doc.diagnose.levels) {
        Ok(search) => {
            let r = &search.report;
            let rows: Vec<Vec<String>> = (0..r.y.len())
                .map(|n| vec![n.to_string(), num(r.levels[n]), num(r.times[n]), num(r.y[n])])
                .collect();
            write_csv(
                &dir.join("degiorgi.csv"),
                &["n [index]".into(), "k_n [state]".into(), "t_n [time]".into(), "y_n [state^delta]".into()],
                &rows,
            )?;
            t.set("level", search.level).set("direct_max", search.direct_max).set("certified", r.certified);
            if let Some(b) = r.bound {
                t.set("bound", b);
            }
            Ok((r.certified, t))
        }
        Err(e) => {
            t.set("certified", false).set("reason", e.to_string());
            Ok((false, t))
        }
    }
}

fn moser_tables(sc: &Scenario<f64>, tr: &Trajectory<f64>, rungs: usize, dir: &Path) -> Result<Vec<Table>> {
    let last = tr.final_state();
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    for (i, f) in last.fields.iter().enumerate() {
        let ladder = moser_ladder(f, &sc.mesh, rungs).context("diagnose.moser_rungs")?;
        for r in &ladder {
            rows.push(vec![(i + 1).to_string(), r.k.to_string(), r.n.to_string(), num(r.value), num(r.sup), num(r.gap)]);
        }
        let top = ladder.last().expect("ladder has rung 0");
        let mut t = Table::new();
        t.set("field", (i + 1) as i64).set("t", last.t).set("top_rung", top.k as i64).set("value", top.value).set("sup", top.sup).set("gap", top.gap);
        tables.push(t);
    }
    write_csv(
        &dir.join("moser.csv"),
        &["field [index]".into(), "k [index]".into(), "n [exponent]".into(), "value [state]".into(), "sup [state]".into(), "gap [relative]".into()],
        &rows,
    )?;
    Ok(tables)
}

fn trace_table(doc: &Document, sc: &Scenario<f64>, seed: u64) -> Result<Option<Table>> {
    let d = &doc.diagnose;
    if d.trace_samples == 0 {
        return Ok(None);
    }
    let p = sc.fields[0].diffusion.exponent();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..d.trace_samples {
        let u = random_state(&sc.mesh, &mut rng);
        let probe = trace_probe(&u, &sc.mesh, d.trace_n, d.trace_s, p, d.trace_eps).context("diagnose.trace")?;
        worst = worst.max(probe.least_c);
    }
    let mut t = Table::new();
    t.set("samples", d.trace_samples as i64)
        .set("seed", seed as i64)
        .set("n", d.trace_n)
        .set("s", d.trace_s)
        .set("p", p)
        .set("eps", d.trace_eps)
        .set("least_c", worst);
    Ok(Some(t))
}

fn verdict_name(v: PropertyVerdict) -> &'static str {
    match v {
        PropertyVerdict::Dissipative => "dissipative",
        PropertyVerdict::Asymptotic => "asymptotic",
        PropertyVerdict::DataDependent => "data_dependent",
        PropertyVerdict::Inconclusive => "inconclusive",
        PropertyVerdict::BlowUp => "blow_up",
    }
}

fn expected(v: VerdictDoc) -> PropertyVerdict {
    match v {
        VerdictDoc::Dissipative => PropertyVerdict::Dissipative,
        VerdictDoc::Asymptotic => PropertyVerdict::Asymptotic,
        VerdictDoc::DataDependent => PropertyVerdict::DataDependent,
        VerdictDoc::Inconclusive => PropertyVerdict::Inconclusive,
        VerdictDoc::BlowUp => PropertyVerdict::BlowUp,
    }
}

fn property_table(doc: &Document, r: &[f64], horizon: f64, dir: &Path) -> Result<Option<(bool, Table)>> {
    let d = &doc.diagnose;
    if d.scales.is_empty() {
        return Ok(None);
    }
    if d.scales.len() < 3 {
        bail!("diagnose.scales: Property P needs at least three scales");
    }
    let scenarios = d
        .scales
        .iter()
        .map(|&s| {
            let mut member = doc.clone();
            member.initial_scale *= s;
            convert::scenario(&member)
        })
        .collect::<Result<Vec<_>>>()?;
    let trajectories: Vec<Trajectory<f64>> = scenarios.par_iter().map(|sc| with_xvec(sc.clone(), r)).map(|sc| run(&sc)).collect();
    let series = trajectories
        .iter()
        .map(|tr| tr.snapshot_monitors().map_err(|e| anyhow!(e)))
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<EnsembleRun<'_, f64>> = series
        .iter()
        .zip(&trajectories)
        .map(|(s, tr)| EnsembleRun { monitors: s, blown_up: tr.status.is_blowup() })
        .collect();
    let eta = d.eta.unwrap_or(horizon / 2.0);
    let verdict = property_p_classify(&runs, r, eta).context("diagnose")?;
    let channel = wentzell_core::solver::xvec_channel_name(r);
    let grid = series[0].times();
    let mut header = vec!["t [time]".to_string()];
    header.extend(d.scales.iter().map(|s| format!("{channel} scale {s} [state]")));
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|k| {
            let mut row = vec![num(grid[k])];
            row.extend(series.iter().map(|s| s.channel(&channel).and_then(|c| c.get(k)).map_or("nan".into(), |&v| num(v))));
            row
        })
        .collect();
    write_csv(&dir.join("ensemble.csv"), &header, &rows)?;
    let mut t = Table::new();
    t.floats("scales", &d.scales).floats("r", r).set("eta", eta).set("verdict", verdict_name(verdict));
    let ok = match d.expect {
        Some(e) => {
            t.set("expected", verdict_name(expected(e)));
            expected(e) == verdict
        }
        None => true,
    };
    Ok(Some((ok, t)))
}

fn with_xvec(mut sc: Scenario<f64>, r: &[f64]) -> Scenario<f64> {
    if !sc.monitors.xvec.iter().any(|x| x == r) {
        sc.monitors.xvec.push(r.to_vec());
    }
    sc
}

fn diagnose_command(doc: &Document, dir: &Path, seed: u64) -> Result<Report> {
    let base = convert::scenario(doc)?;
    let r = doc.diagnose.r.clone().unwrap_or_else(|| vec![2.0; base.field_count()]);
    if r.len() != base.field_count() || r.iter().any(|&v| !(v >= 1.0)) {
        bail!("diagnose.r: need one exponent >= 1 per field");
    }
    let sc = with_xvec(base, &r);
    let (assumptions_hold, assumptions) = assumption_tables(doc, &sc)?;
    let tr = run(&sc);
    write_monitors(&dir.join("monitors.csv"), &tr.monitors)?;
    let (status_outcome, status) = status_table(&tr.status, tr.final_state().t);
    let mut summary = Table::new();
    summary
        .child("status", status)
        .child("scenario", scenario_table(&sc))
        .set("assumptions_hold", assumptions_hold)
        .list("assumption", assumptions);
    let mut ok = assumptions_hold;
    if status_outcome == Outcome::Success {
        summary.list("moser", moser_tables(&sc, &tr, doc.diagnose.moser_rungs, dir)?);
        let (certified, degiorgi) = degiorgi_table(doc, &sc, &tr, dir)?;
        ok &= certified;
        summary.child("degiorgi", degiorgi);
        if let Some((holds, decay)) = decay_table(doc, &sc, &tr)? {
            ok &= holds;
            summary.child("decay", decay);
        }
    }
    if let Some(trace) = trace_table(doc, &sc, seed)? {
        summary.child("trace_probe", trace);
    }
    if let Some((holds, property)) = property_table(doc, &r, sc.horizon, dir)? {
        ok &= holds;
        summary.child("property_p", property);
    }
    let outcome = match status_outcome {
        Outcome::Success if ok => Outcome::Success,
        Outcome::Success => Outcome::VerdictFails,
        other => other,
    };
    Ok(Report { outcome, summary })
}

fn speed(doc: &SpeedDoc) -> Result<WaveSpeed<f64>> {
    Ok(match doc {
        SpeedDoc::Constant { value } => WaveSpeed::Constant(*value),
        SpeedDoc::Power { coef, p } => WaveSpeed::Power { coef: *coef, p: *p },
        SpeedDoc::Expression { a } => WaveSpeed::parse(a).map_err(|e| anyhow!("waves.speed.a: {e}"))?,
    })
}

fn waves_command(doc: &Document, dir: &Path) -> Result<Report> {
    let w = doc.waves.as_ref().ok_or_else(|| anyhow!("waves: table is required"))?;
    let speed = speed(&w.speed)?;
    let [r0, r1] = w.r_range;
    let [t0, t1] = w.t_range;
    if !(r1 > r0 && t1 > t0 && t0 > 0.0) {
        bail!("waves: need r_range increasing and 0 < t_range[0] < t_range[1]");
    }
    let mut summary = Table::new();
    summary.floats("r_range", &w.r_range).floats("t_range", &w.t_range);
    match &w.profile {
        ProfileDoc::SelfSimilar => {
            if w.resolutions.len() < 2 || w.resolutions.iter().any(|&n| n < 3) {
                bail!("waves.resolutions: need at least two resolutions of 3 or more intervals");
            }
            let profile = WaveProfile { speed: speed.clone(), kind: ProfileKind::SelfSimilar, r_range: (r0, r1), t_range: (t0, t1) };
            let mut residuals = Vec::new();
            for &n in &w.resolutions {
                let samples = profile.tabulate(n + 1, n + 1).map_err(|e| anyhow!("waves: {e}"))?;
                let h = (r1 - r0) / n as f64;
                let dt = (t1 - t0) / n as f64;
                residuals.push((n, h, dt, claw_residual(&speed, &samples, h, dt).map_err(|e| anyhow!("waves: {e}"))?));
            }
            let mut orders = Vec::new();
            let mut rows = Vec::new();
            for (k, &(n, h, dt, e)) in residuals.iter().enumerate() {
                let order = if k == 0 {
                    f64::NAN
                } else {
                    let (prev_h, prev_e) = (residuals[k - 1].1, residuals[k - 1].3);
                    (prev_e / e).ln() / (prev_h / h).ln()
                };
                if k > 0 {
                    orders.push(order);
                }
                rows.push(vec![n.to_string(), num(h), num(dt), num(e), num(order)]);
            }
            write_csv(
                &dir.join("waves.csv"),
                &["n [intervals]".into(), "h [length]".into(), "dt [time]".into(), "residual [state/time]".into(), "order [1]".into()],
                &rows,
            )?;
            let n = w.resolutions[0];
            let samples = profile.tabulate(n + 1, n + 1).map_err(|e| anyhow!("waves: {e}"))?;
            let mut profile_rows = Vec::new();
            for (j, row) in samples.iter().enumerate() {
                let t = t0 + (t1 - t0) * j as f64 / n as f64;
                for (i, &u) in row.iter().enumerate() {
                    let r = r0 + (r1 - r0) * i as f64 / n as f64;
                    profile_rows.push(vec![num(r), num(t), num(u)]);
                }
            }
            write_csv(&dir.join("profile.csv"), &["r [length]".into(), "t [time]".into(), "u [state]".into()], &profile_rows)?;
            let least = orders.iter().copied().fold(f64::INFINITY, f64::min);
            let ok = least >= w.min_order;
            summary
                .set("profile", "self_similar")
                .floats("residuals", &residuals.iter().map(|r| r.3).collect::<Vec<_>>())
                .floats("orders", &orders)
                .set("min_order", w.min_order)
                .set("holds", ok);
            Ok(Report { outcome: if ok { Outcome::Success } else { Outcome::VerdictFails }, summary })
        }
        ProfileDoc::Traveling { eta, c } => {
            let eta = Expr::parse(eta, &["z"]).map_err(|e| anyhow!("waves.profile.eta: {e}"))?;
            let eta_fn = |z: f64| eta.eval(&[z]);
            let c = c.unwrap_or_else(|| speed.a(eta_fn(0.0)));
            let (z0, z1) = (r0 - c * t1, r1 - c * t0);
            let grid: Vec<f64> = (0..64).map(|k| z0 + (z1 - z0) * k as f64 / 63.0).collect();
            let report = traveling_wave_check(&speed, &eta_fn, c, &grid).map_err(|e| anyhow!("waves: {e}"))?;
            let ok = report.eigen_residual <= w.tolerance && report.claw_residual <= w.tolerance;
            summary
                .set("profile", "traveling")
                .set("c", c)
                .set("eigen_residual", report.eigen_residual)
                .set("claw_residual", report.claw_residual)
                .set("tolerance", w.tolerance)
                .set("holds", ok);
            Ok(Report { outcome: if ok { Outcome::Success } else { Outcome::VerdictFails }, summary })
        }
    }
}
