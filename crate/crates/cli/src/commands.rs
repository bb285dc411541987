use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use surfcode::analysis::{self, crossing, error_dimension, fit_slope, run_point, PointSpec, RatePoint};
use surfcode::cycle::ErrorModel;
use surfcode::gate_verify::{self, Report};
use surfcode::lattice::build_planar;
use surfcode::logical::checks;
use surfcode::resource::{table1_tradeoffs, total_report, Count, FactoringParams, LogicalRateModel};

use crate::config::{parse_grid, parse_list, Config};
use crate::{Cli, Command, CurveArgs, EstimateArgs, Failure, ThresholdArgs, VerifyArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUITES: [&str; 9] = ["stabilizer_pair", "cnot", "phase", "distill", "identities", "braid", "hadamard", "scenarios", "lattice"];

pub fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => Config::parse(&fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?)?,
        None => Config::default(),
    };
    if let Some(d) = cli.dump_layout {
        print!("{}", build_planar(d)?.to_text());
        return Ok(());
    }
    let threads = config.pick(cli.threads, "threads")?.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    let Some(command) = cli.command else {
        return Err(Failure::Usage("no subcommand given".into()));
    };
    pool.install(|| match command {
        Command::Threshold(a) => threshold(&a, &config),
        Command::Verify(a) => verify(&a, &config),
        Command::Estimate(a) => estimate(&a, &config),
        Command::ModelCurves(a) => model_curves(&a, &config),
    })
}

/// Comment header: command, version, then one `key = value` per setting.
fn header(command: &str, settings: &[(&str, String)]) -> String {
    let mut s = format!("# surfcode {VERSION} {command}\n");
    for (k, v) in settings {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn threshold(a: &ThresholdArgs, cfg: &Config) -> Result<(), Failure> {
    let ds: Vec<usize> = parse_list(&cfg.pick(a.d.clone(), "d")?.unwrap_or_else(|| "3,5,7".into()))?;
    let ps = parse_grid(&cfg.pick(a.p.clone(), "p")?.unwrap_or_else(|| "0.002:0.012:0.002".into()))?;
    let shots = cfg.pick(a.shots, "shots")?.unwrap_or(10_000);
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(1);
    let rounds = cfg.pick(a.rounds, "rounds")?.unwrap_or(0);
    let classes: Vec<u8> = parse_list(&cfg.pick(a.classes.clone(), "classes")?.unwrap_or_else(|| "0,1,2".into()))?;
    let out = cfg.pick(a.out.clone(), "out")?;
    cfg.finish()?;
    if ds.is_empty() || ds.iter().any(|&d| !(3..=11).contains(&d)) {
        return Err(Failure::Usage(format!("distances {ds:?} must be non-empty and within 3..=11")));
    }
    if ps.is_empty() || ps.iter().any(|&p| !(p > 0.0 && p <= 0.02)) {
        return Err(Failure::Usage("p-grid must be non-empty and within (0, 0.02]".into()));
    }
    if shots == 0 {
        return Err(Failure::Usage("shots must be positive".into()));
    }
    if classes.is_empty() || classes.iter().any(|&c| c > 2) {
        return Err(Failure::Usage(format!("classes {classes:?} must be a non-empty subset of 0,1,2")));
    }
    let model = |p: f64| ErrorModel {
        p0: if classes.contains(&0) { p } else { 0.0 },
        p1: if classes.contains(&1) { p } else { 0.0 },
        p2: if classes.contains(&2) { p } else { 0.0 },
    };
    let mut text = header(
        "threshold",
        &[
            ("d", join(&ds)),
            ("p", join(&ps)),
            ("shots", shots.to_string()),
            ("seed", seed.to_string()),
            ("rounds", rounds.to_string()),
            ("classes", join(&classes)),
        ],
    );
    let total = ds.len() * ps.len();
    let mut points = Vec::with_capacity(total);
    for &d in &ds {
        for &p in &ps {
            let mut spec = PointSpec::new(d, p, model(p), shots, seed);
            if rounds > 0 {
                spec.rounds = rounds;
            }
            let pt = run_point(&spec)?;
            points.push(pt);
            eprintln!("[{}/{total}] d={d} p={p} failures={}", points.len(), pt.failures);
        }
    }
    text.push_str(&analysis::rates_csv(&points));
    text.push_str(&summary(&ds, &points));
    emit(out.as_deref(), &text)
}

/// Crossings of consecutive distances and per-distance slopes below the
/// crossing of the two largest, as comment lines.
fn summary(ds: &[usize], points: &[RatePoint]) -> String {
    let mut sorted = ds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let of = |d: usize| -> Vec<RatePoint> { points.iter().copied().filter(|p| p.d == d).collect() };
    let mut s = String::new();
    let mut last = None;
    for w in sorted.windows(2) {
        match crossing(&of(w[0]), &of(w[1])) {
            Ok(x) => {
                let _ = writeln!(s, "# crossing d{}/d{} = {x:.6}", w[0], w[1]);
                last = Some(x);
            }
            Err(_) => {
                let _ = writeln!(s, "# crossing d{}/d{} = none in range", w[0], w[1]);
                last = None;
            }
        }
    }
    let below = last.unwrap_or(f64::INFINITY);
    for &d in &sorted {
        let pts: Vec<RatePoint> = of(d).into_iter().filter(|p| p.p < below).collect();
        let de = error_dimension(d).map(|x| x.to_string()).unwrap_or_default();
        match fit_slope(&pts) {
            Ok(m) => {
                let _ = writeln!(s, "# slope d{d} = {m:.4} (d_e = {de})");
            }
            Err(_) => {
                let _ = writeln!(s, "# slope d{d} = n/a (d_e = {de})");
            }
        }
    }
    s
}

type Scripts = Vec<(String, Vec<String>)>;

fn suite(name: &str, seed: u64) -> Result<(Report, Scripts), Failure> {
    let mut r = Report::default();
    let mut scripts = Vec::new();
    match name {
        "stabilizer_pair" => r.extend(gate_verify::verify_two_qubit_stabilizer(seed)?),
        "cnot" => {
            r.extend(gate_verify::verify_cnot_heisenberg());
            r.extend(gate_verify::verify_same_type_cnot(seed)?);
        }
        "phase" => {
            r.extend(gate_verify::verify_s_circuit(seed)?);
            r.extend(gate_verify::verify_t_circuit(seed)?);
            r.extend(gate_verify::verify_sign_tables(seed)?);
        }
        "distill" => r.extend(gate_verify::verify_distillation(seed)?),
        "identities" => {
            r.extend(gate_verify::verify_gate_identities());
            r.extend(gate_verify::verify_backends_agree(seed)?);
        }
        "braid" => {
            let (b, t) = checks::braid_checks(seed)?;
            r.extend(b);
            scripts.push(("braid".into(), t));
        }
        "hadamard" => {
            let (h, t) = checks::hadamard_checks(seed)?;
            r.extend(h);
            scripts.push(("hadamard".into(), t));
        }
        "scenarios" => {
            let (s, t) = checks::scenario_checks(seed)?;
            r.extend(s);
            scripts.extend(t);
        }
        "lattice" => r.extend(checks::lattice_checks()?),
        other => return Err(Failure::Usage(format!("unknown suite {other:?}; choose from {}", SUITES.join(", ")))),
    }
    Ok((r, scripts))
}

fn verify(a: &VerifyArgs, cfg: &Config) -> Result<(), Failure> {
    let only = cfg.pick(a.only.clone(), "only")?;
    let emit_dir = cfg.pick(a.emit_scripts.clone(), "emit-scripts")?;
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(1);
    cfg.finish()?;
    let names: Vec<String> = match &only {
        Some(list) => parse_list(list)?,
        None => SUITES.iter().map(|s| s.to_string()).collect(),
    };
    let mut text = header("verify", &[("seed", seed.to_string()), ("only", names.join(","))]);
    let mut report = Report::default();
    let mut scripts = Vec::new();
    for name in &names {
        let (r, s) = suite(name, seed)?;
        eprintln!("suite {name}: {} checks", r.checks.len());
        report.extend(r);
        scripts.extend(s);
    }
    if let Some(dir) = emit_dir {
        fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("creating {}: {e}", dir.display())))?;
        for (name, lines) in &scripts {
            let file = dir.join(format!("{}.txt", name.replace([' ', '/'], "_")));
            let body = format!("{}{}\n", header("verify script", &[("seed", seed.to_string()), ("scenario", name.clone())]), lines.join("\n"));
            fs::write(&file, body).map_err(|e| Failure::Usage(format!("writing {}: {e}", file.display())))?;
        }
    }
    let failed = report.failures().count();
    text.push_str(&report.to_string());
    let _ = writeln!(text, "# {} checks, {failed} failed", report.checks.len());
    print!("{text}");
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} checks failed")));
    }
    Ok(())
}

fn estimate(a: &EstimateArgs, cfg: &Config) -> Result<(), Failure> {
    let mut params = FactoringParams::reference();
    params.n_bits = cfg.pick(a.bits, "bits")?.unwrap_or(params.n_bits);
    params.t_meas = cfg.pick(a.tmeas_ns, "tmeas-ns")?.map_or(params.t_meas, |ns| ns * 1e-9);
    params.cycle_time = cfg.pick(a.cycle_ns, "cycle-ns")?.map_or(params.cycle_time, |ns| ns * 1e-9);
    params.p = cfg.pick(a.p, "p")?.unwrap_or(params.p);
    params.p_inject = cfg.pick(a.p_inject, "p-inject")?.unwrap_or(params.p_inject);
    let row = cfg.pick(a.table1_row, "table1-row")?;
    let model = cfg.pick(a.model.clone(), "model")?.unwrap_or_else(|| "factoring".into());
    let format = cfg.pick(a.format.clone(), "format")?.unwrap_or_else(|| "text".into());
    cfg.finish()?;
    params.model = match model.as_str() {
        "factoring" => LogicalRateModel::factoring(),
        "power-law" => LogicalRateModel::power_law(),
        other => return Err(Failure::Usage(format!("unknown model {other:?}; use factoring or power-law"))),
    };
    let report = total_report(&params)?;
    let mut text = header(
        "estimate",
        &[
            ("bits", params.n_bits.to_string()),
            ("tmeas-ns", format!("{}", params.t_meas * 1e9)),
            ("cycle-ns", format!("{}", params.cycle_time * 1e9)),
            ("p", format!("{:e}", params.p)),
            ("p-inject", format!("{}", params.p_inject)),
            ("model", model),
        ],
    );
    match format.as_str() {
        "text" => text.push_str(&report.to_string()),
        "kv" => text.push_str(&report.key_values()),
        other => return Err(Failure::Usage(format!("unknown format {other:?}; use text or kv"))),
    }
    if let Some(row) = row {
        let t = table1_tradeoffs(params.n_bits, row)?;
        let show = |c: &Count| if c.big_o { c.expr.to_string() } else { format!("{} = {:.3e}", c.expr, c.value) };
        let _ = writeln!(text, "table1_row = {row}");
        let _ = writeln!(text, "table1_logical_qubits = {}", show(&t.logical_qubits));
        let _ = writeln!(text, "table1_sequential_toffolis = {}", show(&t.sequential_toffolis));
        let _ = writeln!(text, "table1_total_toffolis = {}", show(&t.total_toffolis));
    }
    print!("{text}");
    Ok(())
}

fn model_curves(a: &CurveArgs, cfg: &Config) -> Result<(), Failure> {
    let curve = cfg.pick(a.curve.clone(), "curve")?.unwrap_or_else(|| "rate".into());
    let ds = cfg.pick(a.d.clone(), "d")?.unwrap_or_else(|| "3,7,11,25,55".into());
    let ps = cfg.pick(a.p.clone(), "p")?.unwrap_or_else(|| "0.0005:0.01:0.0005".into());
    let targets = cfg.pick(a.targets.clone(), "targets")?.unwrap_or_else(|| "1e-10,1e-15,1e-20".into());
    let ratios = cfg.pick(a.ratios.clone(), "ratios")?.unwrap_or_else(|| "0.05:0.95:0.05".into());
    let out = cfg.pick(a.out.clone(), "out")?;
    cfg.finish()?;
    let text = match curve.as_str() {
        "rate" => {
            let ds: Vec<usize> = parse_list(&ds)?;
            let ps = parse_grid(&ps)?;
            let mut t = header("model-curves", &[("curve", curve.clone()), ("d", join(&ds)), ("p", join(&ps))]);
            t.push_str(&rate_curves(&ds, &ps)?);
            t
        }
        "qubits" => {
            let targets: Vec<f64> = parse_list(&targets)?;
            let ratios = parse_grid(&ratios)?;
            let mut t = header("model-curves", &[("curve", curve.clone()), ("targets", targets.iter().map(|t| format!("{t:e}")).collect::<Vec<_>>().join(",")), ("ratios", join(&ratios))]);
            t.push_str(&analysis::curves_csv(&analysis::qubit_curves(&targets, &ratios)?));
            t
        }
        other => return Err(Failure::Usage(format!("unknown curve {other:?}; use rate or qubits"))),
    };
    emit(out.as_deref(), &text)
}

pub const RATE_CURVE_HEADER: &str = "d,p,P_L_empirical,P_L_statistical";

/// Fitted power law and row-counting estimate for each `(d, p)`.
fn rate_curves(ds: &[usize], ps: &[f64]) -> Result<String, Failure> {
    let mut s = format!("{RATE_CURVE_HEADER}\n");
    for &d in ds {
        if d < 3 || d % 2 == 0 {
            return Err(Failure::Usage(format!("distance {d} must be odd and at least 3")));
        }
        for &p in ps {
            let _ = writeln!(s, "{d},{p},{:.6e},{:.6e}", analysis::empirical_pl(p, d)?, analysis::statistical_pl(p, d)?);
        }
    }
    Ok(s)
}
