use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use spin_stirling::constants::kelvin_to_ev;
use spin_stirling::cycle::RegimeWarning;
use spin_stirling::magnetometry::{
    engine_curve as build_engine_curve, fit_bleaney_bowers, hot_axis, ingest_csv,
    write_engine_curve_csv, FitReport, GPolicy,
};
use spin_stirling::phasemap::{
    export_to_path, sweep as run_sweep, Anchor, ExportFormat, SweepGrid,
};
use spin_stirling::Error as CoreError;
use spin_stirling::{
    assemble_ledger, carnot_efficiency, mode_of, Branch, Coupling, CycleSpec, OperationMode,
    StrokeLedger,
};
use toml::Table;

use crate::config::{Layer, Resolved};
use crate::error::{CliError, CliResult};
use crate::{CycleArgs, EngineCurveArgs, FitArgs, SweepArgs};

pub const THREADS_ENV: &str = "SPIN_STIRLING_THREADS";

fn path_arg(p: Option<PathBuf>) -> Option<String> {
    p.map(|p| p.to_string_lossy().into_owned())
}

fn coupling(flag: &str, j: f64) -> CliResult<Coupling> {
    Coupling::new(j).map_err(|e| CliError::invalid(flag, e))
}

fn temperature(flag: &str, t: f64) -> CliResult<f64> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(CliError::Validation(format!(
            "{flag}: temperature must be finite and strictly positive, got {t} K"
        )))
    }
}

/// Names the flags behind a rejected cycle.
fn spec_error(err: CoreError) -> CliError {
    let flags = match err {
        CoreError::TemperatureOrder { .. } => "--th/--tc",
        CoreError::ZeroWidthCycle(_) => "--ja-k/--jb-k",
        _ => "--ja-k/--jb-k/--th/--tc",
    };
    CliError::invalid(flags, err)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn warn_regime(warnings: &[RegimeWarning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

#[derive(Serialize)]
struct CycleConfig {
    ja_k: f64,
    jb_k: f64,
    th: f64,
    tc: f64,
}

#[derive(Serialize)]
struct CycleReport {
    config: CycleConfig,
    #[serde(rename = "ledger_K")]
    ledger_k: StrokeLedger,
    #[serde(rename = "ledger_eV")]
    ledger_ev: StrokeLedger,
    mode: OperationMode,
    eta: Option<f64>,
    eta_carnot: f64,
}

fn ledger_in_ev(l: &StrokeLedger) -> StrokeLedger {
    StrokeLedger {
        q_ab: kelvin_to_ev(l.q_ab),
        q_bc: kelvin_to_ev(l.q_bc),
        q_cd: kelvin_to_ev(l.q_cd),
        q_da: kelvin_to_ev(l.q_da),
        work: kelvin_to_ev(l.work),
        q_in: kelvin_to_ev(l.q_in),
        q_out: kelvin_to_ev(l.q_out),
    }
}

pub fn cycle(args: CycleArgs, file: Option<&Table>) -> CliResult<()> {
    let mut layer = Layer::new("cycle", file);
    let ja = layer.required("ja-k", args.ja_k)?;
    let jb = layer.required("jb-k", args.jb_k)?;
    let th = layer.required("th", args.th)?;
    let tc = layer.required("tc", args.tc)?;
    let resolved = layer.finish()?;

    let spec = CycleSpec::new(
        coupling("--ja-k", ja)?,
        coupling("--jb-k", jb)?,
        temperature("--th", th)?,
        temperature("--tc", tc)?,
    )
    .map_err(spec_error)?;
    warn_regime(&spec.regime_warnings());

    let ledger = assemble_ledger(&spec);
    let mode = mode_of(&ledger);
    let report = CycleReport {
        config: CycleConfig {
            ja_k: ja,
            jb_k: jb,
            th,
            tc,
        },
        ledger_k: ledger,
        ledger_ev: ledger_in_ev(&ledger),
        mode,
        eta: (mode == OperationMode::HeatEngine).then(|| ledger.work / ledger.q_in),
        eta_carnot: carnot_efficiency(th, tc).map_err(|e| CliError::invalid("--th/--tc", e))?,
    };

    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
        s.push('\n');
        s
    } else {
        cycle_table(&report, &resolved)
    };
    print_stdout(&text)
}

fn cycle_table(r: &CycleReport, resolved: &Resolved) -> String {
    let config: Vec<String> = resolved
        .entries()
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect();
    let mut out = format!("# {}\n", config.join(", "));
    out += &format!("{:<8}{:>24}{:>24}\n", "", "E/k_B [K]", "E [eV]");
    let rows = [
        ("Q_AB", r.ledger_k.q_ab, r.ledger_ev.q_ab),
        ("Q_BC", r.ledger_k.q_bc, r.ledger_ev.q_bc),
        ("Q_CD", r.ledger_k.q_cd, r.ledger_ev.q_cd),
        ("Q_DA", r.ledger_k.q_da, r.ledger_ev.q_da),
        ("W", r.ledger_k.work, r.ledger_ev.work),
        ("Q_in", r.ledger_k.q_in, r.ledger_ev.q_in),
        ("Q_out", r.ledger_k.q_out, r.ledger_ev.q_out),
    ];
    for (name, k, ev) in rows {
        out += &format!("{name:<8}{k:>24.12e}{ev:>24.12e}\n");
    }
    out += &format!("{:<8}{:>24}\n", "mode", r.mode.token());
    match r.eta {
        Some(eta) => out += &format!("{:<8}{:>24.12}\n", "eta", eta),
        None => out += &format!("{:<8}{:>24}\n", "eta", "-"),
    }
    out += &format!("{:<8}{:>24.12}\n", "eta_C", r.eta_carnot);
    out
}

fn print_stdout(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn thread_count() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(raw) => raw.trim().parse::<usize>().map_err(|_| {
            CliError::Validation(format!(
                "{THREADS_ENV} must be a non-negative integer (0 = all cores), got `{raw}`"
            ))
        }),
    }
}

pub fn sweep(args: SweepArgs, file: Option<&Table>) -> CliResult<()> {
    let mut layer = Layer::new("sweep", file);
    let out: String = layer.required("out", path_arg(args.out))?;
    let branch_token = layer.or_default("branch", args.branch, "b-negative".to_string())?;
    let branch: Branch = branch_token
        .parse()
        .map_err(|e: String| CliError::Validation(format!("--branch: {e}")))?;
    let default_anchor = Anchor::default_for(branch);
    let jb = layer.or_default("jb-k", args.jb_k, default_anchor.j_b.kelvin())?;
    let tc = layer.or_default("tc", args.tc, default_anchor.t_cold)?;
    let ratio_min = layer.or_default("ratio-min", args.ratio_min, -3.0)?;
    let ratio_max = layer.or_default("ratio-max", args.ratio_max, 3.0)?;
    let ratio_steps = layer.or_default("ratio-steps", args.ratio_steps, 400)?;
    let temp_ratio_max = layer.or_default("temp-ratio-max", args.temp_ratio_max, 3.0)?;
    let temp_steps = layer.or_default("temp-steps", args.temp_steps, 400)?;
    let out = PathBuf::from(out);
    let inferred = match out.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => "json",
        _ => "csv",
    };
    let format_token = layer.or_default("format", args.format, inferred.to_string())?;
    let format: ExportFormat = format_token
        .parse()
        .map_err(|e: String| CliError::Validation(format!("--format: {e}")))?;
    let resolved = layer.finish()?;

    let anchor = Anchor {
        j_b: coupling("--jb-k", jb)?,
        t_cold: temperature("--tc", tc)?,
    };
    let grid = SweepGrid::uniform(
        branch,
        anchor,
        (ratio_min, ratio_max, ratio_steps),
        (temp_ratio_max, temp_steps),
    )
    .map_err(|e| {
        CliError::invalid(
            "--branch/--jb-k/--tc/--ratio-min/--ratio-max/--ratio-steps/--temp-ratio-max/--temp-steps",
            e,
        )
    })?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Validation(format!("{THREADS_ENV}: {e}")))?;
    let cells = pool.install(|| run_sweep(&grid));

    export_to_path(&cells, format, &out).map_err(CliError::output)?;
    let sidecar = resolved.write_sidecar(&out)?;

    let mut summary = format!(
        "wrote {} cells to {} (resolved config in {})\n",
        cells.len(),
        out.display(),
        sidecar.display()
    );
    for mode in OperationMode::ALL {
        let n = cells.iter().filter(|c| c.mode == mode).count();
        summary += &format!("{:<14}{n:>10}\n", mode.token());
    }
    print_stdout(&summary)
}

pub fn fit(args: FitArgs, file: Option<&Table>) -> CliResult<()> {
    let mut layer = Layer::new("fit", file);
    let data_path: String = layer.required("data", path_arg(args.data))?;
    let fix_g = layer.value("fix-g", args.fix_g)?;
    let free_g = layer
        .value("free-g", args.free_g.then_some(true))?
        .unwrap_or(false);
    let policy = match (fix_g, free_g) {
        (Some(_), true) => {
            return Err(CliError::Validation(
                "--fix-g and --free-g are mutually exclusive".into(),
            ))
        }
        (_, true) => GPolicy::Free {
            init: layer.or_default("g-init", args.g_init, 2.1)?,
        },
        (Some(g), false) => GPolicy::Fixed(g),
        (None, false) => {
            let GPolicy::Fixed(g) = GPolicy::default() else {
                unreachable!("default policy fixes g")
            };
            GPolicy::Fixed(layer.or_default("fix-g", None, g)?)
        }
    };
    let out = layer.value("out", path_arg(args.out))?.map(PathBuf::from);
    let resolved = layer.finish()?;

    let g = match policy {
        GPolicy::Fixed(g) => ("--fix-g", g),
        GPolicy::Free { init } => ("--g-init", init),
    };
    if !(g.1.is_finite() && g.1 > 0.0) {
        return Err(CliError::Validation(format!(
            "{}: Lande factor must be finite and strictly positive, got {}",
            g.0, g.1
        )));
    }

    let path = PathBuf::from(&data_path);
    let reader = File::open(&path).map_err(|e| CliError::Io(format!("{data_path}: {e}")))?;
    let data = ingest_csv(reader).map_err(|e| match CliError::data(e) {
        CliError::Data(m) => CliError::Data(format!("{data_path}: {m}")),
        other => other,
    })?;
    let result = fit_bleaney_bowers(&data, policy).map_err(CliError::data)?;
    if !result.converged {
        eprintln!(
            "warning: fit did not converge after {} iterations (scaled gradient {:.3e})",
            result.iterations, result.gradient_norm
        );
    }

    let mut json = serde_json::to_string_pretty(&FitReport::new(&result, &data))
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    json.push('\n');
    match out {
        Some(out) => {
            let mut w = create(&out)?;
            w.write_all(json.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            resolved.write_sidecar(&out)?;
            Ok(())
        }
        None => {
            eprint!("{}", resolved.to_toml());
            print_stdout(&json)
        }
    }
}

pub fn engine_curve(args: EngineCurveArgs, file: Option<&Table>) -> CliResult<()> {
    let mut layer = Layer::new("engine-curve", file);
    let ja = layer.required("ja-k", args.ja_k)?;
    let jb = layer.required("jb-k", args.jb_k)?;
    let tc = layer.required("tc", args.tc)?;
    let th_min = layer.required("th-min", args.th_min)?;
    let th_max = layer.required("th-max", args.th_max)?;
    let steps: usize = layer.required("steps", args.steps)?;
    let out = PathBuf::from(layer.required::<String>("out", path_arg(args.out))?);
    let resolved = layer.finish()?;

    let tc = temperature("--tc", tc)?;
    if !(th_min.is_finite() && th_min > tc) {
        return Err(CliError::Validation(format!(
            "--th-min must exceed --tc (th-min = {th_min} K, tc = {tc} K)"
        )));
    }
    if !(th_max.is_finite() && th_max >= th_min) {
        return Err(CliError::Validation(format!(
            "--th-max must be at least --th-min (th-max = {th_max} K, th-min = {th_min} K)"
        )));
    }
    if steps == 0 {
        return Err(CliError::Validation("--steps must be at least 1".into()));
    }
    let (ja, jb) = (coupling("--ja-k", ja)?, coupling("--jb-k", jb)?);
    let axis = hot_axis(th_min, th_max, steps);
    let points =
        build_engine_curve(ja, jb, tc, &axis).map_err(|e| CliError::invalid("--ja-k/--jb-k", e))?;
    if let Some(first) = axis.first() {
        let spec = CycleSpec::new(ja, jb, *first, tc).map_err(spec_error)?;
        warn_regime(&spec.regime_warnings());
    }

    let mut w = create(&out)?;
    write_engine_curve_csv(&points, &mut w).map_err(CliError::output)?;
    w.flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let sidecar = resolved.write_sidecar(&out)?;

    let engines = points
        .iter()
        .filter(|p| p.mode == OperationMode::HeatEngine)
        .count();
    print_stdout(&format!(
        "wrote {} rows to {} (resolved config in {}); {} of them run as a heat engine\n",
        points.len(),
        out.display(),
        sidecar.display(),
        engines
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_errors_name_the_responsible_flags() {
        let e = spec_error(CoreError::TemperatureOrder {
            t_hot: 10.0,
            t_cold: 20.0,
        });
        assert!(e.to_string().starts_with("--th/--tc:"));
        let e = spec_error(CoreError::ZeroWidthCycle(-32.0));
        assert!(e.to_string().starts_with("--ja-k/--jb-k:"));
    }

    #[test]
    fn temperatures_must_be_positive() {
        assert!(temperature("--tc", 0.0).is_err());
        assert!(temperature("--tc", f64::INFINITY).is_err());
        assert_eq!(temperature("--tc", 4.2).unwrap(), 4.2);
    }

    #[test]
    fn ev_ledger_scales_every_entry() {
        let spec = CycleSpec::from_kelvin(-42.0, -32.0, 40.0, 20.0).unwrap();
        let k = assemble_ledger(&spec);
        let ev = ledger_in_ev(&k);
        for (a, b) in [(k.q_ab, ev.q_ab), (k.work, ev.work), (k.q_out, ev.q_out)] {
            assert_eq!(kelvin_to_ev(a), b);
        }
    }
}
