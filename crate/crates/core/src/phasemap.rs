//! Mode maps over the `(J_A/J_B, T_h/T_c)` plane.
//!
//! The physics depends on `J/T`, not on the two ratios alone, so every grid
//! carries an anchor `(J_B, T_c)` that fixes the absolute scales. Cells are
//! independent; with the `parallel` feature they are evaluated on the rayon
//! pool and collected in grid order, so output never depends on scheduling.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::DEFAULT_COUPLING_CAP_K;
use crate::cycle::{
    assemble_ledger, carnot_efficiency, mode_of, total_work, CycleSpec, OperationMode,
};
use crate::error::{Error, Result};
use crate::substance::Coupling;

/// Sign of `J_B`, i.e. which panel of the phase diagram a grid covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    BPositive,
    BNegative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::BPositive => 1.0,
            Branch::BNegative => -1.0,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Branch::BPositive => "b-positive",
            Branch::BNegative => "b-negative",
        }
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "b-positive" | "b_positive" | "positive" => Ok(Branch::BPositive),
            "b-negative" | "b_negative" | "negative" => Ok(Branch::BNegative),
            _ => Err(format!(
                "unknown branch `{s}` (expected b-positive or b-negative)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub j_b: Coupling,
    pub t_cold: f64,
}

impl Anchor {
    /// `|J_B|/k_B = 32 K` with the branch sign, `T_c = 20 K`.
    pub fn default_for(branch: Branch) -> Anchor {
        Anchor {
            j_b: Coupling::new(32.0 * branch.sign()).expect("within cap"),
            t_cold: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    coupling_ratio_axis: Vec<f64>,
    temp_ratio_axis: Vec<f64>,
    anchor: Anchor,
    branch: Branch,
}

fn strictly_monotone(axis: &[f64]) -> bool {
    let inc = axis.windows(2).all(|w| w[1] > w[0]);
    let dec = axis.windows(2).all(|w| w[1] < w[0]);
    inc || dec
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n).map(|k| start + step * k as f64).collect()
        }
    }
}

/// `n` evenly spaced points on the half-open interval `(start, end]`.
pub fn open_closed_axis(start: f64, end: f64, n: usize) -> Vec<f64> {
    let step = (end - start) / n as f64;
    (1..=n).map(|k| start + step * k as f64).collect()
}

impl SweepGrid {
    pub fn new(
        coupling_ratio_axis: Vec<f64>,
        temp_ratio_axis: Vec<f64>,
        anchor: Anchor,
        branch: Branch,
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidGrid(msg.to_string()));
        if coupling_ratio_axis.is_empty() || temp_ratio_axis.is_empty() {
            return bad("both axes need at least one value");
        }
        if !strictly_monotone(&coupling_ratio_axis) || !strictly_monotone(&temp_ratio_axis) {
            return bad("axes must be strictly monotone");
        }
        if coupling_ratio_axis.iter().any(|r| !r.is_finite()) {
            return bad("coupling ratios must be finite");
        }
        if temp_ratio_axis.iter().any(|t| !(t.is_finite() && *t > 1.0)) {
            return bad("temperature ratios must exceed 1");
        }
        if !(anchor.t_cold.is_finite() && anchor.t_cold > 0.0) {
            return Err(Error::InvalidTemperature(anchor.t_cold));
        }
        let jb = anchor.j_b.kelvin();
        if jb == 0.0 || jb.signum() != branch.sign() {
            return bad("anchor j_b must be non-zero with the sign selected by the branch");
        }
        let max_ratio = coupling_ratio_axis
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        if max_ratio * jb.abs() > DEFAULT_COUPLING_CAP_K {
            return bad("coupling ratio axis pushes j_a beyond the coupling cap");
        }
        let t_max = temp_ratio_axis.iter().fold(0.0f64, |m, t| m.max(*t)) * anchor.t_cold;
        if !t_max.is_finite() {
            return bad("hot temperature overflows");
        }
        Ok(SweepGrid {
            coupling_ratio_axis,
            temp_ratio_axis,
            anchor,
            branch,
        })
    }

    /// Uniform grid: `n_ratio` points on `[ratio_min, ratio_max]` and `n_temp`
    /// points on `(1, temp_ratio_max]`.
    pub fn uniform(
        branch: Branch,
        anchor: Anchor,
        (ratio_min, ratio_max, n_ratio): (f64, f64, usize),
        (temp_ratio_max, n_temp): (f64, usize),
    ) -> Result<Self> {
        Self::new(
            linspace(ratio_min, ratio_max, n_ratio),
            open_closed_axis(1.0, temp_ratio_max, n_temp),
            anchor,
            branch,
        )
    }

    /// 400 x 400 over `J_A/J_B in [-3, 3]`, `T_h/T_c in (1, 3]`, default anchor.
    pub fn default_for(branch: Branch) -> Self {
        Self::uniform(
            branch,
            Anchor::default_for(branch),
            (-3.0, 3.0, 400),
            (3.0, 400),
        )
        .expect("default grid is valid")
    }

    pub fn coupling_ratio_axis(&self) -> &[f64] {
        &self.coupling_ratio_axis
    }

    pub fn temp_ratio_axis(&self) -> &[f64] {
        &self.temp_ratio_axis
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn len(&self) -> usize {
        self.coupling_ratio_axis.len() * self.temp_ratio_axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cycle at one grid node; `None` for the zero-width cycle `J_A = J_B`.
    pub fn cycle_at(&self, coupling_ratio: f64, temp_ratio: f64) -> Option<CycleSpec> {
        let jb = self.anchor.j_b;
        let ja = Coupling::new(coupling_ratio * jb.kelvin()).ok()?;
        let tc = self.anchor.t_cold;
        CycleSpec::new(ja, jb, temp_ratio * tc, tc).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCell {
    pub coupling_ratio: f64,
    pub temp_ratio: f64,
    pub mode: OperationMode,
    pub work: f64,
    pub q_in: f64,
    pub q_out: f64,
    /// Present only in heat-engine mode.
    pub eta_over_carnot: Option<f64>,
}

pub fn evaluate_cell(grid: &SweepGrid, coupling_ratio: f64, temp_ratio: f64) -> ModeCell {
    let Some(spec) = grid.cycle_at(coupling_ratio, temp_ratio) else {
        return ModeCell {
            coupling_ratio,
            temp_ratio,
            mode: OperationMode::CarnotDegenerate,
            work: 0.0,
            q_in: 0.0,
            q_out: 0.0,
            eta_over_carnot: None,
        };
    };
    let ledger = assemble_ledger(&spec);
    let mode = mode_of(&ledger);
    let eta_over_carnot = (mode == OperationMode::HeatEngine).then(|| {
        let eta_c = carnot_efficiency(spec.t_hot(), spec.t_cold()).expect("t_hot > t_cold");
        ledger.work / ledger.q_in / eta_c
    });
    ModeCell {
        coupling_ratio,
        temp_ratio,
        mode,
        work: ledger.work,
        q_in: ledger.q_in,
        q_out: ledger.q_out,
        eta_over_carnot,
    }
}

fn cell_index(grid: &SweepGrid, k: usize) -> (f64, f64) {
    let n = grid.coupling_ratio_axis.len();
    (grid.coupling_ratio_axis[k % n], grid.temp_ratio_axis[k / n])
}

/// One cell per axis pair, row-major with the temperature ratio outer.
pub fn sweep(grid: &SweepGrid) -> Vec<ModeCell> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (r, t) = cell_index(grid, k);
                evaluate_cell(grid, r, t)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_serial(grid)
    }
}

pub fn sweep_serial(grid: &SweepGrid) -> Vec<ModeCell> {
    (0..grid.len())
        .map(|k| {
            let (r, t) = cell_index(grid, k);
            evaluate_cell(grid, r, t)
        })
        .collect()
}

/// Bisection roots of the net work along the coupling-ratio axis at a fixed
/// temperature ratio. The zero-width cycle `J_A = J_B` is a trivial root of
/// `W` for every temperature ratio and is excluded.
pub fn trace_zero_work_boundary(grid: &SweepGrid, temp_ratio: f64) -> Result<Vec<f64>> {
    if !(temp_ratio.is_finite() && temp_ratio > 1.0) {
        return Err(Error::InvalidGrid(format!(
            "temperature ratio must exceed 1, got {temp_ratio}"
        )));
    }
    let work = |r: f64| grid.cycle_at(r, temp_ratio).map(|s| total_work(&s));

    let mut axis: Vec<f64> = grid.coupling_ratio_axis.clone();
    axis.sort_by(f64::total_cmp);
    let lo = axis[0];
    let hi = axis[axis.len() - 1];
    // probe either side of the trivial root so its sign flip is not bracketed
    const PROBE: f64 = 1e-9;
    axis.retain(|&r| (r - 1.0).abs() > PROBE);
    if lo < 1.0 && hi > 1.0 {
        axis.push(1.0 - PROBE);
        axis.push(1.0 + PROBE);
        axis.sort_by(f64::total_cmp);
    }

    let samples: Vec<(f64, f64)> = axis
        .iter()
        .filter_map(|&r| work(r).map(|w| (r, w)))
        .collect();

    let mut roots = Vec::new();
    for (k, pair) in samples.windows(2).enumerate() {
        let (a, wa) = pair[0];
        let (b, wb) = pair[1];
        if wa == 0.0 {
            if k == 0 || samples[k - 1].1 != 0.0 {
                roots.push(a);
            }
            continue;
        }
        if a < 1.0 && b > 1.0 {
            continue;
        }
        if wa * wb < 0.0 {
            roots.push(bisect(&|r| work(r).unwrap_or(0.0), a, b, wa));
        }
    }
    if let Some(&(r, w)) = samples.last() {
        if w == 0.0 && roots.last() != Some(&r) {
            roots.push(r);
        }
    }
    Ok(roots)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= 1e-10 * mid.abs().max(f64::MIN_POSITIVE) || mid == a || mid == b {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(format!(
                "unknown export format `{s}` (expected csv or json)"
            )),
        }
    }
}

pub const EXPORT_COLUMNS: [&str; 7] = [
    "coupling_ratio",
    "temp_ratio",
    "mode",
    "work",
    "q_in",
    "q_out",
    "eta_over_carnot",
];

/// 17 significant digits; round-trips every finite f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn export<W: Write>(cells: &[ModeCell], format: ExportFormat, out: W) -> Result<()> {
    if cells.is_empty() {
        return Err(Error::EmptyExport);
    }
    match format {
        ExportFormat::Csv => export_csv(cells, out),
        ExportFormat::Json => export_json(cells, out),
    }
}

/// Like [`export`], writing to a file and attaching the path to I/O errors.
pub fn export_to_path(cells: &[ModeCell], format: ExportFormat, path: &Path) -> Result<()> {
    if cells.is_empty() {
        return Err(Error::EmptyExport);
    }
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    match export(cells, format, &mut w) {
        Err(Error::Csv(e)) if e.is_io_error() => {
            let csv::ErrorKind::Io(source) = e.into_kind() else {
                unreachable!()
            };
            return Err(io_err(source));
        }
        other => other?,
    }
    w.flush().map_err(io_err)
}

fn row(cell: &ModeCell) -> [String; 7] {
    [
        fmt_f64(cell.coupling_ratio),
        fmt_f64(cell.temp_ratio),
        cell.mode.token().to_string(),
        fmt_f64(cell.work),
        fmt_f64(cell.q_in),
        fmt_f64(cell.q_out),
        cell.eta_over_carnot.map(fmt_f64).unwrap_or_default(),
    ]
}

fn export_csv<W: Write>(cells: &[ModeCell], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(EXPORT_COLUMNS)?;
    for cell in cells {
        w.write_record(row(cell))?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

fn export_json<W: Write>(cells: &[ModeCell], mut out: W) -> Result<()> {
    let mut buf = String::from("[\n");
    for (k, cell) in cells.iter().enumerate() {
        let eta = cell
            .eta_over_carnot
            .map(fmt_f64)
            .unwrap_or_else(|| "null".into());
        let _ = write!(
            buf,
            "  {{\"coupling_ratio\": {}, \"temp_ratio\": {}, \"mode\": \"{}\", \"work\": {}, \
             \"q_in\": {}, \"q_out\": {}, \"eta_over_carnot\": {}}}",
            fmt_f64(cell.coupling_ratio),
            fmt_f64(cell.temp_ratio),
            cell.mode.token(),
            fmt_f64(cell.work),
            fmt_f64(cell.q_in),
            fmt_f64(cell.q_out),
            eta,
        );
        buf.push_str(if k + 1 < cells.len() { ",\n" } else { "\n" });
    }
    buf.push_str("]\n");
    out.write_all(buf.as_bytes()).map_err(|source| Error::Io {
        path: "<stream>".into(),
        source,
    })
}

/// Parses the CSV produced by [`export`].
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ModeCell>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(EXPORT_COLUMNS) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut cells = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let err = |message: String| Error::Parse { line, message };
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|e| err(format!("column {}: {e}", EXPORT_COLUMNS[k])))
        };
        let mode = rec[2].parse::<OperationMode>().map_err(err)?;
        let eta = if rec[6].is_empty() {
            None
        } else {
            Some(num(6)?)
        };
        cells.push(ModeCell {
            coupling_ratio: num(0)?,
            temp_ratio: num(1)?,
            mode,
            work: num(3)?,
            q_in: num(4)?,
            q_out: num(5)?,
            eta_over_carnot: eta,
        });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(branch: Branch) -> SweepGrid {
        SweepGrid::uniform(
            branch,
            Anchor::default_for(branch),
            (-3.0, 3.0, 25),
            (3.0, 20),
        )
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        let a = Anchor::default_for(Branch::BNegative);
        assert!(SweepGrid::new(vec![1.0, 2.0], vec![1.0, 2.0], a, Branch::BNegative).is_err());
        assert!(SweepGrid::new(vec![2.0, 1.0, 3.0], vec![2.0], a, Branch::BNegative).is_err());
        assert!(SweepGrid::new(vec![1.5], vec![2.0], a, Branch::BPositive).is_err());
        assert!(SweepGrid::new(vec![1e3], vec![2.0], a, Branch::BNegative).is_err());
        assert!(SweepGrid::new(vec![], vec![2.0], a, Branch::BNegative).is_err());
        assert!(SweepGrid::new(vec![3.0, 1.5], vec![2.0, 1.5], a, Branch::BNegative).is_ok());
    }

    #[test]
    fn axes_helpers() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(open_closed_axis(1.0, 3.0, 2), vec![2.0, 3.0]);
        let g = SweepGrid::default_for(Branch::BNegative);
        assert_eq!(g.len(), 160_000);
        assert!(g.temp_ratio_axis()[0] > 1.0);
        assert_eq!(*g.temp_ratio_axis().last().unwrap(), 3.0);
    }

    #[test]
    fn sweep_order_is_temp_outer() {
        let g = small(Branch::BNegative);
        let cells = sweep(&g);
        assert_eq!(cells.len(), 25 * 20);
        assert_eq!(cells[1].temp_ratio, cells[0].temp_ratio);
        assert_eq!(cells[25].coupling_ratio, cells[0].coupling_ratio);
        assert!(cells[25].temp_ratio > cells[0].temp_ratio);
    }

    #[test]
    fn section_six_cell_is_engine() {
        let a = Anchor::default_for(Branch::BNegative);
        let g = SweepGrid::new(vec![1.3125], vec![2.0], a, Branch::BNegative).unwrap();
        let cells = sweep(&g);
        assert_eq!(cells[0].mode, OperationMode::HeatEngine);
        let e = cells[0].eta_over_carnot.unwrap();
        assert!(e > 0.0 && e < 1.0);
    }

    #[test]
    fn near_carnot_cells_vanish() {
        let a = Anchor::default_for(Branch::BNegative);
        let g = SweepGrid::new(
            vec![1.0 - 1e-6, 1.0 + 1e-6],
            vec![1.0 + 1e-9, 1.0 + 2e-9],
            a,
            Branch::BNegative,
        )
        .unwrap();
        for c in sweep(&g) {
            assert!(c.work.abs() < 1e-12, "{c:?}");
            assert!(c.q_in.abs() < 1e-5 && c.q_out.abs() < 1e-5);
        }
    }

    #[test]
    fn zero_width_cell_is_carnot() {
        let a = Anchor::default_for(Branch::BNegative);
        let g = SweepGrid::new(vec![0.5, 1.0], vec![2.0], a, Branch::BNegative).unwrap();
        let cells = sweep(&g);
        assert_eq!(cells[1].mode, OperationMode::CarnotDegenerate);
        assert_eq!(cells[1].work, 0.0);
    }

    #[test]
    fn zero_work_roots_are_roots() {
        let g = SweepGrid::default_for(Branch::BNegative);
        let roots = trace_zero_work_boundary(&g, 2.0).unwrap();
        assert!(!roots.is_empty());
        for r in roots {
            assert!((r - 1.0).abs() > 1e-6);
            let s = g.cycle_at(r, 2.0).unwrap();
            let l = assemble_ledger(&s);
            assert!(l.work.abs() < 1e-8 * l.max_stroke_magnitude(), "{r}: {l:?}");
        }
    }

    #[test]
    fn zero_work_trace_without_sign_change_is_empty() {
        let a = Anchor::default_for(Branch::BNegative);
        let g = SweepGrid::new(linspace(1.5, 3.0, 16), vec![2.0], a, Branch::BNegative).unwrap();
        assert!(trace_zero_work_boundary(&g, 2.0).unwrap().is_empty());
        assert!(trace_zero_work_boundary(&g, 1.0).is_err());
    }

    #[test]
    fn single_cell_csv_has_two_lines() {
        let g = SweepGrid::new(
            vec![1.3125],
            vec![2.0],
            Anchor::default_for(Branch::BNegative),
            Branch::BNegative,
        )
        .unwrap();
        let mut buf = Vec::new();
        export(&sweep(&g), ExportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(
            text.starts_with("coupling_ratio,temp_ratio,mode,work,q_in,q_out,eta_over_carnot\n")
        );
        assert!(text.contains(",heat_engine,"));
    }

    #[test]
    fn export_rejects_empty() {
        assert!(matches!(
            export(&[], ExportFormat::Csv, Vec::new()),
            Err(Error::EmptyExport)
        ));
    }

    #[test]
    fn json_export_parses() {
        let cells = sweep(&small(Branch::BPositive));
        let mut buf = Vec::new();
        export(&cells, ExportFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), cells.len());
        let keys: Vec<&str> = arr[0]
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(keys.len(), 7);
        let back: Vec<ModeCell> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, cells);
    }

    #[test]
    fn export_to_unwritable_path_names_it() {
        let cells = sweep(&small(Branch::BPositive));
        let p = Path::new("/nonexistent-dir/out.csv");
        let err = export_to_path(&cells, ExportFormat::Csv, p).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
    }
}
