//! Parameter sweeps: certify every grid tuple, optionally audit the certified
//! ones on the disk, and export the region map as CSV and plot data.

use std::fmt::Write as _;

use crate::certify::{certify, sub_result_ids, Certificate, ConditionSet};
use crate::domains::{JanowskiConvention, JanowskiPair};
use crate::error::ScanError;
use crate::exec::{map_ordered, Execution};
use crate::hypergeom::{HypergeomParams, SeriesOptions};
use crate::report::{fmt_f64, ToTree, Tree};
use crate::verify::{
    reproduce_command, verify_on_disk_with, DiskGrid, FunctionalKind, Target, VerificationReport,
};

/// Largest number of tuples a single scan may visit.
pub const POINT_BUDGET: u64 = 10_000_000;
/// Feasible representatives kept in a summary.
pub const MAX_REPRESENTATIVES: usize = 100;

/// `steps` equally spaced values from `lo` to `hi` inclusive, or a single
/// fixed value when `steps == 1` and `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    lo: f64,
    hi: f64,
    steps: usize,
}

impl Range {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self, ScanError> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(ScanError::InvalidRange(format!(
                "non-finite bound in {lo}:{hi}"
            )));
        }
        let fixed = steps == 1 && lo == hi;
        if !fixed && !(lo < hi && steps >= 2) {
            return Err(ScanError::InvalidRange(format!(
                "{lo}:{hi}:{steps} needs lo < hi and at least 2 steps"
            )));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn fixed(x: f64) -> Result<Self, ScanError> {
        Self::new(x, x, 1)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Interpolated as `(lo (n-1-i) + hi i) / (n-1)` so both endpoints and
    /// "round" interior values come out exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                (self.lo * (last - i) + self.hi * i) / last
            })
            .collect()
    }
}

/// Where the `(C, D)` pairs of a Janowski scan come from.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSource {
    /// Cartesian product, filtered to `-1 <= D < C <= 1`.
    Grid {
        c: Range,
        d: Range,
    },
    List(Vec<(f64, f64)>),
}

impl PairSource {
    fn candidates(&self) -> u64 {
        match self {
            PairSource::Grid { c, d } => (c.steps() * d.steps()) as u64,
            PairSource::List(l) => l.len() as u64,
        }
    }

    /// Valid pairs in lexicographic `(C, D)` order, duplicates removed.
    pub fn pairs(&self) -> Vec<JanowskiPair> {
        let mut raw: Vec<(f64, f64)> = match self {
            PairSource::Grid { c, d } => c
                .values()
                .into_iter()
                .flat_map(|cv| d.values().into_iter().map(move |dv| (cv, dv)))
                .collect(),
            PairSource::List(l) => l.clone(),
        };
        raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        raw.dedup();
        raw.into_iter()
            .filter_map(|(c, d)| JanowskiPair::new(c, d).ok())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub condition_set: ConditionSet,
    pub u: Range,
    pub v: Range,
    pub w: Range,
    /// Required for the Janowski sets, ignored otherwise.
    pub pairs: Option<PairSource>,
    pub convention: JanowskiConvention,
    pub verify_certified: bool,
    pub grid: DiskGrid,
    pub series: SeriesOptions,
    pub execution: Execution,
}

impl ScanSpec {
    pub fn new(condition_set: ConditionSet, u: Range, v: Range, w: Range) -> Self {
        Self {
            condition_set,
            u,
            v,
            w,
            pairs: None,
            convention: JanowskiConvention::Plus,
            verify_certified: false,
            grid: DiskGrid::default(),
            series: SeriesOptions::default(),
            execution: Execution::default(),
        }
    }

    pub fn with_pairs(mut self, pairs: PairSource) -> Self {
        self.pairs = Some(pairs);
        self
    }

    pub fn with_verification(mut self, grid: DiskGrid) -> Self {
        self.verify_certified = true;
        self.grid = grid;
        self
    }
}

/// Functional and target whose membership a certificate of `set` predicts.
pub fn audit_plan(
    set: ConditionSet,
    janowski: Option<(JanowskiPair, JanowskiConvention)>,
) -> Option<(FunctionalKind, Target)> {
    let jt = janowski.map(|(j, c)| Target::Janowski(j, c));
    match set {
        ConditionSet::H1 => Some((FunctionalKind::Function, Target::ExpDisk)),
        ConditionSet::H2 => Some((FunctionalKind::ExpConvex, Target::ExpDisk)),
        ConditionSet::CorollaryStarlike => Some((FunctionalKind::ExpStarlike, Target::ExpDisk)),
        ConditionSet::JanowskiConvex => jt.map(|t| (FunctionalKind::JanowskiConvex, t)),
        ConditionSet::JanowskiStarlike => jt.map(|t| (FunctionalKind::JanowskiStarlike, t)),
    }
}

/// Condensed audit outcome stored on a row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowVerification {
    pub passed: bool,
    pub min_margin: f64,
    pub violations: usize,
    pub alerts: usize,
    /// Full report, kept only when the audit failed.
    pub failure: Option<Box<VerificationReport>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub pair: Option<(f64, f64)>,
    /// `(holds, margin)` per sub-result id, in [`sub_result_ids`] order.
    pub subs: Vec<(bool, f64)>,
    pub overall: bool,
    pub error: Option<String>,
    pub verification: Option<RowVerification>,
}

impl ScanRow {
    /// `u, v, w` followed by `C, D` when present.
    pub fn coordinates(&self) -> Vec<f64> {
        let mut c = vec![self.u, self.v, self.w];
        if let Some((cc, d)) = self.pair {
            c.extend([cc, d]);
        }
        c
    }
}

struct Tuple {
    u: f64,
    v: f64,
    w: f64,
    pair: Option<JanowskiPair>,
}

fn point_count(spec: &ScanSpec) -> u64 {
    let base = spec.u.steps() as u64 * spec.v.steps() as u64 * spec.w.steps() as u64;
    match (&spec.pairs, spec.condition_set.is_janowski()) {
        (Some(p), true) => base.saturating_mul(p.candidates()),
        _ => base,
    }
}

/// Certifies (and optionally audits) every tuple of `spec`, in
/// lexicographic `(u, v, w, C, D)` order.
pub fn run_scan(spec: &ScanSpec) -> Result<Vec<ScanRow>, ScanError> {
    let janowski = spec.condition_set.is_janowski();
    if janowski && spec.pairs.is_none() {
        return Err(ScanError::InvalidRange(
            "Janowski scans need C and D ranges or an explicit pair list".into(),
        ));
    }
    let count = point_count(spec);
    if count > POINT_BUDGET {
        return Err(ScanError::Budget(count));
    }
    let pairs: Vec<Option<JanowskiPair>> = match (&spec.pairs, janowski) {
        (Some(p), true) => p.pairs().into_iter().map(Some).collect(),
        _ => vec![None],
    };
    let mut tuples = Vec::with_capacity(count as usize);
    for &u in &spec.u.values() {
        for &v in &spec.v.values() {
            for &w in &spec.w.values() {
                for &pair in &pairs {
                    tuples.push(Tuple { u, v, w, pair });
                }
            }
        }
    }
    let ids = sub_result_ids(spec.condition_set);
    let rows = map_ordered(spec.execution, &tuples, |t| scan_point(spec, ids.len(), t));
    Ok(rows)
}

fn scan_point(spec: &ScanSpec, n_ids: usize, t: &Tuple) -> ScanRow {
    let mut row = ScanRow {
        u: t.u,
        v: t.v,
        w: t.w,
        pair: t.pair.map(|j| (j.c(), j.d())),
        subs: vec![(false, f64::NAN); n_ids],
        overall: false,
        error: None,
        verification: None,
    };
    let janowski = t.pair.map(|j| (j, spec.convention));
    let cert = HypergeomParams::new(t.u, t.v, t.w)
        .map_err(|e| e.to_string())
        .and_then(|p| certify(spec.condition_set, &p, janowski).map_err(|e| e.to_string()));
    let cert: Certificate = match cert {
        Ok(c) => c,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    row.subs = cert
        .sub_results
        .iter()
        .map(|s| (s.holds, s.margin))
        .collect();
    row.overall = cert.overall;
    if spec.verify_certified && cert.overall {
        let (kind, target) =
            audit_plan(spec.condition_set, janowski).expect("pair present for Janowski sets");
        // points inside a parallel scan are evaluated sequentially
        match verify_on_disk_with(
            kind,
            &cert.params,
            target,
            &spec.grid,
            &spec.series,
            Execution::Sequential,
        ) {
            Ok(rep) => {
                row.verification = Some(RowVerification {
                    passed: rep.passed,
                    min_margin: rep.min_margin,
                    violations: rep.violations,
                    alerts: rep.denominator_alerts.len(),
                    failure: (!rep.passed).then(|| Box::new(rep)),
                });
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

/// Column names shared by the CSV and plot-data outputs.
pub fn columns(set: ConditionSet, verified: bool) -> Vec<String> {
    let mut cols: Vec<String> = ["u", "v", "w"].iter().map(|s| s.to_string()).collect();
    if set.is_janowski() {
        cols.extend(["C".to_string(), "D".to_string()]);
    }
    for id in sub_result_ids(set) {
        cols.push(format!("{id}_holds"));
        cols.push(format!("{id}_margin"));
    }
    cols.push("overall".into());
    if verified {
        cols.extend(["verified".into(), "min_margin".into(), "violations".into()]);
    }
    cols
}

fn bit(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

fn row_fields(row: &ScanRow, verified: bool) -> Vec<String> {
    let mut f: Vec<String> = row.coordinates().into_iter().map(fmt_f64).collect();
    for &(holds, margin) in &row.subs {
        f.push(bit(holds));
        f.push(fmt_f64(margin));
    }
    f.push(bit(row.overall));
    if verified {
        match &row.verification {
            Some(v) => {
                f.push(bit(v.passed));
                f.push(fmt_f64(v.min_margin));
                f.push(v.violations.to_string());
            }
            None => f.extend([String::new(), String::new(), String::new()]),
        }
    }
    f
}

/// CSV with a header row, LF line endings, 17-digit numbers and 0/1 flags.
/// Verification columns are blank for rows that were not audited.
pub fn to_csv(set: ConditionSet, rows: &[ScanRow], verified: bool) -> String {
    let mut out = columns(set, verified).join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row_fields(row, verified).join(","));
        out.push('\n');
    }
    out
}

/// Whitespace-separated columns under a `# ` header; blank fields become `-`.
pub fn to_plot_data(set: ConditionSet, rows: &[ScanRow], verified: bool) -> String {
    let mut out = format!("# {}\n", columns(set, verified).join(" "));
    for row in rows {
        let fields: Vec<String> = row_fields(row, verified)
            .into_iter()
            .map(|f| if f.is_empty() { "-".to_string() } else { f })
            .collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub condition_set: ConditionSet,
    pub rows: usize,
    pub errors: usize,
    /// `(id, number of rows where it holds)`.
    pub holds_counts: Vec<(&'static str, usize)>,
    pub feasible: usize,
    /// Certified rows whose audit passed.
    pub verified: usize,
    /// Certified rows whose audit failed.
    pub counterexamples: usize,
    /// `None` when nothing is feasible.
    pub bounding_box: Option<BoundingBox>,
    pub representatives: Vec<Vec<f64>>,
}

pub fn summarize(set: ConditionSet, rows: &[ScanRow]) -> Result<ScanSummary, ScanError> {
    if rows.is_empty() {
        return Err(ScanError::EmptyInput);
    }
    let ids = sub_result_ids(set);
    let mut holds_counts: Vec<(&'static str, usize)> = ids.iter().map(|&id| (id, 0)).collect();
    let mut summary = ScanSummary {
        condition_set: set,
        rows: rows.len(),
        errors: 0,
        holds_counts: Vec::new(),
        feasible: 0,
        verified: 0,
        counterexamples: 0,
        bounding_box: None,
        representatives: Vec::new(),
    };
    for row in rows {
        if row.error.is_some() {
            summary.errors += 1;
        }
        for (slot, &(holds, _)) in holds_counts.iter_mut().zip(&row.subs) {
            slot.1 += usize::from(holds);
        }
        if !row.overall {
            continue;
        }
        summary.feasible += 1;
        match &row.verification {
            Some(v) if v.passed => summary.verified += 1,
            Some(_) => summary.counterexamples += 1,
            None => {}
        }
        let coords = row.coordinates();
        match &mut summary.bounding_box {
            None => {
                summary.bounding_box = Some(BoundingBox {
                    min: coords.clone(),
                    max: coords.clone(),
                })
            }
            Some(b) => {
                for (i, &x) in coords.iter().enumerate() {
                    b.min[i] = b.min[i].min(x);
                    b.max[i] = b.max[i].max(x);
                }
            }
        }
        if summary.representatives.len() < MAX_REPRESENTATIVES {
            summary.representatives.push(coords);
        }
    }
    summary.holds_counts = holds_counts;
    Ok(summary)
}

impl ToTree for ScanSummary {
    fn to_tree(&self) -> Tree {
        let nums = |v: &[f64]| Tree::List(v.iter().map(|&x| Tree::Num(x)).collect());
        let bbox = match &self.bounding_box {
            None => Tree::str("empty"),
            Some(b) => Tree::map()
                .entry("min", nums(&b.min))
                .entry("max", nums(&b.max))
                .build(),
        };
        Tree::map()
            .str("condition_set", self.condition_set.to_string())
            .int("rows", self.rows as i64)
            .int("errors", self.errors as i64)
            .entry(
                "holds_counts",
                Tree::Map(
                    self.holds_counts
                        .iter()
                        .map(|&(id, n)| (id.to_string(), Tree::Int(n as i64)))
                        .collect(),
                ),
            )
            .int("feasible", self.feasible as i64)
            .int("verified", self.verified as i64)
            .int("counterexamples", self.counterexamples as i64)
            .entry("bounding_box", bbox)
            .entry(
                "representatives",
                Tree::List(self.representatives.iter().map(|r| nums(r)).collect()),
            )
            .build()
    }
}

/// Concatenated `COUNTEREXAMPLE:` blocks for every certified row whose audit
/// failed, in row order.
pub fn counterexample_dump(rows: &[ScanRow], opts: &SeriesOptions) -> String {
    let mut out = String::new();
    for row in rows {
        if let Some(rep) = row.verification.as_ref().and_then(|v| v.failure.as_deref()) {
            let _ = write!(
                out,
                "{}",
                rep.counterexample_dump(&reproduce_command(rep, opts))
            );
        }
    }
    out
}
