//! Grid audits of the subordination conclusions: evaluate a functional of
//! `F` on a polar grid in the unit disk and test membership of every value in
//! the target region.
//!
//! A passing report is evidence, not proof. The conclusions concern the open
//! disk and only finitely many points are sampled.

use std::f64::consts::TAU;
use std::fmt;

use crate::domains::{
    in_exp_disk, in_exp_image, janowski_region_for, JanowskiConvention, JanowskiPair,
};
use crate::error::{HypergeomError, VerifyError};
use crate::exec::{map_ordered, Execution};
use crate::hypergeom::{
    gauss_2f1, gauss_2f1_deriv, jet, normalized_derivative_direct, Complex, HypergeomParams,
    SeriesOptions, DEFAULT_R_MAX,
};
use crate::report::{ToTree, Tree};

/// Denominators below this modulus are reported instead of classified.
pub const DENOMINATOR_TOL: f64 = 1e-8;
/// Counterexamples kept per report (the worst margins).
pub const MAX_COUNTEREXAMPLES: usize = 16;

const DEFAULT_RADII: usize = 32;
const DEFAULT_ANGLES: usize = 256;
const INNER_RADIUS: f64 = 0.05;

pub const LIMITATION: &str =
    "finite-grid evidence only: the conclusions concern the open unit disk \
     and are not certified by sampling";

/// Polar sample grid `r_i · e^{2πik/N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: usize,
    r_max: f64,
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles: usize, r_max: f64) -> Result<Self, VerifyError> {
        if !(r_max > 0.0 && r_max <= DEFAULT_R_MAX) {
            return Err(VerifyError::InvalidGrid(format!(
                "r_max = {r_max} outside (0, 0.99]"
            )));
        }
        if angles == 0 {
            return Err(VerifyError::InvalidGrid(
                "angle count must be positive".into(),
            ));
        }
        if radii.is_empty() {
            return Err(VerifyError::InvalidGrid("no radii".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r <= r_max)) {
            return Err(VerifyError::InvalidGrid(format!(
                "radii must lie in (0, {r_max}]"
            )));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(VerifyError::InvalidGrid(
                "radii must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            radii,
            angles,
            r_max,
        })
    }

    /// `n_radii` radii spaced geometrically from 0.05 to `r_max`, ending
    /// exactly at `r_max`.
    pub fn geometric(n_radii: usize, angles: usize, r_max: f64) -> Result<Self, VerifyError> {
        if n_radii == 0 {
            return Err(VerifyError::InvalidGrid(
                "radius count must be positive".into(),
            ));
        }
        let lo = INNER_RADIUS.min(r_max);
        let radii = if n_radii == 1 || lo == r_max {
            vec![r_max]
        } else {
            let ratio = (r_max / lo).ln();
            let last = n_radii - 1;
            (0..n_radii)
                .map(|i| {
                    if i == last {
                        r_max
                    } else {
                        lo * (ratio * i as f64 / last as f64).exp()
                    }
                })
                .collect()
        };
        Self::new(radii, angles, r_max)
    }

    /// The 32 × 256 grid out to `r_max`.
    pub fn default_for(r_max: f64) -> Result<Self, VerifyError> {
        Self::geometric(DEFAULT_RADII, DEFAULT_ANGLES, r_max)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Midpoints inserted between radii and the angle count doubled; every
    /// point of `self` reappears bit for bit.
    pub fn refined(&self) -> Self {
        let mut radii = Vec::with_capacity(2 * self.radii.len());
        for (i, &r) in self.radii.iter().enumerate() {
            if i > 0 {
                radii.push(0.5 * (self.radii[i - 1] + r));
            }
            radii.push(r);
        }
        Self {
            radii,
            angles: 2 * self.angles,
            r_max: self.r_max,
        }
    }

    /// Grid points, radius-major.
    pub fn points(&self) -> Vec<Complex> {
        let n = self.angles as f64;
        self.radii
            .iter()
            .flat_map(|&r| {
                (0..self.angles).map(move |k| Complex::from_polar(r, TAU * k as f64 / n))
            })
            .collect()
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self::default_for(DEFAULT_R_MAX).expect("default grid is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionalKind {
    /// `F(z)`
    Function,
    /// `1 + z𝔽''/𝔽'` with `𝔽 = zF`
    ExpConvex,
    /// `z g'/g` with `g = zF`
    ExpStarlike,
    /// `1 + zF''/F'`
    JanowskiConvex,
    /// `z g'/g` with `g = zF`, tested against a Janowski region
    JanowskiStarlike,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 5] = [
        FunctionalKind::Function,
        FunctionalKind::ExpConvex,
        FunctionalKind::ExpStarlike,
        FunctionalKind::JanowskiConvex,
        FunctionalKind::JanowskiStarlike,
    ];

    fn is_janowski(self) -> bool {
        matches!(
            self,
            FunctionalKind::JanowskiConvex | FunctionalKind::JanowskiStarlike
        )
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionalKind::Function => "Function",
            FunctionalKind::ExpConvex => "ExpConvex",
            FunctionalKind::ExpStarlike => "ExpStarlike",
            FunctionalKind::JanowskiConvex => "JanowskiConvex",
            FunctionalKind::JanowskiStarlike => "JanowskiStarlike",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `|x - 1| < 1 - 1/e`
    ExpDisk,
    /// `|Log x| < 1`
    ExpImage,
    Janowski(JanowskiPair, JanowskiConvention),
}

impl Target {
    /// Signed membership margin; the value 0 lies outside `exp(𝔻)`.
    pub fn margin(&self, x: Complex) -> f64 {
        match self {
            Target::ExpDisk => in_exp_disk(x).margin,
            Target::ExpImage => in_exp_image(x).map_or(f64::NEG_INFINITY, |m| m.margin),
            Target::Janowski(j, conv) => janowski_region_for(j, *conv).membership(x).margin,
        }
    }

    fn is_janowski(&self) -> bool {
        matches!(self, Target::Janowski(..))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::ExpDisk => f.write_str("ExpDisk"),
            Target::ExpImage => f.write_str("ExpImage"),
            Target::Janowski(j, conv) => {
                write!(f, "Janowski(C={}, D={}, {conv})", j.c(), j.d())
            }
        }
    }
}

fn ratio_checked(num: Complex, den: Complex, z: Complex) -> Result<Complex, HypergeomError> {
    let modulus = den.norm();
    if !(modulus >= DENOMINATOR_TOL) {
        return Err(HypergeomError::Denominator {
            modulus,
            re: z.re,
            im: z.im,
        });
    }
    Ok(num / den)
}

/// Value of the functional `kind` at `z`; `z = 0` returns the exact limit.
pub fn eval_functional(
    kind: FunctionalKind,
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<Complex, HypergeomError> {
    let one = Complex::new(1.0, 0.0);
    if z == Complex::new(0.0, 0.0) && kind != FunctionalKind::Function {
        return Ok(one);
    }
    match kind {
        FunctionalKind::Function => Ok(gauss_2f1(p, z, opts)?.value),
        FunctionalKind::ExpConvex => {
            let j = jet(p, z, opts)?;
            // 𝔽' = F + zF', 𝔽'' = 2F' + zF''
            let d1 = j.f0.value + z * j.f1.value;
            let d2 = 2.0 * j.f1.value + z * j.f2.value;
            Ok(one + z * ratio_checked(d2, d1, z)?)
        }
        FunctionalKind::ExpStarlike | FunctionalKind::JanowskiStarlike => {
            let f = gauss_2f1(p, z, opts)?.value;
            let f1 = gauss_2f1_deriv(p, z, 1, opts)?.value;
            // g = zF, g' = F + zF'
            let g = z * f;
            let g1 = f + z * f1;
            if !(f.norm() >= DENOMINATOR_TOL) {
                return Err(HypergeomError::Denominator {
                    modulus: f.norm(),
                    re: z.re,
                    im: z.im,
                });
            }
            Ok(z * g1 / g)
        }
        FunctionalKind::JanowskiConvex => {
            let f1 = gauss_2f1_deriv(p, z, 1, opts)?.value;
            let f2 = gauss_2f1_deriv(p, z, 2, opts)?.value;
            Ok(one + z * ratio_checked(f2, f1, z)?)
        }
    }
}

/// `z(zF)'/(zF) - [1 + z F''(u-1,v-1;w-1;z) / F'(u-1,v-1;w-1;z)]`.
///
/// The left side uses the directly summed `𝔽'`; the right side uses
/// parameter-shift derivatives of the lowered triple. When `(u-1)(v-1) = 0`
/// the lowered `F'` vanishes identically and the common factor is cancelled,
/// leaving `1 + z (uv/w) F(u+1,v+1;w+1;z) / F(u,v;w;z)`.
pub fn starlike_identity_residual(
    p: &HypergeomParams,
    z: Complex,
    opts: &SeriesOptions,
) -> Result<Complex, HypergeomError> {
    let lowered = p.shifted(-1.0)?;
    if z == Complex::new(0.0, 0.0) {
        return Ok(Complex::new(0.0, 0.0));
    }
    let f = gauss_2f1(p, z, opts)?.value;
    let nd = normalized_derivative_direct(p, z, opts)?.value;
    let lhs = ratio_checked(nd, f, z)?;
    let one = Complex::new(1.0, 0.0);
    let rhs = if lowered.u() * lowered.v() == 0.0 {
        let up = gauss_2f1(&p.shifted(1.0)?, z, opts)?.value;
        one + z * (p.u() * p.v() / p.w()) * ratio_checked(up, f, z)?
    } else {
        let d1 = gauss_2f1_deriv(&lowered, z, 1, opts)?.value;
        let d2 = gauss_2f1_deriv(&lowered, z, 2, opts)?.value;
        one + z * ratio_checked(d2, d1, z)?
    };
    Ok(lhs - rhs)
}

/// One sampled point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRecord {
    pub z: Complex,
    pub value: Complex,
    pub margin: f64,
}

/// A point whose functional could not be classified.
#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorAlert {
    pub z: Complex,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub kind: FunctionalKind,
    pub target: Target,
    pub params: HypergeomParams,
    pub radii: usize,
    pub angles: usize,
    pub r_max: f64,
    pub samples: usize,
    pub violations: usize,
    /// `+inf` when no point was classified.
    pub min_margin: f64,
    pub worst: Option<PointRecord>,
    pub denominator_alerts: Vec<DenominatorAlert>,
    /// Up to [`MAX_COUNTEREXAMPLES`] violations, most negative margin first.
    pub counterexamples: Vec<PointRecord>,
    pub passed: bool,
}

fn check_compatible(kind: FunctionalKind, target: &Target) -> Result<(), VerifyError> {
    if kind.is_janowski() != target.is_janowski() {
        return Err(VerifyError::IncompatibleTarget {
            kind: kind.to_string(),
            target: target.to_string(),
        });
    }
    Ok(())
}

fn is_parameter_error(e: &HypergeomError) -> bool {
    matches!(
        e,
        HypergeomError::ParamPole(_)
            | HypergeomError::NonFiniteParam
            | HypergeomError::InvalidTolerance(_)
            | HypergeomError::InvalidOrder(_)
    )
}

/// [`verify_on_disk_with`] on the default schedule.
pub fn verify_on_disk(
    kind: FunctionalKind,
    p: &HypergeomParams,
    target: Target,
    grid: &DiskGrid,
    opts: &SeriesOptions,
) -> Result<VerificationReport, VerifyError> {
    verify_on_disk_with(kind, p, target, grid, opts, Execution::default())
}

/// Evaluates `kind` at every grid point and aggregates membership in
/// `target`. Point failures become denominator alerts; only parameter
/// errors abort. The report does not depend on `exec`.
pub fn verify_on_disk_with(
    kind: FunctionalKind,
    p: &HypergeomParams,
    target: Target,
    grid: &DiskGrid,
    opts: &SeriesOptions,
    exec: Execution,
) -> Result<VerificationReport, VerifyError> {
    check_compatible(kind, &target)?;
    if grid.r_max() > opts.r_max {
        return Err(VerifyError::InvalidGrid(format!(
            "grid r_max {} exceeds series r_max {}",
            grid.r_max(),
            opts.r_max
        )));
    }
    let points = grid.points();
    let results = map_ordered(exec, &points, |&z| eval_functional(kind, p, z, opts));

    let mut violations = 0;
    let mut worst: Option<PointRecord> = None;
    let mut bad = Vec::new();
    let mut alerts = Vec::new();
    for (&z, res) in points.iter().zip(results) {
        let value = match res {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                alerts.push(DenominatorAlert {
                    z,
                    detail: format!("non-finite value {v}"),
                });
                continue;
            }
            Err(e) if is_parameter_error(&e) => return Err(e.into()),
            Err(e) => {
                alerts.push(DenominatorAlert {
                    z,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let margin = target.margin(value);
        let rec = PointRecord { z, value, margin };
        if !(margin > 0.0) {
            violations += 1;
            bad.push(rec);
        }
        if worst.is_none_or(|w| margin < w.margin) {
            worst = Some(rec);
        }
    }
    // stable sort keeps grid order among equal margins
    bad.sort_by(|a, b| a.margin.total_cmp(&b.margin));
    bad.truncate(MAX_COUNTEREXAMPLES);

    Ok(VerificationReport {
        kind,
        target,
        params: *p,
        radii: grid.radii().len(),
        angles: grid.angles(),
        r_max: grid.r_max(),
        samples: points.len(),
        violations,
        min_margin: worst.map_or(f64::INFINITY, |w| w.margin),
        worst,
        passed: violations == 0 && alerts.is_empty(),
        denominator_alerts: alerts,
        counterexamples: bad,
    })
}

fn complex_tree(z: Complex) -> Tree {
    Tree::List(vec![Tree::Num(z.re), Tree::Num(z.im)])
}

impl ToTree for PointRecord {
    fn to_tree(&self) -> Tree {
        Tree::map()
            .entry("z", complex_tree(self.z))
            .entry("value", complex_tree(self.value))
            .num("margin", self.margin)
            .build()
    }
}

impl ToTree for VerificationReport {
    fn to_tree(&self) -> Tree {
        let none = || Tree::str("none");
        Tree::map()
            .str("limitation", LIMITATION)
            .str("kind", self.kind.to_string())
            .str("target", self.target.to_string())
            .entry(
                "params",
                Tree::map()
                    .num("u", self.params.u())
                    .num("v", self.params.v())
                    .num("w", self.params.w())
                    .build(),
            )
            .entry(
                "grid",
                Tree::map()
                    .int("radii", self.radii as i64)
                    .int("angles", self.angles as i64)
                    .num("r_max", self.r_max)
                    .build(),
            )
            .int("samples", self.samples as i64)
            .int("violations", self.violations as i64)
            .num("min_margin", self.min_margin)
            .entry(
                "worst_point",
                self.worst.map_or_else(none, |w| complex_tree(w.z)),
            )
            .entry(
                "worst_value",
                self.worst.map_or_else(none, |w| complex_tree(w.value)),
            )
            .entry(
                "denominator_alerts",
                Tree::List(
                    self.denominator_alerts
                        .iter()
                        .map(|a| {
                            Tree::map()
                                .entry("z", complex_tree(a.z))
                                .str("detail", a.detail.clone())
                                .build()
                        })
                        .collect(),
                ),
            )
            .entry(
                "counterexamples",
                Tree::List(self.counterexamples.iter().map(ToTree::to_tree).collect()),
            )
            .bool("passed", self.passed)
            .build()
    }
}

impl VerificationReport {
    /// Self-contained record of a failed audit, prefixed `COUNTEREXAMPLE:`.
    /// `reproduce` is the command line that regenerates it.
    pub fn counterexample_dump(&self, reproduce: &str) -> String {
        let tree = Tree::map()
            .str("reproduce", reproduce)
            .entry("report", self.to_tree())
            .build();
        format!("COUNTEREXAMPLE:\n{}", tree.to_text())
    }
}

impl FunctionalKind {
    /// Command-line name.
    pub fn slug(self) -> &'static str {
        match self {
            FunctionalKind::Function => "function",
            FunctionalKind::ExpConvex => "exp-convex",
            FunctionalKind::ExpStarlike => "exp-starlike",
            FunctionalKind::JanowskiConvex => "janowski-convex",
            FunctionalKind::JanowskiStarlike => "janowski-starlike",
        }
    }
}

/// `hypercert verify ...` invocation reproducing a report on a geometric grid.
pub fn reproduce_command(report: &VerificationReport, opts: &SeriesOptions) -> String {
    let p = report.params;
    let mut cmd = format!(
        "hypercert verify {} --u {:?} --v {:?} --w {:?}",
        report.kind.slug(),
        p.u(),
        p.v(),
        p.w()
    );
    match report.target {
        Target::ExpDisk => cmd.push_str(" --target exp-disk"),
        Target::ExpImage => cmd.push_str(" --target exp-image"),
        Target::Janowski(j, conv) => {
            let conv = match conv {
                JanowskiConvention::Plus => "plus",
                JanowskiConvention::Minus => "minus",
            };
            cmd.push_str(&format!(
                " --target janowski --C {:?} --D {:?} --convention {conv}",
                j.c(),
                j.d()
            ));
        }
    }
    cmd.push_str(&format!(
        " --radii {} --angles {} --r-max {:?} --tol {:e} --max-terms {}",
        report.radii, report.angles, report.r_max, opts.tol, opts.max_terms
    ));
    cmd
}
