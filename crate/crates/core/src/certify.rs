//! Parameter conditions for exponential and Janowski convexity/starlikeness of
//! `F(u,v;w;z)`, evaluated exactly as stated and returned as certificates.
//!
//! Margins are signed so that a positive margin means the inequality holds
//! with room to spare: `rhs - lhs` for `<`/`<=`, `lhs - rhs` for `>`/`>=`.
//! Strict relations hold iff `margin > 0`, non-strict ones iff `margin >= 0`.
//! A NaN margin marks a sub-condition that could not be evaluated (vanishing
//! denominator); it never holds.

use std::f64::consts::E;
use std::fmt;

use crate::domains::{JanowskiConvention, JanowskiPair};
use crate::error::CertifyError;
use crate::hypergeom::HypergeomParams;
use crate::report::{ToTree, Tree};

/// Denominators smaller than this make a sub-condition not evaluable.
pub const DIVISION_TOL: f64 = 1e-12;
/// Minimum `C - D` accepted by the Janowski checks.
pub const MIN_PAIR_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionSet {
    H1,
    H2,
    CorollaryStarlike,
    JanowskiConvex,
    JanowskiStarlike,
}

impl ConditionSet {
    pub const ALL: [ConditionSet; 5] = [
        ConditionSet::H1,
        ConditionSet::H2,
        ConditionSet::CorollaryStarlike,
        ConditionSet::JanowskiConvex,
        ConditionSet::JanowskiStarlike,
    ];

    pub fn is_janowski(self) -> bool {
        matches!(
            self,
            ConditionSet::JanowskiConvex | ConditionSet::JanowskiStarlike
        )
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionSet::H1 => "H1",
            ConditionSet::H2 => "H2",
            ConditionSet::CorollaryStarlike => "CorollaryStarlike",
            ConditionSet::JanowskiConvex => "JanowskiConvex",
            ConditionSet::JanowskiStarlike => "JanowskiStarlike",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
    Greater,
    GreaterEq,
}

impl Relation {
    fn margin(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Relation::Less | Relation::LessEq => rhs - lhs,
            Relation::Greater | Relation::GreaterEq => lhs - rhs,
        }
    }

    fn holds(self, margin: f64) -> bool {
        match self {
            Relation::Less | Relation::Greater => margin > 0.0,
            Relation::LessEq | Relation::GreaterEq => margin >= 0.0,
        }
    }
}

/// How a sub-result enters the overall verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    /// Must hold.
    Requirement,
    /// Selects which conditional requirements apply.
    Guard,
    /// Must hold whenever the named guard holds.
    Conditional(&'static str),
    /// Reported for comparison only.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubResult {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub holds: bool,
    pub margin: f64,
    pub role: Role,
}

impl SubResult {
    fn new(id: &'static str, lhs: f64, relation: Relation, rhs: f64, role: Role) -> Self {
        let margin = relation.margin(lhs, rhs);
        Self {
            id,
            lhs,
            rhs,
            relation,
            holds: relation.holds(margin),
            margin,
            role,
        }
    }

    pub fn evaluable(&self) -> bool {
        !self.margin.is_nan()
    }
}

impl ToTree for SubResult {
    fn to_tree(&self) -> Tree {
        Tree::map()
            .str("id", self.id)
            .num("lhs", self.lhs)
            .num("rhs", self.rhs)
            .bool("holds", self.holds)
            .num("margin", self.margin)
            .build()
    }
}

/// Quadratic coefficients of `H(x) = h1 x² + h2 x + h3` in the Janowski case
/// analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HCoefficients {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub condition_set: ConditionSet,
    /// Parameters as supplied (before any shift).
    pub params: HypergeomParams,
    pub janowski: Option<(JanowskiPair, JanowskiConvention)>,
    pub interpretation_notes: Vec<String>,
    pub sub_results: Vec<SubResult>,
    pub overall: bool,
}

impl Certificate {
    fn from_parts(
        condition_set: ConditionSet,
        params: HypergeomParams,
        janowski: Option<(JanowskiPair, JanowskiConvention)>,
        interpretation_notes: Vec<String>,
        sub_results: Vec<SubResult>,
    ) -> Self {
        let overall = overall_verdict(&sub_results);
        Self {
            condition_set,
            params,
            janowski,
            interpretation_notes,
            sub_results,
            overall,
        }
    }

    pub fn sub(&self, id: &str) -> Option<&SubResult> {
        self.sub_results.iter().find(|s| s.id == id)
    }

    /// Sub-results that take part in the verdict at this point: requirements
    /// and the conditionals whose guard holds.
    pub fn applicable(&self) -> Vec<&SubResult> {
        self.sub_results
            .iter()
            .filter(|s| match s.role {
                Role::Requirement => true,
                Role::Conditional(guard) => self.sub(guard).is_some_and(|g| g.holds),
                Role::Guard | Role::Info => false,
            })
            .collect()
    }
}

fn overall_verdict(subs: &[SubResult]) -> bool {
    let guard_holds = |id: &str| subs.iter().any(|s| s.id == id && s.holds);
    subs.iter().all(|s| match s.role {
        Role::Requirement => s.holds,
        Role::Conditional(guard) => !guard_holds(guard) || s.holds,
        Role::Guard | Role::Info => true,
    })
}

impl ToTree for Certificate {
    fn to_tree(&self) -> Tree {
        let mut params = Tree::map()
            .num("u", self.params.u())
            .num("v", self.params.v())
            .num("w", self.params.w());
        if let Some((j, conv)) = self.janowski {
            params = params
                .num("C", j.c())
                .num("D", j.d())
                .str("convention", conv.to_string());
        }
        Tree::map()
            .str("condition_set", self.condition_set.to_string())
            .entry("params", params.build())
            .entry(
                "interpretation_notes",
                Tree::List(self.interpretation_notes.iter().map(Tree::str).collect()),
            )
            .entry(
                "sub_results",
                Tree::List(self.sub_results.iter().map(ToTree::to_tree).collect()),
            )
            .bool("overall", self.overall)
            .build()
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() < DIVISION_TOL {
        f64::NAN
    } else {
        num / den
    }
}

/// Exponential convexity conditions (i)–(iii) for `F`.
pub fn check_h1(p: &HypergeomParams) -> Certificate {
    let (u, v, w) = (p.u(), p.v(), p.w());
    let subs = vec![
        SubResult::new(
            "h1.i",
            2.0 * (u + 2.0) * (v + 2.0),
            Relation::Less,
            3.0 * (w + 2.0),
            Role::Requirement,
        ),
        SubResult::new(
            "h1.ii",
            ratio(
                (u + 1.0) * (v + 1.0) * (w + 2.0),
                (u + 2.0) * (v + 2.0) * (w + 1.0),
            ),
            Relation::Less,
            2.0 / 3.0,
            Role::Requirement,
        ),
        SubResult::new(
            "h1.iii",
            (ratio(u * (u + 1.0) * v * (v + 1.0), 2.0 * w * (w + 1.0))
                + ratio(u * v, w * (E - 1.0)))
            .abs(),
            Relation::Less,
            1.0 / E,
            Role::Requirement,
        ),
    ];
    Certificate::from_parts(ConditionSet::H1, *p, None, Vec::new(), subs)
}

fn h2_subs(p: &HypergeomParams) -> Vec<SubResult> {
    let (u, v, w) = (p.u(), p.v(), p.w());
    let a = (u + 1.0) * (v + 1.0);
    let b = (u + 2.0) * (v + 2.0);
    let v_lhs = ratio(u * v, w)
        + 1.0 / (E - 1.0)
        + ratio(
            3.0 * u * (u + 1.0) * v * (v + 1.0) * (E - 1.0),
            E * w * (w + 1.0),
        )
        + ratio(2.0 * u * v, w * E);
    vec![
        SubResult::new(
            "h2.i",
            3.0 * a,
            Relation::Less,
            2.0 * (w + 1.0),
            Role::Requirement,
        ),
        SubResult::new(
            "h2.ii",
            4.0 * (w + 1.0) * u * v,
            Relation::Less,
            3.0 * a * w,
            Role::Requirement,
        ),
        SubResult::new(
            "h2.iii",
            4.0 * b,
            Relation::Less,
            2.0 * (w + 2.0),
            Role::Requirement,
        ),
        SubResult::new(
            "h2.iv",
            8.0 * (w + 2.0) * a,
            Relation::Less,
            9.0 * b * (w + 1.0),
            Role::Requirement,
        ),
        SubResult::new(
            "h2.v",
            v_lhs.abs(),
            Relation::Less,
            1.0 / E,
            Role::Requirement,
        ),
    ]
}

/// Exponential convexity conditions (i)–(v) for `z·F`.
pub fn check_h2(p: &HypergeomParams) -> Certificate {
    Certificate::from_parts(ConditionSet::H2, *p, None, Vec::new(), h2_subs(p))
}

/// The H2 conditions at `(u-1, v-1, w-1)`, certifying exponential
/// starlikeness of `z·F(u,v;w;z)`.
pub fn check_corollary_starlike(p: &HypergeomParams) -> Result<Certificate, CertifyError> {
    let shifted = p.shifted(-1.0)?;
    Ok(Certificate::from_parts(
        ConditionSet::CorollaryStarlike,
        *p,
        None,
        vec![SHIFT_NOTE.to_string()],
        h2_subs(&shifted),
    ))
}

const SHIFT_NOTE: &str = "conditions evaluated at the shifted parameters (u-1, v-1, w-1)";

// Quantities shared by the Janowski inequalities.
struct JanowskiTerms {
    c: f64,
    d: f64,
    w: f64,
    // u + v + 2
    s: f64,
    // u + v + uv + 1
    x: f64,
    // C - D
    gap: f64,
}

impl JanowskiTerms {
    fn new(p: &HypergeomParams, j: &JanowskiPair) -> Result<Self, CertifyError> {
        let gap = j.c() - j.d();
        if gap < MIN_PAIR_GAP {
            return Err(CertifyError::DegeneratePair(gap));
        }
        let (u, v) = (p.u(), p.v());
        Ok(Self {
            c: j.c(),
            d: j.d(),
            w: p.w(),
            s: u + v + 2.0,
            x: u + v + u * v + 1.0,
            gap,
        })
    }

    // (D-C) - sD - X(1-D²)/(C-D)
    fn square_base(&self) -> f64 {
        (self.d - self.c) - self.s * self.d - self.x * (1.0 - self.d * self.d) / self.gap
    }

    // (D-C) - sD + X(1-D²)/(C-D), the base of h1 and of the square in h3
    fn h_base(&self) -> f64 {
        (self.d - self.c) - self.s * self.d + self.x * (1.0 - self.d * self.d) / self.gap
    }

    // Two-bracket sum whose third term is -X(D+1)²/(2·den3).
    fn bracket_sum(&self, den1: f64, den3: f64) -> f64 {
        let (d, s, x) = (self.d, self.s, self.x);
        (x * (1.0 - d).powi(2) / (2.0 * den1)
            - 1.0
            - s * (1.0 + d) / 2.0
            - x * (d + 1.0).powi(2) / (2.0 * den3))
            + (-1.0 - s * (d - 1.0) / 2.0)
    }

    fn h(&self) -> HCoefficients {
        let base = self.h_base();
        HCoefficients {
            h1: base * base,
            h2: self.bracket_sum(self.gap, self.gap),
            h3: 2.0 + self.w * (1.0 + self.d) / 2.0 + self.w * (self.d - 1.0) / 2.0 - base * base,
        }
    }
}

/// `h1`, `h2`, `h3` of the Janowski case analysis, with `(u, v, w)` taken as
/// the parameter argument.
pub fn janowski_h_coeffs(
    p: &HypergeomParams,
    j: &JanowskiPair,
) -> Result<HCoefficients, CertifyError> {
    Ok(JanowskiTerms::new(p, j)?.h())
}

fn janowski_subs(p: &HypergeomParams, j: &JanowskiPair) -> Result<Vec<SubResult>, CertifyError> {
    let t = JanowskiTerms::new(p, j)?;
    let (c, d, w, s, x, gap) = (t.c, t.d, t.w, t.s, t.x, t.gap);
    let h = t.h();
    let sq = t.square_base().powi(2);

    let leading = 1.0 + c - d + w * (1.0 + d)
        - (1.0 + c - d + s * (1.0 + d) + x * (d + 1.0).powi(2) / gap).abs();
    let vertex_guard = SubResult::new("vertex.guard", h.h2, Relation::GreaterEq, sq, Role::Guard);
    let slope_guard = SubResult::new(
        "slope.guard",
        t.bracket_sum(gap, -gap),
        Relation::LessEq,
        sq,
        Role::Guard,
    );
    let vertex = if h.h1 == 0.0 {
        f64::NAN
    } else {
        h.h3 - h.h2 * h.h2 / (4.0 * h.h1)
    };
    let half_h1 = if h.h1 == 0.0 {
        f64::NAN
    } else {
        h.h3 - h.h2 * h.h2 / (2.0 * h.h1)
    };
    let slope_end = 2.0 * sq + t.bracket_sum(-gap, gap);
    let printed_vertex = (2.0 + w * d - sq) * 2.0 * sq + t.bracket_sum(gap, -gap).powi(2);
    let applicable = vertex_guard.margin.max(slope_guard.margin);

    Ok(vec![
        SubResult::new(
            "leading",
            leading,
            Relation::Greater,
            0.0,
            Role::Requirement,
        ),
        vertex_guard,
        SubResult::new(
            "vertex.min",
            vertex,
            Relation::GreaterEq,
            0.0,
            Role::Conditional("vertex.guard"),
        ),
        slope_guard,
        SubResult::new(
            "slope.end",
            slope_end,
            Relation::GreaterEq,
            0.0,
            Role::Conditional("slope.guard"),
        ),
        SubResult::new(
            "case_applicable",
            applicable,
            Relation::GreaterEq,
            0.0,
            Role::Requirement,
        ),
        SubResult::new(
            "vertex.min.printed.info",
            printed_vertex,
            Relation::GreaterEq,
            0.0,
            Role::Info,
        ),
        SubResult::new(
            "vertex.min.half_h1.info",
            half_h1,
            Relation::GreaterEq,
            0.0,
            Role::Info,
        ),
        SubResult::new(
            "endpoint.sum.info",
            h.h1 + h.h2 + h.h3,
            Relation::GreaterEq,
            0.0,
            Role::Info,
        ),
    ])
}

fn janowski_notes(convention: JanowskiConvention, shifted: bool) -> Vec<String> {
    let mut notes = vec![
        "the coefficient written (c+d+2) in the leading condition is read as (u+v+2)".to_string(),
        "h1, h2, h3 take (u, v, w) as their parameter argument".to_string(),
        "vertex.min requires h3 - h2^2/(4 h1) >= 0; the printed grouping and h3 - h2^2/(2 h1) are reported as info".to_string(),
        "both guards holding requires both consequents; neither holding fails case_applicable".to_string(),
        format!("requested convention {convention}; the conditions themselves do not depend on it"),
    ];
    if shifted {
        notes.push(SHIFT_NOTE.to_string());
    }
    notes
}

/// Janowski convexity conditions for `F`: the leading inequality plus the
/// guarded case analysis on `H(x)`.
pub fn check_janowski_convex(
    p: &HypergeomParams,
    j: &JanowskiPair,
    convention: JanowskiConvention,
) -> Result<Certificate, CertifyError> {
    Ok(Certificate::from_parts(
        ConditionSet::JanowskiConvex,
        *p,
        Some((*j, convention)),
        janowski_notes(convention, false),
        janowski_subs(p, j)?,
    ))
}

/// The Janowski convexity conditions at `(u-1, v-1, w-1)`, certifying
/// Janowski starlikeness of `z·F(u,v;w;z)`.
pub fn check_janowski_starlike(
    p: &HypergeomParams,
    j: &JanowskiPair,
    convention: JanowskiConvention,
) -> Result<Certificate, CertifyError> {
    let shifted = p.shifted(-1.0)?;
    Ok(Certificate::from_parts(
        ConditionSet::JanowskiStarlike,
        *p,
        Some((*j, convention)),
        janowski_notes(convention, true),
        janowski_subs(&shifted, j)?,
    ))
}

const H1_IDS: [&str; 3] = ["h1.i", "h1.ii", "h1.iii"];
const H2_IDS: [&str; 5] = ["h2.i", "h2.ii", "h2.iii", "h2.iv", "h2.v"];
const JANOWSKI_IDS: [&str; 9] = [
    "leading",
    "vertex.guard",
    "vertex.min",
    "slope.guard",
    "slope.end",
    "case_applicable",
    "vertex.min.printed.info",
    "vertex.min.half_h1.info",
    "endpoint.sum.info",
];

/// Sub-result ids of a condition set, in certificate order.
pub fn sub_result_ids(set: ConditionSet) -> &'static [&'static str] {
    match set {
        ConditionSet::H1 => &H1_IDS,
        ConditionSet::H2 | ConditionSet::CorollaryStarlike => &H2_IDS,
        ConditionSet::JanowskiConvex | ConditionSet::JanowskiStarlike => &JANOWSKI_IDS,
    }
}

/// Dispatches on the condition set; the pair is required for the Janowski sets.
pub fn certify(
    set: ConditionSet,
    p: &HypergeomParams,
    janowski: Option<(JanowskiPair, JanowskiConvention)>,
) -> Result<Certificate, CertifyError> {
    match (set, janowski) {
        (ConditionSet::H1, _) => Ok(check_h1(p)),
        (ConditionSet::H2, _) => Ok(check_h2(p)),
        (ConditionSet::CorollaryStarlike, _) => check_corollary_starlike(p),
        (ConditionSet::JanowskiConvex, Some((j, c))) => check_janowski_convex(p, &j, c),
        (ConditionSet::JanowskiStarlike, Some((j, c))) => check_janowski_starlike(p, &j, c),
        (_, None) => Err(CertifyError::MissingPair),
    }
}
