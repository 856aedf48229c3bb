//! Job specifications and reports: the JSON-facing layer over the core
//! pipeline. Every number in a report is produced by a core module; this
//! layer only assembles, serializes, and renders.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::kodaira::{classify, KodairaFiber, OrderTriple};
use crate::mwflop::{
    model_count_bounds, FloppingCensus, MordellWeilReport, TorsionInfo,
};
use crate::poly::{Order, Rat, RatPoly};
use crate::resolve::{resolve_isolated, ResolutionStatus, ResolutionTree, ResolveError};
use crate::surface::{rationality_verdict, SurfaceReport};
use crate::weierstrass::{
    canonical_bound_check, CanonicalBound, IsolationReport, ModelError, WeierstrassChart,
};

pub const DEFAULT_RECURSION_LIMIT: u32 = 16;

fn default_recursion_limit() -> u32 {
    DEFAULT_RECURSION_LIMIT
}

/// A point coordinate in the input JSON: an integer or a string `"a/b"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordLit {
    Int(i64),
    Frac(String),
}

impl CoordLit {
    pub fn to_rat(&self) -> Result<Rat, String> {
        match self {
            CoordLit::Int(n) => Ok(Rat::from_integer(BigInt::from(*n))),
            CoordLit::Frac(text) => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text.trim(), "1"),
                };
                let num: BigInt = num
                    .parse()
                    .map_err(|_| format!("unreadable coordinate `{text}`"))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| format!("unreadable coordinate `{text}`"))?;
                if den.is_zero() {
                    return Err(format!("zero denominator in coordinate `{text}`"));
                }
                Ok(Rat::new(num, den))
            }
        }
    }
}

/// One job: a Weierstrass model, points and divisors of interest, and
/// resolution options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub variables: [String; 2],
    pub f: String,
    pub g: String,
    #[serde(default)]
    pub points: Vec<Vec<CoordLit>>,
    #[serde(default)]
    pub divisors: Vec<String>,
    #[serde(default = "default_recursion_limit")]
    pub recursion_limit: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_surfaces: Option<u32>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum JobError {
    /// Malformed input: JSON, polynomials, points, or flags. Exit code 2.
    #[error("input error: {0}")]
    Input(String),
    /// A precondition of the mathematics failed. Exit code 3.
    #[error("{0}")]
    Semantic(String),
}

impl From<ModelError> for JobError {
    fn from(e: ModelError) -> Self {
        JobError::Semantic(e.to_string())
    }
}

/// Parse and validate a job document.
pub fn load_job(text: &str) -> Result<JobSpec, JobError> {
    let job: JobSpec =
        serde_json::from_str(text).map_err(|e| JobError::Input(format!("job JSON: {e}")))?;
    if job.variables[0] == job.variables[1] {
        return Err(JobError::Input(format!(
            "the two variables must be distinct, got `{}` twice",
            job.variables[0]
        )));
    }
    for p in &job.points {
        if p.len() != 2 {
            return Err(JobError::Input(format!(
                "each point needs exactly 2 coordinates, got {}",
                p.len()
            )));
        }
    }
    if job.n_surfaces == Some(0) {
        return Err(JobError::Input("n_surfaces must be positive".to_string()));
    }
    Ok(job)
}

struct ParsedJob {
    model: WeierstrassChart,
    points: Vec<[Rat; 2]>,
    divisors: Vec<RatPoly>,
}

fn parse_job(job: &JobSpec) -> Result<ParsedJob, JobError> {
    let vars: Vec<&str> = job.variables.iter().map(|s| s.as_str()).collect();
    let f = RatPoly::parse(&job.f, &vars)
        .map_err(|e| JobError::Input(format!("polynomial f: {e}")))?;
    let g = RatPoly::parse(&job.g, &vars)
        .map_err(|e| JobError::Input(format!("polynomial g: {e}")))?;
    let mut divisors = Vec::new();
    for d in &job.divisors {
        let p = RatPoly::parse(d, &vars)
            .map_err(|e| JobError::Input(format!("divisor `{d}`: {e}")))?;
        if p.is_constant() {
            return Err(JobError::Input(format!("divisor `{d}` is constant")));
        }
        divisors.push(p);
    }
    let mut points = Vec::new();
    for p in &job.points {
        let x = p[0].to_rat().map_err(JobError::Input)?;
        let y = p[1].to_rat().map_err(JobError::Input)?;
        points.push([x, y]);
    }
    // Order-stable report: points sorted by coordinates.
    points.sort();
    let model = WeierstrassChart::new("base", f, g)?;
    Ok(ParsedJob {
        model,
        points,
        divisors,
    })
}

// ---------------------------------------------------------------------
// JSON shapes. Field order is the serialization order; all big integers
// are decimal strings; infinite orders serialize as the string
// "infinity".
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonOrder {
    Finite(u32),
    Infinite(String),
}

impl From<Order> for JsonOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Finite(n) => JsonOrder::Finite(n),
            Order::Infinite => JsonOrder::Infinite("infinity".to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdersJson {
    pub f: JsonOrder,
    pub g: JsonOrder,
    pub delta: JsonOrder,
}

impl From<OrderTriple> for OrdersJson {
    fn from(t: OrderTriple) -> Self {
        OrdersJson {
            f: t.a.into(),
            g: t.b.into(),
            delta: t.d.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberJson {
    #[serde(rename = "type")]
    pub fiber_type: String,
    pub components: Option<u32>,
    pub root_lattice: String,
    pub euler: JsonOrder,
}

impl From<&KodairaFiber> for FiberJson {
    fn from(k: &KodairaFiber) -> Self {
        FiberJson {
            fiber_type: k.fiber_type.to_string(),
            components: k.components,
            root_lattice: k.root_lattice.to_string(),
            euler: k.euler.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationDivisorJson {
    pub divisor: String,
    pub through_point: bool,
    pub orders: OrdersJson,
    pub meets_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationJson {
    pub chart: String,
    pub point: [String; 2],
    pub isolated: bool,
    pub point_orders: OrdersJson,
    pub strict_class: bool,
    pub meets_threshold: bool,
    pub divisors: Vec<IsolationDivisorJson>,
    pub failure: Option<String>,
}

impl From<&IsolationReport> for IsolationJson {
    fn from(r: &IsolationReport) -> Self {
        IsolationJson {
            chart: r.chart.clone(),
            point: [r.point[0].to_string(), r.point[1].to_string()],
            isolated: r.isolated,
            point_orders: r.point_orders.into(),
            strict_class: r.strict_class,
            meets_threshold: r.meets_threshold,
            divisors: r
                .divisors
                .iter()
                .map(|d| IsolationDivisorJson {
                    divisor: d.divisor.to_string(),
                    through_point: d.through_point,
                    orders: d.orders.into(),
                    meets_threshold: d.meets_threshold,
                })
                .collect(),
            failure: r.failure.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartJson {
    pub name: String,
    pub variables: [String; 2],
    pub f: String,
    pub g: String,
    pub delta: String,
}

impl From<&WeierstrassChart> for ChartJson {
    fn from(c: &WeierstrassChart) -> Self {
        let [x, y] = c.var_names();
        ChartJson {
            name: c.name.clone(),
            variables: [x.to_string(), y.to_string()],
            f: c.f().to_string(),
            g: c.g().to_string(),
            delta: c.delta().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub depth: u32,
    pub parent_chart: String,
    pub center: [String; 2],
    pub exceptional: String,
    pub twist_k: u32,
    pub chart_u: ChartJson,
    pub chart_v: ChartJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub location: String,
    pub orders: OrdersJson,
    pub fiber: FiberJson,
    pub points: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub chart: String,
    pub coordinate: String,
    pub exceptional: String,
    pub f: String,
    pub g: String,
    pub delta: String,
    pub bundle_degree_f: u32,
    pub bundle_degree_g: u32,
    pub places: Vec<PlaceJson>,
    pub total_delta_degree: u32,
    pub rational: bool,
    pub has_46_12_point: bool,
    pub offending: Option<String>,
    pub isotrivial: bool,
    pub verdict: String,
}

impl From<&SurfaceReport> for SurfaceJson {
    fn from(s: &SurfaceReport) -> Self {
        SurfaceJson {
            chart: s.source_chart.clone(),
            coordinate: s.coordinate.clone(),
            exceptional: s.exceptional_label.clone(),
            f: s.f_on_curve.to_string(),
            g: s.g_on_curve.to_string(),
            delta: s.delta_on_curve.to_string(),
            bundle_degree_f: s.bundle_degree_f,
            bundle_degree_g: s.bundle_degree_g,
            places: s
                .config
                .places
                .iter()
                .map(|p| PlaceJson {
                    location: p.location.describe(&s.coordinate),
                    orders: p.orders.into(),
                    fiber: (&p.fiber).into(),
                    points: p.points,
                })
                .collect(),
            total_delta_degree: s.config.total_delta_degree,
            rational: s.rational,
            has_46_12_point: s.has_46_12_point,
            offending: s.offending.as_ref().map(|l| l.describe(&s.coordinate)),
            isotrivial: s.isotrivial,
            verdict: rationality_verdict(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntryJson {
    pub divisor: String,
    pub base_discrepancy: i64,
    pub twist_k: i64,
    pub net: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerJson {
    pub entries: Vec<LedgerEntryJson>,
    pub crepant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TorsionJson {
    Known {
        structure: String,
        order: u32,
        source: String,
    },
    Unknown {
        note: String,
    },
}

impl From<&TorsionInfo> for TorsionJson {
    fn from(t: &TorsionInfo) -> Self {
        match t {
            TorsionInfo::Known {
                structure,
                order,
                source,
            } => TorsionJson::Known {
                structure: structure.clone(),
                order: *order,
                source: source.clone(),
            },
            TorsionInfo::Unknown { note } => TorsionJson::Unknown { note: note.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusJson {
    pub sections: String,
    pub fiber_components: u32,
    pub total: Option<u32>,
}

impl From<&FloppingCensus> for CensusJson {
    fn from(c: &FloppingCensus) -> Self {
        CensusJson {
            sections: c.sections.to_string(),
            fiber_components: c.fiber_components,
            total: c.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwJson {
    pub rank: u32,
    pub torsion: TorsionJson,
    pub census: CensusJson,
    pub dichotomy: String,
    pub rationale: String,
}

impl From<&MordellWeilReport> for MwJson {
    fn from(m: &MordellWeilReport) -> Self {
        MwJson {
            rank: m.rank,
            torsion: (&m.torsion).into(),
            census: (&m.census).into(),
            dichotomy: match m.dichotomy {
                crate::mwflop::FlopDichotomy::FiniteCandidates => "FiniteFlopCandidates",
                crate::mwflop::FlopDichotomy::InfiniteCandidates => "InfiniteFlopCandidates",
            }
            .to_string(),
            rationale: m.rationale.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub surfaces_counted: u32,
    pub lower_any: String,
    pub lower_generic: String,
    pub lower_product: String,
    pub upper_extremal: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalBoundJson {
    pub met: bool,
    pub witness: Option<OrdersJson>,
    pub verdict: String,
}

fn canonical_bound_json(b: &CanonicalBound) -> CanonicalBoundJson {
    CanonicalBoundJson {
        met: b.met,
        witness: b.witness.map(Into::into),
        verdict: if b.met {
            "all isolated fibers have ord(f) < 8 and ord(g) < 12".to_string()
        } else {
            format!(
                "an isolated fiber with orders {} violates ord(f) < 8, ord(g) < 12",
                b.witness.expect("witness accompanies a violation")
            )
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub divisor: String,
    pub orders: OrdersJson,
    pub fiber: FiberJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: [String; 2],
    pub orders: OrdersJson,
    pub fiber: FiberJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolation: Option<IsolationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surfaces: Option<Vec<SurfaceJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mordell_weil: Option<MwJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub job: JobSpec,
    pub model_delta: String,
    pub points: Vec<PointReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<Vec<DivisorReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_bound: Option<CanonicalBoundJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Worst exit code over the per-point outcomes: 4 for a hit recursion
    /// limit, 3 for a precondition failure, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        let mut code = 0;
        for p in &self.points {
            match p.status.as_deref() {
                Some("recursion-limit") => code = code.max(4),
                Some("non-rational-center") | Some("not-isolated") => code = code.max(3),
                _ => {}
            }
        }
        code
    }
}

fn point_strings(p: &[Rat; 2]) -> [String; 2] {
    [p[0].to_string(), p[1].to_string()]
}

fn classify_fiber(t: OrderTriple) -> FiberJson {
    match classify(t) {
        Ok(k) => (&k).into(),
        Err(_) => FiberJson {
            fiber_type: "unclassifiable".to_string(),
            components: None,
            root_lattice: crate::kodaira::RootLattice::NotApplicable.to_string(),
            euler: t.d.into(),
        },
    }
}

/// Order triples and Kodaira types at every requested point and divisor.
pub fn run_classify(job: &JobSpec) -> Result<Report, JobError> {
    let parsed = parse_job(job)?;
    let points = parsed
        .points
        .iter()
        .map(|p| {
            let orders = parsed.model.orders_at(p);
            PointReport {
                point: point_strings(p),
                orders: orders.into(),
                fiber: classify_fiber(orders),
                isolation: None,
                status: None,
                depth: None,
                steps: None,
                surfaces: None,
                ledger: None,
                mordell_weil: None,
            }
        })
        .collect();
    let divisors = parsed
        .divisors
        .iter()
        .map(|d| {
            let orders = parsed.model.orders_along(d);
            DivisorReport {
                divisor: d.to_string(),
                orders: orders.into(),
                fiber: classify_fiber(orders),
            }
        })
        .collect();
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "classify".to_string(),
        job: job.clone(),
        model_delta: parsed.model.delta().to_string(),
        points,
        divisors: Some(divisors),
        canonical_bound: None,
        bounds: None,
        warnings: Vec::new(),
    })
}

fn status_string(s: ResolutionStatus) -> &'static str {
    match s {
        ResolutionStatus::Resolved => "resolved",
        ResolutionStatus::RecursionLimit => "recursion-limit",
        ResolutionStatus::NonRationalCenter => "non-rational-center",
    }
}

fn tree_to_point_report(tree: &ResolutionTree, point: &[Rat; 2]) -> (PointReport, Option<FloppingCensus>, Vec<String>) {
    let mut warnings = tree.warnings.clone();
    let mw = tree.surfaces.last().and_then(|last| {
        if tree.status == ResolutionStatus::Resolved {
            match crate::mwflop::analyze(&last.config) {
                Ok(m) => Some(m),
                Err(e) => {
                    warnings.push(format!("Mordell-Weil analysis skipped: {e}"));
                    None
                }
            }
        } else {
            None
        }
    });
    let census = mw.as_ref().map(|m| m.census.clone());
    let report = PointReport {
        point: point_strings(point),
        orders: tree.isolation.point_orders.into(),
        fiber: classify_fiber(tree.isolation.point_orders),
        isolation: Some((&tree.isolation).into()),
        status: Some(status_string(tree.status).to_string()),
        depth: Some(tree.steps.len() as u32),
        steps: Some(
            tree.steps
                .iter()
                .map(|s| StepJson {
                    depth: s.depth,
                    parent_chart: s.parent_chart.clone(),
                    center: point_strings(&s.center),
                    exceptional: s.label.clone(),
                    twist_k: s.twist_k,
                    chart_u: (&s.chart_u).into(),
                    chart_v: (&s.chart_v).into(),
                })
                .collect(),
        ),
        surfaces: Some(tree.surfaces.iter().map(Into::into).collect()),
        ledger: Some(LedgerJson {
            entries: tree
                .ledger
                .entries
                .iter()
                .map(|e| LedgerEntryJson {
                    divisor: e.divisor.clone(),
                    base_discrepancy: e.base_discrepancy,
                    twist_k: e.twist_k,
                    net: e.net(),
                })
                .collect(),
            crepant: tree.ledger.is_crepant(),
        }),
        mordell_weil: mw.as_ref().map(Into::into),
    };
    (report, census, warnings)
}

/// Resolve every requested point and analyze the exceptional surfaces.
pub fn run_resolve(job: &JobSpec) -> Result<Report, JobError> {
    let parsed = parse_job(job)?;
    let mut points = Vec::new();
    let mut censuses: Vec<FloppingCensus> = Vec::new();
    let mut all_resolved = true;
    let mut warnings = Vec::new();
    let mut isolated_orders = Vec::new();
    for point in &parsed.points {
        match resolve_isolated(&parsed.model, point, &parsed.divisors, job.recursion_limit) {
            Ok(tree) => {
                isolated_orders.push(tree.isolation.point_orders);
                let (report, census, mut point_warnings) = tree_to_point_report(&tree, point);
                warnings.append(&mut point_warnings);
                match census {
                    Some(c) => censuses.push(c),
                    None => all_resolved = false,
                }
                points.push(report);
            }
            Err(ResolveError::NotIsolated(isolation)) => {
                all_resolved = false;
                warnings.push(format!(
                    "point ({}, {}): {}",
                    point[0],
                    point[1],
                    isolation
                        .failure
                        .as_deref()
                        .unwrap_or("isolation check failed")
                ));
                let orders = parsed.model.orders_at(point);
                points.push(PointReport {
                    point: point_strings(point),
                    orders: orders.into(),
                    fiber: classify_fiber(orders),
                    isolation: Some(isolation.as_ref().into()),
                    status: Some("not-isolated".to_string()),
                    depth: None,
                    steps: None,
                    surfaces: None,
                    ledger: None,
                    mordell_weil: None,
                });
            }
            Err(ResolveError::Surface(e)) => {
                return Err(JobError::Semantic(e.to_string()));
            }
        }
    }
    let bounds = if all_resolved && !censuses.is_empty() {
        let n = job.n_surfaces.unwrap_or(censuses.len() as u32) as usize;
        let replicated: Vec<FloppingCensus> = (0..n)
            .map(|i| censuses[i % censuses.len()].clone())
            .collect();
        let b = model_count_bounds(&replicated);
        Some(BoundsJson {
            surfaces_counted: n as u32,
            lower_any: b.lower_any.to_string(),
            lower_generic: b.lower_generic.to_string(),
            lower_product: b.lower_product.to_string(),
            upper_extremal: b.upper_extremal.as_ref().map(|u| u.to_string()),
            notes: b.notes,
        })
    } else {
        if job.n_surfaces.is_some() {
            warnings.push(
                "model-count bounds skipped: not every point resolved to a rational surface"
                    .to_string(),
            );
        }
        None
    };
    let canonical_bound = if isolated_orders.is_empty() {
        None
    } else {
        Some(canonical_bound_json(&canonical_bound_check(
            &isolated_orders,
        )))
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "resolve".to_string(),
        job: job.clone(),
        model_delta: parsed.model.delta().to_string(),
        points,
        divisors: None,
        canonical_bound,
        bounds,
        warnings,
    })
}

// ---------------------------------------------------------------------
// Human-readable rendering.
// ---------------------------------------------------------------------

fn render_orders(o: &OrdersJson) -> String {
    fn one(j: &JsonOrder) -> String {
        match j {
            JsonOrder::Finite(n) => n.to_string(),
            JsonOrder::Infinite(_) => "infinity".to_string(),
        }
    }
    format!("({}, {}, {})", one(&o.f), one(&o.g), one(&o.delta))
}

/// Fixed-width text summary of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "crepant {} v{}",
        report.command, report.version
    );
    let _ = writeln!(
        out,
        "model: f = {}, g = {}  over ({}, {})",
        report.job.f, report.job.g, report.job.variables[0], report.job.variables[1]
    );
    let _ = writeln!(out, "delta: {}", report.model_delta);
    for p in &report.points {
        let _ = writeln!(
            out,
            "\npoint ({}, {}): orders {}  {:<4} components {}  lattice {}",
            p.point[0],
            p.point[1],
            render_orders(&p.orders),
            p.fiber.fiber_type,
            p.fiber
                .components
                .map_or("-".to_string(), |c| c.to_string()),
            p.fiber.root_lattice
        );
        if let Some(iso) = &p.isolation {
            let _ = writeln!(
                out,
                "  isolation: {}{}",
                if iso.isolated { "isolated" } else { "NOT isolated" },
                iso.failure
                    .as_deref()
                    .map(|f| format!(" — {f}"))
                    .unwrap_or_default()
            );
            for d in &iso.divisors {
                let _ = writeln!(
                    out,
                    "    divisor {:<16} orders {:<14} {} the (4, 6) threshold{}",
                    d.divisor,
                    render_orders(&d.orders),
                    if d.meets_threshold { "meets" } else { "below" },
                    if d.through_point {
                        ""
                    } else {
                        " (misses the point)"
                    }
                );
            }
        }
        if let Some(steps) = &p.steps {
            for s in steps {
                let _ = writeln!(
                    out,
                    "  round {}: blow up {} at ({}, {}) -> {}, twist k = {}",
                    s.depth, s.parent_chart, s.center[0], s.center[1], s.exceptional, s.twist_k
                );
                let _ = writeln!(
                    out,
                    "    {}: f = {}, g = {}  over ({}, {})",
                    s.chart_u.name,
                    s.chart_u.f,
                    s.chart_u.g,
                    s.chart_u.variables[0],
                    s.chart_u.variables[1]
                );
            }
        }
        if let Some(surfaces) = &p.surfaces {
            for s in surfaces {
                let _ = writeln!(
                    out,
                    "  surface over {} (coordinate {}): {}",
                    s.exceptional, s.coordinate, s.verdict
                );
                for pl in &s.places {
                    let _ = writeln!(
                        out,
                        "    {:<28} {:<5} orders {:<14} lattice {:<4} euler {:>2}  x{}",
                        pl.location,
                        pl.fiber.fiber_type,
                        render_orders(&pl.orders),
                        pl.fiber.root_lattice,
                        match &pl.fiber.euler {
                            JsonOrder::Finite(n) => n.to_string(),
                            JsonOrder::Infinite(_) => "-".to_string(),
                        },
                        pl.points
                    );
                }
                let _ = writeln!(
                    out,
                    "    total discriminant degree {} (bundle degrees {}, {})",
                    s.total_delta_degree, s.bundle_degree_f, s.bundle_degree_g
                );
            }
        }
        if let Some(ledger) = &p.ledger {
            let nets: Vec<String> = ledger.entries.iter().map(|e| e.net.to_string()).collect();
            let _ = writeln!(
                out,
                "  discrepancies: [{}] -> {}",
                nets.join(", "),
                if ledger.crepant {
                    "crepant"
                } else {
                    "NOT crepant"
                }
            );
        }
        if let Some(status) = &p.status {
            let _ = writeln!(out, "  status: {status}");
        }
        if let Some(mw) = &p.mordell_weil {
            let torsion = match &mw.torsion {
                TorsionJson::Known {
                    structure, order, ..
                } => format!("{structure} (order {order})"),
                TorsionJson::Unknown { note } => format!("unknown — {note}"),
            };
            let _ = writeln!(out, "  Mordell-Weil: rank {}, torsion {}", mw.rank, torsion);
            let _ = writeln!(
                out,
                "  flopping census: {} sections + {} fiber components = {}",
                mw.census.sections,
                mw.census.fiber_components,
                mw.census
                    .total
                    .map_or("n/a".to_string(), |t| t.to_string())
            );
            let _ = writeln!(out, "  dichotomy: {} — {}", mw.dichotomy, mw.rationale);
        }
    }
    if let Some(divs) = &report.divisors {
        if !divs.is_empty() {
            let _ = writeln!(out, "\ndivisors:");
            for d in divs {
                let _ = writeln!(
                    out,
                    "  {:<20} orders {:<14} {:<5} components {}  lattice {}",
                    d.divisor,
                    render_orders(&d.orders),
                    d.fiber.fiber_type,
                    d.fiber
                        .components
                        .map_or("-".to_string(), |c| c.to_string()),
                    d.fiber.root_lattice
                );
            }
        }
    }
    if let Some(cb) = &report.canonical_bound {
        let _ = writeln!(out, "\ncanonical bound: {}", cb.verdict);
    }
    if let Some(b) = &report.bounds {
        let _ = writeln!(
            out,
            "\nterminal-model bounds over {} surface(s): lower {} / {} / {}, upper {}",
            b.surfaces_counted,
            b.lower_any,
            b.lower_generic,
            b.lower_product,
            b.upper_extremal.as_deref().unwrap_or("not applicable")
        );
        for n in &b.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    if !report.warnings.is_empty() {
        let _ = writeln!(out, "\nwarnings:");
        for w in &report.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job_json(text: &str) -> JobSpec {
        load_job(text).unwrap()
    }

    fn transverse_job() -> JobSpec {
        job_json(
            r#"{
                "variables": ["s", "t"],
                "f": "s^2*t^2",
                "g": "s^3*t^3",
                "points": [[0, 0]],
                "divisors": ["s", "t"],
                "n_surfaces": 9
            }"#,
        )
    }

    #[test]
    fn job_defaults_and_validation() {
        let job = transverse_job();
        assert_eq!(job.recursion_limit, 16);
        assert_eq!(job.n_surfaces, Some(9));

        let bad = load_job(r#"{"variables":["s","s"],"f":"s","g":"s"}"#);
        assert!(matches!(bad, Err(JobError::Input(_))));
        let bad = load_job(r#"{"variables":["s","t"],"f":"s","g":"t","points":[[1]]}"#);
        assert!(matches!(bad, Err(JobError::Input(_))));
        let bad = load_job(r#"{"variables":["s","t"],"f":"s","g":"t","unknown":1}"#);
        assert!(matches!(bad, Err(JobError::Input(_))));
    }

    #[test]
    fn coordinates_parse_ints_and_fractions() {
        assert_eq!(CoordLit::Int(-3).to_rat().unwrap(), Rat::from_integer((-3).into()));
        assert_eq!(
            CoordLit::Frac("3/2".to_string()).to_rat().unwrap(),
            Rat::new(3.into(), 2.into())
        );
        assert!(CoordLit::Frac("1/0".to_string()).to_rat().is_err());
        assert!(CoordLit::Frac("x".to_string()).to_rat().is_err());
    }

    #[test]
    fn classify_reports_points_and_divisors() {
        let report = run_classify(&transverse_job()).unwrap();
        assert_eq!(report.command, "classify");
        assert_eq!(report.points.len(), 1);
        assert_eq!(report.points[0].fiber.fiber_type, "non-Kodaira");
        assert_eq!(render_orders(&report.points[0].orders), "(4, 6, 12)");
        let divs = report.divisors.as_ref().unwrap();
        assert_eq!(divs.len(), 2);
        for d in divs {
            assert_eq!(d.fiber.fiber_type, "I0*");
            assert_eq!(render_orders(&d.orders), "(2, 3, 6)");
        }
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn resolve_report_for_the_transverse_job() {
        let report = run_resolve(&transverse_job()).unwrap();
        assert_eq!(report.exit_code(), 0);
        let p = &report.points[0];
        assert_eq!(p.status.as_deref(), Some("resolved"));
        assert_eq!(p.depth, Some(1));
        let mw = p.mordell_weil.as_ref().unwrap();
        assert_eq!(mw.rank, 0);
        assert!(matches!(&mw.torsion, TorsionJson::Known { order: 4, .. }));
        assert_eq!(mw.census.total, Some(14));
        let bounds = report.bounds.as_ref().unwrap();
        assert_eq!(bounds.surfaces_counted, 9);
        assert_eq!(bounds.lower_product, "387420489");
        assert_eq!(bounds.upper_extremal.as_deref(), Some("9225216"));
        assert!(report.canonical_bound.as_ref().unwrap().met);
    }

    #[test]
    fn resolve_flags_not_isolated_points() {
        let job = job_json(
            r#"{
                "variables": ["s", "t"],
                "f": "s^4",
                "g": "s^6",
                "points": [[0, 0]],
                "divisors": ["s"]
            }"#,
        );
        let report = run_resolve(&job).unwrap();
        assert_eq!(report.exit_code(), 3);
        let p = &report.points[0];
        assert_eq!(p.status.as_deref(), Some("not-isolated"));
        assert!(p.isolation.as_ref().unwrap().failure.is_some());
        assert!(p.steps.is_none());
        assert!(report.bounds.is_none());
    }

    #[test]
    fn resolve_honors_the_recursion_limit() {
        let mut job = job_json(
            r#"{
                "variables": ["s", "t"],
                "f": "(s - t^2)^2*(s + t^2)^2",
                "g": "(s - t^2)^3*(s + t^2)^3",
                "points": [[0, 0]]
            }"#,
        );
        job.recursion_limit = 1;
        let report = run_resolve(&job).unwrap();
        assert_eq!(report.exit_code(), 4);
        assert_eq!(report.points[0].status.as_deref(), Some("recursion-limit"));
    }

    #[test]
    fn zero_discriminant_is_a_semantic_error() {
        let job = job_json(r#"{"variables":["s","t"],"f":"-3*s^2","g":"2*s^3","points":[[0,0]]}"#);
        match run_classify(&job) {
            Err(JobError::Semantic(msg)) => assert!(msg.contains("discriminant")),
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn report_json_round_trips() {
        for report in [
            run_classify(&transverse_job()).unwrap(),
            run_resolve(&transverse_job()).unwrap(),
        ] {
            let json = report.to_json();
            let back: Report = serde_json::from_str(&json).unwrap();
            assert_eq!(back, report);
            assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn text_rendering_mentions_the_essentials() {
        let text = render_text(&run_resolve(&transverse_job()).unwrap());
        assert!(text.contains("point (0, 0)"));
        assert!(text.contains("I0*"));
        assert!(text.contains("rank 0"));
        assert!(text.contains("387420489"));
        assert!(text.contains("crepant"));
    }

    #[test]
    fn points_are_sorted_in_the_report() {
        let job = job_json(
            r#"{
                "variables": ["s", "t"],
                "f": "s^2*t^2",
                "g": "s^3*t^3",
                "points": [[1, 1], [0, 0], [-1, 2]]
            }"#,
        );
        let report = run_classify(&job).unwrap();
        let coords: Vec<String> = report.points.iter().map(|p| p.point[0].clone()).collect();
        assert_eq!(coords, vec!["-1", "0", "1"]);
    }
}
