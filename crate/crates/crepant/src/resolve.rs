//! Iterated base blow-ups with minimalization twists: the resolution loop
//! for an isolated (4, 6, 12) point, its discrepancy ledger, and the
//! terminal statuses.

use num_traits::Zero;

use crate::poly::{Rat, RatPoly};
use crate::surface::{extract_surface, PlaceLocation, SurfaceError, SurfaceReport};
use crate::weierstrass::{IsolationReport, WeierstrassChart};

/// One round of blowing up the base at a point: both coordinate charts of
/// the blow-up, already minimalized along the exceptional curve.
#[derive(Debug, Clone)]
pub struct BlowupStep {
    pub depth: u32,
    pub parent_chart: String,
    /// Center of the blow-up in the parent chart's coordinates.
    pub center: [Rat; 2],
    /// Label of the exceptional curve introduced by this round.
    pub label: String,
    /// Chart covering finite slopes: exceptional = second variable.
    pub chart_u: WeierstrassChart,
    /// Chart covering the infinite slope: exceptional = first variable.
    pub chart_v: WeierstrassChart,
    /// Multiplicity of the minimalization twist along the exceptional
    /// curve (equal on both charts).
    pub twist_k: u32,
}

/// Discrepancy bookkeeping for one exceptional divisor: a base blow-up
/// contributes +1, a twist of multiplicity k contributes −k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub divisor: String,
    pub base_discrepancy: i64,
    pub twist_k: i64,
}

impl LedgerEntry {
    pub fn net(&self) -> i64 {
        self.base_discrepancy - self.twist_k
    }
}

#[derive(Debug, Clone, Default)]
pub struct DiscrepancyLedger {
    pub entries: Vec<LedgerEntry>,
}

impl DiscrepancyLedger {
    pub fn nets(&self) -> Vec<i64> {
        self.entries.iter().map(LedgerEntry::net).collect()
    }

    /// The composite is crepant iff every exceptional divisor ends with
    /// net discrepancy zero.
    pub fn is_crepant(&self) -> bool {
        self.entries.iter().all(|e| e.net() == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionStatus {
    /// The last surface carries no point at or above (4, 6, 12).
    Resolved,
    /// The round budget ran out with a non-Kodaira point still present.
    RecursionLimit,
    /// The next center is a non-rational point; the loop cannot continue
    /// over ℚ.
    NonRationalCenter,
}

/// The full record of a resolution run.
#[derive(Debug, Clone)]
pub struct ResolutionTree {
    pub input_chart: String,
    pub point: [Rat; 2],
    pub isolation: IsolationReport,
    pub steps: Vec<BlowupStep>,
    pub surfaces: Vec<SurfaceReport>,
    pub ledger: DiscrepancyLedger,
    pub status: ResolutionStatus,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ResolveError {
    #[error("the (4, 6, 12) point is not isolated: {}", .0.failure.as_deref().unwrap_or("see diagnostics"))]
    NotIsolated(Box<IsolationReport>),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn affine_base_name(depth: u32) -> String {
    match depth {
        1 => "u".to_string(),
        2 => "w".to_string(),
        d => format!("u{d}"),
    }
}

fn fresh_name(base: &str, taken: &[&str]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name.as_str()) {
        name.push('p');
    }
    name
}

/// Map a polynomial on the (twisted) U chart to the V chart: with
/// a = x/y and v = y/x, a monomial a^i·e^j goes to x^j·v^(j−i+shift),
/// where `shift` is the clearing power from the twist (4k for f, 6k for
/// g). Returns `None` if a negative exponent appears, which would mean
/// the two charts do not glue.
fn transition_u_to_v(p: &RatPoly, shift: u32, v_ring: &[&str]) -> Option<RatPoly> {
    let mut out = Vec::new();
    for (exps, c) in p.terms() {
        let (i, j) = (exps[0], exps[1]);
        let ve = (j + shift).checked_sub(i)?;
        out.push((vec![j, ve], c.clone()));
    }
    Some(RatPoly::from_terms(v_ring, out))
}

/// Blow up the base at a rational point and minimalize both charts along
/// the exceptional curve. Panics if the charts disagree — the twist
/// multiplicity and the glued coefficients are checked exactly.
pub fn blow_up(parent: &WeierstrassChart, center: &[Rat; 2], depth: u32) -> BlowupStep {
    let [xn, yn] = parent.var_names();
    let (xn, yn) = (xn.to_string(), yn.to_string());
    let f0 = parent.f().shift_to_origin(center);
    let g0 = parent.g().shift_to_origin(center);
    let a_name = fresh_name(&affine_base_name(depth), &[&xn, &yn]);
    let v_name = fresh_name("v", &[&xn, &yn]);
    let label = format!("E{depth}");

    // U chart: x = a·e, y = e with e the exceptional coordinate.
    let u_ring: [&str; 2] = [&a_name, &yn];
    let a = RatPoly::var(&u_ring, &a_name);
    let e_u = RatPoly::var(&u_ring, &yn);
    let mut chart_u = WeierstrassChart::new(
        &format!("U{depth}"),
        f0.compose(&u_ring, &[&a * &e_u, e_u.clone()]),
        g0.compose(&u_ring, &[&a * &e_u, e_u.clone()]),
    )
    .expect("pulling back a nonzero discriminant keeps it nonzero");
    chart_u.exceptional.push((e_u.clone(), label.clone()));
    let (chart_u, k_u) = chart_u.minimalize_along(&e_u, &label);

    // V chart: x = x, y = x·v with x the exceptional coordinate.
    let v_ring: [&str; 2] = [&xn, &v_name];
    let x_v = RatPoly::var(&v_ring, &xn);
    let v = RatPoly::var(&v_ring, &v_name);
    let mut chart_v = WeierstrassChart::new(
        &format!("V{depth}"),
        f0.compose(&v_ring, &[x_v.clone(), &x_v * &v]),
        g0.compose(&v_ring, &[x_v.clone(), &x_v * &v]),
    )
    .expect("pulling back a nonzero discriminant keeps it nonzero");
    chart_v.exceptional.push((x_v.clone(), label.clone()));
    let (chart_v, k_v) = chart_v.minimalize_along(&x_v, &label);

    assert_eq!(k_u, k_v, "twist multiplicity must agree on both charts");
    let f_glued = transition_u_to_v(chart_u.f(), 4 * k_u, &v_ring)
        .expect("chart transition of f produced a negative exponent");
    let g_glued = transition_u_to_v(chart_u.g(), 6 * k_u, &v_ring)
        .expect("chart transition of g produced a negative exponent");
    assert_eq!(&f_glued, chart_v.f(), "U→V transition identity for f");
    assert_eq!(&g_glued, chart_v.g(), "U→V transition identity for g");

    BlowupStep {
        depth,
        parent_chart: parent.name.clone(),
        center: (*center).clone(),
        label,
        chart_u,
        chart_v,
        twist_k: k_u,
    }
}

/// What the resolution loop should do after seeing a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NextAction {
    Stop,
    NonRational,
    /// Recurse at `u = c` on the U chart.
    RecurseAtFinite(Rat),
    /// Recurse at the point at infinity on the V chart.
    RecurseAtInfinity,
}

/// Decide the next move from a surface report: stop when no non-Kodaira
/// place remains, refuse when one sits at a non-rational place, and
/// otherwise name the blow-up center. The second component counts
/// non-Kodaira places beyond the one acted on.
pub fn next_action(surface: &SurfaceReport) -> (NextAction, usize) {
    let bad: Vec<&PlaceLocation> = surface
        .config
        .places
        .iter()
        .filter(|p| p.fiber.fiber_type == crate::kodaira::FiberType::NonKodaira)
        .map(|p| &p.location)
        .collect();
    let extra = bad.len().saturating_sub(1);
    if bad.is_empty() {
        return (NextAction::Stop, 0);
    }
    if bad
        .iter()
        .any(|l| matches!(l, PlaceLocation::FactorRoots { .. }))
    {
        return (NextAction::NonRational, extra);
    }
    match bad[0] {
        PlaceLocation::Rational(c) => (NextAction::RecurseAtFinite(c.clone()), extra),
        PlaceLocation::Infinity => (NextAction::RecurseAtInfinity, extra),
        PlaceLocation::FactorRoots { .. } => unreachable!("handled above"),
    }
}

/// Resolve an isolated (4, 6, 12) point by iterated blow-ups.
///
/// Preconditions: `point` lies in the strict (4, 6, 12) class and no
/// candidate divisor through it reaches the weak (4, 6) threshold —
/// candidates being `user_divisors` plus square-free factors of f and g
/// through the point. Interior centers are re-checked with the weak
/// point threshold (extra discriminant cancellation must not block the
/// loop); a failed re-check reports `NotIsolated` for that center.
pub fn resolve_isolated(
    model: &WeierstrassChart,
    point: &[Rat; 2],
    user_divisors: &[RatPoly],
    recursion_limit: u32,
) -> Result<ResolutionTree, ResolveError> {
    let isolation = model.isolation_report(point, user_divisors);
    if !isolation.isolated {
        return Err(ResolveError::NotIsolated(Box::new(isolation)));
    }

    let mut tree = ResolutionTree {
        input_chart: model.name.clone(),
        point: (*point).clone(),
        isolation,
        steps: Vec::new(),
        surfaces: Vec::new(),
        ledger: DiscrepancyLedger::default(),
        status: ResolutionStatus::Resolved,
        warnings: Vec::new(),
    };

    let mut chart = model.clone();
    let mut center = (*point).clone();
    let mut depth: u32 = 1;
    loop {
        if depth > recursion_limit {
            tree.status = ResolutionStatus::RecursionLimit;
            tree.warnings.push(format!(
                "recursion limit {recursion_limit} reached with a non-Kodaira point remaining"
            ));
            break;
        }
        let step = blow_up(&chart, &center, depth);
        tree.ledger.entries.push(LedgerEntry {
            divisor: step.label.clone(),
            base_discrepancy: 1,
            twist_k: i64::from(step.twist_k),
        });
        let surface = extract_surface(&step)?;
        tree.steps.push(step);
        let (action, extra) = next_action(&surface);
        tree.surfaces.push(surface);
        if extra > 0 {
            tree.warnings.push(format!(
                "depth {depth}: {extra} further non-Kodaira place(s) beyond the one acted on"
            ));
        }
        let step = tree.steps.last().expect("just pushed");
        let (next_chart, next_center) = match action {
            NextAction::Stop => {
                tree.status = ResolutionStatus::Resolved;
                break;
            }
            NextAction::NonRational => {
                tree.status = ResolutionStatus::NonRationalCenter;
                break;
            }
            NextAction::RecurseAtFinite(c) => (step.chart_u.clone(), [c, Rat::zero()]),
            NextAction::RecurseAtInfinity => (step.chart_v.clone(), [Rat::zero(), Rat::zero()]),
        };
        let interior_divisors: Vec<RatPoly> = next_chart
            .exceptional
            .iter()
            .map(|(d, _)| d.clone())
            .collect();
        let recheck = next_chart.isolation_report_weak(&next_center, &interior_divisors);
        if !recheck.isolated {
            return Err(ResolveError::NotIsolated(Box::new(recheck)));
        }
        chart = next_chart;
        center = next_center;
        depth += 1;
    }
    Ok(tree)
}
