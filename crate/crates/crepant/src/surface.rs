//! Restriction of a blown-up model to its exceptional curve: the induced
//! elliptic surface, its Kodaira fiber configuration over the curve, and
//! the rationality verdict.

use std::fmt;

use num_traits::Zero;

use crate::kodaira::{classify, FiberType, KodairaFiber, OrderTriple};
use crate::poly::{gcd, squarefree_decompose, univariate_rational_roots, Rat, RatPoly};
use crate::resolve::BlowupStep;

/// Where a fiber sits on the exceptional curve E ≅ ℙ¹.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceLocation {
    /// Finite rational point, in the affine coordinate of the U chart.
    Rational(Rat),
    /// The Galois orbit cut out by an irreducible-over-ℚ square-free
    /// factor with no rational root; `degree` geometric points.
    FactorRoots { factor: RatPoly, degree: u32 },
    /// The point at infinity (v = 0 on the V chart).
    Infinity,
}

impl PlaceLocation {
    /// Render with the affine coordinate name, e.g. `u = 3/2`,
    /// `root_of(4*u^12 + 27)`, `infinity`.
    pub fn describe(&self, coordinate: &str) -> String {
        match self {
            PlaceLocation::Rational(c) => format!("{coordinate} = {c}"),
            PlaceLocation::FactorRoots { factor, .. } => format!("root_of({factor})"),
            PlaceLocation::Infinity => "infinity".to_string(),
        }
    }

    fn sort_key(&self) -> (u8, Option<&Rat>, String) {
        match self {
            PlaceLocation::Rational(c) => (0, Some(c), String::new()),
            PlaceLocation::FactorRoots { factor, .. } => (1, None, factor.to_string()),
            PlaceLocation::Infinity => (2, None, String::new()),
        }
    }
}

/// One singular fiber (or Galois orbit of fibers) on the surface.
#[derive(Debug, Clone)]
pub struct FiberPlace {
    pub location: PlaceLocation,
    pub orders: OrderTriple,
    pub fiber: KodairaFiber,
    /// Number of geometric points in the place.
    pub points: u32,
}

/// The singular fibers of the surface; smooth (I0) places are omitted.
#[derive(Debug, Clone)]
pub struct FiberConfiguration {
    pub places: Vec<FiberPlace>,
    /// Σ (Euler contribution × points); equals 12·k for a twist by k.
    pub total_delta_degree: u32,
}

impl FiberConfiguration {
    /// The fiber types expanded to one entry per geometric point, sorted.
    pub fn geometric_fiber_types(&self) -> Vec<FiberType> {
        let mut out = Vec::new();
        for p in &self.places {
            for _ in 0..p.points {
                out.push(p.fiber.fiber_type);
            }
        }
        out.sort();
        out
    }
}

/// The elliptic surface over one exceptional curve.
#[derive(Debug, Clone)]
pub struct SurfaceReport {
    /// Name of the U chart the affine data lives on.
    pub source_chart: String,
    /// Affine coordinate along the exceptional curve in the U chart.
    pub coordinate: String,
    pub exceptional_label: String,
    pub f_on_curve: RatPoly,
    pub g_on_curve: RatPoly,
    pub delta_on_curve: RatPoly,
    /// Degrees of the line bundles carrying f and g: (4k, 6k).
    pub bundle_degree_f: u32,
    pub bundle_degree_g: u32,
    /// Whether the bundle degrees are within the rational-surface range
    /// (4k ≤ 4 and 6k ≤ 6, i.e. k ≤ 1).
    pub bundle_degrees_minimal: bool,
    pub config: FiberConfiguration,
    /// Rational elliptic surface: total Δ degree 12 and every fiber of
    /// Kodaira type.
    pub rational: bool,
    pub has_46_12_point: bool,
    /// First non-Kodaira place in display order, if any.
    pub offending: Option<PlaceLocation>,
    /// True when the j-invariant is constant along the curve
    /// (4f³ proportional to Δ, or f ≡ 0).
    pub isotrivial: bool,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(
        "discriminant vanishes identically on the exceptional curve; \
         the restriction is not an elliptic surface"
    )]
    RestrictedDeltaZero,
}

/// Restrict a two-variable polynomial to the line `zero_var = 0`,
/// producing a univariate polynomial in `keep_var`.
fn restrict(p: &RatPoly, keep: usize, zero: usize) -> RatPoly {
    let keep_name = p.vars()[keep].clone();
    RatPoly::from_terms(
        &[&keep_name],
        p.terms().filter_map(|(e, c)| {
            if e[zero] == 0 {
                Some((vec![e[keep]], c.clone()))
            } else {
                None
            }
        }),
    )
}

fn orders_on_curve(f: &RatPoly, g: &RatPoly, delta: &RatPoly, along: &RatPoly) -> OrderTriple {
    let t = OrderTriple::new(f.ord_along(along), g.ord_along(along), delta.ord_along(along));
    assert!(t.is_consistent(), "orders {t} violate discriminant structure");
    t
}

/// Extract the elliptic surface over the exceptional curve of one blow-up
/// round. The affine part is read off the U chart (exceptional = second
/// variable), the point at infinity off the V chart (exceptional = first
/// variable).
pub fn extract_surface(step: &BlowupStep) -> Result<SurfaceReport, SurfaceError> {
    let coordinate = step.chart_u.var_names()[0].to_string();
    let f_e = restrict(step.chart_u.f(), 0, 1);
    let g_e = restrict(step.chart_u.g(), 0, 1);
    let delta_e = restrict(step.chart_u.delta(), 0, 1);
    if delta_e.is_zero() {
        return Err(SurfaceError::RestrictedDeltaZero);
    }

    // Square-free classes of Δ|E, refined against those of f|E and g|E so
    // every piece carries a well-defined order triple.
    let mut pieces: Vec<RatPoly> = if delta_e.is_constant() {
        Vec::new()
    } else {
        squarefree_decompose(&delta_e)
            .1
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    };
    for half in [&f_e, &g_e] {
        if half.is_zero() || half.is_constant() {
            continue;
        }
        for (class, _) in squarefree_decompose(half).1 {
            pieces = refine(pieces, &class);
        }
    }

    let mut places: Vec<FiberPlace> = Vec::new();
    let var = RatPoly::var(&[&coordinate], &coordinate);
    for piece in pieces {
        let mut rem = piece;
        for (root, _) in univariate_rational_roots(&rem) {
            let lin = &var - &RatPoly::constant(&[&coordinate], root.clone());
            rem = rem.exact_div(&lin).expect("root found by evaluation");
            let orders = orders_on_curve(&f_e, &g_e, &delta_e, &lin);
            places.push(FiberPlace {
                location: PlaceLocation::Rational(root),
                fiber: classify(orders).expect("consistent restricted orders classify"),
                orders,
                points: 1,
            });
        }
        if !rem.is_constant() {
            let orders = orders_on_curve(&f_e, &g_e, &delta_e, &rem);
            let degree = rem.total_degree().expect("non-constant");
            places.push(FiberPlace {
                location: PlaceLocation::FactorRoots {
                    factor: rem.normalized(),
                    degree,
                },
                fiber: classify(orders).expect("consistent restricted orders classify"),
                orders,
                points: degree,
            });
        }
    }

    // Point at infinity, from the V chart.
    let f_inf = restrict(step.chart_v.f(), 1, 0);
    let g_inf = restrict(step.chart_v.g(), 1, 0);
    let delta_inf = restrict(step.chart_v.delta(), 1, 0);
    assert!(
        !delta_inf.is_zero(),
        "Δ restricted to E vanishes at infinity but not on the affine chart"
    );
    let origin = [Rat::zero()];
    let inf_orders = OrderTriple::new(
        f_inf.ord_at_point(&origin),
        g_inf.ord_at_point(&origin),
        delta_inf.ord_at_point(&origin),
    );
    assert!(inf_orders.is_consistent(), "orders {inf_orders} violate discriminant structure");
    let inf_fiber = classify(inf_orders).expect("consistent restricted orders classify");
    if inf_fiber.fiber_type != FiberType::I(0) {
        places.push(FiberPlace {
            location: PlaceLocation::Infinity,
            orders: inf_orders,
            fiber: inf_fiber,
            points: 1,
        });
    }

    places.sort_by(|a, b| a.location.sort_key().cmp(&b.location.sort_key()));

    let total: u32 = places
        .iter()
        .map(|p| p.fiber.euler.finite().expect("restricted Δ is nonzero") * p.points)
        .sum();
    let k = step.twist_k;
    assert_eq!(total, 12 * k, "Euler numbers must sum to the twisted Δ degree");

    let has_46_12_point = places
        .iter()
        .any(|p| p.fiber.fiber_type == FiberType::NonKodaira);
    let offending = places
        .iter()
        .find(|p| p.fiber.fiber_type == FiberType::NonKodaira)
        .map(|p| p.location.clone());
    let rational = total == 12 && !has_46_12_point;
    let isotrivial = is_isotrivial(&f_e, &delta_e);

    Ok(SurfaceReport {
        source_chart: step.chart_u.name.clone(),
        coordinate,
        exceptional_label: step.label.clone(),
        f_on_curve: f_e,
        g_on_curve: g_e,
        delta_on_curve: delta_e,
        bundle_degree_f: 4 * k,
        bundle_degree_g: 6 * k,
        bundle_degrees_minimal: k <= 1,
        config: FiberConfiguration {
            places,
            total_delta_degree: total,
        },
        rational,
        has_46_12_point,
        offending,
        isotrivial,
    })
}

/// Split each piece into its common part with `class` and the rest, so
/// that afterwards every piece either divides a power of `class` or is
/// coprime to it.
fn refine(pieces: Vec<RatPoly>, class: &RatPoly) -> Vec<RatPoly> {
    let mut out = Vec::new();
    for p in pieces {
        if p.is_constant() {
            continue;
        }
        let common = gcd(&p, class);
        if common.is_constant() || common == p.normalized() {
            out.push(p);
            continue;
        }
        let rest = p.exact_div(&common).expect("gcd divides");
        out.push(common);
        if !rest.is_constant() {
            out.push(rest);
        }
    }
    out
}

fn is_isotrivial(f_e: &RatPoly, delta_e: &RatPoly) -> bool {
    if f_e.is_zero() {
        return true;
    }
    let vars: Vec<&str> = f_e.vars().iter().map(|s| s.as_str()).collect();
    let four = RatPoly::from_int(&vars, 4);
    let cube = &four * &f_e.pow(3);
    // Proportionality: Δ·lc(4f³) = 4f³·lc(Δ).
    delta_e.scale(&cube.lc_lex()) == cube.scale(&delta_e.lc_lex())
}

/// Whether the configuration carries the Euler number of a rational
/// elliptic surface.
pub fn euler_check(config: &FiberConfiguration) -> bool {
    config.total_delta_degree == 12
}

/// One-line human explanation of the rationality flag.
pub fn rationality_verdict(report: &SurfaceReport) -> String {
    if report.rational {
        format!(
            "rational elliptic surface: total discriminant degree 12, \
             all fibers of Kodaira type{}",
            if report.isotrivial {
                " (isotrivial)"
            } else {
                ""
            }
        )
    } else if report.has_46_12_point {
        let loc = report
            .offending
            .as_ref()
            .expect("non-Kodaira place recorded")
            .describe(&report.coordinate);
        format!(
            "not rational: non-Kodaira fiber at {loc}{}",
            if report.isotrivial {
                "; j is constant along the curve"
            } else {
                ""
            }
        )
    } else {
        format!(
            "not rational: total discriminant degree {} exceeds 12",
            report.config.total_delta_degree
        )
    }
}

impl fmt::Display for FiberPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} with orders {} ({} point{})",
            self.fiber.fiber_type,
            self.orders,
            self.points,
            if self.points == 1 { "" } else { "s" }
        )
    }
}
