//! Weierstrass models y² = x³ + f·x + g over a two-variable affine base
//! chart: vanishing orders, minimality along divisors, minimalization
//! twists, and isolation of (4, 6, 12) points.

use crate::kodaira::OrderTriple;
use crate::poly::{gcd, squarefree_decompose, Order, Rat, RatPoly};
use num_traits::Zero;

/// A Weierstrass model on one affine chart of the base. The discriminant
/// is kept alongside the coefficients and never recomputed by callers.
#[derive(Debug, Clone)]
pub struct WeierstrassChart {
    pub name: String,
    f: RatPoly,
    g: RatPoly,
    delta: RatPoly,
    /// Exceptional divisors visible on this chart: (divisor, label).
    pub exceptional: Vec<(RatPoly, String)>,
    /// Minimalization twists applied so far: (divisor label, multiplicity).
    pub twist_log: Vec<(String, u32)>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("discriminant 4*f^3 + 27*g^2 vanishes identically: not an elliptic fibration")]
    ZeroDiscriminant,
}

/// Divisor-level minimality witness: a candidate divisor along which the
/// model still carries orders at or above (4, 6).
#[derive(Debug, Clone)]
pub struct MinimalityWitness {
    pub divisor: RatPoly,
    pub orders: OrderTriple,
}

/// Per-divisor diagnostics gathered by the isolation check.
#[derive(Debug, Clone)]
pub struct DivisorDiagnostic {
    pub divisor: RatPoly,
    pub through_point: bool,
    pub orders: OrderTriple,
    pub meets_threshold: bool,
}

/// Full isolation diagnostics for one candidate point.
#[derive(Debug, Clone)]
pub struct IsolationReport {
    pub chart: String,
    pub point: [Rat; 2],
    pub point_orders: OrderTriple,
    /// Strict membership: (4, m>=6) or (n>=4, 6) with ord Δ = 12.
    pub strict_class: bool,
    /// Weak membership: ord f >= 4 and ord g >= 6.
    pub meets_threshold: bool,
    pub divisors: Vec<DivisorDiagnostic>,
    pub isolated: bool,
    pub failure: Option<String>,
}

impl WeierstrassChart {
    /// Build a model from coefficients sharing a two-variable universe.
    pub fn new(name: &str, f: RatPoly, g: RatPoly) -> Result<Self, ModelError> {
        assert_eq!(f.vars(), g.vars(), "f and g share a variable universe");
        assert_eq!(f.vars().len(), 2, "base charts are two-dimensional");
        let delta = discriminant(&f, &g);
        if delta.is_zero() {
            return Err(ModelError::ZeroDiscriminant);
        }
        Ok(WeierstrassChart {
            name: name.to_string(),
            f,
            g,
            delta,
            exceptional: Vec::new(),
            twist_log: Vec::new(),
        })
    }

    pub fn f(&self) -> &RatPoly {
        &self.f
    }

    pub fn g(&self) -> &RatPoly {
        &self.g
    }

    pub fn delta(&self) -> &RatPoly {
        &self.delta
    }

    pub fn var_names(&self) -> [&str; 2] {
        [&self.f.vars()[0], &self.f.vars()[1]]
    }

    /// Vanishing orders of (f, g, Δ) at a rational point of this chart.
    pub fn orders_at(&self, point: &[Rat; 2]) -> OrderTriple {
        let t = OrderTriple::new(
            self.f.ord_at_point(point),
            self.g.ord_at_point(point),
            self.delta.ord_at_point(point),
        );
        assert!(t.is_consistent(), "orders {t} violate discriminant structure");
        t
    }

    /// Vanishing orders of (f, g, Δ) along a divisor (non-constant; treated
    /// as prime by contract).
    pub fn orders_along(&self, divisor: &RatPoly) -> OrderTriple {
        let t = OrderTriple::new(
            self.f.ord_along(divisor),
            self.g.ord_along(divisor),
            self.delta.ord_along(divisor),
        );
        assert!(t.is_consistent(), "orders {t} violate discriminant structure");
        t
    }

    /// Divide out the largest possible (4k, 6k) power of `divisor`:
    /// f̂ = f / d^(4k), ĝ = g / d^(6k) with k = min(⌊ord f/4⌋, ⌊ord g/6⌋).
    /// Returns the twisted model and k; k = 0 returns the model unchanged.
    pub fn minimalize_along(&self, divisor: &RatPoly, label: &str) -> (WeierstrassChart, u32) {
        let t = self.orders_along(divisor);
        let k_f = t.a.finite().map(|n| n / 4);
        let k_g = t.b.finite().map(|n| n / 6);
        let k = match (k_f, k_g) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => unreachable!("nonzero discriminant"),
        };
        if k == 0 {
            return (self.clone(), 0);
        }
        let f = self
            .f
            .exact_div(&divisor.pow(4 * k))
            .expect("order bound makes the division exact");
        let g = self
            .g
            .exact_div(&divisor.pow(6 * k))
            .expect("order bound makes the division exact");
        let mut chart = WeierstrassChart::new(&self.name, f, g)
            .expect("twisting scales the discriminant by a nonzero power");
        chart.exceptional = self.exceptional.clone();
        chart.twist_log = self.twist_log.clone();
        chart.twist_log.push((label.to_string(), k));
        (chart, k)
    }

    /// Non-constant square-free factors shared by f and g — the only
    /// divisors that could witness non-minimality.
    pub fn automatic_divisor_candidates(&self) -> Vec<RatPoly> {
        let common = if self.f.is_zero() {
            self.g.clone()
        } else if self.g.is_zero() {
            self.f.clone()
        } else {
            gcd(&self.f, &self.g)
        };
        if common.is_constant() {
            return Vec::new();
        }
        squarefree_decompose(&common)
            .1
            .into_iter()
            .map(|(factor, _)| factor)
            .collect()
    }

    /// Whether no candidate divisor (user-supplied or automatic) carries
    /// orders at or above (4, 6); a failing divisor is returned as witness.
    pub fn is_minimal(&self, user_divisors: &[RatPoly]) -> (bool, Option<MinimalityWitness>) {
        let mut candidates: Vec<RatPoly> = Vec::new();
        for d in user_divisors.iter().cloned().chain(self.automatic_divisor_candidates()) {
            let d = d.normalized();
            if !candidates.contains(&d) {
                candidates.push(d);
            }
        }
        for d in &candidates {
            let t = self.orders_along(d);
            if t.meets_46_threshold() {
                return (
                    false,
                    Some(MinimalityWitness {
                        divisor: d.clone(),
                        orders: t,
                    }),
                );
            }
        }
        (true, None)
    }

    /// Square-free factors of f and of g that pass through `point`.
    pub fn factors_through_point(&self, point: &[Rat; 2]) -> Vec<RatPoly> {
        let mut out: Vec<RatPoly> = Vec::new();
        for half in [&self.f, &self.g] {
            if half.is_zero() || half.is_constant() {
                continue;
            }
            for (factor, _) in squarefree_decompose(half).1 {
                let factor = factor.normalized();
                if factor.eval(point).is_zero() && !out.contains(&factor) {
                    out.push(factor);
                }
            }
        }
        out
    }

    /// Isolation check for a (4, 6, 12) point: the point itself must lie in
    /// the strict (4, 6, 12) class, and no candidate divisor through the
    /// point may reach the weak (4, 6) threshold. Candidates are the
    /// user-supplied divisors plus square-free factors of f and g through
    /// the point.
    pub fn isolation_report(&self, point: &[Rat; 2], user_divisors: &[RatPoly]) -> IsolationReport {
        self.isolation_report_with(point, user_divisors, true)
    }

    /// Same check with the weak threshold at the point instead of strict
    /// class membership — used when re-checking interior blow-up centers,
    /// where extra discriminant cancellation (ord Δ > 12) must not block
    /// the resolution.
    pub fn isolation_report_weak(
        &self,
        point: &[Rat; 2],
        user_divisors: &[RatPoly],
    ) -> IsolationReport {
        self.isolation_report_with(point, user_divisors, false)
    }

    fn isolation_report_with(
        &self,
        point: &[Rat; 2],
        user_divisors: &[RatPoly],
        strict: bool,
    ) -> IsolationReport {
        let point_orders = self.orders_at(point);
        let strict_class = point_orders.is_46_12_class();
        let meets_threshold = point_orders.meets_46_threshold();
        let mut divisors = Vec::new();
        let mut seen: Vec<RatPoly> = Vec::new();
        for d in user_divisors
            .iter()
            .cloned()
            .chain(self.factors_through_point(point))
        {
            let d = d.normalized();
            if seen.contains(&d) {
                continue;
            }
            seen.push(d.clone());
            let orders = self.orders_along(&d);
            divisors.push(DivisorDiagnostic {
                through_point: d.eval(point).is_zero(),
                meets_threshold: orders.meets_46_threshold(),
                orders,
                divisor: d,
            });
        }
        let point_ok = if strict { strict_class } else { meets_threshold };
        let blocking: Vec<&DivisorDiagnostic> = divisors
            .iter()
            .filter(|d| d.through_point && d.meets_threshold)
            .collect();
        let failure = if !point_ok {
            Some(format!(
                "point orders {point_orders} do not lie in the {} (4, 6, 12) class",
                if strict { "strict" } else { "weak" }
            ))
        } else if let Some(d) = blocking.first() {
            Some(format!(
                "divisor {} through the point carries orders {} at or above (4, 6)",
                d.divisor, d.orders
            ))
        } else {
            None
        };
        IsolationReport {
            chart: self.name.clone(),
            point: (*point).clone(),
            point_orders,
            strict_class,
            meets_threshold,
            divisors,
            isolated: failure.is_none(),
            failure,
        }
    }
}

/// Δ = 4f³ + 27g², the fixed sign convention throughout the crate.
pub fn discriminant(f: &RatPoly, g: &RatPoly) -> RatPoly {
    let four = RatPoly::from_int(&var_refs(f), 4);
    let twenty_seven = RatPoly::from_int(&var_refs(f), 27);
    &(&four * &f.pow(3)) + &(&twenty_seven * &g.pow(2))
}

fn var_refs(p: &RatPoly) -> Vec<&str> {
    p.vars().iter().map(|s| s.as_str()).collect()
}

/// Verdict of the canonical-order bound over a set of isolated fiber
/// triples: met iff every triple has ord f < 8 and ord g < 12.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalBound {
    pub met: bool,
    pub witness: Option<OrderTriple>,
}

pub fn canonical_bound_check(triples: &[OrderTriple]) -> CanonicalBound {
    for t in triples {
        if !(t.a < Order::Finite(8) && t.b < Order::Finite(12)) {
            return CanonicalBound {
                met: false,
                witness: Some(*t),
            };
        }
    }
    CanonicalBound {
        met: true,
        witness: None,
    }
}
