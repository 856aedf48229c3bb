//! Kodaira fiber classification from vanishing-order triples.
//!
//! A triple records (ord f, ord g, ord Δ) of a short Weierstrass model
//! y² = x³ + f·x + g along a divisor or at a point, with Δ = 4f³ + 27g².
//! Classification follows the standard characteristic-zero table; triples
//! at or above (4, 6, 12) are flagged as non-Kodaira — those are exactly
//! the fibers this crate resolves by blowing up the base.

use std::fmt;

use crate::poly::Order;

/// (ord f, ord g, ord Δ) along a divisor or at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderTriple {
    pub a: Order,
    pub b: Order,
    pub d: Order,
}

impl OrderTriple {
    pub fn new(a: Order, b: Order, d: Order) -> Self {
        OrderTriple { a, b, d }
    }

    pub fn finite(a: u32, b: u32, d: u32) -> Self {
        OrderTriple {
            a: Order::Finite(a),
            b: Order::Finite(b),
            d: Order::Finite(d),
        }
    }

    /// Whether the triple can arise from a genuine model: Δ = 4f³ + 27g²
    /// forces ord Δ ≥ min(3·ord f, 2·ord g), with equality unless the two
    /// candidate valuations tie and cancellation can occur.
    pub fn is_consistent(&self) -> bool {
        let fa = self.a.scale(3);
        let gb = self.b.scale(2);
        let low = fa.min(gb);
        if fa != gb {
            self.d == low
        } else {
            self.d >= low
        }
    }

    /// Weak threshold: ord f ≥ 4 and ord g ≥ 6.
    pub fn meets_46_threshold(&self) -> bool {
        self.a >= Order::Finite(4) && self.b >= Order::Finite(6)
    }

    /// Strict (4, 6, 12)-fiber membership: (ord f = 4 and ord g ≥ 6, or
    /// ord f ≥ 4 and ord g = 6), with ord Δ = 12 exactly.
    pub fn is_46_12_class(&self) -> bool {
        let f4 = self.a == Order::Finite(4);
        let f4up = self.a >= Order::Finite(4);
        let g6 = self.b == Order::Finite(6);
        let g6up = self.b >= Order::Finite(6);
        ((f4 && g6up) || (f4up && g6)) && self.d == Order::Finite(12)
    }

    /// Subtract one (4, 6, 12) step; `None` below the weak threshold.
    pub fn reduce_46_12(&self) -> Option<OrderTriple> {
        if !self.meets_46_threshold() {
            return None;
        }
        let dec = |o: Order, k: u32| match o {
            Order::Finite(n) => Order::Finite(n - k),
            Order::Infinite => Order::Infinite,
        };
        Some(OrderTriple {
            a: dec(self.a, 4),
            b: dec(self.b, 6),
            d: dec(self.d, 12),
        })
    }
}

impl fmt::Display for OrderTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.d)
    }
}

/// Kodaira symbol, plus the non-Kodaira marker for fibers at or above the
/// (4, 6, 12) threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FiberType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
    NonKodaira,
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::II => write!(f, "II"),
            FiberType::III => write!(f, "III"),
            FiberType::IV => write!(f, "IV"),
            FiberType::IStar(n) => write!(f, "I{n}*"),
            FiberType::IVStar => write!(f, "IV*"),
            FiberType::IIIStar => write!(f, "III*"),
            FiberType::IIStar => write!(f, "II*"),
            FiberType::NonKodaira => write!(f, "non-Kodaira"),
        }
    }
}

impl FiberType {
    /// Parse a fiber tag as printed by `Display` (e.g. `I0*`, `IV`, `I12`).
    pub fn parse_tag(tag: &str) -> Option<FiberType> {
        let t = tag.trim();
        Some(match t {
            "II" => FiberType::II,
            "III" => FiberType::III,
            "IV" => FiberType::IV,
            "II*" => FiberType::IIStar,
            "III*" => FiberType::IIIStar,
            "IV*" => FiberType::IVStar,
            _ => {
                let (body, star) = match t.strip_suffix('*') {
                    Some(b) => (b, true),
                    None => (t, false),
                };
                let n: u32 = body.strip_prefix('I')?.parse().ok()?;
                if star {
                    FiberType::IStar(n)
                } else {
                    FiberType::I(n)
                }
            }
        })
    }
}

/// Root lattice attached to a fiber's component configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootLattice {
    Trivial,
    A(u32),
    D(u32),
    E(u8),
    NotApplicable,
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::Trivial => write!(f, "0"),
            RootLattice::A(n) => write!(f, "A{n}"),
            RootLattice::D(n) => write!(f, "D{n}"),
            RootLattice::E(n) => write!(f, "E{n}"),
            RootLattice::NotApplicable => write!(f, "none"),
        }
    }
}

/// A classified fiber: type, component count on the smooth model, root
/// lattice, and Euler-number contribution (equal to ord Δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KodairaFiber {
    pub fiber_type: FiberType,
    /// `None` only for non-Kodaira fibers, which have no smooth elliptic
    /// model to count components on.
    pub components: Option<u32>,
    pub root_lattice: RootLattice,
    pub euler: Order,
}

/// No row of the classification table matches; the triple cannot arise
/// from a Weierstrass model.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("order triple {0} does not match any fiber classification row")]
pub struct MalformedTriple(pub OrderTriple);

/// Classify a vanishing-order triple.
pub fn classify(t: OrderTriple) -> Result<KodairaFiber, MalformedTriple> {
    use Order::Finite;
    if t.a.is_infinite() && t.b.is_infinite() {
        // f = g = 0 identically: not a fibration at all.
        return Err(MalformedTriple(t));
    }
    if t.meets_46_threshold() {
        return Ok(build(FiberType::NonKodaira, t.d));
    }
    let d = match t.d.finite() {
        Some(d) => d,
        None => return Err(MalformedTriple(t)),
    };
    let ty = if d == 0 {
        FiberType::I(0)
    } else if t.a == Finite(0) && t.b == Finite(0) {
        FiberType::I(d)
    } else if t.b == Finite(1) && d == 2 && t.a >= Finite(1) {
        FiberType::II
    } else if t.a == Finite(1) && d == 3 && t.b >= Finite(2) {
        FiberType::III
    } else if t.b == Finite(2) && d == 4 && t.a >= Finite(2) {
        FiberType::IV
    } else if d == 6 && t.a >= Finite(2) && t.b >= Finite(3) {
        FiberType::IStar(0)
    } else if t.a == Finite(2) && t.b == Finite(3) && d >= 7 {
        FiberType::IStar(d - 6)
    } else if t.b == Finite(4) && d == 8 && t.a >= Finite(3) {
        FiberType::IVStar
    } else if t.a == Finite(3) && d == 9 && t.b >= Finite(5) {
        FiberType::IIIStar
    } else if t.b == Finite(5) && d == 10 && t.a >= Finite(4) {
        FiberType::IIStar
    } else {
        return Err(MalformedTriple(t));
    };
    Ok(build(ty, t.d))
}

fn build(ty: FiberType, d: Order) -> KodairaFiber {
    let (components, root_lattice) = component_data(ty);
    KodairaFiber {
        fiber_type: ty,
        components,
        root_lattice,
        euler: d,
    }
}

/// Component count and root lattice per fiber type.
pub fn component_data(ty: FiberType) -> (Option<u32>, RootLattice) {
    match ty {
        FiberType::I(0) => (Some(1), RootLattice::Trivial),
        FiberType::I(1) => (Some(1), RootLattice::Trivial),
        FiberType::I(n) => (Some(n), RootLattice::A(n - 1)),
        FiberType::II => (Some(1), RootLattice::Trivial),
        FiberType::III => (Some(2), RootLattice::A(1)),
        FiberType::IV => (Some(3), RootLattice::A(2)),
        FiberType::IStar(n) => (Some(n + 5), RootLattice::D(n + 4)),
        FiberType::IVStar => (Some(7), RootLattice::E(6)),
        FiberType::IIIStar => (Some(8), RootLattice::E(7)),
        FiberType::IIStar => (Some(9), RootLattice::E(8)),
        FiberType::NonKodaira => (None, RootLattice::NotApplicable),
    }
}

/// Fixed-format rendering of the classification table, for diagnostics.
pub fn table_text() -> String {
    let rows: &[(&str, &str, &str, &str, &str)] = &[
        ("I0", "(-, -, 0)", "1", "0", "0"),
        ("In (n>=1)", "(0, 0, n)", "n", "A(n-1), 0 for n=1", "n"),
        ("II", "(>=1, 1, 2)", "1", "0", "2"),
        ("III", "(1, >=2, 3)", "2", "A1", "3"),
        ("IV", "(>=2, 2, 4)", "3", "A2", "4"),
        ("I0*", "(>=2, 3, 6) or (2, >=3, 6)", "5", "D4", "6"),
        ("In* (n>=1)", "(2, 3, 6+n)", "n+5", "D(n+4)", "6+n"),
        ("IV*", "(>=3, 4, 8)", "7", "E6", "8"),
        ("III*", "(3, >=5, 9)", "8", "E7", "9"),
        ("II*", "(>=4, 5, 10)", "9", "E8", "10"),
        ("non-Kodaira", "(>=4, >=6, >=12)", "-", "none", "ord delta"),
    ];
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:<28} {:<12} {:<18} {}\n",
        "type", "(ord f, ord g, ord delta)", "components", "root lattice", "euler"
    ));
    for (ty, cond, comps, lat, euler) in rows {
        out.push_str(&format!(
            "{ty:<14} {cond:<28} {comps:<12} {lat:<18} {euler}\n"
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fiber(a: u32, b: u32, d: u32) -> KodairaFiber {
        classify(OrderTriple::finite(a, b, d)).unwrap()
    }

    #[test]
    fn classifies_the_standard_rows() {
        assert_eq!(fiber(0, 0, 0).fiber_type, FiberType::I(0));
        assert_eq!(fiber(0, 0, 5).fiber_type, FiberType::I(5));
        assert_eq!(fiber(1, 1, 2).fiber_type, FiberType::II);
        assert_eq!(fiber(1, 2, 3).fiber_type, FiberType::III);
        assert_eq!(fiber(2, 2, 4).fiber_type, FiberType::IV);
        assert_eq!(fiber(2, 3, 6).fiber_type, FiberType::IStar(0));
        assert_eq!(fiber(2, 3, 8).fiber_type, FiberType::IStar(2));
        assert_eq!(fiber(3, 4, 8).fiber_type, FiberType::IVStar);
        assert_eq!(fiber(3, 5, 9).fiber_type, FiberType::IIIStar);
        assert_eq!(fiber(4, 5, 10).fiber_type, FiberType::IIStar);
        assert_eq!(fiber(4, 6, 12).fiber_type, FiberType::NonKodaira);
    }

    #[test]
    fn component_counts_and_lattices() {
        assert_eq!(fiber(0, 0, 1).components, Some(1));
        assert_eq!(fiber(0, 0, 1).root_lattice, RootLattice::Trivial);
        assert_eq!(fiber(0, 0, 5).components, Some(5));
        assert_eq!(fiber(0, 0, 5).root_lattice, RootLattice::A(4));
        assert_eq!(fiber(2, 3, 6).components, Some(5));
        assert_eq!(fiber(2, 3, 6).root_lattice, RootLattice::D(4));
        assert_eq!(fiber(2, 3, 9).components, Some(8));
        assert_eq!(fiber(2, 3, 9).root_lattice, RootLattice::D(7));
        assert_eq!(fiber(4, 5, 10).components, Some(9));
        assert_eq!(fiber(4, 5, 10).root_lattice, RootLattice::E(8));
        assert_eq!(fiber(4, 6, 12).components, None);
    }

    #[test]
    fn euler_equals_discriminant_order() {
        for (a, b, d) in [(0, 0, 3), (1, 1, 2), (2, 3, 6), (2, 3, 11), (3, 5, 9)] {
            assert_eq!(fiber(a, b, d).euler, Order::Finite(d));
        }
    }

    #[test]
    fn infinite_orders_classify_via_the_finite_side() {
        use Order::{Finite, Infinite};
        let t = |a, b, d| OrderTriple::new(a, b, d);
        let ty = |tr| classify(tr).unwrap().fiber_type;
        assert_eq!(ty(t(Infinite, Finite(1), Finite(2))), FiberType::II);
        assert_eq!(ty(t(Finite(1), Infinite, Finite(3))), FiberType::III);
        assert_eq!(ty(t(Infinite, Finite(5), Finite(10))), FiberType::IIStar);
        assert_eq!(ty(t(Finite(2), Infinite, Finite(6))), FiberType::IStar(0));
        assert_eq!(ty(t(Infinite, Finite(6), Finite(12))), FiberType::NonKodaira);
        assert!(classify(t(Infinite, Infinite, Infinite)).is_err());
    }

    #[test]
    fn malformed_triples_are_rejected() {
        assert!(classify(OrderTriple::finite(1, 1, 1)).is_err());
        assert!(classify(OrderTriple::finite(1, 5, 2)).is_err());
        assert!(classify(OrderTriple::finite(2, 2, 7)).is_err());
        let err = classify(OrderTriple::finite(1, 1, 1)).unwrap_err();
        assert!(err.to_string().contains("(1, 1, 1)"));
    }

    #[test]
    fn strict_class_versus_weak_threshold() {
        let strict = |a, b, d| OrderTriple::finite(a, b, d).is_46_12_class();
        let weak = |a, b, d| OrderTriple::finite(a, b, d).meets_46_threshold();
        assert!(strict(4, 6, 12));
        assert!(strict(4, 7, 12));
        assert!(strict(5, 6, 12));
        assert!(!strict(5, 7, 14) && weak(5, 7, 14));
        assert!(!strict(4, 6, 13) && weak(4, 6, 13));
        assert!(!strict(2, 3, 6) && !weak(2, 3, 6));
        // Infinite orders sit above every finite threshold.
        let inf = OrderTriple::new(Order::Infinite, Order::Finite(6), Order::Finite(12));
        assert!(inf.is_46_12_class() && inf.meets_46_threshold());
    }

    #[test]
    fn reduction_by_one_step_lands_on_the_table() {
        let reduced = OrderTriple::finite(4, 6, 12).reduce_46_12().unwrap();
        assert_eq!(reduced, OrderTriple::finite(0, 0, 0));
        assert_eq!(classify(reduced).unwrap().fiber_type, FiberType::I(0));
        let reduced = OrderTriple::finite(6, 9, 18).reduce_46_12().unwrap();
        assert_eq!(reduced, OrderTriple::finite(2, 3, 6));
        assert!(OrderTriple::finite(2, 3, 6).reduce_46_12().is_none());
    }

    #[test]
    fn consistency_check_matches_discriminant_structure() {
        assert!(OrderTriple::finite(2, 3, 7).is_consistent());
        assert!(OrderTriple::finite(2, 3, 6).is_consistent());
        assert!(OrderTriple::finite(0, 0, 9).is_consistent());
        assert!(OrderTriple::finite(1, 2, 3).is_consistent());
        assert!(!OrderTriple::finite(1, 5, 2).is_consistent());
        assert!(!OrderTriple::finite(2, 3, 5).is_consistent());
        assert!(!OrderTriple::finite(1, 1, 1).is_consistent());
    }

    #[test]
    fn fiber_tags_round_trip() {
        for ty in [
            FiberType::I(0),
            FiberType::I(9),
            FiberType::II,
            FiberType::III,
            FiberType::IV,
            FiberType::IStar(0),
            FiberType::IStar(4),
            FiberType::IVStar,
            FiberType::IIIStar,
            FiberType::IIStar,
        ] {
            assert_eq!(FiberType::parse_tag(&ty.to_string()), Some(ty));
        }
        assert_eq!(FiberType::parse_tag("bogus"), None);
    }

    #[test]
    fn table_text_lists_every_row() {
        let text = table_text();
        for tag in ["I0", "II*", "non-Kodaira", "D(n+4)"] {
            assert!(text.contains(tag), "missing {tag}");
        }
    }
}
