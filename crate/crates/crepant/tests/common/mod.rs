//! Randomized property suites over the core pipeline, shared between the
//! `properties` and `acceptance` test targets. Every suite draws at least
//! 200 small instances from a fixed-seed generator, so failures are
//! reproducible bit-for-bit. Each suite panics on the first violation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crepant::kodaira::{classify, component_data, OrderTriple};
use crepant::mwflop::extremal_table;
use crepant::poly::{squarefree_decompose, Order, Rat, RatPoly};
use crepant::resolve::{blow_up, resolve_isolated};
use crepant::weierstrass::{discriminant, WeierstrassChart};

const SEED: u64 = 0x0c0ffee5eed;
const CASES: usize = 200;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A random polynomial in (s, t): up to `terms` terms, exponents below
/// `max_exp`, small integer coefficients (possibly zero overall).
fn random_poly(rng: &mut ChaCha8Rng, terms: usize, max_exp: u32) -> RatPoly {
    let vars = ["s", "t"];
    let mut p = RatPoly::zero(&vars);
    for _ in 0..rng.gen_range(0..=terms) {
        let c = rng.gen_range(-9..=9i64);
        let e_s = rng.gen_range(0..=max_exp);
        let e_t = rng.gen_range(0..=max_exp);
        let power = &RatPoly::var(&vars, "s").pow(e_s) * &RatPoly::var(&vars, "t").pow(e_t);
        let mono = &RatPoly::constant(&vars, rat(c)) * &power;
        p = &p + &mono;
    }
    p
}

fn random_nonzero(rng: &mut ChaCha8Rng, terms: usize, max_exp: u32) -> RatPoly {
    loop {
        let p = random_poly(rng, terms, max_exp);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ring_axioms_hold() {
    let mut rng = rng();
    let vars = ["s", "t"];
    let zero = RatPoly::zero(&vars);
    let one = RatPoly::from_int(&vars, 1);
    for _ in 0..CASES {
        let p = random_poly(&mut rng, 3, 4);
        let q = random_poly(&mut rng, 3, 4);
        let r = random_poly(&mut rng, 3, 4);
        assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        assert_eq!(&p + &q, &q + &p);
        assert_eq!(&p * &q, &q * &p);
        assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        assert_eq!(&p + &zero, p);
        assert_eq!(&p * &one, p);
        assert_eq!(&p + &(-&p), zero);
        assert_eq!(&p * &zero, zero);
    }
}

pub fn order_is_additive_under_multiplication() {
    let mut rng = rng();
    let origin = [Rat::zero(), Rat::zero()];
    for _ in 0..CASES {
        let p = random_nonzero(&mut rng, 3, 4);
        let q = random_nonzero(&mut rng, 3, 4);
        let product = &p * &q;

        let at_point = |h: &RatPoly| h.ord_at_point(&origin);
        let sum = match (at_point(&p), at_point(&q)) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        };
        assert_eq!(at_point(&product), sum, "point orders of ({p}) * ({q})");

        // Divisor version along a random line through the origin.
        let vars = ["s", "t"];
        let c = rng.gen_range(-4..=4i64);
        let slope = &RatPoly::constant(&vars, rat(c)) * &RatPoly::var(&vars, "t");
        let line = &RatPoly::var(&vars, "s") - &slope;
        let along = |h: &RatPoly| h.ord_along(&line);
        let sum = match (along(&p), along(&q)) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        };
        assert_eq!(along(&product), sum, "divisor orders of ({p}) * ({q})");
    }
}

pub fn twist_rescales_the_discriminant_by_twelve_k() {
    let mut rng = rng();
    let vars = ["s", "t"];
    let s = RatPoly::var(&vars, "s");
    let mut done = 0;
    while done < CASES {
        let k = rng.gen_range(1..=2u32);
        let f0 = random_poly(&mut rng, 2, 2);
        let g0 = random_nonzero(&mut rng, 2, 2);
        let f = &f0 * &s.pow(4 * k);
        let g = &g0 * &s.pow(6 * k);
        let delta = discriminant(&f, &g);
        if delta.is_zero() {
            continue;
        }
        let chart = WeierstrassChart::new("base", f, g).unwrap();
        let (minimal, k_found) = chart.minimalize_along(&s, "s");
        assert!(k_found >= k, "stripped only {k_found} of {k} twists");
        let rescaled = minimal.delta() * &s.pow(12 * k_found);
        assert_eq!(rescaled, *chart.delta(), "twist equivariance for k = {k_found}");
        done += 1;
    }
}

pub fn printing_then_parsing_is_the_identity() {
    let mut rng = rng();
    let vars = ["s", "t"];
    for _ in 0..CASES + 100 {
        let p = random_poly(&mut rng, 4, 5);
        let text = p.to_string();
        let reparsed = RatPoly::parse(&text, &vars).unwrap_or_else(|e| panic!("`{text}`: {e}"));
        assert_eq!(reparsed, p, "round trip of `{text}`");
    }
}

pub fn squarefree_classes_recompose_exactly() {
    let mut rng = rng();
    let vars = ["s", "t"];
    let mut done = 0;
    while done < CASES {
        // Build a product with known repeated structure, then recompose.
        let mut p = RatPoly::constant(&vars, rat(rng.gen_range(1..=5)));
        for _ in 0..rng.gen_range(1..=3) {
            let factor = random_nonzero(&mut rng, 2, 2);
            if factor.is_constant() {
                continue;
            }
            p = &p * &factor.pow(rng.gen_range(1..=3));
        }
        if p.is_constant() {
            continue;
        }
        done += 1;
        let (content, classes) = squarefree_decompose(&p);
        let mut rebuilt = RatPoly::constant(&vars, content);
        for (class, mult) in &classes {
            rebuilt = &rebuilt * &class.pow(*mult);
            // Classes are pairwise coprime and squarefree by contract;
            // spot-check squarefreeness via gcd with the derivative.
            for (other, _) in &classes {
                if !std::ptr::eq(class, other) {
                    assert!(crepant::poly::gcd(class, other).is_constant());
                }
            }
        }
        assert_eq!(rebuilt, p, "recomposition of {p}");
    }
}

/// On the chart overlap (u, t) <-> (s, v) with s = u t, v = 1/u, the two
/// twisted models agree after the twist-weight rescaling.
pub fn blow_up_charts_agree_on_the_overlap() {
    let mut rng = rng();
    let origin = [Rat::zero(), Rat::zero()];
    let mut done = 0;
    while done < CASES {
        let f = random_poly(&mut rng, 3, 3);
        let g = random_nonzero(&mut rng, 3, 3);
        if discriminant(&f, &g).is_zero() {
            continue;
        }
        let parent = WeierstrassChart::new("base", f, g).unwrap();
        let step = blow_up(&parent, &origin, 1);
        let k = step.twist_k;

        // Random overlap point with u, t nonzero.
        let u0 = rat(rng.gen_range(1..=6)) / rat(rng.gen_range(1..=3));
        let t0 = rat([-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]);
        let s0 = &u0 * &t0;
        let v0 = Rat::one() / &u0;
        let u_point = [u0.clone(), t0.clone()];
        let v_point = [s0, v0];

        for (weight, on_u, on_v) in [
            (4 * k, step.chart_u.f(), step.chart_v.f()),
            (6 * k, step.chart_u.g(), step.chart_v.g()),
            (12 * k, step.chart_u.delta(), step.chart_v.delta()),
        ] {
            let lhs = on_v.eval(&v_point) * u0.pow(weight as i32);
            assert_eq!(lhs, on_u.eval(&u_point), "overlap mismatch at weight {weight}");
        }
        done += 1;
    }
}

pub fn kodaira_classification_is_total_on_the_grid() {
    let mut checked = 0;
    for a in 0..=12u32 {
        for b in 0..=18u32 {
            for d in 0..=36u32 {
                let t = OrderTriple::finite(a, b, d);
                if !t.is_consistent() {
                    continue;
                }
                checked += 1;
                if let Ok(fiber) = classify(t) {
                    // The Euler number of a classified fiber is its
                    // discriminant order.
                    assert_eq!(fiber.euler, Order::Finite(d), "euler of {t}");
                    let (components, lattice) = component_data(fiber.fiber_type);
                    assert_eq!(fiber.components, components);
                    assert_eq!(fiber.root_lattice, lattice);
                }
            }
        }
    }
    assert!(checked >= 200, "grid too small: {checked}");
}

pub fn extremal_rows_all_have_rank_zero() {
    let mut rng = rng();
    let table = extremal_table();
    assert_eq!(table.len(), 16);
    for _ in 0..CASES {
        let entry = &table[rng.gen_range(0..table.len())];
        let drop: u32 = entry
            .fibers
            .iter()
            .map(|ty| component_data(*ty).0.expect("extremal fibers are Kodaira") - 1)
            .sum();
        assert_eq!(drop, 8, "rank 8 - {drop} != 0 for {:?}", entry.fibers);
        assert!(entry.torsion_order >= 1);
    }
}

/// Random isolated (4, 6, 12) models: transverse or tangent collisions of
/// two (2, 3, 6) branches, optionally times a unit. All resolve with every
/// ledger entry net zero.
pub fn resolutions_of_isolated_points_are_crepant() {
    let mut rng = rng();
    let vars = ["s", "t"];
    let origin = [Rat::zero(), Rat::zero()];
    let s = RatPoly::var(&vars, "s");
    let t = RatPoly::var(&vars, "t");
    let mut done = 0;
    while done < CASES {
        // Two distinct branches through the origin.
        let (branch_a, branch_b) = if rng.gen_bool(0.5) {
            // Transverse: s - a t and s - b t (or the t-axis).
            let a = rng.gen_range(-4..=4i64);
            let mut b = rng.gen_range(-4..=4i64);
            while b == a {
                b = rng.gen_range(-4..=4i64);
            }
            let line = |c: i64| &s - &(&RatPoly::constant(&vars, rat(c)) * &t);
            if rng.gen_bool(0.2) {
                (line(a), t.clone())
            } else {
                (line(a), line(b))
            }
        } else {
            // Tangent: s - a t^2 and s + a t^2.
            let a = rng.gen_range(1..=4i64);
            let para = |c: i64| &s - &(&RatPoly::constant(&vars, rat(c)) * &t.pow(2));
            (para(a), para(-a))
        };
        let ab = &branch_a * &branch_b;
        let mut f = ab.pow(2);
        let g = ab.pow(3);
        if rng.gen_bool(0.3) {
            // A unit at the origin keeps the orders and the isolation.
            let scaled = &RatPoly::constant(&vars, rat(rng.gen_range(1..=3))) * &s;
            let unit = &RatPoly::from_int(&vars, 1) + &scaled;
            f = &f * &unit;
        }
        if discriminant(&f, &g).is_zero() {
            continue;
        }
        let model = WeierstrassChart::new("base", f, g).unwrap();
        let tree = resolve_isolated(&model, &origin, &[], 16)
            .unwrap_or_else(|e| panic!("branches {branch_a}, {branch_b}: {e}"));
        assert!(
            tree.ledger.entries.iter().all(|entry| entry.net() == 0),
            "non-crepant ledger for branches {branch_a}, {branch_b}"
        );
        assert!(tree.ledger.is_crepant());
        done += 1;
    }
}
