//! Multivariate gcd, square-free decomposition, and rational root finding.
//!
//! The gcd is computed by content/primitive-part recursion on the first
//! occurring variable, with a subresultant pseudo-remainder sequence on the
//! primitive parts — everything stays exact, nothing is done modulo a prime.
//! Square-free decomposition is Yun's algorithm applied per variable after
//! content extraction; rational roots come from the rational root test on
//! the normalized square-free factors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rat, RatPoly};

/// Normalized greatest common divisor: content one, positive leading
/// coefficient in lexicographic order.
///
/// `gcd(p, 0)` is the normalized `p`; both arguments zero is a bug and
/// panics.
pub fn gcd(p: &RatPoly, q: &RatPoly) -> RatPoly {
    assert!(
        !(p.is_zero() && q.is_zero()),
        "gcd of two zero polynomials"
    );
    p.assert_same_ring(q);
    if p.is_zero() {
        return q.normalized();
    }
    if q.is_zero() {
        return p.normalized();
    }
    gcd_inner(p, q).normalized()
}

fn gcd_inner(p: &RatPoly, q: &RatPoly) -> RatPoly {
    if p.is_constant() || q.is_constant() {
        return RatPoly::one(&p.var_refs());
    }
    let occ_p = p.occurring();
    let occ_q = q.occurring();
    let x = *occ_p.iter().chain(occ_q.iter()).min().unwrap();
    match (occ_p.contains(&x), occ_q.contains(&x)) {
        (true, false) => gcd_inner(&content_in(p, x), q),
        (false, true) => gcd_inner(p, &content_in(q, x)),
        _ => {
            let cp = content_in(p, x);
            let cq = content_in(q, x);
            let pp_p = p.exact_div(&cp).expect("content divides");
            let pp_q = q.exact_div(&cq).expect("content divides");
            let c = if cp.is_constant() || cq.is_constant() {
                RatPoly::one(&p.var_refs())
            } else {
                gcd(&cp, &cq)
            };
            let r = subresultant_prs(pp_p, pp_q, x);
            if r.is_constant() {
                return c;
            }
            let rp = r.exact_div(&content_in(&r, x)).expect("content divides");
            &c * &rp
        }
    }
}

/// Gcd of the coefficients of `p` viewed as univariate in variable index
/// `x`; the result is free of `x` and normalized.
fn content_in(p: &RatPoly, x: usize) -> RatPoly {
    let mut acc: Option<RatPoly> = None;
    for c in coeffs_in(p, x) {
        if c.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => c.normalized(),
            Some(a) => gcd(&a, &c),
        });
        if acc.as_ref().unwrap().is_constant() {
            return RatPoly::one(&p.var_refs());
        }
    }
    acc.expect("nonzero polynomial has a nonzero coefficient")
}

/// Coefficients of `p` by power of variable index `x`, each an `x`-free
/// polynomial in the same universe. Index `i` holds the coefficient of
/// `x^i`.
fn coeffs_in(p: &RatPoly, x: usize) -> Vec<RatPoly> {
    let d = p.terms().map(|(e, _)| e[x]).max().unwrap_or(0);
    let mut out = vec![RatPoly::zero(&p.var_refs()); d as usize + 1];
    for (e, c) in p.terms() {
        let mut rest = e.clone();
        let k = rest[x] as usize;
        rest[x] = 0;
        RatPoly::add_term(&mut out[k].terms, rest, c.clone());
    }
    out
}

fn deg_in(p: &RatPoly, x: usize) -> u32 {
    p.terms().map(|(e, _)| e[x]).max().expect("nonzero")
}

fn lc_in(p: &RatPoly, x: usize) -> RatPoly {
    let d = deg_in(p, x);
    let mut out = RatPoly::zero(&p.var_refs());
    for (e, c) in p.terms() {
        if e[x] == d {
            let mut rest = e.clone();
            rest[x] = 0;
            RatPoly::add_term(&mut out.terms, rest, c.clone());
        }
    }
    out
}

fn x_power(p: &RatPoly, x: usize, k: u32) -> RatPoly {
    let mut out = RatPoly::zero(&p.var_refs());
    let mut e = vec![0; out.vars.len()];
    e[x] = k;
    out.terms.insert(e, Rat::one());
    out
}

/// Fraction-free pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`,
/// both viewed as univariate in variable index `x`.
fn prem(a: &RatPoly, b: &RatPoly, x: usize) -> RatPoly {
    let db = deg_in(b, x);
    let lcb = lc_in(b, x);
    let mut r = a.clone();
    let mut e = deg_in(a, x) + 1 - db;
    while !r.is_zero() && deg_in(&r, x) >= db {
        let shift = x_power(a, x, deg_in(&r, x) - db);
        let s = &(&lc_in(&r, x) * &shift) * b;
        r = &(&r * &lcb) - &s;
        e -= 1;
    }
    &r * &lcb.pow(e)
}

/// Last nonzero member of the subresultant pseudo-remainder sequence of two
/// polynomials that are primitive with respect to variable `x`; a constant
/// (in `x`) result means the primitive parts are coprime.
fn subresultant_prs(mut a: RatPoly, mut b: RatPoly, x: usize) -> RatPoly {
    if deg_in(&a, x) < deg_in(&b, x) {
        std::mem::swap(&mut a, &mut b);
    }
    let one = RatPoly::one(&a.var_refs());
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = deg_in(&a, x) - deg_in(&b, x);
        let r = prem(&a, &b, x);
        if r.is_zero() {
            return b;
        }
        if deg_in(&r, x) == 0 {
            return one;
        }
        let denom = &g * &h.pow(delta);
        a = b;
        b = r.exact_div(&denom).expect("subresultant division is exact");
        g = lc_in(&a, x);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant h-update is exact"),
        };
    }
}

/// Square-free decomposition over the rationals:
/// `p = content · Π factor_i ^ mult_i` with pairwise-coprime square-free
/// normalized factors, sorted by multiplicity then rendering.
///
/// Panics on zero or constant input.
pub fn squarefree_decompose(p: &RatPoly) -> (Rat, Vec<(RatPoly, u32)>) {
    assert!(!p.is_zero(), "square-free decomposition of zero");
    assert!(
        !p.is_constant(),
        "square-free decomposition of a constant"
    );
    let mut content = Rat::one();
    let mut factors = Vec::new();
    decompose_rec(p, &mut content, &mut factors);
    factors.sort_by(|(f1, m1), (f2, m2)| {
        m1.cmp(m2).then_with(|| f1.to_string().cmp(&f2.to_string()))
    });
    (content, factors)
}

fn decompose_rec(p: &RatPoly, content: &mut Rat, out: &mut Vec<(RatPoly, u32)>) {
    if let Some(c) = p.as_constant() {
        *content *= c;
        return;
    }
    let x = p.occurring()[0];
    let cont = content_in(p, x);
    let pp = p.exact_div(&cont).expect("content divides");
    if !cont.is_constant() {
        decompose_rec(&cont, content, out);
    }
    yun(&pp, x, content, out);
}

/// Yun's algorithm with respect to variable index `x`; `p` must be
/// primitive (up to a rational unit) and nonconstant in `x`.
fn yun(p: &RatPoly, x: usize, content: &mut Rat, out: &mut Vec<(RatPoly, u32)>) {
    let name = p.vars[x].clone();
    let dp = p.derivative(&name);
    let g0 = gcd(p, &dp);
    let mut b = p.exact_div(&g0).expect("gcd divides");
    let mut c = dp.exact_div(&g0).expect("gcd divides");
    let mut i = 1u32;
    let guard = p.total_degree().unwrap_or(0) + 2;
    loop {
        assert!(i <= guard, "square-free decomposition failed to terminate");
        if let Some(cst) = b.as_constant() {
            *content *= cst;
            return;
        }
        let delta = &c - &b.derivative(&name);
        let a = if delta.is_zero() {
            b.normalized()
        } else {
            gcd(&b, &delta)
        };
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("factor divides");
        c = delta.exact_div(&a).expect("factor divides");
        i += 1;
    }
}

/// All rational roots of an effectively univariate polynomial, with
/// multiplicities, sorted ascending. A nonzero constant has no roots.
///
/// Panics on zero input or more than one occurring variable.
pub fn univariate_rational_roots(p: &RatPoly) -> Vec<(Rat, u32)> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    let occ = p.occurring();
    assert!(
        occ.len() <= 1,
        "rational roots require an effectively univariate polynomial"
    );
    if occ.is_empty() {
        return Vec::new();
    }
    let x = occ[0];
    let (_, factors) = squarefree_decompose(p);
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    for (f, m) in factors {
        let mut f = f;
        let coeffs = coeffs_in(&f, x);
        if coeffs[0].is_zero() {
            roots.push((Rat::zero(), m));
            f = f
                .exact_div(&x_power(&f, x, 1))
                .expect("vanishing constant term means the variable divides");
            if f.is_constant() {
                continue;
            }
        }
        // Normalized square-free factor: coprime integer coefficients.
        let coeffs = coeffs_in(&f, x);
        let lead = coeffs

            .last()
            .unwrap()
            .as_constant()
            .expect("univariate coefficients are rational")
            .numer()
            .abs();
        let trail = coeffs[0]
            .as_constant()
            .expect("univariate coefficients are rational")
            .numer()
            .abs();
        let mut candidates = BTreeSet::new();
        for den in divisors(&lead) {
            for num in divisors(&trail) {
                let r = Rat::new(num.clone(), den.clone());
                candidates.insert(-r.clone());
                candidates.insert(r);
            }
        }
        let vals: Vec<Rat> = (0..f.vars.len())
            .map(|_| Rat::zero())
            .collect();
        for r in candidates {
            let mut point = vals.clone();
            point[x] = r.clone();
            if f.eval(&point).is_zero() {
                roots.push((r, m));
            }
        }
    }
    roots.sort_by(|(a, _), (b, _)| a.cmp(b));
    roots
}

/// Positive divisors of a positive integer, ascending.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(n.is_positive(), "divisors of a non-positive integer");
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(n) = num_traits::ToPrimitive::to_u128(n) {
        let mut d = 1u128;
        while d <= n / d {
            if n % d == 0 {
                small.push(BigInt::from(d));
                if d != n / d {
                    large.push(BigInt::from(n / d));
                }
            }
            d += 1;
        }
    } else {
        let mut d = BigInt::one();
        while d <= n / &d {
            if (n % &d).is_zero() {
                small.push(d.clone());
                let q = n / &d;
                if q != d {
                    large.push(q);
                }
            }
            d += BigInt::one();
        }
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(text: &str) -> RatPoly {
        RatPoly::parse(text, &["s", "t"]).unwrap()
    }

    fn w(text: &str) -> RatPoly {
        RatPoly::parse(text, &["w"]).unwrap()
    }

    #[test]
    fn gcd_of_fiber_powers() {
        let p = st("(s - t^2)^2*(s + t^2)^2");
        let q = st("(s - t^2)^3*(s + t^2)^3");
        assert_eq!(gcd(&p, &q), p.normalized());
        assert_eq!(gcd(&q, &p), p.normalized());
    }

    #[test]
    fn gcd_divides_both_and_is_maximal() {
        // Oracle: build gcd instances as (a*c, b*c) with a, b coprime by
        // construction, then check the defining property.
        let c = st("s^2 + t - 1/2");
        let a = st("s + 1");
        let b = st("t - 3");
        let g = gcd(&(&a * &c), &(&b * &c));
        assert_eq!(g, c.normalized());
        assert!((&a * &c).exact_div(&g).is_some());
        assert!((&b * &c).exact_div(&g).is_some());
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        assert_eq!(gcd(&st("s"), &st("t")), st("1"));
        assert_eq!(gcd(&st("s - t"), &st("s + t")), st("1"));
        assert_eq!(gcd(&st("s^2 + 1"), &st("s^2 + 2")), st("1"));
    }

    #[test]
    fn gcd_with_constant_or_zero() {
        assert_eq!(gcd(&st("6*s"), &st("4")), st("1"));
        assert_eq!(gcd(&st("-2*s^2"), &RatPoly::zero(&["s", "t"])), st("s^2"));
        assert_eq!(gcd(&RatPoly::zero(&["s", "t"]), &st("3*t - 3")), st("t - 1"));
    }

    #[test]
    #[should_panic(expected = "gcd of two zero polynomials")]
    fn gcd_of_zeros_panics() {
        let z = RatPoly::zero(&["s", "t"]);
        let _ = gcd(&z, &z);
    }

    #[test]
    fn squarefree_collision_factor() {
        let p = st("(s - t^2)^2*(s + t^2)^2");
        let (content, factors) = squarefree_decompose(&p);
        assert_eq!(content, Rat::one());
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].1, 2);
        assert_eq!(factors[0].0, st("(s - t^2)*(s + t^2)"));
    }

    #[test]
    fn squarefree_irreducible_degree_twelve() {
        let p = RatPoly::parse("4*u^12 + 27", &["u"]).unwrap();
        let (content, factors) = squarefree_decompose(&p);
        assert_eq!(content, Rat::one());
        assert_eq!(factors, vec![(p.clone(), 1)]);
    }

    #[test]
    fn squarefree_recomposes_with_content() {
        let p = st("12*s^2*(s + t)^3");
        let (content, factors) = squarefree_decompose(&p);
        let mut rebuilt = RatPoly::constant(&["s", "t"], content);
        for (f, m) in &factors {
            rebuilt = &rebuilt * &f.pow(*m);
        }
        assert_eq!(rebuilt, p);
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0], (st("s"), 2));
        assert_eq!(factors[1], (st("s + t"), 3));
    }

    #[test]
    #[should_panic(expected = "square-free decomposition of a constant")]
    fn squarefree_constant_panics() {
        let _ = squarefree_decompose(&st("5"));
    }

    #[test]
    fn roots_of_second_round_discriminant() {
        let p = w("31*(w - 1)^6*(w + 1)^6");
        let roots = univariate_rational_roots(&p);
        let one = Rat::one();
        assert_eq!(roots, vec![(-one.clone(), 6), (one, 6)]);
    }

    #[test]
    fn roots_none_for_irreducible() {
        let p = RatPoly::parse("4*u^12 + 27", &["u"]).unwrap();
        assert!(univariate_rational_roots(&p).is_empty());
        assert!(univariate_rational_roots(&w("3")).is_empty());
    }

    #[test]
    fn roots_at_zero_and_fractions() {
        let p = w("w^3");
        assert_eq!(univariate_rational_roots(&p), vec![(Rat::zero(), 3)]);
        let q = w("(2*w - 3)^2*(w + 1)");
        let roots = univariate_rational_roots(&q);
        assert_eq!(
            roots,
            vec![
                (-Rat::one(), 1),
                (Rat::new(BigInt::from(3), BigInt::from(2)), 2)
            ]
        );
    }

    #[test]
    fn roots_respect_multiplicity_from_decomposition() {
        let p = w("(w - 2)^4*(w^2 + 1)");
        assert_eq!(
            univariate_rational_roots(&p),
            vec![(Rat::from_integer(BigInt::from(2)), 4)]
        );
    }

    #[test]
    #[should_panic(expected = "effectively univariate")]
    fn roots_reject_bivariate() {
        let _ = univariate_rational_roots(&st("s*t + 1"));
    }

    #[test]
    fn divisor_enumeration() {
        let ds = divisors(&BigInt::from(28));
        let expect: Vec<BigInt> = [1, 2, 4, 7, 14, 28].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(ds, expect);
    }
}
