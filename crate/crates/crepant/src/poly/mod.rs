//! Exact sparse multivariate polynomials over the rationals.
//!
//! Conventions:
//! - A polynomial is attached to an ordered variable universe declared at
//!   construction time; mixing universes in ring operations is a bug and
//!   panics. Semantic equality (`==`) ignores unused declared variables.
//! - Terms are kept in canonical form: exponent vectors aligned with the
//!   declared variables, no explicitly stored zero coefficients.
//! - Lexicographic order on exponent vectors (earlier variables dominate)
//!   drives printing and leading-term selection.
//! - All arithmetic is exact; nothing here ever rounds.

mod gcd;
mod parse;

pub use gcd::{gcd, squarefree_decompose, univariate_rational_roots};
pub use parse::ParseError;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar (always in lowest terms, positive denominator).
pub type Rat = num_rational::BigRational;

/// Order of vanishing: a non-negative integer, or infinite for the zero
/// polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }

    /// Multiply by a non-negative integer scale (infinity absorbs).
    pub fn scale(self, k: u32) -> Order {
        match self {
            Order::Finite(n) => Order::Finite(n * k),
            Order::Infinite => Order::Infinite,
        }
    }

    pub fn plus(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinity"),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct RatPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl RatPoly {
    pub fn zero(vars: &[&str]) -> Self {
        RatPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = RatPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn from_int(vars: &[&str], n: i64) -> Self {
        RatPoly::constant(vars, Rat::from_integer(BigInt::from(n)))
    }

    /// The declared variable `name` as a degree-one polynomial.
    ///
    /// Panics if `name` is not in the universe.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = RatPoly::zero(vars);
        let i = p.var_index(name).expect("undeclared variable");
        let mut exp = vec![0; p.vars.len()];
        exp[i] = 1;
        p.terms.insert(exp, Rat::one());
        p
    }

    /// Parse `text` against the expression grammar, in the given universe.
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, ParseError> {
        parse::parse(text, vars)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The value of a constant polynomial; `None` if any variable occurs.
    pub fn as_constant(&self) -> Option<Rat> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rat::zero),
        )
    }

    pub fn one(vars: &[&str]) -> Self {
        RatPoly::constant(vars, Rat::one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, name: &str) -> Option<u32> {
        let i = self.var_index(name).expect("undeclared variable");
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Indices of variables that actually occur.
    pub fn occurring(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading coefficient in lexicographic term order.
    pub fn lc_lex(&self) -> Rat {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Build a polynomial from raw (exponents, coefficient) pairs, merging
    /// duplicate monomials and dropping zero coefficients.
    pub(crate) fn from_terms(
        vars: &[&str],
        raw: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> RatPoly {
        let mut p = RatPoly::zero(vars);
        for (exp, c) in raw {
            assert_eq!(exp.len(), p.vars.len(), "exponent arity mismatch");
            Self::add_term(&mut p.terms, exp, c);
        }
        p
    }

    fn assert_same_ring(&self, other: &RatPoly) {
        assert_eq!(
            self.vars, other.vars,
            "variable universe mismatch: {:?} vs {:?}",
            self.vars, other.vars
        );
    }

    fn add_term(terms: &mut BTreeMap<Vec<u32>, Rat>, exp: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> RatPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let c = f(c);
                (!c.is_zero()).then(|| (e.clone(), c))
            })
            .collect();
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        if c.is_zero() {
            return RatPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        let mut acc = RatPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        acc.terms.insert(vec![0; self.vars.len()], Rat::one());
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k == 0 {
                return acc;
            }
            base = &base * &base;
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide exactly.
    ///
    /// Panics on a zero divisor.
    pub fn exact_div(&self, d: &RatPoly) -> Option<RatPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        self.assert_same_ring(d);
        let (dexp, dc) = d.terms.iter().next_back().unwrap();
        let mut rem = self.terms.clone();
        let mut quo = BTreeMap::new();
        while let Some((rexp, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let mut qexp = Vec::with_capacity(rexp.len());
            for (r, d) in rexp.iter().zip(dexp.iter()) {
                if r < d {
                    return None;
                }
                qexp.push(r - d);
            }
            let qc = &rc / dc;
            for (e, c) in &d.terms {
                let target: Vec<u32> = e.iter().zip(qexp.iter()).map(|(a, b)| a + b).collect();
                Self::add_term(&mut rem, target, -(&qc * c));
            }
            Self::add_term(&mut quo, qexp, qc);
        }
        Some(RatPoly {
            vars: self.vars.clone(),
            terms: quo,
        })
    }

    pub fn derivative(&self, name: &str) -> RatPoly {
        let i = self.var_index(name).expect("undeclared variable");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            Self::add_term(&mut terms, ne, c * Rat::from_integer(BigInt::from(e[i])));
        }
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let pows = self.power_tables(|i| point[i].clone(), Rat::one(), |a, b| a * b);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= &pows[i][k as usize];
                }
            }
            acc += term;
        }
        acc
    }

    fn power_tables<T: Clone>(
        &self,
        base: impl Fn(usize) -> T,
        one: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Vec<Vec<T>> {
        let mut max_exp = vec![0u32; self.vars.len()];
        for e in self.terms.keys() {
            for (m, &x) in max_exp.iter_mut().zip(e.iter()) {
                *m = (*m).max(x);
            }
        }
        max_exp
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let mut tbl = vec![one.clone()];
                if m > 0 {
                    let b = base(i);
                    for k in 1..=m as usize {
                        let next = mul(&tbl[k - 1], &b);
                        tbl.push(next);
                    }
                }
                tbl
            })
            .collect()
    }

    /// Substitute `value` (same universe) for the variable `name`.
    pub fn substitute(&self, name: &str, value: &RatPoly) -> RatPoly {
        self.assert_same_ring(value);
        let i = self.var_index(name).expect("undeclared variable");
        let max_e = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut pows = vec![RatPoly::one(&self.var_refs())];
        for k in 1..=max_e as usize {
            let next = &pows[k - 1] * value;
            pows.push(next);
        }
        let mut acc = RatPoly::zero(&self.var_refs());
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            let mut mono = BTreeMap::new();
            mono.insert(rest, c.clone());
            let mono = RatPoly {
                vars: self.vars.clone(),
                terms: mono,
            };
            acc = &acc + &(&mono * &pows[k as usize]);
        }
        acc
    }

    /// Reinterpret in a new universe by mapping every variable to an image
    /// polynomial over the new universe.
    pub fn compose(&self, new_vars: &[&str], images: &[RatPoly]) -> RatPoly {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        for im in images {
            assert_eq!(
                im.vars,
                new_vars.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "image not in target universe"
            );
        }
        let one = RatPoly::one(new_vars);
        let pows = self.power_tables(|i| images[i].clone(), one.clone(), |a, b| a * b);
        let mut acc = RatPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut term = RatPoly::constant(new_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &pows[i][k as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    /// Translate so that `point` moves to the origin (`v := v + c` per
    /// coordinate).
    pub fn shift_to_origin(&self, point: &[Rat]) -> RatPoly {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = self.clone();
        let names: Vec<String> = self.vars.clone();
        for (i, c) in point.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let shift = &RatPoly::var(&acc.var_refs(), &names[i])
                + &RatPoly::constant(&acc.var_refs(), c.clone());
            acc = acc.substitute(&names[i], &shift);
        }
        acc
    }

    /// Order of vanishing at a rational point (minimum total degree after
    /// translating the point to the origin).
    pub fn ord_at_point(&self, point: &[Rat]) -> Order {
        if self.is_zero() {
            return Order::Infinite;
        }
        let shifted = self.shift_to_origin(point);
        Order::Finite(shifted.terms.keys().map(|e| e.iter().sum()).min().unwrap())
    }

    /// Order of vanishing along a divisor: the largest `k` with `d^k | self`.
    ///
    /// Panics on a constant divisor.
    pub fn ord_along(&self, d: &RatPoly) -> Order {
        assert!(!d.is_constant(), "order along a constant divisor");
        if self.is_zero() {
            return Order::Infinite;
        }
        let mut k = 0u32;
        let mut cur = self.clone();
        while let Some(next) = cur.exact_div(d) {
            k += 1;
            cur = next;
        }
        Order::Finite(k)
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Rat {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rat::zero();
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// Canonical associate: content one, lexicographic leading coefficient
    /// positive. The zero polynomial normalizes to itself.
    pub fn normalized(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc_lex().is_negative() {
            c = -c;
        }
        self.map_coeffs(|x| x / &c)
    }
}

impl PartialEq for RatPoly {
    /// Name-keyed semantic equality: unused declared variables do not count.
    fn eq(&self, other: &Self) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let key = |vars: &[String], e: &[u32]| -> Vec<(String, u32)> {
            vars.iter()
                .zip(e.iter())
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| (v.clone(), x))
                .collect()
        };
        self.terms.iter().all(|(e, c)| {
            let k = key(&self.vars, e);
            other
                .terms
                .iter()
                .any(|(e2, c2)| key(&other.vars, e2) == k && c2 == c)
        })
    }
}

impl Eq for RatPoly {}

impl std::ops::Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        self.assert_same_ring(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            RatPoly::add_term(&mut terms, e.clone(), c.clone());
        }
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl std::ops::Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self.assert_same_ring(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            RatPoly::add_term(&mut terms, e.clone(), -c.clone());
        }
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl std::ops::Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        self.assert_same_ring(rhs);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exp: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                RatPoly::add_term(&mut terms, exp, c1 * c2);
            }
        }
        RatPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl std::ops::Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        self.map_coeffs(|c| -c.clone())
    }
}

impl fmt::Display for RatPoly {
    /// Grammar-compatible rendering, terms in descending lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
