//! Symbolic toolkit for elliptic threefolds with isolated non-minimal
//! fibers: blow up the base at such a point, twist away the non-minimal
//! locus, and classify the elliptic surface that appears over the
//! exceptional curve — Kodaira fiber configuration, Mordell–Weil data,
//! flopping-curve census, and minimal-model count bounds.

pub mod kodaira;
pub mod mwflop;
pub mod poly;
pub mod report;
pub mod resolve;
pub mod selftest;
pub mod surface;
pub mod weierstrass;
