//! Mordell–Weil data of a rational elliptic surface read off its fiber
//! configuration: Shioda–Tate rank, torsion from the extremal table, the
//! flopping-curve census, and counting bounds for terminal models.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::kodaira::FiberType;
use crate::surface::FiberConfiguration;

/// No rational elliptic surface carries more pairwise-disjoint sections
/// than this; quoted in the bound rationale.
pub const DISJOINT_SECTION_CAP: u32 = 240;

/// One row of the extremal-configuration table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalEntry {
    /// Geometric fibers, sorted; one entry per fiber.
    pub fibers: Vec<FiberType>,
    /// Torsion group label, e.g. `Z/4 x Z/2`; `0` for the trivial group.
    pub torsion: String,
    pub torsion_order: u32,
    pub source: String,
}

const TABLE_TEXT: &str = include_str!("../data/extremal_configurations.txt");
static TABLE: OnceLock<Vec<ExtremalEntry>> = OnceLock::new();

/// The embedded table, parsed once and self-checked: every row must have
/// Σ (components − 1) = 8, i.e. Mordell–Weil rank 0 under Shioda–Tate.
pub fn extremal_table() -> &'static [ExtremalEntry] {
    TABLE.get_or_init(|| {
        let table = parse_table(TABLE_TEXT).expect("embedded extremal table is well-formed");
        for entry in &table {
            entry
                .self_check()
                .expect("embedded extremal table row is self-consistent");
        }
        table
    })
}

impl ExtremalEntry {
    fn self_check(&self) -> Result<(), String> {
        let mut drop = 0u32;
        for ty in &self.fibers {
            let m = crate::kodaira::component_data(*ty)
                .0
                .ok_or_else(|| format!("non-Kodaira fiber {ty} in extremal row"))?;
            drop += m - 1;
        }
        if drop != 8 {
            return Err(format!(
                "extremal row {:?} has Σ(components − 1) = {drop}, want 8",
                self.fibers
            ));
        }
        match torsion_order(&self.torsion) {
            Some(n) if n == self.torsion_order => Ok(()),
            Some(n) => Err(format!(
                "torsion label {} has order {n}, row claims {}",
                self.torsion, self.torsion_order
            )),
            None => Err(format!("unreadable torsion label {}", self.torsion)),
        }
    }
}

/// Order of a torsion group label: `0` → 1, `Z/n` → n, products joined
/// with ` x ` multiply.
fn torsion_order(label: &str) -> Option<u32> {
    let mut order = 1u32;
    for part in label.split(" x ") {
        let part = part.trim();
        if part == "0" {
            continue;
        }
        order *= part.strip_prefix("Z/")?.parse::<u32>().ok()?;
    }
    Some(order)
}

fn parse_table(text: &str) -> Result<Vec<ExtremalEntry>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fibers: Option<Vec<FiberType>> = None;
        let mut torsion: Option<String> = None;
        let mut source: Option<String> = None;
        for field in line.split(';') {
            let (key, value) = field
                .split_once(":=")
                .ok_or_else(|| format!("line {}: field without `:=`", lineno + 1))?;
            let value = value.trim();
            match key.trim() {
                "config" => {
                    let mut list = Vec::new();
                    for tag in value.split(',') {
                        list.push(FiberType::parse_tag(tag).ok_or_else(|| {
                            format!("line {}: unknown fiber tag `{}`", lineno + 1, tag.trim())
                        })?);
                    }
                    list.sort();
                    fibers = Some(list);
                }
                "torsion" => torsion = Some(value.to_string()),
                "source" => source = Some(value.to_string()),
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        let torsion = torsion.ok_or_else(|| format!("line {}: missing torsion", lineno + 1))?;
        out.push(ExtremalEntry {
            fibers: fibers.ok_or_else(|| format!("line {}: missing config", lineno + 1))?,
            torsion_order: torsion_order(&torsion)
                .ok_or_else(|| format!("line {}: unreadable torsion `{torsion}`", lineno + 1))?,
            torsion,
            source: source.ok_or_else(|| format!("line {}: missing source", lineno + 1))?,
        });
    }
    Ok(out)
}

/// Re-parse and re-check the embedded table; used by the self-test.
pub fn verify_extremal_table() -> Result<usize, String> {
    let table = parse_table(TABLE_TEXT)?;
    for entry in &table {
        entry.self_check()?;
    }
    Ok(table.len())
}

/// Find the extremal row matching a configuration's geometric fibers.
pub fn extremal_lookup(config: &FiberConfiguration) -> Option<&'static ExtremalEntry> {
    let key = config.geometric_fiber_types();
    extremal_table().iter().find(|e| e.fibers == key)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum MwError {
    #[error("not a rational elliptic surface configuration: {0}")]
    NotRational(String),
}

/// Shioda–Tate: rank = 8 − Σ (components − 1) over geometric fibers.
/// Requires total Δ degree 12 and all fibers of Kodaira type.
pub fn shioda_tate_rank(config: &FiberConfiguration) -> Result<u32, MwError> {
    if config.total_delta_degree != 12 {
        return Err(MwError::NotRational(format!(
            "total discriminant degree is {}, want 12",
            config.total_delta_degree
        )));
    }
    let mut drop = 0u32;
    for place in &config.places {
        let m = place.fiber.components.ok_or_else(|| {
            MwError::NotRational(format!(
                "non-Kodaira fiber with orders {} present",
                place.orders
            ))
        })?;
        drop += (m - 1) * place.points;
    }
    if drop > 8 {
        return Err(MwError::NotRational(format!(
            "Σ(components − 1) = {drop} exceeds the Néron–Severi budget 8"
        )));
    }
    Ok(8 - drop)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionInfo {
    Known {
        structure: String,
        order: u32,
        source: String,
    },
    Unknown {
        note: String,
    },
}

/// Torsion subgroup: read off the extremal table when the rank is 0;
/// otherwise reported unknown (it is generically trivial).
pub fn torsion_lookup(config: &FiberConfiguration, rank: u32) -> TorsionInfo {
    if rank > 0 {
        return TorsionInfo::Unknown {
            note: format!(
                "rank {rank} > 0: torsion is not read off the extremal table \
                 and is generically trivial"
            ),
        };
    }
    match extremal_lookup(config) {
        Some(e) => TorsionInfo::Known {
            structure: e.torsion.clone(),
            order: e.torsion_order,
            source: e.source.clone(),
        },
        None => TorsionInfo::Unknown {
            note: "rank 0 but the fiber configuration is not in the extremal table".to_string(),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionCount {
    Finite(u32),
    Infinite,
    Unknown,
}

impl fmt::Display for SectionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionCount::Finite(n) => write!(f, "{n}"),
            SectionCount::Infinite => write!(f, "infinite"),
            SectionCount::Unknown => write!(f, "unknown"),
        }
    }
}

/// Census of curves a flop could act on: sections of the surface plus
/// vertical fiber components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloppingCensus {
    pub sections: SectionCount,
    /// Σ components × points over the singular fibers.
    pub fiber_components: u32,
    /// sections + fiber_components when the section count is finite.
    pub total: Option<u32>,
}

pub fn flopping_census(
    config: &FiberConfiguration,
    rank: u32,
    torsion: &TorsionInfo,
) -> FloppingCensus {
    let fiber_components: u32 = config
        .places
        .iter()
        .map(|p| p.fiber.components.expect("Kodaira fibers only") * p.points)
        .sum();
    let sections = if rank > 0 {
        SectionCount::Infinite
    } else {
        match torsion {
            TorsionInfo::Known { order, .. } => SectionCount::Finite(*order),
            TorsionInfo::Unknown { .. } => SectionCount::Unknown,
        }
    };
    let total = match sections {
        SectionCount::Finite(n) => Some(n + fiber_components),
        _ => None,
    };
    FloppingCensus {
        sections,
        fiber_components,
        total,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopDichotomy {
    FiniteCandidates,
    InfiniteCandidates,
}

/// The section-count dichotomy, with a one-line rationale.
pub fn flop_dichotomy(rank: u32) -> (FlopDichotomy, String) {
    if rank == 0 {
        (
            FlopDichotomy::FiniteCandidates,
            format!(
                "Mordell-Weil rank 0: the section group is finite, so only \
                 finitely many flopping-curve candidates arise (at most \
                 {DISJOINT_SECTION_CAP} pairwise-disjoint sections fit on a \
                 rational elliptic surface)"
            ),
        )
    } else {
        (
            FlopDichotomy::InfiniteCandidates,
            format!(
                "Mordell-Weil rank {rank} >= 1: infinitely many sections \
                 yield an infinite family of flopping-curve candidates"
            ),
        )
    }
}

/// Everything Mordell–Weil for one surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MordellWeilReport {
    pub rank: u32,
    pub torsion: TorsionInfo,
    pub census: FloppingCensus,
    pub dichotomy: FlopDichotomy,
    pub rationale: String,
}

pub fn analyze(config: &FiberConfiguration) -> Result<MordellWeilReport, MwError> {
    let rank = shioda_tate_rank(config)?;
    let torsion = torsion_lookup(config, rank);
    let census = flopping_census(config, rank, &torsion);
    let (dichotomy, rationale) = flop_dichotomy(rank);
    Ok(MordellWeilReport {
        rank,
        torsion,
        census,
        dichotomy,
        rationale,
    })
}

/// Bounds on the number of terminal models over the resolved base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCountBounds {
    /// Any flop at all gives at least two terminal models.
    pub lower_any: BigUint,
    /// A single generic surface admits at least 9 partial resolutions.
    pub lower_generic: BigUint,
    /// Independent choices across all surfaces: 9^(number of surfaces).
    pub lower_product: BigUint,
    /// Σ over surfaces of C(census total, 9) · 2⁹, when every census is
    /// finite; `None` otherwise.
    pub upper_extremal: Option<BigUint>,
    pub notes: Vec<String>,
}

fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

pub fn model_count_bounds(censuses: &[FloppingCensus]) -> ModelCountBounds {
    let n = censuses.len() as u32;
    let nine = BigUint::from(9u32);
    let lower_product = nine.pow(n);
    let mut upper = Some(BigUint::zero());
    for c in censuses {
        match (upper.take(), c.total) {
            (Some(acc), Some(t)) => {
                upper = Some(acc + binomial(t, 9) * BigUint::from(512u32));
            }
            _ => {
                upper = None;
                break;
            }
        }
    }
    let mut notes = vec![format!(
        "upper bound counts choices of 9 of the censused curves with a \
         flop direction each (2^9); no rational elliptic surface has more \
         than {DISJOINT_SECTION_CAP} pairwise-disjoint sections"
    )];
    if let Some(u) = &upper {
        if lower_product > *u {
            notes.push(
                "the product lower bound and the census upper bound count \
                 differently assembled collections of flops and need not be \
                 comparable; both are reported verbatim"
                    .to_string(),
            );
        }
    } else {
        notes.push(
            "upper bound not applicable: at least one surface has an \
             infinite or unknown section count"
                .to_string(),
        );
    }
    ModelCountBounds {
        lower_any: BigUint::from(2u32),
        lower_generic: nine.clone(),
        lower_product,
        upper_extremal: upper,
        notes,
    }
}
