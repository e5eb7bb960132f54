use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bumped whenever a rule of [`KODAIRA_TABLE`] changes.
pub const KODAIRA_TABLE_VERSION: u32 = 1;

/// Singular fibre types of a minimal elliptic surface, plus `Smooth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "n")]
pub enum KodairaLabel {
    Smooth,
    I(u32),
    II,
    III,
    IV,
    I0Star,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaLabel {
    /// Euler number of the fibre, equal to the vanishing order of `Δ`.
    pub fn euler_number(&self) -> u32 {
        match *self {
            KodairaLabel::Smooth => 0,
            KodairaLabel::I(n) => n,
            KodairaLabel::II => 2,
            KodairaLabel::III => 3,
            KodairaLabel::IV => 4,
            KodairaLabel::I0Star => 6,
            KodairaLabel::IStar(n) => n + 6,
            KodairaLabel::IVStar => 8,
            KodairaLabel::IIIStar => 9,
            KodairaLabel::IIStar => 10,
        }
    }
}

impl fmt::Display for KodairaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaLabel::Smooth => write!(f, "smooth"),
            KodairaLabel::I(n) => write!(f, "I{n}"),
            KodairaLabel::II => write!(f, "II"),
            KodairaLabel::III => write!(f, "III"),
            KodairaLabel::IV => write!(f, "IV"),
            KodairaLabel::I0Star => write!(f, "I0*"),
            KodairaLabel::IStar(n) => write!(f, "I{n}*"),
            KodairaLabel::IVStar => write!(f, "IV*"),
            KodairaLabel::IIIStar => write!(f, "III*"),
            KodairaLabel::IIStar => write!(f, "II*"),
        }
    }
}

/// Constraint on a vanishing order; `None` orders (identically zero forms)
/// satisfy every lower bound and no equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Eq(u32),
    AtLeast(u32),
}

impl Bound {
    fn matches(&self, order: Option<u32>) -> bool {
        match (*self, order) {
            (Bound::Eq(k), Some(o)) => o == k,
            (Bound::Eq(_), None) => false,
            (Bound::AtLeast(k), Some(o)) => o >= k,
            (Bound::AtLeast(_), None) => true,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Eq(k) => write!(f, "={k}"),
            Bound::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// One row `(ord g₂, ord g₃, ord Δ) → label`.
#[derive(Clone, Copy, Debug)]
pub struct KodairaRule {
    pub label: &'static str,
    pub ord_g2: Bound,
    pub ord_g3: Bound,
    pub ord_delta: Bound,
}

const fn rule(label: &'static str, a: Bound, b: Bound, c: Bound) -> KodairaRule {
    KodairaRule { label, ord_g2: a, ord_g3: b, ord_delta: c }
}

/// Rules are tried in order; the first match wins. Non-minimal data
/// (`ord g₂ ≥ 4` and `ord g₃ ≥ 6`) is rejected before the table is consulted.
pub const KODAIRA_TABLE: [KodairaRule; 10] = [
    rule("smooth", Bound::AtLeast(0), Bound::AtLeast(0), Bound::Eq(0)),
    rule("I_n", Bound::Eq(0), Bound::Eq(0), Bound::AtLeast(1)),
    rule("II", Bound::AtLeast(1), Bound::Eq(1), Bound::Eq(2)),
    rule("III", Bound::Eq(1), Bound::AtLeast(2), Bound::Eq(3)),
    rule("IV", Bound::AtLeast(2), Bound::Eq(2), Bound::Eq(4)),
    rule("I0*", Bound::AtLeast(2), Bound::AtLeast(3), Bound::Eq(6)),
    rule("I_n*", Bound::Eq(2), Bound::Eq(3), Bound::AtLeast(7)),
    rule("IV*", Bound::AtLeast(3), Bound::Eq(4), Bound::Eq(8)),
    rule("III*", Bound::Eq(3), Bound::AtLeast(5), Bound::Eq(9)),
    rule("II*", Bound::AtLeast(4), Bound::Eq(5), Bound::Eq(10)),
];

/// Label for vanishing orders `(a, b, c)`; `None` stands for an identically
/// zero coefficient.
pub fn classify(a: Option<u32>, b: Option<u32>, c: u32) -> Result<KodairaLabel> {
    let big = |o: Option<u32>, k: u32| o.is_none_or(|v| v >= k);
    if c > 0 && big(a, 4) && big(b, 6) {
        return Err(Error::NonMinimal { a: a.unwrap_or(u32::MAX), b: b.unwrap_or(u32::MAX) });
    }
    let hit = KODAIRA_TABLE
        .iter()
        .find(|r| r.ord_g2.matches(a) && r.ord_g3.matches(b) && r.ord_delta.matches(Some(c)));
    let label = match hit.map(|r| r.label) {
        Some("smooth") => KodairaLabel::Smooth,
        Some("I_n") => KodairaLabel::I(c),
        Some("II") => KodairaLabel::II,
        Some("III") => KodairaLabel::III,
        Some("IV") => KodairaLabel::IV,
        Some("I0*") => KodairaLabel::I0Star,
        Some("I_n*") => KodairaLabel::IStar(c - 6),
        Some("IV*") => KodairaLabel::IVStar,
        Some("III*") => KodairaLabel::IIIStar,
        Some("II*") => KodairaLabel::IIStar,
        _ => {
            return Err(Error::UnclassifiedFiber { a: a.unwrap_or(u32::MAX), b: b.unwrap_or(u32::MAX), c });
        }
    };
    Ok(label)
}

/// The table as JSON, for audit.
pub fn kodaira_table_json() -> serde_json::Value {
    let rules: Vec<serde_json::Value> = KODAIRA_TABLE
        .iter()
        .map(|r| {
            serde_json::json!({
                "label": r.label,
                "ord_g2": r.ord_g2.to_string(),
                "ord_g3": r.ord_g3.to_string(),
                "ord_delta": r.ord_delta.to_string(),
            })
        })
        .collect();
    serde_json::json!({
        "version": KODAIRA_TABLE_VERSION,
        "non_minimal": {"ord_g2": ">=4", "ord_g3": ">=6"},
        "notes": "first matching rule wins; n = ord_delta for I_n and ord_delta - 6 for I_n*; a zero coefficient has infinite order",
        "rules": rules,
    })
}
