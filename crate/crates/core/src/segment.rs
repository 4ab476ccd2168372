//! Segments `[b,e]_rho` and the elementary predicates on them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Label of a unitary cuspidal `rho`. Only identity matters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspidalLabel(Arc<str>);

impl CuspidalLabel {
    /// Label used when text input omits one.
    pub const DEFAULT: &'static str = "rho";

    pub fn new(name: &str) -> Self {
        CuspidalLabel(Arc::from(name.trim()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for CuspidalLabel {
    fn default() -> Self {
        CuspidalLabel::new(Self::DEFAULT)
    }
}

impl From<&str> for CuspidalLabel {
    fn from(s: &str) -> Self {
        CuspidalLabel::new(s)
    }
}

impl fmt::Display for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for CuspidalLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

/// The segment `[b,e]_rho`: exponents `b, b+1, ..., e`.
///
/// Ordering is the canonical multiset order: label ascending, then end
/// descending, then base descending.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    rho: CuspidalLabel,
    b: HalfInt,
    e: HalfInt,
}

impl Segment {
    /// Build `[b,e]_rho`; `e - b` must be a non-negative integer.
    pub fn new(rho: CuspidalLabel, b: HalfInt, e: HalfInt) -> Result<Self> {
        if !b.same_class(e) {
            return Err(Error::Constraint(format!(
                "segment [{b},{e}]: e - b is not an integer"
            )));
        }
        if e < b {
            return Err(Error::Constraint(format!("segment [{b},{e}]: e < b")));
        }
        Ok(Segment { rho, b, e })
    }

    /// Integer-endpoint shorthand, mostly for tests and examples.
    pub fn int(rho: &CuspidalLabel, b: i64, e: i64) -> Result<Self> {
        Segment::new(rho.clone(), HalfInt::from_int(b), HalfInt::from_int(e))
    }

    pub(crate) fn new_unchecked(rho: CuspidalLabel, b: HalfInt, e: HalfInt) -> Self {
        debug_assert!(b.same_class(e) && b <= e);
        Segment { rho, b, e }
    }

    pub fn rho(&self) -> &CuspidalLabel {
        &self.rho
    }

    pub fn base(&self) -> HalfInt {
        self.b
    }

    pub fn end(&self) -> HalfInt {
        self.e
    }

    /// `l = e - b + 1`, never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        ((self.e.twice() - self.b.twice()) / 2 + 1) as usize
    }

    /// Whether `x` is one of the exponents of this segment.
    pub fn covers(&self, x: HalfInt) -> bool {
        x.same_class(self.b) && self.b <= x && x <= self.e
    }

    /// The exponents `b, b+1, ..., e`.
    pub fn points(&self) -> impl Iterator<Item = HalfInt> + '_ {
        (0..self.len() as i64).map(move |k| self.b.offset(k))
    }

    /// Set containment `self ⊇ other`.
    pub fn contains(&self, other: &Segment) -> bool {
        self.rho == other.rho
            && self.b.same_class(other.b)
            && self.b <= other.b
            && other.e <= self.e
    }

    /// Set union when it is again a segment.
    pub fn union(&self, other: &Segment) -> Option<Segment> {
        if self.rho != other.rho || !self.b.same_class(other.b) {
            return None;
        }
        if self.b.max(other.b) > self.e.min(other.e).offset(1) {
            return None;
        }
        Some(Segment::new_unchecked(
            self.rho.clone(),
            self.b.min(other.b),
            self.e.max(other.e),
        ))
    }

    /// Set intersection; `None` when empty.
    pub fn intersection(&self, other: &Segment) -> Option<Segment> {
        if self.rho != other.rho || !self.b.same_class(other.b) {
            return None;
        }
        let b = self.b.max(other.b);
        let e = self.e.min(other.e);
        (b <= e).then(|| Segment::new_unchecked(self.rho.clone(), b, e))
    }

    /// `Δ⁻`: drop the top exponent. `None` for a singleton.
    pub fn shrink(&self) -> Option<Segment> {
        (self.b != self.e).then(|| Segment::new_unchecked(self.rho.clone(), self.b, self.e.offset(-1)))
    }

    /// Same exponents under another label.
    pub fn relabel(&self, rho: CuspidalLabel) -> Segment {
        Segment { rho, ..self.clone() }
    }
}

/// The union is a segment and neither contains the other.
pub fn linked(d1: &Segment, d2: &Segment) -> bool {
    d1.union(d2).is_some() && !d1.contains(d2) && !d2.contains(d1)
}

/// `d1` precedes `d2`: linked, with strictly smaller base and end.
pub fn precedes(d1: &Segment, d2: &Segment) -> bool {
    linked(d1, d2) && d1.b < d2.b && d1.e < d2.e
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rho
            .cmp(&other.rho)
            .then_with(|| other.e.cmp(&self.e))
            .then_with(|| other.b.cmp(&self.b))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.b, self.e)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]_{}", self.b, self.e, self.rho)
    }
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
