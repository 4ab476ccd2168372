//! Multi-segments and their supports.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::halfint::HalfInt;
use crate::segment::{CuspidalLabel, Segment};

/// A finite multiset of segments, stored as a canonically sorted list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiSegment {
    segments: Vec<Segment>,
}

impl MultiSegment {
    pub fn new(segments: impl IntoIterator<Item = Segment>) -> Self {
        let mut segments: Vec<Segment> = segments.into_iter().collect();
        segments.sort();
        MultiSegment { segments }
    }

    pub fn empty() -> Self {
        MultiSegment::default()
    }

    /// Integer segments under a single label; panics on invalid pairs.
    pub fn ints(rho: &CuspidalLabel, pairs: &[(i64, i64)]) -> Self {
        MultiSegment::new(
            pairs
                .iter()
                .map(|&(b, e)| Segment::int(rho, b, e).expect("valid integer segment")),
        )
    }

    /// The segments in canonical order. Position in this slice is the
    /// canonical index used by traces and index families.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Segment> {
        self.segments.iter()
    }

    /// Distinct labels, ascending.
    pub fn labels(&self) -> Vec<CuspidalLabel> {
        let mut out: Vec<CuspidalLabel> = Vec::new();
        for s in &self.segments {
            if out.last() != Some(s.rho()) {
                out.push(s.rho().clone());
            }
        }
        out
    }

    /// The `rho`-part `alpha_rho`.
    pub fn block(&self, rho: &CuspidalLabel) -> MultiSegment {
        MultiSegment {
            segments: self.segments.iter().filter(|s| s.rho() == rho).cloned().collect(),
        }
    }

    /// Partition by label.
    pub fn decompose_by_rho(&self) -> BTreeMap<CuspidalLabel, MultiSegment> {
        let mut out: BTreeMap<CuspidalLabel, MultiSegment> = BTreeMap::new();
        for s in &self.segments {
            out.entry(s.rho().clone()).or_default().segments.push(s.clone());
        }
        out
    }

    /// `sum of l(Δ)^2`; strictly increases under elementary operations.
    pub fn rank(&self) -> u64 {
        self.segments.iter().map(|s| (s.len() * s.len()) as u64).sum()
    }

    pub fn support(&self) -> Support {
        Support::from_points(
            self.segments
                .iter()
                .flat_map(|s| s.points().map(move |x| (s.rho().clone(), x))),
        )
    }

    /// Number of points of the support.
    pub fn degree(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn count(&self, seg: &Segment) -> usize {
        self.segments.iter().filter(|s| *s == seg).count()
    }

    /// Multiset inclusion `other ⊆ self`.
    pub fn contains_all(&self, other: &MultiSegment) -> bool {
        self.remove_all(other).is_some()
    }

    /// `self - other` as multisets, or `None` when `other ⊄ self`.
    pub fn remove_all(&self, other: &MultiSegment) -> Option<MultiSegment> {
        // both sorted: merge walk
        let mut out = Vec::with_capacity(self.segments.len());
        let mut rest = other.segments.iter().peekable();
        for s in &self.segments {
            match rest.peek() {
                Some(&o) if o == s => {
                    rest.next();
                }
                Some(&o) if o < s => return None,
                _ => out.push(s.clone()),
            }
        }
        rest.peek().is_none().then_some(MultiSegment { segments: out })
    }

    pub fn with(&self, seg: Segment) -> MultiSegment {
        let mut segments = self.segments.clone();
        let pos = segments.partition_point(|s| s <= &seg);
        segments.insert(pos, seg);
        MultiSegment { segments }
    }

    pub(crate) fn into_vec(self) -> Vec<Segment> {
        self.segments
    }
}

impl Add for MultiSegment {
    type Output = MultiSegment;
    fn add(self, rhs: MultiSegment) -> MultiSegment {
        let mut v = self.segments;
        v.extend(rhs.segments);
        MultiSegment::new(v)
    }
}

impl Add for &MultiSegment {
    type Output = MultiSegment;
    fn add(self, rhs: &MultiSegment) -> MultiSegment {
        self.clone() + rhs.clone()
    }
}

impl FromIterator<Segment> for MultiSegment {
    fn from_iter<I: IntoIterator<Item = Segment>>(iter: I) -> Self {
        MultiSegment::new(iter)
    }
}

impl<'a> IntoIterator for &'a MultiSegment {
    type Item = &'a Segment;
    type IntoIter = std::slice::Iter<'a, Segment>;
    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

impl fmt::Debug for MultiSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSegment({self})")
    }
}

impl Serialize for MultiSegment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Multiset of points `(rho, x)`, standing for `rho|.|^x`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Support {
    points: BTreeMap<(CuspidalLabel, HalfInt), usize>,
}

impl Support {
    pub fn from_points(points: impl IntoIterator<Item = (CuspidalLabel, HalfInt)>) -> Self {
        let mut map = BTreeMap::new();
        for p in points {
            *map.entry(p).or_insert(0) += 1;
        }
        Support { points: map }
    }

    pub fn multiplicity(&self, rho: &CuspidalLabel, x: HalfInt) -> usize {
        self.points.get(&(rho.clone(), x)).copied().unwrap_or(0)
    }

    /// Total number of points, with multiplicity.
    pub fn size(&self) -> usize {
        self.points.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct points with their multiplicities, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (&CuspidalLabel, HalfInt, usize)> + '_ {
        self.points.iter().map(|((r, x), &m)| (r, *x, m))
    }

    /// Split into integer-translation classes `(rho, parity)`, each with
    /// its ascending `(exponent, multiplicity)` list.
    pub fn classes(&self) -> BTreeMap<(CuspidalLabel, u8), Vec<(HalfInt, usize)>> {
        let mut out: BTreeMap<(CuspidalLabel, u8), Vec<(HalfInt, usize)>> = BTreeMap::new();
        for ((r, x), &m) in &self.points {
            out.entry((r.clone(), x.class())).or_default().push((*x, m));
        }
        out
    }

    pub fn max_exponent(&self, rho: &CuspidalLabel) -> Option<HalfInt> {
        self.points.keys().filter(|(r, _)| r == rho).map(|(_, x)| *x).max()
    }

    pub fn min_exponent(&self, rho: &CuspidalLabel) -> Option<HalfInt> {
        self.points.keys().filter(|(r, _)| r == rho).map(|(_, x)| *x).min()
    }

    /// Multiset inclusion `other ⊆ self`.
    pub fn contains_all(&self, other: &Support) -> bool {
        other
            .points
            .iter()
            .all(|(k, &m)| self.points.get(k).is_some_and(|&n| n >= m))
    }
}

impl Add for Support {
    type Output = Support;
    fn add(mut self, rhs: Support) -> Support {
        for (k, m) in rhs.points {
            *self.points.entry(k).or_insert(0) += m;
        }
        self
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("{}");
        }
        let mut first_block = true;
        let mut current: Option<&CuspidalLabel> = None;
        let mut first_point = true;
        for ((r, x), &m) in &self.points {
            if current != Some(r) {
                if current.is_some() {
                    f.write_str("}")?;
                }
                if !first_block {
                    f.write_str("; ")?;
                }
                write!(f, "{r}:{{")?;
                first_block = false;
                first_point = true;
                current = Some(r);
            }
            for _ in 0..m {
                if !first_point {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
                first_point = false;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Support({self})")
    }
}
