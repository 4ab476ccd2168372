//! Arthur parameters `⊕ ρ⊗Sym^d⊗Sym^a` and their multi-segments.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::involution::mw_dual;
use crate::multiseg::MultiSegment;
use crate::segment::{CuspidalLabel, Segment};
use crate::text::parse_blocks;

mod verify;

pub use verify::{
    parameters_up_to, verify_bounds, verify_main_lemma, verify_prop_main, LemmaReport,
    PropFailure, PropReport,
};

/// One summand `ρ⊗Sym^d⊗Sym^a`; contributes `(d+1)(a+1)` support points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Summand {
    pub rho: CuspidalLabel,
    pub d: u32,
    pub a: u32,
}

impl Summand {
    pub fn new(rho: CuspidalLabel, d: u32, a: u32) -> Self {
        Summand { rho, d, a }
    }

    pub fn weight(&self) -> usize {
        (self.d as usize + 1) * (self.a as usize + 1)
    }

    pub fn delta(&self) -> MultiSegment {
        staircase(&self.rho, self.d, self.a)
    }
}

/// A multiset of summands, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ArthurParameter {
    summands: Vec<Summand>,
}

impl ArthurParameter {
    pub fn new(summands: impl IntoIterator<Item = Summand>) -> Self {
        let mut summands: Vec<Summand> = summands.into_iter().collect();
        summands.sort();
        ArthurParameter { summands }
    }

    /// Single-label shorthand from `(d, a)` pairs.
    pub fn single(rho: &CuspidalLabel, pairs: &[(u32, u32)]) -> Self {
        ArthurParameter::new(pairs.iter().map(|&(d, a)| Summand::new(rho.clone(), d, a)))
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Total support size `sum (d_i+1)(a_i+1)`.
    pub fn weight(&self) -> usize {
        self.summands.iter().map(Summand::weight).sum()
    }

    pub fn labels(&self) -> Vec<CuspidalLabel> {
        let mut v: Vec<CuspidalLabel> = self.summands.iter().map(|s| s.rho.clone()).collect();
        v.dedup();
        v
    }

    /// Remove one copy of a summand.
    pub fn without(&self, summand: &Summand) -> Option<ArthurParameter> {
        let pos = self.summands.iter().position(|s| s == summand)?;
        let mut summands = self.summands.clone();
        summands.remove(pos);
        Some(ArthurParameter { summands })
    }
}

impl fmt::Display for ArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("{}");
        }
        let mut prev: Option<&CuspidalLabel> = None;
        for s in &self.summands {
            match prev {
                Some(r) if *r == s.rho => f.write_str("+")?,
                Some(_) => write!(f, "; {}:", s.rho)?,
                None => write!(f, "{}:", s.rho)?,
            }
            write!(f, "({},{})", s.d, s.a)?;
            prev = Some(&s.rho);
        }
        Ok(())
    }
}

impl fmt::Debug for ArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArthurParameter({self})")
    }
}

impl Serialize for ArthurParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `rho:(d,a)+(d,a); rho2:(d,a)`, or `{}` for the empty parameter.
impl FromStr for ArthurParameter {
    type Err = Error;
    fn from_str(src: &str) -> Result<Self> {
        let blocks = parse_blocks(src, |cur, rho| {
            let mut out = Vec::new();
            if cur.eat('{') {
                cur.expect('}')?;
                return Ok(out);
            }
            loop {
                cur.expect('(')?;
                let at = cur.pos();
                let d = cur.integer()?;
                cur.expect(',')?;
                let at_a = cur.pos();
                let a = cur.integer()?;
                cur.expect(')')?;
                let d = u32::try_from(d).map_err(|_| cur.error_at(at, "d must be a non-negative integer"))?;
                let a = u32::try_from(a).map_err(|_| cur.error_at(at_a, "a must be a non-negative integer"))?;
                out.push(Summand::new(rho.clone(), d, a));
                if !cur.eat('+') {
                    break;
                }
            }
            Ok(out)
        })?;
        Ok(ArthurParameter::new(blocks.into_iter().flatten()))
    }
}

fn staircase(rho: &CuspidalLabel, d: u32, a: u32) -> MultiSegment {
    let (d, a) = (d as i64, a as i64);
    MultiSegment::new((0..=a).map(|k| {
        Segment::new_unchecked(
            rho.clone(),
            HalfInt::from_twice(a - d - 2 * k),
            HalfInt::from_twice(a + d - 2 * k),
        )
    }))
}

/// `δ_{d,a}`: `a+1` segments of length `d+1`, ends `(a+d)/2` down to `(d-a)/2`.
pub fn delta_da(rho: &CuspidalLabel, d: i64, a: i64) -> Result<MultiSegment> {
    if d < 0 || a < 0 {
        return Err(Error::Domain(format!("delta_{{d,a}} needs d, a >= 0, got ({d},{a})")));
    }
    let d = u32::try_from(d).map_err(|_| Error::Domain(format!("d = {d} is too large")))?;
    let a = u32::try_from(a).map_err(|_| Error::Domain(format!("a = {a} is too large")))?;
    Ok(staircase(rho, d, a))
}

/// `δ_ψ`, the multiset sum of `δ_{d_i,a_i}`.
pub fn delta_psi(psi: &ArthurParameter) -> MultiSegment {
    MultiSegment::new(psi.summands().iter().flat_map(|s| s.delta().into_vec()))
}

/// Swap the two exponents of every summand.
pub fn dual_parameter(psi: &ArthurParameter) -> ArthurParameter {
    ArthurParameter::new(
        psi.summands()
            .iter()
            .map(|s| Summand::new(s.rho.clone(), s.a, s.d)),
    )
}

/// `a+d = max(a_i+d_i)` over one label and `d = min{d_i : a_i+d_i = a+d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalPair {
    pub sum: u32,
    pub d: u32,
}

impl ExtremalPair {
    pub fn a(&self) -> u32 {
        self.sum - self.d
    }

    /// `(a+d)/2`, the largest exponent of the support.
    pub fn top(&self) -> HalfInt {
        HalfInt::from_twice(self.sum as i64)
    }

    /// `(-a-d)/2`, the smallest exponent of the support.
    pub fn bottom(&self) -> HalfInt {
        HalfInt::from_twice(-(self.sum as i64))
    }

    /// `(a-d)/2`, the base of the top segment of `δ_{d,a}`.
    pub fn top_base(&self) -> HalfInt {
        HalfInt::from_twice(self.a() as i64 - self.d as i64)
    }

    pub fn summand(&self, rho: &CuspidalLabel) -> Summand {
        Summand::new(rho.clone(), self.d, self.a())
    }
}

pub fn extremal_pair(psi: &ArthurParameter, rho: &CuspidalLabel) -> Result<ExtremalPair> {
    let block: Vec<&Summand> = psi.summands().iter().filter(|s| &s.rho == rho).collect();
    let sum = block
        .iter()
        .map(|s| s.a + s.d)
        .max()
        .ok_or_else(|| Error::Domain(format!("parameter has no {rho} summand")))?;
    let d = block
        .iter()
        .filter(|s| s.a + s.d == sum)
        .map(|s| s.d)
        .min()
        .expect("the maximum is attained");
    Ok(ExtremalPair { sum, d })
}

/// Recover `ψ` with `δ_ψ = ms`, if `ms` is of Arthur type.
///
/// Per label: the segment with the largest end, and among those the largest
/// base, is the top of the extremal `δ_{d,a}`; remove that staircase and repeat.
pub fn detect_arthur(ms: &MultiSegment) -> Option<ArthurParameter> {
    let mut summands = Vec::new();
    for (rho, mut block) in ms.decompose_by_rho() {
        while !block.is_empty() {
            // canonical order puts max end, then max base, first
            let top = &block.segments()[0];
            let (b, e) = (top.base(), top.end());
            let a2 = e.twice() + b.twice();
            if a2 < 0 {
                return None;
            }
            let a = (a2 / 2) as u32;
            let d = (top.len() - 1) as u32;
            let delta = staircase(&rho, d, a);
            block = block.remove_all(&delta)?;
            summands.push(Summand::new(rho.clone(), d, a));
        }
    }
    Some(ArthurParameter::new(summands))
}

/// Remove one copy of the extremal `δ_{d,a}` (at `rho`) from both `alpha` and `beta`.
pub fn reduce_pair(
    alpha: &MultiSegment,
    beta: &MultiSegment,
    rho: &CuspidalLabel,
) -> Result<(MultiSegment, MultiSegment)> {
    let psi = detect_arthur(alpha)
        .ok_or_else(|| Error::Precondition(format!("alpha = {alpha} is not of Arthur type")))?;
    let pair = extremal_pair(&psi, rho).map_err(|e| Error::Precondition(e.to_string()))?;
    let delta = pair.summand(rho).delta();
    let alpha_minus = alpha.remove_all(&delta).expect("delta_psi contains its extremal summand");
    let beta_minus = beta.remove_all(&delta).ok_or_else(|| {
        Error::Precondition(format!(
            "beta = {beta} does not contain a copy of delta_{{{},{}}} = {delta}",
            pair.d,
            pair.a()
        ))
    })?;
    Ok((alpha_minus, beta_minus))
}

/// `δ_{b,e,s} = {[b,e],[b-1,e-1],...,[b-s,e-s]}`.
pub fn delta_bes(rho: &CuspidalLabel, b: HalfInt, e: HalfInt, s: usize) -> Result<MultiSegment> {
    (0..=s as i64)
        .map(|k| Segment::new(rho.clone(), b.offset(-k), e.offset(-k)))
        .collect()
}

/// `{[e-s,e],[e-s-1,e-1],...,[b-s,b]}`, the dual of `δ_{b,e,s}`.
pub fn delta_bes_dual(rho: &CuspidalLabel, b: HalfInt, e: HalfInt, s: usize) -> Result<MultiSegment> {
    let top = Segment::new(rho.clone(), b, e)?;
    (0..top.len() as i64)
        .map(|k| Segment::new(rho.clone(), e.offset(-(s as i64) - k), e.offset(-k)))
        .collect()
}

/// Check `β̃ = (β⁻)~ + δ̃_{b,e,s}` on the `rho`-block, where `β⁻` drops one
/// copy of `δ_{b,e,s}`. Requires every segment `[x,y]` of the block to have
/// `x ≥ b-s` and `y ≤ e`.
pub fn strip_identity_check(
    beta: &MultiSegment,
    rho: &CuspidalLabel,
    b: HalfInt,
    e: HalfInt,
    s: usize,
) -> Result<bool> {
    let delta = delta_bes(rho, b, e, s)?;
    let block = beta.block(rho);
    let rest = block.remove_all(&delta).ok_or_else(|| {
        Error::Precondition(format!("beta does not contain a copy of delta_{{{b},{e},{s}}} = {delta}"))
    })?;
    let floor = b.offset(-(s as i64));
    for seg in &block {
        if seg.base() < floor {
            return Err(Error::Precondition(format!(
                "assumption (i) fails: {seg} has base below b - s = {floor}"
            )));
        }
        if seg.end() > e {
            return Err(Error::Precondition(format!(
                "assumption (ii) fails: {seg} has end above e = {e}"
            )));
        }
    }
    let lhs = mw_dual(&block);
    let rhs = mw_dual(&rest) + delta_bes_dual(rho, b, e, s)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> CuspidalLabel {
        CuspidalLabel::default()
    }

    fn ms(pairs: &[(i64, i64)]) -> MultiSegment {
        MultiSegment::ints(&rho(), pairs)
    }

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn hseg(b2: i64, e2: i64) -> Segment {
        Segment::new(rho(), h(b2), h(e2)).unwrap()
    }

    #[test]
    fn delta_da_examples() {
        assert_eq!(delta_da(&rho(), 0, 2).unwrap(), ms(&[(1, 1), (0, 0), (-1, -1)]));
        assert_eq!(delta_da(&rho(), 2, 0).unwrap(), ms(&[(-1, 1)]));
        assert_eq!(delta_da(&rho(), 1, 1).unwrap(), ms(&[(0, 1), (-1, 0)]));
        assert!(matches!(delta_da(&rho(), -1, 0), Err(Error::Domain(_))));
        assert!(matches!(delta_da(&rho(), 0, -2), Err(Error::Domain(_))));
    }

    #[test]
    fn delta_da_shape() {
        for d in 0..5 {
            for a in 0..5 {
                let m = delta_da(&rho(), d, a).unwrap();
                assert_eq!(m.len(), a as usize + 1);
                assert!(m.iter().all(|s| s.len() == d as usize + 1));
                assert_eq!(m.segments()[0].end(), h(a + d));
                assert_eq!(m.segments()[a as usize].end(), h(d - a));
            }
        }
    }

    #[test]
    fn delta_psi_examples() {
        let psi = ArthurParameter::single(&rho(), &[(1, 1)]);
        assert_eq!(delta_psi(&psi), ms(&[(0, 1), (-1, 0)]));
        let psi = ArthurParameter::single(&rho(), &[(1, 0), (0, 1)]);
        assert_eq!(
            delta_psi(&psi),
            MultiSegment::new([hseg(-1, 1), hseg(1, 1), hseg(-1, -1)])
        );
        assert_eq!(delta_psi(&ArthurParameter::default()), MultiSegment::empty());
    }

    #[test]
    fn dual_parameter_examples() {
        let p = ArthurParameter::single(&rho(), &[(2, 0)]);
        assert_eq!(dual_parameter(&p), ArthurParameter::single(&rho(), &[(0, 2)]));
        let q = ArthurParameter::single(&rho(), &[(1, 1)]);
        assert_eq!(dual_parameter(&q), q);
        let r = ArthurParameter::single(&rho(), &[(3, 0), (1, 2), (0, 0)]);
        assert_eq!(dual_parameter(&dual_parameter(&r)), r);
    }

    #[test]
    fn extremal_pair_examples() {
        let p = ArthurParameter::single(&rho(), &[(1, 2), (3, 0)]);
        assert_eq!(extremal_pair(&p, &rho()).unwrap(), ExtremalPair { sum: 3, d: 1 });
        let p = ArthurParameter::single(&rho(), &[(2, 0)]);
        assert_eq!(extremal_pair(&p, &rho()).unwrap(), ExtremalPair { sum: 2, d: 2 });
        let p = ArthurParameter::single(&rho(), &[(0, 4), (1, 1)]);
        assert_eq!(extremal_pair(&p, &rho()).unwrap(), ExtremalPair { sum: 4, d: 0 });
        let err = extremal_pair(&p, &CuspidalLabel::new("sigma")).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn detect_examples() {
        assert_eq!(
            detect_arthur(&ms(&[(0, 1), (-1, 0)])),
            Some(ArthurParameter::single(&rho(), &[(1, 1)]))
        );
        assert_eq!(detect_arthur(&ms(&[(0, 1)])), None);
        assert_eq!(detect_arthur(&MultiSegment::empty()), Some(ArthurParameter::default()));
        // repeated summand
        let psi = ArthurParameter::single(&rho(), &[(1, 1), (1, 1), (0, 0)]);
        assert_eq!(detect_arthur(&delta_psi(&psi)), Some(psi));
        // top segment centred below zero
        assert_eq!(detect_arthur(&ms(&[(-2, -1)])), None);
    }

    #[test]
    fn reduce_examples() {
        let a = delta_da(&rho(), 1, 1).unwrap();
        assert_eq!(
            reduce_pair(&a, &a, &rho()).unwrap(),
            (MultiSegment::empty(), MultiSegment::empty())
        );
        let psi = ArthurParameter::single(&rho(), &[(1, 2), (3, 0)]);
        let alpha = delta_psi(&psi);
        let (am, bm) = reduce_pair(&alpha, &alpha, &rho()).unwrap();
        assert_eq!(am, delta_da(&rho(), 3, 0).unwrap());
        assert_eq!(bm, am);
        let err = reduce_pair(&alpha, &ms(&[(-1, 2), (-1, 2)]), &rho()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err = reduce_pair(&ms(&[(0, 1)]), &alpha, &rho()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn strip_identity_examples() {
        let d = delta_da(&rho(), 2, 3).unwrap();
        // δ_{d,a} = δ_{(a-d)/2,(a+d)/2,a}
        assert_eq!(delta_bes(&rho(), h(1), h(5), 3).unwrap(), d);
        assert_eq!(delta_bes_dual(&rho(), h(1), h(5), 3).unwrap(), delta_da(&rho(), 3, 2).unwrap());
        assert!(strip_identity_check(&d, &rho(), h(1), h(5), 3).unwrap());

        let lone = delta_bes(&rho(), h(0), h(4), 2).unwrap();
        assert!(strip_identity_check(&lone, &rho(), h(0), h(4), 2).unwrap());

        let err = strip_identity_check(&ms(&[(0, 2)]), &rho(), h(2), h(4), 0).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let with_low = ms(&[(0, 2), (-3, 0)]);
        let err = strip_identity_check(&with_low, &rho(), h(0), h(4), 0).unwrap_err();
        assert!(err.to_string().contains("assumption (i)"), "{err}");
        let with_high = ms(&[(0, 2), (0, 3)]);
        let err = strip_identity_check(&with_high, &rho(), h(0), h(4), 0).unwrap_err();
        assert!(err.to_string().contains("assumption (ii)"), "{err}");
    }

    #[test]
    fn parameter_text() {
        let p: ArthurParameter = "rho:(1,0)+(0,1); sigma:(2,2)".parse().unwrap();
        assert_eq!(p.weight(), 2 + 2 + 9);
        assert_eq!(p.to_string(), "rho:(0,1)+(1,0); sigma:(2,2)");
        assert_eq!(p.to_string().parse::<ArthurParameter>().unwrap(), p);
        assert_eq!("{}".parse::<ArthurParameter>().unwrap(), ArthurParameter::default());
        assert_eq!("(1,1)".parse::<ArthurParameter>().unwrap(), ArthurParameter::single(&rho(), &[(1, 1)]));
        assert!("rho:(-1,0)".parse::<ArthurParameter>().is_err());
        assert!("rho:(1,0".parse::<ArthurParameter>().is_err());
    }
}
