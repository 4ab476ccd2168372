//! The Mœglin–Waldspurger algorithm.
//!
//! Within one `rho`-block the algorithm repeatedly extracts a leading
//! segment `M(β)` and shrinks the chain of segments it was read from. The
//! leading segments, collected until nothing is left, form the dual
//! multi-segment `β̃`.
//!
//! Traces keep stable slot positions: slot `j` is the `j`-th segment of the
//! canonical labeling of the initial block, a shrunk segment keeps its slot
//! and an emptied one becomes `None`. Index sets `K^i` are therefore subsets
//! of the initial labeling `J`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::multiseg::MultiSegment;
use crate::segment::{precedes, CuspidalLabel, Segment};

/// Which slot to pick when several identical segments qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest canonical index (the canonical trace).
    #[default]
    First,
    /// Largest canonical index.
    Last,
}

/// One pass of the algorithm: `M(β^i) = [m^i, e^i]` and the slots it shrinks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MWStep {
    pub leading: Segment,
    /// `k_l` for `l = e, e-1, ..., m`.
    pub chosen: Vec<usize>,
}

impl MWStep {
    /// The slot whose segment ends at `l`, if `l` lies in the leading segment.
    pub fn index_for_end(&self, l: HalfInt) -> Option<usize> {
        if !self.leading.covers(l) {
            return None;
        }
        let offset = (self.leading.end().twice() - l.twice()) / 2;
        self.chosen.get(offset as usize).copied()
    }
}

fn live(slots: &[Option<Segment>]) -> impl Iterator<Item = (usize, &Segment)> {
    slots.iter().enumerate().filter_map(|(j, s)| s.as_ref().map(|s| (j, s)))
}

/// Max-base pick among candidates, honoring the tie-break.
fn pick<'a>(
    cands: impl Iterator<Item = (usize, &'a Segment)>,
    tie: TieBreak,
) -> Option<(usize, &'a Segment)> {
    let mut best: Option<(usize, &Segment)> = None;
    for (j, s) in cands {
        best = match best {
            None => Some((j, s)),
            Some((_, bs)) if s.base() > bs.base() => Some((j, s)),
            Some((_, bs)) if s.base() == bs.base() && tie == TieBreak::Last => Some((j, s)),
            keep => keep,
        };
    }
    best
}

pub(crate) fn leading_in_slots(slots: &[Option<Segment>], tie: TieBreak) -> Option<MWStep> {
    let e = live(slots).map(|(_, s)| s.end()).max()?;
    let (mut k, mut top) = pick(live(slots).filter(|(_, s)| s.end() == e), tie)?;
    let mut chosen = vec![k];
    loop {
        let m = top.end();
        let next = pick(
            live(slots).filter(|(_, s)| s.end() == m.offset(-1) && precedes(s, top)),
            tie,
        );
        match next {
            Some((j, s)) => {
                k = j;
                top = s;
                chosen.push(k);
            }
            None => break,
        }
    }
    let rho = top.rho().clone();
    let m = top.end();
    Some(MWStep {
        leading: Segment::new_unchecked(rho, m, e),
        chosen,
    })
}

/// Check that `step` satisfies the characterization of `M(β)` on `slots`:
/// maximal end, maximal base at the top, maximal preceding base at each
/// lower end, and no further extension below `m`.
fn check_step(slots: &[Option<Segment>], step: &MWStep) -> Result<()> {
    let fail = |msg: String| Err(Error::Validation(msg));
    let lead = &step.leading;
    if step.chosen.len() != lead.len() {
        return fail(format!(
            "step lists {} slots for a leading segment of length {}",
            step.chosen.len(),
            lead.len()
        ));
    }
    let mut seen = BTreeSet::new();
    let mut segs = Vec::with_capacity(step.chosen.len());
    for (offset, &k) in step.chosen.iter().enumerate() {
        let Some(Some(s)) = slots.get(k) else {
            return fail(format!("slot {k} is out of range or empty"));
        };
        if !seen.insert(k) {
            return fail(format!("slot {k} chosen twice"));
        }
        if s.rho() != lead.rho() || s.end() != lead.end().offset(-(offset as i64)) {
            return fail(format!("slot {k} holds {s:?}, which does not end at the expected value"));
        }
        segs.push(s);
    }
    let e = live(slots).map(|(_, s)| s.end()).max();
    if e != Some(lead.end()) {
        return fail(format!("leading end {} is not the largest end", lead.end()));
    }
    let max_base = |end: HalfInt, below: Option<HalfInt>| {
        live(slots)
            .filter(|(_, s)| s.end() == end && below.is_none_or(|b| s.base() < b))
            .map(|(_, s)| s.base())
            .max()
    };
    if max_base(lead.end(), None) != Some(segs[0].base()) {
        return fail("top segment does not have the largest base".into());
    }
    for w in segs.windows(2) {
        if max_base(w[1].end(), Some(w[0].base())) != Some(w[1].base()) {
            return fail(format!("{:?} is not the maximal predecessor of {:?}", w[1], w[0]));
        }
    }
    let bottom = segs[segs.len() - 1];
    if max_base(bottom.end().offset(-1), Some(bottom.base())).is_some() {
        return fail(format!("chain can be extended below {:?}", bottom));
    }
    Ok(())
}

fn apply_step(slots: &mut [Option<Segment>], step: &MWStep) {
    for &k in &step.chosen {
        slots[k] = slots[k].as_ref().and_then(Segment::shrink);
    }
}

fn collect(slots: &[Option<Segment>]) -> MultiSegment {
    MultiSegment::new(slots.iter().flatten().cloned())
}

fn block_slots(ms: &MultiSegment, rho: &CuspidalLabel) -> Vec<Option<Segment>> {
    ms.block(rho).into_vec().into_iter().map(Some).collect()
}

/// `M(α)` for the `rho`-block, with slots indexed by the block's canonical labeling.
pub fn mw_leading(ms: &MultiSegment, rho: &CuspidalLabel) -> Result<MWStep> {
    leading_in_slots(&block_slots(ms, rho), TieBreak::First)
        .ok_or_else(|| Error::Domain(format!("the {rho}-block is empty")))
}

/// `α ∖ M(α)`: shrink the chosen segments and drop the empty ones.
///
/// `step` must satisfy the characterization of `M(α)` on the block; any
/// tie-break among identical segments is accepted.
pub fn mw_strip(ms: &MultiSegment, step: &MWStep) -> Result<MultiSegment> {
    let rho = step.leading.rho();
    let mut slots = block_slots(ms, rho);
    check_step(&slots, step)?;
    apply_step(&mut slots, step);
    let others = MultiSegment::new(ms.iter().filter(|s| s.rho() != rho).cloned());
    Ok(others + collect(&slots))
}

fn dual_block(mut slots: Vec<Option<Segment>>) -> Vec<Segment> {
    let mut out = Vec::new();
    while let Some(step) = leading_in_slots(&slots, TieBreak::First) {
        apply_step(&mut slots, &step);
        out.push(step.leading);
    }
    out
}

/// The dual multi-segment `α̃`, computed blockwise.
pub fn mw_dual(ms: &MultiSegment) -> MultiSegment {
    let mut out = Vec::with_capacity(ms.len());
    for block in ms.decompose_by_rho().into_values() {
        out.extend(dual_block(block.into_vec().into_iter().map(Some).collect()));
    }
    MultiSegment::new(out)
}

/// Full derivation record `β^0, β^1, ...` for one `rho`-block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MWTrace {
    rho: CuspidalLabel,
    initial: MultiSegment,
    steps: Vec<MWStep>,
    residues: Vec<MultiSegment>,
    states: Vec<Vec<Option<Segment>>>,
}

/// Canonical trace of the `rho`-block of `ms`.
pub fn mw_trace(ms: &MultiSegment, rho: &CuspidalLabel) -> MWTrace {
    mw_trace_with(ms, rho, TieBreak::First)
}

pub fn mw_trace_with(ms: &MultiSegment, rho: &CuspidalLabel, tie: TieBreak) -> MWTrace {
    let initial = ms.block(rho);
    let mut slots = block_slots(ms, rho);
    let mut steps = Vec::new();
    let mut residues = vec![initial.clone()];
    let mut states = vec![slots.clone()];
    while let Some(step) = leading_in_slots(&slots, tie) {
        apply_step(&mut slots, &step);
        steps.push(step);
        residues.push(collect(&slots));
        states.push(slots.clone());
    }
    MWTrace {
        rho: rho.clone(),
        initial,
        steps,
        residues,
        states,
    }
}

impl MWTrace {
    pub fn rho(&self) -> &CuspidalLabel {
        &self.rho
    }

    /// The `rho`-block `β^0`.
    pub fn initial(&self) -> &MultiSegment {
        &self.initial
    }

    /// Canonical labeling `J` of the initial block.
    pub fn labeling(&self) -> &[Segment] {
        self.initial.segments()
    }

    pub fn steps(&self) -> &[MWStep] {
        &self.steps
    }

    /// `β^0, ..., β^N`, the last one empty.
    pub fn residues(&self) -> &[MultiSegment] {
        &self.residues
    }

    /// Slot contents of `β^i`.
    pub fn state(&self, i: usize) -> &[Option<Segment>] {
        &self.states[i]
    }

    pub fn leading(&self) -> Vec<Segment> {
        self.steps.iter().map(|s| s.leading.clone()).collect()
    }

    pub fn dual(&self) -> MultiSegment {
        MultiSegment::new(self.leading())
    }

    /// `e(β)`, the largest end value.
    pub fn top_end(&self) -> Option<HalfInt> {
        self.initial.iter().map(Segment::end).max()
    }

    /// `t(β)`: number of segments ending at `e(β)`.
    pub fn t(&self) -> usize {
        match self.top_end() {
            Some(e) => self.initial.iter().filter(|s| s.end() == e).count(),
            None => 0,
        }
    }

    /// `K^i` as sets of slots.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.steps.iter().map(|s| s.chosen.clone()).collect()
    }

    /// Every step satisfies the characterization of `M(β^i)` on `β^i`.
    pub fn check_characterization(&self) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            check_step(&self.states[i], step)
                .map_err(|err| Error::Validation(format!("step {i}: {err}")))?;
        }
        Ok(())
    }

    /// The structural facts about the first `t(β)` passes: they all read a
    /// leading segment ending at `e`, the bases `m^i` are non-decreasing,
    /// the chosen segments are nested across passes, the `K^i` are mutually
    /// disjoint, and each chosen slot is shrunk exactly once.
    pub fn check_index_lemma(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        let t = self.t();
        let Some(e) = self.top_end() else {
            return Ok(());
        };
        if self.steps.len() < t {
            return fail(format!("only {} steps for t = {t}", self.steps.len()));
        }
        let first = &self.steps[..t];
        for (i, step) in first.iter().enumerate() {
            if step.leading.end() != e {
                return fail(format!("step {i} ends at {}, expected {e}", step.leading.end()));
            }
        }
        for (i, w) in first.windows(2).enumerate() {
            if w[0].leading.base() > w[1].leading.base() {
                return fail(format!("m^{i} > m^{}", i + 1));
            }
        }
        for (i, step) in first.iter().enumerate() {
            let mut l = step.leading.base();
            while l <= e {
                for r in 0..i {
                    let (Some(k0), Some(k1)) =
                        (first[r].index_for_end(l), first[r + 1].index_for_end(l))
                    else {
                        return fail(format!("k_{l} undefined at pass {r} or {}", r + 1));
                    };
                    let (Some(s0), Some(s1)) = (&self.states[r][k0], &self.states[r + 1][k1])
                    else {
                        return fail(format!("empty slot in nesting chain at end {l}"));
                    };
                    if !s1.contains(s0) {
                        return fail(format!("nesting fails at l = {l}, passes {r}, {}", r + 1));
                    }
                }
                l = l.offset(1);
            }
        }
        let mut seen = BTreeSet::new();
        for (i, step) in first.iter().enumerate() {
            for &k in &step.chosen {
                if !seen.insert(k) {
                    return fail(format!("slot {k} appears again in K^{i}"));
                }
            }
        }
        for (i, step) in first.iter().enumerate() {
            for &k in &step.chosen {
                let orig = Some(self.labeling()[k].clone());
                let shrunk = self.labeling()[k].shrink();
                for r in 0..=t {
                    let expected = if r <= i { &orig } else { &shrunk };
                    if &self.states[r][k] != expected {
                        return fail(format!("slot {k} (chosen at pass {i}) has wrong state at pass {r}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per step: index, leading segment, chosen slots, residue.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = self.t();
        let e = self.top_end().map_or_else(|| "-".to_string(), |e| e.to_string());
        let _ = writeln!(out, "# rho={} initial={} e={e} t={t}", self.rho, self.initial);
        for (i, step) in self.steps.iter().enumerate() {
            let ks: Vec<String> = step.chosen.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "{i} {} {{{}}} {}",
                step.leading,
                ks.join(","),
                self.residues[i + 1]
            );
        }
        let _ = writeln!(out, "# dual={}", self.dual());
        out
    }

    pub fn to_json_value(&self) -> impl Serialize + '_ {
        #[derive(Serialize)]
        struct StepJson<'a> {
            index: usize,
            leading: &'a Segment,
            chosen: &'a [usize],
            residue: &'a MultiSegment,
        }
        #[derive(Serialize)]
        struct TraceJson<'a> {
            rho: &'a CuspidalLabel,
            initial: &'a MultiSegment,
            labeling: &'a [Segment],
            top_end: Option<HalfInt>,
            t: usize,
            steps: Vec<StepJson<'a>>,
            dual: MultiSegment,
        }
        TraceJson {
            rho: &self.rho,
            initial: &self.initial,
            labeling: self.labeling(),
            top_end: self.top_end(),
            t: self.t(),
            steps: self
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| StepJson {
                    index: i,
                    leading: &s.leading,
                    chosen: &s.chosen,
                    residue: &self.residues[i + 1],
                })
                .collect(),
            dual: self.dual(),
        }
    }
}

/// Check a family `K^0, K^1, ...` against the labeled-index-set
/// characterization on the canonical labeling of the `rho`-block.
pub fn validate_index_sets(
    ms: &MultiSegment,
    rho: &CuspidalLabel,
    ksets: &[Vec<usize>],
) -> Result<bool> {
    validate_index_sets_labeled(ms.block(rho).segments(), ksets)
}

/// As [`validate_index_sets`] for an arbitrary labeling `J` of one block.
///
/// The family must be mutually disjoint, in range, and of length at most
/// `t(β)`. A shorter family validates the corresponding prefix.
pub fn validate_index_sets_labeled(labeling: &[Segment], ksets: &[Vec<usize>]) -> Result<bool> {
    let Some(e) = labeling.iter().map(Segment::end).max() else {
        return if ksets.is_empty() {
            Ok(true)
        } else {
            Err(Error::Validation("index sets given for an empty block".into()))
        };
    };
    if let Some(rho) = labeling.first().map(Segment::rho) {
        if labeling.iter().any(|s| s.rho() != rho) {
            return Err(Error::Validation("labeling mixes several labels".into()));
        }
    }
    let t = labeling.iter().filter(|s| s.end() == e).count();
    if ksets.len() > t {
        return Err(Error::Validation(format!(
            "{} index sets given, but t = {t}",
            ksets.len()
        )));
    }
    let mut used = vec![false; labeling.len()];
    for (i, k) in ksets.iter().enumerate() {
        for &j in k {
            if j >= labeling.len() {
                return Err(Error::Validation(format!("index {j} in K^{i} is out of range")));
            }
            if used[j] {
                return Err(Error::Validation(format!("index {j} in K^{i} overlaps an earlier set")));
            }
            used[j] = true;
        }
    }

    let mut avail = vec![true; labeling.len()];
    for k in ksets {
        // label by end value, descending from e
        let mut chain: Vec<usize> = k.clone();
        chain.sort_by(|&x, &y| labeling[y].end().cmp(&labeling[x].end()));
        if chain.is_empty() {
            return Ok(false);
        }
        for (offset, &j) in chain.iter().enumerate() {
            if labeling[j].end() != e.offset(-(offset as i64)) {
                return Ok(false);
            }
        }
        let max_base = |end: HalfInt, below: Option<HalfInt>| {
            labeling
                .iter()
                .enumerate()
                .filter(|&(j, s)| {
                    avail[j] && s.end() == end && below.is_none_or(|b| s.base() < b)
                })
                .map(|(_, s)| s.base())
                .max()
        };
        if max_base(e, None) != Some(labeling[chain[0]].base()) {
            return Ok(false);
        }
        for w in chain.windows(2) {
            let (upper, lower) = (&labeling[w[0]], &labeling[w[1]]);
            if max_base(lower.end(), Some(upper.base())) != Some(lower.base()) {
                return Ok(false);
            }
        }
        let bottom = &labeling[chain[chain.len() - 1]];
        if max_base(bottom.end().offset(-1), Some(bottom.base())).is_some() {
            return Ok(false);
        }
        for &j in k {
            avail[j] = false;
        }
    }
    Ok(true)
}

/// Residues obtained by shrinking the slots of each `K^i` in turn.
pub fn strip_along(labeling: &[Segment], ksets: &[Vec<usize>]) -> Vec<MultiSegment> {
    let mut slots: Vec<Option<Segment>> = labeling.iter().cloned().map(Some).collect();
    let mut out = vec![collect(&slots)];
    for k in ksets {
        for &j in k {
            slots[j] = slots[j].as_ref().and_then(Segment::shrink);
        }
        out.push(collect(&slots));
    }
    out
}
