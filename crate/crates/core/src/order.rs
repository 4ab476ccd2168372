//! The partial order generated by elementary operations, enumeration of all
//! multi-segments with a given support, and the materialized poset.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::multiseg::{MultiSegment, Support};
use crate::segment::{linked, CuspidalLabel, Segment};

/// Default cap on support points per integer-translation class.
pub const DEFAULT_BOUND: usize = 12;

/// Limits and execution mode for enumeration-backed operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub bound: usize,
    pub parallel: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            bound: DEFAULT_BOUND,
            parallel: false,
        }
    }
}

impl EnumConfig {
    pub fn with_bound(bound: usize) -> Self {
        EnumConfig {
            bound,
            ..Self::default()
        }
    }
}

/// Replace the linked pair at positions `i < j` by union and intersection.
fn apply_operation(ms: &MultiSegment, i: usize, j: usize) -> Option<MultiSegment> {
    let segs = ms.segments();
    let (d1, d2) = (&segs[i], &segs[j]);
    if !linked(d1, d2) {
        return None;
    }
    let mut next: Vec<Segment> = Vec::with_capacity(segs.len());
    next.extend(
        segs.iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, s)| s.clone()),
    );
    next.push(d1.union(d2).expect("linked segments have a union"));
    if let Some(cap) = d1.intersection(d2) {
        next.push(cap);
    }
    Some(MultiSegment::new(next))
}

/// All multi-segments one genuine elementary operation below `ms`.
pub fn elementary_successors(ms: &MultiSegment) -> BTreeSet<MultiSegment> {
    let segs = ms.segments();
    let mut out = BTreeSet::new();
    for i in 0..segs.len() {
        if i > 0 && segs[i] == segs[i - 1] {
            continue;
        }
        for j in i + 1..segs.len() {
            if j > i + 1 && segs[j] == segs[j - 1] {
                continue;
            }
            if let Some(next) = apply_operation(ms, i, j) {
                out.insert(next);
            }
        }
    }
    out
}

/// `a ≥ b`: `b` is reachable from `a` by elementary operations.
pub fn ge(a: &MultiSegment, b: &MultiSegment) -> bool {
    ge_witness(a, b).is_some()
}

/// A chain `a = γ_0, γ_1, ..., γ_n = b` of single operations, if `a ≥ b`.
pub fn ge_witness(a: &MultiSegment, b: &MultiSegment) -> Option<Vec<MultiSegment>> {
    if a == b {
        return Some(vec![a.clone()]);
    }
    if a.support() != b.support() {
        return None;
    }
    let (target_rank, target_len) = (b.rank(), b.len());
    let mut parent: HashMap<MultiSegment, MultiSegment> = HashMap::new();
    let mut queue = VecDeque::from([a.clone()]);
    let mut seen: HashSet<MultiSegment> = HashSet::from([a.clone()]);
    while let Some(x) = queue.pop_front() {
        for y in elementary_successors(&x) {
            if seen.contains(&y) {
                continue;
            }
            if &y == b {
                let mut path = vec![y, x.clone()];
                let mut cur = x;
                while let Some(p) = parent.get(&cur) {
                    path.push(p.clone());
                    cur = p.clone();
                }
                path.reverse();
                return Some(path);
            }
            seen.insert(y.clone());
            if y.rank() < target_rank && y.len() >= target_len {
                parent.insert(y.clone(), x.clone());
                queue.push_back(y);
            }
        }
    }
    None
}

/// `{ b : a ≥ b }`.
pub fn downset(a: &MultiSegment) -> BTreeSet<MultiSegment> {
    let mut seen = BTreeSet::from([a.clone()]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(x) = queue.pop_front() {
        for y in elementary_successors(&x) {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Tilings of a dense run of counts by intervals, as `(start, end)` pairs
/// listed with non-decreasing start and, for equal starts, non-increasing end.
fn tilings(counts: &mut [usize], from: usize, last: Option<(usize, usize)>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    let Some(p) = (from..counts.len()).find(|&p| counts[p] > 0) else {
        out.push(cur.clone());
        return;
    };
    let mut q = p;
    while q < counts.len() && counts[q] > 0 {
        if let Some((lp, lq)) = last {
            if lp == p && q > lq {
                break;
            }
        }
        for c in &mut counts[p..=q] {
            *c -= 1;
        }
        cur.push((p, q));
        tilings(counts, p, Some((p, q)), cur, out);
        cur.pop();
        for c in &mut counts[p..=q] {
            *c += 1;
        }
        q += 1;
    }
}

fn class_tilings(rho: &CuspidalLabel, points: &[(HalfInt, usize)]) -> Vec<Vec<Segment>> {
    let lo = points[0].0;
    let hi = points[points.len() - 1].0;
    let width = ((hi.twice() - lo.twice()) / 2 + 1) as usize;
    let mut counts = vec![0usize; width];
    for &(x, m) in points {
        counts[((x.twice() - lo.twice()) / 2) as usize] = m;
    }
    let mut raw = Vec::new();
    tilings(&mut counts, 0, None, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|t| {
            t.into_iter()
                .map(|(p, q)| {
                    Segment::new_unchecked(rho.clone(), lo.offset(p as i64), lo.offset(q as i64))
                })
                .collect()
        })
        .collect()
}

/// Every multi-segment with support `s`, each once, in canonical order.
pub fn enumerate_support(s: &Support, config: &EnumConfig) -> Result<Vec<MultiSegment>> {
    let classes = s.classes();
    for points in classes.values() {
        let n: usize = points.iter().map(|&(_, m)| m).sum();
        if n > config.bound {
            return Err(Error::Resource {
                bound: config.bound,
                points: n,
            });
        }
    }
    let mut acc: Vec<Vec<Segment>> = vec![Vec::new()];
    for ((rho, _), points) in &classes {
        let parts = class_tilings(rho, points);
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for prefix in &acc {
            for part in &parts {
                let mut v = prefix.clone();
                v.extend(part.iter().cloned());
                next.push(v);
            }
        }
        acc = next;
    }
    let mut out: Vec<MultiSegment> = acc.into_iter().map(MultiSegment::new).collect();
    out.sort();
    Ok(out)
}

/// A multi-segment with its rank `sum l(Δ)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub ms: MultiSegment,
    pub rank: u64,
}

/// All multi-segments of one support, with cover relations.
#[derive(Clone, Debug)]
pub struct Poset {
    support: Support,
    nodes: Vec<PosetNode>,
    covers: Vec<(usize, usize)>,
    index: HashMap<MultiSegment, usize>,
    below: Vec<FixedBitSet>,
}

/// Materialize the poset of multi-segments with support `s`.
pub fn build_poset(s: &Support, config: &EnumConfig) -> Result<Poset> {
    let all = enumerate_support(s, config)?;
    let index: HashMap<MultiSegment, usize> =
        all.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let succ_of = |m: &MultiSegment| -> Vec<usize> {
        elementary_successors(m).iter().map(|y| index[y]).collect()
    };
    let succ: Vec<Vec<usize>> = if config.parallel {
        all.par_iter().map(succ_of).collect()
    } else {
        all.iter().map(succ_of).collect()
    };
    let nodes: Vec<PosetNode> = all
        .into_iter()
        .map(|ms| PosetNode {
            rank: ms.rank(),
            ms,
        })
        .collect();

    let n = nodes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(nodes[u].rank));
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for &u in &order {
        let mut acc = FixedBitSet::with_capacity(n);
        for &v in &succ[u] {
            debug_assert!(nodes[v].rank > nodes[u].rank);
            acc.insert(v);
            acc.union_with(&below[v]);
        }
        below[u] = acc;
    }
    let mut covers = Vec::new();
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            let implied = vs.iter().any(|&w| w != v && below[w].contains(v));
            if !implied {
                covers.push((u, v));
            }
        }
    }
    covers.sort_unstable();
    Ok(Poset {
        support: s.clone(),
        nodes,
        covers,
        index,
        below,
    })
}

impl Poset {
    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn nodes(&self) -> &[PosetNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(parent, child)` pairs; the child is one operation below the parent
    /// and no other node lies strictly between them.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn index_of(&self, ms: &MultiSegment) -> Option<usize> {
        self.index.get(ms).copied()
    }

    /// Reachability between node indices (reflexive).
    pub fn ge_index(&self, u: usize, v: usize) -> bool {
        u == v || self.below[u].contains(v)
    }

    /// `a ≥ b` read off the materialized relation; `None` if either is not a node.
    pub fn ge(&self, a: &MultiSegment, b: &MultiSegment) -> Option<bool> {
        Some(self.ge_index(self.index_of(a)?, self.index_of(b)?))
    }

    /// Indices of nodes reachable from `u`, including `u`.
    pub fn downset_indices(&self, u: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.below[u].ones().collect();
        v.push(u);
        v.sort_unstable();
        v
    }

    /// Nodes with nothing above them.
    pub fn maximal(&self) -> Vec<usize> {
        let mut has_parent = vec![false; self.len()];
        for &(_, c) in &self.covers {
            has_parent[c] = true;
        }
        (0..self.len()).filter(|&u| !has_parent[u]).collect()
    }

    /// Graphviz document; nodes for which `mark` holds are drawn doubled.
    pub fn to_dot(&self, mark: impl Fn(&MultiSegment) -> bool) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let extra = if mark(&node.ms) { ", peripheries=2" } else { "" };
            let _ = writeln!(out, "  n{i} [label=\"{}\"{extra}];", node.ms);
        }
        for &(u, v) in &self.covers {
            let _ = writeln!(out, "  n{u} -> n{v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_value(&self, mark: impl Fn(&MultiSegment) -> bool) -> impl Serialize + '_ {
        #[derive(Serialize)]
        struct NodeJson<'a> {
            index: usize,
            ms: &'a MultiSegment,
            rank: u64,
            marked: bool,
        }
        #[derive(Serialize)]
        struct PosetJson<'a> {
            support: String,
            nodes: Vec<NodeJson<'a>>,
            covers: &'a [(usize, usize)],
        }
        PosetJson {
            support: self.support.to_string(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(index, n)| NodeJson {
                    index,
                    ms: &n.ms,
                    rank: n.rank,
                    marked: mark(&n.ms),
                })
                .collect(),
            covers: &self.covers,
        }
    }
}
