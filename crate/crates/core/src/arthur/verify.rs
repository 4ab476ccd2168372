//! Exhaustive checks of the main lemma and its supporting statements over
//! all multi-segments sharing a support with an Arthur-type `α`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{delta_psi, detect_arthur, extremal_pair, ArthurParameter, Summand};
use crate::error::{Error, Result};
use crate::involution::{mw_dual, mw_trace};
use crate::multiseg::MultiSegment;
use crate::order::{build_poset, ge, EnumConfig};
use crate::segment::CuspidalLabel;

/// Every `(d,a)`-multiset over `rho` with total weight `sum (d_i+1)(a_i+1) ≤ max_weight`,
/// the empty parameter included.
pub fn parameters_up_to(rho: &CuspidalLabel, max_weight: usize) -> Vec<ArthurParameter> {
    let mut pairs = Vec::new();
    for d in 0..max_weight as u32 {
        for a in 0..max_weight as u32 {
            if ((d + 1) * (a + 1)) as usize <= max_weight {
                pairs.push((d, a));
            }
        }
    }
    fn rec(
        pairs: &[(u32, u32)],
        from: usize,
        left: usize,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        out.push(cur.clone());
        for i in from..pairs.len() {
            let (d, a) = pairs[i];
            let w = ((d + 1) * (a + 1)) as usize;
            if w <= left {
                cur.push(pairs[i]);
                rec(pairs, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(&pairs, 0, max_weight, &mut Vec::new(), &mut raw);
    let mut out: Vec<ArthurParameter> = raw.iter().map(|p| ArthurParameter::single(rho, p)).collect();
    out.sort();
    out
}

/// Outcome of checking the main lemma for one `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub alpha: MultiSegment,
    pub parameter: ArthurParameter,
    /// Multi-segments with `supp = supp(α)` that were examined.
    pub candidates_checked: usize,
    /// Those with `β ≥ α` and `β̃ ≥ α̃` (always includes `α` itself). Here
    /// `β ≥ α` means `β` is reachable from `α`, i.e. `ge(α, β)`.
    pub qualifying: usize,
    /// Qualifying `β ≠ α`, sorted canonically.
    pub violations: Vec<MultiSegment>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.holds() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict} psi={} alpha={}", self.parameter, self.alpha);
        let _ = writeln!(
            out,
            "candidates={} qualifying={} violations={}",
            self.candidates_checked,
            self.qualifying,
            self.violations.len()
        );
        for v in &self.violations {
            let _ = writeln!(out, "violation {v}");
        }
        out
    }
}

fn require_arthur(alpha: &MultiSegment) -> Result<ArthurParameter> {
    detect_arthur(alpha)
        .ok_or_else(|| Error::Precondition(format!("alpha = {alpha} is not of Arthur type")))
}

/// All `β` reachable from `α` whose dual is reachable from `α̃`, plus the
/// number of candidates examined.
fn qualifying(alpha: &MultiSegment, config: &EnumConfig) -> Result<(usize, Vec<MultiSegment>)> {
    let poset = build_poset(&alpha.support(), config)?;
    let alpha_dual = mw_dual(alpha);
    let (ai, di) = match (poset.index_of(alpha), poset.index_of(&alpha_dual)) {
        (Some(a), Some(d)) => (a, d),
        _ => return Err(Error::Validation("alpha or its dual is missing from its own support class".into())),
    };
    let check = |u: usize| -> Result<Option<MultiSegment>> {
        if !poset.ge_index(ai, u) {
            return Ok(None);
        }
        let beta = &poset.nodes()[u].ms;
        let du = poset
            .index_of(&mw_dual(beta))
            .ok_or_else(|| Error::Validation(format!("dual of {beta} left its support class")))?;
        Ok(poset.ge_index(di, du).then(|| beta.clone()))
    };
    let found: Vec<Option<MultiSegment>> = if config.parallel {
        (0..poset.len()).into_par_iter().map(check).collect::<Result<_>>()?
    } else {
        (0..poset.len()).map(check).collect::<Result<_>>()?
    };
    Ok((poset.len(), found.into_iter().flatten().collect()))
}

/// If `β ≥ α` and `β̃ ≥ α̃` then `β = α`, checked over every `β` with the support of `α`.
pub fn verify_main_lemma(alpha: &MultiSegment, config: &EnumConfig) -> Result<LemmaReport> {
    let parameter = require_arthur(alpha)?;
    let (candidates_checked, found) = qualifying(alpha, config)?;
    let qualifying = found.len();
    let violations = found.into_iter().filter(|b| b != alpha).collect();
    Ok(LemmaReport {
        alpha: alpha.clone(),
        parameter,
        candidates_checked,
        qualifying,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropFailure {
    pub beta: MultiSegment,
    pub rho: CuspidalLabel,
    pub reason: String,
}

/// Outcome of checking the extremal-summand reduction for one `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropReport {
    pub alpha: MultiSegment,
    pub parameter: ArthurParameter,
    pub candidates_checked: usize,
    pub qualifying: usize,
    pub failures: Vec<PropFailure>,
}

impl PropReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_reduction(
    alpha: &MultiSegment,
    psi: &ArthurParameter,
    beta: &MultiSegment,
    rho: &CuspidalLabel,
) -> std::result::Result<(), String> {
    let pair = extremal_pair(psi, rho).map_err(|e| e.to_string())?;
    let summand: Summand = pair.summand(rho);
    let delta = summand.delta();
    let beta_minus = beta
        .remove_all(&delta)
        .ok_or_else(|| format!("beta lacks a copy of delta_{{{},{}}}", pair.d, pair.a()))?;
    let alpha_minus = alpha
        .remove_all(&delta)
        .ok_or_else(|| "alpha lacks its extremal summand".to_string())?;
    let psi_minus = psi
        .without(&summand)
        .ok_or_else(|| "extremal summand missing from psi".to_string())?;
    if delta_psi(&psi_minus) != alpha_minus {
        return Err("alpha minus delta is not delta of psi minus the summand".into());
    }
    if !ge(&alpha_minus, &beta_minus) {
        return Err("reduced pair loses beta >= alpha".into());
    }
    if !ge(&mw_dual(&alpha_minus), &mw_dual(&beta_minus)) {
        return Err("reduced pair loses the dual inequality".into());
    }
    Ok(())
}

/// For every qualifying `β` and every label of `α`: `β` contains the extremal
/// `δ_{d,a}`, and removing it from both sides keeps both inequalities.
pub fn verify_prop_main(alpha: &MultiSegment, config: &EnumConfig) -> Result<PropReport> {
    let parameter = require_arthur(alpha)?;
    let (candidates_checked, found) = qualifying(alpha, config)?;
    let mut failures = Vec::new();
    for beta in &found {
        for rho in parameter.labels() {
            if let Err(reason) = check_reduction(alpha, &parameter, beta, &rho) {
                failures.push(PropFailure {
                    beta: beta.clone(),
                    rho,
                    reason,
                });
            }
        }
    }
    Ok(PropReport {
        alpha: alpha.clone(),
        parameter,
        candidates_checked,
        qualifying: found.len(),
        failures,
    })
}

/// Bounds on every residue `β^i` of the trace of `β`: bases stay at or above
/// `(-a-d)/2`, ends at or below `(a+d)/2`, and a segment reaching `(a+d)/2`
/// has never been shrunk and has base at most `(a-d)/2`.
pub fn verify_bounds(beta: &MultiSegment, alpha: &MultiSegment) -> Result<bool> {
    let psi = require_arthur(alpha)?;
    if !ge(alpha, beta) {
        return Err(Error::Precondition(format!("{beta} >= {alpha} does not hold")));
    }
    if !ge(&mw_dual(alpha), &mw_dual(beta)) {
        return Err(Error::Precondition("the dual inequality does not hold".into()));
    }
    for rho in psi.labels() {
        let pair = extremal_pair(&psi, &rho)?;
        let trace = mw_trace(beta, &rho);
        for i in 0..trace.residues().len() {
            for (k, slot) in trace.state(i).iter().enumerate() {
                let Some(seg) = slot else { continue };
                if seg.base() < pair.bottom() || seg.end() > pair.top() {
                    return Ok(false);
                }
                if seg.end() == pair.top() {
                    if seg.base() > pair.top_base() {
                        return Ok(false);
                    }
                    if (0..i).any(|l| trace.state(l)[k].as_ref() != Some(seg)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
