//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p mseg-core --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use mseg::arthur::{parameters_up_to, verify_main_lemma, verify_prop_main};
use mseg::involution::validate_index_sets;
use mseg::{
    build_poset, delta_bes, delta_da, delta_psi, detect_arthur, enumerate_support, ge, mw_dual,
    mw_trace, strip_identity_check, CuspidalLabel, EnumConfig, HalfInt, MultiSegment, Segment,
    Support,
};

fn rho() -> CuspidalLabel {
    CuspidalLabel::default()
}

fn ms(pairs: &[(i64, i64)]) -> MultiSegment {
    MultiSegment::ints(&rho(), pairs)
}

fn seg(b: i64, e: i64) -> Segment {
    Segment::int(&rho(), b, e).unwrap()
}

/// Every single-label integer support on `{lo..=hi}` with `1..=max_points` points.
fn supports(lo: i64, hi: i64, max_points: usize) -> Vec<Support> {
    fn rec(x: i64, hi: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if x > hi {
            out.push(cur.clone());
            return;
        }
        for m in 0..=left {
            for _ in 0..m {
                cur.push(x);
            }
            rec(x + 1, hi, left - m, cur, out);
            for _ in 0..m {
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(lo, hi, max_points, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter(|p| !p.is_empty())
        .map(|p| Support::from_points(p.into_iter().map(|x| (rho(), HalfInt::from_int(x)))))
        .collect()
}

/// All multi-segments over the supports above.
fn small_family() -> Vec<MultiSegment> {
    let cfg = EnumConfig::default();
    supports(-3, 3, 8)
        .par_iter()
        .flat_map_iter(|s| enumerate_support(s, &cfg).expect("within bound"))
        .collect()
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(checked: usize, failures: Vec<String>) -> Self {
        match failures.first() {
            None => Outcome { ok: true, detail: format!("{checked} checked") },
            Some(first) => Outcome {
                ok: false,
                detail: format!("{} of {checked} failed, first: {first}", failures.len()),
            },
        }
    }
}

fn criterion_1() -> Outcome {
    let beta = ms(&[(2, 2), (0, 1), (-2, 0), (-3, -1), (1, 2), (-1, 1), (-2, 0), (-2, 1)]);
    let trace = mw_trace(&beta, &rho());
    let chosen = |i: usize| -> MultiSegment {
        trace.steps()[i]
            .chosen
            .iter()
            .map(|&k| trace.labeling()[k].clone())
            .collect()
    };
    let mut failures = Vec::new();
    if trace.steps()[0].leading != seg(-1, 2) {
        failures.push(format!("M(beta^0) = {}", trace.steps()[0].leading));
    }
    if chosen(0) != ms(&[(2, 2), (0, 1), (-2, 0), (-3, -1)]) {
        failures.push(format!("chosen at pass 0: {}", chosen(0)));
    }
    if trace.steps()[1].leading != seg(0, 2) {
        failures.push(format!("M(beta^1) = {}", trace.steps()[1].leading));
    }
    if chosen(1) != ms(&[(1, 2), (-1, 1), (-2, 0)]) {
        failures.push(format!("chosen at pass 1: {}", chosen(1)));
    }
    Outcome::from_failures(2, failures)
}

fn criterion_2() -> Outcome {
    let beta = ms(&[
        (2, 2),
        (1, 1),
        (0, 0),
        (-1, -1),
        (-2, -2),
        (1, 2),
        (-1, 1),
        (-2, 0),
        (-3, -1),
        (0, 2),
        (-1, 1),
        (-3, 0),
        (0, 2),
        (-3, 1),
        (-2, 2),
    ]);
    let mut failures = Vec::new();
    let lead = mw_trace(&beta, &rho()).leading();
    let want = ms(&[(-2, 2), (-1, 2), (0, 2), (1, 2), (2, 2)]);
    if lead.len() < 5 || MultiSegment::new(lead[..5].to_vec()) != want {
        failures.push(format!("leading of beta: {lead:?}"));
    }
    let delta = delta_bes(&rho(), HalfInt::from_int(0), HalfInt::from_int(2), 3).unwrap();
    let beta_minus = beta.remove_all(&delta).expect("beta contains delta_{0,2,3}");
    let lead = mw_trace(&beta_minus, &rho()).leading();
    let want = ms(&[(-2, 2), (0, 2), (1, 2), (2, 2)]);
    if lead.len() < 4 || MultiSegment::new(lead[..4].to_vec()) != want {
        failures.push(format!("leading of beta minus delta: {lead:?}"));
    }
    Outcome::from_failures(2, failures)
}

fn criterion_3(family: &[MultiSegment]) -> Outcome {
    let failures: Vec<String> = family
        .par_iter()
        .filter(|m| mw_dual(&mw_dual(m)) != **m)
        .map(|m| m.to_string())
        .collect();
    Outcome::from_failures(family.len(), failures)
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for d in 0..=6 {
        for a in 0..=6 {
            let lhs = mw_dual(&delta_da(&rho(), d, a).unwrap());
            if lhs != delta_da(&rho(), a, d).unwrap() {
                failures.push(format!("d={d} a={a}: {lhs}"));
            }
        }
    }
    Outcome::from_failures(49, failures)
}

fn arthur_family() -> Vec<mseg::ArthurParameter> {
    parameters_up_to(&rho(), 10)
}

fn criterion_5() -> Outcome {
    let cfg = EnumConfig { parallel: false, ..EnumConfig::default() };
    let family = arthur_family();
    let mut failures = Vec::new();
    let mut candidates = 0;
    for psi in &family {
        match verify_main_lemma(&delta_psi(psi), &cfg) {
            Ok(r) => {
                candidates += r.candidates_checked;
                if !r.holds() {
                    failures.push(format!("psi={psi}: {}", r.to_text().trim_end()));
                }
            }
            Err(e) => failures.push(format!("psi={psi}: {e}")),
        }
    }
    let mut out = Outcome::from_failures(family.len(), failures);
    out.detail.push_str(&format!(", {candidates} candidates"));
    out
}

fn criterion_6() -> Outcome {
    let cfg = EnumConfig::default();
    let family = arthur_family();
    let failures: Vec<String> = family
        .par_iter()
        .flat_map_iter(|psi| match verify_prop_main(&delta_psi(psi), &cfg) {
            Ok(r) => r
                .failures
                .iter()
                .map(|f| format!("psi={psi} beta={}: {}", f.beta, f.reason))
                .collect::<Vec<_>>(),
            Err(e) => vec![format!("psi={psi}: {e}")],
        })
        .collect();
    Outcome::from_failures(family.len(), failures)
}

/// Every `(b,e,s)` for which `β` contains `δ_{b,e,s}` and the block lies in
/// `x ≥ b-s`, `y ≤ e`.
fn strip_triples(beta: &MultiSegment) -> Vec<(HalfInt, HalfInt, usize)> {
    let Some(e) = beta.iter().map(Segment::end).max() else {
        return Vec::new();
    };
    let floor = beta.iter().map(Segment::base).min().unwrap();
    let mut out = Vec::new();
    let mut bases: Vec<HalfInt> = beta.iter().filter(|s| s.end() == e).map(Segment::base).collect();
    bases.dedup();
    for b in bases {
        let mut s = 0usize;
        loop {
            let delta = delta_bes(&rho(), b, e, s).unwrap();
            if !beta.contains_all(&delta) {
                break;
            }
            if floor >= b.offset(-(s as i64)) {
                out.push((b, e, s));
            }
            s += 1;
        }
    }
    out
}

fn criterion_7(family: &[MultiSegment]) -> Outcome {
    let results: Vec<(usize, Vec<String>)> = family
        .par_iter()
        .map(|beta| {
            let triples = strip_triples(beta);
            let failures = triples
                .iter()
                .filter_map(|&(b, e, s)| match strip_identity_check(beta, &rho(), b, e, s) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("beta={beta} b={b} e={e} s={s}")),
                    Err(err) => Some(format!("beta={beta} b={b} e={e} s={s}: {err}")),
                })
                .collect();
            (triples.len(), failures)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    Outcome::from_failures(checked, results.into_iter().flat_map(|r| r.1).collect())
}

fn criterion_8(family: &[MultiSegment]) -> Outcome {
    let failures: Vec<String> = family
        .par_iter()
        .filter_map(|beta| {
            let trace = mw_trace(beta, &rho());
            if let Err(e) = trace.check_index_lemma() {
                return Some(format!("{beta}: {e}"));
            }
            if let Err(e) = trace.check_characterization() {
                return Some(format!("{beta}: {e}"));
            }
            let sets = trace.index_sets();
            let t = trace.t().min(sets.len());
            match validate_index_sets(beta, &rho(), &sets[..t]) {
                Ok(true) => None,
                Ok(false) => Some(format!("{beta}: canonical index sets rejected")),
                Err(e) => Some(format!("{beta}: {e}")),
            }
        })
        .collect();
    Outcome::from_failures(family.len(), failures)
}

fn criterion_9() -> Outcome {
    let cfg = EnumConfig::default();
    let family = supports(-3, 3, 8);
    let failures: Vec<String> = family
        .par_iter()
        .flat_map_iter(|s| {
            let mut out = Vec::new();
            let poset = match build_poset(s, &cfg) {
                Ok(p) => p,
                Err(e) => return vec![format!("{s}: {e}")],
            };
            let nodes = poset.nodes();
            for &(u, v) in poset.covers() {
                if nodes[v].rank <= nodes[u].rank {
                    out.push(format!("{s}: cover {} -> {} does not raise rank", nodes[u].ms, nodes[v].ms));
                }
            }
            for u in 0..poset.len() {
                for v in 0..poset.len() {
                    let g = poset.ge_index(u, v);
                    if u != v && g && poset.ge_index(v, u) {
                        out.push(format!("{s}: {} and {} above each other", nodes[u].ms, nodes[v].ms));
                    }
                    if ge(&nodes[u].ms, &nodes[v].ms) != g {
                        out.push(format!("{s}: ge({}, {}) disagrees with the poset", nodes[u].ms, nodes[v].ms));
                    }
                }
            }
            out
        })
        .collect();
    Outcome::from_failures(family.len(), failures)
}

/// Deterministic corpus: tilings of small supports, shifted to half-integers
/// and spread over several labels.
fn text_corpus() -> Vec<MultiSegment> {
    let cfg = EnumConfig::default();
    let labels = [CuspidalLabel::new("rho"), CuspidalLabel::new("sigma"), CuspidalLabel::new("chi'1")];
    let base: Vec<MultiSegment> = supports(-1, 1, 4)
        .iter()
        .flat_map(|s| enumerate_support(s, &cfg).unwrap())
        .collect();
    let shift = |m: &MultiSegment, label: &CuspidalLabel, half: bool| -> MultiSegment {
        m.iter()
            .map(|s| {
                let k = if half { 1 } else { 0 };
                Segment::new(
                    label.clone(),
                    HalfInt::from_twice(s.base().twice() + k),
                    HalfInt::from_twice(s.end().twice() + k),
                )
                .unwrap()
            })
            .collect()
    };
    let mut out = Vec::new();
    for (i, m) in base.iter().enumerate() {
        out.push(m.clone());
        out.push(shift(m, &labels[1], true));
        let other = &base[(i * 7 + 3) % base.len()];
        out.push(shift(m, &labels[0], i % 2 == 0) + shift(other, &labels[2], i % 3 == 0));
    }
    out.push(MultiSegment::empty());
    out
}

fn criterion_10() -> Outcome {
    let corpus = text_corpus();
    let mut failures = Vec::new();
    let half = corpus.iter().filter(|m| m.iter().any(|s| !s.base().is_integer())).count();
    let multi = corpus.iter().filter(|m| m.labels().len() > 1).count();
    if corpus.len() < 100 || half == 0 || multi == 0 {
        failures.push(format!("corpus too thin: {} total, {half} half-integer, {multi} multi-label", corpus.len()));
    }
    for m in &corpus {
        let text = m.to_string();
        match text.parse::<MultiSegment>() {
            Ok(back) if back == *m && back.to_string() == text => {}
            Ok(back) => failures.push(format!("{text} came back as {back}")),
            Err(e) => failures.push(format!("{text}: {e}")),
        }
    }
    let family = arthur_family();
    for psi in &family {
        match detect_arthur(&delta_psi(psi)) {
            Some(found) if found == *psi => {}
            other => failures.push(format!("psi={psi}: detected {other:?}")),
        }
    }
    Outcome::from_failures(corpus.len() + family.len(), failures)
}

fn main() -> ExitCode {
    let family_start = Instant::now();
    let family = small_family();
    let family_time = family_start.elapsed();
    println!("family: {} multi-segments with support in {{-3..3}}, <= 8 points ({family_time:.2?})", family.len());

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let secs = Duration::from_secs;
    let criteria: Vec<(&str, Duration, Check)> = vec![
        ("1 worked trace", secs(1), Box::new(criterion_1)),
        ("2 fifteen-segment example", secs(1), Box::new(criterion_2)),
        ("3 involutivity", secs(300), Box::new(|| criterion_3(&family))),
        ("4 arthur duality", secs(1), Box::new(criterion_4)),
        ("5 main lemma", secs(600), Box::new(criterion_5)),
        ("6 extremal reduction", secs(600), Box::new(criterion_6)),
        ("7 strip identity", secs(300), Box::new(|| criterion_7(&family))),
        ("8 index-set lemma", secs(300), Box::new(|| criterion_8(&family))),
        ("9 order sanity", secs(600), Box::new(criterion_9)),
        ("10 round trips", secs(60), Box::new(criterion_10)),
    ];

    let mut summary: BTreeMap<bool, usize> = BTreeMap::new();
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = outcome.ok && in_time;
        *summary.entry(ok).or_default() += 1;
        let verdict = if ok { "PASS" } else { "FAIL" };
        let late = if in_time { String::new() } else { format!(", over the {limit:?} limit") };
        println!("{verdict} criterion {name}: {} ({elapsed:.2?}{late})", outcome.detail);
    }
    let failed = summary.get(&false).copied().unwrap_or(0);
    println!("{} passed, {failed} failed", summary.get(&true).copied().unwrap_or(0));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
