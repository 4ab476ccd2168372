use std::fmt::Write as _;

use serde_json::{json, Value};

use mseg::arthur::{verify_main_lemma, verify_prop_main};
use mseg::order::ge_witness;
use mseg::{
    build_poset, delta_psi, detect_arthur, enumerate_support, mw_dual, mw_trace, ArthurParameter,
    CuspidalLabel, EnumConfig, Error, MultiSegment, Support,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// What a command writes to stdout, and whether it counts as a pass.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }

    fn json(v: Value) -> Self {
        Output::ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize")))
    }
}

pub enum CmdError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Lib(e)
    }
}

type CmdResult = Result<Output, CmdError>;

fn no_dot(format: Format, cmd: &str) -> Result<(), CmdError> {
    if format == Format::Dot {
        return Err(CmdError::Usage(format!("--format dot is only available for hasse, not {cmd}")));
    }
    Ok(())
}

fn parse_ms(src: &str) -> Result<MultiSegment, CmdError> {
    Ok(src.parse::<MultiSegment>()?)
}

pub fn dual(input: &str, format: Format) -> CmdResult {
    no_dot(format, "dual")?;
    let ms = parse_ms(input)?;
    let d = mw_dual(&ms);
    Ok(match format {
        Format::Json => Output::json(json!({ "input": ms, "dual": d })),
        _ => Output::ok(format!("{d}\n")),
    })
}

pub fn ge(a: &str, b: &str, witness: bool, format: Format) -> CmdResult {
    no_dot(format, "ge")?;
    let (a, b) = (parse_ms(a)?, parse_ms(b)?);
    let mismatch = a.support() != b.support();
    let chain = if mismatch { None } else { ge_witness(&a, &b) };
    let verdict = chain.is_some();
    if format == Format::Json {
        let mut v = json!({ "a": a, "b": b, "ge": verdict });
        if mismatch {
            v["reason"] = json!("support mismatch");
        }
        if witness {
            v["witness"] = json!(chain);
        }
        return Ok(Output::json(v));
    }
    let mut out = String::new();
    if mismatch {
        out.push_str("false (support mismatch)\n");
    } else {
        let _ = writeln!(out, "{verdict}");
    }
    if let (true, Some(chain)) = (witness, &chain) {
        let _ = writeln!(out, "witness length {}", chain.len() - 1);
        for (i, step) in chain.iter().enumerate() {
            let _ = writeln!(out, "{i} {step}");
        }
    }
    Ok(Output::ok(out))
}

pub fn trace(input: &str, rho: Option<&str>, format: Format) -> CmdResult {
    no_dot(format, "trace")?;
    let ms = parse_ms(input)?;
    let rho = match rho {
        Some(r) => CuspidalLabel::new(r),
        None => ms.labels().into_iter().next().unwrap_or_default(),
    };
    let tr = mw_trace(&ms, &rho);
    Ok(match format {
        Format::Json => Output::json(serde_json::to_value(tr.to_json_value()).expect("trace serializes")),
        _ => Output::ok(tr.to_text()),
    })
}

pub fn arthur(input: &str, format: Format) -> CmdResult {
    no_dot(format, "arthur")?;
    let ms = parse_ms(input)?;
    let psi = detect_arthur(&ms);
    Ok(match format {
        Format::Json => Output::json(json!({
            "input": ms,
            "arthur": psi.is_some(),
            "parameter": psi,
        })),
        _ => Output::ok(match psi {
            Some(p) => format!("{p}\n"),
            None => "not arthur\n".to_string(),
        }),
    })
}

pub fn verify(input: &str, config: &EnumConfig, format: Format) -> CmdResult {
    no_dot(format, "verify")?;
    let psi: ArthurParameter = input.parse()?;
    let alpha = delta_psi(&psi);
    eprintln!("verifying psi={psi} alpha={alpha} (support {} points)", alpha.degree());
    let lemma = verify_main_lemma(&alpha, config)?;
    eprintln!("main lemma: {} candidates, {} qualifying", lemma.candidates_checked, lemma.qualifying);
    let prop = verify_prop_main(&alpha, config)?;
    eprintln!("extremal reduction: {} failures", prop.failures.len());
    let pass = lemma.holds() && prop.holds();
    let text = match format {
        Format::Json => {
            let v = json!({ "pass": pass, "lemma": lemma, "reduction": prop });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialize"))
        }
        _ => {
            let mut out = lemma.to_text();
            let verdict = if prop.holds() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} reduction failures={}", prop.failures.len());
            for f in &prop.failures {
                let _ = writeln!(out, "failure {} at {}: {}", f.beta, f.rho, f.reason);
            }
            out
        }
    };
    Ok(Output { text, pass })
}

pub fn enumerate(input: &str, config: &EnumConfig, format: Format) -> CmdResult {
    no_dot(format, "enumerate")?;
    let s: Support = input.parse()?;
    let all = enumerate_support(&s, config)?;
    Ok(match format {
        Format::Json => Output::json(json!({ "support": s.to_string(), "multisegments": all })),
        _ => Output::ok(all.iter().map(|m| format!("{m}\n")).collect()),
    })
}

pub fn hasse(input: &str, config: &EnumConfig, format: Format) -> CmdResult {
    let s: Support = input.parse()?;
    let poset = build_poset(&s, config)?;
    let mark = |m: &MultiSegment| detect_arthur(m).is_some();
    Ok(match format {
        Format::Dot => Output::ok(poset.to_dot(mark)),
        Format::Json => Output::json(serde_json::to_value(poset.to_json_value(mark)).expect("poset serializes")),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "# support={} nodes={} covers={}", s, poset.len(), poset.covers().len());
            for (i, n) in poset.nodes().iter().enumerate() {
                let tag = if mark(&n.ms) { " arthur" } else { "" };
                let _ = writeln!(out, "node {i} rank={} {}{tag}", n.rank, n.ms);
            }
            for (u, v) in poset.covers() {
                let _ = writeln!(out, "cover {u} -> {v}");
            }
            Output::ok(out)
        }
    })
}
