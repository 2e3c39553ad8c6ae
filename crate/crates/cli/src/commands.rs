use std::fmt::Write as _;

use hjchain::render::{decimal, parse_rational, ratio_str};
use hjchain::tsing::Undo;
use hjchain::*;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::Flags;

pub struct Output {
    pub text: String,
    pub json: Value,
}

pub type Result = std::result::Result<Output, Error>;

fn rat(r: &Rational) -> Value {
    json!(ratio_str(r))
}

fn chain(s: &str) -> std::result::Result<Chain, Error> {
    s.parse()
}

fn fraction(s: &str) -> std::result::Result<ExactFraction, Error> {
    s.parse()
}

fn center_t() -> Chain {
    Chain::from([4])
}

pub fn error_output(input: &str, e: &Error) -> Output {
    Output {
        text: format!("error: {e}"),
        json: json!({ "input": input, "error": e.to_string() }),
    }
}

pub fn expand(s: &str, _: &Flags) -> Result {
    let f = fraction(s)?;
    let c = f.expand();
    Ok(Output {
        text: c.to_string(),
        json: json!({ "fraction": f, "chain": c }),
    })
}

pub fn evaluate(s: &str, _: &Flags) -> Result {
    let c = chain(s)?;
    let (p, q) = c.evaluate::<Int>()?;
    let value = (!q.is_zero()).then(|| Rational::new(p.clone(), q.clone()));
    Ok(Output {
        text: format!("{p}/{q}"),
        json: json!({
            "chain": c,
            "numerator": p.to_string(),
            "denominator": q.to_string(),
            "value": value.as_ref().map(rat),
            "value_decimal": value.as_ref().map(decimal),
        }),
    })
}

pub fn dual(s: &str, _: &Flags) -> Result {
    let f = fraction(s)?;
    let d = f.dual();
    let c = d.expand();
    Ok(Output {
        text: format!("{d} = {c}"),
        json: json!({ "fraction": f, "dual": d, "dual_chain": c }),
    })
}

pub fn discrepancies(s: &str, flags: &Flags) -> Result {
    let c = chain(s)?;
    let d = hjchain::discrepancies(&c)?;
    let f = c.to_fraction::<Int>()?;
    let corr = correction_term(&f);
    let mut text = String::from("j\tb_j\ta_j\ta_j_decimal\n");
    for (j, (a, b)) in d.a().iter().zip(c.entries()).enumerate() {
        let _ = writeln!(text, "{}\t{b}\t{}\t{}", j + 1, ratio_str(a), decimal(a));
    }
    let _ = writeln!(text, "correction\t{}\t{}", ratio_str(&corr), decimal(&corr));
    let mut doc = json!({
        "chain": c,
        "fraction": f,
        "discrepancies": d.a().iter().map(rat).collect::<Vec<_>>(),
        "discrepancies_decimal": d.a().iter().map(decimal).collect::<Vec<_>>(),
        "correction": rat(&corr),
        "correction_decimal": decimal(&corr),
    });
    if flags.trace {
        doc["sweep_c"] = d.aux_c().iter().map(rat).collect();
        doc["sweep_d"] = d.aux_d().iter().map(rat).collect();
        for (j, (cj, dj)) in d.aux_c().iter().zip(d.aux_d()).enumerate() {
            let _ = writeln!(text, "sweep {}\tc={}\td={}", j + 1, ratio_str(cj), ratio_str(dj));
        }
    }
    Ok(Output { text, json: doc })
}

pub fn contract(s: &str, flags: &Flags) -> Result {
    let c = chain(s)?;
    let (out, trace) = contract_fully(&c)?;
    let mut text = String::new();
    let mut doc = json!({ "chain": c, "result": out });
    if flags.trace {
        text.push_str(&trace.to_log());
        doc["trace"] = serde_json::to_value(&trace).expect("trace serializes");
    }
    text.push_str(&out.to_string());
    Ok(Output { text, json: doc })
}

pub fn classify(s: &str, _: &Flags) -> Result {
    let c = chain(s)?;
    c.require_general()?;
    let strict = c.is_strict();
    let admissible = c.is_admissible();
    let fr = if strict { c.to_fraction::<Int>().ok() } else { None };
    let afc = strict && !c.is_empty() && is_admissible_for_chains(&c);
    let core = is_core(&c);
    let minimal = core.then(|| Core::new(c.clone()).expect("checked core").is_minimal());
    let t = fr.as_ref().and_then(recognize_t);
    let gen_t = afc && is_generalized_t(&c, &center_t())?;
    let dec = if afc { hjchain::decompose(&c) } else { None };
    let text = [
        format!("chain: {c}"),
        format!("fraction: {}", fr.as_ref().map_or("-".into(), ToString::to_string)),
        format!("strict: {strict}"),
        format!("admissible: {admissible}"),
        format!("admissible for chains: {afc}"),
        format!("core: {core}"),
        format!("minimal core: {}", minimal.map_or("-".into(), |m| m.to_string())),
        format!(
            "T-singularity: {}",
            t.as_ref()
                .map_or("no".into(), |t| format!("d={} n0={} a={}", t.d, t.n0, t.a))
        ),
        format!("generalized T of center [4]: {gen_t}"),
        format!("decomposition: {}", dec.as_ref().map_or("-".into(), ToString::to_string)),
    ]
    .join("\n");
    Ok(Output {
        text,
        json: json!({
            "chain": c,
            "fraction": fr,
            "strict": strict,
            "admissible": admissible,
            "admissible_for_chains": afc,
            "core": core,
            "minimal_core": minimal,
            "t_singularity": t.map(|t| json!({
                "d": t.d.to_string(), "n0": t.n0.to_string(), "a": t.a.to_string()
            })),
            "generalized_t_center_4": gen_t,
            "decomposition": dec,
        }),
    })
}

pub fn decompose(s: &str, flags: &Flags) -> Result {
    let c = chain(s)?;
    c.require_strict()?;
    let d = hjchain::decompose(&c).ok_or_else(|| Error::NotAdmissibleForChains(c.to_string()))?;
    let mut text = d.to_string();
    let mut doc = json!({ "chain": c });
    if let Value::Object(m) = serde_json::to_value(&d).expect("decomposition serializes") {
        doc.as_object_mut().expect("object").extend(m);
    }
    if flags.trace {
        let mut path = vec![c.clone()];
        let mut cur = c.clone();
        while let Ok(Undo::Step(prev, _)) = hjchain::undo_tstep(&cur) {
            path.push(prev.clone());
            cur = prev;
        }
        path.reverse();
        let base = path[0].clone();
        let _ = write!(text, "\nbase {base} = reduced form of {} with u={}", d.core, d.u);
        for w in path.windows(2) {
            let _ = write!(text, "\n{} -> {}", w[0], w[1]);
        }
        doc["path"] = json!(path);
    }
    Ok(Output { text, json: doc })
}

pub fn survivors(s: &str, _: &Flags) -> Result {
    let c = chain(s)?;
    let sc = surviving_center(&c)?;
    Ok(Output {
        text: format!(
            "middle {}..{} -> result {}..{} in {}",
            sc.middle.start, sc.middle.end, sc.result.start, sc.result.end, sc.contracted
        ),
        json: json!({
            "chain": c,
            "middle": [sc.middle.start, sc.middle.end],
            "result": [sc.result.start, sc.result.end],
            "contracted": sc.contracted,
        }),
    })
}

pub fn enumerate_gent(center: &str, max_length: usize, flags: &Flags) -> Result {
    let center = chain(center)?;
    let members = enumerate_generalized_t(&center, max_length)?;
    let mut text = String::new();
    for m in &members {
        if flags.trace {
            let _ = writeln!(text, "{}\tu={}\tsteps={}", m.chain, m.u, m.steps_word());
        } else {
            let _ = writeln!(text, "{}", m.chain);
        }
    }
    let _ = write!(text, "count: {}", members.len());
    let listed: Vec<Value> = if flags.trace {
        members.iter().map(|m| json!(m)).collect()
    } else {
        members.iter().map(|m| json!(m.chain)).collect()
    };
    Ok(Output {
        text,
        json: json!({
            "center": center,
            "max_length": max_length,
            "count": members.len(),
            "members": listed,
        }),
    })
}

pub fn enumerate_cores(max_weight: i64, max_length: usize, _: &Flags) -> Result {
    if max_weight < 0 {
        return Err(Error::InvalidParameter(format!("max weight {max_weight} is negative")));
    }
    let cores = hjchain::enumerate_cores(max_weight, max_length);
    let mut text = String::new();
    for (c, minimal) in &cores {
        let _ = writeln!(text, "{c}\t{}", if *minimal { "minimal" } else { "non-minimal" });
    }
    let _ = write!(text, "count: {}", cores.len());
    Ok(Output {
        text,
        json: json!({
            "max_weight": max_weight,
            "max_length": max_length,
            "count": cores.len(),
            "cores": cores.iter().map(|(c, m)| json!({ "core": c, "minimal": m })).collect::<Vec<_>>(),
        }),
    })
}

fn tolerance(s: &str) -> std::result::Result<Rational, Error> {
    let t = parse_rational(s)?;
    if t <= Rational::zero() {
        return Err(Error::InvalidParameter(format!("tolerance {s} must be positive")));
    }
    Ok(t)
}

fn limit_text(label: &str, rep: &LimitReport<BigInt>) -> String {
    let mut s = format!(
        "{label}: {} last={} ({}) converged={}",
        serde_json::to_value(rep.monotonicity).expect("serializes").as_str().unwrap_or(""),
        ratio_str(&rep.last),
        decimal(&rep.last),
        rep.converged
    );
    if let (Some(t), Some(g)) = (&rep.target, &rep.gap) {
        let _ = write!(s, " target={} ({}) gap={}", ratio_str(t), decimal(t), decimal(g));
    }
    s
}

fn sequence_output(seq: &AccumSequence<BigInt>, tol: &Rational, flags: &Flags, extra: Option<(&str, AccumSequence<BigInt>)>) -> Result {
    let rep = limit_of(seq, tol)?;
    let mut text = seq.to_table();
    let mut doc = json!({
        "family": seq.family,
        "ks2": seq.ks2.to_string(),
        "m0": seq.m0.to_string(),
        "terms": seq.terms.iter().map(|t| {
            let mut v = json!(t);
            if !flags.trace {
                v.as_object_mut().expect("object").remove("witness");
            }
            v
        }).collect::<Vec<_>>(),
        "limit": rep,
    });
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&limit_text(&format!("limit (m = {} + k)", seq.m0), &rep));
    if let Some((key, other)) = extra {
        let rep2 = limit_of(&other, tol)?;
        let _ = write!(text, "\n{}", limit_text(&format!("limit (m = {} + k)", other.m0), &rep2));
        doc[key] = json!({
            "m0": other.m0.to_string(),
            "kw2": other.kw2_values().iter().map(rat).collect::<Vec<_>>(),
            "limit": rep2,
        });
    }
    if flags.trace {
        for t in &seq.terms {
            if let Some(w) = &t.witness {
                let _ = write!(
                    text,
                    "\nk={} bridge={} kw2_positive={} discrepancies_drop={}",
                    t.k,
                    ratio_str(&w.bridge_degree),
                    w.kw2_positive,
                    w.discrepancies_drop
                );
            }
        }
    }
    Ok(Output { text, json: doc })
}

pub fn accumulate_example(n0: i64, kmax: usize, tol: &str, flags: &Flags) -> Result {
    let tol = tolerance(tol)?;
    let seq = example210_family::<BigInt>(n0, kmax)?;
    let naive = seq.with_m0(BigInt::from(1));
    sequence_output(&seq, &tol, flags, Some(("naive_m", naive)))
}

pub fn accumulate_blowup(seed: &str, ks2: i64, m0: i64, kmax: usize, tol: &str, flags: &Flags) -> Result {
    let tol = tolerance(tol)?;
    let seq = blowup_family::<BigInt>(&chain(seed)?, kmax, ks2.into(), m0.into())?;
    sequence_output(&seq, &tol, flags, None)
}

pub fn accumulate_formation(seed: &str, ks2: i64, m0: i64, kmax: usize, tol: &str, flags: &Flags) -> Result {
    let tol = tolerance(tol)?;
    let seq = formation_family::<BigInt>(&fraction(seed)?, kmax, ks2.into(), m0.into())?;
    sequence_output(&seq, &tol, flags, None)
}

pub struct BoundInput<'a> {
    pub ks2: i64,
    pub m: i64,
    pub lambda: Option<&'a str>,
    pub chi: Option<i64>,
    pub delta_case: &'a str,
    pub l: Option<u64>,
    pub k: Option<u64>,
}

pub fn verify_bounds(s: &str, b: &BoundInput, _: &Flags) -> Result {
    let c = chain(s)?;
    let case: DeltaCase = DeltaCase::from_label(b.delta_case, b.l, b.k)?;
    let delta = delta_from_case(&case);
    let mut ledger = k2_ledger::<BigInt>(&c, b.ks2.into(), b.m.into())?;
    if let Some(l) = b.lambda {
        ledger = ledger.with_lambda(parse_rational(l)?);
    }
    if let Some(chi) = b.chi {
        ledger = ledger.with_chi(chi.into());
    }
    let delta_i = i64::try_from(delta).map_err(|_| Error::InvalidParameter(format!("delta {delta} too large")))?;
    let report = check_main_bounds(&ledger, delta_i)?;
    let mut text = format!(
        "chain {c}: K_W^2 = {} ({}), delta = {delta} ({case})",
        ratio_str(&ledger.kw2),
        decimal(&ledger.kw2)
    );
    for ch in &report.checks {
        let v = serde_json::to_value(ch.verdict).expect("serializes");
        let _ = write!(text, "\n{}: {}", ch.inequality, v.as_str().unwrap_or(""));
        if let (Some(l), Some(r), Some(sl)) = (&ch.lhs, &ch.rhs, &ch.slack) {
            let _ = write!(text, " lhs={} rhs={} slack={}", ratio_str(l), ratio_str(r), ratio_str(sl));
        }
    }
    Ok(Output {
        text,
        json: json!({
            "ledger": ledger,
            "delta_case": case.to_string(),
            "delta": delta,
            "report": report,
            "all_hold": report.all_hold(),
        }),
    })
}
