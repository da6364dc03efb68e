//! JSON text formats for knots, sequences, homotopy traces and certificates.
//!
//! Values are strings holding exact rationals (`"p/q"`), exact decimals
//! (`"0.25"`, `"1e-3"`) or intervals (`"[p/q, r/s]"`). Plain JSON integers
//! are accepted on input.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{CertCertificate, Evidence};
use crate::deform::{HomotopyTrace, TraceKind, TraceSample, TraceState};
use crate::error::{Error, Result};
use crate::scalar::{rational_string, Rational, Scalar};
use crate::table::{make_knot, Index, PolynomialKnot, SequencePoint, Verdict};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientDoc {
    pub i: u32,
    pub j: u32,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotDoc {
    pub dimension: u32,
    pub coefficients: Vec<CoefficientDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub i: u32,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub entries: Vec<EntryDoc>,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

fn scalar_value(v: &Value, field: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => {
            Scalar::parse(s).ok_or_else(|| Error::Parse(format!("{field}: cannot read {s:?} as a rational, decimal or interval")))
        }
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().expect("checked"))),
        Value::Number(n) => Err(Error::Parse(format!(
            "{field}: non-integer number {n} must be quoted to stay exact, e.g. \"{n}\""
        ))),
        other => Err(Error::Parse(format!("{field}: expected a string, got {other}"))),
    }
}

fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_exact_string())
}

pub fn knot_to_doc(k: &PolynomialKnot) -> KnotDoc {
    KnotDoc {
        dimension: k.dimension(),
        coefficients: k
            .table()
            .iter()
            .map(|(idx, v)| CoefficientDoc { i: idx.component, j: idx.power, value: scalar_json(v) })
            .collect(),
    }
}

pub fn knot_from_doc(doc: &KnotDoc) -> Result<PolynomialKnot> {
    let mut entries = Vec::with_capacity(doc.coefficients.len());
    for (n, c) in doc.coefficients.iter().enumerate() {
        if c.i == 0 {
            return Err(Error::Parse(format!("coefficients[{n}].i: component indices start at 1")));
        }
        entries.push((Index::new(c.i, c.j), scalar_value(&c.value, &format!("coefficients[{n}].value"))?));
    }
    make_knot(doc.dimension, entries).map_err(|e| Error::Parse(format!("knot: {e}")))
}

/// Canonical text: pretty JSON with entries sorted by `(i, j)`, trailing newline.
pub fn knot_to_string(k: &PolynomialKnot) -> String {
    let mut s = serde_json::to_string_pretty(&knot_to_doc(k)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_knot(text: &str) -> Result<PolynomialKnot> {
    let doc: KnotDoc = serde_json::from_str(text).map_err(syntax)?;
    knot_from_doc(&doc)
}

pub fn sequence_to_doc(x: &SequencePoint) -> SequenceDoc {
    SequenceDoc { entries: x.iter().map(|(&i, v)| EntryDoc { i, value: scalar_json(v) }).collect() }
}

pub fn sequence_from_doc(doc: &SequenceDoc) -> Result<SequencePoint> {
    let mut entries = Vec::with_capacity(doc.entries.len());
    for (n, e) in doc.entries.iter().enumerate() {
        entries.push((e.i, scalar_value(&e.value, &format!("entries[{n}].value"))?));
    }
    SequencePoint::new(entries).map_err(|e| Error::Parse(format!("sequence: {e}")))
}

pub fn sequence_to_string(x: &SequencePoint) -> String {
    let mut s = serde_json::to_string_pretty(&sequence_to_doc(x)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_sequence(text: &str) -> Result<SequencePoint> {
    let doc: SequenceDoc = serde_json::from_str(text).map_err(syntax)?;
    sequence_from_doc(&doc)
}

pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Refuted { s, t } => json!({ "verdict": v.tag(), "witness": { "s": scalar_json(s), "t": scalar_json(t) } }),
        Verdict::Inconclusive { depth } => json!({ "verdict": v.tag(), "depth": depth }),
        _ => json!({ "verdict": v.tag() }),
    }
}

fn verdict_from_json(v: &Value, field: &str) -> Result<Verdict> {
    let tag = v.get("verdict").and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("{field}.verdict: missing")))?;
    match tag {
        "uncertified" => Ok(Verdict::Uncertified),
        "certified" => Ok(Verdict::Certified),
        "refuted" => {
            let w = v.get("witness").ok_or_else(|| Error::Parse(format!("{field}.witness: missing")))?;
            let s = scalar_value(w.get("s").unwrap_or(&Value::Null), &format!("{field}.witness.s"))?;
            let t = scalar_value(w.get("t").unwrap_or(&Value::Null), &format!("{field}.witness.t"))?;
            Ok(Verdict::Refuted { s, t })
        }
        "inconclusive" => {
            let depth = v.get("depth").and_then(Value::as_u64).unwrap_or(0) as u32;
            Ok(Verdict::Inconclusive { depth })
        }
        other => Err(Error::Parse(format!("{field}.verdict: unknown verdict {other:?}"))),
    }
}

fn state_json(s: &TraceState) -> Value {
    match s {
        TraceState::Knot(k) => serde_json::to_value(knot_to_doc(k)).expect("serializable"),
        TraceState::Sequence(x) => serde_json::to_value(sequence_to_doc(x)).expect("serializable"),
    }
}

fn state_from_json(v: &Value, field: &str) -> Result<TraceState> {
    if v.get("coefficients").is_some() {
        let doc: KnotDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{field}: {e}")))?;
        knot_from_doc(&doc).map(TraceState::Knot)
    } else {
        let doc: SequenceDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{field}: {e}")))?;
        sequence_from_doc(&doc).map(TraceState::Sequence)
    }
}

pub fn trace_to_string(t: &HomotopyTrace) -> String {
    let samples: Vec<Value> = t
        .samples
        .iter()
        .map(|s| {
            let mut v = json!({
                "leg": s.leg.tag(),
                "parameter": rational_string(&s.parameter),
                "state": state_json(&s.state),
            });
            v["verdict"] = verdict_json(&s.verdict)["verdict"].clone();
            v
        })
        .collect();
    let mut doc = json!({
        "kind": t.kind.tag(),
        "steps": t.steps,
        "source": state_json(&t.source),
        "samples": samples,
    });
    if let TraceState::Knot(k) = &t.source {
        doc["source_verdict"] = verdict_json(k.verdict())["verdict"].clone();
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_trace(text: &str) -> Result<HomotopyTrace> {
    let v: Value = serde_json::from_str(text).map_err(syntax)?;
    let str_field = |name: &str| v.get(name).and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("{name}: missing")));
    let kind = TraceKind::parse(str_field("kind")?).ok_or_else(|| Error::Parse("kind: unknown trace kind".into()))?;
    let steps = v.get("steps").and_then(Value::as_u64).ok_or_else(|| Error::Parse("steps: missing".into()))? as usize;
    let mut source = state_from_json(v.get("source").unwrap_or(&Value::Null), "source")?;
    if let (TraceState::Knot(k), Some(tag)) = (&source, v.get("source_verdict")) {
        let verdict = verdict_from_json(&json!({ "verdict": tag }), "source_verdict")?;
        source = TraceState::Knot(k.clone().with_verdict(verdict));
    }
    let raw = v.get("samples").and_then(Value::as_array).ok_or_else(|| Error::Parse("samples: missing".into()))?;
    let mut samples = Vec::with_capacity(raw.len());
    for (n, s) in raw.iter().enumerate() {
        let field = format!("samples[{n}]");
        let leg = s
            .get("leg")
            .and_then(Value::as_str)
            .and_then(TraceKind::parse)
            .ok_or_else(|| Error::Parse(format!("{field}.leg: missing or unknown")))?;
        let parameter = s
            .get("parameter")
            .and_then(Value::as_str)
            .and_then(Scalar::parse)
            .and_then(|p| p.as_exact().cloned())
            .ok_or_else(|| Error::Parse(format!("{field}.parameter: expected an exact rational")))?;
        let verdict = verdict_from_json(s, &field)?;
        let state = match state_from_json(s.get("state").unwrap_or(&Value::Null), &format!("{field}.state"))? {
            TraceState::Knot(k) => TraceState::Knot(k.with_verdict(verdict.clone())),
            other => other,
        };
        samples.push(TraceSample { leg, parameter, state, verdict });
    }
    Ok(HomotopyTrace { kind, steps, source, samples })
}

fn evidence_json(e: &Evidence) -> Value {
    let iv = |x: &crate::scalar::Interval| Value::String(Scalar::from_interval(x.clone()).to_exact_string());
    match e {
        Evidence::LinearComponent { component } => json!({ "kind": "linear-component", "component": component }),
        Evidence::MonotoneComponent { component } => json!({ "kind": "monotone-component", "component": component }),
        Evidence::ConstantMap => json!({ "kind": "constant-map" }),
        Evidence::DerivativeRoot { t } => json!({ "kind": "derivative-root", "t": iv(t) }),
        Evidence::VerticalLine { e1 } => json!({ "kind": "vertical-line", "e1": iv(e1) }),
        Evidence::SampleLine { e1, crossings } => {
            json!({ "kind": "sample-line", "e1": rational_string(e1), "crossings": crossings })
        }
        Evidence::ExcludedBox { e1, e2, reason } => {
            json!({ "kind": "excluded-box", "e1": iv(e1), "e2": iv(e2), "reason": reason })
        }
        Evidence::ZeroBox { e1, e2 } => json!({ "kind": "zero-box", "e1": iv(e1), "e2": iv(e2) }),
        Evidence::UnresolvedBox { e1, e2 } => json!({ "kind": "unresolved-box", "e1": iv(e1), "e2": iv(e2) }),
        Evidence::DegenerateSystem => json!({ "kind": "degenerate-system" }),
        Evidence::IntervalCoefficients => json!({ "kind": "interval-coefficients" }),
    }
}

pub fn certificate_json(c: &CertCertificate) -> Value {
    let mut v = verdict_json(&c.verdict);
    v["evidence"] = Value::Array(c.evidence.iter().map(evidence_json).collect());
    v
}

pub fn certificate_to_string(c: &CertCertificate) -> String {
    let mut s = serde_json::to_string_pretty(&certificate_json(c)).expect("serializable");
    s.push('\n');
    s
}

/// Reads `"p/q"`, decimals or JSON integers as exact rationals.
pub fn rational_value(v: &Value, field: &str) -> Result<Rational> {
    scalar_value(v, field)?
        .as_exact()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an exact value")))
}
