use std::path::PathBuf;

use clap::Args;
use polyknot_core::scalar::{rat, rational_string};
use polyknot_core::table::make_knot;
use polyknot_core::topology::{
    inclusion_inf_r, inclusion_product_inf, inclusion_r_s, inclusion_s_box, strictness_instance, table_text,
    ProductOpenSpec, DEFAULT_DIMENSION,
};
use polyknot_core::{
    Comparison, Index, InclusionWitness, Membership, MetricTag, OpenInterval, PolynomialKnot, Rational, Scalar,
    StrictnessParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{load_knot, parse_rational_arg, write_atomic, CmdResult, Failure};

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// p-inf, inf-r, r-s or s-box.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    /// Strictness parameter δ in (0, 1); 1/2 when omitted for inf-r, r-s and s-box.
    #[arg(long)]
    delta: Option<String>,
    /// Radius of the outer ball.
    #[arg(long, default_value = "1")]
    epsilon: String,
    /// Ambient dimension of the default centre and of the strictness family.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Family index for the strictness instance.
    #[arg(long)]
    k: Option<u64>,
    /// Product-open constraint `i,j,lo,hi` (p-inf only; `inf` for unbounded ends).
    #[arg(long, allow_hyphen_values = true)]
    constraint: Vec<String>,
    /// Samples drawn from the inner region.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Centre knot of the outer ball (default: the line `t ↦ (t, 0, …)`).
    #[arg(long)]
    center: Option<PathBuf>,
    /// Knot whose neighbourhood is witnessed (default: the centre).
    #[arg(long)]
    member: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn membership_tag(m: Membership) -> &'static str {
    match m {
        Membership::In => "in",
        Membership::Out => "out",
        Membership::Undecidable => "undecidable",
    }
}

fn opt_metric(flag: &str, v: &Option<String>) -> Result<Option<MetricTag>, Failure> {
    v.as_deref()
        .map(|s| MetricTag::parse(s).map_err(|e| Failure::usage(format!("{flag}: {e}"))))
        .transpose()
}

fn rational_of(m: &MetricTag, flag: &str) -> Result<Rational, Failure> {
    match m {
        MetricTag::Finite(r) => Ok(r.clone()),
        MetricTag::Inf => Err(Failure::usage(format!("{flag} must be finite"))),
    }
}

fn parse_bound(flag: &str, s: &str) -> Result<Option<Rational>, Failure> {
    match s.trim() {
        "inf" | "-inf" | "+inf" => Ok(None),
        t => parse_rational_arg(flag, t).map(Some),
    }
}

fn parse_constraint(c: &str) -> Result<(Index, OpenInterval), Failure> {
    let parts: Vec<&str> = c.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!("--constraint {c:?}: expected i,j,lo,hi")));
    }
    let num = |s: &str| {
        s.trim().parse::<u32>().map_err(|_| Failure::usage(format!("--constraint {c:?}: bad index {s:?}")))
    };
    let (i, j) = (num(parts[0])?, num(parts[1])?);
    if i == 0 {
        return Err(Failure::usage("--constraint: component indices start at 1"));
    }
    let iv = OpenInterval::new(parse_bound("--constraint", parts[2])?, parse_bound("--constraint", parts[3])?)
        .map_err(|e| Failure::usage(format!("--constraint {c:?}: {e}")))?;
    Ok((Index::new(i, j), iv))
}

fn line_knot(n: u32) -> Result<PolynomialKnot, Failure> {
    Ok(make_knot(n, [(Index::new(1, 1), Scalar::one())])?)
}

fn opt_rational(v: &Option<Rational>) -> Value {
    v.as_ref().map_or(Value::Null, |r| Value::String(rational_string(r)))
}

fn inclusion(a: &WitnessArgs, kind: Comparison, r: &Option<MetricTag>, s: &Option<MetricTag>) -> Result<InclusionWitness, Failure> {
    let n = a.n.unwrap_or(DEFAULT_DIMENSION);
    let center = match &a.center {
        Some(p) => load_knot(p)?,
        None => line_knot(n)?,
    };
    let member = match &a.member {
        Some(p) => load_knot(p)?,
        None => center.clone(),
    };
    let eps = parse_rational_arg("--epsilon", &a.epsilon)?;
    if kind != Comparison::ProductInf && !a.constraint.is_empty() {
        return Err(Failure::usage("--constraint applies to --kind p-inf only"));
    }
    let r = r.clone().unwrap_or(MetricTag::int(2));
    let s = s.clone().unwrap_or(MetricTag::int(1));
    let w = match kind {
        Comparison::ProductInf => {
            let mut u = ProductOpenSpec::new();
            for c in &a.constraint {
                let (idx, iv) = parse_constraint(c)?;
                u = u.constrain(idx, iv);
            }
            inclusion_product_inf(&u, &member)
        }
        Comparison::InfR => inclusion_inf_r(&center, &eps, &member, &r),
        Comparison::RS => inclusion_r_s(&center, &eps, &member, &r, &s),
        Comparison::SBox => inclusion_s_box(&center, &eps, &member, &s),
    };
    Ok(w?)
}

/// Builds the report; the flag says whether every check passed.
pub fn report(a: &WitnessArgs) -> Result<(Value, bool), Failure> {
    let kind = Comparison::parse(&a.kind)
        .ok_or_else(|| Failure::usage(format!("--kind {:?}: expected p-inf, inf-r, r-s or s-box", a.kind)))?;
    let r = opt_metric("--r", &a.r)?;
    let s = opt_metric("--s", &a.s)?;
    let delta = match a.delta.as_deref() {
        Some(d) => Some(parse_rational_arg("--delta", d)?),
        None if kind != Comparison::ProductInf => Some(rat(1, 2)),
        None => None,
    };
    let params = StrictnessParams {
        n: a.n,
        r: r.as_ref().map(|m| rational_of(m, "--r")).transpose()?,
        s: s.as_ref().map(|m| rational_of(m, "--s")).transpose()?,
        delta,
        k: a.k,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let inclusion_section = match inclusion(a, kind, &r, &s) {
        Ok(w) => {
            let (inner_m, outer_m) = w.member_checks();
            let stats = w.check_samples(a.samples, &mut rng)?;
            let pass = inner_m.is_in() && outer_m.is_in() && stats.all_pass();
            json!({
                "delta": rational_string(&w.delta),
                "member": table_text(w.member.table()),
                "inner": w.inner.describe(),
                "outer": w.outer.describe(),
                "member_in_inner": membership_tag(inner_m),
                "member_in_outer": membership_tag(outer_m),
                "samples": {
                    "drawn": stats.drawn,
                    "inner_ok": stats.inner_ok,
                    "outer_ok": stats.outer_ok,
                    "d1_bound_ok": stats.d1_bound_ok,
                },
                "pass": pass,
            })
        }
        Err(f) if f.code == crate::EXIT_DATA => json!({ "error": f.message, "pass": false }),
        Err(f) => return Err(f),
    };

    let inst = strictness_instance(kind, &params)?;
    let check = inst.verify();
    let closed: Vec<Value> = check
        .closed_forms
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "expected": c.expected.to_string(),
                "computed": c.computed.to_string(),
                "pass": c.pass,
            })
        })
        .collect();
    let strictness_section = json!({
        "n": inst.n,
        "k": inst.k,
        "base": table_text(inst.base.table()),
        "member": table_text(inst.member.table()),
        "certified": check.certified,
        "inner": inst.inner.describe(),
        "outer": inst.outer.describe(),
        "member_in_inner": membership_tag(check.inner),
        "member_in_outer": membership_tag(check.outer),
        "closed_forms": closed,
        "pass": check.pass(),
    });

    let pass = inclusion_section["pass"] == Value::Bool(true) && check.pass();
    let doc = json!({
        "kind": kind.tag(),
        "seed": a.seed,
        "parameters": {
            "n": a.n.unwrap_or(DEFAULT_DIMENSION),
            "r": opt_rational(&params.r),
            "s": opt_rational(&params.s),
            "delta": opt_rational(&params.delta),
            "epsilon": rational_string(&parse_rational_arg("--epsilon", &a.epsilon)?),
            "k": a.k,
            "samples": a.samples,
        },
        "inclusion": inclusion_section,
        "strictness": strictness_section,
        "pass": pass,
    });
    Ok((doc, pass))
}

pub fn run(a: &WitnessArgs) -> CmdResult {
    if let Some(n) = a.n {
        if n == 0 {
            return Err(Failure::usage("--n must be at least 1"));
        }
    }
    let (doc, pass) = report(a)?;
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    if let Some(p) = &a.out {
        write_atomic(p, text.as_bytes())?;
    }
    print!("{text}");
    Ok(if pass { 0 } else { 1 })
}
