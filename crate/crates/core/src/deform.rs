//! The linearization homotopy on knot space and the contractions of `ℰ`.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::certify::{certify_with, CertifyOptions};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational, Scalar};
use crate::table::{PolynomialKnot, SequencePoint, Verdict};

fn check_unit(s: &Scalar) -> Result<()> {
    let lo_ok = s.cmp_certain(&Scalar::zero()).is_some_and(|o| o != Ordering::Less);
    let hi_ok = s.cmp_certain(&Scalar::one()).is_some_and(|o| o != Ordering::Greater);
    if lo_ok && hi_ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(s.to_exact_string()))
    }
}

/// `H(s, φ)` without the certification step.
pub fn linearize_table(s: &Scalar, phi: &PolynomialKnot) -> Result<PolynomialKnot> {
    check_unit(s)?;
    let table = phi.table().map(|idx, v| &s.pow(idx.power.abs_diff(1)) * v);
    PolynomialKnot::from_table(phi.dimension(), table)
}

/// `H(s, φ) = (s^{|j−1|} φ_ij)`, re-certified.
pub fn linearize_homotopy(s: &Scalar, phi: &PolynomialKnot) -> Result<PolynomialKnot> {
    linearize_with(s, phi, &CertifyOptions::default())
}

pub fn linearize_with(s: &Scalar, phi: &PolynomialKnot, opts: &CertifyOptions) -> Result<PolynomialKnot> {
    check_unit(s)?;
    if !phi.is_certified() {
        return Err(Error::NotCertified);
    }
    let out = linearize_table(s, phi)?;
    let cert = certify_with(&out, opts);
    if !cert.verdict.is_certified() {
        return Err(Error::CertificationFailed { s: s.to_exact_string() });
    }
    Ok(out.with_verdict(cert.verdict))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    Linearize,
    ShiftContract,
    ConeContract,
    /// Shift leg followed by cone leg.
    Contract,
}

impl TraceKind {
    pub fn tag(self) -> &'static str {
        match self {
            TraceKind::Linearize => "linearize",
            TraceKind::ShiftContract => "shift",
            TraceKind::ConeContract => "cone",
            TraceKind::Contract => "contract",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [TraceKind::Linearize, TraceKind::ShiftContract, TraceKind::ConeContract, TraceKind::Contract]
            .into_iter()
            .find(|k| k.tag() == s)
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceState {
    Knot(PolynomialKnot),
    Sequence(SequencePoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSample {
    pub leg: TraceKind,
    pub parameter: Rational,
    pub state: TraceState,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyTrace {
    pub kind: TraceKind,
    pub steps: usize,
    pub source: TraceState,
    pub samples: Vec<TraceSample>,
}

impl HomotopyTrace {
    pub fn leg(&self, kind: TraceKind) -> impl Iterator<Item = &TraceSample> {
        self.samples.iter().filter(move |s| s.leg == kind)
    }

    pub fn last_state(&self) -> Option<&TraceState> {
        self.samples.last().map(|s| &s.state)
    }
}

/// `0, 1/(steps−1), …, 1`.
pub fn uniform_parameters(steps: usize) -> Result<Vec<Rational>> {
    if steps < 2 {
        return Err(Error::Domain(format!("steps must be at least 2 (got {steps})")));
    }
    let d = int(steps as i64 - 1);
    Ok((0..steps).map(|i| int(i as i64) / &d).collect())
}

/// Samples `H(u, φ)` at `steps` uniform parameters, certifying each.
pub fn trace_linearization(phi: &PolynomialKnot, steps: usize) -> Result<HomotopyTrace> {
    trace_linearization_with(phi, steps, &CertifyOptions::default())
}

pub fn trace_linearization_with(phi: &PolynomialKnot, steps: usize, opts: &CertifyOptions) -> Result<HomotopyTrace> {
    if !phi.is_certified() {
        return Err(Error::NotCertified);
    }
    let params = uniform_parameters(steps)?;
    let samples: Vec<TraceSample> = params
        .into_par_iter()
        .map(|u| {
            let knot = linearize_with(&Scalar::Exact(u.clone()), phi, opts)?;
            Ok(TraceSample {
                leg: TraceKind::Linearize,
                parameter: u,
                verdict: knot.verdict().clone(),
                state: TraceState::Knot(knot),
            })
        })
        .collect::<Result<_>>()?;
    Ok(HomotopyTrace { kind: TraceKind::Linearize, steps, source: TraceState::Knot(phi.clone()), samples })
}

fn sequence(entries: Vec<(u32, Scalar)>, s: &Scalar) -> Result<SequencePoint> {
    SequencePoint::new(entries).map_err(|_| Error::Domain(format!("homotopy reached zero at s = {}", s.to_exact_string())))
}

/// `S(s, x)_i = (1−s)x_i + s·x_{i−1}` with `x_0 = 0`.
pub fn shift_homotopy(s: &Scalar, x: &SequencePoint) -> Result<SequencePoint> {
    check_unit(s)?;
    let keep = &Scalar::one() - s;
    let top = x.max_index() + 1;
    let entries = (1..=top).map(|i| (i, &(&keep * &x.get(i)) + &(s * &x.get(i - 1)))).collect();
    sequence(entries, s)
}

/// `T(s, x)_i = (1−s)x_{i−1} + s·a_i` with `a = (1, 0, 0, …)`.
pub fn cone_homotopy(s: &Scalar, x: &SequencePoint) -> Result<SequencePoint> {
    check_unit(s)?;
    let keep = &Scalar::one() - s;
    let top = x.max_index() + 1;
    let entries = (1..=top)
        .map(|i| {
            let a = if i == 1 { s.clone() } else { Scalar::zero() };
            (i, &(&keep * &x.get(i - 1)) + &a)
        })
        .collect();
    sequence(entries, s)
}

/// The basepoint `(1, 0, 0, …)`.
pub fn basepoint() -> SequencePoint {
    SequencePoint::from_ints(&[1]).expect("nonzero")
}

fn leg(x: &SequencePoint, kind: TraceKind, params: &[Rational]) -> Result<Vec<TraceSample>> {
    params
        .iter()
        .map(|u| {
            let s = Scalar::Exact(u.clone());
            let state = match kind {
                TraceKind::ShiftContract => shift_homotopy(&s, x)?,
                _ => cone_homotopy(&s, x)?,
            };
            Ok(TraceSample { leg: kind, parameter: u.clone(), state: TraceState::Sequence(state), verdict: Verdict::Certified })
        })
        .collect()
}

/// The `S` leg followed by the `T` leg, `steps` samples each.
pub fn contract_trace(x: &SequencePoint, steps: usize) -> Result<HomotopyTrace> {
    let params = uniform_parameters(steps)?;
    let mut samples = leg(x, TraceKind::ShiftContract, &params)?;
    samples.extend(leg(x, TraceKind::ConeContract, &params)?);
    Ok(HomotopyTrace { kind: TraceKind::Contract, steps, source: TraceState::Sequence(x.clone()), samples })
}
