//! Coefficient tables, polynomial knots and finite-support sequences, plus
//! the structural maps between knot space and linear-coefficient space.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::scalar::Scalar;

/// Position `(i, j)`: coefficient of `t^j` in component `i` (`i >= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub component: u32,
    pub power: u32,
}

impl Index {
    pub fn new(component: u32, power: u32) -> Self {
        assert!(component >= 1, "component indices start at 1");
        Index { component, power }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.component, self.power)
    }
}

/// Finite-support map `Index → Scalar`. Exact zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientTable {
    entries: BTreeMap<Index, Scalar>,
}

impl CoefficientTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table, dropping exact zeros. Repeated indices are rejected.
    pub fn from_entries<I: IntoIterator<Item = (Index, Scalar)>>(entries: I) -> Result<Self> {
        let mut table = CoefficientTable::new();
        for (idx, v) in entries {
            if idx.component == 0 {
                return Err(Error::Domain("component indices start at 1".into()));
            }
            if table.entries.contains_key(&idx) {
                return Err(Error::Domain(format!("duplicate coefficient at {idx}")));
            }
            if !v.is_exact_zero() {
                table.entries.insert(idx, v);
            }
        }
        Ok(table)
    }

    pub fn get(&self, idx: &Index) -> Scalar {
        self.entries.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, idx: Index, v: Scalar) {
        if v.is_exact_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, &Scalar)> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = &Index> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }

    pub fn max_component(&self) -> u32 {
        self.entries.keys().map(|i| i.component).max().unwrap_or(0)
    }

    pub fn max_power(&self) -> u32 {
        self.entries.keys().map(|i| i.power).max().unwrap_or(0)
    }

    /// Applies `f` to every stored entry; zero results are dropped.
    pub fn map<F: FnMut(&Index, &Scalar) -> Scalar>(&self, mut f: F) -> CoefficientTable {
        let mut out = CoefficientTable::new();
        for (idx, v) in &self.entries {
            out.set(*idx, f(idx, v));
        }
        out
    }

    /// Entries of component `i` as `(power, coefficient)`.
    pub fn component(&self, i: u32) -> impl Iterator<Item = (u32, &Scalar)> {
        self.entries
            .range(Index { component: i, power: 0 }..=Index { component: i, power: u32::MAX })
            .map(|(k, v)| (k.power, v))
    }

    /// Component `i` as an exact polynomial, if all its coefficients are exact.
    pub fn exact_component(&self, i: u32) -> Option<UPoly> {
        let terms: Vec<_> = self.component(i).collect();
        let deg = terms.iter().map(|t| t.0).max().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![num_traits::Zero::zero(); deg];
        for (j, v) in terms {
            coeffs[j as usize] = v.as_exact()?.clone();
        }
        Some(UPoly::new(coeffs))
    }
}

/// Outcome of embedding certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Uncertified,
    Certified,
    /// `φ(s) = φ(t)` with `s ≠ t`, or `φ'(t) = 0` when `s = t`.
    Refuted { s: Scalar, t: Scalar },
    Inconclusive { depth: u32 },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Uncertified => "uncertified",
            Verdict::Certified => "certified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// A polynomial map `ℝ → ℝⁿ` given by its coefficient table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialKnot {
    table: CoefficientTable,
    dimension: u32,
    verdict: Verdict,
}

/// Builds an uncertified knot in `ℝ^dimension`.
pub fn make_knot<I: IntoIterator<Item = (Index, Scalar)>>(dimension: u32, entries: I) -> Result<PolynomialKnot> {
    PolynomialKnot::from_table(dimension, CoefficientTable::from_entries(entries)?)
}

impl PolynomialKnot {
    pub fn from_table(dimension: u32, table: CoefficientTable) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if let Some(idx) = table.indices().find(|i| i.component > dimension) {
            return Err(Error::IndexOutOfDimension { index: *idx, dimension });
        }
        if table.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(PolynomialKnot { table, dimension, verdict: Verdict::Uncertified })
    }

    /// Convenience constructor from exact integer coefficients `(i, j, c)`.
    pub fn from_int_terms(dimension: u32, terms: &[(u32, u32, i64)]) -> Result<Self> {
        make_knot(dimension, terms.iter().map(|&(i, j, c)| (Index::new(i, j), Scalar::from_int(c))))
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn verdict(&self) -> &Verdict {
        &self.verdict
    }

    pub fn is_certified(&self) -> bool {
        self.verdict.is_certified()
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    /// The same table in a higher ambient dimension.
    pub fn with_dimension(&self, dimension: u32) -> Result<Self> {
        PolynomialKnot::from_table(dimension, self.table.clone()).map(|k| k.with_verdict(self.verdict.clone()))
    }

    pub fn degree(&self) -> u32 {
        self.table.max_power()
    }

    /// `φ(t)`, one scalar per ambient coordinate.
    pub fn evaluate(&self, t: &Scalar) -> Vec<Scalar> {
        (1..=self.dimension)
            .map(|i| {
                let terms: Vec<_> = self.table.component(i).collect();
                let Some(deg) = terms.last().map(|t| t.0) else {
                    return Scalar::zero();
                };
                let mut coeffs = vec![Scalar::zero(); deg as usize + 1];
                for (j, v) in terms {
                    coeffs[j as usize] = v.clone();
                }
                coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
            })
            .collect()
    }

    /// `φ'(t)`.
    pub fn evaluate_derivative(&self, t: &Scalar) -> Vec<Scalar> {
        let d = self.table.map(|_, v| v.clone());
        let mut deriv = CoefficientTable::new();
        for (idx, v) in d.iter() {
            if idx.power > 0 {
                deriv.set(Index::new(idx.component, idx.power - 1), v * &Scalar::from_int(idx.power as i64));
            }
        }
        if deriv.is_empty() {
            return vec![Scalar::zero(); self.dimension as usize];
        }
        PolynomialKnot { table: deriv, dimension: self.dimension, verdict: Verdict::Uncertified }.evaluate(t)
    }
}

/// Nonzero finite-support sequence `(x_1, x_2, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePoint {
    entries: BTreeMap<u32, Scalar>,
}

impl SequencePoint {
    pub fn new<I: IntoIterator<Item = (u32, Scalar)>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if i == 0 {
                return Err(Error::Domain("sequence indices start at 1".into()));
            }
            if map.contains_key(&i) {
                return Err(Error::Domain(format!("duplicate sequence index {i}")));
            }
            if !v.is_exact_zero() {
                map.insert(i, v);
            }
        }
        if !map.values().any(|v| !v.contains_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(SequencePoint { entries: map })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        SequencePoint::new(values.iter().enumerate().map(|(k, &v)| (k as u32 + 1, Scalar::from_int(v))))
    }

    pub fn get(&self, i: u32) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &Scalar)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index carrying a nonzero entry.
    pub fn max_index(&self) -> u32 {
        *self.entries.keys().next_back().expect("sequence points are nonzero")
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }
}

/// `f(φ) = (φ_{i1})_i`, the linear-coefficient row of a certified knot.
pub fn project_linear(knot: &PolynomialKnot) -> Result<SequencePoint> {
    if !knot.is_certified() {
        return Err(Error::NotCertified);
    }
    let row: Vec<_> = knot
        .table
        .iter()
        .filter(|(idx, _)| idx.power == 1)
        .map(|(idx, v)| (idx.component, v.clone()))
        .collect();
    SequencePoint::new(row).map_err(|_| Error::ZeroLinearPart)
}

/// `g(x)`: the linear knot `t ↦ (x_1 t, …, x_n t)` with `n` the top support index.
pub fn embed_linear(x: &SequencePoint) -> PolynomialKnot {
    let mut table = CoefficientTable::new();
    for (&i, v) in x.iter() {
        table.set(Index::new(i, 1), v.clone());
    }
    PolynomialKnot { table, dimension: x.max_index(), verdict: Verdict::Certified }
}

/// `α(x) = (x_1, …, x_n)` for `x` supported in the first `n` indices.
pub fn truncate_to_dim(x: &SequencePoint, n: u32) -> Result<Vec<Scalar>> {
    if let Some((&i, _)) = x.iter().find(|(&i, _)| i > n) {
        return Err(Error::SupportExceedsDim { index: i, dimension: n });
    }
    Ok((1..=n).map(|i| x.get(i)).collect())
}

/// `β(y) = (y_1, …, y_n, 0, 0, …)`.
pub fn extend_from_dim(y: &[Scalar]) -> Result<SequencePoint> {
    SequencePoint::new(y.iter().enumerate().map(|(k, v)| (k as u32 + 1, v.clone())))
}
