//! Brute-force grid search for embedding failures. Never certifies.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::scalar::{int, rat, Rational};
use crate::table::PolynomialKnot;

pub const COLLISION_TOL: f64 = 1e-9;
pub const DERIVATIVE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub bound: Rational,
    pub resolution: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    NoFailureFound,
    Refuted { s: Rational, t: Rational },
}

impl OracleOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, OracleOutcome::Refuted { .. })
    }
}

/// Components with interval coefficients replaced by their midpoints.
fn midpoint_components(knot: &PolynomialKnot) -> Vec<UPoly> {
    (1..=knot.dimension())
        .map(|i| {
            let terms: Vec<_> = knot.table().component(i).collect();
            let len = terms.last().map_or(0, |t| t.0 as usize + 1);
            let mut coeffs = vec![Rational::zero(); len];
            for (j, v) in terms {
                coeffs[j as usize] = v.mid();
            }
            UPoly::new(coeffs)
        })
        .collect()
}

/// `1 +` the Cauchy bound of the highest-degree component.
pub fn default_bound(knot: &PolynomialKnot) -> Rational {
    let comps = midpoint_components(knot);
    let mut top: Option<&UPoly> = None;
    for p in comps.iter().filter(|p| !p.is_zero()) {
        if top.is_none_or(|q| p.degree() > q.degree()) {
            top = Some(p);
        }
    }
    top.map_or_else(|| int(2), |p| p.cauchy_bound() + int(1))
}

pub fn default_grid(knot: &PolynomialKnot, resolution: usize) -> Grid {
    Grid { bound: default_bound(knot), resolution }
}

fn norm_below(values: &[Rational], tol: f64) -> bool {
    let approx: f64 = values.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum::<f64>().sqrt();
    if approx > 1e3 * tol {
        return false;
    }
    let sq: Rational = values.iter().map(|v| v * v).sum();
    let tol = Rational::from_float(tol).expect("finite");
    sq < &tol * &tol
}

/// Searches an `m × m` grid over `[−B, B]²` for coincident images and a
/// grid of `m` points for vanishing derivatives.
pub fn sampling_oracle(knot: &PolynomialKnot, grid: &Grid) -> Result<OracleOutcome> {
    let m = grid.resolution;
    if m < 2 {
        return Err(Error::OutOfRange(format!("grid resolution {m} < 2")));
    }
    if !grid.bound.is_positive() {
        return Err(Error::OutOfRange("grid bound must be positive".into()));
    }
    let comps = midpoint_components(knot);
    let derivs: Vec<UPoly> = comps.iter().map(UPoly::derivative).collect();
    let step = &grid.bound * int(2) / int(m as i64 - 1);
    let points: Vec<Rational> = (0..m).map(|k| -&grid.bound + &step * int(k as i64)).collect();

    let images: Vec<Vec<Rational>> = points.iter().map(|t| comps.iter().map(|p| p.eval(t)).collect()).collect();
    let floats: Vec<Vec<f64>> =
        images.iter().map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()).collect();
    let sep = rat(1, 1_000_000_000);
    for a in 0..m {
        for b in a + 1..m {
            if (&points[b] - &points[a]) <= sep {
                continue;
            }
            let approx: f64 = floats[a].iter().zip(&floats[b]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            if approx > 1e3 * COLLISION_TOL + 1e-12 * floats[a].iter().map(|x| x.abs()).sum::<f64>() {
                continue;
            }
            let diff: Vec<Rational> = images[a].iter().zip(&images[b]).map(|(x, y)| x - y).collect();
            if norm_below(&diff, COLLISION_TOL) {
                return Ok(OracleOutcome::Refuted { s: points[a].clone(), t: points[b].clone() });
            }
        }
    }

    for t in &points {
        let d: Vec<Rational> = derivs.iter().map(|p| p.eval(t)).collect();
        if norm_below(&d, DERIVATIVE_TOL) {
            return Ok(OracleOutcome::Refuted { s: t.clone(), t: t.clone() });
        }
    }
    Ok(OracleOutcome::NoFailureFound)
}
