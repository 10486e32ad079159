//! First-order coefficient-error model and naive interval-style bounds.
//!
//! With `y = (a, b)` and `ΔR ≈ Σ ∂R/∂y_i Δy_i`, a standard interval method can at
//! best bound `|ΔR|` by `Σ |∂R/∂y_i| |Δy_i|`. Autocorrection makes the signed sum
//! far smaller than that bound.

use alloc::vec::Vec;

use crate::arith::Real;
use crate::diagnostics::{coefficient_differences, Zone};
use crate::error::{Error, Result};
use crate::poly::cheb_values;
use crate::rational::{Basis, Parity, RationalApproximant};

/// Values of the numerator and denominator basis functions at `t ∈ [-1, 1]`.
fn basis_values<R: Real>(r: &RationalApproximant<R>, t: &R) -> (Vec<R>, Vec<R>) {
    let (n, m) = (r.n(), r.m());
    let len = n.max(m);
    let mut raw: Vec<R> = match r.basis() {
        Basis::Chebyshev => {
            let mut v = cheb_values(len, t);
            v[0] = v[0].clone() / t.lift(2.0);
            v
        }
        Basis::Monomial => {
            let u = match r.parity() {
                Parity::General => t.clone(),
                _ => t.clone() * t,
            };
            let mut v = Vec::with_capacity(len + 1);
            let mut p = t.one();
            for _ in 0..=len {
                v.push(p.clone());
                p = p * &u;
            }
            v
        }
    };
    raw.truncate(len + 1);
    let mut numer = raw[..=n].to_vec();
    if r.parity() == Parity::Odd {
        for v in &mut numer {
            *v = v.clone() * t;
        }
    }
    (numer, raw[..=m].to_vec())
}

/// `∂R/∂a_i = φ_i/Q` and `∂R/∂b_j = −P ψ_j / Q²` at `x`, numerator entries first.
pub fn gradient_wrt_coeffs<R: Real>(r: &RationalApproximant<R>, x: &R) -> Result<Vec<R>> {
    let t = r.segment().to_unit(x);
    let (p, q) = r.parts_unit(&t)?;
    if q.is_zero() {
        return Err(Error::DenominatorZero { x: x.to_f64() });
    }
    let (phi, psi) = basis_values(r, &t);
    let q2 = q.clone() * &q;
    let mut g: Vec<R> = phi.into_iter().map(|v| v / &q).collect();
    g.extend(psi.into_iter().map(|v| -(p.clone() * v) / &q2));
    Ok(g)
}

fn check_len<R>(r_len: usize, da: &[R], db: &[R]) -> Result<()> {
    if da.len() + db.len() != r_len {
        return Err(Error::InvalidInput(alloc::format!(
            "expected {r_len} coefficient errors, got {}",
            da.len() + db.len()
        )));
    }
    Ok(())
}

/// `Σ |∂R/∂a_i| |Δa_i| + Σ |∂R/∂b_j| |Δb_j|`.
pub fn naive_bound<R: Real>(r: &RationalApproximant<R>, da: &[R], db: &[R], x: &R) -> Result<R> {
    let g = gradient_wrt_coeffs(r, x)?;
    check_len(g.len(), da, db)?;
    let mut acc = x.zero();
    for (gi, d) in g.iter().zip(da.iter().chain(db)) {
        acc += gi.abs() * d.abs();
    }
    Ok(acc)
}

/// Signed first-order sum `Σ ∂R/∂y_i Δy_i`.
pub fn autocorrection_residual<R: Real>(
    r: &RationalApproximant<R>,
    da: &[R],
    db: &[R],
    x: &R,
) -> Result<R> {
    let g = gradient_wrt_coeffs(r, x)?;
    check_len(g.len(), da, db)?;
    let mut acc = x.zero();
    for (gi, d) in g.iter().zip(da.iter().chain(db)) {
        acc += gi.clone() * d;
    }
    Ok(acc)
}

/// How the pessimism ratio at one point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `naive_bound / |measured_delta|`.
    Measured,
    /// `|measured_delta|` was below the resolution `10·ε·|R|`; the ratio is a lower bound.
    LowerBound,
    /// No coefficient error at all.
    Exact,
}

/// One grid point of the pessimism profile.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalEstimateReport {
    pub x: f64,
    pub naive_bound: f64,
    /// `R̃(x) − R(x)`.
    pub measured_delta: f64,
    pub residual: f64,
    pub pessimism_ratio: Option<f64>,
    pub kind: RatioKind,
    pub gradient: Vec<f64>,
    /// `|residual| ≤ naive_bound`, checked in the working precision.
    pub triangle_ok: bool,
}

/// Per-point reports and the spread of the ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PessimismProfile {
    pub points: Vec<IntervalEstimateReport>,
    pub min: Option<f64>,
    pub median: Option<f64>,
    pub max: Option<f64>,
}

impl PessimismProfile {
    pub fn triangle_holds(&self) -> bool {
        self.points.iter().all(|p| p.triangle_ok)
    }
}

/// Naive bound versus actual change between two constructions of one problem.
pub fn pessimism_profile<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
    grid: &[f64],
    zones: &[Zone],
) -> Result<PessimismProfile> {
    let (da, db) = coefficient_differences(first, second)?;
    let unit = first.denom()[0].one();
    let eps = unit.epsilon();
    let no_error = da.iter().chain(&db).all(|v| v.is_zero());
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        if zones.iter().any(|z| z.contains(x)) {
            continue;
        }
        let xb = unit.lift(x);
        let g = gradient_wrt_coeffs(first, &xb)?;
        let mut bound = unit.zero();
        let mut residual = unit.zero();
        for (gi, d) in g.iter().zip(da.iter().chain(&db)) {
            bound += gi.abs() * d.abs();
            residual += gi.clone() * d;
        }
        let r = first.evaluate(&xb)?;
        let measured = second.evaluate(&xb)? - &r;
        let resolution = unit.lift(10.0) * &eps * r.abs();
        let (ratio, kind) = if no_error {
            (None, RatioKind::Exact)
        } else if measured.abs() < resolution && !resolution.is_zero() {
            (
                Some((bound.clone() / &resolution).to_f64()),
                RatioKind::LowerBound,
            )
        } else if measured.is_zero() {
            (None, RatioKind::LowerBound)
        } else {
            (
                Some((bound.clone() / measured.abs()).to_f64()),
                RatioKind::Measured,
            )
        };
        points.push(IntervalEstimateReport {
            x,
            naive_bound: bound.to_f64(),
            measured_delta: measured.to_f64(),
            residual: residual.to_f64(),
            pessimism_ratio: ratio,
            kind,
            gradient: g.iter().map(Real::to_f64).collect(),
            triangle_ok: residual.abs() <= bound,
        });
    }
    let mut ratios: Vec<f64> = points.iter().filter_map(|p| p.pessimism_ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median = match ratios.len() {
        0 => None,
        k if k % 2 == 1 => Some(ratios[k / 2]),
        k => Some(0.5 * (ratios[k / 2 - 1] + ratios[k / 2])),
    };
    Ok(PessimismProfile {
        min: ratios.first().copied(),
        max: ratios.last().copied(),
        median,
        points,
    })
}
