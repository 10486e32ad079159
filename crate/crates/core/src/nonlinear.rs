//! Nonlinear Padé–Chebyshev approximants via the auxiliary γ system.

use alloc::vec::Vec;

use crate::arith::Real;
use crate::cross::numerator_coeffs;
use crate::error::{Error, Result};
use crate::linsolve::{solve, Condition, DenseMatrix};
use crate::poly::ChebyshevSeries;
use crate::rational::{Basis, Parity, RationalApproximant, Segment};

/// `γ_0..γ_m` with `γ_0 = 1`, and the scale `μ` that makes `b_0 = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSolution<R> {
    pub gamma: Vec<R>,
    pub mu: R,
    /// Condition number of the `m × m` system (unavailable for `m = 0`).
    pub condition: Condition<R>,
}

/// Solves `Σ_j γ_j c_{|k-j|} = 0`, `k = n+1..=n+m`, with `γ_0 = 1`.
pub fn gamma_system<R: Real>(
    c: &ChebyshevSeries<R>,
    m: usize,
    n: usize,
) -> Result<GammaSolution<R>> {
    let c = c.with_convention(true);
    let c = c.coeffs();
    if c.len() < n + m + 1 {
        return Err(Error::InvalidInput(alloc::format!(
            "nonlinear scheme with m = {m}, n = {n} needs {} Chebyshev coefficients, got {}",
            n + m + 1,
            c.len()
        )));
    }
    let unit = c[0].one();
    let mut gamma = alloc::vec![unit.clone()];
    let mut condition = Condition::Unavailable;
    if m > 0 {
        let rows: Vec<Vec<R>> = (n + 1..=n + m)
            .map(|k| (1..=m).map(|j| c[k.abs_diff(j)].clone()).collect())
            .collect();
        let rhs: Vec<R> = (n + 1..=n + m).map(|k| -c[k].clone()).collect();
        let a = DenseMatrix::from_rows(rows)?;
        let report = solve(&a, &rhs).map_err(|e| match e {
            Error::Singular { column, .. } => Error::NonlinearNonexistent(alloc::format!(
                "γ system is singular (zero pivot in column {column})"
            )),
            other => other,
        })?;
        let limit = unit.clone() / unit.epsilon();
        if let Some(cond) = report.condition.value() {
            if *cond > limit {
                return Err(Error::NonlinearNonexistent(alloc::format!(
                    "γ system condition number {:e} exceeds 1/ε",
                    cond.to_f64()
                )));
            }
        }
        condition = report.condition;
        gamma.extend(report.solution);
    }
    let mut sum_sq = unit.zero();
    for g in &gamma {
        sum_sq += g.clone() * g;
    }
    let mu = unit.lift(2.0) / sum_sq;
    Ok(GammaSolution {
        gamma,
        mu,
        condition,
    })
}

/// `b_j = μ Σ_{i=0}^{m-j} γ_i γ_{i+j}`.
pub fn denominator_from_gamma<R: Real>(g: &GammaSolution<R>) -> Vec<R> {
    let m = g.gamma.len() - 1;
    (0..=m)
        .map(|j| {
            let mut acc = g.mu.zero();
            for i in 0..=m - j {
                acc += g.gamma[i].clone() * &g.gamma[i + j];
            }
            acc * &g.mu
        })
        .collect()
}

/// Full approximant in Chebyshev basis on `[-1, 1]`.
pub fn construct<R: Real>(
    c: &ChebyshevSeries<R>,
    m: usize,
    n: usize,
) -> Result<(RationalApproximant<R>, GammaSolution<R>)> {
    construct_on(c, m, n, Segment::UNIT)
}

/// As [`construct`], with coefficients referring to the mapped variable of `segment`.
pub fn construct_on<R: Real>(
    c: &ChebyshevSeries<R>,
    m: usize,
    n: usize,
    segment: Segment,
) -> Result<(RationalApproximant<R>, GammaSolution<R>)> {
    let g = gamma_system(c, m, n)?;
    let b = denominator_from_gamma(&g);
    let a = numerator_coeffs(&b, c, n)?;
    let r = RationalApproximant::new(a, b, Basis::Chebyshev, Parity::General, segment)?;
    Ok((r, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_denominator() {
        let c = ChebyshevSeries::new(vec![1.0, 0.5, 0.25], true);
        let (r, g) = construct(&c, 0, 2).unwrap();
        assert_eq!(g.gamma, vec![1.0]);
        assert_eq!(r.denom(), &[2.0]);
        // Q ≡ 1 under the halved convention, so P is c itself
        assert_eq!(r.numer(), &[1.0, 0.5, 0.25]);
    }

    #[test]
    fn one_gamma_by_hand() {
        let c = ChebyshevSeries::new(vec![2.0, 0.6, 0.09, 0.01], true);
        let g = gamma_system(&c, 1, 1).unwrap();
        let want = -0.09 / 0.6;
        assert!((g.gamma[1] - want).abs() < 1e-16);
        let b = denominator_from_gamma(&g);
        let mu = 2.0 / (1.0 + want * want);
        assert!((b[0] - 2.0).abs() < 1e-15);
        assert!((b[1] - mu * want).abs() < 1e-16);
    }

    #[test]
    fn trivial_gamma() {
        let g = GammaSolution {
            gamma: vec![1.0, 0.0, 0.0],
            mu: 2.0,
            condition: Condition::Unavailable,
        };
        assert_eq!(denominator_from_gamma(&g), vec![2.0, 0.0, 0.0]);
    }

    #[test]
    fn singular_system_means_nonexistence() {
        // all-zero tail makes the γ matrix zero
        let c = ChebyshevSeries::new(vec![1.0, 0.0, 0.0, 0.0, 0.0], true);
        assert!(matches!(
            gamma_system(&c, 2, 1),
            Err(Error::NonlinearNonexistent(_))
        ));
    }
}
