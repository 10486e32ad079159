//! Cross-multiplied linear Padé–Chebyshev approximants, computed directly
//! from the Chebyshev coefficients `c_k` of the target.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::Real;
use crate::error::{Error, Result};
use crate::functions::{FunctionId, Target};
use crate::linsolve::{
    solve, solve_rank_deficient, vector_norm, Condition, DenseMatrix, SolveReport,
};
use crate::poly::{economize_taylor, fourier_chebyshev_coeffs, ChebyshevSeries, QuadratureRule};
use crate::rational::{Basis, Parity, RationalApproximant, Segment};

/// Degrees of the plain form equivalent to the even or odd shape with
/// `m + 1` and `n + 1` coefficients in `x²`.
pub fn plain_degrees(parity: Parity, m: usize, n: usize) -> (usize, usize) {
    match parity {
        Parity::General => (m, n),
        Parity::Even => (2 * m, 2 * n),
        Parity::Odd => (2 * m, 2 * n + 1),
    }
}

/// `c_0..c_{len-1}` of `f` on `segment` by Gauss–Chebyshev quadrature with `s` nodes.
pub fn series_from_quadrature<R: Real>(
    target: &dyn Target<R>,
    segment: Segment,
    len: usize,
    s: usize,
    unit: &R,
) -> Result<ChebyshevSeries<R>> {
    if len == 0 {
        return Err(Error::EmptyPolynomial);
    }
    let rule = QuadratureRule::new(s.max(len), unit)?;
    fourier_chebyshev_coeffs(|t| target.value(&segment.from_unit(t)), len - 1, &rule)
}

/// `c_0..c_{len-1}` by economizing the Taylor polynomial of degree `degree`.
/// Coefficients past `degree` are exactly zero for that polynomial.
pub fn series_from_taylor<R: Real>(
    id: FunctionId,
    degree: usize,
    len: usize,
    unit: &R,
) -> Result<ChebyshevSeries<R>> {
    if len == 0 {
        return Err(Error::EmptyPolynomial);
    }
    let taylor = id.taylor_coeffs(degree, unit)?;
    let series = economize_taylor(&taylor, degree.min(len - 1))?;
    let mut c = series.coeffs().to_vec();
    c.resize(len, unit.zero());
    Ok(ChebyshevSeries::new(c, true))
}

/// Input of the cross-multiplied scheme. `c` uses the halved-first convention.
#[derive(Debug, Clone)]
pub struct CrossPCProblem<R> {
    pub c: ChebyshevSeries<R>,
    pub m: usize,
    pub n: usize,
    pub segment: Segment,
}

impl<R: Real> CrossPCProblem<R> {
    pub fn new(c: ChebyshevSeries<R>, m: usize, n: usize) -> Result<Self> {
        let needed = n + 2 * m + 1;
        if c.len() < needed {
            return Err(Error::InvalidInput(alloc::format!(
                "cross scheme with m = {m}, n = {n} needs {needed} Chebyshev coefficients, got {}",
                c.len()
            )));
        }
        Ok(CrossPCProblem {
            c: c.with_convention(true),
            m,
            n,
            segment: Segment::UNIT,
        })
    }

    pub fn with_segment(mut self, segment: Segment) -> Self {
        self.segment = segment;
        self
    }
}

/// `(1/2)·Σ'_j b_j (c_{i+j} + c_{|i-j|})` for one index `i`, without the outer halving.
fn convolve<R: Real>(b: &[R], c: &[R], i: usize) -> R {
    let mut acc = c[0].zero();
    for (j, bj) in b.iter().enumerate() {
        let mut term = bj.clone() * (c[i + j].clone() + &c[i.abs_diff(j)]);
        if j == 0 {
            term /= c[0].lift(2.0);
        }
        acc += term;
    }
    acc
}

/// Rows `i = n+1..=n+m` of the denominator system plus the row `b_0 = 1`.
pub fn denominator_system<R: Real>(prob: &CrossPCProblem<R>) -> (DenseMatrix<R>, Vec<R>) {
    let (m, n) = (prob.m, prob.n);
    let c = prob.c.coeffs();
    let unit = c[0].one();
    let half = unit.lift(0.5);
    let mut rows = Vec::with_capacity(m + 1);
    for i in n + 1..=n + m {
        let row: Vec<R> = (0..=m)
            .map(|j| {
                let v = c[i + j].clone() + &c[i.abs_diff(j)];
                if j == 0 {
                    v * &half
                } else {
                    v
                }
            })
            .collect();
        rows.push(row);
    }
    let mut norm = vec![unit.zero(); m + 1];
    norm[0] = unit.clone();
    rows.push(norm);
    let mut rhs = vec![unit.zero(); m + 1];
    rhs[m] = unit;
    let a = DenseMatrix::from_rows(rows).expect("rows have equal length");
    (a, rhs)
}

/// `a_i = (1/2) Σ'_j b_j (c_{i+j} + c_{|i-j|})`, `i = 0..=n`.
pub fn numerator_coeffs<R: Real>(b: &[R], c: &ChebyshevSeries<R>, n: usize) -> Result<Vec<R>> {
    let c = c.with_convention(true);
    let c = c.coeffs();
    let m = b.len().checked_sub(1).ok_or(Error::EmptyPolynomial)?;
    if c.len() < n + m + 1 {
        return Err(Error::InvalidInput(alloc::format!(
            "numerator needs {} Chebyshev coefficients, got {}",
            n + m + 1,
            c.len()
        )));
    }
    let half = c[0].lift(0.5);
    Ok((0..=n).map(|i| convolve(b, c, i) * &half).collect())
}

/// Denominator from the system, numerator from the convolution formula.
pub fn construct<R: Real>(
    prob: &CrossPCProblem<R>,
) -> Result<(RationalApproximant<R>, SolveReport<R>)> {
    let (a, rhs) = denominator_system(prob);
    let report = match solve(&a, &rhs) {
        Err(Error::Singular { .. }) => {
            // e.g. f a polynomial of degree ≤ n: rows vanish, free b_j are set to zero
            let unit = rhs[0].one();
            let tol = unit.epsilon() * unit.from_i64(64 * (prob.m as i64 + 1));
            let (solution, _) = solve_rank_deficient(&a, &rhs, &tol)?;
            let ay = a.mul_vec(&solution)?;
            let diff: Vec<R> = ay.into_iter().zip(&rhs).map(|(l, r)| l - r).collect();
            SolveReport {
                solution,
                residual_norm: vector_norm(&diff)?,
                condition: Condition::Unavailable,
            }
        }
        other => other?,
    };
    let numer = numerator_coeffs(&report.solution, &prob.c, prob.n)?;
    let approx = RationalApproximant::new(
        numer,
        report.solution.clone(),
        Basis::Chebyshev,
        Parity::General,
        prob.segment,
    )?;
    Ok((approx, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Arithmetic, Extended};

    #[test]
    fn constant_denominator_copies_series() {
        let c = ChebyshevSeries::new(vec![0.3, -0.2, 0.7, 0.1], true);
        let a = numerator_coeffs(&[2.0], &c, 3).unwrap();
        assert_eq!(a, vec![0.3, -0.2, 0.7, 0.1]);
    }

    #[test]
    fn identity_function() {
        let c = ChebyshevSeries::new(vec![0.0, 1.0], true);
        let prob = CrossPCProblem::new(c, 0, 1).unwrap();
        let (r, _) = construct(&prob).unwrap();
        // b_0 = 1 means Q = 1/2 under the halved convention
        assert_eq!(r.numer(), &[0.0, 0.5]);
        assert_eq!(r.evaluate(&0.3).unwrap(), 0.3);
        assert_eq!(
            numerator_coeffs(&[2.0], &prob.c, 1).unwrap(),
            vec![0.0, 1.0]
        );
    }

    #[test]
    fn one_by_zero_by_hand() {
        let c = vec![1.3, 0.4, 0.05];
        let prob = CrossPCProblem::new(ChebyshevSeries::new(c.clone(), true), 1, 0).unwrap();
        let (r, _) = construct(&prob).unwrap();
        let want = -c[1] / (c[2] + c[0]);
        assert_eq!(r.denom()[0], 1.0);
        assert!((r.denom()[1] - want).abs() < 1e-16);
    }

    #[test]
    fn too_short_series_is_rejected() {
        let c = ChebyshevSeries::new(vec![1.0; 4], true);
        assert!(CrossPCProblem::new(c, 2, 1).is_err());
    }

    #[test]
    fn polynomial_is_reproduced() {
        // 1 + x − x³/2 exactly in the Chebyshev basis
        let p = crate::poly::MonomialPoly::new(vec![1.0, 1.0, 0.0, -0.5, 0.0, 0.0, 0.0]);
        let c = crate::poly::monomial_to_cheb(&p);
        let prob = CrossPCProblem::new(c, 1, 4).unwrap();
        let (r, _) = construct(&prob).unwrap();
        for x in Segment::UNIT.grid(201) {
            let want = 1.0 + x - 0.5 * x * x * x;
            assert!((r.evaluate(&x).unwrap() - want).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn truncation_beyond_needed_terms_is_ignored() {
        let ctx = Extended::new(128);
        let unit = ctx.one();
        let c = series_from_quadrature(&FunctionId::Exp, Segment::UNIT, 12, 64, &unit).unwrap();
        let mut changed = c.coeffs().to_vec();
        for v in changed.iter_mut().skip(2 + 2 * 3 + 1) {
            *v = v.clone() * ctx.from_f64(3.0);
        }
        let a = construct(&CrossPCProblem::new(c, 3, 2).unwrap()).unwrap().0;
        let changed = ChebyshevSeries::new(changed, true);
        let b = construct(&CrossPCProblem::new(changed, 3, 2).unwrap())
            .unwrap()
            .0;
        assert_eq!(a, b);
    }

    #[test]
    fn plain_degree_mapping() {
        assert_eq!(plain_degrees(Parity::General, 3, 2), (3, 2));
        assert_eq!(plain_degrees(Parity::Even, 2, 3), (4, 6));
        assert_eq!(plain_degrees(Parity::Odd, 3, 3), (6, 7));
    }
}
