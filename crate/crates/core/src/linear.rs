//! Linear Padé–Chebyshev approximants from the orthogonality system
//! `∫ (fQ − P) T_k w dx = 0`, `k = 0..=m+n`, plus one normalization row.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::Real;
use crate::error::{Error, Result};
use crate::functions::Target;
use crate::linsolve::{solve, DenseMatrix, SolveReport};
use crate::poly::{cheb_values, QuadratureRule};
use crate::rational::{Basis, NormalizationCondition, Parity, RationalApproximant, Segment};

const SINGULAR_HINT: &str =
    "; the normalization row may be dependent on the others, try another normalization";

/// Everything the linear method needs.
///
/// For the even and odd shapes `m` and `n` count coefficients of `Q(x²)` and
/// `P(x²)`; the odd shape approximates `f(x)/x` and multiplies back by `x`.
pub struct LinearPCProblem<'a, R: Real> {
    pub target: &'a dyn Target<R>,
    pub segment: Segment,
    pub m: usize,
    pub n: usize,
    pub parity: Parity,
    pub normalization: NormalizationCondition<R>,
    pub rule: QuadratureRule<R>,
}

impl<'a, R: Real> LinearPCProblem<'a, R> {
    /// Unit segment, general shape, `b_0 = 1`, default quadrature size.
    pub fn new(target: &'a dyn Target<R>, m: usize, n: usize, unit: &R) -> Result<Self> {
        Ok(LinearPCProblem {
            target,
            segment: Segment::UNIT,
            m,
            n,
            parity: Parity::General,
            normalization: NormalizationCondition::B0,
            rule: QuadratureRule::new(QuadratureRule::<R>::default_size(m, n), unit)?,
        })
    }

    pub fn with_segment(mut self, segment: Segment) -> Self {
        self.segment = segment;
        self
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn with_normalization(mut self, normalization: NormalizationCondition<R>) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_rule(mut self, rule: QuadratureRule<R>) -> Self {
        self.rule = rule;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.parity != Parity::General && self.segment.a != -self.segment.b {
            return Err(Error::InvalidInput(alloc::format!(
                "{} shape needs a segment symmetric about 0, got [{}, {}]",
                self.parity,
                self.segment.a,
                self.segment.b
            )));
        }
        // polynomial part of every integrand must be integrated exactly
        let poly_degree = match self.parity {
            Parity::General => self.n.max(self.m) + self.m + self.n,
            _ => 2 * (self.n.max(self.m) + self.m + self.n),
        };
        if self.rule.s() <= poly_degree / 2 {
            return Err(Error::InvalidInput(alloc::format!(
                "quadrature with {} nodes cannot integrate degree {poly_degree} exactly",
                self.rule.s()
            )));
        }
        Ok(())
    }

    /// The function actually fitted at the unit-interval point `t`.
    fn fitted(&self, t: &R) -> R {
        let x = self.segment.from_unit(t);
        match self.parity {
            Parity::Odd => self.target.value_over_x(&x) * t.lift(self.segment.b),
            _ => self.target.value(&x),
        }
    }
}

/// Homogeneous rows of the orthogonality system, unknowns `a_0..a_n, b_0..b_m`.
pub fn homogeneous_rows<R: Real>(prob: &LinearPCProblem<'_, R>) -> Result<DenseMatrix<R>> {
    prob.validate()?;
    let (m, n) = (prob.m, prob.n);
    let rows = m + n + 1;
    let cols = m + n + 2;
    let values = prob.rule.sample(|t| prob.fitted(t))?;
    let unit = prob.rule.weight().one();
    let step = if prob.parity == Parity::General { 1 } else { 2 };
    let kmax = step * (m + n);
    let pmax = n.max(m);

    let mut acc = vec![unit.zero(); rows * cols];
    for (t, ft) in prob.rule.nodes().iter().zip(&values) {
        let cheb = cheb_values(kmax, t);
        let u = if step == 2 { t.clone() * t } else { t.clone() };
        let mut powers = Vec::with_capacity(pmax + 1);
        let mut p = unit.one();
        for _ in 0..=pmax {
            powers.push(p.clone());
            p = p * &u;
        }
        for k in 0..rows {
            let tk = &cheb[step * k];
            let row = &mut acc[k * cols..(k + 1) * cols];
            for i in 0..=n {
                row[i] += powers[i].clone() * tk;
            }
            let ftk = ft.clone() * tk;
            for j in 0..=m {
                row[n + 1 + j] -= powers[j].clone() * &ftk;
            }
        }
    }
    let w = prob.rule.weight().clone();
    for v in &mut acc {
        *v = v.clone() * &w;
    }
    DenseMatrix::new(rows, cols, acc)
}

/// Appends the normalization row `(λ, μ | 1)`; the other rows get right-hand side 0.
pub fn apply_normalization<R: Real>(
    homogeneous: &DenseMatrix<R>,
    n: usize,
    m: usize,
    cond: &NormalizationCondition<R>,
) -> Result<(DenseMatrix<R>, Vec<R>)> {
    if homogeneous.cols() != n + m + 2 {
        return Err(Error::InvalidInput(alloc::format!(
            "system has {} columns, expected n + m + 2 = {}",
            homogeneous.cols(),
            n + m + 2
        )));
    }
    let unit = homogeneous.get(0, 0).one();
    let (lambda, mu) = cond.expand(n, m, &unit)?;
    let mut a = homogeneous.clone();
    a.push_row(lambda.into_iter().chain(mu).collect())?;
    let mut rhs = vec![unit.zero(); a.rows()];
    rhs[a.rows() - 1] = unit;
    Ok((a, rhs))
}

/// The square system: homogeneous rows plus the normalization row.
pub fn build_system<R: Real>(prob: &LinearPCProblem<'_, R>) -> Result<(DenseMatrix<R>, Vec<R>)> {
    let rows = homogeneous_rows(prob)?;
    apply_normalization(&rows, prob.n, prob.m, &prob.normalization)
}

/// Solves the system and packs the approximant in monomial basis.
pub fn construct<R: Real>(
    prob: &LinearPCProblem<'_, R>,
) -> Result<(RationalApproximant<R>, SolveReport<R>)> {
    let (a, rhs) = build_system(prob)?;
    let report = solve(&a, &rhs).map_err(|e| match e {
        Error::Singular { column, .. } => Error::Singular {
            column,
            hint: SINGULAR_HINT,
        },
        other => other,
    })?;
    let y = &report.solution;
    let numer = y[..=prob.n].to_vec();
    let denom = y[prob.n + 1..].to_vec();
    let approx =
        RationalApproximant::new(numer, denom, Basis::Monomial, prob.parity, prob.segment)?;
    Ok((approx, report))
}
