//! Precision-independent description of one construction.

use alloc::vec::Vec;

use crate::arith::{Arithmetic, Real};
use crate::cross::{plain_degrees, series_from_quadrature, series_from_taylor, CrossPCProblem};
use crate::error::{Error, Result};
use crate::functions::FunctionId;
use crate::linear::{construct as linear_construct, LinearPCProblem};
use crate::linsolve::Condition;
use crate::nonlinear::{construct_on, GammaSolution};
use crate::poly::{ChebyshevSeries, QuadratureRule};
use crate::rational::{NormalizationCondition, Parity, RationalApproximant, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Quadrature-based orthogonality system with a normalization row.
    #[default]
    Linear,
    /// Cross-multiplied scheme from Chebyshev coefficients.
    Cross,
    /// Nonlinear scheme through the γ system.
    Nonlinear,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Linear => "linear",
            Method::Cross => "cross",
            Method::Nonlinear => "nonlinear",
        }
    }
}

/// Where the cross and nonlinear methods take their Chebyshev coefficients from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesSource {
    /// Gauss–Chebyshev quadrature; `None` picks the default node count.
    Quadrature { s: Option<usize> },
    /// Economized Taylor polynomial of the given degree.
    Taylor { degree: usize },
}

impl Default for SeriesSource {
    fn default() -> Self {
        SeriesSource::Quadrature { s: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionPlan {
    pub function: FunctionId,
    pub m: usize,
    pub n: usize,
    pub parity: Parity,
    pub segment: Segment,
    pub method: Method,
    pub normalization: NormalizationCondition<f64>,
    /// Node count of the linear method; `None` picks the default.
    pub quadrature: Option<usize>,
    pub series: SeriesSource,
}

impl ConstructionPlan {
    /// Linear method with the catalog's segment and parity, `b_0 = 1`.
    pub fn new(function: FunctionId, m: usize, n: usize) -> Self {
        let entry = function.entry();
        ConstructionPlan {
            function,
            m,
            n,
            parity: entry.parity,
            segment: entry.segment,
            method: Method::Linear,
            normalization: NormalizationCondition::B0,
            quadrature: None,
            series: SeriesSource::default(),
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn with_segment(mut self, segment: Segment) -> Self {
        self.segment = segment;
        self
    }

    pub fn with_normalization(mut self, normalization: NormalizationCondition<f64>) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_quadrature(mut self, s: usize) -> Self {
        self.quadrature = Some(s);
        self
    }

    pub fn with_series(mut self, series: SeriesSource) -> Self {
        self.series = series;
        self
    }

    /// Degrees `(m, n)` of the plain form the plan produces.
    pub fn plain_degrees(&self) -> (usize, usize) {
        plain_degrees(self.parity, self.m, self.n)
    }

    /// Number of Chebyshev coefficients the series-based methods consume.
    pub fn series_len(&self) -> usize {
        let (m, n) = self.plain_degrees();
        match self.method {
            Method::Linear => 0,
            Method::Cross => n + 2 * m + 1,
            Method::Nonlinear => n + m + 1,
        }
    }
}

/// Output of [`build`].
#[derive(Debug, Clone)]
pub struct Construction<R> {
    pub approx: RationalApproximant<R>,
    pub condition: Condition<R>,
    pub residual_norm: Option<R>,
    pub series: Option<ChebyshevSeries<R>>,
    pub gamma: Option<GammaSolution<R>>,
}

fn lift_normalization<R: Real>(
    cond: &NormalizationCondition<f64>,
    unit: &R,
) -> NormalizationCondition<R> {
    match cond {
        NormalizationCondition::B0 => NormalizationCondition::B0,
        NormalizationCondition::BM => NormalizationCondition::BM,
        NormalizationCondition::AN => NormalizationCondition::AN,
        NormalizationCondition::Custom { lambda, mu } => NormalizationCondition::Custom {
            lambda: lambda.iter().map(|v| unit.lift(*v)).collect(),
            mu: mu.iter().map(|v| unit.lift(*v)).collect(),
        },
    }
}

/// The Chebyshev coefficients a series-based plan consumes.
pub fn plan_series<A: Arithmetic>(
    plan: &ConstructionPlan,
    ctx: &A,
) -> Result<ChebyshevSeries<A::Real>> {
    let unit = ctx.one();
    let len = plan.series_len().max(1);
    match plan.series {
        SeriesSource::Quadrature { s } => {
            let (m, n) = plan.plain_degrees();
            let s = s.unwrap_or_else(|| QuadratureRule::<A::Real>::default_size(m, n));
            series_from_quadrature(&plan.function, plan.segment, len, s, &unit)
        }
        SeriesSource::Taylor { degree } => {
            if !plan.segment.is_unit() {
                return Err(Error::InvalidInput(
                    "Taylor coefficients are only available on [-1, 1]".into(),
                ));
            }
            series_from_taylor(plan.function, degree, len, &unit)
        }
    }
}

/// Runs the plan in the arithmetic `ctx`.
pub fn build<A: Arithmetic>(plan: &ConstructionPlan, ctx: &A) -> Result<Construction<A::Real>> {
    let unit = ctx.one();
    match plan.method {
        Method::Linear => {
            let mut prob = LinearPCProblem::new(&plan.function, plan.m, plan.n, &unit)?
                .with_segment(plan.segment)
                .with_parity(plan.parity)
                .with_normalization(lift_normalization(&plan.normalization, &unit));
            if let Some(s) = plan.quadrature {
                prob = prob.with_rule(QuadratureRule::new(s, &unit)?);
            }
            let (approx, report) = linear_construct(&prob)?;
            Ok(Construction {
                approx,
                condition: report.condition,
                residual_norm: Some(report.residual_norm),
                series: None,
                gamma: None,
            })
        }
        Method::Cross | Method::Nonlinear => {
            // the nonlinear scheme has no free normalization, so the tag is ignored there
            if plan.method == Method::Cross && plan.normalization != NormalizationCondition::B0 {
                return Err(Error::InvalidInput(alloc::format!(
                    "the {} method fixes b_0 and takes no other normalization",
                    plan.method.name()
                )));
            }
            let (m, n) = plan.plain_degrees();
            let c = plan_series(plan, ctx)?;
            if plan.method == Method::Cross {
                let prob = CrossPCProblem::new(c.clone(), m, n)?.with_segment(plan.segment);
                let (approx, report) = crate::cross::construct(&prob)?;
                Ok(Construction {
                    approx,
                    condition: report.condition,
                    residual_norm: Some(report.residual_norm),
                    series: Some(c),
                    gamma: None,
                })
            } else {
                let (approx, g) = construct_on(&c, m, n, plan.segment)?;
                Ok(Construction {
                    approx,
                    condition: g.condition.clone(),
                    residual_norm: None,
                    series: Some(c),
                    gamma: Some(g),
                })
            }
        }
    }
}

/// All numerator then denominator coefficients, as one vector.
pub fn coefficient_vector<R: Real>(r: &RationalApproximant<R>) -> Vec<R> {
    r.numer().iter().chain(r.denom()).cloned().collect()
}
