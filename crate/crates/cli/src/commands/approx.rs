use std::fmt::Write as _;

use ratapprox_core::diagnostics::{measure_with, verify_theorem, MeasureOptions};
use ratapprox_core::linsolve::Condition;
use ratapprox_core::plan::{build, ConstructionPlan, Method, SeriesSource};
use ratapprox_core::poly::fourier_chebyshev_coeffs;
use ratapprox_core::{Arithmetic, FunctionId, QuadratureRule, RationalApproximant, Real};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::published::published;
use crate::report::{sci, short, Report, Table};

#[derive(Debug, Clone, Serialize)]
pub struct Coefficients {
    pub basis: String,
    pub shape: String,
    /// Coefficients act on `t ∈ [-1, 1]`, the image of this segment.
    pub segment: (f64, f64),
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorSummary {
    pub abs: String,
    pub rel: String,
    pub abs_at: String,
    pub rel_at: String,
    pub grid_points: usize,
    pub rel_skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub arithmetic: String,
    pub method: String,
    /// Node count of the quadrature, when one was used.
    pub quadrature_nodes: Option<usize>,
    pub series: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub config: RunConfig,
    pub coefficients: Coefficients,
    pub errors: ErrorSummary,
    pub condition: Option<String>,
    /// The leading Chebyshev coefficients the construction drives to zero:
    /// of `fQ − P` for the linear and cross methods, of `f − R` for the nonlinear one.
    pub residuals: Vec<String>,
    pub provenance: Provenance,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub curve: Vec<[String; 4]>,
}

impl ApproxReport {
    pub fn abs_error(&self) -> f64 {
        self.errors.abs.parse().unwrap_or(f64::NAN)
    }

    pub fn rel_error(&self) -> f64 {
        self.errors.rel.parse().unwrap_or(f64::NAN)
    }
}

pub(crate) fn condition_string<R: Real>(
    c: &Condition<R>,
    notes: &mut Vec<String>,
) -> Option<String> {
    match c {
        Condition::Available { value, reliable } => {
            if !reliable {
                notes.push(
                    "condition number exceeds 1/ε; treat it as an order of magnitude only".into(),
                );
            }
            Some(sci(value.to_f64()))
        }
        Condition::Unavailable => {
            notes.push("system was singular; free denominator coefficients set to zero".into());
            None
        }
    }
}

/// Leading Chebyshev coefficients of what the method makes vanish.
pub fn defining_residuals<R: Real>(
    plan: &ConstructionPlan,
    r: &RationalApproximant<R>,
) -> Result<Vec<R>, CliError> {
    let (pm, pn) = plan.plain_degrees();
    let count = pm + pn + 1;
    let f = plan.function;
    match plan.method {
        Method::Nonlinear => {
            let unit = r.denom()[0].one();
            let rule = QuadratureRule::new(8 * count + 64, &unit)?;
            let seg = r.segment();
            let series = fourier_chebyshev_coeffs(
                |t| {
                    let x = seg.from_unit(t);
                    let rx = r.evaluate(&x).unwrap_or_else(|_| unit.lift(f64::NAN));
                    f.eval(&x) - rx
                },
                count - 1,
                &rule,
            )?;
            Ok(series.plain_coeffs())
        }
        Method::Linear | Method::Cross => Ok(verify_theorem(r, &f, count, 0)?.residuals),
    }
}

fn reference_notes(id: FunctionId, cfg: &RunConfig, notes: &mut Vec<String>) {
    let exp = &published().exp_reference;
    if id == FunctionId::Exp && cfg.m == Some(2) && cfg.n == Some(2) {
        notes.push(format!(
            "published reference for exp, m = n = 2: classical Padé error {} at x = 1, linear Padé–Chebyshev {}, best approximation {}",
            sci(exp.classical_pade_2_2_abs_at_1),
            sci(exp.linear_2_2_abs),
            sci(exp.best_2_2_abs)
        ));
    }
}

pub fn run<A: Arithmetic>(cfg: &RunConfig, ctx: &A) -> Result<ApproxReport, CliError> {
    let plan = cfg
        .plan()
        .ok_or_else(|| CliError::Config("approx needs a function and degrees".into()))?;
    let id = plan.function;
    let built = build(&plan, ctx)?;
    let r = &built.approx;
    let opts = MeasureOptions {
        grid: cfg.grid,
        ..MeasureOptions::default()
    };
    let acc = measure_with(&id, r, &opts, &[]);
    let mut notes = cfg.notes.clone();
    let condition = condition_string(&built.condition, &mut notes);
    let residuals = defining_residuals(&plan, r)?;
    reference_notes(id, cfg, &mut notes);

    let (pm, pn) = plan.plain_degrees();
    let quadrature_nodes = match (plan.method, plan.series) {
        (Method::Linear, _) => Some(
            plan.quadrature
                .unwrap_or_else(|| QuadratureRule::<A::Real>::default_size(plan.m, plan.n)),
        ),
        (_, SeriesSource::Quadrature { s }) => Some(
            s.unwrap_or_else(|| QuadratureRule::<A::Real>::default_size(pm, pn))
                .max(plan.series_len()),
        ),
        (_, SeriesSource::Taylor { .. }) => None,
    };
    let series = match (plan.method, plan.series) {
        (Method::Linear, _) => None,
        (_, SeriesSource::Quadrature { .. }) => Some(format!(
            "{} Chebyshev coefficients by quadrature",
            plan.series_len()
        )),
        (_, SeriesSource::Taylor { degree }) => Some(format!(
            "{} Chebyshev coefficients of the degree-{degree} Taylor polynomial",
            plan.series_len()
        )),
    };

    let mut curve = Vec::with_capacity(cfg.grid);
    for x in r.segment().grid(cfg.grid) {
        let xb = ctx.from_f64(x);
        let fx = id.eval(&xb);
        let rx = r.evaluate(&xb)?;
        let d = fx.clone() - &rx;
        curve.push([sci(x), fx.to_string(), rx.to_string(), d.to_string()]);
    }

    Ok(ApproxReport {
        config: cfg.clone(),
        coefficients: Coefficients {
            basis: r.basis().to_string(),
            shape: r.parity().to_string(),
            segment: (r.segment().a, r.segment().b),
            a: r.numer().iter().map(ToString::to_string).collect(),
            b: r.denom().iter().map(ToString::to_string).collect(),
        },
        errors: ErrorSummary {
            abs: sci(acc.abs_error),
            rel: sci(acc.rel_error),
            abs_at: sci(acc.abs_at),
            rel_at: sci(acc.rel_at),
            grid_points: acc.grid_points,
            rel_skipped: acc.rel_skipped,
        },
        condition,
        residuals: residuals.iter().map(ToString::to_string).collect(),
        provenance: Provenance {
            arithmetic: ctx.label(),
            method: plan.method.name().into(),
            quadrature_nodes,
            series,
        },
        notes,
        curve,
    })
}

impl Report for ApproxReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(
            s,
            "{} m={} n={} method={} shape={} segment=[{}, {}] arithmetic={}",
            c.function.as_deref().unwrap_or("?"),
            c.m.unwrap_or(0),
            c.n.unwrap_or(0),
            self.provenance.method,
            self.coefficients.shape,
            self.coefficients.segment.0,
            self.coefficients.segment.1,
            self.provenance.arithmetic
        );
        if let Some(q) = self.provenance.quadrature_nodes {
            let _ = writeln!(s, "quadrature nodes: {q}");
        }
        if let Some(series) = &self.provenance.series {
            let _ = writeln!(s, "series: {series}");
        }
        let _ = writeln!(s, "coefficients ({} basis):", self.coefficients.basis);
        for (i, a) in self.coefficients.a.iter().enumerate() {
            let _ = writeln!(s, "  a{i:<3} {a}");
        }
        for (j, b) in self.coefficients.b.iter().enumerate() {
            let _ = writeln!(s, "  b{j:<3} {b}");
        }
        let abs: f64 = self.abs_error();
        let rel: f64 = self.rel_error();
        let _ = writeln!(
            s,
            "abs error  {}  (at x = {})",
            short(abs),
            self.errors.abs_at
        );
        let _ = writeln!(
            s,
            "rel error  {}  (at x = {})",
            short(rel),
            self.errors.rel_at
        );
        let _ = writeln!(
            s,
            "condition  {}",
            self.condition.as_deref().unwrap_or("unavailable")
        );
        let worst = self
            .residuals
            .iter()
            .filter_map(|v| v.parse::<f64>().ok())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let _ = writeln!(s, "largest defining residual  {}", short(worst));
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec!["x", "f", "R", "f-R"],
            rows: self.curve.iter().map(|r| r.to_vec()).collect(),
        }
    }
}

/// Measured errors of a plan, for callers that only need the numbers.
pub fn errors_of<A: Arithmetic>(
    plan: &ConstructionPlan,
    ctx: &A,
) -> Result<(f64, f64, Option<f64>), CliError> {
    let built = build(plan, ctx)?;
    let acc = measure_with(
        &plan.function,
        &built.approx,
        &MeasureOptions::default(),
        &[],
    );
    Ok((
        acc.abs_error,
        acc.rel_error,
        built.condition.value().map(Real::to_f64),
    ))
}
