//! Error measurement, error approximants and the autocorrection experiments.

use alloc::vec::Vec;

use crate::arith::{Arithmetic, BigReal, Extended, Real};
use crate::cross::{construct as cross_construct, plain_degrees, CrossPCProblem};
use crate::error::{Error, Result};
use crate::functions::{FunctionId, Target};
use crate::linear::{construct as linear_construct, homogeneous_rows, LinearPCProblem};
use crate::plan::{build, coefficient_vector, ConstructionPlan};
use crate::poly::{chebyshev_coeffs_from_values, ChebyshevSeries, QuadratureRule};
use crate::rational::{NormalizationCondition, Parity, RationalApproximant, Segment};

/// Closed subinterval left out of a measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zone {
    pub lo: f64,
    pub hi: f64,
}

impl Zone {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Grid and exclusion settings of a measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    /// Number of equally spaced checkpoints, ends included.
    pub grid: usize,
    /// Points with `|f| < rel_threshold · max|f|` do not enter `δ`.
    pub rel_threshold: f64,
    /// Half-width of an excluded zone, as a fraction of the segment width.
    pub zone_width: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            grid: 2000,
            rel_threshold: 1e-3,
            zone_width: 1e-3,
        }
    }
}

/// `Δ = max|f − R|` and `δ = max|(f − R)/f|` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub abs_error: f64,
    pub rel_error: f64,
    /// Location of the maximum of `|f − R|`.
    pub abs_at: f64,
    pub rel_at: f64,
    /// Checkpoints that entered `Δ`.
    pub grid_points: usize,
    /// Checkpoints left out of `δ` because `|f|` is small there.
    pub rel_skipped: usize,
    pub excluded_zones: Vec<Zone>,
}

/// Measures `R` against `f` on the default grid of `R`'s segment.
pub fn measure<R: Real>(f: &dyn Target<R>, r: &RationalApproximant<R>) -> AccuracyReport {
    measure_with(f, r, &MeasureOptions::default(), &[])
}

/// Measures `R` against `f`, skipping `zones` and any point where `Q` vanishes.
pub fn measure_with<R: Real>(
    f: &dyn Target<R>,
    r: &RationalApproximant<R>,
    opts: &MeasureOptions,
    zones: &[Zone],
) -> AccuracyReport {
    let seg = r.segment();
    let unit = r.numer()[0].one();
    let half_width = opts.zone_width * seg.width();
    let mut excluded: Vec<Zone> = zones.to_vec();
    let mut samples: Vec<(f64, R, R)> = Vec::with_capacity(opts.grid);
    let mut fmax = 0.0f64;
    for x in seg.grid(opts.grid) {
        if excluded.iter().any(|z| z.contains(x)) {
            continue;
        }
        let xb = unit.lift(x);
        let fx = f.value(&xb);
        match r.evaluate(&xb) {
            Ok(rx) => {
                fmax = fmax.max(fx.abs().to_f64());
                samples.push((x, fx, rx));
            }
            Err(_) => excluded.push(Zone {
                lo: (x - half_width).max(seg.a),
                hi: (x + half_width).min(seg.b),
            }),
        }
    }
    let floor = opts.rel_threshold * fmax;
    let mut report = AccuracyReport {
        abs_error: 0.0,
        rel_error: 0.0,
        abs_at: seg.a,
        rel_at: seg.a,
        grid_points: 0,
        rel_skipped: 0,
        excluded_zones: excluded.clone(),
    };
    for (x, fx, rx) in samples {
        if excluded.iter().any(|z| z.contains(x)) {
            continue;
        }
        report.grid_points += 1;
        let e = (fx.clone() - rx).abs();
        let ef = e.to_f64();
        if ef > report.abs_error || ef.is_nan() {
            report.abs_error = ef;
            report.abs_at = x;
        }
        let fa = fx.abs();
        if fa.to_f64() < floor || fa.is_zero() {
            report.rel_skipped += 1;
            continue;
        }
        let rel = (e / fa).to_f64();
        if rel > report.rel_error || rel.is_nan() {
            report.rel_error = rel;
            report.rel_at = x;
        }
    }
    report
}

/// `ΔP/ΔQ` built from two approximants of the same problem.
#[derive(Debug, Clone)]
pub struct ErrorApproximant<R> {
    pub approx: RationalApproximant<R>,
    /// Neighbourhoods of the roots of `ΔQ` in the segment.
    pub zones: Vec<Zone>,
    pub quality: AccuracyReport,
    /// Numerator indices whose differences were set to zero.
    pub dropped: Vec<usize>,
}

impl<R: Real> ErrorApproximant<R> {
    pub fn delta_numer(&self) -> &[R] {
        self.approx.numer()
    }

    pub fn delta_denom(&self) -> &[R] {
        self.approx.denom()
    }
}

fn check_comparable<R: Real>(a: &RationalApproximant<R>, b: &RationalApproximant<R>) -> Result<()> {
    if a.basis() != b.basis()
        || a.parity() != b.parity()
        || a.segment() != b.segment()
        || a.n() != b.n()
        || a.m() != b.m()
    {
        return Err(Error::Mismatch(alloc::format!(
            "({}, {}, {}, {}) vs ({}, {}, {}, {})",
            a.basis(),
            a.parity(),
            a.m(),
            a.n(),
            b.basis(),
            b.parity(),
            b.m(),
            b.n()
        )));
    }
    Ok(())
}

/// Coefficientwise differences `(Δa, Δb)` of `second − first`.
pub fn coefficient_differences<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
) -> Result<(Vec<R>, Vec<R>)> {
    check_comparable(first, second)?;
    let diff =
        |x: &[R], y: &[R]| -> Vec<R> { x.iter().zip(y).map(|(a, b)| b.clone() - a).collect() };
    Ok((
        diff(first.numer(), second.numer()),
        diff(first.denom(), second.denom()),
    ))
}

/// Roots of `ΔQ` on the segment: sign changes and near-zero local minima of `|ΔQ|`.
pub fn denominator_roots<R: Real>(r: &RationalApproximant<R>, samples: usize) -> Vec<f64> {
    let seg = r.segment();
    let unit = r.denom()[0].one();
    let points = seg.grid(samples.max(3));
    let values: Vec<f64> = points
        .iter()
        .map(|x| {
            r.parts(&unit.lift(*x))
                .map(|(_, q)| q.to_f64())
                .unwrap_or(f64::NAN)
        })
        .collect();
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut roots = Vec::new();
    for i in 0..values.len() {
        let v = values[i];
        if v == 0.0 {
            roots.push(points[i]);
            continue;
        }
        if i + 1 < values.len() {
            let w = values[i + 1];
            if v * w < 0.0 {
                let t = v / (v - w);
                roots.push(points[i] + t * (points[i + 1] - points[i]));
                continue;
            }
        }
        if i > 0 && i + 1 < values.len() {
            let (l, c, rr) = (values[i - 1].abs(), v.abs(), values[i + 1].abs());
            if c <= l && c <= rr && c < 1e-3 * peak && values[i - 1] * values[i + 1] > 0.0 {
                roots.push(points[i]);
            }
        }
    }
    roots
}

/// Error approximant of `second` relative to `first`, measured against `f`.
pub fn error_approximant<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
    f: &dyn Target<R>,
    opts: &MeasureOptions,
) -> Result<ErrorApproximant<R>> {
    error_approximant_dropping(first, second, f, opts, &[])
}

/// As [`error_approximant`], with the listed numerator differences zeroed first.
pub fn error_approximant_dropping<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
    f: &dyn Target<R>,
    opts: &MeasureOptions,
    drop_numer: &[usize],
) -> Result<ErrorApproximant<R>> {
    let (mut da, db) = coefficient_differences(first, second)?;
    if db.iter().all(|v| v.is_zero()) {
        return Err(Error::ErrorApproximantUndefined);
    }
    for &i in drop_numer {
        if let Some(v) = da.get_mut(i) {
            *v = v.zero();
        }
    }
    let approx = first.with_coeffs(da, db)?;
    let seg = approx.segment();
    let half_width = opts.zone_width * seg.width();
    let zones: Vec<Zone> = denominator_roots(&approx, 4 * opts.grid + 1)
        .into_iter()
        .map(|x0| Zone {
            lo: (x0 - half_width).max(seg.a),
            hi: (x0 + half_width).min(seg.b),
        })
        .collect();
    let quality = measure_with(f, &approx, opts, &zones);
    Ok(ErrorApproximant {
        approx,
        zones,
        quality,
        dropped: drop_numer.to_vec(),
    })
}

/// `Σ λ_i Δa_i + Σ μ_j Δb_j`, zero when both approximants satisfy the same normalization.
pub fn normalization_defect<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
    cond: &NormalizationCondition<R>,
) -> Result<R> {
    let (da, db) = coefficient_differences(first, second)?;
    cond.apply(&da, &db)
}

/// Leading Chebyshev coefficients of `f·ΔQ − ΔP`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck<R> {
    /// Coefficients `0..count`; the theorem says these vanish.
    pub residuals: Vec<R>,
    /// The following coefficients, for scale.
    pub tail: Vec<R>,
}

impl<R: Real> TheoremCheck<R> {
    pub fn max_residual(&self) -> R {
        let unit = self.residuals[0].zero();
        self.residuals.iter().fold(unit, |m, v| m.max_of(v.abs()))
    }

    pub fn max_tail(&self) -> R {
        let unit = self.residuals[0].zero();
        self.tail.iter().fold(unit, |m, v| m.max_of(v.abs()))
    }
}

/// First `count` Chebyshev coefficients of `f ΔQ − ΔP` (then `extra` more) by
/// a quadrature independent of the construction.
pub fn verify_theorem<R: Real>(
    ea: &RationalApproximant<R>,
    f: &dyn Target<R>,
    count: usize,
    extra: usize,
) -> Result<TheoremCheck<R>> {
    if count == 0 {
        return Err(Error::InvalidInput("nothing to check".into()));
    }
    let unit = ea.denom()[0].one();
    let total = count + extra;
    let rule = QuadratureRule::new(8 * total + 2 * (ea.n() + ea.m()) + 130, &unit)?;
    let seg = ea.segment();
    let mut values = Vec::with_capacity(rule.s());
    for t in rule.nodes() {
        let (dp, dq) = ea.parts_unit(t)?;
        let v = f.value(&seg.from_unit(t)) * dq - dp;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { x: t.to_f64() });
        }
        values.push(v);
    }
    let series = chebyshev_coeffs_from_values(&values, total - 1, &rule);
    let c = series.plain_coeffs();
    Ok(TheoremCheck {
        residuals: c[..count].to_vec(),
        tail: c[count..].to_vec(),
    })
}

/// Two cross-method approximants on `segment` whose coefficient differences form an
/// error pair: one from `c`, one from `c` with every coefficient past `n + m` set to zero.
/// The numerator formula reads no coefficient past `n + m`, so `ΔP` is exactly
/// the numerator of `ΔQ`.
pub fn truncated_pair<R: Real>(
    c: &ChebyshevSeries<R>,
    m: usize,
    n: usize,
    segment: Segment,
) -> Result<(RationalApproximant<R>, RationalApproximant<R>)> {
    let c = c.with_convention(true);
    let first = cross_construct(&CrossPCProblem::new(c.clone(), m, n)?.with_segment(segment))?.0;
    let mut cut = c.coeffs().to_vec();
    for v in cut.iter_mut().skip(n + m + 1) {
        *v = v.zero();
    }
    let second = cross_construct(
        &CrossPCProblem::new(ChebyshevSeries::new(cut, true), m, n)?.with_segment(segment),
    )?
    .0;
    Ok((first, second))
}

/// Rounding scale of the theorem residuals for a pair based on `r`:
/// `ε · (Σ|a_i| + f_max · Σ|b_j|)`.
pub fn theorem_scale<R: Real>(r: &RationalApproximant<R>, f_max: &R) -> R {
    let unit = r.denom()[0].one();
    let sa = r.numer().iter().fold(unit.zero(), |s, v| s + v.abs());
    let sb = r.denom().iter().fold(unit.zero(), |s, v| s + v.abs());
    unit.epsilon() * (sa + f_max.abs() * sb)
}

/// Terms of the uncertainty relation `Δ(P/Q) = δQ · (ΔP/ΔQ − P/Q)` at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub points: Vec<f64>,
    /// `P̃/Q̃ − P/Q`.
    pub lhs: Vec<f64>,
    /// `ΔQ / (Q + ΔQ)`.
    pub delta_q_rel: Vec<f64>,
    /// `ΔP/ΔQ − f`.
    pub err_approx_err: Vec<f64>,
    /// `δQ · (ΔP/ΔQ − f)`.
    pub product: Vec<f64>,
    /// Absolute error scale of `first`.
    pub epsilon: f64,
    /// Points where `lhs` and `product` agree to 10%.
    pub agreeing: usize,
}

pub fn uncertainty<R: Real>(
    first: &RationalApproximant<R>,
    second: &RationalApproximant<R>,
    f: &dyn Target<R>,
    points: &[f64],
) -> Result<UncertaintyReport> {
    let (da, db) = coefficient_differences(first, second)?;
    if db.iter().all(|v| v.is_zero()) {
        return Err(Error::ErrorApproximantUndefined);
    }
    let ea = first.with_coeffs(da, db)?;
    let unit = first.denom()[0].one();
    let epsilon = measure(f, first).abs_error;
    let mut out = UncertaintyReport {
        points: Vec::new(),
        lhs: Vec::new(),
        delta_q_rel: Vec::new(),
        err_approx_err: Vec::new(),
        product: Vec::new(),
        epsilon,
        agreeing: 0,
    };
    for &x in points {
        let xb = unit.lift(x);
        let (p, q) = first.parts(&xb)?;
        let (dp, dq) = ea.parts(&xb)?;
        if q.is_zero() || dq.is_zero() {
            continue;
        }
        let qt = q.clone() + &dq;
        let lhs = (p.clone() + &dp) / &qt - p / &q;
        let dqr = dq.clone() / qt;
        let eae = dp / dq - f.value(&xb);
        let prod = dqr.clone() * &eae;
        let (l, pr) = (lhs.to_f64(), prod.to_f64());
        if (l - pr).abs() <= 0.1 * l.abs().max(pr.abs()) {
            out.agreeing += 1;
        }
        out.points.push(x);
        out.lhs.push(l);
        out.delta_q_rel.push(dqr.to_f64());
        out.err_approx_err.push(eae.to_f64());
        out.product.push(pr);
    }
    Ok(out)
}

/// Precision used to compare constructions made in different arithmetics.
pub fn reference_context(a_bits: usize, b_bits: usize) -> Extended {
    Extended::new((a_bits.max(b_bits) + 64).max(192))
}

/// Outcome of one construction at two precisions.
#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub label_a: alloc::string::String,
    pub label_b: alloc::string::String,
    /// Both approximants, rounded into the reference precision.
    pub first: RationalApproximant<BigReal>,
    pub second: RationalApproximant<BigReal>,
    /// `max_i |ỹ_i − y_i| / |y_i|` over nonzero coefficients.
    pub max_rel_coeff_delta: f64,
    /// `‖ỹ − y‖ / ‖y‖` in the one-norm.
    pub norm_rel_coeff_delta: f64,
    pub accuracy_a: AccuracyReport,
    pub accuracy_b: AccuracyReport,
    /// `max |R̃ − R|` over the grid.
    pub value_delta: f64,
    /// `max |f|` over the grid.
    pub f_scale: f64,
    pub condition_a: Option<f64>,
    pub condition_b: Option<f64>,
}

impl PerturbationReport {
    /// `|Δ_b − Δ_a| / Δ_a`.
    pub fn error_rel_change(&self) -> f64 {
        (self.accuracy_b.abs_error - self.accuracy_a.abs_error).abs() / self.accuracy_a.abs_error
    }

    /// Relative coefficient change over relative value change `max|R̃ − R| / max|f|`.
    pub fn autocorrection_ratio(&self) -> f64 {
        let value_rel = self.value_delta / self.f_scale;
        if value_rel == 0.0 {
            f64::INFINITY
        } else {
            self.max_rel_coeff_delta / value_rel
        }
    }
}

/// Builds `plan` in `a` and in `b` and compares the results at a common high precision.
pub fn perturbation_experiment<A: Arithmetic, B: Arithmetic>(
    plan: &ConstructionPlan,
    a: &A,
    b: &B,
    opts: &MeasureOptions,
) -> Result<PerturbationReport> {
    let ra = build(plan, a)?;
    let rb = build(plan, b)?;
    let reference = reference_context(a.bits(), b.bits());
    let first = ra.approx.convert(&reference);
    let second = rb.approx.convert(&reference);
    let ya = coefficient_vector(&first);
    let yb = coefficient_vector(&second);
    let mut max_rel = 0.0f64;
    let mut num = reference.zero();
    let mut den = reference.zero();
    for (x, y) in ya.iter().zip(&yb) {
        let d = (y.clone() - x).abs();
        num += d.clone();
        den += x.abs();
        if !x.is_zero() {
            max_rel = max_rel.max((d / x.abs()).to_f64());
        }
    }
    let f = &plan.function;
    let accuracy_a = measure_with(f, &first, opts, &[]);
    let accuracy_b = measure_with(f, &second, opts, &[]);
    let mut value_delta = 0.0f64;
    let mut f_scale = 0.0f64;
    for x in first.segment().grid(opts.grid) {
        let xb = reference.from_f64(x);
        if let (Ok(u), Ok(v)) = (first.evaluate(&xb), second.evaluate(&xb)) {
            value_delta = value_delta.max((v - u).abs().to_f64());
        }
        f_scale = f_scale.max(f.eval(&xb).abs().to_f64());
    }
    Ok(PerturbationReport {
        label_a: a.label(),
        label_b: b.label(),
        first,
        second,
        max_rel_coeff_delta: max_rel,
        norm_rel_coeff_delta: (num / den).to_f64(),
        accuracy_a,
        accuracy_b,
        value_delta,
        f_scale,
        condition_a: ra.condition.value().map(Real::to_f64),
        condition_b: rb.condition.value().map(Real::to_f64),
    })
}

/// Rational approximant versus the polynomial partial sum of the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationReport {
    /// Plain degrees `(m, n)` actually used.
    pub degrees: (usize, usize),
    pub partial_sum_degree: usize,
    pub rational_error: f64,
    pub partial_sum_error: f64,
    /// Largest `|ỹ_i − y_i| / max|y|` between the approximants built from `f` and from the partial sum.
    pub rebuild_coeff_delta: f64,
    /// Largest entry difference of the two defining systems over their largest entry.
    pub system_delta: f64,
    pub condition: Option<f64>,
}

/// Builds the plain-form linear approximant equivalent to shape `parity` with
/// degrees `(m, n)` from `f` and from `f̂_{n+2m}`, and compares both with
/// `f̂_{n+2m}` as an approximation. The odd shape fits `f(x)/x`, whose
/// approximant the partial sum does not determine, so the plain form is used.
pub fn deformation_study<A: Arithmetic>(
    id: FunctionId,
    m: usize,
    n: usize,
    parity: Parity,
    ctx: &A,
    opts: &MeasureOptions,
) -> Result<DeformationReport> {
    let (pm, pn) = plain_degrees(parity, m, n);
    let degree = pn + 2 * pm;
    let unit = ctx.one();
    let entry = id.entry();
    if !entry.segment.is_unit() {
        return Err(Error::InvalidInput(
            "the deformation study works on [-1, 1]".into(),
        ));
    }
    let s = QuadratureRule::<A::Real>::default_size(pm, pn).max(2 * degree + 64);
    let rule = QuadratureRule::new(s, &unit)?;
    let full = crate::poly::fourier_chebyshev_coeffs(|t| id.eval(t), degree, &rule)?;
    let partial = ChebyshevSeries::new(full.coeffs().to_vec(), true);

    let from_f = LinearPCProblem::new(&id, pm, pn, &unit)?.with_rule(rule.clone());
    let (ra, report) = linear_construct(&from_f)?;
    let from_partial = LinearPCProblem::new(&partial, pm, pn, &unit)?.with_rule(rule);
    let (rb, _) = linear_construct(&from_partial)?;

    let ha = homogeneous_rows(&from_f)?;
    let hb = homogeneous_rows(&from_partial)?;
    let mut sys_scale = unit.zero();
    let mut sys_delta = unit.zero();
    for (x, y) in ha.entries().iter().zip(hb.entries()) {
        sys_scale = sys_scale.max_of(x.abs());
        sys_delta = sys_delta.max_of((y.clone() - x).abs());
    }

    let ya = coefficient_vector(&ra);
    let yb = coefficient_vector(&rb);
    let scale = ya.iter().fold(unit.zero(), |m, v| m.max_of(v.abs()));
    let mut delta = unit.zero();
    for (x, y) in ya.iter().zip(&yb) {
        delta = delta.max_of((y.clone() - x).abs());
    }
    let rational_error = measure_with(&id, &ra, opts, &[]).abs_error;
    let mut partial_sum_error = 0.0f64;
    for x in Segment::UNIT.grid(opts.grid) {
        let xb = ctx.from_f64(x);
        let e = (partial.eval(&xb)? - id.eval(&xb)).abs().to_f64();
        partial_sum_error = partial_sum_error.max(e);
    }
    Ok(DeformationReport {
        degrees: (pm, pn),
        partial_sum_degree: degree,
        rational_error,
        partial_sum_error,
        rebuild_coeff_delta: (delta / scale).to_f64(),
        system_delta: (sys_delta / sys_scale).to_f64(),
        condition: report.condition.value().map(Real::to_f64),
    })
}

/// Relative coefficient spread `max|y| / min|y|` over nonzero entries, for reports.
pub fn coefficient_range<R: Real>(r: &RationalApproximant<R>) -> (f64, f64) {
    let ys = coefficient_vector(r);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for y in ys {
        let v = y.abs().to_f64();
        if v > 0.0 {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}
