use std::fmt::Write as _;

use ratapprox_core::cross::series_from_quadrature;
use ratapprox_core::diagnostics::{
    coefficient_differences, error_approximant_dropping, perturbation_experiment, theorem_scale,
    truncated_pair, verify_theorem, ErrorApproximant, MeasureOptions, Zone,
};
use ratapprox_core::interval::{pessimism_profile, RatioKind};
use ratapprox_core::plan::{ConstructionPlan, Method};
use ratapprox_core::{
    Arithmetic, Basis, BigReal, Double, Error, Extended, FunctionId, Parity, QuadratureRule,
    RationalApproximant, Real, Segment,
};
use serde::Serialize;

use crate::config::{Precision, RunConfig};
use crate::error::CliError;
use crate::published::{fold_ratio, published, CoefficientSet};
use crate::report::{opt_sci, opt_short, sci, short, Report, Table};

/// Coefficient-to-value ratio at and above which the verdict reports autocorrection.
pub const SIGNIFICANT_RATIO: f64 = 1e3;
/// Theorem residuals must stay below this multiple of the rounding scale.
pub const THEOREM_FACTOR: f64 = 1e3;
/// Points of the pessimism grid.
pub const PESSIMISM_GRID: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct ErrorApproximantSummary {
    /// Numerator differences zeroed before forming `ΔP/ΔQ`.
    pub dropped: Vec<usize>,
    pub abs: String,
    pub rel: String,
    /// Neighbourhoods of the real roots of `ΔQ`, left out of the measurement.
    pub excluded_zones: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremSummary {
    pub max_residual: String,
    pub max_tail: String,
    /// `ε (Σ|a_i| + max|f| Σ|b_j|)` at the working precision.
    pub scale: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PessimismPoint {
    pub x: f64,
    pub naive_bound: String,
    pub measured_delta: String,
    pub first_order: String,
    pub ratio: Option<String>,
    pub kind: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct PessimismSummary {
    pub min: Option<String>,
    pub median: Option<String>,
    pub max: Option<String>,
    /// `|first-order change| ≤ naive bound` at every point.
    pub triangle_holds: bool,
    pub points: Vec<PessimismPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PublishedPairSummary {
    pub source: String,
    pub abs_first: String,
    pub published_abs: String,
    pub error_approximant: Option<ErrorApproximantSummary>,
    pub published_error_approximant_abs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutocorrectReport {
    pub config: RunConfig,
    pub first: String,
    pub second: String,
    pub abs_error_first: String,
    pub abs_error_second: String,
    /// `|Δ_second − Δ_first| / Δ_first`.
    pub error_rel_change: String,
    pub condition_first: Option<String>,
    pub condition_second: Option<String>,
    pub max_rel_coeff_delta: String,
    pub norm_rel_coeff_delta: String,
    /// `max|R̃ − R| / max|f|`.
    pub value_rel_change: String,
    /// Relative coefficient change over relative value change.
    pub autocorrection_ratio: String,
    pub error_approximant: Option<ErrorApproximantSummary>,
    pub error_approximant_a0_dropped: Option<ErrorApproximantSummary>,
    /// Theorem residuals of the two constructions above.
    pub theorem_on_pair: Option<TheoremSummary>,
    /// Theorem residuals of a cross-method pair from full and truncated coefficients.
    pub theorem_on_truncated_pair: Option<TheoremSummary>,
    pub pessimism: Option<PessimismSummary>,
    pub published_pair: Option<PublishedPairSummary>,
    pub verdict: String,
    pub notes: Vec<String>,
}

impl AutocorrectReport {
    pub fn ratio(&self) -> f64 {
        self.autocorrection_ratio.parse().unwrap_or(f64::NAN)
    }
}

fn summarize(ea: &ErrorApproximant<BigReal>) -> ErrorApproximantSummary {
    ErrorApproximantSummary {
        dropped: ea.dropped.clone(),
        abs: sci(ea.quality.abs_error),
        rel: sci(ea.quality.rel_error),
        excluded_zones: zone_pairs(&ea.zones),
    }
}

fn zone_pairs(zones: &[Zone]) -> Vec<(f64, f64)> {
    zones.iter().map(|z| (z.lo, z.hi)).collect()
}

fn f_max(f: FunctionId, seg: Segment, unit: &BigReal) -> BigReal {
    seg.grid(2000)
        .into_iter()
        .fold(unit.zero(), |m, x| m.max_of(f.eval(&unit.lift(x)).abs()))
}

fn theorem_summary<R: Real>(
    pair: (&RationalApproximant<R>, &RationalApproximant<R>),
    f: FunctionId,
    count: usize,
    scale: f64,
) -> Result<TheoremSummary, Error> {
    let (da, db) = coefficient_differences(pair.0, pair.1)?;
    let ea = pair.0.with_coeffs(da, db)?;
    let chk = verify_theorem(&ea, &f, count, 3)?;
    let residual = chk.max_residual().to_f64();
    Ok(TheoremSummary {
        max_residual: sci(residual),
        max_tail: sci(chk.max_tail().to_f64()),
        scale: sci(scale),
        pass: residual <= THEOREM_FACTOR * scale,
    })
}

fn parse_set(
    set: &CoefficientSet,
    ctx: &Extended,
) -> Result<RationalApproximant<BigReal>, CliError> {
    let parse = |v: &Vec<String>| -> Result<Vec<BigReal>, CliError> {
        v.iter()
            .map(|s| {
                ctx.parse(s)
                    .ok_or_else(|| CliError::Io(format!("bad coefficient {s:?} in data file")))
            })
            .collect()
    };
    Ok(RationalApproximant::new(
        parse(&set.a)?,
        parse(&set.b)?,
        Basis::Monomial,
        Parity::Even,
        Segment::UNIT,
    )?)
}

fn published_pair(ctx: &Extended, opts: &MeasureOptions) -> Result<PublishedPairSummary, CliError> {
    let pair = &published().cos_pair;
    let first = parse_set(&pair.first, ctx)?;
    let second = parse_set(&pair.second, ctx)?;
    let f = FunctionId::CosPi4;
    let abs_first = ratapprox_core::diagnostics::measure_with(&f, &first, opts, &[]).abs_error;
    let ea = error_approximant_dropping(&first, &second, &f, opts, &[0]).ok();
    Ok(PublishedPairSummary {
        source: pair.source.clone(),
        abs_first: sci(abs_first),
        published_abs: sci(pair.abs),
        error_approximant: ea.as_ref().map(summarize),
        published_error_approximant_abs: sci(pair.error_approximant_abs),
    })
}

fn kind_name(k: RatioKind) -> &'static str {
    match k {
        RatioKind::Measured => "measured",
        RatioKind::LowerBound => "lower_bound",
        RatioKind::Exact => "exact",
    }
}

/// Builds `cfg`'s problem in double and in extended precision and collects
/// every autocorrection diagnostic of the pair.
pub fn run(cfg: &RunConfig) -> Result<AutocorrectReport, CliError> {
    let plan: ConstructionPlan = cfg
        .plan()
        .ok_or_else(|| CliError::Config("autocorrect needs a function and degrees".into()))?;
    let bits = match cfg.precision {
        Precision::Extended(bits) => bits,
        Precision::Double => 128,
    };
    let high = Extended::new(bits);
    let opts = MeasureOptions {
        grid: cfg.grid,
        ..MeasureOptions::default()
    };
    let mut notes = cfg.notes.clone();
    if cfg.precision == Precision::Double {
        notes
            .push("the second construction always uses extended precision; 128 bits chosen".into());
    }
    let f = plan.function;
    let rep = perturbation_experiment(&plan, &Double, &high, &opts)?;
    let (first, second) = (&rep.first, &rep.second);
    let unit = first.denom()[0].one();

    let (da, db) = coefficient_differences(first, second)?;
    let error_approximant = match error_approximant_dropping(first, second, &f, &opts, &[]) {
        Ok(ea) => Some(ea),
        Err(Error::ErrorApproximantUndefined) => {
            notes.push("the denominators agree exactly, so ΔP/ΔQ is undefined".into());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let a0_dropped = if error_approximant.is_some() && db[0].is_zero() && !da[0].is_zero() {
        error_approximant_dropping(first, second, &f, &opts, &[0]).ok()
    } else {
        None
    };

    let seg = first.segment();
    let fm = f_max(f, seg, &unit);
    let (pm, pn) = plan.plain_degrees();
    let count = pm + pn + 1;
    let double_scale = theorem_scale(&first.convert(&Double), &fm.to_f64());
    let theorem_on_pair = error_approximant
        .as_ref()
        .and_then(|_| theorem_summary((first, second), f, count, double_scale).ok());

    let theorem_on_truncated_pair = if pm == 0 {
        notes.push(
            "m = 0: both denominators of the truncated pair are 1, so the theorem is vacuous"
                .into(),
        );
        None
    } else {
        let work = high.one();
        let len = pn + 2 * pm + 1;
        let s = QuadratureRule::<BigReal>::default_size(pm, pn).max(2 * len);
        let c = series_from_quadrature(&f, seg, len, s, &work)?;
        let summary = truncated_pair(&c, pm, pn, seg).and_then(|(a, b)| {
            let scale = theorem_scale(&a, &high.convert(&fm)).to_f64();
            theorem_summary((&a, &b), f, pn + 1, scale)
        });
        match summary {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("truncated pair: {e}"));
                None
            }
        }
    };

    let zones = error_approximant
        .as_ref()
        .map(|e| e.zones.clone())
        .unwrap_or_default();
    let grid = seg.grid(PESSIMISM_GRID);
    let pessimism = match pessimism_profile(first, second, &grid, &zones) {
        Ok(p) => Some(PessimismSummary {
            min: opt_sci(p.min),
            median: opt_sci(p.median),
            max: opt_sci(p.max),
            triangle_holds: p.triangle_holds(),
            points: p
                .points
                .iter()
                .map(|q| PessimismPoint {
                    x: q.x,
                    naive_bound: sci(q.naive_bound),
                    measured_delta: sci(q.measured_delta),
                    first_order: sci(q.residual),
                    ratio: opt_sci(q.pessimism_ratio),
                    kind: kind_name(q.kind),
                })
                .collect(),
        }),
        Err(e) => {
            notes.push(format!("pessimism profile: {e}"));
            None
        }
    };

    let is_published_problem = f == FunctionId::CosPi4
        && plan.m == 2
        && plan.n == 3
        && plan.parity == Parity::Even
        && plan.segment == Segment::UNIT;
    let published_pair = if is_published_problem {
        Some(published_pair(&Extended::new(bits.max(128)), &opts)?)
    } else {
        None
    };

    let ratio = rep.autocorrection_ratio();
    let verdict = if ratio >= SIGNIFICANT_RATIO {
        format!(
            "significant error autocorrection (ratio {} ≥ {SIGNIFICANT_RATIO:e})",
            short(ratio)
        )
    } else {
        format!(
            "no significant autocorrection (ratio {} < {SIGNIFICANT_RATIO:e})",
            short(ratio)
        )
    };

    Ok(AutocorrectReport {
        config: cfg.clone(),
        first: rep.label_a.clone(),
        second: rep.label_b.clone(),
        abs_error_first: sci(rep.accuracy_a.abs_error),
        abs_error_second: sci(rep.accuracy_b.abs_error),
        error_rel_change: sci(rep.error_rel_change()),
        condition_first: opt_sci(rep.condition_a),
        condition_second: opt_sci(rep.condition_b),
        max_rel_coeff_delta: sci(rep.max_rel_coeff_delta),
        norm_rel_coeff_delta: sci(rep.norm_rel_coeff_delta),
        value_rel_change: sci(rep.value_delta / rep.f_scale),
        autocorrection_ratio: sci(ratio),
        error_approximant: error_approximant.as_ref().map(summarize),
        error_approximant_a0_dropped: a0_dropped.as_ref().map(summarize),
        theorem_on_pair,
        theorem_on_truncated_pair,
        pessimism,
        published_pair,
        verdict,
        notes,
    })
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

fn onum(s: &Option<String>) -> Option<f64> {
    s.as_deref().map(num)
}

impl Report for AutocorrectReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(
            s,
            "{} m={} n={} method={}: {} versus {}",
            c.function.as_deref().unwrap_or("?"),
            c.m.unwrap_or(0),
            c.n.unwrap_or(0),
            c.method.map(|m| Method::from(m).name()).unwrap_or("?"),
            self.first,
            self.second
        );
        let _ = writeln!(
            s,
            "abs error          {} / {}  (relative change {})",
            short(num(&self.abs_error_first)),
            short(num(&self.abs_error_second)),
            short(num(&self.error_rel_change))
        );
        let _ = writeln!(
            s,
            "condition          {} / {}",
            opt_short(onum(&self.condition_first)),
            opt_short(onum(&self.condition_second))
        );
        let _ = writeln!(
            s,
            "coefficient change {} max relative, {} normwise",
            short(num(&self.max_rel_coeff_delta)),
            short(num(&self.norm_rel_coeff_delta))
        );
        let _ = writeln!(
            s,
            "value change       {} relative to max|f|",
            short(num(&self.value_rel_change))
        );
        let _ = writeln!(s, "ratio              {}", short(self.ratio()));
        let ea_line = |label: &str, e: &ErrorApproximantSummary| {
            format!(
                "{label} abs {} rel {} ({} zones excluded)\n",
                short(num(&e.abs)),
                short(num(&e.rel)),
                e.excluded_zones.len()
            )
        };
        match &self.error_approximant {
            Some(e) => s.push_str(&ea_line("error approximant ΔP/ΔQ vs f:", e)),
            None => s.push_str("error approximant ΔP/ΔQ: undefined\n"),
        }
        if let Some(e) = &self.error_approximant_a0_dropped {
            s.push_str(&ea_line("  with Δa_0 dropped:", e));
        }
        if let Some(t) = &self.theorem_on_pair {
            let _ = writeln!(
                s,
                "theorem, this pair:      residual {}  tail {}  double scale {}",
                short(num(&t.max_residual)),
                short(num(&t.max_tail)),
                short(num(&t.scale))
            );
        }
        if let Some(t) = &self.theorem_on_truncated_pair {
            let _ = writeln!(
                s,
                "theorem, truncated pair: residual {}  tail {}  scale {}  {}",
                short(num(&t.max_residual)),
                short(num(&t.max_tail)),
                short(num(&t.scale)),
                if t.pass { "ok" } else { "FAILED" }
            );
        }
        if let Some(p) = &self.pessimism {
            let _ = writeln!(
                s,
                "naive bound / actual change over {} points: min {} median {} max {}; triangle inequality {}",
                p.points.len(),
                opt_short(onum(&p.min)),
                opt_short(onum(&p.median)),
                opt_short(onum(&p.max)),
                if p.triangle_holds { "holds" } else { "VIOLATED" }
            );
        }
        if let Some(p) = &self.published_pair {
            let _ = writeln!(
                s,
                "published pair: abs error {} (published {}), error approximant without Δa_0 {} (published {})",
                short(num(&p.abs_first)),
                short(num(&p.published_abs)),
                p.error_approximant
                    .as_ref()
                    .map(|e| short(num(&e.abs)))
                    .unwrap_or_else(|| "undefined".into()),
                short(num(&p.published_error_approximant_abs))
            );
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec![
                "x",
                "naive_bound",
                "measured_delta",
                "first_order",
                "ratio",
                "kind",
            ],
            rows: self
                .pessimism
                .iter()
                .flat_map(|p| &p.points)
                .map(|q| {
                    vec![
                        sci(q.x),
                        q.naive_bound.clone(),
                        q.measured_delta.clone(),
                        q.first_order.clone(),
                        q.ratio.clone().unwrap_or_default(),
                        q.kind.to_string(),
                    ]
                })
                .collect(),
        }
    }
}

/// Published-pair error approximant against the stored value, folded to at least 1.
pub fn published_pair_ratio(r: &AutocorrectReport) -> Option<f64> {
    let p = r.published_pair.as_ref()?;
    let got = num(&p.error_approximant.as_ref()?.abs);
    Some(fold_ratio(got, num(&p.published_error_approximant_abs)))
}
