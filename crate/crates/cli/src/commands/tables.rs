use std::fmt::Write as _;

use ratapprox_core::diagnostics::{error_approximant, measure, MeasureOptions};
use ratapprox_core::functions::lookup;
use ratapprox_core::plan::{build, Construction, ConstructionPlan, Method, SeriesSource};
use ratapprox_core::{Arithmetic, FunctionId, Real};
use serde::Serialize;

use crate::config::RunConfig;
use crate::published::{fold_ratio, published};
use crate::report::{opt_sci, opt_short, sci, short, Report, Table};

/// Allowed factor between computed and published errors of the linear table.
pub const TABLE1_FACTOR: f64 = 3.0;
/// Allowed factor for the nonlinear table.
pub const TABLE2_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub function: String,
    pub m: usize,
    pub n: usize,
    pub shape: String,
    pub abs: Option<String>,
    pub rel: Option<String>,
    pub condition: Option<String>,
    pub published_abs: String,
    pub published_rel: String,
    pub published_rel_min: String,
    /// Computed over published, folded to be at least 1.
    pub abs_ratio: Option<String>,
    pub rel_ratio: Option<String>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub config: RunConfig,
    pub source: String,
    pub factor: f64,
    pub rows: Vec<Table1Row>,
    pub passed: usize,
    pub total: usize,
    pub seconds: f64,
}

fn table1_row<A: Arithmetic>(row: &crate::published::LinearRow, ctx: &A) -> Table1Row {
    let mut out = Table1Row {
        function: row.function.clone(),
        m: row.m,
        n: row.n,
        shape: String::new(),
        abs: None,
        rel: None,
        condition: None,
        published_abs: sci(row.abs),
        published_rel: sci(row.rel),
        published_rel_min: sci(row.rel_min),
        abs_ratio: None,
        rel_ratio: None,
        pass: false,
        error: None,
    };
    let entry = match lookup(&row.function) {
        Ok(e) => e,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.shape = entry.parity.to_string();
    let plan = ConstructionPlan::new(entry.id, row.m, row.n);
    match build(&plan, ctx) {
        Ok(c) => {
            let acc = measure(&entry.id, &c.approx);
            let ra = fold_ratio(acc.abs_error, row.abs);
            let rr = fold_ratio(acc.rel_error, row.rel);
            out.abs = Some(sci(acc.abs_error));
            out.rel = Some(sci(acc.rel_error));
            out.condition = opt_sci(c.condition.value().map(Real::to_f64));
            out.abs_ratio = Some(sci(ra));
            out.rel_ratio = Some(sci(rr));
            out.pass = ra <= TABLE1_FACTOR && rr <= TABLE1_FACTOR;
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Every row of the linear table; rows run on separate threads and are
/// collected in table order.
pub fn table1<A: Arithmetic>(cfg: &RunConfig, ctx: &A) -> Table1Report {
    let started = std::time::Instant::now();
    let table = &published().linear_table;
    let rows: Vec<Table1Row> = std::thread::scope(|scope| {
        let handles: Vec<_> = table
            .rows
            .iter()
            .map(|row| scope.spawn(move || table1_row(row, ctx)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("row thread panicked"))
            .collect()
    });
    let passed = rows.iter().filter(|r| r.pass).count();
    Table1Report {
        config: cfg.clone(),
        source: table.source.clone(),
        factor: TABLE1_FACTOR,
        total: rows.len(),
        passed,
        rows,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn parse(s: &Option<String>) -> Option<f64> {
    s.as_ref().and_then(|v| v.parse().ok())
}

impl Report for Table1Report {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.source);
        let _ = writeln!(
            s,
            "{:<8} {:>2} {:>2} {:<7} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9} {:>6} {:>6}  status",
            "function",
            "m",
            "n",
            "shape",
            "abs",
            "pub abs",
            "rel",
            "pub rel",
            "rel min",
            "cond",
            "x abs",
            "x rel"
        );
        for r in &self.rows {
            let status = match (&r.error, r.pass) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "ok".into(),
                (None, false) => format!("outside x{}", self.factor),
            };
            let _ =
                writeln!(
                s,
                "{:<8} {:>2} {:>2} {:<7} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9} {:>6} {:>6}  {}",
                r.function,
                r.m,
                r.n,
                r.shape,
                opt_short(parse(&r.abs)),
                short(r.published_abs.parse().unwrap_or(f64::NAN)),
                opt_short(parse(&r.rel)),
                short(r.published_rel.parse().unwrap_or(f64::NAN)),
                short(r.published_rel_min.parse().unwrap_or(f64::NAN)),
                parse(&r.condition).map(|c| format!("{c:.1e}")).unwrap_or_else(|| "-".into()),
                parse(&r.abs_ratio).map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into()),
                parse(&r.rel_ratio).map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into()),
                status
            );
        }
        let _ = writeln!(
            s,
            "{} of {} rows within x{} ({}, {:.1} s)",
            self.passed, self.total, self.factor, self.config.precision, self.seconds
        );
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec![
                "function",
                "m",
                "n",
                "shape",
                "abs",
                "rel",
                "condition",
                "published_abs",
                "published_rel",
                "published_rel_min",
                "abs_ratio",
                "rel_ratio",
                "pass",
                "error",
            ],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.function.clone(),
                        r.m.to_string(),
                        r.n.to_string(),
                        r.shape.clone(),
                        r.abs.clone().unwrap_or_default(),
                        r.rel.clone().unwrap_or_default(),
                        r.condition.clone().unwrap_or_default(),
                        r.published_abs.clone(),
                        r.published_rel.clone(),
                        r.published_rel_min.clone(),
                        r.abs_ratio.clone().unwrap_or_default(),
                        r.rel_ratio.clone().unwrap_or_default(),
                        r.pass.to_string(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        }
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub taylor_degree: usize,
    pub abs: Option<String>,
    pub condition: Option<String>,
    pub published_abs: String,
    pub published_cond: String,
    pub abs_ratio: Option<String>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Pair {
    pub first: usize,
    pub second: usize,
    /// Error of the error approximant outside the zones around the roots of `ΔQ`.
    pub error_approximant_abs: Option<String>,
    pub excluded_zones: Vec<(f64, f64)>,
    pub published: String,
    pub ratio: Option<String>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Report {
    pub config: RunConfig,
    pub source: String,
    pub factor: f64,
    pub rows: Vec<Table2Row>,
    pub pairs: Vec<Table2Pair>,
    pub nonincreasing: bool,
    pub best_abs: String,
    pub seconds: f64,
}

type Built<R> = (usize, Result<Construction<R>, String>);

fn tan_plan(degree: usize) -> ConstructionPlan {
    let t = &published().nonlinear_tan_table;
    ConstructionPlan::new(FunctionId::TanPi4, t.m, t.n)
        .with_method(Method::Nonlinear)
        .with_series(SeriesSource::Taylor { degree })
}

/// Nonlinear tan(πx/4) from Taylor polynomials of increasing degree, plus the
/// error approximants of the published pairs.
pub fn table2<A: Arithmetic>(cfg: &RunConfig, ctx: &A) -> Table2Report {
    let started = std::time::Instant::now();
    let table = &published().nonlinear_tan_table;
    let f = FunctionId::TanPi4;
    let built: Vec<Built<A::Real>> = std::thread::scope(|scope| {
        let handles: Vec<_> = table
            .rows
            .iter()
            .map(|row| {
                let degree = row.taylor_degree;
                scope.spawn(move || {
                    (
                        degree,
                        build(&tan_plan(degree), ctx).map_err(|e| e.to_string()),
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("row thread panicked"))
            .collect()
    });

    let mut rows = Vec::with_capacity(table.rows.len());
    let mut errors = Vec::new();
    for (row, (_, result)) in table.rows.iter().zip(&built) {
        let mut out = Table2Row {
            taylor_degree: row.taylor_degree,
            abs: None,
            condition: None,
            published_abs: sci(row.abs),
            published_cond: sci(row.cond),
            abs_ratio: None,
            pass: false,
            error: None,
        };
        match result {
            Ok(c) => {
                let acc = measure(&f, &c.approx);
                let ratio = fold_ratio(acc.abs_error, row.abs);
                out.abs = Some(sci(acc.abs_error));
                out.condition = opt_sci(c.condition.value().map(Real::to_f64));
                out.abs_ratio = Some(sci(ratio));
                out.pass = ratio <= TABLE2_FACTOR;
                errors.push(Some(acc.abs_error));
            }
            Err(e) => {
                out.error = Some(e.clone());
                errors.push(None);
            }
        }
        rows.push(out);
    }
    let nonincreasing = errors.iter().all(Option::is_some)
        && errors.windows(2).all(|w| w[1].unwrap() <= w[0].unwrap());

    let find = |degree: usize| {
        built
            .iter()
            .find(|(d, _)| *d == degree)
            .and_then(|(_, r)| r.as_ref().ok())
    };
    let pairs = table
        .pairs
        .iter()
        .map(|p| {
            let mut out = Table2Pair {
                first: p.first,
                second: p.second,
                error_approximant_abs: None,
                excluded_zones: Vec::new(),
                published: sci(p.error_approximant_abs),
                ratio: None,
                pass: false,
                error: None,
            };
            match (find(p.first), find(p.second)) {
                (Some(a), Some(b)) => {
                    match error_approximant(&a.approx, &b.approx, &f, &MeasureOptions::default()) {
                        Ok(ea) => {
                            let q = ea.quality.abs_error;
                            let ratio = fold_ratio(q, p.error_approximant_abs);
                            out.error_approximant_abs = Some(sci(q));
                            out.excluded_zones = ea.zones.iter().map(|z| (z.lo, z.hi)).collect();
                            out.ratio = Some(sci(ratio));
                            out.pass = ratio <= TABLE2_FACTOR;
                        }
                        Err(e) => out.error = Some(e.to_string()),
                    }
                }
                _ => out.error = Some("a member of the pair failed to build".into()),
            }
            out
        })
        .collect();

    Table2Report {
        config: cfg.clone(),
        source: table.source.clone(),
        factor: TABLE2_FACTOR,
        rows,
        pairs,
        nonincreasing,
        best_abs: sci(table.best_abs),
        seconds: started.elapsed().as_secs_f64(),
    }
}

impl Report for Table2Report {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.source);
        let _ = writeln!(
            s,
            "{:>3} {:>10} {:>10} {:>9} {:>9} {:>6}  status",
            "N", "abs", "pub abs", "cond", "pub cond", "x abs"
        );
        for r in &self.rows {
            let status = match (&r.error, r.pass) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "ok".into(),
                (None, false) => format!("outside x{}", self.factor),
            };
            let _ = writeln!(
                s,
                "{:>3} {:>10} {:>10} {:>9} {:>9} {:>6}  {}",
                r.taylor_degree,
                opt_short(parse(&r.abs)),
                short(r.published_abs.parse().unwrap_or(f64::NAN)),
                parse(&r.condition)
                    .map(|c| format!("{c:.1e}"))
                    .unwrap_or_else(|| "-".into()),
                format!(
                    "{:.1e}",
                    r.published_cond.parse::<f64>().unwrap_or(f64::NAN)
                ),
                parse(&r.abs_ratio)
                    .map(|v| format!("{v:.2}"))
                    .unwrap_or_else(|| "-".into()),
                status
            );
        }
        let _ = writeln!(
            s,
            "abs nonincreasing in N: {}",
            if self.nonincreasing { "yes" } else { "no" }
        );
        let _ = writeln!(
            s,
            "error approximants of pairs (zones around roots of dQ excluded):"
        );
        for p in &self.pairs {
            let status = match (&p.error, p.pass) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "ok".into(),
                (None, false) => format!("outside x{}", self.factor),
            };
            let _ = writeln!(
                s,
                "  N={:>2} vs N={:>2}: {:>10}  published {:>10}  {}",
                p.first,
                p.second,
                opt_short(parse(&p.error_approximant_abs)),
                short(p.published.parse().unwrap_or(f64::NAN)),
                status
            );
        }
        let _ = writeln!(s, "best possible abs error (published): {}", self.best_abs);
        let _ = writeln!(s, "({}, {:.1} s)", self.config.precision, self.seconds);
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec![
                "N",
                "abs",
                "condition",
                "published_abs",
                "published_cond",
                "abs_ratio",
                "pass",
                "error",
            ],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.taylor_degree.to_string(),
                        r.abs.clone().unwrap_or_default(),
                        r.condition.clone().unwrap_or_default(),
                        r.published_abs.clone(),
                        r.published_cond.clone(),
                        r.abs_ratio.clone().unwrap_or_default(),
                        r.pass.to_string(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        }
    }

    fn ok(&self) -> bool {
        self.nonincreasing && self.rows.iter().all(|r| r.pass) && self.pairs.iter().all(|p| p.pass)
    }
}
