pub mod approx;
pub mod autocorrect;
pub mod tables;

use std::fmt::Write as _;

use ratapprox_core::functions::FunctionId;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{Report, Table};

/// Runs `$body` with `$ctx` bound to the arithmetic chosen by `$precision`.
#[macro_export]
macro_rules! with_precision {
    ($precision:expr, $ctx:ident => $body:expr) => {
        match $precision {
            $crate::config::Precision::Double => {
                let $ctx = ratapprox_core::Double;
                $body
            }
            $crate::config::Precision::Extended(bits) => {
                let $ctx = ratapprox_core::Extended::new(bits);
                $body
            }
        }
    };
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionRow {
    pub name: &'static str,
    pub description: &'static str,
    pub segment: (f64, f64),
    pub shape: String,
    pub taylor: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionsReport {
    pub config: RunConfig,
    pub functions: Vec<FunctionRow>,
}

pub fn functions(cfg: &RunConfig) -> FunctionsReport {
    let functions = FunctionId::ALL
        .iter()
        .map(|id| {
            let e = id.entry();
            FunctionRow {
                name: e.name,
                description: e.description,
                segment: (e.segment.a, e.segment.b),
                shape: e.parity.to_string(),
                taylor: e.has_taylor,
            }
        })
        .collect();
    FunctionsReport {
        config: cfg.clone(),
        functions,
    }
}

impl Report for FunctionsReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:<14} {:<12} {:<8} taylor",
            "name", "function", "segment", "shape"
        );
        for f in &self.functions {
            let _ = writeln!(
                s,
                "{:<10} {:<14} {:<12} {:<8} {}",
                f.name,
                f.description,
                format!("[{}, {}]", f.segment.0, f.segment.1),
                f.shape,
                if f.taylor { "yes" } else { "no" }
            );
        }
        s
    }

    fn table(&self) -> Table {
        Table {
            header: vec!["name", "description", "a", "b", "shape", "taylor"],
            rows: self
                .functions
                .iter()
                .map(|f| {
                    vec![
                        f.name.to_string(),
                        f.description.to_string(),
                        f.segment.0.to_string(),
                        f.segment.1.to_string(),
                        f.shape.clone(),
                        f.taylor.to_string(),
                    ]
                })
                .collect(),
        }
    }
}
