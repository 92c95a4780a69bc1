//! Assembly of selector runs into versioned JSON reports and flat CSV rows
//! for plotting. The same run configuration always produces byte-identical
//! output; CSV and JSON carry the same f64 values (CSV as 17-significant-digit
//! decimals, JSON as shortest exact round-trip decimals).

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundReport};
use crate::error::{Error, Result};
use crate::gia_select::{main_theorem_select, GiaTrace};
use crate::matlin::io::format_f64;
use crate::matlin::{Matrix, SelectionMethod, SubsetSelection, Weights};
use crate::mss_select::interlacing_greedy_select;
use crate::oracle::{best_subset_capped, Objective, OracleResult};
use crate::volume_select::volume_exchange_select;

/// Top-level schema tag of every JSON report.
pub const SCHEMA: &str = "restricted-inv/1";

/// The selectors runnable from a report request, in fixed output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    Volume,
    Gia,
    Rank,
    Mss,
}

impl Selector {
    pub const ALL: [Selector; 4] = [
        Selector::Volume,
        Selector::Gia,
        Selector::Rank,
        Selector::Mss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Selector::Volume => "volume",
            Selector::Gia => "gia",
            Selector::Rank => "rank",
            Selector::Mss => "mss",
        }
    }
}

impl std::str::FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "volume" => Ok(Selector::Volume),
            "gia" => Ok(Selector::Gia),
            "rank" => Ok(Selector::Rank),
            "mss" => Ok(Selector::Mss),
            other => Err(Error::BadParams(format!("unknown selector '{other}'"))),
        }
    }
}

/// Spectral summary of the input matrix included in every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub schatten2: f64,
    pub srank: f64,
    pub srank4: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One selector's result: either a certified selection or the error that
/// stopped it, never both.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectorOutcome {
    pub selector: Selector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SubsetSelection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Tracked constant of the rank pipeline, when the selector carries one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_impl: Option<f64>,
    /// Rank-objective minimum attached to the tracked constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_value: Option<f64>,
}

/// Complete result of one `select` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub matrix: MatrixMeta,
    pub k: usize,
    pub selectors: Vec<SelectorOutcome>,
    pub bounds: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gia_trace: Option<GiaTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
}

pub fn matrix_meta(a: &Matrix, generator: Option<String>, seed: Option<u64>) -> MatrixMeta {
    MatrixMeta {
        n: a.nrows(),
        m: a.ncols(),
        rank: a.rank(),
        schatten2: a.schatten_norm(2.0),
        srank: a.stable_rank(f64::INFINITY).unwrap_or(f64::NAN),
        srank4: a.stable_rank(4.0).unwrap_or(f64::NAN),
        generator,
        seed,
    }
}

fn run_one(
    a: &Matrix,
    k: usize,
    selector: Selector,
    weights: &Weights,
) -> (SelectorOutcome, Option<GiaTrace>) {
    let mut out = SelectorOutcome {
        selector,
        selection: None,
        error: None,
        c_impl: None,
        bound_value: None,
    };
    let mut trace = None;
    let res: Result<SubsetSelection> = match selector {
        Selector::Volume => volume_exchange_select(a, k, weights).map(|tau| {
            let mut cert = a.restrict_certificate(&tau);
            cert.method = SelectionMethod::Volume;
            cert
        }),
        Selector::Gia => crate::gia_select::giannopoulos_select(a, k).map(|(sel, tr)| {
            trace = Some(tr);
            sel
        }),
        Selector::Rank => main_theorem_select(a, k, Some(weights)).map(|res| {
            out.c_impl = Some(res.c_impl);
            out.bound_value = Some(res.bound_value);
            trace = Some(res.trace);
            res.selection
        }),
        Selector::Mss => interlacing_greedy_select(a, k),
    };
    match res {
        Ok(sel) => out.selection = Some(sel),
        Err(e) => out.error = Some(e.to_string()),
    }
    (out, trace)
}

/// Runs the requested selectors, the bound calculators, and optionally the
/// exhaustive oracle, and assembles the versioned report.
pub fn run_select(
    a: &Matrix,
    k: usize,
    selectors: &[Selector],
    weights: Option<&Weights>,
    with_oracle: bool,
    oracle_cap: u64,
    meta: MatrixMeta,
) -> Result<RunReport> {
    if k == 0 || k > a.ncols() {
        return Err(Error::BadParams(format!(
            "k = {k} out of range 1..={}",
            a.ncols()
        )));
    }
    let uniform;
    let weights = match weights {
        Some(w) => {
            if w.len() != a.ncols() {
                return Err(Error::BadParams(format!(
                    "weights length {} != m = {}",
                    w.len(),
                    a.ncols()
                )));
            }
            w
        }
        None => {
            uniform = Weights::uniform(a.ncols());
            &uniform
        }
    };
    let mut outcomes = Vec::new();
    let mut gia_trace = None;
    for &sel in selectors {
        let (outcome, trace) = run_one(a, k, sel, weights);
        outcomes.push(outcome);
        // prefer the rank pipeline's trace, else the plain pipeline's
        if trace.is_some() && (gia_trace.is_none() || sel == Selector::Rank) {
            gia_trace = trace;
        }
    }
    let oracle = if with_oracle {
        Some(best_subset_capped(a, k, Objective::Smin, oracle_cap)?)
    } else {
        None
    };
    Ok(RunReport {
        schema: SCHEMA.into(),
        matrix: meta,
        k,
        selectors: outcomes,
        bounds: bound_report(a, k),
        gia_trace,
        oracle,
    })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat plotting CSV: one row per selector (plus the oracle row when
    /// present). σ is semicolon-joined inside one field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("selector,k,sigma,smin,inv_norm,c_impl,bound_value,error\n");
        let fmt_opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        for o in &self.selectors {
            let (sigma, smin, inv_norm) = match &o.selection {
                Some(sel) => (
                    sel.sigma
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    format_f64(sel.smin),
                    format_f64(sel.inv_norm),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                o.selector.name(),
                self.k,
                sigma,
                smin,
                inv_norm,
                fmt_opt(o.c_impl),
                fmt_opt(o.bound_value),
                o.error.clone().unwrap_or_default().replace(',', ";"),
            ));
        }
        if let Some(orc) = &self.oracle {
            out.push_str(&format!(
                "oracle,{},{},{},{},,,\n",
                self.k,
                orc.best_sigma
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                format_f64(orc.best_value),
                format_f64(1.0 / orc.best_value),
            ));
        }
        out
    }
}

impl BoundReport {
    /// One row per bound, values as 17-significant-digit decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,k,applicable,value,needs_impl_constant,reason\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.name,
                self.k,
                e.applicable,
                e.value.map(format_f64).unwrap_or_default(),
                e.needs_impl_constant,
                e.reason.clone().unwrap_or_default().replace(',', ";"),
            ));
        }
        out
    }
}
