//! Command-line front end: matrix generation, selector execution, bound
//! reports, exhaustive oracle runs, and the property verification suite.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric
//! failure. Module errors are emitted as one-line JSON on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resinv::bounds::bound_report;
use resinv::error::Error;
use resinv::gen::generate;
use resinv::gia_select::{giannopoulos_select, main_theorem_select, sauer_shelah_extract, SignSet};
use resinv::matlin::{Matrix, Weights};
use resinv::mss_select::{barrier_bound, g_poly};
use resinv::oracle::{best_subset_capped, Objective, SUBSET_CAP};
use resinv::report::{matrix_meta, run_select, MatrixMeta, Selector, SCHEMA};
use resinv::volume_select::{verify_local_max, volume_exchange_select, DEFAULT_DELTA};

#[derive(Parser)]
#[command(
    name = "resinv",
    version,
    about = "Certified restricted-invertibility column selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Matrix source shared by all matrix-consuming subcommands.
#[derive(Args)]
struct MatrixSource {
    /// Matrix file (.json for the JSON form, anything else parsed as CSV)
    #[arg(long, conflicts_with = "gen")]
    matrix: Option<PathBuf>,
    /// Generator kind: identity | harmonic | circulant-sqrt | gaussian | unit-columns
    #[arg(long)]
    gen: Option<String>,
    /// Rows for randomized generators
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Columns for generators
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// PRNG seed; fully determines generator output
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MatrixSource {
    fn load(&self) -> Result<(Matrix, MatrixMeta), Error> {
        if let Some(path) = &self.matrix {
            let text = std::fs::read_to_string(path)?;
            let a = if path.extension().is_some_and(|e| e == "json") {
                Matrix::from_json(&text)?
            } else {
                Matrix::from_csv(&text)?
            };
            let meta = matrix_meta(&a, None, None);
            return Ok((a, meta));
        }
        match &self.gen {
            Some(kind) => {
                let a = generate(kind, self.n, self.m, self.seed)?;
                let meta = matrix_meta(&a, Some(kind.clone()), Some(self.seed));
                Ok((a, meta))
            }
            None => Err(Error::BadParams(
                "either --matrix or --gen is required".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleObjective {
    Smin,
    Volume,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a matrix and write it as CSV (or JSON with a .json --out)
    Gen {
        /// Generator kind
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run selectors and write the versioned report
    Select {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        k: usize,
        /// Weights file: one positive number per line
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Comma-separated subset of volume,gia,rank,mss
        #[arg(long, value_delimiter = ',')]
        selectors: Option<Vec<String>>,
        /// Also run the exhaustive oracle
        #[arg(long)]
        oracle: bool,
        /// Output directory for report.json, report.csv, bounds.csv;
        /// JSON goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cap on enumerated subsets for the oracle
        #[arg(long, default_value_t = SUBSET_CAP)]
        subset_cap: u64,
    },
    /// Evaluate every closed-form bound at (A, k)
    Bounds {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        k: usize,
        /// Emit the one-row-per-bound CSV instead of JSON
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive best subset of cardinality k
    Oracle {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OracleObjective::Smin)]
        objective: OracleObjective,
        #[arg(long, default_value_t = SUBSET_CAP)]
        subset_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite and report per-invariant pass/fail
    Verify {
        /// Largest matrix dimension exercised
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        /// Number of seeded instances per invariant
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Negative control: flip a sign inside the trace-identity check
        #[arg(long)]
        fault_injection: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BadParams(_)
        | Error::UnknownGenerator(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::TooLarge { .. }
        | Error::TooManySubsets { .. }
        | Error::KTooLarge { .. }
        | Error::RankTooSmall { .. }
        | Error::DimTooLarge { .. } => 2,
        _ => 3,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            m,
            seed,
            out,
        } => {
            let a = generate(&kind, n, m, seed)?;
            let as_json = out
                .as_deref()
                .is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            let text = if as_json {
                a.to_json() + "\n"
            } else {
                a.to_csv()
            };
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::Select {
            source,
            k,
            weights,
            selectors,
            oracle,
            out,
            subset_cap,
        } => {
            let (a, meta) = source.load()?;
            let weights = match weights {
                Some(path) => Some(parse_weights(&path)?),
                None => None,
            };
            let selectors: Vec<Selector> = match selectors {
                Some(names) => names
                    .iter()
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()?,
                None => Selector::ALL.to_vec(),
            };
            let rep = run_select(
                &a,
                k,
                &selectors,
                weights.as_ref(),
                oracle,
                subset_cap,
                meta,
            )?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("report.json"), rep.to_json())?;
                    std::fs::write(dir.join("report.csv"), rep.to_csv())?;
                    std::fs::write(dir.join("bounds.csv"), rep.bounds.to_csv())?;
                }
                None => print!("{}", rep.to_json()),
            }
            Ok(0)
        }
        Command::Bounds {
            source,
            k,
            csv,
            out,
        } => {
            let (a, _) = source.load()?;
            let rep = bound_report(&a, k);
            let text = if csv {
                rep.to_csv()
            } else {
                let mut s = serde_json::to_string_pretty(&serde_json::json!({
                    "schema": SCHEMA,
                    "bounds": rep,
                }))
                .expect("bounds serialize");
                s.push('\n');
                s
            };
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::Oracle {
            source,
            k,
            objective,
            subset_cap,
            out,
        } => {
            let (a, _) = source.load()?;
            let objective = match objective {
                OracleObjective::Smin => Objective::Smin,
                OracleObjective::Volume => Objective::Volume,
            };
            let res = best_subset_capped(&a, k, objective, subset_cap)?;
            let mut text = serde_json::to_string_pretty(&serde_json::json!({
                "schema": SCHEMA,
                "oracle": res,
            }))
            .expect("oracle serializes");
            text.push('\n');
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::Verify {
            m_max,
            seeds,
            fault_injection,
            out,
        } => {
            let summary = run_verify(m_max, seeds, fault_injection);
            let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            text.push('\n');
            emit(&text, out.as_deref())?;
            Ok(if summary.pass { 0 } else { 1 })
        }
    }
}

fn parse_weights(path: &Path) -> Result<Weights, Error> {
    let text = std::fs::read_to_string(path)?;
    let vals: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| Error::Parse(format!("weights: {e}")))
        })
        .collect::<Result<_, _>>()?;
    Weights::new(vals)
}

#[derive(Serialize)]
struct InvariantResult {
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct VerifySummary {
    schema: String,
    m_max: usize,
    seeds: u64,
    fault_injection: bool,
    pass: bool,
    invariants: Vec<InvariantResult>,
}

/// Seeded instance family shared by all invariants: sizes cycle with seed.
fn instances(m_max: usize, seeds: u64) -> Vec<Matrix> {
    (0..seeds)
        .map(|s| {
            let n = 3 + (s as usize % m_max.saturating_sub(3).max(1));
            let m = 3 + ((s as usize * 5 + 2) % m_max.saturating_sub(2).max(1));
            resinv::gen::gaussian(n.min(m_max), m.min(m_max), 0xC0FFEE + s)
        })
        .collect()
}

fn check<F: Fn() -> Result<(), String>>(name: &str, f: F) -> InvariantResult {
    let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f));
    let (pass, detail) = match res {
        Ok(Ok(())) => (true, None),
        Ok(Err(d)) => (false, Some(d)),
        Err(_) => (false, Some("panicked".into())),
    };
    InvariantResult {
        name: name.into(),
        pass,
        detail,
    }
}

fn run_verify(m_max: usize, seeds: u64, fault_injection: bool) -> VerifySummary {
    let mats = instances(m_max, seeds);
    let mut invariants = Vec::new();

    // Σ_j ℓ_j = Σ_i 1/s_i² for the dual basis of a full-column-rank restriction
    invariants.push(check("trace-identity", || {
        for (i, a) in mats.iter().enumerate() {
            let r = a.rank().min(a.ncols());
            if r < 2 {
                continue;
            }
            let tau = volume_exchange_select(a, r, &Weights::uniform(a.ncols()))
                .map_err(|e| format!("instance {i}: {e}"))?;
            let db = a
                .dual_basis(&tau)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let lhs: f64 = db.leverage.iter().sum();
            let sub = a.restrict(&tau);
            let rhs: f64 = sub
                .singular_values()
                .map_err(|e| format!("instance {i}: {e}"))?
                .iter()
                .map(|s| 1.0 / (s * s))
                .sum();
            // negative control: the injected sign flip must be caught
            let rhs = if fault_injection { -rhs } else { rhs };
            if (lhs - rhs).abs() > 1e-8 * rhs.abs().max(1.0) {
                return Err(format!("instance {i}: lhs {lhs} rhs {rhs}"));
            }
        }
        Ok(())
    }));

    // ⟨v_i, Ae_j⟩ = δ_ij and ℓ_j = ‖v_j‖²
    invariants.push(check("dual-basis-biorthogonality", || {
        for (i, a) in mats.iter().enumerate() {
            let r = a.rank().min(a.ncols());
            if r < 2 {
                continue;
            }
            let tau = volume_exchange_select(a, r, &Weights::uniform(a.ncols()))
                .map_err(|e| format!("instance {i}: {e}"))?;
            let db = a
                .dual_basis(&tau)
                .map_err(|e| format!("instance {i}: {e}"))?;
            for (x, &jx) in tau.iter().enumerate() {
                for (y, _) in tau.iter().enumerate() {
                    let ip = db.vectors[y].dot(&a.column(jx));
                    let expect = if x == y { 1.0 } else { 0.0 };
                    if (ip - expect).abs() > 1e-8 {
                        return Err(format!("instance {i}: ({x},{y}) ip {ip}"));
                    }
                }
                if (db.leverage[x] - db.vectors[x].norm_squared()).abs() > 1e-8 {
                    return Err(format!("instance {i}: leverage mismatch at {x}"));
                }
            }
        }
        Ok(())
    }));

    // Fan maximum principle on random projectors
    invariants.push(check("fan-lemma", || {
        for (i, a) in mats.iter().enumerate() {
            let n = a.nrows();
            for r in 0..=n {
                let p = resinv::test_util::random_projector(n, r, 0xFA + i as u64);
                if !a
                    .fan_projection_check(&p)
                    .map_err(|e| format!("instance {i}: {e}"))?
                {
                    return Err(format!("instance {i}: rank {r}"));
                }
            }
        }
        Ok(())
    }));

    // srank_p non-increasing in p; entropic stable rank is the p→2⁺ limit
    invariants.push(check("stable-rank-monotone", || {
        for (i, a) in mats.iter().enumerate() {
            let ps = [2.1, 2.5, 3.0, 4.0, 8.0, f64::INFINITY];
            let mut prev = f64::INFINITY;
            for &p in &ps {
                let v = a.stable_rank(p).map_err(|e| format!("instance {i}: {e}"))?;
                if v > prev * (1.0 + 1e-10) {
                    return Err(format!("instance {i}: srank_{p} = {v} > {prev}"));
                }
                prev = v;
            }
            let ent = a
                .entropic_stable_rank()
                .map_err(|e| format!("instance {i}: {e}"))?;
            let near = a
                .stable_rank(2.0 + 1e-5)
                .map_err(|e| format!("instance {i}: {e}"))?;
            if (ent - near).abs() / ent > 1e-2 {
                return Err(format!("instance {i}: entrank {ent} vs {near}"));
            }
        }
        Ok(())
    }));

    // volume selection is a (1+δ)-local maximum
    invariants.push(check("volume-local-max", || {
        for (i, a) in mats.iter().enumerate() {
            let r = a.rank().min(3);
            if r < 1 {
                continue;
            }
            let d = Weights::uniform(a.ncols());
            let tau = volume_exchange_select(a, r, &d).map_err(|e| format!("instance {i}: {e}"))?;
            if !verify_local_max(a, &tau, &d, DEFAULT_DELTA)
                .map_err(|e| format!("instance {i}: {e}"))?
            {
                return Err(format!("instance {i}: not locally maximal"));
            }
        }
        Ok(())
    }));

    // Sauer–Shelah extraction shatters and meets the size bound
    invariants.push(check("sauer-shelah", || {
        for s in 0..seeds {
            let n = 4 + (s as usize % 5);
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5A + s);
            let mut members: Vec<u32> = (0..1u32 << n).collect();
            while members.len() as u64 > (1 << (n - 1)) + 1 {
                let at = rng.random_range(0..members.len());
                members.swap_remove(at);
            }
            let omega = SignSet::new(n, members).map_err(|e| format!("seed {s}: {e}"))?;
            let sigma = sauer_shelah_extract(&omega, n.div_ceil(2))
                .map_err(|e| format!("seed {s}: {e}"))?;
            if sigma.len() < n.div_ceil(2) || !omega.shatters(&sigma) {
                return Err(format!("seed {s}: |sigma| = {}", sigma.len()));
            }
        }
        Ok(())
    }));

    // multi-level pipeline certificate obeys its tracked constant
    invariants.push(check("pipeline-tracked-constant", || {
        for s in 0..seeds {
            let m = 6 + (s as usize % 4);
            let a = resinv::gen::gaussian(m, m, 0x617 + s);
            let k = m / 2;
            let (sel, trace) = giannopoulos_select(&a, k).map_err(|e| format!("seed {s}: {e}"))?;
            if sel.inv_norm > trace.c_glue * trace.max_leverage_sqrt + 1e-9 {
                return Err(format!("seed {s}: {} vs bound", sel.inv_norm));
            }
        }
        Ok(())
    }));

    // rank pipeline certificate ≤ C_impl × rank-objective minimum
    invariants.push(check("rank-pipeline-bound", || {
        for (i, a) in mats.iter().enumerate() {
            let k = (a.rank().saturating_sub(1)).min(2);
            if k < 1 {
                continue;
            }
            let res = main_theorem_select(a, k, None).map_err(|e| format!("instance {i}: {e}"))?;
            if res.selection.inv_norm > res.c_impl * res.bound_value + 1e-9 {
                return Err(format!(
                    "instance {i}: {} > {}",
                    res.selection.inv_norm,
                    res.c_impl * res.bound_value
                ));
            }
        }
        Ok(())
    }));

    // barrier chain: min root of g ≥ refined bound ≥ γ
    invariants.push(check("barrier-chain", || {
        for (i, a) in mats.iter().enumerate() {
            for k in 1..a.rank() {
                let s = a
                    .singular_values()
                    .map_err(|e| format!("instance {i}: {e}"))?;
                let g = g_poly(&s, a.rank(), k);
                let b = barrier_bound(a, k).map_err(|e| format!("instance {i}: {e}"))?;
                let min_root = g
                    .real_roots(1e-6)
                    .map_err(|e| format!("instance {i}: {e}"))?[0];
                if min_root < b.value - 1e-9 || b.value < b.gamma - 1e-9 {
                    return Err(format!(
                        "instance {i} k={k}: {min_root} / {} / {}",
                        b.value, b.gamma
                    ));
                }
            }
        }
        Ok(())
    }));

    // every selector is dominated by the exhaustive oracle
    invariants.push(check("oracle-dominance", || {
        for (i, a) in mats.iter().enumerate().take(4) {
            let k = 2.min(a.rank().saturating_sub(1));
            if k < 1 {
                continue;
            }
            let best = best_subset_capped(a, k, Objective::Smin, SUBSET_CAP)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let tau = volume_exchange_select(a, k, &Weights::uniform(a.ncols()))
                .map_err(|e| format!("instance {i}: {e}"))?;
            let cert = a.restrict_certificate(&tau);
            if cert.smin > best.best_value + 1e-9 {
                return Err(format!("instance {i}: volume beats oracle"));
            }
        }
        Ok(())
    }));

    let pass = invariants.iter().all(|r| r.pass);
    VerifySummary {
        schema: SCHEMA.into(),
        m_max,
        seeds,
        fault_injection,
        pass,
        invariants,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let json = serde_json::json!({
                "error": e.to_string(),
                "exit": exit_code_for(&e),
            });
            eprintln!("{json}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
