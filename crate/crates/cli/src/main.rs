use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kgood_core::fgl::{check_fgl_approximations, FglReport};
use kgood_core::group::{
    catalog, chi_bruteforce, GroupId, GroupSpec, BRUTEFORCE_MAX_N, BRUTEFORCE_MAX_S,
};
use kgood_core::ring::{RingParams, DEFAULT_MAX_DIM, FORCED_MAX_DIM};
use kgood_core::verifier::{
    chi_cohomology, chi_formula, verify_groups, CheckKind, GoodMode, GroupContext, TheoremReport,
    VerifyOptions, DEFAULT_SEED,
};
use kgood_core::Error;

#[derive(Parser)]
#[command(
    name = "kgood",
    version,
    about = "Exact goodness verifier for K(s)^*(BG)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification pipeline for some or all of the 17 groups.
    Verify(VerifyArgs),
    /// Check the Honda formal group law identities.
    Fgl(FglArgs),
    /// Compute Euler characteristics.
    Chi(ChiArgs),
    /// Print the 17 presentations.
    ListGroups(ListArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Raise the dimension guard to 16384.
    #[arg(long)]
    force: bool,
    /// Dimension guard; --force takes precedence.
    #[arg(long, env = "MK_MAX_DIM", default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
}

impl Common {
    fn params(&self) -> Result<RingParams, Error> {
        let guard = if self.force {
            FORCED_MAX_DIM.max(self.max_dim)
        } else {
            self.max_dim
        };
        RingParams::with_guard(self.s, self.n, guard)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Cohomology,
    Bruteforce,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Groups to verify (default all), e.g. --group G3 --group G7.
    #[arg(long = "group", value_parser = parse_group)]
    groups: Vec<GroupId>,
    /// Comma-separated check families (default all applicable).
    #[arg(long, value_delimiter = ',', value_parser = parse_check)]
    checks: Vec<CheckKind>,
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    good_mode: GoodMode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct FglArgs {
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChiArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "group", value_parser = parse_group)]
    groups: Vec<GroupId>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ListArgs {
    #[arg(long, default_value_t = 1)]
    n: u32,
}

fn parse_group(s: &str) -> Result<GroupId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_check(s: &str) -> Result<CheckKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<GoodMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A run either completes with a verdict or stops on bad input.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Fgl(a) => run_fgl(a),
        Command::Chi(a) => run_chi(a),
        Command::ListGroups(a) => run_list(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn selected(groups: Vec<GroupId>) -> Vec<GroupId> {
    if groups.is_empty() {
        GroupId::all().collect()
    } else {
        let mut g = groups;
        g.sort();
        g.dedup();
        g
    }
}

fn run_verify(a: VerifyArgs) -> anyhow::Result<Outcome> {
    let params = a.common.params()?;
    let mut opts = VerifyOptions {
        mode: a.good_mode,
        seed: a.seed,
        ..VerifyOptions::default()
    };
    if !a.checks.is_empty() {
        opts.checks = a.checks.into_iter().collect();
    }
    let report = verify_groups(&params, &selected(a.groups), &opts)?;
    let text = match a.format {
        Format::Json => {
            eprintln!("seed: {}", report.seed);
            to_json(&report.groups)?
        }
        Format::Text => render_report(&report),
    };
    emit(&a.out, &text)?;
    Ok(if report.pass() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn render_report(report: &TheoremReport) -> String {
    let p = &report.params;
    let mut out = format!(
        "s = {}, n = {}, M = {}, dim = {}, good mode {}, seed {}\n",
        p.s(),
        p.n(),
        p.m(),
        p.dim(),
        report.mode,
        report.seed
    );
    for g in &report.groups {
        let verdict = if g.pass() { "PASS" } else { "FAIL" };
        let chi = g
            .chi
            .map(|c| format!("  chi = {}", c.cohomology))
            .unwrap_or_default();
        out.push_str(&format!(
            "{:<4} {verdict}  {} checks{chi}\n",
            g.group.to_string(),
            g.checks.len()
        ));
        for c in g.failures() {
            out.push_str(&format!("     fail {}: {}\n", c.name, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!("          witness: {}\n", truncate(w, 200)));
            }
        }
    }
    out.push_str(&format!(
        "{}/{} groups pass\n",
        report.passing_groups(),
        report.groups.len()
    ));
    out
}

fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        s.to_string()
    } else {
        let cut = s.char_indices().nth(max).map_or(s.len(), |(i, _)| i);
        format!("{} ... ({} chars)", &s[..cut], s.len())
    }
}

fn run_fgl(a: FglArgs) -> anyhow::Result<Outcome> {
    if !(2..=16).contains(&a.s) {
        bail!("height s must be between 2 and 16, got {}", a.s);
    }
    let report: FglReport = check_fgl_approximations(a.s)?;
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut out = format!("Honda law, s = {}, bound {}\n", report.s, report.bound);
            for c in &report.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{verdict}  {}", c.name));
                if let Some(w) = &c.witness {
                    out.push_str(&format!("  witness {w:?}"));
                }
                out.push('\n');
            }
            out
        }
    };
    emit(&a.out, &text)?;
    Ok(if report.pass() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

#[derive(Serialize)]
struct ChiRow {
    group: GroupId,
    formula: Option<u128>,
    cohomology: Option<u128>,
    bruteforce: Option<u128>,
}

impl ChiRow {
    fn agree(&self) -> bool {
        let vals: Vec<u128> = [self.formula, self.cohomology, self.bruteforce]
            .into_iter()
            .flatten()
            .collect();
        vals.windows(2).all(|w| w[0] == w[1])
    }
}

fn run_chi(a: ChiArgs) -> anyhow::Result<Outcome> {
    let wants = |m: Method| a.method == m || a.method == Method::All;
    let params = if wants(Method::Cohomology) {
        Some(a.common.params()?)
    } else {
        // formula and brute force only need valid (s, n)
        if a.common.s < 2 || a.common.n < 1 {
            bail!(Error::InvalidParameter(format!(
                "need s >= 2 and n >= 1, got s = {}, n = {}",
                a.common.s, a.common.n
            )));
        }
        None
    };
    if wants(Method::Bruteforce) && (a.common.n > BRUTEFORCE_MAX_N || a.common.s > BRUTEFORCE_MAX_S)
    {
        bail!(
            "brute force is limited to n <= {BRUTEFORCE_MAX_N}, s <= {BRUTEFORCE_MAX_S}; \
             choose another --method"
        );
    }
    let mut rows = Vec::new();
    for id in selected(a.groups) {
        let spec = GroupSpec::from_catalog(id, a.common.n)?;
        let s = a.common.s;
        rows.push(ChiRow {
            group: id,
            formula: wants(Method::Formula)
                .then(|| chi_formula(&spec, s))
                .transpose()?,
            cohomology: match &params {
                Some(p) => Some(chi_cohomology(&GroupContext::new(&spec, p)?)?),
                None => None,
            },
            bruteforce: wants(Method::Bruteforce)
                .then(|| chi_bruteforce(&spec, s))
                .transpose()?,
        });
    }
    let text = match a.format {
        Format::Json => to_json(&rows)?,
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                for (label, v) in [
                    ("formula", r.formula),
                    ("cohomology", r.cohomology),
                    ("bruteforce", r.bruteforce),
                ] {
                    if let Some(v) = v {
                        out.push_str(&format!("{} {label}: {v}\n", r.group));
                    }
                }
            }
            out
        }
    };
    emit(&a.out, &text)?;
    Ok(if rows.iter().all(ChiRow::agree) {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn run_list(a: ListArgs) -> anyhow::Result<Outcome> {
    let mut out = String::new();
    for spec in catalog(a.n)? {
        out.push_str(&spec.relation_line());
        out.push('\n');
    }
    emit(&None, &out)?;
    Ok(Outcome::Pass)
}
