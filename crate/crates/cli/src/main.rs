mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use goldman_core::verify::inner::main_theorem_check;
use goldman_core::verify::report::{CheckEntry, Verdict, VerificationReport};
use goldman_core::verify::settings::{el, Settings};
use goldman_core::verify::suites::{default_gradings, group_summary, run_suite, Suite, SuiteConfig};
use goldman_core::AbelianGroup;
use rayon::prelude::*;
use serde::Serialize;

use input::{Gradings, Loaded};

#[derive(Parser)]
#[command(name = "goldman", version, about = "Exact CE homology and checks for the homological Goldman Lie algebra Q[H]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group spec and print its structure.
    Validate(Common),
    /// Truncated H_2 per grading against the predicted dimension.
    Homology(Common),
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
}

#[derive(Args)]
struct Common {
    /// JSON group spec file.
    #[arg(long, conflicts_with = "surface")]
    spec: Option<PathBuf>,
    /// Surface group shorthand: genus,boundary.
    #[arg(long)]
    surface: Option<String>,
    /// Cycle box radius M.
    #[arg(long = "box", default_value_t = 2, value_parser = clap::value_parser!(i64).range(1..))]
    m: i64,
    /// Boundary box is M times this.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    enlarge: i64,
    /// Gradings: comma separated, each `0`, `1:0:-1` or `A1+2B1`; `all` for the whole box.
    #[arg(long)]
    grading: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn load(c: &Common) -> Result<Loaded> {
    match (&c.spec, &c.surface) {
        (Some(p), None) => input::load_spec(p),
        (None, Some(s)) => input::surface(s),
        _ => bail!("give exactly one of --spec <path> or --surface g,r"),
    }
}

fn emit(c: &Common, body: &str) -> Result<()> {
    match &c.out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn superscript(n: usize) -> String {
    const D: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

fn structure(h: &AbelianGroup) -> String {
    let mut parts = Vec::new();
    match h.free_rank() {
        0 => {}
        1 => parts.push("ℤ".to_string()),
        r => parts.push(format!("ℤ{}", superscript(r))),
    }
    parts.extend(h.torsion_coefficients().iter().map(|d| format!("ℤ/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("⊕")
    }
}

fn form_kind(h: &AbelianGroup) -> &'static str {
    if h.form_is_zero() {
        "zero"
    } else if h.form_is_nondegenerate() {
        "nondegenerate"
    } else {
        "degenerate"
    }
}

fn validate(c: &Common) -> Result<i32> {
    let Loaded { group: h, .. } = load(c)?;
    let ker: Vec<String> = h.kernel_mu_generators().iter().map(|x| el(&h, x)).collect();
    let kers = if ker.is_empty() { "0".to_string() } else { format!("<{}>", ker.join(", ")) };
    let body = match c.format {
        Format::Text => {
            let mut s = format!("{}, form {}, ker μ = {}\n", structure(&h), form_kind(&h), kers);
            s += &format!("generators: {}\n", h.spec().names().join(" "));
            s += &format!("free rank: {}\n", h.free_rank());
            s += &format!("torsion coefficients: {:?}\n", h.torsion_coefficients());
            s += &format!("ker mu rank: {}\n", h.kernel_mu_rank());
            s
        }
        Format::Json => {
            let mut g = group_summary(&h);
            g.insert("structure".into(), structure(&h));
            serde_json::to_string_pretty(&g)? + "\n"
        }
    };
    emit(c, &body)?;
    Ok(0)
}

fn gradings(c: &Common, h: &AbelianGroup) -> Result<Vec<goldman_core::GroupElement>> {
    Ok(match input::parse_gradings(h, c.grading.as_deref())? {
        Gradings::Default => default_gradings(h),
        Gradings::AllInBox => h.box_support(c.m),
        Gradings::List(v) => v,
    })
}

#[derive(Serialize)]
struct HomologyRow {
    grading: String,
    kind: String,
    dim_z2: Option<String>,
    dim_b2: Option<String>,
    dim_h2: Option<String>,
    predicted: Option<String>,
    verdict: &'static str,
}

fn homology(c: &Common) -> Result<i32> {
    let Loaded { group: h, .. } = load(c)?;
    let s = Settings::new(c.m, c.enlarge).seed(c.seed);
    let zs = gradings(c, &h)?;
    let entries: Vec<CheckEntry> = zs.par_iter().map(|z| main_theorem_check(&h, z, &s)).collect();
    let rows: Vec<HomologyRow> = zs
        .iter()
        .zip(&entries)
        .map(|(z, e)| HomologyRow {
            grading: el(&h, z),
            kind: e.facts.get("grading").cloned().unwrap_or_else(|| "-".into()),
            dim_z2: e.facts.get("dim Z_2").cloned(),
            dim_b2: e.facts.get("dim Z_2 cap B_2").cloned(),
            dim_h2: e.facts.get("dim H_2 (truncated)").cloned(),
            predicted: e.facts.get("predicted").cloned(),
            verdict: e.verdict.as_str(),
        })
        .collect();
    let body = match c.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                group: std::collections::BTreeMap<String, String>,
                box_radius: i64,
                boundary_box: i64,
                seed: u64,
                rows: &'a [HomologyRow],
            }
            let out = Out { group: group_summary(&h), box_radius: s.m, boundary_box: s.m_prime, seed: s.seed, rows: &rows };
            serde_json::to_string_pretty(&out)? + "\n"
        }
        Format::Text => {
            let mut t = format!("{}, form {}\nbox M = {}, boundary box M' = {}, seed {}\n", structure(&h), form_kind(&h), s.m, s.m_prime, s.seed);
            if h.form_is_zero() {
                t += "notice: the form is zero, which is outside the hypothesis of the H_2 theorem; H_2 = wedge^2 Q[H]\n";
            }
            let cell = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
            let table: Vec<[String; 7]> = rows
                .iter()
                .map(|r| [r.grading.clone(), r.kind.clone(), cell(&r.dim_z2), cell(&r.dim_b2), cell(&r.dim_h2), cell(&r.predicted), r.verdict.to_string()])
                .collect();
            let head = ["z", "kind", "dim Z2", "dim Z2∩B2", "dim H2", "predicted", "verdict"];
            let width: Vec<usize> = (0..7)
                .map(|i| table.iter().map(|r| r[i].chars().count()).chain([head[i].chars().count()]).max().unwrap())
                .collect();
            let line = |cells: [&str; 7]| {
                let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
                padded.join(" | ").trim_end().to_string() + "\n"
            };
            t += &line(head);
            t += &width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-");
            t += "\n";
            for r in &table {
                t += &line([&r[0], &r[1], &r[2], &r[3], &r[4], &r[5], &r[6]]);
            }
            let mut seen = std::collections::BTreeSet::new();
            for (z, e) in zs.iter().zip(&entries) {
                for n in e.notes.iter().filter(|n| seen.insert(n.as_str())) {
                    t += &format!("note [{}]: {n}\n", el(&h, z));
                }
            }
            t
        }
    };
    emit(c, &body)?;
    let report = VerificationReport { group: group_summary(&h), seed: c.seed, entries };
    Ok(report.exit_code())
}

fn verify(c: &Common, suite: Suite) -> Result<i32> {
    let Loaded { group: h, surface } = load(c)?;
    let mut cfg = SuiteConfig::new(&h, Settings::new(c.m, c.enlarge).seed(c.seed));
    cfg.surface = surface;
    cfg.gradings = gradings(c, &h)?;
    let report = run_suite(&h, suite, &cfg);
    let body = match c.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    emit(c, &body)?;
    if c.out.is_some() {
        eprintln!(
            "{}: {} certified, {} inconclusive, {} refuted",
            report.overall().as_str(),
            report.count(Verdict::Certified),
            report.count(Verdict::Inconclusive),
            report.count(Verdict::Refuted)
        );
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32> {
    let common = match &cli.command {
        Command::Validate(c) | Command::Homology(c) | Command::Verify { common: c, .. } => c,
    };
    if let Some(j) = common.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    match &cli.command {
        Command::Validate(c) => validate(c),
        Command::Homology(c) => homology(c),
        Command::Verify { common, suite } => verify(common, *suite),
    }
}

fn main() -> ExitCode {
    // usage errors exit 1; exit 2 is reserved for inconclusive reports
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
