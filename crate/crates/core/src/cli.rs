//! Command-line front end. Exit codes: 0 success, 1 a reported disagreement or
//! exception, 2 invalid input or any other error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::WORD_BUDGET_ENV;
use crate::cone::{cone_diagram, ConeDiagram};
use crate::error::{Error, Result};
use crate::families::{classify, enumerate_family, tables_json, ClassifyReport, FamilyMatch, FamilyTag, MatchOptions, Representative};
use crate::floer::{alexander_polynomial, euler_characteristic, f_profile};
use crate::knot::SimpleKnot;
use crate::sweep::{estimated_word_ops, resume, verify_conjecture, ExceptionKind, ResumeOptions, SweepConfig, SweepReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lensknot", version, about = "Knot Floer invariants and surgery families of simple knots in lens spaces")]
#[command(after_help = format!("Environment:\n  {WORD_BUDGET_ENV}  largest admissible p (default 2^31)"))]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Width, genus, gradings, Euler characteristic and Alexander polynomial of K(p,q,k).
    Genus {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Berge and Tange family matches of K(p, k^2, k) and the width verdict.
    Classify {
        p: u64,
        k: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Admit j < 0 in the Tange families.
        #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
        tange_negative_j: bool,
    },
    /// Homology class, self-linking and integer surgery coefficients of K(p,q,k).
    Surgeries {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        /// Half-width of the coefficient window around 0.
        #[arg(long, default_value_t = 0)]
        window: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Label walk of the mapping cone for m-surgery on K(p,q,k).
    Cone {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Check width(p,k^2,k) < 2p against family membership for every p <= max-p.
    Sweep {
        #[arg(long, required_unless_present = "resume")]
        max_p: Option<u64>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write a resumable checkpoint here.
        #[arg(long, conflicts_with = "resume")]
        checkpoint: Option<PathBuf>,
        /// Continue the run stored in this checkpoint.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// One k per orbit {k, -k, 1/k, -1/k}.
        #[arg(long, action = clap::ArgAction::Set)]
        dedup: Option<bool>,
        #[arg(long, action = clap::ArgAction::Set)]
        tange_negative_j: Option<bool>,
        /// Write the final report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append one JSON line per exception.
        #[arg(long)]
        exceptions: Option<PathBuf>,
        /// Stop after this p, leaving the checkpoint resumable.
        #[arg(long)]
        stop_after: Option<u64>,
        /// Seconds between checkpoint writes.
        #[arg(long, default_value_t = 30)]
        checkpoint_interval: u64,
        #[arg(long)]
        quiet: bool,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// List the (p,k) pairs of a family with p <= max-p.
    Enumerate {
        /// berge-i-ii, berge-iii, ..., berge-x, tange-1 .. tange-19, tange-sporadic
        tag: String,
        #[arg(long)]
        max_p: u64,
        #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
        tange_negative_j: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// The f(i) values of K(p,q,k).
    Profile {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// The family tables as JSON.
    Tables,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Genus { p, q, k, format } => genus(SimpleKnot::new(p, q, k)?, format, out),
        Command::Classify { p, k, format, tange_negative_j } => {
            let report = classify(p, k, MatchOptions { tange_negative_j })?;
            render_classify(&report, format, out)?;
            Ok(if report.consistent { 0 } else { 1 })
        }
        Command::Surgeries { p, q, k, window, format } => surgeries(SimpleKnot::new(p, q, k)?, window, format, out),
        Command::Cone { p, q, k, m, format } => {
            let knot = SimpleKnot::new(p, q, k)?;
            let diagram = cone_diagram(&knot, m)?;
            render_cone(&knot, &diagram, format, out)?;
            Ok(0)
        }
        Command::Sweep {
            max_p,
            jobs,
            checkpoint,
            resume: resume_path,
            dedup,
            tange_negative_j,
            out: report_path,
            exceptions,
            stop_after,
            checkpoint_interval,
            quiet,
            format,
        } => {
            let workers = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if workers == 0 {
                return Err(Error::InvalidInput("--jobs must be at least 1".into()));
            }
            let interval = Duration::from_secs(checkpoint_interval);
            let report = if let Some(path) = resume_path {
                resume(
                    &path,
                    &ResumeOptions {
                        max_p,
                        dedup,
                        tange_negative_j,
                        workers,
                        checkpoint_interval: Some(interval),
                        exceptions_path: exceptions,
                        halt_after: stop_after,
                        progress: !quiet,
                    },
                )?
            } else {
                let max_p = max_p.expect("required by clap");
                let mut config = SweepConfig::new(max_p);
                config.workers = workers;
                config.dedup = dedup.unwrap_or(true);
                config.options.tange_negative_j = tange_negative_j.unwrap_or(true);
                config.checkpoint_path = checkpoint;
                config.checkpoint_interval = interval;
                config.exceptions_path = exceptions;
                config.halt_after = stop_after;
                config.progress = !quiet;
                if max_p > 10_000 && !quiet {
                    writeln!(
                        err,
                        "estimated cost: {:.2e} word operations on {} worker(s)",
                        estimated_word_ops(max_p, config.dedup),
                        workers
                    )?;
                }
                verify_conjecture(&config)?
            };
            if let Some(path) = report_path {
                std::fs::write(&path, serde_json::to_string_pretty(&report_json(&report)).expect("serializable") + "\n")?;
            }
            render_sweep(&report, stop_after, format, out)?;
            Ok(if report.is_clean() { 0 } else { 1 })
        }
        Command::Enumerate { tag, max_p, tange_negative_j, format } => {
            let tag: FamilyTag = tag.parse()?;
            if max_p < 2 {
                return Err(Error::InvalidInput(format!("--max-p must be at least 2, got {max_p}")));
            }
            let pairs = enumerate_family(tag, max_p, MatchOptions { tange_negative_j })?;
            match format {
                Format::Json => writeln!(out, "{}", json!({"schema": SCHEMA_VERSION, "tag": tag.name(), "max_p": max_p, "pairs": pairs}))?,
                Format::Csv | Format::Human => {
                    writeln!(out, "p,k")?;
                    for (p, k) in pairs {
                        writeln!(out, "{p},{k}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Profile { p, q, k, format } => {
            let profile = f_profile(&SimpleKnot::new(p, q, k)?);
            match format {
                Format::Json => writeln!(out, "{}", json!({"schema": SCHEMA_VERSION, "f": profile.f}))?,
                Format::Csv | Format::Human => {
                    writeln!(out, "i,f")?;
                    for (i, f) in profile.f.iter().enumerate() {
                        writeln!(out, "{i},{f}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Tables => {
            writeln!(out, "{}", serde_json::to_string_pretty(&tables_json()).expect("serializable"))?;
            Ok(0)
        }
    }
}

/// `6 -> "3"`, `3 -> "3/2"`.
pub fn half_string(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

fn half_json(doubled: i64) -> Value {
    if doubled % 2 == 0 {
        json!(doubled / 2)
    } else {
        json!(format!("{doubled}/2"))
    }
}

fn genus(knot: SimpleKnot, format: Format, out: &mut dyn Write) -> Result<i32> {
    let profile = f_profile(&knot);
    let gradings = profile.sorted_doubled_gradings();
    let euler = euler_characteristic(&knot);
    let alexander = alexander_polynomial(&knot).ok();
    match format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "p": knot.p(),
                "q": knot.q(),
                "k": knot.k(),
                "primitive": knot.is_primitive(),
                "width": profile.width,
                "genus": profile.genus,
                "gradings": gradings.iter().map(|&g| half_json(g)).collect::<Vec<_>>(),
                "euler": euler.to_string(),
                "alexander": alexander.as_ref().map(|a| a.to_string()),
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "p,q,k,width,genus,gradings,euler,alexander")?;
            let g: Vec<String> = gradings.iter().map(|&g| half_string(g)).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                knot.p(),
                knot.q(),
                knot.k(),
                profile.width,
                profile.genus.map(|g| g.to_string()).unwrap_or_default(),
                g.join(";"),
                euler,
                alexander.as_ref().map(|a| a.to_string()).unwrap_or_default()
            )?;
        }
        Format::Human => {
            writeln!(out, "knot      {knot}")?;
            writeln!(out, "width     {}", profile.width)?;
            match profile.genus {
                Some(g) => writeln!(out, "genus     {g}")?,
                None => writeln!(out, "genus     n/a (not primitive)")?,
            }
            let g: Vec<String> = gradings.iter().map(|&g| half_string(g)).collect();
            writeln!(out, "gradings  {}", g.join(" "))?;
            writeln!(out, "euler     {euler}")?;
            match &alexander {
                Some(a) => writeln!(out, "alexander {a}")?,
                None => writeln!(out, "alexander n/a (not primitive)")?,
            }
        }
    }
    Ok(0)
}

fn surgeries(knot: SimpleKnot, window: u64, format: Format, out: &mut dyn Write) -> Result<i32> {
    let primitive = knot.is_primitive();
    let h = knot.homology_class();
    let zhs = knot.has_integer_zhs_surgery();
    // only primitive knots have integer surgeries
    let (a, coefficients, lspace): (Option<u64>, Vec<i64>, Vec<(i64, bool)>) = if primitive {
        let w = window.max(1) as i64;
        let d = knot.surgery_descriptor(-w..=w)?;
        let mut lspace = Vec::new();
        for &m in &d.homology_sphere_coefficients() {
            lspace.push((m, crate::cone::is_lspace_surgery(&knot, m)?));
        }
        (Some(d.a.value()), d.coefficients, lspace)
    } else {
        (None, Vec::new(), Vec::new())
    };
    let zhs_ms: Vec<i64> = lspace.iter().map(|&(m, _)| m).collect();
    match format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "p": knot.p(), "q": knot.q(), "k": knot.k(),
                "homology_class": h.value(),
                "primitive": primitive,
                "self_linking": a,
                "zhs_surgery": zhs,
                "zhs_coefficients": zhs_ms,
                "coefficients": coefficients,
                "lspace": lspace.iter().map(|&(m, l)| json!({"m": m, "lspace": l})).collect::<Vec<_>>(),
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "p,q,k,homology_class,primitive,self_linking,zhs_surgery,zhs_coefficients")?;
            let ms: Vec<String> = zhs_ms.iter().map(i64::to_string).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                knot.p(),
                knot.q(),
                knot.k(),
                h.value(),
                primitive,
                a.map(|a| a.to_string()).unwrap_or_default(),
                zhs,
                ms.join(";")
            )?;
        }
        Format::Human => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "knot            {knot}")?;
            writeln!(out, "homology class  {}", h.value())?;
            writeln!(out, "primitive       {}", yn(primitive))?;
            if let Some(a) = a {
                writeln!(out, "self-linking    a = {a} (a/{} mod 1)", knot.p())?;
                let ms: Vec<String> = zhs_ms.iter().map(i64::to_string).collect();
                if zhs {
                    writeln!(out, "ZHS surgery     yes (m = {})", ms.join(", "))?;
                } else {
                    writeln!(out, "ZHS surgery     no")?;
                }
                let cs: Vec<String> = coefficients.iter().map(i64::to_string).collect();
                writeln!(out, "coefficients    {}", cs.join(" "))?;
                for (m, l) in &lspace {
                    writeln!(out, "L-space (m={m:+})  {}", yn(*l))?;
                }
            } else {
                writeln!(out, "ZHS surgery     no")?;
            }
        }
    }
    Ok(0)
}

fn render_cone(knot: &SimpleKnot, d: &ConeDiagram, format: Format, out: &mut dyn Write) -> Result<()> {
    let lspace = d.rank == d.m.unsigned_abs();
    match format {
        Format::Json => {
            let classes: Vec<Value> = d
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "class": c.class,
                        "first": c.indices.first(),
                        "labels": c.label_string(),
                        "rank": c.rank,
                        "summands": c.summands.iter().map(|s| json!([s.start, s.end, s.left.symbol().to_string() + &s.right.symbol().to_string(), s.rank()])).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let v = json!({
                "schema": SCHEMA_VERSION,
                "p": knot.p(), "q": knot.q(), "k": knot.k(), "m": d.m,
                "mirrored": d.mirrored,
                "window": [d.window.0, d.window.1],
                "classes": classes,
                "rank": d.rank,
                "lspace": lspace,
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "class,first,labels,rank")?;
            for c in &d.classes {
                writeln!(out, "{},{},{},{}", c.class, c.indices.first().copied().unwrap_or(0), c.label_string(), c.rank)?;
            }
        }
        Format::Human => {
            writeln!(out, "{}-surgery on {knot}{}", d.m, if d.mirrored { " (walked on the mirror with -m)" } else { "" })?;
            writeln!(out, "window  A_n for n in [{}, {}]", d.window.0, d.window.1)?;
            for c in &d.classes {
                let spans: Vec<String> = c
                    .summands
                    .iter()
                    .filter(|s| s.rank() > 0)
                    .map(|s| format!("[{},{}]{}{}", s.start, s.end, s.left.symbol(), s.right.symbol()))
                    .collect();
                writeln!(out, "class {}  {}  rank {}  {}", c.class, c.label_string(), c.rank, spans.join(" "))?;
            }
            writeln!(out, "rank    {}", d.rank)?;
            writeln!(out, "L-space {}", if lspace { "yes" } else { "no" })?;
        }
    }
    Ok(())
}

fn representative_name(r: Representative) -> &'static str {
    match r {
        Representative::K => "k",
        Representative::MinusK => "-k",
        Representative::KInverse => "1/k",
        Representative::MinusKInverse => "-1/k",
    }
}

fn match_json(m: &FamilyMatch) -> Value {
    json!({
        "family": m.tag.name(),
        "witness": m.witness.to_string(),
        "representative": representative_name(m.representative),
        "k_star": m.k_star,
    })
}

fn render_classify(r: &ClassifyReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "p": r.p, "k": r.k, "q": r.q,
                "families": r.tags().iter().map(FamilyTag::name).collect::<Vec<_>>(),
                "matches": r.matches.iter().map(match_json).collect::<Vec<_>>(),
                "width": r.width,
                "genus": r.genus,
                "width_below_2p": r.width_below_2p,
                "consistent": r.consistent,
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "p,k,family,representative,k_star,witness,width,width_below_2p")?;
            for m in &r.matches {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.p,
                    r.k,
                    m.tag.name(),
                    representative_name(m.representative),
                    m.k_star,
                    m.witness,
                    r.width,
                    r.width_below_2p
                )?;
            }
        }
        Format::Human => {
            writeln!(out, "knot     K({},{},{})", r.p, r.q, r.k)?;
            if r.matches.is_empty() {
                writeln!(out, "families none")?;
            }
            for m in &r.matches {
                writeln!(out, "match    {:<14} {:<4} k*={:<6} {}", m.tag.name(), representative_name(m.representative), m.k_star, m.witness)?;
            }
            let cmp = if r.width_below_2p { "<" } else { ">=" };
            writeln!(out, "width    {} {cmp} {} = 2p", r.width, 2 * r.p)?;
            writeln!(out, "genus    {}", r.genus)?;
            writeln!(out, "verdict  {}", if r.consistent { "consistent" } else { "DISAGREEMENT" })?;
        }
    }
    Ok(())
}

pub fn report_json(r: &SweepReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "max_p": r.max_p,
        "dedup": r.dedup,
        "knots_checked": r.knots_checked,
        "lspace_count": r.lspace_count,
        "conjecture_violations": r.conjecture_violations,
        "realizability_anomalies": r.realizability_anomalies,
        "elapsed_secs": r.elapsed.as_secs_f64(),
        "worker_count": r.worker_count,
    })
}

fn render_sweep(r: &SweepReport, stop_after: Option<u64>, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", report_json(r))?,
        Format::Csv => {
            writeln!(out, "kind,p,k,width")?;
            for (kind, list) in [
                (ExceptionKind::ConjectureViolation, &r.conjecture_violations),
                (ExceptionKind::RealizabilityAnomaly, &r.realizability_anomalies),
            ] {
                let name = serde_json::to_value(kind).expect("serializable");
                for e in list {
                    writeln!(out, "{},{},{},{}", name.as_str().unwrap_or_default(), e.p, e.k, e.width)?;
                }
            }
        }
        Format::Human => {
            if let Some(h) = stop_after.filter(|&h| h < r.max_p) {
                writeln!(out, "stopped after p = {h} of {}", r.max_p)?;
            } else {
                writeln!(out, "max p                    {}", r.max_p)?;
            }
            writeln!(out, "knots checked            {}{}", r.knots_checked, if r.dedup { " (one per orbit)" } else { "" })?;
            writeln!(out, "width < 2p               {}", r.lspace_count)?;
            writeln!(out, "conjecture violations    {}", r.conjecture_violations.len())?;
            for e in &r.conjecture_violations {
                writeln!(out, "  p={} k={} width={}", e.p, e.k, e.width)?;
            }
            writeln!(out, "realizability anomalies  {}", r.realizability_anomalies.len())?;
            for e in &r.realizability_anomalies {
                writeln!(out, "  p={} k={} width={}", e.p, e.k, e.width)?;
            }
            writeln!(out, "elapsed                  {:.2}s on {} worker(s)", r.elapsed.as_secs_f64(), r.worker_count)?;
        }
    }
    Ok(())
}
