//! Exhaustive check of the biconditional
//! `width(p, k^2, k) < 2p  <=>  (p, k) is in a Berge or Tange family`
//! over all primitive `(p, k)` with `p <= max_p`.
//!
//! Work is split by `p`. Workers pull blocks of consecutive `p` from a shared
//! cursor; the calling thread merges finished blocks in order of `p`, so the
//! report never depends on the worker count or on how the run was resumed.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::arith::{check_budget, gcd_u64, inverse_mod};
use crate::error::{Error, Result};
use crate::families::{all_matches, FamilyIndex, MatchOptions};
use crate::floer::{width_below, width_kernel};

pub const CHECKPOINT_VERSION: u32 = 1;

const BLOCK: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KnotRecord {
    pub p: u64,
    pub k: u64,
    pub width: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionKind {
    ConjectureViolation,
    RealizabilityAnomaly,
}

/// One line of the exception stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionLine {
    pub p: u64,
    pub k: u64,
    pub q: u64,
    pub width: u64,
    pub kind: ExceptionKind,
    pub families: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_p: u64,
    pub dedup: bool,
    pub knots_checked: u64,
    pub lspace_count: u64,
    /// Width below `2p` but no family match.
    pub conjecture_violations: Vec<KnotRecord>,
    /// A family match but width at least `2p`.
    pub realizability_anomalies: Vec<KnotRecord>,
    pub elapsed: Duration,
    pub worker_count: usize,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.conjecture_violations.is_empty() && self.realizability_anomalies.is_empty()
    }

    /// Equality of everything except timing and worker count.
    pub fn same_results(&self, other: &SweepReport) -> bool {
        self.max_p == other.max_p
            && self.dedup == other.dedup
            && self.knots_checked == other.knots_checked
            && self.lspace_count == other.lspace_count
            && self.conjecture_violations == other.conjecture_violations
            && self.realizability_anomalies == other.realizability_anomalies
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub max_p: u64,
    pub dedup: bool,
    pub tange_negative_j: bool,
    /// Every `p <= last_completed_p` is in the tallies (1 before any work).
    pub last_completed_p: u64,
    pub knots_checked: u64,
    pub lspace_count: u64,
    pub conjecture_violations: Vec<KnotRecord>,
    pub realizability_anomalies: Vec<KnotRecord>,
    pub elapsed: Duration,
}

impl Checkpoint {
    fn fresh(max_p: u64, dedup: bool, opts: MatchOptions) -> Self {
        Checkpoint {
            format_version: CHECKPOINT_VERSION,
            max_p,
            dedup,
            tange_negative_j: opts.tange_negative_j,
            last_completed_p: 1,
            knots_checked: 0,
            lspace_count: 0,
            conjecture_violations: Vec::new(),
            realizability_anomalies: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.last_completed_p >= self.max_p
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
        if ck.format_version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointCorrupt(format!("unsupported format version {}", ck.format_version)));
        }
        if ck.max_p < 2 || ck.last_completed_p < 1 || ck.last_completed_p > ck.max_p {
            return Err(Error::CheckpointCorrupt(format!(
                "last_completed_p {} out of range for max_p {}",
                ck.last_completed_p, ck.max_p
            )));
        }
        Ok(ck)
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            serde_json::to_writer_pretty(&mut w, self).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
            w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn report(&self, workers: usize) -> SweepReport {
        SweepReport {
            max_p: self.max_p,
            dedup: self.dedup,
            knots_checked: self.knots_checked,
            lspace_count: self.lspace_count,
            conjecture_violations: self.conjecture_violations.clone(),
            realizability_anomalies: self.realizability_anomalies.clone(),
            elapsed: self.elapsed,
            worker_count: workers,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_p: u64,
    pub workers: usize,
    /// Check one `k` per orbit `{k, p-k, k^-1, p-k^-1}`.
    pub dedup: bool,
    pub options: MatchOptions,
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_interval: Duration,
    /// Append exception lines (JSON per line) to this file.
    pub exceptions_path: Option<PathBuf>,
    /// Stop once every `p <= halt_after` is done, leaving a resumable checkpoint.
    pub halt_after: Option<u64>,
    pub progress: bool,
}

impl SweepConfig {
    pub fn new(max_p: u64) -> Self {
        SweepConfig {
            max_p,
            workers: 1,
            dedup: true,
            options: MatchOptions::default(),
            checkpoint_path: None,
            checkpoint_interval: Duration::from_secs(30),
            exceptions_path: None,
            halt_after: None,
            progress: false,
        }
    }
}

/// Parameters a resumed run may pin; `None` accepts the stored value.
#[derive(Debug, Clone, Default)]
pub struct ResumeOptions {
    pub max_p: Option<u64>,
    pub dedup: Option<bool>,
    pub tange_negative_j: Option<bool>,
    pub workers: usize,
    pub checkpoint_interval: Option<Duration>,
    pub exceptions_path: Option<PathBuf>,
    pub halt_after: Option<u64>,
    pub progress: bool,
}

/// Rough count of word operations: `sum_{p <= N} p phi(p) ~ 2 N^3 / pi^2`.
pub fn estimated_word_ops(max_p: u64, dedup: bool) -> f64 {
    let n = max_p as f64;
    let ops = 2.0 * n * n * n / (std::f64::consts::PI * std::f64::consts::PI);
    if dedup {
        ops / 4.0
    } else {
        ops
    }
}

pub fn verify_conjecture(config: &SweepConfig) -> Result<SweepReport> {
    if config.max_p < 2 {
        return Err(Error::InvalidInput(format!("max_p must be at least 2, got {}", config.max_p)));
    }
    if config.workers == 0 {
        return Err(Error::InvalidInput("need at least one worker".into()));
    }
    check_budget(config.max_p)?;
    let ck = Checkpoint::fresh(config.max_p, config.dedup, config.options);
    if let Some(path) = &config.exceptions_path {
        File::create(path)?;
    }
    run(ck, config)
}

pub fn resume(path: &Path, opts: &ResumeOptions) -> Result<SweepReport> {
    let ck = Checkpoint::load(path)?;
    let mismatch = |what: &str, stored: String, asked: String| {
        Error::ParameterMismatch(format!("{what}: checkpoint has {stored}, invocation has {asked}"))
    };
    if let Some(m) = opts.max_p.filter(|&m| m != ck.max_p) {
        return Err(mismatch("max_p", ck.max_p.to_string(), m.to_string()));
    }
    if let Some(d) = opts.dedup.filter(|&d| d != ck.dedup) {
        return Err(mismatch("dedup", ck.dedup.to_string(), d.to_string()));
    }
    if let Some(t) = opts.tange_negative_j.filter(|&t| t != ck.tange_negative_j) {
        return Err(mismatch("tange_negative_j", ck.tange_negative_j.to_string(), t.to_string()));
    }
    let workers = opts.workers.max(1);
    if ck.is_complete() {
        return Ok(ck.report(workers));
    }
    let config = SweepConfig {
        max_p: ck.max_p,
        workers,
        dedup: ck.dedup,
        options: MatchOptions { tange_negative_j: ck.tange_negative_j },
        checkpoint_path: Some(path.to_path_buf()),
        checkpoint_interval: opts.checkpoint_interval.unwrap_or(Duration::from_secs(30)),
        exceptions_path: opts.exceptions_path.clone(),
        halt_after: opts.halt_after,
        progress: opts.progress,
    };
    run(ck, &config)
}

/// Results for a single `p`.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    lspace: u64,
    exceptions: Vec<(KnotRecord, ExceptionKind)>,
}

fn orbit(p: u64, k: u64) -> [u64; 4] {
    let inv = inverse_mod(k, p).expect("gcd(k,p) = 1");
    [k, p - k, inv, p - inv]
}

fn evaluate(p: u64, k: u64, index: &FamilyIndex) -> Option<(KnotRecord, ExceptionKind)> {
    let q = k * k % p;
    let member = index.is_member(p, k);
    match width_below(p, q, k, 2 * p) {
        Some(width) if !member => Some((KnotRecord { p, k, width }, ExceptionKind::ConjectureViolation)),
        None if member => {
            let width = width_kernel(p, q, k);
            Some((KnotRecord { p, k, width }, ExceptionKind::RealizabilityAnomaly))
        }
        _ => None,
    }
}

fn sweep_p(p: u64, dedup: bool, index: &FamilyIndex) -> Tally {
    let mut t = Tally::default();
    for k in 1..p {
        if gcd_u64(k, p) != 1 {
            continue;
        }
        let members = orbit(p, k);
        if dedup && members.iter().any(|&m| m < k) {
            continue;
        }
        let q = k * k % p;
        assert_eq!(gcd_u64(q, p), 1, "q = k^2 mod p must be a unit");
        t.checked += 1;
        if width_below(p, q, k, 2 * p).is_some() {
            t.lspace += 1;
        }
        let Some(exc) = evaluate(p, k, index) else { continue };
        if dedup {
            let mut ms = members.to_vec();
            ms.sort_unstable();
            ms.dedup();
            t.exceptions.extend(ms.into_iter().filter_map(|m| evaluate(p, m, index)));
        } else {
            t.exceptions.push(exc);
        }
    }
    t.exceptions.sort_by_key(|(r, _)| (r.p, r.k));
    t.exceptions.dedup_by_key(|(r, _)| (r.p, r.k));
    t
}

fn exception_line(record: &KnotRecord, kind: ExceptionKind, opts: MatchOptions) -> ExceptionLine {
    let mut families: Vec<String> = all_matches(record.p, record.k, opts)
        .map(|ms| ms.into_iter().map(|m| m.tag.name()).collect())
        .unwrap_or_default();
    families.sort();
    families.dedup();
    ExceptionLine {
        p: record.p,
        k: record.k,
        q: record.k * record.k % record.p,
        width: record.width,
        kind,
        families,
    }
}

fn run(mut ck: Checkpoint, config: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    let elapsed_before = ck.elapsed;
    let last = config.halt_after.map_or(ck.max_p, |h| h.clamp(ck.last_completed_p, ck.max_p));
    let first = ck.last_completed_p + 1;
    let opts = MatchOptions { tange_negative_j: ck.tange_negative_j };
    let dedup = ck.dedup;

    let mut stream = match &config.exceptions_path {
        Some(path) => Some(BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?)),
        None => None,
    };

    if first <= last {
        let index = FamilyIndex::new(ck.max_p, opts);
        let cursor = AtomicU64::new(first);
        let (tx, rx) = mpsc::channel::<(u64, Vec<Tally>)>();
        let mut outcome: Result<()> = Ok(());

        std::thread::scope(|scope| {
            for _ in 0..config.workers {
                let tx = tx.clone();
                let (cursor, index) = (&cursor, &index);
                scope.spawn(move || loop {
                    let start = cursor.fetch_add(BLOCK, Ordering::Relaxed);
                    if start > last {
                        break;
                    }
                    let end = (start + BLOCK - 1).min(last);
                    let tallies = (start..=end).map(|p| sweep_p(p, dedup, index)).collect();
                    if tx.send((start, tallies)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);

            let mut pending: BTreeMap<u64, Vec<Tally>> = BTreeMap::new();
            let mut last_write = Instant::now();
            let mut last_report = Instant::now();
            let rate_origin = ck.last_completed_p;
            for (start, tallies) in rx {
                if outcome.is_err() {
                    continue;
                }
                pending.insert(start, tallies);
                while let Some(tallies) = pending.remove(&(ck.last_completed_p + 1)) {
                    for t in tallies {
                        ck.last_completed_p += 1;
                        ck.knots_checked += t.checked;
                        ck.lspace_count += t.lspace;
                        for (record, kind) in t.exceptions {
                            if let Some(w) = stream.as_mut() {
                                let line = exception_line(&record, kind, opts);
                                let text = serde_json::to_string(&line).expect("serializable");
                                if let Err(e) = writeln!(w, "{text}").and_then(|_| w.flush()) {
                                    outcome = Err(e.into());
                                }
                            }
                            match kind {
                                ExceptionKind::ConjectureViolation => ck.conjecture_violations.push(record),
                                ExceptionKind::RealizabilityAnomaly => ck.realizability_anomalies.push(record),
                            }
                        }
                    }
                }
                ck.elapsed = elapsed_before + started.elapsed();
                if let Some(path) = &config.checkpoint_path {
                    if last_write.elapsed() >= config.checkpoint_interval {
                        if let Err(e) = ck.store(path) {
                            outcome = Err(e);
                        }
                        last_write = Instant::now();
                    }
                }
                if config.progress && last_report.elapsed() >= Duration::from_secs(2) {
                    print_progress(&ck, rate_origin, started.elapsed());
                    last_report = Instant::now();
                }
            }
        });
        outcome?;
    }

    ck.elapsed = elapsed_before + started.elapsed();
    if let Some(path) = &config.checkpoint_path {
        ck.store(path)?;
    }
    Ok(ck.report(config.workers))
}

fn print_progress(ck: &Checkpoint, rate_origin: u64, elapsed: Duration) {
    // cost per p grows like p^2, so measure progress in cubic units
    let cube = |x: u64| (x as f64).powi(3);
    let done = cube(ck.last_completed_p) - cube(rate_origin);
    let remaining = cube(ck.max_p) - cube(ck.last_completed_p);
    let secs = elapsed.as_secs_f64();
    let eta = if done > 0.0 { remaining * secs / done } else { f64::NAN };
    eprintln!(
        "p = {}/{}  knots = {}  exceptions = {}  {:.0} p/s  eta {:.0}s",
        ck.last_completed_p,
        ck.max_p,
        ck.knots_checked,
        ck.conjecture_violations.len() + ck.realizability_anomalies.len(),
        (ck.last_completed_p - rate_origin) as f64 / secs.max(1e-9),
        eta
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd_u64;

    fn brute_count(max_p: u64) -> u64 {
        (2..=max_p).map(|p| (1..p).filter(|&k| gcd_u64(k, p) == 1).count() as u64).sum()
    }

    #[test]
    fn small_sweep_counts() {
        let mut cfg = SweepConfig::new(7);
        cfg.dedup = false;
        let r = verify_conjecture(&cfg).unwrap();
        assert_eq!(r.knots_checked, brute_count(7));
        assert!(r.is_clean());
        // every knot in the p = 7 row is an L-space knot
        assert_eq!(r.lspace_count, brute_count(7));
    }

    #[test]
    fn dedup_keeps_exception_lists() {
        let mut a = SweepConfig::new(300);
        a.dedup = false;
        let mut b = a.clone();
        b.dedup = true;
        b.workers = 3;
        let (ra, rb) = (verify_conjecture(&a).unwrap(), verify_conjecture(&b).unwrap());
        assert_eq!(ra.conjecture_violations, rb.conjecture_violations);
        assert_eq!(ra.realizability_anomalies, rb.realizability_anomalies);
        assert!(rb.knots_checked < ra.knots_checked);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(verify_conjecture(&SweepConfig::new(1)), Err(Error::InvalidInput(_))));
        let mut cfg = SweepConfig::new(10);
        cfg.workers = 0;
        assert!(verify_conjecture(&cfg).is_err());
    }

    #[test]
    fn estimate_is_cubic() {
        let a = estimated_word_ops(1000, false);
        let b = estimated_word_ops(2000, false);
        assert!((b / a - 8.0).abs() < 1e-9);
        assert!((estimated_word_ops(1000, true) * 4.0 - a).abs() < 1e-3);
    }
}
