//! Verification engine: exhaustive Weyl scans with deterministic early
//! exit, a closed-form fast path, a strategy registry, report assembly, and
//! resumable checkpoints for the very large groups.
//!
//! The brute-force scan walks the canonical spanning tree of the group,
//! maintaining ζ incrementally (one reflection step per tree edge).  The
//! tree is cut at a fixed depth into independent prefix tasks so the walk
//! parallelizes without shared state beyond one atomic pruning bound; the
//! reported counterexample is the canonical one — minimal length, then
//! lexicographically least word — no matter how many workers ran or in
//! which order tasks finished.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform;
use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem};
use crate::weights::{
    all_weightings, block_partition, is_distinguished_cardinality, is_distinguished_closed_form,
    weight_classes, WeightClasses, WeightFunction,
};
use crate::weyl::{
    enumerate_extended_d, enumerate_weyl, group_order, RootAction, WeylElement, WordTree,
};
use crate::zeta::{first_nonpositive, zeta_of, IncrementalZeta, ZetaVector};

/// Verification strategy selector; each value names a registered verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Brute,
    ClosedForm,
    Both,
}

impl Mode {
    /// Registry key (also the command-line spelling).
    pub fn name(self) -> &'static str {
        match self {
            Mode::Brute => "brute",
            Mode::ClosedForm => "closedform",
            Mode::Both => "both",
        }
    }

    /// The registered verifier implementing this mode.
    pub fn verifier(self) -> &'static dyn WeightingVerifier {
        verifier_by_name(self.name()).expect("every mode is registered")
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Mode::Brute),
            "closedform" => Ok(Mode::ClosedForm),
            "both" => Ok(Mode::Both),
            other => Err(Error::parameter(format!(
                "unknown mode {other:?}; expected brute, closedform, or both"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs for the brute-force scan.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Worker threads; 1 keeps the scan purely serial.
    pub jobs: usize,
    /// Tree depth at which the walk splits into parallel prefix tasks.
    pub split_depth: usize,
    /// Type D only: scan the extension of the group by the diagram
    /// involution, checking every column except the excluded fork column
    /// γ_{n−1} (equivalent to the default, and crosschecked against it).
    pub d_extended: bool,
    /// Record completed prefix tasks here and resume from them.
    pub checkpoint: Option<PathBuf>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            jobs: 1,
            split_depth: 4,
            d_extended: false,
            checkpoint: None,
        }
    }
}

/// What a scan concluded about one weighting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    AllPositive,
    Counterexample,
}

/// A Weyl element witnessing non-positivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Canonical word as 1-based letters joined by dots; empty = identity.
    pub word: String,
    /// 1-based index of the failing simple root.
    pub gamma_index: usize,
    /// The full ζ vector at the word.
    pub zeta: ZetaVector,
}

/// One weighting's verdict: both sides of the positivity characterization
/// plus the witness and scan statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// The weighting as a digit string over {0,2}, γ₁ first.
    pub rho: String,
    /// The cardinality criterion `#V₂ = #V₀ + rank`.
    pub distinguished: bool,
    /// The closed-form block classification; `null` for exceptional types.
    pub bala_carter: Option<bool>,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Elements examined (occupancy vectors for the closed-form verifier).
    pub scanned: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub weightings: usize,
    pub distinguished: usize,
    pub counterexamples: usize,
    pub scanned: u64,
    pub wall_ms: u64,
}

/// Full per-family verification report; serializes to the stable JSON shape
/// consumed by the command-line front end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub family: String,
    pub rank: usize,
    pub weightings: Vec<Verdict>,
    /// Whether `outcome = AllPositive ⟺ distinguished` held for every ρ.
    pub theorem_holds: bool,
    pub totals: Totals,
}

impl Report {
    /// Clears every wall-clock field so reports compare byte-for-byte.
    pub fn zero_timing(&mut self) {
        for verdict in &mut self.weightings {
            verdict.wall_ms = 0;
        }
        self.totals.wall_ms = 0;
    }
}

fn render_word(word: &[u8]) -> String {
    word.iter()
        .map(|&l| (l + 1).to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn parse_rendered_word(s: &str) -> Result<Vec<u8>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|part| {
            part.parse::<u8>()
                .ok()
                .and_then(|v| v.checked_sub(1))
                .ok_or_else(|| Error::parameter(format!("malformed word letter {part:?}")))
        })
        .collect()
}

/// A verification strategy.  Strategies register themselves by name and are
/// selected through [`Mode`] (or directly by name from the command line).
pub trait WeightingVerifier: Sync {
    /// Stable registry key.
    fn name(&self) -> &'static str;
    /// One-line human description.
    fn describe(&self) -> &'static str;
    /// Whether the strategy is defined for this root system.
    fn supports(&self, rs: &RootSystem) -> bool;
    fn verify(
        &self,
        rs: &RootSystem,
        rho: &WeightFunction,
        options: &ScanOptions,
    ) -> Result<Verdict>;
}

struct BruteVerifier;
struct ClosedFormVerifier;
struct BothVerifier;

static BRUTE: BruteVerifier = BruteVerifier;
static CLOSED_FORM: ClosedFormVerifier = ClosedFormVerifier;
static BOTH: BothVerifier = BothVerifier;

/// All registered strategies.
pub fn verifier_registry() -> [&'static dyn WeightingVerifier; 3] {
    [&BRUTE, &CLOSED_FORM, &BOTH]
}

/// Looks a strategy up by its registry key.
pub fn verifier_by_name(name: &str) -> Option<&'static dyn WeightingVerifier> {
    verifier_registry().into_iter().find(|v| v.name() == name)
}

/// Builds the final verdict and enforces its invariants: the stored ζ
/// vector must reproduce under direct re-evaluation and its failing
/// coordinate must be ≤ 0.
fn finish_verdict(
    rs: &RootSystem,
    rho: &WeightFunction,
    counterexample: Option<Counterexample>,
    scanned: u64,
    start: Instant,
) -> Result<Verdict> {
    if let Some(ce) = &counterexample {
        let word = parse_rendered_word(&ce.word)?;
        let element = WeylElement::from_word(rs, &word)?;
        let classes = weight_classes(rs, rho)?;
        let direct = zeta_of(rs, &classes, &element);
        let failing = ce
            .gamma_index
            .checked_sub(1)
            .and_then(|g| direct.get(g).copied());
        if direct != ce.zeta || failing.map_or(true, |z| z > 0) {
            return Err(Error::mismatch(format!(
                "counterexample for ρ={rho} does not re-evaluate: stored {:?}, direct {direct:?}",
                ce.zeta
            )));
        }
    }
    Ok(Verdict {
        rho: rho.to_string(),
        distinguished: is_distinguished_cardinality(rs, rho)?,
        bala_carter: rs
            .family()
            .is_classical()
            .then(|| is_distinguished_closed_form(rs.family(), rs.rank(), rho))
            .transpose()?,
        outcome: if counterexample.is_some() {
            Outcome::Counterexample
        } else {
            Outcome::AllPositive
        },
        counterexample,
        scanned,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

impl WeightingVerifier for BruteVerifier {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn describe(&self) -> &'static str {
        "exhaustive Weyl-group scan with incremental ζ and early exit"
    }

    fn supports(&self, _rs: &RootSystem) -> bool {
        true
    }

    fn verify(
        &self,
        rs: &RootSystem,
        rho: &WeightFunction,
        options: &ScanOptions,
    ) -> Result<Verdict> {
        let start = Instant::now();
        let classes = weight_classes(rs, rho)?;
        let scan = brute_scan(rs, rho, &classes, options)?;
        let counterexample = scan.failure.map(|(word, gamma, zeta)| Counterexample {
            word: render_word(&word),
            gamma_index: gamma + 1,
            zeta,
        });
        finish_verdict(rs, rho, counterexample, scan.scanned, start)
    }
}

impl WeightingVerifier for ClosedFormVerifier {
    fn name(&self) -> &'static str {
        "closedform"
    }

    fn describe(&self) -> &'static str {
        "block-formula occupancy scan (classical families)"
    }

    fn supports(&self, rs: &RootSystem) -> bool {
        rs.family().is_classical()
    }

    fn verify(
        &self,
        rs: &RootSystem,
        rho: &WeightFunction,
        options: &ScanOptions,
    ) -> Result<Verdict> {
        let _ = options;
        if !self.supports(rs) {
            return Err(Error::unsupported(format!(
                "closed-form verification covers the classical families, not {}",
                rs.family()
            )));
        }
        let start = Instant::now();
        let scan = closedform::verdict(rs, rho)?;
        let counterexample = scan.counterexample.map(|(word, gamma, zeta)| Counterexample {
            word: render_word(&word),
            gamma_index: gamma + 1,
            zeta,
        });
        finish_verdict(rs, rho, counterexample, scan.scanned, start)
    }
}

impl WeightingVerifier for BothVerifier {
    fn name(&self) -> &'static str {
        "both"
    }

    fn describe(&self) -> &'static str {
        "brute scan crosschecked against the closed form"
    }

    fn supports(&self, rs: &RootSystem) -> bool {
        rs.family().is_classical()
    }

    fn verify(
        &self,
        rs: &RootSystem,
        rho: &WeightFunction,
        options: &ScanOptions,
    ) -> Result<Verdict> {
        if !self.supports(rs) {
            return Err(Error::unsupported(format!(
                "the crosschecking mode needs the closed form, which covers the \
                 classical families, not {}",
                rs.family()
            )));
        }
        let start = Instant::now();
        let mut verdict = BRUTE.verify(rs, rho, options)?;
        let closed = CLOSED_FORM.verify(rs, rho, options)?;
        if verdict.outcome != closed.outcome {
            return Err(Error::mismatch(format!(
                "ρ={rho}: brute scan concluded {:?} but the closed form concluded {:?}",
                verdict.outcome, closed.outcome
            )));
        }
        verdict.wall_ms = start.elapsed().as_millis() as u64;
        Ok(verdict)
    }
}

/// Verifies one weighting with the given strategy.
pub fn verify_weighting(
    rs: &RootSystem,
    rho: &WeightFunction,
    mode: Mode,
    options: &ScanOptions,
) -> Result<Verdict> {
    mode.verifier().verify(rs, rho, options)
}

/// Verifies every weighting and assembles the report.  Scans run cheapest
/// first (non-distinguished weightings exit early); the report lists
/// verdicts in the canonical weighting order regardless.
pub fn verify_all(rs: &RootSystem, mode: Mode, options: &ScanOptions) -> Result<Report> {
    let start = Instant::now();
    let weightings = all_weightings(rs.rank());
    let flags = weightings
        .iter()
        .map(|rho| is_distinguished_cardinality(rs, rho))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..weightings.len()).collect();
    order.sort_by_key(|&i| (flags[i], i));

    let mut verdicts: Vec<Option<Verdict>> = vec![None; weightings.len()];
    for &i in &order {
        let rho = &weightings[i];
        log::info!(
            "{}{} ρ={} ({})",
            rs.family(),
            rs.rank(),
            rho,
            if flags[i] { "distinguished" } else { "expect counterexample" }
        );
        let per_rho = derive_options(options, rho);
        verdicts[i] = Some(verify_weighting(rs, rho, mode, &per_rho)?);
    }
    let weightings: Vec<Verdict> = verdicts
        .into_iter()
        .map(|v| v.expect("every weighting was scheduled"))
        .collect();

    let theorem_holds = weightings
        .iter()
        .all(|v| (v.outcome == Outcome::AllPositive) == v.distinguished);
    let totals = Totals {
        weightings: weightings.len(),
        distinguished: weightings.iter().filter(|v| v.distinguished).count(),
        counterexamples: weightings
            .iter()
            .filter(|v| v.counterexample.is_some())
            .count(),
        scanned: weightings.iter().map(|v| v.scanned).sum(),
        wall_ms: start.elapsed().as_millis() as u64,
    };
    Ok(Report {
        family: rs.family().to_string(),
        rank: rs.rank(),
        weightings,
        theorem_holds,
        totals,
    })
}

/// Checkpoints are per weighting: a shared base path gets a `.ρ` suffix.
fn derive_options(options: &ScanOptions, rho: &WeightFunction) -> ScanOptions {
    let mut derived = options.clone();
    if let Some(base) = &derived.checkpoint {
        let mut name = base
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_default();
        name.push(format!(".{rho}"));
        derived.checkpoint = Some(base.with_file_name(name));
    }
    derived
}

/// Exhaustive agreement check between the closed-form machinery and direct
/// scans: verdict agreement for every weighting, plus coordinate-level
/// agreement of the block formula with ζ at every group element (the
/// extended group for type D, whose occupancies skip one fork column).
pub fn crosscheck(rs: &RootSystem, options: &ScanOptions) -> Result<bool> {
    if !rs.family().is_classical() {
        return Err(Error::unsupported(format!(
            "the closed form under crosscheck covers the classical families, not {}",
            rs.family()
        )));
    }
    for rho in all_weightings(rs.rank()) {
        let brute = BRUTE.verify(rs, &rho, options)?;
        let closed = closedform::verdict(rs, &rho)?;
        if (brute.outcome == Outcome::AllPositive) != closed.all_positive {
            return Ok(false);
        }
        let blocks = block_partition(rs.family(), rs.rank(), &rho)?;
        if blocks.twist_applied() {
            // The tail-normalized weighting covers the same formulas; the
            // verdict comparison above already exercised the conversion.
            continue;
        }
        let classes = weight_classes(rs, &rho)?;
        if rs.family() == Family::D {
            for el in enumerate_extended_d(rs)? {
                if !coordinates_match(rs, &blocks, &classes, &el)? {
                    return Ok(false);
                }
            }
        } else {
            for el in enumerate_weyl(rs) {
                if !coordinates_match(rs, &blocks, &classes, &el)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn coordinates_match<A>(
    rs: &RootSystem,
    blocks: &crate::weights::BlockPartition,
    classes: &WeightClasses,
    w: &A,
) -> Result<bool>
where
    A: RootAction + ?Sized,
{
    let direct = zeta_of(rs, classes, w);
    let pi = crate::lift::position_perm_of(rs, w)?;
    for k in 1..=rs.rank() {
        if rs.family() == Family::D && k == rs.rank() - 1 {
            continue;
        }
        let occupancy = closedform::occupancy_of(blocks, &pi, k);
        if closedform::zeta_coordinate(blocks, &occupancy)? != direct[k - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// The brute-force scan.

struct ScanOutcome {
    failure: Option<(Vec<u8>, usize, ZetaVector)>,
    scanned: u64,
}

/// `(length, word)` order; the canonical counterexample minimizes this.
fn candidate_better(best: &Option<(usize, Vec<u8>)>, len: usize, word: &[u8]) -> bool {
    match best {
        None => true,
        Some((best_len, best_word)) => (len, word) < (*best_len, best_word.as_slice()),
    }
}

/// Failure predicate at one tree node.  The extended strategy checks both
/// cosets of the twist on all columns except the excluded fork column; the
/// twisted coset sees ζ with the two fork entries swapped.
fn zeta_fails(zeta: &[i64], d_extended: bool) -> bool {
    if !d_extended {
        return zeta.iter().any(|&z| z <= 0);
    }
    let n = zeta.len();
    let skip = n - 2;
    let plain = (0..n).any(|g| g != skip && zeta[g] <= 0);
    let swapped = |g: usize| match g {
        _ if g == n - 1 => zeta[n - 2],
        _ if g == n - 2 => zeta[n - 1],
        _ => zeta[g],
    };
    plain || (0..n).any(|g| g != skip && swapped(g) <= 0)
}

fn brute_scan(
    rs: &RootSystem,
    rho: &WeightFunction,
    classes: &WeightClasses,
    options: &ScanOptions,
) -> Result<ScanOutcome> {
    if options.jobs == 0 {
        return Err(Error::parameter("jobs must be at least 1"));
    }
    if options.d_extended && rs.family() != Family::D {
        return Err(Error::parameter(format!(
            "the extended-group scan is a type-D strategy, not {}",
            rs.family()
        )));
    }

    let mut counts = vec![0u64; rs.positive_count() + 1];
    let mut best: Option<(usize, Vec<u8>)> = None;
    let mut prefixes: Vec<Vec<u8>> = Vec::new();
    {
        let mut tree = WordTree::new(rs);
        let mut zeta = IncrementalZeta::new(rs, classes);
        serial_pass(
            &mut tree,
            &mut zeta,
            options,
            &mut counts,
            &mut best,
            &mut prefixes,
        );
    }

    // Any failure shallower than the split depth beats everything a task
    // could find, so tasks only run while the serial pass stayed positive.
    if best.is_none() && !prefixes.is_empty() {
        for result in run_tasks(rs, rho, classes, &prefixes, options)? {
            for (offset, c) in result.counts.iter().enumerate() {
                counts[options.split_depth + offset] += c;
            }
            if let Some((len, word)) = result.best {
                if candidate_better(&best, len, &word) {
                    best = Some((len, word));
                }
            }
        }
    }

    let coset_factor = if options.d_extended { 2 } else { 1 };
    match best {
        None => {
            let total: u64 = counts.iter().sum();
            let expected = group_order(rs.family(), rs.rank())?;
            if u128::from(total) != expected {
                return Err(Error::mismatch(format!(
                    "scan visited {total} elements but the group has {expected}"
                )));
            }
            Ok(ScanOutcome {
                failure: None,
                scanned: total * coset_factor,
            })
        }
        Some((len, word)) => {
            let scanned: u64 = counts[..=len].iter().sum();
            let element = WeylElement::from_word(rs, &word)?;
            let zeta = zeta_of(rs, classes, &element);
            let gamma = first_nonpositive(&zeta).ok_or_else(|| {
                Error::mismatch("scan flagged a word whose ζ re-evaluates strictly positive")
            })?;
            Ok(ScanOutcome {
                failure: Some((word, gamma, zeta)),
                scanned: scanned * coset_factor,
            })
        }
    }
}

/// Walks all nodes above the split depth, recording the prefix of every
/// subtree rooted exactly at the split depth.
fn serial_pass(
    tree: &mut WordTree<'_>,
    zeta: &mut IncrementalZeta,
    options: &ScanOptions,
    counts: &mut [u64],
    best: &mut Option<(usize, Vec<u8>)>,
    prefixes: &mut Vec<Vec<u8>>,
) {
    let depth = tree.depth();
    if depth == options.split_depth {
        prefixes.push(tree.path().to_vec());
        return;
    }
    counts[depth] += 1;
    if zeta_fails(zeta.zeta(), options.d_extended) {
        let word = tree.canonical_word();
        if candidate_better(best, depth, &word) {
            *best = Some((depth, word));
        }
    }
    if let Some((len, _)) = best {
        if depth + 1 > *len {
            return;
        }
    }
    let rs = tree.rs();
    for i in 0..rs.rank() {
        if tree.is_child_letter(i) {
            tree.descend(i);
            zeta.step(rs, i);
            serial_pass(tree, zeta, options, counts, best, prefixes);
            let letter = tree.ascend();
            zeta.step(rs, letter);
        }
    }
}

struct TaskResult {
    prefix: Vec<u8>,
    /// Elements per depth, offset from the split depth.
    counts: Vec<u64>,
    best: Option<(usize, Vec<u8>)>,
}

fn run_tasks(
    rs: &RootSystem,
    rho: &WeightFunction,
    classes: &WeightClasses,
    prefixes: &[Vec<u8>],
    options: &ScanOptions,
) -> Result<Vec<TaskResult>> {
    let mut completed: HashMap<Vec<u8>, TaskResult> = HashMap::new();
    let mut sink: Option<Mutex<fs::File>> = None;
    if let Some(path) = &options.checkpoint {
        let header = checkpoint_header(rs, rho, options);
        completed = load_checkpoint(path, &header, prefixes)?;
        let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        if file.metadata()?.len() == 0 {
            writeln!(&file, "{header}")?;
        }
        sink = Some(Mutex::new(file));
    }

    let best_len = AtomicUsize::new(usize::MAX);
    for result in completed.values() {
        if let Some((len, _)) = &result.best {
            best_len.fetch_min(*len, Ordering::Relaxed);
        }
    }
    let pending: Vec<Vec<u8>> = prefixes
        .iter()
        .filter(|p| !completed.contains_key(p.as_slice()))
        .cloned()
        .collect();

    let worker = |prefix: &Vec<u8>| -> Result<TaskResult> {
        let result = run_one_task(rs, classes, prefix, options, &best_len);
        if let Some(sink) = &sink {
            let file = sink.lock().expect("checkpoint writer poisoned");
            append_task_line(&*file, &result)?;
        }
        Ok(result)
    };
    let fresh: Vec<TaskResult> = if options.jobs == 1 {
        pending.iter().map(worker).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::parameter(format!("cannot start {} workers: {e}", options.jobs)))?;
        pool.install(|| pending.par_iter().map(worker).collect::<Result<Vec<_>>>())?
    };

    for result in fresh {
        completed.insert(result.prefix.clone(), result);
    }
    Ok(prefixes
        .iter()
        .map(|p| completed.remove(p.as_slice()).expect("all tasks accounted for"))
        .collect())
}

fn run_one_task(
    rs: &RootSystem,
    classes: &WeightClasses,
    prefix: &[u8],
    options: &ScanOptions,
    best_len: &AtomicUsize,
) -> TaskResult {
    let mut tree = WordTree::new(rs);
    let mut zeta = IncrementalZeta::new(rs, classes);
    for &letter in prefix {
        tree.descend(letter as usize);
        zeta.step(rs, letter as usize);
    }
    let mut counts = vec![0u64; rs.positive_count() + 1 - prefix.len()];
    let mut best = None;
    task_pass(
        &mut tree,
        &mut zeta,
        prefix.len(),
        options.d_extended,
        best_len,
        &mut counts,
        &mut best,
    );
    TaskResult {
        prefix: prefix.to_vec(),
        counts,
        best,
    }
}

fn task_pass(
    tree: &mut WordTree<'_>,
    zeta: &mut IncrementalZeta,
    base_depth: usize,
    d_extended: bool,
    best_len: &AtomicUsize,
    counts: &mut [u64],
    best: &mut Option<(usize, Vec<u8>)>,
) {
    let depth = tree.depth();
    counts[depth - base_depth] += 1;
    if zeta_fails(zeta.zeta(), d_extended) {
        let word = tree.canonical_word();
        if candidate_better(best, depth, &word) {
            *best = Some((depth, word));
            best_len.fetch_min(depth, Ordering::Relaxed);
        }
    }
    // Deeper nodes cannot beat the best length found anywhere so far; ties
    // at the bound itself are still visited for the lexicographic merge.
    if depth + 1 > best_len.load(Ordering::Relaxed) {
        return;
    }
    let rs = tree.rs();
    for i in 0..rs.rank() {
        if tree.is_child_letter(i) {
            tree.descend(i);
            zeta.step(rs, i);
            task_pass(tree, zeta, base_depth, d_extended, best_len, counts, best);
            let letter = tree.ascend();
            zeta.step(rs, letter);
        }
    }
}

// ---------------------------------------------------------------------------
// Checkpoint files: a header describing the run, then one line per
// completed prefix task.

fn checkpoint_header(rs: &RootSystem, rho: &WeightFunction, options: &ScanOptions) -> String {
    format!(
        "# scan family={} rank={} rho={} split={} extended={} format=1",
        rs.family(),
        rs.rank(),
        rho,
        options.split_depth,
        options.d_extended
    )
}

fn append_task_line(mut file: &fs::File, result: &TaskResult) -> Result<()> {
    let counts = result
        .counts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    match &result.best {
        None => writeln!(file, "{}\tok\t{counts}", render_word(&result.prefix))?,
        Some((_, word)) => writeln!(
            file,
            "{}\tfail\t{counts}\t{}",
            render_word(&result.prefix),
            render_word(word)
        )?,
    }
    Ok(())
}

/// Reads completed tasks back.  A missing file is an empty checkpoint; a
/// header for different run parameters is an error; a torn trailing line
/// (interrupted write) is skipped and its task simply re-runs.
fn load_checkpoint(
    path: &PathBuf,
    header: &str,
    prefixes: &[Vec<u8>],
) -> Result<HashMap<Vec<u8>, TaskResult>> {
    let mut completed = HashMap::new();
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(completed),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        None => return Ok(completed),
        Some(first) if first == header => {}
        Some(first) => {
            return Err(Error::Checkpoint(format!(
                "{} was written by a different run: found {first:?}, expected {header:?}",
                path.display()
            )))
        }
    }
    let known: HashSet<&[u8]> = prefixes.iter().map(Vec::as_slice).collect();
    for line in lines {
        let fields: Vec<&str> = line.split('\t').collect();
        let parsed = parse_task_line(&fields);
        match parsed {
            Some(result) if known.contains(result.prefix.as_slice()) => {
                completed.insert(result.prefix.clone(), result);
            }
            Some(result) => {
                return Err(Error::Checkpoint(format!(
                    "{} records task {:?} which this run never scheduled",
                    path.display(),
                    render_word(&result.prefix)
                )));
            }
            None => log::warn!("skipping malformed checkpoint line: {line:?}"),
        }
    }
    Ok(completed)
}

fn parse_task_line(fields: &[&str]) -> Option<TaskResult> {
    if fields.len() < 3 {
        return None;
    }
    let prefix = parse_rendered_word(fields[0]).ok()?;
    let counts: Vec<u64> = fields[2]
        .split(',')
        .map(|c| c.parse().ok())
        .collect::<Option<_>>()?;
    let best = match fields[1] {
        "ok" => None,
        "fail" => {
            let word = parse_rendered_word(fields.get(3)?).ok()?;
            Some((word.len(), word))
        }
        _ => return None,
    };
    Some(TaskResult {
        prefix,
        counts,
        best,
    })
}
