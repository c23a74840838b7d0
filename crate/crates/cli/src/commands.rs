//! `dist`, `gen` and `check`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmdist::boxdist::{box_distance, dis_coupling, BoxOptions, Mode};
use mmdist::checks::{axioms_suite, certify_pair_outcome, describe_space, lemmas_suite, oracles_suite, Outcome, SuiteConfig};
use mmdist::eurandom::{dis_eur, eurandom_distance, EurOptions};
use mmdist::generate::{cube, cycle, line, random_space, rng};
use mmdist::observable::{dconc_bounds, dconc_pi_bounds, inner_kf_min, ConcEffort, LowerCertificate, Side};
use mmdist::prohorov::prohorov_strassen;
use mmdist::transport::grid::GridConfig;
use mmdist::transport::SearchBudget;
use mmdist::{mm_isomorphic, MMSpace};

use crate::document::{load, load_dir, Document};
use crate::error::CliError;
use crate::report::{render_outcome, Format, Report, Witness};

#[derive(Debug, Parser)]
#[command(name = "mmdist", version, about = "Distances between finite metric measure spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a distance between two space documents.
    Dist {
        kind: DistKind,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        options: DistOptions,
    },
    /// Print a generated space document.
    Gen {
        kind: GenKind,
        /// Number of points (dimension for `cube`).
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        name: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run invariant suites, optionally also on a directory of documents.
    Check {
        suite: Suite,
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Random cases per check instead of the defaults.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Prohorov,
    Box,
    Eurandom,
    Dconc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Random,
    Cycle,
    Line,
    Cube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Lemmas,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct DistOptions {
    /// Fail with exit code 3 instead of falling back to bounds.
    #[arg(long, conflicts_with = "heuristic")]
    pub exact: bool,
    /// Skip exact searches and report upper bounds.
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Clique budget for exact box computations.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Allowed gap between a reported value and its re-evaluated certificate.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

impl Default for DistOptions {
    fn default() -> Self {
        DistOptions { exact: false, heuristic: false, seed: 0, budget: None, tolerance: 1e-9, format: Format::Table }
    }
}

impl DistOptions {
    fn mode(&self) -> Mode {
        if self.exact {
            Mode::Exact
        } else if self.heuristic {
            Mode::Heuristic
        } else {
            Mode::Auto
        }
    }

    fn box_options(&self) -> BoxOptions {
        let mut o = BoxOptions { mode: self.mode(), ..BoxOptions::default() };
        if let Some(b) = self.budget {
            o.clique_budget = b;
        }
        o
    }

    fn eur_options(&self) -> EurOptions {
        let mut o = EurOptions { search: SearchBudget { seed: self.seed, ..SearchBudget::default() }, ..EurOptions::default() };
        if self.heuristic {
            o.grid.max_dim = 0;
        }
        o
    }

    fn conc_effort(&self) -> ConcEffort {
        let mut e = ConcEffort { seed: self.seed, ..ConcEffort::default() };
        e.search.seed = self.seed;
        if let Some(b) = self.budget {
            e.clique_budget = b;
        }
        if self.heuristic {
            e.coupling_grid = GridConfig { max_dim: 0, ..e.coupling_grid };
            e.lower_grid = GridConfig { max_dim: 0, ..e.lower_grid };
        }
        e
    }
}

/// Parses arguments already split from the command line and runs them.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Dist { kind, a, b, options } => {
            let report = cmd_dist(kind, &a, &b, &options)?;
            writeln!(out, "{}", report.render(options.format).trim_end()).map_err(io_err)?;
            if !report.reproduced(options.tolerance) {
                writeln!(err, "certificate re-evaluates to {}, reported {}", report.reevaluated, report.headline()).map_err(io_err)?;
                return Ok(1);
            }
            Ok(0)
        }
        Command::Gen { kind, n, seed, name, output } => {
            let doc = cmd_gen(kind, n, seed, name)?;
            match output {
                Some(p) => std::fs::write(&p, doc.print()).map_err(|source| CliError::Io { path: p, source })?,
                None => out.write_all(doc.print().as_bytes()).map_err(io_err)?,
            }
            Ok(0)
        }
        Command::Check { suite, corpus, seed, tolerance, count, format } => {
            let cfg = SuiteConfig { seed, count, tolerance };
            let outcomes = cmd_check(suite, corpus.as_deref(), &cfg)?;
            for o in &outcomes {
                writeln!(out, "{}", render_outcome(o, format)).map_err(io_err)?;
            }
            Ok(if outcomes.iter().all(Outcome::passed) { 0 } else { 1 })
        }
    }
}

fn io_err(source: std::io::Error) -> CliError {
    CliError::Io { path: PathBuf::from("<stdout>"), source }
}

pub fn cmd_dist(kind: DistKind, a: &Path, b: &Path, options: &DistOptions) -> Result<Report, CliError> {
    let (da, x) = load(a)?;
    let (db, y) = load(b)?;
    let start = Instant::now();
    let mut report = match kind {
        DistKind::Prohorov => prohorov_report(&da, &x, &db, &y)?,
        DistKind::Box => box_report(&da, &x, &db, &y, options)?,
        DistKind::Eurandom => eur_report(&da, &x, &db, &y, options)?,
        DistKind::Dconc => dconc_report(&da, &x, &db, &y, options)?,
    };
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn prohorov_report(da: &Document, x: &MMSpace, db: &Document, y: &MMSpace) -> Result<Report, CliError> {
    if x.space().rows() != y.space().rows() {
        return Err(CliError::Usage("prohorov needs two measures on the same metric space (identical dist matrices)".into()));
    }
    let c = prohorov_strassen(x.mass(), y.mass(), x.space())?;
    let mut r = Report::new("prohorov", &da.name, &db.name, &c.coupling).with_pairset(&c.pairset);
    r.value = Some(c.value);
    r.threshold = Some(c.threshold);
    r.flags.push("exact".into());
    r.reevaluated = c.evaluate();
    Ok(r)
}

fn box_report(da: &Document, x: &MMSpace, db: &Document, y: &MMSpace, o: &DistOptions) -> Result<Report, CliError> {
    let c = box_distance(x, y, o.box_options())?;
    let mut r = Report::new("box", &da.name, &db.name, &c.coupling).with_pairset(&c.pairset);
    r.value = Some(c.value);
    r.threshold = Some(c.threshold);
    r.flags.push(if c.exact { "exact" } else { "heuristic upper bound" }.into());
    if c.downgraded {
        r.flags.push("downgraded: clique budget exceeded".into());
    }
    r.reevaluated = if c.verify(x, y, o.tolerance).is_ok() { c.evaluate() } else { f64::NAN };
    Ok(r)
}

fn eur_report(da: &Document, x: &MMSpace, db: &Document, y: &MMSpace, o: &DistOptions) -> Result<Report, CliError> {
    let c = eurandom_distance(x, y, &o.eur_options())?;
    if o.exact && c.certified_error.is_none() {
        return Err(mmdist::Error::Uncertified("coupling polytope dimension exceeds the grid budget").into());
    }
    let mut r = Report::new("eurandom", &da.name, &db.name, &c.coupling);
    r.upper = Some(c.upper);
    r.epsilon = Some(c.epsilon);
    r.certified_error = c.certified_error;
    match c.lower() {
        Some(l) => {
            r.lower = Some(l);
            if c.is_exact() {
                r.value = Some(c.upper);
                r.flags.push("exact".into());
            } else {
                r.flags.push(format!("grid-certified (step {})", c.grid_step.unwrap_or(0.0)));
            }
        }
        None => r.flags.push("upper bound only".into()),
    }
    r.reevaluated = dis_eur(&c.coupling, x, y)?.0;
    Ok(r)
}

fn dconc_report(da: &Document, x: &MMSpace, db: &Document, y: &MMSpace, o: &DistOptions) -> Result<Report, CliError> {
    let effort = o.conc_effort();
    let b = dconc_bounds(x, y, &effort)?;
    if o.exact && matches!(b.certificate, LowerCertificate::Uncertified) {
        return Err(mmdist::Error::Uncertified("no global lower bound for the observable distance").into());
    }
    let mut r = Report::new("dconc", &da.name, &db.name, &b.coupling);
    r.lower = Some(b.lower);
    r.upper = Some(b.upper);
    let exact = b.is_exact();
    r.flags.push(match b.certificate {
        LowerCertificate::UniqueCoupling if exact => "exact (unique coupling)".into(),
        LowerCertificate::UniqueCoupling | LowerCertificate::PerCoupling => "bracket (unique coupling)".into(),
        LowerCertificate::Grid { step } if exact => format!("exact (grid step {step})"),
        LowerCertificate::Grid { step } => format!("grid-certified bracket (step {step})"),
        LowerCertificate::Uncertified => "upper bound only".into(),
    });
    if !b.upper_exact {
        r.flags.push("upper from heuristic distortion".into());
    }
    if let (Some(f), Some(side)) = (&b.witness_f, b.witness_side) {
        r.witness = Some(Witness { side: if side == Side::X { "X" } else { "Y" }, values: f.values().to_vec() });
    }
    let again = dconc_pi_bounds(&b.coupling, x, y, &effort)?;
    r.reevaluated = again.upper;
    if let (Some(f), Some(side), LowerCertificate::UniqueCoupling) = (&b.witness_f, b.witness_side, b.certificate) {
        let v = match side {
            Side::X => inner_kf_min(f.values(), &b.coupling, y.space())?,
            Side::Y => inner_kf_min(f.values(), &b.coupling.transpose(), x.space())?,
        };
        if (v.value - b.lower).abs() > o.tolerance {
            r.reevaluated = f64::NAN;
        }
    }
    Ok(r)
}

pub fn cmd_gen(kind: GenKind, n: usize, seed: u64, name: Option<String>) -> Result<Document, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let space = match kind {
        GenKind::Random => random_space(n, &mut rng(seed))?,
        GenKind::Line => MMSpace::uniform(line(n)?),
        GenKind::Cycle => MMSpace::uniform(cycle(n)?),
        GenKind::Cube => MMSpace::uniform(cube(n)?),
    };
    let kind_name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    let name = name.unwrap_or_else(|| match kind {
        GenKind::Random => format!("{kind_name}-{n}-seed{seed}"),
        _ => format!("{kind_name}-{n}"),
    });
    Ok(Document::from_space(name, &space))
}

pub fn cmd_check(suite: Suite, corpus: Option<&Path>, cfg: &SuiteConfig) -> Result<Vec<Outcome>, CliError> {
    let docs = match corpus {
        Some(dir) => load_dir(dir)?,
        None => Vec::new(),
    };
    let spaces: Vec<(String, MMSpace)> = docs.into_iter().map(|(_, d, s)| (d.name, s)).collect();
    let mut out = Vec::new();
    if suite == Suite::All {
        out.extend(oracles_suite(cfg));
    }
    if matches!(suite, Suite::Axioms | Suite::All) {
        out.extend(axioms_suite(cfg));
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        out.extend(lemmas_suite(cfg));
    }
    if !spaces.is_empty() {
        out.extend(corpus_checks(suite, &spaces, cfg.tolerance));
    }
    Ok(out)
}

/// Largest `|X|·|Y|` for which corpus pairs get every distance and certificate.
const CORPUS_FULL_PAIRS: usize = 16;

struct Tally {
    name: String,
    cases: usize,
    failures: Vec<String>,
    start: Instant,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { name: name.into(), cases: 0, failures: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn finish(self) -> Outcome {
        Outcome { name: self.name, cases: self.cases, failures: self.failures, elapsed: self.start.elapsed() }
    }
}

fn corpus_checks(suite: Suite, spaces: &[(String, MMSpace)], tol: f64) -> Vec<Outcome> {
    let n = spaces.len();
    let show = |i: usize| format!("{} = {}", spaces[i].0, describe_space(&spaces[i].1));
    let small = |i: usize, j: usize| spaces[i].1.len() * spaces[j].1.len() <= CORPUS_FULL_PAIRS;

    let mut boxes = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            boxes[i][j] = box_distance(&spaces[i].1, &spaces[j].1, BoxOptions::default()).ok().filter(|c| c.exact).map(|c| c.value);
        }
    }

    let mut out = Vec::new();
    if matches!(suite, Suite::Axioms | Suite::All) {
        let mut t = Tally::new("corpus: box symmetry and zero iff isomorphic");
        for i in 0..n {
            for j in i..n {
                let (Some(a), Some(b)) = (boxes[i][j], boxes[j][i]) else { continue };
                t.check(a == b, || format!("{}, {}: box {a} vs {b}", show(i), show(j)));
                let iso = mm_isomorphic(&spaces[i].1, &spaces[j].1).is_some();
                t.check((a == 0.0) == iso, || format!("{}, {}: box {a}, isomorphic {iso}", show(i), show(j)));
            }
        }
        out.push(t.finish());

        let mut t = Tally::new("corpus: box triangle inequality");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (Some(ij), Some(jk), Some(ik)) = (boxes[i][j], boxes[j][k], boxes[i][k]) else { continue };
                    t.check(ik <= ij + jk + tol, || format!("{}, {}, {}: {ik} > {ij} + {jk}", show(i), show(j), show(k)));
                }
            }
        }
        out.push(t.finish());

        let mut t = Tally::new("corpus: certificate re-evaluation");
        for i in 0..n {
            for j in 0..n {
                if small(i, j) {
                    for f in certify_pair_outcome(&spaces[i].1, &spaces[j].1, tol) {
                        t.check(false, || f);
                    }
                    t.cases += 1;
                } else {
                    let c = box_distance(&spaces[i].1, &spaces[j].1, BoxOptions::default());
                    t.check(c.is_ok_and(|c| c.verify(&spaces[i].1, &spaces[j].1, tol).is_ok()), || {
                        format!("{}, {}: box certificate", show(i), show(j))
                    });
                }
            }
        }
        out.push(t.finish());
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        let mut t = Tally::new("corpus: d_Eur <= 2 box and dconc <= box");
        for i in 0..n {
            for j in 0..n {
                let Some(b) = boxes[i][j].filter(|_| small(i, j)) else { continue };
                let (x, y) = (&spaces[i].1, &spaces[j].1);
                let checked = (|| {
                    let c = box_distance(x, y, BoxOptions::exact())?;
                    let e = dis_eur(&c.coupling, x, y)?.0;
                    let d = dconc_bounds(x, y, &ConcEffort::default())?.upper;
                    let dis = dis_coupling(&c.coupling, x, y, Mode::Exact)?.0;
                    Ok::<_, mmdist::Error>((e, d, dis))
                })();
                match checked {
                    Ok((e, d, dis)) => {
                        t.check(e <= 2.0 * b + tol, || format!("{}, {}: dis_eur(pi_box) = {e} > 2 * {b}", show(i), show(j)));
                        t.check(d <= b + tol, || format!("{}, {}: dconc upper {d} > box {b}", show(i), show(j)));
                        t.check(b <= dis + tol, || format!("{}, {}: box {b} > dis(pi_box) = {dis}", show(i), show(j)));
                    }
                    Err(e) => t.check(false, || format!("{}, {}: {e}", show(i), show(j))),
                }
            }
        }
        out.push(t.finish());
    }
    out
}
