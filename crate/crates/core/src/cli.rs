//! Command-line surface.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::catalogue::{self, CatalogueError};
use crate::correspond::{
    alba_output, correspondent, correspondent_raw, ineq_holds, pair_labels, parse_rel_inequality, CorrespondError,
};
use crate::frames::{
    graph_frames, kripke_frames, lift, shift, unshift, ConceptLattice, Frame, FrameDocument,
    FrameError, FrameIoError, GenMode, GenParams,
};
use crate::roughsets::{classify_space, pawlak_check, RoughError};
use crate::semantics::{frame_valid, interpret, Model, SemanticsError, Validity, ValidityOptions, Value};
use crate::syntax::{classify, parse_formula, parse_sequent, BlockDecomposition, Mrp, MrpClassification, SyntaxError};
use crate::verify::{verify_correspondence, verify_lifting, verify_shifting, Semantics, VerificationReport, VerifyError, VerifyOptions};

/// Exit code for a check that ran and failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for malformed input or usage.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Correspond(#[from] CorrespondError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    FrameIo(#[from] FrameIoError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Rough(#[from] RoughError),
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Input problems map to the usage code; semantic refusals to failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Correspond(CorrespondError::NotSahlqvist(_)) => EXIT_FAIL,
            CliError::Rough(RoughError::NotPawlak(_)) => EXIT_FAIL,
            CliError::Catalogue(CatalogueError::Correspond(CorrespondError::NotSahlqvist(_))) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mrpcorr", version, about = "Correspondents of modal reduction principles on Kripke, graph-based and polarity-based frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an mrp as inductive type (a), type (b), analytic or not Sahlqvist.
    Classify { mrp: String },
    /// Print the pure inequalities produced by ALBA.
    Alba {
        mrp: String,
        #[arg(long)]
        unicode: bool,
    },
    /// Print the relational correspondent in one language.
    Correspond {
        mrp: String,
        #[arg(long, value_enum, default_value = "graph")]
        semantics: Semantics,
        #[arg(long)]
        unicode: bool,
        /// Skip unit removal and chain flattening.
        #[arg(long)]
        raw: bool,
    },
    /// Operations on frame files.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Instance-check a theorem on generated frame populations.
    Verify(VerifyArgs),
    /// Regenerate the catalogue of correspondents and diff it with the stored copy.
    Catalogue {
        #[arg(long)]
        unicode: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct FrameArg {
    /// Frame JSON file.
    #[arg(long)]
    pub frame: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum FrameCommand {
    /// Evaluate a relational inclusion on the frame.
    Check {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        ineq: String,
    },
    /// Brute-force the validity of a sequent on the frame.
    Validate {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        sequent: String,
    },
    /// Interpret a formula under the valuation stored in the frame file.
    Truth {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        formula: String,
    },
    /// List the concepts of the frame's concept lattice.
    Lattice {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        dot: bool,
    },
    /// Graph-based frame with E = Δ built from a Kripke frame.
    Shift {
        #[command(flatten)]
        frame: FrameArg,
    },
    /// Kripke frame underlying a graph-based frame with E = Δ.
    Unshift {
        #[command(flatten)]
        frame: FrameArg,
    },
    /// Polarity-based frame lifted from a graph-based frame.
    Lift {
        #[command(flatten)]
        frame: FrameArg,
    },
    /// Report the approximation-space class flags.
    Classify {
        #[command(flatten)]
        frame: FrameArg,
        /// Also brute-force each flag's modal axiom.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the ten algebraic conditions of Pawlak spaces.
    Pawlak {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        json: bool,
    },
    /// Print generated frames as a JSON array.
    Generate {
        #[arg(long, value_enum, default_value = "graph")]
        kind: FrameKind,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kripke only: independent box and diamond relations.
        #[arg(long)]
        bimodal: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameKind {
    Graph,
    Kripke,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Correspondence,
    Shifting,
    Lifting,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    /// The mrp to check; omit with --catalogue.
    pub mrp: Option<String>,
    /// Run every catalogued mrp plus `dia p <= box dia box p`.
    #[arg(long)]
    pub catalogue: bool,
    /// Correspondence only.
    #[arg(long, value_enum, default_value = "graph")]
    pub semantics: Semantics,
    /// Largest frame size.
    #[arg(long, default_value_t = 4)]
    pub size: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: all CPUs).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub json: bool,
}

/// Extra mrp swept by `verify --catalogue`.
pub const EXTRA_VERIFY_MRP: &str = "dia p <= box dia box p";

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<(FrameDocument, Frame), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let doc = FrameDocument::parse(&text)?;
    let frame = doc.to_frame()?;
    Ok((doc, frame))
}

fn parse_mrp(text: &str) -> Result<Mrp, CliError> {
    Ok(Mrp::parse(text)?)
}

fn blocks(b: &BlockDecomposition) -> String {
    b.blocks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" · ")
}

fn describe_class(c: &MrpClassification) -> String {
    let mut s = format!("{}\n", c.label());
    if let Some(a) = c.type_a() {
        let _ = writeln!(s, "(a) φ = {}, α = {}, ψ = {}, χ = {}", a.phi, a.alpha, a.psi, blocks(&a.chi));
    }
    if let Some(b) = c.type_b() {
        let _ = writeln!(s, "(b) φ = {}, ζ = {}, ψ = {}, δ = {}", b.phi, blocks(&b.zeta), b.psi, b.delta);
    }
    s
}

fn value_text(f: &Frame, v: Value) -> String {
    match (f, v) {
        (Frame::Kripke(k), Value::Set(s)) => k.domain().compact(s),
        (Frame::Graph(g), Value::Concept(c)) => ConceptLattice::of_graph(g).describe(&c),
        (Frame::Polarity(p), Value::Concept(c)) => ConceptLattice::of_polarity(p).describe(&c),
        _ => unreachable!("interpret returns the frame's value kind"),
    }
}

/// Kripke frames are read through their shift, whose lattice is the powerset.
fn lattice_of(f: &Frame) -> ConceptLattice {
    match f {
        Frame::Graph(g) => ConceptLattice::of_graph(g),
        Frame::Polarity(p) => ConceptLattice::of_polarity(p),
        Frame::Kripke(k) => ConceptLattice::of_graph(&shift(k)),
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Classify { mrp } => {
            let c = classify(&parse_mrp(mrp)?);
            write!(out, "{}", describe_class(&c))?;
            Ok(if c == MrpClassification::NotSahlqvist { EXIT_FAIL } else { 0 })
        }
        Command::Alba { mrp, unicode } => {
            let m = parse_mrp(mrp)?;
            let c = classify(&m);
            if c == MrpClassification::NotSahlqvist {
                return Err(CorrespondError::NotSahlqvist(m.to_string()).into());
            }
            for (_, p) in alba_output(&c)? {
                writeln!(out, "{}", if *unicode { p.to_unicode() } else { p.to_string() })?;
            }
            Ok(0)
        }
        Command::Correspond { mrp, semantics, unicode, raw } => {
            let m = parse_mrp(mrp)?;
            let rows = if *raw { correspondent_raw(&m, semantics.lang())? } else { correspondent(&m, semantics.lang())? };
            for (_, i) in rows {
                writeln!(out, "{}", if *unicode { i.to_unicode() } else { i.to_string() })?;
            }
            Ok(0)
        }
        Command::Frame(fc) => frame_command(fc, out),
        Command::Verify(args) => verify_command(args, out, err),
        Command::Catalogue { unicode, json } => {
            let rows = catalogue::regenerate()?;
            let reference = catalogue::parse_table(catalogue::GOLDEN)?;
            let diffs = catalogue::diff(&rows, &reference);
            if *json {
                let doc = serde_json::json!({ "rows": rows, "diffs": diffs });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
            } else {
                for r in &rows {
                    writeln!(out, "{}", if *unicode { r.unicode_line() } else { r.line() })?;
                }
                for d in &diffs {
                    writeln!(out, "DIFF {d}")?;
                }
                writeln!(out, "{} rows, {} diffs against the stored table", rows.len(), diffs.len())?;
            }
            Ok(if diffs.is_empty() { 0 } else { EXIT_FAIL })
        }
    }
}

fn frame_command(fc: &FrameCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match fc {
        FrameCommand::Check { frame, ineq } => {
            let (_, f) = load(&frame.frame)?;
            let i = parse_rel_inequality(ineq, Some(crate::correspond::language_of(&f)))?;
            let h = ineq_holds(&i, &f)?;
            match h.counterpair {
                None => writeln!(out, "holds: {i}")?,
                Some(p) => {
                    let [u, v] = pair_labels(&i.lhs, &f, p);
                    writeln!(out, "fails: {i}\nwitness: ({u},{v})")?;
                }
            }
            Ok(if h.holds { 0 } else { EXIT_FAIL })
        }
        FrameCommand::Validate { frame, sequent } => {
            let (doc, f) = load(&frame.frame)?;
            let s = parse_sequent(sequent)?;
            match frame_valid(&f, &s, &ValidityOptions::default())? {
                Validity::Valid => {
                    writeln!(out, "valid: {s}")?;
                    Ok(0)
                }
                Validity::Invalid(v) => {
                    let witness = FrameDocument { valuation: Some(FrameDocument::valuation_document(&f, &v)), ..doc };
                    writeln!(out, "invalid: {s}\ncountermodel:\n{}", witness.to_json())?;
                    Ok(EXIT_FAIL)
                }
            }
        }
        FrameCommand::Truth { frame, formula } => {
            let (doc, f) = load(&frame.frame)?;
            let phi = parse_formula(formula)?;
            let valuation = doc
                .valuation(&f)?
                .ok_or_else(|| CliError::Usage("frame file has no `valuation` field".into()))?;
            let v = interpret(&Model { frame: &f, valuation }, &phi)?;
            writeln!(out, "{}", value_text(&f, v))?;
            Ok(0)
        }
        FrameCommand::Lattice { frame, dot } => {
            let (_, f) = load(&frame.frame)?;
            let l = lattice_of(&f);
            if *dot {
                write!(out, "{}", l.to_dot())?;
            } else {
                writeln!(out, "{} concepts", l.len())?;
                for c in l.concepts() {
                    writeln!(out, "{}", l.describe(c))?;
                }
            }
            Ok(0)
        }
        FrameCommand::Shift { frame } => {
            let (_, f) = load(&frame.frame)?;
            let Frame::Kripke(k) = &f else { return Err(CliError::Usage(format!("shift needs a kripke frame, got {}", f.kind()))) };
            writeln!(out, "{}", FrameDocument::from_frame(&Frame::Graph(shift(k))).to_json())?;
            Ok(0)
        }
        FrameCommand::Unshift { frame } => {
            let (_, f) = load(&frame.frame)?;
            let Frame::Graph(g) = &f else { return Err(CliError::Usage(format!("unshift needs a graph frame, got {}", f.kind()))) };
            writeln!(out, "{}", FrameDocument::from_frame(&Frame::Kripke(unshift(g)?)).to_json())?;
            Ok(0)
        }
        FrameCommand::Lift { frame } => {
            let (_, f) = load(&frame.frame)?;
            let Frame::Graph(g) = &f else { return Err(CliError::Usage(format!("lift needs a graph frame, got {}", f.kind()))) };
            writeln!(out, "{}", FrameDocument::from_frame(&Frame::Polarity(lift(g))).to_json())?;
            Ok(0)
        }
        FrameCommand::Classify { frame, cross_check, json } => {
            let (_, f) = load(&frame.frame)?;
            let r = classify_space(&f, *cross_check)?;
            if *json {
                writeln!(out, "{}", r.to_json())?;
            } else {
                for (flag, v) in &r.flags {
                    writeln!(out, "{flag}: {}", if *v { "yes" } else { "no" })?;
                }
                for c in &r.checks {
                    let mut line = format!("  {} [{}]: {}", c.condition, c.flag, if c.holds { "holds" } else { "fails" });
                    if let Some([u, v]) = &c.witness {
                        let _ = write!(line, ", witness ({u},{v})");
                    }
                    if let Some(m) = c.modal_valid {
                        let _ = write!(line, "; {} {}", c.axiom, if m { "valid" } else { "not valid" });
                    }
                    writeln!(out, "{line}")?;
                }
            }
            let agree = r.checks.iter().all(|c| c.modal_valid.is_none_or(|m| m == c.holds));
            Ok(if agree { 0 } else { EXIT_FAIL })
        }
        FrameCommand::Pawlak { frame, json } => {
            let (_, f) = load(&frame.frame)?;
            let Frame::Graph(g) = &f else { return Err(CliError::Usage(format!("pawlak needs a graph frame, got {}", f.kind()))) };
            let r = pawlak_check(g)?;
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("serializable"))?;
            } else {
                writeln!(out, "{} concepts", r.concepts)?;
                for i in &r.items {
                    let mut line = format!("{:>2}. {}: {}", i.item, i.condition, if i.holds { "holds" } else { "fails" });
                    if let Some(w) = &i.witness {
                        let _ = write!(line, " at {}", w.join(", "));
                    }
                    writeln!(out, "{line}")?;
                }
            }
            Ok(if r.all_pass() { 0 } else { EXIT_FAIL })
        }
        FrameCommand::Generate { kind, size, mode, count, seed, bimodal } => {
            let mode = match mode {
                ModeArg::Exhaustive => GenMode::Exhaustive,
                ModeArg::Random => GenMode::Random,
            };
            let frames: Vec<Frame> = match kind {
                FrameKind::Graph => {
                    let params = GenParams { size: *size, mode, count: *count, seed: *seed, pawlak_witness: false };
                    graph_frames(&params)?.0.into_iter().map(Frame::Graph).collect()
                }
                FrameKind::Kripke => {
                    kripke_frames(*size, mode, *bimodal, *count, *seed)?.into_iter().map(Frame::Kripke).collect()
                }
            };
            let docs: Vec<FrameDocument> = frames.iter().map(FrameDocument::from_frame).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&docs).expect("serializable"))?;
            Ok(0)
        }
    }
}

fn verify_command(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mrps: Vec<Mrp> = match (&args.mrp, args.catalogue) {
        (Some(m), false) => vec![parse_mrp(m)?],
        (None, true) => catalogue::AXIOMS
            .iter()
            .map(|(_, a)| *a)
            .chain([EXTRA_VERIFY_MRP])
            .map(parse_mrp)
            .collect::<Result<_, _>>()?,
        _ => return Err(CliError::Usage("give exactly one of an mrp or --catalogue".into())),
    };
    if let Some(m) = mrps.iter().find(|m| classify(m) == MrpClassification::NotSahlqvist) {
        return Err(CorrespondError::NotSahlqvist(m.to_string()).into());
    }
    let opts = VerifyOptions { max_size: args.size, samples: args.samples, seed: args.seed, jobs: args.jobs };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for m in &mrps {
        let r = match args.theorem {
            Theorem::Correspondence => verify_correspondence(m, args.semantics, &opts)?,
            Theorem::Shifting => verify_shifting(m, &opts)?,
            Theorem::Lifting => verify_lifting(m, &opts)?,
        };
        writeln!(err, "{}: {:.2?}", r.mrp, r.wall_clock)?;
        reports.push(r);
    }
    if args.json {
        let text = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(&reports).expect("serializable")
        };
        writeln!(out, "{text}")?;
    } else {
        for r in &reports {
            writeln!(out, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.summary())?;
            for s in r.syntactic.iter().filter(|s| !s.equal) {
                writeln!(out, "  syntactic {}: expected `{}`, got `{}`", s.row, s.expected, s.got)?;
            }
            for d in &r.disagreements {
                writeln!(out, "  {} {}: {}: {}", d.check, d.row, d.inequality, d.detail)?;
                writeln!(out, "    frame: {}", serde_json::to_string(&d.frame).expect("serializable"))?;
            }
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) { 0 } else { EXIT_FAIL })
}
