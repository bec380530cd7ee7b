use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iml_core::decide::{check_certificate, decide_with_trace, Certificate, SearchConfig, Verdict};
use iml_core::formula::{closure_of, parse, Formula};
use iml_core::kripke::{
    enumerate_frames, frame_from_json, preorders, truth_set, valid_in_frame_under, Frame,
    FrameClass, Model, SemanticsVariant, MAX_ENUMERATION_SIZE,
};
use iml_core::logic::LogicId;
use iml_core::saturation::{
    extract_saturated_model, saturate_with, validate_clip, SaturationOptions,
};

#[derive(Parser)]
#[command(name = "iml", version, about = "Intuitionistic modal logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse(FormulaArgs),
    /// Print the closure of a formula and its modal strata.
    Closure(FormulaArgs),
    /// Evaluate a formula in a model.
    Check(CheckArgs),
    /// Test validity of a formula on a frame over all valuations.
    Valid(ValidArgs),
    /// Count frames of a class by size.
    Enumerate(EnumerateArgs),
    /// Saturate a model that falsifies a formula at a world.
    Saturate(SaturateArgs),
    /// Bounded countermodel search with an optional saturation upgrade.
    Decide(DecideArgs),
    /// Re-check a certificate written by `decide`.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(
        long,
        conflicts_with = "formula_file",
        required_unless_present = "formula_file"
    )]
    formula: Option<String>,
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogicArg {
    Fik,
    Lik,
}

impl From<LogicArg> for LogicId {
    fn from(l: LogicArg) -> LogicId {
        match l {
            LogicArg::Fik => LogicId::Fik,
            LogicArg::Lik => LogicId::Lik,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum SemanticsArg {
    #[default]
    Std,
    Fs,
    W,
}

impl From<SemanticsArg> for SemanticsVariant {
    fn from(s: SemanticsArg) -> SemanticsVariant {
        match s {
            SemanticsArg::Std => SemanticsVariant::Standard,
            SemanticsArg::Fs => SemanticsVariant::FischerServi,
            SemanticsArg::W => SemanticsVariant::Wijesekera,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// World to evaluate at; every world when omitted.
    #[arg(long)]
    world: Option<String>,
    #[arg(long, value_enum, default_value = "std")]
    semantics: SemanticsArg,
}

#[derive(Args)]
struct ValidArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Model file; its valuation is ignored.
    #[arg(long, value_name = "PATH")]
    frame: PathBuf,
    #[arg(long, value_enum, default_value = "std")]
    semantics: SemanticsArg,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Restrict to the frame class of this logic.
    #[arg(long, value_enum)]
    logic: Option<LogicArg>,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
}

#[derive(Args)]
struct SaturateArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    #[arg(long)]
    world: String,
    #[arg(long)]
    fuel: Option<u64>,
    /// Write the saturated model here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Write one JSON line per repair here.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=MAX_ENUMERATION_SIZE as u64))]
    max_size: u64,
    #[arg(long, value_enum, default_value = "std")]
    semantics: SemanticsArg,
    #[arg(long)]
    saturate: bool,
    #[arg(long, requires = "saturate")]
    fuel: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Write the certificate here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the countermodel (or the saturated model, if any) as DOT.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "saturate")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "PATH")]
    cert: PathBuf,
}

enum Failure {
    Syntax(String),
    ModelFile(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Syntax(_) => 2,
            Failure::ModelFile(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Syntax(m) | Failure::ModelFile(m) | Failure::Internal(m) => m,
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read_formula(args: &FormulaArgs) -> Result<Formula, Failure> {
    let text = match (&args.formula, &args.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => {
            fs::read_to_string(p).map_err(|e| Failure::Syntax(format!("{}: {e}", p.display())))?
        }
        (None, None) => return Err(Failure::Syntax("no formula given".into())),
    };
    parse(text.trim()).map_err(|e| Failure::Syntax(e.to_string()))
}

fn read_model(path: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::ModelFile(format!("{}: {e}", path.display())))?;
    Model::from_json(&text).map_err(|e| Failure::ModelFile(format!("{}: {e}", path.display())))
}

fn read_frame(path: &Path) -> Result<Frame, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::ModelFile(format!("{}: {e}", path.display())))?;
    frame_from_json(&text).map_err(|e| Failure::ModelFile(format!("{}: {e}", path.display())))
}

fn world_of(m: &Model, name: &str) -> Result<usize, Failure> {
    m.world(name)
        .ok_or_else(|| Failure::ModelFile(format!("MODEL_BAD_REF: unknown world `{name}`")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

fn describe_model(m: &Model) -> String {
    let f = m.frame();
    let name = |w: usize| f.name(w);
    let mut out = String::new();
    let _ = writeln!(out, "  worlds: {}", f.names().join(", "));
    let le: Vec<String> = f
        .le()
        .pairs()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("{}≤{}", name(a), name(b)))
        .collect();
    let _ = writeln!(
        out,
        "  ≤: {}",
        if le.is_empty() {
            "identity".into()
        } else {
            le.join(" ")
        }
    );
    let r: Vec<String> = f
        .r()
        .pairs()
        .map(|(a, b)| format!("{}R{}", name(a), name(b)))
        .collect();
    let _ = writeln!(
        out,
        "  R: {}",
        if r.is_empty() {
            "empty".into()
        } else {
            r.join(" ")
        }
    );
    for (p, set) in m.val() {
        let ws: Vec<&str> = set.iter().map(|&w| name(w)).collect();
        let _ = writeln!(out, "  {p}: {{{}}}", ws.join(", "));
    }
    out
}

fn cmd_parse(args: &FormulaArgs) -> Outcome {
    let a = read_formula(args)?;
    println!("{a}");
    println!("length: {}", a.len());
    println!("depth: {}", a.depth());
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    println!("atoms: {}", atoms.join(", "));
    Ok(0)
}

fn cmd_closure(args: &FormulaArgs) -> Outcome {
    let a = read_formula(args)?;
    let sigma = closure_of(&a);
    println!("closure of {a}: {} formulas", sigma.len());
    for (alpha, g) in sigma.strata().iter().enumerate() {
        let items: Vec<String> = g.iter().map(|f| f.to_string()).collect();
        println!("stratum {alpha} ({}): {{{}}}", g.len(), items.join(", "));
    }
    Ok(0)
}

fn cmd_check(args: &CheckArgs) -> Outcome {
    let a = read_formula(&args.formula)?;
    let m = read_model(&args.model)?;
    let truth = truth_set(&m, &a, args.semantics.into());
    match &args.world {
        Some(w) => println!("{}", truth[world_of(&m, w)?]),
        None => {
            for w in m.frame().worlds() {
                println!("{}: {}", m.frame().name(w), truth[w]);
            }
        }
    }
    Ok(0)
}

fn cmd_valid(args: &ValidArgs) -> Outcome {
    let a = read_formula(&args.formula)?;
    let frame = read_frame(&args.frame)?;
    match valid_in_frame_under(&frame, &a, args.semantics.into()) {
        Ok(()) => println!("valid"),
        Err(cv) => {
            println!("invalid: fails at {}", frame.name(cv.world));
            let m = Model::new(frame, cv.val).map_err(|e| Failure::Internal(e.to_string()))?;
            print!("{}", describe_model(&m));
        }
    }
    Ok(0)
}

fn cmd_enumerate(args: &EnumerateArgs) -> Outcome {
    if args.max_size == 0 || args.max_size > MAX_ENUMERATION_SIZE {
        return Err(Failure::Internal(format!(
            "--max-size must be between 1 and {MAX_ENUMERATION_SIZE}"
        )));
    }
    let class = args
        .logic
        .map(|l| LogicId::from(l).frame_class())
        .unwrap_or(FrameClass::ALL);
    println!("class {class}");
    for n in 1..=args.max_size {
        println!(
            "size {n}: {} preorders, {} frames",
            preorders(n).len(),
            enumerate_frames(n, class).count()
        );
    }
    Ok(0)
}

fn cmd_saturate(args: &SaturateArgs) -> Outcome {
    let a = read_formula(&args.formula)?;
    let m = read_model(&args.model)?;
    let s0 = world_of(&m, &args.world)?;
    let logic = LogicId::from(args.logic);
    let opts = SaturationOptions { fuel: args.fuel };
    let out = saturate_with(&m, s0, &a, logic, &opts).map_err(|e| match e.code() {
        "BASE_MODEL_BAD_WORLD" => Failure::ModelFile(e.to_string()),
        _ => Failure::Internal(e.to_string()),
    })?;
    if let Some(p) = &args.trace {
        write_file(p, &out.trace_jsonl())?;
    }
    let report = validate_clip(&out.clip);
    println!("tips: {}", out.clip.len());
    println!("repairs: {}", out.trace.len());
    println!("ranks: {}", out.ranks);
    for r in &out.trace {
        println!(
            "  {} rank {} height {}: {} at tip {} -> tip {} on {}",
            r.pass, r.rank, r.height, r.kind, r.anchor, r.new_tip, r.witness_world
        );
    }
    if !report.all_ok() {
        for v in &report.violations {
            println!("violation [{}]: {}", v.check, v.detail);
        }
        return Err(Failure::Internal("saturated clip failed validation".into()));
    }
    println!("validation: ok");
    let sat = extract_saturated_model(&out.clip).map_err(|e| Failure::Internal(e.to_string()))?;
    print!("{}", describe_model(&sat));
    if let Some(p) = &args.out {
        write_file(p, &sat.to_json())?;
    }
    if let Some(p) = &args.dot {
        write_file(p, &sat.to_dot())?;
    }
    Ok(0)
}

fn cmd_decide(args: &DecideArgs) -> Outcome {
    let a = read_formula(&args.formula)?;
    let logic = LogicId::from(args.logic);
    let cfg = SearchConfig {
        max_frame_size: args.max_size as usize,
        semantics: args.semantics.into(),
        run_saturation: args.saturate,
        fuel: args.fuel,
        jobs: args.jobs.map(|j| j as usize),
    };
    let (mut cert, trace) = decide_with_trace(&a, logic, &cfg);
    if let (Some(p), Some(t), Some(ev)) = (&args.trace, &trace, cert.saturation.as_mut()) {
        write_file(p, t)?;
        ev.trace_path = Some(p.display().to_string());
    }
    println!("verdict: {}", cert.verdict);
    println!("formula: {}", cert.formula);
    println!("logic: {} (class {})", cert.logic, logic.frame_class());
    println!("bound: {}", cert.bound);
    println!("frames examined: {}", cert.frames_examined);
    println!("valuations examined: {}", cert.valuations_examined);
    if let (Some(m), Some(w)) = (&cert.countermodel, &cert.world) {
        println!("countermodel with {} worlds, falsified at {w}:", m.len());
        print!("{}", describe_model(m));
    }
    if let Some(ev) = &cert.saturation {
        println!(
            "saturated model with {} worlds after {} repairs, validation {}:",
            ev.model.len(),
            ev.repairs,
            if ev.report.all_ok() { "ok" } else { "FAILED" }
        );
        print!("{}", describe_model(&ev.model));
    }
    for d in &cert.diagnostics {
        println!("diagnostic: {d}");
    }
    if let Some(p) = &args.out {
        write_file(p, &(cert.to_json() + "\n"))?;
    }
    if let Some(p) = &args.dot {
        let shown = cert
            .saturation
            .as_ref()
            .map(|e| &e.model)
            .or(cert.countermodel.as_ref());
        if let Some(m) = shown {
            write_file(p, &m.to_dot())?;
        }
    }
    if let Err(e) = check_certificate(&cert) {
        return Err(Failure::Internal(format!(
            "certificate does not verify: {e}"
        )));
    }
    Ok(match cert.verdict {
        Verdict::NonTheorem => 0,
        Verdict::NoCountermodelUpToBound => 1,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let text = fs::read_to_string(&args.cert)
        .map_err(|e| Failure::ModelFile(format!("{}: {e}", args.cert.display())))?;
    let cert = Certificate::from_json(&text)
        .map_err(|e| Failure::Internal(format!("certificate rejected: {e}")))?;
    check_certificate(&cert)
        .map_err(|e| Failure::Internal(format!("certificate rejected: {e}")))?;
    println!(
        "certificate ok: {} for {} in {}",
        cert.verdict, cert.formula, cert.logic
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parse(a) => cmd_parse(a),
        Command::Closure(a) => cmd_closure(a),
        Command::Check(a) => cmd_check(a),
        Command::Valid(a) => cmd_valid(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Saturate(a) => cmd_saturate(a),
        Command::Decide(a) => cmd_decide(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
