//! The `fdes` command line. [`run_command`] is the whole program; `main`
//! only wires it to the process streams.
//!
//! Exit codes: 0 when the property holds or the command succeeded, 1 when a
//! property fails or no solution exists, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdes_core::fdl::{emit_language, emit_supervisor};
use fdes_core::oracle::{
    brute_decentralized_exists, brute_infimal_co, brute_supervisor_exists, brute_supremal_cn, DEFAULT_BUDGET,
};
use fdes_core::{
    closed_loop_central, closed_loop_decentralized, concatenation, emit_fdl, infimal_co, is_controllable,
    is_coobservable, is_normal, is_observable, is_strongly_observable, parse_fdl_repairing, parse_fdl_with,
    project_language, scp, supremal_cn, synthesize_central, synthesize_decentralized, Alphabet, CheckReport, Error,
    FdlDocument, FuzzyLanguage, FuzzySupervisor, Projection, ScpOutcome, Site, SynthesisOptions,
};

#[derive(Parser, Debug)]
#[command(
    name = "fdes",
    version,
    about = "Supervisory control of fuzzy discrete event systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse FDL files and summarize their contents.
    Validate(ValidateArgs),
    /// Check a property of a specification against a plant.
    Check(CheckArgs),
    /// Build the supervisor(s) that achieve a specification.
    Synthesize(SynthesizeArgs),
    /// Evaluate the closed loop of a plant under one or two supervisors.
    ClosedLoop(ClosedLoopArgs),
    /// Smallest controllable and observable superlanguage.
    InfimalCo(PairArgs),
    /// Largest controllable and normal sublanguage.
    SupremalCn(PairArgs),
    /// Solve a supervisory control problem between two specifications.
    Scp(ScpArgs),
    /// Language algebra.
    Lang(LangArgs),
    /// Extract the language generated by an automaton up to a horizon.
    Gen(GenArgs),
    /// Exhaustive-search reference answers for small instances.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// FDL files.
    #[arg(required = true)]
    files: Vec<String>,
    /// File whose alphabet interprets files that declare none.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Controllable,
    Observable,
    StronglyObservable,
    Normal,
    Coobservable,
}

#[derive(Args, Debug)]
struct Problem {
    /// Plant language, `FILE` or `FILE#NAME`. The file must declare the alphabet.
    #[arg(long)]
    plant: String,
    /// Specification language, `FILE` or `FILE#NAME`.
    #[arg(long)]
    spec: String,
    /// File with `[site 1]` and `[site 2]` sections.
    #[arg(long)]
    sites: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    property: PropertyArg,
    #[command(flatten)]
    problem: Problem,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Central,
    Decentralized,
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    #[arg(long, value_enum, default_value = "central")]
    mode: Mode,
    #[command(flatten)]
    problem: Problem,
    /// Emit the formula supervisor even when the existence conditions fail.
    #[arg(long)]
    force: bool,
    /// Write the supervisor(s) here instead of standard output.
    #[arg(long)]
    out: Option<String>,
    /// Print a failed condition as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ClosedLoopArgs {
    #[arg(long)]
    plant: String,
    /// One or two supervisors, `FILE` or `FILE#NAME`. A file without a name
    /// contributes all of its supervisors.
    #[arg(long, required = true)]
    supervisor: Vec<String>,
    /// Name of the emitted language section.
    #[arg(long, default_value = "closed_loop")]
    name: String,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    plant: String,
    #[arg(long)]
    spec: String,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args, Debug)]
struct ScpArgs {
    /// Minimal acceptable language.
    #[arg(long)]
    min: String,
    /// Maximal legal language.
    #[arg(long)]
    max: String,
    #[arg(long)]
    plant: String,
    /// Write the supervisor here instead of standard output.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LangOp {
    Union,
    Intersection,
    Concat,
    Contains,
    Project,
    Repair,
}

#[derive(Args, Debug)]
struct LangArgs {
    #[arg(long, value_enum)]
    op: LangOp,
    /// Operands, `FILE` or `FILE#NAME`. At least one file must declare the alphabet.
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Project onto this site's observable events instead of `E_o`.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    site: Option<u8>,
    #[arg(long, default_value = "result")]
    name: String,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// `FILE` or `FILE#NAME`.
    #[arg(long)]
    automaton: String,
    #[arg(long, default_value_t = 8)]
    horizon: usize,
    #[arg(long, default_value = "generated")]
    name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleOp {
    InfimalCo,
    SupremalCn,
    SupervisorExists,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_enum)]
    op: OracleOp,
    #[command(flatten)]
    problem: Problem,
    /// With `supervisor-exists`, search for a pair of site supervisors.
    #[arg(long, value_enum, default_value = "central")]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

/// Everything that ends the command with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn lib_err(context: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        if context.is_empty() {
            Failure(format!("{e} [{}]", e.code()))
        } else {
            Failure(format!("{context}: {e} [{}]", e.code()))
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure(format!("cannot write output: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Negative,
}

type Outcome = Result<Status, Failure>;

/// `FILE#NAME` split into its parts.
struct Selector<'a> {
    path: &'a str,
    name: Option<&'a str>,
}

impl<'a> Selector<'a> {
    fn parse(text: &'a str) -> Selector<'a> {
        match text.rsplit_once('#') {
            Some((path, name)) if !name.is_empty() => Selector { path, name: Some(name) },
            _ => Selector { path: text, name: None },
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: cannot read: {e}")))
}

fn load(path: &str, context: Option<&Arc<Alphabet>>) -> Result<FdlDocument, Failure> {
    parse_fdl_with(&read(path)?, context).map_err(lib_err(path))
}

fn pick<'m, T>(map: &'m BTreeMap<String, T>, sel: &Selector<'_>, kind: &str) -> Result<&'m T, Failure> {
    match sel.name {
        Some(name) => map
            .get(name)
            .ok_or_else(|| Failure(format!("{}: no {kind} named `{name}`", sel.path))),
        None => {
            let mut values = map.values();
            match (values.next(), values.next()) {
                (Some(only), None) => Ok(only),
                (None, _) => Err(Failure(format!("{}: no {kind} section", sel.path))),
                (Some(_), Some(_)) => Err(Failure(format!(
                    "{}: several {kind} sections; select one with `{}#NAME`",
                    sel.path, sel.path
                ))),
            }
        }
    }
}

/// The plant's alphabet and language.
fn load_plant(text: &str) -> Result<(Arc<Alphabet>, FuzzyLanguage), Failure> {
    let sel = Selector::parse(text);
    let doc = load(sel.path, None)?;
    let alphabet = doc
        .alphabet
        .clone()
        .ok_or_else(|| Failure(format!("{}: a plant file must declare `[alphabet]`", sel.path)))?;
    let l = pick(&doc.languages, &sel, "language")?.clone();
    Ok((alphabet, l))
}

/// A language read against `alphabet` and rebound to it.
fn load_language(text: &str, alphabet: &Arc<Alphabet>) -> Result<FuzzyLanguage, Failure> {
    let sel = Selector::parse(text);
    let doc = load(sel.path, Some(alphabet))?;
    pick(&doc.languages, &sel, "language")?
        .with_alphabet(alphabet.clone())
        .map_err(lib_err(sel.path))
}

struct Loaded {
    alphabet: Arc<Alphabet>,
    l: FuzzyLanguage,
    k: FuzzyLanguage,
}

impl Loaded {
    fn projection(&self) -> Projection {
        Projection::of_alphabet(&self.alphabet)
    }

    fn sites(&self) -> Result<[Site; 2], Failure> {
        Site::pair_of(&self.alphabet).map_err(|e| {
            Failure(format!(
                "{e} [{}]; declare `[site 1]` and `[site 2]` or pass --sites",
                e.code()
            ))
        })
    }
}

fn load_problem(p: &Problem) -> Result<Loaded, Failure> {
    let (mut alphabet, l) = load_plant(&p.plant)?;
    if let Some(path) = &p.sites {
        let doc = load(path, Some(&alphabet))?;
        match doc.alphabet {
            Some(a) if a.sites().is_some() => alphabet = a,
            _ => return Err(Failure(format!("{path}: no `[site 1]`/`[site 2]` sections"))),
        }
    }
    let l = l.with_alphabet(alphabet.clone()).map_err(lib_err(&p.plant))?;
    let k = load_language(&p.spec, &alphabet)?;
    Ok(Loaded { alphabet, l, k })
}

fn print_report(out: &mut dyn Write, report: &CheckReport, json: bool) -> Result<(), Failure> {
    if json {
        let text = serde_json::to_string_pretty(report).map_err(|e| Failure(e.to_string()))?;
        writeln!(out, "{text}").map_err(io_err)?;
        return Ok(());
    }
    let verdict = if report.holds { "holds" } else { "fails" };
    writeln!(out, "{}: {verdict}", report.property).map_err(io_err)?;
    for w in &report.witnesses {
        writeln!(out, "  {w}").map_err(io_err)?;
    }
    Ok(())
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Outcome {
    let p = load_problem(&args.problem)?;
    let (k, l) = (&p.k, &p.l);
    let pr = p.projection();
    let controllable = p.alphabet.controllable();
    let report = match args.property {
        PropertyArg::Controllable => is_controllable(k, l),
        PropertyArg::Observable => is_observable(k, l, &pr, controllable),
        PropertyArg::StronglyObservable => is_strongly_observable(k, l, &pr, controllable),
        PropertyArg::Normal => is_normal(k, l, &pr),
        PropertyArg::Coobservable => is_coobservable(k, l, &p.sites()?),
    }
    .map_err(lib_err(""))?;
    print_report(out, &report, args.json)?;
    Ok(if report.holds {
        Status::Success
    } else {
        Status::Negative
    })
}

fn deliver(out: &mut dyn Write, path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure(format!("{path}: cannot write: {e}")))?;
            writeln!(out, "wrote {path}").map_err(io_err)
        }
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn synthesize(args: &SynthesizeArgs, out: &mut dyn Write) -> Outcome {
    let p = load_problem(&args.problem)?;
    let options = SynthesisOptions { force: args.force };
    let result = match args.mode {
        Mode::Central => synthesize_central(&p.k, &p.l, &p.projection(), options).map(|s| emit_supervisor("S", &s)),
        Mode::Decentralized => synthesize_decentralized(&p.k, &p.l, &p.sites()?, options)
            .map(|(s1, s2)| format!("{}\n{}", emit_supervisor("S1", &s1), emit_supervisor("S2", &s2))),
    };
    match result {
        Ok(text) => {
            deliver(out, args.out.as_deref(), &text)?;
            Ok(Status::Success)
        }
        Err(Error::ConditionViolated(report)) => {
            if !args.json {
                writeln!(out, "no supervisor achieves the specification").map_err(io_err)?;
            }
            print_report(out, &report, args.json)?;
            Ok(Status::Negative)
        }
        Err(e) => Err(lib_err("")(e)),
    }
}

fn closed_loop(args: &ClosedLoopArgs, out: &mut dyn Write) -> Outcome {
    let (alphabet, l) = load_plant(&args.plant)?;
    let mut supervisors: Vec<FuzzySupervisor> = Vec::new();
    for text in &args.supervisor {
        let sel = Selector::parse(text);
        let doc = load(sel.path, Some(&alphabet))?;
        match sel.name {
            Some(_) => supervisors.push(pick(&doc.supervisors, &sel, "supervisor")?.clone()),
            None if doc.supervisors.is_empty() => return Err(Failure(format!("{}: no supervisor section", sel.path))),
            None => supervisors.extend(doc.supervisors.into_values()),
        }
    }
    let cl = match supervisors.as_slice() {
        [s] => closed_loop_central(&l, s),
        [s1, s2] => closed_loop_decentralized(&l, s1, s2),
        _ => {
            return Err(Failure(format!(
                "expected one or two supervisors, got {}",
                supervisors.len()
            )))
        }
    }
    .map_err(lib_err(""))?;
    deliver(out, None, &emit_language(&args.name, &cl))?;
    Ok(Status::Success)
}

fn extremal(args: &PairArgs, out: &mut dyn Write, infimal: bool) -> Outcome {
    let (alphabet, l) = load_plant(&args.plant)?;
    let k = load_language(&args.spec, &alphabet)?;
    let pr = Projection::of_alphabet(&alphabet);
    let (result, default) = if infimal {
        (infimal_co(&k, &l, &pr), "infimal")
    } else {
        (supremal_cn(&k, &l, &pr), "supremal")
    };
    let result = result.map_err(lib_err(""))?;
    deliver(
        out,
        None,
        &emit_language(args.name.as_deref().unwrap_or(default), &result),
    )?;
    Ok(Status::Success)
}

fn run_scp(args: &ScpArgs, out: &mut dyn Write) -> Outcome {
    let (alphabet, l) = load_plant(&args.plant)?;
    let min = load_language(&args.min, &alphabet)?;
    let max = load_language(&args.max, &alphabet)?;
    match scp(&min, &max, &l, &Projection::of_alphabet(&alphabet)).map_err(lib_err(""))? {
        ScpOutcome::Solved { supervisor, achieved } => {
            deliver(out, args.out.as_deref(), &emit_supervisor("S", &supervisor))?;
            write!(out, "\n{}", emit_language("achieved", &achieved)).map_err(io_err)?;
            Ok(Status::Success)
        }
        ScpOutcome::NoSolution { infimal } => {
            writeln!(
                out,
                "no solution: the infimal controllable and observable superlanguage exceeds --max"
            )
            .map_err(io_err)?;
            write!(out, "{}", emit_language("infimal", &infimal)).map_err(io_err)?;
            Ok(Status::Negative)
        }
    }
}

/// The alphabet declared by the first operand file that has one.
fn operand_alphabet(inputs: &[String]) -> Result<Arc<Alphabet>, Failure> {
    for text in inputs {
        let path = Selector::parse(text).path;
        if let Some(a) = load(path, None).ok().and_then(|doc| doc.alphabet) {
            return Ok(a);
        }
    }
    Err(Failure("no operand file declares an `[alphabet]`".into()))
}

fn lang(args: &LangArgs, out: &mut dyn Write) -> Outcome {
    let arity = match args.op {
        LangOp::Union | LangOp::Intersection | LangOp::Concat | LangOp::Contains => 2,
        LangOp::Project | LangOp::Repair => 1,
    };
    if args.inputs.len() != arity {
        return Err(Failure(
            format!("--op {:?} takes {arity} operand(s)", args.op).to_lowercase(),
        ));
    }
    if args.op == LangOp::Repair {
        let sel = Selector::parse(&args.inputs[0]);
        let doc = parse_fdl_repairing(&read(sel.path)?, None).map_err(lib_err(sel.path))?;
        let l = pick(&doc.languages, &sel, "language")?;
        deliver(out, None, &emit_language(&args.name, l))?;
        return Ok(Status::Success);
    }
    let alphabet = operand_alphabet(&args.inputs)?;
    let a = load_language(&args.inputs[0], &alphabet)?;
    let result = match args.op {
        LangOp::Project => {
            let pr = match args.site {
                Some(i) => Projection::of_site(&alphabet, usize::from(i) - 1).map_err(lib_err(&args.inputs[0]))?,
                None => Projection::of_alphabet(&alphabet),
            };
            let projected = project_language(&pr, &a);
            let mut doc = FdlDocument::with_alphabet(projected.alphabet().clone());
            doc.languages.insert(args.name.clone(), projected);
            deliver(out, None, &emit_fdl(&doc))?;
            return Ok(Status::Success);
        }
        _ => {
            let b = load_language(&args.inputs[1], &alphabet)?;
            match args.op {
                LangOp::Union => a.union(&b),
                LangOp::Intersection => a.intersection(&b),
                LangOp::Concat => concatenation(&a, &b),
                LangOp::Contains => {
                    let inside = a.is_sublanguage_of(&b).map_err(lib_err(""))?;
                    let verdict = if inside { "is" } else { "is not" };
                    writeln!(out, "{} {verdict} contained in {}", args.inputs[0], args.inputs[1]).map_err(io_err)?;
                    return Ok(if inside { Status::Success } else { Status::Negative });
                }
                LangOp::Project | LangOp::Repair => unreachable!(),
            }
        }
    }
    .map_err(lib_err(""))?;
    deliver(out, None, &emit_language(&args.name, &result))?;
    Ok(Status::Success)
}

fn generate(args: &GenArgs, out: &mut dyn Write) -> Outcome {
    let sel = Selector::parse(&args.automaton);
    let doc = load(sel.path, None)?;
    let g = pick(&doc.automata, &sel, "automaton")?;
    deliver(
        out,
        None,
        &emit_language(&args.name, &g.generated_language(args.horizon)),
    )?;
    Ok(Status::Success)
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Outcome {
    let p = load_problem(&args.problem)?;
    let (k, l, pr) = (&p.k, &p.l, p.projection());
    let emit = |result: Result<FuzzyLanguage, Error>, name: &str, out: &mut dyn Write| -> Outcome {
        let m = result.map_err(lib_err(""))?;
        deliver(out, None, &emit_language(name, &m))?;
        Ok(Status::Success)
    };
    match args.op {
        OracleOp::InfimalCo => emit(brute_infimal_co(k, l, &pr, args.budget), "infimal", out),
        OracleOp::SupremalCn => emit(brute_supremal_cn(k, l, &pr, args.budget), "supremal", out),
        OracleOp::SupervisorExists => {
            let exists = match args.mode {
                Mode::Central => brute_supervisor_exists(k, l, &pr, args.budget),
                Mode::Decentralized => brute_decentralized_exists(k, l, &p.sites()?, args.budget),
            }
            .map_err(lib_err(""))?;
            let verdict = if exists {
                "a supervisor exists"
            } else {
                "no supervisor exists"
            };
            writeln!(out, "{verdict}").map_err(io_err)?;
            Ok(if exists { Status::Success } else { Status::Negative })
        }
    }
}

fn validate(args: &ValidateArgs, out: &mut dyn Write) -> Outcome {
    let context = match &args.alphabet {
        Some(path) => Some(
            load(path, None)?
                .alphabet
                .ok_or_else(|| Failure(format!("{path}: no `[alphabet]` section")))?,
        ),
        None => None,
    };
    for path in &args.files {
        let doc = load(path, context.as_ref())?;
        let mut parts = Vec::new();
        if let Some(a) = &doc.alphabet {
            let sites = if a.sites().is_some() { " with sites" } else { "" };
            parts.push(format!("alphabet of {} events{sites}", a.events().len()));
        }
        for (kind, names) in [
            ("language", doc.languages.keys().collect::<Vec<_>>()),
            ("automaton", doc.automata.keys().collect()),
            ("supervisor", doc.supervisors.keys().collect()),
        ] {
            if !names.is_empty() {
                let names: Vec<&str> = names.into_iter().map(String::as_str).collect();
                parts.push(format!("{kind} {}", names.join(" ")));
            }
        }
        writeln!(out, "{path}: ok ({})", parts.join("; ")).map_err(io_err)?;
    }
    Ok(Status::Success)
}

/// Runs one `fdes` invocation and returns its exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let sink: &mut dyn Write = if informational { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if informational { 0 } else { 2 };
        }
    };
    let outcome = match &cli.command {
        Command::Validate(a) => validate(a, out),
        Command::Check(a) => check(a, out),
        Command::Synthesize(a) => synthesize(a, out),
        Command::ClosedLoop(a) => closed_loop(a, out),
        Command::InfimalCo(a) => extremal(a, out, true),
        Command::SupremalCn(a) => extremal(a, out, false),
        Command::Scp(a) => run_scp(a, out),
        Command::Lang(a) => lang(a, out),
        Command::Gen(a) => generate(a, out),
        Command::Oracle(a) => oracle(a, out),
    };
    let _ = out.flush();
    match outcome {
        Ok(Status::Success) => 0,
        Ok(Status::Negative) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
