use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use operadforge::braid::BraidWord;
use operadforge::combinatory::{
    axiom_suite, bracket_abstract, comb_equal, parse_comb, to_lambda, AxiomStatus, CTerm, CombError, PolyExpr, Prim,
    Signature, SuiteReport,
};
use operadforge::lambda::{self, check_discipline, print_tree, Context, Discipline, LTerm};
use operadforge::normalizer::{lam_equal, normalize, Verdict, DEFAULT_FUEL};
use operadforge::operad::{
    closed_lambda, eta_eps, in_internal_operad, infer_arity, non_faithful_pair, operad_compose, trace_syntax, trefoil,
    ArityCert, OperadElem, OperadError, DEFAULT_ARITY_BOUND,
};
use serde_json::json;

mod suite;

/// Failure with its exit code: 1 usage, parse or discipline errors, 2 fuel
/// exhaustion, 3 an Unknown verdict or a refused equality, 4 a failed check.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }

    fn fuel(message: impl ToString) -> Failure {
        Failure { code: 2, message: message.to_string() }
    }

    fn indefinite(message: impl ToString) -> Failure {
        Failure { code: 3, message: message.to_string() }
    }

    fn failed(message: impl ToString) -> Failure {
        Failure { code: 4, message: message.to_string() }
    }
}

impl From<CombError> for Failure {
    fn from(e: CombError) -> Failure {
        match e {
            CombError::TraceEquality => Failure::indefinite(e),
            e => Failure::usage(e),
        }
    }
}

impl From<OperadError> for Failure {
    fn from(e: OperadError) -> Failure {
        match e {
            OperadError::Comb(c) => c.into(),
            OperadError::Fuel(_) => Failure::fuel(e),
            OperadError::NotMember { verdict: Verdict::Unknown, .. } => Failure::indefinite(e),
            OperadError::NotMember { verdict: Verdict::FuelExhausted, .. } => Failure::fuel(e),
            e => Failure::usage(e),
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub fuel: usize,
    pub samples: usize,
    pub seed: u64,
    pub json: bool,
}

#[derive(Parser)]
#[command(name = "operadforge", version, about = "Combinatory algebras, λ-calculi and their internal operads")]
struct Cli {
    /// β-step budget for the cartesian calculus
    #[arg(long, global = true, env = "OPERADFORGE_FUEL", default_value_t = DEFAULT_FUEL as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Samples per metavariable axiom
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TermMode {
    /// Calculus (λ-terms) or signature by discipline (combinators)
    #[arg(short, long)]
    discipline: Option<DisciplineArg>,
    /// Read terms as combinator expressions
    #[arg(long)]
    comb: bool,
    /// Binds a constant to a closed λ-term, as NAME=TERM
    #[arg(long = "let", value_name = "NAME=TERM")]
    lets: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DisciplineArg {
    Planar,
    Linear,
    Braided,
    Cartesian,
}

impl From<DisciplineArg> for Discipline {
    fn from(d: DisciplineArg) -> Discipline {
        match d {
            DisciplineArg::Planar => Discipline::Planar,
            DisciplineArg::Linear => Discipline::Linear,
            DisciplineArg::Braided => Discipline::Braided,
            DisciplineArg::Cartesian => Discipline::Cartesian,
        }
    }
}

#[derive(Args)]
struct SigArg {
    /// Signature: bi, bci, bc+-i or bciwk, optionally with +tr; defaults to the
    /// smallest one containing the term's primitives
    #[arg(short, long)]
    sig: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// βη-normal form of a λ-term or combinator expression
    Norm {
        #[command(flatten)]
        mode: TermMode,
        /// Print the term tree instead of the term
        #[arg(long)]
        tree: bool,
        term: Option<String>,
    },
    /// Decides equality of two terms
    Eq {
        #[command(flatten)]
        mode: TermMode,
        left: String,
        right: String,
    },
    /// Bracket abstraction of a polynomial over the named variables
    Abstract {
        #[command(flatten)]
        sig: SigArg,
        /// Variables in abstraction order, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        term: Option<String>,
    },
    /// Least arity m -> n of an element
    Arity {
        #[command(flatten)]
        sig: SigArg,
        #[arg(long, default_value_t = DEFAULT_ARITY_BOUND)]
        bound: usize,
        term: Option<String>,
    },
    /// Membership in IA(m)
    Member {
        #[command(flatten)]
        sig: SigArg,
        #[arg(short)]
        m: usize,
        term: Option<String>,
    },
    /// Operadic composition g(f_1, ..., f_n); operands are TERM:m
    Compose {
        #[command(flatten)]
        sig: SigArg,
        g: String,
        fs: Vec<String>,
    },
    /// The closed structure λ : IA(m+1) -> IA(m); operand is TERM:m
    LambdaOp {
        #[command(flatten)]
        sig: SigArg,
        operand: String,
    },
    /// Trace syntax
    Trace {
        #[command(subcommand)]
        which: TraceCmd,
    },
    /// Braid group operations
    Braid {
        #[command(subcommand)]
        op: BraidCmd,
    },
    /// Checks the axiom table of a signature in its term model
    Axioms { signature: String },
    /// Runs the library checks of the acceptance corpus
    Suite,
    /// The pair M+ = C+ o B, M- = C- o B with equal polynomial maps
    NonFaithful,
}

#[derive(Subcommand)]
enum TraceCmd {
    Trefoil,
    Eta,
    Eps,
    /// Tr f for f : m -> n with m, n >= 1
    Of {
        #[command(flatten)]
        sig: SigArg,
        term: String,
        m: usize,
        n: usize,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Equality in the braid group
    Eq { left: String, right: String },
    /// Cabling with one width per strand, read at the end of the word
    Cable { word: String, widths: Vec<usize> },
    /// Underlying permutation, as the image of 1..n
    Perm { word: String },
    /// Block sum
    Sum { words: Vec<String> },
}

fn input(arg: Option<String>) -> Result<String, Failure> {
    if let Some(text) = arg {
        return Ok(text);
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf).map_err(Failure::usage)?;
    let text = buf.trim().to_string();
    if text.is_empty() {
        return Err(Failure::usage("no term given on the command line or standard input"));
    }
    Ok(text)
}

fn parse_lambda(text: &str) -> Result<LTerm, Failure> {
    lambda::parse(text).map_err(Failure::usage)
}

fn parse_c(text: &str) -> Result<CTerm, Failure> {
    Ok(parse_comb(text)?)
}

fn smallest_signature(terms: &[&CTerm]) -> Signature {
    let prims: Vec<Prim> = terms.iter().flat_map(|t| t.prims()).collect();
    let base = [Signature::PLANAR, Signature::LINEAR, Signature::BRAIDED, Signature::CARTESIAN]
        .into_iter()
        .find(|s| prims.iter().all(|&p| p == Prim::Tr || s.allows(p)))
        .unwrap_or(Signature::CARTESIAN);
    if prims.contains(&Prim::Tr) {
        base.with_trace().unwrap_or(base)
    } else {
        base
    }
}

fn signature(arg: &SigArg, terms: &[&CTerm]) -> Result<Signature, Failure> {
    let s = match &arg.sig {
        Some(text) => text.parse::<Signature>()?,
        None => smallest_signature(terms),
    };
    for t in terms {
        s.check(t)?;
    }
    Ok(s)
}

/// Let-bound λ-terms, each closed and in discipline `d`.
fn bindings(lets: &[String], d: Discipline) -> Result<Vec<(String, LTerm)>, Failure> {
    lets.iter()
        .map(|binding| {
            let (name, text) = binding
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("`--let {binding}`: expected NAME=TERM")))?;
            let t = parse_lambda(text)?;
            check_discipline(&t, &Context::empty(), d).map_err(Failure::usage)?;
            if !t.is_closed() {
                return Err(Failure::usage(format!("`{name}` is bound to an open term")));
            }
            Ok((name.trim().to_string(), t))
        })
        .collect()
}

/// The λ-terms denoted by `texts` under `mode`, with their discipline.
fn lambda_terms(mode: &TermMode, texts: &[&str]) -> Result<(Vec<LTerm>, Discipline), Failure> {
    let mut terms = Vec::new();
    let d = if mode.comb {
        let cs: Vec<CTerm> = texts.iter().map(|t| parse_c(t)).collect::<Result<_, _>>()?;
        let refs: Vec<&CTerm> = cs.iter().collect();
        let s = match mode.discipline {
            Some(d) => Signature::for_discipline(d.into()),
            None => smallest_signature(&refs),
        };
        for c in &cs {
            s.check(c)?;
            if c.prims().contains(&Prim::Tr) {
                return Err(Failure::indefinite(CombError::TraceEquality));
            }
            terms.push(to_lambda(c, s.discipline())?);
        }
        s.discipline()
    } else {
        terms = texts.iter().map(|t| parse_lambda(t)).collect::<Result<_, _>>()?;
        match mode.discipline {
            Some(d) => d.into(),
            None => Discipline::ALL
                .into_iter()
                .find(|&d| terms.iter().all(|t| check_discipline(t, &Context::empty(), d).is_ok()))
                .unwrap_or(Discipline::Cartesian),
        }
    };
    let lets = bindings(&mode.lets, d)?;
    let lookup = |name: &str| lets.iter().find(|(n, _)| n == name).map(|(_, t)| t.clone());
    let terms: Vec<LTerm> = terms.iter().map(|t| t.instantiate(&lookup)).collect();
    for t in &terms {
        check_discipline(t, &Context::empty(), d).map_err(Failure::usage)?;
    }
    Ok((terms, d))
}

fn report_verdict(v: Verdict, cfg: RunConfig) -> Outcome {
    if cfg.json {
        println!("{}", json!({ "verdict": v }));
    } else {
        println!("{v}");
    }
    match v {
        Verdict::Equal | Verdict::NotEqual => Ok(()),
        Verdict::FuelExhausted => Err(Failure::fuel("fuel exhausted before a verdict")),
        Verdict::Unknown => Err(Failure::indefinite("the verdict is Unknown")),
    }
}

fn operand(text: &str) -> Result<(CTerm, usize), Failure> {
    let (term, m) = text.rsplit_once(':').ok_or_else(|| Failure::usage(format!("`{text}`: expected TERM:m")))?;
    let m = m.trim().parse().map_err(|_| Failure::usage(format!("`{text}`: arity is not a number")))?;
    Ok((parse_c(term)?, m))
}

fn braid(text: &str) -> Result<BraidWord, Failure> {
    text.parse().map_err(Failure::usage)
}

fn print_cert(c: &ArityCert, cfg: RunConfig) {
    if cfg.json {
        println!("{}", json!({ "term": c.elem.to_string(), "m": c.m, "n": c.n, "checked": c.checked }));
    } else {
        println!("{} : {} -> {}", c.elem, c.m, c.n);
    }
}

fn print_elem(e: &OperadElem, cfg: RunConfig) {
    if cfg.json {
        println!("{}", json!({ "term": e.elem.to_string(), "m": e.m }));
    } else {
        println!("{} : IA({})", e.elem, e.m);
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = RunConfig { fuel: cli.fuel as usize, samples: cli.samples as usize, seed: cli.seed, json: cli.json };
    match cli.command {
        Command::Norm { mode, tree, term } => {
            let text = input(term)?;
            let (terms, d) = lambda_terms(&mode, &[&text])?;
            let nf = normalize(&terms[0], d, cfg.fuel).map_err(Failure::fuel)?;
            if tree {
                print!("{}", print_tree(&nf));
            } else if cfg.json {
                println!("{}", json!({ "discipline": d.name(), "normal_form": nf.to_string() }));
            } else {
                println!("{nf}");
            }
            Ok(())
        }
        Command::Eq { mode, left, right } => {
            let (terms, d) = lambda_terms(&mode, &[&left, &right])?;
            report_verdict(lam_equal(&terms[0], &terms[1], d, cfg.fuel), cfg)
        }
        Command::Abstract { sig, vars, term } => {
            let text = input(term)?;
            let names: Vec<&str> = vars.iter().map(|v| v.trim()).collect();
            let c = parse_c(&text)?;
            let p = PolyExpr::from_cterm(&c, &names)?;
            let coefficients = match &p {
                PolyExpr::Coef(c) => c.clone(),
                _ => p.instantiate(&vec![CTerm::Prim(Prim::I); names.len()]),
            };
            let abs = if sig.sig.is_some() {
                bracket_abstract(&p, names.len(), signature(&sig, &[&coefficients])?)?
            } else {
                // the smallest signature whose calculus admits the variable usage
                let least = smallest_signature(&[&coefficients]);
                let mut tries = [Signature::PLANAR, Signature::LINEAR, Signature::BRAIDED, Signature::CARTESIAN]
                    .into_iter()
                    .filter(|s| s.tag >= least.tag && s.check(&coefficients).is_ok())
                    .map(|s| bracket_abstract(&p, names.len(), s));
                let first = tries.next().expect("cartesian admits every coefficient");
                match first {
                    Ok(abs) => abs,
                    Err(e) => tries.find_map(Result::ok).ok_or(e)?,
                }
            };
            println!("{abs}");
            Ok(())
        }
        Command::Arity { sig, bound, term } => {
            let c = parse_c(&input(term)?)?;
            let s = signature(&sig, &[&c])?;
            match infer_arity(&c, bound, s, cfg.fuel)? {
                Some((m, n)) if cfg.json => println!("{}", json!({ "m": m, "n": n })),
                Some((m, n)) => println!("{m} -> {n}"),
                None if cfg.json => println!("{}", json!(null)),
                None => println!("no arity with m, n <= {bound}"),
            }
            Ok(())
        }
        Command::Member { sig, m, term } => {
            let c = parse_c(&input(term)?)?;
            let s = signature(&sig, &[&c])?;
            report_verdict(in_internal_operad(&c, m, s, cfg.fuel)?, cfg)
        }
        Command::Compose { sig, g, fs } => {
            let (g, gm) = operand(&g)?;
            let fs: Vec<(CTerm, usize)> = fs.iter().map(|f| operand(f)).collect::<Result<_, _>>()?;
            let mut refs = vec![&g];
            refs.extend(fs.iter().map(|(c, _)| c));
            let s = signature(&sig, &refs)?;
            let g = OperadElem::new(g.clone(), gm, s, cfg.fuel)?;
            let fs: Vec<OperadElem> =
                fs.into_iter().map(|(c, m)| OperadElem::new(c, m, s, cfg.fuel)).collect::<Result<_, _>>()?;
            print_elem(&operad_compose(&g, &fs, s, true)?, cfg);
            Ok(())
        }
        Command::LambdaOp { sig, operand: text } => {
            let (t, m) = operand(&text)?;
            let s = signature(&sig, &[&t])?;
            let t = OperadElem::new(t, m, s, cfg.fuel)?;
            print_elem(&closed_lambda(&t)?, cfg);
            Ok(())
        }
        Command::Trace { which } => {
            let cert = match which {
                TraceCmd::Trefoil => trefoil(),
                TraceCmd::Eta => eta_eps().0,
                TraceCmd::Eps => eta_eps().1,
                TraceCmd::Of { sig, term, m, n } => {
                    let c = parse_c(&term)?;
                    let s = signature(&sig, &[&c])?;
                    let traced = s.with_trace()?;
                    let cert = ArityCert::certify(c, m, n, Signature { trace_extension: false, ..s }, cfg.fuel)?;
                    if !cert.checked {
                        return Err(Failure::failed(format!("{} is not {m} -> {n}", cert.elem)));
                    }
                    trace_syntax(&cert, traced)?
                }
            };
            print_cert(&cert, cfg);
            Ok(())
        }
        Command::Braid { op } => run_braid(op, cfg),
        Command::Axioms { signature } => {
            let s: Signature = signature.parse()?;
            let report = axiom_suite(s, cfg.samples, cfg.seed, cfg.fuel);
            print_report(&report, cfg);
            if report.count(AxiomStatus::Fail) > 0 {
                return Err(Failure::failed(format!("{} axioms fail", report.count(AxiomStatus::Fail))));
            }
            if report.count(AxiomStatus::Unknown) > 0 {
                return Err(Failure::indefinite(format!("{} axioms undecided", report.count(AxiomStatus::Unknown))));
            }
            Ok(())
        }
        Command::Suite => suite::run(cfg),
        Command::NonFaithful => {
            let (mp, mm) = non_faithful_pair();
            let v = comb_equal(&mp.elem, &mm.elem, Signature::BRAIDED, cfg.fuel)?;
            if !cfg.json {
                println!("M+ = {}\nM- = {}", mp.elem, mm.elem);
            }
            report_verdict(v, cfg)
        }
    }
}

fn run_braid(op: BraidCmd, cfg: RunConfig) -> Outcome {
    let word = match op {
        BraidCmd::Eq { left, right } => {
            let eq = braid(&left)?.equals(&braid(&right)?).map_err(Failure::usage)?;
            return report_verdict(Verdict::from_bool(eq), cfg);
        }
        BraidCmd::Cable { word, widths } => braid(&word)?.cable(&widths).map_err(Failure::usage)?,
        BraidCmd::Perm { word } => {
            let p = braid(&word)?.permutation();
            if cfg.json {
                println!("{}", json!(p.image()));
            } else {
                println!("{p}");
            }
            return Ok(());
        }
        BraidCmd::Sum { words } => {
            let parts: Vec<BraidWord> = words.iter().map(|w| braid(w)).collect::<Result<_, _>>()?;
            BraidWord::direct_sum(&parts)
        }
    };
    if cfg.json {
        println!("{}", json!({ "strands": word.strands(), "letters": word.letters() }));
    } else {
        println!("{word}");
    }
    Ok(())
}

fn print_report(report: &SuiteReport, cfg: RunConfig) {
    if cfg.json {
        println!("{}", report.to_json());
        return;
    }
    for e in &report.entries {
        let status = match e.status {
            AxiomStatus::Pass => "pass",
            AxiomStatus::Fail => "FAIL",
            AxiomStatus::Unknown => "unknown",
        };
        println!("{:<10} {status}", e.axiom);
        if e.status != AxiomStatus::Pass {
            println!("    lhs {}\n    rhs {}", e.lhs_nf, e.rhs_nf);
            for (k, v) in &e.witness_bindings {
                println!("    {k} = {v}");
            }
        }
    }
    println!(
        "{}: {} pass, {} fail, {} unknown",
        report.signature,
        report.count(AxiomStatus::Pass),
        report.count(AxiomStatus::Fail),
        report.count(AxiomStatus::Unknown)
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
