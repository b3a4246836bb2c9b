use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use nichols_qsp::bicharacter::{parse_context, Ctx, Weight};
use nichols_qsp::coideal::{generate_relations, Coideal};
use nichols_qsp::double::elem_terms;
use nichols_qsp::examples;
use nichols_qsp::freealg::{degrees_of_height, free_from_json, free_to_json, FreeElement, Side, TermJson, Word};
use nichols_qsp::heisenberg::{condition_c, condition_holds};
use nichols_qsp::kmatrix::KMatrix;
use nichols_qsp::nichols::{PreNicholsPresentation, Quotient, QuotientMode};
use nichols_qsp::scalars::{CycNum, Scalar};
use nichols_qsp::suite;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Pairing,
    NicholsBasis,
    Theta,
    CoidealConditions,
    CoidealRelations,
    Kmatrix,
    Verify,
    Examples,
}

/// Exact computations for Drinfeld doubles of diagonal Nichols algebras and their coideal subalgebras.
#[derive(Parser, Debug)]
#[command(name = "nichols-qsp", version)]
struct Args {
    /// Context file (JSON).
    #[arg(long)]
    context: Option<PathBuf>,
    /// A built-in context with its defining relations, used when no context file is given.
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    #[arg(long, value_enum)]
    command: Command,
    /// Degree bound D.
    #[arg(long)]
    degree: Option<usize>,
    /// Defining relations (JSON list of term lists).
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Parameter values c_1,…,c_n as cyclotomic literals in z, or "sym".
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<String>>,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Input(String),
    Mismatch(Value),
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RelationsFile {
    Bare(Vec<Vec<TermJson>>),
    Wrapped { relations: Vec<Vec<TermJson>> },
}

struct Job {
    ctx: Arc<Ctx>,
    relations: Option<PreNicholsPresentation>,
    degree: usize,
}

fn load(args: &Args) -> Result<Job, Failure> {
    let (mut ctx, mut relations) = match (&args.context, &args.example) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            (parse_context(&text).map_err(input)?, None)
        }
        (None, Some(name)) => {
            let (c, r) = examples::named(name)
                .ok_or_else(|| input(format!("unknown example {name}; available: {}", examples::NAMES.join(", "))))?;
            (c, Some(r))
        }
        (None, None) => return Err(input("either --context or --example is required")),
    };
    if let Some(d) = args.degree {
        ctx = ctx.with_degree_bound(d);
    }
    if let Some(list) = &args.c {
        if list.len() != ctx.n {
            return Err(input(format!("expected {} values for --c, got {}", ctx.n, list.len())));
        }
        let mut c = Vec::new();
        for (i, s) in list.iter().enumerate() {
            if s.trim() == "sym" {
                c.push(Scalar::var(ctx.ord, ctx.n, i));
            } else {
                c.push(Scalar::constant(CycNum::parse(ctx.ord, s.trim()).map_err(input)?, ctx.n));
            }
        }
        ctx = ctx.with_params(c).map_err(input)?;
    }
    if let Some(path) = &args.relations {
        let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let parsed: RelationsFile = serde_json::from_str(&text).map_err(input)?;
        let lists = match parsed {
            RelationsFile::Bare(l) | RelationsFile::Wrapped { relations: l } => l,
        };
        let rels: Vec<FreeElement> = lists.iter().map(|t| free_from_json(&ctx, t)).collect::<Result<_, _>>().map_err(input)?;
        relations = Some(PreNicholsPresentation::new(ctx.n, rels).map_err(input)?);
    }
    let degree = ctx.degree_bound;
    Ok(Job { ctx: Arc::new(ctx), relations, degree })
}

fn require_relations(job: &Job) -> Result<&PreNicholsPresentation, Failure> {
    job.relations.as_ref().ok_or_else(|| input("this command needs --relations (or --example)"))
}

fn external(words: &[Word]) -> Vec<Vec<usize>> {
    words.iter().map(|w| w.to_external()).collect()
}

fn strings(row: &[CycNum]) -> Vec<String> {
    row.iter().map(|x| x.to_string()).collect()
}

fn degrees(job: &Job) -> Vec<Weight> {
    (0..=job.degree).flat_map(|h| degrees_of_height(job.ctx.n, h)).collect()
}

fn pairing(job: &Job) -> Result<Value, Failure> {
    let q = Quotient::new(job.ctx.clone(), QuotientMode::Nichols);
    let mut out = Vec::new();
    for mu in degrees(job) {
        let data = q.degree_data(&mu).map_err(input)?;
        let gram: Vec<Vec<String>> = data.gram.iter().map(|r| strings(r)).collect();
        out.push(json!({ "degree": mu.0, "words": external(&data.all_words), "gram": gram }));
    }
    Ok(json!({ "pairing": out }))
}

fn nichols_basis(job: &Job) -> Result<Value, Failure> {
    let mut out = Vec::new();
    let q = match job.relations.clone() {
        Some(p) => Quotient::new(job.ctx.clone(), QuotientMode::Presentation(p)),
        None => Quotient::new(job.ctx.clone(), QuotientMode::Nichols),
    };
    for mu in degrees(job) {
        let basis = q.basis(Side::F, &mu).map_err(input)?;
        let kernel: Vec<Vec<TermJson>> = if q.is_nichols() {
            q.degree_data(&mu).map_err(input)?.kernel_basis.iter().map(free_to_json).collect()
        } else {
            let mut ks = Vec::new();
            for w in nichols_qsp::freealg::words_of_degree(&mu) {
                if basis.contains(&w) {
                    continue;
                }
                let f = FreeElement::single(w, job.ctx.sc_one());
                let nf = q.normal_form(Side::F, &f).map_err(input)?;
                ks.push(free_to_json(&f.minus(&nf)));
            }
            ks
        };
        out.push(json!({ "degree": mu.0, "rank": basis.len(), "basis": external(&basis), "kernel": kernel }));
    }
    Ok(json!({ "mode": if q.is_nichols() { "nichols" } else { "presentation" }, "degrees": out }))
}

fn theta(job: &Job) -> Result<Value, Failure> {
    let q = Quotient::new(job.ctx.clone(), QuotientMode::Nichols);
    let mut out = Vec::new();
    for mu in degrees(job) {
        let data = q.degree_data(&mu).map_err(input)?;
        let sign = if mu.height() % 2 == 0 { 1 } else { -1 };
        let pairs = q.dual_pairs(&mu).map_err(input)?;
        let mut matrix = vec![vec![CycNum::zero(job.ctx.ord); data.col_pivots.len()]; data.pivots.len()];
        for (p, c, x) in pairs {
            let i = data.pivots.iter().position(|w| *w == p).expect("pivot");
            let j = data.col_pivots.iter().position(|w| *w == c).expect("pivot");
            matrix[i][j] = x.scale_int(sign);
        }
        let matrix: Vec<Vec<String>> = matrix.iter().map(|r| strings(r)).collect();
        out.push(json!({ "degree": mu.0, "f_words": external(&data.pivots), "e_words": external(&data.col_pivots), "matrix": matrix }));
    }
    Ok(json!({ "theta": out }))
}

fn conditions(job: &Job) -> Result<Value, Failure> {
    let pres = require_relations(job)?;
    let cs = condition_c(&job.ctx, pres).map_err(input)?;
    Ok(json!({ "holds": condition_holds(&cs), "constraints": cs }))
}

#[derive(Serialize)]
struct RelationOut {
    index: usize,
    relation: Vec<TermJson>,
    r: Vec<nichols_qsp::double::TermOut>,
    vanishes_at_b: bool,
}

fn coideal_relations(job: &Job) -> Result<Value, Failure> {
    let pres = require_relations(job)?;
    let rels = generate_relations(&job.ctx, pres).map_err(input)?;
    let bound = job.degree.max(pres.relations.iter().map(|p| p.iter().map(|(w, _)| w.len()).max().unwrap_or(0)).max().unwrap_or(0));
    let co = Coideal::new(Arc::new(Quotient::with_bound(job.ctx.clone(), QuotientMode::Presentation(pres.clone()), bound)));
    let mut out = Vec::new();
    let mut all = true;
    for g in &rels {
        let ok = co.eval_at_b(&g.r).map_err(input)?.is_zero();
        all &= ok;
        out.push(RelationOut { index: g.index, relation: free_to_json(&pres.relations[g.index]), r: elem_terms(&g.r), vanishes_at_b: ok });
    }
    let v = json!({ "relations": out, "all_vanish": all });
    if all {
        Ok(v)
    } else {
        Err(Failure::Mismatch(v))
    }
}

fn build_kmatrix(job: &Job) -> Result<KMatrix, Failure> {
    if !job.ctx.params_numeric() {
        return Err(input("kmatrix and verify need numeric parameters (--c or a context file with values)"));
    }
    if job.ctx.c.iter().any(|c| c.is_zero()) {
        return Err(input("all parameters must be nonzero"));
    }
    let pres = job.relations.clone().unwrap_or_else(PreNicholsPresentation::empty);
    KMatrix::checked(job.ctx.clone(), job.degree, &pres).map_err(input)
}

fn kmatrix(job: &Job) -> Result<Value, Failure> {
    let km = build_kmatrix(job)?;
    let mut by_degree: std::collections::BTreeMap<(i64, Vec<i32>), Vec<_>> = Default::default();
    for e in km.quasi_k_entries() {
        let h: i64 = e.degree.iter().map(|&x| x as i64).sum();
        by_degree.entry((h, e.degree.clone())).or_default().push(e);
    }
    let comps: Vec<Value> = by_degree.into_iter().map(|((_, d), es)| json!({ "degree": d, "entries": es })).collect();
    Ok(json!({ "quasi_k": comps }))
}

fn verify(job: &Job) -> Result<Value, Failure> {
    let km = build_kmatrix(job)?;
    let results = km.verify_all().map_err(input)?;
    let passed = results.iter().all(|r| r.passed);
    let v = json!({ "degree": job.degree, "passed": passed, "identities": results });
    if passed {
        Ok(v)
    } else {
        Err(Failure::Mismatch(v))
    }
}

fn run_examples() -> Result<Value, Failure> {
    let reports = suite::run_all();
    let passed = reports.iter().all(|r| r.passed);
    let v = json!({ "passed": passed, "criteria": reports });
    if passed {
        Ok(v)
    } else {
        Err(Failure::Mismatch(v))
    }
}

fn dispatch(args: &Args) -> Result<Value, Failure> {
    if let Command::Examples = args.command {
        return run_examples();
    }
    let job = load(args)?;
    match args.command {
        Command::Pairing => pairing(&job),
        Command::NicholsBasis => nichols_basis(&job),
        Command::Theta => theta(&job),
        Command::CoidealConditions => conditions(&job),
        Command::CoidealRelations => coideal_relations(&job),
        Command::Kmatrix => kmatrix(&job),
        Command::Verify => verify(&job),
        Command::Examples => unreachable!(),
    }
}

fn emit(args: &Args, v: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())? + "\n";
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(k) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (value, code) = match dispatch(&args) {
        Ok(v) => (v, 0),
        Err(Failure::Mismatch(v)) => (v, 1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&args, &value) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
