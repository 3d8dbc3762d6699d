use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use koszul::et::{
    build_cohomology, build_group_side, verify_theorem, EtRecipe, Theorem, VerifyOptions,
    SCHEMA_VERSION,
};
use koszul::groups::{
    expected_strongly_free_prefix, graded_algebra_candidate, jennings_oracle, lazard_oracle,
    pairing_value, strongly_free_report, FiniteGroupTable, GroupPresentation,
};
use koszul::pbw::{normalize_basis, pbw_search_with, ConfluenceResult, SearchOptions};
use koszul::quad::{cobar_ext_dims_within, hilbert_prefix};
use koszul::{CombineMode, DeglexOrder, QuadraticAlgebra};

// A closed pipe (`| head`) ends output quietly instead of panicking.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

const GRAMMARS: &str = "\
FILE FORMATS
  Algebra files are JSON: {\"p\": 3, \"generators\": [\"y1\",\"y2\"],
  \"relators\": [[{\"monomial\": [\"y1\",\"y1\"], \"coeff\": 1}], ...], \"t\": \"y1\"}.
  \"t\" is optional; \"0\" marks the zero element.
  Presentation files are JSON: {\"p\": 2, \"generators\": [\"x1\",\"x2\"],
  \"relators\": [\"x1^2*[x1,x2]\"]}.
  Group tables are CSV: a first record `identity,<k>`, then one row of
  product indices per element.

WORD GRAMMAR
  word    := factor ('*' factor)*
  factor  := atom ('^' integer)?
  atom    := generator | '[' word ',' word ']' | '(' word ')'
  A generator is one of the declared labels, e.g. x1. Negative exponents
  invert: x1^-1. The commutator is [a,b] = a^-1 b^-1 a b.

RECIPE GRAMMAR
  recipe  := '(' 'free' d ')'
           | '(' 'demushkin' d case param ')'
           | '(' 'freeprod' recipe recipe ')'
           | '(' 'semidirect' m recipe ')'
           | 'euclid' | '(' 'euclid' ')'
           | '(' 'pfr-freeprod' recipe recipe ')'
           | '(' 'pfr-semidirect' m recipe ')'
  case    := 'i' | 'ii' | 'iii' | 'iv'
  param   := 'q=' integer | 'q=inf' | 'f=' integer | 'f=inf'
  Case i takes q (a power of p other than 2, or inf); the other cases
  take f and need p = 2. ';' starts a comment. Pass @path to read a recipe
  from a file.

EXIT STATUS
  0 success or PASS, 1 mathematical FAIL, 2 usage or format error.";

#[derive(Parser)]
#[command(name = "koszul", version, about = "Quadratic algebras, PBW certificates and pro-p presentations over F_p")]
#[command(after_long_help = GRAMMARS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on quadratic algebra files
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Operations on pro-p presentation files
    #[command(subcommand)]
    Group(GroupCmd),
    /// Dimension subgroups of a finite p-group table
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Recipes of elementary type
    #[command(subcommand)]
    Et(EtCmd),
}

#[derive(Args)]
struct Output {
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Search {
    /// Ascending generator order, comma separated labels or 1-based indices
    #[arg(long)]
    order: Option<String>,
    /// Maximum number of generator orders tried
    #[arg(long, default_value_t = 5040)]
    budget: usize,
    /// Seed for sampling orders when the budget is smaller than d!
    #[arg(long)]
    seed: Option<u64>,
    /// Print the full rewriting certificate
    #[arg(long)]
    emit_certificate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    DirectSum,
    FreeProduct,
    SymTensor,
    SkewTensor,
}

impl From<Mode> for CombineMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::DirectSum => CombineMode::DirectSum,
            Mode::FreeProduct => CombineMode::FreeProduct,
            Mode::SymTensor => CombineMode::SymTensor,
            Mode::SkewTensor => CombineMode::SkewTensor,
        }
    }
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Quadratic dual, written as an algebra file
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Combine two algebras
    Combine {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graded dimensions through the given degree
    Hilbert {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Ext dimensions for i + j <= degree; FAIL if an off-diagonal entry is nonzero
    Ext {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Confluence under one order, or a search over orders
    Pbw {
        file: PathBuf,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct GroupInput {
    file: PathBuf,
    /// Magnus truncation degree
    #[arg(long, default_value_t = 6)]
    truncation: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Lowest nonzero homogeneous part of each relator
    InitialForms(GroupInput),
    /// The graded algebra cut out by the initial forms
    Grade {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value_t = 5)]
        degree: usize,
    },
    /// Pairing tables of each relator against pairs of generators
    Pair(GroupInput),
    /// Strong freeness of the initial forms through the given degree
    MildCheck {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
}

#[derive(Args)]
struct OracleArgs {
    table: PathBuf,
    #[arg(long)]
    p: u32,
    /// Number of filtration steps
    #[arg(long, default_value_t = 6)]
    degree: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Augmentation ideal powers in F_p[G]
    Jennings(OracleArgs),
    /// Lazard's formula from the lower p-central data
    Lazard(OracleArgs),
}

#[derive(Subcommand)]
enum EtCmd {
    /// Cohomology algebra and graded group algebra of a recipe
    Build {
        #[arg(long)]
        recipe: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Run the checks for one theorem
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        recipe: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, default_value_t = 5040)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        emit_certificate: bool,
        #[command(flatten)]
        out: Output,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, real usage errors 2
            e.exit();
        }
    };
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Algebra(c) => algebra(c),
        Command::Group(c) => group(c),
        Command::Oracle(c) => oracle(c),
        Command::Et(c) => et(c),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_algebra(path: &Path) -> Result<QuadraticAlgebra> {
    QuadraticAlgebra::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_presentation(path: &Path) -> Result<GroupPresentation> {
    GroupPresentation::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, format!("{}\n", text))
            .with_context(|| format!("cannot write {}", p.display())),
        None => {
            outln!("{}", text);
            Ok(())
        }
    }
}

fn print_json(v: serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_order(spec: &str, labels: &[String]) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(i) = labels.iter().position(|l| l == tok) {
                return Ok(i);
            }
            match tok.parse::<usize>() {
                Ok(k) if k >= 1 && k <= labels.len() => Ok(k - 1),
                _ => bail!("unknown generator '{}' in --order", tok),
            }
        })
        .collect()
}

fn algebra(cmd: AlgebraCmd) -> Result<Status> {
    match cmd {
        AlgebraCmd::Dual { file, output } => {
            let a = load_algebra(&file)?;
            emit(&a.quadratic_dual().to_json(), output.as_deref())?;
        }
        AlgebraCmd::Combine { left, right, mode, output } => {
            let a = load_algebra(&left)?;
            let b = load_algebra(&right)?;
            emit(&a.combine(&b, mode.into())?.to_json(), output.as_deref())?;
        }
        AlgebraCmd::Hilbert { file, degree, out } => {
            let dims = hilbert_prefix(&load_algebra(&file)?, degree)?;
            if out.json {
                print_json(json!({ "schema_version": SCHEMA_VERSION, "dims": dims }));
            } else {
                outln!("dims {}", join(&dims));
            }
        }
        AlgebraCmd::Ext { file, degree, out } => {
            let t = cobar_ext_dims_within(&load_algebra(&file)?, degree)?;
            let off = t.off_diagonal_nonzero();
            if out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "total": degree,
                    "table": t,
                    "diagonal": t.diagonal(),
                    "koszul_in_range": off.is_empty(),
                }));
            } else {
                for i in 0..=degree {
                    let row: Vec<String> = (0..=degree - i)
                        .map(|j| t.get(i, j).map_or("-".into(), |v| v.to_string()))
                        .collect();
                    outln!("i={} j=0..: {}", i, row.join(" "));
                }
                for ((i, j), v) in &off {
                    outln!("off-diagonal Ext^({},{}) has dimension {}", i, j, v);
                }
                outln!("{}", if off.is_empty() { "PASS diagonal through total degree" } else { "FAIL" });
            }
            if !off.is_empty() {
                return Ok(Status::Fail);
            }
        }
        AlgebraCmd::Pbw { file, search, out } => return pbw(&load_algebra(&file)?, &search, out.json),
    }
    Ok(Status::Pass)
}

fn pbw(a: &QuadraticAlgebra, s: &Search, json_out: bool) -> Result<Status> {
    let labels = a.labels();
    let result = match &s.order {
        Some(spec) => {
            let order = DeglexOrder::from_ascending(&parse_order(spec, labels)?)?;
            normalize_basis(a.relators(), &order)?.is_confluent()
        }
        None => {
            let opts = SearchOptions {
                budget: s.budget,
                seed: s.seed,
                ..SearchOptions::default()
            };
            match pbw_search_with(a, &opts) {
                Some(c) => ConfluenceResult::Confluent(c),
                None => {
                    if json_out {
                        print_json(json!({
                            "schema_version": SCHEMA_VERSION,
                            "verdict": "FAIL",
                            "certificate": null,
                            "counterexample": null,
                        }));
                    } else {
                        outln!("FAIL no confluent order among {} tried", s.budget);
                    }
                    return Ok(Status::Fail);
                }
            }
        }
    };
    match result {
        ConfluenceResult::Confluent(cert) => {
            let export = cert.export(labels);
            if json_out {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "verdict": "PASS",
                    "certificate": export,
                    "counterexample": null,
                }));
            } else {
                outln!(
                    "PASS order {}, {} critical monomials confluent",
                    export.order.join(" < "),
                    export.critical.len()
                );
                if s.emit_certificate {
                    out!("{}", export.to_text());
                }
            }
            Ok(Status::Pass)
        }
        ConfluenceResult::NotConfluent(ce) => {
            let forms: Vec<String> = ce.normal_forms.iter().map(|f| f.render(labels)).collect();
            let mono = ce.monomial.render(labels);
            if json_out {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "verdict": "FAIL",
                    "certificate": null,
                    "counterexample": {
                        "monomial": mono,
                        "normal_forms": forms,
                        "exhausted": ce.exhausted,
                    },
                }));
            } else if ce.exhausted {
                outln!("FAIL rewriting {} exceeded the vertex cap", mono);
            } else {
                outln!("FAIL {} has normal forms {}", mono, forms.join(" | "));
            }
            Ok(Status::Fail)
        }
    }
}

fn group(cmd: GroupCmd) -> Result<Status> {
    match cmd {
        GroupCmd::InitialForms(input) => {
            let g = load_presentation(&input.file)?;
            // X1 for x1 and so on
            let labels: Vec<String> = g.labels().iter().map(|l| l.to_uppercase()).collect();
            let forms = g.initial_forms(input.truncation)?;
            if input.out.json {
                let v: Vec<_> = forms
                    .iter()
                    .map(|f| json!({ "degree": f.degree, "form": f.poly.render(&labels) }))
                    .collect();
                print_json(json!({ "schema_version": SCHEMA_VERSION, "forms": v }));
            } else {
                for (r, f) in g.relators().iter().zip(&forms) {
                    outln!("{}: degree {}: {}", r.render(g.labels()), f.degree, f.poly.render(&labels));
                }
            }
        }
        GroupCmd::Grade { input, degree } => {
            let g = load_presentation(&input.file)?;
            let cand = graded_algebra_candidate(&g, input.truncation)?;
            let dims = cand.hilbert_prefix(degree)?;
            let file = cand.algebra.as_ref().map(koszul::quad::AlgebraFile::from_algebra);
            if input.out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "quadratic": file.is_some(),
                    "dims": dims,
                    "algebra": file,
                }));
            } else {
                outln!("dims {}", join(&dims));
                match &file {
                    Some(f) => {
                        outln!("quadratic, relators of rank {}", cand.quadratic_rank());
                        outln!("{}", serde_json::to_string_pretty(f)?);
                    }
                    None => outln!("not quadratic: some initial form has degree above 2"),
                }
            }
        }
        GroupCmd::Pair(input) => {
            let g = load_presentation(&input.file)?;
            let d = g.num_generators();
            let mut tables = Vec::new();
            for r in g.relators() {
                let mut rows = Vec::with_capacity(d);
                for k in 0..d {
                    let row = (0..d)
                        .map(|l| pairing_value(r, k, l, g.field(), d).map(|s| s.value))
                        .collect::<koszul::Result<Vec<u32>>>()?;
                    rows.push(row);
                }
                tables.push((r.render(g.labels()), rows));
            }
            if input.out.json {
                let v: Vec<_> = tables
                    .iter()
                    .map(|(w, rows)| json!({ "relator": w, "pairing": rows }))
                    .collect();
                print_json(json!({ "schema_version": SCHEMA_VERSION, "relators": v }));
            } else {
                for (w, rows) in &tables {
                    outln!("{}:", w);
                    for row in rows {
                        outln!("  {}", row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
                    }
                }
            }
        }
        GroupCmd::MildCheck { input, degree } => {
            let g = load_presentation(&input.file)?;
            let forms = g.initial_forms(input.truncation)?;
            let d = g.num_generators();
            let rep = strongly_free_report(&forms, g.field(), d, degree)?;
            let degrees: Vec<usize> = forms.iter().map(|f| f.degree).collect();
            debug_assert_eq!(rep.expected, expected_strongly_free_prefix(d, &degrees, degree));
            let verdict = if rep.passed { "PASS" } else { "FAIL" };
            if input.out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "verdict": verdict,
                    "degrees": degrees,
                    "prefix": rep.prefix,
                    "expected": rep.expected,
                }));
            } else {
                outln!("{} strongly free through degree {}", verdict, degree);
                outln!("quotient  {}", join(&rep.prefix));
                outln!("expected  {}", join(&rep.expected));
                if let Some(n) = (0..rep.prefix.len()).find(|&n| rep.prefix[n] as i64 != rep.expected[n]) {
                    outln!("first difference in degree {}", n);
                }
            }
            if !rep.passed {
                return Ok(Status::Fail);
            }
        }
    }
    Ok(Status::Pass)
}

fn load_table(path: &Path) -> Result<FiniteGroupTable> {
    let f = fs::File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    FiniteGroupTable::read_csv(f).with_context(|| format!("in {}", path.display()))
}

fn oracle(cmd: OracleCmd) -> Result<Status> {
    match cmd {
        OracleCmd::Jennings(a) => {
            let g = load_table(&a.table)?;
            let r = jennings_oracle(&g, a.p, a.degree)?;
            let sizes: Vec<usize> = r.subgroups.iter().map(|s| s.len()).collect();
            if a.out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "dims": r.dims,
                    "subgroups": r.subgroups,
                }));
            } else {
                outln!("dims {}", join(&r.dims));
                outln!("subgroup orders {}", join(&sizes));
            }
        }
        OracleCmd::Lazard(a) => {
            let g = load_table(&a.table)?;
            let chain = lazard_oracle(&g, a.p, a.degree)?;
            let sizes: Vec<usize> = chain.iter().map(|s| s.len()).collect();
            // dim G_(n)/G_(n+1) from the orders
            let dims: Vec<usize> = sizes.windows(2).map(|w| log_p(w[0] / w[1], a.p as usize)).collect();
            if a.out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "quotient_ranks": dims,
                    "subgroups": chain,
                }));
            } else {
                outln!("quotient ranks {}", join(&dims));
                outln!("subgroup orders {}", join(&sizes));
            }
        }
    }
    Ok(Status::Pass)
}

fn log_p(mut n: usize, p: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

fn load_recipe(text: &str) -> Result<EtRecipe> {
    let owned;
    let src = match text.strip_prefix('@') {
        Some(path) => {
            owned = read(Path::new(path))?;
            owned.as_str()
        }
        None => text,
    };
    EtRecipe::parse(src).context("in --recipe")
}

fn et(cmd: EtCmd) -> Result<Status> {
    match cmd {
        EtCmd::Build { recipe, p, out } => {
            let r = load_recipe(&recipe)?;
            let h = build_cohomology(&r, p)?;
            let g = match build_group_side(&r, p) {
                Ok(g) => Some(g),
                Err(koszul::Error::Unsupported(_)) => None,
                Err(e) => return Err(e.into()),
            };
            if out.json {
                print_json(json!({
                    "schema_version": SCHEMA_VERSION,
                    "recipe": r.to_string(),
                    "p": p,
                    "cohomology": koszul::quad::AlgebraFile::from_algebra(&h),
                    "group_side": g.as_ref().map(koszul::quad::AlgebraFile::from_algebra),
                }));
            } else {
                outln!("cohomology of {}:", r);
                outln!("{}", h.to_json());
                match &g {
                    Some(g) => {
                        outln!("graded group algebra:");
                        outln!("{}", g.to_json());
                    }
                    None => outln!("graded group algebra: not built for this recipe"),
                }
            }
            Ok(Status::Pass)
        }
        EtCmd::Verify { theorem, recipe, p, degree, budget, seed, emit_certificate, out } => {
            let th = Theorem::parse(&theorem)
                .with_context(|| format!("unknown theorem '{}', expected A, B, C or D", theorem))?;
            let r = load_recipe(&recipe)?;
            let opts = VerifyOptions {
                degree,
                search_budget: budget,
                seed,
                ..VerifyOptions::default()
            };
            let rep = verify_theorem(&r, th, p, &opts)?;
            if out.json {
                outln!("{}", rep.to_json());
            } else {
                out!("{}", rep.to_text(emit_certificate));
            }
            Ok(if rep.passed() { Status::Pass } else { Status::Fail })
        }
    }
}
