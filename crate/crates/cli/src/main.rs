use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fano_core::bundle::{chern_of_complex, ComplexTerm};
use fano_core::cotangent::cotangent_cohomology;
use fano_core::line_cohomology::{line_cohomology, line_properties};
use fano_core::moduli::{classify_charge, enumerate_charges, ChargeReport};
use fano_core::monad::{build_monad, epq_table_numeric, epq_table_symbolic, verify_monad, MonadSpec};
use fano_core::serre::{recipe_charge, Variant};
use fano_core::stability::{check_serre_stability, check_split_slopes, StabilityVerdict, Verdict};
use fano_core::{parse_expr, selftest, Divisor, Error, Threefold};

const EXIT_INVALID: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "fano", version, about = "Chow rings, cohomology and instanton charges on F0 and F1")]
struct Cli {
    /// Threefold: f0 = P1 x P2, f1 = blow-up of P3 along a line.
    #[arg(long, short, global = true, value_enum)]
    model: Option<Model>,

    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    #[value(alias = "F0", alias = "0")]
    F0,
    #[value(alias = "F1", alias = "1")]
    F1,
}

impl From<Model> for Threefold {
    fn from(m: Model) -> Self {
        match m {
            Model::F0 => Threefold::F0,
            Model::F1 => Threefold::F1,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Instanton,
    Earnest,
    Segre,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Instanton => Variant::Instanton,
            VariantArg::Earnest => Variant::Earnest,
            VariantArg::Segre => Variant::Segre,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Chow ring arithmetic.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Cohomology of O(a xi + b f).
    #[command(allow_negative_numbers = true)]
    Cohom { a: i32, b: i32 },
    /// Cohomology of the twisted relative cotangent bundle.
    #[command(allow_negative_numbers = true)]
    Cotangent { a: i32, b: i32 },
    /// Chern data of a complex, given as JSON or `@file`.
    Chern {
        #[arg(long)]
        complex: String,
    },
    /// Monads with instanton cohomology.
    #[command(subcommand)]
    Monad(MonadCmd),
    /// The Serre construction for a charge.
    #[command(allow_negative_numbers = true)]
    Serre {
        #[arg(value_enum)]
        variant: VariantArg,
        #[command(flatten)]
        charge: Charge,
    },
    /// Stability of a constructed bundle, or of a split sum with `--summand`.
    #[command(allow_negative_numbers = true)]
    Stability {
        #[arg(value_enum, required_unless_present = "summand")]
        variant: Option<VariantArg>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<i32>,
        #[arg(long, default_value_t = fano_core::stability::DEFAULT_BOUND)]
        bound: u32,
        /// Line bundle summand `a,b`; repeat for each summand.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "variant")]
        summand: Vec<String>,
    },
    /// Classify charges up to a degree bound.
    Charges {
        #[arg(long, default_value_t = 30)]
        max_degree: u32,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Run the built-in reference checks.
    Selftest {
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    /// Evaluate an expression in xi, f, h (and E on F1).
    Eval { expr: String },
}

#[derive(Args, Clone, Copy)]
struct Charge {
    #[arg(long, allow_hyphen_values = true)]
    alpha: i32,
    #[arg(long, allow_hyphen_values = true)]
    beta: i32,
}

#[derive(Args, Clone, Copy)]
struct SpecArgs {
    #[command(flatten)]
    charge: Charge,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    gamma: i32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    delta: i32,
}

#[derive(Subcommand)]
enum MonadCmd {
    Build(SpecArgs),
    Verify(SpecArgs),
    Table {
        /// Print the table in terms of the parameters instead of numbers.
        #[arg(long, conflicts_with_all = ["alpha", "beta"])]
        symbolic: bool,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "symbolic")]
        alpha: Option<i32>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "symbolic")]
        beta: Option<i32>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        gamma: i32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        delta: i32,
    },
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::NonIntegral { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Output {
    command: &'static str,
    model: Option<Threefold>,
    result: Value,
    notes: Vec<String>,
    text: String,
    code: u8,
}

impl Output {
    fn new(command: &'static str, model: Option<Threefold>, result: impl Serialize, text: String) -> Result<Self, Failure> {
        let result = serde_json::to_value(result).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(Output {
            command,
            model,
            result,
            notes: Vec::new(),
            text,
            code: 0,
        })
    }

    fn notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }
}

fn model_or_default(m: Option<Model>) -> Threefold {
    m.map(Into::into).unwrap_or(Threefold::F1)
}

fn variant_model(variant: Variant, m: Option<Model>) -> Result<Threefold, Failure> {
    match m.map(Threefold::from) {
        Some(found) if found != variant.model() => Err(Error::WrongThreefold {
            variant: variant.to_string(),
            expected: variant.model(),
            found,
        }
        .into()),
        _ => Ok(variant.model()),
    }
}

fn spec(model: Threefold, s: SpecArgs) -> MonadSpec {
    MonadSpec::new(model, s.charge.alpha, s.charge.beta, s.gamma, s.delta)
}

fn read_complex(arg: &str) -> Result<Vec<ComplexTerm>, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("bad complex: {e}")))
}

fn parse_summand(s: &str) -> Result<Divisor, Failure> {
    let bad = || Failure::Invalid(format!("summand `{s}` is not of the form a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(Divisor::new(
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn render_stability(r: &StabilityVerdict) -> String {
    let mut out = format!("{:?}", r.verdict);
    if let Some(b) = r.bound {
        out.push_str(&format!(" (window bound {b})"));
    }
    for w in r.offending() {
        out.push_str(&format!("\n  {}", serde_json::to_string(w).unwrap_or_default()));
    }
    out
}

#[derive(Serialize)]
struct CsvRow {
    model: Threefold,
    alpha: i32,
    beta: i32,
    degree: i64,
    monad_necessary_ok: bool,
    instanton_exists: bool,
    earnest_exists: bool,
    in_movable_cone: bool,
    ext1_dim: Option<i64>,
}

impl From<&ChargeReport> for CsvRow {
    fn from(r: &ChargeReport) -> Self {
        CsvRow {
            model: r.model,
            alpha: r.alpha,
            beta: r.beta,
            degree: r.degree,
            monad_necessary_ok: r.monad_necessary_ok,
            instanton_exists: r.instanton_exists,
            earnest_exists: r.earnest_exists,
            in_movable_cone: r.in_movable_cone,
            ext1_dim: r.ext1_dim,
        }
    }
}

fn charges_csv(reports: &[ChargeReport]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow::from(r)).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let m = cli.model;
    match &cli.command {
        Command::Ring(RingCmd::Eval { expr }) => {
            let model = model_or_default(m);
            let c = parse_expr(expr, model)?;
            let pretty = c.pretty();
            let result = json!({ "expr": expr, "class": c, "pretty": pretty, "degree": c.degree().to_string() });
            Output::new("ring eval", Some(model), result, pretty)
        }
        Command::Cohom { a, b } => {
            let model = model_or_default(m);
            let c = line_cohomology(model, *a, *b);
            let p = line_properties(model, *a, *b);
            let text = format!(
                "h^0 = {}\nh^1 = {}\nh^2 = {}\nh^3 = {}\nchi = {}\neffective: {}\nglobally generated: {}\nsmooth integral member: {}",
                c.h[0], c.h[1], c.h[2], c.h[3], c.chi, p.effective, p.globally_generated, p.has_smooth_integral_member
            );
            let result = json!({ "divisor": Divisor::new(*a, *b), "cohomology": c, "properties": p });
            let notes = match model {
                Threefold::F0 => vec!["smooth member: global generation plus Bertini".to_string()],
                Threefold::F1 => vec![],
            };
            Ok(Output::new("cohom", Some(model), result, text)?.notes(notes))
        }
        Command::Cotangent { a, b } => {
            let model = model_or_default(m);
            let c = cotangent_cohomology(model, *a, *b)?;
            let mut text: String = (0..4).map(|i| format!("h^{i} = {}\n", c.h[i])).collect();
            text.push_str(&format!("chi = {}", c.chi));
            let notes = if c.is_exact() {
                vec![]
            } else {
                vec!["some groups are only bounded: the exact sequences leave several values feasible".to_string()]
            };
            Ok(Output::new("cotangent", Some(model), c, text)?.notes(notes))
        }
        Command::Chern { complex } => {
            let model = model_or_default(m);
            let terms = read_complex(complex)?;
            let chern = chern_of_complex(model, &terms);
            let text = chern.to_string();
            Output::new("chern", Some(model), chern, text)
        }
        Command::Monad(cmd) => {
            let model = model_or_default(m);
            match cmd {
                MonadCmd::Build(s) => {
                    let t = build_monad(spec(model, *s))?;
                    let text = t.to_string();
                    Output::new("monad build", Some(model), t, text)
                }
                MonadCmd::Verify(s) => {
                    let v = verify_monad(&build_monad(spec(model, *s))?);
                    let text = if v.ok {
                        format!("ok: {}", v.chern)
                    } else {
                        format!("FAILED\n{}", v.failures.join("\n"))
                    };
                    let mut out = Output::new("monad verify", Some(model), &v, text)?;
                    if !v.ok {
                        out.code = EXIT_INTERNAL;
                    }
                    Ok(out)
                }
                MonadCmd::Table { symbolic: true, .. } => {
                    let t = epq_table_symbolic(model);
                    let text = t.render();
                    let strings = t.entries.map(|col| col.map(|e| e.to_string()));
                    let result = json!({ "entries": t.entries, "rendered": strings });
                    Output::new("monad table", Some(model), result, text)
                }
                MonadCmd::Table {
                    alpha: Some(alpha),
                    beta: Some(beta),
                    gamma,
                    delta,
                    ..
                } => {
                    let t = epq_table_numeric(MonadSpec::new(model, *alpha, *beta, *gamma, *delta))?;
                    let text = t.render();
                    Output::new("monad table", Some(model), t, text)
                }
                MonadCmd::Table { .. } => Err(Failure::Invalid("give --alpha and --beta, or --symbolic".into())),
            }
        }
        Command::Serre { variant, charge } => {
            let v = Variant::from(*variant);
            let model = variant_model(v, m)?;
            let r = recipe_charge(v, charge.alpha, charge.beta)?;
            let text = format!(
                "Z = {}\nc(F) = {}\nc(E) = {}\ndet-compatible: {}",
                r.z, r.chern_f, r.chern_e, r.det_compatible
            );
            Output::new("serre", Some(model), r, text)
        }
        Command::Stability {
            variant,
            alpha,
            beta,
            bound,
            summand,
        } => {
            let (model, r) = match variant {
                Some(v) => {
                    let v = Variant::from(*v);
                    let model = variant_model(v, m)?;
                    let (Some(alpha), Some(beta)) = (alpha, beta) else {
                        return Err(Failure::Invalid("--alpha and --beta are required".into()));
                    };
                    (model, check_serre_stability(v, *alpha, *beta, *bound)?)
                }
                None => {
                    let model = model_or_default(m);
                    let ds = summand.iter().map(|s| parse_summand(s)).collect::<Result<Vec<_>, _>>()?;
                    (model, check_split_slopes(model, &ds)?)
                }
            };
            let text = render_stability(&r);
            let mut out = Output::new("stability", Some(model), &r, text)?;
            if r.verdict == Verdict::Inconclusive {
                out.code = EXIT_INCONCLUSIVE;
            }
            Ok(out)
        }
        Command::Charges { max_degree, csv } => {
            let models: Vec<Threefold> = match m {
                Some(m) => vec![m.into()],
                None => Threefold::ALL.to_vec(),
            };
            let reports: Vec<ChargeReport> = models.iter().flat_map(|&md| enumerate_charges(md, *max_degree)).collect();
            let text = if *csv {
                charges_csv(&reports)?
            } else {
                let mut t = String::from("model alpha beta degree exists earnest ext1");
                for r in reports.iter().filter(|r| r.instanton_exists) {
                    let ext = r.ext1_dim.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                    t.push_str(&format!(
                        "\n{} {} {} {} {} {} {}",
                        r.model, r.alpha, r.beta, r.degree, r.instanton_exists, r.earnest_exists, ext
                    ));
                }
                t
            };
            let notes = models.iter().flat_map(|&md| classify_charge(md, 0, 0).notes).collect();
            Ok(Output::new("charges", m.map(Into::into), reports, text)?.notes(notes))
        }
        Command::Selftest { criterion } => {
            let results = match criterion {
                Some(id) => vec![selftest::run(*id).ok_or_else(|| Failure::Invalid(format!("no criterion {id}")))?],
                None => selftest::run_all(),
            };
            let text = results
                .iter()
                .map(|r| match &r.failure {
                    None => format!("[PASS] {}. {} ({} cases)", r.id, r.name, r.cases),
                    Some(why) => format!("[FAIL] {}. {}: {why}", r.id, r.name),
                })
                .collect::<Vec<_>>()
                .join("\n");
            let failed = results.iter().any(|r| !r.passed);
            let mut out = Output::new("selftest", None, &results, text)?;
            if failed {
                out.code = EXIT_INTERNAL;
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let rendered = if cli.json {
        let env = json!({
            "command": out.command,
            "model": out.model,
            "result": out.result,
            "notes": out.notes,
        });
        serde_json::to_string_pretty(&env).expect("JSON values always serialize")
    } else {
        out.text
    };
    let mut stdout = io::stdout().lock();
    if writeln!(stdout, "{}", rendered.trim_end()).is_err() {
        return ExitCode::from(EXIT_INTERNAL);
    }
    ExitCode::from(out.code)
}
