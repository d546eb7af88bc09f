use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use divpredict_core::{
    aggregate, audit_consistency, diff_grid, evaluate, fixtures, grid, parse_class_totals, parse_records,
    parse_reference_grid, parse_tables, prediction_grid, render_grid, ClassTotalsPolicy, GridFormat,
    MarginalTableSet, NBModel, OutcomePolicy, Profile, SmoothingConfig,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNDEFINED: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_FIT: u8 = 5;

#[derive(Parser)]
#[command(name = "divpredict", version, about = "Categorical naive Bayes division predictor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model from a table file or a record file.
    Fit(FitArgs),
    /// Posterior for one (possibly partial) profile.
    Predict(PredictArgs),
    /// Prediction grid over every full profile.
    Grid(GridArgs),
    /// Check that the attribute tables agree on class and grand totals.
    Audit(AuditArgs),
    /// Score a model on a labeled record file.
    Eval(EvalArgs),
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, conflicts_with_all = ["records", "replicate_paper"], required_unless_present_any = ["records", "replicate_paper"])]
    tables: Option<PathBuf>,
    #[arg(long, conflicts_with = "replicate_paper")]
    records: Option<PathBuf>,
    /// per-attribute[:PRIOR_ATTR] | reference:ATTR | explicit:FILE
    #[arg(long, conflicts_with = "replicate_paper")]
    policy: Option<String>,
    #[arg(long, default_value = "0", conflicts_with = "replicate_paper")]
    alpha: String,
    /// Bundled training counts, reference:stream, alpha 0.
    #[arg(long)]
    replicate_paper: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// ATTR=VALUE; repeat for several attributes.
    #[arg(long = "set", value_name = "ATTR=VALUE")]
    assignments: Vec<String>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, required_unless_present = "replicate_paper", conflicts_with = "replicate_paper")]
    model: Option<PathBuf>,
    /// Use the bundled replication model and diff against the bundled published grid.
    #[arg(long)]
    replicate_paper: bool,
    /// text | csv | json-like
    #[arg(long, default_value = "text")]
    format: String,
    /// Comma-separated performer classes.
    #[arg(long, default_value = "I,II")]
    performer: String,
    #[arg(long, default_value = "FAIL")]
    risk_class: String,
    #[arg(long, default_value_t = 0.25)]
    risk_threshold: f64,
    #[arg(long)]
    diff: Option<PathBuf>,
    #[arg(long, default_value_t = grid::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    tables: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    records: PathBuf,
}

/// A failure carrying its exit code and `error:<category>:` prefix.
struct Failure {
    code: u8,
    category: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, category: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            category,
            message: message.into(),
        }
    }
}

impl From<divpredict_core::Error> for Failure {
    fn from(e: divpredict_core::Error) -> Self {
        use divpredict_core::Error;
        let code = match e {
            Error::Parse { .. } | Error::Input(_) => EXIT_INPUT,
            Error::Config(_) => EXIT_USAGE,
            Error::Fit { .. } => EXIT_FIT,
        };
        Failure::new(code, e.category(), e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, "io", format!("{}: {e}", path.display())))
}

fn with_path(path: &Path) -> impl FnOnce(divpredict_core::Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn load_model(path: &Path) -> Result<NBModel, Failure> {
    NBModel::from_json(&read(path)?).map_err(with_path(path))
}

fn parse_policy(spec: Option<&str>, tables: &MarginalTableSet) -> Result<ClassTotalsPolicy, Failure> {
    let usage = |m: String| Failure::new(EXIT_USAGE, "usage", m);
    let Some(spec) = spec else {
        let first = tables.schema().attributes[0].name.clone();
        return Ok(ClassTotalsPolicy::per_attribute(first));
    };
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let policy = match (kind, arg) {
        ("per-attribute", None) => ClassTotalsPolicy::per_attribute(tables.schema().attributes[0].name.clone()),
        ("per-attribute", Some(a)) => ClassTotalsPolicy::per_attribute(a),
        ("reference", Some(a)) => ClassTotalsPolicy::reference(a),
        ("explicit", Some(file)) => {
            let path = Path::new(file);
            parse_class_totals(read(path)?.as_bytes(), tables.classes()).map_err(with_path(path))?
        }
        _ => return Err(usage(format!("invalid --policy '{spec}'"))),
    };
    policy
        .validate(tables.schema(), tables.classes())
        .map_err(|e| usage(e.to_string()))?;
    Ok(policy)
}

fn probability_lines(out: &mut String, labels: &[String], values: &[f64]) {
    for (c, p) in labels.iter().zip(values) {
        let _ = writeln!(out, "{c}\t{}", grid::format_probability(*p));
    }
}

fn run_fit(args: FitArgs) -> Outcome {
    let (tables, policy, smoothing) = if args.replicate_paper {
        (fixtures::table1(), fixtures::replication_policy(), SmoothingConfig::none())
    } else {
        let tables = match (&args.tables, &args.records) {
            (Some(path), _) => parse_tables(read(path)?.as_bytes()).map_err(with_path(path))?,
            (None, Some(path)) => aggregate(&parse_records(read(path)?.as_bytes(), None).map_err(with_path(path))?),
            (None, None) => unreachable!("clap requires an input"),
        };
        let policy = parse_policy(args.policy.as_deref(), &tables)?;
        let smoothing: SmoothingConfig = args
            .alpha
            .parse()
            .map_err(|e: divpredict_core::Error| Failure::new(EXIT_USAGE, "usage", e.to_string()))?;
        (tables, policy, smoothing)
    };
    let model = NBModel::fit(&tables, &policy, smoothing)?;
    fs::write(&args.out, model.to_json())
        .map_err(|e| Failure::new(EXIT_INPUT, "io", format!("{}: {e}", args.out.display())))?;

    let mut out = String::new();
    let _ = writeln!(out, "policy\t{policy}");
    let _ = writeln!(out, "alpha\t{smoothing}");
    let _ = writeln!(out, "grand_total\t{}", model.class_totals().grand_total);
    let _ = writeln!(out, "prior");
    probability_lines(&mut out, &model.classes().labels, model.priors());
    Ok(out)
}

fn run_predict(args: PredictArgs) -> Outcome {
    let model = load_model(&args.model)?;
    let mut profile = Profile::new();
    for a in &args.assignments {
        let (attr, value) = a
            .split_once('=')
            .ok_or_else(|| Failure::new(EXIT_USAGE, "usage", format!("--set expects ATTR=VALUE, got '{a}'")))?;
        profile.set(attr.trim(), value.trim());
    }
    let post = model.posterior(&profile)?;
    let mut out = String::from("posterior\n");
    probability_lines(&mut out, &model.classes().labels, &post.per_class);
    if !post.scores_defined {
        print!("{out}");
        return Err(Failure::new(
            EXIT_UNDEFINED,
            "undefined",
            format!("every class has zero probability for {profile}"),
        ));
    }
    let _ = writeln!(out, "predicted\t{}\t{}", post.predicted, grid::format_probability(post.probability()));
    let _ = writeln!(out, "tie\t{}", post.tie);
    Ok(out)
}

fn run_grid(args: GridArgs) -> Outcome {
    let model = match &args.model {
        Some(path) => load_model(path)?,
        None => fixtures::replication_model(),
    };
    let format: GridFormat = args.format.parse()?;
    let outcome = OutcomePolicy {
        performer_classes: args.performer.split(',').map(|s| s.trim().to_string()).collect(),
        risk_threshold: args.risk_threshold,
        risk_class: args.risk_class.clone(),
    };
    let computed = prediction_grid(&model, &outcome)?;
    let mut out = render_grid(&computed, format);

    let reference = match (&args.diff, args.replicate_paper) {
        (Some(path), _) => Some(parse_reference_grid(read(path)?.as_bytes()).map_err(with_path(path))?),
        (None, true) => Some(fixtures::table2()),
        (None, false) => None,
    };
    if let Some(reference) = reference {
        let discrepancies = diff_grid(&computed, &reference, args.tolerance)?;
        let _ = writeln!(out, "\ndiscrepancies\t{}", discrepancies.len());
        for d in &discrepancies {
            let _ = writeln!(out, "{d}");
        }
    }
    Ok(out)
}

fn run_audit(args: AuditArgs) -> Outcome {
    let tables = parse_tables(read(&args.tables)?.as_bytes()).map_err(with_path(&args.tables))?;
    let report = audit_consistency(&tables);
    if report.is_consistent {
        Ok(report.to_string())
    } else {
        print!("{report}");
        Err(Failure::new(
            EXIT_INCONSISTENT,
            "audit",
            format!(
                "inconsistent classes [{}], inconsistent grand totals [{}]",
                report.inconsistent_classes.join(","),
                report.inconsistent_grand.join(",")
            ),
        ))
    }
}

fn run_eval(args: EvalArgs) -> Outcome {
    let model = load_model(&args.model)?;
    let text = read(&args.records)?;
    let dataset = parse_records(text.as_bytes(), None).map_err(with_path(&args.records))?;
    Ok(evaluate(&model, &dataset)?.to_json())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let mut lines = text.lines();
            let first = lines.next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error:usage: {first}");
            for line in lines {
                eprintln!("{line}");
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match cli.command {
        Command::Fit(a) => run_fit(a),
        Command::Predict(a) => run_predict(a),
        Command::Grid(a) => run_grid(a),
        Command::Audit(a) => run_audit(a),
        Command::Eval(a) => run_eval(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error:{}: {}", f.category, f.message);
            ExitCode::from(f.code)
        }
    }
}
