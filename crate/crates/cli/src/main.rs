use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exthall::hall::{euler, parse_rational, rational_string};
use exthall::verify::run_suite;
use exthall::{
    Backend, Budget, HallAlgebra, HallElement, HallError, ProductKind, SuiteConfig, SuiteName, UniverseBound,
    VerificationReport, DEFAULT_BUDGET,
};
use serde_json::{json, Value};

mod expr;

#[derive(Parser)]
#[command(name = "exthall", version, about = "Exact Hall algebras of small extriangulated categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the isomorphism classes of a universe with |End| and |Aut|.
    List {
        #[command(flatten)]
        common: Common,
        /// Backend spec, as an alternative to --backend.
        spec: Option<String>,
    },
    /// Structure constants c_{XY}^L for one pair.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long = "type", default_value = "F")]
        kind: ProductKind,
        x: String,
        y: String,
        /// Constant cache read before and written after the run.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Evaluate a product expression such as `u[k]*(u[k]+2*u[0])`.
    Mul {
        #[command(flatten)]
        common: Common,
        #[arg(long = "type", default_value = "F")]
        kind: ProductKind,
        expr: String,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// The Euler form <X,Y>.
    Euler {
        #[command(flatten)]
        common: Common,
        x: String,
        y: String,
    },
    /// Run identity suites and emit their reports.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suite names, or `all` for every suite the backend supports.
        #[arg(long, default_value = "main2")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Witnesses drawn by the sampling suites.
        #[arg(long, default_value_t = 24)]
        samples: usize,
        /// Record wall time (reports are then no longer byte-stable).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// `quiver:A2@2`, `quiver:file=path@3`, `graded:@2,window=0..2`, `interval:@2,window=0..1`.
    #[arg(long)]
    backend: Option<String>,
    /// Total dimension cap (quiver); per-degree cap on graded backends unless --per-degree is given.
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    per_degree: Option<usize>,
    /// Largest brute-force enumeration allowed.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn backend(&self) -> exthall::Result<Backend> {
        let spec = self
            .backend
            .as_deref()
            .ok_or_else(|| HallError::Parse("missing --backend".into()))?;
        Backend::from_spec_str(spec, Budget::new(self.budget))
    }

    fn bound(&self, b: &Backend) -> UniverseBound {
        if self.max_dim.is_none() && self.per_degree.is_none() {
            return b.default_bound();
        }
        UniverseBound {
            max_dim: self.max_dim,
            per_degree: self.per_degree,
        }
    }

    fn emit(&self, text: String) -> exthall::Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| HallError::Invalid(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn list(common: &Common) -> exthall::Result<bool> {
    let b = common.backend()?;
    let m = b.model();
    let classes = m.classes_up_to(&common.bound(&b))?;
    let mut rows = Vec::new();
    let mut dims = Vec::new();
    for c in &classes {
        let g = m.grothendieck(c)?;
        rows.push(vec![
            c.name().to_string(),
            g.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
            m.end_order(c)?.to_string(),
            m.aut_order(c)?.to_string(),
            c.label().to_string(),
        ]);
        dims.push(g);
    }
    let text = match common.format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .zip(&dims)
                .map(|(r, d)| json!({"name": r[0], "dims": d, "end": r[2], "aut": r[3], "label": r[4]}))
                .collect(),
        )),
        Format::Csv => csv(&["name", "dims", "end", "aut", "label"], &rows),
    };
    common.emit(text)?;
    Ok(true)
}

fn with_cache<T>(
    alg: &HallAlgebra,
    cache: &Option<PathBuf>,
    run: impl FnOnce() -> exthall::Result<T>,
) -> exthall::Result<T> {
    if let Some(p) = cache {
        if p.exists() {
            alg.load_cache(p)?;
        }
    }
    let out = run()?;
    if let Some(p) = cache {
        alg.save_cache(p)?;
    }
    Ok(out)
}

fn constants(common: &Common, kind: ProductKind, x: &str, y: &str, cache: &Option<PathBuf>) -> exthall::Result<bool> {
    let b = common.backend()?;
    let m = b.model();
    let (x, y) = (m.parse_class(x)?, m.parse_class(y)?);
    let alg = HallAlgebra::new(m);
    let s = with_cache(&alg, cache, || alg.structure(kind, &x, &y))?;
    let rows: Vec<Vec<String>> = s
        .iter()
        .map(|(l, c)| vec![x.name().to_string(), y.name().to_string(), l.name().to_string(), rational_string(c)])
        .collect();
    let text = match common.format {
        Format::Json => pretty(&json!({
            "backend": m.backend_id(),
            "type": kind.to_string(),
            "x": x.name(),
            "y": y.name(),
            "constants": rows.iter().map(|r| json!({"l": r[2], "value": r[3]})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(&["x", "y", "l", "value"], &rows),
    };
    common.emit(text)?;
    Ok(true)
}

fn mul(common: &Common, kind: ProductKind, text: &str, cache: &Option<PathBuf>) -> exthall::Result<bool> {
    let b = common.backend()?;
    let m = b.model();
    let parsed = expr::parse(text)?;
    let alg = HallAlgebra::new(m);
    let value = with_cache(&alg, cache, || eval(&alg, kind, &parsed))?;
    let out = match common.format {
        Format::Json => pretty(&value.to_json()),
        Format::Csv => csv(
            &["l", "value"],
            &value
                .terms()
                .map(|(l, c)| vec![l.name().to_string(), rational_string(c)])
                .collect::<Vec<_>>(),
        ),
    };
    common.emit(out)?;
    Ok(true)
}

fn eval(alg: &HallAlgebra, kind: ProductKind, e: &expr::Expr) -> exthall::Result<HallElement> {
    use expr::Expr;
    Ok(match e {
        Expr::Basis(name) => HallElement::basis(&alg.model().parse_class(name)?),
        Expr::Scalar(s) => HallElement::basis(&alg.model().zero()).scale(&parse_rational(s)?),
        Expr::Sum(a, b) => eval(alg, kind, a)?.add(&eval(alg, kind, b)?),
        Expr::Product(a, b) => alg.mul(kind, &eval(alg, kind, a)?, &eval(alg, kind, b)?)?,
    })
}

fn euler_cmd(common: &Common, x: &str, y: &str) -> exthall::Result<bool> {
    let b = common.backend()?;
    let m = b.model();
    let (x, y) = (m.parse_class(x)?, m.parse_class(y)?);
    let e = euler(m, &x, &y)?;
    let text = match common.format {
        Format::Json => pretty(&json!({"x": x.name(), "y": y.name(), "euler": e})),
        Format::Csv => csv(&["x", "y", "euler"], &[vec![x.name().into(), y.name().into(), e.to_string()]]),
    };
    common.emit(text)?;
    Ok(true)
}

fn verify(common: &Common, suites: &str, seed: u64, samples: usize, timing: bool) -> exthall::Result<bool> {
    let b = common.backend()?;
    let names: Vec<SuiteName> = if suites == "all" {
        SuiteName::ALL.to_vec()
    } else {
        suites.split(',').map(|s| s.trim().parse()).collect::<exthall::Result<_>>()?
    };
    let cfg = SuiteConfig {
        bound: common.bound(&b),
        seed,
        samples,
        timing,
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &s in &names {
        match run_suite(&b, s, &cfg) {
            Ok(r) => reports.push(r),
            // `all` means every suite this backend can run.
            Err(HallError::Capability(why)) if suites == "all" => eprintln!("{s} skipped: {why}"),
            Err(e) => return Err(e),
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    let text = match common.format {
        Format::Json if reports.len() == 1 => {
            let mut s = reports[0].to_json();
            s.push('\n');
            s
        }
        Format::Json => pretty(&serde_json::to_value(&reports).expect("reports serialise")),
        Format::Csv => {
            let mut out = String::from("suite,backend,universe,cases,failures\n");
            for r in &reports {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.suite,
                    csv_field(&r.backend),
                    csv_field(&r.universe),
                    r.cases,
                    r.failures.len()
                ));
            }
            for r in &reports {
                if !r.failures.is_empty() {
                    out.push_str(&r.to_csv());
                }
            }
            out
        }
    };
    common.emit(text)?;
    for r in &reports {
        eprintln!(
            "{} {}: {} cases, {} failures",
            r.suite,
            if r.passed() { "PASS" } else { "FAIL" },
            r.cases,
            r.failures.len()
        );
    }
    Ok(passed)
}

fn exit_code(e: &HallError) -> u8 {
    match e {
        HallError::IdentityMismatch { .. } => 1,
        HallError::Budget { .. } => 2,
        HallError::Parse(_) => 3,
        HallError::Capability(_) | HallError::Invalid(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::List { common, spec } => match (&common.backend, spec) {
            (Some(_), Some(_)) => Err(HallError::Parse("backend given twice".into())),
            (None, Some(s)) => list(&Common {
                backend: Some(s.clone()),
                ..common.clone()
            }),
            _ => list(common),
        },
        Command::Constants {
            common,
            kind,
            x,
            y,
            cache,
        } => constants(common, *kind, x, y, cache),
        Command::Mul {
            common,
            kind,
            expr,
            cache,
        } => mul(common, *kind, expr, cache),
        Command::Euler { common, x, y } => euler_cmd(common, x, y),
        Command::Verify {
            common,
            suite,
            seed,
            samples,
            timing,
        } => verify(common, suite, *seed, *samples, *timing),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
