//! Command-line front-end.
//!
//! Exit status: 0 when every requested route agrees, 1 for input errors and 2
//! when two routes (or the two K-theory components, where they must match)
//! disagree.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::exprparse::{format_poly, parse_class, parse_partition};
use crate::ktheory::{k_localize_pushforward, LaurentPoly};
use crate::pushforward::{
    component_report, cross_validate, localize_pushforward, schur_pushforward_closed, CharClass, Component,
    ComponentReport, PushforwardReport, Route, SchurT2Expansion,
};
use crate::symfun::{decompose_parity, Partition};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DISAGREE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ogpush",
    version,
    about = "Exact equivariant push-forwards from OG(n,2n) and its components"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Push a characteristic class forward along the selected routes.
    Push(PushArgs),
    /// Run every applicable route on all three components.
    Validate(ValidateArgs),
    /// Tabulate oracle and closed-form Schur push-forwards.
    Table(TableArgs),
    /// K-theoretic push-forward of a Schur functor.
    Ktheory(KtheoryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KComponent {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Args)]
pub struct ClassInput {
    /// Class expression, e.g. "s[2,1]" or "p2 + 2*e2".
    #[arg(long, conflicts_with = "partition", required_unless_present = "partition")]
    pub class: Option<String>,
    /// Schur class given by a partition, e.g. "2,1".
    #[arg(long)]
    pub partition: Option<String>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Rank n of OG(n,2n).
    #[arg(long)]
    pub n: usize,
    /// Largest n accepted without complaint.
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct PushArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "plus")]
    pub component: Component,
    #[command(flatten)]
    pub input: ClassInput,
    /// Comma-separated routes; the oracle is always included.
    #[arg(long, value_delimiter = ',', default_value = "oracle,short")]
    pub routes: Vec<Route>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub input: ClassInput,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Bound on the largest part.
    #[arg(long)]
    pub bound: u32,
    #[arg(long, default_value = "plus")]
    pub component: Component,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
pub struct KtheoryArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub partition: String,
    #[arg(long, value_enum, default_value_t = KComponent::Both)]
    pub component: KComponent,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

struct Outcome {
    report: String,
    status: u8,
}

type CmdResult = Result<Outcome, String>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let ok = !e.use_stderr();
            let sink: &mut dyn Write = if ok { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if ok { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let (result, out) = match &cli.command {
        Command::Push(a) => (cmd_push(a), &a.common.out),
        Command::Validate(a) => (cmd_validate(a), &a.common.out),
        Command::Table(a) => (cmd_table(a), &a.common.out),
        Command::Ktheory(a) => (cmd_ktheory(a), &a.common.out),
    };
    match result {
        Ok(outcome) => {
            let written = match out {
                Some(path) => std::fs::write(path, &outcome.report).map_err(|e| e.to_string()),
                None => stdout.write_all(outcome.report.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_INPUT;
            }
            if outcome.status == EXIT_DISAGREE {
                let _ = writeln!(stderr, "error: results disagree");
            }
            outcome.status
        }
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn agreement_status(agreement: bool) -> u8 {
    if agreement {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    }
}

fn check_rank(c: &Common) -> Result<(), String> {
    if c.n == 0 {
        return Err("n must be at least 1".into());
    }
    if c.n > c.max_n {
        return Err(format!(
            "n = {} exceeds the safety bound {} (raise it with --max-n)",
            c.n, c.max_n
        ));
    }
    Ok(())
}

fn read_class(input: &ClassInput, n: usize) -> Result<CharClass, String> {
    match (&input.class, &input.partition) {
        (Some(text), _) => parse_class(text, n).map_err(|e| e.to_string()),
        (None, Some(text)) => Ok(CharClass::schur(&parse_partition(text, n).map_err(|e| e.to_string())?)),
        (None, None) => Err("either --class or --partition is required".into()),
    }
}

fn schur_t2_json(exp: &Option<SchurT2Expansion>) -> Value {
    let Some(exp) = exp else { return Value::Null };
    let mut obj: Map<String, Value> = exp
        .plain
        .iter()
        .map(|(mu, c)| (mu.to_string(), Value::String(c.to_string())))
        .collect();
    let odd: Map<String, Value> = exp
        .with_t_factor
        .iter()
        .map(|(nu, c)| (nu.to_string(), Value::String(c.to_string())))
        .collect();
    obj.insert("with_t_factor".into(), Value::Object(odd));
    Value::Object(obj)
}

fn schur_t2_text(exp: &Option<SchurT2Expansion>, n: usize) -> String {
    let Some(exp) = exp else { return "n/a".into() };
    let mut parts: Vec<String> = exp.plain.iter().map(|(mu, c)| format!("{c}*s{mu}(t^2)")).collect();
    let prod: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    parts.extend(
        exp.with_t_factor
            .iter()
            .map(|(nu, c)| format!("{c}*{}*s{nu}(t^2)", prod.join("*"))),
    );
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn component_json(n: usize, class: &CharClass, r: &ComponentReport) -> Value {
    let routes: Map<String, Value> = r
        .routes
        .iter()
        .map(|(route, p)| (route.name().to_string(), Value::String(format_poly(p))))
        .collect();
    let mut obj = json!({
        "n": n,
        "component": r.component.name(),
        "class": format_poly(class.poly()),
        "routes": routes,
        "agreement": r.agreement,
        "schur_t2": schur_t2_json(&r.schur_t2),
    });
    if !r.failures.is_empty() {
        let failures: Map<String, Value> = r
            .failures
            .iter()
            .map(|(route, e)| (route.name().to_string(), Value::String(e.clone())))
            .collect();
        obj["errors"] = Value::Object(failures);
    }
    obj
}

fn component_text(r: &ComponentReport, n: usize) -> String {
    let mut s = format!("component: {}\n", r.component);
    for (route, p) in &r.routes {
        s += &format!("  {:<7} {}\n", route.name(), format_poly(p));
    }
    for (route, e) in &r.failures {
        s += &format!("  {:<7} error: {e}\n", route.name());
    }
    s += &format!("  agreement: {}\n", r.agreement);
    s += &format!("  schur_t2: {}\n", schur_t2_text(&r.schur_t2, n));
    s
}

fn cmd_push(a: &PushArgs) -> CmdResult {
    check_rank(&a.common)?;
    let n = a.common.n;
    let class = read_class(&a.input, n)?;
    for &route in &a.routes {
        if route == Route::Dp && a.component != Component::Full {
            return Err("route dp is only available on the full space".into());
        }
        if route == Route::Closed {
            if a.component == Component::Full {
                return Err("route closed is only available on a single component".into());
            }
            if class.as_single_schur().is_none() {
                return Err("route closed needs a single Schur class".into());
            }
        }
    }
    let report = component_report(&class, a.component, &a.routes);
    let status = agreement_status(report.agreement);
    let text = match a.format {
        Format::Json => format!("{:#}\n", component_json(n, &class, &report)),
        Format::Text => format!(
            "n: {n}\nclass: {}\n{}",
            format_poly(class.poly()),
            component_text(&report, n)
        ),
    };
    Ok(Outcome { report: text, status })
}

fn validate_json(r: &PushforwardReport, class: &CharClass) -> Value {
    let comps: Vec<Value> = r.components.iter().map(|c| component_json(r.n, class, c)).collect();
    json!({
        "n": r.n,
        "class": format_poly(&r.class),
        "components": comps,
        "additivity": r.additivity,
        "agreement": r.agreement,
    })
}

fn cmd_validate(a: &ValidateArgs) -> CmdResult {
    check_rank(&a.common)?;
    let n = a.common.n;
    let class = read_class(&a.input, n)?;
    let report = cross_validate(&class);
    let status = agreement_status(report.agreement);
    let text = match a.format {
        Format::Json => format!("{:#}\n", validate_json(&report, &class)),
        Format::Text => {
            let mut s = format!("n: {n}\nclass: {}\n", format_poly(class.poly()));
            for c in &report.components {
                s += &component_text(c, n);
            }
            s += &format!("additivity: {}\nagreement: {}\n", report.additivity, report.agreement);
            s
        }
    };
    Ok(Outcome { report: text, status })
}

/// One row of the Schur push-forward table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub lambda: Partition,
    pub oracle: String,
    pub closed: String,
    pub case: &'static str,
    pub mu: Option<Partition>,
    pub matches: bool,
}

pub fn table_rows(n: usize, bound: u32, component: Component) -> Result<Vec<TableRow>, String> {
    Partition::in_box(n, bound)
        .into_iter()
        .map(|lambda| {
            let oracle = localize_pushforward(&CharClass::schur(&lambda), component).map_err(|e| e.to_string())?;
            let closed = schur_pushforward_closed(&lambda, component);
            let case = decompose_parity(&lambda);
            Ok(TableRow {
                oracle: format_poly(&oracle),
                closed: format_poly(&closed),
                case: case.tag(),
                mu: case.mu().cloned(),
                matches: oracle == closed,
                lambda,
            })
        })
        .collect()
}

fn cmd_table(a: &TableArgs) -> CmdResult {
    check_rank(&a.common)?;
    let rows = table_rows(a.common.n, a.bound, a.component)?;
    let status = agreement_status(rows.iter().all(|r| r.matches));
    let mu_text = |r: &TableRow| r.mu.as_ref().map(|m| m.to_string()).unwrap_or_default();
    let report = match a.format {
        TableFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "lambda": r.lambda.to_string(),
                        "oracle": r.oracle,
                        "closed": r.closed,
                        "case": r.case,
                        "mu": r.mu.as_ref().map(|m| m.to_string()),
                        "match": r.matches,
                    })
                })
                .collect();
            let v = json!({ "n": a.common.n, "bound": a.bound, "component": a.component.name(), "rows": rows });
            format!("{v:#}\n")
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| e.to_string();
            w.write_record(["lambda", "oracle", "closed", "case", "mu", "match"])
                .map_err(csv_err)?;
            for r in &rows {
                w.write_record([
                    r.lambda.to_string(),
                    r.oracle.clone(),
                    r.closed.clone(),
                    r.case.to_string(),
                    mu_text(r),
                    r.matches.to_string(),
                ])
                .map_err(csv_err)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?
        }
    };
    Ok(Outcome { report, status })
}

fn cmd_ktheory(a: &KtheoryArgs) -> CmdResult {
    check_rank(&a.common)?;
    let n = a.common.n;
    let lambda = parse_partition(&a.partition, n).map_err(|e| e.to_string())?;
    let last_zero = lambda.parts()[n - 1] == 0;
    let compute = |c| k_localize_pushforward(&lambda, c).map_err(|e| e.to_string());
    let want_plus = a.component != KComponent::Minus;
    let want_minus = a.component != KComponent::Plus;
    let plus: Option<LaurentPoly> = if want_plus || last_zero {
        Some(compute(Component::Plus)?)
    } else {
        None
    };
    let minus: Option<LaurentPoly> = if want_minus || last_zero {
        Some(compute(Component::Minus)?)
    } else {
        None
    };
    let equal = match (&plus, &minus) {
        (Some(p), Some(m)) => Some(p == m),
        _ => None,
    };
    let status = agreement_status(!(last_zero && equal == Some(false)));
    let shown = |want: bool, v: &Option<LaurentPoly>| if want { v.as_ref().map(|p| p.to_string()) } else { None };
    let plus_s = shown(want_plus, &plus);
    let minus_s = shown(want_minus, &minus);
    let report = match a.format {
        Format::Json => {
            let mut v = json!({ "n": n, "partition": lambda.to_string() });
            if let Some(p) = &plus_s {
                v["plus"] = Value::String(p.clone());
            }
            if let Some(m) = &minus_s {
                v["minus"] = Value::String(m.clone());
            }
            if let Some(e) = equal {
                v["equal"] = Value::Bool(e);
            }
            format!("{v:#}\n")
        }
        Format::Text => {
            let mut s = format!("n: {n}\npartition: {lambda}\n");
            if let Some(p) = &plus_s {
                s += &format!("plus: {p}\n");
            }
            if let Some(m) = &minus_s {
                s += &format!("minus: {m}\n");
            }
            if let Some(e) = equal {
                s += &format!("equal: {e}\n");
            }
            s
        }
    };
    Ok(Outcome { report, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiPoly;

    #[test]
    fn disagreement_has_its_own_status() {
        let mut report = component_report(
            &CharClass::schur(&Partition::new(&[2, 1], 2).unwrap()),
            Component::Plus,
            &[Route::Short],
        );
        assert!(report.agreement);
        report.routes.insert(Route::Long, MultiPoly::zero());
        report.agreement = false;
        assert_eq!(agreement_status(report.agreement), EXIT_DISAGREE);
        let class = CharClass::schur(&Partition::new(&[2, 1], 2).unwrap());
        let v = component_json(2, &class, &report);
        assert_eq!(v["agreement"], false);
        assert_eq!(v["routes"]["long"], "0");
        assert_ne!(EXIT_DISAGREE, EXIT_INPUT);
    }

    #[test]
    fn in_process_run() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["ogpush", "push", "--n", "2", "--partition", "2,1"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("2*t1*t2"));
        let code = run(
            ["ogpush", "push", "--n", "2", "--class", "z1"],
            &mut Vec::new(),
            &mut err,
        );
        assert_eq!(code, EXIT_INPUT);
    }
}
