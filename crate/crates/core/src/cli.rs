//! The `gf2collatz` command line.
//!
//! Exit codes: 0 success, 1 mismatch or violation, 2 usage or I/O error,
//! 3 conjecture finding. [`run`] writes to caller-supplied sinks so the whole
//! surface is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::collatz::{self, check_trace, TraceOptions, TraceRecord};
use crate::error::{Error, Result};
use crate::families::{self, FamilyId, Params, PlateauReport, PredictionRecord, Status};
use crate::par;
use crate::poly::{Format, Poly};
use crate::scanner::{self, PolyClass, ScanConfig};
use crate::tables::{self, format_sequence, TableId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "gf2collatz",
    version,
    about = "Collatz-type iteration on binary polynomials"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,

    /// Odd-term budget per trace.
    #[arg(long, global = true, default_value_t = collatz::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Write output here instead of stdout (`-` is stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Odd (and optionally even) sequence of a polynomial.
    Trace {
        /// `x^8+x^3+1`, `0b100001001` or `0x109`.
        #[arg(value_parser = Poly::parse_nonzero)]
        poly: Poly,
        #[arg(long)]
        show_even: bool,
    },
    /// Length of the odd sequence.
    Length {
        #[arg(value_parser = Poly::parse_nonzero)]
        poly: Poly,
    },
    /// Predicted vs computed lengths over a family.
    Family {
        #[arg(value_parser = str::parse::<FamilyId>)]
        family: FamilyId,
        /// `name=value`, `name=lo..hi` or `name=v1,v2,lo..hi`.
        #[arg(required = true)]
        params: Vec<String>,
        /// Constraint such as `a+b<=10` or `a<=b`; repeatable.
        #[arg(long)]
        filter: Vec<String>,
    },
    /// Regenerate a reference table (or `all`) and diff it against the fixture.
    Table { table: String },
    /// Exhaustive scan of every polynomial with degree in `D_MIN..=D_MAX`.
    Scan {
        d_min: u32,
        d_max: u32,
        #[arg(long, default_value = "all", value_parser = str::parse::<PolyClass>)]
        class: PolyClass,
        /// Largest degree accepted.
        #[arg(long, default_value_t = scanner::DEFAULT_SAFETY_LIMIT)]
        safety_limit: u32,
    },
    /// Enumerated class sizes against their closed forms.
    Count { d_min: u32, d_max: u32 },
}

/// Rendered output plus the exit code it implies.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: EXIT_OK,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StepBudget { .. } | Error::TheoremViolation { .. } => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

fn poly_input(p: &Poly) -> serde_json::Value {
    json!({ "symbolic": p.render(Format::Symbolic), "hex": p.hex() })
}

fn envelope<P: Serialize>(command: &str, input: serde_json::Value, payload: &P) -> Result<String> {
    let v = json!({ "command": command, "input": input, "payload": payload });
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let err = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parses argv, runs the command, writes its output; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match cli.out.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, &outcome.text),
        _ => stdout.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", Error::from(e));
        return EXIT_USAGE;
    }
    outcome.code
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let workers = cli.workers.unwrap_or_else(par::default_workers).max(1);
    match &cli.command {
        Command::Trace { poly, show_even } => {
            cmd_trace(poly, *show_even, cli.format, cli.max_steps)
        }
        Command::Length { poly } => cmd_length(poly, cli.format, cli.max_steps),
        Command::Family {
            family,
            params,
            filter,
        } => cmd_family(*family, params, filter, cli.format, workers),
        Command::Table { table } => cmd_table(table, cli.format, workers),
        Command::Scan {
            d_min,
            d_max,
            class,
            safety_limit,
        } => {
            let cfg = ScanConfig {
                max_steps: cli.max_steps,
                safety_limit: *safety_limit,
                ..ScanConfig::new(*d_min, *d_max, *class, workers)
            };
            cmd_scan(cfg, cli.format)
        }
        Command::Count { d_min, d_max } => cmd_count(*d_min, *d_max, cli.format),
    }
}

fn cmd_trace(p: &Poly, show_even: bool, format: OutputFormat, max_steps: u64) -> Result<Outcome> {
    let t = collatz::trace_with(
        p,
        TraceOptions {
            max_steps,
            ..TraceOptions::default()
        },
    )?;
    let violations = check_trace(&t);
    let code = if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let text = match format {
        OutputFormat::Json => envelope(
            "trace",
            poly_input(p),
            &json!({ "trace": t, "violations": violations }),
        )?,
        OutputFormat::Csv => trace_csv(&t)?,
        OutputFormat::Text => {
            let mut s = String::new();
            writeln!(s, "input: {} ({})", p, p.hex()).unwrap();
            writeln!(s, "odd degrees: {}", format_sequence(&t.odd_degrees)).unwrap();
            writeln!(s, "length: {}", t.length).unwrap();
            if show_even {
                if !t.terms_retained {
                    writeln!(s, "(terms above the retention degree are not kept)").unwrap();
                }
                for (k, odd) in t.odd_terms.iter().enumerate() {
                    writeln!(s, "A_{} = {}", 2 * k + 1, odd).unwrap();
                    if let (Some(even), Some((a, b))) = (t.even_terms.get(k), t.val_pairs.get(k)) {
                        writeln!(s, "A_{} = {}    (a, b) = ({a}, {b})", 2 * k + 2, even).unwrap();
                    }
                }
            }
            for v in &violations {
                writeln!(s, "violation: {v:?}").unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

fn trace_csv(t: &TraceRecord) -> Result<String> {
    let rows = (0..t.length).map(|k| {
        let opt = |p: Option<&Poly>| p.map(Poly::hex).unwrap_or_default();
        let (a, b) = t
            .val_pairs
            .get(k)
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .unwrap_or_default();
        vec![
            k.to_string(),
            opt(t.odd_terms.get(k)),
            t.odd_degrees[k].to_string(),
            opt(t.even_terms.get(k)),
            t.even_degrees
                .get(k)
                .map(usize::to_string)
                .unwrap_or_default(),
            a,
            b,
        ]
    });
    csv_string(
        &[
            "index",
            "odd_term",
            "odd_degree",
            "even_term",
            "even_degree",
            "a",
            "b",
        ],
        rows,
    )
}

fn cmd_length(p: &Poly, format: OutputFormat, max_steps: u64) -> Result<Outcome> {
    let len = collatz::length_with(p, max_steps)? as u64;
    let degree = p.degree()? as u64;
    let text = match format {
        OutputFormat::Json => envelope(
            "length",
            poly_input(p),
            &json!({ "degree": degree, "length": len }),
        )?,
        OutputFormat::Csv => csv_string(
            &["input", "hex", "degree", "length"],
            [vec![
                p.to_string(),
                p.hex(),
                degree.to_string(),
                len.to_string(),
            ]],
        )?,
        OutputFormat::Text => format!("{len}\n"),
    };
    Ok(Outcome::ok(text))
}

/// `name=v`, `name=lo..hi`, or a comma list of either.
pub fn parse_param(arg: &str) -> Result<(String, Vec<u64>)> {
    let usage = || Error::Domain(format!("parameter {arg:?} is not name=value[..value]"));
    let (name, values) = arg.split_once('=').ok_or_else(usage)?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(usage());
    }
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| usage());
    let mut out = Vec::new();
    for item in values.split(',') {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(Error::Domain(format!("empty range in {arg:?}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(item)?),
        }
    }
    Ok((name.to_string(), out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

/// A linear constraint `sum <op> sum` over parameter names and integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    lhs: Vec<(i128, String)>,
    op: Cmp,
    rhs: Vec<(i128, String)>,
    text: String,
}

impl Filter {
    pub fn parse(s: &str) -> Result<Filter> {
        let bad = |m: &str| Error::Domain(format!("filter {s:?}: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let ops = [
            ("<=", Cmp::Le),
            (">=", Cmp::Ge),
            ("==", Cmp::Eq),
            ("!=", Cmp::Ne),
            ("<", Cmp::Lt),
            (">", Cmp::Gt),
            ("=", Cmp::Eq),
        ];
        let (pos, tok, op) = ops
            .iter()
            .filter_map(|(t, op)| compact.find(t).map(|p| (p, *t, *op)))
            .min_by_key(|(p, t, _)| (*p, std::cmp::Reverse(t.len())))
            .ok_or_else(|| bad("no comparison operator"))?;
        let side = |e: &str| -> Result<Vec<(i128, String)>> {
            if e.is_empty() {
                return Err(bad("empty side"));
            }
            let mut terms = Vec::new();
            let mut sign = 1i128;
            let mut cur = String::new();
            let mut push = |sign: i128, cur: &mut String| -> Result<()> {
                if cur.is_empty() {
                    return Err(bad("dangling operator"));
                }
                terms.push((sign, std::mem::take(cur)));
                Ok(())
            };
            for c in e.chars() {
                match c {
                    '+' | '-' => {
                        push(sign, &mut cur)?;
                        sign = if c == '+' { 1 } else { -1 };
                    }
                    c if c.is_ascii_alphanumeric() || c == '_' => cur.push(c),
                    _ => return Err(bad("unexpected character")),
                }
            }
            push(sign, &mut cur)?;
            Ok(terms)
        };
        Ok(Filter {
            lhs: side(&compact[..pos])?,
            op,
            rhs: side(&compact[pos + tok.len()..])?,
            text: s.to_string(),
        })
    }

    fn eval_side(&self, side: &[(i128, String)], params: &Params) -> Result<i128> {
        let mut total = 0i128;
        for (sign, term) in side {
            let v = match term.parse::<i128>() {
                Ok(v) => v,
                Err(_) => *params.get(term).ok_or_else(|| {
                    Error::Domain(format!(
                        "filter {:?} names unknown parameter {term:?}",
                        self.text
                    ))
                })? as i128,
            };
            total += sign * v;
        }
        Ok(total)
    }

    pub fn accepts(&self, params: &Params) -> Result<bool> {
        let (l, r) = (
            self.eval_side(&self.lhs, params)?,
            self.eval_side(&self.rhs, params)?,
        );
        Ok(match self.op {
            Cmp::Le => l <= r,
            Cmp::Lt => l < r,
            Cmp::Ge => l >= r,
            Cmp::Gt => l > r,
            Cmp::Eq => l == r,
            Cmp::Ne => l != r,
        })
    }
}

#[derive(Debug, Serialize)]
struct FamilyPoint {
    #[serde(flatten)]
    record: PredictionRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    plateau: Option<PlateauReport>,
}

impl FamilyPoint {
    fn is_finding(&self) -> bool {
        (self.record.status == Status::Conjectured && !self.record.is_consistent())
            || self.plateau.as_ref().is_some_and(|p| !p.conforming())
    }
}

fn cmd_family(
    family: FamilyId,
    params: &[String],
    filters: &[String],
    format: OutputFormat,
    workers: usize,
) -> Result<Outcome> {
    let parsed = params
        .iter()
        .map(|p| parse_param(p))
        .collect::<Result<Vec<_>>>()?;
    let filters = filters
        .iter()
        .map(|f| Filter::parse(f))
        .collect::<Result<Vec<_>>>()?;
    let mut points = vec![Params::new()];
    for (name, values) in &parsed {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(name.clone(), *v);
                    q
                })
            })
            .collect();
    }
    let mut kept = Vec::new();
    for p in points {
        let mut ok = true;
        for f in &filters {
            ok &= f.accepts(&p)?;
        }
        if ok {
            kept.push(p);
        }
    }
    let single = kept.len() == 1;
    let sweep = families::sweep_points(family, kept, workers);
    if single {
        if let Some(s) = sweep.skipped.first() {
            return Err(Error::Domain(s.reason.clone()));
        }
    }
    if sweep.records.is_empty() && sweep.errors.is_empty() {
        return Err(Error::Domain(format!(
            "no point of {family} in the requested parameters is in the family domain"
        )));
    }
    let mut points = Vec::new();
    for record in sweep.records {
        let plateau = match (family, record.spec.params.get("n")) {
            (FamilyId::Trinomial, Some(&n)) if n >= 5 => Some(families::check_plateau(n)?),
            _ => None,
        };
        points.push(FamilyPoint { record, plateau });
    }

    let proven_bad = points
        .iter()
        .any(|p| p.record.status == Status::Proven && !p.record.is_consistent());
    let code = if proven_bad || !sweep.errors.is_empty() {
        EXIT_MISMATCH
    } else if points.iter().any(FamilyPoint::is_finding) {
        EXIT_FINDING
    } else {
        EXIT_OK
    };

    let text = match format {
        OutputFormat::Json => envelope(
            "family",
            json!({ "family": family, "params": params, "filters": filters.iter().map(|f| &f.text).collect::<Vec<_>>() }),
            &json!({ "points": points, "skipped": sweep.skipped, "errors": sweep.errors }),
        )?,
        OutputFormat::Csv => csv_string(
            &[
                "spec",
                "canonical",
                "poly_degree",
                "predicted",
                "computed",
                "status",
                "match",
                "odd_terms_checked",
                "odd_term_mismatches",
                "degree_sequence",
                "plateau_conforming",
                "note",
            ],
            points.iter().map(|p| {
                let r = &p.record;
                vec![
                    r.spec.to_string(),
                    r.canonical.to_string(),
                    r.poly_degree.to_string(),
                    r.predicted.to_string(),
                    r.computed.to_string(),
                    r.status.to_string(),
                    r.matches.to_string(),
                    r.odd_terms_checked.to_string(),
                    r.odd_term_mismatches.len().to_string(),
                    format_sequence(&r.degree_sequence),
                    p.plateau
                        .as_ref()
                        .map(|pl| pl.conforming().to_string())
                        .unwrap_or_default(),
                    r.note.clone().unwrap_or_default(),
                ]
            }),
        )?,
        OutputFormat::Text => {
            let mut s = String::new();
            for p in &points {
                let r = &p.record;
                write!(
                    s,
                    "{}  degree {}  predicted {}  computed {}  {}  {}",
                    r.spec,
                    r.poly_degree,
                    r.predicted,
                    r.computed,
                    r.status,
                    if r.is_consistent() {
                        "match"
                    } else {
                        "MISMATCH"
                    }
                )
                .unwrap();
                if r.canonical != r.spec {
                    write!(s, "  [as {}]", r.canonical).unwrap();
                }
                if let Some(pl) = &p.plateau {
                    write!(
                        s,
                        "  plateau {}",
                        if pl.conforming() { "ok" } else { "BROKEN" }
                    )
                    .unwrap();
                }
                s.push('\n');
                writeln!(s, "    {}", format_sequence(&r.degree_sequence)).unwrap();
            }
            for sk in &sweep.skipped {
                writeln!(s, "skipped {:?}: {}", sk.params, sk.reason).unwrap();
            }
            for e in &sweep.errors {
                writeln!(s, "error {:?}: {}", e.params, e.reason).unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

fn cmd_table(table: &str, format: OutputFormat, workers: usize) -> Result<Outcome> {
    let ids: Vec<TableId> = if table.eq_ignore_ascii_case("all") {
        TableId::ALL.to_vec()
    } else {
        vec![table.parse()?]
    };
    let reports = ids
        .iter()
        .map(|&t| tables::reproduce(t, workers))
        .collect::<Result<Vec<_>>>()?;
    let code = if reports.iter().all(|r| r.all_match()) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let text = match format {
        OutputFormat::Json => envelope("table", json!({ "table": table }), &reports)?,
        OutputFormat::Csv => csv_string(
            &[
                "table",
                "key",
                "input",
                "degree_sequence",
                "length",
                "match",
            ],
            reports.iter().flat_map(|rep| {
                rep.rows.iter().map(move |r| {
                    vec![
                        rep.table.to_string(),
                        r.key.clone(),
                        r.input.hex(),
                        format_sequence(&r.degree_sequence),
                        r.length.to_string(),
                        r.matches().to_string(),
                    ]
                })
            }),
        )?,
        OutputFormat::Text => {
            let mut s = String::new();
            for rep in &reports {
                writeln!(s, "{}: {}", rep.table, rep.title).unwrap();
                writeln!(s, "{} | degree sequence | length", rep.table.key_name()).unwrap();
                for r in &rep.rows {
                    writeln!(
                        s,
                        "{} | {} | {}",
                        r.key,
                        format_sequence(&r.degree_sequence),
                        r.length
                    )
                    .unwrap();
                }
                if rep.all_match() {
                    writeln!(s, "all {} rows match", rep.rows.len()).unwrap();
                } else {
                    for d in &rep.diffs {
                        writeln!(s, "DIFF {d}").unwrap();
                    }
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

fn cmd_scan(cfg: ScanConfig, format: OutputFormat) -> Result<Outcome> {
    let report = scanner::scan_with(cfg)?;
    let code = if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let text = match format {
        OutputFormat::Json => envelope(
            "scan",
            json!({ "d_min": cfg.d_min, "d_max": cfg.d_max, "class": cfg.class }),
            &report,
        )?,
        OutputFormat::Csv => report.to_csv()?,
        OutputFormat::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "degrees {}..={}  class {}  polynomials {}",
                cfg.d_min, cfg.d_max, cfg.class, report.total
            )
            .unwrap();
            writeln!(s, "degree  count  max_length  witness").unwrap();
            for r in &report.per_degree {
                writeln!(
                    s,
                    "{:>6}  {:>5}  {:>10}  {}",
                    r.degree, r.count, r.max_length, r.max_witness
                )
                .unwrap();
            }
            writeln!(
                s,
                "max length {} ({} witnesses, first {})",
                report.max_length,
                report.max_length_witness_count,
                report
                    .max_length_witnesses
                    .first()
                    .map(Poly::to_string)
                    .unwrap_or_default()
            )
            .unwrap();
            writeln!(
                s,
                "max length/degree {} at {}",
                report.max_ratio, report.max_ratio_witness
            )
            .unwrap();
            writeln!(s, "violations: {}", report.violation_count).unwrap();
            for v in &report.violations {
                writeln!(
                    s,
                    "  {} {} {:?}: {}",
                    v.poly.hex(),
                    v.kind,
                    v.index,
                    v.detail
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

#[derive(Debug, Serialize)]
struct CountRow {
    degree: u32,
    class: PolyClass,
    enumerated: u64,
    closed_form: u64,
    #[serde(rename = "match")]
    matches: bool,
}

fn cmd_count(d_min: u32, d_max: u32, format: OutputFormat) -> Result<Outcome> {
    if d_min < 2 || d_min > d_max || d_max > scanner::DEFAULT_SAFETY_LIMIT {
        return Err(Error::Domain(format!(
            "need 2 <= d_min <= d_max <= {}, got {d_min}..{d_max}",
            scanner::DEFAULT_SAFETY_LIMIT
        )));
    }
    let classes = [
        PolyClass::All,
        PolyClass::Odd,
        PolyClass::Even,
        PolyClass::P00,
        PolyClass::P01,
        PolyClass::P10,
        PolyClass::P11,
    ];
    let mut rows = Vec::new();
    for d in d_min..=d_max {
        for class in classes {
            let enumerated = scanner::enumerate(d, class)?.count() as u64;
            let closed_form = scanner::count_class(d, class)?;
            rows.push(CountRow {
                degree: d,
                class,
                enumerated,
                closed_form,
                matches: enumerated == closed_form,
            });
        }
    }
    let code = if rows.iter().all(|r| r.matches) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let text = match format {
        OutputFormat::Json => envelope("count", json!({ "d_min": d_min, "d_max": d_max }), &rows)?,
        OutputFormat::Csv => csv_string(
            &["degree", "class", "enumerated", "closed_form", "match"],
            rows.iter().map(|r| {
                vec![
                    r.degree.to_string(),
                    r.class.to_string(),
                    r.enumerated.to_string(),
                    r.closed_form.to_string(),
                    r.matches.to_string(),
                ]
            }),
        )?,
        OutputFormat::Text => {
            let mut s = String::from("degree  class  enumerated  closed_form\n");
            for r in &rows {
                writeln!(
                    s,
                    "{:>6}  {:>5}  {:>10}  {:>11}{}",
                    r.degree,
                    r.class.as_str(),
                    r.enumerated,
                    r.closed_form,
                    if r.matches { "" } else { "  MISMATCH" }
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, code })
}
