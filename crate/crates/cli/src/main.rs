//! `qtestgen`: compile pulse sequences, build fault tables and plan test sets.

use std::fmt::Write as _;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtestgen_core::bits::to_bitstring;
use qtestgen_core::cover::{plan_tests, PlanConfig, TestPlan};
use qtestgen_core::golden::{self, Status};
use qtestgen_core::matrix::{format_scalar, TOLERANCE};
use qtestgen_core::table::{
    build_quantum_table, collapse_equivalent, emit_table, QuantumFaultTable, TableFormat, COLLAPSE_TOLERANCE,
};
use qtestgen_core::{
    build_stuckat_tables, circuit, parse_circuit, parse_reversible, Circuit, Error, FaultModelConfig, FaultUniverse,
    ReversibleCircuit,
};

#[derive(Parser)]
#[command(
    name = "qtestgen",
    version,
    about = "Fault tables and minimal test plans for quantum and reversible circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the compiled unitary and its truth table.
    Compile { circuit: PathBuf },
    /// Print the fault table of a circuit.
    Table(TableArgs),
    /// Plan a test sequence reaching a coverage threshold.
    Plan(PlanArgs),
    /// Compare derived results with the bundled reference transcriptions.
    VerifyReference,
}

#[derive(Args)]
struct FaultArgs {
    circuit: PathBuf,
    /// Fault kinds, comma separated: pauli, removal, stuckat.
    #[arg(long)]
    faults: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    input: FaultArgs,
    /// Output format: csv or md.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Fixed number of decimals for probabilities.
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    input: FaultArgs,
    /// Coverage threshold in (0, 1].
    #[arg(long, default_value_t = 0.99)]
    tau: f64,
    /// Repetitions of each exhaustive test in the baseline.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    zeta: u64,
    /// Emit CSV instead of the text report.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    precision: Option<usize>,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_PERMUTATIVE: u8 = 3;
const EXIT_NOTHING_PLANNABLE: u8 = 4;

enum Loaded {
    Quantum(Circuit),
    Classical(ReversibleCircuit),
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::NotPermutative { .. } => EXIT_NOT_PERMUTATIVE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<String, Failure>;

struct Style {
    enabled: bool,
}

impl Style {
    fn detect() -> Self {
        let disabled = std::env::var("QTESTGEN_COLOR").is_ok_and(|v| v == "0");
        Style {
            enabled: !disabled && std::io::stdout().is_terminal(),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    })?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next());
    let located = |e: Error| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    };
    if first == Some("lines") {
        Ok(Loaded::Classical(parse_reversible(&text).map_err(located)?))
    } else {
        Ok(Loaded::Quantum(parse_circuit(&text).map_err(located)?))
    }
}

fn fault_config(kinds: &Option<String>, default: FaultModelConfig) -> Result<FaultModelConfig, Failure> {
    match kinds {
        Some(s) => Ok(s.parse()?),
        None => Ok(default),
    }
}

/// Collapsed table plus the stage count used by the baseline.
fn fault_table(args: &FaultArgs) -> Result<(QuantumFaultTable, u64), Failure> {
    match load(&args.circuit)? {
        Loaded::Quantum(c) => {
            let cfg = fault_config(&args.faults, FaultModelConfig::QUANTUM)?;
            let table = build_quantum_table(&c, &c.enumerate_faults(&cfg)?)?;
            Ok((table, c.stages().len().max(1) as u64))
        }
        Loaded::Classical(c) => {
            let cfg = fault_config(&args.faults, FaultModelConfig::CLASSICAL)?;
            c.enumerate_faults(&cfg)?;
            let (_, binary) = build_stuckat_tables(&c)?;
            let (table, _) = collapse_equivalent(&binary.to_quantum(), COLLAPSE_TOLERANCE);
            Ok((table, c.gates().len().max(1) as u64))
        }
    }
}

fn cmd_compile(path: &Path) -> CmdResult {
    let Loaded::Quantum(c) = load(path)? else {
        return Err(Failure {
            code: EXIT_FAILURE,
            message: "compile expects a pulse-sequence circuit".into(),
        });
    };
    let u = c.compile_unitary();
    let mut out = String::new();
    let plural = |k: usize| if k == 1 { "" } else { "s" };
    let (n, m) = (c.n_qubits(), c.stages().len());
    writeln!(out, "unitary ({n} qubit{}, {m} stage{}):", plural(n), plural(m)).unwrap();
    write!(out, "{u}").unwrap();
    match circuit::truth_table(&u, TOLERANCE) {
        Ok(table) => {
            let phase = u.get(table.output(0), 0);
            writeln!(out, "global phase: {}", format_scalar(phase)).unwrap();
            writeln!(out, "truth table:").unwrap();
            write!(out, "{table}").unwrap();
            Ok(out)
        }
        Err(e) => {
            print!("{out}");
            Err(e.into())
        }
    }
}

fn cmd_table(args: &TableArgs) -> CmdResult {
    let format: TableFormat = args.format.parse()?;
    let mut out = String::new();
    match load(&args.input.circuit)? {
        Loaded::Quantum(c) => {
            let cfg = fault_config(&args.input.faults, FaultModelConfig::QUANTUM)?;
            let table = build_quantum_table(&c, &c.enumerate_faults(&cfg)?)?;
            out.push_str(&emit_table(&table, format, args.precision));
            writeln!(out, "\n# undetectable: {}", list_or_none(&table.undetectable)).unwrap();
        }
        Loaded::Classical(c) => {
            let cfg = fault_config(&args.input.faults, FaultModelConfig::CLASSICAL)?;
            c.enumerate_faults(&cfg)?;
            let (outputs, binary) = build_stuckat_tables(&c)?;
            writeln!(out, "# outputs (* marks a detected fault)").unwrap();
            out.push_str(&emit_table(&outputs, format, None));
            writeln!(out, "\n# detectability").unwrap();
            out.push_str(&emit_table(&binary, format, None));
            if c == golden::classical_cnot() {
                writeln!(out, "\n# differences from the reference grid").unwrap();
                let mut any = false;
                for (r, row) in golden::STUCKAT_OUTPUTS.iter().enumerate() {
                    for (col, &printed) in row.iter().enumerate() {
                        let derived = outputs.columns[col].outputs[r];
                        if derived != printed {
                            any = true;
                            writeln!(
                                out,
                                "# {} input {}: reference {}, derived {}",
                                outputs.columns[col].name,
                                to_bitstring(r, 2),
                                to_bitstring(printed, 2),
                                to_bitstring(derived, 2)
                            )
                            .unwrap();
                        }
                    }
                }
                if !any {
                    writeln!(out, "# none").unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn list_or_none(names: &[String]) -> String {
    if names.is_empty() {
        "none".into()
    } else {
        names.join(", ")
    }
}

fn plan_report(plan: &TestPlan, table: &QuantumFaultTable, tau: f64, precision: Option<usize>) -> String {
    let n = table.n;
    let p = |x: f64| match precision {
        Some(d) => format!("{x:.d$}"),
        None => format!("{x:.6}"),
    };
    let mut out = String::new();
    writeln!(out, "threshold: {tau}").unwrap();
    writeln!(out, "tests:").unwrap();
    for (i, step) in plan.sequence.steps.iter().enumerate() {
        let row = table.row_of_input(step.input).expect("planned rows exist");
        let label = qtestgen_core::simulate::test_label(row, step.input, n);
        let role = if i < plan.deterministic.len() {
            "deterministic"
        } else {
            "repeated"
        };
        writeln!(out, "  {label} x{} ({role})", step.repetitions).unwrap();
    }
    for r in &plan.repeated {
        writeln!(
            out,
            "  {} needs {} run(s) of {} at p = {}",
            r.class,
            r.repetitions,
            to_bitstring(r.input, n),
            p(r.probability)
        )
        .unwrap();
    }
    writeln!(out, "coverage:").unwrap();
    for c in &plan.coverage.classes {
        writeln!(out, "  {}: {}", c.class, p(c.gamma)).unwrap();
    }
    writeln!(out, "undetectable: {}", list_or_none(&plan.coverage.undetectable)).unwrap();
    writeln!(out, "{}", plan.baseline).unwrap();
    out
}

fn plan_csv(plan: &TestPlan, n: usize, precision: Option<usize>) -> String {
    let p = |x: f64| match precision {
        Some(d) => format!("{x:.d$}"),
        None => format!("{x}"),
    };
    let mut out = String::from("kind,name,input,repetitions,gamma\n");
    for s in &plan.sequence.steps {
        writeln!(out, "test,,{},{},", to_bitstring(s.input, n), s.repetitions).unwrap();
    }
    for c in &plan.coverage.classes {
        writeln!(out, "class,{},,,{}", c.class, p(c.gamma)).unwrap();
    }
    for u in &plan.coverage.undetectable {
        writeln!(out, "undetectable,{u},,,0").unwrap();
    }
    writeln!(
        out,
        "baseline,exhaustive,,{},\nbaseline,plan,,{},",
        plan.baseline.exhaustive_detect, plan.baseline.plan_tests
    )
    .unwrap();
    out
}

fn cmd_plan(args: &PlanArgs) -> CmdResult {
    if !(args.tau > 0.0 && args.tau <= 1.0) {
        return Err(Error::InvalidThreshold(args.tau).into());
    }
    let csv = match args.format.as_deref() {
        None => false,
        Some(f) => match f.parse::<TableFormat>()? {
            TableFormat::Csv => true,
            TableFormat::Markdown => false,
        },
    };
    let (table, stages) = fault_table(&args.input)?;
    if table.classes.is_empty() {
        return Err(Failure {
            code: EXIT_NOTHING_PLANNABLE,
            message: format!(
                "no detectable faults; undetectable: {}",
                list_or_none(&table.undetectable)
            ),
        });
    }
    let plan = plan_tests(
        &table,
        &PlanConfig {
            tau: args.tau,
            zeta: args.zeta,
            stages,
        },
    )?;
    Ok(if csv {
        plan_csv(&plan, table.n, args.precision)
    } else {
        plan_report(&plan, &table, args.tau, args.precision)
    })
}

fn cmd_verify(style: &Style) -> CmdResult {
    let checks = golden::audit()?;
    let mut out = String::new();
    let mut failed = 0;
    for check in &checks {
        let tag = match check.status {
            Status::Pass => style.paint("32", "PASS"),
            Status::Erratum(_) => style.paint("33", "ERRATUM"),
            Status::Fail(_) => {
                failed += 1;
                style.paint("31", "FAIL")
            }
        };
        let detail = match &check.status {
            Status::Pass => String::new(),
            Status::Erratum(why) | Status::Fail(why) => format!(": {why}"),
        };
        writeln!(out, "{tag} {}{detail}", check.artifact).unwrap();
    }
    let errata = checks.iter().filter(|c| matches!(c.status, Status::Erratum(_))).count();
    writeln!(
        out,
        "{} checks: {} pass, {errata} erratum, {failed} fail",
        checks.len(),
        checks.len() - errata - failed
    )
    .unwrap();
    if failed > 0 {
        print!("{out}");
        return Err(Failure {
            code: EXIT_FAILURE,
            message: format!("{failed} unexplained difference(s)"),
        });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    let result = match &cli.command {
        Command::Compile { circuit } => cmd_compile(circuit),
        Command::Table(args) => cmd_table(args),
        Command::Plan(args) => cmd_plan(args),
        Command::VerifyReference => cmd_verify(&style),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{} {}", style.paint("31", "error:"), f.message);
            ExitCode::from(f.code)
        }
    }
}
