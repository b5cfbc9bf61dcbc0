use std::process::ExitCode;

use csco_cli::builtin::{builtin_scenarios, SUMMARIES};
use csco_cli::render::{render_reports, Format};
use csco_core::criterion::evaluate_criterion;
use csco_core::error::Error;
use csco_core::opexpr::{parse_scenario_with_max_dim, Scenario, DEFAULT_MAX_DIM};

const USAGE: &str = "\
usage: csco <subcommand> [options]

subcommands:
  check <file> [--json] [--max-dim N] [--tol-zero X] [--tol-cluster X]
      evaluate a scenario file and print the report
  builtin <name> [--l N] [--json]
      evaluate a built-in scenario (bell, ghz, two_electron, spin_orbit,
      plus_product); --l sets the orbital quantum number for spin_orbit
  list
      print the built-in scenario names

exit codes: 0 evaluation completed (criterion/oracle disagreements are
findings, not failures); 2 input or parse error; 3 internal numeric failure.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: format!("{}\n\n{USAGE}", message.into()),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numeric() { 3 } else { 2 },
            message: format!("error: {e}"),
        }
    }
}

fn run(args: &[String]) -> Result<String, Failure> {
    let Some(subcommand) = args.first() else {
        return Err(usage_error("missing subcommand"));
    };
    match subcommand.as_str() {
        "check" => run_check(&args[1..]),
        "builtin" => run_builtin(&args[1..]),
        "list" => {
            if args.len() > 1 {
                return Err(usage_error("list takes no arguments"));
            }
            let mut out = String::new();
            for (name, description) in SUMMARIES {
                out.push_str(&format!("{name:<14} {description}\n"));
            }
            Ok(out)
        }
        "--help" | "-h" | "help" => Ok(format!("{USAGE}\n")),
        other => Err(usage_error(format!("unknown subcommand '{other}'"))),
    }
}

fn run_check(args: &[String]) -> Result<String, Failure> {
    let mut path: Option<&str> = None;
    let mut format = Format::Text;
    let mut max_dim = DEFAULT_MAX_DIM;
    let mut tol_zero: Option<f64> = None;
    let mut tol_cluster: Option<f64> = None;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => format = Format::Json,
            "--max-dim" => {
                max_dim = parse_flag_value(it.next(), "--max-dim")?;
                if max_dim < 2 {
                    return Err(usage_error("--max-dim must be at least 2"));
                }
            }
            "--tol-zero" => tol_zero = Some(parse_flag_value(it.next(), "--tol-zero")?),
            "--tol-cluster" => tol_cluster = Some(parse_flag_value(it.next(), "--tol-cluster")?),
            flag if flag.starts_with('-') => {
                return Err(usage_error(format!("unknown flag '{flag}' for check")));
            }
            value => {
                if path.replace(value).is_some() {
                    return Err(usage_error("check takes exactly one scenario file"));
                }
            }
        }
    }
    let Some(path) = path else {
        return Err(usage_error("check needs a scenario file"));
    };

    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("error: cannot read '{path}': {e}"),
    })?;
    let mut scenario: Scenario = parse_scenario_with_max_dim(&text, max_dim)?;
    if let Some(z) = tol_zero {
        scenario.tolerances.zero_tol = z;
    }
    if let Some(c) = tol_cluster {
        scenario.tolerances.cluster_tol = c;
    }
    scenario.tolerances.validate()?;

    let report = evaluate_criterion(&scenario)?;
    Ok(render_reports(&[report], format)?)
}

fn run_builtin(args: &[String]) -> Result<String, Failure> {
    let mut name: Option<&str> = None;
    let mut format = Format::Text;
    let mut l: Option<u32> = None;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => format = Format::Json,
            "--l" => l = Some(parse_flag_value(it.next(), "--l")?),
            flag if flag.starts_with('-') => {
                return Err(usage_error(format!("unknown flag '{flag}' for builtin")));
            }
            value => {
                if name.replace(value).is_some() {
                    return Err(usage_error("builtin takes exactly one name"));
                }
            }
        }
    }
    let Some(name) = name else {
        return Err(usage_error("builtin needs a scenario name"));
    };

    let scenarios = builtin_scenarios(name, l)?;
    let reports = scenarios
        .iter()
        .map(evaluate_criterion)
        .collect::<csco_core::error::Result<Vec<_>>>()?;
    Ok(render_reports(&reports, format)?)
}

fn parse_flag_value<T: std::str::FromStr>(
    value: Option<&String>,
    flag: &str,
) -> Result<T, Failure> {
    let Some(raw) = value else {
        return Err(usage_error(format!("{flag} needs a value")));
    };
    raw.parse()
        .map_err(|_| usage_error(format!("invalid value '{raw}' for {flag}")))
}
