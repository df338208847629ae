//! `qg`: exact Wedderburn structure reports for Iwasawa algebras of pro-l
//! groups `H ⋊ Z_l`.
//!
//! Exit codes: 0 = success with all verification suites passing,
//! 1 = diagnostics (parse or semantic errors), 2 = a verification suite
//! failed (its witness is in the report).

use std::process::ExitCode;

use clap::Parser;

use qg_cli::doc::Diagnostic;
use qg_cli::input::{parse_prime_spec_list, VerifyLevel};
use qg_cli::report::diagnostics_to_machine_text;
use qg_cli::{parse_input, run, SuiteStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Parser, Debug)]
#[command(
    name = "qg",
    about = "Exact Wedderburn decomposition of Quot(Z_l[[H x| Z_l]]) for finite l-groups H"
)]
struct Args {
    /// Input document path ('-' for stdin)
    input: String,

    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Verification level (overrides the document option)
    #[arg(long)]
    verify: Option<String>,

    /// T-precision for the series layer (overrides the document option)
    #[arg(long)]
    series_precision: Option<usize>,

    /// Completion primes, e.g. "T,ell,f(0,3,3)" (overrides the document option)
    #[arg(long)]
    primes: Option<String>,

    /// Group order cap (overrides the document option)
    #[arg(long)]
    max_order: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match read_input(&args.input) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("qg: cannot read '{}': {err}", args.input);
            return ExitCode::from(1);
        }
    };
    let diags_out = |diags: &[Diagnostic], format: Format| {
        match format {
            Format::Machine => print!("{}", diagnostics_to_machine_text(diags)),
            Format::Text => {
                for d in diags {
                    eprintln!("qg: {d}");
                }
            }
        }
        ExitCode::from(1)
    };

    let mut docu = match parse_input(&text) {
        Ok(d) => d,
        Err(diags) => return diags_out(&diags, args.format),
    };

    // command-line overrides
    if let Some(v) = &args.verify {
        match v.as_str() {
            "fast" => docu.options.verify = VerifyLevel::Fast,
            "full" => docu.options.verify = VerifyLevel::Full,
            other => {
                let d = vec![Diagnostic::new(0, format!("unknown verify level '{other}'"))];
                return diags_out(&d, args.format);
            }
        }
    }
    if let Some(m) = args.series_precision {
        if m < 2 {
            let d = vec![Diagnostic::new(0, "series precision must be at least 2")];
            return diags_out(&d, args.format);
        }
        docu.options.series_precision = m;
    }
    if let Some(cap) = args.max_order {
        docu.options.max_order = cap;
    }
    if let Some(primes) = &args.primes {
        match parse_prime_spec_list(primes, docu.l) {
            Ok(list) => docu.options.primes = list,
            Err(msg) => return diags_out(&[Diagnostic::new(0, msg)], args.format),
        }
    }
    // overrides can re-enable a previously capped group
    if let Err(d) = docu.build_group() {
        return diags_out(&[d], args.format);
    }

    match run(&docu) {
        Ok(report) => {
            match args.format {
                Format::Machine => print!("{}", report.to_machine_text()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report
                .verification
                .iter()
                .any(|s| s.status == SuiteStatus::Fail)
            {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(diags) => diags_out(&diags, args.format),
    }
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}
