use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stirmod_cli::report::Format;
use stirmod_cli::suites::{self, RunOptions, Selection};
use stirmod_cli::table;
use stirmod_core::chern::{chern_permutation, CyclicGroup, PermutationGSet};
use stirmod_core::modring::{factorize, vp, Modulus, PrimePower};
use stirmod_core::polyring::{closed_form_even, closed_form_odd, pochhammer_poly};
use stirmod_core::stirling::{
    big_mod, big_valuation, stirling_exact, stirling_mod_n, stirling_mod_pr, stirling_valuation,
    ValuationKind,
};

/// Stirling numbers of the first kind modulo prime powers.
#[derive(Debug, Parser)]
#[command(name = "stirmod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// c(n, k) reduced modulo n (default), N or p^v_p(n), exactly, or its valuation.
    Stirling(StirlingArgs),
    /// P_n(t) = (1)(1 + t)...(1 + (n-1)t) modulo N.
    Poly {
        n: u64,
        #[arg(long = "mod", value_name = "N")]
        modulus: u64,
        /// Print the closed form instead (N must be a power of a prime dividing n).
        #[arg(long)]
        closed_form: bool,
    },
    /// Chern classes of a permutation representation of the cyclic group C_n.
    Chern {
        n: u64,
        /// Stabilizer orders of the orbits, one per orbit.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        gset: Vec<u64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_selection)]
        suite: Selection,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Tabulate closed-form residues against the exact values.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, value_parser = table::parse_range)]
        n_range: std::ops::RangeInclusive<u64>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

#[derive(Debug, Args)]
struct StirlingArgs {
    n: u64,
    #[arg(allow_negative_numbers = true)]
    k: i64,
    #[arg(long = "mod", value_name = "N", group = "mode")]
    modulus: Option<u64>,
    #[arg(long, value_name = "P", group = "mode")]
    mod_pr: Option<u64>,
    #[arg(long, group = "mode")]
    exact: bool,
    #[arg(long, value_name = "P", group = "mode")]
    valuation: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableKind {
    StirlingMod,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    s.parse()
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<stirmod_core::Error> for Failure {
    fn from(e: stirmod_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Stirling(args) => cmd_stirling(&args, &mut out).map(|()| true),
        Command::Poly {
            n,
            modulus,
            closed_form,
        } => cmd_poly(n, modulus, closed_form, &mut out).map(|()| true),
        Command::Chern { n, gset } => cmd_chern(n, gset, &mut out).map(|()| true),
        Command::Verify {
            suite,
            max_n,
            format,
            jobs,
        } => {
            let report = suites::run(&suite, RunOptions { max_n, jobs });
            report
                .write(format, &mut out)
                .map(|()| report.all_passed())
                .map_err(Failure::Io)
        }
        Command::Table {
            kind: TableKind::StirlingMod,
            n_range,
            format,
        } => cmd_table(n_range, format, &mut out).map(|()| true),
    };
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_stirling(args: &StirlingArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (n, k) = (args.n, args.k);
    if args.exact {
        writeln!(out, "{}", stirling_exact(n, k)?)?;
    } else if let Some(p) = args.mod_pr {
        let s = stirling_mod_pr(n, k, p)?;
        writeln!(
            out,
            "{} (mod {}) [{}]",
            s.value.value(),
            s.modulus.value(),
            s.branch
        )?;
    } else if let Some(p) = args.valuation {
        writeln!(out, "{}", valuation(n, k, p)?)?;
    } else {
        let m = Modulus::new(args.modulus.unwrap_or(n))?;
        let value = if n % m.get() == 0 {
            stirling_mod_n(n, k)?.value() % m.get()
        } else {
            big_mod(&stirling_exact(n, k)?, m).value()
        };
        writeln!(out, "{value}")?;
    }
    Ok(())
}

/// Closed form when `n` is a covered prime power, exact oracle otherwise.
fn valuation(n: u64, k: i64, p: u64) -> Result<String, Failure> {
    let r = vp(n, p)?;
    if r >= 1 && n == p.pow(r) && (p != 2 || r >= 3) && k >= 1 && k as u64 <= n {
        let claim = stirling_valuation(PrimePower::new(p, r)?, k)?;
        if claim.kind == ValuationKind::Exact {
            return Ok(claim.value.to_string());
        }
    }
    let exact = stirling_exact(n, k)?;
    Ok(match big_valuation(&exact, p) {
        Some(v) => v.to_string(),
        None => "inf".to_string(),
    })
}

fn cmd_poly(n: u64, modulus: u64, closed_form: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let m = Modulus::new(modulus)?;
    if !closed_form {
        writeln!(out, "{}", pochhammer_poly(n, m))?;
        return Ok(());
    }
    let usage = || {
        Failure::Usage(format!(
            "--closed-form needs N = p^s with p | n and s <= v_p(n); got n={n}, N={modulus}"
        ))
    };
    let [(p, s)] = factorize(modulus)[..] else {
        return Err(usage());
    };
    let r = if n == 0 { 0 } else { vp(n, p)? };
    if r < s {
        return Err(usage());
    }
    let pp = PrimePower::new(p, r)?;
    let form = if p == 2 {
        closed_form_even(n)?
    } else {
        closed_form_odd(pp, n / pp.value())?
    };
    writeln!(out, "{}", form.reduce(m))?;
    Ok(())
}

fn cmd_chern(n: u64, gset: Vec<u64>, out: &mut dyn Write) -> Result<(), Failure> {
    let group = CyclicGroup::new(n)?;
    let v = chern_permutation(&PermutationGSet::new(group, gset)?);
    writeln!(out, "{v}")?;
    if n > 1 && v.higher_classes_vanish() {
        writeln!(out, "all higher Chern classes vanish")?;
    }
    Ok(())
}

fn cmd_table(
    range: std::ops::RangeInclusive<u64>,
    format: TableFormat,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for n in range {
        rows.extend(table::rows_for(n)?);
    }
    match format {
        TableFormat::Csv => table::write_csv(rows, out)?,
        TableFormat::Json => table::write_json(rows, out)?,
    }
    Ok(())
}
