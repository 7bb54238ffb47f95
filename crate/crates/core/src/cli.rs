//! `rns3` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification campaign finds a failure,
//! 2 for usage and range errors.

use std::io::Write;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::converter::reverse_convert_traced;
use crate::cost::{self, TableFormat};
use crate::error::RnsError;
use crate::moduli::{crt_reconstruct, forward_convert, ModuliSet, ResidueVector};
use crate::numfmt::parse_uint;
use crate::verify::{self, Mode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rns3",
    version,
    about = "RNS codec for the moduli set {2^n, 2^2n-1, 2^2n+1}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert X to its residues (R1, R2, R3).
    Encode {
        #[arg(long)]
        n: u32,
        /// Decimal or 0x-prefixed hexadecimal.
        x: String,
    },
    /// Convert residues back to X through the reverse converter datapath.
    Decode {
        #[arg(long)]
        n: u32,
        /// Print operand words and carry-save outputs (MSB first).
        #[arg(long)]
        trace: bool,
        r1: String,
        r2: String,
        r3: String,
    },
    /// Check the converter against the CRT reference and the operand identities.
    Verify(VerifyArgs),
    /// Print the unit-gate cost tables (1: hardware, 2: delay, 3: channel adders, 4: comparison).
    Costs {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Size parameter for tables 1 and 2 (default 2); table 3 lists n = 1..16 unless given.
        #[arg(long)]
        n: Option<u32>,
        /// Defaults to floor(5n/3).
        #[arg(long)]
        m: Option<u32>,
    },
    /// Time forward conversion, reverse conversion and CRT reconstruction.
    Bench {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Csv,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => TableFormat::Text,
            FormatArg::Csv => TableFormat::Csv,
        }
    }
}

struct Failure(i32, String);

impl From<RnsError> for Failure {
    fn from(e: RnsError) -> Self {
        Failure(EXIT_USAGE, format!("error: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_VERIFY_FAILED, format!("error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Encode { n, x } => {
            let set = ModuliSet::new(n)?;
            let x = parse_uint(&x)?;
            let rv = forward_convert(&set, &x)?;
            writeln!(out, "{rv}")?;
        }
        Command::Decode { n, trace, r1, r2, r3 } => {
            let set = ModuliSet::new(n)?;
            let rv = ResidueVector::new(parse_uint(&r1)?, parse_uint(&r2)?, parse_uint(&r3)?);
            let t = reverse_convert_traced(&set, &rv)?;
            if trace {
                let ops = &t.operands;
                for (name, w) in [
                    ("S1'", &ops.s1_prime),
                    ("S2", &ops.s2),
                    ("S31", &ops.s31),
                    ("sum", &t.sum),
                    ("carry", &t.carry),
                ] {
                    writeln!(out, "{name:<6}{} ({})", w.to_binary(), w.value())?;
                }
                writeln!(out, "Y={} X={}", t.y, t.x)?;
            } else {
                writeln!(out, "X={}", t.x)?;
            }
        }
        Command::Verify(args) => {
            let set = ModuliSet::new(args.n)?;
            let mode = if args.exhaustive {
                Mode::Exhaustive
            } else {
                Mode::Random {
                    samples: args.samples,
                    seed: args.seed,
                }
            };
            let report = verify::run(&set, mode)?;
            out.write_all(report.render(20).as_bytes())?;
            if report.failures() > 0 {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Costs { table, format, n, m } => {
            let format = TableFormat::from(format);
            let size = n.unwrap_or(2);
            let m = m.unwrap_or_else(|| cost::comparable_m(size));
            let text = match table {
                1 => cost::emit_bills(size, m, format)?,
                2 => cost::emit_delays(size, m, format)?,
                3 => {
                    let ns: Vec<u32> = n.map_or_else(|| (1..=16).collect(), |n| vec![n]);
                    cost::emit_channel_delays(&ns, format)?
                }
                4 => cost::emit_table(&cost::table4(), format)?,
                other => return Err(Failure(EXIT_USAGE, format!("error: unknown table {other}"))),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Bench { n, iters, seed } => {
            if iters == 0 {
                return Err(Failure(EXIT_USAGE, "error: --iters must be at least 1".into()));
            }
            let set = ModuliSet::new(n)?;
            bench(&set, iters, seed, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn bench(set: &ModuliSet, iters: u64, seed: u64, out: &mut dyn Write) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<BigUint> = (0..iters).map(|_| rng.gen_biguint_below(set.range())).collect();

    let start = Instant::now();
    let rvs: Vec<ResidueVector> = xs
        .iter()
        .map(|x| forward_convert(set, x))
        .collect::<Result<_, _>>()?;
    let forward = start.elapsed();

    let start = Instant::now();
    let mut ok = 0u64;
    for (rv, x) in rvs.iter().zip(&xs) {
        ok += u64::from(&crate::converter::reverse_convert(set, rv)? == x);
    }
    let reverse = start.elapsed();

    let start = Instant::now();
    for (rv, x) in rvs.iter().zip(&xs) {
        ok += u64::from(&crt_reconstruct(set, rv)? == x);
    }
    let crt = start.elapsed();

    let per = |d: std::time::Duration| d.as_nanos() as f64 / iters as f64;
    writeln!(out, "n={} iters={iters}", set.n())?;
    writeln!(out, "forward_convert: {:.1} ns/op", per(forward))?;
    writeln!(out, "reverse_convert: {:.1} ns/op", per(reverse))?;
    writeln!(out, "crt_reconstruct: {:.1} ns/op", per(crt))?;
    if ok != 2 * iters {
        return Err(Failure(
            EXIT_VERIFY_FAILED,
            "error: decoded value mismatch during bench".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["rns3"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn encode() {
        assert_eq!(
            call(&["encode", "--n", "2", "100"]),
            (0, "R1=0 R2=10 R3=15\n".into(), String::new())
        );
        assert_eq!(call(&["encode", "--n", "1", "23"]).1, "R1=1 R2=2 R3=3\n");
        assert_eq!(call(&["encode", "--n", "2", "0x64"]).1, "R1=0 R2=10 R3=15\n");
        let (code, _, err) = call(&["encode", "--n", "2", "1020"]);
        assert_eq!(code, 2);
        assert!(err.contains("X must be < 1020"));
        assert_eq!(call(&["encode", "--n", "0", "1"]).0, 2);
        assert_eq!(call(&["encode", "--n", "2", "abc"]).0, 2);
    }

    #[test]
    fn decode() {
        assert_eq!(call(&["decode", "--n", "2", "0", "10", "15"]).1, "X=100\n");
        let (code, out, _) = call(&["decode", "--n", "2", "--trace", "0", "10", "15"]);
        assert_eq!(code, 0);
        assert!(out.contains("S2    01010101 (85)"));
        assert!(out.trim_end().ends_with("Y=25 X=100"));
        assert_eq!(call(&["decode", "--n", "2", "0", "15", "15"]).0, 2);
    }

    #[test]
    fn verify_modes() {
        let (code, out, _) = call(&["verify", "--n", "2", "--exhaustive"]);
        assert_eq!(code, 0);
        assert!(out.contains("checked 1020 values, 0 failures"));
        assert_eq!(call(&["verify", "--n", "5", "--exhaustive"]).0, 2);
        assert_eq!(call(&["verify", "--n", "5"]).0, 2);
        assert_eq!(call(&["verify", "--n", "5", "--random", "--exhaustive"]).0, 2);
    }

    #[test]
    fn costs() {
        let (code, out, _) = call(&["costs", "--table", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("8,2,3,151,136,11.02,12,14,14.2"));
        assert_eq!(out.lines().count(), 5);
        for t in ["1", "2", "3"] {
            assert_eq!(call(&["costs", "--table", t]).0, 0);
        }
        assert_eq!(call(&["costs", "--table", "9"]).0, 2);
    }

    #[test]
    fn bench() {
        let (code, out, _) = call(&["bench", "--n", "1", "--iters", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.contains("ns/op")).count(), 3);
        assert_eq!(call(&["bench", "--n", "0", "--iters", "5"]).0, 2);
        assert_eq!(call(&["bench", "--n", "1", "--iters", "0"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(call(&["--help"]).0, 0);
    }
}
