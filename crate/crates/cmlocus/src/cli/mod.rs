//! Command-line front end.

mod render;
mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::arith::{
    class_number, compose_rcf, reduced_forms, split_discriminant, tensor_rcf, two_torsion_count,
    Base, FieldSymbol, OrderDisc,
};
use crate::error::{Error, Result};
use crate::graph::{build_graph, double_cover};
use crate::locus::{fiber_x0mn, primitive_x0mn, x1_fiber};

pub use render::{fiber_json, Format};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for unparseable arguments.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for arguments that parse but describe no valid object.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for a failed internal invariant.
pub const EXIT_CONSISTENCY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cmlocus", version, about = "CM points on the modular curves X0(M, N) for orders in Q(i) and Q(sqrt(-3))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

/// An order given either as --disc or as --dk with --f.
#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
struct OrderArgs {
    /// Fundamental discriminant, -3 or -4.
    #[arg(long = "dk", allow_hyphen_values = true, conflicts_with = "disc")]
    dk: Option<i64>,
    /// Conductor of the order.
    #[arg(long = "f", requires = "dk")]
    f: Option<u64>,
    /// Discriminant of the order.
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<BigInt>,
}

impl OrderArgs {
    fn order(&self) -> Result<OrderDisc> {
        match (&self.disc, self.dk) {
            (Some(d), _) => split_discriminant(d),
            (None, Some(dk)) => OrderDisc::new(dk, self.f.unwrap_or(1)),
            (None, None) => Err(Error::InvalidArgument("give --disc or --dk".into())),
        }
    }
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[arg(long = "M", default_value_t = 1)]
    m: u64,
    #[arg(long = "N")]
    n: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed points of X0(M, N) over J_delta.
    Fiber {
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        levels: LevelArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Primitive residue fields and degrees on X0(M, N).
    Primitive {
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        levels: LevelArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Behaviour of X1(M, N) -> X0(M, N) above a CM point.
    X1 {
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        levels: LevelArgs,
        /// Points with extra automorphisms (delta in {-3, -4}, M = 1, N >= 4).
        #[arg(long)]
        elliptic: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Class number, 2-torsion and reduced forms of a discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: BigInt,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Composita and tensor products of ring class fields.
    Rcf {
        #[command(subcommand)]
        op: RcfOp,
    },
    /// The ell-isogeny graph of CM curves, truncated at a depth.
    Graph {
        #[arg(long = "dk", allow_hyphen_values = true)]
        dk: i64,
        #[arg(long = "l")]
        ell: u64,
        #[arg(long = "f0", default_value_t = 1)]
        f0: u64,
        #[arg(long)]
        depth: u32,
        /// Unwrap the surface loop.
        #[arg(long)]
        double: bool,
        /// Print Graphviz instead of a level summary.
        #[arg(long)]
        dot: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Run the invariant suites.
    Check {
        /// Full parameter ranges instead of the quick subset.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Debug, Subcommand)]
enum RcfOp {
    /// Compositum of ring class fields, e.g. `rcf compose --dk -3 'K(2)' 'K(3)'`.
    Compose {
        #[arg(long = "dk", allow_hyphen_values = true)]
        dk: i64,
        #[arg(required = true)]
        fields: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Decomposition of F1 tensor F2 over Q(m), m the gcd of the conductors by default.
    Tensor {
        #[arg(long = "dk", allow_hyphen_values = true)]
        dk: i64,
        first: String,
        second: String,
        #[arg(long)]
        over: Option<u64>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
}

/// Parses "Q(m)" or "K(m)".
pub fn parse_field(s: &str, delta_k: i64) -> Result<FieldSymbol> {
    let bad = || Error::InvalidArgument(format!("cannot read field symbol {s:?}; expected Q(m) or K(m)"));
    let s = s.trim();
    let base = match s.chars().next() {
        Some('Q') | Some('q') => Base::Q,
        Some('K') | Some('k') => Base::K,
        _ => return Err(bad()),
    };
    let inner = s[1..].strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let m: u64 = inner.trim().parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(bad());
    }
    Ok(FieldSymbol::new(base, m, delta_k))
}

/// Runs the command line `args` (program name first), writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_consistency() {
                EXIT_CONSISTENCY
            } else {
                EXIT_VALIDATION
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Fiber { order, levels, format } => {
            let order = order.order()?;
            let report = fiber_x0mn(&order, levels.m, levels.n)?;
            emit(out, &render::fiber(&report, format.into())?)?;
        }
        Command::Primitive { order, levels, format } => {
            let order = order.order()?;
            let p = primitive_x0mn(&order, levels.m, levels.n)?;
            emit(out, &render::primitive(&order, levels.m, levels.n, &p, format.into())?)?;
        }
        Command::X1 { order, levels, elliptic, format } => {
            let order = order.order()?;
            let t = x1_fiber(&order, levels.m, levels.n, elliptic)?;
            emit(out, &render::x1(&order, levels.m, levels.n, elliptic, &t, format.into())?)?;
        }
        Command::Classgroup { disc, format } => {
            let order = split_discriminant(&disc)?;
            let h = class_number(&disc)?;
            let two = two_torsion_count(&disc)?;
            let forms = reduced_forms(&disc)?;
            emit(out, &render::classgroup(&order, h, two, &forms, format.into())?)?;
        }
        Command::Rcf { op: RcfOp::Compose { dk, fields, format } } => {
            let fields: Vec<FieldSymbol> = fields.iter().map(|s| parse_field(s, dk)).collect::<Result<_>>()?;
            let r = compose_rcf(&fields)?;
            emit(out, &render::compositum(&fields, &r, format.into())?)?;
        }
        Command::Rcf { op: RcfOp::Tensor { dk, first, second, over, format } } => {
            use num_integer::Integer;
            let f1 = parse_field(&first, dk)?;
            let f2 = parse_field(&second, dk)?;
            let m = over.unwrap_or_else(|| f1.m.gcd(&f2.m));
            let pieces = tensor_rcf(&f1, &f2, m)?;
            emit(out, &render::tensor(&f1, &f2, m, &pieces, format.into())?)?;
        }
        Command::Graph { dk, ell, f0, depth, double, dot, format } => {
            let mut g = build_graph(dk, ell, f0, depth)?;
            if double {
                g = double_cover(&g)?;
            }
            let text = if dot { g.to_dot(5000)? } else { render::graph(&g, format.into())? };
            emit(out, &text)?;
        }
        Command::Check { sweep } => {
            let outcome = sweep::run(sweep, out)?;
            return Ok(if outcome { EXIT_OK } else { EXIT_CONSISTENCY });
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cmlocus").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn field_parsing() {
        assert_eq!(parse_field("K(6)", -3).unwrap(), FieldSymbol::k(6, -3));
        assert_eq!(parse_field(" q(1) ", -4).unwrap(), FieldSymbol::q(1, -4));
        assert!(parse_field("K6", -3).is_err());
        assert!(parse_field("K(0)", -3).is_err());
        assert!(parse_field("L(2)", -3).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["fiber", "--dk", "-4", "--N", "2"]).0, EXIT_OK);
        assert_eq!(call(&["fiber", "--dk", "-4", "--N", "2", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["fiber", "--dk", "-7", "--N", "2"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["fiber", "--dk", "-4", "--M", "3", "--N", "4"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
