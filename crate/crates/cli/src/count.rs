use std::fmt::Write as _;

use clap::{Args, ValueEnum};
use umap_core::formulas::{self, FormulaError};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Non-orientable precubic maps.
    Eta,
    /// Orientable precubic maps.
    Xi,
    /// Maps with a marked intertwined node, counted by gluing.
    Marked,
    /// The constant c_h (integer h only).
    C,
    /// The constant K_h.
    K,
    /// Asymptotic estimate at n edges (uses --n instead of --m).
    Kappa,
}

/// Inclusive range written `a` or `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span(pub u64, pub u64);

impl Span {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.0..=self.1
    }
}

pub fn parse_span(s: &str) -> Result<Span, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{t}` is not a non-negative integer"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(Span(a, b))
        }
        None => {
            let a = parse(s)?;
            Ok(Span(a, a))
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Type as 2h: a value or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_span)]
    twice_h: Span,
    /// Size parameter m: a value or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_span)]
    m: Option<Span>,
    /// Edge count for the asymptotic estimate: a value or a range.
    #[arg(long, value_parser = parse_span)]
    n: Option<Span>,
    /// Decimal places of the asymptotic estimate.
    #[arg(long, default_value_t = formulas::DEFAULT_DIGITS)]
    digits: usize,
}

fn usage(e: FormulaError) -> CliError {
    CliError::Usage(e.to_string())
}

fn twice_h_of(t: u64) -> CliResult<u32> {
    u32::try_from(t).map_err(|_| CliError::Usage(format!("type {t} is too large")))
}

pub fn run(args: &CountArgs) -> CliResult<String> {
    let mut out = String::new();
    let name = format!("{:?}", args.family).to_lowercase();
    let sizes = |what: &str, span: Option<Span>| {
        span.ok_or_else(|| CliError::Usage(format!("--family {name} needs --{what}")))
    };
    for t in args.twice_h.iter() {
        let t = twice_h_of(t)?;
        match args.family {
            Family::Eta | Family::Xi | Family::Marked => {
                for m in sizes("m", args.m)?.iter() {
                    let value = match args.family {
                        Family::Eta => formulas::eta(t, m).map_err(usage)?,
                        Family::Xi => formulas::xi(t, m),
                        _ => formulas::marked_count(t, m).map_err(usage)?,
                    };
                    let _ = writeln!(out, "{name}\t{t}\t{m}\t{value}");
                }
            }
            Family::C => {
                if t % 2 == 1 {
                    if args.twice_h.0 == args.twice_h.1 {
                        return Err(CliError::Usage("c_h is defined for integer h only".into()));
                    }
                    continue;
                }
                let _ = writeln!(out, "c\t{t}\t-\t{}", formulas::c_const(t / 2));
            }
            Family::K => {
                let k = formulas::k_const(t).map_err(usage)?;
                let _ = writeln!(out, "k\t{t}\t-\t{k}");
            }
            Family::Kappa => {
                for n in sizes("n", args.n)?.iter() {
                    let v = formulas::asymptotic_kappa(t, n, args.digits).map_err(usage)?;
                    let _ = writeln!(out, "kappa\t{t}\t{n}\t{v}");
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!(parse_span("3"), Ok(Span(3, 3)));
        assert_eq!(parse_span("1..4"), Ok(Span(1, 4)));
        assert_eq!(parse_span("1..=4"), Ok(Span(1, 4)));
        assert!(parse_span("4..1").is_err());
        assert!(parse_span("x").is_err());
    }
}
