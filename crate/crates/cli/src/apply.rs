//! `umap apply`: one transformation of a UMAP v1 document read from stdin.
//!
//! Opening and leaf deletion append `# leaves:`, `# flavor:` and `# marker:`
//! comment lines, which gluing and leaf insertion read back when the
//! corresponding flags are absent.

use std::io::Read;

use clap::{Args, ValueEnum};
use umap_core::bijections::{self, MarkedTriple, Marker};
use umap_core::{canonical_orientation, format, Flavor, RibbonMap};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Open,
    Glue,
    Phi,
    PhiInverse,
    Avg,
    RemyDelete,
    RemyInsert,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(value_enum)]
    op: Op,
    /// Vertex to open.
    #[arg(long)]
    vertex: Option<usize>,
    /// Three marked leaves in tour order, e.g. `3,4,5`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    leaves: Option<Vec<usize>>,
    /// Flavor of the glued node: A, B, C or D.
    #[arg(long)]
    flavor: Option<Flavor>,
    /// Leaf to delete.
    #[arg(long)]
    leaf: Option<usize>,
    /// Edge-side for leaf insertion as `EDGE:SIDE`.
    #[arg(long, value_parser = parse_marker)]
    marker: Option<Marker>,
    /// Bring the input to canonical orientation first.
    #[arg(long)]
    canonicalize: bool,
    /// Print Graphviz instead of UMAP v1.
    #[arg(long)]
    dot: bool,
}

fn parse_marker(s: &str) -> Result<Marker, String> {
    let (e, side) = s
        .split_once(':')
        .ok_or_else(|| format!("expected EDGE:SIDE, got `{s}`"))?;
    let edge = e.trim().parse().map_err(|_| format!("bad edge id `{e}`"))?;
    let side = match side.trim() {
        "0" => 0,
        "1" => 1,
        other => return Err(format!("side must be 0 or 1, got `{other}`")),
    };
    Ok(Marker { edge, side })
}

/// Value of the first `# key: value` comment line.
fn comment<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim();
        rest.strip_prefix(key)?.trim().strip_prefix(':').map(str::trim)
    })
}

fn leaves_from(args: &ApplyArgs, text: &str) -> CliResult<[usize; 3]> {
    let list = match &args.leaves {
        Some(l) => l.clone(),
        None => {
            let raw = comment(text, "leaves")
                .ok_or_else(|| CliError::Usage("glue needs --leaves or a `# leaves:` line".into()))?;
            raw.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad leaf `{s}`"))))
                .collect::<CliResult<Vec<usize>>>()?
        }
    };
    list.try_into()
        .map_err(|_| CliError::Usage("exactly three leaves are needed".into()))
}

fn flavor_from(args: &ApplyArgs, text: &str) -> CliResult<Flavor> {
    if let Some(f) = args.flavor {
        return Ok(f);
    }
    let raw = comment(text, "flavor")
        .ok_or_else(|| CliError::Usage("glue needs --flavor or a `# flavor:` line".into()))?;
    raw.parse()
        .map_err(|_| CliError::Usage(format!("bad flavor `{raw}`")))
}

fn marker_from(args: &ApplyArgs, text: &str) -> CliResult<Marker> {
    if let Some(m) = args.marker {
        return Ok(m);
    }
    let raw = comment(text, "marker")
        .ok_or_else(|| CliError::Usage("remy-insert needs --marker or a `# marker:` line".into()))?;
    parse_marker(&raw.replace(' ', ":")).map_err(CliError::Usage)
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn render(map: &RibbonMap, dot: bool, notes: &[String]) -> String {
    if dot {
        return map.to_dot();
    }
    let mut out = format::write_map(map);
    for n in notes {
        out.push_str("# ");
        out.push_str(n);
        out.push('\n');
    }
    out
}

/// Applies the operation to `text` and renders the result.
pub fn apply(args: &ApplyArgs, text: &str) -> CliResult<String> {
    let mut map = format::parse_map(text).map_err(|e| CliError::Usage(format!("invalid input: {e}")))?;
    if args.canonicalize {
        map = canonical_orientation(&map).map_err(failure)?;
    }
    let out = match args.op {
        Op::Open => {
            let v = args
                .vertex
                .ok_or_else(|| CliError::Usage("open needs --vertex".into()))?;
            let opened = bijections::open(&map, v).map_err(failure)?;
            let [a, b, c] = opened.triple.leaves;
            let notes = [format!("leaves: {a} {b} {c}"), format!("flavor: {}", opened.flavor)];
            render(&opened.triple.map, args.dot, &notes)
        }
        Op::Glue => {
            let leaves = leaves_from(args, text)?;
            let flavor = flavor_from(args, text)?;
            let triple = MarkedTriple::new(map, leaves).map_err(failure)?;
            render(&bijections::glue(&triple, flavor).map_err(failure)?, args.dot, &[])
        }
        Op::Phi => render(&bijections::phi(&map).map_err(failure)?, args.dot, &[]),
        Op::PhiInverse => render(&bijections::phi_inverse(&map).map_err(failure)?, args.dot, &[]),
        Op::Avg => render(&bijections::averaging_involution(&map).map_err(failure)?, args.dot, &[]),
        Op::RemyDelete => {
            let leaf = args
                .leaf
                .ok_or_else(|| CliError::Usage("remy-delete needs --leaf".into()))?;
            let (small, marker) = bijections::remy_delete(&map, leaf).map_err(failure)?;
            let notes = [format!("marker: {} {}", marker.edge, marker.side)];
            render(&small, args.dot, &notes)
        }
        Op::RemyInsert => {
            let marker = marker_from(args, text)?;
            render(&bijections::remy_insert(&map, marker).map_err(failure)?, args.dot, &[])
        }
    };
    Ok(out)
}

pub fn run(args: &ApplyArgs) -> CliResult<String> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Failure(format!("cannot read stdin: {e}")))?;
    apply(args, &text)
}
