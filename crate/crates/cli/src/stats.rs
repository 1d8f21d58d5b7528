//! `umap stats`: intertwined-node, flavor and dominance distributions by type.

use std::fmt::Write as _;

use clap::Args;
use umap_core::{
    canonical_orientation, collect_maps, enumerate, CensusFilter, CountTable, DominanceTable,
    HalfType, MapReport,
};

use crate::{check_cap, CliError, CliResult, FilterArgs, Format};

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Number of edges; combine with the filter flags.
    #[arg(long, short = 'n', conflicts_with = "twice_h")]
    edges: Option<usize>,
    /// Precubic census of one type, given as 2h (requires --m).
    #[arg(long, requires = "m")]
    twice_h: Option<u32>,
    /// Size of the precubic census.
    #[arg(long, requires = "twice_h")]
    m: Option<usize>,
    /// With --twice-h: use the orientable type instead of the non-orientable one.
    #[arg(long = "orientable-type")]
    orientable_type: bool,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// One NDJSON report per precubic map instead of the per-type table.
    #[arg(long, conflicts_with = "dominant")]
    maps: bool,
    /// Count maps whose scheme is cubic, over all maps of each type.
    #[arg(long)]
    dominant: bool,
}

fn selection(args: &StatsArgs) -> CliResult<(usize, CensusFilter)> {
    match (args.edges, args.twice_h, args.m) {
        (Some(n), None, _) => Ok((n, args.filter.filter())),
        (None, Some(t), Some(m)) => {
            let ty = HalfType::new(t, args.orientable_type)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((umap_core::precubic_edges(ty, m), CensusFilter::precubic_of(ty)))
        }
        _ => Err(CliError::Usage("give --edges, or --twice-h with --m".into())),
    }
}

fn tau_list(tau: &std::collections::BTreeMap<usize, u64>) -> String {
    let parts: Vec<String> = tau.iter().map(|(t, c)| format!("{t}:{c}")).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(",")
    }
}

fn distribution_tsv(table: &CountTable) -> String {
    let mut out = String::from("twice_h\torientable\tcount\tprecubic\ttau_sum\ttau\tA\tB\tC\tD\tdominant\n");
    for (k, r) in &table.rows {
        let [a, b, c, d] = r.flavors;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{a}\t{b}\t{c}\t{d}\t{}",
            k.twice_h,
            k.orientable,
            r.count,
            r.precubic,
            r.tau_sum(),
            tau_list(&r.tau),
            r.dominant
        );
    }
    out
}

fn dominance(table: &DominanceTable, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Tsv {
        out.push_str("twice_h\torientable\tcount\tdominant\n");
    }
    for (k, &(count, dominant)) in &table.rows {
        match format {
            Format::Tsv => {
                let _ = writeln!(out, "{}\t{}\t{count}\t{dominant}", k.twice_h, k.orientable);
            }
            Format::Ndjson => {
                let value = serde_json::json!({
                    "twice_h": k.twice_h,
                    "orientable": k.orientable,
                    "count": count,
                    "dominant": dominant,
                });
                let _ = writeln!(out, "{value}");
            }
        }
    }
    out
}

pub fn run(args: &StatsArgs, cap: usize) -> CliResult<String> {
    let (n, filter) = selection(args)?;
    check_cap(n, cap)?;
    let usage = |e: umap_core::EnumerationError| CliError::Usage(e.to_string());
    if args.dominant {
        let table: DominanceTable = enumerate(n, &filter, cap).map_err(usage)?;
        return Ok(dominance(&table, args.format));
    }
    if args.maps {
        let precubic = CensusFilter {
            precubic: true,
            ..filter
        };
        let mut out = String::new();
        for m in collect_maps(n, &precubic, cap).map_err(usage)? {
            let m = canonical_orientation(&m).map_err(|e| CliError::Failure(e.to_string()))?;
            let report = MapReport::of(&m).map_err(|e| CliError::Failure(e.to_string()))?;
            out.push_str(&report.to_ndjson());
            out.push('\n');
        }
        return Ok(out);
    }
    let table: CountTable = enumerate(n, &filter, cap).map_err(usage)?;
    Ok(match args.format {
        Format::Tsv => distribution_tsv(&table),
        Format::Ndjson => table.to_ndjson(),
    })
}
