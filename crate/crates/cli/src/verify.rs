use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use clap::{Args, ValueEnum};
use num_bigint::BigUint;
use umap_core::bijections::{self, BudSystem, MarkedTriple, Marker};
use umap_core::{
    canonical_orientation, classify, collect_maps, enumerate, formulas, is_canonical,
    precubic_maps, tour, CensusFilter, CountTable, Flavor, GluingCode, HalfType, RibbonMap,
};

use crate::{check_cap, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Formulas,
    Trisection,
    Phi,
    Openglue,
    Remy,
    Sigma,
    Totals,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Ndjson,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Largest edge count to enumerate (default: the cap).
    #[arg(long)]
    max_edges: Option<usize>,
    /// Restrict census-based suites to this type, given as 2h.
    #[arg(long)]
    twice_h: Option<u32>,
    /// Restrict census-based suites to this size (requires --twice-h).
    #[arg(long, requires = "twice_h")]
    m: Option<usize>,
    /// `ndjson` appends one JSON record per identity after the text report.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Debug, serde::Serialize)]
struct Outcome {
    suite: &'static str,
    identity: String,
    pass: bool,
    detail: String,
}

struct Report {
    outcomes: Vec<Outcome>,
}

impl Report {
    fn record(&mut self, suite: &'static str, identity: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.outcomes.push(Outcome {
            suite,
            identity: identity.into(),
            pass,
            detail: detail.into(),
        });
    }
}

fn label(ty: HalfType, m: usize) -> String {
    format!("{ty} m={m}")
}

fn non_orientable(twice_h: u32) -> HalfType {
    HalfType {
        twice_h,
        orientable: false,
    }
}

/// Non-orientable precubic censuses `(2h, m)` with at most `max` edges that
/// are not empty by the closed form.
fn censuses(max: usize, min_twice_h: u32, args: &VerifyArgs) -> Vec<(u32, usize)> {
    if let Some(t) = args.twice_h {
        return match args.m {
            Some(m) => vec![(t, m)],
            None => (1..=max / 2)
                .filter(|&m| edges_of(t, m) <= max)
                .map(|m| (t, m))
                .collect(),
        };
    }
    let mut out = Vec::new();
    for t in min_twice_h.max(1)..=(max as u32 + 1) {
        for m in 1..=max / 2 {
            if edges_of(t, m) <= max && formulas::eta(t, m as u64).is_ok_and(|c| c > BigUint::from(0u32)) {
                out.push((t, m));
            }
        }
    }
    out
}

fn edges_of(twice_h: u32, m: usize) -> usize {
    2 * m + usize::from(twice_h % 2 == 0)
}

fn canonical_maps(ty: HalfType, m: usize, cap: usize) -> CliResult<Vec<RibbonMap>> {
    check_cap(edges_of(ty.twice_h, m), cap)?;
    let maps = precubic_maps(ty, m, cap).map_err(|e| CliError::Usage(e.to_string()))?;
    maps.iter()
        .map(|x| canonical_orientation(x).map_err(|e| CliError::Failure(e.to_string())))
        .collect()
}

fn tau(m: &RibbonMap) -> usize {
    classify(m).map(|c| c.report.tau).unwrap_or(usize::MAX)
}

fn code(m: &RibbonMap) -> Option<GluingCode> {
    GluingCode::encode(m).ok()
}

fn formulas_suite(report: &mut Report, max: usize, cap: usize) -> CliResult<()> {
    for n in 1..=max {
        let filter = CensusFilter {
            precubic: true,
            ..CensusFilter::any()
        };
        let table: CountTable = enumerate(n, &filter, cap).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut covered = BTreeSet::new();
        for t in 0..=(n as u32 + 1) {
            let integral = t % 2 == 0;
            if integral != (n % 2 == 1) {
                continue;
            }
            let m = n / 2;
            let mut kinds = vec![(non_orientable(t), "eta")];
            if integral {
                kinds.push((HalfType { twice_h: t, orientable: true }, "xi"));
            }
            for (ty, family) in kinds {
                let expected = match family {
                    "xi" => formulas::xi(t, m as u64),
                    _ if t == 0 => BigUint::from(0u32),
                    _ => formulas::eta(t, m as u64).map_err(|e| CliError::Failure(e.to_string()))?,
                };
                let found = table.row(ty).count;
                covered.insert(ty);
                if found == 0 && expected == BigUint::from(0u32) {
                    continue;
                }
                report.record(
                    "formulas",
                    format!("{family}({}, {m}) at {n} edges", formulas::type_label(t)),
                    BigUint::from(found) == expected,
                    format!("census {found}, closed form {expected}"),
                );
            }
        }
        let stray: Vec<String> = table
            .rows
            .keys()
            .filter(|k| !covered.contains(k))
            .map(|k| k.to_string())
            .collect();
        report.record(
            "formulas",
            format!("no precubic maps outside the counted families at {n} edges"),
            stray.is_empty(),
            if stray.is_empty() { "none".to_string() } else { stray.join(", ") },
        );
    }
    Ok(())
}

fn precubic_all(n: usize, orientable: Option<bool>, cap: usize) -> CliResult<Vec<RibbonMap>> {
    let filter = CensusFilter {
        precubic: true,
        orientable,
        ..CensusFilter::any()
    };
    let maps = collect_maps(n, &filter, cap).map_err(|e| CliError::Usage(e.to_string()))?;
    maps.iter()
        .map(|x| canonical_orientation(x).map_err(|e| CliError::Failure(e.to_string())))
        .collect()
}

fn trisection_suite(report: &mut Report, max: usize, cap: usize) -> CliResult<()> {
    for n in 1..=max {
        let maps = precubic_all(n, None, cap)?;
        let violations = maps
            .iter()
            .filter(|m| match classify(m) {
                Ok(c) => {
                    let r = &c.report;
                    r.tau as i64 != c.twice_h as i64 + r.t_rl as i64 - r.t_lr as i64
                }
                Err(_) => true,
            })
            .count();
        report.record(
            "trisection",
            format!("tau = 2h + T_RL - T_LR at {n} edges"),
            violations == 0,
            format!("{} maps, {violations} violations", maps.len()),
        );
    }
    Ok(())
}

fn sigma_suite(report: &mut Report, max: usize, cap: usize) -> CliResult<()> {
    for n in 1..=max {
        let maps = precubic_all(n, Some(false), cap)?;
        let violations = maps
            .iter()
            .filter(|m| {
                BudSystem::of(m).map_or(true, |b| !(b.odd_to_even() && b.alpha_pairs_consecutive()))
            })
            .count();
        report.record(
            "sigma",
            format!("sigma sends odd buds to even buds at {n} edges"),
            violations == 0,
            format!("{} maps, {violations} violations", maps.len()),
        );
    }
    Ok(())
}

fn totals_suite(report: &mut Report, max: usize, cap: usize) -> CliResult<()> {
    for n in 1..=max {
        let table: CountTable =
            enumerate(n, &CensusFilter::any(), cap).map_err(|e| CliError::Usage(e.to_string()))?;
        let df = formulas::double_factorial(2 * n as u64 - 1);
        let orientable = BigUint::from(table.orientable_total());
        let total = BigUint::from(table.total());
        report.record(
            "totals",
            format!("orientable total = (2n-1)!! at {n} edges"),
            orientable == df,
            format!("census {orientable}, expected {df}"),
        );
        let all = &df << n;
        report.record(
            "totals",
            format!("total = (2n-1)!! 2^n at {n} edges"),
            total == all,
            format!("census {total}, expected {all}"),
        );
    }
    Ok(())
}

fn phi_suite(report: &mut Report, max: usize, cap: usize, args: &VerifyArgs) -> CliResult<()> {
    for (t, m) in censuses(max, 1, args) {
        let ty = non_orientable(t);
        let maps = canonical_maps(ty, m, cap)?;
        let name = label(ty, m);
        let target = 2 * t as usize - 2;
        let codes: BTreeSet<_> = maps.iter().filter_map(code).collect();
        let mut images = BTreeSet::new();
        let mut pairing: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let (mut sum_bad, mut inv_bad, mut avg_bad, mut canon_bad) = (0, 0, 0, 0);
        for x in &maps {
            let Ok(y) = bijections::phi(x) else {
                canon_bad += 1;
                continue;
            };
            if !is_canonical(&y).unwrap_or(false) || y.euler_type() != x.euler_type() {
                canon_bad += 1;
            }
            let (a, b) = (tau(x), tau(&y));
            *pairing.entry((a, b)).or_default() += 1;
            if a + b != target {
                sum_bad += 1;
            }
            let back = bijections::phi_inverse(&y).ok();
            let forth = bijections::phi_inverse(x).ok().and_then(|z| bijections::phi(&z).ok());
            if back.as_ref() != Some(x) || forth.as_ref() != Some(x) {
                inv_bad += 1;
            }
            let twice = bijections::averaging_involution(x)
                .and_then(|z| bijections::averaging_involution(&z));
            if twice.as_ref() != Ok(x) {
                avg_bad += 1;
            }
            if let Some(c) = code(&y) {
                images.insert(c);
            }
        }
        let pairs: Vec<String> = pairing.iter().map(|((a, b), c)| format!("{a}<->{b}: {c}")).collect();
        report.record(
            "phi",
            format!("{name}: phi is a bijection of the census"),
            images == codes && canon_bad == 0,
            format!("{} maps, {} images", maps.len(), images.len()),
        );
        report.record(
            "phi",
            format!("{name}: tau + tau(phi) = 4h - 2"),
            sum_bad == 0,
            format!("pairing {{{}}}", pairs.join(", ")),
        );
        report.record(
            "phi",
            format!("{name}: phi_inverse undoes phi"),
            inv_bad == 0,
            format!("{inv_bad} violations"),
        );
        report.record(
            "phi",
            format!("{name}: averaging map is an involution"),
            avg_bad == 0,
            format!("{avg_bad} violations"),
        );
        let sum: usize = maps.iter().map(tau).sum();
        let expected = (t as usize - 1) * maps.len();
        report.record(
            "phi",
            format!("{name}: sum of tau = (2h - 1) |census|"),
            sum == expected,
            format!("sum {sum}, expected {expected}"),
        );
    }
    Ok(())
}

fn openglue_suite(report: &mut Report, max: usize, cap: usize, args: &VerifyArgs) -> CliResult<()> {
    for (t, m) in censuses(max, 2, args) {
        if t < 2 {
            continue;
        }
        let ty = non_orientable(t);
        let maps = canonical_maps(ty, m, cap)?;
        let name = label(ty, m);
        let (mut marked, mut bad) = (0u64, 0u64);
        for x in &maps {
            let Ok(c) = classify(x) else {
                bad += 1;
                continue;
            };
            for v in c.report.intertwined() {
                marked += 1;
                let ok = bijections::open(x, v).ok().and_then(|o| {
                    let back = bijections::glue(&o.triple, o.flavor).ok()?;
                    let w = back.vertex_of(o.triple.half_edges()[0]);
                    let again = bijections::open(&back, w).ok()?;
                    (back.same_map_as(x) && again.flavor == o.flavor).then_some(())
                });
                if ok.is_none() {
                    bad += 1;
                }
            }
        }
        report.record(
            "openglue",
            format!("{name}: glue(open(m, v)) = m"),
            bad == 0,
            format!("{marked} marked maps, {bad} violations"),
        );
        let expected = formulas::marked_count(t, m as u64).map_err(|e| CliError::Failure(e.to_string()))?;
        report.record(
            "openglue",
            format!("{name}: marked maps = 4 C(l,3) eta + 3 C(l,3) xi"),
            BigUint::from(marked) == expected,
            format!("census {marked}, formula {expected}"),
        );

        // gluing side: every triple of the lower type with every allowed flavor
        let lower = t - 2;
        let mut sources = Vec::new();
        if lower >= 1 {
            sources.push((canonical_maps(non_orientable(lower), m, cap)?, Flavor::ALL.to_vec()));
        }
        sources.push((
            canonical_maps(HalfType { twice_h: lower, orientable: true }, m, cap)
                .or_else(|e| if lower % 2 == 1 { Ok(Vec::new()) } else { Err(e) })?,
            vec![Flavor::B, Flavor::C, Flavor::D],
        ));
        let mut glued = BTreeSet::new();
        let mut glue_bad = 0u64;
        let mut attempts = 0u64;
        for (lower_maps, flavors) in &sources {
            for n in lower_maps {
                for triple in MarkedTriple::all(n).unwrap_or_default() {
                    for &f in flavors {
                        attempts += 1;
                        let result = bijections::glue(&triple, f).ok().and_then(|g| {
                            let w = g.vertex_of(triple.half_edges()[0]);
                            let opened = bijections::open(&g, w).ok()?;
                            let same = opened.flavor == f
                                && opened.triple.half_edges() == triple.half_edges()
                                && opened.triple.map.same_map_as(&triple.map);
                            let label = tour(&g).ok()?.label(g.rotation(w)[0]);
                            same.then(|| (code(&g), label))
                        });
                        match result {
                            Some(key) => {
                                glued.insert(key);
                            }
                            None => glue_bad += 1,
                        }
                    }
                }
            }
        }
        report.record(
            "openglue",
            format!("{name}: open(glue(t, F)) = (t, F), gluings distinct"),
            glue_bad == 0 && glued.len() as u64 == attempts && attempts == marked,
            format!("{attempts} gluings, {} distinct, {glue_bad} violations", glued.len()),
        );
    }
    Ok(())
}

fn remy_suite(report: &mut Report, max: usize, cap: usize) -> CliResult<()> {
    let ty = non_orientable(1);
    for m in 1..max / 2 {
        check_cap(2 * (m + 1), cap)?;
        let big = precubic_maps(ty, m + 1, cap).map_err(|e| CliError::Usage(e.to_string()))?;
        let small = precubic_maps(ty, m, cap).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut images = BTreeSet::new();
        let (mut pairs, mut bad) = (0u64, 0u64);
        for x in &big {
            let root = x.root_vertex();
            for leaf in x.leaves().into_iter().filter(|&v| v != root) {
                pairs += 1;
                let ok = bijections::remy_delete(x, leaf).ok().and_then(|(s, marker)| {
                    let back = bijections::remy_insert(&s, marker).ok()?;
                    let new_leaf = back.vertex_count() - 1;
                    let same = code(&back) == code(x)
                        && tour(x).ok()?.label(x.rotation(leaf)[0])
                            == tour(&back).ok()?.label(back.rotation(new_leaf)[0]);
                    let a = s.edges()[marker.edge][0];
                    let step = tour(&s).ok()?.step_along(a, marker.side)?;
                    images.insert((code(&s), step));
                    same.then_some(())
                });
                if ok.is_none() {
                    bad += 1;
                }
            }
        }
        let sides: u64 = small.iter().map(|s| Marker::all(s).len() as u64).sum();
        report.record(
            "remy",
            format!("N_1/2 m={}: insert(delete(m, leaf)) = (m, leaf)", m + 1),
            bad == 0,
            format!("{pairs} marked maps, {bad} violations"),
        );
        report.record(
            "remy",
            format!("N_1/2 m={m}: m eta(m+1) = 4m eta(m), deletion is bijective"),
            images.len() as u64 == pairs && pairs == sides && sides == 4 * m as u64 * small.len() as u64,
            format!("{pairs} marked maps, {} distinct images, {sides} edge-sides", images.len()),
        );
    }
    Ok(())
}

pub fn run(args: &VerifyArgs, cap: usize) -> CliResult<String> {
    let max = args.max_edges.unwrap_or(cap);
    check_cap(max, cap)?;
    if let Some(t) = args.twice_h {
        if t == 0 {
            return Err(CliError::Usage("census suites need a non-orientable type, 2h >= 1".into()));
        }
        if let Some(m) = args.m {
            check_cap(edges_of(t, m), cap)?;
        }
    }
    let mut report = Report { outcomes: Vec::new() };
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    if wants(Suite::Formulas) {
        formulas_suite(&mut report, max, cap)?;
    }
    if wants(Suite::Totals) {
        totals_suite(&mut report, max.min(6), cap)?;
    }
    if wants(Suite::Trisection) {
        trisection_suite(&mut report, max, cap)?;
    }
    if wants(Suite::Sigma) {
        sigma_suite(&mut report, max, cap)?;
    }
    if wants(Suite::Phi) {
        phi_suite(&mut report, max, cap, args)?;
    }
    if wants(Suite::Openglue) {
        openglue_suite(&mut report, max, cap, args)?;
    }
    if wants(Suite::Remy) {
        remy_suite(&mut report, max, cap)?;
    }

    let mut out = String::new();
    for o in &report.outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}\t{}\t{}\t{}", o.suite, o.identity, o.detail);
    }
    let failed = report.outcomes.iter().filter(|o| !o.pass).count();
    let passed = report.outcomes.len() - failed;
    let _ = writeln!(out, "{passed} passed, {failed} failed");
    if args.format == ReportFormat::Ndjson {
        for o in &report.outcomes {
            let _ = writeln!(out, "{}", serde_json::to_string(o).expect("outcome serializes"));
        }
        let summary = serde_json::json!({"summary": true, "passed": passed, "failed": failed});
        let _ = writeln!(out, "{summary}");
    }
    if failed > 0 {
        return Err(CliError::Report(out));
    }
    Ok(out)
}
