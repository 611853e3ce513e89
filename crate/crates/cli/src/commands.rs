//! One function per subcommand, each turning parsed flags into a [`Report`].

use std::time::Instant;

use carlitz_core::analysis::{
    bounds_for_rep, census_disc_rows, census_trace_rows, is_complete, mann_rows, search_complete,
    theorem1_verify, theorem2_bounds, verify_prop, BoundsReport, CensusRow, SearchMode,
};
use carlitz_core::carlitz::{ParsedRep, RankConfig, RankSearch, RANK_MAX_ORDER};
use carlitz_core::repro::{run_criterion, time_limit_secs, CriterionResult, CRITERIA};
use carlitz_core::{Error, Field, Poly, ValueTable};
use serde_json::json;

use crate::output::Report;
use crate::CliError;

/// Exactly one of `--poly`, `--table`, `--rep`.
pub struct MapInput<'a> {
    pub poly: Option<&'a str>,
    pub table: Option<&'a str>,
    pub rep: Option<&'a str>,
}

impl MapInput<'_> {
    fn resolve(&self, field: &Field) -> Result<(ValueTable, Option<ParsedRep>), CliError> {
        match (self.poly, self.table, self.rep) {
            (Some(p), None, None) => Ok((p.parse::<Poly>()?.to_table(field)?, None)),
            (None, Some(t), None) => Ok((ValueTable::from_json(field, t)?, None)),
            (None, None, Some(r)) => {
                let rep = ParsedRep::parse(field, r)?;
                Ok((rep.to_table(field), Some(rep)))
            }
            _ => Err(CliError::Usage(
                "give exactly one of --poly, --table, --rep".into(),
            )),
        }
    }
}

fn field_json(field: &Field) -> serde_json::Value {
    json!({ "spec": field.spec_string(), "q": field.order() })
}

pub fn analyze(
    field: &Field,
    input: MapInput<'_>,
    max_n: Option<usize>,
    config: RankConfig,
) -> Result<Report, CliError> {
    let (table, rep) = input.resolve(field)?;
    let mut report = is_complete(field, &table)?;
    if report.is_perm && field.order() <= RANK_MAX_ORDER {
        let max_n = max_n.unwrap_or(field.size());
        let search = RankSearch::new(field, max_n, config)?;
        report.crk = Some(search.rank(&table, max_n)?);
    }
    let poly = table.interpolate(field)?;
    let mut payload = json!({
        "field": field_json(field),
        "table": table,
        "poly": poly.to_string(),
        "poly_pretty": poly.pretty(field),
        "is_permutation": report.is_perm,
        "is_complete": report.is_complete,
        "linearity": report.linearity,
        "value_set_size": table.value_set_size(),
        "v_f_plus_x_size": report.v_f_plus_x,
        "crk": report.crk,
    });
    if let Some(ParsedRep::Normalized(rep)) = &rep {
        payload["convergent"] = serde_json::to_value(rep.convergent(field)).expect("serializes");
        payload["poles"] = serde_json::to_value(rep.poles(field)).expect("serializes");
    }
    let crk = report.crk.map_or(String::new(), |r| r.to_string());
    let linearity = report.linearity.map_or(String::new(), |l| l.to_string());
    Ok(Report::new("analyze", payload).rows(
        vec![
            "field",
            "is_permutation",
            "is_complete",
            "linearity",
            "value_set_size",
            "v_f_plus_x_size",
            "crk",
        ],
        vec![vec![
            field.spec_string(),
            report.is_perm.to_string(),
            report.is_complete.to_string(),
            linearity,
            table.value_set_size().to_string(),
            report.v_f_plus_x.to_string(),
            crk,
        ]],
    ))
}

pub fn rank(
    field: &Field,
    input: MapInput<'_>,
    max_n: Option<usize>,
    config: RankConfig,
) -> Result<Report, CliError> {
    let (table, _) = input.resolve(field)?;
    let max_n = max_n.unwrap_or(field.size());
    let crk = RankSearch::new(field, max_n, config)?.rank(&table, max_n)?;
    let payload = json!({ "field": field_json(field), "max_n": max_n, "crk": crk });
    Ok(Report::new("rank", payload).rows(
        vec!["field", "max_n", "crk"],
        vec![vec![
            field.spec_string(),
            max_n.to_string(),
            crk.to_string(),
        ]],
    ))
}

pub fn verify_thm1(field: &Field) -> Result<Report, CliError> {
    let r = theorem1_verify(field)?;
    let rows = r
        .complete_linearities
        .iter()
        .map(|(l, count)| {
            vec![
                r.q.to_string(),
                l.to_string(),
                count.to_string(),
                (*l < r.linearity_threshold).to_string(),
            ]
        })
        .collect();
    let ok = r.holds;
    Ok(Report::new(
        "verify-thm1",
        json!({ "field": field_json(field), "report": r }),
    )
    .rows(
        vec!["q", "linearity", "complete_tables", "below_threshold"],
        rows,
    )
    .ok(ok))
}

fn census_report(
    command: &'static str,
    field: &Field,
    rows: Vec<CensusRow>,
) -> Result<Report, CliError> {
    let mismatches = rows.iter().filter(|r| !r.holds()).count();
    let flat = rows
        .iter()
        .map(|r| {
            vec![
                r.c0.to_string(),
                r.alpha_n.to_string(),
                r.parity
                    .map_or(String::new(), |p| format!("{p:?}").to_lowercase()),
                r.predicted.to_string(),
                r.actual.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(
        command,
        json!({ "field": field_json(field), "mismatches": mismatches, "rows": rows }),
    )
    .rows(vec!["c0", "alpha_n", "parity", "predicted", "actual"], flat)
    .ok(mismatches == 0))
}

pub fn census_disc(field: &Field) -> Result<Report, CliError> {
    census_report("census-disc", field, census_disc_rows(field)?)
}

pub fn census_trace(field: &Field) -> Result<Report, CliError> {
    census_report("census-trace", field, census_trace_rows(field)?)
}

pub fn verify_prop_cmd(field: &Field, n: usize) -> Result<Report, CliError> {
    let r = verify_prop(field, n)?;
    let rows = r
        .rows
        .iter()
        .map(|row| {
            vec![
                row.c0.to_string(),
                row.c1.map_or(String::new(), |c| c.to_string()),
                row.predicted.map_or(String::new(), |p| p.to_string()),
                row.actual.to_string(),
            ]
        })
        .collect();
    let ok = r.holds;
    Ok(Report::new(
        "verify-prop",
        json!({ "field": field_json(field), "report": r }),
    )
    .rows(vec!["c0", "c1", "predicted", "actual"], rows)
    .ok(ok))
}

pub fn bounds(field: &Field, rep: &str, table: Option<&str>) -> Result<Report, CliError> {
    let rep = match ParsedRep::parse(field, rep)? {
        ParsedRep::Normalized(r) => r,
        ParsedRep::Full(_) => {
            return Err(CliError::Usage(
                "bounds takes a normalized representation `n; c_0,...,c_{n-1}`".into(),
            ))
        }
    };
    let r: BoundsReport = match table {
        Some(t) => {
            let f = ValueTable::from_json(field, t)?;
            theorem2_bounds(field, &rep.convergent(field), &f, rep.n())?
        }
        None => bounds_for_rep(field, &rep)?,
    };
    let row = vec![
        field.spec_string(),
        rep.to_string(),
        r.lower.to_string(),
        r.upper.to_string(),
        r.actual.to_string(),
    ];
    let ok = r.holds;
    Ok(Report::new(
        "bounds",
        json!({ "field": field_json(field), "rep": rep, "report": r }),
    )
    .rows(vec!["field", "rep", "lower", "upper", "actual"], vec![row])
    .ok(ok))
}

pub fn search(
    field: &Field,
    n: usize,
    cap: usize,
    seed: u64,
    sample: Option<u64>,
    config: RankConfig,
) -> Result<Report, CliError> {
    let mode = match sample {
        Some(samples) => SearchMode::Sample { seed, samples },
        None => SearchMode::Exhaustive,
    };
    let r = search_complete(field, n, cap, mode, config)?;
    let rows = r
        .witnesses
        .iter()
        .map(|w| {
            vec![
                w.rep.to_string(),
                w.linearity.to_string(),
                w.crk.map_or(String::new(), |c| c.to_string()),
            ]
        })
        .collect();
    Ok(Report::new(
        "search-complete",
        json!({ "field": field_json(field), "report": r }),
    )
    .rows(vec!["rep", "linearity", "crk"], rows))
}

pub fn mann(field: &Field) -> Result<Report, CliError> {
    let rows = mann_rows(field);
    let complete = rows.iter().filter(|r| r.complete).count();
    let disagreements = rows.iter().filter(|r| r.complete != r.criterion).count();
    let flat = rows
        .iter()
        .map(|r| {
            vec![
                r.a.to_string(),
                r.criterion.to_string(),
                r.complete.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(
        "mann",
        json!({
            "field": field_json(field),
            "complete": complete,
            "disagreements": disagreements,
            "rows": rows,
        }),
    )
    .rows(vec!["a", "criterion", "complete"], flat)
    .ok(disagreements == 0))
}

/// Runs the selected criteria (all when `only` is empty). Timings go to
/// stderr so the report itself stays byte-identical across runs.
pub fn repro_paper(only: &[u8]) -> Result<Report, CliError> {
    let mut results: Vec<CriterionResult> = Vec::new();
    for (id, _) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let r = match run_criterion(id) {
            Ok(r) => r,
            Err(Error::CapExceeded(msg)) => return Err(Error::CapExceeded(msg).into()),
            Err(e) => CriterionResult {
                id,
                name: CRITERIA[usize::from(id) - 1].1,
                passed: false,
                detail: format!("error: {e}"),
            },
        };
        let secs = start.elapsed().as_secs_f64();
        eprintln!(
            "criterion {id}: {:.2}s (limit {}s)",
            secs,
            time_limit_secs(id)
        );
        results.push(r);
    }
    let ok = results.iter().all(|r| r.passed);
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                if r.passed { "PASS" } else { "FAIL" }.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    Ok(Report::new("repro-paper", json!({ "criteria": results }))
        .rows(vec!["id", "criterion", "result", "detail"], rows)
        .ok(ok))
}
