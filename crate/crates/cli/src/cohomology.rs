//! `cocycle-check`, `classify`, `rep`, `refine` and `glue`.

use crate::input::{self, CliError};
use crate::report::{Outcome, Row};
use crate::Settings;
use posetcoh::cocycle::{
    check_cocycle, check_path_independence, find_intertwiner, induced_representation, trivialize,
    CocycleError, CocycleFailure, FundamentalCycle, PathIndependence,
};
use posetcoh::glue::{glue as glue_locals, GlueError};
use posetcoh::homotopy::{pi1_presentation, simplify_presentation, RelationMode};
use posetcoh::io::{matrix, CocycleJson, LocalsJson};
use posetcoh::refinement::{check_refinement, RefineError, Refinement};
use posetcoh::{Cocycle, Element, Intertwiner, Poset, Region};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::Path;

fn describe_cycle(c: &FundamentalCycle) -> String {
    format!(
        "loop through {} along {} has ‖z − 1‖ = {:e}",
        c.simplex, c.path, c.deviation
    )
}

fn describe_failure(f: &CocycleFailure) -> String {
    match f {
        CocycleFailure::Missing { simplex } => format!("no entry for {simplex}"),
        CocycleFailure::Shape {
            simplex,
            rows,
            cols,
        } => format!("entry at {simplex} is {rows}×{cols}"),
        CocycleFailure::Unitarity { simplex, defect } => {
            format!("entry at {simplex} is not unitary (defect {defect:e})")
        }
        CocycleFailure::Identity { simplex, residual } => {
            format!("cocycle identity fails on {simplex} (residual {residual:e})")
        }
        CocycleFailure::Locality { simplex, residual } => {
            format!("entry at {simplex} lies outside the algebra of its support (residual {residual:e})")
        }
    }
}

pub fn independence_row(id: &str, anchor: &str, r: &PathIndependence) -> Row {
    Row::check(id, anchor, r.independent, || {
        r.witness.as_ref().map(describe_cycle).unwrap_or_default()
    })
    .with_value(json!({
        "basepoint": r.basepoint,
        "cycles_checked": r.cycles_checked,
        "max_deviation": r.max_deviation,
    }))
}

/// Rows of a cocycle-identity report; the locality row only with a net.
pub fn cocycle_rows(
    prefix: &str,
    report: &posetcoh::cocycle::CocycleReport,
    with_net: bool,
) -> Vec<Row> {
    let first = |pred: fn(&CocycleFailure) -> bool| report.failures.iter().find(|f| pred(f));
    let mut checks = vec![
        (
            "entries",
            "one unitary per simplex",
            first(|f| {
                matches!(
                    f,
                    CocycleFailure::Missing { .. } | CocycleFailure::Shape { .. }
                )
            }),
            None,
        ),
        (
            "unitarity",
            "unitary values",
            first(|f| matches!(f, CocycleFailure::Unitarity { .. })),
            Some(report.max_unitarity_defect),
        ),
        (
            "identity",
            "cocycle identity z(∂0c) z(∂2c) = z(∂1c)",
            first(|f| matches!(f, CocycleFailure::Identity { .. })),
            Some(report.max_identity_residual),
        ),
    ];
    if with_net {
        checks.push((
            "locality",
            "z(b) in the algebra of |b|",
            first(|f| matches!(f, CocycleFailure::Locality { .. })),
            Some(report.max_locality_residual),
        ));
    }
    checks
        .into_iter()
        .map(|(name, anchor, failure, residual)| {
            let row = Row::check(
                format!("{prefix}.{name}"),
                anchor,
                failure.is_none(),
                || failure.map(describe_failure).unwrap_or_default(),
            );
            match residual {
                Some(r) => row.with_value(json!({ "max_residual": r })),
                None => row,
            }
        })
        .collect()
}

fn computation_error(id: &str, anchor: &str, e: impl std::fmt::Display) -> Row {
    Row::fail(id, anchor, e.to_string())
}

pub fn check(
    path: &Path,
    cocycle: &Path,
    net: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let z = input::cocycle(cocycle, &p)?;
    let net = net
        .map(|n| input::net(Some(n), &p, z.d(), &s.tol))
        .transpose()?;
    let report = check_cocycle(&z, &p, net.as_ref(), RelationMode::Generating, &s.tol);
    let mut rows = cocycle_rows("cocycle", &report, net.is_some());
    if !report.passed() {
        return Ok(rows);
    }
    let anchor = "path-independence";
    let independence = match check_path_independence(&z, &p, z.domain(), &s.tol) {
        Ok(r) => r,
        Err(e) => {
            rows.push(computation_error("cocycle.path_independence", anchor, e));
            return Ok(rows);
        }
    };
    rows.push(independence_row(
        "cocycle.path_independence",
        anchor,
        &independence,
    ));
    match trivialize(&z, &p, z.domain(), &s.tol) {
        Ok(t) => rows.push(
            Row::check(
                "cocycle.trivial_iff_independent",
                "trivial exactly when path-independent",
                t.is_trivial() == independence.independent,
                || {
                    format!(
                        "trivialization says {}, path-independence says {}",
                        t.is_trivial(),
                        independence.independent
                    )
                },
            )
            .with_value(json!({ "trivial": t.is_trivial() })),
        ),
        Err(e) => rows.push(computation_error(
            "cocycle.trivial_iff_independent",
            "trivial exactly when path-independent",
            e,
        )),
    }
    Ok(rows)
}

pub fn classify(
    path: &Path,
    cocycles: &[std::path::PathBuf],
    net: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let zs = cocycles
        .iter()
        .map(|c| input::cocycle(c, &p))
        .collect::<Result<Vec<_>, _>>()?;
    let d = zs[0].d();
    if let Some((i, z)) = zs
        .iter()
        .enumerate()
        .find(|(_, z)| z.d() != d || z.domain() != zs[0].domain())
    {
        return Err(CliError::input(
            &cocycles[i],
            format!(
                "dimension {} or domain differs from the first cocycle",
                z.d()
            ),
        ));
    }
    let net = input::net(net, &p, d, &s.tol)?;
    let trivial: Vec<Result<bool, CocycleError>> = zs
        .par_iter()
        .map(|z| trivialize(z, &p, z.domain(), &s.tol).map(|t| t.is_trivial()))
        .collect();
    let mut representatives: Vec<usize> = Vec::new();
    let mut rows = Vec::new();
    for (i, z) in zs.iter().enumerate() {
        let id = format!("cocycle.{i:03}");
        let anchor = "unitary equivalence class";
        let trivial = match &trivial[i] {
            Ok(t) => *t,
            Err(e) => {
                rows.push(computation_error(&id, anchor, e));
                continue;
            }
        };
        let mut class = None;
        for (k, &r) in representatives.iter().enumerate() {
            match find_intertwiner(z, &zs[r], &p, &net, true, &s.tol) {
                Ok(Some(_)) => {
                    class = Some(k);
                    break;
                }
                Ok(None) => {}
                Err(e) => return Err(CliError::input(&cocycles[i], e)),
            }
        }
        let class = class.unwrap_or_else(|| {
            representatives.push(i);
            representatives.len() - 1
        });
        rows.push(Row::info(
            id,
            anchor,
            json!({
                "file": cocycles[i].display().to_string(),
                "class": class,
                "trivial": trivial,
            }),
        ));
    }
    rows.push(Row::info(
        "classes",
        "number of equivalence classes",
        representatives.len(),
    ));
    Ok(rows)
}

pub fn rep(
    path: &Path,
    cocycle: &Path,
    basepoint: usize,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let z = input::cocycle(cocycle, &p)?;
    let basepoint = input::element(&p, basepoint, "basepoint")?;
    let g = pi1_presentation(&p, basepoint).map_err(|e| CliError::Usage(e.to_string()))?;
    let anchor = "induced representation of the first homotopy group";
    let r = match induced_representation(&z, &g, &s.tol) {
        Ok(r) => r,
        Err(e) => return Ok(vec![computation_error("rep.relations", anchor, e)]),
    };
    let simplified = simplify_presentation(&g);
    let images: Vec<_> = simplified
        .generators
        .iter()
        .map(|&k| {
            let m = &r.images[k];
            let mut entry = json!({
                "generator": k,
                "simplex": g.generators[k],
                "image": matrix::to_rows(m),
            });
            if m.nrows() == 1 {
                entry["phase"] = json!(m[(0, 0)].arg());
            }
            entry
        })
        .collect();
    Ok(vec![
        Row::new("rep.relations", anchor, Outcome::Pass).with_value(
            json!({ "max_residual": r.max_relation_residual, "relations": g.relations.len() }),
        ),
        Row::info(
            "rep.images",
            "images of the surviving generators",
            json!({ "shape": simplified.shape, "images": images }),
        ),
    ])
}

/// A refinement: its members and optionally the choice function.
#[derive(Debug, Deserialize)]
struct SubJson {
    members: Vec<Element>,
    #[serde(default)]
    choice: Option<Vec<Element>>,
}

pub fn refine(
    path: &Path,
    sub: &Path,
    cocycle: &Path,
    arrow: Option<(&Path, &Path)>,
    output: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let z = input::cocycle(cocycle, &p)?;
    let request: SubJson = input::read_json(sub)?;
    if let Some(&e) = request.members.iter().find(|&&e| e >= p.len()) {
        return Err(CliError::input(sub, format!("member {e} is out of range")));
    }
    let region = Region::from_members(p.len(), request.members.iter().copied());
    let r = match Refinement::new(&p, region, request.choice) {
        Ok(r) => r,
        Err(RefineError::NotARefinement(check)) => {
            return Ok(vec![Row::fail(
                "refine.refinement",
                "locally relatively connected refinement",
                serde_json::to_string(&check).expect("checks serialize"),
            )])
        }
        Err(e) => return Err(CliError::input(sub, e)),
    };
    let (z1, t) = match arrow {
        Some((target, arrow)) => (input::cocycle(target, &p)?, input::intertwiner(arrow)?),
        None => (
            z.clone(),
            Intertwiner::identity(&Region::full(p.len()), z.d()),
        ),
    };
    let report = match check_refinement(&p, &r, &z, &z1, &t) {
        Ok(report) => report,
        Err(e) => {
            return Ok(vec![computation_error(
                "refine.extension",
                "extension along the choice",
                e,
            )])
        }
    };
    let unitary = s.tol.unitary;
    let rows = vec![
        Row::new(
            "refine.refinement",
            "locally relatively connected refinement",
            Outcome::Pass,
        )
        .with_value(json!({ "members": r.sub().len() })),
        Row::check(
            "refine.round_trip",
            "restriction after extension is the identity",
            report.round_trip_exact,
            || format!("entries differ by up to {:e}", report.round_trip_distance),
        ),
        Row::check(
            "refine.unit_unitary",
            "the unit is unitary",
            report.unit_unitarity_defect <= unitary,
            || format!("defect {:e}", report.unit_unitarity_defect),
        )
        .with_value(json!({ "defect": report.unit_unitarity_defect })),
        Row::check(
            "refine.unit_intertwines",
            "the unit intertwines z and its extended restriction",
            report.unit_intertwining_residual <= unitary,
            || format!("residual {:e}", report.unit_intertwining_residual),
        )
        .with_value(json!({ "residual": report.unit_intertwining_residual })),
        Row::check(
            "refine.naturality",
            "naturality of the unit",
            report.naturality_residual <= unitary,
            || format!("residual {:e}", report.naturality_residual),
        )
        .with_value(json!({ "residual": report.naturality_residual })),
    ];
    if let Some(out) = output {
        let extended = r
            .extend(&p, &r.restrict(&z))
            .expect("extension succeeded during the check");
        input::write_json(out, &CocycleJson::from_cocycle(&extended, p.len()))?;
    }
    Ok(rows)
}

fn locals_from_json(
    p: &Poset,
    fam: &posetcoh::glue::PunctureFamily,
    json: LocalsJson,
    path: &Path,
) -> Result<Vec<Cocycle>, CliError> {
    let mut by_id: BTreeMap<String, _> = BTreeMap::new();
    for local in json.locals {
        if fam.get(&local.id).is_none() {
            return Err(CliError::input(
                path,
                format!("no puncture named {:?}", local.id),
            ));
        }
        if by_id.insert(local.id.clone(), local.entries).is_some() {
            return Err(CliError::input(
                path,
                format!("puncture {:?} appears twice", local.id),
            ));
        }
    }
    let mut out = Vec::with_capacity(fam.len());
    for x in fam.punctures() {
        let entries = by_id.remove(&x.id).ok_or_else(|| {
            CliError::input(path, format!("no local cocycle for puncture {:?}", x.id))
        })?;
        let json = CocycleJson {
            d: None,
            domain: Some(x.members.members().to_vec()),
            entries,
        };
        out.push(
            json.to_cocycle(p)
                .map_err(|e| CliError::input(path, format!("puncture {:?}: {e}", x.id)))?,
        );
    }
    Ok(out)
}

pub fn glue(
    path: &Path,
    punctures: &Path,
    locals: Option<&Path>,
    cocycle: Option<&Path>,
    output: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let fam = input::punctures(punctures, &p)?;
    let (locals, original) = match (locals, cocycle) {
        (Some(l), _) => (locals_from_json(&p, &fam, input::read_json(l)?, l)?, None),
        (None, Some(c)) => {
            let z = input::cocycle(c, &p)?;
            (fam.restrict(&z), Some(z))
        }
        (None, None) => return Err(CliError::Usage("give --locals or --cocycle".into())),
    };
    let cover = ("glue.cover", "the punctures cover every simplex");
    let overlap = ("glue.overlaps", "locals agree on overlaps");
    let glued = match glue_locals(&fam, &locals, &p, &s.tol) {
        Ok(g) => g,
        Err(e @ (GlueError::IncompleteCover { .. } | GlueError::LocalMissingEntry { .. })) => {
            return Ok(vec![Row::fail(cover.0, cover.1, e.to_string())])
        }
        Err(e @ GlueError::OverlapConflict { .. }) => {
            return Ok(vec![
                Row::new(cover.0, cover.1, Outcome::Pass),
                Row::fail(overlap.0, overlap.1, e.to_string()),
            ])
        }
        Err(e) => return Err(CliError::input(punctures, e)),
    };
    let mut rows = vec![
        Row::new(cover.0, cover.1, Outcome::Pass),
        Row::new(overlap.0, overlap.1, Outcome::Pass),
    ];
    for local in &glued.locals {
        rows.push(Row::info(
            format!("glue.local.{}", local.id),
            "path-independence on the puncture",
            json!({ "independent": local.independent, "max_deviation": local.max_deviation }),
        ));
    }
    if let Some(global) = &glued.global {
        let mut row = Row::info(
            "glue.global",
            "path-independence of the glued cocycle",
            json!({
                "independent": global.independent,
                "max_deviation": global.max_deviation,
                "all_locals_independent": glued.all_locals_independent,
            }),
        );
        if let Some(w) = &global.witness {
            row = row.with_witness(describe_cycle(w));
        }
        rows.push(row);
    }
    if let Some(z) = original {
        rows.push(Row::check(
            "glue.round_trip",
            "restriction then gluing returns the cocycle",
            glued.cocycle == z,
            || {
                let b = z
                    .entries()
                    .iter()
                    .find(|(b, m)| glued.cocycle.entries().get(b) != Some(m))
                    .map(|(b, _)| b.to_string())
                    .unwrap_or_else(|| "domain".into());
                format!("glued cocycle differs at {b}")
            },
        ));
    }
    if let Some(out) = output {
        input::write_json(out, &CocycleJson::from_cocycle(&glued.cocycle, p.len()))?;
    }
    Ok(rows)
}
