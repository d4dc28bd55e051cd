//! `tensor`, `symmetry`, `statistics`, `conjugate` and `axioms`.

use crate::cohomology::{cocycle_rows, independence_row};
use crate::input::{self, CliError};
use crate::report::{Outcome, Row};
use crate::{SectorInputs, Settings};
use posetcoh::cocycle::check_cocycle;
use posetcoh::glue::PunctureFamily;
use posetcoh::homotopy::RelationMode;
use posetcoh::io::{matrix, CocycleJson, IntertwinerJson};
use posetcoh::linalg::{dist, identity};
use posetcoh::sector::{Battery, SectorContext, SectorError};
use posetcoh::{Cocycle, Intertwiner, LocalNet, Poset, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::Path;

const DUALITY: (&str, &str) = ("sector.duality", "punctured Haag duality");

/// Rows for an error raised by a sector operation.
fn sector_failure(command: &str, e: SectorError) -> Vec<Row> {
    match e {
        SectorError::DualityRefused { .. } => vec![Row::fail(DUALITY.0, DUALITY.1, e.to_string())],
        SectorError::NotPathIndependent { .. } => vec![
            Row::new(DUALITY.0, DUALITY.1, Outcome::Pass),
            Row::fail(
                "sector.admissible",
                "path-independent on every puncture",
                e.to_string(),
            ),
        ],
        e => vec![
            Row::new(DUALITY.0, DUALITY.1, Outcome::Pass),
            Row::fail(
                format!("{command}.computation"),
                "well-defined construction",
                e.to_string(),
            ),
        ],
    }
}

struct Loaded {
    p: Poset,
    net: LocalNet,
    fam: PunctureFamily,
}

fn load(poset: &Path, inputs: &SectorInputs, d: usize, s: &Settings) -> Result<Loaded, CliError> {
    let p = input::poset(poset)?;
    let net = input::net(inputs.net.as_deref(), &p, d, &s.tol)?;
    let fam = input::punctures(&inputs.punctures, &p)?;
    Ok(Loaded { p, net, fam })
}

/// Loads the poset, then the cocycles against it, then the net sized by
/// the first cocycle.
fn load_with(
    poset: &Path,
    cocycles: &[&Path],
    inputs: &SectorInputs,
    s: &Settings,
) -> Result<(Loaded, Vec<Cocycle>), CliError> {
    let p = input::poset(poset)?;
    let zs = cocycles
        .iter()
        .map(|c| input::cocycle(c, &p))
        .collect::<Result<Vec<_>, _>>()?;
    let d = zs[0].d();
    let net = input::net(inputs.net.as_deref(), &p, d, &s.tol)?;
    let fam = input::punctures(&inputs.punctures, &p)?;
    Ok((Loaded { p, net, fam }, zs))
}

fn context<'a>(l: &'a Loaded, s: &Settings) -> Result<SectorContext<'a>, SectorError> {
    SectorContext::new(&l.p, &l.net, &l.fam, s.tol)
}

/// Runs `body` in a context, turning sector errors into failing rows.
fn run_sector(
    command: &str,
    l: &Loaded,
    s: &Settings,
    body: impl FnOnce(&SectorContext) -> Result<Vec<Row>, SectorError>,
) -> Vec<Row> {
    match context(l, s).and_then(|ctx| body(&ctx)) {
        Ok(mut rows) => {
            rows.push(Row::new(DUALITY.0, DUALITY.1, Outcome::Pass));
            rows
        }
        Err(e) => sector_failure(command, e),
    }
}

fn max_identity_distance(z: &Cocycle) -> f64 {
    let one = identity(z.d());
    z.entries()
        .values()
        .map(|m| dist(m, &one))
        .fold(0.0, f64::max)
}

pub fn tensor(
    poset: &Path,
    z: &Path,
    z1: &Path,
    inputs: &SectorInputs,
    output: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let (l, zs) = load_with(poset, &[z, z1], inputs, s)?;
    let mut product = None;
    let rows = run_sector("tensor", &l, s, |ctx| {
        let glued = ctx.tensor_glued(&zs[0], &zs[1])?;
        let report = check_cocycle(
            &glued.cocycle,
            &l.p,
            Some(&l.net),
            RelationMode::Generating,
            &s.tol,
        );
        let mut rows = cocycle_rows("tensor", &report, true);
        let bad = glued.locals.iter().find(|c| !c.independent);
        rows.push(Row::check(
            "tensor.punctures",
            "the product is path-independent on every puncture",
            bad.is_none(),
            || {
                let c = bad.expect("a failing puncture");
                format!("puncture {:?} deviates by {:e}", c.id, c.max_deviation)
            },
        ));
        if let Some(global) = &glued.global {
            let mut row =
                independence_row("tensor.global", "path-independence on the poset", global);
            row.outcome = Outcome::Info;
            rows.push(row);
        }
        product = Some(glued.cocycle);
        Ok(rows)
    });
    if let (Some(out), Some(t)) = (output, &product) {
        input::write_json(out, &CocycleJson::from_cocycle(t, l.p.len()))?;
    }
    Ok(rows)
}

pub fn symmetry(
    poset: &Path,
    z: &Path,
    z1: &Path,
    inputs: &SectorInputs,
    at: Option<usize>,
    output: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let (l, zs) = load_with(poset, &[z, z1], inputs, s)?;
    if let Some(a) = at {
        input::element(&l.p, a, "--at")?;
    }
    let tol = s.tol.unitary;
    let mut table = None;
    let rows = run_sector("symmetry", &l, s, |ctx| {
        let (z, z1) = (&zs[0], &zs[1]);
        let eps = ctx.symmetry_table(z, z1)?;
        let back = ctx.symmetry_table(z1, z)?;
        let intertwining = eps
            .table
            .intertwining_residual(&ctx.tensor(z, z1)?, &ctx.tensor(z1, z)?)?;
        let full = Region::full(l.p.len());
        let involution = back
            .table
            .compose(&eps.table)
            .distance(&Intertwiner::identity(&full, z.d()));
        let defect = eps.table.unitarity_defect();
        let deviation = eps.choice_deviation.max(back.choice_deviation);
        let mut rows = vec![
            Row::check(
                "symmetry.well_defined",
                "independent of the disjoint path pair",
                deviation <= tol,
                || format!("choices differ by {deviation:e}"),
            )
            .with_value(json!({ "deviation": deviation })),
            Row::check("symmetry.unitary", "unitary", defect <= tol, || {
                format!("defect {defect:e}")
            })
            .with_value(json!({ "defect": defect })),
            Row::check(
                "symmetry.intertwiner",
                "ε(z, z1) in (z ⊗ z1, z1 ⊗ z)",
                intertwining <= tol,
                || format!("residual {intertwining:e}"),
            )
            .with_value(json!({ "residual": intertwining })),
            Row::check(
                "symmetry.involution",
                "ε(z1, z) ε(z, z1) = 1",
                involution <= tol,
                || format!("distance {involution:e}"),
            )
            .with_value(json!({ "distance": involution })),
        ];
        if let Some(a) = at {
            let m = eps.table.get(a).expect("symmetry covers every element");
            rows.push(Row::info(
                "symmetry.at",
                "symmetry operator at the element",
                json!({ "element": a, "value": matrix::to_rows(m) }),
            ));
        }
        table = Some(eps.table);
        Ok(rows)
    });
    if let (Some(out), Some(t)) = (output, &table) {
        input::write_json(out, &IntertwinerJson::from_intertwiner(t))?;
    }
    Ok(rows)
}

pub fn statistics(
    poset: &Path,
    z: &Path,
    inputs: &SectorInputs,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let (l, zs) = load_with(poset, &[z], inputs, s)?;
    let tol = s.tol.unitary;
    Ok(run_sector("statistics", &l, s, |ctx| {
        let report = ctx.statistics(&zs[0])?;
        let mut rows = vec![
            Row::info("statistics.report", "statistics of the sector", &report),
            Row::check(
                "statistics.stabilized",
                "the left inverse stabilizes along the sequence",
                report.stabilized,
                || "left inverse did not stabilize".into(),
            ),
        ];
        if report.simple {
            let lemma = ctx.lemma_chi(&zs[0])?;
            let residual = lemma.residual_d0.max(lemma.residual_d1);
            rows.push(
                Row::check(
                    "statistics.phase_lemma",
                    "χ z(b) = y(∂0 b)(z(b)) = y(∂1 b)(z(b))",
                    residual <= tol,
                    || format!("residual {residual:e}"),
                )
                .with_value(&lemma),
            );
        }
        Ok(rows)
    }))
}

pub fn conjugate(
    poset: &Path,
    z: &Path,
    inputs: &SectorInputs,
    output: Option<&Path>,
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let (l, zs) = load_with(poset, &[z], inputs, s)?;
    let tol = s.tol.unitary;
    let mut conj = None;
    let rows = run_sector("conjugate", &l, s, |ctx| {
        let z = &zs[0];
        let zbar = ctx.conjugate(z)?;
        let report = check_cocycle(&zbar, &l.p, Some(&l.net), RelationMode::Generating, &s.tol);
        let mut rows = cocycle_rows("conjugate", &report, true);
        let left = max_identity_distance(&ctx.tensor(z, &zbar)?);
        let right = max_identity_distance(&ctx.tensor(&zbar, z)?);
        rows.push(
            Row::check(
                "conjugate.products",
                "z ⊗ z̄ = z̄ ⊗ z = 1",
                left.max(right) <= tol,
                || format!("z ⊗ z̄ is {left:e} and z̄ ⊗ z is {right:e} from the identity"),
            )
            .with_value(json!({ "left": left, "right": right })),
        );
        conj = Some(zbar);
        Ok(rows)
    });
    if let (Some(out), Some(c)) = (output, &conj) {
        input::write_json(out, &CocycleJson::from_cocycle(c, l.p.len()))?;
    }
    Ok(rows)
}

fn slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

pub fn axioms(
    poset: &Path,
    inputs: &SectorInputs,
    thetas: &[f64],
    s: &Settings,
) -> Result<Vec<Row>, CliError> {
    let l = load(poset, inputs, 1, s)?;
    let thetas = if thetas.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed.unwrap_or(0));
        (0..2).map(|_| rng.random_range(0.2..3.0)).collect()
    } else {
        thetas.to_vec()
    };
    let battery = match Battery::windings(&l.p, l.net.d(), &thetas) {
        Ok(b) => b,
        Err(e) => {
            return Ok(vec![Row::fail(
                "axiom.battery",
                "winding battery",
                e.to_string(),
            )])
        }
    };
    Ok(run_sector("axioms", &l, s, |ctx| {
        let report = ctx.verify_category_axioms(&battery, &[]);
        let mut rows: Vec<Row> = report
            .rows
            .iter()
            .map(|r| {
                Row::check(
                    format!("axiom.{}", slug(&r.axiom)),
                    &r.axiom,
                    r.passed,
                    || {
                        r.witness
                            .clone()
                            .unwrap_or_else(|| format!("residual {:e}", r.residual))
                    },
                )
                .with_value(json!({ "residual": r.residual, "cases": r.cases }))
            })
            .collect();
        rows.push(Row::info(
            "axiom.battery",
            "winding battery",
            json!({ "thetas": thetas, "objects": battery.objects.len(), "arrows": battery.arrows.len() }),
        ));
        Ok(rows)
    }))
}

#[cfg(test)]
mod tests {
    use super::slug;

    #[test]
    fn axiom_names_become_ids() {
        assert_eq!(slug("left inverse (i)"), "left_inverse_i");
        assert_eq!(slug("C* norm"), "c_norm");
    }
}
