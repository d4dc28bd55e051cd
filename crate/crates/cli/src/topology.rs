//! `validate`, `pi1` and `homotopy`.

use crate::input::{self, CliError};
use crate::report::{Outcome, Row};
use crate::Settings;
use posetcoh::homotopy::{
    abelianization, pi1_presentation, simplify_presentation, HomotopyDecider, HomotopyError,
    HomotopyVerdict,
};
use posetcoh::io::PathsJson;
use posetcoh::net::{validate_net, NetFailure};
use posetcoh::poset::Violation;
use rayon::prelude::*;
use serde_json::json;
use std::path::Path;

fn is_order_violation(v: &Violation) -> bool {
    matches!(
        v,
        Violation::Reflexivity { .. }
            | Violation::Antisymmetry { .. }
            | Violation::Transitivity { .. }
    )
}

pub fn validate(path: &Path, net: Option<&Path>, s: &Settings) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let order = p.validate_order().violation;
    let full = p.validate().violation;
    let mut rows = vec![
        Row::check(
            "poset.order",
            "partial order axioms",
            order.is_none(),
            || order.as_ref().map(ToString::to_string).unwrap_or_default(),
        ),
        Row::check(
            "poset.disjointness",
            "causal disjointness axioms",
            full.as_ref().is_none_or(is_order_violation),
            || full.as_ref().map(ToString::to_string).unwrap_or_default(),
        ),
    ];
    let mut directed = Row::info("poset.directed", "upward directedness", p.is_directed());
    if let Some((a, b)) = p.undirected_pair() {
        directed = directed.with_witness(format!("{a} and {b} have no common upper bound"));
    }
    rows.push(directed);
    rows.push(Row::info(
        "poset.simplices",
        "simplex counts",
        json!({
            "elements": p.len(),
            "simplices1": p.simplices1().len(),
            "simplices2": p.count_simplices2().to_string(),
        }),
    ));
    if let Some(net_path) = net {
        let net = input::net(Some(net_path), &p, 1, &s.tol)?;
        let report = validate_net(&net, &p, &s.tol).map_err(|e| CliError::input(net_path, e))?;
        let first = |pred: fn(&NetFailure) -> bool| report.failures.iter().find(|f| pred(f));
        let iso = first(|f| matches!(f, NetFailure::Isotony { .. }));
        let cau = first(|f| matches!(f, NetFailure::Causality { .. }));
        let irr = first(|f| matches!(f, NetFailure::Irreducibility { .. }));
        rows.push(
            Row::check("net.isotony", "isotony", iso.is_none(), || {
                describe_net(iso)
            })
            .with_value(json!({ "failures": report.isotony_failures })),
        );
        rows.push(
            Row::check("net.causality", "causality", cau.is_none(), || {
                describe_net(cau)
            })
            .with_value(json!({ "failures": report.causality_failures })),
        );
        rows.push(
            Row::check(
                "net.irreducibility",
                "irreducibility",
                irr.is_none(),
                || describe_net(irr),
            )
            .with_value(json!({ "commutant_dim": report.commutant_dim })),
        );
    }
    Ok(rows)
}

fn describe_net(f: Option<&NetFailure>) -> String {
    match f {
        Some(NetFailure::Isotony {
            smaller,
            larger,
            residual,
        }) => format!(
            "{smaller} <= {larger} but A({smaller}) is not in A({larger}) (residual {residual:e})"
        ),
        Some(NetFailure::Causality { a, b, norm }) => {
            format!("{a} ⊥ {b} but A({a}) and A({b}) do not commute (norm {norm:e})")
        }
        Some(NetFailure::Irreducibility { commutant_dim }) => {
            format!("the commutant of the net has dimension {commutant_dim}")
        }
        None => String::new(),
    }
}

pub fn pi1(path: &Path, basepoint: usize) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    if let Some(v) = p.validate_order().violation {
        return Ok(vec![Row::fail(
            "poset.order",
            "partial order axioms",
            v.to_string(),
        )]);
    }
    let basepoint = input::element(&p, basepoint, "basepoint")?;
    let g = pi1_presentation(&p, basepoint).map_err(|e| CliError::Usage(e.to_string()))?;
    let simplified = simplify_presentation(&g);
    let ab = abelianization(&g);
    Ok(vec![
        Row::info(
            "pi1.presentation",
            "edge-path group presentation",
            json!({
                "basepoint": basepoint,
                "generators": g.num_generators(),
                "relations": g.relations.len(),
                "tree_generators": g.tree_generators.len(),
            }),
        ),
        Row::info(
            "pi1.simplified",
            "Tietze simplification",
            json!({
                "shape": simplified.shape,
                "generators": simplified.generators,
                "relations": simplified.relations.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        ),
        Row::info(
            "pi1.abelianization",
            "first homology",
            json!({ "rank": ab.rank, "torsion": ab.torsion }),
        ),
    ])
}

pub fn homotopy(path: &Path, paths: &Path, s: &Settings) -> Result<Vec<Row>, CliError> {
    let p = input::poset(path)?;
    let pairs = input::read_json::<PathsJson>(paths)?.into_pairs();
    let decider = match HomotopyDecider::new(&p, s.depth) {
        Ok(d) => d,
        Err(HomotopyError::InvalidPoset(v)) => {
            return Ok(vec![Row::fail(
                "poset.order",
                "partial order axioms",
                v.to_string(),
            )])
        }
        Err(e) => return Err(CliError::input(path, e)),
    };
    let verdicts: Vec<_> = pairs
        .par_iter()
        .map(|pair| decider.decide(&pair.p1, &pair.p2))
        .collect();
    let mut rows = Vec::with_capacity(pairs.len());
    for (pair, verdict) in pairs.iter().zip(verdicts) {
        let verdict =
            verdict.map_err(|e| CliError::input(paths, format!("pair {:?}: {e}", pair.id)))?;
        let id = format!("pair.{}", pair.id);
        let anchor = "path homotopy";
        rows.push(match &verdict {
            HomotopyVerdict::Homotopic { witness } => Row::new(id, anchor, Outcome::Pass)
                .with_value(json!({ "moves": witness.len(), "witness": witness })),
            HomotopyVerdict::NotHomotopic { certificate } => Row::fail(
                id,
                anchor,
                serde_json::to_string(certificate).expect("certificates serialize"),
            ),
            HomotopyVerdict::Unknown {
                depth,
                normal_forms_agree,
            } => Row::new(id, anchor, Outcome::Undecided)
                .with_value(json!({ "depth": depth, "normal_forms_agree": normal_forms_agree })),
        });
    }
    Ok(rows)
}
