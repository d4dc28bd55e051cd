//! `generate`: diamond posets on causal lattices, the circle poset, and
//! winding cocycles.

use crate::input::{self, CliError};
use crate::report::Row;
use clap::Subcommand;
use posetcoh::io::{CocycleJson, PosetJson};
use posetcoh::spacetime::{circle_poset, generate_diamond_poset, CausalLattice, Topology};
use posetcoh::{Cocycle, Poset, Region};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Debug, Subcommand)]
pub enum Kind {
    /// Diamonds on a 1+1 cylinder: a circle of `m` sites, `t` time slices.
    Cylinder {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        max_base: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Diamonds on a 1+1 strip of `width` sites.
    Strip {
        #[arg(long, visible_alias = "m")]
        width: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        max_base: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Diamonds on a 2+1 annulus: circle of `m` sites times an interval of `width`.
    Annulus {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        max_base: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The circle poset of `n` arcs and their overlaps.
    Circle {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The winding cocycle `w_θ` on a poset with a free first homology.
    Winding {
        poset: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// `poset.json` to `poset.<tag>.json`.
fn sidecar(output: &Path, tag: &str) -> PathBuf {
    output.with_extension(format!("{tag}.json"))
}

fn poset_rows(p: &Poset, output: &Path) -> Result<Vec<Row>, CliError> {
    input::write_json(output, &PosetJson::from_poset(p))?;
    let violation = p.validate().violation;
    Ok(vec![
        Row::info(
            "generate.poset",
            "generated poset",
            json!({ "path": output.display().to_string(), "elements": p.len() }),
        ),
        Row::check(
            "generate.validation",
            "poset and disjointness axioms",
            violation.is_none(),
            || violation.map(|v| v.to_string()).unwrap_or_default(),
        ),
    ])
}

fn diamonds(
    topology: Topology,
    max_base: Option<usize>,
    output: &Path,
) -> Result<Vec<Row>, CliError> {
    let lattice = CausalLattice::new(topology).map_err(|e| CliError::Usage(e.to_string()))?;
    let max_base = max_base.unwrap_or_else(|| lattice.default_max_base());
    let dp =
        generate_diamond_poset(lattice, max_base).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows = poset_rows(&dp.poset, output)?;
    let table_path = sidecar(output, "diamonds");
    input::write_json(&table_path, &dp.table)?;
    let punctures = dp.all_punctures();
    let fam_path = sidecar(output, "punctures");
    let fam = posetcoh::io::PuncturesJson {
        punctures: punctures
            .iter()
            .map(|x| posetcoh::io::PunctureJson {
                id: x.id.clone(),
                members: x.members.members().to_vec(),
                sequence: x.sequence.clone(),
            })
            .collect(),
    };
    input::write_json(&fam_path, &fam)?;
    rows.push(Row::info(
        "generate.diamonds",
        "diamond table",
        json!({ "path": table_path.display().to_string(), "max_base": max_base }),
    ));
    rows.push(Row::info(
        "generate.punctures",
        "punctures at every lattice point",
        json!({ "path": fam_path.display().to_string(), "count": punctures.len() }),
    ));
    Ok(rows)
}

pub fn run(kind: Kind) -> Result<Vec<Row>, CliError> {
    match kind {
        Kind::Cylinder {
            m,
            t,
            max_base,
            output,
        } => diamonds(Topology::Cylinder { m, t }, max_base, &output),
        Kind::Strip {
            width,
            t,
            max_base,
            output,
        } => diamonds(Topology::Strip { width, t }, max_base, &output),
        Kind::Annulus {
            m,
            width,
            t,
            max_base,
            output,
        } => diamonds(Topology::Annulus { m, width, t }, max_base, &output),
        Kind::Circle { n, output } => {
            if n < 3 {
                return Err(CliError::Usage("a circle needs at least three arcs".into()));
            }
            poset_rows(&circle_poset(n), &output)
        }
        Kind::Winding {
            poset,
            theta,
            d,
            output,
        } => {
            let p = input::poset(&poset)?;
            let z = Cocycle::winding(&p, &Region::full(p.len()), d, theta)
                .map_err(|e| CliError::input(&poset, e))?;
            input::write_json(&output, &CocycleJson::from_cocycle(&z, p.len()))?;
            Ok(vec![Row::info(
                "generate.winding",
                "winding cocycle",
                json!({ "path": output.display().to_string(), "theta": theta, "d": d }),
            )])
        }
    }
}
