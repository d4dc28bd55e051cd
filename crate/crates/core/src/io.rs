//! JSON formats for posets, nets, cocycles, intertwiners, paths and
//! puncture families.
//!
//! Matrices are arrays of rows, each row an array of `[re, im]` pairs.

use crate::cocycle::{Cocycle, Intertwiner};
use crate::linalg::{CMat, Tolerances};
use crate::net::{LocalNet, NetError, NetMode};
use crate::poset::{Element, Path, Poset, PosetError, Region, Simplex1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("matrix {context}: {reason}")]
    Matrix { context: String, reason: String },
    #[error("element key {key:?} is not an element id below {n}")]
    ElementKey { key: String, n: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Serde adapter for `CMat`.
pub mod matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub type Rows = Vec<Vec<[f64; 2]>>;

    pub fn to_rows(m: &CMat) -> Rows {
        (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    /// Parses a square matrix.
    pub fn from_rows(rows: &Rows) -> Result<CMat, String> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(format!("row {i} has {} entries, expected {n}", r.len()));
        }
        Ok(CMat::from_fn(n, n, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let rows = Rows::deserialize(d)?;
        from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    #[serde(default)]
    pub leq: Vec<[Element; 2]>,
    #[serde(default)]
    pub disjoint: Vec<[Element; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transitive_closure: bool,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> Self {
        PosetJson {
            n: p.len(),
            leq: p
                .order_pairs()
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| [a, b])
                .collect(),
            disjoint: p
                .disjoint_pairs()
                .into_iter()
                .filter(|(a, b)| a < b)
                .map(|(a, b)| [a, b])
                .collect(),
            labels: p.labels().map(<[String]>::to_vec),
            transitive_closure: false,
        }
    }

    /// Builds the poset; without `transitive_closure` a non-transitive
    /// order is rejected.
    pub fn to_poset(&self) -> Result<Poset, IoError> {
        let leq: Vec<(Element, Element)> = self.leq.iter().map(|&[a, b]| (a, b)).collect();
        let dis: Vec<(Element, Element)> = self.disjoint.iter().map(|&[a, b]| (a, b)).collect();
        let mut p = Poset::from_relations(self.n, &leq, &dis)?;
        if self.transitive_closure {
            p = p.transitive_closure();
        } else {
            p.check_transitive()?;
        }
        if let Some(labels) = &self.labels {
            p = p.with_labels(labels.clone())?;
        }
        Ok(p)
    }
}

pub fn poset_from_str(s: &str) -> Result<Poset, IoError> {
    serde_json::from_str::<PosetJson>(s)?.to_poset()
}

pub fn poset_to_string(p: &Poset) -> String {
    serde_json::to_string_pretty(&PosetJson::from_poset(p)).expect("poset JSON serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetJson {
    pub d: usize,
    #[serde(default)]
    pub mode: NetMode,
    /// Element id (as a string key) to generator matrices.
    #[serde(default)]
    pub algebras: BTreeMap<String, Vec<matrix::Rows>>,
}

impl NetJson {
    pub fn from_net(net: &LocalNet) -> Self {
        let algebras = (0..net.len())
            .filter(|&e| !net.generators(e).is_empty())
            .map(|e| {
                (
                    e.to_string(),
                    net.generators(e).iter().map(matrix::to_rows).collect(),
                )
            })
            .collect();
        NetJson {
            d: net.d(),
            mode: net.mode(),
            algebras,
        }
    }

    /// Builds the net over `n` elements; elements without generators get
    /// the scalars (or the full algebra in full mode).
    pub fn to_net(&self, n: usize, tol: &Tolerances) -> Result<LocalNet, IoError> {
        let mut gens: Vec<Vec<CMat>> = vec![Vec::new(); n];
        for (key, mats) in &self.algebras {
            let e: Element =
                key.parse()
                    .ok()
                    .filter(|&e| e < n)
                    .ok_or_else(|| IoError::ElementKey {
                        key: key.clone(),
                        n,
                    })?;
            for (i, rows) in mats.iter().enumerate() {
                let m = matrix::from_rows(rows).map_err(|reason| IoError::Matrix {
                    context: format!("algebras[{key}][{i}]"),
                    reason,
                })?;
                gens[e].push(m);
            }
        }
        Ok(LocalNet::from_generators(self.d, self.mode, gens, tol)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleEntryJson {
    pub b: Simplex1,
    #[serde(with = "matrix")]
    pub u: CMat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleJson {
    /// Dimension; inferred from the entries when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Domain of the cocycle; the whole poset when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Element>>,
    pub entries: Vec<CocycleEntryJson>,
}

impl CocycleJson {
    pub fn from_cocycle(z: &Cocycle, n: usize) -> Self {
        let domain = (z.domain().len() != n).then(|| z.domain().members().to_vec());
        CocycleJson {
            d: Some(z.d()),
            domain,
            entries: z
                .entries()
                .iter()
                .map(|(b, u)| CocycleEntryJson {
                    b: *b,
                    u: u.clone(),
                })
                .collect(),
        }
    }

    pub fn to_cocycle(&self, p: &Poset) -> Result<Cocycle, IoError> {
        let n = p.len();
        let d = self
            .d
            .or_else(|| self.entries.first().map(|e| e.u.nrows()))
            .unwrap_or(1);
        let domain = match &self.domain {
            Some(m) => {
                if let Some(&e) = m.iter().find(|&&e| e >= n) {
                    return Err(IoError::ElementKey {
                        key: e.to_string(),
                        n,
                    });
                }
                Region::from_members(n, m.iter().copied())
            }
            None => Region::full(n),
        };
        let mut entries = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            if !p.is_simplex1(&e.b) {
                return Err(IoError::Invalid(format!(
                    "entries[{i}]: {} is not a 1-simplex",
                    e.b
                )));
            }
            if e.u.nrows() != d {
                return Err(IoError::Matrix {
                    context: format!("entries[{i}]"),
                    reason: format!("{}×{} instead of {d}×{d}", e.u.nrows(), e.u.ncols()),
                });
            }
            entries.insert(e.b, e.u.clone());
        }
        Ok(Cocycle::from_entries(d, domain, entries))
    }
}

pub fn cocycle_from_str(s: &str, p: &Poset) -> Result<Cocycle, IoError> {
    serde_json::from_str::<CocycleJson>(s)?.to_cocycle(p)
}

pub fn cocycle_to_string(z: &Cocycle, n: usize) -> String {
    serde_json::to_string_pretty(&CocycleJson::from_cocycle(z, n)).expect("cocycle JSON serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerEntryJson {
    pub a: Element,
    #[serde(with = "matrix")]
    pub t: CMat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerJson {
    pub entries: Vec<IntertwinerEntryJson>,
}

impl IntertwinerJson {
    pub fn from_intertwiner(t: &Intertwiner) -> Self {
        IntertwinerJson {
            entries: t
                .entries()
                .iter()
                .map(|(&a, m)| IntertwinerEntryJson { a, t: m.clone() })
                .collect(),
        }
    }

    pub fn to_intertwiner(&self) -> Intertwiner {
        let d = self.entries.first().map_or(1, |e| e.t.nrows());
        Intertwiner::from_entries(d, self.entries.iter().map(|e| (e.a, e.t.clone())).collect())
    }
}

/// A pair of paths to compare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPairJson {
    pub id: String,
    pub p1: Path,
    pub p2: Path,
}

/// Either `{"pairs": [...]}` or a bare two-element array of paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathsJson {
    Pairs { pairs: Vec<PathPairJson> },
    Pair([Path; 2]),
}

impl PathsJson {
    pub fn into_pairs(self) -> Vec<PathPairJson> {
        match self {
            PathsJson::Pairs { pairs } => pairs,
            PathsJson::Pair([p1, p2]) => vec![PathPairJson {
                id: "pair".into(),
                p1,
                p2,
            }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PunctureJson {
    pub id: String,
    pub members: Vec<Element>,
    #[serde(default)]
    pub sequence: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturesJson {
    pub punctures: Vec<PunctureJson>,
}

/// Local cocycles keyed by puncture id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalsJson {
    pub locals: Vec<LocalJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalJson {
    pub id: String,
    pub entries: Vec<CocycleEntryJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, paulis};

    #[test]
    fn poset_round_trip() {
        let p = Poset::from_relations(3, &[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        assert_eq!(poset_from_str(&poset_to_string(&p)).unwrap(), p);
    }

    #[test]
    fn non_transitive_input_is_rejected_unless_closed() {
        let s = r#"{"n": 3, "leq": [[0, 1], [1, 2]], "disjoint": []}"#;
        assert!(matches!(
            poset_from_str(s),
            Err(IoError::Poset(PosetError::NotTransitive(0, 1, 2)))
        ));
        let s = r#"{"n": 3, "leq": [[0, 1], [1, 2]], "disjoint": [], "transitive_closure": true}"#;
        assert!(poset_from_str(s).unwrap().leq(0, 2));
    }

    #[test]
    fn matrices_round_trip_and_reject_ragged_rows() {
        let m = paulis()[1].clone() * c(0.5, 0.25);
        let rows = matrix::to_rows(&m);
        assert_eq!(matrix::from_rows(&rows).unwrap(), m);
        assert!(matrix::from_rows(&vec![vec![[1.0, 0.0]], vec![]]).is_err());
    }

    #[test]
    fn cocycle_round_trip() {
        let p = Poset::from_relations(2, &[(0, 1)], &[]).unwrap();
        let z = Cocycle::from_fn(&p, &Region::full(2), 2, |b| paulis()[b.d0 % 3].clone());
        let back = cocycle_from_str(&cocycle_to_string(&z, 2), &p).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn paths_accept_both_shapes() {
        let bare: PathsJson = serde_json::from_str("[[[0,1,1]],[[0,1,1]]]").unwrap();
        assert_eq!(bare.into_pairs().len(), 1);
        let s = r#"{"pairs": [{"id": "a", "p1": [[0,0,0]], "p2": [[0,0,0]]}]}"#;
        let pairs: PathsJson = serde_json::from_str(s).unwrap();
        assert_eq!(pairs.into_pairs()[0].id, "a");
    }

    #[test]
    fn broken_path_is_a_parse_error() {
        assert!(serde_json::from_str::<Path>("[[0,1,1],[2,0,2]]").is_err());
    }
}
