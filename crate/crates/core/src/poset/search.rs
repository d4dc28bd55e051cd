use super::{Element, Path, Poset, Region, Simplex1};
use std::collections::VecDeque;

/// Restriction of the 1-simplex graph: which elements may appear as path
/// vertices (faces) and which as supports.
#[derive(Debug, Clone, Copy)]
pub struct Adjacency<'a> {
    pub vertices: &'a Region,
    pub supports: &'a Region,
}

impl<'a> Adjacency<'a> {
    /// Vertices and supports both drawn from `region`.
    pub fn within(region: &'a Region) -> Self {
        Adjacency {
            vertices: region,
            supports: region,
        }
    }
}

/// Breadth-first search for a path from `from` to `to` whose faces lie in
/// `adj.vertices` and whose supports lie in `adj.supports`.
///
/// Neighbours of a vertex are explored by ascending support, then ascending
/// ending face, so among parallel simplices the smallest support wins. When
/// `from == to` the degenerate simplex is returned if its support is
/// allowed; otherwise the shortest closed path is searched.
pub fn find_path(p: &Poset, adj: Adjacency<'_>, from: Element, to: Element) -> Option<Path> {
    if !adj.vertices.contains(from) || !adj.vertices.contains(to) {
        return None;
    }
    if from == to && adj.supports.contains(from) {
        return Some(Path::degenerate(from));
    }
    let n = p.len();
    let mut parent: Vec<Option<Simplex1>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(x) = queue.pop_front() {
        for &s in adj.supports.members() {
            if !p.leq(x, s) {
                continue;
            }
            for &y in adj.vertices.members() {
                if !p.leq(y, s) {
                    continue;
                }
                if y == to && from == to && x == from {
                    // Closed path of length one.
                    return Some(Path::single(Simplex1::new(x, y, s)));
                }
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = Some(Simplex1::new(x, y, s));
                if y == to {
                    return Some(unwind(&parent, from, to));
                }
                queue.push_back(y);
            }
        }
    }
    None
}

fn unwind(parent: &[Option<Simplex1>], from: Element, to: Element) -> Path {
    let mut out = Vec::new();
    let mut cur = to;
    loop {
        let b = parent[cur].expect("BFS parent chain is complete");
        out.push(b);
        cur = b.d1;
        if cur == from {
            break;
        }
    }
    out.reverse();
    Path::new(out).expect("BFS produces chained simplices")
}

/// Connected components of the graph whose vertices are `adj.vertices` and
/// where two vertices are adjacent when some allowed support dominates both.
/// Components are sorted by their smallest member. A vertex dominated by no
/// allowed support forms its own component.
pub fn components(p: &Poset, adj: Adjacency<'_>) -> Vec<Vec<Element>> {
    let n = p.len();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &s in adj.supports.members() {
        let mut first: Option<usize> = None;
        for &v in adj.vertices.members() {
            if p.leq(v, s) {
                match first {
                    None => first = Some(v),
                    Some(f) => {
                        let (a, b) = (find(&mut uf, f), find(&mut uf, v));
                        if a != b {
                            uf[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Element>> = Default::default();
    for &v in adj.vertices.members() {
        let r = find(&mut uf, v);
        groups.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<Element>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// True iff `region` is nonempty and any two of its elements are joined by a
/// path inside it.
pub fn is_pathwise_connected(p: &Poset, region: &Region) -> bool {
    !region.is_empty() && components(p, Adjacency::within(region)).len() == 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefinementError {
    #[error("subset is over {got} elements, poset has {n}")]
    Ambient { got: usize, n: usize },
}

/// Outcome of [`is_refinement`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RefinementCheck {
    Refinement,
    /// No element of the subset lies below `element`.
    NoElementBelow {
        element: Element,
    },
    /// `from` and `to` lie below `element` but no path inside the subset
    /// with supports below `element` joins them.
    NotLocallyConnected {
        element: Element,
        from: Element,
        to: Element,
    },
}

impl RefinementCheck {
    pub fn is_refinement(&self) -> bool {
        matches!(self, RefinementCheck::Refinement)
    }
}

/// Tests whether `sub` refines `p`: every element dominates some member of
/// `sub`. With `locally_relatively_connected`, the members below each
/// element must also form a connected set using supports below it.
pub fn is_refinement(
    sub: &Region,
    p: &Poset,
    locally_relatively_connected: bool,
) -> Result<RefinementCheck, RefinementError> {
    if sub.ambient() != p.len() {
        return Err(RefinementError::Ambient {
            got: sub.ambient(),
            n: p.len(),
        });
    }
    for o in 0..p.len() {
        if !sub.members().iter().any(|&m| p.leq(m, o)) {
            return Ok(RefinementCheck::NoElementBelow { element: o });
        }
    }
    if locally_relatively_connected {
        for o in 0..p.len() {
            let below = sub.below(p, o);
            let comps = components(p, Adjacency::within(&below));
            if comps.len() > 1 {
                return Ok(RefinementCheck::NotLocallyConnected {
                    element: o,
                    from: comps[0][0],
                    to: comps[1][0],
                });
            }
        }
    }
    Ok(RefinementCheck::Refinement)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four arcs covering a circle and their four overlaps.
    fn circle4() -> Poset {
        // Arcs 0..4, overlaps 4..8 with overlap 4+i inside arcs i and i+1.
        Poset::from_fn(
            8,
            |a, b| a >= 4 && b < 4 && (b == a - 4 || b == (a - 3) % 4),
            |_, _| false,
        )
    }

    #[test]
    fn bfs_finds_shortest_path_with_smallest_supports() {
        let p = circle4();
        let full = Region::full(8);
        let path = find_path(&p, Adjacency::within(&full), 4, 6).unwrap();
        assert_eq!(path.start(), 4);
        assert_eq!(path.end(), 6);
        assert_eq!(path.len(), 2);
        assert_eq!(path.simplices()[0], Simplex1::new(4, 7, 0));
    }

    #[test]
    fn closed_request_without_degenerate_support_finds_a_loop() {
        let p = circle4();
        let supports = Region::from_members(8, [0, 1, 2, 3]);
        let vertices = Region::full(8);
        let path = find_path(
            &p,
            Adjacency {
                vertices: &vertices,
                supports: &supports,
            },
            4,
            4,
        )
        .unwrap();
        assert!(path.is_closed());
        assert_eq!(path.len(), 1);
    }

    #[test]
    fn components_of_disconnected_region() {
        let p = circle4();
        let r = Region::from_members(8, [4, 6]);
        assert_eq!(
            components(&p, Adjacency::within(&r)),
            vec![vec![4], vec![6]]
        );
        assert!(is_pathwise_connected(&p, &Region::full(8)));
    }

    #[test]
    fn full_carrier_is_a_connected_refinement() {
        let p = circle4();
        assert_eq!(
            is_refinement(&Region::full(8), &p, true).unwrap(),
            RefinementCheck::Refinement
        );
    }

    #[test]
    fn missing_lower_elements_are_reported() {
        let p = circle4();
        let sub = Region::from_members(8, [4, 5, 6, 7]);
        assert!(is_refinement(&sub, &p, false).unwrap().is_refinement());
        let sub = Region::from_members(8, [4, 5]);
        assert_eq!(
            is_refinement(&sub, &p, false).unwrap(),
            RefinementCheck::NoElementBelow { element: 3 }
        );
    }

    #[test]
    fn overlaps_alone_are_not_locally_connected() {
        let p = circle4();
        let sub = Region::from_members(8, [4, 5, 6, 7]);
        assert_eq!(
            is_refinement(&sub, &p, true).unwrap(),
            RefinementCheck::NotLocallyConnected {
                element: 0,
                from: 4,
                to: 7
            }
        );
    }
}
