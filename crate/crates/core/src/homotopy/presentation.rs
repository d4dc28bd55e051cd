use super::word::{generator_of, letter, Letter, Word};
use crate::poset::{components, Adjacency, Element, Path, Poset, Region, Simplex1, Simplex2};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Which 2-simplices contribute relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationMode {
    /// Every 2-simplex. Only practical for small posets.
    All,
    /// Degenerate 2-simplices, the flat simplices on `(x, s, y)` for
    /// `x, y <= s`, and the chain simplices on `x < y < z`. Every other
    /// 2-simplex relation is a consequence of these, so the presented group
    /// is the same.
    #[default]
    Generating,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("elements {0} and {1} are not joined by any path")]
    NotPathwiseConnected(Element, Element),
    #[error("basepoint {0} is outside the region")]
    BasepointOutside(Element),
    #[error("simplex {0} is not a 1-simplex of the region")]
    UnknownSimplex(Simplex1),
}

/// A presentation of the first homotopy group at a basepoint.
///
/// There is one generator per 1-simplex up to reversal; the generator of
/// `b` with `d1 <= d0` is stored, and the reversed simplex maps to its
/// inverse. Relators are freely reduced, nonempty words `r` meaning `r = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct GroupPresentation {
    pub basepoint: Element,
    pub mode: RelationMode,
    /// Generators indexed by position; each is a 1-simplex with `d1 <= d0`.
    pub generators: Vec<Simplex1>,
    pub relations: Vec<Word>,
    /// `tree[a]` is the tree path from the basepoint to `a`; empty for the
    /// basepoint itself and for elements outside the region.
    pub tree: Vec<Vec<Simplex1>>,
    /// Generators carried by spanning-tree edges.
    pub tree_generators: Vec<usize>,
    /// Generators killed by a single-letter relator (tree edges, degenerate
    /// simplices, loops).
    #[serde(skip)]
    trivial: Vec<bool>,
    #[serde(skip)]
    index: HashMap<Simplex1, usize>,
    #[serde(skip)]
    region: Region,
}

impl GroupPresentation {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Generator index of a simplex and whether it enters inverted.
    pub fn generator(&self, b: &Simplex1) -> Option<(usize, bool)> {
        if b.d1 <= b.d0 {
            self.index.get(b).map(|&g| (g, false))
        } else {
            self.index.get(&b.reverse()).map(|&g| (g, true))
        }
    }

    pub fn letter_of(&self, b: &Simplex1) -> Option<Letter> {
        self.generator(b).map(|(g, inv)| letter(g, inv))
    }

    pub fn is_trivial_generator(&self, g: usize) -> bool {
        self.trivial[g]
    }

    /// The tree path from the basepoint to `a`, or `None` at the basepoint.
    pub fn tree_path(&self, a: Element) -> Option<Path> {
        if self.tree[a].is_empty() {
            None
        } else {
            Some(Path::new(self.tree[a].clone()).expect("tree paths are chained"))
        }
    }

    /// The based loop of a generator: tree path to its start, the simplex,
    /// then the tree path back from its end.
    pub fn generator_loop(&self, g: usize) -> Path {
        let b = self.generators[g];
        let mut v: Vec<Simplex1> = self.tree[b.d1].clone();
        v.push(b);
        v.extend(self.tree[b.d0].iter().rev().map(|s| s.reverse()));
        Path::new(v).expect("generator loops are chained")
    }

    /// Word of a path: letters in matrix order (last traversed simplex
    /// leftmost), trivial generators erased, freely reduced.
    pub fn path_word(&self, p: &Path) -> Result<Word, PresentationError> {
        let mut letters = Vec::with_capacity(p.len());
        for b in p.simplices().iter().rev() {
            let l = self
                .letter_of(b)
                .ok_or(PresentationError::UnknownSimplex(*b))?;
            if !self.trivial[generator_of(l)] {
                letters.push(l);
            }
        }
        Ok(Word(letters).reduced())
    }

    /// Relator read off a 2-simplex: `g(∂0c) g(∂2c) g(∂1c)⁻¹`, reduced.
    pub fn relator_of(&self, c: &Simplex2) -> Option<Word> {
        let l0 = self.letter_of(&c.f0)?;
        let l1 = self.letter_of(&c.f1)?;
        let l2 = self.letter_of(&c.f2)?;
        Some(Word(vec![l0, l2, -l1]).reduced())
    }
}

/// Presentation of `π₁(p, basepoint)` with the default relation mode.
pub fn pi1_presentation(
    p: &Poset,
    basepoint: Element,
) -> Result<GroupPresentation, PresentationError> {
    pi1_presentation_with(
        p,
        &Region::full(p.len()),
        basepoint,
        RelationMode::Generating,
    )
}

/// Presentation of the fundamental group of the subposet `region`.
pub fn pi1_presentation_with(
    p: &Poset,
    region: &Region,
    basepoint: Element,
    mode: RelationMode,
) -> Result<GroupPresentation, PresentationError> {
    if !region.contains(basepoint) {
        return Err(PresentationError::BasepointOutside(basepoint));
    }
    let comps = components(p, Adjacency::within(region));
    if comps.len() > 1 {
        return Err(PresentationError::NotPathwiseConnected(
            comps[0][0],
            comps[1][0],
        ));
    }

    let mut generators = Vec::new();
    let mut index = HashMap::new();
    for b in p.simplices1_in(region) {
        if b.d1 <= b.d0 {
            index.insert(b, generators.len());
            generators.push(b);
        }
    }

    let (tree, tree_edges) = spanning_tree(p, region, basepoint);
    let mut pres = GroupPresentation {
        basepoint,
        mode,
        generators,
        relations: Vec::new(),
        tree,
        tree_generators: Vec::new(),
        trivial: Vec::new(),
        index,
        region: region.clone(),
    };
    let mut tree_generators: Vec<usize> = tree_edges
        .iter()
        .map(|b| pres.generator(b).expect("tree edge is a simplex").0)
        .collect();
    tree_generators.sort_unstable();
    tree_generators.dedup();

    let mut relations: Vec<Word> = tree_generators
        .iter()
        .map(|&g| Word(vec![letter(g, false)]))
        .collect();
    let mut push = |c: &Simplex2, pres: &GroupPresentation| {
        let r = pres
            .relator_of(c)
            .expect("faces of region simplices are region simplices");
        if !r.is_empty() {
            relations.push(r);
        }
    };
    match mode {
        RelationMode::All => {
            for &s in region.members() {
                p.for_each_simplex2_with_support(s, |c| {
                    let inside = [c.f0, c.f1, c.f2].iter().all(|f| {
                        region.contains(f.d1) && region.contains(f.d0) && region.contains(f.support)
                    });
                    if inside {
                        push(&c, &pres)
                    }
                });
            }
        }
        RelationMode::Generating => {
            for c in generating_simplices2(p, region) {
                push(&c, &pres);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    relations.retain(|r| seen.insert(r.clone()));

    let mut trivial = vec![false; pres.generators.len()];
    for r in &relations {
        if r.len() == 1 {
            trivial[generator_of(r.0[0])] = true;
        }
    }
    pres.relations = relations;
    pres.trivial = trivial;
    pres.tree_generators = tree_generators;
    Ok(pres)
}

/// 2-simplices of `region` whose identities imply those of every other
/// 2-simplex of the region: degenerate simplices, the flat simplices on
/// `(x, s, y)` with `x, y <= s`, and the chain simplices on `x < y < z`.
///
/// Writing `e(x, s)` for the simplex `x → s` with support `s`, the flat
/// simplices give `g(u, v, t) = e(v, t)⁻¹ e(u, t)` and the chain simplices
/// give `e(y, z) e(x, y) = e(x, z)`; together these reduce any 2-simplex
/// identity to a triviality. The argument only uses the group law, so it
/// applies to unitary cocycles as well as to the fundamental group.
pub fn generating_simplices2(p: &Poset, region: &Region) -> Vec<Simplex2> {
    let mut out = Vec::new();
    for &a in region.members() {
        out.push(Simplex2::degenerate(a));
    }
    for &s in region.members() {
        let down: Vec<Element> = region
            .members()
            .iter()
            .copied()
            .filter(|&x| p.leq(x, s))
            .collect();
        for &x in &down {
            for &y in &down {
                out.push(Simplex2::flat([x, s, y], s));
            }
        }
    }
    for &x in region.members() {
        for &y in region.members() {
            if !p.lt(x, y) {
                continue;
            }
            for &z in region.members() {
                if p.lt(y, z) {
                    out.push(Simplex2::new(
                        Simplex1::new(y, z, z),
                        Simplex1::new(x, z, z),
                        Simplex1::new(x, y, y),
                        z,
                    ));
                }
            }
        }
    }
    out
}

/// Breadth-first spanning tree from the basepoint. Neighbours are taken in
/// ascending `(support, d0)` order, so the smallest support wins among
/// parallel simplices. Returns the tree paths and the tree edges.
pub(crate) fn spanning_tree(
    p: &Poset,
    region: &Region,
    basepoint: Element,
) -> (Vec<Vec<Simplex1>>, Vec<Simplex1>) {
    let n = p.len();
    let mut tree: Vec<Vec<Simplex1>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    seen[basepoint] = true;
    queue.push_back(basepoint);
    while let Some(x) = queue.pop_front() {
        for &s in region.members() {
            if !p.leq(x, s) {
                continue;
            }
            for &y in region.members() {
                if seen[y] || !p.leq(y, s) {
                    continue;
                }
                seen[y] = true;
                let b = Simplex1::new(x, y, s);
                let mut path = tree[x].clone();
                path.push(b);
                tree[y] = path;
                edges.push(b);
                queue.push_back(y);
            }
        }
    }
    (tree, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::from_fn(n, |i, j| i <= j, |_, _| false)
    }

    #[test]
    fn chain_generators_and_tree() {
        let p = chain(3);
        let g = pi1_presentation(&p, 0).unwrap();
        assert!(g.generators.iter().all(|b| b.d1 <= b.d0));
        assert!(g.tree[0].is_empty());
        assert_eq!(g.tree[1], vec![Simplex1::new(0, 1, 1)]);
        assert_eq!(g.tree[2], vec![Simplex1::new(0, 2, 2)]);
    }

    #[test]
    fn reversed_simplex_maps_to_inverse_letter() {
        let p = chain(2);
        let g = pi1_presentation(&p, 0).unwrap();
        let b = Simplex1::new(0, 1, 1);
        let (gen, inv) = g.generator(&b).unwrap();
        assert!(!inv);
        assert_eq!(g.generator(&b.reverse()), Some((gen, true)));
    }

    #[test]
    fn disconnected_poset_is_rejected() {
        let p = Poset::from_relations(2, &[], &[(0, 1)]).unwrap();
        assert_eq!(
            pi1_presentation(&p, 0).unwrap_err(),
            PresentationError::NotPathwiseConnected(0, 1)
        );
    }

    #[test]
    fn loops_and_degenerates_are_trivial_generators() {
        let p = chain(2);
        let g = pi1_presentation(&p, 0).unwrap();
        for (i, b) in g.generators.iter().enumerate() {
            if b.d1 == b.d0 {
                assert!(g.is_trivial_generator(i), "{b} should be trivial");
            }
        }
    }

    #[test]
    fn path_then_reverse_has_empty_word() {
        let p = chain(3);
        let g = pi1_presentation(&p, 0).unwrap();
        let path = Path::new(vec![
            Simplex1::new(0, 2, 2),
            Simplex1::new(2, 1, 2),
            Simplex1::new(1, 1, 2),
        ])
        .unwrap();
        let there_and_back = path.then(&path.reverse()).unwrap();
        assert!(g.path_word(&there_and_back).unwrap().is_empty());
    }
}
