//! Transition systems with an independence relation on labels.
//!
//! A system here is a 1-truncated extensional HDA together with a binary
//! relation `⋉` on its alphabet. The relation singles out *independence
//! squares* in the transition graph: four edges forming a square whose
//! parallel sides carry equal labels and whose label pair is related.
//! [`psi`] fills every independence square with a 2-cube; [`phi`] goes the
//! other way and reads a relation off the 2-cubes of a 2-truncated HDA.
//! The two constructions are adjoint, with an explicit unit
//! ([`adjunction_unit`]) and an identity counit.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hda::{self, EdgePair, Hda, HdaMorphism, Label, MorphismViolation};
use crate::pcs::{CellId, PcsBuilder, TensorProv};

pub type Relation = BTreeSet<(Label, Label)>;

/// A 1-truncated extensional HDA with a relation on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsSystem {
    pub hda: Hda,
    pub relation: Relation,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtsError {
    #[error("underlying automaton has cells of dimension {0}, expected at most 1")]
    NotOneTruncated(usize),
    #[error("automaton has cells of dimension {0}, expected at most 2")]
    NotTwoTruncated(usize),
    #[error("automaton is not extensional: edges {0:?} and {1:?} share label and endpoints")]
    NotExtensional(CellId, CellId),
    #[error("relation pair ({0}, {1}) mentions a label outside the alphabet")]
    RelationOutsideAlphabet(Label, Label),
}

/// Four edges forming an independence square. `front2`/`back2` are the
/// `d^0_2`/`d^1_2` sides (they run in the first cube direction) and
/// `front1`/`back1` are the `d^0_1`/`d^1_1` sides (second direction). Field
/// order matches the face-tuple order `[d^0_1, d^0_2, d^1_1, d^1_2]` used
/// to sort cube fillers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndependenceSquare {
    pub front1: CellId,
    pub front2: CellId,
    pub back1: CellId,
    pub back2: CellId,
}

impl LtsSystem {
    pub fn new(hda: Hda, relation: Relation) -> Result<Self, LtsError> {
        if let Some(d) = hda.cells.max_dim().filter(|&d| d > 1) {
            return Err(LtsError::NotOneTruncated(d));
        }
        if let Err((e1, e2)) = hda::is_extensional(&hda) {
            return Err(LtsError::NotExtensional(e1, e2));
        }
        for (a, b) in &relation {
            if !hda.alphabet.contains(a) || !hda.alphabet.contains(b) {
                return Err(LtsError::RelationOutsideAlphabet(a.clone(), b.clone()));
            }
        }
        Ok(LtsSystem { hda, relation })
    }

    pub fn independence_squares(&self) -> BTreeSet<IndependenceSquare> {
        squares_of(&self.hda, &self.relation)
    }
}

/// All independence squares of an edge labeling with respect to a relation.
/// `a` may have cells above dimension 1; only its 1-skeleton is consulted.
/// A square consists of edges `x^k_i` with corners matching via
/// `d^k_1 x^l_2 = d^l_1 x^k_1`, equal labels on parallel sides, and
/// `λ(x^0_2) ⋉ λ(x^0_1)`.
pub fn squares_of(a: &Hda, relation: &Relation) -> BTreeSet<IndependenceSquare> {
    let mut by_src: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for e in a.cells.cells(1) {
        by_src.entry(a.cells.edge_src(e)).or_default().push(e);
    }
    let empty = Vec::new();
    let outgoing = |v: CellId| by_src.get(&v).unwrap_or(&empty);
    let mut out = BTreeSet::new();
    for edges in by_src.values() {
        for &front2 in edges {
            for &front1 in edges {
                if !relation.contains(&(a.label(front2).clone(), a.label(front1).clone())) {
                    continue;
                }
                for &back1 in outgoing(a.cells.edge_dst(front2)) {
                    if a.label(back1) != a.label(front1) {
                        continue;
                    }
                    for &back2 in outgoing(a.cells.edge_dst(front1)) {
                        if a.label(back2) != a.label(front2) {
                            continue;
                        }
                        if a.cells.edge_dst(back2) == a.cells.edge_dst(back1) {
                            out.insert(IndependenceSquare { front1, front2, back1, back2 });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Fills every independence square of `t` with a 2-cube. The result is a
/// 2-truncated HDA whose 1-skeleton is exactly the underlying automaton of
/// `t`; 2-cells are ordered by their face tuples.
pub fn psi(t: &LtsSystem) -> Hda {
    let a = &t.hda;
    let mut b = PcsBuilder::new();
    b.add_vertices(a.cells.count(0));
    for e in a.cells.cells(1) {
        b.add_edge(a.cells.edge_src(e), a.cells.edge_dst(e)).unwrap();
    }
    for sq in t.independence_squares() {
        b.add_cell(vec![sq.front1, sq.front2], vec![sq.back1, sq.back2]).unwrap();
    }
    Hda {
        cells: b.build(),
        initial: a.initial,
        finals: a.finals.clone(),
        alphabet: a.alphabet.clone(),
        labels: a.labels.clone(),
    }
}

/// Reads a relation off the 2-cubes of a 2-truncated extensional HDA:
/// `α ⋉ β` iff some 2-cube has `λ(d^0_2 x) = α` and `λ(d^0_1 x) = β`. The
/// underlying automaton of the result is the 1-skeleton of `a`.
pub fn phi(a: &Hda) -> Result<LtsSystem, LtsError> {
    if let Some(d) = a.cells.max_dim().filter(|&d| d > 2) {
        return Err(LtsError::NotTwoTruncated(d));
    }
    if let Err((e1, e2)) = hda::is_extensional(a) {
        return Err(LtsError::NotExtensional(e1, e2));
    }
    let relation = a
        .cells
        .cells(2)
        .map(|x| {
            (
                a.label(a.cells.face(x, 0, 2)).clone(),
                a.label(a.cells.face(x, 0, 1)).clone(),
            )
        })
        .collect();
    LtsSystem::new(a.truncate(1), relation)
}

/// The unit of the adjunction at a 2-truncated extensional HDA `a`: the
/// morphism `a → psi(phi(a))` that is the identity in dimensions ≤ 1 and
/// sends a 2-cube to the filler with the same face tuple. Also returns
/// `psi(phi(a))` itself.
pub fn adjunction_unit(a: &Hda) -> Result<(HdaMorphism, Hda), LtsError> {
    let target = psi(&phi(a)?);
    let mut by_faces: BTreeMap<(Vec<CellId>, Vec<CellId>), CellId> = BTreeMap::new();
    for x in target.cells.cells(2) {
        let f = target.cells.cell_faces(x);
        by_faces.insert((f.front.clone(), f.back.clone()), x);
    }
    let mut cell_map: Vec<Vec<usize>> = vec![
        (0..a.cells.count(0)).collect(),
        (0..a.cells.count(1)).collect(),
    ];
    if a.cells.dims() > 2 {
        let level = a
            .cells
            .cells(2)
            .map(|x| {
                let f = a.cells.cell_faces(x);
                by_faces[&(f.front.clone(), f.back.clone())].idx
            })
            .collect();
        cell_map.push(level);
    }
    let morphism = HdaMorphism {
        cell_map,
        label_map: a.alphabet.iter().map(|l| (l.clone(), l.clone())).collect(),
    };
    Ok((morphism, target))
}

/// The interleaving of two systems: the 1-skeleton of the tensor of the
/// underlying automata, related pairs being the tagged relations of both
/// sides plus every cross pair of one left and one right label.
pub fn interleave(s: &LtsSystem, t: &LtsSystem) -> (LtsSystem, TensorProv) {
    let (product, prov) = hda::tensor_hda(&s.hda, &t.hda);
    let hda = product.truncate(1);
    let mut relation: Relation = BTreeSet::new();
    for (a, b) in &s.relation {
        relation.insert((a.clone().left(), b.clone().left()));
    }
    for (a, b) in &t.relation {
        relation.insert((a.clone().right(), b.clone().right()));
    }
    for a in &s.hda.alphabet {
        for b in &t.hda.alphabet {
            relation.insert((a.clone().left(), b.clone().right()));
        }
    }
    (LtsSystem { hda, relation }, prov)
}

/// The coproduct of two systems: the wedge of the underlying automata with
/// the tagged relations of both sides and no cross pairs.
pub fn coproduct_lts(s: &LtsSystem, t: &LtsSystem) -> (LtsSystem, hda::CoprodProv) {
    let (hda, prov) = hda::coproduct_hda(&s.hda, &t.hda);
    let relation = s
        .relation
        .iter()
        .map(|(a, b)| (a.clone().left(), b.clone().left()))
        .chain(
            t.relation
                .iter()
                .map(|(a, b)| (a.clone().right(), b.clone().right())),
        )
        .collect();
    (LtsSystem { hda, relation }, prov)
}

/// A relation is asymmetric if `a ⋉ b` and `b ⋉ a` never both hold (in
/// particular no `a ⋉ a`). Returns a witness pair otherwise.
pub fn is_asymmetric(relation: &Relation) -> Result<(), (Label, Label)> {
    for (a, b) in relation {
        if relation.contains(&(b.clone(), a.clone())) {
            return Err((a.clone(), b.clone()));
        }
    }
    Ok(())
}

pub fn is_deterministic_lts(t: &LtsSystem) -> Result<(), EdgePair> {
    hda::is_deterministic(&t.hda)
}

/// One defect found by [`check_lts_morphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtsMorphismViolation {
    Hda(MorphismViolation),
    /// A related pair whose image is not related.
    RelationNotPreserved(Label, Label),
}

/// A morphism of systems is an HDA morphism whose label map sends related
/// pairs to related pairs.
pub fn check_lts_morphism(
    f: &HdaMorphism,
    s: &LtsSystem,
    t: &LtsSystem,
) -> Vec<LtsMorphismViolation> {
    let mut out: Vec<LtsMorphismViolation> = hda::check_morphism(f, &s.hda, &t.hda)
        .into_iter()
        .map(LtsMorphismViolation::Hda)
        .collect();
    for (a, b) in &s.relation {
        match (f.label_map.get(a), f.label_map.get(b)) {
            (Some(fa), Some(fb)) if t.relation.contains(&(fa.clone(), fb.clone())) => {}
            _ => out.push(LtsMorphismViolation::RelationNotPreserved(a.clone(), b.clone())),
        }
    }
    out
}
