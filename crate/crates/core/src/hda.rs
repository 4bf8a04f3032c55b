//! Higher-dimensional automata: a labeling layer over precubical sets.
//!
//! An HDA is a precubical set with an initial vertex, a set of final
//! vertices, an alphabet, and an edge labeling such that opposite edges of
//! every 2-cube carry the same label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcs::{self, CellId, PcsBuilder, PrecubicalSet, TensorProv};

/// An edge label. Program-graph-derived systems use `Act`; compositions tag
/// labels with `Left`/`Right` to make the disjoint union of alphabets
/// syntactic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Act { process: usize, action: String },
    Atom(String),
    Left(Box<Label>),
    Right(Box<Label>),
}

impl Label {
    pub fn atom(s: &str) -> Self {
        Label::Atom(s.to_string())
    }

    pub fn act(process: usize, action: &str) -> Self {
        Label::Act { process, action: action.to_string() }
    }

    pub fn left(self) -> Self {
        Label::Left(Box::new(self))
    }

    pub fn right(self) -> Self {
        Label::Right(Box::new(self))
    }

    /// Removes one `Left`/`Right` tag, reporting which side it was.
    pub fn untag(&self) -> Option<(crate::pcs::Side, &Label)> {
        match self {
            Label::Left(inner) => Some((crate::pcs::Side::Left, inner)),
            Label::Right(inner) => Some((crate::pcs::Side::Right, inner)),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Act { process, action } => write!(f, "({process},{action})"),
            Label::Atom(s) => write!(f, "{s}"),
            Label::Left(l) => write!(f, "L·{l}"),
            Label::Right(l) => write!(f, "R·{l}"),
        }
    }
}

/// A higher-dimensional automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hda {
    pub cells: PrecubicalSet,
    pub initial: CellId,
    pub finals: BTreeSet<CellId>,
    pub alphabet: BTreeSet<Label>,
    /// Label per edge, indexed by edge index.
    pub labels: Vec<Label>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HdaError {
    #[error("initial cell {0:?} is not a vertex of the automaton")]
    BadInitial(CellId),
    #[error("labeling must cover exactly the {expected} edges, got {got}")]
    BadLabeling { expected: usize, got: usize },
}

/// One defect found by [`validate_hda`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HdaViolation {
    /// `d^0_i x` and `d^1_i x` of the 2-cell `x` have different labels.
    OppositeLabels { cell: CellId, i: usize, front: Label, back: Label },
    LabelOutsideAlphabet { edge: CellId, label: Label },
    BadInitial(CellId),
    BadFinal(CellId),
    FaceRelation(pcs::RelationViolation),
}

impl Hda {
    pub fn new(
        cells: PrecubicalSet,
        initial: CellId,
        finals: BTreeSet<CellId>,
        alphabet: BTreeSet<Label>,
        labels: Vec<Label>,
    ) -> Result<Self, HdaError> {
        if initial.dim != 0 || !cells.contains(initial) {
            return Err(HdaError::BadInitial(initial));
        }
        if labels.len() != cells.count(1) {
            return Err(HdaError::BadLabeling { expected: cells.count(1), got: labels.len() });
        }
        Ok(Hda { cells, initial, finals, alphabet, labels })
    }

    pub fn label(&self, e: CellId) -> &Label {
        assert_eq!(e.dim, 1);
        &self.labels[e.idx]
    }

    /// The `n`-skeleton; the label condition is preserved by truncation.
    pub fn truncate(&self, n: usize) -> Hda {
        let cells = self.cells.truncate(n);
        let labels = if n == 0 { Vec::new() } else { self.labels.clone() };
        Hda {
            cells,
            initial: self.initial,
            finals: self.finals.clone(),
            alphabet: self.alphabet.clone(),
            labels,
        }
    }
}

/// Checks the 2-cell label condition, alphabet membership of every label,
/// initial/final placement, and the precubical relations.
pub fn validate_hda(a: &Hda) -> Vec<HdaViolation> {
    let mut out = Vec::new();
    if a.initial.dim != 0 || !a.cells.contains(a.initial) {
        out.push(HdaViolation::BadInitial(a.initial));
    }
    for &f in &a.finals {
        if f.dim != 0 || !a.cells.contains(f) {
            out.push(HdaViolation::BadFinal(f));
        }
    }
    for e in a.cells.cells(1) {
        let l = a.label(e);
        if !a.alphabet.contains(l) {
            out.push(HdaViolation::LabelOutsideAlphabet { edge: e, label: l.clone() });
        }
    }
    for x in a.cells.cells(2) {
        for i in 1..=2 {
            let front = a.label(a.cells.face(x, 0, i)).clone();
            let back = a.label(a.cells.face(x, 1, i)).clone();
            if front != back {
                out.push(HdaViolation::OppositeLabels { cell: x, i, front, back });
            }
        }
    }
    out.extend(a.cells.validate().into_iter().map(HdaViolation::FaceRelation));
    out
}

/// A witness pair of distinct edges violating a predicate.
pub type EdgePair = (CellId, CellId);

/// An HDA is extensional if no two distinct edges share label, start, and
/// end vertex. Returns a witness pair when the check fails.
pub fn is_extensional(a: &Hda) -> Result<(), EdgePair> {
    let mut seen: BTreeMap<(CellId, CellId, &Label), CellId> = BTreeMap::new();
    for e in a.cells.cells(1) {
        let key = (a.cells.edge_src(e), a.cells.edge_dst(e), a.label(e));
        if let Some(&other) = seen.get(&key) {
            return Err((other, e));
        }
        seen.insert(key, e);
    }
    Ok(())
}

/// An HDA is deterministic if edges are determined by start vertex and
/// label.
pub fn is_deterministic(a: &Hda) -> Result<(), EdgePair> {
    let mut seen: BTreeMap<(CellId, &Label), CellId> = BTreeMap::new();
    for e in a.cells.cells(1) {
        let key = (a.cells.edge_src(e), a.label(e));
        if let Some(&other) = seen.get(&key) {
            return Err((other, e));
        }
        seen.insert(key, e);
    }
    Ok(())
}

/// The tensor product of HDAs: cells are the tensor of the cell sets,
/// initial is the pair of initials, finals the product of finals, and the
/// alphabet the tagged disjoint union.
pub fn tensor_hda(a: &Hda, b: &Hda) -> (Hda, TensorProv) {
    let (cells, prov) = pcs::tensor(&a.cells, &b.cells);
    let initial = prov.pair(a.initial, b.initial);
    let mut finals = BTreeSet::new();
    for &fa in &a.finals {
        for &fb in &b.finals {
            finals.insert(prov.pair(fa, fb));
        }
    }
    let alphabet: BTreeSet<Label> = a
        .alphabet
        .iter()
        .map(|l| l.clone().left())
        .chain(b.alphabet.iter().map(|l| l.clone().right()))
        .collect();
    let labels = cells
        .cells(1)
        .map(|e| {
            let (x, y) = prov.split(e);
            if x.dim == 1 {
                a.label(x).clone().left()
            } else {
                b.label(y).clone().right()
            }
        })
        .collect();
    (
        Hda { cells, initial, finals, alphabet, labels },
        prov,
    )
}

/// Which wedge summand a coproduct cell came from. The shared basepoint is
/// reported as `Left` of the first automaton's initial vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoprodCell {
    Left(CellId),
    Right(CellId),
}

/// Provenance of a coproduct: maps summand cells to coproduct cells and
/// back. Vertices are laid out basepoint first, then the non-initial
/// vertices of `A`, then those of `B`; in higher dimensions `A`-cells
/// precede `B`-cells.
#[derive(Debug, Clone)]
pub struct CoprodProv {
    a_counts: Vec<usize>,
    a_initial: usize,
    b_initial: usize,
}

impl CoprodProv {
    pub fn from_left(&self, x: CellId) -> CellId {
        if x.dim == 0 {
            if x.idx == self.a_initial {
                CellId::new(0, 0)
            } else {
                CellId::new(0, 1 + x.idx - usize::from(x.idx > self.a_initial))
            }
        } else {
            x
        }
    }

    pub fn from_right(&self, y: CellId) -> CellId {
        if y.dim == 0 {
            if y.idx == self.b_initial {
                CellId::new(0, 0)
            } else {
                let a_vertices = self.a_counts[0] - 1;
                CellId::new(0, 1 + a_vertices + y.idx - usize::from(y.idx > self.b_initial))
            }
        } else {
            CellId::new(y.dim, self.a_counts.get(y.dim).copied().unwrap_or(0) + y.idx)
        }
    }

    pub fn split(&self, z: CellId) -> CoprodCell {
        if z.dim == 0 {
            if z.idx == 0 {
                return CoprodCell::Left(CellId::new(0, self.a_initial));
            }
            let a_vertices = self.a_counts[0] - 1;
            if z.idx <= a_vertices {
                let raw = z.idx - 1;
                return CoprodCell::Left(CellId::new(0, raw + usize::from(raw >= self.a_initial)));
            }
            let raw = z.idx - 1 - a_vertices;
            return CoprodCell::Right(CellId::new(0, raw + usize::from(raw >= self.b_initial)));
        }
        let a = self.a_counts.get(z.dim).copied().unwrap_or(0);
        if z.idx < a {
            CoprodCell::Left(z)
        } else {
            CoprodCell::Right(CellId::new(z.dim, z.idx - a))
        }
    }
}

/// The coproduct of HDAs: the wedge of the two cell sets at their initial
/// vertices, with finals `({I_A} × F_B) ∪ (F_A × {I_B})` and tagged
/// labels. Extensionality is preserved.
pub fn coproduct_hda(a: &Hda, b: &Hda) -> (Hda, CoprodProv) {
    let prov = CoprodProv {
        a_counts: (0..a.cells.dims()).map(|n| a.cells.count(n)).collect(),
        a_initial: a.initial.idx,
        b_initial: b.initial.idx,
    };
    let mut builder = PcsBuilder::new();
    builder.add_vertices(a.cells.count(0) + b.cells.count(0) - 1);
    let dims = a.cells.dims().max(b.cells.dims());
    for n in 1..dims {
        for x in a.cells.cells(n) {
            let f = a.cells.cell_faces(x);
            let front = f.front.iter().map(|&c| prov.from_left(c)).collect();
            let back = f.back.iter().map(|&c| prov.from_left(c)).collect();
            builder.add_cell(front, back).unwrap();
        }
        for y in b.cells.cells(n) {
            let f = b.cells.cell_faces(y);
            let front = f.front.iter().map(|&c| prov.from_right(c)).collect();
            let back = f.back.iter().map(|&c| prov.from_right(c)).collect();
            builder.add_cell(front, back).unwrap();
        }
    }
    let cells = builder.build();
    let alphabet: BTreeSet<Label> = a
        .alphabet
        .iter()
        .map(|l| l.clone().left())
        .chain(b.alphabet.iter().map(|l| l.clone().right()))
        .collect();
    let labels = a
        .labels
        .iter()
        .map(|l| l.clone().left())
        .chain(b.labels.iter().map(|l| l.clone().right()))
        .collect();
    let finals = a
        .finals
        .iter()
        .map(|&f| prov.from_left(f))
        .chain(b.finals.iter().map(|&f| prov.from_right(f)))
        .collect();
    (
        Hda { cells, initial: CellId::new(0, 0), finals, alphabet, labels },
        prov,
    )
}

/// A morphism of HDAs: a dimension-preserving cell map plus a label map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdaMorphism {
    /// `cell_map[n][i]` is the image index of cell `(n, i)`.
    pub cell_map: Vec<Vec<usize>>,
    pub label_map: BTreeMap<Label, Label>,
}

impl HdaMorphism {
    pub fn identity(a: &Hda) -> Self {
        HdaMorphism {
            cell_map: (0..a.cells.dims()).map(|n| (0..a.cells.count(n)).collect()).collect(),
            label_map: a.alphabet.iter().map(|l| (l.clone(), l.clone())).collect(),
        }
    }

    pub fn apply(&self, x: CellId) -> CellId {
        CellId::new(x.dim, self.cell_map[x.dim][x.idx])
    }

    pub fn apply_label(&self, l: &Label) -> &Label {
        &self.label_map[l]
    }

    /// `self` after `first` (i.e. `self ∘ first`).
    pub fn compose(&self, first: &HdaMorphism) -> HdaMorphism {
        HdaMorphism {
            cell_map: first
                .cell_map
                .iter()
                .enumerate()
                .map(|(n, level)| level.iter().map(|&i| self.cell_map[n][i]).collect())
                .collect(),
            label_map: first
                .label_map
                .iter()
                .map(|(l, m)| (l.clone(), self.label_map[m].clone()))
                .collect(),
        }
    }

    /// True when every dimension's cell map is a bijection onto `b`.
    pub fn is_bijective(&self, b: &Hda) -> bool {
        let dims = self.cell_map.len().max(b.cells.dims());
        (0..dims).all(|n| {
            let level = self.cell_map.get(n).map(|v| v.as_slice()).unwrap_or(&[]);
            let mut seen = vec![false; b.cells.count(n)];
            level.len() == b.cells.count(n)
                && level.iter().all(|&i| {
                    if i < seen.len() && !seen[i] {
                        seen[i] = true;
                        true
                    } else {
                        false
                    }
                })
        })
    }
}

/// One defect found by [`check_morphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    MissingImage(CellId),
    BadImage { cell: CellId, image: CellId },
    FaceMismatch { cell: CellId, k: u8, i: usize },
    InitialNotPreserved,
    FinalNotPreserved(CellId),
    LabelMismatch { edge: CellId, expected: Label, got: Label },
    LabelUnmapped(Label),
}

/// Verifies that `(f, σ)` is a morphism of HDAs `a → b`: the cell map is
/// total, dimension-preserving, commutes with every face operator, sends
/// initial to initial and finals into finals, and the labeling commutes.
pub fn check_morphism(f: &HdaMorphism, a: &Hda, b: &Hda) -> Vec<MorphismViolation> {
    let mut out = Vec::new();
    for l in &a.alphabet {
        if !f.label_map.contains_key(l) {
            out.push(MorphismViolation::LabelUnmapped(l.clone()));
        }
    }
    for n in 0..a.cells.dims() {
        for x in a.cells.cells(n) {
            let Some(level) = f.cell_map.get(n) else {
                out.push(MorphismViolation::MissingImage(x));
                continue;
            };
            let Some(&img) = level.get(x.idx) else {
                out.push(MorphismViolation::MissingImage(x));
                continue;
            };
            let y = CellId::new(n, img);
            if !b.cells.contains(y) {
                out.push(MorphismViolation::BadImage { cell: x, image: y });
                continue;
            }
            for i in 1..=n {
                for k in 0..2u8 {
                    if f.apply(a.cells.face(x, k, i)) != b.cells.face(y, k, i) {
                        out.push(MorphismViolation::FaceMismatch { cell: x, k, i });
                    }
                }
            }
            if n == 1 {
                let expected = f.label_map.get(a.label(x));
                if expected != Some(b.label(y)) {
                    out.push(MorphismViolation::LabelMismatch {
                        edge: x,
                        expected: expected.cloned().unwrap_or_else(|| a.label(x).clone()),
                        got: b.label(y).clone(),
                    });
                }
            }
        }
    }
    if out.iter().all(|v| !matches!(v, MorphismViolation::MissingImage(_))) {
        if f.apply(a.initial) != b.initial {
            out.push(MorphismViolation::InitialNotPreserved);
        }
        for &fin in &a.finals {
            if !b.finals.contains(&f.apply(fin)) {
                out.push(MorphismViolation::FinalNotPreserved(fin));
            }
        }
    }
    out
}
