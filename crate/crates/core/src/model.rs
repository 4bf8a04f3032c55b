//! The cube-filling model construction and its verification.
//!
//! Starting from a transition system with a relation on labels, the model
//! is built dimension by dimension: independence squares become 2-cubes,
//! and every compatible family of boundary cubes at dimension `m − 1` is
//! filled by a unique `m`-cube. The result is characterized by four
//! properties (HM1–HM4): its 1-skeleton is the given system, 2-cube label
//! pairs are related, cells are determined by their face tuples, and no
//! further cube can be added. [`check_hm`] verifies these, and a
//! brute-force enumeration of cube skeleta serves as an independent oracle
//! for the filled cells.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hda::{self, Hda, HdaMorphism, Label};
use crate::lts::{self, LtsSystem};
use crate::pcs::{skeleton_map, CellId, CubeSkeletonMap, PcsBuilder};

/// The prospective boundary of an `m`-cube: `front[i-1]` and `back[i-1]`
/// are the `(m−1)`-cells standing for `d^0_i` and `d^1_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FaceFamily {
    pub m: usize,
    pub front: Vec<CellId>,
    pub back: Vec<CellId>,
}

impl FaceFamily {
    pub fn face(&self, k: u8, i: usize) -> CellId {
        if k == 0 {
            self.front[i - 1]
        } else {
            self.back[i - 1]
        }
    }

    /// Checks `d^k_i x^l_j = d^l_{j−1} x^k_i` for all `k, l` and
    /// `1 ≤ i < j ≤ m` against the face structure of `a`.
    pub fn is_compatible(&self, a: &Hda) -> bool {
        (1..=self.m).all(|j| {
            (1..j).all(|i| {
                [0u8, 1].iter().all(|&k| {
                    [0u8, 1].iter().all(|&l| {
                        a.cells.face(self.face(l, j), k, i)
                            == a.cells.face(self.face(k, i), l, j - 1)
                    })
                })
            })
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("label {0} on an independence-square edge satisfies {0} ⋉ {0}; the filling is infinite-dimensional, a dimension cap is required")]
    TerminationGuard(Label),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no filler exists for the image boundary of cell {cell:?}; the target automaton is not a model")]
    MissingFiller { cell: CellId },
    #[error("the canonical morphism is not bijective in dimension {0}")]
    NotBijective(usize),
    #[error("cells {0:?} and {1:?} both match a (vertex, label-set) query")]
    MultipleCubes(CellId, CellId),
}

/// Candidate enumeration order inside [`fill_dimension_ordered`]. The
/// output is a sorted set either way; this exists to demonstrate that the
/// construction does not depend on traversal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumOrder {
    Forward,
    Reverse,
}

fn ordered<T: Clone>(items: &[T], order: EnumOrder) -> Vec<T> {
    match order {
        EnumOrder::Forward => items.to_vec(),
        EnumOrder::Reverse => items.iter().rev().cloned().collect(),
    }
}

/// All boundaries of addable-or-present `m`-cubes over the `(m−1)`-skeleton
/// of `a`: independence squares for `m = 2`, compatible face families for
/// `m ≥ 3`.
pub fn fill_dimension(a: &Hda, m: usize, t: &LtsSystem) -> BTreeSet<FaceFamily> {
    fill_dimension_ordered(a, m, t, EnumOrder::Forward)
}

pub fn fill_dimension_ordered(
    a: &Hda,
    m: usize,
    t: &LtsSystem,
    order: EnumOrder,
) -> BTreeSet<FaceFamily> {
    assert!(m >= 2);
    if m == 2 {
        return lts::squares_of(a, &t.relation)
            .into_iter()
            .map(|sq| FaceFamily {
                m: 2,
                front: vec![sq.front1, sq.front2],
                back: vec![sq.back1, sq.back2],
            })
            .collect();
    }
    let n = m - 1;
    // candidates for slot x^k_i are (m−1)-cells whose front face in the
    // last direction matches the corresponding face of x^0_m
    let mut by_front_n: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    let mut by_tuple: BTreeMap<(Vec<CellId>, Vec<CellId>), CellId> = BTreeMap::new();
    for y in a.cells.cells(n) {
        by_front_n.entry(a.cells.face(y, 0, n)).or_default().push(y);
        let f = a.cells.cell_faces(y);
        by_tuple.entry((f.front.clone(), f.back.clone())).or_insert(y);
    }
    let empty = Vec::new();
    let candidates =
        |face: CellId| ordered(by_front_n.get(&face).map(|v| v.as_slice()).unwrap_or(&empty), order);

    // chosen[t] is the slot pair (x^0_i, x^1_i) for i = n − t
    fn pairwise_ok(
        a: &Hda,
        n: usize,
        k: u8,
        i: usize,
        cand: CellId,
        chosen: &[(CellId, CellId)],
    ) -> bool {
        chosen.iter().enumerate().all(|(t, &(c0, c1))| {
            let j = n - t;
            [(0u8, c0), (1u8, c1)].iter().all(|&(l, xlj)| {
                a.cells.face(xlj, k, i) == a.cells.face(cand, l, j - 1)
            })
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &Hda,
        n: usize,
        m: usize,
        x0m: CellId,
        i: usize,
        chosen: &mut Vec<(CellId, CellId)>,
        candidates: &dyn Fn(CellId) -> Vec<CellId>,
        by_tuple: &BTreeMap<(Vec<CellId>, Vec<CellId>), CellId>,
        out: &mut BTreeSet<FaceFamily>,
    ) {
        if i == 0 {
            // close with x^1_m: its full face tuple is forced
            let front: Vec<CellId> =
                (1..=n).map(|i| a.cells.face(chosen[n - i].0, 1, n)).collect();
            let back: Vec<CellId> =
                (1..=n).map(|i| a.cells.face(chosen[n - i].1, 1, n)).collect();
            if let Some(&x1m) = by_tuple.get(&(front, back)) {
                let mut front: Vec<CellId> = (1..=n).map(|i| chosen[n - i].0).collect();
                let mut back: Vec<CellId> = (1..=n).map(|i| chosen[n - i].1).collect();
                front.push(x0m);
                back.push(x1m);
                out.insert(FaceFamily { m, front, back });
            }
            return;
        }
        for c0 in candidates(a.cells.face(x0m, 0, i)) {
            if !pairwise_ok(a, n, 0, i, c0, chosen) {
                continue;
            }
            for c1 in candidates(a.cells.face(x0m, 1, i)) {
                if !pairwise_ok(a, n, 1, i, c1, chosen) {
                    continue;
                }
                chosen.push((c0, c1));
                rec(a, n, m, x0m, i - 1, chosen, candidates, by_tuple, out);
                chosen.pop();
            }
        }
    }

    let mut out = BTreeSet::new();
    let tops: Vec<CellId> = a.cells.cells(n).collect();
    for x0m in ordered(&tops, order) {
        let mut chosen = Vec::new();
        rec(a, n, m, x0m, n, &mut chosen, &candidates, &by_tuple, &mut out);
    }
    out
}

/// Appends the cells described by `fams` as a new top dimension.
fn with_new_dimension(a: &Hda, fams: &BTreeSet<FaceFamily>) -> Hda {
    let mut b = PcsBuilder::new();
    b.add_vertices(a.cells.count(0));
    for n in 1..a.cells.dims() {
        for x in a.cells.cells(n) {
            let f = a.cells.cell_faces(x);
            b.add_cell(f.front.clone(), f.back.clone()).unwrap();
        }
    }
    for fam in fams {
        b.add_cell(fam.front.clone(), fam.back.clone()).unwrap();
    }
    Hda {
        cells: b.build(),
        initial: a.initial,
        finals: a.finals.clone(),
        alphabet: a.alphabet.clone(),
        labels: a.labels.clone(),
    }
}

/// The labels occurring on edges of independence squares of `t`.
fn square_edge_labels(t: &LtsSystem) -> BTreeSet<Label> {
    t.independence_squares()
        .into_iter()
        .flat_map(|sq| [sq.front1, sq.front2, sq.back1, sq.back2])
        .map(|e| t.hda.label(e).clone())
        .collect()
}

/// Builds the model of `t` by iterative cube filling. Dimensions ≤ 2 are
/// the square filling of `t`; each higher dimension adds one cube per
/// compatible face family, with cell indices assigned in lexicographic
/// face-tuple order. Construction stops at the first empty dimension, or
/// at `max_dim` when supplied.
///
/// If some label on an independence-square edge is related to itself the
/// filling never terminates, so `max_dim` is then mandatory.
pub fn hda_model(t: &LtsSystem, max_dim: Option<usize>) -> Result<Hda, ModelError> {
    hda_model_ordered(t, max_dim, EnumOrder::Forward)
}

pub fn hda_model_ordered(
    t: &LtsSystem,
    max_dim: Option<usize>,
    order: EnumOrder,
) -> Result<Hda, ModelError> {
    if max_dim.is_none() {
        for l in square_edge_labels(t) {
            if t.relation.contains(&(l.clone(), l.clone())) {
                return Err(ModelError::TerminationGuard(l));
            }
        }
    }
    let mut a = lts::psi(t);
    if let Some(d) = max_dim {
        if d < 2 {
            return Ok(a.truncate(d));
        }
    }
    let mut m = 3;
    while max_dim.map_or(true, |d| m <= d) {
        let fams = fill_dimension_ordered(&a, m, t, order);
        if fams.is_empty() {
            break;
        }
        a = with_new_dimension(&a, &fams);
        m += 1;
    }
    Ok(a)
}

/// All ways to map the vertices and edges of the standard `m`-cube into `t`
/// such that edge endpoints match and every 2-face's edge 4-tuple is an
/// independence square. This is an exponential-time oracle for the cells
/// produced by [`hda_model`], intended for small `m` and tiny systems.
pub fn brute_force_coskeleton(t: &LtsSystem, m: usize) -> BTreeSet<CubeSkeletonMap> {
    assert!(m >= 2);
    let a = &t.hda;
    let squares = t.independence_squares();
    let corners = 1usize << m;
    // edge slots in assignment order: level by level in the base corner's
    // bit count, so each slot's source corner is already assigned
    let mut slots: Vec<(usize, usize)> = Vec::new(); // (direction i, base corner code)
    for level in 0..m {
        for code in 0..corners {
            if (code as u32).count_ones() as usize != level {
                continue;
            }
            for i in 1..=m {
                if code >> (i - 1) & 1 == 0 {
                    slots.push((i, code));
                }
            }
        }
    }
    let slot_pos: BTreeMap<(usize, usize), usize> =
        slots.iter().enumerate().map(|(p, &s)| (s, p)).collect();
    // squares completable after each slot, as slot positions
    let mut checks_at: Vec<Vec<[usize; 4]>> = vec![Vec::new(); slots.len()];
    for code in 0..corners {
        for j in 1..=m {
            for i in 1..j {
                if code >> (i - 1) & 1 == 1 || code >> (j - 1) & 1 == 1 {
                    continue;
                }
                let quad = [
                    slot_pos[&(j, code)],                  // front1
                    slot_pos[&(i, code)],                  // front2
                    slot_pos[&(j, code | 1 << (i - 1))],   // back1
                    slot_pos[&(i, code | 1 << (j - 1))],   // back2
                ];
                checks_at[*quad.iter().max().unwrap()].push(quad);
            }
        }
    }
    let mut by_src: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for e in a.cells.cells(1) {
        by_src.entry(a.cells.edge_src(e)).or_default().push(e);
    }

    let mut out = BTreeSet::new();
    let mut vertices: Vec<Option<CellId>> = vec![None; corners];
    let mut edges: Vec<CellId> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: &Hda,
        m: usize,
        slots: &[(usize, usize)],
        checks_at: &[Vec<[usize; 4]>],
        squares: &BTreeSet<lts::IndependenceSquare>,
        by_src: &BTreeMap<CellId, Vec<CellId>>,
        vertices: &mut Vec<Option<CellId>>,
        edges: &mut Vec<CellId>,
        out: &mut BTreeSet<CubeSkeletonMap>,
    ) {
        let pos = edges.len();
        if pos == slots.len() {
            out.insert(to_map(m, slots, vertices, edges));
            return;
        }
        let (i, code) = slots[pos];
        let src = vertices[code].expect("source corner assigned by construction");
        let dst_code = code | 1 << (i - 1);
        let Some(cands) = by_src.get(&src) else { return };
        for &e in cands {
            let dst = a.cells.edge_dst(e);
            match vertices[dst_code] {
                Some(v) if v != dst => continue,
                _ => {}
            }
            let had = vertices[dst_code];
            vertices[dst_code] = Some(dst);
            edges.push(e);
            let ok = checks_at[pos].iter().all(|q| {
                squares.contains(&lts::IndependenceSquare {
                    front1: edges[q[0]],
                    front2: edges[q[1]],
                    back1: edges[q[2]],
                    back2: edges[q[3]],
                })
            });
            if ok {
                rec(a, m, slots, checks_at, squares, by_src, vertices, edges, out);
            }
            edges.pop();
            vertices[dst_code] = had;
        }
    }
    fn to_map(
        m: usize,
        slots: &[(usize, usize)],
        vertices: &[Option<CellId>],
        edges: &[CellId],
    ) -> CubeSkeletonMap {
        let bits = |code: usize| (0..m).map(|j| (code >> j & 1) as u8).collect::<Vec<u8>>();
        CubeSkeletonMap {
            m,
            vertices: vertices
                .iter()
                .enumerate()
                .map(|(c, v)| (bits(c), v.expect("all corners assigned")))
                .collect(),
            edges: slots
                .iter()
                .zip(edges)
                .map(|(&(i, code), &e)| ((i, bits(code)), e))
                .collect(),
        }
    }
    for v in a.cells.cells(0) {
        vertices[0] = Some(v);
        rec(a, m, &slots, &checks_at, &squares, &by_src, &mut vertices, &mut edges, &mut out);
        vertices[0] = None;
    }
    out
}

/// The verdicts of the four model properties, each with a witness on
/// failure: a description of the 1-skeleton mismatch (HM1), a 2-cell with
/// unrelated labels (HM2), two cells sharing a face tuple (HM3), or an
/// addable filler (HM4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmReport {
    pub hm1: Result<(), String>,
    pub hm2: Result<(), CellId>,
    pub hm3: Result<(), (CellId, CellId)>,
    pub hm4: Result<(), FaceFamily>,
}

impl HmReport {
    pub fn all_pass(&self) -> bool {
        self.hm1.is_ok() && self.hm2.is_ok() && self.hm3.is_ok() && self.hm4.is_ok()
    }
}

fn check_hm1(a: &Hda, t: &LtsSystem) -> Result<(), String> {
    let sk = a.truncate(1);
    let u = &t.hda;
    if sk.cells != u.cells {
        return Err("1-skeleton cell structure differs from the system".into());
    }
    if sk.labels != u.labels {
        return Err("edge labeling differs from the system".into());
    }
    if sk.initial != u.initial {
        return Err(format!("initial vertex {:?} differs from {:?}", sk.initial, u.initial));
    }
    if sk.finals != u.finals {
        return Err("final vertices differ from the system".into());
    }
    if sk.alphabet != u.alphabet {
        return Err("alphabet differs from the system".into());
    }
    Ok(())
}

fn check_hm2(a: &Hda, t: &LtsSystem) -> Result<(), CellId> {
    for x in a.cells.cells(2) {
        let pair = (
            a.label(a.cells.face(x, 0, 2)).clone(),
            a.label(a.cells.face(x, 0, 1)).clone(),
        );
        if !t.relation.contains(&pair) {
            return Err(x);
        }
    }
    Ok(())
}

fn check_hm3(a: &Hda) -> Result<(), (CellId, CellId)> {
    for n in 2..a.cells.dims() {
        let mut seen: BTreeMap<(&[CellId], &[CellId]), CellId> = BTreeMap::new();
        for x in a.cells.cells(n) {
            let f = a.cells.cell_faces(x);
            if let Some(&other) = seen.get(&(f.front.as_slice(), f.back.as_slice())) {
                return Err((other, x));
            }
            seen.insert((&f.front, &f.back), x);
        }
    }
    Ok(())
}

fn check_hm4(a: &Hda, t: &LtsSystem, max_dim: Option<usize>) -> Result<(), FaceFamily> {
    // an (m+1)-family needs 2m+2 cells of dimension m, so one dimension
    // past the first empty one is far enough
    let first_empty = (2..).find(|&m| a.cells.count(m) == 0).unwrap();
    let limit = max_dim.unwrap_or(first_empty + 1);
    for m in 2..=limit {
        let present: BTreeSet<FaceFamily> = a
            .cells
            .cells(m)
            .map(|x| {
                let f = a.cells.cell_faces(x);
                FaceFamily { m, front: f.front.clone(), back: f.back.clone() }
            })
            .collect();
        for fam in fill_dimension(a, m, t) {
            if !present.contains(&fam) {
                return Err(fam);
            }
        }
    }
    Ok(())
}

/// Verifies HM1–HM4 of `a` with respect to `t`. Maximality (HM4) is
/// checked by a saturation pass at every dimension up to one past the
/// first empty dimension, or up to `max_dim` when the model was built with
/// a dimension cap.
pub fn check_hm(a: &Hda, t: &LtsSystem, max_dim: Option<usize>) -> HmReport {
    HmReport {
        hm1: check_hm1(a, t),
        hm2: check_hm2(a, t),
        hm3: check_hm3(a),
        hm4: check_hm4(a, t, max_dim),
    }
}

/// Extends a system morphism `f: s → t` to the unique HDA morphism
/// `a → b`, where `a` satisfies HM1–HM2 over `s` and `b` is a model of
/// `t`. The image of a cell of dimension ≥ 2 is the unique filler of the
/// image of its boundary. All hypotheses are checked.
pub fn extend_morphism(
    f: &HdaMorphism,
    s: &LtsSystem,
    t: &LtsSystem,
    a: &Hda,
    b: &Hda,
    max_dim: Option<usize>,
) -> Result<HdaMorphism, ModelError> {
    if !lts::check_lts_morphism(f, s, t).is_empty() {
        return Err(ModelError::Hypothesis("f is not a morphism of systems".into()));
    }
    let ra = check_hm(a, s, max_dim);
    if ra.hm1.is_err() || ra.hm2.is_err() {
        return Err(ModelError::Hypothesis(
            "source automaton does not satisfy HM1–HM2 over its system".into(),
        ));
    }
    if !check_hm(b, t, max_dim).all_pass() {
        return Err(ModelError::Hypothesis("target automaton is not a model of its system".into()));
    }
    let mut cell_map: Vec<Vec<usize>> = vec![
        f.cell_map[0].clone(),
        f.cell_map.get(1).cloned().unwrap_or_default(),
    ];
    for n in 2..a.cells.dims() {
        let mut by_tuple: BTreeMap<(Vec<CellId>, Vec<CellId>), CellId> = BTreeMap::new();
        for y in b.cells.cells(n) {
            let fc = b.cells.cell_faces(y);
            by_tuple.insert((fc.front.clone(), fc.back.clone()), y);
        }
        let apply = |x: CellId| CellId::new(x.dim, cell_map[x.dim][x.idx]);
        let mut level = Vec::with_capacity(a.cells.count(n));
        for x in a.cells.cells(n) {
            let fc = a.cells.cell_faces(x);
            let key = (
                fc.front.iter().map(|&c| apply(c)).collect(),
                fc.back.iter().map(|&c| apply(c)).collect(),
            );
            match by_tuple.get(&key) {
                Some(&y) => level.push(y.idx),
                None => return Err(ModelError::MissingFiller { cell: x }),
            }
        }
        cell_map.push(level);
    }
    let out = HdaMorphism { cell_map, label_map: f.label_map.clone() };
    if !hda::check_morphism(&out, a, b).is_empty() {
        return Err(ModelError::Hypothesis("extension fails the morphism laws".into()));
    }
    Ok(out)
}

/// The unique morphism `a → b` between two models of `t` restricting to
/// the identity on the underlying system, verified bijective in every
/// dimension.
pub fn canonical_iso(
    a: &Hda,
    b: &Hda,
    t: &LtsSystem,
    max_dim: Option<usize>,
) -> Result<HdaMorphism, ModelError> {
    let id = HdaMorphism::identity(&t.hda);
    let f = extend_morphism(&id, t, t, a, b, max_dim)?;
    if !f.is_bijective(b) {
        let bad = (0..b.cells.dims().max(f.cell_map.len()))
            .find(|&n| {
                let level = f.cell_map.get(n).map(|v| v.len()).unwrap_or(0);
                level != b.cells.count(n)
                    || f.cell_map[n].iter().collect::<BTreeSet<_>>().len() != level
            })
            .unwrap_or(0);
        return Err(ModelError::NotBijective(bad));
    }
    Ok(f)
}

/// Looks up the at-most-one `n`-cube of `a` whose bottom corner is `v` and
/// whose front-edge labels are exactly `labels`. Requires `t`
/// deterministic with an asymmetric relation and `a` satisfying HM1–HM3
/// over `t`; under these hypotheses two matches are impossible and are
/// reported as an error.
pub fn unique_cube_lookup(
    a: &Hda,
    t: &LtsSystem,
    v: CellId,
    labels: &BTreeSet<Label>,
) -> Result<Option<CellId>, ModelError> {
    if let Err((e1, e2)) = lts::is_deterministic_lts(t) {
        return Err(ModelError::Hypothesis(format!(
            "system is not deterministic: edges {e1:?} and {e2:?}"
        )));
    }
    if let Err((x, y)) = lts::is_asymmetric(&t.relation) {
        return Err(ModelError::Hypothesis(format!("relation is not asymmetric: {x} ⋉ {y}")));
    }
    let r = check_hm(a, t, Some(a.cells.dims().saturating_sub(1)));
    if r.hm1.is_err() || r.hm2.is_err() || r.hm3.is_err() {
        return Err(ModelError::Hypothesis("automaton does not satisfy HM1–HM3".into()));
    }
    let n = labels.len();
    if n == 0 {
        return Ok(Some(v));
    }
    // resolve each label to its unique edge at v
    let mut edge_of: BTreeMap<&Label, CellId> = BTreeMap::new();
    for e in a.cells.cells(1) {
        if a.cells.edge_src(e) == v && labels.contains(a.label(e)) {
            edge_of.insert(a.label(e), e);
        }
    }
    if edge_of.len() < n {
        return Ok(None);
    }
    // order the labels into a ⋉-chain; asymmetry makes it unique
    let mut items: Vec<&Label> = edge_of.keys().copied().collect();
    let Some(chain) = chain_order(&mut items, &t.relation) else {
        return Ok(None);
    };
    let want: Vec<CellId> = chain.iter().map(|l| edge_of[*l]).collect();
    let mut found = None;
    for x in a.cells.cells(n) {
        let sk = skeleton_map(&a.cells, x);
        if sk.bottom_vertex() == v && sk.front_edges() == want {
            if let Some(prev) = found {
                return Err(ModelError::MultipleCubes(prev, x));
            }
            found = Some(x);
        }
    }
    Ok(found)
}

/// Sorts `items` so every earlier label is related to every later one;
/// `None` when no such order exists. For an asymmetric relation at most
/// one order can qualify.
fn chain_order<'a>(
    items: &mut Vec<&'a Label>,
    relation: &lts::Relation,
) -> Option<Vec<&'a Label>> {
    let n = items.len();
    let mut chain: Vec<&Label> = Vec::with_capacity(n);
    let mut remaining = items.clone();
    for _ in 0..n {
        let pos = remaining.iter().position(|&c| {
            remaining
                .iter()
                .all(|&o| o == c || relation.contains(&(c.clone(), o.clone())))
        })?;
        chain.push(remaining.remove(pos));
    }
    Some(chain)
}
