//! Precubical-set combinatorics.
//!
//! A precubical set is a graded set with front (`k = 0`) and back (`k = 1`)
//! face operators `d^k_i` satisfying `d^k_i d^l_j = d^l_{j-1} d^k_i` for
//! `i < j`. Cells are identified by `(dimension, dense index)` and face maps
//! are stored explicitly so face lookup is O(1).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

/// Identifier of a cell within one [`PrecubicalSet`]: dimension plus a dense
/// per-dimension index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub dim: usize,
    pub idx: usize,
}

impl CellId {
    pub fn new(dim: usize, idx: usize) -> Self {
        CellId { dim, idx }
    }
}

/// The two face arrays of a single cell of dimension `n > 0`; each has
/// length `n`, entry `i - 1` giving `d^k_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellFaces {
    pub front: Vec<CellId>,
    pub back: Vec<CellId>,
}

/// A finite precubical set with explicitly stored face maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrecubicalSet {
    counts: Vec<usize>,
    // faces[n] holds the faces of the (n+1)-cells, indexed by cell index.
    faces: Vec<Vec<CellFaces>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PcsError {
    #[error("invalid interval range: {0} > {1}")]
    InvalidRange(i64, i64),
    #[error("face {face:?} of new {dim}-cell has wrong dimension or index")]
    BadFace { dim: usize, face: CellId },
    #[error("front and back face arrays must both have length {expected}")]
    BadArity { expected: usize },
    #[error("cell {0:?} does not exist")]
    NoSuchCell(CellId),
    #[error("{0:?} is not a vertex")]
    NotAVertex(CellId),
    #[error("precubical set is not 1-truncated")]
    NotOneTruncated,
    #[error("paths cannot be concatenated: endpoint {0:?} != origin {1:?}")]
    Composition(CellId, CellId),
    #[error("edge {edge:?} does not start at {at:?}")]
    PathStep { edge: CellId, at: CellId },
    #[error("evaluations overlap on variable(s): {0}")]
    Overlap(String),
}

/// One violated precubical relation `d^k_i d^l_j = d^l_{j-1} d^k_i`
/// (`i < j`) at a specific cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub cell: CellId,
    pub k: u8,
    pub i: usize,
    pub l: u8,
    pub j: usize,
    /// `d^k_i (d^l_j cell)`
    pub via_j_first: CellId,
    /// `d^l_{j-1} (d^k_i cell)`
    pub via_i_first: CellId,
}

impl PrecubicalSet {
    /// Number of dimensions with allocated storage (max dimension + 1, or 0
    /// for the empty set).
    pub fn dims(&self) -> usize {
        self.counts.len()
    }

    /// The largest `n` with at least one `n`-cell, or `None` if empty.
    pub fn max_dim(&self) -> Option<usize> {
        (0..self.counts.len()).rev().find(|&n| self.counts[n] > 0)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.counts.get(dim).copied().unwrap_or(0)
    }

    /// Cell counts per dimension, trailing zeros trimmed.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut v = self.counts.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.count(dim)).map(move |idx| CellId::new(dim, idx))
    }

    pub fn contains(&self, cell: CellId) -> bool {
        cell.idx < self.count(cell.dim)
    }

    /// The face `d^k_i x` with `k ∈ {0, 1}` and `1 ≤ i ≤ dim(x)`.
    pub fn face(&self, x: CellId, k: u8, i: usize) -> CellId {
        assert!(x.dim >= 1 && i >= 1 && i <= x.dim, "face index out of range");
        let f = &self.faces[x.dim - 1][x.idx];
        match k {
            0 => f.front[i - 1],
            1 => f.back[i - 1],
            _ => panic!("face side must be 0 or 1"),
        }
    }

    pub fn cell_faces(&self, x: CellId) -> &CellFaces {
        &self.faces[x.dim - 1][x.idx]
    }

    /// Start vertex `d^0_1 e` of an edge.
    pub fn edge_src(&self, e: CellId) -> CellId {
        self.face(e, 0, 1)
    }

    /// End vertex `d^1_1 e` of an edge.
    pub fn edge_dst(&self, e: CellId) -> CellId {
        self.face(e, 1, 1)
    }

    pub fn is_truncated_at(&self, n: usize) -> bool {
        (n + 1..self.counts.len()).all(|m| self.counts[m] == 0)
    }

    /// Checks every precubical relation and reports each violation with the
    /// offending cell and indices. An empty report means the set is valid.
    pub fn validate(&self) -> Vec<RelationViolation> {
        let mut out = Vec::new();
        for n in 2..self.dims() {
            for x in self.cells(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for k in 0..2u8 {
                            for l in 0..2u8 {
                                let via_j_first = self.face(self.face(x, l, j), k, i);
                                let via_i_first = self.face(self.face(x, k, i), l, j - 1);
                                if via_j_first != via_i_first {
                                    out.push(RelationViolation {
                                        cell: x,
                                        k,
                                        i,
                                        l,
                                        j,
                                        via_j_first,
                                        via_i_first,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Cells of dimension ≤ `n`, with identical faces. Idempotent.
    pub fn truncate(&self, n: usize) -> PrecubicalSet {
        let keep = (n + 1).min(self.counts.len());
        PrecubicalSet {
            counts: self.counts[..keep].to_vec(),
            faces: self.faces[..keep.saturating_sub(1)].to_vec(),
        }
    }
}

/// Incremental constructor; cells must be added bottom-up so faces can be
/// checked as they are referenced.
#[derive(Debug, Default)]
pub struct PcsBuilder {
    set: PrecubicalSet,
}

impl PcsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertices(&mut self, n: usize) -> Vec<CellId> {
        if self.set.counts.is_empty() {
            self.set.counts.push(0);
        }
        let start = self.set.counts[0];
        self.set.counts[0] += n;
        (start..start + n).map(|i| CellId::new(0, i)).collect()
    }

    pub fn add_vertex(&mut self) -> CellId {
        self.add_vertices(1)[0]
    }

    /// Adds a cell of dimension `front.len()` with the given face arrays.
    pub fn add_cell(&mut self, front: Vec<CellId>, back: Vec<CellId>) -> Result<CellId, PcsError> {
        let n = front.len();
        if n == 0 || back.len() != n {
            return Err(PcsError::BadArity { expected: n.max(1) });
        }
        for f in front.iter().chain(back.iter()) {
            if f.dim != n - 1 || !self.set.contains(*f) {
                return Err(PcsError::BadFace { dim: n, face: *f });
            }
        }
        while self.set.counts.len() <= n {
            self.set.counts.push(0);
        }
        while self.set.faces.len() < n {
            self.set.faces.push(Vec::new());
        }
        let idx = self.set.counts[n];
        self.set.counts[n] += 1;
        self.set.faces[n - 1].push(CellFaces { front, back });
        Ok(CellId::new(n, idx))
    }

    pub fn add_edge(&mut self, src: CellId, dst: CellId) -> Result<CellId, PcsError> {
        self.add_cell(vec![src], vec![dst])
    }

    pub fn build(self) -> PrecubicalSet {
        self.set
    }
}

/// The precubical interval with vertices `{k, …, l}` and edges
/// `[j-1, j]`.
pub fn interval(k: i64, l: i64) -> Result<PrecubicalSet, PcsError> {
    if k > l {
        return Err(PcsError::InvalidRange(k, l));
    }
    let n = (l - k) as usize;
    let mut b = PcsBuilder::new();
    let vs = b.add_vertices(n + 1);
    for j in 0..n {
        b.add_edge(vs[j], vs[j + 1]).unwrap();
    }
    Ok(b.build())
}

/// Provenance of a tensor product: maps cells of `P ⊗ Q` to and from pairs
/// of factor cells. Cells of dimension `n` are laid out by ascending left
/// dimension `p`, then left index, then right index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorProv {
    p_counts: Vec<usize>,
    q_counts: Vec<usize>,
}

impl TensorProv {
    fn block(&self, p: usize, q: usize) -> usize {
        self.p_counts.get(p).copied().unwrap_or(0) * self.q_counts.get(q).copied().unwrap_or(0)
    }

    /// The tensor cell corresponding to the factor pair `(x, y)`.
    pub fn pair(&self, x: CellId, y: CellId) -> CellId {
        let n = x.dim + y.dim;
        let mut offset = 0;
        for p in 0..x.dim {
            offset += self.block(p, n - p);
        }
        CellId::new(n, offset + x.idx * self.q_counts[y.dim] + y.idx)
    }

    /// The factor pair of a tensor cell.
    pub fn split(&self, z: CellId) -> (CellId, CellId) {
        let n = z.dim;
        let mut rest = z.idx;
        for p in 0..=n {
            let b = self.block(p, n - p);
            if rest < b {
                let q = n - p;
                return (CellId::new(p, rest / self.q_counts[q]), CellId::new(q, rest % self.q_counts[q]));
            }
            rest -= b;
        }
        panic!("tensor cell index out of range: {z:?}");
    }
}

/// The tensor product `P ⊗ Q`, together with the provenance map back to
/// factor pairs. `(P ⊗ Q)_n` is the disjoint union over `p + q = n` of
/// `P_p × Q_q`, with the split face rule.
pub fn tensor(p: &PrecubicalSet, q: &PrecubicalSet) -> (PrecubicalSet, TensorProv) {
    let prov = TensorProv {
        p_counts: (0..p.dims()).map(|n| p.count(n)).collect(),
        q_counts: (0..q.dims()).map(|n| q.count(n)).collect(),
    };
    let max = p.dims() + q.dims();
    let mut counts = Vec::new();
    let mut faces = Vec::new();
    for n in 0..max.saturating_sub(1) {
        let mut level = Vec::new();
        let mut level_faces = Vec::new();
        for pd in 0..=n {
            let qd = n - pd;
            for xi in 0..p.count(pd) {
                for yi in 0..q.count(qd) {
                    level.push(());
                    if n > 0 {
                        let x = CellId::new(pd, xi);
                        let y = CellId::new(qd, yi);
                        let mut front = Vec::with_capacity(n);
                        let mut back = Vec::with_capacity(n);
                        for i in 1..=n {
                            for (k, arr) in [(0u8, &mut front), (1u8, &mut back)] {
                                let f = if i <= pd {
                                    prov.pair(p.face(x, k, i), y)
                                } else {
                                    prov.pair(x, q.face(y, k, i - pd))
                                };
                                arr.push(f);
                            }
                        }
                        level_faces.push(CellFaces { front, back });
                    }
                }
            }
        }
        counts.push(level.len());
        if n > 0 {
            faces.push(level_faces);
        }
    }
    (PrecubicalSet { counts, faces }, prov)
}

/// The skeleton of the `n`-fold tensor power of the interval `⟦0,1⟧`,
/// truncated at `up_to_dim` (`up_to_dim ≤ n`).
pub fn standard_cube(n: usize, up_to_dim: usize) -> PrecubicalSet {
    assert!(up_to_dim <= n, "up_to_dim must not exceed n");
    let unit = interval(0, 1).unwrap();
    let mut acc = interval(0, 0).unwrap();
    for _ in 0..n {
        acc = tensor(&acc, &unit).0;
    }
    acc.truncate(up_to_dim)
}

/// The restriction of the characteristic map of a cube to the vertices and
/// edges of the standard `m`-cube. Corner `b ∈ {0,1}^m` maps to the
/// iterated face obtained by applying `d^{b_j}_j` in descending index
/// order; any admissible order gives the same result by the precubical
/// relations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CubeSkeletonMap {
    pub m: usize,
    pub vertices: BTreeMap<Vec<u8>, CellId>,
    /// Keyed by `(direction i ∈ 1..m, corner bits with bit i-1 zeroed)`.
    pub edges: BTreeMap<(usize, Vec<u8>), CellId>,
}

impl CubeSkeletonMap {
    pub fn bottom_vertex(&self) -> CellId {
        self.vertices[&vec![0u8; self.m]]
    }

    /// The `m` edges starting at the bottom corner, indexed by direction.
    pub fn front_edges(&self) -> Vec<CellId> {
        (1..=self.m).map(|i| self.edges[&(i, vec![0u8; self.m])]).collect()
    }

    /// Verifies that each edge image's endpoints match the two vertex
    /// images of the corners it connects.
    pub fn check_coherent(&self, p: &PrecubicalSet) -> bool {
        self.edges.iter().all(|((i, corner), e)| {
            let mut hi = corner.clone();
            hi[i - 1] = 1;
            p.edge_src(*e) == self.vertices[corner] && p.edge_dst(*e) == self.vertices[&hi]
        })
    }
}

/// Applies `d^{bits[j-1]}_j` for the directions `j` in `dirs` (which must be
/// strictly descending) to `x`.
fn iterated_face(p: &PrecubicalSet, x: CellId, dirs: &[usize], bits: &[u8]) -> CellId {
    let mut cur = x;
    for &j in dirs {
        cur = p.face(cur, bits[j - 1], j);
    }
    cur
}

/// Computes the vertex and edge images of the cube `x` by iterated face
/// maps, applied in strictly descending index order.
pub fn skeleton_map(p: &PrecubicalSet, x: CellId) -> CubeSkeletonMap {
    let m = x.dim;
    let mut vertices = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for code in 0..(1usize << m) {
        let bits: Vec<u8> = (0..m).map(|j| ((code >> j) & 1) as u8).collect();
        let dirs: Vec<usize> = (1..=m).rev().collect();
        vertices.insert(bits.clone(), iterated_face(p, x, &dirs, &bits));
    }
    for i in 1..=m {
        for code in 0..(1usize << m) {
            let mut bits: Vec<u8> = (0..m).map(|j| ((code >> j) & 1) as u8).collect();
            if bits[i - 1] == 1 {
                continue;
            }
            bits[i - 1] = 0;
            let dirs: Vec<usize> = (1..=m).rev().filter(|&j| j != i).collect();
            edges.insert((i, bits.clone()), iterated_face(p, x, &dirs, &bits));
        }
    }
    CubeSkeletonMap { m, vertices, edges }
}

/// A path: an origin vertex and a sequence of edges chained head to tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    origin: CellId,
    steps: Vec<CellId>,
}

impl Path {
    pub fn empty(origin: CellId) -> Self {
        Path { origin, steps: Vec::new() }
    }

    pub fn from_steps(origin: CellId, steps: Vec<CellId>, p: &PrecubicalSet) -> Result<Self, PcsError> {
        let mut path = Path::empty(origin);
        for e in steps {
            path.push(e, p)?;
        }
        Ok(path)
    }

    pub fn push(&mut self, edge: CellId, p: &PrecubicalSet) -> Result<(), PcsError> {
        let at = self.endpoint(p);
        if p.edge_src(edge) != at {
            return Err(PcsError::PathStep { edge, at });
        }
        self.steps.push(edge);
        Ok(())
    }

    pub fn origin(&self) -> CellId {
        self.origin
    }

    pub fn steps(&self) -> &[CellId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn endpoint(&self, p: &PrecubicalSet) -> CellId {
        match self.steps.last() {
            Some(&e) => p.edge_dst(e),
            None => self.origin,
        }
    }
}

/// Concatenation of paths; the endpoint of `a` must be the origin of `b`.
pub fn concat(a: &Path, b: &Path, p: &PrecubicalSet) -> Result<Path, PcsError> {
    let end = a.endpoint(p);
    if end != b.origin {
        return Err(PcsError::Composition(end, b.origin));
    }
    let mut steps = a.steps.clone();
    steps.extend_from_slice(&b.steps);
    Ok(Path { origin: a.origin, steps })
}

/// Which tensor factor a path projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Projects a path in `P ⊗ Q` to the chosen factor: steps whose chosen
/// factor is a vertex are dropped, the rest are kept as the factor edge.
pub fn project_path(omega: &Path, prov: &TensorProv, side: Side) -> Path {
    let (o1, o2) = prov.split(omega.origin);
    let origin = match side {
        Side::Left => o1,
        Side::Right => o2,
    };
    let steps = omega
        .steps
        .iter()
        .filter_map(|&e| {
            let (x, y) = prov.split(e);
            match side {
                Side::Left if x.dim == 1 => Some(x),
                Side::Right if y.dim == 1 => Some(y),
                _ => None,
            }
        })
        .collect();
    Path { origin, steps }
}

/// A right inverse to the pair of projections: exhausts the left path
/// first, then the right one. Any interleaving policy satisfying the
/// projection identities would do; this one is documented and stable.
pub fn interleave_paths(
    w1: &Path,
    w2: &Path,
    p: &PrecubicalSet,
    _q: &PrecubicalSet,
    prov: &TensorProv,
) -> Path {
    let origin = prov.pair(w1.origin, w2.origin);
    let mut steps = Vec::with_capacity(w1.len() + w2.len());
    for &e in &w1.steps {
        steps.push(prov.pair(e, w2.origin));
    }
    let left_end = w1.endpoint(p);
    for &f in &w2.steps {
        steps.push(prov.pair(left_end, f));
    }
    Path { origin, steps }
}

/// Result of restricting a 1-truncated precubical set to the part reachable
/// from a vertex; records the original indices of the kept cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub set: PrecubicalSet,
    /// Original vertex index of each kept vertex, ascending.
    pub vertex_orig: Vec<usize>,
    /// Original edge index of each kept edge, ascending.
    pub edge_orig: Vec<usize>,
}

/// The largest precubical subset of a 1-truncated set whose vertices are
/// reachable from `v` by paths. An edge is kept iff its start vertex is
/// reachable (its end is then reachable too).
pub fn reachable_restriction(p: &PrecubicalSet, v: CellId) -> Result<Restriction, PcsError> {
    if !p.is_truncated_at(1) {
        return Err(PcsError::NotOneTruncated);
    }
    if v.dim != 0 {
        return Err(PcsError::NotAVertex(v));
    }
    if !p.contains(v) {
        return Err(PcsError::NoSuchCell(v));
    }
    let mut out_edges: Vec<Vec<CellId>> = vec![Vec::new(); p.count(0)];
    for e in p.cells(1) {
        out_edges[p.edge_src(e).idx].push(e);
    }
    let mut reached = vec![false; p.count(0)];
    let mut queue = VecDeque::new();
    reached[v.idx] = true;
    queue.push_back(v);
    while let Some(u) = queue.pop_front() {
        for &e in &out_edges[u.idx] {
            let w = p.edge_dst(e);
            if !reached[w.idx] {
                reached[w.idx] = true;
                queue.push_back(w);
            }
        }
    }
    let vertex_orig: Vec<usize> = (0..p.count(0)).filter(|&i| reached[i]).collect();
    let new_vertex: BTreeMap<usize, usize> =
        vertex_orig.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let mut b = PcsBuilder::new();
    b.add_vertices(vertex_orig.len());
    let mut edge_orig = Vec::new();
    for e in p.cells(1) {
        let s = p.edge_src(e);
        if reached[s.idx] {
            let d = p.edge_dst(e);
            debug_assert!(reached[d.idx]);
            b.add_edge(CellId::new(0, new_vertex[&s.idx]), CellId::new(0, new_vertex[&d.idx]))
                .unwrap();
            edge_orig.push(e.idx);
        }
    }
    Ok(Restriction { set: b.build(), vertex_orig, edge_orig })
}

/// Cells of each dimension as a set of face-array keys; used to compare
/// face-family structure independently of index assignment.
pub fn face_key_sets(p: &PrecubicalSet) -> Vec<BTreeSet<(Vec<CellId>, Vec<CellId>)>> {
    (1..p.dims())
        .map(|n| {
            p.cells(n)
                .map(|x| {
                    let f = p.cell_faces(x);
                    (f.front.clone(), f.back.clone())
                })
                .collect()
        })
        .collect()
}
