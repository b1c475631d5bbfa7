use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::model::Lattice;

/// A unit square `{i} x [j, j+1] x [k, k+1]` (and its cyclic variants): normal
/// `axis`, `coord = i` along it, and lower corners `j`, `k` along the two
/// remaining axes in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId {
    pub axis: usize,
    pub coord: i64,
    pub j: i64,
    pub k: i64,
}

impl FaceId {
    pub fn new(axis: usize, coord: i64, j: i64, k: i64) -> Self {
        assert!(axis < 3, "axis out of range");
        FaceId { axis, coord, j, k }
    }

    /// The two in-face axes, increasing.
    pub fn span_axes(&self) -> (usize, usize) {
        match self.axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }

    pub fn corner(&self) -> Lattice {
        let (u, v) = self.span_axes();
        let mut c = [0; 3];
        c[self.axis] = self.coord;
        c[u] = self.j;
        c[v] = self.k;
        c
    }

    /// Edges as `(start, direction)`: segments `start + [0, 1] e_direction`.
    pub fn edges(&self) -> [(Lattice, usize); 4] {
        let (u, v) = self.span_axes();
        let c = self.corner();
        let mut cu = c;
        cu[u] += 1;
        let mut cv = c;
        cv[v] += 1;
        [(c, u), (cv, u), (c, v), (cu, v)]
    }

    pub fn vertices(&self) -> [Lattice; 4] {
        let (u, v) = self.span_axes();
        let c = self.corner();
        let mut out = [c; 4];
        out[1][u] += 1;
        out[2][v] += 1;
        out[3][u] += 1;
        out[3][v] += 1;
        out
    }

    /// Outward normal of the region made of the cubes at `2n` and `2n + e_i`:
    /// `-e_axis` on even coordinates, `+e_axis` on odd ones.
    pub fn outward_normal(&self) -> [f64; 3] {
        let mut e = [0.0; 3];
        e[self.axis] = if self.coord.rem_euclid(2) == 0 { -1.0 } else { 1.0 };
        e
    }

    fn reduced(&self) -> FaceId {
        FaceId { axis: self.axis, coord: self.coord.rem_euclid(2), j: self.j.rem_euclid(2), k: self.k.rem_euclid(2) }
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.span_axes();
        let mut parts = [String::new(), String::new(), String::new()];
        parts[self.axis] = format!("{{{}}}", self.coord);
        parts[u] = format!("[{},{}]", self.j, self.j + 1);
        parts[v] = format!("[{},{}]", self.k, self.k + 1);
        write!(f, "{}x{}x{}", parts[0], parts[1], parts[2])
    }
}

/// A square belongs to the surface iff `j + k` is odd.
pub fn face_membership(f: &FaceId) -> bool {
    (f.j + f.k).rem_euclid(2) == 1
}

/// Member faces containing the edge `q + [0, 1] e_m`.
pub fn faces_of_edge(q: &Lattice, m: usize) -> Vec<FaceId> {
    let mut out = Vec::with_capacity(2);
    for o in (0..3).filter(|&o| o != m) {
        let t = 3 - o - m;
        for lt in [q[t] - 1, q[t]] {
            let mut c = *q;
            c[t] = lt;
            let probe = FaceId { axis: o, coord: c[o], j: 0, k: 0 };
            let (u, v) = probe.span_axes();
            let f = FaceId { axis: o, coord: c[o], j: c[u], k: c[v] };
            if face_membership(&f) {
                out.push(f);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: i64,
    /// Every edge lies on exactly two faces.
    pub manifold_edges: bool,
    /// Number of faces at each vertex (all equal for the regular polyhedron).
    pub faces_per_vertex: Vec<usize>,
}

/// Cell counts of the quotient by `2Z^3`.
pub fn genus_check() -> GenusReport {
    let mut faces = BTreeSet::new();
    for axis in 0..3 {
        for coord in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let f = FaceId { axis, coord, j, k };
                    if face_membership(&f) {
                        faces.insert(f);
                    }
                }
            }
        }
    }
    let red = |p: &Lattice| p.map(|x| x.rem_euclid(2));
    let mut edge_faces: BTreeMap<(Lattice, usize), BTreeSet<FaceId>> = BTreeMap::new();
    let mut vertex_faces: BTreeMap<Lattice, BTreeSet<FaceId>> = BTreeMap::new();
    for f in &faces {
        for (q, m) in f.edges() {
            edge_faces.entry((red(&q), m)).or_default().insert(*f);
        }
        for v in f.vertices() {
            vertex_faces.entry(red(&v)).or_default().insert(*f);
        }
    }
    // cross-check the lift: each edge in the cover also meets two member faces
    let lifted = edge_faces.keys().all(|(q, m)| {
        let fs = faces_of_edge(q, *m);
        fs.len() == 2 && fs.iter().all(|f| faces.contains(&f.reduced()))
    });
    let (v, e, fc) = (vertex_faces.len(), edge_faces.len(), faces.len());
    let chi = v as i64 - e as i64 + fc as i64;
    GenusReport {
        vertices: v,
        edges: e,
        faces: fc,
        genus: (2 - chi) / 2,
        manifold_edges: lifted && edge_faces.values().all(|s| s.len() == 2),
        faces_per_vertex: vertex_faces.values().map(BTreeSet::len).collect(),
    }
}
