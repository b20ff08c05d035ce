//! Ideal triangulations given by triangles with counterclockwise edge slots.
//!
//! Slot `i` of a triangle runs from its vertex `v_i` (tail) to `v_{i+1}` (head).
//! Corner `c` sits at `v_c`, between slot `c-1` and slot `c`. An interior edge glues
//! its two occurrences with reversed orientation.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occ {
    pub tri: usize,
    pub slot: usize,
}

impl Occ {
    pub fn new(tri: usize, slot: usize) -> Self {
        Self { tri, slot }
    }

    pub fn id(self) -> usize {
        3 * self.tri + self.slot
    }

    /// Corner at the tail of this occurrence.
    pub fn tail_corner(self) -> Corner {
        Corner { tri: self.tri, idx: self.slot }
    }

    /// Corner at the head of this occurrence.
    pub fn head_corner(self) -> Corner {
        Corner { tri: self.tri, idx: (self.slot + 1) % 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub tri: usize,
    pub idx: usize,
}

impl Corner {
    /// Edge slot clockwise-first inside the corner (its tail is here).
    pub fn cw_occ(self) -> Occ {
        Occ::new(self.tri, self.idx)
    }

    /// Edge slot counterclockwise-last inside the corner (its head is here).
    pub fn ccw_occ(self) -> Occ {
        Occ::new(self.tri, (self.idx + 2) % 3)
    }
}

/// Which end of an edge, relative to its first occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: End,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    /// Edge ends in counterclockwise order; linear for boundary punctures.
    pub fan: Vec<EdgeEnd>,
    /// Corners in counterclockwise order. For a boundary puncture corner `k` lies between
    /// `fan[k]` and `fan[k+1]`; for an interior one between `fan[k-1]` and `fan[k]`.
    pub corners: Vec<Corner>,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct Triangle {
    pub id: String,
    pub edges: [usize; 3],
}

/// Index labels for edge sets and their extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Edge(usize),
    Hat(usize),
    Puncture(usize),
}

#[derive(Clone, Debug)]
pub struct Monogon {
    pub vertex: usize,
    pub ev: usize,
    /// Edge bounding the monogon.
    pub bv: usize,
    pub tri: usize,
}

#[derive(Clone, Debug)]
pub struct QuasiData {
    pub monogons: Vec<Monogon>,
    pub quasi_edges: Vec<usize>,
}

impl QuasiData {
    pub fn monogon_of_ev(&self, e: usize) -> Option<&Monogon> {
        self.monogons.iter().find(|m| m.ev == e)
    }

    pub fn monogon_of_bv(&self, e: usize) -> Option<&Monogon> {
        self.monogons.iter().find(|m| m.bv == e)
    }

    pub fn is_ev(&self, e: usize) -> bool {
        self.monogon_of_ev(e).is_some()
    }
}

#[derive(Clone, Debug)]
pub struct TriangulatedSurface {
    triangles: Vec<Triangle>,
    edge_names: Vec<String>,
    boundary: Vec<bool>,
    occs: Vec<Vec<Occ>>,
    corner_vertex: Vec<[usize; 3]>,
    vertices: Vec<Vertex>,
    end_pos: BTreeMap<EdgeEnd, (usize, usize)>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && s.is_ascii() && !s.contains(['(', ')', '^', '*', ','])
}

impl TriangulatedSurface {
    /// Parse the SURF format. `curve` and `step` lines are skipped so that a single file
    /// may carry both a surface and curves.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tris: Vec<(String, [String; 3])> = Vec::new();
        let mut boundary_names: Vec<(usize, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            let Some(kw) = toks.first() else { continue };
            let bad = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            match *kw {
                "triangle" => {
                    if toks.len() != 5 {
                        return Err(bad("expected `triangle <tid> <eid> <eid> <eid>`"));
                    }
                    for t in &toks[1..] {
                        if !valid_token(t) {
                            return Err(bad(&format!("invalid id `{}`", t)));
                        }
                    }
                    tris.push((
                        toks[1].to_string(),
                        [toks[2].to_string(), toks[3].to_string(), toks[4].to_string()],
                    ));
                }
                "boundary" => {
                    if toks.len() < 2 {
                        return Err(bad("expected `boundary <eid> ...`"));
                    }
                    for t in &toks[1..] {
                        boundary_names.push((line_no, t.to_string()));
                    }
                }
                "curve" | "step" => {}
                other => return Err(bad(&format!("unknown keyword `{}`", other))),
            }
        }
        Self::build(tris, boundary_names)
    }

    /// Build from named triangles and boundary edges without token validation.
    pub fn from_parts(tris: Vec<(String, [String; 3])>, boundary: Vec<String>) -> Result<Self> {
        Self::build(tris, boundary.into_iter().map(|b| (0, b)).collect())
    }

    /// Triangles and boundary names, in the form accepted by [`Self::from_parts`].
    pub fn to_parts(&self) -> (Vec<(String, [String; 3])>, Vec<String>) {
        let tris = self
            .triangles
            .iter()
            .map(|t| (t.id.clone(), t.edges.map(|e| self.edge_names[e].clone())))
            .collect();
        let bnd = self.boundary_edges().into_iter().map(|e| self.edge_names[e].clone()).collect();
        (tris, bnd)
    }

    fn build(tris: Vec<(String, [String; 3])>, boundary_names: Vec<(usize, String)>) -> Result<Self> {
        if tris.is_empty() {
            return Err(Error::InvalidSurface("no triangles".into()));
        }
        let mut seen = BTreeSet::new();
        for (id, _) in &tris {
            if !seen.insert(id.clone()) {
                return Err(Error::InvalidSurface(format!("duplicate triangle id `{}`", id)));
            }
        }
        let mut edge_names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut triangles = Vec::new();
        let mut occs: Vec<Vec<Occ>> = Vec::new();
        for (t, (id, es)) in tris.iter().enumerate() {
            let mut edges = [0; 3];
            for (slot, name) in es.iter().enumerate() {
                let e = *index.entry(name.clone()).or_insert_with(|| {
                    edge_names.push(name.clone());
                    occs.push(Vec::new());
                    edge_names.len() - 1
                });
                occs[e].push(Occ::new(t, slot));
                edges[slot] = e;
            }
            triangles.push(Triangle { id: id.clone(), edges });
        }
        let mut boundary = vec![false; edge_names.len()];
        for (line, name) in &boundary_names {
            let Some(&e) = index.get(name) else {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("boundary edge `{}` does not occur in any triangle", name),
                });
            };
            boundary[e] = true;
        }
        for (e, list) in occs.iter().enumerate() {
            match (list.len(), boundary[e]) {
                (1, true) | (2, false) => {}
                (1, false) => {
                    return Err(Error::InvalidSurface(format!(
                        "edge `{}` occurs once but is not listed as boundary",
                        edge_names[e]
                    )))
                }
                (2, true) => {
                    return Err(Error::InvalidSurface(format!(
                        "boundary edge `{}` occurs twice",
                        edge_names[e]
                    )))
                }
                (n, _) => {
                    return Err(Error::InvalidSurface(format!(
                        "edge `{}` occurs {} times",
                        edge_names[e], n
                    )))
                }
            }
        }
        let mut s = Self {
            triangles,
            edge_names,
            boundary,
            occs,
            corner_vertex: Vec::new(),
            vertices: Vec::new(),
            end_pos: BTreeMap::new(),
        };
        s.classify_punctures();
        Ok(s)
    }

    fn classify_punctures(&mut self) {
        let nt = self.triangles.len();
        let mut parent: Vec<usize> = (0..3 * nt).collect();
        let cid = |c: Corner| 3 * c.tri + c.idx;
        for list in &self.occs {
            if let [o1, o2] = list[..] {
                union(&mut parent, cid(o1.tail_corner()), cid(o2.head_corner()));
                union(&mut parent, cid(o1.head_corner()), cid(o2.tail_corner()));
            }
        }
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        let mut corner_vertex = vec![[0; 3]; nt];
        for t in 0..nt {
            for c in 0..3 {
                let r = find(&mut parent, 3 * t + c);
                let n = roots.len();
                let v = *roots.entry(r).or_insert(n);
                corner_vertex[t][c] = v;
            }
        }
        let nv = roots.len();
        let mut members: Vec<Vec<Corner>> = vec![Vec::new(); nv];
        for (t, cv) in corner_vertex.iter().enumerate() {
            for (c, v) in cv.iter().enumerate() {
                members[*v].push(Corner { tri: t, idx: c });
            }
        }
        let mut vertices = Vec::with_capacity(nv);
        for corners in &members {
            let start = corners.iter().copied().find(|c| self.is_boundary(self.edge_of(c.cw_occ())));
            let (start, boundary) = match start {
                Some(c) => (c, true),
                None => (corners[0], false),
            };
            let mut fan = Vec::new();
            let mut order = Vec::new();
            if boundary {
                fan.push(self.tail_end(start.cw_occ()));
            }
            let mut c = start;
            loop {
                order.push(c);
                let ccw = c.ccw_occ();
                fan.push(self.head_end(ccw));
                match self.other_occ(ccw) {
                    None => break,
                    Some(o) => {
                        c = o.tail_corner();
                        if !boundary && c == start {
                            break;
                        }
                    }
                }
            }
            vertices.push(Vertex { fan, corners: order, boundary });
        }
        let mut end_pos = BTreeMap::new();
        for (v, vx) in vertices.iter().enumerate() {
            for (i, e) in vx.fan.iter().enumerate() {
                end_pos.insert(*e, (v, i));
            }
        }
        self.corner_vertex = corner_vertex;
        self.vertices = vertices;
        self.end_pos = end_pos;
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn triangle_index(&self, id: &str) -> Option<usize> {
        self.triangles.iter().position(|t| t.id == id)
    }

    pub fn is_boundary(&self, e: usize) -> bool {
        self.boundary[e]
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.n_edges()).filter(|e| self.boundary[*e]).collect()
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.iter().any(|b| *b)
    }

    pub fn occurrences(&self, e: usize) -> &[Occ] {
        &self.occs[e]
    }

    pub fn edge_of(&self, o: Occ) -> usize {
        self.triangles[o.tri].edges[o.slot]
    }

    pub fn other_occ(&self, o: Occ) -> Option<Occ> {
        let list = &self.occs[self.edge_of(o)];
        list.iter().copied().find(|x| *x != o)
    }

    /// Whether `o` is the edge's first occurrence (the one defining `End::Tail`).
    pub fn is_canonical(&self, o: Occ) -> bool {
        self.occs[self.edge_of(o)][0] == o
    }

    pub fn tail_end(&self, o: Occ) -> EdgeEnd {
        let end = if self.is_canonical(o) { End::Tail } else { End::Head };
        EdgeEnd { edge: self.edge_of(o), end }
    }

    pub fn head_end(&self, o: Occ) -> EdgeEnd {
        let end = if self.is_canonical(o) { End::Head } else { End::Tail };
        EdgeEnd { edge: self.edge_of(o), end }
    }

    pub fn corner_vertex(&self, c: Corner) -> usize {
        self.corner_vertex[c.tri][c.idx]
    }

    pub fn tail_vertex(&self, o: Occ) -> usize {
        self.corner_vertex(o.tail_corner())
    }

    pub fn head_vertex(&self, o: Occ) -> usize {
        self.corner_vertex(o.head_corner())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn fan_order(&self, v: usize) -> &[EdgeEnd] {
        &self.vertices[v].fan
    }

    /// Vertex and fan position of an edge end.
    pub fn end_position(&self, e: EdgeEnd) -> (usize, usize) {
        self.end_pos[&e]
    }

    pub fn end_vertex(&self, e: EdgeEnd) -> usize {
        self.end_pos[&e].0
    }

    pub fn n_boundary_punctures(&self) -> usize {
        self.vertices.iter().filter(|v| v.boundary).count()
    }

    pub fn n_interior_punctures(&self) -> usize {
        self.vertices.iter().filter(|v| !v.boundary).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_boundary_punctures() as i64 - self.n_edges() as i64 + self.n_triangles() as i64
    }

    /// `3|P_boundary| - 3 chi`.
    pub fn rank_r(&self) -> i64 {
        3 * self.n_boundary_punctures() as i64 - 3 * self.euler_characteristic()
    }

    /// `|Delta bar| = E + |boundary edges|`.
    pub fn extended_size(&self) -> usize {
        self.n_edges() + self.boundary_edges().len()
    }

    /// Connected components as lists of triangle indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nt = self.n_triangles();
        let mut parent: Vec<usize> = (0..nt).collect();
        for list in &self.occs {
            if let [o1, o2] = list[..] {
                union(&mut parent, o1.tri, o2.tri);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for t in 0..nt {
            let r = find(&mut parent, t);
            groups.entry(r).or_default().push(t);
        }
        groups.into_values().collect()
    }

    /// Boundary circles as cyclic lists of boundary edges, following boundary orientation.
    pub fn boundary_components(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.n_edges()];
        let mut out = Vec::new();
        for start in self.boundary_edges() {
            if done[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                done[e] = true;
                cycle.push(e);
                let w = self.head_vertex(self.occs[e][0]);
                let next = self.vertices[w].fan[0].edge;
                if next == start {
                    break;
                }
                e = next;
            }
            out.push(cycle);
        }
        out
    }

    /// Slot `i` such that slots `i` and `i+1` carry the same edge.
    pub fn self_folded_slot(&self, t: usize) -> Option<usize> {
        let es = self.triangles[t].edges;
        (0..3).find(|i| es[*i] == es[(i + 1) % 3])
    }

    pub fn complete_quasitriangulation(&self) -> Result<QuasiData> {
        let mut monogons = Vec::new();
        for t in 0..self.n_triangles() {
            if let Some(i) = self.self_folded_slot(t) {
                let ev = self.triangles[t].edges[i];
                let bv = self.triangles[t].edges[(i + 2) % 3];
                let vertex = self.corner_vertex(Corner { tri: t, idx: (i + 1) % 3 });
                monogons.push(Monogon { vertex, ev, bv, tri: t });
            }
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            if !vx.boundary && !monogons.iter().any(|m| m.vertex == v) {
                return Err(Error::NotQuasi(format!(
                    "interior puncture {} is not enclosed by a self-folded triangle",
                    v
                )));
            }
        }
        monogons.sort_by_key(|m| m.ev);
        let quasi_edges = (0..self.n_edges()).filter(|e| !monogons.iter().any(|m| m.ev == *e)).collect();
        Ok(QuasiData { monogons, quasi_edges })
    }

    pub fn label_name(&self, l: Label) -> String {
        match l {
            Label::Edge(e) => self.edge_names[e].clone(),
            Label::Hat(e) => format!("hat({})", self.edge_names[e]),
            Label::Puncture(v) => {
                let ev = self
                    .triangles
                    .iter()
                    .enumerate()
                    .find_map(|(t, _)| {
                        let i = self.self_folded_slot(t)?;
                        (self.corner_vertex(Corner { tri: t, idx: (i + 1) % 3 }) == v)
                            .then(|| self.triangles[t].edges[i])
                    });
                match ev {
                    Some(e) => format!("v({})", self.edge_names[e]),
                    None => format!("v{}", v),
                }
            }
        }
    }

    /// Parse a label name produced by `label_name`.
    pub fn label_from_name(&self, name: &str) -> Option<Label> {
        if let Some(inner) = name.strip_prefix("hat(").and_then(|s| s.strip_suffix(')')) {
            let e = self.edge_index(inner)?;
            return self.is_boundary(e).then_some(Label::Hat(e));
        }
        if let Some(e) = self.edge_index(name) {
            return Some(Label::Edge(e));
        }
        (0..self.vertices.len())
            .filter(|v| !self.vertices[*v].boundary)
            .map(Label::Puncture)
            .find(|l| self.label_name(*l) == name)
    }

    /// Delta: all edges.
    pub fn delta(&self) -> Vec<Label> {
        (0..self.n_edges()).map(Label::Edge).collect()
    }

    /// Delta bar: edges followed by hats of boundary edges.
    pub fn delta_bar(&self) -> Vec<Label> {
        let mut v = self.delta();
        v.extend(self.boundary_edges().into_iter().map(Label::Hat));
        v
    }
}

impl QuasiData {
    pub fn e_labels(&self) -> Vec<Label> {
        self.quasi_edges.iter().map(|e| Label::Edge(*e)).collect()
    }

    /// E bar: quasi edges followed by hats of boundary edges.
    pub fn e_bar(&self, s: &TriangulatedSurface) -> Vec<Label> {
        let mut v = self.e_labels();
        v.extend(s.boundary_edges().into_iter().map(Label::Hat));
        v
    }

    /// E bar followed by the interior punctures.
    pub fn e_bar_p(&self, s: &TriangulatedSurface) -> Vec<Label> {
        let mut v = self.e_bar(s);
        v.extend(self.monogons.iter().map(|m| Label::Puncture(m.vertex)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn punctured_torus_counts() {
        let s = fixtures::punctured_torus();
        assert_eq!(s.n_interior_punctures(), 1);
        assert_eq!(s.n_boundary_punctures(), 0);
        assert_eq!(s.vertices()[0].fan.len(), 6);
        assert!(!s.vertices()[0].boundary);
        assert_eq!((s.euler_characteristic(), s.rank_r()), (-1, 3));
        assert_eq!(s.extended_size(), 3);
        assert!(s.complete_quasitriangulation().is_err());
    }

    #[test]
    fn quadrilateral_counts() {
        let s = fixtures::quadrilateral();
        assert_eq!(s.n_boundary_punctures(), 4);
        let mut sizes: Vec<usize> = s.vertices().iter().map(|v| v.fan.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 3, 3]);
        assert_eq!((s.euler_characteristic(), s.rank_r()), (1, 9));
        assert_eq!(s.extended_size(), 9);
        let d = s.edge_index("d").unwrap();
        for v in s.vertices() {
            if v.fan.len() == 3 {
                assert!(s.is_boundary(v.fan[0].edge) && s.is_boundary(v.fan[2].edge));
                assert_eq!(v.fan[1].edge, d);
            }
        }
        let q = s.complete_quasitriangulation().unwrap();
        assert_eq!(q.quasi_edges.len(), 5);
    }

    #[test]
    fn monogon_counts() {
        let s = fixtures::punctured_monogon();
        assert_eq!((s.n_boundary_punctures(), s.n_interior_punctures()), (1, 1));
        assert_eq!((s.euler_characteristic(), s.rank_r()), (0, 3));
        let q = s.complete_quasitriangulation().unwrap();
        assert_eq!(q.monogons.len(), 1);
        assert_eq!(s.edge_name(q.monogons[0].ev), "ev");
        assert_eq!(q.quasi_edges, vec![s.edge_index("e").unwrap()]);
    }

    #[test]
    fn edge_used_three_times() {
        let err = TriangulatedSurface::parse("triangle A x x x\n").unwrap_err();
        assert!(matches!(err, Error::InvalidSurface(_)));
    }

    #[test]
    fn parse_errors() {
        assert!(TriangulatedSurface::parse("triangle A a b\n").is_err());
        assert!(TriangulatedSurface::parse("triangle A a b c\ntriangle A a b c\n").is_err());
        assert!(TriangulatedSurface::parse("triangle A a b c\ntriangle B a b c\nboundary a\n").is_err());
        assert!(TriangulatedSurface::parse("frobnicate\n").is_err());
        assert!(TriangulatedSurface::parse("triangle A a b c\n").is_err());
    }

    #[test]
    fn fans_partition_edge_ends() {
        for (_, s) in fixtures::all_surfaces() {
            let total: usize = s.vertices().iter().map(|v| v.fan.len()).sum();
            assert_eq!(total, 2 * s.n_edges());
            assert_eq!(2 * s.n_edges(), 3 * s.n_triangles() + s.boundary_edges().len());
            assert_eq!(s.rank_r(), s.extended_size() as i64);
            for v in s.vertices() {
                if v.boundary {
                    assert!(s.is_boundary(v.fan[0].edge));
                    assert!(s.is_boundary(v.fan.last().unwrap().edge));
                    let inner = &v.fan[1..v.fan.len() - 1];
                    assert!(inner.iter().all(|e| !s.is_boundary(e.edge)));
                }
            }
            for bc in s.boundary_components() {
                let punct: BTreeSet<usize> = bc.iter().map(|e| s.tail_vertex(s.occurrences(*e)[0])).collect();
                assert_eq!(punct.len(), bc.len());
            }
        }
    }
}
