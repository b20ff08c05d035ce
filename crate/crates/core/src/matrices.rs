//! Face and vertex matrices of a triangulated surface and their extensions.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qtorus::ExpVec;
use crate::surface::{EdgeEnd, End, Label, QuasiData, TriangulatedSurface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMatrix {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
    pub data: Vec<Vec<i64>>,
}

impl LabeledMatrix {
    pub fn from_fn(rows: Vec<Label>, cols: Vec<Label>, mut f: impl FnMut(Label, Label) -> i64) -> Self {
        let data = rows.iter().map(|r| cols.iter().map(|c| f(*r, *c)).collect()).collect();
        Self { rows, cols, data }
    }

    pub fn zeros(rows: Vec<Label>, cols: Vec<Label>) -> Self {
        Self::from_fn(rows, cols, |_, _| 0)
    }

    pub fn identity(labels: Vec<Label>) -> Self {
        Self::from_fn(labels.clone(), labels, |a, b| i64::from(a == b))
    }

    fn row_index(&self, l: Label) -> Option<usize> {
        self.rows.iter().position(|x| *x == l)
    }

    fn col_index(&self, l: Label) -> Option<usize> {
        self.cols.iter().position(|x| *x == l)
    }

    /// Entry at `(r, c)`; labels outside the index sets read as zero.
    pub fn get(&self, r: Label, c: Label) -> i64 {
        match (self.row_index(r), self.col_index(c)) {
            (Some(i), Some(j)) => self.data[i][j],
            _ => 0,
        }
    }

    pub fn row(&self, r: Label) -> Option<&[i64]> {
        self.row_index(r).map(|i| self.data[i].as_slice())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols.clone(), self.rows.clone(), |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Precondition("matrix index sets do not compose".into()));
        }
        let n = self.cols.len();
        let mut data = vec![vec![0; other.cols.len()]; self.rows.len()];
        for (i, row) in data.iter_mut().enumerate() {
            for k in 0..n {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for (j, x) in row.iter_mut().enumerate() {
                    *x += a * other.data[k][j];
                }
            }
        }
        Ok(Self { rows: self.rows.clone(), cols: other.cols.clone(), data })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows.clone(), self.cols.clone(), |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows.clone(), self.cols.clone(), |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_fn(self.rows.clone(), self.cols.clone(), |r, c| k * self.get(r, c))
    }

    pub fn restrict(&self, rows: Vec<Label>, cols: Vec<Label>) -> Self {
        Self::from_fn(rows, cols, |r, c| self.get(r, c))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols && self.rows.iter().all(|r| self.cols.iter().all(|c| self.get(*r, *c) == -self.get(*c, *r)))
    }

    /// First entry where `self` (expected) and `got` differ, scanning rows then columns.
    pub fn first_difference(&self, got: &Self) -> Option<(Label, Label, i64, i64)> {
        if self.rows != got.rows || self.cols != got.cols {
            let r = self.rows.first().copied().unwrap_or(Label::Edge(0));
            let c = self.cols.first().copied().unwrap_or(Label::Edge(0));
            return Some((r, c, i64::MIN, i64::MIN));
        }
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in self.cols.iter().enumerate() {
                if self.data[i][j] != got.data[i][j] {
                    return Some((*r, *c, self.data[i][j], got.data[i][j]));
                }
            }
        }
        None
    }

    /// Aligned integer grid with row and column labels.
    pub fn render(&self, s: &TriangulatedSurface) -> String {
        let rn: Vec<String> = self.rows.iter().map(|l| s.label_name(*l)).collect();
        let cn: Vec<String> = self.cols.iter().map(|l| s.label_name(*l)).collect();
        let rw = rn.iter().map(|x| x.len()).max().unwrap_or(0);
        let mut widths: Vec<usize> = cn.iter().map(|x| x.len()).collect();
        for row in &self.data {
            for (j, x) in row.iter().enumerate() {
                widths[j] = widths[j].max(x.to_string().len());
            }
        }
        let mut out = String::new();
        let _ = write!(out, "{:rw$}", "");
        for (j, c) in cn.iter().enumerate() {
            let _ = write!(out, " {:>w$}", c, w = widths[j]);
        }
        out.push('\n');
        for (i, r) in rn.iter().enumerate() {
            let _ = write!(out, "{:rw$}", r);
            for (j, x) in self.data[i].iter().enumerate() {
                let _ = write!(out, " {:>w$}", x, w = widths[j]);
            }
            out.push('\n');
        }
        out
    }
}

/// Thurston form over Delta: each non-self-folded face contributes `-1` at `(a, b)` when
/// `b` immediately follows `a` counterclockwise.
pub fn face_matrix(s: &TriangulatedSurface) -> LabeledMatrix {
    let n = s.n_edges();
    let mut m = vec![vec![0i64; n]; n];
    for t in 0..s.n_triangles() {
        if s.self_folded_slot(t).is_some() {
            continue;
        }
        let es = s.triangles()[t].edges;
        for i in 0..3 {
            let (a, b) = (es[i], es[(i + 1) % 3]);
            m[a][b] -= 1;
            m[b][a] += 1;
        }
    }
    LabeledMatrix { rows: s.delta(), cols: s.delta(), data: m }
}

/// Ends of an edge at boundary punctures, with fan positions doubled so that a pushed-off
/// copy can sit between neighbours.
fn boundary_ends(s: &TriangulatedSurface, e: usize) -> Vec<(usize, i64, End)> {
    [End::Tail, End::Head]
        .into_iter()
        .filter_map(|end| {
            let (v, p) = s.end_position(EdgeEnd { edge: e, end });
            s.vertices()[v].boundary.then_some((v, 2 * p as i64, end))
        })
        .collect()
}

/// Number of pairs `(a', c')` of ends at a common boundary puncture with `c'` strictly
/// counterclockwise of `a'`. For `a == c` the arc `a` is replaced by a copy pushed to the
/// side of its first occurrence's triangle.
pub fn ccw_count(s: &TriangulatedSurface, a: usize, c: usize) -> i64 {
    let mut a_ends = boundary_ends(s, a);
    let c_ends = boundary_ends(s, c);
    if a == c {
        for (_, p, end) in a_ends.iter_mut() {
            *p += if *end == End::Tail { 1 } else { -1 };
        }
    }
    let mut n = 0;
    for (va, pa, _) in &a_ends {
        for (vc, pc, _) in &c_ends {
            if va == vc && pc > pa {
                n += 1;
            }
        }
    }
    n
}

/// `J`: rows `rows`, columns the boundary edges, `J(e, e) = 1`.
pub fn j_matrix(s: &TriangulatedSurface, rows: Vec<Label>) -> LabeledMatrix {
    let cols: Vec<Label> = s.boundary_edges().into_iter().map(Label::Edge).collect();
    LabeledMatrix::from_fn(rows, cols, |r, c| i64::from(r == c))
}

fn unhat(l: Label) -> Label {
    match l {
        Label::Hat(e) => Label::Edge(e),
        x => x,
    }
}

/// Assemble a matrix over (X followed by hats) from its four blocks, where the second
/// index set is the boundary edges.
fn block(
    rows: Vec<Label>,
    cols: Vec<Label>,
    tl: &LabeledMatrix,
    tr: &LabeledMatrix,
    bl: &LabeledMatrix,
    br: &LabeledMatrix,
) -> LabeledMatrix {
    LabeledMatrix::from_fn(rows, cols, |r, c| match (r, c) {
        (Label::Hat(_), Label::Hat(_)) => br.get(unhat(r), unhat(c)),
        (Label::Hat(_), _) => bl.get(unhat(r), c),
        (_, Label::Hat(_)) => tr.get(r, unhat(c)),
        _ => tl.get(r, c),
    })
}

#[derive(Clone, Debug)]
pub struct SurfaceMatrices {
    pub q: LabeledMatrix,
    pub qbar: LabeledMatrix,
    pub qstar: LabeledMatrix,
    pub quasi: Option<VertexMatrices>,
}

#[derive(Clone, Debug)]
pub struct VertexMatrices {
    pub data: QuasiData,
    pub pplus: LabeledMatrix,
    pub p: LabeledMatrix,
    pub pplus_bar: LabeledMatrix,
    pub pbar: LabeledMatrix,
    /// `Pbar` zero-extended over the interior punctures.
    pub pbar_diamond: LabeledMatrix,
    pub h: LabeledMatrix,
    pub hbar: LabeledMatrix,
    pub j: LabeledMatrix,
    /// Rows `E bar`, columns `Delta bar`.
    pub k: LabeledMatrix,
    /// `K` with rows `K_{x_v} = 1_{e_v}` appended.
    pub k_ext: LabeledMatrix,
    /// `sigma` restricted to rows `E bar`.
    pub sigma: LabeledMatrix,
    pub hbar_monomials: Vec<(Label, ExpVec)>,
    pub sigma_monomials: Vec<(Label, ExpVec)>,
}

pub fn extended_face_matrices(s: &TriangulatedSurface) -> (LabeledMatrix, LabeledMatrix, LabeledMatrix) {
    let q = face_matrix(s);
    let j = j_matrix(s, s.delta());
    let jt = j.transpose();
    let bnd: Vec<Label> = s.boundary_edges().into_iter().map(Label::Edge).collect();
    let zero = LabeledMatrix::zeros(bnd.clone(), bnd);
    let db = s.delta_bar();
    let qbar = block(db.clone(), db.clone(), &q, &j.scale(-1), &jt, &zero);
    let qstar = block(db.clone(), db, &q, &j, &jt.scale(-1), &zero);
    (q, qbar, qstar)
}

/// `P_+` over the quasi edges.
pub fn vertex_matrix_plus(s: &TriangulatedSurface, data: &QuasiData) -> Result<LabeledMatrix> {
    for e in &data.quasi_edges {
        if boundary_ends(s, *e).len() != 2 {
            return Err(Error::Precondition(format!(
                "arc `{}` is not boundary ending",
                s.edge_name(*e)
            )));
        }
    }
    let labels = data.e_labels();
    Ok(LabeledMatrix::from_fn(labels.clone(), labels, |a, b| match (a, b) {
        (Label::Edge(a), Label::Edge(b)) => ccw_count(s, a, b),
        _ => 0,
    }))
}

/// Arc matrix `K` over `E bar x Delta bar`.
pub fn arc_shear_matrix(s: &TriangulatedSurface, data: &QuasiData) -> LabeledMatrix {
    LabeledMatrix::from_fn(data.e_bar(s), s.delta_bar(), |r, c| {
        let (Label::Edge(a) | Label::Hat(a)) = r else { return 0 };
        let (Label::Edge(cc) | Label::Hat(cc)) = c else { return 0 };
        let base = ccw_count(s, a, cc);
        match (r, c) {
            (Label::Hat(_), Label::Hat(_)) if a == cc => base - 2,
            _ => base,
        }
    })
}

/// `H bar` monomials over `E bar + interior punctures` and `sigma` monomials over
/// `Delta bar`, one per element of `Delta bar`, computed from triangle triples.
pub fn shear_square_monomials(
    s: &TriangulatedSurface,
    data: &QuasiData,
) -> (Vec<(Label, ExpVec)>, Vec<(Label, ExpVec)>) {
    let cols = data.e_bar_p(s);
    let idx: HashMap<Label, usize> = cols.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let db = s.delta_bar();
    let db_idx: HashMap<Label, usize> = db.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut hbar = Vec::new();
    let mut sigma = Vec::new();
    let bump = |v: &mut ExpVec, l: Label, k: i64| {
        if let Some(i) = idx.get(&l) {
            v[*i] += k;
        }
    };
    for l in &db {
        let mut h = vec![0; cols.len()];
        match *l {
            Label::Edge(e) if data.is_ev(e) => {
                let m = data.monogon_of_ev(e).expect("monogon");
                bump(&mut h, Label::Puncture(m.vertex), 2);
            }
            Label::Edge(e) => {
                // Each occurrence (t, i) of e gives the counterclockwise triple (e, a, b).
                for o in s.occurrences(e) {
                    let es = s.triangles()[o.tri].edges;
                    let a = es[(o.slot + 1) % 3];
                    let b = es[(o.slot + 2) % 3];
                    if a == b {
                        continue;
                    }
                    bump(&mut h, Label::Edge(a), 1);
                    bump(&mut h, Label::Edge(b), -1);
                }
                if s.is_boundary(e) {
                    bump(&mut h, Label::Hat(e), 1);
                }
            }
            Label::Hat(e) => {
                bump(&mut h, Label::Edge(e), 1);
                bump(&mut h, Label::Hat(e), -1);
            }
            Label::Puncture(_) => {}
        }
        let mut sg = vec![0; db.len()];
        sg[db_idx[l]] += 2;
        if let Label::Edge(e) = l {
            if let Some(m) = data.monogon_of_bv(*e) {
                sg[db_idx[&Label::Edge(m.ev)]] += 1;
            }
        }
        hbar.push((*l, h));
        sigma.push((*l, sg));
    }
    (hbar, sigma)
}

pub fn vertex_matrices(s: &TriangulatedSurface) -> Result<VertexMatrices> {
    if !s.has_boundary() {
        return Err(Error::Precondition("vertex matrices need a boundary puncture".into()));
    }
    let data = s.complete_quasitriangulation()?;
    let e = data.e_labels();
    let ebar = data.e_bar(s);
    let pplus = vertex_matrix_plus(s, &data)?;
    let p = pplus.sub(&pplus.transpose());
    let j = j_matrix(s, e.clone());
    let jt = j.transpose();
    let bnd = jt.rows.clone();
    let two_i = LabeledMatrix::identity(bnd.clone()).scale(2);
    let pj = pplus.mul(&j)?;
    let jtp = jt.mul(&pplus)?;
    let jtpj = jtp.mul(&j)?;
    let pplus_bar = block(ebar.clone(), ebar.clone(), &pplus, &pj, &jtp, &jtpj.sub(&two_i));
    let sym = pplus.add(&pplus.transpose());
    let pbar = block(
        ebar.clone(),
        ebar.clone(),
        &p,
        &sym.mul(&j)?.scale(-1),
        &jt.mul(&sym)?,
        &jt.mul(&p)?.mul(&j)?.scale(-1),
    );
    let ebp = data.e_bar_p(s);
    let pbar_diamond = pbar.restrict(ebp.clone(), ebp.clone());
    let q = face_matrix(s);
    let q_e = q.restrict(e.clone(), e.clone());
    let i_bd = j.mul(&jt)?;
    let h = i_bd.sub(&q_e);
    let hbar = block(
        ebar.clone(),
        ebar.clone(),
        &q_e.scale(-1),
        &j,
        &jt,
        &LabeledMatrix::identity(bnd).scale(-1),
    );
    let k = arc_shear_matrix(s, &data);
    let k_ext = LabeledMatrix::from_fn(ebp, s.delta_bar(), |r, c| match r {
        Label::Puncture(v) => {
            let m = data.monogons.iter().find(|m| m.vertex == v).expect("monogon");
            i64::from(c == Label::Edge(m.ev))
        }
        _ => k.get(r, c),
    });
    let (hbar_monomials, sigma_monomials) = shear_square_monomials(s, &data);
    let sig: HashMap<Label, ExpVec> = sigma_monomials.iter().cloned().collect();
    let db = s.delta_bar();
    let sigma = LabeledMatrix::from_fn(ebar, db.clone(), |r, c| {
        let j = db.iter().position(|x| *x == c).expect("column");
        sig[&r][j]
    });
    Ok(VertexMatrices {
        data,
        pplus,
        p,
        pplus_bar,
        pbar,
        pbar_diamond,
        h,
        hbar,
        j,
        k,
        k_ext,
        sigma,
        hbar_monomials,
        sigma_monomials,
    })
}

pub fn all_matrices(s: &TriangulatedSurface) -> Result<SurfaceMatrices> {
    let (q, qbar, qstar) = extended_face_matrices(s);
    let quasi = if s.has_boundary() { Some(vertex_matrices(s)?) } else { None };
    Ok(SurfaceMatrices { q, qbar, qstar, quasi })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { row: String, col: String, expected: i64, got: i64 },
    Skip(String),
}

#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Fail { .. })
    }

    pub fn line(&self) -> String {
        match &self.outcome {
            Outcome::Pass => format!("IDENTITY {} PASS", self.name),
            Outcome::Skip(why) => format!("IDENTITY {} PASS (skipped: {})", self.name, why),
            Outcome::Fail { row, col, expected, got } => {
                format!("IDENTITY {} FAIL ({},{}) {} {}", self.name, row, col, expected, got)
            }
        }
    }
}

fn compare(s: &TriangulatedSurface, name: &'static str, expected: &LabeledMatrix, got: &LabeledMatrix) -> IdentityResult {
    let outcome = match expected.first_difference(got) {
        None => Outcome::Pass,
        Some((r, c, e, g)) => Outcome::Fail { row: s.label_name(r), col: s.label_name(c), expected: e, got: g },
    };
    IdentityResult { name, outcome }
}

fn antisym(s: &TriangulatedSurface, name: &'static str, m: &LabeledMatrix) -> IdentityResult {
    compare(s, name, &m.transpose().scale(-1), m)
}

/// Exact checks of the matrix identities relating face, vertex and arc matrices.
pub fn verify_matrix_identities(s: &TriangulatedSurface) -> Result<Vec<IdentityResult>> {
    let m = all_matrices(s)?;
    let mut out = vec![
        antisym(s, "Q_antisymmetric", &m.q),
        antisym(s, "Qbar_antisymmetric", &m.qbar),
        antisym(s, "Qstar_antisymmetric", &m.qstar),
    ];
    let Some(v) = &m.quasi else {
        for name in ["HPplus=2I", "HbarPplusbar=2I", "Pplusbar*sigma=2K", "sigma=HbarK", "K_restrict=Pplusbar", "KQstarKt=Pbardiamond"] {
            out.push(IdentityResult { name, outcome: Outcome::Skip("no boundary".into()) });
        }
        return Ok(out);
    };
    let ebar = v.data.e_bar(s);
    out.push(antisym(s, "P_antisymmetric", &v.p));
    out.push(antisym(s, "Pbar_antisymmetric", &v.pbar));
    let two_e = LabeledMatrix::identity(v.data.e_labels()).scale(2);
    out.push(compare(s, "HPplus=2I", &two_e, &v.h.mul(&v.pplus)?));
    let two_ebar = LabeledMatrix::identity(ebar.clone()).scale(2);
    out.push(compare(s, "HbarPplusbar=2I", &two_ebar, &v.hbar.mul(&v.pplus_bar)?));
    out.push(compare(s, "Pplusbar*sigma=2K", &v.k.scale(2), &v.pplus_bar.mul(&v.sigma)?));
    out.push(compare(s, "sigma=HbarK", &v.sigma, &v.hbar.mul(&v.k)?));
    out.push(compare(s, "K_restrict=Pplusbar", &v.pplus_bar, &v.k.restrict(ebar.clone(), ebar)));
    let (_, _, qstar) = extended_face_matrices(s);
    let kq = v.k_ext.mul(&qstar)?.mul(&v.k_ext.transpose())?;
    out.push(compare(s, "KQstarKt=Pbardiamond", &v.pbar_diamond, &kq));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lab(s: &TriangulatedSurface, n: &str) -> Label {
        s.label_from_name(n).unwrap()
    }

    #[test]
    fn single_triangle_face_matrix() {
        let s = fixtures::quadrilateral();
        let q = face_matrix(&s);
        // T1 = (e1, e2, d) counterclockwise.
        assert_eq!(q.get(lab(&s, "e1"), lab(&s, "e2")), -1);
        assert_eq!(q.get(lab(&s, "e2"), lab(&s, "d")), -1);
        assert_eq!(q.get(lab(&s, "e3"), lab(&s, "e4")), -1);
        // d appears in both faces: Q(d, e1) = +1 from T1, Q(d, e3) = -1 from T2.
        assert_eq!(q.get(lab(&s, "d"), lab(&s, "e1")), -1);
        assert_eq!(q.get(lab(&s, "d"), lab(&s, "e3")), -1);
        assert_eq!(q.get(lab(&s, "e1"), lab(&s, "e3")), 0);
        assert!(q.is_antisymmetric());
    }

    #[test]
    fn monogon_matrices() {
        let s = fixtures::punctured_monogon();
        let m = all_matrices(&s).unwrap();
        assert!(m.q.data.iter().flatten().all(|x| *x == 0));
        let v = m.quasi.unwrap();
        assert_eq!(v.pplus.data, vec![vec![2]]);
        assert_eq!(v.h.data, vec![vec![1]]);
        let he = lab(&s, "hat(e)");
        assert_eq!(v.pplus_bar.get(he, he), 0);
    }

    #[test]
    fn quadrilateral_pplus_hand_counts() {
        let s = fixtures::quadrilateral();
        let v = vertex_matrices(&s).unwrap();
        // e1 and e2 meet at B with nothing between them; e2 is counterclockwise of e1's head.
        let (e1, e2) = (lab(&s, "e1"), lab(&s, "e2"));
        assert_eq!(v.pplus.get(e1, e2) + v.pplus.get(e2, e1), 1);
        assert_eq!(v.pplus.get(e1, e1), 1);
        let he1 = lab(&s, "hat(e1)");
        // Distinct endpoints: Pplusbar(hat e, hat e) = Pplus(e, e) - 2 = -1.
        assert_eq!(v.pplus_bar.get(he1, he1), -1);
    }

    #[test]
    fn qbar_hat_entries() {
        for (_, s) in fixtures::all_surfaces() {
            let (_, qbar, qstar) = extended_face_matrices(&s);
            for e in s.boundary_edges() {
                assert_eq!(qbar.get(Label::Hat(e), Label::Edge(e)), 1);
                assert_eq!(qbar.get(Label::Edge(e), Label::Hat(e)), -1);
                assert_eq!(qstar.get(Label::Edge(e), Label::Hat(e)), 1);
            }
        }
    }

    #[test]
    fn hbar_block_matches_monomials() {
        for (name, s) in fixtures::all_surfaces() {
            if !s.has_boundary() {
                continue;
            }
            let v = vertex_matrices(&s).unwrap();
            let cols = v.data.e_bar_p(&s);
            for (l, mono) in &v.hbar_monomials {
                if let Some(row) = v.hbar.row(*l) {
                    let got: Vec<i64> = cols.iter().map(|c| v.hbar.get(*l, *c)).collect();
                    assert_eq!(&got, mono, "{} row {}", name, s.label_name(*l));
                    assert_eq!(row.len(), v.data.e_bar(&s).len());
                }
            }
        }
    }

    #[test]
    fn chirality_flip_is_detected() {
        for name in ["quadrilateral", "genus_one_boundary", "annulus"] {
            let s = fixtures::by_name(name).unwrap();
            let v = vertex_matrices(&s).unwrap();
            let flipped = v.h.mul(&v.pplus.transpose()).unwrap();
            let two = LabeledMatrix::identity(v.data.e_labels()).scale(2);
            assert!(two.first_difference(&flipped).is_some(), "{}", name);
        }
    }

    #[test]
    fn identities_on_all_surfaces() {
        for (name, s) in fixtures::all_surfaces() {
            for r in verify_matrix_identities(&s).unwrap() {
                assert!(r.passed(), "{}: {}", name, r.line());
            }
        }
    }
}
