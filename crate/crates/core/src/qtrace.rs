//! Quantum traces of stated simple diagrams.
//!
//! `shear_trace` is a state sum over the crossing points of a diagram with edges. Each
//! triangle contributes the stacked product of its corner arcs; when the heights of the
//! points on an edge cannot be realized by a stacking, a bigon collar absorbs the
//! reordering and is evaluated by the counit. `extended_trace` runs the same sum on the
//! surface with a triangle attached to each boundary edge and rewrites the result in
//! z-variables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::bigon::{evaluate_counit, height_braid, CounitCache, Slice, SliceWord};
use crate::curves::{CurveKind, Layout, Realization, StatedDiagram, Step, Strand};
use crate::error::{Error, Result};
use crate::matrices::{all_matrices, face_matrix, LabeledMatrix, SurfaceMatrices};
use crate::qcoeff::HalfPowerLaurent;
use crate::qtorus::{is_form_compatible, weyl_normalize, AntisymForm, ExpVec, TorusElement};
use crate::state::Sign;
use crate::surface::{Label, Occ, TriangulatedSurface};
use crate::curves::generator_diagram;

/// Triangle form `Q(i, i+1) = -1` on the slots.
const TRI_FORM: [[i64; 3]; 3] = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]];

fn tri_pairing(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    let mut s = 0;
    for i in 0..3 {
        for j in 0..3 {
            s += TRI_FORM[i][j] * a[i] * b[j];
        }
    }
    s
}

pub fn form_from_matrix(s: &TriangulatedSurface, m: &LabeledMatrix) -> Result<Arc<AntisymForm>> {
    let names = m.rows.iter().map(|l| s.label_name(*l)).collect();
    Ok(Arc::new(AntisymForm::new(names, m.data.clone())?))
}

/// Value of one corner arc in the torus of its triangle, generators `a, b, c` for slots
/// `0, 1, 2`. `mu` is the state on the entry slot, `nu` on the exit slot.
pub fn triangle_trace(step: Step, mu: Sign, nu: Sign) -> Result<TorusElement> {
    if step.in_slot == step.out_slot || step.in_slot > 2 || step.out_slot > 2 {
        return Err(Error::InvalidDiagram("U-turn step".into()));
    }
    let form = Arc::new(AntisymForm::new(
        vec!["a".into(), "b".into(), "c".into()],
        TRI_FORM.iter().map(|r| r.to_vec()).collect(),
    )?);
    let c = step.corner().idx;
    let x = (c + 2) % 3;
    let (sx, sy) = if step.in_slot == x { (mu, nu) } else { (nu, mu) };
    if sy == Sign::Minus && sx == Sign::Plus {
        return Ok(TorusElement::zero(&form));
    }
    let names = ["a", "b", "c"];
    weyl_normalize(&form, &[(names[x], sx.value()), (names[c], sy.value())])
}

/// Height keys of the layout points; only points on a common edge are compared.
fn point_keys(s: &TriangulatedSurface, d: &StatedDiagram, real: &Realization, seam: &dyn Fn(&Strand) -> usize) -> Vec<(i64, i64)> {
    let mut keys = vec![(0, 0); real.layout.points.len()];
    let mut by_height: Vec<usize> = (0..d.components.len()).collect();
    by_height.sort_by_key(|i| (d.components[*i].height, *i));
    let mut rank = vec![0i64; d.components.len()];
    for (r, c) in by_height.iter().enumerate() {
        rank[*c] = r as i64;
    }
    for (ci, st) in real.strands.iter().enumerate() {
        let m = st.points.len();
        let k0 = if st.closed { seam(st) } else { 0 };
        for j in 0..m {
            keys[st.points[(k0 + j) % m]] = (rank[ci], j as i64);
        }
    }
    for ends in d.boundary_heights(s).values() {
        for (r, er) in ends.iter().enumerate() {
            keys[real.endpoint_point(*er)] = (-1, r as i64);
        }
    }
    keys
}

/// Seam at a point entered by a corner arc that is alone in its corner, if any.
fn lone_corner_seam(layout: &Layout) -> impl Fn(&Strand) -> usize + '_ {
    move |st: &Strand| {
        let m = st.points.len();
        (0..m)
            .find(|k| {
                let seg = layout.segments[st.segments[(k + m - 1) % m]];
                layout.corner_counts[seg.tri][seg.corner] == 1
            })
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct SegPlan {
    x_slot: usize,
    y_slot: usize,
    x_point: usize,
    y_point: usize,
    x_var: Option<usize>,
    y_var: Option<usize>,
}

#[derive(Clone, Debug)]
struct BigonPlan {
    slices: Vec<Slice>,
    vars_by_left_rank: Vec<usize>,
    points_by_right_rank: Vec<usize>,
}

#[derive(Clone, Debug)]
struct TriPlan {
    /// Stacking order, top first.
    segs: Vec<SegPlan>,
    bigons: Vec<BigonPlan>,
    n_vars: usize,
    points: Vec<usize>,
}

/// Points on occurrence `o` by increasing occurrence position, with their segments.
fn occ_points(s: &TriangulatedSurface, layout: &Layout, t: usize, slot: usize, segs: &[usize]) -> Vec<(usize, usize)> {
    let o = Occ::new(t, slot);
    let mut v = Vec::new();
    for si in segs {
        let seg = layout.segments[*si];
        if seg.corner == slot {
            v.push((seg.cw_point, *si));
        }
        if (seg.corner + 2) % 3 == slot {
            v.push((seg.ccw_point, *si));
        }
    }
    v.sort_by_key(|(p, _)| layout.occ_pos(s, o, *p));
    v
}

/// Stacking from the point orders; `None` when they conflict.
fn topo_stack(s: &TriangulatedSurface, layout: &Layout, t: usize, segs: &[usize], keys: &[(i64, i64)]) -> (Vec<usize>, bool) {
    let idx: HashMap<usize, usize> = segs.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = segs.len();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for slot in 0..3 {
        let mut pts = occ_points(s, layout, t, slot, segs);
        pts.sort_by_key(|(p, _)| keys[*p]);
        for w in pts.windows(2) {
            // w[1] is higher, so its segment goes first.
            let (hi, lo) = (idx[&w[1].1], idx[&w[0].1]);
            above[hi].push(lo);
            indeg[lo] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    let mut consistent = true;
    while order.len() < n {
        let pick = (0..n).find(|i| !done[*i] && indeg[*i] == 0).unwrap_or_else(|| {
            consistent = false;
            (0..n).filter(|i| !done[*i]).min_by_key(|i| (indeg[*i], *i)).unwrap()
        });
        done[pick] = true;
        order.push(segs[pick]);
        for lo in above[pick].clone() {
            indeg[lo] = indeg[lo].saturating_sub(1);
        }
    }
    (order, consistent)
}

fn plan_triangle(s: &TriangulatedSurface, layout: &Layout, t: usize, segs: &[usize], order: &[usize], keys: &[(i64, i64)]) -> TriPlan {
    let l_pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut bigons = Vec::new();
    let mut var_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut n_vars = 0;
    for slot in 0..3 {
        let pts = occ_points(s, layout, t, slot, segs);
        if pts.len() < 2 {
            continue;
        }
        // Height ranks from the stacking (lower in the stack = lower) and from the keys.
        let mut by_l: Vec<usize> = (0..pts.len()).collect();
        by_l.sort_by_key(|i| std::cmp::Reverse(l_pos[&pts[*i].1]));
        let mut by_key: Vec<usize> = (0..pts.len()).collect();
        by_key.sort_by_key(|i| keys[pts[*i].0]);
        if by_l == by_key {
            continue;
        }
        let mut left_rank = vec![0; pts.len()];
        let mut right_rank = vec![0; pts.len()];
        for (r, i) in by_l.iter().enumerate() {
            left_rank[*i] = r;
        }
        for (r, i) in by_key.iter().enumerate() {
            right_rank[*i] = r;
        }
        let vars: Vec<usize> = (0..pts.len()).map(|i| n_vars + i).collect();
        for (i, (_, si)) in pts.iter().enumerate() {
            var_of.insert((*si, slot), vars[i]);
        }
        n_vars += pts.len();
        bigons.push(BigonPlan {
            slices: height_braid(&left_rank, &right_rank),
            vars_by_left_rank: by_l.iter().map(|i| vars[*i]).collect(),
            points_by_right_rank: by_key.iter().map(|i| pts[*i].0).collect(),
        });
    }
    let seg_plans = order
        .iter()
        .map(|si| {
            let seg = layout.segments[*si];
            let x_slot = (seg.corner + 2) % 3;
            SegPlan {
                x_slot,
                y_slot: seg.corner,
                x_point: seg.ccw_point,
                y_point: seg.cw_point,
                x_var: var_of.get(&(*si, x_slot)).copied(),
                y_var: var_of.get(&(*si, seg.corner)).copied(),
            }
        })
        .collect();
    let mut points: Vec<usize> = segs.iter().flat_map(|si| [layout.segments[*si].cw_point, layout.segments[*si].ccw_point]).collect();
    points.sort();
    points.dedup();
    TriPlan { segs: seg_plans, bigons, n_vars, points }
}

impl TriPlan {
    fn stacked(&self, state: impl Fn(&SegPlan) -> (i64, i64)) -> Option<i64> {
        let mut total = [0i64; 3];
        let mut doubled = 0;
        for sp in self.segs.iter().rev() {
            let (sx, sy) = state(sp);
            if sy < 0 && sx > 0 {
                return None;
            }
            let mut k = [0i64; 3];
            k[sp.x_slot] += sx;
            k[sp.y_slot] += sy;
            // `total` collects the arcs below this one.
            doubled += tri_pairing(&k, &total);
            for i in 0..3 {
                total[i] += k[i];
            }
        }
        Some(doubled)
    }

    fn coefficient(&self, sigma: &[i64], cache: &mut CounitCache) -> HalfPowerLaurent {
        if self.n_vars == 0 {
            return match self.stacked(|sp| (sigma[sp.x_point], sigma[sp.y_point])) {
                Some(d) => HalfPowerLaurent::q_half_pow(d),
                None => HalfPowerLaurent::zero(),
            };
        }
        let mut total = HalfPowerLaurent::zero();
        let mut sv = vec![0i64; self.n_vars];
        'masks: for mask in 0..(1u64 << self.n_vars) {
            for (v, x) in sv.iter_mut().enumerate() {
                *x = if mask >> v & 1 == 1 { -1 } else { 1 };
            }
            for b in &self.bigons {
                let l: i64 = b.vars_by_left_rank.iter().map(|v| sv[*v]).sum();
                let r: i64 = b.points_by_right_rank.iter().map(|p| sigma[*p]).sum();
                if l != r {
                    continue 'masks;
                }
            }
            let pick = |var: Option<usize>, p: usize| var.map_or(sigma[p], |v| sv[v]);
            let Some(d) = self.stacked(|sp| (pick(sp.x_var, sp.x_point), pick(sp.y_var, sp.y_point))) else {
                continue;
            };
            let mut c = HalfPowerLaurent::q_half_pow(d);
            for b in &self.bigons {
                let left: Vec<Sign> = b.vars_by_left_rank.iter().map(|v| sign_of(sv[*v])).collect();
                let right: Vec<Sign> = b.points_by_right_rank.iter().map(|p| sign_of(sigma[*p])).collect();
                c = &c * &cache.value(&b.slices, &left, &right);
                if c.is_zero() {
                    continue 'masks;
                }
            }
            total += &c;
        }
        total
    }
}

fn sign_of(v: i64) -> Sign {
    if v > 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Fixed boundary states, indexed by point.
fn fixed_states(s: &TriangulatedSurface, d: &StatedDiagram, real: &Realization) -> Vec<Option<i64>> {
    let mut fixed = vec![None; real.layout.points.len()];
    for r in d.endpoints() {
        fixed[real.endpoint_point(r)] = Some(d.state(r).value());
    }
    for (p, pt) in real.layout.points.iter().enumerate() {
        debug_assert_eq!(s.is_boundary(pt.edge), fixed[p].is_some());
    }
    fixed
}

/// State sum on an arbitrary surface, in the edge torus `form` of `s`.
pub fn state_sum(s: &TriangulatedSurface, form: &Arc<AntisymForm>, d: &StatedDiagram) -> Result<TorusElement> {
    let real = d.realize(s)?;
    let layout = &real.layout;
    let keys = point_keys(s, d, &real, &lone_corner_seam(layout));
    let mut segs_of: Vec<Vec<usize>> = vec![Vec::new(); s.n_triangles()];
    for (i, seg) in layout.segments.iter().enumerate() {
        segs_of[seg.tri].push(i);
    }
    let plans: Vec<TriPlan> = (0..s.n_triangles())
        .filter(|t| !segs_of[*t].is_empty())
        .map(|t| {
            let (order, _) = topo_stack(s, layout, t, &segs_of[t], &keys);
            plan_triangle(s, layout, t, &segs_of[t], &order, &keys)
        })
        .collect();
    let fixed = fixed_states(s, d, &real);
    let mut var_order: Vec<usize> = Vec::new();
    let mut placed = vec![false; layout.points.len()];
    for st in &real.strands {
        for p in &st.points {
            if fixed[*p].is_none() && !placed[*p] {
                placed[*p] = true;
                var_order.push(*p);
            }
        }
    }
    let pos_in_order: HashMap<usize, usize> = var_order.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut completes: Vec<Vec<usize>> = vec![Vec::new(); var_order.len()];
    let mut constant = HalfPowerLaurent::one();
    let mut cache = CounitCache::default();
    let mut sigma: Vec<i64> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
    for (ti, tp) in plans.iter().enumerate() {
        match tp.points.iter().filter_map(|p| pos_in_order.get(p)).max() {
            Some(i) => completes[*i].push(ti),
            None => constant = &constant * &tp.coefficient(&sigma, &mut cache),
        }
    }
    let mut out = TorusElement::zero(form);
    if constant.is_zero() {
        return Ok(out);
    }
    let mut acc: BTreeMap<ExpVec, HalfPowerLaurent> = BTreeMap::new();
    let ctx = DfsCtx { plans: &plans, var_order: &var_order, completes: &completes, points: &layout.points, n_edges: s.n_edges() };
    ctx.dfs(0, constant, &mut sigma, &mut cache, &mut acc);
    for (k, c) in acc {
        out.add_term(k, &c);
    }
    Ok(out)
}

struct DfsCtx<'a> {
    plans: &'a [TriPlan],
    var_order: &'a [usize],
    completes: &'a [Vec<usize>],
    points: &'a [crate::curves::Point],
    n_edges: usize,
}

impl DfsCtx<'_> {
    fn dfs(&self, i: usize, coef: HalfPowerLaurent, sigma: &mut Vec<i64>, cache: &mut CounitCache, acc: &mut BTreeMap<ExpVec, HalfPowerLaurent>) {
        if i == self.var_order.len() {
            let mut k = vec![0i64; self.n_edges];
            for (p, pt) in self.points.iter().enumerate() {
                k[pt.edge] += sigma[p];
            }
            *acc.entry(k).or_default() += &coef;
            return;
        }
        let p = self.var_order[i];
        for v in [1i64, -1] {
            sigma[p] = v;
            let mut c = coef.clone();
            for t in &self.completes[i] {
                c = &c * &self.plans[*t].coefficient(sigma, cache);
                if c.is_zero() {
                    break;
                }
            }
            if !c.is_zero() {
                self.dfs(i + 1, c, sigma, cache, acc);
            }
        }
        sigma[p] = 0;
    }
}

/// Brute-force state sum: every assignment, each triangle a product of torus elements
/// in the occurrence torus, stacking found by search, reorderings by skein resolution.
pub fn naive_state_sum_on(s: &TriangulatedSurface, form: &Arc<AntisymForm>, d: &StatedDiagram) -> Result<TorusElement> {
    let real = d.realize(s)?;
    let layout = &real.layout;
    let keys = point_keys(s, d, &real, &|_| 0);
    let occ_names: Vec<String> = (0..3 * s.n_triangles()).map(|i| format!("{}.{}", s.triangles()[i / 3].id, i % 3)).collect();
    let mut occ_matrix = vec![vec![0i64; occ_names.len()]; occ_names.len()];
    for t in 0..s.n_triangles() {
        for i in 0..3 {
            for j in 0..3 {
                occ_matrix[3 * t + i][3 * t + j] = TRI_FORM[i][j];
            }
        }
    }
    let occ_form = Arc::new(AntisymForm::new(occ_names.clone(), occ_matrix)?);
    let fixed = fixed_states(s, d, &real);
    let free: Vec<usize> = (0..layout.points.len()).filter(|p| fixed[*p].is_none()).collect();
    if free.len() > 20 {
        return Err(Error::Precondition(format!("{} crossings is too many for brute force", free.len())));
    }
    let mut segs_of: Vec<Vec<usize>> = vec![Vec::new(); s.n_triangles()];
    for (i, seg) in layout.segments.iter().enumerate() {
        segs_of[seg.tri].push(i);
    }
    let orders: Vec<Vec<usize>> = (0..s.n_triangles()).map(|t| search_stack(s, layout, t, &segs_of[t], &keys)).collect();
    let mut total = TorusElement::zero(form);
    for mask in 0..(1u64 << free.len()) {
        let mut sigma: Vec<i64> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
        for (i, p) in free.iter().enumerate() {
            sigma[*p] = if mask >> i & 1 == 1 { -1 } else { 1 };
        }
        let mut prod = TorusElement::one(&occ_form);
        for t in 0..s.n_triangles() {
            if segs_of[t].is_empty() {
                continue;
            }
            let f = naive_triangle(s, layout, t, &segs_of[t], &orders[t], &keys, &sigma, &occ_form, &occ_names)?;
            prod = prod.multiply(&f)?;
            if prod.is_zero() {
                break;
            }
        }
        for (k, c) in prod.terms() {
            let mut ke = vec![0i64; s.n_edges()];
            for e in 0..s.n_edges() {
                let occs = s.occurrences(e);
                let v = k[occs[0].id()];
                if occs.len() == 2 && k[occs[1].id()] != v {
                    return Err(Error::Precondition("unbalanced occurrence exponents".into()));
                }
                ke[e] = v;
            }
            total.add_term(ke, c);
        }
    }
    Ok(total)
}

fn consistent_order(s: &TriangulatedSurface, layout: &Layout, t: usize, segs: &[usize], order: &[usize], keys: &[(i64, i64)]) -> bool {
    let l_pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    (0..3).all(|slot| {
        let pts = occ_points(s, layout, t, slot, segs);
        pts.iter().all(|(p, si)| {
            pts.iter().all(|(p2, si2)| !(keys[*p] > keys[*p2]) || l_pos[si] < l_pos[si2])
        })
    })
}

fn search_stack(s: &TriangulatedSurface, layout: &Layout, t: usize, segs: &[usize], keys: &[(i64, i64)]) -> Vec<usize> {
    if segs.len() <= 6 {
        let mut perm = segs.to_vec();
        let mut found = None;
        permute(&mut perm, 0, &mut |p| {
            if found.is_none() && consistent_order(s, layout, t, segs, p, keys) {
                found = Some(p.to_vec());
            }
        });
        if let Some(f) = found {
            return f;
        }
    }
    let mut by_key = segs.to_vec();
    by_key.sort_by_key(|si| {
        let seg = layout.segments[*si];
        std::cmp::Reverse(keys[seg.cw_point].max(keys[seg.ccw_point]))
    });
    by_key
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[allow(clippy::too_many_arguments)]
fn naive_triangle(
    s: &TriangulatedSurface,
    layout: &Layout,
    t: usize,
    segs: &[usize],
    order: &[usize],
    keys: &[(i64, i64)],
    sigma: &[i64],
    occ_form: &Arc<AntisymForm>,
    names: &[String],
) -> Result<TorusElement> {
    let plan = plan_triangle(s, layout, t, segs, order, keys);
    let mut total = TorusElement::zero(occ_form);
    for mask in 0..(1u64 << plan.n_vars) {
        let sv: Vec<i64> = (0..plan.n_vars).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect();
        let pick = |var: Option<usize>, p: usize| var.map_or(sigma[p], |v| sv[v]);
        let mut prod = TorusElement::one(occ_form);
        for sp in &plan.segs {
            let (sx, sy) = (pick(sp.x_var, sp.x_point), pick(sp.y_var, sp.y_point));
            if sy < 0 && sx > 0 {
                prod = TorusElement::zero(occ_form);
                break;
            }
            let f = weyl_normalize(occ_form, &[(names[3 * t + sp.x_slot].as_str(), sx), (names[3 * t + sp.y_slot].as_str(), sy)])?;
            prod = prod.multiply(&f)?;
        }
        if prod.is_zero() {
            continue;
        }
        let mut c = HalfPowerLaurent::one();
        for b in &plan.bigons {
            let w = SliceWord::new(
                b.slices.clone(),
                b.vars_by_left_rank.iter().map(|v| sign_of(sv[*v])).collect(),
                b.points_by_right_rank.iter().map(|p| sign_of(sigma[*p])).collect(),
            )?;
            c = &c * &evaluate_counit(&w)?;
        }
        total = total.add(&prod.scale(&c))?;
    }
    Ok(total)
}

/// The surface with a triangle `(e, hat'(e), hat(e))` glued to each boundary edge `e`.
#[derive(Clone, Debug)]
pub struct AttachedSurface {
    pub surface: TriangulatedSurface,
    pub form: Arc<AntisymForm>,
    /// Per boundary edge of the base (in `boundary_edges()` order): attached triangle,
    /// `hat(e)` and `hat'(e)` edge indices.
    pub attached: Vec<(usize, usize, usize)>,
}

pub fn attach_triangles(s: &TriangulatedSurface) -> Result<AttachedSurface> {
    let (mut tris, _) = s.to_parts();
    let mut bnd = Vec::new();
    let base = tris.len();
    for e in s.boundary_edges() {
        let name = s.edge_name(e).to_string();
        let hat = s.label_name(Label::Hat(e));
        let hatp = format!("hat'({})", name);
        tris.push((format!("attach({})", name), [name, hatp.clone(), hat.clone()]));
        bnd.push(hatp);
        bnd.push(hat);
    }
    let star = TriangulatedSurface::from_parts(tris, bnd)?;
    let attached = s
        .boundary_edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let hat = star.edge_index(&s.label_name(Label::Hat(*e))).expect("hat edge");
            let hatp = star.edge_index(&format!("hat'({})", s.edge_name(*e))).expect("hat' edge");
            (base + i, hat, hatp)
        })
        .collect();
    let form = form_from_matrix(&star, &face_matrix(&star))?;
    Ok(AttachedSurface { surface: star, form, attached })
}

impl AttachedSurface {
    /// Arcs continued across the attached triangles, endpoints moved onto `hat(e)`.
    pub fn extend(&self, base: &TriangulatedSurface, d: &StatedDiagram) -> Result<StatedDiagram> {
        let bnd = base.boundary_edges();
        let tri_of = |e: usize| self.attached[bnd.iter().position(|b| *b == e).expect("boundary")].0;
        let mut out = d.clone();
        for (ci, c) in out.components.iter_mut().enumerate() {
            if let CurveKind::Arc(_) = c.kind {
                let e0 = d.endpoint_edge(base, crate::curves::EndRef { component: ci, end: 0 });
                let e1 = d.endpoint_edge(base, crate::curves::EndRef { component: ci, end: 1 });
                c.steps.insert(0, Step::new(tri_of(e0), 2, 0));
                c.steps.push(Step::new(tri_of(e1), 0, 2));
            }
        }
        let order = d.boundary_heights(base);
        out.boundary_order = Some(
            order
                .into_iter()
                .map(|(e, ends)| (self.attached[bnd.iter().position(|b| *b == e).unwrap()].1, ends))
                .collect(),
        );
        out.validate(&self.surface)?;
        Ok(out)
    }
}

/// Surfaces, matrices and tori used by the traces.
#[derive(Clone, Debug)]
pub struct TraceContext {
    pub surface: TriangulatedSurface,
    pub matrices: SurfaceMatrices,
    /// Edge torus `T(Q)`.
    pub y_form: Arc<AntisymForm>,
    /// `T(Qbar*)` over Delta bar.
    pub ybar_form: Arc<AntisymForm>,
    /// `T(Qbar)` over Delta bar, z-variables.
    pub z_form: Arc<AntisymForm>,
    /// `T(Pbar diamond)` over E bar and the interior punctures.
    pub x_form: Option<Arc<AntisymForm>>,
    pub attached: Option<AttachedSurface>,
}

impl TraceContext {
    pub fn new(s: &TriangulatedSurface) -> Result<Self> {
        let matrices = all_matrices(s)?;
        let y_form = form_from_matrix(s, &matrices.q)?;
        let ybar_form = form_from_matrix(s, &matrices.qstar)?;
        let z_form = form_from_matrix(s, &matrices.qbar)?;
        let x_form = match &matrices.quasi {
            Some(v) => Some(form_from_matrix(s, &v.pbar_diamond)?),
            None => None,
        };
        let attached = if s.has_boundary() { Some(attach_triangles(s)?) } else { None };
        let ctx = Self { surface: s.clone(), matrices, y_form, ybar_form, z_form, x_form, attached };
        if !ctx.attached_form_matches() || !is_form_compatible(&ctx.z_form, &ctx.ybar_form, &ctx.z_to_y_matrix()) {
            return Err(Error::FormMismatch);
        }
        Ok(ctx)
    }

    /// Face form of the attached surface restricted to Delta bar equals `Qbar*`.
    pub fn attached_form_matches(&self) -> bool {
        let Some(att) = &self.attached else { return true };
        let db = self.surface.delta_bar();
        let idx: Vec<usize> = db.iter().map(|l| self.star_index(att, *l)).collect();
        db.iter().enumerate().all(|(i, _)| {
            db.iter().enumerate().all(|(j, _)| att.form.entry(idx[i], idx[j]) == self.ybar_form.entry(i, j))
        })
    }

    fn star_index(&self, att: &AttachedSurface, l: Label) -> usize {
        let bnd = self.surface.boundary_edges();
        match l {
            Label::Edge(e) => att.surface.edge_index(self.surface.edge_name(e)).expect("edge"),
            Label::Hat(e) => att.attached[bnd.iter().position(|b| *b == e).expect("boundary")].1,
            Label::Puncture(_) => unreachable!("no puncture in Delta bar"),
        }
    }

    /// Rows: z-generators; `z_e = [y_e y_hat(e)]`, `z_hat(e) = y_hat(e)^{-1}`.
    pub fn z_to_y_matrix(&self) -> Vec<Vec<i64>> {
        let db = self.surface.delta_bar();
        db.iter()
            .map(|r| {
                db.iter()
                    .map(|c| match (*r, *c) {
                        (Label::Edge(a), Label::Edge(b)) => i64::from(a == b),
                        (Label::Edge(a), Label::Hat(b)) => i64::from(a == b),
                        (Label::Hat(a), Label::Hat(b)) => -i64::from(a == b),
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn z_to_y(&self, u: &TorusElement) -> TorusElement {
        u.map_monomials(&self.ybar_form, &self.z_to_y_matrix())
    }

    /// Inverse of `z_to_y`: `m(a) = k(a)`, `m(hat e) = k(e) - k(hat e)`.
    pub fn y_to_z(&self, u: &TorusElement) -> TorusElement {
        let ne = self.surface.n_edges();
        let bnd = self.surface.boundary_edges();
        let mut out = TorusElement::zero(&self.z_form);
        for (k, c) in u.terms() {
            let mut m = k.clone();
            for (i, e) in bnd.iter().enumerate() {
                m[ne + i] = k[*e] - k[ne + i];
            }
            out.add_term(m, c);
        }
        out
    }

    /// `tr`: the state sum on the surface itself.
    pub fn shear_trace(&self, d: &StatedDiagram) -> Result<TorusElement> {
        state_sum(&self.surface, &self.y_form, d)
    }

    pub fn naive_state_sum(&self, d: &StatedDiagram) -> Result<TorusElement> {
        naive_state_sum_on(&self.surface, &self.y_form, d)
    }

    fn from_attached(&self, u: &TorusElement) -> Result<TorusElement> {
        let att = self.attached.as_ref().expect("attached surface");
        let db = self.surface.delta_bar();
        let idx: Vec<usize> = db.iter().map(|l| self.star_index(att, *l)).collect();
        let mut out = TorusElement::zero(&self.ybar_form);
        for (k, c) in u.terms() {
            if att.attached.iter().any(|(_, _, hp)| k[*hp] != 0) {
                return Err(Error::Precondition("nonzero exponent on an attached outer edge".into()));
            }
            out.add_term(idx.iter().map(|i| k[*i]).collect(), c);
        }
        Ok(out)
    }

    /// `phi` in the y-variables over Delta bar.
    pub fn extended_trace_y(&self, d: &StatedDiagram) -> Result<TorusElement> {
        match &self.attached {
            None => {
                let t = self.shear_trace(d)?;
                Ok(t.map_monomials(&self.ybar_form, &identity(self.surface.n_edges())))
            }
            Some(att) => {
                let ext = att.extend(&self.surface, d)?;
                self.from_attached(&state_sum(&att.surface, &att.form, &ext)?)
            }
        }
    }

    /// `phi` in the z-variables.
    pub fn extended_trace(&self, d: &StatedDiagram) -> Result<TorusElement> {
        Ok(self.y_to_z(&self.extended_trace_y(d)?))
    }

    /// Brute-force `phi` in the y-variables over Delta bar.
    pub fn naive_extended_y(&self, d: &StatedDiagram) -> Result<TorusElement> {
        match &self.attached {
            None => Ok(self.naive_state_sum(d)?.map_monomials(&self.ybar_form, &identity(self.surface.n_edges()))),
            Some(att) => {
                let ext = att.extend(&self.surface, d)?;
                self.from_attached(&naive_state_sum_on(&att.surface, &att.form, &ext)?)
            }
        }
    }

    /// `pr`: drop terms with a nonzero hatted exponent, then the hatted coordinates.
    pub fn project_pr(&self, u: &TorusElement) -> TorusElement {
        let ne = self.surface.n_edges();
        let mut out = TorusElement::zero(&self.y_form);
        for (k, c) in u.terms() {
            if k[ne..].iter().all(|x| *x == 0) {
                out.add_term(k[..ne].to_vec(), c);
            }
        }
        out
    }

    fn x_form(&self) -> Result<&Arc<AntisymForm>> {
        self.x_form.as_ref().ok_or_else(|| Error::Precondition("length coordinates need a boundary puncture".into()))
    }

    /// Ordered product of the length generators `x_l`.
    pub fn length_monomial(&self, word: &[Label]) -> Result<TorusElement> {
        let form = self.x_form()?;
        let mut out = TorusElement::one(form);
        for l in word {
            let name = self.surface.label_name(*l);
            let g = TorusElement::generator(form, &name, 1).map_err(|_| Error::UnknownGenerator(name))?;
            out = out.multiply(&g)?;
        }
        Ok(out)
    }

    /// `psi`: `x^n -> y^{nK}` into `T(Qbar*)`.
    pub fn psi_map(&self, u: &TorusElement) -> Result<TorusElement> {
        let form = self.x_form()?;
        let v = self.matrices.quasi.as_ref().expect("vertex matrices");
        if !is_form_compatible(form, &self.ybar_form, &v.k_ext.data) {
            return Err(Error::FormMismatch);
        }
        Ok(u.map_monomials(&self.ybar_form, &v.k_ext.data))
    }

    /// `phi(X_l)` in z-variables, including the generator's prefactor.
    pub fn generator_trace(&self, l: Label) -> Result<TorusElement> {
        let v = self.matrices.quasi.as_ref().ok_or_else(|| Error::Precondition("generators need a boundary puncture".into()))?;
        let (d, pre) = generator_diagram(&self.surface, &v.data, l)?;
        Ok(self.extended_trace(&d)?.scale(&HalfPowerLaurent::q_half_pow(pre)))
    }

    /// Weight vector for the filtration degree: unhatted entries count.
    pub fn dego_weight(&self) -> Vec<i64> {
        let ne = self.surface.n_edges();
        (0..self.z_form.dim()).map(|i| i64::from(i < ne)).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Image of a torus element from a cut surface under `y_{c'}, y_{c''} -> y_c`.
pub fn glue_cut(u: &TorusElement, cut: &TriangulatedSurface, cut_edges: &[String; 2], base: &TriangulatedSurface, form: &Arc<AntisymForm>, c: usize) -> Result<TorusElement> {
    let i1 = cut.edge_index(&cut_edges[0]).expect("cut edge");
    let i2 = cut.edge_index(&cut_edges[1]).expect("cut edge");
    let mut out = TorusElement::zero(form);
    for (k, coef) in u.terms() {
        if k[i1] != k[i2] {
            continue;
        }
        let mut kb = vec![0i64; base.n_edges()];
        for e in 0..base.n_edges() {
            kb[e] = if e == c { k[i1] } else { k[cut.edge_index(base.edge_name(e)).expect("edge")] };
        }
        out.add_term(kb, coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{enumerate_lambda, reconstruct_from_normal, split_along_edge, ExtendedCoords};
    use crate::fixtures;

    fn q(d: i64) -> HalfPowerLaurent {
        HalfPowerLaurent::q_half_pow(d)
    }

    #[test]
    fn triangle_rule_examples() {
        // Corner 0 sits between slot 2 (earlier) and slot 0 (later).
        let st = Step::new(0, 2, 0);
        let v = triangle_trace(st, Sign::Plus, Sign::Plus).unwrap();
        assert_eq!(v.num_terms(), 1);
        let (k, c) = v.terms().next().unwrap();
        assert_eq!(k, &vec![1, 0, 1]);
        assert_eq!(*c, HalfPowerLaurent::one());
        assert!(triangle_trace(st, Sign::Plus, Sign::Minus).unwrap().is_zero());
        assert!(!triangle_trace(st, Sign::Minus, Sign::Plus).unwrap().is_zero());
        let v = triangle_trace(st, Sign::Minus, Sign::Minus).unwrap();
        assert_eq!(v.terms().next().unwrap().0, &vec![-1, 0, -1]);
        assert!(triangle_trace(Step::new(0, 1, 1), Sign::Plus, Sign::Plus).is_err());
    }

    #[test]
    fn peripheral_loop_trace() {
        for (_, s) in fixtures::bundled_surfaces() {
            let Ok(data) = s.complete_quasitriangulation() else { continue };
            let ctx = TraceContext::new(&s).unwrap();
            for m in &data.monogons {
                let mut v = ExtendedCoords::zero(&s);
                v.n[m.ev] = 1;
                let d = reconstruct_from_normal(&s, &v).unwrap();
                let t = ctx.shear_trace(&d).unwrap();
                let mut want = TorusElement::zero(&ctx.y_form);
                let mut k = vec![0; s.n_edges()];
                k[m.ev] = 1;
                want.add_term(k.clone(), &HalfPowerLaurent::one());
                k[m.ev] = -1;
                want.add_term(k, &HalfPowerLaurent::one());
                assert_eq!(t, want);
            }
        }
    }

    #[test]
    fn torus_curve_matches_naive() {
        let s = fixtures::punctured_torus();
        let ctx = TraceContext::new(&s).unwrap();
        let d = reconstruct_from_normal(&s, &ExtendedCoords { n: vec![1, 1, 0], hat: vec![] }).unwrap();
        let t = ctx.shear_trace(&d).unwrap();
        assert_eq!(t.num_terms(), 3);
        assert_eq!(t, ctx.naive_state_sum(&d).unwrap());
        for (k, _) in t.terms() {
            assert!(crate::curves::is_balanced(&s, k));
        }
    }

    #[test]
    fn generators_are_monomials() {
        for (name, s) in fixtures::bundled_surfaces() {
            if !s.has_boundary() {
                continue;
            }
            let ctx = TraceContext::new(&s).unwrap();
            let v = ctx.matrices.quasi.as_ref().unwrap();
            for l in v.data.e_bar(&s) {
                let phi = ctx.z_to_y(&ctx.generator_trace(l).unwrap());
                let want = TorusElement::monomial(&ctx.ybar_form, v.k.row(l).unwrap().to_vec(), HalfPowerLaurent::one());
                assert_eq!(phi, want, "{} {}", name, s.label_name(l));
            }
        }
    }

    #[test]
    fn seam_choice_does_not_matter() {
        for (_, s) in fixtures::all_surfaces() {
            let ctx = TraceContext::new(&s).unwrap();
            for v in enumerate_lambda(&s, 2) {
                let d = reconstruct_from_normal(&s, &v).unwrap();
                if d.components.iter().any(|c| c.is_arc()) {
                    continue;
                }
                let real = d.realize(&s).unwrap();
                let free = real.layout.points.len();
                if free > 8 {
                    continue;
                }
                assert_eq!(ctx.shear_trace(&d).unwrap(), ctx.naive_state_sum(&d).unwrap());
            }
        }
    }

    #[test]
    fn reversed_heights_agree_without_shared_edges() {
        let s = fixtures::quadrilateral();
        let ctx = TraceContext::new(&s).unwrap();
        for v in enumerate_lambda(&s, 1) {
            let d = reconstruct_from_normal(&s, &v).unwrap();
            let order = d.boundary_heights(&s);
            if order.values().any(|e| e.len() > 1) {
                continue;
            }
            let n = d.components.len() as i64;
            let heights: Vec<i64> = (0..n).rev().collect();
            let d2 = d.with_heights(&s, &heights);
            assert_eq!(ctx.shear_trace(&d).unwrap(), ctx.shear_trace(&d2).unwrap());
        }
    }

    #[test]
    fn splitting_is_compatible() {
        for (_, s) in fixtures::all_surfaces() {
            let ctx = TraceContext::new(&s).unwrap();
            for v in enumerate_lambda(&s, 2).into_iter().step_by(7) {
                let d = reconstruct_from_normal(&s, &v).unwrap();
                for c in 0..s.n_edges() {
                    if s.is_boundary(c) || v.n[c] == 0 {
                        continue;
                    }
                    let m = v.n[c] as usize;
                    let order: Vec<usize> = (0..m).rev().collect();
                    let r = split_along_edge(&d, &s, c, Some(&order)).unwrap();
                    let cut_form = form_from_matrix(&r.surface, &face_matrix(&r.surface)).unwrap();
                    let mut sum = TorusElement::zero(&ctx.y_form);
                    for sd in &r.summands {
                        let t = state_sum(&r.surface, &cut_form, sd).unwrap();
                        sum = sum.add(&glue_cut(&t, &r.surface, &r.cut_edges, &s, &ctx.y_form, c).unwrap()).unwrap();
                    }
                    assert_eq!(sum, ctx.shear_trace(&d).unwrap());
                }
            }
        }
    }

    #[test]
    fn pr_kills_hatted_terms() {
        let s = fixtures::quadrilateral();
        let ctx = TraceContext::new(&s).unwrap();
        let mut k = vec![0; ctx.z_form.dim()];
        k[s.n_edges()] = 2;
        let u = TorusElement::monomial(&ctx.z_form, k, q(1));
        assert!(ctx.project_pr(&u).is_zero());
        let k0 = vec![1; ctx.z_form.dim()];
        let mut k1 = k0.clone();
        for x in k1[s.n_edges()..].iter_mut() {
            *x = 0;
        }
        let u = TorusElement::monomial(&ctx.z_form, k1, q(1));
        assert_eq!(ctx.project_pr(&u).num_terms(), 1);
    }
}
