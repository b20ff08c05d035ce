//! Counit evaluation for stated tangle diagrams in the bigon.
//!
//! A diagram is a word of elementary slices read from the left edge to the right edge.
//! Points on both edges are listed bottom to top, and heights increase upward on both
//! edges. `cross_pos(i)` has the strand running from position `i` to `i + 1` over the other.
//!
//! Grammar accepted by [`SliceWord::parse`]:
//!
//! ```text
//! word   := slices " | L:" states " R:" states
//! slices := "id" | slice ("." slice)*
//! slice  := ("cup" | "cap" | "cross_pos" | "cross_neg") index
//! states := ("+" | "-")*
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcoeff::HalfPowerLaurent;
use crate::state::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slice {
    Cup(usize),
    Cap(usize),
    CrossPos(usize),
    CrossNeg(usize),
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Cup(i) => write!(f, "cup{i}"),
            Slice::Cap(i) => write!(f, "cap{i}"),
            Slice::CrossPos(i) => write!(f, "cross_pos{i}"),
            Slice::CrossNeg(i) => write!(f, "cross_neg{i}"),
        }
    }
}

fn parse_slice(tok: &str) -> Result<Slice> {
    let bad = || Error::InvalidWord(format!("unknown slice `{tok}`"));
    let split = tok.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (name, idx) = tok.split_at(split);
    let i: usize = idx.parse().map_err(|_| bad())?;
    match name {
        "cup" => Ok(Slice::Cup(i)),
        "cap" => Ok(Slice::Cap(i)),
        "cross_pos" => Ok(Slice::CrossPos(i)),
        "cross_neg" => Ok(Slice::CrossNeg(i)),
        _ => Err(bad()),
    }
}

/// Strand count after each slice, starting from `n`; `None` on an arity violation.
fn profile_from(n: usize, slices: &[Slice]) -> Option<Vec<usize>> {
    let mut out = vec![n];
    let mut n = n;
    for s in slices {
        n = match *s {
            Slice::Cup(i) if i <= n => n + 2,
            Slice::Cap(i) if i + 1 < n => n - 2,
            Slice::CrossPos(i) | Slice::CrossNeg(i) if i + 1 < n => n,
            _ => return None,
        };
        out.push(n);
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SliceWord {
    pub slices: Vec<Slice>,
    pub left: Vec<Sign>,
    pub right: Vec<Sign>,
}

impl SliceWord {
    pub fn new(slices: Vec<Slice>, left: Vec<Sign>, right: Vec<Sign>) -> Result<Self> {
        let w = Self { slices, left, right };
        w.profile()?;
        Ok(w)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (lhs, rhs) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidWord("missing `|`".into()))?;
        let lhs = lhs.trim();
        let slices = if lhs == "id" || lhs.is_empty() {
            Vec::new()
        } else {
            lhs.split('.').map(|t| parse_slice(t.trim())).collect::<Result<Vec<_>>>()?
        };
        let mut left = None;
        let mut right = None;
        for part in rhs.split_whitespace() {
            let states = |s: &str| {
                Sign::parse_list(s).ok_or_else(|| Error::InvalidWord(format!("bad states `{s}`")))
            };
            if let Some(s) = part.strip_prefix("L:") {
                left = Some(states(s)?);
            } else if let Some(s) = part.strip_prefix("R:") {
                right = Some(states(s)?);
            } else {
                return Err(Error::InvalidWord(format!("unexpected `{part}`")));
            }
        }
        let left = left.unwrap_or_default();
        let right = right.unwrap_or_default();
        Self::new(slices, left, right)
    }

    /// Strand counts between slices, including both ends.
    pub fn profile(&self) -> Result<Vec<usize>> {
        let p = profile_from(self.left.len(), &self.slices)
            .ok_or_else(|| Error::InvalidWord("slice arities do not compose".into()))?;
        if *p.last().expect("nonempty") != self.right.len() {
            return Err(Error::InvalidWord(format!(
                "word ends with {} strands but {} right states",
                p.last().expect("nonempty"),
                self.right.len()
            )));
        }
        Ok(p)
    }

    pub fn n_crossings(&self) -> usize {
        self.slices
            .iter()
            .filter(|s| matches!(s, Slice::CrossPos(_) | Slice::CrossNeg(_)))
            .count()
    }
}

impl fmt::Display for SliceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slices.is_empty() {
            write!(f, "id")?;
        } else {
            let s: Vec<String> = self.slices.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", s.join("."))?;
        }
        let l: String = self.left.iter().map(|s| s.to_string()).collect();
        let r: String = self.right.iter().map(|s| s.to_string()).collect();
        write!(f, " | L:{l} R:{r}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Direction in which heights increase along an edge, relative to the drawing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
}

/// Key: side, height direction, state at the upper position, state at the lower position.
pub type ArcKey = (Side, Direction, Sign, Sign);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrivialArcTable {
    entries: BTreeMap<ArcKey, HalfPowerLaurent>,
}

impl TrivialArcTable {
    pub fn get(&self, key: ArcKey) -> Option<&HalfPowerLaurent> {
        self.entries.get(&key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ArcKey, &HalfPowerLaurent)> {
        self.entries.iter()
    }

    fn insert(&mut self, key: ArcKey, v: HalfPowerLaurent) {
        self.entries.insert(key, v);
    }
}

fn q(k: i64) -> HalfPowerLaurent {
    HalfPowerLaurent::q_half_pow(k)
}

#[derive(Clone, Copy, Debug)]
enum Endpoint {
    Left(usize),
    Right(usize),
}

/// Evaluate a crossingless word. Directions other than `Up` are only meaningful when the
/// corresponding side carries no through strands.
fn eval_crossingless(
    slices: &[Slice],
    left: &[Sign],
    right: &[Sign],
    dirs: (Direction, Direction),
    table: &TrivialArcTable,
) -> Result<HalfPowerLaurent> {
    // Union-find over chains; each position holds a chain id.
    let mut parent: Vec<usize> = Vec::new();
    let mut ends: Vec<Vec<Endpoint>> = Vec::new();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut pos: Vec<usize> = Vec::new();
    for j in 0..left.len() {
        parent.push(j);
        ends.push(vec![Endpoint::Left(j)]);
        pos.push(j);
    }
    let mut loops = 0usize;
    for s in slices {
        match *s {
            Slice::Cup(i) => {
                let id = parent.len();
                parent.push(id);
                ends.push(Vec::new());
                pos.splice(i..i, [id, id]);
            }
            Slice::Cap(i) => {
                let a = find(&mut parent, pos[i]);
                let b = find(&mut parent, pos[i + 1]);
                if a == b {
                    loops += 1;
                } else {
                    parent[b] = a;
                    let moved = std::mem::take(&mut ends[b]);
                    ends[a].extend(moved);
                }
                pos.drain(i..i + 2);
            }
            _ => return Err(Error::InvalidWord("crossing in crossingless evaluation".into())),
        }
    }
    for (j, id) in pos.iter().enumerate() {
        let r = find(&mut parent, *id);
        ends[r].push(Endpoint::Right(j));
    }
    let mut value = HalfPowerLaurent::one();
    for _ in 0..loops {
        value = &value * &HalfPowerLaurent::loop_value();
    }
    for r in 0..parent.len() {
        if find(&mut parent, r) != r || ends[r].is_empty() {
            continue;
        }
        let factor = match ends[r].as_slice() {
            [Endpoint::Left(a), Endpoint::Right(b)] | [Endpoint::Right(b), Endpoint::Left(a)] => {
                if dirs != (Direction::Up, Direction::Up) {
                    return Err(Error::InvalidWord("through strand with reversed heights".into()));
                }
                HalfPowerLaurent::constant(i64::from(left[*a] == right[*b]))
            }
            [Endpoint::Left(a), Endpoint::Left(b)] => {
                let (lo, hi) = (*a.min(b), *a.max(b));
                arc_value(table, (Side::Left, dirs.0, left[hi], left[lo]))?
            }
            [Endpoint::Right(a), Endpoint::Right(b)] => {
                let (lo, hi) = (*a.min(b), *a.max(b));
                arc_value(table, (Side::Right, dirs.1, right[hi], right[lo]))?
            }
            _ => return Err(Error::InvalidWord("malformed component".into())),
        };
        value = &value * &factor;
        if value.is_zero() {
            break;
        }
    }
    Ok(value)
}

fn arc_value(table: &TrivialArcTable, key: ArcKey) -> Result<HalfPowerLaurent> {
    table
        .get(key)
        .cloned()
        .ok_or_else(|| Error::InvalidWord(format!("no trivial-arc value for {key:?}")))
}

/// Resolve every crossing by the Kauffman relation, then evaluate crossingless terms.
fn eval_resolving(
    slices: &[Slice],
    left: &[Sign],
    right: &[Sign],
    dirs: (Direction, Direction),
    table: &TrivialArcTable,
) -> Result<HalfPowerLaurent> {
    let Some(k) = slices.iter().position(|s| matches!(s, Slice::CrossPos(_) | Slice::CrossNeg(_))) else {
        return eval_crossingless(slices, left, right, dirs, table);
    };
    let (i, smooth_coeff, straight_coeff) = match slices[k] {
        Slice::CrossPos(i) => (i, 2, -2),
        Slice::CrossNeg(i) => (i, -2, 2),
        _ => unreachable!(),
    };
    let mut smoothed = slices[..k].to_vec();
    smoothed.push(Slice::Cap(i));
    smoothed.push(Slice::Cup(i));
    smoothed.extend_from_slice(&slices[k + 1..]);
    let mut straight = slices[..k].to_vec();
    straight.extend_from_slice(&slices[k + 1..]);
    let a = eval_resolving(&smoothed, left, right, dirs, table)?;
    let b = eval_resolving(&straight, left, right, dirs, table)?;
    Ok(&(&q(smooth_coeff) * &a) + &(&q(straight_coeff) * &b))
}

fn derive_table(alternative: bool) -> TrivialArcTable {
    use Sign::{Minus, Plus};
    let up = (Direction::Up, Direction::Up);
    let mut t = TrivialArcTable::default();
    // Base values on the right edge with heights increasing upward.
    t.insert((Side::Right, Direction::Up, Plus, Minus), q(-1));
    t.insert((Side::Right, Direction::Up, Plus, Plus), HalfPowerLaurent::zero());
    t.insert((Side::Right, Direction::Up, Minus, Minus), HalfPowerLaurent::zero());
    // State exchange applied to the two ends of one arc: the joined term is a loop.
    let mp = &(&q(4) * &q(-1)) + &(&q(-1) * &HalfPowerLaurent::loop_value());
    t.insert((Side::Right, Direction::Up, Minus, Plus), mp);
    // Right edge, heights increasing downward: slide the higher point to the top.
    for u in Sign::BOTH {
        for l in Sign::BOTH {
            let v = eval_resolving(&[Slice::Cup(0), Slice::CrossPos(0)], &[], &[u, l], up, &t)
                .expect("right kink");
            t.insert((Side::Right, Direction::Down, u, l), v);
        }
    }
    // Left edge by the half-turn rotation of the right edge: positions and the height
    // direction both reverse.
    for u in Sign::BOTH {
        for l in Sign::BOTH {
            let v = t.get((Side::Right, Direction::Up, l, u)).cloned().expect("base");
            t.insert((Side::Left, Direction::Down, u, l), v);
        }
    }
    for a in Sign::BOTH {
        for b in Sign::BOTH {
            let v = if alternative {
                t.get((Side::Right, Direction::Down, b, a)).cloned().expect("kink")
            } else {
                eval_resolving(
                    &[Slice::CrossPos(0), Slice::Cap(0)],
                    &[a, b],
                    &[],
                    (Direction::Down, Direction::Up),
                    &t,
                )
                .expect("left kink")
            };
            t.insert((Side::Left, Direction::Up, a, b), v);
        }
    }
    t
}

/// The trivial-arc values, derived from the base arc relation, the state exchange
/// relation, the Kauffman relation and the loop value.
pub fn derive_trivial_arc_table() -> &'static TrivialArcTable {
    static TABLE: OnceLock<TrivialArcTable> = OnceLock::new();
    TABLE.get_or_init(|| derive_table(false))
}

/// Same table, with the left edge obtained by rotating the right-edge kink instead of
/// resolving a kink on the left edge.
pub fn derive_trivial_arc_table_by_rotation() -> TrivialArcTable {
    derive_table(true)
}

/// Counit by full skein resolution. Exponential in the number of crossings.
pub fn evaluate_counit(w: &SliceWord) -> Result<HalfPowerLaurent> {
    w.profile()?;
    eval_resolving(&w.slices, &w.left, &w.right, (Direction::Up, Direction::Up), derive_trivial_arc_table())
}

pub fn charge(w: &SliceWord) -> (i64, i64) {
    (
        w.left.iter().map(|s| s.value()).sum(),
        w.right.iter().map(|s| s.value()).sum(),
    )
}

fn bit(s: Sign) -> usize {
    usize::from(s == Sign::Plus)
}

struct LocalTensors {
    cross_pos: [[HalfPowerLaurent; 4]; 4],
    cross_neg: [[HalfPowerLaurent; 4]; 4],
    cup: [HalfPowerLaurent; 4],
    cap: [HalfPowerLaurent; 4],
}

fn pair_states(k: usize) -> [Sign; 2] {
    let s = |b: usize| if b == 1 { Sign::Plus } else { Sign::Minus };
    [s(k >> 1), s(k & 1)]
}

fn local_tensors() -> &'static LocalTensors {
    static T: OnceLock<LocalTensors> = OnceLock::new();
    T.get_or_init(|| {
        let ev = |slices: Vec<Slice>, l: Vec<Sign>, r: Vec<Sign>| {
            evaluate_counit(&SliceWord { slices, left: l, right: r }).expect("local slice")
        };
        let cross = |c: Slice| {
            std::array::from_fn(|i| std::array::from_fn(|j| ev(vec![c], pair_states(i).to_vec(), pair_states(j).to_vec())))
        };
        LocalTensors {
            cross_pos: cross(Slice::CrossPos(0)),
            cross_neg: cross(Slice::CrossNeg(0)),
            cup: std::array::from_fn(|j| ev(vec![Slice::Cup(0)], vec![], pair_states(j).to_vec())),
            cap: std::array::from_fn(|i| ev(vec![Slice::Cap(0)], pair_states(i).to_vec(), vec![])),
        }
    })
}

/// Counit values for every right state vector, given the left states, by composing
/// local tensors slice by slice.
pub fn transfer_row(slices: &[Slice], left: &[Sign]) -> Result<BTreeMap<Vec<Sign>, HalfPowerLaurent>> {
    profile_from(left.len(), slices).ok_or_else(|| Error::InvalidWord("slice arities do not compose".into()))?;
    let t = local_tensors();
    let mut cur: BTreeMap<Vec<Sign>, HalfPowerLaurent> = BTreeMap::new();
    cur.insert(left.to_vec(), HalfPowerLaurent::one());
    for s in slices {
        let mut next: BTreeMap<Vec<Sign>, HalfPowerLaurent> = BTreeMap::new();
        let mut push = |k: Vec<Sign>, v: HalfPowerLaurent| {
            if !v.is_zero() {
                let slot = next.entry(k.clone()).or_default();
                *slot += &v;
                if slot.is_zero() {
                    next.remove(&k);
                }
            }
        };
        for (st, c) in &cur {
            match *s {
                Slice::Cup(i) => {
                    for (j, v) in t.cup.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let mut k = st.clone();
                        k.splice(i..i, pair_states(j));
                        push(k, c * v);
                    }
                }
                Slice::Cap(i) => {
                    let v = &t.cap[2 * bit(st[i]) + bit(st[i + 1])];
                    if !v.is_zero() {
                        let mut k = st.clone();
                        k.drain(i..i + 2);
                        push(k, c * v);
                    }
                }
                Slice::CrossPos(i) | Slice::CrossNeg(i) => {
                    let m = if matches!(s, Slice::CrossPos(_)) { &t.cross_pos } else { &t.cross_neg };
                    let row = &m[2 * bit(st[i]) + bit(st[i + 1])];
                    for (j, v) in row.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let mut k = st.clone();
                        let [a, b] = pair_states(j);
                        k[i] = a;
                        k[i + 1] = b;
                        push(k, c * v);
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Counit through the transfer-matrix factorization; agrees with [`evaluate_counit`].
pub fn evaluate_counit_transfer(w: &SliceWord) -> Result<HalfPowerLaurent> {
    w.profile()?;
    Ok(transfer_row(&w.slices, &w.left)?.remove(&w.right).unwrap_or_default())
}

/// Crossings that redraw parallel strands so that positions follow heights on both edges.
///
/// Strand `i` sits at position `i` in the middle of the bigon; `left_rank[i]` and
/// `right_rank[i]` are its height ranks on the two edges. At each edge the strand with the
/// greater height there passes over. Left states of the resulting word are listed by left
/// rank, right states by right rank.
pub fn height_braid(left_rank: &[usize], right_rank: &[usize]) -> Vec<Slice> {
    let n = left_rank.len();
    let mut slices = Vec::new();
    let mut seq: Vec<usize> = (0..n).collect();
    seq.sort_by_key(|s| left_rank[*s]);
    let mut bubble = |seq: &mut Vec<usize>, key: &dyn Fn(usize) -> usize, over: &dyn Fn(usize) -> usize| loop {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1) {
            if key(seq[i]) > key(seq[i + 1]) {
                let pos = over(seq[i]) > over(seq[i + 1]);
                slices.push(if pos { Slice::CrossPos(i) } else { Slice::CrossNeg(i) });
                seq.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    };
    bubble(&mut seq, &|s| s, &|s| left_rank[s]);
    bubble(&mut seq, &|s| right_rank[s], &|s| right_rank[s]);
    slices
}

/// Random legal word with at most `max_strands` strands and `len` slices.
pub fn random_word(rng: &mut impl Rng, max_strands: usize, len: usize) -> SliceWord {
    let n0 = rng.gen_range(0..=max_strands);
    let mut n = n0;
    let mut slices = Vec::with_capacity(len);
    for _ in 0..len {
        let mut options: Vec<u8> = Vec::new();
        if n + 2 <= max_strands {
            options.push(0);
        }
        if n >= 2 {
            options.extend([1, 2, 2, 3, 3]);
        }
        if options.is_empty() {
            break;
        }
        match options[rng.gen_range(0..options.len())] {
            0 => {
                slices.push(Slice::Cup(rng.gen_range(0..=n)));
                n += 2;
            }
            1 => {
                slices.push(Slice::Cap(rng.gen_range(0..n - 1)));
                n -= 2;
            }
            2 => slices.push(Slice::CrossPos(rng.gen_range(0..n - 1))),
            _ => slices.push(Slice::CrossNeg(rng.gen_range(0..n - 1))),
        }
    }
    let mut st = |k: usize| (0..k).map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect();
    let left = st(n0);
    let right = st(n);
    SliceWord { slices, left, right }
}

/// Insert a cancelling pair of crossings at a random legal place, if any exists.
pub fn insert_r2(rng: &mut impl Rng, w: &SliceWord) -> Option<SliceWord> {
    let profile = w.profile().ok()?;
    let spots: Vec<usize> = (0..profile.len()).filter(|k| profile[*k] >= 2).collect();
    if spots.is_empty() {
        return None;
    }
    let k = spots[rng.gen_range(0..spots.len())];
    let i = rng.gen_range(0..profile[k] - 1);
    let mut slices = w.slices.clone();
    let (a, b) = if rng.gen_bool(0.5) {
        (Slice::CrossPos(i), Slice::CrossNeg(i))
    } else {
        (Slice::CrossNeg(i), Slice::CrossPos(i))
    };
    slices.splice(k..k, [a, b]);
    Some(SliceWord { slices, left: w.left.clone(), right: w.right.clone() })
}

/// Both sides of the counit lift on a stack of corner arcs in a triangle with edges
/// `a, b, c` counterclockwise, cutting the corner between `b` and `c`. Arcs are listed
/// bottom to top as `(state on c, state on b)`.
///
/// Returns `(eps_star(tr(x)), eps(x))`.
pub fn epsilon_star_check(stack: &[(Sign, Sign)]) -> (HalfPowerLaurent, HalfPowerLaurent) {
    // Triangle form on (a, b, c): Q(a,b) = Q(b,c) = Q(c,a) = -1.
    let form = |x: [i64; 3], y: [i64; 3]| -> i64 {
        let qm = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]];
        (0..3).map(|i| (0..3).map(|j| qm[i][j] * x[i] * y[j]).sum::<i64>()).sum()
    };
    let mut lhs = HalfPowerLaurent::one();
    let mut total = [0i64; 3];
    let mut doubled = 0i64;
    for (mu, nu) in stack.iter().rev() {
        if (*mu, *nu) == (Sign::Minus, Sign::Plus) {
            lhs = HalfPowerLaurent::zero();
        }
        let k = [0, nu.value(), mu.value()];
        // Arcs above `i` were multiplied first.
        doubled += form(total, k);
        for j in 0..3 {
            total[j] += k[j];
        }
    }
    if !lhs.is_zero() {
        lhs = if total[0] == 0 && total[1] == total[2] { q(doubled) } else { HalfPowerLaurent::zero() };
    }
    let word = SliceWord {
        slices: Vec::new(),
        left: stack.iter().map(|(mu, _)| *mu).collect(),
        right: stack.iter().map(|(_, nu)| *nu).collect(),
    };
    let rhs = evaluate_counit(&word).expect("through strands");
    (lhs, rhs)
}

/// Memoized transfer rows keyed by word and left states.
#[derive(Default)]
pub struct CounitCache {
    rows: HashMap<(Vec<Slice>, Vec<Sign>), BTreeMap<Vec<Sign>, HalfPowerLaurent>>,
}

impl CounitCache {
    pub fn value(&mut self, slices: &[Slice], left: &[Sign], right: &[Sign]) -> HalfPowerLaurent {
        let row = self
            .rows
            .entry((slices.to_vec(), left.to_vec()))
            .or_insert_with(|| transfer_row(slices, left).expect("legal braid"));
        row.get(right).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use Sign::{Minus, Plus};

    fn w(s: &str) -> SliceWord {
        SliceWord::parse(s).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(evaluate_counit(&w("id | L:+ R:+")).unwrap(), HalfPowerLaurent::one());
        assert!(evaluate_counit(&w("id | L:+ R:-")).unwrap().is_zero());
        assert_eq!(evaluate_counit(&w("id | L:- R:-")).unwrap(), HalfPowerLaurent::one());
    }

    #[test]
    fn loop_value() {
        let v = evaluate_counit(&w("cup0.cap0 | L: R:")).unwrap();
        assert_eq!(v, HalfPowerLaurent::loop_value());
    }

    #[test]
    fn table_values() {
        let t = derive_trivial_arc_table();
        let r = |u, l| t.get((Side::Right, Direction::Up, u, l)).unwrap().clone();
        assert_eq!(r(Plus, Minus), q(-1));
        assert!(r(Plus, Plus).is_zero());
        assert!(r(Minus, Minus).is_zero());
        // Oracle: q^2 q^{-1/2} + q^{-1/2}(-q^2 - q^{-2}).
        let oracle = HalfPowerLaurent::from_terms([(3, 1), (3, -1), (-5, -1)]);
        assert_eq!(r(Minus, Plus), oracle);
        assert_eq!(r(Minus, Plus), HalfPowerLaurent::monomial(-1, -5));
        // Kink factor -q^3 on the reversed right edge and on the left edge.
        for (u, l) in [(Plus, Minus), (Minus, Plus)] {
            let down = t.get((Side::Right, Direction::Down, u, l)).unwrap();
            assert_eq!(down, &(&HalfPowerLaurent::monomial(-1, 6) * &r(l, u)));
            let left_up = t.get((Side::Left, Direction::Up, u, l)).unwrap();
            assert_eq!(left_up, &(&HalfPowerLaurent::monomial(-1, 6) * &r(u, l)));
        }
    }

    #[test]
    fn table_consistency() {
        assert_eq!(&derive_trivial_arc_table_by_rotation(), derive_trivial_arc_table());
    }

    #[test]
    fn state_exchange_holds() {
        // Two through strands: (upper -, lower +) = q^2 (upper +, lower -) + q^{-1/2} (joined).
        for x in Sign::BOTH {
            for y in Sign::BOTH {
                let lhs = evaluate_counit(&SliceWord::new(vec![], vec![x, y], vec![Plus, Minus]).unwrap()).unwrap();
                let swapped = evaluate_counit(&SliceWord::new(vec![], vec![x, y], vec![Minus, Plus]).unwrap()).unwrap();
                let joined = evaluate_counit(&SliceWord::new(vec![Slice::Cap(0)], vec![x, y], vec![]).unwrap()).unwrap();
                let rhs = &(&q(4) * &swapped) + &(&q(-1) * &joined);
                assert_eq!(lhs, rhs, "left states {x}{y}");
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let s = "cup0.cross_pos1.cap2 | L:+- R:+-";
        assert_eq!(w(s).to_string(), s);
        assert!(SliceWord::parse("cap0 | L:+ R:").is_err());
        assert!(SliceWord::parse("bogus0 | L: R:").is_err());
        assert!(SliceWord::parse("id | L:+ R:").is_err());
    }

    #[test]
    fn transfer_matches_resolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let word = random_word(&mut rng, 5, 7);
            assert_eq!(
                evaluate_counit(&word).unwrap(),
                evaluate_counit_transfer(&word).unwrap(),
                "{word}"
            );
        }
    }

    #[test]
    fn positive_braids_are_q_powers() {
        let left = [2usize, 0, 1];
        let right = [0usize, 2, 1];
        let slices = height_braid(&left, &right);
        let word = SliceWord::new(slices, vec![Plus; 3], vec![Plus; 3]).unwrap();
        assert!(evaluate_counit(&word).unwrap().as_q_power().is_some());
    }

    #[test]
    fn epsilon_star_examples() {
        assert_eq!(epsilon_star_check(&[(Plus, Plus)]), (q(0), q(0)));
        let (a, b) = epsilon_star_check(&[(Plus, Minus)]);
        assert!(a.is_zero() && b.is_zero());
        assert_eq!(epsilon_star_check(&[(Plus, Plus), (Plus, Plus)]), (q(0), q(0)));
        let (a, b) = epsilon_star_check(&[(Minus, Minus), (Plus, Plus)]);
        assert_eq!(a, b);
    }
}
