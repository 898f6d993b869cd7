//! Sublevel complexes, elementary collapses and the collapse-based checks of
//! the two main theorems of discrete Morse theory, plus basins of minima.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::complex::{Limits, Mask, SimplicialComplex};
use crate::error::{DmtError, Result};
use crate::morse::{GradientField, MorseFunction};
use crate::simplex::Simplex;

/// `L^a = { s : f(s) <= a }` together with its closure `K^a`.
#[derive(Debug, Clone)]
pub struct FiltrationLevel {
    pub threshold: f64,
    pub sublevel: BTreeSet<Simplex>,
    pub complex: SimplicialComplex,
}

pub fn level_subcomplex(f: &MorseFunction, a: f64) -> FiltrationLevel {
    let sublevel: BTreeSet<Simplex> = f
        .complex()
        .simplices()
        .iter()
        .zip(f.values())
        .filter(|(_, &v)| v <= a)
        .map(|(s, _)| s.clone())
        .collect();
    let complex = SimplicialComplex::closure(sublevel.iter().cloned());
    FiltrationLevel {
        threshold: a,
        sublevel,
        complex,
    }
}

/// A sequence of elementary collapses with its endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseSequence {
    start: SimplicialComplex,
    end: SimplicialComplex,
    steps: Vec<(Simplex, Simplex)>,
}

impl CollapseSequence {
    pub fn start(&self) -> &SimplicialComplex {
        &self.start
    }

    pub fn end(&self) -> &SimplicialComplex {
        &self.end
    }

    /// `(free face, coface)` pairs in removal order.
    pub fn steps(&self) -> &[(Simplex, Simplex)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-executes every step from the start complex, checking the free-face
    /// condition each time, and confirms the recorded end complex.
    pub fn replay(&self) -> Result<SimplicialComplex> {
        let mut current = self.start.clone();
        for (face, coface) in &self.steps {
            current = elementary_collapse(&current, face, coface)?;
        }
        if current != self.end {
            return Err(DmtError::ProofFailure(
                "replayed collapse does not reach the recorded end complex".into(),
            ));
        }
        Ok(current)
    }
}

/// Removes the free face `face` together with its unique coface `coface`.
pub fn elementary_collapse(
    k: &SimplicialComplex,
    face: &Simplex,
    coface: &Simplex,
) -> Result<SimplicialComplex> {
    let not_free = || DmtError::NotFreeFace {
        face: face.clone(),
        coface: coface.clone(),
    };
    let (i, j) = match (k.index_of(face), k.index_of(coface)) {
        (Some(i), Some(j)) => (i, j),
        _ => return Err(not_free()),
    };
    if k.cofaces_of(i) != [j] {
        return Err(not_free());
    }
    Ok(SimplicialComplex::from_closed_set(
        k.simplices()
            .iter()
            .filter(|s| *s != face && *s != coface)
            .cloned()
            .collect(),
    ))
}

/// Removes the given pairs in order from `start`, failing with `ProofFailure`
/// if some pair is not free when its turn comes.
pub(crate) fn collapse_in_order(
    start: &SimplicialComplex,
    pairs: Vec<(usize, usize)>,
) -> Result<CollapseSequence> {
    let mut alive = vec![true; start.len()];
    let mut steps = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let live_cofaces: Vec<usize> = start
            .cofaces_of(i)
            .iter()
            .copied()
            .filter(|&c| alive[c])
            .collect();
        if !alive[i] || !alive[j] || live_cofaces != [j] {
            return Err(DmtError::ProofFailure(format!(
                "{} is not a free face of {} at step {}",
                start.simplex(i),
                start.simplex(j),
                steps.len()
            )));
        }
        alive[i] = false;
        alive[j] = false;
        steps.push((start.simplex(i).clone(), start.simplex(j).clone()));
    }
    let end = SimplicialComplex::from_closed_set(
        (0..start.len())
            .filter(|&i| alive[i])
            .map(|i| start.simplex(i).clone())
            .collect(),
    );
    Ok(CollapseSequence {
        start: start.clone(),
        end,
        steps,
    })
}

/// Exhaustive collapse search over bitmask states of a fixed complex.
pub(crate) struct CollapseSearch<'a> {
    k: &'a SimplicialComplex,
    priority: Option<Vec<f64>>,
}

impl<'a> CollapseSearch<'a> {
    pub(crate) fn new(k: &'a SimplicialComplex) -> Self {
        CollapseSearch { k, priority: None }
    }

    /// Try pairs with larger `f` first.
    pub(crate) fn guided_by(k: &'a SimplicialComplex, f: &MorseFunction) -> Self {
        let priority = k
            .simplices()
            .iter()
            .map(|s| f.value(s).unwrap_or(f64::NEG_INFINITY))
            .collect();
        CollapseSearch {
            k,
            priority: Some(priority),
        }
    }

    /// Free pairs of the subcomplex `mask`, avoiding the cells in `keep`.
    pub(crate) fn free_pairs(&self, mask: Mask, keep: Mask) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in (0..self.k.len()).filter(|&i| mask >> i & 1 == 1 && keep >> i & 1 == 0) {
            let mut live = self.k.cofaces_of(i).iter().filter(|&&c| mask >> c & 1 == 1);
            if let (Some(&j), None) = (live.next(), live.next()) {
                if keep >> j & 1 == 0 {
                    pairs.push((i, j));
                }
            }
        }
        match &self.priority {
            Some(p) => pairs.sort_by(|a, b| {
                let ka = p[a.0].max(p[a.1]);
                let kb = p[b.0].max(p[b.1]);
                kb.total_cmp(&ka).then(b.cmp(a))
            }),
            None => pairs.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0))),
        }
        pairs
    }

    /// Depth-first search with memoised dead ends for a collapse sequence
    /// from `from` to a state accepted by `done`, never removing cells of `keep`.
    pub(crate) fn find(
        &self,
        from: Mask,
        keep: Mask,
        done: &dyn Fn(Mask) -> bool,
    ) -> Option<(Mask, Vec<(usize, usize)>)> {
        let mut dead = HashSet::new();
        let mut steps = Vec::new();
        self.dfs(from, keep, done, &mut dead, &mut steps)
            .map(|end| (end, steps))
    }

    fn dfs(
        &self,
        state: Mask,
        keep: Mask,
        done: &dyn Fn(Mask) -> bool,
        dead: &mut HashSet<Mask>,
        steps: &mut Vec<(usize, usize)>,
    ) -> Option<Mask> {
        if done(state) {
            return Some(state);
        }
        if dead.contains(&state) {
            return None;
        }
        for (i, j) in self.free_pairs(state, keep) {
            steps.push((i, j));
            let next = state & !(1 << i) & !(1 << j);
            if let Some(end) = self.dfs(next, keep, done, dead, steps) {
                return Some(end);
            }
            steps.pop();
        }
        dead.insert(state);
        None
    }

    /// Every subcomplex reachable from `from` by elementary collapses,
    /// including `from`, with one witness sequence each, in discovery order.
    pub(crate) fn reachable(&self, from: Mask) -> Vec<(Mask, Vec<(usize, usize)>)> {
        let mut seen: HashMap<Mask, usize> = HashMap::new();
        let mut out: Vec<(Mask, Vec<(usize, usize)>)> = vec![(from, Vec::new())];
        seen.insert(from, 0);
        let mut next = 0;
        while next < out.len() {
            let (state, path) = out[next].clone();
            for (i, j) in self.free_pairs(state, 0) {
                let child = state & !(1 << i) & !(1 << j);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(child) {
                    e.insert(out.len());
                    let mut p = path.clone();
                    p.push((i, j));
                    out.push((child, p));
                }
            }
            next += 1;
        }
        out
    }

    /// Whether the subcomplex `mask` collapses to one of its vertices.
    pub(crate) fn collapsible(&self, mask: Mask) -> Option<Vec<(usize, usize)>> {
        if mask == 0 || self.euler(mask) != 1 {
            return None;
        }
        self.find(mask, 0, &|m| m.count_ones() == 1).map(|(_, s)| s)
    }

    fn euler(&self, mask: Mask) -> i64 {
        (0..self.k.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| if self.k.simplex(i).dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    pub(crate) fn sequence(&self, from: Mask, steps: &[(usize, usize)]) -> CollapseSequence {
        let mut end = from;
        for &(i, j) in steps {
            end &= !(1 << i) & !(1 << j);
        }
        CollapseSequence {
            start: self.k.subcomplex_from_mask(from),
            end: self.k.subcomplex_from_mask(end),
            steps: steps
                .iter()
                .map(|&(i, j)| (self.k.simplex(i).clone(), self.k.simplex(j).clone()))
                .collect(),
        }
    }
}

/// Exact decision whether `k` collapses onto its subcomplex `l`.
pub fn collapses_to(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    limits: &Limits,
) -> Result<CollapseSequence> {
    collapses_to_guided(k, l, None, limits)
}

/// As [`collapses_to`], trying pairs in decreasing order of `f` first when a
/// Morse function on `k` is supplied. The search is still exhaustive.
pub fn collapses_to_guided(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    f: Option<&MorseFunction>,
    limits: &Limits,
) -> Result<CollapseSequence> {
    k.check_mask_size(limits.search)?;
    if !l.is_subcomplex_of(k) {
        return Err(DmtError::PreconditionViolated(
            "target is not a subcomplex".into(),
        ));
    }
    let search = match f {
        Some(f) => CollapseSearch::guided_by(k, f),
        None => CollapseSearch::new(k),
    };
    let target = k.mask_of(l.simplices())?;
    search
        .find(k.full_mask(), target, &|m| m == target)
        .map(|(_, steps)| search.sequence(k.full_mask(), &steps))
        .ok_or(DmtError::NotCollapsible)
}

/// Whether `k` collapses to some vertex; returns a witness when it does.
pub fn collapse_to_vertex(k: &SimplicialComplex, limits: &Limits) -> Result<Option<CollapseSequence>> {
    k.check_mask_size(limits.search)?;
    let search = CollapseSearch::new(k);
    Ok(search
        .collapsible(k.full_mask())
        .map(|steps| search.sequence(k.full_mask(), &steps)))
}

/// Collapses `K^b` onto `K^a` when `(a, b]` holds no critical value, by
/// removing the Morse pairs of `K^b \ K^a` in decreasing order of `f`.
pub fn verify_dmt_a(f: &MorseFunction, a: f64, b: f64) -> Result<CollapseSequence> {
    if !(a < b) {
        return Err(DmtError::PreconditionViolated(format!(
            "window ({a}, {b}] is empty"
        )));
    }
    if let Some(&c) = f.critical_values().iter().find(|&&c| a < c && c <= b) {
        return Err(DmtError::CriticalValueInWindow(c));
    }
    let upper = level_subcomplex(f, b).complex;
    let lower = level_subcomplex(f, a).complex;
    let start_pairs = window_pairs(f, &upper, &lower)?;
    let seq = collapse_in_order(&upper, start_pairs)?;
    if seq.end() != &lower {
        return Err(DmtError::ProofFailure(
            "collapse of K^b did not end at K^a".into(),
        ));
    }
    Ok(seq)
}

/// The Morse pairs covering `outer \ inner`, as indices of `outer`, sorted by
/// decreasing value of their lower member (the larger of the two values).
pub(crate) fn window_pairs(
    f: &MorseFunction,
    outer: &SimplicialComplex,
    inner: &SimplicialComplex,
) -> Result<Vec<(usize, usize)>> {
    let grad = f.gradient_field()?;
    let k = f.complex();
    let mut pairs = Vec::new();
    for s in outer.simplices().iter().filter(|s| !inner.contains(s)) {
        let i = k.require(s)?;
        if let Some(j) = grad.up_partner(i) {
            let t = k.simplex(j);
            if !outer.contains(t) || inner.contains(t) {
                return Err(DmtError::ProofFailure(format!(
                    "partner {t} of {s} lies outside the difference"
                )));
            }
            pairs.push((i, j));
        } else if let Some(j) = grad.down_partner(i) {
            let t = k.simplex(j);
            if !outer.contains(t) || inner.contains(t) {
                return Err(DmtError::ProofFailure(format!(
                    "partner {t} of {s} lies outside the difference"
                )));
            }
        } else {
            return Err(DmtError::ProofFailure(format!(
                "critical simplex {s} lies in the difference"
            )));
        }
    }
    pairs.sort_by(|&(i1, j1), &(i2, j2)| {
        f.value_at(i2)
            .total_cmp(&f.value_at(i1))
            .then(f.value_at(j2).total_cmp(&f.value_at(j1)))
            .then(j2.cmp(&j1))
    });
    let local = |x: usize| outer.index_of(k.simplex(x)).expect("member of outer");
    Ok(pairs.into_iter().map(|(i, j)| (local(i), local(j))).collect())
}

/// How the homology changed when a critical cell was attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    /// `b_p` went up by one.
    Creates,
    /// `b_{p-1}` went down by one.
    Kills,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiDelta {
    pub before: Vec<usize>,
    pub after: Vec<usize>,
    pub degree: usize,
    pub attachment: Attachment,
}

/// Checks the Betti-number signature of attaching the critical cell `sigma`
/// of dimension `p` while passing the window `(a, b]`: either `b_p` grows by
/// one or `b_{p-1}` drops by one, and nothing else changes.
pub fn verify_dmt_b(f: &MorseFunction, sigma: &Simplex, a: f64, b: f64) -> Result<BettiDelta> {
    let i = f.complex().require(sigma)?;
    if !f.is_critical_index(i) {
        return Err(DmtError::PreconditionViolated(format!("{sigma} is not critical")));
    }
    let value = f.value_at(i);
    if !(a < value && value <= b) {
        return Err(DmtError::PreconditionViolated(format!(
            "f({sigma}) = {value} is not in ({a}, {b}]"
        )));
    }
    let others = f
        .critical_indices()
        .into_iter()
        .filter(|&j| j != i && a < f.value_at(j) && f.value_at(j) <= b)
        .count();
    if others > 0 {
        return Err(DmtError::PreconditionViolated(format!(
            "{others} other critical simplices in ({a}, {b}]"
        )));
    }
    let mut before = level_subcomplex(f, a).complex.betti_numbers_mod2();
    let mut after = level_subcomplex(f, b).complex.betti_numbers_mod2();
    let len = before.len().max(after.len()).max(sigma.dim() + 1);
    before.resize(len, 0);
    after.resize(len, 0);
    let p = sigma.dim();
    let differs_only_at = |d: usize, delta: i64| {
        (0..len).all(|q| {
            let diff = after[q] as i64 - before[q] as i64;
            if q == d {
                diff == delta
            } else {
                diff == 0
            }
        })
    };
    let attachment = if differs_only_at(p, 1) {
        Attachment::Creates
    } else if p > 0 && differs_only_at(p - 1, -1) {
        Attachment::Kills
    } else {
        return Err(DmtError::SignatureMismatch(format!(
            "attaching {sigma}: Betti {before:?} -> {after:?}"
        )));
    };
    Ok(BettiDelta {
        before,
        after,
        degree: p,
        attachment,
    })
}

/// The gradient basin of a critical vertex together with its collapse to it.
#[derive(Debug, Clone)]
pub struct Basin {
    pub minimum: Simplex,
    pub cells: SimplicialComplex,
    pub witness: CollapseSequence,
}

impl Basin {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.cells.contains(&Simplex::vertex(v))
    }
}

/// Vertices whose descending V-path ends at `v`, with the edges they are
/// paired with. The result collapses onto `{v}`; the witness removes each
/// vertex before the vertex it flows into.
pub fn basin(field: &GradientField, v: &Simplex) -> Result<Basin> {
    let k = field.complex();
    let target = k.require(v)?;
    if v.dim() != 0 || !field.is_critical_index(target) {
        return Err(DmtError::NotACriticalVertex(v.clone()));
    }
    let flow_step = |u: usize| -> Option<usize> {
        field.up_partner(u).map(|e| {
            k.faces_of(e)
                .iter()
                .copied()
                .find(|&w| w != u)
                .expect("edge has two vertices")
        })
    };
    let mut members: Vec<(usize, usize)> = Vec::new(); // (depth, vertex index)
    for u in k.dim_range(0) {
        let mut depth = 0;
        let mut x = u;
        while let Some(next) = flow_step(x) {
            x = next;
            depth += 1;
        }
        if x == target {
            members.push((depth, u));
        }
    }
    let mut cells: BTreeSet<Simplex> = BTreeSet::new();
    for &(_, u) in &members {
        cells.insert(k.simplex(u).clone());
        if let Some(e) = field.up_partner(u) {
            cells.insert(k.simplex(e).clone());
        }
    }
    let cells = SimplicialComplex::from_closed_set(cells);
    members.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    let pairs = members
        .iter()
        .filter_map(|&(_, u)| field.up_partner(u).map(|e| (u, e)))
        .map(|(u, e)| {
            (
                cells.index_of(k.simplex(u)).unwrap(),
                cells.index_of(k.simplex(e)).unwrap(),
            )
        })
        .collect();
    let witness = collapse_in_order(&cells, pairs)?;
    if witness.end().simplices() != [v.clone()] {
        return Err(DmtError::ProofFailure("basin did not collapse to its minimum".into()));
    }
    Ok(Basin {
        minimum: v.clone(),
        cells,
        witness,
    })
}

/// Brute force: all inclusion-maximal subcomplexes of `k` that contain `v`
/// and collapse onto `{v}`.
pub fn maximal_collapsing_subcomplexes(
    k: &SimplicialComplex,
    v: &Simplex,
    limits: &Limits,
) -> Result<Vec<SimplicialComplex>> {
    let vi = k.require(v)?;
    if v.dim() != 0 {
        return Err(DmtError::PreconditionViolated(format!("{v} is not a vertex")));
    }
    let masks = k.subcomplex_masks(limits.enumeration)?;
    let search = CollapseSearch::new(k);
    let point: Mask = 1 << vi;
    let good: Vec<Mask> = masks
        .into_iter()
        .filter(|&m| m & point != 0)
        .filter(|&m| search.find(m, point, &|s| s == point).is_some())
        .collect();
    Ok(good
        .iter()
        .filter(|&&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(|&m| k.subcomplex_from_mask(m))
        .collect())
}
