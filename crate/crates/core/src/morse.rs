//! Discrete Morse functions and their gradient vector fields.
//!
//! For a real function `f` on the simplices of `K`, the upper set of `a` is
//! `U(a) = { b > a, dim b = dim a + 1 : f(b) <= f(a) }` and the lower set is
//! `L(a) = { c < a, dim c = dim a - 1 : f(c) >= f(a) }`. `f` is a discrete
//! Morse function when both sets have at most one element everywhere. Cells
//! with both sets empty are critical; the others come in pairs `(s, t)` with
//! `f(t) <= f(s)`, and the set of those pairs is the gradient vector field.

use std::collections::{HashMap, VecDeque};
use std::ops::Deref;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{DmtError, Result, Violation};
use crate::simplex::Simplex;

/// A validated discrete Morse function. Values are stored aligned with the
/// simplex indices of the complex.
#[derive(Debug, Clone)]
pub struct MorseFunction {
    complex: Arc<SimplicialComplex>,
    values: Vec<f64>,
}

impl MorseFunction {
    /// Validates values given per simplex (the `validate` operation).
    pub fn validate(
        complex: impl Into<Arc<SimplicialComplex>>,
        values: &HashMap<Simplex, f64>,
    ) -> Result<Self> {
        let complex = complex.into();
        let aligned = complex
            .simplices()
            .iter()
            .map(|s| {
                values
                    .get(s)
                    .copied()
                    .ok_or_else(|| DmtError::MissingValue(s.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(complex, aligned)
    }

    /// Validates values aligned with `complex.simplices()`.
    pub fn new(complex: impl Into<Arc<SimplicialComplex>>, values: Vec<f64>) -> Result<Self> {
        let complex = complex.into();
        if values.len() != complex.len() {
            let missing = complex.simplices().get(values.len()).cloned();
            return Err(match missing {
                Some(s) => DmtError::MissingValue(s),
                None => DmtError::PreconditionViolated(format!(
                    "{} values for {} simplices",
                    values.len(),
                    complex.len()
                )),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DmtError::NonFiniteValue(complex.simplex(i).clone()));
        }
        let f = MorseFunction { complex, values };
        let mut violations = Vec::new();
        let mut mixed = None;
        for i in 0..f.complex.len() {
            let (u, l) = (f.upper_indices(i).count(), f.lower_indices(i).count());
            if u > 1 || l > 1 {
                violations.push(Violation {
                    simplex: f.complex.simplex(i).clone(),
                    upper: u,
                    lower: l,
                });
            } else if u == 1 && l == 1 {
                mixed.get_or_insert(i);
            }
        }
        if !violations.is_empty() {
            return Err(DmtError::MorseConditionViolated(violations));
        }
        // U and L cannot both be nonempty once the conditions hold.
        if let Some(i) = mixed {
            return Err(DmtError::ProofFailure(format!(
                "both U and L nonempty at {}",
                f.complex.simplex(i)
            )));
        }
        Ok(f)
    }

    /// Convenience constructor from `(simplex, value)` pairs on the face
    /// closure of the listed simplices.
    pub fn from_values(pairs: impl IntoIterator<Item = (Simplex, f64)>) -> Result<Self> {
        let map: HashMap<Simplex, f64> = pairs.into_iter().collect();
        let complex = SimplicialComplex::build(map.keys().cloned())?;
        Self::validate(complex, &map)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> Arc<SimplicialComplex> {
        Arc::clone(&self.complex)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn value(&self, s: &Simplex) -> Option<f64> {
        self.complex.index_of(s).map(|i| self.values[i])
    }

    pub(crate) fn upper_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.values[i];
        self.complex
            .cofaces_of(i)
            .iter()
            .copied()
            .filter(move |&j| self.values[j] <= v)
    }

    pub(crate) fn lower_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.values[i];
        self.complex
            .faces_of(i)
            .iter()
            .copied()
            .filter(move |&j| self.values[j] >= v)
    }

    pub fn upper_set(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        let i = self.complex.require(s)?;
        Ok(self
            .upper_indices(i)
            .map(|j| self.complex.simplex(j).clone())
            .collect())
    }

    pub fn lower_set(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        let i = self.complex.require(s)?;
        Ok(self
            .lower_indices(i)
            .map(|j| self.complex.simplex(j).clone())
            .collect())
    }

    pub fn is_critical_index(&self, i: usize) -> bool {
        self.upper_indices(i).next().is_none() && self.lower_indices(i).next().is_none()
    }

    pub fn critical_indices(&self) -> Vec<usize> {
        (0..self.complex.len())
            .filter(|&i| self.is_critical_index(i))
            .collect()
    }

    /// Critical simplices in simplex order.
    pub fn critical_cells(&self) -> Vec<Simplex> {
        self.critical_indices()
            .into_iter()
            .map(|i| self.complex.simplex(i).clone())
            .collect()
    }

    /// Values at critical simplices, ascending, duplicates kept.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .critical_indices()
            .into_iter()
            .map(|i| self.values[i])
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Distinct values of `f`, ascending.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn is_injective(&self) -> bool {
        self.distinct_values().len() == self.values.len()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values.iter().copied().max_by(f64::total_cmp)
    }

    pub fn min_value(&self) -> Option<f64> {
        self.values.iter().copied().min_by(f64::total_cmp)
    }

    /// Gradient vector field: the pairs `(s, t)` with `U(s) = {t}`.
    pub fn gradient_field(&self) -> Result<GradientField> {
        let n = self.complex.len();
        let mut up = vec![None; n];
        let mut down = vec![None; n];
        for (i, slot) in up.iter_mut().enumerate() {
            if let Some(j) = self.upper_indices(i).next() {
                *slot = Some(j);
                down[j] = Some(i);
            }
        }
        let field = VectorField {
            complex: self.complex_arc(),
            up,
            down,
        };
        if field.has_closed_path() {
            return Err(DmtError::AcyclicityBug);
        }
        Ok(GradientField(field))
    }

    /// Two Morse functions on the same complex are equivalent when every
    /// codimension-one face relation is strictly ordered the same way.
    pub fn is_equivalent_to(&self, other: &MorseFunction) -> Result<bool> {
        if self.complex.simplices() != other.complex.simplices() {
            return Err(DmtError::ComplexMismatch);
        }
        Ok((0..self.complex.len()).all(|i| {
            self.complex.cofaces_of(i).iter().all(|&j| {
                (self.values[i] < self.values[j]) == (other.values[i] < other.values[j])
            })
        }))
    }

    /// An injective Morse function equivalent to `self` with the same
    /// gradient field. Values of cells whose value is not shared are kept
    /// unchanged; tied cells are spread inside the gap to the next value, in
    /// an order compatible with the gradient field.
    pub fn make_injective(&self) -> MorseFunction {
        if self.is_injective() {
            return self.clone();
        }
        let field = self
            .gradient_field()
            .expect("a validated Morse function has an acyclic gradient");
        let vals = &self.values;
        let order = field
            .linear_extension(|ready| {
                (0..ready.len())
                    .min_by(|&a, &b| {
                        vals[ready[a]]
                            .total_cmp(&vals[ready[b]])
                            .then(ready[a].cmp(&ready[b]))
                    })
                    .unwrap()
            })
            .expect("acyclic");
        let mut out = vals.clone();
        let mut start = 0;
        while start < order.len() {
            let v = vals[order[start]];
            let end = (start..order.len())
                .find(|&k| vals[order[k]] != v)
                .unwrap_or(order.len());
            let size = end - start;
            if size > 1 {
                let gap = if end < order.len() {
                    vals[order[end]] - v
                } else {
                    1.0
                };
                let step = gap / (2 * size) as f64;
                for (k, &cell) in order[start..end].iter().enumerate() {
                    out[cell] = v + k as f64 * step;
                }
            }
            start = end;
        }
        MorseFunction {
            complex: self.complex_arc(),
            values: out,
        }
    }

    /// A random injective Morse function, deterministic in `seed`.
    ///
    /// A random acyclic matching is grown first (candidate pairs in shuffled
    /// order, some skipped at random, any pair closing a V-cycle rejected);
    /// values are then the positions in a random linear extension of the
    /// order the matching imposes.
    pub fn random(complex: impl Into<Arc<SimplicialComplex>>, seed: u64) -> MorseFunction {
        let complex = complex.into();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = complex.len();
        let mut candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| complex.cofaces_of(i).iter().map(move |&j| (i, j)))
            .collect();
        candidates.shuffle(&mut rng);
        let skip: f64 = rng.gen_range(0.0..0.6);
        let mut field = VectorField {
            complex: Arc::clone(&complex),
            up: vec![None; n],
            down: vec![None; n],
        };
        for (s, t) in candidates {
            if field.up[s].is_some()
                || field.down[s].is_some()
                || field.up[t].is_some()
                || field.down[t].is_some()
                || rng.gen_bool(skip)
            {
                continue;
            }
            field.up[s] = Some(t);
            field.down[t] = Some(s);
            if field.reaches(t, s) {
                field.up[s] = None;
                field.down[t] = None;
            }
        }
        let order = field
            .linear_extension(|ready| rng.gen_range(0..ready.len()))
            .expect("matching kept acyclic");
        let mut values = vec![0.0; n];
        for (rank, &cell) in order.iter().enumerate() {
            values[cell] = rank as f64;
        }
        MorseFunction { complex, values }
    }
}

/// Free-function form of [`MorseFunction::is_equivalent_to`].
pub fn are_equivalent(f: &MorseFunction, g: &MorseFunction) -> Result<bool> {
    f.is_equivalent_to(g)
}

/// A discrete vector field: a matching of codimension-one face pairs, not
/// necessarily acyclic.
#[derive(Debug, Clone)]
pub struct VectorField {
    complex: Arc<SimplicialComplex>,
    up: Vec<Option<usize>>,
    down: Vec<Option<usize>>,
}

impl VectorField {
    /// Builds a matching from explicit `(face, coface)` pairs.
    pub fn from_pairs(
        complex: impl Into<Arc<SimplicialComplex>>,
        pairs: &[(Simplex, Simplex)],
    ) -> Result<Self> {
        let complex = complex.into();
        let n = complex.len();
        let mut up = vec![None; n];
        let mut down = vec![None; n];
        for (s, t) in pairs {
            let (i, j) = (complex.require(s)?, complex.require(t)?);
            if !complex.cofaces_of(i).contains(&j) {
                return Err(DmtError::InvalidMatching(format!(
                    "{s} is not a codimension-one face of {t}"
                )));
            }
            if up[i].is_some() || down[i].is_some() || up[j].is_some() || down[j].is_some() {
                return Err(DmtError::InvalidMatching(format!(
                    "pair ({s}, {t}) reuses a matched simplex"
                )));
            }
            up[i] = Some(j);
            down[j] = Some(i);
        }
        Ok(VectorField { complex, up, down })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> Arc<SimplicialComplex> {
        Arc::clone(&self.complex)
    }

    /// Coface matched with simplex `i`, when `i` is the lower member of a pair.
    pub fn up_partner(&self, i: usize) -> Option<usize> {
        self.up[i]
    }

    /// Face matched with simplex `i`, when `i` is the upper member of a pair.
    pub fn down_partner(&self, i: usize) -> Option<usize> {
        self.down[i]
    }

    pub fn is_critical_index(&self, i: usize) -> bool {
        self.up[i].is_none() && self.down[i].is_none()
    }

    pub fn pair_indices(&self) -> Vec<(usize, usize)> {
        self.up
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (i, t)))
            .collect()
    }

    /// Pairs as `(lower, upper)` simplices, sorted by the lower member.
    pub fn pairs(&self) -> Vec<(Simplex, Simplex)> {
        self.pair_indices()
            .into_iter()
            .map(|(i, j)| (self.complex.simplex(i).clone(), self.complex.simplex(j).clone()))
            .collect()
    }

    pub fn critical_cells(&self) -> Vec<Simplex> {
        (0..self.complex.len())
            .filter(|&i| self.is_critical_index(i))
            .map(|i| self.complex.simplex(i).clone())
            .collect()
    }

    /// Successors of `x` in the Hasse digraph with matched edges reversed:
    /// faces point down, except that the lower member of a pair points up.
    fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let down = self
            .complex
            .faces_of(x)
            .iter()
            .copied()
            .filter(move |&y| self.up[y] != Some(x));
        down.chain(self.up[x])
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.complex.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            if x == to {
                return true;
            }
            for y in self.successors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        false
    }

    /// Order of the simplices in which every unmatched face comes before its
    /// coface and every matched coface before its face, i.e. an order along
    /// which a compatible Morse function increases. `choose` picks the next
    /// simplex among those that are ready. `None` when the matching has a
    /// closed V-path.
    pub(crate) fn linear_extension(
        &self,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Option<Vec<usize>> {
        let n = self.complex.len();
        // Kahn's algorithm on the reversed modified Hasse digraph.
        let mut pending = vec![0usize; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            for y in self.successors(x) {
                pending[x] += 1;
                preds[y].push(x);
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&x| pending[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while !ready.is_empty() {
            let k = choose(&ready);
            let x = ready.swap_remove(k);
            order.push(x);
            for &p in &preds[x] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.push(p);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Cycle search on the modified Hasse digraph.
    pub fn has_closed_path(&self) -> bool {
        self.linear_extension(|_| 0).is_none()
    }

    /// All maximal V-paths starting at `start`, which must have dimension `p`.
    pub fn v_paths_from(&self, start: &Simplex, p: usize) -> Result<Vec<VPath>> {
        if start.dim() != p {
            return Err(DmtError::PreconditionViolated(format!(
                "{start} has dimension {}, not {p}",
                start.dim()
            )));
        }
        let i = self.complex.require(start)?;
        let mut out = Vec::new();
        let mut trail = vec![i];
        self.extend_v_paths(&mut trail, &mut out);
        Ok(out)
    }

    fn extend_v_paths(&self, trail: &mut Vec<usize>, out: &mut Vec<VPath>) {
        let last = *trail.last().unwrap();
        let closed = trail.len() > 1 && trail[..trail.len() - 1].contains(&last);
        let Some(beta) = self.up[last].filter(|_| !closed) else {
            out.push(VPath {
                cells: trail.iter().map(|&k| self.complex.simplex(k).clone()).collect(),
            });
            return;
        };
        for &next in self.complex.faces_of(beta) {
            if next == last {
                continue;
            }
            trail.push(beta);
            trail.push(next);
            self.extend_v_paths(trail, out);
            trail.truncate(trail.len() - 2);
        }
    }
}

/// A vector field known to be acyclic.
#[derive(Debug, Clone)]
pub struct GradientField(VectorField);

impl GradientField {
    /// Accepts an arbitrary matching if it has no closed V-path.
    pub fn from_field(field: VectorField) -> Result<Self> {
        if field.has_closed_path() {
            return Err(DmtError::InvalidMatching("matching has a closed V-path".into()));
        }
        Ok(GradientField(field))
    }

    pub fn into_inner(self) -> VectorField {
        self.0
    }
}

impl Deref for GradientField {
    type Target = VectorField;

    fn deref(&self) -> &VectorField {
        &self.0
    }
}

/// An alternating sequence `a0 < b0 > a1 < b1 > ... > a(r+1)` through
/// matched pairs `(a_i, b_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPath {
    cells: Vec<Simplex>,
}

impl VPath {
    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn start(&self) -> &Simplex {
        &self.cells[0]
    }

    pub fn end(&self) -> &Simplex {
        self.cells.last().unwrap()
    }

    /// The `p`-dimensional members `a_0, a_1, ...`.
    pub fn lower_cells(&self) -> impl Iterator<Item = &Simplex> {
        self.cells.iter().step_by(2)
    }

    /// Number of matched pairs the path runs through.
    pub fn pair_count(&self) -> usize {
        self.cells.len() / 2
    }

    /// Nontrivial in the sense `r > 0`, i.e. at least two pairs.
    pub fn is_nontrivial(&self) -> bool {
        self.pair_count() >= 2
    }

    pub fn is_closed(&self) -> bool {
        self.cells.len() > 1 && self.start() == self.end()
    }
}
