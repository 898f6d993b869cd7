//! The discrete geometric category `dgcat_K(L)` by exhaustive search, and the
//! critical values `c_k` it produces through min-max over the families
//! `Gamma_k`.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{minmax_value, CellSet, MinMaxInstance, NamedMap};
use crate::collapse::{CollapseSearch, CollapseSequence};
use crate::complex::{Limits, Mask, SimplicialComplex};
use crate::error::{DmtError, Result};
use crate::flow::FlowOperator;
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

/// A collapsible subcomplex used in a cover, with its collapse to a vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverPiece {
    pub complex: SimplicialComplex,
    pub witness: CollapseSequence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryResult {
    /// `-1` for the empty subcomplex.
    pub dgcat: i64,
    /// `dgcat + 1` collapsible subcomplexes covering `collapsed`.
    pub cover: Vec<CoverPiece>,
    /// The subcomplex `L'` with `L ↘ L'` realising the minimum.
    pub collapsed: SimplicialComplex,
    pub collapse: CollapseSequence,
}

/// Exhaustive category computations on one complex. Holds the
/// inclusion-maximal collapsible subcomplexes of `K`, which suffice for
/// minimum covers.
pub struct CategorySolver {
    k: SimplicialComplex,
    maximal: Vec<(Mask, Vec<(usize, usize)>)>,
}

/// The predicate "collapsible in K": the subcomplex collapses to a vertex
/// within itself.
fn collapsible_in_k(search: &CollapseSearch<'_>, mask: Mask) -> Option<Vec<(usize, usize)>> {
    search.collapsible(mask)
}

impl CategorySolver {
    pub fn new(k: &SimplicialComplex, limits: &Limits) -> Result<Self> {
        let masks = k.subcomplex_masks(limits.enumeration)?;
        let search = CollapseSearch::new(k);
        let collapsible: Vec<(Mask, Vec<(usize, usize)>)> = masks
            .into_iter()
            .filter_map(|m| collapsible_in_k(&search, m).map(|w| (m, w)))
            .collect();
        let maximal = collapsible
            .iter()
            .filter(|(m, _)| !collapsible.iter().any(|(o, _)| o != m && o & m == *m))
            .cloned()
            .collect();
        Ok(CategorySolver { k: k.clone(), maximal })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    /// The inclusion-maximal collapsible subcomplexes of `K`.
    pub fn maximal_collapsible(&self) -> Vec<SimplicialComplex> {
        self.maximal
            .iter()
            .map(|(m, _)| self.k.subcomplex_from_mask(*m))
            .collect()
    }

    pub fn dgcat(&self, l: &SimplicialComplex) -> Result<CategoryResult> {
        if !l.is_subcomplex_of(&self.k) {
            return Err(DmtError::PreconditionViolated("L is not a subcomplex of K".into()));
        }
        let mask = self.k.mask_of(l.simplices())?;
        let search = CollapseSearch::new(&self.k);
        let (value, cover, target, steps) = self.dgcat_mask(&search, mask);
        Ok(CategoryResult {
            dgcat: value,
            cover: cover
                .into_iter()
                .map(|i| {
                    let (m, w) = &self.maximal[i];
                    CoverPiece {
                        complex: self.k.subcomplex_from_mask(*m),
                        witness: search.sequence(*m, w),
                    }
                })
                .collect(),
            collapsed: self.k.subcomplex_from_mask(target),
            collapse: search.sequence(mask, &steps),
        })
    }

    /// Minimum over the collapses `L'` of `L` of the cover number of `L'`,
    /// minus one.
    fn dgcat_mask(&self, search: &CollapseSearch<'_>, l: Mask) -> (i64, Vec<usize>, Mask, Vec<(usize, usize)>) {
        let mut best: Option<(Vec<usize>, Mask, Vec<(usize, usize)>)> = None;
        for (target, steps) in search.reachable(l) {
            let bound = best.as_ref().map_or(usize::MAX, |b| b.0.len());
            if let Some(cover) = self.min_cover(target, bound) {
                best = Some((cover, target, steps));
            }
        }
        let (cover, target, steps) = best.expect("some cover exists");
        (cover.len() as i64 - 1, cover, target, steps)
    }

    /// Smallest set of maximal collapsible subcomplexes covering `target`,
    /// if one strictly smaller than `bound` exists.
    fn min_cover(&self, target: Mask, bound: usize) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        let mut bound = bound;
        let mut chosen = Vec::new();
        self.cover_search(target, &mut chosen, &mut bound, &mut best);
        best
    }

    fn cover_search(&self, uncovered: Mask, chosen: &mut Vec<usize>, bound: &mut usize, best: &mut Option<Vec<usize>>) {
        if uncovered == 0 {
            if chosen.len() < *bound {
                *bound = chosen.len();
                *best = Some(chosen.clone());
            }
            return;
        }
        if chosen.len() + 1 >= *bound {
            return;
        }
        // branch on the uncovered cell with the fewest covering members
        let mut pick: Option<(usize, Vec<usize>)> = None;
        for cell in (0..self.k.len()).filter(|&c| uncovered >> c & 1 == 1) {
            let options: Vec<usize> = (0..self.maximal.len())
                .filter(|&i| self.maximal[i].0 >> cell & 1 == 1)
                .collect();
            if pick.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                pick = Some((cell, options));
            }
        }
        let (_, mut options) = pick.expect("an uncovered cell");
        options.sort_by_key(|&i| std::cmp::Reverse((self.maximal[i].0 & uncovered).count_ones()));
        for i in options {
            chosen.push(i);
            self.cover_search(uncovered & !self.maximal[i].0, chosen, bound, best);
            chosen.pop();
        }
    }
}

/// `dgcat_K(L)`: the least `m` such that some collapse `L'` of `L` is covered
/// by `m + 1` collapsible subcomplexes of `K`.
pub fn dgcat(k: &SimplicialComplex, l: &SimplicialComplex, limits: &Limits) -> Result<CategoryResult> {
    CategorySolver::new(k, limits)?.dgcat(l)
}

/// One min-max level `c_k` with the member of `Gamma_k` achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct LsLevel {
    pub k: usize,
    pub value: f64,
    pub cell: Simplex,
    pub witness: SimplicialComplex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsResult {
    pub dgcat: i64,
    pub levels: Vec<LsLevel>,
    pub critical_cells: usize,
}

impl LsResult {
    /// `dgcat(K) + 1 <= number of critical cells`.
    pub fn bound_holds(&self) -> bool {
        self.dgcat < self.critical_cells as i64
    }
}

/// The families `Gamma_k` for one injective Morse function.
pub struct LsFamilies {
    f: MorseFunction,
    solver: CategorySolver,
    /// per distinct value `a`: `dgcat_K(K^a)` and the collapses of `K^a`
    levels: Vec<(f64, i64, Vec<Mask>)>,
}

impl LsFamilies {
    pub fn new(f: &MorseFunction, limits: &Limits) -> Result<Self> {
        if !f.is_injective() {
            return Err(DmtError::PreconditionViolated(
                "category levels need an injective function".into(),
            ));
        }
        let k = f.complex();
        let solver = CategorySolver::new(k, limits)?;
        let search = CollapseSearch::new(k);
        let mut levels = Vec::new();
        for a in f.distinct_values() {
            let mask = (0..k.len())
                .filter(|&i| f.value_at(i) <= a)
                .fold(0 as Mask, |m, i| m | 1 << i);
            let closed = closure_mask(k, mask);
            let (d, ..) = solver.dgcat_mask(&search, closed);
            let reachable = search.reachable(closed).into_iter().map(|(m, _)| m).collect();
            levels.push((a, d, reachable));
        }
        Ok(LsFamilies {
            f: f.clone(),
            solver,
            levels,
        })
    }

    pub fn dgcat(&self) -> i64 {
        self.levels.last().map_or(-1, |l| l.1)
    }

    /// `Gamma_k = { L : K^a ↘ L for some a with dgcat_K(K^a) >= k - 1 }`.
    pub fn gamma(&self, k: usize) -> Vec<CellSet> {
        let masks: BTreeSet<Mask> = self
            .levels
            .iter()
            .filter(|l| l.1 >= k as i64 - 1)
            .flat_map(|l| l.2.iter().copied())
            .collect();
        let cx = self.solver.complex();
        masks
            .into_iter()
            .map(|m| {
                (0..cx.len())
                    .filter(|&i| m >> i & 1 == 1)
                    .map(|i| cx.simplex(i).clone())
                    .collect()
            })
            .collect()
    }

    /// The min-max instance `({Phi_bar}, Gamma_k)`.
    pub fn instance(&self, k: usize, flow: Arc<FlowOperator>) -> MinMaxInstance {
        MinMaxInstance::new(self.f.clone(), vec![NamedMap::phi_bar(flow)], self.gamma(k))
    }

    pub fn solve(&self) -> Result<LsResult> {
        let flow = Arc::new(FlowOperator::new(&self.f)?);
        let top = self.dgcat();
        let mut levels = Vec::new();
        for k in 1..=(top + 1) as usize {
            let mv = minmax_value(&self.instance(k, Arc::clone(&flow)))?;
            levels.push(LsLevel {
                k,
                value: mv.value,
                cell: mv.cell,
                witness: SimplicialComplex::closure(mv.witness),
            });
        }
        Ok(LsResult {
            dgcat: top,
            levels,
            critical_cells: self.f.critical_indices().len(),
        })
    }
}

fn closure_mask(k: &SimplicialComplex, mask: Mask) -> Mask {
    let mut out = mask;
    for i in (0..k.len()).rev() {
        if out >> i & 1 == 1 {
            for &j in k.faces_of(i) {
                out |= 1 << j;
            }
        }
    }
    out
}

/// `c_k` for `k = 1 ..= dgcat(K) + 1`, each checked to be a critical value.
pub fn ls_minmax(f: &MorseFunction, limits: &Limits) -> Result<LsResult> {
    LsFamilies::new(f, limits)?.solve()
}

/// Whether `dgcat(K) + 1` is at most the number of critical cells of `f`.
pub fn ls_bound_check(f: &MorseFunction, limits: &Limits) -> Result<bool> {
    let solver = CategorySolver::new(f.complex(), limits)?;
    let d = solver.dgcat(f.complex())?.dgcat;
    Ok(d < f.critical_indices().len() as i64)
}
