//! Finite simplicial complexes with eagerly built incidence tables, the
//! mod-2 homology oracle and subcomplex enumeration.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::error::{DmtError, Result};
use crate::simplex::Simplex;

/// Bitmask over the simplices of a complex, bit `i` standing for `simplices()[i]`.
pub(crate) type Mask = u128;

/// Largest complex the bitmask-based searches can address.
pub const MAX_MASK_CELLS: usize = 128;

/// Size bounds for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Bound on |K| for anything that enumerates subcomplexes.
    pub enumeration: usize,
    /// Bound on |K| for backtracking collapse searches.
    pub search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 14,
            search: 64,
        }
    }
}

impl Limits {
    pub fn with_enumeration(bound: usize) -> Self {
        Limits {
            enumeration: bound,
            search: bound.max(Limits::default().search),
        }
    }
}

/// A finite, face-closed set of simplices.
///
/// Simplices are stored sorted by dimension and then lexicographically; the
/// position in that order is the simplex's index. Codimension-one faces and
/// cofaces are precomputed.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    by_dim: Vec<Range<usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            simplices: Vec::new(),
            index: HashMap::new(),
            faces: Vec::new(),
            cofaces: Vec::new(),
            by_dim: Vec::new(),
        }
    }

    /// Face closure of the given simplices. Returns `EmptyInput` for an empty list.
    pub fn build(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let k = Self::closure(simplices);
        if k.is_empty() {
            return Err(DmtError::EmptyInput);
        }
        Ok(k)
    }

    /// Like [`SimplicialComplex::build`] but starting from raw vertex lists.
    pub fn from_vertex_lists<I, V>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<usize>>,
    {
        let simplices = lists
            .into_iter()
            .map(|v| Simplex::new(v.into()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(simplices)
    }

    /// Face closure; the empty input gives the empty complex.
    pub fn closure(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all = BTreeSet::new();
        for s in simplices {
            if all.contains(&s) {
                continue;
            }
            all.extend(s.all_faces());
        }
        Self::from_closed_set(all)
    }

    /// Builds the complex from a set that is already face-closed.
    pub(crate) fn from_closed_set(all: BTreeSet<Simplex>) -> Self {
        let simplices: Vec<Simplex> = all.into_iter().collect();
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for (_, face) in s.boundary_faces() {
                let j = index[&face];
                faces[i].push(j);
                cofaces[j].push(i);
            }
        }
        for list in faces.iter_mut().chain(cofaces.iter_mut()) {
            list.sort_unstable();
        }
        let mut by_dim: Vec<Range<usize>> = Vec::new();
        for (i, s) in simplices.iter().enumerate() {
            let d = s.dim();
            while by_dim.len() <= d {
                by_dim.push(i..i);
            }
            by_dim[d].end = i + 1;
        }
        SimplicialComplex {
            simplices,
            index,
            faces,
            cofaces,
            by_dim,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub(crate) fn require(&self, s: &Simplex) -> Result<usize> {
        self.index_of(s)
            .ok_or_else(|| DmtError::SimplexNotInComplex(s.clone()))
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Indices of the codimension-one faces of simplex `i`.
    pub fn faces_of(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    /// Indices of the codimension-one cofaces of simplex `i`.
    pub fn cofaces_of(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    /// Index range of the `p`-simplices (empty when there are none).
    pub fn dim_range(&self, p: usize) -> Range<usize> {
        self.by_dim.get(p).cloned().unwrap_or(0..0)
    }

    pub fn simplices_of_dim(&self, p: usize) -> &[Simplex] {
        &self.simplices[self.dim_range(p)]
    }

    /// Number of simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|r| r.len()).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices_of_dim(0).iter().map(|s| s.vertices()[0])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Betti numbers over the two-element field, one entry per dimension
    /// `0..=dim K` (empty for the empty complex).
    pub fn betti_numbers_mod2(&self) -> Vec<usize> {
        let top = match self.dim() {
            Some(d) => d,
            None => return Vec::new(),
        };
        // rank of the boundary map C_p -> C_{p-1}, for p = 0..=top+1
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|p| if p == 0 { 0 } else { self.boundary_rank_mod2(p) })
            .collect();
        (0..=top)
            .map(|p| self.dim_range(p).len() - ranks[p] - ranks[p + 1])
            .collect()
    }

    fn boundary_rank_mod2(&self, p: usize) -> usize {
        let rows_range = self.dim_range(p);
        let cols = self.dim_range(p - 1);
        let words = cols.len().div_ceil(64);
        let rows: Vec<Vec<u64>> = rows_range
            .map(|i| {
                let mut row = vec![0u64; words];
                for &j in &self.faces[i] {
                    let c = j - cols.start;
                    row[c / 64] ^= 1 << (c % 64);
                }
                row
            })
            .collect();
        gf2_rank(rows)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    /// Number of connected components (the empty complex has none).
    pub fn component_count(&self) -> usize {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for &j in &self.faces[i] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Every subcomplex, including the empty one and `self`, in a fixed
    /// order (exclude-before-include over the sorted simplex list).
    pub fn subcomplexes(&self, bound: usize) -> Result<Vec<SimplicialComplex>> {
        Ok(self
            .subcomplex_masks(bound)?
            .into_iter()
            .map(|m| self.subcomplex_from_mask(m))
            .collect())
    }

    pub(crate) fn check_mask_size(&self, bound: usize) -> Result<()> {
        if self.len() > bound.min(MAX_MASK_CELLS) {
            return Err(DmtError::TooLargeForEnumeration {
                size: self.len(),
                bound: bound.min(MAX_MASK_CELLS),
            });
        }
        Ok(())
    }

    pub(crate) fn subcomplex_masks(&self, bound: usize) -> Result<Vec<Mask>> {
        self.check_mask_size(bound)?;
        let mut out = Vec::new();
        self.extend_subcomplexes(0, 0, &mut out);
        Ok(out)
    }

    fn extend_subcomplexes(&self, i: usize, mask: Mask, out: &mut Vec<Mask>) {
        if i == self.len() {
            out.push(mask);
            return;
        }
        self.extend_subcomplexes(i + 1, mask, out);
        // faces sort before their cofaces, so they have already been decided
        if self.faces[i].iter().all(|&j| mask >> j & 1 == 1) {
            self.extend_subcomplexes(i + 1, mask | 1 << i, out);
        }
    }

    pub(crate) fn full_mask(&self) -> Mask {
        if self.len() == MAX_MASK_CELLS {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    pub(crate) fn mask_of<'a>(&self, cells: impl IntoIterator<Item = &'a Simplex>) -> Result<Mask> {
        let mut m: Mask = 0;
        for s in cells {
            m |= 1 << self.require(s)?;
        }
        Ok(m)
    }

    pub(crate) fn subcomplex_from_mask(&self, mask: Mask) -> SimplicialComplex {
        SimplicialComplex::from_closed_set(
            (0..self.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.simplices[i].clone())
                .collect(),
        )
    }

    #[cfg(test)]
    pub(crate) fn is_closed_mask(&self, mask: Mask) -> bool {
        (0..self.len())
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| self.faces[i].iter().all(|&j| mask >> j & 1 == 1))
    }
}

/// Rank over GF(2) of the rows given as packed bit vectors.
fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for col in 0..words * 64 {
        let (w, b) = (col / 64, col % 64);
        let pivot = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1);
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(lists: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    #[test]
    fn closure_counts() {
        assert_eq!(cx(&[&[0, 1, 2]]).len(), 7);
        assert_eq!(cx(&[&[0]]).len(), 1);
        assert_eq!(cx(&[&[0, 1], &[1, 2]]).len(), 5);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            SimplicialComplex::build(Vec::new()).unwrap_err(),
            DmtError::EmptyInput
        );
        assert!(matches!(
            SimplicialComplex::from_vertex_lists([vec![1, 1]]),
            Err(DmtError::MalformedSimplex { .. })
        ));
    }

    #[test]
    fn build_is_idempotent() {
        let k = cx(&[&[0, 1, 2], &[2, 3]]);
        let again = SimplicialComplex::build(k.simplices().to_vec()).unwrap();
        assert_eq!(k, again);
    }

    #[test]
    fn incidence_tables_agree() {
        let k = cx(&[&[0, 1, 2, 3]]);
        for i in 0..k.len() {
            for &j in k.cofaces_of(i) {
                assert!(k.faces_of(j).contains(&i));
                assert_eq!(k.simplex(j).dim(), k.simplex(i).dim() + 1);
            }
        }
        assert_eq!(k.f_vector(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(cx(&[&[0, 1, 2]]).euler_characteristic(), 1);
        assert_eq!(cx(&[&[0, 1], &[1, 2], &[0, 2]]).euler_characteristic(), 0);
        assert_eq!(cx(&[&[0]]).euler_characteristic(), 1);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(cx(&[&[0, 1], &[1, 2], &[0, 2]]).betti_numbers_mod2(), vec![1, 1]);
        assert_eq!(cx(&[&[0, 1, 2]]).betti_numbers_mod2(), vec![1, 0, 0]);
        assert_eq!(cx(&[&[0], &[1]]).betti_numbers_mod2(), vec![2]);
        // tetrahedron boundary is a 2-sphere
        let sphere = cx(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(sphere.betti_numbers_mod2(), vec![1, 0, 1]);
        assert!(SimplicialComplex::empty().betti_numbers_mod2().is_empty());
    }

    #[test]
    fn subcomplex_enumeration() {
        assert_eq!(cx(&[&[0]]).subcomplexes(14).unwrap().len(), 2);
        // brute force over all subsets of {v0, v1, e}
        let edge = cx(&[&[0, 1]]);
        let brute = (0u128..8).filter(|&m| edge.is_closed_mask(m)).count();
        assert_eq!(brute, 5);
        assert_eq!(edge.subcomplexes(14).unwrap().len(), 5);
        let first = &edge.subcomplexes(14).unwrap()[0];
        assert!(first.is_empty());
        let big = cx(&[&[0, 1, 2, 3]]);
        assert!(matches!(
            big.subcomplexes(14),
            Err(DmtError::TooLargeForEnumeration { size: 15, bound: 14 })
        ));
    }

    #[test]
    fn subcomplex_relation() {
        let p3 = cx(&[&[0, 1], &[1, 2]]);
        assert!(cx(&[&[0]]).is_subcomplex_of(&p3));
        assert!(!cx(&[&[0, 2]]).is_subcomplex_of(&p3));
        assert!(SimplicialComplex::empty().is_subcomplex_of(&p3));
    }

    #[test]
    fn connectivity() {
        assert!(cx(&[&[0, 1], &[1, 2]]).is_connected());
        assert_eq!(cx(&[&[0], &[1, 2]]).component_count(), 2);
    }
}
