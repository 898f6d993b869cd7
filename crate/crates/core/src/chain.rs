use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use crate::complex::SimplicialComplex;
use crate::error::{DmtError, Result};
use crate::simplex::Simplex;

/// An integer `p`-chain on simplices in their increasing-vertex orientation.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    dim: usize,
    coeffs: BTreeMap<Simplex, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_simplex(s: Simplex) -> Self {
        let mut c = Chain::zero(s.dim());
        c.coeffs.insert(s, 1);
        c
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (i64, Simplex)>) -> Result<Self> {
        let mut c = Chain::zero(dim);
        for (k, s) in terms {
            c.add_term(k, s)?;
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, s: &Simplex) -> i64 {
        self.coeffs.get(s).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.coeffs.iter().map(|(s, &k)| (s, k))
    }

    pub fn support(&self) -> BTreeSet<Simplex> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, k: i64, s: Simplex) -> Result<()> {
        if s.dim() != self.dim {
            return Err(DmtError::ChainDimensionMismatch {
                expected: self.dim,
                found: s.dim(),
            });
        }
        if k == 0 {
            return Ok(());
        }
        match self.coeffs.entry(s) {
            Entry::Vacant(e) => {
                e.insert(k);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(k).ok_or(DmtError::Overflow)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Chain) -> Result<Chain> {
        if other.dim != self.dim {
            return Err(DmtError::ChainDimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        for (s, k) in other.terms() {
            out.add_term(k, s.clone())?;
        }
        Ok(out)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Chain> {
        let mut out = Chain::zero(self.dim);
        for (s, c) in self.terms() {
            out.add_term(c.checked_mul(k).ok_or(DmtError::Overflow)?, s.clone())?;
        }
        Ok(out)
    }

    /// Simplicial boundary with alternating signs. The augmented degree is not
    /// modelled: the boundary of a 0-chain is the zero 0-chain.
    pub fn boundary(&self) -> Result<Chain> {
        if self.dim == 0 {
            return Ok(Chain::zero(0));
        }
        let mut out = Chain::zero(self.dim - 1);
        for (s, k) in self.terms() {
            for (sign, face) in s.boundary_faces() {
                out.add_term(k.checked_mul(sign).ok_or(DmtError::Overflow)?, face)?;
            }
        }
        Ok(out)
    }

    /// Fails with `SimplexNotInComplex` if any supported simplex is missing from `k`.
    pub fn check_in(&self, k: &SimplicialComplex) -> Result<()> {
        match self.coeffs.keys().find(|s| !k.contains(s)) {
            Some(s) => Err(DmtError::SimplexNotInComplex(s.clone())),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn boundary_of_triangle() {
        let d = Chain::from_simplex(s(&[0, 1, 2])).boundary().unwrap();
        let expected =
            Chain::from_terms(1, [(1, s(&[1, 2])), (-1, s(&[0, 2])), (1, s(&[0, 1]))]).unwrap();
        assert_eq!(d, expected);
        assert!(d.boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_of_edge_and_vertex() {
        let d = Chain::from_simplex(s(&[0, 1])).boundary().unwrap();
        assert_eq!(d.coeff(&s(&[1])), 1);
        assert_eq!(d.coeff(&s(&[0])), -1);
        assert!(Chain::from_simplex(s(&[4])).boundary().unwrap().is_zero());
    }

    #[test]
    fn cancellation_drops_zero_terms() {
        let c = Chain::from_terms(0, [(2, s(&[0])), (-2, s(&[0]))]).unwrap();
        assert!(c.is_zero());
        assert!(Chain::zero(1).add_term(1, s(&[3])).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let c = Chain::from_terms(0, [(i64::MAX, s(&[0]))]).unwrap();
        assert_eq!(c.checked_add(&c), Err(DmtError::Overflow));
        assert_eq!(c.checked_scale(2), Err(DmtError::Overflow));
    }
}
