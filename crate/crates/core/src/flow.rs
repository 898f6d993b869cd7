//! The chain-level gradient `V`, the discrete flow `phi = Id + dV + Vd`, its
//! matrices, and the set maps `Phi` (union of supports) and `Phi_bar`
//! (face closure of `Phi`).

use std::collections::{BTreeMap, BTreeSet};

use crate::chain::Chain;
use crate::collapse::{collapse_in_order, level_subcomplex, window_pairs, CollapseSequence};
use crate::complex::SimplicialComplex;
use crate::error::{DmtError, Result};
use crate::morse::{GradientField, MorseFunction};
use crate::simplex::Simplex;

/// Sparse integer matrix stored by rows. Row `i` lists the coefficients of
/// the image of basis element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    cols: usize,
    rows: Vec<BTreeMap<usize, i64>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            cols,
            rows: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.insert(i, 1);
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i].get(&j).copied().unwrap_or(0)
    }

    /// Nonzero entries of row `i` in column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.rows[i].iter().map(|(&j, &v)| (j, v))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    fn add_entry(&mut self, i: usize, j: usize, v: i64) -> Result<()> {
        if v == 0 {
            return Ok(());
        }
        let e = self.rows[i].entry(j).or_insert(0);
        *e = e.checked_add(v).ok_or(DmtError::Overflow)?;
        if *e == 0 {
            self.rows[i].remove(&j);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        assert_eq!(
            (self.row_count(), self.cols),
            (other.row_count(), other.cols),
            "matrix shapes differ"
        );
        let mut out = self.clone();
        for i in 0..other.row_count() {
            for (j, v) in other.row(i) {
                out.add_entry(i, j, v)?;
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        assert_eq!(self.cols, other.row_count(), "inner dimensions differ");
        let mut out = SparseIntMatrix::zeros(self.row_count(), other.cols);
        for i in 0..self.row_count() {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    out.add_entry(i, j, a.checked_mul(b).ok_or(DmtError::Overflow)?)?;
                }
            }
        }
        Ok(out)
    }
}

/// What [`FlowOperator::check_flow_matrix`] verified for one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMatrixReport {
    pub dim: usize,
    pub size: usize,
    pub critical: usize,
    pub off_diagonal: usize,
}

/// `V` and `phi` for one Morse function, with per-dimension matrices indexed
/// by the `p`-simplices in complex order.
#[derive(Debug, Clone)]
pub struct FlowOperator {
    f: MorseFunction,
    field: GradientField,
    v: Vec<SparseIntMatrix>,
    boundary: Vec<SparseIntMatrix>,
    phi: Vec<SparseIntMatrix>,
    /// support of `phi(s)` per simplex, as complex indices
    support: Vec<Vec<usize>>,
}

impl FlowOperator {
    pub fn new(f: &MorseFunction) -> Result<Self> {
        let field = f.gradient_field()?;
        let k = f.complex();
        let top = k.dim().map_or(0, |d| d + 1);
        let local = |i: usize| i - k.dim_range(k.simplex(i).dim()).start;
        let size = |p: usize| k.dim_range(p).len();

        // V_p : C_p -> C_{p+1}
        let mut v = Vec::with_capacity(top);
        for p in 0..top {
            let mut m = SparseIntMatrix::zeros(size(p), size(p + 1));
            for i in k.dim_range(p) {
                if let Some(j) = field.up_partner(i) {
                    let inc = k
                        .simplex(i)
                        .incidence(k.simplex(j))
                        .expect("paired cells are incident");
                    m.add_entry(local(i), local(j), -inc)?;
                }
            }
            v.push(m);
        }
        // d_p : C_p -> C_{p-1}; d_0 is the zero map into an empty space
        let mut boundary = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let cols = if p == 0 { 0 } else { size(p - 1) };
            let mut m = SparseIntMatrix::zeros(size(p), cols);
            if p > 0 {
                for i in k.dim_range(p) {
                    for (sign, face) in k.simplex(i).boundary_faces() {
                        let j = k.index_of(&face).expect("closed complex");
                        m.add_entry(local(i), local(j), sign)?;
                    }
                }
            }
            boundary.push(m);
        }
        // phi_p = I + V_p d_{p+1} + d_p V_{p-1}
        let mut phi = Vec::with_capacity(top);
        for p in 0..top {
            let mut m = SparseIntMatrix::identity(size(p)).checked_add(&v[p].checked_mul(&boundary[p + 1])?)?;
            if p > 0 {
                m = m.checked_add(&boundary[p].checked_mul(&v[p - 1])?)?;
            }
            phi.push(m);
        }
        let support = (0..k.len())
            .map(|i| {
                let p = k.simplex(i).dim();
                let base = k.dim_range(p).start;
                phi[p].row(local(i)).map(|(j, _)| base + j).collect()
            })
            .collect();
        Ok(FlowOperator {
            f: f.clone(),
            field,
            v,
            boundary,
            phi,
            support,
        })
    }

    pub fn function(&self) -> &MorseFunction {
        &self.f
    }

    pub fn field(&self) -> &GradientField {
        &self.field
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.f.complex()
    }

    /// `V(s) = -<d t, s> t` for a pair `(s, t)`, zero otherwise.
    pub fn apply_v(&self, c: &Chain) -> Result<Chain> {
        let k = self.complex();
        let mut out = Chain::zero(c.dim() + 1);
        for (s, coeff) in c.terms() {
            let i = k.require(s)?;
            if let Some(j) = self.field.up_partner(i) {
                let t = k.simplex(j);
                let inc = s.incidence(t).expect("paired cells are incident");
                let x = coeff
                    .checked_mul(-inc)
                    .ok_or(DmtError::Overflow)?;
                out.add_term(x, t.clone())?;
            }
        }
        Ok(out)
    }

    /// `phi(c) = c + d V c + V d c`, computed from the definition.
    pub fn apply_flow(&self, c: &Chain) -> Result<Chain> {
        c.check_in(self.complex())?;
        let dv = self.apply_v(c)?.boundary()?;
        let mut out = c.checked_add(&dv)?;
        if c.dim() > 0 {
            out = out.checked_add(&self.apply_v(&c.boundary()?)?)?;
        }
        Ok(out)
    }

    /// Matrix of the boundary from `p`-chains to `(p-1)`-chains.
    pub fn boundary_matrix(&self, p: usize) -> Option<&SparseIntMatrix> {
        self.boundary.get(p)
    }

    /// Matrix of `V` from `p`-chains to `(p+1)`-chains.
    pub fn v_matrix(&self, p: usize) -> Option<&SparseIntMatrix> {
        self.v.get(p)
    }

    /// Matrix `(a_ij)` with `phi(s_i) = sum_j a_ij s_j` over the `p`-simplices.
    pub fn flow_matrix(&self, p: usize) -> Result<&SparseIntMatrix> {
        self.phi.get(p).ok_or_else(|| {
            DmtError::PreconditionViolated(format!("no simplices of dimension {p}"))
        })
    }

    /// Checks that `a_ii` is 1 for critical and 0 for regular simplices, that
    /// every off-diagonal entry strictly lowers `f`, and that the matrix agrees
    /// with [`FlowOperator::apply_flow`] row by row.
    pub fn check_flow_matrix(&self, p: usize) -> Result<FlowMatrixReport> {
        let m = self.flow_matrix(p)?;
        let k = self.complex();
        let range = k.dim_range(p);
        let mut critical = 0;
        let mut off_diagonal = 0;
        for (row, i) in range.clone().enumerate() {
            let s = k.simplex(i);
            let is_critical = self.field.is_critical_index(i);
            critical += usize::from(is_critical);
            let diag = m.get(row, row);
            if diag != i64::from(is_critical) {
                return Err(DmtError::PropertyViolation(format!(
                    "diagonal entry of {s} is {diag} but the simplex is {}",
                    if is_critical { "critical" } else { "regular" }
                )));
            }
            for (col, a) in m.row(row).filter(|&(col, _)| col != row) {
                let t = k.simplex(range.start + col);
                if !(self.f.value_at(range.start + col) < self.f.value_at(i)) {
                    return Err(DmtError::PropertyViolation(format!(
                        "entry {a} of {s} at {t} does not lower f"
                    )));
                }
                off_diagonal += 1;
            }
            let image = self.apply_flow(&Chain::from_simplex(s.clone()))?;
            let from_matrix = Chain::from_terms(
                p,
                m.row(row).map(|(col, a)| (a, k.simplex(range.start + col).clone())),
            )?;
            if image != from_matrix {
                return Err(DmtError::PropertyViolation(format!(
                    "matrix row of {s} disagrees with the flow"
                )));
            }
        }
        Ok(FlowMatrixReport {
            dim: p,
            size: range.len(),
            critical,
            off_diagonal,
        })
    }

    /// Indices in the support of `phi(s_i)`.
    pub fn support_of(&self, i: usize) -> &[usize] {
        &self.support[i]
    }

    /// `Phi(A)`: union of the supports of `phi(s)` for `s` in `A`.
    pub fn big_phi<'a>(&self, a: impl IntoIterator<Item = &'a Simplex>) -> Result<BTreeSet<Simplex>> {
        let k = self.complex();
        let mut out = BTreeSet::new();
        for s in a {
            let i = k.require(s)?;
            out.extend(self.support[i].iter().map(|&j| k.simplex(j).clone()));
        }
        Ok(out)
    }

    /// `Phi_bar(A)`: the subcomplex generated by `Phi(A)`.
    pub fn big_phi_bar<'a>(
        &self,
        a: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<SimplicialComplex> {
        Ok(SimplicialComplex::closure(self.big_phi(a)?))
    }
}

/// Collapses `K^a` onto `Phi_bar(K^a)` by removing the Morse pairs of the
/// difference in decreasing order of `f`.
pub fn verify_phibar_collapse(f: &MorseFunction, a: f64) -> Result<CollapseSequence> {
    let flow = FlowOperator::new(f)?;
    let level = level_subcomplex(f, a).complex;
    let image = flow.big_phi_bar(level.simplices())?;
    if !image.is_subcomplex_of(&level) {
        return Err(DmtError::ProofFailure(format!(
            "Phi_bar(K^{a}) is not contained in K^{a}"
        )));
    }
    let pairs = window_pairs(f, &level, &image)?;
    let seq = collapse_in_order(&level, pairs)?;
    if seq.end() != &image {
        return Err(DmtError::ProofFailure(format!(
            "collapse of K^{a} did not end at Phi_bar(K^{a})"
        )));
    }
    Ok(seq)
}
