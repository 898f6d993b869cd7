//! Edge paths from one local minimum into the basin of another, and the
//! mountain-pass value between them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::{format_set, minmax_value, CellSet, MinMaxInstance, NamedMap};
use crate::collapse::{basin, level_subcomplex};
use crate::error::{DmtError, Result};
use crate::flow::FlowOperator;
use crate::morse::{GradientField, MorseFunction};
use crate::simplex::Simplex;

/// An edge path `u_0 u_1 ... u_r` given by its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    vertices: Vec<usize>,
}

impl EdgePath {
    /// Fails with `MalformedSimplex` if two consecutive vertices coincide.
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        for w in vertices.windows(2) {
            Simplex::new(w.to_vec())?;
        }
        if vertices.is_empty() {
            return Err(DmtError::EmptyInput);
        }
        Ok(EdgePath { vertices })
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("non-empty")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> Vec<Simplex> {
        self.vertices
            .windows(2)
            .map(|w| Simplex::edge(w[0], w[1]))
            .collect()
    }

    /// `{u_0} ∪ {e_1, ..., e_r}`, the set the flow acts on.
    pub fn cells(&self) -> CellSet {
        let mut out: CellSet = self.edges().into_iter().collect();
        out.insert(Simplex::vertex(self.start()));
        out
    }

    /// Order by number of edges, then by the edge sequence.
    pub fn cmp_by_length(&self, other: &EdgePath) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.edges().cmp(&other.edges()))
    }
}

impl std::fmt::Display for EdgePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("-"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathOptions {
    /// Forbid repeated vertices. When false, only edges may not repeat.
    pub vertex_simple: bool,
    /// Require the edge values to decrease strictly from the first arrival
    /// in the basin to the end of the path.
    pub monotone_tail: bool,
    /// Forbid passing through critical vertices other than the two minima.
    pub avoid_critical: bool,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            vertex_simple: true,
            monotone_tail: true,
            avoid_critical: true,
        }
    }
}

/// The admissible edge paths from `v1` into the basin of `v0`.
#[derive(Debug, Clone)]
pub struct PathProblem {
    f: MorseFunction,
    field: GradientField,
    v1: usize,
    v0: usize,
    basin: BTreeSet<usize>,
    critical_vertices: HashSet<usize>,
    options: PathOptions,
}

impl PathProblem {
    /// `v1` and `v0` must be distinct critical vertices with `f(v0) < f(v1)`.
    pub fn new(f: &MorseFunction, v1: usize, v0: usize, options: PathOptions) -> Result<Self> {
        let k = f.complex();
        let field = f.gradient_field()?;
        let check = |v: usize, name: &str| -> Result<usize> {
            match k.index_of(&Simplex::vertex(v)) {
                Some(i) if field.is_critical_index(i) => Ok(i),
                Some(_) => Err(DmtError::NotLocalMinima(format!("{name} = {v} is not critical"))),
                None => Err(DmtError::NotLocalMinima(format!("{name} = {v} is not a vertex"))),
            }
        };
        let i1 = check(v1, "min1")?;
        let i0 = check(v0, "min0")?;
        if v1 == v0 {
            return Err(DmtError::NotLocalMinima("min0 and min1 coincide".into()));
        }
        if !(f.value_at(i0) < f.value_at(i1)) {
            return Err(DmtError::NotLocalMinima(format!(
                "f(min0) = {} is not below f(min1) = {}",
                f.value_at(i0),
                f.value_at(i1)
            )));
        }
        let basin_cells = basin(&field, &Simplex::vertex(v0))?;
        let basin: BTreeSet<usize> = basin_cells.cells.vertices().collect();
        let critical_vertices = k
            .dim_range(0)
            .filter(|&i| field.is_critical_index(i))
            .map(|i| k.simplex(i).vertices()[0])
            .collect();
        Ok(PathProblem {
            f: f.clone(),
            field,
            v1,
            v0,
            basin,
            critical_vertices,
            options,
        })
    }

    pub fn function(&self) -> &MorseFunction {
        &self.f
    }

    pub fn field(&self) -> &GradientField {
        &self.field
    }

    pub fn options(&self) -> PathOptions {
        self.options
    }

    pub fn min1(&self) -> usize {
        self.v1
    }

    pub fn min0(&self) -> usize {
        self.v0
    }

    /// Vertices of the basin `A(v0)`.
    pub fn basin_vertices(&self) -> &BTreeSet<usize> {
        &self.basin
    }

    fn edge_value(&self, a: usize, b: usize) -> Option<f64> {
        self.f.value(&Simplex::edge(a, b))
    }

    fn may_visit(&self, w: usize) -> bool {
        !self.options.avoid_critical
            || !self.critical_vertices.contains(&w)
            || w == self.v0
            || (w == self.v1 && !self.options.vertex_simple)
    }

    /// Structural membership test, independent of the enumeration.
    pub fn is_member(&self, path: &EdgePath) -> bool {
        let vs = path.vertices();
        if vs[0] != self.v1 || path.is_empty() || !self.basin.contains(&path.end()) {
            return false;
        }
        let mut values = Vec::with_capacity(path.len());
        for w in vs.windows(2) {
            match self.edge_value(w[0], w[1]) {
                Some(v) => values.push(v),
                None => return false,
            }
        }
        if !vs[1..].iter().all(|&u| self.may_visit(u)) {
            return false;
        }
        let distinct = if self.options.vertex_simple {
            vs.iter().collect::<HashSet<_>>().len() == vs.len()
        } else {
            path.edges().iter().collect::<HashSet<_>>().len() == path.len()
        };
        if !distinct {
            return false;
        }
        if self.options.monotone_tail {
            // edge e_j arrives at u_j, so the tail starts at values[j - 1]
            if let Some(j) = (1..vs.len()).find(|&j| self.basin.contains(&vs[j])) {
                if values[j - 1..].windows(2).any(|w| w[0] <= w[1]) {
                    return false;
                }
            }
        }
        true
    }

    /// All member paths, sorted by length then edge sequence. Fails with
    /// `NoPathExists` when there are none.
    pub fn enumerate(&self) -> Result<Vec<EdgePath>> {
        let mut out = Vec::new();
        let mut vertices = vec![self.v1];
        let mut used_edges = HashSet::new();
        self.extend(&mut vertices, &mut used_edges, None, &mut out);
        if out.is_empty() {
            return Err(DmtError::NoPathExists);
        }
        out.sort_by(EdgePath::cmp_by_length);
        Ok(out)
    }

    fn extend(
        &self,
        vertices: &mut Vec<usize>,
        used_edges: &mut HashSet<Simplex>,
        tail_value: Option<f64>,
        out: &mut Vec<EdgePath>,
    ) {
        let k = self.f.complex();
        let u = *vertices.last().expect("non-empty");
        let ui = k.index_of(&Simplex::vertex(u)).expect("vertex of K");
        for &ei in k.cofaces_of(ui) {
            let edge = k.simplex(ei);
            let w = edge.vertices().iter().copied().find(|&x| x != u).expect("edge");
            if !self.may_visit(w) {
                continue;
            }
            if self.options.vertex_simple && vertices.contains(&w) {
                continue;
            }
            if !self.options.vertex_simple && used_edges.contains(edge) {
                continue;
            }
            let value = self.f.value_at(ei);
            let next_tail = if self.options.monotone_tail {
                match tail_value {
                    Some(prev) if value >= prev => continue,
                    Some(_) => Some(value),
                    None if self.basin.contains(&w) => Some(value),
                    None => None,
                }
            } else {
                None
            };
            vertices.push(w);
            used_edges.insert(edge.clone());
            if self.basin.contains(&w) {
                out.push(EdgePath {
                    vertices: vertices.clone(),
                });
            }
            self.extend(vertices, used_edges, next_tail, out);
            used_edges.remove(edge);
            vertices.pop();
        }
    }

    /// Reads a set of cells back as a member path: the set must consist of
    /// `v1` and edges that can be ordered into a member path using each edge
    /// once.
    pub fn reassemble(&self, cells: &CellSet) -> Result<EdgePath> {
        let fail = |why: &str| DmtError::ReassemblyFailure(format!("{}: {why}", format_set(cells)));
        let start = Simplex::vertex(self.v1);
        if !cells.contains(&start) {
            return Err(fail("does not contain the starting vertex"));
        }
        let mut edges = Vec::new();
        for c in cells.iter().filter(|c| **c != start) {
            if c.dim() != 1 {
                return Err(fail(&format!("{c} is not an edge")));
            }
            edges.push(c.clone());
        }
        if edges.is_empty() {
            return Err(fail("no edges"));
        }
        let mut used = vec![false; edges.len()];
        let mut vertices = vec![self.v1];
        self.order_edges(&edges, &mut used, &mut vertices)
            .ok_or_else(|| fail("edges do not form an admissible path"))
    }

    fn order_edges(&self, edges: &[Simplex], used: &mut [bool], vertices: &mut Vec<usize>) -> Option<EdgePath> {
        if used.iter().all(|&u| u) {
            let path = EdgePath {
                vertices: vertices.clone(),
            };
            return self.is_member(&path).then_some(path);
        }
        let u = *vertices.last().expect("non-empty");
        for i in 0..edges.len() {
            if used[i] || !edges[i].contains_vertex(u) {
                continue;
            }
            let w = edges[i].vertices().iter().copied().find(|&x| x != u).expect("edge");
            used[i] = true;
            vertices.push(w);
            if let Some(p) = self.order_edges(edges, used, vertices) {
                return Some(p);
            }
            vertices.pop();
            used[i] = false;
        }
        None
    }

    /// The min-max instance with `H = {Phi}` and the enumerated paths as the family.
    pub fn instance(&self, flow: Arc<FlowOperator>, paths: &[EdgePath]) -> MinMaxInstance {
        MinMaxInstance::new(
            self.f.clone(),
            vec![NamedMap::phi(flow)],
            paths.iter().map(EdgePath::cells),
        )
    }
}

/// All admissible paths with the default options.
pub fn enumerate_paths(f: &MorseFunction, v1: usize, v0: usize) -> Result<Vec<EdgePath>> {
    PathProblem::new(f, v1, v0, PathOptions::default())?.enumerate()
}

/// `Phi` applied to `{v1} ∪ edges`, read back as a path of the same problem.
pub fn phi_on_path(flow: &FlowOperator, problem: &PathProblem, path: &EdgePath) -> Result<EdgePath> {
    if !problem.is_member(path) {
        return Err(DmtError::PreconditionViolated(format!(
            "{path} is not an admissible path"
        )));
    }
    problem.reassemble(&flow.big_phi(&path.cells())?)
}

/// The mountain-pass value between two local minima, its critical edge and
/// the shortest path realising it.
#[derive(Debug, Clone, PartialEq)]
pub struct MountainPass {
    pub value: f64,
    pub edge: Simplex,
    pub witness: EdgePath,
    pub family_size: usize,
    /// Whether the function had to be made injective first.
    pub made_injective: bool,
}

pub fn mountain_pass(f: &MorseFunction, v1: usize, v0: usize) -> Result<MountainPass> {
    mountain_pass_with(f, v1, v0, PathOptions::default())
}

/// `c = min over paths E of max over e in E of f(e)`. Non-injective
/// functions are made injective first; the reported value is the original
/// value of the critical edge.
pub fn mountain_pass_with(
    f: &MorseFunction,
    v1: usize,
    v0: usize,
    options: PathOptions,
) -> Result<MountainPass> {
    let made_injective = !f.is_injective();
    let g = f.make_injective();
    let problem = PathProblem::new(&g, v1, v0, options)?;
    let paths = problem.enumerate()?;
    let flow = Arc::new(FlowOperator::new(&g)?);
    let inst = problem.instance(flow, &paths);
    let mv = minmax_value(&inst)?;
    // paths are sorted by length then edges, so the first achieving path wins
    let witness = paths
        .iter()
        .find(|p| {
            p.cells().iter().map(|c| g.value(c).unwrap()).fold(f64::MIN, f64::max) == mv.value
        })
        .cloned()
        .expect("minimum is achieved by some path");
    let k = g.complex();
    let edge = mv.cell;
    let ei = k.require(&edge)?;
    if edge.dim() != 1 || !g.is_critical_index(ei) {
        return Err(DmtError::TheoremViolation(format!(
            "mountain-pass value is carried by {edge}, not a critical edge"
        )));
    }
    let f_v1 = g.value(&Simplex::vertex(v1)).expect("vertex of K");
    if !(mv.value > f_v1) {
        return Err(DmtError::TheoremViolation(format!(
            "mountain-pass value {} does not exceed f(min1) = {f_v1}",
            mv.value
        )));
    }
    Ok(MountainPass {
        value: f.value_at(ei),
        edge,
        witness,
        family_size: paths.len(),
        made_injective,
    })
}

/// Whether `K^{f(v)}` is disconnected.
pub fn sublevel_splits_at(f: &MorseFunction, v: usize) -> Result<bool> {
    let value = f
        .value(&Simplex::vertex(v))
        .ok_or_else(|| DmtError::SimplexNotInComplex(Simplex::vertex(v)))?;
    Ok(level_subcomplex(f, value).complex.component_count() > 1)
}
