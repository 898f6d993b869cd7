//! Min-max critical values: the generic principle over a family of sets and
//! a list of deforming maps, the mountain pass between two local minima, and
//! the discrete geometric category.

pub mod category;
pub mod mountain;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{DmtError, Result};
use crate::flow::FlowOperator;
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

pub use category::{dgcat, ls_bound_check, ls_minmax, CategoryResult, CategorySolver, LsLevel, LsResult};
pub use mountain::{
    enumerate_paths, mountain_pass, mountain_pass_with, phi_on_path, EdgePath, MountainPass,
    PathOptions, PathProblem,
};

/// A set of simplices.
pub type CellSet = BTreeSet<Simplex>;

type SetFn = dyn Fn(&CellSet) -> Result<CellSet> + Send + Sync;

/// A named map from sets of simplices to sets of simplices.
#[derive(Clone)]
pub struct NamedMap {
    name: String,
    map: Arc<SetFn>,
}

impl fmt::Debug for NamedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NamedMap").field("name", &self.name).finish()
    }
}

impl NamedMap {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&CellSet) -> Result<CellSet> + Send + Sync + 'static,
    ) -> Self {
        NamedMap {
            name: name.into(),
            map: Arc::new(map),
        }
    }

    pub fn identity() -> Self {
        NamedMap::new("identity", |s| Ok(s.clone()))
    }

    /// `Phi`: union of supports of the flow.
    pub fn phi(flow: Arc<FlowOperator>) -> Self {
        NamedMap::new("Phi", move |s| flow.big_phi(s))
    }

    /// `Phi_bar`: subcomplex generated by `Phi`.
    pub fn phi_bar(flow: Arc<FlowOperator>) -> Self {
        NamedMap::new("Phi_bar", move |s| {
            Ok(flow.big_phi_bar(s)?.simplices().iter().cloned().collect())
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, s: &CellSet) -> Result<CellSet> {
        (self.map)(s)
    }
}

/// A function, a list of maps and an explicit family of sets of simplices.
#[derive(Debug, Clone)]
pub struct MinMaxInstance {
    f: MorseFunction,
    maps: Vec<NamedMap>,
    family: Vec<CellSet>,
}

impl MinMaxInstance {
    /// The family is deduplicated and sorted.
    pub fn new(f: MorseFunction, maps: Vec<NamedMap>, family: impl IntoIterator<Item = CellSet>) -> Self {
        let family: BTreeSet<CellSet> = family.into_iter().collect();
        MinMaxInstance {
            f,
            maps,
            family: family.into_iter().collect(),
        }
    }

    pub fn function(&self) -> &MorseFunction {
        &self.f
    }

    pub fn maps(&self) -> &[NamedMap] {
        &self.maps
    }

    pub fn family(&self) -> &[CellSet] {
        &self.family
    }

    fn max_of(&self, s: &CellSet) -> Result<(f64, Simplex)> {
        let mut best: Option<(f64, &Simplex)> = None;
        for cell in s {
            let v = self
                .f
                .value(cell)
                .ok_or_else(|| DmtError::SimplexNotInComplex(cell.clone()))?;
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, cell));
            }
        }
        best.map(|(v, c)| (v, c.clone())).ok_or(DmtError::EmptyFamily)
    }
}

/// The min-max value with a set achieving it and the cell carrying the value.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxValue {
    pub value: f64,
    pub witness: CellSet,
    pub cell: Simplex,
}

/// `c = min over S of max over s in S of f(s)`. The first achieving set in
/// family order is returned. Fails with `TheoremViolation` when `c` is not a
/// critical value of `f`.
pub fn minmax_value(inst: &MinMaxInstance) -> Result<MinMaxValue> {
    if inst.family.is_empty() {
        return Err(DmtError::EmptyFamily);
    }
    let mut best: Option<MinMaxValue> = None;
    for s in &inst.family {
        let (value, cell) = inst.max_of(s)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(MinMaxValue {
                value,
                witness: s.clone(),
                cell,
            });
        }
    }
    let best = best.expect("non-empty family");
    if !inst.f.critical_values().contains(&best.value) {
        return Err(DmtError::TheoremViolation(format!(
            "min-max value {} (at {}) is not a critical value",
            best.value, best.cell
        )));
    }
    Ok(best)
}

/// What [`check_minmax_data`] verified.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxReport {
    pub epsilon: f64,
    pub family_size: usize,
    pub closure_checks: usize,
    /// Each regular value with the name of a map that pushes `L^{a+eps}`
    /// into `L^{a-eps}`.
    pub deformations: Vec<(f64, String)>,
}

/// Checks that every map sends the family into itself, and that for every
/// regular value `a` some map sends `L^{a+eps}` into `L^{a-eps}`, with `eps`
/// half the smallest gap between distinct values of `f`.
pub fn check_minmax_data(inst: &MinMaxInstance) -> Result<MinMaxReport> {
    let f = &inst.f;
    if !f.is_injective() {
        return Err(DmtError::PreconditionViolated(
            "min-max data is checked for injective functions only".into(),
        ));
    }
    let members: HashSet<&CellSet> = inst.family.iter().collect();
    let mut closure_checks = 0;
    for h in &inst.maps {
        for s in &inst.family {
            let image = h.apply(s)?;
            if !members.contains(&image) {
                return Err(DmtError::ClosureViolated {
                    map: h.name.clone(),
                    image: format_set(&image),
                });
            }
            closure_checks += 1;
        }
    }
    let epsilon = epsilon_of(f);
    let k = f.complex();
    let sublevel = |t: f64| -> CellSet {
        k.simplices()
            .iter()
            .zip(f.values())
            .filter(|(_, &v)| v <= t)
            .map(|(s, _)| s.clone())
            .collect()
    };
    let critical: Vec<f64> = f.critical_values();
    let mut deformations = Vec::new();
    for a in f.distinct_values().into_iter().filter(|a| !critical.contains(a)) {
        let above = sublevel(a + epsilon);
        let below = sublevel(a - epsilon);
        let mut found = None;
        for h in &inst.maps {
            if h.apply(&above)?.is_subset(&below) {
                found = Some(h.name.clone());
                break;
            }
        }
        match found {
            Some(name) => deformations.push((a, name)),
            None => return Err(DmtError::DeformationViolated(a)),
        }
    }
    Ok(MinMaxReport {
        epsilon,
        family_size: inst.family.len(),
        closure_checks,
        deformations,
    })
}

/// Half the smallest gap between consecutive distinct values (0.5 when `f`
/// takes a single value).
pub fn epsilon_of(f: &MorseFunction) -> f64 {
    let values = f.distinct_values();
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp)
        .map_or(0.5, |gap| gap / 2.0)
}

pub fn format_set(s: &CellSet) -> String {
    let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn set(cells: &[&[usize]]) -> CellSet {
        cells.iter().map(|v| s(v)).collect()
    }

    #[test]
    fn single_critical_vertex_family() {
        let f = fixtures::p3();
        let flow = Arc::new(FlowOperator::new(&f).unwrap());
        let inst = MinMaxInstance::new(f, vec![NamedMap::phi(flow)], [set(&[&[3]])]);
        let mv = minmax_value(&inst).unwrap();
        assert_eq!(mv.value, 1.0);
        assert_eq!(mv.cell, s(&[3]));
        check_minmax_data(&inst).unwrap();
    }

    #[test]
    fn empty_families_are_rejected() {
        let f = fixtures::p3();
        let none = MinMaxInstance::new(f.clone(), vec![], Vec::<CellSet>::new());
        assert_eq!(minmax_value(&none).unwrap_err(), DmtError::EmptyFamily);
        let hollow = MinMaxInstance::new(f, vec![], [CellSet::new()]);
        assert_eq!(minmax_value(&hollow).unwrap_err(), DmtError::EmptyFamily);
    }

    #[test]
    fn regular_min_max_value_is_reported() {
        let f = fixtures::p3();
        // {2} has max f = 3, the value of a regular vertex
        let inst = MinMaxInstance::new(f, vec![], [set(&[&[2]]), set(&[&[2, 3]])]);
        assert!(matches!(minmax_value(&inst), Err(DmtError::TheoremViolation(_))));
    }

    #[test]
    fn identity_never_deforms() {
        let f = fixtures::p3();
        let inst = MinMaxInstance::new(f, vec![NamedMap::identity()], [set(&[&[1]])]);
        assert_eq!(check_minmax_data(&inst).unwrap_err(), DmtError::DeformationViolated(2.0));
    }

    #[test]
    fn closure_violation_names_the_map() {
        let f = fixtures::p3();
        let flow = Arc::new(FlowOperator::new(&f).unwrap());
        let inst = MinMaxInstance::new(f, vec![NamedMap::phi(flow)], [set(&[&[2]])]);
        assert_eq!(
            check_minmax_data(&inst).unwrap_err(),
            DmtError::ClosureViolated {
                map: "Phi".into(),
                image: "{[1]}".into()
            }
        );
    }

    #[test]
    fn epsilon_is_half_the_smallest_gap() {
        assert_eq!(epsilon_of(&fixtures::p3()), 0.5);
        assert_eq!(epsilon_of(&fixtures::collapsible_triangle()), 0.25);
    }
}
