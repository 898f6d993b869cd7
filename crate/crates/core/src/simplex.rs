use std::cmp::Ordering;
use std::fmt;

use crate::error::{DmtError, Result};

/// An abstract simplex, stored as its strictly increasing vertex list.
///
/// Simplices order first by dimension and then lexicographically, so sorted
/// collections list vertices, then edges, then triangles and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from vertex ids in any order. Repeated ids are rejected.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(DmtError::MalformedSimplex {
                vertices,
                reason: "no vertices".into(),
            });
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(DmtError::MalformedSimplex {
                vertices,
                reason: "repeated vertex id".into(),
            });
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn edge(a: usize, b: usize) -> Self {
        Simplex::new(vec![a, b]).expect("edge endpoints must differ")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces paired with the incidence sign `(-1)^i`, where `i`
    /// is the position of the dropped vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (i64, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut face = self.0.clone();
            face.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            (sign, Simplex(face))
        })
    }

    /// Every non-empty face, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    /// Strict face relation.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() < other.0.len() && self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }

    /// Sign `<boundary(other), self>` when `self` is a codimension-one face of `other`.
    pub fn incidence(&self, other: &Simplex) -> Option<i64> {
        if self.0.len() + 1 != other.0.len() {
            return None;
        }
        other
            .boundary_faces()
            .find(|(_, face)| face == self)
            .map(|(sign, _)| sign)
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
