//! Small named complexes and Morse functions used throughout the tests and
//! documentation.

use crate::complex::SimplicialComplex;
use crate::morse::MorseFunction;
use crate::simplex::Simplex;

fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).expect("fixture simplex")
}

fn function(values: &[(&[usize], f64)]) -> MorseFunction {
    MorseFunction::from_values(values.iter().map(|(v, x)| (s(v), *x))).expect("fixture function")
}

fn complex(lists: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists(lists.iter().map(|l| l.to_vec())).expect("fixture complex")
}

/// Path on vertices 1, 2, 3 with f(1)=0, f(2)=3, f(3)=1, f(12)=2, f(23)=4.
/// Critical cells: 1, 3 and the edge 23.
pub fn p3() -> MorseFunction {
    function(&[
        (&[1], 0.0),
        (&[2], 3.0),
        (&[3], 1.0),
        (&[1, 2], 2.0),
        (&[2, 3], 4.0),
    ])
}

/// Full triangle on a=0, b=1, c=2 whose only critical cell is a.
pub fn collapsible_triangle() -> MorseFunction {
    function(&[
        (&[0], 0.0),
        (&[1], 2.0),
        (&[0, 1], 1.0),
        (&[2], 3.0),
        (&[0, 2], 2.5),
        (&[1, 2], 4.0),
        (&[0, 1, 2], 3.5),
    ])
}

/// Triangle boundary on a=0, b=1, c=2 with critical cells a and bc.
pub fn circle() -> MorseFunction {
    function(&[
        (&[0], 0.0),
        (&[1], 2.0),
        (&[0, 1], 1.0),
        (&[2], 4.0),
        (&[0, 2], 3.0),
        (&[1, 2], 5.0),
    ])
}

/// Two triangles 012 and 123 glued along the edge 12, with local minima at
/// 0 and 3 and the edge 12 as the only other critical cell.
pub fn double_well() -> MorseFunction {
    function(&[
        (&[0], 0.0),
        (&[3], 1.0),
        (&[0, 1], 2.0),
        (&[1], 3.0),
        (&[2, 3], 4.0),
        (&[2], 5.0),
        (&[1, 2], 6.0),
        (&[0, 1, 2], 7.0),
        (&[0, 2], 8.0),
        (&[1, 2, 3], 9.0),
        (&[1, 3], 10.0),
    ])
}

/// A path graph v1 - u1 - u2 - v0 with a pendant edge u1 - x, where the
/// edges v1u1 and u1u2 are critical and u1 flows to the critical vertex x.
/// Vertex ids: v1=0, u1=1, u2=2, v0=3, x=4.
pub fn pendant_path() -> MorseFunction {
    function(&[
        (&[3], 0.0),
        (&[4], 1.0),
        (&[0], 2.0),
        (&[2, 3], 3.0),
        (&[1, 4], 4.0),
        (&[1], 5.0),
        (&[2], 6.0),
        (&[0, 1], 7.0),
        (&[1, 2], 8.0),
    ])
}

pub fn point() -> SimplicialComplex {
    complex(&[&[0]])
}

pub fn edge() -> SimplicialComplex {
    complex(&[&[0, 1]])
}

pub fn path3() -> SimplicialComplex {
    complex(&[&[0, 1], &[1, 2]])
}

pub fn full_triangle() -> SimplicialComplex {
    complex(&[&[0, 1, 2]])
}

pub fn triangle_boundary() -> SimplicialComplex {
    complex(&[&[0, 1], &[1, 2], &[0, 2]])
}

pub fn two_triangles() -> SimplicialComplex {
    complex(&[&[0, 1, 2], &[1, 2, 3]])
}

/// The complexes with at most 12 simplices on which the category machinery
/// is exercised exhaustively.
pub fn small_complexes() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("point", point()),
        ("edge", edge()),
        ("P3", path3()),
        ("full triangle", full_triangle()),
        ("triangle boundary", triangle_boundary()),
        ("two triangles", two_triangles()),
    ]
}

/// A triangle 0,1,2 with a tail edge 2-3. The edge 01 is paired with the
/// triangle, 1 with the edge 12 and 2 with the edge 23; critical cells are
/// the vertices 0 and 3 and the edge 02. A path leaving 0 along 01 is
/// diverted by the flow onto 02.
pub fn triangle_flap() -> MorseFunction {
    function(&[
        (&[3], 0.0),
        (&[0], 1.0),
        (&[2, 3], 2.0),
        (&[2], 3.0),
        (&[1, 2], 4.0),
        (&[1], 5.0),
        (&[0, 2], 6.0),
        (&[0, 1, 2], 7.0),
        (&[0, 1], 8.0),
    ])
}
