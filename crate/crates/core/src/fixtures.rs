//! Small reference graphs and vertex data used in tests, examples and the CLI.
//!
//! Vertices are `u = 0`, `v = 1`, `w = 2`; the letters [`S_U`], [`T_V`] and
//! [`R_W`] are element `1` of the respective vertex group.

use alloc::vec;
use alloc::vec::Vec;

use crate::group::{FiniteGroup, WeakHaagerupVertexData};
use crate::word::{GraphProductContext, Letter, SimpleGraph};

pub const S_U: Letter = Letter::new(0, 1);
pub const T_V: Letter = Letter::new(1, 1);
pub const R_W: Letter = Letter::new(2, 1);

/// Two vertices joined by an edge.
pub fn f1_graph() -> SimpleGraph {
    SimpleGraph::new(2, &[(0, 1)]).expect("valid graph")
}

/// Two vertices, no edge.
pub fn f2_graph() -> SimpleGraph {
    SimpleGraph::edgeless(2)
}

/// The path `u – v – w`.
pub fn f3_graph() -> SimpleGraph {
    SimpleGraph::new(3, &[(0, 1), (1, 2)]).expect("valid graph")
}

fn with_data(graph: SimpleGraph, data: WeakHaagerupVertexData) -> GraphProductContext {
    let n = graph.vertex_count();
    GraphProductContext::new(graph, vec![data; n]).expect("matching vertex count")
}

pub fn f1(data: WeakHaagerupVertexData) -> GraphProductContext {
    with_data(f1_graph(), data)
}

pub fn f2(data: WeakHaagerupVertexData) -> GraphProductContext {
    with_data(f2_graph(), data)
}

pub fn f3(data: WeakHaagerupVertexData) -> GraphProductContext {
    with_data(f3_graph(), data)
}

/// ℤ/2 with `R(s) = (1)` and `S ≡ 0`, so `φ(1) = 0`, `φ(s) = 1`.
pub fn d0() -> WeakHaagerupVertexData {
    WeakHaagerupVertexData::new(FiniteGroup::cyclic(2), vec![vec![0.0], vec![1.0]], vec![vec![], vec![]])
        .expect("well-shaped data")
}

/// ℤ/2 with `R(s) = (1, 0)`, `S(1) = (½, 0)`, `S(s) = (0, ½)`, so
/// `φ(1) = 1`, `φ(s) = 3/2`.
pub fn d1() -> WeakHaagerupVertexData {
    WeakHaagerupVertexData::new(
        FiniteGroup::cyclic(2),
        vec![vec![0.0, 0.0], vec![1.0, 0.0]],
        vec![vec![0.5, 0.0], vec![0.0, 0.5]],
    )
    .expect("well-shaped data")
}

/// ℤ/3 with `R(k) = ωᵏ − 1` and `S(k) = ωᵏ/2` in ℝ², so `φ(0) = 1` and
/// `φ(k) = 13/4` otherwise.
pub fn d2() -> WeakHaagerupVertexData {
    let root = |k: usize| {
        let t = 2.0 * core::f64::consts::PI * k as f64 / 3.0;
        (libm::cos(t), libm::sin(t))
    };
    let r: Vec<Vec<f64>> = (0..3)
        .map(|k| if k == 0 { vec![0.0, 0.0] } else { let (c, s) = root(k); vec![c - 1.0, s] })
        .collect();
    let s: Vec<Vec<f64>> = (0..3).map(|k| { let (c, s) = root(k); vec![0.5 * c, 0.5 * s] }).collect();
    WeakHaagerupVertexData::new(FiniteGroup::cyclic(3), r, s).expect("well-shaped data")
}
