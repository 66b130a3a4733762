use crate::group::Element;

/// A malformed group table. Each variant names the axiom that failed.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructuralError {
    #[error("group table is empty")]
    Empty,
    #[error("cayley row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("inverse table has length {len}, expected {order}")]
    InverseLength { len: usize, order: usize },
    #[error("table entry {entry} out of range for order {order}")]
    EntryOutOfRange { entry: usize, order: usize },
    #[error("identity axiom fails at element {element}")]
    Identity { element: Element },
    #[error("latin square axiom fails in row {row}")]
    NotLatinRow { row: usize },
    #[error("latin square axiom fails in column {column}")]
    NotLatinColumn { column: usize },
    #[error("associativity fails at ({x}, {y}, {z})")]
    Associativity { x: Element, y: Element, z: Element },
    #[error("inverse axiom fails at element {element}")]
    Inverse { element: Element },
    #[error("graph has a loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("graph edge ({a}, {b}) listed twice")]
    MultipleEdge { a: usize, b: usize },
    #[error("graph has {graph} vertices but {data} vertex data entries")]
    VertexCount { graph: usize, data: usize },
}

impl StructuralError {
    /// Short machine-readable name of the failed axiom.
    pub fn axiom(&self) -> &'static str {
        match self {
            StructuralError::Empty => "nonempty",
            StructuralError::NotSquare { .. } => "square",
            StructuralError::InverseLength { .. } => "inverse_length",
            StructuralError::EntryOutOfRange { .. } => "range",
            StructuralError::Identity { .. } => "identity",
            StructuralError::NotLatinRow { .. } | StructuralError::NotLatinColumn { .. } => "latin",
            StructuralError::Associativity { .. } => "associativity",
            StructuralError::Inverse { .. } => "inverse",
            StructuralError::Loop { .. } => "no_loops",
            StructuralError::MultipleEdge { .. } => "no_multiple_edges",
            StructuralError::VertexCount { .. } => "vertex_count",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(#[from] StructuralError),
    #[error("invalid vertex {vertex} (graph has {count})")]
    InvalidVertex { vertex: usize, count: usize },
    #[error("invalid element {element} at vertex {vertex} (order {order})")]
    InvalidElement { vertex: usize, element: usize, order: usize },
    #[error("identity letter at vertex {vertex} inside a reduced word")]
    IdentityLetter { vertex: usize },
    #[error("enumeration of {what} exceeded cap {cap}")]
    EnumerationCap { what: &'static str, cap: usize },
    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("D value {value:e} below guard at vertex {vertex}, element {element}")]
    SingularAverage { vertex: usize, element: usize, value: f64 },
    #[error("average vector has norm² {norm_sq} > 1 at vertex {vertex}, element {element}")]
    AverageOutsideUnitBall { vertex: usize, element: usize, norm_sq: f64 },
    #[error("slot vectors belong to different vertices ({left} vs {right})")]
    VertexMismatch { left: usize, right: usize },
    #[error("reduced distance {distance} exceeds d_cap {cap}")]
    DCapExceeded { distance: usize, cap: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },
    #[error("empty factorization")]
    EmptyFactorization,
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("two letters of one word share slot at vertex {vertex}")]
    SlotCollision { vertex: usize },
}
