use core::fmt;

use crate::scalar::Frac;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    Empty,
    NotSquare,
    NotSymmetric {
        row: usize,
        col: usize,
    },
    /// Odd diagonal entry `gram[index][index]`.
    NotEven {
        index: usize,
        value: i64,
    },
    Degenerate,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::Empty => write!(f, "gram matrix is empty"),
            LatticeError::NotSquare => write!(f, "gram matrix is not square"),
            LatticeError::NotSymmetric { row, col } => {
                write!(f, "gram matrix is not symmetric at ({row}, {col})")
            }
            LatticeError::NotEven { index, value } => {
                write!(f, "lattice is not even: gram[{index}][{index}] = {value}")
            }
            LatticeError::Degenerate => write!(f, "gram matrix is degenerate (det = 0)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexError {
    /// A produced term has weight above the window's `max_weight`.
    WindowOverflow { weight: Frac, max_weight: Frac },
    /// A produced term lies in a sector outside the window's sector box.
    SectorOverflow,
    /// The source of a lattice operator is not a lattice vector.
    NotInLattice,
}

impl fmt::Display for VertexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexError::WindowOverflow { weight, max_weight } => write!(
                f,
                "window overflow: produced weight {weight} exceeds max weight {max_weight}"
            ),
            VertexError::SectorOverflow => write!(f, "window overflow: sector outside box"),
            VertexError::NotInLattice => write!(f, "vertex operator source is not in the lattice"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomError {
    Vertex(VertexError),
    /// `[L(m),L(n)] - (m-n)L(m+n)` did not act as a scalar.
    NonScalarDefect {
        m: i64,
        n: i64,
    },
}

impl From<VertexError> for AxiomError {
    fn from(e: VertexError) -> Self {
        AxiomError::Vertex(e)
    }
}

impl fmt::Display for AxiomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomError::Vertex(e) => e.fmt(f),
            AxiomError::NonScalarDefect { m, n } => {
                write!(f, "Virasoro defect for (m, n) = ({m}, {n}) is not a scalar")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleError {
    Vertex(VertexError),
    NotInDual,
    /// Closure stopped short of the window without an invariant subspace certificate.
    InsufficientSample,
    NotDecomposableAtWindow,
    /// An operator produced a term outside the cell its degree predicts.
    NotHomogeneous,
}

impl From<VertexError> for ModuleError {
    fn from(e: VertexError) -> Self {
        ModuleError::Vertex(e)
    }
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::Vertex(e) => e.fmt(f),
            ModuleError::NotInDual => write!(f, "coset representative is not in the dual lattice"),
            ModuleError::InsufficientSample => {
                write!(
                    f,
                    "operator sample too small to decide irreducibility at this window"
                )
            }
            ModuleError::NotDecomposableAtWindow => {
                write!(
                    f,
                    "sector grouping left a summand that is not irreducible at this window"
                )
            }
            ModuleError::NotHomogeneous => write!(f, "operator is not doubly homogeneous"),
        }
    }
}
