use thiserror::Error;

/// Phase of a declarative solve, used to annotate propagated errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Parse,
    Assemble,
    Solve,
    Output,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Phase::Parse => "parse",
            Phase::Assemble => "assemble",
            Phase::Solve => "solve",
            Phase::Output => "output",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("vtk format error: {0}")]
    VtkFormat(String),

    #[error("unsupported vtk cell type code {0}")]
    VtkCellType(u32),

    #[error("selector syntax error: {0}")]
    SelectorSyntax(String),

    #[error("region '{0}' is empty")]
    EmptyRegion(String),

    #[error("unknown coordinate '{0}' for this mesh dimension")]
    UnknownCoordinate(String),

    #[error("unsupported element: {0}")]
    UnsupportedElement(String),

    #[error("quadrature order {order} not available for {cell}")]
    QuadratureOrder { cell: String, order: usize },

    #[error("inverted cell {0}: non-positive Jacobian determinant")]
    InvertedCell(usize),

    #[error("syntax error in '{text}' at {pos}: {msg}")]
    Syntax {
        text: String,
        pos: usize,
        msg: String,
    },

    #[error("unknown term '{0}'")]
    UnknownTerm(String),

    #[error("term '{term}': {msg}")]
    TermArgs { term: String, msg: String },

    #[error("material '{name}': {msg}")]
    Material { name: String, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("dangling reference: {key} refers to unknown {target}")]
    DanglingReference { key: String, target: String },

    #[error("periodic matching failed: {0}")]
    PeriodicMatch(String),

    #[error("contradictory fixed values on tied dofs {0} and {1}")]
    ConflictingConstraints(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("linear solver did not converge: {iterations} iterations, residual {residual:e}")]
    LinearNoConvergence { iterations: usize, residual: f64 },

    #[error("newton did not converge after {iterations} iterations, residual {residual:e}")]
    NewtonNoConvergence { iterations: usize, residual: f64 },

    #[error("line search stalled at minimum step, residual {0:e}")]
    LineSearchStalled(f64),

    #[error("time step {step}: {source}")]
    TimeStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("dependency cycle: {0:?}")]
    DependencyCycle(Vec<String>),

    #[error("missing dependency '{0}'")]
    MissingDependency(String),

    #[error("task '{name}' failed: {source}")]
    TaskFailed {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("task '{name}' skipped, failed dependency '{root}'")]
    DependencyFailed { name: String, root: String },

    #[error("[{phase}] {source}")]
    Phased {
        phase: Phase,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_phase(self, phase: Phase) -> Self {
        match self {
            e @ Error::Phased { .. } => e,
            e => Error::Phased {
                phase,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
