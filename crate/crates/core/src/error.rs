use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cover relation contains a cycle through `{0}`")]
    CycleDetected(String),
    #[error("duplicate point name `{0}`")]
    DuplicateName(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("{what} exceeds the configured cap of {limit}{}", partial.as_ref().map(|p| format!(" ({p})")).unwrap_or_default())]
    SizeCap {
        what: &'static str,
        limit: usize,
        partial: Option<String>,
    },
    #[error("parse error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("elements belong to different algebras")]
    OwnerMismatch,
    #[error("point set is not a downset: `{0}` is missing")]
    NotDownset(String),
    #[error("operation requires a non-zero element")]
    EmptyElement,
    #[error("arithmetic on infinite codimension")]
    InfiniteCodim,
    #[error("dual map is not monotone: {0}")]
    NotMonotone(String),
    #[error("dual map is not open: {0}")]
    NotOpen(String),
    #[error("morphism is not a quotient projection")]
    NotAQuotient,
    #[error("dual map has wrong shape: {0}")]
    BadDualMap(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("term uses the {found} signature where {expected} was required")]
    WrongSignature {
        expected: &'static str,
        found: &'static str,
    },

    #[error("coloring is not monotone between `{lower}` and `{upper}`")]
    ColoringNotMonotone { lower: String, upper: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("frames do not nest: {0}")]
    FrameMismatch(String),

    #[error("family is not coherent at level {0}")]
    NotCoherent(usize),
    #[error("sequence is not Cauchy at depth {0}")]
    NotCauchyAtDepth(usize),
    #[error("bounds do not squeeze the middle sequence at term {index}, level {level}")]
    NotSqueezed { index: usize, level: usize },
    #[error("upper and lower sequences converge to different limits")]
    LimitsDiffer,
    #[error("sequence is not monotone at term {0}")]
    SequenceNotMonotone(usize),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::SizeCap { .. })
    }

    pub(crate) fn cap(what: &'static str, limit: usize) -> Self {
        Error::SizeCap {
            what,
            limit,
            partial: None,
        }
    }
}
