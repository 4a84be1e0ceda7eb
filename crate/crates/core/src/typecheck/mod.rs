//! Level-indexed typechecking fused with elaboration to the core.
//!
//! Each declaration is processed in two passes. Inference walks the source
//! with unification variables, checking stage discipline for locals and
//! recording the instantiation of every global occurrence. After the
//! substitution is applied, elaboration walks the resolved tree, solving the
//! deferred constraints by level-aware entailment and lifting splices into
//! splice environments (positive levels) or `spdef`s (negative levels).

mod decl;
mod elab;
mod entail;
mod env;
mod infer;
mod tsp;
mod unify;

use thiserror::Error;

use crate::syntax::{Constraint, Span, Type};
use crate::Level;

pub use decl::check_program;
pub use entail::entail;
pub use env::{
    form_constraint, form_type, Axiom, ClassInfo, EnvEntry, NameSupply, Theory, TypeEnv,
};
pub use tsp::{collapse, spdefs, Tsp};
pub use unify::Subst;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound type variable `{0}`")]
    UnboundTypeVariable(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("variable `{name}` is bound at level {bound} but used at level {used}")]
    StageError {
        name: String,
        bound: Level,
        used: Level,
    },
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: Type, found: Type },
    #[error("occurs check: ?{meta} occurs in {ty}")]
    OccursCheck { meta: u32, ty: Type },
    #[error("ambiguous type: {0}")]
    AmbiguousType(String),
    #[error("no evidence for {constraint} at level {level}{hint}")]
    NoEvidence {
        constraint: Constraint,
        level: Level,
        hint: String,
    },
    #[error("instance search for {0} exceeded the depth bound")]
    InstanceSearchDepthExceeded(Constraint),
    #[error("`{0}` is already defined")]
    DuplicateName(String),
    #[error("instance {class} {head} overlaps an earlier instance")]
    OverlappingInstance { class: String, head: Type },
    #[error("instance method for {class} does not match its signature: {reason}")]
    MethodSignatureMismatch { class: String, reason: String },
    #[error("class `{class}` has no method `{method}`")]
    UnknownMethod { class: String, method: String },
    #[error("invalid method signature for class `{class}`: {reason}")]
    InvalidClassSignature { class: String, reason: String },
    #[error("instance `{0}` refers to itself but its method type is not a function type")]
    RecursiveInstance(String),
}

impl TypeErrorKind {
    /// Stable identifier used in diagnostics and corpus headers.
    pub fn code(&self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable(_) => "UnboundVariable",
            TypeErrorKind::UnboundTypeVariable(_) => "UnboundTypeVariable",
            TypeErrorKind::UnknownClass(_) => "UnknownClass",
            TypeErrorKind::StageError { .. } => "StageError",
            TypeErrorKind::Mismatch { .. } => "UnificationError",
            TypeErrorKind::OccursCheck { .. } => "OccursCheck",
            TypeErrorKind::AmbiguousType(_) => "AmbiguousType",
            TypeErrorKind::NoEvidence { .. } => "NoEvidence",
            TypeErrorKind::InstanceSearchDepthExceeded(_) => "InstanceSearchDepthExceeded",
            TypeErrorKind::DuplicateName(_) => "DuplicateName",
            TypeErrorKind::OverlappingInstance { .. } => "OverlappingInstance",
            TypeErrorKind::MethodSignatureMismatch { .. } => "MethodSignatureMismatch",
            TypeErrorKind::UnknownMethod { .. } => "UnknownMethod",
            TypeErrorKind::InvalidClassSignature { .. } => "InvalidClassSignature",
            TypeErrorKind::RecursiveInstance(_) => "RecursiveInstance",
        }
    }
}

/// A type error located at the declaration that raised it.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {kind}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
}

impl TypeError {
    pub fn code(&self) -> &'static str {
        self.kind.code()
    }
}

pub(crate) type TcResult<T> = Result<T, TypeErrorKind>;
