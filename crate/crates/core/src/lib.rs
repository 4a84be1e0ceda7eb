//! A compiler pipeline for a staged lambda calculus with type classes.
//!
//! Source programs mix quotation `[| e |]`, splicing `$( e )` and
//! single-method type classes whose constraints are tracked per level, with
//! the `CodeC` constraint form moving evidence between stages. The pipeline
//! is:
//!
//! 1. [`syntax`]: lexing, parsing and pretty-printing of source and core.
//! 2. [`typecheck`]: level-indexed typechecking fused with elaboration into
//!    an explicit System F core with splice environments and `spdef`s.
//! 3. [`lint`]: an independent typechecker for the core.
//! 4. [`eval`]: small-step call-by-value evaluation of core programs, running
//!    compile-time splices before the definitions that contain them.
//!
//! [`pipeline`] ties the stages together and [`diag`] renders errors.

pub mod corpus;
pub mod diag;
pub mod eval;
pub mod lint;
pub mod pipeline;
pub mod prelude;
pub mod syntax;
pub mod typecheck;

/// Quote depth minus splice depth of a program point.
pub type Level = i64;

pub use diag::{Diagnostic, Phase};
pub use eval::{run_program, RunOutcome, StepBudget};
pub use lint::{lint_program, LintError};
pub use pipeline::{Pipeline, PipelineError};
pub use syntax::{
    parse_core_program, parse_program, pretty_core, pretty_source, CoreProgram, ParseError,
    SourceProgram,
};
pub use typecheck::{check_program, TypeError};
