//! The stages strung together, with the exit status each failure maps to.

use thiserror::Error;

use crate::diag::{Diagnostic, Phase};
use crate::eval::{run_program_with, Rule, RunOutcome, RuntimeError, StepBudget};
use crate::lint::{lint_program, LintError};
use crate::syntax::{parse_core_program, parse_program, CoreProgram, ParseError};
use crate::typecheck::{check_program, TypeError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    /// A hand-written core program failed to lint.
    #[error(transparent)]
    Lint(LintError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    /// Elaboration produced a program that does not lint. Always a bug.
    #[error("elaborated program does not lint: {0}")]
    Internal(LintError),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Type(_) | PipelineError::Lint(_) => 1,
            PipelineError::Parse(_) => 2,
            PipelineError::Runtime(_) => 3,
            PipelineError::Internal(_) => 4,
        }
    }

    /// Stable error code, as used in corpus headers.
    pub fn code(&self) -> &'static str {
        match self {
            PipelineError::Parse(_) => "ParseError",
            PipelineError::Type(e) => e.code(),
            PipelineError::Lint(e) | PipelineError::Internal(e) => e.kind.code(),
            PipelineError::Runtime(e) => e.code(),
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        match self {
            PipelineError::Parse(e) => Diagnostic::parse(e),
            PipelineError::Type(e) => Diagnostic::typecheck(e),
            PipelineError::Lint(e) => Diagnostic::lint(e, Phase::Lint),
            PipelineError::Internal(e) => {
                let mut d = Diagnostic::lint(e, Phase::Internal);
                d.message = self.to_string();
                d
            }
            PipelineError::Runtime(e) => Diagnostic::runtime(e),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Pipeline {
    pub budget: StepBudget,
}

impl Pipeline {
    pub fn new(budget: StepBudget) -> Pipeline {
        Pipeline { budget }
    }

    /// Parse and typecheck without linting the result.
    pub fn check(&self, src: &str) -> Result<CoreProgram, PipelineError> {
        Ok(check_program(&parse_program(src)?)?)
    }

    /// Parse, typecheck and elaborate, then lint the elaborated program.
    pub fn elaborate(&self, src: &str) -> Result<CoreProgram, PipelineError> {
        let core = self.check(src)?;
        lint_program(&core).map_err(PipelineError::Internal)?;
        Ok(core)
    }

    /// Lint a core program given as text.
    pub fn lint_core(&self, src: &str) -> Result<CoreProgram, PipelineError> {
        let core = parse_core_program(src)?;
        lint_program(&core).map_err(PipelineError::Lint)?;
        Ok(core)
    }

    pub fn run(&self, src: &str) -> Result<RunOutcome, PipelineError> {
        self.run_traced(src, |_, _, _| {})
    }

    pub fn run_traced(
        &self,
        src: &str,
        on_step: impl FnMut(u64, Rule, &CoreProgram),
    ) -> Result<RunOutcome, PipelineError> {
        let core = self.elaborate(src)?;
        Ok(run_program_with(core, self.budget, on_step)?)
    }
}
