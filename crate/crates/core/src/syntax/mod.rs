//! Concrete syntax, abstract syntax and printers for the source and core
//! languages.

mod core_lang;
mod lexer;
mod parser;
pub mod pretty;
mod source;
mod types;

pub use core_lang::{CoreBinding, CoreDecl, CoreEnv, CoreProgram, SpliceBinding, SpliceEnv, Term};
pub use lexer::{Span, Tok, Token};
pub use parser::{
    parse_core_program, parse_core_term, parse_core_type, parse_expr, parse_program, parse_scheme,
    parse_type, ParseError,
};
pub use pretty::{core_decl, core_env, splice_binding, term as pretty_term};
pub use pretty::{pretty_core, pretty_source};
pub use source::{Decl, Expr, Located, SourceProgram};
pub(crate) use types::fresh_name;
pub use types::{Constraint, Scheme, Type, BASE_TYPE_NAMES};
