use super::lexer::Span;
use super::types::{Constraint, Scheme, Type};

/// Source expressions. Locals and globals share the `Var` form; the
/// typechecker resolves locals first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Lam(String, Type, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Quote(Box<Expr>),
    Splice(Box<Expr>),
    Int(i64),
    Bool(bool),
    Str(String),
    /// `ifz scrutinee then zero else nonzero`, lazy in both branches.
    Ifz(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: impl Into<String>, ty: Type, body: Expr) -> Expr {
        Expr::Lam(x.into(), ty, Box::new(body))
    }

    pub fn quote(e: Expr) -> Expr {
        Expr::Quote(Box::new(e))
    }

    pub fn splice(e: Expr) -> Expr {
        Expr::Splice(Box::new(e))
    }

    /// Every identifier occurring in the expression, bound or free.
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(x) => out.push(x.clone()),
            Expr::Lam(x, _, b) => {
                out.push(x.clone());
                b.names(out);
            }
            Expr::App(a, b) => {
                a.names(out);
                b.names(out);
            }
            Expr::Quote(e) | Expr::Splice(e) => e.names(out),
            Expr::Ifz(a, b, c) => {
                a.names(out);
                b.names(out);
                c.names(out);
            }
            Expr::Int(_) | Expr::Bool(_) | Expr::Str(_) => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Def {
        name: String,
        sig: Scheme,
        body: Expr,
    },
    Class {
        class: String,
        tyvar: String,
        method: String,
        sig: Scheme,
    },
    Instance {
        context: Vec<Constraint>,
        class: String,
        head: Type,
        method: String,
        body: Expr,
    },
}

impl Decl {
    /// The name this declaration introduces into the global namespace.
    pub fn defined_name(&self) -> &str {
        match self {
            Decl::Def { name, .. } => name,
            Decl::Class { method, .. } => method,
            Decl::Instance { method, .. } => method,
        }
    }
}

/// A node with its source position. Positions do not take part in
/// structural comparisons of the wrapped node.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub node: T,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct SourceProgram {
    pub decls: Vec<Located<Decl>>,
    pub main: Located<Expr>,
}

impl SourceProgram {
    /// Structural equality ignoring positions.
    pub fn same_tree(&self, other: &SourceProgram) -> bool {
        self.decls.len() == other.decls.len()
            && self
                .decls
                .iter()
                .zip(&other.decls)
                .all(|(a, b)| a.node == b.node)
            && self.main.node == other.main.node
    }

    /// Every identifier used anywhere in the program; fresh-name generation
    /// avoids these.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in &self.decls {
            match &d.node {
                Decl::Def { name, body, .. } => {
                    out.push(name.clone());
                    body.names(&mut out);
                }
                Decl::Class { method, .. } => out.push(method.clone()),
                Decl::Instance { method, body, .. } => {
                    out.push(method.clone());
                    body.names(&mut out);
                }
            }
        }
        self.main.node.names(&mut out);
        out
    }
}
