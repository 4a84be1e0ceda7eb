use std::collections::BTreeSet;
use std::fmt;

/// Names of the built-in type constants and constructors. These are
/// reserved: a capitalised name outside this list (and other than `CodeC`)
/// is a class name.
pub const BASE_TYPE_NAMES: [&str; 6] = ["Int", "Bool", "String", "List", "Pair", "Code"];

/// Types shared by both languages.
///
/// Source monotypes never contain `Forall`; `Meta` only appears inside the
/// typechecker while unification is in progress.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Int,
    Bool,
    Str,
    List(Box<Type>),
    Pair(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    Code(Box<Type>),
    Forall(String, Box<Type>),
    Meta(u32),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Right-nested arrow `a1 -> a2 -> ... -> result`.
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn code(inner: Type) -> Type {
        Type::Code(Box::new(inner))
    }

    pub fn list(inner: Type) -> Type {
        Type::List(Box::new(inner))
    }

    pub fn pair(a: Type, b: Type) -> Type {
        Type::Pair(Box::new(a), Box::new(b))
    }

    pub fn forall(binders: impl IntoIterator<Item = String>, body: Type) -> Type {
        let binders: Vec<String> = binders.into_iter().collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Type::Forall(b, Box::new(acc)))
    }

    /// Name of the outermost constructor, used for instance heads.
    pub fn head_name(&self) -> &'static str {
        match self {
            Type::Var(_) | Type::Meta(_) => "Var",
            Type::Int => "Int",
            Type::Bool => "Bool",
            Type::Str => "String",
            Type::List(_) => "List",
            Type::Pair(..) => "Pair",
            Type::Arrow(..) => "Arrow",
            Type::Code(_) => "Code",
            Type::Forall(..) => "Forall",
        }
    }

    pub fn is_mono(&self) -> bool {
        match self {
            Type::Forall(..) => false,
            Type::Var(_) | Type::Meta(_) | Type::Int | Type::Bool | Type::Str => true,
            Type::List(t) | Type::Code(t) => t.is_mono(),
            Type::Pair(a, b) | Type::Arrow(a, b) => a.is_mono() && b.is_mono(),
        }
    }

    pub fn has_metas(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, Type::Meta(_)));
        found
    }

    pub fn metas(&self, out: &mut Vec<u32>) {
        self.visit(&mut |t| {
            if let Type::Meta(m) = t {
                if !out.contains(m) {
                    out.push(*m);
                }
            }
        });
    }

    fn visit(&self, f: &mut impl FnMut(&Type)) {
        f(self);
        match self {
            Type::List(t) | Type::Code(t) | Type::Forall(_, t) => t.visit(f),
            Type::Pair(a, b) | Type::Arrow(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Type::Var(_) | Type::Meta(_) | Type::Int | Type::Bool | Type::Str => {}
        }
    }

    /// Free type variables, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Type::Var(a) => {
                if !bound.contains(a) && !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Type::Forall(a, body) => {
                bound.push(a.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Type::List(t) | Type::Code(t) => t.collect_free(bound, out),
            Type::Pair(a, b) | Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Meta(_) | Type::Int | Type::Bool | Type::Str => {}
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        self.free_vars().iter().any(|v| v == name)
    }

    /// Capture-avoiding substitution of `replacement` for the free variable
    /// `name`.
    pub fn subst(&self, name: &str, replacement: &Type) -> Type {
        let fv = replacement.free_vars();
        self.subst_with(name, replacement, &fv)
    }

    fn subst_with(&self, name: &str, rep: &Type, rep_fv: &[String]) -> Type {
        match self {
            Type::Var(a) if a == name => rep.clone(),
            Type::Var(_) | Type::Meta(_) | Type::Int | Type::Bool | Type::Str => self.clone(),
            Type::List(t) => Type::list(t.subst_with(name, rep, rep_fv)),
            Type::Code(t) => Type::code(t.subst_with(name, rep, rep_fv)),
            Type::Pair(a, b) => Type::pair(
                a.subst_with(name, rep, rep_fv),
                b.subst_with(name, rep, rep_fv),
            ),
            Type::Arrow(a, b) => Type::arrow(
                a.subst_with(name, rep, rep_fv),
                b.subst_with(name, rep, rep_fv),
            ),
            Type::Forall(a, body) => {
                if a == name {
                    return self.clone();
                }
                if rep_fv.contains(a) && body.mentions_var(name) {
                    let mut avoid: BTreeSet<String> = rep_fv.iter().cloned().collect();
                    avoid.extend(body.free_vars());
                    avoid.insert(name.to_string());
                    let fresh = fresh_name(a, &avoid);
                    let renamed = body.subst(a, &Type::Var(fresh.clone()));
                    Type::Forall(fresh, Box::new(renamed.subst_with(name, rep, rep_fv)))
                } else {
                    Type::Forall(a.clone(), Box::new(body.subst_with(name, rep, rep_fv)))
                }
            }
        }
    }

    /// Replace metavariables using `lookup`; unresolved ones are left alone.
    pub fn map_metas(&self, lookup: &impl Fn(u32) -> Option<Type>) -> Type {
        match self {
            Type::Meta(m) => match lookup(*m) {
                Some(t) => t.map_metas(lookup),
                None => self.clone(),
            },
            Type::Var(_) | Type::Int | Type::Bool | Type::Str => self.clone(),
            Type::List(t) => Type::list(t.map_metas(lookup)),
            Type::Code(t) => Type::code(t.map_metas(lookup)),
            Type::Pair(a, b) => Type::pair(a.map_metas(lookup), b.map_metas(lookup)),
            Type::Arrow(a, b) => Type::arrow(a.map_metas(lookup), b.map_metas(lookup)),
            Type::Forall(a, b) => Type::Forall(a.clone(), Box::new(b.map_metas(lookup))),
        }
    }

    /// Equality up to renaming of `Forall` binders.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

fn alpha_eq(a: &Type, b: &Type, binders: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => {
            for (l, r) in binders.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Type::Meta(x), Type::Meta(y)) => x == y,
        (Type::Int, Type::Int) | (Type::Bool, Type::Bool) | (Type::Str, Type::Str) => true,
        (Type::List(x), Type::List(y)) | (Type::Code(x), Type::Code(y)) => alpha_eq(x, y, binders),
        (Type::Pair(a1, b1), Type::Pair(a2, b2)) | (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            alpha_eq(a1, a2, binders) && alpha_eq(b1, b2, binders)
        }
        (Type::Forall(x, bx), Type::Forall(y, by)) => {
            binders.push((x.clone(), y.clone()));
            let r = alpha_eq(bx, by, binders);
            binders.pop();
            r
        }
        _ => false,
    }
}

/// `base_N` for the smallest `N` not in `avoid`.
pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = match base.rfind('_') {
        Some(i) if base[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < base.len() => {
            &base[..i]
        }
        _ => base,
    };
    (1..)
        .map(|n| format!("{stem}_{n}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded search")
}

/// Class constraints, possibly wrapped in `CodeC`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Class(String, Type),
    Code(Box<Constraint>),
}

impl Constraint {
    pub fn class(name: impl Into<String>, arg: Type) -> Constraint {
        Constraint::Class(name.into(), arg)
    }

    /// Wrap in `n` layers of `CodeC`.
    pub fn wrap(self, n: usize) -> Constraint {
        (0..n).fold(self, |c, _| Constraint::Code(Box::new(c)))
    }

    /// Number of `CodeC` wrappers.
    pub fn depth(&self) -> usize {
        match self {
            Constraint::Class(..) => 0,
            Constraint::Code(c) => 1 + c.depth(),
        }
    }

    /// The innermost class constraint.
    pub fn base(&self) -> (&str, &Type) {
        match self {
            Constraint::Class(n, t) => (n, t),
            Constraint::Code(c) => c.base(),
        }
    }

    pub fn map_type(&self, f: &impl Fn(&Type) -> Type) -> Constraint {
        match self {
            Constraint::Class(n, t) => Constraint::Class(n.clone(), f(t)),
            Constraint::Code(c) => Constraint::Code(Box::new(c.map_type(f))),
        }
    }

    pub fn subst(&self, name: &str, rep: &Type) -> Constraint {
        self.map_type(&|t| t.subst(name, rep))
    }

    pub fn free_vars(&self) -> Vec<String> {
        self.base().1.free_vars()
    }

    pub fn alpha_eq(&self, other: &Constraint) -> bool {
        match (self, other) {
            (Constraint::Class(a, t), Constraint::Class(b, u)) => a == b && t.alpha_eq(u),
            (Constraint::Code(a), Constraint::Code(b)) => a.alpha_eq(b),
            _ => false,
        }
    }
}

/// A prenex polytype `forall a b . C1 => C2 => τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub binders: Vec<String>,
    pub context: Vec<Constraint>,
    pub ty: Type,
}

impl Scheme {
    pub fn mono(ty: Type) -> Scheme {
        Scheme {
            binders: Vec::new(),
            context: Vec::new(),
            ty,
        }
    }

    pub fn is_mono(&self) -> bool {
        self.binders.is_empty() && self.context.is_empty()
    }

    /// Substitute for a free variable (never one of the binders).
    pub fn subst(&self, name: &str, rep: &Type) -> Scheme {
        debug_assert!(!self.binders.iter().any(|b| b == name));
        Scheme {
            binders: self.binders.clone(),
            context: self.context.iter().map(|c| c.subst(name, rep)).collect(),
            ty: self.ty.subst(name, rep),
        }
    }
}

// Printing. Precedence: 0 = forall / arrow, 1 = constructor application,
// 2 = atom.

fn fmt_type(t: &Type, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Type::Var(a) => f.write_str(a),
        Type::Meta(m) => write!(f, "?{m}"),
        Type::Int => f.write_str("Int"),
        Type::Bool => f.write_str("Bool"),
        Type::Str => f.write_str("String"),
        Type::List(a) => paren(prec > 1, f, |f| {
            f.write_str("List ")?;
            fmt_type(a, 2, f)
        }),
        Type::Code(a) => paren(prec > 1, f, |f| {
            f.write_str("Code ")?;
            fmt_type(a, 2, f)
        }),
        Type::Pair(a, b) => paren(prec > 1, f, |f| {
            f.write_str("Pair ")?;
            fmt_type(a, 2, f)?;
            f.write_str(" ")?;
            fmt_type(b, 2, f)
        }),
        Type::Arrow(a, b) => paren(prec > 0, f, |f| {
            fmt_type(a, 1, f)?;
            f.write_str(" -> ")?;
            fmt_type(b, 0, f)
        }),
        Type::Forall(..) => paren(prec > 0, f, |f| {
            let mut binders = Vec::new();
            let mut body = t;
            while let Type::Forall(a, b) = body {
                binders.push(a.as_str());
                body = b;
            }
            write!(f, "forall {} . ", binders.join(" "))?;
            fmt_type(body, 0, f)
        }),
    }
}

fn paren(
    wrap: bool,
    f: &mut fmt::Formatter<'_>,
    inner: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if wrap {
        f.write_str("(")?;
        inner(f)?;
        f.write_str(")")
    } else {
        inner(f)
    }
}

/// Wrapper printing a type at constructor-argument precedence, as needed
/// after `<` in type applications or as a lambda annotation.
pub(crate) struct AtPrec<'a>(pub &'a Type, pub u8);

impl fmt::Display for AtPrec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self.0, self.1, f)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, 0, f)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Class(n, t) => {
                write!(f, "{n} ")?;
                fmt_type(t, 2, f)
            }
            Constraint::Code(c) => write!(f, "CodeC ({c})"),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.binders.is_empty() {
            write!(f, "forall {} . ", self.binders.join(" "))?;
        }
        for c in &self.context {
            write!(f, "{c} => ")?;
        }
        write!(f, "{}", self.ty)
    }
}
