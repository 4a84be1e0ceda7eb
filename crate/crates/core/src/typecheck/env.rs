use std::collections::{BTreeMap, BTreeSet};

use crate::prelude::builtins;
use crate::syntax::{fresh_name, Constraint, CoreBinding, CoreEnv, Scheme, Type};
use crate::Level;

use super::{TcResult, TypeErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub name: String,
    pub tyvar: String,
    pub method: String,
    /// Method signature over `tyvar`; may be qualified but has no binders.
    pub sig: Scheme,
}

impl ClassInfo {
    /// The global type of the method: `forall a . TC a => sig`.
    pub fn method_scheme(&self) -> Scheme {
        let mut context = vec![Constraint::class(&self.name, Type::var(&self.tyvar))];
        context.extend(self.sig.context.iter().cloned());
        Scheme {
            binders: vec![self.tyvar.clone()],
            context,
            ty: self.sig.ty.clone(),
        }
    }
}

/// A global instance axiom `ev : forall b . C1 => ... => TC head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub ev: String,
    pub class: String,
    pub binders: Vec<String>,
    pub context: Vec<Constraint>,
    pub head: Type,
}

impl Axiom {
    /// One-way match of the head against `ty`, yielding the binder
    /// instantiation in binder order.
    pub fn match_head(&self, ty: &Type) -> Option<Vec<Type>> {
        let mut sub: BTreeMap<&str, Type> = BTreeMap::new();
        if !match_type(&self.head, ty, &self.binders, &mut sub) {
            return None;
        }
        self.binders
            .iter()
            .map(|b| sub.get(b.as_str()).cloned())
            .collect()
    }

    pub fn overlaps(&self, class: &str, head: &Type) -> bool {
        self.class == class
            && (matches!(self.head, Type::Var(_))
                || matches!(head, Type::Var(_))
                || self.head.head_name() == head.head_name())
    }
}

fn match_type<'a>(
    pat: &'a Type,
    ty: &Type,
    binders: &'a [String],
    sub: &mut BTreeMap<&'a str, Type>,
) -> bool {
    match (pat, ty) {
        (Type::Var(b), _) if binders.contains(b) => match sub.get(b.as_str()) {
            Some(prev) => prev == ty,
            None => {
                sub.insert(b, ty.clone());
                true
            }
        },
        (Type::List(p), Type::List(t)) | (Type::Code(p), Type::Code(t)) => {
            match_type(p, t, binders, sub)
        }
        (Type::Pair(p1, p2), Type::Pair(t1, t2)) | (Type::Arrow(p1, p2), Type::Arrow(t1, t2)) => {
            match_type(p1, t1, binders, sub) && match_type(p2, t2, binders, sub)
        }
        _ => pat == ty,
    }
}

/// The program theory P: classes, instance axioms and global values.
#[derive(Clone, Debug)]
pub struct Theory {
    classes: Vec<ClassInfo>,
    axioms: Vec<Axiom>,
    globals: Vec<(String, Scheme)>,
}

impl Default for Theory {
    fn default() -> Self {
        Theory::new()
    }
}

impl Theory {
    /// A theory holding only the builtin globals.
    pub fn new() -> Theory {
        Theory {
            classes: Vec::new(),
            axioms: Vec::new(),
            globals: builtins()
                .iter()
                .map(|b| (b.name.to_string(), b.scheme.clone()))
                .collect(),
        }
    }

    pub fn class(&self, name: &str) -> Option<&ClassInfo> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn add_class(&mut self, class: ClassInfo) {
        self.globals
            .push((class.method.clone(), class.method_scheme()));
        self.classes.push(class);
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn add_axiom(&mut self, axiom: Axiom) {
        self.axioms.push(axiom);
    }

    pub fn global(&self, name: &str) -> Option<&Scheme> {
        self.globals
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn add_global(&mut self, name: impl Into<String>, scheme: Scheme) {
        self.globals.push((name.into(), scheme));
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.global(name).is_some()
            || self.classes.iter().any(|c| c.name == name)
            || self.axioms.iter().any(|a| a.ev == name)
    }

    /// Check that a scheme only mentions known classes and type variables
    /// from `scope` or its own binders.
    pub fn check_scheme(&self, scope: &[String], s: &Scheme) -> TcResult<()> {
        let mut seen = BTreeSet::new();
        for b in &s.binders {
            if !seen.insert(b) {
                return Err(TypeErrorKind::DuplicateName(b.clone()));
            }
        }
        let in_scope = |v: &String| scope.contains(v) || s.binders.contains(v);
        for c in &s.context {
            self.check_constraint(&in_scope, c)?;
        }
        check_type_scope(&in_scope, &s.ty)
    }

    pub fn check_constraint(
        &self,
        in_scope: &impl Fn(&String) -> bool,
        c: &Constraint,
    ) -> TcResult<()> {
        let (class, ty) = c.base();
        if self.class(class).is_none() {
            return Err(TypeErrorKind::UnknownClass(class.to_string()));
        }
        check_type_scope(in_scope, ty)
    }
}

pub fn check_type_scope(in_scope: &impl Fn(&String) -> bool, ty: &Type) -> TcResult<()> {
    match ty.free_vars().into_iter().find(|v| !in_scope(v)) {
        Some(v) => Err(TypeErrorKind::UnboundTypeVariable(v)),
        None => Ok(()),
    }
}

/// Elaborate a constraint to the type of its evidence: the class method's
/// type at the given argument, with `Code` for each `CodeC`.
pub fn form_constraint(theory: &Theory, c: &Constraint) -> TcResult<Type> {
    match c {
        Constraint::Class(name, arg) => {
            let class = theory
                .class(name)
                .ok_or_else(|| TypeErrorKind::UnknownClass(name.clone()))?;
            form_type(theory, &class.sig.subst(&class.tyvar, arg))
        }
        Constraint::Code(inner) => Ok(Type::code(form_constraint(theory, inner)?)),
    }
}

/// Elaborate a scheme: qualifiers become evidence arguments and binders
/// become nested `Forall`s.
pub fn form_type(theory: &Theory, s: &Scheme) -> TcResult<Type> {
    let args = s
        .context
        .iter()
        .map(|c| form_constraint(theory, c))
        .collect::<TcResult<Vec<_>>>()?;
    Ok(Type::forall(
        s.binders.clone(),
        Type::arrows(args, s.ty.clone()),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvEntry {
    /// A λ-bound variable; `core` is its name in the elaborated term.
    Val {
        name: String,
        core: String,
        ty: Type,
        level: Level,
    },
    TyVar(String),
    /// Local evidence; `ty` caches the elaborated evidence type.
    Ev {
        name: String,
        constraint: Constraint,
        ty: Type,
        level: Level,
    },
}

/// The source typing environment Γ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    entries: Vec<EnvEntry>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn entries(&self) -> &[EnvEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn push_tyvar(&mut self, a: impl Into<String>) {
        self.entries.push(EnvEntry::TyVar(a.into()));
    }

    pub fn push_val(
        &mut self,
        name: impl Into<String>,
        core: impl Into<String>,
        ty: Type,
        level: Level,
    ) {
        self.entries.push(EnvEntry::Val {
            name: name.into(),
            core: core.into(),
            ty,
            level,
        });
    }

    pub fn push_ev(
        &mut self,
        theory: &Theory,
        name: impl Into<String>,
        constraint: Constraint,
        level: Level,
    ) -> TcResult<()> {
        let ty = form_constraint(theory, &constraint)?;
        self.entries.push(EnvEntry::Ev {
            name: name.into(),
            constraint,
            ty,
            level,
        });
        Ok(())
    }

    /// Rightmost value binding: (core name, type, level).
    pub fn lookup_val(&self, name: &str) -> Option<(&str, &Type, Level)> {
        self.entries.iter().rev().find_map(|e| match e {
            EnvEntry::Val {
                name: n,
                core,
                ty,
                level,
            } if n == name => Some((core.as_str(), ty, *level)),
            _ => None,
        })
    }

    pub fn has_tyvar(&self, a: &str) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e, EnvEntry::TyVar(x) if x == a))
    }

    /// Is `name` already used by a core-level value binder?
    pub fn binds_core_name(&self, name: &str) -> bool {
        self.entries.iter().any(|e| match e {
            EnvEntry::Val { core, .. } => core == name,
            EnvEntry::Ev { name: n, .. } => n == name,
            EnvEntry::TyVar(_) => false,
        })
    }

    /// Γ ⇝ Δ: values keep their level, evidence becomes a value binder of
    /// its evidence type.
    pub fn elab_env(&self) -> CoreEnv {
        CoreEnv(
            self.entries
                .iter()
                .map(|e| match e {
                    EnvEntry::Val {
                        core, ty, level, ..
                    } => CoreBinding::Val {
                        name: core.clone(),
                        ty: ty.clone(),
                        level: *level,
                    },
                    EnvEntry::TyVar(a) => CoreBinding::TyVar(a.clone()),
                    EnvEntry::Ev {
                        name, ty, level, ..
                    } => CoreBinding::Val {
                        name: name.clone(),
                        ty: ty.clone(),
                        level: *level,
                    },
                })
                .collect(),
        )
    }

    pub fn without(&self, name: &str) -> TypeEnv {
        TypeEnv {
            entries: self
                .entries
                .iter()
                .filter(|e| !matches!(e, EnvEntry::Ev { name: n, .. } if n == name))
                .cloned()
                .collect(),
        }
    }
}

/// Deterministic fresh names avoiding every identifier of the program.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    avoid: BTreeSet<String>,
    counters: BTreeMap<String, usize>,
}

impl NameSupply {
    pub fn new(avoid: impl IntoIterator<Item = String>) -> NameSupply {
        NameSupply {
            avoid: avoid.into_iter().collect(),
            counters: BTreeMap::new(),
        }
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.avoid.insert(name.into());
    }

    pub fn is_taken(&self, name: &str) -> bool {
        self.avoid.contains(name)
    }

    /// `prefix0`, `prefix1`, ... skipping taken names.
    pub fn fresh(&mut self, prefix: &str) -> String {
        let counter = self.counters.entry(prefix.to_string()).or_insert(0);
        loop {
            let candidate = format!("{prefix}{counter}");
            *counter += 1;
            if self.avoid.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    /// `base_N` for renaming binders.
    pub fn fresh_like(&mut self, base: &str) -> String {
        let name = fresh_name(base, &self.avoid);
        self.avoid.insert(name.clone());
        name
    }
}
