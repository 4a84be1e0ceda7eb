use std::collections::BTreeMap;

use crate::syntax::Type;

use super::{TcResult, TypeErrorKind};

/// Substitution for unification variables, kept idempotent by resolving
/// through chains on lookup.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    map: BTreeMap<u32, Type>,
    next: u32,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn fresh(&mut self) -> Type {
        let m = self.next;
        self.next += 1;
        Type::Meta(m)
    }

    /// Apply the substitution fully.
    pub fn zonk(&self, t: &Type) -> Type {
        t.map_metas(&|m| self.map.get(&m).cloned())
    }

    /// Most general unifier extension. On failure reports the two types as
    /// far as they are known.
    pub fn unify(&mut self, expected: &Type, found: &Type) -> TcResult<()> {
        match self.unify_inner(expected, found) {
            Ok(()) => Ok(()),
            Err(Failure::Occurs(meta, ty)) => Err(TypeErrorKind::OccursCheck {
                meta,
                ty: self.zonk(&ty),
            }),
            Err(Failure::Clash) => Err(TypeErrorKind::Mismatch {
                expected: self.zonk(expected),
                found: self.zonk(found),
            }),
        }
    }

    fn shallow(&self, t: &Type) -> Type {
        let mut t = t.clone();
        while let Type::Meta(m) = t {
            match self.map.get(&m) {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    fn unify_inner(&mut self, a: &Type, b: &Type) -> Result<(), Failure> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Type::Meta(x), Type::Meta(y)) if x == y => Ok(()),
            (Type::Meta(x), other) | (other, Type::Meta(x)) => {
                let other = self.zonk(other);
                let mut ms = Vec::new();
                other.metas(&mut ms);
                if ms.contains(x) {
                    return Err(Failure::Occurs(*x, other));
                }
                self.map.insert(*x, other);
                Ok(())
            }
            (Type::Var(x), Type::Var(y)) if x == y => Ok(()),
            (Type::Int, Type::Int) | (Type::Bool, Type::Bool) | (Type::Str, Type::Str) => Ok(()),
            (Type::List(x), Type::List(y)) | (Type::Code(x), Type::Code(y)) => {
                self.unify_inner(x, y)
            }
            (Type::Pair(a1, b1), Type::Pair(a2, b2))
            | (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                self.unify_inner(a1, a2)?;
                self.unify_inner(b1, b2)
            }
            _ => Err(Failure::Clash),
        }
    }
}

enum Failure {
    Occurs(u32, Type),
    Clash,
}
