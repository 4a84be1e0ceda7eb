use std::collections::BTreeMap;

use crate::syntax::{CoreDecl, SpliceBinding, SpliceEnv};
use crate::Level;

/// Pending splice environments indexed by the level of their contents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tsp {
    levels: BTreeMap<Level, SpliceEnv>,
}

impl Tsp {
    pub fn new() -> Tsp {
        Tsp::default()
    }

    pub fn single(level: Level, binding: SpliceBinding) -> Tsp {
        let mut t = Tsp::new();
        t.push(level, binding);
        t
    }

    pub fn is_empty(&self) -> bool {
        self.levels.values().all(|sp| sp.is_empty())
    }

    pub fn push(&mut self, level: Level, binding: SpliceBinding) {
        self.levels.entry(level).or_default().push(binding);
    }

    /// Level-pointwise union; `other`'s entries follow ours.
    pub fn merge(&mut self, other: Tsp) {
        for (level, sp) in other.levels {
            self.levels.entry(level).or_default().extend(sp);
        }
    }

    /// Remove and return the entries at `level`.
    pub fn take(&mut self, level: Level) -> SpliceEnv {
        self.levels.remove(&level).unwrap_or_default()
    }

    pub fn max_level(&self) -> Option<Level> {
        self.levels
            .iter()
            .rev()
            .find(|(_, sp)| !sp.is_empty())
            .map(|(l, _)| *l)
    }

    /// Every key is strictly below `level`.
    pub fn is_below(&self, level: Level) -> bool {
        self.max_level().is_none_or(|m| m < level)
    }

    pub fn get(&self, level: Level) -> &[SpliceBinding] {
        self.levels.get(&level).map_or(&[], |sp| sp.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Level, &SpliceBinding)> {
        self.levels
            .iter()
            .flat_map(|(l, sp)| sp.iter().map(move |b| (*l, b)))
    }
}

/// Turn the negative-level splices of a declaration into `spdef`s placed
/// before it, most negative level first.
pub fn collapse(tsp: Tsp, rest: CoreDecl) -> Vec<CoreDecl> {
    let mut out = spdefs(tsp);
    out.push(rest);
    out
}

/// The `spdef`s of a top-level splice set, most negative level first.
pub fn spdefs(tsp: Tsp) -> Vec<CoreDecl> {
    assert!(
        tsp.is_below(0),
        "top-level splices must be at negative levels"
    );
    tsp.levels
        .into_iter()
        .flat_map(|(level, sp)| {
            sp.into_iter().map(move |b| CoreDecl::SpDef {
                env: b.env,
                level,
                name: b.name,
                ty: b.ty,
                body: b.rhs,
            })
        })
        .collect()
}
