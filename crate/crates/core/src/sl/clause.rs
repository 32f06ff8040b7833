//! Backchaining clauses. A clause matches an atomic goal against a
//! structural head pattern, checks its side conditions, and yields the
//! intuitionistic and linear subgoal lists for each admissible instance.

use super::{Atom, Formula, Icx, Lcx, Session};
use crate::circuits::CircuitStore;
use crate::types::QType;

/// Everything a clause may consult while matching: the current contexts
/// (for the bounded candidate generation of existential types), the circuit
/// store (for interface side conditions), a pool of candidate types, and the
/// session supply for binder names in generated subgoal formulas.
pub struct MatchCtx<'a> {
    pub icx: &'a Icx,
    pub lcx: &'a Lcx,
    pub store: &'a CircuitStore,
    pub type_pool: &'a [QType],
    pub session: &'a mut Session,
}

impl<'a> MatchCtx<'a> {
    /// Types assigned to `t` by typeof atoms in either context.
    pub fn context_types_of(&self, t: &crate::syntax::Term) -> Vec<QType> {
        let mut out: Vec<QType> = Vec::new();
        for a in self.icx.atoms().iter().chain(self.lcx.atoms()) {
            if let Atom::TypeOf(u, ty) = a {
                if u == t && !out.contains(ty) {
                    out.push(ty.clone());
                }
            }
        }
        out
    }
}

/// One admissible instantiation of a clause against a goal atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseInstance {
    pub igoals: Vec<Formula>,
    pub lgoals: Vec<Formula>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseGroup {
    WellFormedness,
    Typing,
    Reduction,
}

type Matcher = Box<dyn Fn(&Atom, &mut MatchCtx<'_>) -> Vec<ClauseInstance> + Send + Sync>;

/// A program clause: head pattern and side conditions are realized by the
/// matcher, which returns a subgoal instance per admissible instantiation.
pub struct Clause {
    pub id: &'static str,
    pub group: ClauseGroup,
    /// Standard rule this clause encodes (for the docs table).
    pub rule: &'static str,
    /// True when the clause is reconstructed rather than transcribed.
    pub reconstructed: bool,
    matcher: Matcher,
}

impl Clause {
    pub fn new(
        id: &'static str,
        group: ClauseGroup,
        rule: &'static str,
        reconstructed: bool,
        matcher: impl Fn(&Atom, &mut MatchCtx<'_>) -> Vec<ClauseInstance> + Send + Sync + 'static,
    ) -> Clause {
        Clause {
            id,
            group,
            rule,
            reconstructed,
            matcher: Box::new(matcher),
        }
    }

    pub fn instances(&self, goal: &Atom, ctx: &mut MatchCtx<'_>) -> Vec<ClauseInstance> {
        (self.matcher)(goal, ctx)
    }
}

impl std::fmt::Debug for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Clause")
            .field("id", &self.id)
            .field("group", &self.group)
            .field("rule", &self.rule)
            .field("reconstructed", &self.reconstructed)
            .finish()
    }
}

/// Ordered clause database; search tries clauses in order with backtracking,
/// so order affects performance only, never provability.
#[derive(Debug, Default)]
pub struct ClauseDb {
    clauses: Vec<Clause>,
}

impl ClauseDb {
    pub fn new() -> ClauseDb {
        ClauseDb { clauses: Vec::new() }
    }

    pub fn push(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn get(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}
