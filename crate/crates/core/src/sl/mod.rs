//! The generic intuitionistic linear specification logic: formulas over
//! atomic judgments, sequents with an intuitionistic and a linear context,
//! backchaining clauses, derivation trees, and depth-bounded proof search.

mod clause;
mod prove;

pub use clause::{Clause, ClauseDb, ClauseGroup, ClauseInstance, MatchCtx};
pub use prove::{enumerate_splits, prove, prove_goal_list, GoalMode, ProofEnv, ProveResult, Strategy};

use crate::syntax::{free_vars, proper, Term};
use crate::types::QType;
use serde::Serialize;
use std::fmt;

/// Atomic judgments of the object language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    /// `typeof t A`: the term has the given type.
    TypeOf(Term, QType),
    /// `is_qexp t`: the term is a well-formed expression.
    IsQexp(Term),
    /// `reduct C a C' a'`: closure `[C, a]` steps to `[C', a']`; circuits
    /// are referred to by their store ids.
    Reduct(u64, Term, u64, Term),
}

impl Atom {
    /// Every term mentioned by the atom.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::TypeOf(t, _) => vec![t],
            Atom::IsQexp(t) => vec![t],
            Atom::Reduct(_, a, _, b) => vec![a, b],
        }
    }

    pub fn types(&self) -> Vec<&QType> {
        match self {
            Atom::TypeOf(_, ty) => vec![ty],
            _ => vec![],
        }
    }

    fn subst_var(&self, v: u64, arg: &Term) -> Atom {
        match self {
            Atom::TypeOf(t, ty) => Atom::TypeOf(subst_term(t, v, arg), ty.clone()),
            Atom::IsQexp(t) => Atom::IsQexp(subst_term(t, v, arg)),
            Atom::Reduct(c, a, d, b) => {
                Atom::Reduct(*c, subst_term(a, v, arg), *d, subst_term(b, v, arg))
            }
        }
    }

    fn mentions_var(&self, v: u64) -> bool {
        self.terms().iter().any(|t| free_vars(t).contains(&v))
    }
}

fn subst_term(t: &Term, v: u64, arg: &Term) -> Term {
    match t {
        Term::Var(n) if *n == v => arg.clone(),
        Term::App(a, b) => Term::App(
            Box::new(subst_term(a, v, arg)),
            Box::new(subst_term(b, v, arg)),
        ),
        Term::Abs(b) => Term::Abs(Box::new(subst_term(b, v, arg))),
        other => other.clone(),
    }
}

/// Goal formulas. Implication antecedents are atoms only. `All` carries an
/// explicit binder name drawn from the session's fresh-variable supply;
/// occurrences of `Term::Var(name)` inside the body are the bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Formula {
    Atom(Atom),
    Top,
    /// Multiplicative conjunction: the linear context splits.
    Conj(Box<Formula>, Box<Formula>),
    /// Additive conjunction: both sides see the whole linear context.
    And(Box<Formula>, Box<Formula>),
    /// Intuitionistic implication.
    Imp(Atom, Box<Formula>),
    /// Linear implication.
    Limp(Atom, Box<Formula>),
    /// Universal quantification over proper terms.
    All(u64, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn conj(a: Formula, b: Formula) -> Formula {
        Formula::Conj(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Atom, b: Formula) -> Formula {
        Formula::Imp(a, Box::new(b))
    }

    pub fn limp(a: Atom, b: Formula) -> Formula {
        Formula::Limp(a, Box::new(b))
    }

    pub fn all(v: u64, body: Formula) -> Formula {
        Formula::All(v, Box::new(body))
    }

    /// Substitutes `arg` for the free variable `v`. Binders shadow: the
    /// substitution stops below an `All` that rebinds the same name.
    pub fn subst_var(&self, v: u64, arg: &Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst_var(v, arg)),
            Formula::Top => Formula::Top,
            Formula::Conj(a, b) => {
                Formula::conj(a.subst_var(v, arg), b.subst_var(v, arg))
            }
            Formula::And(a, b) => Formula::and(a.subst_var(v, arg), b.subst_var(v, arg)),
            Formula::Imp(a, b) => Formula::imp(a.subst_var(v, arg), b.subst_var(v, arg)),
            Formula::Limp(a, b) => Formula::limp(a.subst_var(v, arg), b.subst_var(v, arg)),
            Formula::All(w, body) => {
                if *w == v {
                    self.clone()
                } else {
                    Formula::all(*w, body.subst_var(v, arg))
                }
            }
        }
    }

    /// All free term-variable names, including binder names (binders are
    /// globally fresh, so counting them free is harmless and keeps the
    /// freshness scan conservative).
    pub fn var_names(&self, out: &mut Vec<u64>) {
        match self {
            Formula::Atom(a) => {
                for t in a.terms() {
                    out.extend(free_vars(t));
                }
            }
            Formula::Top => {}
            Formula::Conj(a, b) | Formula::And(a, b) => {
                a.var_names(out);
                b.var_names(out);
            }
            Formula::Imp(a, b) | Formula::Limp(a, b) => {
                for t in a.terms() {
                    out.extend(free_vars(t));
                }
                b.var_names(out);
            }
            Formula::All(v, b) => {
                out.push(*v);
                b.var_names(out);
            }
        }
    }

    pub fn mentions_var(&self, v: u64) -> bool {
        let mut names = Vec::new();
        self.var_names(&mut names);
        names.contains(&v)
    }

    /// Checks the scoping discipline: all terms proper, and no `All` binder
    /// name collides with an enclosing binder or the given ambient names.
    pub fn well_scoped(&self, ambient: &[u64]) -> bool {
        fn go(f: &Formula, bound: &mut Vec<u64>, ambient: &[u64]) -> bool {
            match f {
                Formula::Atom(a) => a.terms().iter().all(|t| proper(t)),
                Formula::Top => true,
                Formula::Conj(a, b) | Formula::And(a, b) => {
                    go(a, bound, ambient) && go(b, bound, ambient)
                }
                Formula::Imp(a, b) | Formula::Limp(a, b) => {
                    a.terms().iter().all(|t| proper(t)) && go(b, bound, ambient)
                }
                Formula::All(v, b) => {
                    if bound.contains(v) || ambient.contains(v) {
                        return false;
                    }
                    bound.push(*v);
                    let ok = go(b, bound, ambient);
                    bound.pop();
                    ok
                }
            }
        }
        go(self, &mut Vec::new(), ambient)
    }
}

/// Intuitionistic context: a deduplicated, insertion-ordered set of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Icx(Vec<Atom>);

impl Icx {
    pub fn new() -> Icx {
        Icx(Vec::new())
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Icx {
        let mut cx = Icx::new();
        for a in atoms {
            cx.insert(a);
        }
        cx
    }

    pub fn insert(&mut self, a: Atom) {
        if !self.0.contains(&a) {
            self.0.push(a);
        }
    }

    pub fn with(&self, a: Atom) -> Icx {
        let mut cx = self.clone();
        cx.insert(a);
        cx
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.0.contains(a)
    }

    pub fn remove_all(&self, a: &Atom) -> Icx {
        Icx(self.0.iter().filter(|x| *x != a).cloned().collect())
    }

    pub fn is_subset_of(&self, other: &Icx) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Linear context: a multiset of atoms kept as an occurrence list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Lcx(Vec<Atom>);

impl Lcx {
    pub fn new() -> Lcx {
        Lcx(Vec::new())
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Lcx {
        Lcx(atoms.into_iter().collect())
    }

    pub fn push(&mut self, a: Atom) {
        self.0.push(a);
    }

    pub fn with(&self, a: Atom) -> Lcx {
        let mut cx = self.clone();
        cx.push(a);
        cx
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, a: &Atom) -> usize {
        self.0.iter().filter(|x| *x == a).count()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.count(a) > 0
    }

    /// Removes one occurrence; true if one was present.
    pub fn remove_one(&mut self, a: &Atom) -> bool {
        if let Some(pos) = self.0.iter().position(|x| x == a) {
            self.0.remove(pos);
            true
        } else {
            false
        }
    }

    /// Multiset difference `self - other`; None if `other` is not contained.
    pub fn minus(&self, other: &Lcx) -> Option<Lcx> {
        let mut left = self.clone();
        for a in other.atoms() {
            if !left.remove_one(a) {
                return None;
            }
        }
        Some(left)
    }

    /// Multiset union (occurrence concatenation).
    pub fn plus(&self, other: &Lcx) -> Lcx {
        let mut out = self.clone();
        out.0.extend(other.0.iter().cloned());
        out
    }

    pub fn same_multiset(&self, other: &Lcx) -> bool {
        self.len() == other.len() && self.minus(other).is_some()
    }

    pub fn is_submultiset_of(&self, other: &Lcx) -> bool {
        other.minus(self).is_some()
    }
}

impl FromIterator<Atom> for Lcx {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Lcx {
        Lcx(iter.into_iter().collect())
    }
}

/// A sequent: proof-height budget, intuitionistic context, linear context,
/// and goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sequent {
    pub depth: u32,
    pub icx: Icx,
    pub lcx: Lcx,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(depth: u32, icx: Icx, lcx: Lcx, goal: Formula) -> Sequent {
        Sequent { depth, icx, lcx, goal }
    }

    /// Every variable name mentioned anywhere in the sequent.
    pub fn var_names(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for a in self.icx.atoms().iter().chain(self.lcx.atoms()) {
            for t in a.terms() {
                out.extend(free_vars(t));
            }
        }
        self.goal.var_names(&mut out);
        out
    }
}

/// Rule applied at a derivation node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Step {
    LInit,
    IInit,
    TopR,
    ConjR,
    AndR,
    ImpR,
    LimpR,
    AllR { eigen: u64 },
    Backchain { clause: &'static str, igoals: usize },
}

impl Step {
    pub fn name(&self) -> String {
        match self {
            Step::LInit => "l_init".into(),
            Step::IInit => "i_init".into(),
            Step::TopR => "top_r".into(),
            Step::ConjR => "conj_r".into(),
            Step::AndR => "and_r".into(),
            Step::ImpR => "imp_r".into(),
            Step::LimpR => "limp_r".into(),
            Step::AllR { .. } => "all_r".into(),
            Step::Backchain { clause, .. } => format!("bc[{clause}]"),
        }
    }
}

/// A successful proof tree. Each node records the goal it proved, the
/// intuitionistic context it was proved under, and exactly the multiset of
/// linear atoms the subtree consumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub step: Step,
    pub icx: Icx,
    /// The linear atoms consumed by this subtree.
    pub lcx: Lcx,
    pub goal: Formula,
    pub premises: Vec<Derivation>,
    /// Whether this subtree contains a top that may absorb extra resources
    /// through a linear position. Used while assembling lazy proofs.
    pub(crate) slack: bool,
}

impl Derivation {
    /// Height: leaves are 1, inner nodes 1 + max premise height.
    pub fn height(&self) -> u32 {
        1 + self
            .premises
            .iter()
            .map(Derivation::height)
            .max()
            .unwrap_or(0)
    }

    /// The linear atoms consumed at this node.
    pub fn consumed(&self) -> &Lcx {
        &self.lcx
    }

    pub fn rule_name(&self) -> String {
        self.step.name()
    }

    /// Indented textual trace: rule name, sequent, children.
    pub fn render_trace(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        let icx = self
            .icx
            .atoms()
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let lcx = self
            .lcx
            .atoms()
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!(
            "{pad}{} :: [{icx}] ; [{lcx}] |- {}\n",
            self.rule_name(),
            self.goal
        ));
        for p in &self.premises {
            p.render_into(out, indent + 1);
        }
    }
}

/// Session-scoped fresh-variable supply. Importing a sequent bumps the
/// counter past every name it mentions, so later eigenvariables are fresh.
#[derive(Clone, Debug, Default)]
pub struct Session {
    next: u64,
}

impl Session {
    pub fn new() -> Session {
        Session { next: 0 }
    }

    pub fn import(&mut self, seq: &Sequent) {
        for n in seq.var_names() {
            self.next = self.next.max(n + 1);
        }
    }

    pub fn import_names(&mut self, names: &[u64]) {
        for n in names {
            self.next = self.next.max(n + 1);
        }
    }

    /// Fresh variable index, strictly greater than anything imported so far.
    pub fn fresh(&mut self) -> u64 {
        let n = self.next;
        self.next += 1;
        n
    }

    pub fn fresh_eigenvariable(&mut self) -> Term {
        Term::var(self.fresh())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::TypeOf(t, ty) => write!(f, "(typeof {t} {ty})"),
            Atom::IsQexp(t) => write!(f, "(is_qexp {t})"),
            Atom::Reduct(c, a, d, b) => write!(f, "(reduct #{c} {a} #{d} {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Top => write!(f, "top"),
            Formula::Conj(a, b) => write!(f, "({a} * {b})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Imp(a, b) => write!(f, "({a} => {b})"),
            Formula::Limp(a, b) => write!(f, "({a} -o {b})"),
            Formula::All(v, b) => write!(f, "(all ?v{v}. {b})"),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let icx = self
            .icx
            .atoms()
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let lcx = self
            .lcx
            .atoms()
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "[{icx}] ; [{lcx}] |-{} {}", self.depth, self.goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn session_freshness() {
        let mut s = Session::new();
        assert_eq!(s.fresh_eigenvariable(), Term::var(0));
        let seq = Sequent::new(
            1,
            Icx::new(),
            Lcx::from_atoms([Atom::IsQexp(Term::var(4))]),
            Formula::Top,
        );
        s.import(&seq);
        let v = s.fresh();
        assert!(v >= 5);
        let w = s.fresh();
        assert_ne!(v, w);
    }

    #[test]
    fn lcx_multiset_ops() {
        let a = Atom::IsQexp(Term::truec());
        let b = Atom::IsQexp(Term::star());
        let cx = Lcx::from_atoms([a.clone(), b.clone(), a.clone()]);
        assert_eq!(cx.count(&a), 2);
        let rest = cx.minus(&Lcx::from_atoms([a.clone()])).unwrap();
        assert_eq!(rest.count(&a), 1);
        assert_eq!(rest.count(&b), 1);
        assert!(cx.minus(&Lcx::from_atoms([b.clone(), b.clone()])).is_none());
        assert!(Lcx::from_atoms([b.clone(), a.clone()])
            .same_multiset(&Lcx::from_atoms([a, b])));
    }

    #[test]
    fn icx_dedups() {
        let a = Atom::IsQexp(Term::truec());
        let cx = Icx::from_atoms([a.clone(), a.clone()]);
        assert_eq!(cx.len(), 1);
    }

    #[test]
    fn formula_substitution_respects_shadowing() {
        let body = Formula::atom(Atom::IsQexp(Term::var(3)));
        let f = Formula::all(3, body.clone());
        assert_eq!(f.subst_var(3, &Term::truec()), f);
        let g = Formula::all(4, body);
        assert_eq!(
            g.subst_var(3, &Term::truec()),
            Formula::all(4, Formula::atom(Atom::IsQexp(Term::truec())))
        );
    }

    #[test]
    fn well_scoped_rejects_collisions_and_dangling() {
        let f = Formula::all(1, Formula::atom(Atom::IsQexp(Term::var(1))));
        assert!(f.well_scoped(&[]));
        assert!(!f.well_scoped(&[1]));
        let dangling = Formula::atom(Atom::IsQexp(Term::Bnd(0)));
        assert!(!dangling.well_scoped(&[]));
    }
}
