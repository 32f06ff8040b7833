//! The Proto-Quipper program: well-formedness, typing, and reduction
//! clauses for the specification logic, the goal-lifting functions that
//! move free quantum variables in front of the turnstile, and the context
//! relations used by the metatheory suites.

mod ctxrel;
mod reduction;
mod typing;
mod wf;

pub use ctxrel::{
    ctxr_check, ctxr_concat, split_subtypectx, subtypecontext_check, CtxR, CtxRStep, RelStep,
    SubtypeCtxRel,
};
pub use reduction::{reduction_rule_ids, RULE_DOCS};

use crate::sl::{Atom, ClauseDb, ClauseGroup, Formula};
use crate::syntax::Term;
use crate::types::QType;

/// Wraps a goal in well-formedness and linear typing assumptions for each
/// quantum variable, left to right: the first variable ends up outermost.
pub fn toimp(qvars: &[u64], g: Formula) -> Formula {
    let mut out = g;
    for q in qvars.iter().rev() {
        let qv = Term::qvar(*q);
        out = Formula::imp(
            Atom::IsQexp(qv.clone()),
            Formula::limp(Atom::TypeOf(qv, QType::Qubit), out),
        );
    }
    out
}

/// Like [`toimp`] but adds only the well-formedness assumptions.
pub fn toimpexp(qvars: &[u64], g: Formula) -> Formula {
    let mut out = g;
    for q in qvars.iter().rev() {
        out = Formula::imp(Atom::IsQexp(Term::qvar(*q)), out);
    }
    out
}

/// The complete clause database, in fixed order: well-formedness first,
/// then typing, then reduction.
pub fn clause_db() -> ClauseDb {
    let mut db = ClauseDb::new();
    wf::install(&mut db);
    typing::install(&mut db);
    reduction::install(&mut db);
    db
}

/// Text table mapping each clause to the inference rule it encodes.
pub fn docs_table(db: &ClauseDb) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:<16} {:<34} {}\n",
        "clause", "judgment", "rule", "origin"
    ));
    for c in db.clauses() {
        let group = match c.group {
            ClauseGroup::WellFormedness => "well-formed",
            ClauseGroup::Typing => "typing",
            ClauseGroup::Reduction => "reduction",
        };
        let origin = if c.reconstructed { "reconstructed" } else { "transcribed" };
        out.push_str(&format!("{:<10} {:<16} {:<34} {}\n", c.id, group, c.rule, origin));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl::{Formula, Icx, Lcx, MatchCtx, Session};
    use crate::circuits::CircuitStore;
    use crate::syntax::ScopedBody;
    use crate::types::QType;

    fn lift_target() -> Formula {
        Formula::atom(Atom::IsQexp(Term::star()))
    }

    #[test]
    fn toimp_worked_shape() {
        let got = toimp(&[0, 1], lift_target());
        let expect = Formula::imp(
            Atom::IsQexp(Term::qvar(0)),
            Formula::limp(
                Atom::TypeOf(Term::qvar(0), QType::Qubit),
                Formula::imp(
                    Atom::IsQexp(Term::qvar(1)),
                    Formula::limp(Atom::TypeOf(Term::qvar(1), QType::Qubit), lift_target()),
                ),
            ),
        );
        assert_eq!(got, expect);
        assert_eq!(toimp(&[], lift_target()), lift_target());
    }

    #[test]
    fn toimpexp_worked_shape() {
        let got = toimpexp(&[0, 1], lift_target());
        let expect = Formula::imp(
            Atom::IsQexp(Term::qvar(0)),
            Formula::imp(Atom::IsQexp(Term::qvar(1)), lift_target()),
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn database_is_complete() {
        let db = clause_db();
        let wf = [
            "starq", "trueq", "falseq", "boxq", "unboxq", "revq", "qvarq", "apq", "prodq",
            "sletq", "ifq", "lambdaq", "letq", "Circq",
        ];
        let typing = [
            "axc1", "axc2", "truel", "truei", "falsel", "falsei", "starl", "stari", "box",
            "unbox", "rev", "lambda1l", "lambda1i", "lambda2l", "lambda2i", "tap", "ttensorl",
            "ttensori", "tletl", "tleti", "tsletl", "tsleti", "tif", "tCricl", "tCrici",
        ];
        for id in wf.iter().chain(&typing).chain(&reduction_rule_ids()) {
            assert!(db.get(id).is_some(), "missing clause {id}");
        }
        assert_eq!(
            db.len(),
            wf.len() + typing.len() + reduction_rule_ids().len()
        );
    }

    #[test]
    fn apq_subgoal_shape() {
        let db = clause_db();
        let store = CircuitStore::new();
        let mut session = Session::new();
        let icx = Icx::new();
        let lcx = Lcx::new();
        let mut ctx = MatchCtx {
            icx: &icx,
            lcx: &lcx,
            store: &store,
            type_pool: &[],
            session: &mut session,
        };
        let e1 = Term::truec();
        let e2 = Term::star();
        let goal = Atom::IsQexp(Term::app(e1.clone(), e2.clone()));
        let insts = db.get("apq").unwrap().instances(&goal, &mut ctx);
        assert_eq!(insts.len(), 1);
        assert_eq!(
            insts[0].igoals,
            vec![Formula::and(
                Formula::atom(Atom::IsQexp(e1)),
                Formula::atom(Atom::IsQexp(e2))
            )]
        );
        assert!(insts[0].lgoals.is_empty());
    }

    #[test]
    fn lambda1l_subgoal_shape() {
        let db = clause_db();
        let store = CircuitStore::new();
        let mut session = Session::new();
        let icx = Icx::new();
        let lcx = Lcx::new();
        let mut ctx = MatchCtx {
            icx: &icx,
            lcx: &lcx,
            store: &store,
            type_pool: &[],
            session: &mut session,
        };
        let id = Term::fun(ScopedBody::new(Term::Bnd(0)).unwrap());
        let goal = Atom::TypeOf(id, QType::arrow(QType::Qubit, QType::Qubit));
        let insts = db.get("lambda1l").unwrap().instances(&goal, &mut ctx);
        assert_eq!(insts.len(), 1);
        assert!(insts[0].igoals.is_empty());
        match &insts[0].lgoals[..] {
            [Formula::All(x, body)] => {
                let expect = Formula::imp(
                    Atom::IsQexp(Term::var(*x)),
                    Formula::limp(
                        Atom::TypeOf(Term::var(*x), QType::Qubit),
                        Formula::atom(Atom::TypeOf(Term::var(*x), QType::Qubit)),
                    ),
                );
                assert_eq!(body.as_ref(), &expect);
            }
            other => panic!("unexpected lgoals: {other:?}"),
        }
    }

    #[test]
    fn truei_is_an_axiom() {
        let db = clause_db();
        let store = CircuitStore::new();
        let mut session = Session::new();
        let icx = Icx::new();
        let lcx = Lcx::new();
        let mut ctx = MatchCtx {
            icx: &icx,
            lcx: &lcx,
            store: &store,
            type_pool: &[],
            session: &mut session,
        };
        let goal = Atom::TypeOf(Term::truec(), QType::bang(QType::Bool));
        let insts = db.get("truei").unwrap().instances(&goal, &mut ctx);
        assert_eq!(
            insts,
            vec![crate::sl::ClauseInstance { igoals: vec![], lgoals: vec![] }]
        );
        // And it does not match the unbanged type.
        let goal = Atom::TypeOf(Term::truec(), QType::Bool);
        assert!(db.get("truei").unwrap().instances(&goal, &mut ctx).is_empty());
    }
}
