//! Well-formedness clauses: one per expression form. All subgoals are
//! intuitionistic; validity assumptions are infinitely consumable.

use super::toimpexp;
use crate::sl::{Atom, Clause, ClauseDb, ClauseGroup, ClauseInstance, Formula, MatchCtx};
use crate::syntax::{fq, quantum_data, Const, Term};
use crate::types::valid;

fn axiom() -> Vec<ClauseInstance> {
    vec![ClauseInstance { igoals: vec![], lgoals: vec![] }]
}

fn goal_term(goal: &Atom) -> Option<&Term> {
    match goal {
        Atom::IsQexp(t) => Some(t),
        _ => None,
    }
}

fn con_axiom(
    id: &'static str,
    rule: &'static str,
    want: fn(&Const) -> bool,
) -> Clause {
    Clause::new(id, ClauseGroup::WellFormedness, rule, false, move |goal, _ctx| {
        match goal_term(goal) {
            Some(Term::Con(c)) if want(c) => axiom(),
            _ => vec![],
        }
    })
}

pub fn install(db: &mut ClauseDb) {
    db.push(con_axiom("starq", "syntax: star", |c| matches!(c, Const::Star)));
    db.push(con_axiom("trueq", "syntax: true", |c| matches!(c, Const::True)));
    db.push(con_axiom("falseq", "syntax: false", |c| matches!(c, Const::False)));
    db.push(Clause::new(
        "boxq",
        ClauseGroup::WellFormedness,
        "syntax: box constant",
        false,
        |goal, _ctx| match goal_term(goal) {
            Some(Term::Con(Const::Box(t))) if valid(t) => axiom(),
            _ => vec![],
        },
    ));
    db.push(con_axiom("unboxq", "syntax: unbox constant", |c| {
        matches!(c, Const::Unbox)
    }));
    db.push(con_axiom("revq", "syntax: rev constant", |c| matches!(c, Const::Rev)));
    db.push(con_axiom("qvarq", "syntax: quantum variable", |c| {
        matches!(c, Const::Qvar(_))
    }));

    db.push(Clause::new(
        "apq",
        ClauseGroup::WellFormedness,
        "syntax: application",
        false,
        |goal, _ctx| {
            let Some((e1, e2)) = goal_term(goal).and_then(Term::dest_app) else {
                return vec![];
            };
            vec![ClauseInstance {
                igoals: vec![Formula::and(
                    Formula::atom(Atom::IsQexp(e1.clone())),
                    Formula::atom(Atom::IsQexp(e2.clone())),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "prodq",
        ClauseGroup::WellFormedness,
        "syntax: pair",
        false,
        |goal, _ctx| {
            let Some((e1, e2)) = goal_term(goal).and_then(Term::dest_prod) else {
                return vec![];
            };
            vec![ClauseInstance {
                igoals: vec![Formula::and(
                    Formula::atom(Atom::IsQexp(e1.clone())),
                    Formula::atom(Atom::IsQexp(e2.clone())),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "sletq",
        ClauseGroup::WellFormedness,
        "syntax: unit let",
        false,
        |goal, _ctx| {
            let Some((body, scrut)) = goal_term(goal).and_then(Term::dest_slet) else {
                return vec![];
            };
            vec![ClauseInstance {
                igoals: vec![Formula::and(
                    Formula::atom(Atom::IsQexp(body.clone())),
                    Formula::atom(Atom::IsQexp(scrut.clone())),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "ifq",
        ClauseGroup::WellFormedness,
        "syntax: conditional (three children)",
        false,
        |goal, _ctx| {
            let Some((c, a, b)) = goal_term(goal).and_then(Term::dest_ite) else {
                return vec![];
            };
            vec![ClauseInstance {
                igoals: vec![Formula::and(
                    Formula::atom(Atom::IsQexp(c.clone())),
                    Formula::and(
                        Formula::atom(Atom::IsQexp(a.clone())),
                        Formula::atom(Atom::IsQexp(b.clone())),
                    ),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "lambdaq",
        ClauseGroup::WellFormedness,
        "syntax: abstraction (hypothetical)",
        false,
        |goal, ctx| {
            let Some(body) = goal_term(goal).and_then(Term::dest_fun) else {
                return vec![];
            };
            let x = ctx.session.fresh();
            let ex = body.instantiate(&Term::var(x));
            vec![ClauseInstance {
                igoals: vec![Formula::all(
                    x,
                    Formula::imp(
                        Atom::IsQexp(Term::var(x)),
                        Formula::atom(Atom::IsQexp(ex)),
                    ),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "letq",
        ClauseGroup::WellFormedness,
        "syntax: pair let (two binders)",
        false,
        |goal, ctx| {
            let Some((body, b)) = goal_term(goal).and_then(Term::dest_letp) else {
                return vec![];
            };
            let x = ctx.session.fresh();
            let y = ctx.session.fresh();
            let exy = body.instantiate(&Term::var(x), &Term::var(y));
            vec![ClauseInstance {
                igoals: vec![
                    Formula::all(
                        x,
                        Formula::all(
                            y,
                            Formula::imp(
                                Atom::IsQexp(Term::var(x)),
                                Formula::imp(
                                    Atom::IsQexp(Term::var(y)),
                                    Formula::atom(Atom::IsQexp(exy)),
                                ),
                            ),
                        ),
                    ),
                    Formula::atom(Atom::IsQexp(b.clone())),
                ],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "Circq",
        ClauseGroup::WellFormedness,
        "syntax: circuit datum",
        false,
        |goal, _ctx| {
            let Some((t, _i, a)) = goal_term(goal).and_then(Term::dest_circ) else {
                return vec![];
            };
            if !quantum_data(t) {
                return vec![];
            }
            vec![ClauseInstance {
                igoals: vec![toimpexp(&fq(a), Formula::atom(Atom::IsQexp(a.clone())))],
                lgoals: vec![],
            }]
        },
    ));
}
