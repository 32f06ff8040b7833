//! Reduction clauses over closures. Six rule shapes are fixed by the
//! calculus presentation (conditional congruence and axioms, circuit-body
//! congruence, boxing, unboxing); the remaining call-by-value rules are
//! reconstructed to cover every non-value form exactly once. Subgoals are
//! all intuitionistic; side conditions are relational checks against the
//! circuit store, so a ground reduction atom can be verified by search.

use crate::circuits::{bind_match, specimen, valid_closure, CircuitBody};
use crate::sl::{Atom, Clause, ClauseDb, ClauseGroup, ClauseInstance, Formula, MatchCtx};
use crate::syntax::{fq, is_value, newqvar, quantum_data, Const, ScopedBody, ScopedBody2, Term};
use crate::types::valid;

/// id, encoded rule, reconstructed?
pub const RULE_DOCS: &[(&str, &str, bool)] = &[
    ("ifr", "cond (if scrutinee congruence)", false),
    ("truer", "ifT", false),
    ("falser", "ifF", false),
    ("circr", "circ (circuit body congruence)", false),
    ("boxr", "box", false),
    ("unboxr", "unbox", false),
    ("revr", "rev", true),
    ("betar", "beta", true),
    ("applr", "app congruence (function)", true),
    ("apprr", "app congruence (argument)", true),
    ("prodlr", "pair congruence (left)", true),
    ("prodrr", "pair congruence (right)", true),
    ("letpr", "pair let elimination", true),
    ("letsr", "star let elimination", true),
    ("letcr", "pair let scrutinee congruence", true),
    ("sletcr", "star let scrutinee congruence", true),
];

pub fn reduction_rule_ids() -> Vec<&'static str> {
    RULE_DOCS.iter().map(|d| d.0).collect()
}

fn goal_reduct(goal: &Atom) -> Option<(u64, &Term, u64, &Term)> {
    match goal {
        Atom::Reduct(c, a, d, b) => Some((*c, a, *d, b)),
        _ => None,
    }
}

fn inst(igoals: Vec<Formula>) -> Vec<ClauseInstance> {
    vec![ClauseInstance { igoals, lgoals: vec![] }]
}

fn wf(t: &Term) -> Formula {
    Formula::atom(Atom::IsQexp(t.clone()))
}

fn fun_body_wf(body: &ScopedBody, ctx: &mut MatchCtx<'_>) -> Formula {
    let x = ctx.session.fresh();
    Formula::all(
        x,
        Formula::imp(
            Atom::IsQexp(Term::var(x)),
            Formula::atom(Atom::IsQexp(body.instantiate(&Term::var(x)))),
        ),
    )
}

fn let_body_wf(body: &ScopedBody2, ctx: &mut MatchCtx<'_>) -> Formula {
    let x = ctx.session.fresh();
    let y = ctx.session.fresh();
    Formula::all(
        x,
        Formula::all(
            y,
            Formula::imp(
                Atom::IsQexp(Term::var(x)),
                Formula::imp(
                    Atom::IsQexp(Term::var(y)),
                    Formula::atom(Atom::IsQexp(
                        body.instantiate(&Term::var(x), &Term::var(y)),
                    )),
                ),
            ),
        ),
    )
}

pub fn install(db: &mut ClauseDb) {
    db.push(Clause::new(
        "ifr",
        ClauseGroup::Reduction,
        "cond",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((b, t1, t2)), Some((b2, u1, u2))) = (a.dest_ite(), a2.dest_ite()) else {
                return vec![];
            };
            if is_value(b) || t1 != u1 || t2 != u2 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![
                Formula::atom(Atom::Reduct(c, b.clone(), c2, b2.clone())),
                wf(t1),
                wf(t2),
            ])
        },
    ));

    db.push(Clause::new(
        "truer",
        ClauseGroup::Reduction,
        "ifT",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((b, t1, t2)) = a.dest_ite() else { return vec![] };
            if *b != Term::truec() || c != c2 || a2 != t1 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) {
                return vec![];
            }
            inst(vec![wf(t1), wf(t2)])
        },
    ));

    db.push(Clause::new(
        "falser",
        ClauseGroup::Reduction,
        "ifF",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((b, t1, t2)) = a.dest_ite() else { return vec![] };
            if *b != Term::falsec() || c != c2 || a2 != t2 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) {
                return vec![];
            }
            inst(vec![wf(t1), wf(t2)])
        },
    ));

    db.push(Clause::new(
        "circr",
        ClauseGroup::Reduction,
        "circ",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((t, d, u)), Some((t2, d2, u2))) = (a.dest_circ(), a2.dest_circ()) else {
                return vec![];
            };
            if c != c2 || t != t2 || !quantum_data(t) {
                return vec![];
            }
            if !valid_closure(ctx.store, d, u) || !valid_closure(ctx.store, d2, u2) {
                return vec![];
            }
            inst(vec![Formula::atom(Atom::Reduct(d, u.clone(), d2, u2.clone()))])
        },
    ));

    db.push(Clause::new(
        "boxr",
        ClauseGroup::Reduction,
        "box",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((ty, v)) = a.dest_box_app() else { return vec![] };
            if c != c2 || !valid(ty) || !is_value(v) {
                return vec![];
            }
            let Ok(t) = specimen(newqvar(v), ty) else { return vec![] };
            let Some((t2, d, body)) = a2.dest_circ() else { return vec![] };
            if *t2 != t || *body != Term::app(v.clone(), t.clone()) {
                return vec![];
            }
            // The new circuit must be the identity over the specimen wires.
            let Ok(circ) = ctx.store.get(d) else { return vec![] };
            let wires = fq(&t);
            if circ.inputs != wires
                || circ.outputs != wires
                || !matches!(circ.body, CircuitBody::Identity(_))
            {
                return vec![];
            }
            inst(vec![wf(v)])
        },
    ));

    db.push(Clause::new(
        "unboxr",
        ClauseGroup::Reduction,
        "unbox",
        false,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((f, v)) = a.dest_app() else { return vec![] };
            let Some(circ_term) = f.dest_unbox_app() else { return vec![] };
            let Some((u, d, u_out)) = circ_term.dest_circ() else { return vec![] };
            if !quantum_data(u) || !quantum_data(u_out) || !quantum_data(v) || !is_value(v) {
                return vec![];
            }
            let Ok(Some(bb)) = bind_match(u, v) else { return vec![] };
            // The appended circuit: left part c, right part d, wired by the
            // inverse binding (live outputs of c onto inputs of d).
            let Ok(appended) = ctx.store.get(c2) else { return vec![] };
            let CircuitBody::Seq(left, right, wiring) = &appended.body else {
                return vec![];
            };
            if left.id != c || right.id != d || *wiring != bb.invert() {
                return vec![];
            }
            let Ok(c_in) = ctx.store.circ_in(c) else { return vec![] };
            if appended.inputs != c_in {
                return vec![];
            }
            // The result term renames the circuit's output data into the
            // fresh output wires of the appended circuit.
            if !quantum_data(a2) {
                return vec![];
            }
            let Ok(Some(_)) = bind_match(u_out, a2) else { return vec![] };
            if !fq(a2).iter().all(|q| appended.outputs.contains(q)) {
                return vec![];
            }
            inst(vec![wf(v), wf(a2)])
        },
    ));

    db.push(Clause::new(
        "revr",
        ClauseGroup::Reduction,
        "rev",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((f, arg)) = a.dest_app() else { return vec![] };
            if *f != Term::Con(Const::Rev) || c != c2 {
                return vec![];
            }
            let Some((u, d, u_out)) = arg.dest_circ() else { return vec![] };
            if !quantum_data(u) || !quantum_data(u_out) {
                return vec![];
            }
            let Some((r_in, r, r_out)) = a2.dest_circ() else { return vec![] };
            if r_in != u_out || r_out != u {
                return vec![];
            }
            let (Ok(d_in), Ok(d_out)) = (ctx.store.circ_in(d), ctx.store.circ_out(d)) else {
                return vec![];
            };
            let (Ok(rin), Ok(rout)) = (ctx.store.circ_in(r), ctx.store.circ_out(r)) else {
                return vec![];
            };
            if rin != d_out || rout != d_in {
                return vec![];
            }
            inst(vec![wf(a2)])
        },
    ));

    db.push(Clause::new(
        "betar",
        ClauseGroup::Reduction,
        "beta",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((f, v)) = a.dest_app() else { return vec![] };
            let Some(body) = f.dest_fun() else { return vec![] };
            if c != c2 || !is_value(v) || *a2 != body.instantiate(v) {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            let body_wf = fun_body_wf(&body, ctx);
            inst(vec![body_wf, wf(v)])
        },
    ));

    db.push(Clause::new(
        "applr",
        ClauseGroup::Reduction,
        "app-left",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((e1, e2)), Some((f1, f2))) = (a.dest_app(), a2.dest_app()) else {
                return vec![];
            };
            if is_value(e1) || e2 != f2 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![Formula::atom(Atom::Reduct(c, e1.clone(), c2, f1.clone())), wf(e2)])
        },
    ));

    db.push(Clause::new(
        "apprr",
        ClauseGroup::Reduction,
        "app-right",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((e1, e2)), Some((f1, f2))) = (a.dest_app(), a2.dest_app()) else {
                return vec![];
            };
            if !is_value(e1) || is_value(e2) || e1 != f1 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![Formula::atom(Atom::Reduct(c, e2.clone(), c2, f2.clone())), wf(e1)])
        },
    ));

    db.push(Clause::new(
        "prodlr",
        ClauseGroup::Reduction,
        "pair-left",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((e1, e2)), Some((f1, f2))) = (a.dest_prod(), a2.dest_prod()) else {
                return vec![];
            };
            if is_value(e1) || e2 != f2 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![Formula::atom(Atom::Reduct(c, e1.clone(), c2, f1.clone())), wf(e2)])
        },
    ));

    db.push(Clause::new(
        "prodrr",
        ClauseGroup::Reduction,
        "pair-right",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((e1, e2)), Some((f1, f2))) = (a.dest_prod(), a2.dest_prod()) else {
                return vec![];
            };
            if !is_value(e1) || is_value(e2) || e1 != f1 {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![Formula::atom(Atom::Reduct(c, e2.clone(), c2, f2.clone())), wf(e1)])
        },
    ));

    db.push(Clause::new(
        "letpr",
        ClauseGroup::Reduction,
        "let-pair",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((body, scrut)) = a.dest_letp() else { return vec![] };
            let Some((v, w)) = scrut.dest_prod() else { return vec![] };
            if c != c2 || !is_value(v) || !is_value(w) {
                return vec![];
            }
            if *a2 != body.instantiate(v, w) {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            let body_wf = let_body_wf(&body, ctx);
            inst(vec![body_wf, wf(v), wf(w)])
        },
    ));

    db.push(Clause::new(
        "letsr",
        ClauseGroup::Reduction,
        "let-star",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let Some((body, scrut)) = a.dest_slet() else { return vec![] };
            if c != c2 || *scrut != Term::star() || a2 != body {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) {
                return vec![];
            }
            inst(vec![wf(body)])
        },
    ));

    db.push(Clause::new(
        "letcr",
        ClauseGroup::Reduction,
        "let scrutinee congruence",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((body, scrut)), Some((body2, scrut2))) = (a.dest_letp(), a2.dest_letp())
            else {
                return vec![];
            };
            if body != body2 || is_value(scrut) {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            let body_wf = let_body_wf(&body, ctx);
            inst(vec![
                Formula::atom(Atom::Reduct(c, scrut.clone(), c2, scrut2.clone())),
                body_wf,
            ])
        },
    ));

    db.push(Clause::new(
        "sletcr",
        ClauseGroup::Reduction,
        "slet scrutinee congruence",
        true,
        |goal, ctx| {
            let Some((c, a, c2, a2)) = goal_reduct(goal) else { return vec![] };
            let (Some((body, scrut)), Some((body2, scrut2))) = (a.dest_slet(), a2.dest_slet())
            else {
                return vec![];
            };
            if body != body2 || is_value(scrut) {
                return vec![];
            }
            if !valid_closure(ctx.store, c, a) || !valid_closure(ctx.store, c2, a2) {
                return vec![];
            }
            inst(vec![
                Formula::atom(Atom::Reduct(c, scrut.clone(), c2, scrut2.clone())),
                wf(body),
            ])
        },
    ));
}
