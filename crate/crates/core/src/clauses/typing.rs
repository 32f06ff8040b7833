//! Typing clauses. Rules whose pattern covers both the plain and the banged
//! version of a type exist as separate n=0 and n=1 clauses. Clauses with an
//! existential type argument (subsumption, application, pair elimination)
//! generate bounded candidate sets rather than guessing freely.

use super::toimp;
use crate::sl::{Atom, Clause, ClauseDb, ClauseGroup, ClauseInstance, Formula, MatchCtx};
use crate::syntax::{fq, quantum_data, Const, Term};
use crate::types::{const_type, subtype, valid, valid_t, CircConst, QType};

fn goal_typeof(goal: &Atom) -> Option<(&Term, &QType)> {
    match goal {
        Atom::TypeOf(t, ty) => Some((t, ty)),
        _ => None,
    }
}

fn axiom() -> Vec<ClauseInstance> {
    vec![ClauseInstance { igoals: vec![], lgoals: vec![] }]
}

fn con_type_axiom(
    id: &'static str,
    rule: &'static str,
    con: Const,
    ty: fn() -> QType,
) -> Clause {
    Clause::new(id, ClauseGroup::Typing, rule, false, move |goal, _ctx| {
        match goal_typeof(goal) {
            Some((Term::Con(c), t)) if *c == con && *t == ty() => axiom(),
            _ => vec![],
        }
    })
}

/// Subterms of `ty` that are shaped like a circuit-function constant type,
/// i.e. instances of the constant-type table occurring syntactically.
fn const_table_candidates(ty: &QType) -> Vec<QType> {
    let mut out = Vec::new();
    for s in ty.subterms() {
        let QType::Arrow(l, r) = s else { continue };
        match (l.as_ref(), r.as_ref()) {
            // box: !(T -o U) -o !Circ(T,U)
            (QType::Bang(f), QType::Bang(rc)) => {
                if let (QType::Arrow(t, u), QType::Circ(t2, u2)) = (f.as_ref(), rc.as_ref()) {
                    if t == t2 && u == u2 && valid(t) && valid(u) {
                        out.push(s.clone());
                    }
                }
            }
            // unbox: Circ(T,U) -o !(T -o U); rev: Circ(T,U) -o !Circ(U,T)
            (QType::Circ(t, u), QType::Bang(rr)) => match rr.as_ref() {
                QType::Arrow(t2, u2) if t == t2 && u == u2 && valid(t) && valid(u) => {
                    out.push(s.clone())
                }
                QType::Circ(u2, t2) if t == t2 && u == u2 && valid(t) && valid(u) => {
                    out.push(s.clone())
                }
                _ => {}
            },
            _ => {}
        }
    }
    out
}

/// Best-effort type candidates for a term, used only to bound the search
/// for existential argument types. Never treated as authoritative: every
/// candidate still goes through a full proof of the subgoal.
fn synthesize(t: &Term, ctx: &MatchCtx<'_>, depth: usize) -> Vec<QType> {
    let mut out: Vec<QType> = ctx.context_types_of(t);
    if depth == 0 {
        return out;
    }
    let mut push = |ty: QType| {
        if !out.contains(&ty) {
            out.push(ty);
        }
    };
    match t {
        Term::Con(Const::True) | Term::Con(Const::False) => {
            push(QType::Bool);
            push(QType::bang(QType::Bool));
        }
        Term::Con(Const::Star) => {
            push(QType::One);
            push(QType::bang(QType::One));
        }
        Term::Con(Const::Qvar(_)) => push(QType::Qubit),
        _ => {
            if quantum_data(t) {
                if let Some(shape) = qdata_shape(t) {
                    push(shape);
                }
            } else if let Some((tin, _, tout)) = t.dest_circ() {
                if let (Some(a), Some(b)) = (qdata_shape(tin), qdata_shape(tout)) {
                    push(QType::circ(a.clone(), b.clone()));
                    push(QType::bang(QType::circ(a, b)));
                }
            } else if let Some(v) = t.dest_unbox_app() {
                if let Some((tin, _, tout)) = v.dest_circ() {
                    if let (Some(a), Some(b)) = (qdata_shape(tin), qdata_shape(tout)) {
                        push(QType::bang(QType::arrow(a.clone(), b.clone())));
                        push(QType::arrow(a, b));
                    }
                }
            } else if let Some((e1, e2)) = t.dest_app() {
                let _ = e2;
                for f in synthesize(e1, ctx, depth - 1) {
                    let peeled = f.peel_bang().unwrap_or(&f);
                    if let QType::Arrow(_, r) = peeled {
                        push((**r).clone());
                    }
                }
            } else if let Some((a, b)) = t.dest_prod() {
                for ta in synthesize(a, ctx, depth - 1) {
                    for tb in synthesize(b, ctx, depth - 1) {
                        push(QType::tensor(ta.clone(), tb));
                    }
                }
            } else if let Some((_, a, b)) = t.dest_ite() {
                for ty in synthesize(a, ctx, depth - 1) {
                    push(ty);
                }
                for ty in synthesize(b, ctx, depth - 1) {
                    push(ty);
                }
            } else if let Some((body, _)) = t.dest_slet() {
                for ty in synthesize(body, ctx, depth - 1) {
                    push(ty);
                }
            }
        }
    }
    out
}

fn qdata_shape(t: &Term) -> Option<QType> {
    match t {
        Term::Con(Const::Qvar(_)) => Some(QType::Qubit),
        Term::Con(Const::Star) => Some(QType::One),
        _ => {
            let (a, b) = t.dest_prod()?;
            Some(QType::tensor(qdata_shape(a)?, qdata_shape(b)?))
        }
    }
}

/// Candidate argument types for an application: context assumptions about
/// either part, shapes synthesized from the argument, goal-directed
/// candidates when the head is a circuit-function constant, and the pool.
fn arg_type_candidates(
    e1: &Term,
    e2: &Term,
    result: &QType,
    ctx: &MatchCtx<'_>,
) -> Vec<QType> {
    let mut out: Vec<QType> = Vec::new();
    let mut push = |ty: QType| {
        if valid_t(&ty) && !out.contains(&ty) {
            out.push(ty);
        }
    };
    for ty in synthesize(e2, ctx, 3) {
        push(ty);
    }
    // Context assumptions about the function position.
    for ty in ctx.context_types_of(e1) {
        let peeled = ty.peel_bang().unwrap_or(&ty);
        if let QType::Arrow(l, _) = peeled {
            push((**l).clone());
        }
    }
    match e1 {
        Term::Con(Const::Box(t0)) => {
            // The function argument of box is !(T0 -o U); U shows up
            // syntactically in the result type.
            for s in result.subterms() {
                if valid(s) {
                    push(QType::bang(QType::arrow(t0.clone(), s.clone())));
                }
            }
        }
        Term::Con(Const::Unbox) | Term::Con(Const::Rev) => {
            for s in result.subterms() {
                if valid(s) {
                    for s2 in result.subterms() {
                        if valid(s2) {
                            push(QType::circ(s.clone(), s2.clone()));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    for ty in ctx.type_pool {
        push(ty.clone());
    }
    out
}

/// Candidates for the subsumption clauses: context assumptions about the
/// term, constant-table instances occurring in the goal type, and the
/// single-bang adjustments of the goal type.
fn subsumption_candidates(x: &Term, goal_ty: &QType, ctx: &MatchCtx<'_>) -> Vec<QType> {
    let mut out: Vec<QType> = Vec::new();
    let mut push = |ty: QType| {
        if !out.contains(&ty) {
            out.push(ty);
        }
    };
    for ty in ctx.context_types_of(x) {
        push(ty);
    }
    for ty in const_table_candidates(goal_ty) {
        push(ty);
    }
    if let Some(peeled) = goal_ty.peel_bang() {
        push(peeled.clone());
    } else {
        push(QType::bang(goal_ty.clone()));
    }
    out
}

pub fn install(db: &mut ClauseDb) {
    // Subsumption, split on whether the subtype has a leading bang. The
    // candidate type is never guessed freely; equality with the goal type is
    // excluded since it would loop without making progress.
    db.push(Clause::new(
        "axc1",
        ClauseGroup::Typing,
        "ax_c (linear premise)",
        false,
        |goal, ctx| {
            let Some((x, b)) = goal_typeof(goal) else { return vec![] };
            let mut insts = Vec::new();
            for a in subsumption_candidates(x, b, ctx) {
                if a == *b || a.is_bang() {
                    continue;
                }
                if !valid_t(&QType::bang(a.clone())) || !subtype(&a, b) {
                    continue;
                }
                insts.push(ClauseInstance {
                    igoals: vec![Formula::atom(Atom::IsQexp(x.clone()))],
                    lgoals: vec![Formula::atom(Atom::TypeOf(x.clone(), a))],
                });
            }
            insts
        },
    ));

    db.push(Clause::new(
        "axc2",
        ClauseGroup::Typing,
        "ax_c (banged, intuitionistic premise)",
        false,
        |goal, ctx| {
            let Some((x, b)) = goal_typeof(goal) else { return vec![] };
            let mut insts = Vec::new();
            for cand in subsumption_candidates(x, b, ctx) {
                let banged = if cand.is_bang() { cand } else { QType::bang(cand) };
                if banged == *b || !subtype(&banged, b) {
                    continue;
                }
                insts.push(ClauseInstance {
                    igoals: vec![Formula::and(
                        Formula::atom(Atom::TypeOf(x.clone(), banged)),
                        Formula::atom(Atom::IsQexp(x.clone())),
                    )],
                    lgoals: vec![],
                });
            }
            insts
        },
    ));

    db.push(con_type_axiom("truel", "bool intro (n=0)", Const::True, || QType::Bool));
    db.push(con_type_axiom("truei", "bool intro (n=1)", Const::True, || {
        QType::bang(QType::Bool)
    }));
    db.push(con_type_axiom("falsel", "bool intro (n=0)", Const::False, || QType::Bool));
    db.push(con_type_axiom("falsei", "bool intro (n=1)", Const::False, || {
        QType::bang(QType::Bool)
    }));
    db.push(con_type_axiom("starl", "unit intro (n=0)", Const::Star, || QType::One));
    db.push(con_type_axiom("stari", "unit intro (n=1)", Const::Star, || {
        QType::bang(QType::One)
    }));

    db.push(Clause::new(
        "box",
        ClauseGroup::Typing,
        "cst (box)",
        false,
        |goal, _ctx| {
            let Some((t, b)) = goal_typeof(goal) else { return vec![] };
            let Term::Con(Const::Box(t0)) = t else { return vec![] };
            if !valid(t0) {
                return vec![];
            }
            let mut insts = Vec::new();
            for u in b.subterms() {
                if !valid(u) {
                    continue;
                }
                let a_box = const_type(CircConst::Box, t0, u).expect("valid args");
                if subtype(&QType::bang(a_box), b) {
                    insts.push(ClauseInstance { igoals: vec![], lgoals: vec![] });
                    break;
                }
            }
            insts
        },
    ));

    db.push(Clause::new(
        "unbox",
        ClauseGroup::Typing,
        "cst (unbox)",
        false,
        |goal, _ctx| {
            let Some((t, b)) = goal_typeof(goal) else { return vec![] };
            if *t != Term::Con(Const::Unbox) {
                return vec![];
            }
            cst_instances(CircConst::Unbox, b)
        },
    ));

    db.push(Clause::new(
        "rev",
        ClauseGroup::Typing,
        "cst (rev)",
        false,
        |goal, _ctx| {
            let Some((t, b)) = goal_typeof(goal) else { return vec![] };
            if *t != Term::Con(Const::Rev) {
                return vec![];
            }
            cst_instances(CircConst::Rev, b)
        },
    ));

    // The four abstraction clauses. The subgoal of the n=0 arrow rules is
    // linear; the banged (n=1) whole-type rules move it to the
    // intuitionistic list. The bound variable is linear or intuitionistic
    // according to the bang on its own type.
    db.push(Clause::new(
        "lambda1l",
        ClauseGroup::Typing,
        "lambda_1 (linear variable)",
        false,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some(body) = t.dest_fun() else { return vec![] };
            let QType::Arrow(t1, t2) = ty else { return vec![] };
            if t1.is_bang() || !valid_t(&QType::bang((**t1).clone())) || !valid_t(t2) {
                return vec![];
            }
            let x = ctx.session.fresh();
            let ex = body.instantiate(&Term::var(x));
            vec![ClauseInstance {
                igoals: vec![],
                lgoals: vec![Formula::all(
                    x,
                    Formula::imp(
                        Atom::IsQexp(Term::var(x)),
                        Formula::limp(
                            Atom::TypeOf(Term::var(x), (**t1).clone()),
                            Formula::atom(Atom::TypeOf(ex, (**t2).clone())),
                        ),
                    ),
                )],
            }]
        },
    ));

    db.push(Clause::new(
        "lambda1i",
        ClauseGroup::Typing,
        "lambda_1 (duplicable variable)",
        false,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some(body) = t.dest_fun() else { return vec![] };
            let QType::Arrow(t1, t2) = ty else { return vec![] };
            if !t1.is_bang() || !valid_t(t1) || !valid_t(t2) {
                return vec![];
            }
            let x = ctx.session.fresh();
            let ex = body.instantiate(&Term::var(x));
            vec![ClauseInstance {
                igoals: vec![],
                lgoals: vec![Formula::all(
                    x,
                    Formula::imp(
                        Atom::IsQexp(Term::var(x)),
                        Formula::imp(
                            Atom::TypeOf(Term::var(x), (**t1).clone()),
                            Formula::atom(Atom::TypeOf(ex, (**t2).clone())),
                        ),
                    ),
                )],
            }]
        },
    ));

    db.push(Clause::new(
        "lambda2l",
        ClauseGroup::Typing,
        "lambda_2 (linear variable)",
        false,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some(body) = t.dest_fun() else { return vec![] };
            let QType::Bang(arrow) = ty else { return vec![] };
            let QType::Arrow(t1, t2) = arrow.as_ref() else { return vec![] };
            if t1.is_bang() || !valid_t(&QType::bang((**t1).clone())) || !valid_t(t2) {
                return vec![];
            }
            let x = ctx.session.fresh();
            let ex = body.instantiate(&Term::var(x));
            vec![ClauseInstance {
                igoals: vec![Formula::all(
                    x,
                    Formula::imp(
                        Atom::IsQexp(Term::var(x)),
                        Formula::limp(
                            Atom::TypeOf(Term::var(x), (**t1).clone()),
                            Formula::atom(Atom::TypeOf(ex, (**t2).clone())),
                        ),
                    ),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "lambda2i",
        ClauseGroup::Typing,
        "lambda_2 (duplicable variable)",
        false,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some(body) = t.dest_fun() else { return vec![] };
            let QType::Bang(arrow) = ty else { return vec![] };
            let QType::Arrow(t1, t2) = arrow.as_ref() else { return vec![] };
            if !t1.is_bang() || !valid_t(t1) || !valid_t(t2) {
                return vec![];
            }
            let x = ctx.session.fresh();
            let ex = body.instantiate(&Term::var(x));
            vec![ClauseInstance {
                igoals: vec![Formula::all(
                    x,
                    Formula::imp(
                        Atom::IsQexp(Term::var(x)),
                        Formula::imp(
                            Atom::TypeOf(Term::var(x), (**t1).clone()),
                            Formula::atom(Atom::TypeOf(ex, (**t2).clone())),
                        ),
                    ),
                )],
                lgoals: vec![],
            }]
        },
    ));

    db.push(Clause::new(
        "tap",
        ClauseGroup::Typing,
        "app",
        false,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((e1, e2)) = t.dest_app() else { return vec![] };
            if !valid_t(ty) {
                return vec![];
            }
            let mut insts = Vec::new();
            for targ in arg_type_candidates(e1, e2, ty, ctx) {
                if !valid_t(&QType::arrow(targ.clone(), ty.clone())) {
                    continue;
                }
                insts.push(ClauseInstance {
                    igoals: vec![],
                    lgoals: vec![Formula::conj(
                        Formula::atom(Atom::TypeOf(
                            e1.clone(),
                            QType::arrow(targ.clone(), ty.clone()),
                        )),
                        Formula::atom(Atom::TypeOf(e2.clone(), targ)),
                    )],
                });
            }
            insts
        },
    ));

    db.push(Clause::new(
        "ttensorl",
        ClauseGroup::Typing,
        "tensor intro (n=0)",
        false,
        |goal, _ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((e1, e2)) = t.dest_prod() else { return vec![] };
            let QType::Tensor(ta, tb) = ty else { return vec![] };
            if !valid_t(ty) {
                return vec![];
            }
            vec![ClauseInstance {
                igoals: vec![],
                lgoals: vec![Formula::conj(
                    Formula::atom(Atom::TypeOf(e1.clone(), (**ta).clone())),
                    Formula::atom(Atom::TypeOf(e2.clone(), (**tb).clone())),
                )],
            }]
        },
    ));

    db.push(Clause::new(
        "ttensori",
        ClauseGroup::Typing,
        "tensor intro (n=1)",
        false,
        |goal, _ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((e1, e2)) = t.dest_prod() else { return vec![] };
            let QType::Bang(inner) = ty else { return vec![] };
            let QType::Tensor(ta, tb) = inner.as_ref() else { return vec![] };
            if !valid_t(&QType::bang((**ta).clone())) || !valid_t(&QType::bang((**tb).clone()))
            {
                return vec![];
            }
            vec![ClauseInstance {
                igoals: vec![],
                lgoals: vec![Formula::conj(
                    Formula::atom(Atom::TypeOf(e1.clone(), QType::bang((**ta).clone()))),
                    Formula::atom(Atom::TypeOf(e2.clone(), QType::bang((**tb).clone()))),
                )],
            }]
        },
    ));

    // Pair elimination. The scrutinee type is existential; each bound
    // variable is linear or intuitionistic according to the bang on its
    // component (components of a banged scrutinee are all duplicable).
    db.push(Clause::new(
        "tletl",
        ClauseGroup::Typing,
        "tensor elim (n=0)",
        true,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((body, scrut)) = t.dest_letp() else { return vec![] };
            if !valid_t(ty) {
                return vec![];
            }
            let mut insts = Vec::new();
            for cand in scrutinee_tensor_candidates(scrut, ctx, false) {
                let QType::Tensor(b1, b2) = &cand else { continue };
                let x = ctx.session.fresh();
                let y = ctx.session.fresh();
                let exy = body.instantiate(&Term::var(x), &Term::var(y));
                let inner = Formula::atom(Atom::TypeOf(exy, ty.clone()));
                let with_y = bind_component(y, (**b2).clone(), inner);
                let with_x = bind_component(x, (**b1).clone(), with_y);
                insts.push(ClauseInstance {
                    igoals: vec![],
                    lgoals: vec![Formula::conj(
                        Formula::all(
                            x,
                            Formula::all(
                                y,
                                Formula::imp(
                                    Atom::IsQexp(Term::var(x)),
                                    Formula::imp(Atom::IsQexp(Term::var(y)), with_x),
                                ),
                            ),
                        ),
                        Formula::atom(Atom::TypeOf(scrut.clone(), cand.clone())),
                    )],
                });
            }
            insts
        },
    ));

    db.push(Clause::new(
        "tleti",
        ClauseGroup::Typing,
        "tensor elim (n=1)",
        true,
        |goal, ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((body, scrut)) = t.dest_letp() else { return vec![] };
            if !valid_t(ty) {
                return vec![];
            }
            let mut insts = Vec::new();
            for cand in scrutinee_tensor_candidates(scrut, ctx, true) {
                let QType::Bang(inner_t) = &cand else { continue };
                let QType::Tensor(b1, b2) = inner_t.as_ref() else { continue };
                let x = ctx.session.fresh();
                let y = ctx.session.fresh();
                let exy = body.instantiate(&Term::var(x), &Term::var(y));
                let inner = Formula::atom(Atom::TypeOf(exy, ty.clone()));
                let ty_y = bang_join((**b2).clone());
                let ty_x = bang_join((**b1).clone());
                let with_y = Formula::imp(Atom::TypeOf(Term::var(y), ty_y), inner);
                let with_x = Formula::imp(Atom::TypeOf(Term::var(x), ty_x), with_y);
                insts.push(ClauseInstance {
                    igoals: vec![],
                    lgoals: vec![Formula::conj(
                        Formula::all(
                            x,
                            Formula::all(
                                y,
                                Formula::imp(
                                    Atom::IsQexp(Term::var(x)),
                                    Formula::imp(Atom::IsQexp(Term::var(y)), with_x),
                                ),
                            ),
                        ),
                        Formula::atom(Atom::TypeOf(scrut.clone(), cand.clone())),
                    )],
                });
            }
            insts
        },
    ));

    db.push(Clause::new(
        "tsletl",
        ClauseGroup::Typing,
        "star elim (n=0)",
        false,
        |goal, _ctx| slet_instances(goal, QType::One),
    ));
    db.push(Clause::new(
        "tsleti",
        ClauseGroup::Typing,
        "star elim (n=1)",
        false,
        |goal, _ctx| slet_instances(goal, QType::bang(QType::One)),
    ));

    db.push(Clause::new(
        "tif",
        ClauseGroup::Typing,
        "if",
        false,
        |goal, _ctx| {
            let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
            let Some((c, a, b)) = t.dest_ite() else { return vec![] };
            if !valid_t(ty) {
                return vec![];
            }
            vec![ClauseInstance {
                igoals: vec![],
                lgoals: vec![Formula::conj(
                    Formula::atom(Atom::TypeOf(c.clone(), QType::Bool)),
                    Formula::and(
                        Formula::atom(Atom::TypeOf(a.clone(), ty.clone())),
                        Formula::atom(Atom::TypeOf(b.clone(), ty.clone())),
                    ),
                )],
            }]
        },
    ));

    db.push(Clause::new(
        "tCricl",
        ClauseGroup::Typing,
        "circ (n=0)",
        false,
        |goal, ctx| circ_instances(goal, ctx, false),
    ));
    db.push(Clause::new(
        "tCrici",
        ClauseGroup::Typing,
        "circ (n=1)",
        false,
        |goal, ctx| circ_instances(goal, ctx, true),
    ));
}

fn cst_instances(c: CircConst, goal_ty: &QType) -> Vec<ClauseInstance> {
    let subs = goal_ty.subterms();
    for t in &subs {
        if !valid(t) {
            continue;
        }
        for u in &subs {
            if !valid(u) {
                continue;
            }
            let a_c = const_type(c, t, u).expect("valid args");
            if subtype(&QType::bang(a_c), goal_ty) {
                return axiom();
            }
        }
    }
    vec![]
}

fn slet_instances(goal: &Atom, scrut_ty: QType) -> Vec<ClauseInstance> {
    let Some((t, ty)) = goal_typeof(goal) else { return vec![] };
    let Some((body, scrut)) = t.dest_slet() else { return vec![] };
    if !valid_t(ty) {
        return vec![];
    }
    vec![ClauseInstance {
        igoals: vec![],
        lgoals: vec![Formula::conj(
            Formula::atom(Atom::TypeOf(body.clone(), ty.clone())),
            Formula::atom(Atom::TypeOf(scrut.clone(), scrut_ty)),
        )],
    }]
}

fn circ_instances(goal: &Atom, ctx: &MatchCtx<'_>, banged: bool) -> Vec<ClauseInstance> {
    let Some((term, ty)) = goal_typeof(goal) else { return vec![] };
    let Some((t, i, a)) = term.dest_circ() else { return vec![] };
    let inner = if banged {
        match ty {
            QType::Bang(inner) => inner.as_ref(),
            _ => return vec![],
        }
    } else {
        ty
    };
    let QType::Circ(tt, tu) = inner else { return vec![] };
    if !valid_t(inner) || !quantum_data(t) {
        return vec![];
    }
    let (Ok(ins), Ok(outs)) = (ctx.store.circ_in(i), ctx.store.circ_out(i)) else {
        return vec![];
    };
    if ins != fq(t) || outs != fq(a) {
        return vec![];
    }
    vec![ClauseInstance {
        igoals: vec![Formula::and(
            toimp(&fq(a), Formula::atom(Atom::TypeOf(a.clone(), (**tu).clone()))),
            toimp(&fq(t), Formula::atom(Atom::TypeOf(t.clone(), (**tt).clone()))),
        )],
        lgoals: vec![],
    }]
}

/// Binds a pair-elimination component variable linearly or intuitionistically
/// according to the bang on its type.
fn bind_component(v: u64, ty: QType, inner: Formula) -> Formula {
    if ty.is_bang() {
        Formula::imp(Atom::TypeOf(Term::var(v), ty), inner)
    } else {
        Formula::limp(Atom::TypeOf(Term::var(v), ty), inner)
    }
}

fn bang_join(ty: QType) -> QType {
    if ty.is_bang() {
        ty
    } else {
        QType::bang(ty)
    }
}

/// Candidate scrutinee types for pair elimination: context assumptions,
/// synthesized shapes, and the pool, filtered to (banged) tensors.
fn scrutinee_tensor_candidates(
    scrut: &Term,
    ctx: &MatchCtx<'_>,
    banged: bool,
) -> Vec<QType> {
    let mut out: Vec<QType> = Vec::new();
    let mut push = |ty: &QType| {
        let fits = match (banged, ty) {
            (false, QType::Tensor(..)) => valid_t(ty),
            (true, QType::Bang(inner)) => {
                matches!(inner.as_ref(), QType::Tensor(..)) && valid_t(ty)
            }
            _ => false,
        };
        if fits && !out.contains(ty) {
            out.push(ty.clone());
        }
    };
    for ty in synthesize(scrut, ctx, 3) {
        push(&ty);
    }
    for ty in ctx.type_pool {
        push(ty);
    }
    out
}
