//! Depth-bounded goal-directed proof search for the linear specification
//! logic, with two resource-management strategies: exhaustive context
//! splitting (the reference oracle) and lazy input/output threading where
//! subgoals consume what they need and pass leftovers on, with top recorded
//! as able to absorb any remainder.

use super::clause::{ClauseDb, MatchCtx};
use super::{Atom, Derivation, Formula, Icx, Lcx, Sequent, Session, Step};
use crate::circuits::CircuitStore;
use crate::syntax::{free_vars, proper, Term};
use crate::types::QType;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Lazy,
    Exhaustive,
}

/// Everything fixed across one proof search.
pub struct ProofEnv<'a> {
    pub db: &'a ClauseDb,
    pub store: &'a CircuitStore,
    /// Extra candidate types for clauses with existential type arguments,
    /// beyond those harvested from the sequent itself.
    pub type_hints: Vec<QType>,
}

impl<'a> ProofEnv<'a> {
    pub fn new(db: &'a ClauseDb, store: &'a CircuitStore) -> ProofEnv<'a> {
        ProofEnv { db, store, type_hints: Vec::new() }
    }

    pub fn with_hints(mut self, hints: Vec<QType>) -> Self {
        self.type_hints = hints;
        self
    }
}

/// Outcome of a search. Failure at exhausted depth is distinct from running
/// out of branches with budget to spare: the latter is definitive within the
/// clause semantics, the former only means "unknown at this depth".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveResult {
    Proved(Derivation),
    Unprovable,
    DepthExhausted,
}

impl ProveResult {
    pub fn derivation(self) -> Option<Derivation> {
        match self {
            ProveResult::Proved(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, ProveResult::Proved(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalMode {
    Intuitionistic,
    Linear,
}

/// All `2^n` ordered pairs of occurrence multisets whose union is `lcx`.
pub fn enumerate_splits(lcx: &Lcx) -> Vec<(Lcx, Lcx)> {
    let atoms = lcx.atoms();
    let n = atoms.len();
    assert!(n <= 20, "linear context too large to split exhaustively");
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let mut left = Lcx::new();
        let mut right = Lcx::new();
        for (i, a) in atoms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(a.clone());
            } else {
                right.push(a.clone());
            }
        }
        out.push((left, right));
    }
    out
}

/// Proves a sequent. The session supplies eigenvariables; it is imported
/// from the sequent first so fresh names cannot collide with it.
pub fn prove(
    env: &ProofEnv<'_>,
    session: &mut Session,
    seq: &Sequent,
    strategy: Strategy,
) -> ProveResult {
    if !seq.goal.well_scoped(&context_free_vars(seq))
        || seq
            .icx
            .atoms()
            .iter()
            .chain(seq.lcx.atoms())
            .any(|a| a.terms().iter().any(|t| !proper(t)))
    {
        return ProveResult::Unprovable;
    }
    session.import(seq);
    let mut search = Search {
        db: env.db,
        store: env.store,
        pool: build_type_pool(seq, &env.type_hints),
        session,
        limit_hit: false,
    };
    let found = match strategy {
        Strategy::Exhaustive => search.solve_strict(&seq.icx, &seq.lcx, &seq.goal, seq.depth),
        Strategy::Lazy => {
            let sols = search.solve_lazy(&seq.icx, &seq.lcx, &seq.goal, seq.depth);
            pick_lazy_solution(sols)
        }
    };
    match found {
        Some(d) => ProveResult::Proved(d),
        None if search.limit_hit => ProveResult::DepthExhausted,
        None => ProveResult::Unprovable,
    }
}

/// Proves a list of goals. Intuitionistic mode proves each goal under an
/// empty linear context; linear mode distributes the context so that every
/// occurrence is consumed by exactly one goal.
pub fn prove_goal_list(
    env: &ProofEnv<'_>,
    session: &mut Session,
    depth: u32,
    icx: &Icx,
    lcx: &Lcx,
    goals: &[Formula],
    mode: GoalMode,
    strategy: Strategy,
) -> Option<Vec<Derivation>> {
    if mode == GoalMode::Intuitionistic && !lcx.is_empty() {
        return None;
    }
    let mut names: Vec<u64> = Vec::new();
    for a in icx.atoms().iter().chain(lcx.atoms()) {
        for t in a.terms() {
            names.extend(free_vars(t));
        }
    }
    for g in goals {
        g.var_names(&mut names);
    }
    session.import_names(&names);
    let mut hints = Vec::new();
    for g in goals {
        collect_formula_types(g, &mut hints);
    }
    let seq_stub = Sequent::new(depth, icx.clone(), lcx.clone(), Formula::Top);
    let mut search = Search {
        db: env.db,
        store: env.store,
        pool: build_type_pool(&seq_stub, &[hints, env.type_hints.clone()].concat()),
        session,
        limit_hit: false,
    };
    match mode {
        GoalMode::Intuitionistic => {
            let mut out = Vec::new();
            for g in goals {
                let d = match strategy {
                    Strategy::Exhaustive => search.solve_strict(icx, &Lcx::new(), g, depth)?,
                    Strategy::Lazy => {
                        pick_lazy_solution(search.solve_lazy(icx, &Lcx::new(), g, depth))?
                    }
                };
                out.push(d);
            }
            Some(out)
        }
        GoalMode::Linear => match strategy {
            Strategy::Exhaustive => search.solve_goal_list_strict(icx, lcx, goals, depth),
            Strategy::Lazy => {
                let sols = search.solve_list_lazy(icx, lcx, goals, depth);
                for (ds, leftover, _) in sols {
                    if leftover.is_empty() {
                        return Some(ds);
                    }
                    let mut ds = ds;
                    if let Some(idx) = ds.iter().position(|d| d.slack) {
                        absorb(&mut ds[idx], &leftover);
                        return Some(ds);
                    }
                }
                None
            }
        },
    }
}

// Binder names inside the goal must not collide with genuinely free
// variables of the contexts.
fn context_free_vars(seq: &Sequent) -> Vec<u64> {
    let mut out = Vec::new();
    for a in seq.icx.atoms().iter().chain(seq.lcx.atoms()) {
        for t in a.terms() {
            out.extend(free_vars(t));
        }
    }
    out
}

fn collect_formula_types(f: &Formula, out: &mut Vec<QType>) {
    match f {
        Formula::Atom(a) => out.extend(a.types().into_iter().cloned()),
        Formula::Top => {}
        Formula::Conj(a, b) | Formula::And(a, b) => {
            collect_formula_types(a, out);
            collect_formula_types(b, out);
        }
        Formula::Imp(a, b) | Formula::Limp(a, b) => {
            out.extend(a.types().into_iter().cloned());
            collect_formula_types(b, out);
        }
        Formula::All(_, b) => collect_formula_types(b, out),
    }
}

fn build_type_pool(seq: &Sequent, extra: &[QType]) -> Vec<QType> {
    let mut raw: Vec<QType> = Vec::new();
    for a in seq.icx.atoms().iter().chain(seq.lcx.atoms()) {
        raw.extend(a.types().into_iter().cloned());
    }
    collect_formula_types(&seq.goal, &mut raw);
    raw.extend(extra.iter().cloned());
    let mut pool: Vec<QType> = Vec::new();
    for t in &raw {
        for s in t.subterms() {
            if !pool.contains(s) {
                pool.push(s.clone());
            }
        }
    }
    pool
}

struct Search<'a, 's> {
    db: &'a ClauseDb,
    store: &'a CircuitStore,
    pool: Vec<QType>,
    session: &'s mut Session,
    limit_hit: bool,
}

type LazySolution = (Derivation, Lcx);

fn pick_lazy_solution(sols: Vec<LazySolution>) -> Option<Derivation> {
    for (d, leftover) in &sols {
        if leftover.is_empty() {
            return Some(d.clone());
        }
        if d.slack {
            let mut d = d.clone();
            absorb(&mut d, leftover);
            return Some(d);
        }
    }
    None
}

/// Routes extra linear resources into a top node somewhere below `d`,
/// updating the consumed multiset of every node on the path.
fn absorb(d: &mut Derivation, extra: &Lcx) {
    if extra.is_empty() {
        return;
    }
    debug_assert!(d.slack, "absorb into slack-free derivation");
    d.lcx = d.lcx.plus(extra);
    match &d.step {
        Step::TopR => {}
        Step::AndR => {
            for p in &mut d.premises {
                absorb(p, extra);
            }
        }
        Step::Backchain { igoals, .. } => {
            let skip = *igoals;
            let idx = d
                .premises
                .iter()
                .enumerate()
                .skip(skip)
                .find(|(_, p)| p.slack)
                .map(|(i, _)| i)
                .expect("slack backchain node has a slack linear premise");
            absorb(&mut d.premises[idx], extra);
        }
        Step::ConjR => {
            let idx = d
                .premises
                .iter()
                .position(|p| p.slack)
                .expect("slack conj node has a slack premise");
            absorb(&mut d.premises[idx], extra);
        }
        Step::ImpR | Step::LimpR | Step::AllR { .. } => absorb(&mut d.premises[0], extra),
        Step::LInit | Step::IInit => unreachable!("init nodes are never slack"),
    }
}

impl<'a, 's> Search<'a, 's> {
    fn collect_instances(
        &mut self,
        goal: &Atom,
        icx: &Icx,
        lcx: &Lcx,
    ) -> Vec<(&'static str, usize, super::clause::ClauseInstance)> {
        let mut out = Vec::new();
        for clause in self.db.clauses() {
            let mut ctx = MatchCtx {
                icx,
                lcx,
                store: self.store,
                type_pool: &self.pool,
                session: self.session,
            };
            for inst in clause.instances(goal, &mut ctx) {
                out.push((clause.id, inst.igoals.len(), inst));
            }
        }
        out
    }

    // ----- exhaustive strategy -----

    fn solve_strict(
        &mut self,
        icx: &Icx,
        lcx: &Lcx,
        goal: &Formula,
        budget: u32,
    ) -> Option<Derivation> {
        if budget == 0 {
            self.limit_hit = true;
            return None;
        }
        match goal {
            Formula::Top => Some(Derivation {
                step: Step::TopR,
                icx: icx.clone(),
                lcx: lcx.clone(),
                goal: goal.clone(),
                premises: vec![],
                slack: true,
            }),
            Formula::Atom(a) => {
                if lcx.len() == 1 && lcx.atoms()[0] == *a {
                    return Some(leaf(Step::LInit, icx, lcx.clone(), goal));
                }
                if lcx.is_empty() && icx.contains(a) {
                    return Some(leaf(Step::IInit, icx, Lcx::new(), goal));
                }
                let insts = self.collect_instances(a, icx, lcx);
                'inst: for (cid, n_igoals, inst) in insts {
                    let mut premises = Vec::new();
                    for g in &inst.igoals {
                        match self.solve_strict(icx, &Lcx::new(), g, budget - 1) {
                            Some(d) => premises.push(d),
                            None => continue 'inst,
                        }
                    }
                    if let Some(lds) =
                        self.solve_goal_list_strict(icx, lcx, &inst.lgoals, budget - 1)
                    {
                        premises.extend(lds);
                        return Some(node(
                            Step::Backchain { clause: cid, igoals: n_igoals },
                            icx,
                            lcx.clone(),
                            goal,
                            premises,
                        ));
                    }
                }
                None
            }
            Formula::Conj(g1, g2) => {
                for (l1, l2) in enumerate_splits(lcx) {
                    if let Some(d1) = self.solve_strict(icx, &l1, g1, budget - 1) {
                        if let Some(d2) = self.solve_strict(icx, &l2, g2, budget - 1) {
                            return Some(node(
                                Step::ConjR,
                                icx,
                                lcx.clone(),
                                goal,
                                vec![d1, d2],
                            ));
                        }
                    }
                }
                None
            }
            Formula::And(g1, g2) => {
                let d1 = self.solve_strict(icx, lcx, g1, budget - 1)?;
                let d2 = self.solve_strict(icx, lcx, g2, budget - 1)?;
                Some(node(Step::AndR, icx, lcx.clone(), goal, vec![d1, d2]))
            }
            Formula::Imp(a, g) => {
                let d = self.solve_strict(&icx.with(a.clone()), lcx, g, budget - 1)?;
                Some(node(Step::ImpR, icx, lcx.clone(), goal, vec![d]))
            }
            Formula::Limp(a, g) => {
                let d = self.solve_strict(icx, &lcx.with(a.clone()), g, budget - 1)?;
                Some(node(Step::LimpR, icx, lcx.clone(), goal, vec![d]))
            }
            Formula::All(v, body) => {
                let eigen = self.session.fresh();
                let instantiated = body.subst_var(*v, &Term::var(eigen));
                let d = self.solve_strict(icx, lcx, &instantiated, budget - 1)?;
                Some(node(Step::AllR { eigen }, icx, lcx.clone(), goal, vec![d]))
            }
        }
    }

    fn solve_goal_list_strict(
        &mut self,
        icx: &Icx,
        lcx: &Lcx,
        goals: &[Formula],
        budget: u32,
    ) -> Option<Vec<Derivation>> {
        match goals {
            [] => {
                if lcx.is_empty() {
                    Some(vec![])
                } else {
                    None
                }
            }
            [g] => {
                let d = self.solve_strict(icx, lcx, g, budget)?;
                Some(vec![d])
            }
            [g, rest @ ..] => {
                for (here, there) in enumerate_splits(lcx) {
                    if let Some(d) = self.solve_strict(icx, &here, g, budget) {
                        if let Some(mut ds) =
                            self.solve_goal_list_strict(icx, &there, rest, budget)
                        {
                            ds.insert(0, d);
                            return Some(ds);
                        }
                    }
                }
                None
            }
        }
    }

    // ----- lazy strategy -----

    /// Returns solutions as (derivation, leftover) pairs, deduplicated by
    /// (leftover multiset, slack flag); the derivation's consumed multiset
    /// is `input - leftover`.
    fn solve_lazy(
        &mut self,
        icx: &Icx,
        input: &Lcx,
        goal: &Formula,
        budget: u32,
    ) -> Vec<LazySolution> {
        if budget == 0 {
            self.limit_hit = true;
            return vec![];
        }
        let sols = match goal {
            Formula::Top => vec![(
                Derivation {
                    step: Step::TopR,
                    icx: icx.clone(),
                    lcx: Lcx::new(),
                    goal: goal.clone(),
                    premises: vec![],
                    slack: true,
                },
                input.clone(),
            )],
            Formula::Atom(a) => {
                let mut sols = Vec::new();
                if icx.contains(a) {
                    sols.push((leaf(Step::IInit, icx, Lcx::new(), goal), input.clone()));
                }
                if input.contains(a) {
                    let mut leftover = input.clone();
                    leftover.remove_one(a);
                    sols.push((
                        leaf(Step::LInit, icx, Lcx::from_atoms([a.clone()]), goal),
                        leftover,
                    ));
                }
                let insts = self.collect_instances(a, icx, input);
                for (cid, n_igoals, inst) in insts {
                    // Intuitionistic subgoals: empty linear context each; one
                    // solution suffices since there is nothing to thread.
                    let mut ipremises = Vec::new();
                    let mut ok = true;
                    for g in &inst.igoals {
                        let mut isols = self.solve_lazy(icx, &Lcx::new(), g, budget - 1);
                        if isols.is_empty() {
                            ok = false;
                            break;
                        }
                        ipremises.push(isols.swap_remove(0).0);
                    }
                    if !ok {
                        continue;
                    }
                    for (lds, leftover, slack) in
                        self.solve_list_lazy(icx, input, &inst.lgoals, budget - 1)
                    {
                        let mut consumed = Lcx::new();
                        for d in &lds {
                            consumed = consumed.plus(&d.lcx);
                        }
                        let mut premises = ipremises.clone();
                        premises.extend(lds);
                        let d = Derivation {
                            step: Step::Backchain { clause: cid, igoals: n_igoals },
                            icx: icx.clone(),
                            lcx: consumed,
                            goal: goal.clone(),
                            premises,
                            slack,
                        };
                        sols.push((d, leftover));
                    }
                }
                sols
            }
            Formula::Conj(g1, g2) => {
                let mut sols = Vec::new();
                for (d1, left1) in self.solve_lazy(icx, input, g1, budget - 1) {
                    for (d2, left2) in self.solve_lazy(icx, &left1, g2, budget - 1) {
                        let slack = d1.slack || d2.slack;
                        let d = Derivation {
                            step: Step::ConjR,
                            icx: icx.clone(),
                            lcx: d1.lcx.plus(&d2.lcx),
                            goal: goal.clone(),
                            premises: vec![d1.clone(), d2],
                            slack,
                        };
                        sols.push((d, left2));
                    }
                }
                sols
            }
            Formula::And(g1, g2) => {
                let mut sols = Vec::new();
                let sols1 = self.solve_lazy(icx, input, g1, budget - 1);
                let sols2 = self.solve_lazy(icx, input, g2, budget - 1);
                for (d1, left1) in &sols1 {
                    for (d2, left2) in &sols2 {
                        let c1 = input.minus(left1).expect("leftover within input");
                        let c2 = input.minus(left2).expect("leftover within input");
                        let balanced = balance_additive(d1, d2, &c1, &c2);
                        if let Some((b1, b2, target)) = balanced {
                            let leftover = input.minus(&target).expect("target within input");
                            let slack = b1.slack && b2.slack;
                            let d = Derivation {
                                step: Step::AndR,
                                icx: icx.clone(),
                                lcx: target,
                                goal: goal.clone(),
                                premises: vec![b1, b2],
                                slack,
                            };
                            sols.push((d, leftover));
                        }
                    }
                }
                sols
            }
            Formula::Imp(a, g) => {
                let inner = self.solve_lazy(&icx.with(a.clone()), input, g, budget - 1);
                inner
                    .into_iter()
                    .map(|(d, left)| {
                        let slack = d.slack;
                        let lcx = d.lcx.clone();
                        (
                            Derivation {
                                step: Step::ImpR,
                                icx: icx.clone(),
                                lcx,
                                goal: goal.clone(),
                                premises: vec![d],
                                slack,
                            },
                            left,
                        )
                    })
                    .collect()
            }
            Formula::Limp(a, g) => {
                let pushed = input.with(a.clone());
                let inner = self.solve_lazy(icx, &pushed, g, budget - 1);
                let mut sols = Vec::new();
                for (mut d, mut left) in inner {
                    // The pushed occurrence must be consumed inside.
                    if left.count(a) > input.count(a) {
                        if d.slack {
                            absorb(&mut d, &Lcx::from_atoms([a.clone()]));
                            left.remove_one(a);
                        } else {
                            continue;
                        }
                    }
                    let mut outer_consumed = d.lcx.clone();
                    if !outer_consumed.remove_one(a) {
                        continue;
                    }
                    let slack = d.slack;
                    sols.push((
                        Derivation {
                            step: Step::LimpR,
                            icx: icx.clone(),
                            lcx: outer_consumed,
                            goal: goal.clone(),
                            premises: vec![d],
                            slack,
                        },
                        left,
                    ));
                }
                sols
            }
            Formula::All(v, body) => {
                let eigen = self.session.fresh();
                let instantiated = body.subst_var(*v, &Term::var(eigen));
                self.solve_lazy(icx, input, &instantiated, budget - 1)
                    .into_iter()
                    .map(|(d, left)| {
                        let slack = d.slack;
                        let lcx = d.lcx.clone();
                        (
                            Derivation {
                                step: Step::AllR { eigen },
                                icx: icx.clone(),
                                lcx,
                                goal: goal.clone(),
                                premises: vec![d],
                                slack,
                            },
                            left,
                        )
                    })
                    .collect()
            }
        };
        dedup_solutions(sols)
    }

    /// Threads the linear context through a list of goals; returns
    /// (derivations, leftover, any-slack) triples.
    fn solve_list_lazy(
        &mut self,
        icx: &Icx,
        input: &Lcx,
        goals: &[Formula],
        budget: u32,
    ) -> Vec<(Vec<Derivation>, Lcx, bool)> {
        let mut states = vec![(Vec::new(), input.clone(), false)];
        for g in goals {
            let mut next = Vec::new();
            for (ds, left, slack) in &states {
                for (d, left2) in self.solve_lazy(icx, left, g, budget) {
                    let mut ds2 = ds.clone();
                    let slack2 = *slack || d.slack;
                    ds2.push(d);
                    next.push((ds2, left2, slack2));
                }
            }
            states = dedup_list_states(next);
        }
        states
    }
}

/// Makes both additive premises consume the same multiset, absorbing the
/// difference into whichever side has slack.
fn balance_additive(
    d1: &Derivation,
    d2: &Derivation,
    c1: &Lcx,
    c2: &Lcx,
) -> Option<(Derivation, Derivation, Lcx)> {
    if c1.same_multiset(c2) {
        return Some((d1.clone(), d2.clone(), c1.clone()));
    }
    if d1.slack {
        if let Some(diff) = c2.minus(c1) {
            let mut b1 = d1.clone();
            absorb(&mut b1, &diff);
            return Some((b1, d2.clone(), c2.clone()));
        }
    }
    if d2.slack {
        if let Some(diff) = c1.minus(c2) {
            let mut b2 = d2.clone();
            absorb(&mut b2, &diff);
            return Some((d1.clone(), b2, c1.clone()));
        }
    }
    if d1.slack && d2.slack {
        let target = multiset_max(c1, c2);
        let mut b1 = d1.clone();
        let mut b2 = d2.clone();
        absorb(&mut b1, &target.minus(c1).expect("max dominates"));
        absorb(&mut b2, &target.minus(c2).expect("max dominates"));
        return Some((b1, b2, target));
    }
    None
}

fn multiset_max(a: &Lcx, b: &Lcx) -> Lcx {
    let mut out = a.clone();
    let mut seen: Vec<&Atom> = Vec::new();
    for atom in b.atoms() {
        if seen.contains(&atom) {
            continue;
        }
        seen.push(atom);
        let extra = b.count(atom).saturating_sub(a.count(atom));
        for _ in 0..extra {
            out.push(atom.clone());
        }
    }
    out
}

fn dedup_solutions(sols: Vec<LazySolution>) -> Vec<LazySolution> {
    let mut seen: BTreeSet<(Vec<Atom>, bool)> = BTreeSet::new();
    let mut out = Vec::new();
    for (d, left) in sols {
        let mut key: Vec<Atom> = left.atoms().to_vec();
        key.sort();
        if seen.insert((key, d.slack)) {
            out.push((d, left));
        }
    }
    out
}

fn dedup_list_states(
    states: Vec<(Vec<Derivation>, Lcx, bool)>,
) -> Vec<(Vec<Derivation>, Lcx, bool)> {
    let mut seen: BTreeSet<(Vec<Atom>, bool)> = BTreeSet::new();
    let mut out = Vec::new();
    for (ds, left, slack) in states {
        let mut key: Vec<Atom> = left.atoms().to_vec();
        key.sort();
        if seen.insert((key, slack)) {
            out.push((ds, left, slack));
        }
    }
    out
}

fn leaf(step: Step, icx: &Icx, lcx: Lcx, goal: &Formula) -> Derivation {
    Derivation {
        step,
        icx: icx.clone(),
        lcx,
        goal: goal.clone(),
        premises: vec![],
        slack: false,
    }
}

fn node(step: Step, icx: &Icx, lcx: Lcx, goal: &Formula, premises: Vec<Derivation>) -> Derivation {
    let slack = match &step {
        Step::AndR => premises.iter().all(|p| p.slack),
        Step::Backchain { igoals, .. } => premises.iter().skip(*igoals).any(|p| p.slack),
        Step::ConjR => premises.iter().any(|p| p.slack),
        Step::ImpR | Step::LimpR | Step::AllR { .. } => premises[0].slack,
        _ => false,
    };
    Derivation {
        step,
        icx: icx.clone(),
        lcx,
        goal: goal.clone(),
        premises,
        slack,
    }
}

// ----- replay -----

/// Checks a derivation against the sequent it claims to prove: rule shapes,
/// context bookkeeping, eigenvariable freshness, clause re-matching, and the
/// height budget.
pub fn replay(env: &ProofEnv<'_>, seq: &Sequent, deriv: &Derivation) -> Result<(), String> {
    if deriv.height() > seq.depth {
        return Err(format!(
            "height {} exceeds budget {}",
            deriv.height(),
            seq.depth
        ));
    }
    if deriv.icx != seq.icx {
        return Err("root intuitionistic context mismatch".into());
    }
    if !deriv.lcx.same_multiset(&seq.lcx) {
        return Err("root linear context mismatch".into());
    }
    if deriv.goal != seq.goal {
        return Err("root goal mismatch".into());
    }
    let mut session = Session::new();
    session.import(seq);
    check_node(env, deriv, &mut session)
}

fn check_node(env: &ProofEnv<'_>, d: &Derivation, session: &mut Session) -> Result<(), String> {
    match (&d.step, &d.goal) {
        (Step::LInit, Formula::Atom(a)) => {
            if d.lcx.len() == 1 && d.lcx.atoms()[0] == *a && d.premises.is_empty() {
                Ok(())
            } else {
                Err("l_init needs the linear context to be exactly its atom".into())
            }
        }
        (Step::IInit, Formula::Atom(a)) => {
            if d.lcx.is_empty() && d.icx.contains(a) && d.premises.is_empty() {
                Ok(())
            } else {
                Err("i_init needs an empty linear context and the atom in the set".into())
            }
        }
        (Step::TopR, Formula::Top) => {
            if d.premises.is_empty() {
                Ok(())
            } else {
                Err("top has no premises".into())
            }
        }
        (Step::ConjR, Formula::Conj(g1, g2)) => {
            let [p1, p2] = premises2(d)?;
            expect(&p1.goal == g1.as_ref() && &p2.goal == g2.as_ref(), "conj premise goals")?;
            expect(p1.icx == d.icx && p2.icx == d.icx, "conj premise icx")?;
            expect(
                p1.lcx.plus(&p2.lcx).same_multiset(&d.lcx),
                "conj premises must split the consumed context",
            )?;
            check_node(env, p1, session)?;
            check_node(env, p2, session)
        }
        (Step::AndR, Formula::And(g1, g2)) => {
            let [p1, p2] = premises2(d)?;
            expect(&p1.goal == g1.as_ref() && &p2.goal == g2.as_ref(), "and premise goals")?;
            expect(
                p1.lcx.same_multiset(&d.lcx) && p2.lcx.same_multiset(&d.lcx),
                "and premises share the whole linear context",
            )?;
            check_node(env, p1, session)?;
            check_node(env, p2, session)
        }
        (Step::ImpR, Formula::Imp(a, g)) => {
            let p = premises1(d)?;
            expect(&p.goal == g.as_ref(), "imp premise goal")?;
            expect(p.icx == d.icx.with(a.clone()), "imp pushes the atom to icx")?;
            expect(p.lcx.same_multiset(&d.lcx), "imp keeps the linear context")?;
            check_node(env, p, session)
        }
        (Step::LimpR, Formula::Limp(a, g)) => {
            let p = premises1(d)?;
            expect(&p.goal == g.as_ref(), "limp premise goal")?;
            expect(p.icx == d.icx, "limp keeps icx")?;
            expect(
                p.lcx.same_multiset(&d.lcx.with(a.clone())),
                "limp pushes the atom to lcx",
            )?;
            check_node(env, p, session)
        }
        (Step::AllR { eigen }, Formula::All(v, body)) => {
            let p = premises1(d)?;
            let fresh_ok = !d
                .icx
                .atoms()
                .iter()
                .chain(d.lcx.atoms())
                .any(|at| at.mentions_var(*eigen))
                && !d.goal.mentions_var(*eigen);
            expect(fresh_ok, "eigenvariable must be fresh for the sequent")?;
            let expected = body.subst_var(*v, &Term::var(*eigen));
            expect(p.goal == expected, "all premise goal instantiation")?;
            expect(p.icx == d.icx && p.lcx.same_multiset(&d.lcx), "all contexts")?;
            session.import_names(&[*eigen]);
            check_node(env, p, session)
        }
        (Step::Backchain { clause, igoals }, Formula::Atom(a)) => {
            let cl = env
                .db
                .get(clause)
                .ok_or_else(|| format!("unknown clause {clause}"))?;
            let pool = {
                let stub = Sequent::new(1, d.icx.clone(), d.lcx.clone(), d.goal.clone());
                build_type_pool(&stub, &env.type_hints)
            };
            let mut fresh = session.clone();
            let mut ctx = MatchCtx {
                icx: &d.icx,
                lcx: &d.lcx,
                store: env.store,
                type_pool: &pool,
                session: &mut fresh,
            };
            let insts = cl.instances(a, &mut ctx);
            let m = *igoals;
            let matched = insts.iter().any(|inst| {
                inst.igoals.len() == m
                    && inst.igoals.len() + inst.lgoals.len() == d.premises.len()
                    && inst
                        .igoals
                        .iter()
                        .zip(&d.premises[..m])
                        .all(|(g, p)| alpha_eq(g, &p.goal))
                    && inst
                        .lgoals
                        .iter()
                        .zip(&d.premises[m..])
                        .all(|(g, p)| alpha_eq(g, &p.goal))
            });
            expect(matched, "backchain premises must match a clause instance")?;
            let mut linear_sum = Lcx::new();
            for (i, p) in d.premises.iter().enumerate() {
                if i < m {
                    expect(p.lcx.is_empty(), "intuitionistic subgoal consumed resources")?;
                } else {
                    linear_sum = linear_sum.plus(&p.lcx);
                }
                expect(p.icx == d.icx, "backchain premise icx")?;
            }
            expect(
                linear_sum.same_multiset(&d.lcx),
                "linear subgoals must consume exactly the node's context",
            )?;
            for p in &d.premises {
                check_node(env, p, session)?;
            }
            Ok(())
        }
        _ => Err(format!("step {:?} does not fit goal {}", d.step, d.goal)),
    }
}

fn premises1(d: &Derivation) -> Result<&Derivation, String> {
    if d.premises.len() == 1 {
        Ok(&d.premises[0])
    } else {
        Err("expected one premise".into())
    }
}

fn premises2(d: &Derivation) -> Result<[&Derivation; 2], String> {
    if d.premises.len() == 2 {
        Ok([&d.premises[0], &d.premises[1]])
    } else {
        Err("expected two premises".into())
    }
}

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Instrumented linearity check: every consumed occurrence is accounted for
/// by exactly one leaf, with additive branches each consuming their own copy
/// of the shared context.
pub fn verify_linear_exactness(d: &Derivation) -> bool {
    match &d.step {
        Step::LInit => d.lcx.len() == 1,
        Step::IInit => d.lcx.is_empty(),
        Step::TopR => true,
        Step::ConjR => {
            d.premises.len() == 2
                && d.premises[0]
                    .lcx
                    .plus(&d.premises[1].lcx)
                    .same_multiset(&d.lcx)
                && d.premises.iter().all(verify_linear_exactness)
        }
        Step::AndR => {
            d.premises.len() == 2
                && d.premises.iter().all(|p| p.lcx.same_multiset(&d.lcx))
                && d.premises.iter().all(verify_linear_exactness)
        }
        Step::ImpR | Step::AllR { .. } => {
            d.premises.len() == 1
                && d.premises[0].lcx.same_multiset(&d.lcx)
                && verify_linear_exactness(&d.premises[0])
        }
        Step::LimpR => {
            if d.premises.len() != 1 {
                return false;
            }
            match &d.goal {
                Formula::Limp(a, _) => {
                    d.premises[0].lcx.same_multiset(&d.lcx.with(a.clone()))
                        && verify_linear_exactness(&d.premises[0])
                }
                _ => false,
            }
        }
        Step::Backchain { igoals, .. } => {
            let m = *igoals;
            let mut sum = Lcx::new();
            for (i, p) in d.premises.iter().enumerate() {
                if i < m {
                    if !p.lcx.is_empty() {
                        return false;
                    }
                } else {
                    sum = sum.plus(&p.lcx);
                }
            }
            sum.same_multiset(&d.lcx) && d.premises.iter().all(verify_linear_exactness)
        }
    }
}

// ----- alpha equivalence for formulas -----

/// Structural equality modulo renaming of All-bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn term_eq(a: &Term, b: &Term, env: &[(u64, u64)]) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
            }
            (Term::App(a1, a2), Term::App(b1, b2)) => {
                term_eq(a1, b1, env) && term_eq(a2, b2, env)
            }
            (Term::Abs(a1), Term::Abs(b1)) => term_eq(a1, b1, env),
            _ => a == b,
        }
    }
    fn atom_eq(a: &Atom, b: &Atom, env: &[(u64, u64)]) -> bool {
        match (a, b) {
            (Atom::TypeOf(t1, ty1), Atom::TypeOf(t2, ty2)) => {
                ty1 == ty2 && term_eq(t1, t2, env)
            }
            (Atom::IsQexp(t1), Atom::IsQexp(t2)) => term_eq(t1, t2, env),
            (Atom::Reduct(c1, a1, d1, b1), Atom::Reduct(c2, a2, d2, b2)) => {
                c1 == c2 && d1 == d2 && term_eq(a1, a2, env) && term_eq(b1, b2, env)
            }
            _ => false,
        }
    }
    fn go(a: &Formula, b: &Formula, env: &mut Vec<(u64, u64)>) -> bool {
        match (a, b) {
            (Formula::Atom(x), Formula::Atom(y)) => atom_eq(x, y, env),
            (Formula::Top, Formula::Top) => true,
            (Formula::Conj(a1, a2), Formula::Conj(b1, b2))
            | (Formula::And(a1, a2), Formula::And(b1, b2)) => {
                go(a1, b1, env) && go(a2, b2, env)
            }
            (Formula::Imp(x, a1), Formula::Imp(y, b1))
            | (Formula::Limp(x, a1), Formula::Limp(y, b1)) => {
                atom_eq(x, y, env) && go(a1, b1, env)
            }
            (Formula::All(v, a1), Formula::All(w, b1)) => {
                env.push((*v, *w));
                let ok = go(a1, b1, env);
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::CircuitStore;
    use crate::sl::{Clause, ClauseGroup, ClauseInstance};
    use crate::syntax::Term;
    use crate::types::QType;

    fn tiny_db() -> ClauseDb {
        let mut db = ClauseDb::new();
        // is_qexp TRUE is an axiom in the toy database.
        db.push(Clause::new(
            "toy_true",
            ClauseGroup::WellFormedness,
            "axiom",
            false,
            |goal, _ctx| {
                if *goal == Atom::IsQexp(Term::truec()) {
                    vec![ClauseInstance { igoals: vec![], lgoals: vec![] }]
                } else {
                    vec![]
                }
            },
        ));
        db
    }

    fn qubit_at(t: Term) -> Atom {
        Atom::TypeOf(t, QType::Qubit)
    }

    fn run(seq: &Sequent, strategy: Strategy) -> ProveResult {
        let db = tiny_db();
        let store = CircuitStore::new();
        let env = ProofEnv::new(&db, &store);
        let mut session = Session::new();
        prove(&env, &mut session, seq, strategy)
    }

    #[test]
    fn l_init_proves_single_atom() {
        let a = qubit_at(Term::qvar(0));
        let seq = Sequent::new(
            1,
            Icx::new(),
            Lcx::from_atoms([a.clone()]),
            Formula::atom(a),
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let r = run(&seq, s);
            let d = r.derivation().expect("provable");
            assert_eq!(d.step, Step::LInit);
            assert!(verify_linear_exactness(&d));
        }
    }

    #[test]
    fn top_consumes_anything() {
        let seq = Sequent::new(
            1,
            Icx::from_atoms([Atom::IsQexp(Term::truec())]),
            Lcx::from_atoms([qubit_at(Term::qvar(0))]),
            Formula::Top,
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            assert_eq!(d.step, Step::TopR);
            assert_eq!(d.lcx.len(), 1);
        }
    }

    #[test]
    fn init_rules_fail_on_mismatched_contexts() {
        // icx has A, lcx has B, goal A: l_init needs lcx == [A], i_init
        // needs lcx empty, and no clause matches.
        let a = Atom::IsQexp(Term::var(0));
        let b = Atom::IsQexp(Term::var(1));
        let seq = Sequent::new(
            4,
            Icx::from_atoms([a.clone()]),
            Lcx::from_atoms([b]),
            Formula::atom(a),
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            assert_eq!(run(&seq, s), ProveResult::Unprovable);
        }
    }

    #[test]
    fn depth_exhaustion_is_reported_distinctly() {
        let a = qubit_at(Term::qvar(0));
        let seq = Sequent::new(
            0,
            Icx::new(),
            Lcx::from_atoms([a.clone()]),
            Formula::atom(a),
        );
        assert_eq!(run(&seq, Strategy::Exhaustive), ProveResult::DepthExhausted);
    }

    #[test]
    fn conj_splits_linear_context() {
        let a = qubit_at(Term::qvar(0));
        let b = qubit_at(Term::qvar(1));
        let goal = Formula::conj(Formula::atom(a.clone()), Formula::atom(b.clone()));
        let seq = Sequent::new(
            4,
            Icx::new(),
            Lcx::from_atoms([b.clone(), a.clone()]),
            goal,
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            assert!(verify_linear_exactness(&d));
            let db = tiny_db();
            let store = CircuitStore::new();
            let env = ProofEnv::new(&db, &store);
            replay(&env, &seq, &d).expect("replay");
        }
    }

    #[test]
    fn unconsumed_linear_atom_fails() {
        let a = qubit_at(Term::qvar(0));
        let b = qubit_at(Term::qvar(1));
        let seq = Sequent::new(
            4,
            Icx::new(),
            Lcx::from_atoms([a.clone(), b]),
            Formula::atom(a),
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            assert_eq!(run(&seq, s), ProveResult::Unprovable);
        }
    }

    #[test]
    fn additive_shares_and_top_absorbs() {
        // (A & top) under {A}: the and-branches share the single resource.
        let a = qubit_at(Term::qvar(0));
        let goal = Formula::and(Formula::atom(a.clone()), Formula::Top);
        let seq = Sequent::new(4, Icx::new(), Lcx::from_atoms([a]), goal);
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            assert!(verify_linear_exactness(&d), "{}", d.render_trace());
        }
    }

    #[test]
    fn limp_pushes_and_must_consume() {
        // (A -o A) from nothing.
        let a = qubit_at(Term::qvar(0));
        let goal = Formula::limp(a.clone(), Formula::atom(a));
        let seq = Sequent::new(4, Icx::new(), Lcx::new(), goal);
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            assert!(verify_linear_exactness(&d));
        }
        // (A -o B) from nothing is not provable.
        let a = qubit_at(Term::qvar(0));
        let b = qubit_at(Term::qvar(1));
        let bad = Sequent::new(
            6,
            Icx::new(),
            Lcx::new(),
            Formula::limp(a, Formula::atom(b)),
        );
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            assert_eq!(run(&bad, s), ProveResult::Unprovable);
        }
    }

    #[test]
    fn forall_uses_fresh_eigenvariable() {
        // all x. is_qexp x => is_qexp x
        let goal = Formula::all(
            0,
            Formula::imp(
                Atom::IsQexp(Term::var(0)),
                Formula::atom(Atom::IsQexp(Term::var(0))),
            ),
        );
        let seq = Sequent::new(4, Icx::new(), Lcx::new(), goal);
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            match &d.step {
                Step::AllR { eigen } => assert!(*eigen > 0),
                other => panic!("expected all_r, got {other:?}"),
            }
            let db = tiny_db();
            let store = CircuitStore::new();
            let env = ProofEnv::new(&db, &store);
            replay(&env, &seq, &d).expect("replay");
        }
    }

    #[test]
    fn backchain_uses_clause() {
        let goal = Formula::atom(Atom::IsQexp(Term::truec()));
        let seq = Sequent::new(2, Icx::new(), Lcx::new(), goal);
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let d = run(&seq, s).derivation().expect("provable");
            assert!(matches!(d.step, Step::Backchain { clause: "toy_true", .. }));
        }
    }

    #[test]
    fn split_enumeration_counts() {
        let a = qubit_at(Term::qvar(0));
        let b = qubit_at(Term::qvar(1));
        let c = qubit_at(Term::qvar(2));
        let spl = enumerate_splits(&Lcx::from_atoms([a.clone(), b.clone(), c.clone()]));
        assert_eq!(spl.len(), 8);
        let has = |l: &[Atom], r: &[Atom]| {
            spl.iter().any(|(x, y)| {
                x.same_multiset(&Lcx::from_atoms(l.to_vec()))
                    && y.same_multiset(&Lcx::from_atoms(r.to_vec()))
            })
        };
        assert!(has(&[a.clone(), b.clone()], &[c.clone()]));
        assert!(has(&[c.clone()], &[a.clone(), b.clone()]));

        assert_eq!(enumerate_splits(&Lcx::new()).len(), 1);

        let dd = enumerate_splits(&Lcx::from_atoms([a.clone(), a.clone()]));
        assert_eq!(dd.len(), 4);
        let singleton = dd
            .iter()
            .filter(|(l, r)| l.len() == 1 && r.len() == 1)
            .count();
        assert_eq!(singleton, 2);
    }

    #[test]
    fn height_monotonicity() {
        let a = qubit_at(Term::qvar(0));
        let goal = Formula::conj(Formula::atom(a.clone()), Formula::Top);
        for depth in [3u32, 8, 64] {
            let seq = Sequent::new(depth, Icx::new(), Lcx::from_atoms([a.clone()]), goal.clone());
            assert!(run(&seq, Strategy::Exhaustive).is_proved(), "depth {depth}");
            assert!(run(&seq, Strategy::Lazy).is_proved(), "depth {depth}");
        }
    }

    #[test]
    fn goal_list_modes() {
        let db = tiny_db();
        let store = CircuitStore::new();
        let env = ProofEnv::new(&db, &store);
        let a = qubit_at(Term::qvar(0));
        let b = qubit_at(Term::qvar(1));
        let goals = vec![Formula::atom(a.clone()), Formula::atom(b.clone())];
        let lcx = Lcx::from_atoms([a.clone(), b.clone()]);
        for s in [Strategy::Exhaustive, Strategy::Lazy] {
            let mut session = Session::new();
            let ds = prove_goal_list(
                &env,
                &mut session,
                4,
                &Icx::new(),
                &lcx,
                &goals,
                GoalMode::Linear,
                s,
            )
            .expect("splits {a}/{b}");
            assert_eq!(ds.len(), 2);
        }
        // Empty goal list only succeeds on an empty context.
        let mut session = Session::new();
        assert!(prove_goal_list(
            &env,
            &mut session,
            4,
            &Icx::new(),
            &Lcx::new(),
            &[],
            GoalMode::Linear,
            Strategy::Exhaustive
        )
        .is_some());
        assert!(prove_goal_list(
            &env,
            &mut session,
            4,
            &Icx::new(),
            &lcx,
            &[Formula::atom(a.clone())],
            GoalMode::Linear,
            Strategy::Exhaustive
        )
        .is_none());
    }

    #[test]
    fn alpha_equivalence() {
        let f = |v: u64| {
            Formula::all(
                v,
                Formula::imp(
                    Atom::IsQexp(Term::var(v)),
                    Formula::atom(Atom::IsQexp(Term::var(v))),
                ),
            )
        };
        assert!(alpha_eq(&f(1), &f(2)));
        let g = Formula::all(1, Formula::atom(Atom::IsQexp(Term::var(99))));
        assert!(!alpha_eq(&f(1), &g));
    }
}
