//! Context relations for the metatheory: context subtyping (a super-context
//! and sub-context aligned block by block, with subtyping between paired
//! typing atoms) and the relation between well-formedness and typing
//! contexts. Both come with the constructive splitting operations their
//! theorems assert.

use crate::sl::{Atom, Lcx};
use crate::syntax::{proper, Term};
use crate::types::{subtype, valid_t, QType};

/// One constructor application in a context-subtyping witness, head first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelStep {
    /// A well-formedness atom shared by both sides.
    Q { a: Term },
    /// Intuitionistic typing pair: both types banged on the super side.
    Iig { a: Term, t1: QType, t2: QType },
    /// Linear typing pair on both sides.
    Llg { a: Term, t1: QType, t2: QType },
    /// Banged subtype moved to the intuitionistic side; the super-type
    /// stays linear.
    Lig { a: Term, t1: QType, t2: QType },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubtypeCtxRel {
    pub steps: Vec<RelStep>,
}

impl SubtypeCtxRel {
    /// The four contexts this witness relates, in order
    /// (il', ll', il, ll).
    pub fn contexts(&self) -> (Vec<Atom>, Vec<Atom>, Vec<Atom>, Vec<Atom>) {
        let mut il_p = Vec::new();
        let mut ll_p = Vec::new();
        let mut il = Vec::new();
        let mut ll = Vec::new();
        for s in &self.steps {
            match s {
                RelStep::Q { a } => {
                    il_p.push(Atom::IsQexp(a.clone()));
                    il.push(Atom::IsQexp(a.clone()));
                }
                RelStep::Iig { a, t1, t2 } => {
                    il_p.push(Atom::IsQexp(a.clone()));
                    il_p.push(Atom::TypeOf(a.clone(), t1.clone()));
                    il.push(Atom::IsQexp(a.clone()));
                    il.push(Atom::TypeOf(a.clone(), t2.clone()));
                }
                RelStep::Llg { a, t1, t2 } => {
                    il_p.push(Atom::IsQexp(a.clone()));
                    ll_p.push(Atom::TypeOf(a.clone(), t1.clone()));
                    il.push(Atom::IsQexp(a.clone()));
                    ll.push(Atom::TypeOf(a.clone(), t2.clone()));
                }
                RelStep::Lig { a, t1, t2 } => {
                    il_p.push(Atom::IsQexp(a.clone()));
                    il_p.push(Atom::TypeOf(a.clone(), t1.clone()));
                    il.push(Atom::IsQexp(a.clone()));
                    ll.push(Atom::TypeOf(a.clone(), t2.clone()));
                }
            }
        }
        (il_p, ll_p, il, ll)
    }

    /// Checks the step list's side conditions and that it produces exactly
    /// the given contexts.
    pub fn verify(&self, il_p: &[Atom], ll_p: &[Atom], il: &[Atom], ll: &[Atom]) -> bool {
        for s in &self.steps {
            let ok = match s {
                RelStep::Q { .. } => true,
                RelStep::Iig { t1, t2, .. } => t2.is_bang() && subtype(t1, t2),
                RelStep::Llg { t1, t2, .. } => {
                    valid_t(&QType::bang(t1.clone()))
                        && valid_t(&QType::bang(t2.clone()))
                        && subtype(t1, t2)
                }
                RelStep::Lig { t1, t2, .. } => {
                    t1.is_bang() && valid_t(&QType::bang(t2.clone())) && subtype(t1, t2)
                }
            };
            if !ok {
                return false;
            }
        }
        let (a, b, c, d) = self.contexts();
        a == il_p && b == ll_p && c == il && d == ll
    }
}

/// Decides whether the contexts are related, returning a witness.
pub fn subtypecontext_check(
    il_p: &[Atom],
    ll_p: &[Atom],
    il: &[Atom],
    ll: &[Atom],
) -> Option<SubtypeCtxRel> {
    fn go(il_p: &[Atom], ll_p: &[Atom], il: &[Atom], ll: &[Atom]) -> Option<Vec<RelStep>> {
        if il_p.is_empty() && ll_p.is_empty() && il.is_empty() && ll.is_empty() {
            return Some(vec![]);
        }
        let (Some(Atom::IsQexp(ap)), Some(Atom::IsQexp(au))) = (il_p.first(), il.first())
        else {
            return None;
        };
        if ap != au {
            return None;
        }
        let a = ap.clone();

        // subcnxt_iig: both heads carry a typing atom for `a` in the
        // intuitionistic contexts.
        if let (Some(Atom::TypeOf(xp, t1)), Some(Atom::TypeOf(xu, t2))) =
            (il_p.get(1), il.get(1))
        {
            if *xp == a && *xu == a && t2.is_bang() && subtype(t1, t2) {
                if let Some(mut rest) = go(&il_p[2..], ll_p, &il[2..], ll) {
                    rest.insert(
                        0,
                        RelStep::Iig { a: a.clone(), t1: t1.clone(), t2: t2.clone() },
                    );
                    return Some(rest);
                }
            }
        }

        // subcnxt_llg: typing atoms for `a` head both linear contexts.
        if let (Some(Atom::TypeOf(xp, t1)), Some(Atom::TypeOf(xu, t2))) =
            (ll_p.first(), ll.first())
        {
            if *xp == a
                && *xu == a
                && valid_t(&QType::bang(t1.clone()))
                && valid_t(&QType::bang(t2.clone()))
                && subtype(t1, t2)
            {
                if let Some(mut rest) = go(&il_p[1..], &ll_p[1..], &il[1..], &ll[1..]) {
                    rest.insert(
                        0,
                        RelStep::Llg { a: a.clone(), t1: t1.clone(), t2: t2.clone() },
                    );
                    return Some(rest);
                }
            }
        }

        // subcnxt_lig: a banged typing atom on the super side pairs with a
        // linear one below.
        if let (Some(Atom::TypeOf(xp, t1)), Some(Atom::TypeOf(xu, t2))) =
            (il_p.get(1), ll.first())
        {
            if *xp == a
                && *xu == a
                && t1.is_bang()
                && valid_t(&QType::bang(t2.clone()))
                && subtype(t1, t2)
            {
                if let Some(mut rest) = go(&il_p[2..], ll_p, &il[1..], &ll[1..]) {
                    rest.insert(
                        0,
                        RelStep::Lig { a: a.clone(), t1: t1.clone(), t2: t2.clone() },
                    );
                    return Some(rest);
                }
            }
        }

        // subcnxt_q: a bare well-formedness atom on both sides.
        if let Some(mut rest) = go(&il_p[1..], ll_p, &il[1..], ll) {
            rest.insert(0, RelStep::Q { a });
            return Some(rest);
        }
        None
    }
    go(il_p, ll_p, il, ll).map(|steps| SubtypeCtxRel { steps })
}

pub struct CtxSplit {
    pub il1: Vec<Atom>,
    pub il2: Vec<Atom>,
    pub ll1_p: Vec<Atom>,
    pub ll2_p: Vec<Atom>,
    pub rel1: SubtypeCtxRel,
    pub rel2: SubtypeCtxRel,
}

/// Splits a context-subtyping witness along a split of its unprimed linear
/// context: each side gets a sub-witness whose intuitionistic context may
/// grow (a banged pair routed away reappears intuitionistically).
pub fn split_subtypectx(rel: &SubtypeCtxRel, ll1: &[Atom], ll2: &[Atom]) -> Option<CtxSplit> {
    let (_, _, _, ll) = rel.contexts();
    let total = Lcx::from_atoms(ll.clone());
    let want = Lcx::from_atoms(ll1.to_vec()).plus(&Lcx::from_atoms(ll2.to_vec()));
    if !total.same_multiset(&want) {
        return None;
    }
    let mut need1 = Lcx::from_atoms(ll1.to_vec());
    let mut need2 = Lcx::from_atoms(ll2.to_vec());
    let mut steps1 = Vec::new();
    let mut steps2 = Vec::new();
    for s in &rel.steps {
        match s {
            RelStep::Q { .. } | RelStep::Iig { .. } => {
                steps1.push(s.clone());
                steps2.push(s.clone());
            }
            RelStep::Llg { a, t1, t2 } => {
                let entry = Atom::TypeOf(a.clone(), t2.clone());
                if need1.remove_one(&entry) {
                    steps1.push(s.clone());
                    steps2.push(RelStep::Q { a: a.clone() });
                } else if need2.remove_one(&entry) {
                    steps2.push(s.clone());
                    steps1.push(RelStep::Q { a: a.clone() });
                } else {
                    return None;
                }
            }
            RelStep::Lig { a, t1, t2 } => {
                let entry = Atom::TypeOf(a.clone(), t2.clone());
                // The side that loses the pair keeps the banged super-type
                // intuitionistically, paired with itself.
                let keep_intuit = RelStep::Iig {
                    a: a.clone(),
                    t1: t1.clone(),
                    t2: t1.clone(),
                };
                if need1.remove_one(&entry) {
                    steps1.push(s.clone());
                    steps2.push(keep_intuit);
                } else if need2.remove_one(&entry) {
                    steps2.push(s.clone());
                    steps1.push(keep_intuit);
                } else {
                    return None;
                }
            }
        }
    }
    let rel1 = SubtypeCtxRel { steps: steps1 };
    let rel2 = SubtypeCtxRel { steps: steps2 };
    let (_, ll1_p, il1, _) = rel1.contexts();
    let (_, ll2_p, il2, _) = rel2.contexts();
    Some(CtxSplit { il1, il2, ll1_p, ll2_p, rel1, rel2 })
}

/// Constructor applications relating the well-formedness context to the
/// typing contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxRStep {
    /// cons_q_cr: a well-formed variable with no typing assumption.
    Q { x: Term },
    /// cons_l_cr: a variable typed linearly.
    L { x: Term, ty: QType },
    /// cons_i_cr: a variable typed intuitionistically.
    I { x: Term, ty: QType },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CtxR {
    pub steps: Vec<CtxRStep>,
}

impl CtxR {
    pub fn contexts(&self) -> (Vec<Atom>, Vec<Atom>, Vec<Atom>) {
        let mut iq = Vec::new();
        let mut it = Vec::new();
        let mut lt = Vec::new();
        for s in &self.steps {
            match s {
                CtxRStep::Q { x } => {
                    iq.push(Atom::IsQexp(x.clone()));
                    it.push(Atom::IsQexp(x.clone()));
                }
                CtxRStep::L { x, ty } => {
                    iq.push(Atom::IsQexp(x.clone()));
                    it.push(Atom::IsQexp(x.clone()));
                    lt.push(Atom::TypeOf(x.clone(), ty.clone()));
                }
                CtxRStep::I { x, ty } => {
                    iq.push(Atom::IsQexp(x.clone()));
                    it.push(Atom::TypeOf(x.clone(), ty.clone()));
                    it.push(Atom::IsQexp(x.clone()));
                }
            }
        }
        (iq, it, lt)
    }

    pub fn verify(&self, iq: &[Atom], it: &[Atom], lt: &[Atom]) -> bool {
        if !self.steps.iter().all(|s| match s {
            CtxRStep::Q { x } | CtxRStep::L { x, .. } | CtxRStep::I { x, .. } => proper(x),
        }) {
            return false;
        }
        let (a, b, c) = self.contexts();
        a == iq && b == it && c == lt
    }
}

/// Decides the relation between a well-formedness context and the typing
/// contexts, returning a witness.
pub fn ctxr_check(iq: &[Atom], it: &[Atom], lt: &[Atom]) -> Option<CtxR> {
    fn go(iq: &[Atom], it: &[Atom], lt: &[Atom]) -> Option<Vec<CtxRStep>> {
        if iq.is_empty() && it.is_empty() && lt.is_empty() {
            return Some(vec![]);
        }
        let Some(Atom::IsQexp(x)) = iq.first() else { return None };
        if !proper(x) {
            return None;
        }

        // cons_i_cr: the typing context leads with a typing atom.
        if let (Some(Atom::TypeOf(y, ty)), Some(Atom::IsQexp(z))) = (it.first(), it.get(1)) {
            if y == x && z == x {
                if let Some(mut rest) = go(&iq[1..], &it[2..], lt) {
                    rest.insert(0, CtxRStep::I { x: x.clone(), ty: ty.clone() });
                    return Some(rest);
                }
            }
        }

        let Some(Atom::IsQexp(z)) = it.first() else { return None };
        if z != x {
            return None;
        }

        // cons_l_cr: the linear context leads with a typing atom for x.
        if let Some(Atom::TypeOf(y, ty)) = lt.first() {
            if y == x {
                if let Some(mut rest) = go(&iq[1..], &it[1..], &lt[1..]) {
                    rest.insert(0, CtxRStep::L { x: x.clone(), ty: ty.clone() });
                    return Some(rest);
                }
            }
        }

        // cons_q_cr.
        if let Some(mut rest) = go(&iq[1..], &it[1..], lt) {
            rest.insert(0, CtxRStep::Q { x: x.clone() });
            return Some(rest);
        }
        None
    }
    go(iq, it, lt).map(|steps| CtxR { steps })
}

/// Splits a ctxR witness along a prefix/suffix decomposition of the linear
/// typing context: both halves relate against the same well-formedness and
/// intuitionistic contexts.
pub fn ctxr_concat(rel: &CtxR, lt1_len: usize) -> (CtxR, CtxR) {
    let mut seen_linear = 0usize;
    let mut steps1 = Vec::new();
    let mut steps2 = Vec::new();
    for s in &rel.steps {
        match s {
            CtxRStep::L { x, ty } => {
                if seen_linear < lt1_len {
                    steps1.push(s.clone());
                    steps2.push(CtxRStep::Q { x: x.clone() });
                } else {
                    steps1.push(CtxRStep::Q { x: x.clone() });
                    steps2.push(CtxRStep::L { x: x.clone(), ty: ty.clone() });
                }
                seen_linear += 1;
            }
            other => {
                steps1.push(other.clone());
                steps2.push(other.clone());
            }
        }
    }
    (CtxR { steps: steps1 }, CtxR { steps: steps2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::QType;

    fn isq(n: u64) -> Atom {
        Atom::IsQexp(Term::var(n))
    }

    fn tyof(n: u64, t: QType) -> Atom {
        Atom::TypeOf(Term::var(n), t)
    }

    #[test]
    fn empty_contexts_relate() {
        let rel = subtypecontext_check(&[], &[], &[], &[]).unwrap();
        assert!(rel.steps.is_empty());
        assert!(rel.verify(&[], &[], &[], &[]));
    }

    #[test]
    fn banged_subtype_moves_intuitionistically() {
        // super side: x linearly at bool; sub side: x intuitionistically at
        // !bool. Related via the lig constructor since !bool <: bool.
        let il_p = [isq(0), tyof(0, QType::bang(QType::Bool))];
        let ll_p: [Atom; 0] = [];
        let il = [isq(0)];
        let ll = [tyof(0, QType::Bool)];
        let rel = subtypecontext_check(&il_p, &ll_p, &il, &ll).unwrap();
        assert_eq!(rel.steps.len(), 1);
        assert!(matches!(rel.steps[0], RelStep::Lig { .. }));
        assert!(rel.verify(&il_p, &ll_p, &il, &ll));
    }

    #[test]
    fn reflexive_relation_on_generator_shaped_contexts() {
        let il = [isq(0), isq(1), isq(2), tyof(2, QType::bang(QType::Bool))];
        let ll = [tyof(0, QType::Qubit), tyof(1, QType::Bool)];
        let rel = subtypecontext_check(&il, &ll, &il, &ll).unwrap();
        assert!(rel.verify(&il, &ll, &il, &ll));
    }

    #[test]
    fn mismatched_pairing_rejected() {
        // Linear typing atom with no is_qexp companion.
        assert!(subtypecontext_check(&[], &[tyof(0, QType::Qubit)], &[], &[tyof(0, QType::Qubit)])
            .is_none());
        // Subtyping violated: bool is not a subtype of qubit.
        let il = [isq(0)];
        assert!(subtypecontext_check(
            &il,
            &[tyof(0, QType::Bool)],
            &il,
            &[tyof(0, QType::Qubit)]
        )
        .is_none());
    }

    #[test]
    fn split_empty() {
        let rel = subtypecontext_check(&[], &[], &[], &[]).unwrap();
        let out = split_subtypectx(&rel, &[], &[]).unwrap();
        assert!(out.ll1_p.is_empty() && out.ll2_p.is_empty());
        assert!(out.rel1.verify(&[], &[], &out.il1, &[]));
    }

    #[test]
    fn split_routes_paired_atom() {
        let il = [isq(0)];
        let ll = [tyof(0, QType::Qubit)];
        let rel = subtypecontext_check(&il, &ll, &il, &ll).unwrap();
        let out = split_subtypectx(&rel, &ll, &[]).unwrap();
        assert_eq!(out.ll1_p, ll.to_vec());
        assert!(out.ll2_p.is_empty());
        assert!(out.rel1.verify(&il, &ll, &out.il1, &ll));
        assert!(out.rel2.verify(&il, &[], &out.il2, &[]));
    }

    #[test]
    fn split_two_atoms_all_ways() {
        let il = [isq(0), isq(1)];
        let ll = [tyof(0, QType::Qubit), tyof(1, QType::Bool)];
        let rel = subtypecontext_check(&il, &ll, &il, &ll).unwrap();
        let (a, b) = (ll[0].clone(), ll[1].clone());
        let cases: Vec<(Vec<Atom>, Vec<Atom>)> = vec![
            (vec![], vec![a.clone(), b.clone()]),
            (vec![a.clone()], vec![b.clone()]),
            (vec![b.clone()], vec![a.clone()]),
            (vec![a.clone(), b.clone()], vec![]),
        ];
        for (l1, l2) in cases {
            let out = split_subtypectx(&rel, &l1, &l2).expect("split exists");
            let (ilp, _, _, _) = rel.contexts();
            assert!(out.rel1.verify(&ilp, &out.ll1_p, &out.il1, &l1));
            assert!(out.rel2.verify(&ilp, &out.ll2_p, &out.il2, &l2));
            // The unprimed intuitionistic contexts only grow.
            for at in &il {
                assert!(out.il1.contains(at));
                assert!(out.il2.contains(at));
            }
        }
    }

    #[test]
    fn split_rejects_non_splits() {
        let il = [isq(0)];
        let ll = [tyof(0, QType::Qubit)];
        let rel = subtypecontext_check(&il, &ll, &il, &ll).unwrap();
        assert!(split_subtypectx(&rel, &ll, &ll).is_none());
    }

    #[test]
    fn ctxr_examples() {
        // Empty.
        assert!(ctxr_check(&[], &[], &[]).is_some());
        // One linearly typed variable.
        let iq = [isq(0)];
        let it = [isq(0)];
        let lt = [tyof(0, QType::Qubit)];
        let rel = ctxr_check(&iq, &it, &lt).unwrap();
        assert!(matches!(rel.steps[0], CtxRStep::L { .. }));
        assert!(rel.verify(&iq, &it, &lt));
        // Intuitionistically typed variable: typing atom precedes is_qexp.
        let it2 = [tyof(0, QType::bang(QType::Bool)), isq(0)];
        let rel2 = ctxr_check(&iq, &it2, &[]).unwrap();
        assert!(matches!(rel2.steps[0], CtxRStep::I { .. }));
        // Improper terms rejected.
        let bad = [Atom::IsQexp(Term::Bnd(0))];
        assert!(ctxr_check(&bad, &bad, &[]).is_none());
    }

    #[test]
    fn ctxr_concat_splits_linear_prefix() {
        let iq = [isq(0), isq(1), isq(2)];
        let it = [isq(0), isq(1), isq(2)];
        let lt = [tyof(0, QType::Qubit), tyof(2, QType::Bool)];
        let rel = ctxr_check(&iq, &it, &lt).unwrap();
        let (r1, r2) = ctxr_concat(&rel, 1);
        assert!(r1.verify(&iq, &it, &lt[..1]));
        assert!(r2.verify(&iq, &it, &lt[1..]));
    }
}
