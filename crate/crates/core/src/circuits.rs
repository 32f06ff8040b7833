//! Symbolic circuit model. Circuits are composition trees with explicit
//! input/output wire lists held in a store; appending freshens the appended
//! circuit's outputs and returns the renaming. No gate-level semantics.

use crate::syntax::{fq, fqu, fquc, proper, quantum_data, rename_qvars, Term};
use crate::types::{valid, QType, TypeError};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("duplicate wire {0} in interface")]
    DuplicateWire(u64),
    #[error("unknown circuit id {0}")]
    UnknownId(u64),
    #[error("circuit id {0} already registered")]
    IdTaken(u64),
    #[error("binding does not match the interfaces being appended")]
    BindingMismatch,
    #[error("binding is not injective")]
    NotInjective,
    #[error("expected quantum data")]
    NotQuantumData,
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A finite injective map on quantum variable indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Binding(BTreeMap<u64, u64>);

impl Binding {
    pub fn new() -> Binding {
        Binding(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Binding, CircuitError> {
        let mut b = Binding::new();
        for (k, v) in pairs {
            b.insert(k, v)?;
        }
        Ok(b)
    }

    /// Adds a pair; fails on a conflicting image for the key or a repeated
    /// image (injectivity).
    pub fn insert(&mut self, k: u64, v: u64) -> Result<(), CircuitError> {
        if let Some(old) = self.0.get(&k) {
            if *old == v {
                return Ok(());
            }
            return Err(CircuitError::NotInjective);
        }
        if self.0.values().any(|x| *x == v) {
            return Err(CircuitError::NotInjective);
        }
        self.0.insert(k, v);
        Ok(())
    }

    pub fn get(&self, k: u64) -> Option<u64> {
        self.0.get(&k).copied()
    }

    pub fn domain(&self) -> Vec<u64> {
        self.0.keys().copied().collect()
    }

    pub fn image(&self) -> Vec<u64> {
        self.0.values().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn invert(&self) -> Binding {
        Binding(self.0.iter().map(|(k, v)| (*v, *k)).collect())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// Applies the binding to every quantum variable of a term; indices
    /// outside the domain are unchanged.
    pub fn apply(&self, t: &Term) -> Term {
        rename_qvars(t, &|q| self.get(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CircuitBody {
    /// A bare named circuit constant; its structure is opaque.
    Named(u64),
    /// Identity wiring over the listed wires.
    Identity(Vec<u64>),
    /// Sequential composition: `wiring` connects a subset of the left
    /// circuit's outputs onto the right circuit's inputs.
    Seq(Box<Circuit>, Box<Circuit>, Binding),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub id: u64,
    pub inputs: Vec<u64>,
    pub outputs: Vec<u64>,
    pub body: CircuitBody,
}

impl Circuit {
    /// One line per node: identity, named, or seq.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_into(&mut out);
        out
    }

    fn dump_into(&self, out: &mut String) {
        match &self.body {
            CircuitBody::Identity(ws) => {
                out.push_str("identity");
                for w in ws {
                    out.push_str(&format!(" {w}"));
                }
                out.push('\n');
            }
            CircuitBody::Named(id) => {
                out.push_str(&format!(
                    "named {id} in={:?} out={:?}\n",
                    self.inputs, self.outputs
                ));
            }
            CircuitBody::Seq(l, r, b) => {
                let pairs: Vec<String> =
                    b.pairs().map(|(x, y)| format!("({x} {y})")).collect();
                out.push_str(&format!(
                    "seq {} {} bind=[{}]\n",
                    l.id,
                    r.id,
                    pairs.join(" ")
                ));
                l.dump_into(out);
                r.dump_into(out);
            }
        }
    }
}

fn check_no_dup(wires: &[u64]) -> Result<(), CircuitError> {
    for (i, w) in wires.iter().enumerate() {
        if wires[i + 1..].contains(w) {
            return Err(CircuitError::DuplicateWire(*w));
        }
    }
    Ok(())
}

/// Circuit store: the single mutable entity of an evaluation session. Holds
/// circuits by id and the fresh-id and fresh-wire counters, which always
/// stay above every index they have seen.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CircuitStore {
    circuits: BTreeMap<u64, Circuit>,
    next_id: u64,
    next_qvar: u64,
}

impl CircuitStore {
    pub fn new() -> CircuitStore {
        CircuitStore::default()
    }

    pub fn get(&self, id: u64) -> Result<&Circuit, CircuitError> {
        self.circuits.get(&id).ok_or(CircuitError::UnknownId(id))
    }

    pub fn contains(&self, id: u64) -> bool {
        self.circuits.contains_key(&id)
    }

    pub fn circ_in(&self, id: u64) -> Result<Vec<u64>, CircuitError> {
        Ok(self.get(id)?.inputs.clone())
    }

    pub fn circ_out(&self, id: u64) -> Result<Vec<u64>, CircuitError> {
        Ok(self.get(id)?.outputs.clone())
    }

    fn fresh_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    pub fn bump_qvar_above(&mut self, n: u64) {
        self.next_qvar = self.next_qvar.max(n);
    }

    pub fn fresh_qvar(&mut self) -> u64 {
        let q = self.next_qvar;
        self.next_qvar += 1;
        q
    }

    fn note_wires(&mut self, wires: &[u64]) {
        for w in wires {
            self.bump_qvar_above(w + 1);
        }
    }

    fn register(&mut self, inputs: Vec<u64>, outputs: Vec<u64>, body: CircuitBody) -> u64 {
        let id = self.fresh_id();
        self.note_wires(&inputs);
        self.note_wires(&outputs);
        self.circuits.insert(
            id,
            Circuit { id, inputs, outputs, body },
        );
        id
    }

    /// Registers an externally named circuit with the given interface.
    pub fn register_named(
        &mut self,
        inputs: Vec<u64>,
        outputs: Vec<u64>,
    ) -> Result<u64, CircuitError> {
        check_no_dup(&inputs)?;
        check_no_dup(&outputs)?;
        self.note_wires(&inputs);
        self.note_wires(&outputs);
        let id = self.fresh_id();
        self.circuits.insert(
            id,
            Circuit { id, inputs, outputs, body: CircuitBody::Named(id) },
        );
        Ok(id)
    }

    /// Registers a named circuit under a caller-chosen id, for terms that
    /// mention circuit constants not yet in the store. Fails if taken.
    pub fn register_named_with_id(
        &mut self,
        id: u64,
        inputs: Vec<u64>,
        outputs: Vec<u64>,
    ) -> Result<u64, CircuitError> {
        check_no_dup(&inputs)?;
        check_no_dup(&outputs)?;
        if self.circuits.contains_key(&id) {
            return Err(CircuitError::IdTaken(id));
        }
        self.note_wires(&inputs);
        self.note_wires(&outputs);
        self.next_id = self.next_id.max(id + 1);
        self.circuits.insert(
            id,
            Circuit {
                id,
                inputs: inputs.clone(),
                outputs,
                body: CircuitBody::Named(id),
            },
        );
        Ok(id)
    }

    /// New identity circuit: the wires are both the inputs and the outputs.
    pub fn circ_new(&mut self, wires: &[u64]) -> Result<u64, CircuitError> {
        check_no_dup(wires)?;
        Ok(self.register(
            wires.to_vec(),
            wires.to_vec(),
            CircuitBody::Identity(wires.to_vec()),
        ))
    }

    /// Appends `d` after `c` along `b`, which must be an injective map from
    /// a subset of `c`'s outputs onto all of `d`'s inputs. The result keeps
    /// `c`'s inputs; its outputs are `c`'s surviving outputs followed by
    /// fresh renamings of `d`'s outputs. Returns the new circuit id and the
    /// output-renaming binding from `d`'s outputs to the fresh names.
    pub fn circ_append(
        &mut self,
        c: u64,
        d: u64,
        b: &Binding,
    ) -> Result<(u64, Binding), CircuitError> {
        let cc = self.get(c)?.clone();
        let dc = self.get(d)?.clone();
        for (k, _) in b.pairs() {
            if !cc.outputs.contains(&k) {
                return Err(CircuitError::BindingMismatch);
            }
        }
        let mut covered: Vec<u64> = dc.inputs.clone();
        for (_, v) in b.pairs() {
            if let Some(pos) = covered.iter().position(|x| *x == v) {
                covered.remove(pos);
            } else {
                return Err(CircuitError::BindingMismatch);
            }
        }
        if !covered.is_empty() {
            return Err(CircuitError::BindingMismatch);
        }

        let survivors: Vec<u64> = cc
            .outputs
            .iter()
            .copied()
            .filter(|w| b.get(*w).is_none())
            .collect();
        let mut renaming = Binding::new();
        let mut outputs = survivors;
        for w in &dc.outputs {
            let fresh = self.fresh_qvar();
            renaming
                .insert(*w, fresh)
                .expect("fresh names are distinct");
            outputs.push(fresh);
        }
        let id = self.register(
            cc.inputs.clone(),
            outputs,
            CircuitBody::Seq(Box::new(cc), Box::new(dc), b.clone()),
        );
        Ok((id, renaming))
    }

    /// A circuit with the interface of `c` reversed. The body stays opaque;
    /// reversal is symbolic.
    pub fn circ_reverse(&mut self, c: u64) -> Result<u64, CircuitError> {
        let cc = self.get(c)?.clone();
        let id = self.fresh_id();
        self.circuits.insert(
            id,
            Circuit {
                id,
                inputs: cc.outputs,
                outputs: cc.inputs,
                body: CircuitBody::Named(id),
            },
        );
        Ok(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.circuits.keys().copied()
    }
}

/// A specimen of a quantum data type with all quantum variables fresh above
/// `n`, allocated left to right consecutively: star for one, a single fresh
/// variable for qubit, and a pair of recursive specimens for tensor.
pub fn specimen(n: u64, t: &QType) -> Result<Term, CircuitError> {
    if !valid(t) {
        return Err(CircuitError::Type(TypeError::NotQuantumData(t.clone())));
    }
    fn go(counter: &mut u64, t: &QType) -> Term {
        match t {
            QType::One => Term::star(),
            QType::Qubit => {
                let q = *counter;
                *counter += 1;
                Term::qvar(q)
            }
            QType::Tensor(a, b) => {
                let left = go(counter, a);
                let right = go(counter, b);
                Term::prod(left, right)
            }
            _ => unreachable!("checked valid"),
        }
    }
    let mut counter = n;
    Ok(go(&mut counter, t))
}

/// The wire bijection induced by two quantum data terms of identical shape:
/// star matches star, variables pair up, pairs match componentwise. Returns
/// None on shape mismatch or a non-injective pairing.
pub fn bind_match(u: &Term, v: &Term) -> Result<Option<Binding>, CircuitError> {
    if !quantum_data(u) || !quantum_data(v) {
        return Err(CircuitError::NotQuantumData);
    }
    let mut b = Binding::new();
    fn go(u: &Term, v: &Term, b: &mut Binding) -> Result<bool, CircuitError> {
        use crate::syntax::Const;
        match (u, v) {
            (Term::Con(Const::Star), Term::Con(Const::Star)) => Ok(true),
            (Term::Con(Const::Qvar(x)), Term::Con(Const::Qvar(y))) => {
                match b.insert(*x, *y) {
                    Ok(()) => Ok(true),
                    Err(CircuitError::NotInjective) => Ok(false),
                    Err(e) => Err(e),
                }
            }
            _ => match (u.dest_prod(), v.dest_prod()) {
                (Some((u1, u2)), Some((v1, v2))) => {
                    Ok(go(u1, v1, b)? && go(u2, v2, b)?)
                }
                _ => Ok(false),
            },
        }
    }
    if go(u, v, &mut b)? {
        Ok(Some(b))
    } else {
        Ok(None)
    }
}

/// A circuit under construction paired with the term driving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Closure {
    pub circuit: u64,
    pub term: Term,
}

impl Closure {
    pub fn new(circuit: u64, term: Term) -> Closure {
        Closure { circuit, term }
    }
}

/// A closure is valid when the term is proper, its free quantum variables
/// are among the circuit's outputs, and neither the free-occurrence list nor
/// the circuit-inclusive one contains duplicates.
pub fn valid_closure(store: &CircuitStore, c: u64, a: &Term) -> bool {
    if !proper(a) {
        return false;
    }
    let outs = match store.circ_out(c) {
        Ok(o) => o,
        Err(_) => return false,
    };
    let frees = fq(a);
    if !frees.iter().all(|q| outs.contains(q)) {
        return false;
    }
    no_dup(&fqu(a)) && no_dup(&fquc(a))
}

pub fn no_dup(xs: &[u64]) -> bool {
    for (i, x) in xs.iter().enumerate() {
        if xs[i + 1..].contains(x) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::QType;

    #[test]
    fn identity_interfaces() {
        let mut st = CircuitStore::new();
        let c = st.circ_new(&[0, 1]).unwrap();
        assert_eq!(st.circ_in(c).unwrap(), vec![0, 1]);
        assert_eq!(st.circ_out(c).unwrap(), vec![0, 1]);

        let e = st.circ_new(&[]).unwrap();
        assert_eq!(st.circ_in(e).unwrap(), Vec::<u64>::new());

        let s = st.circ_new(&[3]).unwrap();
        assert_eq!(st.circ_in(s).unwrap(), vec![3]);
        assert_eq!(st.circ_out(s).unwrap(), vec![3]);

        assert_eq!(st.circ_new(&[5, 5]), Err(CircuitError::DuplicateWire(5)));
    }

    #[test]
    fn append_renames_outputs() {
        let mut st = CircuitStore::new();
        let c = st.circ_new(&[0]).unwrap();
        let d = st.circ_new(&[0]).unwrap();
        let b = Binding::from_pairs([(0, 0)]).unwrap();
        let (e, renaming) = st.circ_append(c, d, &b).unwrap();
        assert_eq!(st.circ_in(e).unwrap(), vec![0]);
        let outs = st.circ_out(e).unwrap();
        assert_eq!(outs.len(), 1);
        assert!(outs[0] > 0, "output renamed fresh");
        assert_eq!(renaming.domain(), vec![0]);
        assert_eq!(renaming.image(), outs);
    }

    #[test]
    fn append_with_empty_binding_keeps_left_outputs() {
        let mut st = CircuitStore::new();
        let c = st.circ_new(&[0, 1]).unwrap();
        let d = st.circ_new(&[]).unwrap();
        let (e, renaming) = st.circ_append(c, d, &Binding::new()).unwrap();
        assert_eq!(st.circ_in(e).unwrap(), vec![0, 1]);
        assert_eq!(st.circ_out(e).unwrap(), vec![0, 1]);
        assert!(renaming.is_empty());
    }

    #[test]
    fn append_requires_matching_interfaces() {
        let mut st = CircuitStore::new();
        let c = st.circ_new(&[0]).unwrap();
        let d = st.circ_new(&[7]).unwrap();
        // Binding image must cover all of d's inputs.
        assert_eq!(
            st.circ_append(c, d, &Binding::new()),
            Err(CircuitError::BindingMismatch)
        );
        let b = Binding::from_pairs([(0, 7)]).unwrap();
        assert!(st.circ_append(c, d, &b).is_ok());
    }

    #[test]
    fn specimen_shapes() {
        assert_eq!(specimen(5, &QType::One).unwrap(), Term::star());
        assert_eq!(specimen(0, &QType::Qubit).unwrap(), Term::qvar(0));
        assert_eq!(
            specimen(5, &QType::tensor(QType::Qubit, QType::Qubit)).unwrap(),
            Term::prod(Term::qvar(5), Term::qvar(6))
        );
        assert!(specimen(0, &QType::Bool).is_err());
    }

    #[test]
    fn specimen_is_fresh_distinct_quantum_data() {
        let t = QType::tensor(
            QType::tensor(QType::Qubit, QType::One),
            QType::tensor(QType::Qubit, QType::Qubit),
        );
        let s = specimen(3, &t).unwrap();
        assert!(quantum_data(&s));
        let qs = fq(&s);
        assert!(qs.iter().all(|q| *q >= 3));
        assert!(no_dup(&qs));
        assert_eq!(qs.len(), 3);
    }

    #[test]
    fn bind_match_examples() {
        let u = Term::prod(Term::qvar(1), Term::qvar(2));
        let v = Term::prod(Term::qvar(3), Term::qvar(4));
        let b = bind_match(&u, &v).unwrap().unwrap();
        assert_eq!(b.get(1), Some(3));
        assert_eq!(b.get(2), Some(4));

        let t = Term::prod(Term::qvar(0), Term::star());
        let idb = bind_match(&t, &t).unwrap().unwrap();
        assert_eq!(idb.get(0), Some(0));
        assert_eq!(idb.len(), 1);

        assert_eq!(bind_match(&Term::star(), &Term::qvar(0)).unwrap(), None);
        assert!(bind_match(&Term::truec(), &Term::star()).is_err());
    }

    #[test]
    fn bind_match_roundtrip_identity() {
        let u = Term::prod(Term::prod(Term::qvar(1), Term::qvar(5)), Term::star());
        let v = Term::prod(Term::prod(Term::qvar(9), Term::qvar(2)), Term::star());
        let b = bind_match(&u, &v).unwrap().unwrap();
        assert_eq!(b.apply(&u), v);
        assert_eq!(b.invert().apply(&b.apply(&u)), u);
    }

    #[test]
    fn closure_validity() {
        let mut st = CircuitStore::new();
        let c01 = st.circ_new(&[0, 1]).unwrap();
        assert!(valid_closure(
            &st,
            c01,
            &Term::prod(Term::qvar(0), Term::qvar(1))
        ));
        let empty = st.circ_new(&[]).unwrap();
        assert!(!valid_closure(&st, empty, &Term::qvar(0)));
        let c0 = st.circ_new(&[0]).unwrap();
        assert!(!valid_closure(
            &st,
            c0,
            &Term::prod(Term::qvar(0), Term::qvar(0))
        ));
    }

    #[test]
    fn fresh_wires_never_collide() {
        let mut st = CircuitStore::new();
        let c = st.circ_new(&[10, 11]).unwrap();
        let d = st.circ_new(&[12]).unwrap();
        let b = Binding::from_pairs([(10, 12)]).unwrap();
        let (_, renaming) = st.circ_append(c, d, &b).unwrap();
        for (_, fresh) in renaming.pairs() {
            assert!(fresh > 12);
        }
    }

    #[test]
    fn reverse_swaps_interface() {
        let mut st = CircuitStore::new();
        let c = st.register_named(vec![0, 1], vec![2]).unwrap();
        let r = st.circ_reverse(c).unwrap();
        assert_eq!(st.circ_in(r).unwrap(), vec![2]);
        assert_eq!(st.circ_out(r).unwrap(), vec![0, 1]);
    }
}
