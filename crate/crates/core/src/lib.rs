//! Proto-Quipper as a logic-programming artifact: de Bruijn terms over the
//! language's constants, a subtyping decision procedure, an intuitionistic
//! linear sequent calculus whose proof search executes the typing,
//! well-formedness and reduction judgments, symbolic circuits, a small-step
//! evaluator cross-checked against proof search, and randomized suites that
//! exercise the system's metatheory.

pub mod circuits;
pub mod clauses;
pub mod eval;
pub mod gen;
pub mod meta;
pub mod sl;
pub mod surface;
pub mod syntax;
pub mod types;

pub use circuits::{bind_match, specimen, valid_closure, Binding, Circuit, CircuitStore, Closure};
pub use sl::{
    enumerate_splits, prove, prove_goal_list, Atom, Clause, ClauseDb, Derivation, Formula, Icx,
    Lcx, ProofEnv, ProveResult, Sequent, Session, Strategy,
};
pub use syntax::{
    fq, fqu, fquc, get_boxed, is_value, newqvar, proper, quantum_data, Const, ScopedBody,
    ScopedBody2, Term,
};
pub use types::{const_type, subtype, valid, valid_t, QType};
