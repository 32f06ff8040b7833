//! Proto-Quipper types: a single universal tree plus the two validity
//! predicates that carve out the quantum-data grammar and the general type
//! grammar, and a decision procedure for subtyping.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Universal type tree. Raw trees are unrestricted; [`valid`] and [`valid_t`]
/// are predicates, not construction constraints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum QType {
    Qubit,
    One,
    Bool,
    Tensor(Box<QType>, Box<QType>),
    Arrow(Box<QType>, Box<QType>),
    Circ(Box<QType>, Box<QType>),
    Bang(Box<QType>),
}

impl QType {
    pub fn tensor(a: QType, b: QType) -> QType {
        QType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: QType, b: QType) -> QType {
        QType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn circ(a: QType, b: QType) -> QType {
        QType::Circ(Box::new(a), Box::new(b))
    }

    pub fn bang(a: QType) -> QType {
        QType::Bang(Box::new(a))
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, QType::Bang(_))
    }

    /// Strips one leading bang if present.
    pub fn peel_bang(&self) -> Option<&QType> {
        match self {
            QType::Bang(inner) => Some(inner),
            _ => None,
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            QType::Qubit | QType::One | QType::Bool => 1,
            QType::Tensor(a, b) | QType::Arrow(a, b) | QType::Circ(a, b) => {
                1 + a.size() + b.size()
            }
            QType::Bang(a) => 1 + a.size(),
        }
    }

    /// All subterms of the type, including itself, in preorder.
    pub fn subterms(&self) -> Vec<&QType> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                QType::Tensor(a, b) | QType::Arrow(a, b) | QType::Circ(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                QType::Bang(a) => stack.push(a),
                _ => {}
            }
        }
        out
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QType::Qubit => write!(f, "qubit"),
            QType::One => write!(f, "one"),
            QType::Bool => write!(f, "bool"),
            QType::Tensor(a, b) => write!(f, "(tensor {a} {b})"),
            QType::Arrow(a, b) => write!(f, "(arrow {a} {b})"),
            QType::Circ(a, b) => write!(f, "(circ {a} {b})"),
            QType::Bang(a) => write!(f, "(bang {a})"),
        }
    }
}

/// Quantum data types: the grammar built from `qubit`, `one` and `tensor`.
pub fn valid(t: &QType) -> bool {
    match t {
        QType::Qubit | QType::One => true,
        QType::Tensor(a, b) => valid(a) && valid(b),
        _ => false,
    }
}

/// General Proto-Quipper types: base types and their single-bang versions,
/// tensor/arrow of general types, circ of quantum data types, each with an
/// optional single leading bang. Two consecutive bangs are never valid.
pub fn valid_t(t: &QType) -> bool {
    match t {
        QType::Bang(inner) => match inner.as_ref() {
            QType::Bang(_) => false,
            other => valid_t_head(other),
        },
        other => valid_t_head(other),
    }
}

fn valid_t_head(t: &QType) -> bool {
    match t {
        QType::Qubit | QType::One | QType::Bool => true,
        QType::Tensor(a, b) | QType::Arrow(a, b) => valid_t(a) && valid_t(b),
        QType::Circ(a, b) => valid(a) && valid(b),
        QType::Bang(_) => false,
    }
}

/// Decides the subtyping relation `a <: b`.
///
/// Base types are reflexive axioms, tensor is covariant in both arguments,
/// arrow is contravariant left and covariant right, circ is contravariant in
/// the input and covariant in the output with validity side conditions, and
/// the two bang rules only apply when the stripped types have no leading
/// bang. Each case recurses on strict subterms, so the procedure terminates.
pub fn subtype(a: &QType, b: &QType) -> bool {
    match (a, b) {
        (QType::Qubit, QType::Qubit) => true,
        (QType::One, QType::One) => true,
        (QType::Bool, QType::Bool) => true,
        (QType::Tensor(a1, a2), QType::Tensor(b1, b2)) => subtype(a1, b1) && subtype(a2, b2),
        (QType::Arrow(a1, a2), QType::Arrow(b1, b2)) => subtype(b1, a1) && subtype(a2, b2),
        (QType::Circ(t1, u1), QType::Circ(t2, u2)) => {
            valid(t1) && valid(u1) && valid(t2) && valid(u2) && subtype(t2, t1) && subtype(u1, u2)
        }
        // BangSub2: !A <: !B when A <: B and A has no leading bang.
        (QType::Bang(a1), QType::Bang(b1)) => !a1.is_bang() && subtype(a1, b1),
        // BangSub1: !A <: B when A <: B, A has no leading bang, and B is not
        // a bang (the bang-bang case is handled above).
        (QType::Bang(a1), _) => !a1.is_bang() && subtype(a1, b),
        _ => false,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("expected quantum data type, got {0}")]
    NotQuantumData(QType),
}

/// The three circuit-function constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircConst {
    Box,
    Unbox,
    Rev,
}

/// The type of a circuit-function constant at quantum data types `t`, `u`:
/// box is `!(T -o U) -o !Circ(T,U)`, unbox is `Circ(T,U) -o !(T -o U)`,
/// and rev is `Circ(T,U) -o !Circ(U,T)`.
pub fn const_type(c: CircConst, t: &QType, u: &QType) -> Result<QType, TypeError> {
    if !valid(t) {
        return Err(TypeError::NotQuantumData(t.clone()));
    }
    if !valid(u) {
        return Err(TypeError::NotQuantumData(u.clone()));
    }
    let ty = match c {
        CircConst::Box => QType::arrow(
            QType::bang(QType::arrow(t.clone(), u.clone())),
            QType::bang(QType::circ(t.clone(), u.clone())),
        ),
        CircConst::Unbox => QType::arrow(
            QType::circ(t.clone(), u.clone()),
            QType::bang(QType::arrow(t.clone(), u.clone())),
        ),
        CircConst::Rev => QType::arrow(
            QType::circ(t.clone(), u.clone()),
            QType::bang(QType::circ(u.clone(), t.clone())),
        ),
    };
    Ok(ty)
}

/// Enumerates every type of constructor depth at most `depth` (leaves have
/// depth 1). Used by the metatheory suites and the acceptance oracle.
pub fn all_types_up_to_depth(depth: usize) -> Vec<QType> {
    let mut by_depth: Vec<Vec<QType>> = vec![vec![]];
    by_depth.push(vec![QType::Qubit, QType::One, QType::Bool]);
    for d in 2..=depth {
        let shallower: Vec<QType> = by_depth[1..d].iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for a in &shallower {
            for b in &shallower {
                // At least one argument must sit at exactly depth d-1.
                if a.depth().max(b.depth()) == d - 1 {
                    level.push(QType::tensor(a.clone(), b.clone()));
                    level.push(QType::arrow(a.clone(), b.clone()));
                    level.push(QType::circ(a.clone(), b.clone()));
                }
            }
        }
        for a in by_depth[d - 1].iter() {
            level.push(QType::bang(a.clone()));
        }
        by_depth.push(level);
    }
    by_depth.into_iter().flatten().collect()
}

impl QType {
    /// Constructor depth; leaves are depth 1.
    pub fn depth(&self) -> usize {
        match self {
            QType::Qubit | QType::One | QType::Bool => 1,
            QType::Tensor(a, b) | QType::Arrow(a, b) | QType::Circ(a, b) => {
                1 + a.depth().max(b.depth())
            }
            QType::Bang(a) => 1 + a.depth(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QType::*;

    fn q() -> QType {
        Qubit
    }

    #[test]
    fn valid_examples() {
        assert!(valid(&QType::tensor(q(), One)));
        assert!(!valid(&Bool));
        assert!(!valid(&QType::bang(q())));
    }

    #[test]
    fn valid_t_examples() {
        assert!(valid_t(&QType::bang(QType::circ(q(), q()))));
        assert!(!valid_t(&QType::bang(QType::bang(One))));
        assert!(!valid_t(&QType::circ(Bool, One)));
    }

    #[test]
    fn valid_implies_valid_t() {
        for t in all_types_up_to_depth(3) {
            if valid(&t) {
                assert!(valid_t(&t), "valid but not validT: {t}");
            }
        }
    }

    #[test]
    fn subtype_examples() {
        assert!(subtype(&q(), &q()));
        assert!(!subtype(&One, &QType::bang(One)));
        // Contravariance on the left of arrow.
        assert!(subtype(
            &QType::arrow(Bool, QType::bang(q())),
            &QType::arrow(QType::bang(Bool), q()),
        ));
    }

    #[test]
    fn const_types_exact() {
        assert_eq!(
            const_type(CircConst::Box, &q(), &q()).unwrap(),
            QType::arrow(
                QType::bang(QType::arrow(q(), q())),
                QType::bang(QType::circ(q(), q()))
            )
        );
        assert_eq!(
            const_type(CircConst::Unbox, &q(), &One).unwrap(),
            QType::arrow(
                QType::circ(q(), One),
                QType::bang(QType::arrow(q(), One))
            )
        );
        assert_eq!(
            const_type(CircConst::Rev, &One, &One).unwrap(),
            QType::arrow(
                QType::circ(One, One),
                QType::bang(QType::circ(One, One))
            )
        );
        assert_eq!(
            const_type(CircConst::Box, &Bool, &q()),
            Err(TypeError::NotQuantumData(Bool))
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_types_up_to_depth(1).len(), 3);
        // 3 leaves + 3 binary constructors over 3x3 + 3 bangs.
        assert_eq!(all_types_up_to_depth(2).len(), 33);
        for t in all_types_up_to_depth(3) {
            assert!(t.depth() <= 3);
        }
    }

    #[test]
    fn base_types_only_subtype_themselves() {
        for t in all_types_up_to_depth(3) {
            if subtype(&Qubit, &t) {
                assert_eq!(t, Qubit);
            }
            if subtype(&One, &t) {
                assert_eq!(t, One);
            }
            if subtype(&Bool, &t) {
                assert_eq!(t, Bool);
            }
        }
    }

    #[test]
    fn bang_supertype_forces_bang_subtype() {
        for a in all_types_up_to_depth(2) {
            for b in all_types_up_to_depth(2) {
                if subtype(&a, &QType::bang(b.clone())) {
                    match &a {
                        Bang(a1) => assert!(subtype(a1, &b)),
                        _ => panic!("non-bang subtype of bang: {a}"),
                    }
                }
            }
        }
    }
}
