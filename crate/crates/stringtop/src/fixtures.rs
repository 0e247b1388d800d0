//! The desk-scale example spaces everything is tested against: spheres, the
//! complex projective plane, and classifying-space presentations.

use crate::cdga::{FreeCdga, Monomial, Poly};
use crate::pd::FinitePdAlgebra;
use crate::scalar::rat;

/// `H*(S²)`: basis `1, x₂` with `x² = 0`, fundamental class `x`.
pub fn s2() -> FinitePdAlgebra {
    FinitePdAlgebra::new(
        "s2",
        vec![("1".to_string(), 0), ("x".to_string(), 2)],
        "1",
        2,
        "x",
        vec![(("x".to_string(), "x".to_string()), vec![])],
        vec![],
    )
    .expect("s2 fixture")
}

/// `H*(S³)`: basis `1, x₃` with `x² = 0`, fundamental class `x`.
pub fn s3() -> FinitePdAlgebra {
    FinitePdAlgebra::new(
        "s3",
        vec![("1".to_string(), 0), ("x".to_string(), 3)],
        "1",
        3,
        "x",
        vec![(("x".to_string(), "x".to_string()), vec![])],
        vec![],
    )
    .expect("s3 fixture")
}

/// `H*(CP²) = Q[x]/(x³)`, `|x| = 2`, fundamental class `x²`.
pub fn cp2() -> FinitePdAlgebra {
    FinitePdAlgebra::new(
        "cp2",
        vec![("1".to_string(), 0), ("x".to_string(), 2), ("x2".to_string(), 4)],
        "1",
        4,
        "x2",
        vec![
            (("x".to_string(), "x".to_string()), vec![("x2".to_string(), rat(1))]),
            (("x".to_string(), "x2".to_string()), vec![]),
            (("x2".to_string(), "x2".to_string()), vec![]),
        ],
        vec![],
    )
    .expect("cp2 fixture")
}

/// Corrupted CP² table: the fundamental class is declared in degree 2, which
/// violates duality axiom (i).
pub fn cp2_bad_fundamental() -> FinitePdAlgebra {
    FinitePdAlgebra::new(
        "cp2-bad",
        vec![("1".to_string(), 0), ("x".to_string(), 2), ("x2".to_string(), 4)],
        "1",
        4,
        "x",
        vec![
            (("x".to_string(), "x".to_string()), vec![("x2".to_string(), rat(1))]),
            (("x".to_string(), "x2".to_string()), vec![]),
            (("x2".to_string(), "x2".to_string()), vec![]),
        ],
        vec![],
    )
    .expect("cp2-bad fixture")
}

/// A finite cdga with a nonzero differential (not a duality algebra): basis
/// `1, a₂, b₃` with `d(a) = b` and all positive products zero.
pub fn acyclic_pair() -> FinitePdAlgebra {
    FinitePdAlgebra::new(
        "acyclic-pair",
        vec![("1".to_string(), 0), ("a".to_string(), 2), ("b".to_string(), 3)],
        "1",
        3,
        "b",
        vec![
            (("a".to_string(), "a".to_string()), vec![]),
            (("a".to_string(), "b".to_string()), vec![]),
            (("b".to_string(), "b".to_string()), vec![]),
        ],
        vec![("a".to_string(), vec![("b".to_string(), rat(1))])],
    )
    .expect("acyclic-pair fixture")
}

/// Sullivan model of S²: `∧(x₂, y₃)`, `dy = x²`.
pub fn s2_sullivan() -> FreeCdga {
    FreeCdga::new(
        vec![("x".to_string(), 2), ("y".to_string(), 3)],
        vec![("y".to_string(), Poly::term(Monomial::from_exps(vec![2, 0]), rat(1)))],
    )
    .expect("s2 sullivan model")
}

/// Sullivan (minimal) model of S³: `∧(x₃)`, `d = 0`.
pub fn s3_sullivan() -> FreeCdga {
    FreeCdga::new(vec![("x".to_string(), 3)], vec![]).expect("s3 sullivan model")
}

/// Sullivan model of CP²: `∧(x₂, y₅)`, `dy = x³`.
pub fn cp2_sullivan() -> FreeCdga {
    FreeCdga::new(
        vec![("x".to_string(), 2), ("y".to_string(), 5)],
        vec![("y".to_string(), Poly::term(Monomial::from_exps(vec![3, 0]), rat(1)))],
    )
    .expect("cp2 sullivan model")
}

/// Quotient map from a Sullivan model onto its finite duality model; the
/// value of each Sullivan generator as an element of the algebra.
pub fn sullivan_to_pd_values(model: &FreeCdga, algebra: &FinitePdAlgebra) -> Vec<crate::dga::Elem> {
    model
        .generators()
        .iter()
        .map(|g| {
            match algebra
                .basis()
                .index_of(g.degree, &g.name)
                .or_else(|| algebra.basis().index_of(g.degree, &g.name.to_string()))
            {
                Some(idx) => crate::dga::Elem::basis(g.degree, idx),
                None => crate::dga::Elem::zero(g.degree),
            }
        })
        .collect()
}

/// Classifying-space presentation: even generator degrees of `∧(x_1,…,x_n)`
/// with zero differential.
#[derive(Debug, Clone, PartialEq)]
pub struct BgPresentation {
    pub name: String,
    pub degrees: Vec<i32>,
}

impl BgPresentation {
    pub fn new(name: &str, degrees: Vec<i32>) -> Result<Self, String> {
        if degrees.is_empty() {
            return Err("a classifying-space presentation needs at least one generator".into());
        }
        for &d in &degrees {
            if d < 2 || d % 2 != 0 {
                return Err(format!("generator degree {d} must be even and >= 2"));
            }
        }
        Ok(BgPresentation { name: name.to_string(), degrees })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// The model `∧(x_1,…,x_n)` with zero differential.
    pub fn model(&self) -> FreeCdga {
        let gens = self
            .degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (format!("x{}", i + 1), d))
            .collect();
        FreeCdga::new(gens, vec![]).expect("classifying space model")
    }
}

/// `BS¹`: one generator of degree 2.
pub fn bs1() -> BgPresentation {
    BgPresentation::new("bs1", vec![2]).unwrap()
}

/// `BSU(2)`: one generator of degree 4.
pub fn bsu2() -> BgPresentation {
    BgPresentation::new("bsu2", vec![4]).unwrap()
}

/// Rank-two example with generator degrees 2 and 4.
pub fn bg_rank2() -> BgPresentation {
    BgPresentation::new("bg-rank2", vec![2, 4]).unwrap()
}
