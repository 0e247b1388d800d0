//! Property suites: randomized linear-algebra invariants, Leibniz behaviour
//! of derivations, sign bookkeeping of the bar operators, and stability of
//! the classifying-space verdicts under growing truncation.

use proptest::prelude::*;
use stringtop::bar::{bar_d0, bar_d1, BarWord, ModuleSlot};
use stringtop::cdga::{FreeCdga, Monomial, Poly};
use stringtop::fixtures;
use stringtop::graded::{
    graded_dual, hom_complex_differential, ChainComplex, DegreeRange, GradedBasis,
    LinearMapByDegree,
};
use stringtop::matrix::Matrix;
use stringtop::ops;
use stringtop::{rat, Rat};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(
        (rows, cols, entries) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-4i64..=4, r * c))
        })
    ) {
        let mut m: Matrix<Rat> = Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rat(entries[r * cols + c]));
            }
        }
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }
}

/// Builds a three-term complex `C0 → C1 → C2` with `d² = 0` from a random
/// first map: the second map is assembled from the left null space.
fn random_complex(a: Matrix<Rat>, picks: &[i64]) -> ChainComplex<Rat> {
    let n0 = a.cols();
    let n1 = a.rows();
    let left_null = a.transpose().kernel_basis(); // rows annihilating col(A)
    let n2 = left_null.len().min(2).max(1);
    let mut b: Matrix<Rat> = Matrix::zero(n2, n1);
    for r in 0..n2 {
        for (k, v) in left_null.iter().enumerate() {
            let coeff = rat(picks[(r * left_null.len() + k) % picks.len().max(1)]);
            for c in 0..n1 {
                let cur = b.get(r, c).clone();
                b.set(r, c, cur + coeff.clone() * v[c].clone());
            }
        }
    }
    let mut basis = GradedBasis::new();
    for i in 0..n0 {
        basis.push(0, format!("a{i}")).unwrap();
    }
    for i in 0..n1 {
        basis.push(1, format!("b{i}")).unwrap();
    }
    for i in 0..n2 {
        basis.push(2, format!("c{i}")).unwrap();
    }
    let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    diff.set_block(0, a);
    diff.set_block(1, b);
    ChainComplex::new(basis, diff, DegreeRange::all()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hom_differential_squares_to_zero_on_random_data(
        a_entries in proptest::collection::vec(-3i64..=3, 6),
        phi_entries in proptest::collection::vec(-3i64..=3, 16),
        picks in proptest::collection::vec(-2i64..=2, 8),
    ) {
        let mut a = Matrix::zero(2, 3);
        for r in 0..2 {
            for c in 0..3 {
                a.set(r, c, rat(a_entries[r * 3 + c]));
            }
        }
        let complex = random_complex(a, &picks);
        // random degree-0 endomorphism
        let mut phi = LinearMapByDegree::zero(
            complex.basis.clone(),
            complex.basis.clone(),
            0,
        );
        let mut k = 0;
        for d in complex.basis.degrees() {
            let n = complex.basis.dim(d);
            let mut block = Matrix::zero(n, n);
            for r in 0..n {
                for c in 0..n {
                    block.set(r, c, rat(phi_entries[k % phi_entries.len()]));
                    k += 1;
                }
            }
            phi.set_block(d, block);
        }
        complex.check_dd_zero(DegreeRange::new(-1, 2)).unwrap();
        let d1 = hom_complex_differential(&phi, &complex, &complex).unwrap();
        let d2 = hom_complex_differential(&d1, &complex, &complex).unwrap();
        prop_assert!(d2.is_zero());
    }

    #[test]
    fn dual_is_an_involution_on_betti(
        a_entries in proptest::collection::vec(-3i64..=3, 6),
        picks in proptest::collection::vec(-2i64..=2, 8),
    ) {
        let mut a = Matrix::zero(2, 3);
        for r in 0..2 {
            for c in 0..3 {
                a.set(r, c, rat(a_entries[r * 3 + c]));
            }
        }
        let complex = random_complex(a, &picks);
        let h = complex.homology(DegreeRange::new(0, 2)).unwrap();
        let (dual_basis, dual_diff) = graded_dual(&complex.basis, &complex.diff);
        let dual = ChainComplex::new(dual_basis, dual_diff, DegreeRange::all()).unwrap();
        let hd = dual.homology(DegreeRange::new(-2, 0)).unwrap();
        for p in 0..=2 {
            prop_assert_eq!(h.betti(p), hd.betti(-p), "degree {}", p);
        }
    }
}

fn loop_s2() -> FreeCdga {
    fixtures::s2_sullivan().loop_space_model().unwrap().algebra
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivations_satisfy_signed_leibniz(
        seed_a in 0usize..64,
        seed_b in 0usize..64,
    ) {
        // the suspension derivation on the S2 loop model
        let algebra = loop_s2();
        let monos: Vec<Monomial> = (0..=6)
            .flat_map(|d| algebra.monomial_basis(d))
            .collect();
        let a = monos[seed_a % monos.len()].clone();
        let b = monos[seed_b % monos.len()].clone();
        let n = algebra.generators().len();
        let sx = algebra.generator_index("sx").unwrap();
        let sy = algebra.generator_index("sy").unwrap();
        let mut values = vec![Poly::zero(); n];
        values[algebra.generator_index("x").unwrap()] = Poly::generator(n, sx);
        values[algebra.generator_index("y").unwrap()] = Poly::generator(n, sy);
        let parity = 1; // degree −1 derivation
        let pa = Poly::term(a.clone(), rat(1));
        let pb = Poly::term(b.clone(), rat(1));
        let product = pa.mul(&pb, algebra.generators());
        let lhs = algebra.apply_derivation(&values, parity, &product).unwrap();
        let da = algebra.apply_derivation(&values, parity, &pa).unwrap();
        let db = algebra.apply_derivation(&values, parity, &pb).unwrap();
        let deg_a = a.degree(algebra.generators());
        let sign = if (parity * deg_a).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        let rhs = da.mul(&pb, algebra.generators())
            .add(&pa.mul(&db.scale(&sign), algebra.generators()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_operators_preserve_total_degree(
        letter_picks in proptest::collection::vec(0usize..3, 0..4),
    ) {
        // over the CP2 table, letters are x (degree 2) and x2 (degree 4)
        let table = fixtures::cp2().to_table();
        let letters: Vec<(i32, usize)> = vec![(2, 0), (4, 0), (2, 0)];
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: letter_picks.iter().map(|&i| letters[i]).collect(),
            right: ModuleSlot::Ground,
        };
        for (w, _) in bar_d0(&table, &word).into_iter().chain(bar_d1(&table, &word)) {
            prop_assert_eq!(w.degree(), word.degree() + 1);
        }
    }
}

#[test]
fn bg_verdicts_are_stable_under_growing_truncation() {
    let g = fixtures::bs1();
    for n in [4, 6, 8] {
        assert_eq!(
            ops::bg_loop_product(&g, n).unwrap(),
            ops::BgVerdict::LoopProductTrivial { max_degree: n }
        );
        assert_eq!(
            ops::bg_loop_coproduct(&g, n).unwrap(),
            ops::BgVerdict::DualCoproductSurjective { max_degree: n }
        );
    }
}

#[test]
fn module_property_also_holds_on_s2() {
    // χ ≠ 0 does not interfere with the module structure of the product
    let report = ops::check_module_property(&fixtures::s2(), 7).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn hochschild_betti_of_nonzero_differential_algebra() {
    // the contractible pair: H(A) = Q, so loop homology collapses too
    let a = fixtures::acyclic_pair();
    let table = a.to_table();
    let ch = stringtop::bar::hochschild_complex(&table, 7).unwrap();
    let h = ch.complex.homology(DegreeRange::new(0, 6)).unwrap();
    assert_eq!(h.betti(0), 1);
    for p in 1..=6 {
        assert_eq!(h.betti(p), 0, "degree {p}");
    }
}
