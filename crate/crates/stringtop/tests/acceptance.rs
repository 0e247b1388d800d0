//! Acceptance suite: one test per criterion, each printing a pass line. All
//! checks are exact — rational arithmetic, zero tolerance.

use stringtop::bar::{
    bar_coproduct, hochschild_complex, loop_pair_complex, reduced_bar_complex, BarWord, ModuleSlot,
};
use stringtop::dga::DgaTable;
use stringtop::fixtures;
use stringtop::graded::{Degree, DegreeRange};
use stringtop::ops;
use stringtop::parse::{parse_algebra, AlgebraFile};
use stringtop::pd::PdVerdict;
use stringtop::rat;
use stringtop::sullivan::multiplication_model;

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load_pd(name: &str) -> stringtop::pd::FinitePdAlgebra {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
    match parse_algebra(&text).expect("fixture parses") {
        AlgebraFile::FinitePd { algebra, .. } => algebra,
        other => panic!("expected finite-pd, got {}", other.kind()),
    }
}

fn load_sullivan(name: &str) -> stringtop::cdga::FreeCdga {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
    match parse_algebra(&text).expect("fixture parses") {
        AlgebraFile::Sullivan { algebra, .. } => algebra,
        other => panic!("expected sullivan, got {}", other.kind()),
    }
}

fn render_class(
    basis: &stringtop::GradedBasis,
    e: &stringtop::dga::Elem,
) -> String {
    use num_traits::Zero;
    let parts: Vec<String> = e
        .coords
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let label = basis.label(e.degree, *i);
            if c == &rat(1) {
                label.to_string()
            } else if c == &rat(-1) {
                format!("-{label}")
            } else {
                format!("{c}*{label}")
            }
        })
        .collect();
    parts.join(" + ").replace("+ -", "- ")
}

#[test]
fn criterion_01_duality_axioms() {
    for name in ["s2.alg", "s3.alg", "cp2.alg"] {
        let algebra = load_pd(name);
        assert!(
            algebra.check_poincare_duality().unwrap().passed(),
            "{name} must satisfy the duality axioms"
        );
    }
    let bad = load_pd("cp2-bad.alg");
    match bad.check_poincare_duality().unwrap() {
        PdVerdict::FailAxiomI { reason } => {
            assert!(reason.contains("axiom (i)"), "failure must name axiom (i): {reason}")
        }
        v => panic!("corrupted table must fail axiom (i), got {v:?}"),
    }
    println!("criterion 01: PASS — duality axioms hold on S2, S3, CP2 and fail by axiom (i) on the corrupted table");
}

#[test]
fn criterion_02_diagonal_classes() {
    let expected = [
        ("s2.alg", "1⊗x + x⊗1"),
        ("s3.alg", "1⊗x - x⊗1"),
        ("cp2.alg", "1⊗x2 + x⊗x + x2⊗1"),
    ];
    for (name, want) in expected {
        let algebra = load_pd(name);
        // diagonal_class verifies the cocycle and centrality conditions on
        // every basis element before returning
        let data = algebra.diagonal_class().unwrap();
        let got = render_class(&data.tensor.table.basis, &data.class);
        assert_eq!(got, want, "{name}");
    }
    println!("criterion 02: PASS — diagonal classes match and are central cocycles");
}

#[test]
fn criterion_03_loop_homology_cross_oracle() {
    let s = ops::loop_betti_sullivan(&load_sullivan("s3-sullivan.alg"), 10).unwrap();
    let h = ops::loop_betti_hochschild(&load_pd("s3.alg"), 10).unwrap();
    assert_eq!(s.betti_vec(), h.betti_vec(), "S3 routes disagree");
    assert_eq!(s.betti_vec(), vec![1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1], "S3 expected pattern");
    let s2s = ops::loop_betti_sullivan(&load_sullivan("s2-sullivan.alg"), 6).unwrap();
    let s2h = ops::loop_betti_hochschild(&load_pd("s2.alg"), 6).unwrap();
    assert_eq!(s2s.betti_vec(), s2h.betti_vec(), "S2 routes disagree");
    println!("criterion 03: PASS — Sullivan and Hochschild loop Betti numbers agree (S3 to 10, S2 to 6)");
}

#[test]
fn criterion_04_coproduct_euler_criterion() {
    let s3 = ops::loop_coproduct_psi(&load_pd("s3.alg"), 6).unwrap();
    assert!(s3.trivial, "S3 coproduct must be trivial");
    assert_eq!(s3.euler_characteristic, 0);
    let s2 = ops::loop_coproduct_psi(&load_pd("s2.alg"), 5).unwrap();
    assert_eq!(s2.omega_coefficient, rat(2), "S2 coefficient must be χ = 2");
    let cp2 = ops::loop_coproduct_psi(&load_pd("cp2.alg"), 5).unwrap();
    assert_eq!(cp2.omega_coefficient, rat(3), "CP2 coefficient must be χ = 3");
    println!("criterion 04: PASS — coproduct trivial for χ = 0 and carries χ·Ω⊗c otherwise (2 for S2, 3 for CP2)");
}

#[test]
fn criterion_05_module_property() {
    for name in ["s3.alg", "cp2.alg"] {
        let algebra = load_pd(name);
        let report = ops::check_module_property(&algebra, 8).unwrap();
        match report {
            ops::ModulePropertyReport::Pass { quadruples_checked } => {
                assert!(quadruples_checked > 0, "{name}: nothing checked");
            }
            ops::ModulePropertyReport::Counterexample { description } => {
                panic!("{name}: module property falsified: {description}")
            }
        }
    }
    println!("criterion 05: PASS — module property holds on all quadruples of total degree ≤ 8 (S3, CP2)");
}

#[test]
fn criterion_06_bg_loop_product_trivial() {
    for (fixture, n) in [("bs1.alg", 10), ("bsu2.alg", 10), ("bg-rank2.alg", 8)] {
        let text = std::fs::read_to_string(fixture_path(fixture)).unwrap();
        let g = match parse_algebra(&text).unwrap() {
            AlgebraFile::Bg { presentation, .. } => presentation,
            other => panic!("expected bg, got {}", other.kind()),
        };
        let v = ops::bg_loop_product(&g, n).unwrap();
        assert_eq!(v, ops::BgVerdict::LoopProductTrivial { max_degree: n }, "{fixture}");
    }
    println!("criterion 06: PASS — classifying-space loop product trivial (BS1 and BSU(2) to 10, rank two to 8)");
}

#[test]
fn criterion_07_bg_coproduct_injective() {
    for fixture in ["bs1.alg", "bsu2.alg"] {
        let text = std::fs::read_to_string(fixture_path(fixture)).unwrap();
        let g = match parse_algebra(&text).unwrap() {
            AlgebraFile::Bg { presentation, .. } => presentation,
            other => panic!("expected bg, got {}", other.kind()),
        };
        let v = ops::bg_loop_coproduct(&g, 10).unwrap();
        assert_eq!(v, ops::BgVerdict::DualCoproductSurjective { max_degree: 10 }, "{fixture}");
    }
    println!("criterion 07: PASS — dual coproduct surjective to degree 10 (BS1, BSU(2)), hence coproduct injective");
}

#[test]
fn criterion_08_diagonal_ext_pattern() {
    let report = ops::ext_diagonal(&fixtures::bs1().model(), 2, 9, None).unwrap();
    assert!(report.matched(), "{:?}", report.failure);
    for p in -9..=9 {
        let expected = usize::from(p >= -1 && (p + 1) % 2 == 0);
        assert_eq!(report.dims[&p], expected, "degree {p}");
    }
    assert_eq!(report.shift, Some(-1), "single consistent shift");
    println!("criterion 08: PASS — diagonal Ext of the circle classifying space is one-dimensional in degrees -1, 1, …, 9 (shift -1)");
}

#[test]
fn criterion_09_fiber_intersection() {
    let s3 = ops::intersection_with_fiber(&load_pd("s3.alg"), 7).unwrap();
    assert_eq!(s3.injective_through, Some(7), "S3 inclusion must be injective through 7");
    let hoch = ops::intersection_with_fiber(&load_pd("s2.alg"), 6).unwrap();
    let sull = ops::sullivan_fiber_ranks(&load_sullivan("s2-sullivan.alg"), &load_pd("s2.alg"), 6)
        .unwrap();
    assert_eq!(hoch.ranks, sull.ranks, "S2 fiber-intersection ranks disagree between routes");
    println!("criterion 09: PASS — fundamental-class inclusion injective on S3 through 7; S2 ranks agree across routes through 6");
}

#[test]
fn criterion_10_property_suites() {
    // d² = 0 on every constructed complex, all fixtures
    for algebra in [fixtures::s2(), fixtures::s3(), fixtures::cp2()] {
        let table = algebra.to_table();
        let bar = reduced_bar_complex(&table, 8).unwrap();
        bar.complex.check_dd_zero(DegreeRange::new(0, 7)).unwrap();
        let ch = hochschild_complex(&table, 8).unwrap();
        ch.complex.check_dd_zero(DegreeRange::new(0, 7)).unwrap();
        let pair = loop_pair_complex(&table, 7).unwrap();
        pair.complex.check_dd_zero(DegreeRange::new(0, 6)).unwrap();
        let (model, _, target) = multiplication_model(&algebra, 6).unwrap();
        let e = model.extension.materialize(8).unwrap();
        e.table.complex().check_dd_zero(DegreeRange::new(0, 7)).unwrap();
        model.verify(&target).unwrap();
    }
    for model in [
        fixtures::s2_sullivan(),
        fixtures::s3_sullivan(),
        fixtures::cp2_sullivan(),
        fixtures::bs1().model(),
        fixtures::bsu2().model(),
        fixtures::bg_rank2().model(),
    ] {
        let lm = model.loop_space_model().unwrap();
        let (cx, _) = lm.algebra.cochain_complex(9).unwrap();
        cx.check_dd_zero(DegreeRange::new(0, 8)).unwrap();
    }
    // bar coproduct counit and coassociativity through word length 5
    let letters = [(2, 0), (3, 0), (4, 1), (2, 1), (3, 2)];
    for len in 0..=5 {
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: letters[..len].to_vec(),
            right: ModuleSlot::Ground,
        };
        let cp = bar_coproduct(&word);
        assert_eq!(cp.len(), len + 1);
        let mut lhs = Vec::new();
        for (u, v) in &cp {
            for (u1, u2) in bar_coproduct(u) {
                lhs.push((u1.letters, u2.letters, v.letters.clone()));
            }
        }
        let mut rhs = Vec::new();
        for (u, v) in &cp {
            for (v1, v2) in bar_coproduct(v) {
                rhs.push((u.letters.clone(), v1.letters, v2.letters));
            }
        }
        lhs.sort();
        rhs.sort();
        assert_eq!(lhs, rhs, "coassociativity at length {len}");
    }
    // homology is basis-order independent: permute every degree with ten
    // seeded shuffles and compare Betti numbers
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let (complex, _) = fixtures::s2_sullivan()
        .loop_space_model()
        .unwrap()
        .algebra
        .cochain_complex(7)
        .unwrap();
    let reference = complex.homology(DegreeRange::new(0, 6)).unwrap();
    for seed in 0..10u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let shuffled = permute_complex(&complex, &mut |n| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            perm
        });
        let h = shuffled.homology(DegreeRange::new(0, 6)).unwrap();
        for p in 0..=6 {
            assert_eq!(h.betti(p), reference.betti(p), "seed {seed}, degree {p}");
        }
    }
    println!("criterion 10: PASS — d² = 0 everywhere, coproduct coassociative to length 5, homology basis-order independent on 10 seeds");
}

/// Rebuilds a complex with each degree's basis shuffled.
fn permute_complex(
    complex: &stringtop::graded::ChainComplex<stringtop::Rat>,
    make_perm: &mut dyn FnMut(usize) -> Vec<usize>,
) -> stringtop::graded::ChainComplex<stringtop::Rat> {
    use std::collections::BTreeMap;
    use stringtop::matrix::Matrix;
    use stringtop::{GradedBasis, LinearMapByDegree};
    let mut perms: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    let mut basis = GradedBasis::new();
    for d in complex.basis.degrees() {
        let n = complex.basis.dim(d);
        let perm = make_perm(n);
        for &old in &perm {
            basis.push(d, complex.basis.label(d, old).to_string()).unwrap();
        }
        perms.insert(d, perm);
    }
    let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    for d in complex.basis.degrees() {
        let block = complex.diff.block(d);
        if block.rows() == 0 || block.cols() == 0 {
            continue;
        }
        let rows = perms.get(&(d + 1)).cloned().unwrap_or_default();
        let cols = &perms[&d];
        let mut new_block = Matrix::zero(block.rows(), block.cols());
        for (new_r, &old_r) in rows.iter().enumerate() {
            for (new_c, &old_c) in cols.iter().enumerate() {
                new_block.set(new_r, new_c, block.get(old_r, old_c).clone());
            }
        }
        diff.set_block(d, new_block);
    }
    stringtop::graded::ChainComplex::new(basis, diff, complex.valid).unwrap()
}

#[test]
fn criterion_11_based_loops_of_s3() {
    let table = DgaTable::from_free(&fixtures::s3_sullivan(), 12).unwrap();
    let bar = reduced_bar_complex(&table, 9).unwrap();
    let h = bar.complex.homology(DegreeRange::new(0, 8)).unwrap();
    for p in 0..=8 {
        let expected = usize::from(p % 2 == 0);
        assert_eq!(h.betti(p), expected, "degree {p}");
    }
    println!("criterion 11: PASS — based-loop cohomology of S3 is one class in each even degree 0..8");
}
