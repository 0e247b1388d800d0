//! Relative Sullivan models, built degree by degree.
//!
//! Given a cdga morphism `φ: B → C` (both materialized as tables), new
//! generators are adjoined to `B` greedily: first closed generators to make
//! `H(φ)` surjective in the current degree, then generators killing the
//! kernel one degree up. The result is `B ⊗ ∧Z` with a morphism to `C`
//! inducing an isomorphism on `H^{≤ max}` and an injection in degree
//! `max + 1`. Minimality is not enforced.

use crate::cdga::CdgaMorphism;
use crate::dga::{DgaTable, Elem, ExtElem, Extension, MaterializedExtension, TableMorphism, TensorDga};
use crate::graded::{Degree, DegreeRange, GradedError, HomologySummary, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::pd::FinitePdAlgebra;
use crate::scalar::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SullivanError {
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("morphism is not a chain map on the base at degree {0}")]
    NotAChainMap(Degree),
    #[error("model construction did not stabilize at degree {0}")]
    NonConvergent(Degree),
    #[error("{0}")]
    Graded(#[from] GradedError),
}

/// A computed relative model `base ⊗ ∧Z → target`.
pub struct RelativeModel {
    pub extension: Extension,
    /// The extension flattened through `max_degree + 2`.
    pub materialized: MaterializedExtension,
    /// Image of every extension slot in the target.
    pub witness: TableMorphism,
    /// Generator images in the target, aligned with `extension.gens`.
    pub gen_images: Vec<Elem>,
    pub max_degree: Degree,
}

impl RelativeModel {
    pub fn witness_map(&self, target: &DgaTable) -> LinearMapByDegree<Rat> {
        self.witness.to_linear_map(&self.materialized.table.basis, &target.basis)
    }

    /// Betti-by-Betti verification that the witness is a quasi-isomorphism up
    /// to `max_degree` and injective one degree above.
    pub fn verify(&self, target: &DgaTable) -> Result<(), SullivanError> {
        let h_src = self
            .materialized
            .table
            .complex()
            .homology(DegreeRange::new(0, self.max_degree + 1))?;
        let h_tgt = target.complex().homology(DegreeRange::new(0, self.max_degree + 1))?;
        let phi = self.witness_map(target);
        let induced = crate::graded::induced_on_homology(&phi, &h_src, &h_tgt)?;
        for p in 0..=self.max_degree {
            let block = induced.block(p);
            let (rows, cols) = (block.rows(), block.cols());
            if rows != cols || block.rank() != rows {
                return Err(SullivanError::NonConvergent(p));
            }
        }
        let top = induced.block(self.max_degree + 1);
        if top.rank() != top.cols() {
            return Err(SullivanError::NonConvergent(self.max_degree + 1));
        }
        Ok(())
    }
}

fn eval_on_slots(
    ext: &Extension,
    m: &MaterializedExtension,
    phi_base: &BTreeMap<(Degree, usize), Elem>,
    gen_images: &[Elem],
    target: &DgaTable,
) -> TableMorphism {
    let mut values = BTreeMap::new();
    for (&d, list) in &m.slots {
        for (slot, (bd, bi, w)) in list.iter().enumerate() {
            let mut image = phi_base
                .get(&(*bd, *bi))
                .cloned()
                .unwrap_or_else(|| Elem::zero(*bd));
            for (k, &e) in w.iter().enumerate() {
                for _ in 0..e {
                    image = target.mul_elem(&image, &gen_images[k]);
                }
            }
            debug_assert_eq!(image.degree, ext.term_degree(*bd, w));
            values.insert((d, slot), image);
        }
    }
    TableMorphism { values, degree: 0 }
}

/// Induced map on homology classes in a single degree; columns follow the
/// source representatives.
fn induced_block(
    phi: &TableMorphism,
    src_h: &HomologySummary<Rat>,
    tgt_h: &HomologySummary<Rat>,
    src_dim: usize,
    degree: Degree,
) -> Result<Matrix<Rat>, SullivanError> {
    let src = match src_h.at(degree) {
        Some(h) => h,
        None => return Ok(Matrix::zero(tgt_h.betti(degree), 0)),
    };
    let mut block = Matrix::zero(tgt_h.betti(degree), src.representatives.len());
    for (col, rep) in src.representatives.iter().enumerate() {
        // φ applied to a dense vector in this degree
        let mut image_acc: Option<Elem> = None;
        for (i, c) in rep.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let v = phi
                .values
                .get(&(degree, i))
                .cloned()
                .unwrap_or_else(|| Elem::zero(degree));
            let scaled = v.scale(c);
            image_acc = Some(match image_acc {
                Some(acc) => acc.add(&scaled),
                None => scaled,
            });
        }
        let image = image_acc.unwrap_or_else(|| Elem::zero(degree));
        let dense = image.to_dense(src_dim.max(image.coords.iter().map(|(i, _)| i + 1).max().unwrap_or(0)));
        let coords = tgt_h
            .class_coordinates(degree, &dense)
            .ok_or(SullivanError::NonConvergent(degree))?;
        for (row, c) in coords.into_iter().enumerate() {
            block.set(row, col, c);
        }
    }
    Ok(block)
}

/// Core construction over tables. `phi_base` carries the image of every base
/// slot; it must be a unital chain algebra map.
pub fn relative_sullivan_model(
    base: &DgaTable,
    phi_base: &BTreeMap<(Degree, usize), Elem>,
    target: &DgaTable,
    max_degree: Degree,
) -> Result<RelativeModel, SullivanError> {
    let needed = max_degree + 2;
    if base.valid.hi < needed || target.valid.hi < needed {
        return Err(SullivanError::InsufficientTruncation(format!(
            "relative model up to {max_degree} needs base and target materialized through {needed}"
        )));
    }
    // the source must be cohomologically connected and the map unital
    let h0 = base.complex().homology(DegreeRange::new(0, 0))?;
    if h0.betti(0) != 1 {
        return Err(SullivanError::NotAChainMap(0));
    }
    match phi_base.get(&(0, base.unit)) {
        Some(e) if *e == target.one() => {}
        _ => return Err(SullivanError::NotAChainMap(0)),
    }
    // base map must commute with differentials
    for d in base.basis.degrees() {
        for i in 0..base.basis.dim(d) {
            if d + 1 > needed {
                continue;
            }
            let b = Elem::basis(d, i);
            let db = base.d_elem(&b);
            let mut lhs = Elem::zero(d + 1);
            for (j, c) in &db.coords {
                lhs = lhs.add(
                    &phi_base
                        .get(&(d + 1, *j))
                        .cloned()
                        .unwrap_or_else(|| Elem::zero(d + 1))
                        .scale(c),
                );
            }
            let rhs = target.d_elem(&phi_base.get(&(d, i)).cloned().unwrap_or_else(|| Elem::zero(d)));
            if lhs != rhs {
                return Err(SullivanError::NotAChainMap(d));
            }
        }
    }
    let h_tgt = target.complex().homology(DegreeRange::new(0, max_degree + 1))?;
    let mut ext = Extension::trivial(base.clone());
    let mut gen_images: Vec<Elem> = Vec::new();
    let mut per_degree_count: BTreeMap<Degree, usize> = BTreeMap::new();

    for n in 1..=max_degree {
        // make H^n(φ) surjective
        for round in 0.. {
            if round > 32 {
                return Err(SullivanError::NonConvergent(n));
            }
            let m = ext.materialize(n + 2)?;
            let phi = eval_on_slots(&ext, &m, phi_base, &gen_images, target);
            let h_src = m.table.complex().homology(DegreeRange::new(n, n))?;
            let block = induced_block(&phi, &h_src, &h_tgt, target.basis.dim(n), n)?;
            let target_classes = h_tgt.betti(n);
            if target_classes == 0 {
                break;
            }
            let probe = block.hstack(&Matrix::identity(target_classes));
            let (_, pivots) = probe.rref();
            let missing: Vec<usize> = pivots
                .into_iter()
                .filter(|&c| c >= block.cols())
                .map(|c| c - block.cols())
                .collect();
            if missing.is_empty() {
                break;
            }
            for j in missing {
                let rep = &h_tgt.at(n).expect("classes exist").representatives[j];
                let count = per_degree_count.entry(n).or_insert(0);
                let name = format!("z{}_{}", n, count);
                *count += 1;
                ext.adjoin(name, n, ExtElem::zero());
                gen_images.push(Elem::from_dense(n, rep));
            }
        }
        // kill the kernel of H^{n+1}(φ)
        for round in 0.. {
            if round > 32 {
                return Err(SullivanError::NonConvergent(n + 1));
            }
            let m = ext.materialize(n + 2)?;
            let phi = eval_on_slots(&ext, &m, phi_base, &gen_images, target);
            let h_src = m.table.complex().homology(DegreeRange::new(n + 1, n + 1))?;
            let block = induced_block(&phi, &h_src, &h_tgt, target.basis.dim(n + 1), n + 1)?;
            if block.cols() == 0 {
                break;
            }
            let kernel = block.kernel_basis();
            if kernel.is_empty() {
                break;
            }
            let reps = &h_src.at(n + 1).expect("source classes exist").representatives;
            for kappa in kernel {
                // cocycle representing the killed class
                let dim = m.table.basis.dim(n + 1);
                let mut zeta = vec![Rat::zero(); dim];
                for (i, c) in kappa.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (k, v) in reps[i].iter().enumerate() {
                        zeta[k] += c.clone() * v.clone();
                    }
                }
                let zeta_elem = Elem::from_dense(n + 1, &zeta);
                // its image bounds in the target: solve d u = φ(ζ)
                let mut image = Elem::zero(n + 1);
                for (i, c) in &zeta_elem.coords {
                    image = image.add(
                        &phi.values
                            .get(&(n + 1, *i))
                            .cloned()
                            .unwrap_or_else(|| Elem::zero(n + 1))
                            .scale(c),
                    );
                }
                let rhs = image.to_dense(target.basis.dim(n + 1));
                let u = target
                    .diff
                    .block(n)
                    .solve(&rhs)
                    .ok_or(SullivanError::NonConvergent(n + 1))?;
                let count = per_degree_count.entry(n).or_insert(0);
                let name = format!("z{}_{}", n, count);
                *count += 1;
                ext.adjoin(name, n, m.ext_from_elem(&zeta_elem));
                gen_images.push(Elem::from_dense(n, &u));
            }
        }
    }
    let materialized = ext.materialize(max_degree + 2)?;
    let witness = eval_on_slots(&ext, &materialized, phi_base, &gen_images, target);
    Ok(RelativeModel { extension: ext, materialized, witness, gen_images, max_degree })
}

/// Relative model of a morphism of free cdgas.
pub fn relative_model_of_morphism(
    phi: &CdgaMorphism,
    max_degree: Degree,
) -> Result<(RelativeModel, DgaTable), SullivanError> {
    let hi = max_degree + 2;
    let base = DgaTable::from_free(&phi.source, hi)?;
    let target = DgaTable::from_free(&phi.target, hi)?;
    let phi_base = free_morphism_on_slots(phi, &target, hi);
    let model = relative_sullivan_model(&base, &phi_base, &target, max_degree)?;
    Ok((model, target))
}

fn free_morphism_on_slots(
    phi: &CdgaMorphism,
    target: &DgaTable,
    hi: Degree,
) -> BTreeMap<(Degree, usize), Elem> {
    let mut out = BTreeMap::new();
    for d in 0..=hi {
        let monomials = phi.source.monomial_basis(d);
        for (i, mono) in monomials.iter().enumerate() {
            let image_poly = phi.eval(&crate::cdga::Poly::term(mono.clone(), rat(1)));
            let mut image = Elem::zero(d);
            for (m, c) in image_poly.terms() {
                let label = m.padded(phi.target.generators().len()).display(phi.target.generators());
                if let Some(idx) = target.basis.index_of(d, &label) {
                    image = image.add(&Elem::basis(d, idx).scale(c));
                }
            }
            out.insert((d, i), image);
        }
    }
    out
}

/// Relative model of the multiplication `A ⊗ A → A of a finite algebra,
/// together with the tensor square it starts from.
pub fn multiplication_model(
    algebra: &FinitePdAlgebra,
    max_degree: Degree,
) -> Result<(RelativeModel, TensorDga, DgaTable), SullivanError> {
    let table = algebra.to_table();
    let tensor = DgaTable::tensor(&table, &table, max_degree + 2)?;
    let mut phi_base = BTreeMap::new();
    for (&d, list) in &tensor.slots {
        for (slot, &(p, i, q, j)) in list.iter().enumerate() {
            let prod = table.mul_elem(&Elem::basis(p, i), &Elem::basis(q, j));
            phi_base.insert((d, slot), prod);
        }
    }
    let model = relative_sullivan_model(&tensor.table, &phi_base, &table, max_degree)?;
    Ok((model, tensor, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{FreeCdga, Poly};
    use crate::fixtures;

    #[test]
    fn identity_adjoins_nothing() {
        let s3 = fixtures::s3_sullivan();
        let phi = CdgaMorphism::identity(&s3);
        let (model, target) = relative_model_of_morphism(&phi, 8).unwrap();
        assert!(model.extension.gens.is_empty());
        model.verify(&target).unwrap();
    }

    #[test]
    fn multiplication_of_odd_spheres_adjoins_one_even_generator() {
        // ∧(x₃)⊗∧(x'₃) → ∧(x₃): a single degree-2 generator with dz = x − x'
        let source = FreeCdga::new(
            vec![("x".to_string(), 3), ("xp".to_string(), 3)],
            vec![],
        )
        .unwrap();
        let target = fixtures::s3_sullivan();
        let phi = CdgaMorphism::new(
            source.clone(),
            target.clone(),
            vec![Poly::generator(1, 0), Poly::generator(1, 0)],
        )
        .unwrap();
        let (model, target_table) = relative_model_of_morphism(&phi, 8).unwrap();
        assert_eq!(model.extension.gens.len(), 1);
        assert_eq!(model.extension.gens[0].1, 2);
        // dz = x − x' up to sign
        let dz = &model.extension.d_gens[0];
        assert_eq!(dz.terms.len(), 2);
        model.verify(&target_table).unwrap();
    }

    #[test]
    fn augmentation_of_odd_sphere_is_killed_by_one_generator() {
        // ∧(x₃) → Q: adjoin one degree-2 generator with dz = x; acyclic result
        let source = fixtures::s3_sullivan();
        let target = FreeCdga::new(vec![("u".to_string(), 40)], vec![]).unwrap();
        // target ∧(u₄₀) truncated below 40 is just Q in the range we check
        let phi = CdgaMorphism::new(source.clone(), target.clone(), vec![Poly::zero()]).unwrap();
        let (model, target_table) = relative_model_of_morphism(&phi, 8).unwrap();
        assert_eq!(model.extension.gens.len(), 1);
        assert_eq!(model.extension.gens[0], ("z2_0".to_string(), 2));
        model.verify(&target_table).unwrap();
    }

    #[test]
    fn multiplication_model_of_s3() {
        let (model, _tensor, table) = multiplication_model(&fixtures::s3(), 8).unwrap();
        // one generator z₂ with dz = x⊗1 − 1⊗x
        assert_eq!(model.extension.gens.len(), 1);
        assert_eq!(model.extension.gens[0].1, 2);
        model.verify(&table).unwrap();
    }

    #[test]
    fn multiplication_model_of_s2() {
        let (model, _tensor, table) = multiplication_model(&fixtures::s2(), 8).unwrap();
        model.verify(&table).unwrap();
        // loop-space shape: one odd generator in degree 1 (and nothing else up
        // to the truncation, since ΩS² has one cell per degree)
        assert_eq!(model.extension.gens[0].1, 1);
    }

    #[test]
    fn multiplication_model_of_cp2() {
        let (model, _tensor, table) = multiplication_model(&fixtures::cp2(), 8).unwrap();
        model.verify(&table).unwrap();
        let degrees: Vec<Degree> = model.extension.gens.iter().map(|(_, d)| *d).collect();
        // fiber of the diagonal is ΩCP²: generators in degrees 1 and 4
        assert_eq!(degrees, vec![1, 4]);
    }
}
