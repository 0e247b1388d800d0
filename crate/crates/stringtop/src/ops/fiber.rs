//! Intersection with the fiber of the free-loop fibration, two ways: on the
//! bar/Hochschild side it is multiplication by the fundamental class,
//! `[a₁|…|a_k] ↦ ω[a₁|…|a_k]`; on the Sullivan side it is
//! `α ↦ (−1)^{|ω||α|} ω ⊗ α` from the fiber model into the algebra-relative
//! loop model. The two induce maps of the same rank in every degree.

use super::OpsError;
use crate::bar::{hochschild_complex, omega_inclusion, reduced_bar_complex};
use crate::cdga::{FreeCdga, LoopModel, Monomial, Poly};
use crate::dga::{DgaTable, Elem, ExtElem, Extension};
use crate::graded::{
    induced_on_homology_range, is_chain_map, Degree, DegreeRange, LinearMapByDegree,
};
use crate::matrix::Matrix;
use crate::pd::FinitePdAlgebra;
use crate::scalar::rat;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct FiberReport {
    pub max_degree: Degree,
    /// Rank of the induced map per source degree.
    pub ranks: BTreeMap<Degree, usize>,
    /// Source Betti numbers, for the injectivity verdict.
    pub source_betti: BTreeMap<Degree, usize>,
    pub injective_through: Option<Degree>,
}

impl FiberReport {
    fn finish(max_degree: Degree, ranks: BTreeMap<Degree, usize>, source: BTreeMap<Degree, usize>) -> Self {
        let mut injective_through = None;
        for p in 0..=max_degree {
            if ranks.get(&p).copied().unwrap_or(0) == source.get(&p).copied().unwrap_or(0) {
                injective_through = Some(p);
            } else {
                break;
            }
        }
        FiberReport { max_degree, ranks, source_betti: source, injective_through }
    }
}

/// Hochschild-side intersection map: homology ranks of the
/// fundamental-class inclusion `B̄A → CH(A)` per source degree.
pub fn intersection_with_fiber(
    algebra: &FinitePdAlgebra,
    max_degree: Degree,
) -> Result<FiberReport, OpsError> {
    let m = algebra.dimension();
    let table = algebra.to_table();
    let bar = reduced_bar_complex(&table, max_degree + 1)?;
    let ch = hochschild_complex(&table, max_degree + m + 1)?;
    let omega = algebra.fundamental();
    let phi = omega_inclusion(omega, &bar, &ch);
    if !is_chain_map(&phi, &bar.complex, &ch.complex, DegreeRange::new(0, max_degree))? {
        return Err(OpsError::Consistency(
            "fundamental-class inclusion is not a chain map".to_string(),
        ));
    }
    let h_bar = bar.complex.homology(DegreeRange::new(0, max_degree))?;
    let h_ch = ch.complex.homology(DegreeRange::new(0, max_degree + m))?;
    let induced =
        induced_on_homology_range(&phi, &h_bar, &h_ch, Some(DegreeRange::new(0, max_degree)))?;
    let mut ranks = BTreeMap::new();
    let mut source = BTreeMap::new();
    for p in 0..=max_degree {
        ranks.insert(p, induced.block(p).rank());
        source.insert(p, h_bar.betti(p));
    }
    Ok(FiberReport::finish(max_degree, ranks, source))
}

/// Sullivan-side intersection map for a model with a quotient onto the
/// finite algebra: ranks of `α ↦ (−1)^{|ω||α|} ω⊗α` from the fiber model
/// `(∧sV, D̄)` to the relative loop model `(A ⊗ ∧sV, D)`.
pub fn sullivan_fiber_ranks(
    model: &FreeCdga,
    algebra: &FinitePdAlgebra,
    max_degree: Degree,
) -> Result<FiberReport, OpsError> {
    let m = algebra.dimension();
    let loop_model = model.loop_space_model()?;
    let a_table = algebra.to_table();
    let values = crate::fixtures::sullivan_to_pd_values(model, algebra);

    let relative = relative_loop_model(&loop_model, &a_table, &values)?;
    relative_check(&relative, max_degree + m)?;
    let fiber = fiber_model(&loop_model)?;
    let (fiber_cx, fiber_monos) = fiber.cochain_complex(max_degree + 1)?;

    // α ↦ (−1)^{|ω||α|} ω ⊗ α
    let omega = algebra.fundamental();
    let rel = relative.materialize(max_degree + m + 1)?;
    let mut phi =
        LinearMapByDegree::zero(fiber_cx.basis.clone(), rel.table.basis.clone(), m);
    for (&d, monos) in &fiber_monos {
        if d + m > max_degree + m + 1 {
            continue;
        }
        let rows = rel.table.basis.dim(d + m);
        let mut block = Matrix::zero(rows, monos.len());
        for (col, mono) in monos.iter().enumerate() {
            let sign = if (omega.0 * d).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            let fiber_exps: Vec<u32> = mono.exps().to_vec();
            if let Some((td, slot)) = rel.slot_of(omega.0, omega.1, &fiber_exps) {
                debug_assert_eq!(td, d + m);
                block.add_to(slot, col, sign);
            }
        }
        phi.set_block(d, block);
    }
    if !is_chain_map(&phi, &fiber_cx, &rel.table.complex(), DegreeRange::new(0, max_degree))? {
        return Err(OpsError::Consistency(
            "Sullivan-side intersection map is not a chain map".to_string(),
        ));
    }
    let h_fiber = fiber_cx.homology(DegreeRange::new(0, max_degree))?;
    let h_rel = rel.table.complex().homology(DegreeRange::new(0, max_degree + m))?;
    let induced =
        induced_on_homology_range(&phi, &h_fiber, &h_rel, Some(DegreeRange::new(0, max_degree)))?;
    let mut ranks = BTreeMap::new();
    let mut source = BTreeMap::new();
    for p in 0..=max_degree {
        ranks.insert(p, induced.block(p).rank());
        source.insert(p, h_fiber.betti(p));
    }
    Ok(FiberReport::finish(max_degree, ranks, source))
}

/// The loop model pushed over the finite algebra: `A ⊗ ∧sV` with the
/// differential obtained by evaluating the base part of `D(sv)`.
fn relative_loop_model(
    loop_model: &LoopModel,
    a_table: &DgaTable,
    values: &[Elem],
) -> Result<Extension, OpsError> {
    let big = &loop_model.algebra;
    let base_count = loop_model.base_count;
    let mut ext = Extension::trivial(a_table.clone());
    let s_names: Vec<(String, Degree)> = big.generators()[base_count..]
        .iter()
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    ext.gens = s_names;
    for k in 0..(big.generators().len() - base_count) {
        let dv = big.d_value(base_count + k).clone();
        ext.d_gens.push(push_to_relative(big, base_count, a_table, values, &dv)?);
    }
    Ok(ext)
}

/// Splits each monomial of the doubled algebra into base × fiber and
/// evaluates the base part in the finite algebra.
fn push_to_relative(
    big: &FreeCdga,
    base_count: usize,
    a_table: &DgaTable,
    values: &[Elem],
    p: &Poly,
) -> Result<ExtElem, OpsError> {
    let mut out = ExtElem::zero();
    for (mono, c) in p.terms() {
        let mono = mono.padded(big.generators().len());
        // base part evaluated in A
        let mut base_value = a_table.one();
        for (i, &e) in mono.exps()[..base_count].iter().enumerate() {
            for _ in 0..e {
                base_value = a_table.mul_elem(&base_value, &values[i]);
            }
        }
        if base_value.is_zero() {
            continue;
        }
        let fiber: Vec<u32> = mono.exps()[base_count..].to_vec();
        for (bi, bc) in &base_value.coords {
            out.terms.push((base_value.degree, *bi, fiber.clone(), bc.clone() * c.clone()));
        }
    }
    Ok(out.normalized(big.generators().len() - base_count))
}

/// The fiber model `(∧sV, D̄)`: kill every monomial with a base factor.
fn fiber_model(loop_model: &LoopModel) -> Result<FreeCdga, OpsError> {
    let big = &loop_model.algebra;
    let base_count = loop_model.base_count;
    let n = big.generators().len();
    let gens: Vec<(String, Degree)> = big.generators()[base_count..]
        .iter()
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    let mut differential = Vec::new();
    for (k, (name, _)) in gens.iter().enumerate() {
        let dv = big.d_value(base_count + k);
        let mut reduced = Poly::zero();
        for (mono, c) in dv.terms() {
            let mono = mono.padded(n);
            if mono.exps()[..base_count].iter().all(|&e| e == 0) {
                reduced.add_term(Monomial::from_exps(mono.exps()[base_count..].to_vec()), c.clone());
            }
        }
        differential.push((name.clone(), reduced));
    }
    Ok(FreeCdga::new(gens, differential)?)
}

fn relative_check(ext: &Extension, hi: Degree) -> Result<(), OpsError> {
    let m = ext.materialize(hi + 1)?;
    m.table.complex().check_dd_zero(DegreeRange::new(0, hi))?;
    Ok(())
}
