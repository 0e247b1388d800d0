//! The loop coproduct model `ψ = (θ⊗1) ∘ q^!` and its Euler-characteristic
//! criterion: for a duality algebra `A`, build the relative model
//! `θ: (A⊗A⊗∧Z, D) → A` of the multiplication, double it to
//! `E = (A⊗A⊗∧Z⊗∧Z', D)`, and compose the diagonal-class multiplication
//! `q^! = μ_D ⊗ 1` with the projection `θ⊗1`. On the nose,
//! `ψ(a⊗b⊗c) = 0` for `a⊗b ∈ (A⊗∧Z)^+` and `ψ(1⊗1⊗c) = χ(A)·Ω⊗c`; the
//! coproduct is trivial exactly when the induced map vanishes.

use super::OpsError;
use crate::dga::{DgaTable, Elem, ExtElem, Extension, MaterializedExtension};
use crate::graded::{is_chain_map, Degree, DegreeRange, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::pd::FinitePdAlgebra;
use crate::scalar::{rat, Rat};
use crate::sullivan::multiplication_model;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct LoopCoproductReport {
    pub max_degree: Degree,
    pub euler_characteristic: i64,
    /// `ψ(1⊗1⊗c) = coefficient · Ω⊗c`, verified for every fiber monomial `c`.
    pub omega_coefficient: Rat,
    /// Whether the induced map on homology vanishes through `max_degree`.
    pub trivial: bool,
    /// Degrees of the adjoined generators of the multiplication model.
    pub model_generators: Vec<Degree>,
}

/// Builds the coproduct model and verifies its closed form.
pub fn loop_coproduct_psi(
    algebra: &FinitePdAlgebra,
    max_degree: Degree,
) -> Result<LoopCoproductReport, OpsError> {
    let m = algebra.dimension();
    let n = max_degree;
    // the doubled model needs generators complete through n + 2
    let (model, _tensor, table) = multiplication_model(algebra, n + 2)?;
    model.verify(&table)?;
    let z_gens = model.extension.gens.clone();
    let z_count = z_gens.len();

    // rebuild the tensor square high enough for the doubled extension; slot
    // enumeration is deterministic, so generator data carries over verbatim
    let a_table = algebra.to_table();
    let tensor = DgaTable::tensor(&a_table, &a_table, n + m + 2)?;

    // E = (A⊗A) ⊗ ∧Z ⊗ ∧Z': same base, a primed copy of every generator with
    // the same differential recipe shifted into the primed block
    let mut doubled = Extension::trivial(tensor.table.clone());
    for (name, degree) in &z_gens {
        doubled.gens.push((name.clone(), *degree));
    }
    for (name, degree) in &z_gens {
        doubled.gens.push((format!("{name}'"), *degree));
    }
    let widen = |e: &ExtElem, shift: usize| -> ExtElem {
        ExtElem {
            terms: e
                .terms
                .iter()
                .map(|(bd, bi, w, c)| {
                    let mut exps = vec![0u32; 2 * z_count];
                    for (k, &v) in w.iter().enumerate() {
                        exps[k + shift] = v;
                    }
                    (*bd, *bi, exps, c.clone())
                })
                .collect(),
        }
    };
    for e in &model.extension.d_gens {
        doubled.d_gens.push(widen(e, 0));
    }
    for e in &model.extension.d_gens {
        doubled.d_gens.push(widen(e, z_count));
    }

    // source S = A ⊗ ∧Z ⊗ ∧Z': push the base A⊗A down along the
    // multiplication, keeping the same fiber
    let mut source = Extension::trivial(a_table.clone());
    source.gens = doubled.gens.clone();
    let push = |e: &ExtElem| -> ExtElem {
        let mut out = ExtElem::zero();
        for (bd, bi, w, c) in &e.terms {
            // base slot of the tensor square → product in A
            let (p, i, q, j) = tensor.slots[bd][*bi];
            let prod = a_table.mul_elem(&Elem::basis(p, i), &Elem::basis(q, j));
            for (k, cc) in prod.coords {
                out.terms.push((prod.degree, k, w.clone(), cc * c.clone()));
            }
        }
        out.normalized(2 * z_count)
    };
    source.d_gens = doubled.d_gens.iter().map(push).collect();

    let src = source.materialize(n + 1)?;
    let target_e = doubled.materialize(n + 1 + m)?;
    src.table.complex().check_dd_zero(DegreeRange::new(0, n))?;
    target_e.table.complex().check_dd_zero(DegreeRange::new(0, n + m))?;

    // q^! = μ_D ⊗ 1 : (a, w) ↦ μ_D(a) ⊗ w
    let duals = algebra.dual_basis()?;
    let mut q_shriek = LinearMapByDegree::zero(
        src.table.basis.clone(),
        target_e.table.basis.clone(),
        m,
    );
    for (&d, list) in &src.slots {
        if d + m > n + 1 + m {
            continue;
        }
        let rows = target_e.table.basis.dim(d + m);
        let mut block = Matrix::zero(rows, list.len());
        for (col, (bd, bi, w)) in list.iter().enumerate() {
            for ((p, i), dual) in &duals {
                let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                let left = a_table.mul_elem(&Elem::basis(*bd, *bi), &Elem::basis(*p, *i));
                for (li, lc) in &left.coords {
                    for (ri, rc) in &dual.coords {
                        if let Some((pd, slot)) =
                            tensor.slot(left.degree, *li, dual.degree, *ri)
                        {
                            if let Some((td, eslot)) = target_e.slot_of(pd, slot, w) {
                                debug_assert_eq!(td, d + m);
                                block.add_to(
                                    eslot,
                                    col,
                                    sign.clone() * lc.clone() * rc.clone(),
                                );
                            }
                        }
                    }
                }
            }
        }
        q_shriek.set_block(d, block);
    }
    if !is_chain_map(
        &q_shriek,
        &src.table.complex(),
        &target_e.table.complex(),
        DegreeRange::new(0, n - 1),
    )? {
        return Err(OpsError::Consistency("q^! is not a chain map".to_string()));
    }

    // target T' = A ⊗ ∧Z' with the pushed differential
    let mut primed = Extension::trivial(a_table.clone());
    for (name, degree) in &z_gens {
        primed.gens.push((format!("{name}'"), *degree));
    }
    let strip = |e: &ExtElem| -> ExtElem {
        // drop the unprimed block (all zero there by construction)
        ExtElem {
            terms: e
                .terms
                .iter()
                .map(|(bd, bi, w, c)| (*bd, *bi, w[z_count..].to_vec(), c.clone()))
                .collect(),
        }
    };
    primed.d_gens = source.d_gens[z_count..].iter().map(strip).collect();
    let tprime = primed.materialize(n + 1 + m)?;

    // θ⊗1: E → T': θ on the A⊗A⊗∧Z part (the model witness), identity on ∧Z'
    let theta_on_z: Vec<Elem> = model.gen_images.clone();
    let mut theta_one = LinearMapByDegree::zero(
        target_e.table.basis.clone(),
        tprime.table.basis.clone(),
        0,
    );
    for (&d, list) in &target_e.slots {
        let rows = tprime.table.basis.dim(d);
        let mut block = Matrix::zero(rows, list.len());
        for (col, (bd, bi, w)) in list.iter().enumerate() {
            let (p, i, q, j) = tensor.slots[bd][*bi];
            let mut value = a_table.mul_elem(&Elem::basis(p, i), &Elem::basis(q, j));
            for (k, &e) in w[..z_count].iter().enumerate() {
                for _ in 0..e {
                    value = a_table.mul_elem(&value, &theta_on_z[k]);
                }
            }
            if value.is_zero() {
                continue;
            }
            let zp = w[z_count..].to_vec();
            for (vi, vc) in &value.coords {
                if let Some((td, slot)) = tprime.slot_of(value.degree, *vi, &zp) {
                    debug_assert_eq!(td, d);
                    block.add_to(slot, col, vc.clone());
                }
            }
        }
        theta_one.set_block(d, block);
    }
    let psi = theta_one.compose(&q_shriek)?;
    if !is_chain_map(&psi, &src.table.complex(), &tprime.table.complex(), DegreeRange::new(0, n - 1))?
    {
        return Err(OpsError::Consistency("ψ is not a chain map".to_string()));
    }

    // closed form: ψ vanishes off the unit block and is χ·Ω⊗c on 1⊗1⊗c
    let chi = algebra.euler_characteristic()?;
    let omega = algebra.fundamental();
    verify_closed_form(&src, &tprime, &psi, chi, omega, z_count, n)?;

    // verdict: induced map on homology through max_degree
    let h_src = src.table.complex().homology(DegreeRange::new(0, n))?;
    let h_t = tprime.table.complex().homology(DegreeRange::new(0, n + m))?;
    let induced = crate::graded::induced_on_homology_range(
        &psi,
        &h_src,
        &h_t,
        Some(DegreeRange::new(0, n)),
    )?;
    let trivial = (0..=n).all(|p| induced.block(p).is_zero());

    Ok(LoopCoproductReport {
        max_degree: n,
        euler_characteristic: chi,
        omega_coefficient: rat(chi),
        trivial,
        model_generators: z_gens.iter().map(|(_, d)| *d).collect(),
    })
}

fn verify_closed_form(
    src: &MaterializedExtension,
    tprime: &MaterializedExtension,
    psi: &LinearMapByDegree<Rat>,
    chi: i64,
    omega: (Degree, usize),
    z_count: usize,
    n: Degree,
) -> Result<(), OpsError> {
    let mut images: BTreeMap<(Degree, usize), Elem> = BTreeMap::new();
    for (&d, list) in &src.slots {
        let dim = src.table.basis.dim(d);
        for (col, _) in list.iter().enumerate() {
            let mut unit = vec![Rat::zero(); dim];
            unit[col] = rat(1);
            let v = psi.apply(d, &unit);
            images.insert((d, col), Elem::from_dense(d + psi.degree, &v));
        }
    }
    for (&d, list) in &src.slots {
        if d > n {
            continue;
        }
        for (col, (bd, bi, w)) in list.iter().enumerate() {
            let unprimed_trivial = w[..z_count].iter().all(|&e| e == 0);
            let base_is_unit = *bd == 0 && *bi == src.table.unit;
            let image = &images[&(d, col)];
            if base_is_unit && unprimed_trivial {
                // ψ(1⊗1⊗c) = χ·Ω⊗c
                let zp = w[z_count..].to_vec();
                let expected_slot = tprime.slot_of(omega.0, omega.1, &zp);
                let mut expected = Elem::zero(d + omega.0);
                if let Some((td, slot)) = expected_slot {
                    expected = Elem { degree: td, coords: vec![(slot, rat(chi))] };
                    if chi == 0 {
                        expected = Elem::zero(td);
                    }
                }
                if image != &expected {
                    return Err(OpsError::Consistency(format!(
                        "closed form fails on the unit block at degree {d}, slot {col}"
                    )));
                }
            } else if !image.is_zero() {
                return Err(OpsError::Consistency(format!(
                    "ψ does not vanish on the positive block at degree {d}, slot {col}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn s3_coproduct_is_trivial() {
        let report = loop_coproduct_psi(&fixtures::s3(), 6).unwrap();
        assert_eq!(report.euler_characteristic, 0);
        assert!(report.trivial);
        assert_eq!(report.omega_coefficient, rat(0));
    }

    #[test]
    fn s2_coproduct_carries_the_euler_characteristic() {
        let report = loop_coproduct_psi(&fixtures::s2(), 5).unwrap();
        assert_eq!(report.euler_characteristic, 2);
        assert_eq!(report.omega_coefficient, rat(2));
        assert!(!report.trivial);
    }

    #[test]
    fn cp2_coproduct_coefficient_is_three() {
        let report = loop_coproduct_psi(&fixtures::cp2(), 5).unwrap();
        assert_eq!(report.euler_characteristic, 3);
        assert_eq!(report.omega_coefficient, rat(3));
        assert!(!report.trivial);
    }
}
