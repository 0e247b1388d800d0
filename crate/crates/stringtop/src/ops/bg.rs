//! String operations on classifying spaces of compact connected Lie groups,
//! through their polynomial models `∧(x₁,…,x_n)` with zero differential.
//!
//! The shriek map of the diagonal is the module map sending the full product
//! of the equalizing generators to 1 and every other such monomial to 0
//! (normalized up to the scalar the theory leaves free). Both verdicts are
//! scalar-invariant.

use super::OpsError;
use crate::cdga::{CdgaMorphism, FreeCdga, Poly};
use crate::fixtures::BgPresentation;
use crate::graded::{is_chain_map, Degree, DegreeRange, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum BgVerdict {
    LoopProductTrivial { max_degree: Degree },
    DualCoproductSurjective { max_degree: Degree },
}

struct BgNames {
    x: Vec<String>,
    xp: Vec<String>,
    xb: Vec<String>,
}

fn names(g: &BgPresentation) -> BgNames {
    let n = g.rank();
    BgNames {
        x: (1..=n).map(|i| format!("x{i}")).collect(),
        xp: (1..=n).map(|i| format!("x{i}p")).collect(),
        xb: (1..=n).map(|i| format!("x{i}b")).collect(),
    }
}

/// `Σ(2n_i − 1)`: the degree of the full product of equalizing generators.
fn bar_total(g: &BgPresentation) -> Degree {
    g.degrees.iter().map(|d| d - 1).sum()
}

/// The shriek-of-the-diagonal map tensored over the base into a larger free
/// algebra: monomials containing the full product of the `x̄` generators map
/// to the same monomial with the bars removed; everything else dies.
fn diagonal_shriek_tensor(
    source: &FreeCdga,
    target: &FreeCdga,
    bar_indices: &[usize],
    hi: Degree,
) -> Result<
    (
        crate::graded::ChainComplex<Rat>,
        crate::graded::ChainComplex<Rat>,
        LinearMapByDegree<Rat>,
    ),
    OpsError,
> {
    let shift: Degree = bar_indices
        .iter()
        .map(|&i| source.generators()[i].degree)
        .sum();
    let (src, src_monos) = source.cochain_complex(hi)?;
    let (tgt, _) = target.cochain_complex(hi)?;
    let mut map = LinearMapByDegree::zero(src.basis.clone(), tgt.basis.clone(), -shift);
    let src_to_tgt: Vec<Option<usize>> = source
        .generators()
        .iter()
        .map(|g| target.generator_index(&g.name))
        .collect();
    for (&d, monos) in &src_monos {
        if d - shift < 0 {
            continue;
        }
        let mut block = Matrix::zero(tgt.basis.dim(d - shift), monos.len());
        for (col, mono) in monos.iter().enumerate() {
            let exps = mono.padded(source.generators().len()).exps().to_vec();
            if bar_indices.iter().any(|&i| exps[i] != 1) {
                continue;
            }
            // the x,x'-part has even degree, so no sign from moving the
            // module map past it
            let mut timage = vec![0u32; target.generators().len()];
            let mut ok = true;
            for (i, &e) in exps.iter().enumerate() {
                if bar_indices.contains(&i) {
                    continue;
                }
                if e > 0 {
                    match src_to_tgt[i] {
                        Some(t) => timage[t] += e,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let label = crate::cdga::Monomial::from_exps(timage).display(target.generators());
            if let Some(row) = tgt.basis.index_of(d - shift, &label) {
                block.add_to(row, col, rat(1));
            }
        }
        map.set_block(d, block);
    }
    Ok((src, tgt, map))
}

/// The loop product of `LBG` is trivial: the doubled loop model with the
/// equalizing generators maps by the diagonal shriek onto the loop model of
/// the square, the inclusion of `∧(x, x̂, x̂')` is a quasi-isomorphism, and
/// the composite vanishes identically.
pub fn bg_loop_product(g: &BgPresentation, max_degree: Degree) -> Result<BgVerdict, OpsError> {
    let n = g.rank();
    let nm = names(g);
    let mut gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        gens.push((nm.x[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        gens.push((nm.xp[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        gens.push((nm.xb[i].clone(), d - 1));
    }
    let mut hats: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        hats.push((format!("x{}h", i + 1), d - 1));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        hats.push((format!("x{}hp", i + 1), d - 1));
    }
    let mut all = gens.clone();
    all.extend(hats.clone());
    let total = all.len();
    let mut differential = Vec::new();
    for i in 0..n {
        let xi = Poly::generator(total, i);
        let xpi = Poly::generator(total, n + i);
        differential.push((nm.xb[i].clone(), xi.add(&xpi.neg())));
    }
    let source = FreeCdga::new(all, differential)?;
    // target: drop the bars, keep the zero differential
    let mut tgt_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        tgt_gens.push((nm.x[i].clone(), d));
        tgt_gens.push((nm.xp[i].clone(), d));
    }
    tgt_gens.extend(hats.clone());
    let target = FreeCdga::new(tgt_gens, vec![])?;
    let bar_indices: Vec<usize> = (2 * n..3 * n).collect();
    let shift = bar_total(g);
    let hi = max_degree + shift + 1;
    let (src_cx, tgt_cx, psi) = diagonal_shriek_tensor(&source, &target, &bar_indices, hi)?;
    if !is_chain_map(&psi, &src_cx, &tgt_cx, DegreeRange::new(0, hi - 1))? {
        return Err(OpsError::Consistency(
            "diagonal shriek tensor is not a chain map".to_string(),
        ));
    }

    // quasi-isomorphic inclusion of ∧(x, x̂, x̂')
    let mut inc_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        inc_gens.push((nm.x[i].clone(), d));
    }
    inc_gens.extend(hats);
    let small = FreeCdga::new(inc_gens.clone(), vec![])?;
    let values: Vec<Poly> = inc_gens
        .iter()
        .map(|(name, _)| Poly::generator(source.generators().len(), source.generator_index(name).unwrap()))
        .collect();
    let inclusion = CdgaMorphism::new(small.clone(), source.clone(), values)?;
    let induced = inclusion.induced_on_homology(DegreeRange::new(0, max_degree))?;
    for p in 0..=max_degree {
        let b = induced.block(p);
        if b.rows() != b.cols() || b.rank() != b.rows() {
            return Err(OpsError::Consistency(format!(
                "inclusion is not a quasi-isomorphism at degree {p}"
            )));
        }
    }
    // the composite ψ ∘ inclusion must vanish identically
    let (_, _, inc_map) = inclusion.to_linear_map(hi)?;
    let composite = psi.compose(&inc_map)?;
    for p in 0..=max_degree {
        if !composite.block(p).is_zero() {
            return Err(OpsError::Consistency(format!(
                "loop product model does not vanish at degree {p}"
            )));
        }
    }
    Ok(BgVerdict::LoopProductTrivial { max_degree })
}

/// The loop coproduct of `LBG` is injective: its dual is the composite of
/// two degreewise surjections.
pub fn bg_loop_coproduct(g: &BgPresentation, max_degree: Degree) -> Result<BgVerdict, OpsError> {
    let n = g.rank();
    let nm = names(g);
    let shift = bar_total(g);
    let hi = max_degree + shift + 1;

    // source ∧(x, x', x̄, x̂, x̃) with d x̄ = d x̃ = x − x'
    let mut src_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        src_gens.push((nm.x[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        src_gens.push((nm.xp[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        src_gens.push((nm.xb[i].clone(), d - 1));
    }
    let mut tails: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        tails.push((format!("x{}h", i + 1), d - 1));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        tails.push((format!("x{}t", i + 1), d - 1));
    }
    let mut all = src_gens.clone();
    all.extend(tails.clone());
    let total = all.len();
    let mut differential = Vec::new();
    for i in 0..n {
        let xi = Poly::generator(total, i);
        let xpi = Poly::generator(total, n + i);
        differential.push((nm.xb[i].clone(), xi.add(&xpi.neg())));
        differential.push((format!("x{}t", i + 1), xi.add(&xpi.neg())));
    }
    let source = FreeCdga::new(all, differential)?;

    // target ∧(x, x', x̂, x̃) with d x̃ = x − x'
    let mut tgt_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        tgt_gens.push((nm.x[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        tgt_gens.push((nm.xp[i].clone(), d));
    }
    tgt_gens.extend(tails.clone());
    let tgt_total = tgt_gens.len();
    let mut tgt_diff = Vec::new();
    for i in 0..n {
        let xi = Poly::generator(tgt_total, i);
        let xpi = Poly::generator(tgt_total, n + i);
        tgt_diff.push((format!("x{}t", i + 1), xi.add(&xpi.neg())));
    }
    let target = FreeCdga::new(tgt_gens, tgt_diff)?;

    let bar_indices: Vec<usize> = (2 * n..3 * n).collect();
    let (src_cx, tgt_cx, q_shriek) = diagonal_shriek_tensor(&source, &target, &bar_indices, hi)?;
    if !is_chain_map(&q_shriek, &src_cx, &tgt_cx, DegreeRange::new(0, hi - 1))? {
        return Err(OpsError::Consistency("q^! is not a chain map".to_string()));
    }

    // τ : (∧(x, x̄, x̂), 0) → source, x̄ ↦ x̄ − x̃
    let mut z_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        z_gens.push((nm.x[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        z_gens.push((nm.xb[i].clone(), d - 1));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        z_gens.push((format!("x{}h", i + 1), d - 1));
    }
    let z_model = FreeCdga::new(z_gens.clone(), vec![])?;
    let tau_values: Vec<Poly> = z_gens
        .iter()
        .map(|(name, _)| {
            if let Some(stripped) = name.strip_suffix('b') {
                let bar = source.generator_index(name).unwrap();
                let tilde = source.generator_index(&format!("{stripped}t")).unwrap();
                Poly::generator(source.generators().len(), bar)
                    .add(&Poly::generator(source.generators().len(), tilde).neg())
            } else {
                Poly::generator(
                    source.generators().len(),
                    source.generator_index(name).unwrap(),
                )
            }
        })
        .collect();
    let tau = CdgaMorphism::new(z_model.clone(), source.clone(), tau_values)?;
    if !tau.commutes_with_differentials() {
        return Err(OpsError::Consistency("τ is not a chain map".to_string()));
    }
    let tau_induced = tau.induced_on_homology(DegreeRange::new(0, max_degree))?;

    // ψ : target → (∧(x, x̂), 0), x' ↦ x, x̃ ↦ 0
    let mut w_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        w_gens.push((nm.x[i].clone(), d));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        w_gens.push((format!("x{}h", i + 1), d - 1));
    }
    let w_model = FreeCdga::new(w_gens.clone(), vec![])?;
    let psi_values: Vec<Poly> = target
        .generators()
        .iter()
        .map(|gen| {
            let name = &gen.name;
            if let Some(stripped) = name.strip_suffix('p') {
                Poly::generator(w_model.generators().len(), w_model.generator_index(stripped).unwrap())
            } else if name.ends_with('t') {
                Poly::zero()
            } else {
                Poly::generator(
                    w_model.generators().len(),
                    w_model.generator_index(name).unwrap(),
                )
            }
        })
        .collect();
    let psi = CdgaMorphism::new(target.clone(), w_model.clone(), psi_values)?;
    if !psi.commutes_with_differentials() {
        return Err(OpsError::Consistency("ψ is not a chain map".to_string()));
    }
    let psi_induced = psi.induced_on_homology(DegreeRange::new(0, max_degree))?;
    for p in 0..=max_degree {
        for (label, block) in
            [("τ", tau_induced.block(p)), ("ψ", psi_induced.block(p))]
        {
            if block.rows() != block.cols() || block.rank() != block.rows() {
                return Err(OpsError::Consistency(format!(
                    "{label} is not a quasi-isomorphism at degree {p}"
                )));
            }
        }
    }

    // composite ψ ∘ q^! ∘ τ must be surjective degreewise through max_degree
    let (_, _, tau_map) = tau.to_linear_map(hi)?;
    let (_, w_cx, psi_map) = psi.to_linear_map(hi)?;
    let composite = psi_map.compose(&q_shriek.compose(&tau_map)?)?;
    for t in 0..=max_degree {
        let p = t + shift;
        let block = composite.block(p);
        let want = w_cx.basis.dim(t);
        if block.rank() != want {
            return Err(OpsError::Consistency(format!(
                "dual coproduct composite is not surjective onto degree {t}"
            )));
        }
    }

    // the model of the inclusion of the figure-eight mapping space is a
    // surjection of free algebras; with zero differentials surjectivity on
    // cohomology is degreewise surjectivity of the map itself
    let mut p_gens: Vec<(String, Degree)> = Vec::new();
    for (i, &d) in g.degrees.iter().enumerate() {
        p_gens.push((nm.x[i].clone(), d));
        p_gens.push((nm.xb[i].clone(), d - 1));
    }
    for (i, &d) in g.degrees.iter().enumerate() {
        p_gens.push((format!("x{}q", i + 1), d));
        p_gens.push((format!("x{}h", i + 1), d - 1));
    }
    let p_model = FreeCdga::new(p_gens.clone(), vec![])?;
    let pi_values: Vec<Poly> = p_gens
        .iter()
        .map(|(name, _)| {
            let resolved = if let Some(stripped) = name.strip_suffix('q') {
                stripped.to_string()
            } else {
                name.clone()
            };
            Poly::generator(
                z_model.generators().len(),
                z_model.generator_index(&resolved).unwrap(),
            )
        })
        .collect();
    let pi = CdgaMorphism::new(p_model, z_model.clone(), pi_values)?;
    let (_, z_cx, pi_map) = pi.to_linear_map(max_degree + 1)?;
    for t in 0..=max_degree {
        let block = pi_map.block(t);
        if block.rank() != z_cx.basis.dim(t) {
            return Err(OpsError::Consistency(format!(
                "projection model is not surjective at degree {t}"
            )));
        }
    }
    Ok(BgVerdict::DualCoproductSurjective { max_degree })
}
