//! Ext of the diagonal module over the tensor power of a zero-differential
//! model, computed from the equalizing resolution: one generator of degree
//! `|x| − 1` per generator and adjacent pair of copies, with differential
//! `x^{(c)} − x^{(c+1)}`. The module-linear Hom complex into the tensor power
//! is finite in every degree once the target is truncated high enough; the
//! reported window is far below the truncation artifacts, and a built-in
//! stability re-check guards the margin.

use super::OpsError;
use crate::cdga::FreeCdga;
use crate::dga::{DgaTable, Extension};
use crate::graded::{ChainComplex, Degree, DegreeRange, GradedBasis, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::scalar::rat;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone)]
pub struct ExtDiagonalReport {
    pub copies: usize,
    pub max_degree: Degree,
    /// Homology dimension per degree in `[-max_degree, max_degree]`.
    pub dims: BTreeMap<Degree, usize>,
    /// The matched formal dimension, when one exists (`None` means the
    /// pattern was falsified; for one copy the shift is vacuously zero).
    pub shift: Option<Degree>,
    pub failure: Option<String>,
}

impl ExtDiagonalReport {
    pub fn matched(&self) -> bool {
        self.failure.is_none()
    }
}

/// Dimensions of `H(X)` for a zero-differential free model: monomial counts,
/// zero in negative degrees.
fn model_dim(model: &FreeCdga, p: Degree) -> usize {
    if p < 0 {
        0
    } else {
        model.monomial_basis(p).len()
    }
}

/// Computes Ext of the diagonal over `n` copies, reporting dimensions on
/// `[-max_degree, max_degree]` and matching them against the shifted
/// cohomology of the model.
pub fn ext_diagonal(
    model: &FreeCdga,
    copies: usize,
    max_degree: Degree,
    expected_dimension: Option<Degree>,
) -> Result<ExtDiagonalReport, OpsError> {
    if !model.has_zero_differential() {
        return Err(OpsError::Consistency(
            "diagonal Ext needs a zero-differential model".to_string(),
        ));
    }
    if copies == 0 {
        return Err(OpsError::Consistency("at least one copy required".to_string()));
    }
    let max_gen = model.generators().iter().map(|g| g.degree).max().unwrap_or(2);
    let target_cap = max_degree + 2 * max_gen + 4;
    let dims = hom_homology(model, copies, max_degree, target_cap)?;
    // stability re-check: a higher truncation must agree on the window
    let dims_again = hom_homology(model, copies, max_degree, target_cap + 2)?;
    if dims != dims_again {
        return Err(OpsError::Consistency(
            "Ext dimensions did not stabilize; raise the truncation".to_string(),
        ));
    }

    // pattern match against s^{(n-1)d} H(X)
    let n1 = copies as Degree - 1;
    let verdict = if n1 == 0 {
        let fail = (-max_degree..=max_degree)
            .find(|&p| dims.get(&p).copied().unwrap_or(0) != model_dim(model, p));
        match fail {
            None => (Some(0), None),
            Some(p) => (None, Some(format!("degree {p} disagrees with the model"))),
        }
    } else {
        let matches_shift = |d: Degree| {
            (-max_degree..=max_degree)
                .all(|p| dims.get(&p).copied().unwrap_or(0) == model_dim(model, p - n1 * d))
        };
        match expected_dimension {
            Some(d) => {
                if matches_shift(d) {
                    (Some(d), None)
                } else {
                    let p = (-max_degree..=max_degree)
                        .find(|&p| {
                            dims.get(&p).copied().unwrap_or(0) != model_dim(model, p - n1 * d)
                        })
                        .unwrap();
                    (
                        None,
                        Some(format!(
                            "pattern falsified at degree {p}: found {}, expected {}",
                            dims.get(&p).copied().unwrap_or(0),
                            model_dim(model, p - n1 * d)
                        )),
                    )
                }
            }
            None => {
                let candidates: Vec<Degree> =
                    (-max_degree..=max_degree).filter(|&d| matches_shift(d)).collect();
                match candidates.as_slice() {
                    [d] => (Some(*d), None),
                    [] => (None, Some("no shift matches the computed pattern".to_string())),
                    many => {
                        // all-zero windows match everything; report the
                        // ambiguity honestly
                        (
                            None,
                            Some(format!(
                                "ambiguous shift: {} candidates match",
                                many.len()
                            )),
                        )
                    }
                }
            }
        }
    };
    Ok(ExtDiagonalReport {
        copies,
        max_degree,
        dims,
        shift: verdict.0,
        failure: verdict.1,
    })
}

/// Homology dimensions of `Hom_T(R, T^{≤cap})` on the reporting window.
fn hom_homology(
    model: &FreeCdga,
    copies: usize,
    max_degree: Degree,
    target_cap: Degree,
) -> Result<BTreeMap<Degree, usize>, OpsError> {
    let n_gens = model.generators().len();
    // T = n-fold tensor power as one free algebra with copied generators
    let mut t_gens: Vec<(String, Degree)> = Vec::new();
    for c in 1..=copies {
        for g in model.generators() {
            t_gens.push((format!("{}_{c}", g.name), g.degree));
        }
    }
    let t_alg = FreeCdga::new(t_gens, vec![])?;
    let t_table = DgaTable::from_free(&t_alg, target_cap)?;
    let (_, t_monos) = t_alg.cochain_complex(target_cap)?;

    // resolution generators z_{i,c} with d = x_i^{(c)} − x_i^{(c+1)}
    let mut resolution = Extension::trivial(t_table.clone());
    let locate = |gi: usize, c: usize| -> (Degree, usize) {
        let g = &model.generators()[gi];
        let label = format!("{}_{c}", g.name);
        let idx = t_table.basis.index_of(g.degree, &label).expect("copied generator");
        (g.degree, idx)
    };
    for c in 1..copies {
        for gi in 0..n_gens {
            let g = &model.generators()[gi];
            let (d1, i1) = locate(gi, c);
            let (d2, i2) = locate(gi, c + 1);
            let dz = crate::dga::ExtElem {
                terms: vec![(d1, i1, vec![], rat(1)), (d2, i2, vec![], rat(-1))],
            };
            resolution.adjoin(format!("e_{}_{c}", g.name), g.degree - 1, dz);
        }
    }
    let z_count = resolution.gens.len();

    // Hom slices on [-max_degree-1, max_degree+1]
    let lo = -max_degree - 1;
    let hi = max_degree + 1;
    let mut basis = GradedBasis::new();
    let mut slots: BTreeMap<Degree, Vec<(Vec<u32>, Degree, usize)>> = BTreeMap::new();
    let mut index: HashMap<(Vec<u32>, Degree, usize), (Degree, usize)> = HashMap::new();
    for p in lo..=hi {
        let mut list = Vec::new();
        let max_w = target_cap - p;
        let mut wdeg = 0;
        while wdeg <= max_w {
            let tdeg = p + wdeg;
            if tdeg >= 0 && tdeg <= target_cap {
                let monos = &t_monos[&tdeg];
                for w in resolution.fiber_monomials(wdeg) {
                    for ti in 0..monos.len() {
                        list.push((w.clone(), tdeg, ti));
                    }
                }
            }
            wdeg += 1;
        }
        for (slot, entry) in list.iter().enumerate() {
            let fiber: Vec<String> = entry
                .0
                .iter()
                .zip(&resolution.gens)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, (name, _))| if e == 1 { name.clone() } else { format!("{name}^{e}") })
                .collect();
            let dual = if fiber.is_empty() { "1".to_string() } else { fiber.join("*") };
            let label = format!("({dual})∨⊗{}", t_monos[&entry.1][entry.2].display(t_alg.generators()));
            basis.push(p, label)?;
            index.insert(entry.clone(), (p, slot));
        }
        slots.insert(p, list);
    }

    // differential: Dφ = −(−1)^{|φ|} φ ∘ d_R on the module-linear basis
    let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    for p in lo..hi {
        let list = &slots[&p];
        let rows = basis.dim(p + 1);
        let mut block = Matrix::zero(rows, list.len());
        for (col, (w, tdeg, ti)) in list.iter().enumerate() {
            // candidates w' = w + one generator
            for k in 0..z_count {
                let zdeg = resolution.gens[k].1;
                let mut wp = w.clone();
                wp.resize(z_count, 0);
                if zdeg % 2 != 0 && wp[k] == 1 {
                    continue;
                }
                wp[k] += 1;
                let dz = resolution.fiber_differential(&wp);
                for (bd, bi, u, c) in &dz.terms {
                    let mut u = u.clone();
                    u.resize(z_count, 0);
                    let mut wnorm = w.clone();
                    wnorm.resize(z_count, 0);
                    if u != wnorm {
                        continue;
                    }
                    // φ(t_α · 1⊗w) = (−1)^{|t_α||φ|} t_α · t
                    let phi_sign = if (bd * p).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                    let outer = if p.rem_euclid(2) == 0 { rat(-1) } else { rat(1) };
                    for (tj, cc) in t_table.mul_basis(*bd, *bi, *tdeg, *ti) {
                        let key = (wp.clone(), bd + tdeg, tj);
                        if let Some(&(pd, slot)) = index.get(&key) {
                            debug_assert_eq!(pd, p + 1);
                            block.add_to(
                                slot,
                                col,
                                outer.clone() * phi_sign.clone() * c.clone() * cc,
                            );
                        }
                    }
                }
            }
        }
        diff.set_block(p, block);
    }
    let complex = ChainComplex::new(basis, diff, DegreeRange::new(lo, hi))?;
    complex.check_dd_zero(DegreeRange::new(lo, hi - 2))?;
    let h = complex.homology(DegreeRange::new(lo + 1, hi - 1))?;
    let mut dims = BTreeMap::new();
    for p in -max_degree..=max_degree {
        dims.insert(p, h.betti(p));
    }
    Ok(dims)
}
