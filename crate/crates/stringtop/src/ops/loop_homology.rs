//! Free-loop-space Betti numbers, by the Sullivan route and by the
//! Hochschild route. The two agree degreewise whenever the finite algebra is
//! the cohomology of the supplied model.

use super::OpsError;
use crate::bar::hochschild_complex;
use crate::cdga::FreeCdga;
use crate::graded::{Degree, DegreeRange};
use crate::pd::FinitePdAlgebra;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sullivan,
    Hochschild,
}

/// Betti table with labelled representative cocycles.
#[derive(Debug, Clone)]
pub struct LoopHomologyTable {
    pub provenance: Provenance,
    pub max_degree: Degree,
    pub betti: BTreeMap<Degree, usize>,
    pub representatives: BTreeMap<Degree, Vec<String>>,
}

impl LoopHomologyTable {
    pub fn betti_vec(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|p| *self.betti.get(&p).unwrap_or(&0)).collect()
    }
}

fn render_representative(
    basis: &crate::graded::GradedBasis,
    degree: Degree,
    rep: &[crate::scalar::Rat],
) -> String {
    use num_traits::Zero;
    let parts: Vec<String> = rep
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let label = basis.label(degree, i);
            if c == &crate::scalar::rat(1) {
                label.to_string()
            } else {
                format!("{c}*{label}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// Betti numbers of the loop model `∧(V ⊕ sV)` of a simply connected model.
pub fn loop_betti_sullivan(model: &FreeCdga, n: Degree) -> Result<LoopHomologyTable, OpsError> {
    let loop_model = model.loop_space_model()?;
    let (complex, _) = loop_model.algebra.cochain_complex(n + 1)?;
    let h = complex.homology(DegreeRange::new(0, n))?;
    let mut betti = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for p in 0..=n {
        betti.insert(p, h.betti(p));
        if let Some(dh) = h.at(p) {
            representatives.insert(
                p,
                dh.representatives
                    .iter()
                    .map(|r| render_representative(&complex.basis, p, r))
                    .collect(),
            );
        }
    }
    Ok(LoopHomologyTable { provenance: Provenance::Sullivan, max_degree: n, betti, representatives })
}

/// Betti numbers of the Hochschild chain complex of a connected finite
/// algebra.
pub fn loop_betti_hochschild(
    algebra: &FinitePdAlgebra,
    n: Degree,
) -> Result<LoopHomologyTable, OpsError> {
    let table = algebra.to_table();
    let ch = hochschild_complex(&table, n + 1)?;
    let h = ch.complex.homology(DegreeRange::new(0, n))?;
    let mut betti = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for p in 0..=n {
        betti.insert(p, h.betti(p));
        if let Some(dh) = h.at(p) {
            representatives.insert(
                p,
                dh.representatives
                    .iter()
                    .map(|r| render_representative(&ch.complex.basis, p, r))
                    .collect(),
            );
        }
    }
    Ok(LoopHomologyTable {
        provenance: Provenance::Hochschild,
        max_degree: n,
        betti,
        representatives,
    })
}
