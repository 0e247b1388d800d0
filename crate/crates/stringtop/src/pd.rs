//! Finite-dimensional Poincaré duality cdgas: axiom checking, dual bases,
//! the diagonal class and multiplication by it, Euler characteristic.

use crate::dga::{DgaTable, Elem, TensorDga};
use crate::graded::{Degree, DegreeRange, GradedBasis, GradedError, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rat};
use num_traits::Zero;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PdError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("product ({a}, {b}) lands in degree {found}, expected {expected}")]
    ProductDegree { a: String, b: String, found: Degree, expected: Degree },
    #[error("inconsistent multiplication table: {0}")]
    InconsistentTable(String),
    #[error("{0}")]
    Graded(#[from] GradedError),
}

/// Result of the duality check. Structural problems with the table are
/// reported separately as [`PdError::InconsistentTable`].
#[derive(Debug, Clone, PartialEq)]
pub enum PdVerdict {
    Pass,
    /// Axiom (i): finite dimensional, concentrated in degrees `0..=m`, with a
    /// one-dimensional top degree spanned by the fundamental class.
    FailAxiomI { reason: String },
    /// Axiom (ii): the intersection pairing into the top degree degenerates.
    FailAxiomII { degree: Degree, rank_defect: usize },
}

impl PdVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, PdVerdict::Pass)
    }
}

/// Finite cdga presented by basis, multiplication table, optional
/// differential, formal dimension and fundamental class.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePdAlgebra {
    pub name: String,
    basis: GradedBasis,
    unit: usize,
    dimension: Degree,
    fundamental: (Degree, usize),
    mul: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>>,
    diff: LinearMapByDegree<Rat>,
}

impl FinitePdAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        basis_labels: Vec<(String, Degree)>,
        unit: &str,
        dimension: Degree,
        fundamental: &str,
        products: Vec<((String, String), Vec<(String, Rat)>)>,
        differential: Vec<(String, Vec<(String, Rat)>)>,
    ) -> Result<Self, PdError> {
        let mut basis = GradedBasis::new();
        let mut degree_of: HashMap<String, Degree> = HashMap::new();
        for (label, degree) in &basis_labels {
            if *degree < 0 {
                return Err(PdError::InvalidPresentation(format!(
                    "basis element {label} has negative degree"
                )));
            }
            basis.push(*degree, label.clone())?;
            degree_of.insert(label.clone(), *degree);
        }
        let locate = |label: &str| -> Result<(Degree, usize), PdError> {
            let d = *degree_of.get(label).ok_or_else(|| PdError::UnknownLabel(label.to_string()))?;
            Ok((d, basis.index_of(d, label).expect("label present")))
        };
        let (ud, unit_idx) = locate(unit)?;
        if ud != 0 {
            return Err(PdError::InvalidPresentation(format!(
                "unit {unit} must sit in degree 0"
            )));
        }
        if basis.dim(0) != 1 {
            return Err(PdError::InvalidPresentation(
                "degree 0 must be one-dimensional, spanned by the unit".to_string(),
            ));
        }
        let fund = locate(fundamental)?;

        // expand given products into the index table
        let mut given: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>> = HashMap::new();
        for ((a, b), value) in products {
            let (pa, ia) = locate(&a)?;
            let (pb, ib) = locate(&b)?;
            let expected = pa + pb;
            let mut entry: Vec<(usize, Rat)> = Vec::new();
            for (label, c) in value {
                let (pd, id) = locate(&label)?;
                if pd != expected {
                    return Err(PdError::ProductDegree { a, b, found: pd, expected });
                }
                if !c.is_zero() {
                    entry.push((id, c));
                }
            }
            given.insert((pa, ia, pb, ib), entry);
        }
        // complete: unit action, then graded-commutative mirrors for pairs
        // given in only one order; explicitly given pairs stay as given so a
        // broken table can be detected by the check rather than silently fixed
        let mut mul = HashMap::new();
        let all: Vec<(Degree, usize)> = basis
            .degrees()
            .into_iter()
            .flat_map(|d| (0..basis.dim(d)).map(move |i| (d, i)))
            .collect();
        for &(pa, ia) in &all {
            for &(pb, ib) in &all {
                let key = (pa, ia, pb, ib);
                let entry: Vec<(usize, Rat)> = if (pa, ia) == (0, unit_idx) {
                    vec![(ib, rat(1))]
                } else if (pb, ib) == (0, unit_idx) {
                    vec![(ia, rat(1))]
                } else if let Some(e) = given.get(&key) {
                    e.clone()
                } else if let Some(e) = given.get(&(pb, ib, pa, ia)) {
                    let sign = crate::graded::koszul_sign(&[pa], &[pb]);
                    e.iter().map(|(k, c)| (*k, c.clone() * rat(sign as i64))).collect()
                } else {
                    Vec::new()
                };
                if !entry.is_empty() {
                    mul.insert(key, entry);
                }
            }
        }
        let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        for (label, value) in differential {
            let (p, i) = locate(&label)?;
            for (target, c) in value {
                let (pt, it) = locate(&target)?;
                if pt != p + 1 {
                    return Err(PdError::InvalidPresentation(format!(
                        "d({label}) has a term {target} of degree {pt}, expected {}",
                        p + 1
                    )));
                }
                diff.set_entry(p, it, i, c);
            }
        }
        Ok(FinitePdAlgebra {
            name: name.to_string(),
            basis,
            unit: unit_idx,
            dimension,
            fundamental: fund,
            mul,
            diff,
        })
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dimension(&self) -> Degree {
        self.dimension
    }

    pub fn fundamental(&self) -> (Degree, usize) {
        self.fundamental
    }

    pub fn fundamental_label(&self) -> &str {
        self.basis.label(self.fundamental.0, self.fundamental.1)
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn differential(&self) -> &LinearMapByDegree<Rat> {
        &self.diff
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.is_zero()
    }

    /// The algebra as a fully materialized table, valid everywhere.
    pub fn to_table(&self) -> DgaTable {
        DgaTable::new(
            self.basis.clone(),
            self.diff.clone(),
            self.unit,
            self.mul.clone(),
            DegreeRange::all(),
        )
    }

    pub fn complex(&self) -> crate::graded::ChainComplex<Rat> {
        self.to_table().complex()
    }

    fn elements(&self) -> Vec<(Degree, usize)> {
        self.basis
            .degrees()
            .into_iter()
            .flat_map(|d| (0..self.basis.dim(d)).map(move |i| (d, i)))
            .collect()
    }

    /// Coefficient of the fundamental class in `a_i · b_j`.
    fn omega_coefficient(&self, t: &DgaTable, p: Degree, i: usize, q: Degree, j: usize) -> Rat {
        if p + q != self.dimension {
            return Rat::zero();
        }
        t.mul_basis(p, i, q, j)
            .into_iter()
            .find(|(k, _)| *k == self.fundamental.1)
            .map(|(_, c)| c)
            .unwrap_or_else(Rat::zero)
    }

    /// Structural consistency, then the two duality axioms.
    pub fn check_poincare_duality(&self) -> Result<PdVerdict, PdError> {
        let t = self.to_table();
        let elements = self.elements();
        // graded commutativity
        for &(p, i) in &elements {
            for &(q, j) in &elements {
                let ab = t.mul_elem(&Elem::basis(p, i), &Elem::basis(q, j));
                let ba = t.mul_elem(&Elem::basis(q, j), &Elem::basis(p, i));
                let sign = crate::graded::koszul_sign(&[p], &[q]);
                if ab != ba.scale(&rat(sign as i64)) {
                    return Err(PdError::InconsistentTable(format!(
                        "not graded-commutative on ({}, {})",
                        self.basis.label(p, i),
                        self.basis.label(q, j)
                    )));
                }
            }
        }
        // associativity
        for &(p, i) in &elements {
            for &(q, j) in &elements {
                for &(r, k) in &elements {
                    if p + q + r > self.basis.max_degree().unwrap_or(0) {
                        continue;
                    }
                    let lhs = t.mul_elem(
                        &t.mul_elem(&Elem::basis(p, i), &Elem::basis(q, j)),
                        &Elem::basis(r, k),
                    );
                    let rhs = t.mul_elem(
                        &Elem::basis(p, i),
                        &t.mul_elem(&Elem::basis(q, j), &Elem::basis(r, k)),
                    );
                    if lhs != rhs {
                        return Err(PdError::InconsistentTable(format!(
                            "not associative on ({}, {}, {})",
                            self.basis.label(p, i),
                            self.basis.label(q, j),
                            self.basis.label(r, k)
                        )));
                    }
                }
            }
        }
        // d is a degree +1 derivation with d² = 0
        t.complex()
            .check_dd_zero(DegreeRange::new(0, self.basis.max_degree().unwrap_or(0) + 1))
            .map_err(|e| PdError::InconsistentTable(format!("{e}")))?;
        for &(p, i) in &elements {
            for &(q, j) in &elements {
                let a = Elem::basis(p, i);
                let b = Elem::basis(q, j);
                let lhs = t.d_elem(&t.mul_elem(&a, &b));
                let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                let rhs = t
                    .mul_elem(&t.d_elem(&a), &b)
                    .add(&t.mul_elem(&a, &t.d_elem(&b)).scale(&sign));
                if lhs != rhs {
                    return Err(PdError::InconsistentTable(format!(
                        "d is not a derivation on ({}, {})",
                        self.basis.label(p, i),
                        self.basis.label(q, j)
                    )));
                }
            }
        }
        // axiom (i)
        let m = self.dimension;
        if let Some(top) = self.basis.max_degree() {
            if top > m {
                return Ok(PdVerdict::FailAxiomI {
                    reason: format!("axiom (i): basis element above formal dimension {m}"),
                });
            }
        }
        if self.basis.dim(m) != 1 {
            return Ok(PdVerdict::FailAxiomI {
                reason: format!(
                    "axiom (i): top degree {m} has dimension {}, expected 1",
                    self.basis.dim(m)
                ),
            });
        }
        if self.fundamental.0 != m {
            return Ok(PdVerdict::FailAxiomI {
                reason: format!(
                    "axiom (i): fundamental class {} sits in degree {}, not the top degree {m}",
                    self.fundamental_label(),
                    self.fundamental.0
                ),
            });
        }
        // axiom (ii): the pairing into the top degree is nondegenerate
        for r in 0..=m {
            let rows = self.basis.dim(r);
            let cols = self.basis.dim(m - r);
            if rows != cols {
                return Ok(PdVerdict::FailAxiomII {
                    degree: r,
                    rank_defect: rows.max(cols) - rows.min(cols),
                });
            }
            if rows == 0 {
                continue;
            }
            let mut pairing = Matrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    pairing.set(i, j, self.omega_coefficient(&t, r, i, m - r, j));
                }
            }
            let rank = pairing.rank();
            if rank < rows {
                return Ok(PdVerdict::FailAxiomII { degree: r, rank_defect: rows - rank });
            }
        }
        Ok(PdVerdict::Pass)
    }

    /// The dual basis `(a_i')` with `a_i · a_j' = δ_{ij} ω`, per complementary
    /// degree pair. Requires the duality check to pass.
    pub fn dual_basis(&self) -> Result<Vec<((Degree, usize), Elem)>, PdError> {
        match self.check_poincare_duality()? {
            PdVerdict::Pass => {}
            v => {
                return Err(PdError::InvalidPresentation(format!(
                    "dual basis needs the duality axioms: {v:?}"
                )))
            }
        }
        let t = self.to_table();
        let m = self.dimension;
        let mut out = Vec::new();
        for r in self.basis.degrees() {
            let n = self.basis.dim(r);
            let nc = self.basis.dim(m - r);
            let mut pairing = Matrix::zero(n, nc);
            for i in 0..n {
                for j in 0..nc {
                    pairing.set(i, j, self.omega_coefficient(&t, r, i, m - r, j));
                }
            }
            for i in 0..n {
                let mut rhs = vec![Rat::zero(); n];
                rhs[i] = rat(1);
                let x = pairing.solve(&rhs).ok_or_else(|| {
                    PdError::InconsistentTable(format!("singular pairing in degree {r}"))
                })?;
                out.push(((r, i), Elem::from_dense(m - r, &x)));
            }
        }
        Ok(out)
    }

    /// Diagonal class `D = Σ (−1)^{|a_i|} a_i ⊗ a_i'` together with the tensor
    /// square it lives in; verifies that `D` is a central cocycle.
    pub fn diagonal_class(&self) -> Result<DiagonalData, PdError> {
        let duals = self.dual_basis()?;
        let t = self.to_table();
        let m = self.dimension;
        let tensor = DgaTable::tensor(&t, &t, 2 * m + 1)?;
        let mut class = Elem::zero(m);
        for ((p, i), dual) in &duals {
            let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            let term = tensor.tensor_elem(&Elem::basis(*p, *i), dual).scale(&sign);
            class = class.add(&term);
        }
        // cocycle
        if !tensor.table.d_elem(&class).is_zero() {
            return Err(PdError::InconsistentTable(
                "diagonal class is not a cocycle".to_string(),
            ));
        }
        // centrality: (a⊗1)·D = (1⊗a)·D for every basis element
        let one = Elem::basis(0, self.unit);
        for (p, i) in self.elements() {
            let a = Elem::basis(p, i);
            let left = tensor.table.mul_elem(&tensor.tensor_elem(&a, &one), &class);
            let right = tensor.table.mul_elem(&tensor.tensor_elem(&one, &a), &class);
            if left != right {
                return Err(PdError::InconsistentTable(format!(
                    "diagonal class is not central against {}",
                    self.basis.label(p, i)
                )));
            }
        }
        // multiplication by D, a chain map of degree m
        let mut mu = LinearMapByDegree::zero(
            self.basis.clone(),
            tensor.table.basis.clone(),
            m,
        );
        for (p, i) in self.elements() {
            let a = Elem::basis(p, i);
            let image = tensor.table.mul_elem(&tensor.tensor_elem(&a, &one), &class);
            for (row, c) in &image.coords {
                mu.set_entry(p, *row, i, c.clone());
            }
        }
        Ok(DiagonalData { tensor, class, mu })
    }

    /// `Σ (−1)^p dim H^p(A)`; uses homology, so nonzero differentials are fine.
    pub fn euler_characteristic(&self) -> Result<i64, PdError> {
        let top = self.basis.max_degree().unwrap_or(0);
        let h = self.complex().homology(DegreeRange::new(0, top + 1))?;
        let mut chi: i64 = 0;
        for p in 0..=top {
            let b = h.betti(p) as i64;
            chi += if p % 2 == 0 { b } else { -b };
        }
        Ok(chi)
    }

    /// Pretty form of an element for tables and error messages.
    pub fn display_elem(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in &e.coords {
            let label = self.basis.label(e.degree, *i);
            if c == &rat(1) {
                parts.push(label.to_string());
            } else {
                parts.push(format!("{c}*{label}"));
            }
        }
        parts.join(" + ")
    }
}

/// Diagonal class with the tensor square it lives in and the degree-`m`
/// module map `a ↦ (a⊗1)·D`.
pub struct DiagonalData {
    pub tensor: TensorDga,
    pub class: Elem,
    pub mu: LinearMapByDegree<Rat>,
}
