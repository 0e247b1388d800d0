//! Graded vector spaces, chain complexes and their homology over an exact
//! field.
//!
//! Conventions used throughout the crate:
//! * everything is graded cohomologically, `V^k = V_{-k}`, and negative
//!   degrees are legal;
//! * differentials raise degree by one;
//! * every infinite object carries an explicit validity window
//!   ([`DegreeRange`]); results are only certified inside it.

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub type Degree = i32;

#[derive(Debug, Error, PartialEq)]
pub enum GradedError {
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("not a complex: d\u{b2} \u{2260} 0 starting at degree {degree}")]
    NotAComplex { degree: Degree },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("duplicate label {label:?} in degree {degree}")]
    DuplicateLabel { degree: Degree, label: String },
}

/// Closed interval of degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: Degree,
    pub hi: Degree,
}

impl DegreeRange {
    pub fn new(lo: Degree, hi: Degree) -> Self {
        assert!(lo <= hi, "empty degree range");
        DegreeRange { lo, hi }
    }

    /// Window large enough to count as "everywhere" for finite objects.
    pub fn all() -> Self {
        DegreeRange { lo: -1_000_000, hi: 1_000_000 }
    }

    pub fn up_to(hi: Degree) -> Self {
        DegreeRange { lo: -1_000_000, hi }
    }

    pub fn contains(&self, d: Degree) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn contains_range(&self, other: &DegreeRange) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = Degree> {
        self.lo..=self.hi
    }

    /// Shrinks by `n` on both sides.
    pub fn shrink(&self, n: Degree) -> Self {
        DegreeRange::new(self.lo + n, self.hi - n)
    }
}

/// Degreewise ordered basis. Labels are opaque strings, duplicate-free within
/// each degree; their declared order fixes every matrix in the crate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradedBasis {
    by_degree: BTreeMap<Degree, Vec<String>>,
    index: HashMap<(Degree, String), usize>,
}

impl GradedBasis {
    pub fn new() -> Self {
        GradedBasis::default()
    }

    pub fn from_degrees(entries: Vec<(Degree, Vec<String>)>) -> Result<Self, GradedError> {
        let mut b = GradedBasis::new();
        for (d, labels) in entries {
            for l in labels {
                b.push(d, l)?;
            }
        }
        Ok(b)
    }

    pub fn push(&mut self, degree: Degree, label: String) -> Result<usize, GradedError> {
        if self.index.contains_key(&(degree, label.clone())) {
            return Err(GradedError::DuplicateLabel { degree, label });
        }
        let list = self.by_degree.entry(degree).or_default();
        let idx = list.len();
        list.push(label.clone());
        self.index.insert((degree, label), idx);
        Ok(idx)
    }

    pub fn dim(&self, degree: Degree) -> usize {
        self.by_degree.get(&degree).map_or(0, |v| v.len())
    }

    pub fn labels(&self, degree: Degree) -> &[String] {
        self.by_degree.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn label(&self, degree: Degree, idx: usize) -> &str {
        &self.by_degree[&degree][idx]
    }

    pub fn index_of(&self, degree: Degree, label: &str) -> Option<usize> {
        self.index.get(&(degree, label.to_string())).copied()
    }

    /// Degrees with at least one basis element, ascending.
    pub fn degrees(&self) -> Vec<Degree> {
        self.by_degree
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(d, _)| *d)
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(|v| v.len()).sum()
    }

    pub fn min_degree(&self) -> Option<Degree> {
        self.degrees().first().copied()
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.degrees().last().copied()
    }
}

/// Degreewise block matrix for a degree-`k` linear map: the block at `p` maps
/// the source basis in degree `p` to the target basis in degree `p + k`.
/// Missing blocks are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapByDegree<S> {
    pub source: GradedBasis,
    pub target: GradedBasis,
    pub degree: Degree,
    blocks: BTreeMap<Degree, Matrix<S>>,
}

impl<S: Scalar> LinearMapByDegree<S> {
    pub fn zero(source: GradedBasis, target: GradedBasis, degree: Degree) -> Self {
        LinearMapByDegree { source, target, degree, blocks: BTreeMap::new() }
    }

    pub fn set_block(&mut self, p: Degree, block: Matrix<S>) {
        assert_eq!(block.cols(), self.source.dim(p), "block column count at degree {p}");
        assert_eq!(
            block.rows(),
            self.target.dim(p + self.degree),
            "block row count at degree {p}"
        );
        if block.is_zero() {
            self.blocks.remove(&p);
        } else {
            self.blocks.insert(p, block);
        }
    }

    /// Entry for the basis element `idx` of source degree `p`.
    pub fn set_entry(&mut self, p: Degree, row: usize, col: usize, v: S) {
        let mut block = self.block(p);
        block.set(row, col, v);
        self.set_block(p, block);
    }

    pub fn block(&self, p: Degree) -> Matrix<S> {
        match self.blocks.get(&p) {
            Some(b) => b.clone(),
            None => Matrix::zero(self.target.dim(p + self.degree), self.source.dim(p)),
        }
    }

    pub fn stored_degrees(&self) -> Vec<Degree> {
        self.blocks.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    /// `self ∘ other`, of degree `self.degree + other.degree`.
    pub fn compose(&self, other: &LinearMapByDegree<S>) -> Result<LinearMapByDegree<S>, GradedError> {
        if other.target != self.source {
            return Err(GradedError::BasisMismatch(
                "compose: inner bases differ".to_string(),
            ));
        }
        let mut out = LinearMapByDegree::zero(
            other.source.clone(),
            self.target.clone(),
            self.degree + other.degree,
        );
        for p in other.source.degrees() {
            let first = other.block(p);
            let second = self.block(p + other.degree);
            out.set_block(p, second.mul(&first));
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinearMapByDegree<S>) -> Result<LinearMapByDegree<S>, GradedError> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(GradedError::BasisMismatch("add: shapes differ".to_string()));
        }
        let mut out = LinearMapByDegree::zero(self.source.clone(), self.target.clone(), self.degree);
        let mut degrees: Vec<Degree> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        degrees.sort_unstable();
        degrees.dedup();
        for p in degrees {
            out.set_block(p, self.block(p).add(&other.block(p)));
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> LinearMapByDegree<S> {
        let mut out = LinearMapByDegree::zero(self.source.clone(), self.target.clone(), self.degree);
        for (p, b) in &self.blocks {
            out.set_block(*p, b.scale(s));
        }
        out
    }

    pub fn apply(&self, p: Degree, v: &[S]) -> Vec<S> {
        self.block(p).apply(v)
    }
}

/// Cochain complex: a graded basis with a degree `+1` differential.
#[derive(Debug, Clone)]
pub struct ChainComplex<S> {
    pub basis: GradedBasis,
    pub diff: LinearMapByDegree<S>,
    pub valid: DegreeRange,
}

impl<S: Scalar> ChainComplex<S> {
    pub fn new(
        basis: GradedBasis,
        diff: LinearMapByDegree<S>,
        valid: DegreeRange,
    ) -> Result<Self, GradedError> {
        if diff.degree != 1 {
            return Err(GradedError::BasisMismatch(
                "differential must have degree +1".to_string(),
            ));
        }
        if diff.source != basis || diff.target != basis {
            return Err(GradedError::BasisMismatch(
                "differential bases must equal the complex basis".to_string(),
            ));
        }
        Ok(ChainComplex { basis, diff, valid })
    }

    /// Zero-differential complex on the given basis.
    pub fn with_zero_differential(basis: GradedBasis, valid: DegreeRange) -> Self {
        let diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        ChainComplex { basis, diff, valid }
    }

    /// Verifies `d ∘ d = 0` on every stored degree of `range`.
    pub fn check_dd_zero(&self, range: DegreeRange) -> Result<(), GradedError> {
        for p in range.iter() {
            let dd = self.diff.block(p + 1).mul(&self.diff.block(p));
            if !dd.is_zero() {
                return Err(GradedError::NotAComplex { degree: p });
            }
        }
        Ok(())
    }

    /// Homology in each degree of `range`, with deterministic representative
    /// cocycles chosen by row-echelon pivoting in the canonical basis order.
    pub fn homology(&self, range: DegreeRange) -> Result<HomologySummary<S>, GradedError> {
        let needed = DegreeRange::new(range.lo - 1, range.hi + 1);
        if !self.valid.contains_range(&needed) {
            return Err(GradedError::InsufficientTruncation(format!(
                "homology on [{}, {}] needs the complex on [{}, {}], valid only on [{}, {}]",
                range.lo, range.hi, needed.lo, needed.hi, self.valid.lo, self.valid.hi
            )));
        }
        self.check_dd_zero(DegreeRange::new(range.lo - 1, range.hi))?;
        let mut per_degree = BTreeMap::new();
        for p in range.iter() {
            per_degree.insert(p, self.homology_at(p));
        }
        Ok(HomologySummary { per_degree })
    }

    fn homology_at(&self, p: Degree) -> DegreeHomology<S> {
        let d_out = self.diff.block(p);
        let d_in = self.diff.block(p - 1);
        let cocycles = d_out.kernel_basis();
        let boundaries = d_in.column_space_basis();
        let n = self.basis.dim(p);
        // pick the kernel vectors independent modulo the boundaries:
        // pivots of [boundaries | cocycles] landing in the cocycle columns
        let b_mat = Matrix::from_columns(boundaries.clone(), n);
        let k_mat = Matrix::from_columns(cocycles.clone(), n);
        let stacked = b_mat.hstack(&k_mat);
        let (_, pivots) = stacked.rref();
        let reps: Vec<Vec<S>> = pivots
            .iter()
            .filter(|&&c| c >= boundaries.len())
            .map(|&c| cocycles[c - boundaries.len()].clone())
            .collect();
        DegreeHomology { betti: reps.len(), representatives: reps, boundary_basis: boundaries }
    }
}

/// Betti numbers and representative cocycles per degree.
#[derive(Debug, Clone)]
pub struct HomologySummary<S> {
    per_degree: BTreeMap<Degree, DegreeHomology<S>>,
}

#[derive(Debug, Clone)]
pub struct DegreeHomology<S> {
    pub betti: usize,
    /// Cocycle coordinate vectors, linearly independent modulo coboundaries.
    pub representatives: Vec<Vec<S>>,
    /// Basis of the coboundaries in this degree (kept for membership tests).
    pub boundary_basis: Vec<Vec<S>>,
}

impl<S: Scalar> HomologySummary<S> {
    pub fn betti(&self, p: Degree) -> usize {
        self.per_degree.get(&p).map_or(0, |h| h.betti)
    }

    pub fn at(&self, p: Degree) -> Option<&DegreeHomology<S>> {
        self.per_degree.get(&p)
    }

    pub fn degrees(&self) -> Vec<Degree> {
        self.per_degree.keys().copied().collect()
    }

    pub fn betti_vec(&self, range: DegreeRange) -> Vec<usize> {
        range.iter().map(|p| self.betti(p)).collect()
    }

    /// Coordinates of a cocycle in the homology basis of its degree, if the
    /// class decomposition exists (it always does for genuine cocycles).
    pub fn class_coordinates(&self, p: Degree, cocycle: &[S]) -> Option<Vec<S>> {
        let h = self.per_degree.get(&p)?;
        let n = cocycle.len();
        let mut cols = h.representatives.clone();
        cols.extend(h.boundary_basis.clone());
        let m = Matrix::from_columns(cols, n);
        let x = m.solve(cocycle)?;
        Some(x[..h.representatives.len()].to_vec())
    }

    /// Names the homology basis: `h{degree}_{index}`.
    pub fn class_basis(&self) -> GradedBasis {
        let mut b = GradedBasis::new();
        for (p, h) in &self.per_degree {
            for i in 0..h.betti {
                b.push(*p, format!("h{}_{}", p, i)).expect("unique homology labels");
            }
        }
        b
    }
}

/// Sign `(-1)^{(Σ left)(Σ right)}` for moving the block of degrees `left`
/// past the block of degrees `right`.
pub fn koszul_sign(left: &[Degree], right: &[Degree]) -> i32 {
    let l: i64 = left.iter().map(|&d| d as i64).sum();
    let r: i64 = right.iter().map(|&d| d as i64).sum();
    if (l * r) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Differential of the Hom-complex: `Dφ = d_target ∘ φ − (−1)^k φ ∘ d_source`
/// for a degree-`k` map `φ`. Applying it twice gives zero.
pub fn hom_complex_differential<S: Scalar>(
    phi: &LinearMapByDegree<S>,
    source: &ChainComplex<S>,
    target: &ChainComplex<S>,
) -> Result<LinearMapByDegree<S>, GradedError> {
    if phi.source != source.basis || phi.target != target.basis {
        return Err(GradedError::BasisMismatch(
            "hom differential: map bases must match the complexes".to_string(),
        ));
    }
    let left = target.diff.compose(phi)?;
    let right = phi.compose(&source.diff)?;
    let sign = if phi.degree.rem_euclid(2) == 0 { S::one() } else { -S::one() };
    left.add(&right.scale(&-sign))
}

/// Checks that `phi` is a chain map (its Hom-complex differential vanishes)
/// on all of `range`.
pub fn is_chain_map<S: Scalar>(
    phi: &LinearMapByDegree<S>,
    source: &ChainComplex<S>,
    target: &ChainComplex<S>,
    range: DegreeRange,
) -> Result<bool, GradedError> {
    let d = hom_complex_differential(phi, source, target)?;
    Ok(range.iter().all(|p| d.block(p).is_zero()))
}

/// Graded dual: the dual basis lives in mirrored degrees
/// (`(V^#)^k = (V^{-k})^#`, labels kept), and the dual of a degree-`k` map is
/// the block transpose with the sign `(-1)^{k(p+1)}` on dual-degree-`p`
/// elements.
pub fn graded_dual<S: Scalar>(
    basis: &GradedBasis,
    map: &LinearMapByDegree<S>,
) -> (GradedBasis, LinearMapByDegree<S>) {
    let dualize = |b: &GradedBasis| -> GradedBasis {
        let mut out = GradedBasis::new();
        for d in b.degrees() {
            for l in b.labels(d) {
                out.push(-d, l.clone()).expect("dual labels stay unique");
            }
        }
        out
    };
    let dual_basis = dualize(basis);
    let k = map.degree;
    let dual_source = dualize(&map.target);
    let dual_target = dualize(&map.source);
    let mut dual_map = LinearMapByDegree::zero(dual_source, dual_target, k);
    for p in dual_map.source.degrees() {
        // block at dual degree p: transpose of the original block at -p-k
        let orig = map.block(-p - k);
        let mut t = orig.transpose();
        if (k * (p + 1)).rem_euclid(2) == 1 {
            t = t.scale(&-S::one());
        }
        dual_map.set_block(p, t);
    }
    (dual_basis, dual_map)
}

/// Tensor product of complexes with the differential `d⊗1 + (−1)^p 1⊗d`.
/// Labels are `left⊗right`; `slots` records, per degree, which basis pair
/// each slot came from.
pub struct TensorComplex<S> {
    pub complex: ChainComplex<S>,
    pub slots: BTreeMap<Degree, Vec<(Degree, usize, Degree, usize)>>,
    index: HashMap<(Degree, usize, Degree, usize), (Degree, usize)>,
}

impl<S: Scalar> TensorComplex<S> {
    pub fn new(
        left: &ChainComplex<S>,
        right: &ChainComplex<S>,
        valid: DegreeRange,
    ) -> Result<Self, GradedError> {
        if !left.valid.contains_range(&valid) || !right.valid.contains_range(&valid) {
            return Err(GradedError::InsufficientTruncation(
                "tensor factors are not valid on the requested range".to_string(),
            ));
        }
        let mut basis = GradedBasis::new();
        let mut slots: BTreeMap<Degree, Vec<(Degree, usize, Degree, usize)>> = BTreeMap::new();
        let mut index = HashMap::new();
        for p in left.basis.degrees() {
            for q in right.basis.degrees() {
                let d = p + q;
                if !valid.contains(d) {
                    continue;
                }
                for i in 0..left.basis.dim(p) {
                    for j in 0..right.basis.dim(q) {
                        let label =
                            format!("{}⊗{}", left.basis.label(p, i), right.basis.label(q, j));
                        let slot = basis.push(d, label)?;
                        slots.entry(d).or_default().push((p, i, q, j));
                        index.insert((p, i, q, j), (d, slot));
                    }
                }
            }
        }
        let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        for (&d, list) in &slots {
            if !valid.contains(d + 1) {
                continue;
            }
            let mut block = Matrix::zero(basis.dim(d + 1), basis.dim(d));
            for (col, &(p, i, q, j)) in list.iter().enumerate() {
                // d(left) ⊗ right
                let dl = left.diff.block(p);
                for r in 0..dl.rows() {
                    if dl.get(r, i).is_zero() {
                        continue;
                    }
                    if let Some(&(dd, slot)) = index.get(&(p + 1, r, q, j)) {
                        debug_assert_eq!(dd, d + 1);
                        block.add_to(slot, col, dl.get(r, i).clone());
                    }
                }
                // (−1)^p left ⊗ d(right)
                let dr = right.diff.block(q);
                let sign = if p.rem_euclid(2) == 0 { S::one() } else { -S::one() };
                for r in 0..dr.rows() {
                    if dr.get(r, j).is_zero() {
                        continue;
                    }
                    if let Some(&(dd, slot)) = index.get(&(p, i, q + 1, r)) {
                        debug_assert_eq!(dd, d + 1);
                        block.add_to(slot, col, sign.clone() * dr.get(r, j).clone());
                    }
                }
            }
            diff.set_block(d, block);
        }
        let complex = ChainComplex::new(basis, diff, valid)?;
        Ok(TensorComplex { complex, slots, index })
    }

    pub fn slot(&self, p: Degree, i: usize, q: Degree, j: usize) -> Option<(Degree, usize)> {
        self.index.get(&(p, i, q, j)).copied()
    }
}

/// Matrix of the map induced on homology by a chain map, in the `h{p}_{i}`
/// bases produced by [`HomologySummary::class_basis`].
pub fn induced_on_homology<S: Scalar>(
    phi: &LinearMapByDegree<S>,
    source_h: &HomologySummary<S>,
    target_h: &HomologySummary<S>,
) -> Result<LinearMapByDegree<S>, GradedError> {
    induced_on_homology_range(phi, source_h, target_h, None)
}

/// Same, restricted to source degrees in `range` when given.
pub fn induced_on_homology_range<S: Scalar>(
    phi: &LinearMapByDegree<S>,
    source_h: &HomologySummary<S>,
    target_h: &HomologySummary<S>,
    range: Option<DegreeRange>,
) -> Result<LinearMapByDegree<S>, GradedError> {
    let sb = source_h.class_basis();
    let tb = target_h.class_basis();
    let mut out = LinearMapByDegree::zero(sb.clone(), tb.clone(), phi.degree);
    for p in sb.degrees() {
        if let Some(r) = range {
            if !r.contains(p) {
                continue;
            }
        }
        let src = match source_h.at(p) {
            Some(h) => h,
            None => continue,
        };
        let q = p + phi.degree;
        let rows = tb.dim(q);
        let mut block = Matrix::zero(rows, src.representatives.len());
        for (col, rep) in src.representatives.iter().enumerate() {
            let image = phi.apply(p, rep);
            let coords = target_h.class_coordinates(q, &image).ok_or_else(|| {
                GradedError::BasisMismatch(format!(
                    "image of a homology representative at degree {p} is not a cocycle class"
                ))
            })?;
            for (row, c) in coords.into_iter().enumerate() {
                block.set(row, col, c);
            }
        }
        out.set_block(p, block);
    }
    Ok(out)
}
