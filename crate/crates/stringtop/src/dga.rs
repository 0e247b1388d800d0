//! Degreewise-materialized differential graded algebras.
//!
//! A [`DgaTable`] is a finite window of a cdga: ordered basis per degree,
//! differential blocks, and the multiplication resolved on basis pairs. Free
//! cdgas, finite algebras, tensor squares and semifree extensions all flatten
//! to this one shape, which is what the homology routines consume.

use crate::cdga::FreeCdga;
use crate::graded::{ChainComplex, Degree, DegreeRange, GradedBasis, GradedError, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Homogeneous element as sparse coordinates in a table's degree basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Elem {
    pub degree: Degree,
    pub coords: Vec<(usize, Rat)>,
}

impl Elem {
    pub fn zero(degree: Degree) -> Self {
        Elem { degree, coords: Vec::new() }
    }

    pub fn basis(degree: Degree, idx: usize) -> Self {
        Elem { degree, coords: vec![(idx, rat(1))] }
    }

    pub fn from_dense(degree: Degree, v: &[Rat]) -> Self {
        let coords =
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        Elem { degree, coords }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        for (i, c) in &self.coords {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Elem {
        if c.is_zero() {
            return Elem::zero(self.degree);
        }
        Elem {
            degree: self.degree,
            coords: self.coords.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        assert_eq!(self.degree, other.degree, "degree mismatch in Elem::add");
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, c) in self.coords.iter().chain(other.coords.iter()) {
            *acc.entry(*i).or_insert_with(Rat::zero) += c.clone();
        }
        Elem {
            degree: self.degree,
            coords: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// A cdga materialized on a degree window.
#[derive(Debug, Clone)]
pub struct DgaTable {
    pub basis: GradedBasis,
    pub diff: LinearMapByDegree<Rat>,
    /// Index of the unit in degree 0.
    pub unit: usize,
    mul: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>>,
    pub valid: DegreeRange,
}

impl DgaTable {
    pub fn new(
        basis: GradedBasis,
        diff: LinearMapByDegree<Rat>,
        unit: usize,
        mul: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>>,
        valid: DegreeRange,
    ) -> Self {
        DgaTable { basis, diff, unit, mul, valid }
    }

    /// Product of two basis elements, sparse in degree `p + q`. Zero products
    /// are simply absent from the table.
    pub fn mul_basis(&self, p: Degree, i: usize, q: Degree, j: usize) -> Vec<(usize, Rat)> {
        self.mul.get(&(p, i, q, j)).cloned().unwrap_or_default()
    }

    pub fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let degree = a.degree + b.degree;
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, ca) in &a.coords {
            for (j, cb) in &b.coords {
                for (k, c) in self.mul_basis(a.degree, *i, b.degree, *j) {
                    *acc.entry(k).or_insert_with(Rat::zero) += c * ca.clone() * cb.clone();
                }
            }
        }
        Elem { degree, coords: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn one(&self) -> Elem {
        Elem::basis(0, self.unit)
    }

    pub fn d_elem(&self, a: &Elem) -> Elem {
        let dim = self.basis.dim(a.degree);
        let image = self.diff.apply(a.degree, &a.to_dense(dim));
        Elem::from_dense(a.degree + 1, &image)
    }

    pub fn complex(&self) -> ChainComplex<Rat> {
        ChainComplex { basis: self.basis.clone(), diff: self.diff.clone(), valid: self.valid }
    }

    /// Materializes a free cdga on `0..=hi`.
    pub fn from_free(algebra: &FreeCdga, hi: Degree) -> Result<DgaTable, GradedError> {
        let (complex, monomials) = algebra
            .cochain_complex(hi)
            .map_err(|e| GradedError::BasisMismatch(format!("free cdga materialization: {e}")))?;
        let mut mul = HashMap::new();
        for (&p, ms_p) in &monomials {
            for (&q, ms_q) in &monomials {
                if p + q > hi || p > q {
                    continue;
                }
                let target = &monomials[&(p + q)];
                let index: HashMap<_, usize> =
                    target.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                for (i, a) in ms_p.iter().enumerate() {
                    for (j, b) in ms_q.iter().enumerate() {
                        if let Some((m, sign)) = a.mul(b, algebra.generators()) {
                            let k = index[&m];
                            mul.insert((p, i, q, j), vec![(k, rat(sign as i64))]);
                            if p != q || i != j {
                                // graded commutativity fills the mirror entry
                                let flip = sign
                                    * crate::graded::koszul_sign(
                                        &[a.degree(algebra.generators())],
                                        &[b.degree(algebra.generators())],
                                    );
                                mul.insert((q, j, p, i), vec![(k, rat(flip as i64))]);
                            }
                        }
                    }
                }
            }
        }
        Ok(DgaTable {
            basis: complex.basis.clone(),
            diff: complex.diff.clone(),
            unit: 0,
            mul,
            valid: DegreeRange::up_to(hi),
        })
    }

    /// Tensor square with the Koszul product
    /// `(u⊗v)(u'⊗v') = (−1)^{|v||u'|} uu' ⊗ vv'`.
    pub fn tensor(left: &DgaTable, right: &DgaTable, hi: Degree) -> Result<TensorDga, GradedError> {
        let valid = DegreeRange::new(
            left.valid.lo.saturating_add(right.valid.lo).max(-1_000_000),
            hi.min(left.valid.hi.saturating_add(right.valid.hi)),
        );
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
        // differential d⊗1 + (−1)^p 1⊗d
        let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        for (&d, list) in &slots {
            if !valid.contains(d + 1) {
                continue;
            }
            let mut block = Matrix::zero(basis.dim(d + 1), basis.dim(d));
            for (col, &(p, i, q, j)) in list.iter().enumerate() {
                let dl = left.diff.block(p);
                for r in 0..dl.rows() {
                    if dl.get(r, i).is_zero() {
                        continue;
                    }
                    if let Some(&(_, slot)) = index.get(&(p + 1, r, q, j)) {
                        block.add_to(slot, col, dl.get(r, i).clone());
                    }
                }
                let dr = right.diff.block(q);
                let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                for r in 0..dr.rows() {
                    if dr.get(r, j).is_zero() {
                        continue;
                    }
                    if let Some(&(_, slot)) = index.get(&(p, i, q + 1, r)) {
                        block.add_to(slot, col, sign.clone() * dr.get(r, j).clone());
                    }
                }
            }
            diff.set_block(d, block);
        }
        // products
        let mut mul: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>> = HashMap::new();
        let all_slots: Vec<(Degree, usize, Degree, usize, Degree, usize)> = slots
            .iter()
            .flat_map(|(&d, list)| {
                list.iter().enumerate().map(move |(s, &(p, i, q, j))| (p, i, q, j, d, s))
            })
            .collect();
        for &(p1, i1, q1, j1, d1, s1) in &all_slots {
            for &(p2, i2, q2, j2, d2, s2) in &all_slots {
                if !valid.contains(d1 + d2) {
                    continue;
                }
                let lhs = left.mul_basis(p1, i1, p2, i2);
                if lhs.is_empty() {
                    continue;
                }
                let rhs = right.mul_basis(q1, j1, q2, j2);
                if rhs.is_empty() {
                    continue;
                }
                let sign = if (q1 * p2).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                for (u, cu) in &lhs {
                    for (v, cv) in &rhs {
                        if let Some(&(_, slot)) = index.get(&(p1 + p2, *u, q1 + q2, *v)) {
                            *acc.entry(slot).or_insert_with(Rat::zero) +=
                                sign.clone() * cu.clone() * cv.clone();
                        }
                    }
                }
                let entry: Vec<(usize, Rat)> =
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !entry.is_empty() {
                    mul.insert((d1, s1, d2, s2), entry);
                }
            }
        }
        let unit_slot = index[&(0, left.unit, 0, right.unit)].1;
        let table = DgaTable { basis, diff, unit: unit_slot, mul, valid };
        Ok(TensorDga { table, slots, index })
    }
}

/// Tensor square of tables, remembering which pair each slot encodes.
pub struct TensorDga {
    pub table: DgaTable,
    pub slots: BTreeMap<Degree, Vec<(Degree, usize, Degree, usize)>>,
    index: HashMap<(Degree, usize, Degree, usize), (Degree, usize)>,
}

impl TensorDga {
    pub fn slot(&self, p: Degree, i: usize, q: Degree, j: usize) -> Option<(Degree, usize)> {
        self.index.get(&(p, i, q, j)).copied()
    }

    /// `a ⊗ b` as an element of the tensor table.
    pub fn tensor_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let degree = a.degree + b.degree;
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, ca) in &a.coords {
            for (j, cb) in &b.coords {
                if let Some((d, slot)) = self.slot(a.degree, *i, b.degree, *j) {
                    debug_assert_eq!(d, degree);
                    *acc.entry(slot).or_insert_with(Rat::zero) += ca.clone() * cb.clone();
                }
            }
        }
        Elem { degree, coords: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

/// Exponent vector over the adjoined generators of an extension.
pub type FiberMono = Vec<u32>;

fn fiber_pad(w: &FiberMono, n: usize) -> FiberMono {
    let mut out = w.clone();
    out.resize(n.max(out.len()), 0);
    out
}

/// Element of a semifree extension `base ⊗ ∧Z`, as a combination of
/// `(base element, fiber monomial)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtElem {
    pub terms: Vec<(Degree, usize, FiberMono, Rat)>,
}

impl ExtElem {
    pub fn zero() -> Self {
        ExtElem::default()
    }

    pub fn from_base(e: &Elem, n_gens: usize) -> Self {
        ExtElem {
            terms: e
                .coords
                .iter()
                .map(|(i, c)| (e.degree, *i, vec![0; n_gens], c.clone()))
                .collect(),
        }
    }

    pub fn normalized(mut self, n_gens: usize) -> Self {
        let mut acc: BTreeMap<(Degree, usize, FiberMono), Rat> = BTreeMap::new();
        for (d, i, w, c) in self.terms.drain(..) {
            *acc.entry((d, i, fiber_pad(&w, n_gens))).or_insert_with(Rat::zero) += c;
        }
        ExtElem {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((d, i, w), c)| (d, i, w, c))
                .collect(),
        }
    }

    pub fn add(&self, other: &ExtElem, n_gens: usize) -> ExtElem {
        let mut t = self.terms.clone();
        t.extend(other.terms.clone());
        ExtElem { terms: t }.normalized(n_gens)
    }

    pub fn scale(&self, c: &Rat) -> ExtElem {
        ExtElem {
            terms: self
                .terms
                .iter()
                .filter(|_| !c.is_zero())
                .map(|(d, i, w, v)| (*d, *i, w.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, _, _, c)| c.is_zero())
    }
}

/// Semifree extension `base ⊗ ∧Z` with prescribed differentials on the
/// adjoined generators. The nilpotence condition (each `d(z)` only involves
/// previously adjoined generators) is the caller's responsibility and holds
/// for every construction in this crate.
#[derive(Debug, Clone)]
pub struct Extension {
    pub base: DgaTable,
    pub gens: Vec<(String, Degree)>,
    pub d_gens: Vec<ExtElem>,
}

impl Extension {
    pub fn trivial(base: DgaTable) -> Self {
        Extension { base, gens: Vec::new(), d_gens: Vec::new() }
    }

    pub fn adjoin(&mut self, name: String, degree: Degree, d_value: ExtElem) {
        assert!(degree >= 1, "extension generators must have positive degree");
        self.gens.push((name, degree));
        self.d_gens.push(d_value.normalized(self.gens.len()));
    }

    pub fn fiber_degree(&self, w: &FiberMono) -> Degree {
        w.iter().zip(&self.gens).map(|(&e, (_, d))| e as Degree * d).sum()
    }

    /// Fiber monomials of the exact degree, canonically ordered.
    pub fn fiber_monomials(&self, degree: Degree) -> Vec<FiberMono> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.gens.len()];
        self.enumerate_fiber(0, degree, &mut exps, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate_fiber(
        &self,
        idx: usize,
        remaining: Degree,
        exps: &mut Vec<u32>,
        out: &mut Vec<FiberMono>,
    ) {
        if remaining == 0 && idx >= self.gens.len() {
            out.push(exps.clone());
            return;
        }
        if idx >= self.gens.len() {
            return;
        }
        let d = self.gens[idx].1;
        let max_e = if d % 2 != 0 { 1 } else { (remaining / d) as u32 };
        for e in 0..=max_e {
            let used = e as Degree * d;
            if used > remaining {
                break;
            }
            exps[idx] = e;
            self.enumerate_fiber(idx + 1, remaining - used, exps, out);
        }
        exps[idx] = 0;
    }

    /// Product of fiber monomials: `None` if an odd generator squares, else
    /// the Koszul sign of the interleaving.
    fn fiber_mul(&self, a: &FiberMono, b: &FiberMono) -> Option<(FiberMono, i32)> {
        let n = self.gens.len();
        let a = fiber_pad(a, n);
        let b = fiber_pad(b, n);
        let mut sign_exp: i64 = 0;
        for i in 0..n {
            if self.gens[i].1 % 2 != 0 {
                if a[i] + b[i] > 1 {
                    return None;
                }
                if b[i] == 1 {
                    for j in (i + 1)..n {
                        if self.gens[j].1 % 2 != 0 {
                            sign_exp += a[j] as i64;
                        }
                    }
                }
            }
        }
        let exps = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Some((exps, if sign_exp % 2 == 0 { 1 } else { -1 }))
    }

    /// `(b,w)·(b',w') = (−1)^{|w||b'|} (bb') ⊗ (ww')`, extended bilinearly.
    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let n = self.gens.len();
        let mut out = ExtElem::zero();
        for (d1, i1, w1, c1) in &a.terms {
            for (d2, i2, w2, c2) in &b.terms {
                let (fm, fsign) = match self.fiber_mul(w1, w2) {
                    Some(x) => x,
                    None => continue,
                };
                let cross = (self.fiber_degree(w1) * d2).rem_euclid(2);
                let sign = if cross == 0 { fsign } else { -fsign };
                for (k, c) in self.base.mul_basis(*d1, *i1, *d2, *i2) {
                    out.terms.push((
                        d1 + d2,
                        k,
                        fm.clone(),
                        c * c1.clone() * c2.clone() * rat(sign as i64),
                    ));
                }
            }
        }
        out.normalized(n)
    }

    /// Leibniz differential of a single extension basis element.
    pub fn d_basis(&self, base_deg: Degree, base_idx: usize, w: &FiberMono) -> ExtElem {
        let n = self.gens.len();
        let w = fiber_pad(w, n);
        let mut out = ExtElem::zero();
        // d(base) ⊗ w
        let d_base = self.base.d_elem(&Elem::basis(base_deg, base_idx));
        for (i, c) in &d_base.coords {
            out.terms.push((base_deg + 1, *i, w.clone(), c.clone()));
        }
        // (−1)^{|base|} base · d(w)
        let dv = self.d_fiber(&w);
        if !dv.is_zero() {
            let base_elem =
                ExtElem { terms: vec![(base_deg, base_idx, vec![0; n], rat(1))] };
            let sign = if base_deg.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            out = out.add(&self.mul(&base_elem, &dv).scale(&sign), n);
        }
        out.normalized(n)
    }

    /// Differential of a fiber monomial via the derivation rule.
    pub fn fiber_differential(&self, w: &FiberMono) -> ExtElem {
        self.d_fiber(&fiber_pad(w, self.gens.len()))
    }

    fn d_fiber(&self, w: &FiberMono) -> ExtElem {
        let n = self.gens.len();
        let mut out = ExtElem::zero();
        let mut prefix_degree: Degree = 0;
        for i in 0..n {
            let e = w[i];
            if e > 0 && !self.d_gens[i].is_zero() {
                let sign = if prefix_degree.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                let mut prefix = vec![0u32; n];
                prefix[..i].copy_from_slice(&w[..i]);
                let mut rest = vec![0u32; n];
                rest[i] = e - 1;
                rest[(i + 1)..].copy_from_slice(&w[(i + 1)..]);
                let unit_with = |mono: FiberMono| ExtElem {
                    terms: vec![(0, self.base.unit, mono, rat(1))],
                };
                let dg = self.d_gens[i].clone().normalized(n);
                let term = self.mul(&self.mul(&unit_with(prefix), &dg), &unit_with(rest));
                out = out.add(&term.scale(&(sign * rat(e as i64))), n);
            }
            prefix_degree += e as Degree * self.gens[i].1;
        }
        out
    }

    pub fn term_degree(&self, base_deg: Degree, w: &FiberMono) -> Degree {
        base_deg + self.fiber_degree(w)
    }

    /// Flattens the extension to a table on degrees `<= hi`.
    pub fn materialize(&self, hi: Degree) -> Result<MaterializedExtension, GradedError> {
        let n = self.gens.len();
        if hi > self.base.valid.hi {
            return Err(GradedError::InsufficientTruncation(format!(
                "extension asks for degree {hi} but the base is only valid up to {}",
                self.base.valid.hi
            )));
        }
        let base_lo = self.base.basis.min_degree().unwrap_or(0);
        let mut basis = GradedBasis::new();
        let mut slots: BTreeMap<Degree, Vec<(Degree, usize, FiberMono)>> = BTreeMap::new();
        let mut index: HashMap<(Degree, usize, FiberMono), (Degree, usize)> = HashMap::new();
        for d in base_lo..=hi {
            let mut list = Vec::new();
            for fiber_deg in 0..=(d - base_lo) {
                for w in self.fiber_monomials(fiber_deg) {
                    let bd = d - fiber_deg;
                    for bi in 0..self.base.basis.dim(bd) {
                        list.push((bd, bi, w.clone()));
                    }
                }
            }
            for (bd, bi, w) in list {
                let label = self.slot_label(bd, bi, &w);
                let slot = basis.push(d, label)?;
                slots.entry(d).or_default().push((bd, bi, w.clone()));
                index.insert((bd, bi, w), (d, slot));
            }
        }
        let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        for (&d, list) in &slots {
            if d + 1 > hi {
                continue;
            }
            let mut block = Matrix::zero(basis.dim(d + 1), basis.dim(d));
            for (col, (bd, bi, w)) in list.iter().enumerate() {
                for (td, ti, tw, c) in self.d_basis(*bd, *bi, w).terms {
                    let key = (td, ti, fiber_pad(&tw, n));
                    let (dd, slot) = index[&key];
                    debug_assert_eq!(dd, d + 1);
                    block.add_to(slot, col, c);
                }
            }
            diff.set_block(d, block);
        }
        let mut mul: HashMap<(Degree, usize, Degree, usize), Vec<(usize, Rat)>> = HashMap::new();
        let flat: Vec<(Degree, usize, Degree, usize, FiberMono)> = slots
            .iter()
            .flat_map(|(&d, list)| {
                list.iter().enumerate().map(move |(s, (bd, bi, w))| (d, s, *bd, *bi, w.clone()))
            })
            .collect();
        for (d1, s1, bd1, bi1, w1) in &flat {
            for (d2, s2, bd2, bi2, w2) in &flat {
                if d1 + d2 > hi {
                    continue;
                }
                let a = ExtElem { terms: vec![(*bd1, *bi1, w1.clone(), rat(1))] };
                let b = ExtElem { terms: vec![(*bd2, *bi2, w2.clone(), rat(1))] };
                let prod = self.mul(&a, &b);
                let entry: Vec<(usize, Rat)> = prod
                    .terms
                    .into_iter()
                    .map(|(td, ti, tw, c)| {
                        let (_, slot) = index[&(td, ti, fiber_pad(&tw, n))];
                        (slot, c)
                    })
                    .collect();
                if !entry.is_empty() {
                    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                    for (s, c) in entry {
                        *acc.entry(s).or_insert_with(Rat::zero) += c;
                    }
                    let entry: Vec<(usize, Rat)> =
                        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    if !entry.is_empty() {
                        mul.insert((*d1, *s1, *d2, *s2), entry);
                    }
                }
            }
        }
        let unit_slot = index[&(0, self.base.unit, vec![0; n])].1;
        let table = DgaTable {
            basis,
            diff,
            unit: unit_slot,
            mul,
            valid: DegreeRange::new(self.base.valid.lo, hi),
        };
        Ok(MaterializedExtension { table, slots, index, n_gens: n })
    }

    fn slot_label(&self, bd: Degree, bi: usize, w: &FiberMono) -> String {
        let fiber: Vec<String> = w
            .iter()
            .zip(&self.gens)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, (name, _))| if e == 1 { name.clone() } else { format!("{name}^{e}") })
            .collect();
        let base_label = self.base.basis.label(bd, bi);
        let base_is_unit = bd == 0 && bi == self.base.unit;
        match (base_is_unit, fiber.is_empty()) {
            (_, true) => base_label.to_string(),
            (true, false) => fiber.join("*"),
            (false, false) => format!("{}*{}", base_label, fiber.join("*")),
        }
    }
}

/// A materialized extension, with the slot <-> (base, fiber) dictionary.
pub struct MaterializedExtension {
    pub table: DgaTable,
    pub slots: BTreeMap<Degree, Vec<(Degree, usize, FiberMono)>>,
    index: HashMap<(Degree, usize, FiberMono), (Degree, usize)>,
    n_gens: usize,
}

impl MaterializedExtension {
    pub fn slot_of(&self, bd: Degree, bi: usize, w: &FiberMono) -> Option<(Degree, usize)> {
        self.index.get(&(bd, bi, fiber_pad(w, self.n_gens))).copied()
    }

    pub fn elem_from_ext(&self, e: &ExtElem, degree: Degree) -> Elem {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (bd, bi, w, c) in &e.terms {
            let (d, slot) = self.index[&(*bd, *bi, fiber_pad(w, self.n_gens))];
            assert_eq!(d, degree, "term degree mismatch");
            *acc.entry(slot).or_insert_with(Rat::zero) += c.clone();
        }
        Elem { degree, coords: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn ext_from_elem(&self, e: &Elem) -> ExtElem {
        let list = &self.slots[&e.degree];
        ExtElem {
            terms: e
                .coords
                .iter()
                .map(|(i, c)| {
                    let (bd, bi, w) = &list[*i];
                    (*bd, *bi, w.clone(), c.clone())
                })
                .collect(),
        }
    }
}

/// A degreewise algebra morphism out of a materialized table, stored as the
/// image of every basis slot.
#[derive(Debug, Clone)]
pub struct TableMorphism {
    pub values: BTreeMap<(Degree, usize), Elem>,
    pub degree: Degree,
}

impl TableMorphism {
    pub fn to_linear_map(
        &self,
        source: &GradedBasis,
        target: &GradedBasis,
    ) -> LinearMapByDegree<Rat> {
        let mut out = LinearMapByDegree::zero(source.clone(), target.clone(), self.degree);
        for p in source.degrees() {
            let rows = target.dim(p + self.degree);
            let cols = source.dim(p);
            let mut block = Matrix::zero(rows, cols);
            for col in 0..cols {
                if let Some(e) = self.values.get(&(p, col)) {
                    for (row, c) in &e.coords {
                        block.add_to(*row, col, c.clone());
                    }
                }
            }
            out.set_block(p, block);
        }
        out
    }
}

/// Multiplicative evaluation of a free cdga into a table, from generator
/// values; returns the image of every monomial slot through `hi`.
pub fn free_to_table_map(
    model: &FreeCdga,
    values: &[Elem],
    target: &DgaTable,
    hi: Degree,
) -> TableMorphism {
    let mut out = BTreeMap::new();
    for d in 0..=hi {
        for (i, mono) in model.monomial_basis(d).iter().enumerate() {
            let mut image = target.one();
            for (g, &e) in mono.padded(model.generators().len()).exps().iter().enumerate() {
                for _ in 0..e {
                    image = target.mul_elem(&image, &values[g]);
                }
            }
            out.insert((d, i), image);
        }
    }
    TableMorphism { values: out, degree: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::FreeCdga;
    use crate::cdga::{Monomial, Poly};

    fn sphere2_model() -> FreeCdga {
        let x_sq = Poly::term(Monomial::from_exps(vec![2, 0]), rat(1));
        FreeCdga::new(
            vec![("x".to_string(), 2), ("y".to_string(), 3)],
            vec![("y".to_string(), x_sq)],
        )
        .unwrap()
    }

    #[test]
    fn free_table_squares_to_zero_and_multiplies() {
        let t = DgaTable::from_free(&sphere2_model(), 10).unwrap();
        t.complex().check_dd_zero(DegreeRange::new(0, 9)).unwrap();
        // x * x = x²
        let x = Elem::basis(2, 0);
        let xx = t.mul_elem(&x, &x);
        assert_eq!(xx.degree, 4);
        assert_eq!(xx.coords.len(), 1);
        // d(y) = x²
        let y = Elem::basis(3, 0);
        let dy = t.d_elem(&y);
        assert_eq!(dy, xx);
    }

    #[test]
    fn odd_generators_anticommute_in_tensor() {
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let t = DgaTable::from_free(&s3, 8).unwrap();
        let tensor = DgaTable::tensor(&t, &t, 8).unwrap();
        // (x⊗1)(1⊗x) = x⊗x and (1⊗x)(x⊗1) = −x⊗x
        let x1 = tensor.tensor_elem(&Elem::basis(3, 0), &Elem::basis(0, 0));
        let x2 = tensor.tensor_elem(&Elem::basis(0, 0), &Elem::basis(3, 0));
        let ab = tensor.table.mul_elem(&x1, &x2);
        let ba = tensor.table.mul_elem(&x2, &x1);
        assert_eq!(ab.coords.len(), 1);
        assert_eq!(ba, ab.scale(&rat(-1)));
        tensor.table.complex().check_dd_zero(DegreeRange::new(0, 7)).unwrap();
    }

    #[test]
    fn extension_with_koszul_generator_is_acyclic() {
        // base ∧(x₃) (as a table), adjoin z₂ with dz = x: acyclic in positive degrees
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let base = DgaTable::from_free(&s3, 12).unwrap();
        let mut ext = Extension::trivial(base);
        let dz = ExtElem { terms: vec![(3, 0, vec![], rat(1))] };
        ext.adjoin("z".to_string(), 2, dz);
        let m = ext.materialize(12).unwrap();
        m.table.complex().check_dd_zero(DegreeRange::new(0, 11)).unwrap();
        let h = m.table.complex().homology(DegreeRange::new(0, 10)).unwrap();
        assert_eq!(h.betti(0), 1);
        for p in 1..=10 {
            assert_eq!(h.betti(p), 0, "degree {p}");
        }
    }

    #[test]
    fn extension_leibniz_consistency() {
        // d is a derivation on the materialized table: d(ab) = d(a)b ± a d(b)
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let base = DgaTable::from_free(&s3, 12).unwrap();
        let mut ext = Extension::trivial(base);
        ext.adjoin("z".to_string(), 2, ExtElem { terms: vec![(3, 0, vec![], rat(1))] });
        let m = ext.materialize(12).unwrap();
        let t = &m.table;
        for p in 0..=5 {
            for q in 0..=5 {
                if p + q + 1 > 12 {
                    continue;
                }
                for i in 0..t.basis.dim(p) {
                    for j in 0..t.basis.dim(q) {
                        let a = Elem::basis(p, i);
                        let b = Elem::basis(q, j);
                        let lhs = t.d_elem(&t.mul_elem(&a, &b));
                        let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                        let rhs = t
                            .mul_elem(&t.d_elem(&a), &b)
                            .add(&t.mul_elem(&a, &t.d_elem(&b)).scale(&sign));
                        assert_eq!(lhs, rhs, "p={p} i={i} q={q} j={j}");
                    }
                }
            }
        }
    }
}
