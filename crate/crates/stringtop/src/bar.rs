//! Two-sided bar construction, reduced bar coalgebra, Hochschild chain
//! complex, the concatenation splitting map, and the fundamental-class
//! inclusion of the based loops into the free loops.
//!
//! Words are `n[a₁|…|a_k]m` with letters in the augmentation ideal; a letter
//! `a` contributes its suspended degree `|a| − 1`. The algebra must be
//! connected with nothing in degree one, so that word length is bounded by
//! the degree cap.

use crate::dga::{DgaTable, Elem};
use crate::graded::{
    ChainComplex, Degree, DegreeRange, GradedBasis, GradedError, LinearMapByDegree,
};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rat};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BarError {
    #[error("bar construction needs a connected algebra with A⁰ = Q·1, found dim A⁰ = {0}")]
    NotConnected(usize),
    #[error("bar construction needs A¹ = 0 so the degree cap bounds word length, found dim A¹ = {0}")]
    DegreeOneLetters(usize),
    #[error("insufficient truncation: the algebra table must be valid through degree {0}")]
    InsufficientTruncation(Degree),
    #[error("{0}")]
    Graded(#[from] GradedError),
}

/// Left or right coefficient module of the two-sided bar construction: the
/// ground field with the augmentation action, or the algebra itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleSlot {
    Ground,
    Alg(Degree, usize),
}

impl ModuleSlot {
    fn degree(&self) -> Degree {
        match self {
            ModuleSlot::Ground => 0,
            ModuleSlot::Alg(d, _) => *d,
        }
    }
}

/// Which module sits on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarCoefficient {
    Ground,
    Algebra,
}

/// `n[a₁|…|a_k]m`; letters are positive-degree basis elements of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord {
    pub left: ModuleSlot,
    pub letters: Vec<(Degree, usize)>,
    pub right: ModuleSlot,
}

impl BarWord {
    pub fn degree(&self) -> Degree {
        self.left.degree()
            + self.letters.iter().map(|(d, _)| d - 1).sum::<Degree>()
            + self.right.degree()
    }

    pub fn display(&self, a: &DgaTable) -> String {
        let letters: Vec<&str> =
            self.letters.iter().map(|(d, i)| a.basis.label(*d, *i)).collect();
        let body = format!("[{}]", letters.join("|"));
        let left = match self.left {
            ModuleSlot::Ground => String::new(),
            ModuleSlot::Alg(d, i) => a.basis.label(d, i).to_string(),
        };
        let right = match self.right {
            ModuleSlot::Ground => String::new(),
            ModuleSlot::Alg(d, i) => a.basis.label(d, i).to_string(),
        };
        format!("{left}{body}{right}")
    }
}

fn check_algebra(a: &DgaTable, needed: Degree) -> Result<(), BarError> {
    if a.basis.dim(0) != 1 {
        return Err(BarError::NotConnected(a.basis.dim(0)));
    }
    if a.basis.dim(1) != 0 {
        return Err(BarError::DegreeOneLetters(a.basis.dim(1)));
    }
    if a.valid.hi < needed {
        return Err(BarError::InsufficientTruncation(needed));
    }
    Ok(())
}

/// Letters available to words: positive-degree basis elements.
fn letters_up_to(a: &DgaTable, max_degree: Degree) -> Vec<(Degree, usize)> {
    a.basis
        .degrees()
        .into_iter()
        .filter(|&d| d > 0 && d <= max_degree)
        .flat_map(|d| (0..a.basis.dim(d)).map(move |i| (d, i)))
        .collect()
}

/// All letter tuples of total suspended degree `<= budget`.
fn letter_tuples(a: &DgaTable, budget: Degree) -> Vec<Vec<(Degree, usize)>> {
    let letters = letters_up_to(a, budget + 1);
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<(Degree, usize)>, Degree)> = vec![(Vec::new(), 0)];
    while let Some((tuple, used)) = frontier.pop() {
        for &(d, i) in &letters {
            let cost = d - 1;
            if used + cost > budget {
                continue;
            }
            let mut next = tuple.clone();
            next.push((d, i));
            out.push(next.clone());
            frontier.push((next, used + cost));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn apply_table_d(a: &DgaTable, d: Degree, i: usize) -> Vec<(usize, Rat)> {
    let e = a.d_elem(&Elem::basis(d, i));
    e.coords
}

/// Internal part `d₀` of the bar differential on a single word.
pub fn bar_d0(a: &DgaTable, word: &BarWord) -> Vec<(BarWord, Rat)> {
    let mut out = Vec::new();
    // d on the left module factor
    if let ModuleSlot::Alg(p, i) = word.left {
        for (j, c) in apply_table_d(a, p, i) {
            let mut w = word.clone();
            w.left = ModuleSlot::Alg(p + 1, j);
            out.push((w, c));
        }
    }
    // letters, with ε_i = |n| + Σ_{j<i} |s a_j|
    let mut eps = word.left.degree();
    for (idx, &(d, i)) in word.letters.iter().enumerate() {
        let sign = if eps.rem_euclid(2) == 0 { rat(-1) } else { rat(1) };
        for (j, c) in apply_table_d(a, d, i) {
            let mut w = word.clone();
            w.letters[idx] = (d + 1, j);
            out.push((w, sign.clone() * c));
        }
        eps += d - 1;
    }
    // d on the right module factor, with ε_{k+1}
    if let ModuleSlot::Alg(p, i) = word.right {
        let sign = if eps.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        for (j, c) in apply_table_d(a, p, i) {
            let mut w = word.clone();
            w.right = ModuleSlot::Alg(p + 1, j);
            out.push((w, sign.clone() * c));
        }
    }
    out
}

/// Merging part `d₁` of the bar differential on a single word: absorb the
/// first letter into the left module, merge adjacent letters, absorb the last
/// letter into the right module. Positive-degree products stay in the
/// augmentation ideal; any degree-zero component is dropped.
pub fn bar_d1(a: &DgaTable, word: &BarWord) -> Vec<(BarWord, Rat)> {
    let k = word.letters.len();
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    // (−1)^{|n|} n·a₁ [a₂|…]m — zero when the left module is the ground field
    if let ModuleSlot::Alg(p, n_idx) = word.left {
        let (d1, i1) = word.letters[0];
        let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        for (j, c) in a.mul_basis(p, n_idx, d1, i1) {
            let mut w = word.clone();
            w.left = ModuleSlot::Alg(p + d1, j);
            w.letters.remove(0);
            out.push((w, sign.clone() * c));
        }
    }
    // merges with ε_i
    let mut eps = word.left.degree() + (word.letters[0].0 - 1);
    for idx in 1..k {
        let (dp, ip) = word.letters[idx - 1];
        let (dq, iq) = word.letters[idx];
        let sign = if eps.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        for (j, c) in a.mul_basis(dp, ip, dq, iq) {
            if dp + dq == 0 {
                continue;
            }
            let mut w = word.clone();
            w.letters[idx - 1] = (dp + dq, j);
            w.letters.remove(idx);
            out.push((w, sign.clone() * c));
        }
        eps += dq - 1;
    }
    // −(−1)^{ε_k} n[a₁|…|a_{k−1}] a_k·m
    if let ModuleSlot::Alg(p, m_idx) = word.right {
        let (dk, ik) = word.letters[k - 1];
        let eps_k = word.left.degree()
            + word.letters[..k - 1].iter().map(|(d, _)| d - 1).sum::<Degree>();
        let sign = if eps_k.rem_euclid(2) == 0 { rat(-1) } else { rat(1) };
        for (j, c) in a.mul_basis(dk, ik, p, m_idx) {
            let mut w = word.clone();
            w.right = ModuleSlot::Alg(dk + p, j);
            w.letters.pop();
            out.push((w, sign.clone() * c));
        }
    }
    out
}

/// A materialized two-sided bar construction with `d₀` and `d₁` stored
/// separately.
pub struct BarComplexData {
    pub complex: ChainComplex<Rat>,
    pub d0: LinearMapByDegree<Rat>,
    pub d1: LinearMapByDegree<Rat>,
    pub words: BTreeMap<Degree, Vec<BarWord>>,
    index: HashMap<BarWord, (Degree, usize)>,
}

impl BarComplexData {
    pub fn index_of(&self, w: &BarWord) -> Option<(Degree, usize)> {
        self.index.get(w).copied()
    }

    pub fn word_at(&self, d: Degree, i: usize) -> &BarWord {
        &self.words[&d][i]
    }
}

/// Builds `B(N, A, M)` through total degree `cap`.
pub fn two_sided_bar_complex(
    a: &DgaTable,
    left: BarCoefficient,
    right: BarCoefficient,
    cap: Degree,
) -> Result<BarComplexData, BarError> {
    check_algebra(a, cap + 2)?;
    let module_slots = |which: BarCoefficient, budget: Degree| -> Vec<ModuleSlot> {
        match which {
            BarCoefficient::Ground => vec![ModuleSlot::Ground],
            BarCoefficient::Algebra => a
                .basis
                .degrees()
                .into_iter()
                .filter(|&d| d <= budget)
                .flat_map(|d| (0..a.basis.dim(d)).map(move |i| ModuleSlot::Alg(d, i)))
                .collect(),
        }
    };
    let mut per_degree: BTreeMap<Degree, Vec<BarWord>> = BTreeMap::new();
    for l in module_slots(left, cap) {
        for tuple in letter_tuples(a, cap - l.degree()) {
            let used = l.degree() + tuple.iter().map(|(d, _)| d - 1).sum::<Degree>();
            for r in module_slots(right, cap - used) {
                let w = BarWord { left: l, letters: tuple.clone(), right: r };
                let deg = w.degree();
                if deg <= cap {
                    per_degree.entry(deg).or_default().push(w);
                }
            }
        }
    }
    for list in per_degree.values_mut() {
        list.sort_by(|x, y| {
            (x.letters.len(), x.display(a)).cmp(&(y.letters.len(), y.display(a)))
        });
    }
    build_bar_data(a, per_degree, cap)
}

fn build_bar_data(
    a: &DgaTable,
    per_degree: BTreeMap<Degree, Vec<BarWord>>,
    cap: Degree,
) -> Result<BarComplexData, BarError> {
    let mut basis = GradedBasis::new();
    let mut index = HashMap::new();
    for (&d, list) in &per_degree {
        for (i, w) in list.iter().enumerate() {
            basis.push(d, w.display(a))?;
            index.insert(w.clone(), (d, i));
        }
    }
    let mut d0 = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    let mut d1 = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    for (&d, list) in &per_degree {
        if d + 1 > cap {
            continue;
        }
        let rows = basis.dim(d + 1);
        let mut b0 = Matrix::zero(rows, list.len());
        let mut b1 = Matrix::zero(rows, list.len());
        for (col, w) in list.iter().enumerate() {
            for (tw, c) in bar_d0(a, w) {
                let (td, ti) = index[&tw];
                debug_assert_eq!(td, d + 1);
                b0.add_to(ti, col, c);
            }
            for (tw, c) in bar_d1(a, w) {
                let (td, ti) = index[&tw];
                debug_assert_eq!(td, d + 1);
                b1.add_to(ti, col, c);
            }
        }
        d0.set_block(d, b0);
        d1.set_block(d, b1);
    }
    let diff = d0.add(&d1)?;
    let complex = ChainComplex::new(basis, diff, DegreeRange::new(-1_000_000, cap))?;
    Ok(BarComplexData { complex, d0, d1, words: per_degree, index })
}

/// Reduced bar construction `B̄A = B(Q, A, Q)`.
pub fn reduced_bar_complex(a: &DgaTable, cap: Degree) -> Result<BarComplexData, BarError> {
    two_sided_bar_complex(a, BarCoefficient::Ground, BarCoefficient::Ground, cap)
}

/// Deconcatenation coproduct of the reduced bar coalgebra:
/// `[a₁|…|a_r] ↦ Σ_i [a₁|…|a_i] ⊗ [a_{i+1}|…|a_r]`.
pub fn bar_coproduct(word: &BarWord) -> Vec<(BarWord, BarWord)> {
    assert_eq!(word.left, ModuleSlot::Ground, "coproduct lives on the reduced bar");
    assert_eq!(word.right, ModuleSlot::Ground, "coproduct lives on the reduced bar");
    (0..=word.letters.len())
        .map(|i| {
            (
                BarWord {
                    left: ModuleSlot::Ground,
                    letters: word.letters[..i].to_vec(),
                    right: ModuleSlot::Ground,
                },
                BarWord {
                    left: ModuleSlot::Ground,
                    letters: word.letters[i..].to_vec(),
                    right: ModuleSlot::Ground,
                },
            )
        })
        .collect()
}

/// Hochschild element `a ⊗ [a₁|…|a_k]`.
pub type HochschildWord = ((Degree, usize), Vec<(Degree, usize)>);

/// The Hochschild chain complex `A ⊗ T(sĀ)` with the cyclic differential.
pub struct HochschildComplex {
    pub complex: ChainComplex<Rat>,
    pub elements: BTreeMap<Degree, Vec<HochschildWord>>,
    index: HashMap<HochschildWord, (Degree, usize)>,
}

impl HochschildComplex {
    pub fn index_of(&self, w: &HochschildWord) -> Option<(Degree, usize)> {
        self.index.get(w).copied()
    }

    pub fn word_at(&self, d: Degree, i: usize) -> &HochschildWord {
        &self.elements[&d][i]
    }
}

pub fn hochschild_word_degree(w: &HochschildWord) -> Degree {
    w.0 .0 + w.1.iter().map(|(d, _)| d - 1).sum::<Degree>()
}

fn hochschild_label(a: &DgaTable, w: &HochschildWord) -> String {
    let letters: Vec<&str> = w.1.iter().map(|(d, i)| a.basis.label(*d, *i)).collect();
    format!("{}[{}]", a.basis.label(w.0 .0, w.0 .1), letters.join("|"))
}

/// Cyclic bar differential on a single Hochschild element. The last letter
/// wraps around to act on the module factor from the left, paying the Koszul
/// cost of moving its full degree past the rest of the element.
pub fn hochschild_d(a: &DgaTable, w: &HochschildWord) -> Vec<(HochschildWord, Rat)> {
    let ((p, ai), letters) = (w.0, &w.1);
    let k = letters.len();
    let mut out: Vec<(HochschildWord, Rat)> = Vec::new();
    // d(a)
    for (j, c) in apply_table_d(a, p, ai) {
        out.push((((p + 1, j), letters.clone()), c));
    }
    // internal letter terms, ε_i = |a| + Σ_{j<i} |s a_j|
    let mut eps = p;
    for idx in 0..k {
        let (d, i) = letters[idx];
        let sign = if eps.rem_euclid(2) == 0 { rat(-1) } else { rat(1) };
        for (j, c) in apply_table_d(a, d, i) {
            let mut ls = letters.clone();
            ls[idx] = (d + 1, j);
            out.push((((p, ai), ls), sign.clone() * c));
        }
        eps += d - 1;
    }
    if k == 0 {
        return out;
    }
    // (−1)^{|a|} (a·a₁)[a₂|…]
    {
        let (d1, i1) = letters[0];
        let sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        for (j, c) in a.mul_basis(p, ai, d1, i1) {
            out.push((((p + d1, j), letters[1..].to_vec()), sign.clone() * c));
        }
    }
    // merges
    let mut eps = p + (letters[0].0 - 1);
    for idx in 1..k {
        let (dp, ip) = letters[idx - 1];
        let (dq, iq) = letters[idx];
        let sign = if eps.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
        for (j, c) in a.mul_basis(dp, ip, dq, iq) {
            let mut ls = letters.clone();
            ls[idx - 1] = (dp + dq, j);
            ls.remove(idx);
            out.push((((p, ai), ls), sign.clone() * c));
        }
        eps += dq - 1;
    }
    // wrap-around: −(−1)^{ε_k |s a_k|} (a_k·a)[a₁|…|a_{k−1}]
    {
        let (dk, ik) = letters[k - 1];
        let eps_k = p + letters[..k - 1].iter().map(|(d, _)| d - 1).sum::<Degree>();
        let exponent = eps_k * (dk - 1);
        let sign = if exponent.rem_euclid(2) == 0 { rat(-1) } else { rat(1) };
        for (j, c) in a.mul_basis(dk, ik, p, ai) {
            out.push((((dk + p, j), letters[..k - 1].to_vec()), sign.clone() * c));
        }
    }
    out
}

/// Materializes the Hochschild chain complex through total degree `cap`.
pub fn hochschild_complex(a: &DgaTable, cap: Degree) -> Result<HochschildComplex, BarError> {
    check_algebra(a, cap + 2)?;
    let mut per_degree: BTreeMap<Degree, Vec<HochschildWord>> = BTreeMap::new();
    for d in a.basis.degrees() {
        if d > cap {
            continue;
        }
        for i in 0..a.basis.dim(d) {
            for tuple in letter_tuples(a, cap - d) {
                let w: HochschildWord = ((d, i), tuple);
                let deg = hochschild_word_degree(&w);
                if deg <= cap {
                    per_degree.entry(deg).or_default().push(w);
                }
            }
        }
    }
    for list in per_degree.values_mut() {
        list.sort_by(|x, y| {
            (x.1.len(), hochschild_label(a, x)).cmp(&(y.1.len(), hochschild_label(a, y)))
        });
    }
    let mut basis = GradedBasis::new();
    let mut index = HashMap::new();
    for (&d, list) in &per_degree {
        for (i, w) in list.iter().enumerate() {
            basis.push(d, hochschild_label(a, w))?;
            index.insert(w.clone(), (d, i));
        }
    }
    let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    for (&d, list) in &per_degree {
        if d + 1 > cap {
            continue;
        }
        let mut block = Matrix::zero(basis.dim(d + 1), list.len());
        for (col, w) in list.iter().enumerate() {
            for (tw, c) in hochschild_d(a, w) {
                let (td, ti) = index[&tw];
                debug_assert_eq!(td, d + 1);
                block.add_to(ti, col, c);
            }
        }
        diff.set_block(d, block);
    }
    let complex = ChainComplex::new(basis, diff, DegreeRange::new(-1_000_000, cap))?;
    Ok(HochschildComplex { complex, elements: per_degree, index })
}

/// The complex `A ⊗ (words ⊗ words)` over `A ⊗ A`: elements
/// `a ⊗ [w₁] ⊗ [w₂]` with the differential inherited from the tensor square
/// of Hochschild complexes after absorbing both module factors into `a`.
pub struct LoopPairComplex {
    pub complex: ChainComplex<Rat>,
    pub elements: BTreeMap<Degree, Vec<PairWord>>,
    index: HashMap<PairWord, (Degree, usize)>,
}

/// `a ⊗ [w₁] ⊗ [w₂]`.
pub type PairWord = ((Degree, usize), Vec<(Degree, usize)>, Vec<(Degree, usize)>);

impl LoopPairComplex {
    pub fn index_of(&self, w: &PairWord) -> Option<(Degree, usize)> {
        self.index.get(w).copied()
    }
}

fn pair_label(a: &DgaTable, w: &PairWord) -> String {
    let fmt = |ls: &Vec<(Degree, usize)>| {
        let parts: Vec<&str> = ls.iter().map(|(d, i)| a.basis.label(*d, *i)).collect();
        format!("[{}]", parts.join("|"))
    };
    format!("{}⊗{}⊗{}", a.basis.label(w.0 .0, w.0 .1), fmt(&w.1), fmt(&w.2))
}

fn pair_degree(w: &PairWord) -> Degree {
    w.0 .0
        + w.1.iter().map(|(d, _)| d - 1).sum::<Degree>()
        + w.2.iter().map(|(d, _)| d - 1).sum::<Degree>()
}

/// Differential of a pair word, by normalizing the tensor-square differential:
/// module factors produced in either word slot are multiplied into `a`, the
/// second slot paying the Koszul sign for crossing the first word.
pub fn pair_d(a: &DgaTable, w: &PairWord) -> Vec<(PairWord, Rat)> {
    let ((p, ai), w1, w2) = (w.0, &w.1, &w.2);
    let mut out: Vec<(PairWord, Rat)> = Vec::new();
    let w1_sdeg: Degree = w1.iter().map(|(d, _)| d - 1).sum();
    // d(a) ⊗ w₁ ⊗ w₂
    for (j, c) in apply_table_d(a, p, ai) {
        out.push((((p + 1, j), w1.clone(), w2.clone()), c));
    }
    let a_sign = if p.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    // (−1)^{|a|} d_CH(1[w₁]) ⊗ w₂, then absorb the produced module factor
    for ((bslot, rest), c) in hochschild_d(a, &((0, a.unit), w1.clone())) {
        let coeff = a_sign.clone() * c;
        if bslot == (0, a.unit) {
            out.push((((p, ai), rest, w2.clone()), coeff));
        } else {
            for (j, cc) in a.mul_basis(p, ai, bslot.0, bslot.1) {
                out.push((((p + bslot.0, j), rest.clone(), w2.clone()), coeff.clone() * cc));
            }
        }
    }
    // (−1)^{|a| + |w₁|} w₁ ⊗ d_CH(1[w₂]), absorbing with the crossing sign
    let shift = if (p + w1_sdeg).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    for ((bslot, rest), c) in hochschild_d(a, &((0, a.unit), w2.clone())) {
        let coeff = shift.clone() * c;
        if bslot == (0, a.unit) {
            out.push((((p, ai), w1.clone(), rest), coeff));
        } else {
            let cross =
                if (bslot.0 * w1_sdeg).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
            for (j, cc) in a.mul_basis(p, ai, bslot.0, bslot.1) {
                out.push((
                    ((p + bslot.0, j), w1.clone(), rest.clone()),
                    coeff.clone() * cross.clone() * cc,
                ));
            }
        }
    }
    out
}

/// Materializes the pair complex through total degree `cap`.
pub fn loop_pair_complex(a: &DgaTable, cap: Degree) -> Result<LoopPairComplex, BarError> {
    check_algebra(a, cap + 2)?;
    let mut per_degree: BTreeMap<Degree, Vec<PairWord>> = BTreeMap::new();
    for d in a.basis.degrees() {
        if d > cap {
            continue;
        }
        for i in 0..a.basis.dim(d) {
            for t1 in letter_tuples(a, cap - d) {
                let used: Degree = d + t1.iter().map(|(dd, _)| dd - 1).sum::<Degree>();
                for t2 in letter_tuples(a, cap - used) {
                    let w: PairWord = ((d, i), t1.clone(), t2);
                    let deg = pair_degree(&w);
                    if deg <= cap {
                        per_degree.entry(deg).or_default().push(w);
                    }
                }
            }
        }
    }
    for list in per_degree.values_mut() {
        list.sort_by(|x, y| {
            (x.1.len() + x.2.len(), pair_label(a, x)).cmp(&(y.1.len() + y.2.len(), pair_label(a, y)))
        });
    }
    let mut basis = GradedBasis::new();
    let mut index = HashMap::new();
    for (&d, list) in &per_degree {
        for (i, w) in list.iter().enumerate() {
            basis.push(d, pair_label(a, w))?;
            index.insert(w.clone(), (d, i));
        }
    }
    let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
    for (&d, list) in &per_degree {
        if d + 1 > cap {
            continue;
        }
        let mut block = Matrix::zero(basis.dim(d + 1), list.len());
        for (col, w) in list.iter().enumerate() {
            for (tw, c) in pair_d(a, w) {
                let (td, ti) = index[&tw];
                debug_assert_eq!(td, d + 1);
                block.add_to(ti, col, c);
            }
        }
        diff.set_block(d, block);
    }
    let complex = ChainComplex::new(basis, diff, DegreeRange::new(-1_000_000, cap))?;
    Ok(LoopPairComplex { complex, elements: per_degree, index })
}

/// Concatenation splitting `a⊗[a₁|…|a_n] ↦ Σ_i a⊗[a₁|…|a_i]⊗[a_{i+1}|…|a_n]`,
/// a chain map from the Hochschild complex to the pair complex.
pub fn nabla(
    ch: &HochschildComplex,
    pair: &LoopPairComplex,
) -> Result<LinearMapByDegree<Rat>, GradedError> {
    let mut out =
        LinearMapByDegree::zero(ch.complex.basis.clone(), pair.complex.basis.clone(), 0);
    for (&d, list) in &ch.elements {
        let rows = pair.complex.basis.dim(d);
        let mut block = Matrix::zero(rows, list.len());
        for (col, (aslot, letters)) in list.iter().enumerate() {
            for i in 0..=letters.len() {
                let pw: PairWord = (*aslot, letters[..i].to_vec(), letters[i..].to_vec());
                if let Some((td, ti)) = pair.index_of(&pw) {
                    debug_assert_eq!(td, d);
                    block.add_to(ti, col, rat(1));
                }
            }
        }
        out.set_block(d, block);
    }
    Ok(out)
}

/// Splittings of the terms of `nabla` on a single element, for inspection.
pub fn nabla_terms(w: &HochschildWord) -> Vec<PairWord> {
    (0..=w.1.len()).map(|i| (w.0, w.1[..i].to_vec(), w.1[i..].to_vec())).collect()
}

/// Multiplication by the fundamental class, `[a₁|…|a_k] ↦ ω[a₁|…|a_k]`, a
/// chain map of degree `m` from the reduced bar complex to the Hochschild
/// complex.
pub fn omega_inclusion(
    omega: (Degree, usize),
    bar: &BarComplexData,
    ch: &HochschildComplex,
) -> LinearMapByDegree<Rat> {
    let m = omega.0;
    let mut out =
        LinearMapByDegree::zero(bar.complex.basis.clone(), ch.complex.basis.clone(), m);
    for (&d, list) in &bar.words {
        let rows = ch.complex.basis.dim(d + m);
        let mut block = Matrix::zero(rows, list.len());
        for (col, w) in list.iter().enumerate() {
            debug_assert_eq!(w.left, ModuleSlot::Ground);
            debug_assert_eq!(w.right, ModuleSlot::Ground);
            let target: HochschildWord = (omega, w.letters.clone());
            if let Some((td, ti)) = ch.index_of(&target) {
                debug_assert_eq!(td, d + m);
                block.add_to(ti, col, rat(1));
            }
        }
        out.set_block(d, block);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graded::is_chain_map;

    fn s3_table() -> DgaTable {
        fixtures::s3().to_table()
    }

    fn s2_table() -> DgaTable {
        fixtures::s2().to_table()
    }

    #[test]
    fn d0_vanishes_for_zero_differential() {
        let a = s3_table();
        let bar = reduced_bar_complex(&a, 8).unwrap();
        assert!(bar.d0.is_zero());
    }

    #[test]
    fn d0_single_letter_example() {
        // A = ∧(x₂,y₃; dy = x²) truncated: d₀([y]) = −[x²]
        let a = DgaTable::from_free(&fixtures::s2_sullivan(), 10).unwrap();
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(3, a.basis.index_of(3, "y").unwrap())],
            right: ModuleSlot::Ground,
        };
        let terms = bar_d0(&a, &word);
        assert_eq!(terms.len(), 1);
        let (tw, c) = &terms[0];
        assert_eq!(tw.display(&a), "[x^2]");
        assert_eq!(c, &rat(-1));
    }

    #[test]
    fn d0_empty_word_hits_both_modules() {
        // d₀(n[]m) = d(n)[]m + (−1)^{|n|} n[]d(m)
        let a = fixtures::acyclic_pair().to_table();
        let n = ModuleSlot::Alg(2, 0); // a₂ with d(a) = b
        let word = BarWord { left: n, letters: vec![], right: n };
        let terms = bar_d0(&a, &word);
        assert_eq!(terms.len(), 2);
        // d(n)[]m comes with +1, n[]d(m) with (−1)^{|n|} = +1
        for (tw, c) in terms {
            assert_eq!(c, rat(1));
            assert_eq!(tw.degree(), word.degree() + 1);
        }
    }

    #[test]
    fn d1_on_length_one_reduced_word_vanishes() {
        let a = s2_table();
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(2, 0)],
            right: ModuleSlot::Ground,
        };
        assert!(bar_d1(&a, &word).is_empty());
    }

    #[test]
    fn d1_merges_with_suspended_sign() {
        // in B̄A over CP²: d₁([x|x]) = (−1)^{|sx|}[x²] = −[x2]
        let a = fixtures::cp2().to_table();
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(2, 0), (2, 0)],
            right: ModuleSlot::Ground,
        };
        let terms = bar_d1(&a, &word);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0.display(&a), "[x2]");
        assert_eq!(terms[0].1, rat(-1));
        // over S³ the square is zero, so the merge vanishes
        let a = s3_table();
        let word = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(3, 0), (3, 0)],
            right: ModuleSlot::Ground,
        };
        assert!(bar_d1(&a, &word).is_empty());
    }

    #[test]
    fn bar_complexes_square_to_zero() {
        for a in [s2_table(), s3_table(), fixtures::cp2().to_table(), fixtures::acyclic_pair().to_table()] {
            let bar = two_sided_bar_complex(&a, BarCoefficient::Algebra, BarCoefficient::Algebra, 7)
                .unwrap();
            bar.complex.check_dd_zero(DegreeRange::new(0, 6)).unwrap();
            let reduced = reduced_bar_complex(&a, 7).unwrap();
            reduced.complex.check_dd_zero(DegreeRange::new(0, 6)).unwrap();
        }
    }

    #[test]
    fn reduced_bar_of_s3_is_polynomial_on_one_even_class() {
        let bar = reduced_bar_complex(&s3_table(), 9).unwrap();
        let h = bar.complex.homology(DegreeRange::new(0, 8)).unwrap();
        for p in 0..=8 {
            let expected = usize::from(p % 2 == 0);
            assert_eq!(h.betti(p), expected, "degree {p}");
        }
    }

    #[test]
    fn bar_coproduct_examples() {
        let empty = BarWord { left: ModuleSlot::Ground, letters: vec![], right: ModuleSlot::Ground };
        assert_eq!(bar_coproduct(&empty).len(), 1);

        let one = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(3, 0)],
            right: ModuleSlot::Ground,
        };
        let cp = bar_coproduct(&one);
        assert_eq!(cp.len(), 2);
        assert_eq!(cp[0].0.letters.len(), 0);
        assert_eq!(cp[0].1.letters.len(), 1);
        assert_eq!(cp[1].0.letters.len(), 1);
        assert_eq!(cp[1].1.letters.len(), 0);

        let two = BarWord {
            left: ModuleSlot::Ground,
            letters: vec![(3, 0), (2, 1)],
            right: ModuleSlot::Ground,
        };
        let cp = bar_coproduct(&two);
        assert_eq!(cp.len(), 3);
        assert_eq!(cp[1].0.letters, vec![(3, 0)]);
        assert_eq!(cp[1].1.letters, vec![(2, 1)]);
    }

    #[test]
    fn bar_coproduct_is_coassociative_and_counital() {
        // deconcatenation on abstract words up to length 5
        let letters: Vec<(Degree, usize)> = vec![(2, 0), (3, 1), (2, 2), (4, 0), (2, 1)];
        for len in 0..=5 {
            let word = BarWord {
                left: ModuleSlot::Ground,
                letters: letters[..len].to_vec(),
                right: ModuleSlot::Ground,
            };
            // counit: exactly one term with empty left (resp. right) factor,
            // and it restores the word
            let cp = bar_coproduct(&word);
            let left_unit: Vec<_> = cp.iter().filter(|(l, _)| l.letters.is_empty()).collect();
            assert_eq!(left_unit.len(), 1);
            assert_eq!(left_unit[0].1.letters, word.letters);
            // coassociativity: (φ⊗1)φ = (1⊗φ)φ as multisets of triples
            let mut lhs = Vec::new();
            for (u, v) in bar_coproduct(&word) {
                for (u1, u2) in bar_coproduct(&u) {
                    lhs.push((u1.letters.clone(), u2.letters.clone(), v.letters.clone()));
                }
            }
            let mut rhs = Vec::new();
            for (u, v) in bar_coproduct(&word) {
                for (v1, v2) in bar_coproduct(&v) {
                    rhs.push((u.letters.clone(), v1.letters.clone(), v2.letters.clone()));
                }
            }
            lhs.sort();
            rhs.sort();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hochschild_of_s3_has_zero_differential_and_known_betti() {
        let ch = hochschild_complex(&s3_table(), 9).unwrap();
        assert!(ch.complex.diff.is_zero());
        let h = ch.complex.homology(DegreeRange::new(0, 8)).unwrap();
        let expected = [1, 0, 1, 1, 1, 1, 1, 1, 1];
        for (p, e) in expected.iter().enumerate() {
            assert_eq!(h.betti(p as Degree), *e, "degree {p}");
        }
    }

    #[test]
    fn hochschild_of_point_is_ground_field() {
        let point = FinitePdAlgebraPoint::table();
        let ch = hochschild_complex(&point, 6).unwrap();
        let h = ch.complex.homology(DegreeRange::new(0, 5)).unwrap();
        assert_eq!(h.betti(0), 1);
        for p in 1..=5 {
            assert_eq!(h.betti(p), 0);
        }
    }

    // minimal one-point algebra table without going through the duality type
    struct FinitePdAlgebraPoint;
    impl FinitePdAlgebraPoint {
        fn table() -> DgaTable {
            let basis =
                GradedBasis::from_degrees(vec![(0, vec!["1".to_string()])]).unwrap();
            let diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
            let mut mul = HashMap::new();
            mul.insert((0, 0, 0, 0), vec![(0usize, rat(1))]);
            DgaTable::new(basis, diff, 0, mul, DegreeRange::all())
        }
    }

    #[test]
    fn hochschild_complexes_square_to_zero() {
        for a in [s2_table(), fixtures::cp2().to_table(), fixtures::acyclic_pair().to_table()] {
            let ch = hochschild_complex(&a, 8).unwrap();
            ch.complex.check_dd_zero(DegreeRange::new(0, 7)).unwrap();
        }
        let free = DgaTable::from_free(&fixtures::s2_sullivan(), 9).unwrap();
        let ch = hochschild_complex(&free, 7).unwrap();
        ch.complex.check_dd_zero(DegreeRange::new(0, 6)).unwrap();
    }

    #[test]
    fn pair_complex_squares_to_zero_and_nabla_is_a_chain_map() {
        for a in [s2_table(), s3_table(), fixtures::cp2().to_table(), fixtures::acyclic_pair().to_table()] {
            let cap = 7;
            let ch = hochschild_complex(&a, cap).unwrap();
            let pair = loop_pair_complex(&a, cap).unwrap();
            pair.complex.check_dd_zero(DegreeRange::new(0, cap - 1)).unwrap();
            let n = nabla(&ch, &pair).unwrap();
            assert!(is_chain_map(&n, &ch.complex, &pair.complex, DegreeRange::new(0, cap - 1))
                .unwrap());
        }
    }

    #[test]
    fn nabla_term_examples() {
        let w: HochschildWord = ((0, 0), vec![]);
        assert_eq!(nabla_terms(&w).len(), 1);
        let w: HochschildWord = ((0, 0), vec![(3, 0)]);
        assert_eq!(nabla_terms(&w).len(), 2);
        let w: HochschildWord = ((0, 0), vec![(3, 0), (3, 0)]);
        let ts = nabla_terms(&w);
        assert_eq!(ts.len(), 3);
        assert_eq!(ts[1].1, vec![(3, 0)]);
        assert_eq!(ts[1].2, vec![(3, 0)]);
    }

    #[test]
    fn omega_inclusion_is_a_chain_map_and_injective_for_s3() {
        let a = s3_table();
        let cap = 9;
        let bar = reduced_bar_complex(&a, cap).unwrap();
        let ch = hochschild_complex(&a, cap + 3).unwrap();
        let omega = (3, fixtures::s3().fundamental().1);
        let phi = omega_inclusion(omega, &bar, &ch);
        assert!(is_chain_map(&phi, &bar.complex, &ch.complex, DegreeRange::new(0, cap - 1))
            .unwrap());
        let hb = bar.complex.homology(DegreeRange::new(0, 7)).unwrap();
        let hc = ch.complex.homology(DegreeRange::new(0, 11)).unwrap();
        let induced = crate::graded::induced_on_homology(&phi, &hb, &hc).unwrap();
        for p in 0..=7 {
            let block = induced.block(p);
            assert_eq!(block.rank(), block.cols(), "degree {p}");
        }
    }

    #[test]
    fn omega_inclusion_is_a_chain_map_for_s2() {
        let a = s2_table();
        let bar = reduced_bar_complex(&a, 8).unwrap();
        let ch = hochschild_complex(&a, 11).unwrap();
        let omega = (2, fixtures::s2().fundamental().1);
        let phi = omega_inclusion(omega, &bar, &ch);
        assert!(is_chain_map(&phi, &bar.complex, &ch.complex, DegreeRange::new(0, 7)).unwrap());
    }
}
