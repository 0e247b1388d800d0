//! Free graded-commutative differential algebras presented by generators and
//! a differential, the monomial bases they materialize to, and the free loop
//! space model `∧(V ⊕ sV)`.

use crate::graded::{Degree, DegreeRange, GradedBasis, GradedError, LinearMapByDegree};
use crate::matrix::Matrix;
use crate::scalar::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CdgaError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("d does not raise degree by 1 on {generator}: term {term} has degree {found}, expected {expected}")]
    DifferentialDegree { generator: String, term: String, found: Degree, expected: Degree },
    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),
    #[error("{0}")]
    Graded(#[from] GradedError),
}

/// Generator of a free cdga. Odd-degree generators square to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: Degree,
}

/// Exponent vector over the declared generators, canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n_gens: usize) -> Self {
        Monomial { exps: vec![0; n_gens] }
    }

    pub fn generator(n_gens: usize, idx: usize) -> Self {
        let mut exps = vec![0; n_gens];
        exps[idx] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.exps.get(idx).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Pads with zero exponents when the algebra has gained generators.
    pub fn padded(&self, n_gens: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.resize(n_gens.max(exps.len()), 0);
        Monomial { exps }
    }

    pub fn degree(&self, gens: &[Generator]) -> Degree {
        self.exps.iter().zip(gens).map(|(&e, g)| e as Degree * g.degree).sum()
    }

    /// Graded-commutative product: `None` when an odd generator squares.
    /// The sign reorders the concatenation into canonical form.
    pub fn mul(&self, other: &Monomial, gens: &[Generator]) -> Option<(Monomial, i32)> {
        let n = gens.len();
        let a = self.padded(n);
        let b = other.padded(n);
        let mut sign_exp: i64 = 0;
        for i in 0..n {
            if gens[i].degree % 2 != 0 {
                if a.exps[i] + b.exps[i] > 1 {
                    return None;
                }
                if b.exps[i] == 1 {
                    // b's factor g_i crosses every odd factor of a sitting to its right
                    for j in (i + 1)..n {
                        if gens[j].degree % 2 != 0 {
                            sign_exp += a.exps[j] as i64;
                        }
                    }
                }
            }
        }
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        Some((Monomial { exps }, if sign_exp % 2 == 0 { 1 } else { -1 }))
    }

    pub fn display(&self, gens: &[Generator]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(gens)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Sorts monomials of equal degree with higher powers of earlier generators
/// first, the order every basis and table in the crate uses.
fn canonical_cmp(a: &Monomial, b: &Monomial, gens: &[Generator]) -> std::cmp::Ordering {
    let (da, db) = (a.degree(gens), b.degree(gens));
    da.cmp(&db).then_with(|| b.exps.cmp(&a.exps))
}

/// Finite linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one(n_gens: usize) -> Self {
        Poly::term(Monomial::one(n_gens), rat(1))
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(n_gens: usize, idx: usize) -> Self {
        Poly::term(Monomial::generator(n_gens, idx), rat(1))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        // drop cancelled terms eagerly
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect() }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&rat(-1))
    }

    pub fn mul(&self, other: &Poly, gens: &[Generator]) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb, gens) {
                    out.add_term(m, ca.clone() * cb.clone() * rat(sign as i64));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32, gens: &[Generator]) -> Poly {
        let mut out = Poly::one(gens.len());
        for _ in 0..e {
            out = out.mul(self, gens);
        }
        out
    }

    /// The common degree of all terms, or `None` for 0 or mixed degrees.
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Option<Degree> {
        let mut degs = self.terms.keys().map(|m| m.degree(gens));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn display(&self, gens: &[Generator]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| canonical_cmp(a, b, gens));
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c < &&Rat::zero();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_one = abs == rat(1);
            if m.is_one() {
                out.push_str(&format!("{}", abs));
            } else if coeff_one {
                out.push_str(&m.display(gens));
            } else {
                out.push_str(&format!("{}*{}", abs, m.display(gens)));
            }
        }
        out
    }
}

/// Verdict of the `d² = 0` check.
#[derive(Debug, Clone, PartialEq)]
pub enum CdgaVerdict {
    Pass,
    Fail { generator: String, d_squared: String },
}

/// Free graded-commutative differential algebra `(∧V, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeCdga {
    gens: Vec<Generator>,
    d_values: Vec<Poly>,
    by_name: HashMap<String, usize>,
}

impl FreeCdga {
    /// Builds the presentation, enforcing degree bookkeeping: generator
    /// degrees are >= 1 and the differential raises degree by exactly one.
    pub fn new(
        gens: Vec<(String, Degree)>,
        differential: Vec<(String, Poly)>,
    ) -> Result<FreeCdga, CdgaError> {
        let generators: Vec<Generator> =
            gens.into_iter().map(|(name, degree)| Generator { name, degree }).collect();
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(CdgaError::InvalidPresentation("empty generator name".to_string()));
            }
            if g.degree < 1 {
                return Err(CdgaError::InvalidPresentation(format!(
                    "generator {} has degree {} < 1",
                    g.name, g.degree
                )));
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(CdgaError::InvalidPresentation(format!(
                    "duplicate generator {}",
                    g.name
                )));
            }
        }
        let mut d_values = vec![Poly::zero(); generators.len()];
        for (name, p) in differential {
            let idx = *by_name.get(&name).ok_or_else(|| {
                CdgaError::InvalidPresentation(format!("differential on unknown generator {name}"))
            })?;
            let expected = generators[idx].degree + 1;
            for (m, _) in p.terms() {
                let found = m.padded(generators.len()).degree(&generators);
                if found != expected {
                    return Err(CdgaError::DifferentialDegree {
                        generator: name.clone(),
                        term: m.display(&generators),
                        found,
                        expected,
                    });
                }
            }
            d_values[idx] = p;
        }
        Ok(FreeCdga { gens: generators, d_values, by_name })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn d_value(&self, idx: usize) -> &Poly {
        &self.d_values[idx]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d_values.iter().all(|p| p.is_zero())
    }

    /// All canonical monomials of the given degree, in degree-lexicographic
    /// order (higher powers of earlier generators first).
    pub fn monomial_basis(&self, degree: Degree) -> Vec<Monomial> {
        assert!(degree >= 0, "monomial degree must be nonnegative");
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.gens.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort_by(|a, b| canonical_cmp(a, b, &self.gens));
        out
    }

    fn enumerate(&self, idx: usize, remaining: Degree, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if remaining == 0 && idx >= self.gens.len() {
            out.push(Monomial::from_exps(exps.clone()));
            return;
        }
        if idx >= self.gens.len() {
            return;
        }
        let g = &self.gens[idx];
        let max_e = if g.degree % 2 != 0 { 1 } else { (remaining / g.degree) as u32 };
        for e in 0..=max_e {
            let used = e as Degree * g.degree;
            if used > remaining {
                break;
            }
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - used, exps, out);
        }
        exps[idx] = 0;
    }

    /// Extends generator values to the signed Leibniz derivation
    /// `θ(ab) = θ(a)b + (−1)^{parity·|a|} a θ(b)` and applies it.
    pub fn apply_derivation(
        &self,
        values: &[Poly],
        parity: i32,
        input: &Poly,
    ) -> Result<Poly, CdgaError> {
        assert_eq!(values.len(), self.gens.len(), "one value per generator");
        if !input.is_zero() && input.homogeneous_degree(&self.gens).is_none() {
            return Err(CdgaError::NonHomogeneous(input.display(&self.gens)));
        }
        let mut out = Poly::zero();
        for (m, c) in input.terms() {
            out = out.add(&self.derive_monomial(values, parity, m).scale(c));
        }
        Ok(out)
    }

    fn derive_monomial(&self, values: &[Poly], parity: i32, m: &Monomial) -> Poly {
        let m = m.padded(self.gens.len());
        let mut out = Poly::zero();
        let mut prefix_degree: Degree = 0;
        let mut prefix = Poly::one(self.gens.len());
        for i in 0..self.gens.len() {
            let e = m.exp(i);
            if e > 0 && !values[i].is_zero() {
                // θ hits one of the e copies of g_i; for even g_i all e
                // placements agree, for odd g_i there is a single copy
                let sign_exp = parity * prefix_degree;
                let sign = if sign_exp.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                let multiplicity = rat(e as i64);
                let mut rest_exps = vec![0u32; self.gens.len()];
                rest_exps[i] = e - 1;
                for j in (i + 1)..self.gens.len() {
                    rest_exps[j] = m.exp(j);
                }
                let rest = Poly::term(Monomial::from_exps(rest_exps), rat(1));
                let term = prefix
                    .mul(&values[i].scale(&(sign * multiplicity)), &self.gens)
                    .mul(&rest, &self.gens);
                out = out.add(&term);
            }
            if e > 0 {
                prefix_degree += e as Degree * self.gens[i].degree;
                let mut step = vec![0u32; self.gens.len()];
                step[i] = e;
                prefix = prefix.mul(&Poly::term(Monomial::from_exps(step), rat(1)), &self.gens);
            }
        }
        out
    }

    /// The differential, extended as an odd derivation.
    pub fn d(&self, input: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in input.terms() {
            out = out.add(&self.derive_monomial(&self.d_values, 1, m).scale(c));
        }
        out
    }

    /// Confirms `d²(g) = 0` for every generator with `|g| + 2 <= max_degree + 1`.
    pub fn check_cdga(&self, max_degree: Degree) -> CdgaVerdict {
        for (i, g) in self.gens.iter().enumerate() {
            if g.degree + 2 > max_degree + 1 {
                continue;
            }
            let dd = self.d(&self.d_values[i]);
            if !dd.is_zero() {
                return CdgaVerdict::Fail {
                    generator: g.name.clone(),
                    d_squared: dd.display(&self.gens),
                };
            }
        }
        CdgaVerdict::Pass
    }

    /// Free loop space model `∧(V ⊕ sV)`: every generator `v` gains a partner
    /// `sv` of degree `|v| − 1`, the differential extends `d` on `V` and sends
    /// `sv` to `−S(dv)` for the degree `−1` derivation `S(v) = sv, S(sv) = 0`.
    pub fn loop_space_model(&self) -> Result<LoopModel, CdgaError> {
        let n = self.gens.len();
        for g in &self.gens {
            if g.degree < 2 {
                return Err(CdgaError::InvalidPresentation(format!(
                    "loop model needs generators of degree >= 2, found {} of degree {}",
                    g.name, g.degree
                )));
            }
        }
        let mut gens: Vec<(String, Degree)> =
            self.gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
        for g in &self.gens {
            gens.push((format!("s{}", g.name), g.degree - 1));
        }
        // differential values computed inside the doubled algebra
        let big = FreeCdga::new(gens.clone(), Vec::new())?;
        let lift = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (m, c) in p.terms() {
                out.add_term(m.padded(2 * n), c.clone());
            }
            out
        };
        let mut s_values = Vec::with_capacity(2 * n);
        for i in 0..n {
            s_values.push(Poly::generator(2 * n, n + i));
        }
        s_values.extend(std::iter::repeat_n(Poly::zero(), n));
        let mut differential = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            differential.push((g.name.clone(), lift(&self.d_values[i])));
            let s_of_dv = big.apply_derivation(&s_values, 1, &lift(&self.d_values[i]))?;
            differential.push((format!("s{}", g.name), s_of_dv.neg()));
        }
        let algebra = FreeCdga::new(gens, differential)?;
        match algebra.check_cdga(i32::MAX - 2) {
            CdgaVerdict::Pass => Ok(LoopModel { algebra, base_count: n }),
            CdgaVerdict::Fail { generator, d_squared } => Err(CdgaError::InvalidPresentation(
                format!("loop model differential does not square to zero on {generator}: {d_squared}"),
            )),
        }
    }

    /// Materializes the underlying cochain complex up to `hi`, together with
    /// the monomial lists backing each degree.
    pub fn cochain_complex(
        &self,
        hi: Degree,
    ) -> Result<(crate::graded::ChainComplex<Rat>, BTreeMap<Degree, Vec<Monomial>>), CdgaError>
    {
        let mut basis = GradedBasis::new();
        let mut monomials = BTreeMap::new();
        for p in 0..=hi {
            let ms = self.monomial_basis(p);
            for m in &ms {
                basis.push(p, m.display(&self.gens))?;
            }
            monomials.insert(p, ms);
        }
        let mut diff = LinearMapByDegree::zero(basis.clone(), basis.clone(), 1);
        for p in 0..hi {
            let cols = &monomials[&p];
            let rows = &monomials[&(p + 1)];
            if cols.is_empty() || rows.is_empty() {
                continue;
            }
            let row_index: HashMap<&Monomial, usize> =
                rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut block = Matrix::zero(rows.len(), cols.len());
            for (j, m) in cols.iter().enumerate() {
                let dm = self.d(&Poly::term(m.clone(), rat(1)));
                for (tm, c) in dm.terms() {
                    let i = row_index[&tm.padded(self.gens.len())];
                    block.add_to(i, j, c.clone());
                }
            }
            diff.set_block(p, block);
        }
        let complex =
            crate::graded::ChainComplex::new(basis, diff, DegreeRange::new(-1_000_000, hi))?;
        Ok((complex, monomials))
    }

    /// Parses "x^2*y"-style canonical labels back into monomials.
    pub fn monomial_from_label(&self, label: &str) -> Option<Monomial> {
        if label == "1" {
            return Some(Monomial::one(self.gens.len()));
        }
        let mut exps = vec![0u32; self.gens.len()];
        for part in label.split('*') {
            let (name, e) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().ok()?),
                None => (part, 1),
            };
            let idx = self.generator_index(name)?;
            exps[idx] += e;
        }
        Some(Monomial::from_exps(exps))
    }
}

/// A free loop space model together with the split `V | sV` of its generators.
#[derive(Debug, Clone)]
pub struct LoopModel {
    pub algebra: FreeCdga,
    /// Generators `0..base_count` are the original `V`, the rest are `sV`.
    pub base_count: usize,
}

/// Morphism of free cdgas given by generator values.
#[derive(Debug, Clone)]
pub struct CdgaMorphism {
    pub source: FreeCdga,
    pub target: FreeCdga,
    pub values: Vec<Poly>,
}

impl CdgaMorphism {
    pub fn new(source: FreeCdga, target: FreeCdga, values: Vec<Poly>) -> Result<Self, CdgaError> {
        if values.len() != source.generators().len() {
            return Err(CdgaError::InvalidPresentation(
                "one value per source generator required".to_string(),
            ));
        }
        for (g, v) in source.generators().iter().zip(&values) {
            if !v.is_zero() {
                match v.homogeneous_degree(target.generators()) {
                    Some(d) if d == g.degree => {}
                    Some(d) => {
                        return Err(CdgaError::InvalidPresentation(format!(
                            "morphism does not preserve degree on {}: image degree {d}, expected {}",
                            g.name, g.degree
                        )))
                    }
                    None => {
                        return Err(CdgaError::NonHomogeneous(format!(
                            "image of {} is not homogeneous",
                            g.name
                        )))
                    }
                }
            }
        }
        Ok(CdgaMorphism { source, target, values })
    }

    pub fn identity(algebra: &FreeCdga) -> Self {
        let n = algebra.generators().len();
        let values = (0..n).map(|i| Poly::generator(n, i)).collect();
        CdgaMorphism { source: algebra.clone(), target: algebra.clone(), values }
    }

    /// Multiplicative evaluation on a polynomial.
    pub fn eval(&self, p: &Poly) -> Poly {
        let tgt_gens = self.target.generators();
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut image = Poly::one(tgt_gens.len());
            for (i, &e) in m.padded(self.source.generators().len()).exps().iter().enumerate() {
                if e > 0 {
                    image = image.mul(&self.values[i].pow(e, tgt_gens), tgt_gens);
                }
            }
            out = out.add(&image.scale(c));
        }
        out
    }

    /// Checks `φ ∘ d = d ∘ φ` on generators.
    pub fn commutes_with_differentials(&self) -> bool {
        self.source.generators().iter().enumerate().all(|(i, _)| {
            let lhs = self.eval(self.source.d_value(i));
            let rhs = self.target.d(&self.values[i]);
            lhs == rhs
        })
    }

    /// Materializes both sides through `hi` and the morphism as degreewise
    /// blocks between the monomial bases.
    pub fn to_linear_map(
        &self,
        hi: Degree,
    ) -> Result<
        (
            crate::graded::ChainComplex<Rat>,
            crate::graded::ChainComplex<Rat>,
            LinearMapByDegree<Rat>,
        ),
        CdgaError,
    > {
        let (src, src_monos) = self.source.cochain_complex(hi)?;
        let (tgt, _) = self.target.cochain_complex(hi)?;
        let mut map = LinearMapByDegree::zero(src.basis.clone(), tgt.basis.clone(), 0);
        let n_tgt = self.target.generators().len();
        for (&d, monos) in &src_monos {
            let mut block = Matrix::zero(tgt.basis.dim(d), monos.len());
            for (col, mono) in monos.iter().enumerate() {
                let image = self.eval(&Poly::term(mono.clone(), rat(1)));
                for (tm, c) in image.terms() {
                    let label = tm.padded(n_tgt).display(self.target.generators());
                    let row = tgt.basis.index_of(d, &label).ok_or_else(|| {
                        CdgaError::NonHomogeneous(format!(
                            "image monomial {label} missing from degree {d}"
                        ))
                    })?;
                    block.add_to(row, col, c.clone());
                }
            }
            map.set_block(d, block);
        }
        Ok((src, tgt, map))
    }

    /// Matrix of `H(φ)` per degree, on the homology class bases.
    pub fn induced_on_homology(
        &self,
        range: crate::graded::DegreeRange,
    ) -> Result<LinearMapByDegree<Rat>, CdgaError> {
        if !self.commutes_with_differentials() {
            return Err(CdgaError::InvalidPresentation(
                "morphism does not commute with the differentials".to_string(),
            ));
        }
        let (src, tgt, map) = self.to_linear_map(range.hi + 1)?;
        let h_src = src.homology(range)?;
        let h_tgt = tgt.homology(range)?;
        Ok(crate::graded::induced_on_homology_range(&map, &h_src, &h_tgt, Some(range))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere2_model() -> FreeCdga {
        // ∧(x₂, y₃), dy = x²
        let x_sq = Poly::term(Monomial::from_exps(vec![2, 0]), rat(1));
        FreeCdga::new(
            vec![("x".to_string(), 2), ("y".to_string(), 3)],
            vec![("y".to_string(), x_sq)],
        )
        .unwrap()
    }

    #[test]
    fn monomial_bases() {
        let a = FreeCdga::new(vec![("x".to_string(), 2)], vec![]).unwrap();
        let deg6 = a.monomial_basis(6);
        assert_eq!(deg6.len(), 1);
        assert_eq!(deg6[0].display(a.generators()), "x^3");

        let s2 = sphere2_model();
        let deg5 = s2.monomial_basis(5);
        assert_eq!(deg5.len(), 1);
        assert_eq!(deg5[0].display(s2.generators()), "x*y");
        assert!(s2.monomial_basis(1).is_empty());
    }

    #[test]
    fn differential_is_a_derivation() {
        let s2 = sphere2_model();
        // d(xy) = x · x² = x³
        let xy = Poly::term(Monomial::from_exps(vec![1, 1]), rat(1));
        let d = s2.d(&xy);
        assert_eq!(d, Poly::term(Monomial::from_exps(vec![3, 0]), rat(1)));
        // derivations kill the unit
        assert!(s2.d(&Poly::one(2)).is_zero());
    }

    #[test]
    fn degree_violation_rejected_at_construction() {
        // dx = y has degree 3, but needs degree 3 = |x|+1 = 3: pick dy = x (degree 2, expected 4)
        let bad = FreeCdga::new(
            vec![("x".to_string(), 2), ("y".to_string(), 3)],
            vec![("y".to_string(), Poly::term(Monomial::from_exps(vec![1, 0]), rat(1)))],
        );
        assert!(matches!(bad, Err(CdgaError::DifferentialDegree { .. })));
    }

    #[test]
    fn check_cdga_passes_and_fails() {
        assert_eq!(sphere2_model().check_cdga(10), CdgaVerdict::Pass);

        // ∧(a₃,b₃,c₅), dc = ab
        let ab = Poly::term(Monomial::from_exps(vec![1, 1, 0]), rat(1));
        let a = FreeCdga::new(
            vec![("a".to_string(), 3), ("b".to_string(), 3), ("c".to_string(), 5)],
            vec![("c".to_string(), ab)],
        )
        .unwrap();
        assert_eq!(a.check_cdga(10), CdgaVerdict::Pass);

        // d² ≠ 0: da = b, db = c with degrees arranged to pass the degree check
        let b = FreeCdga::new(
            vec![("a".to_string(), 2), ("b".to_string(), 3), ("c".to_string(), 4)],
            vec![
                ("a".to_string(), Poly::generator(3, 1)),
                ("b".to_string(), Poly::generator(3, 2)),
            ],
        )
        .unwrap();
        match b.check_cdga(10) {
            CdgaVerdict::Fail { generator, .. } => assert_eq!(generator, "a"),
            v => panic!("expected failure, got {v:?}"),
        }
    }

    #[test]
    fn s_derivation_example() {
        // S of degree −1 with S(x) = sx on ∧(x₂): S(x²) = 2x·sx
        let s2 = sphere2_model();
        let lm = s2.loop_space_model().unwrap();
        let a = &lm.algebra;
        // in the loop algebra, generators are x, y, sx, sy
        let x_sq = Poly::term(Monomial::from_exps(vec![2, 0, 0, 0]), rat(1));
        let mut s_values = vec![Poly::generator(4, 2), Poly::generator(4, 3)];
        s_values.extend(vec![Poly::zero(), Poly::zero()]);
        let s = a.apply_derivation(&s_values, 1, &x_sq).unwrap();
        let expected = Poly::term(Monomial::from_exps(vec![1, 0, 1, 0]), rat(2));
        assert_eq!(s, expected);
    }

    #[test]
    fn loop_model_of_spheres() {
        // ∧(x₃), d = 0 → ∧(x₃, sx₂), D = 0
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let lm = s3.loop_space_model().unwrap();
        assert!(lm.algebra.has_zero_differential());
        assert_eq!(lm.algebra.generators()[1].degree, 2);

        // ∧(x₂,y₃; dy = x²) → D(sx) = 0, D(sy) = −2x·sx
        let s2 = sphere2_model();
        let lm = s2.loop_space_model().unwrap();
        let a = &lm.algebra;
        let sx_idx = a.generator_index("sx").unwrap();
        let sy_idx = a.generator_index("sy").unwrap();
        assert!(a.d_value(sx_idx).is_zero());
        let mut expected = Poly::zero();
        let mut exps = vec![0u32; 4];
        exps[a.generator_index("x").unwrap()] = 1;
        exps[sx_idx] = 1;
        expected.add_term(Monomial::from_exps(exps), rat(-2));
        assert_eq!(a.d_value(sy_idx), &expected);
    }

    #[test]
    fn loop_model_odd_triple() {
        // ∧(a₃,b₃,c₅), dc = ab → D(sc) = −(sa·b − a·sb)
        let ab = Poly::term(Monomial::from_exps(vec![1, 1, 0]), rat(1));
        let alg = FreeCdga::new(
            vec![("a".to_string(), 3), ("b".to_string(), 3), ("c".to_string(), 5)],
            vec![("c".to_string(), ab)],
        )
        .unwrap();
        let lm = alg.loop_space_model().unwrap();
        let big = &lm.algebra;
        let sc = big.generator_index("sc").unwrap();
        // −(sa·b) + a·sb, written in canonical order: sa·b = −? canonical form
        // puts a-generators first; compare against a direct computation
        let mut want = Poly::zero();
        let mut e1 = vec![0u32; 6];
        e1[big.generator_index("b").unwrap()] = 1;
        e1[big.generator_index("sa").unwrap()] = 1;
        // sa·b = (−1)^{|sa||b|} b·sa = b·sa (canonical), |sa| = 2 even
        want.add_term(Monomial::from_exps(e1), rat(-1));
        let mut e2 = vec![0u32; 6];
        e2[big.generator_index("a").unwrap()] = 1;
        e2[big.generator_index("sb").unwrap()] = 1;
        want.add_term(Monomial::from_exps(e2), rat(1));
        assert_eq!(big.d_value(sc), &want);
    }

    #[test]
    fn loop_model_dimension_grading() {
        // dim ∧(V⊕sV)ⁿ = Σ_k dim(∧V)^k · dim(∧sV)^{n−k}
        let s2 = sphere2_model();
        let lm = s2.loop_space_model().unwrap();
        let v_only = FreeCdga::new(
            vec![("x".to_string(), 2), ("y".to_string(), 3)],
            vec![],
        )
        .unwrap();
        let sv_only = FreeCdga::new(
            vec![("sx".to_string(), 1), ("sy".to_string(), 2)],
            vec![],
        )
        .unwrap();
        for n in 0..=8 {
            let lhs = lm.algebra.monomial_basis(n).len();
            let rhs: usize = (0..=n)
                .map(|k| v_only.monomial_basis(k).len() * sv_only.monomial_basis(n - k).len())
                .sum();
            assert_eq!(lhs, rhs, "degree {n}");
        }
    }

    #[test]
    fn monomial_complex_homology_and_dual() {
        use crate::graded::{graded_dual, ChainComplex, DegreeRange};
        // ∧(x₂,y₃; dy = x²) on degrees 0..7: x² = d(y) and x³ = d(xy) are
        // exact, so H ≅ Q ⊕ Q·x
        let s2 = sphere2_model();
        let (complex, _) = s2.cochain_complex(8).unwrap();
        let h = complex.homology(DegreeRange::new(0, 7)).unwrap();
        for p in 0..=7 {
            let expected = usize::from(p == 0 || p == 2);
            assert_eq!(h.betti(p), expected, "degree {p}");
        }
        // duality preserves the Betti numbers, mirrored in degree
        let (dual_basis, dual_diff) = graded_dual(&complex.basis, &complex.diff);
        let dual =
            ChainComplex::new(dual_basis, dual_diff, DegreeRange::new(-8, 1_000_000)).unwrap();
        let hd = dual.homology(DegreeRange::new(-7, 0)).unwrap();
        for p in 0..=7 {
            assert_eq!(hd.betti(-p), h.betti(p), "degree {p}");
        }
    }

    #[test]
    fn induced_map_of_identity_is_identity() {
        use crate::graded::DegreeRange;
        let s2 = sphere2_model();
        let id = CdgaMorphism::identity(&s2);
        let induced = id.induced_on_homology(DegreeRange::new(0, 6)).unwrap();
        for p in 0..=6 {
            let b = induced.block(p);
            assert_eq!(b.rows(), b.cols());
            if b.rows() > 0 {
                assert_eq!(b, crate::matrix::Matrix::identity(b.rows()), "degree {p}");
            }
        }
    }

    #[test]
    fn induced_map_of_loop_inclusion_is_injective() {
        use crate::graded::DegreeRange;
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let lm = s3.loop_space_model().unwrap();
        let inc =
            CdgaMorphism::new(s3.clone(), lm.algebra.clone(), vec![Poly::generator(2, 0)])
                .unwrap();
        let induced = inc.induced_on_homology(DegreeRange::new(0, 3)).unwrap();
        for p in [0, 3] {
            let b = induced.block(p);
            assert_eq!(b.rank(), b.cols(), "degree {p}");
        }
    }

    #[test]
    fn induced_map_to_finite_quotient() {
        // ∧(x₂,y₃; dy=x²) → Q[x]/(x²) with y ↦ 0: iso on H in degrees 0 and 2
        use crate::dga::{free_to_table_map, Elem};
        use crate::graded::DegreeRange;
        let s2 = sphere2_model();
        let target = crate::fixtures::s2().to_table();
        let values = vec![Elem::basis(2, 0), Elem::zero(3)];
        let map = free_to_table_map(&s2, &values, &target, 7);
        let (src, _) = s2.cochain_complex(7).unwrap();
        let phi = map.to_linear_map(&src.basis, &target.basis);
        let h_src = src.homology(DegreeRange::new(0, 6)).unwrap();
        let h_tgt = target.complex().homology(DegreeRange::new(0, 6)).unwrap();
        let induced = crate::graded::induced_on_homology(&phi, &h_src, &h_tgt).unwrap();
        for p in 0..=6 {
            let b = induced.block(p);
            assert_eq!(b.rows(), b.cols(), "degree {p}");
            assert_eq!(b.rank(), b.rows(), "degree {p}");
        }
        assert_eq!(h_src.betti(0), 1);
        assert_eq!(h_src.betti(2), 1);
    }

    #[test]
    fn morphism_checks() {
        let s3 = FreeCdga::new(vec![("x".to_string(), 3)], vec![]).unwrap();
        let id = CdgaMorphism::identity(&s3);
        assert!(id.commutes_with_differentials());

        let s2 = sphere2_model();
        let lm = s2.loop_space_model().unwrap();
        // inclusion ∧(x,y) → loop model
        let inc = CdgaMorphism::new(
            s2.clone(),
            lm.algebra.clone(),
            vec![Poly::generator(4, 0), Poly::generator(4, 1)],
        )
        .unwrap();
        assert!(inc.commutes_with_differentials());
    }
}
