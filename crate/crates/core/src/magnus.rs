//! Truncated noncommutative integer power series and the Magnus expansion
//! `x_i ↦ 1 + X_i`, `x_i⁻¹ ↦ 1 − X_i + X_i² − …`.
//!
//! Two truncation modes share one representation:
//!
//! * [`Truncation::Degree`]: every monomial of degree `> D` is dropped.
//! * [`Truncation::Reduced`]: additionally every monomial with a repeated
//!   index is dropped. This quotient ring is where the relators
//!   `[x_i, x_i^y]` of the free Milnor group map to 1, and is the model of
//!   `MF_n` used throughout the crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::words::{GenId, Letter, Word};

/// A noncommutative monomial `X_{i1} X_{i2} … X_{ik}`. Ordered by degree,
/// then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub SmallVec<[GenId; 6]>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_slice(idx: &[GenId]) -> Self {
        Monomial(SmallVec::from_slice(idx))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[GenId] {
        &self.0
    }

    pub fn has_distinct_indices(&self) -> bool {
        let v = &self.0;
        (0..v.len()).all(|i| !v[i + 1..].contains(&v[i]))
    }

    fn extended(&self, g: GenId, times: usize) -> Monomial {
        let mut m = self.0.clone();
        m.extend(std::iter::repeat_n(g, times));
        Monomial(m)
    }

    fn concat(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        m.extend_from_slice(&other.0);
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for i in &self.0 {
            write!(f, "X{i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// Drop monomials of degree above the bound.
    Degree(usize),
    /// Drop monomials with repeated indices and degree above the bound.
    Reduced(usize),
}

impl Truncation {
    pub fn max_degree(self) -> usize {
        match self {
            Truncation::Degree(d) | Truncation::Reduced(d) => d,
        }
    }

    pub fn is_reduced(self) -> bool {
        matches!(self, Truncation::Reduced(_))
    }

    fn admits(self, m: &Monomial) -> bool {
        m.degree() <= self.max_degree() && (!self.is_reduced() || m.has_distinct_indices())
    }
}

/// Sparse truncated series. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    trunc: Truncation,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: Truncation) -> Self {
        let mut s = Series::zero(trunc);
        s.terms.insert(Monomial::unit(), BigInt::one());
        s
    }

    /// Builds a series from explicit terms; inadmissible monomials are
    /// dropped, repeated monomials summed.
    pub fn from_terms<I>(trunc: Truncation, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<GenId>, BigInt)>,
    {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            let m = Monomial(SmallVec::from_vec(m));
            if trunc.admits(&m) {
                s.add_term(m, c);
            }
        }
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, idx: &[GenId]) -> BigInt {
        self.terms
            .get(&Monomial::from_slice(idx))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant(&self) -> BigInt {
        self.coefficient(&[])
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant().is_one()
    }

    /// Smallest degree `≥ 1` carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).find(|&d| d >= 1)
    }

    /// Terms of exactly degree `d`, in (lexicographic) order.
    pub fn homogeneous(&self, d: usize) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().filter(move |(m, _)| m.degree() == d)
    }

    /// Multiplies on the right by the image of a single letter.
    pub fn mul_letter(&mut self, l: Letter) {
        let dmax = self.trunc.max_degree();
        let reduced = self.trunc.is_reduced();
        let mut additions: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in &self.terms {
            let room = dmax.saturating_sub(m.degree());
            if room == 0 || (reduced && m.0.contains(&l.gen)) {
                continue;
            }
            if !l.inverse {
                additions.push((m.extended(l.gen, 1), c.clone()));
            } else {
                // (1 + X)^-1 = Σ (−X)^k; in the reduced ring only k ≤ 1 survives
                let kmax = if reduced { 1 } else { room };
                for k in 1..=kmax {
                    let coef = if k % 2 == 1 { -c.clone() } else { c.clone() };
                    additions.push((m.extended(l.gen, k), coef));
                }
            }
        }
        for (m, c) in additions {
            self.add_term(m, c);
        }
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::ShapeMismatch(format!(
                "series truncations differ: {:?} vs {:?}",
                self.trunc, other.trunc
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let dmax = self.trunc.max_degree();
        let mut out = Series::zero(self.trunc);
        for (a, ca) in &self.terms {
            let room = dmax - a.degree();
            for (b, cb) in other.terms.iter().take_while(|(b, _)| b.degree() <= room) {
                let m = a.concat(b);
                if self.trunc.is_reduced() && !m.has_distinct_indices() {
                    continue;
                }
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Inverse of a series with constant term ±1.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = self.constant();
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::NotInvertible(c0.to_string()));
        }
        // self = c0 (1 + r)  ⇒  self⁻¹ = c0 Σ (−r)^k
        let mut r = self.scale(&c0);
        r.terms.remove(&Monomial::unit());
        let neg_r = r.scale(&BigInt::from(-1));
        let mut acc = Series::one(self.trunc);
        let mut power = Series::one(self.trunc);
        for _ in 0..self.trunc.max_degree() {
            power = power.mul(&neg_r)?;
            if power.terms.is_empty() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0))
    }

    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Series::one(self.trunc);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(result)
    }

    /// Deletes every monomial with a repeated index.
    pub fn delete_repeated(&self) -> Series {
        let trunc = Truncation::Reduced(self.trunc.max_degree());
        Series {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.has_distinct_indices())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops monomials of degree above `d` (keeping the mode).
    pub fn truncate(&self, d: usize) -> Series {
        let trunc = match self.trunc {
            Truncation::Degree(_) => Truncation::Degree(d),
            Truncation::Reduced(_) => Truncation::Reduced(d),
        };
        Series {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            degree: self.trunc.max_degree(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    mono: m.0.to_vec(),
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}{m}")?;
            }
        }
        Ok(())
    }
}

/// `{ "D": int, "terms": [ { "mono": [..], "coef": "…" } ] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(rename = "D")]
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub mono: Vec<GenId>,
    pub coef: String,
}

/// Magnus expansion of `w` truncated at degree `d`.
pub fn expand(w: &Word, d: usize) -> Series {
    expand_in(w, Truncation::Degree(d))
}

/// Magnus expansion in the ring with repeated-index monomials killed,
/// truncated at degree `n` (the largest degree a distinct-index monomial
/// over `n` generators can have).
pub fn reduced_expand(w: &Word, n: usize) -> Series {
    expand_in(w, Truncation::Reduced(n))
}

pub fn expand_in(w: &Word, trunc: Truncation) -> Series {
    let mut s = Series::one(trunc);
    for &l in w.letters() {
        s.mul_letter(l);
    }
    s
}

/// Product of series, multiplied pairwise as a balanced tree so that
/// long products of near-identity factors stay cheap.
pub fn product(mut items: Vec<Series>, trunc: Truncation) -> Result<Series> {
    if items.is_empty() {
        return Ok(Series::one(trunc));
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.mul(&b)?),
                None => next.push(a),
            }
        }
        items = next;
    }
    Ok(items.pop().expect("nonempty"))
}

/// Expansion of the concatenation `chunks[0]·chunks[1]⋯`, computed chunk
/// by chunk. Equal to `expand_in` of the concatenated word.
pub fn expand_product(chunks: &[Word], trunc: Truncation) -> Result<Series> {
    product(chunks.iter().map(|w| expand_in(w, trunc)).collect(), trunc)
}

/// Lower-central placement as seen by the truncated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LcsDegree {
    /// Lowest nonvanishing degree; the word lies in `F^k` but not `F^{k+1}`.
    Exact(usize),
    /// Nothing survives up to the cap; the word lies in `F^{cap+1}`.
    Beyond(usize),
}

impl LcsDegree {
    /// Certified lower bound `k` with `w ∈ F^k`.
    pub fn lower_bound(self) -> usize {
        match self {
            LcsDegree::Exact(k) => k,
            LcsDegree::Beyond(cap) => cap + 1,
        }
    }
}

impl fmt::Display for LcsDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDegree::Exact(k) => write!(f, "{k}"),
            LcsDegree::Beyond(cap) => write!(f, ">{cap}"),
        }
    }
}

/// Lowest nonvanishing degree of `expand(w, cap)`. `n` is the generator
/// count of the ambient free group; it does not change the answer.
pub fn lcs_degree(w: &Word, _n: usize, cap: usize) -> LcsDegree {
    match expand(w, cap).lowest_degree() {
        Some(k) => LcsDegree::Exact(k),
        None => LcsDegree::Beyond(cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(trunc: Truncation, terms: &[(&[GenId], i64)]) -> Series {
        Series::from_terms(
            trunc,
            terms.iter().map(|(m, c)| (m.to_vec(), BigInt::from(*c))),
        )
    }

    fn comm(a: &Word, b: &Word) -> Word {
        Word::commutator(a, b)
    }

    #[test]
    fn generator_and_identity_images() {
        assert_eq!(
            expand(&Word::gen(1), 3),
            s(Truncation::Degree(3), &[(&[], 1), (&[1], 1)])
        );
        assert!(expand(&Word::identity(), 5).is_one());
    }

    #[test]
    fn commutator_degree_two() {
        // (1+X1)(1+X2)(1−X1+X1²)(1−X2+X2²) truncated at 2
        let w = comm(&Word::gen(1), &Word::gen(2));
        let expected = s(
            Truncation::Degree(2),
            &[(&[], 1), (&[1, 2], 1), (&[2, 1], -1)],
        );
        assert_eq!(expand(&w, 2), expected);
    }

    #[test]
    fn ring_operations() {
        let t = Truncation::Degree(2);
        let a = s(t, &[(&[], 1), (&[1], 1)]);
        let b = s(t, &[(&[], 1), (&[1], -1)]);
        assert_eq!(a.mul(&b).unwrap(), s(t, &[(&[], 1), (&[1, 1], -1)]));
        assert_eq!(
            a.inverse().unwrap(),
            s(t, &[(&[], 1), (&[1], -1), (&[1, 1], 1)])
        );
        let bad = s(t, &[(&[], 2), (&[1], 1)]);
        assert!(matches!(bad.inverse(), Err(Error::NotInvertible(_))));
        assert_eq!(Series::one(t).lowest_degree(), None);
        let mismatch = Series::one(Truncation::Degree(3));
        assert!(a.mul(&mismatch).is_err());
    }

    #[test]
    fn reduced_examples() {
        let m1 = Word::gen(1);
        let m2 = Word::gen(2);
        // [m1, m1^m2] dies
        let rel = comm(&m1, &m1.conjugate(&m2));
        assert!(reduced_expand(&rel, 2).is_one());
        // m1 m2
        let expected = s(
            Truncation::Reduced(2),
            &[(&[], 1), (&[1], 1), (&[2], 1), (&[1, 2], 1)],
        );
        assert_eq!(reduced_expand(&m1.mul(&m2), 2), expected);
    }

    #[test]
    fn commutator_of_commutators() {
        let [m1, m2, m3, m4] = [1, 2, 3, 4].map(Word::gen);
        let g = comm(&comm(&m1, &m2), &comm(&m3, &m4));
        // (X1X2−X2X1)(X3X4−X4X3) − (X3X4−X4X3)(X1X2−X2X1)
        let mut terms: Vec<(Vec<GenId>, BigInt)> = vec![(vec![], BigInt::one())];
        for (p, sp) in [(vec![1, 2], 1), (vec![2, 1], -1)] {
            for (q, sq) in [(vec![3, 4], 1), (vec![4, 3], -1)] {
                terms.push(([p.clone(), q.clone()].concat(), BigInt::from(sp * sq)));
                terms.push(([q.clone(), p.clone()].concat(), BigInt::from(-sp * sq)));
            }
        }
        let expected = Series::from_terms(Truncation::Reduced(4), terms);
        assert_eq!(reduced_expand(&g, 4), expected);
        assert_eq!(expand(&g, 4).lowest_degree(), Some(4));
        assert_eq!(lcs_degree(&g, 4, 5), LcsDegree::Exact(4));
        assert_eq!(lcs_degree(&m1, 4, 5), LcsDegree::Exact(1));
    }

    #[test]
    fn engel_pattern_lies_in_fourth_term() {
        let ctx = crate::words::GeneratorContext::from_names(&["x", "y", "z", "w"]).unwrap();
        let g = ctx.parse("[x,y*z,y*z,w]").unwrap();
        assert_eq!(lcs_degree(&g, 4, 5), LcsDegree::Exact(4));
    }

    #[test]
    fn json_is_sorted_by_degree_then_lex() {
        let w = comm(&Word::gen(2), &Word::gen(1));
        let j = expand(&w, 2).to_json();
        assert_eq!(j.degree, 2);
        let monos: Vec<_> = j.terms.iter().map(|t| t.mono.clone()).collect();
        assert_eq!(monos, vec![vec![], vec![1, 2], vec![2, 1]]);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"D":2,"terms":[{"mono":[],"coef":"1"},{"mono":[1,2],"coef":"-1"},{"mono":[2,1],"coef":"1"}]}"#
        );
    }

    #[test]
    fn display() {
        let w = comm(&Word::gen(1), &Word::gen(2));
        assert_eq!(expand(&w, 2).to_string(), "1 + X1X2 - X2X1");
    }
}
