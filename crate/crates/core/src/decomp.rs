//! Decomposition of a grope attaching curve `γ ∈ F^4` into elementary Engel
//! commutators `[h1, h2, h3, h4]`: two slots hold the same product of two
//! generators, the other two hold single generators, and the four
//! generators involved are distinct.
//!
//! Degree 4 is solved as an integer system in the distinct-index monomial
//! coordinates, one 4-element generator subset at a time. For `n > 4` the
//! reduced expansion also has degrees `5..=n`; those are cleared degree by
//! degree with commutators `[Q, m_j, …]`, where `Q` is a product of
//! elementary commutators realizing one left-normed 4-fold bracket. Such
//! commutators expand into conjugates of elementary commutators, which is
//! why factors carry conjugators.
//!
//! The multilinear Lie elements of degree `k` over an index set `S` have the
//! basis `[X_a, X_σ2, …, X_σk]` with `a = min S`, and the coefficient of that
//! bracket equals the coefficient of the monomial `X_a X_σ2 ⋯ X_σk`, so the
//! higher-degree corrections are read off without solving.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::{expand, expand_in, product, Series, Truncation};
use crate::milnor::{generator_commutator, is_trivial_mf, is_trivial_mf_product};
use crate::words::{GenId, GeneratorContext, Word};
use crate::zlattice::{hnf, Hnf, IntMatrix};

/// Largest meridian count accepted by [`attach_curve_word`].
pub const MAX_MERIDIANS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Gen(GenId),
    Product(GenId, GenId),
}

impl Slot {
    pub fn word(self) -> Word {
        match self {
            Slot::Gen(g) => Word::gen(g),
            Slot::Product(a, b) => Word::gen(a).mul(&Word::gen(b)),
        }
    }

    fn render(self, ctx: &GeneratorContext) -> String {
        ctx.render(&self.word())
    }
}

/// `[h1, h2, h3, h4]` with `h_j = h_m` a product of two generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryCommutator {
    pub slots: [Slot; 4],
    /// Positions (0-based) of the two product slots.
    pub pair: (usize, usize),
    pub word: Word,
}

impl ElementaryCommutator {
    pub fn new(slots: [Slot; 4], pair: (usize, usize)) -> Self {
        let entries: Vec<Word> = slots.iter().map(|s| s.word()).collect();
        ElementaryCommutator {
            slots,
            pair,
            word: Word::left_normed(&entries),
        }
    }

    pub fn render(&self, ctx: &GeneratorContext) -> String {
        let parts: Vec<String> = self.slots.iter().map(|s| s.render(ctx)).collect();
        format!("[{}]", parts.join(","))
    }

    /// Generator ids involved, ascending.
    pub fn generators(&self) -> [GenId; 4] {
        let mut g: Vec<GenId> = Vec::with_capacity(4);
        for s in self.slots {
            match s {
                Slot::Gen(a) => g.push(a),
                Slot::Product(a, b) => {
                    g.push(a);
                    g.push(b);
                }
            }
        }
        g.sort_unstable();
        g.dedup();
        [g[0], g[1], g[2], g[3]]
    }

    /// Generator that must be deleted for the repeated product slot to
    /// collapse to a single generator.
    pub fn product_generators(&self) -> (GenId, GenId) {
        match self.slots[self.pair.0] {
            Slot::Product(a, b) => (a, b),
            Slot::Gen(_) => unreachable!("pair positions hold products"),
        }
    }
}

/// All elementary commutators over generators `1..=n`, ordered by product
/// positions, then the ordered product, then the remaining singles; words
/// that are trivial (product slots adjacent at the front) or repeat an
/// earlier word are dropped.
pub fn elementary_commutators(n: usize) -> Result<Vec<ElementaryCommutator>> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "elementary 4-fold commutators need n >= 4, got {n}"
        )));
    }
    let n = n as GenId;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for j in 0..4 {
        for m in j + 1..4 {
            let singles: Vec<usize> = (0..4).filter(|&p| p != j && p != m).collect();
            for a in 1..=n {
                for b in 1..=n {
                    if a == b {
                        continue;
                    }
                    for c in 1..=n {
                        for d in 1..=n {
                            if [a, b].contains(&c) || [a, b].contains(&d) || c == d {
                                continue;
                            }
                            let mut slots = [Slot::Gen(0); 4];
                            slots[j] = Slot::Product(a, b);
                            slots[m] = Slot::Product(a, b);
                            slots[singles[0]] = Slot::Gen(c);
                            slots[singles[1]] = Slot::Gen(d);
                            let e = ElementaryCommutator::new(slots, (j, m));
                            if e.word.is_identity() || !seen.insert(e.word.clone()) {
                                continue;
                            }
                            out.push(e);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Attaching-curve word of a height-2 grope: `profile = [g, g_1, …, g_2g]`
/// gives `∏_k [α_k, β_k]`, where the `i`-th of `α_1, β_1, α_2, …` is a
/// product of `g_i` commutators of consecutive fresh meridians. Returns the
/// word and the meridian count.
pub fn attach_curve_word(profile: &[usize]) -> Result<(Word, usize)> {
    let (&g, handles) = profile
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty genus profile".into()))?;
    if g == 0 {
        return Err(Error::InvalidArgument(
            "bottom-stage genus must be at least 1".into(),
        ));
    }
    if handles.len() != 2 * g {
        return Err(Error::InvalidArgument(format!(
            "genus {g} needs {} per-handle genera, got {}",
            2 * g,
            handles.len()
        )));
    }
    if handles.contains(&0) {
        return Err(Error::InvalidArgument(
            "per-handle genera must be at least 1".into(),
        ));
    }
    let meridians: usize = handles.iter().map(|h| 2 * h).sum();
    if meridians > MAX_MERIDIANS {
        return Err(Error::InvalidArgument(format!(
            "profile uses {meridians} meridians, at most {MAX_MERIDIANS} supported"
        )));
    }
    let mut next: GenId = 1;
    let mut curves = Vec::with_capacity(handles.len());
    for &h in handles {
        let mut w = Word::identity();
        for _ in 0..h {
            w = w.mul(&Word::commutator(&Word::gen(next), &Word::gen(next + 1)));
            next += 2;
        }
        curves.push(w);
    }
    let mut gamma = Word::identity();
    for pair in curves.chunks(2) {
        gamma = gamma.mul(&Word::commutator(&pair[0], &pair[1]));
    }
    if expand(&gamma, 3).lowest_degree().is_some() {
        return Err(Error::Invariant(
            "attaching curve word not in the fourth lower-central term".into(),
        ));
    }
    Ok((gamma, meridians))
}

/// `conjugator⁻¹ · C^exp · conjugator`, with `C` an index into the
/// candidate list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompFactor {
    pub commutator: ElementaryCommutator,
    pub conjugator: Word,
    pub exp: i64,
}

impl DecompFactor {
    pub fn word(&self) -> Word {
        self.commutator
            .word
            .pow(self.exp)
            .conjugate(&self.conjugator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub n: usize,
    pub target: Word,
    pub factors: Vec<DecompFactor>,
    /// `W = γ · (∏ factors)⁻¹`.
    pub correction: Word,
    pub correction_trivial_in_mf: bool,
    /// Reduced degree range cleared by conjugated corrections (empty for
    /// `n = 4`).
    pub corrected_degrees: Vec<usize>,
}

impl DecompositionCertificate {
    pub fn product(&self) -> Word {
        concat(&factor_words(&self.factors))
    }

    /// Checks that `W` is literally `γ · (∏ factors)⁻¹`, that `W` is trivial
    /// in the reduced model, and the round trip `γ = (∏ factors) · W` there.
    /// Expansions of these long products are taken factor by factor.
    pub fn verify(&self) -> Result<bool> {
        let words = factor_words(&self.factors);
        let inverse: Vec<Word> = words.iter().rev().map(Word::inverse).collect();
        let mut w_chunks = vec![self.target.clone()];
        w_chunks.extend(inverse.iter().cloned());
        if concat(&w_chunks) != self.correction {
            return Ok(false);
        }
        if !is_trivial_mf_product(&w_chunks, self.n)? {
            return Ok(false);
        }
        let mut round_trip = words;
        round_trip.extend(w_chunks);
        round_trip.push(self.target.inverse());
        is_trivial_mf_product(&round_trip, self.n)
    }

    pub fn to_json(&self, ctx: &GeneratorContext) -> DecompositionJson {
        DecompositionJson {
            target: ctx.render(&self.target),
            factors: self
                .factors
                .iter()
                .map(|f| crate::engel::FactorJson {
                    instance: f.commutator.render(ctx),
                    conjugator: ctx.render(&f.conjugator),
                    exp: f.exp,
                })
                .collect(),
            verified: self.correction_trivial_in_mf,
            correction_word: ctx.render(&self.correction),
            correction_trivial_in_mf: self.correction_trivial_in_mf,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub target: String,
    pub factors: Vec<crate::engel::FactorJson>,
    pub verified: bool,
    pub correction_word: String,
    pub correction_trivial_in_mf: bool,
}

/// Distinct-index monomials on a 4-element generator set, lexicographic.
fn permutations_of(set: &[GenId]) -> Vec<Vec<GenId>> {
    if set.len() <= 1 {
        return vec![set.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in set.iter().enumerate() {
        let mut rest = set.to_vec();
        rest.remove(i);
        for mut p in permutations_of(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn degree4_image(w: &Word) -> Series {
    expand_in(w, Truncation::Reduced(4))
}

fn sorted_set(m: &[GenId]) -> Vec<GenId> {
    let mut s = m.to_vec();
    s.sort_unstable();
    s
}

/// Candidates grouped by generator subset, with their degree-4 coordinate
/// vectors and an HNF for solving.
struct BlockSystem {
    coords: Vec<Vec<GenId>>,
    members: Vec<usize>,
    vectors: Vec<Vec<BigInt>>,
    hnf: Hnf,
}

struct Solver<'a> {
    candidates: &'a [ElementaryCommutator],
    blocks: BTreeMap<Vec<GenId>, BlockSystem>,
    /// Representatives of `[m_a, m_b, m_c, m_d]` as exponent lists.
    bracket_cache: HashMap<Vec<GenId>, Vec<(usize, i64)>>,
}

impl<'a> Solver<'a> {
    fn new(candidates: &'a [ElementaryCommutator]) -> Result<Self> {
        let mut grouped: BTreeMap<Vec<GenId>, Vec<usize>> = BTreeMap::new();
        for (i, c) in candidates.iter().enumerate() {
            grouped.entry(c.generators().to_vec()).or_default().push(i);
        }
        let mut blocks = BTreeMap::new();
        for (set, members) in grouped {
            let coords = permutations_of(&set);
            let vectors: Vec<Vec<BigInt>> = members
                .iter()
                .map(|&i| {
                    let s = degree4_image(&candidates[i].word);
                    coords.iter().map(|m| s.coefficient(m)).collect()
                })
                .collect();
            let h = hnf(&IntMatrix::from_rows(coords.len(), vectors.clone())?);
            blocks.insert(
                set,
                BlockSystem {
                    coords,
                    members,
                    vectors,
                    hnf: h,
                },
            );
        }
        Ok(Solver {
            candidates,
            blocks,
            bracket_cache: HashMap::new(),
        })
    }

    /// Exponents (candidate index, exponent) whose degree-4 image on the
    /// block `set` equals `target`.
    fn solve_block(&self, set: &[GenId], target: &[BigInt]) -> Result<Vec<(usize, i64)>> {
        let block = self.blocks.get(set).ok_or_else(|| {
            Error::SolverFailure(format!(
                "no elementary commutator candidates on generators {set:?}"
            ))
        })?;
        if target.iter().all(Zero::is_zero) {
            return Ok(Vec::new());
        }
        for (k, v) in block.vectors.iter().enumerate() {
            if v.as_slice() == target {
                return Ok(vec![(block.members[k], 1)]);
            }
            if v.iter().zip(target).all(|(a, b)| *a == -b) {
                return Ok(vec![(block.members[k], -1)]);
            }
        }
        let x = block.hnf.solve_row_combination(target)?.ok_or_else(|| {
            Error::SolverFailure(format!(
                "degree-4 image on generators {set:?} is not an integer combination of elementary commutators"
            ))
        })?;
        let x = reduce_l1(&block.hnf, x);
        let mut out = Vec::new();
        for (k, e) in x.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let e = e
                .to_i64()
                .ok_or_else(|| Error::SolverFailure(format!("exponent {e} exceeds 64 bits")))?;
            out.push((block.members[k], e));
        }
        Ok(out)
    }

    fn bracket(&mut self, idx: &[GenId]) -> Result<Vec<(usize, i64)>> {
        if let Some(r) = self.bracket_cache.get(idx) {
            return Ok(r.clone());
        }
        let set = sorted_set(idx);
        let s = degree4_image(&generator_commutator(idx));
        let coords = &self
            .blocks
            .get(&set)
            .ok_or_else(|| Error::SolverFailure(format!("no candidates on generators {set:?}")))?
            .coords;
        let target: Vec<BigInt> = coords.iter().map(|m| s.coefficient(m)).collect();
        let r = self.solve_block(&set, &target)?;
        self.bracket_cache.insert(idx.to_vec(), r.clone());
        Ok(r)
    }

    fn factor(&self, c: usize, conjugator: Word, exp: i64) -> DecompFactor {
        DecompFactor {
            commutator: self.candidates[c].clone(),
            conjugator,
            exp,
        }
    }
}

/// Greedy L1 reduction of an exponent vector along kernel directions.
fn reduce_l1(h: &Hnf, mut x: Vec<BigInt>) -> Vec<BigInt> {
    let kernel = h.left_kernel();
    let norm = |v: &[BigInt]| v.iter().map(|a| a.abs()).sum::<BigInt>();
    let mut best = norm(&x);
    let mut improved = true;
    while improved {
        improved = false;
        for k in &kernel {
            for s in [BigInt::from(1), BigInt::from(-1)] {
                loop {
                    let cand: Vec<BigInt> = x.iter().zip(k).map(|(a, b)| a + &s * b).collect();
                    let c = norm(&cand);
                    if c < best {
                        best = c;
                        x = cand;
                        improved = true;
                    } else {
                        break;
                    }
                }
            }
        }
    }
    x
}

fn inverse_factors(fs: &[DecompFactor]) -> Vec<DecompFactor> {
    fs.iter()
        .rev()
        .map(|f| DecompFactor {
            exp: -f.exp,
            ..f.clone()
        })
        .collect()
}

fn conjugate_factors(fs: &[DecompFactor], by: &Word) -> Vec<DecompFactor> {
    fs.iter()
        .map(|f| DecompFactor {
            conjugator: f.conjugator.mul(by),
            ..f.clone()
        })
        .collect()
}

/// `[Q, m] = Q · (Q⁻¹)^{m⁻¹}` on factor lists.
fn commutator_with_generator(fs: &[DecompFactor], g: GenId) -> Vec<DecompFactor> {
    let mut out = fs.to_vec();
    out.extend(conjugate_factors(&inverse_factors(fs), &Word::gen_inv(g)));
    out
}

/// Merges neighbours with the same commutator and conjugator.
fn merge_adjacent(fs: Vec<DecompFactor>) -> Vec<DecompFactor> {
    let mut out: Vec<DecompFactor> = Vec::with_capacity(fs.len());
    for f in fs {
        if let Some(last) = out.last_mut() {
            if last.commutator == f.commutator && last.conjugator == f.conjugator {
                last.exp += f.exp;
                if last.exp == 0 {
                    out.pop();
                }
                continue;
            }
        }
        out.push(f);
    }
    out
}

fn factor_series(
    f: &DecompFactor,
    trunc: Truncation,
    cache: &mut HashMap<Word, Series>,
) -> Result<Series> {
    let s = match cache.get(&f.commutator.word) {
        Some(s) => s.clone(),
        None => {
            let s = expand_in(&f.commutator.word, trunc);
            cache.insert(f.commutator.word.clone(), s.clone());
            s
        }
    };
    let c = expand_in(&f.conjugator, trunc);
    c.inverse()?.mul(&s.pow(f.exp)?)?.mul(&c)
}

fn factors_series(
    fs: &[DecompFactor],
    trunc: Truncation,
    cache: &mut HashMap<Word, Series>,
) -> Result<Series> {
    let items = fs
        .iter()
        .map(|f| factor_series(f, trunc, cache))
        .collect::<Result<Vec<_>>>()?;
    product(items, trunc)
}

/// Words whose concatenation is `∏ factors`.
fn factor_words(fs: &[DecompFactor]) -> Vec<Word> {
    fs.iter().map(DecompFactor::word).collect()
}

fn concat(words: &[Word]) -> Word {
    Word::from_letters(words.iter().flat_map(|w| w.letters().iter().copied()))
}

pub fn decompose_gamma(gamma: &Word, n: usize) -> Result<DecompositionCertificate> {
    let candidates = elementary_commutators(n)?;
    decompose_gamma_with(gamma, n, &candidates)
}

/// As [`decompose_gamma`] with an explicit candidate list (order matters
/// only for which solution is returned).
pub fn decompose_gamma_with(
    gamma: &Word,
    n: usize,
    candidates: &[ElementaryCommutator],
) -> Result<DecompositionCertificate> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "decomposition needs n >= 4, got {n}"
        )));
    }
    let top = gamma.max_generator() as usize;
    if top > n {
        return Err(Error::IndexOutOfRange { index: top, len: n });
    }
    if let Some(k) = expand(gamma, 3).lowest_degree() {
        return Err(Error::Precondition(format!(
            "attaching curve must lie in F^4, but its expansion has a nonzero degree-{k} term"
        )));
    }
    let mut solver = Solver::new(candidates)?;

    // degree 4: integer solve per generator subset. Subsets are visited in
    // order of where their generators first occur in γ, so a γ that is a
    // product of pieces on disjoint generators gets its factors in the
    // same order and needs no higher-degree correction.
    let g4 = degree4_image(gamma);
    let mut first_seen: HashMap<GenId, usize> = HashMap::new();
    for (pos, l) in gamma.letters().iter().enumerate() {
        first_seen.entry(l.gen).or_insert(pos);
    }
    let mut sets: Vec<Vec<GenId>> = Vec::new();
    for (m, _) in g4.homogeneous(4) {
        let set = sorted_set(m.indices());
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    sets.sort_by_key(|set| {
        let mut key: Vec<usize> = set.iter().map(|g| first_seen[g]).collect();
        key.sort_unstable();
        (key, set.clone())
    });
    let mut factors: Vec<DecompFactor> = Vec::new();
    for set in &sets {
        let coords = &solver
            .blocks
            .get(set)
            .ok_or_else(|| Error::SolverFailure(format!("no candidates on generators {set:?}")))?
            .coords;
        let target: Vec<BigInt> = coords.iter().map(|m| g4.coefficient(m)).collect();
        let mut sol = solver.solve_block(set, &target)?;
        sol.sort_by_key(|&(c, _)| c);
        factors.extend(
            sol.into_iter()
                .map(|(c, e)| solver.factor(c, Word::identity(), e)),
        );
    }

    // degrees 5..=n: conjugated corrections
    let trunc = Truncation::Reduced(n);
    let gamma_series = expand_in(gamma, trunc);
    let mut cache = HashMap::new();
    let mut corrected = Vec::new();
    for k in 5..=n {
        // γ − P = r·P with γ·P⁻¹ = 1 + r, so both share their lowest part
        let p = factors_series(&factors, trunc, &mut cache)?;
        let residual = gamma_series.add(&p.scale(&BigInt::from(-1)))?;
        if let Some(low) = residual.lowest_degree() {
            if low < k {
                return Err(Error::Invariant(format!(
                    "degree-{low} residual survived its correction round"
                )));
            }
        }
        let terms: Vec<(Vec<GenId>, BigInt)> = residual
            .homogeneous(k)
            .filter(|(m, _)| m.indices()[0] == *m.indices().iter().min().expect("nonempty"))
            .map(|(m, c)| (m.indices().to_vec(), c.clone()))
            .collect();
        if terms.is_empty() {
            continue;
        }
        corrected.push(k);
        for (mono, coef) in terms {
            let base: Vec<DecompFactor> = solver
                .bracket(&mono[..4])?
                .into_iter()
                .map(|(c, e)| solver.factor(c, Word::identity(), e))
                .collect();
            let mut nested = base;
            for &g in &mono[4..] {
                nested = commutator_with_generator(&nested, g);
            }
            let times = coef.to_i64().ok_or_else(|| {
                Error::SolverFailure(format!("coefficient {coef} exceeds 64 bits"))
            })?;
            let unit = if times > 0 {
                nested
            } else {
                inverse_factors(&nested)
            };
            for _ in 0..times.unsigned_abs() {
                factors.extend(unit.iter().cloned());
            }
        }
        factors = merge_adjacent(factors);
    }

    let words = factor_words(&factors);
    let mut w_chunks = vec![gamma.clone()];
    w_chunks.extend(words.iter().rev().map(Word::inverse));
    let correction = concat(&w_chunks);
    if !is_trivial_mf_product(&w_chunks, n)? {
        return Err(Error::SolverFailure(format!(
            "correction word for {gamma} is not trivial in the Milnor group model"
        )));
    }
    Ok(DecompositionCertificate {
        n,
        target: gamma.clone(),
        factors,
        correction,
        correction_trivial_in_mf: true,
        corrected_degrees: corrected,
    })
}

/// `γ·γ′⁻¹` is trivial in the Milnor group model.
pub fn correction_check(gamma: &Word, gamma_prime: &Word, n: usize) -> bool {
    is_trivial_mf(&gamma.mul(&gamma_prime.inverse()), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> GeneratorContext {
        GeneratorContext::numbered("m", 4)
    }

    #[test]
    fn enumeration() {
        let all = elementary_commutators(4).unwrap();
        assert_eq!(all.len(), 120);
        let c = ctx();
        let texts: Vec<String> = all.iter().map(|e| e.render(&c)).collect();
        assert!(texts.contains(&"[m1,m2*m3,m2*m3,m4]".to_string()));
        assert!(texts.contains(&"[m2*m3,m1,m2*m3,m4]".to_string()));
        for e in &all {
            assert!(
                expand(&e.word, 3).lowest_degree().is_none(),
                "{}",
                e.render(&c)
            );
        }
        assert!(elementary_commutators(3).is_err());
    }

    #[test]
    fn attach_curves() {
        let (w, n) = attach_curve_word(&[1, 1, 1]).unwrap();
        assert_eq!(n, 4);
        assert_eq!(w, ctx().parse("[[m1,m2],[m3,m4]]").unwrap());
        let (w2, n2) = attach_curve_word(&[2, 1, 1, 1, 1]).unwrap();
        assert_eq!(n2, 8);
        let c8 = GeneratorContext::numbered("m", 8);
        assert_eq!(w2, c8.parse("[[m1,m2],[m3,m4]]*[[m5,m6],[m7,m8]]").unwrap());
        assert!(attach_curve_word(&[]).is_err());
        assert!(attach_curve_word(&[1, 1]).is_err());
        assert!(attach_curve_word(&[2, 1, 1, 1, 2]).is_err());
    }

    #[test]
    fn basic_gamma() {
        let gamma = ctx().parse("[[m1,m2],[m3,m4]]").unwrap();
        let cert = decompose_gamma(&gamma, 4).unwrap();
        assert!(cert.correction_trivial_in_mf);
        assert!(cert.verify().unwrap());
        assert!(cert.corrected_degrees.is_empty());
        assert!(correction_check(&gamma, &cert.product(), 4));
        assert!(!correction_check(&gamma, &Word::identity(), 4));
    }

    #[test]
    fn trivial_cases() {
        let cert = decompose_gamma(&Word::identity(), 4).unwrap();
        assert!(cert.factors.is_empty());
        assert!(cert.correction.is_identity());
        let all = elementary_commutators(4).unwrap();
        let c0 = &all[17];
        let cert = decompose_gamma(&c0.word, 4).unwrap();
        assert_eq!(cert.factors.len(), 1);
        assert_eq!(cert.factors[0].commutator, *c0);
        assert_eq!(cert.factors[0].exp, 1);
        assert!(cert.correction.is_identity());
    }

    #[test]
    fn rejects_low_degree() {
        let gamma = ctx().parse("[m1,m2,m3]").unwrap();
        assert!(matches!(
            decompose_gamma(&gamma, 4),
            Err(Error::Precondition(_))
        ));
    }
}
