//! The free Milnor group `MF_n`: the free group modulo `[m_i, m_i^y]` for
//! every generator `m_i` and every `y`.
//!
//! Equality in `MF_n` is decided operationally by the reduced Magnus
//! expansion (see [`crate::magnus::reduced_expand`]). A nontrivial answer is
//! a genuine obstruction in `MF_n`; a trivial answer is triviality in the
//! representation, which is how every result of this module should be read.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::magnus::{reduced_expand, Series};
use crate::words::{GenId, GeneratorContext, Word};

/// Generator count plus names for `m1, …, mn`-style rendering.
#[derive(Clone, Debug)]
pub struct MilnorContext {
    pub n: usize,
    pub names: GeneratorContext,
}

impl MilnorContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Milnor context needs n >= 1".into()));
        }
        Ok(MilnorContext {
            n,
            names: GeneratorContext::numbered("m", n),
        })
    }

    pub fn with_names(names: GeneratorContext) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidArgument(
                "Milnor context needs at least one generator".into(),
            ));
        }
        Ok(MilnorContext {
            n: names.len(),
            names,
        })
    }
}

/// Rank of the model used for `w`: generators beyond `n` are not silently
/// dropped but widen the model.
fn rank_for(w: &Word, n: usize) -> usize {
    n.max(w.max_generator() as usize)
}

/// The reduced Magnus image that every decision in this module reads.
pub fn milnor_series(w: &Word, n: usize) -> Series {
    reduced_expand(w, rank_for(w, n))
}

pub fn is_trivial_mf(w: &Word, n: usize) -> bool {
    milnor_series(w, n).is_one()
}

/// Triviality of the product `chunks[0]·chunks[1]⋯` without forming the
/// concatenated word.
pub fn is_trivial_mf_product(chunks: &[Word], n: usize) -> Result<bool> {
    let n = chunks.iter().fold(n, |acc, w| rank_for(w, acc));
    Ok(crate::magnus::expand_product(chunks, crate::magnus::Truncation::Reduced(n))?.is_one())
}

pub fn equal_mf(u: &Word, v: &Word, n: usize) -> bool {
    is_trivial_mf(&u.mul(&v.inverse()), n)
}

/// Left-normed commutator of the generators with the given indices.
pub fn generator_commutator(indices: &[GenId]) -> Word {
    let entries: Vec<Word> = indices.iter().map(|&i| Word::gen(i)).collect();
    Word::left_normed(&entries)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeCase {
    pub indices: Vec<GenId>,
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassProbeReport {
    pub n: usize,
    /// `[m1, …, mn]` (just `m1` when `n = 1`).
    pub witness: String,
    /// Coefficient of `X1 X2 … Xn` in its reduced expansion.
    pub witness_coefficient: BigInt,
    pub witness_nontrivial: bool,
    pub exhaustive: bool,
    pub cases: Vec<ProbeCase>,
}

impl ClassProbeReport {
    pub fn all_longer_trivial(&self) -> bool {
        self.cases.iter().all(|c| c.trivial)
    }

    pub fn passed(&self) -> bool {
        self.witness_nontrivial && self.all_longer_trivial()
    }
}

/// Checks that `MF_n` has class exactly `n` in the model: the `n`-fold
/// commutator `[m1, …, mn]` survives and `(n+1)`-fold generator commutators
/// die. All `n^(n+1)` index tuples are checked for `n ≤ 3`; above that,
/// `sample` tuples drawn with a fixed-seed generator.
pub fn milnor_class_probe(n: usize, sample: usize, seed: u64) -> Result<ClassProbeReport> {
    let ctx = MilnorContext::new(n)?;
    let idx: Vec<GenId> = (1..=n as GenId).collect();
    let witness = generator_commutator(&idx);
    let series = milnor_series(&witness, n);
    let coef = series.coefficient(&idx);

    let exhaustive = n <= 3;
    let mut tuples: Vec<Vec<GenId>> = Vec::new();
    if exhaustive {
        let total = n.pow(n as u32 + 1);
        for mut code in 0..total {
            let mut t = Vec::with_capacity(n + 1);
            for _ in 0..=n {
                t.push((code % n) as GenId + 1);
                code /= n;
            }
            t.reverse();
            tuples.push(t);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample {
            tuples.push((0..=n).map(|_| rng.gen_range(1..=n as GenId)).collect());
        }
    }
    let cases = tuples
        .into_iter()
        .map(|t| {
            let trivial = is_trivial_mf(&generator_commutator(&t), n);
            ProbeCase {
                indices: t,
                trivial,
            }
        })
        .collect();
    Ok(ClassProbeReport {
        n,
        witness: ctx.names.render(&witness),
        witness_nontrivial: !series.is_one(),
        witness_coefficient: coef,
        exhaustive,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn relator_and_gamma() {
        let [m1, m2, m3, m4] = [1, 2, 3, 4].map(Word::gen);
        assert!(is_trivial_mf(&Word::commutator(&m1, &m1.conjugate(&m2)), 2));
        let gamma = Word::commutator(&Word::commutator(&m1, &m2), &Word::commutator(&m3, &m4));
        assert!(!is_trivial_mf(&gamma, 4));
        assert!(milnor_series(&gamma, 4).coefficient(&[1, 2, 3, 4]).is_one());
    }

    #[test]
    fn repeated_y_dies() {
        let ctx = GeneratorContext::from_names(&["x", "y", "w"]).unwrap();
        let w = ctx.parse("[x,y,y,w]").unwrap();
        assert!(!w.is_identity());
        assert!(is_trivial_mf(&w, 3));
    }

    #[test]
    fn equality() {
        let [m1, m2] = [1, 2].map(Word::gen);
        assert!(equal_mf(&m1, &m1, 2));
        assert!(!equal_mf(&m1, &m2, 2));
    }

    #[test]
    fn probes() {
        for n in 1..=4 {
            let r = milnor_class_probe(n, 100, 7).unwrap();
            assert!(r.passed(), "n = {n}");
            assert!(r.witness_coefficient.is_one());
        }
        let r = milnor_class_probe(2, 0, 0).unwrap();
        assert_eq!(r.witness, "m1*m2*m1^-1*m2^-1");
        assert_eq!(r.cases.len(), 8);
        assert!(milnor_class_probe(0, 1, 0).is_err());
    }
}
