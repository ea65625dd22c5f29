//! Word-level link models: each component has a meridian generator and a
//! longitude word in all meridians. Components are numbered `1..=k` and
//! component `i` has meridian `m_i`.
//!
//! Satellite rules (fixed here and inherited by every caller):
//!
//! * `hopf`: `ℓ1 = m2`, `ℓ2 = m1` (linking number +1).
//! * `bing(L, i)`: component `i` becomes `a, b` (positions `i, i+1`). With
//!   `c = [m_a, m_b]` and `ℓ' = ℓ_i[m_i ↦ c]`: every other longitude gets
//!   `m_i ↦ c`, `ℓ_a = [m_b, ℓ']`, `ℓ_b = [ℓ', m_a]`.
//! * `whd(L, i, ±)`: component `i` becomes `d`. With `ℓ0 = ℓ_i` with `m_i`
//!   deleted and `s = m_d^{±1}`, `c = [m_d, s^{ℓ0}]`; every other longitude
//!   gets `m_i ↦ c`, and with `ℓ' = ℓ_i[m_i ↦ c]`, `ℓ_d = [ℓ', ℓ'^{m_d}]`.
//! * `par(L, i)`: a 0-framed parallel copy `i'` at position `i+1`; every
//!   longitude (including `ℓ_i`) gets `m_i ↦ m_i m_{i'}` and `ℓ_{i'}` is the
//!   substituted `ℓ_i`.
//! * `ram(L, i, r)`: `r` parallel copies of component `i` (`r − 1` uses of
//!   `par`).
//!
//! With these rules `bing(hopf, 1)` has the Borromean signature and
//! `whd(hopf, 2, +)` the Whitehead-link signature.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::{reduced_expand, Series};
use crate::words::{GenId, GeneratorContext, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub longitude: Word,
    pub framing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkModel {
    pub components: Vec<Component>,
    pub provenance: String,
}

impl LinkModel {
    fn from_longitudes(longitudes: Vec<Word>, provenance: String) -> Self {
        LinkModel {
            components: longitudes
                .into_iter()
                .map(|longitude| Component {
                    longitude,
                    framing: 0,
                })
                .collect(),
            provenance,
        }
    }

    pub fn hopf() -> Self {
        LinkModel::from_longitudes(vec![Word::gen(2), Word::gen(1)], "hopf".into())
    }

    pub fn unlink(k: usize) -> Self {
        LinkModel::from_longitudes(vec![Word::identity(); k], format!("unlink({k})"))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn longitude(&self, i: usize) -> Result<&Word> {
        self.check_index(i)?;
        Ok(&self.components[i - 1].longitude)
    }

    pub fn longitudes(&self) -> Vec<Word> {
        self.components
            .iter()
            .map(|c| c.longitude.clone())
            .collect()
    }

    pub fn meridian_context(&self) -> GeneratorContext {
        GeneratorContext::numbered("m", self.len())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Exponent sum of `m_i` in `ℓ_j`.
    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64> {
        self.check_index(i)?;
        Ok(self.longitude(j)?.exponent_sum(i as GenId))
    }

    /// Rebuilds a model from longitudes keyed by arbitrary ids listed in
    /// component order, renumbering meridians by position.
    fn renumber(order: &[GenId], longs: &HashMap<GenId, Word>, provenance: String) -> LinkModel {
        let map: HashMap<GenId, GenId> = order
            .iter()
            .enumerate()
            .map(|(p, &id)| (id, p as GenId + 1))
            .collect();
        let words = order.iter().map(|id| longs[id].relabel(&map)).collect();
        LinkModel::from_longitudes(words, provenance)
    }

    fn keyed(&self) -> (Vec<GenId>, HashMap<GenId, Word>) {
        let order: Vec<GenId> = (1..=self.len() as GenId).collect();
        let longs = order
            .iter()
            .map(|&g| (g, self.components[g as usize - 1].longitude.clone()))
            .collect();
        (order, longs)
    }

    fn fresh(&self, k: GenId) -> GenId {
        self.len() as GenId + k
    }

    pub fn bing(&self, i: usize) -> Result<LinkModel> {
        self.check_index(i)?;
        let (mut order, longs) = self.keyed();
        let id = i as GenId;
        let (a, b) = (self.fresh(1), self.fresh(2));
        let c = Word::commutator(&Word::gen(a), &Word::gen(b));
        let sub = |w: &Word| w.substitute(|g| (g == id).then(|| c.clone()));
        let li = sub(&longs[&id]);
        let mut out: HashMap<GenId, Word> = HashMap::new();
        for (&j, w) in &longs {
            if j != id {
                out.insert(j, sub(w));
            }
        }
        out.insert(a, Word::commutator(&Word::gen(b), &li));
        out.insert(b, Word::commutator(&li, &Word::gen(a)));
        order.splice(i - 1..i, [a, b]);
        Ok(LinkModel::renumber(
            &order,
            &out,
            format!("bing({},{i})", self.provenance),
        ))
    }

    pub fn whd(&self, i: usize, sign: Sign) -> Result<LinkModel> {
        self.check_index(i)?;
        let (mut order, longs) = self.keyed();
        let id = i as GenId;
        let d = self.fresh(1);
        let li = &longs[&id];
        let l0 = li.delete_generator(id);
        let md = match sign {
            Sign::Plus => Word::gen(d),
            Sign::Minus => Word::gen_inv(d),
        };
        let c = Word::commutator(&Word::gen(d), &md.conjugate(&l0));
        let sub = |w: &Word| w.substitute(|g| (g == id).then(|| c.clone()));
        let mut out: HashMap<GenId, Word> = HashMap::new();
        for (&j, w) in &longs {
            if j != id {
                out.insert(j, sub(w));
            }
        }
        let ls = sub(li);
        out.insert(d, Word::commutator(&ls, &ls.conjugate(&Word::gen(d))));
        order[i - 1] = d;
        Ok(LinkModel::renumber(
            &order,
            &out,
            format!("whd({},{i},{})", self.provenance, sign.symbol()),
        ))
    }

    pub fn par(&self, i: usize) -> Result<LinkModel> {
        let mut m = self.par_inner(i)?;
        m.provenance = format!("par({},{i})", self.provenance);
        Ok(m)
    }

    fn par_inner(&self, i: usize) -> Result<LinkModel> {
        self.check_index(i)?;
        let (mut order, longs) = self.keyed();
        let id = i as GenId;
        let p = self.fresh(1);
        let pair = Word::gen(id).mul(&Word::gen(p));
        let mut out: HashMap<GenId, Word> = longs
            .iter()
            .map(|(&j, w)| (j, w.substitute(|g| (g == id).then(|| pair.clone()))))
            .collect();
        out.insert(p, out[&id].clone());
        order.insert(i, p);
        Ok(LinkModel::renumber(&order, &out, String::new()))
    }

    pub fn ram(&self, i: usize, r: usize) -> Result<LinkModel> {
        self.check_index(i)?;
        if r < 1 {
            return Err(Error::InvalidArgument(format!(
                "ramification must be at least 1, got {r}"
            )));
        }
        let mut m = self.clone();
        for _ in 1..r {
            m = m.par_inner(i)?;
        }
        m.provenance = format!("ram({},{i},{r})", self.provenance);
        Ok(m)
    }

    pub fn delete_component(&self, i: usize) -> Result<LinkModel> {
        self.check_index(i)?;
        let (mut order, longs) = self.keyed();
        let id = i as GenId;
        let out: HashMap<GenId, Word> = longs
            .iter()
            .filter(|(&j, _)| j != id)
            .map(|(&j, w)| (j, w.delete_generator(id)))
            .collect();
        order.remove(i - 1);
        Ok(LinkModel::renumber(
            &order,
            &out,
            format!("delete({},{i})", self.provenance),
        ))
    }

    pub fn to_json(&self) -> LinkJson {
        let ctx = self.meridian_context();
        LinkJson {
            components: (1..=self.len())
                .map(|i| ComponentJson {
                    meridian: ctx.name(i as GenId).to_string(),
                    longitude: ctx.render(&self.components[i - 1].longitude),
                    framing: self.components[i - 1].framing,
                })
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub meridian: String,
    pub longitude: String,
    pub framing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkJson {
    pub components: Vec<ComponentJson>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuBar {
    pub value: BigInt,
    pub valid: bool,
}

fn check_distinct(link: &LinkModel, idx: &[usize]) -> Result<()> {
    if idx.len() < 2 {
        return Err(Error::InvalidArgument(
            "mu-bar needs at least two indices".into(),
        ));
    }
    for (p, &i) in idx.iter().enumerate() {
        link.check_index(i)?;
        if idx[..p].contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "repeated index {i}: only distinct-index invariants are link-homotopy invariants"
            )));
        }
    }
    Ok(())
}

fn mu_value(link: &LinkModel, idx: &[usize]) -> BigInt {
    let (&last, first) = idx.split_last().expect("at least two indices");
    let mono: Vec<GenId> = first.iter().map(|&i| i as GenId).collect();
    // only monomials over `first` are read, so the model rank can shrink to
    // the largest index involved
    let rank = idx.iter().copied().max().unwrap_or(0);
    let w = link.components[last - 1]
        .longitude
        .substitute(|g| (g as usize > rank).then(Word::identity));
    reduced_expand(&w, rank).coefficient(&mono)
}

/// `μ̄(i1 … ir)`: coefficient of `X_{i1} ⋯ X_{i(r−1)}` in the reduced
/// expansion of `ℓ_{ir}`. Valid when every invariant obtained by deleting
/// indices and rotating cyclically vanishes.
pub fn mu_bar(link: &LinkModel, idx: &[usize]) -> Result<MuBar> {
    check_distinct(link, idx)?;
    let value = mu_value(link, idx);
    let r = idx.len();
    let mut valid = true;
    'outer: for mask in 1u32..(1 << r) - 1 {
        let sub: Vec<usize> = (0..r)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| idx[b])
            .collect();
        if sub.len() < 2 {
            continue;
        }
        for rot in 0..sub.len() {
            let mut j = sub[rot..].to_vec();
            j.extend_from_slice(&sub[..rot]);
            if !mu_value(link, &j).is_zero() {
                valid = false;
                break 'outer;
            }
        }
    }
    Ok(MuBar { value, valid })
}

/// Every `μ̄` value (valid or not) with `2 ≤ |I| ≤ max_len`.
pub fn all_mu_values(link: &LinkModel, max_len: usize) -> HashMap<Vec<usize>, BigInt> {
    let k = link.len();
    let series: Vec<Series> = link
        .components
        .iter()
        .map(|c| reduced_expand(&c.longitude, k))
        .collect();
    let value = |idx: &[usize]| {
        let (&last, first) = idx.split_last().expect("nonempty");
        let mono: Vec<GenId> = first.iter().map(|&i| i as GenId).collect();
        series[last - 1].coefficient(&mono)
    };
    let mut values: HashMap<Vec<usize>, BigInt> = HashMap::new();
    let mut seqs: Vec<Vec<usize>> = (1..=k).map(|i| vec![i]).collect();
    for _ in 2..=max_len.min(k) {
        let mut next = Vec::new();
        for s in &seqs {
            for i in 1..=k {
                if !s.contains(&i) {
                    let mut t = s.clone();
                    t.push(i);
                    values.insert(t.clone(), value(&t));
                    next.push(t);
                }
            }
        }
        seqs = next;
    }
    values
}

/// Every valid `μ̄` with `2 ≤ |I| ≤ max_len`, keyed by index sequence.
pub fn valid_mu_table(link: &LinkModel, max_len: usize) -> BTreeMap<Vec<usize>, BigInt> {
    let values = all_mu_values(link, max_len);
    let mut out = BTreeMap::new();
    for (idx, v) in &values {
        let r = idx.len();
        let valid = (1u32..(1 << r) - 1).all(|mask| {
            let sub: Vec<usize> = (0..r)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| idx[b])
                .collect();
            sub.len() < 2
                || (0..sub.len()).all(|rot| {
                    let mut j = sub[rot..].to_vec();
                    j.extend_from_slice(&sub[..rot]);
                    values[&j].is_zero()
                })
        });
        if valid {
            out.insert(idx.clone(), v.clone());
        }
    }
    out
}

/// Lowest-degree surviving coefficient: `μ̄(monomial, component)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HWitness {
    pub component: usize,
    pub monomial: Vec<GenId>,
    pub coefficient: BigInt,
}

/// Checks that every longitude, with its own meridian deleted, is trivial
/// in the reduced model; otherwise returns the lowest-degree witness.
pub fn h_trivial(link: &LinkModel) -> Option<HWitness> {
    let k = link.len();
    let mut best: Option<HWitness> = None;
    for (j, c) in link.components.iter().enumerate() {
        let w = c.longitude.delete_generator(j as GenId + 1);
        let s = reduced_expand(&w, k);
        if let Some(d) = s.lowest_degree() {
            if best.as_ref().is_none_or(|b| d < b.monomial.len()) {
                let (m, coef) = s.homogeneous(d).next().expect("lowest degree has a term");
                best = Some(HWitness {
                    component: j + 1,
                    monomial: m.indices().to_vec(),
                    coefficient: coef.clone(),
                });
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HClass {
    #[serde(rename = "h-essential")]
    Essential,
    #[serde(rename = "h-trivial-not-plus")]
    TrivialNotPlus,
    #[serde(rename = "h-trivial-plus")]
    TrivialPlus,
}

impl HClass {
    pub fn label(self) -> &'static str {
        match self {
            HClass::Essential => "h-essential",
            HClass::TrivialNotPlus => "h-trivial-not-plus",
            HClass::TrivialPlus => "h-trivial-plus",
        }
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: HClass,
    /// For `h-essential`: a witness on the link itself; for
    /// `h-trivial-not-plus`: the component whose parallel copy breaks
    /// triviality, with the witness on that enlarged link.
    pub witness: Option<HWitness>,
    pub doubled_component: Option<usize>,
}

pub fn classify(link: &LinkModel) -> Result<Classification> {
    if let Some(w) = h_trivial(link) {
        return Ok(Classification {
            class: HClass::Essential,
            witness: Some(w),
            doubled_component: None,
        });
    }
    for i in 1..=link.len() {
        if let Some(w) = h_trivial(&link.par_inner(i)?) {
            return Ok(Classification {
                class: HClass::TrivialNotPlus,
                witness: Some(w),
                doubled_component: Some(i),
            });
        }
    }
    Ok(Classification {
        class: HClass::TrivialPlus,
        witness: None,
        doubled_component: None,
    })
}

/// Link construction expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionExpr {
    Hopf,
    Unlink(usize),
    Bing(Box<ConstructionExpr>, usize),
    Whd(Box<ConstructionExpr>, usize, Sign),
    Ram(Box<ConstructionExpr>, usize, usize),
    Par(Box<ConstructionExpr>, usize),
}

impl fmt::Display for ConstructionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionExpr::Hopf => write!(f, "hopf"),
            ConstructionExpr::Unlink(k) => write!(f, "unlink({k})"),
            ConstructionExpr::Bing(e, i) => write!(f, "bing({e},{i})"),
            ConstructionExpr::Whd(e, i, s) => write!(f, "whd({e},{i},{})", s.symbol()),
            ConstructionExpr::Ram(e, i, r) => write!(f, "ram({e},{i},{r})"),
            ConstructionExpr::Par(e, i) => write!(f, "par({e},{i})"),
        }
    }
}

impl ConstructionExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = DslParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn build(&self) -> Result<LinkModel> {
        match self {
            ConstructionExpr::Hopf => Ok(LinkModel::hopf()),
            ConstructionExpr::Unlink(k) => Ok(LinkModel::unlink(*k)),
            ConstructionExpr::Bing(e, i) => e.build()?.bing(*i),
            ConstructionExpr::Whd(e, i, s) => e.build()?.whd(*i, *s),
            ConstructionExpr::Ram(e, i, r) => e.build()?.ram(*i, *r),
            ConstructionExpr::Par(e, i) => e.build()?.par(*i),
        }
    }
}

/// Parses and builds a link expression.
pub fn build(text: &str) -> Result<LinkModel> {
    ConstructionExpr::parse(text)?.build()
}

struct DslParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl DslParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a link constructor"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "number too large".into(),
            })
    }

    fn sign(&mut self) -> Result<Sign> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'+') => {
                self.pos += 1;
                Ok(Sign::Plus)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Sign::Minus)
            }
            _ => Err(self.error("expected `+` or `-`")),
        }
    }

    fn expr(&mut self) -> Result<ConstructionExpr> {
        let start = self.pos;
        let name = self.ident()?;
        let e = match name.as_str() {
            "hopf" => ConstructionExpr::Hopf,
            "unlink" => {
                self.expect(b'(')?;
                let k = self.number()?;
                self.expect(b')')?;
                ConstructionExpr::Unlink(k)
            }
            "wh" => {
                self.expect(b'(')?;
                let s = self.sign()?;
                self.expect(b')')?;
                ConstructionExpr::Whd(Box::new(ConstructionExpr::Hopf), 2, s)
            }
            "bing" | "par" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let i = self.number()?;
                self.expect(b')')?;
                if name == "bing" {
                    ConstructionExpr::Bing(Box::new(inner), i)
                } else {
                    ConstructionExpr::Par(Box::new(inner), i)
                }
            }
            "whd" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let i = self.number()?;
                self.expect(b',')?;
                let s = self.sign()?;
                self.expect(b')')?;
                ConstructionExpr::Whd(Box::new(inner), i, s)
            }
            "ram" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let i = self.number()?;
                self.expect(b',')?;
                let r = self.number()?;
                self.expect(b')')?;
                ConstructionExpr::Ram(Box::new(inner), i, r)
            }
            other => {
                return Err(Error::Syntax {
                    position: start,
                    message: format!("unknown link constructor `{other}`"),
                });
            }
        };
        Ok(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Seed {
    Hopf,
    Wh,
}

/// One round of ramified Bing doubling: `r` parallel copies of a component
/// of the current link, each of which is then Bing doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BingStep {
    pub component: usize,
    pub ramification: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub seed: Seed,
    pub steps: Vec<BingStep>,
    /// Sign of the Whitehead doubling of each component (cycled if shorter
    /// than the component count).
    pub signs: Vec<Sign>,
    /// Parallel copies taken of each component before Whitehead doubling.
    pub whitehead_ramification: usize,
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub spec: FamilySpec,
    /// The link after Bing doubling, before Whitehead doubling.
    pub underlying: LinkModel,
    pub doubled: LinkModel,
}

impl FamilySpec {
    /// Number of parallel copies taken of each seed component by the Bing
    /// step that first splits it (1 if never split); the minimum over both
    /// seed components.
    pub fn multiplicity(&self) -> usize {
        // slot[c] = Some(seed) while current component c is an unsplit seed
        let mut slot: Vec<Option<usize>> = vec![Some(0), Some(1)];
        let mut mult = [1usize, 1];
        for s in &self.steps {
            let Some(&cur) = slot.get(s.component.wrapping_sub(1)) else {
                return 1;
            };
            if let Some(seed) = cur {
                mult[seed] = s.ramification;
            }
            let at = s.component - 1;
            slot.splice(at..at + 1, std::iter::repeat_n(None, 2 * s.ramification));
        }
        mult[0].min(mult[1])
    }
}

pub fn family(spec: &FamilySpec) -> Result<FamilyMember> {
    if spec.seed == Seed::Hopf && spec.steps.is_empty() {
        return Err(Error::InvalidArgument(
            "the Hopf seed needs at least one Bing doubling".into(),
        ));
    }
    if spec.whitehead_ramification < 1 {
        return Err(Error::InvalidArgument(
            "Whitehead ramification must be at least 1".into(),
        ));
    }
    if spec.signs.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one Whitehead sign is required".into(),
        ));
    }
    let mut link = match spec.seed {
        Seed::Hopf => LinkModel::hopf(),
        Seed::Wh => LinkModel::hopf().whd(2, Sign::Plus)?,
    };
    if spec.seed == Seed::Wh {
        link.provenance = "wh(+)".into();
    }
    for step in &spec.steps {
        link = link.ram(step.component, step.ramification)?;
        for copy in (0..step.ramification).rev() {
            link = link.bing(step.component + copy)?;
        }
    }
    let underlying = link.clone();
    let k = link.len();
    let r = spec.whitehead_ramification;
    for c in (1..=k).rev() {
        link = link.ram(c, r)?;
        for copy in (0..r).rev() {
            let sign = spec.signs[(c - 1) % spec.signs.len()];
            link = link.whd(c + copy, sign)?;
        }
    }
    Ok(FamilyMember {
        spec: spec.clone(),
        underlying,
        doubled: link,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn class_of(text: &str) -> HClass {
        classify(&build(text).unwrap()).unwrap().class
    }

    #[test]
    fn base_cases() {
        let h = LinkModel::hopf();
        assert_eq!(h.longitudes(), vec![Word::gen(2), Word::gen(1)]);
        assert_eq!(
            mu_bar(&h, &[1, 2]).unwrap(),
            MuBar {
                value: BigInt::one(),
                valid: true
            }
        );
        let u = LinkModel::unlink(3);
        assert!(u.longitudes().iter().all(Word::is_identity));
        assert_eq!(class_of("unlink(3)"), HClass::TrivialPlus);
        assert_eq!(
            mu_bar(&LinkModel::unlink(4), &[1, 2, 3, 4]).unwrap().value,
            BigInt::zero()
        );
    }

    #[test]
    fn borromean_signature() {
        let b = build("bing(hopf,1)").unwrap();
        assert_eq!(b.len(), 3);
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    assert_eq!(b.linking_number(i, j).unwrap(), 0);
                }
            }
        }
        let mu = mu_bar(&b, &[1, 2, 3]).unwrap();
        assert!(mu.valid);
        assert_eq!(mu.value.magnitude(), BigInt::one().magnitude());
        for i in 1..=3 {
            assert!(h_trivial(&b.delete_component(i).unwrap()).is_none());
        }
        // Bing doubling an unlinked component gives a split unlinked pair
        let s = build("bing(unlink(2),1)").unwrap();
        assert!(s
            .longitudes()
            .iter()
            .take(2)
            .all(|w| w.generators().iter().all(|&g| g <= 2)));
        assert_eq!(class_of("bing(unlink(2),1)"), HClass::TrivialPlus);
    }

    #[test]
    fn whitehead_taxonomy() {
        let wh = build("wh(+)").unwrap();
        assert_eq!(wh.linking_number(1, 2).unwrap(), 0);
        assert_eq!(class_of("wh(+)"), HClass::TrivialPlus);
        assert_eq!(class_of("wh(-)"), HClass::TrivialPlus);
        assert_eq!(class_of("par(wh(+),1)"), HClass::TrivialNotPlus);
        assert_eq!(class_of("par(par(wh(+),1),3)"), HClass::Essential);
        assert_eq!(class_of("bing(bing(wh(+),1),3)"), HClass::TrivialPlus);
        // Whitehead doubling an unlinked component leaves it split
        let s = build("whd(unlink(2),1,+)").unwrap();
        assert!(s.longitudes().iter().all(Word::is_identity));
    }

    #[test]
    fn parallel_copy() {
        let p = build("par(hopf,1)").unwrap();
        assert_eq!(mu_bar(&p, &[2, 3]).unwrap().value, BigInt::one());
        assert_eq!(mu_bar(&p, &[1, 2]).unwrap().value, BigInt::zero());
        assert_eq!(p.linking_number(1, 2).unwrap(), 0);
        let back = p.delete_component(2).unwrap();
        assert_eq!(back.longitudes(), LinkModel::hopf().longitudes());
        assert!(build("ram(hopf,1,0)").is_err());
        assert_eq!(build("ram(hopf,1,3)").unwrap().len(), 4);
    }

    #[test]
    fn mu_table_matches_single_queries() {
        let b = build("bing(par(hopf,1),2)").unwrap();
        for (idx, v) in valid_mu_table(&b, 3) {
            let m = mu_bar(&b, &idx).unwrap();
            assert!(m.valid);
            assert_eq!(m.value, v);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            build("bing(hopf,3)"),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(build("bing(hopf 1)"), Err(Error::Syntax { .. })));
        assert!(matches!(build("knot"), Err(Error::Syntax { .. })));
        assert!(mu_bar(&LinkModel::hopf(), &[1, 1]).is_err());
        assert_eq!(
            ConstructionExpr::parse(" whd( hopf ,2, - ) ")
                .unwrap()
                .to_string(),
            "whd(hopf,2,-)"
        );
    }

    #[test]
    fn families() {
        let bing_wh = FamilySpec {
            seed: Seed::Wh,
            steps: vec![
                BingStep {
                    component: 1,
                    ramification: 1,
                },
                BingStep {
                    component: 3,
                    ramification: 1,
                },
            ],
            signs: vec![Sign::Plus],
            whitehead_ramification: 1,
        };
        let m = family(&bing_wh).unwrap();
        assert_eq!(classify(&m.underlying).unwrap().class, HClass::TrivialPlus);
        assert_eq!(bing_wh.multiplicity(), 1);
        let ramified = FamilySpec {
            steps: vec![
                BingStep {
                    component: 1,
                    ramification: 2,
                },
                BingStep {
                    component: 5,
                    ramification: 2,
                },
            ],
            ..bing_wh.clone()
        };
        assert_eq!(ramified.multiplicity(), 2);
        let m = family(&ramified).unwrap();
        assert_eq!(classify(&m.underlying).unwrap().class, HClass::Essential);
        let hopf_seed = FamilySpec {
            seed: Seed::Hopf,
            steps: vec![],
            ..bing_wh
        };
        assert!(family(&hopf_seed).is_err());
    }
}
