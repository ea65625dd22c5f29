//! Word-level Kirby diagrams. Every component (dotted circle or framed
//! curve) is a curve with a meridian generator and a word in the meridians;
//! the dotted set marks which meridians belong to 1-handles.
//!
//! A slide of `a` over `b` with band `g` and sign `s` replaces `w_a` by
//! `w_a · g⁻¹ w_b^s g` and then changes meridians by `m_b ↦ m_a^s m_b` in
//! every word, which is how the other curves see the band sum. Reversing
//! a slide uses sign `-s` with the band rewritten in the new meridians (see
//! [`SlideMove::reverse`]); for bands avoiding `m_b` that is the same band.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::decomp::{ElementaryCommutator, Slot};
use crate::error::{Error, Result};
use crate::links::{classify, HClass, LinkModel};
use crate::milnor::is_trivial_mf;
use crate::words::{parse_expr, GenId, GeneratorContext, Word, WordExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Gamma,
    EngelComponent,
    Dual,
    Correction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub meridian: GenId,
    pub word: Word,
    pub framing: i64,
    pub role: Role,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramState {
    pub names: GeneratorContext,
    pub dotted: BTreeSet<GenId>,
    pub curves: Vec<Curve>,
    pub parallels: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlideSign {
    Plus,
    Minus,
}

impl SlideSign {
    fn exp(self) -> i64 {
        match self {
            SlideSign::Plus => 1,
            SlideSign::Minus => -1,
        }
    }

    fn flip(self) -> Self {
        match self {
            SlideSign::Plus => SlideSign::Minus,
            SlideSign::Minus => SlideSign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlideMove {
    pub slid: String,
    pub over: String,
    pub band: Word,
    pub sign: SlideSign,
}

impl SlideMove {
    /// The move undoing `self` when applied to `state.slide(self)`.
    pub fn reverse(&self, before: &DiagramState) -> Result<SlideMove> {
        let phi = before.meridian_change(self)?;
        Ok(SlideMove {
            slid: self.slid.clone(),
            over: self.over.clone(),
            band: phi(&self.band),
            sign: self.sign.flip(),
        })
    }
}

/// Dual longitude of dotted generator `x` with respect to a curve with
/// word `c` and meridian `g`: one conjugate of `m_g^{±1}` per occurrence of
/// `x`, conjugated by the prefix up to (for `x`) or through (for `x⁻¹`) it.
pub fn dual_longitude(c: &Word, x: GenId, g: GenId) -> Word {
    let letters = c.letters();
    let mut out = Word::identity();
    for (t, l) in letters.iter().enumerate() {
        if l.gen != x {
            continue;
        }
        let (p, e) = if l.inverse {
            (&letters[..=t], -1)
        } else {
            (&letters[..t], 1)
        };
        let p = Word::from_letters(p.iter().copied());
        out = out.mul(&Word::gen(g).pow(e).conjugate(&p));
    }
    out
}

impl DiagramState {
    pub fn new() -> Self {
        DiagramState {
            names: GeneratorContext::new(),
            dotted: BTreeSet::new(),
            curves: Vec::new(),
            parallels: Vec::new(),
        }
    }

    pub fn curve(&self, name: &str) -> Result<&Curve> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn curve_index(&self, name: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Adds a curve whose meridian is a new generator named after it.
    pub fn add_curve(&mut self, name: &str, word: Word, framing: i64, role: Role) -> Result<GenId> {
        if self.names.lookup(name).is_some() {
            return Err(Error::InvalidArgument(format!(
                "curve `{name}` already exists"
            )));
        }
        let meridian = self.names.declare(name)?;
        self.curves.push(Curve {
            name: name.to_string(),
            meridian,
            word,
            framing,
            role,
        });
        Ok(meridian)
    }

    pub fn mark_dotted(&mut self, name: &str) -> Result<()> {
        let m = self.curve(name)?.meridian;
        self.dotted.insert(m);
        Ok(())
    }

    pub fn register_parallel(&mut self, a: &str, b: &str) -> Result<()> {
        if a == b {
            return Err(Error::InvalidArgument(
                "a curve is not parallel to itself".into(),
            ));
        }
        if self.curve(a)?.word != self.curve(b)?.word {
            return Err(Error::Precondition(format!(
                "curves `{a}` and `{b}` have different words"
            )));
        }
        self.parallels.push((a.to_string(), b.to_string()));
        Ok(())
    }

    pub fn render(&self, w: &Word) -> String {
        self.names.render(w)
    }

    /// The state of an elementary Engel link: four dotted components (the
    /// two product generators registered as a parallel pair) and the curve
    /// `gamma_name` reading the commutator.
    pub fn engel(
        ec: &ElementaryCommutator,
        names: &GeneratorContext,
        gamma_name: &str,
    ) -> Result<Self> {
        let gens = ec.generators();
        let (b, c) = ec.product_generators();
        let mut st = DiagramState::new();
        let mut ids = Vec::new();
        for &g in &gens {
            if g as usize > names.len() {
                return Err(Error::IndexOutOfRange {
                    index: g as usize,
                    len: names.len(),
                });
            }
            ids.push(st.add_curve(names.name(g), Word::identity(), 0, Role::EngelComponent)?);
        }
        let local = |g: GenId| {
            ids[gens
                .iter()
                .position(|&h| h == g)
                .expect("slot generator is listed")]
        };
        let gid = st.add_curve(gamma_name, Word::identity(), 0, Role::Gamma)?;
        // the parallel pair is one cabled component `p`; its longitude is
        // shared by both copies with `m_p ↦ m_b m_c`
        let p = gid + 1;
        let entries: Vec<Word> = ec
            .slots
            .iter()
            .map(|s| match *s {
                Slot::Gen(g) => Word::gen(local(g)),
                Slot::Product(..) => Word::gen(p),
            })
            .collect();
        let cabled = Word::left_normed(&entries);
        let pair = Word::gen(local(b)).mul(&Word::gen(local(c)));
        let uncable = |w: &Word| w.substitute(|g| (g == p).then(|| pair.clone()));
        for (k, &g) in gens.iter().enumerate() {
            let src = if g == b || g == c { p } else { local(g) };
            st.curves[k].word = uncable(&dual_longitude(&cabled, src, gid));
        }
        st.curves[4].word = uncable(&cabled);
        for &g in &gens {
            st.dotted.insert(local(g));
        }
        st.register_parallel(names.name(b), names.name(c))?;
        Ok(st)
    }

    /// Parses a pattern such as `[x, y*z, y*z, w]`: a 4-fold left-normed
    /// bracket with two equal two-generator products and two single
    /// generators, all distinct.
    pub fn engel_from_text(text: &str) -> Result<Self> {
        let shape_err =
            || Error::Precondition(format!("`{text}` is not an elementary Engel pattern"));
        let WordExpr::Commutator(entries) = parse_expr(text)? else {
            return Err(shape_err());
        };
        if entries.len() != 4 {
            return Err(shape_err());
        }
        let mut names = GeneratorContext::new();
        let mut slots = Vec::new();
        let mut pair = Vec::new();
        for (k, e) in entries.iter().enumerate() {
            match e {
                WordExpr::Atom(a) => slots.push(Slot::Gen(declare_once(&mut names, a)?)),
                WordExpr::Product(f) => match f.as_slice() {
                    [WordExpr::Atom(a), WordExpr::Atom(b)] => {
                        let a = declare_once(&mut names, a)?;
                        let b = declare_once(&mut names, b)?;
                        slots.push(Slot::Product(a, b));
                        pair.push(k);
                    }
                    _ => return Err(shape_err()),
                },
                _ => return Err(shape_err()),
            }
        }
        let [s0, s1, s2, s3] = slots[..] else {
            return Err(shape_err());
        };
        let distinct: BTreeSet<GenId> = slots.iter().flat_map(|s| s.word().generators()).collect();
        if pair.len() != 2 || slots[pair[0]] != slots[pair[1]] || distinct.len() != 4 {
            return Err(shape_err());
        }
        let ec = ElementaryCommutator::new([s0, s1, s2, s3], (pair[0], pair[1]));
        let gamma = if names.lookup("gamma").is_none() {
            "gamma"
        } else {
            "gamma_"
        };
        DiagramState::engel(&ec, &names, gamma)
    }

    /// All components as a link model (curve order, meridians renumbered).
    pub fn from_link_with_dotted(link: &LinkModel, dotted: &[usize]) -> Result<Self> {
        let mut st = DiagramState::new();
        let ctx = link.meridian_context();
        for (i, c) in link.components.iter().enumerate() {
            st.add_curve(
                ctx.name(i as GenId + 1),
                c.longitude.clone(),
                c.framing,
                Role::EngelComponent,
            )?;
        }
        for &d in dotted {
            if d == 0 || d > link.len() {
                return Err(Error::IndexOutOfRange {
                    index: d,
                    len: link.len(),
                });
            }
            st.dotted.insert(d as GenId);
        }
        Ok(st)
    }

    pub fn to_link_model(&self) -> LinkModel {
        let order: Vec<GenId> = self.curves.iter().map(|c| c.meridian).collect();
        let map = order
            .iter()
            .enumerate()
            .map(|(p, &m)| (m, p as GenId + 1))
            .collect();
        let mut link = LinkModel::unlink(self.curves.len());
        for (comp, c) in link.components.iter_mut().zip(&self.curves) {
            comp.longitude = c.word.relabel(&map);
            comp.framing = c.framing;
        }
        link.provenance = "diagram".into();
        link
    }

    fn meridian_change(&self, mv: &SlideMove) -> Result<impl Fn(&Word) -> Word> {
        let a = self.curve(&mv.slid)?.meridian;
        let b = self.curve(&mv.over)?.meridian;
        let image = Word::gen(a).pow(mv.sign.exp()).mul(&Word::gen(b));
        Ok(move |w: &Word| w.substitute(|g| (g == b).then(|| image.clone())))
    }

    pub fn slide(&self, mv: &SlideMove) -> Result<DiagramState> {
        let ia = self.curve_index(&mv.slid)?;
        let ib = self.curve_index(&mv.over)?;
        if ia == ib {
            return Err(Error::InvalidArgument(
                "a curve cannot slide over itself".into(),
            ));
        }
        if self.curves[ib].framing != 0 {
            return Err(Error::Precondition(format!(
                "over-curve `{}` has framing {}",
                mv.over, self.curves[ib].framing
            )));
        }
        let phi = self.meridian_change(mv)?;
        let mut next = self.clone();
        let band_sum = self.curves[ia]
            .word
            .mul(&self.curves[ib].word.pow(mv.sign.exp()).conjugate(&mv.band));
        for (k, c) in next.curves.iter_mut().enumerate() {
            c.word = if k == ia {
                phi(&band_sum)
            } else {
                phi(&c.word)
            };
        }
        Ok(next)
    }

    /// Sets a dotted generator to the identity everywhere and drops its
    /// circle.
    pub fn delete_dotted(&self, name: &str) -> Result<DiagramState> {
        let id = self.curve(name)?.meridian;
        if !self.dotted.contains(&id) {
            return Err(Error::Precondition(format!("`{name}` is not dotted")));
        }
        self.without_curve(name)
    }

    /// `true` if the named curve has an empty word and no other word
    /// mentions its meridian.
    pub fn is_split_unknot(&self, name: &str) -> Result<bool> {
        let c = self.curve(name)?;
        Ok(c.word.is_identity()
            && self
                .curves
                .iter()
                .all(|o| o.name == name || !o.word.mentions(c.meridian)))
    }

    pub fn without_curve(&self, name: &str) -> Result<DiagramState> {
        let k = self.curve_index(name)?;
        let id = self.curves[k].meridian;
        let mut next = self.clone();
        next.curves.remove(k);
        next.dotted.remove(&id);
        for c in &mut next.curves {
            c.word = c.word.delete_generator(id);
        }
        next.parallels.retain(|(a, b)| a != name && b != name);
        Ok(next)
    }

    pub fn gamma(&self) -> Option<&Curve> {
        self.curves.iter().find(|c| c.role == Role::Gamma)
    }
}

impl Default for DiagramState {
    fn default() -> Self {
        DiagramState::new()
    }
}

impl fmt::Display for DiagramState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.curves {
            let dot = if self.dotted.contains(&c.meridian) {
                " (dotted)"
            } else {
                ""
            };
            writeln!(f, "{}{dot}: {}", c.name, self.render(&c.word))?;
        }
        for (a, b) in &self.parallels {
            writeln!(f, "parallel {a} {b}")?;
        }
        Ok(())
    }
}

fn declare_once(names: &mut GeneratorContext, a: &str) -> Result<GenId> {
    match names.lookup(a) {
        Some(id) => Ok(id),
        None => names.declare(a),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlideReport {
    pub gamma: Option<String>,
    pub slid: String,
    pub over: String,
    pub class_before: HClass,
    pub split_unknot: bool,
    pub remaining_class: HClass,
    pub holds: bool,
    pub notes: Vec<String>,
}

/// Slides the first registered parallel pair (trivial band, opposite sign)
/// and checks that the slid component splits off as an unknot leaving an
/// h-trivial link.
pub fn engel_slide_property(state: &DiagramState) -> Result<SlideReport> {
    let (a, b) = state
        .parallels
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("state has no registered parallel pair".into()))?;
    let class_before = classify(&state.to_link_model())?.class;
    let mv = SlideMove {
        slid: a.clone(),
        over: b.clone(),
        band: Word::identity(),
        sign: SlideSign::Minus,
    };
    let after = state.slide(&mv)?;
    let split_unknot = after.is_split_unknot(&a)?;
    let rest = after.without_curve(&a)?;
    let remaining_class = classify(&rest.to_link_model())?.class;
    let holds = split_unknot && remaining_class != HClass::Essential;
    Ok(SlideReport {
        gamma: state.gamma().map(|g| state.render(&g.word)),
        slid: a,
        over: b,
        class_before,
        split_unknot,
        remaining_class,
        holds,
        notes: vec!["stops at the pre-stabilization state: dotted circles are not traded for 0-framed 2-handles".into()],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WndlCheck {
    pub free_trivial: bool,
    pub milnor_trivial: bool,
}

impl WndlCheck {
    /// Freely nontrivial but trivial in the Milnor group.
    pub fn is_instance(&self) -> bool {
        !self.free_trivial && self.milnor_trivial
    }
}

pub fn wndl_check(gamma: &Word, n: usize) -> WndlCheck {
    WndlCheck {
        free_trivial: gamma.is_identity(),
        milnor_trivial: is_trivial_mf(gamma, n),
    }
}

/// Outcome of one script command, for printing.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum ScriptEvent {
    Slide {
        slid: String,
        word: String,
    },
    Delete {
        name: String,
    },
    /// `split` lists the split unknots; `remainder_class` classifies the
    /// rest. `engel` runs the slide property while a registered parallel
    /// pair still has equal words.
    Report {
        state: Vec<(String, String)>,
        class: HClass,
        split: Vec<String>,
        remainder_class: HClass,
        engel: Option<SlideReport>,
    },
}

/// Runs a slide script. Lines (blank lines and `#` comments ignored):
///
/// ```text
/// engel [x, y*z, y*z, w]
/// link bing(hopf,1)
/// dotted m1 m2
/// curve c x*y^-1 [framing k]
/// parallel a b
/// slide a over b band <word> sign +|-
/// delete x
/// report
/// ```
pub fn run_script(text: &str) -> Result<(DiagramState, Vec<ScriptEvent>)> {
    let mut st = DiagramState::new();
    let mut events = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| match e {
            Error::Syntax { message, .. } => Error::Syntax {
                position: lineno + 1,
                message: format!("line {}: {message}", lineno + 1),
            },
            other => other,
        };
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let syntax = |m: &str| Error::Syntax {
            position: lineno + 1,
            message: format!("line {}: {m}", lineno + 1),
        };
        match cmd {
            "engel" => st = DiagramState::engel_from_text(rest).map_err(at)?,
            "link" => {
                st = DiagramState::from_link_with_dotted(
                    &crate::links::build(rest).map_err(at)?,
                    &[],
                )?
            }
            "dotted" => {
                for name in rest.split_whitespace() {
                    st.mark_dotted(name)?;
                }
            }
            "curve" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let (name, word, framing) = match parts.as_slice() {
                    [name, word] => (*name, *word, 0),
                    [name, word, "framing", k] => {
                        (*name, *word, k.parse().map_err(|_| syntax("bad framing"))?)
                    }
                    _ => return Err(syntax("expected `curve <name> <word> [framing <k>]`")),
                };
                let w = st.names.parse(word).map_err(at)?;
                st.add_curve(name, w, framing, Role::Correction)?;
            }
            "parallel" => match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                [a, b] => st.register_parallel(a, b)?,
                _ => return Err(syntax("expected `parallel <a> <b>`")),
            },
            "slide" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [slid, "over", over, "band", band, "sign", sign] = parts.as_slice() else {
                    return Err(syntax(
                        "expected `slide <a> over <b> band <word> sign <+|->`",
                    ));
                };
                let sign = match *sign {
                    "+" => SlideSign::Plus,
                    "-" => SlideSign::Minus,
                    _ => return Err(syntax("sign must be + or -")),
                };
                let band = st.names.parse(band).map_err(at)?;
                let mv = SlideMove {
                    slid: slid.to_string(),
                    over: over.to_string(),
                    band,
                    sign,
                };
                st = st.slide(&mv)?;
                let word = st.render(&st.curve(slid)?.word);
                events.push(ScriptEvent::Slide {
                    slid: slid.to_string(),
                    word,
                });
            }
            "delete" => {
                st = st.delete_dotted(rest)?;
                events.push(ScriptEvent::Delete {
                    name: rest.to_string(),
                });
            }
            "report" => {
                let class = classify(&st.to_link_model())?.class;
                let mut split = Vec::new();
                let mut rest = st.clone();
                for c in &st.curves {
                    if st.is_split_unknot(&c.name)? {
                        split.push(c.name.clone());
                        rest = rest.without_curve(&c.name)?;
                    }
                }
                let remainder_class = classify(&rest.to_link_model())?.class;
                let pristine = st.parallels.iter().any(|(a, b)| {
                    st.curve(a).ok().map(|c| &c.word) == st.curve(b).ok().map(|c| &c.word)
                });
                let engel = if pristine {
                    Some(engel_slide_property(&st)?)
                } else {
                    None
                };
                let state = st
                    .curves
                    .iter()
                    .map(|c| (c.name.clone(), st.render(&c.word)))
                    .collect();
                events.push(ScriptEvent::Report {
                    state,
                    class,
                    split,
                    remainder_class,
                    engel,
                });
            }
            other => return Err(syntax(&format!("unknown command `{other}`"))),
        }
    }
    Ok((st, events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::elementary_commutators;

    #[test]
    fn engel_patterns_split() {
        for text in ["[x, y*z, y*z, w]", "[y*z, x, y*z, w]"] {
            let st = DiagramState::engel_from_text(text).unwrap();
            let r = engel_slide_property(&st).unwrap();
            assert!(r.holds, "{text}: {r:?}");
            assert_eq!(r.class_before, HClass::Essential);
        }
    }

    #[test]
    fn parallel_slide_empties_word() {
        let st = DiagramState::engel_from_text("[x, y*z, y*z, w]").unwrap();
        let mv = SlideMove {
            slid: "y".into(),
            over: "z".into(),
            band: Word::identity(),
            sign: SlideSign::Minus,
        };
        let after = st.slide(&mv).unwrap();
        assert!(after.curve("y").unwrap().word.is_identity());
        let g = after.gamma().unwrap();
        assert_eq!(
            after.render(&g.word),
            after.render(&after.names.parse("[x,z,z,w]").unwrap())
        );
        assert_eq!(after.slide(&mv.reverse(&st).unwrap()).unwrap(), st);
    }

    #[test]
    fn unlink_slides() {
        let mut st = DiagramState::from_link_with_dotted(&LinkModel::unlink(2), &[1, 2]).unwrap();
        st.register_parallel("m1", "m2").unwrap();
        let r = engel_slide_property(&st).unwrap();
        assert!(r.holds);
        let mv = SlideMove {
            slid: "m1".into(),
            over: "m2".into(),
            band: Word::gen(2),
            sign: SlideSign::Plus,
        };
        assert!(st
            .slide(&mv)
            .unwrap()
            .curves
            .iter()
            .all(|c| c.word.is_identity()));
        assert!(engel_slide_property(&DiagramState::new()).is_err());
    }

    #[test]
    fn framing_and_names() {
        let mut st = DiagramState::new();
        st.add_curve("a", Word::identity(), 0, Role::Dual).unwrap();
        st.add_curve("b", Word::identity(), 1, Role::Dual).unwrap();
        let mv = SlideMove {
            slid: "a".into(),
            over: "b".into(),
            band: Word::identity(),
            sign: SlideSign::Plus,
        };
        assert!(matches!(st.slide(&mv), Err(Error::Precondition(_))));
        let mv = SlideMove {
            slid: "a".into(),
            over: "q".into(),
            band: Word::identity(),
            sign: SlideSign::Plus,
        };
        assert!(st.slide(&mv).is_err());
    }

    #[test]
    fn deletion_and_wndl() {
        let st = DiagramState::engel_from_text("[x, y*z, y*z, w]").unwrap();
        let d = st.delete_dotted("z").unwrap();
        let g = d.gamma().unwrap();
        assert_eq!(g.word, d.names.parse("[x,y,y,w]").unwrap());
        let c = wndl_check(&g.word, 5);
        assert_eq!(
            c,
            WndlCheck {
                free_trivial: false,
                milnor_trivial: true
            }
        );
        assert_eq!(
            wndl_check(&Word::identity(), 4),
            WndlCheck {
                free_trivial: true,
                milnor_trivial: true
            }
        );
        let gamma = crate::words::GeneratorContext::numbered("m", 4)
            .parse("[[m1,m2],[m3,m4]]")
            .unwrap();
        assert_eq!(
            wndl_check(&gamma, 4),
            WndlCheck {
                free_trivial: false,
                milnor_trivial: false
            }
        );
        assert!(st.delete_dotted("gamma").is_err());

        let b = DiagramState::from_link_with_dotted(
            &crate::links::build("bing(hopf,1)").unwrap(),
            &[1, 2, 3],
        )
        .unwrap();
        let rest = b.delete_dotted("m1").unwrap();
        assert_ne!(
            classify(&rest.to_link_model()).unwrap().class,
            HClass::Essential
        );
    }

    #[test]
    fn all_elementary_states() {
        let names = GeneratorContext::numbered("m", 4);
        for ec in elementary_commutators(4).unwrap() {
            let st = DiagramState::engel(&ec, &names, "gamma").unwrap();
            assert!(
                engel_slide_property(&st).unwrap().holds,
                "{}",
                ec.render(&names)
            );
            let (b, c) = ec.product_generators();
            for g in ec.generators() {
                let d = st.delete_dotted(names.name(g)).unwrap();
                let check = wndl_check(&d.gamma().unwrap().word, 5);
                assert_eq!(check.is_instance(), g == b || g == c);
            }
        }
    }

    #[test]
    fn script() {
        let text =
            "# parallel-pair slide\nengel [x, y*z, y*z, w]\nslide y over z band 1 sign -\nreport\n";
        let (st, ev) = run_script(text).unwrap();
        assert!(st.is_split_unknot("y").unwrap());
        assert_eq!(ev.len(), 2);
        assert!(run_script("bogus").is_err());
        assert!(run_script("engel [x, y, y, w]").is_err());
    }
}
