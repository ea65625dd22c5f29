use engelkit::links::{self, classify, ConstructionExpr, HClass};
use engelkit::magnus::{expand, reduced_expand, Truncation};
use engelkit::milnor::is_trivial_mf;
use engelkit::reproduce::random_link_expr;
use engelkit::slides::{DiagramState, Role, SlideMove, SlideSign};
use engelkit::words::{GeneratorContext, Letter, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=gens, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

fn link_expr() -> impl Strategy<Value = ConstructionExpr> {
    any::<u64>().prop_map(|seed| random_link_expr(&mut ChaCha8Rng::seed_from_u64(seed), 5))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn words_form_a_group(u in word(3, 10), v in word(3, 10), w in word(3, 10)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        let letters = u.letters();
        prop_assert!(letters.windows(2).all(|p| p[0] != p[1].inv()));
    }

    #[test]
    fn words_render_and_parse(u in word(4, 12)) {
        let ctx = GeneratorContext::numbered("x", 4);
        prop_assert_eq!(ctx.parse(&ctx.render(&u)).unwrap(), u);
    }

    #[test]
    fn magnus_is_a_homomorphism(u in word(3, 10), v in word(3, 10)) {
        let (eu, ev) = (expand(&u, 5), expand(&v, 5));
        prop_assert_eq!(eu.mul(&ev).unwrap(), expand(&u.mul(&v), 5));
        prop_assert_eq!(eu.inverse().unwrap(), expand(&u.inverse(), 5));
        let (ru, rv) = (reduced_expand(&u, 3), reduced_expand(&v, 3));
        prop_assert_eq!(ru.mul(&rv).unwrap(), reduced_expand(&u.mul(&v), 3));
    }

    #[test]
    fn milnor_relators_die(i in 1u32..=4, y in word(4, 8)) {
        let m = Word::gen(i);
        prop_assert!(is_trivial_mf(&Word::commutator(&m, &m.conjugate(&y)), 4));
    }

    #[test]
    fn chunked_products_agree(chunks in prop::collection::vec(word(3, 6), 0..8)) {
        let whole = chunks.iter().fold(Word::identity(), |a, c| a.mul(c));
        let t = Truncation::Reduced(3);
        prop_assert_eq!(engelkit::magnus::expand_product(&chunks, t).unwrap(), engelkit::magnus::expand_in(&whole, t));
    }

    #[test]
    fn mu_bar_symmetry_and_copies(e in link_expr()) {
        let l = e.build().unwrap();
        let k = l.len();
        for i in 1..=k {
            for j in 1..=k {
                if i != j {
                    prop_assert_eq!(links::mu_bar(&l, &[i, j]).unwrap().value, links::mu_bar(&l, &[j, i]).unwrap().value);
                }
            }
            prop_assert_eq!(l.par(i).unwrap().delete_component(i + 1).unwrap().longitudes(), l.longitudes());
        }
    }

    #[test]
    fn essential_sublinks_propagate(e in link_expr(), extra in 1usize..=2) {
        let l = e.build().unwrap();
        if classify(&l).unwrap().class == HClass::Essential {
            // adding a parallel copy keeps an h-essential sublink
            let bigger = l.par(extra.min(l.len())).unwrap();
            prop_assert_eq!(classify(&bigger).unwrap().class, HClass::Essential);
        }
    }

    #[test]
    fn slides_over_milnor_trivial_curves(w in word(3, 8), y in word(3, 6), band in word(3, 4), plus in any::<bool>()) {
        // curve b reads a Milnor relator, so sliding over it keeps a's class
        let mut st = DiagramState::new();
        for name in ["p", "q", "r"] {
            st.add_curve(name, Word::identity(), 0, Role::Dual).unwrap();
            st.mark_dotted(name).unwrap();
        }
        st.add_curve("a", w.clone(), 0, Role::Gamma).unwrap();
        let rel = Word::commutator(&Word::gen(1), &Word::gen(1).conjugate(&y));
        st.add_curve("b", rel, 0, Role::Correction).unwrap();
        let sign = if plus { SlideSign::Plus } else { SlideSign::Minus };
        let mv = SlideMove { slid: "a".into(), over: "b".into(), band, sign };
        let after = st.slide(&mv).unwrap();
        let before_trivial = is_trivial_mf(&w, 5);
        prop_assert_eq!(is_trivial_mf(&after.curve("a").unwrap().word, 5), before_trivial);
        prop_assert_eq!(after.slide(&mv.reverse(&st).unwrap()).unwrap(), st);
    }
}

#[test]
fn unlinks_are_trivial_plus() {
    for k in 1..=5 {
        assert_eq!(
            classify(&links::LinkModel::unlink(k)).unwrap().class,
            HClass::TrivialPlus
        );
    }
}
