//! Independent reimplementations checked against the library on random
//! inputs with fixed seeds.

use engelkit::links::{self, mu_bar};
use engelkit::magnus::{expand, reduced_expand};
use engelkit::reproduce::random_word;
use engelkit::words::{GenId, Word};
use engelkit::zlattice::{hnf, snf, solve_integer, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficient of `X_{mono}` in the Magnus expansion, summing over the ways
/// to split `mono` into runs taken from increasing letter positions
/// (`x ↦ 1 + X`, `x⁻¹ ↦ Σ (−1)^r X^r`).
fn coefficient_by_positions(w: &Word, mono: &[GenId]) -> i64 {
    fn go(letters: &[engelkit::Letter], from: usize, mono: &[GenId]) -> i64 {
        if mono.is_empty() {
            return 1;
        }
        let run = mono.iter().take_while(|&&g| g == mono[0]).count();
        let mut total = 0;
        for t in from..letters.len() {
            let l = letters[t];
            if l.gen != mono[0] {
                continue;
            }
            let max_r = if l.inverse { run } else { 1 };
            for r in 1..=max_r {
                let c = if l.inverse {
                    if r % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                } else {
                    1
                };
                total += c * go(letters, t + 1, &mono[r..]);
            }
        }
        total
    }
    go(w.letters(), 0, mono)
}

fn all_monomials(gens: GenId, max_deg: usize) -> Vec<Vec<GenId>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for m in &layer {
            for g in 1..=gens {
                let mut m2: Vec<GenId> = m.clone();
                m2.push(g);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn magnus_matches_position_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let monos = all_monomials(3, 4);
    for _ in 0..150 {
        let w = random_word(&mut rng, 3, 12);
        let s = expand(&w, 4);
        let r = reduced_expand(&w, 3);
        for m in &monos {
            let want = BigInt::from(coefficient_by_positions(&w, m));
            assert_eq!(s.coefficient(m), want, "{w} at {m:?}");
            let distinct = (0..m.len()).all(|i| !m[i + 1..].contains(&m[i]));
            let reduced_want = if distinct { want } else { BigInt::zero() };
            assert_eq!(r.coefficient(m), reduced_want, "{w} reduced at {m:?}");
        }
    }
}

#[test]
fn mu_bar_matches_position_sums() {
    for text in [
        "bing(hopf,1)",
        "bing(bing(hopf,1),3)",
        "par(bing(hopf,2),1)",
        "wh(-)",
    ] {
        let l = links::build(text).unwrap();
        let k = l.len();
        for last in 1..=k {
            for a in 1..=k {
                for b in 1..=k {
                    let idx = [a, b, last];
                    if a == b || a == last || b == last {
                        continue;
                    }
                    let want = coefficient_by_positions(
                        &l.components[last - 1].longitude,
                        &[a as GenId, b as GenId],
                    );
                    assert_eq!(
                        mu_bar(&l, &idx).unwrap().value,
                        BigInt::from(want),
                        "{text} {idx:?}"
                    );
                }
            }
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, bound: i64) -> IntMatrix {
    let rows = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(n, rows).unwrap()
}

#[test]
fn solve_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..300 {
        let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_matrix(&mut rng, m, n, 3);
        let b: Vec<BigInt> = (0..m)
            .map(|_| BigInt::from(rng.gen_range(-4..=4)))
            .collect();
        // search x ∈ [-5, 5]^n for A·x = b
        let mut found = false;
        let total = 11usize.pow(n as u32);
        for code in 0..total {
            let x: Vec<BigInt> = (0..n)
                .map(|j| BigInt::from((code / 11usize.pow(j as u32)) % 11) - 5)
                .collect();
            if a.mul_vec(&x).unwrap() == b {
                found = true;
                break;
            }
        }
        match solve_integer(&a, &b).unwrap() {
            Some(x) => assert_eq!(a.mul_vec(&x).unwrap(), b),
            None => assert!(!found, "missed a solution for {a} and {b:?}"),
        }
    }
}

#[test]
fn hnf_shape_and_unimodularity() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..300 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_matrix(&mut rng, m, n, 9);
        let h = hnf(&a);
        assert_eq!(h.u.mul(&a).unwrap(), h.h);
        assert_eq!(h.u.det().unwrap().abs(), BigInt::from(1));
        let mut last: Option<usize> = None;
        for (r, &p) in h.pivots.iter().enumerate() {
            assert!(last.is_none_or(|q| p > q));
            last = Some(p);
            assert!(h.h[(r, p)].is_positive());
            assert!((0..p).all(|c| h.h[(r, c)].is_zero()));
            for above in 0..r {
                let e = &h.h[(above, p)];
                assert!(!e.is_negative() && e < &h.h[(r, p)]);
            }
        }
        assert!((h.rank()..m).all(|r| h.h.row(r).iter().all(Zero::is_zero)));
        for k in h.left_kernel() {
            let x: Vec<BigInt> = a.transpose().mul_vec(&k).unwrap();
            assert!(x.iter().all(Zero::is_zero));
        }
    }
}

/// gcd of the `k × k` minors, computed by cofactor expansion.
fn minors_gcd(a: &IntMatrix, k: usize) -> BigInt {
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        if m.is_empty() {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    let choose = |n: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|b| s & (1 << b) != 0).collect())
            .collect()
    };
    let mut g = BigInt::zero();
    for rows in choose(a.rows()) {
        for cols in choose(a.cols()) {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| a[(r, c)].clone()).collect())
                .collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

#[test]
fn smith_form_matches_minor_gcds() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..500 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_matrix(&mut rng, m, n, 7);
        let s = snf(&a);
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
        let mut prod = BigInt::from(1);
        for k in 1..=m.min(n) {
            prod *= &s.d[(k - 1, k - 1)];
            assert_eq!(minors_gcd(&a, k), prod.abs(), "k = {k} for {a}");
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }
}
