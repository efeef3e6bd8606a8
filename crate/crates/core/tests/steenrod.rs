mod common;

use std::collections::HashMap;

use common::{m, monomial, monomial_of_degree, p, polynomial, rng};
use hitcalc::monomial::binomial;
use hitcalc::quotient::{BuildOptions, QuotientBasis};
use hitcalc::steenrod::*;
use hitcalc::Polynomial;
use proptest::prelude::*;
use rand::Rng;

fn chi_by_recursion(k: u32, f: &Polynomial, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
    if k == 0 {
        return f.clone();
    }
    if let Some(g) = memo.get(&k) {
        return g.clone();
    }
    // sum_{i=0}^k Sq^i chi(Sq^{k-i}) = 0
    let mut out = Polynomial::zero(f.nvars());
    for i in 1..=k {
        out += &sq(i, &chi_by_recursion(k - i, f, memo));
    }
    memo.insert(k, out.clone());
    out
}

#[test]
fn powers_follow_binomials() {
    assert_eq!(sq_on_power(1, 3), Some(4));
    assert_eq!(sq_on_power(2, 3), Some(5));
    assert_eq!(sq_on_power(3, 2), None);
    for n in 0..120u32 {
        for k in 0..=n + 1 {
            let odd = binomial(n as u64, k as u64) % 2 == 1;
            assert_eq!(sq_on_power(k, n), odd.then_some(n + k));
        }
    }
}

#[test]
fn square_examples() {
    assert_eq!(sq(1, &p("[1,1]")), p("[2,1]+[1,2]"));
    assert_eq!(sq(2, &p("[1,3]")), p("[2,4]+[1,5]"));
    let mut r = rng(1);
    for _ in 0..500 {
        let x = monomial(&mut r, 5, 20);
        let f = Polynomial::from_monomial(x);
        assert_eq!(sq(0, &f), f);
        assert_eq!(sq(x.degree(), &f), Polynomial::from_monomial(x.frobenius(1)));
        assert!(sq(x.degree() + 1, &f).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cartan_formula(
        a in prop::collection::vec(0u32..7, 3),
        b in prop::collection::vec(0u32..7, 3),
        c in prop::collection::vec(0u32..7, 3),
        k in 0u32..14,
    ) {
        let f = Polynomial::from_terms(3, [m(&a)]);
        let g = &Polynomial::from_monomial(m(&b)) + &Polynomial::from_monomial(m(&c));
        let lhs = sq(k, &f.mul(&g).unwrap());
        let mut rhs = Polynomial::zero(3);
        for i in 0..=k {
            rhs += &sq(i, &f).mul(&sq(k - i, &g)).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kameko_psi_relations(e in prop::collection::vec(0u32..9, 1..=5), i in 0u32..8) {
        let f = Polynomial::from_monomial(m(&e));
        prop_assert_eq!(
            kameko_psi_polynomial(&sq(2 * i, &f)),
            sq(i, &kameko_psi_polynomial(&f))
        );
        prop_assert!(kameko_psi_polynomial(&sq(2 * i + 1, &f)).is_zero());
    }
}

#[test]
fn adem_spot_checks() {
    let mut r = rng(2);
    for _ in 0..500 {
        let s = r.gen_range(1..=4);
        let d = r.gen_range(0..=10);
        let f = polynomial(&mut r, s, d, 4);
        assert!(sq_word(&[1, 1], &f).is_zero());
        assert_eq!(sq_word(&[1, 2], &f), sq(3, &f));
        assert_eq!(sq_word(&[2, 2], &f), sq_word(&[3, 1], &f));
    }
}

#[test]
fn conjugate_matches_recursion() {
    assert_eq!(chi_sq(1, &p("[1]")), p("[2]"));
    let mut r = rng(3);
    for _ in 0..500 {
        let s = r.gen_range(1..=3);
        let d = r.gen_range(0..=6);
        let f = polynomial(&mut r, s, d, 3);
        assert_eq!(chi_sq(0, &f), f);
        let mut memo = HashMap::new();
        for k in 1..=10 {
            assert_eq!(chi_sq(k, &f), chi_by_recursion(k, &f, &mut memo), "k = {k}, f = {f}");
        }
    }
}

#[test]
fn conjugate_of_twelve() {
    let mut r = rng(4);
    for _ in 0..500 {
        let s = r.gen_range(1..=4);
        let d = r.gen_range(0..=8);
        let f = polynomial(&mut r, s, d, 3);
        let rhs = &sq_word(&[8, 4], &f) + &sq_word(&[8, 3, 1], &f);
        assert_eq!(chi_sq(12, &f), rhs);
    }
}

#[test]
fn chi_trick() {
    let mut r = rng(5);
    let mut quotients: HashMap<u32, QuotientBasis> = HashMap::new();
    for _ in 0..500 {
        let u = monomial(&mut r, 3, 5);
        let v = monomial(&mut r, 3, 5);
        let k = r.gen_range(1..=5);
        let f = &Polynomial::from_monomial(u)
            .mul(&sq(k, &Polynomial::from_monomial(v)))
            .unwrap()
            + &chi_sq(k, &Polynomial::from_monomial(u))
                .mul(&Polynomial::from_monomial(v))
                .unwrap();
        let d = u.degree() + v.degree() + k;
        let q = quotients
            .entry(d)
            .or_insert_with(|| QuotientBasis::build(3, d, &BuildOptions::default()).unwrap());
        assert!(q.is_hit(&f).unwrap(), "u = {u}, v = {v}, k = {k}");
    }
}

#[test]
fn kameko_map_examples() {
    assert_eq!(kameko_psi(&m(&[3, 1, 7, 5, 13])), Some(m(&[1, 0, 3, 2, 6])));
    assert_eq!(kameko_psi(&m(&[2, 1, 1, 1, 1])), None);
    assert_eq!(kameko_section(&m(&[0, 0, 0, 0, 0])), m(&[1, 1, 1, 1, 1]));
    let mut r = rng(6);
    for _ in 0..500 {
        let s = r.gen_range(1..=5);
        let y = monomial(&mut r, s, 30);
        let x = kameko_section(&y);
        assert_eq!(kameko_psi(&x), Some(y));
        assert_eq!(x.degree(), 2 * y.degree() + s as u32);
        assert_eq!(x.weight().get(1), s as u32);
    }
}

#[test]
fn kameko_map_kills_hit_generators() {
    for (s, d) in [(5usize, 13u32), (4, 14), (3, 11)] {
        let target = QuotientBasis::build(s, (d - s as u32) / 2, &BuildOptions::default()).unwrap();
        for g in hit_generators(s, d, GeneratorMode::PowersOfTwo).unwrap() {
            let image = kameko_psi_polynomial(&g.polynomial());
            assert!(target.is_hit(&image).unwrap(), "Sq^{}({})", g.k, g.source);
        }
    }
}

#[test]
fn generator_sets() {
    assert_eq!(count_hit_generators(5, 13, GeneratorMode::PowersOfTwo), 1820 + 1365 + 715 + 126);
    let g: Vec<Polynomial> = hit_generators(1, 2, GeneratorMode::PowersOfTwo)
        .unwrap()
        .iter()
        .map(HitGenerator::polynomial)
        .filter(|f| !f.is_zero())
        .collect();
    assert_eq!(g, vec![p("[2]")]);
}

#[test]
fn generator_mode_does_not_change_the_basis() {
    let all = BuildOptions {
        generators: GeneratorMode::All,
        ..BuildOptions::default()
    };
    for s in 1..=4 {
        for d in 0..=16 {
            let a = QuotientBasis::build(s, d, &BuildOptions::default()).unwrap();
            let b = QuotientBasis::build(s, d, &all).unwrap();
            assert_eq!(a.admissible(), b.admissible(), "s = {s}, d = {d}");
        }
    }
}

#[test]
fn squares_of_random_monomials_have_distinct_terms() {
    let mut r = rng(7);
    for _ in 0..500 {
        let x = monomial_of_degree(&mut r, 5, 15);
        let k = r.gen_range(0..=15);
        let terms = sq_monomial(k, &x);
        let f = Polynomial::from_terms(5, terms.clone());
        assert_eq!(f.len(), terms.len());
    }
}
