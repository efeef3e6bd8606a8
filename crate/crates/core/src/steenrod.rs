//! Steenrod squares on `P_s`, their conjugates, generators of the hit subspace and the
//! Kameko map.
//!
//! `Sq^k(x^n) = C(n, k) x^{n+k}` and the Cartan formula determine the action. The total
//! conjugate `chi(Sq) = sum_k chi(Sq^k)` inverts the total square, which is a ring map, so
//! it is multiplicative as well and `chi(Sq)(x) = x + x^2 + x^4 + ...`.

use serde::Serialize;

use crate::monomial::{count_monomials, enumerate_monomials};
use crate::{Error, Monomial, Polynomial, Result};

/// `Sq^k(x^n)`: the new exponent `n + k`, or `None` when `C(n, k)` is even.
#[inline]
pub fn sq_on_power(k: u32, n: u32) -> Option<u32> {
    // Lucas: C(n, k) is odd iff every binary digit of k is at most the digit of n.
    (k & !n == 0).then(|| n + k)
}

/// `Sq^k(x_var^n)` as a polynomial in `P_s`, `var` one-based.
pub fn sq_on_variable_power(k: u32, nvars: usize, var: usize, n: u32) -> Result<Polynomial> {
    if var == 0 || var > nvars {
        return Err(Error::InvalidIndex {
            index: var,
            max: nvars,
        });
    }
    let mut exps = vec![0; nvars];
    Ok(match sq_on_power(k, n) {
        Some(e) => {
            exps[var - 1] = e;
            Polynomial::from_monomial(Monomial::new(&exps)?)
        }
        None => Polynomial::zero(nvars),
    })
}

/// Terms of `Sq^k(m)`. They are pairwise distinct, so no cancellation happens.
pub fn sq_monomial(k: u32, m: &Monomial) -> Vec<Monomial> {
    let mut out = Vec::new();
    if k > m.degree() {
        return out;
    }
    let mut cur = *m;
    cartan(k, m, 0, &mut cur, &mut out);
    out
}

fn cartan(k: u32, m: &Monomial, pos: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    let n = m.nvars();
    if pos == n {
        if k == 0 {
            out.push(*cur);
        }
        return;
    }
    let a = m.exps()[pos];
    if pos + 1 == n {
        if let Some(e) = sq_on_power(k, a) {
            cur.exps_mut()[pos] = e;
            out.push(*cur);
            cur.exps_mut()[pos] = a;
        }
        return;
    }
    let rest: u32 = m.exps()[pos + 1..].iter().sum();
    // enumerate the binary sub-patterns j of a; only these have C(a, j) odd
    let mut j = a;
    loop {
        if j <= k && k - j <= rest {
            cur.exps_mut()[pos] = a + j;
            cartan(k - j, m, pos + 1, cur, out);
        }
        if j == 0 {
            break;
        }
        j = (j - 1) & a;
    }
    cur.exps_mut()[pos] = a;
}

pub fn sq(k: u32, f: &Polynomial) -> Polynomial {
    f.map_terms(f.nvars(), |m| sq_monomial(k, m))
}

/// Applies `Sq^{k_1} Sq^{k_2} ... Sq^{k_n}`, rightmost first.
pub fn sq_word(word: &[u32], f: &Polynomial) -> Polynomial {
    word.iter().rev().fold(f.clone(), |acc, &k| sq(k, &acc))
}

/// Coefficients of `(1 + x + x^3 + x^7 + ...)^a` up to `x^kmax`, packed into bits.
fn chi_series(a: u32, kmax: u32) -> Vec<u64> {
    let words = kmax as usize / 64 + 1;
    let mut acc = vec![0u64; words];
    acc[0] = 1;
    let mut b = 0;
    while (a >> b) != 0 {
        if (a >> b) & 1 == 1 {
            // factor g(x^{2^b}) = sum_j x^{2^b (2^j - 1)}
            let mut next = vec![0u64; words];
            let mut j = 0;
            loop {
                let shift = ((1u64 << j) - 1) << b;
                if shift > kmax as u64 {
                    break;
                }
                xor_shifted(&mut next, &acc, shift as usize, kmax as usize);
                j += 1;
            }
            acc = next;
        }
        b += 1;
        if b >= 32 {
            break;
        }
    }
    acc
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize, kmax: usize) {
    for bit in 0..=kmax.saturating_sub(shift) {
        if src[bit / 64] >> (bit % 64) & 1 == 1 {
            let t = bit + shift;
            dst[t / 64] ^= 1 << (t % 64);
        }
    }
}

/// Terms of `chi(Sq^k)(m)`.
pub fn chi_sq_monomial(k: u32, m: &Monomial) -> Vec<Monomial> {
    let series: Vec<Vec<u64>> = m.exps().iter().map(|&a| chi_series(a, k)).collect();
    let mut out = Vec::new();
    let mut cur = *m;
    chi_fill(k, m, &series, 0, &mut cur, &mut out);
    out
}

fn chi_fill(
    k: u32,
    m: &Monomial,
    series: &[Vec<u64>],
    pos: usize,
    cur: &mut Monomial,
    out: &mut Vec<Monomial>,
) {
    let n = m.nvars();
    if pos == n {
        if k == 0 {
            out.push(*cur);
        }
        return;
    }
    let a = m.exps()[pos];
    let range: Vec<u32> = if pos + 1 == n { vec![k] } else { (0..=k).collect() };
    for j in range {
        if series[pos][j as usize / 64] >> (j % 64) & 1 == 1 {
            cur.exps_mut()[pos] = a + j;
            chi_fill(k - j, m, series, pos + 1, cur, out);
        }
    }
    cur.exps_mut()[pos] = a;
}

/// `chi(Sq^k)(f)`, the conjugate square, defined by `sum_{i=0}^k Sq^i chi(Sq^{k-i}) = 0`.
pub fn chi_sq(k: u32, f: &Polynomial) -> Polynomial {
    f.map_terms(f.nvars(), |m| chi_sq_monomial(k, m))
}

/// Which squares generate the hit subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorMode {
    /// `Sq^{2^i}` only; these generate the Steenrod algebra.
    #[default]
    PowersOfTwo,
    /// Every `Sq^k`, `k >= 1`.
    All,
}

/// The hit element `Sq^k(source)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HitGenerator {
    pub k: u32,
    pub source: Monomial,
}

impl HitGenerator {
    pub fn terms(&self) -> Vec<Monomial> {
        sq_monomial(self.k, &self.source)
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::from_terms(self.source.nvars(), self.terms())
    }
}

/// Squares used in degree `d`, with the number of source monomials each contributes.
pub fn generator_degrees(d: u32, mode: GeneratorMode) -> Vec<u32> {
    match mode {
        GeneratorMode::PowersOfTwo => (0..32)
            .map(|i| 1u32 << i)
            .take_while(|&k| k <= d)
            .collect(),
        GeneratorMode::All => (1..=d).collect(),
    }
}

/// Number of generators [`hit_generators`] yields.
pub fn count_hit_generators(nvars: usize, d: u32, mode: GeneratorMode) -> u128 {
    generator_degrees(d, mode)
        .into_iter()
        .map(|k| count_monomials(nvars, d - k))
        .sum()
}

/// `Sq^k(m)` for every square `k` of the mode and every monomial `m` of degree `d - k`.
/// The yields span the hit subspace of `(P_s)_d`.
pub fn hit_generators(nvars: usize, d: u32, mode: GeneratorMode) -> Result<Vec<HitGenerator>> {
    let mut out = Vec::new();
    for k in generator_degrees(d, mode) {
        for source in enumerate_monomials(nvars, d - k)? {
            out.push(HitGenerator { k, source });
        }
    }
    Ok(out)
}

/// Kameko's map: `x_1^{2a_1+1} ... x_s^{2a_s+1} -> x_1^{a_1} ... x_s^{a_s}`, zero unless all
/// exponents are odd.
pub fn kameko_psi(m: &Monomial) -> Option<Monomial> {
    if m.exps().iter().all(|a| a & 1 == 1) {
        let mut out = *m;
        for a in out.exps_mut() {
            *a >>= 1;
        }
        Some(out)
    } else {
        None
    }
}

pub fn kameko_psi_polynomial(f: &Polynomial) -> Polynomial {
    f.map_terms(f.nvars(), |m| kameko_psi(m))
}

/// `phi(y) = x_1 ... x_s y^2`.
pub fn kameko_section(y: &Monomial) -> Monomial {
    let mut out = y.frobenius(1);
    for a in out.exps_mut() {
        *a += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    fn p(text: &str) -> Polynomial {
        text.parse().unwrap()
    }

    #[test]
    fn single_powers() {
        assert_eq!(sq_on_power(1, 3), Some(4));
        assert_eq!(sq_on_power(2, 3), Some(5));
        assert_eq!(sq_on_power(3, 2), None);
        for n in 0..64u32 {
            for k in 0..=n + 2 {
                let odd = crate::monomial::binomial(n as u64, k as u64) % 2 == 1;
                assert_eq!(sq_on_power(k, n).is_some(), odd, "C({n},{k})");
            }
        }
        let f = sq_on_variable_power(2, 3, 2, 3).unwrap();
        assert_eq!(f, p("[0,5,0]"));
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(sq(1, &p("[1,1]")), p("[2,1]+[1,2]"));
        assert_eq!(sq(2, &p("[1,3]")), p("[2,4]+[1,5]"));
        let x = m(&[2, 1, 3]);
        assert_eq!(sq_monomial(6, &x), vec![x.frobenius(1)]);
        assert!(sq_monomial(7, &x).is_empty());
        assert_eq!(sq_monomial(0, &x), vec![x]);
    }

    #[test]
    fn chi_small() {
        assert_eq!(chi_sq(1, &p("[1]")), p("[2]"));
        let f = p("[2,1,3]+[1,1,4]");
        assert_eq!(chi_sq(0, &f), f);
    }

    #[test]
    fn kameko() {
        assert_eq!(kameko_psi(&m(&[3, 1, 7, 5, 13])), Some(m(&[1, 0, 3, 2, 6])));
        assert_eq!(kameko_psi(&m(&[2, 1, 1, 1, 1])), None);
        assert_eq!(kameko_section(&Monomial::one(5)), m(&[1, 1, 1, 1, 1]));
        let y = m(&[0, 3, 1, 2]);
        assert_eq!(kameko_psi(&kameko_section(&y)), Some(y));
    }

    #[test]
    fn generator_counts() {
        assert_eq!(count_hit_generators(5, 13, GeneratorMode::PowersOfTwo), 4026);
        assert_eq!(hit_generators(5, 13, GeneratorMode::PowersOfTwo).unwrap().len(), 4026);
        let g = hit_generators(1, 2, GeneratorMode::PowersOfTwo).unwrap();
        let nonzero: Vec<Polynomial> = g
            .iter()
            .map(HitGenerator::polynomial)
            .filter(|f| !f.is_zero())
            .collect();
        assert_eq!(nonzero, vec![p("[2]")]);
    }
}
