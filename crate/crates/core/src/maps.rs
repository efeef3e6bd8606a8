//! Maps between `P_{s-1}` and `P_s`: the insertions `rho_i`, the maps `phi_(i;I)` and the
//! substitutions `p_(i;I)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::monomial::alpha_j;
use crate::{Error, Monomial, Polynomial, Result, MAX_VARS};

/// An element `(i; I)` of `N_s`: `1 <= i < i_1 < ... < i_r <= s` with `r < s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    s: usize,
    i: usize,
    set: Vec<usize>,
}

impl IndexPair {
    pub fn new(s: usize, i: usize, set: &[usize]) -> Result<Self> {
        if s > MAX_VARS {
            return Err(Error::TooManyVariables {
                got: s,
                max: MAX_VARS,
            });
        }
        if i == 0 || i > s {
            return Err(Error::InvalidIndex { index: i, max: s });
        }
        let mut prev = i;
        for &k in set {
            if k <= prev || k > s {
                return Err(Error::InvalidIndex { index: k, max: s });
            }
            prev = k;
        }
        Ok(Self {
            s,
            i,
            set: set.to_vec(),
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// `l(I)`.
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// All of `N_s`, ordered by `i` and then by `I` as a tuple.
    pub fn all(s: usize) -> Vec<IndexPair> {
        let mut out = Vec::new();
        for i in 1..=s {
            let above: Vec<usize> = (i + 1..=s).collect();
            for mask in 0u32..1 << above.len() {
                let set: Vec<usize> = above
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &k)| k)
                    .collect();
                out.push(IndexPair { s, i, set });
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self.set.iter().map(|k| k.to_string()).collect();
        write!(f, "({}; {})", self.i, set.join(","))
    }
}

/// `rho_i(m)`: a zero exponent is inserted in position `i`.
pub fn rho_monomial(i: usize, m: &Monomial) -> Result<Monomial> {
    let s = m.nvars() + 1;
    if i == 0 || i > s {
        return Err(Error::InvalidIndex { index: i, max: s });
    }
    let mut exps = m.exps().to_vec();
    exps.insert(i - 1, 0);
    Monomial::new(&exps)
}

/// `rho_i: P_{s-1} -> P_s`.
pub fn rho(i: usize, f: &Polynomial) -> Result<Polynomial> {
    let terms = f
        .terms()
        .iter()
        .map(|m| rho_monomial(i, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_terms(f.nvars() + 1, terms))
}

/// The `u` with which `m` in `P_{s-1}` is compatible with `(i; I)`, if any. Always `1`
/// when `I` is empty.
pub fn u_compatible(m: &Monomial, pair: &IndexPair) -> Option<usize> {
    let r = pair.len();
    if r == 0 {
        return Some(1);
    }
    let full = (1u32 << r) - 1;
    // a_{i_t - 1} in P_{s-1}
    let a = |t: usize| m.exponent(pair.set[t - 1] - 1);
    let digit = |e: u32, j: usize| alpha_j(j as u32, e) == 1;
    (1..=r).find(|&u| {
        a(u) > full
            && (1..u).all(|t| a(t) == full)
            && (1..=u).all(|t| digit(a(u), r - t))
            && (u + 1..=r).all(|t| digit(a(t), r - t))
    })
}

/// `phi_(i;I)(m) = x_i^{2^r - 1} rho_i(m) / x_(I,u)`, or `None` when `m` is not compatible.
pub fn phi(pair: &IndexPair, m: &Monomial) -> Result<Option<Monomial>> {
    if m.nvars() + 1 != pair.s {
        return Err(Error::VariableMismatch {
            expected: pair.s - 1,
            got: m.nvars(),
        });
    }
    let Some(u) = u_compatible(m, pair) else {
        return Ok(None);
    };
    let r = pair.len();
    let mut out = rho_monomial(pair.i, m)?;
    if r == 0 {
        return Ok(Some(out));
    }
    let exps = out.exps_mut();
    exps[pair.i - 1] += (1 << r) - 1;
    let head: u32 = (1..=u).map(|t| 1u32 << (r - t)).sum();
    let mut divide = |var: usize, by: u32| {
        let e = &mut exps[var - 1];
        assert!(*e >= by, "phi: x_(I,u) does not divide");
        *e -= by;
    };
    divide(pair.set[u - 1], head);
    for t in u + 1..=r {
        divide(pair.set[t - 1], 1 << (r - t));
    }
    Ok(Some(out))
}

/// `(y_1 + ... + y_n)^a` over `F_2`: one exponent vector per way of distributing the
/// binary digits of `a` among the `n` summands.
fn power_of_sum(a: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    if n == 0 {
        return if a == 0 { out } else { Vec::new() };
    }
    for b in 0..32 {
        if a >> b & 1 == 0 {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |k| {
                    let mut w = v.clone();
                    w[k] += 1 << b;
                    w
                })
            })
            .collect();
    }
    out
}

/// `p_(i;I)` on a monomial of `P_s`.
pub fn p_monomial(pair: &IndexPair, m: &Monomial) -> Result<Polynomial> {
    if m.nvars() != pair.s {
        return Err(Error::VariableMismatch {
            expected: pair.s,
            got: m.nvars(),
        });
    }
    let s = pair.s;
    let mut base = m.exps().to_vec();
    let a = base.remove(pair.i - 1);
    let mut terms = Vec::new();
    for split in power_of_sum(a, pair.len()) {
        let mut exps = base.clone();
        for (&k, e) in pair.set.iter().zip(split) {
            exps[k - 2] += e;
        }
        terms.push(Monomial::new(&exps)?);
    }
    Ok(Polynomial::from_terms(s - 1, terms))
}

/// `p_(i;I): P_s -> P_{s-1}`, `x_i -> sum_{k in I} x_{k-1}`, other variables shifted down.
pub fn p_map(pair: &IndexPair, f: &Polynomial) -> Result<Polynomial> {
    let mut out = Polynomial::zero(pair.s - 1);
    for m in f.terms() {
        out += &p_monomial(pair, m)?;
    }
    Ok(out)
}

fn check_source<'a>(s: usize, u: impl IntoIterator<Item = &'a Monomial>) -> Result<Vec<&'a Monomial>> {
    let u: Vec<&Monomial> = u.into_iter().collect();
    if let Some(m) = u.iter().find(|m| m.nvars() + 1 != s) {
        return Err(Error::VariableMismatch {
            expected: s - 1,
            got: m.nvars(),
        });
    }
    Ok(u)
}

/// `Phi^0(U)`: the union of `rho_i(U)` over `1 <= i <= s`.
pub fn phi0_set<'a>(s: usize, u: impl IntoIterator<Item = &'a Monomial>) -> Result<BTreeSet<Monomial>> {
    let u = check_source(s, u)?;
    let mut out = BTreeSet::new();
    for i in 1..=s {
        for m in &u {
            out.insert(rho_monomial(i, m)?);
        }
    }
    Ok(out)
}

/// `Phi^+(U)`: the nonzero `phi_(i;I)(U)` with `l(I) > 0` and all exponents positive.
pub fn phi_plus_set<'a>(s: usize, u: impl IntoIterator<Item = &'a Monomial>) -> Result<BTreeSet<Monomial>> {
    let u = check_source(s, u)?;
    let mut out = BTreeSet::new();
    for pair in IndexPair::all(s).iter().filter(|p| !p.is_empty()) {
        for m in &u {
            if let Some(x) = phi(pair, m)? {
                if x.exps().iter().all(|&e| e > 0) {
                    out.insert(x);
                }
            }
        }
    }
    Ok(out)
}
