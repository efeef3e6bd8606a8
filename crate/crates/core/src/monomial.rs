//! Monomials of `P_s`, weight vectors, spikes and the dyadic arithmetic of degrees.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::{Error, Result};

/// Largest number of variables a [`Monomial`] can carry.
pub const MAX_VARS: usize = 8;

/// Number of binary digits of an exponent, hence the longest weight vector.
const MAX_BITS: usize = 32;

/// Number of ones in the binary expansion of `n`.
#[inline]
pub fn alpha(n: u64) -> u32 {
    n.count_ones()
}

/// The digit `alpha_j(n)` of the binary expansion `n = sum_j alpha_j(n) 2^j`.
#[inline]
pub fn alpha_j(j: u32, n: u32) -> u32 {
    if j >= 32 {
        0
    } else {
        (n >> j) & 1
    }
}

/// Smallest `r` such that `d` is a sum of `r` numbers of the form `2^u - 1`.
///
/// `d` is such a sum exactly when `d + r` is a sum of `r` powers of two, that is when
/// `alpha(d + r) <= r <= d + r`.
pub fn mu(d: u32) -> u32 {
    let d = d as u64;
    (0u64..)
        .find(|&r| alpha(d + r) as u64 <= r)
        .expect("alpha(d + r) <= r for r large") as u32
}

/// `d = r (2^t - 1) + 2^t m` with `r = mu(d)` and `2^t - 1` the smallest exponent of the
/// minimal spike of degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DegreeDecomposition {
    pub r: u32,
    pub t: u32,
    pub m: u64,
}

pub fn decompose_degree(d: u32) -> DegreeDecomposition {
    let r = mu(d);
    if r == 0 {
        return DegreeDecomposition { r: 0, t: 0, m: 0 };
    }
    let u = spike_exponents(d, r);
    let t = *u.last().unwrap();
    let rest = d as u64 - r as u64 * ((1u64 << t) - 1);
    DegreeDecomposition {
        r,
        t,
        m: rest >> t,
    }
}

/// Exponents `u_1 >= ... >= u_r > 0` of the minimal spike of degree `d` on `r = mu(d)`
/// variables, chosen greedily from the largest power down.
fn spike_exponents(d: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    let mut rest = d;
    for left in (1..=r).rev() {
        let u = (1..=32u32)
            .rev()
            .find(|&u| {
                let term = (1u64 << u) - 1;
                term <= rest as u64 && mu(rest - term as u32) < left
            })
            .expect("a representation with mu(d) terms exists");
        out.push(u);
        rest -= ((1u64 << u) - 1) as u32;
    }
    debug_assert_eq!(rest, 0);
    out
}

/// Weight vector `omega(x) = (omega_1, omega_2, ...)` with `omega_j = sum_i alpha_{j-1}(a_i)`.
///
/// Trailing zeros are dropped. Ordered left-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightVector {
    w: [u8; MAX_BITS],
    len: u8,
}

impl WeightVector {
    pub fn new(entries: &[u32]) -> Result<Self> {
        if entries.len() > MAX_BITS || entries.iter().any(|&e| e as usize > MAX_VARS) {
            return Err(Error::InvalidWeight(format!("{entries:?}")));
        }
        let mut w = [0u8; MAX_BITS];
        for (slot, &e) in w.iter_mut().zip(entries) {
            *slot = e as u8;
        }
        let len = entries.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1) as u8;
        Ok(Self { w, len })
    }

    pub fn entries(&self) -> Vec<u32> {
        self.w[..self.len as usize].iter().map(|&e| e as u32).collect()
    }

    /// `omega_j`, one-based. Zero beyond the length.
    pub fn get(&self, j: usize) -> u32 {
        if j == 0 || j > MAX_BITS {
            0
        } else {
            self.w[j - 1] as u32
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `deg omega = sum_j 2^{j-1} omega_j`.
    pub fn degree(&self) -> u64 {
        self.w[..self.len as usize]
            .iter()
            .enumerate()
            .map(|(j, &e)| (e as u64) << j)
            .sum()
    }

    /// `[3,3,1]`, the form used as a JSON object key.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.entries().iter().map(|e| e.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses `3,3,1`, `(3,3,1)` or `[3,3,1]`.
    pub fn parse(text: &str) -> Result<Self> {
        let body = text.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        if body.trim().is_empty() {
            return Self::new(&[]);
        }
        let entries = body
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidWeight(text.to_string()))?;
        Self::new(&entries)
    }
}

impl Ord for WeightVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.w.cmp(&other.w)
    }
}

impl PartialOrd for WeightVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for e in self.entries() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

/// A monomial `x_1^{a_1} ... x_s^{a_s}` in `P_s`.
///
/// `Ord` sorts by degree first and then by the monomial order: weight vectors compared
/// left-lexicographically, ties broken by the exponent tuples compared the same way.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    nvars: u8,
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables {
                got: exps.len(),
                max: MAX_VARS,
            });
        }
        let mut e = [0u32; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Ok(Self {
            exps: e,
            nvars: exps.len() as u8,
        })
    }

    /// The monomial `1` in `P_s`.
    pub fn one(nvars: usize) -> Self {
        Self::new(&vec![0; nvars]).expect("nvars <= MAX_VARS")
    }

    /// `x_1 x_2 ... x_s`.
    pub fn product_of_variables(nvars: usize) -> Self {
        Self::new(&vec![1; nvars]).expect("nvars <= MAX_VARS")
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps[..self.nvars as usize]
    }

    /// Exponent of `x_i`, one-based.
    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i - 1]
    }

    pub(crate) fn exps_mut(&mut self) -> &mut [u32] {
        &mut self.exps[..self.nvars as usize]
    }

    pub fn degree(&self) -> u32 {
        self.exps().iter().sum()
    }

    pub fn weight(&self) -> WeightVector {
        let mut w = [0u8; MAX_BITS];
        let mut len = 0;
        for &a in self.exps() {
            let mut a = a;
            let mut j = 0;
            while a != 0 {
                w[j] += (a & 1) as u8;
                a >>= 1;
                j += 1;
            }
            len = len.max(j);
        }
        WeightVector { w, len: len as u8 }
    }

    /// Number of variables actually occurring.
    pub fn support_size(&self) -> usize {
        self.exps().iter().filter(|&&a| a != 0).count()
    }

    /// Every exponent has the form `2^k - 1`.
    pub fn is_spike(&self) -> bool {
        self.exps().iter().all(|&a| a & a.wrapping_add(1) == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                expected: self.nvars(),
                got: other.nvars(),
            });
        }
        let mut out = *self;
        for (a, b) in out.exps_mut().iter_mut().zip(other.exps()) {
            *a += b;
        }
        Ok(out)
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, k: u32) -> Monomial {
        let mut out = *self;
        for a in out.exps_mut() {
            *a <<= k;
        }
        out
    }

    /// Quotient `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.nvars != other.nvars {
            return None;
        }
        let mut out = *self;
        for (a, &b) in out.exps_mut().iter_mut().zip(other.exps()) {
            *a = a.checked_sub(b)?;
        }
        Some(out)
    }

    fn order_cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.exps().cmp(other.exps()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars
            .cmp(&other.nvars)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.order_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps().iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.exps().serialize(serializer)
    }
}

/// Compares two monomials of the same degree in the monomial order.
pub fn compare(x: &Monomial, y: &Monomial) -> Result<Ordering> {
    if x.nvars != y.nvars {
        return Err(Error::VariableMismatch {
            expected: x.nvars(),
            got: y.nvars(),
        });
    }
    if x.degree() != y.degree() {
        return Err(Error::DegreeMismatch(x.degree(), y.degree()));
    }
    Ok(x.order_cmp(y))
}

/// The minimal spike of degree `d` in `P_s`: `x_1^{2^{u_1}-1} ... x_r^{2^{u_r}-1}` with
/// `r = mu(d)` and `u_1 > ... > u_{r-1} >= u_r > 0`.
pub fn minimal_spike(nvars: usize, d: u32) -> Result<Monomial> {
    check_nvars(nvars)?;
    let r = mu(d);
    if r as usize > nvars {
        return Err(Error::NoSpike {
            nvars,
            degree: d,
            mu: r,
        });
    }
    let mut exps = vec![0u32; nvars];
    for (slot, u) in exps.iter_mut().zip(spike_exponents(d, r)) {
        *slot = ((1u64 << u) - 1) as u32;
    }
    Monomial::new(&exps)
}

/// The spike of weight `omega`: bit `i` of `a_j` is set iff `omega_{i+1} >= j`.
///
/// `omega` has to be non-increasing with `omega_1 <= s`.
pub fn spike_for_weight(nvars: usize, omega: &WeightVector) -> Result<Monomial> {
    check_nvars(nvars)?;
    let w = omega.entries();
    if w.windows(2).any(|p| p[0] < p[1]) || w.first().is_some_and(|&w1| w1 as usize > nvars) {
        return Err(Error::InvalidWeight(omega.to_string()));
    }
    let mut exps = vec![0u32; nvars];
    for (j, a) in exps.iter_mut().enumerate() {
        for (i, &wi) in w.iter().enumerate() {
            if wi as usize > j {
                *a |= 1 << i;
            }
        }
    }
    Monomial::new(&exps)
}

fn check_nvars(nvars: usize) -> Result<()> {
    if nvars > MAX_VARS {
        Err(Error::TooManyVariables {
            got: nvars,
            max: MAX_VARS,
        })
    } else {
        Ok(())
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1; divide first where possible
        let (num, den) = ((n - i) as u128, (i + 1) as u128);
        let g = gcd(acc, den);
        let Some(next) = (acc / g).checked_mul(num / (den / g)) else {
            return u128::MAX;
        };
        acc = next;
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of monomials of degree `d` in `P_s`.
pub fn count_monomials(nvars: usize, d: u32) -> u128 {
    match nvars {
        0 => (d == 0) as u128,
        s => binomial(d as u64 + s as u64 - 1, s as u64 - 1),
    }
}

/// All monomials of degree `d` in `P_s`, in increasing monomial order.
pub fn enumerate_monomials(nvars: usize, d: u32) -> Result<Vec<Monomial>> {
    check_nvars(nvars)?;
    let mut out = Vec::with_capacity(count_monomials(nvars, d).min(1 << 24) as usize);
    let mut exps = vec![0u32; nvars];
    fill(&mut exps, 0, d, &mut out);
    out.sort_unstable_by(|a, b| a.order_cmp(b));
    Ok(out)
}

fn fill(exps: &mut [u32], pos: usize, rest: u32, out: &mut Vec<Monomial>) {
    if exps.is_empty() {
        if rest == 0 {
            out.push(Monomial::one(0));
        }
        return;
    }
    if pos + 1 == exps.len() {
        exps[pos] = rest;
        out.push(Monomial::new(exps).unwrap());
        return;
    }
    for a in 0..=rest {
        exps[pos] = a;
        fill(exps, pos + 1, rest - a, out);
    }
}

/// Number of monomials of weight exactly `omega` in `P_s`.
pub fn count_of_weight(nvars: usize, omega: &WeightVector) -> u128 {
    omega
        .entries()
        .iter()
        .map(|&w| binomial(nvars as u64, w as u64))
        .product()
}

/// All monomials of weight exactly `omega` in `P_s`, in increasing monomial order.
pub fn enumerate_of_weight(nvars: usize, omega: &WeightVector) -> Result<Vec<Monomial>> {
    check_nvars(nvars)?;
    let levels: Vec<Vec<u32>> = omega
        .entries()
        .iter()
        .map(|&w| subsets_of_size(nvars, w as usize))
        .collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    weight_fill(&levels, 0, &mut exps, &mut out);
    out.sort_unstable_by(|a, b| a.order_cmp(b));
    Ok(out)
}

fn weight_fill(levels: &[Vec<u32>], j: usize, exps: &mut [u32], out: &mut Vec<Monomial>) {
    if j == levels.len() {
        out.push(Monomial::new(exps).unwrap());
        return;
    }
    for &mask in &levels[j] {
        for (i, a) in exps.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *a |= 1 << j;
            }
        }
        weight_fill(levels, j + 1, exps, out);
        for a in exps.iter_mut() {
            *a &= !(1 << j);
        }
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}
