//! Polynomials over `F_2` as sets of monomials.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Monomial, Result};

/// A polynomial in `P_s`: a sorted list of distinct monomials.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Polynomial {
    #[serde(skip)]
    nvars: u8,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars: nvars as u8,
            terms: Vec::new(),
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self {
            nvars: m.nvars() as u8,
            terms: vec![m],
        }
    }

    /// Sum of the given terms; repeated terms cancel in pairs.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        debug_assert!(terms.iter().all(|t| t.nvars() == nvars));
        cancel_pairs(&mut terms);
        Self {
            nvars: nvars as u8,
            terms,
        }
    }

    /// Like [`Polynomial::from_terms`] but rejects inhomogeneous input and mixed variable counts.
    pub fn homogeneous(nvars: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let terms: Vec<Monomial> = terms.into_iter().collect();
        if let Some(t) = terms.iter().find(|t| t.nvars() != nvars) {
            return Err(Error::VariableMismatch {
                expected: nvars,
                got: t.nvars(),
            });
        }
        if let Some(first) = terms.first() {
            let d = first.degree();
            if terms.iter().any(|t| t.degree() != d) {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(Self::from_terms(nvars, terms))
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the terms, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|u| u.degree() == t.degree()),
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    /// Multiplies every term by `m`.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.mul(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(self.nvars(), terms))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Ok(Self::from_terms(self.nvars(), terms))
    }

    /// Applies `m -> f(m)` to every term and sums.
    pub fn map_terms<F, I>(&self, nvars: usize, mut f: F) -> Polynomial
    where
        F: FnMut(&Monomial) -> I,
        I: IntoIterator<Item = Monomial>,
    {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.extend(f(t));
        }
        Self::from_terms(nvars, terms)
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        let mut merged = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        self.terms = merged;
        if self.nvars == 0 {
            self.nvars = rhs.nvars;
        }
    }
}

/// Sorts and removes terms occurring an even number of times.
pub(crate) fn cancel_pairs(terms: &mut Vec<Monomial>) {
    terms.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < terms.len() {
        let mut j = i;
        while j < terms.len() && terms[j] == terms[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            terms[out] = terms[i];
            out += 1;
        }
        i = j;
    }
    terms.truncate(out);
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses `[2,2,1,1,7]+[1,2,2,1,7]`. `0` is the zero polynomial of unknown arity.
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut nvars = None;
        let mut offset = 0;
        for piece in text.split('+') {
            let column = offset + piece.len() - piece.trim_start().len() + 1;
            offset += piece.len() + 1;
            let piece = piece.trim();
            if piece == "0" {
                continue;
            }
            let err = |message: &str| Error::Parse {
                line: 1,
                column,
                message: message.to_string(),
            };
            let body = piece
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| err("expected a bracketed exponent list like [1,2,0]"))?;
            let exps = body
                .split(',')
                .map(|e| e.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err("exponents must be non-negative integers"))?;
            match nvars {
                None => nvars = Some(exps.len()),
                Some(n) if n != exps.len() => return Err(err("terms have different lengths")),
                _ => {}
            }
            terms.push(Monomial::new(&exps)?);
        }
        Polynomial::homogeneous(nvars.unwrap_or(0), terms)
    }
}
