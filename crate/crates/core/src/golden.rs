//! Catalogues of admissible monomials in degree `2^{t+2} - 3`, parameterized by `t`, and
//! their comparison with computed bases.
//!
//! The data file has one family per line, `label; index; e_1, ..., e_s; range`, where each
//! `e_j` is built from integers, `2^t` and `2^{t+1}` with `+` and `-`, and the range is
//! `t=k` or `t>=k`. `#` starts a comment. A comment `# amended: ...` records the original
//! text of the entry that follows it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::quotient::{BuildOptions, QuotientBasis};
use crate::steenrod::kameko_section;
use crate::{Error, Monomial, Result, WeightVector};

/// The shipped catalogue.
pub const FAMILIES: &str = include_str!("../data/families.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    Const(i64),
    /// `2^{t + k}`
    Pow(u32),
}

/// A signed sum of constants and powers `2^t`, `2^{t+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    terms: Vec<(bool, Term)>,
    text: String,
}

impl Expr {
    pub fn eval(&self, t: u32) -> i64 {
        self.terms
            .iter()
            .map(|&(neg, term)| {
                let v = match term {
                    Term::Const(c) => c,
                    Term::Pow(k) => 1i64 << (t + k),
                };
                if neg {
                    -v
                } else {
                    v
                }
            })
            .sum()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Range {
    Exactly(u32),
    AtLeast(u32),
}

impl Range {
    pub fn contains(&self, t: u32) -> bool {
        match *self {
            Range::Exactly(k) => t == k,
            Range::AtLeast(k) => t >= k,
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Exactly(k) => write!(f, "t={k}"),
            Range::AtLeast(k) => write!(f, "t>={k}"),
        }
    }
}

/// Which list a family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// `P_5`, some exponent zero.
    Q,
    /// `P_5`, all exponents positive.
    B,
    /// `P_4`, all exponents positive, degree 13.
    U,
    /// `P_4`, all exponents positive, `t >= 4`.
    V,
}

impl Label {
    pub fn nvars(self) -> usize {
        match self {
            Label::Q | Label::B => 5,
            Label::U | Label::V => 4,
        }
    }

    fn parse(text: &str) -> Option<Label> {
        Some(match text {
            "q" => Label::Q,
            "b" => Label::B,
            "u" => Label::U,
            "v" => Label::V,
            _ => return None,
        })
    }

    /// Expected number of monomials at `t`, where known.
    pub fn expected_count(self, t: u32) -> Option<usize> {
        match (self, t) {
            (Label::Q, 1) => Some(45),
            (Label::Q, 2) => Some(145),
            (Label::Q, t) if t >= 3 => Some(195),
            (Label::B, 1) => Some(1),
            (Label::B, 2) => Some(60),
            (Label::B, 3) => Some(260),
            (Label::B, t) if t >= 4 => Some(270),
            (Label::U, 2) => Some(23),
            (Label::V, t) if t >= 4 => Some(33),
            _ => None,
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Label::parse(&text.to_ascii_lowercase()).ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown label {text:?}, expected q, b, u or v"),
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Q => "q",
            Label::B => "b",
            Label::U => "u",
            Label::V => "v",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub label: Label,
    pub index: usize,
    pub exponents: Vec<Expr>,
    pub range: Range,
    pub line: usize,
    /// Original text of an amended entry.
    pub amended: Option<String>,
}

impl Family {
    pub fn instantiate(&self, t: u32) -> Result<Monomial> {
        if !self.range.contains(t) {
            return Err(Error::Golden(format!(
                "{}_{} is stated for {}, not t = {t}",
                self.label, self.index, self.range
            )));
        }
        let exps = self
            .exponents
            .iter()
            .map(|e| {
                let v = e.eval(t);
                u32::try_from(v).map_err(|_| {
                    Error::Golden(format!(
                        "{}_{} (line {}): exponent {e} = {v} at t = {t}",
                        self.label, self.index, self.line
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Monomial::new(&exps)
    }
}

/// `2^{t+2} - 3 = 3(2^t - 1) + 2^t`.
pub fn degree_for(t: u32) -> u32 {
    (1u32 << (t + 2)) - 3
}

/// `omega_(5,t) = (3, ..., 3, 1)` with `t` threes.
pub fn omega_5t(t: u32) -> WeightVector {
    let mut w = vec![3; t as usize];
    w.push(1);
    WeightVector::new(&w).expect("short weight vector")
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    /// column of `text[0]`, one-based
    base: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.base + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn number(&mut self) -> Option<i64> {
        let digits = self.text[self.pos..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return None;
        }
        let v = self.text[self.pos..self.pos + digits].parse().ok()?;
        self.pos += digits;
        Some(v)
    }
}

fn parse_expr(text: &str, line: usize, column: usize) -> Result<Expr> {
    let mut c = Cursor {
        text,
        pos: 0,
        line,
        base: column,
    };
    let mut terms = Vec::new();
    let mut neg = false;
    c.skip_ws();
    if c.done() {
        return Err(c.err("empty exponent"));
    }
    if c.eat("-") {
        neg = true;
        c.skip_ws();
    }
    loop {
        let term = if c.eat("2^{t+1}") {
            Term::Pow(1)
        } else if c.eat("2^{t}") || c.eat("2^t") {
            Term::Pow(0)
        } else if c.text[c.pos..].starts_with("2^") {
            return Err(c.err("only 2^t and 2^{t+1} are allowed"));
        } else if let Some(v) = c.number() {
            Term::Const(v)
        } else {
            return Err(c.err("expected an integer, 2^t or 2^{t+1}"));
        };
        terms.push((neg, term));
        c.skip_ws();
        if c.done() {
            break;
        }
        if c.eat("+") {
            neg = false;
        } else if c.eat("-") {
            neg = true;
        } else {
            return Err(c.err("expected + or -"));
        }
        c.skip_ws();
    }
    Ok(Expr {
        terms,
        text: text.trim().to_string(),
    })
}

fn parse_range(text: &str, line: usize, column: usize) -> Result<Range> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim();
    let err = |offset: usize, message: &str| Error::Parse {
        line,
        column: column + lead + offset,
        message: message.into(),
    };
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix('t')
        .ok_or_else(|| err(0, "range must start with t"))?;
    let (ctor, num): (fn(u32) -> Range, &str) = if let Some(n) = rest.strip_prefix(">=") {
        (Range::AtLeast, n)
    } else if let Some(n) = rest.strip_prefix('=') {
        (Range::Exactly, n)
    } else {
        return Err(err(1, "expected = or >= after t"));
    };
    let k: u32 = num
        .parse()
        .map_err(|_| err(body.len() - num.len(), "expected a non-negative integer"))?;
    if k == 0 {
        return Err(err(body.len() - num.len(), "t starts at 1"));
    }
    Ok(ctor(k))
}

/// A parsed catalogue.
#[derive(Debug, Clone)]
pub struct Catalogue {
    families: Vec<Family>,
}

impl Catalogue {
    pub fn load_default() -> Result<Self> {
        Self::parse(FAMILIES)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut families = Vec::new();
        let mut pending_amend: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim_start();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(orig) = comment.trim_start().strip_prefix("amended:") {
                    pending_amend = Some(orig.trim().to_string());
                }
                continue;
            }
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let mut starts = vec![0];
            starts.extend(content.match_indices(';').map(|(p, _)| p + 1));
            let fields: Vec<&str> = content.split(';').collect();
            let col = |i: usize| starts[i] + 1;
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("expected 4 ';'-separated fields, found {}", fields.len()),
                });
            }
            let label_text = fields[0].trim();
            let label = Label::parse(label_text).ok_or_else(|| Error::Parse {
                line,
                column: col(0) + fields[0].len() - fields[0].trim_start().len(),
                message: format!("unknown label {label_text:?}"),
            })?;
            let index: usize = fields[1].trim().parse().map_err(|_| Error::Parse {
                line,
                column: col(1) + fields[1].len() - fields[1].trim_start().len(),
                message: "index must be a positive integer".into(),
            })?;
            let mut exponents = Vec::new();
            let mut offset = col(2);
            for piece in fields[2].split(',') {
                exponents.push(parse_expr(piece, line, offset)?);
                offset += piece.len() + 1;
            }
            if exponents.len() != label.nvars() {
                return Err(Error::Parse {
                    line,
                    column: col(2),
                    message: format!(
                        "label {label} needs {} exponents, found {}",
                        label.nvars(),
                        exponents.len()
                    ),
                });
            }
            let range = parse_range(fields[3], line, col(3))?;
            families.push(Family {
                label,
                index,
                exponents,
                range,
                line,
                amended: pending_amend.take(),
            });
        }
        Ok(Self { families })
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn amended(&self) -> impl Iterator<Item = &Family> {
        self.families.iter().filter(|f| f.amended.is_some())
    }

    /// Monomials of `label` at `t`, by index.
    ///
    /// Checks that exactly one family per index applies, exponents are non-negative,
    /// monomials are distinct, have degree `2^{t+2} - 3`, and for `q` and `b` weight
    /// `omega_(5,t)`. The one exception to the weight is the `b` entry `x_1 ... x_5` at
    /// `t = 1`, whose weight is `(5)`.
    pub fn instantiate(&self, label: Label, t: u32) -> Result<BTreeMap<usize, Monomial>> {
        let applicable: Vec<&Family> = self
            .families
            .iter()
            .filter(|f| f.label == label && f.range.contains(t))
            .collect();
        if applicable.is_empty() {
            let (min, max) = self.t_bounds(label);
            let range = match (min, max) {
                (min, u32::MAX) => format!("t >= {min}"),
                (min, max) if min == max => format!("t = {min}"),
                (min, max) => format!("{min} <= t <= {max}"),
            };
            return Err(Error::OutOfRange { t, range });
        }
        let d = degree_for(t);
        let omega = omega_5t(t);
        let mut out = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for f in applicable {
            let m = f.instantiate(t)?;
            let where_ = || format!("{label}_{} (line {}) at t = {t}", f.index, f.line);
            if m.degree() != d {
                return Err(Error::Golden(format!(
                    "{}: degree {} instead of {d}",
                    where_(),
                    m.degree()
                )));
            }
            if matches!(label, Label::Q | Label::B) && m.weight() != omega {
                let kameko_image = label == Label::B && m.exps().iter().all(|a| a % 2 == 1);
                if !kameko_image {
                    return Err(Error::Golden(format!(
                        "{}: weight {} instead of {omega}",
                        where_(),
                        m.weight()
                    )));
                }
            }
            let positive = m.exps().iter().all(|&a| a > 0);
            if (label == Label::Q) == positive {
                return Err(Error::Golden(format!("{}: wrong support {m}", where_())));
            }
            if out.insert(f.index, m).is_some() {
                return Err(Error::Golden(format!("{}: index given twice", where_())));
            }
            if !seen.insert(m) {
                return Err(Error::Golden(format!("{}: repeats {m}", where_())));
            }
        }
        if let Some(expected) = label.expected_count(t) {
            if out.len() != expected {
                return Err(Error::Golden(format!(
                    "{label} at t = {t}: {} monomials, expected {expected}",
                    out.len()
                )));
            }
        }
        Ok(out)
    }

    pub fn instantiate_set(&self, label: Label, t: u32) -> Result<BTreeSet<Monomial>> {
        Ok(self.instantiate(label, t)?.into_values().collect())
    }

    /// Smallest `t` any family of `label` applies to, and the largest exact `t` stated
    /// (`u32::MAX` when an open range exists).
    fn t_bounds(&self, label: Label) -> (u32, u32) {
        let mut min = u32::MAX;
        let mut max = 0;
        for f in self.families.iter().filter(|f| f.label == label) {
            match f.range {
                Range::Exactly(k) => {
                    min = min.min(k);
                    max = max.max(k);
                }
                Range::AtLeast(k) => {
                    min = min.min(k);
                    max = u32::MAX;
                }
            }
        }
        (min, max)
    }
}

/// The two sides of a set comparison.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SetComparison {
    pub golden: usize,
    pub computed: usize,
    /// Computed but absent from the catalogue.
    pub missing: Vec<Monomial>,
    /// In the catalogue but not computed.
    pub unexpected: Vec<Monomial>,
}

impl SetComparison {
    pub fn new(golden: &BTreeSet<Monomial>, computed: &BTreeSet<Monomial>) -> Self {
        Self {
            golden: golden.len(),
            computed: computed.len(),
            missing: computed.difference(golden).copied().collect(),
            unexpected: golden.difference(computed).copied().collect(),
        }
    }

    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AmendedEntry {
    pub label: Label,
    pub index: usize,
    pub line: usize,
    pub original: String,
    pub amended: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub t: u32,
    pub degree: u32,
    /// `q` against the admissible monomials with some exponent zero.
    pub q: SetComparison,
    /// `b` against the admissible monomials with all exponents positive and weight
    /// `omega_(5,t)`; at `t = 1` against all admissible monomials with positive exponents.
    pub b: SetComparison,
    /// `u` against the admissible monomials of `P_4^+` in degree 13, at `t = 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<SetComparison>,
    /// `dim (QP_5)_{2^{t+1} - 4}`.
    pub kameko_target_dim: usize,
    /// `dim (QP_5)_d` from the elimination.
    pub computed_dim: usize,
    /// `|q| + |b| + dim (QP_5)_{2^{t+1}-4}`, or `|q| + |b|` at t = 1.
    pub golden_dim: usize,
    pub amended: Vec<AmendedEntry>,
    pub pass: bool,
}

fn positive(m: &Monomial) -> bool {
    m.exps().iter().all(|&a| a > 0)
}

/// Compares the catalogue at `t` with the computed admissible bases.
pub fn verify(catalogue: &Catalogue, t: u32, options: &BuildOptions) -> Result<VerifyReport> {
    let d = degree_for(t);
    let omega = omega_5t(t);
    let q_gold = catalogue.instantiate_set(Label::Q, t)?;
    let b_gold = catalogue.instantiate_set(Label::B, t)?;
    let full = QuotientBasis::build(5, d, options)?;
    let lower = QuotientBasis::build(5, (1u32 << (t + 1)) - 4, options)?;

    let q_comp: BTreeSet<Monomial> = full.admissible().iter().filter(|m| !positive(m)).copied().collect();
    let b_comp: BTreeSet<Monomial> = full
        .admissible()
        .iter()
        .filter(|m| positive(m) && (t == 1 || m.weight() == omega))
        .copied()
        .collect();
    let q = SetComparison::new(&q_gold, &q_comp);
    let b = SetComparison::new(&b_gold, &b_comp);

    // the rest of the basis has to be the image of the lower degree under x -> x_1...x_5 x^2
    let image: BTreeSet<Monomial> = lower.admissible().iter().map(kameko_section).collect();
    let rest: BTreeSet<Monomial> = full
        .admissible()
        .iter()
        .filter(|m| !q_comp.contains(m) && !b_comp.contains(m))
        .copied()
        .collect();
    let image_ok = if t == 1 {
        rest.is_empty()
    } else {
        rest == image
    };

    let u = if t == 2 {
        let u_gold = catalogue.instantiate_set(Label::U, 2)?;
        let p4 = QuotientBasis::build(4, 13, options)?;
        let u_comp: BTreeSet<Monomial> = p4
            .admissible()
            .iter()
            .filter(|m| positive(m) && m.weight() == omega)
            .copied()
            .collect();
        Some(SetComparison::new(&u_gold, &u_comp))
    } else {
        None
    };

    let golden_dim = q_gold.len() + b_gold.len() + if t == 1 { 0 } else { lower.dim() };
    let amended = catalogue
        .amended()
        .filter(|f| matches!(f.label, Label::Q | Label::B) && f.range.contains(t))
        .map(|f| AmendedEntry {
            label: f.label,
            index: f.index,
            line: f.line,
            original: f.amended.clone().unwrap_or_default(),
            amended: f
                .exponents
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        })
        .collect();
    let pass = q.matches()
        && b.matches()
        && u.as_ref().is_none_or(SetComparison::matches)
        && image_ok
        && golden_dim == full.dim();
    Ok(VerifyReport {
        t,
        degree: d,
        q,
        b,
        u,
        kameko_target_dim: lower.dim(),
        computed_dim: full.dim(),
        golden_dim,
        amended,
        pass,
    })
}

/// Checks the `v` list against the computed `B_4^+` in degree `2^{t+2} - 3`.
pub fn verify_v(catalogue: &Catalogue, t: u32, options: &BuildOptions) -> Result<SetComparison> {
    let gold = catalogue.instantiate_set(Label::V, t)?;
    let q = QuotientBasis::build(4, degree_for(t), options)?;
    let comp: BTreeSet<Monomial> = q.admissible().iter().filter(|m| positive(m)).copied().collect();
    Ok(SetComparison::new(&gold, &comp))
}
