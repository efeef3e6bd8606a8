//! The action of `Sigma_s` and `GL_s` on `QP_s` and on the weight subquotients
//! `QP_s(omega)`, and their invariants.
//!
//! `Sigma_s` is generated by the transpositions `tau_i = (i, i+1)`, `i < s`, and `GL_s` by
//! these together with the transvection `tau_s: x_1 -> x_1 + x_2`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::gf2::{BitRow, Gf2Matrix};
use crate::quotient::QuotientBasis;
use crate::{Error, Monomial, Polynomial, Result, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Group {
    Sigma,
    #[serde(rename = "GL")]
    GL,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Sigma => "Sigma",
            Group::GL => "GL",
        })
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigma" | "symmetric" => Ok(Group::Sigma),
            "gl" => Ok(Group::GL),
            _ => Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unknown group {s:?}, expected Sigma or GL"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupGenerator {
    /// Swaps `x_i` and `x_{i+1}`.
    Transposition(usize),
    /// `x_1 -> x_1 + x_2`.
    Transvection,
}

impl GroupGenerator {
    /// `tau_i` in `GL_s`.
    pub fn tau(i: usize, s: usize) -> Result<Self> {
        match i {
            _ if i == 0 || i > s => Err(Error::InvalidIndex { index: i, max: s }),
            _ if i < s => Ok(GroupGenerator::Transposition(i)),
            _ => Ok(GroupGenerator::Transvection),
        }
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let s = m.nvars();
        match *self {
            GroupGenerator::Transposition(i) => {
                let mut out = *m;
                out.exps_mut().swap(i - 1, i);
                Polynomial::from_monomial(out)
            }
            // GL_1 is trivial
            GroupGenerator::Transvection if s < 2 => Polynomial::from_monomial(*m),
            GroupGenerator::Transvection => {
                let a = m.exps()[0];
                let mut terms = Vec::new();
                // (x_1 + x_2)^a = sum of x_1^j x_2^{a-j} over binary sub-patterns j of a
                let mut j = a;
                loop {
                    let mut t = *m;
                    t.exps_mut()[0] = j;
                    t.exps_mut()[1] += a - j;
                    terms.push(t);
                    if j == 0 {
                        break;
                    }
                    j = (j - 1) & a;
                }
                Polynomial::from_terms(s, terms)
            }
        }
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        f.map_terms(f.nvars(), |m| self.apply_monomial(m).into_terms())
    }
}

/// `tau_i(f)` for `1 <= i <= s`.
pub fn tau(i: usize, f: &Polynomial) -> Result<Polynomial> {
    Ok(GroupGenerator::tau(i, f.nvars())?.apply(f))
}

/// Generators of the group acting on `P_s`.
pub fn generators(s: usize, group: Group) -> Vec<GroupGenerator> {
    let mut out: Vec<GroupGenerator> = (1..s).map(GroupGenerator::Transposition).collect();
    if group == Group::GL {
        out.push(GroupGenerator::Transvection);
    }
    out
}

/// The basis of the space acted on: all admissible monomials, or those of weight `omega`.
pub fn space_basis(q: &QuotientBasis, omega: Option<&WeightVector>) -> Vec<Monomial> {
    match omega {
        None => q.admissible().to_vec(),
        Some(w) => q.admissible_of_weight(w),
    }
}

/// Coordinates of `[f]` in the space, `f` reduced in the full quotient first. For a
/// weight subquotient, coordinates of lower weight are dropped; coordinates of higher
/// weight are an error.
pub fn coordinates(q: &QuotientBasis, omega: Option<&WeightVector>, f: &Polynomial) -> Result<BitRow> {
    let coords = q.reduce(f)?;
    let Some(w) = omega else {
        return Ok(coords);
    };
    let adm = q.admissible();
    let mut kept = Vec::new();
    let mut k = 0;
    for (idx, m) in adm.iter().enumerate() {
        let mw = m.weight();
        if mw == *w {
            if coords.get(idx) {
                kept.push(k);
            }
            k += 1;
        } else if mw > *w && coords.get(idx) {
            return Err(Error::InvalidWeight(format!(
                "class reduces to {m} of weight {mw}, above {w}"
            )));
        }
    }
    Ok(BitRow::from_indices(k, kept))
}

/// Matrix of `g` on the space; column `k` is the image of the `k`-th basis monomial.
pub fn action_matrix(g: &GroupGenerator, q: &QuotientBasis, omega: Option<&WeightVector>) -> Result<Gf2Matrix> {
    let basis = space_basis(q, omega);
    let cols = basis
        .iter()
        .map(|m| coordinates(q, omega, &g.apply_monomial(m)))
        .collect::<Result<Vec<_>>>()?;
    Gf2Matrix::from_columns(basis.len(), &cols)
}

/// Basis of the common fixed space of the matrices, from one kernel computation of the
/// stacked blocks `M - I`.
pub fn fixed_points(n: usize, matrices: &[Gf2Matrix]) -> Result<Vec<BitRow>> {
    let id = Gf2Matrix::identity(n);
    let mut rows = Vec::new();
    for m in matrices {
        rows.extend(m.add(&id)?.into_rows());
    }
    Ok(Gf2Matrix::from_rows(n, rows)?.kernel())
}

/// Whether `[f]` is fixed by every generator of the group.
pub fn is_invariant(q: &QuotientBasis, omega: Option<&WeightVector>, group: Group, f: &Polynomial) -> Result<bool> {
    let v = coordinates(q, omega, f)?;
    for g in generators(q.nvars(), group) {
        if coordinates(q, omega, &g.apply(f))? != v {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub space: String,
    pub group: Group,
    pub dim: usize,
    /// Coefficients of each invariant over `admissible`.
    pub basis: Vec<Vec<u8>>,
    pub admissible: Vec<Monomial>,
    /// The invariants as sums of admissible monomials.
    pub polynomials: Vec<String>,
}

pub fn invariants(q: &QuotientBasis, omega: Option<&WeightVector>, group: Group) -> Result<InvariantReport> {
    let basis = space_basis(q, omega);
    let matrices = generators(q.nvars(), group)
        .iter()
        .map(|g| action_matrix(g, q, omega))
        .collect::<Result<Vec<_>>>()?;
    let fixed = fixed_points(basis.len(), &matrices)?;
    let space = match omega {
        None => format!("(QP_{})_{}", q.nvars(), q.degree()),
        Some(w) => format!("QP_{}{}", q.nvars(), w),
    };
    let polynomials = fixed
        .iter()
        .map(|v| Polynomial::from_terms(q.nvars(), v.ones().map(|i| basis[i])).to_string())
        .collect();
    Ok(InvariantReport {
        space,
        group,
        dim: fixed.len(),
        basis: fixed
            .iter()
            .map(|v| v.to_bools().into_iter().map(u8::from).collect())
            .collect(),
        admissible: basis,
        polynomials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::build_quotient;

    fn p(text: &str) -> Polynomial {
        text.parse().unwrap()
    }

    #[test]
    fn generators_act() {
        assert_eq!(tau(1, &p("[1,0,0,0,0]")).unwrap(), p("[0,1,0,0,0]"));
        assert_eq!(tau(5, &p("[2,0,0,0,0]")).unwrap(), p("[2,0,0,0,0]+[0,2,0,0,0]"));
        assert_eq!(tau(5, &p("[1,1,0,0,0]")).unwrap(), p("[1,1,0,0,0]+[0,2,0,0,0]"));
        assert_eq!(tau(5, &p("[3,0,0,0,0]")).unwrap(), p("[3,0,0,0,0]+[2,1,0,0,0]+[1,2,0,0,0]+[0,3,0,0,0]"));
        assert!(tau(6, &p("[1,0,0,0,0]")).is_err());
        assert_eq!(generators(5, Group::Sigma).len(), 4);
        assert_eq!(generators(5, Group::GL).len(), 5);
        assert_eq!("gl".parse::<Group>().unwrap(), Group::GL);
    }

    #[test]
    fn one_variable() {
        let q = build_quotient(1, 1).unwrap();
        let r = invariants(&q, None, Group::GL).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(action_matrix(&GroupGenerator::Transvection, &q, None).unwrap(), Gf2Matrix::identity(1));
    }

    #[test]
    fn degree_five() {
        let q = build_quotient(5, 5).unwrap();
        assert_eq!(invariants(&q, None, Group::GL).unwrap().dim, 0);
        for g in generators(5, Group::Sigma) {
            let m = action_matrix(&g, &q, None).unwrap();
            assert_eq!(m.mul(&m).unwrap(), Gf2Matrix::identity(46));
        }
    }
}
