//! The quotient `QP_s = P_s / A^+ P_s` in a single degree and its admissible basis.
//!
//! Monomials of a degree are laid out as columns in *decreasing* order, so that pivoting
//! on the lowest set bit pivots on the largest monomial of a row. Once every hit
//! generator is inserted, a monomial is inadmissible exactly when its column is a pivot:
//! the pivot row is then a hit element whose leading term is that monomial. The remaining
//! columns are the admissible monomials, and reducing a vector against the echelon
//! writes its class in terms of admissible monomials not larger than its leading term.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::gf2::{intersect, rank_of, BitRow, Gf2Matrix, IncrementalSpan};
use crate::monomial::{count_monomials, enumerate_monomials, minimal_spike, mu};
use crate::steenrod::{
    hit_generators, kameko_psi, kameko_section, sq_monomial, GeneratorMode, HitGenerator,
};
use crate::{Error, Monomial, Polynomial, Result, WeightVector, MAX_VARS};

/// Default bound on the number of monomials in a degree space.
pub const DEFAULT_MAX_SPACE: u128 = 1 << 22;

const NONE: u32 = u32::MAX;
const CHUNK: usize = 4096;

/// How the dimension of `(QP_s)_d` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// One elimination over the whole degree.
    #[default]
    Direct,
    /// Kernel of the Kameko map from a Singer-prefiltered elimination, plus the
    /// dimension in degree `(d - s)/2` computed recursively.
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub generators: GeneratorMode,
    /// Drop monomials below the weight of the minimal spike before eliminating.
    pub prefilter: bool,
    pub max_space: u128,
    /// Record each echelon row as a combination of generators.
    pub track: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            generators: GeneratorMode::PowersOfTwo,
            prefilter: false,
            max_space: DEFAULT_MAX_SPACE,
            track: false,
        }
    }
}

impl BuildOptions {
    pub fn prefiltered() -> Self {
        Self {
            prefilter: true,
            ..Self::default()
        }
    }
}

fn guard(nvars: usize, d: u32, max_space: u128) -> Result<()> {
    if nvars > MAX_VARS {
        return Err(Error::TooManyVariables {
            got: nvars,
            max: MAX_VARS,
        });
    }
    let required = count_monomials(nvars, d);
    if required > max_space {
        return Err(Error::ResourceLimit {
            required,
            limit: max_space,
        });
    }
    Ok(())
}

/// All monomials of degree `d` in `P_s`, in increasing order, with reverse lookup.
#[derive(Debug, Clone)]
pub struct DegreeSpace {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSpace {
    pub fn new(nvars: usize, degree: u32, max_space: u128) -> Result<Self> {
        guard(nvars, degree, max_space)?;
        let monomials = enumerate_monomials(nvars, degree)?;
        let index = monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(Self {
            nvars,
            degree,
            monomials,
            index,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    fn check(&self, m: &Monomial) -> Result<usize> {
        if m.nvars() != self.nvars {
            return Err(Error::VariableMismatch {
                expected: self.nvars,
                got: m.nvars(),
            });
        }
        self.index_of(m)
            .ok_or(Error::DegreeMismatch(m.degree(), self.degree))
    }
}

/// Singer's criterion: a monomial whose weight is below that of the minimal spike of its
/// degree is hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prefilter {
    Hit,
    Unknown,
}

pub fn singer_prefilter(m: &Monomial) -> Result<Prefilter> {
    let z = minimal_spike(m.nvars(), m.degree())?;
    Ok(if m.weight() < z.weight() {
        Prefilter::Hit
    } else {
        Prefilter::Unknown
    })
}

/// Wood: `(QP_s)_d = 0` when `mu(d) > s`.
pub fn wood_vanishes(nvars: usize, d: u32) -> bool {
    mu(d) as usize > nvars
}

/// The admissible monomial basis of `(QP_s)_d` with the echelon of the hit subspace.
#[derive(Clone)]
pub struct QuotientBasis {
    space: DegreeSpace,
    options: BuildOptions,
    /// column of each monomial index, `NONE` when prefiltered away
    col_of: Vec<u32>,
    /// monomial index of each column
    monomial_of: Vec<u32>,
    hit: IncrementalSpan,
    admissible: Vec<Monomial>,
    /// admissible position of each column, `NONE` for pivot columns
    adm_of_col: Vec<u32>,
    adm_position: HashMap<Monomial, usize>,
    generators: Vec<HitGenerator>,
}

impl QuotientBasis {
    pub fn build(nvars: usize, d: u32, options: &BuildOptions) -> Result<Self> {
        let space = DegreeSpace::new(nvars, d, options.max_space)?;
        let n = space.len();
        let mut keep: Vec<bool> = vec![true; n];
        let mut skip_elimination = false;
        if options.prefilter {
            match minimal_spike(nvars, d) {
                Ok(z) => {
                    let w = z.weight();
                    for (k, m) in keep.iter_mut().zip(space.monomials()) {
                        *k = m.weight() >= w;
                    }
                }
                Err(Error::NoSpike { .. }) => {
                    keep.iter_mut().for_each(|k| *k = false);
                    skip_elimination = true;
                }
                Err(e) => return Err(e),
            }
        }
        let mut col_of = vec![NONE; n];
        let mut monomial_of = Vec::new();
        for idx in (0..n).rev() {
            if keep[idx] {
                col_of[idx] = monomial_of.len() as u32;
                monomial_of.push(idx as u32);
            }
        }
        let ncols = monomial_of.len();
        let mut hit = if options.track {
            IncrementalSpan::with_tracking(ncols)
        } else {
            IncrementalSpan::new(ncols)
        };
        let mut generators = Vec::new();
        if !skip_elimination && d > 0 {
            let gens = hit_generators(nvars, d, options.generators)?;
            for chunk in gens.chunks(CHUNK) {
                let rows: Vec<BitRow> = chunk
                    .par_iter()
                    .map(|g| {
                        let cols = g.terms().into_iter().filter_map(|t| {
                            let c = col_of[space.index[&t]];
                            (c != NONE).then_some(c as usize)
                        });
                        BitRow::from_indices(ncols, cols)
                    })
                    .collect();
                for row in rows {
                    // with tracking every generator is inserted so indices line up
                    if options.track || !row.is_zero() {
                        hit.insert(row)?;
                    }
                }
            }
            if options.track {
                generators = gens;
            }
        }
        let mut adm_of_col = vec![NONE; ncols];
        let mut admissible = Vec::new();
        for col in (0..ncols).rev() {
            if !hit.is_pivot(col) {
                adm_of_col[col] = admissible.len() as u32;
                admissible.push(space.monomials[monomial_of[col] as usize]);
            }
        }
        let adm_position = admissible.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(Self {
            space,
            options: *options,
            col_of,
            monomial_of,
            hit,
            admissible,
            adm_of_col,
            adm_position,
            generators,
        })
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars
    }

    pub fn degree(&self) -> u32 {
        self.space.degree
    }

    pub fn space(&self) -> &DegreeSpace {
        &self.space
    }

    pub fn options(&self) -> &BuildOptions {
        &self.options
    }

    pub fn dim(&self) -> usize {
        self.admissible.len()
    }

    /// Admissible monomials in increasing order.
    pub fn admissible(&self) -> &[Monomial] {
        &self.admissible
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.adm_position.get(m).copied()
    }

    pub fn is_admissible(&self, m: &Monomial) -> Result<bool> {
        self.space.check(m)?;
        Ok(self.adm_position.contains_key(m))
    }

    /// Rank of the hit subspace restricted to the surviving columns.
    pub fn hit_rank(&self) -> usize {
        self.hit.rank()
    }

    /// Number of monomials removed by the prefilter.
    pub fn prefiltered(&self) -> usize {
        self.space.len() - self.monomial_of.len()
    }

    fn row_of(&self, f: &Polynomial) -> Result<BitRow> {
        if f.nvars() != self.nvars() && !f.is_zero() {
            return Err(Error::VariableMismatch {
                expected: self.nvars(),
                got: f.nvars(),
            });
        }
        let mut cols = Vec::with_capacity(f.len());
        for t in f.terms() {
            let c = self.col_of[self.space.check(t)?];
            if c != NONE {
                cols.push(c as usize);
            }
        }
        Ok(BitRow::from_indices(self.monomial_of.len(), cols))
    }

    fn coords_of_residual(&self, residual: &BitRow) -> BitRow {
        BitRow::from_indices(
            self.dim(),
            residual
                .ones()
                .map(|c| self.adm_of_col[c] as usize)
                .inspect(|&a| debug_assert_ne!(a as u32, NONE)),
        )
    }

    /// Coordinates of the class of `f` in the admissible basis.
    pub fn reduce(&self, f: &Polynomial) -> Result<BitRow> {
        let (residual, _) = self.hit.reduce_vector(&self.row_of(f)?)?;
        Ok(self.coords_of_residual(&residual))
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Result<BitRow> {
        self.reduce(&Polynomial::from_monomial(*m))
    }

    /// Sum of admissible monomials congruent to `f` modulo hit elements.
    pub fn reduce_to_polynomial(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(self.from_coords(&self.reduce(f)?))
    }

    pub fn from_coords(&self, coords: &BitRow) -> Polynomial {
        Polynomial::from_terms(self.nvars(), coords.ones().map(|i| self.admissible[i]))
    }

    pub fn is_hit(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Generators `Sq^k(m)` summing to `f` up to prefiltered monomials, if `f` is hit.
    /// Needs a build with tracking on.
    pub fn hit_certificate(&self, f: &Polynomial) -> Result<Option<Vec<HitGenerator>>> {
        if !self.hit.is_tracking() {
            return Err(Error::Dimension("hit certificates need a tracked build".into()));
        }
        let (residual, combo) = self.hit.reduce_vector(&self.row_of(f)?)?;
        if !residual.is_zero() {
            return Ok(None);
        }
        Ok(Some(
            combo
                .unwrap()
                .ones()
                .map(|i| self.generators[i])
                .collect(),
        ))
    }

    /// Number of admissible monomials of each weight vector.
    pub fn by_weight(&self) -> BTreeMap<WeightVector, usize> {
        let mut out = BTreeMap::new();
        for m in &self.admissible {
            *out.entry(m.weight()).or_insert(0) += 1;
        }
        out
    }

    /// Admissible monomials of weight exactly `omega`.
    pub fn admissible_of_weight(&self, omega: &WeightVector) -> Vec<Monomial> {
        self.admissible
            .iter()
            .filter(|m| m.weight() == *omega)
            .copied()
            .collect()
    }

    /// `dim QP_s(omega)`: the number of admissible monomials of weight `omega`.
    pub fn weight_dim(&self, omega: &WeightVector) -> usize {
        self.admissible.iter().filter(|m| m.weight() == *omega).count()
    }

    pub fn summary(&self) -> QuotientSummary {
        QuotientSummary {
            s: self.nvars(),
            degree: self.degree(),
            dim: self.dim(),
            admissible: self.admissible.clone(),
            by_weight: self
                .by_weight()
                .into_iter()
                .map(|(w, n)| (w.key(), n))
                .collect(),
        }
    }
}

/// JSON form of a quotient.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct QuotientSummary {
    pub s: usize,
    pub degree: u32,
    pub dim: usize,
    pub admissible: Vec<Monomial>,
    pub by_weight: BTreeMap<String, usize>,
}

pub fn build_quotient(nvars: usize, d: u32) -> Result<QuotientBasis> {
    QuotientBasis::build(nvars, d, &BuildOptions::default())
}

/// Whether `f` is hit, building the quotient of its degree.
pub fn is_hit(f: &Polynomial) -> Result<bool> {
    match f.degree() {
        None => Ok(true),
        Some(d) => {
            if !f.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            QuotientBasis::build(f.nvars(), d, &BuildOptions::prefiltered())?.is_hit(f)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub s: usize,
    pub degree: u32,
    pub dim: usize,
    pub strategy: Strategy,
    /// Part of the dimension coming from monomials with `omega_1 < s` (the Kameko kernel).
    pub kernel: usize,
    /// Part isomorphic to `(QP_s)_{(d-s)/2}`.
    pub image: usize,
}

/// `dim (QP_s)_d` by the chosen strategy.
pub fn dimension(nvars: usize, d: u32, strategy: Strategy, max_space: u128) -> Result<DimensionReport> {
    let split = |q: &QuotientBasis| {
        let image = q
            .admissible()
            .iter()
            .filter(|m| m.weight().get(1) as usize == nvars)
            .count();
        (q.dim() - image, image)
    };
    match strategy {
        Strategy::Direct => {
            let opts = BuildOptions {
                max_space,
                ..BuildOptions::default()
            };
            let q = QuotientBasis::build(nvars, d, &opts)?;
            let (kernel, image) = split(&q);
            Ok(DimensionReport {
                s: nvars,
                degree: d,
                dim: q.dim(),
                strategy,
                kernel,
                image,
            })
        }
        Strategy::Recursive => {
            let report = |kernel, image| DimensionReport {
                s: nvars,
                degree: d,
                dim: kernel + image,
                strategy,
                kernel,
                image,
            };
            if wood_vanishes(nvars, d) {
                return Ok(report(0, 0));
            }
            let opts = BuildOptions {
                max_space,
                ..BuildOptions::prefiltered()
            };
            let q = QuotientBasis::build(nvars, d, &opts)?;
            let (kernel, counted) = split(&q);
            let image = if d >= nvars as u32 && (d - nvars as u32) % 2 == 0 {
                dimension(nvars, (d - nvars as u32) / 2, strategy, max_space)?.dim
            } else {
                0
            };
            if image != counted {
                return Err(Error::Dimension(format!(
                    "Kameko image in degree {d}: {counted} admissible monomials with omega_1 = {nvars}, \
                     but dim of degree {} is {image}",
                    (d.saturating_sub(nvars as u32)) / 2
                )));
            }
            Ok(report(kernel, image))
        }
    }
}

/// Decides strict inadmissibility in one degree for a fixed `r`.
///
/// A monomial `x` with `r = max{i : omega_i(x) > 0}` is strictly inadmissible when it is a
/// sum of smaller monomials and elements `Sq^j(h)` with `1 <= j <= 2^r - 1`. As with
/// admissibility, that means its column is a pivot of the span of those `Sq^j(h)`.
pub struct StrictTester {
    space: DegreeSpace,
    r: u32,
    span: IncrementalSpan,
}

impl StrictTester {
    pub fn new(nvars: usize, d: u32, r: u32, max_space: u128) -> Result<Self> {
        let space = DegreeSpace::new(nvars, d, max_space)?;
        let n = space.len();
        let mut span = IncrementalSpan::new(n);
        let top = ((1u64 << r.min(32)) - 1).min(d as u64) as u32;
        for j in 1..=top {
            let sources = enumerate_monomials(nvars, d - j)?;
            for chunk in sources.chunks(CHUNK) {
                let rows: Vec<BitRow> = chunk
                    .par_iter()
                    .map(|src| {
                        BitRow::from_indices(
                            n,
                            sq_monomial(j, src)
                                .into_iter()
                                .map(|t| n - 1 - space.index[&t]),
                        )
                    })
                    .collect();
                for row in rows {
                    if !row.is_zero() {
                        span.insert(row)?;
                    }
                }
            }
        }
        Ok(Self { space, r, span })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Strict inadmissibility of `m`, whose own `r` has to match the tester's.
    pub fn test(&self, m: &Monomial) -> Result<bool> {
        let idx = self.space.check(m)?;
        if m.weight().len() as u32 != self.r {
            return Err(Error::Dimension(format!(
                "monomial {m} has r = {}, tester was built for r = {}",
                m.weight().len(),
                self.r
            )));
        }
        Ok(self.span.is_pivot(self.space.len() - 1 - idx))
    }
}

pub fn is_strictly_inadmissible(m: &Monomial, max_space: u128) -> Result<bool> {
    let r = m.weight().len() as u32;
    StrictTester::new(m.nvars(), m.degree(), r, max_space)?.test(m)
}

pub fn is_inadmissible(m: &Monomial, max_space: u128) -> Result<bool> {
    let opts = BuildOptions {
        max_space,
        ..BuildOptions::prefiltered()
    };
    Ok(!QuotientBasis::build(m.nvars(), m.degree(), &opts)?.is_admissible(m)?)
}

/// `dim QP_s(omega)` straight from the definition: `P_s(omega)` modulo
/// `(A^+ P_s ∩ P_s(omega)) + P_s^-(omega)`, without using the admissible basis.
pub fn weight_quotient_dim_direct(nvars: usize, omega: &WeightVector, max_space: u128) -> Result<usize> {
    let d = u32::try_from(omega.degree()).map_err(|_| Error::InvalidWeight(omega.to_string()))?;
    let space = DegreeSpace::new(nvars, d, max_space)?;
    let n = space.len();
    let full = QuotientBasis::build(
        nvars,
        d,
        &BuildOptions {
            max_space,
            ..BuildOptions::default()
        },
    )?;
    // hit basis in plain monomial-index coordinates
    let hit: Vec<BitRow> = full
        .hit
        .rows()
        .iter()
        .map(|r| BitRow::from_indices(n, r.ones().map(|c| full.monomial_of[c] as usize)))
        .collect();
    let in_p: Vec<usize> = (0..n).filter(|&i| space.monomials[i].weight() <= *omega).collect();
    let units: Vec<BitRow> = in_p.iter().map(|&i| BitRow::from_indices(n, [i])).collect();
    let mut relations = intersect(n, &hit, &units)?;
    relations.extend(
        in_p.iter()
            .filter(|&&i| space.monomials[i].weight() < *omega)
            .map(|&i| BitRow::from_indices(n, [i])),
    );
    Ok(in_p.len() - rank_of(n, &relations))
}

/// Matrix of `[m] -> [psi(m)]` from `(QP_s)_d` to `(QP_s)_{(d-s)/2}` and its kernel.
pub struct KamekoKernel {
    pub source: QuotientBasis,
    pub target: QuotientBasis,
    /// `target.dim() x source.dim()`, column `j` the image of the `j`-th admissible monomial.
    pub matrix: Gf2Matrix,
    pub kernel: Vec<BitRow>,
}

impl KamekoKernel {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    /// Matrix of `[y] -> [phi(y)]`, a section of the Kameko map.
    pub fn section_matrix(&self) -> Result<Gf2Matrix> {
        let cols = self
            .target
            .admissible()
            .iter()
            .map(|y| self.source.reduce_monomial(&kameko_section(y)))
            .collect::<Result<Vec<_>>>()?;
        Gf2Matrix::from_columns(self.source.dim(), &cols)
    }
}

pub fn kameko_kernel(nvars: usize, d: u32, options: &BuildOptions) -> Result<KamekoKernel> {
    let s = nvars as u32;
    if d < s || (d - s) % 2 != 0 {
        return Err(Error::KamekoDegree { nvars, degree: d });
    }
    let source = QuotientBasis::build(nvars, d, options)?;
    let target = QuotientBasis::build(nvars, (d - s) / 2, options)?;
    let cols = source
        .admissible()
        .iter()
        .map(|m| match kameko_psi(m) {
            Some(y) => target.reduce_monomial(&y),
            None => Ok(BitRow::zeros(target.dim())),
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = Gf2Matrix::from_columns(target.dim(), &cols)?;
    let kernel = matrix.kernel();
    Ok(KamekoKernel {
        source,
        target,
        matrix,
        kernel,
    })
}
