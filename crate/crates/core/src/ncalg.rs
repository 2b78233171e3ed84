//! Free graded associative algebra on a finite generator set over exact
//! rationals, and quotients by homogeneous relation ideals.
//!
//! Quotients are computed degree by degree. For each degree d the engine
//! eliminates the relation span and keeps (a) the list of standard monomials
//! (a basis of the degree-d component) and (b) left-multiplication maps from
//! the degree-(d-1) basis, expressed on standard monomials. Every query
//! (Hilbert dimensions, normal forms, subalgebra spans) runs through these
//! small coordinates, but the answers coincide bit-for-bit with elimination
//! in full monomial coordinates: the standard monomial set and the reduced
//! normal form are unique for the fixed degree-lex order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num::{One, Zero};
use thiserror::Error;

use crate::cache::{CacheError, DegreeCache};
use crate::linalg::{Eliminator, Rational, SparseVec};
use crate::weyl::RootSystem;

/// Generator index inside a fixed generator list.
pub type GenIdx = u8;

/// A word in the generators; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<GenIdx>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(a: GenIdx) -> Self {
        Monomial(vec![a])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Monomial(w)
    }

    /// Position of this word in the lex-ordered list of all words of its
    /// degree over `g` generators (base-g digits).
    pub fn encode(&self, g: usize) -> usize {
        self.0.iter().fold(0usize, |acc, &a| acc * g + a as usize)
    }

    pub fn decode(mut idx: usize, degree: usize, g: usize) -> Monomial {
        let mut w = vec![0u8; degree];
        for k in (0..degree).rev() {
            w[k] = (idx % g) as u8;
            idx /= g;
        }
        Monomial(w)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree-lexicographic order: shorter words first, then lex on the letters.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

/// Finitely supported rational linear combination of words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::monomial(Monomial::one())
    }

    pub fn generator(a: GenIdx) -> Self {
        NCPoly::monomial(Monomial::generator(a))
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        NCPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = NCPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &NCPoly, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Largest degree among the support, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Some(d) if every term has degree d.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_component(&self, d: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Coordinates in the lex-ordered monomial basis of one degree.
    /// Every term must have degree `d`.
    pub fn to_coords(&self, d: usize, g: usize) -> SparseVec {
        let mut v: SparseVec = self
            .terms
            .iter()
            .map(|(m, c)| {
                assert_eq!(m.degree(), d, "to_coords on inhomogeneous polynomial");
                (m.encode(g), c.clone())
            })
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn from_coords(coords: &SparseVec, d: usize, g: usize) -> NCPoly {
        NCPoly::from_terms(
            coords
                .iter()
                .map(|(i, c)| (Monomial::decode(*i, d, g), c.clone())),
        )
    }

    /// Render with generator names, e.g. `(12)(13) - (13)(12)`.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !abs.is_one() || m.degree() == 0;
            if show_coeff {
                let _ = write!(out, "{}", crate::linalg::fmt_rational(&abs));
                if m.degree() > 0 {
                    out.push('*');
                }
            }
            for &a in &m.0 {
                out.push_str(&names[a as usize]);
            }
        }
        out
    }
}

impl std::ops::Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &Rational::one());
        out
    }
}

impl std::ops::Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Rational::one());
        out
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Rational::one())
    }
}

/// Bilinear concatenation product.
impl std::ops::Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }
}

/// Kind of a presented algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    Quad,
    Quar,
    Woronowicz,
    AnticommQuotient(Box<AlgebraKind>),
    /// Model algebra on abstract generators with an explicit relation list.
    Model,
}

impl AlgebraKind {
    pub fn is_ideal_presented(&self) -> bool {
        !matches!(self, AlgebraKind::Woronowicz)
    }
}

impl std::fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraKind::Quad => write!(f, "quad"),
            AlgebraKind::Quar => write!(f, "quar"),
            AlgebraKind::Woronowicz => write!(f, "woronowicz"),
            AlgebraKind::AnticommQuotient(inner) => write!(f, "anticomm-{}", inner),
            AlgebraKind::Model => write!(f, "model"),
        }
    }
}

/// Generator list, optionally with the conjugation table of the underlying
/// reflection set (needed for the braiding and antisymmetrizer).
#[derive(Debug, Clone)]
pub struct Generators {
    names: Vec<String>,
    conj: Option<Vec<Vec<usize>>>,
}

impl Generators {
    pub fn abstract_named(names: Vec<String>) -> Self {
        assert!(names.len() < 256, "generator count must fit in a byte");
        Generators { names, conj: None }
    }

    /// Generators e_a indexed by the reflections of a root system, together
    /// with the conjugation table a,b -> a b a^{-1}.
    pub fn from_root_system(rs: &RootSystem) -> Self {
        let n = rs.reflection_count();
        assert!(n < 256, "generator count must fit in a byte");
        let names = rs.reflections().iter().map(|r| r.name.clone()).collect();
        let mut conj = vec![vec![0usize; n]; n];
        for (a, row) in conj.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = rs.conjugate_reflection(a, b);
            }
        }
        Generators {
            names,
            conj: Some(conj),
        }
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn conjugation_table(&self) -> Option<&Vec<Vec<usize>>> {
        self.conj.as_ref()
    }
}

/// Resource guards. `max_monomials` bounds g^d for degree-d computations and
/// n^d for subalgebra spans.
#[derive(Debug, Clone, Copy)]
pub struct ResourceCaps {
    pub max_monomials: u64,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_monomials: 1 << 20,
        }
    }
}

impl ResourceCaps {
    pub fn check_power(&self, base: usize, exp: usize) -> Result<(), AlgebraError> {
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc.saturating_mul(base as u128);
            if acc > self.max_monomials as u128 {
                return Err(AlgebraError::CapExceeded {
                    degree: exp,
                    count: acc,
                    cap: self.max_monomials,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("degree {degree} needs {count} monomials, over the cap of {cap}")]
    CapExceeded {
        degree: usize,
        count: u128,
        cap: u64,
    },
    #[error("operation requires an ideal-presented algebra, got kind `{0}`")]
    NotIdealPresented(String),
    #[error("operation requires reflection generators")]
    NotReflectionGenerated,
    #[error("relations must be homogeneous of degree >= 2, got {0}")]
    BadRelation(String),
    #[error("subalgebra generators must be homogeneous of degree 1")]
    BadSubalgebraGenerator,
    #[error("position {position} out of range for degree {degree}")]
    PositionOutOfRange { position: usize, degree: usize },
    #[error("input must be homogeneous")]
    InhomogeneousInput,
    #[error("connection class `{class}` is not meaningful for type {kind}")]
    InvalidThetaClass { kind: String, class: String },
    #[error("identity `{0}` is not defined for this root system")]
    IdentityNotApplicable(String),
    #[error(transparent)]
    Weyl(#[from] crate::weyl::WeylError),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// Reduced echelon basis of a relation span in full monomial coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis {
    pub cols: usize,
    pub rows: Vec<SparseVec>,
    pub pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn standard_cols(&self) -> Vec<usize> {
        let mut pivots = self.pivots.iter().copied().peekable();
        let mut out = Vec::new();
        for c in 0..self.cols {
            if pivots.peek() == Some(&c) {
                pivots.next();
            } else {
                out.push(c);
            }
        }
        out
    }
}

/// One degree of the quotient tower: the standard-monomial basis and the
/// left-multiplication maps from the previous degree.
struct Level {
    words: Vec<Monomial>,
    /// left_mult[a][j] = coordinates of e_a * words_{d-1}[j] on `words`.
    left_mult: Vec<Vec<SparseVec>>,
}

impl Level {
    fn dim(&self) -> usize {
        self.words.len()
    }
}

#[derive(Default)]
struct HandleState {
    levels: Vec<Level>,
    full_ideal: BTreeMap<usize, Arc<EchelonBasis>>,
    wor_ranks: BTreeMap<usize, usize>,
}

/// A presented graded algebra with per-degree bases computed on demand.
///
/// Queries go through a mutex-guarded cache with compute-once semantics:
/// concurrent queries observe a single completed basis per degree.
pub struct AlgebraHandle {
    gens: Generators,
    kind: AlgebraKind,
    relations: Vec<NCPoly>,
    caps: ResourceCaps,
    root_system: Option<Arc<RootSystem>>,
    cache: Option<DegreeCache>,
    state: Mutex<HandleState>,
}

impl AlgebraHandle {
    pub fn new(
        gens: Generators,
        kind: AlgebraKind,
        relations: Vec<NCPoly>,
    ) -> Result<Self, AlgebraError> {
        for r in &relations {
            match r.homogeneous_degree() {
                Some(d) if d >= 2 => {}
                _ => {
                    return Err(AlgebraError::BadRelation(
                        r.display(gens.names()).chars().take(80).collect(),
                    ))
                }
            }
        }
        if kind == AlgebraKind::Woronowicz && gens.conjugation_table().is_none() {
            return Err(AlgebraError::NotReflectionGenerated);
        }
        Ok(AlgebraHandle {
            gens,
            kind,
            relations,
            caps: ResourceCaps::default(),
            root_system: None,
            cache: None,
            state: Mutex::new(HandleState::default()),
        })
    }

    pub fn with_caps(mut self, caps: ResourceCaps) -> Self {
        self.caps = caps;
        self
    }

    pub fn with_root_system(mut self, rs: Arc<RootSystem>) -> Self {
        self.root_system = Some(rs);
        self
    }

    pub fn with_cache(mut self, cache: DegreeCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn generator_count(&self) -> usize {
        self.gens.count()
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }

    pub fn caps(&self) -> ResourceCaps {
        self.caps
    }

    pub fn root_system(&self) -> Option<&Arc<RootSystem>> {
        self.root_system.as_ref()
    }

    pub fn generator_poly(&self, a: usize) -> NCPoly {
        assert!(a < self.gens.count());
        NCPoly::generator(a as GenIdx)
    }

    fn require_ideal_presented(&self) -> Result<(), AlgebraError> {
        if self.kind.is_ideal_presented() {
            Ok(())
        } else {
            Err(AlgebraError::NotIdealPresented(self.kind.to_string()))
        }
    }

    /// Dimensions of the graded components for degrees 0..=d_max.
    pub fn hilbert_dims(&self, d_max: usize) -> Result<Vec<usize>, AlgebraError> {
        if self.kind == AlgebraKind::Woronowicz {
            return (0..=d_max).map(|d| self.woronowicz_rank(d)).collect();
        }
        let mut st = self.state.lock().unwrap();
        self.build_levels_to(&mut st, d_max)?;
        Ok((0..=d_max).map(|d| st.levels[d].dim()).collect())
    }

    /// Rank of the degree-d antisymmetrizer (Woronowicz kind only).
    pub fn woronowicz_rank(&self, d: usize) -> Result<usize, AlgebraError> {
        let conj = self
            .gens
            .conjugation_table()
            .ok_or(AlgebraError::NotReflectionGenerated)?;
        let mut st = self.state.lock().unwrap();
        if let Some(r) = st.wor_ranks.get(&d) {
            return Ok(*r);
        }
        let g = self.gens.count();
        self.caps.check_power(g, d)?;
        crate::braid::check_factorial_cap(&self.caps, g, d)?;
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.load_rows(&self.kind.to_string(), d)? {
                let rank = entry.rows.len();
                st.wor_ranks.insert(d, rank);
                return Ok(rank);
            }
        }
        let rows = crate::braid::antisymmetrizer_image_rref(conj, g, d);
        let rank = rows.len();
        if let Some(cache) = &self.cache {
            let cols = (g as u128).pow(d as u32) as usize;
            cache.store_rows(&self.kind.to_string(), d, g, cols, rank, &rows)?;
        }
        st.wor_ranks.insert(d, rank);
        Ok(rank)
    }

    /// Standard monomials (quotient basis) at one degree.
    pub fn standard_monomials(&self, d: usize) -> Result<Vec<Monomial>, AlgebraError> {
        self.require_ideal_presented()?;
        let mut st = self.state.lock().unwrap();
        self.build_levels_to(&mut st, d)?;
        Ok(st.levels[d].words.clone())
    }

    /// Reduced echelon basis of the degree-d component of the relation ideal
    /// in full monomial coordinates. Built incrementally from degree d-1.
    pub fn ideal_degree_basis(&self, d: usize) -> Result<Arc<EchelonBasis>, AlgebraError> {
        self.require_ideal_presented()?;
        let g = self.gens.count();
        self.caps.check_power(g, d)?;
        let mut st = self.state.lock().unwrap();
        if !st.full_ideal.contains_key(&d) {
            for dd in 0..=d {
                if st.full_ideal.contains_key(&dd) {
                    continue;
                }
                let basis = self.build_full_ideal(&st, dd)?;
                st.full_ideal.insert(dd, Arc::new(basis));
            }
        }
        Ok(Arc::clone(&st.full_ideal[&d]))
    }

    fn build_full_ideal(&self, st: &HandleState, d: usize) -> Result<EchelonBasis, AlgebraError> {
        let g = self.gens.count();
        let cols = (0..d).fold(1usize, |acc, _| acc * g);
        if d < 2 {
            return Ok(EchelonBasis {
                cols,
                rows: Vec::new(),
                pivots: Vec::new(),
            });
        }
        let prev = &st.full_ideal[&(d - 1)];
        let mut elim = Eliminator::new(cols);
        // span at degree d = (degree d-1 rows) * e_a  +  e_a * (degree d-1 rows)
        //                  + relations of degree d.
        for row in &prev.rows {
            for a in 0..g {
                let right: SparseVec = row.iter().map(|(i, c)| (i * g + a, c.clone())).collect();
                elim.insert(right);
                let shift = a * cols / g;
                let left: SparseVec = row.iter().map(|(i, c)| (shift + i, c.clone())).collect();
                elim.insert(left);
            }
        }
        for r in &self.relations {
            if r.homogeneous_degree() == Some(d) {
                elim.insert(r.to_coords(d, g));
            }
        }
        let rows = elim.into_rref_rows();
        let pivots = rows.iter().map(|r| r[0].0).collect();
        Ok(EchelonBasis { cols, rows, pivots })
    }

    fn build_levels_to(&self, st: &mut HandleState, d: usize) -> Result<(), AlgebraError> {
        self.require_ideal_presented()?;
        if st.levels.is_empty() {
            st.levels.push(Level {
                words: vec![Monomial::one()],
                left_mult: Vec::new(),
            });
        }
        let g = self.gens.count();
        if st.levels.len() == 1 && d >= 1 {
            let words: Vec<Monomial> = (0..g).map(|a| Monomial::generator(a as GenIdx)).collect();
            let left_mult = (0..g).map(|a| vec![vec![(a, Rational::one())]]).collect();
            st.levels.push(Level { words, left_mult });
        }
        while st.levels.len() <= d {
            let next = st.levels.len();
            self.caps.check_power(g, next)?;
            let level = self.build_level(st, next)?;
            st.levels.push(level);
        }
        Ok(())
    }

    fn build_level(&self, st: &HandleState, d: usize) -> Result<Level, AlgebraError> {
        let g = self.gens.count();
        let q_prev = st.levels[d - 1].dim();
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.load_rows(&self.kind.to_string(), d)? {
                return self.level_from_rows(st, d, entry.rows);
            }
        }
        let mut elim = Eliminator::new(g * q_prev);
        for r in &self.relations {
            let k = r.homogeneous_degree().expect("validated in new()");
            if k > d {
                continue;
            }
            for u in 0..st.levels[d - k].dim() {
                elim.insert(self.embed_relation(st, r, k, d, u));
            }
        }
        let rows = elim.into_rref_rows();
        let level = self.level_from_candidate_rows(st, d, &rows);
        if let Some(cache) = &self.cache {
            let monomial_rows: Vec<SparseVec> = rows
                .iter()
                .map(|row| self.candidate_row_to_monomial_coords(st, d, row))
                .collect();
            let cols = (0..d).fold(1usize, |acc, _| acc * g);
            cache.store_rows(
                &self.kind.to_string(),
                d,
                g,
                cols,
                level.dim(),
                &monomial_rows,
            )?;
        }
        Ok(level)
    }

    /// Image of relation-times-basis-word in the candidate coordinates
    /// (a, j) = a * q_prev + j of V (x) Q_{d-1}.
    fn embed_relation(
        &self,
        st: &HandleState,
        r: &NCPoly,
        k: usize,
        d: usize,
        u: usize,
    ) -> SparseVec {
        let q_prev = st.levels[d - 1].dim();
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (m, c) in r.terms() {
            // pi_{d-1}(m[1..] * u): apply letters right to left.
            let mut v: SparseVec = vec![(u, Rational::one())];
            for (step, t) in (1..k).rev().enumerate() {
                let target = &st.levels[d - k + step + 1];
                v = apply_left(target, m.0[t], &v);
            }
            for (j, x) in v {
                let coord = m.0[0] as usize * q_prev + j;
                let e = acc.entry(coord).or_insert_with(Rational::zero);
                *e += x * c;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    fn level_from_candidate_rows(&self, st: &HandleState, d: usize, rows: &[SparseVec]) -> Level {
        let g = self.gens.count();
        let prev = &st.levels[d - 1];
        let q_prev = prev.dim();
        let ncand = g * q_prev;
        let mut pivot_row: Vec<Option<&SparseVec>> = vec![None; ncand];
        for row in rows {
            pivot_row[row[0].0] = Some(row);
        }
        // standard positions, in candidate (= lex word) order
        let mut std_index: Vec<Option<usize>> = vec![None; ncand];
        let mut words = Vec::new();
        for c in 0..ncand {
            if pivot_row[c].is_none() {
                std_index[c] = Some(words.len());
                let a = (c / q_prev) as GenIdx;
                let w = Monomial::generator(a).concat(&prev.words[c % q_prev]);
                words.push(w);
            }
        }
        let mut left_mult: Vec<Vec<SparseVec>> = Vec::with_capacity(g);
        for a in 0..g {
            let mut cols = Vec::with_capacity(q_prev);
            for j in 0..q_prev {
                let c = a * q_prev + j;
                let col: SparseVec = match pivot_row[c] {
                    None => vec![(std_index[c].unwrap(), Rational::one())],
                    Some(row) => row
                        .iter()
                        .skip(1)
                        .map(|(cc, x)| {
                            (
                                std_index[*cc].expect("rref tails sit on standard columns"),
                                -x.clone(),
                            )
                        })
                        .collect(),
                };
                cols.push(col);
            }
            left_mult.push(cols);
        }
        Level { words, left_mult }
    }

    fn candidate_row_to_monomial_coords(
        &self,
        st: &HandleState,
        d: usize,
        row: &SparseVec,
    ) -> SparseVec {
        let g = self.gens.count();
        let prev = &st.levels[d - 1];
        let q_prev = prev.dim();
        let mut out: SparseVec = row
            .iter()
            .map(|(c, x)| {
                let a = (c / q_prev) as GenIdx;
                let w = Monomial::generator(a).concat(&prev.words[c % q_prev]);
                (w.encode(g), x.clone())
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    fn level_from_rows(
        &self,
        st: &HandleState,
        d: usize,
        monomial_rows: Vec<SparseVec>,
    ) -> Result<Level, AlgebraError> {
        let g = self.gens.count();
        let prev = &st.levels[d - 1];
        let q_prev = prev.dim();
        let to_candidate = |idx: usize| -> Result<usize, AlgebraError> {
            let w = Monomial::decode(idx, d, g);
            let a = w.0[0] as usize;
            let rest = Monomial(w.0[1..].to_vec());
            let j = prev
                .words
                .binary_search_by(|probe| probe.0.cmp(&rest.0))
                .map_err(|_| {
                    AlgebraError::Cache(CacheError::Corrupt {
                        reason: format!("cached row references non-standard monomial {}", idx),
                    })
                })?;
            Ok(a * q_prev + j)
        };
        let mut rows = Vec::with_capacity(monomial_rows.len());
        for mrow in monomial_rows {
            let mut row: SparseVec = Vec::with_capacity(mrow.len());
            for (idx, x) in mrow {
                row.push((to_candidate(idx)?, x));
            }
            row.sort_by_key(|(i, _)| *i);
            rows.push(row);
        }
        rows.sort_by_key(|r| r[0].0);
        Ok(self.level_from_candidate_rows(st, d, &rows))
    }

    /// Canonical representative supported on standard monomials. Linear,
    /// idempotent, and zero exactly on the relation ideal. Inhomogeneous
    /// inputs are reduced componentwise.
    pub fn normal_form(&self, x: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.require_ideal_presented()?;
        let mut st = self.state.lock().unwrap();
        let mut out = NCPoly::zero();
        for d in x.degrees() {
            self.build_levels_to(&mut st, d)?;
            let comp = x.homogeneous_component(d);
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (m, c) in comp.terms() {
                let coords = project_word(&st.levels, m);
                for (j, v) in coords {
                    let e = acc.entry(j).or_insert_with(Rational::zero);
                    *e += v * c;
                }
            }
            for (j, v) in acc {
                if !v.is_zero() {
                    out.add_term(st.levels[d].words[j].clone(), v);
                }
            }
        }
        Ok(out)
    }

    /// True iff x lies in the relation ideal.
    pub fn is_zero_in_quotient(&self, x: &NCPoly) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(x)?.is_zero())
    }

    /// Dimension, per degree 0..=d_max, of the span of all degree-d products
    /// of the given degree-1 elements in the quotient.
    pub fn subalgebra_dims(
        &self,
        gens: &[NCPoly],
        d_max: usize,
    ) -> Result<Vec<usize>, AlgebraError> {
        self.require_ideal_presented()?;
        let g = self.gens.count();
        for t in gens {
            if !t.is_zero() && t.homogeneous_degree() != Some(1) {
                return Err(AlgebraError::BadSubalgebraGenerator);
            }
        }
        self.caps.check_power(gens.len().max(1), d_max)?;
        let gen_coords: Vec<SparseVec> = gens.iter().map(|t| t.to_coords(1, g)).collect();
        let mut st = self.state.lock().unwrap();
        self.build_levels_to(&mut st, d_max)?;
        let mut dims = vec![1usize];
        let mut basis: Vec<SparseVec> = vec![vec![(0, Rational::one())]];
        for d in 1..=d_max {
            let level = &st.levels[d];
            let mut elim = Eliminator::new(level.dim());
            for b in &basis {
                for t in &gen_coords {
                    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (a, ca) in t {
                        let img = apply_left(level, *a as GenIdx, b);
                        for (j, x) in img {
                            let e = acc.entry(j).or_insert_with(Rational::zero);
                            *e += x * ca;
                        }
                    }
                    let v: SparseVec = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                    elim.insert(v);
                }
            }
            dims.push(elim.rank());
            basis = elim.into_rref_rows();
        }
        Ok(dims)
    }

    /// New handle with anticommutators e_a e_b + e_b e_a (a <= b) added to
    /// the relations.
    pub fn anticommutative_quotient(&self) -> Result<AlgebraHandle, AlgebraError> {
        self.require_ideal_presented()?;
        let g = self.gens.count();
        let mut relations = self.relations.clone();
        for a in 0..g as GenIdx {
            for b in a..g as GenIdx {
                let ab = NCPoly::monomial(Monomial(vec![a, b]));
                let ba = NCPoly::monomial(Monomial(vec![b, a]));
                relations.push(&ab + &ba);
            }
        }
        let mut h = AlgebraHandle::new(
            self.gens.clone(),
            AlgebraKind::AnticommQuotient(Box::new(self.kind.clone())),
            relations,
        )?
        .with_caps(self.caps);
        if let Some(rs) = &self.root_system {
            h = h.with_root_system(Arc::clone(rs));
        }
        if let Some(cache) = &self.cache {
            h = h.with_cache(cache.clone());
        }
        Ok(h)
    }
}

/// Multiply by generator `a` on the left: Q_{d-1} coords -> Q_d coords.
fn apply_left(level: &Level, a: GenIdx, v: &SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (j, x) in v {
        for (i, y) in &level.left_mult[a as usize][*j] {
            let e = acc.entry(*i).or_insert_with(Rational::zero);
            *e += x * y;
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Coordinates of a word's class on the standard basis of its degree.
fn project_word(levels: &[Level], m: &Monomial) -> SparseVec {
    let d = m.degree();
    let mut v: SparseVec = vec![(0, Rational::one())];
    for t in (0..d).rev() {
        let lvl = d - t;
        v = apply_left(&levels[lvl], m.0[t], &v);
    }
    v
}
