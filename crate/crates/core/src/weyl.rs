//! Root systems and Weyl groups of types A, B, D and G2.
//!
//! Roots are exact-rational vectors in a fixed ambient space: A_{n-1} lives in
//! n coordinates (roots e_i - e_j), B_n and D_n in n coordinates, and G2 in
//! the 3-coordinate realization where short roots are e_i - e_j and long
//! roots are 2e_i - e_j - e_k. The reflection list carries the canonical
//! generator order used by every matrix layout downstream.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Rational};

/// Dense exact-rational vector in the ambient space of a root system.
pub type Vector = Vec<Rational>;

pub fn vec_add(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &Vector, c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_neg(a: &Vector) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// Standard pairing (dot product) on the ambient space.
pub fn pairing(a: &Vector, b: &Vector) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootSystemType {
    A,
    B,
    D,
    G2,
}

impl RootSystemType {
    pub fn is_simply_laced(self) -> bool {
        matches!(self, RootSystemType::A | RootSystemType::D)
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystemType::A => write!(f, "A"),
            RootSystemType::B => write!(f, "B"),
            RootSystemType::D => write!(f, "D"),
            RootSystemType::G2 => write!(f, "G2"),
        }
    }
}

impl std::str::FromStr for RootSystemType {
    type Err = WeylError;
    fn from_str(s: &str) -> Result<Self, WeylError> {
        match s {
            "A" | "a" => Ok(RootSystemType::A),
            "B" | "b" => Ok(RootSystemType::B),
            "D" | "d" => Ok(RootSystemType::D),
            "G2" | "g2" | "G" | "g" => Ok(RootSystemType::G2),
            _ => Err(WeylError::UnknownType(s.to_string())),
        }
    }
}

/// Conjugacy-class label of a reflection. Simply-laced systems have a single
/// class (`Unique`); B_n and G2 split into long and short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectionClass {
    Long,
    Short,
    Unique,
}

/// A reflection of the Weyl group, identified by its position in the
/// canonical generator order and its defining positive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflection {
    pub index: usize,
    pub root: Vector,
    pub class: ReflectionClass,
    pub name: String,
}

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("unknown root system type `{0}`")]
    UnknownType(String),
    #[error("unsupported rank {rank} for type {kind}")]
    UnsupportedRank { kind: RootSystemType, rank: usize },
    #[error("weight orthogonalization is not implemented for G2")]
    WeightsUndefined,
    #[error("vector is not a root of this system")]
    NotARoot,
    #[error("class `{class}` is not meaningful for type {kind}")]
    InvalidClass { kind: RootSystemType, class: String },
}

fn pair_name(i: usize, j: usize, barred: bool) -> String {
    let bar = if barred { "~" } else { "" };
    if i <= 9 && j <= 9 {
        format!("({}{}){}", i, j, bar)
    } else {
        format!("({},{}){}", i, j, bar)
    }
}

/// A root system together with its canonical reflection order.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: RootSystemType,
    rank: usize,
    dim: usize,
    reflections: Vec<Reflection>,
    simple_roots: Vec<Vector>,
    root_lookup: BTreeMap<Vector, usize>,
}

impl RootSystem {
    /// Build the canonical realization of the requested type and rank.
    pub fn build(kind: RootSystemType, rank: usize) -> Result<Self, WeylError> {
        match kind {
            RootSystemType::A if rank >= 1 => Ok(Self::build_a(rank)),
            RootSystemType::B if rank >= 2 => Ok(Self::build_bd(rank, true)),
            RootSystemType::D if rank >= 3 => Ok(Self::build_bd(rank, false)),
            RootSystemType::G2 if rank == 2 => Ok(Self::build_g2()),
            _ => Err(WeylError::UnsupportedRank { kind, rank }),
        }
    }

    fn build_a(rank: usize) -> Self {
        let n = rank + 1;
        let mut reflections = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                let root = vec_sub(&basis_vector(n, i - 1), &basis_vector(n, j - 1));
                reflections.push(Reflection {
                    index: reflections.len(),
                    root,
                    class: ReflectionClass::Unique,
                    name: pair_name(i, j, false),
                });
            }
        }
        let simple_roots = (1..n)
            .map(|i| vec_sub(&basis_vector(n, i - 1), &basis_vector(n, i)))
            .collect();
        Self::finish(RootSystemType::A, rank, n, reflections, simple_roots)
    }

    fn build_bd(rank: usize, with_short: bool) -> Self {
        let n = rank;
        let mut reflections = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                let root = vec_sub(&basis_vector(n, i - 1), &basis_vector(n, j - 1));
                reflections.push(Reflection {
                    index: reflections.len(),
                    root,
                    class: if with_short {
                        ReflectionClass::Long
                    } else {
                        ReflectionClass::Unique
                    },
                    name: pair_name(i, j, false),
                });
            }
        }
        for i in 1..=n {
            for j in (i + 1)..=n {
                let root = vec_add(&basis_vector(n, i - 1), &basis_vector(n, j - 1));
                reflections.push(Reflection {
                    index: reflections.len(),
                    root,
                    class: if with_short {
                        ReflectionClass::Long
                    } else {
                        ReflectionClass::Unique
                    },
                    name: pair_name(i, j, true),
                });
            }
        }
        if with_short {
            for i in 1..=n {
                reflections.push(Reflection {
                    index: reflections.len(),
                    root: basis_vector(n, i - 1),
                    class: ReflectionClass::Short,
                    name: format!("({})", i),
                });
            }
        }
        let mut simple_roots: Vec<Vector> = (1..n)
            .map(|i| vec_sub(&basis_vector(n, i - 1), &basis_vector(n, i)))
            .collect();
        if with_short {
            simple_roots.push(basis_vector(n, n - 1));
            Self::finish(RootSystemType::B, rank, n, reflections, simple_roots)
        } else {
            simple_roots.push(vec_add(&basis_vector(n, n - 2), &basis_vector(n, n - 1)));
            Self::finish(RootSystemType::D, rank, n, reflections, simple_roots)
        }
    }

    fn build_g2() -> Self {
        // Positive roots in angular order (30 degrees apart), alternating
        // short/long, in the 3-coordinate realization. With the short simple
        // root A = e1-e2 and the long simple root B = -2e1+e2+e3 these are
        // a1 = A, a2 = 3A+B, a3 = 2A+B, a4 = 3A+2B, a5 = A+B, a6 = B.
        let data: [([i64; 3], ReflectionClass); 6] = [
            ([1, -1, 0], ReflectionClass::Short),
            ([1, -2, 1], ReflectionClass::Long),
            ([0, -1, 1], ReflectionClass::Short),
            ([-1, -1, 2], ReflectionClass::Long),
            ([-1, 0, 1], ReflectionClass::Short),
            ([-2, 1, 1], ReflectionClass::Long),
        ];
        let reflections: Vec<Reflection> = data
            .iter()
            .enumerate()
            .map(|(k, (coords, class))| Reflection {
                index: k,
                root: coords.iter().map(|&c| rat(c)).collect(),
                class: *class,
                name: format!("a{}", k + 1),
            })
            .collect();
        let simple_roots = vec![reflections[0].root.clone(), reflections[5].root.clone()];
        Self::finish(RootSystemType::G2, 2, 3, reflections, simple_roots)
    }

    fn finish(
        kind: RootSystemType,
        rank: usize,
        dim: usize,
        reflections: Vec<Reflection>,
        simple_roots: Vec<Vector>,
    ) -> Self {
        let mut root_lookup = BTreeMap::new();
        for r in &reflections {
            root_lookup.insert(r.root.clone(), r.index);
            root_lookup.insert(vec_neg(&r.root), r.index);
        }
        RootSystem {
            kind,
            rank,
            dim,
            reflections,
            simple_roots,
            root_lookup,
        }
    }

    pub fn kind(&self) -> RootSystemType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Short label, e.g. "A3", "B2", "G2".
    pub fn label(&self) -> String {
        match self.kind {
            RootSystemType::G2 => "G2".to_string(),
            k => format!("{}{}", k, self.rank),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reflections in the canonical generator order, one per positive root.
    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn reflection_count(&self) -> usize {
        self.reflections.len()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vector> {
        self.reflections.iter().map(|r| &r.root)
    }

    /// All roots: the positive roots and their negatives.
    pub fn roots(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = self.positive_roots().cloned().collect();
        out.extend(self.positive_roots().map(vec_neg));
        out
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple_roots
    }

    /// Coroot of a root: 2 gamma / <gamma, gamma>.
    pub fn coroot(&self, gamma: &Vector) -> Vector {
        let norm = pairing(gamma, gamma);
        vec_scale(gamma, &(rat(2) / norm))
    }

    /// Reflection s_gamma applied to a vector.
    pub fn reflect(&self, gamma: &Vector, x: &Vector) -> Vector {
        let c = pairing(x, &self.coroot(gamma));
        vec_sub(x, &vec_scale(gamma, &c))
    }

    /// Index of the reflection whose root is +-v.
    pub fn reflection_of_root(&self, v: &Vector) -> Result<usize, WeylError> {
        self.root_lookup.get(v).copied().ok_or(WeylError::NotARoot)
    }

    /// The reflection a b a^{-1}, i.e. the reflection with root a(gamma_b).
    pub fn conjugate_reflection(&self, a: usize, b: usize) -> usize {
        let image = self.reflect(&self.reflections[a].root, &self.reflections[b].root);
        *self
            .root_lookup
            .get(&image)
            .expect("reflection set is closed under conjugation")
    }

    /// The reflection with root w(gamma_b), for any group element w.
    pub fn conjugate_reflection_by(&self, w: &GroupElement, b: usize) -> usize {
        let image = w.act(&self.reflections[b].root);
        *self
            .root_lookup
            .get(&image)
            .expect("group elements permute the root set")
    }

    fn pair_pos(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.dim;
        if i < 1 || j <= i || j > n {
            return None;
        }
        Some((i - 1) * n - i * (i - 1) / 2 + (j - i - 1))
    }

    /// Index of the reflection (ij), 1 <= i < j, in the canonical order.
    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.pair_pos(i, j)
    }

    /// Index of the barred reflection (ij)~ for types B and D.
    pub fn barred_index(&self, i: usize, j: usize) -> Option<usize> {
        if !matches!(self.kind, RootSystemType::B | RootSystemType::D) {
            return None;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let npairs = self.dim * (self.dim - 1) / 2;
        Some(npairs + self.pair_pos(i, j)?)
    }

    /// Index of the short reflection (i) for type B.
    pub fn short_index(&self, i: usize) -> Option<usize> {
        if self.kind != RootSystemType::B || i < 1 || i > self.dim {
            return None;
        }
        Some(self.dim * (self.dim - 1) + (i - 1))
    }

    /// Group element realizing reflection `idx`.
    pub fn reflection_element(&self, idx: usize) -> GroupElement {
        let root = &self.reflections[idx].root;
        match self.kind {
            RootSystemType::G2 => {
                let coroot = self.coroot(root);
                let mut m = vec![vec![Rational::zero(); self.dim]; self.dim];
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        let mut x = if r == c {
                            Rational::one()
                        } else {
                            Rational::zero()
                        };
                        x -= &root[r] * &coroot[c];
                        m[r][c] = x;
                    }
                }
                GroupElement::Matrix(m)
            }
            _ => {
                let support: Vec<usize> = root
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, _)| i)
                    .collect();
                let mut perm: Vec<usize> = (0..self.dim).collect();
                let mut signs = vec![false; self.dim];
                match support.as_slice() {
                    [i] => signs[*i] = true,
                    [i, j] => {
                        perm.swap(*i, *j);
                        let same_sign = root[*i].is_positive() == root[*j].is_positive();
                        if same_sign {
                            // e_i + e_j: swap and negate both coordinates.
                            signs[*i] = true;
                            signs[*j] = true;
                        }
                    }
                    _ => unreachable!("classical roots touch at most two coordinates"),
                }
                GroupElement::SignedPerm { perm, signs }
            }
        }
    }

    pub fn identity_element(&self) -> GroupElement {
        match self.kind {
            RootSystemType::G2 => {
                let mut m = vec![vec![Rational::zero(); self.dim]; self.dim];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = Rational::one();
                }
                GroupElement::Matrix(m)
            }
            _ => GroupElement::SignedPerm {
                perm: (0..self.dim).collect(),
                signs: vec![false; self.dim],
            },
        }
    }

    /// Enumerate the whole Weyl group by closure under the generators.
    /// Intended for small ranks (tests and the G2 table).
    pub fn enumerate_group(&self) -> Vec<GroupElement> {
        let gens: Vec<GroupElement> = (0..self.reflection_count())
            .map(|i| self.reflection_element(i))
            .collect();
        let mut seen = vec![self.identity_element()];
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let prod = g.compose(w);
                    if !seen.contains(&prod) {
                        seen.push(prod.clone());
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        seen
    }
}

/// An element of the Weyl group, stored as its action on the ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    /// e_i maps to (-1)^{signs[i]} e_{perm[i]}.
    SignedPerm { perm: Vec<usize>, signs: Vec<bool> },
    /// Explicit matrix action (G2).
    Matrix(Vec<Vec<Rational>>),
}

impl GroupElement {
    /// Apply the action to a vector.
    pub fn act(&self, x: &Vector) -> Vector {
        match self {
            GroupElement::SignedPerm { perm, signs } => {
                let mut y = vec![Rational::zero(); x.len()];
                for (i, v) in x.iter().enumerate() {
                    y[perm[i]] = if signs[i] { -v } else { v.clone() };
                }
                y
            }
            GroupElement::Matrix(m) => m
                .iter()
                .map(|row| {
                    let mut acc = Rational::zero();
                    for (c, v) in row.iter().zip(x) {
                        acc += c * v;
                    }
                    acc
                })
                .collect(),
        }
    }

    /// Composition: `(self.compose(w)).act(x) == self.act(w.act(x))`.
    pub fn compose(&self, w: &GroupElement) -> GroupElement {
        match (self, w) {
            (
                GroupElement::SignedPerm {
                    perm: pa,
                    signs: sa,
                },
                GroupElement::SignedPerm {
                    perm: pb,
                    signs: sb,
                },
            ) => {
                let n = pa.len();
                let mut perm = vec![0; n];
                let mut signs = vec![false; n];
                for i in 0..n {
                    perm[i] = pa[pb[i]];
                    signs[i] = sb[i] ^ sa[pb[i]];
                }
                GroupElement::SignedPerm { perm, signs }
            }
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => {
                let n = a.len();
                let mut m = vec![vec![Rational::zero(); n]; n];
                for r in 0..n {
                    for c in 0..n {
                        let mut acc = Rational::zero();
                        for k in 0..n {
                            acc += &a[r][k] * &b[k][c];
                        }
                        m[r][c] = acc;
                    }
                }
                GroupElement::Matrix(m)
            }
            _ => panic!("cannot compose group elements of different root systems"),
        }
    }

    /// Determinant of the action; equals (-1)^{l(w)}.
    pub fn determinant(&self) -> i64 {
        match self {
            GroupElement::SignedPerm { perm, signs } => {
                let mut det: i64 = 1;
                let mut visited = vec![false; perm.len()];
                for start in 0..perm.len() {
                    if visited[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut i = start;
                    while !visited[i] {
                        visited[i] = true;
                        i = perm[i];
                        len += 1;
                    }
                    if len % 2 == 0 {
                        det = -det;
                    }
                }
                for s in signs {
                    if *s {
                        det = -det;
                    }
                }
                det
            }
            GroupElement::Matrix(m) => {
                debug_assert_eq!(m.len(), 3);
                let d = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
                if d == rat(1) {
                    1
                } else {
                    debug_assert_eq!(d, rat(-1));
                    -1
                }
            }
        }
    }
}

/// A fundamental weight representative and its orthogonalized companion.
#[derive(Debug, Clone)]
pub struct Weight {
    pub omega: Vector,
    pub nu: Vector,
}

/// Gram-Schmidt orthogonalization (no normalization) of the weight
/// representatives omega_i = e_1 + ... + e_i, taken in simple-root index
/// order. These representatives generate the coweight lattice for all three
/// classical families; orthogonalization yields nu_i = e_i exactly, which is
/// the choice that reproduces the explicit Dunkl-type connections downstream.
pub fn orthogonalize_weights(rs: &RootSystem) -> Result<Vec<Weight>, WeylError> {
    if rs.kind() == RootSystemType::G2 {
        return Err(WeylError::WeightsUndefined);
    }
    let dim = rs.ambient_dim();
    let omegas: Vec<Vector> = (1..=rs.rank())
        .map(|i| {
            let mut v = vec![Rational::zero(); dim];
            for coord in v.iter_mut().take(i) {
                *coord = Rational::one();
            }
            v
        })
        .collect();
    let mut nus: Vec<Vector> = Vec::new();
    for omega in &omegas {
        let mut nu = omega.clone();
        for prev in &nus {
            let c = pairing(omega, prev) / pairing(prev, prev);
            nu = vec_sub(&nu, &vec_scale(prev, &c));
        }
        nus.push(nu);
    }
    Ok(omegas
        .into_iter()
        .zip(nus)
        .map(|(omega, nu)| Weight { omega, nu })
        .collect())
}
