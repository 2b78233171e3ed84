//! Exact sparse linear algebra over the rationals.
//!
//! Everything downstream (relation spans, kernels, quotient bases) reduces to
//! row elimination here, so all arithmetic is exact `Rational` and the echelon
//! form is the canonical reduced one: results are independent of insertion
//! order and bit-identical across runs.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// The base field: arbitrary-precision rationals, always reduced,
/// denominator positive.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse vector: strictly increasing indices, no zero coefficients.
pub type SparseVec = Vec<(usize, Rational)>;

/// Scale a sparse vector in place. `c` must be nonzero.
pub fn scale_vec(v: &mut SparseVec, c: &Rational) {
    for (_, x) in v.iter_mut() {
        *x *= c;
    }
}

/// `target - c * source`, merging the sorted supports.
pub fn sub_scaled(target: &SparseVec, c: &Rational, source: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some((ti, tv)), Some((si, sv))) => {
                if ti < si {
                    out.push((*ti, tv.clone()));
                    i += 1;
                } else if si < ti {
                    out.push((*si, -(c * sv)));
                    j += 1;
                } else {
                    let x = tv - c * sv;
                    if !x.is_zero() {
                        out.push((*ti, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ti, tv)), None) => {
                out.push((*ti, tv.clone()));
                i += 1;
            }
            (None, Some((si, sv))) => {
                out.push((*si, -(c * sv)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Dot product of two sparse vectors.
pub fn dot(a: &SparseVec, b: &SparseVec) -> Rational {
    let mut acc = Rational::zero();
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        if a[i].0 < b[j].0 {
            i += 1;
        } else if b[j].0 < a[i].0 {
            j += 1;
        } else {
            acc += &a[i].1 * &b[j].1;
            i += 1;
            j += 1;
        }
    }
    acc
}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("entry ({row},{col}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row},{col})")]
    Duplicate { row: usize, col: usize },
}

/// Sparse matrix in coordinate form; entries sorted row-major, no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, Rational::one())).collect(),
        }
    }

    /// Build from unordered entries; sorts, rejects duplicates and
    /// out-of-range indices, drops explicit zeros.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        entries.retain(|(_, _, v)| !v.is_zero());
        for &(r, c, _) in &entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(LinalgError::Duplicate {
                    row: w[0].0,
                    col: w[0].1,
                });
            }
        }
        Ok(SparseMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Build from per-row sparse vectors (already sorted, no zeros).
    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                debug_assert!(*c < cols && !v.is_zero());
                entries.push((r, *c, v.clone()));
            }
        }
        SparseMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    /// Split into per-row sparse vectors.
    pub fn to_rows(&self) -> Vec<SparseVec> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        let dense: BTreeMap<usize, &Rational> = v.iter().map(|(i, x)| (*i, x)).collect();
        for (r, c, m) in &self.entries {
            if let Some(x) = dense.get(c) {
                let e = acc.entry(*r).or_insert_with(Rational::zero);
                *e += m * *x;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

/// Result of `rref`: the canonical reduced row echelon form together with the
/// strictly increasing pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub echelon: SparseMatrix,
    pub pivots: Vec<usize>,
}

/// Incremental row-space accumulator.
///
/// Rows are kept forward-reduced with unit leading coefficient; `reduce`
/// returns the canonical residual of a vector against the accumulated row
/// space (supported only on non-pivot columns), and `into_rref_rows`
/// back-substitutes to the unique reduced echelon basis.
pub struct Eliminator {
    cols: usize,
    rows: Vec<SparseVec>,
    pivot_to_row: BTreeMap<usize, usize>,
}

impl Eliminator {
    pub fn new(cols: usize) -> Self {
        Eliminator {
            cols,
            rows: Vec::new(),
            pivot_to_row: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_to_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_to_row.contains_key(&col)
    }

    fn reduce_impl(
        &self,
        mut v: SparseVec,
        mut cert: Option<&mut Vec<(usize, Rational)>>,
    ) -> SparseVec {
        // Entries before `clean` are known to sit on non-pivot columns;
        // subtractions only introduce indices past the current hit.
        let mut clean = 0;
        loop {
            let hit = v[clean..]
                .iter()
                .enumerate()
                .find_map(|(k, (c, _))| self.pivot_to_row.get(c).map(|r| (clean + k, *r)));
            let (pos, row_idx) = match hit {
                Some(h) => h,
                None => return v,
            };
            clean = pos;
            let coeff = v[pos].1.clone();
            if let Some(cert) = cert.as_deref_mut() {
                cert.push((row_idx, coeff.clone()));
            }
            v = sub_scaled(&v, &coeff, &self.rows[row_idx]);
        }
    }

    /// Canonical residual of `v` modulo the accumulated row space.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_impl(v, None)
    }

    /// Residual plus the elimination certificate: `v = residual +
    /// sum(coeff_i * row_i)` over the returned `(row index, coeff)` pairs.
    pub fn reduce_with_certificate(&self, v: SparseVec) -> (SparseVec, Vec<(usize, Rational)>) {
        let mut cert = Vec::new();
        let r = self.reduce_impl(v, Some(&mut cert));
        (r, cert)
    }

    /// Reduce and, if a nonzero residual remains, insert it as a new row.
    /// Returns the new pivot column, or `None` if `v` was dependent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut r = self.reduce(v);
        if r.is_empty() {
            return None;
        }
        let lead = r[0].1.clone();
        let inv = lead.recip();
        scale_vec(&mut r, &inv);
        let pivot = r[0].0;
        self.pivot_to_row.insert(pivot, self.rows.len());
        self.rows.push(r);
        Some(pivot)
    }

    /// Row `i` as stored (forward-reduced).
    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    /// Fully back-substituted rows in increasing pivot order: the unique
    /// reduced echelon basis of the accumulated row space.
    pub fn into_rref_rows(self) -> Vec<SparseVec> {
        let Eliminator {
            rows, pivot_to_row, ..
        } = self;
        let order: Vec<usize> = pivot_to_row.values().copied().collect();
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        // Process in decreasing pivot order so every tail entry that hits a
        // pivot can be eliminated against an already-final row.
        for (&pivot, &ri) in pivot_to_row.iter().rev() {
            let mut row = rows[ri].clone();
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| reduced.contains_key(c))
                    .map(|(c, v)| (*c, v.clone()));
                match hit {
                    Some((c, coeff)) => {
                        row = sub_scaled(&row, &coeff, &reduced[&c]);
                    }
                    None => break,
                }
            }
            debug_assert_eq!(row[0].0, pivot);
            reduced.insert(pivot, row);
        }
        let _ = order;
        reduced.into_values().collect()
    }
}

/// Reduced row echelon form. The output keeps the input's row count: the
/// echelon rows come first (pivot columns strictly increasing), then zero
/// rows pad to `m.rows()`.
pub fn rref(m: &SparseMatrix) -> Rref {
    let mut elim = Eliminator::new(m.cols());
    for row in m.to_rows() {
        elim.insert(row);
    }
    let rows = elim.into_rref_rows();
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let rank = rows.len();
    let mut padded = rows;
    padded.resize(m.rows().max(rank), Vec::new());
    Rref {
        echelon: SparseMatrix::from_rows(m.cols(), padded),
        pivots,
    }
}

/// Rank of a sparse matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut elim = Eliminator::new(m.cols());
    for row in m.to_rows() {
        elim.insert(row);
    }
    elim.rank()
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column in
/// increasing column order. Rank-nullity is asserted on every call.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut elim = Eliminator::new(m.cols());
    for row in m.to_rows() {
        elim.insert(row);
    }
    let rank = elim.rank();
    let rows = elim.into_rref_rows();
    let pivot_rows: BTreeMap<usize, &SparseVec> = rows.iter().map(|r| (r[0].0, r)).collect();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_rows.contains_key(&free) {
            continue;
        }
        let mut v: SparseVec = Vec::new();
        for (p, row) in &pivot_rows {
            if let Some((_, coeff)) = row.iter().find(|(c, _)| c == &free) {
                v.push((*p, -coeff.clone()));
            }
        }
        v.push((free, Rational::one()));
        v.sort_by_key(|(c, _)| *c);
        basis.push(v);
    }
    assert_eq!(
        rank + basis.len(),
        m.cols(),
        "rank-nullity violated: rank {} + nullity {} != cols {}",
        rank,
        basis.len(),
        m.cols()
    );
    basis
}

/// Pretty-print a rational without the `Ratio` debug noise.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the `fmt_rational` form back.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() || !den.is_positive() {
        return None;
    }
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[(usize, usize, i64)]) -> SparseMatrix {
        SparseMatrix::from_entries(
            rows,
            cols,
            data.iter().map(|&(r, c, v)| (r, c, rat(v))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = SparseMatrix::identity(2);
        let r = rref(&id);
        assert_eq!(r.echelon, id);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let m = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        let r = rref(&m);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.echelon, mat(2, 2, &[(0, 0, 1), (0, 1, 2)]));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = mat(
            3,
            4,
            &[
                (0, 0, 2),
                (0, 2, 4),
                (1, 1, 3),
                (1, 2, 1),
                (2, 0, 1),
                (2, 1, 3),
                (2, 3, 5),
            ],
        );
        let once = rref(&m);
        let twice = rref(&once.echelon);
        assert_eq!(once.echelon, twice.echelon);
        assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        let z = SparseMatrix::zero(3, 3);
        let k = kernel_basis(&z);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(v, &vec![(i, rat(1))]);
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = mat(
            2,
            3,
            &[(0, 0, 1), (0, 1, 1), (0, 2, 1), (1, 1, 2), (1, 2, 2)],
        );
        for v in kernel_basis(&m) {
            assert!(m.apply(&v).is_empty());
        }
    }

    #[test]
    fn certificate_reconstructs_rows() {
        let m = mat(
            3,
            3,
            &[
                (0, 0, 2),
                (0, 1, 6),
                (1, 0, 1),
                (1, 2, 5),
                (2, 1, 3),
                (2, 2, 7),
            ],
        );
        let mut elim = Eliminator::new(3);
        for row in m.to_rows() {
            elim.insert(row);
        }
        for row in m.to_rows() {
            let (residual, cert) = elim.reduce_with_certificate(row.clone());
            assert!(residual.is_empty());
            let mut acc: SparseVec = Vec::new();
            for (ri, coeff) in &cert {
                acc = sub_scaled(&acc, &-coeff.clone(), elim.row(*ri));
            }
            assert_eq!(acc, row);
        }
    }

    #[test]
    fn out_of_bounds_rejected() {
        let e = SparseMatrix::from_entries(2, 2, vec![(2, 0, rat(1))]);
        assert!(matches!(e, Err(LinalgError::OutOfBounds { .. })));
    }

    #[test]
    fn parse_roundtrip() {
        for x in [rat(0), rat(-3), ratio(7, 2), ratio(-9, 4)] {
            assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
        }
        assert!(parse_rational("1/0").is_none());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
            (1usize..6, 1usize..6).prop_flat_map(|(rows, cols)| {
                proptest::collection::vec((0..rows, 0..cols, -6i64..=6, 1i64..4), 0..14).prop_map(
                    move |entries| {
                        let mut seen = std::collections::BTreeSet::new();
                        let entries = entries
                            .into_iter()
                            .filter(|(r, c, n, _)| *n != 0 && seen.insert((*r, *c)))
                            .map(|(r, c, n, d)| (r, c, ratio(n, d)))
                            .collect();
                        SparseMatrix::from_entries(rows, cols, entries).unwrap()
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn rref_idempotent(m in arb_matrix()) {
                let once = rref(&m);
                let twice = rref(&once.echelon);
                prop_assert_eq!(&once.echelon, &twice.echelon);
                prop_assert_eq!(&once.pivots, &twice.pivots);
            }

            #[test]
            fn rank_nullity(m in arb_matrix()) {
                let k = kernel_basis(&m);
                prop_assert_eq!(rank(&m) + k.len(), m.cols());
                for v in &k {
                    prop_assert!(m.apply(v).is_empty());
                }
            }

            #[test]
            fn rref_is_canonical_under_row_shuffles(m in arb_matrix()) {
                let mut rows = m.to_rows();
                rows.reverse();
                let shuffled = SparseMatrix::from_rows(m.cols(), rows);
                prop_assert_eq!(rref(&m).echelon.to_rows().into_iter().filter(|r| !r.is_empty()).collect::<Vec<_>>(),
                    rref(&shuffled).echelon.to_rows().into_iter().filter(|r| !r.is_empty()).collect::<Vec<_>>());
            }

            #[test]
            fn reduce_is_idempotent(m in arb_matrix(), extra in proptest::collection::vec((0usize..5, -6i64..=6, 1i64..4), 0..6)) {
                let mut elim = Eliminator::new(m.cols());
                for row in m.to_rows() {
                    elim.insert(row);
                }
                let mut seen = std::collections::BTreeSet::new();
                let v: SparseVec = extra
                    .into_iter()
                    .filter(|(c, n, _)| *c < m.cols() && *n != 0 && seen.insert(*c))
                    .map(|(c, n, d)| (c, ratio(n, d)))
                    .collect();
                let mut v = v;
                v.sort_by_key(|(c, _)| *c);
                let once = elim.reduce(v);
                let twice = elim.reduce(once.clone());
                prop_assert_eq!(once, twice);
            }
        }
    }
}
