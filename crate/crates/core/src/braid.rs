//! Word-level braided permutation operators.
//!
//! On the left-invariant basis the braiding sends e_a (x) e_b to
//! e_{aba^{-1}} (x) e_a, so every operator Psi_i and every Psi(w) permutes
//! the monomial basis of a tensor degree. The antisymmetrizer is the signed
//! sum of Psi(w) over the symmetric group, with one fixed reduced word per
//! permutation obtained by bubble sorting.

use std::collections::BTreeMap;

use num::Zero;

use crate::linalg::{rat, Eliminator, SparseVec};
use crate::ncalg::{AlgebraError, GenIdx, ResourceCaps};

/// Apply Psi at position `i` (1-based) to a word in place:
/// (..., a, b, ...) -> (..., a b a^{-1}, a, ...).
pub(crate) fn apply_psi(conj: &[Vec<usize>], word: &mut [GenIdx], i: usize) {
    let a = word[i - 1] as usize;
    let b = word[i] as usize;
    word[i - 1] = conj[a][b] as GenIdx;
    word[i] = a as GenIdx;
}

/// Apply Psi_{i_1} ... Psi_{i_l} as an operator product (rightmost factor
/// acts first).
pub(crate) fn apply_psi_word(conj: &[Vec<usize>], word: &mut [GenIdx], positions: &[usize]) {
    for &i in positions.iter().rev() {
        apply_psi(conj, word, i);
    }
}

/// One (sign, reduced word) pair per element of S_d. The reduced word is in
/// adjacent-transposition positions 1..=d-1, produced by bubble sorting, so
/// its length equals the inversion number.
pub(crate) fn symmetric_group_words(d: usize) -> Vec<(i64, Vec<usize>)> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..d {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    perms
        .into_iter()
        .map(|p| {
            let mut v = p;
            let mut word = Vec::new();
            loop {
                let mut swapped = false;
                for i in 0..v.len().saturating_sub(1) {
                    if v[i] > v[i + 1] {
                        v.swap(i, i + 1);
                        word.push(i + 1);
                        swapped = true;
                    }
                }
                if !swapped {
                    break;
                }
            }
            let sign = if word.len() % 2 == 0 { 1 } else { -1 };
            (sign, word)
        })
        .collect()
}

/// The antisymmetrizer applied to a single basis word, as a signed
/// multiplicity map on words.
pub(crate) fn antisymmetrize_word(
    conj: &[Vec<usize>],
    word: &[GenIdx],
    group: &[(i64, Vec<usize>)],
) -> BTreeMap<Vec<GenIdx>, i64> {
    let mut acc: BTreeMap<Vec<GenIdx>, i64> = BTreeMap::new();
    let mut buf = word.to_vec();
    for (sign, positions) in group {
        buf.copy_from_slice(word);
        apply_psi_word(conj, &mut buf, positions);
        let e = acc.entry(buf.clone()).or_insert(0);
        *e += sign;
        if *e == 0 {
            acc.remove(&buf);
        }
    }
    acc
}

/// Reduced echelon basis of the image of A_d on the degree-d tensor space,
/// in monomial coordinates. Its length is the Woronowicz dimension.
pub(crate) fn antisymmetrizer_image_rref(
    conj: &[Vec<usize>],
    g: usize,
    d: usize,
) -> Vec<SparseVec> {
    if d == 0 {
        return vec![vec![(0, rat(1))]];
    }
    let total = (0..d).fold(1usize, |acc, _| acc * g);
    let group = symmetric_group_words(d);
    let mut elim = Eliminator::new(total);
    let mut word = vec![0 as GenIdx; d];
    for idx in 0..total {
        let mut rem = idx;
        for k in (0..d).rev() {
            word[k] = (rem % g) as GenIdx;
            rem /= g;
        }
        let image = antisymmetrize_word(conj, &word, &group);
        let mut v: SparseVec = image
            .into_iter()
            .map(|(w, mult)| {
                let enc = w.iter().fold(0usize, |acc, &a| acc * g + a as usize);
                (enc, rat(mult))
            })
            .filter(|(_, x)| !x.is_zero())
            .collect();
        v.sort_by_key(|(i, _)| *i);
        elim.insert(v);
    }
    elim.into_rref_rows()
}

/// Guard for antisymmetrizer work: d! * g^d against the configured cap.
pub(crate) fn check_factorial_cap(
    caps: &ResourceCaps,
    g: usize,
    d: usize,
) -> Result<(), AlgebraError> {
    let mut acc: u128 = 1;
    for k in 1..=d {
        acc = acc.saturating_mul(k as u128).saturating_mul(g as u128);
        if acc > caps.max_monomials as u128 {
            return Err(AlgebraError::CapExceeded {
                degree: d,
                count: acc,
                cap: caps.max_monomials,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_has_six_words_with_signs() {
        let words = symmetric_group_words(3);
        assert_eq!(words.len(), 6);
        let total: i64 = words.iter().map(|(s, _)| s).sum();
        assert_eq!(total, 0);
        assert_eq!(words.iter().filter(|(_, w)| w.is_empty()).count(), 1);
    }

    #[test]
    fn word_lengths_are_inversion_numbers() {
        // longest element of S_4 has length 6
        let words = symmetric_group_words(4);
        assert_eq!(words.len(), 24);
        assert_eq!(words.iter().map(|(_, w)| w.len()).max(), Some(6));
    }
}
