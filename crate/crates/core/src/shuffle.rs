//! Shuffle and infiltration products, and the degree-`n` indecomposable
//! quotient of the shuffle algebra over `F_p`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::ncpoly::NcSeries;
use crate::ring::{Integers, ModRing};
use crate::words::{compare_alp, lyndon_words, Alphabet, Word, MAX_WORD_LEN};

pub use crate::IntPoly;

const MAX_QUOTIENT_WORDS: u64 = 100_000;

type Terms = HashMap<Vec<u8>, i64>;

fn product(u: &[u8], v: &[u8], merge: bool, memo: &mut HashMap<(usize, usize), Terms>) -> Terms {
    if u.is_empty() || v.is_empty() {
        let rest = if u.is_empty() { v } else { u };
        return Terms::from([(rest.to_vec(), 1)]);
    }
    let key = (u.len(), v.len());
    if let Some(t) = memo.get(&key) {
        return t.clone();
    }
    let mut out = Terms::new();
    let mut prepend = |letter: u8, part: Terms| {
        for (w, c) in part {
            let mut x = Vec::with_capacity(w.len() + 1);
            x.push(letter);
            x.extend(w);
            *out.entry(x).or_insert(0) += c;
        }
    };
    let left = product(&u[1..], v, merge, memo);
    prepend(u[0], left);
    let right = product(u, &v[1..], merge, memo);
    prepend(v[0], right);
    if merge && u[0] == v[0] {
        let both = product(&u[1..], &v[1..], merge, memo);
        prepend(u[0], both);
    }
    memo.insert(key, out.clone());
    out
}

fn to_poly(u: &Word, v: &Word, merge: bool) -> Result<IntPoly> {
    let len = u.len() + v.len();
    if len > MAX_WORD_LEN {
        return Err(Error::WordTooLong { len, max: MAX_WORD_LEN });
    }
    // suffix pairs are keyed by their lengths
    let mut memo = HashMap::new();
    let terms = product(u.letters(), v.letters(), merge, &mut memo);
    let alphabet = Alphabet::new(u.min_alphabet().max(v.min_alphabet()).max(1))?;
    NcSeries::from_terms(
        Integers::new(),
        alphabet,
        MAX_WORD_LEN,
        terms.into_iter().map(|(w, c)| (Word::from_vec(w), c)),
    )
}

/// `u ⧢ v`, the sum over all riffle interleavings.
pub fn shuffle(u: &Word, v: &Word) -> Result<IntPoly> {
    to_poly(u, v, false)
}

/// `u ↓ v`, defined by `au' ↓ bv' = a(u' ↓ bv') + b(au' ↓ v') + [a = b] a(u' ↓ v')`.
pub fn infiltration(u: &Word, v: &Word) -> Result<IntPoly> {
    to_poly(u, v, true)
}

fn check_quotient_size(m: usize, n: usize) -> Result<u64> {
    let count = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if count > MAX_QUOTIENT_WORDS || n > MAX_WORD_LEN {
        return Err(Error::SizeBound(format!("{m}^{n} words exceeds {MAX_QUOTIENT_WORDS}")));
    }
    Ok(count)
}

fn column(w: &Word, m: usize) -> usize {
    w.letters().iter().fold(0, |acc, &l| acc * m + l as usize)
}

/// Echelon form of all `u ⧢ v` with `u, v` nonempty, `u <=_alp v`, `|u| + |v| = n`.
fn relation_echelon(alphabet: Alphabet, n: usize, p: u64) -> Result<Echelon> {
    let mut ech = Echelon::new(ModRing::field(p)?);
    let m = alphabet.size();
    for r in 1..n {
        let us = alphabet.words_of_len(r);
        let vs = alphabet.words_of_len(n - r);
        for u in &us {
            for v in &vs {
                if compare_alp(u, v).is_gt() {
                    continue;
                }
                let s = shuffle(u, v)?;
                ech.insert(s.terms().map(|(w, c)| (column(w, m), *c)));
            }
        }
    }
    Ok(ech)
}

/// `dim_{F_p}` of degree-`n` words modulo all shuffles of nonempty words.
pub fn indec_dimension(m: usize, n: usize, p: u64) -> Result<usize> {
    let total = check_quotient_size(m, n)?;
    let alphabet = Alphabet::new(m)?;
    let ech = relation_echelon(alphabet, n, p)?;
    Ok(total as usize - ech.rank())
}

/// Whether the Lyndon words of length `n` span the indecomposable quotient.
pub fn lyndon_span_check(m: usize, n: usize, p: u64) -> Result<bool> {
    if n as u64 >= p {
        return Err(Error::Precondition(format!("need n < p, got n = {n}, p = {p}")));
    }
    let total = check_quotient_size(m, n)?;
    let alphabet = Alphabet::new(m)?;
    let mut ech = relation_echelon(alphabet, n, p)?;
    for w in lyndon_words(alphabet, &[n].into())? {
        ech.insert([(column(&w, m), 1)]);
    }
    Ok(ech.rank() as u64 == total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::necklace_count;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn terms(f: &IntPoly) -> Vec<(String, i64)> {
        f.terms().map(|(w, c)| (w.to_string(), *c)).collect()
    }

    fn strs(v: &[(&str, i64)]) -> Vec<(String, i64)> {
        v.iter().map(|(s, c)| (s.to_string(), *c)).collect()
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(
            terms(&shuffle(&w("a"), &w("b")).unwrap()),
            strs(&[("ab", 1), ("ba", 1)])
        );
        assert_eq!(terms(&shuffle(&w("a"), &w("a")).unwrap()), strs(&[("aa", 2)]));
        assert_eq!(
            terms(&shuffle(&w("ab"), &w("c")).unwrap()),
            strs(&[("abc", 1), ("acb", 1), ("cab", 1)])
        );
        assert_eq!(terms(&shuffle(&Word::empty(), &w("ab")).unwrap()), strs(&[("ab", 1)]));
        let long = Word::new(vec![0; 9]).unwrap();
        assert!(shuffle(&long, &long).is_err());
    }

    #[test]
    fn infiltration_examples() {
        assert_eq!(
            terms(&infiltration(&w("a"), &w("b")).unwrap()),
            strs(&[("ab", 1), ("ba", 1)])
        );
        assert_eq!(
            terms(&infiltration(&w("a"), &w("a")).unwrap()),
            strs(&[("a", 1), ("aa", 2)])
        );
        assert_eq!(
            terms(&infiltration(&w("ab"), &w("a")).unwrap()),
            strs(&[("ab", 1), ("aab", 2), ("aba", 1)])
        );
    }

    #[test]
    fn quotient_dimensions() {
        assert_eq!(indec_dimension(2, 2, 3).unwrap(), 1);
        assert_eq!(indec_dimension(2, 3, 5).unwrap(), 2);
        assert_eq!(indec_dimension(2, 4, 5).unwrap(), 3);
        for (m, n, p) in [(2, 5, 7), (3, 3, 5), (3, 4, 5)] {
            assert_eq!(
                indec_dimension(m, n, p).unwrap() as u64,
                necklace_count(m as u64, n as u32)
            );
        }
        assert!(indec_dimension(10, 2, 3).is_err());
        assert!(indec_dimension(4, 9, 3).is_err());
    }

    #[test]
    fn lyndon_spans() {
        assert!(lyndon_span_check(2, 3, 5).unwrap());
        assert!(lyndon_span_check(2, 4, 7).unwrap());
        assert!(lyndon_span_check(3, 3, 5).unwrap());
        assert!(lyndon_span_check(3, 2, 3).unwrap());
        assert!(lyndon_span_check(2, 3, 3).is_err());
    }
}
