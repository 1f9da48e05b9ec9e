//! Words over a small ordered alphabet and Lyndon combinatorics.
//!
//! Letters are indices `0..m`, rendered `a`, `b`, `c`, ... The derived
//! [`Ord`] on [`Word`] is the graded order (length first, then alphabetic);
//! the plain alphabetic order is [`compare_alp`].

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Hard bound on word length.
pub const MAX_WORD_LEN: usize = 16;
/// Hard bound on alphabet size.
pub const MAX_ALPHABET: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if (1..=MAX_ALPHABET).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(Error::AlphabetSize(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        0..self.0
    }

    pub fn contains(self, w: &Word) -> bool {
        w.letters().iter().all(|&l| l < self.0)
    }

    pub fn check(self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&l| l >= self.0) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }

    /// All words of exactly `len` letters, in alphabetic order.
    pub fn words_of_len(self, len: usize) -> Vec<Word> {
        let m = self.size();
        let count = m.pow(len as u32);
        let mut out = Vec::with_capacity(count);
        let mut cur = vec![0u8; len];
        for _ in 0..count {
            out.push(Word(cur.clone()));
            for pos in (0..len).rev() {
                cur[pos] += 1;
                if (cur[pos] as usize) < m {
                    break;
                }
                cur[pos] = 0;
            }
        }
        out
    }

    /// All words of length `1..=max_len`, sorted by the graded order.
    pub fn words_up_to(self, max_len: usize) -> Vec<Word> {
        (1..=max_len).flat_map(|l| self.words_of_len(l)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong {
                len: letters.len(),
                max: MAX_WORD_LEN,
            });
        }
        if let Some(&letter) = letters.iter().find(|&&l| l as usize >= MAX_ALPHABET) {
            return Err(Error::LetterOutOfRange {
                letter,
                size: MAX_ALPHABET,
            });
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    pub(crate) fn from_vec(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Largest letter index plus one, or 0 for the empty word.
    pub fn min_alphabet(&self) -> usize {
        self.0.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_graded(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'a'..='i' => Ok(c as u8 - b'a'),
                _ => Err(Error::InvalidLetter(c)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(letters)
    }
}

/// Alphabetic order: a proper prefix precedes its extensions.
pub fn compare_alp(w1: &Word, w2: &Word) -> Ordering {
    w1.0.cmp(&w2.0)
}

/// Length first, then alphabetic.
pub fn compare_graded(w1: &Word, w2: &Word) -> Ordering {
    w1.len().cmp(&w2.len()).then_with(|| w1.0.cmp(&w2.0))
}

pub fn is_lyndon(w: &Word) -> bool {
    let s = w.letters();
    !s.is_empty() && (1..s.len()).all(|k| s < &s[k..])
}

/// Lyndon words whose length lies in `lengths`, sorted by the graded order.
///
/// Enumeration walks the successor rule of Duval's algorithm over all
/// Lyndon words up to the largest requested length.
pub fn lyndon_words(alphabet: Alphabet, lengths: &BTreeSet<usize>) -> Result<Vec<Word>> {
    let Some(&max_len) = lengths.iter().next_back() else {
        return Ok(Vec::new());
    };
    if max_len > MAX_WORD_LEN {
        return Err(Error::WordTooLong {
            len: max_len,
            max: MAX_WORD_LEN,
        });
    }
    if max_len == 0 {
        return Ok(Vec::new());
    }
    let top = alphabet.size() as u8 - 1;
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if lengths.contains(&w.len()) {
            out.push(Word(w.clone()));
        }
        let period = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out.sort();
    Ok(out)
}

/// Split a Lyndon word `w = uv` where `v` is its longest proper Lyndon suffix.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word)> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    if w.len() == 1 {
        return Err(Error::SingleLetter(w.to_string()));
    }
    let split = (1..w.len())
        .find(|&k| is_lyndon(&w.slice(k, w.len())))
        .expect("the last letter is always a Lyndon suffix");
    Ok((w.slice(0, split), w.slice(split, w.len())))
}

/// A non-associative word: a binary tree with letters at the leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketedWord {
    Letter(u8),
    Pair(Box<BracketedWord>, Box<BracketedWord>),
}

impl BracketedWord {
    pub fn pair(left: BracketedWord, right: BracketedWord) -> Self {
        BracketedWord::Pair(Box::new(left), Box::new(right))
    }

    /// Drop the brackets.
    pub fn foliage(&self) -> Word {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        Word(out)
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            BracketedWord::Letter(l) => out.push(*l),
            BracketedWord::Pair(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            BracketedWord::Letter(_) => 1,
            BracketedWord::Pair(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for BracketedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketedWord::Letter(l) => write!(f, "{}", (b'a' + l) as char),
            BracketedWord::Pair(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Bracketing of a Lyndon word through recursive standard factorization.
pub fn bracketing(w: &Word) -> Result<BracketedWord> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    Ok(bracket_lyndon(w))
}

fn bracket_lyndon(w: &Word) -> BracketedWord {
    if w.len() == 1 {
        return BracketedWord::Letter(w.0[0]);
    }
    let (u, v) = standard_factorization(w).expect("Lyndon word of length >= 2");
    BracketedWord::pair(bracket_lyndon(&u), bracket_lyndon(&v))
}

/// Check the Hall-set axioms on an explicit finite family.
///
/// `candidates` lists the family in increasing order. Letters are the
/// letters occurring in any foliage. The membership axiom is tested on every
/// pair of candidates whose combined length is at most `max_len`.
pub fn check_hall_conditions(candidates: &[BracketedWord], max_len: usize) -> bool {
    let family: Vec<&BracketedWord> = candidates.iter().filter(|h| h.len() <= max_len).collect();
    let rank: HashMap<&BracketedWord, usize> = family.iter().enumerate().map(|(k, h)| (*h, k)).collect();
    if rank.len() != family.len() {
        return false;
    }

    // the alphabet embeds as an ordered subset
    let mut letters: BTreeSet<u8> = BTreeSet::new();
    for h in &family {
        letters.extend(h.foliage().letters().iter().copied());
    }
    let mut prev: Option<usize> = None;
    for l in letters {
        let Some(&r) = rank.get(&BracketedWord::Letter(l)) else {
            return false;
        };
        if prev.is_some_and(|q| q >= r) {
            return false;
        }
        prev = Some(r);
    }

    let admissible = |left: &BracketedWord, right: &BracketedWord| -> bool {
        let (Some(&rl), Some(&rr)) = (rank.get(left), rank.get(right)) else {
            return false;
        };
        if rl >= rr {
            return false;
        }
        match left {
            BracketedWord::Letter(_) => true,
            BracketedWord::Pair(_, h2) => rank.get(&**h2).is_some_and(|&r2| r2 >= rr),
        }
    };

    for (k, h) in family.iter().enumerate() {
        if let BracketedWord::Pair(left, right) = h {
            match rank.get(&**right) {
                Some(&r) if k < r => {}
                _ => return false,
            }
            if !admissible(left, right) {
                return false;
            }
        }
    }
    for left in &family {
        for right in &family {
            if left.len() + right.len() > max_len {
                continue;
            }
            let h = BracketedWord::pair((*left).clone(), (*right).clone());
            if rank.contains_key(&h) != admissible(left, right) {
                return false;
            }
        }
    }
    true
}

fn mobius(mut d: u64) -> i64 {
    let mut sign = 1;
    let mut q = 2;
    while q * q <= d {
        if d.is_multiple_of(q) {
            d /= q;
            if d.is_multiple_of(q) {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}

/// Witt's necklace count: the number of Lyndon words of length `i` over `m` letters.
pub fn necklace_count(m: u64, i: u32) -> u64 {
    assert!(i >= 1, "length must be positive");
    let total: i128 = (1..=i as u64)
        .filter(|d| (i as u64).is_multiple_of(*d))
        .map(|d| mobius(d) as i128 * (m as i128).pow(i / d as u32))
        .sum();
    (total / i as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn brute_lyndon(m: usize, len: usize) -> Vec<Word> {
        let mut v: Vec<Word> = Alphabet::new(m)
            .unwrap()
            .words_of_len(len)
            .into_iter()
            .filter(|x| (1..x.len()).all(|k| compare_alp(x, &x.slice(k, x.len())) == Ordering::Less))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn orders() {
        assert_eq!(compare_alp(&w("ab"), &w("b")), Ordering::Less);
        assert_eq!(compare_alp(&w("ab"), &w("abb")), Ordering::Less);
        // x<y<z rendered as a<b<c
        assert_eq!(compare_alp(&w("abc"), &w("acb")), Ordering::Less);
        assert_eq!(compare_graded(&w("b"), &w("ab")), Ordering::Less);
        assert_eq!(compare_graded(&w("ab"), &w("ba")), Ordering::Less);
        assert_eq!(compare_graded(&Word::empty(), &w("a")), Ordering::Less);
        assert_eq!(compare_alp(&Word::empty(), &w("a")), Ordering::Less);
    }

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&w("ab")));
        assert!(!is_lyndon(&w("aa")));
        assert!(is_lyndon(&w("aab")));
        assert!(!is_lyndon(&Word::empty()));
        assert!(is_lyndon(&w("a")));
        assert!(!is_lyndon(&w("aba")));
    }

    #[test]
    fn lyndon_enumeration_small() {
        let two = Alphabet::new(2).unwrap();
        let got = lyndon_words(two, &BTreeSet::from([1, 2, 3])).unwrap();
        let want: Vec<Word> = ["a", "b", "ab", "aab", "abb"].iter().map(|s| w(s)).collect();
        assert_eq!(got, want);
        assert_eq!(lyndon_words(two, &BTreeSet::from([2])).unwrap(), vec![w("ab")]);
        let three = Alphabet::new(3).unwrap();
        assert_eq!(lyndon_words(three, &BTreeSet::from([3])).unwrap().len(), 8);
        assert!(lyndon_words(two, &BTreeSet::from([17])).is_err());
    }

    #[test]
    fn lyndon_enumeration_matches_brute_force() {
        for m in 1..=3 {
            let alph = Alphabet::new(m).unwrap();
            for len in 1..=8 {
                let got = lyndon_words(alph, &BTreeSet::from([len])).unwrap();
                assert_eq!(got, brute_lyndon(m, len), "m={m} len={len}");
                assert_eq!(got.len() as u64, necklace_count(m as u64, len as u32));
            }
        }
    }

    #[test]
    fn factorization() {
        assert_eq!(standard_factorization(&w("ab")).unwrap(), (w("a"), w("b")));
        assert_eq!(standard_factorization(&w("aab")).unwrap(), (w("a"), w("ab")));
        assert_eq!(standard_factorization(&w("aabab")).unwrap(), (w("aab"), w("ab")));
        assert!(matches!(standard_factorization(&w("ba")), Err(Error::NotLyndon(_))));
        assert!(matches!(standard_factorization(&w("a")), Err(Error::SingleLetter(_))));
    }

    #[test]
    fn factorization_equivalence() {
        // longest Lyndon suffix == alphabetically minimal Lyndon right factor
        let alph = Alphabet::new(3).unwrap();
        for x in lyndon_words(alph, &(2..=8).collect()).unwrap() {
            let (u, v) = standard_factorization(&x).unwrap();
            assert!(is_lyndon(&u));
            assert!(is_lyndon(&v));
            assert_eq!(u.concat(&v), x);
            let min_alp = (1..x.len())
                .map(|k| x.slice(k, x.len()))
                .filter(is_lyndon)
                .min_by(compare_alp)
                .unwrap();
            assert_eq!(v, min_alp, "{x}");
        }
    }

    #[test]
    fn bracketings() {
        assert_eq!(bracketing(&w("ab")).unwrap().to_string(), "[a,b]");
        assert_eq!(bracketing(&w("aab")).unwrap().to_string(), "[a,[a,b]]");
        assert_eq!(bracketing(&w("abb")).unwrap().to_string(), "[[a,b],b]");
        assert_eq!(bracketing(&w("acb")).unwrap().to_string(), "[[a,c],b]");
        assert!(bracketing(&w("ba")).is_err());
        let b = bracketing(&w("aabab")).unwrap();
        assert_eq!(b.foliage(), w("aabab"));
    }

    fn lyndon_family(m: usize, max_len: usize) -> Vec<BracketedWord> {
        let mut ws = lyndon_words(Alphabet::new(m).unwrap(), &(1..=max_len).collect()).unwrap();
        ws.sort_by(compare_alp);
        ws.iter().map(|x| bracketing(x).unwrap()).collect()
    }

    #[test]
    fn hall_conditions() {
        assert!(check_hall_conditions(&lyndon_family(2, 4), 4));
        for m in 1..=3 {
            assert!(check_hall_conditions(&lyndon_family(m, 6), 6));
        }
        let a = BracketedWord::Letter(0);
        let b = BracketedWord::Letter(1);
        let ba = BracketedWord::pair(b.clone(), a.clone());
        assert!(!check_hall_conditions(&[a.clone(), b.clone(), ba], 2));
        assert!(check_hall_conditions(&[a.clone(), b.clone()], 1));
        // letters out of natural order
        assert!(!check_hall_conditions(&[b.clone(), a.clone()], 1));
        // [a,b] missing although admissible
        assert!(!check_hall_conditions(&[a, b], 2));
    }

    #[test]
    fn necklaces() {
        for m in 1..=9 {
            assert_eq!(necklace_count(m, 1), m);
        }
        assert_eq!(necklace_count(2, 3), 2);
        assert_eq!(necklace_count(2, 6), 9);
        assert_eq!(necklace_count(3, 3), 8);
        assert_eq!(necklace_count(9, 16), {
            // sum over divisors 1,2,4,8,16 with mu = 1,-1,0,0,0
            (9u64.pow(16) - 9u64.pow(8)) / 16
        });
    }

    #[test]
    fn parse_words() {
        assert_eq!(w("").len(), 0);
        assert_eq!(w("cab").letters(), &[2, 0, 1]);
        assert!("xyz".parse::<Word>().is_err());
        assert!("aaaaaaaaaaaaaaaaa".parse::<Word>().is_err());
        assert!(Alphabet::new(2).unwrap().check(&w("abc")).is_err());
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(10).is_err());
    }

    #[test]
    fn graded_word_listing() {
        let words = Alphabet::new(2).unwrap().words_up_to(3);
        assert_eq!(words.len(), 14);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }
}
