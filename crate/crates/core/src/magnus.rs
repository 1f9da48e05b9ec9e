//! Free-group words and their Magnus expansions `x -> 1 + x`.

use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use crate::error::{Error, Result};
use crate::ncpoly::NcSeries;
use crate::ring::{CoeffRing, ModRing};
use crate::unitriangular::UnitriMatrix;
use crate::words::{is_lyndon, standard_factorization, Alphabet, Word};
use crate::zassenhaus::j_exponent;

/// Cap on the number of factors of an explicit group word.
pub const MAX_GROUP_WORD: usize = 100_000;

/// A freely reduced word in the generators and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    alphabet: Alphabet,
    factors: Vec<(u8, i8)>,
}

impl GroupWord {
    pub fn identity(alphabet: Alphabet) -> Self {
        GroupWord {
            alphabet,
            factors: Vec::new(),
        }
    }

    pub fn generator(alphabet: Alphabet, letter: u8) -> Result<Self> {
        Self::new(alphabet, vec![(letter, 1)])
    }

    /// Freely reduces `factors`; exponents must be `+1` or `-1`.
    pub fn new(alphabet: Alphabet, factors: Vec<(u8, i8)>) -> Result<Self> {
        let mut out = Self::identity(alphabet);
        for (l, e) in factors {
            if l as usize >= alphabet.size() {
                return Err(Error::LetterOutOfRange {
                    letter: l,
                    size: alphabet.size(),
                });
            }
            if e != 1 && e != -1 {
                return Err(Error::Parse(format!("exponent {e} is not +1 or -1")));
            }
            out.push(l, e);
        }
        out.check_len()?;
        Ok(out)
    }

    fn push(&mut self, l: u8, e: i8) {
        if self.factors.last() == Some(&(l, -e)) {
            self.factors.pop();
        } else {
            self.factors.push((l, e));
        }
    }

    fn check_len(&self) -> Result<()> {
        if self.factors.len() > MAX_GROUP_WORD {
            Err(Error::GroupWordTooLong(MAX_GROUP_WORD))
        } else {
            Ok(())
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn factors(&self) -> &[(u8, i8)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            alphabet: self.alphabet,
            factors: self.factors.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::Mismatch);
        }
        let mut out = self.clone();
        for &(l, e) in &other.factors {
            out.push(l, e);
        }
        out.check_len()?;
        Ok(out)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.inverse().mul(&b.inverse())?.mul(a)?.mul(b)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let reps = e.unsigned_abs();
        if (self.len() as u64).saturating_mul(reps) > 2 * MAX_GROUP_WORD as u64 {
            return Err(Error::GroupWordTooLong(MAX_GROUP_WORD));
        }
        let mut out = Self::identity(self.alphabet);
        for _ in 0..reps {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Parse e.g. `"a^-1 b a b^-1"`, `"comm(a,comm(a,b))^2 * c"`.
    /// Letters are `a`-`i`; `x`, `y`, `z` alias the first three.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let mut p = Parser {
            chars: s.chars().peekable(),
            alphabet,
        };
        let g = p.expr()?;
        p.skip_ws();
        match p.chars.next() {
            None => Ok(g),
            Some(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, &(l, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", (b'a' + l) as char)?;
            if e < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    alphabet: Alphabet,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.chars.next() {
            Some(c) if c == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<GroupWord> {
        let mut g = GroupWord::identity(self.alphabet);
        loop {
            self.skip_ws();
            match self.chars.peek() {
                None | Some(')') | Some(',') => return Ok(g),
                Some('*') => {
                    self.chars.next();
                }
                Some(_) => {
                    let t = self.term()?;
                    g = g.mul(&t)?;
                }
            }
        }
    }

    fn term(&mut self) -> Result<GroupWord> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.chars.peek() == Some(&'^') {
            self.chars.next();
            self.skip_ws();
            let mut digits = String::new();
            if self.chars.peek() == Some(&'-') {
                digits.push('-');
                self.chars.next();
            }
            while let Some(c) = self.chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(c);
                self.chars.next();
            }
            let e: i64 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {digits:?}")))?;
            return atom.pow(e);
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<GroupWord> {
        self.skip_ws();
        match self.chars.next() {
            Some('(') => {
                let g = self.expr()?;
                self.expect(')')?;
                Ok(g)
            }
            Some('c') if self.chars.peek() == Some(&'o') => {
                for want in "omm".chars() {
                    if self.chars.next() != Some(want) {
                        return Err(Error::Parse("expected comm(".into()));
                    }
                }
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                GroupWord::commutator(&a, &b)
            }
            Some(c @ 'a'..='i') => GroupWord::generator(self.alphabet, c as u8 - b'a'),
            Some(c @ 'x'..='z') => GroupWord::generator(self.alphabet, c as u8 - b'x'),
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

fn letter_series<R: CoeffRing>(ring: &R, alphabet: Alphabet, trunc: usize, l: u8, e: i8) -> NcSeries<R> {
    // 1 + x, or 1 - x + x^2 - ... for the inverse
    let top = if e > 0 { trunc.min(1) } else { trunc };
    let terms = (0..=top).map(|k| {
        let sign = if e < 0 && k % 2 == 1 { -1 } else { 1 };
        (Word::from_vec(vec![l; k]), ring.from_i64(sign))
    });
    NcSeries::from_terms(ring.clone(), alphabet, trunc, terms).expect("letter in alphabet")
}

/// Magnus expansion of a group word, truncated at `trunc`.
pub fn magnus_expand<R: CoeffRing>(g: &GroupWord, ring: R, trunc: usize) -> NcSeries<R> {
    let alphabet = g.alphabet;
    let mut factors: Vec<NcSeries<R>> = Vec::with_capacity(2 * alphabet.size());
    for l in alphabet.letters() {
        factors.push(letter_series(&ring, alphabet, trunc, l, 1));
        factors.push(letter_series(&ring, alphabet, trunc, l, -1));
    }
    let mut acc = NcSeries::one(ring, alphabet, trunc);
    for &(l, e) in &g.factors {
        let idx = 2 * l as usize + usize::from(e < 0);
        acc = acc.mul(&factors[idx]).expect("same ring");
    }
    acc
}

/// Magnus coefficient of `w` in `g`.
pub fn epsilon<R: CoeffRing>(g: &GroupWord, w: &Word, ring: R) -> Result<R::Elem> {
    g.alphabet.check(w)?;
    magnus_expand(g, ring, w.len()).coefficient(w)
}

/// Iterated commutator of a Lyndon word along its standard factorization.
pub fn tau_group_word(w: &Word, alphabet: Alphabet) -> Result<GroupWord> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    alphabet.check(w)?;
    tau_word_rec(w, alphabet)
}

fn tau_word_rec(w: &Word, alphabet: Alphabet) -> Result<GroupWord> {
    if w.len() == 1 {
        return GroupWord::generator(alphabet, w.letters()[0]);
    }
    let (u, v) = standard_factorization(w)?;
    GroupWord::commutator(&tau_word_rec(&u, alphabet)?, &tau_word_rec(&v, alphabet)?)
}

/// Magnus expansion of `tau_w`, built by commutators of series.
pub fn tau_series<R: CoeffRing>(w: &Word, ring: R, alphabet: Alphabet, trunc: usize) -> Result<NcSeries<R>> {
    if !is_lyndon(w) {
        return Err(Error::NotLyndon(w.to_string()));
    }
    alphabet.check(w)?;
    Ok(tau_series_rec(w, &ring, alphabet, trunc))
}

fn tau_series_rec<R: CoeffRing>(w: &Word, ring: &R, alphabet: Alphabet, trunc: usize) -> NcSeries<R> {
    if w.len() == 1 {
        return letter_series(ring, alphabet, trunc, w.letters()[0], 1);
    }
    let (u, v) = standard_factorization(w).expect("Lyndon word of length >= 2");
    let su = tau_series_rec(&u, ring, alphabet, trunc);
    let sv = tau_series_rec(&v, ring, alphabet, trunc);
    series_commutator(&su, &sv)
}

/// `f^-1 g^-1 f g` for series with unit constant term.
pub fn series_commutator<R: CoeffRing>(f: &NcSeries<R>, g: &NcSeries<R>) -> NcSeries<R> {
    let fi = f.invert().expect("Magnus series are invertible");
    let gi = g.invert().expect("Magnus series are invertible");
    fi.mul(&gi)
        .and_then(|x| x.mul(f))
        .and_then(|x| x.mul(g))
        .expect("same ring")
}

/// The ring `Z/p^K` with `K = j_n(1) + 1`, enough precision for every
/// level-`n` pairing value.
pub fn default_ring(n: u32, p: u64) -> Result<ModRing> {
    ModRing::new(p, j_exponent(n, 1, p)? + 1)
}

/// Magnus expansion of `sigma_w = tau_w^(p^j_n(|w|))` over `ring` (whose
/// prime is `p`).
pub fn sigma_series(w: &Word, n: u32, ring: ModRing, alphabet: Alphabet, trunc: usize) -> Result<NcSeries<ModRing>> {
    if w.is_empty() || w.len() > n as usize {
        return Err(Error::Precondition(format!("need 1 <= |{w}| <= n = {n}")));
    }
    let j = j_exponent(n, w.len() as u32, ring.p())?;
    let e = ring.p().pow(j);
    Ok(tau_series(w, ring, alphabet, trunc)?.power(e))
}

/// The Magnus representation: entry `(k, l)` is the coefficient of the
/// subword `w[k..l]`, over `Z/p^(j+1)`.
pub fn rho(w: &Word, g: &GroupWord, p: u64, j: u32) -> Result<UnitriMatrix> {
    g.alphabet.check(w)?;
    let ring = ModRing::new(p, j + 1)?;
    let lam = magnus_expand(g, ring, w.len());
    let dim = w.len() + 1;
    let mut m = UnitriMatrix::identity(dim, ring.modulus());
    for k in 0..dim {
        for l in k + 1..dim {
            m.set(k, l, lam.coefficient(&w.slice(k, l))?);
        }
    }
    Ok(m)
}

/// Whether every coefficient of a word of length `1 <= i <= n` in the Magnus
/// expansion of `g` is divisible by `p^j_n(i)` (capped at the precision).
pub fn check_coefficient_bounds(g: &GroupWord, n: u32, p: u64) -> Result<bool> {
    let ring = default_ring(n, p)?;
    let lam = magnus_expand(g, ring, n as usize);
    for (w, c) in lam.terms() {
        if w.is_empty() {
            continue;
        }
        let need = j_exponent(n, w.len() as u32, p)?.min(ring.k());
        if ring.valuation(*c) < need {
            return Ok(false);
        }
    }
    Ok(true)
}
