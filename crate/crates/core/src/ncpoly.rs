//! Truncated series in non-commuting variables.
//!
//! A [`NcSeries`] is a sparse map from words to nonzero coefficients,
//! together with a truncation degree `D`: every coefficient of a word longer
//! than `D` is unknown. Operations on series of different truncation degree
//! produce a result truncated at the smaller one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, ModRing};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct NcSeries<R: CoeffRing> {
    ring: R,
    alphabet: Alphabet,
    trunc: usize,
    terms: BTreeMap<Word, R::Elem>,
}

impl<R: CoeffRing> NcSeries<R> {
    pub fn zero(ring: R, alphabet: Alphabet, trunc: usize) -> Self {
        NcSeries {
            ring,
            alphabet,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: R, alphabet: Alphabet, trunc: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, alphabet, trunc, Word::empty(), c).expect("empty word always fits")
    }

    pub fn monomial(ring: R, alphabet: Alphabet, trunc: usize, word: Word, coeff: R::Elem) -> Result<Self> {
        Self::from_terms(ring, alphabet, trunc, [(word, coeff)])
    }

    /// Build from `(word, coefficient)` pairs. Repeated words are summed;
    /// words longer than `trunc` are dropped.
    pub fn from_terms<I>(ring: R, alphabet: Alphabet, trunc: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, R::Elem)>,
    {
        let mut out = Self::zero(ring, alphabet, trunc);
        for (w, c) in terms {
            alphabet.check(&w)?;
            if w.len() <= trunc {
                out.accumulate(w, &c);
            }
        }
        Ok(out)
    }

    fn accumulate(&mut self, w: Word, c: &R::Elem) {
        let ring = &self.ring;
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = ring.add(old, c);
                if ring.is_zero(&s) {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                if !ring.is_zero(c) {
                    self.terms.insert(w, c.clone());
                }
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &R::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(&self) -> R::Elem {
        self.terms
            .get(&Word::empty())
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring && self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::Mismatch)
        }
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        let trunc = trunc.min(self.trunc);
        NcSeries {
            ring: self.ring.clone(),
            alphabet: self.alphabet,
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= trunc)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.truncate(other.trunc);
        let trunc = out.trunc;
        for (w, c) in other.terms.iter().filter(|(w, _)| w.len() <= trunc) {
            out.accumulate(w.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = &self.ring;
        NcSeries {
            ring: ring.clone(),
            alphabet: self.alphabet,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), ring.mul(a, c)))
                .filter(|(_, a)| !ring.is_zero(a))
                .collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let ring = &self.ring;
        let mut acc: HashMap<Word, R::Elem> = HashMap::new();
        for (wf, cf) in &self.terms {
            if wf.len() > trunc {
                break;
            }
            let room = trunc - wf.len();
            // graded order: lengths are nondecreasing
            for (wg, cg) in other.terms.iter().take_while(|(w, _)| w.len() <= room) {
                let prod = ring.mul(cf, cg);
                let key = wf.concat(wg);
                match acc.get_mut(&key) {
                    Some(old) => *old = ring.add(old, &prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        NcSeries {
            ring: ring.clone(),
            alphabet: self.alphabet,
            trunc,
            terms: acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect(),
        }
    }

    /// Inverse up to the truncation degree, solved degree by degree.
    pub fn invert(&self) -> Result<Self> {
        let ring = &self.ring;
        let c_inv = ring.inv(&self.constant()).ok_or(Error::NotInvertible)?;
        let neg_c_inv = ring.neg(&c_inv);
        let mut by_deg: Vec<Vec<(&Word, &R::Elem)>> = vec![Vec::new(); self.trunc + 1];
        for (w, c) in &self.terms {
            by_deg[w.len()].push((w, c));
        }
        let mut inv_by_deg: Vec<Vec<(Word, R::Elem)>> = vec![vec![(Word::empty(), c_inv)]];
        for d in 1..=self.trunc {
            let mut acc: HashMap<Word, R::Elem> = HashMap::new();
            for k in 1..=d {
                for &(wf, cf) in &by_deg[k] {
                    for (wg, cg) in &inv_by_deg[d - k] {
                        let prod = ring.mul(cf, cg);
                        let key = wf.concat(wg);
                        match acc.get_mut(&key) {
                            Some(old) => *old = ring.add(old, &prod),
                            None => {
                                acc.insert(key, prod);
                            }
                        }
                    }
                }
            }
            inv_by_deg.push(
                acc.into_iter()
                    .map(|(w, c)| (w, ring.mul(&neg_c_inv, &c)))
                    .filter(|(_, c)| !ring.is_zero(c))
                    .collect(),
            );
        }
        Ok(NcSeries {
            ring: ring.clone(),
            alphabet: self.alphabet,
            trunc: self.trunc,
            terms: inv_by_deg.into_iter().flatten().collect(),
        })
    }

    /// `self^e` by binary exponentiation.
    pub fn power(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.ring.clone(), self.alphabet, self.trunc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Coefficient of `w`; fails when `w` lies beyond the truncation.
    pub fn coefficient(&self, w: &Word) -> Result<R::Elem> {
        if w.len() > self.trunc {
            return Err(Error::BeyondTruncation {
                len: w.len(),
                trunc: self.trunc,
            });
        }
        Ok(self.terms.get(w).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    /// `sum_w f_w g_w` over the support of `g`.
    pub fn pairing(&self, g: &Self) -> Result<R::Elem> {
        self.compatible(g)?;
        let ring = &self.ring;
        let mut acc = ring.zero();
        for (w, cg) in &g.terms {
            let cf = self.coefficient(w)?;
            acc = ring.add(&acc, &ring.mul(&cf, cg));
        }
        Ok(acc)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|w| w.len() == degree)
    }

    /// Reinterpret coefficients in another ring (e.g. integers reduced mod `p^K`).
    pub fn map_ring<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> NcSeries<S> {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), f(c)))
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        NcSeries {
            ring,
            alphabet: self.alphabet,
            trunc: self.trunc,
            terms,
        }
    }
}

impl<R> fmt::Display for NcSeries<R>
where
    R: CoeffRing,
    R::Elem: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = self.ring.one();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if *c == one {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub word: String,
    pub coeff: u64,
}

/// Serialized form of a series over `Z/p^K`, terms in graded order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub p: u64,
    #[serde(rename = "K")]
    pub k: u32,
    pub trunc: usize,
    pub terms: Vec<TermRecord>,
}

impl From<&NcSeries<ModRing>> for SeriesRecord {
    fn from(s: &NcSeries<ModRing>) -> Self {
        SeriesRecord {
            p: s.ring.p(),
            k: s.ring.k(),
            trunc: s.trunc,
            terms: s
                .terms
                .iter()
                .map(|(w, c)| TermRecord {
                    word: w.to_string(),
                    coeff: *c,
                })
                .collect(),
        }
    }
}

impl NcSeries<ModRing> {
    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord::from(self)
    }

    pub fn from_record(rec: &SeriesRecord, alphabet: Alphabet) -> Result<Self> {
        let ring = ModRing::new(rec.p, rec.k)?;
        let terms = rec
            .terms
            .iter()
            .map(|t| Ok((t.word.parse::<Word>()?, ring.reduce(t.coeff as i128))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ring, alphabet, rec.trunc, terms)
    }
}
