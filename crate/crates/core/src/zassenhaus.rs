//! Level-`n` arithmetic of the `p`-Zassenhaus filtration: the exponents
//! `j_n(i)`, the jump set `J(n)`, pairing values and the fundamental matrix.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::sigma_series;
use crate::ncpoly::NcSeries;
use crate::report::Report;
use crate::ring::{is_prime, ModRing};
use crate::shuffle::{indec_dimension, lyndon_span_check, shuffle};
use crate::words::{lyndon_words, necklace_count, Alphabet, Word};

/// Largest level accepted by [`LevelParams`].
pub const MAX_LEVEL: u32 = 8;
/// Largest fundamental matrix computed.
pub const MAX_INDEX: usize = 200;

/// The least `j` with `i * p^j >= n`.
pub fn j_exponent(n: u32, i: u32, p: u64) -> Result<u32> {
    if i == 0 || i > n {
        return Err(Error::Precondition(format!("need 1 <= i <= n, got i = {i}, n = {n}")));
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let mut j = 0;
    let mut reach = i as u64;
    while reach < n as u64 {
        reach *= p;
        j += 1;
    }
    Ok(j)
}

/// `J(n) = {ceil(n / p^k) : k >= 0} ∪ {1}`.
pub fn jump_set(n: u32, p: u64) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([1]);
    let mut pk = 1u64;
    while pk <= n as u64 {
        out.insert((n as u64).div_ceil(pk) as u32);
        pk *= p;
    }
    out
}

/// The lengths `i` with `i' p^j_n(i') >= i p^j_n(i)` for all `i' <= i`.
pub fn jump_set_by_minimality(n: u32, p: u64) -> Result<BTreeSet<u32>> {
    let reach: Vec<u64> = (1..=n)
        .map(|i| Ok(i as u64 * p.pow(j_exponent(n, i, p)?)))
        .collect::<Result<_>>()?;
    Ok((1..=n)
        .filter(|&i| reach[..i as usize].iter().all(|&r| r >= reach[i as usize - 1]))
        .collect())
}

/// Whether the minimality condition selects exactly [`jump_set`].
pub fn jump_set_equivalence(n: u32, p: u64) -> Result<bool> {
    if n > 10_000 {
        return Err(Error::SizeBound(format!("n = {n} exceeds 10000")));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    Ok(jump_set_by_minimality(n, p)? == jump_set(n, p))
}

/// Prime, level, alphabet size and working precision `Z/p^K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    pub p: u64,
    pub n: u32,
    pub m: usize,
    #[serde(rename = "K")]
    pub k: u32,
}

impl LevelParams {
    /// Parameters with the default precision `K = j_n(1) + 1`.
    pub fn new(p: u64, n: u32, m: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(2..=MAX_LEVEL).contains(&n) {
            return Err(Error::Precondition(format!(
                "level n must lie in 2..={MAX_LEVEL}, got {n}"
            )));
        }
        Alphabet::new(m)?;
        let k = j_exponent(n, 1, p)? + 1;
        ModRing::new(p, k)?;
        Ok(LevelParams { p, n, m, k })
    }

    pub fn with_precision(mut self, k: u32) -> Result<Self> {
        ModRing::new(self.p, k)?;
        self.k = k;
        Ok(self)
    }

    pub fn default_precision(&self) -> u32 {
        j_exponent(self.n, 1, self.p).expect("validated") + 1
    }

    pub fn ring(&self) -> ModRing {
        ModRing::new(self.p, self.k).expect("validated")
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.m).expect("validated")
    }

    /// Lyndon words with lengths in `J(n)`, in graded order.
    pub fn index(&self) -> Vec<Word> {
        let lengths: BTreeSet<usize> = jump_set(self.n, self.p).into_iter().map(|i| i as usize).collect();
        lyndon_words(self.alphabet(), &lengths).expect("lengths within bounds")
    }
}

fn sigma_for(w_prime: &Word, params: &LevelParams) -> Result<NcSeries<ModRing>> {
    if w_prime.len() > params.n as usize {
        return Err(Error::Precondition(format!("|{w_prime}| exceeds n = {}", params.n)));
    }
    sigma_series(w_prime, params.n, params.ring(), params.alphabet(), params.n as usize)
}

/// `<w, w'>` read off an already expanded `sigma_{w'}`.
fn pairing_from(w: &Word, sigma: &NcSeries<ModRing>, w_prime: &Word, params: &LevelParams) -> Result<u64> {
    if w.is_empty() || w.len() > params.n as usize {
        return Err(Error::Precondition(format!("need 1 <= |{w}| <= n = {}", params.n)));
    }
    let ring = params.ring();
    let j = j_exponent(params.n, w.len() as u32, params.p)?;
    if j >= ring.k() {
        return Err(Error::Precondition(format!(
            "precision K = {} too small for words of length {}",
            ring.k(),
            w.len()
        )));
    }
    let c = sigma.coefficient(w)?;
    if ring.valuation(c) < j {
        return Err(Error::Divisibility {
            word: w.to_string(),
            lyndon: w_prime.to_string(),
            p: params.p,
            exponent: j,
        });
    }
    Ok(c / params.p.pow(j) % params.p)
}

/// `<w, w'>_n = eps_w(sigma_{w'}) / p^j_n(|w|) mod p`.
pub fn pairing_value(w: &Word, w_prime: &Word, params: &LevelParams) -> Result<u64> {
    let alphabet = params.alphabet();
    alphabet.check(w)?;
    alphabet.check(w_prime)?;
    let sigma = sigma_for(w_prime, params)?;
    pairing_from(w, &sigma, w_prime, params)
}

/// The transposed pairing matrix over the Lyndon index: `matrix[r][c] = <index[c], index[r]>_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalMatrix {
    pub params: LevelParams,
    pub index: Vec<Word>,
    pub matrix: Vec<Vec<u64>>,
}

/// JSON form of a [`FundamentalMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalMatrixRecord {
    pub p: u64,
    pub n: u32,
    pub m: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub index: Vec<String>,
    pub transposed: bool,
    pub matrix: Vec<Vec<u64>>,
    pub signed_matrix: Vec<Vec<i64>>,
}

impl FundamentalMatrix {
    pub fn size(&self) -> usize {
        self.index.len()
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.matrix.iter().enumerate().all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(c, &v)| if r == c { v == 1 } else { r < c || v == 0 })
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_upper_unitriangular() && self.off_diagonal().is_empty()
    }

    /// Nonzero entries off the diagonal as `(row word, column word, value)`.
    pub fn off_diagonal(&self) -> Vec<(Word, Word, u64)> {
        let mut out = Vec::new();
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if r != c && v != 0 {
                    out.push((self.index[r].clone(), self.index[c].clone(), v));
                }
            }
        }
        out
    }

    /// Entries in `(-p/2, p/2]`.
    pub fn signed_matrix(&self) -> Vec<Vec<i64>> {
        let f = ModRing::field(self.params.p).expect("prime");
        self.matrix
            .iter()
            .map(|row| row.iter().map(|&v| f.signed(v)).collect())
            .collect()
    }

    pub fn to_record(&self) -> FundamentalMatrixRecord {
        FundamentalMatrixRecord {
            p: self.params.p,
            n: self.params.n,
            m: self.params.m,
            k: self.params.k,
            index: self.index.iter().map(Word::to_string).collect(),
            transposed: true,
            matrix: self.matrix.clone(),
            signed_matrix: self.signed_matrix(),
        }
    }

    /// Header row of index words, then one row of entries per index word.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.index.iter().map(Word::to_string).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// The level-`n` fundamental matrix; one `sigma` expansion per index word,
/// computed in parallel.
pub fn fundamental_matrix(params: &LevelParams) -> Result<FundamentalMatrix> {
    let index = params.index();
    if index.len() > MAX_INDEX {
        return Err(Error::SizeBound(format!(
            "index of {} words exceeds {MAX_INDEX}",
            index.len()
        )));
    }
    let matrix = index
        .par_iter()
        .map(|w_prime| {
            let sigma = sigma_for(w_prime, params)?;
            index
                .iter()
                .map(|w| pairing_from(w, &sigma, w_prime, params))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FundamentalMatrix {
        params: *params,
        index,
        matrix,
    })
}

/// `sum_{i in J(n)} phi_i(m)`.
pub fn h2_dimension(params: &LevelParams) -> u64 {
    jump_set(params.n, params.p)
        .into_iter()
        .map(|i| necklace_count(params.m as u64, i))
        .sum()
}

/// For `i in J(n)`, `i >= 2`, every pair of nonempty words with `|u| + |v| = i`
/// and every index word `w'`: `sum_w (u ⧢ v)_w <w, w'>_n = 0` in `F_p`.
pub fn verify_shuffle_relations(params: &LevelParams) -> Result<Report> {
    let alphabet = params.alphabet();
    let index = params.index();
    let lengths: Vec<usize> = jump_set(params.n, params.p)
        .into_iter()
        .filter(|&i| i >= 2)
        .map(|i| i as usize)
        .collect();
    let reports = index
        .par_iter()
        .map(|w_prime| {
            let sigma = sigma_for(w_prime, params)?;
            let mut report = Report::default();
            for &i in &lengths {
                let values: BTreeMap<Word, u64> = alphabet
                    .words_of_len(i)
                    .into_iter()
                    .map(|w| Ok((w.clone(), pairing_from(&w, &sigma, w_prime, params)?)))
                    .collect::<Result<_>>()?;
                for r in 1..i {
                    for u in alphabet.words_of_len(r) {
                        for v in alphabet.words_of_len(i - r) {
                            let s = shuffle(&u, &v)?;
                            let total: u128 = s.terms().map(|(w, &c)| c as u128 * values[w] as u128).sum();
                            report.check(total.is_multiple_of(params.p as u128), || {
                                format!(
                                    "shuffle {u} * {v} against {w_prime}: sum = {}",
                                    total % params.p as u128
                                )
                            });
                        }
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = Report::default();
    for r in reports {
        total.merge(r);
    }
    Ok(total)
}

/// The three sides of the dimension count, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionCount {
    pub m: usize,
    pub indec: usize,
    pub h2: u64,
    pub index: usize,
    pub lyndon_span: bool,
}

impl DimensionCount {
    pub fn holds(&self) -> bool {
        (self.m + self.indec) as u64 == self.h2 && self.h2 == self.index as u64 && self.lyndon_span
    }
}

pub fn dimension_count(params: &LevelParams) -> Result<DimensionCount> {
    if params.n as u64 >= params.p {
        return Err(Error::Precondition(format!(
            "need n < p, got n = {}, p = {}",
            params.n, params.p
        )));
    }
    let (m, n, p) = (params.m, params.n as usize, params.p);
    Ok(DimensionCount {
        m,
        indec: indec_dimension(m, n, p)?,
        h2: h2_dimension(params),
        index: params.index().len(),
        lyndon_span: lyndon_span_check(m, n, p)?,
    })
}

/// `m + dim Sh_indec,n = dim H^2 = |index|`, and Lyndon words span the quotient.
pub fn main_theorem_check(params: &LevelParams) -> Result<bool> {
    Ok(dimension_count(params)?.holds())
}
