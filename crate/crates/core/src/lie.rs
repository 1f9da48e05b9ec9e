//! Lie monomials of bracketed words, expanded in the free associative algebra.

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::ncpoly::NcSeries;
use crate::ring::{CoeffRing, ModRing};
use crate::words::{Alphabet, BracketedWord, Word};

/// Expand `b` with `[u, v] = uv - vu`. The result is homogeneous of degree `|b|`.
pub fn lie_expand<R: CoeffRing>(b: &BracketedWord, ring: R, alphabet: Alphabet, trunc: usize) -> Result<NcSeries<R>> {
    if b.len() > trunc {
        return Err(Error::BeyondTruncation { len: b.len(), trunc });
    }
    alphabet.check(&b.foliage())?;
    Ok(expand(b, &ring, alphabet, trunc))
}

fn expand<R: CoeffRing>(b: &BracketedWord, ring: &R, alphabet: Alphabet, trunc: usize) -> NcSeries<R> {
    match b {
        BracketedWord::Letter(l) => {
            NcSeries::monomial(ring.clone(), alphabet, trunc, Word::letter(*l), ring.one()).expect("letter in alphabet")
        }
        BracketedWord::Pair(u, v) => {
            let eu = expand(u, ring, alphabet, trunc);
            let ev = expand(v, ring, alphabet, trunc);
            let uv = eu.mul(&ev).expect("same ring");
            let vu = ev.mul(&eu).expect("same ring");
            uv.sub(&vu).expect("same ring")
        }
    }
}

/// The `p^j`-th associative power of the expansion of `b`, with `p` the
/// characteristic prime of `ring`.
pub fn restricted_power_expand(
    j: u32,
    b: &BracketedWord,
    ring: ModRing,
    alphabet: Alphabet,
    trunc: usize,
) -> Result<NcSeries<ModRing>> {
    let e = ring
        .p()
        .checked_pow(j)
        .ok_or_else(|| Error::SizeBound(format!("{}^{j}", ring.p())))?;
    let degree = (b.len() as u64).saturating_mul(e);
    if degree > trunc as u64 {
        return Err(Error::BeyondTruncation {
            len: degree as usize,
            trunc,
        });
    }
    Ok(lie_expand(b, ring, alphabet, trunc)?.power(e))
}

fn column(w: &Word, m: usize) -> usize {
    w.letters().iter().fold(0, |acc, &l| acc * m + l as usize)
}

/// Rank over `F_p` of the coefficient matrix of homogeneous polynomials of
/// the given degree. Coefficients are read modulo `p`.
pub fn homogeneous_rank(polys: &[NcSeries<ModRing>], degree: usize, p: u64) -> Result<usize> {
    let field = ModRing::field(p)?;
    let mut ech = Echelon::new(field);
    for f in polys {
        if f.ring().p() != p {
            return Err(Error::Mismatch);
        }
        if !f.is_homogeneous(degree) {
            return Err(Error::NotHomogeneous(degree));
        }
        let m = f.alphabet().size();
        ech.insert(f.terms().map(|(w, c)| (column(w, m), (*c % p) as i64)));
    }
    Ok(ech.rank())
}
