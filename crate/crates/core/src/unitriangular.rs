//! Exhaustive computations in the finite groups `U_i(Z/p^(j+1))` of
//! unitriangular `(i+1) x (i+1)` matrices.
//!
//! Group elements are numbered `0..order` by their above-diagonal entries
//! read as a mixed-radix integer, so subgroups are plain sets of ids.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::is_prime;
use crate::zassenhaus::{j_exponent, jump_set};

/// Largest group order handled by exhaustive enumeration.
pub const MAX_ORDER: u64 = 1_000_000;
const MAX_ENTRIES: usize = 15;

/// A unitriangular matrix over `Z/modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitriMatrix {
    dim: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl UnitriMatrix {
    pub fn identity(dim: usize, modulus: u64) -> Self {
        let mut entries = vec![0; dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = 1 % modulus;
        }
        UnitriMatrix { dim, modulus, entries }
    }

    /// `I + value * E_{row,col}` (0-based, `row < col`).
    pub fn elementary(dim: usize, modulus: u64, row: usize, col: usize, value: u64) -> Self {
        let mut m = Self::identity(dim, modulus);
        m.set(row, col, value);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.dim + col]
    }

    /// Set an above-diagonal entry.
    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        assert!(row < col && col < self.dim, "only above-diagonal entries are free");
        self.entries[row * self.dim + col] = value % self.modulus;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim, self.modulus)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.modulus), (other.dim, other.modulus));
        let d = self.dim;
        let m = self.modulus as u128;
        let mut out = Self::identity(d, self.modulus);
        for r in 0..d {
            for c in r + 1..d {
                let s: u128 = (r..=c)
                    .map(|k| self.get(r, k) as u128 * other.get(k, c) as u128 % m)
                    .sum();
                out.entries[r * d + c] = (s % m) as u64;
            }
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim;
        let m = self.modulus as u128;
        let mut out = Self::identity(d, self.modulus);
        for r in (0..d).rev() {
            for c in r + 1..d {
                let s: u128 = (r + 1..=c)
                    .map(|k| self.get(r, k) as u128 * out.get(k, c) as u128 % m)
                    .sum();
                out.entries[r * d + c] = ((m - s % m) % m) as u64;
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.dim, self.modulus);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for UnitriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

type Packed = [u32; MAX_ENTRIES];

/// `U_i(Z/p^(j+1))` with a numbering of its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUTGroup {
    i: usize,
    p: u64,
    j: u32,
    modulus: u64,
    order: u64,
    /// above-diagonal positions, row-major
    positions: Vec<(usize, usize)>,
    /// for each position, the index pairs of the inner products
    plan: Vec<Vec<(u8, u8)>>,
}

impl FiniteUTGroup {
    pub fn new(i: usize, p: u64, j: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if i == 0 {
            return Err(Error::Precondition("size parameter i must be positive".into()));
        }
        let modulus = p.checked_pow(j + 1).ok_or(Error::ModulusOverflow { p, k: j + 1 })?;
        let n = i * (i + 1) / 2;
        let order = (modulus as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::SizeBound(format!(
                "U_{i}(Z/{modulus}) has order {modulus}^{n} > {MAX_ORDER}"
            )));
        }
        let dim = i + 1;
        let positions: Vec<(usize, usize)> = (0..dim).flat_map(|r| (r + 1..dim).map(move |c| (r, c))).collect();
        let index: HashMap<(usize, usize), u8> = positions.iter().enumerate().map(|(t, &rc)| (rc, t as u8)).collect();
        let plan = positions
            .iter()
            .map(|&(r, c)| (r + 1..c).map(|k| (index[&(r, k)], index[&(k, c)])).collect())
            .collect();
        Ok(FiniteUTGroup {
            i,
            p,
            j,
            modulus,
            order: order as u64,
            positions,
            plan,
        })
    }

    pub fn size_param(&self) -> usize {
        self.i
    }

    pub fn dim(&self) -> usize {
        self.i + 1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn decode(&self, mut id: u32) -> Packed {
        let mut a = [0u32; MAX_ENTRIES];
        for slot in a.iter_mut().take(self.positions.len()) {
            *slot = (id as u64 % self.modulus) as u32;
            id = (id as u64 / self.modulus) as u32;
        }
        a
    }

    fn encode(&self, a: &Packed) -> u32 {
        let mut id = 0u64;
        for t in (0..self.positions.len()).rev() {
            id = id * self.modulus + a[t] as u64;
        }
        id as u32
    }

    fn mul_packed(&self, a: &Packed, b: &Packed) -> Packed {
        let mut out = [0u32; MAX_ENTRIES];
        for (t, terms) in self.plan.iter().enumerate() {
            let mut s = a[t] as u64 + b[t] as u64;
            for &(x, y) in terms {
                s += a[x as usize] as u64 * b[y as usize] as u64;
            }
            out[t] = (s % self.modulus) as u32;
        }
        out
    }

    fn inv_packed(&self, a: &Packed) -> Packed {
        let mut out = [0u32; MAX_ENTRIES];
        // rows bottom-up so that the needed entries of the inverse are known
        for t in (0..self.positions.len()).rev() {
            let mut s = a[t] as u64;
            for &(x, y) in &self.plan[t] {
                s += a[x as usize] as u64 * out[y as usize] as u64 % self.modulus;
            }
            out[t] = ((self.modulus - s % self.modulus) % self.modulus) as u32;
        }
        out
    }

    fn pow_packed(&self, a: &Packed, mut e: u64) -> Packed {
        let mut acc = [0u32; MAX_ENTRIES];
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_packed(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_packed(&base, &base);
            }
        }
        acc
    }

    fn commutator_packed(&self, a: &Packed, a_inv: &Packed, b: &Packed, b_inv: &Packed) -> Packed {
        let x = self.mul_packed(a_inv, b_inv);
        let x = self.mul_packed(&x, a);
        self.mul_packed(&x, b)
    }

    pub fn element_id(&self, m: &UnitriMatrix) -> Result<u32> {
        if m.dim() != self.dim() || m.modulus() != self.modulus {
            return Err(Error::Mismatch);
        }
        let mut a = [0u32; MAX_ENTRIES];
        for (t, &(r, c)) in self.positions.iter().enumerate() {
            a[t] = m.get(r, c) as u32;
        }
        Ok(self.encode(&a))
    }

    pub fn element(&self, id: u32) -> UnitriMatrix {
        let a = self.decode(id);
        let mut m = UnitriMatrix::identity(self.dim(), self.modulus);
        for (t, &(r, c)) in self.positions.iter().enumerate() {
            m.set(r, c, a[t] as u64);
        }
        m
    }

    #[cfg(test)]
    fn mul_ids(&self, x: u32, y: u32) -> u32 {
        self.encode(&self.mul_packed(&self.decode(x), &self.decode(y)))
    }

    fn superdiagonal_generators(&self) -> Vec<UnitriMatrix> {
        (0..self.i)
            .map(|r| UnitriMatrix::elementary(self.dim(), self.modulus, r, r + 1, 1))
            .collect()
    }

    /// Number of free entries on the diagonals `k, k+1, ..., i` above the main one.
    fn entries_from_diagonal(&self, k: usize) -> usize {
        self.positions.iter().filter(|&&(r, c)| c - r >= k).count()
    }

    /// `{ I + c p^j E_{1,i+1} }`, the subgroup predicted by the power formulas.
    pub fn corner_subgroup(&self) -> SubgroupSet {
        let step = self.modulus / self.p;
        let gen = UnitriMatrix::elementary(self.dim(), self.modulus, 0, self.i, step);
        closure(self, &[gen]).expect("generator belongs to the group")
    }

    /// The whole group.
    pub fn whole(&self) -> SubgroupSet {
        let mut s = Builder::new(self);
        for g in self.superdiagonal_generators() {
            s.add(self.element_id(&g).expect("same group"));
        }
        s.finish()
    }
}

impl fmt::Display for FiniteUTGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_{}(Z/{})", self.i, self.modulus)
    }
}

/// A subgroup given by its complete element set. Equality compares elements only.
#[derive(Clone)]
pub struct SubgroupSet {
    group: FiniteUTGroup,
    members: Vec<u32>,
    mask: Vec<bool>,
    generators: Vec<u32>,
}

impl fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupSet({} of order {})", self.group, self.members.len())
    }
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}

impl Eq for SubgroupSet {}

impl SubgroupSet {
    pub fn parent(&self) -> &FiniteUTGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, m: &UnitriMatrix) -> bool {
        self.group.element_id(m).is_ok_and(|id| self.mask[id as usize])
    }

    pub fn contains_id(&self, id: u32) -> bool {
        self.mask[id as usize]
    }

    /// Element ids in increasing order.
    pub fn ids(&self) -> &[u32] {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = UnitriMatrix> + '_ {
        self.members.iter().map(|&id| self.group.element(id))
    }

    pub fn generators(&self) -> Vec<UnitriMatrix> {
        self.generators.iter().map(|&id| self.group.element(id)).collect()
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.group == other.group && self.members.iter().all(|&id| other.mask[id as usize])
    }

    /// Closed under products and inverses (exhaustive).
    pub fn is_subgroup(&self) -> bool {
        let g = &self.group;
        if !self.mask[0] {
            return false;
        }
        let packed: Vec<Packed> = self.members.iter().map(|&id| g.decode(id)).collect();
        packed.par_iter().all(|a| {
            self.mask[g.encode(&g.inv_packed(a)) as usize]
                && packed.iter().all(|b| self.mask[g.encode(&g.mul_packed(a, b)) as usize])
        })
    }

    /// Stable under conjugation by the generators of the parent group.
    pub fn is_normal(&self) -> bool {
        let g = &self.group;
        g.superdiagonal_generators().iter().all(|x| {
            let xp = g.decode(g.element_id(x).expect("same group"));
            let xi = g.inv_packed(&xp);
            self.members.iter().all(|&h| {
                let conj = g.mul_packed(&g.mul_packed(&xi, &g.decode(h)), &xp);
                self.mask[g.encode(&conj) as usize]
            })
        })
    }

    /// Whether every element satisfies `x^e = I`.
    pub fn has_exponent_dividing(&self, e: u64) -> bool {
        let g = &self.group;
        self.members
            .iter()
            .all(|&id| g.encode(&g.pow_packed(&g.decode(id), e)) == 0)
    }
}

/// Incremental subgroup closure.
struct Builder<'a> {
    group: &'a FiniteUTGroup,
    mask: Vec<bool>,
    members: Vec<u32>,
    generators: Vec<u32>,
    gen_packed: Vec<Packed>,
}

impl<'a> Builder<'a> {
    fn new(group: &'a FiniteUTGroup) -> Self {
        let mut mask = vec![false; group.order as usize];
        mask[0] = true;
        Builder {
            group,
            mask,
            members: vec![0],
            generators: Vec::new(),
            gen_packed: Vec::new(),
        }
    }

    /// Adjoin a generator; a no-op if it is already a member.
    fn add(&mut self, id: u32) {
        if self.mask[id as usize] {
            return;
        }
        let g = self.group;
        let new_gen = g.decode(id);
        self.generators.push(id);
        self.gen_packed.push(new_gen);
        let mut queue: Vec<u32> = Vec::new();
        for k in 0..self.members.len() {
            let y = g.encode(&g.mul_packed(&g.decode(self.members[k]), &new_gen));
            if !self.mask[y as usize] {
                self.mask[y as usize] = true;
                self.members.push(y);
                queue.push(y);
            }
        }
        while let Some(x) = queue.pop() {
            let xp = g.decode(x);
            for s in &self.gen_packed {
                let y = g.encode(&g.mul_packed(&xp, s));
                if !self.mask[y as usize] {
                    self.mask[y as usize] = true;
                    self.members.push(y);
                    queue.push(y);
                }
            }
        }
    }

    fn finish(mut self) -> SubgroupSet {
        self.members.sort_unstable();
        SubgroupSet {
            group: self.group.clone(),
            members: self.members,
            mask: self.mask,
            generators: self.generators,
        }
    }
}

/// Subgroup generated by the given matrices.
pub fn closure(parent: &FiniteUTGroup, generators: &[UnitriMatrix]) -> Result<SubgroupSet> {
    let mut b = Builder::new(parent);
    for m in generators {
        b.add(parent.element_id(m)?);
    }
    Ok(b.finish())
}

fn closure_of_ids(parent: &FiniteUTGroup, candidates: &[bool]) -> SubgroupSet {
    let mut b = Builder::new(parent);
    for (id, _) in candidates.iter().enumerate().filter(|(_, &hit)| hit) {
        b.add(id as u32);
    }
    b.finish()
}

fn same_parent(a: &SubgroupSet, b: &SubgroupSet) -> Result<()> {
    if a.group == b.group {
        Ok(())
    } else {
        Err(Error::Mismatch)
    }
}

/// `[A, B]`, generated by all commutators `a^-1 b^-1 a b`.
pub fn commutator_subgroup(a: &SubgroupSet, b: &SubgroupSet) -> Result<SubgroupSet> {
    same_parent(a, b)?;
    let g = &a.group;
    let bs: Vec<(Packed, Packed)> = b
        .members
        .iter()
        .map(|&id| {
            let x = g.decode(id);
            (x, g.inv_packed(&x))
        })
        .collect();
    let hits = a
        .members
        .par_iter()
        .fold(
            || vec![false; g.order as usize],
            |mut hits, &id| {
                let x = g.decode(id);
                let xi = g.inv_packed(&x);
                for (y, yi) in &bs {
                    hits[g.encode(&g.commutator_packed(&x, &xi, y, yi)) as usize] = true;
                }
                hits
            },
        )
        .reduce(
            || vec![false; g.order as usize],
            |mut l, r| {
                l.iter_mut().zip(r).for_each(|(x, y)| *x |= y);
                l
            },
        );
    Ok(closure_of_ids(g, &hits))
}

/// `A^e`, generated by all `e`-th powers.
pub fn power_subgroup(a: &SubgroupSet, e: u64) -> SubgroupSet {
    let g = &a.group;
    let mut hits = vec![false; g.order as usize];
    for &id in &a.members {
        hits[g.encode(&g.pow_packed(&g.decode(id), e)) as usize] = true;
    }
    closure_of_ids(g, &hits)
}

/// Subgroup generated by a family of subgroups.
pub fn product(parts: &[&SubgroupSet]) -> Result<SubgroupSet> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("empty product".into()))?;
    let mut b = Builder::new(&first.group);
    for s in parts {
        same_parent(first, s)?;
        for &id in &s.generators {
            b.add(id);
        }
    }
    Ok(b.finish())
}

/// Cached filtrations of one finite unitriangular group for a fixed prime.
pub struct Filtrations {
    group: FiniteUTGroup,
    p: u64,
    lower: Vec<SubgroupSet>,
    product_terms: BTreeMap<u32, SubgroupSet>,
    inductive_terms: BTreeMap<u32, SubgroupSet>,
    powers: HashMap<(usize, u32), SubgroupSet>,
}

impl Filtrations {
    pub fn new(group: &FiniteUTGroup, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Filtrations {
            group: group.clone(),
            p,
            lower: vec![group.whole()],
            product_terms: BTreeMap::new(),
            inductive_terms: BTreeMap::new(),
            powers: HashMap::new(),
        })
    }

    pub fn group(&self) -> &FiniteUTGroup {
        &self.group
    }

    pub fn whole(&self) -> &SubgroupSet {
        &self.lower[0]
    }

    /// `G^(k)`, with `G^(1) = G` and `G^(k+1) = [G, G^(k)]`.
    pub fn lower_central(&mut self, k: usize) -> &SubgroupSet {
        assert!(k >= 1, "lower central series starts at 1");
        while self.lower.len() < k {
            let last = self.lower.last().expect("nonempty");
            let next = if last.is_trivial() {
                last.clone()
            } else {
                commutator_subgroup(&self.lower[0], last).expect("same parent")
            };
            self.lower.push(next);
        }
        &self.lower[k - 1]
    }

    /// `(G^(k))^(p^j)`.
    pub fn lower_power(&mut self, k: usize, j: u32) -> &SubgroupSet {
        if !self.powers.contains_key(&(k, j)) {
            let base = self.lower_central(k).clone();
            let s = if base.is_trivial() {
                base
            } else {
                power_subgroup(&base, self.p.pow(j))
            };
            self.powers.insert((k, j), s);
        }
        &self.powers[&(k, j)]
    }

    /// `G_(n,p)` as the product of `(G^(i))^(p^j_n(i))` over `1 <= i <= n`.
    pub fn zassenhaus_product(&mut self, n: u32) -> Result<SubgroupSet> {
        if n == 0 {
            return Err(Error::Precondition("filtration index must be positive".into()));
        }
        if let Some(s) = self.product_terms.get(&n) {
            return Ok(s.clone());
        }
        let mut parts = Vec::new();
        // G^(k) is trivial past the nilpotency class
        for k in 1..=(n as usize).min(self.group.i + 1) {
            let j = j_exponent(n, k as u32, self.p)?;
            parts.push(self.lower_power(k, j).clone());
        }
        let refs: Vec<&SubgroupSet> = parts.iter().collect();
        let s = product(&refs)?;
        self.product_terms.insert(n, s.clone());
        Ok(s)
    }

    /// `G_(n,p)` from `G_(1) = G` and
    /// `G_(n) = (G_(ceil(n/p)))^p * prod_{a+b=n} [G_(a), G_(b)]`.
    pub fn zassenhaus_inductive(&mut self, n: u32) -> Result<SubgroupSet> {
        if n == 0 {
            return Err(Error::Precondition("filtration index must be positive".into()));
        }
        if n == 1 {
            return Ok(self.whole().clone());
        }
        if let Some(s) = self.inductive_terms.get(&n) {
            return Ok(s.clone());
        }
        let q = n.div_ceil(self.p as u32);
        let mut parts = vec![power_subgroup(&self.zassenhaus_inductive(q)?, self.p)];
        for a in 1..=n / 2 {
            let left = self.zassenhaus_inductive(a)?;
            let right = self.zassenhaus_inductive(n - a)?;
            parts.push(commutator_subgroup(&left, &right)?);
        }
        let refs: Vec<&SubgroupSet> = parts.iter().collect();
        let s = product(&refs)?;
        self.inductive_terms.insert(n, s.clone());
        Ok(s)
    }
}

pub fn lower_central(group: &FiniteUTGroup, k: usize) -> Result<SubgroupSet> {
    if k == 0 {
        return Err(Error::Precondition("lower central series starts at 1".into()));
    }
    let mut f = Filtrations::new(group, group.p)?;
    Ok(f.lower_central(k).clone())
}

pub fn zassenhaus_product(group: &FiniteUTGroup, n: u32, p: u64) -> Result<SubgroupSet> {
    Filtrations::new(group, p)?.zassenhaus_product(n)
}

pub fn zassenhaus_inductive(group: &FiniteUTGroup, n: u32, p: u64) -> Result<SubgroupSet> {
    Filtrations::new(group, p)?.zassenhaus_inductive(n)
}

/// `floor(log_p(num/den))` for `num >= den >= 1`.
fn floor_log_ratio(p: u64, num: u64, den: u64) -> u32 {
    let mut k = 0;
    let mut scaled = den * p;
    while scaled <= num {
        k += 1;
        scaled *= p;
    }
    k
}

/// Sweep the power-subgroup characterizations and the corner-subgroup
/// criterion over `U_i(Z/p^(j+1))` for `i <= i_max`, `j <= j_max`,
/// `n <= n_max`. Grid points whose group exceeds `max_order` are skipped.
pub fn verify_section6(p: u64, i_max: usize, j_max: u32, n_max: u32, max_order: u64) -> Result<Report> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut points: Vec<(usize, u32, Option<u32>)> = Vec::new();
    for i in 1..=i_max {
        for j in 0..=j_max {
            points.push((i, j, None));
        }
    }
    for n in 1..=n_max {
        for i in 1..=i_max.min(n as usize) {
            points.push((i, j_exponent(n, i as u32, p)?, Some(n)));
        }
    }
    let reports: Vec<Result<Report>> = points
        .par_iter()
        .map(|&(i, j, n)| {
            let modulus = p.checked_pow(j + 1).unwrap_or(u64::MAX);
            let order = (modulus as u128).saturating_pow((i * (i + 1) / 2) as u32);
            if order > max_order.min(MAX_ORDER) as u128 {
                let what = match n {
                    None => "power subgroups".to_string(),
                    Some(n) => format!("U_({n},{p})"),
                };
                return Ok(Report {
                    skipped: vec![format!("{what} of U_{i}(Z/{p}^{}), order {order}", j + 1)],
                    ..Report::default()
                });
            }
            let group = FiniteUTGroup::new(i, p, j)?;
            match n {
                None => powers_of_unitriangular(&group),
                Some(n) => corner_criterion(&group, n),
            }
        })
        .collect();
    let mut total = Report::default();
    for r in reports {
        total.merge(r?);
    }
    Ok(total)
}

fn powers_of_unitriangular(group: &FiniteUTGroup) -> Result<Report> {
    let (i, j, p) = (group.i, group.j, group.p);
    let mut f = Filtrations::new(group, p)?;
    let corner = group.corner_subgroup();
    let mut report = Report::default();
    for ip in 1..=i {
        let top = j + 2 + floor_log_ratio(p, i as u64, 1);
        for jp in 0..=top {
            let s = f.lower_power(ip, jp).clone();
            let log = floor_log_ratio(p, i as u64, ip as u64);
            let trivial_pred = jp >= j + 1 + log;
            let contained_pred = jp >= j && (ip as u64) * p.pow(jp - j) >= i as u64;
            let equal_pred = jp >= j && (ip as u64) * p.pow(jp - j) == i as u64;
            let tag = || format!("{group}: (U^({ip}))^({p}^{jp})");
            report.check(s.is_trivial() == trivial_pred, || {
                format!("{} trivial: predicted {trivial_pred}", tag())
            });
            report.check((s == corner) == equal_pred, || {
                format!("{} == corner: predicted {equal_pred}", tag())
            });
            report.check(s.is_subset_of(&corner) == contained_pred, || {
                format!("{} <= corner: predicted {contained_pred}", tag())
            });
        }
    }
    Ok(report)
}

fn corner_criterion(group: &FiniteUTGroup, n: u32) -> Result<Report> {
    let mut f = Filtrations::new(group, group.p)?;
    let z = f.zassenhaus_product(n)?;
    let predicted = jump_set(n, group.p).contains(&(group.i as u32));
    let mut report = Report::default();
    report.check((z == group.corner_subgroup()) == predicted, || {
        format!("{group}: U_({n},{}) == corner: predicted {predicted}", group.p)
    });
    Ok(report)
}

/// Check the inductive definition against the product definition, Shalev's
/// formula, `G_(np) <= G_(n)^p [G, G_(n)]`, and the vanishing of
/// `(G^(i))^(p^j_n(i))` modulo `G_(n)^p [G, G_(n)]` for `i` outside the jump set.
pub fn verify_group_identities(group: &FiniteUTGroup, n: u32, p: u64) -> Result<Report> {
    let mut f = Filtrations::new(group, p)?;
    verify_identities_with(&mut f, n)
}

pub fn verify_identities_with(f: &mut Filtrations, n: u32) -> Result<Report> {
    let p = f.p;
    let group = f.group.clone();
    let mut report = Report::default();
    let prod = f.zassenhaus_product(n)?;
    let ind = f.zassenhaus_inductive(n)?;
    report.check(prod == ind, || {
        format!("{group}: inductive G_({n},{p}) != product definition")
    });

    let whole = f.whole().clone();
    let g_zn = commutator_subgroup(&whole, &prod)?;
    let mut parts = Vec::new();
    for i in 1..=(n as usize).min(group.i + 1) {
        parts.push(f.lower_power(i + 1, j_exponent(n, i as u32, p)?).clone());
    }
    let refs: Vec<&SubgroupSet> = parts.iter().collect();
    report.check(product(&refs)? == g_zn, || {
        format!("{group}: Shalev formula fails at n={n}")
    });

    let frattini = product(&[&power_subgroup(&prod, p), &g_zn])?;
    let np = f.zassenhaus_product(n * p as u32)?;
    report.check(np.is_subset_of(&frattini), || {
        format!("{group}: G_({},{p}) not inside G_({n})^p[G,G_({n})]", n * p as u32)
    });

    let jumps = jump_set(n, p);
    for i in 1..=n {
        if jumps.contains(&i) {
            continue;
        }
        let s = if i as usize > group.i + 1 {
            continue;
        } else {
            f.lower_power(i as usize, j_exponent(n, i, p)?).clone()
        };
        report.check(s.is_subset_of(&frattini), || {
            format!("{group}: (G^({i}))^(p^j) not inside G_({n})^p[G,G_({n})]")
        });
    }
    Ok(report)
}

fn binomial_row(n: u64, t: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::from(1u32)];
    for l in 1..=t {
        let prev = row.last().expect("nonempty").clone();
        row.push(prev * BigUint::from(n - l + 1) / BigUint::from(l));
    }
    row
}

/// The three conditions of the binomial divisibility lemma, evaluated
/// independently: (a) `p^j | C(p^j', l)` for all `1 <= l <= t`; (b) the same
/// for `l = p^floor(log_p t)`; (c) `j' >= j + floor(log_p t)`.
pub fn binomial_conditions(p: u64, j: u32, j_prime: u32, t: u64) -> Result<[bool; 3]> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let top = p
        .checked_pow(j_prime)
        .ok_or_else(|| Error::SizeBound(format!("{p}^{j_prime}")))?;
    if j_prime == 0 || t == 0 || t > top.min(500) {
        return Err(Error::Precondition(format!(
            "need j' >= 1 and 1 <= t <= min({p}^{j_prime}, 500), got t = {t}"
        )));
    }
    let pj = BigUint::from(p).pow(j);
    let row = binomial_row(top, t);
    let divides = |c: &BigUint| (c % &pj).is_zero();
    let a = row[1..].iter().all(divides);
    let log = floor_log_ratio(p, t, 1);
    let b = divides(&row[p.pow(log) as usize]);
    let c = j_prime >= j + log;
    Ok([a, b, c])
}

pub fn binomial_equiv_check(p: u64, j: u32, j_prime: u32, t: u64) -> Result<bool> {
    let [a, b, c] = binomial_conditions(p, j, j_prime, t)?;
    Ok(a == b && b == c)
}

/// One row of the filtration table printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationRow {
    pub k: usize,
    pub lower_order: usize,
    pub lower_predicted: u64,
    pub power_exponent: u32,
    pub power_order: usize,
    /// `Some(true)` when the power subgroup is trivial as predicted, etc.
    pub power_check: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationSummary {
    pub group: String,
    pub rows: Vec<FiltrationRow>,
    pub zassenhaus_order: usize,
    /// Present when `j = j_n(i)`, where the corner criterion applies.
    pub corner_check: Option<(bool, bool)>,
}

impl FiltrationSummary {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.power_check && r.lower_order as u64 == r.lower_predicted)
            && self.corner_check.is_none_or(|(pred, got)| pred == got)
    }
}

/// Orders of `G^(k)`, `(G^(k))^(p^j_n(k))` and `G_(n,p)` for `G = U_i(Z/p^(j+1))`,
/// each compared with its closed-form prediction.
pub fn ut_filtration_summary(p: u64, i: usize, j: u32, n: u32) -> Result<FiltrationSummary> {
    let group = FiniteUTGroup::new(i, p, j)?;
    let mut f = Filtrations::new(&group, p)?;
    let corner = group.corner_subgroup();
    let mut rows = Vec::new();
    for k in 1..=(n as usize).min(i + 1) {
        let lower_order = f.lower_central(k).order();
        let lower_predicted = group.modulus.pow(group.entries_from_diagonal(k) as u32);
        let jk = j_exponent(n, k as u32, p)?;
        let s = f.lower_power(k, jk).clone();
        let power_check = if k > i {
            s.is_trivial()
        } else {
            let log = floor_log_ratio(p, i as u64, k as u64);
            let trivial_pred = jk >= j + 1 + log;
            let contained_pred = jk >= j && (k as u64) * p.pow(jk - j) >= i as u64;
            s.is_trivial() == trivial_pred && s.is_subset_of(&corner) == contained_pred
        };
        rows.push(FiltrationRow {
            k,
            lower_order,
            lower_predicted,
            power_exponent: jk,
            power_order: s.order(),
            power_check,
        });
    }
    let z = f.zassenhaus_product(n)?;
    let corner_check = if i as u32 <= n && j == j_exponent(n, i as u32, p)? {
        Some((jump_set(n, p).contains(&(i as u32)), z == corner))
    } else {
        None
    };
    Ok(FiltrationSummary {
        group: group.to_string(),
        rows,
        zassenhaus_order: z.order(),
        corner_check,
    })
}

/// Orders of `G_(1,p) >= G_(2,p) >= ...` down to the trivial group.
pub fn zassenhaus_orders(group: &FiniteUTGroup, p: u64, n_max: u32) -> Result<BTreeSet<(u32, usize)>> {
    let mut f = Filtrations::new(group, p)?;
    (1..=n_max).map(|n| Ok((n, f.zassenhaus_product(n)?.order()))).collect()
}
