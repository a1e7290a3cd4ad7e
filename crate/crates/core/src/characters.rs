//! Character theory of the symmetric groups.
//!
//! Conjugacy classes are indexed by cycle-type partitions in the order of
//! [`partitions_of`]. Irreducible characters come from the Murnaghan–Nakayama
//! rule evaluated on beta-sets; tables are cached per `n` and shared
//! read-only across threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{q, to_i64, Q};
use crate::partitions::{factorial, partitions_of, Partition, PartitionError};

/// Largest `n` for which character tables are built.
pub const MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("n = {0} exceeds the character table limit {MAX_N}")]
    TooLarge(usize),
    #[error("not a character: multiplicity of {partition} is {value}")]
    NotACharacter { partition: Partition, value: String },
    #[error("class functions on S_{0} and S_{1} cannot be combined")]
    DegreeMismatch(usize, usize),
    #[error("induction needs n >= k (k = {k}, n = {n})")]
    InductionTooSmall { k: usize, n: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// A rational-valued function on the conjugacy classes of `S_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassFunction {
    n: usize,
    values: Vec<Q>,
}

impl ClassFunction {
    pub fn zero(n: usize) -> Self {
        ClassFunction {
            n,
            values: vec![Q::zero(); partitions_of(n).len()],
        }
    }

    /// Builds a class function from a value per cycle type.
    pub fn from_fn(n: usize, mut f: impl FnMut(&Partition) -> Q) -> Self {
        ClassFunction {
            n,
            values: partitions_of(n).iter().map(&mut f).collect(),
        }
    }

    /// Values listed in the order of [`partitions_of`]`(n)`.
    pub fn from_values(n: usize, values: Vec<Q>) -> Self {
        assert_eq!(values.len(), partitions_of(n).len());
        ClassFunction { n, values }
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_fn(n, |_| Q::one())
    }

    pub fn sign(n: usize) -> Self {
        Self::from_fn(n, |rho| q(cycle_type_sign(rho)))
    }

    pub fn regular(n: usize) -> Self {
        let fact = Q::from_integer(BigInt::from(factorial(n)));
        Self::from_fn(n, |rho| if rho.parts().iter().all(|&p| p == 1) { fact.clone() } else { Q::zero() })
    }

    pub fn irreducible(lambda: &Partition) -> Result<Self, CharacterError> {
        let n = lambda.size();
        let table = character_table(n)?;
        let row = table.row(lambda);
        Ok(ClassFunction {
            n,
            values: row.iter().map(|&v| q(v)).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn value(&self, rho: &Partition) -> Q {
        let idx = class_index(self.n, rho);
        self.values[idx].clone()
    }

    /// Value at the identity.
    pub fn dimension(&self) -> Q {
        self.values.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, CharacterError> {
        self.check_degree(other)?;
        Ok(ClassFunction {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CharacterError> {
        self.check_degree(other)?;
        Ok(ClassFunction {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// Pointwise product (character of the tensor product).
    pub fn mul(&self, other: &Self) -> Result<Self, CharacterError> {
        self.check_degree(other)?;
        Ok(ClassFunction {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        ClassFunction {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_degree(&self, other: &Self) -> Result<(), CharacterError> {
        if self.n != other.n {
            return Err(CharacterError::DegreeMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// `⟨χ, ψ⟩ = Σ_ρ χ(ρ) ψ(ρ) / z_ρ`.
    pub fn inner(&self, other: &Self) -> Result<Q, CharacterError> {
        self.check_degree(other)?;
        let classes = partitions_of(self.n);
        let mut total = Q::zero();
        for ((rho, a), b) in classes.iter().zip(&self.values).zip(&other.values) {
            total += a * b / Q::from_integer(BigInt::from(rho.centralizer_order()));
        }
        Ok(total)
    }
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "ClassFunction(S_{}; {})", self.n, vals.join(", "))
    }
}

/// Multiplicities of irreducibles; only nonzero counts are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiplicityVector {
    n: usize,
    counts: BTreeMap<Partition, u64>,
}

impl MultiplicityVector {
    pub fn new(n: usize) -> Self {
        MultiplicityVector {
            n,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(n: usize, counts: impl IntoIterator<Item = (Partition, u64)>) -> Self {
        let mut v = Self::new(n);
        for (p, c) in counts {
            assert_eq!(p.size(), n);
            if c > 0 {
                *v.counts.entry(p).or_insert(0) += c;
            }
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn get(&self, lambda: &Partition) -> u64 {
        self.counts.get(lambda).copied().unwrap_or(0)
    }

    /// Multiplicity of `V(λ)_n = V_{λ[n]}`; zero when `λ[n]` is undefined.
    pub fn padded(&self, lambda: &Partition) -> u64 {
        match lambda.pad(self.n) {
            Ok(mu) => self.get(&mu),
            Err(_) => 0,
        }
    }

    /// Nonzero entries in decreasing lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.counts.iter().rev().map(|(p, &c)| (p, c))
    }

    /// Nonzero entries re-keyed by `λ` with `V_μ = V(λ)_n`.
    pub fn stable_form(&self) -> BTreeMap<Partition, u64> {
        self.counts.iter().map(|(p, &c)| (p.unpad(), c)).collect()
    }

    pub fn total_dimension(&self) -> u128 {
        self.counts.iter().map(|(p, &c)| p.dim_irrep() * c as u128).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (p, &c) in &other.counts {
            *out.counts.entry(p.clone()).or_insert(0) += c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }
}

impl fmt::Debug for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|(p, c)| format!("{p:?}:{c}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Irreducible character values `χ^λ(ρ)` for all `λ, ρ ⊢ n`.
#[derive(Debug)]
pub struct CharacterTable {
    n: usize,
    shapes: Vec<Partition>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Row and column labels (the same list).
    pub fn partitions(&self) -> &[Partition] {
        &self.shapes
    }

    pub fn row(&self, lambda: &Partition) -> &[i64] {
        &self.values[class_index(self.n, lambda)]
    }

    pub fn value(&self, lambda: &Partition, rho: &Partition) -> i64 {
        self.values[class_index(self.n, lambda)][class_index(self.n, rho)]
    }
}

fn table_cache() -> &'static RwLock<HashMap<usize, Arc<CharacterTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn index_cache() -> &'static RwLock<HashMap<usize, Arc<HashMap<Partition, usize>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<HashMap<Partition, usize>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Position of `rho` in [`partitions_of`]`(n)`.
pub fn class_index(n: usize, rho: &Partition) -> usize {
    if let Some(map) = index_cache().read().unwrap().get(&n) {
        return *map.get(rho).unwrap_or_else(|| panic!("{rho:?} is not a partition of {n}"));
    }
    let map: HashMap<Partition, usize> = partitions_of(n).into_iter().enumerate().map(|(i, p)| (p, i)).collect();
    let map = Arc::new(map);
    index_cache().write().unwrap().insert(n, map.clone());
    *map.get(rho).unwrap_or_else(|| panic!("{rho:?} is not a partition of {n}"))
}

/// The character table of `S_n`, built once and cached.
pub fn character_table(n: usize) -> Result<Arc<CharacterTable>, CharacterError> {
    if n > MAX_N {
        return Err(CharacterError::TooLarge(n));
    }
    if let Some(t) = table_cache().read().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let shapes = partitions_of(n);
    let mut memo = HashMap::new();
    let values = shapes
        .iter()
        .map(|lambda| shapes.iter().map(|rho| mn_value(lambda, rho.parts(), &mut memo)).collect())
        .collect();
    let table = Arc::new(CharacterTable { n, shapes, values });
    let mut cache = table_cache().write().unwrap();
    Ok(cache.entry(n).or_insert(table).clone())
}

/// Murnaghan–Nakayama: strip rim hooks of size `rho[0]` from `lambda`.
fn mn_value(lambda: &Partition, rho: &[usize], memo: &mut HashMap<(Partition, Vec<usize>), i64>) -> i64 {
    if rho.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.clone(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = rho[0];
    let len = lambda.len();
    let beta: Vec<usize> = lambda.parts().iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&g| g > target && g < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = next.iter().enumerate().map(|(j, &x)| x - (len - 1 - j)).collect();
        let smaller = Partition::from_unsorted(parts);
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_value(&smaller, &rho[1..], memo);
    }
    memo.insert(key, total);
    total
}

fn cycle_type_sign(rho: &Partition) -> i64 {
    if rho.parts().iter().map(|p| p - 1).sum::<usize>() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Multiplicities `⟨χ, χ^λ⟩`; fails if any is negative or fractional.
pub fn decompose(chi: &ClassFunction) -> Result<MultiplicityVector, CharacterError> {
    let n = chi.degree();
    let table = character_table(n)?;
    let mut out = MultiplicityVector::new(n);
    for lambda in table.partitions() {
        let irr = ClassFunction::irreducible(lambda)?;
        let m = chi.inner(&irr)?;
        match to_i64(&m) {
            Some(c) if c >= 0 => {
                if c > 0 {
                    out.counts.insert(lambda.clone(), c as u64);
                }
            }
            _ => {
                return Err(CharacterError::NotACharacter {
                    partition: lambda.clone(),
                    value: m.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Signed multiplicities of a virtual character; fails only on fractions.
pub fn decompose_virtual(chi: &ClassFunction) -> Result<BTreeMap<Partition, i64>, CharacterError> {
    let table = character_table(chi.degree())?;
    let mut out = BTreeMap::new();
    for lambda in table.partitions() {
        let m = chi.inner(&ClassFunction::irreducible(lambda)?)?;
        let c = to_i64(&m).ok_or_else(|| CharacterError::NotACharacter {
            partition: lambda.clone(),
            value: m.to_string(),
        })?;
        if c != 0 {
            out.insert(lambda.clone(), c);
        }
    }
    Ok(out)
}

/// The character of a sum of irreducibles.
pub fn character_of(mult: &MultiplicityVector) -> Result<ClassFunction, CharacterError> {
    let mut chi = ClassFunction::zero(mult.degree());
    for (lambda, c) in mult.iter() {
        chi = chi.add(&ClassFunction::irreducible(lambda)?.scale(&q(c as i64)))?;
    }
    Ok(chi)
}

/// Character of `Ind_{S_k × S_{n-k}}^{S_n} (V ⊠ Q)` where `chi` is the
/// character of `V`.
///
/// An element of cycle type `ρ` meets `S_k × S_{n-k}` in the classes `(α, β)`
/// with `α ∪ β = ρ`; each contributes `χ(α) z_ρ / (z_α z_β)`.
pub fn induced_character(chi: &ClassFunction, n: usize) -> Result<ClassFunction, CharacterError> {
    let k = chi.degree();
    if n < k {
        return Err(CharacterError::InductionTooSmall { k, n });
    }
    if n > MAX_N {
        return Err(CharacterError::TooLarge(n));
    }
    Ok(ClassFunction::from_fn(n, |rho| {
        let mults = rho.multiplicities();
        let z_rho = Q::from_integer(BigInt::from(rho.centralizer_order()));
        let mut total = Q::zero();
        let mut choice = vec![0usize; mults.len()];
        loop {
            let size: usize = mults.iter().zip(&choice).map(|((len, _), a)| len * a).sum();
            if size == k {
                let mut alpha = Vec::new();
                let mut beta = Vec::new();
                for ((len, m), &a) in mults.iter().zip(&choice) {
                    alpha.extend(std::iter::repeat_n(*len, a));
                    beta.extend(std::iter::repeat_n(*len, m - a));
                }
                let alpha = Partition::from_unsorted(alpha);
                let beta = Partition::from_unsorted(beta);
                let denom = alpha.centralizer_order() * beta.centralizer_order();
                total += chi.value(&alpha) * &z_rho / Q::from_integer(BigInt::from(denom));
            }
            // Odometer over 0..=m_i for each cycle length.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return total;
                }
                if choice[i] < mults[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }))
}

/// Permutation character of `S_n` on the cosets of the Young subgroup
/// `S_{μ_1} × ... × S_{μ_k} × S_{n-|μ|}`.
pub fn young_permutation_character(mu: &Partition, n: usize) -> Result<ClassFunction, CharacterError> {
    if n < mu.size() {
        return Err(CharacterError::InductionTooSmall { k: mu.size(), n });
    }
    let mut chi = ClassFunction::trivial(0);
    let mut size = 0;
    for &part in mu.parts() {
        size += part;
        chi = induced_character(&chi, size)?;
    }
    induced_character(&chi, n)
}

/// Dimension of the `S_{μ_1} × ... × S_{μ_k} × S_{n-|μ|}`-invariants of `V_λ`,
/// where `n = |λ|`.
pub fn young_invariants_dim(lambda: &Partition, mu: &Partition) -> Result<u64, CharacterError> {
    let n = lambda.size();
    if mu.size() > n {
        return Ok(0);
    }
    let perm = young_permutation_character(mu, n)?;
    let m = perm.inner(&ClassFunction::irreducible(lambda)?)?;
    to_i64(&m)
        .filter(|&c| c >= 0)
        .map(|c| c as u64)
        .ok_or(CharacterError::NotACharacter {
            partition: lambda.clone(),
            value: m.to_string(),
        })
}

/// Number of chains `(n - |μ|) = ν^0 ⇝ ν^1 ⇝ ... ⇝ ν^k = λ[n]` with
/// `|ν^{i+1}| = |ν^i| + μ_{i+1}`.
pub fn count_partition_chains(lambda: &Partition, mu: &Partition, n: usize) -> Result<u64, CharacterError> {
    let target = lambda.pad(n)?;
    if n < mu.size() {
        return Ok(0);
    }
    fn walk(current: &Partition, rest: &[usize], target: &Partition) -> u64 {
        match rest.split_first() {
            None => u64::from(current == target),
            Some((&step, tail)) => {
                let size = current.size() + step;
                current
                    .leadsto(size)
                    .iter()
                    // Every later partition contains this one.
                    .filter(|nu| nu.parts().iter().zip(target.parts()).all(|(a, b)| a <= b) && nu.len() <= target.len())
                    .map(|nu| walk(nu, tail, target))
                    .sum()
            }
        }
    }
    Ok(walk(&Partition::row(n - mu.size()), mu.parts(), &target))
}
