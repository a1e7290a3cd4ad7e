//! Exact sparse linear algebra over `Q`.
//!
//! Vectors are sparse maps from an ordered basis key to a nonzero rational.
//! A [`Subspace`] keeps its basis in reduced row echelon form: every row has
//! coefficient one at its pivot (its smallest key) and zero at every other
//! row's pivot. Membership, reduction and coordinates are then single passes
//! over the pivots a vector touches.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an integral rational to `i64`, or `None` when it is fractional or
/// out of range.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

pub trait Key: Ord + Clone + Hash {}
impl<T: Ord + Clone + Hash> Key for T {}

/// A sparse vector with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<K: Key> {
    entries: BTreeMap<K, Q>,
}

impl<K: Key> Default for SparseVec<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Key> SparseVec<K> {
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(key: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(key, Q::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Q> {
        self.entries.get(key)
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.entries.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn leading_key(&self) -> Option<&K> {
        self.entries.keys().next()
    }

    /// Adds `c` at `key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Q, other: &SparseVec<K>) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), c * v);
        }
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Q::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(&Q::one(), other);
        v
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(&-Q::one(), other);
        v
    }

    /// Applies a key map that is injective on the support (e.g. a relabelling),
    /// with an optional sign per key. Collisions are summed.
    pub fn map_keys<K2: Key>(&self, mut f: impl FnMut(&K) -> Option<(K2, bool)>) -> SparseVec<K2> {
        let mut out = SparseVec::new();
        for (k, c) in &self.entries {
            if let Some((k2, negate)) = f(k) {
                out.add_term(k2, if negate { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// If `self = c * other` for a rational `c`, returns `c`.
    pub fn ratio_to(&self, other: &Self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if other.is_zero() || self.len() != other.len() {
            return None;
        }
        let (k, v) = self.entries.iter().next()?;
        let c = v / other.get(k)?;
        if other.scaled(&c) == *self {
            Some(c)
        } else {
            None
        }
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|c| c.is_integer())
    }

    pub fn into_entries(self) -> BTreeMap<K, Q> {
        self.entries
    }
}

impl<K: Key> FromIterator<(K, Q)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

/// A subspace held as a reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<K: Key> {
    rows: Vec<SparseVec<K>>,
    pivots: HashMap<K, usize>,
}

impl<K: Key> Default for Subspace<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Key> Subspace<K> {
    pub fn new() -> Self {
        Subspace {
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn spanned_by<I: IntoIterator<Item = SparseVec<K>>>(vectors: I) -> Self {
        let mut s = Self::new();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn pivot_of(&self, row: usize) -> &K {
        self.rows[row].leading_key().expect("rows are nonzero")
    }

    /// `v` minus its projection along the pivots; zero iff `v` is in the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        for (k, c) in v.iter() {
            if let Some(&r) = self.pivots.get(k) {
                out.add_scaled(&-c.clone(), &self.rows[r]);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(&v);
        let Some(pivot) = r.leading_key().cloned() else {
            return false;
        };
        let lead = r.coeff(&pivot);
        if !lead.is_one() {
            r.scale(&lead.recip());
        }
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                row.add_scaled(&-c, &r);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn extend<I: IntoIterator<Item = SparseVec<K>>>(&mut self, vectors: I) {
        for v in vectors {
            self.insert(v);
        }
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.iter().map(|row| v.coeff(row.leading_key().unwrap())).collect())
    }

    /// Coordinate of `v` along basis row `i`, assuming `v` lies in the span.
    pub fn coordinate_unchecked(&self, v: &SparseVec<K>, i: usize) -> Q {
        v.coeff(self.pivot_of(i))
    }

    pub fn is_subspace_of(&self, other: &Subspace<K>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn equals(&self, other: &Subspace<K>) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let mut s = self.clone();
        s.extend(other.rows.iter().cloned());
        s
    }
}

/// Rank of a finite family of vectors.
pub fn rank<K: Key>(vectors: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    Subspace::spanned_by(vectors).dim()
}

/// Trace of a linear endomorphism of `space`, given by its action on vectors.
/// The image of each basis vector must lie in `space`.
pub fn trace_on<K: Key>(space: &Subspace<K>, mut act: impl FnMut(&SparseVec<K>) -> SparseVec<K>) -> Q {
    let mut t = Q::zero();
    for (i, row) in space.basis().iter().enumerate() {
        let image = act(row);
        t += space.coordinate_unchecked(&image, i);
    }
    t
}

/// Kernel of a linear map given on a basis of the domain: returns a basis of
/// the kernel expressed in the domain's keys.
pub fn kernel<K: Key, K2: Key>(
    domain: &[SparseVec<K>],
    mut map: impl FnMut(&SparseVec<K>) -> SparseVec<K2>,
) -> Vec<SparseVec<K>> {
    // Row-reduce the augmented family (image | preimage).
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
    enum Aug<A, B> {
        Image(A),
        Source(B),
    }
    let mut span: Subspace<Aug<K2, K>> = Subspace::new();
    for v in domain {
        let mut aug: SparseVec<Aug<K2, K>> = map(v)
            .iter()
            .map(|(k, c)| (Aug::Image(k.clone()), c.clone()))
            .collect();
        for (k, c) in v.iter() {
            aug.add_term(Aug::Source(k.clone()), c.clone());
        }
        span.insert(aug);
    }
    span.basis()
        .iter()
        .filter(|row| matches!(row.leading_key(), Some(Aug::Source(_))))
        .map(|row| {
            row.iter()
                .filter_map(|(k, c)| match k {
                    Aug::Source(s) => Some((s.clone(), c.clone())),
                    Aug::Image(_) => None,
                })
                .collect()
        })
        .collect()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
