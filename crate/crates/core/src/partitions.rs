//! Integer partitions and the padding notations used to name irreducible
//! representations uniformly in `n`.
//!
//! A [`Partition`] is always stored weakly decreasing with no zero parts, so
//! two partitions are equal exactly when their part vectors are equal. The
//! derived `Ord` is lexicographic on parts, which for partitions of the same
//! size is the order in which `(n)` is the largest element.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotDecreasing(Vec<usize>),
    #[error("cannot pad {partition} to n = {n}: need n >= {needed}")]
    PadTooSmall {
        partition: Partition,
        n: usize,
        needed: usize,
    },
    #[error("cannot form the block partition of {partition} at n = {n}: need n >= {needed}")]
    AnglePadTooSmall {
        partition: Partition,
        n: usize,
        needed: usize,
    },
    #[error("partitions {0} and {1} have different sizes")]
    SizeMismatch(Partition, Partition),
    #[error("the empty partition has no first part")]
    Empty,
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition from weakly decreasing parts. Zero parts are dropped.
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.windows(2).any(|w| w[0] < w[1] && w[1] > 0) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Self::from_unsorted(parts))
    }

    /// Sorts the parts into canonical order and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`; empty when `n = 0`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// The one-column partition `(1, ..., 1)`.
    pub fn column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), or zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.part(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first();
        Partition((0..cols).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect())
    }

    /// `λ[n] = (n - |λ|, λ_1, ..., λ_ℓ)`.
    pub fn pad(&self, n: usize) -> Result<Partition, PartitionError> {
        let needed = self.size() + self.first();
        if n < needed {
            return Err(PartitionError::PadTooSmall {
                partition: self.clone(),
                n,
                needed,
            });
        }
        let mut parts = Vec::with_capacity(self.len() + 1);
        parts.push(n - self.size());
        parts.extend_from_slice(&self.0);
        Ok(Partition::from_unsorted(parts))
    }

    /// Inverse of [`pad`](Self::pad): drops the first row.
    pub fn unpad(&self) -> Partition {
        Partition(self.0.iter().skip(1).copied().collect())
    }

    /// `μ⟨n⟩ = (μ_1 + 1, ..., μ_m + 1, 1, ..., 1)` with `n - |μ|` parts.
    pub fn angle_pad(&self, n: usize) -> Result<Partition, PartitionError> {
        let q = self.size();
        let needed = q + self.len();
        if n < needed {
            return Err(PartitionError::AnglePadTooSmall {
                partition: self.clone(),
                n,
                needed,
            });
        }
        let mut parts: Vec<usize> = self.0.iter().map(|p| p + 1).collect();
        parts.resize(n - q, 1);
        Ok(Partition(parts))
    }

    /// `μ{n+1}`: the first part incremented.
    pub fn curly_pad(&self) -> Result<Partition, PartitionError> {
        if self.is_empty() {
            return Err(PartitionError::Empty);
        }
        let mut parts = self.0.clone();
        parts[0] += 1;
        Ok(Partition(parts))
    }

    /// Whether `other` is obtained from `self` by adding a horizontal strip.
    pub fn leads_to(&self, other: &Partition) -> bool {
        if other.size() < self.size() || other.len() > self.len() + 1 {
            return false;
        }
        (0..other.len()).all(|i| {
            let below = other.part(i) >= self.part(i);
            let interlaced = i == 0 || other.part(i) <= self.part(i - 1);
            below && interlaced
        }) && self.len() <= other.len()
    }

    /// All `μ ⊢ n` with `self ⇝ μ`, in decreasing lexicographic order.
    pub fn leadsto(&self, n: usize) -> Vec<Partition> {
        let k = self.size();
        if n < k {
            return Vec::new();
        }
        let rows = self.len() + 1;
        // Row i may grow by at most λ_{i-1} - λ_i boxes, row 0 without bound.
        let caps: Vec<usize> = (0..rows)
            .map(|i| {
                if i == 0 {
                    usize::MAX
                } else {
                    self.part(i - 1) - self.part(i)
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut added = vec![0usize; rows];
        fill_strip(&caps, 0, n - k, &mut added, &mut |added| {
            let parts = (0..rows).map(|i| self.part(i) + added[i]).collect();
            out.push(Partition::from_unsorted(parts));
        });
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Lexicographic comparison of two partitions of the same size.
    pub fn lex_compare(&self, other: &Partition) -> Result<Ordering, PartitionError> {
        if self.size() != other.size() {
            return Err(PartitionError::SizeMismatch(self.clone(), other.clone()));
        }
        Ok(self.cmp(other))
    }

    /// Hook length of box `(row, col)`.
    pub fn hook(&self, row: usize, col: usize) -> usize {
        let arm = self.part(row) - col - 1;
        let leg = self.0[row + 1..].iter().filter(|&&p| p > col).count();
        arm + leg + 1
    }

    /// Number of standard Young tableaux of this shape (hook length formula).
    pub fn dim_irrep(&self) -> u128 {
        let n = self.size();
        let mut hooks: u128 = 1;
        for (r, &len) in self.0.iter().enumerate() {
            for c in 0..len {
                hooks *= self.hook(r, c) as u128;
            }
        }
        let total = factorial(n);
        assert_eq!(total % hooks, 0, "hook product must divide n!");
        total / hooks
    }

    /// Boxes of the Young diagram as `(row, col)` pairs in reading order.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// `z_ρ = ∏ i^{m_i} m_i!`, the centralizer order of cycle type `ρ`.
    pub fn centralizer_order(&self) -> u128 {
        let mut z: u128 = 1;
        for (len, mult) in self.multiplicities() {
            z *= (len as u128).pow(mult as u32) * factorial(mult);
        }
        z
    }

    /// `(part, multiplicity)` pairs in decreasing order of part.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

fn fill_strip(
    caps: &[usize],
    row: usize,
    remaining: usize,
    added: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if row == caps.len() {
        if remaining == 0 {
            emit(added);
        }
        return;
    }
    for a in 0..=remaining.min(caps[row]) {
        added[row] = a;
        fill_strip(caps, row + 1, remaining - a, added, emit);
    }
    added[row] = 0;
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of size at most `k`, grouped by size.
pub fn partitions_up_to(k: usize) -> Vec<Partition> {
    (0..=k).flat_map(partitions_of).collect()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

impl fmt::Display for Partition {
    /// Comma-separated parts; the empty partition prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() || t == "0" {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts).map_err(|_| PartitionError::Parse(s.to_string()))
    }
}

#[macro_export]
macro_rules! partition {
    () => { $crate::partitions::Partition::empty() };
    ($($p:expr),+ $(,)?) => {
        $crate::partitions::Partition::new(vec![$($p),+]).expect("valid partition")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Brute-force count of standard Young tableaux by removing corners.
    fn count_syt(shape: &Partition) -> u128 {
        if shape.is_empty() {
            return 1;
        }
        let parts = shape.parts();
        let mut total = 0;
        for i in 0..parts.len() {
            if i + 1 == parts.len() || parts[i] > parts[i + 1] {
                let mut smaller = parts.to_vec();
                smaller[i] -= 1;
                total += count_syt(&Partition::from_unsorted(smaller));
            }
        }
        total
    }

    #[test]
    fn pad_examples() {
        assert_eq!(p("1").pad(4).unwrap(), p("3,1"));
        assert_eq!(Partition::empty().pad(5).unwrap(), p("5"));
        assert!(matches!(
            p("2,1").pad(4),
            Err(PartitionError::PadTooSmall { needed: 5, .. })
        ));
    }

    #[test]
    fn angle_pad_examples() {
        assert_eq!(p("2,2").angle_pad(8).unwrap(), p("3,3,1,1"));
        assert_eq!(Partition::empty().angle_pad(3).unwrap(), p("1,1,1"));
        assert_eq!(p("1").angle_pad(3).unwrap(), p("2,1"));
        assert!(p("1,1").angle_pad(3).is_err());
        let a = p("2,1").angle_pad(7).unwrap();
        assert_eq!(a.len(), 7 - 3);
        assert_eq!(a.size(), 7);
    }

    #[test]
    fn curly_pad_examples() {
        assert_eq!(p("3,1").curly_pad().unwrap(), p("4,1"));
        assert_eq!(p("6").curly_pad().unwrap(), p("7"));
        assert_eq!(p("1").pad(4).unwrap().curly_pad().unwrap(), p("1").pad(5).unwrap());
        assert_eq!(Partition::empty().curly_pad(), Err(PartitionError::Empty));
    }

    #[test]
    fn leadsto_examples() {
        assert_eq!(
            p("3,2,1").leadsto(7),
            vec![p("4,2,1"), p("3,3,1"), p("3,2,2"), p("3,2,1,1")]
        );
        assert_eq!(Partition::empty().leadsto(4), vec![p("4")]);
        assert_eq!(p("2").leadsto(4), vec![p("4"), p("3,1"), p("2,2")]);
        assert_eq!(p("2").leadsto(2), vec![p("2")]);
        assert!(p("2").leadsto(1).is_empty());
    }

    #[test]
    fn leadsto_matches_predicate() {
        for lambda in partitions_up_to(4) {
            for n in lambda.size()..=7 {
                let strips = lambda.leadsto(n);
                let filtered: Vec<_> = partitions_of(n)
                    .into_iter()
                    .filter(|mu| lambda.leads_to(mu))
                    .collect();
                assert_eq!(strips, filtered, "{lambda:?} at n={n}");
            }
        }
    }

    #[test]
    fn lex_order() {
        assert_eq!(p("4").lex_compare(&p("3,1")).unwrap(), Ordering::Greater);
        assert_eq!(p("2,2").lex_compare(&p("2,1,1")).unwrap(), Ordering::Greater);
        assert_eq!(p("2,2").lex_compare(&p("2,2")).unwrap(), Ordering::Equal);
        assert!(p("2,2").lex_compare(&p("3")).is_err());
        for n in 1..=7 {
            let all = partitions_of(n);
            assert_eq!(all[0], Partition::row(n));
            assert!(all.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn dim_irrep_examples() {
        assert_eq!(p("5").dim_irrep(), 1);
        assert_eq!(p("2,1").dim_irrep(), 2);
        assert_eq!(count_syt(&p("2,1")), 2);
        for n in 2..=8 {
            let standard = Partition::new(vec![n - 1, 1]).unwrap();
            assert_eq!(standard.dim_irrep(), (n - 1) as u128);
            assert_eq!(count_syt(&standard), (n - 1) as u128);
        }
        for shape in partitions_up_to(8) {
            assert_eq!(shape.dim_irrep(), count_syt(&shape), "{shape:?}");
        }
    }

    #[test]
    fn dimension_sum_of_squares() {
        for n in 0..=9 {
            let total: u128 = partitions_of(n).iter().map(|l| l.dim_irrep().pow(2)).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("3,2,1").to_string(), "3,2,1");
        assert_eq!(p("0"), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "0");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!(p("(2,1)"), p("2,1"));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn centralizers() {
        assert_eq!(p("1,1,1").centralizer_order(), 6);
        assert_eq!(p("2,1").centralizer_order(), 2);
        assert_eq!(p("3").centralizer_order(), 3);
        for n in 1..=8 {
            let total: u128 = partitions_of(n)
                .iter()
                .map(|rho| factorial(n) / rho.centralizer_order())
                .sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn conjugate_is_involution() {
        for lambda in partitions_up_to(7) {
            assert_eq!(lambda.conjugate().conjugate(), lambda);
            assert_eq!(lambda.conjugate().size(), lambda.size());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_partition() -> impl Strategy<Value = Partition> {
            proptest::collection::vec(1usize..5, 0..5).prop_map(Partition::from_unsorted)
        }

        proptest! {
            #[test]
            fn pad_is_valid(lambda in arb_partition(), extra in 0usize..6) {
                let n = (lambda.size() + lambda.first() + extra).max(1);
                let padded = lambda.pad(n).unwrap();
                prop_assert_eq!(padded.size(), n);
                prop_assert_eq!(padded.unpad(), lambda.clone());
                prop_assert_eq!(padded.curly_pad().unwrap(), lambda.pad(n + 1).unwrap());
            }

            #[test]
            fn lex_is_total(n in 1usize..9, i in 0usize..64, j in 0usize..64, k in 0usize..64) {
                let all = partitions_of(n);
                let (a, b, c) = (&all[i % all.len()], &all[j % all.len()], &all[k % all.len()]);
                let ab = a.lex_compare(b).unwrap();
                prop_assert_eq!(ab.reverse(), b.lex_compare(a).unwrap());
                if ab != Ordering::Less && b.lex_compare(c).unwrap() != Ordering::Less {
                    prop_assert_ne!(a.lex_compare(c).unwrap(), Ordering::Less);
                }
                prop_assert_ne!(Partition::row(n).lex_compare(a).unwrap(), Ordering::Less);
            }
        }
    }
}
