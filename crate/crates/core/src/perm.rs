//! Permutations of `{1, ..., n}`.

use std::fmt;

use crate::partitions::{partitions_of, Partition};

/// A permutation of `{1, ..., n}` stored as its image table. Index 0 is unused
/// so that labels can be looked up directly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            img: (0..=n as u8).collect(),
        }
    }

    /// Builds a permutation from the images of `1..=n`.
    pub fn from_images(images: &[u8]) -> Self {
        let n = images.len();
        let mut img = Vec::with_capacity(n + 1);
        img.push(0);
        img.extend_from_slice(images);
        let mut seen = vec![false; n + 1];
        for &x in images {
            assert!(x >= 1 && (x as usize) <= n && !seen[x as usize], "not a permutation: {images:?}");
            seen[x as usize] = true;
        }
        Perm { img }
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        let mut p = Perm::identity(n);
        for cycle in cycles.iter().rev() {
            let mut c = Perm::identity(n);
            for i in 0..cycle.len() {
                c.img[cycle[i] as usize] = cycle[(i + 1) % cycle.len()];
            }
            p = c.compose(&p);
        }
        p
    }

    pub fn transposition(n: usize, a: u8, b: u8) -> Self {
        let mut p = Perm::identity(n);
        p.img.swap(a as usize, b as usize);
        p
    }

    pub fn degree(&self) -> usize {
        self.img.len() - 1
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.img[x as usize]
    }

    /// Images of `1..=n`.
    pub fn images(&self) -> &[u8] {
        &self.img[1..]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u8; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u8;
        }
        Perm { img }
    }

    /// The same permutation viewed in `S_{n+1}`, fixing `n + 1`.
    pub fn extend(&self, n: usize) -> Perm {
        assert!(n >= self.degree());
        let mut img = self.img.clone();
        img.extend(self.degree() as u8 + 1..=n as u8);
        Perm { img }
    }

    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u8;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// The standard element of cycle type `rho`: consecutive cycles
    /// `(1 .. ρ_1)(ρ_1 + 1 .. ρ_1 + ρ_2) ...`.
    pub fn of_cycle_type(rho: &Partition) -> Perm {
        let n = rho.size();
        let mut img: Vec<u8> = (0..=n as u8).collect();
        let mut start = 1usize;
        for &len in rho.parts() {
            for i in 0..len {
                img[start + i] = (start + (i + 1) % len) as u8;
            }
            start += len;
        }
        Perm { img }
    }

    /// Generators `(1 2)` and `(1 2 ... n)` of `S_n`.
    pub fn generators(n: usize) -> Vec<Perm> {
        if n < 2 {
            return Vec::new();
        }
        let cycle: Vec<u8> = (1..=n as u8).collect();
        vec![Perm::transposition(n, 1, 2), Perm::from_cycles(n, &[&cycle])]
    }
}

/// All elements of `S_n` in lexicographic order of image tables.
pub fn all_perms(n: usize) -> Vec<Perm> {
    use itertools::Itertools;
    (1..=n as u8)
        .permutations(n)
        .map(|images| Perm::from_images(&images))
        .collect()
}

/// One representative per conjugacy class, in the order of [`partitions_of`].
pub fn class_representatives(n: usize) -> Vec<(Partition, Perm)> {
    partitions_of(n)
        .into_iter()
        .map(|rho| {
            let p = Perm::of_cycle_type(&rho);
            (rho, p)
        })
        .collect()
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", s.join(" "))
            })
            .collect();
        if cycles.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", cycles.concat())
        }
    }
}
