//! Permutation actions on sparse vectors: orbit spans, characters from traces
//! and isotypic projection.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;

use crate::characters::{character_table, class_index, ClassFunction, CharacterError};
use crate::linalg::{q, Key, SparseVec, Subspace, Q};
use crate::partitions::Partition;
use crate::perm::{all_perms, class_representatives, Perm};

/// A basis on which `S_n` acts by signed permutations.
pub trait PermBasis: Key {
    /// Image of the basis element and whether it picks up a sign.
    fn act(&self, g: &Perm) -> (Self, bool);
}

impl<K: PermBasis> PermBasis for (u8, K) {
    fn act(&self, g: &Perm) -> (Self, bool) {
        let (k, neg) = self.1.act(g);
        ((self.0, k), neg)
    }
}

pub fn act_vec<K: PermBasis>(v: &SparseVec<K>, g: &Perm) -> SparseVec<K> {
    v.map_keys(|k| Some(k.act(g)))
}

/// The smallest subspace containing `start` and `seeds` that is stable under
/// `generators`. `start` must already be stable.
pub fn orbit_span<K: PermBasis>(start: Subspace<K>, seeds: impl IntoIterator<Item = SparseVec<K>>, generators: &[Perm]) -> Subspace<K> {
    let mut span = start;
    let mut stack: Vec<SparseVec<K>> = seeds.into_iter().collect();
    stack.reverse();
    while let Some(v) = stack.pop() {
        if span.contains(&v) {
            continue;
        }
        for g in generators {
            stack.push(act_vec(&v, g));
        }
        span.insert(v);
    }
    span
}

/// Character of the action on an `S_n`-stable subspace.
pub fn character_of<K: PermBasis>(space: &Subspace<K>, n: usize) -> ClassFunction {
    let values = class_representatives(n)
        .into_iter()
        .map(|(_, g)| crate::linalg::trace_on(space, |v| act_vec(v, &g)))
        .collect();
    ClassFunction::from_values(n, values)
}

/// Character of `space / sub` for stable `sub ⊆ space`.
pub fn quotient_character<K: PermBasis>(space: &Subspace<K>, sub: &Subspace<K>, n: usize) -> ClassFunction {
    character_of(space, n).sub(&character_of(sub, n)).expect("same degree")
}

type ElementCache = RwLock<HashMap<usize, Arc<Vec<(Perm, usize)>>>>;

/// Every element of `S_n` with the index of its conjugacy class.
pub fn group_elements(n: usize) -> Arc<Vec<(Perm, usize)>> {
    static CACHE: OnceLock<ElementCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(e) = cache.read().unwrap().get(&n) {
        return e.clone();
    }
    let elems: Vec<(Perm, usize)> = all_perms(n)
        .into_iter()
        .map(|g| {
            let c = class_index(n, &g.cycle_type());
            (g, c)
        })
        .collect();
    let elems = Arc::new(elems);
    cache.write().unwrap().entry(n).or_insert(elems).clone()
}

/// `Σ_g χ^λ(g) g·v`, a nonzero multiple of the isotypic projection of `v`.
pub fn project_isotypic<K: PermBasis>(v: &SparseVec<K>, lambda: &Partition) -> Result<SparseVec<K>, CharacterError> {
    let n = lambda.size();
    let table = character_table(n)?;
    let row = table.row(lambda);
    let mut acc: HashMap<K, Q> = HashMap::new();
    for (g, class) in group_elements(n).iter() {
        let chi = row[*class];
        if chi == 0 {
            continue;
        }
        for (k, c) in v.iter() {
            let (image, neg) = k.act(g);
            let coeff = c * q(if neg { -chi } else { chi });
            *acc.entry(image).or_insert_with(Q::zero) += coeff;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// The lift to `space` of the `V_λ`-isotypic component of `space / modulo`,
/// i.e. the subspace `U` with `modulo ⊆ U ⊆ space` and `U / modulo` isotypic.
/// `multiplicity` is the known multiplicity of `V_λ` in the quotient.
pub fn isotypic_component<K: PermBasis>(
    space: &Subspace<K>,
    modulo: &Subspace<K>,
    lambda: &Partition,
    multiplicity: u64,
) -> Result<Subspace<K>, CharacterError> {
    let n = lambda.size();
    let target = modulo.dim() + (multiplicity as usize) * lambda.dim_irrep() as usize;
    let gens = Perm::generators(n);
    let mut current = modulo.clone();
    for b in space.basis() {
        if current.dim() >= target {
            break;
        }
        let p = project_isotypic(b, lambda)?;
        if !current.contains(&p) {
            current = orbit_span(current, [p], &gens);
        }
    }
    assert_eq!(current.dim(), target, "isotypic component of {lambda:?} has the wrong dimension");
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::decompose;

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
    struct Point(u8);

    impl PermBasis for Point {
        fn act(&self, g: &Perm) -> (Self, bool) {
            (Point(g.apply(self.0)), false)
        }
    }

    fn permutation_module(n: usize) -> Subspace<Point> {
        Subspace::spanned_by((1..=n as u8).map(|i| SparseVec::unit(Point(i))))
    }

    #[test]
    fn permutation_module_character() {
        let space = permutation_module(4);
        let chi = character_of(&space, 4);
        let m = decompose(&chi).unwrap();
        assert_eq!(m.get(&"4".parse().unwrap()), 1);
        assert_eq!(m.get(&"3,1".parse().unwrap()), 1);
    }

    #[test]
    fn orbit_of_a_point_is_everything() {
        let span = orbit_span(Subspace::new(), [SparseVec::unit(Point(1))], &Perm::generators(5));
        assert_eq!(span.dim(), 5);
    }

    #[test]
    fn isotypic_of_permutation_module() {
        let space = permutation_module(4);
        let triv = isotypic_component(&space, &Subspace::new(), &"4".parse().unwrap(), 1).unwrap();
        assert_eq!(triv.dim(), 1);
        let std = isotypic_component(&space, &Subspace::new(), &"3,1".parse().unwrap(), 1).unwrap();
        assert_eq!(std.dim(), 3);
        for v in std.basis() {
            let total: Q = v.iter().map(|(_, c)| c.clone()).sum();
            assert!(total.is_zero());
        }
        let quotient = quotient_character(&space, &triv, 4);
        assert_eq!(decompose(&quotient).unwrap().get(&"3,1".parse().unwrap()), 1);
    }

    #[test]
    fn group_element_count() {
        assert_eq!(group_elements(5).len(), 120);
    }
}
