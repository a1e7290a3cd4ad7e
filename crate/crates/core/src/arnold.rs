//! The cohomology algebra of `C_m(R^d)`: generators `G_ab` of degree `d-1`
//! with `G_ab^2 = 0`, `G_ab = (-1)^d G_ba` and the three-term relation.
//! Normal forms use the basis of monomials with distinct second indices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::characters::ClassFunction;
use crate::linalg::{q, SparseVec, Q};
use crate::partitions::Partition;
use crate::perm::{class_representatives, Perm};

/// Largest `m` for which top characters are computed.
pub const MAX_M: usize = 8;

/// A normal-form monomial `G_{a_1 b_1} ⋯ G_{a_k b_k}` with `a_i < b_i` and
/// `b_1 < ⋯ < b_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ArnoldMonomial {
    pairs: Vec<(u8, u8)>,
}

impl ArnoldMonomial {
    pub fn one() -> Self {
        ArnoldMonomial::default()
    }

    /// Accepts only pairs already in normal form.
    pub fn from_pairs(mut pairs: Vec<(u8, u8)>) -> Option<Self> {
        pairs.sort_by_key(|&(a, b)| (b, a));
        let ok = pairs.iter().all(|&(a, b)| a < b) && pairs.windows(2).all(|w| w[0].1 < w[1].1);
        ok.then_some(ArnoldMonomial { pairs })
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    /// Number of generators; the cohomological degree is this times `d-1`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The smallest element of the block containing each point of `1..=n`.
    pub fn block_minima(&self, n: usize) -> Vec<u8> {
        // Each second index has a unique smaller partner, so walking down
        // reaches the block minimum.
        let mut parent: Vec<u8> = (0..=n as u8).collect();
        for &(a, b) in &self.pairs {
            parent[b as usize] = a;
        }
        let mut root = vec![0u8; n + 1];
        for v in 1..=n {
            let r = if parent[v] as usize == v { v as u8 } else { root[parent[v] as usize] };
            root[v] = r;
        }
        root
    }

    /// The blocks of the set partition determined by the forest.
    pub fn blocks(&self, n: usize) -> Vec<Vec<u8>> {
        let roots = self.block_minima(n);
        let mut blocks: BTreeMap<u8, Vec<u8>> = BTreeMap::new();
        for v in 1..=n as u8 {
            blocks.entry(roots[v as usize]).or_default().push(v);
        }
        blocks.into_values().collect()
    }
}

impl fmt::Display for ArnoldMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("G{a}{b}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for ArnoldMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Straightens an arbitrary product of generators, given in order, into a
/// combination of normal-form monomials.
pub fn straighten(factors: &[(u8, u8)], d: usize) -> BTreeMap<ArnoldMonomial, i64> {
    let mut out = BTreeMap::new();
    straighten_into(factors.to_vec(), 1, d, &mut out);
    out.retain(|_, c| *c != 0);
    out
}

fn straighten_into(mut list: Vec<(u8, u8)>, mut coeff: i64, d: usize, out: &mut BTreeMap<ArnoldMonomial, i64>) {
    let odd_generators = (d - 1) % 2 == 1;
    for pair in list.iter_mut() {
        assert_ne!(pair.0, pair.1, "G_aa is not a generator");
        if pair.0 > pair.1 {
            *pair = (pair.1, pair.0);
            if d % 2 == 1 {
                coeff = -coeff;
            }
        }
    }
    // Insertion sort by (b, a), tracking the Koszul sign.
    for i in 1..list.len() {
        let mut j = i;
        while j > 0 && (list[j - 1].1, list[j - 1].0) > (list[j].1, list[j].0) {
            list.swap(j - 1, j);
            if odd_generators {
                coeff = -coeff;
            }
            j -= 1;
        }
    }
    if list.windows(2).any(|w| w[0] == w[1]) {
        return;
    }
    let clash = (1..list.len()).rev().find(|&i| list[i - 1].1 == list[i].1);
    match clash {
        None => {
            *out.entry(ArnoldMonomial { pairs: list }).or_insert(0) += coeff;
        }
        Some(i) => {
            let (a, c) = list[i - 1];
            let (b, _) = list[i];
            // G_ac G_bc = G_ab G_bc - G_ab G_ac
            let mut first = list.clone();
            first[i - 1] = (a, b);
            first[i] = (b, c);
            let mut second = list;
            second[i - 1] = (a, b);
            second[i] = (a, c);
            straighten_into(first, coeff, d, out);
            straighten_into(second, -coeff, d, out);
        }
    }
}

/// `σ · M`, straightened.
pub fn act(monomial: &ArnoldMonomial, g: &Perm, d: usize) -> BTreeMap<ArnoldMonomial, i64> {
    let moved: Vec<(u8, u8)> = monomial.pairs.iter().map(|&(a, b)| (g.apply(a), g.apply(b))).collect();
    straighten(&moved, d)
}

pub fn to_vector(terms: &BTreeMap<ArnoldMonomial, i64>) -> SparseVec<ArnoldMonomial> {
    terms.iter().map(|(m, c)| (m.clone(), q(*c))).collect()
}

/// All normal-form monomials on `m` points with `k` generators.
pub fn nbc_basis(m: usize, k: usize) -> Vec<ArnoldMonomial> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(b: u8, m: u8, k: usize, current: &mut Vec<(u8, u8)>, out: &mut Vec<ArnoldMonomial>) {
        if current.len() == k {
            out.push(ArnoldMonomial { pairs: current.clone() });
            return;
        }
        if b > m || (m - b + 1) as usize + current.len() < k {
            return;
        }
        for a in 1..b {
            current.push((a, b));
            rec(b + 1, m, k, current, out);
            current.pop();
        }
        rec(b + 1, m, k, current, out);
    }
    rec(2, m as u8, k, &mut current, &mut out);
    out.sort();
    out
}

/// Normal-form monomials whose blocks are exactly the given ones.
pub fn forests_on_blocks(blocks: &[Vec<u8>]) -> Vec<ArnoldMonomial> {
    let mut per_block: Vec<Vec<Vec<(u8, u8)>>> = Vec::new();
    for block in blocks {
        let mut sorted = block.clone();
        sorted.sort();
        let mut choices: Vec<Vec<(u8, u8)>> = vec![Vec::new()];
        for (i, &b) in sorted.iter().enumerate().skip(1) {
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    sorted[..i].iter().map(move |&a| {
                        let mut next = c.clone();
                        next.push((a, b));
                        next
                    })
                })
                .collect();
        }
        per_block.push(choices);
    }
    let mut out = vec![Vec::new()];
    for choices in per_block {
        out = out
            .into_iter()
            .flat_map(|acc: Vec<(u8, u8)>| {
                choices.iter().map(move |c| {
                    let mut next = acc.clone();
                    next.extend(c.iter().copied());
                    next
                })
            })
            .collect();
    }
    let mut monomials: Vec<ArnoldMonomial> = out.into_iter().map(|p| ArnoldMonomial::from_pairs(p).expect("forest is in normal form")).collect();
    monomials.sort();
    monomials
}

/// `∏_{i=1}^{m-1} (1 + i t^{d-1})`, coefficients indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    pub coeffs: Vec<u128>,
}

impl PoincarePolynomial {
    pub fn coefficient(&self, degree: usize) -> u128 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0).unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(deg, &c)| match (deg, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (deg, 1) => format!("t^{deg}"),
                (deg, c) => format!("{c}t^{deg}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn poincare_polynomial(m: usize, d: usize) -> PoincarePolynomial {
    assert!(m >= 1 && d >= 2);
    let step = d - 1;
    let mut coeffs = vec![1u128];
    for i in 1..m {
        let mut next = vec![0u128; coeffs.len() + step];
        for (deg, &c) in coeffs.iter().enumerate() {
            next[deg] += c;
            next[deg + step] += c * i as u128;
        }
        coeffs = next;
    }
    PoincarePolynomial { coeffs }
}

type TopCache = RwLock<HashMap<(usize, usize), Arc<ClassFunction>>>;

/// Character of `S_m` on `H^{(m-1)(d-1)}(C_m(R^d))`.
pub fn top_character(m: usize, d: usize) -> Arc<ClassFunction> {
    assert!((1..=MAX_M).contains(&m) && d >= 2, "top character needs 1 <= m <= {MAX_M}, d >= 2");
    static CACHE: OnceLock<TopCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (m, d % 2);
    if let Some(c) = cache.read().unwrap().get(&key) {
        return c.clone();
    }
    let chi = Arc::new(compute_top_character(m, d));
    cache.write().unwrap().entry(key).or_insert(chi).clone()
}

fn compute_top_character(m: usize, d: usize) -> ClassFunction {
    let basis = nbc_basis(m, m - 1);
    let values = class_representatives(m)
        .into_iter()
        .map(|(_, g)| {
            let trace: i64 = basis.iter().map(|b| act(b, &g, d).get(b).copied().unwrap_or(0)).sum();
            q(trace)
        })
        .collect();
    ClassFunction::from_values(m, values)
}

/// Value of the top character at a cycle type.
pub fn top_character_value(rho: &Partition, d: usize) -> Q {
    top_character(rho.size(), d).value(rho)
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `Ind_{C_m}^{S_m} χ` for the faithful character `ζ` of the cyclic group
/// `⟨(1 ⋯ m)⟩`, optionally twisted by the sign.
pub fn cyclic_induced_character(m: usize, twist_by_sign: bool) -> ClassFunction {
    ClassFunction::from_fn(m, |rho| {
        let j = rho.first();
        if j == 0 || rho.parts().iter().any(|&x| x != j) {
            return q(0);
        }
        let sign = if twist_by_sign && (j - 1) * (m / j) % 2 == 1 { -1 } else { 1 };
        let value = Q::from_integer(rho.centralizer_order().into()) / q(m as i64);
        value * q(sign * mobius(j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::decompose;
    use crate::linalg::Subspace;
    use crate::partitions::{factorial, partitions_of};
    use crate::perm::all_perms;
    use itertools::Itertools;

    fn m(pairs: &[(u8, u8)]) -> ArnoldMonomial {
        ArnoldMonomial::from_pairs(pairs.to_vec()).unwrap()
    }

    #[test]
    fn square_is_zero() {
        for d in 2..=5 {
            assert!(straighten(&[(1, 2), (1, 2)], d).is_empty());
            assert!(straighten(&[(1, 2), (2, 1)], d).is_empty());
        }
    }

    #[test]
    fn orientation_sign() {
        assert_eq!(straighten(&[(2, 1)], 3), BTreeMap::from([(m(&[(1, 2)]), -1)]));
        assert_eq!(straighten(&[(2, 1)], 2), BTreeMap::from([(m(&[(1, 2)]), 1)]));
    }

    #[test]
    fn three_term_relation() {
        for d in 2..=5 {
            let s = straighten(&[(1, 3), (2, 3)], d);
            for key in s.keys() {
                let seconds: Vec<u8> = key.pairs().iter().map(|p| p.1).collect();
                assert!(seconds.iter().all_unique());
            }
            assert_eq!(s, BTreeMap::from([(m(&[(1, 2), (2, 3)]), 1), (m(&[(1, 2), (1, 3)]), -1)]));
            // Cyclic sum of the relation vanishes.
            let mut total: BTreeMap<ArnoldMonomial, i64> = BTreeMap::new();
            for f in [[(1, 2), (2, 3)], [(2, 3), (3, 1)], [(3, 1), (1, 2)]] {
                for (k, c) in straighten(&f, d) {
                    *total.entry(k).or_insert(0) += c;
                }
            }
            assert!(total.values().all(|&c| c == 0), "d={d}: {total:?}");
        }
    }

    #[test]
    fn restraightening_is_idempotent() {
        for d in [2, 3] {
            for factors in [(1u8..=4).permutations(2).map(|v| (v[0], v[1])).take(6).collect::<Vec<_>>()] {
                for combo in factors.iter().copied().combinations(3) {
                    for (key, c) in straighten(&combo, d) {
                        assert_eq!(straighten(key.pairs(), d), BTreeMap::from([(key.clone(), 1)]), "{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn straightening_is_equivariant() {
        let pairs: Vec<(u8, u8)> = (1u8..=4).tuple_combinations().collect();
        for d in [2, 3] {
            for combo in pairs.iter().copied().combinations(3) {
                let base = to_vector(&straighten(&combo, d));
                for g in all_perms(4) {
                    let moved: Vec<(u8, u8)> = combo.iter().map(|&(a, b)| (g.apply(a), g.apply(b))).collect();
                    let direct = to_vector(&straighten(&moved, d));
                    let mut via = SparseVec::new();
                    for (k, c) in base.iter() {
                        via.add_scaled(c, &to_vector(&act(k, &g, d)));
                    }
                    assert_eq!(direct, via);
                }
            }
        }
    }

    #[test]
    fn poincare_examples() {
        for d in 2..=6 {
            let p = poincare_polynomial(2, d);
            assert_eq!(p.coefficient(0), 1);
            assert_eq!(p.coefficient(d - 1), 1);
            assert_eq!(p.total(), 2);
        }
        assert_eq!(poincare_polynomial(3, 2).to_string(), "1 + 3t + 2t^2");
        assert_eq!(poincare_polynomial(3, 3).to_string(), "1 + 3t^2 + 2t^4");
    }

    #[test]
    fn nbc_counts() {
        for mm in 1..=7 {
            assert_eq!(nbc_basis(mm, mm - 1).len() as u128, factorial(mm - 1));
            for d in [2, 3] {
                let p = poincare_polynomial(mm, d);
                for k in 0..mm {
                    assert_eq!(nbc_basis(mm, k).len() as u128, p.coefficient(k * (d - 1)));
                }
            }
        }
        let by_hand: Vec<ArnoldMonomial> = vec![m(&[(1, 2), (1, 3)]), m(&[(1, 2), (2, 3)])];
        assert_eq!(nbc_basis(3, 2), by_hand);
    }

    #[test]
    fn span_of_all_products_matches_poincare() {
        let mm = 4;
        let pairs: Vec<(u8, u8)> = (1u8..=mm).tuple_combinations().collect();
        for d in [2, 3] {
            let p = poincare_polynomial(mm as usize, d);
            for k in 0..=3 {
                let span = Subspace::spanned_by(pairs.iter().copied().combinations(k).map(|c| to_vector(&straighten(&c, d))));
                assert_eq!(span.dim() as u128, p.coefficient(k * (d - 1)), "d={d}, k={k}");
            }
        }
    }

    #[test]
    fn forests_partition_the_basis() {
        let total: usize = [vec![vec![1, 2, 3], vec![4]], vec![vec![1, 4], vec![2, 3]]].iter().map(|b| forests_on_blocks(b).len()).sum();
        assert_eq!(total, 3);
        for f in forests_on_blocks(&[vec![1, 3, 4], vec![2, 5]]) {
            assert_eq!(f.blocks(5), vec![vec![1, 3, 4], vec![2, 5]]);
        }
    }

    /// `Ind_{C_m}^{S_m} (ε ζ)` from the definition, summing complex roots of
    /// unity over the whole group.
    fn induced_from_cyclic_oracle(mm: usize, sign: bool) -> Vec<i64> {
        let cycle: Vec<u8> = (1..=mm as u8).collect();
        let c = Perm::from_cycles(mm, &[&cycle]);
        let mut powers = vec![Perm::identity(mm)];
        for _ in 1..mm {
            powers.push(powers.last().unwrap().compose(&c));
        }
        let group = all_perms(mm);
        partitions_of(mm)
            .iter()
            .map(|rho| {
                let g = Perm::of_cycle_type(rho);
                let mut total = 0.0;
                for x in &group {
                    let conj = x.compose(&g).compose(&x.inverse());
                    if let Some(j) = powers.iter().position(|p| *p == conj) {
                        let eps = if sign { conj.sign() as f64 } else { 1.0 };
                        total += eps * (2.0 * std::f64::consts::PI * j as f64 / mm as f64).cos();
                    }
                }
                (total / mm as f64).round() as i64
            })
            .collect()
    }

    #[test]
    fn cyclic_induction_formula() {
        for mm in 1..=6 {
            for sign in [false, true] {
                let formula: Vec<i64> = cyclic_induced_character(mm, sign).values().iter().map(|v| crate::linalg::to_i64(v).unwrap()).collect();
                assert_eq!(formula, induced_from_cyclic_oracle(mm, sign), "m={mm}");
            }
        }
    }

    #[test]
    fn top_characters() {
        assert_eq!(top_character(2, 2).values(), ClassFunction::trivial(2).values());
        assert_eq!(top_character(2, 3).values(), ClassFunction::sign(2).values());
        let chi = top_character(3, 2);
        assert_eq!(chi.values(), &[q(-1), q(0), q(2)]);
        assert_eq!(*chi, ClassFunction::irreducible(&"2,1".parse().unwrap()).unwrap());
        for mm in 2..=6 {
            assert_eq!(top_character(mm, 2).dimension(), Q::from_integer(factorial(mm - 1).into()));
            assert_eq!(*top_character(mm, 2), cyclic_induced_character(mm, true), "m={mm}");
            assert_eq!(*top_character(mm, 3), cyclic_induced_character(mm, false), "m={mm}");
            assert_eq!(decompose(&top_character(mm, 3)).unwrap().get(&Partition::row(mm)), 0);
        }
    }

    #[test]
    fn top_character_depends_on_parity() {
        for mm in 2..=5 {
            assert_eq!(compute_top_character(mm, 2), compute_top_character(mm, 4));
            assert_eq!(compute_top_character(mm, 3), compute_top_character(mm, 5));
        }
    }
}
