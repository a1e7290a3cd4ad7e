//! Betti numbers of unordered and colored configuration spaces, and the
//! theoretical stable ranges.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arnold::{forests_on_blocks, top_character};
use crate::characters::{decompose, young_invariants_dim, young_permutation_character, CharacterError, ClassFunction};
use crate::linalg::{rank, to_i64, SparseVec, Subspace};
use crate::partitions::{factorial, Partition};
use crate::perm::{all_perms, Perm};

use super::descriptor::Manifold;
use super::explicit::{desk_budget, e2_explicit, E2Mono, ExplicitError, ExplicitModel};

pub const SINGLE_DIFFERENTIAL: &str = "single_differential";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BettiError {
    #[error("not computable for {manifold}: {reason}")]
    NotComputable { manifold: String, reason: String },
    #[error("coloring {mu} needs at least {size} points, got n = {n}")]
    InvalidColoring { mu: String, size: usize, n: usize },
    #[error(transparent)]
    Explicit(#[from] ExplicitError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

fn not_computable(m: &Manifold, reason: &str) -> BettiError {
    BettiError::NotComputable {
        manifold: m.name.clone(),
        reason: reason.to_string(),
    }
}

/// Checks that the explicit complex computes `H^*(C_n(M))`.
fn require_explicit_regime(m: &Manifold) -> Result<(), BettiError> {
    if m.diagonal().is_none() {
        return Err(not_computable(m, "the descriptor has no diagonal class, so the differential is unknown"));
    }
    if !m.has_flag(SINGLE_DIFFERENTIAL) {
        return Err(not_computable(
            m,
            "the descriptor lacks the single_differential flag; for closed even-dimensional manifolds the spectral sequence need not degenerate after the first differential",
        ));
    }
    Ok(())
}

fn truncated_series(dims: &[usize], n: usize, p: usize, sign_twist: bool) -> Vec<Vec<u128>> {
    // poly[k][e]: coefficient of x^k t^e.
    let mut poly = vec![vec![0u128; p + 1]; n + 1];
    poly[0][0] = 1;
    for (e, &count) in dims.iter().enumerate() {
        let symmetric = (e % 2 == 0) != sign_twist;
        for _ in 0..count {
            let mut next = vec![vec![0u128; p + 1]; n + 1];
            for k in 0..=n {
                for deg in 0..=p {
                    let c = poly[k][deg];
                    if c == 0 {
                        continue;
                    }
                    let max_j = if symmetric { n } else { 1 };
                    let mut j = 0;
                    while j <= max_j && k + j <= n && deg + j * e <= p {
                        next[k + j][deg + j * e] += c;
                        j += 1;
                    }
                }
            }
            poly = next;
        }
    }
    poly
}

/// Degree-`p` part of `(V^{⊗n})^{S_n}` for a graded space with `dims[e] = dim V^{(e)}`,
/// where permuting odd factors carries the Koszul sign.
pub fn graded_invariants_dim(dims: &[usize], n: usize, p: usize) -> u128 {
    truncated_series(dims, n, p, false)[n][p]
}

/// Degree-`p` part of the sign-isotypic piece `(V^{⊗n})^ε`.
pub fn graded_sign_invariants_dim(dims: &[usize], n: usize, p: usize) -> u128 {
    truncated_series(dims, n, p, true)[n][p]
}

/// The Young subgroup `S_{c_1} × S_{c_2} × ...` of `S_n`, acting on
/// consecutive ranges of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungSubgroup {
    n: usize,
    sizes: Vec<usize>,
}

impl YoungSubgroup {
    /// `S_{μ_1} × ... × S_{μ_k} × S_{n-|μ|}`.
    pub fn colored(mu: &Partition, n: usize) -> Result<Self, BettiError> {
        if mu.size() > n {
            return Err(BettiError::InvalidColoring {
                mu: mu.to_string(),
                size: mu.size(),
                n,
            });
        }
        let mut sizes: Vec<usize> = mu.parts().to_vec();
        sizes.push(n - mu.size());
        sizes.retain(|&s| s > 0);
        Ok(YoungSubgroup { n, sizes })
    }

    pub fn full(n: usize) -> Self {
        YoungSubgroup {
            n,
            sizes: if n == 0 { Vec::new() } else { vec![n] },
        }
    }

    pub fn trivial(n: usize) -> Self {
        YoungSubgroup { n, sizes: vec![1; n] }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_full(&self) -> bool {
        self.sizes.len() <= 1
    }

    pub fn order(&self) -> u128 {
        self.sizes.iter().map(|&s| factorial(s)).product()
    }

    pub fn elements(&self) -> Vec<Perm> {
        let mut images: Vec<Vec<u8>> = vec![Vec::new()];
        let mut start = 0u8;
        for &s in &self.sizes {
            let local = all_perms(s);
            images = images
                .into_iter()
                .flat_map(|prefix| {
                    local.iter().map(move |g| {
                        let mut next = prefix.clone();
                        next.extend(g.images().iter().map(|&x| x + start));
                        next
                    })
                })
                .collect();
            start += s as u8;
        }
        images.into_iter().map(|im| Perm::from_images(&im)).collect()
    }
}

/// A block of a set partition up to the subgroup: how many points of each
/// color it holds, and the class it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BlockType {
    composition: Vec<usize>,
    label: usize,
    p: usize,
    q: usize,
}

fn compositions_below(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=b).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0));
    out
}

/// Whether the top Arnol'd piece of a block has invariants under the part of
/// the subgroup preserving the block.
fn block_survives(composition: &[usize], d: usize, cache: &mut HashMap<Vec<usize>, bool>) -> Result<bool, CharacterError> {
    let size: usize = composition.iter().sum();
    if size == 1 {
        return Ok(true);
    }
    let key = Partition::from_unsorted(composition.iter().copied().filter(|&x| x > 0).collect());
    if let Some(&hit) = cache.get(key.parts()) {
        return Ok(hit);
    }
    let perm = young_permutation_character(&key, size)?;
    let survives = !top_character(size, d).inner(&perm)?.is_zero();
    cache.insert(key.parts().to_vec(), survives);
    Ok(survives)
}

/// The subcomplex of invariants of the explicit `E_2` page under a Young
/// subgroup, restricted to a window of total degrees.
pub struct InvariantComplex<'a> {
    pub model: ExplicitModel<'a>,
    pub group: YoungSubgroup,
    pub degrees: (usize, usize),
    pub cells: BTreeMap<(usize, usize), Subspace<E2Mono>>,
}

/// Builds the invariants of every cell of total degree in `lo..=hi`.
pub fn invariant_complex<'a>(m: &'a Manifold, group: YoungSubgroup, lo: usize, hi: usize) -> Result<InvariantComplex<'a>, BettiError> {
    let n = group.degree();
    let d = m.dim;
    let model = ExplicitModel::new(m, n);
    let mut survives = HashMap::new();
    let mut types = Vec::new();
    for composition in compositions_below(group.sizes()) {
        if !block_survives(&composition, d, &mut survives)? {
            continue;
        }
        let q: usize = composition.iter().sum::<usize>() - 1;
        for label in 0..m.total_dimension() {
            types.push(BlockType {
                composition: composition.clone(),
                label,
                p: m.degree(label),
                q,
            });
        }
    }
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    let remaining = group.sizes().to_vec();
    collect_multisets(&types, 0, &remaining, 0, hi, d, &mut current, &mut keys);

    let elements = if group.order() == 1 { vec![Perm::identity(n)] } else { group.elements() };
    let budget = desk_budget();
    let mut generated = 0usize;
    let mut cells: BTreeMap<(usize, usize), Subspace<E2Mono>> = BTreeMap::new();
    for key in keys {
        let (p, q) = key.iter().fold((0, 0), |(p, q), &t| (p + types[t].p, q + types[t].q));
        let total = p + q * (d - 1);
        if total < lo || total > hi {
            continue;
        }
        let mut next: Vec<u8> = Vec::new();
        let mut start = 1u8;
        for &s in group.sizes() {
            next.push(start);
            start += s as u8;
        }
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        for &t in &key {
            let mut block = Vec::new();
            for (color, &count) in types[t].composition.iter().enumerate() {
                for _ in 0..count {
                    block.push(next[color]);
                    next[color] += 1;
                }
            }
            block.sort();
            blocks.push(block);
            labels.push(types[t].label);
        }
        let mut classes: Vec<(u8, usize)> = blocks.iter().zip(&labels).filter(|(_, &x)| x != 0).map(|(b, &x)| (b[0], x)).collect();
        classes.sort();
        let cell = cells.entry((p, q)).or_default();
        for arnold in forests_on_blocks(&blocks) {
            generated += 1;
            if generated > budget {
                return Err(ExplicitError::BudgetExceeded {
                    dimension: generated as u128,
                    budget,
                }
                .into());
            }
            let b = E2Mono {
                arnold,
                classes: classes.clone(),
            };
            let v = if elements.len() == 1 { SparseVec::unit(b) } else { model.orbit_sum(&b, &elements) };
            if !v.is_zero() {
                cell.insert(v);
            }
        }
    }
    cells.retain(|_, s| s.dim() > 0);
    Ok(InvariantComplex {
        model,
        group,
        degrees: (lo, hi),
        cells,
    })
}

#[allow(clippy::too_many_arguments)]
fn collect_multisets(
    types: &[BlockType],
    from: usize,
    remaining: &[usize],
    degree: usize,
    max_degree: usize,
    d: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining.iter().all(|&r| r == 0) {
        out.push(current.clone());
        return;
    }
    // Nondecreasing type indices list each multiset once.
    for t in from..types.len() {
        let ty = &types[t];
        if ty.composition.iter().zip(remaining).any(|(a, b)| a > b) {
            continue;
        }
        let deg = degree + ty.p + ty.q * (d - 1);
        if deg > max_degree {
            continue;
        }
        let rest: Vec<usize> = remaining.iter().zip(&ty.composition).map(|(r, a)| r - a).collect();
        current.push(t);
        collect_multisets(types, t, &rest, deg, max_degree, d, current, out);
        current.pop();
    }
}

impl<'a> InvariantComplex<'a> {
    pub fn total_degree(&self, p: usize, q: usize) -> usize {
        p + q * (self.model.manifold.dim - 1)
    }

    fn cells_in_degree(&self, i: usize) -> impl Iterator<Item = (&(usize, usize), &Subspace<E2Mono>)> {
        self.cells.iter().filter(move |((p, q), _)| self.total_degree(*p, *q) == i)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cells_in_degree(i).map(|(_, s)| s.dim()).sum()
    }

    /// Rank of the differential leaving total degree `i`.
    pub fn differential_rank(&self, i: usize) -> Result<usize, BettiError> {
        let mut total = 0;
        for (_, space) in self.cells_in_degree(i) {
            let mut images = Vec::with_capacity(space.dim());
            for v in space.basis() {
                images.push(self.model.differential(v)?);
            }
            total += rank(images);
        }
        Ok(total)
    }

    /// Invariant cocycles of total degree `i`.
    pub fn cocycles(&self, i: usize) -> Result<Vec<SparseVec<E2Mono>>, BettiError> {
        self.model.differential(&SparseVec::new())?;
        let mut out = Vec::new();
        for (_, space) in self.cells_in_degree(i) {
            out.extend(crate::linalg::kernel(space.basis(), |v| self.model.differential(v).expect("diagonal present")));
        }
        Ok(out)
    }

    /// Invariant coboundaries of total degree `i`.
    pub fn coboundaries(&self, i: usize) -> Result<Subspace<E2Mono>, BettiError> {
        let mut out = Subspace::new();
        if i == 0 {
            return Ok(out);
        }
        for (_, space) in self.cells_in_degree(i - 1) {
            for v in space.basis() {
                out.insert(self.model.differential(v)?);
            }
        }
        Ok(out)
    }

    /// `dim H^i` of the invariant complex; needs degrees `i-1` and `i` built.
    pub fn betti(&self, i: usize) -> Result<usize, BettiError> {
        assert!(self.degrees.0 <= i.saturating_sub(1) && i <= self.degrees.1, "degree {i} outside the built window");
        let incoming = if i == 0 { 0 } else { self.differential_rank(i - 1)? };
        Ok(self.dim(i) - self.differential_rank(i)? - incoming)
    }
}

/// Largest total degree with a nonzero `E_2` cell.
pub fn top_degree(m: &Manifold, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    // One block of size n carrying the top class, or n singletons.
    let d = m.dim;
    (n * d).max(d + (n - 1) * (d - 1))
}

fn invariant_betti(m: &Manifold, group: YoungSubgroup, i: usize) -> Result<u128, BettiError> {
    require_explicit_regime(m)?;
    let cx = invariant_complex(m, group, i.saturating_sub(1), i)?;
    Ok(cx.betti(i)? as u128)
}

/// `dim H^i(B_n(M); Q)`: the closed form when `dim M` is odd, otherwise the
/// invariants of the explicit complex.
pub fn betti_unordered(m: &Manifold, n: usize, i: usize) -> Result<u128, BettiError> {
    if m.dim % 2 == 1 {
        return Ok(graded_invariants_dim(&m.betti(), n, i));
    }
    betti_unordered_explicit(m, n, i)
}

/// `dim H^i(B_n(M); Q)` from the `S_n`-invariant part of the explicit complex.
pub fn betti_unordered_explicit(m: &Manifold, n: usize, i: usize) -> Result<u128, BettiError> {
    invariant_betti(m, YoungSubgroup::full(n), i)
}

/// `dim H^i(C_n(M); Q)`.
pub fn betti_ordered(m: &Manifold, n: usize, i: usize) -> Result<u128, BettiError> {
    invariant_betti(m, YoungSubgroup::trivial(n), i)
}

/// `dim H^i(B_{n,μ}(M); Q)`, the invariants of `H^i(C_n(M))` under
/// `S_{μ_1} × ... × S_{μ_k} × S_{n-|μ|}`.
pub fn colored_betti(m: &Manifold, n: usize, i: usize, mu: &Partition) -> Result<u128, BettiError> {
    let group = YoungSubgroup::colored(mu, n)?;
    if group.is_full() {
        return betti_unordered(m, n, i);
    }
    invariant_betti(m, group, i)
}

/// Character of `H^i(C_n(M); Q)` from the full explicit complex.
pub fn cohomology_character(m: &Manifold, n: usize, i: usize) -> Result<ClassFunction, BettiError> {
    require_explicit_regime(m)?;
    let cx = e2_explicit(m, n)?;
    Ok(cx.cohomology_characters()?.remove(&i).unwrap_or_else(|| ClassFunction::zero(n)))
}

/// [`colored_betti`] computed by decomposing `H^i(C_n(M))` into irreducibles
/// and counting Young-subgroup invariants in each.
pub fn colored_betti_by_decomposition(m: &Manifold, n: usize, i: usize, mu: &Partition) -> Result<u128, BettiError> {
    YoungSubgroup::colored(mu, n)?;
    let chi = cohomology_character(m, n, i)?;
    let mut total = 0u128;
    for (lambda, c) in decompose(&chi)?.iter() {
        total += c as u128 * young_invariants_dim(lambda, mu)? as u128;
    }
    Ok(total)
}

/// The composite `H^i(C_n)^{S_n} → H^i(C_{n+1}) → H^i(C_{n+1})^{S_{n+1}}`
/// (pull back along forgetting the last point, then average).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferCheck {
    pub n: usize,
    pub i: usize,
    pub source_dim: usize,
    pub image_dim: usize,
}

impl TransferCheck {
    pub fn injective(&self) -> bool {
        self.source_dim == self.image_dim
    }
}

pub fn transfer_check(m: &Manifold, n: usize, i: usize) -> Result<TransferCheck, BettiError> {
    require_explicit_regime(m)?;
    let lo = i.saturating_sub(1);
    let small = invariant_complex(m, YoungSubgroup::full(n), lo, i)?;
    let large = invariant_complex(m, YoungSubgroup::full(n + 1), lo, i)?;
    let cocycles = small.cocycles(i)?;
    let small_boundaries = small.coboundaries(i)?;
    let source_dim = rank(cocycles.iter().cloned()) - small_boundaries.dim();

    let elements = YoungSubgroup::full(n + 1).elements();
    let mut span = large.coboundaries(i)?;
    let base = span.dim();
    for z in &cocycles {
        let mut image = SparseVec::new();
        for (b, c) in z.iter() {
            image.add_scaled(c, &large.model.orbit_sum(b, &elements));
        }
        span.insert(image);
    }
    Ok(TransferCheck {
        n,
        i,
        source_dim,
        image_dim: span.dim() - base,
    })
}

/// One line of a stable-range report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeLine {
    pub kind: String,
    pub formula: String,
    pub n_min: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableRangeReport {
    pub manifold: String,
    pub dim: usize,
    pub i: usize,
    pub lines: Vec<RangeLine>,
}

impl StableRangeReport {
    pub fn line(&self, kind: &str) -> Option<&RangeLine> {
        self.lines.iter().find(|l| l.kind == kind)
    }
}

impl fmt::Display for StableRangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            write!(f, "{}\t{}\t{}", l.kind, l.formula, l.n_min)?;
            if let Some(note) = &l.note {
                write!(f, "\t{note}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Theoretical stable ranges for `H^i` of the ordered, unordered and colored
/// configuration spaces of `M`.
pub fn stable_range_report(m: &Manifold, i: usize, mu: Option<&Partition>) -> StableRangeReport {
    let d = m.dim;
    let factor = if d == 2 { 4 } else { 2 };
    let mut lines = vec![
        RangeLine {
            kind: "ordered".into(),
            formula: format!("n >= {factor}i"),
            n_min: factor * i,
            note: None,
        },
        RangeLine {
            kind: "unordered".into(),
            formula: "n > i".into(),
            n_min: i + 1,
            note: None,
        },
    ];
    let betti = m.betti();
    let first = (1..betti.len()).find(|&j| betti[j] > 0).unwrap_or(d);
    let k = first.min(d.saturating_sub(1));
    if k >= 2 {
        lines.push(RangeLine {
            kind: "improved".into(),
            formula: "n >= i/k+1".into(),
            n_min: i.div_ceil(k) + 1,
            note: Some(format!("k={k}")),
        });
    }
    let size = mu.map_or(0, |mu| mu.size());
    lines.push(RangeLine {
        kind: "colored".into(),
        formula: format!("n >= max({factor}i, 2|mu|)"),
        n_min: (factor * i).max(2 * size),
        note: mu.map(|mu| format!("mu={mu}")),
    });
    StableRangeReport {
        manifold: m.name.clone(),
        dim: d,
        i,
        lines,
    }
}

/// `dim` of the trivial isotypic part of a character.
pub fn trivial_multiplicity(chi: &ClassFunction) -> Result<u128, BettiError> {
    let c = chi.inner(&ClassFunction::trivial(chi.degree()))?;
    Ok(to_i64(&c).expect("integral multiplicity") as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspaces::descriptor::bundled;
    use crate::linalg::{q, Q};
    use crate::partitions::partitions_of;
    use proptest::prelude::*;

    fn torus() -> Manifold {
        bundled("torus").unwrap()
    }

    /// Averages the Koszul-signed trace of `S_n` on `V^{⊗n}` over classes.
    fn invariants_oracle(dims: &[usize], n: usize, p: usize, sign_twist: bool) -> Q {
        let mut total = Q::zero();
        for rho in partitions_of(n) {
            let mut poly = vec![Q::zero(); p + 1];
            poly[0] = Q::from_integer(1.into());
            for &r in rho.parts() {
                let mut next = vec![Q::zero(); p + 1];
                for (deg, c) in poly.iter().enumerate() {
                    for (e, &count) in dims.iter().enumerate() {
                        if deg + r * e <= p && count > 0 {
                            let sign = if (r - 1) * e % 2 == 1 { -1 } else { 1 };
                            next[deg + r * e] += c * q(sign * count as i64);
                        }
                    }
                }
                poly = next;
            }
            let sign = if sign_twist && (n - rho.len()) % 2 == 1 { -1 } else { 1 };
            total += &poly[p] * q(sign) / Q::from_integer((rho.centralizer_order() as i64).into());
        }
        total
    }

    #[test]
    fn graded_invariants_examples() {
        let s3 = [1, 0, 0, 1];
        for n in 1..=8 {
            assert_eq!(graded_invariants_dim(&s3, n, 3), 1);
            assert_eq!(graded_invariants_dim(&s3, n, 0), 1);
            assert_eq!(graded_invariants_dim(&[1, 2, 1], n, 0), 1);
        }
        // Λ^3 of a three-dimensional degree-one piece first appears at n = 3.
        let v = [1, 3];
        assert_eq!(graded_invariants_dim(&v, 2, 3), 0);
        assert_eq!(graded_invariants_dim(&v, 3, 3), 1);
        assert_eq!(graded_invariants_dim(&v, 7, 3), 1);
    }

    #[test]
    fn lemma_stabilization_onset() {
        // With V^(1) = ... = V^(k-1) = 0 the degree-p part is constant from n = ⌊p/k⌋.
        let s3 = [1, 0, 0, 1];
        for p in 0..=9 {
            for n in p / 3..=10 {
                assert_eq!(graded_invariants_dim(&s3, n, p), graded_invariants_dim(&s3, n + 1, p), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn sign_invariants_vanish_in_low_degree() {
        for name in ["torus", "s2", "s3"] {
            let m = bundled(name).unwrap();
            let betti = m.betti();
            let k = (1..betti.len()).find(|&j| betti[j] > 0).unwrap();
            for qq in 1..=5 {
                for r in 0..(k * qq).saturating_sub(k) {
                    assert_eq!(graded_sign_invariants_dim(&betti, qq, r), 0, "{name} q={qq} r={r}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn graded_invariants_match_trace_average(dims in prop::collection::vec(0usize..3, 1..5), n in 0usize..6, p in 0usize..7) {
            let mut dims = dims;
            dims[0] = 1;
            prop_assert_eq!(Q::from_integer((graded_invariants_dim(&dims, n, p) as i64).into()), invariants_oracle(&dims, n, p, false));
            prop_assert_eq!(Q::from_integer((graded_sign_invariants_dim(&dims, n, p) as i64).into()), invariants_oracle(&dims, n, p, true));
        }
    }

    #[test]
    fn young_subgroup_elements() {
        let g = YoungSubgroup::colored(&Partition::new(vec![2, 1]).unwrap(), 5).unwrap();
        assert_eq!(g.sizes(), &[2, 1, 2]);
        let els = g.elements();
        assert_eq!(els.len() as u128, g.order());
        assert_eq!(els.len(), 4);
        assert!(YoungSubgroup::colored(&Partition::row(3), 2).is_err());
    }

    #[test]
    fn torus_small_betti() {
        let m = torus();
        assert_eq!(betti_unordered(&m, 2, 2).unwrap(), 1);
        assert_eq!(betti_unordered(&m, 3, 2).unwrap(), 3);
        assert_eq!(betti_unordered(&m, 3, 3).unwrap(), 4);
        assert_eq!(betti_unordered(&m, 4, 4).unwrap(), 4);
        for n in 1..=4 {
            assert_eq!(betti_unordered(&m, n, 0).unwrap(), 1);
            assert_eq!(betti_unordered(&m, n, 1).unwrap(), 2);
        }
    }

    #[test]
    fn sphere_has_no_first_betti() {
        let m = bundled("s2").unwrap();
        for n in 2..=4 {
            assert_eq!(betti_unordered(&m, n, 1).unwrap(), 0);
        }
    }

    #[test]
    fn three_sphere_unordered() {
        let m = bundled("s3").unwrap();
        for n in 1..=6 {
            for i in 0..=7 {
                let expected = u128::from(i == 0 || i == 3);
                assert_eq!(betti_unordered(&m, n, i).unwrap(), expected);
                if n <= 5 {
                    assert_eq!(betti_unordered_explicit(&m, n, i).unwrap(), expected, "n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn transfer_consistency() {
        // Invariants of cohomology against cohomology of invariants.
        let m = torus();
        for n in 1..=4 {
            let cx = e2_explicit(&m, n).unwrap();
            for (i, chi) in cx.cohomology_characters().unwrap() {
                assert_eq!(trivial_multiplicity(&chi).unwrap(), betti_unordered(&m, n, i).unwrap(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn ordered_matches_full_complex() {
        for name in ["torus", "s2", "s3"] {
            let m = bundled(name).unwrap();
            for n in 1..=3 {
                let b = e2_explicit(&m, n).unwrap().e3_betti().unwrap();
                for (i, &bi) in b.iter().enumerate() {
                    assert_eq!(betti_ordered(&m, n, i).unwrap(), bi as u128, "{name} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn colored_special_cases() {
        let m = torus();
        for n in 1..=3 {
            for i in 0..=3 {
                let unordered = betti_unordered(&m, n, i).unwrap();
                assert_eq!(colored_betti(&m, n, i, &Partition::empty()).unwrap(), unordered);
                assert_eq!(colored_betti(&m, n, i, &Partition::row(n)).unwrap(), unordered);
                assert_eq!(colored_betti(&m, n, i, &Partition::column(n)).unwrap(), betti_ordered(&m, n, i).unwrap());
            }
        }
    }

    #[test]
    fn colored_by_decomposition_agrees() {
        let m = torus();
        for n in 2..=4 {
            for i in 0..=3 {
                for mu in [Partition::row(1), Partition::row(2), Partition::new(vec![1, 1]).unwrap()] {
                    if mu.size() > n {
                        continue;
                    }
                    assert_eq!(colored_betti(&m, n, i, &mu).unwrap(), colored_betti_by_decomposition(&m, n, i, &mu).unwrap(), "n={n} i={i} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn colored_three_sphere_stabilizes() {
        let m = bundled("s3").unwrap();
        let mu = Partition::row(1);
        for i in 0..=2 {
            let onset = (2 * i).max(2).max(1);
            for n in onset..4 {
                assert_eq!(colored_betti(&m, n, i, &mu).unwrap(), colored_betti(&m, n + 1, i, &mu).unwrap(), "i={i} n={n}");
            }
        }
    }

    #[test]
    fn transfer_is_injective_in_range() {
        let m = torus();
        for n in 1..=4 {
            for i in 0..n {
                let check = transfer_check(&m, n, i).unwrap();
                assert!(check.injective(), "{check:?}");
                assert_eq!(check.source_dim as u128, betti_unordered(&m, n, i).unwrap());
            }
        }
    }

    #[test]
    fn unflagged_even_manifold_is_not_computable() {
        let text = bundled("torus").unwrap().to_string().replace("flag single_differential\n", "");
        let m = Manifold::parse(&text).unwrap();
        assert!(matches!(betti_unordered(&m, 3, 2), Err(BettiError::NotComputable { .. })));
        assert!(matches!(colored_betti(&m, 3, 2, &Partition::row(1)), Err(BettiError::NotComputable { .. })));
    }

    #[test]
    fn range_report_examples() {
        let t = torus();
        let r = stable_range_report(&t, 3, None);
        assert_eq!(r.line("ordered").unwrap().n_min, 12);
        assert_eq!(r.line("ordered").unwrap().formula, "n >= 4i");
        assert_eq!(r.line("unordered").unwrap().n_min, 4);
        assert!(r.line("improved").is_none());
        let s3 = bundled("s3").unwrap();
        let r = stable_range_report(&s3, 3, Some(&Partition::row(2)));
        assert_eq!(r.line("ordered").unwrap().n_min, 6);
        assert_eq!(r.line("colored").unwrap().n_min, 6);
        // A 4-manifold with b_1 = b_2 = 0 gets k = 3.
        let m = Manifold::parse("name S4\ndim 4\nclass 1 0\nclass pt 4\ndiag 1 pt 1\ndiag pt 1 1\nflag orientable\n").unwrap();
        let r = stable_range_report(&m, 6, None);
        let improved = r.line("improved").unwrap();
        assert_eq!(improved.formula, "n >= i/k+1");
        assert_eq!(improved.n_min, 3);
        assert_eq!(improved.note.as_deref(), Some("k=3"));
    }

    #[test]
    fn top_degree_bounds_cells() {
        for name in ["torus", "s2", "s3"] {
            let m = bundled(name).unwrap();
            for n in 1..=3 {
                let cx = e2_explicit(&m, n).unwrap();
                let top = cx.cells.keys().map(|&(p, qq)| cx.total_degree(p, qq)).max().unwrap();
                assert!(top <= top_degree(&m, n));
            }
        }
    }
}
