//! Characters of the cells `E_2^{p,q(d-1)}` of the Leray spectral sequence
//! for `C_n(M) ⊂ M^n`, assembled from set partitions of `{1..n}`.

use std::collections::BTreeMap;

use crate::arnold::top_character;
use crate::characters::{decompose, ClassFunction, MultiplicityVector};
use crate::linalg::{q, to_i64};
use crate::partitions::Partition;
use crate::perm::{class_representatives, Perm};

use super::descriptor::Manifold;

/// All set partitions of `{1..n}`, blocks sorted by minimum.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, n: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u8>>>) {
        if i == n {
            let mut blocks: Vec<Vec<u8>> = vec![Vec::new(); max];
            for (pt, &l) in labels.iter().enumerate() {
                blocks[l].push(pt as u8 + 1);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, n, max.max(l + 1), labels, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(0, n, 0, &mut labels, &mut out);
    out
}

/// One cycle `B_1 → ⋯ → B_r → B_1` of `σ` on the blocks of an invariant set
/// partition.
#[derive(Debug, Clone)]
struct BlockCycle {
    size: usize,
    len: usize,
    top_value: i64,
}

/// The cycles of `σ` on the blocks, or `None` if `σ` moves the partition.
fn block_cycles(sigma: &Perm, blocks: &[Vec<u8>], d: usize) -> Option<Vec<BlockCycle>> {
    let n = sigma.degree();
    let mut block_of = vec![usize::MAX; n + 1];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            block_of[x as usize] = i;
        }
    }
    let mut image = vec![0usize; blocks.len()];
    for (i, b) in blocks.iter().enumerate() {
        let target = block_of[sigma.apply(b[0]) as usize];
        if b.iter().any(|&x| block_of[sigma.apply(x) as usize] != target) {
            return None;
        }
        image[i] = target;
    }
    let mut seen = vec![false; blocks.len()];
    let mut cycles = Vec::new();
    for start in 0..blocks.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = image[i];
            len += 1;
        }
        let block = &blocks[start];
        let size = block.len();
        let top_value = if size == 1 {
            1
        } else {
            // Cycle type of σ^len restricted to the block.
            let power = |x: u8| (0..len).fold(x, |y, _| sigma.apply(y));
            let mut visited = vec![false; n + 1];
            let mut parts = Vec::new();
            for &x in block {
                if visited[x as usize] {
                    continue;
                }
                let mut c = 0;
                let mut y = x;
                while !visited[y as usize] {
                    visited[y as usize] = true;
                    y = power(y);
                    c += 1;
                }
                parts.push(c);
            }
            let rho = Partition::from_unsorted(parts);
            to_i64(&top_character(size, d).value(&rho)).expect("integral character")
        };
        cycles.push(BlockCycle { size, len, top_value });
    }
    Some(cycles)
}

/// Degree data of a summand: total degree on blocks of size at least two,
/// and the multiset of positive degrees on singletons.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSplit {
    pub r: usize,
    pub alpha: Vec<usize>,
}

impl DegreeSplit {
    pub fn p(&self) -> usize {
        self.r + self.alpha.iter().sum::<usize>()
    }
}

/// Trace contributions of one invariant set partition, keyed by degree data.
fn partition_trace(m: &Manifold, cycles: &[BlockCycle]) -> BTreeMap<DegreeSplit, i64> {
    let d = m.dim;
    let mut acc: BTreeMap<DegreeSplit, i64> = BTreeMap::from([(DegreeSplit { r: 0, alpha: Vec::new() }, 1)]);
    for c in cycles {
        if c.top_value == 0 {
            return BTreeMap::new();
        }
        let mut next: BTreeMap<DegreeSplit, i64> = BTreeMap::new();
        for (key, value) in &acc {
            for x in 0..m.total_dimension() {
                let deg = m.degree(x);
                let block_degree = (c.size - 1) * (d - 1) + deg;
                let sign = if block_degree * (c.len - 1) % 2 == 1 { -1 } else { 1 };
                let mut k = key.clone();
                if c.size == 1 {
                    if deg > 0 {
                        k.alpha.extend(std::iter::repeat_n(deg, c.len));
                        k.alpha.sort_unstable_by(|a, b| b.cmp(a));
                    }
                } else {
                    k.r += c.len * deg;
                }
                *next.entry(k).or_insert(0) += value * sign * c.top_value;
            }
        }
        acc = next;
    }
    acc.retain(|_, v| *v != 0);
    acc
}

/// Block-size shape `μ ⊢ q` of a set partition: sizes minus one of the
/// non-singleton blocks.
fn block_shape(blocks: &[Vec<u8>]) -> Partition {
    Partition::from_unsorted(blocks.iter().map(|b| b.len() - 1).filter(|&s| s > 0).collect())
}

type Summands = BTreeMap<(Partition, DegreeSplit), Vec<i64>>;

/// Characters of the summands `E(μ, r, α)_n`, as values in class order.
fn summand_characters(m: &Manifold, n: usize, only_q: Option<usize>) -> Summands {
    let classes = class_representatives(n);
    let partitions = set_partitions(n);
    let mut out: Summands = BTreeMap::new();
    for (ci, (_, sigma)) in classes.iter().enumerate() {
        for blocks in &partitions {
            if only_q.is_some_and(|q| n - blocks.len() != q) {
                continue;
            }
            let Some(cycles) = block_cycles(sigma, blocks, m.dim) else {
                continue;
            };
            let shape = block_shape(blocks);
            for (split, v) in partition_trace(m, &cycles) {
                out.entry((shape.clone(), split)).or_insert_with(|| vec![0; classes.len()])[ci] += v;
            }
        }
    }
    out.retain(|_, v| v.iter().any(|&x| x != 0));
    out
}

/// Characters of every nonzero cell, keyed by `(p, q)` where the cell sits in
/// total degree `p + q(d-1)`.
pub fn e2_characters(m: &Manifold, n: usize) -> BTreeMap<(usize, usize), ClassFunction> {
    let mut cells: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
    for ((shape, split), values) in summand_characters(m, n, None) {
        let entry = cells.entry((split.p(), shape.size())).or_insert_with(|| vec![0; values.len()]);
        for (a, b) in entry.iter_mut().zip(&values) {
            *a += b;
        }
    }
    cells
        .into_iter()
        .filter(|(_, v)| v.iter().any(|&x| x != 0))
        .map(|(k, v)| (k, ClassFunction::from_values(n, v.into_iter().map(q).collect())))
        .collect()
}

/// Character of the single cell `E_2^{p, q(d-1)}`.
pub fn e2_character(m: &Manifold, n: usize, p: usize, q_: usize) -> ClassFunction {
    let mut values = vec![0i64; class_representatives(n).len()];
    for ((shape, split), v) in summand_characters(m, n, Some(q_)) {
        if split.p() == p && shape.size() == q_ {
            for (a, b) in values.iter_mut().zip(&v) {
                *a += b;
            }
        }
    }
    ClassFunction::from_values(n, values.into_iter().map(q).collect())
}

/// One summand `E(μ, r, α)` followed along a window of `n`.
#[derive(Debug, Clone)]
pub struct BlockRow {
    pub mu: Partition,
    pub r: usize,
    pub alpha: Partition,
    /// `|μ| + ℓ(μ) + ℓ(α)`; the summand is induced from `S_k × S_{n-k}`.
    pub k: usize,
    /// Smallest `n` in the window from which the multiplicities are constant.
    pub observed_onset: Option<usize>,
    pub dimensions: Vec<(usize, u128)>,
    pub top: Option<MultiplicityVector>,
}

/// The decomposition of `E_2^{p, q(d-1)}` into the summands `E(μ, r, α)_n`
/// on the window `n_lo..=n_hi`.
pub fn block_report(m: &Manifold, p: usize, q_: usize, n_lo: usize, n_hi: usize) -> Vec<BlockRow> {
    let mut series: BTreeMap<(Partition, usize, Partition), Vec<(usize, MultiplicityVector)>> = BTreeMap::new();
    for n in n_lo..=n_hi {
        for ((shape, split), values) in summand_characters(m, n, Some(q_)) {
            if split.p() != p {
                continue;
            }
            let chi = ClassFunction::from_values(n, values.into_iter().map(q).collect());
            let mult = decompose(&chi).expect("E2 summands are characters");
            let alpha = Partition::from_unsorted(split.alpha.clone());
            series.entry((shape, split.r, alpha)).or_default().push((n, mult));
        }
    }
    series
        .into_iter()
        .map(|((mu, r, alpha), rows)| {
            let k = mu.size() + mu.len() + alpha.len();
            let forms: Vec<_> = rows.iter().map(|(_, m)| m.stable_form()).collect();
            let last = rows.last().map(|(n, _)| *n);
            let mut onset = last;
            for i in (0..rows.len().saturating_sub(1)).rev() {
                if forms[i] == forms[i + 1] && rows[i + 1].0 == rows[i].0 + 1 {
                    onset = Some(rows[i].0);
                } else {
                    break;
                }
            }
            // A summand present only at the top of the window gives no evidence.
            let observed_onset = if rows.len() >= 2 && onset != last { onset } else { None };
            BlockRow {
                mu,
                r,
                alpha,
                k,
                observed_onset,
                dimensions: rows.iter().map(|(n, m)| (*n, m.total_dimension())).collect(),
                top: rows.last().map(|(_, m)| m.clone()),
            }
        })
        .collect()
}
