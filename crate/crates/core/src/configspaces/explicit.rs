//! Explicit model of the `E_2` page: normal-form Arnol'd monomials times one
//! cohomology class per block (placed at the block minimum), with the
//! differential `∂G_ab = Δ_ab`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arnold::{nbc_basis, straighten, ArnoldMonomial};
use crate::characters::ClassFunction;
use crate::linalg::{kernel, q, trace_on, SparseVec, Subspace, Q};
use crate::perm::{class_representatives, Perm};

use super::descriptor::Manifold;

/// Default cap on the number of basis elements of an explicit complex.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_VAR: &str = "REPSTAB_DESK_BUDGET";

pub fn desk_budget() -> usize {
    std::env::var(BUDGET_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplicitError {
    #[error("descriptor {0} has no diagonal class")]
    MissingDiagonal(String),
    #[error("explicit complex has {dimension} basis elements, above the budget of {budget} (set {BUDGET_VAR} to raise it)")]
    BudgetExceeded { dimension: u128, budget: usize },
}

/// Basis element: an Arnol'd monomial and the non-unit classes sitting at
/// block minima, sorted by point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct E2Mono {
    pub arnold: ArnoldMonomial,
    pub classes: Vec<(u8, usize)>,
}

impl E2Mono {
    pub fn q(&self) -> usize {
        self.arnold.len()
    }

    pub fn p(&self, m: &Manifold) -> usize {
        self.classes.iter().map(|&(_, x)| m.degree(x)).sum()
    }
}

impl fmt::Debug for E2Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.arnold)?;
        for (v, x) in &self.classes {
            write!(f, "*x{x}@{v}")?;
        }
        Ok(())
    }
}

/// A factor in an unnormalized product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    G(u8, u8),
    X(u8, usize),
}

/// Products in the `E_2` algebra of `C_n(M)`.
#[derive(Clone, Copy)]
pub struct ExplicitModel<'a> {
    pub manifold: &'a Manifold,
    pub n: usize,
}

impl<'a> ExplicitModel<'a> {
    pub fn new(manifold: &'a Manifold, n: usize) -> Self {
        ExplicitModel { manifold, n }
    }

    fn odd(&self, f: Factor) -> bool {
        match f {
            Factor::G(..) => (self.manifold.dim - 1) % 2 == 1,
            Factor::X(_, x) => self.manifold.degree(x) % 2 == 1,
        }
    }

    pub fn factors(b: &E2Mono) -> Vec<Factor> {
        b.arnold
            .pairs()
            .iter()
            .map(|&(a, c)| Factor::G(a, c))
            .chain(b.classes.iter().map(|&(v, x)| Factor::X(v, x)))
            .collect()
    }

    /// Adds `coeff ·` (product of `factors`, in order) to `out` in normal form.
    pub fn normalize(&self, factors: &[Factor], coeff: &Q, out: &mut HashMap<E2Mono, Q>) {
        let m = self.manifold;
        let mut negate = false;
        let mut x_parity = false;
        let mut gs = Vec::new();
        let mut xs = Vec::new();
        for &f in factors {
            match f {
                Factor::G(a, b) => {
                    if x_parity && self.odd(f) {
                        negate = !negate;
                    }
                    gs.push((a, b));
                }
                Factor::X(v, x) => {
                    if self.odd(f) {
                        x_parity = !x_parity;
                    }
                    xs.push((v, x));
                }
            }
        }
        for (arnold, c) in straighten(&gs, m.dim) {
            let minima = arnold.block_minima(self.n);
            let mut moved: Vec<(u8, usize)> = xs.iter().map(|&(v, x)| (minima[v as usize], x)).collect();
            let mut neg = negate ^ (c < 0);
            for i in 1..moved.len() {
                let mut j = i;
                while j > 0 && moved[j - 1].0 > moved[j].0 {
                    if m.degree(moved[j - 1].1) % 2 == 1 && m.degree(moved[j].1) % 2 == 1 {
                        neg = !neg;
                    }
                    moved.swap(j - 1, j);
                    j -= 1;
                }
            }
            let base = if neg { -coeff * q(c.abs()) } else { coeff * q(c.abs()) };
            let mut terms: Vec<(Vec<(u8, usize)>, Q)> = vec![(Vec::new(), base)];
            let mut i = 0;
            while i < moved.len() {
                let point = moved[i].0;
                let mut product: BTreeMap<usize, Q> = BTreeMap::from([(0, Q::one())]);
                while i < moved.len() && moved[i].0 == point {
                    let x = moved[i].1;
                    let mut next = BTreeMap::new();
                    for (y, cy) in &product {
                        for (z, cz) in m.mul(*y, x) {
                            *next.entry(*z).or_insert_with(Q::zero) += cy * cz;
                        }
                    }
                    next.retain(|_, c: &mut Q| !c.is_zero());
                    product = next;
                    i += 1;
                }
                if product.is_empty() {
                    terms.clear();
                    break;
                }
                let mut next_terms = Vec::new();
                for (classes, c) in &terms {
                    for (z, cz) in &product {
                        let mut cl = classes.clone();
                        if *z != 0 {
                            cl.push((point, *z));
                        }
                        next_terms.push((cl, c * cz));
                    }
                }
                terms = next_terms;
            }
            for (classes, c) in terms {
                let key = E2Mono {
                    arnold: arnold.clone(),
                    classes,
                };
                let entry = out.entry(key).or_insert_with(Q::zero);
                *entry += c;
            }
        }
    }

    fn collect(map: HashMap<E2Mono, Q>) -> SparseVec<E2Mono> {
        map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn act_mono(&self, b: &E2Mono, g: &Perm) -> SparseVec<E2Mono> {
        let moved: Vec<Factor> = Self::factors(b)
            .into_iter()
            .map(|f| match f {
                Factor::G(a, c) => Factor::G(g.apply(a), g.apply(c)),
                Factor::X(v, x) => Factor::X(g.apply(v), x),
            })
            .collect();
        let mut out = HashMap::new();
        self.normalize(&moved, &Q::one(), &mut out);
        Self::collect(out)
    }

    pub fn act(&self, v: &SparseVec<E2Mono>, g: &Perm) -> SparseVec<E2Mono> {
        let mut out = HashMap::new();
        for (b, c) in v.iter() {
            let moved: Vec<Factor> = Self::factors(b)
                .into_iter()
                .map(|f| match f {
                    Factor::G(a, c) => Factor::G(g.apply(a), g.apply(c)),
                    Factor::X(v, x) => Factor::X(g.apply(v), x),
                })
                .collect();
            self.normalize(&moved, c, &mut out);
        }
        Self::collect(out)
    }

    /// `Σ_{h ∈ group} h·b`.
    pub fn orbit_sum(&self, b: &E2Mono, group: &[Perm]) -> SparseVec<E2Mono> {
        let factors = Self::factors(b);
        let mut out = HashMap::new();
        let one = Q::one();
        let mut moved = Vec::with_capacity(factors.len());
        for h in group {
            moved.clear();
            moved.extend(factors.iter().map(|f| match *f {
                Factor::G(a, c) => Factor::G(h.apply(a), h.apply(c)),
                Factor::X(v, x) => Factor::X(h.apply(v), x),
            }));
            self.normalize(&moved, &one, &mut out);
        }
        Self::collect(out)
    }

    /// The derivation with `∂G_ab = Δ_ab` and `∂ = 0` on classes.
    pub fn differential(&self, v: &SparseVec<E2Mono>) -> Result<SparseVec<E2Mono>, ExplicitError> {
        let diag = self.manifold.diagonal().ok_or_else(|| ExplicitError::MissingDiagonal(self.manifold.name.clone()))?;
        let g_odd = (self.manifold.dim - 1) % 2 == 1;
        let mut out = HashMap::new();
        for (b, c) in v.iter() {
            let factors = Self::factors(b);
            for (j, &(a, bb)) in b.arnold.pairs().iter().enumerate() {
                let sign = if g_odd && j % 2 == 1 { -c.clone() } else { c.clone() };
                for (x, y, cd) in diag {
                    let mut replaced: Vec<Factor> = Vec::with_capacity(factors.len() + 1);
                    replaced.extend_from_slice(&factors[..j]);
                    replaced.push(Factor::X(a, *x));
                    replaced.push(Factor::X(bb, *y));
                    replaced.extend_from_slice(&factors[j + 1..]);
                    self.normalize(&replaced, &(&sign * cd), &mut out);
                }
            }
        }
        Ok(Self::collect(out))
    }

    /// Normal form of an arbitrary product.
    pub fn product(&self, factors: &[Factor]) -> SparseVec<E2Mono> {
        let mut out = HashMap::new();
        self.normalize(factors, &Q::one(), &mut out);
        Self::collect(out)
    }
}

/// Size of the full `E_2` page: `h (h+1) ⋯ (h+n-1)` for `h = dim H^*(M)`.
pub fn e2_total_dimension(m: &Manifold, n: usize) -> u128 {
    let h = m.total_dimension() as u128;
    (0..n as u128).map(|j| h + j).product()
}

/// The explicit `E_2` page of `C_n(M)` with its differential.
pub struct E2Complex<'a> {
    pub model: ExplicitModel<'a>,
    pub cells: BTreeMap<(usize, usize), Vec<E2Mono>>,
}

pub fn e2_explicit(m: &Manifold, n: usize) -> Result<E2Complex<'_>, ExplicitError> {
    let total = e2_total_dimension(m, n);
    let budget = desk_budget();
    if total > budget as u128 {
        return Err(ExplicitError::BudgetExceeded { dimension: total, budget });
    }
    let mut cells: BTreeMap<(usize, usize), Vec<E2Mono>> = BTreeMap::new();
    for q_ in 0..n.max(1) {
        for arnold in nbc_basis(n, q_) {
            let minima: Vec<u8> = arnold.blocks(n).iter().map(|b| b[0]).collect();
            let mut assignments: Vec<Vec<(u8, usize)>> = vec![Vec::new()];
            for &v in &minima {
                assignments = assignments
                    .into_iter()
                    .flat_map(|a| {
                        (0..m.total_dimension()).map(move |x| {
                            let mut next = a.clone();
                            if x != 0 {
                                next.push((v, x));
                            }
                            next
                        })
                    })
                    .collect();
            }
            for classes in assignments {
                let b = E2Mono {
                    arnold: arnold.clone(),
                    classes,
                };
                cells.entry((b.p(m), q_)).or_default().push(b);
            }
        }
    }
    for basis in cells.values_mut() {
        basis.sort();
    }
    Ok(E2Complex {
        model: ExplicitModel::new(m, n),
        cells,
    })
}

impl<'a> E2Complex<'a> {
    pub fn manifold(&self) -> &'a Manifold {
        self.model.manifold
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn total_degree(&self, p: usize, q_: usize) -> usize {
        p + q_ * (self.manifold().dim - 1)
    }

    pub fn cell_dims(&self) -> BTreeMap<(usize, usize), usize> {
        self.cells.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn cell(&self, p: usize, q_: usize) -> &[E2Mono] {
        self.cells.get(&(p, q_)).map_or(&[], |v| v.as_slice())
    }

    /// Target cell of the differential leaving `(p, q)`.
    pub fn target(&self, p: usize, q_: usize) -> Option<(usize, usize)> {
        (q_ > 0).then(|| (p + self.manifold().dim, q_ - 1))
    }

    /// Source cell of the differential entering `(p, q)`.
    pub fn source(&self, p: usize, q_: usize) -> Option<(usize, usize)> {
        (p >= self.manifold().dim).then(|| (p - self.manifold().dim, q_ + 1))
    }

    fn units(&self, p: usize, q_: usize) -> Vec<SparseVec<E2Mono>> {
        self.cell(p, q_).iter().cloned().map(SparseVec::unit).collect()
    }

    pub fn differential_rank(&self, p: usize, q_: usize) -> Result<usize, ExplicitError> {
        let mut images = Subspace::new();
        for b in self.units(p, q_) {
            images.insert(self.model.differential(&b)?);
        }
        Ok(images.dim())
    }

    /// Whether `∂∂ = 0` on every basis element.
    pub fn check_d_squared(&self) -> Result<Option<E2Mono>, ExplicitError> {
        for b in self.cells.values().flatten() {
            let once = self.model.differential(&SparseVec::unit(b.clone()))?;
            if !self.model.differential(&once)?.is_zero() {
                return Ok(Some(b.clone()));
            }
        }
        Ok(None)
    }

    /// Dimensions of `E_3 = H(E_2, ∂)`, by cell.
    pub fn e3_dims(&self) -> Result<BTreeMap<(usize, usize), usize>, ExplicitError> {
        let mut ranks = BTreeMap::new();
        for &(p, q_) in self.cells.keys() {
            ranks.insert((p, q_), self.differential_rank(p, q_)?);
        }
        let mut out = BTreeMap::new();
        for (&(p, q_), basis) in &self.cells {
            let incoming = self.source(p, q_).and_then(|s| ranks.get(&s)).copied().unwrap_or(0);
            let dim = basis.len() - ranks[&(p, q_)] - incoming;
            if dim > 0 {
                out.insert((p, q_), dim);
            }
        }
        Ok(out)
    }

    /// Total-degree dimensions of `E_3`, which are the Betti numbers of
    /// `C_n(M)` when the spectral sequence degenerates after `∂`.
    pub fn e3_betti(&self) -> Result<Vec<usize>, ExplicitError> {
        let dims = self.e3_dims()?;
        let top = self.cells.keys().map(|&(p, q_)| self.total_degree(p, q_)).max().unwrap_or(0);
        let mut b = vec![0; top + 1];
        for ((p, q_), d) in dims {
            b[self.total_degree(p, q_)] += d;
        }
        while b.len() > 1 && *b.last().unwrap() == 0 {
            b.pop();
        }
        Ok(b)
    }

    /// Character of a cell from traces of the explicit action.
    pub fn cell_character(&self, p: usize, q_: usize) -> ClassFunction {
        let n = self.n();
        let basis = self.cell(p, q_);
        let values = class_representatives(n)
            .into_iter()
            .map(|(_, g)| {
                let mut t = Q::zero();
                for b in basis {
                    t += self.model.act_mono(b, &g).coeff(b);
                }
                t
            })
            .collect();
        ClassFunction::from_values(n, values)
    }

    fn kernel_space(&self, p: usize, q_: usize) -> Result<Subspace<E2Mono>, ExplicitError> {
        let units = self.units(p, q_);
        if self.target(p, q_).is_none() {
            return Ok(Subspace::spanned_by(units));
        }
        // Evaluate once so the error surfaces before the kernel is taken.
        self.model.differential(&SparseVec::new())?;
        Ok(Subspace::spanned_by(kernel(&units, |v| self.model.differential(v).expect("diagonal present"))))
    }

    fn space_character(&self, space: &Subspace<E2Mono>) -> ClassFunction {
        let n = self.n();
        let values = class_representatives(n)
            .into_iter()
            .map(|(_, g)| trace_on(space, |v| self.model.act(v, &g)))
            .collect();
        ClassFunction::from_values(n, values)
    }

    /// Characters of the cells of `E_3`.
    pub fn e3_characters(&self) -> Result<BTreeMap<(usize, usize), ClassFunction>, ExplicitError> {
        let mut kernels = BTreeMap::new();
        for &(p, q_) in self.cells.keys() {
            let k = self.kernel_space(p, q_)?;
            kernels.insert((p, q_), self.space_character(&k));
        }
        let mut out = BTreeMap::new();
        for &(p, q_) in self.cells.keys() {
            let mut chi = kernels[&(p, q_)].clone();
            if let Some(src) = self.source(p, q_) {
                if let Some(kc) = kernels.get(&src) {
                    let image = self.cell_character(src.0, src.1).sub(kc).expect("same degree");
                    chi = chi.sub(&image).expect("same degree");
                }
            }
            if !chi.is_zero() {
                out.insert((p, q_), chi);
            }
        }
        Ok(out)
    }

    /// Characters of `E_3` summed by total degree.
    pub fn cohomology_characters(&self) -> Result<BTreeMap<usize, ClassFunction>, ExplicitError> {
        let mut out: BTreeMap<usize, ClassFunction> = BTreeMap::new();
        for ((p, q_), chi) in self.e3_characters()? {
            let deg = self.total_degree(p, q_);
            let entry = out.entry(deg).or_insert_with(|| ClassFunction::zero(self.n()));
            *entry = entry.add(&chi).expect("same degree");
        }
        Ok(out)
    }
}
