//! Consistent sequences of `S_n`-representations and checkers for uniform
//! representation stability and monotonicity on a finite window.
//!
//! A level of a sequence is a quotient `V_n / W_n` of explicit subspaces
//! (with `W_n = 0` for plain representations). The maps `φ_n` act on keys
//! and must send `W_n` into `W_{n+1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{decompose, CharacterError, MultiplicityVector};
use crate::equivariant::{isotypic_component, orbit_span, project_isotypic, quotient_character, PermBasis};
use crate::linalg::{kernel, q, SparseVec, Subspace, Q};
use crate::partitions::{partitions_of, Partition};
use crate::perm::Perm;
use crate::specht::{specht_module, SpechtError};
use crate::tabloids::{all_pseudo_tabloids, Tabloid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("window [{lo}, {hi}] is too short to check from n = {start}")]
    InsufficientWindow { lo: usize, hi: usize, start: usize },
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Specht(#[from] SpechtError),
}

pub type SeqMap<K> = Arc<dyn Fn(usize, &SparseVec<K>) -> SparseVec<K> + Send + Sync>;

/// `V_n / W_n` as a pair of explicit subspaces.
#[derive(Clone)]
pub struct Level<K: PermBasis> {
    pub n: usize,
    pub space: Subspace<K>,
    pub modulo: Subspace<K>,
}

impl<K: PermBasis> Level<K> {
    pub fn new(n: usize, space: Subspace<K>) -> Self {
        Level {
            n,
            space,
            modulo: Subspace::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim() - self.modulo.dim()
    }

    pub fn multiplicities(&self) -> Result<MultiplicityVector, StabilityError> {
        Ok(decompose(&quotient_character(&self.space, &self.modulo, self.n))?)
    }
}

/// A consistent sequence on the window `[n_min, n_max]`.
#[derive(Clone)]
pub struct ConsistentSequence<K: PermBasis> {
    pub name: String,
    levels: Vec<Level<K>>,
    map: SeqMap<K>,
}

impl<K: PermBasis + Send + Sync + 'static> ConsistentSequence<K> {
    /// Levels must be consecutive in `n`.
    pub fn new(name: impl Into<String>, levels: Vec<Level<K>>, map: SeqMap<K>) -> Self {
        assert!(!levels.is_empty());
        assert!(levels.windows(2).all(|w| w[1].n == w[0].n + 1), "levels must be consecutive");
        ConsistentSequence {
            name: name.into(),
            levels,
            map,
        }
    }

    /// A sequence whose maps keep every key (the natural inclusions).
    pub fn with_inclusions(name: impl Into<String>, levels: Vec<Level<K>>) -> Self {
        Self::new(name, levels, Arc::new(|_, v: &SparseVec<K>| v.clone()))
    }

    pub fn n_min(&self) -> usize {
        self.levels[0].n
    }

    pub fn n_max(&self) -> usize {
        self.levels.last().unwrap().n
    }

    pub fn level(&self, n: usize) -> &Level<K> {
        &self.levels[n - self.n_min()]
    }

    pub fn levels(&self) -> &[Level<K>] {
        &self.levels
    }

    pub fn apply_map(&self, n: usize, v: &SparseVec<K>) -> SparseVec<K> {
        (self.map)(n, v)
    }

    /// The same spaces with every `φ_n = 0`.
    pub fn with_zero_maps(&self) -> Self {
        ConsistentSequence {
            name: format!("{} (zero maps)", self.name),
            levels: self.levels.clone(),
            map: Arc::new(|_, _: &SparseVec<K>| SparseVec::new()),
        }
    }

    /// `{V_n / W_n}` for a subsequence `sub` with `W_n ⊆ V_n`.
    pub fn quotient(&self, sub: &ConsistentSequence<K>) -> Self {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let w = sub.level(l.n);
                let modulo = l.modulo.sum(&w.space);
                Level {
                    n: l.n,
                    space: l.space.clone(),
                    modulo,
                }
            })
            .collect();
        ConsistentSequence {
            name: format!("{} / {}", self.name, sub.name),
            levels,
            map: self.map.clone(),
        }
    }

    /// The subsequence `n ↦ S_n`-span of `φ`-images of `seed`, seeded at `n_min`.
    pub fn orbit_subsequence(&self, name: impl Into<String>, seed: SparseVec<K>) -> Self {
        let mut levels: Vec<Level<K>> = Vec::new();
        let mut seeds = vec![seed];
        for l in &self.levels {
            let span = orbit_span(Subspace::new(), seeds.iter().cloned(), &Perm::generators(l.n));
            seeds = span.basis().iter().map(|v| self.apply_map(l.n, v)).collect();
            levels.push(Level::new(l.n, span));
        }
        ConsistentSequence {
            name: name.into(),
            levels,
            map: self.map.clone(),
        }
    }

    /// Whether `W_n ⊆ V_n` and `φ_n(W_n) ⊆ W_{n+1}` for `sub`.
    pub fn is_subsequence(&self, sub: &ConsistentSequence<K>) -> bool {
        self.levels.iter().all(|l| sub.level(l.n).space.is_subspace_of(&l.space))
            && sub.levels.windows(2).all(|w| w[0].space.basis().iter().all(|v| w[1].space.contains(&sub.apply_map(w[0].n, v))))
    }

    pub fn multiplicities(&self) -> Result<Vec<MultiplicityVector>, StabilityError> {
        self.levels.iter().map(Level::multiplicities).collect()
    }
}

/// Direct sum of two sequences on the same window.
pub fn direct_sum<K>(a: &ConsistentSequence<K>, b: &ConsistentSequence<K>) -> ConsistentSequence<(u8, K)>
where
    K: PermBasis + Send + Sync + 'static,
{
    assert_eq!((a.n_min(), a.n_max()), (b.n_min(), b.n_max()));
    let tag = |t: u8, v: &SparseVec<K>| v.map_keys(|k| Some(((t, k.clone()), false)));
    let levels = a
        .levels
        .iter()
        .zip(&b.levels)
        .map(|(x, y)| {
            let space = Subspace::spanned_by(x.space.basis().iter().map(|v| tag(0, v)).chain(y.space.basis().iter().map(|v| tag(1, v))));
            let modulo = Subspace::spanned_by(x.modulo.basis().iter().map(|v| tag(0, v)).chain(y.modulo.basis().iter().map(|v| tag(1, v))));
            Level { n: x.n, space, modulo }
        })
        .collect();
    let (ma, mb) = (a.map.clone(), b.map.clone());
    let map: SeqMap<(u8, K)> = Arc::new(move |n, v: &SparseVec<(u8, K)>| {
        let part = |t: u8| -> SparseVec<K> { v.map_keys(|(s, k)| (*s == t).then(|| (k.clone(), false))) };
        let mut out = tag(0, &ma(n, &part(0)));
        out.add_scaled(&Q::one(), &tag(1, &mb(n, &part(1))));
        out
    });
    ConsistentSequence::new(format!("{} + {}", a.name, b.name), levels, map)
}

/// `{ker f_n}` and `{im f_n}` for an equivariant map commuting with the
/// sequence maps.
pub fn kernel_and_image<K, L>(
    source: &ConsistentSequence<K>,
    target: &ConsistentSequence<L>,
    f: impl Fn(&SparseVec<K>) -> SparseVec<L>,
) -> (ConsistentSequence<K>, ConsistentSequence<L>)
where
    K: PermBasis + Send + Sync + 'static,
    L: PermBasis + Send + Sync + 'static,
{
    let mut kers = Vec::new();
    let mut ims = Vec::new();
    for l in &source.levels {
        let ker = kernel(l.space.basis(), &f);
        kers.push(Level::new(l.n, Subspace::spanned_by(ker)));
        ims.push(Level::new(l.n, Subspace::spanned_by(l.space.basis().iter().map(&f))));
    }
    (
        ConsistentSequence::new(format!("ker({})", source.name), kers, source.map.clone()),
        ConsistentSequence::new(format!("im({})", source.name), ims, target.map.clone()),
    )
}

/// `{I_n(V_λ)}` with the inclusions `ι_n`.
pub fn induced_sequence(lambda: &Partition, n_min: usize, n_max: usize) -> Result<ConsistentSequence<Tabloid>, StabilityError> {
    let levels = (n_min..=n_max)
        .map(|n| Ok(Level::new(n, specht_module(lambda, n)?)))
        .collect::<Result<Vec<_>, StabilityError>>()?;
    Ok(ConsistentSequence::with_inclusions(format!("I(V_{lambda})"), levels))
}

/// `{I_n(M^λ)}` with the inclusions `ι_n`.
pub fn tabloid_sequence(lambda: &Partition, n_min: usize, n_max: usize) -> ConsistentSequence<Tabloid> {
    let levels = (n_min..=n_max)
        .map(|n| Level::new(n, Subspace::spanned_by(all_pseudo_tabloids(lambda, n).into_iter().map(SparseVec::unit))))
        .collect();
    ConsistentSequence::with_inclusions(format!("I(M^{lambda})"), levels)
}

/// A verdict for one condition on the window.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ConditionResult {
    /// Smallest `n` from which the condition holds up to the top of the window.
    pub holds_from: Option<usize>,
    /// First failure at or above the requested start.
    pub failure: Option<Witness>,
}

impl ConditionResult {
    fn from_checks(checks: &[(usize, Option<String>)], start: usize) -> Self {
        let mut holds_from = checks.last().map(|(n, _)| n + 1);
        for (n, fail) in checks.iter().rev() {
            if fail.is_some() {
                break;
            }
            holds_from = Some(*n);
        }
        if checks.last().is_some_and(|(_, f)| f.is_some()) {
            holds_from = None;
        }
        let failure = checks
            .iter()
            .find(|(n, f)| *n >= start && f.is_some())
            .map(|(n, f)| Witness {
                n: *n,
                detail: f.clone().unwrap(),
            });
        ConditionResult { holds_from, failure }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub n: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub sequence: String,
    pub window: (usize, usize),
    pub start: usize,
    pub injectivity: ConditionResult,
    pub surjectivity: ConditionResult,
    pub multiplicity: ConditionResult,
    /// Multiplicities `c_λ` at the top of the window, keyed by `λ` with `V(λ)_n`.
    pub stable_multiplicities: Vec<(String, u64)>,
    pub dimensions: Vec<(usize, usize)>,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.injectivity.passed() && self.surjectivity.passed() && self.multiplicity.passed()
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &ConditionResult| match (&c.holds_from, &c.failure) {
            (_, Some(w)) => format!("fails at n={}: {}", w.n, w.detail),
            (Some(n), None) => format!("from n={n}"),
            (None, None) => "unchecked".to_string(),
        };
        writeln!(f, "sequence\t{}", self.sequence)?;
        writeln!(f, "window\t{}..{}", self.window.0, self.window.1)?;
        writeln!(f, "injectivity\t{}", show(&self.injectivity))?;
        writeln!(f, "surjectivity\t{}", show(&self.surjectivity))?;
        writeln!(f, "multiplicities\t{}", show(&self.multiplicity))?;
        for (lambda, c) in &self.stable_multiplicities {
            writeln!(f, "c[{lambda}]\t{c}")?;
        }
        Ok(())
    }
}

/// `c_λ` keyed by `λ` with `V(λ)_n = V_μ`.
fn stable_form(m: &MultiplicityVector) -> BTreeMap<Partition, u64> {
    m.stable_form()
}

/// Multiplicity stability alone, for the character-level backend.
pub fn multiplicity_stable_from(mults: &[MultiplicityVector], start: usize) -> ConditionResult {
    let checks: Vec<(usize, Option<String>)> = mults
        .windows(2)
        .map(|w| {
            let (a, b) = (stable_form(&w[0]), stable_form(&w[1]));
            let n = w[0].degree();
            let detail = (a != b).then(|| {
                let diff: Vec<String> = a
                    .keys()
                    .chain(b.keys())
                    .unique()
                    .filter(|k| a.get(k) != b.get(k))
                    .map(|k| format!("c[{k}]: {} -> {}", a.get(k).unwrap_or(&0), b.get(k).unwrap_or(&0)))
                    .collect();
                diff.join(", ")
            });
            (n, detail)
        })
        .collect();
    ConditionResult::from_checks(&checks, start)
}

/// Conditions I–III of uniform representation stability on `[start, n_max]`.
pub fn check_uniform_stability<K>(seq: &ConsistentSequence<K>, start: usize) -> Result<StabilityReport, StabilityError>
where
    K: PermBasis + Send + Sync + 'static,
{
    let (lo, hi) = (seq.n_min(), seq.n_max());
    if hi < start + 1 || start < lo {
        return Err(StabilityError::InsufficientWindow { lo, hi, start });
    }
    let mut inj = Vec::new();
    let mut surj = Vec::new();
    for n in lo..hi {
        let (cur, next) = (seq.level(n), seq.level(n + 1));
        let images: Vec<SparseVec<K>> = cur.space.basis().iter().map(|v| seq.apply_map(n, v)).collect();
        let mut img = next.modulo.clone();
        img.extend(images.iter().cloned());
        let rank = img.dim() - next.modulo.dim();
        inj.push((n, (rank != cur.dim()).then(|| format!("rank of phi is {rank}, dim V_n/W_n is {}", cur.dim()))));
        let span = orbit_span(next.modulo.clone(), images, &Perm::generators(n + 1));
        let sd = span.dim() - next.modulo.dim();
        surj.push((n, (sd != next.dim()).then(|| format!("S_{}-span has dim {sd}, V_{} has dim {}", n + 1, n + 1, next.dim()))));
    }
    let mults = seq.multiplicities()?;
    Ok(StabilityReport {
        sequence: seq.name.clone(),
        window: (lo, hi),
        start,
        injectivity: ConditionResult::from_checks(&inj, start),
        surjectivity: ConditionResult::from_checks(&surj, start),
        multiplicity: multiplicity_stable_from(&mults, start),
        stable_multiplicities: mults.last().unwrap().iter().map(|(p, c)| (p.unpad().to_string(), c)).collect(),
        dimensions: seq.levels.iter().map(|l| (l.n, l.dim())).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneFailure {
    pub n: usize,
    pub lambda: String,
    pub required: u64,
    pub achieved: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneReport {
    pub sequence: String,
    pub window: (usize, usize),
    pub start: usize,
    pub result: ConditionResult,
    pub failures: Vec<MonotoneFailure>,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.result.passed()
    }
}

/// Monotonicity (Def. 1.2) on `[start, n_max - 1]`, optionally for one stable
/// label `λ` only. For each `V_μ` of multiplicity `k` in `V_n`, the full
/// isotypic component is pushed forward and its `S_{n+1}`-span must contain
/// `V_{μ{n+1}}` at least `k` times.
pub fn check_monotone_for<K>(seq: &ConsistentSequence<K>, start: usize, only: Option<&Partition>) -> Result<MonotoneReport, StabilityError>
where
    K: PermBasis + Send + Sync + 'static,
{
    let (lo, hi) = (seq.n_min(), seq.n_max());
    if hi < start + 1 || start < lo {
        return Err(StabilityError::InsufficientWindow { lo, hi, start });
    }
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for n in lo..hi {
        let (cur, next) = (seq.level(n), seq.level(n + 1));
        let mults = cur.multiplicities()?;
        let gens = Perm::generators(n + 1);
        let mut problem: Option<String> = None;
        for (mu, k) in mults.iter() {
            if only.is_some_and(|l| &mu.unpad() != l) {
                continue;
            }
            let iso = isotypic_component(&cur.space, &cur.modulo, mu, k)?;
            let images: Vec<SparseVec<K>> = iso.basis().iter().map(|v| seq.apply_map(n, v)).collect();
            let span = orbit_span(next.modulo.clone(), images, &gens);
            let chi = quotient_character(&span, &next.modulo, n + 1);
            let target = mu.curly_pad().expect("nonempty");
            let achieved = decompose(&chi)?.get(&target);
            if achieved < k {
                failures.push(MonotoneFailure {
                    n,
                    lambda: mu.unpad().to_string(),
                    required: k,
                    achieved,
                });
                problem.get_or_insert_with(|| format!("V({}) has multiplicity {k} but its image spans only {achieved}", mu.unpad()));
            }
        }
        checks.push((n, problem));
    }
    Ok(MonotoneReport {
        sequence: seq.name.clone(),
        window: (lo, hi),
        start,
        result: ConditionResult::from_checks(&checks, start),
        failures,
    })
}

pub fn check_monotone<K>(seq: &ConsistentSequence<K>, start: usize) -> Result<MonotoneReport, StabilityError>
where
    K: PermBasis + Send + Sync + 'static,
{
    check_monotone_for(seq, start, None)
}

/// Multiplicities of a quotient read off isotypic dimensions:
/// `c_μ(V/W) = (dim(P_μ V + W) - dim W) / dim V_μ`.
pub fn quotient_multiplicities_by_projection<K: PermBasis>(level: &Level<K>) -> Result<MultiplicityVector, StabilityError> {
    let n = level.n;
    let mut counts = Vec::new();
    for mu in partitions_of(n) {
        let mut u = level.modulo.clone();
        for b in level.space.basis() {
            u.insert(project_isotypic(b, &mu)?);
        }
        let extra = u.dim() - level.modulo.dim();
        let f = mu.dim_irrep() as usize;
        assert_eq!(extra % f, 0, "isotypic dimension not divisible by dim V_mu");
        counts.push((mu, (extra / f) as u64));
    }
    Ok(MultiplicityVector::from_counts(n, counts))
}

// ---------------------------------------------------------------------------
// Range arithmetic

/// Bound `n ≥ m (p + q + offset)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineBound {
    #[serde(serialize_with = "ser_q")]
    pub m: Q,
    pub offset: i64,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl AffineBound {
    fn shifted(&self, by: i64) -> Self {
        AffineBound {
            m: self.m.clone(),
            offset: self.offset + by,
        }
    }

    fn max(a: &Self, b: &Self) -> Self {
        assert_eq!(a.m, b.m);
        if a.offset >= b.offset {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// The bound at a given `p + q`.
    pub fn at(&self, s: i64) -> Q {
        &self.m * q(s + self.offset)
    }
}

impl fmt::Display for AffineBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = match self.offset.cmp(&0) {
            std::cmp::Ordering::Equal => "p+q".to_string(),
            std::cmp::Ordering::Greater => format!("p+q+{}", self.offset),
            std::cmp::Ordering::Less => format!("p+q-{}", -self.offset),
        };
        if self.m.is_one() {
            write!(f, "n >= {inner}")
        } else {
            write!(f, "n >= {}({inner})", self.m)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeParams {
    #[serde(serialize_with = "ser_q")]
    pub m: Q,
    pub ell: i64,
}

impl RangeParams {
    pub fn new(m: Q, ell: i64) -> Result<Self, String> {
        if !m.is_positive() {
            return Err(format!("m must be positive, got {m}"));
        }
        Ok(RangeParams { m, ell })
    }

    /// Parses `p` or `p/q`.
    pub fn parse_m(text: &str) -> Result<Q, String> {
        let text = text.trim();
        let parsed = match text.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| format!("bad rational {text:?}"))?;
                let b: BigInt = b.trim().parse().map_err(|_| format!("bad rational {text:?}"))?;
                if b.is_zero() {
                    return Err(format!("zero denominator in {text:?}"));
                }
                Q::new(a, b)
            }
            None => Q::from_integer(text.parse().map_err(|_| format!("bad rational {text:?}"))?),
        };
        Ok(parsed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeRow {
    pub page: usize,
    pub stable: AffineBound,
    pub monotone: AffineBound,
    pub kernel: AffineBound,
    pub image: AffineBound,
}

/// Bounds for `E_r^{p,q}` on pages `2..=pages`, propagated through kernels,
/// images and quotients.
pub fn propagate_ranges(params: &RangeParams, pages: usize) -> Vec<RangeRow> {
    let m = params.m.clone();
    let mut stable = AffineBound { m: m.clone(), offset: params.ell };
    let mut monotone = AffineBound { m, offset: params.ell - 1 };
    let mut rows = Vec::new();
    for page in 2..=pages.max(2) {
        // Source of the incoming differential sits at p + q - 1; the target of
        // the outgoing one at p + q + 1.
        let src_stable = stable.shifted(-1);
        let src_monotone = monotone.shifted(-1);
        let tgt_monotone = monotone.shifted(1);
        let image = AffineBound::max(&AffineBound::max(&src_stable, &src_monotone), &monotone);
        let kernel = AffineBound::max(&AffineBound::max(&stable, &monotone), &tgt_monotone);
        let kernel_monotone = monotone.clone();
        rows.push(RangeRow {
            page,
            stable: stable.clone(),
            monotone: monotone.clone(),
            kernel: kernel.clone(),
            image: image.clone(),
        });
        let next_monotone = AffineBound::max(&kernel_monotone, &image);
        let next_stable = AffineBound::max(&kernel, &image);
        stable = next_stable;
        monotone = next_monotone;
    }
    rows
}

// ---------------------------------------------------------------------------
// Property suite

#[derive(Debug, Clone, Serialize)]
pub struct PropertyCase {
    pub proposition: String,
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub cases: Vec<PropertyCase>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> Vec<&PropertyCase> {
        self.cases.iter().filter(|c| !c.passed).collect()
    }
}

fn random_vector(rng: &mut ChaCha8Rng, lambda: &Partition, n: usize) -> SparseVec<Tabloid> {
    let basis = all_pseudo_tabloids(lambda, n);
    let mut v = SparseVec::new();
    while v.is_zero() {
        for t in &basis {
            if rng.gen_bool(0.5) {
                v.add_term(t.clone(), q(rng.gen_range(-2..=2)));
            }
        }
    }
    v
}

fn small_shapes() -> Vec<Partition> {
    ["0", "1", "2", "1,1"].iter().map(|s| s.parse().unwrap()).collect()
}

fn first_from(r: &ConditionResult) -> usize {
    r.holds_from.unwrap_or(usize::MAX)
}

/// Instantiates the six consistent-sequence properties (additivity, the
/// stability criterion, subrepresentations, direct sums, kernels and images,
/// multiplicity stability) on `count` randomly seeded sequences built from
/// induced modules.
pub fn property_suite(seed: u64, count: usize) -> Result<PropertyReport, StabilityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = small_shapes();
    let mut cases = Vec::new();
    for i in 0..count {
        let lambda = shapes[rng.gen_range(0..shapes.len())].clone();
        let k = lambda.size();
        let lo = k.max(1);
        let hi = (lo + 3).min(6);
        let case = match i % 6 {
            0 => prop_additivity(&mut rng, &lambda, lo, hi)?,
            1 => prop_stability_criterion(&mut rng, &lambda, lo, hi)?,
            2 => prop_subrepresentations(&mut rng, &lambda, lo, hi)?,
            3 => prop_direct_sum(&mut rng, &shapes, lo.max(2), hi.max(5))?,
            4 => prop_kernel_image(&mut rng)?,
            _ => prop_multiplicity(&mut rng, &lambda, lo, hi)?,
        };
        cases.push(case);
    }
    Ok(PropertyReport { seed, cases })
}

fn prop_additivity(rng: &mut ChaCha8Rng, lambda: &Partition, lo: usize, hi: usize) -> Result<PropertyCase, StabilityError> {
    let v = tabloid_sequence(lambda, lo, hi);
    let seed = random_vector(rng, lambda, lo);
    let w = v.orbit_subsequence("S.v", seed.clone());
    let quot = v.quotient(&w);
    let mut ok = v.is_subsequence(&w);
    let mut detail = Vec::new();
    for n in lo..=hi {
        let cv = v.level(n).multiplicities()?;
        let cw = w.level(n).multiplicities()?;
        let by_projection = quotient_multiplicities_by_projection(quot.level(n))?;
        let by_traces = quot.level(n).multiplicities()?;
        if cv != cw.add(&by_projection) || by_projection != by_traces {
            ok = false;
            detail.push(format!("n={n}: c(V)={cv:?} c(W)={cw:?} c(V/W)={by_projection:?}"));
        }
    }
    let sv = first_from(&multiplicity_stable_from(&v.multiplicities()?, lo));
    let sw = first_from(&multiplicity_stable_from(&w.multiplicities()?, lo));
    let sq = first_from(&multiplicity_stable_from(&quot.multiplicities()?, lo));
    if sq > sv.max(sw) {
        ok = false;
        detail.push(format!("V stable from {sv}, W from {sw}, but V/W only from {sq}"));
    }
    if sv > sw.max(sq) {
        ok = false;
        detail.push(format!("W stable from {sw}, V/W from {sq}, but V only from {sv}"));
    }
    Ok(PropertyCase {
        proposition: "additivity".into(),
        description: format!("I(M^{lambda}) with W = S.v, v = {}", render_vec(&seed)),
        passed: ok,
        detail: detail.join("; "),
    })
}

fn prop_stability_criterion(rng: &mut ChaCha8Rng, lambda: &Partition, lo: usize, hi: usize) -> Result<PropertyCase, StabilityError> {
    let seq = match rng.gen_range(0..3) {
        0 => induced_sequence(lambda, lo, hi)?,
        1 => tabloid_sequence(lambda, lo, hi),
        _ => {
            let seed = random_vector(rng, lambda, lo);
            tabloid_sequence(lambda, lo, hi).orbit_subsequence(format!("S.{}", render_vec(&seed)), seed)
        }
    };
    let mono = check_monotone(&seq, lo)?;
    let mult = multiplicity_stable_from(&seq.multiplicities()?, lo);
    let n0 = first_from(&mono.result).max(first_from(&mult));
    let (ok, detail) = if n0 < hi {
        let report = check_uniform_stability(&seq, n0)?;
        (report.passed(), format!("monotone and multiplicity stable from {n0}; uniform stability {}", if report.passed() { "holds" } else { "fails" }))
    } else {
        (true, "hypothesis not met on window".into())
    };
    Ok(PropertyCase {
        proposition: "stability-criterion".into(),
        description: seq.name.clone(),
        passed: ok,
        detail,
    })
}

fn prop_subrepresentations(rng: &mut ChaCha8Rng, lambda: &Partition, lo: usize, hi: usize) -> Result<PropertyCase, StabilityError> {
    let v = tabloid_sequence(lambda, lo, hi);
    let seed = random_vector(rng, lambda, lo);
    let w = v.orbit_subsequence("S.v", seed.clone());
    let v_mono = check_monotone(&v, lo)?;
    let w_mono = check_monotone(&w, lo)?;
    let mut ok = v_mono.passed() && w_mono.passed();
    let mut detail = format!("V monotone: {}, W monotone: {}", v_mono.passed(), w_mono.passed());
    let n0 = first_from(&multiplicity_stable_from(&w.multiplicities()?, lo));
    if n0 < hi {
        let q_mono = check_monotone(&v.quotient(&w), n0)?;
        ok &= q_mono.passed();
        detail.push_str(&format!(", W stable from {n0}, V/W monotone from there: {}", q_mono.passed()));
    }
    Ok(PropertyCase {
        proposition: "subrepresentations".into(),
        description: format!("I(M^{lambda}) with W = S.v, v = {}", render_vec(&seed)),
        passed: ok,
        detail,
    })
}

fn prop_direct_sum(rng: &mut ChaCha8Rng, shapes: &[Partition], lo: usize, hi: usize) -> Result<PropertyCase, StabilityError> {
    let a = shapes[rng.gen_range(0..shapes.len())].clone();
    let b = shapes[rng.gen_range(0..shapes.len())].clone();
    let lo = lo.max(a.size()).max(b.size());
    let hi = hi.min(6).max(lo + 1);
    let sa = induced_sequence(&a, lo, hi)?;
    let sb = induced_sequence(&b, lo, hi)?;
    let sum = direct_sum(&sa, &sb);
    let ra = check_monotone(&sa, lo)?;
    let rb = check_monotone(&sb, lo)?;
    let rs = check_monotone(&sum, lo)?;
    let ok = !(ra.passed() && rb.passed()) || rs.passed();
    Ok(PropertyCase {
        proposition: "direct-sum".into(),
        description: sum.name.clone(),
        passed: ok,
        detail: format!("summands monotone: {} {}, sum monotone: {}", ra.passed(), rb.passed(), rs.passed()),
    })
}

/// `{a;b} ↦ {a,b}`.
fn symmetrize(v: &SparseVec<Tabloid>) -> SparseVec<Tabloid> {
    v.map_keys(|t| Some((Tabloid::from_rows(vec![t.rows().concat()]), false)))
}

/// `{a;b} ↦ {a} - {b}`.
fn difference(v: &SparseVec<Tabloid>) -> SparseVec<Tabloid> {
    let mut out = SparseVec::new();
    for (t, c) in v.iter() {
        out.add_term(Tabloid::from_rows(vec![t.rows()[0].clone()]), c.clone());
        out.add_term(Tabloid::from_rows(vec![t.rows()[1].clone()]), -c.clone());
    }
    out
}

/// `{a,b} ↦ {a} + {b}`.
fn split(v: &SparseVec<Tabloid>) -> SparseVec<Tabloid> {
    let mut out = SparseVec::new();
    for (t, c) in v.iter() {
        for &x in &t.rows()[0] {
            out.add_term(Tabloid::from_rows(vec![vec![x]]), c.clone());
        }
    }
    out
}

fn prop_kernel_image(rng: &mut ChaCha8Rng) -> Result<PropertyCase, StabilityError> {
    let (lo, hi) = (2, 6);
    let choice = rng.gen_range(0..3);
    let (src_shape, tgt_shape, name, f): (&str, &str, &str, fn(&SparseVec<Tabloid>) -> SparseVec<Tabloid>) = match choice {
        0 => ("1,1", "2", "row symmetrization", symmetrize),
        1 => ("1,1", "1", "difference", difference),
        _ => ("2", "1", "split", split),
    };
    let source = tabloid_sequence(&src_shape.parse().unwrap(), lo, hi);
    let target = tabloid_sequence(&tgt_shape.parse().unwrap(), lo, hi);
    let (ker, im) = kernel_and_image(&source, &target, f);
    let n0 = [
        first_from(&multiplicity_stable_from(&source.multiplicities()?, lo)),
        first_from(&check_monotone(&source, lo)?.result),
        first_from(&check_monotone(&target, lo)?.result),
    ]
    .into_iter()
    .max()
    .unwrap();
    let mut ok = source.is_subsequence(&ker) && target.is_subsequence(&im);
    let mut detail = format!("hypotheses from n={n0}");
    if n0 < hi {
        for (label, seq) in [("ker", &ker), ("im", &im)] {
            let mono = check_monotone(seq, n0)?;
            let mult = multiplicity_stable_from(&seq.multiplicities()?, n0);
            ok &= mono.passed() && mult.passed();
            detail.push_str(&format!("; {label}: monotone {}, stable {}", mono.passed(), mult.passed()));
        }
    }
    Ok(PropertyCase {
        proposition: "kernel-image".into(),
        description: format!("{name}: I(M^{src_shape}) -> I(M^{tgt_shape})"),
        passed: ok,
        detail,
    })
}

fn prop_multiplicity(rng: &mut ChaCha8Rng, lambda: &Partition, lo: usize, hi: usize) -> Result<PropertyCase, StabilityError> {
    let v = tabloid_sequence(lambda, lo, hi);
    let seed = random_vector(rng, lambda, lo);
    let w = v.orbit_subsequence("S.v", seed.clone());
    let trivial = Partition::empty();
    let mults = w.multiplicities()?;
    let counts: Vec<u64> = mults.iter().map(|m| m.padded(&trivial)).collect();
    let n0 = lo + counts.windows(2).rposition(|c| c[0] != c[1]).map_or(0, |i| i + 1);
    let whole = check_monotone_for(&v, lo, Some(&trivial))?;
    let mut ok = whole.passed();
    let mut detail = format!("trivial part of V monotone: {}", whole.passed());
    if n0 < hi {
        let quot = check_monotone_for(&v.quotient(&w), n0, Some(&trivial))?;
        ok &= quot.passed();
        detail.push_str(&format!(", c_0(W) stable from {n0}, trivial part of V/W monotone: {}", quot.passed()));
    }
    Ok(PropertyCase {
        proposition: "multiplicity".into(),
        description: format!("I(M^{lambda}) with W = S.v, v = {}", render_vec(&seed)),
        passed: ok,
        detail,
    })
}

fn render_vec(v: &SparseVec<Tabloid>) -> String {
    v.iter().map(|(t, c)| format!("{c}{{{t}}}")).join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_sequence_is_stable() {
        let seq = induced_sequence(&Partition::empty(), 0, 4).unwrap();
        let r = check_uniform_stability(&seq, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.injectivity.holds_from, Some(0));
        assert_eq!(r.multiplicity.holds_from, Some(0));
        assert_eq!(r.stable_multiplicities, vec![("0".to_string(), 1)]);
    }

    #[test]
    fn permutation_sequence() {
        let seq = induced_sequence(&p("1"), 1, 6).unwrap();
        let r = check_uniform_stability(&seq, 2).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.multiplicity.holds_from, Some(2));
        assert_eq!(r.stable_multiplicities, vec![("0".to_string(), 1), ("1".to_string(), 1)]);
        // At n = 1 only the trivial summand is present.
        assert!(check_uniform_stability(&seq, 1).unwrap().multiplicity.failure.is_some());
    }

    #[test]
    fn induced_sequences_stable_from_2k() {
        for lambda in [p("1"), p("2"), p("1,1")] {
            let k = lambda.size();
            let seq = induced_sequence(&lambda, k, 6).unwrap();
            let r = check_uniform_stability(&seq, 2 * k).unwrap();
            assert!(r.passed(), "{lambda:?}: {r}");
            assert!(r.multiplicity.holds_from.unwrap() <= 2 * k);
            assert_eq!(r.injectivity.holds_from, Some(k));
            assert_eq!(r.surjectivity.holds_from, Some(k));
        }
        let r = check_uniform_stability(&induced_sequence(&p("2"), 2, 6).unwrap(), 4).unwrap();
        assert_eq!(r.multiplicity.holds_from, Some(4));
    }

    #[test]
    fn insufficient_window() {
        let seq = induced_sequence(&p("1"), 1, 3).unwrap();
        assert!(matches!(check_uniform_stability(&seq, 3), Err(StabilityError::InsufficientWindow { .. })));
    }

    #[test]
    fn monotone_examples() {
        let seq = induced_sequence(&p("2"), 2, 5).unwrap();
        assert!(check_monotone(&seq, 2).unwrap().passed());
        let broken = seq.with_zero_maps();
        let r = check_monotone(&broken, 2).unwrap();
        assert_eq!(r.result.failure.as_ref().unwrap().n, 2);
        let zero = ConsistentSequence::with_inclusions("zero", (1..=3).map(|n| Level::<Tabloid>::new(n, Subspace::new())).collect());
        assert!(check_monotone(&zero, 1).unwrap().passed());
    }

    #[test]
    fn direct_sum_is_monotone() {
        let a = induced_sequence(&p("1"), 2, 5).unwrap();
        let b = induced_sequence(&p("2"), 2, 5).unwrap();
        let s = direct_sum(&a, &b);
        assert!(check_monotone(&s, 2).unwrap().passed());
        let ma = a.multiplicities().unwrap();
        let mb = b.multiplicities().unwrap();
        for (i, m) in s.multiplicities().unwrap().iter().enumerate() {
            assert_eq!(*m, ma[i].add(&mb[i]));
        }
    }

    #[test]
    fn kernel_and_image_of_symmetrization() {
        let src = tabloid_sequence(&p("1,1"), 2, 6);
        let tgt = tabloid_sequence(&p("2"), 2, 6);
        let (ker, im) = kernel_and_image(&src, &tgt, symmetrize);
        for n in 2..=6 {
            assert_eq!(ker.level(n).dim() + im.level(n).dim(), src.level(n).dim());
        }
        assert!(check_monotone(&ker, 2).unwrap().passed());
        assert!(check_monotone(&im, 2).unwrap().passed());
        assert!(multiplicity_stable_from(&ker.multiplicities().unwrap(), 4).passed());
    }

    #[test]
    fn additivity_by_projection() {
        let v = tabloid_sequence(&p("1,1"), 3, 3);
        let w = induced_sequence(&p("1,1"), 3, 3).unwrap();
        let quot = v.quotient(&w);
        let by_proj = quotient_multiplicities_by_projection(quot.level(3)).unwrap();
        assert_eq!(by_proj, quot.level(3).multiplicities().unwrap());
        let total = v.level(3).multiplicities().unwrap();
        assert_eq!(total, w.level(3).multiplicities().unwrap().add(&by_proj));
    }

    #[test]
    fn range_strings() {
        let cases = [((2, 1), 0, "n >= 2(p+q)", "n >= 2(p+q-1)"), ((4, 1), 0, "n >= 4(p+q)", "n >= 4(p+q-1)"), ((1, 1), 1, "n >= p+q+1", "n >= p+q")];
        for ((num, den), ell, stable, monotone) in cases {
            let params = RangeParams::new(crate::linalg::q_frac(num, den), ell).unwrap();
            let rows = propagate_ranges(&params, 5);
            assert_eq!(rows.len(), 4);
            for row in &rows {
                assert_eq!(row.stable.to_string(), stable);
                assert_eq!(row.monotone.to_string(), monotone);
            }
        }
        let third = RangeParams::new(crate::linalg::q_frac(1, 3), 3).unwrap();
        assert_eq!(propagate_ranges(&third, 2)[0].stable.to_string(), "n >= 1/3(p+q+3)");
        assert!(RangeParams::new(q(0), 0).is_err());
        assert_eq!(RangeParams::parse_m("1/2").unwrap(), crate::linalg::q_frac(1, 2));
    }

    #[test]
    fn small_property_suite() {
        let r = property_suite(7, 24).unwrap();
        assert!(r.passed(), "{:?}", r.violations());
    }
}
