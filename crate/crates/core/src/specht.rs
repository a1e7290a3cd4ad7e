//! Specht modules, induced tabloid modules and the maps between them.
//!
//! `I_n(M^λ)` has basis the `n`-pseudo-tabloids of shape `λ`; `I_n(V_λ)` is
//! the span of the polytabloids `v_T` over all `n`-pseudo-tableaux `T`.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::characters::{decompose, induced_character, CharacterError, MultiplicityVector};
use crate::equivariant::{character_of, isotypic_component, orbit_span, PermBasis};
use crate::linalg::{q, SparseVec, Subspace, Q};
use crate::partitions::{factorial, Partition};
use crate::perm::Perm;
use crate::tabloids::{standard_tableaux_on, PseudoTableau, TableauError, Tabloid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpechtError {
    #[error("{lambda:?} does not lead to {mu:?}")]
    NotLeadsTo { lambda: Partition, mu: Partition },
    #[error("shape {mu:?} does not fill the ambient set 1..={n}")]
    NotATableau { mu: Partition, n: usize },
    #[error("n = {n} is below |λ| = {k}")]
    TooSmall { k: usize, n: usize },
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

impl PermBasis for Tabloid {
    fn act(&self, g: &Perm) -> (Self, bool) {
        (Tabloid::act(self, g), false)
    }
}

/// An element of `I_n(M^λ)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    n: usize,
    shape: Partition,
    coeffs: SparseVec<Tabloid>,
}

impl ModuleVector {
    pub fn zero(shape: Partition, n: usize) -> Self {
        ModuleVector {
            n,
            shape,
            coeffs: SparseVec::new(),
        }
    }

    pub fn from_coeffs(shape: Partition, n: usize, coeffs: SparseVec<Tabloid>) -> Self {
        debug_assert!(coeffs.keys().all(|t| t.shape() == shape));
        ModuleVector { n, shape, coeffs }
    }

    pub fn basis_vector(t: &Tabloid, n: usize) -> Self {
        ModuleVector {
            n,
            shape: t.shape(),
            coeffs: SparseVec::unit(t.clone()),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn coeffs(&self) -> &SparseVec<Tabloid> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> SparseVec<Tabloid> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn act(&self, g: &Perm) -> Self {
        assert_eq!(g.degree(), self.n);
        ModuleVector {
            n: self.n,
            shape: self.shape.clone(),
            coeffs: crate::equivariant::act_vec(&self.coeffs, g),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        ModuleVector {
            n: self.n,
            shape: self.shape.clone(),
            coeffs: self.coeffs.add(&other.coeffs),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        ModuleVector {
            n: self.n,
            shape: self.shape.clone(),
            coeffs: self.coeffs.sub(&other.coeffs),
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        ModuleVector {
            n: self.n,
            shape: self.shape.clone(),
            coeffs: self.coeffs.scaled(c),
        }
    }

    /// `c` with `self = c · other`, if any.
    pub fn ratio_to(&self, other: &Self) -> Option<Q> {
        self.check(other);
        self.coeffs.ratio_to(&other.coeffs)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "ambient sets differ");
        assert_eq!(self.shape, other.shape, "shapes differ");
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            if i > 0 {
                write!(f, " ")?;
            }
            if mag.is_one() {
                write!(f, "{sign}{{{t}}}")?;
            } else {
                write!(f, "{sign}{mag}{{{t}}}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in I_{}(M^{:?})", self.n, self.shape)
    }
}

/// `v_T = Σ_{q ∈ ColStab(T)} (-1)^q {qT}`.
pub fn polytabloid(t: &PseudoTableau) -> ModuleVector {
    let mut coeffs = SparseVec::new();
    for (g, sign) in t.column_stabilizer() {
        coeffs.add_term(t.act(&g).tabloid(), q(sign));
    }
    ModuleVector {
        n: t.ambient(),
        shape: t.shape(),
        coeffs,
    }
}

/// `I_n(V_λ)` as a subspace of `I_n(M^λ)`, spanned by standard polytabloids
/// on each `|λ|`-subset.
pub fn specht_module(lambda: &Partition, n: usize) -> Result<Subspace<Tabloid>, SpechtError> {
    let k = lambda.size();
    if n < k {
        return Err(SpechtError::TooSmall { k, n });
    }
    let mut space = Subspace::new();
    for support in (1..=n as u8).combinations(k) {
        for t in standard_tableaux_on(lambda, &support, n) {
            space.insert(polytabloid(&t).into_coeffs());
        }
    }
    Ok(space)
}

/// `ι_n`: the same pseudo-tabloids viewed in ambient `n + 1`.
pub fn iota(v: &ModuleVector) -> ModuleVector {
    ModuleVector {
        n: v.n + 1,
        shape: v.shape.clone(),
        coeffs: v.coeffs.clone(),
    }
}

/// `π_μ : I_n(M^λ) → M^μ`, filling the boxes of `μ / λ` with the
/// complement of the support in all ways.
pub fn pi_mu(v: &ModuleVector, mu: &Partition) -> Result<ModuleVector, SpechtError> {
    let lambda = v.shape();
    if !lambda.leads_to(mu) || mu.size() != v.n {
        return Err(SpechtError::NotLeadsTo {
            lambda: lambda.clone(),
            mu: mu.clone(),
        });
    }
    let added: Vec<usize> = (0..mu.len()).map(|i| mu.part(i) - lambda.part(i)).collect();
    // Each row assignment of the complement is hit by ∏ a_i! bijections.
    let weight = q(added.iter().map(|&a| factorial(a) as i64).product());
    let mut out = SparseVec::new();
    for (t, c) in v.coeffs.iter() {
        let support = t.support();
        let complement: Vec<u8> = (1..=v.n as u8).filter(|x| support.binary_search(x).is_err()).collect();
        let coeff = c * &weight;
        for assignment in row_assignments(&complement, &added) {
            let rows = (0..mu.len())
                .map(|i| {
                    let mut r = t.rows().get(i).cloned().unwrap_or_default();
                    r.extend_from_slice(&assignment[i]);
                    r
                })
                .collect();
            out.add_term(Tabloid::from_rows(rows), coeff.clone());
        }
    }
    Ok(ModuleVector {
        n: v.n,
        shape: mu.clone(),
        coeffs: out,
    })
}

/// Ways of splitting `items` into consecutive groups of the given sizes,
/// as sets.
fn row_assignments(items: &[u8], sizes: &[usize]) -> Vec<Vec<Vec<u8>>> {
    match sizes.split_first() {
        None => vec![Vec::new()],
        Some((&size, rest)) => {
            let mut out = Vec::new();
            for chosen in items.iter().copied().combinations(size) {
                let remaining: Vec<u8> = items.iter().copied().filter(|x| !chosen.contains(x)).collect();
                for mut tail in row_assignments(&remaining, rest) {
                    tail.insert(0, chosen.clone());
                    out.push(tail);
                }
            }
            out
        }
    }
}

fn check_tableau(t: &PseudoTableau) -> Result<(), SpechtError> {
    let mu = t.shape();
    if mu.size() != t.ambient() {
        return Err(SpechtError::NotATableau { mu, n: t.ambient() });
    }
    Ok(())
}

/// `w_𝒯 = Σ_{q ∈ ColStab(𝒯)} (-1)^q {(q𝒯)~}` where `~` strips the boxes
/// of `shape(𝒯) / λ`.
pub fn w_element(t: &PseudoTableau, lambda: &Partition) -> Result<ModuleVector, SpechtError> {
    check_tableau(t)?;
    t.strip(lambda)?;
    let mut coeffs = SparseVec::new();
    for (g, sign) in t.column_stabilizer() {
        coeffs.add_term(t.act(&g).strip(lambda)?.tabloid(), q(sign));
    }
    Ok(ModuleVector {
        n: t.ambient(),
        shape: lambda.clone(),
        coeffs,
    })
}

/// `Σ_{s ∈ ColStab(𝒯)} (-1)^s v_{(s𝒯)~}`.
pub fn stripped_polytabloid_sum(t: &PseudoTableau, lambda: &Partition) -> Result<ModuleVector, SpechtError> {
    let mut total = ModuleVector::zero(lambda.clone(), t.ambient());
    for (g, sign) in t.column_stabilizer() {
        let v = polytabloid(&t.act(&g).strip(lambda)?);
        total = total.add(&v.scaled(&q(sign)));
    }
    Ok(total)
}

/// Boxes of `μ / λ` as `(row, column)`, in reading order.
pub fn added_boxes(lambda: &Partition, mu: &Partition) -> Vec<(usize, usize)> {
    (0..mu.len())
        .flat_map(|r| (lambda.part(r)..mu.part(r)).map(move |c| (r, c)))
        .collect()
}

/// `Σ_q (-1)^q {(q𝒯)_g}` for the bijection `g : B_μ → B_ν` sending the
/// `i`-th added box of `μ` to the `g[i]`-th added box of `ν`.
pub fn moved_sum(t: &PseudoTableau, lambda: &Partition, nu: &Partition, g: &[usize]) -> Result<ModuleVector, SpechtError> {
    let mu = t.shape();
    let from = added_boxes(lambda, &mu);
    let to = added_boxes(lambda, nu);
    assert_eq!(g.len(), from.len());
    let mut coeffs = SparseVec::new();
    for (q_elem, sign) in t.column_stabilizer() {
        let qt = t.act(&q_elem);
        let mut rows: Vec<Vec<u8>> = (0..nu.len()).map(|r| vec![0; nu.part(r)]).collect();
        for (r, row) in lambda.parts().iter().enumerate() {
            rows[r][..*row].copy_from_slice(&qt.rows()[r][..*row]);
        }
        for (i, &(r, c)) in from.iter().enumerate() {
            let (r2, c2) = to[g[i]];
            rows[r2][c2] = qt.label(r, c);
        }
        coeffs.add_term(Tabloid::from_rows(rows), q(sign));
    }
    Ok(ModuleVector {
        n: t.ambient(),
        shape: nu.clone(),
        coeffs,
    })
}

/// Result of checking the three claims for one `μ`.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub mu: String,
    pub tableau: String,
    pub in_specht_module: bool,
    /// `c` with `π_μ(w_𝒯) = c · v_𝒯`, when proportional.
    pub projection_constant: Option<String>,
    pub projection_positive: bool,
    pub good_bijections: u64,
    pub larger_projection_failures: Vec<String>,
    pub column_constant: u64,
    pub column_sum_holds: bool,
    pub bad_bijections_checked: usize,
    pub bad_bijection_failures: Vec<String>,
}

impl ClaimCheck {
    pub fn passed(&self) -> bool {
        self.in_specht_module && self.projection_positive && self.larger_projection_failures.is_empty() && self.column_sum_holds && self.bad_bijection_failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimsReport {
    pub lambda: String,
    pub n: usize,
    pub checks: Vec<ClaimCheck>,
}

impl ClaimsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ClaimCheck::passed)
    }
}

/// Checks that `w_𝒯` lies in the Specht module, that `π_μ(w_𝒯)` is a positive
/// multiple of `v_𝒯` while `π_ν(w_𝒯) = 0` for `ν ≻ μ`, the `c · w_𝒯` identity and
/// bad-bijection cancellation for every `μ` with `λ ⇝ μ`, using the row-reading tableau of shape `μ`.
pub fn verify_claims(lambda: &Partition, n: usize) -> Result<ClaimsReport, SpechtError> {
    let specht = specht_module(lambda, n)?;
    let targets = lambda.leadsto(n);
    let mut checks = Vec::new();
    for mu in &targets {
        let t = PseudoTableau::row_reading(mu, n);
        let w = w_element(&t, lambda)?;
        let in_specht = specht.contains(w.coeffs());

        let v = polytabloid(&t);
        let image = pi_mu(&w, mu)?;
        let c = image.ratio_to(&v);
        let projection_positive = c.as_ref().is_some_and(|c| c.is_integer() && c.is_positive());
        let good: u64 = (0..mu.len()).map(|i| factorial(mu.part(i) - lambda.part(i)) as u64).product();

        let mut larger_projection_failures = Vec::new();
        for nu in targets.iter().filter(|nu| *nu > mu) {
            if !pi_mu(&w, nu)?.is_zero() {
                larger_projection_failures.push(nu.to_string());
            }
        }

        let stripped = t.strip(lambda)?;
        let c_col = stripped.column_stabilizer().order() as u64;
        let column_sum = stripped_polytabloid_sum(&t, lambda)? == w.scaled(&q(c_col as i64));

        let mut bad_checked = 0;
        let mut bad_failures = Vec::new();
        let from = added_boxes(lambda, mu);
        for nu in targets.iter().filter(|nu| *nu >= mu) {
            let to = added_boxes(lambda, nu);
            for g in (0..to.len()).permutations(to.len()) {
                let bad = from.iter().zip(&g).any(|(&(r, _), &j)| to[j].0 != r);
                if !bad {
                    continue;
                }
                bad_checked += 1;
                let sum = moved_sum(&t, lambda, nu, &g)?;
                if !sum.is_zero() {
                    bad_failures.push(format!("nu={nu} g={g:?}: {sum}"));
                }
            }
        }

        checks.push(ClaimCheck {
            mu: mu.to_string(),
            tableau: t.to_string(),
            in_specht_module: in_specht,
            projection_constant: c.map(|c| c.to_string()),
            projection_positive,
            good_bijections: good,
            larger_projection_failures,
            column_constant: c_col,
            column_sum_holds: column_sum,
            bad_bijections_checked: bad_checked,
            bad_bijection_failures: bad_failures,
        });
    }
    Ok(ClaimsReport {
        lambda: lambda.to_string(),
        n,
        checks,
    })
}

/// `W^μ`: the `S_n`-span of `w_𝒯`.
pub fn w_span(lambda: &Partition, mu: &Partition) -> Result<Subspace<Tabloid>, SpechtError> {
    let n = mu.size();
    let t = PseudoTableau::row_reading(mu, n);
    let w = w_element(&t, lambda)?;
    Ok(orbit_span(Subspace::new(), [w.into_coeffs()], &Perm::generators(n)))
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityEntry {
    pub mu: String,
    pub target: String,
    pub span_dimension: usize,
    pub span_decomposition: Vec<(String, u64)>,
    pub target_multiplicity: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub lambda: String,
    pub n: usize,
    pub entries: Vec<MonotonicityEntry>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.target_multiplicity == 1)
    }

    pub fn failures(&self) -> Vec<&MonotonicityEntry> {
        self.entries.iter().filter(|e| e.target_multiplicity != 1).collect()
    }
}

/// For each `μ` with `λ ⇝ μ`: the `S_{n+1}`-span of `ι_n(V_μ)` and the
/// multiplicity of `V_{μ{n+1}}` in it.
pub fn monotonicity_witness(lambda: &Partition, n: usize) -> Result<MonotonicityReport, SpechtError> {
    let space = specht_module(lambda, n)?;
    let gens = Perm::generators(n + 1);
    let mut entries = Vec::new();
    for mu in lambda.leadsto(n) {
        let iso = isotypic_component(&space, &Subspace::new(), &mu, 1)?;
        // ι_n keeps coefficients; only the acting group grows.
        let span = orbit_span(Subspace::new(), iso.basis().iter().cloned(), &gens);
        let chi = character_of(&span, n + 1);
        let decomposition = decompose(&chi)?;
        let target = mu.curly_pad().expect("μ is nonempty for n ≥ 1");
        entries.push(MonotonicityEntry {
            mu: mu.to_string(),
            target: target.to_string(),
            span_dimension: span.dim(),
            span_decomposition: decomposition.iter().map(|(p, c)| (p.to_string(), c)).collect(),
            target_multiplicity: decomposition.get(&target),
        });
    }
    Ok(MonotonicityReport {
        lambda: lambda.to_string(),
        n,
        entries,
    })
}

/// Decomposition of `I_n(V_λ)` computed from the explicit module.
pub fn decompose_induced_explicit(lambda: &Partition, n: usize) -> Result<MultiplicityVector, SpechtError> {
    let space = specht_module(lambda, n)?;
    Ok(decompose(&character_of(&space, n))?)
}

/// Decomposition of `I_n(V_λ)` from the induction formula.
pub fn decompose_induced(lambda: &Partition, n: usize) -> Result<MultiplicityVector, SpechtError> {
    let chi = crate::characters::ClassFunction::irreducible(lambda)?;
    Ok(decompose(&induced_character(&chi, n)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::ClassFunction;
    use crate::partitions::{partitions_of, partitions_up_to};
    use crate::perm::all_perms;
    use crate::tabloids::{all_pseudo_tableaux, all_pseudo_tabloids};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn tab(s: &str, n: usize) -> PseudoTableau {
        PseudoTableau::parse(s, n).unwrap()
    }

    fn tabloid(s: &str) -> Tabloid {
        s.parse().unwrap()
    }

    /// Matches `actual` against `expected` up to a global sign.
    fn assert_up_to_sign(actual: &ModuleVector, expected: &ModuleVector) {
        let r = actual.ratio_to(expected);
        assert!(r == Some(q(1)) || r == Some(q(-1)), "{actual} vs {expected}");
    }

    #[test]
    fn polytabloid_examples() {
        let v = polytabloid(&tab("1,2;3", 3));
        let mut expected = SparseVec::new();
        expected.add_term(tabloid("1,2;3"), q(1));
        expected.add_term(tabloid("2,3;1"), q(-1));
        assert_eq!(v.coeffs(), &expected);
        let row = polytabloid(&tab("2,3,1", 3));
        assert_eq!(row.coeffs(), &SparseVec::unit(tabloid("1,2,3")));
        let all: Vec<_> = all_pseudo_tableaux(&p("2,1"), 3).iter().map(|t| polytabloid(t).into_coeffs()).collect();
        assert_eq!(crate::linalg::rank(all), 2);
    }

    #[test]
    fn column_reordering_changes_sign_only() {
        let a = polytabloid(&tab("1,2;3", 3));
        let b = polytabloid(&tab("3,2;1", 3));
        assert_eq!(a, b.scaled(&q(-1)));
    }

    #[test]
    fn specht_module_examples() {
        assert_eq!(specht_module(&p("1"), 3).unwrap().dim(), 3);
        assert_eq!(specht_module(&p("2,1"), 3).unwrap().dim(), 2);
        let m = decompose_induced_explicit(&p("2"), 4).unwrap();
        assert_eq!(m.iter().map(|(p, c)| (p.to_string(), c)).collect::<Vec<_>>(), vec![("4".into(), 1), ("3,1".into(), 1), ("2,2".into(), 1)]);
        assert_eq!(specht_module(&p("2"), 4).unwrap().dim(), 6);
    }

    #[test]
    fn specht_module_is_span_of_all_polytabloids() {
        for lambda in partitions_up_to(3) {
            for n in lambda.size()..=4 {
                let full = Subspace::spanned_by(all_pseudo_tableaux(&lambda, n).iter().map(|t| polytabloid(t).into_coeffs()));
                assert!(full.equals(&specht_module(&lambda, n).unwrap()), "{lambda:?} {n}");
            }
        }
    }

    #[test]
    fn explicit_character_matches_induction() {
        for lambda in partitions_up_to(3) {
            for n in lambda.size()..=5 {
                let space = specht_module(&lambda, n).unwrap();
                let chi = induced_character(&ClassFunction::irreducible(&lambda).unwrap(), n).unwrap();
                assert_eq!(character_of(&space, n), chi, "{lambda:?} {n}");
                assert_eq!(crate::linalg::to_i64(&chi.dimension()).unwrap() as usize, space.dim());
            }
        }
    }

    #[test]
    fn pi_mu_examples() {
        let t = tab("7,2,1;5,3;4", 7);
        let v = ModuleVector::basis_vector(&t.tabloid(), 7);
        let cases = [("4,2,1", "7,2,1,6;5,3;4"), ("3,3,1", "7,2,1;5,3,6;4"), ("3,2,2", "7,2,1;5,3;4,6"), ("3,2,1,1", "7,2,1;5,3;4;6")];
        for (mu, expected) in cases {
            let image = pi_mu(&v, &p(mu)).unwrap();
            assert_eq!(image.coeffs(), &SparseVec::unit(tabloid(expected)), "{mu}");
        }
        assert!(pi_mu(&v, &p("5,2")).is_err());
    }

    #[test]
    fn pi_mu_small() {
        for label in [1u8, 2] {
            let v = ModuleVector::basis_vector(&tab(&label.to_string(), 2).tabloid(), 2);
            assert_eq!(pi_mu(&v, &p("2")).unwrap().coeffs(), &SparseVec::unit(tabloid("1,2")));
        }
    }

    /// Brute force: sum over all bijections from the added boxes to the complement.
    #[test]
    fn pi_mu_matches_bijection_sum() {
        let lambda = p("1");
        let mu = p("2,1");
        for t in all_pseudo_tableaux(&lambda, 3) {
            let v = ModuleVector::basis_vector(&t.tabloid(), 3);
            let support = t.support();
            let complement: Vec<u8> = (1..=3).filter(|x| !support.contains(x)).collect();
            let boxes = added_boxes(&lambda, &mu);
            let mut expected = SparseVec::new();
            for f in complement.iter().copied().permutations(complement.len()) {
                let mut rows: Vec<Vec<u8>> = vec![t.rows()[0].clone(), Vec::new()];
                for (&(r, _), x) in boxes.iter().zip(f) {
                    rows[r].push(x);
                }
                expected.add_term(Tabloid::from_rows(rows), q(1));
            }
            assert_eq!(pi_mu(&v, &mu).unwrap().coeffs(), &expected);
        }
    }

    #[test]
    fn pi_mu_is_equivariant() {
        for n in 1..=4 {
            let perms = all_perms(n);
            for lambda in partitions_up_to(n - 1) {
                for mu in lambda.leadsto(n) {
                    for t in all_pseudo_tabloids(&lambda, n) {
                        let v = ModuleVector::basis_vector(&t, n);
                        for g in &perms {
                            assert_eq!(pi_mu(&v.act(g), &mu).unwrap(), pi_mu(&v, &mu).unwrap().act(g));
                        }
                    }
                }
            }
        }
    }

    fn vsum(terms: &[(i64, &str)], n: usize) -> ModuleVector {
        let mut total: Option<ModuleVector> = None;
        for &(c, s) in terms {
            let v = polytabloid(&tab(s, n)).scaled(&q(c));
            total = Some(match total {
                None => v,
                Some(t) => t.add(&v),
            });
        }
        total.unwrap()
    }

    #[test]
    fn w_element_fixtures() {
        let lambda = p("3,2,1");
        let fixtures: [(&str, &[(i64, &str)]); 4] = [
            ("1,2,3,4;5,6;7", &[(1, "1,2,3;5,6;7")]),
            ("1,2,3;4,5,6;7", &[(1, "1,2,3;4,5;7"), (-1, "1,2,6;4,5;7")]),
            ("1,2,3;4,5;6,7", &[(1, "1,2,3;4,5;6"), (1, "1,7,3;4,2;6"), (1, "1,5,3;4,7;6")]),
            ("1,2,3;4,5;6;7", &[(1, "1,2,3;4,5;6"), (-1, "7,2,3;1,5;4"), (1, "6,2,3;7,5;1"), (-1, "4,2,3;6,5;7")]),
        ];
        for (t, expected) in fixtures {
            let w = w_element(&tab(t, 7), &lambda).unwrap();
            assert_up_to_sign(&w, &vsum(expected, 7));
        }
    }

    #[test]
    fn column_stabilizer_constant_fixture() {
        let t = tab("1,2,3,4;5,6;7", 7);
        let lambda = p("3,2,1");
        let c = t.strip(&lambda).unwrap().column_stabilizer().order();
        assert_eq!(c, 12);
        let lhs = w_element(&t, &lambda).unwrap().scaled(&q(12));
        assert_eq!(stripped_polytabloid_sum(&t, &lambda).unwrap(), lhs);
    }

    #[test]
    fn iota_of_w_is_w_of_extended_tableau() {
        let lambda = p("3,2,1");
        for t in ["1,2,3,4;5,6;7", "1,2,3;4,5,6;7", "1,2,3;4,5;6,7", "1,2,3;4,5;6;7"] {
            let t = tab(t, 7);
            let w = w_element(&t, &lambda).unwrap();
            let bigger = t.with_box(0, 8).unwrap();
            assert_eq!(iota(&w), w_element(&bigger, &lambda).unwrap());
        }
    }

    #[test]
    fn iota_is_equivariant() {
        let lambda = p("1,1");
        let space = specht_module(&lambda, 4).unwrap();
        for g in all_perms(4) {
            let big = g.extend(5);
            for b in space.basis() {
                let v = ModuleVector::from_coeffs(lambda.clone(), 4, b.clone());
                assert_eq!(iota(&v.act(&g)), iota(&v).act(&big));
            }
        }
    }

    #[test]
    fn claims_for_321_at_7() {
        let report = verify_claims(&p("3,2,1"), 7).unwrap();
        assert_eq!(report.checks.len(), 4);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checks[0].column_constant, 12);
    }

    #[test]
    fn claims_trivial_lambda() {
        for n in 1..=5 {
            let report = verify_claims(&Partition::empty(), n).unwrap();
            assert_eq!(report.checks.len(), 1);
            let c = &report.checks[0];
            assert!(c.passed());
            assert_eq!(c.column_constant, 1);
            let w = w_element(&PseudoTableau::row_reading(&Partition::row(n), n), &Partition::empty()).unwrap();
            assert_eq!(w.coeffs().len(), 1);
        }
    }

    #[test]
    fn projection_constant_is_good_bijection_count() {
        for lambda in partitions_up_to(3) {
            for n in lambda.size().max(1)..=6 {
                let report = verify_claims(&lambda, n).unwrap();
                assert!(report.passed(), "{report:?}");
                for c in &report.checks {
                    assert_eq!(c.projection_constant.as_deref(), Some(c.good_bijections.to_string().as_str()));
                }
            }
        }
        let report = verify_claims(&p("1,1"), 3).unwrap();
        let c = report.checks.iter().find(|c| c.mu == "2,1").unwrap();
        assert!(c.good_bijections >= 1);
    }

    #[test]
    fn w_span_has_no_larger_constituents() {
        for lambda in partitions_up_to(3) {
            for n in lambda.size().max(1)..=5 {
                for mu in lambda.leadsto(n) {
                    let span = w_span(&lambda, &mu).unwrap();
                    let m = decompose(&character_of(&span, n)).unwrap();
                    assert_eq!(m.get(&mu), 1);
                    for (nu, _) in m.iter() {
                        assert!(nu <= &mu, "{lambda:?} {mu:?} contains {nu:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn monotonicity_examples() {
        let r = monotonicity_witness(&p("1"), 3).unwrap();
        assert!(r.passed());
        let targets: Vec<_> = r.entries.iter().map(|e| (e.mu.as_str(), e.target.as_str())).collect();
        assert_eq!(targets, vec![("3", "4"), ("2,1", "3,1")]);
        let r = monotonicity_witness(&p("2"), 4).unwrap();
        assert!(r.passed());
        let e = r.entries.iter().find(|e| e.mu == "2,2").unwrap();
        assert_eq!(e.target, "3,2");
    }

    #[test]
    fn induced_decompositions_agree() {
        for n in 1..=5 {
            for lambda in partitions_of(n - 1) {
                assert_eq!(decompose_induced(&lambda, n).unwrap(), decompose_induced_explicit(&lambda, n).unwrap());
            }
        }
    }
}
