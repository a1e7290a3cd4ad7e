//! Line-oriented descriptors of the rational cohomology ring of a manifold.
//!
//! ```text
//! name T2
//! dim 2
//! class 1 0
//! class a 1
//! class b 1
//! class pt 2
//! mul a b pt 1        # a·b = 1·pt
//! diag a b -1         # term -a⊗b of the diagonal class
//! flag orientable
//! ```
//!
//! Coefficients are exact rationals written `p` or `p/q`. The degree-0 class
//! is the unit; products with it and products implied by graded
//! commutativity may be omitted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{q, Q};
use crate::stability::RangeParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn invalid(msg: impl Into<String>) -> DescriptorError {
    DescriptorError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub name: String,
    pub degree: usize,
}

/// A validated cohomology ring with optional diagonal class.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub name: String,
    pub dim: usize,
    /// Index 0 is the unit.
    pub classes: Vec<CohomologyClass>,
    products: Vec<Vec<Vec<(usize, Q)>>>,
    diagonal: Option<Vec<(usize, usize, Q)>>,
    pub flags: BTreeSet<String>,
}

const BUNDLED: [(&str, &str); 4] = [
    ("torus", include_str!("../../descriptors/torus.desc")),
    ("s2", include_str!("../../descriptors/s2.desc")),
    ("s3", include_str!("../../descriptors/s3.desc")),
    ("cp1", include_str!("../../descriptors/cp1.desc")),
];

/// Names of the descriptors compiled into the library.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled(name: &str) -> Option<Manifold> {
    let stem = name.strip_suffix(".desc").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == stem)
        .map(|(_, text)| Manifold::parse(text).expect("bundled descriptor is valid"))
}

/// Loads a descriptor from disk; a missing file named like a bundled
/// descriptor (`torus.desc`, `s2`, ...) falls back to the bundled copy.
pub fn load_manifold(path: impl AsRef<Path>) -> Result<Manifold, DescriptorError> {
    let path = path.as_ref();
    match std::fs::read_to_string(path) {
        Ok(text) => Manifold::parse(&text),
        Err(e) => {
            let file = path.file_name().and_then(|f| f.to_str()).unwrap_or("");
            if path.components().count() == 1 {
                if let Some(m) = bundled(file) {
                    return Ok(m);
                }
            }
            Err(DescriptorError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }
    }
}

fn parse_rational(text: &str, line: usize) -> Result<Q, DescriptorError> {
    RangeParams::parse_m(text).map_err(|message| DescriptorError::Parse { line, message })
}

impl Manifold {
    pub fn parse(text: &str) -> Result<Self, DescriptorError> {
        let mut name = None;
        let mut dim = None;
        let mut classes: Vec<CohomologyClass> = Vec::new();
        let mut raw_mul: Vec<(usize, String, String, String, Q)> = Vec::new();
        let mut raw_diag: Vec<(usize, String, String, Q)> = Vec::new();
        let mut flags = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let err = |message: &str| DescriptorError::Parse {
                line,
                message: message.to_string(),
            };
            match (words[0], words.len()) {
                ("name", 2) => name = Some(words[1].to_string()),
                ("dim", 2) => dim = Some(words[1].parse::<usize>().map_err(|_| err("dimension must be a nonnegative integer"))?),
                ("class", 3) => {
                    let degree = words[2].parse::<usize>().map_err(|_| err("degree must be a nonnegative integer"))?;
                    if classes.iter().any(|c| c.name == words[1]) {
                        return Err(err(&format!("class {} declared twice", words[1])));
                    }
                    classes.push(CohomologyClass {
                        name: words[1].to_string(),
                        degree,
                    });
                }
                ("mul", 5) => raw_mul.push((line, words[1].into(), words[2].into(), words[3].into(), parse_rational(words[4], line)?)),
                ("diag", 4) => raw_diag.push((line, words[1].into(), words[2].into(), parse_rational(words[3], line)?)),
                ("flag", 2) => {
                    flags.insert(words[1].to_string());
                }
                ("name" | "dim" | "class" | "mul" | "diag" | "flag", _) => return Err(err(&format!("wrong number of fields for {}", words[0]))),
                (other, _) => return Err(err(&format!("unknown keyword {other:?}"))),
            }
        }
        let dim = dim.ok_or_else(|| invalid("missing dim line"))?;
        let name = name.unwrap_or_else(|| "M".to_string());
        let degree_zero: Vec<usize> = (0..classes.len()).filter(|&i| classes[i].degree == 0).collect();
        match degree_zero.len() {
            0 => return Err(invalid("no class in degree 0")),
            1 => {}
            k => return Err(invalid(format!("disconnected: {k} classes in degree 0"))),
        }
        // Put the unit first, keeping the declared order otherwise.
        let unit = degree_zero[0];
        let unit_class = classes.remove(unit);
        classes.insert(0, unit_class);
        if let Some(c) = classes.iter().find(|c| c.degree > dim) {
            return Err(invalid(format!("class {} has degree {} above the dimension {dim}", c.name, c.degree)));
        }
        if !flags.contains("orientable") {
            return Err(invalid("only orientable manifolds are supported (missing flag orientable)"));
        }
        let index = |line: usize, n: &str| -> Result<usize, DescriptorError> {
            classes.iter().position(|c| c.name == n).ok_or(DescriptorError::Parse {
                line,
                message: format!("unknown class {n:?}"),
            })
        };
        let h = classes.len();
        let mut given: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for (line, a, b, c, coeff) in &raw_mul {
            let (a, b, c) = (index(*line, a)?, index(*line, b)?, index(*line, c)?);
            if classes[a].degree + classes[b].degree != classes[c].degree {
                return Err(DescriptorError::Parse {
                    line: *line,
                    message: "degrees of the product do not add up".into(),
                });
            }
            *given.entry((a, b)).or_default().entry(c).or_insert_with(Q::zero) += coeff;
        }
        let mut products = vec![vec![Vec::new(); h]; h];
        for x in 0..h {
            for y in 0..h {
                let sign = if classes[x].degree * classes[y].degree % 2 == 1 { q(-1) } else { q(1) };
                let table: BTreeMap<usize, Q> = if x == 0 || y == 0 {
                    let other = if x == 0 { y } else { x };
                    BTreeMap::from([(other, Q::one())])
                } else if let Some(t) = given.get(&(x, y)) {
                    t.clone()
                } else if let Some(t) = given.get(&(y, x)) {
                    t.iter().map(|(k, c)| (*k, c * &sign)).collect()
                } else {
                    BTreeMap::new()
                };
                if x == 0 || y == 0 {
                    for key in [(x, y), (y, x)] {
                        if let Some(t) = given.get(&key) {
                            if t.iter().any(|(k, c)| !c.is_zero() && table.get(k) != Some(c)) || t.values().filter(|c| !c.is_zero()).count() != 1 {
                                return Err(invalid(format!("product with the unit {} must be the identity", classes[0].name)));
                            }
                        }
                    }
                }
                products[x][y] = table.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        let mut diag_terms: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (line, a, b, coeff) in &raw_diag {
            let (a, b) = (index(*line, a)?, index(*line, b)?);
            if classes[a].degree + classes[b].degree != dim {
                return Err(DescriptorError::Parse {
                    line: *line,
                    message: format!("diagonal term must have total degree {dim}"),
                });
            }
            *diag_terms.entry((a, b)).or_insert_with(Q::zero) += coeff;
        }
        let mut manifold = Manifold {
            name,
            dim,
            classes,
            products,
            diagonal: None,
            flags,
        };
        manifold.check_ring()?;
        if !raw_diag.is_empty() {
            let diag: Vec<(usize, usize, Q)> = diag_terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect();
            let expected = manifold.expected_diagonal()?;
            if diag != expected {
                return Err(invalid("diagonal fails duality pairing"));
            }
            manifold.diagonal = Some(diag);
        }
        Ok(manifold)
    }

    fn check_ring(&self) -> Result<(), DescriptorError> {
        let h = self.classes.len();
        for x in 0..h {
            for y in 0..h {
                let sign = if self.classes[x].degree * self.classes[y].degree % 2 == 1 { q(-1) } else { q(1) };
                let swapped: Vec<(usize, Q)> = self.products[y][x].iter().map(|(k, c)| (*k, c * &sign)).collect();
                if self.products[x][y] != swapped {
                    return Err(invalid(format!(
                        "graded commutativity fails for {} and {}",
                        self.classes[x].name, self.classes[y].name
                    )));
                }
                for z in 0..h {
                    let left = self.multiply_vec(self.mul(x, y), z);
                    let right: BTreeMap<usize, Q> = {
                        let mut acc = BTreeMap::new();
                        for (w, c) in self.mul(y, z) {
                            for (u, c2) in self.mul(x, *w) {
                                *acc.entry(*u).or_insert_with(Q::zero) += c * c2;
                            }
                        }
                        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                    };
                    if left != right {
                        return Err(invalid(format!(
                            "associativity fails for {}, {}, {}",
                            self.classes[x].name, self.classes[y].name, self.classes[z].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn multiply_vec(&self, v: &[(usize, Q)], z: usize) -> BTreeMap<usize, Q> {
        let mut acc = BTreeMap::new();
        for (w, c) in v {
            for (u, c2) in self.mul(*w, z) {
                *acc.entry(*u).or_insert_with(Q::zero) += c * c2;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `Σ_i (-1)^{|e_i|} e_i ⊗ e_i^∨` with `⟨e_i e_j^∨, [M]⟩ = δ_ij`.
    fn expected_diagonal(&self) -> Result<Vec<(usize, usize, Q)>, DescriptorError> {
        let top: Vec<usize> = (0..self.classes.len()).filter(|&i| self.classes[i].degree == self.dim).collect();
        if top.len() != 1 {
            return Err(invalid("a diagonal class needs a one-dimensional top degree"));
        }
        let top = top[0];
        let h = self.classes.len();
        let pairing: Vec<Vec<Q>> = (0..h)
            .map(|i| (0..h).map(|j| self.mul(i, j).iter().find(|(k, _)| *k == top).map_or_else(Q::zero, |(_, c)| c.clone())).collect())
            .collect();
        let inverse = invert(pairing).ok_or_else(|| invalid("Poincaré duality pairing is degenerate"))?;
        let mut out = Vec::new();
        for i in 0..h {
            let sign = if self.classes[i].degree % 2 == 1 { q(-1) } else { q(1) };
            for (k, row) in inverse.iter().enumerate() {
                let c = &row[i] * &sign;
                if !c.is_zero() {
                    out.push((i, k, c));
                }
            }
        }
        let mut merged: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, b, c) in out {
            *merged.entry((a, b)).or_insert_with(Q::zero) += c;
        }
        Ok(merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect())
    }

    /// `x · y` as a combination of basis classes.
    pub fn mul(&self, x: usize, y: usize) -> &[(usize, Q)] {
        &self.products[x][y]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.classes[x].degree
    }

    pub fn diagonal(&self) -> Option<&[(usize, usize, Q)]> {
        self.diagonal.as_deref()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }

    pub fn is_closed(&self) -> bool {
        self.has_flag("closed")
    }

    /// `b_0, ..., b_dim`.
    pub fn betti(&self) -> Vec<usize> {
        let mut b = vec![0; self.dim + 1];
        for c in &self.classes {
            b[c.degree] += 1;
        }
        b
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti().iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn total_dimension(&self) -> usize {
        self.classes.len()
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        writeln!(f, "dim {}", self.dim)?;
        for c in &self.classes {
            writeln!(f, "class {} {}", c.name, c.degree)?;
        }
        for x in 1..self.classes.len() {
            for y in 1..self.classes.len() {
                for (z, c) in self.mul(x, y) {
                    writeln!(f, "mul {} {} {} {}", self.classes[x].name, self.classes[y].name, self.classes[*z].name, c)?;
                }
            }
        }
        if let Some(diag) = &self.diagonal {
            for (a, b, c) in diag {
                writeln!(f, "diag {} {} {}", self.classes[*a].name, self.classes[*b].name, c)?;
            }
        }
        for flag in &self.flags {
            writeln!(f, "flag {flag}")?;
        }
        Ok(())
    }
}

/// Gauss–Jordan inverse of a small square matrix.
fn invert(mut a: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_descriptors_load() {
        let t = bundled("torus.desc").unwrap();
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.betti(), vec![1, 2, 1]);
        assert_eq!(t.mul(2, 1), &[(3, q(-1))]);
        let s2 = bundled("s2").unwrap();
        assert_eq!(s2.euler_characteristic(), 2);
        assert_eq!(s2.diagonal().unwrap().len(), 2);
        assert_eq!(bundled("s3").unwrap().euler_characteristic(), 0);
        assert_eq!(bundled("cp1").unwrap().betti(), s2.betti());
        assert_eq!(bundled_names().len(), 4);
    }

    #[test]
    fn diagonal_swap_symmetry() {
        // τ^*Δ = (-1)^d Δ.
        for name in bundled_names() {
            let m = bundled(name).unwrap();
            let diag = m.diagonal().unwrap();
            let sign = if m.dim % 2 == 1 { q(-1) } else { q(1) };
            let mut swapped: Vec<(usize, usize, Q)> = diag
                .iter()
                .map(|(a, b, c)| {
                    let koszul = if m.degree(*a) * m.degree(*b) % 2 == 1 { q(-1) } else { q(1) };
                    (*b, *a, c * koszul * &sign)
                })
                .collect();
            swapped.sort_by_key(|x| (x.0, x.1));
            assert_eq!(swapped, diag.to_vec(), "{name}");
        }
    }

    #[test]
    fn rejects_disconnected() {
        let text = "dim 1\nclass 1 0\nclass e 0\nflag orientable\n";
        assert!(matches!(Manifold::parse(text), Err(DescriptorError::Invalid(m)) if m.contains("disconnected")));
    }

    #[test]
    fn rejects_bad_diagonal() {
        let text = "dim 2\nclass 1 0\nclass pt 2\ndiag 1 pt 1\ndiag pt 1 -1\nflag orientable\n";
        assert!(matches!(Manifold::parse(text), Err(DescriptorError::Invalid(m)) if m.contains("duality")));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "dim 2\nclass 1 0\nmul 1 x 1 1\nflag orientable\n";
        assert!(matches!(Manifold::parse(text), Err(DescriptorError::Parse { line: 3, .. })));
        assert!(matches!(Manifold::parse("dim 2\nfoo\n"), Err(DescriptorError::Parse { line: 2, .. })));
        assert!(matches!(Manifold::parse("dim x\n"), Err(DescriptorError::Parse { line: 1, .. })));
        let bad_rational = "dim 2\nclass 1 0\nclass pt 2\ndiag 1 pt 1/0\n";
        assert!(matches!(Manifold::parse(bad_rational), Err(DescriptorError::Parse { line: 4, .. })));
    }

    #[test]
    fn rejects_non_commutative_table() {
        let text = "dim 2\nclass 1 0\nclass a 1\nclass b 1\nclass pt 2\nmul a b pt 1\nmul b a pt 1\nflag orientable\n";
        assert!(matches!(Manifold::parse(text), Err(DescriptorError::Invalid(m)) if m.contains("commutativity")));
    }

    #[test]
    fn round_trips_through_display() {
        for name in bundled_names() {
            let m = bundled(name).unwrap();
            let again = Manifold::parse(&m.to_string()).unwrap();
            assert_eq!(again.to_string(), m.to_string());
        }
    }
}
