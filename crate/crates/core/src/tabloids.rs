//! Pseudo-tableaux, pseudo-tabloids and column stabilizers.
//!
//! Labels are `u8` values in `1..=n`. A pseudo-tableau of shape `λ ⊢ k` uses
//! a `k`-element subset of the ambient set; the ambient `n` is carried by the
//! tableau but not by the tabloid, which is only a basis key.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::partitions::Partition;
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("rows do not form a Young diagram")]
    NotAShape,
    #[error("label {label} is outside 1..={n}")]
    LabelOutOfRange { label: u8, n: usize },
    #[error("label {0} appears twice")]
    RepeatedLabel(u8),
    #[error("{lambda:?} is not obtained from {mu:?} by removing a horizontal strip")]
    NotAStrip { lambda: Partition, mu: Partition },
    #[error("cannot parse tableau {0:?}")]
    Parse(String),
}

/// A row-equivalence class of pseudo-tableaux, stored with each row sorted.
///
/// Tabloids of a fixed shape are ordered lexicographically by their row-sorted
/// reading word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    rows: Vec<Vec<u8>>,
}

impl Tabloid {
    /// Canonicalizes arbitrary rows.
    pub fn from_rows(mut rows: Vec<Vec<u8>>) -> Self {
        for r in &mut rows {
            r.sort_unstable();
        }
        Tabloid { rows }
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.rows.iter().map(Vec::len).collect())
    }

    pub fn support(&self) -> Vec<u8> {
        self.rows.iter().flatten().copied().sorted().collect()
    }

    pub fn act(&self, g: &Perm) -> Tabloid {
        Tabloid::from_rows(self.rows.iter().map(|r| r.iter().map(|&x| g.apply(x)).collect()).collect())
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_rows(&self.rows))
    }
}

impl fmt::Debug for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", render_rows(&self.rows))
    }
}

fn render_rows(rows: &[Vec<u8>]) -> String {
    rows.iter().map(|r| r.iter().join(",")).join(";")
}

/// An injective labelling of a Young diagram by a subset of `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PseudoTableau {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl PseudoTableau {
    pub fn new(n: usize, rows: Vec<Vec<u8>>) -> Result<Self, TableauError> {
        if rows.iter().any(Vec::is_empty) || rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return Err(TableauError::NotAShape);
        }
        let mut seen = vec![false; n + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x as usize > n {
                return Err(TableauError::LabelOutOfRange { label: x, n });
            }
            if seen[x as usize] {
                return Err(TableauError::RepeatedLabel(x));
            }
            seen[x as usize] = true;
        }
        Ok(PseudoTableau { n, rows })
    }

    /// Parses the text form `7,2,1;5,3;4`.
    pub fn parse(text: &str, n: usize) -> Result<Self, TableauError> {
        let text = text.trim();
        if text.is_empty() {
            return PseudoTableau::new(n, Vec::new());
        }
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| x.trim().parse::<u8>().map_err(|_| TableauError::Parse(text.to_string())))
                    .collect::<Result<Vec<u8>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PseudoTableau::new(n, rows)
    }

    /// The tableau of shape `shape` filled with `1, 2, ...` in reading order.
    pub fn row_reading(shape: &Partition, n: usize) -> Self {
        let mut next = 0u8;
        let rows = shape
            .parts()
            .iter()
            .map(|&len| {
                (0..len)
                    .map(|_| {
                        next += 1;
                        next
                    })
                    .collect()
            })
            .collect();
        PseudoTableau { n, rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.rows.iter().map(Vec::len).collect())
    }

    pub fn support(&self) -> Vec<u8> {
        self.rows.iter().flatten().copied().sorted().collect()
    }

    pub fn label(&self, row: usize, col: usize) -> u8 {
        self.rows[row][col]
    }

    pub fn tabloid(&self) -> Tabloid {
        Tabloid::from_rows(self.rows.clone())
    }

    /// `σT`: relabel every box by `σ`.
    pub fn act(&self, g: &Perm) -> PseudoTableau {
        assert_eq!(g.degree(), self.n, "permutation degree differs from the ambient set");
        PseudoTableau {
            n: self.n,
            rows: self.rows.iter().map(|r| r.iter().map(|&x| g.apply(x)).collect()).collect(),
        }
    }

    /// The same labelling in a larger ambient set.
    pub fn with_ambient(&self, n: usize) -> PseudoTableau {
        assert!(n >= self.rows.iter().flatten().copied().max().unwrap_or(0) as usize);
        PseudoTableau { n, rows: self.rows.clone() }
    }

    /// Adds one box labelled `label` at the end of row `row`.
    pub fn with_box(&self, row: usize, label: u8) -> Result<PseudoTableau, TableauError> {
        let mut rows = self.rows.clone();
        if row == rows.len() {
            rows.push(vec![label]);
        } else {
            rows[row].push(label);
        }
        PseudoTableau::new(self.n.max(label as usize), rows)
    }

    /// Entries of each column, top to bottom.
    pub fn columns(&self) -> Vec<Vec<u8>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| self.rows.iter().take_while(|r| r.len() > c).map(|r| r[c]).collect())
            .collect()
    }

    pub fn column_stabilizer(&self) -> ColumnStabilizer {
        ColumnStabilizer::new(self.n, self.columns())
    }

    /// Deletes the boxes of `shape(self)` outside `λ` together with their labels.
    pub fn strip(&self, lambda: &Partition) -> Result<PseudoTableau, TableauError> {
        let mu = self.shape();
        if !lambda.leads_to(&mu) {
            return Err(TableauError::NotAStrip {
                lambda: lambda.clone(),
                mu,
            });
        }
        Ok(PseudoTableau {
            n: self.n,
            rows: lambda.parts().iter().zip(&self.rows).map(|(&len, r)| r[..len].to_vec()).collect(),
        })
    }

    /// Whether rows increase left to right and columns increase downwards.
    pub fn is_standard(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
            && self.rows.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(b, a)| a < b))
    }
}

impl fmt::Display for PseudoTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_rows(&self.rows))
    }
}

impl fmt::Debug for PseudoTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]/{}", render_rows(&self.rows), self.n)
    }
}

impl FromStr for Tabloid {
    type Err = TableauError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let max = s
            .split([';', ','])
            .filter_map(|x| x.trim().parse::<u8>().ok())
            .max()
            .unwrap_or(0);
        Ok(PseudoTableau::parse(s, max as usize)?.tabloid())
    }
}

/// Lazy iteration over `ColStab(T)` as `(permutation, sign)` pairs.
pub struct ColumnStabilizer {
    n: usize,
    columns: Vec<Vec<u8>>,
    arrangements: Vec<Vec<(Vec<u8>, i64)>>,
    odometer: Vec<usize>,
    done: bool,
}

impl ColumnStabilizer {
    fn new(n: usize, columns: Vec<Vec<u8>>) -> Self {
        let arrangements: Vec<Vec<(Vec<u8>, i64)>> = columns
            .iter()
            .map(|col| {
                let len = col.len();
                (0..len)
                    .permutations(len)
                    .map(|p| {
                        let images: Vec<u8> = p.iter().map(|&i| col[i]).collect();
                        let sign = Perm::from_images(&p.iter().map(|&i| i as u8 + 1).collect::<Vec<_>>()).sign();
                        (images, sign)
                    })
                    .collect()
            })
            .collect();
        let odometer = vec![0; columns.len()];
        ColumnStabilizer {
            n,
            columns,
            arrangements,
            odometer,
            done: false,
        }
    }

    pub fn order(&self) -> u128 {
        self.arrangements.iter().map(|a| a.len() as u128).product()
    }

    /// Generators: adjacent transpositions within each column.
    pub fn generators(&self) -> Vec<Perm> {
        self.columns
            .iter()
            .flat_map(|col| col.windows(2).map(|w| Perm::transposition(self.n, w[0], w[1])))
            .collect()
    }
}

impl Iterator for ColumnStabilizer {
    type Item = (Perm, i64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut img: Vec<u8> = (1..=self.n as u8).collect();
        let mut sign = 1;
        for ((col, arr), &i) in self.columns.iter().zip(&self.arrangements).zip(&self.odometer) {
            let (images, s) = &arr[i];
            for (&from, &to) in col.iter().zip(images) {
                img[from as usize - 1] = to;
            }
            sign *= s;
        }
        let mut k = 0;
        loop {
            if k == self.odometer.len() {
                self.done = true;
                break;
            }
            self.odometer[k] += 1;
            if self.odometer[k] < self.arrangements[k].len() {
                break;
            }
            self.odometer[k] = 0;
            k += 1;
        }
        Some((Perm::from_images(&img), sign))
    }
}

/// All `n`-pseudo-tabloids of shape `λ`, in increasing order.
pub fn all_pseudo_tabloids(shape: &Partition, n: usize) -> Vec<Tabloid> {
    let mut out = Vec::new();
    let labels: Vec<u8> = (1..=n as u8).collect();
    fn fill(rows_left: &[usize], available: &[u8], current: &mut Vec<Vec<u8>>, out: &mut Vec<Tabloid>) {
        match rows_left.split_first() {
            None => out.push(Tabloid { rows: current.clone() }),
            Some((&len, rest)) => {
                for chosen in available.iter().copied().combinations(len) {
                    let remaining: Vec<u8> = available.iter().copied().filter(|x| !chosen.contains(x)).collect();
                    current.push(chosen);
                    fill(rest, &remaining, current, out);
                    current.pop();
                }
            }
        }
    }
    fill(shape.parts(), &labels, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Standard pseudo-tableaux of shape `λ` on the label set `support` (sorted).
pub fn standard_tableaux_on(shape: &Partition, support: &[u8], n: usize) -> Vec<PseudoTableau> {
    assert_eq!(shape.size(), support.len());
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u8>> = vec![Vec::new(); shape.len()];
    fn place(shape: &Partition, support: &[u8], next: usize, rows: &mut Vec<Vec<u8>>, n: usize, out: &mut Vec<PseudoTableau>) {
        if next == support.len() {
            out.push(PseudoTableau { n, rows: rows.clone() });
            return;
        }
        for r in 0..rows.len() {
            let len = rows[r].len();
            if len < shape.part(r) && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(support[next]);
                place(shape, support, next + 1, rows, n, out);
                rows[r].pop();
            }
        }
    }
    place(shape, support, 0, &mut rows, n, &mut out);
    out
}

/// All pseudo-tableaux of shape `λ` in ambient `n` (exponential; tests only).
pub fn all_pseudo_tableaux(shape: &Partition, n: usize) -> Vec<PseudoTableau> {
    let k = shape.size();
    (1..=n as u8)
        .permutations(k)
        .map(|labels| {
            let mut it = labels.into_iter();
            let rows = shape.parts().iter().map(|&len| it.by_ref().take(len).collect()).collect();
            PseudoTableau { n, rows }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{binomial, factorial, partitions_up_to};
    use crate::perm::all_perms;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        let t = PseudoTableau::parse("7,2,1;5,3;4", 7).unwrap();
        assert_eq!(t.to_string(), "7,2,1;5,3;4");
        assert_eq!(t.support(), vec![1, 2, 3, 4, 5, 7]);
        assert_eq!(t.shape(), p("3,2,1"));
        assert_eq!(t.tabloid().to_string(), "1,2,7;3,5;4");
        assert!(PseudoTableau::parse("1,1", 3).is_err());
        assert!(PseudoTableau::parse("1;2,3", 3).is_err());
        assert!(PseudoTableau::parse("4", 3).is_err());
    }

    #[test]
    fn act_examples() {
        let t = PseudoTableau::parse("1,2;3", 3).unwrap();
        assert_eq!(t.act(&Perm::identity(3)), t);
        let s = t.act(&Perm::transposition(3, 1, 2));
        assert_eq!(s.rows(), &[vec![2, 1], vec![3]]);
        assert_eq!(s.tabloid(), t.tabloid());
    }

    #[test]
    fn action_descends_to_tabloids() {
        let shape = p("2,1");
        let tableaux = all_pseudo_tableaux(&shape, 3);
        for g in all_perms(3) {
            for a in &tableaux {
                for b in &tableaux {
                    if a.tabloid() == b.tabloid() {
                        assert_eq!(a.act(&g).tabloid(), b.act(&g).tabloid());
                    }
                }
                assert_eq!(a.act(&g).tabloid(), a.tabloid().act(&g));
            }
        }
    }

    #[test]
    fn action_is_a_group_action() {
        for n in 1..=4 {
            let perms = all_perms(n);
            for shape in partitions_up_to(n).into_iter().filter(|s| !s.is_empty()) {
                for t in all_pseudo_tabloids(&shape, n) {
                    for g in &perms {
                        for h in perms.iter().step_by(3) {
                            assert_eq!(t.act(&g.compose(h)), t.act(h).act(g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let t = PseudoTableau::parse("7,2,1;5,3;4", 7).unwrap().tabloid();
        assert_eq!(Tabloid::from_rows(t.rows().to_vec()), t);
    }

    #[test]
    fn pseudo_tabloid_counts() {
        for k in 0..=5 {
            for shape in crate::partitions::partitions_of(k) {
                for n in k..=7 {
                    let expected = binomial(n, k) * factorial(k) / shape.parts().iter().map(|&x| factorial(x)).product::<u128>();
                    assert_eq!(all_pseudo_tabloids(&shape, n).len() as u128, expected, "{shape:?} {n}");
                }
            }
        }
    }

    #[test]
    fn column_stabilizer_orders() {
        let row = PseudoTableau::parse("1,2,3", 3).unwrap();
        assert_eq!(row.column_stabilizer().count(), 1);
        let hook = PseudoTableau::parse("1,2;3", 3).unwrap();
        let elems: Vec<_> = hook.column_stabilizer().collect();
        assert_eq!(elems.len(), 2);
        assert_eq!(elems.iter().map(|(_, s)| s).sum::<i64>(), 0);
        let t = PseudoTableau::parse("1,2,3;5,6;7", 7).unwrap();
        let cs = t.column_stabilizer();
        assert_eq!(cs.order(), 12);
        let elems: Vec<_> = cs.collect();
        assert_eq!(elems.len(), 12);
        let distinct: std::collections::HashSet<_> = elems.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(distinct.len(), 12);
        for (g, s) in &elems {
            assert_eq!(g.sign(), *s);
            for col in t.columns() {
                let mut img: Vec<u8> = col.iter().map(|&x| g.apply(x)).collect();
                img.sort_unstable();
                let mut sorted = col.clone();
                sorted.sort_unstable();
                assert_eq!(img, sorted);
            }
        }
    }

    #[test]
    fn strip_examples() {
        let t = PseudoTableau::parse("1,2,3,4;5,6;7", 7).unwrap();
        let s = t.strip(&p("3,2,1")).unwrap();
        assert_eq!(s.to_string(), "1,2,3;5,6;7");
        assert_eq!(s.support(), vec![1, 2, 3, 5, 6, 7]);
        assert_eq!(t.strip(&t.shape()).unwrap(), t);
        let single = PseudoTableau::parse("1,2", 2).unwrap();
        assert_eq!(single.strip(&p("1")).unwrap().to_string(), "1");
        assert!(t.strip(&p("4")).is_err());
        assert!(t.strip(&p("3,2,2")).is_err());
    }

    #[test]
    fn standard_tableaux_count() {
        for shape in partitions_up_to(6) {
            let support: Vec<u8> = (1..=shape.size() as u8).collect();
            let tabs = standard_tableaux_on(&shape, &support, shape.size());
            assert_eq!(tabs.len() as u128, shape.dim_irrep());
            assert!(tabs.iter().all(PseudoTableau::is_standard));
        }
    }
}
