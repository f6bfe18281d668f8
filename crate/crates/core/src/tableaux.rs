//! Two-row Young diagrams, their admissible standard tableaux and axial distances.
//!
//! A standard tableau with at most two rows is stored as its prefix label path
//! `m_0, ..., m_n`, where `m_j = λ1 - λ2` of the subdiagram holding `1..=j`. Node `j`
//! sits in the first row iff `m_j = m_{j-1} + 1`. The level condition of a `(2, r)`
//! tableau is exactly `m_j <= r - 2` for every prefix, so tableaux and fusion paths
//! are the same objects.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};
use crate::fusion::{FusionContext, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    pub rows: (usize, usize),
}

impl YoungDiagram {
    pub fn new(l1: usize, l2: usize) -> Result<Self> {
        if l2 > l1 {
            return Err(domain!("row lengths must be non-increasing, got [{l1},{l2}]"));
        }
        Ok(Self { rows: (l1, l2) })
    }

    pub fn n(&self) -> usize {
        self.rows.0 + self.rows.1
    }

    /// Row difference `λ1 - λ2`, the boundary label of the matching disk space.
    pub fn label(&self) -> usize {
        self.rows.0 - self.rows.1
    }

    pub fn is_admissible(&self, ctx: &FusionContext) -> bool {
        self.label() <= ctx.max_label() as usize
    }

    /// Diagram of the sector matching `n` points with boundary label `m`.
    pub fn from_boundary(n: usize, m: usize) -> Result<Self> {
        if m > n || !(n + m).is_multiple_of(2) {
            return Err(domain!("no two-row diagram with {n} nodes and row difference {m}"));
        }
        Self::new((n + m) / 2, (n - m) / 2)
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.rows.0, self.rows.1)
    }
}

impl std::str::FromStr for YoungDiagram {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        let parse = |p: &str| p.parse::<usize>().map_err(|_| domain!("cannot parse diagram '{s}'"));
        match parts.as_slice() {
            [a] => Self::new(parse(a)?, 0),
            [a, b] => Self::new(parse(a)?, parse(b)?),
            _ => Err(domain!("cannot parse diagram '{s}'")),
        }
    }
}

/// All `(2, r)` diagrams with `n` nodes, ordered by `λ1`.
pub fn enumerate_diagrams(n: usize, ctx: &FusionContext) -> Vec<YoungDiagram> {
    (0..=n / 2)
        .rev()
        .map(|l2| YoungDiagram { rows: (n - l2, l2) })
        .filter(|d| d.is_admissible(ctx))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardTableau {
    path: Vec<Label>,
}

/// Outcome of swapping `i` and `i + 1` in a tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Swap {
    Admissible(StandardTableau),
    /// The swapped filling is a standard tableau but breaks the level condition.
    LevelViolation,
    /// The swapped filling is not standard (same row, or stacked in one column).
    NotStandard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialData {
    pub d: i64,
    pub alpha: f64,
    pub beta: f64,
}

impl StandardTableau {
    /// Build from a prefix label path, checking it is an admissible walk from 0.
    pub fn from_path(path: Vec<Label>, ctx: &FusionContext) -> Result<Self> {
        if path.first() != Some(&0) {
            return Err(domain!("fusion path must start at label 0"));
        }
        for w in path.windows(2) {
            if (w[0] as i32 - w[1] as i32).abs() != 1 {
                return Err(domain!("fusion path steps must be +-1: {:?}", path));
            }
        }
        if let Some(&bad) = path.iter().find(|&&m| m > ctx.max_label()) {
            return Err(domain!("label {bad} exceeds the level bound in {:?}", path));
        }
        Ok(Self { path })
    }

    /// Build from row contents (1-based entries), e.g. `[[1, 2], [3]]`.
    pub fn from_rows(rows: &[Vec<usize>], ctx: &FusionContext) -> Result<Self> {
        if rows.len() > 2 {
            return Err(domain!("at most two rows supported"));
        }
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut row_of = vec![usize::MAX; n + 1];
        for (r, row) in rows.iter().enumerate() {
            for w in row.windows(2) {
                if w[0] >= w[1] {
                    return Err(domain!("rows must increase: {:?}", rows));
                }
            }
            for &e in row {
                if e == 0 || e > n || row_of[e] != usize::MAX {
                    return Err(domain!("entries must be a permutation of 1..={n}"));
                }
                row_of[e] = r;
            }
        }
        let mut path = vec![0 as Label];
        let mut m: i64 = 0;
        for &r in row_of.iter().skip(1) {
            m += if r == 0 { 1 } else { -1 };
            if m < 0 {
                return Err(domain!("columns must increase: {:?}", rows));
            }
            path.push(m as Label);
        }
        Self::from_path(path, ctx)
    }

    pub fn n(&self) -> usize {
        self.path.len() - 1
    }

    pub fn path(&self) -> &[Label] {
        &self.path
    }

    pub fn diagram(&self) -> YoungDiagram {
        let n = self.n();
        let m = *self.path.last().unwrap() as usize;
        YoungDiagram {
            rows: ((n + m) / 2, (n - m) / 2),
        }
    }

    /// Row (0 or 1) holding entry `j` (1-based).
    pub fn row_of(&self, j: usize) -> usize {
        if self.path[j] > self.path[j - 1] {
            0
        } else {
            1
        }
    }

    /// 1-based (row, column) of entry `j`.
    pub fn position(&self, j: usize) -> (i64, i64) {
        let row = self.row_of(j);
        let col = (1..=j).filter(|&k| self.row_of(k) == row).count();
        (row as i64 + 1, col as i64)
    }

    /// Cell-assignment view: the entries of each row.
    pub fn rows(&self) -> [Vec<usize>; 2] {
        let mut rows = [Vec::new(), Vec::new()];
        for j in 1..=self.n() {
            rows[self.row_of(j)].push(j);
        }
        rows
    }

    /// `g_i`: swap entries `i` and `i + 1`.
    pub fn swap(&self, i: usize, ctx: &FusionContext) -> Swap {
        assert!(i >= 1 && i < self.n(), "generator index {i} out of range");
        let (prev, cur, next) = (self.path[i - 1] as i64, self.path[i] as i64, self.path[i + 1] as i64);
        if prev == next {
            let swapped = 2 * prev - cur;
            if swapped < 0 {
                Swap::NotStandard
            } else if swapped > ctx.max_label() as i64 {
                Swap::LevelViolation
            } else {
                let mut path = self.path.clone();
                path[i] = swapped as Label;
                Swap::Admissible(Self { path })
            }
        } else {
            Swap::NotStandard
        }
    }

    /// Axial distance of `i, i + 1` and the resulting projector coefficients.
    pub fn axial(&self, i: usize, ctx: &FusionContext) -> AxialData {
        assert!(i >= 1 && i < self.n(), "generator index {i} out of range");
        let (r1, c1) = self.position(i);
        let (r2, c2) = self.position(i + 1);
        let d = c1 - c2 - (r1 - r2);
        let alpha = ctx.qint(d + 1) / (ctx.qint(2) * ctx.qint(d));
        match self.swap(i, ctx) {
            Swap::Admissible(_) => AxialData {
                d,
                alpha,
                beta: (alpha * (1.0 - alpha)).max(0.0).sqrt(),
            },
            _ => {
                let snapped = if alpha.abs() < 0.5 { 0.0 } else { 1.0 };
                assert!(
                    (alpha - snapped).abs() < 1e-10,
                    "alpha = {alpha} for an unpaired tableau must be 0 or 1"
                );
                AxialData {
                    d,
                    alpha: snapped,
                    beta: 0.0,
                }
            }
        }
    }
}

/// The fusion path of a tableau: prefix row differences.
pub fn to_fusion_path(t: &StandardTableau) -> Vec<Label> {
    t.path.clone()
}

/// Admissible tableaux of shape `diagram`, ordered lexicographically by fusion path.
pub fn enumerate_tableaux(diagram: YoungDiagram, ctx: &FusionContext) -> Result<Vec<StandardTableau>> {
    if !diagram.is_admissible(ctx) {
        return Err(domain!("{diagram} is not a (2,{}) diagram", ctx.r()));
    }
    let n = diagram.n();
    let target = diagram.label() as i64;
    let max = ctx.max_label() as i64;
    let mut out = Vec::new();
    let mut path = vec![0 as Label];
    fn rec(path: &mut Vec<Label>, n: usize, target: i64, max: i64, out: &mut Vec<StandardTableau>) {
        let depth = path.len() - 1;
        let m = *path.last().unwrap() as i64;
        if depth == n {
            if m == target {
                out.push(StandardTableau { path: path.clone() });
            }
            return;
        }
        let remaining = (n - depth) as i64;
        // downward step first keeps the output lexicographic
        for next in [m - 1, m + 1] {
            if next < 0 || next > max || (next - target).abs() > remaining - 1 {
                continue;
            }
            path.push(next as Label);
            rec(path, n, target, max, out);
            path.pop();
        }
    }
    rec(&mut path, n, target, max, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0].path.cmp(&w[1].path) == Ordering::Less));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::disk_dimension;

    fn ctx5() -> FusionContext {
        FusionContext::r5()
    }

    #[test]
    fn diagrams() {
        let ctx = ctx5();
        let d6 = enumerate_diagrams(6, &ctx);
        assert_eq!(
            d6,
            vec![YoungDiagram::new(3, 3).unwrap(), YoungDiagram::new(4, 2).unwrap()]
        );
        // [3,0] has row difference 3 = r - 2 and matches the one-dimensional V_3^3
        assert_eq!(
            enumerate_diagrams(3, &ctx),
            vec![YoungDiagram::new(2, 1).unwrap(), YoungDiagram::new(3, 0).unwrap()]
        );
        for rr in 3..9 {
            let c = FusionContext::new(rr).unwrap();
            assert_eq!(enumerate_diagrams(1, &c), vec![YoungDiagram::new(1, 0).unwrap()]);
        }
        assert_eq!("4,2".parse::<YoungDiagram>().unwrap(), YoungDiagram::new(4, 2).unwrap());
        assert_eq!("[3,3]".parse::<YoungDiagram>().unwrap().label(), 0);
        assert!("2,3".parse::<YoungDiagram>().is_err());
    }

    #[test]
    fn tableau_counts() {
        let ctx = ctx5();
        let count = |a, b| {
            enumerate_tableaux(YoungDiagram::new(a, b).unwrap(), &ctx)
                .unwrap()
                .len()
        };
        assert_eq!(count(2, 1), 2);
        assert_eq!(count(3, 3), 5);
        assert_eq!(count(4, 2), 8);
        // one fewer than the unrestricted count at large r
        let big = FusionContext::new(50).unwrap();
        assert_eq!(
            enumerate_tableaux(YoungDiagram::new(4, 2).unwrap(), &big)
                .unwrap()
                .len(),
            9
        );
        assert!(enumerate_tableaux(YoungDiagram::new(6, 0).unwrap(), &ctx).is_err());
    }

    #[test]
    fn illegal_tableau_of_42() {
        let ctx = ctx5();
        let big = FusionContext::new(50).unwrap();
        let d = YoungDiagram::new(4, 2).unwrap();
        let legal = enumerate_tableaux(d, &ctx).unwrap();
        let all = enumerate_tableaux(d, &big).unwrap();
        let missing: Vec<_> = all
            .iter()
            .filter(|t| !legal.iter().any(|l| l.path() == t.path()))
            .collect();
        assert_eq!(missing.len(), 1);
        assert_eq!(missing[0].path(), &[0, 1, 2, 3, 4, 3, 2]);
        assert_eq!(missing[0].rows(), [vec![1, 2, 3, 4], vec![5, 6]]);
    }

    #[test]
    fn counts_match_dimensions() {
        for rr in [5, 7] {
            let ctx = FusionContext::new(rr).unwrap();
            for n in 1..=12 {
                for d in enumerate_diagrams(n, &ctx) {
                    let ts = enumerate_tableaux(d, &ctx).unwrap();
                    let dim = disk_dimension(n, d.label() as Label, &ctx).unwrap();
                    assert_eq!(ts.len() as u128, dim);
                }
            }
        }
    }

    #[test]
    fn fusion_paths() {
        let ctx = ctx5();
        let t = StandardTableau::from_rows(&[vec![1, 2], vec![3]], &ctx).unwrap();
        assert_eq!(to_fusion_path(&t), vec![0, 1, 2, 1]);
        let t = StandardTableau::from_rows(&[vec![1, 3], vec![2]], &ctx).unwrap();
        assert_eq!(to_fusion_path(&t), vec![0, 1, 0, 1]);
        let t = StandardTableau::from_rows(&[vec![1]], &ctx).unwrap();
        assert_eq!(to_fusion_path(&t), vec![0, 1]);
        assert!(StandardTableau::from_rows(&[vec![2], vec![1]], &ctx).is_err());
    }

    #[test]
    fn axial_examples() {
        let ctx = ctx5();
        let t = StandardTableau::from_rows(&[vec![1, 2], vec![3]], &ctx).unwrap();
        let a = t.axial(2, &ctx);
        assert_eq!(a.d, 2);
        // [3] / ([2][2]) with [3] = [2] at r = 5
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((a.alpha - 1.0 / golden).abs() < 1e-12);
        assert!((a.alpha - 0.6180339887498949).abs() < 1e-12);

        // 1, 2 in the same row
        let a = t.axial(1, &ctx);
        assert_eq!(a.d, -1);
        assert_eq!(a.alpha, 0.0);
        assert_eq!(a.beta, 0.0);

        // 1, 2 stacked in one column
        let t = StandardTableau::from_rows(&[vec![1, 3], vec![2]], &ctx).unwrap();
        let a = t.axial(1, &ctx);
        assert_eq!(a.d, 1);
        assert_eq!(a.alpha, 1.0);
    }

    #[test]
    fn projector_identity_and_involution() {
        for rr in [5, 7] {
            let ctx = FusionContext::new(rr).unwrap();
            for n in 2..=8 {
                for d in enumerate_diagrams(n, &ctx) {
                    for t in enumerate_tableaux(d, &ctx).unwrap() {
                        for i in 1..n {
                            let a = t.axial(i, &ctx);
                            assert!((a.alpha - a.alpha * a.alpha - a.beta * a.beta).abs() < 1e-12);
                            assert!((-1e-12..=1.0 + 1e-12).contains(&a.alpha));
                            assert!(a.beta >= 0.0);
                            if let Swap::Admissible(s) = t.swap(i, &ctx) {
                                assert_eq!(s.swap(i, &ctx), Swap::Admissible(t.clone()));
                                let b = s.axial(i, &ctx);
                                assert!((a.alpha + b.alpha - 1.0).abs() < 1e-12);
                                assert!((a.beta - b.beta).abs() < 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }
}
