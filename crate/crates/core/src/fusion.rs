//! Labels, fusion rules and dimensions of disk spaces.
//!
//! Labels are `0..=r-2` with `0` the trivial label. A disk with `n` marked points
//! labelled `1` and boundary label `l` has a space whose dimension equals the number
//! of walks `0 -> l` of length `n` on the path graph over the labels (each marked
//! point fuses with label `1`, which moves the running label by one step).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

pub type Label = u8;

/// The level `r` and everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionContext {
    r: u32,
}

impl FusionContext {
    pub fn new(r: u32) -> Result<Self> {
        if r < 3 {
            return Err(domain!("level r must be at least 3, got {r}"));
        }
        if r > 200 {
            return Err(domain!("level r = {r} is beyond the supported range (<= 200)"));
        }
        Ok(Self { r })
    }

    /// The fifth-root-of-unity theory.
    pub fn r5() -> Self {
        Self { r: 5 }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `q = exp(2 pi i / r)`.
    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / self.r as f64)
    }

    /// Largest label, `r - 2`.
    pub fn max_label(&self) -> Label {
        (self.r - 2) as Label
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        0..=self.max_label()
    }

    pub fn num_labels(&self) -> usize {
        self.max_label() as usize + 1
    }

    /// Labels are self-dual.
    pub fn dual(&self, label: Label) -> Label {
        label
    }

    pub fn check_label(&self, label: Label) -> Result<()> {
        if label > self.max_label() {
            Err(domain!("label {label} outside 0..={}", self.max_label()))
        } else {
            Ok(())
        }
    }

    /// `[k] = sin(k pi / r) / sin(pi / r)`.
    pub fn qint(&self, k: i64) -> f64 {
        let r = self.r as f64;
        (k as f64 * PI / r).sin() / (PI / r).sin()
    }

    pub fn quantum_integer(&self, k: i64) -> QuantumInteger {
        QuantumInteger { k, value: self.qint(k) }
    }

    /// `beta = [2]^2 = 4 cos^2(pi / r)`.
    pub fn beta(&self) -> f64 {
        let c = (PI / self.r as f64).cos();
        4.0 * c * c
    }
}

impl Default for FusionContext {
    fn default() -> Self {
        Self::r5()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumInteger {
    pub k: i64,
    pub value: f64,
}

/// Whether the three-punctured sphere with labels `a, b, c` carries a nonzero space.
pub fn admissible(a: Label, b: Label, c: Label, ctx: &FusionContext) -> Result<bool> {
    for l in [a, b, c] {
        ctx.check_label(l)?;
    }
    let (a, b, c) = (a as u32, b as u32, c as u32);
    let even = (a + b + c) % 2 == 0;
    let triangle = a <= b + c && b <= a + c && c <= a + b;
    let level = a + b + c <= 2 * (ctx.r() - 2);
    Ok(even && triangle && level)
}

/// Walk counts `0 -> l` of every length up to `n`; row `j` holds the counts after `j` steps.
pub fn walk_table(n: usize, ctx: &FusionContext) -> Result<Vec<Vec<u128>>> {
    let width = ctx.num_labels();
    let mut rows = Vec::with_capacity(n + 1);
    let mut cur = vec![0u128; width];
    cur[0] = 1;
    rows.push(cur.clone());
    for _ in 0..n {
        let mut next = vec![0u128; width];
        for (l, &count) in cur.iter().enumerate() {
            if count == 0 {
                continue;
            }
            if l > 0 {
                next[l - 1] = next[l - 1]
                    .checked_add(count)
                    .ok_or_else(|| domain!("dimension overflows u128"))?;
            }
            if l + 1 < width {
                next[l + 1] = next[l + 1]
                    .checked_add(count)
                    .ok_or_else(|| domain!("dimension overflows u128"))?;
            }
        }
        rows.push(next.clone());
        cur = next;
    }
    Ok(rows)
}

/// Dimension of the space of the disk with `n` points labelled 1 and boundary `boundary`.
pub fn disk_dimension(n: usize, boundary: Label, ctx: &FusionContext) -> Result<u128> {
    ctx.check_label(boundary)?;
    let table = walk_table(n, ctx)?;
    Ok(table[n][boundary as usize])
}

/// Dimensions indexed by the labels on a collection of cut curves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorTable {
    pub entries: BTreeMap<Vec<Label>, u128>,
}

impl SectorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, labels: Vec<Label>, dim: u128) {
        self.entries.insert(labels, dim);
    }

    pub fn get(&self, labels: &[Label]) -> u128 {
        self.entries.get(labels).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.entries.values().sum()
    }

    /// Table of `dim V(n points | l)` for every label `l`, keyed by `[l]`.
    pub fn disk(n: usize, ctx: &FusionContext) -> Result<Self> {
        let table = walk_table(n, ctx)?;
        let mut out = Self::new();
        for l in ctx.labels() {
            out.insert(vec![l], table[n][l as usize]);
        }
        Ok(out)
    }
}

/// Gluing along a cut curve: per-label product of the two sides' dimensions.
pub fn glue_decompose(inner: &SectorTable, outer: &SectorTable) -> Result<SectorTable> {
    let inner_keys: Vec<_> = inner.entries.keys().collect();
    let outer_keys: Vec<_> = outer.entries.keys().collect();
    if inner_keys != outer_keys {
        return Err(domain!(
            "cut-curve label sets differ: {:?} vs {:?}",
            inner_keys,
            outer_keys
        ));
    }
    let mut out = SectorTable::new();
    for (labels, &d_in) in &inner.entries {
        let d_out = outer.entries[labels];
        let prod = d_in
            .checked_mul(d_out)
            .ok_or_else(|| domain!("dimension overflows u128"))?;
        out.insert(labels.clone(), prod);
    }
    Ok(out)
}

/// Decomposition of the space of two adjacent point triples with outer boundary `boundary`,
/// keyed `[boundary, l1, l2]` by the labels around each triple.
pub fn pair_decomposition(boundary: Label, ctx: &FusionContext) -> Result<SectorTable> {
    ctx.check_label(boundary)?;
    let triple = SectorTable::disk(3, ctx)?;
    let mut out = SectorTable::new();
    for (k1, &d1) in &triple.entries {
        for (k2, &d2) in &triple.entries {
            let (l1, l2) = (k1[0], k2[0]);
            if d1 == 0 || d2 == 0 || !admissible(l1, l2, boundary, ctx)? {
                continue;
            }
            out.insert(vec![boundary, l1, l2], d1 * d2);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u32) -> FusionContext {
        FusionContext::new(n).unwrap()
    }

    #[test]
    fn context_basics() {
        let ctx = r(5);
        let q = ctx.q();
        assert!((q.norm() - 1.0).abs() < 1e-15);
        assert!((q.powu(5) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((q - Complex64::new(1.0, 0.0)).norm() > 0.1);
        assert_eq!(ctx.labels().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(ctx.dual(2), 2);
        assert!(FusionContext::new(2).is_err());
    }

    #[test]
    fn quantum_integer_identities() {
        for rr in 3..12 {
            let ctx = r(rr);
            assert!((ctx.qint(1) - 1.0).abs() < 1e-14);
            assert!((ctx.qint(2).powi(2) - ctx.beta()).abs() < 1e-12);
            for k in -10..10 {
                assert!((ctx.qint(-k) + ctx.qint(k)).abs() < 1e-12);
                assert!((ctx.qint(rr as i64 - k) - ctx.qint(k)).abs() < 1e-12);
            }
        }
        // [3] = q + q^-1 + 1
        let ctx = r(5);
        let q = ctx.q();
        assert!((ctx.qint(3) - (q + q.conj() + 1.0).re).abs() < 1e-14);
        assert_eq!(ctx.quantum_integer(0).value, 0.0);
    }

    #[test]
    fn admissibility_examples() {
        let ctx = r(5);
        assert!(admissible(0, 3, 3, &ctx).unwrap());
        assert!(!admissible(0, 1, 3, &ctx).unwrap());
        assert!(!admissible(3, 3, 2, &ctx).unwrap());
        assert!(admissible(1, 1, 2, &ctx).unwrap());
        assert!(admissible(1, 3, 2, &ctx).unwrap());
        assert!(admissible(4, 0, 0, &ctx).is_err());
    }

    #[test]
    fn dimension_examples() {
        let ctx = r(5);
        assert_eq!(disk_dimension(3, 1, &ctx).unwrap(), 2);
        assert_eq!(disk_dimension(3, 3, &ctx).unwrap(), 1);
        assert_eq!(disk_dimension(6, 0, &ctx).unwrap(), 5);
        assert_eq!(disk_dimension(6, 2, &ctx).unwrap(), 8);
        assert_eq!(disk_dimension(12, 0, &ctx).unwrap(), 89);
        assert_eq!(disk_dimension(0, 0, &ctx).unwrap(), 1);
        assert!(disk_dimension(3, 4, &ctx).is_err());
    }

    #[test]
    fn recurrence_and_parity() {
        for rr in [4, 5, 7] {
            let ctx = r(rr);
            for n in 1..=14 {
                for l in ctx.labels() {
                    let d = disk_dimension(n, l, &ctx).unwrap();
                    let mut expect = 0;
                    for lp in ctx.labels() {
                        if (lp as i32 - l as i32).abs() == 1 {
                            expect += disk_dimension(n - 1, lp, &ctx).unwrap();
                        }
                    }
                    assert_eq!(d, expect);
                    if (n + l as usize) % 2 == 1 {
                        assert_eq!(d, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn gluing_consistency() {
        let ctx = r(5);
        for n in 0..=12 {
            let whole = disk_dimension(n, 0, &ctx).unwrap();
            for n1 in 0..=n {
                let left = SectorTable::disk(n1, &ctx).unwrap();
                let right = SectorTable::disk(n - n1, &ctx).unwrap();
                let glued = glue_decompose(&left, &right).unwrap();
                assert_eq!(glued.total(), whole, "n = {n}, split {n1}");
            }
        }
        let inner = SectorTable::disk(3, &ctx).unwrap();
        let glued = glue_decompose(&inner, &inner).unwrap();
        assert_eq!(glued.get(&[1]), 4);
        assert_eq!(glued.get(&[3]), 1);
        assert_eq!(glued.total(), 5);
    }

    #[test]
    fn glue_against_zero_and_mismatch() {
        let ctx = r(5);
        let t = SectorTable::disk(4, &ctx).unwrap();
        let mut zero = SectorTable::new();
        for l in ctx.labels() {
            zero.insert(vec![l], 0);
        }
        assert_eq!(glue_decompose(&t, &zero).unwrap().total(), 0);
        let other = SectorTable::disk(4, &r(7)).unwrap();
        assert!(glue_decompose(&t, &other).is_err());
    }

    #[test]
    fn two_qubit_decomposition() {
        let ctx = r(5);
        let v0 = pair_decomposition(0, &ctx).unwrap();
        assert_eq!(v0.entries.len(), 2);
        assert_eq!(v0.get(&[0, 1, 1]), 4);
        assert_eq!(v0.get(&[0, 3, 3]), 1);
        let v2 = pair_decomposition(2, &ctx).unwrap();
        assert_eq!(v2.entries.len(), 3);
        assert_eq!(v2.get(&[2, 1, 1]), 4);
        assert_eq!(v2.get(&[2, 1, 3]), 2);
        assert_eq!(v2.get(&[2, 3, 1]), 2);
        assert_eq!(v0.total(), disk_dimension(6, 0, &ctx).unwrap());
        assert_eq!(v2.total(), disk_dimension(6, 2, &ctx).unwrap());
    }
}
