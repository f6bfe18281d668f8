//! Temperley-Lieb-Jones projectors and the Jones representation of braid groups.
//!
//! Each sector is built on the admissible tableaux of one `(2, r)` diagram, ordered
//! lexicographically by fusion path. In that basis every projector `e_i` is made of
//! `1x1` blocks (`0` or `1`) and `2x2` blocks `[[a, b], [b, 1 - a]]`, and the braid
//! generator is `rho(sigma_i) = q - (1 + q) e_i`.
//!
//! [`SectorAction`] keeps only the block structure, so it scales to registers whose
//! dimension rules out dense matrices. [`SectorRep`] adds the dense matrices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fusion::FusionContext;
use crate::linalg::{self, c, identity, op_norm, CMat, CVec, ONE};
use crate::tableaux::{enumerate_tableaux, StandardTableau, Swap, YoungDiagram};

/// Construction-time tolerance on the defining identities.
pub const BUILD_TOL: f64 = 1e-10;
/// Pass threshold of [`verify_relations`].
pub const RELATION_TOL: f64 = 1e-9;
/// Rounding budget charged per matrix multiplication when evaluating long words.
pub const BUDGET_PER_MULT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Block {
    Single { idx: usize, alpha: f64 },
    Pair { a: usize, b: usize, alpha: f64, beta: f64 },
}

/// Block structure of the projectors of one sector.
#[derive(Debug, Clone)]
pub struct SectorAction {
    pub diagram: YoungDiagram,
    pub ctx: FusionContext,
    pub basis: Vec<StandardTableau>,
    /// `blocks[i - 1]` describes `e_i`.
    pub blocks: Vec<Vec<Block>>,
}

impl SectorAction {
    pub fn new(diagram: YoungDiagram, ctx: &FusionContext) -> Result<Self> {
        let basis = enumerate_tableaux(diagram, ctx)?;
        let n = diagram.n();
        let mut blocks = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            let mut gen = Vec::new();
            for (idx, t) in basis.iter().enumerate() {
                let ax = t.axial(i, ctx);
                match t.swap(i, ctx) {
                    Swap::Admissible(partner) => {
                        let pidx = basis.binary_search(&partner).expect("swapped tableau is admissible");
                        if idx < pidx {
                            gen.push(Block::Pair {
                                a: idx,
                                b: pidx,
                                alpha: ax.alpha,
                                beta: ax.beta,
                            });
                        }
                    }
                    _ => gen.push(Block::Single { idx, alpha: ax.alpha }),
                }
            }
            blocks.push(gen);
        }
        Ok(Self {
            diagram,
            ctx: *ctx,
            basis,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_strands(&self) -> usize {
        self.diagram.n()
    }

    pub fn index_of(&self, path: &[u8]) -> Option<usize> {
        self.basis.binary_search_by(|t| t.path().cmp(path)).ok()
    }

    /// `e_i v`.
    pub fn apply_projector(&self, i: usize, v: &CVec) -> CVec {
        let mut out = CVec::zeros(v.len());
        for blk in &self.blocks[i - 1] {
            match *blk {
                Block::Single { idx, alpha } => out[idx] = v[idx] * alpha,
                Block::Pair { a, b, alpha, beta } => {
                    out[a] = v[a] * alpha + v[b] * beta;
                    out[b] = v[a] * beta + v[b] * (1.0 - alpha);
                }
            }
        }
        out
    }

    /// `rho(sigma_{|letter|})^{sign}` applied in place.
    pub fn apply_letter(&self, letter: i32, v: &mut CVec) {
        let i = letter.unsigned_abs() as usize;
        let q = if letter > 0 { self.ctx.q() } else { self.ctx.q().conj() };
        let ev = self.apply_projector(i, v);
        // q - (1 + q) e
        for k in 0..v.len() {
            v[k] = v[k] * q - ev[k] * (ONE + q);
        }
    }

    /// `rho(w) v`; the last letter acts first.
    pub fn apply_word(&self, w: &BraidWord, v: &CVec) -> Result<CVec> {
        if w.n_strands != self.n_strands() {
            return Err(domain!(
                "word on {} strands applied to a {}-strand sector",
                w.n_strands,
                self.n_strands()
            ));
        }
        let mut out = v.clone();
        for &l in w.letters.iter().rev() {
            self.apply_letter(l, &mut out);
        }
        Ok(out)
    }

    pub fn dense_projector(&self, i: usize) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for blk in &self.blocks[i - 1] {
            match *blk {
                Block::Single { idx, alpha } => m[(idx, idx)] = c(alpha, 0.0),
                Block::Pair { a, b, alpha, beta } => {
                    m[(a, a)] = c(alpha, 0.0);
                    m[(a, b)] = c(beta, 0.0);
                    m[(b, a)] = c(beta, 0.0);
                    m[(b, b)] = c(1.0 - alpha, 0.0);
                }
            }
        }
        m
    }
}

/// One irreducible sector of the Jones representation with dense matrices.
#[derive(Debug, Clone)]
pub struct SectorRep {
    pub diagram: YoungDiagram,
    pub ctx: FusionContext,
    pub dim: usize,
    pub projectors: Vec<CMat>,
    pub generators: Vec<CMat>,
}

/// Dense sectors above this dimension are refused; use [`SectorAction`] instead.
pub const DENSE_LIMIT: usize = 2048;

pub fn build_sector(diagram: YoungDiagram, ctx: &FusionContext) -> Result<SectorRep> {
    if !diagram.is_admissible(ctx) {
        return Err(domain!("{diagram} is not a (2,{}) diagram", ctx.r()));
    }
    let action = SectorAction::new(diagram, ctx)?;
    if action.dim() > DENSE_LIMIT {
        return Err(Error::Resource(format!(
            "sector {diagram} has dimension {} > {DENSE_LIMIT}",
            action.dim()
        )));
    }
    let projectors: Vec<CMat> = (1..diagram.n()).map(|i| action.dense_projector(i)).collect();
    let rep = SectorRep::from_projectors(diagram, ctx, projectors);
    for (k, e) in rep.projectors.iter().enumerate() {
        let res = op_norm(&(e * e - e)).max(op_norm(&(e.adjoint() - e)));
        if res > BUILD_TOL {
            return Err(Error::Integrity(format!(
                "e_{} of {diagram} is not a projector (residual {res:e})",
                k + 1
            )));
        }
    }
    Ok(rep)
}

impl SectorRep {
    /// Assemble from projector matrices; generators follow `q - (1 + q) e_i`.
    pub fn from_projectors(diagram: YoungDiagram, ctx: &FusionContext, projectors: Vec<CMat>) -> Self {
        let dim = projectors.first().map_or_else(
            || enumerate_tableaux(diagram, ctx).map(|b| b.len()).unwrap_or(0),
            |m| m.nrows(),
        );
        let q = ctx.q();
        let generators = projectors.iter().map(|e| identity(dim) * q - e * (ONE + q)).collect();
        Self {
            diagram,
            ctx: *ctx,
            dim,
            projectors,
            generators,
        }
    }

    pub fn n_strands(&self) -> usize {
        self.diagram.n()
    }

    /// `rho(sigma_|letter|)^{sign}`; inverses are adjoints.
    pub fn letter_matrix(&self, letter: i32) -> CMat {
        let g = &self.generators[letter.unsigned_abs() as usize - 1];
        if letter > 0 {
            g.clone()
        } else {
            g.adjoint()
        }
    }
}

/// A word in the braid generators: `+i` is `sigma_i`, `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    pub n_strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n_strands: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= n_strands {
                return Err(domain!("letter {l} invalid on {n_strands} strands"));
            }
        }
        Ok(Self { n_strands, letters })
    }

    pub fn empty(n_strands: usize) -> Self {
        Self {
            n_strands,
            letters: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            n_strands: self.n_strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `self * other`: as operators, `other` acts first.
    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.n_strands != other.n_strands {
            return Err(domain!("strand counts differ"));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self {
            n_strands: self.n_strands,
            letters,
        })
    }

    /// Re-index onto a larger braid group, moving strand `j` to `j + offset`.
    pub fn embed(&self, offset: usize, n_strands: usize) -> Result<Self> {
        if self.n_strands + offset > n_strands {
            return Err(domain!(
                "cannot place {} strands at offset {offset} in {n_strands}",
                self.n_strands
            ));
        }
        let letters = self
            .letters
            .iter()
            .map(|&l| l.signum() * (l.abs() + offset as i32))
            .collect();
        Ok(Self { n_strands, letters })
    }

    pub fn power(&self, k: usize) -> Self {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Self {
            n_strands: self.n_strands,
            letters,
        }
    }

    /// Sum of signs.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| format!("{l:+}")).collect();
        write!(f, "B{}[{}]", self.n_strands, s.join(" "))
    }
}

/// Ordered product of generator images.
pub fn evaluate(rep: &SectorRep, w: &BraidWord) -> Result<CMat> {
    if w.n_strands != rep.n_strands() {
        return Err(domain!(
            "word on {} strands, sector {} has {}",
            w.n_strands,
            rep.diagram,
            rep.n_strands()
        ));
    }
    let mut out = identity(rep.dim);
    for &l in &w.letters {
        out *= rep.letter_matrix(l);
    }
    Ok(out)
}

/// Accumulated rounding allowance for a word of the given length.
pub fn evaluation_budget(len: usize) -> f64 {
    (len.max(1)) as f64 * BUDGET_PER_MULT
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationReport {
    pub diagram: String,
    pub r: u32,
    pub dim: usize,
    pub idempotent: f64,
    pub hermitian: f64,
    pub adjacent_tlj: f64,
    pub far_commutation: f64,
    pub braid_adjacent: f64,
    pub braid_far: f64,
    pub unitarity: f64,
    pub max_residual: f64,
    pub budget_per_mult: f64,
    pub pass: bool,
}

/// Operator-norm residuals of every defining relation.
pub fn verify_relations(rep: &SectorRep) -> RelationReport {
    let e = &rep.projectors;
    let g = &rep.generators;
    let m = e.len();
    let beta_inv = 1.0 / rep.ctx.beta();
    let mut idem: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut adj: f64 = 0.0;
    let mut far: f64 = 0.0;
    let mut badj: f64 = 0.0;
    let mut bfar: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for i in 0..m {
        idem = idem.max(op_norm(&(&e[i] * &e[i] - &e[i])));
        herm = herm.max(op_norm(&(e[i].adjoint() - &e[i])));
        unit = unit.max(linalg::unitarity_residual(&g[i]));
        for j in 0..m {
            let gap = i.abs_diff(j);
            if gap == 1 {
                let lhs = &e[i] * &e[j] * &e[i];
                adj = adj.max(op_norm(&(lhs - &e[i] * c(beta_inv, 0.0))));
                let l = &g[i] * &g[j] * &g[i];
                let r = &g[j] * &g[i] * &g[j];
                badj = badj.max(op_norm(&(l - r)));
            } else if gap >= 2 {
                far = far.max(op_norm(&(&e[i] * &e[j] - &e[j] * &e[i])));
                bfar = bfar.max(op_norm(&(&g[i] * &g[j] - &g[j] * &g[i])));
            }
        }
    }
    let max_residual = [idem, herm, adj, far, badj, bfar, unit].into_iter().fold(0.0, f64::max);
    RelationReport {
        diagram: rep.diagram.to_string(),
        r: rep.ctx.r(),
        dim: rep.dim,
        idempotent: idem,
        hermitian: herm,
        adjacent_tlj: adj,
        far_commutation: far,
        braid_adjacent: badj,
        braid_far: bfar,
        unitarity: unit,
        max_residual,
        budget_per_mult: BUDGET_PER_MULT,
        pass: max_residual < RELATION_TOL,
    }
}

/// Eigenvalue multiplicities of one generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub minus_one: usize,
    pub q: usize,
}

pub fn spectrum(rep: &SectorRep, i: usize) -> Result<Spectrum> {
    if i == 0 || i > rep.generators.len() {
        return Err(domain!("generator index {i} out of range"));
    }
    let q = rep.ctx.q();
    let minus = Complex64::new(-1.0, 0.0);
    let (_, eig) = linalg::normal_eigen(&rep.generators[i - 1]);
    let mut out = Spectrum { minus_one: 0, q: 0 };
    for z in eig {
        if (z - minus).norm() < RELATION_TOL {
            out.minus_one += 1;
        } else if (z - q).norm() < RELATION_TOL {
            out.q += 1;
        } else {
            return Err(Error::Integrity(format!(
                "eigenvalue {z} of sigma_{i} is neither -1 nor q"
            )));
        }
    }
    Ok(out)
}
