use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::GateTarget;
use crate::error::{domain, Error, Result};
use crate::fusion::FusionContext;
use crate::jonesrep::{Block, BraidWord, SectorAction};
use crate::linalg::{c, identity, CMat, CVec};
use crate::tableaux::YoungDiagram;

const KERNEL_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-9;
/// Outcomes below this probability are never sampled and cannot be forced.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// Orthonormal kernel vectors of one block of paths sharing everything outside a triple.
#[derive(Debug, Clone)]
struct LocalKernel {
    indices: Vec<usize>,
    vectors: Vec<Vec<f64>>,
}

/// The qubit encoding of one sector whose strand count is a multiple of 3.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub k: usize,
    pub action: SectorAction,
    /// `e_2` of the `[2,1]` sector is `[[alpha0, beta0], [beta0, 1 - alpha0]]`.
    pub alpha0: f64,
    pub beta0: f64,
    /// Encoded `|0...0>`.
    pub psi0: CVec,
    /// Between-triple labels `m_3, m_6, ...` of the complementary vector.
    pub v_choice: Vec<u8>,
    leak: Vec<Vec<LocalKernel>>,
}

fn block_lookup(action: &SectorAction, j: usize) -> Vec<usize> {
    let mut out = vec![usize::MAX; action.dim()];
    for (b, blk) in action.blocks[j - 1].iter().enumerate() {
        match *blk {
            Block::Single { idx, .. } => out[idx] = b,
            Block::Pair { a, b: bb, .. } => {
                out[a] = b;
                out[bb] = b;
            }
        }
    }
    out
}

fn entry(action: &SectorAction, j: usize, lookup: &[usize], r: usize, col: usize) -> f64 {
    match action.blocks[j - 1][lookup[r]] {
        Block::Single { idx, alpha } => {
            if r == idx && col == idx {
                alpha
            } else {
                0.0
            }
        }
        Block::Pair { a, b, alpha, beta } => match (r == a, r == b, col == a, col == b) {
            (true, _, true, _) => alpha,
            (_, true, _, true) => 1.0 - alpha,
            (true, _, _, true) | (_, true, true, _) => beta,
            _ => 0.0,
        },
    }
}

impl Encoding {
    /// Encoding of `k` qubits in the boundary-0 sector `[3k/2, 3k/2]`.
    pub fn register(k: usize, ctx: &FusionContext) -> Result<Arc<Self>> {
        if k < 2 || !k.is_multiple_of(2) {
            return Err(domain!("register size k must be even and at least 2, got {k}"));
        }
        Ok(Arc::new(Self::new(YoungDiagram::new(3 * k / 2, 3 * k / 2)?, ctx)?))
    }

    pub fn new(diagram: YoungDiagram, ctx: &FusionContext) -> Result<Self> {
        let n = diagram.n();
        if n == 0 || !n.is_multiple_of(3) {
            return Err(domain!("{diagram} has {n} strands, not a multiple of 3"));
        }
        let k = n / 3;
        let local = SectorAction::new(YoungDiagram::new(2, 1)?, ctx)?;
        let (alpha0, beta0) = match local.blocks.get(1).and_then(|b| b.first()) {
            Some(&Block::Pair { alpha, beta, .. }) => (alpha, beta),
            _ => return Err(domain!("level r = {} has no 2-dimensional qubit space", ctx.r())),
        };
        let action = SectorAction::new(diagram, ctx)?;
        let dim = action.dim();
        let project = |v: &CVec| -> CVec { (1..=k).fold(v.clone(), |acc, i| action.apply_projector(3 * i - 2, &acc)) };
        let mut psi0 = None;
        for idx in 0..dim {
            let mut e = CVec::zeros(dim);
            e[idx] = c(1.0, 0.0);
            let p = project(&e);
            let norm = p.norm();
            if norm > KERNEL_TOL {
                psi0 = Some(p / c(norm, 0.0));
                break;
            }
        }
        let mut psi0 = psi0.ok_or_else(|| domain!("{diagram} holds no encoded |0...0>"))?;
        if let Some(first) = psi0.iter().find(|z| z.norm() > 1e-12).copied() {
            psi0 *= first.conj() / first.norm();
        }
        let lead = psi0.iter().position(|z| z.norm() > 1e-12).expect("unit vector");
        let path = action.basis[lead].path();
        let v_choice = (1..k).map(|i| path[3 * i]).collect();

        let mut leak = Vec::with_capacity(k);
        for i in 1..=k {
            let (j1, j2) = (3 * i - 2, 3 * i - 1);
            let (l1, l2) = (block_lookup(&action, j1), block_lookup(&action, j2));
            let mut groups: BTreeMap<(Vec<u8>, Vec<u8>), Vec<usize>> = BTreeMap::new();
            for (idx, t) in action.basis.iter().enumerate() {
                let p = t.path();
                groups
                    .entry((p[..=3 * i - 3].to_vec(), p[3 * i..].to_vec()))
                    .or_default()
                    .push(idx);
            }
            let mut kernels = Vec::new();
            for (_, g) in groups {
                let m = DMatrix::<f64>::from_fn(g.len(), g.len(), |a, b| {
                    entry(&action, j1, &l1, g[a], g[b]) + entry(&action, j2, &l2, g[a], g[b])
                });
                let eig = SymmetricEigen::new(m);
                let mut vectors = Vec::new();
                for (col, &lam) in eig.eigenvalues.iter().enumerate() {
                    if lam.abs() < KERNEL_TOL {
                        vectors.push(eig.eigenvectors.column(col).iter().copied().collect());
                    } else if lam < 1e-4 {
                        return Err(Error::Integrity(format!(
                            "label projector eigenvalue {lam:e} is neither 0 nor separated from it"
                        )));
                    }
                }
                if !vectors.is_empty() {
                    kernels.push(LocalKernel { indices: g, vectors });
                }
            }
            leak.push(kernels);
        }
        Ok(Self {
            k,
            action,
            alpha0,
            beta0,
            psi0,
            v_choice,
            leak,
        })
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    fn check_site(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.k {
            return Err(domain!("qubit {i} outside 1..={}", self.k));
        }
        Ok(())
    }

    /// Encoded basis state; `bits[0]` is qubit 1.
    pub fn basis_state(&self, bits: &[u8]) -> Result<CVec> {
        if bits.len() != self.k {
            return Err(domain!("{} bits for a {}-qubit encoding", bits.len(), self.k));
        }
        let mut v = self.psi0.clone();
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => {
                    let ev = self.action.apply_projector(3 * i + 2, &v);
                    v = (ev - &v * c(self.alpha0, 0.0)) / c(self.beta0, 0.0);
                }
                _ => return Err(domain!("bit value {b}")),
            }
        }
        Ok(v)
    }

    /// Columns are the encoded basis states in binary order, qubit 1 most significant.
    pub fn isometry(&self) -> Result<CMat> {
        let n = 1usize << self.k;
        let mut m = CMat::zeros(self.dim(), n);
        for x in 0..n {
            let bits: Vec<u8> = (0..self.k).map(|i| ((x >> (self.k - 1 - i)) & 1) as u8).collect();
            m.set_column(x, &self.basis_state(&bits)?);
        }
        Ok(m)
    }

    /// Projector onto label 3 of triple `i`.
    pub fn apply_label3(&self, i: usize, v: &CVec) -> Result<CVec> {
        self.check_site(i)?;
        let mut out = CVec::zeros(v.len());
        for kern in &self.leak[i - 1] {
            for vec in &kern.vectors {
                let coef: Complex64 = kern.indices.iter().zip(vec).map(|(&x, &w)| v[x] * w).sum();
                for (&x, &w) in kern.indices.iter().zip(vec) {
                    out[x] += coef * w;
                }
            }
        }
        Ok(out)
    }

    /// Rank of the label-3 projector of triple `i`.
    pub fn label3_rank(&self, i: usize) -> Result<usize> {
        self.check_site(i)?;
        Ok(self.leak[i - 1].iter().map(|k| k.vectors.len()).sum())
    }

    pub fn label3_dense(&self, i: usize) -> Result<CMat> {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for col in 0..d {
            let mut e = CVec::zeros(d);
            e[col] = c(1.0, 0.0);
            m.set_column(col, &self.apply_label3(i, &e)?);
        }
        Ok(m)
    }
}

/// `g (+) id` on the `[2,1]` sector, whose path basis is the encoded basis.
pub fn one_qubit_target(g: &CMat) -> Result<GateTarget> {
    if g.shape() != (2, 2) {
        return Err(domain!("one-qubit gate must be 2x2"));
    }
    GateTarget::single("[2,1]", g.clone())
}

/// `g` on the encoded two-qubit space, identity on its complement, in both `[3,3]` and `[4,2]`.
pub fn two_qubit_target(g: &CMat, ctx: &FusionContext) -> Result<GateTarget> {
    if g.shape() != (4, 4) {
        return Err(domain!("two-qubit gate must be 4x4"));
    }
    let mut sectors = Vec::new();
    for (a, b) in [(3, 3), (4, 2)] {
        let d = YoungDiagram::new(a, b)?;
        let enc = Encoding::new(d, ctx)?;
        let iota = enc.isometry()?;
        let block = &iota * g * iota.adjoint() + identity(enc.dim()) - &iota * iota.adjoint();
        sectors.push((d.to_string(), block));
    }
    GateTarget::new(sectors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementKind {
    Label,
    SigmaZ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub kind: MeasurementKind,
    pub site: usize,
    pub outcome: u8,
    pub probability: f64,
}

/// State of an encoded register.
#[derive(Debug, Clone)]
pub struct EncodedRegister {
    pub k: usize,
    pub state: CVec,
    pub enc: Arc<Encoding>,
}

/// Fresh register holding the bit string `bits` (qubit 1 first).
pub fn encode(bits: &[u8], ctx: &FusionContext) -> Result<EncodedRegister> {
    let enc = Encoding::register(bits.len(), ctx)?;
    EncodedRegister::from_bits(enc, bits)
}

impl EncodedRegister {
    pub fn from_bits(enc: Arc<Encoding>, bits: &[u8]) -> Result<Self> {
        let state = enc.basis_state(bits)?;
        Ok(Self { k: enc.k, state, enc })
    }

    /// Linear extension: `amplitudes` over the `2^k` basis states in binary order.
    pub fn from_amplitudes(enc: Arc<Encoding>, amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() != 1 << enc.k {
            return Err(domain!("{} amplitudes for {} qubits", amplitudes.len(), enc.k));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(domain!("amplitudes have norm {norm}"));
        }
        let iota = enc.isometry()?;
        let state = iota * CVec::from_column_slice(amplitudes);
        Ok(Self { k: enc.k, state, enc })
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    pub fn apply_braid(&self, w: &BraidWord) -> Result<Self> {
        let state = self.enc.action.apply_word(w, &self.state)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Integrity(format!("braid changed the norm to {norm}")));
        }
        Ok(Self {
            k: self.k,
            state,
            enc: self.enc.clone(),
        })
    }

    /// `(P(label 1), P(label 3))` for triple `i`.
    pub fn label_probabilities(&self, i: usize) -> Result<(f64, f64)> {
        let p3 = self.enc.apply_label3(i, &self.state)?.norm_squared().clamp(0.0, 1.0);
        Ok((1.0 - p3, p3))
    }

    fn collapse(&self, v: CVec, p: f64) -> Self {
        Self {
            k: self.k,
            state: v / c(p.sqrt(), 0.0),
            enc: self.enc.clone(),
        }
    }

    /// Post-measurement state for a prescribed label outcome.
    pub fn project_label(&self, i: usize, label: u8) -> Result<(MeasurementRecord, Self)> {
        let p3v = self.enc.apply_label3(i, &self.state)?;
        let v = match label {
            3 => p3v,
            1 => &self.state - p3v,
            _ => return Err(domain!("triple labels are 1 or 3, not {label}")),
        };
        let p = v.norm_squared();
        if p < MIN_PROBABILITY {
            return Err(domain!("label {label} on triple {i} has probability {p:e}"));
        }
        let rec = MeasurementRecord {
            kind: MeasurementKind::Label,
            site: i,
            outcome: label,
            probability: p,
        };
        Ok((rec, self.collapse(v, p)))
    }

    pub fn measure_label<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Result<(MeasurementRecord, Self)> {
        let (p1, _) = self.label_probabilities(i)?;
        let u: f64 = rng.random();
        let label = if u < p1 { 1 } else { 3 };
        self.project_label(i, label)
    }

    /// `(P(0), P(1))` for qubit `i`; the triple must not have leaked.
    pub fn sigma_z_probabilities(&self, i: usize) -> Result<(f64, f64)> {
        let (_, p3) = self.label_probabilities(i)?;
        if p3 > MIN_PROBABILITY {
            return Err(Error::Precondition(format!(
                "triple {i} has label-3 weight {p3:e}; measure its label first"
            )));
        }
        let p0 = self.enc.action.apply_projector(3 * i - 2, &self.state).norm_squared();
        Ok((p0, (1.0 - p0).max(0.0)))
    }

    pub fn measure_sigma_z<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Result<(MeasurementRecord, Self)> {
        let (p0, p1) = self.sigma_z_probabilities(i)?;
        let u: f64 = rng.random();
        let bit = if u < p0 { 0 } else { 1 };
        let e = self.enc.action.apply_projector(3 * i - 2, &self.state);
        let (v, p) = if bit == 0 { (e, p0) } else { (&self.state - e, p1) };
        let rec = MeasurementRecord {
            kind: MeasurementKind::SigmaZ,
            site: i,
            outcome: bit,
            probability: p,
        };
        Ok((rec, self.collapse(v, p)))
    }
}
