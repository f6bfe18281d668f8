//! Numerical certificates that a braid-group image is irreducible and dense.
//!
//! Irreducibility is the statement that the commutant of the generators is the
//! scalars. Density in `SU(m)` (or a product of such groups) is certified at the Lie
//! algebra level: the real span of the traceless generator logs, closed under
//! commutators, must reach the full dimension `m^2 - 1` per block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::jonesrep::{spectrum, SectorRep};
use crate::linalg::{self, identity, normal_eigen, phase_half_open, straddle_ratio, CMat, CVec, I};

/// Relative singular-value threshold for rank and nullity decisions.
pub const RANK_TOL: f64 = 1e-8;
/// Required ratio between the singular values straddling a rank cut.
pub const GAP_RATIO: f64 = 10.0;
/// Eigenphases this close to `-pi` are read as exactly `-1` and mapped to `+pi`.
pub const BRANCH_SNAP: f64 = 1e-9;
/// Eigenphases within this distance of `-pi` (but outside the snap window) are ambiguous.
pub const BRANCH_GUARD: f64 = 1e-6;
const MAX_ROUNDS: usize = 200;

/// Dimension of `{X : X g = g X for every generator g}`.
pub fn commutant_dimension(generators: &[CMat]) -> Result<usize> {
    let m = generators.first().ok_or_else(|| domain!("no generators"))?.nrows();
    let mm = m * m;
    // vec(X g - g X) = (g^T (x) I - I (x) g) vec(X), column-major vec
    let mut stacked = CMat::zeros(generators.len() * mm, mm);
    for (k, g) in generators.iter().enumerate() {
        if g.nrows() != m || g.ncols() != m {
            return Err(domain!("generators have mismatched shapes"));
        }
        let block = g.transpose().kronecker(&identity(m)) - identity(m).kronecker(g);
        stacked.view_mut((k * mm, 0), (mm, mm)).copy_from(&block);
    }
    let (null, ratio) = linalg::nullity(&stacked, RANK_TOL);
    if ratio < GAP_RATIO {
        return Err(Error::Integrity(format!(
            "commutant threshold is ill-conditioned (straddling ratio {ratio:.3})"
        )));
    }
    Ok(null)
}

/// Traceless skew-Hermitian `X` with `exp(X) e^{i phi} = U`, eigenphases in `(-pi, pi]`.
pub fn principal_log(u: &CMat) -> Result<CMat> {
    if !u.is_square() {
        return Err(domain!("principal_log needs a square matrix"));
    }
    let res = linalg::unitarity_residual(u);
    if res > 1e-9 {
        return Err(domain!("matrix is not unitary (residual {res:e})"));
    }
    let (q, eig) = normal_eigen(u);
    let mut phases = Vec::with_capacity(eig.len());
    for z in eig {
        let mut t = phase_half_open(z.arg());
        let from_cut = t + std::f64::consts::PI;
        if from_cut <= BRANCH_SNAP {
            t = std::f64::consts::PI;
        } else if from_cut <= BRANCH_GUARD {
            return Err(domain!(
                "eigenphase {t} sits on the branch cut at -pi (distance {from_cut:e})"
            ));
        }
        phases.push(I * t);
    }
    let d = CMat::from_diagonal(&CVec::from_vec(phases));
    let x = &q * d * q.adjoint();
    let x = (&x - x.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(linalg::traceless(&x))
}

/// Check the two-eigenvalue precondition: every generator has both eigenvalues
/// `-1` and `q`, and their ratio is not `+-1`.
pub fn check_eigenvalue_ratio(rep: &SectorRep) -> Result<()> {
    let q = rep.ctx.q();
    let ratio = -q.conj();
    if (ratio - 1.0).norm() < 1e-9 || (ratio + 1.0).norm() < 1e-9 {
        return Err(domain!("eigenvalue ratio -1/q is +-1"));
    }
    for i in 1..=rep.generators.len() {
        let s = spectrum(rep, i)?;
        if s.minus_one == 0 || s.q == 0 {
            return Err(domain!("sigma_{i} of {} has a single eigenvalue ({s:?})", rep.diagram));
        }
    }
    Ok(())
}

/// Traceless logs of the generator images of a sector.
pub fn generator_logs(rep: &SectorRep) -> Result<Vec<CMat>> {
    rep.generators.iter().map(principal_log).collect()
}

/// A block-diagonal matrix stored block by block.
pub type BlockMatrix = Vec<CMat>;

fn to_real(x: &BlockMatrix) -> Vec<f64> {
    let mut out = Vec::new();
    for b in x {
        for z in b.iter() {
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

fn from_real(v: &[f64], dims: &[usize]) -> BlockMatrix {
    let mut off = 0;
    dims.iter()
        .map(|&m| {
            let b = CMat::from_iterator(
                m,
                m,
                (0..m * m).map(|k| Complex64::new(v[off + 2 * k], v[off + 2 * k + 1])),
            );
            off += 2 * m * m;
            b
        })
        .collect()
}

fn bracket(x: &BlockMatrix, y: &BlockMatrix) -> BlockMatrix {
    x.iter().zip(y).map(|(a, b)| a * b - b * a).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonalise `v` against `basis` (two passes) and return the residual.
fn residual(basis: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let p = dot(b, &r);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
    }
    r
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieBasis {
    pub block_dims: Vec<usize>,
    #[serde(skip)]
    pub elements: Vec<BlockMatrix>,
    pub rank: usize,
    pub ceiling: usize,
    /// Singular values of the span of the basis and all its brackets, around the cut.
    pub singular_tail: Vec<f64>,
    pub smallest_retained: f64,
    pub gap_ratio: f64,
    pub rounds: usize,
}

impl LieBasis {
    pub fn ambient_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }
}

/// Real Lie algebra generated by skew-Hermitian traceless seeds.
///
/// New commutators are adjoined in a fixed order (pairs `(i, j)`, `i < j`, by index),
/// so the result is deterministic given the seed order.
pub fn lie_closure(seeds: &[BlockMatrix], max_dim: usize) -> Result<LieBasis> {
    let first = seeds.first().ok_or_else(|| domain!("no seeds"))?;
    let dims: Vec<usize> = first.iter().map(|b| b.nrows()).collect();
    for s in seeds {
        let d: Vec<usize> = s.iter().map(|b| b.nrows()).collect();
        if d != dims {
            return Err(domain!("seeds have mismatched block shapes"));
        }
    }
    let ceiling: usize = dims.iter().map(|m| m * m - 1).sum();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut elements: Vec<BlockMatrix> = Vec::new();
    let push = |v: Vec<f64>, basis: &mut Vec<Vec<f64>>, elements: &mut Vec<BlockMatrix>| {
        let scale = dot(&v, &v).sqrt();
        if scale < 1e-12 {
            return false;
        }
        let r = residual(basis, &v);
        let norm = dot(&r, &r).sqrt();
        if norm <= RANK_TOL * scale.max(1.0) {
            return false;
        }
        let unit: Vec<f64> = r.iter().map(|x| x / norm).collect();
        elements.push(from_real(&unit, &dims));
        basis.push(unit);
        true
    };
    for s in seeds {
        if basis.len() >= max_dim {
            break;
        }
        push(to_real(s), &mut basis, &mut elements);
    }
    if basis.is_empty() {
        return Err(domain!("all seeds vanish"));
    }
    let mut done = 0;
    let mut rounds = 0;
    while done < basis.len() && basis.len() < max_dim {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::Integrity(format!(
                "closure rank did not stabilise after {MAX_ROUNDS} rounds (rank {})",
                basis.len()
            )));
        }
        let end = basis.len();
        'outer: for j in done..end {
            for i in 0..j {
                let c = bracket(&elements[i], &elements[j]);
                push(to_real(&c), &mut basis, &mut elements);
                if basis.len() >= max_dim {
                    break 'outer;
                }
            }
        }
        done = end;
    }

    // Certificate: spectrum of the basis together with every bracket of it.
    let mut cols: Vec<Vec<f64>> = basis.clone();
    for j in 0..elements.len() {
        for i in 0..j {
            cols.push(to_real(&bracket(&elements[i], &elements[j])));
        }
    }
    let rows = basis[0].len();
    let a = nalgebra::DMatrix::<f64>::from_fn(cols.len(), rows, |k, r| cols[k][r]);
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    let cut = RANK_TOL * s[0].max(1.0);
    let rank = s.iter().filter(|&&x| x > cut).count();
    if rank != basis.len() && basis.len() < max_dim {
        return Err(Error::Integrity(format!(
            "closure basis has {} elements but the spectrum shows rank {rank}",
            basis.len()
        )));
    }
    let lo = rank.saturating_sub(3);
    let hi = (rank + 3).min(s.len());
    Ok(LieBasis {
        block_dims: dims,
        rank: basis.len(),
        ceiling,
        singular_tail: s[lo..hi].to_vec(),
        smallest_retained: s[rank.saturating_sub(1)],
        gap_ratio: straddle_ratio(&s, rank),
        elements,
        rounds,
    })
}

/// Complex dimension of the span of all words of length `<= max_len` in the generators.
pub fn algebra_dimension(generators: &[CMat], max_len: usize) -> usize {
    let m = generators.first().map_or(0, |g| g.nrows());
    let mut basis: Vec<CVec> = Vec::new();
    let add = |x: &CMat, basis: &mut Vec<CVec>| -> bool {
        let mut v = CVec::from_column_slice(x.as_slice());
        let scale = v.norm();
        for _ in 0..2 {
            for b in basis.iter() {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > RANK_TOL * scale.max(1.0) {
            basis.push(v / Complex64::new(n, 0.0));
            true
        } else {
            false
        }
    };
    let mut layer = vec![identity(m)];
    add(&layer[0], &mut basis);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in generators {
                let p = w * g;
                if add(&p, &mut basis) {
                    next.push(p);
                }
            }
        }
        if next.is_empty() || basis.len() == m * m {
            break;
        }
        layer = next;
    }
    basis.len()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub r: u32,
    pub sectors: Vec<String>,
    pub seed_logs_hash: String,
    pub rank: usize,
    pub ceiling: usize,
    pub singular_tail: Vec<f64>,
    pub gap_ratio: f64,
    pub pass: bool,
}

fn hash_seeds(seeds: &[BlockMatrix]) -> String {
    let mut h = Sha256::new();
    for s in seeds {
        for b in s {
            for z in b.iter() {
                h.update(z.re.to_le_bytes());
                h.update(z.im.to_le_bytes());
            }
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Lie-closure certificate for the direct sum of the given sectors, with the trace
/// projected out block by block.
pub fn certify(sectors: &[&SectorRep]) -> Result<DensityCertificate> {
    let first = sectors.first().ok_or_else(|| domain!("no sectors"))?;
    let n_gen = first.generators.len();
    for rep in sectors {
        if rep.generators.len() != n_gen {
            return Err(domain!("sectors belong to different braid groups"));
        }
        check_eigenvalue_ratio(rep)?;
    }
    let logs: Vec<Vec<CMat>> = sectors.iter().map(|rep| generator_logs(rep)).collect::<Result<_>>()?;
    let seeds: Vec<BlockMatrix> = (0..n_gen)
        .map(|i| logs.iter().map(|l| l[i].clone()).collect())
        .collect();
    let ceiling: usize = sectors.iter().map(|s| s.dim * s.dim - 1).sum();
    let basis = lie_closure(&seeds, ceiling)?;
    let pass = basis.rank == ceiling && basis.gap_ratio >= GAP_RATIO;
    Ok(DensityCertificate {
        r: first.ctx.r(),
        sectors: sectors.iter().map(|s| s.diagram.to_string()).collect(),
        seed_logs_hash: hash_seeds(&seeds),
        rank: basis.rank,
        ceiling,
        singular_tail: basis.singular_tail,
        gap_ratio: basis.gap_ratio,
        pass,
    })
}
