//! Compilation of unitary gate targets into braid words.
//!
//! Single-qubit gates live on the 2-dimensional `[2,1]` sector of `B(3)` and are
//! compiled by Solovay-Kitaev over a breadth-first word net. Two-qubit gates act on
//! the `[3,3]` (dimension 5) and `[4,2]` (dimension 8) sectors of `B(6)` at once and
//! are compiled by a budgeted seeded search. Both use the projective distance, which
//! ignores one global phase per sector.

pub mod gates;
pub mod kdtree;
pub mod net;
pub mod search;
pub mod su2;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fusion::FusionContext;
use crate::jonesrep::{build_sector, evaluate, BraidWord, SectorRep};
use crate::linalg::{self, CMat};
use crate::tableaux::YoungDiagram;

pub use net::{build_net, sk_compile, WordNet};
pub use search::{build_sector_net, search_compile, SearchConfig, SectorNet};

/// Unitarity tolerance for gate targets.
pub const TARGET_TOL: f64 = 1e-12;
/// Re-validation tolerance for stored distances.
pub const REVALIDATE_TOL: f64 = 1e-9;

/// `min_{|w|=1} ||w U - V||` together with the optimal `w`.
///
/// With `A` the shortest arc holding the eigenphases of `U^* V`, the minimum is
/// `2 sin(A/4)`, attained at the arc midpoint.
pub fn projective_distance_with_phase(u: &CMat, v: &CMat) -> Result<(f64, Complex64)> {
    if u.shape() != v.shape() || !u.is_square() {
        return Err(domain!(
            "projective distance between {:?} and {:?}",
            u.shape(),
            v.shape()
        ));
    }
    if u.nrows() == 0 {
        return Ok((0.0, linalg::ONE));
    }
    let w = u.adjoint() * v;
    let mut ph: Vec<f64> = linalg::eigenphases(&w)
        .into_iter()
        .map(|t| t.rem_euclid(2.0 * std::f64::consts::PI))
        .collect();
    ph.sort_by(f64::total_cmp);
    let n = ph.len();
    let tau = 2.0 * std::f64::consts::PI;
    // largest gap between consecutive phases on the circle
    let mut gap = ph[0] + tau - ph[n - 1];
    let mut start = ph[0];
    for k in 1..n {
        let g = ph[k] - ph[k - 1];
        if g > gap {
            gap = g;
            start = ph[k];
        }
    }
    let arc = (tau - gap).max(0.0);
    let omega = Complex64::from_polar(1.0, start + arc / 2.0);
    Ok((2.0 * (arc / 4.0).sin(), omega))
}

pub fn projective_distance(u: &CMat, v: &CMat) -> Result<f64> {
    Ok(projective_distance_with_phase(u, v)?.0)
}

/// Sum over sectors of the per-sector projective distances, with the phases.
pub fn sector_distance(us: &[CMat], vs: &[CMat]) -> Result<(f64, Vec<Complex64>)> {
    if us.len() != vs.len() {
        return Err(domain!("{} sectors against {}", us.len(), vs.len()));
    }
    let mut total = 0.0;
    let mut phases = Vec::with_capacity(us.len());
    for (u, v) in us.iter().zip(vs) {
        let (d, w) = projective_distance_with_phase(u, v)?;
        total += d;
        phases.push(w);
    }
    Ok((total, phases))
}

/// Unitaries to approximate, one per sector, up to independent phases.
#[derive(Debug, Clone)]
pub struct GateTarget {
    pub sectors: Vec<(String, CMat)>,
    pub phase_free: bool,
}

impl GateTarget {
    pub fn new(sectors: Vec<(String, CMat)>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(domain!("gate target without sectors"));
        }
        for (id, u) in &sectors {
            if !u.is_square() {
                return Err(domain!("target for {id} is not square"));
            }
            let res = linalg::unitarity_residual(u);
            if res > TARGET_TOL {
                return Err(domain!("target for {id} is not unitary (residual {res:e})"));
            }
        }
        Ok(Self {
            sectors,
            phase_free: true,
        })
    }

    pub fn single(id: &str, u: CMat) -> Result<Self> {
        Self::new(vec![(id.to_string(), u)])
    }

    pub fn matrices(&self) -> Vec<CMat> {
        self.sectors.iter().map(|(_, u)| u.clone()).collect()
    }

    /// Check that the target matches the given sectors in order and dimension.
    pub fn check_against(&self, reps: &[&SectorRep]) -> Result<()> {
        if reps.len() != self.sectors.len() {
            return Err(domain!(
                "target has {} sectors, representation has {}",
                self.sectors.len(),
                reps.len()
            ));
        }
        for ((id, u), rep) in self.sectors.iter().zip(reps) {
            if u.nrows() != rep.dim {
                return Err(domain!(
                    "target {id} has dimension {}, sector {} has {}",
                    u.nrows(),
                    rep.diagram,
                    rep.dim
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidMeta {
    pub distance: f64,
    /// Argument of the realized phase per sector.
    pub phases: Vec<f64>,
    pub length: usize,
}

/// Braid JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidDocument {
    pub n_strands: usize,
    pub letters: Vec<i32>,
    pub meta: BraidMeta,
}

#[derive(Debug, Clone)]
pub struct CompiledBraid {
    pub word: BraidWord,
    pub distance: f64,
    pub phases: Vec<Complex64>,
    pub length: usize,
}

impl CompiledBraid {
    /// Evaluate `word` from scratch and measure it against `target`.
    pub fn measure(word: BraidWord, target: &GateTarget, reps: &[&SectorRep]) -> Result<Self> {
        target.check_against(reps)?;
        let mats = reps
            .iter()
            .map(|rep| evaluate(rep, &word))
            .collect::<Result<Vec<_>>>()?;
        let (distance, phases) = sector_distance(&mats, &target.matrices())?;
        let length = word.len();
        Ok(Self {
            word,
            distance,
            phases,
            length,
        })
    }

    /// Recompute the distance and compare with the stored value.
    pub fn revalidate(&self, target: &GateTarget, reps: &[&SectorRep]) -> Result<f64> {
        let fresh = Self::measure(self.word.clone(), target, reps)?;
        let diff = (fresh.distance - self.distance).abs();
        if diff > REVALIDATE_TOL {
            return Err(Error::Integrity(format!(
                "stored distance {} differs from re-evaluated {} by {diff:e}",
                self.distance, fresh.distance
            )));
        }
        Ok(fresh.distance)
    }

    pub fn document(&self) -> BraidDocument {
        BraidDocument {
            n_strands: self.word.n_strands,
            letters: self.word.letters.clone(),
            meta: BraidMeta {
                distance: self.distance,
                phases: self.phases.iter().map(|w| w.arg()).collect(),
                length: self.length,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolkitConfig {
    pub net_length: usize,
    pub net_radius: f64,
    pub max_depth: usize,
    pub pair_net_length: usize,
    pub pair_net_radius: f64,
    pub search: SearchConfig,
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        Self {
            net_length: 16,
            net_radius: 0.02,
            max_depth: net::MAX_SK_DEPTH,
            pair_net_length: 4,
            pair_net_radius: 1e-9,
            search: SearchConfig::default(),
        }
    }
}

/// Sectors and lazily built nets for one level.
#[derive(Debug)]
pub struct Toolkit {
    pub ctx: FusionContext,
    pub cfg: ToolkitConfig,
    pub rep21: SectorRep,
    pub rep33: SectorRep,
    pub rep42: SectorRep,
    net: OnceLock<WordNet>,
    pair_net: OnceLock<SectorNet>,
}

impl Toolkit {
    pub fn new(ctx: &FusionContext) -> Result<Self> {
        Self::with_config(ctx, ToolkitConfig::default())
    }

    pub fn with_config(ctx: &FusionContext, cfg: ToolkitConfig) -> Result<Self> {
        Ok(Self {
            ctx: *ctx,
            cfg,
            rep21: build_sector(YoungDiagram::new(2, 1)?, ctx)?,
            rep33: build_sector(YoungDiagram::new(3, 3)?, ctx)?,
            rep42: build_sector(YoungDiagram::new(4, 2)?, ctx)?,
            net: OnceLock::new(),
            pair_net: OnceLock::new(),
        })
    }

    pub fn pair(&self) -> [&SectorRep; 2] {
        [&self.rep33, &self.rep42]
    }

    pub fn net(&self) -> Result<&WordNet> {
        if let Some(n) = self.net.get() {
            return Ok(n);
        }
        let n = build_net(&self.rep21, self.cfg.net_length, self.cfg.net_radius)?;
        Ok(self.net.get_or_init(|| n))
    }

    pub fn pair_net(&self) -> Result<&SectorNet> {
        if let Some(n) = self.pair_net.get() {
            return Ok(n);
        }
        let n = build_sector_net(&self.pair(), self.cfg.pair_net_length, self.cfg.pair_net_radius)?;
        Ok(self.pair_net.get_or_init(|| n))
    }

    pub fn compile_one_qubit(&self, g: &CMat, eps: f64) -> Result<CompiledBraid> {
        let target = crate::encsim::one_qubit_target(g)?;
        sk_compile(&target, eps, self.net()?, &self.rep21, self.cfg.max_depth)
    }

    pub fn compile_two_qubit(&self, g: &CMat, budget: usize, seed: u64) -> Result<CompiledBraid> {
        let target = crate::encsim::two_qubit_target(g, &self.ctx)?;
        let cfg = SearchConfig {
            seed,
            ..self.cfg.search.clone()
        };
        search_compile(&target, &self.pair(), self.pair_net()?, budget, &cfg)
    }
}

/// Cancel adjacent `l, -l` pairs.
pub fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Letters of the inverse word.
pub fn invert_letters(letters: &[i32]) -> Vec<i32> {
    letters.iter().rev().map(|l| -l).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, haar_unitary, identity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = haar_unitary(3, &mut rng);
        assert!(projective_distance(&u, &u).unwrap() < 1e-14);
        let v = &u * Complex64::from_polar(1.0, 1.234);
        assert!(projective_distance(&u, &v).unwrap() < 1e-14);
        let d = projective_distance(&identity(2), &diag(&[c(1.0, 0.0), c(-1.0, 0.0)])).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-14);
        assert!(projective_distance(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn phase_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u = haar_unitary(3, &mut rng);
            let v = haar_unitary(3, &mut rng);
            let (d, w) = projective_distance_with_phase(&u, &v).unwrap();
            assert!((linalg::op_norm(&(&u * w - &v)) - d).abs() < 1e-12);
            for k in 0..360 {
                let z = Complex64::from_polar(1.0, k as f64 * std::f64::consts::PI / 180.0);
                assert!(linalg::op_norm(&(&u * z - &v)) >= d - 1e-12);
            }
        }
    }

    #[test]
    fn reduce_and_invert() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(invert_letters(&[1, -2, 3]), vec![-3, 2, -1]);
    }
}
