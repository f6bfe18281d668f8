//! Budgeted search for multi-sector targets.
//!
//! The search follows one fixed trajectory that does not depend on the budget: the
//! empty word, then every net entry in breadth-first order, then a seeded annealing
//! walk that multiplies the current word by short net words on either side. The budget
//! only decides where the trajectory is cut, so the best distance found can only
//! improve as the budget grows.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{free_reduce, invert_letters, sector_distance, CompiledBraid, GateTarget};
use crate::error::{domain, Error, Result};
use crate::jonesrep::{BraidWord, SectorRep};
use crate::linalg::{identity, CMat};

/// Words over all generators of a braid group, evaluated in several sectors at once.
#[derive(Debug, Clone)]
pub struct SectorNet {
    pub n_strands: usize,
    pub max_length: usize,
    pub dedup_radius: f64,
    pub words: Vec<Vec<i32>>,
    pub mats: Vec<Vec<CMat>>,
}

/// First row of each sector matrix, phase-normalized so that its largest-magnitude
/// entry is real positive, flattened to real coordinates.
pub fn fingerprint(mats: &[CMat]) -> Vec<f64> {
    normalized_rows(mats, 1)
}

/// The same phase normalization applied to every row; distinguishes words that fix the
/// first basis vector, which the first-row fingerprint lumps together.
fn full_fingerprint(mats: &[CMat]) -> Vec<f64> {
    normalized_rows(mats, usize::MAX)
}

fn normalized_rows(mats: &[CMat], rows: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for m in mats {
        let big = (0..m.ncols())
            .map(|j| m[(0, j)])
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let ph = if big.norm() > 0.0 {
            big.conj() / big.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..m.nrows().min(rows) {
            for j in 0..m.ncols() {
                let z = m[(i, j)] * ph;
                out.push(z.re);
                out.push(z.im);
            }
        }
    }
    out
}

fn projection(fp: &[f64]) -> f64 {
    // fixed generic direction
    fp.iter()
        .enumerate()
        .map(|(k, x)| x * (1.0 + 0.37 * k as f64).sin())
        .sum()
}

fn check_reps(reps: &[&SectorRep]) -> Result<usize> {
    let n = reps.first().ok_or_else(|| domain!("no sectors"))?.n_strands();
    if reps.iter().any(|r| r.n_strands() != n) {
        return Err(domain!("sectors belong to different braid groups"));
    }
    Ok(n)
}

/// Breadth-first net over `sigma_i^{+-1}` in all given sectors. Two words count as
/// the same when their summed projective distance is below `dedup_radius`; candidates
/// are located through the fingerprint.
pub fn build_sector_net(reps: &[&SectorRep], max_length: usize, dedup_radius: f64) -> Result<SectorNet> {
    if max_length < 1 {
        return Err(domain!("max_length must be at least 1"));
    }
    let n = check_reps(reps)?;
    let letters: Vec<i32> = (1..n as i32).rev().map(|i| -i).chain(1..n as i32).collect();
    let gens: Vec<Vec<CMat>> = letters
        .iter()
        .map(|&l| reps.iter().map(|r| r.letter_matrix(l)).collect())
        .collect();
    let mut words: Vec<Vec<i32>> = vec![vec![]];
    let mut mats: Vec<Vec<CMat>> = vec![reps.iter().map(|r| identity(r.dim)).collect()];
    // quantized projection of the fingerprint -> entries
    let h = 4.0 * dedup_radius.max(1e-9) * (reps.len() as f64);
    let mut index: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    index
        .entry((projection(&full_fingerprint(&mats[0])) / h).floor() as i64)
        .or_default()
        .push(0);
    let mut frontier = 0..1;
    for _ in 1..=max_length {
        let start = words.len();
        let cands: Vec<(Vec<i32>, Vec<CMat>)> = frontier
            .clone()
            .into_par_iter()
            .flat_map_iter(|idx| {
                let w = &words[idx];
                let m = &mats[idx];
                letters.iter().zip(&gens).filter_map(move |(&l, g)| {
                    if w.last() == Some(&-l) {
                        return None;
                    }
                    let mut nw = w.clone();
                    nw.push(l);
                    let nm: Vec<CMat> = m.iter().zip(g).map(|(a, b)| a * b).collect();
                    Some((nw, nm))
                })
            })
            .collect();
        for (w, m) in cands {
            let key = (projection(&full_fingerprint(&m)) / h).floor() as i64;
            let mut dup = false;
            'scan: for k in key - 1..=key + 1 {
                if let Some(ids) = index.get(&k) {
                    for &id in ids {
                        if sector_distance(&mats[id], &m)?.0 < dedup_radius {
                            dup = true;
                            break 'scan;
                        }
                    }
                }
            }
            if !dup {
                index.entry(key).or_default().push(words.len());
                words.push(w);
                mats.push(m);
            }
        }
        if words.len() == start {
            break;
        }
        frontier = start..words.len();
    }
    Ok(SectorNet {
        n_strands: n,
        max_length,
        dedup_radius,
        words,
        mats,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Proposals evaluated per step of the walk.
    pub batch: usize,
    /// Longest net word used as a move.
    pub move_length: usize,
    /// Longest word the walk may reach.
    pub max_word_length: usize,
    pub initial_temperature: f64,
    /// Evaluations over which the temperature falls by `e`.
    pub cooling: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            batch: 32,
            move_length: 3,
            max_word_length: 400,
            initial_temperature: 0.05,
            cooling: 2e4,
        }
    }
}

struct State {
    letters: Vec<i32>,
    mats: Vec<CMat>,
    dist: f64,
}

/// Best word found within `budget` evaluations of the objective.
pub fn search_compile(
    target: &GateTarget,
    reps: &[&SectorRep],
    net: &SectorNet,
    budget: usize,
    cfg: &SearchConfig,
) -> Result<CompiledBraid> {
    if budget < 1 {
        return Err(domain!("budget must be at least 1"));
    }
    let n = check_reps(reps)?;
    target.check_against(reps)?;
    if net.n_strands != n || net.mats.first().map(Vec::len) != Some(reps.len()) {
        return Err(domain!("net does not match the sectors"));
    }
    let goal = target.matrices();
    let objective = |m: &[CMat]| -> f64 { sector_distance(m, &goal).map_or(f64::INFINITY, |x| x.0) };

    let mut used = 0usize;
    let mut best = State {
        letters: vec![],
        mats: reps.iter().map(|r| identity(r.dim)).collect(),
        dist: f64::INFINITY,
    };
    best.dist = objective(&best.mats);
    used += 1;

    // breadth-first sweep of the net (the empty word was counted above)
    let sweep = (net.words.len() - 1).min(budget - used);
    let dists: Vec<f64> = net.mats[1..1 + sweep].par_iter().map(|m| objective(m)).collect();
    used += sweep;
    for (k, &d) in dists.iter().enumerate() {
        if d < best.dist {
            best = State {
                letters: net.words[k + 1].clone(),
                mats: net.mats[k + 1].clone(),
                dist: d,
            };
        }
    }

    let moves: Vec<usize> = (1..net.words.len())
        .filter(|&k| net.words[k].len() <= cfg.move_length)
        .collect();
    if used < budget && moves.is_empty() {
        return Err(domain!("net has no move words"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cur = State {
        letters: best.letters.clone(),
        mats: best.mats.clone(),
        dist: best.dist,
    };
    let mut walked = 0usize;
    while used < budget {
        let take = cfg.batch.min(budget - used);
        // proposals are drawn for the full batch so the walk never depends on the budget
        let props: Vec<(usize, bool)> = (0..cfg.batch)
            .map(|_| (moves[rng.random_range(0..moves.len())], rng.random_bool(0.5)))
            .collect();
        let u: f64 = rng.random();
        let evals: Vec<(f64, Vec<CMat>)> = props[..take]
            .par_iter()
            .map(|&(k, left)| {
                let m: Vec<CMat> = cur
                    .mats
                    .iter()
                    .zip(&net.mats[k])
                    .map(|(c, g)| if left { g * c } else { c * g })
                    .collect();
                (objective(&m), m)
            })
            .collect();
        used += take;
        walked += cfg.batch;
        let Some((j, _)) = evals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        else {
            break;
        };
        let (k, left) = props[j];
        let letters = if left {
            [net.words[k].as_slice(), cur.letters.as_slice()].concat()
        } else {
            [cur.letters.as_slice(), net.words[k].as_slice()].concat()
        };
        let letters = free_reduce(&letters);
        if letters.len() > cfg.max_word_length {
            continue;
        }
        let d = evals[j].0;
        let temp = cfg.initial_temperature * (-(walked as f64) / cfg.cooling).exp();
        let accept = d < cur.dist || (temp > 0.0 && u < (-(d - cur.dist) / temp).exp());
        if accept {
            cur = State {
                letters,
                mats: evals[j].1.clone(),
                dist: d,
            };
            if cur.dist < best.dist {
                best = State {
                    letters: cur.letters.clone(),
                    mats: cur.mats.clone(),
                    dist: cur.dist,
                };
            }
        }
    }

    let word = BraidWord::new(n, best.letters)?;
    let out = CompiledBraid::measure(word, target, reps)?;
    if (out.distance - best.dist).abs() > super::REVALIDATE_TOL {
        return Err(Error::Integrity(format!(
            "search distance {} does not re-validate ({})",
            best.dist, out.distance
        )));
    }
    Ok(out)
}

/// Word of the inverse braid, for callers that compose search results.
pub fn inverse_word(w: &BraidWord) -> BraidWord {
    BraidWord {
        n_strands: w.n_strands,
        letters: invert_letters(&w.letters),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::projective_distance;
    use crate::fusion::FusionContext;
    use crate::jonesrep::build_sector;
    use crate::tableaux::YoungDiagram;

    fn pair() -> (SectorRep, SectorRep) {
        let ctx = FusionContext::r5();
        (
            build_sector(YoungDiagram::new(3, 3).unwrap(), &ctx).unwrap(),
            build_sector(YoungDiagram::new(4, 2).unwrap(), &ctx).unwrap(),
        )
    }

    #[test]
    fn generator_target_is_found_exactly() {
        let (a, b) = pair();
        let reps = [&a, &b];
        let net = build_sector_net(&reps, 2, 1e-6).unwrap();
        let t = GateTarget::new(vec![
            ("[3,3]".into(), a.generators[2].clone()),
            ("[4,2]".into(), b.generators[2].clone()),
        ])
        .unwrap();
        let cb = search_compile(&t, &reps, &net, 1000, &SearchConfig::default()).unwrap();
        assert_eq!(cb.word.letters, vec![3]);
        assert!(cb.distance < 1e-12);
    }

    #[test]
    fn budget_one_is_the_empty_word() {
        let (a, b) = pair();
        let reps = [&a, &b];
        let net = build_sector_net(&reps, 1, 1e-6).unwrap();
        let t = GateTarget::new(vec![
            ("[3,3]".into(), a.generators[0].clone()),
            ("[4,2]".into(), b.generators[0].clone()),
        ])
        .unwrap();
        let cb = search_compile(&t, &reps, &net, 1, &SearchConfig::default()).unwrap();
        assert!(cb.word.is_empty());
        let expect = projective_distance(&identity(5), &a.generators[0]).unwrap()
            + projective_distance(&identity(8), &b.generators[0]).unwrap();
        assert!((cb.distance - expect).abs() < 1e-12);
    }

    #[test]
    fn net_sizes() {
        let (a, b) = pair();
        let net = build_sector_net(&[&a, &b], 2, 1e-6).unwrap();
        // 1 + 10 + 10*9, minus the commuting duplicates s_i s_j = s_j s_i (|i-j| >= 2)
        assert_eq!(net.words.len(), 1 + 10 + 90 - 24);
    }
}
