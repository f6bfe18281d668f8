//! Breadth-first word net on the `[2,1]` sector and Solovay-Kitaev refinement.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kdtree::KdTree;
use super::su2::{group_commutator, Su2};
use super::{free_reduce, invert_letters, CompiledBraid, GateTarget};
use crate::error::{domain, Error, Result};
use crate::jonesrep::{BraidWord, SectorRep};
use crate::linalg::haar_unitary;

/// Entry cap; larger nets are refused rather than truncated.
pub const MAX_NET_ENTRIES: usize = 4_000_000;
/// Default recursion depth limit of [`sk_compile`].
pub const MAX_SK_DEPTH: usize = 6;
const COVERAGE_SAMPLES: usize = 2000;
const LETTERS: [i32; 4] = [-2, -1, 1, 2];

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    letter: i8,
    len: u16,
    elem: Su2,
}

/// Words over `sigma_1^{+-1}, sigma_2^{+-1}` of bounded length, no two of which are
/// projectively closer than `dedup_radius`. Entries are kept in breadth-first order
/// (by length, then by letters with `-2 < -1 < 1 < 2`).
#[derive(Debug, Clone)]
pub struct WordNet {
    pub max_length: usize,
    pub dedup_radius: f64,
    /// Largest nearest-entry distance seen over a fixed sample of Haar targets.
    pub base_radius: f64,
    nodes: Vec<Node>,
    tree: KdTree<4>,
    gens: [Su2; 4],
}

fn cell(p: &[f64; 4], h: f64) -> [i32; 4] {
    p.map(|x| (x / h).floor() as i32)
}

/// Build the net by breadth-first enumeration with projective deduplication.
pub fn build_net(rep: &SectorRep, max_length: usize, dedup_radius: f64) -> Result<WordNet> {
    if max_length < 1 {
        return Err(domain!("max_length must be at least 1"));
    }
    if rep.n_strands() != 3 || rep.dim != 2 {
        return Err(domain!("word nets are built on a 2-dimensional B(3) sector"));
    }
    if dedup_radius.is_nan() || dedup_radius <= 0.0 {
        return Err(domain!("dedup radius must be positive"));
    }
    let gens = LETTERS.map(|l| Su2::from_unitary(&rep.letter_matrix(l)));
    let h = dedup_radius;
    let mut grid: HashMap<[i32; 4], Vec<u32>> = HashMap::new();
    let mut nodes = vec![Node {
        parent: u32::MAX,
        letter: 0,
        len: 0,
        elem: Su2::IDENTITY,
    }];
    let insert = |grid: &mut HashMap<[i32; 4], Vec<u32>>, e: &Su2, id: u32| {
        let p = e.coords();
        grid.entry(cell(&p, h)).or_default().push(id);
        grid.entry(cell(&p.map(|x| -x), h)).or_default().push(id);
    };
    insert(&mut grid, &Su2::IDENTITY, 0);
    let mut frontier = 0..1usize;
    for len in 1..=max_length {
        let start = nodes.len();
        for idx in frontier.clone() {
            let parent = nodes[idx];
            for (g, &l) in LETTERS.iter().enumerate() {
                if parent.len > 0 && parent.letter as i32 == -l {
                    continue;
                }
                let elem = parent.elem.mul(&gens[g]);
                let p = elem.coords();
                let base = cell(&p, h);
                let mut dup = false;
                'scan: for o in 0..81 {
                    let mut key = base;
                    let mut t = o;
                    for k in key.iter_mut() {
                        *k += t % 3 - 1;
                        t /= 3;
                    }
                    if let Some(ids) = grid.get(&key) {
                        for &id in ids {
                            if nodes[id as usize].elem.dist(&elem) < dedup_radius {
                                dup = true;
                                break 'scan;
                            }
                        }
                    }
                }
                if dup {
                    continue;
                }
                if nodes.len() >= MAX_NET_ENTRIES {
                    return Err(Error::Resource(format!(
                        "word net exceeds {MAX_NET_ENTRIES} entries at length {len}"
                    )));
                }
                let id = nodes.len() as u32;
                insert(&mut grid, &elem, id);
                nodes.push(Node {
                    parent: idx as u32,
                    letter: l as i8,
                    len: len as u16,
                    elem,
                });
            }
        }
        if nodes.len() == start {
            break;
        }
        frontier = start..nodes.len();
    }
    drop(grid);
    let mut pts = Vec::with_capacity(2 * nodes.len());
    for (id, n) in nodes.iter().enumerate() {
        let p = n.elem.coords();
        pts.push((p, id));
        pts.push((p.map(|x| -x), id));
    }
    let tree = KdTree::build(pts);
    let mut net = WordNet {
        max_length,
        dedup_radius,
        base_radius: f64::INFINITY,
        nodes,
        tree,
        gens,
    };
    net.base_radius = net.sample_coverage(COVERAGE_SAMPLES, 0);
    Ok(net)
}

impl WordNet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn word(&self, idx: usize) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.nodes[idx].len as usize);
        let mut i = idx;
        while self.nodes[i].len > 0 {
            out.push(self.nodes[i].letter as i32);
            i = self.nodes[i].parent as usize;
        }
        out.reverse();
        out
    }

    pub fn element(&self, idx: usize) -> Su2 {
        self.nodes[idx].elem
    }

    /// Nearest entry as `(index, distance)`; ties go to the earlier entry.
    pub fn nearest(&self, u: &Su2) -> (usize, f64) {
        let (d, id) = self.tree.nearest(&u.coords()).expect("net is never empty");
        (id, d)
    }

    /// Largest nearest-entry distance over `samples` Haar-random targets.
    pub fn sample_coverage(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let targets: Vec<Su2> = (0..samples)
            .map(|_| Su2::from_unitary(&haar_unitary(2, &mut rng)))
            .collect();
        targets.par_iter().map(|t| self.nearest(t).1).reduce(|| 0.0, f64::max)
    }

    fn word_element(&self, letters: &[i32]) -> Su2 {
        letters.iter().fold(Su2::IDENTITY, |acc, &l| {
            let g = LETTERS.iter().position(|&x| x == l).expect("letter in 1..=2");
            acc.mul(&self.gens[g])
        })
    }

    /// Solovay-Kitaev approximation at the given recursion depth.
    pub fn approximate(&self, u: &Su2, depth: usize) -> (Vec<i32>, Su2) {
        if depth == 0 {
            let (idx, _) = self.nearest(u);
            return (self.word(idx), self.element(idx));
        }
        let (prev_w, prev_e) = self.approximate(u, depth - 1);
        let delta = u.mul(&prev_e.inv());
        let (v, w) = group_commutator(&delta);
        let (vw, ve) = self.approximate(&v, depth - 1);
        let (ww, we) = self.approximate(&w, depth - 1);
        let mut letters = Vec::with_capacity(2 * vw.len() + 2 * ww.len() + prev_w.len());
        letters.extend_from_slice(&vw);
        letters.extend_from_slice(&ww);
        letters.extend(invert_letters(&vw));
        letters.extend(invert_letters(&ww));
        letters.extend_from_slice(&prev_w);
        let letters = free_reduce(&letters);
        let elem = ve.mul(&we).mul(&ve.inv()).mul(&we.inv()).mul(&prev_e);
        // keep the shallower result when the refinement does not help
        if elem.dist(u) < prev_e.dist(u) {
            let exact = self.word_element(&letters);
            (letters, exact)
        } else {
            (prev_w, prev_e)
        }
    }
}

/// Compile a single-sector target on the `[2,1]` sector to projective distance `<= eps`,
/// raising the recursion depth until the bound is met.
pub fn sk_compile(
    target: &GateTarget,
    eps: f64,
    net: &WordNet,
    rep: &SectorRep,
    max_depth: usize,
) -> Result<CompiledBraid> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(domain!("epsilon must be positive"));
    }
    if target.sectors.len() != 1 || target.sectors[0].1.nrows() != 2 {
        return Err(domain!("sk_compile takes one 2x2 target"));
    }
    if rep.n_strands() != 3 || rep.dim != 2 {
        return Err(domain!("sk_compile runs on the [2,1] sector of B(3)"));
    }
    if !net.base_radius.is_finite() {
        return Err(Error::Precondition("net coverage was not sampled".into()));
    }
    let u = Su2::from_unitary(&target.sectors[0].1);
    let mut best: Option<CompiledBraid> = None;
    for depth in 0..=max_depth {
        let (letters, _) = net.approximate(&u, depth);
        let word = BraidWord::new(3, letters)?;
        let cand = CompiledBraid::measure(word, target, &[rep])?;
        let done = cand.distance <= eps;
        if best.as_ref().is_none_or(|b| cand.distance < b.distance) {
            best = Some(cand);
        }
        if done {
            return Ok(best.expect("set above"));
        }
    }
    Err(Error::Precision(format!(
        "distance {:.3e} > {eps:e} at depth {max_depth} (net base radius {:.3e})",
        best.map_or(f64::INFINITY, |b| b.distance),
        net.base_radius
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::FusionContext;
    use crate::jonesrep::build_sector;
    use crate::linalg::identity;
    use crate::tableaux::YoungDiagram;

    fn rep21() -> SectorRep {
        build_sector(YoungDiagram::new(2, 1).unwrap(), &FusionContext::r5()).unwrap()
    }

    #[test]
    fn length_one_net() {
        let rep = rep21();
        let net = build_net(&rep, 1, 1e-6).unwrap();
        assert_eq!(net.len(), 5);
        let words: Vec<Vec<i32>> = (0..net.len()).map(|i| net.word(i)).collect();
        assert_eq!(words, vec![vec![], vec![-2], vec![-1], vec![1], vec![2]]);
    }

    #[test]
    fn net_grows_monotonically_and_merges_relations() {
        let rep = rep21();
        let mut last = 0;
        for l in 1..=6 {
            let n = build_net(&rep, l, 1e-6).unwrap().len();
            assert!(n > last);
            last = n;
        }
        let net = build_net(&rep, 3, 1e-6).unwrap();
        // sigma1 sigma2 sigma1 = sigma2 sigma1 sigma2
        let a = net.word_element(&[1, 2, 1]);
        let b = net.word_element(&[2, 1, 2]);
        assert!(a.dist(&b) < 1e-12);
        let (ia, _) = net.nearest(&a);
        let (ib, _) = net.nearest(&b);
        assert_eq!(ia, ib);
    }

    #[test]
    fn trivial_targets_short_circuit() {
        let rep = rep21();
        let net = build_net(&rep, 4, 1e-6).unwrap();
        let t = GateTarget::single("[2,1]", identity(2)).unwrap();
        let cb = sk_compile(&t, 1e-9, &net, &rep, 2).unwrap();
        assert!(cb.word.is_empty());
        let t = GateTarget::single("[2,1]", rep.generators[0].clone()).unwrap();
        let cb = sk_compile(&t, 1e-9, &net, &rep, 2).unwrap();
        assert_eq!(cb.word.letters, vec![1]);
        assert!(cb.distance < 1e-12);
    }
}
