//! Explicit r = 5 generator matrices, and dimension counts against brute force.

use cs5::linalg::{c, CMat};
use cs5::*;
use num_complex::Complex64;

const ENTRY_TOL: f64 = 1e-10;

fn q() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0)
}

/// The 2x2 block shared by every sigma_2 below.
fn sigma2_block() -> [[Complex64; 2]; 2] {
    let q = q();
    let three = q + q.conj() + 1.0;
    let off = -q * three.sqrt() / (q + 1.0);
    [[q * q / (q + 1.0), off], [off, -1.0 / (q + 1.0)]]
}

fn diag_of(d: &[Complex64]) -> CMat {
    cs5::linalg::diag(d)
}

fn explicit_21() -> (CMat, CMat) {
    let q = q();
    let b = sigma2_block();
    (
        diag_of(&[c(-1.0, 0.0), q]),
        CMat::from_row_slice(2, 2, &[b[0][0], b[0][1], b[1][0], b[1][1]]),
    )
}

fn explicit_33() -> (CMat, CMat) {
    let q = q();
    let m = c(-1.0, 0.0);
    let s1 = diag_of(&[m, q, m, q, q]);
    let b = sigma2_block();
    let mut s2 = CMat::zeros(5, 5);
    for off in [0, 2] {
        for i in 0..2 {
            for j in 0..2 {
                s2[(off + i, off + j)] = b[i][j];
            }
        }
    }
    s2[(4, 4)] = q;
    (s1, s2)
}

fn explicit_42_sigma1() -> CMat {
    let q = q();
    let m = c(-1.0, 0.0);
    diag_of(&[m, q, m, q, m, q, q, q])
}

/// `P^T M P` with `(P^T M P)[a][b] = M[perm[a]][perm[b]]`.
fn permuted(m: &CMat, perm: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |a, b| m[(perm[a], perm[b])])
}

fn max_entry_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn matching_perms(built: &[&CMat], explicit: &[&CMat]) -> Vec<Vec<usize>> {
    let n = built[0].nrows();
    all_perms(n)
        .into_iter()
        .filter(|p| {
            built
                .iter()
                .zip(explicit)
                .all(|(b, t)| max_entry_diff(&permuted(b, p), t) < ENTRY_TOL)
        })
        .collect()
}

fn sector(l1: usize, l2: usize) -> SectorRep {
    build_sector(YoungDiagram::new(l1, l2).unwrap(), &FusionContext::r5()).unwrap()
}

#[test]
fn sector_21_matches_in_lex_order() {
    let rep = sector(2, 1);
    let (s1, s2) = explicit_21();
    let found = matching_perms(&[&rep.generators[0], &rep.generators[1]], &[&s1, &s2]);
    assert_eq!(found, vec![vec![0, 1]]);
}

#[test]
fn sector_33_matches_frozen_permutation() {
    let rep = sector(3, 3);
    let (s1, s2) = explicit_33();
    let found = matching_perms(&[&rep.generators[0], &rep.generators[1]], &[&s1, &s2]);
    let frozen = vec![0, 2, 1, 3, 4];
    assert!(found.contains(&frozen), "matches: {found:?}");
    assert!(max_entry_diff(&permuted(&rep.generators[0], &frozen), &s1) < ENTRY_TOL);
    assert!(max_entry_diff(&permuted(&rep.generators[1], &frozen), &s2) < ENTRY_TOL);
}

#[test]
fn sector_42_matches_frozen_permutation() {
    let rep = sector(4, 2);
    let s1 = explicit_42_sigma1();
    let found = matching_perms(&[&rep.generators[0]], &[&s1]);
    let frozen = vec![0, 3, 1, 4, 2, 5, 6, 7];
    assert!(found.contains(&frozen));
    // sigma_1 alone leaves the -1 and q eigenspaces free: 3! * 5! orderings
    assert_eq!(found.len(), 6 * 120);
    assert_eq!(
        spectrum(&rep, 1).unwrap(),
        cs5::jonesrep::Spectrum { minus_one: 3, q: 5 }
    );
}

/// Count walks 0 -> boundary over labels 0..=r-2 with steps +-1 by enumerating every
/// step sequence.
fn brute_force_dimension(n: usize, boundary: i32, r: i32) -> u128 {
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        let mut a = 0i32;
        let mut ok = true;
        for s in 0..n {
            a += if mask >> s & 1 == 1 { 1 } else { -1 };
            if a < 0 || a > r - 2 {
                ok = false;
                break;
            }
        }
        if ok && a == boundary {
            count += 1;
        }
    }
    count
}

#[test]
fn disk_dimension_against_enumeration() {
    let ctx = FusionContext::r5();
    assert_eq!(brute_force_dimension(12, 0, 5), 89);
    assert_eq!(disk_dimension(12, 0, &ctx).unwrap(), 89);
    for r in [5u32, 7] {
        let ctx = FusionContext::new(r).unwrap();
        for n in 0..=14 {
            for b in 0..=(r as u8 - 2) {
                assert_eq!(
                    disk_dimension(n, b, &ctx).unwrap(),
                    brute_force_dimension(n, b as i32, r as i32),
                    "r={r} n={n} boundary={b}"
                );
            }
        }
    }
}

#[test]
fn tableau_counts_against_enumeration() {
    for r in [5u32, 7] {
        let ctx = FusionContext::new(r).unwrap();
        for n in 1..=12 {
            for d in enumerate_diagrams(n, &ctx) {
                let count = enumerate_tableaux(d, &ctx).unwrap().len() as u128;
                assert_eq!(count, brute_force_dimension(n, d.label() as i32, r as i32), "{d}");
            }
        }
    }
}

#[test]
fn stored_fixtures_match_the_build() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for (l1, l2) in [(2, 1), (3, 3), (4, 2)] {
        let text = std::fs::read_to_string(dir.join(format!("r5_{l1}-{l2}.json"))).unwrap();
        let stored = cs5::fixtures::MatrixFixture::from_json(&text).unwrap();
        assert_eq!(stored.order, cs5::fixtures::ORDER_TAG);
        let rep = sector(l1, l2);
        assert_eq!(stored, cs5::fixtures::MatrixFixture::from_sector(&rep));
        for (k, g) in rep.generators.iter().enumerate() {
            let s = stored.get(&format!("sigma{}", k + 1)).unwrap().unwrap();
            assert!(max_entry_diff(&s, g) < ENTRY_TOL);
        }
    }
}
