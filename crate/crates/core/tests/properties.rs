//! Randomized invariants across the representation, the metric and the register.

use cs5::compiler::{free_reduce, projective_distance, projective_distance_with_phase};
use cs5::density::principal_log;
use cs5::encsim::{EncodedRegister, Encoding};
use cs5::linalg::{c, expm_skew_hermitian, haar_unitary, identity, op_norm, CMat, CVec};
use cs5::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::{Arc, OnceLock};

fn haar(n: usize, seed: u64) -> CMat {
    haar_unitary(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sector42() -> &'static SectorRep {
    static REP: OnceLock<SectorRep> = OnceLock::new();
    REP.get_or_init(|| build_sector(YoungDiagram::new(4, 2).unwrap(), &FusionContext::r5()).unwrap())
}

fn register(k: usize) -> Arc<Encoding> {
    static K2: OnceLock<Arc<Encoding>> = OnceLock::new();
    static K4: OnceLock<Arc<Encoding>> = OnceLock::new();
    let cell = if k == 2 { &K2 } else { &K4 };
    cell.get_or_init(|| Encoding::register(k, &FusionContext::r5()).unwrap())
        .clone()
}

fn letters(n_strands: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let g = n_strands as i32 - 1;
    prop::collection::vec((1..=g, any::<bool>()), 0..max_len)
        .prop_map(|v| v.into_iter().map(|(l, neg)| if neg { -l } else { l }).collect())
}

fn random_state(enc: &Arc<Encoding>, seed: u64) -> EncodedRegister {
    let u = haar(1 << enc.k, seed);
    let amps: Vec<Complex64> = u.column(0).iter().copied().collect();
    EncodedRegister::from_amplitudes(enc.clone(), &amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_pseudometric(n in 1usize..6, a in any::<u64>(), b in any::<u64>(), d in any::<u64>()) {
        let (u, v, w) = (haar(n, a), haar(n, b), haar(n, d));
        let uv = projective_distance(&u, &v).unwrap();
        let vu = projective_distance(&v, &u).unwrap();
        let vw = projective_distance(&v, &w).unwrap();
        let uw = projective_distance(&u, &w).unwrap();
        prop_assert!((uv - vu).abs() < 1e-10);
        prop_assert!(uw <= uv + vw + 1e-10);
        prop_assert!(projective_distance(&u, &u).unwrap() < 1e-10);
        prop_assert!((0.0..=2.0 + 1e-12).contains(&uv));
    }

    #[test]
    fn distance_ignores_global_phase(n in 1usize..6, a in any::<u64>(), b in any::<u64>(), t in -3.2f64..3.2) {
        let (u, v) = (haar(n, a), haar(n, b));
        let w = Complex64::from_polar(1.0, t);
        let d0 = projective_distance(&u, &v).unwrap();
        prop_assert!(projective_distance(&u, &(&v * w)).unwrap() < d0 + 1e-10);
        prop_assert!((projective_distance(&u, &(&v * w)).unwrap() - d0).abs() < 1e-10);
        prop_assert!(projective_distance(&u, &(&u * w)).unwrap() < 1e-7);
    }

    #[test]
    fn distance_is_unitarily_invariant(n in 1usize..6, a in any::<u64>(), b in any::<u64>(), x in any::<u64>(), y in any::<u64>()) {
        let (u, v, l, r) = (haar(n, a), haar(n, b), haar(n, x), haar(n, y));
        let d0 = projective_distance(&u, &v).unwrap();
        let d1 = projective_distance(&(&l * &u * &r), &(&l * &v * &r)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn optimal_phase_beats_a_grid(n in 1usize..5, a in any::<u64>(), b in any::<u64>()) {
        let (u, v) = (haar(n, a), haar(n, b));
        let (d, w) = projective_distance_with_phase(&u, &v).unwrap();
        prop_assert!((op_norm(&(&u * w - &v)) - d).abs() < 1e-9);
        for s in 0..64 {
            let z = Complex64::from_polar(1.0, s as f64 * std::f64::consts::TAU / 64.0);
            prop_assert!(op_norm(&(&u * z - &v)) >= d - 1e-9);
        }
    }

    #[test]
    fn words_and_their_inverses(w in letters(6, 30)) {
        let rep = sector42();
        let word = BraidWord::new(6, w.clone()).unwrap();
        let m = evaluate(rep, &word).unwrap();
        prop_assert!(linalg::unitarity_residual(&m) < 1e-10);
        let back = evaluate(rep, &word.concat(&word.inverse()).unwrap()).unwrap();
        prop_assert!(op_norm(&(back - identity(rep.dim))) < 1e-9);
        let reduced = evaluate(rep, &BraidWord::new(6, free_reduce(&w)).unwrap()).unwrap();
        prop_assert!(op_norm(&(reduced - m)) < 1e-9);
    }

    #[test]
    fn concatenation_is_multiplication(a in letters(6, 12), b in letters(6, 12)) {
        let rep = sector42();
        let (wa, wb) = (BraidWord::new(6, a).unwrap(), BraidWord::new(6, b).unwrap());
        let lhs = evaluate(rep, &wa.concat(&wb).unwrap()).unwrap();
        let rhs = evaluate(rep, &wa).unwrap() * evaluate(rep, &wb).unwrap();
        prop_assert!(op_norm(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn log_round_trip(n in 2usize..6, a in any::<u64>()) {
        let u = haar(n, a);
        let x = principal_log(&u).unwrap();
        prop_assert!(op_norm(&(&x + x.adjoint())) < 1e-9);
        prop_assert!(linalg::trace(&x).norm() < 1e-9);
        // exp(log U) recovers U up to the removed determinant phase
        prop_assert!(projective_distance(&expm_skew_hermitian(&x), &u).unwrap() < 1e-9);
    }

    #[test]
    fn braids_preserve_norm(w in letters(12, 40), seed in any::<u64>()) {
        let reg = random_state(&register(4), seed);
        let out = reg.apply_braid(&BraidWord::new(12, w).unwrap()).unwrap();
        prop_assert!((out.state.norm() - 1.0).abs() < 1e-9);
        for i in 1..=4 {
            let (p1, p3) = out.label_probabilities(i).unwrap();
            prop_assert!((p1 + p3 - 1.0).abs() < 1e-9);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p3));
        }
    }

    #[test]
    fn two_triples_share_their_label(w in letters(6, 30), seed in any::<u64>()) {
        let reg = random_state(&register(2), seed).apply_braid(&BraidWord::new(6, w).unwrap()).unwrap();
        let (_, a) = reg.label_probabilities(1).unwrap();
        let (_, b) = reg.label_probabilities(2).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        for label in [1u8, 3] {
            if let Ok((_, post)) = reg.project_label(1, label) {
                let (_, p3) = post.label_probabilities(2).unwrap();
                let expect = if label == 3 { 1.0 } else { 0.0 };
                prop_assert!((p3 - expect).abs() < 1e-9);
                prop_assert!((post.state.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn leaked_phase_is_invisible_to_readout(w in letters(12, 30), seed in any::<u64>(), t in -3.2f64..3.2) {
        let reg = random_state(&register(4), seed).apply_braid(&BraidWord::new(12, w).unwrap()).unwrap();
        let phase = Complex64::from_polar(1.0, t);
        let leak = reg.enc.apply_label3(1, &reg.state).unwrap();
        let mut twisted = reg.clone();
        twisted.state = &reg.state + &leak * (phase - c(1.0, 0.0));
        prop_assert!((twisted.state.norm() - 1.0).abs() < 1e-9);
        let clean = |r: &EncodedRegister| -> Option<EncodedRegister> {
            let mut r = r.clone();
            for i in 1..=4 {
                r = r.project_label(i, 1).ok()?.1;
            }
            Some(r)
        };
        if let (Some(a), Some(b)) = (clean(&reg), clean(&twisted)) {
            for i in 1..=4 {
                let (p, _) = a.sigma_z_probabilities(i).unwrap();
                let (q, _) = b.sigma_z_probabilities(i).unwrap();
                prop_assert!((p - q).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn exact_encoded_gates_commute_with_label_projectors() {
    let enc = register(4);
    let iota = enc.isometry().unwrap();
    let g = haar(16, 11);
    let u = &iota * &g * iota.adjoint() + (identity(iota.nrows()) - &iota * iota.adjoint());
    for i in 1..=4 {
        let p = enc.label3_dense(i).unwrap();
        assert!(op_norm(&(&u * &p - &p * &u)) < 1e-9);
    }
    let reg = random_state(&enc, 5);
    let moved = CVec::from(&u * &reg.state);
    assert!((moved.norm() - 1.0).abs() < 1e-10);
}
