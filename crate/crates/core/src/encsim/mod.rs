//! Qubits encoded in disk spaces, braided and measured at the end.
//!
//! A register of `k` qubits lives in the boundary-0 sector `[3k/2, 3k/2]` of
//! `B(3k)`. Each triple of marked points carries one qubit: `|0>` is the fusion channel
//! where the triple's first pair fuses to label 0 (eigenvalue 1 of `e_{3i-2}`), `|1>`
//! the channel where it fuses to label 2. The triple as a whole has label 1 on the
//! computational space and label 3 once it has leaked.

mod circuit;
mod encoding;

pub use circuit::{
    apply_gate, circuit_unitary, reference_qcm, simulate_circuit, total_variation, Circuit, GateReport, GateSpec,
    SimulationResult,
};
pub use encoding::{
    encode, one_qubit_target, two_qubit_target, EncodedRegister, Encoding, MeasurementKind, MeasurementRecord,
};

use crate::compiler::CompiledBraid;
use crate::error::Result;
use crate::jonesrep::BraidWord;
use crate::linalg::{c, op_norm, CMat};

/// `min_{|w|=1} ||w M - A||` for rectangular `M`, `A` of equal shape.
///
/// Coarse scan of the phase circle followed by golden-section refinement.
pub fn min_phase_distance(m: &CMat, a: &CMat) -> f64 {
    let f = |t: f64| op_norm(&(m * num_complex::Complex64::from_polar(1.0, t) - a));
    let steps = 360;
    let h = 2.0 * std::f64::consts::PI / steps as f64;
    let (mut bt, mut bv) = (0.0, f(0.0));
    for s in 1..steps {
        let t = s as f64 * h;
        let v = f(t);
        if v < bv {
            bt = t;
            bv = v;
        }
    }
    let (mut lo, mut hi) = (bt - h, bt + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    bv.min(f1).min(f2)
}

/// Leakage of a near-identity two-qubit braid.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LeakageSample {
    pub delta: f64,
    /// Summed projective distance of the braid to the identity on `[3,3]` and `[4,2]`.
    pub distance: f64,
    /// Mean label-3 probability on triple 1 over the four encoded basis inputs.
    pub leakage: f64,
    pub length: usize,
}

/// Braids that approximate the identity two-qubit gate at a controlled distance.
///
/// For each `delta` the single-qubit rotation `exp(-i delta X)` is compiled on the
/// middle strands 3-5 and commuted with `sigma_3`; the commutator has exponent sum 0
/// and its distance to the identity shrinks linearly with `delta`. Its leakage is
/// read off the exact label-3 projector of the `k = 2` register.
pub fn identity_leakage_probe(kit: &crate::compiler::Toolkit, deltas: &[f64], eps: f64) -> Result<Vec<LeakageSample>> {
    let enc = Encoding::register(2, &kit.ctx)?;
    let pair = kit.pair();
    let mut out = Vec::new();
    for &delta in deltas {
        let (s, co) = delta.sin_cos();
        let rot = CMat::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]);
        let a: CompiledBraid = kit.compile_one_qubit(&rot, eps)?;
        let a6 = a.word.embed(2, 6)?;
        let s3 = BraidWord::new(6, vec![3])?;
        let h = a6.concat(&s3)?.concat(&a6.inverse())?.concat(&s3.inverse())?;
        let ident = crate::compiler::GateTarget::new(vec![
            ("[3,3]".into(), crate::linalg::identity(pair[0].dim)),
            ("[4,2]".into(), crate::linalg::identity(pair[1].dim)),
        ])?;
        let measured = CompiledBraid::measure(h.clone(), &ident, &pair)?;
        let mut leak = 0.0;
        for x in 0..4usize {
            let bits = [(x >> 1) as u8 & 1, x as u8 & 1];
            let reg = EncodedRegister::from_bits(enc.clone(), &bits)?.apply_braid(&h)?;
            leak += reg.label_probabilities(1)?.1;
        }
        out.push(LeakageSample {
            delta,
            distance: measured.distance,
            leakage: leak / 4.0,
            length: h.len(),
        });
    }
    Ok(out)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
