use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::encoding::{EncodedRegister, Encoding};
use super::min_phase_distance;
use crate::compiler::gates::{one_qubit, two_qubit};
use crate::compiler::{Toolkit, TARGET_TOL};
use crate::error::{domain, Error, Result};
use crate::fixtures::{matrix_from_json, JsonMatrix};
use crate::jonesrep::BraidWord;
use crate::linalg::{unitarity_residual, CMat, CVec, ONE, ZERO};

/// Largest register for the dense reference simulator.
pub const MAX_REFERENCE_QUBITS: usize = 10;
/// Largest register for which the whole-braid operator error is computed.
pub const MAX_ERROR_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    /// `"1q"` or `"2q"`.
    pub kind: String,
    /// 1-based qubit indices; a two-qubit gate acts on adjacent `(i, i + 1)`.
    pub sites: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<JsonMatrix>,
}

fn default_shots() -> usize {
    1000
}
fn default_epsilon() -> f64 {
    1e-2
}
fn default_budget() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub k: usize,
    pub gates: Vec<GateSpec>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub seed: u64,
    /// Input bit string, qubit 1 first; all zeros when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    /// Qubits read out, in output-bit order; all qubits when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<Vec<usize>>,
}

impl GateSpec {
    pub fn arity(&self) -> Result<usize> {
        match self.kind.as_str() {
            "1q" => Ok(1),
            "2q" => Ok(2),
            other => Err(domain!("gate kind {other:?} (expected \"1q\" or \"2q\")")),
        }
    }

    pub fn unitary(&self) -> Result<CMat> {
        let a = self.arity()?;
        let m = match (&self.name, &self.matrix) {
            (Some(_), Some(_)) => return Err(domain!("gate has both a name and a matrix")),
            (Some(n), None) => {
                let g = if a == 1 { one_qubit(n) } else { two_qubit(n) };
                g.ok_or_else(|| domain!("unknown {} gate {n:?}", self.kind))?
            }
            (None, Some(m)) => matrix_from_json(m)?,
            (None, None) => return Err(domain!("gate needs a name or a matrix")),
        };
        let d = 1 << a;
        if m.shape() != (d, d) {
            return Err(domain!("{} gate matrix must be {d}x{d}", self.kind));
        }
        let res = unitarity_residual(&m);
        if res > TARGET_TOL {
            return Err(domain!("gate matrix is not unitary (residual {res:e})"));
        }
        Ok(m)
    }
}

impl Circuit {
    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn input_bits(&self) -> Result<Vec<u8>> {
        match &self.input {
            None => Ok(vec![0; self.k]),
            Some(s) => {
                let bits: Vec<u8> = s
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(domain!("input {s:?} is not a bit string")),
                    })
                    .collect::<Result<_>>()?;
                if bits.len() != self.k {
                    return Err(domain!("input has {} bits, k = {}", bits.len(), self.k));
                }
                Ok(bits)
            }
        }
    }

    pub fn readout_sites(&self) -> Vec<usize> {
        self.readout.clone().unwrap_or_else(|| (1..=self.k).collect())
    }

    /// Check everything that does not need compilation.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(domain!("k must be positive"));
        }
        for (n, g) in self.gates.iter().enumerate() {
            let a = g.arity()?;
            if g.sites.len() != a {
                return Err(domain!("gate {n}: {} sites for a {} gate", g.sites.len(), g.kind));
            }
            if g.sites.iter().any(|&s| s == 0 || s > self.k) {
                return Err(domain!("gate {n}: sites {:?} outside 1..={}", g.sites, self.k));
            }
            if a == 2 && g.sites[1] != g.sites[0] + 1 {
                return Err(domain!("gate {n}: two-qubit gates act on adjacent (i, i+1)"));
            }
            g.unitary()?;
        }
        let ro = self.readout_sites();
        if ro.is_empty() || ro.iter().any(|&s| s == 0 || s > self.k) {
            return Err(domain!("readout sites {ro:?} outside 1..={}", self.k));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(domain!("epsilon must be positive"));
        }
        self.input_bits()?;
        Ok(())
    }
}

fn bits_of(x: usize, k: usize) -> Vec<u8> {
    (0..k).map(|i| ((x >> (k - 1 - i)) & 1) as u8).collect()
}

fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Apply a `2^m x 2^m` gate to `sites` (first site most significant) of a `k`-qubit state.
pub fn apply_gate(state: &mut CVec, k: usize, sites: &[usize], u: &CMat) {
    let pos: Vec<usize> = sites.iter().map(|&s| k - s).collect();
    let mask: usize = pos.iter().map(|p| 1 << p).sum();
    let m = sites.len();
    let offsets: Vec<usize> = (0..1 << m)
        .map(|j| {
            (0..m)
                .filter(|&t| (j >> (m - 1 - t)) & 1 == 1)
                .map(|t| 1 << pos[t])
                .sum()
        })
        .collect();
    for base in 0..state.len() {
        if base & mask != 0 {
            continue;
        }
        let amps: Vec<_> = offsets.iter().map(|&o| state[base | o]).collect();
        for (r, &o) in offsets.iter().enumerate() {
            state[base | o] = (0..amps.len()).map(|col| u[(r, col)] * amps[col]).sum();
        }
    }
}

/// Exact `2^k x 2^k` unitary of the circuit.
pub fn circuit_unitary(c: &Circuit) -> Result<CMat> {
    c.validate()?;
    if c.k > MAX_REFERENCE_QUBITS {
        return Err(Error::Resource(format!("k = {} exceeds {MAX_REFERENCE_QUBITS}", c.k)));
    }
    let n = 1 << c.k;
    let mut out = CMat::identity(n, n);
    for col in 0..n {
        let mut v = CVec::zeros(n);
        v[col] = ONE;
        for g in &c.gates {
            apply_gate(&mut v, c.k, &g.sites, &g.unitary()?);
        }
        out.set_column(col, &v);
    }
    Ok(out)
}

/// Exact readout distribution by dense state-vector simulation.
pub fn reference_qcm(c: &Circuit) -> Result<BTreeMap<String, f64>> {
    c.validate()?;
    if c.k > MAX_REFERENCE_QUBITS {
        return Err(Error::Resource(format!("k = {} exceeds {MAX_REFERENCE_QUBITS}", c.k)));
    }
    let n = 1 << c.k;
    let mut v = CVec::from_element(n, ZERO);
    v[index_of(&c.input_bits()?)] = ONE;
    for g in &c.gates {
        apply_gate(&mut v, c.k, &g.sites, &g.unitary()?);
    }
    let ro = c.readout_sites();
    let mut dist = BTreeMap::new();
    for x in 0..n {
        let p = v[x].norm_sqr();
        if p < 1e-15 {
            continue;
        }
        let bits = bits_of(x, c.k);
        let key: String = ro.iter().map(|&s| if bits[s - 1] == 1 { '1' } else { '0' }).collect();
        *dist.entry(key).or_insert(0.0) += p;
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub index: usize,
    pub kind: String,
    pub sites: Vec<usize>,
    pub length: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub distribution: BTreeMap<String, f64>,
    pub leakage_rate: f64,
    pub braid_length: usize,
    /// `min_w ||w rho(b) iota - iota U||` over the encoded space (small registers only).
    pub whole_braid_error: Option<f64>,
    pub compile_report: Vec<GateReport>,
    pub shots: usize,
    pub seed: u64,
    /// Shots in which some triple was found with label 3.
    pub leaked_shots: Vec<usize>,
}

/// Compile every gate, braid once, then check labels and read out `sigma_z` per shot.
///
/// A qubit whose triple is found with label 3 reads out as a uniformly random bit.
pub fn simulate_circuit(c: &Circuit, kit: &Toolkit) -> Result<SimulationResult> {
    c.validate()?;
    if !c.k.is_multiple_of(2) {
        return Err(domain!("k must be even"));
    }
    if c.shots < 1 {
        return Err(domain!("at least one shot is needed"));
    }
    let enc = Encoding::register(c.k, &kit.ctx)?;
    let n = 3 * c.k;
    let mut words = Vec::new();
    let mut report = Vec::new();
    for (index, g) in c.gates.iter().enumerate() {
        let u = g.unitary()?;
        let offset = 3 * (g.sites[0] - 1);
        let cb = if g.arity()? == 1 {
            kit.compile_one_qubit(&u, c.epsilon)?
        } else {
            kit.compile_two_qubit(&u, c.budget, c.seed)?
        };
        report.push(GateReport {
            index,
            kind: g.kind.clone(),
            sites: g.sites.clone(),
            length: cb.length,
            distance: cb.distance,
        });
        words.push(cb.word.embed(offset, n)?);
    }
    // the first gate acts first, so it is the rightmost factor
    let mut braid = BraidWord::empty(n);
    for w in words.iter().rev() {
        braid = braid.concat(w)?;
    }

    let whole_braid_error = if c.k <= MAX_ERROR_QUBITS {
        let iota = enc.isometry()?;
        let mut img = CMat::zeros(iota.nrows(), iota.ncols());
        for col in 0..iota.ncols() {
            let v: CVec = iota.column(col).into_owned();
            img.set_column(col, &enc.action.apply_word(&braid, &v)?);
        }
        let exact = &iota * circuit_unitary(c)?;
        Some(min_phase_distance(&img, &exact))
    } else {
        None
    };

    let reg = EncodedRegister::from_bits(enc.clone(), &c.input_bits()?)?.apply_braid(&braid)?;
    let ro = c.readout_sites();
    let outcomes: Vec<(String, bool)> = (0..c.shots)
        .into_par_iter()
        .map(|shot| -> Result<(String, bool)> {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            rng.set_stream(shot as u64);
            let mut st = reg.clone();
            let mut leaked = vec![false; c.k];
            for i in 1..=c.k {
                let (rec, next) = st.measure_label(i, &mut rng)?;
                leaked[i - 1] = rec.outcome == 3;
                st = next;
            }
            let mut key = String::with_capacity(ro.len());
            for &i in &ro {
                let bit = if leaked[i - 1] {
                    rng.random::<bool>() as u8
                } else {
                    let (rec, next) = st.measure_sigma_z(i, &mut rng)?;
                    st = next;
                    rec.outcome
                };
                key.push(if bit == 1 { '1' } else { '0' });
            }
            Ok((key, leaked.iter().any(|&x| x)))
        })
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut leaked_shots = Vec::new();
    for (shot, (key, leak)) in outcomes.into_iter().enumerate() {
        *counts.entry(key).or_insert(0) += 1;
        if leak {
            leaked_shots.push(shot);
        }
    }
    let distribution = counts
        .into_iter()
        .map(|(key, n)| (key, n as f64 / c.shots as f64))
        .collect();
    Ok(SimulationResult {
        distribution,
        leakage_rate: leaked_shots.len() as f64 / c.shots as f64,
        braid_length: braid.len(),
        whole_braid_error,
        compile_report: report,
        shots: c.shots,
        seed: c.seed,
        leaked_shots,
    })
}

/// Total-variation distance between two distributions over bit strings.
pub fn total_variation(p: &BTreeMap<String, f64>, q: &BTreeMap<String, f64>) -> f64 {
    let mut keys: Vec<&String> = p.keys().chain(q.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}
