//! Named gates in the computational basis (qubit 1 is the most significant bit).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{c, CMat, ONE, ZERO};

pub fn one_qubit(name: &str) -> Option<CMat> {
    let h = FRAC_1_SQRT_2;
    let m = |e: [Complex64; 4]| CMat::from_row_slice(2, 2, &e);
    let t = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    Some(match name.to_ascii_lowercase().as_str() {
        "id" | "i" => m([ONE, ZERO, ZERO, ONE]),
        "x" => m([ZERO, ONE, ONE, ZERO]),
        "y" => m([ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        "z" => m([ONE, ZERO, ZERO, -ONE]),
        "h" => m([c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
        "s" => m([ONE, ZERO, ZERO, c(0.0, 1.0)]),
        "sdg" => m([ONE, ZERO, ZERO, c(0.0, -1.0)]),
        "t" => m([ONE, ZERO, ZERO, t]),
        "tdg" => m([ONE, ZERO, ZERO, t.conj()]),
        "sx" => m([c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)]),
        _ => return None,
    })
}

pub fn two_qubit(name: &str) -> Option<CMat> {
    let mut m = CMat::identity(4, 4);
    match name.to_ascii_lowercase().as_str() {
        "id2" => {}
        "cz" => m[(3, 3)] = -ONE,
        "cs" => m[(3, 3)] = c(0.0, 1.0),
        "cnot" | "cx" => {
            m[(2, 2)] = ZERO;
            m[(3, 3)] = ZERO;
            m[(2, 3)] = ONE;
            m[(3, 2)] = ONE;
        }
        "swap" => {
            m[(1, 1)] = ZERO;
            m[(2, 2)] = ZERO;
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
        }
        _ => return None,
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_residual;

    #[test]
    fn named_gates_are_unitary() {
        for n in ["id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "sx"] {
            assert!(unitarity_residual(&one_qubit(n).unwrap()) < 1e-15, "{n}");
        }
        for n in ["id2", "cz", "cs", "cnot", "swap"] {
            assert!(unitarity_residual(&two_qubit(n).unwrap()) < 1e-15, "{n}");
        }
        assert!(one_qubit("nope").is_none());
    }
}
