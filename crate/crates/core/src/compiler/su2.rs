//! `SU(2)` modulo `+-1`, stored as the first row `(a, b)` of `[[a, b], [-b*, a*]]`.

use num_complex::Complex64;

use crate::linalg::{c, CMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    pub a: Complex64,
    pub b: Complex64,
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    /// Projectivize a `2x2` unitary: divide by a square root of its determinant.
    pub fn from_unitary(u: &CMat) -> Self {
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        let s = det.sqrt();
        Su2 {
            a: u[(0, 0)] / s,
            b: u[(0, 1)] / s,
        }
        .normalized()
    }

    pub fn to_matrix(&self) -> CMat {
        CMat::from_row_slice(2, 2, &[self.a, self.b, -self.b.conj(), self.a.conj()])
    }

    pub fn normalized(&self) -> Self {
        let n = (self.a.norm_sqr() + self.b.norm_sqr()).sqrt();
        Su2 {
            a: self.a / n,
            b: self.b / n,
        }
    }

    pub fn mul(&self, o: &Su2) -> Su2 {
        Su2 {
            a: self.a * o.a - self.b * o.b.conj(),
            b: self.a * o.b + self.b * o.a.conj(),
        }
    }

    pub fn inv(&self) -> Su2 {
        Su2 {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a.re, self.a.im, self.b.re, self.b.im]
    }

    pub fn from_coords(p: [f64; 4]) -> Self {
        Su2 {
            a: c(p[0], p[1]),
            b: c(p[2], p[3]),
        }
    }

    /// Projective operator-norm distance; equals `min |p -+ q|` on the unit 3-sphere.
    pub fn dist(&self, o: &Su2) -> f64 {
        let minus = (self.a - o.a).norm_sqr() + (self.b - o.b).norm_sqr();
        let plus = (self.a + o.a).norm_sqr() + (self.b + o.b).norm_sqr();
        minus.min(plus).sqrt()
    }

    /// `exp(-i theta/2 n.sigma)` for a unit axis `n`.
    pub fn rotation(theta: f64, n: [f64; 3]) -> Su2 {
        let (s, w) = (0.5 * theta).sin_cos();
        let (x, y, z) = (s * n[0], s * n[1], s * n[2]);
        Su2 {
            a: c(w, -z),
            b: c(-y, -x),
        }
    }

    /// Rotation angle in `[0, pi]` and unit axis of the representative with `Re a >= 0`.
    pub fn axis_angle(&self) -> (f64, [f64; 3]) {
        let sign = if self.a.re < 0.0 { -1.0 } else { 1.0 };
        let w = sign * self.a.re;
        let v = [-sign * self.b.im, -sign * self.b.re, -sign * self.a.im];
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = 2.0 * s.atan2(w);
        if s < 1e-300 {
            (0.0, [0.0, 0.0, 1.0])
        } else {
            (theta, [v[0] / s, v[1] / s, v[2] / s])
        }
    }
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot3(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn normalize3(u: [f64; 3]) -> [f64; 3] {
    let n = dot3(u, u).sqrt();
    [u[0] / n, u[1] / n, u[2] / n]
}

/// Element whose conjugation action rotates axis `m` onto axis `n`.
fn align(m: [f64; 3], n: [f64; 3]) -> Su2 {
    let cos = dot3(m, n).clamp(-1.0, 1.0);
    let axis = cross(m, n);
    let s = dot3(axis, axis).sqrt();
    if s < 1e-14 {
        if cos > 0.0 {
            return Su2::IDENTITY;
        }
        // antiparallel: any perpendicular axis, half turn
        let t = if m[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        return Su2::rotation(std::f64::consts::PI, normalize3(cross(m, t)));
    }
    Su2::rotation(s.atan2(cos), normalize3(axis))
}

/// Balanced group commutator: `V W V^-1 W^-1 = delta` (mod `+-1`) with `V`, `W`
/// rotations by the same angle about orthogonal axes.
pub fn group_commutator(delta: &Su2) -> (Su2, Su2) {
    let (theta, n) = delta.axis_angle();
    if theta < 1e-15 {
        return (Su2::IDENTITY, Su2::IDENTITY);
    }
    let st = (0.5 * theta).sin();
    // sin(theta/2) = 2 s sqrt(1 - s^2) with s = sin^2(phi/2)
    let s = ((1.0 - (1.0 - st * st).max(0.0).sqrt()) / 2.0).sqrt();
    let phi = 2.0 * s.sqrt().asin();
    let v = Su2::rotation(phi, [1.0, 0.0, 0.0]);
    let w = Su2::rotation(phi, [0.0, 1.0, 0.0]);
    let comm = v.mul(&w).mul(&v.inv()).mul(&w.inv());
    let (_, m) = comm.axis_angle();
    let s = align(m, n);
    (s.mul(&v).mul(&s.inv()), s.mul(&w).mul(&s.inv()))
}
