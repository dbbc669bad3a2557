//! Explicit gate matrices.
//!
//! Two-qubit matrices use the index `b0 + 2*b1`, where `b0` is the bit of the
//! first listed target (the control for `CX`/`CY`).

use super::Gate;
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_1_SQRT_2;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

const O: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

pub fn matrix_1q(gate: Gate) -> M2 {
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    match gate {
        Gate::H => [[h, h], [h, -h]],
        Gate::S => [[ONE, O], [O, I]],
        Gate::Sdg => [[ONE, O], [O, -I]],
        Gate::X => [[O, ONE], [ONE, O]],
        Gate::Y => [[O, -I], [I, O]],
        Gate::Z => [[ONE, O], [O, -ONE]],
        Gate::RX(a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]]
        }
        Gate::RY(a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            [[C::new(c, 0.0), C::new(-s, 0.0)], [C::new(s, 0.0), C::new(c, 0.0)]]
        }
        Gate::RZ(a) => [[C::from_polar(1.0, -a / 2.0), O], [O, C::from_polar(1.0, a / 2.0)]],
        Gate::CX | Gate::CY | Gate::MS(_) => panic!("{} is a two-qubit gate", gate.mnemonic()),
    }
}

pub fn matrix_2q(gate: Gate) -> M4 {
    let mut m = [[O; 4]; 4];
    match gate {
        Gate::CX => {
            m[0][0] = ONE;
            m[2][2] = ONE;
            m[3][1] = ONE;
            m[1][3] = ONE;
        }
        Gate::CY => {
            m[0][0] = ONE;
            m[2][2] = ONE;
            // control set: |c=1,t=0> -> i|c=1,t=1>, |c=1,t=1> -> -i|c=1,t=0>
            m[3][1] = I;
            m[1][3] = -I;
        }
        Gate::MS(a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = C::new(c, 0.0);
                row[i ^ 3] = C::new(0.0, -s);
            }
        }
        _ => panic!("{} is a one-qubit gate", gate.mnemonic()),
    }
    m
}

/// True when `a = e^{i phi} b` entrywise within `tol` for some global phase.
pub fn equal_up_to_phase(a: &[Vec<C>], b: &[Vec<C>], tol: f64) -> bool {
    let mut overlap = O;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            overlap += y.conj() * x;
        }
    }
    if overlap.norm() < 1e-300 {
        return false;
    }
    let phase = overlap / overlap.norm();
    a.iter()
        .zip(b)
        .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - phase * y).norm() <= tol))
}
