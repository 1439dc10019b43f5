//! Single-qubit statevector simulation, enough for Wiesner banknotes and
//! measure-and-prepare counterfeiters. Qubits are simulated independently;
//! there is no entanglement.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QubitError {
    #[error("state is not normalised (|a0|^2 + |a1|^2 = {0})")]
    Normalization(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Computational basis `{|0>, |1>}`.
    Z,
    /// Hadamard basis `{|+>, |->}`.
    X,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    amp0: Complex64,
    amp1: Complex64,
}

impl Qubit {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self, QubitError> {
        let q = Qubit { amp0, amp1 };
        q.check_norm()?;
        Ok(q)
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp0, self.amp1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    fn check_norm(&self) -> Result<(), QubitError> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            Err(QubitError::Normalization(n))
        } else {
            Ok(())
        }
    }

    /// Amplitudes in the requested basis, as `(<e0|psi>, <e1|psi>)`.
    fn in_basis(&self, basis: Basis) -> (Complex64, Complex64) {
        match basis {
            Basis::Z => (self.amp0, self.amp1),
            Basis::X => (
                (self.amp0 + self.amp1) * FRAC_1_SQRT_2,
                (self.amp0 - self.amp1) * FRAC_1_SQRT_2,
            ),
        }
    }
}

/// `Z,0 -> |0>`, `Z,1 -> |1>`, `X,0 -> |+>`, `X,1 -> |->`.
pub fn prepare(basis: Basis, bit: bool) -> Qubit {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let (amp0, amp1) = match (basis, bit) {
        (Basis::Z, false) => (one, zero),
        (Basis::Z, true) => (zero, one),
        (Basis::X, false) => (r, r),
        (Basis::X, true) => (r, -r),
    };
    Qubit { amp0, amp1 }
}

pub fn born_probability(q: &Qubit, basis: Basis, outcome: bool) -> f64 {
    let (e0, e1) = q.in_basis(basis);
    let p = if outcome { e1.norm_sqr() } else { e0.norm_sqr() };
    p.clamp(0.0, 1.0)
}

/// Projective measurement; `q` collapses to the observed eigenstate.
pub fn measure<R: Rng + ?Sized>(q: &mut Qubit, basis: Basis, rng: &mut R) -> Result<bool, QubitError> {
    q.check_norm()?;
    let p1 = born_probability(q, basis, true);
    let outcome = rng.gen::<f64>() < p1;
    *q = prepare(basis, outcome);
    Ok(outcome)
}
