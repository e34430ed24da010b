//! Spin-orbital entanglement of four-component states.
//!
//! The Hamiltonian basis `|P1,up>, |P2,up>, |P1,down>, |P2,down>` is already
//! lexicographic in (spin, orbital), so a spinor maps onto two qubits as
//! `|00> = |up,P1>`, `|01> = |up,P2>`, `|10> = |down,P1>`, `|11> = |down,P2>`
//! with spin as the first qubit.

use num_complex::Complex64;

use crate::error::{ModelError, Result};
use crate::states::{Spinor4, NORM_TOL};

/// Normalized two-qubit pure state, amplitudes indexed `2 * spin + orbital`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPure {
    amplitudes: [Complex64; 4],
}

impl TwoQubitPure {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(ModelError::Unnormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: [f64; 4]) -> Result<Self> {
        Self::new(values.map(|x| Complex64::new(x, 0.0)))
    }

    /// `(a |00> + |11>) / sqrt(1 + a^2)`
    pub fn pair_one(a: f64) -> Self {
        let n = a.hypot(1.0);
        Self {
            amplitudes: [a / n, 0.0, 0.0, 1.0 / n].map(|x| Complex64::new(x, 0.0)),
        }
    }

    /// `(a |10> + |01>) / sqrt(1 + a^2)`
    pub fn pair_two(a: f64) -> Self {
        let n = a.hypot(1.0);
        Self {
            amplitudes: [0.0, 1.0 / n, a / n, 0.0].map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    fn amp(&self, spin: usize, orbital: usize) -> Complex64 {
        self.amplitudes[2 * spin + orbital]
    }
}

/// Relabels a normalized spinor as a (spin, orbital) two-qubit state.
pub fn from_spinor(spinor: &Spinor4) -> Result<TwoQubitPure> {
    TwoQubitPure::new(spinor.amplitudes)
}

/// Pure-state concurrence `|<psi| sy (x) sy |psi*>|`.
pub fn concurrence(state: &TwoQubitPure) -> f64 {
    // sy (x) sy = antidiag(-1, 1, 1, -1)
    let a = &state.amplitudes;
    let flipped = [-a[3].conj(), a[2].conj(), a[1].conj(), -a[0].conj()];
    let overlap: Complex64 = a.iter().zip(&flipped).map(|(x, y)| x.conj() * y).sum();
    overlap.norm().clamp(0.0, 1.0)
}

/// `2|a| / (1 + a^2)`, the concurrence of `(a|00> + |11>)/sqrt(1 + a^2)`.
pub fn concurrence_analytic(a: f64) -> f64 {
    if a.is_infinite() {
        return 0.0;
    }
    // 2|a|/(1+a^2) = 2 / (|a| + 1/|a|), stable for large |a|
    let x = a.abs();
    if x > 1.0 {
        2.0 / (x + 1.0 / x)
    } else {
        2.0 * x / (1.0 + x * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Spin,
    Orbital,
}

/// 2x2 reduced density matrix of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensity {
    pub matrix: [[Complex64; 2]; 2],
}

impl ReducedDensity {
    pub fn trace(&self) -> f64 {
        self.matrix[0][0].re + self.matrix[1][1].re
    }

    /// Ascending eigenvalues from the 2x2 closed form.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let p = self.matrix[0][0].re;
        let q = self.matrix[1][1].re;
        let off = self.matrix[0][1].norm();
        let mean = 0.5 * (p + q);
        let radius = (0.5 * (p - q)).hypot(off);
        [mean - radius, mean + radius]
    }
}

/// Partial trace over the qubit that is not kept.
pub fn reduced_density(state: &TwoQubitPure, keep: Subsystem) -> ReducedDensity {
    let zero = Complex64::new(0.0, 0.0);
    let mut rho = [[zero; 2]; 2];
    for (r, row) in rho.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            *entry = (0..2)
                .map(|t| match keep {
                    Subsystem::Spin => state.amp(r, t) * state.amp(c, t).conj(),
                    Subsystem::Orbital => state.amp(t, r) * state.amp(t, c).conj(),
                })
                .sum();
        }
    }
    ReducedDensity { matrix: rho }
}

/// `-sum lambda log2 lambda` over the eigenvalues of the spin-reduced state.
pub fn entropy(state: &TwoQubitPure) -> f64 {
    let s: f64 = reduced_density(state, Subsystem::Spin)
        .eigenvalues()
        .iter()
        .map(|&l| l.max(0.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    s.clamp(0.0, 1.0)
}

pub fn is_bell(state: &TwoQubitPure, tol: f64) -> bool {
    concurrence(state) >= 1.0 - tol
}
