//! Four-band k.p Hamiltonian in the basis
//! `|P1,up>, |P2,up>, |P1,down>, |P2,down>` and the block-diagonal 2-D
//! edge model `diag(h_plus, h_minus)`.
//!
//! The in-plane combinations are `k_pm = kx +- i ky` and the in-plane
//! quadratic terms use `kx^2 + ky^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numerics::{eigh, HermitianMatrix};

/// Coefficients of the 3-D four-band model. All values are in dimensionless
/// model units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams3D {
    #[serde(rename = "A1", default)]
    pub a1: f64,
    #[serde(rename = "A2", default)]
    pub a2: f64,
    #[serde(rename = "B1", default)]
    pub b1: f64,
    #[serde(rename = "B2", default)]
    pub b2: f64,
    #[serde(rename = "C", default)]
    pub c: f64,
    #[serde(rename = "D1", default)]
    pub d1: f64,
    #[serde(rename = "D2", default)]
    pub d2: f64,
    #[serde(rename = "M", default)]
    pub m: f64,
}

impl ModelParams3D {
    /// Full parameter set reproducing a reduced `(A, B, M)` triple on the
    /// kz axis; every other coefficient is zero.
    pub fn from_reduced(r: ReducedParamsZ) -> Self {
        Self {
            a1: r.a,
            b1: r.b,
            m: r.m,
            ..Self::default()
        }
    }

    pub fn reduced(&self) -> ReducedParamsZ {
        ReducedParamsZ {
            a: self.a1,
            b: self.b1,
            m: self.m,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Momentum3 {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl Momentum3 {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn along_z(kz: f64) -> Self {
        Self { kx: 0.0, ky: 0.0, kz }
    }

    fn in_plane_sq(&self) -> f64 {
        self.kx * self.kx + self.ky * self.ky
    }

    /// `kx + i ky`
    pub fn k_plus(&self) -> Complex64 {
        Complex64::new(self.kx, self.ky)
    }

    /// `kx - i ky`
    pub fn k_minus(&self) -> Complex64 {
        Complex64::new(self.kx, -self.ky)
    }
}

/// The `(A, B, M)` triple governing physics along the kz axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ReducedParamsZ {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

impl ReducedParamsZ {
    pub fn new(a: f64, b: f64, m: f64) -> Self {
        Self { a, b, m }
    }

    /// `M - B kz^2`
    pub fn mass(&self, kz: f64) -> f64 {
        self.m - self.b * kz * kz
    }

    /// Positive branch energy `E(kz) = sqrt((M - B kz^2)^2 + (A kz)^2)`.
    pub fn energy(&self, kz: f64) -> f64 {
        self.mass(kz).hypot(self.a * kz)
    }
}

/// Parameters of `h_pm = v kx sx +- v ky sy + (m v^2 - B k^2) sz`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params2D {
    pub v: f64,
    pub m_v2: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl Params2D {
    pub fn new(v: f64, m_v2: f64, b: f64) -> Self {
        Self { v, m_v2, b }
    }

    /// The same dispersion written as a reduced `(A, B, M)` triple.
    pub fn as_reduced(&self) -> ReducedParamsZ {
        ReducedParamsZ::new(self.v, self.b, self.m_v2)
    }
}

/// Scalar kinetic offset `C + D1 kz^2 + D2 (kx^2 + ky^2)`.
pub fn epsilon_k(params: &ModelParams3D, k: &Momentum3) -> f64 {
    params.c + params.d1 * k.kz * k.kz + params.d2 * k.in_plane_sq()
}

/// Momentum-dependent mass `M - B1 kz^2 - B2 (kx^2 + ky^2)`.
pub fn mass_k(params: &ModelParams3D, k: &Momentum3) -> f64 {
    params.m - params.b1 * k.kz * k.kz - params.b2 * k.in_plane_sq()
}

/// Four-band Bloch Hamiltonian at momentum `k`.
pub fn hamiltonian_3d(params: &ModelParams3D, k: &Momentum3) -> HermitianMatrix {
    let eps = epsilon_k(params, k);
    let mass = mass_k(params, k);
    let re = |x: f64| Complex64::new(x, 0.0);
    let a2_kp = params.a2 * k.k_plus();
    let a2_km = params.a2 * k.k_minus();
    let a1_kz = re(params.a1 * k.kz);

    let mut h = HermitianMatrix::zeros(4).expect("dimension 4");
    h.set(0, 0, re(eps + mass));
    h.set(1, 1, re(eps - mass));
    h.set(2, 2, re(eps + mass));
    h.set(3, 3, re(eps - mass));
    h.set(0, 1, a2_kp);
    h.set(0, 3, a1_kz);
    h.set(1, 2, a1_kz);
    h.set(2, 3, -a2_km);
    h
}

/// `(-E, +E)` along the kz axis; `epsilon_k` is not included.
pub fn dispersion_z(params: &ReducedParamsZ, kz: f64) -> (f64, f64) {
    let e = params.energy(kz);
    (-e, e)
}

/// Block-diagonal 2-D Hamiltonian, spin-up block (`h_plus`) first.
pub fn hamiltonian_2d(params: &Params2D, kx: f64, ky: f64) -> HermitianMatrix {
    let mass = params.m_v2 - params.b * (kx * kx + ky * ky);
    let mut h = HermitianMatrix::zeros(4).expect("dimension 4");
    for (block, spin) in [(0usize, 1.0), (2usize, -1.0)] {
        h.set(block, block, Complex64::new(mass, 0.0));
        h.set(block + 1, block + 1, Complex64::new(-mass, 0.0));
        // <0| v kx sx + s v ky sy |1> = v (kx - i s ky)
        h.set(block, block + 1, Complex64::new(params.v * kx, -spin * params.v * ky));
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Trivial,
    Critical,
    Topological,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Trivial => "trivial",
            Phase::Critical => "critical",
            Phase::Topological => "topological",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies by the sign of `M/B`.
pub fn phase_classify(m: f64, b: f64) -> Result<Phase> {
    if b == 0.0 {
        return Err(ModelError::ZeroCurvature);
    }
    Ok(match (m * b).partial_cmp(&0.0) {
        Some(std::cmp::Ordering::Less) => Phase::Trivial,
        Some(std::cmp::Ordering::Greater) => Phase::Topological,
        _ => Phase::Critical,
    })
}

/// Checks the closed-form kz-axis dispersion against a numerical
/// diagonalization of the full Hamiltonian. Returns the largest deviation.
pub fn dispersion_self_check(params: &ReducedParamsZ, kz: f64) -> Result<f64> {
    let full = ModelParams3D::from_reduced(*params);
    let h = hamiltonian_3d(&full, &Momentum3::along_z(kz));
    let dec = eigh(&h)?;
    let (lo, hi) = dispersion_z(params, kz);
    let expected = [lo, lo, hi, hi];
    Ok(dec
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(m: f64, b1: f64, a1: f64) -> ModelParams3D {
        ModelParams3D { m, b1, a1, ..Default::default() }
    }

    #[test]
    fn epsilon_examples() {
        let zero = ModelParams3D::default();
        assert_eq!(epsilon_k(&zero, &Momentum3::new(1.0, 2.0, 3.0)), 0.0);
        let p = ModelParams3D { c: 1.0, d1: 2.0, ..Default::default() };
        assert_eq!(epsilon_k(&p, &Momentum3::along_z(3.0)), 19.0);
        let p = ModelParams3D { c: 0.5, d1: 1.0, d2: 2.0, ..Default::default() };
        assert_eq!(epsilon_k(&p, &Momentum3::new(1.0, 1.0, 1.0)), 5.5);
    }

    #[test]
    fn mass_examples() {
        assert_eq!(mass_k(&p3(2.0, 0.1, 0.0), &Momentum3::default()), 2.0);
        assert!(mass_k(&p3(2.0, 0.1, 0.0), &Momentum3::along_z(20f64.sqrt())).abs() < 1e-14);
        assert!((mass_k(&p3(1.3, 1.0, 0.0), &Momentum3::along_z(2.0)) + 2.7).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_3d_examples() {
        let h = hamiltonian_3d(&ModelParams3D::default(), &Momentum3::new(0.3, -1.0, 2.0));
        assert_eq!(h.max_abs(), 0.0);

        let h = hamiltonian_3d(&p3(2.0, 0.0, 0.0), &Momentum3::default());
        let expected = HermitianMatrix::from_real_diagonal(&[2.0, -2.0, 2.0, -2.0]).unwrap();
        assert_eq!(h, expected);

        let h = hamiltonian_3d(&p3(2.0, 0.1, 4.0), &Momentum3::along_z(1.0));
        let dec = eigh(&h).unwrap();
        let e = (1.9f64.powi(2) + 16.0).sqrt();
        for (got, want) in dec.eigenvalues.iter().zip([-e, -e, e, e]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((e - 4.42832).abs() < 1e-5);
    }

    #[test]
    fn hamiltonian_3d_entries_follow_basis_layout() {
        let p = ModelParams3D { a1: 1.5, a2: 2.0, m: 0.7, ..Default::default() };
        let k = Momentum3::new(0.3, 0.4, 0.5);
        let h = hamiltonian_3d(&p, &k);
        assert_eq!(h.get(0, 1), Complex64::new(0.6, 0.8));
        assert_eq!(h.get(1, 0), Complex64::new(0.6, -0.8));
        assert_eq!(h.get(3, 2), Complex64::new(-0.6, -0.8));
        assert_eq!(h.get(0, 3), Complex64::new(0.75, 0.0));
        assert_eq!(h.get(2, 1), Complex64::new(0.75, 0.0));
        assert_eq!(h.get(0, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dispersion_examples() {
        let r = ReducedParamsZ::new(4.0, 0.1, 2.0);
        assert_eq!(dispersion_z(&r, 0.0), (-2.0, 2.0));
        let (_, e) = dispersion_z(&r, 20f64.sqrt());
        assert!((e - 4.0 * 20f64.sqrt()).abs() < 1e-12);
        assert!((e - 17.88854).abs() < 1e-5);

        let r = ReducedParamsZ::new(0.2, 1.0, 1.3);
        let (_, e) = dispersion_z(&r, 1.28f64.sqrt());
        assert!((e - 0.0516f64.sqrt()).abs() < 1e-12);
        assert!((e - 0.22716).abs() < 1e-5);
    }

    #[test]
    fn hamiltonian_2d_examples() {
        assert_eq!(hamiltonian_2d(&Params2D::default(), 0.4, 0.1).max_abs(), 0.0);
        let h = hamiltonian_2d(&Params2D::new(0.0, 1.0, 0.0), 0.0, 0.0);
        assert_eq!(h, HermitianMatrix::from_real_diagonal(&[1.0, -1.0, 1.0, -1.0]).unwrap());
        let h = hamiltonian_2d(&Params2D::new(1.0, 1.0, 1.0), 0.5, 0.0);
        let dec = eigh(&h).unwrap();
        let e = (0.25f64 + 0.5625).sqrt();
        for (got, want) in dec.eigenvalues.iter().zip([-e, -e, e, e]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((e - 0.901388).abs() < 1e-6);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase_classify(-1.3, 1.0).unwrap(), Phase::Trivial);
        assert_eq!(phase_classify(0.0, 1.0).unwrap(), Phase::Critical);
        assert_eq!(phase_classify(1.3, 1.0).unwrap(), Phase::Topological);
        assert_eq!(phase_classify(1.0, 0.0), Err(ModelError::ZeroCurvature));
        assert_eq!(phase_classify(1.3, -1.0).unwrap(), phase_classify(-1.3, 1.0).unwrap());
    }

    #[test]
    fn params_json_keys() {
        let p: ModelParams3D = serde_json::from_str(r#"{"A1": 4, "M": 2, "B1": 0.1}"#).unwrap();
        assert_eq!(p, p3(2.0, 0.1, 4.0));
        let q: Params2D = serde_json::from_str(r#"{"v": 1, "m_v2": 0.5, "B": 1}"#).unwrap();
        assert_eq!(q, Params2D::new(1.0, 0.5, 1.0));
    }
}
