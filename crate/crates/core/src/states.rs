//! Closed-form eigenstates: bulk spinors along kz and the zero-energy surface
//! state on the half space `z >= 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::model::ReducedParamsZ;

/// Tolerance on `sum |amplitude|^2 = 1` for normalized spinors.
pub const NORM_TOL: f64 = 1e-12;

/// Four complex amplitudes in the order `|P1,up>, |P2,up>, |P1,down>, |P2,down>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor4 {
    pub amplitudes: [Complex64; 4],
    pub normalized: bool,
}

impl Spinor4 {
    /// Wraps raw amplitudes without rescaling.
    pub fn raw(amplitudes: [Complex64; 4]) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    /// Rescales to unit norm. Panics on the zero vector.
    pub fn normalize(amplitudes: [Complex64; 4]) -> Self {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "cannot normalize the zero spinor");
        Self {
            amplitudes: amplitudes.map(|z| z / norm),
            normalized: true,
        }
    }

    pub fn from_real(values: [f64; 4]) -> Self {
        Self::normalize(values.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Spinor4) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Eigenvalue `+E`.
    Plus,
    /// Eigenvalue `-E`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// Which of the two degenerate bulk spinors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pair {
    /// Support on `|P1,up>` and `|P2,down>`: `(a, 0, 0, 1)`.
    One,
    /// Support on `|P2,up>` and `|P1,down>`: `(0, a, 1, 0)`.
    Two,
}

/// A normalized bulk eigenvector at `(0, 0, kz)` plus its amplitude ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkSpinor {
    pub spinor: Spinor4,
    /// Ratio `a` of the first non-zero amplitude to the unit one.
    pub ratio: f64,
    /// Eigenvalue `+E` or `-E`.
    pub energy: f64,
    pub branch: Branch,
    pub pair: Pair,
}

/// The two pair-one ratios `((M(kz) + E)/(A kz), (M(kz) - E)/(A kz))`,
/// evaluated without cancellation. Their product is `-1`.
fn pair_one_ratios(params: &ReducedParamsZ, kz: f64) -> (f64, f64) {
    let mass = params.mass(kz);
    let e = params.energy(kz);
    let akz = params.a * kz;
    if mass >= 0.0 {
        let s = mass + e;
        (s / akz, -akz / s)
    } else {
        let d = e - mass;
        (akz / d, -d / akz)
    }
}

/// Bulk eigenspinor along kz for the chosen energy branch and degenerate pair.
///
/// Pair one is `(a, 0, 0, 1)` with `a = (M(kz) +- E)/(A kz)`. Pair two is
/// `(0, a, 1, 0)`, whose eigen-equation fixes `a = (+-E - M(kz))/(A kz)`.
pub fn bulk_spinor(params: &ReducedParamsZ, kz: f64, branch: Branch, pair: Pair) -> Result<BulkSpinor> {
    if kz == 0.0 || params.a == 0.0 {
        return Err(ModelError::SingularSpinor { a: params.a, kz });
    }
    let (a_plus, a_minus) = pair_one_ratios(params, kz);
    let ratio = match (pair, branch) {
        (Pair::One, Branch::Plus) => a_plus,
        (Pair::One, Branch::Minus) => a_minus,
        (Pair::Two, Branch::Plus) => -a_minus,
        (Pair::Two, Branch::Minus) => -a_plus,
    };
    let norm = ratio.hypot(1.0);
    let (x, one) = (Complex64::new(ratio / norm, 0.0), Complex64::new(1.0 / norm, 0.0));
    let zero = Complex64::new(0.0, 0.0);
    let amplitudes = match pair {
        Pair::One => [x, zero, zero, one],
        Pair::Two => [zero, x, one, zero],
    };
    Ok(BulkSpinor {
        spinor: Spinor4 {
            amplitudes,
            normalized: true,
        },
        ratio,
        energy: branch.sign() * params.energy(kz),
        branch,
        pair,
    })
}

/// Which zero-energy spinor the surface state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceBranch {
    /// `(0, +-i, 1, 0)`
    One,
    /// `(1, 0, 0, +-i)`
    Two,
}

/// Sign of the imaginary entry of the surface spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ImagSign {
    #[default]
    Plus,
    Minus,
}

/// Squared norm of the surface spinor `(0, +-i, 1, 0)` as it enters `|Psi|^2`.
pub const SURFACE_SPINOR_WEIGHT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceState {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub n_s: f64,
    /// Unit-norm spinor; the full density carries [`SURFACE_SPINOR_WEIGHT`].
    pub spinor: Spinor4,
    pub branch: SurfaceBranch,
    pub sign: ImagSign,
}

impl SurfaceState {
    /// `e^{-lambda_minus z} - e^{-lambda_plus z}`
    pub fn envelope(&self, z: f64) -> f64 {
        (-self.lambda_minus * z).exp() - (-self.lambda_plus * z).exp()
    }

    /// `N_s^2 (e^{-lambda_minus z} - e^{-lambda_plus z})^2`, i.e. the density
    /// per unit spinor weight. Integrates to one half over the half space.
    pub fn envelope_density(&self, z: f64) -> f64 {
        let psi = self.n_s * self.envelope(z);
        psi * psi
    }
}

/// Decay constants and normalization of the zero-energy surface state.
///
/// `lambda_pm` are the two roots of `B l^2 - A l + M = 0`; both must be
/// real, distinct and positive.
pub fn surface_state(params: &ReducedParamsZ, branch: SurfaceBranch, sign: ImagSign) -> Result<SurfaceState> {
    let ReducedParamsZ { a, b, m } = *params;
    if b == 0.0 {
        return Err(ModelError::ZeroCurvature);
    }
    let product = m / b;
    let sum = a / b;
    if !(product > 0.0) {
        return Err(ModelError::TrivialPhase { ratio: product });
    }
    if !(sum > 0.0) {
        return Err(ModelError::NonDecaying { ratio: sum });
    }
    let disc = a * a - 4.0 * m * b;
    if disc < 0.0 {
        return Err(ModelError::Oscillatory { discriminant: disc });
    }
    if disc <= 4.0 * f64::EPSILON * a * a {
        return Err(ModelError::DegenerateDecay);
    }
    // larger-magnitude root first, the other from Vieta
    let big = (a + a.signum() * disc.sqrt()) / (2.0 * b);
    let small = product / big;
    let (lambda_minus, lambda_plus) = if big > small { (small, big) } else { (big, small) };
    let n_s = (lambda_plus * lambda_minus * (lambda_plus + lambda_minus)).sqrt() / (lambda_plus - lambda_minus);

    let i = match sign {
        ImagSign::Plus => Complex64::new(0.0, 1.0),
        ImagSign::Minus => Complex64::new(0.0, -1.0),
    };
    let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    let raw = match branch {
        SurfaceBranch::One => [zero, i, one, zero],
        SurfaceBranch::Two => [one, zero, zero, i],
    };
    Ok(SurfaceState {
        lambda_plus,
        lambda_minus,
        n_s,
        spinor: Spinor4::normalize(raw),
        branch,
        sign,
    })
}

/// `|Psi(z)|^2 = N_s^2 |chi|^2 (e^{-lambda_minus z} - e^{-lambda_plus z})^2`
/// with the printed spinor `chi = (0, +-i, 1, 0)`, `|chi|^2 = 2`.
pub fn surface_density(state: &SurfaceState, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(ModelError::NegativeDepth(z));
    }
    Ok(SURFACE_SPINOR_WEIGHT * state.envelope_density(z))
}

/// Stationary point of the envelope, `ln(lambda_plus/lambda_minus)/(lambda_plus - lambda_minus)`,
/// and the density there.
pub fn surface_peak(state: &SurfaceState) -> (f64, f64) {
    let z = (state.lambda_plus / state.lambda_minus).ln() / (state.lambda_plus - state.lambda_minus);
    (z, SURFACE_SPINOR_WEIGHT * state.envelope_density(z))
}

/// Density profile on `points` equally spaced depths in `[0, z_max]`.
pub fn surface_profile(state: &SurfaceState, z_max: f64, points: usize) -> Vec<(f64, f64)> {
    crate::numerics::linspace(0.0, z_max, points)
        .into_iter()
        .map(|z| (z, SURFACE_SPINOR_WEIGHT * state.envelope_density(z)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{hamiltonian_3d, ModelParams3D, Momentum3};
    use crate::numerics::{grid_extremum, integrate_trapezoid, Extremum};

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn fig2(b: f64) -> ReducedParamsZ {
        ReducedParamsZ::new(4.0, b, 2.0)
    }

    fn residual(params: &ReducedParamsZ, kz: f64, s: &BulkSpinor) -> f64 {
        let h = hamiltonian_3d(&ModelParams3D::from_reduced(*params), &Momentum3::along_z(kz));
        h.mul_vec(s.spinor.as_slice())
            .iter()
            .zip(s.spinor.as_slice())
            .map(|(hv, v)| (hv - v * s.energy).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn bell_point_spinors() {
        let p = fig2(0.1);
        let kz = 20f64.sqrt();
        let plus = bulk_spinor(&p, kz, Branch::Plus, Pair::One).unwrap();
        assert!((plus.ratio - 1.0).abs() < 1e-12);
        assert!((plus.spinor.amplitudes[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((plus.spinor.amplitudes[3].re - FRAC_1_SQRT_2).abs() < 1e-12);
        let minus = bulk_spinor(&p, kz, Branch::Minus, Pair::One).unwrap();
        assert!((minus.ratio + 1.0).abs() < 1e-12);
        assert!((minus.spinor.amplitudes[0].re + FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bulk_spinor_closed_form_chain() {
        let p = fig2(0.1);
        let s = bulk_spinor(&p, 1.0, Branch::Plus, Pair::One).unwrap();
        let e = (1.9f64.powi(2) + 16.0).sqrt();
        let a = (1.9 + e) / 4.0;
        assert!((s.ratio - a).abs() < 1e-14);
        assert!((s.ratio - 1.58208).abs() < 1e-5);
        assert!((s.spinor.amplitudes[0].re - 0.845298).abs() < 1e-6);
        assert!((s.spinor.amplitudes[3].re - 0.534295).abs() < 1e-6);
        assert!(residual(&p, 1.0, &s) < 1e-10);
    }

    #[test]
    fn every_branch_and_pair_is_an_eigenvector() {
        for &(a, b, m) in &[(4.0, 0.1, 2.0), (0.2, 1.0, 1.3), (0.2, 1.0, -1.3), (1.0, -0.5, 0.7)] {
            let p = ReducedParamsZ::new(a, b, m);
            for &kz in &[-3.0, -0.4, 0.01, 1.0, 2.5] {
                for branch in [Branch::Plus, Branch::Minus] {
                    let one = bulk_spinor(&p, kz, branch, Pair::One).unwrap();
                    let two = bulk_spinor(&p, kz, branch, Pair::Two).unwrap();
                    assert!(residual(&p, kz, &one) < 1e-10, "{p:?} {kz} {branch:?}");
                    assert!(residual(&p, kz, &two) < 1e-10, "{p:?} {kz} {branch:?}");
                    assert!(one.spinor.inner(&two.spinor).norm() < 1e-12);
                    assert!((one.spinor.norm_sqr() - 1.0).abs() < NORM_TOL);
                }
            }
        }
    }

    #[test]
    fn bulk_spinor_rejects_singular_points() {
        let p = fig2(0.1);
        assert!(matches!(
            bulk_spinor(&p, 0.0, Branch::Plus, Pair::One),
            Err(ModelError::SingularSpinor { .. })
        ));
        let p = ReducedParamsZ::new(0.0, 0.1, 2.0);
        assert!(bulk_spinor(&p, 1.0, Branch::Plus, Pair::One).is_err());
    }

    #[test]
    fn surface_decay_constants() {
        let s = surface_state(&fig2(0.1), SurfaceBranch::One, ImagSign::Plus).unwrap();
        assert!((s.lambda_plus - 39.4936).abs() < 1e-4);
        assert!((s.lambda_minus - 0.506411).abs() < 1e-6);
        let s = surface_state(&fig2(1.0), SurfaceBranch::One, ImagSign::Plus).unwrap();
        assert!((s.lambda_plus - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((s.lambda_minus - (2.0 - 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn surface_state_invariants() {
        for &b in &[0.05, 0.1, 0.25, 0.5, 1.0, 1.9] {
            let p = fig2(b);
            let s = surface_state(&p, SurfaceBranch::Two, ImagSign::Minus).unwrap();
            assert!(0.0 < s.lambda_minus && s.lambda_minus < s.lambda_plus);
            assert!((s.lambda_plus * s.lambda_minus - p.m / p.b).abs() < 1e-10);
            assert!((s.lambda_plus + s.lambda_minus - p.a / p.b).abs() < 1e-10);
            for l in [s.lambda_plus, s.lambda_minus] {
                assert!((p.b * l * l - p.a * l + p.m).abs() < 1e-10);
            }
            let lp = s.lambda_plus;
            let lm = s.lambda_minus;
            assert_eq!(s.n_s, (lp * lm * (lp + lm)).sqrt() / (lp - lm));
        }
    }

    #[test]
    fn surface_state_errors() {
        assert!(matches!(
            surface_state(&ReducedParamsZ::new(4.0, 0.1, -2.0), SurfaceBranch::One, ImagSign::Plus),
            Err(ModelError::TrivialPhase { .. })
        ));
        assert!(matches!(
            surface_state(&ReducedParamsZ::new(4.0, 0.0, 2.0), SurfaceBranch::One, ImagSign::Plus),
            Err(ModelError::ZeroCurvature)
        ));
        assert!(matches!(
            surface_state(&ReducedParamsZ::new(4.0, 2.0, 2.0), SurfaceBranch::One, ImagSign::Plus),
            Err(ModelError::DegenerateDecay)
        ));
        assert!(matches!(
            surface_state(&ReducedParamsZ::new(4.0, 3.0, 2.0), SurfaceBranch::One, ImagSign::Plus),
            Err(ModelError::Oscillatory { .. })
        ));
        assert!(matches!(
            surface_state(&ReducedParamsZ::new(-4.0, 0.1, 2.0), SurfaceBranch::One, ImagSign::Plus),
            Err(ModelError::NonDecaying { .. })
        ));
    }

    #[test]
    fn density_boundary_and_domain() {
        let s = surface_state(&fig2(0.1), SurfaceBranch::One, ImagSign::Plus).unwrap();
        assert_eq!(surface_density(&s, 0.0).unwrap(), 0.0);
        assert!(matches!(surface_density(&s, -1e-3), Err(ModelError::NegativeDepth(_))));
    }

    #[test]
    fn peak_matches_grid_oracle() {
        for (b, z_expected, envelope_peak) in [(0.1, 0.1117, 0.4580), (1.0, 0.6232, 0.3306)] {
            let s = surface_state(&fig2(b), SurfaceBranch::One, ImagSign::Plus).unwrap();
            let (z, d) = surface_peak(&s);
            assert!((z - z_expected).abs() < 1e-4, "B={b}: z={z}");
            assert!((s.envelope_density(z) - envelope_peak).abs() < 1e-4);
            assert!((d - 2.0 * envelope_peak).abs() < 2e-4);

            let grid = surface_profile(&s, 2.0, 20_001);
            let (zg, dg) = grid_extremum(&grid, Extremum::Max).unwrap();
            assert!((zg - z).abs() <= 1e-4);
            assert!((dg - d).abs() < 1e-6);
        }
    }

    #[test]
    fn peak_of_symbolic_ratio() {
        let s = SurfaceState {
            lambda_plus: 2.0,
            lambda_minus: 1.0,
            n_s: 1.0,
            spinor: Spinor4::from_real([0.0, 0.0, 1.0, 0.0]),
            branch: SurfaceBranch::One,
            sign: ImagSign::Plus,
        };
        assert!((surface_peak(&s).0 - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn density_is_normalized() {
        let s = surface_state(&fig2(0.1), SurfaceBranch::One, ImagSign::Plus).unwrap();
        let profile = surface_profile(&s, 30.0 / s.lambda_minus, 1_000_000);
        let total = integrate_trapezoid(&profile).unwrap();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn peak_moves_away_from_surface_with_curvature() {
        let (a, m) = (4.0, 2.0);
        let b_max = a * a / (4.0 * m);
        let mut last = 0.0;
        for i in 1..100 {
            let b = b_max * i as f64 / 100.0;
            let s = surface_state(&ReducedParamsZ::new(a, b, m), SurfaceBranch::One, ImagSign::Plus).unwrap();
            let z = surface_peak(&s).0;
            assert!(z > last);
            last = z;
        }
    }
}
