//! Closed-form versus numerical cross-checks behind `--self-check`.

use tiqpt::entanglement::concurrence_analytic;
use tiqpt::exec::map_slice;
use tiqpt::model::ReducedParamsZ;
use tiqpt::numerics::{bisect_root, eigh};
use tiqpt::phase::{critical_b, SweepResult};
use tiqpt::ribbon::{build_ribbon_hamiltonian, RibbonConfig, RibbonSpectrum};
use tiqpt::states::{bulk_spinor, surface_density, surface_peak, Branch, Pair, SurfaceState};
use tiqpt::{Execution, ModelError};

pub const TOL: f64 = 1e-9;

fn check(what: &str, expected: f64, got: f64) -> Result<(), ModelError> {
    let dev = (expected - got).abs();
    if dev > TOL * expected.abs().max(1.0) {
        return Err(ModelError::SelfCheck(format!(
            "{what}: expected {expected}, got {got} (deviation {dev:e})"
        )));
    }
    Ok(())
}

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Vieta relations, the closed-form norm and stationarity at the peak.
pub fn surface(params: &ReducedParamsZ, state: &SurfaceState) -> Result<(), ModelError> {
    let (lp, lm) = (state.lambda_plus, state.lambda_minus);
    check("lambda_plus + lambda_minus", params.a / params.b, lp + lm)?;
    check("lambda_plus * lambda_minus", params.m / params.b, lp * lm)?;
    // 2 N_s^2 * integral of (e^{-lm z} - e^{-lp z})^2 over z > 0
    let norm = 2.0 * state.n_s * state.n_s * (0.5 / lm + 0.5 / lp - 2.0 / (lp + lm));
    check("density normalization", 1.0, norm)?;
    let (z, peak) = surface_peak(state);
    check("density at peak", peak, surface_density(state, z)?)?;
    // the envelope derivative changes sign once, between 0 and twice the peak
    let slope = |x: f64| lp * (-lp * x).exp() - lm * (-lm * x).exp();
    let root = bisect_root(slope, 0.0, 2.0 * z, 1e-15 * z)?;
    check("peak depth by bisection", z, root)
}

pub fn concurrence_sweep(result: &SweepResult, m: f64, a: f64, kz: f64) -> Result<(), ModelError> {
    for (branch, name) in [(Branch::Plus, "concurrence_plus"), (Branch::Minus, "concurrence_minus")] {
        let values = result.series(name).unwrap_or_default();
        for (&b, &c) in result.grid.iter().zip(values) {
            let s = bulk_spinor(&ReducedParamsZ::new(a, b, m), kz, branch, Pair::One)?;
            check(&format!("{name} at b = {b}"), concurrence_analytic(s.ratio), c)?;
        }
    }
    let crit = critical_b(m, kz)?;
    check("bisected critical curvature", crit.b_c, crit.bisected)
}

pub fn entropy_sweep(result: &SweepResult, params: &ReducedParamsZ, branch: Branch) -> Result<(), ModelError> {
    let entropy = result.series("entropy").unwrap_or_default();
    let conc = result.series("concurrence").unwrap_or_default();
    for ((&k, &s), &c) in result.grid.iter().zip(entropy).zip(conc) {
        let ratio = bulk_spinor(params, k, branch, Pair::One)?.ratio;
        let p = 1.0 / (1.0 + ratio * ratio);
        check(&format!("entropy at kz = {k}"), binary_entropy(p), s)?;
        check(&format!("concurrence at kz = {k}"), concurrence_analytic(ratio), c)?;
    }
    Ok(())
}

/// Spin-block spectra against the full Hamiltonian at every kx.
pub fn ribbon(config: &RibbonConfig, spectrum: &RibbonSpectrum, exec: Execution) -> Result<(), ModelError> {
    let full = map_slice(&spectrum.kx, exec, |&k| -> Result<Vec<f64>, ModelError> {
        Ok(eigh(&build_ribbon_hamiltonian(config, k)?)?.eigenvalues)
    });
    for ((&k, states), energies) in spectrum.kx.iter().zip(&spectrum.states).zip(full) {
        for (s, e) in states.iter().zip(energies?) {
            check(&format!("ribbon energy at kx = {k}"), e, s.energy)?;
        }
    }
    Ok(())
}
