//! Phase-transition diagnostics along kz: band structure, bulk gap,
//! entanglement sweeps and the critical curvature.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::entanglement::{concurrence, entropy, from_spinor};
use crate::error::{ModelError, Result};
use crate::exec::{map_slice, Execution};
use crate::model::{dispersion_self_check, dispersion_z, ReducedParamsZ};
use crate::numerics::{bisect_root, linspace};
use crate::states::{bulk_spinor, Branch, Pair};

/// Largest tolerated gap between closed-form and diagonalized energies,
/// relative to `max(1, |E|)`.
pub const SELF_CHECK_TOL: f64 = 1e-10;

/// Linear grid `start + i (stop - start)/(count - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(ModelError::InvalidGrid(format!("count {count} < 2")));
        }
        if !(start < stop) || !start.is_finite() || !stop.is_finite() {
            return Err(ModelError::InvalidGrid(format!("need finite start < stop, got [{start}, {stop}]")));
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }
}

/// A swept parameter and the named series evaluated on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: String,
    pub grid: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
    pub metadata: BTreeMap<String, Value>,
}

impl SweepResult {
    fn new(parameter: &str, grid: Vec<f64>) -> Self {
        Self {
            parameter: parameter.to_owned(),
            grid,
            series: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    fn push(&mut self, name: &str, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.grid.len());
        self.series.push((name.to_owned(), values));
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// `(x, y)` of the largest value of a series; ties go to the smallest x.
    pub fn argmax(&self, name: &str) -> Option<(f64, f64)> {
        let values = self.series(name)?;
        let mut best: Option<(f64, f64)> = None;
        for (&x, &y) in self.grid.iter().zip(values) {
            if best.is_none_or(|(_, b)| y > b) {
                best = Some((x, y));
            }
        }
        best
    }
}

fn reduced_json(params: &ReducedParamsZ) -> Value {
    json!({ "a": params.a, "b": params.b, "m": params.m })
}

/// `-E` and `+E` sampled on a kz grid. With `self_check` each point is also
/// diagonalized numerically and compared against the closed form.
pub fn band_structure_z(params: &ReducedParamsZ, grid: &SweepGrid, self_check: bool, exec: Execution) -> Result<SweepResult> {
    let ks = grid.points();
    let mut out = SweepResult::new("kz", ks.clone());
    let bands: Vec<(f64, f64)> = ks.iter().map(|&k| dispersion_z(params, k)).collect();
    if self_check {
        let deviations = map_slice(&ks, exec, |&k| dispersion_self_check(params, k));
        for ((&k, dev), &(_, e)) in ks.iter().zip(deviations).zip(&bands) {
            let dev = dev?;
            if dev > SELF_CHECK_TOL * e.max(1.0) {
                return Err(ModelError::SelfCheck(format!(
                    "dispersion at kz = {k} deviates from diagonalization by {dev:e}"
                )));
            }
        }
    }
    out.push("e_minus", bands.iter().map(|b| b.0).collect());
    out.push("e_plus", bands.iter().map(|b| b.1).collect());
    let gap = bulk_gap(params);
    out.metadata.insert("params".into(), reduced_json(params));
    out.metadata.insert("gap".into(), json!(gap.gap));
    out.metadata.insert("k_at_min".into(), json!(gap.k_at_min));
    Ok(out)
}

/// Direct gap `2 min_k E(k)` along kz and the `|k|` where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkGap {
    pub gap: f64,
    /// Non-negative; the minimum sits at `+-k_at_min`.
    pub k_at_min: f64,
}

/// Minimizes `E(k)^2 = (M - B k^2)^2 + A^2 k^2` over its critical points:
/// `k = 0` and `k^2 = M/B - A^2/(2B^2)` when positive.
pub fn bulk_gap(params: &ReducedParamsZ) -> BulkGap {
    let mut best = BulkGap {
        gap: 2.0 * params.energy(0.0),
        k_at_min: 0.0,
    };
    if params.b != 0.0 {
        let k_sq = params.m / params.b - params.a * params.a / (2.0 * params.b * params.b);
        if k_sq > 0.0 {
            let k = k_sq.sqrt();
            let gap = 2.0 * params.energy(k);
            if gap < best.gap {
                best = BulkGap { gap, k_at_min: k };
            }
        }
    }
    best
}

/// Concurrence of the pair-one bulk spinor on a grid of curvatures, both
/// energy branches (`concurrence_plus`, `concurrence_minus`).
pub fn concurrence_vs_b(m: f64, a: f64, kz: f64, grid: &SweepGrid, exec: Execution) -> Result<SweepResult> {
    if kz == 0.0 || a == 0.0 {
        return Err(ModelError::SingularSpinor { a, kz });
    }
    let bs = grid.points();
    let rows = map_slice(&bs, exec, |&b| -> Result<(f64, f64)> {
        let p = ReducedParamsZ::new(a, b, m);
        let c = |branch| -> Result<f64> {
            let s = bulk_spinor(&p, kz, branch, Pair::One)?;
            Ok(concurrence(&from_spinor(&s.spinor)?))
        };
        Ok((c(Branch::Plus)?, c(Branch::Minus)?))
    });
    let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let mut out = SweepResult::new("b", bs);
    out.push("concurrence_plus", rows.iter().map(|r| r.0).collect());
    out.push("concurrence_minus", rows.iter().map(|r| r.1).collect());
    out.metadata.insert("m".into(), json!(m));
    out.metadata.insert("a".into(), json!(a));
    out.metadata.insert("kz".into(), json!(kz));
    let crit = critical_b(m, kz)?;
    out.metadata.insert("b_c".into(), json!(crit.b_c));
    out.metadata.insert("b_c_physical".into(), json!(crit.physical));
    Ok(out)
}

/// Entropy of the pair-one bulk spinor over kz for one energy branch. The
/// singular point `kz = 0` is dropped and recorded in the metadata.
pub fn entropy_vs_k(params: &ReducedParamsZ, branch: Branch, grid: &SweepGrid, exec: Execution) -> Result<SweepResult> {
    let all = grid.points();
    let (ks, dropped): (Vec<f64>, Vec<f64>) = all.into_iter().partition(|&k| k != 0.0);
    if ks.is_empty() {
        return Err(ModelError::AllPointsSingular);
    }
    let values = map_slice(&ks, exec, |&k| -> Result<(f64, f64)> {
        let s = bulk_spinor(params, k, branch, Pair::One)?;
        let state = from_spinor(&s.spinor)?;
        Ok((entropy(&state), concurrence(&state)))
    });
    let values: Vec<(f64, f64)> = values.into_iter().collect::<Result<_>>()?;
    let mut out = SweepResult::new("kz", ks);
    out.push("entropy", values.iter().map(|v| v.0).collect());
    out.push("concurrence", values.iter().map(|v| v.1).collect());
    out.metadata.insert("params".into(), reduced_json(params));
    out.metadata.insert("branch".into(), json!(branch.as_str()));
    out.metadata.insert("dropped_kz".into(), json!(dropped));
    if params.b != 0.0 && params.m / params.b > 0.0 {
        let k = (params.m / params.b).sqrt();
        out.metadata.insert("entropy_maxima".into(), json!([-k, k]));
    }
    Ok(out)
}

/// Critical curvature at fixed kz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    /// Closed form `M / kz^2`.
    pub b_c: f64,
    /// Root of `M - B kz^2` found by bisection.
    pub bisected: f64,
    /// False when `b_c <= 0`, i.e. unreachable in a `B > 0` sweep.
    pub physical: bool,
}

pub fn critical_b(m: f64, kz: f64) -> Result<CriticalPoint> {
    if kz == 0.0 {
        return Err(ModelError::CriticalUndefined("kz = 0"));
    }
    if m == 0.0 {
        return Err(ModelError::CriticalUndefined("M = 0"));
    }
    let k2 = kz * kz;
    let b_c = m / k2;
    let reach = 2.0 * b_c.abs();
    let tol = 1e-13 * b_c.abs().max(1.0);
    let bisected = bisect_root(|b| m - b * k2, -reach, reach, tol)?;
    Ok(CriticalPoint {
        b_c,
        bisected,
        physical: b_c > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3(m: f64) -> ReducedParamsZ {
        ReducedParamsZ::new(0.2, 1.0, m)
    }

    // dense grid oracle, independent of the analytic candidate set
    fn gap_by_grid(p: &ReducedParamsZ, kmax: f64, n: usize) -> (f64, f64) {
        linspace(0.0, kmax, n)
            .into_iter()
            .map(|k| (2.0 * p.energy(k), k))
            .fold((f64::INFINITY, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc })
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::new(0.0, 1.0, 1).is_err());
        assert!(SweepGrid::new(1.0, 1.0, 5).is_err());
        let g = SweepGrid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn bulk_gap_examples() {
        let g = bulk_gap(&fig3(-1.3));
        assert!((g.gap - 2.6).abs() < 1e-12);
        assert_eq!(g.k_at_min, 0.0);
        assert_eq!(bulk_gap(&fig3(0.0)), BulkGap { gap: 0.0, k_at_min: 0.0 });
        let g = bulk_gap(&fig3(1.3));
        assert!((g.gap - 0.45432).abs() < 1e-5);
        assert!((g.k_at_min - 1.13137).abs() < 1e-5);
    }

    #[test]
    fn bulk_gap_agrees_with_grid_search() {
        for &(a, b, m) in &[(0.2, 1.0, 1.3), (0.2, 1.0, -1.3), (1.0, 0.5, 2.0), (3.0, 0.5, 2.0), (0.5, -1.0, -0.8)] {
            let p = ReducedParamsZ::new(a, b, m);
            let g = bulk_gap(&p);
            let (gg, _) = gap_by_grid(&p, 5.0, 2_000_001);
            assert!(g.gap <= gg + 1e-12);
            assert!((g.gap - gg).abs() < 1e-8, "{p:?}: {} vs {gg}", g.gap);
            if m * b > 0.0 {
                assert!(g.gap > 0.0 && g.gap <= 2.0 * m.abs());
            }
        }
    }

    #[test]
    fn band_structure_self_check_passes() {
        let grid = SweepGrid::new(-3.0, 3.0, 61).unwrap();
        for m in [-1.3, 0.0, 1.3] {
            let r = band_structure_z(&fig3(m), &grid, true, Execution::Serial).unwrap();
            let em = r.series("e_minus").unwrap();
            let ep = r.series("e_plus").unwrap();
            assert!(em.iter().zip(ep).all(|(a, b)| a == &-b));
        }
        let r = band_structure_z(&fig3(0.0), &grid, false, Execution::Serial).unwrap();
        let mid = r.grid.iter().position(|&k| k == 0.0).unwrap();
        assert_eq!(r.series("e_plus").unwrap()[mid], 0.0);
    }

    #[test]
    fn concurrence_touches_one_at_critical_b() {
        let grid = SweepGrid::new(0.0, 1.0, 101).unwrap();
        let r = concurrence_vs_b(2.0, 4.0, 2.0, &grid, Execution::Serial).unwrap();
        let i = r.grid.iter().position(|&b| (b - 0.5).abs() < 1e-12).unwrap();
        let plus = r.series("concurrence_plus").unwrap();
        let minus = r.series("concurrence_minus").unwrap();
        assert!((plus[i] - 1.0).abs() < 1e-12);
        for w in plus[..=i].windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(plus[0] < 1.0);
        for (p, q) in plus.iter().zip(minus) {
            assert!((p - q).abs() < 1e-12);
        }
        assert_eq!(r.metadata["b_c"], json!(0.5));
    }

    #[test]
    fn negative_mass_has_no_critical_point_in_sweep() {
        let grid = SweepGrid::new(0.01, 1.5, 300).unwrap();
        let pos = concurrence_vs_b(2.0, 4.0, 2.0, &grid, Execution::Serial).unwrap();
        let neg = concurrence_vs_b(-2.0, 4.0, 2.0, &grid, Execution::Serial).unwrap();
        let max_neg = neg.series("concurrence_plus").unwrap().iter().cloned().fold(0.0, f64::max);
        assert!(max_neg < 1.0 - 1e-3);
        assert_ne!(pos.series("concurrence_plus"), neg.series("concurrence_plus"));
        assert_eq!(neg.metadata["b_c_physical"], json!(false));
    }

    #[test]
    fn entropy_sweep_peaks_at_mass_zero() {
        let p = ReducedParamsZ::new(4.0, 0.1, 2.0);
        let grid = SweepGrid::new(-8.0, 8.0, 801).unwrap();
        let r = entropy_vs_k(&p, Branch::Plus, &grid, Execution::Serial).unwrap();
        assert_eq!(r.grid.len(), 800);
        assert_eq!(r.metadata["dropped_kz"], json!([0.0]));
        let (k, s) = r.argmax("entropy").unwrap();
        assert!((k.abs() - 20f64.sqrt()).abs() <= grid.step());
        assert!((s - 1.0).abs() < 1e-3);
        let (kc, _) = r.argmax("concurrence").unwrap();
        assert_eq!(k, kc);
    }

    #[test]
    fn entropy_vanishes_near_gamma_for_upper_branch() {
        let p = ReducedParamsZ::new(4.0, 0.1, 2.0);
        let grid = SweepGrid::new(1e-6, 1e-3, 4).unwrap();
        let r = entropy_vs_k(&p, Branch::Plus, &grid, Execution::Serial).unwrap();
        assert!(r.series("entropy").unwrap()[0] < 1e-9);
        let only_zero = SweepGrid { start: 0.0, stop: 0.0, count: 2 };
        assert_eq!(
            entropy_vs_k(&p, Branch::Plus, &only_zero, Execution::Serial),
            Err(ModelError::AllPointsSingular)
        );
    }

    #[test]
    fn critical_b_examples() {
        let c = critical_b(2.0, 2.0).unwrap();
        assert_eq!(c.b_c, 0.5);
        assert!((c.bisected - 0.5).abs() < 1e-10);
        let c = critical_b(2.0, 20f64.sqrt()).unwrap();
        assert!((c.b_c - 0.1).abs() < 1e-15);
        let c = critical_b(-2.0, 2.0).unwrap();
        assert_eq!(c.b_c, -0.5);
        assert!(!c.physical);
        assert!((c.bisected + 0.5).abs() < 1e-10);
        assert!(critical_b(2.0, 0.0).is_err());
    }
}
