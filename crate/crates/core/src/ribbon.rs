//! Finite-width ribbon of the 2-D edge model.
//!
//! The ribbon is periodic along x (good quantum number `kx`) and has
//! `width_sites` sites along y with hard walls. Lattice regularization:
//! `kx -> sin(kx a)/a`, `kx^2 -> (2 - 2 cos(kx a))/a^2`, and central
//! differences in y. Basis ordering is spin-major,
//! `index = spin * 2N + 2 * site + orbital`, so the Hamiltonian is
//! block-diagonal over spin.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::exec::{map_indexed, map_slice, Execution};
use crate::model::Params2D;
use crate::numerics::{eigh, HermitianMatrix};
use crate::phase::{bulk_gap, SweepGrid};
use crate::states::Spinor4;

/// Fraction of the width on each side counted as "edge".
pub const EDGE_FRACTION: f64 = 0.1;
/// Minimum probability within the edge regions for an edge state.
pub const EDGE_WEIGHT_MIN: f64 = 0.6;
/// In-gap window as a fraction of the bulk gap.
pub const IN_GAP_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibbonConfig {
    pub params: Params2D,
    pub width_sites: usize,
    pub lattice_constant: f64,
    pub kx_grid: SweepGrid,
}

impl Default for RibbonConfig {
    fn default() -> Self {
        Self {
            params: Params2D::new(1.0, 0.5, 1.0),
            width_sites: 60,
            lattice_constant: 1.0,
            kx_grid: SweepGrid {
                start: -0.5,
                stop: 0.5,
                count: 201,
            },
        }
    }
}

impl RibbonConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width_sites < 10 {
            return Err(ModelError::InvalidRibbon(format!(
                "width_sites = {} must be at least 10",
                self.width_sites
            )));
        }
        if !(self.lattice_constant > 0.0) {
            return Err(ModelError::InvalidRibbon(format!(
                "lattice_constant = {} must be positive",
                self.lattice_constant
            )));
        }
        SweepGrid::new(self.kx_grid.start, self.kx_grid.stop, self.kx_grid.count)?;
        Ok(())
    }

    /// Number of sites at each side inside the edge regions.
    pub fn edge_sites(&self) -> usize {
        ((EDGE_FRACTION * self.width_sites as f64).ceil() as usize).max(1)
    }

    /// Continuum bulk gap of `h_pm`, which sets the in-gap window.
    pub fn bulk_gap(&self) -> f64 {
        bulk_gap(&self.params.as_reduced()).gap
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

/// `2N x 2N` Hamiltonian of one spin block at `kx`.
pub fn block_hamiltonian(config: &RibbonConfig, kx: f64, spin: Spin) -> HermitianMatrix {
    let Params2D { v, m_v2, b } = config.params;
    let a = config.lattice_constant;
    let n = config.width_sites;
    let s = spin.sign();
    let (sin, cos) = (kx * a).sin_cos();
    let dx = v * sin / a;
    // (m - B kx^2) with the y-Laplacian's on-site part -2B/a^2
    let dz = m_v2 - b * (2.0 - 2.0 * cos) / (a * a) - 2.0 * b / (a * a);
    let hop_z = b / (a * a);
    let hop_y = s * v / (2.0 * a);

    let mut h = HermitianMatrix::zeros(2 * n).expect("non-empty ribbon");
    for j in 0..n {
        let (p, q) = (2 * j, 2 * j + 1);
        h.set(p, p, Complex64::new(dz, 0.0));
        h.set(q, q, Complex64::new(-dz, 0.0));
        h.set(p, q, Complex64::new(dx, 0.0));
        if j + 1 < n {
            // <j| H |j+1> = (B/a^2) sz - s i v/(2a) sy
            let (p1, q1) = (p + 2, q + 2);
            h.set(p, p1, Complex64::new(hop_z, 0.0));
            h.set(q, q1, Complex64::new(-hop_z, 0.0));
            h.set(p, q1, Complex64::new(-hop_y, 0.0));
            h.set(q, p1, Complex64::new(hop_y, 0.0));
        }
    }
    h
}

/// Full `4N x 4N` ribbon Hamiltonian, spin-up block first.
pub fn build_ribbon_hamiltonian(config: &RibbonConfig, kx: f64) -> Result<HermitianMatrix> {
    config.validate()?;
    let half = 2 * config.width_sites;
    let mut h = HermitianMatrix::zeros(2 * half)?;
    for (offset, spin) in [(0, Spin::Up), (half, Spin::Down)] {
        let block = block_hamiltonian(config, kx, spin);
        for i in 0..half {
            for j in i..half {
                let z = block.get(i, j);
                if z.norm_sqr() > 0.0 {
                    h.set(offset + i, offset + j, z);
                }
            }
        }
    }
    Ok(h)
}

/// `<psi| dH/dkx |psi>` for a block eigenvector; the on-site terms are the
/// only kx-dependent ones.
fn group_velocity(config: &RibbonConfig, kx: f64, psi: &[Complex64]) -> f64 {
    let Params2D { v, b, .. } = config.params;
    let a = config.lattice_constant;
    let (sin, cos) = (kx * a).sin_cos();
    let d_dx = v * cos;
    let d_dz = -2.0 * b * sin / a;
    psi.chunks_exact(2)
        .map(|c| {
            let (u, w) = (c[0], c[1]);
            d_dz * (u.norm_sqr() - w.norm_sqr()) + d_dx * 2.0 * (u.conj() * w).re
        })
        .sum()
}

/// `<psi| 1 (x) Sigma |psi>` for a full ribbon vector, `Sigma = tau_y (x) sigma_x`.
pub fn ribbon_helicity(full: &[Complex64]) -> f64 {
    let half = full.len() / 2;
    let (up, down) = full.split_at(half);
    // <psi|Sigma|psi> = 2 Re(-i sum conj(u_{j,o}) d_{j,1-o})
    let cross: Complex64 = up
        .chunks_exact(2)
        .zip(down.chunks_exact(2))
        .map(|(u, d)| u[0].conj() * d[1] + u[1].conj() * d[0])
        .sum();
    2.0 * (Complex64::new(0.0, -1.0) * cross).re
}

/// One eigenstate of the ribbon at fixed `kx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RibbonState {
    pub energy: f64,
    pub edge_weight: f64,
    pub lower_edge_weight: f64,
    pub upper_edge_weight: f64,
    pub spin_up_weight: f64,
    pub helicity: f64,
    pub velocity: f64,
}

impl RibbonState {
    pub fn is_edge_state(&self, bulk_gap: f64) -> bool {
        self.edge_weight > EDGE_WEIGHT_MIN && self.energy.abs() < IN_GAP_FRACTION * bulk_gap
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RibbonSpectrum {
    pub kx: Vec<f64>,
    /// `states[i]` holds every eigenstate at `kx[i]`, energies ascending.
    pub states: Vec<Vec<RibbonState>>,
    pub bulk_gap: f64,
}

impl RibbonSpectrum {
    pub fn edge_states(&self, index: usize) -> impl Iterator<Item = &RibbonState> + '_ {
        let gap = self.bulk_gap;
        self.states[index].iter().filter(move |s| s.is_edge_state(gap))
    }

    pub fn edge_state_count(&self, index: usize) -> usize {
        self.edge_states(index).count()
    }

    pub fn total_edge_states(&self) -> usize {
        (0..self.kx.len()).map(|i| self.edge_state_count(i)).sum()
    }

    /// Grid index whose kx is closest to `kx`.
    pub fn nearest_index(&self, kx: f64) -> usize {
        let mut best = 0;
        for (i, &k) in self.kx.iter().enumerate() {
            if (k - kx).abs() < (self.kx[best] - kx).abs() {
                best = i;
            }
        }
        best
    }
}

fn analyze_block(config: &RibbonConfig, kx: f64, spin: Spin) -> Result<Vec<RibbonState>> {
    let n = config.width_sites;
    let edge = config.edge_sites();
    let h = block_hamiltonian(config, kx, spin);
    let dec = eigh(&h)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok((0..2 * n)
        .map(|j| {
            let psi = dec.vector(j);
            let site_weight = |site: usize| psi[2 * site].norm_sqr() + psi[2 * site + 1].norm_sqr();
            let lower: f64 = (0..edge).map(site_weight).sum();
            let upper: f64 = (n - edge..n).map(site_weight).sum();
            let total: f64 = (0..n).map(site_weight).sum();
            let mut full = vec![zero; 4 * n];
            let offset = if spin == Spin::Up { 0 } else { 2 * n };
            full[offset..offset + 2 * n].copy_from_slice(psi);
            let up_weight: f64 = full[..2 * n].iter().map(|z| z.norm_sqr()).sum();
            RibbonState {
                energy: dec.eigenvalues[j],
                edge_weight: ((lower + upper) / total).clamp(0.0, 1.0),
                lower_edge_weight: lower / total,
                upper_edge_weight: upper / total,
                spin_up_weight: (up_weight / total).clamp(0.0, 1.0),
                helicity: ribbon_helicity(&full).clamp(-1.0, 1.0),
                velocity: group_velocity(config, kx, psi),
            }
        })
        .collect())
}

/// Eigenstates of both spin blocks at one kx, merged in ascending energy
/// (spin-up first on exact ties).
pub fn ribbon_states(config: &RibbonConfig, kx: f64) -> Result<Vec<RibbonState>> {
    let mut states = analyze_block(config, kx, Spin::Up)?;
    states.extend(analyze_block(config, kx, Spin::Down)?);
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(states)
}

/// Diagonalizes the ribbon on every kx of the configured grid.
///
/// Each spin block is diagonalized on its own: the full Hamiltonian is
/// block-diagonal, and this fixes the basis inside the exact two-fold
/// degeneracy between the blocks to states of definite spin.
pub fn edge_spectrum(config: &RibbonConfig, exec: Execution) -> Result<RibbonSpectrum> {
    config.validate()?;
    let kx = config.kx_grid.points();
    let states = map_slice(&kx, exec, |&k| ribbon_states(config, k));
    Ok(RibbonSpectrum {
        kx,
        states: states.into_iter().collect::<Result<_>>()?,
        bulk_gap: config.bulk_gap(),
    })
}

/// Applies `Sigma = tau_y (x) sigma_x` to a four-component internal state.
/// Returns `<psi|Sigma|psi>` and `||Sigma psi - <Sigma> psi||`.
pub fn helicity_apply(state: &Spinor4) -> (f64, f64) {
    let p = &state.amplitudes;
    let i = Complex64::new(0.0, 1.0);
    // (spin, orbital) index 2s + o; tau_y = [[0, -i], [i, 0]]
    let sigma_psi = [-i * p[3], -i * p[2], i * p[1], i * p[0]];
    let expectation: f64 = p.iter().zip(&sigma_psi).map(|(a, b)| (a.conj() * b).re).sum();
    let residual = sigma_psi
        .iter()
        .zip(p)
        .map(|(s, a)| (s - a * expectation).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (expectation, residual)
}

/// Which edge of the ribbon a channel lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    /// Near site 0.
    Lower,
    /// Near site N - 1.
    Upper,
}

/// An in-gap edge mode at the probe momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeChannel {
    pub edge: Edge,
    pub spin: Spin,
    pub velocity: f64,
}

/// Edge channels feeding the spin filter under a bias.
///
/// Carriers injected by a bias `V >= 0` move along +x (along -x for
/// `V < 0`). The spin filter and the current probe sit on the upper edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeTransport {
    pub probe_kx: f64,
    pub channels: Vec<EdgeChannel>,
    pub collected: Vec<EdgeChannel>,
}

pub const COLLECTOR_EDGE: Edge = Edge::Upper;

impl EdgeTransport {
    pub fn from_spectrum(spectrum: &RibbonSpectrum, probe_kx: f64, bias_voltage: f64) -> Self {
        let index = spectrum.nearest_index(probe_kx);
        let forward = if bias_voltage < 0.0 { -1.0 } else { 1.0 };
        let channels: Vec<EdgeChannel> = spectrum
            .edge_states(index)
            .map(|s| EdgeChannel {
                edge: if s.upper_edge_weight > s.lower_edge_weight {
                    Edge::Upper
                } else {
                    Edge::Lower
                },
                spin: if s.spin_up_weight > 0.5 { Spin::Up } else { Spin::Down },
                velocity: s.velocity,
            })
            .collect();
        let collected = channels
            .iter()
            .filter(|c| c.edge == COLLECTOR_EDGE && c.velocity * forward > 0.0)
            .copied()
            .collect();
        Self {
            probe_kx: spectrum.kx[index],
            channels,
            collected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinFilter {
    Up,
    Down,
    None,
}

/// Landauer conductance in units of `e^2/h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conductance {
    pub g: f64,
    pub no_edge_channel: bool,
}

/// `G = (e^2/h) T`, with `T` the number of collected channels passing the
/// filter.
pub fn conductance(transport: &EdgeTransport, filter: SpinFilter) -> Conductance {
    if transport.channels.is_empty() {
        return Conductance {
            g: 0.0,
            no_edge_channel: true,
        };
    }
    let passing = transport
        .collected
        .iter()
        .filter(|c| match filter {
            SpinFilter::Up => c.spin == Spin::Up,
            SpinFilter::Down => c.spin == Spin::Down,
            SpinFilter::None => true,
        })
        .count();
    Conductance {
        g: passing as f64,
        no_edge_channel: false,
    }
}

/// Spin-filter axis in spherical angles about +z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinAxis {
    pub polar: f64,
    pub azimuth: f64,
}

impl SpinAxis {
    pub const UP: SpinAxis = SpinAxis { polar: 0.0, azimuth: 0.0 };
    pub const DOWN: SpinAxis = SpinAxis {
        polar: std::f64::consts::PI,
        azimuth: 0.0,
    };
    pub const X: SpinAxis = SpinAxis {
        polar: std::f64::consts::FRAC_PI_2,
        azimuth: 0.0,
    };

    /// `cos^2(theta/2)`: probability that a +z spin passes this filter.
    pub fn pass_probability(&self) -> f64 {
        let c = (0.5 * self.polar).cos();
        (c * c).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetup {
    pub bias_voltage: f64,
    pub filter_axis: SpinAxis,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub seed: u64,
    pub trials: u64,
    pub axis_polar: f64,
    pub axis_azimuth: f64,
    pub pass_count: u64,
    #[serde(rename = "estimated_T")]
    pub estimated_t: f64,
}

const TRIAL_CHUNK: u64 = 1 << 14;

/// Repeated single-carrier measurements behind a rotated spin filter.
///
/// Each transmitted carrier is spin up; it passes with probability
/// `cos^2(theta/2)`. Trial `t` consumes word pair `2t` of a ChaCha8 stream
/// keyed by the seed, so the counts do not depend on how trials are split
/// across threads.
pub fn measure_repeated(setup: &MeasurementSetup, exec: Execution) -> MeasurementRecord {
    let p = setup.filter_axis.pass_probability();
    // P(u < threshold) = p for u uniform on 64 bits
    let threshold = if p >= 1.0 { None } else { Some((p * 2f64.powi(64)) as u64) };
    let chunks = setup.trials.div_ceil(TRIAL_CHUNK);
    let base = ChaCha8Rng::seed_from_u64(setup.seed);
    let counts = map_indexed(chunks as usize, exec, |c| {
        let start = c as u64 * TRIAL_CHUNK;
        let end = (start + TRIAL_CHUNK).min(setup.trials);
        let mut rng = base.clone();
        rng.set_word_pos(2 * start as u128);
        (start..end)
            .filter(|_| {
                let u = rng.next_u64();
                threshold.is_none_or(|t| u < t)
            })
            .count() as u64
    });
    let pass_count: u64 = counts.iter().sum();
    MeasurementRecord {
        seed: setup.seed,
        trials: setup.trials,
        axis_polar: setup.filter_axis.polar,
        axis_azimuth: setup.filter_axis.azimuth,
        pass_count,
        estimated_t: pass_count as f64 / setup.trials.max(1) as f64,
    }
}
