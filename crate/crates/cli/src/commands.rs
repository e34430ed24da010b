use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use tiqpt::io::{density_csv, ribbon_csv, sweep_csv, ParamsDocument};
use tiqpt::model::{phase_classify, Params2D};
use tiqpt::phase::{band_structure_z, concurrence_vs_b, entropy_vs_k, SweepGrid, SweepResult};
use tiqpt::ribbon::{
    conductance, edge_spectrum, measure_repeated, EdgeTransport, MeasurementSetup, RibbonConfig, SpinAxis, SpinFilter,
};
use tiqpt::states::{surface_density, surface_peak, surface_state, Branch, ImagSign, SurfaceBranch};
use tiqpt::{Execution, ModelError};

use crate::checks;
use crate::presets::{Command, Grid, PresetSpec, SweepKind};
use crate::{AxisArg, BandsArgs, BranchArg, Common, RibbonArgs, SurfaceArgs, SurfaceBranchArg, SweepArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Input(String),
    Model(ModelError),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Model(ModelError::MissingParameter(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Model(err) => write!(f, "{err}"),
            CliError::Io(path, err) => write!(f, "{}: {err}", path.display()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(err: ModelError) -> Self {
        CliError::Model(err)
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Context {
    doc: ParamsDocument,
    preset: Option<PresetSpec>,
    preset_name: Option<&'static str>,
    out: PathBuf,
    exec: Execution,
}

impl Context {
    fn new(common: &Common, command: Option<Command>, default_out: &str) -> Result<Self> {
        let preset = common.preset.map(|p| (p.name(), p.spec()));
        if let Some((name, spec)) = &preset {
            if Some(spec.command) != command {
                return Err(CliError::Input(format!("preset {name} does not apply to this subcommand")));
            }
        }
        let mut doc = preset.as_ref().map(|(_, s)| s.params.clone()).unwrap_or_default();
        if let Some(path) = &common.params {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            let file = ParamsDocument::from_json(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            doc = doc.overlay(&file);
        }
        Ok(Self {
            doc,
            preset_name: preset.as_ref().map(|(n, _)| *n),
            preset: preset.map(|(_, s)| s),
            out: common.out.clone().unwrap_or_else(|| PathBuf::from(default_out)),
            exec: if common.serial { Execution::Serial } else { Execution::Parallel },
        })
    }

    /// Explicit `--grid`, else the preset grid, else `fallback`.
    fn grid(&self, common: &Common, fallback: Grid) -> Result<SweepGrid> {
        let (start, stop, count) = common
            .grid
            .or(self.preset.as_ref().and_then(|p| p.grid))
            .unwrap_or(fallback);
        Ok(SweepGrid::new(start, stop, count)?)
    }

    fn sidecar(&self, command: &str, common: &Common, grid: &SweepGrid, body: Map<String, Value>) -> Map<String, Value> {
        let mut meta = body;
        meta.insert("command".into(), json!(command));
        meta.insert("preset".into(), json!(self.preset_name));
        meta.insert("self_check".into(), json!(common.self_check));
        meta.insert(
            "grid".into(),
            json!({ "start": grid.start, "stop": grid.stop, "count": grid.count }),
        );
        meta
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    write_file(path, &text)
}

/// `<out stem>.json` beside the CSV.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// `<out stem>.measurement.json` beside the CSV.
pub fn measurement_path(out: &Path) -> PathBuf {
    out.with_extension("measurement.json")
}

fn emit(out: &Path, csv: &str, meta: Map<String, Value>) -> Result<()> {
    write_file(out, csv)?;
    write_json(&sidecar_path(out), &Value::Object(meta))
}

fn sweep_metadata(result: &SweepResult) -> Map<String, Value> {
    result.metadata.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

pub fn bands(args: &BandsArgs) -> Result<()> {
    let common = &args.common;
    let ctx = Context::new(common, Some(Command::Bands), "bands.csv")?;
    let params = ctx.doc.reduced_z()?;
    let grid = ctx.grid(common, (-3.0, 3.0, 601))?;
    let result = band_structure_z(&params, &grid, common.self_check, ctx.exec)?;
    let mut meta = sweep_metadata(&result);
    if let Ok(phase) = phase_classify(params.m, params.b) {
        meta.insert("phase".into(), json!(phase.as_str()));
    }
    emit(&ctx.out, &sweep_csv(&result), ctx.sidecar("bands", common, &grid, meta))
}

pub fn surface(args: &SurfaceArgs) -> Result<()> {
    let common = &args.common;
    let ctx = Context::new(common, Some(Command::Surface), "surface.csv")?;
    let params = ctx.doc.reduced_z()?;
    let branch = match args.branch {
        SurfaceBranchArg::One => SurfaceBranch::One,
        SurfaceBranchArg::Two => SurfaceBranch::Two,
    };
    let state = surface_state(&params, branch, ImagSign::Plus)?;
    // default depth range covers twelve slow decay lengths
    let grid = ctx.grid(common, (0.0, 12.0 / state.lambda_minus, 4001))?;
    let profile: Vec<(f64, f64)> = grid
        .points()
        .into_iter()
        .map(|z| Ok((z, surface_density(&state, z)?)))
        .collect::<Result<_>>()?;
    if common.self_check {
        checks::surface(&params, &state)?;
    }
    let (z_peak, density_peak) = surface_peak(&state);
    let mut meta = Map::new();
    meta.insert(
        "params".into(),
        json!({ "a": params.a, "b": params.b, "m": params.m }),
    );
    meta.insert("lambda_plus".into(), json!(state.lambda_plus));
    meta.insert("lambda_minus".into(), json!(state.lambda_minus));
    meta.insert("n_s".into(), json!(state.n_s));
    meta.insert("z_peak".into(), json!(z_peak));
    meta.insert("density_peak".into(), json!(density_peak));
    emit(&ctx.out, &density_csv(&profile), ctx.sidecar("surface", common, &grid, meta))
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let common = &args.common;
    let ctx = Context::new(common, Some(Command::Sweep), "sweep.csv")?;
    let preset = ctx.preset.as_ref();
    let kind = args
        .kind
        .or(preset.and_then(|p| p.kind))
        .ok_or_else(|| CliError::Input("--kind is required without a preset".into()))?;
    match kind {
        SweepKind::ConcurrenceVsB => {
            let m = ctx.doc.m.ok_or(ModelError::MissingParameter("M"))?;
            let a = ctx.doc.model_3d().a1;
            let kz = args
                .kz
                .or(preset.and_then(|p| p.kz))
                .ok_or_else(|| CliError::Input("--kz is required for concurrence-vs-b".into()))?;
            let grid = ctx.grid(common, (0.01, 1.5, 300))?;
            let mut result = concurrence_vs_b(m, a, kz, &grid, ctx.exec)?;
            if common.self_check {
                checks::concurrence_sweep(&result, m, a, kz)?;
            }
            if args.compare_sign || preset.is_some_and(|p| p.compare_sign) {
                let flipped = concurrence_vs_b(-m, a, kz, &grid, ctx.exec)?;
                if common.self_check {
                    checks::concurrence_sweep(&flipped, -m, a, kz)?;
                }
                for (name, values) in flipped.series {
                    result.series.push((format!("{name}_neg_m"), values));
                }
                result.metadata.insert("b_c_neg_m".into(), flipped.metadata["b_c"].clone());
            }
            let meta = sweep_metadata(&result);
            emit(
                &ctx.out,
                &sweep_csv(&result),
                ctx.sidecar("sweep", common, &grid, meta),
            )
        }
        SweepKind::EntropyVsK => {
            let params = ctx.doc.reduced_z()?;
            let branch = match args.branch {
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            };
            let grid = ctx.grid(common, (-8.0, 8.0, 801))?;
            let result = entropy_vs_k(&params, branch, &grid, ctx.exec)?;
            if common.self_check {
                checks::entropy_sweep(&result, &params, branch)?;
            }
            let meta = sweep_metadata(&result);
            emit(
                &ctx.out,
                &sweep_csv(&result),
                ctx.sidecar("sweep", common, &grid, meta),
            )
        }
    }
}

pub fn ribbon(args: &RibbonArgs) -> Result<()> {
    let common = &args.common;
    let ctx = Context::new(common, None, "ribbon.csv")?;
    let defaults = RibbonConfig::default();
    let d = &ctx.doc;
    let params = Params2D::new(
        d.v.unwrap_or(defaults.params.v),
        d.m_v2.unwrap_or(defaults.params.m_v2),
        d.b.unwrap_or(defaults.params.b),
    );
    let g = defaults.kx_grid;
    let config = RibbonConfig {
        params,
        width_sites: args.width,
        lattice_constant: args.lattice_constant,
        kx_grid: ctx.grid(common, (g.start, g.stop, g.count))?,
    };
    let spectrum = edge_spectrum(&config, ctx.exec)?;
    if common.self_check {
        checks::ribbon(&config, &spectrum, ctx.exec)?;
    }
    let transport = EdgeTransport::from_spectrum(&spectrum, args.probe_kx, args.bias);
    let probe = spectrum.nearest_index(args.probe_kx);
    let edge_states: Vec<&tiqpt::ribbon::RibbonState> = spectrum.edge_states(probe).collect();

    let mut meta = Map::new();
    meta.insert(
        "params".into(),
        json!({ "v": params.v, "m_v2": params.m_v2, "b": params.b }),
    );
    meta.insert("width_sites".into(), json!(config.width_sites));
    meta.insert("lattice_constant".into(), json!(config.lattice_constant));
    meta.insert("bulk_gap".into(), json!(spectrum.bulk_gap));
    meta.insert("edge_state_total".into(), json!(spectrum.total_edge_states()));
    meta.insert("probe_kx".into(), json!(transport.probe_kx));
    meta.insert("bias_voltage".into(), json!(args.bias));
    meta.insert("probe_edge_states".into(), json!(edge_states));
    meta.insert("channels".into(), json!(transport.channels));
    let mut g_map = Map::new();
    for (name, filter) in [("up", SpinFilter::Up), ("down", SpinFilter::Down), ("none", SpinFilter::None)] {
        let c = conductance(&transport, filter);
        g_map.insert(name.into(), json!(c.g));
        g_map.insert(format!("{name}_no_edge_channel"), json!(c.no_edge_channel));
    }
    meta.insert("conductance_e2_over_h".into(), Value::Object(g_map));

    if args.measure {
        let axis = match args.axis {
            AxisArg::Up => SpinAxis::UP,
            AxisArg::Down => SpinAxis::DOWN,
            AxisArg::X => SpinAxis::X,
            AxisArg::Custom => SpinAxis {
                polar: args
                    .polar
                    .ok_or_else(|| CliError::Input("--axis custom needs --polar".into()))?,
                azimuth: args.azimuth,
            },
        };
        if args.trials == 0 {
            return Err(CliError::Input("--trials must be at least 1".into()));
        }
        let setup = MeasurementSetup {
            bias_voltage: args.bias,
            filter_axis: axis,
            trials: args.trials,
            seed: args.seed,
        };
        let record = measure_repeated(&setup, ctx.exec);
        let path = measurement_path(&ctx.out);
        write_json(&path, &json!(record))?;
        meta.insert("measurement".into(), json!(path.file_name().map(|n| n.to_string_lossy())));
    }
    let grid = config.kx_grid;
    emit(&ctx.out, &ribbon_csv(&spectrum), ctx.sidecar("ribbon", common, &grid, meta))
}
