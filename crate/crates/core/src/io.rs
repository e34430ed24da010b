//! Parameter documents and the CSV renderings used by the CLI.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{ModelError, Result};
use crate::model::{ModelParams3D, Params2D, ReducedParamsZ};
use crate::phase::SweepResult;
use crate::ribbon::RibbonSpectrum;

/// Fixed 17-significant-digit rendering.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON parameter document. Recognized keys: `A1 A2 B1 B2 C D1 D2 M` for the
/// 3-D model and `v m_v2 B` for the 2-D model; `A` is accepted as an alias
/// for `A1`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDocument {
    #[serde(rename = "A1")]
    pub a1: Option<f64>,
    #[serde(rename = "A2")]
    pub a2: Option<f64>,
    #[serde(rename = "B1")]
    pub b1: Option<f64>,
    #[serde(rename = "B2")]
    pub b2: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "D1")]
    pub d1: Option<f64>,
    #[serde(rename = "D2")]
    pub d2: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub v: Option<f64>,
    pub m_v2: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
}

impl ParamsDocument {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Keys present in `other` replace those in `self`.
    pub fn overlay(self, other: &ParamsDocument) -> Self {
        Self {
            a1: other.a1.or(self.a1),
            a2: other.a2.or(self.a2),
            b1: other.b1.or(self.b1),
            b2: other.b2.or(self.b2),
            c: other.c.or(self.c),
            d1: other.d1.or(self.d1),
            d2: other.d2.or(self.d2),
            m: other.m.or(self.m),
            a: other.a.or(self.a),
            v: other.v.or(self.v),
            m_v2: other.m_v2.or(self.m_v2),
            b: other.b.or(self.b),
        }
    }

    fn a_coefficient(&self) -> Option<f64> {
        self.a1.or(self.a)
    }

    /// 3-D parameters, missing keys defaulting to zero.
    pub fn model_3d(&self) -> ModelParams3D {
        ModelParams3D {
            a1: self.a_coefficient().unwrap_or(0.0),
            a2: self.a2.unwrap_or(0.0),
            b1: self.b1.unwrap_or(0.0),
            b2: self.b2.unwrap_or(0.0),
            c: self.c.unwrap_or(0.0),
            d1: self.d1.unwrap_or(0.0),
            d2: self.d2.unwrap_or(0.0),
            m: self.m.unwrap_or(0.0),
        }
    }

    /// `(A, B, M)` for a phase computation; `M` and `B1` are mandatory.
    pub fn reduced_z(&self) -> Result<ReducedParamsZ> {
        let m = self.m.ok_or(ModelError::MissingParameter("M"))?;
        let b = self.b1.ok_or(ModelError::MissingParameter("B1"))?;
        Ok(ReducedParamsZ::new(self.a_coefficient().unwrap_or(0.0), b, m))
    }

    pub fn params_2d(&self) -> Params2D {
        Params2D::new(
            self.v.unwrap_or(0.0),
            self.m_v2.unwrap_or(0.0),
            self.b.unwrap_or(0.0),
        )
    }
}

/// Header `<parameter>,<series...>`, one row per grid point.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(&result.parameter);
    for (name, _) in &result.series {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, &x) in result.grid.iter().enumerate() {
        out.push_str(&format_float(x));
        for (_, values) in &result.series {
            out.push(',');
            out.push_str(&format_float(values[i]));
        }
        out.push('\n');
    }
    out
}

/// Header `z,density`.
pub fn density_csv(profile: &[(f64, f64)]) -> String {
    let mut out = String::from("z,density\n");
    for &(z, d) in profile {
        let _ = writeln!(out, "{},{}", format_float(z), format_float(d));
    }
    out
}

/// Long format `kx,band,energy,edge_weight,spin_up_weight,helicity`.
pub fn ribbon_csv(spectrum: &RibbonSpectrum) -> String {
    let mut out = String::from("kx,band,energy,edge_weight,spin_up_weight,helicity\n");
    for (k, states) in spectrum.kx.iter().zip(&spectrum.states) {
        for (band, s) in states.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_float(*k),
                band,
                format_float(s.energy),
                format_float(s.edge_weight),
                format_float(s.spin_up_weight),
                format_float(s.helicity)
            );
        }
    }
    out
}
