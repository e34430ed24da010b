use tiqpt::io::ParamsDocument;

/// Bundled parameter sets that reproduce the reference figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    #[value(name = "fig2a")]
    Fig2a,
    #[value(name = "fig2b")]
    Fig2b,
    #[value(name = "fig3-left")]
    Fig3Left,
    #[value(name = "fig3-center")]
    Fig3Center,
    #[value(name = "fig3-right")]
    Fig3Right,
    #[value(name = "fig4-upper")]
    Fig4Upper,
    #[value(name = "fig4-lower")]
    Fig4Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bands,
    Surface,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKind {
    #[value(name = "concurrence-vs-b")]
    ConcurrenceVsB,
    #[value(name = "entropy-vs-k")]
    EntropyVsK,
}

/// `(start, stop, count)`
pub type Grid = (f64, f64, usize);

pub struct PresetSpec {
    pub command: Command,
    pub params: ParamsDocument,
    pub grid: Option<Grid>,
    pub kind: Option<SweepKind>,
    pub kz: Option<f64>,
    pub compare_sign: bool,
}

fn doc(a: f64, b: f64, m: f64) -> ParamsDocument {
    ParamsDocument {
        a1: Some(a),
        b1: Some(b),
        m: Some(m),
        ..Default::default()
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3Left => "fig3-left",
            Preset::Fig3Center => "fig3-center",
            Preset::Fig3Right => "fig3-right",
            Preset::Fig4Upper => "fig4-upper",
            Preset::Fig4Lower => "fig4-lower",
        }
    }

    pub fn spec(self) -> PresetSpec {
        let base = |command, params| PresetSpec {
            command,
            params,
            grid: None,
            kind: None,
            kz: None,
            compare_sign: false,
        };
        match self {
            Preset::Fig2a => base(Command::Surface, doc(4.0, 0.1, 2.0)),
            Preset::Fig2b => base(Command::Surface, doc(4.0, 1.0, 2.0)),
            Preset::Fig3Left => base(Command::Bands, doc(0.2, 1.0, -1.3)),
            Preset::Fig3Center => base(Command::Bands, doc(0.2, 1.0, 0.0)),
            Preset::Fig3Right => base(Command::Bands, doc(0.2, 1.0, 1.3)),
            Preset::Fig4Upper => PresetSpec {
                grid: Some((0.01, 1.5, 300)),
                kind: Some(SweepKind::ConcurrenceVsB),
                kz: Some(2.0),
                compare_sign: true,
                ..base(
                    Command::Sweep,
                    ParamsDocument {
                        a1: Some(4.0),
                        m: Some(2.0),
                        ..Default::default()
                    },
                )
            },
            Preset::Fig4Lower => PresetSpec {
                grid: Some((-8.0, 8.0, 801)),
                kind: Some(SweepKind::EntropyVsK),
                ..base(Command::Sweep, doc(4.0, 0.1, 2.0))
            },
        }
    }
}
