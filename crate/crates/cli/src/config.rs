//! Run configuration: a JSON document with defaults for every section, plus
//! dotted-path overrides from the command line.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use kerrsq::oracle::{ConvolutionOracleConfig, DftOracleConfig, FockOracleConfig};
use kerrsq::spectra::{PhaseMode, SpectrumRequest, SweepAxis};
use kerrsq::{Envelope, InteractionParams, Kernel, PulseSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraSection {
    pub t: f64,
    #[serde(rename = "Omega_grid")]
    pub omega_grid: Vec<f64>,
    #[serde(rename = "Omega0")]
    pub omega0: f64,
    pub phase_mode: PhaseMode,
}

impl Default for SpectraSection {
    fn default() -> Self {
        SpectraSection {
            t: 0.0,
            omega_grid: (0..=30).map(|i| i as f64 / 10.0).collect(),
            omega0: 0.0,
            phase_mode: PhaseMode::Optimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub axis: String,
    pub values: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            axis: "phi01".into(),
            values: (1..=30).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub dft: DftOracleConfig,
    pub convolution: ConvolutionOracleConfig,
    pub fock: FockOracleConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub interaction: InteractionParams,
    pub pulse1: PulseSpec,
    pub pulse2: PulseSpec,
    pub kernel: Kernel,
    pub spectra: SpectraSection,
    pub sweep: SweepSection,
    pub oracle: OracleSection,
    pub output_path: Option<String>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        // figure-1 preset at intensity ratio 2
        RunConfig {
            interaction: InteractionParams {
                gamma1: 0.01,
                gamma2: 0.01,
                gamma_x: 0.005,
            },
            pulse1: PulseSpec {
                shape: Envelope::Gaussian,
                tau_p: 100.0,
                n_peak: 100.0,
                linear_phase: Default::default(),
            },
            pulse2: PulseSpec {
                shape: Envelope::Gaussian,
                tau_p: 100.0,
                n_peak: 200.0,
                linear_phase: Default::default(),
            },
            kernel: Kernel::default(),
            spectra: SpectraSection::default(),
            sweep: SweepSection::default(),
            oracle: OracleSection::default(),
            output_path: None,
            format: None,
        }
    }
}

impl RunConfig {
    /// Defaults, then the optional JSON file, then each `path=value` override.
    pub fn load(file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let base = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading config `{path}`"))?;
                serde_json::from_str::<RunConfig>(&text).with_context(|| format!("parsing config `{path}`"))?
            }
            None => RunConfig::default(),
        };
        let mut doc = serde_json::to_value(&base)?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let mut cfg: RunConfig = serde_json::from_value(doc).context("applying --set overrides")?;
        cfg.normalize_shapes()?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn normalize_shapes(&mut self) -> Result<()> {
        for p in [&mut self.pulse1, &mut self.pulse2] {
            if let Envelope::Tabulated { times, values } = &p.shape {
                p.shape = Envelope::tabulated(times.clone(), values.clone())?;
            }
        }
        Ok(())
    }

    /// Checks every section, whichever command will run.
    pub fn validate(&self) -> Result<()> {
        self.request().validate()?;
        self.sweep_axis()?;
        if self.sweep.values.iter().any(|v| !v.is_finite()) {
            bail!("sweep.values must be finite");
        }
        self.oracle.fock.lattice.validate()?;
        self.oracle.fock.params.validate()?;
        self.oracle.convolution.quad.validate()?;
        let dft = &self.oracle.dft;
        if !(dft.window > 0.0 && dft.step > 0.0 && dft.step <= dft.window && dft.tolerance > 0.0) {
            bail!("oracle.dft needs 0 < step <= window and tolerance > 0");
        }
        let conv = &self.oracle.convolution;
        if conv.durations.is_empty() || conv.durations.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            bail!("oracle.convolution.durations must be non-empty and positive");
        }
        if !(conv.gamma > 0.0 && conv.phi0 > 0.0) {
            bail!("oracle.convolution.gamma and phi0 must be > 0");
        }
        Ok(())
    }

    pub fn request(&self) -> SpectrumRequest {
        SpectrumRequest {
            params: self.interaction,
            pulse1: self.pulse1.clone(),
            pulse2: self.pulse2.clone(),
            t: self.spectra.t,
            omega_grid: self.spectra.omega_grid.clone(),
            omega0: self.spectra.omega0,
            phase_mode: self.spectra.phase_mode,
            kernel: self.kernel,
        }
    }

    pub fn sweep_axis(&self) -> Result<SweepAxis> {
        Ok(self.sweep.axis.parse()?)
    }
}

/// Sets the leaf at a dotted path. The value is read as JSON, or taken as a
/// plain string when it is not valid JSON.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("--set expects path=value, got `{assignment}`"))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let keys: Vec<&str> = path.split('.').collect();
    for (i, key) in keys.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| anyhow!("`{}` is not a section", keys[..i].join(".")))?;
        let slot = obj
            .get_mut(*key)
            .ok_or_else(|| anyhow!("unknown config key `{}`", keys[..=i].join(".")))?;
        if i + 1 == keys.len() {
            *slot = value;
            return Ok(());
        }
        node = slot;
    }
    bail!("empty --set path")
}
