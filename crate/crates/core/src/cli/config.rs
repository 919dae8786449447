//! JSON run configuration. Angles are degrees on disk, radians inside.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fingertip::FingertipConfig;
use crate::linkage::{LinkageParams, DEFAULT_HALF_RANGE_DEG};
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkageSection {
    pub l_oc_mm: f64,
    pub l_ab_mm: f64,
    pub oa_x_mm: f64,
    /// Derived from the neutral-flatness constraint when absent.
    pub oa_y_mm: Option<f64>,
    pub alpha0_deg: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
}

impl Default for LinkageSection {
    fn default() -> Self {
        Self {
            l_oc_mm: 10.0,
            l_ab_mm: 20.0,
            oa_x_mm: 11.0,
            oa_y_mm: None,
            alpha0_deg: 30.0,
            theta_min_deg: -DEFAULT_HALF_RANGE_DEG,
            theta_max_deg: DEFAULT_HALF_RANGE_DEG,
        }
    }
}

impl LinkageSection {
    pub fn build(&self) -> Result<LinkageParams> {
        let alpha0 = self.alpha0_deg.to_radians();
        let oa_y = self.oa_y_mm.unwrap_or(-self.l_ab_mm * alpha0.cos());
        LinkageParams::from_parts(
            self.l_oc_mm,
            self.l_ab_mm,
            Vec2::new(self.oa_x_mm, oa_y),
            alpha0,
            (
                self.theta_min_deg.to_radians(),
                self.theta_max_deg.to_radians(),
            ),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FingertipSection {
    pub linkage: LinkageSection,
    pub facet_len_mm: f64,
    pub spring_k: f64,
    pub rod_len_mm: f64,
    pub step_deg: f64,
    pub step_count: usize,
}

impl Default for FingertipSection {
    fn default() -> Self {
        let d = FingertipConfig::default();
        Self {
            linkage: LinkageSection::default(),
            facet_len_mm: d.facet_len,
            spring_k: d.spring_k,
            rod_len_mm: d.rod_len,
            step_deg: d.step_deg,
            step_count: d.step_count,
        }
    }
}

impl FingertipSection {
    pub fn build(&self) -> Result<FingertipConfig> {
        let cfg = FingertipConfig {
            linkage: self.linkage.build()?,
            facet_len: self.facet_len_mm,
            spring_k: self.spring_k,
            rod_len: self.rod_len_mm,
            step_deg: self.step_deg,
            step_count: self.step_count,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub start_deg: f64,
    pub step_deg: f64,
    pub count: usize,
}

impl Default for SweepSection {
    /// From the concave end downward: 13 servo positions 3° apart.
    fn default() -> Self {
        Self {
            start_deg: DEFAULT_HALF_RANGE_DEG,
            step_deg: -3.0,
            count: 13,
        }
    }
}

impl SweepSection {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidParams(
                "sweep count must be at least 2".into(),
            ));
        }
        if !(self.step_deg.is_finite() && self.step_deg != 0.0 && self.start_deg.is_finite()) {
            return Err(Error::InvalidParams(
                "sweep step must be finite and nonzero".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceSection {
    pub psi_max_deg: f64,
    /// Interpolated points per edge between extreme poses.
    pub segments: usize,
}

impl Default for TraceSection {
    fn default() -> Self {
        Self {
            psi_max_deg: 5.0,
            segments: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: OutputFormat,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub fingertip: FingertipSection,
    pub sweep: SweepSection,
    pub trace: TraceSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParams(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
