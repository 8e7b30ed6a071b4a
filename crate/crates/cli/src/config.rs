//! Run configuration: tolerance and cap overrides, seed, output path and
//! precision mode, loadable from a JSON file.

use serde::Deserialize;

use pba_core::special::SpecialConfig;
use pba_core::spectral::SpectralConfig;
use pba_core::verify::BatteryConfig;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub iterate_tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub agreement_tol: Option<f64>,
    pub positivity_threshold: Option<f64>,
    pub max_iterations: Option<usize>,
    pub char_tol: Option<f64>,
    pub c_samples: Option<usize>,
    pub seed: Option<u64>,
    pub nonzero_tol: Option<f64>,
    pub pivot_tol: Option<f64>,
    pub cone_eps: Option<f64>,
    pub validation_cap: Option<usize>,
    pub closure_cap: Option<usize>,
    pub order_cap: Option<usize>,
    pub jobs: Option<usize>,
    pub output: Option<String>,
    /// "exact" (default) rejects decimal coefficient input; "float" accepts
    /// decimals and converts them exactly.
    pub precision: Option<String>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("iterate_tol", self.iterate_tol),
            ("residual_tol", self.residual_tol),
            ("agreement_tol", self.agreement_tol),
            ("positivity_threshold", self.positivity_threshold),
            ("char_tol", self.char_tol),
            ("nonzero_tol", self.nonzero_tol),
            ("pivot_tol", self.pivot_tol),
            ("cone_eps", self.cone_eps),
        ] {
            if let Some(v) = v {
                if !v.is_finite() || v <= 0.0 {
                    return Err(format!("{name} must be positive"));
                }
            }
        }
        for (name, v) in [
            ("max_iterations", self.max_iterations),
            ("c_samples", self.c_samples),
            ("validation_cap", self.validation_cap),
            ("closure_cap", self.closure_cap),
            ("order_cap", self.order_cap),
            ("jobs", self.jobs),
        ] {
            if let Some(v) = v {
                if v < 1 {
                    return Err(format!("{name} must be at least 1"));
                }
            }
        }
        if let Some(p) = &self.precision {
            if p != "exact" && p != "float" {
                return Err("precision must be \"exact\" or \"float\"".into());
            }
        }
        Ok(())
    }

    pub fn spectral(&self) -> SpectralConfig {
        let mut cfg = SpectralConfig::default();
        if let Some(v) = self.iterate_tol {
            cfg.iterate_tol = v;
        }
        if let Some(v) = self.residual_tol {
            cfg.residual_tol = v;
        }
        if let Some(v) = self.agreement_tol {
            cfg.agreement_tol = v;
        }
        if let Some(v) = self.positivity_threshold {
            cfg.positivity_threshold = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        cfg
    }

    pub fn special(&self) -> SpecialConfig {
        let mut cfg = SpecialConfig {
            spectral: self.spectral(),
            ..SpecialConfig::default()
        };
        if let Some(v) = self.char_tol {
            cfg.char_tol = v;
        }
        if let Some(v) = self.c_samples {
            cfg.c_samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.nonzero_tol {
            cfg.nonzero_tol = v;
        }
        if let Some(v) = self.pivot_tol {
            cfg.pivot_tol = v;
        }
        if let Some(v) = self.jobs {
            cfg.jobs = v;
        }
        cfg
    }

    pub fn battery(&self) -> BatteryConfig {
        BatteryConfig {
            special: self.special(),
            validation_cap: self
                .validation_cap
                .unwrap_or(pba_core::algebra::DEFAULT_VALIDATION_CAP),
        }
    }

    pub fn float_precision(&self) -> bool {
        self.precision.as_deref() == Some("float")
    }
}
