//! Run manifests: flat `key = value` text with `#` comments.

use std::fmt::Write as _;
use std::path::PathBuf;

use saddlepoint::helmholtz::Preconditioner;
use saddlepoint::saddle::StepParams;
use saddlepoint::torsion::{
    grid_for_resolution, DomainKind, InnerSettings, Scheme, StepChoice, TorsionConfig, DEFAULT_KAPPA,
    DEFAULT_MAX_OUTER_ITERS, DEFAULT_STOP_TOLERANCE,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ManifestError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("invalid value for `{key}`: {reason}")]
    Value { key: &'static str, reason: String },
    #[error("`alpha` and `beta` must be given together")]
    HalfSteps,
}

/// Everything needed to reproduce one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub domain: String,
    /// Nodes across the computed domain.
    pub n: usize,
    pub lambda: f64,
    /// `None` selects `3h`.
    pub epsilon: Option<f64>,
    pub scheme: String,
    pub kappa: usize,
    /// `None` selects the automatic steps.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub stop_tolerance: f64,
    pub max_outer_iters: usize,
    pub inner_tolerance: f64,
    pub inner_max_iters: usize,
    pub preconditioner: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub emit_fields: bool,
}

impl Default for RunManifest {
    fn default() -> Self {
        let inner = InnerSettings::default();
        Self {
            domain: DomainKind::Quarter.to_string(),
            n: 101,
            lambda: 5.0,
            epsilon: None,
            scheme: "iss".into(),
            kappa: DEFAULT_KAPPA,
            alpha: None,
            beta: None,
            stop_tolerance: DEFAULT_STOP_TOLERANCE,
            max_outer_iters: DEFAULT_MAX_OUTER_ITERS,
            inner_tolerance: inner.rel_tolerance,
            inner_max_iters: inner.max_iters,
            preconditioner: "none".into(),
            seed: 0,
            output_dir: PathBuf::from("out"),
            emit_fields: false,
        }
    }
}

const KEYS: [&str; 16] = [
    "domain",
    "n",
    "lambda",
    "epsilon",
    "scheme",
    "kappa",
    "alpha",
    "beta",
    "stop_tolerance",
    "max_outer_iters",
    "inner_tolerance",
    "inner_max_iters",
    "preconditioner",
    "seed",
    "output_dir",
    "emit_fields",
];

fn value_err(key: &'static str, reason: impl ToString) -> ManifestError {
    ManifestError::Value { key, reason: reason.to_string() }
}

fn num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, ManifestError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| value_err(key, format!("`{v}`: {e}")))
}

fn auto_num(key: &'static str, v: &str) -> Result<Option<f64>, ManifestError> {
    if v.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        num(key, v).map(Some)
    }
}

fn show_auto(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

fn parse_preconditioner(s: &str) -> Result<Preconditioner, ManifestError> {
    match s.to_ascii_lowercase().as_str() {
        "none" | "cg" => Ok(Preconditioner::None),
        "multigrid" | "mg" => Ok(Preconditioner::Multigrid),
        other => Err(value_err("preconditioner", format!("`{other}` (expected none or multigrid)"))),
    }
}

impl RunManifest {
    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let mut m = Self::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ManifestError::Syntax { line, text: raw.to_string() })?;
            let (key, value) = (key.trim(), value.trim());
            let key: &'static str = KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| ManifestError::UnknownKey { line, key: key.to_string() })?;
            if seen.contains(&key) {
                return Err(ManifestError::Duplicate { line, key: key.to_string() });
            }
            seen.push(key);
            match key {
                "domain" => m.domain = value.to_string(),
                "n" => m.n = num(key, value)?,
                "lambda" => m.lambda = num(key, value)?,
                "epsilon" => m.epsilon = auto_num(key, value)?,
                "scheme" => m.scheme = value.to_string(),
                "kappa" => m.kappa = num(key, value)?,
                "alpha" => m.alpha = auto_num(key, value)?,
                "beta" => m.beta = auto_num(key, value)?,
                "stop_tolerance" => m.stop_tolerance = num(key, value)?,
                "max_outer_iters" => m.max_outer_iters = num(key, value)?,
                "inner_tolerance" => m.inner_tolerance = num(key, value)?,
                "inner_max_iters" => m.inner_max_iters = num(key, value)?,
                "preconditioner" => m.preconditioner = value.to_string(),
                "seed" => m.seed = num(key, value)?,
                "output_dir" => m.output_dir = PathBuf::from(value),
                "emit_fields" => m.emit_fields = num(key, value)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }
        if m.alpha.is_some() != m.beta.is_some() {
            return Err(ManifestError::HalfSteps);
        }
        Ok(m)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("domain", self.domain.clone());
        put("n", self.n.to_string());
        put("lambda", self.lambda.to_string());
        put("epsilon", show_auto(self.epsilon));
        put("scheme", self.scheme.clone());
        put("kappa", self.kappa.to_string());
        put("alpha", show_auto(self.alpha));
        put("beta", show_auto(self.beta));
        put("stop_tolerance", self.stop_tolerance.to_string());
        put("max_outer_iters", self.max_outer_iters.to_string());
        put("inner_tolerance", self.inner_tolerance.to_string());
        put("inner_max_iters", self.inner_max_iters.to_string());
        put("preconditioner", self.preconditioner.clone());
        put("seed", self.seed.to_string());
        put("output_dir", self.output_dir.display().to_string());
        put("emit_fields", self.emit_fields.to_string());
        s
    }

    pub fn scheme(&self) -> Result<Scheme, ManifestError> {
        self.scheme.parse().map_err(|e| value_err("scheme", e))
    }

    pub fn domain(&self) -> Result<DomainKind, ManifestError> {
        self.domain.parse().map_err(|e| value_err("domain", e))
    }

    /// Builds and validates the solver configuration.
    pub fn to_config(&self) -> anyhow::Result<TorsionConfig> {
        let grid = grid_for_resolution(self.n, self.domain()?).map_err(|e| value_err("n", e))?;
        let mut c = TorsionConfig::new(grid, self.lambda, self.scheme()?);
        if let Some(eps) = self.epsilon {
            c.epsilon = eps;
        }
        c.kappa = self.kappa;
        if let (Some(alpha), Some(beta)) = (self.alpha, self.beta) {
            c.steps = StepChoice::Manual(StepParams { alpha, beta });
        }
        c.stop_tolerance = self.stop_tolerance;
        c.max_outer_iters = self.max_outer_iters;
        c.inner = InnerSettings {
            rel_tolerance: self.inner_tolerance,
            max_iters: self.inner_max_iters,
            preconditioner: parse_preconditioner(&self.preconditioner)?,
        };
        c.validate()?;
        Ok(c)
    }
}
