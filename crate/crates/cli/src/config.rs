//! Run configuration: a flat TOML file with one section per concern, every
//! key optional, command-line flags applied on top.

use std::fmt;

use serde::{Deserialize, Serialize};
use tlsphot::spectral::{GridSpec, MIN_WINDOW_WIDTHS, MAX_STEP_FRACTION};
use tlsphot::sweeps::SweepSpec;
use tlsphot::tls::Branch;

/// Keys accepted in each section. The `manifest` section written next to
/// every output is accepted and ignored, so a manifest doubles as a config.
const SCHEMA: &[(&str, &[&str])] = &[
    ("run", &["out"]),
    ("tls", &["beta", "branch", "sigma"]),
    ("grid", &["points", "half_window", "window_widths", "window_rates"]),
    ("fig1b", &["betas", "sigma_min", "sigma_max", "n_sigma"]),
    ("loss-curves", &["betas"]),
    ("fig3", &["betas"]),
    ("convergence", &["tolerance"]),
];

const IGNORED_SECTION: &str = "manifest";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub run: RunSection,
    pub tls: TlsSection,
    pub grid: GridSection,
    pub fig1b: Fig1bSection,
    #[serde(rename = "loss-curves")]
    pub loss_curves: BetaSection,
    pub fig3: BetaSection,
    pub convergence: ConvergenceSection,
}

impl Default for Config {
    fn default() -> Self {
        let eta = SweepSpec::eta_family();
        let betas = SweepSpec::beta_range().betas;
        Self {
            run: RunSection { out: "out".into() },
            tls: TlsSection {
                beta: 1.0,
                branch: BranchName::Upper,
                sigma: None,
            },
            grid: GridSection::default(),
            fig1b: Fig1bSection {
                betas: eta.betas,
                sigma_min: eta.sigma_min,
                sigma_max: eta.sigma_max,
                n_sigma: eta.n_sigma,
            },
            loss_curves: BetaSection {
                betas: betas.clone(),
            },
            fig3: BetaSection { betas },
            convergence: ConvergenceSection { tolerance: 1e-4 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    /// Output directory.
    pub out: String,
}

impl Default for RunSection {
    fn default() -> Self {
        Config::default().run
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Lower,
    Upper,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Lower => Branch::Lower,
            BranchName::Upper => Branch::Upper,
        }
    }
}

/// Emitter and operating point of the demo experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TlsSection {
    pub beta: f64,
    /// Matching branch used when `sigma` is not given.
    pub branch: BranchName,
    /// Pulse width in units of the waveguide rate; the matched width if unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl Default for TlsSection {
    fn default() -> Self {
        Config::default().tls
    }
}

/// Overrides of the automatic grid rule.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_widths: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_rates: Option<f64>,
}

impl GridSection {
    /// `base` with this section's overrides applied.
    pub fn apply(&self, base: GridSpec) -> GridSpec {
        GridSpec {
            window_widths: self.window_widths.unwrap_or(base.window_widths),
            window_rates: self.window_rates.unwrap_or(base.window_rates),
            half_window: self.half_window.or(base.half_window),
            points: self.points.or(base.points),
            ..base
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fig1bSection {
    pub betas: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub n_sigma: usize,
}

impl Default for Fig1bSection {
    fn default() -> Self {
        Config::default().fig1b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BetaSection {
    pub betas: Vec<f64>,
}

impl Default for BetaSection {
    fn default() -> Self {
        Config::default().fig3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergenceSection {
    /// Largest accepted change of a headline value between the default and
    /// the doubled grid, relative to `max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for ConvergenceSection {
    fn default() -> Self {
        Config::default().convergence
    }
}

/// Syntax or type error, located in the source text.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.key, self.message)
    }
}

fn locate(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

fn parse_error(text: &str, e: toml::de::Error) -> ParseError {
    let (line, column) = e.span().map_or((1, 1), |s| locate(text, s.start));
    ParseError {
        line,
        column,
        message: e.message().trim().to_string(),
    }
}

fn unknown_keys(table: &toml::Table) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let unknown = |key: String, what: &str| Diagnostic {
        severity: Severity::Error,
        key,
        message: format!("unknown {what}"),
    };
    for (section, value) in table {
        if section == IGNORED_SECTION {
            continue;
        }
        let Some((_, keys)) = SCHEMA.iter().find(|(name, _)| name == section) else {
            out.push(unknown(section.clone(), "section"));
            continue;
        };
        match value.as_table() {
            Some(t) => out.extend(
                t.keys()
                    .filter(|k| !keys.contains(&k.as_str()))
                    .map(|k| unknown(format!("{section}.{k}"), "key")),
            ),
            None => out.push(Diagnostic {
                severity: Severity::Error,
                key: section.clone(),
                message: "expected a section".into(),
            }),
        }
    }
    out
}

/// Parses `text`, returning the config and the unknown-key diagnostics.
pub fn parse(text: &str) -> Result<(Config, Vec<Diagnostic>), ParseError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    let diagnostics = unknown_keys(&table);
    let config: Config = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    Ok((config, diagnostics))
}

impl Config {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Range and grid-resolution checks.
    pub fn check(&self) -> Vec<Diagnostic> {
        let mut d = Vec::new();
        let mut error = |key: &str, message: String| {
            d.push(Diagnostic {
                severity: Severity::Error,
                key: key.into(),
                message,
            })
        };
        let beta_ok = |b: f64| b > 0.0 && b <= 1.0;

        if self.run.out.is_empty() {
            error("run.out", "must not be empty".into());
        }
        if !beta_ok(self.tls.beta) {
            error("tls.beta", format!("must be in (0, 1], got {}", self.tls.beta));
        }
        if let Some(s) = self.tls.sigma {
            if !(s > 0.0 && s.is_finite()) {
                error("tls.sigma", format!("must be > 0, got {s}"));
            }
        }
        if let Some(n) = self.grid.points {
            if n < 3 || n % 2 == 0 {
                error("grid.points", format!("must be odd and at least 3, got {n}"));
            }
        }
        if let Some(w) = self.grid.half_window {
            if !(w > 0.0 && w.is_finite()) {
                error("grid.half_window", format!("must be > 0, got {w}"));
            }
        }
        if let Some(w) = self.grid.window_widths {
            if !(w >= MIN_WINDOW_WIDTHS && w.is_finite()) {
                error(
                    "grid.window_widths",
                    format!("must be at least {MIN_WINDOW_WIDTHS}, got {w}"),
                );
            }
        }
        if let Some(w) = self.grid.window_rates {
            if !(w > 0.0 && w.is_finite()) {
                error("grid.window_rates", format!("must be > 0, got {w}"));
            }
        }
        for (key, betas) in [
            ("fig1b.betas", &self.fig1b.betas),
            ("loss-curves.betas", &self.loss_curves.betas),
            ("fig3.betas", &self.fig3.betas),
        ] {
            if betas.is_empty() {
                error(key, "must not be empty".into());
            }
            for &b in betas {
                if !beta_ok(b) {
                    error(key, format!("each value must be in (0, 1], got {b}"));
                }
            }
        }
        let f = &self.fig1b;
        if !(f.sigma_min > 0.0 && f.sigma_min.is_finite()) {
            error("fig1b.sigma_min", format!("must be > 0, got {}", f.sigma_min));
        }
        if !(f.sigma_max > f.sigma_min && f.sigma_max.is_finite()) {
            error(
                "fig1b.sigma_max",
                format!("must exceed sigma_min = {}, got {}", f.sigma_min, f.sigma_max),
            );
        }
        if f.n_sigma < 2 {
            error("fig1b.n_sigma", format!("must be at least 2, got {}", f.n_sigma));
        }
        let t = self.convergence.tolerance;
        if !(t > 0.0 && t.is_finite()) {
            error("convergence.tolerance", format!("must be > 0, got {t}"));
        }
        if d.is_empty() {
            d.extend(self.resolution_warnings());
        }
        d
    }

    /// Pinned grids that cannot resolve a requested pulse width.
    fn resolution_warnings(&self) -> Vec<Diagnostic> {
        if self.grid.points.is_none() && self.grid.half_window.is_none() {
            return Vec::new();
        }
        let key = if self.grid.points.is_some() { "grid.points" } else { "grid.half_window" };
        let mut widths = vec![
            ("fig1b.sigma_min", self.fig1b.sigma_min, &GridSpec::ANALYSIS, self.fig1b.betas.clone()),
            ("fig1b.sigma_max", self.fig1b.sigma_max, &GridSpec::ANALYSIS, self.fig1b.betas.clone()),
        ];
        if let Some(s) = self.tls.sigma {
            widths.push(("tls.sigma", s, &GridSpec::CIRCUIT, vec![self.tls.beta]));
        }
        let mut out = Vec::new();
        for (name, sigma, base, betas) in widths {
            // The widest total rate gives the widest automatic window.
            let rate = betas.iter().map(|b| 1.0 / b).fold(1.0, f64::max);
            let Ok(grid) = self.grid.apply(*base).grid_for(sigma, 0.0, rate) else {
                continue;
            };
            let limit = MAX_STEP_FRACTION * sigma;
            if grid.spacing() > limit {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    key: key.into(),
                    message: format!(
                        "spacing {} exceeds sigma/10 = {limit} for {name} = {sigma}",
                        grid.spacing()
                    ),
                });
            }
            if grid.delta_max() < MIN_WINDOW_WIDTHS * sigma {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    key: "grid.half_window".into(),
                    message: format!(
                        "half window {} is below {MIN_WINDOW_WIDTHS} widths for {name} = {sigma}",
                        grid.delta_max()
                    ),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let (c, d) = parse("").unwrap();
        assert_eq!(c, Config::default());
        assert!(d.is_empty());
        assert!(c.check().is_empty());
    }

    #[test]
    fn serialized_config_round_trips() {
        let mut c = Config::default();
        c.tls.sigma = Some(0.75);
        c.grid.points = Some(2001);
        let (back, d) = parse(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert!(d.is_empty());
    }

    #[test]
    fn unknown_keys_are_all_reported() {
        let (_, d) = parse("[tls]\nbeta = 1.0\ngamma = 2\n[plot]\nx = 1\n[fig1b]\nbetas = [1.0]\nsteps = 3\n").unwrap();
        let keys: Vec<&str> = d.iter().map(|x| x.key.as_str()).collect();
        assert_eq!(keys.len(), 3);
        for k in ["tls.gamma", "plot", "fig1b.steps"] {
            assert!(keys.contains(&k), "{keys:?}");
        }
    }

    #[test]
    fn manifest_section_is_ignored() {
        let (_, d) = parse("[manifest]\ntool = \"tlsphot\"\nfiles = [\"a.csv\"]\n").unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse("[tls]\nbeta = 1.0\nsigma = = 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.column > 1);
        let e = parse("[tls]\nbeta = \"high\"\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn range_errors_name_the_field() {
        let (c, _) = parse("[tls]\nsigma = -1\n").unwrap();
        let d = c.check();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Error);
        assert_eq!(d[0].key, "tls.sigma");
        let (c, _) = parse("[grid]\npoints = 1000\n[fig3]\nbetas = [0.9, 1.5]\n").unwrap();
        let keys: Vec<String> = c.check().into_iter().map(|x| x.key).collect();
        assert_eq!(keys, ["grid.points", "fig3.betas"]);
    }

    #[test]
    fn coarse_pinned_grid_warns() {
        let (c, _) = parse("[grid]\npoints = 101\nhalf_window = 50.0\n").unwrap();
        let d = c.check();
        assert!(!d.is_empty());
        assert!(d.iter().all(|x| x.severity == Severity::Warning));
        assert!(d.iter().any(|x| x.message.contains("sigma/10")));
    }

    #[test]
    fn overrides_reach_the_grid_rule() {
        let g = GridSection {
            points: Some(301),
            window_widths: Some(60.0),
            ..GridSection::default()
        };
        let spec = g.apply(GridSpec::CIRCUIT);
        assert_eq!(spec.points, Some(301));
        assert_eq!(spec.window_widths, 60.0);
        assert_eq!(spec.window_rates, GridSpec::CIRCUIT.window_rates);
    }
}
