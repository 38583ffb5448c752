//! Solver configuration: defaults, optional key=value file, flag overrides.
//!
//! Precedence is flags > config file > defaults. The file is plain
//! `key = value` lines with `#` comments; its path comes from `--config`
//! or the `BIHARM_CONFIG` environment variable.

use biharm_core::quartic::ProblemParams;
use biharm_core::radial_ode::ShootingConfig;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default, clap::Args)]
pub struct SolverFlags {
    /// Series handoff radius (at the alpha = 1 scale)
    #[arg(long, global = true)]
    pub r_start: Option<f64>,
    /// Integration horizon (at the alpha = 1 scale)
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Relative integration tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute integration tolerance floor
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Relative bracket width at which the shooting bisection stops
    #[arg(long, global = true)]
    pub beta_tol: Option<f64>,
    /// Divergence threshold multiplier on the singular amplitude
    #[arg(long, global = true)]
    pub growth_factor: Option<f64>,
    /// Cap on bisection iterations
    #[arg(long, global = true)]
    pub max_bisections: Option<u32>,
    /// Horizon multiplier for classification runs
    #[arg(long, global = true)]
    pub extend_factor: Option<f64>,
}

pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, f64>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("{}:{}: bad numeric value", path.display(), lineno + 1))?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

/// Assemble the effective config for one problem.
pub fn effective_config(
    params: &ProblemParams,
    file: &BTreeMap<String, f64>,
    flags: &SolverFlags,
) -> ShootingConfig {
    let mut config = ShootingConfig::for_params(params);
    let from_file = |key: &str, slot: &mut f64| {
        if let Some(v) = file.get(key) {
            *slot = *v;
        }
    };
    from_file("r_start", &mut config.r_start);
    from_file("r_max", &mut config.r_max);
    from_file("rel_tol", &mut config.rel_tol);
    from_file("abs_tol", &mut config.abs_tol);
    from_file("beta_tol", &mut config.beta_tol);
    from_file("growth_factor", &mut config.growth_factor);
    from_file("extend_factor", &mut config.extend_factor);
    if let Some(v) = file.get("max_bisections") {
        config.max_bisections = *v as u32;
    }

    macro_rules! flag {
        ($field:ident) => {
            if let Some(v) = flags.$field {
                config.$field = v;
            }
        };
    }
    flag!(r_start);
    flag!(r_max);
    flag!(rel_tol);
    flag!(abs_tol);
    flag!(beta_tol);
    flag!(growth_factor);
    flag!(extend_factor);
    if let Some(v) = flags.max_bisections {
        config.max_bisections = v;
    }
    config
}
