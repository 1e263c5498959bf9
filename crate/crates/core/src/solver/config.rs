use serde::{Deserialize, Serialize};

use crate::forge::ForgeParams;
use crate::log2_ceil;
use crate::sandwich::MultiscaleParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Auto,
    Dense,
    Sparse,
}

/// Every tunable constant of the solver. Defaults: `c₀ = 3`, `c_R = 4`,
/// `c_s = 4`, smallness `c = 1/8`, retry cap 8, cleanup below
/// `⌈log₂ n⌉²` negative vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub c0: usize,
    pub c_r: f64,
    pub c_s: f64,
    pub smallness: f64,
    pub retry_cap: usize,
    /// `None` means `⌈log₂ n⌉²`.
    pub cleanup_threshold: Option<usize>,
    pub regime: Regime,
    /// Star arcs to every vertex instead of only to the sample.
    pub full_multiscale: bool,
    pub enforce_envelope_sizes: bool,
    /// Multiplier on the `⌈log₂ n⌉² + h/⌈log₂ n⌉²` size below which a
    /// sandwich is neutralized by direct Johnson instead of a reducer.
    pub reducer_floor: f64,
    pub check_estimates: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c0: 3,
            c_r: 4.0,
            c_s: 4.0,
            smallness: 0.125,
            retry_cap: 8,
            cleanup_threshold: None,
            regime: Regime::Auto,
            full_multiscale: false,
            enforce_envelope_sizes: true,
            reducer_floor: 1.0,
            check_estimates: false,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// Sets one field from its textual value, as given on a command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        match key {
            "c0" => self.c0 = parse(key, value)?,
            "c_r" => self.c_r = parse(key, value)?,
            "c_s" => self.c_s = parse(key, value)?,
            "smallness" => self.smallness = parse(key, value)?,
            "retry_cap" => self.retry_cap = parse(key, value)?,
            "cleanup_threshold" => {
                self.cleanup_threshold = if value == "auto" { None } else { Some(parse(key, value)?) }
            }
            "regime" => {
                self.regime = match value {
                    "auto" => Regime::Auto,
                    "dense" => Regime::Dense,
                    "sparse" => Regime::Sparse,
                    _ => return Err(format!("invalid value {value:?} for regime")),
                }
            }
            "full_multiscale" => self.full_multiscale = parse(key, value)?,
            "enforce_envelope_sizes" => self.enforce_envelope_sizes = parse(key, value)?,
            "reducer_floor" => self.reducer_floor = parse(key, value)?,
            "check_estimates" => self.check_estimates = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            _ => return Err(format!("unknown config key {key:?}")),
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = self.c0 > 0 && self.c_r > 0.0 && self.c_s > 0.0 && self.smallness > 0.0;
        if !positive || self.retry_cap == 0 || self.reducer_floor < 0.0 {
            return Err("constants must be positive and retry_cap at least 1".into());
        }
        Ok(())
    }

    pub fn multiscale(&self) -> MultiscaleParams {
        MultiscaleParams { c0: self.c0, c_r: self.c_r }
    }

    pub fn forge(&self) -> ForgeParams {
        ForgeParams {
            c_s: self.c_s,
            enforce_envelope_sizes: self.enforce_envelope_sizes,
            check_estimates: self.check_estimates,
        }
    }

    pub fn cleanup_threshold_for(&self, n: usize) -> usize {
        self.cleanup_threshold.unwrap_or_else(|| log2_ceil(n).pow(2))
    }
}

/// Parameters of one iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub regime: Regime,
    pub h: usize,
    pub q: f64,
    pub h0: usize,
}

/// Picks the regime and `h`, `q` from `n`, `m` and `k = |N|`.
///
/// With `L = log₂ n` and `LL = log₂ log₂ n` (both floored at 1) and
/// `μ = m + n log₂ n`: if `μ ≤ k^{5/4}·LL²/L^{3/4}` then
/// `h = (μL²/LL²)^{1/5}`, `q = √(μ/(h·LL²))`; otherwise
/// `h = (kL)^{1/4}`, `q = √(k/L)`.
pub fn schedule(n: usize, m: usize, k: usize, cfg: &SolverConfig) -> Schedule {
    let nf = n.max(2) as f64;
    let lg = nf.log2().max(1.0);
    let llg = lg.log2().max(1.0);
    let mu = m as f64 + nf * nf.log2();
    let kf = k.max(1) as f64;
    let sparse = match cfg.regime {
        Regime::Auto => mu <= kf.powf(1.25) * llg * llg / lg.powf(0.75),
        Regime::Dense => false,
        Regime::Sparse => true,
    };
    let (h, q) = if sparse {
        let h = (mu * lg * lg / (llg * llg)).powf(0.2);
        (h, (mu / (h * llg * llg)).sqrt())
    } else {
        ((kf * lg).powf(0.25), (kf / lg).sqrt())
    };
    Schedule {
        regime: if sparse { Regime::Sparse } else { Regime::Dense },
        h: (h.ceil() as usize).max(1),
        q: q.clamp(1.0, kf),
        h0: cfg.c0 * log2_ceil(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_validate() {
        let mut c = SolverConfig::default();
        c.set("retry_cap", "3").unwrap();
        c.set("cleanup_threshold", "0").unwrap();
        c.set("regime", "sparse").unwrap();
        assert_eq!((c.retry_cap, c.cleanup_threshold, c.regime), (3, Some(0), Regime::Sparse));
        assert!(c.set("retry_cap", "0").is_err());
        assert!(c.set("nope", "1").is_err());
    }

    #[test]
    fn regimes() {
        let cfg = SolverConfig::default();
        // n = 5000, m = 40000, k = 800: μ ≈ 101 000 is far above the sparse cutoff.
        let s = schedule(5000, 40000, 800, &cfg);
        assert_eq!(s.regime, Regime::Dense);
        assert_eq!(s.h, 10);
        assert!((s.q - (800.0f64 / 5000f64.log2()).sqrt()).abs() < 1e-9);
        assert_eq!(s.h0, 39);
        // A sparse graph where nearly every vertex is negative.
        let s = schedule(100_000, 150_000, 90_000, &cfg);
        assert_eq!(s.regime, Regime::Sparse);
        assert!(s.q >= 1.0 && s.q <= 90_000.0);
    }
}
