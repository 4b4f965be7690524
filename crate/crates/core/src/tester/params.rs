use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamMode {
    PaperFaithful,
    DeskScale,
}

/// When the explored subgraph is checked for cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exploration {
    /// Grow the induced subgraph as vertices are first visited and stop at
    /// the first cycle. Verdicts match [`Exploration::AfterWalks`] exactly,
    /// since every intermediate subgraph is an induced subgraph of the final one.
    #[default]
    Incremental,
    /// Run all `m` walks, then build the induced subgraph and look for a cycle.
    AfterWalks,
}

/// Scale factors for the desk-scale schedule
/// `ell = ceil(beta1 * log2(n)^2 / eps)`, `m = ceil(beta2 * sqrt(n) * log2(n) / eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeskPreset {
    pub beta1: f64,
    pub beta2: f64,
    pub c: f64,
}

impl Default for DeskPreset {
    fn default() -> Self {
        Self {
            beta1: 4.0,
            beta2: 2.0,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TesterParams {
    pub eps: f64,
    /// Walk length.
    pub ell: usize,
    /// Walks per start vertex.
    pub m: usize,
    pub num_starts: usize,
    /// Reach threshold used by the analysis oracles; recorded only.
    pub alpha: f64,
    pub c: f64,
    pub mode: ParamMode,
    /// Certificates longer than this are reported with a warning.
    pub cert_len_cap: usize,
    pub exploration: Exploration,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")))
    }
}

fn ceil_usize(x: f64) -> usize {
    if x >= usize::MAX as f64 {
        usize::MAX
    } else {
        x.ceil() as usize
    }
}

/// Smallest admissible alpha for a well-connected component of size
/// `component_size`: `eps / (sqrt(|S| n) log2 n)`.
pub fn alpha_lower_bound(n: usize, eps: f64, component_size: usize) -> f64 {
    let n_f = n as f64;
    eps / ((component_size as f64 * n_f).sqrt() * n_f.log2())
}

fn default_alpha(n: usize, eps: f64) -> f64 {
    if n < 2 {
        return 0.5;
    }
    (2.0 * alpha_lower_bound(n, eps, n)).min(0.5)
}

impl TesterParams {
    /// `ell = (log2(n/eps))^6 eps^-8`, `m = c eps^-3 sqrt(n) ell log2(n)^2`,
    /// `num_starts = c/eps`, all rounded up.
    pub fn paper(n: usize, d: usize, eps: f64, c: f64) -> Result<Self> {
        check_eps(eps)?;
        if n < 2 {
            return Err(Error::invalid("paper schedule needs n >= 2"));
        }
        if d == 0 {
            return Err(Error::invalid("degree bound must be positive"));
        }
        if c < 1.0 {
            return Err(Error::invalid(format!("c must be at least 1, got {c}")));
        }
        let n_f = n as f64;
        let log_n = n_f.log2();
        let ell = ceil_usize((n_f / eps).log2().powi(6) * eps.powi(-8));
        let m = ceil_usize(c * eps.powi(-3) * n_f.sqrt() * ell as f64 * log_n * log_n);
        Ok(Self {
            eps,
            ell,
            m,
            num_starts: ceil_usize(c / eps),
            alpha: default_alpha(n, eps),
            c,
            mode: ParamMode::PaperFaithful,
            cert_len_cap: ell.saturating_mul(4),
            exploration: Exploration::default(),
        })
    }

    pub fn desk(n: usize, eps: f64, preset: DeskPreset) -> Result<Self> {
        check_eps(eps)?;
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if !(preset.beta1 > 0.0 && preset.beta2 > 0.0 && preset.c > 0.0) {
            return Err(Error::invalid("desk preset factors must be positive"));
        }
        let n_f = n as f64;
        let log_n = n_f.log2();
        let ell = ceil_usize(preset.beta1 * log_n * log_n / eps).max(1);
        let m = ceil_usize(preset.beta2 * n_f.sqrt() * log_n / eps).max(1);
        Ok(Self {
            eps,
            ell,
            m,
            num_starts: ceil_usize(preset.c / eps).max(1),
            alpha: default_alpha(n, eps),
            c: preset.c,
            mode: ParamMode::DeskScale,
            cert_len_cap: ell.saturating_mul(4),
            exploration: Exploration::default(),
        })
    }

    /// Desk-scale parameters given directly.
    pub fn explicit(eps: f64, ell: usize, m: usize, num_starts: usize) -> Result<Self> {
        check_eps(eps)?;
        if ell == 0 || m == 0 || num_starts == 0 {
            return Err(Error::invalid("ell, m and num_starts must all be at least 1"));
        }
        Ok(Self {
            eps,
            ell,
            m,
            num_starts,
            alpha: 0.5,
            c: 1.0,
            mode: ParamMode::DeskScale,
            cert_len_cap: ell.saturating_mul(4),
            exploration: Exploration::default(),
        })
    }

    pub fn with_exploration(mut self, exploration: Exploration) -> Self {
        self.exploration = exploration;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Checks `eps / (sqrt(|S| n) log2 n) < alpha < 1`.
    pub fn check_alpha(&self, n: usize, component_size: usize) -> Result<()> {
        let lo = alpha_lower_bound(n, self.eps, component_size);
        if self.alpha > lo && self.alpha < 1.0 {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "alpha = {} outside ({lo}, 1) for |S| = {component_size}",
                self.alpha
            )))
        }
    }

    /// Errors when a full run could take more than `max_steps` walk steps.
    pub fn check_step_budget(&self, max_steps: u64) -> Result<()> {
        let steps = self.num_starts as u128 * self.m as u128 * self.ell as u128;
        if steps > max_steps as u128 {
            return Err(Error::ResourceLimit(format!(
                "up to {steps} walk steps (num_starts * m * ell) exceeds budget {max_steps}"
            )));
        }
        Ok(())
    }

    /// Upper bound on explored edges per start: `d * m * ell`.
    pub fn explored_edge_bound(&self, d: usize) -> usize {
        d.saturating_mul(self.m).saturating_mul(self.ell)
    }

    /// Upper bound on oracle calls per run: `num_starts * (2 m ell + visited)`,
    /// with `visited <= m ell + 1`.
    pub fn query_bound(&self, visited: usize) -> u64 {
        let per_start = 2u128 * self.m as u128 * self.ell as u128 + visited as u128;
        (self.num_starts as u128 * per_start).min(u64::MAX as u128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_walk_length_example() {
        let p = TesterParams::paper(1 << 10, 3, 0.5, 1.0).unwrap();
        assert_eq!(p.ell, 453_519_616);
        assert_eq!(p.num_starts, 2);
        assert_eq!(p.mode, ParamMode::PaperFaithful);
        // m = 8 * 32 * ell * 100
        assert_eq!(p.m, 8 * 32 * 453_519_616 * 100);
    }

    #[test]
    fn paper_schedule_monotone_in_n() {
        let mut prev = (0, 0);
        for k in 1..30 {
            let p = TesterParams::paper(1 << k, 4, 0.25, 2.0).unwrap();
            assert!(p.ell >= prev.0 && p.m >= prev.1);
            prev = (p.ell, p.m);
        }
    }

    #[test]
    fn num_starts_is_ceil_c_over_eps() {
        assert_eq!(TesterParams::paper(100, 3, 0.3, 1.0).unwrap().num_starts, 4);
        assert_eq!(TesterParams::paper(100, 3, 0.1, 3.0).unwrap().num_starts, 30);
        let desk = TesterParams::desk(100, 0.3, DeskPreset::default()).unwrap();
        assert_eq!(desk.num_starts, 4);
    }

    #[test]
    fn desk_schedule_values() {
        let p = TesterParams::desk(1 << 10, 0.1, DeskPreset::default()).unwrap();
        assert_eq!(p.ell, 4000);
        assert_eq!(p.m, 6400);
        assert_eq!(p.num_starts, 10);
        assert_eq!(p.cert_len_cap, 16000);
        let tiny = TesterParams::desk(1, 0.5, DeskPreset::default()).unwrap();
        assert_eq!((tiny.ell, tiny.m), (1, 1));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(TesterParams::paper(1, 3, 0.5, 1.0).is_err());
        assert!(TesterParams::paper(10, 3, 1.0, 1.0).is_err());
        assert!(TesterParams::paper(10, 3, 0.5, 0.5).is_err());
        assert!(TesterParams::explicit(0.1, 0, 1, 1).is_err());
        assert!(TesterParams::desk(10, 0.0, DeskPreset::default()).is_err());
    }

    #[test]
    fn step_budget() {
        let p = TesterParams::paper(1 << 10, 3, 0.5, 1.0).unwrap();
        assert!(p.check_step_budget(1_000_000_000).unwrap_err().is_resource_limit());
        let q = TesterParams::explicit(0.5, 10, 10, 2).unwrap();
        assert!(q.check_step_budget(200).is_ok());
        assert!(q.check_step_budget(199).is_err());
    }

    #[test]
    fn alpha_window() {
        let p = TesterParams::paper(1024, 3, 0.5, 1.0).unwrap();
        assert!(p.check_alpha(1024, 1024).is_ok());
        assert!(p.clone().with_alpha(1.0).check_alpha(1024, 1024).is_err());
        assert!(p.with_alpha(1e-9).check_alpha(1024, 16).is_err());
    }
}
