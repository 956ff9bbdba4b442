//! Adaptive choice of local search: relative-improvement credit, running-mean
//! quality, and an upper-confidence-bound bandit over the arms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative fitness improvement `(after - before) / |before|`.
pub fn compute_reward(f_before: f64, f_after: f64) -> Result<f64> {
    if f_before == 0.0 {
        return Err(Error::ZeroFitness);
    }
    Ok((f_after - f_before) / f_before.abs())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmStats {
    /// Mean reward received so far.
    pub quality: f64,
    pub selections: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditState {
    arms: Vec<ArmStats>,
    /// Exploration scale `C`.
    scale: f64,
}

impl BanditState {
    pub fn new(arms: usize, scale: f64) -> Result<Self> {
        if arms == 0 {
            return Err(Error::config("the bandit needs at least one arm"));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::config("bandit scaling factor must be non-negative"));
        }
        Ok(BanditState {
            arms: vec![ArmStats::default(); arms],
            scale,
        })
    }

    pub fn arms(&self) -> &[ArmStats] {
        &self.arms
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn qualities(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.quality).collect()
    }

    pub fn total_selections(&self) -> u64 {
        self.arms.iter().map(|a| a.selections).sum()
    }

    /// `q + C * sqrt(ln N / n)` for an arm that has been tried at least once.
    pub fn ucb_score(&self, arm: usize) -> f64 {
        let a = &self.arms[arm];
        let total = self.total_selections() as f64;
        a.quality + self.scale * (total.ln() / a.selections as f64).sqrt()
    }

    /// Untried arms first (lowest index); otherwise the highest UCB score,
    /// ties to the lowest index.
    pub fn select(&self) -> usize {
        if let Some(untried) = self.arms.iter().position(|a| a.selections == 0) {
            return untried;
        }
        let mut best = 0;
        let mut best_score = self.ucb_score(0);
        for arm in 1..self.arms.len() {
            let score = self.ucb_score(arm);
            if score > best_score {
                best = arm;
                best_score = score;
            }
        }
        best
    }

    /// Credits `reward` to `arm`. The count is bumped before averaging, so the
    /// quality is the exact running mean of the arm's rewards.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        let arms = self.arms.len();
        let a = self
            .arms
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })?;
        a.selections += 1;
        a.quality += (reward - a.quality) / a.selections as f64;
        Ok(())
    }
}
