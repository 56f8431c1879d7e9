//! Executable error analyses: the DU-Shapley bias bound, the fixed-budget
//! Monte Carlo error, and numerical estimation of the curvature constant rho
//! relating n^2 |w''(n)| to |w(n)|.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{CardinalUtility, GameSpec, PlayerId};

/// Moments of the other players' dataset sizes, the quantities the bias
/// bound is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SizeStats {
    pub mu_minus_i: f64,
    pub sigma2_minus_i: f64,
    pub r_minus_i: f64,
    pub n_max_minus_i: u64,
    pub n_excl_i: u64,
}

/// Bias bound and Monte Carlo error for one game instance.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub du_bounds: Vec<f64>,
    pub du_bound_mean: f64,
    pub mc_error: f64,
    pub rho: f64,
    /// True when the player-averaged bias bound sits below the Monte Carlo
    /// error at iso-budget.
    pub crossing: bool,
}

pub fn size_stats(g: &GameSpec, player: PlayerId) -> Result<SizeStats> {
    let players = g.player_count();
    if players < 2 {
        return Err(Error::TooFewPlayers {
            min: 2,
            got: players,
        });
    }
    g.player(player.index())?;
    let others: Vec<u64> = g
        .players()
        .filter(|p| *p != player)
        .map(|p| g.size_of(p))
        .collect();
    let count = others.len() as f64;
    let mu = others.iter().map(|&n| n as f64).sum::<f64>() / count;
    let sigma2 = others
        .iter()
        .map(|&n| (n as f64 - mu).powi(2))
        .sum::<f64>()
        / count;
    let r = others
        .iter()
        .map(|&n| (n as f64 - mu).abs())
        .fold(0.0f64, f64::max);
    let n_max = *others.iter().max().expect("at least one other player");
    Ok(SizeStats {
        mu_minus_i: mu,
        sigma2_minus_i: sigma2,
        r_minus_i: r,
        n_max_minus_i: n_max,
        n_excl_i: others.iter().sum(),
    })
}

/// Largest n^2 |w''(n)| / |w(n)| over the grid, with w'' taken as a central
/// finite difference at relative step 1e-3 (clamped below at 1e-3 absolute).
/// Grid points where w vanishes are skipped; it is an error if all are.
pub fn estimate_rho(w: &CardinalUtility, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::param("grid", "at least one point required"));
    }
    let mut best: Option<f64> = None;
    for &n in grid {
        if !(n > 0.0) {
            return Err(Error::param("grid", format!("points must be > 0, got {n}")));
        }
        let h = (1e-3 * n).max(1e-3);
        if n - h <= 0.0 {
            return Err(Error::param(
                "grid",
                format!("point {n} too close to zero for step {h}"),
            ));
        }
        let value = w.eval(n)?;
        if value == 0.0 || !value.is_normal() {
            continue;
        }
        let second = (w.eval(n + h)? - 2.0 * value + w.eval(n - h)?) / (h * h);
        let ratio = n * n * second.abs() / value.abs();
        best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
    }
    best.ok_or_else(|| Error::param("grid", "w vanished on every grid point"))
}

/// Bias bound for DU-Shapley at one player:
/// rho |w(n_{-i})| / ((I-1) mu^2) * (9 sigma^2 (1 + ln(I-1)) + 2 R^2 n_max).
pub fn du_bias_bound(
    w: &CardinalUtility,
    g: &GameSpec,
    player: PlayerId,
    rho: f64,
) -> Result<f64> {
    if rho < 0.0 {
        return Err(Error::param("rho", "curvature constant must be >= 0"));
    }
    let stats = size_stats(g, player)?;
    if stats.mu_minus_i == 0.0 {
        return Err(Error::param(
            "sizes",
            "all other players hold zero data points; bound degenerates",
        ));
    }
    let players = g.player_count() as f64;
    let w_pool = w.eval(stats.n_excl_i as f64)?.abs();
    let spread = 9.0 * stats.sigma2_minus_i * (1.0 + (players - 1.0).ln())
        + 2.0 * stats.r_minus_i * stats.r_minus_i * stats.n_max_minus_i as f64;
    Ok(rho * w_pool / ((players - 1.0) * stats.mu_minus_i * stats.mu_minus_i) * spread)
}

/// Monte Carlo error at a per-player budget of I terms:
/// 2 w(n_I)^2 ln(2 I / delta).
pub fn mc_error_at_budget(w_grand: f64, players: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", "must lie in (0, 1)"));
    }
    if players == 0 {
        return Err(Error::TooFewPlayers { min: 1, got: 0 });
    }
    Ok(2.0 * w_grand * w_grand * (2.0 * players as f64 / delta).ln())
}

/// Per-player bounds plus the iso-budget Monte Carlo error for one instance.
pub fn bound_report(
    w: &CardinalUtility,
    g: &GameSpec,
    delta: f64,
    rho: f64,
) -> Result<BoundReport> {
    let du_bounds: Vec<f64> = g
        .players()
        .map(|p| du_bias_bound(w, g, p, rho))
        .collect::<Result<Vec<_>>>()?;
    let du_bound_mean = du_bounds.iter().sum::<f64>() / du_bounds.len() as f64;
    let w_grand = w.eval(g.total() as f64)?;
    let mc_error = mc_error_at_budget(w_grand, g.player_count(), delta)?;
    Ok(BoundReport {
        crossing: du_bound_mean < mc_error,
        du_bounds,
        du_bound_mean,
        mc_error,
        rho,
    })
}

/// Logarithmically spaced grid on [lo, hi], endpoints included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && points >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}
