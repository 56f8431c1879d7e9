//! Shapley value estimators: plain and antithetic Monte Carlo permutation
//! sampling, multilinear-extension (Owen) sampling, and the deterministic
//! discrete-uniform proxies DU-Shapley and DU-Shapley++.
//!
//! Budget accounting is uniform across methods: one "term" is one
//! marginal-contribution difference, i.e. two utility evaluations. Stochastic
//! methods spend `budget_terms` terms per player; DU methods always spend one
//! term per player per grid point, i.e. `I` terms per player.
//!
//! Each (player, sample) pair draws from its own sub-stream of the master
//! seed, so outputs are bitwise identical for any degree of parallelism.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CardinalUtility, Coalition, GameSpec, PlayerId, SetUtility, ValuationVector};
use crate::kahan::Kahan;
use crate::rng::{substream, tag};

/// Estimation method selector, as exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Mc,
    McAnti,
    Owen,
    Du,
    Dupp,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Exact,
        Method::Mc,
        Method::McAnti,
        Method::Owen,
        Method::Du,
        Method::Dupp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Mc => "mc",
            Method::McAnti => "mc-anti",
            Method::Owen => "owen",
            Method::Du => "du",
            Method::Dupp => "dupp",
        }
    }

    /// True for methods whose output depends on the seed.
    pub fn is_stochastic(self) -> bool {
        matches!(self, Method::Mc | Method::McAnti | Method::Owen)
    }

    /// True for the discrete-uniform proxies, which consume a cardinal
    /// utility instead of a set utility.
    pub fn is_cardinal(self) -> bool {
        matches!(self, Method::Du | Method::Dupp)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "mc" => Ok(Method::Mc),
            "mc-anti" => Ok(Method::McAnti),
            "owen" => Ok(Method::Owen),
            "du" => Ok(Method::Du),
            "dupp" => Ok(Method::Dupp),
            other => Err(Error::param(
                "method",
                format!("unknown method {other:?} (expected exact|mc|mc-anti|owen|du|dupp)"),
            )),
        }
    }
}

/// Configuration shared by the sampling estimators. `budget_terms` is the
/// per-player term budget T; DU methods ignore it (their cost is fixed).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub method: Method,
    pub budget_terms: u64,
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(method: Method, budget_terms: u64, seed: u64) -> Self {
        EstimatorConfig {
            method,
            budget_terms,
            seed,
        }
    }
}

/// Mean dataset size over the other players, the grid spacing of the
/// discrete-uniform proxies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DuStats {
    pub mu_minus_i: f64,
}

impl DuStats {
    pub fn for_player(g: &GameSpec, player: PlayerId) -> Result<Self> {
        let players = g.player_count();
        if players < 2 {
            return Err(Error::TooFewPlayers {
                min: 2,
                got: players,
            });
        }
        g.player(player.index())?;
        Ok(DuStats {
            mu_minus_i: g.total_excluding(player) as f64 / (players - 1) as f64,
        })
    }
}

/// Marginal contribution of `player` joining the predecessors in `order`.
fn permutation_marginal(
    u: &SetUtility,
    players: usize,
    order: &[usize],
    player: usize,
) -> Result<f64> {
    let mut predecessors = Coalition::empty(players);
    for &p in order {
        if p == player {
            break;
        }
        predecessors.insert(PlayerId::new(p))?;
    }
    let without = u.eval(&predecessors)?;
    let with = u.eval(&predecessors.with(PlayerId::new(player))?)?;
    Ok(with - without)
}

/// Monte Carlo permutation sampling: for each player, average the marginal
/// contribution over `budget_terms` uniformly drawn permutations.
pub fn mc_shapley(u: &SetUtility, g: &GameSpec, cfg: &EstimatorConfig) -> Result<ValuationVector> {
    let t = cfg.budget_terms;
    if t < 1 {
        return Err(Error::InvalidBudget {
            requirement: ">= 1",
            got: t,
        });
    }
    let players = g.player_count();
    let values: Vec<f64> = (0..players)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut acc = Kahan::default();
            for s in 0..t {
                let mut rng = substream(cfg.seed, &[tag::MC, i as u64, s]);
                let mut order: Vec<usize> = (0..players).collect();
                order.shuffle(&mut rng);
                acc.add(permutation_marginal(u, players, &order, i)?);
            }
            Ok(acc.value() / t as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationVector::new(values, t, Some(cfg.seed)))
}

/// Antithetic variant: each sampled permutation is paired with its reversal,
/// which makes the paired marginal contributions negatively correlated for
/// monotone-in-size games. Requires an even budget.
pub fn mc_antithetic_shapley(
    u: &SetUtility,
    g: &GameSpec,
    cfg: &EstimatorConfig,
) -> Result<ValuationVector> {
    let t = cfg.budget_terms;
    if t < 2 || t % 2 != 0 {
        return Err(Error::InvalidBudget {
            requirement: ">= 2 and even",
            got: t,
        });
    }
    let players = g.player_count();
    let pairs = t / 2;
    let values: Vec<f64> = (0..players)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut acc = Kahan::default();
            for s in 0..pairs {
                let mut rng = substream(cfg.seed, &[tag::MC_ANTI, i as u64, s]);
                let mut order: Vec<usize> = (0..players).collect();
                order.shuffle(&mut rng);
                acc.add(permutation_marginal(u, players, &order, i)?);
                order.reverse();
                acc.add(permutation_marginal(u, players, &order, i)?);
            }
            Ok(acc.value() / t as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationVector::new(values, t, Some(cfg.seed)))
}

/// Multilinear-extension sampling: draw an inclusion probability tau
/// uniformly on [0,1], build a random coalition of the other players by
/// independent tau-coin flips, and average the marginal contribution. One
/// coalition draw per tau, so one term per sample.
pub fn owen_shapley(
    u: &SetUtility,
    g: &GameSpec,
    cfg: &EstimatorConfig,
) -> Result<ValuationVector> {
    let t = cfg.budget_terms;
    if t < 1 {
        return Err(Error::InvalidBudget {
            requirement: ">= 1",
            got: t,
        });
    }
    let players = g.player_count();
    let values: Vec<f64> = (0..players)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let pid = PlayerId::new(i);
            let mut acc = Kahan::default();
            for s in 0..t {
                let mut rng = substream(cfg.seed, &[tag::OWEN, i as u64, s]);
                let tau: f64 = rng.gen();
                let mut coalition = Coalition::empty(players);
                for j in 0..players {
                    if j != i && rng.gen::<f64>() < tau {
                        coalition.insert(PlayerId::new(j))?;
                    }
                }
                let without = u.eval(&coalition)?;
                let with = u.eval(&coalition.with(pid)?)?;
                acc.add(with - without);
            }
            Ok(acc.value() / t as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationVector::new(values, t, Some(cfg.seed)))
}

/// Grid point k * mu_{-i}, computed as (k * n_{-i}) / (I - 1) so the k = 0
/// and k = I-1 points land exactly on 0 and the other players' total.
fn du_grid_point(k: usize, pool: u64, players: usize) -> f64 {
    (k as f64 * pool as f64) / (players - 1) as f64
}

fn du_single_player(w: &CardinalUtility, n: u64) -> Result<ValuationVector> {
    let value = w.eval(n as f64)? - w.eval(0.0)?;
    Ok(ValuationVector::new(vec![value], 1, None))
}

fn du_shapley_impl<'a>(
    per_player: impl Fn(usize) -> &'a CardinalUtility + Sync,
    g: &GameSpec,
) -> Result<ValuationVector> {
    let players = g.player_count();
    if players == 1 {
        return du_single_player(per_player(0), g.sizes()[0]);
    }
    let values: Vec<f64> = (0..players)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let w = per_player(i);
            let pid = PlayerId::new(i);
            let n_i = g.size_of(pid) as f64;
            let pool = g.total_excluding(pid);
            let mut acc = Kahan::default();
            for k in 0..players {
                let grid = du_grid_point(k, pool, players);
                acc.add(w.eval(grid + n_i)? - w.eval(grid)?);
            }
            Ok(acc.value() / players as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationVector::new(values, players as u64, None))
}

fn du_shapley_pp_impl<'a>(
    per_player: impl Fn(usize) -> &'a CardinalUtility + Sync,
    g: &GameSpec,
) -> Result<ValuationVector> {
    let players = g.player_count();
    if players == 1 {
        return du_single_player(per_player(0), g.sizes()[0]);
    }
    let total = g.total();
    let values: Vec<f64> = (0..players)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let w = per_player(i);
            let pid = PlayerId::new(i);
            let n_i = g.size_of(pid) as f64;
            let pool = g.total_excluding(pid);
            let mut acc = Kahan::default();
            // k = 0 and k = I-1 cardinality layers are singletons, so their
            // contribution is computed exactly.
            acc.add(w.eval(n_i)? - w.eval(0.0)?);
            for k in 1..players.saturating_sub(1) {
                let grid = du_grid_point(k, pool, players);
                acc.add(w.eval(grid + n_i)? - w.eval(grid)?);
            }
            acc.add(w.eval(total as f64)? - w.eval(pool as f64)?);
            Ok(acc.value() / players as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationVector::new(values, players as u64, None))
}

/// DU-Shapley: replace the random aggregate size at each coalition
/// cardinality by its mean, giving a deterministic estimate from I terms per
/// player.
pub fn du_shapley(w: &CardinalUtility, g: &GameSpec) -> Result<ValuationVector> {
    du_shapley_impl(|_| w, g)
}

/// DU-Shapley with the two extreme cardinality layers (empty set and all
/// other players) evaluated exactly; the middle layers use the uniform grid.
/// For two players both layers are extreme and the result is exact.
pub fn du_shapley_pp(w: &CardinalUtility, g: &GameSpec) -> Result<ValuationVector> {
    du_shapley_pp_impl(|_| w, g)
}

/// DU-Shapley with a different cardinal utility per player, as produced by
/// the empirical subsampling proxies.
pub fn du_shapley_per_player(ws: &[CardinalUtility], g: &GameSpec) -> Result<ValuationVector> {
    if ws.len() != g.player_count() {
        return Err(Error::param("ws", "one cardinal utility per player required"));
    }
    du_shapley_impl(|i| &ws[i], g)
}

/// Per-player variant of [`du_shapley_pp`].
pub fn du_shapley_pp_per_player(ws: &[CardinalUtility], g: &GameSpec) -> Result<ValuationVector> {
    if ws.len() != g.player_count() {
        return Err(Error::param("ws", "one cardinal utility per player required"));
    }
    du_shapley_pp_impl(|i| &ws[i], g)
}

/// Permutation budget that guarantees, with probability 1 - delta, an
/// estimation error below epsilon for a utility of range r_u:
/// ceil((2 r_u^2 I / eps^2) * ln(2 I / delta)).
pub fn t_perm(epsilon: f64, delta: f64, r_u: f64, players: usize) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", "must lie in (0, 1)"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", "must lie in (0, 1)"));
    }
    if !(r_u > 0.0) {
        return Err(Error::param("r_u", "utility range must be positive"));
    }
    if players == 0 {
        return Err(Error::TooFewPlayers { min: 1, got: 0 });
    }
    let i = players as f64;
    let t = (2.0 * r_u * r_u * i / (epsilon * epsilon)) * (2.0 * i / delta).ln();
    if !t.is_finite() || t >= u64::MAX as f64 {
        return Err(Error::param("t_perm", "budget overflows u64"));
    }
    Ok(t.ceil() as u64)
}

/// Dispatch helper used by the CLI and the benchmark harness.
pub fn estimate_with_set_utility(
    u: &SetUtility,
    g: &GameSpec,
    cfg: &EstimatorConfig,
) -> Result<ValuationVector> {
    match cfg.method {
        Method::Mc => mc_shapley(u, g, cfg),
        Method::McAnti => mc_antithetic_shapley(u, g, cfg),
        Method::Owen => owen_shapley(u, g, cfg),
        other => Err(Error::param(
            "method",
            format!("{other} does not run on a set utility"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_shapley_subsets, ExactConfig};
    use crate::game::cardinal_to_set_utility;

    fn sqrt_game(sizes: &[u64]) -> (CardinalUtility, SetUtility, GameSpec) {
        let g = GameSpec::new(sizes.to_vec()).unwrap();
        let w = CardinalUtility::new(|n| n.sqrt());
        let u = cardinal_to_set_utility(&w, &g);
        (w, u, g)
    }

    fn cfg(method: Method, t: u64, seed: u64) -> EstimatorConfig {
        EstimatorConfig::new(method, t, seed)
    }

    #[test]
    fn constant_marginals_are_recovered_exactly() {
        let g = GameSpec::uniform(4, 3).unwrap();
        let u = SetUtility::new(|c| 1.75 * c.size() as f64);
        for method in [Method::Mc, Method::McAnti, Method::Owen] {
            let v = estimate_with_set_utility(&u, &g, &cfg(method, 4, 7)).unwrap();
            for x in &v.values {
                assert!((x - 1.75).abs() < 1e-12, "{method}: {x}");
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_output() {
        let (_, u, g) = sqrt_game(&[1, 2, 4]);
        let a = mc_shapley(&u, &g, &cfg(Method::Mc, 50, 99)).unwrap();
        let b = mc_shapley(&u, &g, &cfg(Method::Mc, 50, 99)).unwrap();
        assert_eq!(a, b);
        let c = mc_shapley(&u, &g, &cfg(Method::Mc, 50, 100)).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn mc_matches_exact_within_three_standard_errors() {
        let (_, u, g) = sqrt_game(&[1, 2, 4]);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        let t = 100_000;
        let est = mc_shapley(&u, &g, &cfg(Method::Mc, t, 12345)).unwrap();
        // conservative bound: marginals lie within [0, sqrt(7)]
        let se = (7.0f64 / t as f64).sqrt();
        for (a, b) in est.values.iter().zip(&exact.values) {
            assert!((a - b).abs() < 3.0 * se, "{a} vs {b}");
        }
    }

    #[test]
    fn antithetic_requires_even_budget() {
        let (_, u, g) = sqrt_game(&[1, 2]);
        assert!(matches!(
            mc_antithetic_shapley(&u, &g, &cfg(Method::McAnti, 7, 1)),
            Err(Error::InvalidBudget { .. })
        ));
    }

    #[test]
    fn antithetic_reduces_variance_on_supermodular_game() {
        let g = GameSpec::uniform(4, 1).unwrap();
        let u = SetUtility::new(|c| (c.size() * c.size()) as f64);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        let t = 20;
        let runs = 200;
        let (mut var_plain, mut var_anti) = (0.0, 0.0);
        for run in 0..runs {
            let plain = mc_shapley(&u, &g, &cfg(Method::Mc, t, run)).unwrap();
            let anti = mc_antithetic_shapley(&u, &g, &cfg(Method::McAnti, t, run)).unwrap();
            for i in 0..4 {
                var_plain += (plain.values[i] - exact.values[i]).powi(2);
                var_anti += (anti.values[i] - exact.values[i]).powi(2);
            }
        }
        assert!(
            var_anti <= var_plain,
            "antithetic {var_anti} vs plain {var_plain}"
        );
    }

    #[test]
    fn owen_is_exact_on_additive_games() {
        let g = GameSpec::new(vec![3, 5]).unwrap();
        let w = CardinalUtility::new(|n| n);
        let u = cardinal_to_set_utility(&w, &g);
        let est = owen_shapley(&u, &g, &cfg(Method::Owen, 25, 4)).unwrap();
        assert!((est.values[0] - 3.0).abs() < 1e-12);
        assert!((est.values[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn owen_mean_over_many_runs_approaches_exact() {
        let (_, u, g) = sqrt_game(&[1, 2, 4]);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        let runs = 10_000u64;
        let t = 100;
        let mut means = vec![Kahan::default(); 3];
        let mut sq = vec![Kahan::default(); 3];
        for run in 0..runs {
            let est = owen_shapley(&u, &g, &cfg(Method::Owen, t, run)).unwrap();
            for i in 0..3 {
                means[i].add(est.values[i]);
                sq[i].add(est.values[i] * est.values[i]);
            }
        }
        for i in 0..3 {
            let mean = means[i].value() / runs as f64;
            let var = (sq[i].value() / runs as f64 - mean * mean).max(0.0);
            let se = (var / runs as f64).sqrt();
            assert!(
                (mean - exact.values[i]).abs() <= 3.0 * se.max(1e-12),
                "player {i}: mean {mean} vs exact {}",
                exact.values[i]
            );
        }
    }

    #[test]
    fn du_stats_mean_excluding_player() {
        let g = GameSpec::new(vec![1, 2, 4]).unwrap();
        let stats = DuStats::for_player(&g, PlayerId::new(0)).unwrap();
        assert_eq!(stats.mu_minus_i, 3.0);
        let single = GameSpec::new(vec![5]).unwrap();
        assert!(DuStats::for_player(&single, PlayerId::new(0)).is_err());
    }

    #[test]
    fn du_single_player_is_marginal_over_empty() {
        let g = GameSpec::new(vec![5]).unwrap();
        let w = CardinalUtility::new(|n| n * n);
        let v = du_shapley(&w, &g).unwrap();
        assert_eq!(v.values, vec![25.0]);
        assert_eq!(v.budget_used, 1);
    }

    #[test]
    fn du_equal_sizes_square_game_is_exact() {
        let g = GameSpec::uniform(3, 2).unwrap();
        let w = CardinalUtility::new(|n| n * n);
        let du = du_shapley(&w, &g).unwrap();
        for v in &du.values {
            assert!((v - 12.0).abs() < 1e-12);
        }
        let u = cardinal_to_set_utility(&w, &g);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        for (a, b) in du.values.iter().zip(&exact.values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(du.budget_used, 3);
    }

    #[test]
    fn du_error_stays_within_theorem_bound_shape() {
        // heterogeneous sizes: the proxy deviates from exact but stays close
        let (w, u, g) = sqrt_game(&[1, 2, 4]);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        let du = du_shapley(&w, &g).unwrap();
        let max_gap = du
            .values
            .iter()
            .zip(&exact.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max_gap > 0.0 && max_gap < 0.1, "gap {max_gap}");
    }

    #[test]
    fn dupp_equals_du_for_equal_sizes() {
        let g = GameSpec::uniform(5, 4).unwrap();
        let w = CardinalUtility::new(|n| n.sqrt());
        let a = du_shapley(&w, &g).unwrap();
        let b = du_shapley_pp(&w, &g).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn dupp_two_players_is_exact() {
        let g = GameSpec::new(vec![3, 9]).unwrap();
        let w = CardinalUtility::new(|n| n.sqrt() + 1.0);
        let u = cardinal_to_set_utility(&w, &g);
        let un = crate::game::normalize_utility(&u, &g).unwrap();
        let exact = exact_shapley_subsets(&un, &g, &ExactConfig::default()).unwrap();
        let pp = du_shapley_pp(&w, &g).unwrap();
        for (a, b) in pp.values.iter().zip(&exact.values) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn dupp_majority_no_worse_on_exponential_sizes() {
        let g = GameSpec::new(vec![2, 4, 8, 16, 32]).unwrap();
        let w = CardinalUtility::new(|n| n / (n + 100.0));
        let u = cardinal_to_set_utility(&w, &g);
        let exact = exact_shapley_subsets(&u, &g, &ExactConfig::default()).unwrap();
        let du = du_shapley(&w, &g).unwrap();
        let pp = du_shapley_pp(&w, &g).unwrap();
        let better = (0..5)
            .filter(|&i| {
                (pp.values[i] - exact.values[i]).abs() <= (du.values[i] - exact.values[i]).abs()
            })
            .count();
        assert!(better * 2 >= 5, "DU++ no worse for only {better}/5 players");
    }

    #[test]
    fn du_budget_is_two_evals_per_term() {
        let g = GameSpec::new(vec![1, 2, 4, 8]).unwrap();
        let w = CardinalUtility::new(|n| n.sqrt());
        w.reset_eval_count();
        du_shapley(&w, &g).unwrap();
        assert_eq!(w.eval_count(), 2 * 4 * 4);
        w.reset_eval_count();
        du_shapley_pp(&w, &g).unwrap();
        assert_eq!(w.eval_count(), 2 * 4 * 4);
    }

    #[test]
    fn mc_budget_is_two_evals_per_term() {
        let (_, u, g) = sqrt_game(&[1, 2, 4]);
        u.reset_eval_count();
        mc_shapley(&u, &g, &cfg(Method::Mc, 10, 3)).unwrap();
        assert_eq!(u.eval_count(), 2 * 10 * 3);
        u.reset_eval_count();
        mc_antithetic_shapley(&u, &g, &cfg(Method::McAnti, 10, 3)).unwrap();
        assert_eq!(u.eval_count(), 2 * 10 * 3);
        u.reset_eval_count();
        owen_shapley(&u, &g, &cfg(Method::Owen, 10, 3)).unwrap();
        assert_eq!(u.eval_count(), 2 * 10 * 3);
    }

    #[test]
    fn scaling_equivariance_same_seed() {
        let (w, u, g) = sqrt_game(&[2, 5, 9]);
        let alpha = 3.5;
        let w_scaled = CardinalUtility::new(move |n| alpha * n.sqrt());
        let u_scaled = cardinal_to_set_utility(&w_scaled, &g);
        for method in [Method::Mc, Method::McAnti, Method::Owen] {
            let base = estimate_with_set_utility(&u, &g, &cfg(method, 8, 5)).unwrap();
            let scaled = estimate_with_set_utility(&u_scaled, &g, &cfg(method, 8, 5)).unwrap();
            for (a, b) in base.values.iter().zip(&scaled.values) {
                assert!((alpha * a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
        let base = du_shapley(&w, &g).unwrap();
        let scaled = du_shapley(&w_scaled, &g).unwrap();
        for (a, b) in base.values.iter().zip(&scaled.values) {
            assert!((alpha * a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn t_perm_reference_value() {
        assert_eq!(t_perm(0.1, 0.1, 1.0, 10).unwrap(), 10_597);
    }

    #[test]
    fn t_perm_grows_superlinearly_in_players() {
        let t10 = t_perm(0.1, 0.1, 1.0, 10).unwrap();
        let t20 = t_perm(0.1, 0.1, 1.0, 20).unwrap();
        assert!(t20 > 2 * t10);
    }

    #[test]
    fn t_perm_limit_is_small_for_loose_targets() {
        let t = t_perm(0.999, 0.999, 1.0, 1).unwrap();
        assert_eq!(t, 2);
    }

    #[test]
    fn t_perm_rejects_out_of_range_inputs() {
        assert!(t_perm(0.0, 0.5, 1.0, 3).is_err());
        assert!(t_perm(0.5, 1.0, 1.0, 3).is_err());
        assert!(t_perm(0.5, 0.5, 0.0, 3).is_err());
    }
}
