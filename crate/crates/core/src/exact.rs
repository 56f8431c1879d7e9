//! Ground-truth Shapley values by full enumeration, in a subset form and a
//! permutation form, plus axiom-checking helpers.
//!
//! The two forms are algebraically equivalent but implemented independently;
//! tests use them as oracles for each other. Enumeration is partitioned into
//! a fixed number of chunks reduced in chunk order, so results are bitwise
//! stable for any thread count (changing the partition count itself may move
//! the last ulp).

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Coalition, GameSpec, SetUtility, ValuationVector};
use crate::kahan::Kahan;

/// Enumeration form selector and player-count guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    pub form: ExactForm,
    pub max_players_subsets: usize,
    pub max_players_permutations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactForm {
    Subsets,
    Permutations,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            form: ExactForm::Subsets,
            max_players_subsets: 25,
            max_players_permutations: 10,
        }
    }
}

// Masks are u64 and binomial weights must stay exact in 64-bit integers.
const HARD_CAP_SUBSETS: usize = 60;
const HARD_CAP_PERMUTATIONS: usize = 20;

/// Fixed partition count for parallel subset enumeration.
const ENUM_CHUNKS: u64 = 64;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn exact_shapley(u: &SetUtility, g: &GameSpec, cfg: &ExactConfig) -> Result<ValuationVector> {
    match cfg.form {
        ExactForm::Subsets => exact_shapley_subsets(u, g, cfg),
        ExactForm::Permutations => exact_shapley_permutations(u, g, cfg),
    }
}

/// Shapley values from the subset decomposition. Every subset of the player
/// set is visited and evaluated exactly once; the marginal-contribution sum
/// is recovered by weighting each subset once as `S` and once as `S + {i}`.
pub fn exact_shapley_subsets(
    u: &SetUtility,
    g: &GameSpec,
    cfg: &ExactConfig,
) -> Result<ValuationVector> {
    let players = g.player_count();
    let cap = cfg.max_players_subsets.min(HARD_CAP_SUBSETS);
    if players > cap {
        return Err(Error::PlayerCapExceeded {
            what: "exact subset enumeration",
            max: cap,
            got: players,
        });
    }

    // 1 / C(I-1, k) for k = 0..I-1, from exact integer binomials.
    let inv_binom: Vec<f64> = (0..players)
        .map(|k| 1.0 / binomial(players - 1, k) as f64)
        .collect();

    let total: u64 = 1u64 << players;
    let chunk_len = total.div_ceil(ENUM_CHUNKS);

    let chunk_sums: Vec<Vec<Kahan>> = (0..ENUM_CHUNKS)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<Kahan>> {
            let lo = chunk * chunk_len;
            let hi = ((chunk + 1) * chunk_len).min(total);
            let mut acc = vec![Kahan::default(); players];
            for mask in lo..hi {
                let value = u.eval(&Coalition::from_mask(players, mask))?;
                let size = mask.count_ones() as usize;
                for (i, slot) in acc.iter_mut().enumerate() {
                    if mask & (1u64 << i) != 0 {
                        slot.add(value * inv_binom[size - 1]);
                    } else {
                        slot.add(-value * inv_binom[size]);
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    // Reduce in chunk order: deterministic for any scheduling.
    let mut values = vec![0.0; players];
    for (i, value) in values.iter_mut().enumerate() {
        let mut acc = Kahan::default();
        for chunk in &chunk_sums {
            acc.add(chunk[i].value());
        }
        *value = acc.value() / players as f64;
    }

    Ok(ValuationVector::new(values, total / 2, None))
}

/// Shapley values as the average marginal contribution over all I!
/// permutations, walking each permutation's prefixes incrementally.
pub fn exact_shapley_permutations(
    u: &SetUtility,
    g: &GameSpec,
    cfg: &ExactConfig,
) -> Result<ValuationVector> {
    let players = g.player_count();
    let cap = cfg.max_players_permutations.min(HARD_CAP_PERMUTATIONS);
    if players > cap {
        return Err(Error::PlayerCapExceeded {
            what: "exact permutation enumeration",
            max: cap,
            got: players,
        });
    }

    // Partition by the leading player: I chunks, reduced in order.
    let chunk_sums: Vec<Vec<Kahan>> = (0..players)
        .into_par_iter()
        .map(|first| -> Result<Vec<Kahan>> {
            let mut acc = vec![Kahan::default(); players];
            let rest: Vec<usize> = (0..players).filter(|&p| p != first).collect();
            let tail_len = rest.len();
            for tail in rest.into_iter().permutations(tail_len) {
                let mut coalition = Coalition::empty(players);
                let mut previous = u.eval(&coalition)?;
                for p in std::iter::once(first).chain(tail) {
                    coalition.insert(g.player(p)?)?;
                    let current = u.eval(&coalition)?;
                    acc[p].add(current - previous);
                    previous = current;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let count = factorial(players) as f64;
    let mut values = vec![0.0; players];
    for (i, value) in values.iter_mut().enumerate() {
        let mut acc = Kahan::default();
        for chunk in &chunk_sums {
            acc.add(chunk[i].value());
        }
        *value = acc.value() / count;
    }

    Ok(ValuationVector::new(values, factorial(players), None))
}

/// Outcome of a single axiom check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub worst_residual: f64,
}

impl AxiomCheck {
    fn from_residual(residual: f64, tol: f64) -> Self {
        AxiomCheck {
            passed: residual <= tol,
            worst_residual: residual,
        }
    }
}

/// Efficiency, dummy and symmetry checks for a computed valuation. Dummy
/// players and symmetric pairs are detected by enumerating all relevant
/// subsets, which gates the check at 15 players; it is a test-time tool.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub efficiency: AxiomCheck,
    pub dummy_players: Vec<usize>,
    pub dummy: AxiomCheck,
    pub symmetric_pairs: Vec<(usize, usize)>,
    pub symmetry: AxiomCheck,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.efficiency.passed && self.dummy.passed && self.symmetry.passed
    }
}

const AXIOM_CHECK_CAP: usize = 15;

/// Enumerate subsets of `[0, players) \ excluded` as coalitions.
fn subsets_excluding(players: usize, excluded: &[usize]) -> Vec<Coalition> {
    let free: Vec<usize> = (0..players).filter(|p| !excluded.contains(p)).collect();
    let mut out = Vec::with_capacity(1usize << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut c = Coalition::empty(players);
        for (bit, &p) in free.iter().enumerate() {
            if mask & (1u64 << bit) != 0 {
                c.insert(crate::game::PlayerId::new(p)).expect("in range");
            }
        }
        out.push(c);
    }
    out
}

pub fn check_axioms(
    u: &SetUtility,
    g: &GameSpec,
    phi: &ValuationVector,
    tol: f64,
) -> Result<AxiomReport> {
    let players = g.player_count();
    if players > AXIOM_CHECK_CAP {
        return Err(Error::PlayerCapExceeded {
            what: "axiom checking",
            max: AXIOM_CHECK_CAP,
            got: players,
        });
    }
    if phi.player_count() != players {
        return Err(Error::param("phi", "valuation length does not match game"));
    }

    let grand = u.eval(&Coalition::grand(players))?;
    let efficiency = AxiomCheck::from_residual((phi.total() - grand).abs(), tol);

    let mut dummy_players = Vec::new();
    let mut dummy_residual: f64 = 0.0;
    for i in 0..players {
        let pid = g.player(i)?;
        let mut max_marginal: f64 = 0.0;
        for s in subsets_excluding(players, &[i]) {
            let with = u.eval(&s.with(pid)?)?;
            let without = u.eval(&s)?;
            max_marginal = max_marginal.max((with - without).abs());
        }
        if max_marginal <= tol {
            dummy_players.push(i);
            dummy_residual = dummy_residual.max(phi.values[i].abs());
        }
    }
    let dummy = AxiomCheck::from_residual(dummy_residual, tol);

    let mut symmetric_pairs = Vec::new();
    let mut symmetry_residual: f64 = 0.0;
    for i in 0..players {
        for j in (i + 1)..players {
            let pi = g.player(i)?;
            let pj = g.player(j)?;
            let mut max_gap: f64 = 0.0;
            for s in subsets_excluding(players, &[i, j]) {
                let with_i = u.eval(&s.with(pi)?)?;
                let with_j = u.eval(&s.with(pj)?)?;
                max_gap = max_gap.max((with_i - with_j).abs());
            }
            if max_gap <= tol {
                symmetric_pairs.push((i, j));
                symmetry_residual = symmetry_residual.max((phi.values[i] - phi.values[j]).abs());
            }
        }
    }
    let symmetry = AxiomCheck::from_residual(symmetry_residual, tol);

    Ok(AxiomReport {
        efficiency,
        dummy_players,
        dummy,
        symmetric_pairs,
        symmetry,
    })
}

/// Linearity check: Shapley values of `u1 + u2` against the sum of the
/// per-game values, all computed with the subset form.
pub fn check_linearity(
    u1: &SetUtility,
    u2: &SetUtility,
    g: &GameSpec,
    cfg: &ExactConfig,
    tol: f64,
) -> Result<AxiomCheck> {
    let (a, b) = (u1.clone(), u2.clone());
    let combined = SetUtility::new_fallible(move |c| Ok(a.eval(c)? + b.eval(c)?));
    let phi_sum = exact_shapley_subsets(&combined, g, cfg)?;
    let phi_1 = exact_shapley_subsets(u1, g, cfg)?;
    let phi_2 = exact_shapley_subsets(u2, g, cfg)?;
    let residual = phi_sum
        .values
        .iter()
        .zip(phi_1.values.iter().zip(phi_2.values.iter()))
        .map(|(s, (a, b))| (s - a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(AxiomCheck::from_residual(residual, tol))
}
