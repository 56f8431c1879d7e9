//! Players, coalitions, dataset sizes and the two utility contracts.
//!
//! A game is described by a [`GameSpec`] (one dataset size per player).
//! Utilities come in two flavours: [`SetUtility`] scores coalitions directly,
//! while [`CardinalUtility`] scores an aggregate dataset size on the real
//! line. [`cardinal_to_set_utility`] links the two.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Aggregate sizes stay below 2^53 so sums remain exact in f64 arithmetic.
pub const MAX_TOTAL_SIZE: u64 = 1 << 53;

/// Index of a player inside a [`GameSpec`], always `< player_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlayerId(usize);

impl PlayerId {
    /// Caller is responsible for keeping the index inside the game it is
    /// used with; all operations re-validate against their capacity.
    pub fn new(index: usize) -> Self {
        PlayerId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for PlayerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Player count plus per-player dataset sizes; the combinatorial skeleton of
/// every game in this crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    sizes: Vec<u64>,
}

impl GameSpec {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::TooFewPlayers { min: 1, got: 0 });
        }
        let total: u64 = sizes.iter().try_fold(0u64, |acc, &s| {
            acc.checked_add(s)
                .ok_or_else(|| Error::param("sizes", "aggregate size overflows u64"))
        })?;
        if total > MAX_TOTAL_SIZE {
            return Err(Error::param(
                "sizes",
                format!("aggregate size {total} exceeds 2^53"),
            ));
        }
        Ok(GameSpec { sizes })
    }

    /// Game where every player holds `size` data points.
    pub fn uniform(players: usize, size: u64) -> Result<Self> {
        GameSpec::new(vec![size; players])
    }

    pub fn player_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn player(&self, index: usize) -> Result<PlayerId> {
        if index < self.sizes.len() {
            Ok(PlayerId(index))
        } else {
            Err(Error::PlayerOutOfRange {
                index,
                players: self.sizes.len(),
            })
        }
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> + '_ {
        (0..self.sizes.len()).map(PlayerId)
    }

    pub fn size_of(&self, player: PlayerId) -> u64 {
        self.sizes[player.0]
    }

    /// n_I: total number of data points across all players.
    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Total size with one player removed.
    pub fn total_excluding(&self, player: PlayerId) -> u64 {
        self.total() - self.sizes[player.0]
    }

    /// Parse the plain text format: one non-negative integer per line.
    /// Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut sizes = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let n: u64 = line
                .parse()
                .map_err(|_| Error::param("sizes", format!("not an integer: {line:?}")))?;
            sizes.push(n);
        }
        GameSpec::new(sizes)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sizes {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the inline CLI form, e.g. `1,2,4`.
    pub fn from_comma_list(list: &str) -> Result<Self> {
        let sizes = list
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::param("sizes", format!("not an integer: {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GameSpec::new(sizes)
    }
}

const WORD_BITS: usize = 64;

/// A subset of players, stored as a bitset over player indices. Capacity is
/// fixed at construction and must match the game the coalition is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coalition {
    capacity: usize,
    words: Vec<u64>,
}

impl Coalition {
    pub fn empty(capacity: usize) -> Self {
        let words = vec![0u64; capacity.div_ceil(WORD_BITS).max(1)];
        Coalition { capacity, words }
    }

    /// The full player set `[0, capacity)`.
    pub fn grand(capacity: usize) -> Self {
        Coalition::empty(capacity).complement()
    }

    pub fn from_members(capacity: usize, members: &[usize]) -> Result<Self> {
        let mut c = Coalition::empty(capacity);
        for &m in members {
            c.insert(PlayerId(m))?;
        }
        Ok(c)
    }

    /// Fast path used by the exact enumerators; requires `capacity <= 64`.
    pub(crate) fn from_mask(capacity: usize, mask: u64) -> Self {
        debug_assert!(capacity <= WORD_BITS);
        Coalition {
            capacity,
            words: vec![mask],
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    fn check(&self, player: PlayerId) -> Result<(usize, u64)> {
        if player.0 >= self.capacity {
            return Err(Error::PlayerOutOfRange {
                index: player.0,
                players: self.capacity,
            });
        }
        Ok((player.0 / WORD_BITS, 1u64 << (player.0 % WORD_BITS)))
    }

    pub fn insert(&mut self, player: PlayerId) -> Result<()> {
        let (word, bit) = self.check(player)?;
        self.words[word] |= bit;
        Ok(())
    }

    pub fn remove(&mut self, player: PlayerId) -> Result<()> {
        let (word, bit) = self.check(player)?;
        self.words[word] &= !bit;
        Ok(())
    }

    pub fn contains(&self, player: PlayerId) -> Result<bool> {
        let (word, bit) = self.check(player)?;
        Ok(self.words[word] & bit != 0)
    }

    /// Copy with one extra member.
    pub fn with(&self, player: PlayerId) -> Result<Self> {
        let mut c = self.clone();
        c.insert(player)?;
        Ok(c)
    }

    /// Number of members (popcount).
    pub fn size(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Complement relative to `[0, capacity)`.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.capacity % WORD_BITS;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        if self.capacity == 0 {
            words.iter_mut().for_each(|w| *w = 0);
        }
        Coalition {
            capacity: self.capacity,
            words,
        }
    }

    pub fn members(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(PlayerId(wi * WORD_BITS + b))
                }
            })
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

/// n_S: total data points held by a coalition.
pub fn aggregate_size(coalition: &Coalition, game: &GameSpec) -> Result<u64> {
    if coalition.capacity() != game.player_count() {
        return Err(Error::CapacityMismatch {
            coalition: coalition.capacity(),
            players: game.player_count(),
        });
    }
    Ok(coalition.members().map(|p| game.size_of(p)).sum())
}

type SetFn = dyn Fn(&Coalition) -> Result<f64> + Send + Sync;
type CardinalFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// Utility over coalitions, `u : 2^I -> R`. Evaluations are counted so the
/// budget discipline of the estimator comparisons can be asserted. Clones
/// share both the function and the counter.
#[derive(Clone)]
pub struct SetUtility {
    f: Arc<SetFn>,
    evals: Arc<AtomicU64>,
}

impl SetUtility {
    pub fn new(f: impl Fn(&Coalition) -> f64 + Send + Sync + 'static) -> Self {
        Self::new_fallible(move |c| Ok(f(c)))
    }

    pub fn new_fallible(f: impl Fn(&Coalition) -> Result<f64> + Send + Sync + 'static) -> Self {
        SetUtility {
            f: Arc::new(f),
            evals: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Evaluate the utility. Non-finite results are reported as errors rather
    /// than propagated into downstream statistics.
    pub fn eval(&self, coalition: &Coalition) -> Result<f64> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let value = (self.f)(coalition)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteUtility {
                value,
                context: format!("coalition of size {}", coalition.size()),
            })
        }
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_eval_count(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }

    fn raw(&self) -> Arc<SetFn> {
        Arc::clone(&self.f)
    }
}

/// Utility over an aggregate dataset size, `w : R+ -> R`. Defined for every
/// real `n >= 0`; fractional arguments arise from the discrete uniform grid.
#[derive(Clone)]
pub struct CardinalUtility {
    f: Arc<CardinalFn>,
    evals: Arc<AtomicU64>,
}

impl CardinalUtility {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new_fallible(move |n| Ok(f(n)))
    }

    pub fn new_fallible(f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        CardinalUtility {
            f: Arc::new(f),
            evals: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn eval(&self, n: f64) -> Result<f64> {
        if !(n >= 0.0) {
            return Err(Error::param("n", format!("size must be >= 0, got {n}")));
        }
        self.evals.fetch_add(1, Ordering::Relaxed);
        let value = (self.f)(n)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteUtility {
                value,
                context: format!("aggregate size {n}"),
            })
        }
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_eval_count(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }
}

/// Lift a cardinal utility to coalitions: `u(S) = w(n_S)`. Evaluations go
/// through `w`, so its counter advances on every coalition query.
pub fn cardinal_to_set_utility(w: &CardinalUtility, game: &GameSpec) -> SetUtility {
    let w = w.clone();
    let game = game.clone();
    SetUtility::new_fallible(move |coalition| {
        let n = aggregate_size(coalition, &game)?;
        w.eval(n as f64)
    })
}

/// Shift a utility so the empty coalition scores zero. Shapley values are
/// unaffected (constants cancel in marginal contributions); the offset only
/// pins the convention u(empty) = 0. The returned utility carries a fresh
/// evaluation counter.
pub fn normalize_utility(u: &SetUtility, game: &GameSpec) -> Result<SetUtility> {
    let raw = u.raw();
    let offset = raw(&Coalition::empty(game.player_count()))?;
    if !offset.is_finite() {
        return Err(Error::NonFiniteUtility {
            value: offset,
            context: "empty coalition".to_string(),
        });
    }
    Ok(SetUtility::new_fallible(move |c| raw(c).map(|v| v - offset)))
}

/// One value per player, plus how the numbers were obtained: the per-player
/// term budget actually spent and the seed for stochastic methods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValuationVector {
    pub values: Vec<f64>,
    /// Marginal-contribution terms evaluated per player.
    pub budget_used: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ValuationVector {
    pub fn new(values: Vec<f64>, budget_used: u64, seed: Option<u64>) -> Self {
        ValuationVector {
            values,
            budget_used,
            seed,
        }
    }

    pub fn player_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, player: PlayerId) -> f64 {
        self.values[player.index()]
    }

    /// Sum of all per-player values (the efficiency axiom compares this
    /// against the grand-coalition utility).
    pub fn total(&self) -> f64 {
        crate::kahan::kahan_sum(self.values.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_w() -> CardinalUtility {
        CardinalUtility::new(|n| n.sqrt())
    }

    #[test]
    fn coalition_insert_contains() {
        let mut c = Coalition::empty(3);
        c.insert(PlayerId(2)).unwrap();
        assert!(c.contains(PlayerId(2)).unwrap());
        assert!(!c.contains(PlayerId(0)).unwrap());
        assert_eq!(c.size(), 1);
        c.remove(PlayerId(2)).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn coalition_complement_of_empty_is_grand() {
        let c = Coalition::empty(3).complement();
        let members: Vec<usize> = c.members().map(|p| p.index()).collect();
        assert_eq!(members, vec![0, 1, 2]);
        assert_eq!(c, Coalition::grand(3));
    }

    #[test]
    fn coalition_size_counts_members() {
        let c = Coalition::from_members(3, &[0, 2]).unwrap();
        assert_eq!(c.size(), 2);
    }

    #[test]
    fn coalition_rejects_out_of_range() {
        let mut c = Coalition::empty(3);
        assert!(c.insert(PlayerId(3)).is_err());
        assert!(c.contains(PlayerId(7)).is_err());
    }

    #[test]
    fn coalition_beyond_64_players() {
        let mut c = Coalition::empty(130);
        c.insert(PlayerId(129)).unwrap();
        c.insert(PlayerId(64)).unwrap();
        assert_eq!(c.size(), 2);
        assert_eq!(c.complement().size(), 128);
        let members: Vec<usize> = c.members().map(|p| p.index()).collect();
        assert_eq!(members, vec![64, 129]);
    }

    #[test]
    fn aggregate_size_examples() {
        let g = GameSpec::new(vec![1, 2, 4]).unwrap();
        let c = Coalition::from_members(3, &[0, 2]).unwrap();
        assert_eq!(aggregate_size(&c, &g).unwrap(), 5);
        assert_eq!(aggregate_size(&Coalition::empty(3), &g).unwrap(), 0);

        let g = GameSpec::new(vec![10, 10, 10]).unwrap();
        assert_eq!(aggregate_size(&Coalition::grand(3), &g).unwrap(), 30);
    }

    #[test]
    fn aggregate_size_rejects_capacity_mismatch() {
        let g = GameSpec::new(vec![1, 2, 4]).unwrap();
        assert!(aggregate_size(&Coalition::empty(4), &g).is_err());
    }

    #[test]
    fn cardinal_to_set_squares_aggregate() {
        let g = GameSpec::new(vec![1, 2]).unwrap();
        let w = CardinalUtility::new(|n| n * n);
        let u = cardinal_to_set_utility(&w, &g);
        assert_eq!(u.eval(&Coalition::grand(2)).unwrap(), 9.0);
        assert_eq!(u.eval(&Coalition::empty(2)).unwrap(), 0.0);
        assert_eq!(w.eval_count(), 2);
    }

    #[test]
    fn cardinal_to_set_sqrt_singleton() {
        let g = GameSpec::new(vec![4]).unwrap();
        let u = cardinal_to_set_utility(&sqrt_w(), &g);
        assert_eq!(u.eval(&Coalition::grand(1)).unwrap(), 2.0);
    }

    #[test]
    fn normalize_zeroes_the_empty_coalition() {
        let g = GameSpec::new(vec![1, 2]).unwrap();
        let w = CardinalUtility::new(|n| n - 5.0);
        let u = cardinal_to_set_utility(&w, &g);
        let un = normalize_utility(&u, &g).unwrap();
        assert_eq!(un.eval(&Coalition::empty(2)).unwrap(), 0.0);
        assert_eq!(un.eval(&Coalition::grand(2)).unwrap(), 3.0);
    }

    #[test]
    fn normalize_constant_utility_is_zero() {
        let g = GameSpec::new(vec![1, 1, 1]).unwrap();
        let u = SetUtility::new(|_| 7.5);
        let un = normalize_utility(&u, &g).unwrap();
        assert_eq!(un.eval(&Coalition::from_members(3, &[1]).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_utility_is_an_error() {
        let u = SetUtility::new(|_| f64::NAN);
        assert!(matches!(
            u.eval(&Coalition::empty(2)),
            Err(Error::NonFiniteUtility { .. })
        ));
        let w = CardinalUtility::new(|_| f64::INFINITY);
        assert!(w.eval(1.0).is_err());
    }

    #[test]
    fn eval_counter_advances_and_resets() {
        let u = SetUtility::new(|c| c.size() as f64);
        let c = Coalition::empty(2);
        u.eval(&c).unwrap();
        u.eval(&c).unwrap();
        assert_eq!(u.eval_count(), 2);
        let shared = u.clone();
        shared.eval(&c).unwrap();
        assert_eq!(u.eval_count(), 3);
        u.reset_eval_count();
        assert_eq!(u.eval_count(), 0);
    }

    #[test]
    fn game_spec_text_round_trip() {
        let g = GameSpec::new(vec![3, 0, 12]).unwrap();
        assert_eq!(GameSpec::from_text(&g.to_text()).unwrap(), g);
        assert_eq!(GameSpec::from_comma_list("3, 0,12").unwrap(), g);
        assert!(GameSpec::from_comma_list("3,x").is_err());
        assert!(GameSpec::new(vec![]).is_err());
    }

    #[test]
    fn game_spec_totals() {
        let g = GameSpec::new(vec![1, 2, 4]).unwrap();
        assert_eq!(g.total(), 7);
        assert_eq!(g.total_excluding(PlayerId(1)), 5);
        assert!(g.player(3).is_err());
    }

    #[test]
    fn valuation_total_sums_values() {
        let v = ValuationVector::new(vec![0.5, 1.5], 4, Some(9));
        assert_eq!(v.total(), 2.0);
        assert_eq!(v.get(PlayerId(1)), 1.5);
    }
}
