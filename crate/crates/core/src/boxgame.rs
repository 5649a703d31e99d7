//! The one-player box game that bounds Breaker degrees in the L/R analysis.
//!
//! A turn: optional losses of terms that are large relative to the number of
//! remaining terms, up to 4β added to each of the β largest terms, up to 4β
//! spread over the others, then the deletion of one of the β+1 largest terms
//! and optionally one more term.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::strategy::StrategyParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermStatus {
    Active,
    Lost,
    Deleted,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoxError {
    #[error("no active terms are left")]
    Exhausted,
    #[error("term {0} does not exist")]
    NoSuchTerm(usize),
    #[error("term {0} is not active")]
    NotActive(usize),
    #[error("loss of term {index}: value {value} is below α times the {remaining} remaining terms")]
    LossIneligible {
        index: usize,
        value: u64,
        remaining: usize,
    },
    #[error("{given} head increments for only {allowed} head terms")]
    TooManyHeadIncrements { given: usize, allowed: usize },
    #[error("head increment {amount} exceeds the budget of {budget}")]
    HeadBudget { amount: u64, budget: u64 },
    #[error("term {0} is among the β largest and cannot take a tail increment")]
    TailOnHead(usize),
    #[error("tail increments total {total}, over the budget of {budget}")]
    TailBudget { total: u64, budget: u64 },
    #[error("primary deletion of term {index} at rank {rank}, outside the largest {allowed}")]
    PrimaryRank {
        index: usize,
        rank: usize,
        allowed: usize,
    },
    #[error("a primary deletion is required while terms remain")]
    MissingPrimary,
}

/// The sequence, indexed by original position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxState {
    beta: u32,
    alpha: Ratio<u64>,
    values: Vec<u64>,
    status: Vec<TermStatus>,
    /// Active terms, largest first, ties by index.
    order: BTreeSet<(Reverse<u64>, usize)>,
    turn: u64,
}

/// One BREAKER turn. Head increments are given by rank, everything else by
/// term index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxMove {
    pub losses: Vec<usize>,
    pub head_increments: Vec<u64>,
    pub tail_increments: Vec<(usize, u64)>,
    pub primary: Option<usize>,
    pub secondary: Option<usize>,
}

impl BoxState {
    pub fn zeros(n: usize, beta: u32) -> BoxState {
        BoxState::from_values(vec![0; n], beta)
    }

    pub fn from_values(values: Vec<u64>, beta: u32) -> BoxState {
        assert!(beta >= 1, "bias must be positive");
        let order = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (Reverse(v), i))
            .collect();
        BoxState {
            beta,
            alpha: StrategyParams::new(beta).alpha,
            status: vec![TermStatus::Active; values.len()],
            values,
            order,
            turn: 0,
        }
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn alpha(&self) -> Ratio<u64> {
        self.alpha
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, index: usize) -> u64 {
        self.values[index]
    }

    pub fn status(&self, index: usize) -> TermStatus {
        self.status[index]
    }

    pub fn active_count(&self) -> usize {
        self.order.len()
    }

    pub fn count(&self, status: TermStatus) -> usize {
        self.status.iter().filter(|&&s| s == status).count()
    }

    /// Active term indices, largest value first.
    pub fn ranked(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().map(|&(_, i)| i)
    }

    /// Active values in non-increasing order.
    pub fn sorted_values(&self) -> Vec<u64> {
        self.order.iter().map(|&(Reverse(v), _)| v).collect()
    }

    /// Index of the active term at 1-based `rank`.
    pub fn at_rank(&self, rank: usize) -> Option<usize> {
        rank.checked_sub(1).and_then(|r| self.ranked().nth(r))
    }

    pub fn rank_of(&self, index: usize) -> Option<usize> {
        if self.status.get(index) != Some(&TermStatus::Active) {
            return None;
        }
        let key = (Reverse(self.values[index]), index);
        Some(self.order.range(..key).count() + 1)
    }

    /// Largest value outside the β largest, 0 when there is none.
    pub fn max_tail(&self) -> u64 {
        self.order
            .iter()
            .nth(self.beta as usize)
            .map_or(0, |&(Reverse(v), _)| v)
    }

    pub fn head_budget(&self) -> u64 {
        4 * u64::from(self.beta)
    }

    pub fn tail_budget(&self) -> u64 {
        4 * u64::from(self.beta)
    }

    /// Whether `index` could be lost right now.
    pub fn loss_eligible(&self, index: usize) -> bool {
        self.status.get(index) == Some(&TermStatus::Active)
            && Ratio::from_integer(self.values[index])
                >= self.alpha * Ratio::from_integer(self.order.len() as u64)
    }

    fn check_active(&self, index: usize) -> Result<(), BoxError> {
        match self.status.get(index) {
            None => Err(BoxError::NoSuchTerm(index)),
            Some(TermStatus::Active) => Ok(()),
            Some(_) => Err(BoxError::NotActive(index)),
        }
    }

    fn remove(&mut self, index: usize, status: TermStatus) {
        self.order.remove(&(Reverse(self.values[index]), index));
        self.status[index] = status;
    }

    fn add(&mut self, index: usize, amount: u64) {
        if amount == 0 {
            return;
        }
        self.order.remove(&(Reverse(self.values[index]), index));
        self.values[index] += amount;
        self.order.insert((Reverse(self.values[index]), index));
    }

    /// Validates `mv` against this state and returns the next one.
    pub fn validate_and_step(&self, mv: &BoxMove) -> Result<BoxState, BoxError> {
        let mut next = self.clone();
        next.step(mv)?;
        Ok(next)
    }

    /// In-place [`BoxState::validate_and_step`]; the state is left
    /// unspecified on error.
    pub fn step(&mut self, mv: &BoxMove) -> Result<(), BoxError> {
        if self.order.is_empty() {
            return Err(BoxError::Exhausted);
        }
        for &i in &mv.losses {
            self.check_active(i)?;
            if !self.loss_eligible(i) {
                return Err(BoxError::LossIneligible {
                    index: i,
                    value: self.values[i],
                    remaining: self.order.len(),
                });
            }
            self.remove(i, TermStatus::Lost);
        }

        let beta = self.beta as usize;
        if mv.head_increments.len() > beta {
            return Err(BoxError::TooManyHeadIncrements {
                given: mv.head_increments.len(),
                allowed: beta,
            });
        }
        let heads: Vec<usize> = self.ranked().take(beta).collect();
        for (rank, &amount) in mv.head_increments.iter().enumerate() {
            if amount > self.head_budget() {
                return Err(BoxError::HeadBudget {
                    amount,
                    budget: self.head_budget(),
                });
            }
            if let Some(&i) = heads.get(rank) {
                self.add(i, amount);
            }
        }

        let heads: Vec<usize> = self.ranked().take(beta).collect();
        let total: u64 = mv.tail_increments.iter().map(|&(_, a)| a).sum();
        if total > self.tail_budget() {
            return Err(BoxError::TailBudget {
                total,
                budget: self.tail_budget(),
            });
        }
        for &(i, _) in &mv.tail_increments {
            self.check_active(i)?;
            if heads.contains(&i) {
                return Err(BoxError::TailOnHead(i));
            }
        }
        for &(i, amount) in &mv.tail_increments {
            self.add(i, amount);
        }

        match mv.primary {
            Some(i) => {
                self.check_active(i)?;
                let rank = self.rank_of(i).expect("active term has a rank");
                if rank > beta + 1 {
                    return Err(BoxError::PrimaryRank {
                        index: i,
                        rank,
                        allowed: beta + 1,
                    });
                }
                self.remove(i, TermStatus::Deleted);
            }
            None if !self.order.is_empty() => return Err(BoxError::MissingPrimary),
            None => {}
        }
        if let Some(i) = mv.secondary {
            self.check_active(i)?;
            self.remove(i, TermStatus::Deleted);
        }
        self.turn += 1;
        Ok(())
    }
}

/// The largest active terms, enough to cover every term a policy can touch
/// this turn, with the rest of the sequence reduced to a count.
struct Top {
    alpha: Ratio<u64>,
    items: Vec<(u64, usize)>,
    hidden: usize,
}

impl Top {
    fn new(state: &BoxState, extra: usize) -> Top {
        // Only a prefix of the ranking can ever become eligible for loss.
        let count = state.active_count() as u64;
        let prefix = state
            .order
            .iter()
            .enumerate()
            .take_while(|&(r, &(Reverse(v), _))| {
                Ratio::from_integer(v) >= state.alpha * Ratio::from_integer(count - r as u64)
            })
            .count();
        let items: Vec<(u64, usize)> = state
            .order
            .iter()
            .take(prefix + extra)
            .map(|&(Reverse(v), i)| (v, i))
            .collect();
        Top {
            alpha: state.alpha,
            hidden: state.active_count() - items.len(),
            items,
        }
    }

    fn count(&self) -> usize {
        self.items.len() + self.hidden
    }

    fn eligible(&self, pos: usize) -> bool {
        Ratio::from_integer(self.items[pos].0) >= self.alpha * Ratio::from_integer(self.count() as u64)
    }

    fn remove(&mut self, pos: usize) -> usize {
        self.items.remove(pos).1
    }

    fn add(&mut self, pos: usize, amount: u64) {
        self.items[pos].0 += amount;
        self.items.sort_by_key(|&(v, i)| (Reverse(v), i));
    }

    fn position(&self, index: usize) -> usize {
        self.items
            .iter()
            .position(|&(_, i)| i == index)
            .expect("index is in view")
    }
}

/// The move that spends every budget on the top of the sequence: all
/// eligible losses, 4β on each head term and on the (β+1)-st term, which is
/// then deleted.
pub fn greedy_adversary(state: &BoxState) -> BoxMove {
    let beta = state.beta as usize;
    let mut top = Top::new(state, beta + 1);
    let mut losses = Vec::new();
    while !top.items.is_empty() && top.eligible(0) {
        losses.push(top.remove(0));
    }
    let heads = top.items.len().min(beta);
    let head_increments = vec![state.head_budget(); heads];
    for pos in 0..heads {
        top.items[pos].0 += state.head_budget();
    }
    let (tail_increments, primary) = match top.items.get(beta) {
        Some(&(_, i)) => (vec![(i, state.tail_budget())], Some(i)),
        None => (Vec::new(), top.items.last().map(|&(_, i)| i)),
    };
    BoxMove {
        losses,
        head_increments,
        tail_increments,
        primary,
        secondary: None,
    }
}

/// An adversary policy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BoxPolicy {
    Greedy,
    /// Random eligible losses, random budgets poured into random terms near
    /// the top of the tail, random deletions.
    Random { seed: u64 },
    /// Never increments; deletes the lowest-ranked allowed term.
    Idle,
}

impl fmt::Display for BoxPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxPolicy::Greedy => write!(f, "greedy"),
            BoxPolicy::Random { seed } => write!(f, "random:{seed}"),
            BoxPolicy::Idle => write!(f, "idle"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown box policy {0:?}; expected greedy, random:SEED or idle")]
pub struct PolicyParseError(String);

impl FromStr for BoxPolicy {
    type Err = PolicyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(BoxPolicy::Greedy),
            "idle" => Ok(BoxPolicy::Idle),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(|seed| BoxPolicy::Random { seed })
                .ok_or_else(|| PolicyParseError(s.to_string())),
        }
    }
}

impl From<BoxPolicy> for String {
    fn from(p: BoxPolicy) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for BoxPolicy {
    type Error = PolicyParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A policy with its running state.
#[derive(Clone, Debug)]
pub enum Adversary {
    Greedy,
    Random(Box<RandomAdversary>),
    Idle,
}

impl Adversary {
    pub fn new(policy: &BoxPolicy) -> Adversary {
        match *policy {
            BoxPolicy::Greedy => Adversary::Greedy,
            BoxPolicy::Random { seed } => Adversary::Random(Box::new(RandomAdversary::new(seed))),
            BoxPolicy::Idle => Adversary::Idle,
        }
    }

    pub fn next_move(&mut self, state: &BoxState) -> BoxMove {
        match self {
            Adversary::Greedy => greedy_adversary(state),
            Adversary::Random(r) => r.next_move(state),
            Adversary::Idle => BoxMove {
                primary: state
                    .at_rank(state.beta as usize + 1)
                    .or_else(|| state.ranked().last()),
                ..BoxMove::default()
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomAdversary {
    rng: ChaCha8Rng,
    /// How many tail ranks the tail budget is spread over.
    window: usize,
}

impl RandomAdversary {
    pub fn new(seed: u64) -> RandomAdversary {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let window = rng.gen_range(1..=16);
        RandomAdversary { rng, window }
    }

    pub fn next_move(&mut self, state: &BoxState) -> BoxMove {
        let beta = state.beta as usize;
        let rng = &mut self.rng;
        let mut top = Top::new(state, beta + 1 + self.window);

        let mut losses = Vec::new();
        let mut pos = 0;
        while pos < top.items.len() && top.eligible(pos) {
            if rng.gen_bool(0.5) {
                losses.push(top.remove(pos));
            } else {
                pos += 1;
            }
        }
        if top.count() == 0 {
            return BoxMove {
                losses,
                ..BoxMove::default()
            };
        }

        let heads = top.items.len().min(beta);
        let head_increments: Vec<u64> = (0..heads)
            .map(|_| rng.gen_range(0..=state.head_budget()))
            .collect();
        for (pos, &a) in head_increments.iter().enumerate() {
            top.items[pos].0 += a;
        }
        top.items.sort_by_key(|&(v, i)| (Reverse(v), i));

        let tail: Vec<usize> = top
            .items
            .iter()
            .skip(beta)
            .take(self.window)
            .map(|&(_, i)| i)
            .collect();
        let mut tail_increments: Vec<(usize, u64)> = Vec::new();
        if !tail.is_empty() {
            let budget = if rng.gen_bool(0.8) {
                state.tail_budget()
            } else {
                rng.gen_range(0..=state.tail_budget())
            };
            for _ in 0..budget {
                let &i = tail.choose(rng).expect("tail is non-empty");
                match tail_increments.iter_mut().find(|(j, _)| *j == i) {
                    Some((_, a)) => *a += 1,
                    None => tail_increments.push((i, 1)),
                }
            }
            for &(i, a) in &tail_increments {
                let pos = top.position(i);
                top.add(pos, a);
            }
        }

        let choices = top.items.len().min(beta + 1);
        let primary = (choices > 0).then(|| top.remove(rng.gen_range(0..choices)));
        let secondary = if !top.items.is_empty() && rng.gen_bool(0.25) {
            Some(top.remove(rng.gen_range(0..top.items.len())))
        } else {
            None
        };
        BoxMove {
            losses,
            head_increments,
            tail_increments,
            primary,
            secondary,
        }
    }
}

/// Maximum tail value after each turn of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxTrace {
    pub beta: u32,
    pub n: usize,
    pub policy: BoxPolicy,
    pub a_beta: f64,
    /// `max_tail[t - 1]` is the largest tail term after turn t.
    pub max_tail: Vec<u64>,
    /// Turns requested; the run stops early once every term is gone.
    pub steps: u64,
}

/// A turn where the tail exceeded A_β ln t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailViolation {
    pub turn: u64,
    pub max_tail: u64,
    pub bound: f64,
}

impl BoxTrace {
    pub fn bound(&self, turn: u64) -> f64 {
        self.a_beta * (turn as f64).ln()
    }

    pub fn turns(&self) -> u64 {
        self.max_tail.len() as u64
    }

    pub fn violations(&self, from: u64) -> Vec<TailViolation> {
        self.rows()
            .filter(|&(t, v, b)| t >= from && v as f64 > b)
            .map(|(turn, max_tail, bound)| TailViolation {
                turn,
                max_tail,
                bound,
            })
            .collect()
    }

    /// max over t ≥ `from` of max_tail(t) / ln t.
    pub fn max_ratio(&self, from: u64) -> f64 {
        self.rows()
            .filter(|&(t, _, _)| t >= from.max(2))
            .map(|(t, v, _)| v as f64 / (t as f64).ln())
            .fold(0.0, f64::max)
    }

    /// (t, max_tail, A_β ln t) for every turn played.
    pub fn rows(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        self.max_tail
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, v, self.bound(i as u64 + 1)))
    }
}

#[derive(Debug, Error)]
#[error("turn {turn}: {policy} produced an invalid move: {source}")]
pub struct RunError {
    pub turn: u64,
    pub policy: BoxPolicy,
    #[source]
    pub source: BoxError,
}

/// Plays `steps` turns from `n` zeros.
pub fn run_box(n: usize, beta: u32, policy: &BoxPolicy, steps: u64) -> Result<BoxTrace, RunError> {
    let mut state = BoxState::zeros(n, beta);
    let mut adversary = Adversary::new(policy);
    let mut max_tail = Vec::with_capacity(steps as usize);
    for turn in 1..=steps {
        if state.active_count() == 0 {
            break;
        }
        let mv = adversary.next_move(&state);
        state.step(&mv).map_err(|source| RunError {
            turn,
            policy: policy.clone(),
            source,
        })?;
        max_tail.push(state.max_tail());
    }
    Ok(BoxTrace {
        beta,
        n,
        policy: policy.clone(),
        a_beta: StrategyParams::new(beta).a_beta,
        max_tail,
        steps,
    })
}

/// Whether `e` is dominated by `b`: no more active terms, and rank by rank
/// no larger.
pub fn dominance_check(e: &BoxState, b: &BoxState) -> bool {
    e.active_count() <= b.active_count()
        && e.order
            .iter()
            .zip(&b.order)
            .all(|(&(Reverse(x), _), &(Reverse(y), _))| x <= y)
}

/// Translates a move on `e` into a move on a dominating `b` by matching
/// ranks at every stage. Losses are not copied.
pub fn mimic_move(e: &BoxState, mv: &BoxMove, b: &BoxState) -> Result<BoxMove, BoxError> {
    let beta = e.beta as usize;
    let mut es = e.clone();
    let mut bs = b.clone();
    for &i in &mv.losses {
        es.check_active(i)?;
        es.remove(i, TermStatus::Lost);
    }

    let e_heads: Vec<usize> = es.ranked().take(beta).collect();
    let b_heads: Vec<usize> = bs.ranked().take(beta).collect();
    for (rank, &a) in mv.head_increments.iter().enumerate() {
        if let Some(&i) = e_heads.get(rank) {
            es.add(i, a);
        }
        if let Some(&i) = b_heads.get(rank) {
            bs.add(i, a);
        }
    }

    let mut tail_increments = Vec::with_capacity(mv.tail_increments.len());
    let b_ranked: Vec<usize> = bs.ranked().collect();
    for &(i, a) in &mv.tail_increments {
        let rank = es.rank_of(i).ok_or(BoxError::NotActive(i))?;
        tail_increments.push((b_ranked[rank - 1], a));
    }
    for &(i, a) in &mv.tail_increments {
        es.add(i, a);
    }
    for &(i, a) in &tail_increments {
        bs.add(i, a);
    }

    let translate = |i: usize, es: &mut BoxState, bs: &mut BoxState| {
        let rank = es.rank_of(i).ok_or(BoxError::NotActive(i))?;
        let j = bs.at_rank(rank).expect("b has at least as many terms");
        es.remove(i, TermStatus::Deleted);
        bs.remove(j, TermStatus::Deleted);
        Ok::<usize, BoxError>(j)
    };
    let primary = match mv.primary {
        Some(i) => Some(translate(i, &mut es, &mut bs)?),
        // `e` ran out of terms; `b` still owes a deletion.
        None => bs.at_rank(beta + 1).or_else(|| bs.ranked().last()).inspect(|&j| {
            bs.remove(j, TermStatus::Deleted);
        }),
    };
    let secondary = mv
        .secondary
        .map(|i| translate(i, &mut es, &mut bs))
        .transpose()?;
    Ok(BoxMove {
        losses: Vec::new(),
        head_increments: mv.head_increments.clone(),
        tail_increments,
        primary,
        secondary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deleting_one_zero() {
        let s = BoxState::zeros(5, 1);
        let next = s
            .validate_and_step(&BoxMove {
                primary: Some(0),
                ..BoxMove::default()
            })
            .unwrap();
        assert_eq!(next.status(0), TermStatus::Deleted);
        assert_eq!(next.count(TermStatus::Deleted), 1);
        assert_eq!(next.active_count(), 4);
        assert_eq!(next.turn(), 1);
    }

    #[test]
    fn head_budget_is_four_beta() {
        let s = BoxState::zeros(5, 1);
        let mv = BoxMove {
            head_increments: vec![5],
            primary: Some(0),
            ..BoxMove::default()
        };
        assert_eq!(
            s.validate_and_step(&mv),
            Err(BoxError::HeadBudget { amount: 5, budget: 4 })
        );
    }

    #[test]
    fn losses_need_alpha_times_the_remaining_count() {
        let mut values = vec![0; 100];
        values[0] = 1;
        let s = BoxState::from_values(values, 2);
        let mv = BoxMove {
            losses: vec![0],
            primary: Some(1),
            ..BoxMove::default()
        };
        assert!(matches!(
            s.validate_and_step(&mv),
            Err(BoxError::LossIneligible { index: 0, value: 1, remaining: 100 })
        ));
    }

    #[test]
    fn losses_are_checked_one_at_a_time() {
        // α = 1/6: with 12 terms a 2 is eligible, and after losing it the
        // next 2 faces 11/6 < 2.
        let mut values = vec![0; 12];
        values[0] = 2;
        values[1] = 2;
        let s = BoxState::from_values(values.clone(), 1);
        let mv = BoxMove {
            losses: vec![0, 1],
            primary: Some(2),
            ..BoxMove::default()
        };
        assert!(s.validate_and_step(&mv).is_ok());
        values[1] = 1;
        let s = BoxState::from_values(values, 1);
        assert!(matches!(
            s.validate_and_step(&mv),
            Err(BoxError::LossIneligible { index: 1, .. })
        ));
    }

    #[test]
    fn tail_rules() {
        let s = BoxState::from_values(vec![5, 3, 1, 0], 1);
        let on_head = BoxMove {
            tail_increments: vec![(0, 1)],
            primary: Some(0),
            ..BoxMove::default()
        };
        assert_eq!(s.validate_and_step(&on_head), Err(BoxError::TailOnHead(0)));
        let over = BoxMove {
            tail_increments: vec![(1, 3), (2, 2)],
            primary: Some(0),
            ..BoxMove::default()
        };
        assert_eq!(
            s.validate_and_step(&over),
            Err(BoxError::TailBudget { total: 5, budget: 4 })
        );
        // Head increments are applied first: 3 + 4 overtakes 5, so term 0
        // is a tail term by the time tail increments land.
        let swap = BoxMove {
            head_increments: vec![0],
            tail_increments: vec![(1, 4)],
            primary: Some(1),
            ..BoxMove::default()
        };
        assert!(s.validate_and_step(&swap).is_ok());
        let deep = BoxMove {
            primary: Some(2),
            ..BoxMove::default()
        };
        assert_eq!(
            s.validate_and_step(&deep),
            Err(BoxError::PrimaryRank { index: 2, rank: 3, allowed: 2 })
        );
    }

    #[test]
    fn greedy_first_turn() {
        let s = BoxState::zeros(10, 1);
        let mv = greedy_adversary(&s);
        assert_eq!(mv.head_increments, vec![4]);
        assert_eq!(mv.tail_increments, vec![(1, 4)]);
        assert_eq!(mv.primary, Some(1));
        let next = s.validate_and_step(&mv).unwrap();
        assert_eq!(next.value(0), 4);
        assert_eq!(next.value(1), 4);
        assert_eq!(next.status(1), TermStatus::Deleted);
    }

    #[test]
    fn idle_policy_keeps_zeros() {
        let trace = run_box(200, 2, &BoxPolicy::Idle, 150).unwrap();
        assert!(trace.max_tail.iter().all(|&v| v == 0));
        assert_eq!(trace.turns(), 150);
    }

    #[test]
    fn runs_stop_when_the_terms_run_out() {
        let trace = run_box(20, 1, &BoxPolicy::Random { seed: 1 }, 100).unwrap();
        assert!(trace.turns() < 20);
    }

    #[test]
    fn policy_names_round_trip() {
        for p in [BoxPolicy::Greedy, BoxPolicy::Idle, BoxPolicy::Random { seed: 42 }] {
            assert_eq!(p.to_string().parse::<BoxPolicy>().unwrap(), p);
        }
        assert!("random:x".parse::<BoxPolicy>().is_err());
    }

    #[test]
    fn dominance_examples() {
        let e = BoxState::from_values(vec![3, 1], 1);
        let b = BoxState::from_values(vec![5, 2, 2], 1);
        assert!(dominance_check(&e, &e));
        assert!(dominance_check(&e, &b));
        assert!(!dominance_check(&BoxState::from_values(vec![6], 1), &BoxState::from_values(vec![5, 5], 1)));
        assert!(!dominance_check(&b, &e));
    }
}
