//! The general adaptive-to-non-adaptive simulation: enumerate every query
//! cell reachable over all answer branches, fetch them up front, replay.

use crate::transforms::tester::{
    replay_to_verdict, CoinStream, TesterAction, TesterProgram, Transcript, TranscriptEvent,
};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

/// Largest declared query budget accepted (the cell tree has up to
/// `2^q - 1` nodes).
pub const MAX_EXP_QUERIES: usize = 16;

/// A non-adaptive query plan: per-slot index sets fixed by the coins alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonAdaptivePlan {
    pub coin_seed: u64,
    /// `index_sets[slot]` holds the 1-based indices queried in that sample.
    pub index_sets: Vec<Vec<usize>>,
}

impl NonAdaptivePlan {
    pub fn total_queries(&self) -> usize {
        self.index_sets.iter().map(|s| s.len()).sum()
    }
}

/// Extracts the plan of a tester for fixed coins by enumerating its
/// reachable cells. For a non-adaptive tester this is exactly the set of
/// queries it will perform; the plan is a pure function of the coins.
pub fn extract_plan(t: &TesterProgram, coins: &CoinStream) -> NonAdaptivePlan {
    let cells = reachable_cells(t, coins);
    let slots = cells.iter().map(|&(s, _)| s + 1).max().unwrap_or(0).max(t.declared_samples);
    let mut index_sets = vec![Vec::new(); slots];
    for (slot, index) in cells {
        index_sets[slot].push(index);
    }
    NonAdaptivePlan { coin_seed: coins.seed(), index_sets }
}

/// Enumerates all `(slot, index)` cells the tester can touch for the given
/// coins, over every answer branch.
pub fn reachable_cells(t: &TesterProgram, coins: &CoinStream) -> Vec<(usize, usize)> {
    let mut cells = BTreeSet::new();
    let mut transcript = Transcript::new();
    walk(t, coins, &mut transcript, &mut cells);
    cells.into_iter().collect()
}

fn walk(
    t: &TesterProgram,
    coins: &CoinStream,
    transcript: &mut Transcript,
    cells: &mut BTreeSet<(usize, usize)>,
) {
    let step_guard = 4 * (t.declared_samples + t.declared_queries) + 64;
    for _ in 0..step_guard {
        match t.step(coins, transcript) {
            TesterAction::DrawSample => transcript.push(TranscriptEvent::SampleDrawn),
            TesterAction::Query { slot, index } => {
                cells.insert((slot, index));
                for answer in [0u8, 1] {
                    let mut branch = transcript.clone();
                    branch.push(TranscriptEvent::Answer(answer));
                    walk(t, coins, &mut branch, cells);
                }
                return;
            }
            TesterAction::Verdict(_) => return,
        }
    }
    panic!("{} did not terminate during cell enumeration", t.name);
}

/// Builds the non-adaptive simulator: same samples, at most `2^q - 1`
/// queries, and for every coin stream the exact same verdict as the input
/// tester against the same sample values.
pub fn exponential_sim(t: &TesterProgram) -> Result<TesterProgram> {
    if t.declared_queries > MAX_EXP_QUERIES {
        return Err(Error::InvalidParameter(format!(
            "exponential simulation caps declared queries at {MAX_EXP_QUERIES}, got {}",
            t.declared_queries
        )));
    }
    let cell_budget = (1usize << t.declared_queries) - 1;
    let inner = t.clone();
    let cache: Mutex<HashMap<u64, Vec<(usize, usize)>>> = Mutex::new(HashMap::new());

    let step = move |coins: &CoinStream, transcript: &Transcript| -> TesterAction {
        let cells = {
            let mut cache = cache.lock().unwrap();
            if cache.len() > 64 {
                cache.clear();
            }
            cache
                .entry(coins.seed())
                .or_insert_with(|| reachable_cells(&inner, coins))
                .clone()
        };
        debug_assert!(cells.len() <= (1usize << inner.declared_queries) - 1);

        if transcript.samples_drawn() < inner.declared_samples {
            return TesterAction::DrawSample;
        }
        let answers = transcript.answers();
        if answers.len() < cells.len() {
            let (slot, index) = cells[answers.len()];
            return TesterAction::Query { slot, index };
        }
        let map: HashMap<(usize, usize), u8> =
            cells.iter().copied().zip(answers.iter().copied()).collect();
        TesterAction::Verdict(replay_to_verdict(&inner, coins, |slot, index| map[&(slot, index)]))
    };

    Ok(TesterProgram::new(
        format!("exp({})", t.name),
        t.declared_samples,
        cell_budget.max(1),
        step,
    ))
}
