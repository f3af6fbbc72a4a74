//! The index-invariant simulation: substitute a random non-repeating index
//! for each adaptive index choice and query it across all samples, padding
//! to exactly `q` rounds.

use crate::transforms::tester::{
    CoinStream, TesterAction, TesterProgram, Transcript, TranscriptEvent,
};
use crate::{Error, Result};
use std::collections::HashMap;

const R_SEQUENCE_TAG: u64 = 0x5b57;

/// Draws the non-repeating substitution sequence `r_1..r_q` from the coin
/// sub-stream (partial Fisher-Yates over `[n]`).
fn substitution_sequence(coins: &CoinStream, n: usize, q: usize) -> Vec<usize> {
    let sub = coins.substream(R_SEQUENCE_TAG);
    let mut pool: Vec<usize> = (1..=n).collect();
    for i in 0..q {
        let j = i + sub.range_at(i as u64, n - i);
        pool.swap(i, j);
    }
    pool.truncate(q);
    pool
}

/// Builds the non-adaptive simulator for an index-invariant property:
/// `s` samples, exactly `s * q` queries at `q` uniformly random distinct
/// indices, each queried in every sample.
pub fn quadratic_sim(t: &TesterProgram, n: usize) -> Result<TesterProgram> {
    if t.declared_queries > n {
        return Err(Error::InvalidParameter(format!(
            "cannot pick {} distinct indices from [{}]",
            t.declared_queries, n
        )));
    }
    if t.declared_samples == 0 || t.declared_queries == 0 {
        return Err(Error::InvalidParameter(
            "quadratic simulation needs at least one sample and one query".into(),
        ));
    }
    let s = t.declared_samples;
    let q = t.declared_queries;
    let inner = t.clone();

    let step = move |coins: &CoinStream, transcript: &Transcript| -> TesterAction {
        let r = substitution_sequence(coins, n, q);
        if transcript.samples_drawn() < s {
            return TesterAction::DrawSample;
        }
        let answers = transcript.answers();
        // Global query order: round k covers cells (0..s, r[k]).
        let next_cell = |position: usize| TesterAction::Query {
            slot: position % s,
            index: r[position / s],
        };

        // Replay the inner tester, assigning a round to each distinct
        // original index and serving answers from completed cells.
        let mut round_of: HashMap<usize, usize> = HashMap::new();
        let mut inner_transcript = Transcript::new();
        let step_guard = 4 * (s + q) + 64;
        for _ in 0..step_guard {
            match inner.step(coins, &inner_transcript) {
                TesterAction::DrawSample => {
                    inner_transcript.push(TranscriptEvent::SampleDrawn);
                }
                TesterAction::Query { slot, index } => {
                    let next_round = round_of.len();
                    let round = *round_of.entry(index).or_insert(next_round);
                    let cell = round * s + slot;
                    if cell >= answers.len() {
                        // fetch cells in global order until this one exists
                        return next_cell(answers.len());
                    }
                    inner_transcript.push(TranscriptEvent::Answer(answers[cell]));
                }
                TesterAction::Verdict(v) => {
                    // pad to exactly q rounds before delivering the verdict
                    if answers.len() < q * s {
                        return next_cell(answers.len());
                    }
                    return TesterAction::Verdict(v);
                }
            }
        }
        panic!("{} did not terminate during quadratic replay", inner.name);
    };

    Ok(TesterProgram::new(format!("quad({})", t.name), s, s * q, step))
}
