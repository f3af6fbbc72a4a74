//! Interactive testers as pure step functions over an explicit coin stream
//! and interaction transcript, plus the harness that drives them against an
//! oracle.

use crate::oracle::SampleQueryAccess;
use crate::seeding::derive_seed;
use crate::{Error, Result, Verdict};
use std::sync::Arc;

/// An explicit random-coin stream: a pure function of `(seed, position)`,
/// so replaying a tester with the same seed observes identical coins.
#[derive(Clone, Copy, Debug)]
pub struct CoinStream {
    seed: u64,
}

impl CoinStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent sub-stream, for simulator-internal randomness.
    pub fn substream(&self, tag: u64) -> Self {
        Self { seed: derive_seed(self.seed, tag ^ 0xc0ffee) }
    }

    pub fn u64_at(&self, position: u64) -> u64 {
        derive_seed(self.seed, position)
    }

    /// Uniform value in `0..bound`.
    pub fn range_at(&self, position: u64, bound: usize) -> usize {
        assert!(bound > 0);
        (self.u64_at(position) % bound as u64) as usize
    }
}

/// One event of the interaction so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranscriptEvent {
    /// A sample was drawn into the next slot.
    SampleDrawn,
    /// A query was answered with this bit.
    Answer(u8),
}

/// The interaction transcript a step function sees.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    events: Vec<TranscriptEvent>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[TranscriptEvent] {
        &self.events
    }

    pub fn push(&mut self, e: TranscriptEvent) {
        self.events.push(e);
    }

    pub fn samples_drawn(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TranscriptEvent::SampleDrawn)).count()
    }

    /// Answers in query order.
    pub fn answers(&self) -> Vec<u8> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TranscriptEvent::Answer(b) => Some(*b),
                TranscriptEvent::SampleDrawn => None,
            })
            .collect()
    }
}

/// What a tester does next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TesterAction {
    DrawSample,
    /// Query the 1-based `index` of the sample in 0-based `slot` (draw order).
    Query { slot: usize, index: usize },
    Verdict(Verdict),
}

type StepFn = dyn Fn(&CoinStream, &Transcript) -> TesterAction + Send + Sync;

/// An interactive tester: declared budgets plus a deterministic step
/// function of the coins and the transcript.
#[derive(Clone)]
pub struct TesterProgram {
    pub name: String,
    pub declared_samples: usize,
    pub declared_queries: usize,
    step: Arc<StepFn>,
}

impl std::fmt::Debug for TesterProgram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TesterProgram")
            .field("name", &self.name)
            .field("declared_samples", &self.declared_samples)
            .field("declared_queries", &self.declared_queries)
            .finish()
    }
}

impl TesterProgram {
    pub fn new(
        name: impl Into<String>,
        declared_samples: usize,
        declared_queries: usize,
        step: impl Fn(&CoinStream, &Transcript) -> TesterAction + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), declared_samples, declared_queries, step: Arc::new(step) }
    }

    pub fn step(&self, coins: &CoinStream, transcript: &Transcript) -> TesterAction {
        (self.step)(coins, transcript)
    }
}

/// A completed run: verdict plus the query cells in order.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub verdict: Verdict,
    /// `(slot, index)` per query, in query order.
    pub queries: Vec<(usize, usize)>,
    pub samples_drawn: usize,
}

/// Drives a tester against an oracle; oracle counters are authoritative for
/// resource accounting. Budget violations by the tester are hard errors.
pub fn run_tester(
    t: &TesterProgram,
    oracle: &mut dyn SampleQueryAccess,
    seed: u64,
) -> Result<RunRecord> {
    let coins = CoinStream::new(seed);
    let mut transcript = Transcript::new();
    let mut sample_ids = Vec::new();
    let mut queries = Vec::new();
    let step_guard = 4 * (t.declared_samples + t.declared_queries) + 64;
    for _ in 0..step_guard {
        match t.step(&coins, &transcript) {
            TesterAction::DrawSample => {
                if sample_ids.len() == t.declared_samples {
                    return Err(Error::TesterBudget(format!(
                        "{} exceeded its declared {} samples",
                        t.name, t.declared_samples
                    )));
                }
                sample_ids.push(oracle.draw_sample()?);
                transcript.push(TranscriptEvent::SampleDrawn);
            }
            TesterAction::Query { slot, index } => {
                if queries.len() == t.declared_queries {
                    return Err(Error::TesterBudget(format!(
                        "{} exceeded its declared {} queries",
                        t.name, t.declared_queries
                    )));
                }
                let sid = *sample_ids.get(slot).ok_or(Error::UnknownSample(slot))?;
                let bit = oracle.query_bit(sid, index)?;
                queries.push((slot, index));
                transcript.push(TranscriptEvent::Answer(bit));
            }
            TesterAction::Verdict(v) => {
                return Ok(RunRecord { verdict: v, queries, samples_drawn: sample_ids.len() });
            }
        }
    }
    Err(Error::TesterBudget(format!("{} did not terminate within its budget", t.name)))
}

/// Replays a tester feeding answers from a lookup; used by the simulators
/// after all cells have been fetched.
pub fn replay_to_verdict(
    t: &TesterProgram,
    coins: &CoinStream,
    mut answer_of: impl FnMut(usize, usize) -> u8,
) -> Verdict {
    let mut transcript = Transcript::new();
    let step_guard = 4 * (t.declared_samples + t.declared_queries) + 64;
    for _ in 0..step_guard {
        match t.step(coins, &transcript) {
            TesterAction::DrawSample => transcript.push(TranscriptEvent::SampleDrawn),
            TesterAction::Query { slot, index } => {
                transcript.push(TranscriptEvent::Answer(answer_of(slot, index)));
            }
            TesterAction::Verdict(v) => return v,
        }
    }
    panic!("{} did not terminate within its budget during replay", t.name);
}
