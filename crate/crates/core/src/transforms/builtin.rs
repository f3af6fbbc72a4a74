//! A small set of programmatic testers used by the simulation experiments
//! and the CLI.

use crate::transforms::tester::{CoinStream, TesterAction, TesterProgram, Transcript};
use crate::{Error, Result, Verdict};

/// Two samples, four queries: probes one shared index, decides whether the
/// pair looks equal or complementary, then verifies on a branch-dependent
/// second index. Accepts exactly the consistent transcripts of the
/// index-invariant property "support is a vector and its complement".
pub fn complement_pair_tester(n: usize) -> TesterProgram {
    TesterProgram::new("complement-pair", 2, 4, move |coins: &CoinStream, tr: &Transcript| {
        if tr.samples_drawn() < 2 {
            return TesterAction::DrawSample;
        }
        let j1 = 1 + coins.range_at(0, n);
        let answers = tr.answers();
        match answers.len() {
            0 => TesterAction::Query { slot: 0, index: j1 },
            1 => TesterAction::Query { slot: 1, index: j1 },
            2 | 3 => {
                // branch-dependent verification index makes this genuinely
                // adaptive
                let same = answers[0] == answers[1];
                let j2 = if same { 1 + coins.range_at(1, n) } else { 1 + coins.range_at(2, n) };
                let slot = answers.len() - 2;
                TesterAction::Query { slot, index: j2 }
            }
            _ => {
                let same = answers[0] == answers[1];
                let consistent =
                    if same { answers[2] == answers[3] } else { answers[2] != answers[3] };
                TesterAction::Verdict(if consistent { Verdict::Accept } else { Verdict::Reject })
            }
        }
    })
}

/// Three samples, six queries at two shared random indices; rejects on any
/// disagreement with the first sample. Non-adaptive by construction.
pub fn support_one_mini(n: usize) -> TesterProgram {
    TesterProgram::new("support-one-mini", 3, 6, move |coins: &CoinStream, tr: &Transcript| {
        if tr.samples_drawn() < 3 {
            return TesterAction::DrawSample;
        }
        let j = [1 + coins.range_at(0, n), 1 + coins.range_at(1, n)];
        let answers = tr.answers();
        if answers.len() < 6 {
            let slot = answers.len() / 2;
            let index = j[answers.len() % 2];
            return TesterAction::Query { slot, index };
        }
        let ok = (1..3).all(|s| answers[2 * s] == answers[0] && answers[2 * s + 1] == answers[1]);
        TesterAction::Verdict(if ok { Verdict::Accept } else { Verdict::Reject })
    })
}

/// One sample, up to three queries with an answer-dependent second index; a
/// minimal genuinely adaptive program. Accepts iff the final probed bit
/// is 1.
pub fn branching_probe() -> TesterProgram {
    TesterProgram::new("branching-probe", 1, 3, |_: &CoinStream, tr: &Transcript| {
        if tr.samples_drawn() < 1 {
            return TesterAction::DrawSample;
        }
        let answers = tr.answers();
        match answers.len() {
            0 => TesterAction::Query { slot: 0, index: 1 },
            1 => {
                let index = if answers[0] == 1 { 2 } else { 3 };
                TesterAction::Query { slot: 0, index }
            }
            _ => TesterAction::Verdict(if answers[1] == 1 { Verdict::Accept } else { Verdict::Reject }),
        }
    })
}

/// Two samples over two-bit-per-letter palindrome encodings: one shared
/// support probe, a binary search for the alphabet boundary, and one
/// mirrored-pair check.
pub fn pal_lift_mini(letters: usize) -> TesterProgram {
    assert!(letters.is_power_of_two() && letters >= 4, "letter count must be a power of two >= 4");
    let n = 2 * letters;
    let search_steps = letters.ilog2() as usize;
    // support probe (2) + binary search (2 per step) + mirror check (4)
    let budget = 2 + 2 * search_steps + 4;
    TesterProgram::new("pal-lift-mini", 2, budget, move |coins: &CoinStream, tr: &Transcript| {
        if tr.samples_drawn() < 2 {
            return TesterAction::DrawSample;
        }
        let answers = tr.answers();
        // phase 1: one shared random bit position across both samples
        let probe = 1 + coins.range_at(0, n);
        match answers.len() {
            0 => return TesterAction::Query { slot: 0, index: probe },
            1 => return TesterAction::Query { slot: 1, index: probe },
            _ => {
                if answers[0] != answers[1] {
                    return TesterAction::Verdict(Verdict::Reject);
                }
            }
        }
        // phase 2: binary search on letters of sample 0; a letter's high bit
        // (position 2j-1) is 0 for {0,1} and 1 for {2,3}
        let mut consumed = 2;
        let mut lo = 0usize;
        let mut hi = letters;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if answers.len() == consumed {
                return TesterAction::Query { slot: 0, index: 2 * mid - 1 };
            }
            if answers[consumed] == 0 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
            consumed += 1;
        }
        let boundary = lo;
        // phase 3: one mirrored pair of letters, two bits each
        let j = 1 + coins.range_at(1, letters);
        let (a, b) = if j <= boundary { (j, boundary + 1 - j) } else { (j, letters + boundary + 1 - j) };
        let positions = [2 * a - 1, 2 * a, 2 * b - 1, 2 * b];
        if answers.len() < consumed + 4 {
            let index = positions[answers.len() - consumed];
            return TesterAction::Query { slot: 0, index };
        }
        let letter_a = answers[consumed] << 1 | answers[consumed + 1];
        let letter_b = answers[consumed + 2] << 1 | answers[consumed + 3];
        let ok = if j <= boundary {
            letter_a <= 1 && letter_a == letter_b
        } else {
            letter_a >= 2 && letter_a == letter_b
        };
        TesterAction::Verdict(if ok { Verdict::Accept } else { Verdict::Reject })
    })
}

/// Builtins by CLI name.
pub fn builtin_tester(name: &str, n: usize) -> Result<TesterProgram> {
    match name {
        "complement-pair" => Ok(complement_pair_tester(n)),
        "support-one-mini" => Ok(support_one_mini(n)),
        "branching-probe" => Ok(branching_probe()),
        "pal-lift-mini" => {
            if n % 2 != 0 {
                return Err(Error::InvalidParameter("encoded dimension must be even".into()));
            }
            Ok(pal_lift_mini(n / 2))
        }
        other => Err(Error::InvalidParameter(format!("unknown builtin tester {other:?}"))),
    }
}
