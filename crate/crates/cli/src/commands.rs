//! Implementations of the experiment subcommands.

use crate::report::{library_version, write_csv, Report, ResultRecord};
use anyhow::{bail, Context};
use hugeobject::bits::BitVector;
use hugeobject::cluster::{test_and_learn, ClusterLearnParams, LearnTag};
use hugeobject::codes::{CodeDescriptor, GapSystem};
use hugeobject::dist::ExplicitDistribution;
use hugeobject::gap::{alg_adaptive, GapConstants};
use hugeobject::instances::{
    encode_quad_string, gen_gap_distribution, gen_pal_yes, gen_pvc_no_query, gen_pvc_no_sample,
    gen_pvc_yes, gen_supp_hard, PvcParams, SuppHardMode, SuppHardParams,
};
use hugeobject::metrics::emd_exact;
use hugeobject::oracle::{HugeObjectOracle, SampleQueryAccess};
use hugeobject::seeding::derive_seed;
use hugeobject::transforms::{
    builtin_tester, exponential_sim, quadratic_sim, run_tester, verify_nonadaptive,
};
use hugeobject::Verdict;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub enum Outcome {
    Success,
    StrictFailure,
}

fn pool(parallelism: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(parallelism.max(1)).build()?)
}

fn load_distribution(path: &Path) -> anyhow::Result<ExplicitDistribution> {
    ExplicitDistribution::load(path)
        .with_context(|| format!("invalid distribution file {}", path.display()))
}

// ---------------------------------------------------------------- emd ----

pub fn cmd_emd(d1: &Path, d2: &Path, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    let left = load_distribution(d1)?;
    let right = load_distribution(d2)?;
    let (value, flow) = emd_exact(&left, &right)?;
    let report = Report {
        record: ResultRecord {
            command: "emd".into(),
            config: json!({ "d1": d1.display().to_string(), "d2": d2.display().to_string() }),
            master_seed: 0,
            parallelism: 1,
            trials: vec![json!({
                "value": value,
                "flow_arcs": flow.pairs.len(),
            })],
            aggregate: json!({ "value": value }),
            library_version: library_version(),
            code_descriptor: None,
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    Ok(Outcome::Success)
}

// -------------------------------------------------------------- learn ----

#[derive(Serialize, Clone)]
pub struct LearnTrialRecord {
    pub trial: u64,
    pub outcome: String,
    pub weights: Vec<f64>,
    pub unassigned_fraction: f64,
    pub support: Vec<String>,
    pub samples_used: u64,
    pub queries_used: u64,
    pub large_dimension_regime: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_learn(
    dist: &Path,
    zeta: f64,
    delta: f64,
    r: usize,
    seed: u64,
    multipliers: (f64, f64, f64),
    trials: u64,
    parallelism: usize,
    strict: bool,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    let d = load_distribution(dist)?;
    let (c_t1, c_t2, c_r) = multipliers;
    let params = ClusterLearnParams::with_multipliers(zeta, delta, r, c_t1, c_t2, c_r)?;

    let records: Vec<LearnTrialRecord> = pool(parallelism)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let oracle_seed = derive_seed(seed, trial);
                let mut oracle = HugeObjectOracle::new(d.clone(), oracle_seed);
                let outcome =
                    test_and_learn(&mut oracle, &params, derive_seed(oracle_seed, 1)).unwrap();
                LearnTrialRecord {
                    trial,
                    outcome: match outcome.tag {
                        LearnTag::Learned => "learned".into(),
                        LearnTag::Fail => "fail".into(),
                    },
                    weights: outcome.weights.clone(),
                    unassigned_fraction: outcome.unassigned_fraction,
                    support: outcome
                        .distribution
                        .map(|d| d.support().iter().map(|(v, _)| v.to_string()).collect())
                        .unwrap_or_default(),
                    samples_used: outcome.samples_used,
                    queries_used: outcome.queries_used,
                    large_dimension_regime: outcome.large_dimension_regime,
                }
            })
            .collect()
    });

    let learned = records.iter().filter(|r| r.outcome == "learned").count();
    let success_rate = learned as f64 / (trials.max(1)) as f64;
    if let Some(csv_path) = csv {
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                vec![
                    r.trial.to_string(),
                    r.outcome.clone(),
                    r.unassigned_fraction.to_string(),
                    r.samples_used.to_string(),
                    r.queries_used.to_string(),
                ]
            })
            .collect();
        write_csv(csv_path, &["trial", "outcome", "unassigned_fraction", "samples", "queries"], &rows)?;
    }
    let any_fail = records.iter().any(|r| r.outcome == "fail");
    let report = Report {
        record: ResultRecord {
            command: "learn".into(),
            config: json!({
                "dist": dist.display().to_string(),
                "zeta": zeta, "delta": delta, "r": r,
                "c_t1": c_t1, "c_t2": c_t2, "c_r": c_r,
                "t1": params.t1, "t2": params.t2,
                "epsilon_out": params.epsilon_out,
                "trials": trials,
            }),
            master_seed: seed,
            parallelism,
            trials: records,
            aggregate: json!({ "success_rate": success_rate, "learned": learned }),
            library_version: library_version(),
            code_descriptor: None,
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    Ok(if strict && any_fail { Outcome::StrictFailure } else { Outcome::Success })
}

// ------------------------------------------------------------ test-vc ----

#[allow(clippy::too_many_arguments)]
pub fn cmd_test_vc(
    dist: &Path,
    candidates: &[PathBuf],
    epsilon: f64,
    d: u32,
    seed: u64,
    multipliers: (f64, f64, f64),
    trials: u64,
    parallelism: usize,
    strict: bool,
    out: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    let target = load_distribution(dist)?;
    if candidates.is_empty() {
        bail!("at least one --candidate file is required");
    }
    let candidate_dists: Vec<ExplicitDistribution> =
        candidates.iter().map(|p| load_distribution(p)).collect::<anyhow::Result<_>>()?;

    let verdicts: Vec<String> = pool(parallelism)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let oracle_seed = derive_seed(seed, trial);
                let mut oracle = HugeObjectOracle::new(target.clone(), oracle_seed);
                let v = hugeobject::cluster::test_vc_property(
                    &mut oracle,
                    &candidate_dists,
                    epsilon,
                    d,
                    derive_seed(oracle_seed, 1),
                    multipliers,
                )
                .unwrap();
                match v {
                    Verdict::Accept => "accept".to_string(),
                    Verdict::Reject => "reject".to_string(),
                }
            })
            .collect()
    });
    let accepts = verdicts.iter().filter(|v| *v == "accept").count();
    let any_reject = accepts < verdicts.len();
    let report = Report {
        record: ResultRecord {
            command: "test-vc".into(),
            config: json!({
                "dist": dist.display().to_string(),
                "candidates": candidates.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "epsilon": epsilon, "d": d, "trials": trials,
            }),
            master_seed: seed,
            parallelism,
            trials: verdicts.iter().map(|v| json!({ "verdict": v })).collect(),
            aggregate: json!({ "accept_rate": accepts as f64 / trials.max(1) as f64 }),
            library_version: library_version(),
            code_descriptor: None,
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    Ok(if strict && any_reject { Outcome::StrictFailure } else { Outcome::Success })
}

// -------------------------------------------------------- gap-adaptive ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenMode {
    Yes,
    No,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_gap_adaptive(
    dist: Option<&Path>,
    gen: Option<GenMode>,
    n: usize,
    eta: f64,
    epsilon: f64,
    seed: u64,
    trials: u64,
    parallelism: usize,
    c_fp: f64,
    strict: bool,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    if dist.is_some() == gen.is_some() {
        bail!("provide exactly one of --dist or --gen");
    }
    if !n.is_power_of_two() || n < 2 {
        bail!("--n must be a power of two, got {n}");
    }
    let l = n.trailing_zeros();
    let system = GapSystem::build(l, derive_seed(seed, 0xC0DE))?;
    let constants = GapConstants { c_fp, ..GapConstants::default() };
    let fixed = match dist {
        Some(path) => {
            let d = load_distribution(path)?;
            if d.dimension() != system.geo.n_total {
                bail!(
                    "distribution dimension {} does not match geometry N = {}",
                    d.dimension(),
                    system.geo.n_total
                );
            }
            Some(d)
        }
        None => None,
    };

    let records: Vec<serde_json::Value> = pool(parallelism)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let d = match (&fixed, gen) {
                    (Some(d), _) => d.clone(),
                    (None, Some(mode)) => {
                        let p = SuppHardParams {
                            n_supp: system.geo.n,
                            eta,
                            mode: match mode {
                                GenMode::Yes => SuppHardMode::Yes,
                                GenMode::No => SuppHardMode::No,
                            },
                        };
                        let base = gen_supp_hard(&p, derive_seed(seed, 2 * trial + 1)).unwrap();
                        gen_gap_distribution(&system, &base, 4, derive_seed(seed, 2 * trial + 2))
                            .unwrap()
                            .distribution
                    }
                    _ => unreachable!(),
                };
                let mut oracle = HugeObjectOracle::new(d, derive_seed(seed, 1_000_000 + trial));
                let report = alg_adaptive(
                    &mut oracle,
                    &system,
                    epsilon,
                    derive_seed(seed, 2_000_000 + trial),
                    constants,
                )
                .unwrap();
                serde_json::to_value(&report).unwrap()
            })
            .collect()
    });

    let accepts =
        records.iter().filter(|r| r["verdict"] == serde_json::json!("Accept")).count();
    if let Some(csv_path) = csv {
        let rows: Vec<Vec<String>> = records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    i.to_string(),
                    r["verdict"].to_string(),
                    r["samples_used"].to_string(),
                    r["queries_used"].to_string(),
                ]
            })
            .collect();
        write_csv(csv_path, &["trial", "verdict", "samples", "queries"], &rows)?;
    }
    let any_reject = accepts < records.len();
    let report = Report {
        record: ResultRecord {
            command: "gap-adaptive".into(),
            config: json!({
                "dist": dist.map(|p| p.display().to_string()),
                "gen": gen.map(|g| format!("{g:?}").to_lowercase()),
                "n": n, "eta": eta, "epsilon": epsilon, "c_fp": c_fp, "trials": trials,
            }),
            master_seed: seed,
            parallelism,
            trials: records,
            aggregate: json!({ "accept_rate": accepts as f64 / trials.max(1) as f64 }),
            library_version: library_version(),
            code_descriptor: Some(CodeDescriptor::of(&system)),
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    Ok(if strict && any_reject { Outcome::StrictFailure } else { Outcome::Success })
}

// --------------------------------------------------------- gen-instance ----

#[derive(Deserialize)]
struct PvcJson {
    k_rows: usize,
    ell: usize,
    ell_prime: usize,
    k_prime: usize,
    n: usize,
}

#[derive(Deserialize)]
struct GapJson {
    n: usize,
    #[serde(default = "default_eta")]
    eta: f64,
    #[serde(default = "default_z_count")]
    z_count: usize,
}

fn default_eta() -> f64 {
    1.0 / 9.0
}

fn default_z_count() -> usize {
    4
}

#[derive(Deserialize)]
struct PalJson {
    n: usize,
}

pub fn cmd_gen_instance(
    family: &str,
    params: &str,
    seed: u64,
    out: &Path,
) -> anyhow::Result<Outcome> {
    let distribution = match family {
        "pvc-yes" | "pvc-no-q" | "pvc-no-s" => {
            let p: PvcJson = serde_json::from_str(params).context("pvc params")?;
            let params = PvcParams {
                k_rows: p.k_rows,
                ell: p.ell,
                ell_prime: p.ell_prime,
                k_prime: p.k_prime,
                n: p.n,
                seed,
            };
            match family {
                "pvc-yes" => gen_pvc_yes(&params)?.distribution,
                "pvc-no-q" => gen_pvc_no_query(&params)?.distribution,
                _ => gen_pvc_no_sample(&params)?.distribution,
            }
        }
        "gap-yes" | "gap-no" => {
            let p: GapJson = serde_json::from_str(params).context("gap params")?;
            if !p.n.is_power_of_two() || p.n < 2 {
                bail!("gap n must be a power of two, got {}", p.n);
            }
            let system = GapSystem::build(p.n.trailing_zeros(), derive_seed(seed, 0xC0DE))?;
            let mode = if family == "gap-yes" { SuppHardMode::Yes } else { SuppHardMode::No };
            let base = gen_supp_hard(
                &SuppHardParams { n_supp: p.n, eta: p.eta, mode },
                derive_seed(seed, 1),
            )?;
            gen_gap_distribution(&system, &base, p.z_count, derive_seed(seed, 2))?.distribution
        }
        "pal" => {
            let p: PalJson = serde_json::from_str(params).context("pal params")?;
            let s = gen_pal_yes(p.n, seed);
            ExplicitDistribution::point_mass(encode_quad_string(&s)?)
        }
        other => bail!("unknown family {other:?}"),
    };
    distribution.save(out)?;
    println!(
        "wrote {} (dimension {}, support {})",
        out.display(),
        distribution.dimension(),
        distribution.support_size()
    );
    Ok(Outcome::Success)
}

// ---------------------------------------------------- simulate-transform ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TransformKind {
    Exp,
    Quad,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate_transform(
    tester: &str,
    transform: TransformKind,
    n: usize,
    trials: u64,
    seed: u64,
    parallelism: usize,
    out: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    let t = builtin_tester(tester, n)?;
    let sim = match transform {
        TransformKind::Exp => exponential_sim(&t)?,
        TransformKind::Quad => quadratic_sim(&t, n)?,
    };

    // demo target: a vector and its complement (in the complement-pair
    // property; a reasonable mixed input for the other builtins)
    let demo = {
        let mut rng = hugeobject::seeding::rng_from_seed(derive_seed(seed, 0xD1));
        let v = BitVector::random(n, &mut rng);
        let w = BitVector::new(v.as_slice().iter().map(|b| b ^ 1).collect()).unwrap();
        ExplicitDistribution::uniform(vec![v, w]).unwrap()
    };

    let records: Vec<serde_json::Value> = pool(parallelism)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let oracle_seed = derive_seed(seed, trial);
                let run_seed = derive_seed(oracle_seed, 9);
                let mut o1 = HugeObjectOracle::new(demo.clone(), oracle_seed);
                let mut o2 = HugeObjectOracle::new(demo.clone(), oracle_seed);
                let r1 = run_tester(&t, &mut o1, run_seed).unwrap();
                let r2 = run_tester(&sim, &mut o2, run_seed).unwrap();
                json!({
                    "original": format!("{:?}", r1.verdict),
                    "simulated": format!("{:?}", r2.verdict),
                    "original_queries": o1.queries_made(),
                    "simulated_queries": o2.queries_made(),
                })
            })
            .collect()
    });

    let agreement = records
        .iter()
        .filter(|r| r["original"] == r["simulated"])
        .count() as f64
        / trials.max(1) as f64;
    let nonadaptive = (0..10).all(|s| verify_nonadaptive(&sim, n, s).unwrap_or(false));
    let report = Report {
        record: ResultRecord {
            command: "simulate-transform".into(),
            config: json!({
                "tester": tester, "transform": format!("{transform:?}").to_lowercase(),
                "n": n, "trials": trials,
                "declared_samples": t.declared_samples,
                "declared_queries": t.declared_queries,
            }),
            master_seed: seed,
            parallelism,
            trials: records,
            aggregate: json!({ "agreement": agreement, "simulated_nonadaptive": nonadaptive }),
            library_version: library_version(),
            code_descriptor: None,
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    Ok(Outcome::Success)
}

// --------------------------------------------------------- verify-codes ----

pub fn cmd_verify_codes(l: u32, seed: u64, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let started = Instant::now();
    let system = GapSystem::build(l, seed)?;
    let geo = &system.geo;

    // round-trip and distance spot checks
    let mut rng = hugeobject::seeding::rng_from_seed(derive_seed(seed, 1));
    use rand::Rng;
    let mut round_trips_ok = true;
    let mut min_seen = usize::MAX;
    let mut previous: Option<(Vec<u16>, BitVector, BitVector)> = None;
    for _ in 0..200 {
        let z: Vec<u16> = (0..geo.m).map(|_| rng.random_range(1..=geo.n as u16)).collect();
        let x = BitVector::random(geo.n, &mut rng);
        let enc = hugeobject::codes::fe_encode(geo, &system.se, &system.ge, &z, &x)?;
        let dec = hugeobject::codes::fe_decode_all(geo, &system.se, &system.ge, &enc)?;
        round_trips_ok &= dec.payload.as_ref() == Some(&(z.clone(), x.clone()));
        if let Some((pz, px, penc)) = &previous {
            let d = hugeobject::metrics::hamming_abs(&enc, penc)?;
            if (pz, px) != (&z, &x) {
                min_seen = min_seen.min(d);
            }
        }
        previous = Some((z, x, enc));
    }
    let floor = (geo.zeta_measured * geo.zeta_measured * geo.n_total as f64 / 2.0)
        .min(geo.zeta_measured * geo.k as f64);
    let distances_ok = min_seen == usize::MAX || min_seen as f64 >= floor;

    let report = Report {
        record: ResultRecord {
            command: "verify-codes".into(),
            config: json!({ "l": l }),
            master_seed: seed,
            parallelism: 1,
            trials: vec![json!({
                "round_trips_ok": round_trips_ok,
                "sampled_min_distance": if min_seen == usize::MAX { serde_json::Value::Null } else { json!(min_seen) },
                "distance_floor": floor,
                "distances_ok": distances_ok,
            })],
            aggregate: json!({ "ok": round_trips_ok && distances_ok }),
            library_version: library_version(),
            code_descriptor: Some(CodeDescriptor::of(&system)),
        },
        wall_clock_ms: started.elapsed().as_millis(),
    };
    report.emit(out)?;
    if !(round_trips_ok && distances_ok) {
        bail!("code verification failed");
    }
    Ok(Outcome::Success)
}

