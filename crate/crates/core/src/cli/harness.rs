//! Seeded property harness over random relation triples and triangle systems.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RunConfig;
use crate::costlaws::check_free_join_cost;
use crate::error::{Error, Result};
use crate::joins::{
    check_freejoin_theorem, check_reduction_theorem, default_loop_bound, find_reduced_loop,
    is_free_amalgamated_join, is_triangle_join, random, uniqueness_check, validate_reduced_loop,
    validate_triangle_loop, JoinWitness, RelationTriple, SystemFile, TriangleSystem, TripleFile,
};
use crate::mesrel::{all_partitions, refinements, FiniteMeasuredSpace, FiniteRelation};

/// Systems up to this size also get the uniqueness check.
const UNIQUENESS_MAX_POINTS: usize = 6;
/// Largest space for exhaustive enumeration of triples.
const EXHAUSTIVE_TRIPLE_MAX: usize = 6;
/// Largest space for exhaustive enumeration of systems.
const EXHAUSTIVE_SYSTEM_MAX: usize = 6;

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub seed: u64,
    pub instances: usize,
    pub points: usize,
    pub systems: usize,
    pub exhaustive: bool,
    pub loop_bound: Option<usize>,
    pub failure_dir: PathBuf,
}

impl HarnessConfig {
    pub fn new(seed: u64, instances: usize, points: usize) -> HarnessConfig {
        HarnessConfig {
            seed,
            instances,
            points,
            systems: 0,
            exhaustive: false,
            loop_bound: None,
            failure_dir: PathBuf::from("amalg-failures"),
        }
    }

    pub fn from_run(c: &RunConfig) -> HarnessConfig {
        HarnessConfig {
            seed: c.seed,
            instances: c.instances,
            points: c.points,
            systems: c.systems,
            exhaustive: c.exhaustive,
            loop_bound: c.loop_bound,
            failure_dir: c.failure_dir.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct TripleCounts {
    pub checked: usize,
    pub free: usize,
    pub cost_law_failures: usize,
    pub oracle_disagreements: usize,
    pub invalid_certificates: usize,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SystemCounts {
    pub checked: usize,
    /// Generated relations that did not form a valid system (exhaustive mode).
    pub skipped: usize,
    pub minimal: usize,
    pub triangle_joins: usize,
    pub joins_at_bound: usize,
    pub absorption_failures: usize,
    pub freejoin_inconsistent: usize,
    pub reduction_inconsistent: usize,
    pub invalid_certificates: usize,
    pub uniqueness_checked: usize,
    pub uniqueness_failures: usize,
    /// Joins where some pair has two distinct literal sequences. Reported,
    /// not counted as failures: distinctness is only meaningful up to the
    /// common subrelation.
    pub uniqueness_literal_violations: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FailureRecord {
    pub kind: &'static str,
    pub index: usize,
    pub checks: Vec<String>,
    /// Replay file, if it could be written.
    pub replay: Option<String>,
    pub write_error: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HarnessSummary {
    pub seed: u64,
    pub mode: &'static str,
    pub points: usize,
    pub loop_bound: Option<usize>,
    pub triples: TripleCounts,
    pub systems: SystemCounts,
    pub failure_list: Vec<FailureRecord>,
}

impl HarnessSummary {
    pub fn failures(&self) -> usize {
        self.failure_list.len()
    }
}

/// Checks on one triple: cost law, forest decision against loop search,
/// and certificate validity. Returns the failed check names.
pub fn check_triple(t: &RelationTriple, bound: usize, counts: &mut TripleCounts) -> Result<Vec<String>> {
    let mut failed = Vec::new();
    counts.checked += 1;
    let d = is_free_amalgamated_join(t);
    if d.free {
        counts.free += 1;
    }
    let cost = check_free_join_cost(t)?;
    if !cost.consistent {
        counts.cost_law_failures += 1;
        failed.push("cost law".to_string());
    }
    let found = find_reduced_loop(t, bound);
    if found.is_none() != d.free {
        counts.oracle_disagreements += 1;
        failed.push("loop search disagrees".to_string());
    }
    let certs_ok = match &d.witness {
        JoinWitness::Loop(c) => validate_reduced_loop(c, t),
        JoinWitness::Forest(_) => true,
    } && found.as_ref().is_none_or(|c| validate_reduced_loop(c, t));
    if !certs_ok {
        counts.invalid_certificates += 1;
        failed.push("invalid loop certificate".to_string());
    }
    Ok(failed)
}

/// Checks on one system: absorption, the free-join equivalence (minimal
/// systems), the reduction to a free join over `R`, loop certificates, and
/// uniqueness of reduced sequences on small joins.
pub fn check_system(sys: &TriangleSystem, bound: Option<usize>, counts: &mut SystemCounts) -> Result<Vec<String>> {
    let mut failed = Vec::new();
    counts.checked += 1;
    if sys.check_absorption().is_err() {
        counts.absorption_failures += 1;
        failed.push("absorption".to_string());
    }
    let verdict = is_triangle_join(sys, bound);
    if verdict.is_join() {
        counts.triangle_joins += 1;
        if verdict.status == crate::joins::SearchStatus::HoldsAtBound {
            counts.joins_at_bound += 1;
        }
    }
    let certs_ok = verdict
        .type_one_loop
        .iter()
        .chain(&verdict.type_two_loop)
        .all(|c| validate_triangle_loop(c, sys));
    if !certs_ok {
        counts.invalid_certificates += 1;
        failed.push("invalid loop certificate".to_string());
    }
    if sys.is_minimal() {
        counts.minimal += 1;
        if !check_freejoin_theorem(sys, bound)?.consistent {
            counts.freejoin_inconsistent += 1;
            failed.push("free-join equivalence".to_string());
        }
    }
    if verdict.is_join() {
        if !check_reduction_theorem(sys, bound)?.consistent() {
            counts.reduction_inconsistent += 1;
            failed.push("reduction to free join over R".to_string());
        }
        if sys.point_count() <= UNIQUENESS_MAX_POINTS {
            counts.uniqueness_checked += 1;
            let u = uniqueness_check(sys);
            if !u.holds_literally() {
                counts.uniqueness_literal_violations += 1;
            }
            if !u.holds_up_to_common() {
                counts.uniqueness_failures += 1;
                failed.push("uniqueness".to_string());
            }
        }
    }
    Ok(failed)
}

fn write_replay<T: Serialize>(dir: &Path, name: &str, value: &T) -> std::result::Result<String, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(&path, text + "\n").map_err(|e| e.to_string())?;
    Ok(path.display().to_string())
}

fn record<T: Serialize>(
    config: &HarnessConfig,
    kind: &'static str,
    index: usize,
    checks: Vec<String>,
    file: &T,
) -> FailureRecord {
    let (replay, write_error) = match write_replay(&config.failure_dir, &format!("{kind}-{index}.json"), file) {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e)),
    };
    FailureRecord {
        kind,
        index,
        checks,
        replay,
        write_error,
    }
}

/// One partition per multiset of class sizes, with classes on consecutive
/// points.
pub fn partition_shapes(n: usize) -> Vec<FiniteRelation> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            prefix.push(k);
            go(rest - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut sizes = Vec::new();
    go(n, n, &mut Vec::new(), &mut sizes);
    sizes
        .into_iter()
        .map(|s| {
            let labels = s
                .iter()
                .enumerate()
                .flat_map(|(c, &k)| std::iter::repeat_n(c as u32, k))
                .collect();
            FiniteRelation::from_labels(labels)
        })
        .collect()
}

/// Runs the harness. Sampled mode draws `instances` triples and `systems`
/// minimal systems with sizes in `1..=points` from a ChaCha8 stream seeded
/// by `seed`. Exhaustive mode enumerates every triple on exactly `points`
/// points and, for at most six points, every system up to relabeling.
pub fn random_harness(config: &HarnessConfig) -> Result<HarnessSummary> {
    if config.points == 0 || config.points > 64 {
        return Err(Error::Parse("points must be between 1 and 64".into()));
    }
    let mut summary = HarnessSummary {
        seed: config.seed,
        mode: if config.exhaustive { "exhaustive" } else { "sampled" },
        points: config.points,
        loop_bound: config.loop_bound,
        triples: TripleCounts::default(),
        systems: SystemCounts::default(),
        failure_list: Vec::new(),
    };
    let triple_bound = |n: usize| config.loop_bound.unwrap_or_else(|| default_loop_bound(n));
    let on_triple = |t: RelationTriple, index: usize, s: &mut HarnessSummary| -> Result<()> {
        let failed = check_triple(&t, triple_bound(t.point_count()), &mut s.triples)?;
        if !failed.is_empty() {
            s.failure_list.push(record(config, "triple", index, failed, &TripleFile::from_triple(&t)));
        }
        Ok(())
    };
    let on_system = |sys: TriangleSystem, index: usize, s: &mut HarnessSummary| -> Result<()> {
        let failed = check_system(&sys, config.loop_bound, &mut s.systems)?;
        if !failed.is_empty() {
            s.failure_list.push(record(config, "system", index, failed, &SystemFile::from_system(&sys)));
        }
        Ok(())
    };

    if config.exhaustive {
        let n = config.points;
        if n > EXHAUSTIVE_TRIPLE_MAX {
            return Err(Error::Parse(format!(
                "exhaustive mode supports at most {EXHAUSTIVE_TRIPLE_MAX} points"
            )));
        }
        let space = FiniteMeasuredSpace::uniform(n);
        let parts = all_partitions(n);
        let mut index = 0;
        for r1 in &parts {
            for r2 in &parts {
                for r3 in refinements(&r1.meet(r2)?) {
                    let t = RelationTriple::new(space.clone(), r1.clone(), r2.clone(), r3)?;
                    on_triple(t, index, &mut summary)?;
                    index += 1;
                }
            }
        }
        if n <= EXHAUSTIVE_SYSTEM_MAX {
            let mut index = 0;
            // Relabeling points maps systems to isomorphic systems, so E1 only
            // needs one representative per shape.
            for e1 in &partition_shapes(n) {
                for e2 in &parts {
                    for e3 in &parts {
                        match TriangleSystem::new(space.clone(), [e1.clone(), e2.clone(), e3.clone()]) {
                            Ok(sys) => on_system(sys, index, &mut summary)?,
                            Err(_) => summary.systems.skipped += 1,
                        }
                        index += 1;
                    }
                }
            }
        }
        return Ok(summary);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for index in 0..config.instances {
        let n = rng.gen_range(1..=config.points);
        let t = random::triple(&mut rng, n);
        on_triple(t, index, &mut summary)?;
    }
    for index in 0..config.systems {
        let n = rng.gen_range(1..=config.points);
        let sys = random::minimal_system(&mut rng, n);
        on_system(sys, index, &mut summary)?;
    }
    Ok(summary)
}
