//! Acceptance checks. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triamalg::cli::{self, random_harness, Command, HarnessConfig, Output, RunConfig};
use triamalg::costlaws::{thompson_bound, thompson_conclusion, ten_to_minus, SQUEEZE_CONCLUSION};
use triamalg::diagram::brown_triangle;
use triamalg::fpgroup::{collapsing_triangle, gersten_stallings_sum, todd_coxeter, AngleN, EnumerationResult};
use triamalg::joins::{check_freejoin_theorem, random, RelationTriple, TriangleSystem};
use triamalg::mesrel::{
    all_partitions, refinements, regular_action, relation_from_action, relation_min_cost, FiniteMeasuredSpace,
    FiniteRelation,
};
use triamalg::perm::{PermGroup, Permutation, DEFAULT_CLOSURE_CAP};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `1 − 1/|G|` straight from the order.
fn group_cost(order: &BigInt) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), order.clone())
}

/// Minimal cost of a finite relation on a uniform space: one edge per
/// non-root point of each class.
fn uniform_cost(r: &FiniteRelation) -> BigRational {
    let n = r.point_count() as i64;
    frac(n - r.class_count() as i64, n)
}

/// Free iff the incidence graph (factor classes joined by common classes)
/// is a forest: edges = vertices − components.
fn forest_oracle(t: &RelationTriple) -> bool {
    let joined = t.r1.join(&t.r2).unwrap();
    t.r1.class_count() + t.r2.class_count() == t.r3.class_count() + joined.class_count()
}

fn criterion_1() -> Outcome {
    let d = brown_triangle(5, DEFAULT_CLOSURE_CAP).map_err(e2s)?;
    ensure(d.embedding_checks().iter().all(|&b| b), "an embedding failed")?;
    let fill = d.fillability().map_err(e2s)?;
    ensure(fill.fillable, "not fillable")?;
    ensure(fill.core_orders == [6, 6, 6], format!("core orders {:?}", fill.core_orders))?;
    ensure(d.minimality().map_err(e2s)?.iter().all(|&m| m), "not minimal")?;
    let angles = [0, 1, 2].map(|v| d.angle(v, 12));
    let angles = angles.into_iter().collect::<Result<Vec<_>, _>>().map_err(e2s)?;
    let got: Vec<AngleN> = angles.iter().map(|a| a.n).collect();
    ensure(got == [AngleN::Exact(3), AngleN::Exact(2), AngleN::Exact(3)], format!("angles {got:?}"))?;
    let thetas: Vec<String> = angles.iter().map(|a| a.theta()).collect();
    ensure(thetas == ["π/3", "π/2", "π/3"], format!("thetas {thetas:?}"))?;
    let sum = gersten_stallings_sum(&[angles[0].clone(), angles[1].clone(), angles[2].clone()]).map_err(e2s)?;
    ensure(sum.sum_exceeds_pi && sum.sum_over_pi == "7/6", format!("angle sum {}", sum.sum_over_pi))?;
    Ok(format!("cores 6,6,6; angles {}, {}, {}; sum 7π/6", thetas[0], thetas[1], thetas[2]))
}

fn criterion_2() -> Outcome {
    let p = collapsing_triangle().colimit().map_err(e2s)?;
    let index = match todd_coxeter(&p, &[], 1_000_000) {
        EnumerationResult::Index(n) => n,
        EnumerationResult::Inconclusive => return Err("inconclusive at the default cap".into()),
    };
    ensure(index == 1, format!("index {index}"))?;
    // A tiny cap must give up rather than report a wrong order.
    ensure(
        todd_coxeter(&p, &[], 10) == EnumerationResult::Inconclusive,
        "cap 10 did not report inconclusive",
    )?;
    let mut config = RunConfig::new(Command::Coset);
    config.input_path = Some(data_file("collapsing.json"));
    config.cap_cosets = 10;
    let code = cli::run(&config, &mut Vec::new(), &mut Vec::new());
    ensure(code == cli::EXIT_ERROR, format!("capped CLI run exited {code}"))?;
    Ok("index 1; cap 10 is inconclusive with exit 2".into())
}

fn criterion_3() -> Outcome {
    for p in 5..=20u64 {
        let v = [fact(p), fact(p + 1), fact(p + 2)];
        let e = [fact(p - 1), BigInt::from(2) * fact(p - 2), fact(p)];
        let ends = [(0, 1), (0, 2), (1, 2)];
        let min = ends
            .iter()
            .zip(&e)
            .map(|(&(i, j), ej)| group_cost(&v[i]) + group_cost(&v[j]) - group_cost(ej))
            .min()
            .unwrap();
        let closed = BigRational::one() - BigRational::new(BigInt::one(), fact(p + 1))
            - BigRational::new(BigInt::one(), fact(p + 2))
            + BigRational::new(BigInt::one(), fact(p));
        ensure(min == closed, format!("p={p}: pairwise minimum differs from the closed form"))?;
        let b = thompson_bound(p).map_err(e2s)?;
        ensure(b.min == min, format!("p={p}: library bound {} differs", b.min))?;
    }
    // p=5 again from the orders of the constructed groups.
    let d = brown_triangle(5, DEFAULT_CLOSURE_CAP).map_err(e2s)?;
    let vo = d.vertices.each_ref().map(|v| v.group.order() as u64);
    let eo = d.edges.each_ref().map(|e| e.group.order() as u64);
    let from_groups = triamalg::costlaws::triangle_cost_bound(vo, eo).map_err(e2s)?;
    ensure(from_groups.min == frac(2537, 2520), format!("p=5 from groups: {}", from_groups.min))?;
    ensure(thompson_bound(5).map_err(e2s)?.min == frac(2537, 2520), "p=5 from factorials")?;
    let c = thompson_conclusion(20, &ten_to_minus(15)).map_err(e2s)?;
    ensure(c.all_above_one, "a bound is not above 1")?;
    ensure(c.strictly_decreasing, "bounds not strictly decreasing")?;
    ensure(c.last_excess < ten_to_minus(15), "bound(20) - 1 is not below 1e-15")?;
    ensure(c.conclusion.as_deref() == Some(SQUEEZE_CONCLUSION), "no squeeze conclusion")?;
    Ok(format!("p=5..20 match; bound(20)-1 = {}; {}", c.last_excess, SQUEEZE_CONCLUSION))
}

fn criterion_4() -> Outcome {
    let cyc = |n: u32| Permutation::new((0..n).map(|i| (i + 1) % n).collect()).unwrap();
    let swap = |n: u32| Permutation::new((0..n).map(|i| if i < 2 { 1 - i } else { i }).collect()).unwrap();
    let groups = [
        ("Z2", vec![cyc(2)]),
        ("Z3", vec![cyc(3)]),
        ("Z4", vec![cyc(4)]),
        ("S3", vec![cyc(3), swap(3)]),
        ("S4", vec![cyc(4), swap(4)]),
        ("S5", vec![cyc(5), swap(5)]),
    ];
    let mut done = Vec::new();
    for (name, gens) in groups {
        let g = PermGroup::closure(gens[0].degree(), &gens, DEFAULT_CLOSURE_CAP).map_err(e2s)?;
        let (space, action) = regular_action(&g, 1);
        let a = relation_from_action(&g, &space, &action).map_err(e2s)?;
        ensure(a.free, format!("{name}: regular action is not free"))?;
        let cost = relation_min_cost(&a.relation, &space).map_err(e2s)?.cost;
        let expected = group_cost(&BigInt::from(g.order()));
        ensure(cost == expected, format!("{name}: cost {cost}, expected {expected}"))?;
        ensure(cost == uniform_cost(&a.relation), format!("{name}: class count oracle differs"))?;
        done.push(format!("{name} {cost}"));
    }
    Ok(done.join(", "))
}

fn triple_checks(t: &RelationTriple, counts: &mut cli::TripleCounts, forest_mismatch: &mut usize) -> Result<(), String> {
    let bound = 2 * t.point_count() + 2;
    cli::check_triple(t, bound, counts).map_err(e2s)?;
    let free = triamalg::joins::is_free_amalgamated_join(t).free;
    if free != forest_oracle(t) {
        *forest_mismatch += 1;
    }
    // Cost law against class counts on the uniform space.
    let sum = uniform_cost(&t.r1) + uniform_cost(&t.r2) - uniform_cost(&t.r3);
    let joined = uniform_cost(&t.generated());
    if joined > sum || (joined == sum) != free {
        *forest_mismatch += 1;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut counts = cli::TripleCounts::default();
    let mut mismatch = 0;
    for n in 1..=5 {
        let space = FiniteMeasuredSpace::uniform(n);
        let parts = all_partitions(n);
        for r1 in &parts {
            for r2 in &parts {
                for r3 in refinements(&r1.meet(r2).map_err(e2s)?) {
                    let t = RelationTriple::new(space.clone(), r1.clone(), r2.clone(), r3).map_err(e2s)?;
                    triple_checks(&t, &mut counts, &mut mismatch)?;
                }
            }
        }
    }
    let exhaustive = counts.checked;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..1000 {
        let n = rand::Rng::gen_range(&mut rng, 1..=10);
        let t = random::triple(&mut rng, n);
        triple_checks(&t, &mut counts, &mut mismatch)?;
    }
    let bad = counts.cost_law_failures + counts.oracle_disagreements + counts.invalid_certificates + mismatch;
    ensure(
        bad == 0,
        format!(
            "cost law {}, loop search {}, certificates {}, independent oracles {}",
            counts.cost_law_failures, counts.oracle_disagreements, counts.invalid_certificates, mismatch
        ),
    )?;
    Ok(format!(
        "{exhaustive} exhaustive + 1000 random triples, {} free, zero disagreements",
        counts.free
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut inconsistent = 0;
    let mut absorption = 0;
    for _ in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 3..=10);
        let sys: TriangleSystem = random::minimal_system(&mut rng, n);
        if sys.check_absorption().is_err() {
            absorption += 1;
        }
        if !check_freejoin_theorem(&sys, None).map_err(e2s)?.consistent {
            inconsistent += 1;
        }
    }
    ensure(inconsistent == 0, format!("{inconsistent} free-join inconsistencies"))?;
    ensure(absorption == 0, format!("{absorption} absorption failures"))?;
    let mut joins = 0;
    let mut literal = 0;
    for n in 1..=6 {
        let mut config = HarnessConfig::new(0, 0, n);
        config.exhaustive = true;
        config.failure_dir = std::env::temp_dir().join("amalg-acceptance-failures");
        let s = random_harness(&config).map_err(e2s)?;
        ensure(s.failures() == 0, format!("{n} points: {:?}", s.failure_list))?;
        ensure(s.systems.absorption_failures == 0, "absorption failure in enumeration")?;
        joins += s.systems.uniqueness_checked;
        literal += s.systems.uniqueness_literal_violations;
    }
    Ok(format!(
        "200 minimal systems consistent; uniqueness up to the common subrelation holds on {joins} joins \
         (<= 6 points, up to relabeling); literal uniqueness fails on {literal} of them"
    ))
}

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn criterion_7() -> Outcome {
    let dir = std::env::temp_dir().join(format!("amalg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(e2s)?;
    let cost_file = dir.join("cost.json");
    std::fs::write(&cost_file, r#"{"vertex_orders": [120, 720, 5040], "edge_orders": [24, 12, 120]}"#).map_err(e2s)?;
    let join_file = dir.join("join.json");
    std::fs::write(
        &join_file,
        r#"{"space": {"weights": ["1/4","1/4","1/4","1/4"]},
            "R1": {"classes": [[0,1],[2,3]]}, "R2": {"classes": [[0,2],[1,3]]}, "R3": {"classes": [[0],[1],[2],[3]]}}"#,
    )
    .map_err(e2s)?;

    let mut configs = Vec::new();
    let mut c = RunConfig::new(Command::CheckTriangle);
    c.brown = Some(5);
    c.angles = true;
    configs.push(c);
    let mut c = RunConfig::new(Command::Brown);
    c.p_max = Some(6);
    configs.push(c);
    let mut c = RunConfig::new(Command::Angle);
    c.brown = Some(5);
    configs.push(c);
    let mut c = RunConfig::new(Command::Coset);
    c.input_path = Some(data_file("collapsing.json"));
    configs.push(c);
    let mut c = RunConfig::new(Command::Cost);
    c.input_path = Some(cost_file);
    configs.push(c);
    let mut c = RunConfig::new(Command::JoinCheck);
    c.input_path = Some(join_file);
    configs.push(c);
    configs.push(RunConfig::new(Command::ThompsonCost));
    let mut c = RunConfig::new(Command::RandomCheck);
    c.failure_dir = dir.join("failures");
    configs.push(c);

    for c in &mut configs {
        c.output = Output::Json;
        let mut runs = Vec::new();
        for _ in 0..2 {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = cli::run(c, &mut out, &mut err);
            runs.push((code, out, err));
        }
        ensure(runs[0] == runs[1], format!("{:?}: outputs differ between runs", c.command))?;
        ensure(!runs[0].1.is_empty(), format!("{:?}: empty output", c.command))?;
        serde_json::from_slice::<serde_json::Value>(&runs[0].1)
            .map_err(|e| format!("{:?}: output is not JSON: {e}", c.command))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical across two runs", configs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("1 Brown triangle p=5", criterion_1, Duration::from_secs(30)),
        ("2 collapsing triangle", criterion_2, Duration::from_secs(60)),
        ("3 Thompson bound chain", criterion_3, Duration::from_secs(1)),
        ("4 finite group cost", criterion_4, Duration::from_secs(10)),
        ("5 cost-law round trip", criterion_5, Duration::from_secs(120)),
        ("6 triangle-join harnesses", criterion_6, Duration::from_secs(120)),
        ("7 determinism", criterion_7, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let slow = if took > budget {
            format!(" (over the {}s target)", budget.as_secs())
        } else {
            String::new()
        };
        match result {
            Ok(msg) => println!("criterion {name}: PASS in {took:.2?}{slow}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL in {took:.2?}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
