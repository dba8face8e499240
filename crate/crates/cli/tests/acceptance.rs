//! Acceptance gate: criteria 1 to 10, one PASS/FAIL line each.
//!
//! Lines are written straight to stdout so they survive libtest's output
//! capture and show up in plain `cargo test` logs.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ldseds_core::harness::{load_config, run_experiment, summarize};
use ldseds_core::lds::{dispersion_exact_1d, dispersion_mc, dispersion_refined, Generator, GeneratorId};
use ldseds_core::objectives::{build_objective, ObjectiveSeeds};
use ldseds_core::stats::{f_critical, friedman_modified, nemenyi_cd, ranks_with_ties};
use ldseds_core::stream::{build_stream_combined, build_stream_direct, build_stream_random, EpsilonStream, SwarmMode};
use ldseds_core::swarm::{
    clpso_step, init_swarm, pso_step, run_optimizer, ClpsoCoefficients, ClpsoExtras, ClpsoSchedule, EngineSettings,
    OptimizerConfig, PsoCoefficients, PsoSchedule, SearchSpace,
};
use ndarray::{array, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn c1_friedman() -> Outcome {
    let s = friedman_modified(&[1.60, 1.40], 15, 2).unwrap();
    let ok = (s.tau_f - 0.583).abs() <= 1e-3 && (s.chi_f - 0.600).abs() <= 1e-3;
    (ok, format!("tau_F = {:.4}, chi_F^2 = {:.4}", s.tau_f, s.chi_f))
}

fn c2_critical() -> Outcome {
    let cases = [((1, 14), 4.600), ((4, 56), 2.537), ((4, 36), 2.634)];
    let mut ok = true;
    let mut detail = Vec::new();
    for ((a, b), want) in cases {
        let got = f_critical(0.05, a, b).unwrap();
        ok &= (got - want).abs() <= 5e-3;
        detail.push(format!("F({a},{b}) = {got:.4}"));
    }
    (ok, detail.join(", "))
}

fn c3_nemenyi() -> Outcome {
    let cases = [(15, 1.575), (19, 1.399), (10, 1.929)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (m, want) in cases {
        let got = nemenyi_cd(5, m, 0.05).unwrap();
        ok &= (got - want).abs() <= 1e-2;
        detail.push(format!("m={m}: {got:.4}"));
    }
    (ok, detail.join(", "))
}

fn c4_niederreiter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut holds = 0;
    for case in 0..100 {
        let n = [8, 32, 128][case % 3];
        let points: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let x_star: f64 = rng.random();
        let best = points.iter().map(|p| (p - x_star).abs()).fold(f64::INFINITY, f64::min);
        if best <= dispersion_exact_1d(&points).unwrap().value {
            holds += 1;
        }
    }
    (holds == 100, format!("bound held in {holds}/100 cases"))
}

fn c5_dispersion() -> Outcome {
    let probes = 100_000;
    let halton = Generator::new(GeneratorId::Halton, 0).generate(256, 2).unwrap();
    let h = dispersion_mc(halton.points(), probes, 11).unwrap().value;
    let u_mean = (0..20)
        .map(|s| {
            let u = Generator::new(GeneratorId::Uniform, s).with_start_index(0).generate(256, 2).unwrap();
            dispersion_mc(u.points(), probes, 11).unwrap().value
        })
        .sum::<f64>()
        / 20.0;
    let first = h <= 0.9 * u_mean;

    // In 12 dimensions uniform probes rarely reach the far vertices where the
    // supremum sits, so the stream comparison uses the refined estimator.
    let direct = build_stream_direct(Generator::new(GeneratorId::Halton, 0), 160, 2, 2, SwarmMode::Pso).unwrap();
    let hd = dispersion_refined(direct.flatten().view(), probes, 12).unwrap().value;
    let hd_mc = dispersion_mc(direct.flatten().view(), probes, 12).unwrap().value;
    let (mut rd, mut rd_mc) = (0.0, 0.0);
    for s in 0..20 {
        let r = build_stream_random(160, 2, 2, SwarmMode::Pso, s).flatten();
        rd += dispersion_refined(r.view(), probes, 12).unwrap().value / 20.0;
        rd_mc += dispersion_mc(r.view(), probes, 12).unwrap().value / 20.0;
    }
    let second = hd < rd;
    (
        first && second,
        format!(
            "D=2: Halton {h:.4} vs uniform mean {u_mean:.4} ({:.1}% lower); 12-D stream (refined): LDSEDS1 {hd:.4} vs random mean {rd:.4} (plain MC {hd_mc:.4} vs {rd_mc:.4})",
            100.0 * (1.0 - h / u_mean)
        ),
    )
}

fn c6_marginal_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let generators = [GeneratorId::Halton, GeneratorId::ScrambledHalton, GeneratorId::Sobol, GeneratorId::HuaWang, GeneratorId::Uniform];
    let mut checked = 0usize;
    for trial in 0..40 {
        let id = generators[trial % generators.len()];
        let n = rng.random_range(1..40);
        let d = rng.random_range(1..12);
        let g = rng.random_range(1..=50);
        let mode = if trial % 2 == 0 { SwarmMode::Pso } else { SwarmMode::Clpso };
        let seed_set = Generator::new(id, rng.random()).generate(n, d).unwrap();
        let theta = seed_set.points();
        let stream = build_stream_combined(&seed_set, d, g, mode, rng.random()).unwrap();
        let sorted = |col: ndarray::ArrayView1<f64>| {
            let mut v: Vec<u64> = col.iter().map(|x| x.to_bits()).collect();
            v.sort_unstable();
            v
        };
        for b in 0..stream.block_count() {
            let block = stream.block_at(b).unwrap();
            let mut used = vec![false; d];
            for j in 0..d {
                let col = block.column(j);
                let Some(src) = (0..d).find(|&s| !used[s] && theta.column(s).iter().zip(col.iter()).all(|(a, c)| a.to_bits() == c.to_bits())) else {
                    return (false, format!("block {b} dimension {j} matches no unused seed-set dimension"));
                };
                used[src] = true;
                if sorted(col) != sorted(theta.column(src)) {
                    return (false, format!("block {b} dimension {j} marginal differs"));
                }
                checked += 1;
            }
        }
    }
    (true, format!("{checked} block dimensions matched seed-set dimensions bitwise across 40 seed sets"))
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn pso_hand_case() -> (f64, f64) {
    let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
    let eps = Array2::from_elem((1, 1), 0.5);
    let mut s = init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap();
    s.positions[[0, 0]] = 0.0;
    s.velocities[[0, 0]] = 0.1;
    s.pbest_pos[[0, 0]] = 0.2;
    s.pbest_fit[0] = sphere(&[0.2]);
    s.gbest_pos[0] = 0.4;
    s.gbest_fit = sphere(&[0.4]);
    let coeffs = PsoCoefficients { omega: 0.5, c1: 2.0, c2: 2.0 };
    let half = array![[0.5]];
    pso_step(&mut s, coeffs, half.view(), half.view(), &space, &sphere).unwrap();
    (s.velocities[[0, 0]], s.positions[[0, 0]])
}

fn clpso_hand_case() -> (f64, f64) {
    let space = SearchSpace::new(vec![-1.0], vec![1.0], 1.0).unwrap();
    let init = array![[0.5], [0.5], [0.5]];
    let mut s = init_swarm(init.view(), init.view(), &space, &sphere).unwrap();
    s.positions[[0, 0]] = 0.2;
    s.velocities[[0, 0]] = 0.0;
    s.pbest_pos[[1, 0]] = 0.8;
    s.clpso = Some(ClpsoExtras { exemplars: array![[1], [1], [0]], stagnation: vec![0; 3], pc: vec![0.05, 0.275, 0.5] });
    let eps = array![[0.5], [0.0], [0.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    clpso_step(&mut s, ClpsoCoefficients { omega: 0.5, c: 1.49445 }, eps.view(), &space, &sphere, 7, &mut rng).unwrap();
    (s.velocities[[0, 0]], s.positions[[0, 0]])
}

fn c7_engines() -> Outcome {
    let (pv, px) = pso_hand_case();
    let (cv, cx) = clpso_hand_case();
    let hand = (pv - 0.65).abs() <= 1e-12
        && (px - 0.65).abs() <= 1e-12
        && (cv - 0.448335).abs() <= 1e-12
        && (cx - 0.648335).abs() <= 1e-12;

    let ids = ["sphere_sr", "f01_zakharov_sr", "f03_rastrigin_sr", "f05_lunacek_bi_rastrigin_sr", "f07_levy_sr", "f04_expanded_schaffer_f6_sr"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut monotone = 0;
    for run in 0..1000 {
        let d = rng.random_range(2..6);
        let n = rng.random_range(3..12);
        let g = rng.random_range(1..25);
        let clpso = run % 2 == 1;
        let mode = if clpso { SwarmMode::Clpso } else { SwarmMode::Pso };
        let objective = build_objective(ids[run % ids.len()], d, ObjectiveSeeds { shift: rng.random(), rotation: rng.random(), permutation: 0 }).unwrap();
        let stream: EpsilonStream = match run % 3 {
            0 => build_stream_random(n, d, g, mode, rng.random()),
            1 => build_stream_combined(&Generator::new(GeneratorId::ScrambledHalton, rng.random()).generate(n, d).unwrap(), d, g, mode, rng.random()).unwrap(),
            _ => build_stream_direct(Generator::new(GeneratorId::Sobol, 0).with_start_index(rng.random_range(0..1000)), n, d, g, mode).unwrap(),
        };
        let engine = if clpso { EngineSettings::Clpso(ClpsoSchedule::default()) } else { EngineSettings::Pso(PsoSchedule::default()) };
        let config = OptimizerConfig { engine, horizon: g, space: objective.search_space() };
        let record = run_optimizer(&config, &objective, &stream, rng.random()).unwrap();
        if record.curve.windows(2).all(|w| w[1] <= w[0]) {
            monotone += 1;
        }
    }
    (
        hand && monotone == 1000,
        format!("PSO v=x={pv:.6}, CLPSO v={cv:.6} x={cx:.6}; {monotone}/1000 gbest curves non-increasing"),
    )
}

fn c8_trend() -> Outcome {
    let mut config = load_config(workspace_root().join("configs/pso_trend_d10.toml")).unwrap();
    let out = tempfile::tempdir().unwrap();
    config.output_dir = out.path().to_path_buf();
    let results = run_experiment(&config).unwrap();
    let summary = summarize(&results, 0.05).unwrap();
    let rand_col = summary.table.algorithms.iter().position(|a| a == "Rand").unwrap();
    let hss_col = summary.table.algorithms.iter().position(|a| a == "HSS").unwrap();
    let mut at_least_as_fast = 0;
    let mut within_margin = true;
    let mut detail = Vec::new();
    for (i, f) in summary.table.functions.iter().enumerate() {
        let r = summary.table.metric[i][rand_col];
        let h = summary.table.metric[i][hss_col];
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v}"));
        detail.push(format!("{f}: Rand {} HSS {}", fmt(r), fmt(h)));
        match (r, h) {
            (_, Some(h)) if r.is_none_or(|r| h <= r) => at_least_as_fast += 1,
            (Some(r), Some(h)) => within_margin &= h <= 1.25 * r,
            (None, None) => at_least_as_fast += 1,
            (Some(_), None) => within_margin = false,
            _ => {}
        }
    }
    (at_least_as_fast >= 1 && within_margin, detail.join("; "))
}

fn curve_bytes(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![root.join("curves")];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn c9_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_ldseds");
    let config = workspace_root().join("configs/smoke.toml");
    let tmp = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (label, jobs) in [("a", "1"), ("b", "1"), ("c", "8")] {
        let out = tmp.path().join(label);
        let status = Command::new(exe)
            .args(["run", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .args(["--jobs", jobs])
            .output()
            .unwrap();
        if !status.status.success() {
            return (false, format!("run exited with {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
        }
        outputs.push(curve_bytes(&out));
    }
    let files = outputs[0].len();
    let ok = files > 0 && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    (ok, format!("{files} curve files; rerun identical: {}; jobs 1 vs 8 identical: {}", outputs[0] == outputs[1], outputs[0] == outputs[2]))
}

fn c10_null_calibration() -> Outcome {
    let (m, k) = (15, 5);
    let tau_c = f_critical(0.05, 4, 56).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trials = 10_000;
    let mut rejections = 0;
    for _ in 0..trials {
        let mut sums = vec![0.0; k];
        for _ in 0..m {
            let row: Vec<Option<f64>> = (0..k).map(|_| Some(rng.random::<f64>())).collect();
            for (s, r) in sums.iter_mut().zip(ranks_with_ties(&row)) {
                *s += r;
            }
        }
        let avg: Vec<f64> = sums.iter().map(|s| s / m as f64).collect();
        if friedman_modified(&avg, m, k).unwrap().tau_f > tau_c {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / trials as f64;
    ((rate - 0.05).abs() <= 0.02, format!("rejection rate {rate:.4} over {trials} tables (tau_c = {tau_c:.4})"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Friedman oracle", c1_friedman),
        ("F critical values", c2_critical),
        ("Nemenyi critical difference", c3_nemenyi),
        ("Niederreiter bound", c4_niederreiter),
        ("dispersion advantage", c5_dispersion),
        ("LDSEDS2 marginal invariance", c6_marginal_invariance),
        ("engine oracles", c7_engines),
        ("desk-scale trend", c8_trend),
        ("determinism", c9_determinism),
        ("Friedman null calibration", c10_null_calibration),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        let verdict = if pass { "PASS" } else { "FAIL" };
        let line = format!(
            "acceptance criterion {:>2} [{verdict}] {name}: {detail} ({:.1}s)\n",
            i + 1,
            started.elapsed().as_secs_f64()
        );
        stdout.write_all(line.as_bytes()).unwrap();
        stdout.flush().unwrap();
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
