//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Run with `cargo test --release --test acceptance`, optionally followed by
//! `-- 3 10` to select criteria. The three ε-sweeps go down to ε = 1e-3 with
//! 2000 replicates and dominate the runtime.

use std::process::{Command, ExitCode};
use std::time::Instant;

use msrdme::builtins::{catalytic, isomerization, Orientation, Scenario, VOXELS};
use msrdme::harness::{sweep_epsilon, sweep_h, CoupledOptions, Group, SweepResult, SweepSettings};
use msrdme::mesh::Mesh;
use msrdme::model::{Applicability, Model, RateKind, RateLaw, Rational, ReactionDef, ScaleGroup, SpeciesDef};
use msrdme::poisson::{derive_registry, ChannelId, PoissonPath};
use msrdme::Result;
use msrdme::sim::{simulate_exact, simulate_hybrid, simulate_splitstep, HybridState, SplitStepConfig};

const EPS_GRID: [f64; 5] = [1e-1, 0.031622776601683794, 1e-2, 0.0031622776601683794, 1e-3];
const H_GRID: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn settings(replicates: usize, seed: u64, sample_dt: f64) -> SweepSettings {
    SweepSettings {
        replicates,
        final_time: 1.0,
        sample_dt: Some(sample_dt),
        seed,
        options: CoupledOptions::default(),
    }
}

fn slope(r: &SweepResult, g: Group) -> f64 {
    r.slope(g).map_or(f64::NAN, |f| f.slope)
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn rms_list(r: &SweepResult, g: Group) -> String {
    let v: Vec<String> = r.points.iter().map(|p| format!("{:.4}", p.estimate(g).rms)).collect();
    v.join(", ")
}

fn isomerization_eps() -> Result<Outcome> {
    let r = sweep_epsilon(isomerization, &EPS_GRID, &settings(2000, 101, 0.25))?;
    let (a, b) = (slope(&r, Group::Meso), slope(&r, Group::Macro));
    outcome(
        r.aborted.is_none() && within(a, 0.35, 0.65) && within(b, 0.8, 1.2),
        format!("slope A = {a:.4} (want [0.35, 0.65]), slope B = {b:.4} (want [0.8, 1.2])"),
    )
}

fn convergent_eps() -> Result<Outcome> {
    let r = sweep_epsilon(|e| catalytic(e, Orientation::Convergent), &EPS_GRID, &settings(2000, 102, 0.25))?;
    let m = slope(&r, Group::Macro);
    outcome(
        r.aborted.is_none() && r.max_meso_distance == 0.0 && within(m, 0.35, 0.65),
        format!(
            "max meso squared error = {}, macro slope = {m:.4} (want [0.35, 0.65])",
            r.max_meso_distance
        ),
    )
}

fn convergent_h() -> Result<Outcome> {
    let sc = catalytic(1e-2, Orientation::Convergent).unwrap();
    let r = sweep_h(&sc, &H_GRID, &settings(5000, 103, 0.5))?;
    let m = slope(&r, Group::Macro);
    outcome(
        r.aborted.is_none() && within(m, 0.8, 1.2),
        format!("macro slope = {m:.4} (want [0.8, 1.2]), rms = [{}]", rms_list(&r, Group::Macro)),
    )
}

fn isomerization_h() -> Result<Outcome> {
    let sc = isomerization(1e-1).unwrap();
    let r = sweep_h(&sc, &H_GRID, &settings(5000, 104, 0.5))?;
    let (a, b) = (slope(&r, Group::Meso), slope(&r, Group::Macro));
    outcome(
        r.aborted.is_none() && within(a, 0.3, 0.7) && within(b, 0.75, 1.25),
        format!("meso slope = {a:.4} (want [0.3, 0.7]), macro slope = {b:.4} (want [0.75, 1.25])"),
    )
}

fn divergent_eps() -> Result<Outcome> {
    let family = |e| catalytic(e, Orientation::Divergent);
    let applicable = family(0.1).unwrap().model.predict_orders().applicable;
    let r = sweep_epsilon(family, &EPS_GRID, &settings(2000, 105, 0.25))?;
    let s = slope(&r, Group::All);
    let rms: Vec<f64> = r.points.iter().map(|p| p.estimate(Group::All).rms).collect();
    let monotone = rms.windows(2).all(|w| w[1] < w[0]);
    outcome(
        r.aborted.is_none() && applicable == Applicability::None && (s < 0.15 || !monotone),
        format!(
            "applicable = {applicable}, all-group slope = {s:.4}, monotone = {monotone}, rms = [{}]",
            rms_list(&r, Group::All)
        ),
    )
}

fn all_meso_isomerization(eps: f64) -> Scenario {
    let base = isomerization(eps).unwrap();
    let model = base.model.all_meso();
    let counts: Vec<Vec<u64>> = [(10.0, 20.0), (20.0 / eps, 10.0 / eps)]
        .iter()
        .map(|&(lo, hi)| (0..VOXELS).map(|j| if j < VOXELS / 2 { lo } else { hi }).map(|x: f64| x.round() as u64).collect())
        .collect();
    let init = HybridState::from_counts(&model, &counts).unwrap();
    Scenario {
        model,
        mesh: base.mesh,
        init,
    }
}

fn degeneracy() -> Result<Outcome> {
    let sc = all_meso_isomerization(0.1);
    let h = 0.25;
    let times: Vec<f64> = (0..=8).map(|k| k as f64 * h).collect();
    let mut mismatches = 0;
    for seed in 0..100 {
        let run = |which: u8| {
            let mut reg = derive_registry(seed, 0, &sc.model, &sc.mesh);
            let (m, g, i) = (&sc.model, &sc.mesh, &sc.init);
            match which {
                0 => simulate_exact(m, g, &mut reg, i, &times),
                1 => simulate_hybrid(m, g, &mut reg, i, &times),
                _ => simulate_splitstep(m, g, &mut reg, i, &times, SplitStepConfig::new(h)),
            }
            .unwrap()
            .states
        };
        let x = run(0);
        if run(1) != x || run(2) != x {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} of 100 seeds differ"))
}

fn poisson_statistics() -> Result<Outcome> {
    let n = 100_000;
    let counts: Vec<f64> = (0..n)
        .map(|k| {
            PoissonPath::new(2024, k, ChannelId::Reaction { reaction: 0, voxel: 0 })
                .count_up_to(3.0)
                .unwrap() as f64
        })
        .collect();
    let nf = n as f64;
    let mean = counts.iter().sum::<f64>() / nf;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let (tm, tv) = (3.0 * (3.0 / nf).sqrt(), 5.0 * (2.0 * 9.0 / nf).sqrt());
    outcome(
        (mean - 3.0).abs() < tm && (var - 3.0).abs() < tv,
        format!("mean = {mean:.5} (tol {tm:.5}), var = {var:.5} (tol {tv:.5})"),
    )
}

fn linear_death() -> Result<Outcome> {
    let n0 = 10u64;
    let int = Rational::from_integer;
    let model = Model::new(
        vec![SpeciesDef::new("A", ScaleGroup::Meso, int(0), 0.0)],
        vec![ReactionDef::new(vec![1], RateLaw::new(RateKind::Unary(0), 1.0, int(0)))],
        1.0,
    )
    .unwrap();
    let mesh = Mesh::new(vec![1.0], vec![Vec::new()], 1, None).unwrap();
    let init = HybridState::from_counts(&model, &[vec![n0]]).unwrap();
    let times = [0.5, 1.0, 2.0];
    let reps = 100_000u64;
    let mut sums = [0.0; 3];
    let mut sq = [0.0; 3];
    for rep in 0..reps {
        let mut reg = derive_registry(7, rep, &model, &mesh);
        let traj = simulate_exact(&model, &mesh, &mut reg, &init, &times).unwrap();
        for (k, st) in traj.states.iter().enumerate() {
            let x = st.meso[0] as f64;
            sums[k] += x;
            sq[k] += x * x;
        }
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, &t) in times.iter().enumerate() {
        let nf = reps as f64;
        let mean = sums[k] / nf;
        let var = (sq[k] - nf * mean * mean) / (nf - 1.0);
        let se = (var / nf).sqrt();
        let target = n0 as f64 * (-t as f64).exp();
        let z = (mean - target) / se;
        pass &= z.abs() < 3.0;
        parts.push(format!("t={t}: {mean:.4} vs {target:.4} ({z:+.2} se)"));
    }
    outcome(pass, parts.join("; "))
}

fn conservation() -> Result<Outcome> {
    let eps = 0.01;
    let sc = catalytic(eps, Orientation::Convergent).unwrap();
    let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.5).collect();
    let initial = sc.init.total_unscaled(eps);
    let (m, g, i) = (&sc.model, &sc.mesh, &sc.init);
    let drift = |states: &[HybridState]| {
        states
            .iter()
            .map(|s| ((s.total_unscaled(eps) - initial) / initial).abs())
            .fold(0.0, f64::max)
    };
    let mut reg = derive_registry(9, 0, m, g);
    let x = simulate_exact(m, g, &mut reg, i, &times).unwrap();
    let exact_drift = x
        .states
        .iter()
        .map(|s| {
            let meso: u64 = s.meso.iter().sum();
            let macro_: i64 = s.macro_values.iter().map(|v| (v / eps).round() as i64).sum();
            (meso as i64 + macro_) - initial.round() as i64
        })
        .map(i64::abs)
        .max()
        .unwrap();
    let mut reg = derive_registry(9, 0, m, g);
    let z = simulate_hybrid(m, g, &mut reg, i, &times).unwrap();
    let mut reg = derive_registry(9, 0, m, g);
    let y = simulate_splitstep(m, g, &mut reg, i, &times, SplitStepConfig::new(0.5)).unwrap();
    let (dz, dy) = (drift(&z.states), drift(&y.states));
    outcome(
        exact_drift == 0 && dz <= 1e-7 && dy <= 1e-7,
        format!("exact drift = {exact_drift} molecules, hybrid rel = {dz:.2e}, split-step rel = {dy:.2e}"),
    )
}

fn cli_reproducibility() -> Result<Outcome> {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(
        &cfg,
        r#"{"model": {"builtin": "catalytic-convergent"},
            "experiment": {"epsilon": 0.05, "eps_grid": [0.1, 0.05, 0.02], "h_grid": [0.5, 0.25, 0.125],
                           "replicates": 20, "sample_dt": 0.5, "seed": 77}}"#,
    )
    .unwrap();
    let commands = ["simulate", "sweep-epsilon", "sweep-h", "validate-mesh", "predict-orders"];
    let mut differing = Vec::new();
    for cmd in commands {
        let run = |tag: &str| {
            let out = dir.path().join(format!("{cmd}-{tag}"));
            let o = Command::new(env!("CARGO_BIN_EXE_msrdme"))
                .args([cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            let mut files = Vec::new();
            if let Ok(rd) = std::fs::read_dir(&out) {
                let mut names: Vec<_> = rd.map(|e| e.unwrap().path()).collect();
                names.sort();
                for p in names {
                    files.push((p.file_name().unwrap().to_owned(), std::fs::read(&p).unwrap()));
                }
            }
            (o.status.code(), o.stdout, files)
        };
        let (a, b) = (run("a"), run("b"));
        if a != b || a.0 != Some(0) {
            differing.push(format!("{cmd} (exit {:?}/{:?})", a.0, b.0));
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} commands compared, differing: {differing:?}", commands.len()),
    )
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("multiscale order, isomerization", isomerization_eps),
        ("multiscale order, catalytic convergent", convergent_eps),
        ("split-step order, catalytic convergent", convergent_h),
        ("split-step order, isomerization", isomerization_h),
        ("divergent scaling negative control", divergent_eps),
        ("degeneracy equivalences", degeneracy),
        ("Poisson path statistics", poisson_statistics),
        ("exact simulator, linear death", linear_death),
        ("conservation", conservation),
        ("CLI reproducibility", cli_reproducibility),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = f().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{status} [{}] {name}: {} ({:.1}s)",
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
