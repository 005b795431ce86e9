//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use aklt_lab::channels::{
    catalog_noise, check_symmetry, classify_table1, random_diagonal_channel, random_tp_channel,
    GroupRep, KrausChannel, Verdict,
};
use aklt_lab::evolution::{default_thetas, evolve, noise1_asymptote, trajectory_states};
use aklt_lab::mbqc::{
    eigen_relation_signs, fidelity, identity_fidelity, pure_fidelity_closed_form, FidelityMode, GateAxis,
    GateSpec,
};
use aklt_lab::mpo_analysis::{diagonal_invariance_check, wire_matrix};
use aklt_lab::{build_aklt, DensityMpo};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn closed_form() -> Outcome {
    let start = Instant::now();
    let thetas = [0.0, PI / 8.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];
    let mut worst: f64 = 0.0;
    for n in 1..=7 {
        let state = DensityMpo::from_pure(&build_aklt(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for &theta in &thetas {
            let want = pure_fidelity_closed_form(n, theta).map_err(|e| e.to_string())?;
            for mode in [FidelityMode::Grouped, FidelityMode::Strings] {
                let got = fidelity(&state, &GateSpec::z(theta), mode).map_err(|e| e.to_string())?.f;
                worst = worst.max((got - want).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    if worst >= 1e-10 {
        return Err(format!("max |F - closed form| = {worst:.3e}"));
    }
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("max error {worst:.1e}, {elapsed:.2?}"))
}

fn identity_gate_preserved() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in [1, 2, 4] {
        let ch = catalog_noise(id, 0.25).map_err(|e| e.to_string())?;
        let states = trajectory_states(&ch, 7, 30).map_err(|e| e.to_string())?;
        for s in &states {
            let f = identity_fidelity(s).map_err(|e| e.to_string())?;
            worst = worst.max((f - 1.0).abs());
        }
    }
    if worst < 1e-8 {
        Ok(format!("noises 1,2,4 over 30 steps, max |F_I - 1| = {worst:.1e}"))
    } else {
        Err(format!("max |F_I - 1| = {worst:.3e}"))
    }
}

fn noise4_constant() -> Outcome {
    let rows = evolve(4, 0.25, 7, 30, &default_thetas(), GateAxis::Z).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in &rows {
        let want = pure_fidelity_closed_form(7, r.theta).map_err(|e| e.to_string())?;
        worst = worst.max((r.f - want).abs());
    }
    if worst < 1e-10 {
        Ok(format!("{} rows, max deviation {worst:.1e}", rows.len()))
    } else {
        Err(format!("max deviation {worst:.3e}"))
    }
}

fn final_rows(noise: u8) -> Result<Vec<(f64, f64)>, String> {
    let rows = evolve(noise, 0.25, 7, 30, &default_thetas(), GateAxis::Z).map_err(|e| e.to_string())?;
    Ok(rows.iter().filter(|r| r.step == 30).map(|r| (r.theta, r.f)).collect())
}

fn noise3_floor() -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, f) in final_rows(3)? {
        worst = worst.max((f - 0.25).abs());
    }
    if worst < 1e-3 {
        Ok(format!("step 30, max |F - 1/4| = {worst:.2e}"))
    } else {
        Err(format!("max |F - 1/4| = {worst:.3e}"))
    }
}

fn noise12_asymptotes() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for noise in [1, 2] {
        let (mut worst, mut at) = (0.0f64, 0.0);
        for (theta, f) in final_rows(noise)? {
            let err = (f - noise1_asymptote(theta)).abs();
            if err > worst {
                (worst, at) = (err, theta);
            }
        }
        ok &= worst < 1e-3;
        parts.push(format!("noise {noise}: max |F - (1+cos^2)/2| = {worst:.2e} at theta={at:.4}"));
    }
    let detail = format!("step 30, {}", parts.join("; "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn table1() -> Outcome {
    use Verdict::*;
    let expected = [(Strong, Strong), (Strong, Weak), (Weak, Strong), (Strong, Strong)];
    let rows = classify_table1(0.25).map_err(|e| e.to_string())?;
    let got: Vec<(Verdict, Verdict)> = rows.iter().map(|r| (r.z2xz2, r.time_reversal)).collect();
    if got == expected {
        let cells: Vec<String> = rows
            .iter()
            .map(|r| format!("N{}={}/{}", r.noise, r.z2xz2, r.time_reversal))
            .collect();
        Ok(cells.join(" "))
    } else {
        Err(format!("got {got:?}"))
    }
}

fn three_paths() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for id in 1..=4 {
        let ch = catalog_noise(id, 0.25).map_err(|e| e.to_string())?;
        for n in 1..=4 {
            let states = trajectory_states(&ch, n, 2).map_err(|e| e.to_string())?;
            for s in &states {
                for axis in [GateAxis::Z, GateAxis::X] {
                    for theta in [0.0, PI / 4.0, PI / 2.0] {
                        let gate = GateSpec::new(axis, theta);
                        let o = fidelity(s, &gate, FidelityMode::Oracle).map_err(|e| e.to_string())?.f;
                        let g = fidelity(s, &gate, FidelityMode::Grouped).map_err(|e| e.to_string())?.f;
                        let st = fidelity(s, &gate, FidelityMode::Strings).map_err(|e| e.to_string())?.f;
                        worst = worst.max((o - g).abs()).max((o - st).abs());
                        cases += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if worst >= 1e-10 {
        return Err(format!("max disagreement {worst:.3e}"));
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{cases} cases, max disagreement {worst:.1e}, {elapsed:.2?}"))
}

fn test_channels() -> Result<Vec<KrausChannel>, String> {
    let mut out: Vec<KrausChannel> = (1..=4)
        .map(|id| catalog_noise(id, 0.25))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for i in 0..24 {
        out.push(random_tp_channel(&mut rng, &format!("random{i}")).map_err(|e| e.to_string())?);
    }
    let w = wire_matrix();
    for i in 0..8 {
        out.push(random_diagonal_channel(&mut rng, &w, &format!("diagonal{i}")).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn diagonal_invariance() -> Outcome {
    let group = GroupRep::canonical();
    let mut positives = 0;
    for ch in test_channels()? {
        let strong = check_symmetry(&ch, &group).map_err(|e| e.to_string())?.verdict() == Verdict::Strong;
        if diagonal_invariance_check(&ch) != strong {
            return Err(format!("{} disagrees (strong = {strong})", ch.label()));
        }
        positives += strong as usize;
    }
    Ok(format!("4 catalog + 24 random TP + 8 random diagonal channels, {positives} strongly symmetric"))
}

fn strong_phase_is_one() -> Outcome {
    let group = GroupRep::canonical();
    let mut worst: f64 = 0.0;
    let mut strong_count = 0;
    for ch in test_channels()? {
        let report = check_symmetry(&ch, &group).map_err(|e| e.to_string())?;
        if report.verdict() == Verdict::Strong {
            strong_count += 1;
            for e in &report.elements {
                worst = worst.max((e.phase() - aklt_lab::tensor_core::cr(1.0)).norm());
            }
        }
    }
    if strong_count == 0 {
        return Err("no strongly symmetric channel found".into());
    }
    if worst < 1e-10 {
        Ok(format!("{strong_count} channels, max |phase - 1| = {worst:.1e}"))
    } else {
        Err(format!("max |phase - 1| = {worst:.3e}"))
    }
}

fn eigen_relations() -> Outcome {
    let expected = [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    for theta in [0.0, 0.3, PI / 2.0, 2.0] {
        let got = eigen_relation_signs(theta).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("theta={theta}: {got:?}"));
        }
    }
    Ok("patterns (+,-,-) (-,+,-) (-,-,+) at theta = 0, 0.3, pi/2, 2.0".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form pure fidelity, N=1..7", closed_form),
        ("identity gate preserved under noises 1, 2, 4", identity_gate_preserved),
        ("noise 4 fidelity step-independent", noise4_constant),
        ("noise 3 fidelity reaches 1/4", noise3_floor),
        ("noises 1, 2 reach (1+cos^2 theta)/2", noise12_asymptotes),
        ("symmetry table, eight verdicts", table1),
        ("oracle / grouped / strings agreement", three_paths),
        ("diagonal invariance iff strong symmetry", diagonal_invariance),
        ("strong Z2xZ2 phase is +1", strong_phase_is_one),
        ("projector eigen-relation signs", eigen_relations),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
