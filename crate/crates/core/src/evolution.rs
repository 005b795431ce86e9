//! Discrete-time noisy evolution and fidelity trajectories.

use crate::aklt::build_aklt;
use crate::channels::{apply_sweep_mpo, catalog_noise, KrausChannel};
use crate::error::{Error, Result};
use crate::mbqc::{fidelity_via_strings, GateAxis, GateSpec};
use crate::state::{DensityMpo, MPO_MAX_SITES};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Upper bound on the number of sweeps per run.
pub const MAX_STEPS: usize = 100_000;

pub const DEFAULT_P: f64 = 0.25;
pub const DEFAULT_N: usize = 7;
pub const DEFAULT_STEPS: usize = 30;

pub fn default_thetas() -> Vec<f64> {
    vec![0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0, 3.0 * PI / 4.0, PI]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub step: usize,
    pub theta: f64,
    pub axis: GateAxis,
    pub f: f64,
    pub term_zz: f64,
    pub term_xx: f64,
    pub term_xz: f64,
    pub noise: String,
    pub p: f64,
    pub n: usize,
}

/// States after `0..=steps` sweeps of the channel, starting from pure AKLT.
pub fn trajectory_states(ch: &KrausChannel, n: usize, steps: usize) -> Result<Vec<DensityMpo>> {
    if n > MPO_MAX_SITES {
        return Err(Error::SizeCap {
            what: "bulk sites",
            value: n,
            max: MPO_MAX_SITES,
        });
    }
    if steps > MAX_STEPS {
        return Err(Error::SizeCap {
            what: "steps",
            value: steps,
            max: MAX_STEPS,
        });
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(DensityMpo::from_pure(&build_aklt(n)?)?);
    for _ in 0..steps {
        let next = apply_sweep_mpo(states.last().expect("non-empty"), ch)?;
        states.push(next);
    }
    Ok(states)
}

/// Fidelity rows for every step and angle, ordered step-major.
pub fn evolve_channel(
    ch: &KrausChannel,
    noise: &str,
    n: usize,
    steps: usize,
    thetas: &[f64],
    axis: GateAxis,
) -> Result<Vec<TrajectoryRow>> {
    let states = trajectory_states(ch, n, steps)?;
    let jobs: Vec<(usize, f64)> = (0..=steps)
        .flat_map(|s| thetas.iter().map(move |&t| (s, t)))
        .collect();
    jobs.par_iter()
        .map(|&(step, theta)| {
            let b = fidelity_via_strings(&states[step], &GateSpec::new(axis, theta))?;
            Ok(TrajectoryRow {
                step,
                theta,
                axis,
                f: b.f,
                term_zz: b.term_zz,
                term_xx: b.term_xx,
                term_xz: b.term_xz,
                noise: noise.to_string(),
                p: ch.p(),
                n,
            })
        })
        .collect()
}

/// [`evolve_channel`] for a catalog noise.
pub fn evolve(
    noise_id: u8,
    p: f64,
    n: usize,
    steps: usize,
    thetas: &[f64],
    axis: GateAxis,
) -> Result<Vec<TrajectoryRow>> {
    let ch = catalog_noise(noise_id, p)?;
    evolve_channel(&ch, &noise_id.to_string(), n, steps, thetas, axis)
}

/// Long-time fidelity `(1 + cos^2 theta) / 2` under noise 1.
pub fn noise1_asymptote(theta: f64) -> f64 {
    (1.0 + theta.cos().powi(2)) / 2.0
}

pub const CSV_HEADER: &str = "step,theta,axis,F,term_zz,term_xx,term_xz,noise,p,N";

/// Shortest rendering with 12 significant digits, as C's `%.12g`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(rows: &[TrajectoryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.step,
            format_sig12(r.theta),
            r.axis,
            format_sig12(r.f),
            format_sig12(r.term_zz),
            format_sig12(r.term_xx),
            format_sig12(r.term_xz),
            r.noise,
            format_sig12(r.p),
            r.n
        )?;
    }
    Ok(())
}
