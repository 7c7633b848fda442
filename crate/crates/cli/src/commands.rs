//! Subcommand bodies. Each builds its artifact in memory; `lib` picks the sink.

use std::f64::consts::{FRAC_PI_4, PI};
use std::io::{Read, Write};

use epr_dds_core::densities::{
    joint_momentum_density_asym, joint_momentum_density_theta, momentum_density_asym, momentum_density_theta,
    MomentumPair,
};
use epr_dds_core::interferometry::{complementarity, predictability_theta, visibility_asym};
use epr_dds_core::multipath::{coherence, detector_free_coherence, distinguishability, predictability_n, PathEnsemble};
use epr_dds_core::numerics::{fit_visibility, FringeSource, SampleBatch};
use epr_dds_core::purification::{solve_theta, verify_purification, PhaseGrid};
use epr_dds_core::{AsymParams, ThetaParams};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Family, Format, GridSpec, MultipathArgs, PurifyArgs, RunConfig, ScanArgs};
use crate::error::{CliError, CliResult};
use crate::output::{write_csv, write_json, SCHEMA, TOOL, VERSION};
use crate::parallel::sample_family;

/// Cap on emitted density values.
const MAX_DENSITY_CELLS: usize = 20_000_000;
/// Fringe-aligned grids never resolve a fringe with fewer nodes than this.
const MIN_NODES_PER_FRINGE: usize = 8;

/// Numeric table, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub header: Vec<&'static str>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.header.len())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> CliResult<()> {
        match format {
            Format::Csv => write_csv(
                out,
                self.command,
                &self.params,
                &self.header,
                self.rows().map(<[f64]>::to_vec),
            ),
            Format::Json => {
                let params: serde_json::Map<String, Value> =
                    self.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                let value = json!({
                    "schema": SCHEMA,
                    "tool": TOOL,
                    "version": VERSION,
                    "command": self.command,
                    "params": params,
                    "columns": self.header,
                    "rows": self.rows().collect::<Vec<_>>(),
                });
                write_json(out, &value)
            }
        }
    }
}

/// Symmetric momentum nodes with spacing `period / 2m`, so that `p = 0`, the
/// fringe maxima and the fringe minima of `cos(2 h p)` all fall on nodes.
/// The grid reaches at least `range_sigmas * sqrt(width)` and is at least as
/// fine as `grid.points` would make it.
pub fn fringe_aligned_axis(width: f64, half_separation: f64, grid: GridSpec) -> CliResult<Vec<f64>> {
    let half = grid.range_sigmas * width.sqrt();
    let target_step = half / ((grid.points - 1) / 2) as f64;
    let step = if half_separation > 0.0 {
        let period = PI / half_separation;
        let m = ((period / (2.0 * target_step)).ceil() as usize).max(MIN_NODES_PER_FRINGE / 2);
        period / (2 * m) as f64
    } else {
        target_step
    };
    let n_half = (half / step - 1e-9).ceil() as usize;
    if 2 * n_half + 1 > MAX_DENSITY_CELLS {
        return Err(CliError::Usage(format!(
            "fringe-aligned grid would need {} points per axis",
            2 * n_half + 1
        )));
    }
    let n_half = n_half as i64;
    Ok((-n_half..=n_half).map(|j| j as f64 * step).collect())
}

fn family_axes(family: &Family) -> [(f64, f64); 2] {
    match family {
        Family::Theta(p) => [(p.a(), p.h()), (p.a(), p.h())],
        Family::Asym(p) => [(p.a(), p.h1()), (p.b(), p.h2())],
    }
}

pub fn density(cfg: &RunConfig, joint: bool) -> CliResult<Table> {
    let family = cfg
        .family
        .ok_or_else(|| CliError::Usage("density needs a state".into()))?;
    let grid = cfg.grid.ok_or_else(|| CliError::Usage("density needs a grid".into()))?;
    let [(w1, h1), (w2, h2)] = family_axes(&family);
    let p1s = fringe_aligned_axis(w1, h1, grid)?;
    let mut params = family.provenance();
    params.push(("grid_points", grid.points.to_string()));
    params.push(("range_sigmas", grid.range_sigmas.to_string()));

    if !joint {
        let f = |k: f64| match &family {
            Family::Theta(p) => momentum_density_theta(p, k),
            Family::Asym(p) => momentum_density_asym(p, k),
        };
        return Ok(Table {
            command: "density",
            params,
            header: vec!["p1", "f"],
            values: p1s.iter().flat_map(|&k| [k, f(k)]).collect(),
        });
    }

    let p2s = fringe_aligned_axis(w2, h2, grid)?;
    if p1s.len() * p2s.len() > MAX_DENSITY_CELLS {
        return Err(CliError::Usage(format!(
            "joint grid of {} x {} exceeds {MAX_DENSITY_CELLS} cells",
            p1s.len(),
            p2s.len()
        )));
    }
    let f = |mp: MomentumPair| match &family {
        Family::Theta(p) => joint_momentum_density_theta(p, mp),
        Family::Asym(p) => joint_momentum_density_asym(p, mp),
    };
    params.push(("joint", "true".into()));
    let values = p1s
        .iter()
        .flat_map(|&k1| p2s.iter().map(move |&k2| (k1, k2)))
        .flat_map(|(k1, k2)| [k1, k2, f(MomentumPair::new(k1, k2))])
        .collect();
    Ok(Table {
        command: "density",
        params,
        header: vec!["p1", "p2", "f"],
        values,
    })
}

/// `theta_k = (pi/4) k / (N - 1)` for `k = 0..N`.
pub fn scan(args: &ScanArgs) -> CliResult<Table> {
    if args.grid_points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2 for a scan".into()));
    }
    let base = ThetaParams::new(args.a, args.h, 0.0)?;
    let last = (args.grid_points - 1) as f64;
    let values = (0..args.grid_points)
        .map(|k| base.with_theta(FRAC_PI_4 * (k as f64 / last)))
        .map(|p| {
            let rec = complementarity(&p?);
            Ok([rec.theta, rec.v_simple, rec.v_envelope, rec.predictability, rec.sum_sq])
        })
        .collect::<CliResult<Vec<_>>>()?
        .concat();
    Ok(Table {
        command: "scan",
        params: vec![
            ("a", args.a.to_string()),
            ("h", args.h.to_string()),
            ("grid_points", args.grid_points.to_string()),
        ],
        header: vec!["theta", "V_simple", "V_envelope", "P", "sum_sq"],
        values,
    })
}

#[derive(Debug, Clone)]
pub struct SampleRun {
    pub batch: SampleBatch,
    pub table: Table,
    pub summary: Value,
}

pub fn sample(cfg: &RunConfig, n: usize, workers: usize) -> CliResult<SampleRun> {
    let family = cfg
        .family
        .ok_or_else(|| CliError::Usage("sample needs a state".into()))?;
    let seed = cfg
        .seed
        .ok_or_else(|| CliError::Usage("sampling needs --seed".into()))?;
    let batch = sample_family(&family, n, seed, workers)?;
    let source: FringeSource = match family {
        Family::Theta(p) => p.into(),
        Family::Asym(p) => p.into(),
    };
    let fit = fit_visibility(&batch, source)?;
    let mut params = family.provenance();
    params.push(("n", n.to_string()));
    params.push(("seed", seed.to_string()));
    let summary = json!({
        "schema": SCHEMA,
        "tool": TOOL,
        "version": VERSION,
        "command": "sample",
        "params": family.to_json(),
        "n": n,
        "seed": seed,
        "V_hat": fit.visibility_hat,
        "V_closed": source.expected_visibility(),
        "baseline": fit.baseline,
        "residual_rms": fit.residual_rms,
        "fit_bins": fit.bins,
        "acceptance_rate": batch.acceptance_rate,
    });
    let table = Table {
        command: "sample",
        params,
        header: vec!["p1", "p2"],
        values: batch.samples.iter().flat_map(|mp| [mp.p1, mp.p2]).collect(),
    };
    Ok(SampleRun { batch, table, summary })
}

pub fn purify(args: &PurifyArgs) -> CliResult<Value> {
    if args.grid_points == 0 {
        return Err(CliError::Usage("--grid-points must be positive".into()));
    }
    let params = AsymParams::new(args.a, args.h1, args.b, args.h2)?;
    let mut solved = solve_theta(&params)?;
    let grid = PhaseGrid {
        points: args.grid_points,
        ..PhaseGrid::for_params(&params)
    };
    solved.wigner_gap = Some(verify_purification(&params, &grid)?);
    Ok(json!({
        "schema": SCHEMA,
        "tool": TOOL,
        "version": VERSION,
        "command": "purify",
        "params": Family::Asym(params).to_json(),
        "theta": solved.theta,
        "sin_two_theta": solved.sin_two_theta,
        "visibility": visibility_asym(&params).visibility,
        "predictability": predictability_theta(solved.theta)?,
        "wigner_gap": solved.wigner_gap,
        "grid_points": args.grid_points,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleInput {
    amplitudes_sq: Vec<f64>,
    overlaps: Vec<Vec<f64>>,
}

pub fn multipath(input: impl Read) -> CliResult<Value> {
    let raw: EnsembleInput = serde_json::from_reader(input)?;
    let ensemble = PathEnsemble::from_probabilities(&raw.amplitudes_sq, raw.overlaps)?;
    let d = distinguishability(&ensemble)?;
    let c = coherence(&ensemble);
    let p = predictability_n(&ensemble)?;
    let c0 = detector_free_coherence(&ensemble);
    Ok(json!({
        "schema": SCHEMA,
        "tool": TOOL,
        "version": VERSION,
        "command": "multipath",
        "paths": ensemble.paths(),
        "D": d,
        "C": c,
        "P": p,
        "C_detector_free": c0,
        "residuals": {
            "D2_plus_C2_minus_1": d * d + c * c - 1.0,
            "P2_plus_C0_2_minus_1": p * p + c0 * c0 - 1.0,
        },
    }))
}

pub fn multipath_from_args(args: &MultipathArgs, stdin: impl Read) -> CliResult<Value> {
    if args.input.as_os_str() == "-" {
        multipath(stdin)
    } else {
        multipath(std::fs::File::open(&args.input)?)
    }
}
