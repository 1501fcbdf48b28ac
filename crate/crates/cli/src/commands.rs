// Copyright 2026 The weft developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use rayon::prelude::*;
use weft::bench::time_grouped_workload;
use weft::formulas::sample_count;
use weft::hamiltonian::{prefactor_bound_split, Hamiltonian, HamiltonianSplit, SplitCriterion};
use weft::oracle;
use weft::rpe::{self, SignalConfig, SignalRecord};
use weft::state::StateSpec;

use crate::report::{read_file, Report};
use crate::{BenchArgs, BoundArgs, CliError, CommonArgs, RpeArgs, SimulateArgs, SplitArgs};

const SIGNAL_HEADER: &str = "m,delta,re_z,im_z,abs_z,r,repeats,rotations,exchanges,wall_ms";

/// ε_trot below this is indistinguishable from zero at double precision;
/// the power-law fit is refused instead of fitting noise.
const NO_SIGNAL_FLOOR: f64 = 1e-10;

struct Loaded {
    hamiltonian: Hamiltonian,
    hamiltonian_text: String,
    split: HamiltonianSplit,
    initial: StateSpec,
    workers_exponent: u32,
}

fn workers_exponent(workers: u64, n: u32) -> Result<u32, CliError> {
    if workers == 0 || !workers.is_power_of_two() {
        return Err(CliError::from(weft::Error::WorkerCount(workers)));
    }
    let m = workers.trailing_zeros();
    if m >= n {
        return Err(CliError::from(weft::Error::PartitionExponent { m, n }));
    }
    Ok(m)
}

fn load(common: &CommonArgs, split_args: &SplitArgs) -> Result<Loaded, CliError> {
    let text = read_file(&common.hamiltonian)?;
    let hamiltonian = Hamiltonian::parse(&text)?;
    let n = hamiltonian.n_qubits();
    let criterion = match (split_args.ldet, split_args.lambda_r_frac) {
        (Some(c), None) => SplitCriterion::DeterministicCount(c),
        (None, Some(f)) => SplitCriterion::RandomizedFraction(f),
        (None, None) => SplitCriterion::DeterministicCount(hamiltonian.len()),
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };
    let split = hamiltonian
        .split_deterministic(criterion)?
        .with_lexicographic_deterministic();
    let initial = match &common.state {
        Some(path) => StateSpec::parse(&read_file(path)?, n)?,
        None if n <= 10 => {
            let gs = oracle::ground_state(&hamiltonian)?;
            StateSpec::from_dense(n, &gs.state)?
        }
        None => StateSpec::basis(n, 0),
    };
    Ok(Loaded {
        workers_exponent: workers_exponent(common.workers, n)?,
        hamiltonian,
        hamiltonian_text: text,
        split,
        initial,
    })
}

fn default_repeats(split: &HamiltonianSplit, requested: Option<u32>) -> u32 {
    requested.unwrap_or(if split.lambda_r() > 0.0 { 3 } else { 1 })
}

struct SignalSweep {
    delta: f64,
    samples_per_stage: u64,
    records: Vec<SignalRecord>,
}

fn run_signals(args: &SimulateArgs, loaded: &Loaded) -> Result<Vec<SignalSweep>, CliError> {
    let repeats = default_repeats(&loaded.split, args.repeats);
    if args.jobs() > 1 {
        // Errors inside the pool contain the same diagnostics; build the
        // pool lazily and only once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs())
            .build_global();
    }
    let worker = |&delta: &f64| -> Result<SignalSweep, CliError> {
        if delta <= 0.0 && loaded.split.lambda_r() > 0.0 {
            return Err(CliError::Config(format!(
                "delta must be positive for randomized splits, got {delta}"
            )));
        }
        let r = if loaded.split.lambda_r() > 0.0 {
            sample_count(
                loaded.split.lambda_r(),
                delta,
                args.rounds,
                args.kappa,
                args.reduce_samples,
            )?
        } else {
            0
        };
        let cfg = SignalConfig {
            split: &loaded.split,
            initial: &loaded.initial,
            delta,
            samples_per_stage: r,
            repeats,
            seed: args.common.seed,
            workers_exponent: loaded.workers_exponent,
            parallel: false,
        };
        let records = (0..=args.rounds)
            .map(|m| rpe::signal(&cfg, m))
            .collect::<weft::Result<Vec<_>>>()?;
        Ok(SignalSweep {
            delta,
            samples_per_stage: r,
            records,
        })
    };
    if args.jobs() > 1 {
        args.delta.par_iter().map(worker).collect()
    } else {
        args.delta.iter().map(worker).collect()
    }
}

impl SimulateArgs {
    fn jobs(&self) -> usize {
        self.common.jobs.max(1)
    }
}

fn signal_row(rec: &SignalRecord) -> String {
    format!(
        "{},{},{:.17e},{:.17e},{:.17e},{},{},{},{},{:.3}",
        rec.round,
        rec.delta,
        rec.z.re,
        rec.z.im,
        rec.z.norm(),
        rec.samples_per_stage,
        rec.repeats,
        rec.rotations,
        rec.exchanges,
        rec.wall_ms
    )
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let loaded = load(&args.common, &args.split)?;
    let sweeps = run_signals(args, &loaded)?;
    let mut report = Report::new(
        args.common.seed,
        Some((&args.common.hamiltonian, &loaded.hamiltonian_text)),
    );
    report.comment(&format!(
        "n={} L={} L_det={} lambda={:.6} lambda_R={:.6} workers={}",
        loaded.hamiltonian.n_qubits(),
        loaded.hamiltonian.len(),
        loaded.split.l_det(),
        loaded.split.lambda(),
        loaded.split.lambda_r(),
        1u64 << loaded.workers_exponent,
    ));
    report.line(SIGNAL_HEADER);
    for sweep in &sweeps {
        for rec in &sweep.records {
            report.line(&signal_row(rec));
        }
    }
    report.write(args.common.out.as_deref())
}

pub fn rpe(args: &RpeArgs) -> Result<(), CliError> {
    let sim = &args.simulate;
    let loaded = load(&sim.common, &sim.split)?;
    let n = loaded.hamiltonian.n_qubits();
    if n > 10 {
        return Err(CliError::Config(format!(
            "rpe needs an exact reference energy, available only for n <= 10 (got n = {n})"
        )));
    }
    let reference = oracle::ground_state(&loaded.hamiltonian)?;
    let sweeps = run_signals(sim, &loaded)?;

    let mut report = Report::new(
        sim.common.seed,
        Some((&sim.common.hamiltonian, &loaded.hamiltonian_text)),
    );
    report.comment(&format!(
        "n={n} L={} L_det={} lambda={:.6} lambda_R={:.6} E_ref={:.12} rounds={}",
        loaded.hamiltonian.len(),
        loaded.split.l_det(),
        loaded.split.lambda(),
        loaded.split.lambda_r(),
        reference.energy,
        sim.rounds,
    ));
    if reference.degenerate {
        report.comment("warning: reference ground state is degenerate");
    }

    report.line("delta,eps_trot,energy,rounds_used,converged,r");
    let mut fit_points = Vec::new();
    for sweep in &sweeps {
        let estimate = rpe::rpe_estimate(&sweep.records, sweep.delta)?;
        let eps = rpe::trotter_error(estimate.energy, reference.energy);
        // Convergence of the error estimate across round prefixes.
        let prefix_errors: Vec<f64> = (1..=sweep.records.len())
            .filter_map(|k| rpe::rpe_estimate(&sweep.records[..k], sweep.delta).ok())
            .map(|e| rpe::trotter_error(e.energy, reference.energy))
            .collect();
        let converged = rpe::convergence_check(&prefix_errors, args.convergence_tol)
            && !estimate.truncated;
        report.line(&format!(
            "{},{:.12e},{:.12},{},{},{}",
            sweep.delta, eps, estimate.energy, estimate.rounds_used, converged,
            sweep.samples_per_stage,
        ));
        fit_points.push((sweep.delta, eps));
    }

    let bound = prefactor_bound_split(&loaded.split);
    let enough_signal = fit_points.iter().all(|&(_, eps)| eps > NO_SIGNAL_FLOOR);
    if enough_signal && fit_points.len() >= 3 {
        let fit = rpe::fit_power_law(&fit_points).map_err(CliError::from)?;
        report.line("c_gs,a,residual,c_gs_bound,c_gs_within_bound");
        report.line(&format!(
            "{:.12e},{:.6},{:.6e},{:.12e},{}",
            fit.prefactor,
            fit.exponent,
            fit.residual,
            bound,
            fit.prefactor <= bound
        ));
    } else {
        let reason = if enough_signal {
            "fewer than 3 step sizes"
        } else {
            "no signal (eps_trot at numerical noise floor)"
        };
        report.line("c_gs,a,residual,c_gs_bound,c_gs_within_bound");
        report.line(&format!("nan,nan,nan,{bound:.12e},nan # fit rejected: {reason}"));
    }
    report.write(sim.common.out.as_deref())
}

pub fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let n = args.qubits;
    let m = workers_exponent(args.workers, n)?;
    let mut report = Report::new(args.seed, None);
    report.comment(&format!("n={n} workers={} repeats={}", args.workers, args.repeats));
    report.line("n,m,L,grouped,ms_per_rotation,exchanges");
    for &l in &args.bench_l {
        if l == 0 {
            return Err(CliError::Config("bench-L entries must be positive".into()));
        }
        for grouped in [true, false] {
            let row = time_grouped_workload(n, m, l, grouped, args.repeats, args.seed, false)?;
            report.line(&format!(
                "{},{},{},{},{:.6},{}",
                row.n, row.m, row.group_len, row.grouped, row.ms_per_rotation, row.exchanges
            ));
        }
    }
    report.write(args.out.as_deref())
}

pub fn bound(args: &BoundArgs) -> Result<(), CliError> {
    let loaded = load(&args.common, &args.split)?;
    if loaded.hamiltonian.is_empty() {
        return Err(CliError::Input("no terms: the Hamiltonian is empty".into()));
    }
    let split = &loaded.split;
    let mut report = Report::new(
        args.common.seed,
        Some((&args.common.hamiltonian, &loaded.hamiltonian_text)),
    );
    report.line("n,L,L_det,lambda,lambda_R,cgs_bound");
    report.line(&format!(
        "{},{},{},{:.12},{:.12},{:.12e}",
        loaded.hamiltonian.n_qubits(),
        loaded.hamiltonian.len(),
        split.l_det(),
        split.lambda(),
        split.lambda_r(),
        prefactor_bound_split(split)
    ));
    report.write(args.common.out.as_deref())
}
