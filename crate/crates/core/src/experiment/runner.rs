use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, StateSpec};
use super::seeds::{noise_seed, state_seed};
use super::table::{Column, Provenance, ResultTable};
use crate::basis::{bloch_decompose, build_traceless_basis, HermitianBasis};
use crate::chaos::{
    alignment_trace, fisher_series, husimi_entropy, ordered_basis_experiment_with,
    regularize_observable, Order, PhaseSpaceGrid,
};
use crate::dynamics::{heisenberg_sequence, FloquetMap, OperatorSequence};
use crate::error::{Error, Result};
use crate::spin::{build_angular_momentum, coherent_state_by_rotation, random_pure_state, AngularMomentum, PureState};
use crate::tomography::{
    design_matrix, reconstruct_records, simulate_record, DesignMatrix, ReconstructionSettings,
    StepMetrics,
};

/// Runs `cfg` on a pool of `workers` threads.
///
/// Tasks are independent and seeded from their coordinates, and results are
/// collected and reduced in task order, so the table does not depend on
/// `workers`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ResultTable> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| Runner::new(cfg)?.run())
}

/// Initial states of the ensemble, member by member.
pub fn initial_states(cfg: &ExperimentConfig, am: &AngularMomentum) -> Result<Vec<PureState>> {
    match cfg.state {
        StateSpec::Coherent { theta, phi } => Ok(vec![coherent_state_by_rotation(am, theta, phi)?]),
        StateSpec::Random { count } => (0..count)
            .map(|i| random_pure_state(am.dim(), state_seed(cfg.seed, i)))
            .collect(),
    }
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    am: AngularMomentum,
    basis: HermitianBasis,
}

fn with_context<T>(context: impl FnOnce() -> String, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Task {
        context: context(),
        source: Box::new(e),
    })
}

fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self> {
        let am = build_angular_momentum(cfg.j)?;
        let basis = build_traceless_basis(am.dim())?;
        Ok(Runner { cfg, am, basis })
    }

    fn run(&self) -> Result<ResultTable> {
        match self.cfg.kind {
            ExperimentKind::FidelityVsTime => self.fidelity(false),
            ExperimentKind::FidelityVsChaos => self.fidelity(true),
            ExperimentKind::FisherVsTime => self.fisher(),
            ExperimentKind::OrderedBasis => self.ordered(),
            ExperimentKind::AlignmentVsTime => self.alignment(),
            ExperimentKind::HusimiVsTime => self.husimi(),
        }
    }

    fn table(&self, columns: Vec<Column>) -> ResultTable {
        ResultTable::new(columns, Provenance::new(self.cfg))
    }

    /// Heisenberg sequence of `Jy` with `n` operators, for each lambda.
    fn sequences(&self, n: usize) -> Result<Vec<OperatorSequence>> {
        self.cfg
            .lambdas
            .par_iter()
            .map(|&lambda| {
                with_context(
                    || format!("lambda = {lambda}"),
                    FloquetMap::new(&self.am, self.cfg.alpha, lambda)
                        .and_then(|map| heisenberg_sequence(&map, &self.am.jy, n)),
                )
            })
            .collect()
    }

    fn designs(&self) -> Result<Vec<(OperatorSequence, DesignMatrix)>> {
        self.sequences(self.cfg.steps)?
            .into_par_iter()
            .map(|seq| {
                let design = design_matrix(&seq, &self.basis)?;
                Ok((seq, design))
            })
            .collect()
    }

    fn fidelity(&self, final_only: bool) -> Result<ResultTable> {
        let cfg = self.cfg;
        let kicks = cfg.report_kicks();
        let states = initial_states(cfg, &self.am)?;
        let designs = self.designs()?;
        let settings = ReconstructionSettings {
            epsilon: cfg.epsilon,
            ..ReconstructionSettings::default()
        };
        let tasks: Vec<(usize, usize)> = (0..cfg.lambdas.len())
            .flat_map(|l| (0..states.len()).map(move |m| (l, m)))
            .collect();
        // per task: one history per noise realization
        let histories: Vec<Vec<Vec<StepMetrics>>> = tasks
            .par_iter()
            .map(|&(l, m)| {
                let (seq, design) = &designs[l];
                let psi = &states[m];
                let rho = psi.projector();
                let run = || -> Result<Vec<Vec<StepMetrics>>> {
                    let records = (0..cfg.realizations)
                        .map(|r| simulate_record(&rho, seq, cfg.noise_spread, noise_seed(cfg.seed, m, r)))
                        .collect::<Result<Vec<_>>>()?;
                    let results = reconstruct_records(psi, design, &records, &self.basis, &kicks, &settings)?;
                    Ok(results.into_iter().map(|r| r.history).collect())
                };
                with_context(|| format!("lambda = {}, state {m}", cfg.lambdas[l]), run())
            })
            .collect::<Result<_>>()?;

        let mut columns = vec![
            Column::real("lambda"),
            Column::real("fidelity_mean"),
            Column::real("fidelity_stderr"),
            Column::real("hs_distance_mean"),
        ];
        if !final_only {
            columns.insert(0, Column::integer("kick"));
        }
        let mut table = self.table(columns);
        let per_lambda = states.len();
        for (l, &lambda) in cfg.lambdas.iter().enumerate() {
            let group = &histories[l * per_lambda..(l + 1) * per_lambda];
            for (i, &kick) in kicks.iter().enumerate() {
                if final_only && i + 1 != kicks.len() {
                    continue;
                }
                let steps: Vec<&StepMetrics> = group.iter().flatten().map(|h| &h[i]).collect();
                let fid: Vec<f64> = steps.iter().map(|s| s.fidelity).collect();
                let hs: Vec<f64> = steps.iter().map(|s| s.hs_distance).collect();
                let (f_mean, f_err) = mean_and_stderr(&fid);
                let (hs_mean, _) = mean_and_stderr(&hs);
                let mut row = vec![lambda, f_mean, f_err, hs_mean];
                if !final_only {
                    row.insert(0, kick as f64);
                }
                table.push(row);
            }
        }
        Ok(table)
    }

    fn fisher(&self) -> Result<ResultTable> {
        let cfg = self.cfg;
        let kicks = cfg.report_kicks();
        let designs = self.designs()?;
        let series: Vec<Vec<f64>> = designs
            .par_iter()
            .zip(&cfg.lambdas)
            .map(|((_, design), &lambda)| {
                with_context(
                    || format!("lambda = {lambda}"),
                    fisher_series(design, cfg.epsilon, &kicks),
                )
            })
            .collect::<Result<_>>()?;
        let mut table = self.table(vec![
            Column::integer("kick"),
            Column::real("lambda"),
            Column::real("fisher"),
        ]);
        for (values, &lambda) in series.iter().zip(&cfg.lambdas) {
            for (&kick, &j) in kicks.iter().zip(values) {
                table.push(vec![kick as f64, lambda, j]);
            }
        }
        Ok(table)
    }

    fn alignment(&self) -> Result<ResultTable> {
        let cfg = self.cfg;
        let kicks = cfg.report_kicks();
        let states = initial_states(cfg, &self.am)?;
        let blochs = states
            .iter()
            .map(|psi| bloch_decompose(&psi.projector(), &self.basis))
            .collect::<Result<Vec<_>>>()?;
        let designs = self.designs()?;
        let tasks: Vec<(usize, usize)> = (0..cfg.lambdas.len())
            .flat_map(|l| (0..states.len()).map(move |m| (l, m)))
            .collect();
        let series: Vec<Vec<f64>> = tasks
            .par_iter()
            .map(|&(l, m)| {
                with_context(
                    || format!("lambda = {}, state {m}", cfg.lambdas[l]),
                    alignment_trace(&designs[l].1, &blochs[m]).map(|(_, s)| s),
                )
            })
            .collect::<Result<_>>()?;
        let mut table = self.table(vec![
            Column::integer("kick"),
            Column::real("lambda"),
            Column::real("alignment_mean"),
            Column::real("alignment_stderr"),
        ]);
        for (l, &lambda) in cfg.lambdas.iter().enumerate() {
            let group = &series[l * states.len()..(l + 1) * states.len()];
            for &kick in &kicks {
                let values: Vec<f64> = group.iter().map(|s| s[kick]).collect();
                let (mean, err) = mean_and_stderr(&values);
                table.push(vec![kick as f64, lambda, mean, err]);
            }
        }
        Ok(table)
    }

    fn husimi(&self) -> Result<ResultTable> {
        let cfg = self.cfg;
        let kicks = cfg.report_kicks();
        let grid = PhaseSpaceGrid::for_spin(self.am.spin);
        let sequences = self.sequences(cfg.steps + 1)?;
        let tasks: Vec<(usize, usize)> = (0..cfg.lambdas.len())
            .flat_map(|l| kicks.iter().map(move |&k| (l, k)))
            .collect();
        let entropies: Vec<f64> = tasks
            .par_iter()
            .map(|&(l, k)| {
                with_context(
                    || format!("lambda = {}, kick {k}", cfg.lambdas[l]),
                    regularize_observable(&sequences[l].ops[k]).and_then(|o| husimi_entropy(&o, &grid)),
                )
            })
            .collect::<Result<_>>()?;
        let mut table = self.table(vec![
            Column::integer("kick"),
            Column::real("lambda"),
            Column::real("entropy"),
        ]);
        for (&(l, k), &s) in tasks.iter().zip(&entropies) {
            table.push(vec![k as f64, cfg.lambdas[l], s]);
        }
        Ok(table)
    }

    fn ordered(&self) -> Result<ResultTable> {
        let cfg = self.cfg;
        let states = initial_states(cfg, &self.am)?;
        let settings = ReconstructionSettings {
            epsilon: cfg.epsilon,
            ..ReconstructionSettings::default()
        };
        let tasks: Vec<(usize, Order)> = (0..states.len())
            .flat_map(|m| [(m, Order::Descending), (m, Order::Ascending)])
            .collect();
        let runs = tasks
            .par_iter()
            .map(|&(m, order)| {
                with_context(
                    || format!("state {m}, {order:?} order"),
                    ordered_basis_experiment_with(&states[m].projector(), &self.basis, order, &settings),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = self.table(vec![
            Column::integer("member"),
            Column::integer("k"),
            Column::real("bloch_descending"),
            Column::real("fidelity_descending"),
            Column::real("bloch_ascending"),
            Column::real("fidelity_ascending"),
        ]);
        for (m, pair) in runs.chunks(2).enumerate() {
            for (d, a) in pair[0].iter().zip(&pair[1]) {
                table.push(vec![
                    m as f64,
                    d.k as f64,
                    d.bloch_value,
                    d.fidelity,
                    a.bloch_value,
                    a.fidelity,
                ]);
            }
        }
        Ok(table)
    }
}
