//! Global sensitivity analysis by partial rank correlation over Latin
//! hypercube samples.
//!
//! Each parameter is varied around its baseline, one orbit is integrated per
//! sample, and the monotone influence of every parameter on every recorded
//! state variable is scored at each output instant: ranks replace values,
//! the other parameters' ranks are regressed out of both sides, and the
//! residual correlation is tested against zero with a t statistic.
//!
//! This module is `f64` only: rank statistics gain nothing from a generic
//! scalar and the solver tolerances are tied to double precision.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrator::{integrate, SolverOptions};
use crate::model::{boundedness_check, ParameterSet, State, PARAMETER_NAMES};

/// Significance threshold for the null hypothesis of zero correlation.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// State variable recorded as an experiment output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputVariable {
    ElkInside,
    ElkOutside,
    Wolves,
}

impl OutputVariable {
    /// Index into the state vector.
    pub fn index(self) -> usize {
        match self {
            OutputVariable::ElkInside => 0,
            OutputVariable::ElkOutside => 1,
            OutputVariable::Wolves => 2,
        }
    }

    /// Column label used in tables and CSV output.
    pub fn label(self) -> &'static str {
        match self {
            OutputVariable::ElkInside => "E",
            OutputVariable::ElkOutside => "N",
            OutputVariable::Wolves => "P",
        }
    }
}

/// Configuration of one PRCC experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PrccExperiment {
    pub baseline: ParameterSet<f64>,
    /// Parameters to vary; defaults to all eleven.
    pub varied_names: Vec<String>,
    /// Half-width of each sampling range as a fraction of the baseline
    /// value: the default reading samples `[b (1 - v), b (1 + v)]`.
    pub variation: f64,
    /// Selects the alternative range reading `[b (1 - 2v), b (1 + 2v)]`
    /// (clipped below), which reaches zero at `v = 0.5`.
    pub alternative_range: bool,
    pub n_samples: usize,
    /// Output instants, uniformly spaced over `(0, horizon]`.
    pub time_points: usize,
    pub horizon: f64,
    pub seed: u64,
    pub outputs: Vec<OutputVariable>,
    /// Initial state for every sample orbit.
    pub initial: State<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Appends an inert sampled column (range `[0.5, 1.5]`, never applied to
    /// the model) whose PRCC estimates the method's noise floor.
    pub include_dummy: bool,
}

impl Default for PrccExperiment {
    fn default() -> Self {
        PrccExperiment {
            baseline: ParameterSet::default(),
            varied_names: PARAMETER_NAMES.iter().map(|s| s.to_string()).collect(),
            variation: 0.5,
            alternative_range: false,
            n_samples: 200,
            time_points: 400,
            horizon: 400.0,
            seed: 2,
            outputs: vec![
                OutputVariable::ElkInside,
                OutputVariable::ElkOutside,
                OutputVariable::Wolves,
            ],
            initial: State::new(340.0, 380.0, 4.0),
            rel_tol: 1e-6,
            abs_tol: 1e-8,
            include_dummy: false,
        }
    }
}

impl PrccExperiment {
    /// Total sampled columns including the dummy when enabled.
    fn column_count(&self) -> usize {
        self.varied_names.len() + usize::from(self.include_dummy)
    }

    fn validate(&self) -> Result<()> {
        if self.varied_names.is_empty() {
            return Err(Error::InvalidArgument("no parameters to vary"));
        }
        for (i, name) in self.varied_names.iter().enumerate() {
            self.baseline.get(name)?;
            if self.varied_names[..i].contains(name) {
                return Err(Error::InvalidArgument("duplicate varied parameter"));
            }
        }
        if !(self.variation > 0.0 && self.variation <= 1.0) {
            return Err(Error::InvalidArgument("variation must lie in (0, 1]"));
        }
        if self.n_samples <= self.column_count() + 2 {
            return Err(Error::DegreesOfFreedom {
                n_samples: self.n_samples,
                n_parameters: self.column_count(),
            });
        }
        if self.time_points == 0 {
            return Err(Error::InvalidArgument("time_points must be at least 1"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument("horizon must be positive"));
        }
        if self.outputs.is_empty() {
            return Err(Error::InvalidArgument("no outputs requested"));
        }
        Ok(())
    }

    /// Sampling ranges for every column, dummy last.
    fn ranges(&self) -> Result<Vec<(f64, f64)>> {
        let f = self.variation * if self.alternative_range { 2.0 } else { 1.0 };
        let mut out = Vec::with_capacity(self.column_count());
        for name in &self.varied_names {
            let b = self.baseline.get(name)?;
            out.push(((b * (1.0 - f)).max(1e-12), b * (1.0 + f)));
        }
        if self.include_dummy {
            out.push((0.5, 1.5));
        }
        Ok(out)
    }
}

/// One scored (parameter, output, instant) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PrccEntry {
    pub parameter: String,
    pub output: OutputVariable,
    pub time: f64,
    pub prcc: f64,
    pub t_statistic: f64,
    pub p_value: f64,
}

/// Final-time summary per (parameter, output).
#[derive(Debug, Clone, PartialEq)]
pub struct PrccAggregate {
    pub parameter: String,
    pub output: OutputVariable,
    pub prcc: f64,
    pub t_statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// Full experiment result, ordered by (parameter, output, time).
#[derive(Debug, Clone, PartialEq)]
pub struct PrccTable {
    pub entries: Vec<PrccEntry>,
    pub aggregates: Vec<PrccAggregate>,
    pub times: Vec<f64>,
    /// Samples discarded for invalid parameter values or solver failure.
    pub dropped_samples: usize,
    /// Surviving samples whose parameters violate the boundedness condition;
    /// they are flagged, not excluded.
    pub unbounded_samples: usize,
}

/// Draws a Latin hypercube: `n` rows, one column per range, each column
/// hitting every equal-probability stratum exactly once, uniformly within
/// the stratum. Column substreams are derived from `seed` by counter, so the
/// draw is deterministic and column order independent.
pub fn lhs_sample(ranges: &[(f64, f64)], n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two samples"));
    }
    for (lo, hi) in ranges {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument("sampling range must have lo < hi"));
        }
    }
    let mut matrix = vec![vec![0.0; ranges.len()]; n];
    for (j, (lo, hi)) in ranges.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let mut strata: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            strata.swap(i, rng.random_range(0..=i));
        }
        let width = (hi - lo) / n as f64;
        for (row, stratum) in matrix.iter_mut().zip(&strata) {
            row[j] = lo + width * (*stratum as f64 + rng.random::<f64>());
        }
    }
    Ok(matrix)
}

/// Midranks (ties get the average of the ranks they occupy), 1-based.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = mid;
        }
        i = j + 1;
    }
    out
}

/// Two-sided p-value of a t statistic with `dof` degrees of freedom, through
/// the regularized incomplete beta function.
pub fn two_sided_p(t: f64, dof: f64) -> f64 {
    let x = dof / (dof + t * t);
    if x <= 0.0 {
        return 0.0;
    }
    statrs::function::beta::beta_reg(dof / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Dense lower-triangular Cholesky solve support for the small normal
/// systems; `dim` is at most the column count plus one.
struct Cholesky {
    l: Vec<f64>,
    dim: usize,
}

impl Cholesky {
    fn new(a: &[f64], dim: usize) -> Option<Cholesky> {
        let mut l = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let mut s = a[i * dim + j];
                for k in 0..j {
                    s -= l[i * dim + k] * l[j * dim + k];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l[i * dim + i] = s.sqrt();
                } else {
                    l[i * dim + j] = s / l[j * dim + j];
                }
            }
        }
        Some(Cholesky { l, dim })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        for i in 0..self.dim {
            for k in 0..i {
                x[i] = x[i] - self.l[i * self.dim + k] * x[k];
            }
            x[i] /= self.l[i * self.dim + i];
        }
        for i in (0..self.dim).rev() {
            for k in i + 1..self.dim {
                x[i] -= self.l[k * self.dim + i] * x[k];
            }
            x[i] /= self.l[i * self.dim + i];
        }
        x
    }
}

/// Per-parameter partial-regression state reused across output vectors: the
/// regressor Gram factorization and the parameter-side rank residual.
struct PartialRegressor {
    /// Rank design matrix, row major: leading 1 then the rank columns.
    z: Vec<f64>,
    n: usize,
    k: usize,
    blocks: Vec<RegressorBlock>,
}

struct RegressorBlock {
    /// Design columns regressed against (all but this parameter's).
    cols: Vec<usize>,
    chol: Cholesky,
    /// Rank residual of this parameter against the other columns.
    rx: Vec<f64>,
    sxx: f64,
}

impl PartialRegressor {
    fn new(samples: &[Vec<f64>]) -> Result<PartialRegressor> {
        let n = samples.len();
        let k = samples.first().map_or(0, Vec::len);
        if k == 0 || n == 0 {
            return Err(Error::EmptyData("sample matrix"));
        }
        if samples.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidArgument("ragged sample matrix"));
        }
        if n <= k + 2 {
            return Err(Error::DegreesOfFreedom {
                n_samples: n,
                n_parameters: k,
            });
        }
        let m = k + 1;
        let mut z = vec![0.0; n * m];
        for i in 0..n {
            z[i * m] = 1.0;
        }
        for j in 0..k {
            let col: Vec<f64> = samples.iter().map(|row| row[j]).collect();
            for (i, r) in ranks(&col).into_iter().enumerate() {
                z[i * m + 1 + j] = r;
            }
        }
        // Gram matrix of the full design, sliced per parameter below
        let mut gram = vec![0.0; m * m];
        for i in 0..n {
            let row = &z[i * m..(i + 1) * m];
            for a in 0..m {
                for b in 0..=a {
                    gram[a * m + b] += row[a] * row[b];
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                gram[a * m + b] = gram[b * m + a];
            }
        }
        let mut blocks = Vec::with_capacity(k);
        for j in 0..k {
            let cols: Vec<usize> = (0..m).filter(|&c| c != 1 + j).collect();
            let dim = cols.len();
            let mut a = vec![0.0; dim * dim];
            for (ai, &ca) in cols.iter().enumerate() {
                for (bi, &cb) in cols.iter().enumerate() {
                    a[ai * dim + bi] = gram[ca * m + cb];
                }
            }
            let chol = Cholesky::new(&a, dim).ok_or(Error::SingularRegression)?;
            let bx: Vec<f64> = cols.iter().map(|&c| gram[c * m + (1 + j)]).collect();
            let beta = chol.solve(&bx);
            let mut rx = vec![0.0; n];
            let mut sxx = 0.0;
            for i in 0..n {
                let row = &z[i * m..(i + 1) * m];
                let mut fitted = 0.0;
                for (ai, &c) in cols.iter().enumerate() {
                    fitted += beta[ai] * row[c];
                }
                rx[i] = row[1 + j] - fitted;
                sxx += rx[i] * rx[i];
            }
            if !(sxx > 0.0) {
                return Err(Error::SingularRegression);
            }
            blocks.push(RegressorBlock { cols, chol, rx, sxx });
        }
        Ok(PartialRegressor { z, n, k, blocks })
    }

    /// PRCC, t statistic, and p-value of every parameter against one output.
    fn stats_for(&self, output: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
        let y = ranks(output);
        let first = y[0];
        if y.iter().all(|&v| v == first) {
            return Err(Error::ConstantOutput);
        }
        let m = self.k + 1;
        let mut zty = vec![0.0; m];
        let mut yty = 0.0;
        for i in 0..self.n {
            let row = &self.z[i * m..(i + 1) * m];
            for a in 0..m {
                zty[a] += row[a] * y[i];
            }
            yty += y[i] * y[i];
        }
        let mean = y.iter().sum::<f64>() / self.n as f64;
        let y_total: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
        let dof = (self.n - 2 - (self.k - 1)) as f64;
        let mut out = Vec::with_capacity(self.k);
        for block in &self.blocks {
            let by: Vec<f64> = block.cols.iter().map(|&c| zty[c]).collect();
            let beta = block.chol.solve(&by);
            // residual sum of squares of y on the reduced design; the cross
            // moment needs only rx because rx is orthogonal to the design
            let explained: f64 = beta.iter().zip(&by).map(|(b, v)| b * v).sum();
            let syy = (yty - explained).max(0.0);
            if syy <= 1e-12 * y_total {
                // the other parameters explain the output exactly, so no
                // residual signal remains to correlate against
                out.push((0.0, 0.0, 1.0));
                continue;
            }
            let sxy: f64 = block.rx.iter().zip(&y).map(|(r, v)| r * v).sum();
            let r = (sxy / (block.sxx * syy).sqrt()).clamp(-1.0, 1.0);
            let t = r * (dof / (1.0 - r * r).max(0.0)).sqrt();
            out.push((r, t, two_sided_p(t, dof)));
        }
        Ok(out)
    }
}

/// Partial rank correlation of every sample column against `output`:
/// `(prcc, t_statistic, p_value)` per column.
pub fn prcc(samples: &[Vec<f64>], output: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    if output.len() != samples.len() {
        return Err(Error::InvalidArgument("output length != sample count"));
    }
    PartialRegressor::new(samples)?.stats_for(output)
}

/// Runs the full experiment: sample, integrate, score.
pub fn run_prcc_experiment(exp: &PrccExperiment) -> Result<PrccTable> {
    exp.validate()?;
    let ranges = exp.ranges()?;
    let samples = lhs_sample(&ranges, exp.n_samples, exp.seed)?;
    let options = SolverOptions {
        rel_tol: exp.rel_tol,
        abs_tol: exp.abs_tol,
        ..SolverOptions::default()
    };
    // grid instant 0 is the shared initial state and carries no rank
    // information, so outputs start one spacing in
    let sample_count = exp.time_points + 1;
    let times: Vec<f64> = (1..=exp.time_points)
        .map(|i| exp.horizon * i as f64 / exp.time_points as f64)
        .collect();

    struct SampleRun {
        row: Vec<f64>,
        unbounded: bool,
        /// outputs[o][time index]
        outputs: Vec<Vec<f64>>,
    }
    let runs: Vec<Option<SampleRun>> = samples
        .into_par_iter()
        .map(|row| {
            let mut p = exp.baseline;
            for (name, value) in exp.varied_names.iter().zip(&row) {
                if p.set(name, *value).is_err() {
                    return None;
                }
            }
            let orbit = integrate(&p, exp.initial, exp.horizon, sample_count, options).ok()?;
            let outputs = exp
                .outputs
                .iter()
                .map(|o| {
                    orbit.states[1..]
                        .iter()
                        .map(|s| s[o.index()])
                        .collect::<Vec<f64>>()
                })
                .collect();
            Some(SampleRun {
                row,
                unbounded: !boundedness_check(&p).condition_holds,
                outputs,
            })
        })
        .collect();

    let dropped_samples = runs.iter().filter(|r| r.is_none()).count();
    let kept: Vec<SampleRun> = runs.into_iter().flatten().collect();
    if kept.len() <= exp.column_count() + 2 {
        return Err(Error::DegreesOfFreedom {
            n_samples: kept.len(),
            n_parameters: exp.column_count(),
        });
    }
    let unbounded_samples = kept.iter().filter(|r| r.unbounded).count();

    let matrix: Vec<Vec<f64>> = kept.iter().map(|r| r.row.clone()).collect();
    let regressor = PartialRegressor::new(&matrix)?;
    let mut names: Vec<String> = exp.varied_names.clone();
    if exp.include_dummy {
        names.push("dummy".to_string());
    }

    // stats[o][ti][j]
    let stats: Vec<Vec<Vec<(f64, f64, f64)>>> = (0..exp.outputs.len())
        .into_par_iter()
        .map(|o| {
            (0..exp.time_points)
                .map(|ti| {
                    let y: Vec<f64> = kept.iter().map(|r| r.outputs[o][ti]).collect();
                    regressor.stats_for(&y)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut entries = Vec::with_capacity(names.len() * exp.outputs.len() * exp.time_points);
    let mut aggregates = Vec::with_capacity(names.len() * exp.outputs.len());
    for (j, name) in names.iter().enumerate() {
        for (o, output) in exp.outputs.iter().enumerate() {
            for (ti, time) in times.iter().enumerate() {
                let (r, t, p) = stats[o][ti][j];
                entries.push(PrccEntry {
                    parameter: name.clone(),
                    output: *output,
                    time: *time,
                    prcc: r,
                    t_statistic: t,
                    p_value: p,
                });
            }
            let (r, t, p) = stats[o][exp.time_points - 1][j];
            aggregates.push(PrccAggregate {
                parameter: name.clone(),
                output: *output,
                prcc: r,
                t_statistic: t,
                p_value: p,
                significant: p < SIGNIFICANCE_LEVEL,
            });
        }
    }
    Ok(PrccTable {
        entries,
        aggregates,
        times,
        dropped_samples,
        unbounded_samples,
    })
}

/// One replicate of the dummy-parameter noise-floor check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DummyReplicate {
    pub seed: u64,
    pub prcc: f64,
    pub p_value: f64,
    /// `|prcc| < 0.15` and `p > 0.05`: the inert column scored as noise.
    pub pass: bool,
}

/// Dummy-parameter replicates over consecutive seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyReport {
    pub replicates: Vec<DummyReplicate>,
    pub pass_count: usize,
}

/// Runs `replicates` experiments at consecutive seeds with the inert dummy
/// column enabled and scores its final-time PRCC on the predator output.
pub fn dummy_parameter_test(exp: &PrccExperiment, replicates: u64) -> Result<DummyReport> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate"));
    }
    let mut out = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        let mut e = exp.clone();
        e.seed = exp.seed + r;
        e.include_dummy = true;
        e.outputs = vec![OutputVariable::Wolves];
        let table = run_prcc_experiment(&e)?;
        let agg = table
            .aggregates
            .iter()
            .find(|a| a.parameter == "dummy")
            .expect("dummy column present");
        out.push(DummyReplicate {
            seed: e.seed,
            prcc: agg.prcc,
            p_value: agg.p_value,
            pass: agg.prcc.abs() < 0.15 && agg.p_value > SIGNIFICANCE_LEVEL,
        });
    }
    let pass_count = out.iter().filter(|r| r.pass).count();
    Ok(DummyReport {
        replicates: out,
        pass_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_example_matches_direct_partial_rank_computation() {
        // five samples of two parameters, values already in rank order
        let samples: Vec<Vec<f64>> = vec![
            vec![1.0, 2.0],
            vec![2.0, 1.0],
            vec![3.0, 4.0],
            vec![4.0, 5.0],
            vec![5.0, 3.0],
        ];
        let output = [1.0, 3.0, 2.0, 5.0, 4.0];
        let stats = prcc(&samples, &output).unwrap();
        let (r1, t1, p1) = stats[0];
        assert_relative_eq!(r1, 0.721687836487032, max_relative = 1e-12);
        assert_relative_eq!(t1, 1.474419561548971, max_relative = 1e-12);
        assert_relative_eq!(p1, 0.278312163512968, max_relative = 1e-10);
        // with two degrees of freedom, p reduces to 1 - |r| exactly
        assert_relative_eq!(p1, 1.0 - r1.abs(), max_relative = 1e-10);
        let (r2, t2, p2) = stats[1];
        assert_relative_eq!(r2, 1.0 / 24.0, max_relative = 1e-12);
        assert_relative_eq!(t2, 0.058976782461959, max_relative = 1e-10);
        assert_relative_eq!(p2, 0.958333333333333, max_relative = 1e-10);
    }

    #[test]
    fn p_values_match_frozen_t_distribution_references() {
        let refs = [
            (2.0, 188.0, 4.693975258176320e-2),
            (0.5, 10.0, 6.278936057429726e-1),
            (3.5, 188.0, 5.809415226199054e-4),
            (1.0, 2.0, 4.226497308103746e-1),
            (2.101, 18.0, 4.999236287796361e-2),
            (0.073, 188.0, 9.418837251220499e-1),
        ];
        for (t, dof, expected) in refs {
            let p = two_sided_p(t, dof);
            assert!(
                (p - expected).abs() < 1e-10,
                "p({t}, {dof}) = {p}, expected {expected}"
            );
            // two-sided: symmetric in t
            assert_eq!(p, two_sided_p(-t, dof));
        }
        assert_eq!(two_sided_p(0.0, 10.0), 1.0);
        assert_eq!(two_sided_p(f64::INFINITY, 10.0), 0.0);
    }

    #[test]
    fn latin_hypercube_hits_every_stratum_once() {
        let samples = lhs_sample(&[(0.0, 1.0)], 4, 7).unwrap();
        let mut hit = [false; 4];
        for row in &samples {
            assert!((0.0..1.0).contains(&row[0]));
            hit[(row[0] * 4.0) as usize] = true;
        }
        assert!(hit.iter().all(|h| *h));

        let ranges = vec![(0.0, 1.0); 11];
        let wide = lhs_sample(&ranges, 200, 1).unwrap();
        for j in 0..11 {
            let mut strata: Vec<usize> = wide.iter().map(|r| (r[j] * 200.0) as usize).collect();
            strata.sort_unstable();
            assert!(strata.iter().enumerate().all(|(i, s)| i == *s));
        }
    }

    #[test]
    fn latin_hypercube_is_deterministic_and_streams_differ() {
        let ranges = [(0.0, 1.0), (5.0, 6.0)];
        let a = lhs_sample(&ranges, 16, 3).unwrap();
        let b = lhs_sample(&ranges, 16, 3).unwrap();
        assert_eq!(a, b);
        let c = lhs_sample(&ranges, 16, 4).unwrap();
        assert_ne!(a, c);
        // different columns use different substreams
        let shifted: Vec<f64> = a.iter().map(|r| r[1] - 5.0).collect();
        let first: Vec<f64> = a.iter().map(|r| r[0]).collect();
        assert_ne!(shifted, first);
    }

    #[test]
    fn column_marginals_look_uniform() {
        // Kolmogorov-Smirnov against the uniform law at the 1% level
        let ranges = vec![(0.0, 1.0); 11];
        let samples = lhs_sample(&ranges, 200, 1).unwrap();
        let critical = 1.6276 / (200.0_f64).sqrt();
        for j in 0..11 {
            let mut col: Vec<f64> = samples.iter().map(|r| r[j]).collect();
            col.sort_by(f64::total_cmp);
            let mut d: f64 = 0.0;
            for (i, v) in col.iter().enumerate() {
                d = d
                    .max((v - i as f64 / 200.0).abs())
                    .max((v - (i + 1) as f64 / 200.0).abs());
            }
            assert!(d < critical, "column {j}: D = {d}");
        }
    }

    #[test]
    fn invalid_sampling_inputs_are_rejected() {
        assert!(lhs_sample(&[(1.0, 0.0)], 8, 1).is_err());
        assert!(lhs_sample(&[(0.0, 1.0)], 1, 1).is_err());
        let constant = vec![vec![1.0, 2.0]; 20];
        assert!(matches!(
            prcc(&constant, &vec![0.0; 20]),
            Err(Error::ConstantOutput) | Err(Error::SingularRegression)
        ));
    }

    #[test]
    fn perfect_monotone_dependence_scores_one() {
        let ranges = vec![(0.0, 1.0); 4];
        let samples = lhs_sample(&ranges, 50, 9).unwrap();
        let output: Vec<f64> = samples.iter().map(|r| r[2]).collect();
        let stats = prcc(&samples, &output).unwrap();
        assert!(stats[2].0 > 0.99);
        assert!(stats[2].0 > 1.0 - 1e-12);
        assert!(stats[2].2 < 1e-10);
    }

    #[test]
    fn monotone_transforms_leave_the_statistics_bit_identical() {
        let ranges = vec![(0.5, 1.5); 5];
        let samples = lhs_sample(&ranges, 40, 21).unwrap();
        let output: Vec<f64> = samples
            .iter()
            .map(|r| r[0] * 2.0 - r[3] + 0.2 * r[4])
            .collect();
        let base = prcc(&samples, &output).unwrap();
        let mut cubed = samples.clone();
        for row in &mut cubed {
            row[1] = row[1].powi(3);
        }
        let transformed_x = prcc(&cubed, &output).unwrap();
        assert_eq!(base, transformed_x);
        let exp_output: Vec<f64> = output.iter().map(|v| v.exp()).collect();
        let transformed_y = prcc(&samples, &exp_output).unwrap();
        assert_eq!(base, transformed_y);
    }

    #[test]
    fn degrees_of_freedom_are_enforced() {
        let mut exp = PrccExperiment::default();
        exp.n_samples = 13;
        assert!(matches!(
            run_prcc_experiment(&exp),
            Err(Error::DegreesOfFreedom { .. })
        ));
        let samples = lhs_sample(&vec![(0.0, 1.0); 3], 5, 1).unwrap();
        assert!(prcc(&samples, &[1.0, 2.0, 3.0, 4.0, 5.0]).is_err());
    }

    fn small_experiment() -> PrccExperiment {
        let mut exp = PrccExperiment::default();
        exp.n_samples = 16;
        exp.time_points = 3;
        exp.horizon = 12.0;
        exp.rel_tol = 1e-5;
        exp.abs_tol = 1e-7;
        exp
    }

    #[test]
    fn experiment_is_deterministic_across_thread_counts() {
        let exp = small_experiment();
        let a = run_prcc_experiment(&exp).unwrap();
        let b = run_prcc_experiment(&exp).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| run_prcc_experiment(&exp).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn table_shape_and_aggregates_are_consistent() {
        let exp = small_experiment();
        let table = run_prcc_experiment(&exp).unwrap();
        assert_eq!(table.times.len(), 3);
        assert_eq!(table.entries.len(), 11 * 3 * 3);
        assert_eq!(table.aggregates.len(), 11 * 3);
        assert_eq!(table.dropped_samples, 0);
        // the threshold eta - theta1 gamma K is itself sampled, so a few
        // draws land outside the boundedness condition; they are kept
        assert!(table.unbounded_samples > 0);
        assert!(table.unbounded_samples < exp.n_samples);
        for agg in &table.aggregates {
            assert!(agg.significant == (agg.p_value < SIGNIFICANCE_LEVEL));
            let last = table
                .entries
                .iter()
                .filter(|e| e.parameter == agg.parameter && e.output == agg.output)
                .last()
                .unwrap();
            assert_eq!(agg.prcc, last.prcc);
            assert_eq!(last.time, *table.times.last().unwrap());
        }
        // ordering: parameter blocks in varied order, then output, then time
        assert_eq!(table.entries[0].parameter, "alpha");
        assert!(table.entries[0].time < table.entries[1].time);
        for e in &table.entries {
            assert!(e.prcc >= -1.0 && e.prcc <= 1.0);
            assert!(e.p_value >= 0.0 && e.p_value <= 1.0);
        }
    }

    #[test]
    fn boundedness_violations_are_flagged_not_dropped() {
        let mut exp = small_experiment();
        // raising the outside growth rate pushes part of the sampled range
        // past the boundedness threshold
        exp.baseline.beta = 0.2;
        let table = run_prcc_experiment(&exp).unwrap();
        assert!(table.unbounded_samples > 0);
        assert_eq!(table.dropped_samples, 0);
    }

    #[test]
    fn dummy_column_is_sampled_and_scored() {
        let mut exp = small_experiment();
        exp.include_dummy = true;
        let table = run_prcc_experiment(&exp).unwrap();
        assert_eq!(table.entries.len(), 12 * 3 * 3);
        assert!(table.aggregates.iter().any(|a| a.parameter == "dummy"));
        let report = dummy_parameter_test(&small_experiment(), 2).unwrap();
        assert_eq!(report.replicates.len(), 2);
        assert_eq!(report.replicates[0].seed, small_experiment().seed);
        assert!(report.pass_count <= 2);
    }
}
