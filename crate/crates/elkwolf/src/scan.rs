//! Biparametric stability-region grids and one-parameter bifurcation
//! diagrams.
//!
//! Both tools recompute the coexistence state independently at every grid
//! point (no continuation), so cells and sweep values are embarrassingly
//! parallel and their results order-independent. Grids classify through the
//! Jacobian spectrum of the stability module; diagrams integrate orbits from
//! a fixed initial state and record post-transient extrema.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::equilibria::coexistence_equilibrium;
use crate::error::{Error, Result};
use crate::hopf::hopf_locate;
use crate::integrator::{attractor_extrema, converged_to, integrate, SolverOptions};
use crate::model::{ParameterSet, State, PARAMETER_NAMES};
use crate::stability::{classify_equilibrium, Classification};

/// One grid axis: a parameter name swept over an inclusive range.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    /// Number of grid values along this axis, endpoints included.
    pub resolution: usize,
}

impl AxisSpec {
    pub fn new(name: &str, lo: f64, hi: f64, resolution: usize) -> Self {
        Self {
            name: name.to_owned(),
            lo,
            hi,
            resolution,
        }
    }

    fn validate(&self, baseline: &ParameterSet<f64>) -> Result<()> {
        if !PARAMETER_NAMES.contains(&self.name.as_str()) {
            return Err(Error::UnknownParameter(self.name.clone()));
        }
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidArgument("axis range must have finite lo < hi"));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidArgument("axis resolution must be at least 2"));
        }
        // Parameter validity is interval-convex, so settable endpoints make
        // every interior grid value settable too.
        let mut probe = *baseline;
        probe.set(&self.name, self.lo)?;
        probe.set(&self.name, self.hi)?;
        Ok(())
    }

    fn value(&self, i: usize) -> f64 {
        let frac = i as f64 / (self.resolution - 1) as f64;
        self.lo + (self.hi - self.lo) * frac
    }
}

/// Cell classification on a parameter-plane grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    /// Coexistence state does not exist at these parameters.
    Absent,
    Stable,
    Unstable,
    /// Hurwitz margin inside the marginal band; traces the Hopf curve.
    Marginal,
}

impl CellClass {
    pub fn label(self) -> &'static str {
        match self {
            CellClass::Absent => "absent",
            CellClass::Stable => "stable",
            CellClass::Unstable => "unstable",
            CellClass::Marginal => "marginal",
        }
    }
}

/// One evaluated grid cell. The margins are present exactly when the
/// coexistence state exists there.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub x: f64,
    pub y: f64,
    pub class: CellClass,
    pub b1: Option<f64>,
    pub b3: Option<f64>,
    pub hurwitz_margin: Option<f64>,
}

/// Classified grid over two parameters. Cells are stored row-major in y,
/// index `iy * x_axis.resolution + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub cells: Vec<ScanCell>,
}

impl ScanGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &ScanCell {
        &self.cells[iy * self.x_axis.resolution + ix]
    }
}

fn classify_cell(baseline: &ParameterSet<f64>, x: &AxisSpec, y: &AxisSpec, ix: usize, iy: usize) -> ScanCell {
    let (xv, yv) = (x.value(ix), y.value(iy));
    let mut p = *baseline;
    p.set(&x.name, xv).expect("interior value between settable endpoints");
    p.set(&y.name, yv).expect("interior value between settable endpoints");
    let eq = coexistence_equilibrium(&p);
    if !eq.exists {
        return ScanCell {
            x: xv,
            y: yv,
            class: CellClass::Absent,
            b1: None,
            b3: None,
            hurwitz_margin: None,
        };
    }
    let report = classify_equilibrium(&p, &eq);
    let class = match report.classification {
        Classification::Unstable => CellClass::Unstable,
        Classification::Marginal => CellClass::Marginal,
        Classification::StableFocus | Classification::StableNode => CellClass::Stable,
    };
    ScanCell {
        x: xv,
        y: yv,
        class,
        b1: Some(report.charpoly.b1),
        b3: Some(report.charpoly.b3),
        hurwitz_margin: Some(report.charpoly.hurwitz_margin()),
    }
}

/// Classifies the coexistence state over a two-parameter grid. Cells never
/// fail: parameters without a coexistence state come back [`CellClass::Absent`].
pub fn biparametric_scan(
    baseline: &ParameterSet<f64>,
    x_axis: &AxisSpec,
    y_axis: &AxisSpec,
) -> Result<ScanGrid> {
    baseline.validated()?;
    x_axis.validate(baseline)?;
    y_axis.validate(baseline)?;
    if x_axis.name == y_axis.name {
        return Err(Error::InvalidArgument("grid axes must name distinct parameters"));
    }
    let (nx, ny) = (x_axis.resolution, y_axis.resolution);
    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|idx| classify_cell(baseline, x_axis, y_axis, idx % nx, idx / nx))
        .collect();
    Ok(ScanGrid {
        x_axis: x_axis.clone(),
        y_axis: y_axis.clone(),
        cells,
    })
}

/// Orbit protocol for bifurcation diagrams: one fixed initial state, a long
/// horizon, and a transient cut before extrema are collected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig {
    pub initial: State<f64>,
    pub t_end: f64,
    pub sample_count: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Fraction of the horizon discarded before extrema collection.
    pub transient_fraction: f64,
    /// Relative radius for the converged-to-coexistence test.
    pub converged_tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            initial: Vector3::new(360.0, 400.0, 15.0),
            t_end: 7000.0,
            sample_count: 7001,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            transient_fraction: 0.7,
            converged_tol: 0.01,
        }
    }
}

impl OrbitConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument("t_end must be positive and finite"));
        }
        if self.sample_count < 2 {
            return Err(Error::InvalidArgument("sample_count must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(Error::InvalidArgument("transient_fraction must lie in [0, 1)"));
        }
        if !(self.converged_tol > 0.0) || !self.converged_tol.is_finite() {
            return Err(Error::InvalidArgument("converged_tol must be positive and finite"));
        }
        Ok(())
    }

    fn solver(&self) -> SolverOptions<f64> {
        SolverOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            ..SolverOptions::default()
        }
    }
}

/// Attractor summary at one sweep value. A converged orbit keeps its extrema
/// sets empty; a failed integration records the reason instead.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationPoint {
    pub value: f64,
    /// Post-transient strict local minima per state component.
    pub minima: [Vec<f64>; 3],
    /// Post-transient strict local maxima per state component.
    pub maxima: [Vec<f64>; 3],
    pub terminal: Option<State<f64>>,
    /// Final tenth of the orbit stayed within `converged_tol` of the
    /// coexistence state.
    pub converged: bool,
    pub failure: Option<String>,
}

/// One-parameter sweep of attractor extrema, with the Hopf location overlaid
/// when the swept parameter is the outside growth rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram {
    pub parameter: String,
    pub points: Vec<BifurcationPoint>,
    pub hopf_marker: Option<f64>,
}

fn sweep_point(
    baseline: &ParameterSet<f64>,
    parameter: &str,
    value: f64,
    config: &OrbitConfig,
) -> BifurcationPoint {
    let mut p = *baseline;
    p.set(parameter, value).expect("interior value between settable endpoints");
    let empty = || [Vec::new(), Vec::new(), Vec::new()];
    match integrate(&p, config.initial, config.t_end, config.sample_count, config.solver()) {
        Err(e) => BifurcationPoint {
            value,
            minima: empty(),
            maxima: empty(),
            terminal: None,
            converged: false,
            failure: Some(e.to_string()),
        },
        Ok(orbit) => {
            let eq = coexistence_equilibrium(&p);
            let converged = eq.exists && converged_to(&orbit, &eq.point, config.converged_tol);
            let report = attractor_extrema(&orbit, config.transient_fraction);
            let (minima, maxima) = if converged {
                (empty(), empty())
            } else {
                (report.minima, report.maxima)
            };
            BifurcationPoint {
                value,
                minima,
                maxima,
                terminal: Some(report.terminal),
                converged,
                failure: None,
            }
        }
    }
}

/// Integrates one orbit per sweep value on the inclusive grid over
/// `[lo, hi]` and summarizes each attractor. Solver failures are recorded
/// per value, never propagated.
pub fn bifurcation_diagram(
    baseline: &ParameterSet<f64>,
    parameter: &str,
    lo: f64,
    hi: f64,
    steps: usize,
    config: &OrbitConfig,
) -> Result<BifurcationDiagram> {
    baseline.validated()?;
    config.validate()?;
    let axis = AxisSpec::new(parameter, lo, hi, steps);
    axis.validate(baseline)?;
    // The overlay is defined for the bifurcating parameter only; a sweep
    // range where the Hurwitz margin keeps its sign has no marker.
    let hopf_marker = if parameter == "beta" {
        hopf_locate(baseline, parameter, lo, hi)
            .ok()
            .flatten()
            .map(|h| h.beta_sharp)
    } else {
        None
    };
    let points = (0..steps)
        .into_par_iter()
        .map(|i| sweep_point(baseline, parameter, axis.value(i), config))
        .collect();
    Ok(BifurcationDiagram {
        parameter: parameter.to_owned(),
        points,
        hopf_marker,
    })
}
