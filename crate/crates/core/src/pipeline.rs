//! End-to-end runs: wavelet set to scaling set, filter, chosen paths and the
//! decoded dilation.

use serde::Serialize;

use crate::dynamics::{
    chosen_paths, density_check, discover_partition, graph_cycles, DensityReport, PiecewisePath,
};
use crate::encoding::{
    build_f_tilde, build_p_tilde, decode_components, scaling_relation_holds,
    verify_orthonormal_dilation, ComponentFunction, DilationReport,
};
use crate::error::Result;
use crate::filter::{build_filter, DStrategy, FilterSet};
use crate::intervals::IntervalSet;
use crate::wavelet::{scaling_set, ScalingData};
use crate::words::Cycle;

/// Iteration cap for the scaling-set fixed point.
pub const SCALING_MAX_ITER: usize = 1024;

pub const DEFAULT_J_WINDOW: u32 = 10;

/// Budgets and windows shared by the pipeline entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_splits: usize,
    pub j_window: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_splits: crate::dynamics::max_splits_from_env(),
            j_window: DEFAULT_J_WINDOW,
        }
    }
}

/// The filter, its chosen paths and the cycles they end in.
#[derive(Debug, Clone, Serialize)]
pub struct PathData {
    pub filter: FilterSet,
    pub paths: PiecewisePath,
    pub cycles: Vec<Cycle>,
    pub density: DensityReport,
}

/// Computes the chosen paths of an already built filter for the scaling set `f`.
pub fn paths_for_filter(f: &IntervalSet, filter: FilterSet, limits: Limits) -> Result<PathData> {
    let graph = discover_partition(&filter.m, limits.max_splits)?;
    let paths = chosen_paths(&filter.m, &graph)?;
    let density = density_check(&filter.m, f, &paths);
    Ok(PathData {
        cycles: graph_cycles(&graph),
        filter,
        paths,
        density,
    })
}

pub fn paths(p: &IntervalSet, strategy: &DStrategy, limits: Limits) -> Result<PathData> {
    let scaling = scaling_set(p, SCALING_MAX_ITER)?;
    let filter = build_filter(&scaling.f, strategy)?;
    paths_for_filter(&scaling.f, filter, limits)
}

/// Everything produced by [`dilate`].
#[derive(Debug, Clone, Serialize)]
pub struct Dilation {
    pub scaling: ScalingData,
    #[serde(flatten)]
    pub path_data: PathData,
    pub scaling_relation: bool,
    pub phi: ComponentFunction,
    pub psi: ComponentFunction,
    pub verification: DilationReport,
}

impl Dilation {
    pub fn filter(&self) -> &FilterSet {
        &self.path_data.filter
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.path_data.cycles
    }

    /// Cycles other than the fixed points 0 and 1.
    pub fn nonconstant_cycles(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles()
            .iter()
            .filter(|c| c.constant_digit().is_none())
    }
}

/// Decodes the dilated scaling function and super-wavelet for a given filter.
pub fn dilate_with_filter(
    scaling: ScalingData,
    filter: FilterSet,
    limits: Limits,
) -> Result<Dilation> {
    let path_data = paths_for_filter(&scaling.f, filter, limits)?;
    let f_tilde = build_f_tilde(&path_data.paths);
    let p_tilde = build_p_tilde(&f_tilde);
    let phi = decode_components(&f_tilde, &path_data.cycles)?;
    let psi = decode_components(&p_tilde, &path_data.cycles)?;
    let verification = verify_orthonormal_dilation(&psi, &scaling.p, limits.j_window);
    Ok(Dilation {
        scaling_relation: scaling_relation_holds(&f_tilde, &path_data.filter.m),
        scaling,
        path_data,
        phi,
        psi,
        verification,
    })
}

pub fn dilate(p: &IntervalSet, strategy: &DStrategy, limits: Limits) -> Result<Dilation> {
    let scaling = scaling_set(p, SCALING_MAX_ITER)?;
    let filter = build_filter(&scaling.f, strategy)?;
    dilate_with_filter(scaling, filter, limits)
}
