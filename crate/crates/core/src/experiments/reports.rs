//! Serializable experiment reports. Each report carries the configuration
//! that produced it (graph and representation hashes, basepoint, seed) and
//! nothing run-dependent such as timings or thread counts.

use serde::{Deserialize, Serialize};

use super::{SamplerKind, StatisticKind};
use crate::hyperbolic::HPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub graph_hash: String,
    pub representation_hash: Option<String>,
    pub basepoint: Option<HPoint>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub n: usize,
    pub sample_count: usize,
    pub statistic_kind: StatisticKind,
    pub sampler: SamplerKind,
    pub primitive_only: bool,
    pub mean: f64,
    pub variance: f64,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    pub sigma_hat: f64,
    pub ks_statistic: f64,
    /// Set by the caller once the normalized sample has been written out.
    pub normalized_sample_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub epsilon: f64,
    pub n: usize,
    pub sample_count: usize,
    pub exceed_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub epsilons: Vec<f64>,
    pub rows: Vec<DecayRow>,
}

impl DecayReport {
    /// Rows for one ε, in increasing n.
    pub fn rows_for(&self, epsilon: f64) -> Vec<&DecayRow> {
        self.rows.iter().filter(|r| r.epsilon == epsilon).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvRow {
    pub n: usize,
    pub cycles: u64,
    pub classes: u64,
    pub tv_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub rows: Vec<TvRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnRow {
    pub n: usize,
    pub m: usize,
    pub sup_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub rows: Vec<RnRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub n: usize,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    pub sigma_hat: f64,
    pub ks_statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub statistic_kind: StatisticKind,
    pub sampler: SamplerKind,
    pub sample_count: usize,
    pub rows: Vec<EstimateRow>,
    /// |L̂(n_last) − L̂(n_prev)| / L̂(n_prev); null with a single n.
    #[serde(rename = "L_relative_spread")]
    pub l_relative_spread: Option<f64>,
    pub sigma_relative_spread: Option<f64>,
    /// max over generators s of d(z, s·z), an upper bound for L̂.
    pub max_generator_displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauResidualRow {
    pub n: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauResidualReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub sample_count: usize,
    pub rows: Vec<TauResidualRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderRow {
    pub k: usize,
    pub max_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub pairs_per_k: usize,
    pub tail_length: usize,
    pub rows: Vec<HolderRow>,
    /// Least-squares slope of ln(max_difference) against k.
    pub log_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRow {
    pub n: usize,
    pub max_product: f64,
    pub mean_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub report: String,
    #[serde(flatten)]
    pub context: ReportContext,
    pub path_length: usize,
    pub sample_count: usize,
    pub rows: Vec<DefectRow>,
}

fn csv(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

impl CltReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,sample_count,statistic_kind,mean,variance,L_hat,sigma_hat,ks_statistic",
            std::iter::once(format!(
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.n,
                self.sample_count,
                serde_json::to_value(self.statistic_kind).unwrap().as_str().unwrap(),
                self.mean,
                self.variance,
                self.l_hat,
                self.sigma_hat,
                self.ks_statistic
            )),
        )
    }
}

impl DecayReport {
    pub fn to_csv(&self) -> String {
        csv(
            "epsilon,n,sample_count,exceed_fraction",
            self.rows.iter().map(|r| {
                format!("{},{},{},{:.16e}", r.epsilon, r.n, r.sample_count, r.exceed_fraction)
            }),
        )
    }
}

impl TvReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,cycles,classes,tv_distance",
            self.rows
                .iter()
                .map(|r| format!("{},{},{},{:.16e}", r.n, r.cycles, r.classes, r.tv_distance)),
        )
    }
}

impl RnReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,m,sup_deviation",
            self.rows.iter().map(|r| format!("{},{},{:.16e}", r.n, r.m, r.sup_deviation)),
        )
    }
}

impl EstimateReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,L_hat,sigma_hat,ks_statistic",
            self.rows.iter().map(|r| {
                format!("{},{:.16e},{:.16e},{:.16e}", r.n, r.l_hat, r.sigma_hat, r.ks_statistic)
            }),
        )
    }
}

impl TauResidualReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,max_residual,mean_residual",
            self.rows
                .iter()
                .map(|r| format!("{},{:.16e},{:.16e}", r.n, r.max_residual, r.mean_residual)),
        )
    }
}

impl HolderReport {
    pub fn to_csv(&self) -> String {
        csv(
            "k,max_difference",
            self.rows.iter().map(|r| format!("{},{:.16e}", r.k, r.max_difference)),
        )
    }
}

impl DefectReport {
    pub fn to_csv(&self) -> String {
        csv(
            "n,max_product,mean_product",
            self.rows
                .iter()
                .map(|r| format!("{},{:.16e},{:.16e}", r.n, r.max_product, r.mean_product)),
        )
    }
}
