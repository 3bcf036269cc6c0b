//! Critical temperatures, hypothesis clustering and training trajectories.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, SyntheticSpec};
use crate::error::{Error, Result};
use crate::metrics::{Predictions, Scale};
use crate::network::HypothesisBank;
use crate::numerics::{lambda_max, sample_covariance, Matrix, SeededRng};
use crate::schedulers::Temperature;

/// Default linking radius for `count_clusters`.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 0.01;

/// Covariance summary of the targets observed at one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub covariance: Matrix,
    pub lambda_max: f64,
    /// `2 λ_max(C)`: above it the only stable configuration is full fusion.
    pub critical_temperature: f64,
    /// `trace(C)`, the distortion of a single hypothesis at the mean.
    pub d_max: f64,
    pub samples: usize,
}

pub fn critical_temperature<P: AsRef<[f64]>>(samples: &[P]) -> Result<DiagnosticsReport> {
    let covariance = sample_covariance(samples)?;
    let lambda = lambda_max(&covariance)?.max(0.0);
    Ok(DiagnosticsReport {
        lambda_max: lambda,
        critical_temperature: 2.0 * lambda,
        d_max: covariance.trace(),
        samples: samples.len(),
        covariance,
    })
}

/// `count` points evenly spaced on `[0, 1]`.
pub fn probe_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub x: f64,
    pub report: DiagnosticsReport,
}

/// Per-probe reports and the bound `2 max_x λ_max(C(x))` over the probes that
/// had enough samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalBound {
    pub probes: Vec<ProbeReport>,
    pub skipped: Vec<f64>,
    pub bound: Option<f64>,
}

pub fn global_bound(spec: &SyntheticSpec, probes: &[f64], samples_per_probe: usize, rng: &mut SeededRng) -> Result<GlobalBound> {
    spec.validate()?;
    let mut out = GlobalBound {
        probes: Vec::new(),
        skipped: Vec::new(),
        bound: None,
    };
    for &x in probes {
        let samples = spec.sample_at(x, samples_per_probe, rng);
        match critical_temperature(&samples) {
            Ok(report) => {
                out.bound = Some(out.bound.map_or(report.critical_temperature, |b: f64| b.max(report.critical_temperature)));
                out.probes.push(ProbeReport { x, report });
            }
            Err(Error::Degenerate(msg)) => {
                log::warn!("skipping probe x = {x}: {msg}");
                out.skipped.push(x);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Connected components of the graph joining hypotheses at distance `≤ radius`.
pub fn count_clusters(hypotheses: &Matrix, radius: f64) -> Result<usize> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("cluster radius must be positive, got {radius}")));
    }
    let n = hypotheses.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let r2 = radius * radius;
    let mut components = n;
    for i in 0..n {
        for j in i + 1..n {
            if crate::numerics::squared_distance(hypotheses.row(i), hypotheses.row(j)) <= r2 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                    components -= 1;
                }
            }
        }
    }
    Ok(components)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub epoch: usize,
    pub temperature: f64,
    pub hard_distortion: f64,
    pub soft_distortion: f64,
    pub free_energy: f64,
    pub entropy: f64,
    pub rate_bits: f64,
    pub cluster_count: usize,
    pub hard_wta: bool,
}

impl TrajectoryPoint {
    pub const CSV_HEADER: &'static str =
        "epoch,temperature,hard_distortion,soft_distortion,free_energy,entropy,rate_bits,cluster_count,hard_wta";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.epoch,
            self.temperature,
            self.hard_distortion,
            self.soft_distortion,
            self.free_energy,
            self.entropy,
            self.rate_bits,
            self.cluster_count,
            self.hard_wta
        )
    }
}

pub fn write_trajectory_csv<W: Write>(mut w: W, points: &[TrajectoryPoint]) -> std::io::Result<()> {
    writeln!(w, "{}", TrajectoryPoint::CSV_HEADER)?;
    for p in points {
        writeln!(w, "{}", p.csv_row())?;
    }
    Ok(())
}

/// Evaluates a bank on a fixed validation set and accumulates trajectory points.
#[derive(Debug, Clone)]
pub struct TrajectoryRecorder {
    eval: Dataset,
    probe: Vec<f64>,
    radius: f64,
    points: Vec<TrajectoryPoint>,
}

impl TrajectoryRecorder {
    /// `probe` is the input at which hypothesis clusters are counted.
    pub fn new(eval: Dataset, probe: Vec<f64>, radius: f64) -> Result<Self> {
        if eval.is_empty() {
            return Err(Error::Degenerate("trajectory evaluation set is empty".into()));
        }
        if probe.len() != eval.input_dim() {
            return Err(Error::Shape(format!(
                "probe has dimension {}, inputs have {}",
                probe.len(),
                eval.input_dim()
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("cluster radius must be positive, got {radius}")));
        }
        Ok(Self {
            eval,
            probe,
            radius,
            points: Vec::new(),
        })
    }

    pub fn record(&mut self, bank: &HypothesisBank, epoch: usize, temperature: Temperature) -> Result<TrajectoryPoint> {
        let preds = Predictions::from_bank(bank, &self.eval, Scale::Model)?;
        let t = if temperature.hard_wta { 0.0 } else { temperature.value };
        let report = preds.report(t, Scale::Model)?;
        let identity = report.soft_distortion - t * report.entropy;
        let tolerance = 1e-10 * report.free_energy.abs().max(t * report.entropy).max(1.0);
        if (report.free_energy - identity).abs() > tolerance {
            return Err(Error::Contract(format!(
                "free energy {} differs from D - TH = {identity} at epoch {epoch}",
                report.free_energy
            )));
        }
        let probe = bank.forward(&self.probe)?.hypotheses_matrix();
        let point = TrajectoryPoint {
            epoch,
            temperature: t,
            hard_distortion: report.hard_distortion,
            soft_distortion: report.soft_distortion,
            free_energy: report.free_energy,
            entropy: report.entropy,
            rate_bits: report.rate_bits,
            cluster_count: count_clusters(&probe, self.radius)?,
            hard_wta: temperature.hard_wta,
        };
        let finite = [point.hard_distortion, point.soft_distortion, point.free_energy, point.entropy, point.rate_bits];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("trajectory point at epoch {epoch}"),
            });
        }
        self.points.push(point);
        Ok(point)
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn eval_set(&self) -> &Dataset {
        &self.eval
    }

    pub fn into_points(self) -> Vec<TrajectoryPoint> {
        self.points
    }
}

/// Temperature at which fused hypotheses first split while cooling.
///
/// Scans the points in recording order and returns the temperature of the
/// first point with more than one cluster that follows a fused point. Hard
/// (zero temperature) points are ignored.
pub fn detect_split_temperature(points: &[TrajectoryPoint]) -> Option<f64> {
    let mut fused = false;
    for p in points.iter().filter(|p| !p.hard_wta && p.temperature > 0.0) {
        if p.cluster_count == 1 {
            fused = true;
        } else if fused {
            return Some(p.temperature);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SyntheticKind;
    use proptest::prelude::*;

    #[test]
    fn critical_temperature_examples() {
        let r = critical_temperature(&[vec![-1.0], vec![1.0]]).unwrap();
        assert_eq!(r.critical_temperature, 2.0);
        assert_eq!(r.d_max, 1.0);

        let mut rng = SeededRng::new(3);
        let spec = SyntheticSpec::new(SyntheticKind::SingleGaussian1d, 0.1).unwrap();
        let r = critical_temperature(&spec.sample_at(1.0, 20_000, &mut rng)).unwrap();
        assert!((r.critical_temperature - 0.02).abs() < 0.002);
        assert!(matches!(critical_temperature(&[vec![1.0]]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn d_max_is_trace() {
        let mut rng = SeededRng::new(4);
        let pts: Vec<Vec<f64>> = (0..500).map(|_| vec![rng.normal(), 0.5 * rng.normal(), rng.uniform()]).collect();
        let r = critical_temperature(&pts).unwrap();
        let tr: f64 = (0..3).map(|i| r.covariance[(i, i)]).sum();
        assert!((r.d_max - tr).abs() < 1e-9);
    }

    #[test]
    fn probe_grid_default() {
        let g = probe_grid(11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn single_sample_probes_are_skipped() {
        let mut rng = SeededRng::new(5);
        let spec = SyntheticSpec::new(SyntheticKind::ConditionalThreeGaussians, 0.1).unwrap();
        let g = global_bound(&spec, &[0.5, 1.0], 1, &mut rng).unwrap();
        assert!(g.probes.is_empty());
        assert_eq!(g.skipped, vec![0.5, 1.0]);
        assert_eq!(g.bound, None);
    }

    #[test]
    fn conditional_bound_grows_with_x() {
        let mut rng = SeededRng::new(6);
        let spec = SyntheticSpec::new(SyntheticKind::ConditionalThreeGaussians, 0.1).unwrap();
        let g = global_bound(&spec, &[0.6, 0.9, 1.0], 5000, &mut rng).unwrap();
        let t: Vec<f64> = g.probes.iter().map(|p| p.report.critical_temperature).collect();
        assert!(t[0] < t[1] && t[1] < t[2]);
        assert_eq!(g.bound, Some(t[2]));
    }

    #[test]
    fn cluster_examples() {
        let m = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.004, 0.0], vec![0.0, 0.006]]).unwrap();
        assert_eq!(count_clusters(&m, 0.01).unwrap(), 1);
        let m = Matrix::from_rows(&[vec![0.0], vec![0.001], vec![1.0], vec![1.002]]).unwrap();
        assert_eq!(count_clusters(&m, 0.01).unwrap(), 2);
        assert!(count_clusters(&m, 0.0).is_err());
    }

    fn closure_oracle(m: &Matrix, radius: f64) -> usize {
        let n = m.rows();
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = crate::numerics::squared_distance(m.row(i), m.row(j)).sqrt() <= radius;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        (0..n).filter(|&i| (0..i).all(|j| !reach[i][j])).count()
    }

    proptest! {
        #[test]
        fn clusters_match_closure_oracle(seed in any::<u64>(), n in 1usize..25, radius in 0.05f64..0.6) {
            let mut rng = SeededRng::new(seed);
            let pts: Vec<f64> = (0..n * 2).map(|_| rng.uniform()).collect();
            let m = Matrix::from_vec(n, 2, pts).unwrap();
            prop_assert_eq!(count_clusters(&m, radius).unwrap(), closure_oracle(&m, radius));
        }
    }

    fn point(epoch: usize, temperature: f64, clusters: usize) -> TrajectoryPoint {
        TrajectoryPoint {
            epoch,
            temperature,
            hard_distortion: 0.0,
            soft_distortion: 0.0,
            free_energy: 0.0,
            entropy: 0.0,
            rate_bits: 0.0,
            cluster_count: clusters,
            hard_wta: temperature == 0.0,
        }
    }

    #[test]
    fn split_detection() {
        let pts = [point(0, 1.0, 3), point(1, 0.5, 1), point(2, 0.3, 1), point(3, 0.2, 2), point(4, 0.1, 3), point(5, 0.0, 3)];
        assert_eq!(detect_split_temperature(&pts), Some(0.2));
        let never = [point(0, 1.0, 1), point(1, 0.0, 2)];
        assert_eq!(detect_split_temperature(&never), None);
    }

    #[test]
    fn csv_header_is_stable() {
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &[point(5, 0.25, 2)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, format!("{}\n5,0.25,0,0,0,0,0,2,false\n", TrajectoryPoint::CSV_HEADER));
    }
}
