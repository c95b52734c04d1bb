use serde::Serialize;

use super::report::sig12;
use crate::error::{Error, Result};

/// Residual above which the smallest sweep point is dropped and the fit redone.
pub const TRIM_RESIDUAL: f64 = 0.02;

/// Least-squares line through `(log n, log value)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    #[serde(serialize_with = "sig12")]
    pub slope: f64,
    #[serde(serialize_with = "sig12")]
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    #[serde(serialize_with = "sig12")]
    pub residual: f64,
}

fn positive(x: f64) -> bool {
    x > 0.0
}

/// Fits `log value ≈ slope · log n + intercept`.
pub fn fit_growth(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::Config(format!(
            "growth fit needs >= 3 points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Config(
            "sweep sizes must be strictly increasing".into(),
        ));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| !positive(v) || !positive(n)) {
        return Err(Error::Domain(format!(
            "growth fit needs positive data, got ({n}, {v})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(GrowthFit {
        slope,
        intercept,
        residual,
    })
}

/// Full fit plus, when its residual exceeds [`TRIM_RESIDUAL`] and enough
/// points remain, a refit without the smallest sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub full: GrowthFit,
    pub trimmed: Option<GrowthFit>,
}

impl GrowthReport {
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let full = fit_growth(points)?;
        let trimmed = if full.residual > TRIM_RESIDUAL && points.len() > 3 {
            Some(fit_growth(&points[1..])?)
        } else {
            None
        };
        Ok(GrowthReport { full, trimmed })
    }

    /// The fit used for adjudication: trimmed when present.
    pub fn preferred(&self) -> GrowthFit {
        self.trimmed.unwrap_or(self.full)
    }
}
