use crate::error::{Error, Result};

/// Load-cell samples `(time s, force N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceTrace {
    samples: Vec<(f64, f64)>,
}

impl ForceTrace {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Data("force trace is empty".into()));
        }
        if let Some(i) = samples.iter().position(|&(t, f)| !(t.is_finite() && f.is_finite() && f >= 0.0)) {
            return Err(Error::Data(format!("invalid force sample at row {i}")));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn forces(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Causal trailing mean over `window` samples. The first `window − 1`
/// outputs average the samples seen so far.
pub fn moving_average_values(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::domain("window", 0.0, "[1, inf)"));
    }
    Ok((0..values.len())
        .map(|i| {
            let lo = (i + 1).saturating_sub(window);
            let span = &values[lo..=i];
            span.iter().sum::<f64>() / span.len() as f64
        })
        .collect())
}

pub fn moving_average(trace: &ForceTrace, window: usize) -> Result<ForceTrace> {
    let forces: Vec<f64> = trace.forces().collect();
    let filtered = moving_average_values(&forces, window)?;
    Ok(ForceTrace {
        samples: trace.samples.iter().zip(filtered).map(|(&(t, _), f)| (t, f)).collect(),
    })
}

/// Peak of the filtered trace: the force at which the grip let go.
pub fn peak_failure_force(trace: &ForceTrace, window: usize) -> Result<f64> {
    let filtered = moving_average(trace, window)?;
    Ok(filtered.forces().fold(f64::NEG_INFINITY, f64::max))
}
