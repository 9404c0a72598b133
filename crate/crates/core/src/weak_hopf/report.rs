use serde::{Deserialize, Serialize};

/// One named residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

/// Named residuals checked against one tolerance. `pass` holds iff every
/// residual is at most `tol` (a NaN residual fails).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub tol: f64,
    pub pass: bool,
    pub residuals: Vec<Residual>,
}

impl StructureReport {
    pub fn new(tol: f64) -> Self {
        Self { tol, pass: true, residuals: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        let pass = value <= self.tol;
        self.pass &= pass;
        self.residuals.push(Residual { name: name.into(), value, pass });
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.push(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }

    /// Names of the failing residuals, in insertion order.
    pub fn failing(&self) -> Vec<&str> {
        self.residuals.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }
}
