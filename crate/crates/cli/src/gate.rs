//! Acceptance gates of the form `metric<op>threshold`, e.g. `order>=1.7`.

use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Order,
    ManifoldOrder,
    SupError,
    SupRelError,
    SupResidual,
    ManifoldDistance,
}

impl Metric {
    const ALL: [(&'static str, Metric); 6] = [
        ("order", Metric::Order),
        ("manifold_order", Metric::ManifoldOrder),
        ("sup_error", Metric::SupError),
        ("sup_rel_error", Metric::SupRelError),
        ("sup_residual", Metric::SupResidual),
        ("manifold_distance", Metric::ManifoldDistance),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, m)| *m == self).map(|(n, _)| *n).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Ge,
    Gt,
    Le,
    Lt,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Ge => ">=",
            Op::Gt => ">",
            Op::Le => "<=",
            Op::Lt => "<",
        }
    }

    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Op::Ge => value >= threshold,
            Op::Gt => value > threshold,
            Op::Le => value <= threshold,
            Op::Lt => value < threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub metric: Metric,
    pub op: Op,
    pub threshold: f64,
}

impl FromStr for Gate {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot parse gate {s:?}; expected e.g. order>=1.7"));
        // two-character operators first so ">=" is not read as ">"
        let (at, op) = [("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)]
            .iter()
            .find_map(|(sym, op)| s.find(sym).map(|i| ((i, sym.len()), *op)))
            .ok_or_else(bad)?;
        let name = s[..at.0].trim();
        let metric = Metric::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, m)| *m)
            .ok_or_else(|| {
                let known: Vec<&str> = Metric::ALL.iter().map(|(n, _)| *n).collect();
                CliError::Usage(format!("unknown gate metric {name:?}; known: {}", known.join(", ")))
            })?;
        let threshold: f64 = s[at.0 + at.1..].trim().parse().map_err(|_| bad())?;
        if !threshold.is_finite() {
            return Err(bad());
        }
        Ok(Gate { metric, op, threshold })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.metric.name(), self.op.symbol(), self.threshold)
    }
}

impl Gate {
    /// Whether the measured value passes; NaN never does.
    pub fn passes(&self, value: f64) -> bool {
        self.op.holds(value, self.threshold)
    }
}
