//! Outcome tables shared by the crystal cascade and the quantum-dot protocol.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::BellLabel;

/// Tolerance on row sums.
pub const ROW_SUM_TOL: f64 = 1e-9;

/// Outcome probabilities per input Bell state.
///
/// `rows[i][j]` is the probability that input `inputs[i]` produces outcome
/// `outcomes[j]`. The last outcome is always the no-click column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub inputs: Vec<BellLabel>,
    pub outcomes: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ConfusionMatrix {
    pub fn new(inputs: Vec<BellLabel>, outcomes: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = ConfusionMatrix {
            inputs,
            outcomes,
            rows,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.rows.len() != self.inputs.len() {
            return bad("one row per input is required".into());
        }
        for (label, row) in self.inputs.iter().zip(&self.rows) {
            if row.len() != self.outcomes.len() {
                return bad(format!("row {label} has {} entries", row.len()));
            }
            if let Some(p) = row
                .iter()
                .find(|p| !(-ROW_SUM_TOL..=1.0 + ROW_SUM_TOL).contains(*p))
            {
                return bad(format!("row {label} has entry {p} outside [0, 1]"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return bad(format!("row {label} sums to {sum}"));
            }
        }
        Ok(())
    }

    pub fn row(&self, input: BellLabel) -> Option<&[f64]> {
        self.inputs
            .iter()
            .position(|&l| l == input)
            .map(|i| self.rows[i].as_slice())
    }

    pub fn get(&self, input: BellLabel, outcome: &str) -> Option<f64> {
        let j = self.outcomes.iter().position(|o| o == outcome)?;
        self.row(input).map(|r| r[j])
    }

    /// Probability mass outside the leading diagonal block, where row `i`
    /// is the input announced by outcome `i`.
    pub fn off_diagonal_mass(&self) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p)
                    .sum::<f64>()
            })
            .sum()
    }

    /// CSV with an `input` column followed by one column per outcome.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input");
        for o in &self.outcomes {
            out.push(',');
            out.push_str(o);
        }
        out.push('\n');
        for (label, row) in self.inputs.iter().zip(&self.rows) {
            out.push_str(label.name());
            for p in row {
                let _ = write!(out, ",{p}");
            }
            out.push('\n');
        }
        out
    }

    /// Copy with every entry passed through `f`.
    pub fn map_entries(&self, f: impl Fn(f64) -> f64) -> Self {
        ConfusionMatrix {
            inputs: self.inputs.clone(),
            outcomes: self.outcomes.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&p| f(p)).collect())
                .collect(),
        }
    }
}
