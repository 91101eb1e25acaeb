use serde::{Deserialize, Serialize};

use super::ClfTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    /// `clf(n) ≤ C n`
    Linear,
    /// `clf(n) ≤ C^n`
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub constant: f64,
    /// Largest gap between the fitted bound and a certified row.
    pub max_residual: f64,
}

impl FitResult {
    pub fn bound(&self, n: usize) -> f64 {
        match self.model {
            FitModel::Linear => self.constant * n as f64,
            FitModel::Exponential => self.constant.powi(n as i32),
        }
    }
}

/// Smallest constant for which the model bound holds on every certified row.
pub fn fit_bound(table: &ClfTable, model: FitModel) -> Result<FitResult> {
    let rows: Vec<_> = table.rows.iter().filter(|r| r.certified).collect();
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut constant = 0.0f64;
    for r in &rows {
        let value = r.clf as f64;
        if value == 0.0 {
            continue;
        }
        if r.n == 0 {
            return Err(Error::DomainError(format!("row n = 0 has value {}", r.clf)));
        }
        let needed = match model {
            FitModel::Linear => value / r.n as f64,
            FitModel::Exponential => value.powf(1.0 / r.n as f64),
        };
        constant = constant.max(needed);
    }
    let mut fit = FitResult { model, constant, max_residual: 0.0 };
    // guard against rounding in powf: nudge until every row is covered
    while rows.iter().any(|r| fit.bound(r.n) < r.clf as f64) {
        fit.constant = next_up(fit.constant);
    }
    fit.max_residual = rows.iter().map(|r| fit.bound(r.n) - r.clf as f64).fold(0.0, f64::max);
    Ok(fit)
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else {
        f64::from_bits(x.to_bits() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{ClfRow, TableKind};

    fn table(rows: &[(usize, u64)]) -> ClfTable {
        ClfTable {
            kind: TableKind::Clf,
            rows: rows
                .iter()
                .map(|&(n, clf)| ClfRow {
                    n,
                    clf,
                    u_word: String::new(),
                    v_word: String::new(),
                    conjugator_word: String::new(),
                    certified: true,
                })
                .collect(),
        }
    }

    #[test]
    fn zero_table_has_zero_constant() {
        let f = fit_bound(&table(&[(0, 0), (1, 0), (2, 0)]), FitModel::Linear).unwrap();
        assert_eq!(f.constant, 0.0);
        assert_eq!(f.max_residual, 0.0);
    }

    #[test]
    fn exponential_constant() {
        let f = fit_bound(&table(&[(1, 1), (2, 4)]), FitModel::Exponential).unwrap();
        assert!((f.constant - 2.0).abs() < 1e-12);
        assert!(f.bound(2) >= 4.0);
    }

    #[test]
    fn linear_constant_and_residual() {
        let f = fit_bound(&table(&[(1, 1), (2, 3), (4, 4)]), FitModel::Linear).unwrap();
        assert_eq!(f.constant, 1.5);
        assert_eq!(f.max_residual, 2.0);
    }

    #[test]
    fn empty_table() {
        assert!(matches!(fit_bound(&table(&[]), FitModel::Linear), Err(Error::EmptyTable)));
    }
}
