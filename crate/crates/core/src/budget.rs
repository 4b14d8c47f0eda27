use crate::error::{Error, Result};

/// Size guard for cochain computations.
///
/// The cost driver of every kernel/quotient step is the number of matrix
/// columns it works over (the rank of the cochain group being cut down), so
/// the budget is expressed in columns. Streamed constraint rows are far
/// cheaper and get a proportionally larger cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_columns: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_columns: 4096 }
    }
}

impl Budget {
    pub fn new(max_columns: usize) -> Self {
        Budget { max_columns }
    }

    pub fn max_rows(&self) -> usize {
        self.max_columns.saturating_mul(64)
    }

    pub fn check_columns(&self, what: &str, needed: usize) -> Result<()> {
        if needed > self.max_columns {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                limit: self.max_columns,
            });
        }
        Ok(())
    }

    pub fn check_rows(&self, what: &str, needed: usize) -> Result<()> {
        if needed > self.max_rows() {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                limit: self.max_rows(),
            });
        }
        Ok(())
    }
}
