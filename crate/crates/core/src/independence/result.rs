use serde::{Deserialize, Serialize};

/// Outcome of a permutation test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: String,
    pub n: usize,
    pub statistic: f64,
    /// `(1 + exceedances) / (1 + num_permutations)`.
    pub p_value: f64,
    pub num_permutations: usize,
    pub seed: u64,
}

impl TestResult {
    pub(crate) fn new(
        method: &str,
        n: usize,
        statistic: f64,
        exceedances: usize,
        num_permutations: usize,
        seed: u64,
    ) -> Self {
        Self {
            method: method.to_string(),
            n,
            statistic,
            p_value: (1 + exceedances) as f64 / (1 + num_permutations) as f64,
            num_permutations,
            seed,
        }
    }

    pub const CSV_HEADER: &'static str = "method,n,statistic,p_value,B,seed";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.method, self.n, self.statistic, self.p_value, self.num_permutations, self.seed
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}
