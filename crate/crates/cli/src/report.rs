//! Machine-readable verdict reports. Keys appear in a fixed order and
//! every rational is written in lowest terms.

use serde::{Deserialize, Serialize};
use tnngrass::numeric::Counterexample;
use tnngrass::{Matching, Verdict};

use crate::input::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub verdict: String,
    pub eta: usize,
    pub certificate: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_matching: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ReportCounterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub matching: Vec<[usize; 2]>,
    pub sum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportCounterexample {
    pub trial: usize,
    pub matrix: Vec<Vec<String>>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub elapsed_us: u64,
}

pub fn pairs(m: &Matching) -> Vec<[usize; 2]> {
    m.pairs().iter().map(|&(u, v)| [u, v]).collect()
}

impl Report {
    pub fn from_verdict(v: &Verdict) -> Self {
        let violating = v.violating_row();
        Self {
            verdict: v.status.to_string(),
            eta: v.eta,
            certificate: v
                .rows
                .iter()
                .map(|r| ReportRow {
                    matching: pairs(&r.matching),
                    sum: format_rational(&r.sum),
                })
                .collect(),
            violating_matching: violating.map(|r| pairs(&r.matching)),
            sum: violating.map(|r| format_rational(&r.sum)),
            counterexample: v.counterexample.as_ref().map(counterexample),
            seed: None,
            timing: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == "valid"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn counterexample(c: &Counterexample) -> ReportCounterexample {
    ReportCounterexample {
        trial: c.trial,
        matrix: c
            .point
            .matrix
            .to_rows()
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect(),
        value: format_rational(&c.value),
    }
}
