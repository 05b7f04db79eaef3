use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LoewnerReport;

/// Every checker known to the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SuiteId {
    Thm1,
    Chain,
    Thm2,
    Cor3,
    CorGamma,
    GrussBase,
    OpHeron,
    OpHeinzLog,
    OpPowerAg,
    OpPowerHg,
    OpEntropy,
    Eq6Eq7,
    Thm51,
    Kittaneh,
    X3Rem11,
    LemmaY1,
    Thm13,
    GrussOp,
}

/// How a suite consumes random inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteFamily {
    Scalar,
    Operator,
    Covariance,
}

impl SuiteId {
    pub const ALL: [SuiteId; 18] = [
        SuiteId::Thm1,
        SuiteId::Chain,
        SuiteId::Thm2,
        SuiteId::Cor3,
        SuiteId::CorGamma,
        SuiteId::GrussBase,
        SuiteId::OpHeron,
        SuiteId::OpHeinzLog,
        SuiteId::OpPowerAg,
        SuiteId::OpPowerHg,
        SuiteId::OpEntropy,
        SuiteId::Eq6Eq7,
        SuiteId::Thm51,
        SuiteId::Kittaneh,
        SuiteId::X3Rem11,
        SuiteId::LemmaY1,
        SuiteId::Thm13,
        SuiteId::GrussOp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Thm1 => "THM1",
            SuiteId::Chain => "CHAIN",
            SuiteId::Thm2 => "THM2",
            SuiteId::Cor3 => "COR3",
            SuiteId::CorGamma => "COR_GAMMA",
            SuiteId::GrussBase => "GRUSS_BASE",
            SuiteId::OpHeron => "OP_HERON",
            SuiteId::OpHeinzLog => "OP_HEINZ_LOG",
            SuiteId::OpPowerAg => "OP_POWER_AG",
            SuiteId::OpPowerHg => "OP_POWER_HG",
            SuiteId::OpEntropy => "OP_ENTROPY",
            SuiteId::Eq6Eq7 => "EQ6_EQ7",
            SuiteId::Thm51 => "THM51",
            SuiteId::Kittaneh => "KITTANEH",
            SuiteId::X3Rem11 => "X3_REM11",
            SuiteId::LemmaY1 => "LEMMA_Y1",
            SuiteId::Thm13 => "THM13",
            SuiteId::GrussOp => "GRUSS_OP",
        }
    }

    pub fn family(self) -> SuiteFamily {
        match self {
            SuiteId::Thm1
            | SuiteId::Chain
            | SuiteId::Thm2
            | SuiteId::Cor3
            | SuiteId::CorGamma
            | SuiteId::GrussBase
            | SuiteId::Eq6Eq7
            | SuiteId::LemmaY1 => SuiteFamily::Scalar,
            SuiteId::OpHeron | SuiteId::OpHeinzLog | SuiteId::OpPowerAg | SuiteId::OpPowerHg | SuiteId::OpEntropy => {
                SuiteFamily::Operator
            }
            SuiteId::Thm51 | SuiteId::Kittaneh | SuiteId::X3Rem11 | SuiteId::Thm13 | SuiteId::GrussOp => {
                SuiteFamily::Covariance
            }
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

/// One inequality `lhs ≤ rhs` inside a report. Operator links carry no
/// scalar sides; their margin is the smallest eigenvalue of RHS − LHS.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Link {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    pub margin: f64,
    pub tol: f64,
    pub holds: bool,
}

impl Link {
    pub fn scalar(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            label: label.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            margin,
            tol,
            holds: margin >= -tol,
        }
    }

    pub fn loewner(label: impl Into<String>, report: &LoewnerReport) -> Self {
        Self {
            label: label.into(),
            lhs: None,
            rhs: None,
            margin: report.min_eig_diff,
            tol: report.tol,
            holds: report.holds,
        }
    }
}

/// Result of one checker invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub suite: SuiteId,
    pub inputs: BTreeMap<String, String>,
    pub links: Vec<Link>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loewner: Option<LoewnerReport>,
    /// Refined lower bound minus the unrefined one.
    pub refinement_gain: f64,
    pub quadrature_error: f64,
    pub holds: bool,
    /// Informational values that do not take part in `holds`.
    pub notes: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn new(suite: SuiteId) -> Self {
        Self {
            suite,
            inputs: BTreeMap::new(),
            links: Vec::new(),
            loewner: None,
            refinement_gain: 0.0,
            quadrature_error: 0.0,
            holds: true,
            notes: BTreeMap::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.inputs.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn link(mut self, link: Link) -> Self {
        self.holds &= link.holds;
        self.links.push(link);
        self
    }

    pub fn note(mut self, key: &str, value: f64) -> Self {
        self.notes.insert(key.to_owned(), value);
        self
    }

    pub fn gain(mut self, gain: f64) -> Self {
        self.refinement_gain = gain;
        self
    }

    pub fn quadrature_error(mut self, error: f64) -> Self {
        self.quadrature_error = error;
        self
    }

    /// Records the main Loewner comparison and adds it as a link.
    pub fn loewner(mut self, label: &str, report: LoewnerReport) -> Self {
        self.loewner = Some(report);
        self.link(Link::loewner(label, &report))
    }

    /// Smallest margin over all links; `+∞` for a report without links.
    pub fn worst_margin(&self) -> f64 {
        self.links.iter().map(|l| l.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn failing_links(&self) -> impl Iterator<Item = &Link> {
        self.links.iter().filter(|l| !l.holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip_through_serde_and_parse() {
        for id in SuiteId::ALL {
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert!("NOSUCH".parse::<SuiteId>().is_err());
    }

    #[test]
    fn holds_is_the_conjunction_of_links() {
        let r = InequalityReport::new(SuiteId::Thm1)
            .link(Link::scalar("a", 1.0, 2.0, 0.0))
            .link(Link::scalar("b", 2.0 + 1e-12, 2.0, 1e-11));
        assert!(r.holds);
        let r = r.link(Link::scalar("c", 3.0, 2.0, 0.5));
        assert!(!r.holds);
        assert_eq!(r.worst_margin(), -1.0);
        assert_eq!(r.failing_links().count(), 1);
    }
}
