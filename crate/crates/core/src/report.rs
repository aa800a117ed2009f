//! Machine-readable verdict records: per-certificate rows, per-suite
//! aggregates, and the full verification report in JSON or CSV.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::metrics::InequalityCertificate;
use crate::orbit::OrbitSignature;
use crate::tol::ToleranceConfig;

/// One certified comparison: `lhs <= rhs` (or a named check folded into the
/// same shape), with a digest of the inputs for reproducibility audits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub suite: String,
    pub case_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub inputs_digest: String,
}

impl CertificateRecord {
    pub fn from_inequality(
        suite: &str,
        case_id: String,
        cert: &InequalityCertificate,
        inputs_digest: String,
    ) -> Self {
        CertificateRecord {
            suite: suite.into(),
            case_id,
            lhs: cert.lhs,
            rhs: cert.rhs,
            slack: cert.slack,
            holds: cert.holds,
            inputs_digest,
        }
    }

    /// A bounded-residual check rendered as `measured <= bound`.
    pub fn from_residual(
        suite: &str,
        case_id: String,
        measured: f64,
        bound: f64,
        inputs_digest: String,
    ) -> Self {
        CertificateRecord {
            suite: suite.into(),
            case_id,
            lhs: measured,
            rhs: bound,
            slack: bound - measured,
            holds: measured <= bound,
            inputs_digest,
        }
    }

    /// A boolean agreement check; `lhs`/`rhs` carry the raw quantities for
    /// evidence.
    pub fn from_flag(
        suite: &str,
        case_id: String,
        holds: bool,
        lhs: f64,
        rhs: f64,
        inputs_digest: String,
    ) -> Self {
        CertificateRecord {
            suite: suite.into(),
            case_id,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds,
            inputs_digest,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{}",
            self.suite,
            self.case_id,
            self.lhs,
            self.rhs,
            self.slack,
            if self.holds { "pass" } else { "fail" }
        )
    }
}

/// FNV-1a over the shape and raw entry bytes of the input matrices.
pub fn digest_matrices(inputs: &[&Matrix]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for m in inputs {
        for b in (m.rows() as u64).to_le_bytes() {
            eat(b);
        }
        for b in (m.cols() as u64).to_le_bytes() {
            eat(b);
        }
        for z in m.entries() {
            for b in z.re.to_le_bytes() {
                eat(b);
            }
            for b in z.im.to_le_bytes() {
                eat(b);
            }
        }
    }
    format!("{hash:016x}")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub total: usize,
    pub violations: usize,
    pub skipped: usize,
    pub certificates: Vec<CertificateRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            total: 0,
            violations: 0,
            skipped: 0,
            certificates: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CertificateRecord) {
        self.total += 1;
        if !record.holds {
            self.violations += 1;
        }
        self.certificates.push(record);
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub tolerances: ToleranceConfig,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn violations(&self) -> usize {
        self.suites.iter().map(|s| s.violations).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Columns: suite, case_id, lhs, rhs, slack, verdict.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,case_id,lhs,rhs,slack,verdict\n");
        for suite in &self.suites {
            for cert in &suite.certificates {
                out.push_str(&cert.csv_row());
                out.push('\n');
            }
        }
        out
    }

    /// One line per suite, for terminal output.
    pub fn summary_lines(&self) -> Vec<String> {
        self.suites
            .iter()
            .map(|s| {
                format!(
                    "suite {:<14} {:>6} checks  {:>3} violations  {:>3} skipped  [{}]",
                    s.suite,
                    s.total,
                    s.violations,
                    s.skipped,
                    if s.violations == 0 { "ok" } else { "FAIL" }
                )
            })
            .collect()
    }
}

/// Orbit record for the CLI: the complete invariant and the index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub signature: [usize; 3],
    pub index: i64,
    pub orbit_id: String,
}

impl OrbitRecord {
    pub fn from_signature(sig: &OrbitSignature) -> Self {
        OrbitRecord {
            signature: [sig.nullity, sig.rank, sig.defect],
            index: sig.index(),
            orbit_id: format!("k{}_l{}_m{}", sig.nullity, sig.rank, sig.defect),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = Matrix::identity(2);
        let b = Matrix::identity(2).scale_re(2.0);
        assert_eq!(digest_matrices(&[&a]), digest_matrices(&[&a]));
        assert_ne!(digest_matrices(&[&a]), digest_matrices(&[&b]));
        assert_ne!(digest_matrices(&[&a, &b]), digest_matrices(&[&b, &a]));
    }

    #[test]
    fn csv_has_header_and_verdicts() {
        let mut suite = SuiteReport::new("demo");
        suite.push(CertificateRecord::from_residual(
            "demo",
            "case/0".into(),
            0.5,
            1.0,
            "abc".into(),
        ));
        let report = VerifyReport {
            seed: 1,
            trials: 1,
            max_dim: 2,
            tolerances: ToleranceConfig::default(),
            suites: vec![suite],
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("suite,case_id,lhs,rhs,slack,verdict"));
        assert!(csv.contains(",pass"));
        assert_eq!(report.violations(), 0);
    }
}
