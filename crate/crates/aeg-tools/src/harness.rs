//! JSON-lines records of solver-versus-oracle comparisons. Test harnesses
//! append one record per checked instance; a disagreement fails the test
//! with the full instance serialized so it can be replayed.

use serde_json::json;

/// One comparison: the serialized instance, the two verdicts (or values),
/// and whether they agree.
#[derive(Clone, Debug)]
pub struct OracleRecord {
    /// Canonical game file text plus any instance parameters.
    pub instance: String,
    pub solver: String,
    pub oracle: String,
    pub agree: bool,
    /// Extra values worth keeping (thresholds, seeds, bounds).
    pub values: Vec<(String, String)>,
}

impl OracleRecord {
    pub fn new(instance: String, solver: String, oracle: String) -> OracleRecord {
        let agree = solver == oracle;
        OracleRecord {
            instance,
            solver,
            oracle,
            agree,
            values: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: String) -> OracleRecord {
        self.values.push((key.to_string(), value));
        self
    }

    pub fn to_json_line(&self) -> String {
        let values: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        json!({
            "instance": self.instance,
            "solver": self.solver,
            "oracle": self.oracle,
            "agree": self.agree,
            "values": values,
        })
        .to_string()
    }
}

/// Collects records and panics with full context on the first disagreement.
#[derive(Default)]
pub struct Harness {
    pub records: Vec<OracleRecord>,
}

impl Harness {
    pub fn new() -> Harness {
        Harness::default()
    }

    pub fn check(&mut self, record: OracleRecord) {
        let line = record.to_json_line();
        let agree = record.agree;
        self.records.push(record);
        assert!(agree, "solver and oracle disagree: {line}");
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_serialize_and_agreement_is_derived() {
        let r = OracleRecord::new("state a 1...".into(), "WIN".into(), "WIN".into())
            .with("seed", "7".into());
        assert!(r.agree);
        let line = r.to_json_line();
        assert!(line.contains("\"agree\":true"));
        assert!(line.contains("\"seed\":\"7\""));

        let mut h = Harness::new();
        h.check(r);
        assert_eq!(h.records.len(), 1);
        assert!(h.to_json_lines().ends_with('\n'));
    }

    #[test]
    #[should_panic(expected = "solver and oracle disagree")]
    fn disagreement_is_a_hard_failure() {
        let mut h = Harness::new();
        h.check(OracleRecord::new("g".into(), "WIN".into(), "LOSE".into()));
    }
}
