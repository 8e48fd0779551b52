//! The versioned report document and its JSON / CSV renderings.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: BTreeMap<String, String>,
    pub verdict: String,
    pub predicted: String,
    pub agrees: bool,
    pub nabla_omega: f64,
    pub sym_residual: f64,
    pub nijenhuis: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub model: String,
    pub backend: String,
    pub tolerance: f64,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub verdict: Option<String>,
    pub norms: BTreeMap<String, f64>,
    pub details: BTreeMap<String, serde_json::Value>,
    pub loci: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub residuals: BTreeMap<String, f64>,
    /// Points where the analytic locus and the direct classification differ.
    pub disagreements: Vec<String>,
    /// Only filled with `--timing`, so default output stays reproducible.
    pub wall_time_ms: Option<f64>,
}

impl ReportDocument {
    pub fn new(command: &str, model: &str) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            model: model.into(),
            ..ReportDocument::default()
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable detail");
        self.details.insert(key.into(), v);
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable report");
        let mut s = serde_json::to_string_pretty(&value).expect("json");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ReportDocument> {
        let doc: ReportDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            bail!(
                "report has schema_version {}, expected {SCHEMA_VERSION}",
                doc.schema_version
            );
        }
        Ok(doc)
    }

    /// Sweep table as CSV: parameter columns, then verdicts and norms.
    pub fn to_csv(&self) -> Result<String> {
        if self.command != "sweep" {
            bail!("CSV output is only available for sweep reports");
        }
        let keys: Vec<String> = self
            .rows
            .first()
            .map(|r| r.point.keys().cloned().collect())
            .unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = keys.clone();
        header.extend(
            ["verdict", "predicted", "agrees", "nabla_omega", "sym_residual", "nijenhuis"]
                .map(String::from),
        );
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec: Vec<String> = keys.iter().map(|k| r.point[k].clone()).collect();
            rec.push(r.verdict.clone());
            rec.push(r.predicted.clone());
            rec.push(r.agrees.to_string());
            for x in [r.nabla_omega, r.sym_residual, r.nijenhuis] {
                rec.push(x.to_string());
            }
            w.write_record(&rec)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_sorted_keys() {
        let mut doc = ReportDocument::new("sweep", "flag");
        doc.detail("zeta", 1);
        doc.detail("alpha", "x");
        doc.rows.push(SweepRow {
            point: [("r".to_string(), "1".to_string())].into(),
            verdict: "StrictNK".into(),
            predicted: "StrictNK".into(),
            agrees: true,
            ..SweepRow::default()
        });
        let text = doc.to_json();
        assert_eq!(ReportDocument::from_json(&text).unwrap(), doc);
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"backend\"").unwrap() < text.find("\"command\"").unwrap());
        let csv = doc.to_csv().unwrap();
        assert!(csv.starts_with("r,verdict,predicted"));
    }

    #[test]
    fn rejects_other_schema() {
        let mut doc = ReportDocument::new("verify", "cp3");
        doc.schema_version = 99;
        assert!(ReportDocument::from_json(&doc.to_json()).is_err());
        assert!(doc.to_csv().is_err());
    }
}
