//! CSV derived from report JSON.
//!
//! Columns: `section,index,label,re,im,weight`. Numbers are copied in the
//! shortest round-trip form, so each CSV value parses to the same `f64` as
//! the JSON value it came from. Sections: `det`, `sigma`, `hull`,
//! `certificate` (per moc result, prefixed `ab.`/`cd.` for direct sums),
//! `sample` and `sigma_range` (fiedler), `query` (drury coefficients),
//! `term` (direct-sum composition), `instance` (batch).

use serde_json::Value;

use crate::error::CliError;

struct Rows(csv::Writer<Vec<u8>>);

impl Rows {
    fn push(&mut self, section: &str, index: usize, label: &str, re: &Value, im: &Value, weight: &Value) {
        let cell = |v: &Value| match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        self.0
            .write_record([
                section.to_string(),
                index.to_string(),
                label.to_string(),
                cell(re),
                cell(im),
                cell(weight),
            ])
            .expect("in-memory csv write");
    }

    fn complex(&mut self, section: &str, index: usize, label: &str, z: &Value, weight: &Value) {
        self.push(section, index, label, &z[0], &z[1], weight);
    }
}

fn items(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn moc_rows(rows: &mut Rows, prefix: &str, m: &Value) {
    let name = |s: &str| format!("{prefix}{s}");
    rows.complex(&name("det"), 0, "", &m["det_sum"], &Value::Null);
    for (k, entry) in items(&m["sigma_points"]).iter().enumerate() {
        rows.complex(&name("sigma"), k, entry[0].as_str().unwrap_or(""), &entry[1], &Value::Null);
    }
    for (k, z) in items(&m["hull"]).iter().enumerate() {
        rows.complex(&name("hull"), k, "", z, &Value::Null);
    }
    for (k, (entry, z)) in items(&m["certificate"])
        .iter()
        .zip(items(&m["certificate_points"]))
        .enumerate()
    {
        rows.complex(&name("certificate"), k, entry[0].as_str().unwrap_or(""), z, &entry[1]);
    }
}

pub fn report_csv(report: &Value) -> Result<String, CliError> {
    let result = &report["result"];
    if result.is_null() {
        let msg = report["error"]["message"].as_str().unwrap_or("report has no result");
        return Err(CliError::Input(format!("nothing to export: {msg}")));
    }
    let mut rows = Rows(csv::Writer::from_writer(Vec::new()));
    rows.0
        .write_record(["section", "index", "label", "re", "im", "weight"])
        .expect("in-memory csv write");

    if !result["det_sum"].is_null() {
        moc_rows(&mut rows, "", result);
    }
    if !result["moc"].is_null() {
        moc_rows(&mut rows, "", &result["moc"]);
    }
    if !result["ab"].is_null() {
        moc_rows(&mut rows, "ab.", &result["ab"]);
        moc_rows(&mut rows, "cd.", &result["cd"]);
        rows.complex("det", 0, "", &result["query"], &Value::Null);
        for (k, t) in items(&result["terms"]).iter().enumerate() {
            rows.complex("term", k, t[0].as_str().unwrap_or(""), &t[1], &t[2]);
        }
    }
    if !result["dets"].is_null() {
        let range = &result["sigma_range"];
        rows.push("sigma_range", 0, "min", &range[0], &Value::from(0.0), &Value::Null);
        rows.push("sigma_range", 1, "max", &range[1], &Value::from(0.0), &Value::Null);
        for (k, z) in items(&result["dets"]).iter().enumerate() {
            rows.complex("sample", k, "", z, &Value::Null);
        }
    }
    if !result["query"].is_null() && result["ab"].is_null() {
        for (k, e) in items(&result["query"]).iter().enumerate() {
            rows.push("query", k, &format!("e{}", k + 1), e, &Value::Null, &Value::Null);
        }
        for (k, entry) in items(&result["certificate"]).iter().enumerate() {
            rows.push("certificate", k, entry[0].as_str().unwrap_or(""), &Value::Null, &Value::Null, &entry[1]);
        }
    }
    for inst in items(&result["instances"]) {
        let index = inst["index"].as_u64().unwrap_or(0) as usize;
        let label = inst["verdict"]
            .as_str()
            .or_else(|| inst["status"].as_str())
            .unwrap_or("");
        rows.push("instance", index, label, &inst["signed_distance"], &Value::Null, &Value::Null);
    }
    let bytes = rows.0.into_inner().expect("in-memory csv flush");
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}
