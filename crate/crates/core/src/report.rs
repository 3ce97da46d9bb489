//! CSV and JSON serialization of scan reports.
//!
//! Both formats share one column set. Numbers use the shortest decimal that
//! parses back to the same double. The CSV carries only row data, so reruns
//! of a configuration produce identical bytes; the JSON adds the summary and
//! a provenance block whose timestamp is the only varying field.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::consistency::{ConsistencyReport, ConsistencyRow, Method};

pub const CSV_HEADER: [&str; 22] = [
    "alpha",
    "n",
    "x_tilde",
    "piecewise",
    "direct_tail_re",
    "direct_tail_im",
    "direct_abel_re",
    "direct_abel_im",
    "contour_total_re",
    "contour_total_im",
    "contour_residue_re",
    "contour_residue_im",
    "contour_cut_re",
    "contour_cut_im",
    "delta_direct_tail",
    "delta_direct_abel",
    "delta_contour",
    "err_direct_tail",
    "err_direct_abel",
    "err_contour",
    "converged_flags",
    "annotations",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Number(f64),
    Integer(u32),
    Text(String),
    Empty,
}

impl Field {
    fn opt(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Number)
    }

    pub fn to_csv(&self) -> String {
        match self {
            Field::Number(v) => format_f64(*v),
            Field::Integer(k) => k.to_string(),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Field::Number(v) if v.is_finite() => json!(v),
            Field::Integer(k) => json!(k),
            Field::Text(s) => json!(s),
            _ => Value::Null,
        }
    }
}

/// Shortest round-trip decimal.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `method=true|false` for each evaluated method, `;`-separated.
pub fn converged_flags(row: &ConsistencyRow) -> String {
    Method::ALL
        .iter()
        .filter_map(|&m| row.method(m).map(|v| format!("{m}={}", v.converged)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Column values of one row, in [`CSV_HEADER`] order.
pub fn row_fields(row: &ConsistencyRow) -> Vec<Field> {
    let value = |m: Method| row.method(m).map(|v| v.value);
    let mut fields = vec![
        Field::Number(row.alpha),
        Field::Integer(row.n.get()),
        Field::Number(row.x_tilde),
        Field::Number(row.piecewise),
    ];
    for z in [
        value(Method::DirectTail),
        value(Method::DirectAbel),
        value(Method::Contour),
        row.contour_residue,
        row.contour_cut,
    ] {
        fields.push(Field::opt(z.map(|z| z.re)));
        fields.push(Field::opt(z.map(|z| z.im)));
    }
    for m in Method::ALL {
        fields.push(Field::opt(row.delta(m)));
    }
    for m in Method::ALL {
        fields.push(Field::opt(row.method(m).map(|v| v.error_estimate)));
    }
    fields.push(Field::Text(converged_flags(row)));
    fields.push(Field::Text(row.annotations.join("; ")));
    fields
}

pub fn write_csv<W: Write>(report: &ConsistencyReport, out: W) -> io::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in &report.rows {
        writer.write_record(row_fields(row).iter().map(Field::to_csv))?;
    }
    writer.flush()
}

pub fn to_json(report: &ConsistencyReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let object: Map<String, Value> = CSV_HEADER
                .iter()
                .zip(row_fields(row))
                .map(|(k, f)| (k.to_string(), f.to_json()))
                .collect();
            Value::Object(object)
        })
        .collect();
    json!({
        "provenance": report.provenance,
        "config": report.spec.canonical(),
        "columns": CSV_HEADER,
        "rows": rows,
        "summary": report.summary,
    })
}

pub fn write_json<W: Write>(report: &ConsistencyReport, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, &to_json(report))?;
    out.write_all(b"\n")
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::{run_scan, ScanSpec};
    use crate::well::StateIndex;

    fn small_report(methods: &[Method]) -> ConsistencyReport {
        run_scan(&ScanSpec {
            alphas: vec![1.5, 2.0],
            x_tildes: vec![0.5, -1.0],
            ns: vec![StateIndex::new(1).unwrap()],
            methods: methods.to_vec(),
            ..ScanSpec::default()
        })
        .unwrap()
    }

    #[test]
    fn shortest_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0, -0.0, 1e-300, 123456.789e10, f64::MIN_POSITIVE] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_f64(2.0), "2.0");
        assert_eq!(format_f64(1e-10), "1e-10");
        assert_eq!(format_f64(f64::NAN), "NaN");
    }

    #[test]
    fn csv_reparses_bit_exactly() {
        let report = small_report(&Method::ALL);
        let mut bytes = Vec::new();
        write_csv(&report, &mut bytes).unwrap();
        let mut reader = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(
            reader.headers().unwrap().iter().collect::<Vec<_>>(),
            CSV_HEADER.to_vec()
        );
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records.len(), report.rows.len());
        for (record, row) in records.iter().zip(&report.rows) {
            let get = |name: &str| {
                record[CSV_HEADER.iter().position(|h| *h == name).unwrap()]
                    .parse::<f64>()
                    .unwrap()
            };
            assert_eq!(get("x_tilde").to_bits(), row.x_tilde.to_bits());
            assert_eq!(
                get("contour_total_re").to_bits(),
                row.contour.as_ref().unwrap().value.re.to_bits()
            );
            assert_eq!(
                get("delta_contour").to_bits(),
                row.delta(Method::Contour).unwrap().to_bits()
            );
            assert_eq!(get("contour_total_re") - get("piecewise"), get("delta_contour"));
        }
    }

    #[test]
    fn unrequested_methods_leave_empty_columns() {
        let report = small_report(&[Method::Contour]);
        let fields = row_fields(&report.rows[0]);
        assert_eq!(fields.len(), CSV_HEADER.len());
        for (name, field) in CSV_HEADER.iter().zip(&fields) {
            let empty = *field == Field::Empty;
            assert_eq!(empty, name.contains("direct"), "{name}");
        }
        assert_eq!(converged_flags(&report.rows[0]), "contour=true");
    }

    #[test]
    fn boundary_annotation_is_written() {
        let report = small_report(&[Method::Contour]);
        let mut bytes = Vec::new();
        write_csv(&report, &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("boundary-shift -1->-0.9999"));
    }

    #[test]
    fn json_mirrors_columns() {
        let report = small_report(&Method::ALL);
        let v = to_json(&report);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CSV_HEADER.to_vec();
        expected.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(v["provenance"]["config_hash"], json!(report.spec.config_hash()));
        assert!(v["summary"]["methods"].as_array().unwrap().len() == 6);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
