use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use upcross::experiments::ExperimentReport;
use upcross::IterationRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub enum Payload {
    Record(Map<String, Value>),
    Reports(Vec<ExperimentReport>),
}

/// What a command prints: its result, a status name and an optional trace.
pub struct Envelope {
    pub payload: Payload,
    pub status: String,
    pub trace: Option<Vec<IterationRecord>>,
}

impl Envelope {
    pub fn record(fields: Map<String, Value>, status: impl Into<String>) -> Self {
        Self {
            payload: Payload::Record(fields),
            status: status.into(),
            trace: None,
        }
    }

    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Json => self.json(digits),
            Format::Csv => self.csv(digits),
            Format::Plain => self.plain(digits),
        }
    }

    fn json(&self, digits: usize) -> String {
        let result = match &self.payload {
            Payload::Record(m) => Value::Object(m.clone()),
            Payload::Reports(r) => to_value(r),
        };
        let trace = self.trace.as_ref().map_or(Value::Null, to_value);
        let mut v = json!({ "result": result, "status": self.status, "trace": trace });
        round_value(&mut v, digits);
        serde_json::to_string_pretty(&v).expect("finite output") + "\n"
    }

    fn csv(&self, digits: usize) -> String {
        let mut out = String::new();
        match &self.payload {
            Payload::Record(m) => {
                let flat = flatten(m, digits);
                out.push_str(
                    &flat
                        .iter()
                        .map(|(k, _)| k.as_str())
                        .chain(["status"])
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
                out.push_str(
                    &flat
                        .iter()
                        .map(|(_, v)| v.as_str())
                        .chain([self.status.as_str()])
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
            }
            Payload::Reports(reports) => {
                for (i, r) in reports.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {}\n", r.problem));
                    out.push_str(&rounded_report(r, digits).to_csv());
                }
            }
        }
        if let Some(trace) = &self.trace {
            out.push_str("\nt,theta,g_value,eps,rate\n");
            for rec in trace {
                out.push_str(&trace_fields(rec, digits).join(","));
                out.push('\n');
            }
        }
        out
    }

    fn plain(&self, digits: usize) -> String {
        let mut out = String::new();
        match &self.payload {
            Payload::Record(m) => {
                for (k, v) in flatten(m, digits) {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            Payload::Reports(reports) => {
                for r in reports {
                    out.push_str(&format!("{} ({} reps, seed {})\n", r.problem, r.n_reps, r.seed));
                    out.push_str(&format!(
                        "  {:<10} {:>10} {:>12} {:>12}\n",
                        "algorithm", "percent", "mean_iters", "time_s"
                    ));
                    for row in &r.rows {
                        out.push_str(&format!(
                            "  {:<10} {:>10} {:>12} {:>12}\n",
                            row.algorithm.name(),
                            fmt_num(row.percentage_converged, digits),
                            fmt_num(row.mean_iterations, digits),
                            fmt_num(row.total_time_seconds, 4),
                        ));
                    }
                }
            }
        }
        out.push_str(&format!("status: {}\n", self.status));
        if let Some(trace) = &self.trace {
            out.push_str(&format!(
                "{:>4} {:>18} {:>18} {:>18} {:>12}\n",
                "t", "theta", "g", "eps", "rate"
            ));
            for rec in trace {
                let f = trace_fields(rec, digits);
                out.push_str(&format!(
                    "{:>4} {:>18} {:>18} {:>18} {:>12}\n",
                    f[0], f[1], f[2], f[3], f[4]
                ));
            }
        }
        out
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

pub fn fmt_num(x: f64, digits: usize) -> String {
    round_sig(x, digits).to_string()
}

fn round_value(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(round_sig(x, digits));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

fn scalar(v: &Value, digits: usize) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_num(n.as_f64().unwrap_or(f64::NAN), digits),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(|x| scalar(x, digits)).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn flatten(map: &Map<String, Value>, digits: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, v) in map {
        match v {
            Value::Object(inner) => {
                out.extend(
                    flatten(inner, digits)
                        .into_iter()
                        .map(|(ik, iv)| (format!("{k}.{ik}"), iv)),
                );
            }
            other => out.push((k.clone(), scalar(other, digits))),
        }
    }
    out
}

fn trace_fields(rec: &IterationRecord, digits: usize) -> [String; 5] {
    let opt = |x: Option<f64>| x.map_or(String::new(), |x| fmt_num(x, digits));
    [
        rec.t.to_string(),
        fmt_num(rec.theta, digits),
        fmt_num(rec.g_value, digits),
        opt(rec.eps),
        opt(rec.rate),
    ]
}

fn rounded_report(r: &ExperimentReport, digits: usize) -> ExperimentReport {
    let mut r = r.clone();
    for row in &mut r.rows {
        row.percentage_converged = round_sig(row.percentage_converged, digits);
        row.mean_iterations = round_sig(row.mean_iterations, digits);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(0.594_611_644_056_837_6, 10), 0.594_611_644_1);
        assert_eq!(round_sig(-1234.5678, 3), -1230.0);
        assert_eq!(round_sig(0.0, 4), 0.0);
    }

    #[test]
    fn json_round_trips() {
        let mut m = Map::new();
        m.insert("root".into(), json!(0.1 + 0.2));
        m.insert("n_iters".into(), json!(7));
        let text = Envelope::record(m, "Converged").render(Format::Json, 17);
        let v: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
        assert_eq!(v["result"]["root"].as_f64(), Some(0.1 + 0.2));
    }
}
