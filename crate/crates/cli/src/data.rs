use std::fs;
use std::path::Path;

#[derive(Debug)]
pub struct DataError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for DataError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// One number per line; blank lines and lines starting with `#` are skipped.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, DataError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(x) if x.is_finite() => out.push(x),
            _ => {
                return Err(DataError {
                    line: Some(i + 1),
                    message: format!("not a finite number: {line:?}"),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_numbers(path: &Path) -> Result<Vec<f64>, DataError> {
    let text = fs::read_to_string(path).map_err(|e| DataError {
        line: None,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_numbers(&text)
}
