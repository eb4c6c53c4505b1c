use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use grandnet::GridFunction;
use serde::Serialize;

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum FunctionRepr {
    Object(GridFunction),
    Values(Vec<f64>),
}

/// A function from `--values` or from a JSON (`{"n", "values"}` or a bare
/// array) or CSV file.
pub fn load_function(values: Option<&str>, input: Option<&Path>) -> Result<GridFunction, CliError> {
    match (values, input) {
        (Some(_), Some(_)) => Err(CliError::Input("give either --values or --input, not both".into())),
        (None, None) => Err(CliError::Input("a function is required: pass --values or --input".into())),
        (Some(v), None) => GridFunction::new(parse_list(v, "--values")?).map_err(CliError::from),
        (None, Some(path)) => {
            let text = read_text(path)?;
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                let mut out = Vec::new();
                for (k, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let at = format!("{} line {}", path.display(), k + 1);
                    out.extend(parse_list(line, &at)?);
                }
                return GridFunction::new(out).map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
            }
            let f = match parse_json::<FunctionRepr>(path, &text)? {
                FunctionRepr::Object(f) => f,
                FunctionRepr::Values(v) => GridFunction::new(v).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
            };
            Ok(f)
        }
    }
}

/// A list of functions: a JSON array whose entries are objects or arrays.
pub fn load_corpus(path: &Path) -> Result<Vec<GridFunction>, CliError> {
    let text = read_text(path)?;
    let raw: Vec<FunctionRepr> = parse_json(path, &text)?;
    raw.into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            FunctionRepr::Object(f) => Ok(f),
            FunctionRepr::Values(v) => {
                GridFunction::new(v).map_err(|e| CliError::Input(format!("{} entry {i}: {e}", path.display())))
            }
        })
        .collect()
}

fn parse_list(s: &str, at: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| CliError::Input(format!("{at}: bad number `{t}`: {e}"))))
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Write to `out` through a temporary file in the same directory, or to
/// stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Output(format!("stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.flush().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
