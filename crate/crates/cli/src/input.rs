//! Request payloads and JSON decoding with pointer paths.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_path_to_error::{Path, Segment};

use detrep::degmatrix::MatrixError;
use detrep::series::{PropertyKind, ShiftedProperty};

/// An input problem, located by a JSON pointer when possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub message: String,
    /// Which argument the pointer refers into: a flag name, or `"stdin"`.
    pub source: Option<String>,
    pub path: Option<String>,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError {
            message: message.into(),
            source: None,
            path: None,
        }
    }

    pub fn at(mut self, source: &str, path: String) -> Self {
        self.source = Some(source.to_string());
        self.path = Some(path);
        self
    }
}

fn pointer(path: &Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn strip_position(msg: String) -> String {
    // serde_json appends "at line L column C", which is noise next to a pointer
    match msg.find(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    }
}

/// Parses `text` as JSON into `T`; errors carry a pointer under `prefix`.
pub fn parse_json<T: DeserializeOwned>(
    text: &str,
    source: &str,
    prefix: &str,
) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = format!("{prefix}{}", pointer(e.path()));
        InputError::new(strip_position(e.into_inner().to_string())).at(source, path)
    })?;
    Ok(value)
}

pub fn from_value<T: DeserializeOwned>(
    value: serde_json::Value,
    source: &str,
    prefix: &str,
) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = format!("{prefix}{}", pointer(e.path()));
        InputError::new(e.into_inner().to_string()).at(source, path)
    })
}

/// Locates a matrix error inside the grid found at `prefix`.
pub fn matrix_error(e: &MatrixError, source: &str, prefix: &str) -> InputError {
    let err = InputError::new(e.to_string());
    match *e {
        MatrixError::Ragged { row, .. } => err.at(source, format!("{prefix}/{row}")),
        MatrixError::EntryOutOfRange { row, col, .. } => {
            err.at(source, format!("{prefix}/{row}/{col}"))
        }
        MatrixError::NotHomogeneous { rows, cols } => {
            err.at(source, format!("{prefix}/{}/{}", rows.1, cols.1))
        }
        _ => err.at(source, prefix.to_string()),
    }
}

pub type Grid = Vec<Vec<i64>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPayload {
    pub matrix: Grid,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubschemePayload {
    pub matrix: Grid,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanPayload {
    pub matrix: Grid,
    #[serde(default)]
    pub dmax: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct HfPayload {
    pub gens: Vec<i64>,
    pub syz: Vec<i64>,
    #[serde(default)]
    pub tmax: Option<i64>,
    #[serde(default)]
    pub stratum_dim: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HPayload {
    pub h: Vec<i64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertySpec {
    pub shift: i64,
    pub kind: KindSpec,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub enum KindSpec {
    Nonspecial,
    Effective,
}

impl From<PropertySpec> for ShiftedProperty {
    fn from(p: PropertySpec) -> Self {
        ShiftedProperty {
            shift: p.shift,
            kind: match p.kind {
                KindSpec::Nonspecial => PropertyKind::Nonspecial,
                KindSpec::Effective => PropertyKind::Effective,
            },
        }
    }
}

/// Parses `z:kind`, e.g. `1:nonspecial` or `-1:effective`.
pub fn parse_property(text: &str) -> Result<PropertySpec, String> {
    let (z, kind) = text
        .split_once(':')
        .ok_or_else(|| format!("expected SHIFT:KIND, got {text:?}"))?;
    let shift = z.trim().parse().map_err(|_| format!("bad shift {z:?}"))?;
    let kind = match kind.trim() {
        "nonspecial" => KindSpec::Nonspecial,
        "effective" => KindSpec::Effective,
        other => {
            return Err(format!(
                "unknown property {other:?}; expected nonspecial or effective"
            ))
        }
    };
    Ok(PropertySpec { shift, kind })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SeriesPayload {
    pub degree: i64,
    pub divisor_degree: i64,
    pub dim: i64,
    #[serde(default)]
    pub properties: Vec<PropertySpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessPayload {
    pub matrix: Grid,
    /// Present for a subscheme check; absent for a square matrix.
    #[serde(default)]
    pub degree: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumeratePayload {
    pub n: usize,
    pub degree: i64,
    pub bound: i64,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub dmax: Option<i64>,
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    CheckRepresentable,
    CheckSubscheme,
    Corollary,
    Threshold,
    Scan,
    Hf,
    BettiFromHf,
    Series,
    Witness,
    Enumerate,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestEnvelope {
    pub command: CommandName,
    pub payload: serde_json::Value,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug)]
pub enum Request {
    CheckRepresentable(MatrixPayload),
    CheckSubscheme(SubschemePayload),
    Corollary(SubschemePayload),
    Threshold(MatrixPayload),
    Scan(ScanPayload),
    Hf(HfPayload),
    BettiFromHf(HPayload),
    Series(SeriesPayload),
    Witness(WitnessPayload),
    Enumerate(EnumeratePayload),
}

impl RequestEnvelope {
    pub fn into_request(self) -> Result<(Request, Options), InputError> {
        const SRC: &str = "stdin";
        const AT: &str = "/payload";
        let p = self.payload;
        let req = match self.command {
            CommandName::CheckRepresentable => Request::CheckRepresentable(from_value(p, SRC, AT)?),
            CommandName::CheckSubscheme => Request::CheckSubscheme(from_value(p, SRC, AT)?),
            CommandName::Corollary => Request::Corollary(from_value(p, SRC, AT)?),
            CommandName::Threshold => Request::Threshold(from_value(p, SRC, AT)?),
            CommandName::Scan => Request::Scan(from_value(p, SRC, AT)?),
            CommandName::Hf => Request::Hf(from_value(p, SRC, AT)?),
            CommandName::BettiFromHf => Request::BettiFromHf(from_value(p, SRC, AT)?),
            CommandName::Series => Request::Series(from_value(p, SRC, AT)?),
            CommandName::Witness => Request::Witness(from_value(p, SRC, AT)?),
            CommandName::Enumerate => Request::Enumerate(from_value(p, SRC, AT)?),
        };
        Ok((req, self.options))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointers_into_arguments() {
        let err = parse_json::<Grid>("[[1,2],[3,\"x\"]]", "--matrix", "").unwrap_err();
        assert_eq!(err.path.as_deref(), Some("/1/1"));
        assert_eq!(err.source.as_deref(), Some("--matrix"));
    }

    #[test]
    fn unknown_payload_fields_are_rejected() {
        let env: RequestEnvelope = parse_json(
            r#"{"command":"threshold","payload":{"matrix":[[1,1]],"extra":1}}"#,
            "stdin",
            "",
        )
        .unwrap();
        let err = env.into_request().unwrap_err();
        assert_eq!(err.path.as_deref(), Some("/payload/extra"));
        assert!(err.message.contains("unknown field"), "{}", err.message);
    }

    #[test]
    fn properties() {
        let p = parse_property("-1:effective").unwrap();
        assert_eq!((p.shift, p.kind), (-1, KindSpec::Effective));
        assert!(parse_property("1:special").is_err());
        assert!(parse_property("1").is_err());
    }
}
