//! JSON wire formats. Every number is a string in `"p/q"` or decimal form on
//! input, and canonical `"p/q"` on output.

use std::fmt;

use crate::principle::EkelandCertificate;
use crate::space::{validate, Instance, RawInstance, ValidationReport};

/// The instance document: `dim`, `labels`, `dist`, `f`, `cone_generators`,
/// `d_vertices` and an optional `epsilon` (default `"1"`).
pub type InstanceFile = RawInstance;

/// The certificate document mirrors [`EkelandCertificate`] field for field.
pub type CertificateFile = EkelandCertificate;

#[derive(Debug)]
pub enum LoadError {
    Parse(serde_json::Error),
    Invalid(ValidationReport),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(e) => write!(f, "parse error: {e}"),
            LoadError::Invalid(r) => write!(f, "invalid instance:\n{r}"),
        }
    }
}

impl std::error::Error for LoadError {}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn parse_instance(text: &str) -> Result<Instance, LoadError> {
    let raw = parse_instance_file(text).map_err(LoadError::Parse)?;
    validate(&raw).map_err(LoadError::Invalid)
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&inst.to_raw()).expect("instance serializes")
}

pub fn parse_certificate(text: &str) -> Result<EkelandCertificate, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn certificate_to_json(cert: &EkelandCertificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificate serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{
        "dim": 2,
        "labels": ["x0", "x1", "x2"],
        "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
        "f": [["2", "2"], ["1", "1"], ["1", "0"]],
        "cone_generators": [["1", "0"], ["0", "1"]],
        "d_vertices": [["1", "0"], ["0.0", "1.0"]]
    }"#;

    #[test]
    fn epsilon_defaults_to_one() {
        let inst = parse_instance(CHAIN).unwrap();
        assert_eq!(inst.epsilon(), &crate::Rational::one());
    }

    #[test]
    fn binary_floats_are_rejected() {
        let text = CHAIN.replace(r#"["1", "1"]"#, "[1, 1]");
        assert!(matches!(parse_instance(&text), Err(LoadError::Parse(_))));
    }

    #[test]
    fn empty_document_is_a_parse_error() {
        assert!(matches!(parse_instance(""), Err(LoadError::Parse(_))));
    }

    #[test]
    fn canonical_output() {
        let inst = parse_instance(CHAIN).unwrap();
        let json = instance_to_json(&inst);
        assert!(json.contains(r#""0/1""#));
        assert!(!json.contains("0.0"));
        assert_eq!(parse_instance(&json).unwrap(), inst);
    }
}
