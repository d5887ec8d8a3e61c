//! JSON file formats.
//!
//! Floats are written as shortest round-trip decimals and parsed exactly, so
//! a certificate survives save/load bit for bit.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use socr_core::lift::{Aux, COORDINATE_CONVENTION};
use socr_core::spectra::Lmi;
use socr_core::{LiftCertificate, Provenance, Subspace, SymMat3, Vec6};

use crate::error::CliError;

/// `{"matrix": [[..],[..],[..]]}` or `{"svec": [6 numbers]}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svec: Option<[f64; 6]>,
}

impl MatrixFile {
    pub fn from_sym(a: &SymMat3) -> Self {
        Self { matrix: Some(a.to_rows()), svec: None }
    }

    pub fn to_sym(&self) -> Result<SymMat3, CliError> {
        let a = match (&self.matrix, &self.svec) {
            (Some(rows), None) => SymMat3::from_rows(rows)?,
            (None, Some(v)) => SymMat3::smat(&Vec6(*v)),
            _ => return Err(CliError::Format("a matrix needs exactly one of \"matrix\" and \"svec\"".into())),
        };
        if !a.is_finite() {
            return Err(CliError::Format("matrix has non-finite entries".into()));
        }
        Ok(a)
    }
}

/// `{"generators": [MatrixFile, ...]}`; generators may be dependent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub generators: Vec<MatrixFile>,
}

impl SubspaceFile {
    pub fn from_matrices(mats: &[SymMat3]) -> Self {
        Self { generators: mats.iter().map(MatrixFile::from_sym).collect() }
    }

    pub fn to_subspace(&self) -> Result<Subspace, CliError> {
        let mats = self.generators.iter().map(MatrixFile::to_sym).collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::from_matrices(&mats))
    }
}

/// `{"A": [MatrixFile, ...], "B": MatrixFile}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmiFile {
    #[serde(rename = "A")]
    pub a: Vec<MatrixFile>,
    #[serde(rename = "B")]
    pub b: MatrixFile,
}

impl LmiFile {
    pub fn from_lmi(lmi: &Lmi) -> Self {
        Self { a: lmi.coeffs.iter().map(MatrixFile::from_sym).collect(), b: MatrixFile::from_sym(&lmi.offset) }
    }

    pub fn to_lmi(&self) -> Result<Lmi, CliError> {
        let coeffs = self.a.iter().map(MatrixFile::to_sym).collect::<Result<Vec<_>, _>>()?;
        Ok(Lmi::new(coeffs, self.b.to_sym()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub m: usize,
    #[serde(rename = "G")]
    pub g: [[f64; 6]; 6],
    #[serde(rename = "E")]
    pub e: Vec<[f64; 6]>,
    pub provenance: String,
    pub coordinate_convention: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<Aux>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &LiftCertificate) -> Self {
        Self {
            m: cert.m,
            g: cert.g,
            e: cert.e.clone(),
            provenance: cert.provenance.as_str().into(),
            coordinate_convention: COORDINATE_CONVENTION.into(),
            aux: cert.aux.clone(),
        }
    }

    pub fn to_certificate(&self) -> Result<LiftCertificate, CliError> {
        if self.m != 2 {
            return Err(CliError::Format(format!("only m = 2 certificates are supported, got m = {}", self.m)));
        }
        if self.coordinate_convention != COORDINATE_CONVENTION {
            return Err(CliError::Format(format!(
                "unknown coordinate convention {:?}, expected {COORDINATE_CONVENTION:?}",
                self.coordinate_convention
            )));
        }
        let provenance = Provenance::parse(&self.provenance)
            .ok_or_else(|| CliError::Format(format!("unknown provenance {:?}", self.provenance)))?;
        let cert = LiftCertificate { m: 2, g: self.g, e: self.e.clone(), provenance, aux: self.aux.clone() };
        if !cert.is_finite() {
            return Err(CliError::Format("certificate has non-finite entries".into()));
        }
        Ok(cert)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Format(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<SymMat3, CliError> {
    read_json::<MatrixFile>(path)?.to_sym()
}

pub fn read_subspace(path: &Path) -> Result<Subspace, CliError> {
    read_json::<SubspaceFile>(path)?.to_subspace()
}

pub fn read_certificate(path: &Path) -> Result<LiftCertificate, CliError> {
    read_json::<CertificateFile>(path)?.to_certificate()
}

pub fn read_lmi(path: &Path) -> Result<Lmi, CliError> {
    read_json::<LmiFile>(path)?.to_lmi()
}
