//! `socr`: classify slices of the 3x3 PSD cone, build and check lift
//! certificates, and represent spectrahedra.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 the
//! command ran and answered, 1 a claim failed, 2 bad input, 3 numerical
//! failure.

pub mod error;
pub mod files;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use socr_core::catalog::{eliptope, five_dimensional_slices};
use socr_core::classify::{classify_description_with, classify_orthogonal_with, self_test, Verdict, DET_TOL};
use socr_core::lift::{lift_description, preimage, LiftOptions};
use socr_core::slice::{slice_dimension_with, FacialOptions, SliceDescription};
use socr_core::spectra::{affine_soc_rep_with, agreement, image_subspace, Lmi, SpectraOutcome};
use socr_core::verify::{verify, VerifyOptions};
use socr_core::Subspace;

pub use error::CliError;
use files::{read_certificate, read_lmi, read_matrix, read_subspace, write_json, CertificateFile, MatrixFile};

#[derive(Debug, Parser)]
#[command(name = "socr", version, about = "Second-order cone representability of 3x3 PSD slices")]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide representability of S_B (--matrix B) or of the slice of a subspace.
    Classify {
        #[arg(long, conflicts_with = "subspace", required_unless_present = "subspace")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Relative determinant threshold for singularity.
        #[arg(long, default_value_t = DET_TOL)]
        tol: f64,
    },
    /// Build a self-verified lift certificate.
    Lift {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check a certificate against a subspace in both directions.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
        /// Forward samples; the backward check uses a tenth of them.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Forward tolerance; the backward one is never tighter than 1e-7.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Solve for the Q² point of a matrix under a certificate.
    Preimage {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Second-order cone representation of {x : A(x) + B ⪰ 0}.
    Spectra {
        #[arg(long)]
        lmi: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Points used to compare the representation with the LMI.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Built-in examples.
    Examples {
        #[arg(value_enum)]
        which: Example,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Table1,
    Eliptope,
}

/// JSON payload and exit code.
pub struct Outcome {
    pub payload: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Self { payload, code: 0 }
    }

    fn exit_if(payload: Value, failed: bool) -> Self {
        Self { payload, code: if failed { 1 } else { 0 } }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome { payload: json!({ "error": e.kind(), "message": e.to_string() }), code: e.exit_code() },
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Classify { matrix, subspace, tol } => classify(matrix.as_ref(), subspace.as_ref(), *tol, seed),
        Command::Lift { subspace, output } => lift(subspace, output, seed),
        Command::Verify { cert, subspace, samples, tol } => {
            let cert = read_certificate(cert)?;
            let l = read_subspace(subspace)?;
            let opts = verify_options(*samples, *tol, seed)?;
            let report = verify(&cert, &l, &opts);
            let mut payload = serde_json::to_value(&report).map_err(json_err)?;
            payload["forward_tol"] = json!(opts.forward_tol);
            payload["backward_tol"] = json!(opts.backward_tol);
            Ok(Outcome::exit_if(payload, !report.passed))
        }
        Command::Preimage { cert, matrix, tol } => {
            let cert = read_certificate(cert)?;
            let a = read_matrix(matrix)?;
            let p = preimage(&cert, &a, *tol)?;
            Ok(Outcome::ok(json!({
                "z": p.point.z,
                "residual": p.residual,
                "constraint_residual": p.constraint_residual,
                "cone_margin": p.cone_margin,
                "interval": p.interval,
            })))
        }
        Command::Spectra { lmi, output, samples } => {
            let lmi = read_lmi(lmi)?;
            let (payload, failed) = spectra(&lmi, *samples, seed, lmi.default_box())?;
            if let Some(path) = output {
                write_json(path, &payload)?;
            }
            Ok(Outcome::exit_if(payload, failed))
        }
        Command::Examples { which: Example::Table1 } => table1(seed),
        Command::Examples { which: Example::Eliptope } => {
            let lmi = eliptope();
            let image_dim = image_subspace(&lmi).dim();
            let (mut payload, failed) = spectra(&lmi, 10_000, seed, 1.2)?;
            payload["image_dim"] = json!(image_dim);
            payload["dimension_hypothesis_holds"] = json!(image_dim <= 4);
            Ok(Outcome::exit_if(payload, failed || image_dim > 4))
        }
    }
}

pub fn verify_options(samples: usize, tol: f64, seed: u64) -> Result<VerifyOptions, CliError> {
    if samples == 0 || !(tol > 0.0) {
        return Err(CliError::Format("--samples must be positive and --tol a positive number".into()));
    }
    Ok(VerifyOptions {
        forward_samples: samples,
        backward_samples: (samples / 10).max(1),
        seed,
        forward_tol: tol,
        backward_tol: tol.max(1e-7),
    })
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Format(e.to_string())
}

fn describe(l: &Subspace, seed: u64) -> Result<SliceDescription, CliError> {
    Ok(slice_dimension_with(l, &FacialOptions { seed, ..FacialOptions::default() })?)
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "socr": v.socr,
        "reason": v.reason.as_str(),
        "dim_s": v.dim_s,
        "marginal": v.marginal,
        "witness_b": v.witness_b.as_ref().map(|b| b.to_rows()),
    })
}

fn classify(matrix: Option<&PathBuf>, subspace: Option<&PathBuf>, tol: f64, seed: u64) -> Result<Outcome, CliError> {
    self_test()?;
    if let Some(path) = matrix {
        let b = read_matrix(path)?;
        let v = classify_orthogonal_with(&b, tol)?;
        let mut payload = verdict_json(&v);
        payload["input"] = json!("matrix");
        return Ok(Outcome::ok(payload));
    }
    let path = subspace.ok_or_else(|| CliError::Format("one of --matrix and --subspace is required".into()))?;
    let l = read_subspace(path)?;
    let desc = describe(&l, seed)?;
    let v = classify_description_with(&desc, tol)?;
    let mut payload = verdict_json(&v);
    payload["input"] = json!("subspace");
    payload["subspace_dim"] = json!(l.dim());
    payload["max_rank"] = json!(desc.witness.rank);
    Ok(Outcome::ok(payload))
}

fn lift_options(seed: u64) -> LiftOptions {
    let d = LiftOptions::default();
    LiftOptions { verify: d.verify.map(|v| VerifyOptions { seed, ..v }) }
}

fn lift(subspace: &PathBuf, output: &PathBuf, seed: u64) -> Result<Outcome, CliError> {
    let l = read_subspace(subspace)?;
    let desc = describe(&l, seed)?;
    let v = classify_description_with(&desc, DET_TOL)?;
    if !v.socr {
        let mut payload = verdict_json(&v);
        payload["error"] = json!("NotSocr");
        return Ok(Outcome::exit_if(payload, true));
    }
    let cert = lift_description(&desc, &v, &lift_options(seed))?;
    write_json(output, &CertificateFile::from_certificate(&cert))?;
    Ok(Outcome::ok(json!({
        "output": output.display().to_string(),
        "provenance": cert.provenance.as_str(),
        "e_rank": cert.e_rank(),
        "g_rank": cert.g_rank(),
        "dim_s": desc.dim_s,
    })))
}

/// Payload and whether the representation disagreed with the LMI.
fn spectra(lmi: &Lmi, samples: usize, seed: u64, half_width: f64) -> Result<(Value, bool), CliError> {
    match affine_soc_rep_with(lmi, &lift_options(seed))? {
        SpectraOutcome::Inapplicable { verdict } => Ok((
            json!({
                "status": "Inapplicable",
                "verdict": verdict_json(&verdict),
                "note": "the slice is not representable, so this construction does not apply; \
                         the spectrahedron itself may still be representable",
            }),
            false,
        )),
        SpectraOutcome::Represented(rep) => {
            let stats = agreement(&rep, lmi, samples, seed, half_width);
            let payload = json!({
                "status": "Represented",
                "n": rep.n,
                "H_x": rep.h_x,
                "H_z": rep.h_z,
                "h": rep.h,
                "cone": rep.cone,
                "certificate": CertificateFile::from_certificate(&rep.certificate),
                "agreement": stats,
            });
            Ok((payload, !stats.passed))
        }
    }
}

fn table1(seed: u64) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut all = true;
    for ex in five_dimensional_slices() {
        let desc = describe(&ex.subspace(), seed)?;
        let v = classify_description_with(&desc, DET_TOL)?;
        let by_normal = classify_orthogonal_with(&ex.normal, DET_TOL)?;
        let ok = v.socr == ex.expected_socr && by_normal.socr == ex.expected_socr;
        all &= ok;
        rows.push(json!({
            "name": ex.name,
            "slice": ex.description,
            "normal": MatrixFile::from_sym(&ex.normal).matrix,
            "det_normal": ex.normal.det(),
            "socr": v.socr,
            "expected": ex.expected_socr,
            "reason": v.reason.as_str(),
            "match": ok,
        }));
    }
    Ok(Outcome::exit_if(json!({ "rows": rows, "all_match": all }), !all))
}

/// Renders a payload for stdout.
pub fn render(payload: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(payload).expect("values serialize")
    } else {
        serde_json::to_string(payload).expect("values serialize")
    }
}
