//! `runner-spectrum`: exact D-values and relative spectra from the command line.

mod output;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectrum_core::spectrum::certify::{certify, pair_value};
use spectrum_core::spectrum::{ExceptionalValue, Progression};
use spectrum_core::{
    d_line_oracle, d_plane, enumerate_2d_subtori, finiteness, parse_basis, parse_int_vector, parse_rational,
    relative_spectrum, zero_locus, Error, Int, Rational, SpectrumDescription, SpectrumOptions, Subtorus1D,
    Subtorus2D,
};

use output::{basis_string, SpectrumJson};

#[derive(Parser)]
#[command(name = "runner-spectrum", version, about = "Exact Lonely Runner D-values and relative spectra")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// D-value of a line `<v>` or of a plane `<u, v>`.
    D {
        #[arg(long, conflicts_with = "basis", required_unless_present = "basis")]
        vector: Option<String>,
        #[arg(long)]
        basis: Option<String>,
    },
    /// Relative spectrum of a two-dimensional subtorus.
    Spectrum {
        #[arg(long)]
        basis: String,
        #[arg(long, default_value_t = 200)]
        certify_bound: i64,
        #[arg(long, default_value_t = 10)]
        witness_range: i64,
        /// Skip mirrored components using `D_l(x) = D_{-l}(-x)`.
        #[arg(long)]
        tau_symmetry: bool,
        /// Print the sector or half-line records.
        #[arg(long)]
        trace: bool,
    },
    /// Proper planes in `(R/Z)^n` with the given D-value, up to signed permutation.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: String,
    },
    /// Whether the relative spectrum is finite, with two non-parallel segments as witness.
    Finiteness {
        #[arg(long)]
        basis: String,
    },
    /// Points of the plane where `D` equals `D(U)`.
    ZeroLocus {
        #[arg(long)]
        basis: String,
    },
    /// Classify every line with `max(|A|, |B|) <= bound`.
    Certify {
        #[arg(long)]
        basis: String,
        #[arg(long, default_value_t = 200)]
        bound: i64,
    },
    /// Re-certify a saved `spectrum --format json` result.
    Verify {
        /// Overrides the basis recorded in the file.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        input: String,
    },
}

enum Failure {
    Lib(Error),
    Parse(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(e) if e.is_parse() => "parse",
            Failure::Lib(e) if e.is_unsupported() => "unsupported",
            Failure::Parse(_) => "parse",
            _ => "domain",
        }
    }

    fn code(&self) -> u8 {
        match self.kind() {
            "parse" => 2,
            "unsupported" => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Parse(m) | Failure::Domain(m) => m.clone(),
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

type Run = std::result::Result<String, Failure>;

fn plane(basis: &str) -> std::result::Result<Subtorus2D, Failure> {
    let (u, v) = parse_basis(basis)?;
    let s = Subtorus2D::new(u, v)?;
    if !s.is_proper() {
        return Err(Error::ImproperSubtorus.into());
    }
    Ok(s)
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serialisable");
    s.push('\n');
    s
}

fn cmd_d(vector: Option<String>, basis: Option<String>, format: Format) -> Run {
    let d = match (vector, basis) {
        (Some(v), _) => d_line_oracle(&Subtorus1D::new(parse_int_vector(&v)?)?)?,
        (None, Some(b)) => d_plane(&plane(&b)?)?,
        (None, None) => return Err(Failure::Parse("one of --vector or --basis is required".into())),
    };
    let d = spectrum_core::format_rational(&d);
    Ok(match format {
        Format::Json => json(&serde_json::json!({ "d_value": d })),
        _ => format!("{d}\n"),
    })
}

fn options(certify_bound: i64, witness_range: i64, tau_symmetry: bool) -> std::result::Result<SpectrumOptions, Failure> {
    if certify_bound < 1 || witness_range < 0 {
        return Err(Failure::Domain("certify bound must be positive and witness range non-negative".into()));
    }
    Ok(SpectrumOptions {
        tau_symmetry,
        certify_bound,
        witness_range,
    })
}

fn cmd_spectrum(basis: &str, opts: &SpectrumOptions, trace: bool, format: Format) -> Run {
    let u = plane(basis)?;
    let (desc, analysis, _) = relative_spectrum(&u, opts)?;
    Ok(match format {
        Format::Json => json(&output::spectrum_json(&u, &desc)),
        _ => {
            let mut out = String::new();
            if trace {
                out.push_str(&analysis.trace());
            }
            out.push_str(&output::spectrum_text(&desc));
            out
        }
    })
}

fn cmd_enumerate(n: usize, d: &str, format: Format) -> Run {
    let d = parse_rational(d)?;
    let planes = enumerate_2d_subtori(n, &d)?;
    let keys: Vec<String> = planes.iter().map(basis_string).collect();
    Ok(match format {
        Format::Json => json(&keys),
        _ => keys.iter().map(|k| format!("{k}\n")).collect(),
    })
}

fn cmd_finiteness(basis: &str, format: Format) -> Run {
    let f = finiteness(&plane(basis)?)?;
    Ok(match format {
        Format::Json => json(&output::finiteness_json(&f)),
        _ => output::finiteness_text(&f),
    })
}

fn cmd_zero_locus(basis: &str, format: Format) -> Run {
    let z = zero_locus(&plane(basis)?)?;
    Ok(match format {
        Format::Json => json(&z.iter().map(output::locus_json).collect::<Vec<_>>()),
        _ => z.iter().map(|e| output::locus_text(e) + "\n").collect(),
    })
}

fn cmd_certify(basis: &str, bound: i64, format: Format) -> Run {
    let u = plane(basis)?;
    let (_, _, report) = relative_spectrum(&u, &options(bound, 0, false)?)?;
    let rows: Vec<_> = report.pairs.iter().map(output::certified_row).collect();
    if format == Format::Json {
        return Ok(json(&rows));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Failure::Domain(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_int(s: &str) -> std::result::Result<Int, Failure> {
    s.parse::<Int>().map_err(|_| Failure::Parse(format!("invalid integer `{s}`")))
}

/// Rebuild the description stored in a saved result.
fn description(saved: &SpectrumJson) -> std::result::Result<SpectrumDescription, Failure> {
    let mut progressions = Vec::new();
    for p in &saved.progressions {
        progressions.push(Progression::new(parse_rational(&p.alpha)?, parse_rational(&p.beta)?));
    }
    let mut exceptional_values = Vec::new();
    for e in &saved.exceptional_values {
        exceptional_values.push(ExceptionalValue {
            value: parse_rational(&e.value)?,
            a: parse_int(&e.a)?,
            b: parse_int(&e.b)?,
        });
    }
    Ok(SpectrumDescription {
        d_value: parse_rational(&saved.d_value)?,
        progressions,
        base_value_attained: saved.base_value_attained,
        exceptional_values,
        certified_bound: saved.certified_bound,
    })
}

fn small(x: &str) -> std::result::Result<i64, Failure> {
    x.parse::<i64>().map_err(|_| Failure::Parse(format!("pair entry `{x}` is not a machine integer")))
}

fn cmd_verify(basis: Option<String>, input: &str, format: Format) -> Run {
    let text = std::fs::read_to_string(input).map_err(|e| Failure::Domain(format!("cannot read {input}: {e}")))?;
    let saved: SpectrumJson =
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("invalid spectrum file: {e}")))?;
    let u = plane(basis.as_deref().unwrap_or(&saved.basis))?;
    let desc = description(&saved)?;
    let p = u.projected();
    let mut mismatches = Vec::new();

    let d = d_plane(&u)?;
    if d != desc.d_value {
        mismatches.push(format!("d_value: saved {}, computed {}", saved.d_value, spectrum_core::format_rational(&d)));
    }

    // Independent sweep against the saved progressions.
    let report = certify(&p, &desc, desc.certified_bound)?;
    let found: BTreeSet<&Rational> = report.exceptional.iter().map(|e| &e.value).collect();
    let saved_exc: BTreeSet<&Rational> = desc.exceptional_values.iter().map(|e| &e.value).collect();
    if found != saved_exc {
        mismatches.push("exceptional values differ from the sweep".into());
    }
    for e in &saved.exceptional_values {
        let v = pair_value(&p, small(&e.a)?, small(&e.b)?)?;
        if v.as_ref().map(spectrum_core::format_rational).as_deref() != Some(e.value.as_str()) {
            mismatches.push(format!("exceptional {} is not D at ({},{})", e.value, e.a, e.b));
        }
    }
    if report.base_count > 0 && !desc.base_value_attained {
        mismatches.push("base value is attained but recorded as unattained".into());
    }
    for (prog, pj) in desc.progressions.iter().zip(&saved.progressions) {
        for w in &pj.witnesses {
            let expected = &desc.d_value + prog.offset(&parse_int(&w.s)?);
            if pair_value(&p, small(&w.a)?, small(&w.b)?)? != Some(expected) {
                mismatches.push(format!("witness s={} ({},{}) of {} fails", w.s, w.a, w.b, pj.scaled));
            }
        }
    }

    // Full recomputation with the same bound.
    let range = saved
        .progressions
        .iter()
        .map(|p| p.witnesses.len() + p.unwitnessed.len())
        .max()
        .map_or(10, |n| n as i64 - 1);
    let (fresh, _, _) = relative_spectrum(&u, &options(desc.certified_bound, range, false)?)?;
    let mut fresh = output::spectrum_json(&u, &fresh);
    fresh.basis = saved.basis.clone();
    if fresh != saved {
        mismatches.push("recomputed description differs from the saved one".into());
    }

    if !mismatches.is_empty() {
        let mut m = String::from("verification failed");
        for x in &mismatches {
            let _ = write!(m, "\n  {x}");
        }
        return Err(Failure::Domain(m));
    }
    Ok(match format {
        Format::Json => json(&serde_json::json!({ "verified": true, "pairs": report.pairs.len() })),
        _ => format!("verified: {} pairs, bound {}\n", report.pairs.len(), desc.certified_bound),
    })
}

fn run(cli: Cli) -> Run {
    let f = cli.format;
    match cli.command {
        Command::D { vector, basis } => cmd_d(vector, basis, f),
        Command::Spectrum {
            basis,
            certify_bound,
            witness_range,
            tau_symmetry,
            trace,
        } => cmd_spectrum(&basis, &options(certify_bound, witness_range, tau_symmetry)?, trace, f),
        Command::Enumerate { n, d } => cmd_enumerate(n, &d, f),
        Command::Finiteness { basis } => cmd_finiteness(&basis, f),
        Command::ZeroLocus { basis } => cmd_zero_locus(&basis, f),
        Command::Certify { basis, bound } => cmd_certify(&basis, bound, f),
        Command::Verify { basis, input } => cmd_verify(basis, &input, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if format == Format::Json {
                print!(
                    "{}",
                    json(&ErrorJson {
                        error: ErrorBody {
                            kind: e.kind(),
                            message: e.message(),
                        },
                    })
                );
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.code())
        }
    }
}
