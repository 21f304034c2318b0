//! Command-line front end.
//!
//! [`run`] parses arguments, writes to the given streams and returns the
//! process exit status, so the binary is a thin wrapper and the whole
//! interface can be driven from tests.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::angles::parse_angles;
use crate::classifier::{classify, Certificate, Verdict};
use crate::geometry::{
    build_football, football_surface_report, glue_surface, octant_double, surface_report, torus_example,
    GluedSurface, GluingDescription, SurfaceReport, DEFAULT_TOLERANCE,
};
use crate::lattice::nearest_odd;
use crate::rational::RationalScalar;
use crate::sweep::{run_sweep, Axis, RegionSweepSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_ADMISSIBLE: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_AUDIT_FAILED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

const MANUAL: &str = "\
DESCRIPTION
    Decides whether a vector of cone angles 2πθ₁, …, 2πθₙ is realised by a
    spherical metric (curvature 1) on the 2-sphere, and audits constructed
    spherical surfaces. All classifier arithmetic is exact; angle tokens are
    INT, INT/POSINT or DECIMAL (\"1.2\" means exactly 6/5).

COMMANDS
    check [θ...]        Classify θ; prints a certificate.
    distance v...       ℓ¹ distance from v to integer points with odd sum.
    region ...          Classify every point of an exact rational grid.
    surface [PATH]      Audit a gluing description (JSON) or a builtin.

REGION SWEEPS
    region --n 3 --fix 3=1/2 --vary 1=1/10:3:1/10 --vary 2=1/10:3:1/10
    Coordinates are 1-based. Each coordinate is fixed or varied exactly once;
    one or two axes may vary. Grid values are MIN + k·STEP ≤ MAX. Rows are
    emitted in lexicographic order, first axis slowest. --format text|csv
    emits CSV (axis values, verdict, rule, chi, distance); --format json
    emits one certificate per line, identical to `check --format json`.

SURFACES
    Builtins: torus-example, octant-double, football:θ (e.g. football:3/2).
    Gluing JSON: {\"triangles\": [{\"id\": \"t1\", \"angles_pi\": [\"1/2\",\"1/2\",\"1/2\"]}],
                  \"pairings\": [{\"a\": [\"t1\", 0], \"b\": [\"t2\", 0], \"reversed\": false}]}
    Angles are rational multiples of π; slot k is the side opposite corner k.
    Singular-point distances are shortest paths in the glued edge graph and
    are upper bounds on the intrinsic distance.

EXIT STATUS
    check:    0 Admissible, 1 NotAdmissible, 2 Unknown
    surface:  0 audits pass, 3 an audit failed (edge lengths, closedness,
              triangle validity, Gauss–Bonnet)
    all:      64 usage or input error

LIMITATIONS
    Angles are rational. Irrational θ can only be approximated, and an
    approximation may land on or off the d = 1 equality stratum.
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "conemetric",
    version,
    about = "Exact admissibility of cone angles for spherical metrics on the 2-sphere",
    after_long_help = MANUAL
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Tolerance for geometry audits
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an angle vector θ (cone angles 2πθᵢ)
    Check {
        #[arg(allow_hyphen_values = true)]
        angles: Vec<String>,
    },
    /// Distance from a rational point to the odd integer lattice
    Distance {
        #[arg(required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Classify every point of an exact rational grid slice
    Region {
        /// Number of coordinates
        #[arg(long)]
        n: usize,
        /// Fixed coordinate, INDEX=VALUE (1-based)
        #[arg(long = "fix", value_name = "INDEX=VALUE")]
        fix: Vec<String>,
        /// Varying coordinate, INDEX=MIN:MAX:STEP (1-based)
        #[arg(long = "vary", value_name = "INDEX=MIN:MAX:STEP")]
        vary: Vec<String>,
    },
    /// Audit a glued surface from a JSON description or a builtin
    Surface {
        /// Path to a gluing description
        path: Option<PathBuf>,
        /// torus-example, octant-double or football:θ
        #[arg(long, conflicts_with = "path")]
        builtin: Option<String>,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Run the command line and return the exit status.
pub fn run<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args.iter().map(|a| a.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, UsageError> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(UsageError(format!("tolerance must be positive, got {}", cli.tolerance)));
    }
    match &cli.command {
        Command::Check { angles } => cmd_check(angles, cli.format, out),
        Command::Distance { values } => cmd_distance(values, cli.format, out),
        Command::Region { n, fix, vary } => {
            let spec = parse_region(*n, fix, vary)?;
            cmd_region(&spec, cli.format, out)
        }
        Command::Surface { path, builtin } => {
            cmd_surface(path.as_deref(), builtin.as_deref(), cli.format, cli.tolerance, out, err)
        }
    }
}

fn reject_csv(format: Format, command: &str) -> Result<(), UsageError> {
    if format == Format::Csv {
        return Err(UsageError(format!("`{command}` supports --format text or json")));
    }
    Ok(())
}

fn write_certificate(cert: &Certificate, format: Format, out: &mut dyn Write) -> Result<(), UsageError> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(cert)?)?,
        _ => write!(out, "{cert}")?,
    }
    Ok(())
}

/// Exit status for a certificate; depends on the verdict only.
pub fn cmd_check_exit_code(cert: &Certificate) -> u8 {
    match cert.verdict {
        Verdict::Admissible => EXIT_OK,
        Verdict::NotAdmissible => EXIT_NOT_ADMISSIBLE,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn cmd_check(tokens: &[String], format: Format, out: &mut dyn Write) -> Result<u8, UsageError> {
    reject_csv(format, "check")?;
    let theta = parse_angles(tokens)?;
    let cert = classify(&theta);
    write_certificate(&cert, format, out)?;
    Ok(cmd_check_exit_code(&cert))
}

#[derive(Serialize)]
struct DistanceRecord {
    distance: RationalScalar,
    witness: Vec<serde_json::Number>,
    per_coordinate_cost: Vec<RationalScalar>,
}

fn cmd_distance(tokens: &[String], format: Format, out: &mut dyn Write) -> Result<u8, UsageError> {
    reject_csv(format, "distance")?;
    let values = tokens
        .iter()
        .map(|t| RationalScalar::parse_signed(t).map_err(|e| UsageError(format!("`{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let result = nearest_odd(&values)?;
    match format {
        Format::Json => {
            let record = DistanceRecord {
                distance: result.distance.clone(),
                witness: result
                    .witness
                    .iter()
                    .map(|w| w.to_string().parse().expect("integer literal"))
                    .collect(),
                per_coordinate_cost: result.per_coordinate_cost.clone(),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
        _ => {
            let w: Vec<String> = result.witness.iter().map(|x| x.to_string()).collect();
            writeln!(out, "distance: {}", result.distance)?;
            writeln!(out, "witness:  [{}]", w.join(", "))?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_index(text: &str, n: usize) -> Result<usize, UsageError> {
    let index: usize = text
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("bad coordinate index `{text}`")))?;
    if index == 0 || index > n {
        return Err(UsageError(format!("coordinate index {index} is outside 1..={n}")));
    }
    Ok(index - 1)
}

fn parse_value(text: &str) -> Result<RationalScalar, UsageError> {
    RationalScalar::parse_signed(text).map_err(|e| UsageError(format!("`{text}`: {e}")))
}

/// Build a sweep spec from `--fix I=V` and `--vary I=MIN:MAX:STEP` strings.
fn parse_region(n: usize, fix: &[String], vary: &[String]) -> Result<RegionSweepSpec, UsageError> {
    let mut fixed = BTreeMap::new();
    for item in fix {
        let (index, value) = item
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--fix expects INDEX=VALUE, got `{item}`")))?;
        let index = parse_index(index, n)?;
        if fixed.insert(index, parse_value(value)?).is_some() {
            return Err(UsageError(format!("coordinate {} is fixed twice", index + 1)));
        }
    }
    let mut axes = Vec::new();
    for item in vary {
        let (index, range) = item
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--vary expects INDEX=MIN:MAX:STEP, got `{item}`")))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, step] = parts[..] else {
            return Err(UsageError(format!("--vary expects INDEX=MIN:MAX:STEP, got `{item}`")));
        };
        axes.push(Axis {
            index: parse_index(index, n)?,
            min: parse_value(min)?,
            max: parse_value(max)?,
            step: parse_value(step)?,
        });
    }
    let spec = RegionSweepSpec { n, fixed, axes };
    spec.validate()?;
    Ok(spec)
}

fn cmd_region(spec: &RegionSweepSpec, format: Format, out: &mut dyn Write) -> Result<u8, UsageError> {
    let rows = run_sweep(spec)?;
    match format {
        Format::Json => {
            for row in &rows {
                writeln!(out, "{}", serde_json::to_string(&row.certificate)?)?;
            }
        }
        Format::Text | Format::Csv => {
            let mut header: Vec<String> = spec.axes.iter().map(|a| format!("theta{}", a.index + 1)).collect();
            header.extend(["verdict", "rule", "chi", "distance"].map(String::from));
            writeln!(out, "{}", header.join(","))?;
            for row in &rows {
                let c = &row.certificate;
                let mut fields: Vec<String> = row.axis_values.iter().map(|v| v.to_string()).collect();
                fields.push(c.verdict.to_string());
                fields.push(c.rule.to_string());
                fields.push(c.chi.to_string());
                fields.push(c.distance().map(|d| d.to_string()).unwrap_or_default());
                writeln!(out, "{}", fields.join(","))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SurfaceOutput<'a> {
    source: &'a str,
    audit_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Counts>,
    report: &'a SurfaceReport,
}

#[derive(Serialize, Clone, Copy)]
struct Counts {
    vertices: usize,
    edges: usize,
    faces: usize,
}

#[derive(Serialize)]
struct AuditFailure<'a> {
    source: &'a str,
    audit_passed: bool,
    error: String,
}

fn cmd_surface(
    path: Option<&std::path::Path>,
    builtin: Option<&str>,
    format: Format,
    tolerance: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, UsageError> {
    reject_csv(format, "surface")?;
    let (source, built): (String, Result<(SurfaceReport, Option<Counts>), String>) = match (path, builtin) {
        (None, None) => return Err(UsageError("surface needs a PATH or --builtin NAME".into())),
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let desc = GluingDescription::from_json(&text)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            let built = match glue_surface(&desc, tolerance) {
                Ok(s) => Ok(glued(&s, tolerance)),
                Err(e) if e.is_audit_failure() => Err(e.to_string()),
                Err(e) => return Err(UsageError(e.to_string())),
            };
            (path.display().to_string(), built)
        }
        (None, Some(name)) => {
            let report = match name {
                "torus-example" => glued(&torus_example(), tolerance),
                "octant-double" => glued(&octant_double(), tolerance),
                other => match other.strip_prefix("football:") {
                    Some(theta) => {
                        let theta = parse_value(theta)?;
                        (football_surface_report(&build_football(&theta)?, tolerance), None)
                    }
                    None => return Err(UsageError(format!("unknown builtin `{other}`"))),
                },
            };
            (name.to_string(), Ok(report))
        }
    };

    match built {
        Err(message) => {
            match format {
                Format::Json => {
                    let failure = AuditFailure {
                        source: &source,
                        audit_passed: false,
                        error: message.clone(),
                    };
                    writeln!(out, "{}", serde_json::to_string(&failure)?)?;
                }
                _ => writeln!(out, "surface: {source}\naudit:   FAILED")?,
            }
            writeln!(err, "audit failed: {message}")?;
            Ok(EXIT_AUDIT_FAILED)
        }
        Ok((report, counts)) => {
            let passed = report.audits_pass();
            match format {
                Format::Json => {
                    let output = SurfaceOutput {
                        source: &source,
                        audit_passed: passed,
                        counts,
                        report: &report,
                    };
                    writeln!(out, "{}", serde_json::to_string(&output)?)?;
                }
                _ => write_surface_text(&source, &report, counts, out)?,
            }
            if passed {
                Ok(EXIT_OK)
            } else {
                writeln!(
                    err,
                    "audit failed: area {} vs Gauss–Bonnet {} (residual {:e})",
                    report.area, report.gauss_bonnet_area, report.gauss_bonnet_residual
                )?;
                Ok(EXIT_AUDIT_FAILED)
            }
        }
    }
}

fn glued(s: &GluedSurface, tolerance: f64) -> (SurfaceReport, Option<Counts>) {
    let counts = Counts {
        vertices: s.vertex_count(),
        edges: s.edge_count(),
        faces: s.face_count(),
    };
    (surface_report(s, tolerance), Some(counts))
}

fn write_surface_text(
    source: &str,
    r: &SurfaceReport,
    counts: Option<Counts>,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    use std::f64::consts::PI;
    writeln!(out, "surface: {source}")?;
    match counts {
        Some(c) => writeln!(out, "chi:     {} (V = {}, E = {}, F = {})", r.chi, c.vertices, c.edges, c.faces)?,
        None => writeln!(out, "chi:     {}", r.chi)?,
    }
    writeln!(
        out,
        "area:    {:.12} (Gauss–Bonnet {:.12}, residual {:.3e})",
        r.area, r.gauss_bonnet_area, r.gauss_bonnet_residual
    )?;
    writeln!(out, "cone points:")?;
    for c in &r.cone_points {
        let kind = if c.is_singular { "singular" } else { "regular" };
        writeln!(
            out,
            "  class {}: angle {:.12} = {:.9}π (θ = {:.9}) {kind}",
            c.class,
            c.angle,
            c.angle / PI,
            c.theta
        )?;
    }
    let bound = if r.distances_are_upper_bounds {
        "edge-graph upper bounds"
    } else {
        "exact"
    };
    writeln!(out, "singular distances ({bound}):")?;
    for flag in &r.pi_multiplicity_flags {
        let kind = if flag.from == flag.to { "loop" } else { "pair" };
        let multiple = match flag.multiple {
            Some(k) => format!("= {k}π"),
            None => "not a multiple of π".to_string(),
        };
        writeln!(
            out,
            "  {} – {} ({kind}): {:.12} = {:.9}π, {multiple}",
            flag.from,
            flag.to,
            flag.distance,
            flag.distance / PI
        )?;
    }
    writeln!(out, "audit:   {}", if r.audits_pass() { "pass" } else { "FAILED" })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["conemetric"];
        full.extend_from_slice(args);
        let code = run(&full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_exit_codes() {
        assert_eq!(run_args(&["check", "3/2", "5/4", "5/4"]).0, 1);
        assert_eq!(run_args(&["check", "2", "2", "3"]).0, 0);
        assert_eq!(run_args(&["check", "1/2", "1/2", "2"]).0, 2);
        assert_eq!(run_args(&["check"]).0, 0);
        let (code, out, _) = run_args(&["check", "3/2", "5/4", "5/4"]);
        assert_eq!(code, 1);
        assert!(out.contains("MainTheoremNonIntegral"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["check", "abc"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["check", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["check", "-1/2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["distance"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--format", "csv", "check", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--tolerance", "-1", "surface", "--builtin", "torus-example"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["surface", "--builtin", "klein"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["surface"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["region", "--n", "3", "--fix", "3=1/2"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["region", "--n", "3", "--vary", "1=1:2:1", "--vary", "2=1:2:1", "--vary", "3=1:2:1"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_mentions_exit_status() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("EXIT STATUS"));
    }

    #[test]
    fn distance_output() {
        let (code, out, _) = run_args(&["distance", "0", "0", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("distance: 1\n"));
        assert!(out.contains("[1, 0, 0]"));
        assert!(run_args(&["distance", "1/5", "1/5", "1/5"]).1.contains("distance: 6/5"));
        assert!(run_args(&["distance", "1", "1", "2"]).1.contains("distance: 1\n"));
        assert!(run_args(&["distance", "1", "1", "1"]).1.contains("distance: 0\n"));
        let (_, out, _) = run_args(&["--format", "json", "distance", "-1/2", "0"]);
        assert_eq!(out.trim(), r#"{"distance":"1/2","witness":[-1,0],"per_coordinate_cost":["1/2","0"]}"#);
    }

    #[test]
    fn exit_code_ignores_format() {
        for tokens in [&["check", "1/2", "1/2", "2"][..], &["check", "2", "2", "5"], &["check", "1/2", "1/2"]] {
            let text = run_args(tokens).0;
            let mut json_args = vec!["--format", "json"];
            json_args.extend_from_slice(tokens);
            assert_eq!(run_args(&json_args).0, text);
        }
    }

    #[test]
    fn region_csv_header_and_rows() {
        let (code, out, _) = run_args(&["region", "--n", "3", "--fix", "3=1/2", "--fix", "2=1/2", "--vary", "1=1/2:1:1/4", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "theta1,verdict,rule,chi,distance");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "1/2,Admissible,MondelloPanovSufficient,1/2,3/2");
    }

    #[test]
    fn surface_builtins() {
        let (code, out, _) = run_args(&["surface", "--builtin", "torus-example"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("chi:     0 (V = 2, E = 6, F = 4)"));
        assert!(out.contains("= 4.000000000π"));
        assert!(out.contains("(loop): 1.570796326795 = 0.500000000π"));
        assert_eq!(run_args(&["surface", "--builtin", "octant-double"]).0, 0);
        let (code, out, _) = run_args(&["surface", "--builtin", "football:3/2"]);
        assert_eq!(code, 0);
        assert!(out.contains("= 1π"));
        assert_eq!(run_args(&["surface", "--builtin", "football:0"]).0, EXIT_USAGE);
    }
}
