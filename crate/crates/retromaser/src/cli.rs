//! Command-line front end: plot-ready tables for POM coefficients,
//! retrodictive distributions, forward likelihoods, the built-in reference
//! figures, the two-atom comparison table, and a self-verification run.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::oracle::{matrix_exponential_check, sequence_likelihood};
use crate::pom::{completeness_deviation, PomElement, TwoAtomRow};
use crate::retrodict::{retrodict_state, PriorSpec, SupportReport};
use crate::types::{
    excited_factor, ground_factor, DetectionSequence, FockWeights, MaserParams,
};

#[derive(Debug, Parser)]
#[command(
    name = "retromaser",
    version,
    about = "Micromaser field measurements from atomic detection records: \
             POM coefficients and retrodictive photon-number statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// POM coefficient per photon number for a detection sequence.
    Pom(SequenceArgs),
    /// Retrodictive photon-number distribution before the first atom.
    Retrodict(RetrodictArgs),
    /// Forward likelihood of the sequence per initial photon number.
    Predict(SequenceArgs),
    /// Data behind one of the built-in reference figures (theta = pi).
    Figure(FigureArgs),
    /// Two-atom closed forms compared against the sequence builder.
    Table1(ReportArgs),
    /// Run the self-verification checks and exit nonzero on failure.
    Verify(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// Detection sequence over {e,g}, first atom first; may be empty.
    #[arg(long)]
    pub sequence: String,

    #[command(flatten)]
    pub params: ParamArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RetrodictArgs {
    #[command(flatten)]
    pub base: SequenceArgs,

    /// Prior on the initial photon number: "uniform", "cap:K", or a path to
    /// a file of whitespace-separated weights (lines starting with # are
    /// ignored).
    #[arg(long, default_value = "uniform")]
    pub prior: String,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure id: 1a, 1b, 2a, 2b, 2c, 3, 4a or 4b.
    pub id: String,

    /// Photon-number truncation.
    #[arg(long = "n-max", default_value_t = 25)]
    pub n_max: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Coupling-time product theta = lambda*tau in radians, or the literal
    /// "pi".
    #[arg(long, default_value = "pi")]
    pub theta: String,

    /// Photon-number truncation.
    #[arg(long = "n-max", default_value_t = 25)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub params: ParamArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write to a file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parse a theta argument: a non-negative real or the literal "pi".
pub fn parse_theta(input: &str) -> Result<f64> {
    let trimmed = input.trim();
    if trimmed.eq_ignore_ascii_case("pi") {
        return Ok(PI);
    }
    trimmed
        .parse::<f64>()
        .map_err(|_| Error::ParseTheta(input.to_string()))
}

/// Parse a prior argument: "uniform", "cap:K", or a weights file.
pub fn parse_prior(input: &str) -> Result<PriorSpec> {
    let trimmed = input.trim();
    if trimmed.eq_ignore_ascii_case("uniform") {
        return Ok(PriorSpec::Uniform);
    }
    if let Some(cap) = trimmed.strip_prefix("cap:") {
        let max_n = cap.parse::<usize>().map_err(|_| Error::ParsePrior {
            spec: input.to_string(),
            reason: format!("\"{cap}\" is not a photon number"),
        })?;
        return Ok(PriorSpec::Cap(max_n));
    }
    let content = fs::read_to_string(trimmed).map_err(|err| Error::ParsePrior {
        spec: input.to_string(),
        reason: format!("cannot read weights file: {err}"),
    })?;
    let mut weights = Vec::new();
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split_whitespace() {
            let value = token.parse::<f64>().map_err(|_| Error::ParsePrior {
                spec: input.to_string(),
                reason: format!("\"{token}\" is not a weight"),
            })?;
            weights.push(value);
        }
    }
    if weights.is_empty() {
        return Err(Error::ParsePrior {
            spec: input.to_string(),
            reason: "weights file contains no values".to_string(),
        });
    }
    Ok(PriorSpec::Explicit(FockWeights::new(weights)?))
}

/// One photon-number table plus the metadata that identifies the run.
#[derive(Debug, Clone)]
pub struct TableOutput {
    pub theta: f64,
    pub n_max: usize,
    pub sequence: String,
    pub prior: Option<String>,
    pub support: Option<SupportReport>,
    pub rows: Vec<(usize, f64)>,
}

impl TableOutput {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// `n,value` rows with LF endings; retrodiction support details go in
    /// leading `#` comment lines so the column layout stays fixed.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(support) = &self.support {
            out.push_str(&format!("# min_n,{}\n", support.min_n));
            for (start, end) in &support.gaps {
                out.push_str(&format!("# gap,{start},{end}\n"));
            }
            out.push_str(&format!(
                "# implied_final_min,{}\n",
                support.implied_final_min
            ));
        }
        out.push_str("n,value\n");
        for (n, value) in &self.rows {
            out.push_str(&format!("{n},{}\n", fmt_value(*value)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|(n, value)| serde_json::json!([n, value]))
            .collect();
        let mut object = serde_json::json!({
            "params": { "theta": self.theta, "n_max": self.n_max },
            "sequence": self.sequence,
            "prior": self.prior,
            "rows": rows,
        });
        if let Some(support) = &self.support {
            object["support"] = serde_json::json!({
                "min_n": support.min_n,
                "gaps": support.gaps.iter().map(|(a, b)| serde_json::json!([a, b])).collect::<Vec<_>>(),
                "implied_final_min": support.implied_final_min,
            });
        }
        let mut text = object.to_string();
        text.push('\n');
        text
    }
}

/// Shortest decimal that round-trips, rendered exactly as in the JSON
/// output so both formats carry identical values.
fn fmt_value(value: f64) -> String {
    serde_json::Number::from_f64(value)
        .map(|n| n.to_string())
        .unwrap_or_else(|| format!("{value}"))
}

/// Raw POM coefficients for a sequence.
pub fn pom_table(sequence: &DetectionSequence, params: &MaserParams) -> TableOutput {
    let element = PomElement::for_sequence(sequence, params);
    TableOutput {
        theta: params.theta(),
        n_max: params.n_max(),
        sequence: sequence.to_string(),
        prior: None,
        support: None,
        rows: element.coefficients().iter().enumerate().collect(),
    }
}

/// Forward likelihood P(sequence | n) per initial photon number.
pub fn predict_table(sequence: &DetectionSequence, params: &MaserParams) -> TableOutput {
    let likelihood = sequence_likelihood(sequence, params);
    TableOutput {
        theta: params.theta(),
        n_max: params.n_max(),
        sequence: sequence.to_string(),
        prior: None,
        support: None,
        rows: likelihood.as_slice().iter().copied().enumerate().collect(),
    }
}

/// Normalized retrodictive distribution plus its support summary.
pub fn retrodict_table(
    sequence: &DetectionSequence,
    prior: &PriorSpec,
    prior_label: &str,
    params: &MaserParams,
) -> Result<TableOutput> {
    let state = retrodict_state(sequence, prior, params)?;
    Ok(TableOutput {
        theta: params.theta(),
        n_max: params.n_max(),
        sequence: sequence.to_string(),
        prior: Some(prior_label.to_string()),
        support: Some(state.support_report()),
        rows: state.distribution().iter().enumerate().collect(),
    })
}

/// Detection sequence and prior cap behind each built-in figure; the
/// interaction is always theta = pi and the prior is uniform unless capped.
pub const FIGURES: [(&str, &str, Option<usize>); 8] = [
    ("1a", "e", None),
    ("1b", "eeeee", None),
    ("2a", "g", None),
    ("2b", "ggg", None),
    ("2c", "gggggg", None),
    ("3", "gg", Some(3)),
    ("4a", "gegege", None),
    ("4b", "egegeg", None),
];

/// Relative photon-number distribution (largest entry scaled to 1) for one
/// of the built-in figures.
pub fn figure_table(id: &str, n_max: usize) -> Result<TableOutput> {
    let (_, sequence_str, cap) = FIGURES
        .iter()
        .find(|(fig_id, _, _)| *fig_id == id)
        .ok_or_else(|| Error::UnknownFigure(id.to_string()))?;
    let params = MaserParams::new(PI, n_max)?;
    let sequence = DetectionSequence::parse(sequence_str).expect("figure sequences are valid");
    let prior = match cap {
        Some(max_n) => PriorSpec::Cap(*max_n),
        None => PriorSpec::Uniform,
    };
    let state = retrodict_state(&sequence, &prior, &params)?;
    let peak = state.distribution().max();
    Ok(TableOutput {
        theta: PI,
        n_max,
        sequence: sequence.to_string(),
        prior: Some(prior.to_string()),
        support: None,
        rows: state
            .distribution()
            .iter()
            .map(|p| p / peak)
            .enumerate()
            .collect(),
    })
}

/// Per-row largest deviation between the two-atom closed forms and the
/// sequence builder.
pub fn table1_rows(params: &MaserParams) -> Vec<(&'static str, f64)> {
    TwoAtomRow::ALL
        .iter()
        .map(|row| {
            let element = PomElement::for_sequence(&row.sequence(), params);
            let deviation = (0..=params.n_max())
                .map(|n| (element.coefficient(n) - row.coefficient(n, params)).abs())
                .fold(0.0, f64::max);
            (row.label(), deviation)
        })
        .collect()
}

fn table1_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("row,max_abs_deviation\n");
    for (label, deviation) in rows {
        out.push_str(&format!("{label},{}\n", fmt_value(*deviation)));
    }
    out
}

fn table1_json(rows: &[(&str, f64)], params: &MaserParams) -> String {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|(label, deviation)| serde_json::json!([label, deviation]))
        .collect();
    let object = serde_json::json!({
        "params": { "theta": params.theta(), "n_max": params.n_max() },
        "rows": rows,
    });
    let mut text = object.to_string();
    text.push('\n');
    text
}

/// Result of the self-verification run: one report line per check plus the
/// names of any failed checks.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub lines: Vec<String>,
    pub failed: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn report(&self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text.push_str(if self.passed() {
            "all checks passed\n"
        } else {
            "verification FAILED\n"
        });
        text
    }
}

/// Run the built-in consistency checks: POM completeness, forward/backward
/// agreement, the dense matrix-exponential comparison, and the trapping
/// condition at theta = pi.
pub fn run_verification(params: &MaserParams) -> VerifyOutcome {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    let mut record = |name: &str, detail: String, ok: bool| {
        lines.push(format!(
            "{} {name}: {detail}",
            if ok { "ok  " } else { "FAIL" }
        ));
        if !ok {
            failed.push(name.to_string());
        }
    };

    // completeness: the 2^s elements of each length sum to the identity
    let mut worst = 0.0_f64;
    for s in 1..=10 {
        worst = worst.max(
            completeness_deviation(s, params).expect("lengths 1..=10 are within the bound"),
        );
    }
    record(
        "pom-completeness",
        format!("max |sum - 1| = {worst:.2e} over sequence lengths 1..=10 (tolerance 1e-11)"),
        worst <= 1e-11,
    );

    // every forward likelihood equals the matching POM coefficient
    let mut worst = 0.0_f64;
    for s in 0..=6 {
        for sequence in DetectionSequence::all_of_length(s) {
            let likelihood = sequence_likelihood(&sequence, params);
            let element = PomElement::for_sequence(&sequence, params);
            for n in 0..=params.n_max() {
                worst = worst.max((likelihood.get(n) - element.coefficient(n)).abs());
            }
        }
    }
    record(
        "forward-backward-equivalence",
        format!("max |P(seq|n) - C_n| = {worst:.2e} over sequence lengths 0..=6 (tolerance 1e-12)"),
        worst <= 1e-12,
    );

    // closed-form transit unitary vs dense matrix exponential
    let mut worst = 0.0_f64;
    for photon_cap in [5, 20, 60] {
        worst = worst.max(matrix_exponential_check(params, photon_cap));
    }
    record(
        "matrix-exponential",
        format!("max entry deviation = {worst:.2e} for photon caps 5, 20, 60 (tolerance 1e-9)"),
        worst <= 1e-9,
    );

    // trapping condition at theta = pi, independent of the configured theta
    let trapping = MaserParams::new(PI, 25).expect("valid parameters");
    let element = PomElement::for_sequence(
        &DetectionSequence::parse("e").expect("valid"),
        &trapping,
    );
    let mut worst = 0.0_f64;
    for k in 1..=5usize {
        let n = k * k - 1;
        worst = worst.max((excited_factor(n, 1, &trapping) - 1.0).abs());
        worst = worst.max(ground_factor(n, 1, &trapping));
        worst = worst.max((element.coefficient(n) - 1.0).abs());
    }
    record(
        "trapping-condition",
        format!(
            "max deviation from certain excited exit at n = k^2-1 is {worst:.2e} (tolerance 1e-12)"
        ),
        worst <= 1e-12,
    );

    VerifyOutcome { lines, failed }
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Pom(args) => {
            let (sequence, params) = sequence_and_params(args)?;
            let table = pom_table(&sequence, &params);
            write_output(&table.render(args.output.format), args.output.output.as_deref())
        }
        Command::Predict(args) => {
            let (sequence, params) = sequence_and_params(args)?;
            let table = predict_table(&sequence, &params);
            write_output(&table.render(args.output.format), args.output.output.as_deref())
        }
        Command::Retrodict(args) => {
            let (sequence, params) = sequence_and_params(&args.base)?;
            let prior = parse_prior(&args.prior)?;
            let table = retrodict_table(&sequence, &prior, args.prior.trim(), &params)?;
            write_output(
                &table.render(args.base.output.format),
                args.base.output.output.as_deref(),
            )
        }
        Command::Figure(args) => {
            let table = figure_table(&args.id, args.n_max)?;
            write_output(&table.render(args.output.format), args.output.output.as_deref())
        }
        Command::Table1(args) => {
            let params = MaserParams::new(parse_theta(&args.params.theta)?, args.params.n_max)?;
            let rows = table1_rows(&params);
            let text = match args.output.format {
                OutputFormat::Csv => table1_csv(&rows),
                OutputFormat::Json => table1_json(&rows, &params),
            };
            write_output(&text, args.output.output.as_deref())
        }
        Command::Verify(args) => {
            let params = MaserParams::new(parse_theta(&args.params.theta)?, args.params.n_max)?;
            let outcome = run_verification(&params);
            write_output(&outcome.report(), args.output.output.as_deref())?;
            if outcome.passed() {
                Ok(())
            } else {
                Err(Error::VerificationFailed {
                    check: outcome.failed.join(", "),
                })
            }
        }
    }
}

fn sequence_and_params(args: &SequenceArgs) -> Result<(DetectionSequence, MaserParams)> {
    let sequence = DetectionSequence::parse(&args.sequence)?;
    let params = MaserParams::new(parse_theta(&args.params.theta)?, args.params.n_max)?;
    Ok((sequence, params))
}

fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, text.as_bytes())?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_parsing() {
        assert_eq!(parse_theta("pi").unwrap(), PI);
        assert_eq!(parse_theta(" PI ").unwrap(), PI);
        assert_eq!(parse_theta("1.5").unwrap(), 1.5);
        assert!(matches!(parse_theta("tau"), Err(Error::ParseTheta(_))));
    }

    #[test]
    fn prior_parsing() {
        assert_eq!(parse_prior("uniform").unwrap(), PriorSpec::Uniform);
        assert_eq!(parse_prior("cap:3").unwrap(), PriorSpec::Cap(3));
        assert!(matches!(
            parse_prior("cap:x"),
            Err(Error::ParsePrior { .. })
        ));
        assert!(matches!(
            parse_prior("/nonexistent/weights.txt"),
            Err(Error::ParsePrior { .. })
        ));
    }

    #[test]
    fn figure_ids_map_to_the_stated_runs() {
        let expected: [(&str, &str, Option<usize>); 8] = [
            ("1a", "e", None),
            ("1b", "eeeee", None),
            ("2a", "g", None),
            ("2b", "ggg", None),
            ("2c", "gggggg", None),
            ("3", "gg", Some(3)),
            ("4a", "gegege", None),
            ("4b", "egegeg", None),
        ];
        assert_eq!(FIGURES, expected);
        for (id, _, _) in FIGURES {
            assert!(figure_table(id, 25).is_ok(), "figure {id}");
        }
        assert!(matches!(
            figure_table("5", 25),
            Err(Error::UnknownFigure(_))
        ));
    }

    #[test]
    fn figure_examples() {
        // trapping numbers carry full relative weight after one excited
        // detection
        let table = figure_table("1a", 25).unwrap();
        for n in [0usize, 3, 8, 15, 24] {
            assert!((table.rows[n].1 - 1.0).abs() < 1e-12, "n={n}");
        }
        for (n, value) in &table.rows {
            if ![0usize, 3, 8, 15, 24].contains(n) {
                assert!(*value < 1.0);
            }
        }

        // six ground detections: nothing below nine photons
        let table = figure_table("2c", 25).unwrap();
        let first = table.rows.iter().find(|(_, v)| *v > 1e-12).unwrap().0;
        assert_eq!(first, 9);

        // capped two-ground run: a single supported row
        let table = figure_table("3", 25).unwrap();
        let supported: Vec<usize> = table
            .rows
            .iter()
            .filter(|(_, v)| *v > 1e-12)
            .map(|(n, _)| *n)
            .collect();
        assert_eq!(supported, vec![1]);
        assert!((table.rows[1].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_and_json_carry_identical_values() {
        let params = MaserParams::new(PI, 12).unwrap();
        let sequence = DetectionSequence::parse("ge").unwrap();
        let table = pom_table(&sequence, &params);

        let csv = table.to_csv();
        let json: serde_json::Value = serde_json::from_str(table.to_json().trim()).unwrap();
        let rows = json["rows"].as_array().unwrap();
        for (line, row) in csv.lines().skip(1).zip(rows) {
            let (n_str, v_str) = line.split_once(',').unwrap();
            assert_eq!(n_str.parse::<u64>().unwrap(), row[0].as_u64().unwrap());
            let csv_value: f64 = v_str.parse().unwrap();
            assert_eq!(csv_value, row[1].as_f64().unwrap());
        }
        assert_eq!(json["sequence"], "ge");
        assert!(json["prior"].is_null());
    }

    #[test]
    fn csv_is_deterministic() {
        let params = MaserParams::new(PI, 20).unwrap();
        let sequence = DetectionSequence::parse("gegege").unwrap();
        let a = retrodict_table(&sequence, &PriorSpec::Uniform, "uniform", &params)
            .unwrap()
            .to_csv();
        let b = retrodict_table(&sequence, &PriorSpec::Uniform, "uniform", &params)
            .unwrap()
            .to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("# min_n,4\n"));
        assert!(a.contains("\nn,value\n") || a.contains("n,value\n"));
        assert!(a.ends_with('\n'));
        assert!(!a.contains('\r'));
    }

    #[test]
    fn table1_deviations_are_tiny() {
        for theta in ["pi", "1.0"] {
            let params = MaserParams::new(parse_theta(theta).unwrap(), 40).unwrap();
            for (label, deviation) in table1_rows(&params) {
                assert!(deviation <= 1e-14, "{label} at theta={theta}");
            }
        }
    }

    #[test]
    fn verification_passes_with_defaults() {
        let params = MaserParams::new(PI, 25).unwrap();
        let outcome = run_verification(&params);
        assert!(outcome.passed(), "{:?}", outcome.lines);
        assert_eq!(outcome.lines.len(), 4);
    }

    #[test]
    fn value_formatting() {
        assert_eq!(fmt_value(0.0), "0.0");
        assert_eq!(fmt_value(1.0), "1.0");
        assert_eq!(fmt_value(0.25), "0.25");
        let tiny = fmt_value(1.0632083128315169e-33);
        assert!(tiny.contains('e'), "{tiny}");
        assert_eq!(tiny.parse::<f64>().unwrap(), 1.0632083128315169e-33);
    }
}
