//! The `mincodes` command line: construct, code, verify, table, spectrum, replay.
//!
//! Every command that writes files takes `--out DIR`, writes its outputs
//! atomically, and records a `run-<command>.json` that `replay` can re-execute.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mincodes::codes::{
    ab_from_spectrum_extremes, bound_argument, build_augmented_code, build_code,
    generic_ab_criterion, is_minimal_bruteforce, minimality_walsh_criterion, popcount_distribution,
    sample_ding_triples, table_frequencies, verify_weight_routes, weight_distribution, CodeError,
    FunctionCode, MinimalityReport, TableKind, Verdict, WeightDistribution, BRUTEFORCE_MAX_K,
    CRITERION_MAX_NM, POPCOUNT_MAX_K,
};
use mincodes::constructions::{build_family, gold, split_concat, ConstructionError, FamilySpec};
use mincodes::gf2::FieldContext;
use mincodes::io::{
    from_json, to_json, weight_entries, CodeBundle, FunctionFile, IoError, LoadedFunction,
    RouteSummary, VerifyReport, CODE_FORMAT, FORMAT_VERSION, REPORT_FORMAT,
};
use mincodes::vectorial::{Pairing, VectorialError, VectorialFunction};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "MINCODES_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Constraint(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Constraint(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Constraint(e.to_string())
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Budget(_) => CliError::Budget(e.to_string()),
            CodeError::Hypothesis(_)
            | CodeError::Premise(_)
            | CodeError::LinearComponent { .. }
            | CodeError::NonzeroAtOrigin(_)
            | CodeError::RankDeficient { .. } => CliError::Constraint(e.to_string()),
            CodeError::Vectorial(VectorialError::TooLarge { .. }) => {
                CliError::Budget(e.to_string())
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Construction(c) => c.into(),
            IoError::Gf2(_) | IoError::Vectorial(_) => CliError::Constraint(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<VectorialError> for CliError {
    fn from(e: VectorialError) -> Self {
        CodeError::from(e).into()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mincodes",
    version,
    about = "Minimal binary codes from vectorial Boolean functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a function family and write function.json.
    Construct(ConstructArgs),
    /// Build the code of a function file and write its bundle.
    Code(CodeArgs),
    /// Check minimality and the AB condition of a code bundle.
    Verify(VerifyArgs),
    /// Compare a closed-form weight table with an enumerated distribution.
    Table(TableArgs),
    /// Print the Walsh spectrum of one component.
    Spectrum(SpectrumArgs),
    /// Re-run a recorded command and compare its outputs byte for byte.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Gold,
    VectorialBent,
    Theorem6,
    Theorem8,
    Theorem10,
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.strip_prefix("0x").unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("{s:?}: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ConstructArgs {
    #[arg(long)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    /// Hex.
    #[arg(long, value_parser = parse_hex)]
    pub a: Option<u32>,
    /// Hex.
    #[arg(long, value_parser = parse_hex)]
    pub b: Option<u32>,
    /// Field modulus, hex.
    #[arg(long, value_parser = parse_hex)]
    pub modulus: Option<u32>,
    #[arg(long)]
    pub complemented: bool,
    /// Write the explicit value table instead of the parameter record.
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CodeArgs {
    /// A function.json.
    pub function: PathBuf,
    /// Add the x = 0 coordinate and a constant row (never minimal).
    #[arg(long)]
    pub augmented: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteChoice {
    Auto,
    Bruteforce,
    Walsh,
    Generic,
    Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// A code.json.
    pub code: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub route: RouteChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random pairs for the sampled Ding check and random codewords for the weight check
    /// when exhaustive enumeration is over budget.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableName {
    Plateaued,
    Bent,
    Ab,
    Theorem6,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct TableArgs {
    pub kind: TableName,
    #[arg(long)]
    pub n: u32,
    /// Defaults: n/2 for bent, n for ab and plateaued, 2 for theorem6.
    #[arg(long)]
    pub m: Option<u32>,
    /// Plateaued amplitude exponent offset, `Λ = 2^{(n+λ)/2}`.
    #[arg(long, default_value_t = 0)]
    pub lambda: u32,
    /// Component index for theorem6.
    #[arg(long, default_value_t = 0)]
    pub i: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    pub function: PathBuf,
    /// Component mask, hex.
    #[arg(long, value_parser = parse_hex)]
    pub mu: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A `run-<command>.json`.
    pub record: PathBuf,
}

/// What a command consumed and produced; enough to re-run it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub format: String,
    pub version: u32,
    pub tool_version: String,
    pub invocation: Command,
    /// Resolved family parameters, when the function came from a family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    pub n: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub const RUN_FORMAT: &str = "mincodes-run";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Other(e.to_string()))?;
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

fn spread_info(family: Option<&FamilySpec>) -> (Option<u32>, Option<String>) {
    match family {
        Some(
            FamilySpec::VectorialBent { n, .. }
            | FamilySpec::Theorem6 { n, .. }
            | FamilySpec::Theorem8 { n, .. },
        ) => (Some(n / 2), Some("desarguesian".into())),
        Some(FamilySpec::Theorem10 { n, .. }) => (Some(n / 2), Some("subfield".into())),
        _ => (None, None),
    }
}

/// Files produced by one command, in write order.
type Outputs = Vec<(&'static str, String)>;

struct Run {
    outputs: Outputs,
    family: Option<FamilySpec>,
    n: u32,
    m: u32,
    input: Option<FileDigest>,
    /// Printed to stdout after the files are written.
    summary: String,
    /// Set when the command wrote its outputs but a check failed.
    failure: Option<CliError>,
}

fn input_digest(path: &Path) -> Result<(String, FileDigest), CliError> {
    let text = read(path)?;
    let digest = FileDigest {
        file: path.display().to_string(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((text, digest))
}

fn run_construct(args: &ConstructArgs) -> Result<Run, CliError> {
    let need = |v: Option<u32>, flag: &str| {
        v.ok_or_else(|| CliError::Constraint(format!("--{flag} is required for this family")))
    };
    let spec = match args.family {
        FamilyName::Gold => FamilySpec::Gold {
            n: args.n,
            i: need(args.i, "i")?,
            modulus: args.modulus,
        },
        FamilyName::VectorialBent => FamilySpec::VectorialBent {
            n: args.n,
            r: need(args.r, "r")?,
            complemented: args.complemented,
        },
        FamilyName::Theorem6 => FamilySpec::Theorem6 {
            n: args.n,
            i: need(args.i, "i")?,
            complemented: args.complemented,
        },
        FamilyName::Theorem8 => FamilySpec::Theorem8 {
            n: args.n,
            r: need(args.r, "r")?,
            a: args.a,
            b: args.b,
            complemented: args.complemented,
        },
        FamilyName::Theorem10 => FamilySpec::Theorem10 {
            n: args.n,
            i: need(args.i, "i")?,
            a: args.a,
            b: args.b,
            modulus: args.modulus,
        },
    };
    let (mut file, loaded) = FunctionFile::from_family(&spec)?;
    if args.table {
        let notes = file.notes.clone();
        file = FunctionFile::from_table(&loaded.function, &loaded.pairing);
        file.notes = notes;
        file.notes.push(format!(
            "table of the {} family {:?}",
            spec.name(),
            loaded.family
        ));
    }
    let f = &loaded.function;
    Ok(Run {
        summary: format!("{} (n = {}, m = {})", spec.name(), f.n(), f.m()),
        outputs: vec![("function.json", to_json(&file)?)],
        family: loaded.family.clone(),
        n: f.n(),
        m: f.m(),
        input: None,
        failure: None,
    })
}

fn load_function(text: &str) -> Result<(FunctionFile, LoadedFunction), CliError> {
    let file: FunctionFile = from_json(text)?;
    let loaded = file.load()?;
    Ok((file, loaded))
}

fn make_code(loaded: &LoadedFunction, augmented: bool) -> Result<FunctionCode, CliError> {
    let build = if augmented {
        build_augmented_code
    } else {
        build_code
    };
    Ok(build(&loaded.function, &loaded.pairing)?)
}

fn run_code(args: &CodeArgs) -> Result<Run, CliError> {
    let (text, digest) = input_digest(&args.function)?;
    let (file, loaded) = load_function(&text)?;
    let code = make_code(&loaded, args.augmented)?;
    let dist = weight_distribution(&code)?;
    let params = code.parameters(&dist);
    let bundle = CodeBundle {
        format: CODE_FORMAT.into(),
        version: FORMAT_VERSION,
        function: file,
        augmented: args.augmented,
        length: code.code().length(),
        dimension: code.code().dimension(),
        min_distance: dist.min_distance(),
        parameters: params.clone(),
        enumerator: dist.enumerator(),
        weights: weight_entries(&dist),
        generator: code.code().rows().iter().map(|r| r.to_hex()).collect(),
    };
    Ok(Run {
        summary: format!("{params} {}", dist.enumerator()),
        outputs: vec![
            ("code.json", to_json(&bundle)?),
            ("weights.csv", dist.to_csv()),
            ("generator.txt", code.code().generator_hex()),
            ("enumerator.txt", format!("{}\n", dist.enumerator())),
        ],
        family: loaded.family.clone(),
        n: loaded.function.n(),
        m: loaded.function.m(),
        input: Some(digest),
        failure: None,
    })
}

/// Rebuilds the code of a bundle and checks it against the recorded generator and weights.
fn load_bundle(text: &str) -> Result<(CodeBundle, LoadedFunction, FunctionCode), CliError> {
    let bundle: CodeBundle = from_json(text)?;
    if bundle.format != CODE_FORMAT || bundle.version != FORMAT_VERSION {
        return Err(CliError::Other(format!(
            "not a code bundle: format {:?} version {}",
            bundle.format, bundle.version
        )));
    }
    let loaded = bundle.function.load()?;
    let code = make_code(&loaded, bundle.augmented)?;
    let rows: Vec<String> = code.code().rows().iter().map(|r| r.to_hex()).collect();
    if rows != bundle.generator {
        return Err(CliError::Verification(
            "generator rows differ from the rebuilt code".into(),
        ));
    }
    Ok((bundle, loaded, code))
}

fn theorem10_context(
    spec: &FamilySpec,
) -> Result<Option<(mincodes::constructions::GoldParams, mincodes::gf2::Subspace)>, CliError> {
    let FamilySpec::Theorem10 { n, i, modulus, .. } = *spec else {
        return Ok(None);
    };
    let ctx = match modulus {
        Some(m) => FieldContext::new(n, m),
        None => FieldContext::with_default_modulus(n),
    }
    .map_err(|e| CliError::Constraint(e.to_string()))?;
    let (_, params) = gold(&ctx, i)?;
    let e = ctx
        .subfield(n / 2)
        .map_err(|e| CliError::Constraint(e.to_string()))?;
    Ok(Some((params, e)))
}

struct Checks {
    minimality: MinimalityReport,
    cross_checks: Vec<MinimalityReport>,
    generic: Option<mincodes::codes::GenericReport>,
    bound: Option<mincodes::codes::BoundReport>,
    sampling: Option<mincodes::codes::SampleReport>,
}

fn checks_for_route(
    route: RouteChoice,
    args: &VerifyArgs,
    bundle: &CodeBundle,
    loaded: &LoadedFunction,
    code: &FunctionCode,
) -> Result<Checks, CliError> {
    let (f, p) = (&loaded.function, &loaded.pairing);
    let k = code.code().dimension();
    let spectral_fits = !bundle.augmented && f.n() + f.m() <= CRITERION_MAX_NM;
    let concatenated = split_concat(f).is_some();
    let mut checks = Checks {
        minimality: MinimalityReport {
            verdict: Verdict::Inconclusive,
            route: mincodes::codes::Route::Bruteforce,
            witness: None,
            agreement: None,
            notes: vec![],
        },
        cross_checks: vec![],
        generic: None,
        bound: None,
        sampling: None,
    };
    let function_only = |name: &str| {
        if bundle.augmented {
            Err(CliError::Constraint(format!(
                "the {name} route applies to C_F only, not the augmented code; use --route bruteforce"
            )))
        } else {
            Ok(())
        }
    };
    match route {
        RouteChoice::Bruteforce => {
            checks.minimality = is_minimal_bruteforce(code.code())?;
        }
        RouteChoice::Walsh => {
            function_only("walsh")?;
            checks.minimality = minimality_walsh_criterion(f, p)?;
        }
        RouteChoice::Generic => {
            function_only("generic")?;
            let g = generic_ab_criterion(f, p)?;
            checks.minimality = g.minimality.clone();
            checks.generic = Some(g);
        }
        RouteChoice::Bound => {
            function_only("bound")?;
            let extras = loaded
                .family
                .as_ref()
                .map(theorem10_context)
                .transpose()?
                .flatten();
            let b = bound_argument(f, p, extras.as_ref().map(|(g, e)| (*g, e)))?;
            checks.minimality = b.minimality.clone();
            checks.bound = Some(b);
            checks.sampling = Some(sample_ding_triples(code.code(), args.samples, args.seed));
        }
        RouteChoice::Auto => {
            if k <= BRUTEFORCE_MAX_K {
                checks.minimality = is_minimal_bruteforce(code.code())?;
                if spectral_fits {
                    checks.cross_checks.push(minimality_walsh_criterion(f, p)?);
                }
                if spectral_fits && concatenated {
                    match generic_ab_criterion(f, p) {
                        Ok(g) => {
                            checks.cross_checks.push(g.minimality.clone());
                            checks.generic = Some(g);
                        }
                        Err(CodeError::Premise(why)) => checks
                            .minimality
                            .notes
                            .push(format!("generic criterion not applicable: {why}")),
                        Err(e) => return Err(e.into()),
                    }
                }
            } else if spectral_fits {
                checks.minimality = minimality_walsh_criterion(f, p)?;
            } else if concatenated && !bundle.augmented {
                return checks_for_route(RouteChoice::Bound, args, bundle, loaded, code);
            } else {
                return Err(CliError::Budget(format!(
                    "k = {k} exceeds the pair-scan budget ({BRUTEFORCE_MAX_K}) and n + m = {} \
                     exceeds the spectral budget ({CRITERION_MAX_NM}); only F = (f, G) codes \
                     have a bound route",
                    f.n() + f.m()
                )));
            }
        }
    }
    Ok(checks)
}

fn run_verify(args: &VerifyArgs) -> Result<Run, CliError> {
    let (text, digest) = input_digest(&args.code)?;
    let (bundle, loaded, code) = load_bundle(&text)?;
    let dist = weight_distribution(&code)?;
    if weight_entries(&dist) != bundle.weights {
        return Err(CliError::Verification(
            "recorded weights differ from the recomputed distribution".into(),
        ));
    }
    let checks = checks_for_route(args.route, args, &bundle, &loaded, &code)?;
    let ab = ab_from_spectrum_extremes(&dist, &loaded.function, &loaded.pairing)?;
    let routes = verify_weight_routes(&code, args.samples.min(100_000), args.seed)?;

    let mut consistent = routes.agrees();
    let mut problems = vec![];
    if !routes.agrees() {
        problems.push(format!("weight routes disagree at {:?}", routes.mismatch));
    }
    if !bundle.augmented && !ab.agree {
        consistent = false;
        problems.push("AB verdict by weights and by spectrum differ".into());
    }
    for r in std::iter::once(&checks.minimality).chain(&checks.cross_checks) {
        if r.agreement == Some(false) {
            consistent = false;
            problems.push("Ding and covering scans differ".into());
        }
        if let Some(w) = &r.witness {
            if !w.recheck(code.code()) {
                consistent = false;
                problems.push(format!("witness {:#x}/{:#x} fails the recheck", w.c1, w.c2));
            }
        }
    }
    for r in &checks.cross_checks {
        if r.verdict != checks.minimality.verdict {
            consistent = false;
            problems.push(format!("{:?} route disagrees: {:?}", r.route, r.verdict));
        }
    }
    if let Some(s) = &checks.sampling {
        if s.violations > 0 {
            consistent = false;
            problems.push(format!("{} sampled Ding violations", s.violations));
        }
    }
    let minimal = checks.minimality.is_minimal();
    let report = VerifyReport {
        format: REPORT_FORMAT.into(),
        version: FORMAT_VERSION,
        parameters: bundle.parameters.clone(),
        route: checks.minimality.route,
        minimal,
        minimality: checks.minimality.clone(),
        cross_checks: checks.cross_checks,
        ab: ab.clone(),
        weight_routes: RouteSummary::from(&routes),
        generic: checks.generic,
        bound: checks.bound,
        sampling: checks.sampling,
        consistent,
    };
    let verdict = match checks.minimality.verdict {
        Verdict::Minimal => "minimal".to_string(),
        Verdict::NotMinimal => {
            let w = checks.minimality.witness.as_ref();
            format!(
                "not minimal (witness {})",
                w.map_or("none".into(), |w| format!("{:#x}/{:#x}", w.c1, w.c2))
            )
        }
        Verdict::Inconclusive => "inconclusive".to_string(),
    };
    let summary = format!(
        "{} {verdict}; AB ratio {} {}",
        bundle.parameters,
        ab.ratio,
        if ab.satisfied {
            "satisfied"
        } else {
            "violated"
        }
    );
    let failure = if !consistent {
        Some(CliError::Verification(problems.join("; ")))
    } else if !minimal {
        Some(CliError::Verification(String::new()))
    } else {
        None
    };
    Ok(Run {
        summary,
        outputs: vec![("report.json", to_json(&report)?)],
        family: loaded.family.clone(),
        n: loaded.function.n(),
        m: loaded.function.m(),
        input: Some(digest),
        failure,
    })
}

/// A function whose code should realize the `kind` table at `(n, m)`.
pub fn table_instance(
    kind: TableKind,
    n: u32,
    m: u32,
    i: u32,
) -> Result<(VectorialFunction, Pairing), CliError> {
    let units: Vec<u32> = (0..m).map(|j| 1 << j).collect();
    let bent = |k: u32| -> Result<VectorialFunction, CliError> {
        if !k.is_multiple_of(2) || m > k / 2 || m == 0 {
            return Err(CliError::Constraint(format!(
                "no vectorial bent ({k}, {m})-function: needs {k} even and m <= {}",
                k / 2
            )));
        }
        let fam = build_family(&FamilySpec::VectorialBent {
            n: k,
            r: (k / 2).max(2),
            complemented: false,
        })?;
        Ok(fam.function.project(&units)?)
    };
    match kind {
        TableKind::Bent => Ok((bent(n)?, Pairing::VectorDot)),
        TableKind::Theorem6 => {
            let fam = build_family(&FamilySpec::Theorem6 {
                n,
                i,
                complemented: false,
            })?;
            Ok((fam.function, fam.pairing))
        }
        TableKind::Ab => {
            let fam = build_family(&FamilySpec::Gold {
                n,
                i: 1,
                modulus: None,
            })?;
            Ok((fam.function, fam.pairing))
        }
        TableKind::Plateaued { lambda } => {
            if lambda == 0 {
                return Ok((bent(n)?, Pairing::VectorDot));
            }
            let gold_i = (1..n).find(|&i| gcd(n, i) == lambda && (n / lambda) % 2 == 1);
            if let (Some(i), true) = (gold_i, m <= n) {
                let fam = build_family(&FamilySpec::Gold {
                    n,
                    i,
                    modulus: None,
                })?;
                return Ok((fam.function.project(&units)?, fam.pairing));
            }
            if lambda >= n {
                return Err(CliError::Constraint(format!("λ < n (got λ = {lambda})")));
            }
            let g = bent(n - lambda)?;
            let low = (1u32 << g.n()) - 1;
            Ok((
                VectorialFunction::from_fn(n, m, |x| g.get(x & low))?,
                Pairing::VectorDot,
            ))
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Side-by-side closed form vs enumeration; `Err(Verification)` on any mismatch.
pub fn run_table(args: &TableArgs) -> Result<String, CliError> {
    let n = args.n;
    let (kind, m) = match args.kind {
        TableName::Bent => (TableKind::Bent, args.m.unwrap_or(n / 2)),
        TableName::Ab => (TableKind::Ab, args.m.unwrap_or(n)),
        TableName::Theorem6 => (TableKind::Theorem6, args.m.unwrap_or(2)),
        TableName::Plateaued => (
            TableKind::Plateaued {
                lambda: args.lambda,
            },
            args.m.unwrap_or(n),
        ),
    };
    let closed = table_frequencies(kind, n, m)?;
    let (f, p) = table_instance(kind, n, m, args.i)?;
    let code = build_code(&f, &p)?;
    let (enumerated, route) = if code.code().dimension() <= POPCOUNT_MAX_K {
        (popcount_distribution(code.code())?, "popcount")
    } else {
        (weight_distribution(&code)?, "walsh")
    };
    compare_tables(&closed, &enumerated, route, code.code().dimension())
}

fn compare_tables(
    closed: &WeightDistribution,
    enumerated: &WeightDistribution,
    route: &str,
    k: usize,
) -> Result<String, CliError> {
    let mut weights: Vec<u64> = closed.map().keys().copied().collect();
    weights.extend(enumerated.map().keys());
    weights.sort_unstable();
    weights.dedup();
    let mut out = format!("{:>8} {:>14} {:>14}\n", "weight", "closed-form", route);
    let mut mismatches = 0;
    for w in weights {
        let (a, b) = (closed.frequency(w), enumerated.frequency(w));
        let mark = if a == b { "" } else { "  <-- mismatch" };
        if a != b {
            mismatches += 1;
        }
        out.push_str(&format!("{w:>8} {a:>14} {b:>14}{mark}\n"));
    }
    out.push_str(&format!(
        "{:>8} {:>14} {:>14}\n",
        "total",
        closed.total(),
        enumerated.total()
    ));
    if closed.total() != 1u128 << k {
        mismatches += 1;
        out.push_str(&format!("closed-form frequencies do not sum to 2^{k}\n"));
    }
    if mismatches > 0 {
        out.push_str("mismatch\n");
        return Err(CliError::Verification(out));
    }
    out.push_str("match\n");
    Ok(out)
}

pub fn run_spectrum(args: &SpectrumArgs) -> Result<String, CliError> {
    let (_, loaded) = load_function(&read(&args.function)?)?;
    let w = loaded.function.spectrum(args.mu, &loaded.pairing)?;
    let mut out = String::from("nu,walsh\n");
    for (nu, v) in w.values().iter().enumerate() {
        out.push_str(&format!("{nu:#x},{v}\n"));
    }
    Ok(out)
}

fn execute(command: &Command) -> Result<Run, CliError> {
    match command {
        Command::Construct(a) => run_construct(a),
        Command::Code(a) => run_code(a),
        Command::Verify(a) => run_verify(a),
        _ => unreachable!("only file-producing commands are executed here"),
    }
}

fn out_dir(command: &Command) -> &Path {
    match command {
        Command::Construct(a) => &a.out,
        Command::Code(a) => &a.out,
        Command::Verify(a) => &a.out,
        _ => unreachable!("only file-producing commands have --out"),
    }
}

/// `run-construct.json`, `run-code.json` or `run-verify.json`.
pub fn record_name(command: &Command) -> &'static str {
    match command {
        Command::Construct(_) => "run-construct.json",
        Command::Code(_) => "run-code.json",
        Command::Verify(_) => "run-verify.json",
        _ => unreachable!("only file-producing commands are recorded"),
    }
}

fn record_for(command: &Command, run: &Run) -> RunRecord {
    let (t, spread) = spread_info(run.family.as_ref());
    RunRecord {
        format: RUN_FORMAT.into(),
        version: FORMAT_VERSION,
        tool_version: TOOL_VERSION.into(),
        invocation: command.clone(),
        family: run.family.clone(),
        n: run.n,
        m: run.m,
        t,
        spread,
        input: run.input.clone(),
        outputs: run
            .outputs
            .iter()
            .map(|(name, body)| FileDigest {
                file: (*name).into(),
                sha256: sha256_hex(body.as_bytes()),
            })
            .collect(),
    }
}

/// Runs a file-producing command, writes outputs and `run.json`, returns the summary.
fn produce(command: &Command) -> Result<String, CliError> {
    let run = execute(command)?;
    let dir = out_dir(command);
    for (name, body) in &run.outputs {
        write_atomic(&dir.join(name), body.as_bytes())?;
    }
    let record = record_for(command, &run);
    write_atomic(
        &dir.join(record_name(command)),
        to_json(&record)?.as_bytes(),
    )?;
    match run.failure {
        Some(CliError::Verification(msg)) if msg.is_empty() => {
            Err(CliError::Verification(run.summary))
        }
        Some(CliError::Verification(msg)) => {
            Err(CliError::Verification(format!("{}\n{msg}", run.summary)))
        }
        Some(other) => Err(other),
        None => Ok(run.summary),
    }
}

fn run_replay(args: &ReplayArgs) -> Result<String, CliError> {
    let record: RunRecord = from_json(&read(&args.record)?)?;
    if record.format != RUN_FORMAT {
        return Err(CliError::Other(format!(
            "not a run record: {:?}",
            record.format
        )));
    }
    if let Some(input) = &record.input {
        let (_, now) = input_digest(Path::new(&input.file))?;
        if now.sha256 != input.sha256 {
            return Err(CliError::Verification(format!(
                "input {} changed since the run",
                input.file
            )));
        }
    }
    let run = execute(&record.invocation)?;
    let again = record_for(&record.invocation, &run);
    let mut report = String::new();
    let mut differ = 0;
    for (old, new) in record.outputs.iter().zip(&again.outputs) {
        let same = old == new;
        if !same {
            differ += 1;
        }
        report.push_str(&format!(
            "{} {}\n",
            old.file,
            if same { "identical" } else { "DIFFERS" }
        ));
    }
    if record.tool_version != TOOL_VERSION {
        report.push_str(&format!(
            "recorded with version {}, replayed with {TOOL_VERSION}\n",
            record.tool_version
        ));
    }
    if record.outputs.len() != again.outputs.len()
        || differ > 0
        || record.tool_version != TOOL_VERSION
    {
        report.push_str("replay does not reproduce the recorded outputs\n");
        return Err(CliError::Verification(report));
    }
    report.push_str("replay reproduces every output\n");
    Ok(report)
}

/// Configures the global thread pool from `MINCODES_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v.parse().map_err(|_| {
        CliError::Other(format!(
            "{THREADS_ENV} must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Other(e.to_string()))
}

fn absolute(path: &Path) -> Result<PathBuf, CliError> {
    std::fs::canonicalize(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

/// Input files and output directories as absolute paths, so records replay from anywhere.
fn normalize(command: &Command) -> Result<Command, CliError> {
    let out = |dir: &Path| -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(dir)?;
        absolute(dir)
    };
    Ok(match command {
        Command::Construct(a) => Command::Construct(ConstructArgs {
            out: out(&a.out)?,
            ..a.clone()
        }),
        Command::Code(a) => Command::Code(CodeArgs {
            function: absolute(&a.function)?,
            out: out(&a.out)?,
            ..a.clone()
        }),
        Command::Verify(a) => Command::Verify(VerifyArgs {
            code: absolute(&a.code)?,
            out: out(&a.out)?,
            ..a.clone()
        }),
        other => other.clone(),
    })
}

/// Runs one command; the returned text goes to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        c @ (Command::Construct(_) | Command::Code(_) | Command::Verify(_)) => {
            produce(&normalize(c)?)
        }
        Command::Table(a) => run_table(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Replay(a) => run_replay(a),
    }
}
