//! Command-line front end: argument grammar, dispatch and the JSON envelope.

use crate::batch::Mode;
use crate::chambers::{self, decomposition, diagram_ascii, diagram_svg, region, ChamberLocation, DiagramWindow};
use crate::dimensions::{codim_check, connectedness, expected_dim, flip_dimensions, hitchin_dims};
use crate::exact::{parse_rat, rat_json, Rat, ShowRat};
use crate::higgs::{self, EspQuadruple};
use crate::jets::{self, Jet, LocalizedPair, Scalar, Series};
use crate::pairs::{self, Candidate, DecomposablePair, Exactness, ExtensionPair, PairModel};
use crate::picard::{self, CurveModel, Divisor, PicClass};
use crate::selftest;
use crate::spectral::{self, SpectralData};
use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

const AJ_NOTE: &str = "Abel-Jacobi coordinates are taken in [0,1)^{2g} with respect to the base point implicit in the input curve model";

#[derive(Parser, Debug)]
#[command(name = "quadpair", version, about = "Exact computations for rank-2 quadratic pairs on curves")]
pub struct Cli {
    /// Emit the versioned JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Params {
    #[arg(long)]
    pub g: i64,
    #[arg(long = "dU", allow_hyphen_values = true)]
    pub d_u: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical values and chambers for (g, d_U, d).
    Chambers {
        #[command(flatten)]
        params: Params,
        /// Locate this alpha in the decomposition.
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Option<Rat>,
    },
    /// Region diagram over a (d, alpha) window.
    RegionDiagram {
        #[arg(long = "dU", allow_hyphen_values = true)]
        d_u: i64,
        #[arg(long, value_parser = parse_int_range, allow_hyphen_values = true)]
        d_range: (i64, i64),
        #[arg(long, value_parser = parse_rat_range, allow_hyphen_values = true)]
        alpha_range: (Rat, Rat),
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected dimension and flip-locus dimensions.
    Dims {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha_k: Option<Rat>,
    },
    /// Connectedness verdict at alpha.
    Connectedness {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Rat,
    },
    /// Rank-1 pairs: moduli shape and fibres.
    #[command(subcommand)]
    Rank1(Rank1Command),
    /// Stability of an explicit pair.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Side of the flip at a critical value.
    WallSide {
        file: PathBuf,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha_k: Rat,
    },
    /// Uniqueness pattern of destabilizing subbundles.
    DestabAudit {
        file: PathBuf,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Rat,
    },
    /// Truncated power series along a divisor.
    #[command(subcommand)]
    Jets(JetsCommand),
    /// Spectral curve type.
    #[command(subcommand)]
    Spectral(SpectralCommand),
    /// Membership in and fibres of the cover of the symmetric product.
    #[command(subcommand)]
    Px(PxCommand),
    /// Hitchin invariant of a pair.
    Hitchin { file: PathBuf },
    /// Topological invariants of enhanced symplectic Higgs bundles.
    #[command(subcommand)]
    Higgs(HiggsCommand),
    /// SO0(2,3) dictionary and component counts.
    #[command(subcommand)]
    So23(So23Command),
    /// Stability of enhanced symplectic Higgs bundles.
    #[command(subcommand)]
    Esp(EspCommand),
    /// Run the invariant suite.
    Selftest {
        #[arg(long, env = "QUADPAIR_SEED", default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        quick: bool,
        /// Disable data parallelism.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Rank1Command {
    /// FILE holds {"curve", "U"}.
    Verdict {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Rat,
    },
    /// Line bundles L with L^2 = U(-D); D is a divisor as JSON.
    Fibre {
        file: PathBuf,
        #[arg(long = "D")]
        divisor: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum StabilityCommand {
    Check {
        file: PathBuf,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Rat,
        /// JSON list of extra candidate subbundles.
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum JetsCommand {
    /// Truncate expansions to the divisor: {"D", "jets"}.
    Restrict { file: PathBuf },
    /// Square roots of a single jet.
    Sqrt {
        /// Comma-separated rationals, lowest order first.
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
        coeffs: Vec<Rat>,
        #[arg(long)]
        len: usize,
    },
    /// Solutions of q^2 + eta = 0 along D: {"D", "jets"} with jets = eta.
    Solve {
        file: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
    /// Determinant identity on a localized pair: {"D", "local"}.
    DetCheck { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SpectralCommand {
    /// FILE holds {"curve", "D"}.
    Classify {
        #[arg(long = "D")]
        file: PathBuf,
        #[arg(long)]
        xi: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PxCommand {
    /// Is O(D) = L^2? FILE holds {"curve", "D"}.
    Check {
        file: PathBuf,
        #[arg(long = "L")]
        line: String,
    },
    /// All L with L^2 = O(D).
    Fibre { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum HiggsCommand {
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        d1: i64,
        #[arg(long, allow_hyphen_values = true)]
        d2: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
    /// Milnor-Wood range, or a check of (d1, d2).
    MilnorWood {
        #[arg(long)]
        g: i64,
        #[arg(long, allow_hyphen_values = true, requires = "d2")]
        d1: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "d1")]
        d2: Option<i64>,
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        d2: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum So23Command {
    Translate {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, conflicts_with = "w", required_unless_present = "w")]
        b: Option<u8>,
        #[arg(long)]
        w: Option<u8>,
    },
    Components {
        #[arg(long)]
        g: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum EspCommand {
    Check {
        file: PathBuf,
        /// Expected genus of the curve in FILE.
        #[arg(long)]
        g: Option<usize>,
    },
}

fn parse_int_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("not an integer: `{x}`"));
    Ok((p(a)?, p(b)?))
}

fn parse_rat_range(s: &str) -> Result<(Rat, Rat), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Metadata {
    pub model_only: bool,
    pub exactness: Option<Exactness>,
    pub hypothesis_flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aj_normalization: Option<&'static str>,
}

/// Result of a successful command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    pub meta: Metadata,
}

impl Outcome {
    fn new(payload: Value, text: String) -> Self {
        Outcome { payload, text, meta: Metadata { exactness: Some(Exactness::Exact), ..Default::default() } }
    }

    fn with_curve(mut self, curve: &CurveModel) -> Self {
        self.meta.aj_normalization = Some(AJ_NOTE);
        self.meta.model_only |= curve.model_only();
        self
    }

    fn flag(mut self, f: impl Into<String>) -> Self {
        self.meta.hypothesis_flags.push(f.into());
        self
    }

    fn model_only(mut self, on: bool) -> Self {
        self.meta.model_only |= on;
        self
    }

    fn exactness(mut self, e: Exactness) -> Self {
        self.meta.exactness = Some(e);
        self
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input: exit code 1.
    Usage(anyhow::Error),
    /// Well-formed input outside a domain of definition: exit code 2.
    Domain(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(e) | Failure::Domain(e) => format!("{e:#}"),
        }
    }
}

fn domain<E: std::error::Error + Send + Sync + 'static>(e: E) -> Failure {
    Failure::Domain(e.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Usage)?;
    serde_json::from_str(&text).with_context(|| format!("malformed input in {}", path.display())).map_err(Failure::Usage)
}

fn parse_json_arg<T: DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).with_context(|| format!("malformed {what}")).map_err(Failure::Usage)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload types serialize")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn read_pair_model(path: &Path) -> Result<PairModel, Failure> {
    let raw: Value = read_json(path)?;
    let model = if raw.get("sub").is_some() {
        let ep: ExtensionPair = serde_json::from_value(raw).context("malformed extension pair").map_err(Failure::Usage)?;
        ep.validate().map_err(domain)?;
        PairModel::Extension(ep)
    } else {
        let p: DecomposablePair = serde_json::from_value(raw).context("malformed pair").map_err(Failure::Usage)?;
        p.validate().map_err(domain)?;
        PairModel::Decomposable(p)
    };
    Ok(model)
}

fn read_decomposable(path: &Path) -> Result<DecomposablePair, Failure> {
    match read_pair_model(path)? {
        PairModel::Decomposable(p) => Ok(p),
        PairModel::Extension(_) => Err(Failure::Usage(anyhow!("this command needs a decomposable pair"))),
    }
}

fn curve_of(m: &PairModel) -> &CurveModel {
    match m {
        PairModel::Decomposable(p) => &p.curve,
        PairModel::Extension(e) => &e.curve,
    }
}

#[derive(Deserialize)]
struct CurveAndU {
    curve: CurveModel,
    #[serde(rename = "U")]
    u: PicClass,
}

#[derive(Deserialize)]
struct CurveAndDivisor {
    curve: CurveModel,
    #[serde(rename = "D")]
    divisor: Divisor,
}

#[derive(Deserialize)]
struct JetBundle {
    #[serde(rename = "D")]
    divisor: Divisor,
    jets: Series,
}

#[derive(Deserialize)]
struct LocalBundle {
    #[serde(rename = "D")]
    divisor: Divisor,
    local: LocalizedPair,
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| rat_json(*r)).collect())
}

fn show_rats(v: &[Rat]) -> String {
    v.iter().map(|r| ShowRat(*r).to_string()).collect::<Vec<_>>().join(", ")
}

fn location_text(loc: ChamberLocation) -> String {
    match loc {
        ChamberLocation::Critical(chambers::CriticalId::Max) => "critical value d/2".into(),
        ChamberLocation::Critical(chambers::CriticalId::K(k)) => format!("critical value alpha_{k}"),
        ChamberLocation::Chamber(i) => format!("chamber {i}"),
    }
}

fn cmd_chambers(p: Params, alpha: Option<Rat>) -> Result<Outcome, Failure> {
    let spec = chambers::ParamSpec::new(p.g, p.d_u, p.d);
    let dec = decomposition(p.d, p.d_u).map_err(domain)?;
    let chambers_json: Vec<Value> = dec
        .chambers
        .iter()
        .map(|c| json!({"lower": c.lower.map(rat_json), "upper": rat_json(c.upper)}))
        .collect();
    let mut payload = json!({
        "g": p.g, "dU": p.d_u, "d": p.d,
        "criticals": rats(&dec.criticals),
        "alphaMin": rat_json(dec.alpha_min),
        "alphaMax": rat_json(dec.alpha_max),
        "chambers": chambers_json,
    });
    let mut text = format!(
        "criticals: {}\nalpha_m = {}, d/2 = {}\nchambers: {}\n",
        show_rats(&dec.criticals),
        ShowRat(dec.alpha_min),
        ShowRat(dec.alpha_max),
        dec.chambers.len()
    );
    if let Some(a) = alpha {
        let tag = region(a, p.d, p.d_u);
        let loc = dec.locate(a, p.d);
        payload["alpha"] = rat_json(a);
        payload["region"] = to_value(&tag);
        payload["location"] = to_value(&loc);
        payload["genericRank"] = to_value(&chambers::generic_rank(a, p.d, p.d_u));
        let _ = writeln!(text, "alpha = {}: {:?}, {}", ShowRat(a), tag, loc.map_or("above d/2".into(), location_text));
    }
    Ok(Outcome::new(payload, text).model_only(spec.model_only()))
}

fn cmd_region_diagram(
    d_u: i64,
    d_range: (i64, i64),
    alpha_range: (Rat, Rat),
    format: Format,
    out: Option<PathBuf>,
) -> Result<Outcome, Failure> {
    let w = DiagramWindow::new(d_u, d_range, alpha_range);
    let doc = match format {
        Format::Ascii => diagram_ascii(&w),
        Format::Svg => diagram_svg(&w),
    }
    .map_err(domain)?;
    let payload = json!({"format": format!("{format:?}").to_lowercase(), "document": doc});
    let text = match out {
        Some(path) => {
            std::fs::write(&path, &doc)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(Failure::Usage)?;
            format!("wrote {}\n", path.display())
        }
        None => doc,
    };
    Ok(Outcome::new(payload, text).model_only(d_u <= 0))
}

fn cmd_dims(p: Params, alpha_k: Option<Rat>) -> Result<Outcome, Failure> {
    let e = expected_dim(p.g, p.d, p.d_u);
    let mut payload = json!({"expectedDimN": e.expected, "chiS2": e.chi_s2, "chiEnd": e.chi_end});
    let mut text = format!("expected dimension {} = {} - ({})\n", e.expected, e.chi_s2, e.chi_end);
    if let Ok((px, fibre)) = hitchin_dims(p.g, p.d, p.d_u) {
        payload["dimPX"] = json!(px);
        payload["dimHitchinFibre"] = json!(fibre);
        let _ = writeln!(text, "Hitchin base {px}, fibre {fibre}");
    }
    let hyp = p.d_u - p.d > p.g - 1;
    let mut out_meta = vec![format!("dU-d>g-1: {hyp}")];
    if let Some(ak) = alpha_k {
        let r = flip_dimensions(p.g, p.d, p.d_u, ak).map_err(domain)?;
        payload["flip"] = to_value(&r);
        let _ = writeln!(
            text,
            "at alpha_k = {}: S+ {}, S-0 {}, S-1 {}",
            ShowRat(ak),
            r.dim_splus,
            r.dim_sminus0,
            r.dim_sminus1.map_or("unproven".into(), |x| x.to_string())
        );
        if let Ok(c) = codim_check(p.g, p.d, p.d_u, ak) {
            payload["codim"] = to_value(&c);
            let _ = writeln!(text, "codimensions: S+ {}, S- >= {} (threshold {})", c.codim_splus, c.codim_sminus_lower_bound, c.threshold);
        }
        out_meta.push("dimensions are expected dimensions".into());
    }
    let mut o = Outcome::new(payload, text).model_only(p.g < 2);
    for f in out_meta {
        o = o.flag(f);
    }
    Ok(o)
}

fn cmd_connectedness(p: Params, alpha: Rat) -> Result<Outcome, Failure> {
    let v = connectedness(p.g, p.d, p.d_u, alpha);
    let text = format!("{v:?}\n");
    Ok(Outcome::new(to_value(&v), text).model_only(p.g < 2))
}

fn cmd_rank1(cmd: Rank1Command) -> Result<Outcome, Failure> {
    match cmd {
        Rank1Command::Verdict { file, degree, alpha } => {
            let input: CurveAndU = read_json(&file)?;
            input.curve.validate().map_err(domain)?;
            let v = picard::rank1_verdict(degree, alpha, &input.u, &input.curve);
            Ok(Outcome::new(to_value(&v), format!("{v:?}\n")).with_curve(&input.curve))
        }
        Rank1Command::Fibre { file, divisor } => {
            let input: CurveAndU = read_json(&file)?;
            let d: Divisor = parse_json_arg("divisor", &divisor)?;
            let roots = picard::rank1_fibre(&d, &input.u, &input.curve).map_err(domain)?;
            let text = roots.iter().map(|r| format!("{r}\n")).collect();
            Ok(Outcome::new(json!({"count": roots.len(), "classes": roots}), text).with_curve(&input.curve))
        }
    }
}

fn verdict_text(v: &pairs::StabilityVerdict) -> String {
    let mut t = format!("{:?}", v.status);
    if !v.semistable_types.is_empty() {
        let _ = write!(t, " (types {:?}, polystable {})", v.semistable_types, v.polystable);
    }
    if let Some(w) = &v.witness {
        let _ = write!(t, "; witness {:?} of type {:?}, degree {}", w.candidate, w.class, w.degree);
    }
    let _ = write!(t, "; {:?}", v.exactness);
    t + "\n"
}

fn cmd_stability(cmd: StabilityCommand) -> Result<Outcome, Failure> {
    let StabilityCommand::Check { file, alpha, candidates } = cmd;
    let model = read_pair_model(&file)?;
    let extra: Vec<Candidate> = match &candidates {
        Some(path) => read_json(path)?,
        None => Vec::new(),
    };
    let v = match &model {
        PairModel::Decomposable(p) => pairs::alpha_verdict(p, alpha, &extra).map_err(domain)?,
        PairModel::Extension(e) => pairs::extension_pair_verdict(e, alpha).map_err(domain)?,
    };
    let text = verdict_text(&v);
    Ok(Outcome::new(to_value(&v), text).exactness(v.exactness).with_curve(curve_of(&model)))
}

fn cmd_wall_side(file: &Path, alpha_k: Rat) -> Result<Outcome, Failure> {
    let model = read_pair_model(file)?;
    let side = pairs::wall_side(&model, alpha_k).map_err(domain)?;
    let mut o = Outcome::new(to_value(&side), format!("{side:?}\n")).with_curve(curve_of(&model));
    if let PairModel::Decomposable(p) = &model {
        if !p.is_canonical_form() || p.summands_isomorphic() {
            o = o.exactness(Exactness::CandidateRelative);
        }
    }
    Ok(o)
}

fn cmd_destab_audit(file: &Path, alpha: Rat) -> Result<Outcome, Failure> {
    let p = read_decomposable(file)?;
    let v = pairs::destab_audit(&p, alpha).map_err(domain)?;
    let text = if v.is_empty() { "no violations\n".to_string() } else { format!("{v:?}\n") };
    Ok(Outcome::new(json!({"violations": v}), text).with_curve(&p.curve))
}

fn jet_text(j: &Jet) -> String {
    j.to_string()
}

fn cmd_jets(cmd: JetsCommand) -> Result<Outcome, Failure> {
    match cmd {
        JetsCommand::Restrict { file } => {
            let b: JetBundle = read_json(&file)?;
            let r = jets::restrict(&b.jets, &b.divisor).map_err(domain)?;
            let text = r.per_point.iter().map(|(p, j)| format!("{p}: {}\n", jet_text(j))).collect();
            Ok(Outcome::new(to_value(&r), text))
        }
        JetsCommand::Sqrt { coeffs, len } => {
            if len == 0 {
                return Err(Failure::Usage(anyhow!("--len must be positive")));
            }
            let mut c: Vec<Scalar> = coeffs.iter().map(|r| Scalar::ratio(*r.numer(), *r.denom())).collect();
            c.resize(len, Scalar::zero());
            let jet = Jet::new(c).map_err(domain)?;
            let set = jets::jet_sqrt(&jet).map_err(domain)?;
            let verified = set.roots.iter().all(|r| r.square() == jet);
            let mut text = format!("square roots of {}:\n", jet_text(&jet));
            for r in &set.roots {
                let _ = writeln!(text, "  {}", jet_text(r));
            }
            if set.free_tail > 0 {
                let _ = writeln!(text, "  (top {} coefficients free)", set.free_tail);
            }
            let _ = writeln!(text, "verified: {verified}");
            let payload = json!({"input": jet, "roots": set.roots, "freeTail": set.free_tail,
                "count": set.count(), "verified": verified});
            Ok(Outcome::new(payload, text))
        }
        JetsCommand::Solve { file, sequential } => {
            let b: JetBundle = read_json(&file)?;
            let eta = jets::restrict(&b.jets, &b.divisor).map_err(domain)?;
            let mode = if sequential { Mode::Sequential } else { Mode::default() };
            let sol = jets::solve_q(&eta, mode);
            let mut text = format!("{} solutions", sol.solutions.len());
            if sol.free_tail > 0 {
                let _ = write!(text, " (each with {} free coefficients)", sol.free_tail);
            }
            text.push('\n');
            if let Some(note) = &sol.field_note {
                let _ = writeln!(text, "note: {note}");
            }
            Ok(Outcome::new(to_value(&sol), text))
        }
        JetsCommand::DetCheck { file } => {
            let b: LocalBundle = read_json(&file)?;
            let ok = jets::det_identity_check(&b.local, &b.divisor).map_err(domain)?;
            let theta = jets::theta_gamma(&b.local, &b.divisor).map_err(domain)?;
            let text = format!("det identity: {ok}; theta vanishes: {}\n", theta.is_zero());
            Ok(Outcome::new(json!({"holds": ok, "theta": theta, "thetaVanishes": theta.is_zero()}), text))
        }
    }
}

fn cmd_spectral(cmd: SpectralCommand) -> Result<Outcome, Failure> {
    let SpectralCommand::Classify { file, xi } = cmd;
    let input: CurveAndDivisor = read_json(&file)?;
    let xi: PicClass = parse_json_arg("xi", &xi)?;
    let sd = SpectralData { divisor: input.divisor, xi };
    let c = spectral::spectral_classify(&sd, &input.curve).map_err(domain)?;
    Ok(Outcome::new(json!({"class": c}), format!("{c:?}\n")).with_curve(&input.curve))
}

fn cmd_px(cmd: PxCommand) -> Result<Outcome, Failure> {
    match cmd {
        PxCommand::Check { file, line } => {
            let input: CurveAndDivisor = read_json(&file)?;
            let l: PicClass = parse_json_arg("L", &line)?;
            let member = spectral::px_member(&input.divisor, &l, &input.curve).map_err(domain)?;
            Ok(Outcome::new(json!({"member": member}), format!("{member}\n")).with_curve(&input.curve))
        }
        PxCommand::Fibre { file } => {
            let input: CurveAndDivisor = read_json(&file)?;
            let roots = spectral::px_fibre(&input.divisor, &input.curve).map_err(domain)?;
            let text = roots.iter().map(|r| format!("{r}\n")).collect();
            Ok(Outcome::new(json!({"count": roots.len(), "classes": roots}), text).with_curve(&input.curve))
        }
    }
}

fn cmd_hitchin(file: &Path) -> Result<Outcome, Failure> {
    let p = read_decomposable(file)?;
    let inv = spectral::hitchin_invariant(&p).map_err(domain)?;
    let higgs = spectral::twisted_higgs(&p).map_err(domain)?;
    let (exactness, det_text) = match &inv.det {
        spectral::DetDivisor::Exact { divisor } => (Exactness::Exact, divisor.to_string()),
        spectral::DetDivisor::ClassOnly { class, .. } => (Exactness::CandidateRelative, format!("class {class}")),
    };
    let mut payload = json!({"det": inv.det, "xi": inv.xi, "traceZero": higgs.trace_zero});
    let mut text = format!("xi = {}\ndiv det(gamma) = {det_text}\n", inv.xi);
    if let Some(sd) = inv.spectral_data() {
        if let Ok(c) = spectral::spectral_classify(&sd, &p.curve) {
            payload["spectralClass"] = to_value(&c);
            let _ = writeln!(text, "spectral curve: {c:?}");
        }
    }
    Ok(Outcome::new(payload, text).exactness(exactness).with_curve(&p.curve))
}

fn cmd_higgs(cmd: HiggsCommand) -> Result<Outcome, Failure> {
    match cmd {
        HiggsCommand::Invariants { d1, d2, n } => {
            let inv = higgs::project_invariants(d1, d2, n).map_err(domain)?;
            let norm = higgs::normalize(d1, d2, n).map_err(domain)?;
            let pi1 = higgs::pi1_tables(n);
            let lifts = higgs::lift_to_sp(d2);
            let text = format!(
                "(a, b) = ({}, {})\nnormalized (d1, d2) = ({}, {}) after twisting by degree {}\nlifts to Sp: {lifts}\npi1 EU(n) = {}, pi1 U(n)/(Z/2) = {}\n",
                inv.a, inv.b, norm.d1, norm.d2, norm.m, pi1.enhanced_unitary, pi1.unitary_mod_center
            );
            Ok(Outcome::new(json!({"invariants": inv, "normalized": norm, "pi1": pi1, "liftsToSp": lifts}), text))
        }
        HiggsCommand::MilnorWood { g, d1, d2, n } => match d1.zip(d2) {
            Some((d1, d2)) => {
                let mw = higgs::milnor_wood(d1, d2, n, g).map_err(domain)?;
                let text = format!(
                    "{}: {} <= d1 <= {}, |a| = {} <= {}\n",
                    if mw.valid { "valid" } else { "invalid" },
                    mw.d1_lower,
                    mw.d1_upper,
                    mw.a.abs(),
                    mw.toledo_bound
                );
                Ok(Outcome::new(to_value(&mw), text))
            }
            None => {
                let mw = higgs::milnor_wood(0, 0, n, g).map_err(domain)?;
                let text = format!("|a| <= {}\n", mw.toledo_bound);
                Ok(Outcome::new(json!({"g": g, "n": n, "toledoBound": mw.toledo_bound}), text))
            }
        },
        HiggsCommand::Lift { d2 } => {
            let lifts = higgs::lift_to_sp(d2);
            Ok(Outcome::new(json!({"d2": d2, "liftsToSp": lifts}), format!("{lifts}\n")))
        }
    }
}

fn cmd_so23(cmd: So23Command) -> Result<Outcome, Failure> {
    match cmd {
        So23Command::Translate { a, b, w } => {
            let check = |x: u8, name: &str| {
                if x < 2 {
                    Ok(x)
                } else {
                    Err(Failure::Usage(anyhow!("--{name} must be 0 or 1")))
                }
            };
            let inv = match (b, w) {
                (Some(b), _) => higgs::so23_from_ab(a, check(b, "b")?),
                (None, Some(w)) => higgs::So23Invariants { a, w: check(w, "w")? },
                (None, None) => unreachable!("clap requires --b or --w"),
            };
            let (_, b) = higgs::so23_to_ab(inv);
            let lifts = higgs::so23_lifts(inv);
            let text = format!("(a, b) = ({a}, {b})  <->  (a, w) = ({}, {})\nlifts to Sp(4,R): {lifts}\n", inv.a, inv.w);
            Ok(Outcome::new(json!({"a": a, "b": b, "w": inv.w, "liftsToSp": lifts}), text))
        }
        So23Command::Components { g } => {
            let t = higgs::component_table(g).map_err(domain)?;
            let mut text = format!("{:>4} {:>2}  verdict\n", "a", "w");
            for r in &t.rows {
                let v = match r.verdict {
                    higgs::ComponentVerdict::Connected(k) => format!("Connected({k})"),
                    higgs::ComponentVerdict::Empty => "Empty".into(),
                    higgs::ComponentVerdict::OutOfScope => "OutOfScope".into(),
                };
                let _ = writeln!(text, "{:>4} {:>2}  {v}", r.a, r.w);
            }
            let _ = writeln!(text, "connected components for 0 < |a| < {}: {}", 2 * g - 2, t.in_range_total);
            Ok(Outcome::new(to_value(&t), text).flag("|a| in {0, 2g-2}: counts not determined here"))
        }
    }
}

fn cmd_esp(cmd: EspCommand) -> Result<Outcome, Failure> {
    let EspCommand::Check { file, g } = cmd;
    let q: EspQuadruple = read_json(&file)?;
    q.curve.validate().map_err(domain)?;
    if let Some(g) = g {
        if g != q.curve.genus {
            return Err(Failure::Domain(anyhow!("--g {g} does not match the curve genus {}", q.curve.genus)));
        }
    }
    let v = higgs::esp_semistable(&q).map_err(domain)?;
    let inv = q.invariants().map_err(domain)?;
    let text = format!("{}(a, b) = ({}, {})\n", verdict_text(&v), inv.a, inv.b);
    let route = if q.beta.is_zero() { "quadratic pair with U = L K at alpha = 0" } else { "filtrations" };
    Ok(Outcome::new(json!({"verdict": v, "invariants": inv, "route": route}), text)
        .exactness(v.exactness)
        .with_curve(&q.curve))
}

fn cmd_selftest(seed: u64, quick: bool, sequential: bool) -> Result<Outcome, Failure> {
    let mode = if sequential { Mode::Sequential } else { Mode::default() };
    let report = selftest::run(seed, quick, mode);
    let mut text = format!("selftest seed {seed}{}\n", if quick { " (quick)" } else { "" });
    for c in &report.checks {
        let _ = writeln!(
            text,
            "{} {} ({} cases){}",
            if c.ok() { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.first_failure.as_ref().map_or(String::new(), |f| format!(": {f}"))
        );
    }
    let _ = writeln!(text, "{}/{} checks passed", report.passed(), report.checks.len());
    if !report.all_ok() {
        return Err(Failure::Domain(anyhow!("{text}")));
    }
    Ok(Outcome::new(to_value(&report), text))
}

pub fn dispatch(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Chambers { params, alpha } => cmd_chambers(params, alpha),
        Command::RegionDiagram { d_u, d_range, alpha_range, format, out } => {
            cmd_region_diagram(d_u, d_range, alpha_range, format, out)
        }
        Command::Dims { params, alpha_k } => cmd_dims(params, alpha_k),
        Command::Connectedness { params, alpha } => cmd_connectedness(params, alpha),
        Command::Rank1(c) => cmd_rank1(c),
        Command::Stability(c) => cmd_stability(c),
        Command::WallSide { file, alpha_k } => cmd_wall_side(&file, alpha_k),
        Command::DestabAudit { file, alpha } => cmd_destab_audit(&file, alpha),
        Command::Jets(c) => cmd_jets(c),
        Command::Spectral(c) => cmd_spectral(c),
        Command::Px(c) => cmd_px(c),
        Command::Hitchin { file } => cmd_hitchin(&file),
        Command::Higgs(c) => cmd_higgs(c),
        Command::So23(c) => cmd_so23(c),
        Command::Esp(c) => cmd_esp(c),
        Command::Selftest { seed, quick, sequential } => cmd_selftest(seed, quick, sequential),
    }
}

pub fn envelope(result: &Result<Outcome, Failure>) -> Value {
    match result {
        Ok(o) => json!({"schemaVersion": SCHEMA_VERSION, "status": "ok", "payload": o.payload, "metadata": o.meta}),
        Err(f) => json!({
            "schemaVersion": SCHEMA_VERSION,
            "status": "error",
            "payload": {"kind": if f.exit_code() == 1 { "usage" } else { "domain" }, "message": f.message()},
            "metadata": Metadata::default(),
        }),
    }
}

/// Runs the command line and returns `(stdout, stderr, exit code)`.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 { (rendered, String::new(), 0) } else { (String::new(), rendered, 1) };
        }
    };
    let json_mode = cli.json;
    let result = dispatch(cli);
    let code = result.as_ref().err().map_or(0, Failure::exit_code);
    if json_mode {
        return (pretty(&envelope(&result)), String::new(), code);
    }
    match result {
        Ok(o) => {
            let mut text = o.text;
            if o.meta.model_only {
                text.push_str("note: model-only (outside the theorem-backed range)\n");
            }
            (text, String::new(), 0)
        }
        Err(f) => (String::new(), format!("error: {}\n", f.message()), code),
    }
}
