use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use fllab::geometry::{
    gl_representative, sample_hermitian, sample_matched_pair, sample_nonhermitian_point, u_representative, Element,
    InvariantPoint, Side, MAX_REJECTIONS,
};
use fllab::io::{format_padic, InvariantJson, MatrixJson};
use fllab::orbital::{lemma1_check, orbital_gl_unit, orbital_oracle, orbital_u_unit, OrbitalResult};
use fllab::padic::{Field, FieldConfig};
use fllab::weil::{fourier_order_check, sl2_relation_check, unit_selfdual_check, WeilModel};
use fllab::LabError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{
    Cli, Command, FieldArgs, FourierArgs, InvariantsArgs, Lemma1Args, OrbitArgs, RepresentArgs, SamplingArgs,
    VerifyArgs,
};
use crate::report::{
    write_csv, CheckLine, FourierReport, Lemma1Record, Lemma1Report, Lemma1Summary, Meta, Report, SampleKind,
    SampleRecord, Summary,
};

/// Largest finite-level grid `fourier-check` will build.
const MAX_FOURIER_CELLS: usize = 100_000;

/// A failed command with its exit code: 2 for usage and parse errors, 3 for
/// precision that ran out even after the retry, 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Failure(String),
    Precision(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Precision(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) | CliError::Precision(m) => m,
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::InvalidConfig(_) | LabError::Parse(_) | LabError::Dimension(_) => CliError::Usage(e.to_string()),
            LabError::PrecisionExhausted(_) => CliError::Precision(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// What a successful (or completed but failing) command prints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Verify(a) => cmd_verify(&a),
        Command::Orbit(a) => cmd_orbit(&a),
        Command::Invariants(a) => cmd_invariants(&a),
        Command::Represent(a) => cmd_represent(&a),
        Command::FourierCheck(a) => cmd_fourier_check(&a),
        Command::Lemma1(a) => cmd_lemma1(&a),
    }
}

/// Independent stream `index` of the generator seeded by `seed`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `f` over a field of the configured precision and once more at twice
/// the precision if the first attempt runs out of digits.
fn with_retry<T>(cfg: FieldConfig, f: impl Fn(&Field) -> fllab::Result<T>) -> (fllab::Result<T>, u32) {
    match Field::new(cfg).and_then(|field| f(&field)) {
        Err(LabError::PrecisionExhausted(_)) => {
            let doubled = cfg.with_precision(cfg.precision * 2);
            (Field::new(doubled).and_then(|field| f(&field)), 1)
        }
        r => (r, 0),
    }
}

fn field_config(a: &FieldArgs) -> Result<FieldConfig, CliError> {
    Ok(a.config()?)
}

fn check_sampling(s: &SamplingArgs, min_n: usize) -> Result<(), CliError> {
    if !(min_n..=4).contains(&s.n) {
        return Err(CliError::Usage(format!("n must be between {min_n} and 4")));
    }
    if s.height < 1 {
        return Err(CliError::Usage("height must be positive".into()));
    }
    Ok(())
}

fn meta(command: &'static str, cfg: &FieldConfig, s: &SamplingArgs, inject: Option<f64>) -> Meta {
    Meta {
        command,
        p: cfg.p,
        u: cfg.u,
        n: s.n,
        seed: s.seed,
        precision: cfg.precision,
        samples: s.samples,
        height: s.height,
        guard: s.guard,
        inject,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn emit(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("parse error: {e}")))
}

/// Sample `i` of `total` is injected when `⌊(i + 1) f⌋ > ⌊i f⌋`, which spreads
/// `⌊total f⌋` injections evenly.
fn is_injected(index: usize, fraction: f64) -> bool {
    ((index + 1) as f64 * fraction).floor() > (index as f64 * fraction).floor()
}

struct Computed {
    invariants: InvariantJson,
    o_u: i64,
    o_gl: i64,
    hermitian_exists: bool,
    x: Option<MatrixJson>,
    y: MatrixJson,
}

fn verify_once(field: &Field, s: &SamplingArgs, index: usize, injected: bool) -> fllab::Result<Computed> {
    let mut rng = sample_rng(s.seed, index);
    if injected {
        let (y, a) = sample_nonhermitian_point(&mut rng, field, s.n, s.height)?;
        let o_gl = orbital_gl_unit(&y, s.guard)?.value;
        let (o_u, x) = match u_representative(&a) {
            Err(LabError::NoHermitianOrbit) => (0, None),
            Ok(x) => (orbital_u_unit(&x, s.guard)?.value, Some(MatrixJson::from_element(&Element::U(x)))),
            Err(e) => return Err(e),
        };
        Ok(Computed {
            invariants: InvariantJson::from_point(&a),
            o_u,
            o_gl,
            hermitian_exists: a.hermitian_exists()?,
            x,
            y: MatrixJson::from_element(&Element::Gl(y)),
        })
    } else {
        let pair = sample_matched_pair(&mut rng, field, s.n, s.height)?;
        let o_u = orbital_u_unit(&pair.x, s.guard)?.value;
        let o_gl = orbital_gl_unit(&pair.y, s.guard)?.value;
        Ok(Computed {
            invariants: InvariantJson::from_point(&pair.a),
            o_u,
            o_gl,
            hermitian_exists: pair.a.hermitian_exists()?,
            x: Some(MatrixJson::from_element(&Element::U(pair.x))),
            y: MatrixJson::from_element(&Element::Gl(pair.y)),
        })
    }
}

fn verify_sample(cfg: FieldConfig, s: &SamplingArgs, index: usize, injected: bool) -> SampleRecord {
    let start = Instant::now();
    let (result, retries) = with_retry(cfg, |field| verify_once(field, s, index, injected));
    let runtime_ms = if s.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let kind = if injected { SampleKind::Injected } else { SampleKind::Matched };
    let mut rec = SampleRecord {
        index,
        kind,
        invariants: None,
        o_u: None,
        o_gl: None,
        hermitian_exists: None,
        equal: None,
        runtime_ms,
        retries,
        x: None,
        y: None,
        skipped: None,
        error: None,
    };
    match result {
        Ok(c) => {
            rec.invariants = Some(c.invariants);
            rec.o_u = Some(c.o_u);
            rec.o_gl = Some(c.o_gl);
            rec.hermitian_exists = Some(c.hermitian_exists);
            rec.equal = Some(c.o_u == c.o_gl);
            rec.x = c.x;
            rec.y = Some(c.y);
        }
        Err(e @ LabError::ExplosionGuard { .. }) => rec.skipped = Some(e.to_string()),
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let cfg = field_config(&a.field)?;
    let s = &a.sampling;
    check_sampling(s, 1)?;
    if !(0.0..=1.0).contains(&a.inject) {
        return Err(CliError::Usage("inject must lie in [0, 1]".into()));
    }
    let fraction = if s.n >= 2 { a.inject } else { 0.0 };
    let records: Vec<SampleRecord> = (0..s.samples)
        .into_par_iter()
        .map(|i| verify_sample(cfg, s, i, is_injected(i, fraction)))
        .collect();
    let summary = Summary::tally(&records);
    if let Some(path) = &a.csv {
        write_csv(path, &records).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let code = if summary.mismatches > 0 || summary.errors > 0 {
        1
    } else if summary.precision_failures > 0 {
        3
    } else {
        0
    };
    let stderr = format!(
        "verify: {} samples, {} mismatches, {} injected, {} precision failures, {} explosion skips, {} errors\n",
        summary.total, summary.mismatches, summary.injected, summary.precision_failures, summary.explosion_skips, summary.errors
    );
    let report = Report { meta: meta("verify", &cfg, s, Some(fraction)), samples: records, summary };
    Ok(Output { code, stdout: emit(to_json(&report), s.out.as_deref())?, stderr })
}

fn orbital(e: &Element, guard: u32) -> fllab::Result<OrbitalResult> {
    match e {
        Element::U(x) => orbital_u_unit(x, guard),
        Element::Gl(y) => orbital_gl_unit(y, guard),
    }
}

pub fn cmd_orbit(a: &OrbitArgs) -> Result<Output, CliError> {
    let m: MatrixJson = parse_json(&read_input(&a.input)?)?;
    if m.side != a.side {
        return Err(CliError::Usage(format!("--side {} does not match the matrix file ({})", a.side, m.side)));
    }
    let cfg = m.field_config(a.precision.precision)?;
    let (result, retries) = with_retry(cfg, |field| {
        let e = m.to_element(field)?;
        let r = orbital(&e, a.guard)?;
        let oracle = if a.oracle {
            Some(match orbital_oracle(&e, a.oracle_bound) {
                Ok(v) => json!({ "value": v, "agree": v == r.value }),
                Err(err @ LabError::OracleTooLarge { .. }) => json!({ "skipped": err.to_string() }),
                Err(err) => return Err(err),
            })
        } else {
            None
        };
        Ok((r, oracle))
    });
    let (r, oracle) = result?;
    let mut out = serde_json::to_value(&r).expect("result serializes");
    out["retries"] = json!(retries);
    let mut code = 0;
    if let Some(o) = oracle {
        if o.get("agree") == Some(&json!(false)) {
            code = 1;
        }
        out["oracle"] = o;
    }
    let stderr = if code == 1 { "orbit: oracle disagrees\n".to_string() } else { String::new() };
    Ok(Output { code, stdout: to_json(&out), stderr })
}

fn invariant_summary(a: &InvariantPoint) -> fllab::Result<serde_json::Value> {
    let j = InvariantJson::from_point(a);
    let rss = a.is_rss()?;
    let hermitian_exists = if rss { Some(a.hermitian_exists()?) } else { None };
    Ok(json!({
        "n": j.n,
        "charpoly": j.charpoly,
        "moments": j.moments,
        "q": a.q().map(|q| format_padic(&q)),
        "rss": rss,
        "hermitian_exists": hermitian_exists,
        "hankel_val_det": a.hankel_val_det()?,
    }))
}

pub fn cmd_invariants(a: &InvariantsArgs) -> Result<Output, CliError> {
    let m: MatrixJson = parse_json(&read_input(&a.input)?)?;
    let cfg = m.field_config(a.precision.precision)?;
    let (result, _) = with_retry(cfg, |field| invariant_summary(&m.to_element(field)?.invariants()));
    Ok(Output { code: 0, stdout: to_json(&result?), stderr: String::new() })
}

pub fn cmd_represent(a: &RepresentArgs) -> Result<Output, CliError> {
    let cfg = field_config(&a.field)?;
    let j: InvariantJson = parse_json(&read_input(&a.input)?)?;
    let (result, _) = with_retry(cfg, |field| {
        let point = j.to_point(field)?;
        if !point.is_rss()? {
            return Err(LabError::NotRss);
        }
        let e = match a.side {
            Side::Gl => Element::Gl(gl_representative(&point)?),
            Side::U => Element::U(u_representative(&point)?),
        };
        Ok((point.approx_eq(&e.invariants()), MatrixJson::from_element(&e)))
    });
    let (round_trip, m) = result?;
    if !round_trip {
        return Err(CliError::Failure("representative does not reproduce the invariants".into()));
    }
    Ok(Output { code: 0, stdout: to_json(&m), stderr: String::new() })
}

pub fn cmd_fourier_check(a: &FourierArgs) -> Result<Output, CliError> {
    let cfg = match a.u {
        Some(u) => FieldConfig::with_u(a.p, u, fllab::padic::DEFAULT_PRECISION)?,
        None => FieldConfig::new(a.p)?,
    };
    if !(2..=4).contains(&a.n) {
        return Err(CliError::Usage("n must be between 2 and 4".into()));
    }
    let cells = (a.p as f64).powi((2 * a.level * 2 * (a.n as u32 - 1)) as i32);
    if cells > MAX_FOURIER_CELLS as f64 {
        return Err(CliError::Usage(format!("level {} grid has {cells} cells, more than {MAX_FOURIER_CELLS}", a.level)));
    }
    let field = Field::new(cfg)?;
    let mut checks = Vec::new();
    for (k, side) in [Side::Gl, Side::U].into_iter().enumerate() {
        let model = WeilModel::new(&field, side, a.n)?;
        let mut rng = sample_rng(a.seed, k);
        let lines = [
            ("unit_selfdual", unit_selfdual_check(&model)?),
            ("fourier_order", fourier_order_check(&model, a.level, a.level, a.trials, &mut rng)?),
            ("sl2_relation", sl2_relation_check(&model, a.level, a.trials, &mut rng)?),
        ];
        checks.extend(lines.into_iter().map(|(check, pass)| CheckLine { side: side.to_string(), check, pass }));
    }
    let pass = checks.iter().all(|c| c.pass);
    let mut stderr = String::new();
    for c in &checks {
        let _ = writeln!(stderr, "{} {}: {}", c.side, c.check, if c.pass { "pass" } else { "FAIL" });
    }
    let report = FourierReport { p: cfg.p, u: cfg.u, n: a.n, level: a.level, trials: a.trials, seed: a.seed, checks, pass };
    Ok(Output { code: if pass { 0 } else { 1 }, stdout: to_json(&report), stderr })
}

fn lemma1_sample(cfg: FieldConfig, s: &SamplingArgs, index: usize) -> Lemma1Record {
    let (result, retries) = with_retry(cfg, |field| {
        let mut rng = sample_rng(s.seed, index);
        for _ in 0..MAX_REJECTIONS {
            let x = sample_hermitian(&mut rng, field, s.n, s.height)?;
            if x.q().valuation() == Some(0) {
                let r = lemma1_check(&x, s.guard)?;
                return Ok((MatrixJson::from_element(&Element::U(x)), r));
            }
        }
        Err(LabError::SamplingExhausted(MAX_REJECTIONS))
    });
    let mut rec = Lemma1Record {
        index,
        x: None,
        u_lhs: None,
        u_rhs: None,
        gl_lhs: None,
        gl_rhs: None,
        holds: None,
        retries,
        skipped: None,
        error: None,
    };
    match result {
        Ok((x, r)) => {
            rec.x = Some(x);
            rec.u_lhs = Some(r.u_lhs);
            rec.u_rhs = Some(r.u_rhs);
            rec.gl_lhs = Some(r.gl_lhs);
            rec.gl_rhs = Some(r.gl_rhs);
            rec.holds = Some(r.holds);
        }
        Err(e @ LabError::ExplosionGuard { .. }) => rec.skipped = Some(e.to_string()),
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

pub fn cmd_lemma1(a: &Lemma1Args) -> Result<Output, CliError> {
    let cfg = field_config(&a.field)?;
    let s = &a.sampling;
    check_sampling(s, 2)?;
    let records: Vec<Lemma1Record> = (0..s.samples).into_par_iter().map(|i| lemma1_sample(cfg, s, i)).collect();
    let summary = Lemma1Summary::tally(&records);
    let code = if summary.failures > 0 || summary.errors > 0 {
        1
    } else if summary.precision_failures > 0 {
        3
    } else {
        0
    };
    let stderr = format!(
        "lemma1: {} samples, {} failures, {} precision failures, {} explosion skips, {} errors\n",
        summary.total, summary.failures, summary.precision_failures, summary.explosion_skips, summary.errors
    );
    let report = Lemma1Report { meta: meta("lemma1", &cfg, s, None), samples: records, summary };
    Ok(Output { code, stdout: emit(to_json(&report), s.out.as_deref())?, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injection_fraction_is_exact() {
        let hits = (0..500).filter(|&i| is_injected(i, 0.2)).count();
        assert_eq!(hits, 100);
        assert!(!(0..50).any(|i| is_injected(i, 0.0)));
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(LabError::InvalidConfig("p".into())).code(), 2);
        assert_eq!(CliError::from(LabError::NotRss).code(), 1);
        assert_eq!(CliError::from(LabError::PrecisionExhausted("x")).code(), 3);
    }
}
