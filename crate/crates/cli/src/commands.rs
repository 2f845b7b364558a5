use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dt_regge::complex::gauss_bonnet_check;
use dt_regge::geometry::{half_edge_lengths, median_identity_check, CornerFan};
use dt_regge::io::schema::{CatalogJson, RibbonGraphJson, TriangulationJson};
use dt_regge::io::{catalog_to_json, ribbon_to_json, CacheStatus, CatalogCache, RunReport, SchemaError};
use dt_regge::measure::kontsevich::KontsevichError;
use dt_regge::measure::{incidence_matrix, kontsevich_check, leray_volume, PfaffianError};
use dt_regge::numeric::rational::{format_q, parse_q, q, Precision, Q};
use dt_regge::pairing::duality::pairing_from_catalog;
use dt_regge::pairing::enumerate::{check_feasible, triangulation_of};
use dt_regge::pairing::{
    enumerate_triangulations, generating_f, intersection_number, Catalog, EnumError, EnumOptions, PairingError,
    TauError, TauOptions,
};
use dt_regge::polygon::rank_at_regular;
use dt_regge::ribbon::{boundary_cycles, code_hex, canonical_code};
use dt_regge::{dualize, RibbonGraph, Triangulation};

use crate::{CacheAction, CheckKind, Cli, Command, EnumFlags, IntList, Key};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Cap(m) => f.write_str(m),
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::ResourceCap { .. } => CliError::Cap(e.to_string()),
            EnumError::Infeasible(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<TauError> for CliError {
    fn from(e: TauError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::Enumeration(e) => e.into(),
            PairingError::Tau(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<KontsevichError> for CliError {
    fn from(e: KontsevichError) -> Self {
        match e {
            KontsevichError::Pfaffian(PfaffianError::TooLarge(_)) => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

struct Timer(Vec<(String, u64)>, Instant);

impl Timer {
    fn new() -> Self {
        Timer(Vec::new(), Instant::now())
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.0.push((name.into(), now.duration_since(self.1).as_millis() as u64));
        self.1 = now;
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_atomic(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Input(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", path.display()));
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, format!("{text}\n")).map_err(fail)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        fail(e)
    })
}

fn report(cli: &Cli, command: &str, inputs: Value, results: Value, pass: bool, timer: Timer) -> Result<Outcome, CliError> {
    let mut r = RunReport::new(command, inputs, results, pass);
    r.timings_ms = timer.0.into_iter().collect();
    emit(cli, &r.to_json())?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn enum_options(f: &EnumFlags) -> EnumOptions {
    EnumOptions {
        max_faces: f.max_faces,
        parallel: !f.serial,
    }
}

fn tau_options(enable_dvv: bool) -> Result<TauOptions, CliError> {
    if enable_dvv && !cfg!(feature = "dvv") {
        return Err(CliError::Input("--enable-dvv needs a build with the `dvv` feature".into()));
    }
    Ok(TauOptions { enable_dvv })
}

fn cache(cli: &Cli) -> Option<CatalogCache> {
    cli.cache_dir.clone().map(CatalogCache::new).or_else(CatalogCache::from_env)
}

fn catalog_for(cli: &Cli, key: &Key, opts: EnumOptions) -> Result<(Catalog, &'static str), CliError> {
    check_feasible(key.genus, key.vertices, &key.q)?;
    match cache(cli) {
        Some(c) => {
            let (cat, status) = c
                .get_or_enumerate(key.genus, key.vertices, &key.q, opts)
                .map_err(|e| match e {
                    dt_regge::io::CacheError::Enumeration(e) => e.into(),
                    other => CliError::Input(other.to_string()),
                })?;
            let s = match status {
                CacheStatus::Hit => "hit",
                CacheStatus::Miss => "miss",
                CacheStatus::Rebuilt => "rebuilt",
            };
            Ok((cat, s))
        }
        None => Ok((enumerate_triangulations(key.genus, key.vertices, &key.q, opts)?, "disabled")),
    }
}

fn key_json(key: &Key) -> Value {
    json!({ "genus": key.genus, "vertices": key.vertices, "q": key.q.0 })
}

enum Document {
    Triangulation(Triangulation),
    Ribbon(RibbonGraph),
    Catalog(Catalog),
}

fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let bad = |e: serde_json::Error| CliError::Input(format!("{}: {e}", path.display()));
    if v.get("entries").is_some() {
        let j: CatalogJson = serde_json::from_value(v).map_err(bad)?;
        if j.convention != dt_regge::io::CONVENTION_VERSION {
            return Err(CliError::Input(format!("catalog has stale convention stamp {:?}", j.convention)));
        }
        let c: Catalog = (&j).try_into()?;
        c.validate().map_err(CliError::Input)?;
        Ok(Document::Catalog(c))
    } else if v.get("faces").is_some() {
        let j: TriangulationJson = serde_json::from_value(v).map_err(bad)?;
        Ok(Document::Triangulation((&j).try_into()?))
    } else if v.get("darts").is_some() {
        let j: RibbonGraphJson = serde_json::from_value(v).map_err(bad)?;
        Ok(Document::Ribbon((&j).try_into()?))
    } else {
        Err(CliError::Input(format!(
            "{}: expected a triangulation, ribbon graph or catalog document",
            path.display()
        )))
    }
}

fn graphs_of(doc: &Document) -> Vec<RibbonGraph> {
    match doc {
        Document::Triangulation(t) => vec![dualize(t)],
        Document::Ribbon(g) => vec![g.clone()],
        Document::Catalog(c) => c.entries.iter().map(|e| e.graph.clone()).collect(),
    }
}

fn triangulations_of(doc: &Document) -> Result<Vec<Triangulation>, CliError> {
    Ok(match doc {
        Document::Triangulation(t) => vec![t.clone()],
        Document::Ribbon(g) => vec![triangulation_of(g).map_err(|e| CliError::Input(e.to_string()))?],
        Document::Catalog(c) => c.entries.iter().map(|e| e.triangulation.clone()).collect(),
    })
}

fn need_input(input: &Option<std::path::PathBuf>, kind: &str) -> Result<std::path::PathBuf, CliError> {
    input
        .clone()
        .ok_or_else(|| CliError::Input(format!("check {kind} needs --in")))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut timer = Timer::new();
    match &cli.command {
        Command::Enumerate { key, flags } => {
            let (cat, cache_status) = catalog_for(cli, key, enum_options(flags))?;
            timer.lap("enumerate");
            eprintln!("{} triangulations (cache: {cache_status})", cat.cardinality());
            emit(cli, &catalog_to_json(&cat))?;
            Ok(Outcome::Pass)
        }
        Command::Dual { input } => match read_document(input)? {
            Document::Triangulation(t) => {
                emit(cli, &ribbon_to_json(&dualize(&t)))?;
                Ok(Outcome::Pass)
            }
            _ => Err(CliError::Input("dual expects a triangulation document".into())),
        },
        Command::Check {
            kind,
            input,
            seed,
            samples,
            q: sides,
            precision,
        } => check(cli, *kind, input, *seed, *samples, sides, *precision, timer),
        Command::Volume { input, q: perims } => {
            let doc = read_document(input)?;
            let mut rows = Vec::new();
            for g in graphs_of(&doc) {
                let mut rhs = vec![Q::from_integer(0.into()); g.boundary_count()];
                for c in boundary_cycles(&g) {
                    rhs[c.label as usize - 1] = q(c.sides() as i64);
                }
                if let Some(p) = perims {
                    if p.len() != rhs.len() {
                        return Err(CliError::Input(format!("--q has {} entries, graph has {} boundaries", p.len(), rhs.len())));
                    }
                    rhs = p.iter().map(|&x| q(x as i64)).collect();
                }
                let sys = incidence_matrix(&g).with_rhs(rhs.clone());
                let v = leray_volume(&sys).map_err(|e| CliError::Input(e.to_string()))?;
                rows.push(json!({
                    "graph": code_hex(&canonical_code(&g)),
                    "perimeters": rhs.iter().map(format_q).collect::<Vec<_>>(),
                    "volume": format_q(&v.volume),
                    "dim": v.dim,
                    "vertex_count": v.vertices.len(),
                }));
            }
            timer.lap("volume");
            report(cli, "volume", json!({ "in": input }), json!({ "entries": rows }), true, timer)
        }
        Command::Tau { genus, d, q: sides, enable_dvv } => {
            let opts = tau_options(*enable_dvv)?;
            let results = match (d, sides) {
                (Some(d), None) => json!({ "intersection": format_q(&intersection_number(*genus, d, opts)?) }),
                (None, Some(s)) => json!({ "F": format_q(&generating_f(*genus, s, opts)?) }),
                _ => return Err(CliError::Input("tau needs exactly one of --d or --q".into())),
            };
            timer.lap("tau");
            report(cli, "tau", json!({ "genus": genus, "d": d.as_ref().map(|x| &x.0), "q": sides.as_ref().map(|x| &x.0) }), results, true, timer)
        }
        Command::Pairing {
            key,
            flags,
            enable_dvv,
            no_diagnostics,
        } => {
            let tau = tau_options(*enable_dvv)?;
            let (cat, _) = catalog_for(cli, key, enum_options(flags))?;
            timer.lap("enumerate");
            let mut r = pairing_from_catalog(&cat, enum_options(flags), tau)?;
            if *no_diagnostics {
                r.diagnostics = None;
            }
            timer.lap("pairing");
            eprintln!("lhs {} {} rhs {}", format_q(&r.lhs), if r.equal { "=" } else { "≠" }, format_q(&r.rhs));
            let pass = r.equal;
            let results = serde_json::to_value(&r).expect("serializable");
            report(cli, "pairing", key_json(key), results, pass, timer)
        }
        Command::Cache { action } => {
            let c = cache(cli).ok_or_else(|| {
                CliError::Input(format!("no cache directory: pass --cache-dir or set {}", dt_regge::io::CACHE_ENV))
            })?;
            let listing = c.list().map_err(|e| CliError::Input(e.to_string()))?;
            let rows: Vec<Value> = listing
                .iter()
                .map(|l| match &l.status {
                    Ok((g, n, qv, card)) => json!({
                        "path": l.path, "valid": true, "genus": g, "vertices": n, "q": qv, "cardinality": card
                    }),
                    Err(e) => json!({ "path": l.path, "valid": false, "error": e }),
                })
                .collect();
            let all_valid = listing.iter().all(|l| l.status.is_ok());
            let pass = *action == CacheAction::Ls || all_valid;
            let name = match action {
                CacheAction::Ls => "cache ls",
                CacheAction::Verify => "cache verify",
            };
            report(cli, name, json!({ "dir": c.dir() }), json!({ "files": rows, "all_valid": all_valid }), pass, timer)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    cli: &Cli,
    kind: CheckKind,
    input: &Option<std::path::PathBuf>,
    seed: u64,
    samples: usize,
    sides: &Option<IntList>,
    precision: u32,
    mut timer: Timer,
) -> Result<Outcome, CliError> {
    match kind {
        CheckKind::GaussBonnet => {
            let path = need_input(input, "gauss-bonnet")?;
            let doc = read_document(&path)?;
            let rows: Vec<(bool, Value)> = triangulations_of(&doc)?
                .iter()
                .map(|t| {
                    let r = gauss_bonnet_check(t);
                    (
                        r.pass,
                        json!({
                            "total_over_pi": format_q(r.total.coefficient()),
                            "expected_over_pi": format_q(r.expected.coefficient()),
                            "pass": r.pass,
                        }),
                    )
                })
                .collect();
            timer.lap("check");
            let pass = rows.iter().all(|r| r.0);
            let entries: Vec<Value> = rows.into_iter().map(|r| r.1).collect();
            report(cli, "check gauss-bonnet", json!({ "in": path }), json!({ "entries": entries }), pass, timer)
        }
        CheckKind::Kontsevich => {
            let path = need_input(input, "kontsevich")?;
            let doc = read_document(&path)?;
            let mut rows = Vec::new();
            let mut pass = true;
            for g in graphs_of(&doc) {
                let r = kontsevich_check(&g)?;
                pass &= r.pass;
                rows.push(serde_json::to_value(&r).expect("serializable"));
            }
            timer.lap("check");
            report(cli, "check kontsevich", json!({ "in": path }), json!({ "entries": rows }), pass, timer)
        }
        CheckKind::Median => {
            let fans = match input {
                Some(path) => vec![read_fan(path)?],
                None => random_fans(seed, samples),
            };
            let mut rows = Vec::new();
            let mut pass = true;
            for fan in &fans {
                let d = half_edge_lengths(fan).map_err(|e| CliError::Input(e.to_string()))?;
                let r = median_identity_check(&d);
                pass &= r.pass;
                rows.push(json!({ "sides": fan.len(), "residual": format_q(&r.residual), "pass": r.pass }));
            }
            timer.lap("check");
            let inputs = json!({ "in": input, "seed": seed, "samples": fans.len() });
            report(cli, "check median", inputs, json!({ "entries": rows }), pass, timer)
        }
        CheckKind::Rank => {
            let qs: Vec<u32> = sides.as_ref().map(|s| s.0.clone()).unwrap_or_else(|| (3..=8).collect());
            let mut rows = Vec::new();
            let mut pass = true;
            for &s in &qs {
                let r = rank_at_regular(s as usize, Precision(precision)).map_err(|e| CliError::Input(e.to_string()))?;
                let ok = r.rank + 1 == s as usize;
                pass &= ok;
                rows.push(json!({ "sides": s, "rank": r.rank, "kernel_dim": r.kernel_dim, "expected_rank": s - 1, "pass": ok }));
            }
            timer.lap("check");
            report(cli, "check rank", json!({ "q": qs, "precision": precision }), json!({ "entries": rows }), pass, timer)
        }
    }
}

/// `{"spokes_sq": ["p/q", ...], "links_sq": ["p/q", ...]}`.
fn read_fan(path: &Path) -> Result<CornerFan, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let field = |name: &str| -> Result<Vec<Q>, CliError> {
        v.get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::Input(format!("fan file needs an array {name:?}")))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| CliError::Input(format!("{name} entries must be \"p/q\" strings")))
                    .and_then(|s| parse_q(s).map_err(|e| CliError::Input(e.to_string())))
            })
            .collect()
    };
    CornerFan::new(field("spokes_sq")?, field("links_sq")?).map_err(|e| CliError::Input(e.to_string()))
}

/// Fans with all lengths in `[1, 19/10]`, so every triangle is proper.
fn random_fans(seed: u64, count: usize) -> Vec<CornerFan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=8);
            let mut len_sq = || {
                let k: i64 = rng.gen_range(10..=19);
                Q::new((k * k).into(), 100.into())
            };
            let spokes = (0..n).map(|_| len_sq()).collect();
            let links = (0..n).map(|_| len_sq()).collect();
            CornerFan::new(spokes, links).expect("lengths in [1, 1.9] satisfy the triangle inequality")
        })
        .collect()
}
