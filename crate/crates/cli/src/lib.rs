//! Experiment orchestration for the `p2mu` command: a serializable
//! configuration per experiment, a deterministic runner producing
//! self-describing reports, and CSV export of scans and maps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use p2mu_core::cauchy::{cauchy_eps, cauchy_pv, plemelj_scan, CauchyValue, JumpScanReport};
use p2mu_core::geometry::lens_harmonic_measure;
use p2mu_core::hz::{
    g_alpha_zeros, interior_zero_exists, verify_not_generated, verify_orthogonality, HZParams, NotGeneratedReport,
    OrthogonalityReport,
};
use p2mu_core::measure::{LensHarmonic, MeasureComponent};
use p2mu_core::p2space::{gram, point_eval_norm, wandering_dim, WanderingRecord};
use p2mu_core::{
    approach_path, read_measure, reflect_tangent, serialize_measure, stolz_contains, vitali_3r_select, ComplexMeasure,
    Disk, StolzRegion, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "P2MU_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: &'static str,
        source: p2mu_core::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

fn core<T>(context: &'static str, r: p2mu_core::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Core { context, source })
}

/// Parse `RE,IM` (or a bare real number) into a complex number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number {t:?} in {s:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE,IM, got {s:?}")),
    }
}

/// Rectangular grid `xmin,xmax,nx,ymin,ymax,ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: (f64, f64, usize),
    pub y: (f64, f64, usize),
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let t: Vec<&str> = s.split(',').map(str::trim).collect();
        if t.len() != 6 {
            return Err(format!("grid spec needs xmin,xmax,nx,ymin,ymax,ny, got {s:?}"));
        }
        let f = |i: usize| t[i].parse::<f64>().map_err(|e| format!("bad grid bound {:?}: {e}", t[i]));
        let n = |i: usize| match t[i].parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("bad grid count {:?}", t[i])),
        };
        Ok(Self {
            x: (f(0)?, f(1)?, n(2)?),
            y: (f(3)?, f(4)?, n(5)?),
        })
    }

    pub fn points(&self) -> Vec<C64> {
        let axis = |(lo, hi, n): (f64, f64, usize)| -> Vec<f64> {
            if n == 1 {
                vec![lo]
            } else {
                (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
            }
        };
        let ys = axis(self.y);
        axis(self.x)
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| C64::new(x, y)))
            .collect()
    }
}

/// One experiment with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    CauchyEval {
        measure_path: PathBuf,
        z: Vec<C64>,
        eps: Option<f64>,
    },
    PlemeljScan {
        measure_path: PathBuf,
        /// Angle of the boundary point, in radians.
        zeta: f64,
        r: f64,
        deltas: Vec<f64>,
        tol: f64,
    },
    BpeMap {
        measure_path: PathBuf,
        grid: GridSpec,
        nmax: usize,
    },
    P2Wandering {
        measure_path: PathBuf,
        a: C64,
        n: usize,
        svtol: f64,
    },
    HzVerify {
        a: C64,
        alpha: u32,
        c: f64,
        n: usize,
        tol: f64,
        distance_ns: Vec<usize>,
        wandering_ns: Vec<usize>,
    },
    CoveringTest {
        instances: usize,
        disks: usize,
        samples_per_disk: usize,
    },
    LensExport {
        c: f64,
        samples_per_side: usize,
    },
    Stolz {
        zeta: f64,
        r: f64,
        delta: Option<f64>,
        points: Vec<C64>,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::CauchyEval { .. } => "cauchy-eval",
            Experiment::PlemeljScan { .. } => "plemelj-scan",
            Experiment::BpeMap { .. } => "bpe-map",
            Experiment::P2Wandering { .. } => "p2-wandering",
            Experiment::HzVerify { .. } => "hz-verify",
            Experiment::CoveringTest { .. } => "covering-test",
            Experiment::LensExport { .. } => "lens-export",
            Experiment::Stolz { .. } => "stolz",
        }
    }
}

/// Unknown fields are rejected by the flattened [`Experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Seed for randomized suites; the only source of randomness.
    #[serde(default)]
    pub seed: u64,
    /// Record wall time in the report (breaks byte-identical reruns).
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            output_path: None,
            seed: 0,
            timing: false,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A named check with its measured value, tolerance and oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub oracle: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn below(name: &str, oracle: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            oracle: oracle.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Boolean check; `value` is 1 for true.
    pub fn holds(name: &str, oracle: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            oracle: oracle.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub z: C64,
    #[serde(flatten)]
    pub value: CauchyValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BpeRow {
    pub z: C64,
    /// `k_n(z)` for each entry of `ns`.
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BpeMap {
    pub ns: Vec<usize>,
    pub rows: Vec<BpeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HzResult {
    pub interior_zeros: Vec<C64>,
    pub orthogonality: OrthogonalityReport,
    pub generation: NotGeneratedReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringInstance {
    pub inputs: usize,
    pub selected: usize,
    pub disjoint: bool,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StolzRow {
    pub z: C64,
    pub in_stolz: bool,
    pub in_reflected: bool,
    pub reflection: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StolzResult {
    pub rows: Vec<StolzRow>,
    pub approach_path: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    CauchyEval(Vec<EvalRow>),
    PlemeljScan(JumpScanReport),
    BpeMap(BpeMap),
    P2Wandering(WanderingRecord),
    HzVerify(Box<HzResult>),
    CoveringTest(Vec<CoveringInstance>),
    LensExport(serde_json::Value),
    Stolz(StolzResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub result: Payload,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

fn load(path: &Path) -> CliResult<ComplexMeasure> {
    core("reading measure", read_measure(path))
}

/// Run one experiment. Deterministic given the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Report> {
    let start = Instant::now();
    let (checks, result) = match &cfg.experiment {
        Experiment::CauchyEval { measure_path, z, eps } => {
            let mu = load(measure_path)?;
            let mut rows = Vec::with_capacity(z.len());
            for &p in z {
                let value = match eps {
                    Some(e) => core("cauchy eval", cauchy_eps(&mu, p, *e))?,
                    None => core("cauchy eval", cauchy_pv(&mu, p))?,
                };
                rows.push(EvalRow { z: p, value });
            }
            let finite = rows.iter().all(|r| r.value.value.re.is_finite() && r.value.value.im.is_finite());
            (
                vec![Check::holds("finite_values", "transform values are finite", finite)],
                Payload::CauchyEval(rows),
            )
        }
        Experiment::PlemeljScan {
            measure_path,
            zeta,
            r,
            deltas,
            tol,
        } => {
            let mu = load(measure_path)?;
            let z = C64::from_polar(1.0, *zeta);
            let rep = core("plemelj scan", plemelj_scan(&mu, z, *r, deltas, *tol))?;
            let last = rep.final_record().expect("nonempty delta list");
            let checks = vec![
                Check::below(
                    "inner_limit",
                    "pv(zeta) + h(zeta) conj(zeta) / 2",
                    (last.inner_fit - last.predicted_inner).norm(),
                    10.0 * tol,
                ),
                Check::below(
                    "outer_limit",
                    "pv(zeta) - h(zeta) conj(zeta) / 2",
                    (last.outer_fit - last.predicted_outer).norm(),
                    10.0 * tol,
                ),
                Check::below(
                    "jump",
                    "h(zeta) conj(zeta)",
                    (rep.fitted_jump().expect("nonempty") - rep.predicted_jump).norm(),
                    10.0 * tol,
                ),
            ];
            (checks, Payload::PlemeljScan(rep))
        }
        Experiment::BpeMap {
            measure_path,
            grid,
            nmax,
        } => {
            let mu = load(measure_path)?;
            if *nmax < 4 {
                return Err(CliError::Usage(format!("nmax = {nmax} must be at least 4")));
            }
            let ns = vec![nmax / 4, nmax / 2, *nmax];
            let top = core("gram", gram(&mu, *nmax))?;
            let bases = ns
                .iter()
                .map(|&n| if n == *nmax { Ok(top.clone()) } else { top.truncate(n) })
                .collect::<p2mu_core::Result<Vec<_>>>();
            let bases = core("gram", bases)?;
            let rows: Vec<BpeRow> = grid
                .points()
                .into_iter()
                .map(|z| BpeRow {
                    z,
                    k: bases.iter().map(|gb| point_eval_norm(gb, z)).collect(),
                })
                .collect();
            let monotone = rows.iter().all(|r| r.k.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-10)));
            (
                vec![Check::holds("k_n_nondecreasing", "nested polynomial spans", monotone)],
                Payload::BpeMap(BpeMap { ns, rows }),
            )
        }
        Experiment::P2Wandering { measure_path, a, n, svtol } => {
            let mu = load(measure_path)?;
            let gb = core("gram", gram(&mu, *n))?;
            let rec = core("wandering", wandering_dim(&gb, *a, *svtol))?;
            let checks = vec![
                Check::holds("a_in_disk", "|a| < 1", !rec.degenerate_a),
                Check::holds("dimension_one", "dim(M_n ⊖ z M_(n-1)) = 1", rec.dim == 1),
            ];
            (checks, Payload::P2Wandering(rec))
        }
        Experiment::HzVerify {
            a,
            alpha,
            c,
            n,
            tol,
            distance_ns,
            wandering_ns,
        } => {
            let p = core("hz parameters", HZParams::new(*a, *alpha, *c))?;
            let zeros = core("hz zeros", g_alpha_zeros(&p))?;
            let orth = core("hz orthogonality", verify_orthogonality(&p, *n, *tol))?;
            let mut checks = vec![Check::holds(
                "interior_zero_exists",
                "1 - |a|^2 < 2 cos(2 pi / (alpha + 2)) - 1",
                interior_zero_exists(&p),
            )];
            for f in &orth.families {
                checks.push(Check::below(
                    &format!("orthogonality_{}", f.name),
                    &f.description,
                    f.max_residual,
                    f.tolerance,
                ));
            }
            let gen = core("hz generation", verify_not_generated(&p, distance_ns, wandering_ns))?;
            for row in &gen.distances {
                checks.push(Check {
                    name: format!("d2_lower_bound_n{}", row.n),
                    oracle: "d2 >= |z1 - a| / k_(n+1)(z1)".into(),
                    value: row.d2,
                    tolerance: row.d2_lower_bound,
                    pass: row.d2_certified,
                });
            }
            checks.push(Check::holds("d1_monotone", "nested spans", gen.d1_monotone));
            checks.push(Check::below(
                "d1_decay",
                "d1(last) / d1(first) < 0.9",
                gen.d1_ratio,
                p2mu_core::hz::D1_DECAY,
            ));
            for w in &gen.wandering {
                checks.push(Check::holds(
                    &format!("wandering_dim_n{}", w.n),
                    "dim(M_n ⊖ z M_(n-1)) = 1",
                    w.dim == 1,
                ));
                let cos = w.cosine_to_projection.unwrap_or(0.0);
                checks.push(Check {
                    name: format!("wandering_cosine_n{}", w.n),
                    oracle: "cosine to projection of g above 0.999".into(),
                    value: cos,
                    tolerance: p2mu_core::hz::COSINE_MIN,
                    pass: cos > p2mu_core::hz::COSINE_MIN,
                });
            }
            let result = HzResult {
                interior_zeros: zeros,
                orthogonality: orth,
                generation: gen,
            };
            (checks, Payload::HzVerify(Box::new(result)))
        }
        Experiment::CoveringTest {
            instances,
            disks,
            samples_per_disk,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut rows = Vec::with_capacity(*instances);
            for _ in 0..*instances {
                let input: Vec<Disk> = (0..*disks)
                    .map(|_| Disk {
                        center: C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                        radius: rng.random_range(0.001..0.25),
                    })
                    .collect();
                let kept = core("vitali", vitali_3r_select(&input))?;
                let disjoint = kept
                    .iter()
                    .enumerate()
                    .all(|(i, a)| kept[i + 1..].iter().all(|b| a.disjoint(b)));
                let tripled: Vec<Disk> = kept.iter().map(|k| k.dilate(3.0)).collect();
                let covered = input.iter().all(|d| {
                    (0..*samples_per_disk).all(|s| {
                        let t = std::f64::consts::TAU * s as f64 / *samples_per_disk as f64;
                        let z = d.center + C64::from_polar(d.radius, t);
                        tripled.iter().any(|t| (z - t.center).norm() <= t.radius)
                    })
                });
                rows.push(CoveringInstance {
                    inputs: input.len(),
                    selected: kept.len(),
                    disjoint,
                    covered,
                });
            }
            let checks = vec![
                Check::holds("disjoint", "selected disks pairwise disjoint", rows.iter().all(|r| r.disjoint)),
                Check::holds("covered", "tripled disks cover every input disk", rows.iter().all(|r| r.covered)),
            ];
            (checks, Payload::CoveringTest(rows))
        }
        Experiment::LensExport { c, samples_per_side } => {
            let omega = core("lens", lens_harmonic_measure(*c))?;
            let mass = omega.total_mass();
            let lens = core("lens", LensHarmonic::harmonic(*c))?;
            let lens = core(
                "lens",
                lens.with_samples(*samples_per_side, p2mu_core::geometry::lens::PARAM_HALF_WIDTH / 2.0),
            )?;
            let exported = core("lens", ComplexMeasure::single(MeasureComponent::LensHarmonic(lens)))?;
            let value: serde_json::Value =
                serde_json::from_str(&serialize_measure(&exported)).expect("serialized measure is valid JSON");
            (
                vec![Check::below("total_mass", "probability measure", (mass - 1.0).norm(), 1e-10)],
                Payload::LensExport(value),
            )
        }
        Experiment::Stolz { zeta, r, delta, points } => {
            let z = C64::from_polar(1.0, *zeta);
            let mut s = core("stolz", StolzRegion::new(z, *r))?;
            if let Some(d) = delta {
                s = core("stolz", s.with_cap(*d))?;
            }
            let t = s.reflected();
            let rows = points
                .iter()
                .map(|&p| {
                    Ok(StolzRow {
                        z: p,
                        in_stolz: stolz_contains(&s, p),
                        in_reflected: stolz_contains(&t, p),
                        reflection: reflect_tangent(z, p)?,
                    })
                })
                .collect::<p2mu_core::Result<Vec<_>>>();
            let rows = core("stolz", rows)?;
            let path = core("stolz", approach_path(&s, 0.5 * r, 12))?;
            let inside = path.iter().all(|&p| stolz_contains(&s, p));
            (
                vec![Check::holds("approach_path_inside", "path lies in the region", inside)],
                Payload::Stolz(StolzResult {
                    rows,
                    approach_path: path,
                }),
            )
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        config: cfg.clone(),
        checks,
        pass,
        result,
        wall_time_s: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a leading `#` comment row documenting its columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub name: String,
    pub text: String,
}

fn table(name: &str, comment: &str, header: &[String], rows: Vec<Vec<f64>>) -> CsvTable {
    let mut text = String::new();
    writeln!(text, "# {comment}").expect("string write");
    writeln!(text, "{}", header.join(",")).expect("string write");
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        writeln!(text, "{}", cells.join(",")).expect("string write");
    }
    CsvTable { name: name.into(), text }
}

/// CSV tables for the scans and maps in a report; empty for other experiments.
pub fn plot_tables(report: &Report) -> Vec<CsvTable> {
    match &report.result {
        Payload::BpeMap(map) => {
            let mut header = vec!["re".to_string(), "im".to_string()];
            header.extend(map.ns.iter().map(|n| format!("k_{n}")));
            let rows = map
                .rows
                .iter()
                .map(|r| {
                    let mut v = vec![r.z.re, r.z.im];
                    v.extend(&r.k);
                    v
                })
                .collect();
            vec![table("bpe_map", "point evaluation norms k_n(re + i im)", &header, rows)]
        }
        Payload::PlemeljScan(rep) => {
            let header = ["delta", "inner_fit_re", "inner_fit_im", "outer_fit_re", "outer_fit_im", "agree_fraction"]
                .map(String::from);
            let rows = rep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.delta,
                        r.inner_fit.re,
                        r.inner_fit.im,
                        r.outer_fit.re,
                        r.outer_fit.im,
                        r.agree_fraction,
                    ]
                })
                .collect();
            vec![table("plemelj_scan", "one-sided limit fits per shell radius delta", &header, rows)]
        }
        _ => Vec::new(),
    }
}

/// Write one CSV per scan or map into `dir`, named `<stem>_<table>.csv`.
pub fn emit_plot_data(report: &Report, dir: &Path, stem: &str) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for t in plot_tables(report) {
        let path = dir.join(format!("{stem}_{}.csv", t.name));
        fs::write(&path, &t.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        out.push(path);
    }
    Ok(out)
}

/// Resolve the report path: explicit path, else `$P2MU_OUT_DIR/<command>.json`.
pub fn resolve_output(cfg: &ExperimentConfig, env_dir: Option<PathBuf>) -> Option<PathBuf> {
    cfg.output_path
        .clone()
        .or_else(|| env_dir.map(|d| d.join(format!("{}.json", cfg.experiment.name()))))
}

/// Write the report and its plot data. A `.csv` output path receives the
/// first table directly and the JSON report next to it; a lens export also
/// writes the measure spec as `<stem>_measure.json`.
pub fn write_outputs(report: &Report, path: &Path) -> CliResult<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io(dir))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let mut written = Vec::new();
    if path.extension().is_some_and(|e| e == "csv") {
        let tables = plot_tables(report);
        let json = path.with_extension("json");
        fs::write(&json, report.to_json()).map_err(io(&json))?;
        written.push(json);
        if let Some(first) = tables.first() {
            fs::write(path, &first.text).map_err(io(path))?;
        } else {
            fs::write(path, "").map_err(io(path))?;
        }
        written.push(path.to_path_buf());
    } else {
        fs::write(path, report.to_json()).map_err(io(path))?;
        written.push(path.to_path_buf());
        written.extend(emit_plot_data(report, dir, stem)?);
    }
    if let Payload::LensExport(measure) = &report.result {
        let spec = dir.join(format!("{stem}_measure.json"));
        let text = serde_json::to_string_pretty(measure).expect("measure serializes") + "\n";
        fs::write(&spec, text).map_err(io(&spec))?;
        written.push(spec);
    }
    Ok(written)
}
