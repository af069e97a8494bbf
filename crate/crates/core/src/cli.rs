//! Batch front end: flat `key = value` run configurations, dispatch to the
//! library operations, and report/CSV/dump output.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::discretization::{write_dump, GridFunction, Mesh};
use crate::energy::{KirchhoffProblem, NonlinearityKind, NonlinearitySpec};
use crate::error::{Error, Result};
use crate::exponents::{validate_problem_exponents, ExponentField, ValidationReport};
use crate::linalg::dirichlet_eigenpairs;
use crate::modular::{check_modular_norm_relations, luxemburg_norm, modular, sobolev_norm};
use crate::solver::{
    find_negative_energy_point, mountain_pass_solve, multiplicity_outcome, rayleigh_quotient_min,
    verify_mountain_geometry, write_iteration_csv, GeometryOptions, MountainPassOptions,
    MultiplicityOptions, RayleighOptions, SolveReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Norm,
    Rayleigh,
    Geometry,
    Solve,
    Multiplicity,
}

impl Command {
    const ALL: [Command; 6] = [
        Command::Validate,
        Command::Norm,
        Command::Rayleigh,
        Command::Geometry,
        Command::Solve,
        Command::Multiplicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Norm => "norm",
            Command::Rayleigh => "rayleigh",
            Command::Geometry => "geometry",
            Command::Solve => "solve",
            Command::Multiplicity => "multiplicity",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Interval { a: f64, b: f64, n: usize },
    Rect { lo: [f64; 2], hi: [f64; 2], nx: usize, ny: usize },
}

impl DomainSpec {
    pub fn mesh(&self) -> Result<Mesh> {
        match *self {
            DomainSpec::Interval { a, b, n } => Mesh::interval(n, a, b),
            DomainSpec::Rect { lo, hi, nx, ny } => Mesh::rect(nx, ny, lo, hi),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Interval { a, b, n } => write!(f, "interval:{a},{b},{n}"),
            DomainSpec::Rect { lo, hi, nx, ny } => {
                write!(f, "rect:{},{},{},{},{nx},{ny}", lo[0], lo[1], hi[0], hi[1])
            }
        }
    }
}

impl FromStr for DomainSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, args) = s.split_once(':').ok_or("domain needs `kind:args`")?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let resolution = |t: &str| -> std::result::Result<usize, String> {
            let n: usize = t.parse().map_err(|_| format!("bad resolution `{t}`"))?;
            if n < 2 {
                return Err(format!("resolution must be at least 2, got {n}"));
            }
            Ok(n)
        };
        match (kind.trim(), parts.as_slice()) {
            ("interval", [a, b, n]) => Ok(DomainSpec::Interval {
                a: real(a)?,
                b: real(b)?,
                n: resolution(n)?,
            }),
            ("rect", [x0, y0, x1, y1, nx, ny]) => Ok(DomainSpec::Rect {
                lo: [real(x0)?, real(y0)?],
                hi: [real(x1)?, real(y1)?],
                nx: resolution(nx)?,
                ny: resolution(ny)?,
            }),
            _ => Err(format!("expected `interval:a,b,n` or `rect:x0,y0,x1,y1,nx,ny`, got `{s}`")),
        }
    }
}

/// Exponent descriptor, sampled at element centroids.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentSpec {
    Const(f64),
    /// `c0 + c1·x`
    Affine(f64, f64),
    /// One value per element.
    List(Vec<f64>),
}

impl ExponentSpec {
    pub fn field(&self, mesh: &Mesh) -> Result<ExponentField> {
        match self {
            ExponentSpec::Const(c) => ExponentField::constant(*c, mesh),
            ExponentSpec::Affine(c0, c1) => ExponentField::affine(*c0, *c1, mesh),
            ExponentSpec::List(v) => ExponentField::build(v, mesh),
        }
    }
}

impl fmt::Display for ExponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentSpec::Const(c) => write!(f, "const:{c}"),
            ExponentSpec::Affine(c0, c1) => write!(f, "affine:{c0},{c1}"),
            ExponentSpec::List(v) => write!(f, "list:{}", join(v)),
        }
    }
}

impl FromStr for ExponentSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, args) = s.split_once(':').ok_or("exponent needs `kind:args`")?;
        let values = reals(args)?;
        match (kind.trim(), values.as_slice()) {
            ("const", [c]) => Ok(ExponentSpec::Const(*c)),
            ("affine", [c0, c1]) => Ok(ExponentSpec::Affine(*c0, *c1)),
            ("list", v) if !v.is_empty() => Ok(ExponentSpec::List(v.to_vec())),
            _ => Err(format!("expected `const:c`, `affine:c0,c1` or `list:v1,...`, got `{s}`")),
        }
    }
}

/// Nonlinearity shape, `g = zero | power | scaled:c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GSpec {
    Zero,
    Power,
    Scaled(f64),
}

impl GSpec {
    fn kind(self) -> NonlinearityKind {
        match self {
            GSpec::Zero => NonlinearityKind::Zero,
            GSpec::Power => NonlinearityKind::PurePower,
            GSpec::Scaled(c) => NonlinearityKind::ScaledPower(c),
        }
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::Zero => f.write_str("zero"),
            GSpec::Power => f.write_str("power"),
            GSpec::Scaled(c) => write!(f, "scaled:{c}"),
        }
    }
}

impl FromStr for GSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(':') {
            None if s == "zero" => Ok(GSpec::Zero),
            None if s == "power" => Ok(GSpec::Power),
            Some(("scaled", c)) => Ok(GSpec::Scaled(real(c)?)),
            _ => Err(format!("expected `zero`, `power` or `scaled:c`, got `{s}`")),
        }
    }
}

/// Test function for the `norm` command.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// Product of unit tents across the domain.
    Tent,
    /// Product of `sin(π(x−x0)/L)` factors.
    Sine,
    /// Nodal values, kept as given.
    List(Vec<f64>),
}

impl FunctionSpec {
    fn grid(&self, mesh: &Arc<Mesh>) -> Result<GridFunction> {
        let (lo, hi) = bounding_box(mesh);
        let unit = |x: [f64; 2], k: usize| (x[k] - lo[k]) / (hi[k] - lo[k]);
        let dims = 0..mesh.dim();
        match self {
            FunctionSpec::Tent => Ok(GridFunction::from_fn(mesh.clone(), |x| {
                dims.clone().map(|k| 1.0 - (2.0 * unit(x, k) - 1.0).abs()).product()
            })),
            FunctionSpec::Sine => Ok(GridFunction::from_fn(mesh.clone(), |x| {
                dims.clone()
                    .map(|k| (std::f64::consts::PI * unit(x, k)).sin())
                    .product()
            })),
            FunctionSpec::List(v) => GridFunction::raw(mesh.clone(), v.clone()),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Tent => f.write_str("tent"),
            FunctionSpec::Sine => f.write_str("sine"),
            FunctionSpec::List(v) => write!(f, "list:{}", join(v)),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(':') {
            None if s == "tent" => Ok(FunctionSpec::Tent),
            None if s == "sine" => Ok(FunctionSpec::Sine),
            Some(("list", args)) => Ok(FunctionSpec::List(reals(args)?)),
            _ => Err(format!("expected `tent`, `sine` or `list:v1,...`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub domain: DomainSpec,
    pub p: ExponentSpec,
    pub q: ExponentSpec,
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    /// `None` picks the default admissible θ.
    pub theta: Option<f64>,
    pub s_a: f64,
    pub g: GSpec,
    pub u: FunctionSpec,
    pub tol: f64,
    pub max_iter: usize,
    pub n_path: usize,
    pub n_starts: usize,
    pub k_max: usize,
    pub restarts: usize,
    pub seed: u64,
    pub distinct_tol: f64,
    pub n_dirs: usize,
    pub rho_grid: Vec<f64>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Config with every optional key at its default.
    pub fn with_defaults(
        command: Command,
        domain: DomainSpec,
        p: ExponentSpec,
        q: ExponentSpec,
        a: f64,
        b: f64,
    ) -> Self {
        let mp = MountainPassOptions::default();
        let mult = MultiplicityOptions::default();
        let geo = GeometryOptions::default();
        RunConfig {
            command,
            domain,
            p,
            q,
            a,
            b,
            lambda: 0.0,
            theta: None,
            s_a: 1.0,
            g: GSpec::Power,
            u: FunctionSpec::Tent,
            tol: mp.tol,
            max_iter: mp.max_iter,
            n_path: mp.n_path,
            n_starts: mult.n_starts,
            k_max: mult.k_max,
            restarts: RayleighOptions::default().restarts,
            seed: 0,
            distinct_tol: mult.distinct_tol,
            n_dirs: geo.n_dirs,
            rho_grid: geo.rho_grid,
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn mesh(&self) -> Result<Arc<Mesh>> {
        self.domain.mesh().map(Arc::new)
    }

    /// Builds the problem; θ defaults to the admissible default when absent.
    pub fn problem(&self, mesh: &Arc<Mesh>) -> Result<KirchhoffProblem> {
        let p = self.p.field(mesh)?;
        let q = self.q.field(mesh)?;
        let report = validate_problem_exponents(&p, &q, mesh.dim())?;
        let theta = match self.theta {
            Some(t) => t,
            None => report
                .default_theta()
                .ok_or_else(|| Error::Domain("no admissible theta for these exponents".into()))?,
        };
        let g = NonlinearitySpec::new(self.g.kind(), q, theta, self.s_a)?;
        KirchhoffProblem::new(self.a, self.b, self.lambda, p, g, mesh.clone())
    }

    fn mountain_pass_options(&self) -> MountainPassOptions {
        MountainPassOptions {
            n_path: self.n_path,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {}", self.tol)));
        }
        let mesh = self.domain.mesh()?;
        self.p.field(&mesh)?;
        self.q.field(&mesh)?;
        Ok(())
    }
}

const KEYS: [&str; 22] = [
    "command",
    "domain",
    "p",
    "q",
    "a",
    "b",
    "lambda",
    "theta",
    "s_A",
    "g",
    "u",
    "tol",
    "max_iter",
    "n_path",
    "n_starts",
    "k_max",
    "restarts",
    "seed",
    "distinct_tol",
    "n_dirs",
    "rho_grid",
    "out_dir",
];

/// Parses a flat configuration. Unknown or repeated keys are errors; the
/// exponent descriptors are checked against the domain before returning.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(&str, &str, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        if entries.iter().any(|(k, _, _)| *k == key) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        entries.push((key, value, line));
    }

    let lookup = |key: &str| entries.iter().find(|(k, _, _)| *k == key);
    fn field<T: FromStr>(entry: Option<&(&str, &str, usize)>) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        entry
            .map(|(_, v, line)| {
                v.parse::<T>().map_err(|e| Error::Parse {
                    line: *line,
                    message: e.to_string(),
                })
            })
            .transpose()
    }
    let required = |key: &str| lookup(key).ok_or_else(|| Error::MissingKey(key.into()));

    let a: f64 = field(Some(required("a")?))?.unwrap_or_default();
    let b: f64 = field(Some(required("b")?))?.unwrap_or_default();
    let p: ExponentSpec = field(Some(required("p")?))?.expect("present");
    let q: ExponentSpec = field(Some(required("q")?))?.expect("present");
    let domain: DomainSpec = field(Some(required("domain")?))?.expect("present");
    let command: Command = field(lookup("command"))?.unwrap_or(Command::Validate);

    let mut cfg = RunConfig::with_defaults(command, domain, p, q, a, b);
    macro_rules! optional {
        ($($key:literal => $slot:expr),* $(,)?) => {
            $(if let Some(v) = field(lookup($key))? { $slot = v; })*
        };
    }
    optional! {
        "lambda" => cfg.lambda,
        "s_A" => cfg.s_a,
        "g" => cfg.g,
        "u" => cfg.u,
        "tol" => cfg.tol,
        "max_iter" => cfg.max_iter,
        "n_path" => cfg.n_path,
        "n_starts" => cfg.n_starts,
        "k_max" => cfg.k_max,
        "restarts" => cfg.restarts,
        "seed" => cfg.seed,
        "distinct_tol" => cfg.distinct_tol,
        "n_dirs" => cfg.n_dirs,
        "out_dir" => cfg.out_dir,
    }
    cfg.theta = field(lookup("theta"))?;
    if let Some((_, v, line)) = lookup("rho_grid") {
        cfg.rho_grid = reals(v).map_err(|message| Error::Parse { line: *line, message })?;
    }
    cfg.check()?;
    Ok(cfg)
}

/// Renders a config so that [`parse_config`] reproduces it exactly.
pub fn render(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: &dyn fmt::Display| {
        let _ = writeln!(s, "{k} = {v}");
    };
    put("command", &cfg.command.name());
    put("domain", &cfg.domain);
    put("p", &cfg.p);
    put("q", &cfg.q);
    put("a", &cfg.a);
    put("b", &cfg.b);
    put("lambda", &cfg.lambda);
    if let Some(t) = cfg.theta {
        put("theta", &t);
    }
    put("s_A", &cfg.s_a);
    put("g", &cfg.g);
    put("u", &cfg.u);
    put("tol", &cfg.tol);
    put("max_iter", &cfg.max_iter);
    put("n_path", &cfg.n_path);
    put("n_starts", &cfg.n_starts);
    put("k_max", &cfg.k_max);
    put("restarts", &cfg.restarts);
    put("seed", &cfg.seed);
    put("distinct_tol", &cfg.distinct_tol);
    put("n_dirs", &cfg.n_dirs);
    put("rho_grid", &join(&cfg.rho_grid));
    put("out_dir", &cfg.out_dir.display());
    s
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: String,
    pub files: Vec<PathBuf>,
}

/// Executes the configured command, writing `report.txt` plus dumps and
/// CSV files into `out_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    prepare_out_dir(&cfg.out_dir)?;
    let mesh = cfg.mesh()?;
    let p = cfg.p.field(&mesh)?;
    let q = cfg.q.field(&mesh)?;
    let validation = validate_problem_exponents(&p, &q, mesh.dim())?;

    let mut out = Output::new(&cfg.out_dir);
    out.line("command", cfg.command.name());
    out.line("domain", &cfg.domain);
    write_validation(&mut out, &validation);
    out.line("ps_ceiling", cfg.a * cfg.a / (2.0 * cfg.b));

    match cfg.command {
        Command::Validate => {}
        Command::Norm => run_norm(cfg, &mesh, &p, &mut out)?,
        Command::Rayleigh => {
            let opts = RayleighOptions {
                tol: cfg.tol,
                max_iter: cfg.max_iter,
                restarts: cfg.restarts,
                seed: cfg.seed,
            };
            let r = rayleigh_quotient_min(&p, &mesh, &opts)?;
            out.line("rayleigh_min", r.value);
            out.line("iterations", r.iterations);
            out.file("minimizer.dump", write_dump(&r.minimizer))?;
        }
        Command::Geometry => {
            let prob = cfg.problem(&mesh)?;
            let opts = GeometryOptions {
                rho_grid: cfg.rho_grid.clone(),
                n_dirs: cfg.n_dirs,
                seed: cfg.seed,
            };
            let g = verify_mountain_geometry(&prob, &opts)?;
            out.line("rho", g.rho);
            out.line("alpha", g.alpha);
            out.line("directions_tested", g.directions_tested);
            out.line("negative_energy", g.negative_energy);
            let mut csv = String::from("rho,sampled_min\n");
            for (rho, m) in &g.sampled_minima {
                let _ = writeln!(csv, "{rho:.16e},{m:.16e}");
            }
            out.file("geometry.csv", csv)?;
            out.file("negative_point.dump", write_dump(&g.negative_point))?;
        }
        Command::Solve => {
            let prob = cfg.problem(&mesh)?;
            let e = default_negative_point(&prob)?;
            let report = mountain_pass_solve(&prob, &e, &cfg.mountain_pass_options())?;
            write_solution(&mut out, &report, "")?;
        }
        Command::Multiplicity => {
            let prob = cfg.problem(&mesh)?;
            let opts = MultiplicityOptions {
                n_starts: cfg.n_starts,
                k_max: cfg.k_max,
                distinct_tol: cfg.distinct_tol,
                seed: cfg.seed,
                solve: cfg.mountain_pass_options(),
            };
            let found = multiplicity_outcome(&prob, &opts)?;
            let orbits = found.orbits;
            out.line("orbits", orbits.len());
            out.line("failed_starts", found.failures.len());
            for (i, e) in &found.failures {
                out.line(&format!("start{i}_failed"), format!("{} ({e})", e.class()));
            }
            let mut csv = String::from("orbit,energy,residual,a_value,nonlocal_coefficient\n");
            for (k, r) in orbits.iter().enumerate() {
                let _ = writeln!(
                    csv,
                    "{k},{:.16e},{:.16e},{:.16e},{:.16e}",
                    r.energy, r.residual_norm, r.a_value, r.nonlocal_coefficient
                );
                write_solution(&mut out, r, &format!("orbit{k}_"))?;
            }
            out.file("orbits.csv", csv)?;
        }
    }
    out.finish()
}

fn run_norm(cfg: &RunConfig, mesh: &Arc<Mesh>, p: &ExponentField, out: &mut Output) -> Result<()> {
    let u = cfg.u.grid(mesh)?;
    let centroids = u.centroid_values();
    out.line("modular", modular(&centroids, p, mesh)?);
    out.line("luxemburg_norm", luxemburg_norm(&centroids, p, mesh)?);
    out.line("sobolev_norm", sobolev_norm(&u, p)?);
    let relations = check_modular_norm_relations(&centroids, p, mesh)?;
    out.line("modular_norm_relations_hold", relations.holds());
    if u.has_zero_trace() {
        let prob = cfg.problem(mesh)?;
        let parts = prob.energy_parts(&u)?;
        out.line("kirchhoff_a", parts.a_value);
        out.line("energy", parts.energy(&prob));
    }
    Ok(())
}

/// `e = t·|φ₁|` with the smallest power-of-two `t` giving negative energy.
fn default_negative_point(prob: &KirchhoffProblem) -> Result<GridFunction> {
    let (_, phi) = dirichlet_eigenpairs(prob.mesh(), 1)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Shape("mesh has no interior vertices".into()))?;
    let psi = GridFunction::new(prob.mesh().clone(), phi.iter().map(|x| x.abs()).collect())?;
    find_negative_energy_point(prob, &psi)
}

fn write_validation(out: &mut Output, v: &ValidationReport) {
    out.line("chain_ok", v.chain_ok);
    match v.theta_interval {
        Some(iv) => out.line("theta_interval", iv),
        None => out.line("theta_interval", "empty"),
    }
    for f in &v.failures {
        out.line("failed", format!("{} ({})", f.condition.label(), f.detail));
    }
}

fn write_solution(out: &mut Output, r: &SolveReport, prefix: &str) -> Result<()> {
    let key = |k: &str| format!("{prefix}{k}");
    out.line(&key("energy"), r.energy);
    out.line(&key("residual"), r.residual_norm);
    out.line(&key("kirchhoff_a"), r.a_value);
    out.line(&key("nonlocal_coefficient"), r.nonlocal_coefficient);
    out.line(&key("iterations"), r.iterations);
    out.line(&key("below_ps_ceiling"), r.below_ps_ceiling);
    if !r.below_ps_ceiling {
        out.line(
            "WARNING",
            format!("{prefix}energy is not below a^2/(2b); below_ps_ceiling: false"),
        );
    }
    out.file(&format!("{prefix}solution.dump"), write_dump(&r.solution))?;
    out.file(&format!("{prefix}iterations.csv"), write_iteration_csv(&r.trajectory))
}

struct Output<'a> {
    dir: &'a Path,
    report: String,
    files: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    fn new(dir: &'a Path) -> Self {
        Output {
            dir,
            report: String::new(),
            files: Vec::new(),
        }
    }

    fn line(&mut self, key: &str, value: impl fmt::Display) {
        let _ = writeln!(self.report, "{key}: {value}");
    }

    fn file(&mut self, name: &str, contents: String) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    fn finish(mut self) -> Result<RunOutcome> {
        let report = std::mem::take(&mut self.report);
        self.file("report.txt", report.clone())?;
        Ok(RunOutcome {
            report,
            files: self.files,
        })
    }
}

fn prepare_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;
    Ok(())
}

fn bounding_box(mesh: &Mesh) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in mesh.vertices() {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    (lo, hi)
}

fn real(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse().map_err(|_| format!("bad number `{}`", s.trim()))
}

fn reals(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(real).collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}
