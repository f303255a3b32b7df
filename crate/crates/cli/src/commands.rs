use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context};
use mixperc_core::network::{
    distance_pair, feasibility_check, simulate_network, BondModel, GeneralNetwork, NetworkError,
    Strategy, Witness,
};
use mixperc_core::oracle::{run_verification, ClosedForms, VerifyGrid};
use mixperc_core::percolation::{
    build_lattice, connection_sweep, estimate_threshold, reference_threshold, Boundary,
    LatticeKind, LatticeSpec, PercolationError,
};
use mixperc_core::protocols::{
    purity_requirement, recycle_step, scp_cep_1d, scp_cep_square, scp_direct_1d,
    scp_distillable_subspace, scp_hybrid_1d, scp_pair, scp_recycling, scp_square, PairScpInput,
    ProtocolError, RecycleState, StepProbs,
};
use mixperc_core::qstate::QStateError;
use mixperc_core::sweep::{Cell, SweepError, SweepResult};
use mixperc_core::PmsParams;

use crate::config::{Preset, Settings, Values};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Invalid(anyhow::Error),
    Numeric(anyhow::Error),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(e) => write!(f, "invalid input: {e:#}"),
            Failure::Numeric(e) => write!(f, "numeric error: {e:#}"),
            Failure::Verification(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn is_domain(e: &ProtocolError) -> bool {
    matches!(
        e,
        ProtocolError::Domain(_) | ProtocolError::State(QStateError::ParameterDomain(_))
    )
}

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        if is_domain(&e) {
            Failure::Invalid(e.into())
        } else {
            Failure::Numeric(e.into())
        }
    }
}

impl From<PercolationError> for Failure {
    fn from(e: PercolationError) -> Self {
        match e {
            PercolationError::NotConverged { .. } => Failure::Numeric(e.into()),
            _ => Failure::Invalid(e.into()),
        }
    }
}

impl From<NetworkError> for Failure {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::Protocol(p) => p.into(),
            NetworkError::Percolation(p) => p.into(),
            other => Failure::Invalid(other.into()),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Failure::Invalid(e.into())
    }
}

impl From<QStateError> for Failure {
    fn from(e: QStateError) -> Self {
        ProtocolError::from(e).into()
    }
}

pub struct Outcome {
    pub table: SweepResult,
    pub passed: bool,
}

impl From<SweepResult> for Outcome {
    fn from(table: SweepResult) -> Self {
        Outcome {
            table,
            passed: true,
        }
    }
}

fn values(v: &Option<Values>, default: &str) -> anyhow::Result<Vec<f64>> {
    match v {
        Some(v) => v.expand(),
        None => Values::Text(default.into()).expand(),
    }
}

fn table(command: &str, s: &Settings, columns: &[&str]) -> SweepResult {
    let mut t = SweepResult::new(columns.iter().copied());
    t.meta("command", command)
        .meta("version", env!("CARGO_PKG_VERSION"));
    for (k, v) in s.echo() {
        t.meta(k, v);
    }
    t
}

fn lattice_kind(name: &str) -> Result<LatticeKind, Failure> {
    Ok(name.parse::<LatticeKind>()?)
}

fn lattice_spec(s: &Settings, kind: &str, size: usize) -> Result<LatticeSpec, Failure> {
    let kind = lattice_kind(s.lattice.as_deref().unwrap_or(kind))?;
    let boundary: Boundary = s.boundary.as_deref().unwrap_or("wrap").parse()?;
    Ok(LatticeSpec::new(kind, s.size.unwrap_or(size), boundary))
}

/// Symbols a formula reads, in column order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sym {
    Alpha,
    Gamma,
    Lam,
    Beta,
    Delta,
    Nu,
    N,
}

impl Sym {
    fn column(self) -> &'static str {
        match self {
            Sym::Alpha => "alpha",
            Sym::Gamma => "gamma",
            Sym::Lam => "lambda",
            Sym::Beta => "beta",
            Sym::Delta => "delta",
            Sym::Nu => "nu",
            Sym::N => "n",
        }
    }

    fn flag(self) -> &'static str {
        match self {
            Sym::Lam => "lam",
            other => other.column(),
        }
    }

    fn setting(self, s: &Settings) -> &Option<Values> {
        match self {
            Sym::Alpha => &s.alpha,
            Sym::Gamma => &s.gamma,
            Sym::Lam => &s.lam,
            Sym::Beta => &s.beta,
            Sym::Delta => &s.delta,
            Sym::Nu => &s.nu,
            Sym::N => &s.n,
        }
    }

    /// Default grid, or the symbol whose value is copied when unset.
    fn default(self) -> Source {
        match self {
            Sym::Alpha => Source::Grid(vec![0.5]),
            Sym::Gamma => Source::Grid(vec![0.0]),
            Sym::Lam => Source::Grid(vec![1.0]),
            Sym::N => Source::Grid(vec![2.0]),
            Sym::Beta => Source::Follow(Sym::Alpha),
            Sym::Delta => Source::Follow(Sym::Gamma),
            Sym::Nu => Source::Follow(Sym::Lam),
        }
    }
}

const ALL_SYMS: [Sym; 7] = [Sym::Alpha, Sym::Gamma, Sym::Lam, Sym::Beta, Sym::Delta, Sym::Nu, Sym::N];

#[derive(Clone, Debug)]
enum Source {
    Grid(Vec<f64>),
    Follow(Sym),
}

/// Cartesian product of the symbols' grids, first symbol outermost.
fn grid(syms: &[Sym], s: &Settings, defaults: &[(Sym, &str)]) -> anyhow::Result<Vec<Vec<f64>>> {
    let sources: Vec<Source> = syms
        .iter()
        .map(|&sym| {
            if let Some(v) = sym.setting(s) {
                return v
                    .expand()
                    .with_context(|| format!("--{}", sym.flag()))
                    .map(Source::Grid);
            }
            match defaults.iter().find(|(d, _)| *d == sym) {
                Some((_, text)) => Values::Text(text.to_string()).expand().map(Source::Grid),
                None => Ok(sym.default()),
            }
        })
        .collect::<anyhow::Result<_>>()?;
    let mut rows: Vec<Vec<f64>> = vec![Vec::new()];
    for (k, src) in sources.iter().enumerate() {
        rows = match src {
            Source::Grid(xs) => rows
                .into_iter()
                .flat_map(|r| {
                    xs.iter().map(move |&x| {
                        let mut r = r.clone();
                        r.push(x);
                        r
                    })
                })
                .collect(),
            Source::Follow(target) => {
                let idx = syms[..k]
                    .iter()
                    .position(|t| t == target)
                    .ok_or_else(|| anyhow!("{} needs {}", syms[k].flag(), target.flag()))?;
                rows.into_iter()
                    .map(|mut r| {
                        let x = r[idx];
                        r.push(x);
                        r
                    })
                    .collect()
            }
        };
    }
    Ok(rows)
}

fn reject_unused(syms: &[Sym], s: &Settings, what: &str) -> anyhow::Result<()> {
    for sym in ALL_SYMS {
        if sym.setting(s).is_some() && !syms.contains(&sym) {
            bail!("--{} is not used by {what}", sym.flag());
        }
    }
    Ok(())
}

/// Evaluates `f` over the grid. Rows outside the parameter domain are
/// skipped and counted; any other error aborts.
fn sweep_rows(
    t: &mut SweepResult,
    rows: Vec<Vec<f64>>,
    f: impl Fn(&[f64]) -> Result<Vec<f64>, ProtocolError>,
) -> Result<(), Failure> {
    let mut skipped = 0usize;
    let total = rows.len();
    for r in rows {
        match f(&r) {
            Ok(out) => {
                let cells = r.iter().chain(&out).map(|&x| Cell::Num(x)).collect();
                t.push(cells)?;
            }
            Err(e) if is_domain(&e) => {
                eprintln!("skipping {r:?}: {e}");
                skipped += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if total > 0 && skipped == total {
        return Err(Failure::Invalid(anyhow::anyhow!("every grid point is outside the parameter domain")));
    }
    t.meta("skipped_rows", skipped);
    Ok(())
}

fn count(x: f64) -> usize {
    x as usize
}

fn pms(a: f64, g: f64, l: f64) -> Result<PmsParams, ProtocolError> {
    Ok(PmsParams::new(a, g, l)?)
}

type Formula = fn(&[f64]) -> Result<f64, ProtocolError>;

fn formula(protocol: &str) -> Option<(&'static [Sym], Formula)> {
    use Sym::*;
    const SIDES: &[Sym] = &[Alpha, Lam, Beta, Nu];
    let entry: (&'static [Sym], Formula) = match protocol {
        "pair" => (&[Alpha, Gamma, Lam, Beta, Delta, Nu], |x| {
            scp_pair(&PairScpInput::new(pms(x[0], x[1], x[2])?, pms(x[3], x[4], x[5])?)?)
        }),
        "recycling" => (&[N, Alpha, Lam], |x| scp_recycling(count(x[0]), x[1], x[2])),
        "subspace" => (&[N, Alpha, Lam], |x| scp_distillable_subspace(count(x[0]), x[1], x[2])),
        "cep_1d" => (SIDES, |x| scp_cep_1d(x[0], x[1], x[2], x[3])),
        "hybrid_1d" => (SIDES, |x| scp_hybrid_1d(x[0], x[1], x[2], x[3])),
        "direct_1d" => (SIDES, |x| scp_direct_1d(x[0], x[1], x[2], x[3])),
        "square" => (SIDES, |x| scp_square(x[0], x[1], x[2], x[3])),
        "cep_square" => (SIDES, |x| scp_cep_square(x[0], x[1], x[2], x[3])),
        _ => return None,
    };
    Some(entry)
}

pub fn cmd_scp(s: &Settings) -> Result<Outcome, Failure> {
    if let Some(preset) = s.preset {
        return Ok(run_preset(preset, s)?.into());
    }
    let protocol = s.protocol.as_deref().unwrap_or("pair");
    let (syms, f) = formula(protocol).ok_or_else(|| anyhow!("unknown protocol {protocol:?}"))?;
    reject_unused(syms, s, &format!("protocol {protocol}"))?;
    if let Some(n) = &s.n {
        n.expand_counts().context("--n")?;
    }
    let mut columns: Vec<&str> = syms.iter().map(|s| s.column()).collect();
    columns.push("scp");
    let mut t = table("scp", s, &columns);
    t.meta("protocol", protocol);
    let rows = grid(syms, s, &[])?;
    sweep_rows(&mut t, rows, |x| f(x).map(|p| vec![p]))?;
    Ok(t.into())
}

fn threshold_meta(t: &mut SweepResult) {
    for kind in [LatticeKind::Triangular, LatticeKind::Square, LatticeKind::Honeycomb] {
        t.meta(
            format!("threshold.{kind}"),
            mixperc_core::sweep::format_sig(reference_threshold(kind)),
        );
    }
}

fn run_preset(preset: Preset, s: &Settings) -> Result<SweepResult, Failure> {
    use Sym::*;
    let command = format!("scp --preset {preset}");
    let t = match preset {
        Preset::Fig2a | Preset::Fig2b => {
            reject_unused(&[Alpha, Lam, N], s, &format!("preset {preset}"))?;
            let ns = match &s.n {
                Some(v) => v.expand_counts()?,
                None if preset == Preset::Fig2a => vec![2, 4, 6, 8, 16],
                None => vec![3, 4, 16],
            };
            let prefix = if preset == Preset::Fig2a { "recycling" } else { "subspace" };
            let mut names: Vec<String> = ns.iter().map(|n| format!("{prefix}_n{n}")).collect();
            if preset == Preset::Fig2b {
                names.push("recycling_n4".into());
            }
            let mut columns = vec!["alpha", "lambda"];
            columns.extend(names.iter().map(String::as_str));
            let mut t = table(&command, s, &columns);
            threshold_meta(&mut t);
            let rows = grid(&[Alpha, Lam], s, &[(Lam, "0:1:0.01")])?;
            sweep_rows(&mut t, rows, |x| {
                let (a, l) = (x[0], x[1]);
                let mut out = ns
                    .iter()
                    .map(|&n| match preset {
                        Preset::Fig2a => scp_recycling(n, a, l),
                        _ => scp_distillable_subspace(n, a, l),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if preset == Preset::Fig2b {
                    out.push(scp_recycling(4, a, l)?);
                }
                Ok(out)
            })?;
            t
        }
        Preset::Fig4a => {
            reject_unused(&[Alpha, Lam, Beta, Nu], s, "preset fig4a")?;
            let columns = [
                "alpha", "lambda", "beta", "nu", "p_cep", "p_h", "p_d", "p_cep_square", "p_sq",
            ];
            let mut t = table(&command, s, &columns);
            let rows = grid(
                &[Alpha, Lam, Beta, Nu],
                s,
                &[(Alpha, "0:1:0.01"), (Lam, "0.95"), (Beta, "0.5")],
            )?;
            sweep_rows(&mut t, rows, |x| {
                let (a, l, b, n) = (x[0], x[1], x[2], x[3]);
                Ok(vec![
                    scp_cep_1d(a, l, b, n)?,
                    scp_hybrid_1d(a, l, b, n)?,
                    scp_direct_1d(a, l, b, n)?,
                    scp_cep_square(a, l, b, n)?,
                    scp_square(a, l, b, n)?,
                ])
            })?;
            t
        }
        Preset::Purity => {
            reject_unused(&[Alpha], s, "preset purity")?;
            let columns = ["edges", "lattice", "threshold", "alpha", "lambda_star", "purity"];
            let mut t = table(&command, s, &columns);
            let tri = 2.0 * (PI / 18.0).sin();
            let cases = [
                (2usize, LatticeKind::Triangular),
                (3, LatticeKind::Triangular),
                (3, LatticeKind::Square),
                (3, LatticeKind::Honeycomb),
            ];
            debug_assert_eq!(reference_threshold(LatticeKind::Triangular), tri);
            let mut skipped = 0;
            for alpha in values(&s.alpha, "0.5")? {
                for (edges, kind) in cases {
                    let target = reference_threshold(kind);
                    let req = purity_requirement(alpha, target, |l| {
                        scp_distillable_subspace(edges, alpha, l)
                    });
                    match req {
                        Ok(r) => t.push(vec![
                            edges.into(),
                            kind.name().into(),
                            target.into(),
                            alpha.into(),
                            r.lambda_star.into(),
                            r.purity.into(),
                        ])?,
                        Err(e @ ProtocolError::Unreachable(_)) => {
                            eprintln!("alpha={alpha}, {edges} edges, {kind}: {e}");
                            skipped += 1;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            t.meta("skipped_rows", skipped);
            t
        }
    };
    Ok(t)
}

fn perturbed_forms(fault: Option<&str>) -> anyhow::Result<ClosedForms> {
    let mut forms = ClosedForms::default();
    match fault {
        None => {}
        Some("pair") => forms.pair = |x| scp_pair(x).map(|p| p + 1e-6),
        Some("step") => {
            forms.step = |s: RecycleState| {
                recycle_step(s).map(|(next, p)| {
                    let shifted = StepProbs {
                        c: p.c + 1e-6,
                        ..p
                    };
                    (next, shifted)
                })
            }
        }
        Some("direct") => forms.direct = |a, l, b, n| scp_direct_1d(a, l, b, n).map(|p| p + 1e-6),
        Some("hybrid") => forms.hybrid = |a, l, b, n| scp_hybrid_1d(a, l, b, n).map(|p| p + 1e-6),
        Some(other) => bail!("unknown fault target {other:?}"),
    }
    Ok(forms)
}

pub fn cmd_verify(s: &Settings) -> Result<Outcome, Failure> {
    let d = VerifyGrid::default();
    let pick = |v: &Option<Values>, fallback: &Vec<f64>| -> anyhow::Result<Vec<f64>> {
        v.as_ref().map_or(Ok(fallback.clone()), |v| v.expand())
    };
    let grid = VerifyGrid {
        alphas: pick(&s.alpha, &d.alphas)?,
        lams: pick(&s.lam, &d.lams)?,
        gammas: pick(&s.gamma, &d.gammas)?,
    };
    let forms = perturbed_forms(s.inject_fault.as_deref())?;
    let report = run_verification(&grid, &forms)?;
    eprint!("{report}");
    let mut t = table(
        "verify",
        s,
        &["case", "points", "max_deviation", "tolerance", "passed", "worst_point"],
    );
    for c in &report.cases {
        t.push(vec![
            c.name.as_str().into(),
            c.points.into(),
            c.max_deviation.into(),
            c.tolerance.into(),
            c.passed().into(),
            c.worst_point.as_str().into(),
        ])?;
    }
    t.meta("passed", report.passed());
    Ok(Outcome {
        table: t,
        passed: report.passed(),
    })
}

fn distances(s: &Settings, default: &str) -> anyhow::Result<Vec<usize>> {
    match &s.distances {
        Some(v) => v.expand_counts(),
        None if default.is_empty() => Ok(Vec::new()),
        None => Values::Text(default.into()).expand_counts(),
    }
}

pub fn cmd_percolate(s: &Settings) -> Result<Outcome, Failure> {
    let spec = lattice_spec(s, "square", 64)?;
    let g = build_lattice(spec)?;
    let ds = distances(s, "")?;
    let pairs = ds
        .iter()
        .map(|&d| distance_pair(&g, d).ok_or_else(|| anyhow!("distance {d} does not fit the lattice")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut columns: Vec<String> = [
        "p",
        "crossing",
        "crossing_se",
        "largest_cluster",
        "largest_cluster_se",
    ]
    .map(String::from)
    .to_vec();
    for d in &ds {
        columns.push(format!("connection_d{d}"));
        columns.push(format!("connection_d{d}_se"));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = table("percolate", s, &cols);
    let (trials, seed) = (s.trials.unwrap_or(100), s.seed.unwrap_or(0));
    t.meta("lattice", spec.kind)
        .meta("size", spec.size)
        .meta("boundary", spec.boundary)
        .meta("trials", trials)
        .meta("seed", seed);
    for p in values(&s.p, "0.5")? {
        let sweep = connection_sweep(&g, p, &pairs, trials, seed)?;
        let mut row: Vec<Cell> = vec![
            p.into(),
            sweep.crossing.mean.into(),
            sweep.crossing.std_error.into(),
            sweep.largest_fraction.mean.into(),
            sweep.largest_fraction.std_error.into(),
        ];
        for e in &sweep.pairs {
            row.push(e.mean.into());
            row.push(e.std_error.into());
        }
        t.push(row)?;
    }
    Ok(t.into())
}

pub fn cmd_threshold(s: &Settings) -> Result<Outcome, Failure> {
    let names = s.lattice.as_deref().unwrap_or("triangular");
    let size = s.size.unwrap_or(64);
    let (trials, tol, seed) = (s.trials.unwrap_or(400), s.tol.unwrap_or(0.005), s.seed.unwrap_or(0));
    let mut t = table(
        "threshold",
        s,
        &["lattice", "size", "trials", "p_hat", "lo", "hi", "reference", "crossing_at_estimate"],
    );
    t.meta("boundary", Boundary::Wrap).meta("tol", tol).meta("seed", seed);
    for name in names.split(',') {
        let kind = lattice_kind(name.trim())?;
        let est = estimate_threshold(LatticeSpec::new(kind, size, Boundary::Wrap), trials, tol, seed)?;
        t.push(vec![
            kind.name().into(),
            size.into(),
            trials.into(),
            est.p_hat.into(),
            est.lo.into(),
            est.hi.into(),
            reference_threshold(kind).into(),
            est.crossing_at_estimate.into(),
        ])?;
    }
    Ok(t.into())
}

fn scalar(v: &Option<Values>, name: &str, default: f64) -> anyhow::Result<f64> {
    v.as_ref().map_or(Ok(default), |v| v.scalar(name))
}

pub fn cmd_network(s: &Settings) -> Result<Outcome, Failure> {
    let strat: Strategy = s.strategy.as_deref().unwrap_or("cep_pairwise").parse()?;
    let spec = lattice_spec(s, "triangular", 64)?;
    let alpha = scalar(&s.alpha, "alpha", 0.5)?;
    let gamma = scalar(&s.gamma, "gamma", 0.0)?;
    let lam = scalar(&s.lam, "lam", 1.0)?;
    let first = PmsParams::new(alpha, gamma, lam)?;
    let model = if strat.is_plain() {
        if s.beta.is_some() || s.nu.is_some() || s.delta.is_some() {
            return Err(anyhow!("--beta/--delta/--nu only apply to two-sided strategies").into());
        }
        BondModel::identical(first, strat.arity())?
    } else {
        let second = PmsParams::new(
            scalar(&s.beta, "beta", alpha)?,
            scalar(&s.delta, "delta", gamma)?,
            scalar(&s.nu, "nu", lam)?,
        )?;
        BondModel::new(vec![first, second])?
    };
    let g = build_lattice(spec)?;
    let ds = distances(s, "1,2,4,8")?;
    let pairs = ds
        .iter()
        .map(|&d| distance_pair(&g, d).ok_or_else(|| anyhow!("distance {d} does not fit the lattice")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let seed = s.seed.unwrap_or(0);
    let run = simulate_network(spec, &model, strat, &pairs, s.trials.unwrap_or(200), seed)?;
    let inner = run.to_sweep_result()?;
    let mut columns = vec!["distance"];
    columns.extend(inner.columns.iter().map(String::as_str));
    let mut t = table("network", s, &columns);
    t.meta("strategy", strat).meta("seed", seed);
    for (k, v) in &inner.metadata {
        t.meta(format!("run.{k}"), v);
    }
    for (d, row) in ds.iter().zip(inner.rows) {
        let mut cells = vec![Cell::from(*d)];
        cells.extend(row);
        t.push(cells)?;
    }
    Ok(t.into())
}

pub fn cmd_feasibility(s: &Settings) -> Result<Outcome, Failure> {
    let path = s
        .network
        .as_ref()
        .ok_or_else(|| anyhow!("--network <file> is required"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let net = GeneralNetwork::from_toml(&text)?;
    let (a, b) = match (&s.from, &s.to, net.terminals()) {
        (Some(a), Some(b), _) => (a.clone(), b.clone()),
        (None, None, Some((a, b))) => (a.to_string(), b.to_string()),
        _ => return Err(anyhow!("give both --from and --to, or terminals in the file").into()),
    };
    let f = feasibility_check(&net, &a, &b)?;
    let mut t = table("feasibility", s, &["witness", "edges", "nodes"]);
    t.meta("from", &a)
        .meta("to", &b)
        .meta("feasible", f.feasible)
        .meta("flow", f.flow);
    let edge_list = |edges: &[usize]| {
        edges
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    match &f.witness {
        Witness::Paths(paths) => {
            let start = net.node_index(&a).expect("checked terminal");
            for (k, path) in paths.iter().enumerate() {
                let mut at = start;
                let mut walk = vec![net.node_name(at).to_string()];
                for &e in path {
                    at = net.edges()[e].other(at);
                    walk.push(net.node_name(at).to_string());
                }
                t.push(vec![
                    format!("path{}", k + 1).into(),
                    edge_list(path).into(),
                    walk.join("-").into(),
                ])?;
            }
        }
        Witness::Cut(cut) => {
            let ends: Vec<String> = cut
                .iter()
                .map(|&e| {
                    let edge = net.edges()[e];
                    format!("{}-{}", net.node_name(edge.u), net.node_name(edge.v))
                })
                .collect();
            t.push(vec!["cut".into(), edge_list(cut).into(), ends.join(" ").into()])?;
        }
    }
    Ok(t.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(f: impl FnOnce(&mut Settings)) -> Settings {
        let mut s = Settings::default();
        f(&mut s);
        s
    }

    #[test]
    fn followers_copy_their_leader() {
        let s = settings(|s| s.alpha = Some(Values::Text("0.2,0.4".into())));
        let rows = grid(&[Sym::Alpha, Sym::Lam, Sym::Beta, Sym::Nu], &s, &[]).unwrap();
        assert_eq!(rows, vec![vec![0.2, 1.0, 0.2, 1.0], vec![0.4, 1.0, 0.4, 1.0]]);
    }

    #[test]
    fn domain_violations_are_skipped() {
        let s = settings(|s| {
            s.alpha = Some(Values::Text("0.5,0.95".into()));
            s.gamma = Some(Values::Num(0.1));
        });
        let out = cmd_scp(&s).unwrap().table;
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.metadata_value("skipped_rows"), Some("1"));
    }

    #[test]
    fn unused_flags_rejected() {
        let s = settings(|s| {
            s.protocol = Some("recycling".into());
            s.gamma = Some(Values::Num(0.1));
        });
        assert_eq!(cmd_scp(&s).err().unwrap().exit_code(), 2);
    }

    #[test]
    fn subspace_three_edges_is_three_quarters_lambda_squared() {
        let s = settings(|s| {
            s.protocol = Some("subspace".into());
            s.n = Some(Values::Num(3.0));
            s.lam = Some(Values::Text("0:1:0.01".into()));
        });
        let t = cmd_scp(&s).unwrap().table;
        let lam = t.column("lambda").unwrap();
        let p = t.column("scp").unwrap();
        assert_eq!(lam.len(), 101);
        for (l, p) in lam.iter().zip(p) {
            assert!((p - 0.75 * l * l).abs() < 1e-12);
        }
    }

    #[test]
    fn fig2a_is_nondecreasing_in_n() {
        let t = run_preset(Preset::Fig2a, &Settings::default()).unwrap();
        let cols: Vec<Vec<f64>> = [2, 4, 6, 8, 16]
            .iter()
            .map(|n| t.column(&format!("recycling_n{n}")).unwrap())
            .collect();
        for w in cols.windows(2) {
            for (lo, hi) in w[0].iter().zip(&w[1]) {
                assert!(hi + 1e-12 >= *lo);
            }
        }
    }

    #[test]
    fn fig4a_has_five_probability_columns() {
        let t = run_preset(Preset::Fig4a, &Settings::default()).unwrap();
        assert_eq!(t.columns.len(), 9);
        assert_eq!(t.rows.len(), 101);
    }

    #[test]
    fn verify_fault_injection_names_the_case() {
        let s = settings(|s| s.inject_fault = Some("direct".into()));
        let out = cmd_verify(&s).unwrap();
        assert!(!out.passed);
        let t = out.table;
        let k = t.column_index("passed").unwrap();
        let failed: Vec<&Cell> = t.rows.iter().filter(|r| r[k] == Cell::Bool(false)).map(|r| &r[0]).collect();
        assert_eq!(failed, vec![&Cell::Text("direct_swap_vs_formula".into())]);
    }

    #[test]
    fn network_bond_probability() {
        let s = settings(|s| {
            s.lam = Some(Values::Num(0.84));
            s.size = Some(16);
            s.trials = Some(20);
            s.distances = Some(Values::Text("1,4".into()));
        });
        let t = cmd_network(&s).unwrap().table;
        let p = t.column("p_bond").unwrap()[0];
        assert!((p - 0.3528).abs() < 1e-12);
        assert_eq!(t.column("supercritical").unwrap(), vec![1.0, 1.0]);
    }
}
