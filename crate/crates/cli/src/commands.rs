//! Command implementations. Each returns the effective configuration (echoed
//! in the report) and the command's checks, data and table.

use arstat_core::algebra::{
    ladder_set, verify_heisenberg_with_energies, verify_lie_triple_axioms, verify_triple_relations,
};
use arstat_core::bargmann::{basis_coefficient, verify_realization_equivalence, RealizationKind};
use arstat_core::coherent::{
    coherent_amplitudes, eigenstate_residuals, overlap, overlap_kernel,
    verify_annihilation_eigenstate, CoherentFamily, CoherentPoint, CoherentState, Truncation,
};
use arstat_core::fock::{
    self, bose_limit_constant, bose_limit_deviation, enumerate_basis, is_strictly_decreasing,
    BoseLimitPoint, FockBasis, HamiltonianMode,
};
use arstat_core::measures::{
    gram_entry_r1, integrate_moment, moment_residual, moment_rhs, verify_simplex_identity,
    MeasureFamily, MomentCase, MomentResult,
};
use arstat_core::quadrature::QuadratureSpec;
use arstat_core::{Error, OccupationVector, Sector, SectorParams};
use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::cli::{Cli, Command, FamilyArg, FileConfig, GlobalArgs, KindArg, MeasureArg, SectorArg};
use crate::parse::parse_point;
use crate::report::{num, Cell, Check, Outcome, Table};

pub const DEFAULT_CUTOFF: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BARGMANN_TOL: f64 = 1e-12;
pub const DEFAULT_MOMENT_TOL: f64 = 1e-6;
pub const DEFAULT_SIMPLEX_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 10;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_K_LIST: [u32; 4] = [10, 100, 1000, 10_000];
pub const DEFAULT_PROBE_TOTAL: usize = 4;
pub const DEFAULT_BOSE_BOUND: f64 = 1e-3;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Failure::Check(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn config_err<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Config(msg.into()))
}

/// Merged global options plus the config echo being built.
struct Ctx<'a> {
    g: &'a GlobalArgs,
    file: &'a FileConfig,
    config: Map<String, Value>,
}

/// Parameters resolved for a command.
struct Resolved {
    params: SectorParams,
    /// As requested; may contain zeros, which `SectorParams` rejects.
    energies: Vec<f64>,
}

impl<'a> Ctx<'a> {
    fn sector(&mut self, implied: Option<Sector>) -> Res<Sector> {
        let given = self.g.sector.or(self.file.sector).map(|s| match s {
            SectorArg::Bosonic => Sector::Bosonic,
            SectorArg::Fermionic => Sector::Fermionic,
        });
        let sector = match (given, implied) {
            (Some(g), Some(i)) if g != i => {
                return config_err(format!(
                    "--sector {g} conflicts with the requested {i} object"
                ))
            }
            (Some(s), _) | (None, Some(s)) => s,
            (None, None) => return config_err("--sector is required"),
        };
        self.config
            .insert("sector".into(), Value::String(sector.name().into()));
        Ok(sector)
    }

    fn modes(&mut self) -> Res<usize> {
        let modes = self
            .g
            .modes
            .or(self.file.modes)
            .ok_or(Failure::Config("--modes is required".into()))?;
        self.config.insert("modes".into(), Value::from(modes));
        Ok(modes)
    }

    fn k(&mut self) -> Res<u32> {
        let k = self
            .g
            .k
            .or(self.file.k)
            .ok_or(Failure::Config("--k is required".into()))?;
        self.config.insert("k".into(), Value::from(k));
        Ok(k)
    }

    fn resolve(&mut self, implied: Option<Sector>) -> Res<Resolved> {
        let sector = self.sector(implied)?;
        let modes = self.modes()?;
        let k = self.k()?;
        let energies = self
            .g
            .energies
            .clone()
            .or_else(|| self.file.energies.clone())
            .unwrap_or_else(|| vec![1.0; modes]);
        if energies.len() != modes {
            return config_err(format!(
                "{} energies given for {modes} modes",
                energies.len()
            ));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return config_err("energies must be finite");
        }
        self.config.insert(
            "energies".into(),
            Value::Array(energies.iter().map(|&e| num(e)).collect()),
        );
        let params = if energies.iter().all(|&e| e > 0.0) {
            SectorParams::new(modes, sector, k, energies.clone())?
        } else {
            SectorParams::unit_energies(modes, sector, k)?
        };
        Ok(Resolved { params, energies })
    }

    fn tol(&mut self, default: f64) -> Res<f64> {
        let tol = self.g.tol.or(self.file.tol).unwrap_or(default);
        if !(tol > 0.0 && tol.is_finite()) {
            return config_err(format!("--tol must be positive and finite (got {tol})"));
        }
        self.config.insert("tol".into(), num(tol));
        Ok(tol)
    }

    fn cutoff_raw(&self) -> Option<usize> {
        self.g.cutoff.or(self.file.cutoff)
    }

    fn basis(&mut self, params: &SectorParams) -> Res<FockBasis> {
        let requested = self.cutoff_raw().unwrap_or(DEFAULT_CUTOFF);
        let basis = enumerate_basis(params, requested)?;
        self.config
            .insert("cutoff".into(), Value::from(basis.cutoff()));
        Ok(basis)
    }

    fn insert(&mut self, key: &str, value: Value) {
        self.config.insert(key.into(), value);
    }
}

pub fn execute(cli: &Cli, file: &FileConfig) -> Res<(Map<String, Value>, Outcome)> {
    let mut ctx = Ctx {
        g: &cli.global,
        file,
        config: Map::new(),
    };
    let outcome = match &cli.command {
        Command::Basis => basis_cmd(&mut ctx)?,
        Command::VerifyAlgebra(a) => {
            let samples = a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
            let seed = a.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
            algebra_cmd(&mut ctx, samples, seed)?
        }
        Command::VerifyHeisenberg => heisenberg_cmd(&mut ctx)?,
        Command::Spectrum => spectrum_cmd(&mut ctx)?,
        Command::VerifyBargmann(a) => {
            let kind = a
                .kind
                .or(file.kind)
                .ok_or(Failure::Config("--kind is required".into()))?;
            bargmann_cmd(&mut ctx, kind)?
        }
        Command::Coherent(a) => {
            let family = family_arg(a.family, file)?
                .ok_or(Failure::Config("--family is required".into()))?;
            let point = a.point.clone().or_else(|| file.point.clone());
            let other = a.overlap_with.clone().or_else(|| file.overlap_with.clone());
            coherent_cmd(&mut ctx, family, point, other)?
        }
        Command::VerifyEigenstate(a) => {
            let family = family_arg(a.family, file)?.unwrap_or(FamilyArg::Gk);
            let point = a.point.clone().or_else(|| file.point.clone());
            eigenstate_cmd(&mut ctx, family, point)?
        }
        Command::VerifyMeasure(a) => {
            let family = measure_arg(a.family, file)?
                .ok_or(Failure::Config("--family is required".into()))?;
            let n = a.n.clone().or_else(|| file.n.clone());
            let nodes = a
                .nodes
                .or(file.nodes)
                .unwrap_or(QuadratureSpec::default().nodes);
            let quad_tol = a
                .quad_tol
                .or(file.quad_tol)
                .unwrap_or(QuadratureSpec::default().tolerance);
            measure_cmd(&mut ctx, family, n, nodes, quad_tol)?
        }
        Command::BoseLimit(a) => {
            let ks = a
                .k_list
                .clone()
                .or_else(|| file.k_list.clone())
                .unwrap_or(DEFAULT_K_LIST.to_vec());
            let probe = a
                .probe_total
                .or(file.probe_total)
                .unwrap_or(DEFAULT_PROBE_TOTAL);
            let bound = a.bound.or(file.bound).unwrap_or(DEFAULT_BOSE_BOUND);
            bose_cmd(&mut ctx, ks, probe, bound)?
        }
    };
    Ok((ctx.config, outcome))
}

fn family_arg(flag: Option<FamilyArg>, file: &FileConfig) -> Res<Option<FamilyArg>> {
    match (flag, &file.family) {
        (Some(f), _) => Ok(Some(f)),
        (None, Some(s)) => FamilyArg::from_str(s, false)
            .map(Some)
            .map_err(|_| Failure::Config(format!("unknown coherent family {s:?} in config"))),
        (None, None) => Ok(None),
    }
}

fn measure_arg(flag: Option<MeasureArg>, file: &FileConfig) -> Res<Option<MeasureArg>> {
    match (flag, &file.family) {
        (Some(f), _) => Ok(Some(f)),
        (None, Some(s)) => MeasureArg::from_str(s, false)
            .map(Some)
            .map_err(|_| Failure::Config(format!("unknown measure family {s:?} in config"))),
        (None, None) => Ok(None),
    }
}

fn state_cell(n: &OccupationVector) -> Cell {
    Cell::Text(n.to_string())
}

fn binomial(n: u128, k: u128) -> u128 {
    (1..=k).fold(1, |acc, j| acc * (n + 1 - j) / j)
}

fn basis_cmd(ctx: &mut Ctx) -> Res<Outcome> {
    let r = ctx.resolve(None)?;
    let basis = ctx.basis(&r.params)?;
    let modes = r.params.modes() as u128;
    let expected = binomial(basis.cutoff() as u128 + modes, modes);
    let mut table = Table::new(["index", "state", "total"]);
    for (i, n) in basis.states().iter().enumerate() {
        table.push(vec![i.into(), state_cell(n), n.total().into()]);
    }
    let mut data = Map::new();
    data.insert("size".into(), Value::from(basis.len()));
    data.insert("truncated".into(), Value::Bool(basis.is_truncated()));
    data.insert("order".into(), Value::String("graded lexicographic".into()));
    Ok(Outcome {
        checks: vec![Check::flag(
            format!(
                "basis size equals C({} + {modes}, {modes}) = {expected}",
                basis.cutoff()
            ),
            basis.len() as u128 == expected,
            "all states",
        )],
        data,
        table: Some(table),
    })
}

fn algebra_cmd(ctx: &mut Ctx, samples: usize, seed: u64) -> Res<Outcome> {
    let r = ctx.resolve(None)?;
    let basis = ctx.basis(&r.params)?;
    let tol = ctx.tol(DEFAULT_TOL)?;
    ctx.insert("samples", Value::from(samples));
    ctx.insert("seed", Value::from(seed));
    let triple = verify_triple_relations(&basis, tol)?;
    let (raise, lower) = ladder_set(&basis)?;
    let generators: Vec<_> = raise.into_iter().chain(lower).collect();
    let lie = verify_lie_triple_axioms(&generators, samples, seed, tol)?;
    let mut data = Map::new();
    data.insert("basis_size".into(), Value::from(basis.len()));
    data.insert("mean_residual_triple".into(), num(triple.mean_residual));
    data.insert("mean_residual_lie".into(), num(lie.mean_residual));
    Ok(Outcome {
        checks: vec![(&triple).into(), (&lie).into()],
        data,
        table: None,
    })
}

fn heisenberg_cmd(ctx: &mut Ctx) -> Res<Outcome> {
    let r = ctx.resolve(None)?;
    let basis = ctx.basis(&r.params)?;
    let tol = ctx.tol(DEFAULT_TOL)?;
    let rep = verify_heisenberg_with_energies(&basis, &r.energies, tol)?;
    let mut data = Map::new();
    data.insert("basis_size".into(), Value::from(basis.len()));
    data.insert("mean_residual".into(), num(rep.mean_residual));
    Ok(Outcome {
        checks: vec![(&rep).into()],
        data,
        table: None,
    })
}

fn spectrum_cmd(ctx: &mut Ctx) -> Res<Outcome> {
    let r = ctx.resolve(None)?;
    let basis = ctx.basis(&r.params)?;
    let tol = ctx.tol(DEFAULT_TOL)?;
    let diag =
        fock::hamiltonian_matrix_with_energies(&basis, &r.energies, HamiltonianMode::Diagonal)?;
    let built =
        fock::hamiltonian_matrix_with_energies(&basis, &r.energies, HamiltonianMode::Constructed)?;
    let mask = basis.interior_mask(1);
    let mut table = Table::new(["index", "state", "diagonal", "constructed", "interior"]);
    let mut worst: f64 = 0.0;
    for (i, n) in basis.states().iter().enumerate() {
        let (d, c) = (diag.get(i, i), built.get(i, i));
        if mask[i] {
            worst = worst.max((d - c).abs());
        }
        table.push(vec![
            i.into(),
            state_cell(n),
            d.into(),
            c.into(),
            mask[i].into(),
        ]);
    }
    let off_diagonal = built
        .iter()
        .filter(|&((row, col), _)| row != col && mask[row] && mask[col])
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let mut data = Map::new();
    data.insert("vacuum_offset".into(), num(fock::vacuum_offset(&r.params)));
    Ok(Outcome {
        checks: vec![
            Check::new(
                "diagonal and constructed Hamiltonians agree",
                worst.max(off_diagonal),
                tol,
                basis.mask_description(1),
            ),
            Check::new(
                "vacuum has zero energy",
                built.get(0, 0).abs(),
                tol,
                "vacuum",
            ),
        ],
        data,
        table: Some(table),
    })
}

fn kind_of(kind: KindArg) -> RealizationKind {
    match kind {
        KindArg::One => RealizationKind::BosonicI,
        KindArg::Two => RealizationKind::BosonicII,
        KindArg::Fermionic => RealizationKind::Fermionic,
    }
}

fn bargmann_cmd(ctx: &mut Ctx, kind: KindArg) -> Res<Outcome> {
    let kind = kind_of(kind);
    ctx.insert("kind", Value::String(kind.name().into()));
    let r = ctx.resolve(Some(kind.sector()))?;
    let basis = ctx.basis(&r.params)?;
    let tol = ctx.tol(DEFAULT_BARGMANN_TOL)?;
    let rep = verify_realization_equivalence(kind, &basis, tol)?;
    let mut table = Table::new(["index", "state", "coefficient"]);
    for (i, n) in basis.states().iter().enumerate() {
        table.push(vec![
            i.into(),
            state_cell(n),
            basis_coefficient(kind, &r.params, n)?.into(),
        ]);
    }
    let mut data = Map::new();
    data.insert("variable".into(), Value::String(kind.variable().into()));
    data.insert("domain".into(), Value::String(kind.domain().into()));
    data.insert("mean_residual".into(), num(rep.mean_residual));
    Ok(Outcome {
        checks: vec![(&rep).into()],
        data,
        table: Some(table),
    })
}

fn coherent_family(f: FamilyArg) -> CoherentFamily {
    match f {
        FamilyArg::Gk => CoherentFamily::GazeauKlauder,
        FamilyArg::Kp => CoherentFamily::KlauderPerelomov,
        FamilyArg::Cpr => CoherentFamily::ProjectiveCP,
    }
}

fn complex_json(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

fn point_json(p: &CoherentPoint) -> Value {
    Value::Array(p.coords().iter().map(|&z| complex_json(z)).collect())
}

fn read_point(
    ctx: &mut Ctx,
    family: CoherentFamily,
    text: Option<String>,
    key: &str,
) -> Res<CoherentPoint> {
    let text = text.ok_or(Failure::Config(format!(
        "--{} is required",
        key.replace('_', "-")
    )))?;
    let coords = parse_point(&text).map_err(Failure::Config)?;
    let point = CoherentPoint::new(family, coords)?;
    ctx.insert(key, point_json(&point));
    Ok(point)
}

fn truncation(ctx: &mut Ctx, tail_tol: f64) -> Truncation {
    match ctx.cutoff_raw() {
        Some(c) => {
            ctx.insert("cutoff", Value::from(c));
            Truncation::Fixed(c)
        }
        None => {
            ctx.insert("cutoff", Value::String("auto".into()));
            Truncation::Auto { tail_tol }
        }
    }
}

fn coherent_cmd(
    ctx: &mut Ctx,
    family: FamilyArg,
    point: Option<String>,
    other: Option<String>,
) -> Res<Outcome> {
    let family = coherent_family(family);
    ctx.insert("family", Value::String(family.name().into()));
    let r = ctx.resolve(Some(family.sector()))?;
    let tol = ctx.tol(DEFAULT_TOL)?;
    let a = read_point(ctx, family, point, "point")?;
    let b = match other {
        Some(text) => Some(read_point(ctx, family, Some(text), "overlap_with")?),
        None => None,
    };
    let trunc = truncation(ctx, tol);
    let mut state = coherent_amplitudes(&r.params, &a, trunc)?;
    let partner = match &b {
        Some(b) => {
            let other = coherent_amplitudes(&r.params, b, trunc)?;
            if other.cutoff() != state.cutoff() {
                let common = Truncation::Fixed(other.cutoff().max(state.cutoff()));
                state = coherent_amplitudes(&r.params, &a, common)?;
                Some(coherent_amplitudes(&r.params, b, common)?)
            } else {
                Some(other)
            }
        }
        None => None,
    };
    let mut checks = vec![Check::new(
        "truncated norm within the tail bound",
        ((1.0 - state.raw_norm_sq).abs() - state.tail_estimate).max(0.0),
        tol,
        format!("total occupation <= {}", state.cutoff()),
    )];
    let mut data = Map::new();
    data.insert("cutoff".into(), Value::from(state.cutoff()));
    data.insert("normalization".into(), num(state.normalization));
    data.insert("raw_norm_sq".into(), num(state.raw_norm_sq));
    data.insert("tail_bound".into(), num(state.tail_bound));
    data.insert("tail_estimate".into(), num(state.tail_estimate));
    data.insert("norm_sq".into(), num(state.norm_sq()));
    data.insert("norm_check".into(), num(state.raw_norm_sq));
    if let (Some(b), Some(sb)) = (&b, &partner) {
        let numeric = overlap(&state, sb)?;
        let exact = overlap_kernel(&r.params, &a, b)?;
        let slack = state.tail_estimate + sb.tail_estimate;
        let diff = (numeric - exact).norm();
        data.insert("overlap".into(), complex_json(numeric));
        data.insert("overlap_kernel".into(), complex_json(exact));
        data.insert("overlap_error".into(), num(diff));
        data.insert("overlap_slack".into(), num(slack));
        checks.push(Check::new(
            "overlap matches the closed-form kernel",
            (diff - slack).max(0.0),
            tol,
            "truncated amplitudes, tail bounds subtracted",
        ));
    }
    Ok(Outcome {
        checks,
        data,
        table: Some(amplitude_table(&state)),
    })
}

fn amplitude_table(state: &CoherentState) -> Table {
    let mut table = Table::new(["index", "state", "re", "im", "abs2"]);
    for (i, (n, a)) in state
        .basis
        .states()
        .iter()
        .zip(&state.amplitudes)
        .enumerate()
    {
        table.push(vec![
            i.into(),
            state_cell(n),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
        ]);
    }
    table
}

fn eigenstate_cmd(ctx: &mut Ctx, family: FamilyArg, point: Option<String>) -> Res<Outcome> {
    let family = coherent_family(family);
    ctx.insert("family", Value::String(family.name().into()));
    let r = ctx.resolve(Some(family.sector()))?;
    let tol = ctx.tol(DEFAULT_TOL)?;
    let a = read_point(ctx, family, point, "point")?;
    let trunc = truncation(ctx, tol / 10.0);
    let cutoff = match trunc {
        Truncation::Fixed(c) => Some(c),
        Truncation::Auto { .. } => None,
    };
    let rep = verify_annihilation_eigenstate(&r.params, &a, cutoff, tol)?;
    let state = coherent_amplitudes(&r.params, &a, Truncation::Fixed(rep.cutoff.unwrap_or(0)))?;
    let residuals = eigenstate_residuals(&state)?;
    let mut table = Table::new(["mode", "interior", "boundary"]);
    for (i, res) in residuals.iter().enumerate() {
        table.push(vec![i.into(), res.interior.into(), res.boundary.into()]);
    }
    let mut data = Map::new();
    data.insert("cutoff".into(), Value::from(state.cutoff()));
    data.insert("tail_estimate".into(), num(state.tail_estimate));
    Ok(Outcome {
        checks: vec![(&rep).into()],
        data,
        table: Some(table),
    })
}

fn measure_family(m: MeasureArg) -> Option<MeasureFamily> {
    match m {
        MeasureArg::Bessel => Some(MeasureFamily::BesselI),
        MeasureArg::Ball => Some(MeasureFamily::BallII),
        MeasureArg::Projective => Some(MeasureFamily::ProjectiveF),
        MeasureArg::Simplex => None,
    }
}

fn index_grid(modes: usize, max_each: u32, max_total: usize) -> Vec<OccupationVector> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..modes {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_each).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    let mut grid: Vec<OccupationVector> = out
        .into_iter()
        .map(OccupationVector::new)
        .filter(|n| n.total() <= max_total)
        .collect();
    grid.sort();
    grid
}

/// Standard moment grid of a family at the given parameters.
fn measure_grid(family: Option<MeasureFamily>, params: &SectorParams) -> Vec<OccupationVector> {
    let r = params.modes();
    let k = params.k() as usize;
    match family {
        Some(MeasureFamily::ProjectiveF) => index_grid(r, 3, 3.min(k - 1)),
        Some(MeasureFamily::BallII) => index_grid(r, 3, usize::MAX),
        Some(MeasureFamily::BesselI) => index_grid(r, 2, usize::MAX),
        None => index_grid(r, 3, 3),
    }
}

fn moment_row(
    table: &mut Table,
    n: &OccupationVector,
    res: &Result<MomentResult, Error>,
    tol: f64,
) -> f64 {
    match res {
        Ok(m) => {
            table.push(vec![
                state_cell(n),
                m.lhs.into(),
                m.rhs.into(),
                m.residual.into(),
                m.ratio.into(),
                m.nodes.into(),
                (m.residual <= tol).into(),
                Cell::Text(String::new()),
            ]);
            m.residual
        }
        Err(e) => {
            table.push(vec![
                state_cell(n),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                Cell::Int(0),
                false.into(),
                Cell::Text(e.to_string()),
            ]);
            f64::INFINITY
        }
    }
}

fn measure_cmd(
    ctx: &mut Ctx,
    m: MeasureArg,
    n: Option<Vec<u32>>,
    nodes: usize,
    quad_tol: f64,
) -> Res<Outcome> {
    let family = measure_family(m);
    ctx.insert(
        "family",
        Value::String(family.map_or("simplex", MeasureFamily::name).into()),
    );
    let implied = Some(family.map_or(Sector::Bosonic, MeasureFamily::sector));
    let r = ctx.resolve(implied)?;
    let tol = ctx.tol(if family.is_none() {
        DEFAULT_SIMPLEX_TOL
    } else {
        DEFAULT_MOMENT_TOL
    })?;
    let quad = QuadratureSpec::new(nodes, quad_tol)?;
    ctx.insert("nodes", Value::from(nodes));
    ctx.insert("quad_tol", num(quad_tol));
    let params = &r.params;
    let mut table = Table::new([
        "n", "lhs", "rhs", "residual", "ratio", "nodes", "pass", "error",
    ]);
    let mut checks = Vec::new();
    let mut data = Map::new();
    match n {
        Some(n) => {
            let n = OccupationVector::new(n);
            ctx.insert(
                "n",
                Value::Array(n.as_slice().iter().map(|&x| Value::from(x)).collect()),
            );
            let res = match family {
                None => verify_simplex_identity(params, &n, quad)?,
                Some(f) => {
                    let lhs = match integrate_moment(f, params, &n, quad) {
                        Ok(v) => v,
                        Err(
                            e @ Error::NonConvergence {
                                coarse,
                                fine,
                                tolerance,
                            },
                        ) => {
                            let spread = (coarse - fine).abs() / fine.abs().max(1.0);
                            checks.push(Check::new(
                                "moment quadrature converges",
                                spread,
                                tolerance,
                                "node doubling",
                            ));
                            data.insert("error".into(), Value::String(e.to_string()));
                            return Ok(Outcome {
                                checks,
                                data,
                                table: None,
                            });
                        }
                        Err(e) => return Err(e.into()),
                    };
                    let rhs = moment_rhs(f, params, &n)?;
                    let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
                    MomentResult {
                        lhs,
                        rhs,
                        residual,
                        ratio: lhs / rhs,
                        nodes: quad.doubled().nodes,
                    }
                }
            };
            let residual = moment_row(&mut table, &n, &Ok(res), tol);
            checks.push(Check::new(
                identity_name(family),
                residual,
                tol,
                format!("n = {n}"),
            ));
        }
        None => {
            ctx.insert("n", Value::String("grid".into()));
            let zero = OccupationVector::vacuum(params.modes());
            match family {
                None => verify_simplex_identity(params, &zero, quad).map(drop)?,
                Some(f) => MomentCase::new(f, params.clone(), zero).map(drop)?,
            }
            let grid = measure_grid(family, params);
            let results: Vec<Result<MomentResult, Error>> = grid
                .par_iter()
                .map(|n| match family {
                    None => verify_simplex_identity(params, n, quad),
                    Some(f) => MomentCase::new(f, params.clone(), n.clone())
                        .and_then(|c| moment_residual(&c, quad)),
                })
                .collect();
            let residuals: Vec<f64> = grid
                .iter()
                .zip(&results)
                .map(|(n, res)| moment_row(&mut table, n, res, tol))
                .collect();
            let worst = residuals.iter().cloned().fold(0.0, f64::max);
            let mut check = Check::new(
                identity_name(family),
                worst,
                tol,
                grid_description(family, params),
            );
            check.instances = grid.len();
            checks.push(check);
            if let (Some(f), 1) = (family, params.modes()) {
                let top = if f == MeasureFamily::ProjectiveF {
                    2.min(params.k() - 1)
                } else {
                    2
                };
                let pairs: Vec<(u32, u32)> = (0..=top)
                    .flat_map(|a| (0..=top).map(move |b| (a, b)))
                    .collect();
                let entries: Vec<Result<Complex64, Error>> = pairs
                    .par_iter()
                    .map(|&(a, b)| gram_entry_r1(f, params, a, b, quad))
                    .collect();
                let mut worst: f64 = 0.0;
                for (&(a, b), g) in pairs.iter().zip(entries) {
                    let g = g?;
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((g - Complex64::new(target, 0.0)).norm());
                }
                let mut check = Check::new(
                    "normalized monomials are orthonormal",
                    worst,
                    tol,
                    format!("polar quadrature, n, m <= {top}"),
                );
                check.instances = pairs.len();
                checks.push(check);
            }
        }
    }
    Ok(Outcome {
        checks,
        data,
        table: Some(table),
    })
}

fn identity_name(family: Option<MeasureFamily>) -> String {
    match family {
        None => "simplex Dirichlet integral".into(),
        Some(f) => format!("{} moment equation", f.name()),
    }
}

fn grid_description(family: Option<MeasureFamily>, params: &SectorParams) -> String {
    match family {
        Some(MeasureFamily::ProjectiveF) => {
            format!("all n with total <= {}", 3.min(params.k() - 1))
        }
        Some(MeasureFamily::BallII) => "all n with n_i <= 3".into(),
        Some(MeasureFamily::BesselI) => "all n with n_i <= 2".into(),
        None => "all n with total <= 3".into(),
    }
}

fn bose_cmd(ctx: &mut Ctx, ks: Vec<u32>, probe: usize, bound: f64) -> Res<Outcome> {
    let sector = ctx.sector(None)?;
    let modes = ctx.modes()?;
    if ks.is_empty() {
        return config_err("--k-list must not be empty");
    }
    ctx.insert(
        "k_list",
        Value::Array(ks.iter().map(|&k| Value::from(k)).collect()),
    );
    ctx.insert("probe_total", Value::from(probe));
    ctx.insert("bound", num(bound));
    let points: Vec<BoseLimitPoint> = ks
        .par_iter()
        .map(|&k| bose_limit_deviation(modes, sector, &[k], probe).map(|v| v[0]))
        .collect::<Result<_, _>>()?;
    let constant = bose_limit_constant(&points, probe);
    let mut table = Table::new(["k", "deviation", "scaled"]);
    for p in &points {
        table.push(vec![
            p.k.into(),
            p.deviation.into(),
            (p.deviation * f64::from(p.k) / (probe + 1) as f64).into(),
        ]);
    }
    let last = points.last().expect("non-empty k list");
    let mut data = Map::new();
    data.insert("fitted_constant".into(), num(constant));
    Ok(Outcome {
        checks: vec![
            Check::flag(
                "deviation strictly decreasing in k",
                points.len() < 2 || is_strictly_decreasing(&points),
                format!("states with total <= {probe}"),
            ),
            Check::new(
                format!("deviation at k = {}", last.k),
                last.deviation,
                bound,
                format!("states with total <= {probe}"),
            ),
        ],
        data,
        table: Some(table),
    })
}
