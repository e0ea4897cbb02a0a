//! The five batch jobs behind the command-line front end.
//!
//! Every job turns a [`JobSpec`] into a [`Report`]. Independent pieces of
//! work (one lattice, one sampled Jacobi triple, ...) run as separate tasks on
//! a bounded worker pool and are merged back in a fixed order, and every
//! random choice comes from a [`Sampler`] derived from the job seed, so the
//! report depends only on the spec.

use std::fmt::Display;

use latvoa_core::axioms::{
    check_component_jacobi, check_creation_property, check_grading_axioms,
    check_l_minus_one_derivative, check_vacuum_property, check_virasoro, index_box, CheckReport,
    VirasoroAction,
};
use latvoa_core::characters::{character_convolution_check, character_series, graded_dimension};
use latvoa_core::graded::{CellWindow, GradedModule};
use latvoa_core::module::{
    build_coset_module, classify_irreducibles_tensor_at_depth, decompose_completely_at_depth,
    LatticeModule,
};
use latvoa_core::scalar::frac_int;
use latvoa_core::tensor::{
    check_slot_commutation, expand_tensor_mode, TensorAlgebra, TensorKey, TensorModule,
};
use latvoa_core::{
    EvenLattice, FockMonomial, Frac, ModeEngine, Sector, StateVector, TruncationWindow, Q,
};

use crate::io::{InputError, NamedLattice, SectorSpec};
use crate::report::{CheckEntry, LatticeEntry, Report, Table};
use crate::sampling::{run_ordered, worker_count, Sampler};

/// Sampled `(u, v, w)` triples per lattice in `check-axioms`.
pub const JACOBI_TRIPLES: usize = 6;
/// Weight bound for Jacobi triples and Virasoro bases.
pub const AXIOM_WEIGHT: i64 = 3;
/// Jacobi indices `(p, m, n)` range over this interval cubed.
pub const JACOBI_INDEX: (i64, i64) = (-3, 3);
/// Sampled instances of the tensor mode expansion in `tensor-check`.
pub const EXPANSION_INSTANCES: usize = 50;
/// Worker pool bound.
pub const MAX_WORKERS: usize = 8;
/// Weight bound for ModeEngine truncation windows; products of window
/// vectors stay far below it.
const ENGINE_WEIGHT: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckAxioms,
    Characters,
    Classify,
    Decompose,
    TensorCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckAxioms => "check-axioms",
            Command::Characters => "characters",
            Command::Classify => "classify",
            Command::Decompose => "decompose",
            Command::TensorCheck => "tensor-check",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub lattices: Vec<NamedLattice>,
    pub max_weight: Frac,
    pub sectors: SectorSpec,
    pub seed: u64,
    pub depth: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
}

/// Checks, tables and computation errors produced by one task.
#[derive(Default)]
struct Partial {
    checks: Vec<CheckEntry>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Partial {
    fn check(&mut self, scope: &str, report: &CheckReport) {
        self.checks.push(CheckEntry::from_report(scope, report));
    }

    /// Records a computation that could not be completed as a failed check.
    fn error(&mut self, scope: &str, what: &str, err: impl Display) {
        self.checks.push(CheckEntry::single(
            format!("{scope}/{what}"),
            false,
            what,
            &format!("error: {err}"),
            "completed computation",
        ));
    }

    fn row(&mut self, table: usize, row: Vec<String>) {
        self.rows.push((table, row));
    }
}

type Task<'a> = Box<dyn FnOnce() -> Partial + Send + 'a>;

fn merge(report: &mut Report, parts: Vec<Partial>) {
    for p in parts {
        report.checks.extend(p.checks);
        for (t, row) in p.rows {
            report.tables[t].push(row);
        }
    }
}

pub fn run_job(spec: &JobSpec) -> Result<Report, JobError> {
    if spec.max_weight <= Frac::from_integer(0) {
        return Err(InputError::argument(
            "max weight",
            spec.max_weight.to_string(),
            "must be positive",
        )
        .into());
    }
    if spec.lattices.is_empty() {
        return Err(JobError::Usage("at least one --lattice is required".into()));
    }
    if spec.depth == 0 {
        return Err(InputError::argument("depth", "0", "must be at least 1").into());
    }
    let mut report = Report {
        command: spec.command.name().to_string(),
        seed: spec.seed.to_string(),
        max_weight: spec.max_weight.to_string(),
        sectors: spec.sectors.to_string(),
        depth: spec.depth.to_string(),
        lattices: spec
            .lattices
            .iter()
            .map(|l| LatticeEntry {
                name: l.name.clone(),
                gram: l.lattice.gram().to_vec(),
            })
            .collect(),
        passed: false,
        checks: Vec::new(),
        tables: Vec::new(),
    };
    match spec.command {
        Command::CheckAxioms => check_axioms_job(spec, &mut report)?,
        Command::Characters => characters_job(spec, &mut report)?,
        Command::Classify => classify_job(spec, &mut report)?,
        Command::Decompose => decompose_job(spec, &mut report)?,
        Command::TensorCheck => tensor_check_job(spec, &mut report)?,
    }
    report.finish();
    Ok(report)
}

fn radius_of(spec: &JobSpec) -> Result<i64, JobError> {
    match spec.sectors {
        SectorSpec::Radius(r) => Ok(r),
        SectorSpec::List(_) => Err(JobError::Usage(format!(
            "{} needs a sector box `radius:R`",
            spec.command.name()
        ))),
    }
}

/// Window of a single-lattice module under `spec`.
fn module_window(
    module: &LatticeModule,
    max_weight: Frac,
    sectors: &SectorSpec,
) -> Result<CellWindow<Sector>, InputError> {
    Ok(match sectors.sectors(module.lattice().rank())? {
        Some(list) => CellWindow::new(max_weight, list),
        None => {
            let SectorSpec::Radius(r) = sectors else {
                unreachable!("list specs are resolved above")
            };
            module.window(max_weight, *r)
        }
    })
}

/// All basis monomials of the window, by (weight, sector).
pub fn window_basis(module: &LatticeModule, window: &CellWindow<Sector>) -> Vec<FockMonomial> {
    module
        .window_cells(window)
        .into_iter()
        .flat_map(|c| module.cell_basis(&c.sector, c.weight))
        .collect()
}

/// Component Jacobi identity on `count` seeded triples from `basis`, all
/// indices of [`JACOBI_INDEX`] cubed; one report per triple.
pub fn jacobi_tasks<'a>(
    lattice: &'a EvenLattice,
    basis: &'a [FockMonomial],
    count: usize,
    sampler: &mut Sampler,
) -> Vec<Box<dyn FnOnce() -> Result<CheckReport, String> + Send + 'a>> {
    let triples: Vec<(usize, usize, usize)> = (0..count)
        .map(|_| {
            (
                sampler.below(basis.len()),
                sampler.below(basis.len()),
                sampler.below(basis.len()),
            )
        })
        .collect();
    let indices = index_box(JACOBI_INDEX.0, JACOBI_INDEX.1);
    triples
        .into_iter()
        .map(|(a, b, c)| {
            let indices = indices.clone();
            Box::new(move || {
                let mut engine = ModeEngine::new(lattice, TruncationWindow::up_to(ENGINE_WEIGHT));
                check_component_jacobi(&mut engine, &basis[a], &basis[b], &basis[c], &indices)
                    .map_err(|e| e.to_string())
            }) as Box<dyn FnOnce() -> Result<CheckReport, String> + Send + 'a>
        })
        .collect()
}

/// Virasoro relations for all `(m, n)` in `-2..=2` on `basis`, with the
/// central charge read off `[L(2), L(-2)]`.
pub fn virasoro_suite<C: VirasoroAction>(
    ctx: &mut C,
    basis: &[C::Key],
) -> Result<(CheckReport, Option<Q>), String> {
    let mut report = CheckReport::new("virasoro");
    let mut charge = None;
    for m in -2..=2 {
        for n in -2..=2 {
            let (r, c) = check_virasoro(ctx, m, n, basis).map_err(|e| e.to_string())?;
            report.merge(r);
            if (m, n) == (2, -2) {
                charge = c;
            }
        }
    }
    Ok((report, charge))
}

fn fmt_q(q: &Option<Q>) -> String {
    q.as_ref()
        .map_or_else(|| "undetermined".to_string(), |c| c.to_string())
}

fn check_axioms_job(spec: &JobSpec, report: &mut Report) -> Result<(), JobError> {
    report.tables.push(Table::new(
        "central-charges",
        &["algebra", "central_charge", "rank"],
    ));
    report.tables.push(Table::new(
        "lower-bounds",
        &["module", "sector", "min_weight"],
    ));
    let axiom_weight = spec.max_weight.min(frac_int(AXIOM_WEIGHT));
    let mut prepared = Vec::new();
    for (i, nl) in spec.lattices.iter().enumerate() {
        let algebra = LatticeModule::algebra(&nl.lattice);
        let window = module_window(&algebra, spec.max_weight, &spec.sectors)?;
        let small = CellWindow::new(axiom_weight, window.sectors.clone());
        let basis = window_basis(&algebra, &small);
        let cosets: Vec<LatticeModule> = nl
            .lattice
            .discriminant_group()
            .iter()
            .map(|c| {
                build_coset_module(&nl.lattice, &c.rep).expect("canonical reps lie in the dual")
            })
            .collect();
        prepared.push((i, nl, window, basis, cosets));
    }
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for (i, nl, window, basis, cosets) in &prepared {
        let scope = nl.name.clone();
        let (nl, window, basis, cosets) = (*nl, window, basis, cosets);
        tasks.push(Box::new(move || {
            algebra_axioms(&scope, &nl.lattice, window, basis, cosets, spec)
        }));
        let mut sampler = Sampler::new(spec.seed, *i as u64);
        if basis.is_empty() {
            continue;
        }
        for (k, job) in jacobi_tasks(&nl.lattice, basis, JACOBI_TRIPLES, &mut sampler)
            .into_iter()
            .enumerate()
        {
            let scope = format!("{}/triple-{}", nl.name, k + 1);
            tasks.push(Box::new(move || {
                let mut p = Partial::default();
                match job() {
                    Ok(r) => p.check(&scope, &r),
                    Err(e) => p.error(&scope, "component-jacobi", e),
                }
                p
            }));
        }
    }
    if spec.lattices.len() >= 2 {
        tasks.push(Box::new(move || tensor_central_charge(spec)));
    }
    let parts = run_ordered(tasks, worker_count(MAX_WORKERS));
    merge(report, parts);
    Ok(())
}

fn algebra_axioms(
    scope: &str,
    lattice: &EvenLattice,
    window: &CellWindow<Sector>,
    basis: &[FockMonomial],
    cosets: &[LatticeModule],
    spec: &JobSpec,
) -> Partial {
    let mut p = Partial::default();
    let mut engine = ModeEngine::new(lattice, TruncationWindow::up_to(ENGINE_WEIGHT));
    let vac_basis: Vec<FockMonomial> = basis
        .iter()
        .filter(|m| m.sector.is_zero())
        .cloned()
        .collect();
    match virasoro_suite(&mut engine, &vac_basis) {
        Ok((r, c)) => {
            p.check(scope, &r);
            let rank = Q::from_integer(lattice.rank().into());
            p.checks.push(CheckEntry::single(
                format!("{scope}/central-charge"),
                c.as_ref() == Some(&rank),
                "c from [L(2),L(-2)] on the vacuum sector",
                &fmt_q(&c),
                &rank.to_string(),
            ));
            p.row(
                0,
                vec![scope.to_string(), fmt_q(&c), lattice.rank().to_string()],
            );
        }
        Err(e) => p.error(scope, "virasoro", e),
    }
    let mut sampler = Sampler::new(spec.seed, 1 << 32);
    let sources: Vec<FockMonomial> = sampler
        .distinct(basis.len(), 4)
        .into_iter()
        .map(|i| basis[i].clone())
        .collect();
    let mut derivative = CheckReport::new("l-minus-one-derivative");
    let outcome: Result<(), _> = sources.iter().try_for_each(|v| {
        let sv = StateVector::basis(v.clone());
        (-2..=1).try_for_each(|m| {
            check_l_minus_one_derivative(&mut engine, &sv, m, basis).map(|r| derivative.merge(r))
        })
    });
    match outcome {
        Ok(()) => p.check(scope, &derivative),
        Err(e) => p.error(scope, "l-minus-one-derivative", e),
    }
    match check_vacuum_property(&mut engine, basis, -3..=3) {
        Ok(r) => p.check(scope, &r),
        Err(e) => p.error(scope, "vacuum-property", e),
    }
    match check_creation_property(&mut engine, basis) {
        Ok(r) => p.check(scope, &r),
        Err(e) => p.error(scope, "creation-property", e),
    }
    let algebra = LatticeModule::algebra(lattice);
    grading(&mut p, &format!("{scope}/algebra"), &algebra, window);
    for m in cosets
        .iter()
        .filter(|m| !m.coset().is_some_and(|c| c.rep.is_zero()))
    {
        let coset = m.coset().expect("coset module").rep.clone();
        let label = format!("{scope}/coset({coset})");
        match module_window(m, spec.max_weight, &spec.sectors) {
            Ok(w) => grading(&mut p, &label, m, &w),
            Err(e) => p.error(&label, "window", e),
        }
    }
    p
}

fn grading(p: &mut Partial, label: &str, module: &LatticeModule, window: &CellWindow<Sector>) {
    let sample = module.default_sample(window);
    match check_grading_axioms(module, window, &sample) {
        Ok(g) => {
            p.check(label, &g.report);
            for (s, w) in g.lower_bounds {
                p.row(1, vec![label.to_string(), s.to_string(), w.to_string()]);
            }
        }
        Err(e) => p.error(label, "grading-axioms", e),
    }
}

/// Central charge of the tensor product of all lattices against the sum of
/// the factor charges.
fn tensor_central_charge(spec: &JobSpec) -> Partial {
    let mut p = Partial::default();
    let names: Vec<&str> = spec.lattices.iter().map(|l| l.name.as_str()).collect();
    let scope = names.join("⊗");
    let algebra = TensorAlgebra::new(spec.lattices.iter().map(|l| l.lattice.clone()).collect());
    let module = algebra.as_module();
    let vac = algebra.vacuum();
    let vac_sector: Vec<Sector> = vac.iter().map(|m| m.sector.clone()).collect();
    let window = CellWindow::new(spec.max_weight.min(frac_int(2)), vec![vac_sector]);
    let basis: Vec<TensorKey> = module
        .window_cells(&window)
        .into_iter()
        .flat_map(|c| module.cell_basis(&c.sector, c.weight))
        .collect();
    let mut engine = algebra.engine(frac_int(ENGINE_WEIGHT));
    match virasoro_suite(&mut engine, &basis) {
        Ok((r, c)) => {
            p.check(&scope, &r);
            let expected: usize = spec.lattices.iter().map(|l| l.lattice.rank()).sum();
            let expected = Q::from_integer(expected.into());
            p.checks.push(CheckEntry::single(
                format!("{scope}/central-charge-additivity"),
                c.as_ref() == Some(&expected),
                "c of the tensor product against the sum of factor charges",
                &fmt_q(&c),
                &expected.to_string(),
            ));
            p.row(0, vec![scope.clone(), fmt_q(&c), expected.to_string()]);
        }
        Err(e) => p.error(&scope, "virasoro", e),
    }
    p
}

fn characters_job(spec: &JobSpec, report: &mut Report) -> Result<(), JobError> {
    report.tables.push(Table::new(
        "characters",
        &["lattice", "coset", "sector", "weight", "dim"],
    ));
    report
        .tables
        .push(Table::new("totals", &["lattice", "coset", "weight", "dim"]));
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for nl in &spec.lattices {
        for c in nl.lattice.discriminant_group() {
            let module =
                build_coset_module(&nl.lattice, &c.rep).expect("canonical reps lie in the dual");
            let window = module_window(&module, spec.max_weight, &spec.sectors)?;
            tasks.push(Box::new(move || {
                let mut p = Partial::default();
                let scope = format!("{}/coset({})", nl.name, c.rep);
                let series = character_series(&module, &window);
                let mut oracle = CheckReport::new("character-vs-partition-oracle");
                for ((s, w), d) in &series.entries {
                    oracle.compare(
                        || format!("sector ({s}) weight {w}"),
                        d,
                        &graded_dimension(&nl.lattice, s, *w),
                    );
                    p.row(
                        0,
                        vec![
                            nl.name.clone(),
                            c.rep.to_string(),
                            s.to_string(),
                            w.to_string(),
                            d.to_string(),
                        ],
                    );
                }
                p.check(&scope, &oracle);
                for (w, d) in series.totals_by_weight() {
                    p.row(
                        1,
                        vec![
                            nl.name.clone(),
                            c.rep.to_string(),
                            w.to_string(),
                            d.to_string(),
                        ],
                    );
                }
                p
            }));
        }
    }
    if let (SectorSpec::Radius(r), [a, b, ..]) = (&spec.sectors, spec.lattices.as_slice()) {
        let r = *r;
        tasks.push(Box::new(move || {
            let mut p = Partial::default();
            let report = character_convolution_check(
                &LatticeModule::algebra(&a.lattice),
                &LatticeModule::algebra(&b.lattice),
                spec.max_weight,
                r,
            );
            p.check(&format!("{}⊗{}", a.name, b.name), &report);
            p
        }));
    }
    let parts = run_ordered(tasks, worker_count(MAX_WORKERS));
    merge(report, parts);
    Ok(())
}

fn classify_job(spec: &JobSpec, report: &mut Report) -> Result<(), JobError> {
    let radius = radius_of(spec)?;
    let [a, b] = spec.lattices.as_slice() else {
        return Err(JobError::Usage(
            "classify needs exactly two --lattice files".into(),
        ));
    };
    let mut table = Table::new(
        "classes",
        &[
            "coset_1",
            "coset_2",
            "sum_coset",
            "min_weight",
            "irreducible",
            "cells",
            "dim",
        ],
    );
    let scope = format!("{}⊗{}", a.name, b.name);
    match classify_irreducibles_tensor_at_depth(
        &a.lattice,
        &b.lattice,
        spec.max_weight,
        radius,
        spec.depth,
    ) {
        Ok(c) => {
            let mut irr = CheckReport::new("irreducible-at-window");
            for class in &c.classes {
                irr.compare(
                    || format!("({}) ⊗ ({})", class.cosets.0.rep, class.cosets.1.rep),
                    &class.irreducible,
                    &true,
                );
                let dim: u64 = class.fingerprint.entries.values().sum();
                table.push(vec![
                    class.cosets.0.rep.to_string(),
                    class.cosets.1.rep.to_string(),
                    class.sum_coset.to_string(),
                    class.min_weight.to_string(),
                    class.irreducible.to_string(),
                    class.fingerprint.entries.len().to_string(),
                    dim.to_string(),
                ]);
            }
            report.checks.push(CheckEntry::from_report(&scope, &irr));
            report.checks.push(CheckEntry::single(
                format!("{scope}/classes-biject-with-discriminant-group"),
                c.bijective,
                "coset pairs against cosets of the orthogonal sum",
                &c.classes.len().to_string(),
                &a.lattice
                    .orthogonal_sum(&b.lattice)
                    .discriminant_group()
                    .len()
                    .to_string(),
            ));
            let same: Vec<String> = c
                .indistinguishable
                .iter()
                .map(|(i, j)| format!("{}~{}", i + 1, j + 1))
                .collect();
            report.checks.push(CheckEntry::single(
                format!("{scope}/fingerprints-distinct"),
                same.is_empty(),
                "character fingerprints of distinct classes",
                &same.join(" "),
                "",
            ));
        }
        Err(e) => {
            let mut p = Partial::default();
            p.error(&scope, "classify", e);
            report.checks.extend(p.checks);
        }
    }
    report.tables.push(table);
    Ok(())
}

fn decompose_job(spec: &JobSpec, report: &mut Report) -> Result<(), JobError> {
    let radius = radius_of(spec)?;
    report.tables.push(Table::new(
        "summands",
        &["lattice", "coset", "min_weight", "irreducible"],
    ));
    let tasks: Vec<Task<'_>> = spec
        .lattices
        .iter()
        .map(|nl| {
            Box::new(move || {
                let mut p = Partial::default();
                let scope = format!("{}/dual", nl.name);
                let dual = LatticeModule::dual_module(&nl.lattice);
                match decompose_completely_at_depth(&dual, spec.max_weight, radius, spec.depth) {
                    Ok(d) => {
                        p.check(&scope, &d.reconciliation);
                        let expected = nl.lattice.discriminant_group().len();
                        p.checks.push(CheckEntry::single(
                            format!("{scope}/summand-count"),
                            d.summands.len() == expected,
                            "irreducible summands against the discriminant group order",
                            &d.summands.len().to_string(),
                            &expected.to_string(),
                        ));
                        for s in &d.summands {
                            let rep = s.module.coset().expect("coset module").rep.clone();
                            p.row(
                                0,
                                vec![
                                    nl.name.clone(),
                                    rep.to_string(),
                                    s.min_weight.to_string(),
                                    s.irreducible.to_string(),
                                ],
                            );
                        }
                    }
                    Err(e) => p.error(&scope, "decompose", e),
                }
                p
            }) as Task<'_>
        })
        .collect();
    let parts = run_ordered(tasks, worker_count(MAX_WORKERS));
    merge(report, parts);
    Ok(())
}

/// One sampled instance of the tensor mode expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionInstance {
    pub head: Vec<FockMonomial>,
    pub last: FockMonomial,
    pub mode: i64,
    pub target: TensorKey,
}

/// Seeded expansion instances: factor monomials of weight at most 2 from the
/// sector box of `radius`, modes in `-3..=2`.
pub fn sample_expansions(
    lattices: &[EvenLattice],
    radius: i64,
    count: usize,
    sampler: &mut Sampler,
) -> Vec<ExpansionInstance> {
    let bases: Vec<Vec<FockMonomial>> = lattices
        .iter()
        .map(|l| {
            let m = LatticeModule::algebra(l);
            window_basis(&m, &m.window(frac_int(2), radius))
        })
        .collect();
    (0..count)
        .map(|_| {
            let mut v: Vec<FockMonomial> = bases.iter().map(|b| sampler.pick(b).clone()).collect();
            let last = v.pop().expect("at least two factors");
            let target = bases.iter().map(|b| sampler.pick(b).clone()).collect();
            ExpansionInstance {
                head: v,
                last,
                mode: sampler.range(-3, 2),
                target,
            }
        })
        .collect()
}

fn tensor_check_job(spec: &JobSpec, report: &mut Report) -> Result<(), JobError> {
    let radius = radius_of(spec)?;
    if spec.lattices.len() < 2 {
        return Err(JobError::Usage(
            "tensor-check needs at least two --lattice files".into(),
        ));
    }
    report.tables.push(Table::new(
        "central-charges",
        &["algebra", "central_charge", "rank"],
    ));
    let lattices: Vec<EvenLattice> = spec.lattices.iter().map(|l| l.lattice.clone()).collect();
    let scope = spec
        .lattices
        .iter()
        .map(|l| l.name.as_str())
        .collect::<Vec<_>>()
        .join("⊗");
    let mut sampler = Sampler::new(spec.seed, 0);
    let instances = sample_expansions(&lattices, radius, EXPANSION_INSTANCES, &mut sampler);
    let mut tasks: Vec<Task<'_>> = Vec::new();
    {
        let (lattices, scope) = (lattices.clone(), scope.clone());
        tasks.push(Box::new(move || {
            let mut p = Partial::default();
            let algebra = TensorAlgebra::new(lattices);
            let mut engine = algebra.engine(frac_int(ENGINE_WEIGHT));
            let mut all = CheckReport::new("tensor-mode-expansion");
            for inst in &instances {
                match expand_tensor_mode(
                    &mut engine,
                    &inst.head,
                    &inst.last,
                    inst.mode,
                    &inst.target,
                ) {
                    Ok(r) => all.merge(r),
                    Err(e) => {
                        p.error(&scope, "tensor-mode-expansion", e);
                        return p;
                    }
                }
            }
            p.check(&scope, &all);
            let vac = algebra.vacuum();
            let slot_sources: Vec<FockMonomial> =
                instances.iter().map(|i| i.last.clone()).take(4).collect();
            let targets: Vec<TensorKey> =
                instances.iter().map(|i| i.target.clone()).take(8).collect();
            let mut slots = CheckReport::new("slot-commutation");
            for (k, u) in slot_sources.iter().enumerate() {
                let a = &instances[k].head[0];
                let last = vac.len() - 1;
                match check_slot_commutation(
                    &mut engine,
                    (0, a, instances[k].mode),
                    (last, u, -1 - k as i64),
                    &targets,
                ) {
                    Ok(r) => slots.merge(r),
                    Err(e) => {
                        p.error(&scope, "slot-commutation", e);
                        return p;
                    }
                }
            }
            p.check(&scope, &slots);
            p
        }));
    }
    tasks.push(Box::new(move || tensor_central_charge(spec)));
    if let [a, b] = spec.lattices.as_slice() {
        tasks.push(Box::new(move || {
            let mut p = Partial::default();
            let r = character_convolution_check(
                &LatticeModule::algebra(&a.lattice),
                &LatticeModule::algebra(&b.lattice),
                spec.max_weight,
                radius,
            );
            p.check(&format!("{}⊗{}", a.name, b.name), &r);
            let grading = TensorModule::new(vec![
                LatticeModule::algebra(&a.lattice),
                LatticeModule::algebra(&b.lattice),
            ]);
            let window = grading.window(spec.max_weight.min(frac_int(AXIOM_WEIGHT)), radius);
            let sample = grading.default_sample(&window);
            match check_grading_axioms(&grading, &window, &sample) {
                Ok(g) => p.check(&format!("{}⊗{}", a.name, b.name), &g.report),
                Err(e) => p.error(&format!("{}⊗{}", a.name, b.name), "grading-axioms", e),
            }
            p
        }));
    }
    let parts = run_ordered(tasks, worker_count(MAX_WORKERS));
    merge(report, parts);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, gram: Vec<Vec<i64>>) -> NamedLattice {
        NamedLattice {
            name: name.into(),
            lattice: EvenLattice::new(gram).unwrap(),
        }
    }

    fn spec(command: Command, lattices: Vec<NamedLattice>) -> JobSpec {
        JobSpec {
            command,
            lattices,
            max_weight: frac_int(2),
            sectors: SectorSpec::Radius(1),
            seed: 3,
            depth: 64,
        }
    }

    #[test]
    fn characters_for_a1() {
        let r = run_job(&spec(Command::Characters, vec![named("a1", vec![vec![2]])])).unwrap();
        assert!(r.passed, "{r:?}");
        let totals: Vec<&Vec<String>> = r.tables[1]
            .rows
            .iter()
            .filter(|row| row[1] == "0")
            .collect();
        let dims: Vec<&str> = totals.iter().map(|row| row[3].as_str()).collect();
        assert_eq!(dims, ["1", "3", "4"]);
    }

    #[test]
    fn decompose_a1_dual() {
        let r = run_job(&spec(Command::Decompose, vec![named("a1", vec![vec![2]])])).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.tables[0].rows.len(), 2);
    }

    #[test]
    fn usage_errors() {
        let s = spec(Command::Classify, vec![named("a1", vec![vec![2]])]);
        assert!(matches!(run_job(&s), Err(JobError::Usage(_))));
        let mut s = spec(Command::Decompose, vec![named("a1", vec![vec![2]])]);
        s.sectors = SectorSpec::List(vec![vec![frac_int(0)]]);
        assert!(matches!(run_job(&s), Err(JobError::Usage(_))));
        s.max_weight = frac_int(0);
        assert!(matches!(run_job(&s), Err(JobError::Input(_))));
    }
}
