//! The ten acceptance criteria, each checked exactly.
//!
//! Every criterion prints one `PASS`/`FAIL` line; the test fails at the end
//! if any criterion failed.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use latvoa::jobs::{jacobi_tasks, sample_expansions, virasoro_suite, window_basis};
use latvoa::sampling::Sampler;
use latvoa_core::axioms::{check_grading_axioms, CheckReport};
use latvoa_core::characters::character_series;
use latvoa_core::graded::{CellWindow, GradedModule};
use latvoa_core::module::{
    build_coset_module, classify_irreducibles_tensor, commutant_dimension, decompose_completely,
    default_sample, irreducibility_check, Classification, CommutantMode, LatticeModule,
};
use latvoa_core::scalar::frac_int;
use latvoa_core::tensor::{expand_tensor_mode, TensorAlgebra, TensorKey, TensorModule};
use latvoa_core::{EvenLattice, Frac, ModeEngine, Sector, TruncationWindow, Q};

const SEED: u64 = 20240607;

fn a1() -> EvenLattice {
    EvenLattice::new(vec![vec![2]]).unwrap()
}

fn l4() -> EvenLattice {
    EvenLattice::new(vec![vec![4]]).unwrap()
}

fn hyp() -> EvenLattice {
    EvenLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
}

fn a2() -> EvenLattice {
    EvenLattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
}

fn half() -> Sector {
    Sector(vec![Frac::new(1, 2)])
}

/// Reason a criterion failed; anything printable converts into it.
#[derive(Debug)]
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<String, Fail>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report_ok(r: &CheckReport) -> Result<(), String> {
    ensure(r.passed(), || {
        format!(
            "{}: {} of {} instances failed, first {:?}",
            r.name,
            r.failures.len(),
            r.instances_checked,
            r.failures.first()
        )
    })
}

/// Coefficients of `Π_{k≥1} (1-q^k)^{-r}` by the divisor-sum recurrence
/// `n a_n = r Σ_{k=1}^{n} σ(k) a_{n-k}`, independent of the library's
/// partition tables.
fn oracle_series(rank: usize, n_max: usize) -> Vec<u64> {
    let sigma: Vec<u128> = (0..=n_max)
        .map(|k| (1..=k).filter(|d| k % d == 0).map(|d| d as u128).sum())
        .collect();
    let mut a: Vec<u128> = vec![1];
    for n in 1..=n_max {
        let s: u128 = (1..=n).map(|k| sigma[k] * a[n - k]).sum::<u128>() * rank as u128;
        assert_eq!(s % n as u128, 0);
        a.push(s / n as u128);
    }
    a.into_iter().map(|x| x as u64).collect()
}

/// Dimension of the `(sector, weight)` cell from the norm of the sector,
/// with sector coordinates taken in the lattice basis.
fn oracle_dim(l: &EvenLattice, sector: &Sector, weight: Frac, table: &[u64]) -> u64 {
    let g = l.gram();
    let r = l.rank();
    let mut norm = Frac::from_integer(0);
    for i in 0..r {
        for j in 0..r {
            norm += sector.0[i] * sector.0[j] * Frac::from_integer(g[i][j]);
        }
    }
    let off = weight - norm / Frac::from_integer(2);
    if !off.is_integer() || off < Frac::from_integer(0) {
        return 0;
    }
    table
        .get(off.to_integer() as usize)
        .copied()
        .unwrap_or(u64::MAX)
}

fn criterion_1() -> Outcome {
    let mut instances = 0u64;
    let mut triples = 0usize;
    let runs: [(EvenLattice, Vec<Sector>, usize); 2] = [
        (a1(), a1().sectors_in_box(&Sector::zero(1), 1), 10),
        (
            hyp(),
            [[0, 0], [1, 0], [0, 1], [1, 1]]
                .iter()
                .map(|c| Sector::from_ints(c))
                .collect(),
            5,
        ),
    ];
    for (k, (l, sectors, count)) in runs.iter().enumerate() {
        let v = LatticeModule::algebra(l);
        let basis = window_basis(&v, &CellWindow::new(frac_int(3), sectors.clone()));
        let mut sampler = Sampler::new(SEED, k as u64);
        for job in jacobi_tasks(l, &basis, *count, &mut sampler) {
            let r = job()?;
            report_ok(&r)?;
            instances += r.instances_checked;
            triples += 1;
        }
    }
    ensure(instances == triples as u64 * 343, || {
        "index box incomplete".into()
    })?;
    Ok(format!(
        "{triples} seeded triples of weight <= 3, {instances} component identities over (p,m,n) in {{-3..3}}^3"
    ))
}

fn criterion_2() -> Outcome {
    let mut found = Vec::new();
    for (name, l) in [("[[2]]", a1()), ("II11", hyp())] {
        let mut e = ModeEngine::new(&l, TruncationWindow::up_to(64));
        let basis: Vec<_> = (0..=3)
            .flat_map(|w| latvoa_core::fock::basis_of(&l, &Sector::zero(l.rank()), frac_int(w)))
            .collect();
        let (r, c) = virasoro_suite(&mut e, &basis)?;
        report_ok(&r)?;
        let expected = Q::from_integer((l.rank() as i64).into());
        ensure(c.as_ref() == Some(&expected), || {
            format!("{name}: c = {c:?}")
        })?;
        found.push(format!("{name}: c = {}", c.unwrap()));
    }
    for (name, factors, rank) in [
        ("[[2]]⊗[[2]]", vec![a1(), a1()], 2),
        ("[[2]]⊗II11", vec![a1(), hyp()], 3),
    ] {
        let alg = TensorAlgebra::new(factors);
        let module = alg.as_module();
        let vac_sector: Vec<Sector> = alg.vacuum().iter().map(|m| m.sector.clone()).collect();
        let window = CellWindow::new(frac_int(2), vec![vac_sector]);
        let basis: Vec<TensorKey> = module
            .window_cells(&window)
            .into_iter()
            .flat_map(|c| module.cell_basis(&c.sector, c.weight))
            .collect();
        let mut e = alg.engine(frac_int(64));
        let (r, c) = virasoro_suite(&mut e, &basis)?;
        report_ok(&r)?;
        let expected = Q::from_integer(rank.into());
        ensure(c.as_ref() == Some(&expected), || {
            format!("{name}: c = {c:?}")
        })?;
        found.push(format!("{name}: c = {}", c.unwrap()));
    }
    Ok(found.join(", "))
}

fn criterion_3() -> Outcome {
    let mut cells = 0usize;
    for l in [a1(), l4(), hyp(), a2()] {
        let table = oracle_series(l.rank(), 40);
        for coset in l.discriminant_group() {
            let m = build_coset_module(&l, &coset.rep)?;
            let window = CellWindow::new(frac_int(12), l.sectors_in_box(&coset.rep, 3));
            let series = character_series(&m, &window);
            for s in &window.sectors {
                let mut w = m.min_weight(s);
                while w <= frac_int(12) {
                    let got = series.dim(s, w);
                    let want = oracle_dim(&l, s, w, &table);
                    ensure(got == want, || {
                        format!("{l:?} sector {s:?} weight {w}: {got} vs {want}")
                    })?;
                    cells += 1;
                    w += frac_int(1);
                }
            }
        }
    }
    let v = LatticeModule::algebra(&a1());
    let totals = character_series(&v, &v.window(frac_int(2), 3)).totals_by_weight();
    let spot: Vec<u64> = totals.values().copied().collect();
    ensure(spot == [1, 3, 4], || format!("[[2]] totals {spot:?}"))?;
    Ok(format!(
        "{cells} cells of ranks 1 and 2 match the oracle; [[2]] totals 1, 3, 4"
    ))
}

fn criterion_4() -> Outcome {
    let alg = TensorAlgebra::new(vec![a1(), a1()]);
    let mut e = alg.engine(frac_int(64));
    let mut sampler = Sampler::new(SEED, 4);
    let instances = sample_expansions(&[a1(), a1()], 1, 50, &mut sampler);
    let mut nonzero = 0;
    let mut all = CheckReport::new("tensor-mode-expansion");
    for inst in &instances {
        let r = expand_tensor_mode(&mut e, &inst.head, &inst.last, inst.mode, &inst.target)
            .map_err(|e| e.to_string())?;
        let mut v = inst.head.clone();
        v.push(inst.last.clone());
        if !e
            .mode(&v, inst.mode, &inst.target)
            .map_err(|e| e.to_string())?
            .is_zero()
        {
            nonzero += 1;
        }
        all.merge(r);
    }
    report_ok(&all)?;
    ensure(instances.len() == 50 && all.instances_checked >= 50, || {
        "expected 50 instances".into()
    })?;
    Ok(format!(
        "{} instances in [[2]]⊗[[2]] ({nonzero} with nonzero action)",
        all.instances_checked
    ))
}

struct Shared {
    hyp_hyp: Option<Classification>,
}

fn criterion_5(shared: &mut Shared) -> Outcome {
    let mut found = Vec::new();
    for (name, x, y, expected) in [
        ("[[2]]x[[2]]", a1(), a1(), 4),
        ("[[2]]xII11", a1(), hyp(), 2),
        ("II11xII11", hyp(), hyp(), 1),
    ] {
        let c = classify_irreducibles_tensor(&x, &y, frac_int(4), 1)?;
        ensure(c.classes.len() == expected, || {
            format!("{name}: {} classes", c.classes.len())
        })?;
        ensure(c.all_irreducible(), || {
            format!("{name}: a class is not irreducible")
        })?;
        ensure(c.bijective, || format!("{name}: classes do not biject"))?;
        found.push(format!("{name}: {}", c.classes.len()));
        if name == "II11xII11" {
            shared.hyp_hyp = Some(c);
        }
    }
    Ok(format!(
        "{} classes, all irreducible at weight <= 4",
        found.join(", ")
    ))
}

fn criterion_6(shared: &Shared) -> Outcome {
    let cosets = hyp().discriminant_group();
    ensure(cosets.len() == 1, || format!("{} cosets", cosets.len()))?;
    let only = build_coset_module(&hyp(), &cosets[0].rep)?;
    ensure(only == LatticeModule::algebra(&hyp()), || {
        "the coset module is not V itself".into()
    })?;
    let classes = match &shared.hyp_hyp {
        Some(c) => c.classes.len(),
        None => classify_irreducibles_tensor(&hyp(), &hyp(), frac_int(4), 1)?
            .classes
            .len(),
    };
    ensure(classes == 1, || format!("{classes} classes"))?;
    let tensor = TensorModule::new(vec![only.clone(), only]);
    let window = tensor.window(frac_int(3), 1);
    let verdict = irreducibility_check(&tensor, &default_sample(&tensor, &window), &window)?;
    ensure(verdict.verdict.is_irreducible(), || {
        "V⊗V not irreducible".into()
    })?;
    Ok("II11 has 1 coset module; II11⊗II11 has 1 irreducible class, the algebra itself".into())
}

fn criterion_7() -> Outcome {
    let l = a1();
    let v = LatticeModule::algebra(&l);
    let w = build_coset_module(&l, &half())?;
    let h = LatticeModule::algebra(&hyp());
    let sum = v.direct_sum(&w)?;
    let mut found = Vec::new();
    for (name, m, expected) in [
        ("V_[[2]]", &v, 1),
        ("V_[[2]]+b/2", &w, 1),
        ("V_II11", &h, 1),
        ("V_[[2]] + V_[[2]]+b/2", &sum, 2),
    ] {
        let window = m.window(frac_int(4), 1);
        let d = commutant_dimension(
            m,
            &default_sample(m, &window),
            &window,
            CommutantMode::Graded,
        )?;
        ensure(d == expected, || format!("{name}: commutant dimension {d}"))?;
        found.push(format!("{name}: {d}"));
    }
    Ok(found.join(", "))
}

fn criterion_8() -> Outcome {
    let mut found = Vec::new();
    for (name, l, expected) in [("[[2]]", a1(), 2), ("[[4]]", l4(), 4)] {
        let d = decompose_completely(&LatticeModule::dual_module(&l), frac_int(4), 1)?;
        ensure(d.summands.len() == expected, || {
            format!("{name}: {} summands", d.summands.len())
        })?;
        ensure(d.summands.iter().all(|s| s.irreducible), || {
            format!("{name}: reducible summand")
        })?;
        report_ok(&d.reconciliation)?;
        ensure(d.reconciliation.instances_checked > 0, || {
            "nothing reconciled".into()
        })?;
        let mins: Vec<String> = d
            .summands
            .iter()
            .map(|s| s.min_weight.to_string())
            .collect();
        found.push(format!(
            "{name}: {} summands (min weights {})",
            d.summands.len(),
            mins.join(", ")
        ));
    }
    Ok(found.join("; "))
}

fn criterion_9() -> Outcome {
    let mut modules: Vec<(String, LatticeModule)> = Vec::new();
    for (name, l) in [
        ("[[2]]", a1()),
        ("[[4]]", l4()),
        ("II11", hyp()),
        ("A2", a2()),
    ] {
        for c in l.discriminant_group() {
            modules.push((
                format!("{name}+({})", c.rep),
                build_coset_module(&l, &c.rep)?,
            ));
        }
        modules.push((format!("{name} dual"), LatticeModule::dual_module(&l)));
    }
    modules.push((
        "[[2]] + [[2]]+b/2".into(),
        LatticeModule::algebra(&a1()).direct_sum(&build_coset_module(&a1(), &half())?)?,
    ));
    let mut checked = 0u64;
    for (name, m) in &modules {
        let window = m.window(frac_int(4), 1);
        let g = check_grading_axioms(m, &window, &m.default_sample(&window))
            .map_err(|e| e.to_string())?;
        report_ok(&g.report).map_err(|e| format!("{name}: {e}"))?;
        checked += g.report.instances_checked;
    }
    let tensors = [
        TensorModule::new(vec![
            LatticeModule::algebra(&a1()),
            build_coset_module(&a1(), &half())?,
        ]),
        TensorModule::new(vec![
            LatticeModule::algebra(&a1()),
            LatticeModule::algebra(&hyp()),
        ]),
        TensorModule::new(vec![
            LatticeModule::algebra(&hyp()),
            LatticeModule::algebra(&hyp()),
        ]),
    ];
    for t in &tensors {
        let window = t.window(frac_int(3), 1);
        let g = check_grading_axioms(t, &window, &t.default_sample(&window))
            .map_err(|e| e.to_string())?;
        report_ok(&g.report)?;
        checked += g.report.instances_checked;
    }
    let h = LatticeModule::algebra(&hyp());
    let window = CellWindow::new(
        frac_int(4),
        vec![Sector::from_ints(&[1, 1]), Sector::from_ints(&[1, -1])],
    );
    let g =
        check_grading_axioms(&h, &window, &h.default_sample(&window)).map_err(|e| e.to_string())?;
    report_ok(&g.report)?;
    let bounds: BTreeMap<Sector, Frac> = g.lower_bounds.into_iter().collect();
    ensure(bounds[&Sector::from_ints(&[1, 1])] == frac_int(1), || {
        format!("{bounds:?}")
    })?;
    ensure(bounds[&Sector::from_ints(&[1, -1])] == frac_int(-1), || {
        format!("{bounds:?}")
    })?;
    Ok(format!(
        "{} modules and 3 tensor modules, {checked} instances; II11 (1,1) -> 1, (1,-1) -> -1",
        modules.len()
    ))
}

fn lattice_file(dir: &Path, name: &str, gram: &str) -> PathBuf {
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, format!("{{\"name\": \"{name}\", \"gram\": {gram}}}\n")).unwrap();
    p
}

/// Runs the CLI suite into `out`, returning exit codes by report name.
fn cli_suite(lattices: &Path, out: &Path) -> Vec<(String, i32)> {
    let a1 = lattices.join("a1.json");
    let l4 = lattices.join("l4.json");
    let hyp = lattices.join("ii11.json");
    let runs: Vec<(&str, &str, Vec<&Path>, &str)> = vec![
        ("check-axioms", "check-axioms.json", vec![&a1], "json"),
        ("check-axioms", "check-axioms.txt", vec![&a1], "text"),
        ("characters", "characters.json", vec![&a1, &hyp], "json"),
        ("characters", "characters.csv", vec![&a1, &hyp], "csv"),
        ("classify", "classify.json", vec![&a1, &a1], "json"),
        ("decompose", "decompose.json", vec![&a1, &l4], "json"),
        ("decompose", "decompose.csv", vec![&a1, &l4], "csv"),
        ("tensor-check", "tensor-check.json", vec![&a1, &a1], "json"),
    ];
    let mut codes = Vec::new();
    for (cmd, file, lats, format) in runs {
        let mut c = Command::new(env!("CARGO_BIN_EXE_latvoa"));
        c.arg(cmd);
        for l in lats {
            c.arg("--lattice").arg(l);
        }
        c.args([
            "--max-weight",
            "3",
            "--sectors",
            "radius:1",
            "--format",
            format,
        ]);
        c.args(["--seed", &SEED.to_string(), "--out"])
            .arg(out.join(file));
        let status = c.status().expect("binary runs");
        codes.push((file.to_string(), status.code().unwrap_or(-1)));
    }
    codes
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir()?;
    let dir = tmp.path();
    let lattices = dir.join("lattices");
    std::fs::create_dir_all(&lattices).unwrap();
    lattice_file(&lattices, "a1", "[[2]]");
    lattice_file(&lattices, "l4", "[[4]]");
    lattice_file(&lattices, "ii11", "[[0, 1], [1, 0]]");
    let (first, second) = (dir.join("run1"), dir.join("run2"));
    std::fs::create_dir_all(&first).unwrap();
    std::fs::create_dir_all(&second).unwrap();
    let c1 = cli_suite(&lattices, &first);
    let c2 = cli_suite(&lattices, &second);
    ensure(c1 == c2, || format!("exit codes differ: {c1:?} vs {c2:?}"))?;
    ensure(c1.iter().all(|(_, c)| *c == 0), || {
        format!("nonzero exit: {c1:?}")
    })?;
    let mut bytes = 0;
    for (file, _) in &c1 {
        let a = std::fs::read(first.join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(second.join(file)).map_err(|e| e.to_string())?;
        ensure(!a.is_empty() && a == b, || {
            format!("{file} differs between runs")
        })?;
        bytes += a.len();
    }
    Ok(format!(
        "{} reports ({bytes} bytes) identical across two runs",
        c1.len()
    ))
}

fn run(n: usize, title: &str, budget: Option<u32>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(Fail(
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()),
        ))
    });
    let secs = t.elapsed().as_secs_f64();
    let timing = match budget {
        Some(b) => format!("{secs:.1} s of a {b} s budget"),
        None => format!("{secs:.1} s"),
    };
    let line = match &outcome {
        Ok(detail) => format!("PASS criterion {n:>2} {title}: {detail} [{timing}]\n"),
        Err(Fail(why)) => format!("FAIL criterion {n:>2} {title}: {why} [{timing}]\n"),
    };
    // bypasses libtest output capture
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    outcome.is_ok()
}

#[test]
fn acceptance_criteria() {
    let mut shared = Shared { hyp_hyp: None };
    let results = [
        run(1, "component Jacobi identity", Some(60), criterion_1),
        run(2, "central charges", Some(30), criterion_2),
        run(
            3,
            "characters against the partition oracle",
            Some(30),
            criterion_3,
        ),
        run(4, "tensor mode expansion", Some(60), criterion_4),
        run(5, "classification of tensor modules", Some(120), || {
            criterion_5(&mut shared)
        }),
        run(6, "self-dual lattices", Some(30), || criterion_6(&shared)),
        run(7, "commutant dimensions", Some(60), criterion_7),
        run(8, "complete reducibility", Some(60), criterion_8),
        run(9, "grading axioms", Some(30), criterion_9),
        run(10, "determinism of the CLI suite", None, criterion_10),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
