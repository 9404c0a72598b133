//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL` line to stderr, bypassing output capture, and
//! then asserts.

mod mutants;

use std::fmt::Display;
use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wha_core::algebra::TensorLayout;
use wha_core::deform::{
    canonical_element, deform_to_involutive_base, deform_verified, kappa_squared_on_base, multiset_distance,
    sample_admissible, sample_admissible_with, spectrum_invariant, Deformation,
};
use wha_core::instances::{function_algebra_wha, op_tensor_wha, pair_groupoid_wha, FiniteGroupoid};
use wha_core::io::{load, load_document, save, save_with};
use wha_core::separating::{
    check_projection_characterizations, e_injectivity_margin, gauge_formula, gauge_from_separating,
    gauge_normalization_residual, gauge_times_e, gauged_adjoint_residual, is_orthogonal_in_gauged, is_separating,
    multiply, separating_from_gauge, separating_residuals, symmetric_e_value,
};
use wha_core::weak_hopf::{check_axioms, check_f_separating, haar_measure, haar_projection, is_weak_kac};
use wha_core::{AlgElement, BlockAlgebra, Error, WeakHopf, C64};

const TOL: f64 = 1e-8;

fn verdict(n: u32, title: &str, pass: bool, detail: impl Display) {
    let line = format!("criterion {n} ({title}): {} | {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rel(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

fn random_element(alg: &BlockAlgebra, rng: &mut ChaCha8Rng) -> AlgElement {
    let v = nalgebra::DVector::from_fn(alg.dim(), |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    AlgElement::from_coords(alg, &v).unwrap()
}

/// `x − E_Z(x) + 1`, so that `E_Z = 1`.
fn random_gauge(n: &BlockAlgebra, rng: &mut ChaCha8Rng) -> AlgElement {
    let x = random_element(n, rng);
    &(&x - &x.center_expectation()) + &n.one()
}

/// `hh* + 1/2`, rescaled blockwise to `E_Z = 1`.
fn random_positive_gauge(n: &BlockAlgebra, rng: &mut ChaCha8Rng) -> AlgElement {
    let h = random_element(n, rng);
    let g = &(&h * &h.adjoint()) + &n.one().scale_re(0.5);
    let blocks = g
        .blocks()
        .iter()
        .map(|b| {
            let t = b.trace().re / b.nrows() as f64;
            b.map(|z| z / t)
        })
        .collect();
    AlgElement::from_blocks(blocks).unwrap()
}

fn section_one_algebras() -> Vec<BlockAlgebra> {
    [vec![1], vec![1, 1], vec![2], vec![3], vec![2, 1], vec![2, 3]]
        .into_iter()
        .map(|b| BlockAlgebra::new(b, "N").unwrap())
        .collect()
}

fn has_gauge_form(n: &BlockAlgebra, f: &AlgElement) -> bool {
    let g = gauge_formula(n, f);
    rel(gauge_times_e(n, &g).distance(f), f.norm()) <= TOL && gauge_normalization_residual(n, &g) <= TOL
}

#[test]
fn criterion_1_separating_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for n in section_one_algebras() {
        let l = TensorLayout::square(&n);
        let e = symmetric_e_value(&n);
        let label = format!("{:?}", n.blocks());

        let e_ok = check_projection_characterizations(&n, &e, TOL).pass
            && separating_residuals(&n, &e, TOL).pass
            && e_injectivity_margin(&n) > TOL
            && gauged_adjoint_residual(&n, &e, &n.one(), TOL).unwrap() <= TOL;
        checks += 1;
        if !e_ok {
            failures.push(format!("{label}: e characterization"));
        }

        for _ in 0..100 {
            let y = random_element(l.product(), &mut rng);
            let lhs = multiply(&n, &l.opposite_mul(&e, &y));
            let rhs = multiply(&n, &y);
            checks += 1;
            if rel(lhs.distance(&rhs), rhs.norm()) > TOL {
                failures.push(format!("{label}: m(ey) = m(y)"));
            }
        }

        for i in 0..100 {
            let separating = i < 50;
            let f = gauge_times_e(&n, &random_gauge(&n, &mut rng));
            let f = if separating { f } else { &f + &random_element(l.product(), &mut rng).scale_re(1e-3) };
            let verdicts = [
                is_separating(&n, &f, TOL),
                check_projection_characterizations(&n, &f, TOL).pass,
                has_gauge_form(&n, &f),
            ];
            checks += 1;
            if verdicts.iter().any(|&v| v != separating) {
                failures.push(format!("{label}: equivalence verdicts {verdicts:?}, expected {separating}"));
            }
        }

        for _ in 0..20 {
            let g = random_positive_gauge(&n, &mut rng);
            let f = gauge_times_e(&n, &g);
            checks += 1;
            if !is_orthogonal_in_gauged(&n, &f, &g, TOL).unwrap() {
                failures.push(format!("{label}: (1⊗g)e not orthogonal for its own gauge"));
            }
            // Over an abelian algebra the only normalized gauge is 1.
            if !n.is_abelian() {
                let other = gauge_times_e(&n, &random_positive_gauge(&n, &mut rng));
                checks += 1;
                if is_orthogonal_in_gauged(&n, &other, &g, TOL).unwrap() {
                    failures.push(format!("{label}: foreign separating element orthogonal"));
                }
            }
        }
    }
    verdict(1, "separating elements", failures.is_empty(), format!("{checks} checks, failures {failures:?}"));
}

#[test]
fn criterion_2_gauge_fixtures() {
    let mut worst = 0.0f64;
    let mut ok = true;
    let m2 = BlockAlgebra::matrix(2);
    let m3 = BlockAlgebra::matrix(3);
    let m2m3 = BlockAlgebra::new(vec![2, 3], "M2+M3").unwrap();
    let fixtures = [
        (m2, vec![2.0, 0.0]),
        (m3, vec![2.0, 0.5, 0.5]),
        (m2m3.clone(), vec![2.0, 0.0, 1.0, 1.0, 1.0]),
        (m2m3, vec![1.0, 1.0, 2.0, 0.5, 0.5]),
    ];
    for (n, diag) in fixtures {
        let g = AlgElement::from_real_diagonal(&n, &diag).unwrap();
        let f = separating_from_gauge(&n, &g, TOL).unwrap().value;
        let back = gauge_from_separating(&n, &f, TOL).unwrap();
        worst = worst.max(back.distance(&g));
        ok &= is_separating(&n, &f, TOL) && f.distance(&symmetric_e_value(&n)) > 0.1;
    }
    verdict(
        2,
        "gauge fixtures",
        ok && worst <= 1e-10,
        format!("separating and distinct from e: {ok}, round-trip error {worst:.2e}"),
    );
}

fn instances() -> Vec<(String, WeakHopf)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("pair groupoid n={n}"), pair_groupoid_wha(n).unwrap()));
    }
    for spec in ["cyclic:3", "pair:2", "cyclic:2*pair:2"] {
        out.push((
            format!("functions on {spec}"),
            function_algebra_wha(&FiniteGroupoid::parse(spec).unwrap()).unwrap(),
        ));
    }
    for blocks in [vec![1], vec![1, 1], vec![2]] {
        let b = BlockAlgebra::new(blocks.clone(), "B").unwrap();
        out.push((format!("op-tensor {blocks:?}"), op_tensor_wha(&b).unwrap()));
    }
    out
}

#[test]
fn criterion_3_axiom_suite() {
    let mut failures = Vec::new();
    for (name, w) in instances() {
        let r = check_axioms(&w, TOL);
        if !r.pass {
            failures.push(format!("{name} fails {:?}", r.failing()));
        }
    }
    let mut isolated = 0;
    let all = mutants::mutants();
    for m in &all {
        let r = check_axioms(&m.structure, TOL);
        let failing = r.failing();
        let exact = failing == [m.axiom];
        isolated += exact as usize;
        let _ = std::io::stderr().write_all(
            format!(
                "  mutant {:<26} {} failing {:?} ({})\n",
                m.axiom,
                if exact { "exact" } else { "extra" },
                failing,
                m.description
            )
            .as_bytes(),
        );
        if !failing.contains(&m.axiom) {
            failures.push(format!("{} mutant does not fail its own check", m.axiom));
        } else if !exact {
            failures.push(format!("{} mutant also fails {:?}", m.axiom, failing));
        }
    }
    verdict(
        3,
        "axiom suite",
        failures.is_empty(),
        format!(
            "{} instances; {isolated}/{} mutants isolate their axiom; failures {failures:?}",
            instances().len(),
            all.len()
        ),
    );
}

struct Family {
    base: WeakHopf,
    deformed: Vec<Deformation>,
}

/// `op_tensor_wha(M₂)` deformed by the sampled `k` of seeds 0..20.
fn family() -> &'static Family {
    static FAMILY: OnceLock<Family> = OnceLock::new();
    FAMILY.get_or_init(|| {
        let base = op_tensor_wha(&BlockAlgebra::matrix(2)).unwrap();
        let canon = canonical_element(&base, TOL).unwrap();
        let deformed = (0..20)
            .map(|seed| {
                let k = sample_admissible_with(&base, &canon, seed, TOL).unwrap();
                deform_verified(&base, &k, TOL).unwrap()
            })
            .collect();
        Family { base, deformed }
    })
}

#[test]
fn criterion_4_structure_suite() {
    let mut structures = instances();
    for (seed, d) in family().deformed.iter().enumerate() {
        structures.push((format!("deformation seed {seed}"), d.structure.clone()));
        let inv = deform_to_involutive_base(&d.structure, TOL).unwrap().structure;
        structures.push((format!("involutive base of seed {seed}"), inv));
    }
    let mut failures = Vec::new();
    let mut kac = [0usize; 2];
    for (name, w) in &structures {
        match haar_projection(w, TOL) {
            Ok(p) if p.report.pass => {}
            other => failures.push(format!("{name}: Haar projection {:?}", other.err())),
        }
        match haar_measure(w, TOL) {
            Ok(m) if m.report.pass => {}
            other => failures.push(format!("{name}: Haar measure {:?}", other.err())),
        }
        if !check_f_separating(w, TOL).map(|r| r.pass).unwrap_or(false) {
            failures.push(format!("{name}: f not separating"));
        }
        match is_weak_kac(w, TOL) {
            Ok(k) if k.agree() => kac[k.kappa_involutive as usize] += 1,
            other => failures.push(format!("{name}: weak Kac flags {other:?}")),
        }
    }
    verdict(
        4,
        "Haar objects, separating f, weak Kac",
        failures.is_empty(),
        format!("{} structures, weak Kac {} / not {}, failures {failures:?}", structures.len(), kac[1], kac[0]),
    );
}

#[test]
fn criterion_5_canonical_element() {
    let mut failures = Vec::new();
    let mut worst_cross = 0.0f64;
    let mut worst_one = 0.0f64;
    for (name, w) in instances() {
        match canonical_element(&w, TOL) {
            Ok(c) => {
                worst_cross = worst_cross.max(c.cross_check);
                worst_one = worst_one.max(c.q.distance(&w.algebra().one()));
                if !c.report.pass || c.cross_check > TOL {
                    failures.push(format!("{name}: {:?}", c.report.failing()));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let pass = failures.is_empty() && worst_one <= 1e-9;
    verdict(
        5,
        "canonical element",
        pass,
        format!("cross-check {worst_cross:.2e}, |q - 1| {worst_one:.2e}, failures {failures:?}"),
    );
}

#[test]
fn criterion_6_deformation_closure() {
    let f = family();
    let base_canon = canonical_element(&f.base, TOL).unwrap();
    let mut worst = [0.0f64; 3];
    let mut failures = Vec::new();
    for (seed, d) in f.deformed.iter().enumerate() {
        let axioms = check_axioms(&d.structure, TOL);
        if !axioms.pass {
            failures.push(format!("seed {seed}: {:?}", axioms.failing()));
        }
        worst[0] = worst[0].max(axioms.max_residual());
        worst[1] = worst[1]
            .max(d.report.get("cartan_target_angle").unwrap().max(d.report.get("cartan_source_angle").unwrap()));
        worst[2] = worst[2].max(d.report.get("canonical_element").unwrap());
        let k = sample_admissible_with(&f.base, &base_canon, seed as u64, TOL).unwrap();
        let expect = &wha_core::algebra::spectral::invert(&k.k, TOL).unwrap() * &base_canon.q;
        worst[2] = worst[2].max(rel(d.canonical.q.distance(&expect), expect.norm()));
    }
    let pass = failures.is_empty() && worst[1] <= 1e-8 && worst[2] <= 1e-8;
    verdict(
        6,
        "deformation closure",
        pass,
        format!("20 seeds, axiom residual {:.2e}, angle {:.2e}, q - k^-1 q {:.2e}", worst[0], worst[1], worst[2]),
    );
}

fn max_change(a: &WeakHopf, b: &WeakHopf) -> f64 {
    let m = |x: &DMatrix<C64>, y: &DMatrix<C64>| rel((x - y).norm(), x.norm());
    [
        m(a.delta().matrix(), b.delta().matrix()),
        m(a.kappa().matrix(), b.kappa().matrix()),
        m(a.eps().matrix(), b.eps().matrix()),
        rel(a.gauge().distance(b.gauge()), a.gauge().norm()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn criterion_7_involutive_base() {
    let mut worst_square = 0.0f64;
    let mut worst_repeat = 0.0f64;
    for d in &family().deformed {
        let once = deform_to_involutive_base(&d.structure, TOL).unwrap().structure;
        worst_square = worst_square.max(kappa_squared_on_base(&once, TOL).unwrap());
        let twice = deform_to_involutive_base(&once, TOL).unwrap().structure;
        worst_repeat = worst_repeat.max(max_change(&once, &twice));
    }
    let pass = worst_square <= 1e-8 && worst_repeat <= 1e-10;
    verdict(
        7,
        "involutive base",
        pass,
        format!("|k^2 - id| on bases {worst_square:.2e}, second pass change {worst_repeat:.2e}"),
    );
}

#[test]
fn criterion_8_non_isomorphic_family() {
    let spectra: Vec<Vec<f64>> =
        family().deformed.iter().map(|d| spectrum_invariant(&d.structure, TOL).unwrap()).collect();
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for s in &spectra {
        if distinct.iter().all(|t| multiset_distance(s, t) > 1e-6) {
            distinct.push(s);
        }
    }
    let refused = (0..5).all(|seed| {
        matches!(sample_admissible(&pair_groupoid_wha(3).unwrap(), seed, TOL), Err(Error::AbelianBaseOnlyTrivial))
    });
    let pass = distinct.len() >= 10 && refused;
    verdict(
        8,
        "non-isomorphic family",
        pass,
        format!("{} pairwise-distinct spectra of 20, abelian base refused: {refused}", distinct.len()),
    );
}

fn wha(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wha"))
        .args(args)
        .env_remove("WHA_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn criterion_9_cli() {
    let mut failures = Vec::new();
    let generated = wha(&["generate", "op-tensor", "--blocks", "2"], b"");
    let deformed = wha(&["deform", "--sample", "--seed", "7"], &generated.stdout);
    let analysis = wha(&["analyze"], &deformed.stdout);
    let kac = &json(&analysis)["weak_kac"];
    let flags = (kac["kappa_involutive"].as_bool(), kac["phi_tracial"].as_bool());
    if flags != (Some(false), Some(false)) {
        failures.push(format!("pipeline flags {flags:?}"));
    }

    let valid = wha(&["generate", "pair-groupoid", "--n", "2"], b"").stdout;
    let mut broken: serde_json::Value = serde_json::from_slice(&valid).unwrap();
    broken["kappa"]["data"][1] = serde_json::json!([0.3, 0.0]);
    let broken = serde_json::to_vec(&broken).unwrap();
    let other = wha(&["deform", "--sample", "--seed", "8"], &generated.stdout).stdout;
    let dir = std::env::temp_dir().join(format!("wha-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    std::fs::write(&a, &deformed.stdout).unwrap();
    std::fs::write(&b, &other).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let golden: Vec<(&str, Vec<&str>, &[u8], i32)> = vec![
        ("validate valid", vec!["validate"], &valid, 0),
        ("validate broken kappa", vec!["validate"], &broken, 2),
        ("validate garbage", vec!["validate"], b"not json", 1),
        ("validate missing file", vec!["validate", "/nonexistent/wha.json"], b"", 1),
        ("invariant distinct", vec!["invariant", a, b], b"", 3),
        ("invariant same", vec!["invariant", a, a], b"", 0),
        ("deform abelian sample", vec!["deform", "--sample"], &valid, 1),
        ("unknown command", vec!["frobnicate"], b"", 1),
    ];
    for (name, args, input, code) in &golden {
        let out = wha(args, input);
        if out.status.code() != Some(*code) {
            failures.push(format!("{name}: exit {:?}, expected {code}", out.status.code()));
        }
    }
    let failing = json(&wha(&["validate"], &broken))["failing"].clone();
    if !failing.as_array().is_some_and(|f| f.iter().any(|x| x == "kappa_antimultiplicative")) {
        failures.push(format!("broken kappa report names {failing}"));
    }

    let doc = load_document(&deformed.stdout).unwrap();
    let bit_exact = save_with(&doc.to_structure().unwrap(), doc.metadata.clone()) == deformed.stdout;
    let w = family().deformed[3].structure.clone();
    let back = load(&save(&w)).unwrap();
    let bits = |m: &DMatrix<C64>| m.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
    let exact = bits(w.delta().matrix()) == bits(back.delta().matrix())
        && bits(w.kappa().matrix()) == bits(back.kappa().matrix())
        && bits(w.eps().matrix()) == bits(back.eps().matrix())
        && w.gauge().coords() == back.gauge().coords();
    if !(bit_exact && exact) {
        failures.push("round trip not bit-exact".into());
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        9,
        "command line",
        failures.is_empty(),
        format!("pipeline flags {flags:?}, {} exit-code goldens, failures {failures:?}", golden.len()),
    );
}
