//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always print:
//! `cargo test -p sicfield-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use sicfield::exact::{rat, Matrix, Rational};
use sicfield::field::{c, BASE_DEGREE, DEGREE};
use sicfield::galois::{
    action_table, compare_tables, fixed_subfield_check, realizing_elements, reference_action_table, GroupType,
};
use sicfield::search::WeylPhases;
use sicfield::sic::{
    canonical_phase_matrix, discriminant, phase_unit_audit, reconstruct_projector, verify_sic_projector,
    GENERATOR_DEGREES,
};
use sicfield::weyl::all_displacements;
use sicfield::{
    certify_structure, extract_phases, fourth_moment, generate_group, minimal_polynomial, palindrome_reduce,
    residual_gradient, search, search_from, verify_split, Automorphism, Complex64, Constant, FieldElem,
    NumericFiducial, PolyQ, QMatrix, SearchConfig,
};

const EXACT_RUNTIME: Duration = Duration::from_secs(60);
const SEARCH_RUNTIME: Duration = Duration::from_secs(300);
const SEARCH_TOL: f64 = 1e-10;
const SEARCH_RESTARTS: usize = 32;
const PHASE_MATCH_TOL: f64 = 1e-8;
const GRADIENT_REL_TOL: f64 = 1e-5;
const GRADIENT_STEP: f64 = 1e-6;
const FOURTH_MOMENT_TOL: f64 = 1e-8;
const EMBEDDING_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p1() -> PolyQ {
    PolyQ::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1])
}

fn px() -> PolyQ {
    PolyQ::from_ints(&[4, 0, -6, 0, 1])
}

fn exact_sic() -> Outcome {
    let start = Instant::now();
    let pi = reconstruct_projector(&canonical_phase_matrix());
    let report = verify_sic_projector(&pi);
    let elapsed = start.elapsed();
    let fifth = FieldElem::from_rational(rat(1, 5));
    ensure(report.hermitian, "Π† ≠ Π")?;
    ensure(report.idempotent, "Π² ≠ Π")?;
    ensure(report.unit_trace, "Tr Π ≠ 1")?;
    ensure(report.overlaps.len() == 15, "expected 15 overlaps")?;
    ensure(report.overlaps.iter().all(|o| o.value == fifth), format!("failing: {:?}", report.failing_overlaps()))?;
    ensure(elapsed < EXACT_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("Π†=Π, Π²=Π, TrΠ=1, 15 overlaps = 1/5 exactly in {elapsed:.2?}"))
}

fn minimal_polynomials() -> Outcome {
    let u = c(Constant::U);
    let got_u = minimal_polynomial(&u).primitive;
    let got_x = minimal_polynomial(&(&u + &c(Constant::InvU))).primitive;
    let got_m1 = minimal_polynomial(&FieldElem::from_int(-1)).primitive;
    ensure(got_u == p1(), format!("minpoly(u) = {got_u}"))?;
    ensure(got_x == px(), format!("minpoly(u+1/u) = {got_x}"))?;
    ensure(got_m1 == PolyQ::from_ints(&[1, 1]), format!("minpoly(-1) = {got_m1}"))?;
    Ok(format!("{got_u}; {got_x}; {got_m1}"))
}

fn palindromes() -> Outcome {
    let reduced = palindrome_reduce(&p1()).map_err(|e| e.to_string())?;
    ensure(reduced == px(), format!("reduce(p1) = {reduced}"))?;
    let shifted = px().eval_shifted(4).map_err(|e| e.to_string())?;
    ensure(shifted == p1(), format!("t^4 px(t + 1/t) = {shifted}"))?;
    Ok("reduce(p1) = px and t^4·px(t+1/t) = p1".into())
}

fn splitting() -> Outcome {
    let roots: Vec<FieldElem> = [Constant::U, Constant::InvU, Constant::R, Constant::InvR]
        .iter()
        .flat_map(|&k| [c(k), -c(k)])
        .collect();
    ensure(verify_split(&p1(), &roots), "product of (t - root) differs from p1")?;
    Ok("p1 = Π (t ∓ u)(t ∓ 1/u)(t ∓ r)(t ∓ 1/r)".into())
}

fn field_relations() -> Outcome {
    let u = c(Constant::U);
    let iu = c(Constant::InvU);
    let r = c(Constant::R);
    let ir = c(Constant::InvR);
    let x = &u + &iu;
    let um = &u - &iu;
    let sqrt5 = c(Constant::Sqrt5);
    let sqrt2 = c(Constant::Sqrt2);
    let i = c(Constant::I);
    ensure(&sqrt5 * &sqrt5 == FieldElem::from_int(5), "√5² ≠ 5")?;
    ensure(sqrt5 == &FieldElem::from_int(3) - &(&x * &x), "√5 ≠ 3 − x²")?;
    ensure(&sqrt2 * &sqrt2 == FieldElem::from_int(2), "√2² ≠ 2")?;
    ensure(sqrt2 == (&x * &(&um * &um)).mul_rational(&rat(-1, 2)), "√2 ≠ −½x(u−1/u)²")?;
    ensure(&x * &(&r + &ir) == FieldElem::from_int(-2), "(u+1/u)(r+1/r) ≠ −2")?;
    ensure(&i * &i == FieldElem::from_int(-1), "i² ≠ −1")?;
    ensure(&um * &(&r - &ir) == &FieldElem::from_int(-2) * &i, "(u−1/u)(r−1/r) ≠ −2i")?;
    let e5 = sqrt5.embed();
    let e2 = sqrt2.embed();
    let ei = i.embed();
    ensure((e5.re - 5f64.sqrt()).abs() < EMBEDDING_TOL && e5.im.abs() < EMBEDDING_TOL, "√5 embeds wrongly")?;
    ensure((e2.re - 2f64.sqrt()).abs() < EMBEDDING_TOL && e2.im.abs() < EMBEDDING_TOL, "√2 embeds wrongly")?;
    ensure((ei - Complex64::new(0.0, 1.0)).norm() < EMBEDDING_TOL, "i embeds wrongly")?;
    Ok("√5 = 3−x², √2 = −½x(u−1/u)², (u+1/u)(r+1/r) = −2, (u−1/u)(r−1/r) = −2i".into())
}

fn galois() -> Outcome {
    let gens = Automorphism::generators();
    let g = generate_group(&gens).map_err(|e| e.to_string())?;
    let s = certify_structure(&g);
    ensure(s.order == 16, format!("|G| = {}", s.order))?;
    ensure(s.failures.is_empty(), format!("{:?}", s.failures))?;
    ensure(s.isomorphism_type == GroupType::Z2xD8, format!("type {}", s.isomorphism_type))?;
    let rel = s.relations.as_ref().ok_or("no relation report")?;
    ensure(rel.h_order == 8 && rel.h_abelian && rel.h_normal, "H is not abelian normal of order 8")?;
    ensure(rel.conjugations.iter().all(|&b| b), "conjugation relations fail")?;
    ensure(rel.quotient_order == 2 && rel.chain_soluble, "e ◁ H ◁ G is not a soluble chain")?;
    let h = generate_group(&gens[..3]).map_err(|e| e.to_string())?;
    ensure(fixed_subfield_check(&h, &c(Constant::Sqrt5)), "H moves √5")?;

    // Rows g1..g3 must match verbatim. Three printed g4 entries are sign
    // errata: accepted only as exact negatives, with the printed row
    // realized by no element of G.
    let computed = action_table(&gens);
    let printed = reference_action_table();
    let cmp = compare_tables(&computed, &printed);
    ensure(cmp.mismatches.is_empty(), format!("entries off by more than sign: {:?}", cmp.mismatches))?;
    ensure(cmp.sign_flips.iter().all(|&(row, _)| row == 3), format!("sign flips outside g4: {:?}", cmp.sign_flips))?;
    ensure(realizing_elements(&g, &printed[3]).is_empty(), "printed g4 row is realizable")?;
    ensure(cmp.matching + cmp.sign_flips.len() == 28, "table size")?;
    Ok(format!(
        "|G|=16 ≅ Z2xD8, H abelian normal of order 8, G/H=Z2, H fixes √5; table {}/28 verbatim, {} g4 sign errata certified",
        cmp.matching,
        cmp.sign_flips.len()
    ))
}

fn degrees() -> Outcome {
    let u = c(Constant::U);
    let r = c(Constant::R);
    let du = minimal_polynomial(&u).degree;
    ensure(du == BASE_DEGREE && du == 8, format!("deg u = {du}"))?;
    let monomials: Vec<FieldElem> = (0..8)
        .map(|k| u.pow(k).unwrap())
        .chain((0..8).map(|k| &r * &u.pow(k).unwrap()))
        .collect();
    let m = QMatrix::from_fn(DEGREE, monomials.len(), |i, j| monomials[j].coords()[i].clone());
    ensure(m.rank() == 16 && DEGREE == 16, format!("basis rank {}", m.rank()))?;
    ensure(!r.in_base_field(), "r lies in Q(u)")?;
    Ok(format!("[Q(u):Q] = {du}, [Q(u,r):Q] = {} = 2·{du}", m.rank()))
}

fn unit_audit() -> Outcome {
    let audit = phase_unit_audit();
    let degs: Vec<usize> = audit.generators.iter().map(|e| e.degree).collect();
    ensure(audit.generators.iter().all(|e| e.unit), "a generator is not a unit")?;
    ensure(degs == GENERATOR_DEGREES, format!("degrees {degs:?}"))?;
    ensure(degs == [2, 4, 8, 8, 8], format!("degrees {degs:?}"))?;
    ensure(c(Constant::U3) == c(Constant::U), "u3 ≠ u")?;
    ensure(audit.passed(), "phase audit failed")?;
    Ok(format!("u1..u5 units of degrees {degs:?}, u3 = u"))
}

fn discriminants() -> Outcome {
    for (d, want) in [(4usize, 5u64), (5, 3), (7, 2)] {
        let (disc, free) = discriminant(d).map_err(|e| e.to_string())?;
        ensure(disc == (d as u64 - 3) * (d as u64 + 1), format!("D({d}) = {disc}"))?;
        ensure(free == want, format!("squarefree D({d}) = {free}"))?;
    }
    let s5 = c(Constant::Sqrt5);
    ensure(&s5 * &s5 == FieldElem::from_int(5) && s5.in_base_field(), "√5 not in Q(u)")?;
    Ok("(4,5), (5,3), (7,2); Q(√5) ⊂ Q(u)".into())
}

fn numeric_search() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for d in 2..=5 {
        let cfg = SearchConfig { restarts: SEARCH_RESTARTS, tolerance: SEARCH_TOL, ..SearchConfig::new(d) };
        let res = search::<f64>(&cfg).map_err(|e| e.to_string())?;
        ensure(res.converged, format!("d={d} residual {:e}", res.residual))?;
        parts.push(format!("d={d}: {:.1e}", res.residual));
    }
    let pi = reconstruct_projector(&canonical_phase_matrix());
    let warm = NumericFiducial::new(pi.embedded_fiducial::<f64>()).map_err(|e| e.to_string())?;
    let res = search_from(&SearchConfig::new(4), warm).map_err(|e| e.to_string())?;
    ensure(res.converged && res.iterations <= 5, "warm start did not converge at once")?;
    let phases = extract_phases(&res.best, SEARCH_TOL).map_err(|e| e.to_string())?;
    let exact = canonical_phase_matrix();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((phases.get(i, j) - exact.get(i, j).embed()).norm());
        }
    }
    ensure(worst < PHASE_MATCH_TOL, format!("warm-start phase error {worst:e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < SEARCH_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("{}; warm-start phase error {worst:.1e}; {elapsed:.1?}", parts.join(", ")))
}

/// Deterministic, well-spread test state.
fn test_state(d: usize, seed: usize) -> NumericFiducial<f64> {
    let amps = (0..d)
        .map(|k| {
            let t = (k * 7 + seed * 13 + 1) as f64;
            Complex64::new((1.3 * t).sin(), (0.7 * t + 0.4).cos())
        })
        .collect();
    NumericFiducial::new(amps).unwrap()
}

fn test_elem(seed: i64) -> FieldElem {
    let coords: Vec<Rational> = (0..16).map(|k| rat((seed * 31 + k * 17) % 11 - 5, 1 + (k + seed) % 4)).collect();
    FieldElem::from_slice(&coords)
}

fn properties() -> Outcome {
    // gradient vs central differences
    let mut worst_grad: f64 = 0.0;
    for d in 2..=5 {
        for seed in 0..5 {
            let psi = test_state(d, seed);
            let g = residual_gradient(&psi);
            let ph = WeylPhases::<f64>::new(d).unwrap();
            let base = psi.amplitudes().to_vec();
            let scale = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
            for (k, gk) in g.iter().enumerate() {
                let h = if k < d { Complex64::new(GRADIENT_STEP, 0.0) } else { Complex64::new(0.0, GRADIENT_STEP) };
                let (mut a, mut b) = (base.clone(), base.clone());
                a[k % d] += h;
                b[k % d] -= h;
                let fd = (ph.residual(&a) - ph.residual(&b)) / (2.0 * GRADIENT_STEP);
                worst_grad = worst_grad.max((gk - fd).abs() / scale);
            }
        }
    }
    ensure(worst_grad < GRADIENT_REL_TOL, format!("gradient error {worst_grad:e}"))?;

    // fourth moment at converged fiducials
    let mut worst_m4: f64 = 0.0;
    for d in 2..=5 {
        let res = search::<f64>(&SearchConfig { restarts: 8, seed: 3, ..SearchConfig::new(d) }).unwrap();
        ensure(res.converged, format!("d={d} search did not converge"))?;
        let want = 2.0 * d as f64 / (d as f64 + 1.0);
        worst_m4 = worst_m4.max((fourth_moment(&res.best) - want).abs());
    }
    ensure(worst_m4 < FOURTH_MOMENT_TOL, format!("fourth moment error {worst_m4:e}"))?;

    // conjugation commutes with the embedding
    let mut worst_conj: f64 = 0.0;
    for seed in 0..20 {
        let a = test_elem(seed);
        worst_conj = worst_conj.max((a.conj().embed() - a.embed().conj()).norm() / (1.0 + a.embed().norm()));
    }
    ensure(worst_conj < EMBEDDING_TOL, format!("conjugation error {worst_conj:e}"))?;

    // Tr(D_p† D_q) = d δ_pq
    for d in 2..=6 {
        let ops: Vec<Matrix<Complex64>> = all_displacements(d).unwrap();
        for (a, p) in ops.iter().enumerate() {
            for (b, q) in ops.iter().enumerate() {
                let want = if a == b { d as f64 } else { 0.0 };
                let t = p.adjoint().trace_product(q);
                ensure((t - Complex64::new(want, 0.0)).norm() < 1e-12, format!("trace identity d={d}"))?;
            }
        }
    }

    // determinism
    let cfg = SearchConfig { restarts: 6, seed: 17, ..SearchConfig::new(3) };
    let (a, b) = (search::<f64>(&cfg).unwrap(), search::<f64>(&cfg).unwrap());
    ensure(a == b, "search results differ under a fixed seed")?;
    let argv = ["search", "--dim", "3", "--restarts", "6", "--seed", "17", "--json"];
    ensure(sicfield_cli::run_command(argv) == sicfield_cli::run_command(argv), "reports differ")?;

    Ok(format!(
        "gradient {worst_grad:.1e}, fourth moment {worst_m4:.1e}, conjugation {worst_conj:.1e}, trace identity d≤6, deterministic"
    ))
}

fn cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_sicfield");
    let ok = Command::new(bin).args(["verify-d4", "--json"]).output().map_err(|e| e.to_string())?;
    ensure(ok.status.code() == Some(0), format!("verify-d4 exit {:?}", ok.status.code()))?;
    let doc: Value = serde_json::from_slice(&ok.stdout).map_err(|e| e.to_string())?;
    let reports = doc.as_array().ok_or("not an array")?;
    ensure(reports.iter().all(|r| r["status"] == "pass"), "a report is not pass")?;
    ensure(reports.len() >= 20, format!("only {} reports", reports.len()))?;

    let bad = Command::new(bin)
        .args(["verify-d4", "--json", "--corrupt-phase", "1,2"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(bad.status.code() == Some(1), format!("corrupted exit {:?}", bad.status.code()))?;
    let doc: Value = serde_json::from_slice(&bad.stdout).map_err(|e| e.to_string())?;
    let failing: Vec<String> = doc
        .as_array()
        .ok_or("not an array")?
        .iter()
        .filter(|r| r["status"] == "fail" && r["check"].as_str().is_some_and(|s| s.starts_with("overlap")))
        .map(|r| r["check"].as_str().unwrap().to_string())
        .collect();
    ensure(!failing.is_empty(), "no failing overlap reported")?;
    Ok(format!("{} pass reports, exit 0; corrupted (1,2) exits 1 naming {}", reports.len(), failing.join(" ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact SIC verification", exact_sic),
        ("minimal polynomials", minimal_polynomials),
        ("palindrome machinery", palindromes),
        ("splitting of p1", splitting),
        ("field relations", field_relations),
        ("Galois group and action table", galois),
        ("degree bookkeeping", degrees),
        ("unit audit", unit_audit),
        ("discriminant", discriminants),
        ("numeric search", numeric_search),
        ("property suites", properties),
        ("CLI", cli),
    ];
    let mut passed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", k + 1);
            }
            Err(why) => println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", k + 1),
        }
    }
    println!("{passed}/{} acceptance criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
