//! Argument handling and the subcommands.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::{One, Signed};
use serde::Deserialize;
use serde_json::{json, Value};
use sicfield::galois::{
    action_table, compare_tables, fixed_subfield_check, realizing_elements, reference_action_table,
};
use sicfield::minpoly::palindrome_reduce;
use sicfield::search::{extract_phases, fourth_moment, search, search_from, NumericFiducial};
use sicfield::sic::{
    canonical_phase_matrix, discriminant, phase_unit_audit, reconstruct_projector, verify_sic_projector,
    UnitAuditEntry, GENERATOR_DEGREES,
};
use sicfield::{
    certify_structure, generate_group, minimal_polynomial, sic_residual, Automorphism, Constant, Extended,
    FieldElem, Real, SearchConfig,
};

use crate::expr::{evaluate, parse_expr};
use crate::report::{field_json, float_value, poly_json, render_json, render_text, Precision, Report};

/// Embedded fiducial residuals must fall below this.
const EMBEDDED_RESIDUAL_BOUND: f64 = 1e-20;
/// Fourth-moment identity tolerance at converged fiducials.
const FOURTH_MOMENT_TOL: f64 = 1e-8;
/// Warm-start phases against the exact matrix.
const PHASE_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "sicfield", version, about = "Exact and numerical checks for the d=4 SIC-POVM")]
struct Cli {
    /// Emit a JSON array of reports.
    #[arg(long, global = true)]
    json: bool,
    /// Floating point precision for decimal approximations and numerics.
    #[arg(long, global = true, value_name = "double|extended")]
    precision: Option<Precision>,
    /// JSON file with defaults for any of the flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reconstruct and verify the exact d=4 projector, plus the unit audit.
    #[command(name = "verify-d4")]
    VerifyD4 {
        /// Negate phase (i, j) before verification.
        #[arg(long, hide = true, value_parser = parse_index_pair, value_name = "I,J")]
        corrupt_phase: Option<(usize, usize)>,
    },
    /// Minimal polynomial of a field expression.
    Minpoly {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Galois group order, structure and action table.
    Galois,
    /// Unit checks for the overlap phases and the generators u1..u5.
    Units,
    /// Numerical fiducial search with phase extraction.
    Search {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Start from the embedded exact fiducial (d=4 only).
        #[arg(long)]
        warm_start: bool,
    },
    /// `D = (d-3)(d+1)` and its square-free part.
    Discriminant {
        #[arg(long)]
        dim: Option<usize>,
    },
}

fn parse_index_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected I,J")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

/// Contents of a `--config` file; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    json: Option<bool>,
    precision: Option<String>,
    dim: Option<usize>,
    restarts: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    max_iterations: Option<usize>,
    warm_start: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: msg.into() }
    }
}

/// Runs the CLI on `args` (without the program name).
///
/// Exit code 0 when every check passes, 1 when any fails or errors, 2 on
/// usage errors.
pub fn run_command<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("sicfield".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let file = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(f) => f,
            Err(msg) => return Outcome::usage(msg),
        },
        None => FileConfig::default(),
    };
    let precision = match (cli.precision, &file.precision) {
        (Some(p), _) => p,
        (None, Some(s)) => match s.parse() {
            Ok(p) => p,
            Err(msg) => return Outcome::usage(format!("config: {msg}")),
        },
        (None, None) => Precision::Double,
    };
    let json = cli.json || file.json.unwrap_or(false);

    let reports = match cli.command {
        Command::VerifyD4 { corrupt_phase } => match verify_d4(precision, corrupt_phase) {
            Ok(r) => r,
            Err(msg) => return Outcome::usage(msg),
        },
        Command::Minpoly { expr } => minpoly(&expr, precision),
        Command::Galois => galois(precision),
        Command::Units => units(precision),
        Command::Search { dim, restarts, tol, seed, max_iterations, warm_start } => {
            let mut cfg = SearchConfig::new(dim.or(file.dim).unwrap_or(4));
            cfg.restarts = restarts.or(file.restarts).unwrap_or(cfg.restarts);
            cfg.tolerance = tol.or(file.tol).unwrap_or(cfg.tolerance);
            cfg.seed = seed.or(file.seed).unwrap_or(cfg.seed);
            cfg.max_iterations = max_iterations.or(file.max_iterations).unwrap_or(cfg.max_iterations);
            let warm = warm_start || file.warm_start.unwrap_or(false);
            if let Err(e) = cfg.validate() {
                return Outcome::usage(format!("search: {e}"));
            }
            if warm && cfg.dimension != 4 {
                return Outcome::usage("search: --warm-start needs --dim 4");
            }
            match precision {
                Precision::Double => run_search::<f64>(&cfg, warm),
                Precision::Extended => run_search::<Extended>(&cfg, warm),
            }
        }
        Command::Discriminant { dim } => match dim.or(file.dim) {
            Some(d) => discriminant_reports(d),
            None => return Outcome::usage("discriminant: --dim is required"),
        },
    };

    let code = if reports.iter().all(Report::passed) { 0 } else { 1 };
    let stdout = if json { render_json(&reports) } else { render_text(&reports) };
    Outcome { code, stdout, stderr: String::new() }
}

fn load_config(path: &PathBuf) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
}

fn index_name(i: usize, j: usize) -> String {
    format!("({i},{j})")
}

fn verify_d4(precision: Precision, corrupt: Option<(usize, usize)>) -> Result<Vec<Report>, String> {
    let mut phases = canonical_phase_matrix();
    if let Some((i, j)) = corrupt {
        phases = phases.with_negated(i, j).map_err(|e| format!("--corrupt-phase: {e}"))?;
    }
    let mut out = vec![
        Report::check("phases.unimodular", phases.is_unimodular(), "every phase z has z·conj(z) = 1"),
        Report::check("phases.values", phases.uses_allowed_values(), "phases lie in {±u, ±1/u, ±1}"),
        Report::check(
            "phases.symmetry",
            phases.has_hermitian_symmetry(),
            "P(-p) = s(p)·conj(P(p)) with D(-p) = s(p)·D(p)†",
        ),
        Report::check("phases.base_field", phases.in_base_field(), "every phase lies in Q(u)"),
    ];
    if let Some((i, j)) = corrupt {
        out[0] = out[0].clone().with("corrupted", index_name(i, j));
    }
    let s5 = Constant::Sqrt5.value();
    out.push(
        Report::check("field.sqrt5", &s5 * &s5 == FieldElem::from_int(5), "(3 - x^2)^2 = 5")
            .with("sqrt5", field_json(&s5, precision)),
    );

    let pi = reconstruct_projector(&phases);
    let sic = verify_sic_projector(&pi);
    out.push(Report::check("projector.hermitian", sic.hermitian, "Π† = Π"));
    out.push(Report::check("projector.idempotent", sic.idempotent, "Π² = Π"));
    out.push(
        Report::check("projector.trace", sic.unit_trace, "Tr Π = 1")
            .with("trace", field_json(&pi.matrix().trace(), precision)),
    );
    let target = FieldElem::from_rational(sicfield::sic::overlap_target(4));
    for o in &sic.overlaps {
        let name = index_name(o.index.i(), o.index.j());
        out.push(
            Report::check(format!("overlap{name}"), o.ok, format!("Tr(Π D{name} Π D{name}†) = 1/5"))
                .with("value", field_json(&o.value, precision))
                .with("expected", field_json(&target, precision)),
        );
    }
    let failing: Vec<String> =
        sic.failing_overlaps().iter().map(|p| index_name(p.i(), p.j())).collect();
    out.push(
        Report::check("sic", sic.is_sic(), "Π is a SIC fiducial projector")
            .with("failing_overlaps", failing),
    );

    let residual = match precision {
        Precision::Double => embedded_residual::<f64>(&pi),
        Precision::Extended => embedded_residual::<Extended>(&pi),
    };
    out.push(
        Report::check(
            "fiducial.embedded",
            residual.is_some_and(|r| r < EMBEDDED_RESIDUAL_BOUND),
            "numeric residual of the embedded fiducial < 1e-20",
        )
        .with("residual", residual.map_or(Value::Null, float_value)),
    );

    out.extend(units(precision));
    Ok(out)
}

fn embedded_residual<F: Real>(pi: &sicfield::sic::ExactProjector) -> Option<f64> {
    let psi = NumericFiducial::new(pi.embedded_fiducial::<F>()).ok()?;
    sic_residual(&psi).to_f64()
}

fn audit_details(r: Report, e: &UnitAuditEntry, precision: Precision) -> Report {
    r.with("value", field_json(&e.value, precision))
        .with("minimal_polynomial", poly_json(&e.minimal_polynomial))
        .with("degree", e.degree)
        .with("algebraic_integer", e.algebraic_integer)
        .with("unit", e.unit)
}

fn units(precision: Precision) -> Vec<Report> {
    let audit = phase_unit_audit();
    let mut out = Vec::new();
    for e in &audit.phases {
        let r = Report::check(
            format!("units.phase[{}]", e.name),
            e.algebraic_integer && e.unit,
            format!("{} is a unit with minimal polynomial {}", e.name, e.minimal_polynomial),
        );
        out.push(audit_details(r, e, precision));
    }
    for (e, want) in audit.generators.iter().zip(GENERATOR_DEGREES) {
        let r = Report::check(
            format!("units.{}", e.name),
            e.unit && e.degree == want,
            format!("{} is a unit of degree {want}", e.name),
        )
        .with("expected_degree", want);
        out.push(audit_details(r, e, precision));
    }
    out.push(Report::check("units.u3_is_u", audit.u3_equals_u, "u3 = u exactly"));
    out
}

fn minpoly(text: &str, precision: Precision) -> Vec<Report> {
    let ast = match parse_expr(text) {
        Ok(a) => a,
        Err(e) => {
            return vec![Report::error("minpoly", &e).with("input", text).with("offset", e.offset())];
        }
    };
    let value = match evaluate(&ast) {
        Ok(v) => v,
        Err(e) => return vec![Report::error("minpoly", e).with("input", text)],
    };
    let mp = minimal_polynomial(&value);
    let integral = mp.monic.is_integral();
    let unit = integral && mp.monic.coeff(0).abs().is_one();
    let mut r = Report::check("minpoly", true, mp.primitive.to_string())
        .with("expression", ast.to_string())
        .with("value", field_json(&value, precision))
        .with("monic", poly_json(&mp.monic))
        .with("primitive", poly_json(&mp.primitive))
        .with("degree", mp.degree)
        .with("algebraic_integer", integral)
        .with("unit", unit);
    if let Ok(q) = palindrome_reduce(&mp.primitive) {
        r = r.with("palindromic_reduction", poly_json(&q));
    }
    vec![r]
}

fn galois(precision: Precision) -> Vec<Report> {
    let gens = Automorphism::generators();
    let g = match generate_group(&gens) {
        Ok(g) => g,
        Err(e) => return vec![Report::error("galois.group", e)],
    };
    let s = certify_structure(&g);
    let census: serde_json::Map<String, Value> =
        s.order_census.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut out = vec![
        Report::check("galois.order", s.order == 16, format!("|G| = {}", s.order)),
        Report::check(
            "galois.structure",
            s.passed() && s.isomorphism_type.to_string() == "Z2xD8",
            format!("G ≅ {}", s.isomorphism_type),
        )
        .with("order_census", census)
        .with("center_order", s.center_order)
        .with("exponent", s.exponent)
        .with("derived_series", s.derived_series.clone())
        .with("soluble", s.soluble)
        .with("failures", s.failures.clone()),
    ];
    if let Some(rel) = &s.relations {
        out.push(
            Report::check(
                "galois.subgroup_h",
                rel.h_order == 8 && rel.h_abelian && rel.h_normal,
                "H = <g1,g2,g3> is abelian and normal of order 8",
            )
            .with("order", rel.h_order)
            .with("abelian", rel.h_abelian)
            .with("normal", rel.h_normal),
        );
        out.push(
            Report::check(
                "galois.conjugation",
                rel.conjugations.iter().all(|&b| b),
                "g4 g1 g4⁻¹ = g3, g4 g2 g4⁻¹ = g2, g4 g3 g4⁻¹ = g1",
            )
            .with("relations", rel.conjugations.to_vec()),
        );
        out.push(Report::check(
            "galois.quotient",
            rel.quotient_order == 2 && rel.quotient_abelian,
            format!("|G/H| = {}", rel.quotient_order),
        ));
        out.push(Report::check("galois.soluble_chain", rel.chain_soluble, "e ◁ H ◁ G with abelian factors"));
        out.push(Report::check("galois.direct_product", rel.direct_product, "G = <g2> × D8"));
    }

    let h_fixes = generate_group(&gens[..3]).map(|h| fixed_subfield_check(&h, &Constant::Sqrt5.value()));
    out.push(Report::check("galois.fixed_field", h_fixes == Ok(true), "H fixes √5"));

    let computed = action_table(&gens);
    let reference = reference_action_table();
    let cmp = compare_tables(&computed, &reference);
    // The printed g4 row carries three sign errors; they are accepted only if
    // no group element realizes the printed row.
    let g4_row = 3;
    let errata_confined = cmp.mismatches.is_empty() && cmp.sign_flips.iter().all(|&(row, _)| row == g4_row);
    let printed_unrealizable = cmp.sign_flips.is_empty() || realizing_elements(&g, &reference[g4_row]).is_empty();
    let flips: Vec<String> = cmp.sign_flips.iter().map(|&(r, c)| format!("g{}:{}", r + 1, c)).collect();
    let mut table = Report::check(
        "galois.table",
        errata_confined && printed_unrealizable,
        format!("{}/{} entries match the printed table; {} sign errata in the g4 row", cmp.matching, cmp.entries, cmp.sign_flips.len()),
    )
    .with("matching", cmp.matching)
    .with("entries", cmp.entries)
    .with("sign_errata", flips)
    .with("printed_row_realizable", !printed_unrealizable);
    let columns: Vec<&str> = sicfield::galois::ACTION_COLUMNS.iter().map(|k| k.name()).collect();
    let rows: Vec<Value> = computed
        .iter()
        .map(|row| Value::Array(row.iter().map(|z| field_json(z, precision)).collect()))
        .collect();
    table = table.with("columns", columns).with("rows", rows);
    out.push(table);

    let u_degree = minimal_polynomial(&Constant::U.value()).degree;
    out.push(
        Report::check(
            "field.degrees",
            u_degree == sicfield::field::BASE_DEGREE && sicfield::field::DEGREE == 2 * u_degree,
            format!("[Q(u):Q] = {u_degree}, [Q(u,r):Q] = {}", sicfield::field::DEGREE),
        )
        .with("base_degree", u_degree)
        .with("degree", sicfield::field::DEGREE),
    );
    out
}

fn run_search<F: Real + crate::report::ExactValue>(cfg: &SearchConfig, warm: bool) -> Vec<Report> {
    let result = if warm {
        let pi = reconstruct_projector(&canonical_phase_matrix());
        NumericFiducial::new(pi.embedded_fiducial::<F>()).and_then(|start| search_from::<F>(cfg, start))
    } else {
        search::<F>(cfg)
    };
    let res = match result {
        Ok(r) => r,
        Err(e) => return vec![Report::error("search", e)],
    };
    let converged_restarts = res.traces.iter().filter(|t| t.converged).count();
    let mut out = vec![Report::check(
        "search.converged",
        res.converged,
        format!("best residual below {:e}", cfg.tolerance),
    )
    .with("dim", cfg.dimension)
    .with("restarts", cfg.restarts)
    .with("seed", cfg.seed)
    .with("warm_start", warm)
    .with("residual", float_value(res.residual))
    .with("iterations", res.iterations)
    .with("best_restart", res.restart)
    .with("converged_restarts", converged_restarts)];

    let d = F::from(cfg.dimension).unwrap();
    let expected = F::from(2).unwrap() * d / (d + F::one());
    let m4 = fourth_moment(&res.best);
    let m4_err = (m4 - expected).abs().to_f64().unwrap_or(f64::INFINITY);
    out.push(
        Report::check("search.fourth_moment", m4_err < FOURTH_MOMENT_TOL, "Σ|⟨ψ|D|ψ⟩|⁴ = 2d/(d+1)")
            .with("value", float_value(m4))
            .with("expected", float_value(expected)),
    );

    match extract_phases(&res.best, cfg.tolerance) {
        Ok(ph) => {
            let bound = 10.0 * cfg.tolerance.sqrt();
            let worst = ph
                .entries()
                .iter()
                .map(|z| (z.norm().to_f64().unwrap_or(f64::INFINITY) - 1.0).abs())
                .fold(0.0, f64::max);
            let cells: Vec<Value> = ph
                .entries()
                .iter()
                .map(|z| json!({ "re": float_value(z.re), "im": float_value(z.im) }))
                .collect();
            out.push(
                Report::check("search.phases", worst < bound, "extracted phases are unimodular")
                    .with("max_modulus_error", float_value(worst))
                    .with("phases", cells),
            );
            if warm {
                let exact = canonical_phase_matrix();
                let mut max_diff: f64 = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        let diff = (*ph.get(i, j) - exact.get(i, j).embed_in::<F>()).norm();
                        max_diff = max_diff.max(diff.to_f64().unwrap_or(f64::INFINITY));
                    }
                }
                out.push(
                    Report::check(
                        "search.phase_match",
                        max_diff < PHASE_MATCH_TOL,
                        "warm-start phases match the exact phase matrix",
                    )
                    .with("max_difference", float_value(max_diff)),
                );
            }
        }
        Err(e) => out.push(Report::error("search.phases", e)),
    }
    out
}

fn discriminant_reports(d: usize) -> Vec<Report> {
    let (disc, free) = match discriminant(d) {
        Ok(v) => v,
        Err(e) => return vec![Report::error("discriminant", e)],
    };
    let mut out = vec![Report::check("discriminant", true, format!("D={free}"))
        .with("dim", d)
        .with("discriminant", disc)
        .with("squarefree", free)];
    if d == 4 {
        let s5 = Constant::Sqrt5.value();
        out.push(Report::check(
            "discriminant.field",
            free == 5 && &s5 * &s5 == FieldElem::from_int(5),
            "Q(√D) = Q(√5) ⊂ Q(u)",
        ));
    }
    out
}
