//! Subcommand implementations. Each returns a [`Report`] or the error that stopped it.

use serde_json::Value;
use tensor_ginv::fixtures::{run_indefinite_weight_example, run_weighted_product_example};
use tensor_ginv::geninv::{mp_inverse, penrose_report, weighted_conj_transpose, wmp_inverse, Weight, WeightPair};
use tensor_ginv::io::{num, read_tensor, tensor_to_json};
use tensor_ginv::random::TensorRng;
use tensor_ginv::report::CheckReport;
use tensor_ginv::rol::catalog::{find_case, run_case, CATALOG};
use tensor_ginv::rol::{check_rol, check_triple_rol, check_weighted_rol, RolReport, Tolerances};
use tensor_ginv::spectral::{full_rank_decomposition, tensor_svd};
use tensor_ginv::tensor::{identity_tensor, reshape_rank};
use tensor_ginv::{EinsteinShape, Error, RankTol, Result, Tensor};

use crate::report::Report;
use crate::{Cli, Command, GenKind};

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Pinv => pinv(cli),
        Command::Wpinv => wpinv(cli),
        Command::Svd => svd(cli),
        Command::Frd => frd(cli),
        Command::Product => product(cli),
        Command::Hash => hash(cli),
        Command::CheckRol => check_rol_cmd(cli),
        Command::CheckWrol => check_wrol_cmd(cli),
        Command::CheckTriple => check_triple_cmd(cli),
        Command::Identities { case, instances } => identities(cli, case.as_deref(), *instances),
        Command::Verify => verify(cli),
        Command::Gen { kind, rows, cols, rank } => gen(cli, *kind, rows, cols.as_deref(), *rank),
        Command::Fixtures => fixtures(cli),
    }
}

fn inputs(cli: &Cli, roles: &[&str]) -> Result<Vec<Tensor>> {
    if cli.inputs.len() != roles.len() {
        return Err(Error::Parse(format!(
            "{} expects {} input(s) ({}), got {}",
            cli.command.name(),
            roles.len(),
            roles.join(", "),
            cli.inputs.len()
        )));
    }
    cli.inputs.iter().map(|p| read_tensor(p)).collect()
}

fn rank_tol(cli: &Cli) -> RankTol {
    cli.rank_tol.map_or(RankTol::Auto, RankTol::Relative)
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut t = Tolerances::new(cli.tol);
    if let Some(r) = cli.rank_tol {
        t.rank = RankTol::Relative(r);
    }
    t
}

fn load_weight(cli: &Cli, role: &str, path: &std::path::Path) -> Result<Weight> {
    let t = read_tensor(path)?;
    match Weight::new(t.clone(), cli.tol) {
        Err(Error::NotPositiveDefinite { min_eigenvalue }) if cli.allow_non_hpd => {
            eprintln!(
                "warning: weight {role} is not positive definite (smallest eigenvalue {min_eigenvalue:.6e}); \
                 continuing with a Hermitian invertible weight"
            );
            Weight::generalized(t, cli.tol)
        }
        other => other,
    }
}

fn optional_weight(cli: &Cli, role: &str, path: Option<&std::path::Path>, modes: &[usize]) -> Result<Weight> {
    match path {
        Some(p) => load_weight(cli, role, p),
        None => Weight::identity(modes),
    }
}

fn required_weight(cli: &Cli, role: &str, path: Option<&std::path::Path>) -> Result<Weight> {
    let flag = format!("--weight-{}", role.to_lowercase());
    let p = path.ok_or_else(|| Error::Parse(format!("{} requires {flag}", cli.command.name())))?;
    load_weight(cli, role, p)
}

fn rel_check(name: &str, tol: f64, items: &[(&str, &Tensor, &Tensor)]) -> Result<CheckReport> {
    let mut c = CheckReport::new(name, tol);
    for (key, lhs, rhs) in items {
        c.push(key, lhs.relative_distance(rhs)?);
    }
    Ok(c)
}

fn pinv(cli: &Cli) -> Result<Report> {
    let a = inputs(cli, &["A"])?.remove(0);
    let x = mp_inverse(&a, rank_tol(cli))?;
    let mut r = Report::default();
    r.check(penrose_report(&a, &x, None, cli.tol)?);
    r.value("rank", reshape_rank(&a, rank_tol(cli))?.into());
    r.output("X", x);
    Ok(r)
}

fn wpinv(cli: &Cli) -> Result<Report> {
    let a = inputs(cli, &["A"])?.remove(0);
    let m = required_weight(cli, "M", cli.weight_m.as_deref())?;
    let n = required_weight(cli, "N", cli.weight_n.as_deref())?;
    let pair = WeightPair::new(m, n);
    pair.check_conforms(&a)?;
    let x = wmp_inverse(&a, &pair, rank_tol(cli))?;
    let mut r = Report::default();
    r.check(penrose_report(&a, &x, Some(&pair), cli.tol)?);
    r.value("rank", reshape_rank(&a, rank_tol(cli))?.into());
    r.value("m_positive_definite", pair.m.is_positive_definite().into());
    r.value("n_positive_definite", pair.n.is_positive_definite().into());
    r.output("X", x);
    Ok(r)
}

fn svd(cli: &Cli) -> Result<Report> {
    let a = inputs(cli, &["A"])?.remove(0);
    let f = tensor_svd(&a)?;
    let recon = f.u.ein(&f.d)?.ein(&f.v.h())?;
    let iu = identity_tensor(a.row_modes())?;
    let iv = identity_tensor(a.col_modes())?;
    let mut r = Report::default();
    r.check(rel_check(
        "svd",
        cli.tol,
        &[
            ("reconstruction", &recon, &a),
            ("u_unitary", &f.u.h().ein(&f.u)?, &iu),
            ("v_unitary", &f.v.h().ein(&f.v)?, &iv),
        ],
    )?);
    r.value("sigma", Value::Array(f.sigma.iter().map(|&s| num(s)).collect()));
    r.value("rank", rank_tol(cli).count(&f.sigma, a.shape().row_count(), a.shape().col_count()).into());
    r.output("U", f.u);
    r.output("D", f.d);
    r.output("V", f.v);
    Ok(r)
}

fn frd(cli: &Cli) -> Result<Report> {
    let a = inputs(cli, &["A"])?.remove(0);
    let tol = rank_tol(cli);
    let d = full_rank_decomposition(&a, tol)?;
    let ir = identity_tensor(&[d.r])?;
    let mut r = Report::default();
    r.check(rel_check(
        "frd",
        cli.tol,
        &[
            ("reconstruction", &d.f.ein(&d.g)?, &a),
            ("f_left_inverse", &mp_inverse(&d.f, tol)?.ein(&d.f)?, &ir),
            ("g_right_inverse", &d.g.ein(&mp_inverse(&d.g, tol)?)?, &ir),
        ],
    )?);
    r.value("rank", d.r.into());
    r.output("F", d.f);
    r.output("G", d.g);
    Ok(r)
}

fn product(cli: &Cli) -> Result<Report> {
    let t = inputs(cli, &["A", "B"])?;
    let mut r = Report::default();
    r.output("C", t[0].ein(&t[1])?);
    Ok(r)
}

fn hash(cli: &Cli) -> Result<Report> {
    let a = inputs(cli, &["A"])?.remove(0);
    let m = optional_weight(cli, "M", cli.weight_m.as_deref(), a.row_modes())?;
    let n = optional_weight(cli, "N", cli.weight_n.as_deref(), a.col_modes())?;
    let mut r = Report::default();
    r.output("H", weighted_conj_transpose(&a, &n, &m)?);
    Ok(r)
}

fn rol_report(rol: RolReport, tol: f64, verdict: bool) -> Report {
    let mut r = Report::default();
    for c in rol.condition_checks {
        r.check(c);
    }
    r.check(CheckReport::from_residuals("reverse_order_law", tol, &[("law_residual", rol.law_residual)]));
    r.value("law_holds", rol.law_holds.into());
    r.value("conditions_hold", rol.conditions_hold.into());
    r.verdict = Some(verdict);
    r
}

fn check_rol_cmd(cli: &Cli) -> Result<Report> {
    let t = inputs(cli, &["A", "B"])?;
    let rol = check_rol(&t[0], &t[1], tolerances(cli))?;
    let agrees = rol.agrees();
    Ok(rol_report(rol, cli.tol, agrees))
}

fn check_wrol_cmd(cli: &Cli) -> Result<Report> {
    let t = inputs(cli, &["A", "B"])?;
    let (a, b) = (&t[0], &t[1]);
    let m = optional_weight(cli, "M", cli.weight_m.as_deref(), a.row_modes())?;
    let n = optional_weight(cli, "N", cli.weight_n.as_deref(), b.col_modes())?;
    let p = optional_weight(cli, "P", cli.weight_p.as_deref(), a.col_modes())?;
    let rol = check_weighted_rol(a, b, &m, &n, &p, tolerances(cli))?;
    let agrees = rol.agrees();
    Ok(rol_report(rol, cli.tol, agrees))
}

fn check_triple_cmd(cli: &Cli) -> Result<Report> {
    let t = inputs(cli, &["U", "V", "W"])?;
    let m = optional_weight(cli, "M", cli.weight_m.as_deref(), t[0].row_modes())?;
    let n = optional_weight(cli, "N", cli.weight_n.as_deref(), t[2].col_modes())?;
    let rol = check_triple_rol(&t[0], &t[1], &t[2], &m, &n, tolerances(cli))?;
    let sound = rol.law_holds || !rol.conditions_hold;
    Ok(rol_report(rol, cli.tol, sound))
}

fn identities(cli: &Cli, case: Option<&str>, instances: usize) -> Result<Report> {
    let cases: Vec<_> = match case {
        Some(id) => vec![*find_case(id).ok_or_else(|| Error::Parse(format!("unknown catalog case {id}")))?],
        None => CATALOG.to_vec(),
    };
    let mut r = Report::default();
    for c in &cases {
        let s = run_case(c, instances, cli.seed, tolerances(cli))?;
        let mut check = CheckReport::from_residuals(s.id.clone(), cli.tol, &[("max_residual", s.max_residual)]);
        check.passed = s.passed();
        check.marginal = s.marginals > 0;
        check.note("instances", s.instances as f64);
        check.note("failures", s.failures as f64);
        check.note("marginals", s.marginals as f64);
        check.note("unsatisfiable", s.unsatisfiable as f64);
        r.check(check);
    }
    r.value("seed", cli.seed.into());
    r.value("instances_per_case", instances.into());
    Ok(r)
}

fn verify(cli: &Cli) -> Result<Report> {
    let t = inputs(cli, &["A", "X"])?;
    let (a, x) = (&t[0], &t[1]);
    let pair = match (cli.weight_m.as_deref(), cli.weight_n.as_deref()) {
        (None, None) => None,
        (m, n) => Some(WeightPair::new(
            optional_weight(cli, "M", m, a.row_modes())?,
            optional_weight(cli, "N", n, a.col_modes())?,
        )),
    };
    let mut r = Report::default();
    r.check(penrose_report(a, x, pair.as_ref(), cli.tol)?);
    Ok(r)
}

fn gen(cli: &Cli, kind: GenKind, rows: &[usize], cols: Option<&[usize]>, rank: Option<usize>) -> Result<Report> {
    let mut rng = TensorRng::new(cli.seed);
    let shape = EinsteinShape::new(rows.to_vec(), cols.unwrap_or(rows).to_vec())?;
    let square = || {
        if shape.is_square() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{kind:?} tensors need equal row and column modes, got {shape}")))
        }
    };
    let t = match kind {
        GenKind::Tensor => rng.tensor(&shape),
        GenKind::Hpd => {
            square()?;
            rng.hpd(rows)?
        }
        GenKind::Unitary => {
            square()?;
            rng.unitary(rows)?
        }
        GenKind::Rank => {
            let k = rank.ok_or_else(|| Error::Parse("gen --kind rank requires --rank".into()))?;
            rng.with_rank(&shape, k)?
        }
    };
    let mut r = Report::default();
    r.value("seed", cli.seed.into());
    r.output("T", t);
    Ok(r)
}

fn fixtures(cli: &Cli) -> Result<Report> {
    let ex = run_weighted_product_example(cli.tol)?;
    let mut r = Report::default();
    r.check(CheckReport::from_residuals(
        "weighted_product_example",
        5e-4,
        &[
            ("result_deviation", ex.result_deviation),
            ("intermediates_result_deviation", ex.intermediates_result_deviation),
            ("a1_deviation", ex.a1_deviation),
            ("b1_deviation", ex.b1_deviation),
            ("a1_dagger_deviation", ex.a1_dagger_deviation),
            ("b1_dagger_deviation", ex.b1_dagger_deviation),
        ],
    ));
    r.check(ex.penrose.clone());
    r.check(CheckReport::from_residuals(
        "weighted_product_routes",
        1e-10,
        &[
            ("frd_vs_direct", ex.frd_deviation),
            ("intermediates_vs_direct", ex.intermediates_vs_direct),
            ("b1_first_vs_direct", ex.b1_first_vs_direct),
        ],
    ));
    r.number("p_min_eigenvalue", ex.p_min_eigenvalue);
    r.number("printed_product_gap", ex.printed_product_gap);
    r.number("rounding_gap", ex.rounding_gap);
    r.value("weighted_product_result", tensor_to_json(&ex.result));
    eprintln!("weighted product example ran in {:.3} ms", ex.elapsed.as_secs_f64() * 1e3);

    let ce = run_indefinite_weight_example(cli.tol)?;
    let rejected = |e: &Option<Error>| matches!(e, Some(Error::NotPositiveDefinite { .. }));
    r.check(CheckReport::from_residuals(
        "indefinite_weight_counterexample",
        0.0,
        &[
            ("gram_inexact", f64::from(u8::from(!ce.gram_exact))),
            ("gram_rank_offset", (ce.gram_rank as f64 - 1.0).abs()),
            ("n_weight_accepted", f64::from(u8::from(!rejected(&ce.n_weight_error)))),
        ],
    ));
    r.value("gram", tensor_to_json(&ce.gram));
    r.value("gram_rank", ce.gram_rank.into());
    for (key, e) in [("n_weight_error", &ce.n_weight_error), ("m_weight_error", &ce.m_weight_error)] {
        r.value(key, e.as_ref().map_or(Value::Null, |e| Value::from(e.to_string())));
    }
    Ok(r)
}
