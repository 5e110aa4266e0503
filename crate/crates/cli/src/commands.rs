use std::fs;
use std::path::Path;

use quiverlab::io::{parse_class, parse_dim_vector, parse_quadruple, parse_quiver, parse_weight};
use quiverlab::momentmap::predicted_fiber_dim;
use quiverlab::rational::format_rational;
use quiverlab::strata::{normality_dichotomy, NearlyKleinian};
use quiverlab::{
    attach_legs, chain_data, class_dim, class_to_quiver, classes_to_star, darboux, dim_N,
    enumerate_rep_types, fiber_tangent_dim, geometry_report, is_nearly_kleinian, local_quiver,
    maximal_isotropic, positive_roots_up_to, quadruple_to_quiver, solve_multistart,
    stratum_fiber_bound, ConjugacyClass, DimVector, Error, Quadruple, Quiver, SigmaAnalysis,
    SolverConfig, Weight,
};

use crate::output::{float, int_matrix_rows, list, matrix_rows, pair, Format, Printer};
use crate::{Cli, Command, KpCommand, Point};

/// A failed run: usage and parse problems exit with 2, domain errors with 1.
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: quiverlab::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn flag<T>(name: &str, r: quiverlab::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { msg, .. } => Failure::Usage(format!("--{name}: {msg}")),
        e => Failure::Usage(format!("--{name}: {e}")),
    })
}

fn load_quiver(path: &Path) -> Result<Quiver, Failure> {
    in_file(path, parse_quiver(&read(path)?))
}

fn load_class(path: &Path) -> Result<ConjugacyClass, Failure> {
    in_file(path, parse_class(&read(path)?))
}

/// Quiver, α and λ with the vector lengths checked against the vertex count.
fn load_point(p: &Point) -> Result<(Quiver, DimVector, Weight), Failure> {
    let q = load_quiver(&p.quiver)?;
    let n = q.vertex_count();
    let alpha = flag("alpha", parse_dim_vector(&p.alpha))?;
    let lambda = match &p.lambda {
        Some(s) => flag("lambda", parse_weight(s))?,
        None => Weight::zeros(n),
    };
    for (name, len) in [("alpha", alpha.len()), ("lambda", lambda.len())] {
        if len != n {
            return Err(Failure::Usage(format!(
                "--{name} has {len} entries, the quiver has {n} vertices"
            )));
        }
    }
    Ok((q, alpha, lambda))
}

fn quiver_pairs(prefix: &str, q: &Quiver) -> Vec<(String, String)> {
    let names = q.vertex_names();
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}->{}", names[a.tail], names[a.head]))
        .collect();
    vec![
        pair(format!("{prefix}vertices"), names.join(" ")),
        pair(format!("{prefix}arrows"), arrows.join(" ")),
    ]
}

fn matrix_block(out: &mut Printer, key: &str, rows: &[String]) {
    out.line(format!("{key}:"));
    for (i, r) in rows.iter().enumerate() {
        out.line(format!("  {r}"));
        out.kv(format!("{key}.{}", i + 1), r);
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let mut out = Printer::new(cli.format);
    match &cli.command {
        Command::Roots { quiver, bound } => roots(&mut out, quiver, bound)?,
        Command::Sigma(p) => sigma(&mut out, p)?,
        Command::Types(p) => types(&mut out, p)?,
        Command::Local { point, index } => local(&mut out, point, *index)?,
        Command::Report(p) => report(&mut out, p)?,
        Command::Darboux { file } => darboux_cmd(&mut out, file)?,
        Command::Solve {
            point,
            seed,
            starts,
        } => solve(&mut out, point, *seed, *starts)?,
        Command::Kp(KpCommand::Class { file }) => kp_class(&mut out, file)?,
        Command::Kp(KpCommand::Star { files }) => kp_star(&mut out, files)?,
        Command::Kp(KpCommand::Legs { quiver, classes }) => kp_legs(&mut out, quiver, classes)?,
    }
    Ok(out.finish())
}

fn roots(out: &mut Printer, path: &Path, bound: &str) -> Result<(), Failure> {
    let q = load_quiver(path)?;
    let bound = flag("bound", parse_dim_vector(bound))?;
    if bound.len() != q.vertex_count() {
        return Err(Failure::Usage(format!(
            "--bound has {} entries, the quiver has {} vertices",
            bound.len(),
            q.vertex_count()
        )));
    }
    let roots = positive_roots_up_to(&q, &bound)?;
    for (k, (v, class)) in roots.entries().iter().enumerate() {
        let qv = q.q(v)?;
        out.line(format!("{v} {} {qv}", class.tag));
        out.kv(format!("root.{}", k + 1), format!("{v} {} {qv}", class.tag));
    }
    out.kv("count", roots.len().to_string());
    Ok(())
}

fn sigma(out: &mut Printer, p: &Point) -> Result<(), Failure> {
    let (q, alpha, lambda) = load_point(p)?;
    let analysis = SigmaAnalysis::new(&q, &lambda, &alpha)?;
    let verdict = analysis.verdict();
    let mut rows = vec![
        pair("in_r_lambda", verdict.in_r_lambda),
        pair("in_sigma", verdict.in_sigma),
    ];
    if let Some(d) = &verdict.violation {
        rows.push(pair("violation", d));
    }
    rows.push(pair("nonempty", analysis.is_nonempty()));
    rows.push(pair("dim", analysis.dimension(&q)));
    out.record(&rows);
    Ok(())
}

fn types(out: &mut Printer, p: &Point) -> Result<(), Failure> {
    let (q, alpha, lambda) = load_point(p)?;
    let types = enumerate_rep_types(&q, &lambda, &alpha)?;
    // the dichotomy is only claimed for α ∈ Σ_0 outside the nearly Kleinian cases
    let dichotomy = lambda.is_zero()
        && quiverlab::in_sigma(&q, &lambda, &alpha)?
        && matches!(is_nearly_kleinian(&q, &alpha), Ok(NearlyKleinian::No));
    for (k, t) in types.iter().enumerate() {
        let key = format!("type.{}", k + 1);
        let mut rows = vec![
            pair(&key, t),
            pair(format!("{key}.stratum_dim"), t.stratum_dim(&q)),
        ];
        if lambda.is_zero() {
            rows.push(pair(
                format!("{key}.fiber_bound"),
                stratum_fiber_bound(&q, t)?,
            ));
        }
        if dichotomy {
            rows.push(pair(
                format!("{key}.dichotomy"),
                normality_dichotomy(&q, &alpha, t)?,
            ));
        }
        out.record(&rows);
    }
    out.kv("count", types.len().to_string());
    Ok(())
}

fn local(out: &mut Printer, p: &Point, index: Option<usize>) -> Result<(), Failure> {
    let (q, alpha, lambda) = load_point(p)?;
    let types = enumerate_rep_types(&q, &lambda, &alpha)?;
    if let Some(i) = index {
        if i == 0 || i > types.len() {
            return Err(Failure::Usage(format!(
                "--type {i} is out of range 1..={}",
                types.len()
            )));
        }
    }
    for (k, t) in types.iter().enumerate() {
        if index.is_some_and(|i| i != k + 1) {
            continue;
        }
        let key = format!("type.{}", k + 1);
        let data = local_quiver(&q, t)?;
        let mut rows = vec![pair(&key, t), pair(format!("{key}.kappa"), &data.kappa)];
        rows.extend(quiver_pairs(&format!("{key}."), &data.quiver));
        out.record(&rows);
        matrix_block(
            out,
            &format!("{key}.L"),
            &int_matrix_rows(&data.doubled_counts),
        );
    }
    Ok(())
}

fn report(out: &mut Printer, p: &Point) -> Result<(), Failure> {
    let (q, alpha, lambda) = load_point(p)?;
    let r = geometry_report(&q, &lambda, &alpha)?;
    let rows: Vec<(String, String)> = r
        .key_values()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    out.record(&rows);
    Ok(())
}

fn darboux_cmd(out: &mut Printer, path: &Path) -> Result<(), Failure> {
    let file = in_file(path, parse_quadruple(&read(path)?))?;
    let quad = Quadruple::new(file.module, file.omega, file.trace)?;
    let s = maximal_isotropic(&quad.module, &quad.form);
    let d = darboux(&quad.module, &quad.form, &s)?;
    out.record(&[
        pair("dim", quad.module.dim()),
        pair("lagrangian_dim", s.dim()),
        pair("corrected", d.corrected()),
        pair("certified", d.is_certified(&quad.form)),
    ]);
    matrix_block(out, "certificate", &matrix_rows(&d.certificate));
    let (q, alpha, lambda) = quadruple_to_quiver(&quad)?;
    let mut rows = quiver_pairs("quiver.", &q);
    rows.push(pair("alpha", alpha));
    rows.push(pair("lambda", lambda));
    out.record(&rows);
    Ok(())
}

fn solve(out: &mut Printer, p: &Point, seed: u64, starts: usize) -> Result<(), Failure> {
    let (q, alpha, lambda) = load_point(p)?;
    if starts == 0 {
        return Err(Failure::Usage("--starts must be positive".into()));
    }
    let cfg = SolverConfig::default();
    let sol = solve_multistart(&q, &alpha, &lambda, seed, starts, &cfg)?;
    let tangent = fiber_tangent_dim(&q, &alpha, &lambda, &sol.x, &cfg)?;
    let mut rows = vec![
        pair("residual", float(sol.residual)),
        pair("iterations", sol.iterations),
        pair("start", sol.start + 1),
        pair("tangent_dim", tangent),
    ];
    if quiverlab::in_sigma(&q, &lambda, &alpha)? {
        rows.push(pair("predicted_dim", predicted_fiber_dim(&q, &alpha)?));
    } else {
        rows.push(pair("predicted_dim", "n/a (alpha not in Sigma_lambda)"));
    }
    out.record(&rows);
    if out.format() == Format::Kv {
        for (i, v) in sol.x.flatten().iter().enumerate() {
            out.kv(format!("x.{}", i + 1), float(*v));
        }
    }
    Ok(())
}

fn verdict_rows(
    q: &Quiver,
    lambda: &Weight,
    alpha: &DimVector,
) -> Result<Vec<(String, String)>, Failure> {
    let analysis = SigmaAnalysis::new(q, lambda, alpha)?;
    Ok(vec![
        pair("in_sigma", analysis.verdict().in_sigma),
        pair("nonempty", analysis.is_nonempty()),
        pair("dim", dim_N(q, lambda, alpha)?),
    ])
}

fn kp_class(out: &mut Printer, path: &Path) -> Result<(), Failure> {
    let c = load_class(path)?;
    let cd = chain_data(&c);
    let xi: Vec<String> = cd.xi.iter().map(format_rational).collect();
    let mut rows = vec![
        pair("class", &c),
        pair("t", cd.t),
        pair("xi", xi.join(",")),
        pair("ranks", list(&cd.ranks)),
        pair("jumps", list(&cd.jumps)),
        pair("class_dim", class_dim(&c)),
    ];
    let data = class_to_quiver(&c)?;
    rows.extend(quiver_pairs("quiver.", &data.quiver));
    rows.push(pair("alpha", &data.alpha));
    rows.push(pair("lambda", &data.lambda));
    rows.push(pair("two_p", 2 * data.quiver.p(&data.alpha)?));
    rows.extend(verdict_rows(&data.quiver, &data.lambda, &data.alpha)?);
    out.record(&rows);
    Ok(())
}

fn kp_star(out: &mut Printer, files: &[std::path::PathBuf]) -> Result<(), Failure> {
    let classes = files
        .iter()
        .map(|f| load_class(f))
        .collect::<Result<Vec<_>, _>>()?;
    let star = classes_to_star(&classes)?;
    let d = &star.data;
    let mut rows = quiver_pairs("quiver.", &d.quiver);
    rows.push(pair("alpha", &d.alpha));
    rows.push(pair("lambda", &d.lambda));
    rows.push(pair("trace_sum", format_rational(&star.trace_sum)));
    rows.push(pair("trace_condition", star.trace_condition()));
    rows.extend(verdict_rows(&d.quiver, &d.lambda, &d.alpha)?);
    out.record(&rows);
    Ok(())
}

fn kp_legs(out: &mut Printer, path: &Path, files: &[std::path::PathBuf]) -> Result<(), Failure> {
    let q = load_quiver(path)?;
    let classes = files
        .iter()
        .map(|f| load_class(f))
        .collect::<Result<Vec<_>, _>>()?;
    if classes.len() != q.vertex_count() {
        return Err(Failure::Usage(format!(
            "{} class files given, the quiver has {} vertices",
            classes.len(),
            q.vertex_count()
        )));
    }
    let alpha = DimVector::new(classes.iter().map(|c| c.size() as i64).collect())?;
    let d = attach_legs(&q, &alpha, &classes)?;
    let mut rows = quiver_pairs("quiver.", &d.quiver);
    rows.push(pair("alpha", &d.alpha));
    rows.push(pair("lambda", &d.lambda));
    rows.extend(verdict_rows(&d.quiver, &d.lambda, &d.alpha)?);
    out.record(&rows);
    Ok(())
}
