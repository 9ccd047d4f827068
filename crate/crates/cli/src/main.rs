mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use deformlab::algebra::{is_idempotent, Algebra, LinearMap};
use deformlab::deformation::{
    check_deformation_equation, extend, obstruction, push_out_infinitesimal, trivialize, universal_infinitesimal,
    FormalDeformation, Trivialization,
};
use deformlab::degeneration::{conjugate_family, limit_at_zero, phi_degeneration, Limit, ParamLinearMap};
use deformlab::hochschild::{cohomology, gerstenhaber_bracket, is_coboundary, Cochain};
use deformlab::variety::{
    building_blocks, census_alg2, find_unity, idempotent_continuation, idempotent_search, rigidity_report,
    SearchStrategy,
};
use deformlab::{json as wire, scalar, Error, Scalar};

use render::{cochain_text, table, vector_text};

const DEFAULT_MAX_DIM: usize = 8;

/// Exact deformation theory of finite-dimensional associative algebras.
#[derive(Parser)]
#[command(name = "deformlab", version)]
struct Cli {
    /// Emit JSON reports instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Associativity and unity of an algebra.
    Check { algebra: PathBuf },
    /// Hochschild cohomology dimensions and H^d representatives.
    Cohomology {
        algebra: PathBuf,
        /// A single degree; degrees 0 to 3 when omitted.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Formal deformations.
    Deform {
        #[command(subcommand)]
        action: DeformAction,
    },
    /// Limit of f_t · A at t = 0, or the φ + t·id degeneration.
    Degenerate {
        /// Parametrized map f_t (polynomial entries).
        #[arg(long, required_unless_present = "phi", conflicts_with = "phi")]
        map: Option<PathBuf>,
        /// Constant map φ, degenerating along φ + t·id.
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Treat poles as a failure.
        #[arg(long)]
        strict: bool,
        algebra: PathBuf,
    },
    /// Rigidity diagnostics.
    Rigidity { algebra: PathBuf },
    /// Dimension-2 census, or building blocks for larger dimensions.
    Census {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Gerstenhaber bracket of two cochains.
    Bracket {
        left: PathBuf,
        right: PathBuf,
        /// Also decide whether the bracket is a coboundary of this algebra.
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Idempotent search on an algebra, or continuation along a deformation
    /// when --start is given.
    Idempotents {
        input: PathBuf,
        /// Comma-separated idempotent of the base algebra.
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum DeformAction {
    /// Check the deformation equation at every order.
    Check { deformation: PathBuf },
    /// Extend order by order up to --order.
    Extend {
        #[arg(long)]
        order: usize,
        deformation: PathBuf,
    },
    /// Conjugate away coboundaries up to --order; terms past the file's
    /// order are taken to be zero.
    Trivialize {
        #[arg(long)]
        order: Option<usize>,
        deformation: PathBuf,
    },
    /// The obstruction to extending by one order.
    Obstruction { deformation: PathBuf },
    /// The universal infinitesimal deformation.
    Universal { algebra: PathBuf },
    /// Push the universal infinitesimal deformation out along coefficients.
    PushOut {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<String>,
        algebra: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
    detail: Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
            detail: Value::Null,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::DegreeMismatch { .. } => 2,
            _ => 1,
        };
        let detail = match &e {
            Error::ConditionFails { residual } => json!({ "residual": residual.as_ref() }),
            Error::FailureAtOrder { order, obstruction } => {
                json!({ "order": order, "obstruction": obstruction.as_ref() })
            }
            Error::PrefixInvalid { order } | Error::SingularLinearization { order } => json!({ "order": order }),
            _ => Value::Null,
        };
        Failure {
            code,
            message: e.to_string(),
            detail,
        }
    }
}

/// A finished report. `code` is nonzero when the report itself is a
/// domain-level negative answer.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { text, json, code: 0 }
    }

    /// Artifacts print as JSON in both modes so they can be fed back in.
    fn artifact(value: Value) -> Report {
        let text = pretty(&value);
        Report::ok(text, value)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

struct Context {
    max_dim: usize,
    seed: u64,
}

impl Context {
    fn from_env(seed: u64) -> Result<Context, Failure> {
        let max_dim = match std::env::var("DEFORMLAB_MAX_DIM") {
            Ok(v) => match v.parse::<usize>() {
                Ok(n) if n > 0 => n,
                _ => return Err(Failure::usage(format!("DEFORMLAB_MAX_DIM must be a positive integer, got {v:?}"))),
            },
            Err(_) => DEFAULT_MAX_DIM,
        };
        Ok(Context { max_dim, seed })
    }

    fn cap(&self, dim: usize) -> Result<(), Failure> {
        if dim > self.max_dim {
            return Err(Failure::usage(format!(
                "dimension {dim} exceeds DEFORMLAB_MAX_DIM = {}",
                self.max_dim
            )));
        }
        Ok(())
    }

    /// Parse `path`, refusing inputs above the dimension cap before any
    /// tensor of that size is built.
    fn read<T: for<'de> serde::Deserialize<'de>>(&self, path: &Path) -> Result<T, Failure> {
        let bad = |e: &dyn std::fmt::Display| Failure::usage(format!("{}: {e}", path.display()));
        let s = std::fs::read_to_string(path).map_err(|e| bad(&e))?;
        let raw: Value = serde_json::from_str(&s).map_err(|e| bad(&e))?;
        let dim = raw["dim"]
            .as_u64()
            .or_else(|| raw["base"]["dim"].as_u64())
            .or_else(|| raw.as_array().map(|a| a.len() as u64));
        if let Some(d) = dim {
            self.cap(usize::try_from(d).unwrap_or(usize::MAX))?;
        }
        wire::from_str(&s).map_err(|e| bad(&e))
    }

    fn algebra(&self, path: &Path) -> Result<Algebra, Failure> {
        let a: Algebra = self.read(path)?;
        self.cap(a.dim())?;
        Ok(a)
    }

    fn cochain(&self, path: &Path) -> Result<Cochain, Failure> {
        let c: Cochain = self.read(path)?;
        self.cap(c.dim())?;
        Ok(c)
    }

    fn deformation(&self, path: &Path) -> Result<FormalDeformation, Failure> {
        let d: FormalDeformation = self.read(path)?;
        self.cap(d.dim())?;
        Ok(d)
    }
}

fn parse_scalars(items: &[String]) -> Result<Vec<Scalar>, Failure> {
    items
        .iter()
        .map(|s| scalar::parse(s.trim()).map_err(Failure::from))
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let cx = Context::from_env(cli.seed)?;
    match cli.verb {
        Verb::Check { algebra } => check(&cx.algebra(&algebra)?),
        Verb::Cohomology { algebra, degree } => cohomology_report(&cx.algebra(&algebra)?, degree),
        Verb::Deform { action } => deform(&cx, action),
        Verb::Degenerate {
            map,
            phi,
            strict,
            algebra,
        } => {
            let alg = cx.algebra(&algebra)?;
            match (map, phi) {
                (Some(map), _) => {
                    let f: ParamLinearMap = cx.read(&map)?;
                    degenerate_map(&f, &alg, strict)
                }
                (None, Some(phi)) => {
                    let phi: LinearMap = cx.read(&phi)?;
                    Ok(Report::artifact(to_value(&phi_degeneration(&phi, &alg)?)))
                }
                (None, None) => Err(Failure::usage("one of --map or --phi is required")),
            }
        }
        Verb::Rigidity { algebra } => rigidity(&cx.algebra(&algebra)?),
        Verb::Census { dim } => {
            cx.cap(dim)?;
            census(dim)
        }
        Verb::Bracket { left, right, algebra } => {
            let (f, h) = (cx.cochain(&left)?, cx.cochain(&right)?);
            let b = gerstenhaber_bracket(&f, &h)?;
            match algebra {
                None => Ok(Report::artifact(to_value(&b))),
                Some(path) => {
                    let alg = cx.algebra(&path)?;
                    alg.require_associative()?;
                    let primitive = is_coboundary(&alg, &b)?;
                    let text = format!(
                        "bracket:\n{}coboundary: {}\n",
                        cochain_text(&b),
                        yes_no(primitive.is_some())
                    );
                    let json = json!({ "bracket": b, "coboundary": primitive.is_some(), "primitive": primitive });
                    Ok(Report::ok(text, json))
                }
            }
        }
        Verb::Idempotents { input, start, order } => match start {
            None => idempotents(&cx, &cx.algebra(&input)?),
            Some(start) => continuation(&cx.deformation(&input)?, &parse_scalars(&start)?, order),
        },
    }
}

fn check(alg: &Algebra) -> Result<Report, Failure> {
    let associative = alg.is_associative();
    let unity = find_unity(alg);
    let text = format!("associative: {}, unity: {}\n", yes_no(associative), yes_no(unity.is_some()));
    let json = json!({
        "dim": alg.dim(),
        "associative": associative,
        "unity": unity.is_some(),
        "unity_vector": unity.map(|u| u.iter().map(scalar::format).collect::<Vec<_>>()),
    });
    Ok(Report {
        text,
        json,
        code: if associative { 0 } else { 1 },
    })
}

fn cohomology_report(alg: &Algebra, degree: Option<usize>) -> Result<Report, Failure> {
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=3).collect(),
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut reps_text = String::new();
    for d in degrees {
        let h = cohomology(alg, d)?;
        rows.push(vec![d.to_string(), h.dim_z.to_string(), h.dim_b.to_string(), h.dim_h.to_string()]);
        for (i, r) in h.representatives.iter().enumerate() {
            reps_text.push_str(&format!("H^{d} representative {i}:\n{}", cochain_text(r)));
        }
        entries.push(json!({
            "degree": d,
            "dim_z": h.dim_z,
            "dim_b": h.dim_b,
            "dim_h": h.dim_h,
            "representatives": h.representatives,
        }));
    }
    let text = table(&["degree", "dim Z", "dim B", "dim H"], &rows) + &reps_text;
    Ok(Report::ok(text, json!({ "cohomology": entries })))
}

fn deform(cx: &Context, action: DeformAction) -> Result<Report, Failure> {
    match action {
        DeformAction::Check { deformation } => {
            let def = cx.deformation(&deformation)?;
            let report = check_deformation_equation(&def);
            let rows: Vec<Vec<String>> = report
                .orders
                .iter()
                .map(|o| {
                    vec![
                        o.order.to_string(),
                        yes_no(o.holds()).into(),
                        yes_no(o.routes_agree()).into(),
                    ]
                })
                .collect();
            let holds = report.all_hold();
            let orders: Vec<Value> = report
                .orders
                .iter()
                .map(|o| json!({ "order": o.order, "holds": o.holds(), "routes_agree": o.routes_agree(), "residual": o.residual }))
                .collect();
            Ok(Report {
                text: table(&["order", "holds", "routes agree"], &rows),
                json: json!({ "holds": holds, "orders": orders }),
                code: if holds { 0 } else { 1 },
            })
        }
        DeformAction::Extend { order, deformation } => {
            let def = cx.deformation(&deformation)?;
            Ok(Report::artifact(to_value(&extend(&def, order)?)))
        }
        DeformAction::Trivialize { order, deformation } => {
            let def = cx.deformation(&deformation)?;
            let max = order.unwrap_or(def.order());
            let def = def.with_order(def.order().max(max));
            match trivialize(&def, max)? {
                Trivialization::Trivial { isomorphism } => Ok(Report::ok(
                    format!("trivial through order {max}\nisomorphism:\n{}\n", pretty(&to_value(&isomorphism))),
                    json!({ "trivial": true, "isomorphism": isomorphism }),
                )),
                Trivialization::Obstructed { order, residual, class } => Ok(Report {
                    text: format!(
                        "obstructed at order {order}\nclass modulo B^2:\n{}residual:\n{}",
                        cochain_text(&class),
                        cochain_text(&residual)
                    ),
                    json: json!({ "trivial": false, "order": order, "class": class, "residual": residual }),
                    code: 1,
                }),
            }
        }
        DeformAction::Obstruction { deformation } => {
            let def = cx.deformation(&deformation)?;
            let obs = obstruction(&def)?;
            let text = format!(
                "order {}: obstruction {}\n{}",
                obs.order,
                if obs.vanishes() { "vanishes" } else { "is not a coboundary" },
                cochain_text(&obs.cochain)
            );
            let json = json!({
                "order": obs.order,
                "vanishes": obs.vanishes(),
                "obstruction": obs.cochain,
                "particular": obs.solutions.as_ref().map(|s| &s.particular),
            });
            Ok(Report {
                text,
                json,
                code: if obs.vanishes() { 0 } else { 1 },
            })
        }
        DeformAction::Universal { algebra } => {
            let u = universal_infinitesimal(&cx.algebra(&algebra)?)?;
            let mut text = format!("dim H^2 = {}\n", u.dim_h2());
            for (i, r) in u.representatives.iter().enumerate() {
                text.push_str(&format!("direction {i}:\n{}", cochain_text(r)));
            }
            let json = json!({
                "dim_h2": u.dim_h2(),
                "representatives": u.representatives,
                "total_algebra": u.total_algebra(),
            });
            Ok(Report::ok(text, json))
        }
        DeformAction::PushOut { coeffs, algebra } => {
            let u = universal_infinitesimal(&cx.algebra(&algebra)?)?;
            let def = push_out_infinitesimal(&u, &parse_scalars(&coeffs)?)?;
            Ok(Report::artifact(to_value(&def)))
        }
    }
}

fn degenerate_map(f: &ParamLinearMap, alg: &Algebra, strict: bool) -> Result<Report, Failure> {
    match limit_at_zero(&conjugate_family(f, alg)?)? {
        Limit::Algebra(a) => Ok(Report::artifact(to_value(&a))),
        Limit::Poles(report) => {
            let rows: Vec<Vec<String>> = report
                .poles
                .iter()
                .map(|p| vec![p.i.to_string(), p.j.to_string(), p.k.to_string(), p.order.to_string()])
                .collect();
            Ok(Report {
                text: format!("no limit: poles at t = 0\n{}", table(&["i", "j", "k", "pole order"], &rows)),
                json: json!({ "limit": Value::Null, "poles": report.poles }),
                code: if strict { 1 } else { 0 },
            })
        }
    }
}

fn rigidity(alg: &Algebra) -> Result<Report, Failure> {
    let r = rigidity_report(alg)?;
    let mut text = table(
        &["dim", "dim Z2", "dim B2", "dim H2", "dim H3", "dim Der", "orbit dim"],
        &[vec![
            r.dim.to_string(),
            r.dim_z2.to_string(),
            r.dim_b2.to_string(),
            r.dim_h2.to_string(),
            r.dim_h3.to_string(),
            r.dim_der.to_string(),
            r.orbit_dim.to_string(),
        ]],
    );
    text.push_str(&format!("algebraically rigid: {}\n{}\n", yes_no(r.algebraically_rigid), r.verdict));
    for e in &r.sq_evidence {
        text.push_str(&format!(
            "Sq(representative {}) is a coboundary: {}\n",
            e.representative,
            yes_no(e.square_is_coboundary)
        ));
    }
    if let Some(w) = &r.witness {
        text.push_str(&format!("witness μ_1 (not in B^2):\n{}", cochain_text(w)));
    }
    for n in &r.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    Ok(Report::ok(text, to_value(&r)))
}

fn census(dim: usize) -> Result<Report, Failure> {
    if dim == 2 {
        let c = census_alg2()?;
        let rows: Vec<Vec<String>> = c
            .entries
            .iter()
            .map(|e| {
                let i = &e.invariants;
                vec![
                    e.id.clone(),
                    i.dim_der.to_string(),
                    i.dim_h2.to_string(),
                    i.idempotent_count.to_string(),
                    yes_no(i.unital).into(),
                    yes_no(e.rigid).into(),
                ]
            })
            .collect();
        let mut text = table(&["class", "dim Der", "dim H2", "idempotents", "unital", "rigid"], &rows);
        for d in &c.degenerations {
            text.push_str(&format!("degeneration {} -> {} via {}\n", d.from, d.to, serde_json::to_string(&d.map).expect("serializable")));
        }
        text.push_str(&format!("rigid algebras: {}\nirreducible components: {}\n", c.rigid_count, c.component_count));
        for n in &c.notes {
            text.push_str(&format!("note: {n}\n"));
        }
        return Ok(Report::ok(text, to_value(&c)));
    }
    let blocks = building_blocks(dim)?;
    let rows: Vec<Vec<String>> = blocks
        .iter()
        .map(|b| {
            vec![
                b.id.clone(),
                b.invariants.dim_der.to_string(),
                b.invariants.dim_h2.to_string(),
                b.invariants.idempotent_count.to_string(),
                yes_no(b.rigid).into(),
                yes_no(b.degenerates_to_null).into(),
            ]
        })
        .collect();
    let mut text = table(&["algebra", "dim Der", "dim H2", "idempotents", "rigid", "-> null"], &rows);
    text.push_str("building blocks only: these algebras need not exhaust the components\n");
    Ok(Report::ok(text, json!({ "dim": dim, "complete": false, "building_blocks": blocks })))
}

fn idempotents(cx: &Context, alg: &Algebra) -> Result<Report, Failure> {
    let strategy = SearchStrategy {
        seed: cx.seed,
        ..SearchStrategy::default()
    };
    let s = idempotent_search(alg, &strategy)?;
    let mut text = String::new();
    for v in &s.idempotents {
        text.push_str(&vector_text(v));
        text.push('\n');
    }
    text.push_str(&format!(
        "{} idempotents found, {} linearly independent (search is not exhaustive)\n",
        s.idempotents.len(),
        s.independent
    ));
    Ok(Report::ok(text, to_value(&s)))
}

fn continuation(def: &FormalDeformation, x0: &[Scalar], order: usize) -> Result<Report, Failure> {
    if x0.len() != def.dim() {
        return Err(Error::DimensionMismatch {
            expected: def.dim(),
            found: x0.len(),
        }
        .into());
    }
    if !is_idempotent(def.base(), x0) {
        return Err(Failure::usage("--start is not an idempotent of the base algebra"));
    }
    let xs = idempotent_continuation(def, x0, order)?;
    let mut text = String::new();
    for (k, x) in xs.iter().enumerate() {
        text.push_str(&format!("X_{k} = {}\n", vector_text(x)));
    }
    let terms: Vec<Vec<String>> = xs.iter().map(|x| x.iter().map(scalar::format).collect()).collect();
    Ok(Report::ok(text, json!({ "order": order, "terms": terms })))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(r) => {
            let mut out = if as_json { pretty(&r.json) } else { r.text };
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // A closed pipe is not an error of the computation.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(r.code)
        }
        Err(f) => {
            if as_json {
                let out = pretty(&json!({ "error": f.message, "detail": f.detail })) + "\n";
                let _ = std::io::stdout().lock().write_all(out.as_bytes());
            } else {
                eprintln!("error: {}", f.message);
                if !f.detail.is_null() {
                    eprintln!("{}", pretty(&f.detail));
                }
            }
            ExitCode::from(f.code)
        }
    }
}
