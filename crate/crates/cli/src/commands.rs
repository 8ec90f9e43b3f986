use std::io::Write;
use std::sync::Arc;

use degseq_core::asymptotics::{self, error_envelope, FormulaResult, PiRhoParams, PiRhoVariant};
use degseq_core::exact::{Counter, PairConstraint};
use degseq_core::graphical::{is_graphical_with, GraphicalMode};
use degseq_core::models::{self, ModelKind, ModelSpec, Statistic};
use degseq_core::operators::{
    iterate_fixed_point, DomainLadder, Domain, EdgeFn, ExactP, FixedPointReport, FormulaP, OperatorConfig, PKind,
    PairSelection, Scaled,
};
use degseq_core::scalar::Scalar;
use degseq_core::{DegreeSequence, Exec};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::*;
use crate::{experiment, CliError, CliResult, Output};

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

pub(crate) fn read_seq(seq: &Option<String>, file: &Option<std::path::PathBuf>) -> CliResult<DegreeSequence> {
    match (seq, file) {
        (Some(s), None) => DegreeSequence::parse(s).map_err(parse_err),
        (None, Some(f)) => DegreeSequence::from_file(f).map_err(parse_err),
        _ => Err(CliError::Parse("give exactly one of --seq and --seq-file".into())),
    }
}

/// 1-based labels separated by `,` or `-`, converted to 0-based indices.
fn vertices(s: &str, want: usize, n: usize) -> CliResult<Vec<usize>> {
    let out: Vec<usize> = s
        .split([',', '-'])
        .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err(format!("bad vertex {t:?} in {s:?}"))))
        .collect::<CliResult<_>>()?;
    if out.len() != want {
        return Err(parse_err(format!("expected {want} vertices in {s:?}")));
    }
    if let Some(&bad) = out.iter().find(|&&v| v == 0 || v > n) {
        return Err(parse_err(format!("vertex {bad} outside 1..={n}")));
    }
    Ok(out.into_iter().map(|v| v - 1).collect())
}

fn constraint(args: &SeqConstraintArgs, n: usize) -> CliResult<PairConstraint> {
    let mut c = PairConstraint::complete(n);
    for f in &args.forbid {
        let v = vertices(f, 2, n)?;
        c = c.forbid(v[0], v[1]).map_err(parse_err)?;
    }
    for f in &args.force {
        let v = vertices(f, 2, n)?;
        c = c.force(v[0], v[1]).map_err(parse_err)?;
    }
    Ok(c)
}

fn seq_with_constraint(args: &SeqConstraintArgs) -> CliResult<(DegreeSequence, PairConstraint)> {
    let d = read_seq(&args.seq.seq, &args.seq.seq_file)?;
    let c = constraint(args, d.n())?;
    Ok((d, c))
}

fn rational(x: &BigRational) -> Value {
    json!({"exact": x.to_string(), "value": x.to_f64()})
}

fn model_kind(m: Model) -> ModelKind {
    match m {
        Model::Gnm => ModelKind::Gnm,
        Model::Gnp => ModelKind::Gnp,
        Model::Bp => ModelKind::Bp,
        Model::Bm => ModelKind::Bm,
        Model::Ep => ModelKind::Ep,
        Model::EpPrime => ModelKind::EpPrime,
        Model::Bhatp => ModelKind::Bhatp,
    }
}

fn spec(model: Model, p: &ModelArgs, seed: u64) -> CliResult<ModelSpec> {
    let s = ModelSpec {
        kind: model_kind(model),
        n: p.n,
        m: p.m,
        p: p.p,
        seed,
    };
    s.validate().map_err(parse_err)?;
    Ok(s)
}

fn variant(v: Variant) -> PiRhoVariant {
    match v {
        Variant::Section7 => PiRhoVariant::Section7,
        Variant::Appendix => PiRhoVariant::Appendix,
    }
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).map_err(|e| CliError::Io(e.to_string()))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub(crate) fn dispatch(cli: &Cli, exec: Exec) -> CliResult<Output> {
    let counter = || Counter::with_cap(cli.cap);
    match &cli.command {
        Command::Count(a) => {
            let (d, c) = seq_with_constraint(a)?;
            let count = counter().count(&d, &c)?;
            Ok(Output::json(json!({"seq": d.degrees(), "count": count.to_string()})))
        }
        Command::Prob(a) => {
            let (d, c) = seq_with_constraint(&a.base)?;
            let v = vertices(&a.pair, 2, d.n())?;
            if v[0] == v[1] {
                return Err(parse_err("an edge needs two distinct vertices"));
            }
            let p = counter().edge_prob(&d, v[0], v[1], &c)?;
            Ok(Output::json(json!({"seq": d.degrees(), "pair": [v[0] + 1, v[1] + 1], "prob": rational(&p)})))
        }
        Command::Pathprob(a) => {
            let (d, c) = seq_with_constraint(&a.base)?;
            let v = vertices(&a.path, 3, d.n())?;
            let p = counter().path_prob(&d, v[0], v[1], v[2], &c).map_err(|e| match e {
                degseq_core::Error::InvalidInput(m) => CliError::Parse(m),
                other => other.into(),
            })?;
            Ok(Output::json(json!({"seq": d.degrees(), "path": [v[0] + 1, v[1] + 1, v[2] + 1], "prob": rational(&p)})))
        }
        Command::Ratio(a) => {
            let (d, c) = seq_with_constraint(&a.base)?;
            let v = vertices(&a.pair, 2, d.n())?;
            let r = counter().ratio(&d, v[0], v[1], &c)?;
            Ok(Output::json(json!({"seq": d.degrees(), "pair": [v[0] + 1, v[1] + 1], "ratio": rational(&r)})))
        }
        Command::Graphical(a) => {
            let d = read_seq(&a.seq.seq, &a.seq.seq_file)?;
            let mode = match a.mode {
                GraphicalKind::Eg => GraphicalMode::ErdosGallai,
                GraphicalKind::Koren => GraphicalMode::Koren,
            };
            Ok(Output::json(json!({"seq": d.degrees(), "graphical": is_graphical_with(&d, mode)})))
        }
        Command::Asym(a) => asym(a),
        Command::Fixpoint(a) => fixpoint(cli, a, exec),
        Command::Sample(a) => sample(cli, a, exec),
        Command::Compare(a) => {
            let stat: Statistic = a.statistic.parse().map_err(parse_err)?;
            let sa = spec(a.model_a, &a.params, cli.seed)?;
            let sb = spec(a.model_b, &a.params, cli.seed.wrapping_add(1))?;
            let r = models::compare(&sa, &sb, stat, a.samples, a.bootstrap, exec)?;
            let key = |k: &Vec<u32>| k.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            let rows = r
                .dist_a
                .iter()
                .map(|(k, f)| vec!["a".into(), key(k), f.to_string()])
                .chain(r.dist_b.iter().map(|(k, f)| vec!["b".into(), key(k), f.to_string()]))
                .collect::<Vec<_>>();
            let mut out = Output::json(serde_json::to_value(&r).expect("serializable"));
            out.csv = Some(csv_rows(&["model", "value", "frequency"], rows)?);
            Ok(out)
        }
        Command::Concentration(a) => {
            let s = spec(a.model, &a.params, cli.seed)?;
            let r = models::sigma_concentration(&s, a.samples, a.alpha, exec)?;
            Ok(Output::json(serde_json::to_value(&r).expect("serializable")))
        }
        Command::Table(a) => {
            let t = models::exact_vs_formula(a.n, a.m, &counter(), exec)?;
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.class.to_string(),
                        r.permutations.to_string(),
                        r.count.clone(),
                        r.exact_class_prob.to_string(),
                        r.exact_class_prob_f64.to_string(),
                        r.exact_prob.to_string(),
                        opt(r.formula),
                        opt(r.ratio),
                    ]
                })
                .collect::<Vec<_>>();
            let mut value = serde_json::to_value(&t).expect("serializable");
            for (row, r) in value["rows"].as_array_mut().expect("rows").iter_mut().zip(&t.rows) {
                row["exact_class_prob"] = Value::String(r.exact_class_prob.to_string());
            }
            let mut out = Output::json(value);
            out.csv = Some(csv_rows(
                &["class", "permutations", "count", "class_prob", "class_prob_f64", "prob", "formula", "ratio"],
                rows,
            )?);
            Ok(out)
        }
        Command::Experiment(a) => experiment::run(cli, a),
    }
}

fn formula_value(f: FormulaResult) -> Value {
    let log = f.log_value.is_finite().then_some(f.log_value);
    json!({"log_value": log, "value": f.value})
}

fn plain_value(x: f64) -> Value {
    let log = (x > 0.0).then(|| x.ln());
    json!({"log_value": log, "value": x})
}

fn asym(a: &AsymArgs) -> CliResult<Output> {
    if let Formula::Regular = a.formula {
        let (n, d) = match (a.n, a.d) {
            (Some(n), Some(d)) => (n, d),
            _ => return Err(parse_err("--formula regular needs --n and --d")),
        };
        let mut v = formula_value(asymptotics::regular_count_formula(n, d)?);
        v["formula"] = json!("regular");
        v["envelope"] = Value::Null;
        return Ok(Output::json(v));
    }
    let d = read_seq(&a.seq, &a.seq_file)?;
    let pair = a.pair.as_deref().map(|p| vertices(p, 2, d.n())).transpose()?;
    let need_pair = || pair.clone().ok_or_else(|| parse_err("this formula needs --pair a,b"));
    let mut v = match a.formula {
        Formula::Binom => formula_value(asymptotics::binom_model_prob(&d)?),
        Formula::H => formula_value(asymptotics::h_formula(&d)?),
        Formula::Conj => match &pair {
            Some(p) => plain_value(asymptotics::conj_ratio(&d, p[0], p[1])?),
            None => formula_value(asymptotics::conjectured_count(&d)?),
        },
        Formula::Pgr => {
            let p = need_pair()?;
            plain_value(asymptotics::pgr(&d, p[0], p[1])?)
        }
        Formula::Rgr => {
            let p = need_pair()?;
            plain_value(asymptotics::rgr(&d, p[0], p[1])?)
        }
        Formula::Edge => {
            let p = need_pair()?;
            plain_value(asymptotics::edge_prob_formula(&d, p[0], p[1])?)
        }
        Formula::Sparse => {
            let p = need_pair()?;
            let mut v = plain_value(asymptotics::sparse_edge_prob(&d, p[0], p[1])?);
            v["ratio"] = json!(asymptotics::sparse_ratio(&d, p[0], p[1]).ok());
            v
        }
        Formula::Pi => {
            let p = need_pair()?;
            plain_value(asymptotics::pi(variant(a.variant), &PiRhoParams::of(&d, p[0], p[1])?)?)
        }
        Formula::Rho => {
            let p = need_pair()?;
            plain_value(asymptotics::rho(variant(a.variant), &PiRhoParams::of(&d, p[0], p[1])?)?)
        }
        Formula::Regular => unreachable!(),
    };
    v["formula"] = serde_json::to_value(a.formula).expect("serializable");
    v["seq"] = json!(d.degrees());
    v["envelope"] = error_envelope(&d, a.k0, a.epsilon)
        .ok()
        .map(|e| serde_json::to_value(e).expect("serializable"))
        .unwrap_or(Value::Null);
    Ok(Output::json(v))
}

fn fixpoint_run<S: Scalar>(
    p0: EdgeFn<S>,
    scale: Option<S>,
    a: &FixpointArgs,
    cfg: &OperatorConfig,
    ladder: &DomainLadder,
    exec: Exec,
) -> CliResult<FixedPointReport> {
    let companion = scale.map(|s| Arc::new(Scaled::new(p0.clone(), s)) as EdgeFn<S>);
    let selection = match a.pairs {
        Pairs::All => PairSelection::All,
        Pairs::Classes => PairSelection::ClassRepresentatives,
    };
    let (_, report) = iterate_fixed_point(p0, companion, a.steps, cfg, ladder, &selection, exec)?;
    Ok(report)
}

fn fixpoint(cli: &Cli, a: &FixpointArgs, exec: Exec) -> CliResult<Output> {
    let root = DegreeSequence::parse(&a.root).map_err(parse_err)?;
    let cfg = OperatorConfig::new(root.n(), a.k0).map_err(parse_err)?;
    if !(a.scale.is_finite() && a.scale > 0.0) {
        return Err(parse_err("--scale must be positive"));
    }
    let radius = a.steps as u64 * cfg.step_radius() + a.margin;
    let ladder = if a.literal {
        DomainLadder::literal(root.clone(), radius)
    } else {
        DomainLadder::new(root.clone(), radius)
    };
    let domain = Some(Domain::new(root.clone(), radius));
    let with_companion = a.scale != 1.0;
    let report = match a.init {
        Init::Pgr | Init::Pi => {
            let kind = match a.init {
                Init::Pgr => PKind::Pgr,
                _ => PKind::Pi(variant(a.variant)),
            };
            let p0: EdgeFn<f64> = Arc::new(FormulaP::new(kind, domain));
            fixpoint_run(p0, with_companion.then_some(a.scale), a, &cfg, &ladder, exec)?
        }
        Init::Exact => {
            let counter = Arc::new(Counter::with_cap(cli.cap));
            if root.n() > counter.cap() {
                return Err(degseq_core::Error::Capacity { n: root.n(), cap: counter.cap() }.into());
            }
            let p0: EdgeFn<BigRational> = Arc::new(ExactP::new(counter, cfg.constraint.clone()));
            let scale = BigRational::from_float(a.scale).expect("finite");
            fixpoint_run(p0, with_companion.then_some(scale), a, &cfg, &ladder, exec)?
        }
    };
    let rows = report
        .steps
        .iter()
        .map(|s| vec![s.step.to_string(), s.chi_to_previous.to_string(), opt(s.chi_pair), opt(s.contraction)])
        .collect::<Vec<_>>();
    let mut value = serde_json::to_value(&report).expect("serializable");
    value["root"] = json!(root.degrees());
    value["k0"] = json!(a.k0);
    value["radius"] = json!(radius);
    let mut out = Output::json(value);
    out.csv = Some(csv_rows(&["step", "chi_to_previous", "chi_pair", "contraction"], rows)?);
    Ok(out)
}

fn sample(cli: &Cli, a: &SampleArgs, exec: Exec) -> CliResult<Output> {
    let s = spec(a.model, &a.params, cli.seed)?;
    let draws = models::sample(&s, a.count, exec)?;
    let mut text = String::new();
    for d in &draws {
        text.push_str(&serde_json::to_string(d).expect("serializable"));
        text.push('\n');
    }
    match &a.out {
        Some(path) => {
            std::fs::File::create(path)?.write_all(text.as_bytes())?;
            Ok(Output::json(json!({
                "path": path.display().to_string(),
                "count": draws.len(),
                "spec": serde_json::to_value(&s).expect("serializable"),
            })))
        }
        None => Ok(Output { result: Value::Null, csv: None, raw: Some(text) }),
    }
}
