use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use sewing_core::casimir_subalgebra::{pv_filtration_with, trace_orthogonality_check, DEFAULT_PV_BUDGET};
use sewing_core::correlators::{mode_oracle, wick_correlator, Insertion, PointConfig, PointConfigJson};
use sewing_core::lattice::{theta_genus1, theta_genus2, EvenLattice, LatticeVOAState, LatticeVector, LatticeVoa};
use sewing_core::partition::{
    compare_partitions_with, genus1_oracle, moonshine_genus1, normalized_partition_with, partition_series,
    theta_pullback_genus1, Comparison, ModelEngine, PartitionRequest, VOAModel, DEFAULT_BUDGET,
};
use sewing_core::schottky::{
    certify_points, disks_disjoint, fixed_points_multiplier, from_wzq, in_u_gr, plumbing_check, to_wzq,
    u_plus_ordered, GaussRat, Point, SchottkyGenerators,
};
use sewing_core::series::rat::{display, parse_rat, to_strings};
use sewing_core::series::{QSeries, Rat};

use crate::output::{Document, Provenance, Table};
use crate::{CliError, Command};

type Res<T> = Result<T, CliError>;

#[derive(Args, Debug)]
pub struct PartitionArgs {
    /// `heisenberg:r`, `lattice:NAME`, `lattice:FILE.json`, `trivial` or `tensor:A,B,...`.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1)]
    genus: usize,
    /// Maximum total degree in the sewing parameters.
    #[arg(long)]
    trunc: u32,
    /// `builtin:NAME`, `list:w1,z1,...` or a JSON file `{"points": [...]}`; defaults to g1a, g2a or g3a.
    #[arg(long)]
    points: Option<String>,
    /// `plain` or `sep:i`.
    #[arg(long, default_value = "plain")]
    variant: String,
    /// Insertion points and degree cap of the separating handle.
    #[arg(long, requires = "sep_z")]
    sep_w: Option<String>,
    #[arg(long, requires = "sep_w")]
    sep_z: Option<String>,
    #[arg(long)]
    sep_k: Option<u32>,
    /// Divide by the Heisenberg partition function raised to the central charge.
    #[arg(long)]
    normalized: bool,
}

#[derive(Args, Debug)]
pub struct CorrelateArgs {
    /// A Heisenberg or lattice model (no tensor products).
    #[arg(long)]
    model: String,
    /// JSON file `{"insertions": [{"state": "...", "point": "..."}, ...]}`.
    #[arg(long)]
    input: PathBuf,
    /// Also evaluate by direct mode summation (at most three insertions).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    /// Fixture name or JSON file `{"name", "rank", "gram"}`.
    #[arg(long)]
    lattice: String,
    /// Highest power of q (norm / 2) at genus 1; largest diagonal entry at genus 2.
    #[arg(long)]
    trunc: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    genus: u32,
}

#[derive(Args, Debug)]
pub struct PvArgs {
    #[arg(long)]
    model: String,
    /// Weight cutoff.
    #[arg(long)]
    cutoff: u32,
    /// Run the zero-mode trace test on the complement of each `PV_d`, `d <= cutoff`, for `k <= trace_k`.
    #[arg(long)]
    trace_k: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum SchottkyAction {
    /// `{"w","z","q"}` to fixed points and multiplier, or `{"W","Z","mu"}` to `w, z, q`.
    Convert {
        #[arg(long)]
        input: PathBuf,
    },
    /// `{"handles": [{"w","z","q"}], "r"}`: membership in the region and disk disjointness.
    CheckUr {
        #[arg(long)]
        input: PathBuf,
    },
    /// `{"handles": [...], "handle": i, "y": "..." | "inf"}`: image of `y` and the sewing relation.
    Plumb {
        #[arg(long)]
        input: PathBuf,
    },
    /// Certificate radius for a point configuration.
    Certify {
        #[arg(long)]
        points: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CompareMethod {
    /// Full dual-basis sewing for both models.
    Sewing,
    /// Genus-1 closed form from graded dimensions.
    Oracle,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 1)]
    genus: usize,
    #[arg(long)]
    trunc: u32,
    #[arg(long)]
    points: Option<String>,
    #[arg(long, value_enum, default_value = "sewing")]
    method: CompareMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// `Σ dim V_n μ^n` from graded dimensions.
    Genus1,
    /// Theta series of the lattice over the Heisenberg part.
    Theta,
    /// The moonshine module from stored j coefficients.
    Moonshine,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "genus1")]
    kind: OracleKind,
    /// Required unless the kind is `moonshine`.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    trunc: u32,
    #[arg(long)]
    points: Option<String>,
}

pub fn dispatch(command: &Command, budget: Option<u64>) -> Res<Document> {
    match command {
        Command::Partition(a) => partition(a, budget),
        Command::Correlate(a) => correlate(a),
        Command::Theta(a) => theta(a),
        Command::Pv(a) => pv(a, budget),
        Command::Schottky { action } => schottky(action),
        Command::Compare(a) => compare(a, budget),
        Command::Oracle(a) => oracle(a),
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Res<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_lattice(name: &str) -> sewing_core::Result<EvenLattice> {
    if name.ends_with(".json") {
        let text = std::fs::read_to_string(name)
            .map_err(|e| sewing_core::Error::Invalid(format!("cannot read {name}: {e}")))?;
        EvenLattice::from_json_str(&text)
    } else {
        EvenLattice::fixture(name)
    }
}

fn parse_model(text: &str) -> Res<VOAModel> {
    Ok(VOAModel::parse_with(text, &load_lattice)?)
}

fn single_factor(model: &VOAModel) -> Res<Arc<LatticeVoa>> {
    let engine = ModelEngine::new(model);
    match engine.factors() {
        [f] => Ok(f.clone()),
        _ => Err(CliError::usage(format!("{model} must be a single Heisenberg or lattice model"))),
    }
}

fn load_points(arg: &str) -> Res<PointConfig> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        Ok(PointConfig::builtin(name)?)
    } else if let Some(list) = arg.strip_prefix("list:") {
        let items: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
        Ok(PointConfig::parse(&items)?)
    } else {
        let j: PointConfigJson = parse_json(Path::new(arg))?;
        Ok(PointConfig::parse(&j.points)?)
    }
}

fn parse_points(arg: Option<&str>, genus: usize) -> Res<PointConfig> {
    let points = match (arg, genus) {
        (Some(a), _) => load_points(a)?,
        (None, 1) => PointConfig::builtin("g1a")?,
        (None, 2) => PointConfig::builtin("g2a")?,
        (None, 3) => PointConfig::builtin("g3a")?,
        (None, g) => return Err(CliError::usage(format!("no default points for genus {g}; pass --points"))),
    };
    if points.genus() != genus {
        return Err(CliError::usage(format!("genus {genus} needs {} points, got {}", 2 * genus, points.points().len())));
    }
    Ok(points)
}

fn rat_arg(s: &str) -> Res<Rat> {
    Ok(parse_rat(s)?)
}

fn certificate(points: &PointConfig) -> Res<Value> {
    serde_json::to_value(certify_points(points)?).map_err(CliError::internal)
}

fn series_document(mut prov: Provenance, series: &QSeries, extra: Value) -> Res<Document> {
    let j = series.to_json();
    let mut headers: Vec<String> = (1..=series.vars()).map(|i| format!("e{i}")).collect();
    headers.push("num".into());
    headers.push("den".into());
    let rows = j
        .terms
        .iter()
        .map(|t| t.exp.iter().map(u32::to_string).chain([t.num.clone(), t.den.clone()]).collect())
        .collect();
    let mut result = serde_json::to_value(&j).map_err(CliError::internal)?;
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    prov.truncation = Some(series.trunc());
    Ok(Document { provenance: prov, result, table: Table { headers, rows } })
}

fn partition(a: &PartitionArgs, budget: Option<u64>) -> Res<Document> {
    let model = parse_model(&a.model)?;
    let points = parse_points(a.points.as_deref(), a.genus)?;
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let mut prov = Provenance::new("partition");
    prov.model = Some(model.to_string());
    prov.points = Some(points.to_strings());
    prov.certificate = Some(certificate(&points)?);
    let series = if a.variant == "plain" {
        if a.normalized {
            normalized_partition_with(&model, a.genus, a.trunc, &points, budget)?
        } else {
            partition_series(&PartitionRequest::plain(model, a.genus, a.trunc, points).with_budget(budget))?
        }
    } else if let Some(i) = a.variant.strip_prefix("sep:") {
        if a.normalized {
            return Err(CliError::usage("--normalized applies to the plain variant only"));
        }
        let i: usize = i.parse().map_err(|_| CliError::usage(format!("bad separating index {i:?}")))?;
        let (Some(w), Some(z)) = (&a.sep_w, &a.sep_z) else {
            return Err(CliError::usage("the separating variant needs --sep-w and --sep-z"));
        };
        let k = a.sep_k.unwrap_or(a.trunc);
        let req = PartitionRequest::separating(model, a.genus, a.trunc, points, i, rat_arg(w)?, rat_arg(z)?, k);
        partition_series(&req.with_budget(budget))?
    } else {
        return Err(CliError::usage(format!("unknown variant {:?}; expected plain or sep:i", a.variant)));
    };
    series_document(prov, &series, json!({ "normalized": a.normalized, "variant": a.variant }))
}

#[derive(Deserialize)]
struct TermInput {
    state: String,
    #[serde(default)]
    coeff: Option<String>,
}

#[derive(Deserialize)]
struct InsertionInput {
    #[serde(default)]
    state: Option<String>,
    #[serde(default)]
    terms: Option<Vec<TermInput>>,
    point: String,
}

#[derive(Deserialize)]
struct CorrelateInput {
    insertions: Vec<InsertionInput>,
}

fn parse_state(voa: &LatticeVoa, text: &str) -> Res<LatticeVOAState> {
    LatticeVOAState::parse(voa.rank(), voa.lattice_rank(), text)
        .ok_or_else(|| CliError::usage(format!("cannot parse state {text:?}")))
}

fn correlate(a: &CorrelateArgs) -> Res<Document> {
    let model = parse_model(&a.model)?;
    let voa = single_factor(&model)?;
    let input: CorrelateInput = parse_json(&a.input)?;
    let mut insertions = Vec::new();
    let mut points = Vec::new();
    for ins in &input.insertions {
        let mut v = LatticeVector::zero();
        let terms: Vec<(&str, Option<&str>)> = match (&ins.state, &ins.terms) {
            (Some(s), None) => vec![(s.as_str(), None)],
            (None, Some(ts)) => ts.iter().map(|t| (t.state.as_str(), t.coeff.as_deref())).collect(),
            _ => return Err(CliError::usage("each insertion needs exactly one of \"state\" or \"terms\"")),
        };
        for (s, c) in terms {
            let c = match c {
                Some(c) => rat_arg(c)?,
                None => Rat::from_integer(1.into()),
            };
            v.add_term(parse_state(&voa, s)?, c);
        }
        let p = rat_arg(&ins.point)?;
        points.push(display(&p));
        insertions.push(Insertion::new(v, p));
    }
    let value = wick_correlator(&voa, &insertions)?;
    let (num, den) = to_strings(&value);
    let mut result = json!({ "value": display(&value), "num": num, "den": den });
    let mut table = Table::new(&["method", "num", "den"]);
    table.rows.push(vec!["wick".into(), num, den]);
    if a.oracle {
        let o = mode_oracle(&voa, &insertions, 3)?;
        let (on, od) = to_strings(&o.value);
        result["oracle"] = json!({ "value": display(&o.value), "certified": o.certified, "agrees": o.value == value });
        table.rows.push(vec!["oracle".into(), on, od]);
        if o.value != value {
            return Err(CliError::internal(format!(
                "Wick value {} disagrees with the mode oracle {}",
                display(&value),
                display(&o.value)
            )));
        }
    }
    let mut prov = Provenance::new("correlate");
    prov.model = Some(model.to_string());
    prov.points = Some(points);
    Ok(Document { provenance: prov, result, table })
}

fn theta(a: &ThetaArgs) -> Res<Document> {
    let lattice = load_lattice(&a.lattice)?;
    let mut prov = Provenance::new("theta");
    prov.model = Some(format!("lattice:{}", lattice.name()));
    prov.truncation = Some(a.trunc);
    if a.genus == 1 {
        let th = theta_genus1(&lattice, a.trunc as usize)?;
        let counts: Vec<String> = th.coeffs().iter().map(display).collect();
        let mut table = Table::new(&["n", "count"]);
        table.rows = counts.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.clone()]).collect();
        Ok(Document { provenance: prov, result: json!({ "genus": 1, "coefficients": counts }), table })
    } else {
        let reps = theta_genus2(&lattice, a.trunc as i64)?;
        let mut table = Table::new(&["t11", "t12_twice", "t22", "count"]);
        let mut entries = Vec::new();
        for (t, c) in &reps {
            table.rows.push(vec![t.t11.to_string(), t.t12_twice.to_string(), t.t22.to_string(), c.to_string()]);
            entries.push(json!({ "t11": t.t11, "t12_twice": t.t12_twice, "t22": t.t22, "count": c.to_string() }));
        }
        Ok(Document { provenance: prov, result: json!({ "genus": 2, "representations": entries }), table })
    }
}

fn pv(a: &PvArgs, budget: Option<u64>) -> Res<Document> {
    let model = parse_model(&a.model)?;
    let voa = single_factor(&model)?;
    let filtration = pv_filtration_with(&voa, a.cutoff, budget.unwrap_or(DEFAULT_PV_BUDGET))?;
    let mut table = Table::new(&["weight", "dim_pv", "dim_v"]);
    let mut weights = Vec::new();
    for p in &filtration.pieces {
        table.rows.push(vec![p.weight.to_string(), p.dim().to_string(), p.dim_v.to_string()]);
        weights.push(json!({ "weight": p.weight, "dim_pv": p.dim(), "dim_v": p.dim_v }));
    }
    let mut result = json!({ "cutoff": a.cutoff, "weights": weights });
    if let Some(kmax) = a.trace_k {
        let mut reports = Vec::new();
        for d in 1..=a.cutoff {
            for k in 0..=kmax {
                let r = trace_orthogonality_check(&voa, &filtration, d, k)?;
                reports.push(json!({ "d": d, "k": k, "complement_dim": r.complement_dim, "passed": r.passed }));
            }
        }
        result["trace_checks"] = Value::Array(reports);
    }
    let mut prov = Provenance::new("pv");
    prov.model = Some(model.to_string());
    prov.truncation = Some(a.cutoff);
    Ok(Document { provenance: prov, result, table })
}

fn gauss_field(v: &Value, key: &str) -> Res<GaussRat> {
    let s = v
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::usage(format!("missing string field {key:?}")))?;
    Ok(GaussRat::parse(s)?)
}

fn handles(v: &Value) -> Res<SchottkyGenerators> {
    let list = v
        .get("handles")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::usage("missing array field \"handles\""))?;
    let hs = list
        .iter()
        .map(|h| Ok((gauss_field(h, "w")?, gauss_field(h, "z")?, gauss_field(h, "q")?)))
        .collect::<Res<Vec<_>>>()?;
    Ok(SchottkyGenerators::new(hs)?)
}

fn key_value_table(result: &Value) -> Table {
    let mut table = Table::new(&["key", "value"]);
    if let Value::Object(m) = result {
        for (k, v) in m {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            table.rows.push(vec![k.clone(), v]);
        }
    }
    table
}

fn schottky(action: &SchottkyAction) -> Res<Document> {
    let (name, result, prov_points) = match action {
        SchottkyAction::Convert { input } => {
            let v: Value = parse_json(input)?;
            if v.get("mu").is_some() {
                let (w, z, q) = to_wzq(&gauss_field(&v, "W")?, &gauss_field(&v, "Z")?, &gauss_field(&v, "mu")?)?;
                ("schottky convert", json!({ "w": w.to_string(), "z": z.to_string(), "q": q.to_string() }), None)
            } else {
                let m = from_wzq(&gauss_field(&v, "w")?, &gauss_field(&v, "z")?, &gauss_field(&v, "q")?)?;
                let f = fixed_points_multiplier(&m)?;
                let mut r = json!({
                    "W": f.attracting.to_string(),
                    "Z": f.repelling.to_string(),
                    "mu": f.multiplier.to_string(),
                    "exact": f.exact,
                    "error_sq_bound": display(&f.error_sq_bound),
                });
                if f.exact {
                    let (w, z, q) = to_wzq(&f.attracting, &f.repelling, &f.multiplier)?;
                    r["round_trip"] = json!({ "w": w.to_string(), "z": z.to_string(), "q": q.to_string() });
                }
                ("schottky convert", r, None)
            }
        }
        SchottkyAction::CheckUr { input } => {
            let v: Value = parse_json(input)?;
            let gens = handles(&v)?;
            let r = v
                .get("r")
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::usage("missing string field \"r\""))?;
            let r = rat_arg(r)?;
            let inside = in_u_gr(&gens, &r)?;
            let result = json!({
                "genus": gens.genus(),
                "r": display(&r),
                "in_region": inside,
                "disks_disjoint": disks_disjoint(&gens),
                "ordered": u_plus_ordered(&gens),
            });
            ("schottky check-ur", result, None)
        }
        SchottkyAction::Plumb { input } => {
            let v: Value = parse_json(input)?;
            let gens = handles(&v)?;
            let i = v
                .get("handle")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::usage("missing integer field \"handle\""))? as usize;
            let y = match v.get("y").and_then(Value::as_str) {
                Some("inf") => Point::Infinity,
                Some(_) => Point::Finite(gauss_field(&v, "y")?),
                None => return Err(CliError::usage("missing string field \"y\"")),
            };
            let holds = plumbing_check(&gens, i, &y)?;
            let (w, z, q) = &gens.handles.get(i).ok_or_else(|| CliError::usage(format!("no handle {i}")))?;
            let x = match from_wzq(w, z, q)?.apply(&y) {
                Point::Infinity => "inf".to_string(),
                Point::Finite(x) => x.to_string(),
            };
            ("schottky plumb", json!({ "handle": i, "x": x, "relation_holds": holds }), None)
        }
        SchottkyAction::Certify { points } => {
            let pts = load_points(points)?;
            let cert = certificate(&pts)?;
            ("schottky certify", cert, Some(pts.to_strings()))
        }
    };
    let mut prov = Provenance::new(name);
    prov.points = prov_points;
    let table = key_value_table(&result);
    Ok(Document { provenance: prov, result, table })
}

fn compare(a: &CompareArgs, budget: Option<u64>) -> Res<Document> {
    let (ma, mb) = (parse_model(&a.a)?, parse_model(&a.b)?);
    let points = parse_points(a.points.as_deref(), a.genus)?;
    let (result, warning) = match a.method {
        CompareMethod::Sewing => {
            let r = compare_partitions_with(&ma, &mb, a.genus, a.trunc, &points, budget.unwrap_or(DEFAULT_BUDGET))?;
            (r.result, r.warning)
        }
        CompareMethod::Oracle => {
            if a.genus != 1 {
                return Err(CliError::usage("the oracle method is available at genus 1 only"));
            }
            let za = genus1_oracle(&ma, a.trunc, points.w(0), points.z(0))?;
            let zb = genus1_oracle(&mb, a.trunc, points.w(0), points.z(0))?;
            let warning = (ma.central_charge() != mb.central_charge())
                .then(|| format!("central charges differ: {} vs {}", ma.central_charge(), mb.central_charge()));
            let r = match za.first_difference(&zb) {
                None => Comparison::Equal,
                Some((exponent, a, b)) => Comparison::Differ { exponent, a, b },
            };
            (r, warning)
        }
    };
    let mut out = match &result {
        Comparison::Equal => json!({ "result": "equal" }),
        Comparison::Differ { exponent, a, b } => {
            json!({ "result": "differ", "exponent": exponent, "a": display(a), "b": display(b) })
        }
    };
    out["method"] = json!(match a.method {
        CompareMethod::Sewing => "sewing",
        CompareMethod::Oracle => "oracle",
    });
    if let Some(w) = warning {
        out["warning"] = json!(w);
    }
    let mut prov = Provenance::new("compare");
    prov.model = Some(format!("{} | {}", ma, mb));
    prov.points = Some(points.to_strings());
    prov.truncation = Some(a.trunc);
    prov.certificate = Some(certificate(&points)?);
    let table = key_value_table(&out);
    Ok(Document { provenance: prov, result: out, table })
}

fn oracle(a: &OracleArgs) -> Res<Document> {
    let points = parse_points(a.points.as_deref(), 1)?;
    let (w, z) = (points.w(0), points.z(0));
    let mut prov = Provenance::new("oracle");
    prov.points = Some(points.to_strings());
    prov.certificate = Some(certificate(&points)?);
    let model = || -> Res<VOAModel> {
        parse_model(a.model.as_deref().ok_or_else(|| CliError::usage("--model is required for this oracle"))?)
    };
    let series = match a.kind {
        OracleKind::Genus1 => {
            let m = model()?;
            prov.model = Some(m.to_string());
            genus1_oracle(&m, a.trunc, w, z)?
        }
        OracleKind::Theta => {
            let m = model()?;
            prov.model = Some(m.to_string());
            let VOAModel::Lattice(l) = &m else {
                return Err(CliError::usage("the theta oracle needs a lattice model"));
            };
            theta_pullback_genus1(l, a.trunc, w, z)?
        }
        OracleKind::Moonshine => {
            prov.model = Some("moonshine".into());
            moonshine_genus1(a.trunc, w, z)?
        }
    };
    let kind = match a.kind {
        OracleKind::Genus1 => "genus1",
        OracleKind::Theta => "theta",
        OracleKind::Moonshine => "moonshine",
    };
    series_document(prov, &series, json!({ "kind": kind }))
}
