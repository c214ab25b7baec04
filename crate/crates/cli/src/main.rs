use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kummer_lab::binary_form::{BinaryForm, ParamPoint};
use kummer_lab::config::{
    build_config, parse_param, parse_selection, preset_config, preset_params, standard_conic, Selection,
    SexticConfiguration, TwoTorsionLabel,
};
use kummer_lab::cover::analyze_cover;
use kummer_lab::cycle::{build_new_cycle, collino_cycle, pushforward_check, selection_curve, HyperellipticModel};
use kummer_lab::enumerative::{deformation_witness, kontsevich_counts, random_query, solve_characteristic, CharacteristicQuery};
use kummer_lab::locus::{
    default_tolerance, exact_roots, family_by_name, humbert5_residual, isolate_root, scan_family, sign_changes,
    verify_certificate, Isolation,
};
use kummer_lab::poly::UniPoly;
use kummer_lab::projective::{Conic, ProjLine, ProjPoint};
use kummer_lab::scalar::{fmt_rational, parse_rational, Rational};
use kummer_lab::Error;

mod render;

#[derive(Parser)]
#[command(name = "kummer", version, about = "Six-line Kummer configurations, Humbert loci, covers, cycles and conic counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a configuration from six tangency parameters on a conic.
    GenConfig(GenConfigArgs),
    /// List the fifteen nodes and the lines through each.
    Nodes(ConfigArg),
    /// Tangency residual of the conic through five nodes against a line.
    Residual(SelectionArgs),
    /// Residual signs along a one-parameter family.
    Scan(ScanArgs),
    /// Bisect a residual sign change to a certified interval.
    Isolate(IsolateArgs),
    /// Pullback of the sextic to the selected conic and its double cover.
    Cover(CoverArgs),
    /// The cycle on the normalization plus an exceptional fiber.
    Cycle(CycleArgs),
    /// The Collino cycle on a hyperelliptic curve.
    Collino(CollinoArgs),
    /// Check the pushforward relation between the new and Collino cycles.
    PushCheck(CycleArgs),
    /// Kontsevich counts n_d as CSV.
    CountNd(CountNdArgs),
    /// Conics through k points tangent to 5 - k lines.
    CountConics(CountConicsArgs),
    /// Conics through four nodes tangent to one line.
    Witness(WitnessArgs),
    /// SVG picture of the configuration.
    Render(RenderArgs),
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenConfigArgs {
    /// Six tangency parameters, e.g. 0,1,-1,2,-2,3 (inf allowed).
    #[arg(long, value_parser = params_arg)]
    params: Option<ParamList>,
    /// Base conic coefficients xx,yy,zz,xy,xz,yz.
    #[arg(long, value_parser = six_arg, allow_hyphen_values = true)]
    base: Option<[Rational; 6]>,
    /// Base point x,y,z of the parametrization; required with --base.
    #[arg(long, value_parser = triple_arg, allow_hyphen_values = true)]
    base_point: Option<[Rational; 3]>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConfigArg {
    /// Configuration JSON; the preset when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SelectionArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Five nodes: `cyclic` or labels such as 12,23,34,45,15.
    #[arg(long, default_value = "cyclic", value_parser = selection_arg)]
    selection: Selection,
    /// Remaining line index 1..6.
    #[arg(long, default_value_t = 6)]
    line: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// Shipped family name (preset-crossing, rational-root, preset-wide).
    #[arg(long, default_value = "preset-crossing")]
    family: String,
    #[arg(long, default_value = "cyclic", value_parser = selection_arg)]
    selection: Selection,
    #[arg(long, default_value_t = 6)]
    line: usize,
    /// Number of grid samples.
    #[arg(long, default_value_t = 9)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct IsolateArgs {
    #[command(flatten)]
    scan: ScanArgs,
    /// Bracket endpoints; found by a grid scan when omitted.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    lo: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    hi: Option<Rational>,
    /// Target interval width.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    tol: Option<Rational>,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    selection: SelectionArgs,
    /// Analyze this binary form (coefficients of u^d, t u^(d-1), ..., t^d)
    /// instead of a pullback.
    #[arg(long, value_parser = rationals_arg, allow_hyphen_values = true)]
    form: Option<RationalList>,
}

#[derive(Args)]
struct CycleArgs {
    #[command(flatten)]
    selection: SelectionArgs,
    /// Node P to blow up.
    #[arg(long, default_value = "12", value_parser = label_arg)]
    node: TwoTorsionLabel,
    /// Auxiliary node R normalizing the function.
    #[arg(long, default_value = "23", value_parser = label_arg)]
    aux: TwoTorsionLabel,
}

#[derive(Args)]
struct CollinoArgs {
    /// Coefficients of h, constant term first.
    #[arg(long, value_parser = rationals_arg, allow_hyphen_values = true, conflicts_with = "roots")]
    h: Option<RationalList>,
    /// Roots of a monic h.
    #[arg(long, value_parser = rationals_arg, allow_hyphen_values = true)]
    roots: Option<RationalList>,
    #[arg(long, value_parser = param_arg, allow_hyphen_values = true)]
    p1: ParamPoint,
    #[arg(long, value_parser = param_arg, allow_hyphen_values = true)]
    p2: ParamPoint,
    #[arg(long, value_parser = param_arg, allow_hyphen_values = true)]
    r: ParamPoint,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CountNdArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    max: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CountConicsArgs {
    /// Number of point conditions; all of 0..5 when omitted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=5))]
    points: Option<u64>,
    /// Seed for the random general-position conditions.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON query {"points": [[x,y,z],...], "lines": [[a,b,c],...]}.
    #[arg(long, conflicts_with = "points")]
    query: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Four node labels.
    #[arg(long, default_value = "23,34,45,15", value_parser = four_labels_arg)]
    nodes: [TwoTorsionLabel; 4],
    /// Line the conic must touch.
    #[arg(long, default_value_t = 1)]
    line: usize,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Nodes for the fitted conic.
    #[arg(long, default_value = "cyclic", value_parser = selection_arg)]
    selection: Selection,
    /// Omit the fitted conic.
    #[arg(long)]
    no_fit: bool,
}

#[derive(Clone)]
struct RationalList(Vec<Rational>);

#[derive(Clone)]
struct ParamList(Vec<ParamPoint>);

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty())
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rationals_arg(s: &str) -> Result<RationalList, String> {
    split_list(s).map(rational_arg).collect::<Result<_, _>>().map(RationalList)
}

fn six_arg(s: &str) -> Result<[Rational; 6], String> {
    rationals_arg(s)?.0.try_into().map_err(|v: Vec<_>| format!("six values expected, got {}", v.len()))
}

fn triple_arg(s: &str) -> Result<[Rational; 3], String> {
    rationals_arg(s)?.0.try_into().map_err(|v: Vec<_>| format!("three values expected, got {}", v.len()))
}

fn param_arg(s: &str) -> Result<ParamPoint, String> {
    parse_param(s).map_err(|e| e.to_string())
}

fn params_arg(s: &str) -> Result<ParamList, String> {
    split_list(s).map(param_arg).collect::<Result<_, _>>().map(ParamList)
}

fn selection_arg(s: &str) -> Result<Selection, String> {
    parse_selection(s).map_err(|e| e.to_string())
}

fn label_arg(s: &str) -> Result<TwoTorsionLabel, String> {
    s.parse::<TwoTorsionLabel>().map_err(|e| e.to_string())
}

fn four_labels_arg(s: &str) -> Result<[TwoTorsionLabel; 4], String> {
    let v: Vec<TwoTorsionLabel> = split_list(s).map(label_arg).collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<_>| format!("four labels expected, got {}", v.len()))
}

type Run = Result<String, Error>;

fn load_config(arg: &ConfigArg) -> Result<SexticConfiguration, Error> {
    match &arg.config {
        None => Ok(preset_config()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            SexticConfiguration::from_json(&text)
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn selection_labels(sel: &Selection) -> Vec<String> {
    sel.iter().map(|l| format!("q{l}")).collect()
}

fn gen_config(a: &GenConfigArgs) -> Run {
    let params = a.params.clone().map(|p| p.0).unwrap_or_else(preset_params);
    let (base, bp) = match (&a.base, &a.base_point) {
        (None, None) => standard_conic(),
        (Some(c), Some(p)) => (Conic::new(c.clone())?, ProjPoint::from_triple(p)?),
        _ => return Err(Error::InvalidInput("--base and --base-point go together".into())),
    };
    Ok(build_config(&base, &bp, &params)?.to_json() + "\n")
}

fn nodes(a: &ConfigArg) -> Run {
    let cfg = load_config(a)?;
    let list: Vec<Value> = cfg
        .nodes()
        .iter()
        .map(|(label, p)| {
            let on: Vec<usize> = (1..=6).filter(|&k| cfg.line(k).contains(p)).collect();
            json!({ "label": label.to_string(), "point": to_value(p), "lines": on })
        })
        .collect();
    Ok(pretty(&json!({ "nodes": list })))
}

fn residual(a: &SelectionArgs) -> Run {
    let cfg = load_config(&a.config)?;
    let r = humbert5_residual(&cfg, &a.selection, a.line)?;
    Ok(pretty(&json!({
        "selection": selection_labels(&a.selection),
        "line": a.line,
        "conic": to_value(&r.conic),
        "residual": fmt_rational(&r.residual),
        "sign": r.sign(),
        "tangent": r.is_tangent(),
        "meets": to_value(&r.meets),
    })))
}

fn scan(a: &ScanArgs) -> Run {
    let fam = family_by_name(&a.family)?;
    let samples = scan_family(&fam, &a.selection, a.line, a.grid)?;
    let changes: Vec<[String; 2]> = sign_changes(&samples).iter().map(|(x, y)| [fmt_rational(x), fmt_rational(y)]).collect();
    let roots: Vec<String> = exact_roots(&samples).iter().map(fmt_rational).collect();
    Ok(pretty(&json!({
        "family": to_value(&fam),
        "selection": selection_labels(&a.selection),
        "line": a.line,
        "samples": to_value(&samples),
        "sign_changes": changes,
        "exact_roots": roots,
    })))
}

fn isolate(a: &IsolateArgs) -> Run {
    let s = &a.scan;
    let fam = family_by_name(&s.family)?;
    let (lo, hi) = match (&a.lo, &a.hi) {
        (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
        (None, None) => {
            let samples = scan_family(&fam, &s.selection, s.line, s.grid)?;
            if let Some(r) = exact_roots(&samples).first() {
                return Ok(pretty(&json!({ "kind": "exact_root", "param": fmt_rational(r), "verified": true })));
            }
            sign_changes(&samples).into_iter().next().ok_or_else(|| Error::NoSignChange {
                lo: fmt_rational(&fam.lo),
                hi: fmt_rational(&fam.hi),
            })?
        }
        _ => return Err(Error::InvalidInput("--lo and --hi go together".into())),
    };
    let tol = a.tol.clone().unwrap_or_else(default_tolerance);
    let iso = isolate_root(&fam, &s.selection, s.line, &lo, &hi, &tol)?;
    let verified = match &iso {
        Isolation::Certificate(c) => verify_certificate(&fam, &s.selection, c)?,
        Isolation::ExactRoot { param } => humbert5_residual(&fam.member(param)?, &s.selection, s.line)?.is_tangent(),
    };
    let mut v = to_value(&iso);
    v["verified"] = json!(verified);
    Ok(pretty(&v))
}

fn cover(a: &CoverArgs) -> Run {
    let (form, source) = match &a.form {
        Some(c) => (BinaryForm::new(c.0.clone()), json!("form")),
        None => {
            let cfg = load_config(&a.selection.config)?;
            let phi = selection_curve(&cfg, &a.selection.selection)?;
            let f = kummer_lab::cover::pullback_sextic(&cfg, &phi)?;
            (f, json!({ "selection": selection_labels(&a.selection.selection), "curve": phi.to_string() }))
        }
    };
    let an = analyze_cover(&form)?;
    let mut v = to_value(&an);
    v["source"] = source;
    v["form"] = json!(form.to_string());
    Ok(pretty(&v))
}

fn new_cycle(a: &CycleArgs) -> Result<kummer_lab::cycle::NewCycle, Error> {
    let cfg = load_config(&a.selection.config)?;
    let phi = selection_curve(&cfg, &a.selection.selection)?;
    build_new_cycle(&cfg, &phi, a.node, a.aux)
}

fn cycle(a: &CycleArgs) -> Run {
    let z = new_cycle(a)?;
    let mut v = to_value(&z);
    v["total_divisor"] = json!(z.cycle.total_divisor.to_string());
    Ok(pretty(&v))
}

fn push_check(a: &CycleArgs) -> Run {
    let z = new_cycle(a)?;
    let rep = pushforward_check(&z)?;
    Ok(pretty(&to_value(&rep)))
}

fn collino(a: &CollinoArgs) -> Run {
    let model = match (&a.h, &a.roots) {
        (Some(h), None) => HyperellipticModel::new(UniPoly::new(h.0.clone()))?,
        (None, Some(r)) => HyperellipticModel::from_roots(&r.0)?,
        _ => return Err(Error::InvalidInput("give exactly one of --h and --roots".into())),
    };
    let c = collino_cycle(&model, &a.p1, &a.p2, &a.r)?;
    let mut v = to_value(&c);
    v["model_equation"] = json!(model.to_string());
    v["curve_divisor"] = json!(c.curve_divisor.to_string());
    v["total_divisor"] = json!(c.cycle.total_divisor.to_string());
    Ok(pretty(&v))
}

fn count_nd(a: &CountNdArgs) -> Run {
    let t = kontsevich_counts(a.max)?;
    let mut out = String::from("d,n_d\n");
    for (d, n) in &t {
        out += &format!("{d},{n}\n");
    }
    Ok(out)
}

fn parse_query(text: &str) -> Result<CharacteristicQuery, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let triples = |key: &str| -> Result<Vec<[Rational; 3]>, Error> {
        let arr = v.get(key).and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]);
        arr.iter()
            .map(|t| {
                let items = t.as_array().ok_or_else(|| Error::Parse(format!("{key}: triple expected")))?;
                let vals: Vec<Rational> = items
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => parse_rational(s),
                        Value::Number(n) => parse_rational(&n.to_string()),
                        _ => Err(Error::Parse(format!("{key}: number expected"))),
                    })
                    .collect::<Result<_, _>>()?;
                vals.try_into().map_err(|_| Error::Parse(format!("{key}: three coordinates expected")))
            })
            .collect()
    };
    let points = triples("points")?.iter().map(ProjPoint::from_triple).collect::<Result<_, _>>()?;
    let lines = triples("lines")?.iter().map(ProjLine::from_triple).collect::<Result<_, _>>()?;
    CharacteristicQuery::new(points, lines)
}

fn count_conics(a: &CountConicsArgs) -> Run {
    let queries: Vec<CharacteristicQuery> = match (&a.query, a.points) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            vec![parse_query(&text)?]
        }
        (None, Some(k)) => vec![random_query(k as usize, a.seed)],
        (None, None) => (0..=5).rev().map(|k| random_query(k, a.seed + k as u64)).collect(),
    };
    let mut out = String::from("points,lines,count,borderline\n");
    for qy in &queries {
        let r = solve_characteristic(qy)?;
        out += &format!("{},{},{},{}\n", r.points, r.lines, r.count, r.borderline);
    }
    Ok(out)
}

fn witness(a: &WitnessArgs) -> Run {
    let cfg = load_config(&a.config)?;
    let w = deformation_witness(&cfg, &a.nodes, a.line)?;
    Ok(pretty(&to_value(&w)))
}

fn render_cmd(a: &RenderArgs) -> Run {
    let cfg = load_config(&a.config)?;
    let fit = if a.no_fit {
        None
    } else {
        let phi = selection_curve(&cfg, &a.selection)?;
        Some((a.selection, phi))
    };
    Ok(render::render_svg(&cfg, fit.as_ref()))
}

fn write_out(out: &Output, text: &str) -> Result<(), Error> {
    match &out.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
    }
}

fn dispatch(cmd: &Command) -> Result<(), Error> {
    let (text, out) = match cmd {
        Command::GenConfig(a) => (gen_config(a)?, &a.output),
        Command::Nodes(a) => (nodes(a)?, &a.output),
        Command::Residual(a) => (residual(a)?, &a.config.output),
        Command::Scan(a) => (scan(a)?, &a.output),
        Command::Isolate(a) => (isolate(a)?, &a.scan.output),
        Command::Cover(a) => (cover(a)?, &a.selection.config.output),
        Command::Cycle(a) => (cycle(a)?, &a.selection.config.output),
        Command::Collino(a) => (collino(a)?, &a.output),
        Command::PushCheck(a) => (push_check(a)?, &a.selection.config.output),
        Command::CountNd(a) => (count_nd(a)?, &a.output),
        Command::CountConics(a) => (count_conics(a)?, &a.output),
        Command::Witness(a) => (witness(a)?, &a.config.output),
        Command::Render(a) => (render_cmd(a)?, &a.config.output),
    };
    write_out(out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let v = json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{}", serde_json::to_string(&v).expect("serializable"));
            ExitCode::from(1)
        }
    }
}
