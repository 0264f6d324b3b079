use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use edlogic::decision::{self, Entailment, Model, SatResult, Witness};
use edlogic::evidence::{self, MassFunction};
use edlogic::json::to_pretty;
use edlogic::logic::{self, EdFormula};
use edlogic::product;
use edlogic::rational::{fmt_rational, to_json};
use edlogic::sample;
use edlogic::space::{self, MetricProbSpace};
use edlogic::Limits;

use crate::{Command, Config, Direction, Format};

pub fn run(command: Command, config: &Config) -> Result<u8> {
    match command {
        Command::Check { formula, file } => check(formula, file, config),
        Command::Entail {
            goal,
            premises,
            premise,
        } => entail(&goal, premises, &premise, config),
        Command::Eval {
            space,
            formula,
            valuation,
            declare,
        } => eval(&space, &formula, valuation.as_deref(), declare, config),
        Command::Measures { space, points, full } => measures(&space, &points, full, config),
        Command::Mobius {
            input,
            direction,
            out,
        } => mobius(&input, direction, out.as_deref()),
        Command::Product { spaces, joint, out } => product(&spaces, joint.as_deref(), out.as_deref(), config),
        Command::RandomSpace { points, out } => random_space(points as usize, out.as_deref(), config),
    }
}

fn limits(config: &Config) -> Limits {
    Limits {
        atom_budget: config.atom_budget as usize,
        model_point_cap: config.model_cap as usize,
        dnf_literal_cap: config.dnf_cap as usize,
        ..Limits::default()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_formula(text: &str) -> Result<EdFormula> {
    logic::parse(text).map_err(|e| anyhow!("{e}"))
}

fn parse_file(path: &Path) -> Result<Vec<EdFormula>> {
    logic::parse_lines(&read(path)?).map_err(|(line, e)| anyhow!("{}:{line}: {e}", path.display()))
}

fn wants_model(config: &Config) -> bool {
    config.emit_model || config.model_out.is_some()
}

/// Renders a witness, writing its model to a file when asked to.
///
/// In JSON mode the model is embedded unless `--model-out` is given. In text
/// mode it always goes to a file: `--model-out`, or a sibling of the input.
fn report_witness(w: &Witness, config: &Config, sibling_of: Option<&Path>, header: &str) -> Result<()> {
    let mut model_path: Option<PathBuf> = None;
    if wants_model(config) {
        if let Some(m) = &w.model {
            let target = match (&config.model_out, config.format) {
                (Some(p), _) => Some(p.clone()),
                (None, Format::Text) => Some(match sibling_of {
                    Some(p) => p.with_extension("model.json"),
                    None => PathBuf::from("edlogic-model.json"),
                }),
                (None, Format::Json) => None,
            };
            if let Some(t) = target {
                fs::write(&t, m.to_json()).with_context(|| format!("cannot write {}", t.display()))?;
                model_path = Some(t);
            }
        }
    }
    match config.format {
        Format::Json => {
            let mut v = w.to_value();
            let obj = v.as_object_mut().expect("witness is an object");
            obj.insert("verdict".into(), json!(header.to_lowercase().replace(' ', "_")));
            if !wants_model(config) || model_path.is_some() {
                obj.remove("model");
            }
            if let Some(p) = &model_path {
                obj.insert("model_path".into(), json!(p.display().to_string()));
            }
            print!("{}", to_pretty(&v));
        }
        Format::Text => {
            let mut s = format!("{header}\n");
            let _ = writeln!(s, "propositions: {}", w.basis.props().join(", "));
            for a in 0..w.basis.n() {
                let _ = writeln!(s, "  atom {} = {}", a + 1, w.basis.atom_formula(a));
            }
            s.push_str("e:\n");
            for (mask, v) in w.e.iter().enumerate() {
                let _ = writeln!(s, "  {} = {}", Witness::set_label(mask), fmt_rational(v));
            }
            s.push_str("mass:\n");
            for (mask, v) in w.mass.iter().enumerate().filter(|(_, v)| *v != &edlogic::rational::zero()) {
                let _ = writeln!(s, "  {} = {}", Witness::set_label(mask), fmt_rational(v));
            }
            match (&w.model, &model_path) {
                (Some(m), Some(p)) => {
                    let _ = writeln!(s, "model: {} ({} points)", p.display(), m.space().len());
                }
                (None, _) if wants_model(config) => {
                    let _ = writeln!(
                        s,
                        "model: not built ({} points exceed --model-cap)",
                        decision::witness_frame_size(w.basis.n())
                    );
                }
                _ => {}
            }
            print!("{s}");
        }
    }
    Ok(())
}

fn check(formula: Option<String>, file: Option<PathBuf>, config: &Config) -> Result<u8> {
    let f = match (formula, &file) {
        (Some(text), None) => parse_formula(&text)?,
        (None, Some(path)) => EdFormula::conjoin(parse_file(path)?)
            .ok_or_else(|| anyhow!("{} contains no formulas", path.display()))?,
        (Some(_), Some(_)) => bail!("give either a formula or --file, not both"),
        (None, None) => bail!("no formula given"),
    };
    match decision::check_consistency(&f, &limits(config))? {
        SatResult::Consistent(w) => {
            report_witness(&w, config, file.as_deref(), "CONSISTENT")?;
            Ok(0)
        }
        SatResult::Inconsistent => {
            match config.format {
                Format::Text => println!("INCONSISTENT"),
                Format::Json => print!("{}", to_pretty(&SatResult::Inconsistent.to_value())),
            }
            Ok(1)
        }
    }
}

fn entail(goal: &str, premises: Option<PathBuf>, inline: &[String], config: &Config) -> Result<u8> {
    let goal = parse_formula(goal)?;
    let mut prem = match &premises {
        Some(p) => parse_file(p)?,
        None => Vec::new(),
    };
    for p in inline {
        prem.push(parse_formula(p)?);
    }
    match decision::entailment(&prem, &goal, &limits(config))? {
        Entailment::Entailed => {
            match config.format {
                Format::Text => println!("ENTAILED"),
                Format::Json => print!("{}", to_pretty(&json!({ "verdict": "entailed" }))),
            }
            Ok(0)
        }
        Entailment::Countermodel(w) => {
            report_witness(&w, config, premises.as_deref(), "NOT ENTAILED")?;
            Ok(1)
        }
    }
}

/// Loads a model from a space file, a model file or a witness file.
fn load_model(path: &Path, valuation: Option<&Path>, declare: Vec<String>) -> Result<Model> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let v = v.get("model").cloned().unwrap_or(v);
    let space = space::space_from_value(&v).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let val = match valuation {
        Some(p) => serde_json::from_str(&read(p)?).with_context(|| format!("{} is not JSON", p.display()))?,
        None => v.get("valuation").cloned().unwrap_or_else(|| json!({})),
    };
    Ok(Model::from_parts(space, &val, declare)?)
}

fn eval(path: &Path, formula: &str, valuation: Option<&Path>, declare: Vec<String>, config: &Config) -> Result<u8> {
    let f = parse_formula(formula)?;
    let model = load_model(path, valuation, declare)?;
    let truth = decision::satisfies(&model, &f)?;
    let terms = decision::term_values(&model, &f)?;
    match config.format {
        Format::Text => {
            println!("{}", if truth { "TRUE" } else { "FALSE" });
            for (arg, v) in &terms {
                println!("  ED({arg}) = {}", fmt_rational(v));
            }
        }
        Format::Json => {
            let mut t = Map::new();
            for (arg, v) in &terms {
                t.insert(format!("ED({arg})"), to_json(v));
            }
            print!("{}", to_pretty(&json!({ "value": truth, "terms": t })));
        }
    }
    Ok(if truth { 0 } else { 1 })
}

fn load_space(path: &Path) -> Result<MetricProbSpace> {
    space::space_from_json(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn measures(path: &Path, points: &[String], full: bool, config: &Config) -> Result<u8> {
    let s = load_space(path)?;
    let set = if full {
        s.frame().full()
    } else {
        let names: Vec<&str> = points
            .iter()
            .flat_map(|p| p.split(','))
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .collect();
        s.frame().subset(&names)?
    };
    let q = s.dual_measures(&set)?;
    let rows = [("ed", &q.ed), ("es", &q.es), ("ea", &q.ea), ("er", &q.er)];
    match config.format {
        Format::Text => {
            println!("set = {{{}}}", s.frame().set_names(&set).join(","));
            for (k, v) in rows {
                println!("{k} = {}", fmt_rational(v));
            }
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("set".into(), json!(s.frame().set_names(&set)));
            for (k, v) in rows {
                obj.insert(k.into(), to_json(v));
            }
            print!("{}", to_pretty(&Value::Object(obj)));
        }
    }
    Ok(0)
}

fn mobius(input: &Path, direction: Direction, out: Option<&Path>) -> Result<u8> {
    let text = read(input)?;
    let result = match direction {
        Direction::ToMass => {
            let sf = evidence::table_from_json(&text, None)?;
            let m = evidence::mass_from_doubt(&sf)?;
            evidence::table_to_json(m.as_set_function())
        }
        Direction::FromMass => {
            // unlisted subsets carry no mass
            let sf = evidence::table_from_json(&text, Some(edlogic::rational::zero()))?;
            let m = MassFunction::new(sf.frame().clone(), sf.values().to_vec())?;
            evidence::table_to_json(&evidence::doubt_from_mass(&m))
        }
    };
    write_or_print(out, &result)?;
    Ok(0)
}

fn product(spaces: &[PathBuf], joint: Option<&Path>, out: Option<&Path>, config: &Config) -> Result<u8> {
    let limits = limits(config);
    let ps = match spaces {
        [] => bail!("no input spaces"),
        [single] => {
            if joint.is_some() {
                bail!("--joint needs component space files, not a product file");
            }
            product::product_from_json(&read(single)?, &limits)?
        }
        many => {
            let comps = many.iter().map(|p| load_space(p)).collect::<Result<Vec<_>>>()?;
            let joint = match joint {
                Some(p) => {
                    let v: Value = serde_json::from_str(&read(p)?)
                        .with_context(|| format!("{} is not JSON", p.display()))?;
                    Some(product::joint_entries(&v)?)
                }
                None => None,
            };
            product::build_product(comps, joint.as_deref(), &limits)?
        }
    };
    write_or_print(out, &space::space_to_json(ps.space()))?;
    Ok(0)
}

fn random_space(points: usize, out: Option<&Path>, config: &Config) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let s = sample::random_space(points, &mut rng);
    write_or_print(out, &space::space_to_json(&s))?;
    Ok(0)
}
