//! `arsys`: batch front end for the Weyl groupoid engine.
//!
//! Exit status: 0 definitive success, 1 definitive negative, 2 indeterminate
//! (a cap was hit), 3 input error.

mod input;

use std::io::Write;
use std::process::ExitCode;

use arsys_core::catalog::{self, Catalog};
use arsys_core::equivalence::{self, GraphVerdict, WbOutcome};
use arsys_core::groupoid::{self, Caps, Verdict};
use arsys_core::{subsystems, Basis};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::input::{load, parse_roots, InputError};

#[derive(Parser, Debug)]
#[command(name = "arsys", version, about = "Arithmetic root systems of diagonal bicharacters")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximal number of groupoid objects (or group elements) to enumerate.
    #[arg(long, global = true, env = "ARSYS_CAPS_OBJECTS")]
    caps_objects: Option<usize>,

    /// Maximal absolute coordinate of a root (or matrix entry).
    #[arg(long, global = true, env = "ARSYS_CAPS_NORM")]
    caps_norm: Option<i64>,

    /// Maximal reflection depth.
    #[arg(long, global = true, env = "ARSYS_CAPS_DEPTH")]
    caps_depth: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the input gives an arithmetic root system.
    Check { input: String },
    /// Roots, positive roots and the diagram at every object.
    Roots { input: String },
    /// The generalized Dynkin diagram at the standard basis.
    Diagram {
        input: String,
        /// Emit the canonical relabeling.
        #[arg(long)]
        canonical: bool,
    },
    /// The graph of diagrams reachable by reflections.
    Graph {
        input: String,
        /// Shorthand for --format dot.
        #[arg(long)]
        dot: bool,
    },
    /// The group W^B: order, element orders, structure and generators.
    WbGroup { input: String },
    /// The subsystem on the span of the given roots.
    Restrict {
        input: String,
        /// Roots as "1,1,0; 0,0,1".
        #[arg(long)]
        roots: String,
    },
    /// Run the catalog verification.
    Verify {
        /// Alternative catalog file (JSON lines).
        #[arg(long)]
        catalog: Option<String>,
        /// Only this table.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: Option<u8>,
    },
    /// Exhaustive rank-3 search over the N-th roots of unity, compared with
    /// Table 2.
    Classify {
        #[arg(long)]
        torsion: u64,
        #[arg(long)]
        catalog: Option<String>,
    },
}

struct Output {
    status: u8,
    json: Value,
    text: String,
    dot: Option<String>,
}

impl Output {
    fn new(status: u8, json: Value, text: String) -> Self {
        Output {
            status,
            json,
            text,
            dot: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let format = match &cli.command {
                Command::Graph { dot: true, .. } => Format::Dot,
                _ => cli.format,
            };
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n",
                Format::Text => format!("{}\n", out.text.trim_end()),
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => {
                        eprintln!("error: this command has no DOT output");
                        return ExitCode::from(3);
                    }
                },
            };
            // A closed pipe downstream is not our failure.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn caps(cli: &Cli) -> Result<Caps, InputError> {
    let d = Caps::default();
    Caps::new(
        cli.caps_objects.unwrap_or(d.max_objects),
        cli.caps_norm.unwrap_or(d.max_root_norm),
        cli.caps_depth.unwrap_or(d.max_depth),
    )
    .map_err(|e| InputError(e.to_string()))
}

fn load_catalog(path: &Option<String>) -> Result<Catalog, InputError> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{p}: {e}")))?;
            Catalog::parse(&text).map_err(|e| InputError(format!("{p}: {e}")))
        }
    }
}

fn verdict_status(v: &Verdict) -> u8 {
    match v {
        Verdict::Finite => 0,
        Verdict::NotFull { .. } => 1,
        Verdict::Exceeded { .. } => 2,
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Finite => "finite".into(),
        Verdict::NotFull { object, i, j } => {
            format!("NotFull(object {object}, vertices {}, {})", i + 1, j + 1)
        }
        Verdict::Exceeded { cap } => format!("Exceeded({cap})"),
    }
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    let caps = caps(cli)?;
    match &cli.command {
        Command::Check { input } => {
            let chi = load(input)?.bicharacter();
            let res = groupoid::explore(&chi, &caps);
            let note = groupoid::advisory(&chi, &res.verdict);
            let status = verdict_status(&res.verdict);
            let word = ["yes", "no", "indeterminate"][status as usize];
            let mut text = format!(
                "{word}: {} ({} objects, {} roots)\n",
                verdict_text(&res.verdict),
                res.objects.len(),
                res.roots.len()
            );
            if let Some(n) = &note {
                text.push_str(&format!("note: {n}\n"));
            }
            let json = json!({
                "arithmetic": word,
                "verdict": res.verdict,
                "objects": res.objects.len(),
                "roots": res.roots.len(),
                "advisory": note,
            });
            Ok(Output::new(status, json, text))
        }
        Command::Roots { input } => {
            let chi = load(input)?.bicharacter();
            let res = groupoid::explore(&chi, &caps);
            let positive = if res.is_finite() {
                Some(groupoid::positive_roots(&res, &Basis::standard(chi.rank())).map_err(|e| InputError(e.to_string()))?)
            } else {
                None
            };
            let objects: Vec<Value> = res
                .objects
                .iter()
                .map(|o| json!({"basis": o.basis.vectors(), "depth": o.depth, "diagram": o.diagram.to_repr()}))
                .collect();
            let mut text = format!("{}: {} objects, {} roots\n", verdict_text(&res.verdict), res.objects.len(), res.roots.len());
            if let Some(p) = &positive {
                text.push_str(&format!("positive roots ({}):\n", p.len()));
                for r in p {
                    text.push_str(&format!("  {r:?}\n"));
                }
            }
            let json = json!({
                "verdict": res.verdict,
                "roots": res.roots,
                "positive_roots": positive,
                "objects": objects,
            });
            Ok(Output::new(verdict_status(&res.verdict), json, text))
        }
        Command::Diagram { input, canonical } => {
            let d = match load(input)? {
                input::Loaded::Diagram(d) => d,
                input::Loaded::Bicharacter(b) => b.standard_diagram(),
            };
            let d = if *canonical { d.canonical() } else { d };
            let mut out = Output::new(0, serde_json::to_value(d.to_repr()).expect("serializable"), d.render());
            out.dot = Some(d.to_dot());
            Ok(out)
        }
        Command::Graph { input, .. } => {
            let chi = load(input)?.bicharacter();
            let g = equivalence::build_diagram_graph(&chi, &caps);
            let status = match g.verdict {
                GraphVerdict::Complete => 0,
                GraphVerdict::NotFull { .. } => 1,
                GraphVerdict::Exceeded { .. } => 2,
            };
            let mut text = format!("{:?}: {} diagrams\n", g.verdict, g.nodes.len());
            for (k, d) in g.nodes.iter().enumerate() {
                let arrows: Vec<String> = g.arrows[k]
                    .iter()
                    .enumerate()
                    .map(|(v, t)| match t {
                        Some(t) => format!("{}->{t}", v + 1),
                        None => format!("{}->?", v + 1),
                    })
                    .collect();
                text.push_str(&format!("  {k}: {}   {}\n", d.render(), arrows.join(" ")));
            }
            let json = json!({
                "verdict": g.verdict,
                "nodes": g.nodes.iter().map(|d| d.to_repr()).collect::<Vec<_>>(),
                "rendered": g.nodes.iter().map(|d| d.render()).collect::<Vec<_>>(),
                "arrows": g.arrows,
            });
            let mut out = Output::new(status, json, text);
            out.dot = Some(g.to_dot());
            Ok(out)
        }
        Command::WbGroup { input } => {
            let chi = load(input)?.bicharacter();
            match equivalence::generate_wb(&chi, &caps) {
                WbOutcome::Finite(g) => {
                    let desc = equivalence::describe_group(&g);
                    let mut text = format!(
                        "order {}; structure {}; element orders {:?}; abelianization {:?}\n",
                        desc.order,
                        if desc.matches.is_empty() { "unknown".to_string() } else { desc.matches.join(" = ") },
                        desc.element_orders,
                        desc.abelian_invariants
                    );
                    for gen in &g.generators {
                        text.push_str(&format!("  {:?}  ({})\n", gen.matrix.rows(), gen.source));
                    }
                    let json = json!({
                        "order": desc.order,
                        "element_orders": desc.element_orders,
                        "abelian_invariants": desc.abelian_invariants,
                        "descriptor": desc.matches,
                        "generators": g.generators,
                    });
                    Ok(Output::new(0, json, text))
                }
                WbOutcome::NotFull => Ok(Output::new(1, json!({"verdict": "not_full"}), "not full\n".into())),
                WbOutcome::Exceeded(cap) => Ok(Output::new(
                    2,
                    json!({"verdict": "exceeded", "cap": cap}),
                    format!("Exceeded({cap})\n"),
                )),
            }
        }
        Command::Restrict { input, roots } => {
            let chi = load(input)?.bicharacter();
            let f = parse_roots(roots, chi.rank())?;
            let parent = groupoid::explore(&chi, &caps);
            if !parent.is_finite() {
                let text = format!("parent system: {}\n", verdict_text(&parent.verdict));
                return Ok(Output::new(verdict_status(&parent.verdict), json!({"parent": parent.verdict}), text));
            }
            let sub = subsystems::restrict(&chi, &parent, &f, &caps).map_err(|e| InputError(e.to_string()))?;
            let d = sub.restricted_chi().standard_diagram();
            let mut text = format!("E_H ({:?}): {:?}\n", sub.method, sub.e_h);
            text.push_str(&format!("roots in H: {}\n", sub.roots_in_h.len()));
            text.push_str(&format!("diagram: {}\n", d.render()));
            let json = json!({
                "subsystem": sub,
                "diagram": d.to_repr(),
                "rendered": d.render(),
            });
            Ok(Output::new(if sub.closure_ok { 0 } else { 1 }, json, text))
        }
        Command::Verify { catalog: path, table } => {
            let cat = load_catalog(path)?;
            let report = match table {
                Some(t) => catalog::verify_table(&cat, *t, &caps),
                None => catalog::verify_tables(&cat, &caps),
            };
            let mut text = format!("{}\n", report.summary());
            for f in &report.failures {
                text.push_str(&format!(
                    "FAIL table {} row {} template {}: {} [{}]\n",
                    f.table,
                    f.row,
                    f.template.map_or("-".to_string(), |t| t.to_string()),
                    f.message,
                    f.assignment
                ));
            }
            for n in &report.notes {
                text.push_str(&format!("note: {n}\n"));
            }
            let status = if report.passed() { 0 } else { 1 };
            Ok(Output::new(status, serde_json::to_value(&report).expect("serializable"), text))
        }
        Command::Classify { torsion, catalog: path } => {
            if *torsion == 0 || *torsion > 12 {
                return Err(InputError(format!("--torsion {torsion} outside the search bound 1..=12")));
            }
            let cat = load_catalog(path)?;
            let report = catalog::classify_rank3(*torsion, &caps).map_err(|e| InputError(e.to_string()))?;
            let cmp = catalog::compare_with_catalog(&report, &cat).map_err(|e| InputError(e.to_string()))?;
            let mut text = format!(
                "N = {}: {} connected diagrams scanned, {} arithmetic classes ({} diagrams); catalog gives {} diagrams\n",
                torsion,
                report.scanned,
                report.classes.len(),
                cmp.diagrams,
                cmp.catalog_diagrams
            );
            text.push_str(&format!(
                "rows expressible: {:?}; not expressible at this N: {:?}\n",
                cmp.rows_expressible, cmp.rows_not_expressible
            ));
            text.push_str(&format!(
                "capped classes: {} excluded by a certificate, {} unresolved\n",
                report.excluded.len(),
                report.unresolved.len()
            ));
            for class in &report.classes {
                let r: Vec<String> = class.iter().map(|d| d.render()).collect();
                text.push_str(&format!("  {}\n", r.join("  |  ")));
            }
            for d in &cmp.unmatched {
                text.push_str(&format!("UNMATCHED {d}\n"));
            }
            for d in &cmp.missing {
                text.push_str(&format!("MISSING {d}\n"));
            }
            let status = if !cmp.unmatched.is_empty() || !cmp.missing.is_empty() {
                1
            } else if !report.unresolved.is_empty() {
                2
            } else {
                0
            };
            let json = json!({
                "comparison": cmp,
                "classes": report.classes.iter().map(|c| c.iter().map(|d| d.to_repr()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "excluded": report.excluded.iter().map(|(c, why)| json!({"representative": c[0].render(), "size": c.len(), "reason": why})).collect::<Vec<_>>(),
                "unresolved": report.unresolved.iter().map(|c| c[0].render()).collect::<Vec<_>>(),
            });
            Ok(Output::new(status, json, text))
        }
    }
}
