use w6h_core::storage;
use w6h_core::{
    canonical_order, enumerate_valid_orders, validate_matrix, Concern, Interrogative, Severity,
};

use crate::failure::{Failure, FINDINGS};
use crate::{io, AddConcernArgs, MatrixCommand};

pub fn run(cmd: MatrixCommand) -> Result<u8, Failure> {
    match cmd {
        MatrixCommand::Show { source, json } => {
            let matrix = io::load_matrix(source.matrix.as_deref())?;
            if json {
                print!("{}", storage::save_matrix(&matrix));
                return Ok(0);
            }
            println!("{} (version {})", matrix.name, matrix.version);
            for group in &matrix.groups {
                println!("\n{} [{}]", group.display_name, group.id);
                for i in Interrogative::ALL {
                    for concern in matrix.cell(&group.id, i) {
                        let marker = if concern.gatekeeper {
                            " (gatekeeper)"
                        } else {
                            ""
                        };
                        println!("  {} {:<5}  {}{marker}", i.rank(), i.as_str(), concern.text);
                    }
                }
            }
            Ok(0)
        }
        MatrixCommand::Validate { source, json } => {
            let matrix = io::load_matrix(source.matrix.as_deref())?;
            let findings = validate_matrix(&matrix);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&findings).expect("findings serialize")
                );
            } else {
                for f in &findings {
                    println!("{f}");
                }
                println!(
                    "{} groups, {} concerns, {} findings",
                    matrix.groups.len(),
                    matrix.concerns.len(),
                    findings.len()
                );
            }
            let failed = findings.iter().any(|f| f.severity == Severity::Error);
            Ok(if failed { FINDINGS } else { 0 })
        }
        MatrixCommand::AddConcern(args) => add_concern(args),
        MatrixCommand::Graph { graph, json } => {
            let graph = io::load_graph(graph.graph.as_deref())?;
            if json {
                print!("{}", storage::save_graph(&graph));
                return Ok(0);
            }
            for rule in graph.rules() {
                let mut parts: Vec<String> =
                    rule.all_of.iter().map(|i| i.as_str().to_string()).collect();
                for group in &rule.any_of {
                    let names: Vec<&str> = group.iter().map(Interrogative::as_str).collect();
                    parts.push(format!("({})", names.join(" | ")));
                }
                println!("{:<5} after {}", rule.target.as_str(), parts.join(" + "));
            }
            match canonical_order(&graph) {
                Ok(order) => {
                    let names: Vec<&str> = order.iter().map(|i| i.as_str()).collect();
                    println!("canonical order: {}", names.join(", "));
                    println!("valid orders: {}", enumerate_valid_orders(&graph).len());
                    Ok(0)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn add_concern(args: AddConcernArgs) -> Result<u8, Failure> {
    let matrix = io::load_matrix(args.source.matrix.as_deref())?;
    let interrogative: Interrogative = args
        .interrogative
        .parse()
        .map_err(|e| Failure::usage(format!("{e}")))?;
    // Display names are accepted; unknown labels are left for add_concern to reject.
    let groups: Vec<String> = args
        .groups
        .iter()
        .map(|g| {
            matrix
                .resolve_group(g)
                .map_or_else(|| g.clone(), |r| r.id.clone())
        })
        .collect();
    let mut concern = Concern::new(args.id, args.text, interrogative, groups).with_tags(args.tags);
    if let Some(q) = args.question {
        concern = concern.with_question(q);
    }
    if args.gatekeeper {
        concern = concern.gatekeeper();
    }
    if let Some(source) = args.candidates_from {
        concern = concern.with_candidates_from(source);
    }
    let id = concern.id.clone();
    let updated = matrix.add_concern(concern)?;
    let text = storage::save_matrix(&updated);
    match args.out.or(args.source.matrix) {
        Some(path) => {
            io::write(&path, &text)?;
            eprintln!("added `{id}` to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(0)
}
