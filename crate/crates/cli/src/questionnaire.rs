use w6h_core::linter::max_severity;
use w6h_core::storage::{self, ExportFormat};
use w6h_core::{lint_document, parse_questionnaire, Severity};

use crate::failure::{Failure, FINDINGS};
use crate::{io, Format, GenerateArgs, LintArgs};

pub fn generate(args: GenerateArgs) -> Result<u8, Failure> {
    let matrix = io::load_matrix(args.source.matrix.as_deref())?;
    let format = match args.format {
        Format::Markdown => ExportFormat::Markdown,
        Format::Csv => ExportFormat::Csv,
    };
    let text = storage::export_questionnaire(&matrix, &args.group, format)?;
    match args.out {
        Some(path) => io::write(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

pub fn lint(args: LintArgs) -> Result<u8, Failure> {
    let text = io::read(&args.doc)?;
    let graph = io::load_graph(args.graph.graph.as_deref())?;
    let matrix = match &args.matrix {
        Some(path) => Some(io::load_matrix(Some(path))?),
        None => None,
    };
    let doc = parse_questionnaire(&text);
    let findings = lint_document(&doc, &graph, matrix.as_ref());

    if args.json {
        println!("{}", storage::findings_to_json(&findings).trim_end());
    } else {
        let path = args.doc.display();
        for f in &findings {
            println!(
                "{path}:{}: {}[{}] {}: {}",
                f.line,
                f.severity,
                f.code,
                f.code.slug(),
                f.message
            );
        }
        let errors = findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count();
        println!(
            "{path}: {} questions, {errors} errors, {} warnings",
            doc.question_count(),
            findings.len() - errors
        );
    }
    Ok(match max_severity(&findings) {
        Some(Severity::Error) => FINDINGS,
        _ => 0,
    })
}
