//! JSON and CSV writers.

use std::io::Write;
use std::path::Path;

use crate::args::Format;
use crate::document::{JobResult, ResultDocument};
use crate::CliError;

/// Renders `doc` in `format`.
pub fn render(doc: &ResultDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => to_csv(doc),
    }
}

/// Writes the rendered document to `path`, or standard output.
pub fn emit(doc: &ResultDocument, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = render(doc, format);
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// The main table of the document; traces are only carried by JSON.
pub fn to_csv(doc: &ResultDocument) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: Vec<String>| w.write_record(&fields).expect("in-memory write");
    match &doc.result {
        JobResult::Motifs { valmp, .. } => {
            row(["offset", "distance", "norm_distance", "length", "neighbor"].map(String::from).to_vec());
            for i in 0..valmp.len() {
                let populated = valmp.is_populated(i);
                row(vec![
                    i.to_string(),
                    num(valmp.distances[i]),
                    num(valmp.norm_distances[i]),
                    if populated { valmp.lengths[i].to_string() } else { String::new() },
                    opt(valmp.indices[i]),
                ]);
            }
        }
        JobResult::MotifSets { sets, .. } => {
            row([
                "rank", "length", "anchor_a", "anchor_b", "distance", "norm_distance", "radius",
                "frequency", "members",
            ]
            .map(String::from)
            .to_vec());
            for (r, s) in sets.iter().enumerate() {
                let members: Vec<String> = s.members.iter().map(|m| m.to_string()).collect();
                row(vec![
                    (r + 1).to_string(),
                    s.length.to_string(),
                    s.anchor.0.to_string(),
                    s.anchor.1.to_string(),
                    num(s.distance),
                    num(s.norm_distance),
                    num(s.radius),
                    s.frequency().to_string(),
                    members.join(" "),
                ]);
            }
        }
        JobResult::Discords { per_length, merged } => {
            row(["scope", "length", "rank", "mth", "distance", "norm_distance", "offset"]
                .map(String::from)
                .to_vec());
            for i in 0..merged.k {
                for j in 0..merged.m {
                    if let Some(c) = merged.cell(i, j) {
                        row(vec![
                            "merged".into(),
                            c.length.to_string(),
                            (i + 1).to_string(),
                            (j + 1).to_string(),
                            num(c.distance),
                            num(c.norm_distance),
                            c.offset.to_string(),
                        ]);
                    }
                }
            }
            for d in per_length.iter().flatten() {
                for i in 0..d.k {
                    for j in 0..d.m {
                        if let Some(c) = d.cell(i, j) {
                            row(vec![
                                "length".into(),
                                d.length.to_string(),
                                (i + 1).to_string(),
                                (j + 1).to_string(),
                                num(c.distance),
                                num(c.distance / (d.length as f64).sqrt()),
                                c.offset.to_string(),
                            ]);
                        }
                    }
                }
            }
        }
        JobResult::MatrixProfile { profile } => {
            row(["offset", "distance", "neighbor"].map(String::from).to_vec());
            for i in 0..profile.len() {
                row(vec![i.to_string(), num(profile.distances[i]), opt(profile.indices[i])]);
            }
        }
        JobResult::Bench(b) => {
            row([
                "length", "profiles", "valid", "non_valid", "recomputed", "full_recompute",
                "valmod_secs", "baseline_secs",
            ]
            .map(String::from)
            .to_vec());
            for t in &b.pruning.lengths {
                row(vec![
                    t.length.to_string(),
                    t.profiles.to_string(),
                    t.valid.to_string(),
                    t.non_valid.to_string(),
                    t.recomputed.to_string(),
                    t.full_recompute.to_string(),
                    String::new(),
                    String::new(),
                ]);
            }
            let r = &b.pruning;
            row(vec![
                "total".into(),
                r.profiles.to_string(),
                r.valid.to_string(),
                r.non_valid.to_string(),
                r.recomputed.to_string(),
                r.full_recomputes.to_string(),
                opt(b.valmod_secs),
                opt(b.baseline_secs),
            ]);
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
