use std::fmt::Write;

use crate::psychometrics::{AnalysisGranularity, ReliabilityReport};

fn num(v: f64) -> String {
    format!("{v:.2}")
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.digits$}"))
}

/// Plain markdown rendering of a report: descriptives in the N / Missing /
/// Mean / Median / SD / Min / Max layout, reliability, loadings, the
/// correlation grid, the histogram and all notes.
pub fn render_markdown(report: &ReliabilityReport) -> String {
    let mut out = String::new();
    let scope = match (report.granularity, &report.item) {
        (AnalysisGranularity::Fields, Some(item)) => format!("fields of item {item}"),
        _ => "item totals".to_string(),
    };
    let _ = writeln!(out, "# Reliability report ({scope})\n");
    let _ = writeln!(out, "Rows used: {} of {}\n", report.rows_used, report.rows_total);

    let _ = writeln!(out, "## Descriptive statistics\n");
    let labels: Vec<&str> = report.descriptives.iter().map(|c| c.label.as_str()).collect();
    let _ = writeln!(out, "| Descriptives | {} |", labels.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(labels.len()));
    let row = |name: &str, f: &dyn Fn(&crate::psychometrics::ColumnStats) -> String| {
        let cells: Vec<String> = report.descriptives.iter().map(f).collect();
        format!("| {name} | {} |\n", cells.join(" | "))
    };
    out += &row("N", &|c| c.n.to_string());
    out += &row("Missing", &|c| c.missing.to_string());
    let stat = |f: fn(&crate::psychometrics::DescriptiveStats) -> f64| {
        move |c: &crate::psychometrics::ColumnStats| c.stats.as_ref().map_or_else(|| "undefined".into(), |s| num(f(s)))
    };
    out += &row("Mean", &stat(|s| s.mean));
    out += &row("Median", &stat(|s| s.median));
    out += &row("Standard deviation", &stat(|s| s.sd));
    out += &row("Minimum", &stat(|s| s.min));
    out += &row("Maximum", &stat(|s| s.max));
    out += &row("Skewness", &|c| opt(c.stats.as_ref().and_then(|s| s.skewness), 3));

    let _ = writeln!(out, "\n## Reliability\n");
    let _ = writeln!(out, "- Items: {}", report.items.join(", "));
    let _ = writeln!(out, "- Cronbach's alpha: {}", opt(report.alpha, 3));
    let _ = writeln!(out, "- McDonald's omega: {}", opt(report.omega, 3));
    if let Some(model) = &report.factor {
        let _ = writeln!(
            out,
            "\n| Item | Loading | Uniqueness |\n|---|---|---|"
        );
        for ((label, l), p) in report.items.iter().zip(&model.loadings).zip(&model.uniquenesses) {
            let _ = writeln!(out, "| {label} | {l:.3} | {p:.3} |");
        }
        let _ = writeln!(
            out,
            "\nFactor fit: {} after {} iterations.",
            if model.converged { "converged" } else { "not converged" },
            model.iterations
        );
    }

    let c = &report.correlations;
    let _ = writeln!(out, "\n## Correlations ({} rows)\n", c.rows_used);
    let _ = writeln!(out, "| | {} |", c.labels.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(c.labels.len()));
    for (label, values) in c.labels.iter().zip(&c.values) {
        let cells: Vec<String> = values.iter().map(|v| opt(*v, 2)).collect();
        let _ = writeln!(out, "| {label} | {} |", cells.join(" | "));
    }

    if let Some(h) = &report.histogram {
        let _ = writeln!(out, "\n## Histogram of {}\n", h.label);
        let _ = writeln!(out, "| Bin | Count |\n|---|---|");
        let last = h.counts.len() - 1;
        for (i, count) in h.counts.iter().enumerate() {
            let close = if i == last { "]" } else { ")" };
            let _ = writeln!(out, "| [{}, {}{close} | {count} |", num(h.edges[i]), num(h.edges[i + 1]));
        }
    }

    if !report.notes.is_empty() {
        let _ = writeln!(out, "\n## Notes\n");
        for note in &report.notes {
            let _ = writeln!(out, "- {}", note.message);
        }
    }
    out
}
