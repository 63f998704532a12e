//! Self-contained SVG scatter of facts space: the classical sweep cloud in
//! the `(F3, F2)` plane, the two boundary lines, and labeled markers for the
//! reference states. Output is a pure function of the inputs.

use bellfacts::quantum::FactsTriple;
use bellfacts::strategies::boundary_lines;
use bellfacts::sweep::SweepRecord;
use std::fmt::Write;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 70.0;
const PLOT: f64 = SIZE - 2.0 * MARGIN;

fn x(f3: f64) -> f64 {
    MARGIN + f3 * PLOT
}

fn y(f2: f64) -> f64 {
    MARGIN + (1.0 - f2) * PLOT
}

pub fn render(records: &[SweepRecord], states: &[(String, FactsTriple)]) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(w, "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>").unwrap();
    writeln!(
        w,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{PLOT}\" height=\"{PLOT}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    )
    .unwrap();

    // Axis ticks and labels.
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let tx = x(v);
        let ty = y(v);
        writeln!(
            w,
            "<line x1=\"{tx:.2}\" y1=\"{:.2}\" x2=\"{tx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            SIZE - MARGIN,
            SIZE - MARGIN + 6.0
        )
        .unwrap();
        writeln!(
            w,
            "<text x=\"{tx:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{v}</text>",
            SIZE - MARGIN + 22.0
        )
        .unwrap();
        writeln!(
            w,
            "<line x1=\"{:.2}\" y1=\"{ty:.2}\" x2=\"{MARGIN}\" y2=\"{ty:.2}\" stroke=\"black\"/>",
            MARGIN - 6.0
        )
        .unwrap();
        writeln!(
            w,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"end\">{v}</text>",
            MARGIN - 10.0,
            ty + 4.0
        )
        .unwrap();
    }
    writeln!(
        w,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"16\" text-anchor=\"middle\">F3</text>",
        SIZE / 2.0,
        SIZE - 18.0
    )
    .unwrap();
    writeln!(
        w,
        "<text x=\"20\" y=\"{:.2}\" font-size=\"16\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {:.2})\">F2</text>",
        SIZE / 2.0,
        SIZE / 2.0
    )
    .unwrap();

    // Classical-region boundary lines.
    let (upper, lower) = boundary_lines();
    for line in [upper, lower] {
        writeln!(
            w,
            "<line class=\"boundary\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"#3355aa\" stroke-width=\"1.5\"/>",
            x(0.0),
            y(line.eval(0.0)),
            x(1.0),
            y(line.eval(1.0))
        )
        .unwrap();
    }

    for record in records {
        writeln!(
            w,
            "<circle class=\"classical\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"#cc3333\" \
             fill-opacity=\"0.6\"/>",
            x(record.facts.f3),
            y(record.facts.f2)
        )
        .unwrap();
    }

    for (label, facts) in states {
        let cx = x(facts.f3);
        let cy = y(facts.f2);
        writeln!(
            w,
            "<circle class=\"state\" id=\"state-{label}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\" \
             fill=\"black\"/>"
        )
        .unwrap();
        writeln!(
            w,
            "<text class=\"state-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\">{label}</text>",
            cx + 8.0,
            cy - 8.0
        )
        .unwrap();
    }

    writeln!(w, "</svg>").unwrap();
    out
}
