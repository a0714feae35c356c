//! SVG, TikZ and DOT renderings of lattice diagrams and orbit fragments.

use std::fmt::Write;

use crate::ar_tubes::TauOrbit;
use crate::cm::DiagramData;

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

/// Lattice points `(x, h)` below the top rim, down to height 0.
fn lattice_points(d: &DiagramData) -> Vec<(usize, i64)> {
    let top = &d.layers[0];
    let mut pts = Vec::new();
    for (x, &h) in top.iter().enumerate() {
        let mut y = h;
        while y >= 0 {
            pts.push((x, y));
            y -= 2;
        }
    }
    pts
}

fn max_height(d: &DiagramData) -> i64 {
    d.layers.iter().flatten().copied().max().unwrap_or(0)
}

/// Rims as polylines over the half-step grid; the top layer is drawn thickest.
pub fn svg(d: &DiagramData) -> String {
    let width = d.n as f64 * UNIT + 2.0 * MARGIN;
    let hmax = max_height(d);
    let height = hmax as f64 * UNIT + 2.0 * MARGIN;
    let px = |x: usize| MARGIN + x as f64 * UNIT;
    let py = |h: i64| MARGIN + (hmax - h) as f64 * UNIT;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    for x in [0, d.n as usize] {
        writeln!(
            s,
            r#"  <line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="gray" stroke-dasharray="2,4"/>"#,
            px(x),
            MARGIN,
            height - MARGIN
        )
        .unwrap();
    }
    for (x, h) in lattice_points(d) {
        writeln!(s, r#"  <circle cx="{}" cy="{}" r="3" fill="black"/>"#, px(x), py(h)).unwrap();
    }
    for (li, layer) in d.layers.iter().enumerate() {
        let pts: Vec<String> = layer.iter().enumerate().map(|(x, &h)| format!("{},{}", px(x), py(h))).collect();
        let w = if li == 0 { 4 } else { 2 };
        writeln!(
            s,
            r#"  <polyline points="{}" fill="none" stroke="black" stroke-width="{w}" class="rim" data-layer="{li}"/>"#,
            pts.join(" ")
        )
        .unwrap();
        if li == 0 {
            for x in 1..layer.len() {
                let (mx, my) = ((px(x - 1) + px(x)) / 2.0, (py(layer[x - 1]) + py(layer[x])) / 2.0 - 8.0);
                writeln!(
                    s,
                    r#"  <text x="{mx}" y="{my}" font-size="12" text-anchor="middle">{}</text>"#,
                    d.columns[x]
                )
                .unwrap();
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// TikZ lattice picture: dots, thick labelled rim arrows, top layer ultra thick.
pub fn tikz(d: &DiagramData) -> String {
    let mut s = String::new();
    s.push_str("\\begin{tikzpicture}[scale=0.8, quivarrow/.style={black, -latex, thin}]\n");
    for (x, h) in lattice_points(d) {
        writeln!(s, "\\draw ({x},{h}) circle(0.08cm) [fill=black];").unwrap();
    }
    for (li, layer) in d.layers.iter().enumerate() {
        let style = if li == 0 { "quivarrow, ultra thick" } else { "quivarrow, thick" };
        for x in 1..layer.len() {
            let (a, b) = ((x - 1, layer[x - 1]), (x, layer[x]));
            // arrows point downhill, as x and y act
            let (from, to) = if a.1 > b.1 { (a, b) } else { (b, a) };
            writeln!(
                s,
                "\\draw [{style}, shorten <=5pt, shorten >=5pt] ({},{}) -- node[above]{{${}$}} ({},{});",
                from.0, from.1, d.columns[x], to.0, to.1
            )
            .unwrap();
        }
    }
    let hmax = max_height(d);
    writeln!(s, "\\draw [dotted] (0,0) -- (0,{hmax});").unwrap();
    writeln!(s, "\\draw [dotted] ({0},0) -- ({0},{hmax});", d.n).unwrap();
    s.push_str("\\end{tikzpicture}\n");
    s
}

/// DOT graph of orbits, one cycle per orbit, arrows pointing along the syzygy.
pub fn orbits_dot(orbits: &[TauOrbit]) -> String {
    let mut s = String::from("digraph orbits {\n  rankdir=LR;\n");
    for (oi, o) in orbits.iter().enumerate() {
        writeln!(s, "  subgraph cluster_{oi} {{\n    label=\"period {}\";", o.period).unwrap();
        for (mi, m) in o.members.iter().enumerate() {
            writeln!(s, "    o{oi}_{mi} [label=\"{m}\"];").unwrap();
        }
        for mi in 0..o.members.len() {
            writeln!(s, "    o{oi}_{mi} -> o{oi}_{} [style=dotted];", (mi + 1) % o.members.len()).unwrap();
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

fn tikz_label(m: &crate::ar_tubes::OrbitMember) -> String {
    match &m.profile {
        Some(p) if p.len() == 2 => format!("$\\frac{{{}}}{{{}}}$", p.layers()[0], p.layers()[1]),
        Some(p) => format!("${p}$"),
        None => format!("$\\operatorname{{rk}} {}$", m.rank),
    }
}

/// One row per orbit, members joined by dotted arrows.
pub fn orbits_tikz(orbits: &[TauOrbit]) -> String {
    let mut s = String::from("\\begin{tikzpicture}[x=1.6cm, y=-1.2cm]\n");
    for (row, o) in orbits.iter().enumerate() {
        for (i, m) in o.members.iter().enumerate() {
            writeln!(s, "\\node (o{row}m{i}) at ({i},{row}) {{{}}};", tikz_label(m)).unwrap();
        }
        for i in 1..o.members.len() {
            writeln!(s, "\\draw [dotted, ->] (o{row}m{}) -- (o{row}m{i});", i - 1).unwrap();
        }
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}
