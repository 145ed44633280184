//! Static SVG figure: one number line per component, with the support of the
//! dilated wavelet drawn over that of the dilated scaling function.

use std::fmt::Write;

use num_traits::ToPrimitive;
use parseval_dilate::{ComponentFunction, IntervalSet, Rational};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 90.0;
const ROW: f64 = 44.0;
const PHI_COLOR: &str = "#9ecae1";
const PSI_COLOR: &str = "#d62728";

fn value(x: &Rational) -> f64 {
    x.to_f64().expect("finite rational")
}

fn rows<'a>(
    phi: &'a ComponentFunction,
    psi: &'a ComponentFunction,
) -> Vec<(String, &'a IntervalSet, &'a IntervalSet)> {
    let mut out = vec![("*".to_string(), &phi.real, &psi.real)];
    for ((cycle, phi_slots), (_, psi_slots)) in phi.cycles.iter().zip(&psi.cycles) {
        for (j, (a, b)) in phi_slots.iter().zip(psi_slots).enumerate() {
            out.push((format!("{}[{j}]", cycle.word_string()), a, b));
        }
    }
    out
}

pub fn render(phi: &ComponentFunction, psi: &ComponentFunction) -> String {
    let rows = rows(phi, psi);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for (_, a, b) in &rows {
        for x in a.endpoints().chain(b.endpoints()) {
            lo = lo.min(value(x));
            hi = hi.max(value(x));
        }
    }
    let (lo, hi) = ((lo * 4.0).floor() / 4.0, (hi * 4.0).ceil() / 4.0);
    let span = WIDTH - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - lo) / (hi - lo) * span;
    let height = ROW * (rows.len() as f64 + 1.5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, (label, phi_set, psi_set)) in rows.iter().enumerate() {
        let y = ROW * (i as f64 + 1.0);
        let _ = writeln!(s, r#"<text x="8" y="{:.1}">{label}</text>"#, y + 4.0);
        let _ = writeln!(
            s,
            r#"<line x1="{MARGIN}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="gray"/>"#,
            WIDTH - MARGIN
        );
        for (set, color, dy, h) in [
            (phi_set, PHI_COLOR, 2.0, 10.0),
            (psi_set, PSI_COLOR, -12.0, 10.0),
        ] {
            for (a, b) in set.intervals() {
                let (x0, x1) = (px(value(a)), px(value(b)));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x0:.2}" y="{:.1}" width="{:.2}" height="{h}" fill="{color}"><title>{}</title></rect>"#,
                    y + dy,
                    x1 - x0,
                    IntervalSet::interval(a.clone(), b.clone())
                );
            }
        }
    }
    let axis = ROW * (rows.len() as f64 + 0.7);
    let mut t = lo;
    while t <= hi + 1e-9 {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="lightgray"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{t}</text>"#,
            ROW * 0.5,
            axis,
            axis + 14.0
        );
        t += 0.25;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="14" fill="{PSI_COLOR}">psi</text><text x="{:.1}" y="14" fill="{PHI_COLOR}">phi</text>"#,
        WIDTH - MARGIN + 10.0,
        WIDTH - MARGIN + 40.0
    );
    s.push_str("</svg>\n");
    s
}
