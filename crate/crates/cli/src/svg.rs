//! A bare-bones SVG histogram with an optional reference curve.

use std::fmt::Write as _;

use zerorep::histogram::Histogram;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Bars are drawn as densities so that `reference` (a density evaluated at
/// `(x, y)` pairs) can share the axes. `description` is embedded verbatim
/// in a `<desc>` element.
pub fn histogram_svg(
    h: &Histogram,
    title: &str,
    reference: &[(f64, f64)],
    description: &str,
) -> String {
    let dens = h.density();
    let ymax = dens
        .iter()
        .copied()
        .chain(reference.iter().map(|p| p.1))
        .fold(0.0f64, f64::max)
        .max(1e-12)
        * 1.05;
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - h.lo) / (h.hi - h.lo) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - y / ymax * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", esc(title));
    let _ = writeln!(s, "<desc>{}</desc>", esc(description));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, d) in dens.iter().enumerate() {
        let (l, r) = h.edges(i);
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ab" stroke="#567" stroke-width="0.5"/>"##,
            sx(l),
            sy(*d),
            sx(r) - sx(l),
            sy(0.0) - sy(*d)
        );
    }
    if reference.len() > 1 {
        let pts: Vec<String> = reference
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#c33" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    let (x0, y0) = (sx(h.lo), sy(0.0));
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        sx(h.hi)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}" stroke="black"/>"#,
        sy(ymax)
    );
    for k in 0..=4 {
        let x = h.lo + (h.hi - h.lo) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{:.2}</text>"#,
            sx(x),
            y0 + 16.0,
            x
        );
        let y = ymax * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{:.2}</text>"#,
            x0 - 6.0,
            sy(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        esc(title)
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_bars_and_curve() {
        let h = Histogram::from_values(0.0, 1.0, 4, &[0.1, 0.2, 0.6]).unwrap();
        let svg = histogram_svg(&h, "a < b", &[(0.0, 1.0), (1.0, 1.0)], "{}");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<rect").count(), 5);
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("a &lt; b"));
    }
}
