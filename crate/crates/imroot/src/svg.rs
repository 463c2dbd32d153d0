//! Schematic SVG diagrams: the positive-root fan with multiplicity labels
//! (simple roots at the lower left and right, height increasing upward) and
//! weight diagrams of highest-weight modules (highest weight at the top,
//! dots labeled by multiplicity). Layout is affine in the root coordinates;
//! ranks above two are projected onto the first two coordinates.

use kmlie::cartan::{CartanMatrix, NormClass, RootVector};
use kmlie::weights::WeightTable;
use num_bigint::BigUint;

const STEP: f64 = 46.0;
const R_DOT: f64 = 7.0;

fn xy(c1: i64, c2: i64, upward: bool) -> (f64, f64) {
    let x = (c2 - c1) as f64 * STEP * 0.5;
    let y = (c1 + c2) as f64 * STEP;
    (x, if upward { -y } else { y })
}

struct Canvas {
    shapes: Vec<String>,
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            shapes: Vec::new(),
            min_x: f64::MAX,
            max_x: f64::MIN,
            min_y: f64::MAX,
            max_y: f64::MIN,
        }
    }

    fn touch(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.max_x = self.max_x.max(x);
        self.min_y = self.min_y.min(y);
        self.max_y = self.max_y.max(y);
    }

    fn dot(&mut self, x: f64, y: f64, filled: bool, label: &str) {
        self.touch(x, y);
        let fill = if filled { "#000" } else { "#fff" };
        self.shapes.push(format!(
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{R_DOT}" fill="{fill}" stroke="#000" stroke-width="1.5"/>"##
        ));
        self.shapes.push(format!(
            r#"<text x="{:.1}" y="{:.1}" font-size="12" font-family="monospace">{}</text>"#,
            x + R_DOT + 3.0,
            y + 4.0,
            label
        ));
    }

    fn text(&mut self, x: f64, y: f64, label: &str) {
        self.touch(x, y);
        self.shapes.push(format!(
            r#"<text x="{x:.1}" y="{y:.1}" font-size="13" font-family="monospace">{label}</text>"#
        ));
    }

    fn render(&self, title: &str) -> String {
        let pad = 60.0;
        let (w, h) = (
            self.max_x - self.min_x + 2.0 * pad,
            self.max_y - self.min_y + 2.0 * pad,
        );
        let mut out = String::new();
        out.push_str(&format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.1} {:.1} {:.1} {:.1}">"#,
            self.min_x - pad,
            self.min_y - pad,
            w,
            h
        ));
        out.push('\n');
        out.push_str(&format!(
            r#"<title>{title}</title>"#
        ));
        out.push('\n');
        for s in &self.shapes {
            out.push_str(s);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Positive-root diagram: open circles for real roots, filled dots for
/// imaginary roots, each labeled with its multiplicity.
pub fn roots_diagram(cm: &CartanMatrix, roots: &[(RootVector, BigUint)]) -> String {
    let mut canvas = Canvas::new();
    for (root, mult) in roots {
        let (c1, c2) = (root.0[0], *root.0.get(1).unwrap_or(&0));
        let (x, y) = xy(c1, c2, true);
        let real = matches!(cm.classify_norm(root), Ok(NormClass::Spacelike));
        canvas.dot(x, y, !real, &mult.to_string());
    }
    canvas.text(
        -STEP * 0.5 - 30.0,
        -STEP + 25.0,
        "a1",
    );
    canvas.text(STEP * 0.5 + 14.0, -STEP + 25.0, "a2");
    canvas.render("positive roots with multiplicities")
}

/// Weight diagram of a highest-weight module: highest weight at the top,
/// offsets growing downward, dots labeled by multiplicity.
pub fn weight_diagram(table: &WeightTable) -> String {
    let mut canvas = Canvas::new();
    for offset in table.offsets() {
        let (c1, c2) = (offset[0], *offset.get(1).unwrap_or(&0));
        let (x, y) = xy(c1, c2, false);
        let m = table.mult(&offset);
        canvas.dot(x, y, true, &m.to_string());
    }
    canvas.text(-18.0, -24.0, "highest weight");
    canvas.render("weights with multiplicities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmlie::Algebra;

    /// Minimal XML well-formedness: every opened tag closes in order.
    pub fn xml_well_formed(s: &str) -> bool {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = s;
        while let Some(start) = rest.find('<') {
            let Some(end_rel) = rest[start..].find('>') else {
                return false;
            };
            let tag = &rest[start + 1..start + end_rel];
            rest = &rest[start + end_rel + 1..];
            if let Some(name) = tag.strip_prefix('/') {
                match stack.pop() {
                    Some(open) if open == name => {}
                    _ => return false,
                }
            } else if tag.ends_with('/') || tag.starts_with('?') || tag.starts_with('!') {
                // self-closing or declaration
            } else {
                let name: String = tag
                    .split_whitespace()
                    .next()
                    .unwrap_or("")
                    .to_string();
                stack.push(name);
            }
        }
        stack.is_empty()
    }

    #[test]
    fn roots_svg_well_formed_one_dot_per_root() {
        let cm = CartanMatrix::rank2(-3).unwrap();
        let alg = Algebra::new(cm.clone());
        let roots = alg.enumerate_roots(5);
        let svg = roots_diagram(&cm, &roots);
        assert!(xml_well_formed(&svg), "svg not well formed:\n{svg}");
        let dots = svg.matches("<circle").count();
        assert_eq!(dots, roots.len());
        // real roots drawn open, imaginary filled
        assert!(svg.contains(r##"fill="#fff""##));
        assert!(svg.contains(r##"fill="#000""##));
    }

    #[test]
    fn weight_svg_well_formed() {
        let cm = CartanMatrix::rank2(-3).unwrap();
        let alg = Algebra::new(cm.clone());
        let lam = cm.fundamental_weights()[0].clone();
        let table = kmlie::weights::weight_table(&alg, &lam, 6).unwrap();
        let svg = weight_diagram(&table);
        assert!(xml_well_formed(&svg));
        assert_eq!(svg.matches("<circle").count(), table.offsets().len());
    }
}
