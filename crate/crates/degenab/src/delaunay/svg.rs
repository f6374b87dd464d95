//! Plain SVG 1.1 rendering of a rank-2 Delaunay decomposition: one
//! fundamental domain of cells, drawn with their lattice translates for
//! context.

use num_traits::ToPrimitive;

use super::complex::DelaunayComplex;

/// Render the unit-cell picture of a rank-2 complex. Edges and vertices of
/// all cell classes are drawn over a 2x2 block of fundamental domains.
pub fn render_svg(complex: &DelaunayComplex) -> String {
    assert_eq!(complex.form.rank(), 2, "SVG rendering is rank-2 only");
    let scale = 60.0;
    let margin = 40.0;
    // translate classes over a small block for context
    let shifts: Vec<Vec<i64>> = (-1..=2)
        .flat_map(|a| (-1..=2).map(move |b| vec![a, b]))
        .collect();
    let quotient = &complex.quotient;
    let to_xy = |v: &[f64]| -> (f64, f64) {
        (margin + scale * (v[0] + 1.5), margin + scale * (2.5 - v[1]))
    };
    let mut polys = String::new();
    let mut edges = String::new();
    let mut dots = String::new();
    for cell in &complex.cells {
        for kcoord in &shifts {
            let shift = quotient.vector(kcoord);
            let verts: Vec<Vec<f64>> = cell
                .vertices
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&shift)
                        .map(|(a, b)| (a + b) as f64)
                        .collect()
                })
                .collect();
            if verts.iter().any(|v| v[0] < -1.6 || v[0] > 2.6 || v[1] < -1.6 || v[1] > 2.6) {
                continue;
            }
            match cell.dim {
                0 => {
                    let (x, y) = to_xy(&verts[0]);
                    dots.push_str(&format!(
                        "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"black\"/>\n",
                        x, y
                    ));
                }
                1 => {
                    let (x1, y1) = to_xy(&verts[0]);
                    let (x2, y2) = to_xy(&verts[verts.len() - 1]);
                    edges.push_str(&format!(
                        "  <line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                        x1, y1, x2, y2
                    ));
                }
                _ => {
                    // order polygon vertices by angle around the centroid
                    let cx: f64 = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
                    let cy: f64 = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
                    let mut ordered = verts.clone();
                    ordered.sort_by(|a, b| {
                        let ta = (a[1] - cy).atan2(a[0] - cx);
                        let tb = (b[1] - cy).atan2(b[0] - cx);
                        ta.partial_cmp(&tb).unwrap()
                    });
                    let pts: Vec<String> = ordered
                        .iter()
                        .map(|v| {
                            let (x, y) = to_xy(v);
                            format!("{:.1},{:.1}", x, y)
                        })
                        .collect();
                    polys.push_str(&format!(
                        "  <polygon points=\"{}\" fill=\"#dfe8f5\" stroke=\"none\"/>\n",
                        pts.join(" ")
                    ));
                }
            }
        }
    }
    let center_rats: Vec<f64> = complex
        .cells
        .iter()
        .flat_map(|c| c.center.iter().map(|r| r.to_f64().unwrap_or(0.0)))
        .collect();
    let _ = center_rats;
    let size = margin * 2.0 + scale * 4.0;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n{polys}{edges}{dots}</svg>\n",
        size = size,
        polys = polys,
        edges = edges,
        dots = dots
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::complex::Sublattice;
    use crate::delaunay::{delaunay_complex, Form};

    #[test]
    fn svg_contains_polygons() {
        let f = Form::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let c = delaunay_complex(&f, &Sublattice::full(2)).unwrap();
        let svg = render_svg(&c);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("<line"));
        assert!(svg.contains("<circle"));
    }
}
