//! Plain-text emitters for traced arc sets. Coordinates print with Rust's
//! shortest round-trip float formatting, so reruns of the same binary on
//! the same input are byte-identical.

use std::io::{self, Write};

use focal::poly2::Rational;
use focal::{ArcSet, Constraint, Window};
use num_traits::{Signed, ToPrimitive, Zero};

/// `arc_id,x,y,residual` rows for every kept vertex, arcs in trace order.
pub fn write_csv<W: Write, F: Fn(f64, f64) -> f64>(
    mut out: W,
    arcs: &ArcSet,
    residual: F,
) -> io::Result<()> {
    writeln!(out, "arc_id,x,y,residual")?;
    for (id, arc) in arcs.arcs.iter().enumerate() {
        for &(x, y) in &arc.points {
            writeln!(out, "{id},{x},{y},{}", residual(x, y))?;
        }
    }
    Ok(())
}

/// Circle read off a degree-2 constraint of the form
/// `a (x^2 + y^2) + bx + cy + d >= 0`; the overlay for region boundaries.
pub struct CircleOverlay {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

pub fn circle_of_constraint(c: &Constraint) -> Option<CircleOverlay> {
    let g = c.canonical_geq();
    if g.degree() != 2 {
        return None;
    }
    let a = g.coeff(2, 0);
    if a.is_zero() || a != g.coeff(0, 2) || !g.coeff(1, 1).is_zero() {
        return None;
    }
    let two_a = Rational::from_integer(2.into()) * &a;
    let cx = -g.coeff(1, 0) / &two_a;
    let cy = -g.coeff(0, 1) / &two_a;
    let r2 = &cx * &cx + &cy * &cy - g.coeff(0, 0) / &a;
    if !r2.is_positive() {
        return None;
    }
    Some(CircleOverlay {
        cx: cx.to_f64()?,
        cy: cy.to_f64()?,
        r: r2.to_f64()?.sqrt(),
    })
}

/// Standalone SVG of the kept arcs, with optional constraint-circle and
/// Zariski-reject overlays. The y axis is flipped into screen orientation.
pub fn write_svg<W: Write>(
    mut out: W,
    arcs: &ArcSet,
    win: &Window,
    circles: &[CircleOverlay],
    show_rejects: bool,
) -> io::Result<()> {
    let (w, h) = (win.xmax - win.xmin, win.ymax - win.ymin);
    let stroke = w.max(h) / 400.0;
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{}\" \
         viewBox=\"{} {} {} {}\">",
        (800.0 * h / w).round(),
        win.xmin,
        -win.ymax,
        w,
        h
    )?;
    writeln!(
        out,
        "<style>.arc{{fill:none;stroke:#2b6cb0;stroke-width:{sw}}}\
.region{{fill:none;stroke:#718096;stroke-width:{hw};stroke-dasharray:{sw}}}\
.reject{{fill:#c53030}}</style>",
        sw = stroke,
        hw = stroke / 2.0
    )?;
    writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>",
        win.xmin, -win.ymax
    )?;
    for c in circles {
        writeln!(
            out,
            "<circle class=\"region\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            c.cx, -c.cy, c.r
        )?;
    }
    for arc in &arcs.arcs {
        let pts: Vec<String> = arc
            .points
            .iter()
            .map(|&(x, y)| format!("{x},{}", -y))
            .collect();
        let tag = if arc.closed { "polygon" } else { "polyline" };
        writeln!(out, "<{tag} class=\"arc\" points=\"{}\"/>", pts.join(" "))?;
    }
    if show_rejects {
        let r = stroke * 1.5;
        for p in &arcs.zariski_rejects {
            writeln!(
                out,
                "<circle class=\"reject\" cx=\"{}\" cy=\"{}\" r=\"{r}\"/>",
                p.x, -p.y
            )?;
        }
    }
    writeln!(out, "</svg>")
}
