//! Static SVG rendering of an instance and, optionally, its solution.
//! Output depends only on the inputs, so re-rendering is byte-identical.

use std::fmt::Write;

use clcbs::geometry::Pose;
use clcbs::problem::{ProblemInstance, Solution};

/// Rendered width in pixels; the view box itself is in meters.
const WIDTH_PX: f64 = 800.0;
const MARGIN: f64 = 1.0;

/// Evenly spaced hues, so any two agents get different colours.
fn colour(i: usize, n: usize) -> String {
    let hue = 360.0 * i as f64 / n.max(1) as f64;
    format!("hsl({hue:.1},75%,45%)")
}

struct Canvas {
    height: f64,
    out: String,
}

impl Canvas {
    /// Map coordinates have y up; SVG has y down.
    fn xy(&self, x: f64, y: f64) -> (f64, f64) {
        (x, self.height - y)
    }

    fn body(&mut self, instance: &ProblemInstance, pose: &Pose, style: &str) {
        let pts: Vec<String> = instance
            .params
            .body(*pose)
            .corners()
            .iter()
            .map(|c| {
                let (x, y) = self.xy(c.x, c.y);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(self.out, r#"<polygon points="{}" {style}/>"#, pts.join(" "));
    }
}

pub fn render_svg(instance: &ProblemInstance, solution: Option<&Solution>) -> String {
    let (w, h) = (instance.bounds.width, instance.bounds.height);
    let mut c = Canvas { height: h, out: String::new() };
    let px_h = WIDTH_PX * (h + 2.0 * MARGIN) / (w + 2.0 * MARGIN);
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH_PX:.0}" height="{px_h:.0}" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        -MARGIN,
        -MARGIN,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(c.out, r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white" stroke="black" stroke-width="0.2"/>"#);
    for o in &instance.obstacles {
        let (x, y) = c.xy(o.cx, o.cy);
        let _ = writeln!(c.out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="#808080"/>"##, o.radius);
    }

    let n = instance.agents.len();
    let paths = solution.map_or(&[][..], |s| &s.paths[..]);
    for (i, path) in paths.iter().enumerate().filter(|(_, p)| p.len() > 1) {
        let pts: Vec<String> = path
            .iter()
            .map(|p| {
                let (x, y) = c.xy(p.x, p.y);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            c.out,
            r#"<polyline class="path" points="{}" fill="none" stroke="{}" stroke-width="0.15"/>"#,
            pts.join(" "),
            colour(i, n)
        );
    }
    for (i, a) in instance.agents.iter().enumerate() {
        let col = colour(i, n);
        c.body(instance, &a.start, &format!(r#"class="start" fill="{col}" fill-opacity="0.8" stroke="{col}" stroke-width="0.1""#));
        c.body(
            instance,
            &a.goal,
            &format!(r#"class="goal" fill="none" stroke="{col}" stroke-width="0.1" stroke-dasharray="0.4,0.3""#),
        );
    }
    c.out.push_str("</svg>\n");
    c.out
}
