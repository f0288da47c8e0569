//! Episode trajectory export: one CSV per episode plus a top-down SVG plot.

use std::fmt::Write as _;
use std::path::Path;

use super::court::CourtGeometry;
use super::racket::ContactKind;
use crate::error::Result;
use crate::num::checkpoint::atomic_write;

#[derive(Debug, Clone, Copy)]
pub struct TrajectoryRow {
    pub t: f64,
    pub ball: [f64; 3],
    pub ball_vel: [f64; 3],
    pub q: [f64; 6],
    pub event: Option<ContactKind>,
}

fn event_code(e: Option<ContactKind>) -> u8 {
    match e {
        None => 0,
        Some(ContactKind::RacketHit) => 1,
        Some(ContactKind::GroundBounce) => 2,
        Some(ContactKind::Net) => 3,
        Some(ContactKind::OutOfBounds) => 4,
    }
}

pub fn write_csv(path: &Path, rows: &[TrajectoryRow]) -> Result<()> {
    let mut out = String::from("t,bx,by,bz,bvx,bvy,bvz,q0,q1,q2,q3,q4,q5,event\n");
    for r in rows {
        let _ = write!(out, "{:.6}", r.t);
        for v in r.ball.iter().chain(&r.ball_vel).chain(&r.q) {
            let _ = write!(out, ",{v:.6}");
        }
        let _ = writeln!(out, ",{}", event_code(r.event));
    }
    atomic_write(path, out.as_bytes())
}

/// Top-down plot: court outline, net, ball path, agent base path.
pub fn write_svg(path: &Path, court: &CourtGeometry, rows: &[TrajectoryRow]) -> Result<()> {
    let scale = 28.0;
    let margin = 20.0;
    let w = 2.0 * court.half_length * scale + 2.0 * margin;
    let h = 2.0 * court.half_width * scale + 2.0 * margin;
    let px = |x: f64| (x + court.half_length) * scale + margin;
    let py = |y: f64| (y + court.half_width) * scale + margin;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{w:.0}\" height=\"{h:.0}\" fill=\"#f8f8f4\"/>");
    let _ = writeln!(
        svg,
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"#7aa36c\" stroke=\"#fff\" stroke-width=\"2\"/>",
        px(-court.half_length),
        py(-court.half_width),
        2.0 * court.half_length * scale,
        2.0 * court.half_width * scale
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#222\" stroke-width=\"3\"/>",
        px(0.0),
        py(-court.half_width),
        px(0.0),
        py(court.half_width)
    );
    let polyline = |pts: &[(f64, f64)], color: &str| {
        let mut s = format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"");
        for (x, y) in pts {
            let _ = write!(s, "{:.1},{:.1} ", px(*x), py(*y));
        }
        s.push_str("\"/>");
        s
    };
    let ball_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.ball[0], r.ball[1])).collect();
    let base_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.q[0], r.q[1])).collect();
    let _ = writeln!(svg, "{}", polyline(&ball_pts, "#d8c24a"));
    let _ = writeln!(svg, "{}", polyline(&base_pts, "#3451a0"));
    for r in rows.iter().filter(|r| r.event == Some(ContactKind::RacketHit)) {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"#c23b3b\"/>",
            px(r.ball[0]),
            py(r.ball[1])
        );
    }
    let _ = writeln!(svg, "</svg>");
    atomic_write(path, svg.as_bytes())
}
