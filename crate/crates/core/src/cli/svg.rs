//! Deterministic SVG output: fixed canvas, one polyline per curve.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Data rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Frame {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Frame { x0, x1, y0, y1 }
    }

    pub fn square(half: f64) -> Self {
        Frame::new(-half, half, -half, half)
    }

    /// Smallest square frame centred on the data's bounding box, padded by
    /// 8%; the unit square around the origin when there are no points.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a [f64; 2]>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            if p[0].is_finite() && p[1].is_finite() {
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
        }
        if lo[0] > hi[0] {
            return Frame::square(1.0);
        }
        let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / 2.0 * 1.08).max(1e-6);
        let (cx, cy) = ((lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0);
        Frame::new(cx - half, cx + half, cy - half, cy + half)
    }

    fn is_valid(&self) -> bool {
        self.x1 > self.x0 && self.y1 > self.y0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    Primary,
    Secondary,
    Support,
    Faint,
}

impl Style {
    fn attrs(self, k: usize) -> String {
        const PALETTE: [&str; 6] = ["#1f4e99", "#b8321f", "#2e7d32", "#7b3fa0", "#c77800", "#00838f"];
        match self {
            Style::Primary => format!("stroke=\"{}\" stroke-width=\"2\"", PALETTE[k % PALETTE.len()]),
            Style::Secondary => format!("stroke=\"{}\" stroke-width=\"1.2\"", PALETTE[k % PALETTE.len()]),
            Style::Support => "stroke=\"#000000\" stroke-width=\"2.5\"".into(),
            Style::Faint => "stroke=\"#9e9e9e\" stroke-width=\"1\" stroke-dasharray=\"4 3\"".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub style: Style,
    pub points: Vec<[f64; 2]>,
}

impl Curve {
    pub fn new(label: impl Into<String>, style: Style, points: Vec<[f64; 2]>) -> Self {
        Curve {
            label: label.into(),
            style,
            points,
        }
    }
}

/// A straight stratum line in data coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

/// A plot panel: frame, curves and optional strata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub title: String,
    pub frame: Frame,
    pub curves: Vec<Curve>,
    pub strata: Vec<Stratum>,
}

impl Panel {
    pub fn new(title: impl Into<String>, frame: Frame) -> Self {
        Panel {
            title: title.into(),
            frame,
            curves: Vec::new(),
            strata: Vec::new(),
        }
    }
}

/// An inset panel anchored at a point of the parent panel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inset {
    pub anchor: [f64; 2],
    pub panel: Panel,
}

/// A full figure: a main panel with optional insets, or a row of panels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Single { panel: Panel, insets: Vec<Inset> },
    Row(Vec<Panel>),
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;
const ROW_PANEL: f64 = 320.0;
const INSET: f64 = 200.0;

fn num(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    let s = format!("{r:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Maps data coordinates to a square box `[ox, ox+size] × [oy, oy+size]`.
struct Viewport {
    frame: Frame,
    ox: f64,
    oy: f64,
    size: f64,
}

impl Viewport {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let f = &self.frame;
        let u = self.ox + (p[0] - f.x0) / (f.x1 - f.x0) * self.size;
        let v = self.oy + (f.y1 - p[1]) / (f.y1 - f.y0) * self.size;
        (u, v)
    }
}

fn draw_panel(out: &mut String, panel: &Panel, vp: &Viewport, clip_id: &str, with_frame_labels: bool) {
    let frame = if panel.frame.is_valid() { panel.frame } else { Frame::square(1.0) };
    let vp = Viewport { frame, ..*vp };
    let (ox, oy, s) = (vp.ox, vp.oy, vp.size);
    let _ = writeln!(
        out,
        "<clipPath id=\"{clip_id}\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath>",
        num(ox),
        num(oy),
        num(s),
        num(s)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" stroke=\"#424242\" stroke-width=\"1\"/>",
        num(ox),
        num(oy),
        num(s),
        num(s)
    );
    let _ = writeln!(out, "<g clip-path=\"url(#{clip_id})\" fill=\"none\">");
    // Axes through the origin when visible.
    if frame.x0 <= 0.0 && frame.x1 >= 0.0 {
        let (a, b) = (vp.map([0.0, frame.y0]), vp.map([0.0, frame.y1]));
        let _ = writeln!(
            out,
            "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bdbdbd\" stroke-width=\"1\"/>",
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    }
    if frame.y0 <= 0.0 && frame.y1 >= 0.0 {
        let (a, b) = (vp.map([frame.x0, 0.0]), vp.map([frame.x1, 0.0]));
        let _ = writeln!(
            out,
            "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bdbdbd\" stroke-width=\"1\"/>",
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    }
    for st in &panel.strata {
        let (a, b) = (vp.map(st.from), vp.map(st.to));
        let _ = writeln!(
            out,
            "<line class=\"stratum\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d32f2f\" stroke-width=\"2\"><title>{}</title></line>",
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1),
            escape(&st.label)
        );
    }
    for (k, c) in panel.curves.iter().enumerate() {
        let pts: Vec<String> = c
            .points
            .iter()
            .filter(|p| p[0].is_finite() && p[1].is_finite())
            .map(|&p| {
                let (u, v) = vp.map(p);
                format!("{},{}", num(u), num(v))
            })
            .collect();
        if pts.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "<polyline class=\"curve\" data-label=\"{}\" {} stroke-linejoin=\"round\" points=\"{}\"/>",
            escape(&c.label),
            c.style.attrs(k),
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
    if !panel.title.is_empty() {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            num(ox + s / 2.0),
            num(oy - 6.0),
            escape(&panel.title)
        );
    }
    if with_frame_labels {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#616161\">[{}, {}] x [{}, {}]</text>",
            num(ox),
            num(oy + s + 14.0),
            num_data(frame.x0),
            num_data(frame.x1),
            num_data(frame.y0),
            num_data(frame.y1)
        );
    }
}

fn num_data(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn header(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = width as u32,
        h = height as u32
    )
}

/// Renders a figure to an SVG 1.1 document.
pub fn render(figure: &Figure) -> String {
    match figure {
        Figure::Single { panel, insets } => {
            let mut out = header(SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
            let vp = Viewport {
                frame: panel.frame,
                ox: MARGIN,
                oy: MARGIN,
                size: SIZE,
            };
            draw_panel(&mut out, panel, &vp, "main", true);
            let frame = if panel.frame.is_valid() { panel.frame } else { Frame::square(1.0) };
            let main = Viewport { frame, ..vp };
            for (k, inset) in insets.iter().enumerate() {
                let (u, v) = main.map(inset.anchor);
                let ox = (u - INSET / 2.0).clamp(MARGIN, MARGIN + SIZE - INSET);
                let oy = (v - INSET / 2.0).clamp(MARGIN, MARGIN + SIZE - INSET);
                let ivp = Viewport {
                    frame: inset.panel.frame,
                    ox,
                    oy,
                    size: INSET,
                };
                draw_panel(&mut out, &inset.panel, &ivp, &format!("inset{k}"), false);
            }
            out.push_str("</svg>\n");
            out
        }
        Figure::Row(panels) => {
            let n = panels.len().max(1) as f64;
            let mut out = header(n * (ROW_PANEL + MARGIN) + MARGIN, ROW_PANEL + 2.0 * MARGIN);
            for (k, panel) in panels.iter().enumerate() {
                let vp = Viewport {
                    frame: panel.frame,
                    ox: MARGIN + k as f64 * (ROW_PANEL + MARGIN),
                    oy: MARGIN,
                    size: ROW_PANEL,
                };
                draw_panel(&mut out, panel, &vp, &format!("panel{k}"), true);
            }
            out.push_str("</svg>\n");
            out
        }
    }
}
