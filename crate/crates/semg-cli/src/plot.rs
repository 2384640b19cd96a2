//! Hand-rolled SVG charts: line/scatter frames, box-plot geometry, and
//! histogram geometry. Textual output keeps the artifacts diffable and
//! dependency-free; every coordinate is formatted with fixed precision so
//! repeated runs emit identical bytes.

use semg::stats::{FiveNumberSummary, HistogramSummary};

const WIDTH: f64 = 720.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Short deterministic tick label.
fn tick_label(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if !(0.01..10000.0).contains(&a) {
        format!("{v:.1e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Maps a data rectangle onto a pixel rectangle (y axis flipped).
struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, top: f64, height: f64) -> Self {
        // Degenerate ranges widen so a flat series still plots mid-frame.
        let (x_min, x_max) = pad_range(x_min, x_max);
        let (y_min, y_max) = pad_range(y_min, y_max);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
            left: MARGIN_LEFT,
            top,
            width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            height,
        }
    }

    fn x(&self, v: f64) -> f64 {
        self.left + (v - self.x_min) / (self.x_max - self.x_min) * self.width
    }

    fn y(&self, v: f64) -> f64 {
        self.top + self.height - (v - self.y_min) / (self.y_max - self.y_min) * self.height
    }
}

fn pad_range(min: f64, max: f64) -> (f64, f64) {
    if max > min {
        let pad = 0.04 * (max - min);
        (min - pad, max + pad)
    } else {
        (min - 0.5, max + 0.5)
    }
}

fn open_svg(height: f64, title: &str) -> String {
    let mut s = String::with_capacity(8192);
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" \
         viewBox=\"0 0 {WIDTH} {height}\" font-family=\"sans-serif\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"16\" fill=\"#222\">{}</text>\n",
        px(MARGIN_LEFT),
        escape(title)
    ));
    s
}

fn axes(s: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let bottom = frame.top + frame.height;
    let right = frame.left + frame.width;
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444\"/>\n",
        px(frame.left),
        px(bottom),
        px(right),
        px(bottom)
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444\"/>\n",
        px(frame.left),
        px(frame.top),
        px(frame.left),
        px(bottom)
    ));
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        let xp = frame.x(fx);
        s.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#444\"/>\n",
            x = px(xp),
            y1 = px(bottom),
            y2 = px(bottom + 4.0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#444\" text-anchor=\"middle\">{}</text>\n",
            px(xp),
            px(bottom + 16.0),
            tick_label(fx)
        ));
        let fy = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        let yp = frame.y(fy);
        s.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"#444\"/>\n",
            x1 = px(frame.left - 4.0),
            x2 = px(frame.left),
            y = px(yp)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#444\" text-anchor=\"end\">{}</text>\n",
            px(frame.left - 7.0),
            px(yp + 4.0),
            tick_label(fy)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222\" text-anchor=\"middle\">{}</text>\n",
        px(frame.left + frame.width / 2.0),
        px(bottom + 36.0),
        escape(x_label)
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-size=\"12\" fill=\"#222\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">{}</text>\n",
        px(frame.top + frame.height / 2.0),
        px(frame.top + frame.height / 2.0),
        escape(y_label)
    ));
}

pub enum SeriesStyle {
    Line,
    Points,
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

/// Generic XY chart with a legend; used for PSD overlays and trend fits.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let height = 420.0;
    let frame_height = height - MARGIN_TOP - MARGIN_BOTTOM;
    let all_points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .collect();
    let x_min = all_points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_max = all_points
        .iter()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let y_min = all_points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_max = all_points
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(x_min, x_max, y_min, y_max, MARGIN_TOP, frame_height);

    let mut s = open_svg(height, title);
    axes(&mut s, &frame, x_label, y_label);
    for (i, sr) in series.iter().enumerate() {
        let stroke = color(i);
        match sr.style {
            SeriesStyle::Line => {
                let pts: Vec<String> = sr
                    .points
                    .iter()
                    .map(|(x, y)| format!("{},{}", px(frame.x(*x)), px(frame.y(*y))))
                    .collect();
                s.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.2\"/>\n",
                    pts.join(" ")
                ));
            }
            SeriesStyle::Points => {
                for (x, y) in &sr.points {
                    s.push_str(&format!(
                        "<circle cx=\"{}\" cy=\"{}\" r=\"2.2\" fill=\"{stroke}\"/>\n",
                        px(frame.x(*x)),
                        px(frame.y(*y))
                    ));
                }
            }
        }
        // Legend entry.
        let lx = frame.left + frame.width - 150.0;
        let ly = frame.top + 14.0 * (i as f64 + 1.0);
        s.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{stroke}\"/>\n",
            px(lx),
            px(ly - 9.0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#222\">{}</text>\n",
            px(lx + 14.0),
            px(ly),
            escape(&sr.name)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Stacked horizontal box plots, one independently scaled panel per entry.
pub fn box_chart(title: &str, panels: &[(String, FiveNumberSummary)]) -> String {
    let panel_height = 70.0;
    let height = MARGIN_TOP + panels.len() as f64 * panel_height + MARGIN_BOTTOM;
    let mut s = open_svg(height, title);
    for (i, (label, summary)) in panels.iter().enumerate() {
        let top = MARGIN_TOP + i as f64 * panel_height;
        let frame = Frame::new(
            summary.q0,
            summary.q4,
            0.0,
            1.0,
            top + 12.0,
            panel_height - 30.0,
        );
        let mid = frame.top + frame.height / 2.0;
        let box_top = frame.top + 4.0;
        let box_bottom = frame.top + frame.height - 4.0;
        let stroke = color(i);

        // Whiskers span min to max; the box spans the quartiles.
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{m}\" x2=\"{}\" y2=\"{m}\" stroke=\"{stroke}\"/>\n",
            px(frame.x(summary.q0)),
            px(frame.x(summary.q1)),
            m = px(mid)
        ));
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{m}\" x2=\"{}\" y2=\"{m}\" stroke=\"{stroke}\"/>\n",
            px(frame.x(summary.q3)),
            px(frame.x(summary.q4)),
            m = px(mid)
        ));
        for v in [summary.q0, summary.q4] {
            s.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"{stroke}\"/>\n",
                px(mid - 8.0),
                px(mid + 8.0),
                x = px(frame.x(v))
            ));
        }
        s.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{stroke}\" \
             fill-opacity=\"0.25\" stroke=\"{stroke}\"/>\n",
            px(frame.x(summary.q1)),
            px(box_top),
            px(frame.x(summary.q3) - frame.x(summary.q1)),
            px(box_bottom - box_top)
        ));
        s.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"2\"/>\n",
            px(box_top),
            px(box_bottom),
            x = px(frame.x(summary.q2))
        ));
        for v in &summary.outliers {
            s.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"{stroke}\"/>\n",
                px(frame.x(*v)),
                px(mid)
            ));
        }
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222\">{} (q2 {})</text>\n",
            px(MARGIN_LEFT),
            px(frame.top - 2.0),
            escape(label),
            tick_label(summary.q2)
        ));
        for v in [summary.q0, summary.q2, summary.q4] {
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#444\" text-anchor=\"middle\">{}</text>\n",
                px(frame.x(v)),
                px(box_bottom + 12.0),
                tick_label(v)
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Stacked histogram panels, one independently scaled panel per entry.
pub fn histogram_chart(title: &str, panels: &[(String, HistogramSummary)]) -> String {
    let panel_height = 110.0;
    let height = MARGIN_TOP + panels.len() as f64 * panel_height + MARGIN_BOTTOM;
    let mut s = open_svg(height, title);
    for (i, (label, hist)) in panels.iter().enumerate() {
        let top = MARGIN_TOP + i as f64 * panel_height;
        let max_count = hist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
        let frame = Frame::new(
            hist.edges[0],
            hist.edges[hist.edges.len() - 1],
            0.0,
            max_count,
            top + 14.0,
            panel_height - 36.0,
        );
        let fill = color(i);
        let base = frame.top + frame.height;
        for (b, count) in hist.counts.iter().enumerate() {
            let x0 = frame.x(hist.edges[b]);
            let x1 = frame.x(hist.edges[b + 1]);
            let y = frame.y(*count as f64);
            s.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" \
                 fill-opacity=\"0.6\" stroke=\"{fill}\"/>\n",
                px(x0),
                px(y),
                px((x1 - x0).max(0.0)),
                px((base - y).max(0.0))
            ));
        }
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{b}\" x2=\"{}\" y2=\"{b}\" stroke=\"#444\"/>\n",
            px(frame.left),
            px(frame.left + frame.width),
            b = px(base)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222\">{} (n {})</text>\n",
            px(MARGIN_LEFT),
            px(frame.top - 2.0),
            escape(label),
            hist.total
        ));
        for v in [hist.edges[0], hist.edges[hist.edges.len() - 1]] {
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#444\" text-anchor=\"middle\">{}</text>\n",
                px(frame.x(v)),
                px(base + 12.0),
                tick_label(v)
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_well_formed() {
        let series = vec![
            Series {
                name: "a".to_string(),
                points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, 0.5)],
                style: SeriesStyle::Line,
            },
            Series {
                name: "b".to_string(),
                points: vec![(0.0, 0.4), (2.0, 1.4)],
                style: SeriesStyle::Points,
            },
        ];
        let svg = line_chart("demo", "x", "y", &series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<circle"));
        assert_eq!(svg, line_chart("demo", "x", "y", &series));
    }

    #[test]
    fn box_chart_draws_fences_and_outliers() {
        let summary = semg::stats::quartile_summary(&[1.0, 2.0, 3.0, 100.0]).unwrap();
        let svg = box_chart("demo", &[("rms".to_string(), summary)]);
        assert!(svg.contains("<rect"));
        assert!(svg.contains("<circle")); // the 100.0 outlier
    }

    #[test]
    fn histogram_chart_draws_all_bins() {
        let hist = semg::stats::histogram(&[0.0, 1.0, 2.0, 3.0], 2).unwrap();
        let svg = histogram_chart("demo", &[("mnf".to_string(), hist)]);
        assert!(svg.matches("<rect").count() >= 3); // background + 2 bins
    }

    #[test]
    fn degenerate_ranges_still_render() {
        let summary = semg::stats::quartile_summary(&[5.0; 8]).unwrap();
        let svg = box_chart("demo", &[("flat".to_string(), summary)]);
        assert!(svg.contains("</svg>"));
        let series = [Series {
            name: "flat".to_string(),
            points: vec![(1.0, 2.0), (2.0, 2.0)],
            style: SeriesStyle::Line,
        }];
        let svg = line_chart("demo", "x", "y", &series);
        assert!(svg.contains("</svg>"));
    }
}
