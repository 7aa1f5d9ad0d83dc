//! Plot backends: a dependency-free SVG renderer and a tabular CSV form of
//! the same series, so tests can read back exactly what would be drawn.

use std::fmt::Write as _;

/// One plottable figure: named series plus optional horizontal CI bands.
#[derive(Debug, Clone, Default)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
    /// (name, lo, hi) horizontal bands.
    pub bands: Vec<(String, f64, f64)>,
}

impl Figure {
    /// Tabular backend: `series,index,x,y` rows, bands as `band,name,lo,hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,name,index,x,y\n");
        for (name, points) in &self.series {
            for (i, (x, y)) in points.iter().enumerate() {
                writeln!(out, "series,{name},{i},{x},{y}").expect("string write");
            }
        }
        for (name, lo, hi) in &self.bands {
            writeln!(out, "band,{name},0,{lo},{hi}").expect("string write");
        }
        out
    }

    /// Minimal vector-graphic backend: polylines over a framed viewport,
    /// bands as translucent rectangles. Band endpoints are also embedded in
    /// a machine-readable comment.
    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 440.0;
        const M: f64 = 56.0;

        let all_points = self.series.iter().flat_map(|(_, p)| p.iter());
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in all_points {
            x_min = x_min.min(*x);
            x_max = x_max.max(*x);
            y_min = y_min.min(*y);
            y_max = y_max.max(*y);
        }
        for (_, lo, hi) in &self.bands {
            y_min = y_min.min(*lo);
            y_max = y_max.max(*hi);
        }
        if !x_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
        }
        if !y_min.is_finite() {
            y_min = 0.0;
            y_max = 1.0;
        }
        if x_max == x_min {
            x_max = x_min + 1.0;
        }
        if y_max == y_min {
            y_max = y_min + 1.0;
        }
        let sx = |x: f64| M + (x - x_min) / (x_max - x_min) * (W - 2.0 * M);
        let sy = |y: f64| H - M - (y - y_min) / (y_max - y_min) * (H - 2.0 * M);

        let mut svg = String::new();
        writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
        )
        .expect("string write");
        let bands_meta: Vec<String> = self
            .bands
            .iter()
            .map(|(n, lo, hi)| format!("{n}={lo},{hi}"))
            .collect();
        writeln!(svg, "<!-- locorun-plot bands {} -->", bands_meta.join(" ")).expect("string write");
        writeln!(
            svg,
            "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>"
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
            W / 2.0,
            self.title
        )
        .expect("string write");

        for (name, lo, hi) in &self.bands {
            let (top, bottom) = (sy(*hi), sy(*lo));
            writeln!(
                svg,
                "<rect x=\"{M}\" y=\"{top}\" width=\"{}\" height=\"{}\" fill=\"#4a90d9\" \
                 fill-opacity=\"0.25\"><title>{name}</title></rect>",
                W - 2.0 * M,
                bottom - top,
            )
            .expect("string write");
        }

        let palette = ["#1f3b73", "#c0392b", "#1e8449", "#7d3c98"];
        for (k, (name, points)) in self.series.iter().enumerate() {
            let path: Vec<String> = points
                .iter()
                .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
                .collect();
            writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\">\
                 <title>{name}</title></polyline>",
                palette[k % palette.len()],
                path.join(" ")
            )
            .expect("string write");
        }

        writeln!(
            svg,
            "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>",
            W - 2.0 * M,
            H - 2.0 * M
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
            W / 2.0,
            H - 16.0,
            self.x_label
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" \
             transform=\"rotate(-90 16 {})\">{}</text>",
            H / 2.0,
            H / 2.0,
            self.y_label
        )
        .expect("string write");
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_figure() -> Figure {
        Figure {
            title: "demo".into(),
            x_label: "iteration".into(),
            y_label: "reward".into(),
            series: vec![("reward".into(), vec![(0.0, 1.0), (1.0, 2.5), (2.0, 2.0)])],
            bands: vec![("ci_mean".into(), 1.8, 2.2)],
        }
    }

    #[test]
    fn csv_backend_round_trips_values() {
        let fig = sample_figure();
        let csv = fig.to_csv();
        let mut values = Vec::new();
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols[0] == "series" {
                values.push(cols[4].parse::<f64>().unwrap());
            }
        }
        assert_eq!(values, vec![1.0, 2.5, 2.0]);
        assert!(csv.contains("band,ci_mean,0,1.8,2.2"));
    }

    #[test]
    fn svg_embeds_band_endpoints() {
        let svg = sample_figure().to_svg();
        assert!(svg.contains("locorun-plot bands ci_mean=1.8,2.2"));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
