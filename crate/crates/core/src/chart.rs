//! Ext charts: dimensions per bidegree plus h0-multiplication, with TSV and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::F2Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtChart {
    name: String,
    s_max: usize,
    t_min: i32,
    t_max: i32,
    dims: BTreeMap<(usize, i32), usize>,
    /// `h0[(s, t)]` maps `Ext^{s,t}` to `Ext^{s+1,t+1}`: rows index the target classes.
    h0: BTreeMap<(usize, i32), F2Matrix>,
    notes: Vec<String>,
}

impl ExtChart {
    pub fn new(
        name: String,
        s_max: usize,
        t_min: i32,
        t_max: i32,
        dims: BTreeMap<(usize, i32), usize>,
        h0: BTreeMap<(usize, i32), F2Matrix>,
        notes: Vec<String>,
    ) -> Self {
        let dims = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        ExtChart {
            name,
            s_max,
            t_min,
            t_max,
            dims,
            h0,
            notes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn t_min(&self) -> i32 {
        self.t_min
    }

    pub fn t_max(&self) -> i32 {
        self.t_max
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn dim(&self, s: usize, t: i32) -> usize {
        self.dims.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Nonzero bidegrees `(s, t, dim)` sorted by `(t - s, s)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i32, usize)> + '_ {
        let mut v: Vec<_> = self.dims.iter().map(|(&(s, t), &d)| (s, t, d)).collect();
        v.sort_by_key(|&(s, t, _)| (t - s as i32, s));
        v.into_iter()
    }

    /// h0 from `(s, t)` to `(s + 1, t + 1)`; the zero matrix when either side is empty
    /// or the pair lies outside the computed window.
    pub fn h0(&self, s: usize, t: i32) -> F2Matrix {
        self.h0
            .get(&(s, t))
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim(s + 1, t + 1), self.dim(s, t)))
    }

    /// Whether `(s, t)` satisfies the safe-window rule `s <= s_max - 1`, `t <= t_max - 1`.
    pub fn in_safe_window(&self, s: usize, t: i32) -> bool {
        s < self.s_max && t < self.t_max
    }

    /// The classes in stem `t - s = stem`, as `(s, dim)`.
    pub fn column(&self, stem: i32) -> Vec<(usize, usize)> {
        (0..=self.s_max)
            .map(|s| (s, self.dim(s, stem + s as i32)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// The same chart cut down to a smaller window.
    pub fn restrict(&self, s_max: usize, t_max: i32) -> Result<ExtChart> {
        if s_max > self.s_max || t_max > self.t_max {
            return Err(Error::InvalidWindow(format!(
                "({s_max}, {t_max}) is not inside ({}, {})",
                self.s_max, self.t_max
            )));
        }
        let dims = self
            .dims
            .iter()
            .filter(|(&(s, t), _)| s <= s_max && t <= t_max)
            .map(|(&k, &d)| (k, d))
            .collect();
        let h0 = self
            .h0
            .iter()
            .filter(|(&(s, t), _)| s < s_max && t < t_max)
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        Ok(ExtChart {
            name: self.name.clone(),
            s_max,
            t_min: self.t_min,
            t_max,
            dims,
            h0,
            notes: self.notes.clone(),
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("s\tt\tdim\n");
        for (s, t, d) in self.entries() {
            let _ = writeln!(out, "{s}\t{t}\t{d}");
        }
        out
    }

    pub fn from_tsv(name: &str, text: &str, s_max: usize, t_min: i32, t_max: i32) -> Result<ExtChart> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "s\tt\tdim")) => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `s<TAB>t<TAB>dim`".into(),
                })
            }
        }
        let mut dims = BTreeMap::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: &str| Error::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(err("expected three tab-separated fields"));
            }
            let s: usize = f[0].parse().map_err(|_| err("bad s"))?;
            let t: i32 = f[1].parse().map_err(|_| err("bad t"))?;
            let d: usize = f[2].parse().map_err(|_| err("bad dim"))?;
            if dims.insert((s, t), d).is_some() {
                return Err(err("duplicate bidegree"));
            }
        }
        Ok(ExtChart::new(name.to_string(), s_max, t_min, t_max, dims, BTreeMap::new(), Vec::new()))
    }

    /// Deterministic SVG drawing: one dot per class at `(t - s, s)`, vertical segments
    /// for nonzero h0 products.
    pub fn to_svg(&self) -> String {
        const CELL: i32 = 24;
        const MARGIN: i32 = 32;
        const RADIUS: i32 = 3;
        const DOT_GAP: i32 = 7;
        let stem_lo = self.t_min - self.s_max as i32;
        let stem_lo = stem_lo.min(self.t_min);
        let stem_hi = self.t_max.max(self.t_min);
        let cols = (stem_hi - stem_lo + 1).max(1);
        let rows = self.s_max as i32 + 1;
        let width = 2 * MARGIN + cols * CELL;
        let height = 2 * MARGIN + rows * CELL;
        let x_of = |stem: i32, k: usize, n: usize| {
            let spread = (n as i32 - 1) * DOT_GAP;
            MARGIN + (stem - stem_lo) * CELL + CELL / 2 - spread / 2 + k as i32 * DOT_GAP
        };
        let y_of = |s: usize| height - MARGIN - s as i32 * CELL - CELL / 2;

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        let _ = writeln!(out, "<title>{}</title>", xml_escape(&self.name));
        let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
        let _ = writeln!(out, "<g stroke=\"#dddddd\" stroke-width=\"1\">");
        for c in 0..=cols {
            let x = MARGIN + c * CELL;
            let _ = writeln!(out, "<line x1=\"{x}\" y1=\"{MARGIN}\" x2=\"{x}\" y2=\"{}\"/>", height - MARGIN);
        }
        for r in 0..=rows {
            let y = MARGIN + r * CELL;
            let _ = writeln!(out, "<line x1=\"{MARGIN}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>", width - MARGIN);
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, "<g font-family=\"monospace\" font-size=\"10\" fill=\"#555555\">");
        for stem in stem_lo..=stem_hi {
            let x = x_of(stem, 0, 1);
            let _ = writeln!(
                out,
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{stem}</text>",
                height - MARGIN + 14
            );
        }
        for s in 0..=self.s_max {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{s}</text>",
                MARGIN - 6,
                y_of(s) + 4
            );
        }
        let _ = writeln!(out, "</g>");

        let _ = writeln!(out, "<g stroke=\"black\" stroke-width=\"1.5\">");
        for (&(s, t), m) in &self.h0 {
            let stem = t - s as i32;
            let (n_src, n_dst) = (self.dim(s, t), self.dim(s + 1, t + 1));
            for i in 0..m.num_rows() {
                for j in 0..m.num_cols() {
                    if m.get(i, j) {
                        let _ = writeln!(
                            out,
                            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                            x_of(stem, j, n_src),
                            y_of(s),
                            x_of(stem, i, n_dst),
                            y_of(s + 1)
                        );
                    }
                }
            }
        }
        let _ = writeln!(out, "</g>");

        let _ = writeln!(out, "<g fill=\"black\">");
        for (s, t, d) in self.entries() {
            let stem = t - s as i32;
            for k in 0..d {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{RADIUS}\"/>",
                    x_of(stem, k, d),
                    y_of(s)
                );
            }
        }
        let _ = writeln!(out, "</g>");
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
