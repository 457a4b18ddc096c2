//! Vanishing lines and the refined vanishing regions of stunted projective charts.
//!
//! A line is stored as a slope denominator `m` and an offset `c`; a bidegree `(s, t)`
//! lies in the vanishing region when `m·s > (t − s) + c`. The x-intercept of the line
//! is `−c`, so a line "of slope 1/2 and intercept 2n − 3" is `m = 2, c = −(2n − 3)`.

use std::fmt::Write as _;

use crate::chart::ExtChart;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VanishingLine {
    pub m: i64,
    pub c: i64,
}

impl VanishingLine {
    pub fn new(m: i64, c: i64) -> Self {
        assert!(m > 0, "slope denominator must be positive");
        VanishingLine { m, c }
    }

    /// The line of slope `1/m` meeting the `s = 0` axis at stem `intercept`.
    pub fn with_intercept(m: i64, intercept: i64) -> Self {
        Self::new(m, -intercept)
    }

    pub fn intercept(&self) -> i64 {
        -self.c
    }

    /// Line of slope 1/2 and intercept `2n − 3`, shared by the stunted projective
    /// space starting in degree `2n` and the module `Y`.
    pub fn stunted(n: i64) -> Self {
        Self::with_intercept(2, 2 * n - 3)
    }

    pub fn vanishes(&self, s: i64, t: i64) -> bool {
        self.m * s > (t - s) + self.c
    }
}

/// Moves the intercept left by `r`.
pub fn skeleton_shift(line: VanishingLine, r: i64) -> VanishingLine {
    VanishingLine::new(line.m, line.c + r)
}

pub fn epsilon(s: i64) -> i64 {
    [0, 1, 2, 2][s.rem_euclid(4) as usize]
}

pub fn eta(s: i64) -> i64 {
    [1, 1, 2, 3][s.rem_euclid(4) as usize]
}

/// `t − s − (2n + 1) + ε(s) < 2s`: the region where Ext of a free module over
/// `Λ(Sq^1)` starting in degree `2n + 1` vanishes.
pub fn free_a0_region(n: i64, s: i64, t: i64) -> bool {
    t - s - (2 * n + 1) + epsilon(s) < 2 * s
}

/// `0 < t − s − shift + η(s) < 2s`: the region where Ext of the sphere suspended by
/// `shift` vanishes. On the column `t − s = shift` only the right inequality is live,
/// so that column holds the `h0`-tower and has to be exempted by the caller.
pub fn sphere_region(shift: i64, s: i64, t: i64) -> bool {
    let x = t - s - shift + eta(s);
    0 < x && x < 2 * s
}

/// `2(d + k − 2)`, or `−1` when `d + k < 2` and no skeleton qualifies.
pub fn null_filtration_bound(d: i64, k: i64) -> i64 {
    if d + k < 2 {
        -1
    } else {
        2 * (d + k - 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionReport {
    pub checked: usize,
    pub violations: Vec<(usize, i32, usize)>,
    pub exceptions: Vec<i32>,
}

impl RegionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("s\tt\tdim\n");
        for (s, t, d) in &self.violations {
            let _ = writeln!(out, "{s}\t{t}\t{d}");
        }
        out
    }
}

/// Every nonzero class of `chart` in the safe window that lies in `region` and is not
/// in one of the exempt stems.
pub fn verify_chart<F>(chart: &ExtChart, region: F, exceptions: &[i32]) -> RegionReport
where
    F: Fn(i64, i64) -> bool,
{
    let mut report = RegionReport {
        checked: 0,
        violations: Vec::new(),
        exceptions: exceptions.to_vec(),
    };
    for s in 0..chart.s_max() {
        for t in chart.t_min()..chart.t_max() {
            if !region(s as i64, t as i64) {
                continue;
            }
            report.checked += 1;
            let d = chart.dim(s, t);
            if d > 0 && !exceptions.contains(&(t - s as i32)) {
                report.violations.push((s, t, d));
            }
        }
    }
    report.violations.sort_by_key(|&(s, t, _)| (t - s as i32, s));
    report
}

/// Checks that an exempt column holds exactly one class in every filtration of the
/// safe window, each one `h0` times the one below.
pub fn is_h0_tower(chart: &ExtChart, stem: i32) -> bool {
    for s in 0..chart.s_max() {
        let t = stem + s as i32;
        if t >= chart.t_max() {
            break;
        }
        if chart.dim(s, t) != 1 {
            return false;
        }
        if s + 1 < chart.s_max() && t + 1 < chart.t_max() && chart.h0(s, t).rank() != 1 {
            return false;
        }
    }
    true
}
