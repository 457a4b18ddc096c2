//! The splitting-range optimization: three upper bounds on `ℓ` for each choice of
//! `k ∈ [0, n]`, maximized over `k`.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// `#{m : 0 < m ≤ s, m mod 8 ∈ {0, 1, 2, 4}}`.
pub fn h(s: i64) -> i64 {
    if s <= 0 {
        return 0;
    }
    (1..=s).filter(|m| matches!(m % 8, 0 | 1 | 2 | 4)).count() as i64
}

pub fn h_rel(n: i64, k: i64) -> Result<i64> {
    if k < 0 || k > n {
        return Err(Error::KOutOfRange { n, k });
    }
    Ok(h(n) - h(n - k))
}

pub fn closed_form(n: i64) -> i64 {
    2 * n + n.div_euclid(2) - 5
}

/// `max_k min(3n − k, 2n + k − 10)`, the value reached by balancing the second bound
/// against the linear lower estimate of the third.
pub fn balancing_bound(n: i64) -> i64 {
    (0..=n).map(|k| (3 * n - k).min(2 * n + k - 10)).max().unwrap_or(i64::MIN)
}

/// Which form of the first and third bounds to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintVariant {
    /// The first bound reads `ℓ < 2^{h(n − k + star_offset)}`.
    pub star_offset: i64,
    /// The third bound reads `ℓ ≤ 2·h(n, k) + 2n + ddag_offset`.
    pub ddag_offset: i64,
}

impl ConstraintVariant {
    pub const DISPLAYED: ConstraintVariant = ConstraintVariant {
        star_offset: 1,
        ddag_offset: -4,
    };

    pub fn grid() -> Vec<ConstraintVariant> {
        let mut v = Vec::new();
        for star_offset in [0, 1] {
            for ddag_offset in [-4, -5, -6] {
                v.push(ConstraintVariant {
                    star_offset,
                    ddag_offset,
                });
            }
        }
        v
    }
}

impl fmt::Display for ConstraintVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "star={},ddag={}", self.star_offset, self.ddag_offset)
    }
}

impl std::str::FromStr for ConstraintVariant {
    type Err = String;

    /// Parses `star=<0|1>,ddag=<-4|-5|-6>`; either key may be omitted.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut v = ConstraintVariant::DISPLAYED;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let value: i64 = value
                .trim()
                .parse()
                .map_err(|_| format!("`{value}` is not an integer"))?;
            match key.trim() {
                "star" if value == 0 || value == 1 => v.star_offset = value,
                "ddag" if (-6..=-4).contains(&value) => v.ddag_offset = value,
                "star" => return Err("star must be 0 or 1".into()),
                "ddag" => return Err("ddag must be -4, -5 or -6".into()),
                other => return Err(format!("unknown key `{other}`")),
            }
        }
        Ok(v)
    }
}

fn pow2_minus_one(e: i64) -> i64 {
    if e >= 62 {
        i64::MAX
    } else {
        (1i64 << e) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub star: i64,
    pub dag: i64,
    pub ddag: i64,
}

impl Constraints {
    pub fn min(&self) -> i64 {
        self.star.min(self.dag).min(self.ddag)
    }

    /// Names of the bounds attaining the minimum, joined by `+`.
    pub fn binding(&self) -> String {
        let m = self.min();
        let mut tags = Vec::new();
        if self.star == m {
            tags.push("star");
        }
        if self.dag == m {
            tags.push("dag");
        }
        if self.ddag == m {
            tags.push("ddag");
        }
        tags.join("+")
    }
}

pub fn constraints(n: i64, k: i64, v: ConstraintVariant) -> Result<Constraints> {
    let hr = h_rel(n, k)?;
    Ok(Constraints {
        star: pow2_minus_one(h(n - k + v.star_offset)),
        dag: 3 * n - k,
        ddag: 2 * hr + 2 * n + v.ddag_offset,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeResult {
    pub n: i64,
    pub variant: ConstraintVariant,
    pub best: i64,
    pub k: i64,
    pub binding: String,
    pub rows: Vec<(i64, Constraints)>,
}

/// Exhaustive max-min over `k ∈ [0, n]`, ties resolved towards the smallest `k`.
pub fn optimize(n: i64, v: ConstraintVariant) -> Result<RangeResult> {
    if n < 0 {
        return Err(Error::Precondition(format!("n = {n} is negative")));
    }
    let rows: Vec<(i64, Constraints)> = (0..=n)
        .map(|k| constraints(n, k, v).map(|c| (k, c)))
        .collect::<Result<_>>()?;
    let (k, c) = rows
        .iter()
        .fold(None::<&(i64, Constraints)>, |acc, row| match acc {
            Some(best) if best.1.min() >= row.1.min() => Some(best),
            _ => Some(row),
        })
        .copied()
        .expect("k = 0 is always available");
    Ok(RangeResult {
        n,
        variant: v,
        best: c.min(),
        k,
        binding: c.binding(),
        rows,
    })
}

/// The optimum with the first bound dropped.
pub fn optimize_relaxed(n: i64, ddag_offset: i64) -> Result<(i64, i64)> {
    let v = ConstraintVariant {
        star_offset: 1,
        ddag_offset,
    };
    let mut best: Option<(i64, i64)> = None;
    for k in 0..=n {
        let c = constraints(n, k, v)?;
        let m = c.dag.min(c.ddag);
        if best.is_none_or(|(b, _)| m > b) {
            best = Some((m, k));
        }
    }
    best.ok_or_else(|| Error::Precondition(format!("n = {n} is negative")))
}

/// Published values of the maximal `ℓ` for `n = 0, …, 15`.
pub const PUBLISHED_RANGE: [i64; 16] = [-1, 0, 1, 3, 3, 7, 7, 7, 7, 15, 19, 21, 25, 27, 29, 31];

pub fn published_range(n: i64) -> Option<i64> {
    usize::try_from(n).ok().and_then(|i| PUBLISHED_RANGE.get(i).copied())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconcileRow {
    pub variant: ConstraintVariant,
    pub n: i64,
    pub computed: i64,
    pub k: i64,
    pub reference: i64,
}

impl ReconcileRow {
    pub fn matches(&self) -> bool {
        self.computed == self.reference
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconcileReport {
    pub rows: Vec<ReconcileRow>,
}

impl ReconcileReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &ReconcileRow> {
        self.rows.iter().filter(|r| !r.matches())
    }

    pub fn mismatch_ns(&self, v: ConstraintVariant) -> Vec<i64> {
        self.mismatches().filter(|r| r.variant == v).map(|r| r.n).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("variant\tn\tl\tk\tpublished\tmatch\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.variant,
                r.n,
                r.computed,
                r.k,
                r.reference,
                if r.matches() { "match" } else { "MISMATCH" }
            );
        }
        let mut per_variant: Vec<ConstraintVariant> = Vec::new();
        for r in &self.rows {
            if !per_variant.contains(&r.variant) {
                per_variant.push(r.variant);
            }
        }
        for v in per_variant {
            let bad = self.mismatch_ns(v);
            let list: Vec<String> = bad.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "# {v}: {} mismatches [{}]", bad.len(), list.join(","));
        }
        out
    }
}

/// Compares every variant against the published values for `n = 0, …, 15`.
pub fn reconcile_table(variants: &[ConstraintVariant]) -> ReconcileReport {
    let mut rows = Vec::new();
    for &v in variants {
        for (n, &reference) in PUBLISHED_RANGE.iter().enumerate() {
            let r = optimize(n as i64, v).expect("n is nonnegative");
            rows.push(ReconcileRow {
                variant: v,
                n: n as i64,
                computed: r.best,
                k: r.k,
                reference,
            });
        }
    }
    ReconcileReport { rows }
}

/// TSV with columns `n, l, k, binding, published, match` for `n = 0, …, n_max`.
pub fn range_tsv(n_max: i64, v: ConstraintVariant) -> Result<String> {
    let mut out = String::from("n\tl\tk\tbinding\tpublished\tmatch\n");
    for n in 0..=n_max {
        let r = optimize(n, v)?;
        let (reference, flag) = match published_range(n) {
            Some(t) => (t.to_string(), if t == r.best { "match" } else { "MISMATCH" }),
            None => ("-".to_string(), "-"),
        };
        let _ = writeln!(out, "{n}\t{}\t{}\t{}\t{reference}\t{flag}", r.best, r.k, r.binding);
    }
    Ok(out)
}
