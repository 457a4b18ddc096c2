//! Degreewise finite graded modules over the Steenrod algebra, given by a
//! basis in each degree and explicit tables for every `Sq^i`.
//!
//! Modules are truncated at `t_max`: any square that would land above the
//! window is zero. Ext^{s,t} for `t <= t_max` only sees module degrees
//! `<= t_max`, so the truncation is harmless inside the window.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vector};
use crate::steenrod::{adem_reduce, binom_mod2, binom_mod2_signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    name: String,
    t_min: i32,
    t_max: i32,
    labels: Vec<Vec<String>>,
    /// `action[t - t_min][i - 1][b]` is `Sq^i` of basis element `b` in degree `t`.
    action: Vec<Vec<Vec<F2Vector>>>,
    notes: Vec<String>,
}

impl GradedModule {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn t_min(&self) -> i32 {
        self.t_min
    }

    pub fn t_max(&self) -> i32 {
        self.t_max
    }

    /// Model assumptions that should travel with every result computed from this module.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn dim(&self, t: i32) -> usize {
        self.slot(t).map_or(0, |k| self.labels[k].len())
    }

    pub fn labels(&self, t: i32) -> &[String] {
        self.slot(t).map_or(&[], |k| &self.labels[k])
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    /// Degrees carrying at least one basis element.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (self.t_min..=self.t_max).filter(|&t| self.dim(t) > 0)
    }

    /// Lowest degree with a nonzero class.
    pub fn bottom_degree(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn find_label(&self, label: &str) -> Option<(i32, usize)> {
        self.labels.iter().enumerate().find_map(|(k, ls)| {
            ls.iter()
                .position(|l| l == label)
                .map(|b| (self.t_min + k as i32, b))
        })
    }

    fn slot(&self, t: i32) -> Option<usize> {
        (t >= self.t_min && t <= self.t_max).then(|| (t - self.t_min) as usize)
    }

    /// `Sq^i` of basis element `b` in degree `t`, as a vector in degree `t + i`.
    pub fn sq(&self, i: u32, t: i32, b: usize) -> F2Vector {
        if i == 0 {
            return F2Vector::unit(self.dim(t), b);
        }
        let target = t + i as i32;
        match self.slot(t) {
            Some(k) if target <= self.t_max => self.action[k][i as usize - 1][b].clone(),
            _ => F2Vector::zeros(self.dim(target)),
        }
    }

    /// `Sq^i` applied to a vector in degree `t`.
    pub fn sq_vector(&self, i: u32, t: i32, v: &F2Vector) -> F2Vector {
        debug_assert_eq!(v.len(), self.dim(t));
        if i == 0 {
            return v.clone();
        }
        let target = t + i as i32;
        let mut out = F2Vector::zeros(self.dim(target));
        if target > self.t_max {
            return out;
        }
        if let Some(k) = self.slot(t) {
            for b in v.ones() {
                out.add_assign(&self.action[k][i as usize - 1][b]);
            }
        }
        out
    }

    /// Applies `Sq^{w_1} ... Sq^{w_k}` (rightmost square first) to a vector in degree `t`.
    pub fn act_word(&self, word: &[u32], t: i32, v: &F2Vector) -> F2Vector {
        let mut cur = v.clone();
        let mut deg = t;
        for &i in word.iter().rev() {
            cur = self.sq_vector(i, deg, &cur);
            deg += i as i32;
        }
        cur
    }

    /// Checks `Sq^a Sq^b = adem_reduce(a, b)` on every basis element for every
    /// inadmissible pair that stays inside the window. Returns the first failure.
    pub fn check_adem(&self) -> std::result::Result<(), String> {
        for t in self.degrees() {
            let room = (self.t_max - t) as u32;
            for a in 1..room {
                for b in 1..=(room - a) {
                    if a >= 2 * b {
                        continue;
                    }
                    let rel = adem_reduce(&[a, b]);
                    for x in 0..self.dim(t) {
                        let v = F2Vector::unit(self.dim(t), x);
                        let lhs = self.act_word(&[a, b], t, &v);
                        let mut rhs = F2Vector::zeros(lhs.len());
                        for m in rel.terms() {
                            rhs.add_assign(&self.act_word(m.exponents(), t, &v));
                        }
                        if lhs != rhs {
                            return Err(format!(
                                "Sq{a} Sq{b} != {rel} on {} (degree {t})",
                                self.labels(t)[x]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The text form read by [`GradedModule::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# module {}", self.name);
        let _ = writeln!(out, "# window {} {}", self.t_min, self.t_max);
        for note in &self.notes {
            let _ = writeln!(out, "# note {note}");
        }
        for t in self.degrees() {
            for l in self.labels(t) {
                let _ = writeln!(out, "gen {l} {t}");
            }
        }
        for t in self.degrees() {
            for i in 1..=(self.t_max - t) as u32 {
                for (b, l) in self.labels(t).iter().enumerate() {
                    let v = self.sq(i, t, b);
                    if v.is_zero() {
                        continue;
                    }
                    let targets = self.labels(t + i as i32);
                    let rhs: Vec<&str> = v.ones().map(|j| targets[j].as_str()).collect();
                    let _ = writeln!(out, "sq {i} {l} = {}", rhs.join("+"));
                }
            }
        }
        out
    }

    /// Parses the line-oriented module format:
    ///
    /// ```text
    /// gen <label> <degree>
    /// sq <i> <label> = <label>+<label>+...
    /// ```
    ///
    /// `#` starts a comment. A `# window <t_min> <t_max>` comment widens the
    /// truncation window; otherwise it is the span of generator degrees.
    /// `= 0` records a vanishing square. Actions that break an Adem relation
    /// inside the window are rejected.
    pub fn from_text(name: &str, text: &str) -> Result<Self> {
        let mut builder = ModuleBuilder::new(name);
        let mut window: Option<(i32, i32)> = None;
        let mut sqs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let err = |message: String| Error::Parse { line, message };
            let trimmed = raw.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                match words.next() {
                    Some("window") => {
                        let lo = words.next().and_then(|w| w.parse().ok());
                        let hi = words.next().and_then(|w| w.parse().ok());
                        match (lo, hi) {
                            (Some(lo), Some(hi)) => window = Some((lo, hi)),
                            _ => return Err(err("malformed window comment".into())),
                        }
                    }
                    Some("note") => {
                        let rest = comment.trim_start().trim_start_matches("note").trim();
                        builder.note(rest);
                    }
                    _ => {}
                }
                continue;
            }
            let content = trimmed.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["gen", label, degree] => {
                    let degree: i32 = degree
                        .parse()
                        .map_err(|_| err(format!("bad degree {degree:?}")))?;
                    if builder.has_label(label) {
                        return Err(err(format!("duplicate generator {label}")));
                    }
                    builder.gen(label, degree);
                }
                ["sq", i, label, "=", rest @ ..] => {
                    let i: u32 = i
                        .parse()
                        .ok()
                        .filter(|&i| i > 0)
                        .ok_or_else(|| err(format!("bad square index {i:?}")))?;
                    let targets: Vec<String> = rest
                        .join("")
                        .split('+')
                        .filter(|s| !s.is_empty() && *s != "0")
                        .map(str::to_string)
                        .collect();
                    sqs.push((line, i, label.to_string(), targets));
                }
                _ => return Err(err(format!("unrecognised line {content:?}"))),
            }
        }
        for (line, i, label, targets) in sqs {
            builder
                .sq(i, &label, &targets)
                .map_err(|message| Error::Parse { line, message })?;
        }
        let module = builder.build(window)?;
        module.check_adem().map_err(Error::Precondition)?;
        Ok(module)
    }
}

/// Incremental construction of a [`GradedModule`] by labels.
pub struct ModuleBuilder {
    name: String,
    gens: Vec<(String, i32)>,
    index: HashMap<String, usize>,
    sqs: Vec<(u32, usize, Vec<usize>)>,
    notes: Vec<String>,
}

impl ModuleBuilder {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            gens: Vec::new(),
            index: HashMap::new(),
            sqs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn gen(&mut self, label: &str, degree: i32) -> &mut Self {
        self.index.insert(label.to_string(), self.gens.len());
        self.gens.push((label.to_string(), degree));
        self
    }

    pub fn note(&mut self, note: &str) -> &mut Self {
        self.notes.push(note.to_string());
        self
    }

    /// Records `Sq^i label = sum of targets`, checking that degrees match.
    pub fn sq(&mut self, i: u32, label: &str, targets: &[String]) -> std::result::Result<(), String> {
        let &src = self
            .index
            .get(label)
            .ok_or_else(|| format!("unknown generator {label}"))?;
        let mut idx = Vec::with_capacity(targets.len());
        for t in targets {
            let &j = self.index.get(t).ok_or_else(|| format!("unknown generator {t}"))?;
            if self.gens[j].1 != self.gens[src].1 + i as i32 {
                return Err(format!(
                    "Sq{i} {label} has degree {}, but {t} has degree {}",
                    self.gens[src].1 + i as i32,
                    self.gens[j].1
                ));
            }
            idx.push(j);
        }
        self.sqs.push((i, src, idx));
        Ok(())
    }

    pub fn build(&self, window: Option<(i32, i32)>) -> Result<GradedModule> {
        let lo = self.gens.iter().map(|g| g.1).min();
        let hi = self.gens.iter().map(|g| g.1).max();
        let (t_min, t_max) = match (window, lo, hi) {
            (Some((a, b)), lo, hi) => {
                if a > b || lo.is_some_and(|lo| lo < a) || hi.is_some_and(|hi| hi > b) {
                    return Err(Error::InvalidWindow(format!(
                        "window [{a}, {b}] does not contain every generator"
                    )));
                }
                (a, b)
            }
            (None, Some(lo), Some(hi)) => (lo, hi),
            (None, _, _) => (0, 0),
        };
        let width = (t_max - t_min + 1) as usize;
        let mut labels = vec![Vec::new(); width];
        let mut position = vec![0usize; self.gens.len()];
        for (g, (label, degree)) in self.gens.iter().enumerate() {
            let k = (degree - t_min) as usize;
            position[g] = labels[k].len();
            labels[k].push(label.clone());
        }
        let mut action: Vec<Vec<Vec<F2Vector>>> = (0..width)
            .map(|k| {
                let t = t_min + k as i32;
                (1..=(t_max - t))
                    .map(|i| vec![F2Vector::zeros(labels[k + i as usize].len()); labels[k].len()])
                    .collect()
            })
            .collect();
        for (i, src, targets) in &self.sqs {
            let (_, degree) = self.gens[*src];
            if degree + *i as i32 > t_max {
                continue;
            }
            let k = (degree - t_min) as usize;
            let row = &mut action[k][*i as usize - 1][position[*src]];
            for &j in targets {
                row.flip(position[j]);
            }
        }
        Ok(GradedModule {
            name: self.name.clone(),
            t_min,
            t_max,
            labels,
            action,
            notes: self.notes.clone(),
        })
    }
}

/// One class in degree `m` with trivial action, in the window `[m, t_max]`.
pub fn sphere(m: i32, t_max: i32) -> Result<GradedModule> {
    if t_max < m {
        return Err(Error::InvalidWindow(format!("t_max = {t_max} below sphere degree {m}")));
    }
    let mut b = ModuleBuilder::new(&format!("sphere({m})"));
    b.gen(&format!("i{m}"), m);
    b.build(Some((m, t_max)))
}

/// Cohomology of the stunted projective space with bottom cell in degree `bottom`:
/// one class `x_q` per degree `q` in `[bottom, t_max]`, `Sq^i x_q = binom(q, i) x_{q+i}`.
pub fn stunted_projective(bottom: i32, t_max: i32) -> Result<GradedModule> {
    if t_max < bottom {
        return Err(Error::InvalidWindow(format!(
            "t_max = {t_max} below the bottom class in degree {bottom}; the module would be empty"
        )));
    }
    if bottom < 0 {
        return Err(Error::InvalidWindow("stunted projective bottom must be nonnegative".into()));
    }
    let mut b = ModuleBuilder::new(&format!("stunted({bottom})"));
    for q in bottom..=t_max {
        b.gen(&format!("x{q}"), q);
    }
    for q in bottom..=t_max {
        for i in 1..=(t_max - q) {
            if binom_mod2(q as u64, i as u64) {
                b.sq(i as u32, &format!("x{q}"), &[format!("x{}", q + i)])
                    .expect("labels exist");
            }
        }
    }
    b.build(Some((bottom, t_max)))
}

/// Shifts every degree up by `j`, keeping the action.
pub fn suspend(m: &GradedModule, j: i32) -> GradedModule {
    GradedModule {
        name: if j == 0 {
            m.name.clone()
        } else {
            format!("S^{j} {}", m.name)
        },
        t_min: m.t_min + j,
        t_max: m.t_max + j,
        labels: m.labels.clone(),
        action: m.action.clone(),
        notes: m.notes.clone(),
    }
}

/// Degreewise concatenation of bases; the window is the union of both windows.
/// Labels are prefixed with `a:` / `b:` only if the two label sets collide.
pub fn direct_sum(m: &GradedModule, n: &GradedModule) -> GradedModule {
    let collide = m
        .labels
        .iter()
        .flatten()
        .any(|l| n.find_label(l).is_some());
    let relabel = |prefix: &str, l: &String| {
        if collide {
            format!("{prefix}:{l}")
        } else {
            l.clone()
        }
    };
    let mut b = ModuleBuilder::new(&format!("{} + {}", m.name, n.name));
    for (src, prefix) in [(m, "a"), (n, "b")] {
        for t in src.degrees() {
            for l in src.labels(t) {
                b.gen(&relabel(prefix, l), t);
            }
        }
    }
    for (src, prefix) in [(m, "a"), (n, "b")] {
        for t in src.degrees() {
            for i in 1..=(src.t_max - t) as u32 {
                for (x, l) in src.labels(t).iter().enumerate() {
                    let v = src.sq(i, t, x);
                    let targets: Vec<String> = v
                        .ones()
                        .map(|y| relabel(prefix, &src.labels(t + i as i32)[y]))
                        .collect();
                    if !targets.is_empty() {
                        b.sq(i, &relabel(prefix, l), &targets).expect("labels exist");
                    }
                }
            }
        }
    }
    for note in m.notes.iter().chain(&n.notes) {
        b.note(note);
    }
    b.build(Some((m.t_min.min(n.t_min), m.t_max.max(n.t_max))))
        .expect("window contains both summands")
}

/// Coefficients `c_i` with `Sq^i y = c_i z_{bottom+i}` in the Y module. `c_1 = 1` is the
/// Bockstein forced by the Z/2 bottom homotopy group; the rest solve the Adem relations
/// on `y` with free choices set to zero.
fn y_higher_action(bottom: i64, len: u32) -> Vec<bool> {
    // Unknowns c_2 ..= c_len, stored at index i - 2.
    let vars = len.saturating_sub(1) as usize;
    // Sq^a z_{bottom+b} = binom(bottom + b - 1, a) z_{bottom+a+b}
    let z_coeff = |a: i64, b: i64| binom_mod2_signed(bottom + b - 1, a);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for total in 2..=len as i64 {
        for b in 1..total {
            let a = total - b;
            if a >= 2 * b {
                continue;
            }
            // Collect c_i coefficients of (lhs + rhs) of the Adem relation applied to y.
            let mut row = F2Vector::zeros(vars);
            let mut constant = false;
            let mut add = |i: i64, coeff: bool| {
                if !coeff {
                    return;
                }
                if i == 1 {
                    constant ^= true;
                } else {
                    row.flip(i as usize - 2);
                }
            };
            add(b, z_coeff(a, b));
            for j in 0..=a / 2 {
                if !binom_mod2_signed(b - j - 1, a - 2 * j) {
                    continue;
                }
                if j == 0 {
                    add(a + b, true);
                } else {
                    add(j, z_coeff(a + b - j, j));
                }
            }
            rows.push(row);
            rhs.push(constant);
        }
    }
    let mut c = vec![false; len as usize + 1];
    if len >= 1 {
        c[1] = true;
    }
    if vars == 0 {
        return c;
    }
    let m = F2Matrix::from_rows(vars, rows);
    let mut b = F2Vector::zeros(rhs.len());
    for (k, &bit) in rhs.iter().enumerate() {
        b.set(k, bit);
    }
    let sol = m
        .solve(&b)
        .expect("dimensions agree")
        .expect("the Y extension is realised topologically, so the Adem system is consistent");
    for i in sol.ones() {
        c[i + 2] = true;
    }
    c
}

/// Cohomology of the spectrum Y: a bottom class `y_{2n}` on top of the suspended
/// stunted projective module `z_{2n+1+k}`, glued by `Sq^1 y = z_{2n+1}`.
pub fn y_module(n: u32, t_max: i32) -> Result<GradedModule> {
    let bottom = 2 * n as i32;
    if t_max < bottom + 1 {
        return Err(Error::InvalidWindow(format!(
            "Y module needs t_max >= 2n + 1 = {}",
            bottom + 1
        )));
    }
    let mut b = ModuleBuilder::new(&format!("Y({n})"));
    b.gen(&format!("y{bottom}"), bottom);
    for q in (bottom + 1)..=t_max {
        b.gen(&format!("z{q}"), q);
    }
    for q in (bottom + 1)..=t_max {
        for i in 1..=(t_max - q) {
            // z_q is the suspension of x_{q-1}
            if binom_mod2((q - 1) as u64, i as u64) {
                b.sq(i as u32, &format!("z{q}"), &[format!("z{}", q + i)])
                    .expect("labels exist");
            }
        }
    }
    let c = y_higher_action(bottom as i64, (t_max - bottom) as u32);
    let mut nonzero = Vec::new();
    for (i, &on) in c.iter().enumerate().skip(1) {
        if on {
            b.sq(i as u32, &format!("y{bottom}"), &[format!("z{}", bottom + i as i32)])
                .expect("labels exist");
            nonzero.push(i.to_string());
        }
    }
    b.note(&format!(
        "model assumption: only Sq^1 y{bottom} = z{} is forced; Sq^i y{bottom} for i >= 2 solved from Adem consistency with free choices zero; nonzero for i in {{{}}}",
        bottom + 1,
        nonzero.join(",")
    ));
    b.build(Some((bottom, t_max)))
}

/// The bottom class of a module and the submodule of everything above it:
/// `0 -> complement -> M -> bottom -> 0`.
#[derive(Clone, Debug)]
pub struct BottomSplit {
    pub bottom: GradedModule,
    pub complement: GradedModule,
}

/// Splits off the one-dimensional bottom degree of `m` (e.g. a stunted projective module).
pub fn split_bottom(m: &GradedModule) -> Result<BottomSplit> {
    let bottom_deg = m
        .bottom_degree()
        .ok_or_else(|| Error::Precondition("cannot split an empty module".into()))?;
    if m.dim(bottom_deg) != 1 {
        return Err(Error::Precondition(format!(
            "bottom degree {bottom_deg} of {} is not one-dimensional",
            m.name()
        )));
    }
    if m.t_max() <= bottom_deg {
        return Err(Error::InvalidWindow("nothing above the bottom class".into()));
    }
    let mut sub = ModuleBuilder::new(&format!("{} above bottom", m.name()));
    for t in m.degrees().filter(|&t| t > bottom_deg) {
        for l in m.labels(t) {
            sub.gen(l, t);
        }
    }
    for t in m.degrees().filter(|&t| t > bottom_deg) {
        for i in 1..=(m.t_max() - t) as u32 {
            for (x, l) in m.labels(t).iter().enumerate() {
                let targets: Vec<String> = m
                    .sq(i, t, x)
                    .ones()
                    .map(|y| m.labels(t + i as i32)[y].clone())
                    .collect();
                if !targets.is_empty() {
                    sub.sq(i, l, &targets).expect("labels exist");
                }
            }
        }
    }
    for note in m.notes() {
        sub.note(note);
    }
    let complement = sub.build(Some((bottom_deg + 1, m.t_max())))?;
    let mut bot = ModuleBuilder::new(&format!("bottom of {}", m.name()));
    bot.gen(&m.labels(bottom_deg)[0], bottom_deg);
    let bottom = bot.build(Some((bottom_deg, m.t_max())))?;
    Ok(BottomSplit { bottom, complement })
}

/// `dim ker(Sq^1) / im(Sq^1)` in each degree whose outgoing `Sq^1` stays inside the window.
pub fn margolis_h1(m: &GradedModule) -> BTreeMap<i32, usize> {
    let sq1_rank = |t: i32| -> usize {
        let rows: Vec<F2Vector> = (0..m.dim(t)).map(|b| m.sq(1, t, b)).collect();
        F2Matrix::from_rows(m.dim(t + 1), rows).rank()
    };
    (m.t_min()..m.t_max())
        .map(|t| {
            let kernel = m.dim(t) - sq1_rank(t);
            let image = if t > m.t_min() { sq1_rank(t - 1) } else { 0 };
            (t, kernel - image)
        })
        .collect()
}

/// A degree-preserving linear map between modules. `matrices[t]` has one row per source
/// basis element of degree `t`, holding its image in the target basis.
#[derive(Clone, Debug)]
pub struct ModuleMap<'a> {
    pub source: &'a GradedModule,
    pub target: &'a GradedModule,
    matrices: BTreeMap<i32, F2Matrix>,
}

impl<'a> ModuleMap<'a> {
    /// Builds a map from per-degree matrices; missing degrees are zero.
    pub fn new(
        source: &'a GradedModule,
        target: &'a GradedModule,
        mut matrices: BTreeMap<i32, F2Matrix>,
    ) -> Result<Self> {
        for t in source.t_min()..=source.t_max() {
            let m = matrices
                .entry(t)
                .or_insert_with(|| F2Matrix::zeros(source.dim(t), target.dim(t)));
            if m.num_rows() != source.dim(t) || m.num_cols() != target.dim(t) {
                return Err(Error::DimensionMismatch {
                    expected: source.dim(t) * target.dim(t),
                    found: m.num_rows() * m.num_cols(),
                });
            }
        }
        matrices.retain(|&t, _| t >= source.t_min() && t <= source.t_max());
        Ok(Self {
            source,
            target,
            matrices,
        })
    }

    pub fn identity(m: &'a GradedModule) -> Self {
        let matrices = m.degrees().map(|t| (t, F2Matrix::identity(m.dim(t)))).collect();
        Self::new(m, m, matrices).expect("square matrices")
    }

    pub fn zero(source: &'a GradedModule, target: &'a GradedModule) -> Self {
        Self::new(source, target, BTreeMap::new()).expect("zero map")
    }

    /// Sends each source label to the sum of the target labels returned by `f`.
    pub fn by_labels<F>(source: &'a GradedModule, target: &'a GradedModule, f: F) -> Result<Self>
    where
        F: Fn(&str) -> Vec<String>,
    {
        let mut matrices = BTreeMap::new();
        for t in source.degrees() {
            let mut m = F2Matrix::zeros(source.dim(t), target.dim(t));
            for (x, l) in source.labels(t).iter().enumerate() {
                for img in f(l) {
                    let (deg, y) = target.find_label(&img).ok_or_else(|| {
                        Error::Precondition(format!("label {img} not in {}", target.name()))
                    })?;
                    if deg != t {
                        return Err(Error::Precondition(format!(
                            "{l} (degree {t}) cannot map to {img} (degree {deg})"
                        )));
                    }
                    m.set(x, y, !m.get(x, y));
                }
            }
            matrices.insert(t, m);
        }
        Self::new(source, target, matrices)
    }

    /// The identity on shared labels: every source label maps to the same label in the
    /// target if present, and to zero otherwise.
    pub fn by_shared_labels(source: &'a GradedModule, target: &'a GradedModule) -> Result<Self> {
        Self::by_labels(source, target, |l| {
            target.find_label(l).map(|_| vec![l.to_string()]).unwrap_or_default()
        })
    }

    pub fn matrix(&self, t: i32) -> F2Matrix {
        self.matrices
            .get(&t)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.source.dim(t), self.target.dim(t)))
    }

    /// Image of a source vector in degree `t`.
    pub fn apply(&self, t: i32, v: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.target.dim(t));
        if let Some(m) = self.matrices.get(&t) {
            for b in v.ones() {
                out.add_assign(m.row(b));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

/// Verifies `f(Sq^i x) = Sq^i f(x)` on every basis element where both sides are inside
/// both windows.
pub fn check_module_map(f: &ModuleMap<'_>) -> CheckReport {
    let top = f.source.t_max().min(f.target.t_max());
    let mut report = CheckReport {
        checked: 0,
        failures: Vec::new(),
    };
    for t in f.source.degrees() {
        for i in 1..=(top - t).max(0) as u32 {
            let ti = t + i as i32;
            for x in 0..f.source.dim(t) {
                let lhs = f.apply(ti, &f.source.sq(i, t, x));
                let fx = f.apply(t, &F2Vector::unit(f.source.dim(t), x));
                let rhs = f.target.sq_vector(i, t, &fx);
                report.checked += 1;
                if lhs != rhs {
                    report.failures.push(format!(
                        "degree {t}: f(Sq{i} {}) != Sq{i} f({})",
                        f.source.labels(t)[x],
                        f.source.labels(t)[x]
                    ));
                }
            }
        }
    }
    report
}

/// Checks that `0 -> A -f-> B -g-> C -> 0` is a short exact sequence of modules on the
/// common window: both maps equivariant, `f` injective, `g` surjective, `ker g = im f`.
pub fn ses_check(f: &ModuleMap<'_>, g: &ModuleMap<'_>) -> CheckReport {
    let mut report = check_module_map(f);
    let rg = check_module_map(g);
    report.checked += rg.checked;
    report.failures.extend(rg.failures);
    if f.target != g.source {
        report
            .failures
            .push("the middle modules of the two maps differ".to_string());
        return report;
    }
    let hi = f.source.t_max().min(f.target.t_max()).min(g.target.t_max());
    for t in f.target.t_min()..=hi {
        let (a, b, c) = (f.source.dim(t), f.target.dim(t), g.target.dim(t));
        let mf = f.matrix(t);
        let mg = g.matrix(t);
        report.checked += 1;
        if mf.rank() != a {
            report.failures.push(format!("degree {t}: f is not injective"));
        }
        if mg.rank() != c {
            report.failures.push(format!("degree {t}: g is not surjective"));
        }
        if !mf.mul(&mg).rows().iter().all(F2Vector::is_zero) {
            report.failures.push(format!("degree {t}: g o f != 0"));
        }
        if a + c != b {
            report
                .failures
                .push(format!("degree {t}: dimensions {a} + {c} != {b}, ker g != im f"));
        }
    }
    report
}
