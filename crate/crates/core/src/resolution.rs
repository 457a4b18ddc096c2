//! Minimal free resolutions over the Steenrod algebra in a bidegree window.
//!
//! Stage `s` is a free module `C_s` with generators in increasing internal degree.
//! In each internal degree `t` the image of the already known generators is
//! compared with the cycles of `C_{s-1}` (or with `M_t` for `s = 0`), and new
//! generators are added exactly for a complement. Generators added this way
//! never have unit coefficients in their differential, so the resolution is
//! minimal and `dim Ext^{s,t}` is the number of stage-`s` generators in degree `t`.
//!
//! Once a stage is complete, the kernels feeding the next stage are computed
//! independently per internal degree on the rayon pool.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::chart::ExtChart;
use crate::error::{Error, Result};
use crate::f2::{F2Matrix, F2Vector, Subspace};
use crate::module::{GradedModule, ModuleMap};
use crate::steenrod::SteenrodAlgebra;

/// Position of a generator's block inside the basis of a free module in one degree.
#[derive(Clone, Copy, Debug)]
struct Block {
    gen: usize,
    offset: usize,
    len: usize,
}

#[derive(Clone, Debug, Default)]
struct Layout {
    blocks: Vec<Block>,
    dim: usize,
}

impl Layout {
    fn block_of(&self, gen: usize) -> Option<&Block> {
        // blocks are sorted by gen and by offset
        self.blocks
            .binary_search_by_key(&gen, |b| b.gen)
            .ok()
            .map(|k| &self.blocks[k])
    }

    /// The generator and monomial index of basis element `idx`.
    fn locate(&self, idx: usize) -> (usize, usize) {
        let k = self.blocks.partition_point(|b| b.offset <= idx) - 1;
        let b = &self.blocks[k];
        (b.gen, idx - b.offset)
    }
}

/// One stage `C_s -> C_{s-1}` (or `C_0 -> M`) of a resolution.
#[derive(Clone, Debug)]
pub struct Stage {
    gen_degrees: Vec<i32>,
    /// Differential of each generator, in the target basis of its degree.
    images: Vec<F2Vector>,
    layouts: Vec<Layout>,
    /// Differential in each degree: one row per source basis element.
    matrices: Vec<F2Matrix>,
}

impl Stage {
    pub fn num_gens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn gen_degree(&self, g: usize) -> i32 {
        self.gen_degrees[g]
    }

    /// Indices of the generators in internal degree `t`, in insertion order.
    pub fn gens_in_degree(&self, t: i32) -> std::ops::Range<usize> {
        let lo = self.gen_degrees.partition_point(|&d| d < t);
        let hi = self.gen_degrees.partition_point(|&d| d <= t);
        lo..hi
    }

    pub fn image(&self, g: usize) -> &F2Vector {
        &self.images[g]
    }
}

#[derive(Clone)]
pub struct Resolution {
    module: GradedModule,
    algebra: Arc<SteenrodAlgebra>,
    s_max: usize,
    t_min: i32,
    t_max: i32,
    stages: Vec<Stage>,
}

impl std::fmt::Debug for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Resolution")
            .field("module", &self.module.name())
            .field("s_max", &self.s_max)
            .field("t_max", &self.t_max)
            .finish()
    }
}

/// Resolves `module` through homological degree `s_max` and internal degree `t_max`.
///
/// A window that lies entirely below the module gives an empty resolution.
pub fn minimal_resolution(module: &GradedModule, s_max: usize, t_max: i32) -> Result<Resolution> {
    let t_min = module.t_min();
    let span = (t_max - t_min).max(0) as u32;
    let algebra = Arc::new(SteenrodAlgebra::new(span));
    minimal_resolution_with(module, s_max, t_max, algebra)
}

/// Like [`minimal_resolution`] but reusing an algebra table that covers `t_max - t_min`.
pub fn minimal_resolution_with(
    module: &GradedModule,
    s_max: usize,
    t_max: i32,
    algebra: Arc<SteenrodAlgebra>,
) -> Result<Resolution> {
    if t_max > module.t_max() {
        return Err(Error::InvalidWindow(format!(
            "t_max = {t_max} exceeds the module truncation {}",
            module.t_max()
        )));
    }
    let t_min = module.t_min();
    if t_max >= t_min && (algebra.max_degree() as i32) < t_max - t_min {
        return Err(Error::InvalidWindow(
            "algebra table does not reach the window".into(),
        ));
    }
    let mut res = Resolution {
        module: module.clone(),
        algebra,
        s_max,
        t_min,
        t_max,
        stages: Vec::with_capacity(s_max + 1),
    };
    if t_max < t_min {
        return Ok(res);
    }
    let degrees: Vec<i32> = (t_min..=t_max).collect();
    let mut cycles: Vec<Vec<F2Vector>> = degrees
        .iter()
        .map(|&t| (0..module.dim(t)).map(|b| F2Vector::unit(module.dim(t), b)).collect())
        .collect();
    for s in 0..=s_max {
        let stage = res.build_stage(s, &cycles);
        if s < s_max {
            cycles = stage
                .matrices
                .par_iter()
                .map(|m| m.transpose().kernel_basis())
                .collect();
        }
        res.stages.push(stage);
    }
    Ok(res)
}

impl Resolution {
    pub fn module(&self) -> &GradedModule {
        &self.module
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

    pub fn algebra(&self) -> &Arc<SteenrodAlgebra> {
        &self.algebra
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, s: usize) -> &Stage {
        &self.stages[s]
    }

    fn slot(&self, t: i32) -> usize {
        (t - self.t_min) as usize
    }

    /// Dimension of the target of stage `s` in degree `t`.
    fn target_dim(&self, s: usize, t: i32) -> usize {
        if s == 0 {
            self.module.dim(t)
        } else {
            self.stages[s - 1].layouts[self.slot(t)].dim
        }
    }

    /// `a · x` for `x` an element of the free module `stage` in degree `deg`,
    /// where `a` is the `a_idx`-th admissible monomial of degree `a_deg`.
    fn act_free(&self, stage: &Stage, a_deg: u32, a_idx: usize, deg: i32, x: &F2Vector) -> F2Vector {
        let t = deg + a_deg as i32;
        let target = &stage.layouts[self.slot(t)];
        let source = &stage.layouts[self.slot(deg)];
        let mut out = F2Vector::zeros(target.dim);
        for idx in x.ones() {
            let (h, b) = source.locate(idx);
            let b_deg = (deg - stage.gen_degrees[h]) as u32;
            let prod = self.algebra.product(a_deg, a_idx, b_deg, b);
            let block = target.block_of(h).expect("generator has a block in higher degrees");
            for j in prod.ones() {
                out.flip(block.offset + j);
            }
        }
        out
    }

    /// Image of the basis element (generator `g`, monomial `a_idx` of degree `a_deg`)
    /// of the stage currently under construction.
    fn basis_image(&self, s: usize, gen_deg: i32, image: &F2Vector, a_deg: u32, a_idx: usize) -> F2Vector {
        if s == 0 {
            let word = self.algebra.basis(a_deg)[a_idx].exponents();
            self.module.act_word(word, gen_deg, image)
        } else {
            self.act_free(&self.stages[s - 1], a_deg, a_idx, gen_deg, image)
        }
    }

    fn build_stage(&self, s: usize, cycles: &[Vec<F2Vector>]) -> Stage {
        let mut gen_degrees: Vec<i32> = Vec::new();
        let mut images: Vec<F2Vector> = Vec::new();
        let mut layouts = Vec::with_capacity(cycles.len());
        let mut matrices = Vec::with_capacity(cycles.len());
        for (k, cyc) in cycles.iter().enumerate() {
            let t = self.t_min + k as i32;
            let target_dim = self.target_dim(s, t);
            let mut rows = Vec::new();
            let mut layout = Layout::default();
            for g in 0..gen_degrees.len() {
                let a_deg = (t - gen_degrees[g]) as u32;
                let len = self.algebra.dim(a_deg);
                layout.blocks.push(Block {
                    gen: g,
                    offset: rows.len(),
                    len,
                });
                for a_idx in 0..len {
                    rows.push(self.basis_image(s, gen_degrees[g], &images[g], a_deg, a_idx));
                }
            }
            let mut span = Subspace::new(target_dim);
            for r in &rows {
                span.add(r);
            }
            for z in cyc {
                if span.add(z) {
                    layout.blocks.push(Block {
                        gen: gen_degrees.len(),
                        offset: rows.len(),
                        len: 1,
                    });
                    gen_degrees.push(t);
                    images.push(z.clone());
                    rows.push(z.clone());
                }
            }
            layout.dim = rows.len();
            layouts.push(layout);
            matrices.push(F2Matrix::from_rows(target_dim, rows));
        }
        Stage {
            gen_degrees,
            images,
            layouts,
            matrices,
        }
    }

    /// Number of stage-`s` generators in internal degree `t`.
    pub fn num_gens(&self, s: usize, t: i32) -> usize {
        self.stages.get(s).map_or(0, |st| st.gens_in_degree(t).len())
    }

    /// Verifies `d ∘ d = 0` on every generator of every stage `s >= 1`.
    pub fn check_d_squared(&self) -> std::result::Result<usize, String> {
        let mut checked = 0;
        for s in 1..self.stages.len() {
            let stage = &self.stages[s];
            let prev = &self.stages[s - 1];
            for g in 0..stage.num_gens() {
                let t = stage.gen_degrees[g];
                let m = &prev.matrices[self.slot(t)];
                let mut dd = F2Vector::zeros(m.num_cols());
                for i in stage.images[g].ones() {
                    dd.add_assign(m.row(i));
                }
                checked += 1;
                if !dd.is_zero() {
                    return Err(format!("d(d(g)) != 0 for generator {g} of stage {s} (t = {t})"));
                }
            }
        }
        Ok(checked)
    }

    /// Verifies that no differential has a unit coefficient on a generator.
    pub fn check_minimality(&self) -> std::result::Result<usize, String> {
        let mut checked = 0;
        for s in 1..self.stages.len() {
            let stage = &self.stages[s];
            let prev = &self.stages[s - 1];
            for g in 0..stage.num_gens() {
                let t = stage.gen_degrees[g];
                let layout = &prev.layouts[self.slot(t)];
                for h in prev.gens_in_degree(t) {
                    let block = layout.block_of(h).expect("block exists");
                    checked += 1;
                    if stage.images[g].get(block.offset) {
                        return Err(format!(
                            "stage {s} generator {g} (t = {t}) has a unit coefficient on generator {h}"
                        ));
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Verifies exactness degreewise: stage 0 covers the module, and the image of each
    /// stage equals the kernel of the previous one.
    pub fn check_exactness(&self) -> std::result::Result<(), String> {
        for t in self.t_min..=self.t_max {
            let k = self.slot(t);
            if let Some(stage0) = self.stages.first() {
                if stage0.matrices[k].rank() != self.module.dim(t) {
                    return Err(format!("C_0 -> M is not onto in degree {t}"));
                }
            }
            for s in 1..self.stages.len() {
                let prev = &self.stages[s - 1].matrices[k];
                let kernel = prev.num_rows() - prev.rank();
                let image = self.stages[s].matrices[k].rank();
                if kernel != image {
                    return Err(format!(
                        "not exact at stage {} degree {t}: kernel {kernel}, image {image}",
                        s - 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Coefficient of `Sq^1 h` in `d(g)`, for `g` a stage-`(s+1)` generator in degree
    /// `t + 1` and `h` a stage-`s` generator in degree `t`.
    fn sq1_coefficient(&self, s: usize, g: usize, h: usize) -> bool {
        let stage = &self.stages[s + 1];
        let t1 = stage.gen_degrees[g];
        let layout = &self.stages[s].layouts[self.slot(t1)];
        let block = layout.block_of(h).expect("block exists");
        debug_assert_eq!(block.len, 1);
        stage.images[g].get(block.offset)
    }

    /// Ext dimensions and h0-multiplication read off the minimal resolution.
    pub fn ext_chart(&self) -> ExtChart {
        let mut dims = BTreeMap::new();
        let mut h0 = BTreeMap::new();
        for (s, stage) in self.stages.iter().enumerate() {
            for t in self.t_min..=self.t_max {
                let n = stage.gens_in_degree(t).len();
                if n > 0 {
                    dims.insert((s, t), n);
                }
            }
        }
        for s in 0..self.stages.len().saturating_sub(1) {
            for t in self.t_min..self.t_max {
                let src = self.stages[s].gens_in_degree(t);
                let dst = self.stages[s + 1].gens_in_degree(t + 1);
                if src.is_empty() || dst.is_empty() {
                    continue;
                }
                let mut m = F2Matrix::zeros(dst.len(), src.len());
                for (i, g) in dst.clone().enumerate() {
                    for (j, h) in src.clone().enumerate() {
                        if self.sq1_coefficient(s, g, h) {
                            m.set(i, j, true);
                        }
                    }
                }
                h0.insert((s, t), m);
            }
        }
        ExtChart::new(
            self.module.name().to_string(),
            self.s_max,
            self.t_min,
            self.t_max,
            dims,
            h0,
            self.module.notes().to_vec(),
        )
    }
}

/// The map on Ext induced by a module map `f: M -> N`. Ext is contravariant in the
/// module, so each matrix sends `Ext^{s,t}(N)` coordinates to `Ext^{s,t}(M)` coordinates:
/// rows are indexed by classes of `M`, columns by classes of `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtMap {
    pub direction: String,
    pub matrices: BTreeMap<(usize, i32), F2Matrix>,
}

impl ExtMap {
    pub fn matrix(&self, s: usize, t: i32) -> Option<&F2Matrix> {
        self.matrices.get(&(s, t))
    }
}

/// Lifts `f: M -> N` to a chain map between the resolutions of `M` (`source`) and `N`
/// (`target`) and reads off the induced map on Ext in the common window.
pub fn induced_ext_map(f: &ModuleMap<'_>, source: &Resolution, target: &Resolution) -> Result<ExtMap> {
    if f.source != source.module() || f.target != target.module() {
        return Err(Error::Precondition(
            "resolutions do not resolve the source and target of the map".into(),
        ));
    }
    let s_max = source.s_max.min(target.s_max).min(source.stages.len().saturating_sub(1));
    let t_max = source.t_max.min(target.t_max);
    let mut matrices = BTreeMap::new();
    if source.stages.is_empty() || target.stages.is_empty() {
        return Ok(ExtMap {
            direction: format!("Ext({}) -> Ext({})", f.target.name(), f.source.name()),
            matrices,
        });
    }
    // lifts[g] = F_s(g) in the basis of D_s in degree deg(g); None above the window
    let mut prev_lifts: Vec<Option<F2Vector>> = Vec::new();
    for s in 0..=s_max {
        let cs = &source.stages[s];
        let ds = &target.stages[s];
        let mut lifts = Vec::with_capacity(cs.num_gens());
        for g in 0..cs.num_gens() {
            let t = cs.gen_degrees[g];
            if t > t_max || t < target.t_min {
                lifts.push(if t < target.t_min && t <= t_max {
                    Some(F2Vector::zeros(0))
                } else {
                    None
                });
                continue;
            }
            let rhs = if s == 0 {
                f.apply(t, &cs.images[g])
            } else {
                let prev_c = &source.stages[s - 1];
                let prev_d = &target.stages[s - 1];
                let dim = prev_d.layouts[target.slot(t)].dim;
                let mut acc = F2Vector::zeros(dim);
                let layout = &prev_c.layouts[source.slot(t)];
                for idx in cs.images[g].ones() {
                    let (h, b) = layout.locate(idx);
                    let h_deg = prev_c.gen_degrees[h];
                    if h_deg < target.t_min {
                        continue;
                    }
                    let lift_h = prev_lifts[h].as_ref().expect("lower generators are lifted");
                    let b_deg = (t - h_deg) as u32;
                    acc.add_assign(&target.act_free(prev_d, b_deg, b, h_deg, lift_h));
                }
                acc
            };
            let map = ds.matrices[target.slot(t)].transpose();
            let x = map
                .solve(&rhs)?
                .ok_or(Error::LiftFailed { s, t })?;
            lifts.push(Some(x));
        }
        for t in source.t_min.max(target.t_min)..=t_max {
            let src = cs.gens_in_degree(t);
            let dst = ds.gens_in_degree(t);
            if src.is_empty() && dst.is_empty() {
                continue;
            }
            let layout = &ds.layouts[target.slot(t)];
            let mut m = F2Matrix::zeros(src.len(), dst.len());
            for (i, g) in src.clone().enumerate() {
                let lift = lifts[g].as_ref().expect("in window");
                for (j, h) in dst.clone().enumerate() {
                    let block = layout.block_of(h).expect("block exists");
                    if lift.get(block.offset) {
                        m.set(i, j, true);
                    }
                }
            }
            matrices.insert((s, t), m);
        }
        prev_lifts = lifts;
    }
    Ok(ExtMap {
        direction: format!("Ext({}) -> Ext({})", f.target.name(), f.source.name()),
        matrices,
    })
}

/// A bidegree where `dim Ext(B) > dim Ext(A) + dim Ext(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditivityViolation {
    pub s: usize,
    pub t: i32,
    pub sub: usize,
    pub middle: usize,
    pub quotient: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditivityReport {
    pub checked: usize,
    pub violations: Vec<SubadditivityViolation>,
    /// True when `dim Ext(B) = dim Ext(A) + dim Ext(C)` at every checked bidegree.
    pub equal_everywhere: bool,
}

impl SubadditivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For a short exact sequence `0 -> A -> B -> C -> 0` the long exact sequence in Ext
/// bounds `dim Ext^{s,t}(B) <= dim Ext^{s,t}(A) + dim Ext^{s,t}(C)`. Checked on the safe
/// window `s <= s_max - 1`, `t <= t_max - 1` common to all three charts.
pub fn subadditivity_check(sub: &ExtChart, middle: &ExtChart, quotient: &ExtChart) -> SubadditivityReport {
    let s_hi = sub.s_max().min(middle.s_max()).min(quotient.s_max()).saturating_sub(1);
    let t_hi = sub.t_max().min(middle.t_max()).min(quotient.t_max()) - 1;
    let t_lo = sub.t_min().min(middle.t_min()).min(quotient.t_min());
    let mut report = SubadditivityReport {
        checked: 0,
        violations: Vec::new(),
        equal_everywhere: true,
    };
    for s in 0..=s_hi {
        for t in t_lo..=t_hi {
            let (a, b, c) = (sub.dim(s, t), middle.dim(s, t), quotient.dim(s, t));
            report.checked += 1;
            if b != a + c {
                report.equal_everywhere = false;
            }
            if b > a + c {
                report.violations.push(SubadditivityViolation {
                    s,
                    t,
                    sub: a,
                    middle: b,
                    quotient: c,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{sphere, stunted_projective};

    #[test]
    fn sphere_low_stages() {
        let r = minimal_resolution(&sphere(0, 20).unwrap(), 4, 20).unwrap();
        assert_eq!(r.num_gens(0, 0), 1);
        let stage1: Vec<i32> = (0..=20).filter(|&t| r.num_gens(1, t) > 0).collect();
        assert_eq!(stage1, vec![1, 2, 4, 8, 16]);
        for s in 0..=4 {
            assert_eq!(r.num_gens(s, s as i32), 1);
        }
        r.check_d_squared().unwrap();
        r.check_minimality().unwrap();
        r.check_exactness().unwrap();
    }

    #[test]
    fn stunted_bottom_generator() {
        for n in 1..=3 {
            let m = stunted_projective(2 * n, 2 * n + 10).unwrap();
            let r = minimal_resolution(&m, 2, 2 * n + 10).unwrap();
            assert_eq!(r.num_gens(0, 2 * n), 1);
            r.check_exactness().unwrap();
        }
    }

    #[test]
    fn empty_window() {
        let m = stunted_projective(6, 10).unwrap();
        let r = minimal_resolution(&m, 3, 5).unwrap();
        assert!(r.stages().is_empty());
        assert!(r.ext_chart().entries().next().is_none());
    }

    #[test]
    fn window_beyond_truncation_is_rejected() {
        let m = sphere(0, 5).unwrap();
        assert!(matches!(minimal_resolution(&m, 2, 6), Err(Error::InvalidWindow(_))));
    }
}
