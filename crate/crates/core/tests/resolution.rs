mod common;

use adamsplit::module::{
    direct_sum, sphere, split_bottom, stunted_projective, suspend, y_module, GradedModule, ModuleMap,
};
use adamsplit::resolution::{induced_ext_map, minimal_resolution, subadditivity_check};
use adamsplit::Error;

#[test]
fn sphere_tower_matches_exterior_oracle() {
    let r = minimal_resolution(&sphere(0, 24).unwrap(), 10, 24).unwrap();
    let chart = r.ext_chart();
    let oracle = common::exterior_ext_dims(10, 24);
    for s in 0..=10 {
        assert_eq!(chart.dim(s, s as i32), oracle.get(&(s, s as i32)).copied().unwrap_or(0));
        assert_eq!(chart.dim(s, s as i32), 1);
    }
    // the exterior algebra has nothing off the t = s line
    assert!(oracle.iter().all(|(&(s, t), _)| t == s as i32));
    for s in 0..10 {
        assert_eq!(chart.h0(s, s as i32).rank(), 1, "h0 on the tower at s = {s}");
    }
}

#[test]
fn stage_one_is_the_indecomposables() {
    let r = minimal_resolution(&sphere(0, 40).unwrap(), 1, 40).unwrap();
    let gens: Vec<u32> = (1..=40).filter(|&t| r.num_gens(1, t) > 0).map(|t| t as u32).collect();
    assert_eq!(gens, common::indecomposable_degrees(40));
    assert!((1..=40).all(|t| r.num_gens(1, t) <= 1));
}

#[test]
fn structural_checks() {
    let modules: Vec<GradedModule> = vec![
        sphere(0, 22).unwrap(),
        stunted_projective(4, 26).unwrap(),
        y_module(2, 26).unwrap(),
    ];
    for m in &modules {
        let r = minimal_resolution(m, 6, m.t_max()).unwrap();
        assert!(r.check_d_squared().unwrap() > 0, "{}", m.name());
        r.check_minimality().unwrap();
        r.check_exactness().unwrap();
    }
}

#[test]
fn charts_are_deterministic_across_thread_counts() {
    let m = stunted_projective(6, 30).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| minimal_resolution(&m, 8, 30).unwrap().ext_chart())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(a.to_svg(), b.to_svg());
}

#[test]
fn identity_and_zero_maps() {
    let m = stunted_projective(2, 18).unwrap();
    let r = minimal_resolution(&m, 5, 18).unwrap();
    let id = induced_ext_map(&ModuleMap::identity(&m), &r, &r).unwrap();
    for ((s, t), mat) in &id.matrices {
        assert_eq!(mat.num_rows(), r.num_gens(*s, *t));
        assert_eq!(mat, &adamsplit::f2::F2Matrix::identity(mat.num_rows()), "({s}, {t})");
    }
    let zero = induced_ext_map(&ModuleMap::zero(&m, &m), &r, &r).unwrap();
    assert!(zero.matrices.values().all(|mat| mat.rank() == 0));
    assert!(id.direction.contains("->"));
}

#[test]
fn non_equivariant_map_fails_to_lift() {
    let s = sphere(4, 16).unwrap();
    let y = y_module(2, 16).unwrap();
    let f = ModuleMap::by_labels(&s, &y, |_| vec!["y4".into()]).unwrap();
    let rs = minimal_resolution(&s, 3, 16).unwrap();
    let ry = minimal_resolution(&y, 3, 16).unwrap();
    assert!(matches!(induced_ext_map(&f, &rs, &ry), Err(Error::LiftFailed { .. })));
}

#[test]
fn inclusion_above_bottom_is_iso_where_the_sphere_vanishes() {
    for n in 1..=2 {
        let t_max = 2 * n + 16;
        let m = stunted_projective(2 * n, t_max).unwrap();
        let split = split_bottom(&m).unwrap();
        let inc = ModuleMap::by_shared_labels(&split.complement, &m).unwrap();
        let s_max = 6;
        let r_sub = minimal_resolution(&split.complement, s_max, t_max).unwrap();
        let r_m = minimal_resolution(&m, s_max, t_max).unwrap();
        let r_bot = minimal_resolution(&split.bottom, s_max + 1, t_max).unwrap();
        let map = induced_ext_map(&inc, &r_sub, &r_m).unwrap();
        let mut checked = 0;
        for s in 0..s_max {
            for t in (2 * n)..t_max {
                if r_bot.num_gens(s, t) == 0 && r_bot.num_gens(s + 1, t) == 0 {
                    let a = r_sub.num_gens(s, t);
                    let b = r_m.num_gens(s, t);
                    assert_eq!(a, b, "n = {n}, ({s}, {t})");
                    if a > 0 {
                        assert_eq!(map.matrix(s, t).unwrap().rank(), a, "n = {n}, ({s}, {t})");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 5);
    }
}

fn ses_charts(m: &GradedModule, s_max: usize) -> [adamsplit::ExtChart; 3] {
    let split = split_bottom(m).unwrap();
    let t = m.t_max();
    [
        minimal_resolution(&split.complement, s_max, t).unwrap().ext_chart(),
        minimal_resolution(m, s_max, t).unwrap().ext_chart(),
        minimal_resolution(&split.bottom, s_max, t).unwrap().ext_chart(),
    ]
}

#[test]
fn subadditivity_on_the_two_sequences() {
    for m in [stunted_projective(4, 24).unwrap(), y_module(1, 22).unwrap(), y_module(2, 24).unwrap()] {
        let [a, b, c] = ses_charts(&m, 8);
        let rep = subadditivity_check(&a, &b, &c);
        assert!(rep.passed(), "{}: {:?}", m.name(), rep.violations);
        assert!(rep.checked > 100);
    }
}

#[test]
fn split_sum_is_additive() {
    let a = sphere(0, 20).unwrap();
    let c = suspend(&sphere(0, 17).unwrap(), 3);
    let b = direct_sum(&a, &c);
    let charts: Vec<_> = [&a, &b, &c]
        .iter()
        .map(|m| minimal_resolution(m, 6, 20).unwrap().ext_chart())
        .collect();
    let rep = subadditivity_check(&charts[0], &charts[1], &charts[2]);
    assert!(rep.passed());
    assert!(rep.equal_everywhere);
}

#[test]
fn tsv_round_trip_and_window_restriction() {
    let chart = minimal_resolution(&sphere(0, 20).unwrap(), 6, 20).unwrap().ext_chart();
    let back = adamsplit::ExtChart::from_tsv("s", &chart.to_tsv(), 6, 0, 20).unwrap();
    assert_eq!(back.to_tsv(), chart.to_tsv());
    let small = minimal_resolution(&sphere(0, 14).unwrap(), 4, 14).unwrap().ext_chart();
    let cut = chart.restrict(4, 14).unwrap();
    let dims = |c: &adamsplit::ExtChart| c.entries().collect::<Vec<_>>();
    assert_eq!(dims(&cut), dims(&small));
}
