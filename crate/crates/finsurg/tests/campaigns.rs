use std::time::Duration;

use finsurg::campaigns::{
    sweep_consecutive_lens, sweep_distance_two, sweep_dtype_distance3, sweep_dtype_neighbors,
    sweep_prism_det_bound, Budget,
};
use finsurg::tables::bundled_tables;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn serial_and_parallel_agree() {
    let rows = bundled_tables().unwrap();
    let b = Budget::unlimited();
    let (serial, parallel) = (pool(1), pool(4));
    let a = serial.install(|| sweep_consecutive_lens(80, &b)).unwrap();
    let c = parallel.install(|| sweep_consecutive_lens(80, &b)).unwrap();
    assert!(a.same_outcome(&c));
    assert_eq!(a.summary(), c.summary());
    let a = serial.install(|| sweep_distance_two(&rows, &b)).unwrap();
    let c = parallel.install(|| sweep_distance_two(&rows, &b)).unwrap();
    assert!(a.same_outcome(&c));
    let a = serial.install(|| sweep_dtype_distance3(&rows, &rows, &b)).unwrap();
    let c = parallel.install(|| sweep_dtype_distance3(&rows, &rows, &b)).unwrap();
    assert!(a.same_outcome(&c));
    let a = serial.install(|| sweep_dtype_neighbors(&rows, &b)).unwrap();
    let c = parallel.install(|| sweep_dtype_neighbors(&rows, &b)).unwrap();
    assert!(a.same_outcome(&c));
    let a = serial.install(|| sweep_prism_det_bound(50, &b)).unwrap();
    let c = parallel.install(|| sweep_prism_det_bound(50, &b)).unwrap();
    assert!(a.same_outcome(&c));
}

#[test]
fn consecutive_prefix_property() {
    let b = Budget::unlimited();
    let long = sweep_consecutive_lens(90, &b).unwrap();
    for p_max in [17, 18, 30, 31, 66, 67, 80] {
        let short = sweep_consecutive_lens(p_max, &b).unwrap();
        let expected: Vec<_> = long.hits.iter().filter(|h| h.p <= p_max).cloned().collect();
        assert_eq!(short.hits, expected, "p_max={p_max}");
    }
}

#[test]
fn hits_reverify() {
    let rows = bundled_tables().unwrap();
    let b = Budget::unlimited();
    for h in sweep_consecutive_lens(70, &b).unwrap().hits {
        assert!(h.reverify().unwrap(), "{h}");
    }
    for h in sweep_distance_two(&rows, &b).unwrap().hits {
        assert!(h.reverify().unwrap(), "{h}");
    }
    for h in sweep_dtype_neighbors(&rows, &b).unwrap().hits {
        let row = rows.iter().find(|r| r.slope.p == h.alpha && r.knot_name == h.knot).unwrap();
        assert!(h.reverify(row.ddelta.unwrap()).unwrap(), "{h}");
    }
}

#[test]
fn distance3_known_rows() {
    let rows = bundled_tables().unwrap();
    let r = sweep_dtype_distance3(&rows, &rows, &Budget::unlimited()).unwrap();
    // alpha = 37 (det 19) and alpha = 13 (det 5) do not match their prism manifolds
    assert!(r.hits.iter().all(|h| h.alpha != 37 && h.alpha != 13));
    assert!(r.hits.iter().all(|h| h.in_d_table == Some(true)));
    let alphas: Vec<i64> = r.hits.iter().map(|h| h.alpha).collect();
    assert_eq!(alphas, [1, 11]);
}

#[test]
fn budget_produces_partial_report() {
    let r = sweep_consecutive_lens(150, &Budget::new(Some(Duration::ZERO))).unwrap();
    assert!(!r.complete);
    assert!(r.hits.is_empty());
    let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["complete"], false);
}
