use divspline::KnotVector;
use proptest::prelude::*;

/// Textbook recursive Cox-de Boor definition with right-continuous spans,
/// closed at the right end of the knot range.
fn naive_basis(t: &[f64], i: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        let last = t[t.len() - 1];
        let inside = t[i] <= x && x < t[i + 1];
        let at_end = x == last && t[i] < t[i + 1] && t[i + 1] == last;
        return if inside || at_end { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = t[i + p] - t[i];
    if d1 > 0.0 {
        v += (x - t[i]) / d1 * naive_basis(t, i, p - 1, x);
    }
    let d2 = t[i + p + 1] - t[i + 1];
    if d2 > 0.0 {
        v += (t[i + p + 1] - x) / d2 * naive_basis(t, i + 1, p - 1, x);
    }
    v
}

/// Open knot vector on [0, 1] with interior breaks from `cuts` and the given
/// interior multiplicity.
fn knot_vector(degree: usize, cuts: &[f64], mult: usize) -> KnotVector {
    let mut breaks: Vec<f64> = cuts.iter().map(|c| c.clamp(0.05, 0.95)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 0.02);
    let mut knots = vec![0.0; degree + 1];
    for &b in &breaks {
        knots.extend(std::iter::repeat_n(b, mult.min(degree)));
    }
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    KnotVector::new(degree, knots).unwrap()
}

/// All basis functions (full length) from the evaluator.
fn full_row(kv: &KnotVector, x: f64, d: usize) -> Vec<f64> {
    let ev = kv.eval_nonzero_basis(x, d).unwrap();
    let mut row = vec![0.0; kv.num_basis()];
    for j in 0..=kv.degree() {
        row[ev.first_index() + j] = ev.get(d, j);
    }
    row
}

#[test]
fn values_match_naive_recursion() {
    for degree in 1..=4 {
        let kv = knot_vector(degree, &[0.2, 0.45, 0.7], 1);
        for k in 0..=40 {
            let x = k as f64 / 40.0;
            let row = full_row(&kv, x, 0);
            for (i, v) in row.iter().enumerate() {
                let want = naive_basis(kv.knots(), i, degree, x);
                assert!((v - want).abs() < 1e-13, "p={degree} x={x} i={i}: {v} vs {want}");
            }
        }
    }
}

#[test]
fn example_knot_vectors() {
    let kv = KnotVector::open_uniform(1, 2, (0.0, 1.0)).unwrap();
    assert_eq!(kv.knots(), &[0.0, 0.0, 0.5, 1.0, 1.0]);
    let kv = KnotVector::open_uniform(2, 1, (0.0, 1.0)).unwrap();
    assert_eq!(kv.knots(), &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    assert_eq!(kv.regularity(), vec![-1, -1]);
    let kv = KnotVector::open_uniform(2, 2, (0.0, 1.0)).unwrap();
    assert_eq!(kv.regularity(), vec![-1, 1, -1]);
}

#[test]
fn evaluation_outside_range_is_an_error() {
    let kv = KnotVector::open_uniform(2, 3, (0.0, 1.0)).unwrap();
    assert!(kv.eval_nonzero_basis(1.0 + 1e-9, 0).is_err());
    assert!(kv.eval_nonzero_basis(-1e-9, 1).is_err());
    assert!(kv.eval_nonzero_basis(1.0, 1).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partition_of_unity_random_knots(
        degree in 1usize..=4,
        cuts in proptest::collection::vec(0.0f64..1.0, 0..6),
        mult in 1usize..=3,
        x in 0.0f64..=1.0,
    ) {
        let kv = knot_vector(degree, &cuts, mult);
        let ev = kv.eval_nonzero_basis(x, 2).unwrap();
        let s0: f64 = ev.values[0].iter().sum();
        let s1: f64 = ev.values[1].iter().sum();
        let s2: f64 = ev.values[2].iter().sum();
        prop_assert!((s0 - 1.0).abs() < 1e-12);
        prop_assert!(s1.abs() < 1e-10);
        prop_assert!(s2.abs() < 1e-8);
        prop_assert!(ev.values[0].iter().all(|&v| v >= -1e-14));
    }

    #[test]
    fn derivatives_match_central_differences(
        degree in 1usize..=4,
        cuts in proptest::collection::vec(0.0f64..1.0, 0..4),
        x in 0.0f64..1.0,
    ) {
        let kv = knot_vector(degree, &cuts, 1);
        // keep the stencil inside one knot span
        let span_x = |y: f64| kv.find_element(y).unwrap();
        let h = 1e-5;
        prop_assume!(x - h > 0.0 && x + h < 1.0 && span_x(x - h) == span_x(x + h));
        for d in 1..=3.min(degree) {
            let exact = full_row(&kv, x, d);
            let lo = full_row(&kv, x - h, d - 1);
            let hi = full_row(&kv, x + h, d - 1);
            let scale = exact.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..exact.len() {
                let fd = (hi[i] - lo[i]) / (2.0 * h);
                prop_assert!((fd - exact[i]).abs() < 1e-6 * scale, "d={} i={}: {} vs {}", d, i, fd, exact[i]);
            }
        }
    }

    #[test]
    fn smoothness_at_interior_knots_follows_regularity(
        degree in 2usize..=4,
        mult in 1usize..=2,
        z in 0.2f64..0.8,
    ) {
        let kv = knot_vector(degree, &[z], mult);
        let zk = kv.unique_knots()[1];
        let alpha = kv.regularity()[1];
        prop_assert_eq!(alpha, (degree - mult) as i64);
        let eps = 1e-12;
        for d in 0..=alpha as usize {
            let l = full_row(&kv, zk - eps, d);
            let r = full_row(&kv, zk, d);
            let scale = r.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..l.len() {
                prop_assert!((l[i] - r[i]).abs() < 1e-8 * scale.max(1.0));
            }
        }
        // the next derivative jumps for some basis function
        let d = alpha as usize + 1;
        let l = full_row(&kv, zk - eps, d);
        let r = full_row(&kv, zk, d);
        let jump = l.iter().zip(&r).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(jump > 1e-3);
    }
}
