//! Property tests for the structural invariants. The proptest RNG is seeded
//! from `DT_REGGE_TEST_SEED` (default below) so failures replay exactly.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use dt_regge::complex::{curvature_assignments, divisor, gauss_bonnet_check};
use dt_regge::geometry::{half_edge_lengths, median_identity_check, CornerFan};
use dt_regge::io::{
    catalog_from_json, catalog_to_json, ribbon_from_json, ribbon_to_json, triangulation_from_json,
    triangulation_to_json, RunReport,
};
use dt_regge::measure::{
    incidence_matrix, leray_volume, leray_volume_with, pfaffian, LerayOptions,
};
use dt_regge::numeric::matrix::int_determinant;
use dt_regge::numeric::rational::Precision;
use dt_regge::pairing::duality::volume_terms;
use dt_regge::pairing::enumerate::{feasible_q_vectors, Catalog};
use dt_regge::pairing::tau::{genus0_by_string, genus0_closed_form};
use dt_regge::pairing::{enumerate_all, enumerate_triangulations, intersection_number, EnumOptions, TauOptions};
use dt_regge::polygon::{edge_length_map, isoperimetric_length_map, polygon_two_form, tangent_map, PolygonChart};
use dt_regge::ribbon::{aut_boundary, aut_map, canonical_code, genus};

type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn seeded(cases: u32) -> Config {
    let seed = std::env::var("DT_REGGE_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x00d7_5eed);
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn serial() -> EnumOptions {
    EnumOptions {
        parallel: false,
        ..EnumOptions::default()
    }
}

fn all_catalogs(keys: &[(u32, usize)]) -> Vec<Catalog> {
    keys.iter()
        .flat_map(|&(g, n)| enumerate_all(g, n, serial()).unwrap().into_values())
        .filter(|c| !c.entries.is_empty())
        .collect()
}

fn fan_strategy() -> impl Strategy<Value = CornerFan> {
    (3usize..=8).prop_flat_map(|n| {
        (prop::collection::vec(10i64..=19, n), prop::collection::vec(10i64..=19, n)).prop_map(|(s, l)| {
            let sq = |k: &i64| Q::new(BigInt::from(k * k), BigInt::from(100));
            CornerFan::new(s.iter().map(sq).collect(), l.iter().map(sq).collect()).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

// ---------------------------------------------------------------- geometry

proptest! {
    #![proptest_config(seeded(100))]

    #[test]
    fn median_identity_on_random_fans(fan in fan_strategy()) {
        let d = half_edge_lengths(&fan).unwrap();
        let r = median_identity_check(&d);
        prop_assert!(r.pass);
        prop_assert!(r.residual.is_zero());
    }

    #[test]
    fn equilateral_perimeter(n in 3usize..=8, a in 1i64..=20) {
        let fan = CornerFan::equilateral(n, qi(a * a)).unwrap();
        let d = half_edge_lengths(&fan).unwrap();
        let want = a as f64 * n as f64 / 3f64.sqrt();
        prop_assert!((d.perimeter() - want).abs() < 1e-12 * want);
    }
}

// ---------------------------------------------------------------- polygons

fn chart_strategy() -> impl Strategy<Value = PolygonChart> {
    (3usize..=7)
        .prop_flat_map(|q| prop::collection::vec((-9i64..=9, -9i64..=9), q - 1))
        .prop_filter_map("nonzero edges", |pairs| {
            let pairs: Vec<(Q, Q)> = pairs.into_iter().map(|(a, b)| (qi(a), qi(b))).collect();
            let p = PolygonChart::from_pairs(&pairs).ok()?;
            let ok = p.edges().iter().all(|z| !z.norm_sqr().is_zero()) && !p.closing_edge().norm_sqr().is_zero();
            ok.then_some(p)
        })
}

proptest! {
    #![proptest_config(seeded(100))]

    #[test]
    fn tangent_map_matches_finite_differences(
        p in chart_strategy(),
        dirs in prop::collection::vec((-5i64..=5, -5i64..=5), 8),
    ) {
        let prec = Precision(50);
        let xi: Vec<Complex<Q>> = dirs[..p.edges().len()].iter().map(|&(a, b)| Complex::new(qi(a), qi(b))).collect();
        let h = Q::new(1.into(), BigInt::from(10).pow(10));
        let shift = |s: &Q| {
            PolygonChart::new(p.edges().iter().zip(&xi).map(|(z, x)| z + x.scale(s.clone())).collect()).unwrap()
        };
        let per = qi(100);
        let up = isoperimetric_length_map(&shift(&h), &per, prec);
        let down = isoperimetric_length_map(&shift(&-&h), &per, prec);
        let t = tangent_map(&p, &xi, prec).unwrap();
        for i in 0..t.len() {
            let fd = (&up[i] - &down[i]) / (qi(2) * &h);
            prop_assert!((fd - &t[i]).abs().to_f64().unwrap() < 1e-8);
        }
    }

    #[test]
    fn edge_lengths_scale_by_modulus(p in chart_strategy(), num in 1i64..=30, den in 1i64..=30) {
        let prec = Precision(50);
        let lam = Q::new(num.into(), den.into());
        let scaled = edge_length_map(&p.scaled(&Complex::new(lam.clone(), Q::zero())), prec);
        let base = edge_length_map(&p, prec);
        let tol = Q::new(1.into(), BigInt::from(10).pow(40));
        for (s, b) in scaled.iter().zip(&base) {
            prop_assert!((s - &lam * b).abs() < tol);
        }
    }

    #[test]
    fn two_form_is_cyclically_invariant_at_fixed_perimeter(
        q in 3usize..=8,
        u in prop::collection::vec(-9i64..=9, 8),
        v in prop::collection::vec(-9i64..=9, 8),
        shift in 0usize..8,
    ) {
        // Tangent vectors to the fixed-perimeter slice: components sum to zero.
        let close = |w: &[i64]| {
            let mut w: Vec<Q> = w[..q - 1].iter().map(|&x| qi(x)).collect();
            let s = w.iter().fold(Q::zero(), |a, x| a + x);
            w.push(-s);
            w
        };
        let (u, v) = (close(&u), close(&v));
        let m = polygon_two_form(q);
        let eval = |u: &[Q], v: &[Q]| {
            let mut acc = Q::zero();
            for a in 0..q - 1 {
                for b in 0..q - 1 {
                    acc += &m[a][b] * &u[a] * &v[b];
                }
            }
            acc
        };
        let rot = |w: &[Q]| (0..q).map(|i| w[(i + shift) % q].clone()).collect::<Vec<_>>();
        prop_assert_eq!(eval(&u, &v), eval(&rot(&u), &rot(&v)));
    }
}

// ---------------------------------------------------------------- Pfaffians

fn skew_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|m| {
        let n = 2 * m;
        prop::collection::vec(-6i64..=6, n * (n - 1) / 2).prop_map(move |vals| {
            let mut b = vec![vec![0i64; n]; n];
            let mut it = vals.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    b[i][j] = x;
                    b[j][i] = -x;
                }
            }
            b
        })
    })
}

proptest! {
    #![proptest_config(seeded(200))]

    #[test]
    fn pfaffian_squares_to_determinant(b in skew_strategy()) {
        let pf = pfaffian(&b).unwrap();
        let rows: Vec<Vec<BigInt>> = b.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(&pf * &pf, int_determinant(&rows));
    }
}

// ---------------------------------------------------------------- intersection numbers

proptest! {
    #![proptest_config(seeded(1000))]

    #[test]
    fn dimension_filter(g in 0u32..=1, d in prop::collection::vec(0u32..=6, 1..=7)) {
        let n = d.len() as i64;
        let s: i64 = d.iter().map(|&x| x as i64).sum();
        prop_assume!(s != n + 3 * g as i64 - 3);
        prop_assert_eq!(intersection_number(g, &d, TauOptions::default()).unwrap(), Q::zero());
    }
}

fn on_shell(g: u32, n: usize) -> impl Strategy<Value = Vec<u32>> {
    let total = (n as i64 + 3 * g as i64 - 3).max(0) as u32;
    prop::collection::vec(0u32..=total, n).prop_filter("on shell", move |d| d.iter().sum::<u32>() == total)
}

proptest! {
    #![proptest_config(seeded(300))]

    #[test]
    fn string_equation(
        (g, d) in (0u32..=1).prop_flat_map(|g| {
            let lo = if g == 0 { 3 } else { 1 };
            (Just(g), (lo..=6usize).prop_flat_map(move |n| on_shell(g, n)))
        })
    ) {
        let opts = TauOptions::default();
        let mut with0 = vec![0u32];
        with0.extend(&d);
        let lhs = intersection_number(g, &with0, opts).unwrap();
        let mut rhs = Q::zero();
        for j in 0..d.len() {
            if d[j] == 0 {
                continue;
            }
            let mut e = d.clone();
            e[j] -= 1;
            rhs += intersection_number(g, &e, opts).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn genus0_closed_form_matches_string_reduction() {
    for n in 3..=7usize {
        for d in dt_regge::pairing::tau::exponent_vectors(n, (n - 3) as u32) {
            assert_eq!(genus0_closed_form(&d), genus0_by_string(&d), "{d:?}");
        }
    }
}

// ---------------------------------------------------------------- catalogs

#[test]
fn catalog_triangulation_invariants() {
    for cat in all_catalogs(&[(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3)]) {
        for e in &cat.entries {
            let t = &e.triangulation;
            let q = curvature_assignments(t);
            assert_eq!(q, cat.q);
            assert_eq!(q.iter().sum::<u32>() as usize, 3 * t.face_count());
            assert_eq!(divisor(t).degree, qi(2 * cat.genus as i64 - 2));
            assert!(gauss_bonnet_check(t).pass);
            let g = &e.graph;
            assert_eq!(genus(g), t.genus());
            assert_eq!(g.boundary_count(), cat.vertices);
            for c in dt_regge::ribbon::boundary_cycles(g) {
                assert_eq!(c.sides() as u32, cat.q[c.label as usize - 1]);
            }
        }
    }
}

#[test]
fn leray_vertices_have_fixed_total_length() {
    for cat in all_catalogs(&[(0, 3), (0, 4), (0, 5), (1, 1), (1, 2)]) {
        let rhs: Vec<Q> = cat.q.iter().map(|&x| qi(x as i64)).collect();
        let want = qi(3 * (cat.vertices as i64 + 2 * cat.genus as i64 - 2));
        assert_eq!(rhs.iter().fold(Q::zero(), |a, x| a + x) / qi(2), want);
        for e in &cat.entries {
            let v = leray_volume(&incidence_matrix(&e.graph).with_rhs(rhs.clone())).unwrap();
            for p in &v.vertices {
                assert_eq!(p.iter().fold(Q::zero(), |a, x| a + x), want);
            }
        }
    }
}

#[test]
fn parallel_and_serial_enumeration_agree() {
    for (g, n) in [(0, 5), (0, 6), (1, 2), (1, 3)] {
        let par = enumerate_all(g, n, EnumOptions::default()).unwrap();
        let ser = enumerate_all(g, n, serial()).unwrap();
        assert_eq!(par.len(), ser.len());
        for (k, c) in &par {
            assert_eq!(c.codes(), ser[k].codes());
        }
    }
}

fn graphs() -> Vec<dt_regge::RibbonGraph> {
    all_catalogs(&[(0, 4), (0, 5), (1, 2)])
        .into_iter()
        .flat_map(|c| c.entries.into_iter().map(|e| e.graph))
        .collect()
}

proptest! {
    #![proptest_config(seeded(64))]

    #[test]
    fn automorphism_orders_under_renumbering(
        (idx, perm) in (0usize..200).prop_flat_map(|i| {
            let gs = graphs();
            let g = &gs[i % gs.len()];
            (Just(i % gs.len()), permutation(g.dart_count()))
        })
    ) {
        let g = &graphs()[idx];
        let h = g.renumbered(&perm);
        let (ab, am) = (aut_boundary(g).order(), aut_map(g).order());
        prop_assert_eq!(am % ab, 0);
        prop_assert_eq!(aut_boundary(&h).order(), ab);
        prop_assert_eq!(aut_map(&h).order(), am);
        prop_assert_eq!(canonical_code(&h), canonical_code(g));
    }

    #[test]
    fn json_round_trips(
        (idx, perm) in (0usize..200).prop_flat_map(|i| {
            let gs = graphs();
            let g = &gs[i % gs.len()];
            (Just(i % gs.len()), permutation(g.dart_count()))
        })
    ) {
        let g = graphs()[idx].renumbered(&perm);
        prop_assert_eq!(ribbon_from_json(&ribbon_to_json(&g)).unwrap(), g.clone());
        let t = dt_regge::pairing::enumerate::triangulation_of(&g).unwrap();
        prop_assert_eq!(canonical_code(&dt_regge::dualize(&t)), canonical_code(&g));
        prop_assert_eq!(triangulation_from_json(&triangulation_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn relabelling_q_permutes_the_catalog(
        (key, perm) in prop::sample::select(vec![(0u32, 4usize), (0, 5), (1, 2)]).prop_flat_map(|(g, n)| {
            let qs = feasible_q_vectors(g, n).unwrap();
            (prop::sample::select(qs).prop_map(move |q| (g, n, q)), permutation(n))
        })
    ) {
        let (g, n, q) = key;
        let q2: Vec<u32> = perm.iter().map(|&i| q[i]).collect();
        let a = enumerate_triangulations(g, n, &q, serial()).unwrap();
        let b = enumerate_triangulations(g, n, &q2, serial()).unwrap();
        prop_assert_eq!(a.cardinality(), b.cardinality());
        let sum = |c: &Catalog| volume_terms(c).unwrap().iter().fold(Q::zero(), |s, t| s + &t.contribution);
        prop_assert_eq!(sum(&a), sum(&b));
        let mut aa: Vec<usize> = a.entries.iter().map(|e| e.aut_order).collect();
        let mut bb: Vec<usize> = b.entries.iter().map(|e| e.aut_order).collect();
        aa.sort_unstable();
        bb.sort_unstable();
        prop_assert_eq!(aa, bb);
    }
}

fn unimodular(k: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    for &(r, s, c) in ops {
        let (r, s) = (r % k, s % k);
        if r == s {
            m.swap(r, (r + 1) % k);
            continue;
        }
        for j in 0..k {
            m[r][j] += c * m[s][j];
        }
    }
    m
}

proptest! {
    #![proptest_config(seeded(40))]

    #[test]
    fn leray_volume_is_invariant_under_rechoices(
        (key, ops, perm_seed) in prop::sample::select(vec![(0u32, 4usize), (1, 2), (1, 1), (0, 5)]).prop_flat_map(|(g, n)| {
            (
                prop::sample::select(feasible_q_vectors(g, n).unwrap()).prop_map(move |q| (g, n, q)),
                prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..6),
                any::<u64>(),
            )
        })
    ) {
        let (g, n, q) = key;
        let cat = enumerate_triangulations(g, n, &q, serial()).unwrap();
        let rhs: Vec<Q> = q.iter().map(|&x| qi(x as i64)).collect();
        for e in &cat.entries {
            let sys = incidence_matrix(&e.graph).with_rhs(rhs.clone());
            let base = leray_volume(&sys).unwrap();
            let cols = sys.cols();
            let k = base.dim.max(1);
            let mut perm: Vec<usize> = (0..cols).collect();
            let mut s = perm_seed;
            for i in (1..cols).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let opts = LerayOptions {
                kernel_transform: (base.dim > 0).then(|| unimodular(k, &ops)),
                complement: None,
                column_permutation: Some(perm),
            };
            prop_assert_eq!(&leray_volume_with(&sys, &opts).unwrap().volume, &base.volume);
            // Every invertible basic column set as the complement.
            let a = sys.to_qmatrix();
            let r = a.rank();
            for w in column_sets(cols, r).into_iter().take(12) {
                if a.select_columns(&w).rank() < r {
                    continue;
                }
                let opts = LerayOptions { complement: Some(w), ..LerayOptions::default() };
                prop_assert_eq!(&leray_volume_with(&sys, &opts).unwrap().volume, &base.volume);
            }
        }
    }
}

fn column_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[test]
fn catalog_and_report_round_trip() {
    for cat in all_catalogs(&[(0, 3), (0, 4), (1, 1), (1, 2)]) {
        let s = catalog_to_json(&cat);
        let back = catalog_from_json(&s).unwrap();
        assert_eq!(back, cat);
        assert_eq!(catalog_to_json(&back), s);
    }
    let r = RunReport::new(
        "pairing",
        serde_json::json!({"genus": 0, "q": [2, 2, 2]}),
        serde_json::json!({"lhs": "1", "rhs": "1"}),
        true,
    );
    assert_eq!(RunReport::from_json(&r.to_json()).unwrap(), r);
}
