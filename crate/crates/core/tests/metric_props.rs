use std::sync::OnceLock;

use conjlen::groups::{Element, GroupConfig};
use conjlen::linalg::{l1_norm, Int, Rat};
use conjlen::metrics::distortion::{distortion_from_ball, kernel_coordinates};
use conjlen::metrics::{bfs_ball, bs_length_bounds, dl_distance, Ball, HorocyclicPoint, SubgroupSelector, DEFAULT_CAP};
use num_traits::ToPrimitive;
use proptest::prelude::*;

struct Fixture {
    cfg: GroupConfig,
    ball: Ball,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            (GroupConfig::bs(2).unwrap(), 10),
            (GroupConfig::bs(3).unwrap(), 8),
            (GroupConfig::gamma_m(&[vec![3, 1], vec![1, 2]]).unwrap(), 6),
            (GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap(), 7),
        ]
        .into_iter()
        .map(|(cfg, r)| {
            let ball = bfs_ball(&cfg, r, DEFAULT_CAP).unwrap();
            Fixture { cfg, ball }
        })
        .collect()
    })
}

fn rational(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn triangle_inequality(f in 0usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let Fixture { cfg, ball } = &fixtures()[f];
        let (g, lg) = ball.get_index(i.index(ball.len())).unwrap();
        let (h, lh) = ball.get_index(j.index(ball.len())).unwrap();
        let gh = cfg.mul(g, h);
        match ball.length(&gh) {
            Some(l) => prop_assert!(l <= lg + lh),
            None => prop_assert!(lg + lh > ball.radius()),
        }
        prop_assert_eq!(ball.length(&cfg.inv(g)), Some(lg));
    }

    #[test]
    fn stored_geodesics_have_stored_length(f in 0usize..4, i in any::<prop::sample::Index>()) {
        let Fixture { cfg, ball } = &fixtures()[f];
        let (g, len) = ball.get_index(i.index(ball.len())).unwrap();
        let word = ball.geodesic(cfg, g).unwrap();
        prop_assert_eq!(word.len(), len);
        prop_assert_eq!(&cfg.eval_word(&word), g);
    }

    #[test]
    fn horocyclic_distance_is_symmetric(
        c in 0usize..2,
        coords in prop::collection::vec((-40i64..=40, 1i64..=9), 6),
    ) {
        let cfg = if c == 0 { GroupConfig::bs(2).unwrap() } else { GroupConfig::gamma_m(&[vec![3, 1], vec![1, 2]]).unwrap() };
        let d = cfg.dim();
        let point = |o: usize| HorocyclicPoint {
            vector: (0..d).map(|i| rational(coords[o + i].0, coords[o + i].1)).collect(),
            t: rational(coords[o + 2].0 / 8, 1),
        };
        let (g, h) = (point(0), point(3));
        let a = dl_distance(&cfg, &g, &h).unwrap();
        let b = dl_distance(&cfg, &h, &g).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
        prop_assert!(a >= 0.0);
        prop_assert!(dl_distance(&cfg, &g, &g).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn balls_are_deterministic() {
    for Fixture { cfg, ball } in fixtures() {
        let again = bfs_ball(cfg, ball.radius(), DEFAULT_CAP).unwrap();
        assert!(ball.iter().eq(again.iter()));
        let mut csv = Vec::new();
        ball.write_csv(&mut csv).unwrap();
        let back = Ball::read_csv(cfg, csv.as_slice()).unwrap();
        assert!(ball.iter().eq(back.iter()));
    }
}

#[test]
fn baumslag_solitar_bounds_bracket_power_lengths() {
    for (f, m) in [(0, 2u64), (1, 3)] {
        let Fixture { cfg, ball } = &fixtures()[f];
        let mut seen = 0;
        for r in (-4096i64..=4096).filter(|&r| r != 0) {
            let Some(len) = ball.length(&cfg.generator_power(0, r)) else { continue };
            let (lo, hi) = bs_length_bounds(&Int::from(r), m).unwrap();
            assert!(lo <= len as f64 && len as f64 <= hi, "m={m} r={r} len={len} bounds=({lo},{hi})");
            seen += 1;
        }
        assert!(seen >= 20, "only {seen} powers in the ball");
    }
}

#[test]
fn distortion_matches_direct_filtering() {
    for Fixture { cfg, ball } in fixtures() {
        for selector in [SubgroupSelector::KernelIntrinsic, SubgroupSelector::KernelAmbient, SubgroupSelector::Whole] {
            let norm = |g: &Element, len: usize| -> Option<u64> {
                match selector {
                    SubgroupSelector::Whole => Some(len as u64),
                    SubgroupSelector::KernelAmbient => kernel_coordinates(g).map(|_| len as u64),
                    SubgroupSelector::KernelIntrinsic => kernel_coordinates(g).map(|w| l1_norm(w).to_u64().unwrap()),
                }
            };
            let table = distortion_from_ball(cfg, ball, selector);
            for row in &table.rows {
                let delta = ball.iter().filter(|(_, l)| *l <= row.n).filter_map(|(g, l)| norm(g, l)).max().unwrap_or(0);
                assert_eq!(row.delta, Some(delta), "{selector:?} n={}", row.n);
                if let Some(ld) = row.ldist {
                    let direct = ball.iter().filter(|(_, l)| *l >= row.n).filter_map(|(g, l)| norm(g, l)).min();
                    assert_eq!(Some(ld), direct, "{selector:?} n={}", row.n);
                }
            }
            for row in &table.rows {
                let Some(inv) = row.invdist else { continue };
                let smallest = table.rows.iter().find(|r| r.ldist.is_some_and(|l| l >= row.n as u64)).map(|r| r.n as u64);
                assert_eq!(Some(inv), smallest, "{selector:?} n={}", row.n);
            }
        }
    }
}
