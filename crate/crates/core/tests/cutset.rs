use num_rational::Rational64;
use proptest::prelude::*;
use relaynet::cutset::*;
use relaynet::detnet::{DetNetwork, Direction};

fn fig2() -> DetNetwork {
    DetNetwork::from_flat(&[3, 2, 2, 1], &[2, 3, 1, 2]).unwrap()
}

fn ints(r: &[u64]) -> RateTuple {
    RateTuple::from_integers(r)
}

fn cut(terms: &[(usize, Direction)]) -> Cut {
    Cut::new(
        terms
            .iter()
            .map(|&(pair, direction)| CutTerm { pair, direction })
            .collect(),
    )
    .unwrap()
}

/// The eight two-pair constraints written out by hand.
fn two_pair_member(up: [i64; 4], down: [i64; 4], r: [i64; 4]) -> bool {
    let [a1, b1, a2, b2] = up;
    let [ra1, rb1, ra2, rb2] = down;
    let [x1, y1, x2, y2] = r;
    x1 <= a1.min(rb1)
        && y1 <= b1.min(ra1)
        && x2 <= a2.min(rb2)
        && y2 <= b2.min(ra2)
        && x1 + x2 <= a1.max(a2).min(rb1.max(rb2))
        && y1 + y2 <= b1.max(b2).min(ra1.max(ra2))
        && x1 + y2 <= a1.max(b2).min(rb1.max(ra2))
        && y1 + x2 <= b1.max(a2).min(ra1.max(rb2))
}

/// Membership by walking every assignment of {outside, A->B, B->A} to pairs.
fn membership_oracle(net: &DetNetwork, rates: &[Rational64], listen: Option<Rational64>) -> bool {
    let m = net.num_pairs();
    let (fu, fd) = match listen {
        None => (Rational64::from_integer(1), Rational64::from_integer(1)),
        Some(d) => (d, Rational64::from_integer(1) - d),
    };
    let total = 3usize.pow(m as u32);
    (1..total).all(|code| {
        let (mut load, mut up, mut down) = (Rational64::from_integer(0), 0i64, 0i64);
        let mut c = code;
        for (i, g) in net.pairs().iter().enumerate() {
            match c % 3 {
                1 => {
                    load += rates[2 * i];
                    up = up.max(g.a_up as i64);
                    down = down.max(g.b_down as i64);
                }
                2 => {
                    load += rates[2 * i + 1];
                    up = up.max(g.b_up as i64);
                    down = down.max(g.a_down as i64);
                }
                _ => {}
            }
            c /= 3;
        }
        load <= (fu * up).min(fd * down)
    })
}

#[test]
fn cut_counts() {
    assert_eq!(enumerate_cuts(1).unwrap().len(), 2);
    assert_eq!(enumerate_cuts(2).unwrap().len(), 8);
    assert_eq!(enumerate_cuts(3).unwrap().len(), 26);
    let one = enumerate_cuts(1).unwrap();
    assert_eq!(one[0], cut(&[(0, Direction::AtoB)]));
    assert_eq!(one[1], cut(&[(0, Direction::BtoA)]));
    for m in 1..6 {
        let cuts = enumerate_cuts(m).unwrap();
        let unique: std::collections::HashSet<_> = cuts.iter().collect();
        assert_eq!(unique.len(), cuts.len());
        assert_eq!(cuts.len(), 3usize.pow(m as u32) - 1);
    }
}

#[test]
fn bounds_of_the_two_pair_example() {
    let net = fig2();
    let full = DuplexMode::Full;
    assert_eq!(
        det_cut_bound(&net, &cut(&[(0, Direction::AtoB)]), full),
        3.into()
    );
    assert_eq!(
        det_cut_bound(
            &net,
            &cut(&[(0, Direction::AtoB), (1, Direction::AtoB)]),
            full
        ),
        3.into()
    );
    let zero = DetNetwork::from_flat(&[0; 6], &[0; 6]).unwrap();
    for c in enumerate_cuts(3).unwrap() {
        assert_eq!(det_cut_bound(&zero, &c, full), 0.into());
    }
}

#[test]
fn half_duplex_bound_scales_each_side() {
    let net = fig2();
    let c = cut(&[(0, Direction::AtoB)]);
    let mode = DuplexMode::half(Rational64::new(1, 3)).unwrap();
    // min(3/3, 3*2/3)
    assert_eq!(det_cut_bound(&net, &c, mode), 1.into());
}

#[test]
fn membership_examples() {
    let net = fig2();
    let m = in_det_cutset(&net, &ints(&[2, 1, 1, 1]), DuplexMode::Full).unwrap();
    assert!(m.is_member());

    let m = in_det_cutset(&net, &ints(&[4, 0, 0, 0]), DuplexMode::Full).unwrap();
    assert!(!m.is_member());
    assert!(m
        .violated
        .iter()
        .any(|v| v.cut == cut(&[(0, Direction::AtoB)]) && v.bound == 3.into()));
    // Every violated cut is reported, not just the first.
    assert!(m.violated.len() > 1);

    let m = in_det_cutset(&net, &ints(&[0, 0, 0, 0]), DuplexMode::Full).unwrap();
    assert!(m.is_member() && m.tight.is_empty());

    assert!(matches!(
        in_det_cutset(&net, &ints(&[1, 1]), DuplexMode::Full),
        Err(CutsetError::Arity {
            expected: 4,
            found: 2
        })
    ));
}

#[test]
fn integral_region_examples() {
    let unit = DetNetwork::from_flat(&[1, 1], &[1, 1]).unwrap();
    let region = enumerate_integral_region(&unit, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
    let expected: Vec<RateTuple> = [[0, 0], [0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|r| ints(r))
        .collect();
    assert_eq!(region, expected);

    let zero = DetNetwork::from_flat(&[0, 0, 0, 0], &[0, 0, 0, 0]).unwrap();
    let region = enumerate_integral_region(&zero, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
    assert_eq!(region, vec![ints(&[0, 0, 0, 0])]);

    let net = fig2();
    let region = enumerate_integral_region(&net, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
    assert!(region.contains(&ints(&[2, 1, 1, 1])));
    // B2 reaches the relay on one level only, so (3,1,2,2) needs another network.
    assert!(!region.contains(&ints(&[3, 1, 2, 2])));
    assert!(region.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn integral_region_matches_hand_written_constraints() {
    let net = fig2();
    let region = enumerate_integral_region(&net, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
    let mut count = 0;
    for x1 in 0..5 {
        for y1 in 0..5 {
            for x2 in 0..5 {
                for y2 in 0..5 {
                    if two_pair_member([3, 2, 2, 1], [2, 3, 1, 2], [x1, y1, x2, y2]) {
                        count += 1;
                        assert!(
                            region.contains(&ints(&[x1 as u64, y1 as u64, x2 as u64, y2 as u64]))
                        );
                    }
                }
            }
        }
    }
    assert_eq!(region.len(), count);
}

fn small_net(max_pairs: usize, max_gain: u32) -> impl Strategy<Value = DetNetwork> {
    (1..=max_pairs).prop_flat_map(move |m| {
        (
            prop::collection::vec(0..=max_gain, 2 * m),
            prop::collection::vec(0..=max_gain, 2 * m),
        )
            .prop_map(|(u, d)| DetNetwork::from_flat(&u, &d).unwrap())
    })
}

fn net_and_rates() -> impl Strategy<Value = (DetNetwork, Vec<Rational64>)> {
    small_net(3, 6).prop_flat_map(|net| {
        let n = net.num_nodes();
        let rate = (0i64..16, 1i64..4).prop_map(|(p, q)| Rational64::new(p, q));
        (Just(net), prop::collection::vec(rate, n))
    })
}

proptest! {
    #[test]
    fn two_pair_membership_matches_hand_written_constraints(
        up in prop::array::uniform4(0i64..7),
        down in prop::array::uniform4(0i64..7),
        r in prop::array::uniform4(0i64..8),
    ) {
        let net = DetNetwork::from_flat(&up.map(|x| x as u32), &down.map(|x| x as u32)).unwrap();
        let got = in_det_cutset(&net, &ints(&r.map(|x| x as u64)), DuplexMode::Full).unwrap();
        prop_assert_eq!(got.is_member(), two_pair_member(up, down, r));
    }

    #[test]
    fn membership_matches_oracle((net, rates) in net_and_rates(), listen in prop::option::of(1i64..4)) {
        let listen = listen.map(|p| Rational64::new(p, 4));
        let mode = listen.map_or(DuplexMode::Full, DuplexMode::Half);
        let tuple = RateTuple::new(rates.clone()).unwrap();
        let got = in_det_cutset(&net, &tuple, mode).unwrap();
        prop_assert_eq!(got.is_member(), membership_oracle(&net, &rates, listen));
        for v in &got.violated {
            prop_assert!(v.load > v.bound);
        }
    }

    #[test]
    fn raising_a_gain_never_shrinks_a_bound(net in small_net(3, 6), which in 0usize..12, up_side in any::<bool>()) {
        let n = net.num_nodes();
        let which = which % n;
        let mut up = net.uplink_gains();
        let mut down = net.downlink_gains();
        if up_side { up[which] += 1 } else { down[which] += 1 }
        let raised = DetNetwork::from_flat(&up, &down).unwrap();
        for c in enumerate_cuts(net.num_pairs()).unwrap() {
            prop_assert!(det_cut_bound(&raised, &c, DuplexMode::Full) >= det_cut_bound(&net, &c, DuplexMode::Full));
        }
    }

    #[test]
    fn region_is_downward_closed(
        (net, member) in small_net(3, 5).prop_flat_map(|net| {
            let region = enumerate_integral_region(&net, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
            (Just(net), prop::sample::select(region))
        }),
        which in 0usize..6,
        keep in (0i64..4, 1i64..4),
    ) {
        let mut lower = member.as_slice().to_vec();
        let i = which % lower.len();
        let (p, q) = keep;
        lower[i] *= Rational64::new(p.min(q), q);
        prop_assert!(in_det_cutset(&net, &RateTuple::new(lower).unwrap(), DuplexMode::Full).unwrap().is_member());
    }

    #[test]
    fn region_scales_with_time_expansion((net, rates) in net_and_rates(), q in 1u32..5) {
        let tuple = RateTuple::new(rates).unwrap();
        let expanded = net.map_gains(|n| n * q, |n| n * q);
        prop_assert_eq!(
            in_det_cutset(&net, &tuple, DuplexMode::Full).unwrap().is_member(),
            in_det_cutset(&expanded, &tuple.scale(q as i64), DuplexMode::Full).unwrap().is_member()
        );
    }
}
