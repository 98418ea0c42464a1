use proptest::prelude::*;
use wsep::ground::{all_subsets, k_subsets};
use wsep::{cyclic_interval, gale_leq, CyclicOrder, Subset, Transform};

/// Literal reading of the alternation definition: no cyclically ordered
/// `a, b, c, d` with `a, c` in one difference and `b, d` in the other.
fn chord_oracle(s: Subset, t: Subset) -> bool {
    let n = s.n();
    let a: Vec<usize> = (s - t).elements().collect();
    let b: Vec<usize> = (t - s).elements().collect();
    let ordered = |w: usize, x: usize, y: usize, z: usize| {
        let r = |v: usize| (v + n - w) % n;
        r(x) < r(y) && r(y) < r(z)
    };
    for &w in &a {
        for &y in &a {
            for &x in &b {
                for &z in &b {
                    if w != y && x != z && ordered(w, x, y, z) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Surrounds straight from the definition: `self \ other = L ⊔ R` with
/// `L < other \ self < R`.
fn surrounds_oracle(s: Subset, t: Subset) -> bool {
    let outer: Vec<usize> = (s - t).elements().collect();
    let inner: Vec<usize> = (t - s).elements().collect();
    (0..=outer.len()).any(|cut| {
        let (left, right) = outer.split_at(cut);
        left.iter().all(|&l| inner.iter().all(|&x| l < x)) && right.iter().all(|&r| inner.iter().all(|&x| x < r))
    })
}

fn ws_oracle(s: Subset, t: Subset) -> bool {
    (s.len() <= t.len() && surrounds_oracle(s, t)) || (t.len() <= s.len() && surrounds_oracle(t, s))
}

fn set(elems: &[usize], n: usize) -> Subset {
    Subset::from_elements(elems.iter().copied(), n).unwrap()
}

#[test]
fn worked_examples() {
    let (i, j) = (set(&[1, 2, 4], 6), set(&[3, 5, 6], 6));
    assert!(!i.is_weakly_separated(j).unwrap());
    assert!(!i.is_chord_separated(j).unwrap());
    let (a, b) = (set(&[1, 3], 3), set(&[2], 3));
    assert!(a.is_chord_separated(b).unwrap());
    assert!(!a.is_weakly_separated(b).unwrap());
}

#[test]
fn weak_equals_chord_on_equal_sizes() {
    for n in 1..=8 {
        for k in 0..=n {
            let sets = k_subsets(n, k).unwrap();
            for &s in &sets {
                for &t in &sets {
                    let ws = s.is_weakly_separated(t).unwrap();
                    assert_eq!(ws, s.is_chord_separated(t).unwrap(), "{s:?} {t:?}");
                    assert_eq!(ws, chord_oracle(s, t), "{s:?} {t:?}");
                }
            }
        }
    }
}

#[test]
fn predicates_match_definitions() {
    for n in 1..=6 {
        let sets = all_subsets(n).unwrap();
        for &s in &sets {
            for &t in &sets {
                assert_eq!(s.surrounds(t).unwrap(), surrounds_oracle(s, t));
                assert_eq!(s.is_weakly_separated(t).unwrap(), ws_oracle(s, t));
                assert_eq!(s.is_chord_separated(t).unwrap(), chord_oracle(s, t));
                if s.is_weakly_separated(t).unwrap() {
                    assert!(s.is_chord_separated(t).unwrap());
                }
            }
        }
    }
}

#[test]
fn intervals_are_universal() {
    for n in 2..=8 {
        for k in 0..=n {
            let sets = k_subsets(n, k).unwrap();
            for &s in sets.iter().filter(|s| s.is_cyclic_interval()) {
                assert!(sets.iter().all(|&t| s.is_weakly_separated(t).unwrap()));
            }
        }
        let intervals = all_subsets(n).unwrap().into_iter().filter(|s| s.is_cyclic_interval()).count();
        assert_eq!(intervals, n * (n - 1) + 2);
    }
}

#[test]
fn mismatched_grounds_error() {
    let (a, b) = (set(&[1], 4), set(&[1], 5));
    assert!(a.is_weakly_separated(b).is_err());
    assert!(a.surrounds(b).is_err());
    assert!(Subset::parse("1,2,7", 6).is_err());
    assert!(Subset::parse("1,1", 6).is_err());
    assert_eq!(cyclic_interval(5, 2, 6).unwrap(), set(&[5, 6, 1, 2], 6));
}

#[test]
fn gale_order_is_partial_on_k_subsets() {
    for n in 2..=6 {
        for k in 1..n {
            let sets = k_subsets(n, k).unwrap();
            for base in 1..=n {
                let order = CyclicOrder::new(base);
                let leq = |a: Subset, b: Subset| gale_leq(a, b, order).unwrap();
                for &a in &sets {
                    assert!(leq(a, a));
                    for &b in &sets {
                        if a != b && leq(a, b) {
                            assert!(!leq(b, a));
                        }
                        for &c in &sets {
                            if leq(a, b) && leq(b, c) {
                                assert!(leq(a, c));
                            }
                        }
                    }
                }
                let least = cyclic_interval(base, (base + k - 2) % n + 1, n).unwrap();
                assert!(sets.iter().all(|&b| leq(least, b)));
            }
        }
    }
}

fn subset_pair() -> impl Strategy<Value = (Subset, Subset)> {
    (1usize..=16).prop_flat_map(|n| {
        let max = (1u64 << n) - 1;
        (0..=max, 0..=max).prop_map(move |(a, b)| (Subset::new(a, n).unwrap(), Subset::new(b, n).unwrap()))
    })
}

proptest! {
    #[test]
    fn separation_is_symmetric((s, t) in subset_pair()) {
        prop_assert_eq!(s.is_weakly_separated(t).unwrap(), t.is_weakly_separated(s).unwrap());
        prop_assert_eq!(s.is_chord_separated(t).unwrap(), t.is_chord_separated(s).unwrap());
        prop_assert!(s.is_weakly_separated(s).unwrap());
    }

    // Weak separation of sets of different sizes depends on the linear
    // order, so only chord separation is rotation invariant in general.
    #[test]
    fn separation_is_rotation_and_complement_invariant((s, t) in subset_pair(), r in -20i64..20) {
        let ws = s.is_weakly_separated(t).unwrap();
        let cs = s.is_chord_separated(t).unwrap();
        for kind in [Transform::Rotate(r), Transform::Complement] {
            let (a, b) = (s.transform(kind), t.transform(kind));
            if s.len() == t.len() || kind == Transform::Complement {
                prop_assert_eq!(a.is_weakly_separated(b).unwrap(), ws);
            }
            prop_assert_eq!(a.is_chord_separated(b).unwrap(), cs);
        }
    }

    #[test]
    fn weak_implies_chord((s, t) in subset_pair()) {
        if s.is_weakly_separated(t).unwrap() {
            prop_assert!(s.is_chord_separated(t).unwrap());
        }
        if s.len() == t.len() {
            prop_assert_eq!(s.is_weakly_separated(t).unwrap(), s.is_chord_separated(t).unwrap());
        }
    }

    #[test]
    fn parse_round_trip((s, _t) in subset_pair()) {
        prop_assert_eq!(Subset::parse(&s.to_string(), s.n()).unwrap(), s);
        prop_assert_eq!(s.rotate(s.n() as i64), s);
        prop_assert_eq!(s.complement().complement(), s);
    }
}
