use proptest::prelude::*;
use surfcode::lattice::{build_planar, carve_holes, logical_chain, CutKind, HoleSpec, QubitRef, Which};
use surfcode::logical::{braid, BraidSpec, ByproductRecord, Membership, OutcomeSource, StabilizerGroup};
use surfcode::pauli::{commutes, multiply, PauliString};

fn outcomes(seed: u64) -> impl FnMut((usize, usize)) -> i8 {
    move |(r, c)| if (seed >> ((r * 7 + c) % 61)) & 1 == 1 { -1 } else { 1 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Multiplying X_L by any set of stabilizers keeps it a logical with the
    /// same commutation pattern; undoing the product restores it exactly.
    #[test]
    fn deformation_keeps_logical(d in 3usize..6, seed in any::<u64>(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..8)) {
        let l = build_planar(d).unwrap();
        let g = StabilizerGroup::from_layout(&l, outcomes(seed)).unwrap();
        let xl = logical_chain(&l, Which::XL, QubitRef::Planar).unwrap();
        let zl = logical_chain(&l, Which::ZL, QubitRef::Planar).unwrap();
        let mut subset: Vec<usize> = picks.iter().map(|i| i.index(g.len())).collect();
        subset.sort_unstable();
        subset.dedup();
        let (x2, sign) = g.deform(&xl, &subset).unwrap();
        prop_assert!(g.generators().iter().all(|s| commutes(s, &x2)));
        prop_assert!(!commutes(&x2, &zl));
        prop_assert_eq!(g.in_group(&x2).unwrap(), Membership::NonMember);
        let (back, s2) = g.deform(&x2, &subset).unwrap();
        prop_assert!(back.same_support_ops(&xl));
        prop_assert_eq!(sign * s2, 1);
        let expected: i8 = subset.iter().map(|&i| g.signs()[i]).product();
        prop_assert_eq!(sign, expected);
    }

    /// Hole-pair logicals commute with every stabilizer and anti-commute
    /// with each other.
    #[test]
    fn hole_pair_logicals_anticommute(
        cut in prop_oneof![Just(CutKind::ZCut), Just(CutKind::XCut)],
        r1 in 1usize..4, c1 in 1usize..6, r2 in 1usize..3, c2 in 1usize..6,
    ) {
        let l = build_planar(7).unwrap();
        let at = |r: usize, c: usize| match cut {
            CutKind::ZCut => (2 * r, 2 * c + 1),
            CutKind::XCut => (2 * r + 1, 2 * c),
        };
        let (a, b) = (at(r1, c1), at(r2 + 3, c2));
        let l = carve_holes(&l, &[HoleSpec::single(cut, a), HoleSpec::single(cut, b)]).unwrap();
        let x = logical_chain(&l, Which::XL, QubitRef::Pair(0, 1)).unwrap();
        let z = logical_chain(&l, Which::ZL, QubitRef::Pair(0, 1)).unwrap();
        prop_assert!(!commutes(&x, &z));
        for s in l.stabilizers() {
            let op = l.stabilizer_operator(&s);
            prop_assert!(commutes(&op, &x) && commutes(&op, &z));
        }
    }

    #[test]
    fn byproduct_composition_is_associative(bits in any::<[bool; 6]>()) {
        let a = ByproductRecord::new(bits[0], bits[1]);
        let b = ByproductRecord::new(bits[2], bits[3]);
        let c = ByproductRecord::new(bits[4], bits[5]);
        prop_assert_eq!((a ^ b) ^ c, a ^ (b ^ c));
        prop_assert_eq!(a ^ b, b ^ a);
        prop_assert!((a ^ a).is_identity());
        prop_assert_eq!(a.through_hadamard().through_hadamard(), a);
        prop_assert_eq!((a ^ b).through_hadamard(), a.through_hadamard() ^ b.through_hadamard());
    }

    #[test]
    fn pauli_product_sign_is_consistent(xs in proptest::collection::vec(0usize..6, 0..4), zs in proptest::collection::vec(0usize..6, 0..4)) {
        let x = PauliString::xs(xs.iter().copied().collect::<std::collections::BTreeSet<_>>());
        let z = PauliString::zs(zs.iter().copied().collect::<std::collections::BTreeSet<_>>());
        let xz = multiply(&x, &z);
        let zx = multiply(&z, &x);
        let overlap = x.anticommuting_overlap(&z);
        prop_assert_eq!(xz.sign() == zx.sign(), overlap.is_multiple_of(2));
    }
}

const CNOT: [[bool; 4]; 4] = [
    [true, true, false, false],
    [false, true, false, false],
    [false, false, true, false],
    [false, false, true, true],
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Braiding a Z-cut hole around an X-cut hole maps
    /// `X1 -> X1 X2`, `X2 -> X2`, `Z1 -> Z1`, `Z2 -> Z1 Z2` for any outcomes.
    #[test]
    fn braid_is_cnot_for_any_outcomes(seed in any::<u64>(), repeat in 1usize..3) {
        let base = build_planar(12).unwrap();
        let holes = [
            HoleSpec::single(CutKind::ZCut, (8, 7)),
            HoleSpec::single(CutKind::ZCut, (2, 7)),
            HoleSpec::single(CutKind::XCut, (11, 10)),
            HoleSpec::single(CutKind::XCut, (11, 18)),
        ];
        let l = carve_holes(&base, &holes).unwrap();
        let path = vec![
            (8, 7), (8, 9), (8, 11), (8, 13), (10, 13), (12, 13), (14, 13),
            (14, 11), (14, 9), (14, 7), (12, 7), (10, 7), (8, 7),
        ];
        let spec = BraidSpec { moving: QubitRef::Pair(0, 1), other: QubitRef::Pair(2, 3), path, split: 6, repeat, min_distance: 3 };
        let out = braid(&l, &spec, &mut OutcomeSource::random(seed)).unwrap();
        if repeat == 1 {
            prop_assert_eq!(out.images, CNOT);
        } else {
            for (k, row) in out.images.iter().enumerate() {
                for (j, &bit) in row.iter().enumerate() {
                    prop_assert_eq!(bit, k == j);
                }
            }
        }
    }
}
