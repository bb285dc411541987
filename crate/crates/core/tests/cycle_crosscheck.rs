use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfcode::cycle::{run_circuit_with_faults, tableau_round, RoundCircuit};
use surfcode::lattice::build_planar;
use surfcode::StabilizerTableau;

/// Frame-simulated outcomes equal tableau outcomes XOR the quiescent
/// reference, for every placement of up to two faults in a d=3 run.
#[test]
fn frame_matches_tableau_with_two_faults() {
    let layout = build_planar(3).unwrap();
    let c = RoundCircuit::new(&layout);
    let rounds = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let mut base = StabilizerTableau::new(c.n_sites);
    let mut reference = vec![false; c.num_measures()];
    tableau_round(&c, &mut base, &[], &mut reference).unwrap();

    for trial in 0..400 {
        let count = 1 + trial % 2;
        let mut faults = vec![Vec::new(); rounds];
        for _ in 0..count {
            let t = rng.gen_range(0..rounds);
            let p = rng.gen_range(0..c.points.len()) as u32;
            let o = rng.gen_range(0..c.points[p as usize].kind.options());
            faults[t].push((p, o));
        }
        for f in &mut faults {
            f.sort_unstable();
            f.dedup_by_key(|x| x.0);
        }

        let frame = run_circuit_with_faults(&c, &faults);

        let mut tab = base.clone();
        for (t, f) in faults.iter().map(Vec::as_slice).chain(std::iter::once(&[][..])).enumerate() {
            let mut row = vec![false; c.num_measures()];
            tableau_round(&c, &mut tab, f, &mut row).unwrap();
            let rel: Vec<bool> = row.iter().zip(&reference).map(|(a, b)| a ^ b).collect();
            assert_eq!(rel, frame.record.outcomes[t], "trial {trial} round {t} faults {faults:?}");
        }
    }
}
