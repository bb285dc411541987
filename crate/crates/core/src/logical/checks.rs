//! Logical-operation results as report checks, with their transcripts.

use super::frame::OutcomeSource;
use super::hadamard::hadamard_patch;
use super::moves::{braid, BraidSpec};
use super::scenarios::init_measure_scenarios;
use crate::error::Result;
use crate::gate_verify::{Check, Report};
use crate::lattice::{build_planar, carve_holes, ArrayLayout, Coord, CutKind, HoleSpec, QubitRef, Role};

/// Images of `[X1, X2, Z1, Z2]` under a braid of a Z-cut around an X-cut
/// qubit.
pub const CNOT_IMAGES: [[bool; 4]; 4] = [
    [true, true, false, false],
    [false, true, false, false],
    [false, false, true, false],
    [false, false, true, true],
];

const IDENTITY: [[bool; 4]; 4] = [
    [true, false, false, false],
    [false, true, false, false],
    [false, false, true, false],
    [false, false, false, true],
];

/// A Z-cut pair whose first hole loops once around one hole of an X-cut
/// pair, on a distance-12 array.
pub fn standard_braid(repeat: usize) -> Result<(ArrayLayout, BraidSpec)> {
    let base = build_planar(12)?;
    let holes = [
        HoleSpec::single(CutKind::ZCut, (8, 7)),
        HoleSpec::single(CutKind::ZCut, (2, 7)),
        HoleSpec::single(CutKind::XCut, (11, 10)),
        HoleSpec::single(CutKind::XCut, (11, 18)),
    ];
    let layout = carve_holes(&base, &holes)?;
    let path: Vec<Coord> = vec![
        (8, 7), (8, 9), (8, 11), (8, 13), (10, 13), (12, 13), (14, 13),
        (14, 11), (14, 9), (14, 7), (12, 7), (10, 7), (8, 7),
    ];
    let spec = BraidSpec { moving: QubitRef::Pair(0, 1), other: QubitRef::Pair(2, 3), path, split: 6, repeat, min_distance: 3 };
    Ok((layout, spec))
}

/// Single and double braid over several outcome draws; returns the
/// transcript of the first single braid.
pub fn braid_checks(seed: u64) -> Result<(Report, Vec<String>)> {
    let mut r = Report::default();
    let mut transcript = Vec::new();
    for (repeat, expected, name) in [(1, CNOT_IMAGES, "braid.cnot_images"), (2, IDENTITY, "braid.double_is_identity")] {
        let (layout, spec) = standard_braid(repeat)?;
        let mut ok = true;
        for k in 0..4 {
            let out = braid(&layout, &spec, &mut OutcomeSource::random(seed + k))?;
            ok &= out.images == expected;
            if repeat == 1 && k == 0 {
                transcript = out.transcript;
            }
        }
        r.push(Check::holds(name, ok));
    }
    Ok((r, transcript))
}

/// Hadamard patch at d = 3 and 5; returns the d = 3 script.
pub fn hadamard_checks(seed: u64) -> Result<(Report, Vec<String>)> {
    let mut r = Report::default();
    let mut script = Vec::new();
    for d in [3, 5] {
        let out = hadamard_patch(d, &mut OutcomeSource::random(seed + d as u64))?;
        r.push(Check::holds(format!("hadamard.d{d}.swaps_logicals"), out.x_image == [false, true] && out.z_image == [true, false]));
        r.push(Check::holds(format!("hadamard.d{d}.keeps_distance"), out.distances.iter().all(|&x| x >= d)));
        if d == 3 {
            script = out.script;
        }
    }
    Ok((r, script))
}

/// Hole initialization and measurement scenarios with their transcripts.
pub fn scenario_checks(seed: u64) -> Result<(Report, Vec<(String, Vec<String>)>)> {
    let mut r = Report::default();
    let mut scripts = Vec::new();
    for s in init_measure_scenarios(seed)? {
        r.push(Check::holds(format!("scenario.{}", s.name.replace(' ', "_")), s.ok));
        scripts.push((s.name.to_string(), s.transcript));
    }
    Ok((r, scripts))
}

/// Site counts of the distance-5 planar array.
pub fn lattice_checks() -> Result<Report> {
    let l = build_planar(5)?;
    let mut r = Report::default();
    r.push(Check::new("lattice.d5.data", l.count(Role::Data) as f64, 41.0, 0.0));
    r.push(Check::new("lattice.d5.measure", (l.count(Role::MeasureX) + l.count(Role::MeasureZ)) as f64, 40.0, 0.0));
    r.push(Check::new("lattice.d5.logical_dof", l.logical_dof() as f64, 1.0, 0.0));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_logical_checks_pass() {
        let (b, t) = braid_checks(1).unwrap();
        let (h, s) = hadamard_checks(1).unwrap();
        let (sc, scripts) = scenario_checks(1).unwrap();
        for r in [b, h, sc, lattice_checks().unwrap()] {
            assert!(r.all_pass(), "{r}");
        }
        assert!(!t.is_empty() && !s.is_empty());
        assert_eq!(scripts.len(), 6);
    }
}
