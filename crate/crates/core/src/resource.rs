//! Closed-form footprint and run-time model of a factoring machine built
//! from two-stage |A> distillation factories plus computational qubits.

use std::fmt;

use crate::error::{Error, Result};

/// Code-cycle steps per Toffoli: three sequential T layers of one
/// measurement each, times 40 N^3 Toffolis.
pub const TIME_FACTOR: f64 = 120.0;
/// T gates per Toffoli times Toffolis per N^3.
pub const A_STATES_PER_N3: f64 = 280.0;
/// Output error of one 15-to-1 round at leading order: `35 p^3`.
pub const DISTILL_COEFF: f64 = 35.0;
/// Logical qubits in the second distillation stage.
pub const STAGE2_LOGICAL: usize = 16;
/// Logical qubits in the first stage: 15 copies of the 16-qubit circuit.
pub const STAGE1_LOGICAL: usize = 240;
/// `16 x 2 x 3 x 1.25`: per-distance error multiplier of stage 2.
pub const STAGE2_MULTIPLIER: f64 = 120.0;
/// `15 x 16 x 2 x 3 x 1.25`: per-distance error multiplier of stage 1.
pub const STAGE1_MULTIPLIER: f64 = 1800.0;
/// Hole-spacing and margin factors of the logical-qubit footprint.
pub const FOOTPRINT_FACTOR: f64 = 2.5 * 1.25;
/// Log-midpoint of the 1e-14 to 1e-15 target band for a distilled state.
pub const TARGET_BAND_MID: f64 = 3.162_277_660_168_379_5e-15;

const MAX_DISTANCE: usize = 1000;

/// Per-cycle logical error model `prefactor (p / p_th)^{d_e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalRateModel {
    pub prefactor: f64,
    pub p_th: f64,
    /// `d_e = d / 2` without rounding when true; otherwise `(d + 1) / 2`
    /// for odd `d` and `d / 2` for even `d`.
    pub half_distance: bool,
}

impl LogicalRateModel {
    /// Rates matching the per-distance figures quoted with the factoring
    /// estimate (`3e-19` at `d = 34`, `1e-10` at `d = 17`, `p = 1e-3`).
    pub fn factoring() -> Self {
        LogicalRateModel { prefactor: 0.03, p_th: 0.01, half_distance: true }
    }

    /// The fitted power law of the threshold plots.
    pub fn power_law() -> Self {
        LogicalRateModel { prefactor: crate::analysis::PREFACTOR, p_th: crate::analysis::P_TH, half_distance: false }
    }

    pub fn error_dimension(&self, d: usize) -> f64 {
        if self.half_distance || d.is_multiple_of(2) {
            d as f64 / 2.0
        } else {
            d.div_ceil(2) as f64
        }
    }

    pub fn rate(&self, p: f64, d: usize) -> f64 {
        self.prefactor * (p / self.p_th).powf(self.error_dimension(d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactoringParams {
    /// Key size in bits.
    pub n_bits: u64,
    /// Measurement time in seconds.
    pub t_meas: f64,
    /// Code-cycle time in seconds.
    pub cycle_time: f64,
    /// Per-step physical error rate.
    pub p: f64,
    /// Injected-state error rate.
    pub p_inject: f64,
    pub model: LogicalRateModel,
}

impl FactoringParams {
    /// 2000-bit key, 100 ns measurements, 200 ns cycles, `p = 1e-3`,
    /// `p_I = 0.005`.
    pub fn reference() -> Self {
        FactoringParams { n_bits: 2000, t_meas: 100e-9, cycle_time: 200e-9, p: 1e-3, p_inject: 0.005, model: LogicalRateModel::factoring() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64, name: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {x}")))
            }
        };
        if self.n_bits == 0 {
            return Err(Error::InvalidArgument("key size must be positive".into()));
        }
        positive(self.t_meas, "measurement time")?;
        positive(self.cycle_time, "cycle time")?;
        positive(self.p, "error rate")?;
        positive(self.p_inject, "injection error rate")?;
        positive(self.model.prefactor, "rate prefactor")?;
        positive(self.model.p_th, "threshold")?;
        if self.cycle_time < self.t_meas {
            return Err(Error::InvalidArgument("cycle time is shorter than the measurement time".into()));
        }
        if self.p >= self.model.p_th {
            return Err(Error::InvalidArgument(format!("error rate {} is not below threshold {}", self.p, self.model.p_th)));
        }
        Ok(())
    }
}

/// `120 N^3 t_M` seconds.
pub fn exec_time(n_bits: u64, t_meas: f64) -> f64 {
    TIME_FACTOR * (n_bits as f64).powi(3) * t_meas
}

/// `(280 N^3, 1 / (280 N^3))`.
pub fn a_state_budget(n_bits: u64) -> Result<(f64, f64)> {
    if n_bits == 0 {
        return Err(Error::InvalidArgument("key size must be positive".into()));
    }
    let count = A_STATES_PER_N3 * (n_bits as f64).powi(3);
    Ok((count, 1.0 / count))
}

/// `2.5 x 1.25 x (2d)^2`, rounded to the nearest 50.
pub fn qubits_per_logical(d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("distance must be positive".into()));
    }
    let raw = FOOTPRINT_FACTOR * (2.0 * d as f64).powi(2);
    Ok(((raw / 50.0).round() * 50.0).max(50.0) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Output error `120 d P_L`.
    Final,
    /// Output error `35 (1800 d P_L)^3` after the next round.
    First,
}

impl Stage {
    pub fn output_error(self, model: &LogicalRateModel, p: f64, d: usize) -> f64 {
        match self {
            Stage::Final => STAGE2_MULTIPLIER * d as f64 * model.rate(p, d),
            Stage::First => DISTILL_COEFF * (STAGE1_MULTIPLIER * d as f64 * model.rate(p, d)).powi(3),
        }
    }
}

/// Smallest `d >= 2` whose stage output error is below `target`.
pub fn select_distance(model: &LogicalRateModel, p: f64, target: f64, stage: Stage) -> Result<usize> {
    if !(p > 0.0 && p < model.p_th) {
        return Err(Error::InvalidArgument(format!("error rate {p} is not in (0, {})", model.p_th)));
    }
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!("target {target} must be positive")));
    }
    (2..=MAX_DISTANCE)
        .find(|&d| stage.output_error(model, p, d) < target)
        .ok_or_else(|| Error::InvalidArgument(format!("no distance up to {MAX_DISTANCE} meets {target:e}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistillationChain {
    pub p_inject: f64,
    /// `35 p_I^3`.
    pub p1: f64,
    /// `35 p_1^3`.
    pub p2: f64,
    pub d1: usize,
    pub d2: usize,
}

impl DistillationChain {
    pub fn new(p_inject: f64, d1: usize, d2: usize) -> Result<Self> {
        if !(p_inject > 0.0 && p_inject < 1.0) {
            return Err(Error::InvalidArgument(format!("injection error {p_inject} outside (0, 1)")));
        }
        let p1 = DISTILL_COEFF * p_inject.powi(3);
        let p2 = DISTILL_COEFF * p1.powi(3);
        if !(p1 < p_inject && p2 < p1) {
            return Err(Error::InvalidArgument(format!("injection error {p_inject} does not distill")));
        }
        Ok(DistillationChain { p_inject, p1, p2, d1, d2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactoryReport {
    pub stage1_qubits: u64,
    pub stage2_qubits: u64,
    /// Stage 1 footprint is reused by stage 2, so the larger one.
    pub factory_qubits: u64,
    pub stage1_cycles: f64,
    pub stage2_cycles: f64,
    pub cycles: f64,
    /// Full space-time volume over the volume one state uses, rounded.
    pub states_per_run: u64,
    /// States per second per factory.
    pub rate: f64,
}

pub fn factory_report(params: &FactoringParams, chain: &DistillationChain) -> Result<FactoryReport> {
    let q1 = qubits_per_logical(chain.d1)?;
    let q2 = qubits_per_logical(chain.d2)?;
    let stage1_qubits = STAGE1_LOGICAL as u64 * q1;
    let stage2_qubits = STAGE2_LOGICAL as u64 * q2;
    let factory_qubits = stage1_qubits.max(stage2_qubits);
    let stage1_cycles = 10.0 * chain.d1 as f64;
    let stage2_cycles = 8.0 * 1.25 * chain.d2 as f64;
    let cycles = stage1_cycles + stage2_cycles;
    let used = stage1_cycles * stage1_qubits as f64 + stage2_cycles * stage2_qubits as f64;
    let states_per_run = ((cycles * factory_qubits as f64 / used).round() as u64).max(1);
    let rate = states_per_run as f64 / (cycles * params.cycle_time);
    Ok(FactoryReport { stage1_qubits, stage2_qubits, factory_qubits, stage1_cycles, stage2_cycles, cycles, states_per_run, rate })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceReport {
    pub params: FactoringParams,
    pub exec_time: f64,
    pub a_state_count: f64,
    pub p_a: f64,
    /// Target for a distilled state's error: `min(P_A, TARGET_BAND_MID)`.
    pub target: f64,
    pub chain: DistillationChain,
    pub p_l1: f64,
    pub p_l2: f64,
    /// Stage-1 output error before the second round, and after it.
    pub stage1_error: f64,
    pub stage1_distilled_error: f64,
    pub final_error: f64,
    pub q1: u64,
    pub q2: u64,
    pub factory: FactoryReport,
    pub factories_needed: u64,
    pub factory_total_qubits: u64,
    pub computational_qubits: u64,
    pub total_qubits: u64,
}

impl ResourceReport {
    pub fn computational_share(&self) -> f64 {
        self.computational_qubits as f64 / self.total_qubits as f64
    }

    /// `key = value` lines.
    pub fn key_values(&self) -> String {
        let mut rows = self.rows();
        rows.insert(0, ("p_l_model", format!("{} (p/{})^d_e", self.params.model.prefactor, self.params.model.p_th)));
        rows.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn rows(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        vec![
            ("bits", p.n_bits.to_string()),
            ("t_meas_s", format!("{:e}", p.t_meas)),
            ("cycle_s", format!("{:e}", p.cycle_time)),
            ("p", format!("{:e}", p.p)),
            ("p_inject", format!("{:e}", p.p_inject)),
            ("exec_time_s", sig3(self.exec_time)),
            ("exec_time_h", sig3(self.exec_time / 3600.0)),
            ("a_states", sig3(self.a_state_count)),
            ("p_a", sig3(self.p_a)),
            ("target", sig3(self.target)),
            ("p1", sig3(self.chain.p1)),
            ("p2", sig3(self.chain.p2)),
            ("d1", self.chain.d1.to_string()),
            ("d2", self.chain.d2.to_string()),
            ("p_l1", sig3(self.p_l1)),
            ("p_l2", sig3(self.p_l2)),
            ("stage1_error", sig3(self.stage1_error)),
            ("stage1_distilled_error", sig3(self.stage1_distilled_error)),
            ("final_error", sig3(self.final_error)),
            ("qubits_per_logical_d1", self.q1.to_string()),
            ("qubits_per_logical_d2", self.q2.to_string()),
            ("factory_qubits", sig3(self.factory.factory_qubits as f64)),
            ("factory_cycles", sig3(self.factory.cycles)),
            ("states_per_run", self.factory.states_per_run.to_string()),
            ("factories", self.factories_needed.to_string()),
            ("factory_total_qubits", sig3(self.factory_total_qubits as f64)),
            ("computational_qubits", sig3(self.computational_qubits as f64)),
            ("total_qubits", sig3(self.total_qubits as f64)),
            ("computational_share", format!("{:.4}", self.computational_share())),
        ]
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<w$}  {v}")?;
        }
        Ok(())
    }
}

/// Three significant figures.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-3..6).contains(&e) {
        let decimals = (2 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.2e}")
    }
}

pub fn total_report(params: &FactoringParams) -> Result<ResourceReport> {
    params.validate()?;
    let (a_state_count, p_a) = a_state_budget(params.n_bits)?;
    let target = p_a.min(TARGET_BAND_MID);
    let m = &params.model;
    let d2 = select_distance(m, params.p, target, Stage::Final)?;
    let d1 = select_distance(m, params.p, target, Stage::First)?;
    let chain = DistillationChain::new(params.p_inject, d1, d2)?;
    if chain.p2 >= p_a {
        return Err(Error::InvalidArgument(format!("two rounds leave error {:e} above P_A {p_a:e}", chain.p2)));
    }
    let factory = factory_report(params, &chain)?;
    let exec = exec_time(params.n_bits, params.t_meas);
    let per_factory = factory.rate * exec;
    let factories_needed = (a_state_count / per_factory).ceil().max(1.0) as u64;
    let (q1, q2) = (qubits_per_logical(d1)?, qubits_per_logical(d2)?);
    let computational_qubits = 2 * params.n_bits * q2;
    let factory_total_qubits = factories_needed * factory.factory_qubits;
    let stage1_error = STAGE1_MULTIPLIER * d1 as f64 * m.rate(params.p, d1);
    Ok(ResourceReport {
        params: *params,
        exec_time: exec,
        a_state_count,
        p_a,
        target,
        chain,
        p_l1: m.rate(params.p, d1),
        p_l2: m.rate(params.p, d2),
        stage1_error,
        stage1_distilled_error: Stage::First.output_error(m, params.p, d1),
        final_error: Stage::Final.output_error(m, params.p, d2),
        q1,
        q2,
        factory,
        factories_needed,
        factory_total_qubits,
        computational_qubits,
        total_qubits: factory_total_qubits + computational_qubits,
    })
}

/// A count that is either a closed form or a big-O bound evaluated with a
/// unit coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Count {
    pub expr: &'static str,
    pub value: f64,
    pub big_o: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRow {
    pub logical_qubits: Count,
    pub sequential_toffolis: Count,
    pub total_toffolis: Count,
}

/// Qubit / time trade-offs of four factoring circuits (rows 1..=4);
/// logarithms are base 2.
pub fn table1_tradeoffs(n_bits: u64, row: usize) -> Result<TradeoffRow> {
    let n = n_bits as f64;
    let lg = n.log2();
    let exact = |expr, value| Count { expr, value, big_o: false };
    let big_o = |expr, value| Count { expr, value, big_o: true };
    Ok(match row {
        1 => TradeoffRow {
            logical_qubits: exact("2N", 2.0 * n),
            sequential_toffolis: exact("40N^3", 40.0 * n.powi(3)),
            total_toffolis: exact("40N^3", 40.0 * n.powi(3)),
        },
        2 => TradeoffRow {
            logical_qubits: exact("5N", 5.0 * n),
            sequential_toffolis: exact("600N^2", 600.0 * n.powi(2)),
            total_toffolis: big_o("O(N^3 log N)", n.powi(3) * lg),
        },
        3 => TradeoffRow {
            logical_qubits: exact("2N^2", 2.0 * n.powi(2)),
            sequential_toffolis: exact("15N log^2 N", 15.0 * n * lg * lg),
            total_toffolis: big_o("O(N^3 log^2 N)", n.powi(3) * lg * lg),
        },
        4 => TradeoffRow {
            logical_qubits: big_o("O(N^3)", n.powi(3)),
            sequential_toffolis: big_o("O(log^3 N)", lg.powi(3)),
            total_toffolis: big_o("O(N^3 log^3 N)", n.powi(3) * lg.powi(3)),
        },
        _ => return Err(Error::InvalidArgument(format!("trade-off row {row} not in 1..=4"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn exec_time_values() {
        assert!(rel(exec_time(2000, 100e-9), 9.6e4) < 1e-12);
        assert!(rel(exec_time(2000, 100e-9) / 3600.0, 26.7) < 0.01);
        assert_eq!(exec_time(0, 100e-9), 0.0);
        assert!(rel(exec_time(1000, 100e-9), 1.2e4) < 1e-12);
    }

    #[test]
    fn a_state_budget_values() {
        let (c, pa) = a_state_budget(2000).unwrap();
        assert!(rel(c, 2.24e12) < 1e-12);
        assert!(rel(pa, 4.464e-13) < 1e-3);
        assert_eq!(a_state_budget(1).unwrap(), (280.0, 1.0 / 280.0));
        assert!(a_state_budget(0).is_err());
    }

    #[test]
    fn footprint_values() {
        assert_eq!(qubits_per_logical(17).unwrap(), 3600);
        assert_eq!(qubits_per_logical(34).unwrap(), 14450);
        assert_eq!(qubits_per_logical(16).unwrap(), 3200);
        // Quadratic in d.
        assert_eq!(qubits_per_logical(8).unwrap() * 4, qubits_per_logical(16).unwrap());
    }

    #[test]
    fn quoted_rates_fit_factoring_model() {
        let m = LogicalRateModel::factoring();
        assert!(rel(m.rate(1e-3, 34), 3e-19) < 0.01);
        assert!(rel(m.rate(1e-3, 17), 1e-10) < 0.1);
    }

    #[test]
    fn reference_round_trip() {
        let r = total_report(&FactoringParams::reference()).unwrap();
        assert_eq!((r.chain.d1, r.chain.d2), (17, 34));
        assert!(rel(r.exec_time / 3600.0, 26.7) < 0.01);
        assert!(rel(r.chain.p1, 4e-6) < 0.15);
        assert!(rel(r.chain.p2, 3e-15) < 0.15);
        assert!(rel(r.factory.factory_qubits as f64, 8e5) < 0.1);
        assert!(rel(r.factory.cycles, 500.0) < 0.1);
        assert_eq!(r.factory.states_per_run, 2);
        assert!(rel(r.factories_needed as f64, 1200.0) < 0.1);
        assert!((0.9e9..=1.3e9).contains(&(r.total_qubits as f64)));
        assert!(r.computational_share() < 0.06);
        assert_eq!(r.total_qubits, r.factories_needed * r.factory.factory_qubits + r.computational_qubits);
    }

    #[test]
    fn lower_error_rate_shrinks_machine() {
        let mut p = FactoringParams::reference();
        p.p = 1e-4;
        let r = total_report(&p).unwrap();
        assert!((1.1e8..=1.5e8).contains(&(r.total_qubits as f64)), "{}", r.total_qubits);
        assert_eq!(r.chain.d1, 8);
    }

    #[test]
    fn slower_clock_keeps_factory_count() {
        let base = total_report(&FactoringParams::reference()).unwrap();
        let mut p = FactoringParams::reference();
        p.t_meas *= 10.0;
        p.cycle_time *= 10.0;
        let slow = total_report(&p).unwrap();
        assert!(rel(slow.exec_time, 10.0 * base.exec_time) < 1e-12);
        assert_eq!(slow.factories_needed, base.factories_needed);
    }

    #[test]
    fn power_law_model_needs_larger_codes() {
        let mut p = FactoringParams::reference();
        p.model = LogicalRateModel::power_law();
        let r = total_report(&p).unwrap();
        assert!(r.chain.d2 > 34 && r.chain.d1 > 17);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = FactoringParams::reference();
        p.cycle_time = 50e-9;
        assert!(total_report(&p).is_err());
        let mut p = FactoringParams::reference();
        p.p = 0.02;
        assert!(total_report(&p).is_err());
        assert!(table1_tradeoffs(2000, 5).is_err());
    }

    #[test]
    fn table1_rows() {
        let r1 = table1_tradeoffs(2000, 1).unwrap();
        assert_eq!(r1.logical_qubits.value, 4000.0);
        assert!(rel(r1.sequential_toffolis.value, 3.2e11) < 1e-12);
        let r2 = table1_tradeoffs(2000, 2).unwrap();
        assert_eq!(r2.logical_qubits.value, 1e4);
        assert!(rel(r2.sequential_toffolis.value, 2.4e9) < 1e-12);
        assert!(r2.total_toffolis.big_o);
        let ratios: Vec<f64> = (1..=4)
            .map(|k| {
                let r = table1_tradeoffs(2000, k).unwrap();
                r.total_toffolis.value / r.sequential_toffolis.value
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    }

    #[test]
    fn sig3_formats() {
        assert_eq!(sig3(1087000000.0), "1.09e9");
        assert_eq!(sig3(26.666), "26.7");
        assert_eq!(sig3(3600.0), "3600");
    }
}
