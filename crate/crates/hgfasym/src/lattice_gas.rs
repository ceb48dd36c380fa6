//! Canonical partition function of a lattice gas in a field of traps.
//!
//! `p` particles sit on `N` nodes, `t` of which are traps. Summing over the
//! number `n` of occupied traps gives
//! `Z = sum_n C(N-t, p-n) C(t, n) zeta^n = C(N-t, p) F(-p, -t; N-p-t+1; zeta)`,
//! and each expansion below approximates `F` in one regime.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::hgf::hgf_eval;
use crate::hgf::HgfInput;
use crate::numerics::{BigComplex, Precision};

/// Largest `min(p, t)` accepted by [`partition_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 5000;
/// `min(m, n)` above which [`kerr_emission_prob`] uses the saddle-point form.
pub const KERR_EXACT_LIMIT: u64 = 5000;

/// How trap binding enters the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// Trap entry and exit probabilities, `P_on` in `[0, 1]` and `P_off` in `(0, 1]`.
    Rates { p_on: Rational, p_off: Rational },
    /// `zeta` given directly; any positive rational, including values below 1
    /// that no pair of probabilities produces.
    Zeta(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGasSystem {
    /// Lattice nodes.
    pub n: u64,
    /// Traps.
    pub t: u64,
    /// Particles.
    pub p: u64,
    pub binding: Binding,
}

impl LatticeGasSystem {
    pub fn new(n: u64, t: u64, p: u64, p_on: Rational, p_off: Rational) -> Result<Self> {
        let sys = LatticeGasSystem { n, t, p, binding: Binding::Rates { p_on, p_off } };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_zeta(n: u64, t: u64, p: u64, zeta: Rational) -> Result<Self> {
        let sys = LatticeGasSystem { n, t, p, binding: Binding::Zeta(zeta) };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t > self.n || self.p > self.n {
            return Err(Error::DomainViolation(format!("need t, p <= N (N={}, t={}, p={})", self.n, self.t, self.p)));
        }
        match &self.binding {
            Binding::Rates { p_on, p_off } => {
                if *p_on < 0 || *p_on > 1 {
                    return Err(Error::DomainViolation("P_on must lie in [0, 1]".into()));
                }
                if *p_off <= 0 || *p_off > 1 {
                    return Err(Error::DomainViolation("P_off must lie in (0, 1]".into()));
                }
            }
            Binding::Zeta(z) => {
                if *z <= 0 {
                    return Err(Error::DomainViolation("zeta must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// `N - p - t`, or `None` when the holes complement is needed.
    pub fn free_slack(&self) -> Option<u64> {
        self.n.checked_sub(self.p + self.t)
    }

    fn require_direct(&self) -> Result<u64> {
        self.validate()?;
        self.free_slack().ok_or(Error::ComplementRequired)
    }
}

/// `zeta = 1 - [P_on = 1] + P_on/P_off`, or the given value.
pub fn zeta_variable(sys: &LatticeGasSystem) -> Rational {
    match &sys.binding {
        Binding::Rates { p_on, p_off } => {
            let mut z = Rational::from(p_on / p_off);
            if *p_on != 1 {
                z += 1u32;
            }
            z
        }
        Binding::Zeta(z) => z.clone(),
    }
}

fn binomial(n: u64, k: u64) -> Integer {
    Integer::binomial_u(n as u32, k as u32).complete()
}

fn checked_u32(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::DomainViolation(format!("{v} exceeds the supported lattice size")))
}

/// The double sum over occupied traps `n` and the configurations of the inner factor, in exact arithmetic.
///
/// The inner sum is `sum_k C(n, k) r^k` with `r = P_on/P_off` (or `zeta - 1`);
/// when `P_on = 1` it is replaced by `r^n`.
pub fn partition_bruteforce(sys: &LatticeGasSystem) -> Result<Rational> {
    sys.require_direct()?;
    checked_u32(sys.n)?;
    let small = sys.p.min(sys.t);
    if small > BRUTEFORCE_LIMIT {
        return Err(Error::SizeGuard(small));
    }
    // per occupied trap: sum_k C(n, k) r^k, or r^n alone when P_on = 1
    let (r, collapsed) = match &sys.binding {
        Binding::Rates { p_on, p_off } => (Rational::from(p_on / p_off), *p_on == 1),
        Binding::Zeta(z) => (Rational::from(z - 1u32), false),
    };
    let mut total = Rational::new();
    for occ in 0..=small {
        let weight = binomial(sys.n - sys.t, sys.p - occ) * binomial(sys.t, occ);
        let inner = if collapsed {
            Rational::from((&r).pow(occ as u32))
        } else {
            let mut s = Rational::new();
            let mut rk = Rational::from(1);
            for k in 0..=occ {
                s += Rational::from(binomial(occ, k)) * &rk;
                rk *= &r;
            }
            s
        };
        total += Rational::from(weight) * inner;
    }
    Ok(total)
}

/// `C(N-t, p) F(-p, -t; N-p-t+1; zeta)` with the terminating series summed exactly.
pub fn partition_closed_exact(sys: &LatticeGasSystem) -> Result<Rational> {
    let slack = sys.require_direct()?;
    checked_u32(sys.n)?;
    let z = zeta_variable(sys);
    let c = Integer::from(slack + 1);
    let (p, t) = (Integer::from(sys.p), Integer::from(sys.t));
    let mut term = Rational::from(1);
    let mut sum = Rational::from(1);
    for k in 0..sys.p.min(sys.t) {
        let k = Integer::from(k);
        let num = Integer::from(&k - &p) * Integer::from(&k - &t);
        let den = Integer::from(&c + &k) * Integer::from(&k + 1u32);
        term *= Rational::from((num, den));
        term *= &z;
        sum += &term;
    }
    Ok(sum * binomial(sys.n - sys.t, sys.p))
}

/// `C(N-t, p) F(-p, -t; N-p-t+1; zeta)` through the reference evaluator.
pub fn partition_closed(sys: &LatticeGasSystem, prec: &Precision) -> Result<BigComplex> {
    let slack = sys.require_direct()?;
    let wp = prec.bits;
    let inp = HgfInput::new(
        BigComplex::from_i64(wp, -(sys.p as i64)),
        BigComplex::from_i64(wp, -(sys.t as i64)),
        BigComplex::from_i64(wp, slack as i64 + 1),
        BigComplex::from_rational(wp, &zeta_variable(sys)),
    );
    // A real terminating series; any imaginary part is rounding left by a continuation route.
    let f = BigComplex::from_float(hgf_eval(&inp, prec)?.value.re().clone());
    Ok(&f * &binomial_float(sys.n - sys.t, sys.p, wp))
}

fn binomial_float(n: u64, k: u64, prec: u32) -> BigComplex {
    BigComplex::from_float(Float::with_val(prec, binomial(n, k)))
}

/// Limits outside of which an expansion is still returned but flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeGuards {
    /// Dilute: `p t <= dilute_ratio * N`.
    pub dilute_ratio: f64,
    /// Trapping: `min(p, t)^2 <= trapping_ratio * (N - p - t)`.
    pub trapping_ratio: f64,
    /// Dense: `N - p - t <= dense_slack`.
    pub dense_slack: u64,
}

impl Default for RegimeGuards {
    fn default() -> Self {
        RegimeGuards { dilute_ratio: 0.01, trapping_ratio: 0.01, dense_slack: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RegimeWarning {
    NotDilute,
    NotTrapping,
    NotDense,
}

impl RegimeWarning {
    pub fn tag(&self) -> &'static str {
        match self {
            RegimeWarning::NotDilute => "not-dilute",
            RegimeWarning::NotTrapping => "not-trapping",
            RegimeWarning::NotDense => "not-dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionAe {
    pub value: BigComplex,
    pub warning: Option<RegimeWarning>,
}

/// `C(N-t, p) (1 + p t zeta/(N-p-t+1))`.
pub fn partition_ae_dilute(sys: &LatticeGasSystem, prec: &Precision, guards: &RegimeGuards) -> Result<PartitionAe> {
    let slack = sys.require_direct()?;
    let wp = prec.bits;
    let z = BigComplex::from_rational(wp, &zeta_variable(sys));
    let pt = Rational::from((Integer::from(sys.p) * sys.t, Integer::from(slack + 1)));
    let f = z.mul_real(&Float::with_val(wp, &pt)).add_f64(1.0);
    let warning =
        ((sys.p as f64) * (sys.t as f64) > guards.dilute_ratio * sys.n as f64).then_some(RegimeWarning::NotDilute);
    Ok(PartitionAe { value: &f * &binomial_float(sys.n - sys.t, sys.p, wp), warning })
}

/// `C(N-t, p) (1 + t zeta/(N-p-t))^p`, or with `p` and `t` exchanged when `t < p`.
pub fn partition_ae_trapping(sys: &LatticeGasSystem, prec: &Precision, guards: &RegimeGuards) -> Result<PartitionAe> {
    let slack = sys.require_direct()?;
    if slack == 0 {
        return Err(Error::DomainViolation("trapping expansion needs p + t < N".into()));
    }
    let wp = prec.bits;
    let (small, large) = if sys.p <= sys.t { (sys.p, sys.t) } else { (sys.t, sys.p) };
    let z = BigComplex::from_rational(wp, &zeta_variable(sys));
    let base = z.mul_real(&Float::with_val(wp, Rational::from((large, slack)))).add_f64(1.0);
    let f = base.powi(small as i64);
    let warning = ((small as f64).powi(2) > guards.trapping_ratio * slack as f64).then_some(RegimeWarning::NotTrapping);
    Ok(PartitionAe { value: &f * &binomial_float(sys.n - sys.t, sys.p, wp), warning })
}

/// Saddle `t+ = ((t-p) + s)/(2t)` with `s = sqrt((t-p)^2 + 4pt/z)`, for `p <= t`.
pub fn dense_saddle(p: u64, t: u64, z: &BigComplex) -> BigComplex {
    let wp = z.prec();
    let d = BigComplex::from_i64(wp, t as i64 - p as i64);
    let four_pt = BigComplex::from_float(Float::with_val(wp, Integer::from(p) * t * 4u32));
    let s = (&(&d * &d) + &(&four_pt / z)).sqrt();
    (&d + &s).div_i64(2 * t as i64)
}

/// Saddle-point form of `F(-p, -t; 1; z)` for large `p` and `t`:
/// `sqrt((1+sigma) t+/(4 pi p sigma)) ((1-z) t+/(t+ - 1))^p ((1-z)/(1-z t+))^(t+1)`,
/// written through `s = (t-p) sigma` so that `p = t` is regular.
pub fn dense_factor(p: u64, t: u64, z: &BigComplex) -> Result<BigComplex> {
    let (p, t) = if p <= t { (p, t) } else { (t, p) };
    let wp = z.prec();
    if p == 0 || z.is_zero() {
        return Ok(BigComplex::one(wp));
    }
    let one = BigComplex::one(wp);
    let one_m_z = &one - z;
    if one_m_z.is_zero() {
        return Err(Error::ExcludedPoint);
    }
    let d = BigComplex::from_i64(wp, t as i64 - p as i64);
    let tp = dense_saddle(p, t, z);
    // s = 2 t t+ - (t - p)
    let s = &tp.mul_i64(2 * t as i64) - &d;
    let four_pi_p = BigComplex::pi(wp).mul_i64(4 * p as i64);
    let ln_amp = (&(&(&d + &s) * &tp) / &(&s * &four_pi_p)).ln().mul_f64(0.5);
    let l1 = (&(&one_m_z * &tp) / &(&tp - &one)).ln().mul_i64(p as i64);
    let l2 = (&one_m_z / &(&one - &(z * &tp))).ln().mul_i64(t as i64 + 1);
    Ok((&(&ln_amp + &l1) + &l2).exp())
}

/// `C(N-t, p) F` with `F` from [`dense_factor`]; exact when `N = p + t` up to the expansion error.
pub fn partition_ae_dense(sys: &LatticeGasSystem, prec: &Precision, guards: &RegimeGuards) -> Result<PartitionAe> {
    let slack = sys.require_direct()?;
    let wp = prec.bits + 32;
    let z = BigComplex::from_rational(wp, &zeta_variable(sys));
    let f = dense_factor(sys.p, sys.t, &z)?;
    let warning = (slack > guards.dense_slack).then_some(RegimeWarning::NotDense);
    let value = (&f * &binomial_float(sys.n - sys.t, sys.p, wp)).with_prec(prec.bits);
    Ok(PartitionAe { value, warning })
}

/// Holes picture of an overfull system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolesComplement {
    /// `N - p` holes over the same lattice, with the `N - t` untrapped nodes playing the traps.
    pub system: LatticeGasSystem,
    /// `Z(original) = zeta^zeta_power * Z(system)`; zero when the original needed no complement.
    pub zeta_power: u64,
}

/// `(N, t, p) -> (N, N-t, N-p)`, binding unchanged.
///
/// Relabelling the sum by holes gives
/// `Z(N, t, p) = zeta^(p+t-N) Z(N, N-t, N-p)` at the same `zeta`. Applying the
/// map twice returns the original system.
pub fn holes_complement(sys: &LatticeGasSystem) -> HolesComplement {
    let system = LatticeGasSystem { n: sys.n, t: sys.n - sys.t, p: sys.n - sys.p, binding: sys.binding.clone() };
    let zeta_power = (sys.p + sys.t).saturating_sub(sys.n);
    HolesComplement { system, zeta_power }
}

/// A Kerr black-hole emission channel.
#[derive(Debug, Clone, PartialEq)]
pub struct KerrChannel {
    /// `hbar (omega - m Omega)/T_H`.
    pub x: Float,
    /// Absorptivity in `[0, 1]`.
    pub gamma_abs: Float,
    pub beta: Float,
    pub mu: Float,
}

impl KerrChannel {
    pub fn new(x: Float, gamma_abs: Float, beta: Float, mu: Float) -> Result<Self> {
        let ch = KerrChannel { x, gamma_abs, beta, mu };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.partial_cmp(&0) != Some(Ordering::Greater) || !self.x.is_finite() {
            return Err(Error::DomainViolation("x must be positive and finite".into()));
        }
        if !(self.gamma_abs >= 0 && self.gamma_abs <= 1) {
            return Err(Error::DomainViolation("absorptivity must lie in [0, 1]".into()));
        }
        if !self.beta.is_finite() || !self.mu.is_finite() {
            return Err(Error::DomainViolation("beta and mu must be finite".into()));
        }
        Ok(())
    }

    /// `(e^beta - 1)(e^mu - 1)`.
    pub fn argument(&self, prec: u32) -> Float {
        let eb = Float::with_val(prec, self.beta.exp_m1_ref());
        let em = Float::with_val(prec, self.mu.exp_m1_ref());
        eb * em
    }
}

/// Probability of emitting `m` quanta given `n` incident ones:
/// `(e^x-1) e^(nx) G^(m+n)/(e^x-1+G)^(m+n+1) F(-m, -n; 1; (e^beta-1)(e^mu-1))`.
pub fn kerr_emission_prob(ch: &KerrChannel, m: u64, n: u64, prec: &Precision) -> Result<BigComplex> {
    ch.validate()?;
    let wp = prec.bits + 32;
    let ex1 = Float::with_val(wp, ch.x.exp_m1_ref());
    let g = Float::with_val(wp, &ch.gamma_abs);
    let total = m + n;
    let prefactor = if g.is_zero() {
        if total > 0 {
            return Ok(BigComplex::zero(prec.bits));
        }
        Float::with_val(wp, 1)
    } else {
        let denom = Float::with_val(wp, &ex1 + &g);
        let ln = Float::with_val(wp, ex1.ln_ref())
            + Float::with_val(wp, &ch.x * n)
            + Float::with_val(wp, g.ln_ref()) * total
            - Float::with_val(wp, denom.ln_ref()) * (total + 1);
        ln.exp()
    };
    let y = BigComplex::from_float(ch.argument(wp));
    let f = if m.min(n) > KERR_EXACT_LIMIT {
        dense_factor(m, n, &y)?
    } else {
        let inp = HgfInput::new(
            BigComplex::from_i64(wp, -(m as i64)),
            BigComplex::from_i64(wp, -(n as i64)),
            BigComplex::one(wp),
            y,
        );
        hgf_eval(&inp, &prec.with_bits(wp))?.value
    };
    Ok(f.mul_real(&prefactor).with_prec(prec.bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym_ab::saddle_points_ab;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn sys(n: u64, t: u64, p: u64, zeta: Rational) -> LatticeGasSystem {
        LatticeGasSystem::with_zeta(n, t, p, zeta).unwrap()
    }

    fn prec() -> Precision {
        Precision::new(256).unwrap()
    }

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        a.rel_diff(b)
    }

    #[test]
    fn zeta_examples() {
        let s = LatticeGasSystem::new(5, 1, 1, q(1, 2), q(1, 2)).unwrap();
        assert_eq!(zeta_variable(&s), 2);
        let s = LatticeGasSystem::new(5, 1, 1, q(1, 1), q(1, 1)).unwrap();
        assert_eq!(zeta_variable(&s), 1);
        let s = LatticeGasSystem::new(5, 1, 1, q(1, 1), q(1, 3)).unwrap();
        assert_eq!(zeta_variable(&s), 3);
        assert!(LatticeGasSystem::new(5, 6, 1, q(1, 2), q(1, 2)).is_err());
        assert!(LatticeGasSystem::new(5, 1, 1, q(1, 2), q(0, 1)).is_err());
        assert_eq!(zeta_variable(&sys(4, 1, 1, q(1, 2))), q(1, 2));
        assert!(LatticeGasSystem::with_zeta(4, 1, 1, q(0, 1)).is_err());
        // rates reproduce the same weights as the equivalent direct zeta
        let rates = LatticeGasSystem::new(9, 3, 4, q(1, 3), q(1, 2)).unwrap();
        let direct = sys(9, 3, 4, q(5, 3));
        assert_eq!(partition_bruteforce(&rates).unwrap(), partition_bruteforce(&direct).unwrap());
    }

    #[test]
    fn bruteforce_examples() {
        let s = LatticeGasSystem::new(10, 3, 2, q(1, 2), q(1, 2)).unwrap();
        assert_eq!(partition_bruteforce(&s).unwrap(), 75);
        assert_eq!(partition_closed_exact(&s).unwrap(), 75);
        let v = partition_closed(&s, &prec()).unwrap();
        assert!(rel(&v, &BigComplex::real(256, 75.0)) < 1e-60);
        let s0 = LatticeGasSystem::new(12, 0, 5, q(1, 2), q(1, 2)).unwrap();
        assert_eq!(partition_bruteforce(&s0).unwrap(), binomial(12, 5));
        let s1 = LatticeGasSystem::new(12, 4, 5, q(1, 1), q(1, 1)).unwrap();
        assert_eq!(partition_bruteforce(&s1).unwrap(), binomial(12, 5));
        let over = LatticeGasSystem::new(10, 8, 7, q(1, 2), q(1, 2)).unwrap();
        assert_eq!(partition_bruteforce(&over), Err(Error::ComplementRequired));
        let big = LatticeGasSystem::new(20_000, 6000, 6000, q(1, 2), q(1, 2)).unwrap();
        assert_eq!(partition_bruteforce(&big), Err(Error::SizeGuard(6000)));
        let empty = LatticeGasSystem::new(9, 4, 0, q(1, 2), q(1, 2)).unwrap();
        assert!(rel(&partition_closed(&empty, &prec()).unwrap(), &BigComplex::one(256)) < 1e-70);
    }

    #[test]
    fn closed_equals_bruteforce_small_lattices() {
        for n in 0..=12u64 {
            for t in 0..=n {
                for p in 0..=(n - t) {
                    for z in [q(1, 2), q(1, 1), q(2, 1), q(5, 1)] {
                        let s = sys(n, t, p, z);
                        assert_eq!(partition_closed_exact(&s).unwrap(), partition_bruteforce(&s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn complement_rescaling() {
        let s = sys(10, 8, 7, q(2, 1));
        let h = holes_complement(&s);
        assert_eq!((h.system.n, h.system.t, h.system.p, h.zeta_power), (10, 2, 3, 5));
        assert_eq!(holes_complement(&h.system).system, s);
        // brute force over the overfull system, summing n from p + t - N
        let direct: Integer =
            (5..=7u64).map(|k| binomial(2, 7 - k) * binomial(8, k) * Integer::from(2u32).pow(k as u32)).sum();
        let via = partition_bruteforce(&h.system).unwrap() * Rational::from(2).pow(5u32);
        assert_eq!(via, Rational::from(direct));
        // every overfull system up to N = 12, for a zeta above and below 1
        for n in 1..=12u64 {
            for t in 0..=n {
                for p in (n - t + 1)..=n {
                    for zeta in [q(2, 1), q(1, 2)] {
                        let direct: Rational = (p + t - n..=p.min(t))
                            .map(|k| {
                                Rational::from(binomial(n - t, p - k) * binomial(t, k)) * zeta.clone().pow(k as u32)
                            })
                            .sum();
                        let c = holes_complement(&sys(n, t, p, zeta.clone()));
                        let via = partition_bruteforce(&c.system).unwrap() * zeta.pow(c.zeta_power as u32);
                        assert_eq!(via, direct, "N={n} t={t} p={p}");
                    }
                }
            }
        }
        for (t, p) in [(3, 4), (6, 6), (9, 2)] {
            let orig_over = t + p > 10;
            let c = holes_complement(&sys(10, t, p, q(2, 1)));
            assert_eq!(c.system.free_slack().is_some(), orig_over || t + p == 10);
        }
    }

    #[test]
    fn dilute_regime() {
        let mut prev = f64::INFINITY;
        for n in [1_000_000u64, 2_000_000, 4_000_000] {
            let s = sys(n, 10, 10, q(2, 1));
            let ae = partition_ae_dilute(&s, &prec(), &RegimeGuards::default()).unwrap();
            assert_eq!(ae.warning, None);
            let d = rel(&ae.value, &partition_closed(&s, &prec()).unwrap());
            assert!(d < 1e-2 && d < prev);
            prev = d;
        }
        let s = sys(50, 0, 7, q(2, 1));
        let ae = partition_ae_dilute(&s, &prec(), &RegimeGuards::default()).unwrap();
        assert!(rel(&ae.value, &partition_closed(&s, &prec()).unwrap()) < 1e-60);
        let crowded = sys(100, 10, 10, q(2, 1));
        assert_eq!(
            partition_ae_dilute(&crowded, &prec(), &RegimeGuards::default()).unwrap().warning,
            Some(RegimeWarning::NotDilute)
        );
    }

    #[test]
    fn trapping_regime() {
        let g = RegimeGuards::default();
        let mut prev = f64::INFINITY;
        for k in [1u64, 2, 4] {
            let s = sys(30_000 * k, 10_000 * k, 10, q(2, 1));
            let ae = partition_ae_trapping(&s, &prec(), &g).unwrap();
            let d = rel(&ae.value, &partition_closed(&s, &prec()).unwrap());
            assert!(d < 1e-2 && d < prev, "{d}");
            prev = d;
        }
        // one particle: F = 1 + t zeta/(N-t) exactly, the expansion has N-t-1 instead
        let s = sys(40, 15, 1, q(5, 1));
        let ae = partition_ae_trapping(&s, &prec(), &g).unwrap();
        let closed = partition_closed(&s, &prec()).unwrap();
        let ratio = (1.0 + 75.0 / 24.0) / (1.0 + 75.0 / 25.0);
        assert!((ae.value.to_f64_pair().0 / closed.to_f64_pair().0 - ratio).abs() < 1e-14);
        assert_eq!(partition_closed_exact(&s).unwrap(), Rational::from(25 * (1 + 3)));
        // swapped roles
        let s = sys(30_000, 10, 10_000, q(2, 1));
        let ae = partition_ae_trapping(&s, &prec(), &g).unwrap();
        assert!(rel(&ae.value, &partition_closed(&s, &prec()).unwrap()) < 1e-2);
        // P_on = 0 leaves traps inert: zeta = 1 and the expansion must not care where particles sit
        let inert = LatticeGasSystem::new(2000, 5, 3, q(0, 1), q(1, 1)).unwrap();
        assert_eq!(zeta_variable(&inert), 1);
        assert_eq!(partition_bruteforce(&inert).unwrap(), binomial(2000, 3));
    }

    #[test]
    fn dense_regime() {
        let g = RegimeGuards::default();
        let mut prev = f64::INFINITY;
        for n in [300u64, 3000, 30000] {
            let s = sys(n, 2 * n / 3, n / 3, q(2, 1));
            let ae = partition_ae_dense(&s, &prec(), &g).unwrap();
            assert_eq!(ae.warning, None);
            let d = rel(&ae.value, &partition_closed(&s, &prec()).unwrap());
            assert!(d < 1e-2 && d < prev, "{n} {d}");
            prev = d;
        }
        let s = sys(600, 300, 300, q(2, 1));
        let d = rel(&partition_ae_dense(&s, &prec(), &g).unwrap().value, &partition_closed(&s, &prec()).unwrap());
        assert!(d < 1e-2);
        let s = sys(600, 200, 400, q(5, 1));
        let d = rel(&partition_ae_dense(&s, &prec(), &g).unwrap().value, &partition_closed(&s, &prec()).unwrap());
        assert!(d < 1e-2);
        let one = sys(600, 200, 400, q(1, 1));
        assert_eq!(partition_ae_dense(&one, &prec(), &g), Err(Error::ExcludedPoint));
        let loose = sys(610, 200, 400, q(2, 1));
        assert_eq!(partition_ae_dense(&loose, &prec(), &g).unwrap().warning, Some(RegimeWarning::NotDense));
    }

    #[test]
    fn dense_saddle_matches_ab_saddle() {
        let (p, t) = (1000u64, 2000u64);
        for z in [BigComplex::real(256, 2.0), BigComplex::real(256, 0.5), BigComplex::from_f64(256, 3.0, 1.0)] {
            let tp = dense_saddle(p, t, &z);
            let s = saddle_points_ab(&Float::with_val(256, Rational::from((p, t))), &z).unwrap();
            assert!(tp.rel_diff(&s.t_plus) < 1e-60);
        }
    }

    #[test]
    fn kerr_examples() {
        let p = prec();
        let f = |v: f64| Float::with_val(256, v);
        let ch = KerrChannel::new(f(0.7), f(0.6), f(0.3), f(-0.2)).unwrap();
        let v = kerr_emission_prob(&ch, 4, 0, &p).unwrap();
        let (x, g) = (0.7f64, 0.6f64);
        let e = x.exp_m1();
        let expect = e * g.powi(4) / (e + g).powi(5);
        assert!((v.to_f64_pair().0 - expect).abs() < 1e-15);
        let dark = KerrChannel::new(f(0.7), f(0.0), f(0.3), f(0.1)).unwrap();
        assert!(rel(&kerr_emission_prob(&dark, 0, 0, &p).unwrap(), &BigComplex::one(256)) < 1e-60);
        assert!(kerr_emission_prob(&dark, 1, 0, &p).unwrap().is_zero());
        assert!(KerrChannel::new(f(-1.0), f(0.5), f(0.0), f(0.0)).is_err());
        assert!(KerrChannel::new(f(1.0), f(1.5), f(0.0), f(0.0)).is_err());
    }

    #[test]
    fn kerr_normalization() {
        // channel with (e^beta - 1)(e^mu - 1) = (1 - G)(e^x - 1)(1 - e^-x)/G^2
        let p = Precision::new(128).unwrap();
        let (x, g) = (0.7f64, 0.6f64);
        let beta = (x.exp_m1() / g).ln_1p();
        let mu = ((1.0 - g) * (-(-x).exp_m1()) / g).ln_1p();
        let f = |v: f64| Float::with_val(128, v);
        let ch = KerrChannel::new(f(x), f(g), f(beta), f(mu)).unwrap();
        for n in [0u64, 1, 3] {
            let mut sums = Vec::new();
            let mut acc = 0.0;
            for m in 0..160u64 {
                acc += kerr_emission_prob(&ch, m, n, &p).unwrap().to_f64_pair().0;
                if [9, 39, 159].contains(&m) {
                    sums.push(acc);
                }
            }
            assert!(sums[0] <= sums[1] && sums[1] <= sums[2] + 1e-15);
            assert!((sums[2] - 1.0).abs() < 1e-10, "n {n}: {sums:?}");
        }
    }

    #[test]
    fn kerr_large_route() {
        let f = |v: f64| Float::with_val(256, v);
        let ch = KerrChannel::new(f(0.5), f(0.8), f(0.4), f(0.4)).unwrap();
        let y = BigComplex::from_float(ch.argument(288));
        let (m, n) = (6000u64, 7000u64);
        let inp = HgfInput::new(
            BigComplex::from_i64(288, -(m as i64)),
            BigComplex::from_i64(288, -(n as i64)),
            BigComplex::one(288),
            y.clone(),
        );
        let exact = hgf_eval(&inp, &Precision::new(288).unwrap()).unwrap().value;
        assert!(dense_factor(m, n, &y).unwrap().rel_diff(&exact) < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn positive_and_symmetric_factor(n in 1u64..25, tf in 0.0f64..1.0, pf in 0.0f64..1.0, zi in 0usize..4) {
            let t = (tf * n as f64) as u64;
            let p = (pf * (n - t) as f64) as u64;
            let z = [q(1, 2), q(1, 1), q(2, 1), q(5, 1)][zi].clone();
            let s = sys(n, t, p, z);
            let zv = partition_bruteforce(&s).unwrap();
            prop_assert!(zv > 0);
            // F is symmetric in its first two parameters: Z / C(N-t, p) is invariant under p <-> t
            let swapped = LatticeGasSystem { t: p, p: t, ..s.clone() };
            let f1 = zv / binomial(n - t, p);
            let f2 = partition_bruteforce(&swapped).unwrap() / binomial(n - p, t);
            prop_assert_eq!(f1, f2);
        }
    }
}
