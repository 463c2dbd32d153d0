//! Cover periodicity diagnostics: the rotation `exp(i r J3)` at `r = 2 pi T`
//! acts on a discrete-series basis by the phases `exp(2 pi i (s+n) T)`, so
//! for `s = P/Q` in lowest terms the action returns to the identity first at
//! `T = Q` turns. The detected period identifies which cover of SO(2,1) the
//! representation lives on.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseClass {
    Identity,
    MinusIdentity,
    /// Common phase `exp(2 pi i num/den)` with `num/den` in lowest terms.
    Phase { num: i64, den: i64 },
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseClass::Identity => write!(f, "identity"),
            PhaseClass::MinusIdentity => write!(f, "-identity"),
            PhaseClass::Phase { num, den } => write!(f, "phase exp(2 pi i {num}/{den})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPhase {
    /// Reduced parameter s = p/q.
    pub p: i64,
    pub q: i64,
    pub turns: u64,
    /// What `exp(2 pi i J3 turns)` acts as on every basis vector.
    pub class: PhaseClass,
    /// Smallest positive number of turns giving the identity.
    pub smallest_identity_turns: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    NonPositiveS,
}

impl fmt::Display for CoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cover diagnostics require s > 0")
    }
}

impl std::error::Error for CoverError {}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Phase diagnostics of `exp(2 pi i J3 turns)` on the discrete series with
/// parameter `s = p/q > 0`.
pub fn cover_phase(p: i64, q: i64, turns: u64) -> Result<CoverPhase, CoverError> {
    if p <= 0 || q <= 0 {
        return Err(CoverError::NonPositiveS);
    }
    let g = gcd(p, q);
    let (p, q) = (p / g, q / g);
    // common phase at T turns: exp(2 pi i p T / q), the n-dependence drops
    // for integer T
    let t = turns as i64;
    let num = (p * t).rem_euclid(q);
    let class = if num == 0 {
        PhaseClass::Identity
    } else if 2 * num == q {
        PhaseClass::MinusIdentity
    } else {
        let g2 = gcd(num, q);
        PhaseClass::Phase {
            num: num / g2,
            den: q / g2,
        }
    };
    Ok(CoverPhase {
        p,
        q,
        turns,
        class,
        smallest_identity_turns: q as u64,
    })
}

/// The diagonal phases as complex numbers, for numerical cross-checks.
pub fn diagonal_phases(s: f64, turns: u64, n_max: u32) -> Vec<num_complex::Complex64> {
    (0..=n_max)
        .map(|n| {
            num_complex::Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (s + n as f64) * turns as f64,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_s_single_valued() {
        let c = cover_phase(2, 1, 1).unwrap();
        assert_eq!(c.class, PhaseClass::Identity);
        assert_eq!(c.smallest_identity_turns, 1);
    }

    #[test]
    fn half_integer_s_double_cover() {
        // s = 5/2: -Id after one turn, identity after two
        let c1 = cover_phase(5, 2, 1).unwrap();
        assert_eq!(c1.class, PhaseClass::MinusIdentity);
        assert_eq!(c1.smallest_identity_turns, 2);
        let c2 = cover_phase(5, 2, 2).unwrap();
        assert_eq!(c2.class, PhaseClass::Identity);
        // s = 1/2 likewise has period two
        let ch = cover_phase(1, 2, 2).unwrap();
        assert_eq!(ch.class, PhaseClass::Identity);
        assert_eq!(ch.smallest_identity_turns, 2);
        assert_eq!(cover_phase(1, 2, 1).unwrap().class, PhaseClass::MinusIdentity);
    }

    #[test]
    fn generic_fraction() {
        let c = cover_phase(2, 5, 1).unwrap();
        assert_eq!(c.class, PhaseClass::Phase { num: 2, den: 5 });
        assert_eq!(c.smallest_identity_turns, 5);
        // reduction happens up front: 4/10 = 2/5
        let c2 = cover_phase(4, 10, 1).unwrap();
        assert_eq!(c2, c);
        assert!(cover_phase(0, 3, 1).is_err());
        assert!(cover_phase(3, 0, 1).is_err());
    }

    #[test]
    fn numeric_phases_agree() {
        let c = cover_phase(5, 2, 1).unwrap();
        let num = diagonal_phases(2.5, 1, 6);
        for v in num {
            match c.class {
                PhaseClass::MinusIdentity => assert!((v.re + 1.0).abs() < 1e-9 && v.im.abs() < 1e-9),
                _ => panic!("expected -identity"),
            }
        }
    }
}
