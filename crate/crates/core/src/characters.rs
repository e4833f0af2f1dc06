//! Powers of the Teichmüller character, `ε = ω^i` of conductor dividing p.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{teichmuller, PadicContext, PadicNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TeichCharacter {
    p: u64,
    exponent: u64,
}

impl TeichCharacter {
    /// `ω^i`, with `i` reduced to `0..p-1`.
    pub fn new(p: u64, exponent: i64) -> Self {
        let m = (p - 1) as i64;
        TeichCharacter {
            p,
            exponent: exponent.rem_euclid(m) as u64,
        }
    }

    pub fn trivial(p: u64) -> Self {
        TeichCharacter { p, exponent: 0 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn conductor(&self) -> u64 {
        if self.is_trivial() {
            1
        } else {
            self.p
        }
    }

    /// `ε(-1) = (-1)^i`.
    pub fn parity(&self) -> i8 {
        if self.exponent.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Order of `ε` in the character group.
    pub fn order(&self) -> u64 {
        let m = self.p - 1;
        m / num_integer::gcd(self.exponent, m)
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ContextMismatch(format!(
                "characters mod {} and mod {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(TeichCharacter::new(
            self.p,
            (self.exponent + other.exponent) as i64,
        ))
    }

    pub fn inverse(&self) -> Self {
        TeichCharacter::new(self.p, -(self.exponent as i64))
    }

    /// `ε(a)`. For `p | a` this is 0, except for the trivial character of
    /// conductor 1, where it is 1.
    pub fn eval(&self, a: i64, ctx: PadicContext) -> PadicNumber {
        assert_eq!(ctx.p(), self.p, "character and context disagree on p");
        let p = self.p as i64;
        let r = a.rem_euclid(p);
        if self.is_trivial() {
            return ctx.one();
        }
        if r == 0 {
            return ctx.zero();
        }
        // ω(a)^i = ω(a^i mod p)
        let base = pow_mod(r as u64, self.exponent, self.p);
        teichmuller(base as i64, ctx).expect("residue is prime to p")
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut base = b as u128 % m;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for TeichCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega^{} mod {}", self.exponent, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, n: u32) -> PadicContext {
        PadicContext::new(p, n).unwrap()
    }

    fn legendre(a: u64, p: u64) -> i64 {
        if (1..p).any(|x| x * x % p == a % p) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn trivial_character_is_one_everywhere() {
        let c = ctx(5, 8);
        let eps = TeichCharacter::trivial(5);
        for a in [-3, 1, 2, 5, 10, 25] {
            assert_eq!(eps.eval(a, c), c.one());
        }
        assert_eq!(eps.conductor(), 1);
    }

    #[test]
    fn quadratic_character_is_legendre_symbol() {
        let c = ctx(5, 8);
        let eps = TeichCharacter::new(5, 2);
        let v = eps.eval(2, c);
        assert_eq!(v, -c.one());
        for p in [7u64, 11, 13] {
            let c = ctx(p, 6);
            let eps = TeichCharacter::new(p, ((p - 1) / 2) as i64);
            for a in 1..p {
                assert_eq!(eps.eval(a as i64, c), c.integer(legendre(a, p)));
            }
        }
    }

    #[test]
    fn conductor_p_character_kills_p() {
        let c = ctx(5, 8);
        assert!(TeichCharacter::new(5, 1).eval(5, c).is_zero_to_precision());
        assert_eq!(TeichCharacter::new(5, 1).conductor(), 5);
    }

    #[test]
    fn group_law_and_parity() {
        let chi = TeichCharacter::new(7, 3);
        assert_eq!(chi.parity(), -1);
        assert_eq!(chi.inverse(), TeichCharacter::new(7, 3));
        let psi = TeichCharacter::new(11, 4);
        assert_eq!(psi.inverse().exponent(), 6);
        assert!(psi.compose(&psi.inverse()).unwrap().is_trivial());
        assert!(psi.compose(&chi).is_err());
        assert_eq!(TeichCharacter::new(13, -1).exponent(), 11);
        assert_eq!(TeichCharacter::new(13, 4).to_string(), "omega^4 mod 13");
    }

    #[test]
    fn parity_matches_value_at_minus_one() {
        for p in [3u64, 5, 7, 11, 13] {
            let c = ctx(p, 5);
            for i in 0..(p - 1) as i64 {
                let chi = TeichCharacter::new(p, i);
                assert_eq!(chi.eval(-1, c), c.integer(chi.parity() as i64));
            }
        }
    }

    #[test]
    fn values_have_the_order_of_the_character() {
        for p in [7u64, 13] {
            let c = ctx(p, 10);
            for i in 0..(p - 1) as i64 {
                let chi = TeichCharacter::new(p, i);
                for a in 1..p as i64 {
                    assert_eq!(chi.eval(a, c).pow_u64(chi.order()), c.one());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn completely_multiplicative(i in 0i64..12, a in 1i64..10_000, b in 1i64..10_000) {
            let c = ctx(13, 10);
            let chi = TeichCharacter::new(13, i);
            prop_assume!(a % 13 != 0 && b % 13 != 0);
            prop_assert_eq!(chi.eval(a * b, c), chi.eval(a, c) * chi.eval(b, c));
        }
    }
}
