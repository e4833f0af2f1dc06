//! Orders of vanishing of Dirichlet L-functions at integers, read off from
//! the trivial zeros forced by the Γ-factor.

use serde::Serialize;

use crate::characters::TeichCharacter;
use crate::error::Result;
use crate::weight::check_admissible;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArchOrderQuery {
    /// `χ(-1)`.
    pub parity: i8,
    pub is_trivial: bool,
    pub s0: i64,
}

impl ArchOrderQuery {
    pub fn for_character(chi: &TeichCharacter, s0: i64) -> Self {
        ArchOrderQuery {
            parity: chi.parity(),
            is_trivial: chi.is_trivial(),
            s0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArchOrder {
    pub order: u32,
    /// Only `ζ(s)` at `s = 1`.
    pub pole: bool,
}

/// `ord_{s=s0} L(s, χ)`.
///
/// No zeros on `s ≥ 1`; at `s ≤ 0` the only zeros are the simple trivial
/// zeros: `0, -2, -4, …` for even nontrivial `χ`, `-1, -3, …` for odd `χ`
/// and `-2, -4, …` for `ζ`.
pub fn arch_order(q: ArchOrderQuery) -> ArchOrder {
    if q.s0 >= 1 {
        return ArchOrder {
            order: 0,
            pole: q.is_trivial && q.s0 == 1,
        };
    }
    let even_point = q.s0 % 2 == 0;
    let zero = match (q.is_trivial, q.parity == 1) {
        (true, _) => even_point && q.s0 != 0,
        (false, true) => even_point,
        (false, false) => !even_point,
    };
    ArchOrder {
        order: zero as u32,
        pole: false,
    }
}

/// `(ord_{s=2-k} L(s, ε^-1), ord_{s=k} L(s, ε))`, the Selmer dimensions of
/// `χ` and `χ^-1` for `χ = F(k-1) ⊗ ε`.
pub fn selmer_dims(p: u64, k: i64, i: i64) -> Result<(u32, u32)> {
    check_admissible(p, k, i)?;
    let eps = TeichCharacter::new(p, i);
    let at_twin = arch_order(ArchOrderQuery::for_character(&eps.inverse(), 2 - k));
    let at_k = arch_order(ArchOrderQuery::for_character(&eps, k));
    Ok((at_twin.order, at_k.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(parity: i8, is_trivial: bool, s0: i64) -> ArchOrderQuery {
        ArchOrderQuery {
            parity,
            is_trivial,
            s0,
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(arch_order(q(1, true, 1)), ArchOrder { order: 0, pole: true });
        assert_eq!(arch_order(q(1, true, 0)).order, 0);
        assert_eq!(arch_order(q(1, true, -1)).order, 0);
        assert_eq!(arch_order(q(1, true, -2)).order, 1);
        assert_eq!(arch_order(q(1, true, 2)).order, 0);
    }

    #[test]
    fn nontrivial_parities() {
        assert_eq!(arch_order(q(1, false, 0)).order, 1);
        assert_eq!(arch_order(q(1, false, -1)).order, 0);
        assert_eq!(arch_order(q(-1, false, -1)).order, 1);
        assert_eq!(arch_order(q(-1, false, 0)).order, 0);
        assert!(!arch_order(q(1, false, 1)).pole);
    }

    #[test]
    fn selmer_dims_small_cases() {
        assert_eq!(selmer_dims(5, 4, 0).unwrap(), (1, 0));
        assert_eq!(selmer_dims(7, 3, 1).unwrap(), (1, 0));
        assert_eq!(selmer_dims(7, 2, 2).unwrap(), (1, 0));
        assert!(selmer_dims(5, 2, 0).is_err());
    }

    proptest! {
        #[test]
        fn never_vanishes_right_of_zero(parity in prop_oneof![Just(1i8), Just(-1i8)], triv in any::<bool>(), s0 in 1i64..1000) {
            prop_assert_eq!(arch_order(q(parity, triv, s0)).order, 0);
        }

        // At each s0 ≤ 0 exactly one of the two parities has its trivial zero;
        // the reflected point 1 - s0 carries none.
        #[test]
        fn parities_split_the_trivial_zeros(s0 in -1000i64..=0) {
            let even = arch_order(q(1, false, s0)).order;
            let odd = arch_order(q(-1, false, s0)).order;
            prop_assert_eq!(even + odd, 1);
            prop_assert_eq!(arch_order(q(1, false, 1 - s0)).order, 0);
            prop_assert_eq!(arch_order(q(-1, false, 1 - s0)).order, 0);
        }

        #[test]
        fn zeros_are_simple(parity in prop_oneof![Just(1i8), Just(-1i8)], triv in any::<bool>(), s0 in -1000i64..1000) {
            prop_assert!(arch_order(q(parity, triv, s0)).order <= 1);
        }
    }
}
