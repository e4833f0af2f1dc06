//! Points of weight space, in classical `(k, i)` and intrinsic `(j, s)`
//! coordinates.

use serde::Serialize;

use crate::characters::TeichCharacter;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

/// Checks that `(k, ε = ω^i)` gives a critical Eisenstein point:
/// `k ≥ 2`, `ε(-1) = (-1)^k`, and `k ≠ 2` when `ε` is trivial.
pub fn check_admissible(p: u64, k: i64, i: i64) -> Result<()> {
    let chi = TeichCharacter::new(p, i);
    if k < 2 {
        return Err(Error::Inadmissible(format!("weight k = {k} violates k >= 2")));
    }
    if (chi.exponent() as i64 + k) % 2 != 0 {
        return Err(Error::Inadmissible(format!(
            "eps = {chi} has eps(-1) = {} but (-1)^k = {} for k = {k}",
            chi.parity(),
            if k % 2 == 0 { 1 } else { -1 }
        )));
    }
    if k == 2 && chi.is_trivial() {
        return Err(Error::Inadmissible(
            "k = 2 with trivial eps is excluded (k != 2 when eps = 1)".into(),
        ));
    }
    Ok(())
}

/// Which character the ordinary twin of a critical point carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwinConvention {
    /// `w* = z^(2-k) ε^(-1)`.
    InverseCharacter,
    /// `w* = z^(2-k) ε`.
    SameCharacter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalWeight {
    pub k: i64,
    pub i: u64,
}

/// A continuous even character of Z_p^*: branch `ω^j` and coordinate `s`,
/// so that `w(z) = ω(z)^j <z>^s`. Arithmetic points `z^k ω^i` have
/// `j ≡ k + i (mod p-1)` and `s = k`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightPoint {
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none", flatten)]
    classical: Option<ClassicalWeight>,
    branch: u64,
    s: PadicNumber,
}

impl WeightPoint {
    /// `z ↦ z^k ω^i(z)`; requires the character to be even.
    pub fn classical(k: i64, i: i64, ctx: PadicContext) -> Result<Self> {
        let p = ctx.p();
        let chi = TeichCharacter::new(p, i);
        let m = (p - 1) as i64;
        if (k + chi.exponent() as i64) % 2 != 0 {
            return Err(Error::Inadmissible(format!(
                "z^{k} {chi} is odd; weight space consists of even characters"
            )));
        }
        Ok(WeightPoint {
            p,
            classical: Some(ClassicalWeight {
                k,
                i: chi.exponent(),
            }),
            branch: (k + chi.exponent() as i64).rem_euclid(m) as u64,
            s: ctx.integer(k),
        })
    }

    pub fn intrinsic(branch: i64, s: PadicNumber) -> Result<Self> {
        let p = s.p();
        let m = (p - 1) as i64;
        let j = branch.rem_euclid(m);
        if j % 2 != 0 {
            return Err(Error::OddBranch { p, branch });
        }
        Ok(WeightPoint {
            p,
            classical: None,
            branch: j as u64,
            s,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    pub fn coordinate(&self) -> &PadicNumber {
        &self.s
    }

    pub fn classical_coordinates(&self) -> Option<ClassicalWeight> {
        self.classical
    }

    pub fn character(&self) -> Option<TeichCharacter> {
        self.classical
            .map(|c| TeichCharacter::new(self.p, c.i as i64))
    }

    /// The trivial character `w = 1`, where ζ_p has its pole.
    pub fn is_trivial(&self) -> bool {
        self.branch == 0
            && match self.classical {
                Some(c) => c.k == 0,
                None => self.s.is_zero_to_precision(),
            }
    }

    /// `w(l) = l^k ε(l)` for `l` prime to p.
    pub fn eval_classical(&self, l: i64, ctx: PadicContext) -> Option<PadicNumber> {
        let c = self.classical?;
        let eps = TeichCharacter::new(self.p, c.i as i64).eval(l, ctx);
        let lk = if c.k >= 0 {
            ctx.integer(l).pow_u64(c.k as u64)
        } else {
            ctx.integer(l).pow_u64((-c.k) as u64).try_inv().ok()?
        };
        Some(eps * lk)
    }

    /// The ordinary partner `z^(2-k) ε^(∓1)` of the critical point at `z^k ε`.
    pub fn twin(&self, convention: TwinConvention) -> Option<WeightPoint> {
        let c = self.classical?;
        let i = match convention {
            TwinConvention::InverseCharacter => -(c.i as i64),
            TwinConvention::SameCharacter => c.i as i64,
        };
        WeightPoint::classical(2 - c.k, i, self.s.context()).ok()
    }
}
