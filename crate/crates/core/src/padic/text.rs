//! Base-p digit rendering (`3 + 4*5 + 2*5^2 + O(5^20)`), its parser, and
//! the JSON shape `{valuation, unit_digits_base_p, precision}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{PadicContext, PadicNumber};
use crate::error::{Error, Result};

fn power_term(p: u64, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => format!("*{p}"),
        _ => format!("*{p}^{e}"),
    }
}

pub(super) fn render(x: &PadicNumber) -> String {
    let p = x.p();
    let mut parts = Vec::new();
    if let Some(v) = x.valuation() {
        for (k, d) in x.unit_digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            parts.push(format!("{d}{}", power_term(p, v + k as i64)));
        }
    }
    parts.push(format!("O({p}^{})", x.absolute_precision()));
    parts.join(" + ")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses the output of `Display` back into `ctx`.
pub fn parse(s: &str, ctx: PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let terms: Vec<&str> = s.split('+').map(str::trim).collect();
    let (tail, digits) = terms.split_last().ok_or_else(|| parse_err("empty input"))?;
    let inner = tail
        .strip_prefix("O(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("missing O(p^N) tail in {s:?}")))?;
    let (base, prec) = inner
        .split_once('^')
        .ok_or_else(|| parse_err(format!("malformed tail {tail:?}")))?;
    if base.trim().parse::<u64>().ok() != Some(p) {
        return Err(parse_err(format!("tail prime {base:?} does not match p = {p}")));
    }
    let absprec: i64 = prec
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("bad precision {prec:?}")))?;
    if absprec > ctx.cap() {
        return Err(parse_err(format!(
            "precision {absprec} exceeds the context cap {}",
            ctx.cap()
        )));
    }

    let mut entries = Vec::with_capacity(digits.len());
    let mut last_exp: Option<i64> = None;
    for term in digits {
        let (d, e) = match term.split_once('*') {
            None => (*term, 0),
            Some((d, rest)) => {
                let e = match rest.split_once('^') {
                    None if rest.trim().parse::<u64>().ok() == Some(p) => 1,
                    Some((b, e)) if b.trim().parse::<u64>().ok() == Some(p) => e
                        .trim()
                        .parse::<i64>()
                        .map_err(|_| parse_err(format!("bad exponent in {term:?}")))?,
                    _ => return Err(parse_err(format!("bad power of p in {term:?}"))),
                };
                (d, e)
            }
        };
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad digit in {term:?}")))?;
        if d == 0 || d >= p {
            return Err(parse_err(format!("digit {d} out of range 1..{p}")));
        }
        if last_exp.is_some_and(|l| e <= l) || e >= absprec {
            return Err(parse_err(format!("exponent {e} out of order or past the tail")));
        }
        last_exp = Some(e);
        entries.push((d, e));
    }

    let Some(&(_, low)) = entries.first() else {
        return Ok(PadicNumber::zero_with(ctx, absprec));
    };
    let mut x = BigInt::zero();
    for (d, e) in entries {
        x += BigInt::from(d) * BigInt::from(ctx.prime_power((e - low) as u32));
    }
    Ok(PadicNumber::assemble(ctx, x, low, absprec))
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PadicNumber", 3)?;
        st.serialize_field("valuation", &self.valuation())?;
        st.serialize_field("unit_digits_base_p", &self.unit_digits())?;
        st.serialize_field("precision", &self.absolute_precision())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn renders_digits_and_tail() {
        let c = PadicContext::new(5, 4).unwrap();
        assert_eq!(c.integer(3 + 4 * 5 + 2 * 25).to_string(), "3 + 4*5 + 2*5^2 + O(5^4)");
        assert_eq!(c.zero().to_string(), "O(5^4)");
        let tenth = c.rational(&BigRational::new(1.into(), 10.into()));
        assert!(tenth.to_string().starts_with("3*5^-1 + "));
    }

    #[test]
    fn json_shape() {
        let c = PadicContext::new(7, 3).unwrap();
        let j = serde_json::to_string(&c.integer(8)).unwrap();
        assert_eq!(j, r#"{"valuation":0,"unit_digits_base_p":[1,1,0],"precision":3}"#);
        let z = serde_json::to_string(&c.zero()).unwrap();
        assert_eq!(z, r#"{"valuation":null,"unit_digits_base_p":[],"precision":3}"#);
    }

    #[test]
    fn rejects_malformed() {
        let c = PadicContext::new(5, 4).unwrap();
        for bad in ["", "3 + 4*5", "3 + O(7^4)", "7 + O(5^4)", "1*5^2 + 1*5 + O(5^4)", "1 + O(5^9)", "1*5^4 + O(5^4)"] {
            assert!(parse(bad, c).is_err(), "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn parse_inverts_render(n in -10_000_000i64..10_000_000, d in 1i64..10_000, shift in -3i64..3, trunc in 1i64..16) {
            let c = PadicContext::new(7, 15).unwrap();
            let x = (c.rational(&BigRational::new(n.into(), d.into())) * c.p_power(shift)).truncate(trunc);
            let back = parse(&x.to_string(), c).unwrap();
            prop_assert_eq!(back.absolute_precision(), x.absolute_precision());
            prop_assert_eq!(back.valuation(), x.valuation());
            prop_assert_eq!(back.unit(), x.unit());
        }
    }
}
